//! Exact maximum of a functional over deterministic local strategies.

use crate::error::{Error, Result};
use crate::functional::InequalityFunctional;

pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Maximizing deterministic strategy: `a = alice[x]`, `b = bob[y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOptimum {
    pub value: f64,
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
    pub vertices: u128,
}

fn strategy(mut index: u128, outcomes: usize, settings: usize) -> Vec<usize> {
    let mut s = vec![0; settings];
    for slot in s.iter_mut().rev() {
        *slot = (index % outcomes as u128) as usize;
        index /= outcomes as u128;
    }
    s
}

/// Enumerates every vertex; ties go to the lexicographically smallest strategy pair.
pub fn classical_max(f: &InequalityFunctional) -> Result<ClassicalOptimum> {
    let s = f.scenario();
    let na = (s.outcomes_a as u128).pow(s.settings_x as u32);
    let nb = (s.outcomes_b as u128).pow(s.settings_y as u32);
    let count = na * nb;
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge { count, limit: ENUMERATION_LIMIT });
    }
    let bobs: Vec<Vec<usize>> = (0..nb).map(|j| strategy(j, s.outcomes_b, s.settings_y)).collect();
    let mut best: Option<ClassicalOptimum> = None;
    for i in 0..na {
        let alice = strategy(i, s.outcomes_a, s.settings_x);
        for bob in &bobs {
            let mut value = -f.offset();
            for (x, &a) in alice.iter().enumerate() {
                for (y, &b) in bob.iter().enumerate() {
                    value += f.coefficient(a, b, x, y);
                }
            }
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(ClassicalOptimum { value, alice: alice.clone(), bob: bob.clone(), vertices: count });
            }
        }
    }
    Ok(best.expect("at least one vertex"))
}

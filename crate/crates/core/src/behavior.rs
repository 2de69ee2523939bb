//! Conditional probability tables `p(ab|xy)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{born_probability, Assemblage, Povm};

/// Alphabet sizes of a two-party prepare-and-measure scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scenario {
    pub outcomes_a: usize,
    pub outcomes_b: usize,
    pub settings_x: usize,
    pub settings_y: usize,
}

impl Scenario {
    pub const CGLMP4: Scenario = Scenario { outcomes_a: 4, outcomes_b: 4, settings_x: 2, settings_y: 2 };
    pub const CHSH: Scenario = Scenario { outcomes_a: 2, outcomes_b: 2, settings_x: 2, settings_y: 2 };

    pub fn len(&self) -> usize {
        self.outcomes_a * self.outcomes_b * self.settings_x * self.settings_y
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        debug_assert!(a < self.outcomes_a && b < self.outcomes_b);
        debug_assert!(x < self.settings_x && y < self.settings_y);
        ((x * self.settings_y + y) * self.outcomes_a + a) * self.outcomes_b + b
    }

    /// All `(a, b, x, y)` in storage order.
    pub fn keys(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        (0..self.settings_x).flat_map(move |x| {
            (0..self.settings_y).flat_map(move |y| {
                (0..self.outcomes_a)
                    .flat_map(move |a| (0..self.outcomes_b).map(move |b| (a, b, x, y)))
            })
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} outcomes, {}x{} settings",
            self.outcomes_a, self.outcomes_b, self.settings_x, self.settings_y
        )
    }
}

/// Tolerances used when validating a behavior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorTolerance {
    pub range: f64,
    pub normalization: f64,
    pub no_signaling: f64,
}

impl BehaviorTolerance {
    pub const STRICT: BehaviorTolerance =
        BehaviorTolerance { range: 1e-9, normalization: 1e-8, no_signaling: 1e-8 };

    pub fn uniform(tol: f64) -> Self {
        Self { range: tol, normalization: tol, no_signaling: tol }
    }
}

impl Default for BehaviorTolerance {
    fn default() -> Self {
        Self::STRICT
    }
}

/// Anything that can supply (possibly missing) probabilities on a scenario.
pub trait ProbabilitySource {
    fn scenario(&self) -> Scenario;
    fn probability(&self, a: usize, b: usize, x: usize, y: usize) -> Option<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<f64>,
}

impl Behavior {
    pub fn new(scenario: Scenario, table: Vec<f64>, tol: &BehaviorTolerance) -> Result<Self> {
        let b = Self::raw(scenario, table)?;
        b.validate(tol)?;
        Ok(b)
    }

    /// Shape-checked but otherwise unvalidated table (e.g. simulated noisy data).
    pub fn raw(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        if table.len() != scenario.len() {
            return Err(Error::TableSize { expected: scenario.len(), found: table.len() });
        }
        Ok(Self { scenario, table })
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let v = 1.0 / (scenario.outcomes_a * scenario.outcomes_b) as f64;
        Self { scenario, table: vec![v; scenario.len()] }
    }

    /// Deterministic local behavior `a = alice[x]`, `b = bob[y]`.
    pub fn deterministic(scenario: Scenario, alice: &[usize], bob: &[usize]) -> Self {
        let mut table = vec![0.0; scenario.len()];
        for x in 0..scenario.settings_x {
            for y in 0..scenario.settings_y {
                table[scenario.index(alice[x], bob[y], x, y)] = 1.0;
            }
        }
        Self { scenario, table }
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn get(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.table[self.scenario.index(a, b, x, y)]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// `λ·self + (1−λ)·other`
    pub fn mix(&self, lambda: f64, other: &Behavior) -> Result<Behavior> {
        if other.scenario != self.scenario {
            return Err(Error::AlphabetMismatch {
                expected: self.scenario.to_string(),
                found: other.scenario.to_string(),
            });
        }
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(p, q)| lambda * p + (1.0 - lambda) * q)
            .collect();
        Ok(Self { scenario: self.scenario, table })
    }

    pub fn validate(&self, tol: &BehaviorTolerance) -> Result<()> {
        validate_source(self, tol)
    }
}

impl ProbabilitySource for Behavior {
    fn scenario(&self) -> Scenario {
        self.scenario
    }

    fn probability(&self, a: usize, b: usize, x: usize, y: usize) -> Option<f64> {
        Some(self.get(a, b, x, y))
    }
}

/// A behavior with explicitly missing entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialBehavior {
    scenario: Scenario,
    table: Vec<Option<f64>>,
}

impl PartialBehavior {
    pub fn empty(scenario: Scenario) -> Self {
        Self { scenario, table: vec![None; scenario.len()] }
    }

    pub fn set(&mut self, a: usize, b: usize, x: usize, y: usize, value: Option<f64>) {
        let i = self.scenario.index(a, b, x, y);
        self.table[i] = value;
    }

    pub fn is_complete(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    pub fn missing(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        self.scenario.keys().filter(|&(a, b, x, y)| self.probability(a, b, x, y).is_none())
    }

    pub fn validate(&self, tol: &BehaviorTolerance) -> Result<()> {
        validate_source(self, tol)
    }

    pub fn to_behavior(&self, tol: &BehaviorTolerance) -> Result<Behavior> {
        if let Some((a, b, x, y)) = self.missing().next() {
            return Err(Error::MissingEntry { a, b, x, y });
        }
        Behavior::new(self.scenario, self.table.iter().map(|p| p.unwrap_or(0.0)).collect(), tol)
    }
}

impl From<&Behavior> for PartialBehavior {
    fn from(b: &Behavior) -> Self {
        Self { scenario: b.scenario, table: b.table.iter().copied().map(Some).collect() }
    }
}

impl ProbabilitySource for PartialBehavior {
    fn scenario(&self) -> Scenario {
        self.scenario
    }

    fn probability(&self, a: usize, b: usize, x: usize, y: usize) -> Option<f64> {
        self.table[self.scenario.index(a, b, x, y)]
    }
}

/// Range, normalization and no-signaling checks; sums are only checked where complete.
pub fn validate_source<S: ProbabilitySource + ?Sized>(src: &S, tol: &BehaviorTolerance) -> Result<()> {
    let s = src.scenario();
    for (a, b, x, y) in s.keys() {
        if let Some(value) = src.probability(a, b, x, y) {
            if !value.is_finite() || value < -tol.range || value > 1.0 + tol.range {
                return Err(Error::OutOfRange { a, b, x, y, value });
            }
        }
    }
    for x in 0..s.settings_x {
        for y in 0..s.settings_y {
            let it = (0..s.outcomes_a)
                .flat_map(|a| (0..s.outcomes_b).map(move |b| (a, b)))
                .map(|(a, b)| src.probability(a, b, x, y));
            if let Some(total) = sum(it) {
                if (total - 1.0).abs() > tol.normalization {
                    return Err(Error::Normalization { x, y, sum: total });
                }
            }
        }
    }
    // Alice marginal independent of y
    for x in 0..s.settings_x {
        for a in 0..s.outcomes_a {
            let marginals: Vec<f64> = (0..s.settings_y)
                .filter_map(|y| sum((0..s.outcomes_b).map(|b| src.probability(a, b, x, y))))
                .collect();
            check_spread(&marginals, tol.no_signaling, "preparation")?;
        }
    }
    // Bob marginal independent of x
    for y in 0..s.settings_y {
        for b in 0..s.outcomes_b {
            let marginals: Vec<f64> = (0..s.settings_x)
                .filter_map(|x| sum((0..s.outcomes_a).map(|a| src.probability(a, b, x, y))))
                .collect();
            check_spread(&marginals, tol.no_signaling, "measurement")?;
        }
    }
    Ok(())
}

fn sum(mut xs: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    xs.try_fold(0.0, |acc, p| p.map(|p| acc + p))
}

fn check_spread(values: &[f64], tol: f64, side: &'static str) -> Result<()> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.len() > 1 && hi - lo > tol {
        return Err(Error::NoSignaling { side, deviation: hi - lo });
    }
    Ok(())
}

/// `p(ab|xy) = Tr(σ_{a|x} M_{b|y})`
pub fn behavior_from(assemblage: &Assemblage, povms: &[Povm]) -> Result<Behavior> {
    let first = povms.first().ok_or(Error::Empty("no measurements"))?;
    let scenario = Scenario {
        outcomes_a: assemblage.outcomes(),
        outcomes_b: first.outcomes(),
        settings_x: assemblage.settings(),
        settings_y: povms.len(),
    };
    let mut table = vec![0.0; scenario.len()];
    for (y, povm) in povms.iter().enumerate() {
        if povm.outcomes() != scenario.outcomes_b {
            return Err(Error::AlphabetMismatch {
                expected: format!("{} outcomes", scenario.outcomes_b),
                found: format!("{} outcomes", povm.outcomes()),
            });
        }
        for (a, b, x, _) in scenario.keys().filter(|k| k.3 == y) {
            table[scenario.index(a, b, x, y)] = born_probability(assemblage.sigma(a, x), povm.effect(b))?;
        }
    }
    Behavior::new(scenario, table, &BehaviorTolerance::STRICT)
}

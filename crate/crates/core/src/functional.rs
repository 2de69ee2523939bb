//! Affine functionals on behaviors: CGLMP with four outcomes and CHSH.

use crate::behavior::{Behavior, ProbabilitySource, Scenario};
use crate::error::{Error, Result};

/// `value(p) = Σ c(a,b,x,y)·p(ab|xy) − offset`
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityFunctional {
    name: String,
    scenario: Scenario,
    coefficients: Vec<f64>,
    offset: f64,
}

impl InequalityFunctional {
    pub fn new(name: impl Into<String>, scenario: Scenario, coefficients: Vec<f64>, offset: f64) -> Result<Self> {
        if coefficients.len() != scenario.len() {
            return Err(Error::TableSize { expected: scenario.len(), found: coefficients.len() });
        }
        Ok(Self { name: name.into(), scenario, coefficients, offset })
    }

    pub fn from_fn(
        name: impl Into<String>,
        scenario: Scenario,
        offset: f64,
        c: impl Fn(usize, usize, usize, usize) -> f64,
    ) -> Self {
        let coefficients = scenario.keys().map(|(a, b, x, y)| c(a, b, x, y)).collect();
        Self { name: name.into(), scenario, coefficients, offset }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn coefficient(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.coefficients[self.scenario.index(a, b, x, y)]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Evaluates on any source; entries with zero coefficient may be missing.
    pub fn evaluate<S: ProbabilitySource + ?Sized>(&self, src: &S) -> Result<f64> {
        if src.scenario() != self.scenario {
            return Err(Error::AlphabetMismatch {
                expected: self.scenario.to_string(),
                found: src.scenario().to_string(),
            });
        }
        let mut acc = 0.0;
        for (i, (a, b, x, y)) in self.scenario.keys().enumerate() {
            let c = self.coefficients[i];
            if c == 0.0 {
                continue;
            }
            let p = src.probability(a, b, x, y).ok_or(Error::MissingEntry { a, b, x, y })?;
            acc += c * p;
        }
        Ok(acc - self.offset)
    }
}

/// `I₄ = p(a≤b|00) + p(a≥b|01) + p(a≥b|10) − p(a≥b|11) − 2`
pub fn cglmp4() -> InequalityFunctional {
    InequalityFunctional::from_fn("cglmp4", Scenario::CGLMP4, 2.0, |a, b, x, y| match (x, y) {
        (0, 0) => f64::from(u8::from(a <= b)),
        (1, 1) => -f64::from(u8::from(a >= b)),
        _ => f64::from(u8::from(a >= b)),
    })
}

/// `E₀₀ + E₀₁ + E₁₀ − E₁₁` with `E_xy = Σ (−1)^{a+b} p(ab|xy)`.
pub fn chsh() -> InequalityFunctional {
    InequalityFunctional::from_fn("chsh", Scenario::CHSH, 0.0, |a, b, x, y| {
        let parity = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
        let sign = if x == 1 && y == 1 { -1.0 } else { 1.0 };
        parity * sign
    })
}

pub fn by_name(name: &str) -> Result<InequalityFunctional> {
    match name {
        "cglmp4" => Ok(cglmp4()),
        "chsh" => Ok(chsh()),
        other => Err(Error::UnknownFunctional(other.to_string())),
    }
}

pub fn cglmp4_value<S: ProbabilitySource + ?Sized>(src: &S) -> Result<f64> {
    cglmp4().evaluate(src)
}

/// `S = |E₀₀ + E₀₁ + E₁₀ − E₁₁|`
pub fn chsh_value<S: ProbabilitySource + ?Sized>(src: &S) -> Result<f64> {
    chsh().evaluate(src).map(f64::abs)
}

/// Correlator `E_xy` of a two-outcome behavior.
pub fn correlator(b: &Behavior, x: usize, y: usize) -> f64 {
    (0..2)
        .flat_map(|a| (0..2).map(move |bb| (a, bb)))
        .map(|(a, bb)| if (a + bb) % 2 == 0 { b.get(a, bb, x, y) } else { -b.get(a, bb, x, y) })
        .sum()
}

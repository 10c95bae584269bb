//! Truncated power series written in the divided-power basis `x^α / α!`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::events::{SimpleWord, Sym};
use crate::scalar::{self, Scalar};
use crate::series::SimpleSeries;

use super::RealizeError;

/// Exponent multi-index, one entry per variable.
pub type MultiIndex = Vec<u32>;

/// `f = Σ d_α x^α/α!` truncated at total degree `D`.
///
/// The stored value for `α` is the divided coordinate `d_α`; the ordinary
/// coefficient of `x^α` is `d_α / α!`. Zero coordinates are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividedPowerSeries {
    variables: usize,
    degree: u32,
    coords: BTreeMap<MultiIndex, Scalar>,
}

fn alpha_factorial(alpha: &[u32]) -> Scalar {
    alpha
        .iter()
        .fold(scalar::one(), |acc, &a| acc * scalar::factorial(a))
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn total(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

/// All multi-indices over `n` variables with total degree at most `d`.
pub fn multi_indices(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, left: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out.sort_by(|x, y| total(x).cmp(&total(y)).then_with(|| y.cmp(x)));
    out
}

impl DividedPowerSeries {
    pub fn zero(variables: usize, degree: u32) -> Self {
        Self {
            variables,
            degree,
            coords: BTreeMap::new(),
        }
    }

    /// From divided coordinates `d_α`.
    pub fn from_divided(
        variables: usize,
        degree: u32,
        entries: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Result<Self, RealizeError> {
        let mut f = Self::zero(variables, degree);
        for (alpha, d) in entries {
            f.check_index(&alpha)?;
            if !d.is_zero() {
                f.coords.insert(alpha, d);
            }
        }
        Ok(f)
    }

    /// From ordinary coefficients `c_α` of `x^α`.
    pub fn from_coefficients(
        variables: usize,
        degree: u32,
        entries: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Result<Self, RealizeError> {
        let entries: Vec<_> = entries
            .into_iter()
            .map(|(a, c)| {
                let d = c * alpha_factorial(&a);
                (a, d)
            })
            .collect();
        Self::from_divided(variables, degree, entries)
    }

    fn check_index(&self, alpha: &[u32]) -> Result<(), RealizeError> {
        if alpha.len() != self.variables || total(alpha) > self.degree {
            return Err(RealizeError::BadMultiIndex {
                index: alpha.to_vec(),
                variables: self.variables,
                degree: self.degree,
            });
        }
        Ok(())
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Nonzero divided coordinates.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coords.iter()
    }

    pub fn divided_coordinate(&self, alpha: &[u32]) -> Scalar {
        self.coords.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Ordinary coefficient `c_α` of `x^α`.
    pub fn coefficient(&self, alpha: &[u32]) -> Scalar {
        self.divided_coordinate(alpha) / alpha_factorial(alpha)
    }

    /// Constant term.
    pub fn counit(&self) -> Scalar {
        self.divided_coordinate(&vec![0; self.variables])
    }

    /// `∂/∂x_var`: an index shift on divided coordinates. The degree drops by one.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.variables, "variable {var} out of range");
        let degree = self.degree.saturating_sub(1);
        let coords = self
            .coords
            .iter()
            .filter(|(a, _)| a[var] > 0)
            .map(|(a, d)| {
                let mut b = a.clone();
                b[var] -= 1;
                (b, d.clone())
            })
            .filter(|(b, _)| total(b) <= degree)
            .collect();
        Self {
            variables: self.variables,
            degree,
            coords,
        }
    }

    /// Apply `∂^α`.
    pub fn derivative_by(&self, alpha: &[u32]) -> Self {
        let mut f = self.clone();
        for (var, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                f = f.derivative(var);
            }
        }
        f
    }

    /// Product in divided coordinates: `(fg)_γ = Σ_{α+β=γ} C(γ,α) f_α g_β`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.variables, other.variables, "variable count mismatch");
        let degree = self.degree.min(other.degree);
        let mut coords: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (a, fa) in &self.coords {
            for (b, gb) in &other.coords {
                let g: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if total(&g) > degree {
                    continue;
                }
                let c: BigInt = g.iter().zip(a).map(|(&gi, &ai)| binomial(gi, ai)).product();
                *coords.entry(g).or_insert_with(Scalar::zero) += Scalar::from_integer(c) * fa * gb;
            }
        }
        coords.retain(|_, v| !v.is_zero());
        Self {
            variables: self.variables,
            degree,
            coords,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.variables, other.variables, "variable count mismatch");
        let degree = self.degree.min(other.degree);
        let mut coords: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (a, v) in self.coords.iter().chain(&other.coords) {
            if total(a) <= degree {
                *coords.entry(a.clone()).or_insert_with(Scalar::zero) += v;
            }
        }
        coords.retain(|_, v| !v.is_zero());
        Self {
            variables: self.variables,
            degree,
            coords,
        }
    }
}

/// `f` with `c_k = p(e^k)/k!` for `k ≤ degree`, i.e. divided coordinates `p(e^k)`.
pub fn differential_representation(p: &SimpleSeries, degree: u32) -> Result<DividedPowerSeries, RealizeError> {
    if p.space().len() != 1 {
        return Err(RealizeError::UnsupportedGenerators(p.space().len()));
    }
    if degree as usize > p.truncation() {
        return Err(RealizeError::HorizonTooShort {
            needed: degree as usize,
            truncation: p.truncation(),
        });
    }
    let entries = (0..=degree).map(|k| {
        let w: SimpleWord = std::iter::repeat(Sym(0)).take(k as usize).collect();
        (vec![k], p.coeff(&w))
    });
    DividedPowerSeries::from_divided(1, degree, entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationViolation {
    pub exponent: u32,
    #[serde(with = "scalar::serde_text")]
    pub expected: Scalar,
    #[serde(with = "scalar::serde_text")]
    pub actual: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationReport {
    pub degree: u32,
    pub checked: usize,
    pub violations: Vec<EvaluationViolation>,
}

impl EvaluationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compare `ε(f ↼ e^k)` against `p(e^k)` for `k ≤ degree`.
pub fn verify_evaluation(
    f: &DividedPowerSeries,
    p: &SimpleSeries,
    degree: u32,
) -> Result<EvaluationReport, RealizeError> {
    if p.space().len() != 1 || f.variables() != 1 {
        return Err(RealizeError::UnsupportedGenerators(p.space().len()));
    }
    let limit = degree.min(f.degree()).min(p.truncation() as u32);
    if limit < degree {
        return Err(RealizeError::HorizonTooShort {
            needed: degree as usize,
            truncation: limit as usize,
        });
    }
    let mut violations = Vec::new();
    let mut g = f.clone();
    let mut w = SimpleWord::empty();
    for k in 0..=degree {
        if k > 0 {
            g = g.derivative(0);
            w.push(Sym(0));
        }
        let actual = g.counit();
        let expected = p.coeff(&w);
        if actual != expected {
            violations.push(EvaluationViolation {
                exponent: k,
                expected,
                actual,
            });
        }
    }
    Ok(EvaluationReport {
        degree,
        checked: degree as usize + 1,
        violations,
    })
}

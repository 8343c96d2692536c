//! Base-2 logarithms of counts, capacity, quadratic regression, the explicit
//! bound inequality, and side-by-side reports against the reference tables.

pub mod reference;
mod tables;

use std::collections::BTreeMap;

use nalgebra::{Matrix3, Vector3};
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::BoundsError;

pub use tables::{
    discrepancy_report, table_report, Cell, CellStatus, ComputedCounts, Discrepancy, Row,
    TableId, TableReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rounding {
    /// Ceiling to an integer.
    Up,
    /// Floor to an integer.
    Down,
    /// Nearest tenth, ties to even.
    OneDecimal,
    /// Floor to a tenth.
    DownOneDecimal,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    #[serde(with = "decimal::big")]
    pub source: BigUint,
    pub exact: f64,
    pub rounding: Rounding,
    /// `exact` after rounding.
    pub value: f64,
}

impl LogValue {
    /// Rendering as in the tables: integers without a decimal point.
    pub fn text(&self) -> String {
        match self.rounding {
            Rounding::Up | Rounding::Down => format!("{}", self.value as i64),
            Rounding::OneDecimal | Rounding::DownOneDecimal => format_tenths(self.value),
            Rounding::Exact => format!("{}", self.value),
        }
    }
}

fn format_tenths(v: f64) -> String {
    let tenths = (v * 10.0).round() as i64;
    if tenths % 10 == 0 {
        format!("{}", tenths / 10)
    } else {
        format!("{}.{}", tenths / 10, (tenths % 10).abs())
    }
}

/// `log₂ v` from the top 64 bits and the bit length.
pub fn log2(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return (v.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

/// `⌈log₂ v⌉`, exact.
pub fn ceil_log2(v: &BigUint) -> u64 {
    let bits = v.bits();
    if v.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}

/// `⌊log₂ v⌋`, exact.
pub fn floor_log2(v: &BigUint) -> u64 {
    v.bits() - 1
}

pub fn log_value(v: &BigUint, rounding: Rounding) -> Result<LogValue, BoundsError> {
    if v.is_zero() {
        return Err(BoundsError::NonPositive);
    }
    let exact = log2(v);
    let value = match rounding {
        Rounding::Up => ceil_log2(v) as f64,
        Rounding::Down => floor_log2(v) as f64,
        Rounding::OneDecimal => (exact * 10.0).round_ties_even() / 10.0,
        Rounding::DownOneDecimal => (exact * 10.0).floor() / 10.0,
        Rounding::Exact => exact,
    };
    Ok(LogValue {
        source: v.clone(),
        exact,
        rounding,
        value,
    })
}

pub fn log_table(
    values: &BTreeMap<u32, BigUint>,
    rounding: Rounding,
) -> Result<BTreeMap<u32, LogValue>, BoundsError> {
    values
        .iter()
        .map(|(&d, v)| log_value(v, rounding).map(|l| (d, l)))
        .collect()
}

/// `2 f̃(d) / (d(d−1))` on the unrounded logarithm.
pub fn capacity(d: u32, f_tilde: &LogValue) -> Result<f64, BoundsError> {
    if d < 2 {
        return Err(BoundsError::CapacityUndefined(d));
    }
    let d = f64::from(d);
    Ok(2.0 * f_tilde.exact / (d * (d - 1.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub points: Vec<(f64, f64)>,
    pub residuals: Vec<f64>,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        self.a * x * x + self.b * x + self.c
    }

    /// `Σ rᵢ xᵢᵏ` for k = 0, 1, 2, each divided by `Σ |yᵢ| xᵢᵏ`.
    pub fn orthogonality(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let (mut dot, mut scale) = (0.0, 0.0);
            for ((x, y), r) in self.points.iter().zip(&self.residuals) {
                let w = x.powi(k as i32);
                dot += r * w;
                scale += y.abs() * w.abs();
            }
            *slot = if scale == 0.0 { dot.abs() } else { (dot / scale).abs() };
        }
        out
    }
}

/// Least squares `a x² + b x + c` through the normal equations.
pub fn quadratic_fit(points: &[(f64, f64)]) -> Result<FitResult, BoundsError> {
    if points.len() < 3 {
        return Err(BoundsError::TooFewPoints(points.len()));
    }
    let mut gram = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for &(x, y) in points {
        let row = Vector3::new(x * x, x, 1.0);
        gram += row * row.transpose();
        rhs += row * y;
    }
    let coef = gram.lu().solve(&rhs).ok_or(BoundsError::SingularDesign)?;
    if !coef.iter().all(|c| c.is_finite()) {
        return Err(BoundsError::SingularDesign);
    }
    let (a, b, c) = (coef[0], coef[1], coef[2]);
    let residuals = points
        .iter()
        .map(|&(x, y)| y - (a * x * x + b * x + c))
        .collect();
    Ok(FitResult {
        a,
        b,
        c,
        points: points.to_vec(),
        residuals,
    })
}

/// Fit over the dilations in `lo..=hi` of a log table.
pub fn fit_window(logs: &BTreeMap<u32, LogValue>, lo: u32, hi: u32, rounded: bool) -> Result<FitResult, BoundsError> {
    let points: Vec<(f64, f64)> = logs
        .range(lo..=hi)
        .map(|(&d, l)| (f64::from(d), if rounded { l.value } else { l.exact }))
        .collect();
    quadratic_fit(&points)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitBoundReport {
    pub d: u32,
    pub lower: f64,
    pub f_tilde: f64,
    pub upper: f64,
    pub lower_slack: f64,
    pub upper_slack: f64,
}

/// `¼d² − ½d − (d−2) log₂ d ≤ f̃(d) ≤ ¾d² + 3d/2 − ¾`.
pub fn explicit_bound_check(d: u32, f_tilde: &BigUint) -> Result<ExplicitBoundReport, BoundsError> {
    let f = log_value(f_tilde, Rounding::Exact)?.exact;
    let x = f64::from(d);
    let lower = x * x / 4.0 - x / 2.0 - (x - 2.0) * x.log2();
    let upper = 0.75 * x * x + 1.5 * x - 0.75;
    if f < lower || f > upper {
        return Err(BoundsError::ExplicitBoundViolation {
            d,
            detail: format!("{lower:.4} <= {f:.4} <= {upper:.4} fails"),
        });
    }
    Ok(ExplicitBoundReport {
        d,
        lower,
        f_tilde: f,
        upper,
        lower_slack: f - lower,
        upper_slack: upper - f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn rounding_modes() {
        assert_eq!(log_value(&b(7), Rounding::OneDecimal).unwrap().text(), "2.8");
        assert_eq!(log_value(&b(24), Rounding::Up).unwrap().text(), "5");
        assert_eq!(log_value(&b(1), Rounding::Up).unwrap().text(), "0");
        assert_eq!(log_value(&b(96), Rounding::DownOneDecimal).unwrap().text(), "6.5");
        assert_eq!(log_value(&b(8), Rounding::Down).unwrap().value, 3.0);
        assert!(log_value(&b(0), Rounding::Up).is_err());
    }

    #[test]
    fn big_log_is_accurate() {
        let v = BigUint::from(3u32).pow(200);
        assert!((log2(&v) - 200.0 * 3f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn capacity_values() {
        let two = log_value(&b(2), Rounding::Exact).unwrap();
        assert_eq!(capacity(2, &two).unwrap(), 1.0);
        assert!(capacity(1, &two).is_err());
    }

    #[test]
    fn exact_quadratic_is_recovered() {
        let pts: Vec<(f64, f64)> = (1..=5)
            .map(|d| {
                let x = f64::from(d);
                (x, 2.0 * x * x + 3.0 * x + 1.0)
            })
            .collect();
        let fit = quadratic_fit(&pts).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-9);
        assert!((fit.b - 3.0).abs() < 1e-9);
        assert!((fit.c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn singular_design_is_rejected() {
        let pts = [(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)];
        assert_eq!(quadratic_fit(&pts), Err(BoundsError::SingularDesign));
        assert_eq!(quadratic_fit(&pts[..2]), Err(BoundsError::TooFewPoints(2)));
    }

    #[test]
    fn explicit_bounds_at_nine() {
        let r = explicit_bound_check(9, &b(422_664_577_207)).unwrap();
        assert!((r.lower + 6.44).abs() < 0.01);
        assert!((r.upper - 73.5).abs() < 1e-12);
    }
}

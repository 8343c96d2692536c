//! Closed-form lower and upper bounds on triangulation counts, lattice point
//! and edge counts of the half region, and the sandwich between half-region
//! and symmetric counts.
//!
//! Upper bounds are carried as exponents of two and never expanded.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::reference;
use crate::decimal;
use crate::enumeration::Triangulation;
use crate::error::BoundsError;
use crate::geometry::{lattice_points, LatticePoint, Region};

/// Central binomial coefficient `C(2n, n)`: monotone lattice paths through a
/// strip of width one and length `n`.
pub fn strip_count(n: u32) -> BigUint {
    binomial(BigUint::from(2 * n), BigUint::from(n))
}

fn central_factor(d: u32) -> BigUint {
    if d % 2 == 1 {
        binomial(BigUint::from(d - 1), BigUint::from((d - 1) / 2))
    } else {
        BigUint::one()
    }
}

/// Product of squared strip counts over the strips on either side of the
/// axis, times the central vertical strip for odd `d`.
pub fn lower_bound_1(d: u32) -> BigUint {
    (0..d / 2).fold(central_factor(d), |acc, n| {
        let g = strip_count(n);
        acc * &g * &g
    })
}

/// How the per-strip factor of the second lower bound is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum L2Variant {
    /// `(Σ_{i≤n} C(2i,i))²`, which reproduces the reference table for d ≥ 4.
    #[default]
    TableMatching,
    /// `Σ_{i≤n} C(2i,i)²`.
    AsPrinted,
}

/// Lower bound where each strip may end at any height up to its own.
pub fn lower_bound_2(d: u32, variant: L2Variant) -> BigUint {
    (0..d / 2).fold(central_factor(d), |acc, n| {
        let factor = match variant {
            L2Variant::TableMatching => {
                let s: BigUint = (0..=n).map(strip_count).sum();
                &s * &s
            }
            L2Variant::AsPrinted => (0..=n).map(|i| {
                let g = strip_count(i);
                &g * &g
            }).sum(),
        };
        acc * factor
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCountRow {
    pub d: u32,
    pub n_formula: u64,
    pub nb_formula: u64,
    pub n_measured: u64,
    pub nb_measured: u64,
    pub n_match: bool,
    pub nb_match: bool,
}

/// Lattice points of the half region by the closed forms.
pub fn n_formula(d: u32) -> u64 {
    let d = u64::from(d);
    if d % 2 == 0 {
        d * d / 4 + d + 1
    } else {
        (d * d + 4 * d + 3) / 4
    }
}

/// Boundary lattice points of the half region by the closed forms.
pub fn nb_formula(d: u32) -> u64 {
    let d = u64::from(d);
    if d % 2 == 0 {
        2 * d
    } else {
        2 * d + 1
    }
}

pub fn point_counts(d: u32) -> PointCountRow {
    let config = lattice_points(Region::half(d));
    let n_measured = config.len() as u64;
    let nb_measured = config.boundary_point_count() as u64;
    let (n_formula, nb_formula) = (n_formula(d), nb_formula(d));
    PointCountRow {
        d,
        n_formula,
        nb_formula,
        n_measured,
        nb_measured,
        n_match: n_formula == n_measured,
        nb_match: nb_formula == nb_measured,
    }
}

/// Unimodular triangulation of the half region from unit cells: interior
/// cells are cut along the diagonal through their lower-left corner, cells
/// clipped by the axis keep their lower-right triangle and cells clipped by
/// the hypotenuse keep their lower-left triangle.
pub fn standard_half_triangulation(d: u32) -> Triangulation {
    let region = Region::half(d);
    let config = lattice_points(region);
    let di = i64::from(d);
    let p = LatticePoint::new;
    let mut simplices = Vec::new();
    let mut add = |a, b, c| {
        if let Some(s) = config.simplex_at(a, b, c) {
            simplices.push(s);
        }
    };
    for y in 0..di {
        for x in y..di {
            let (ll, lr, ul, ur) = (p(x, y), p(x + 1, y), p(x, y + 1), p(x + 1, y + 1));
            let inside = |q: LatticePoint| region.contains(q);
            match (inside(ll), inside(lr), inside(ul), inside(ur)) {
                (true, true, true, true) => {
                    add(ll, lr, ur);
                    add(ll, ur, ul);
                }
                (true, true, true, false) => add(ll, lr, ul),
                (true, true, false, true) => add(ll, lr, ur),
                _ => {}
            }
        }
    }
    Triangulation::new(region, simplices)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub total: u64,
    pub interior: u64,
}

/// Distinct edges of [`standard_half_triangulation`]. For `d = 1` the region
/// is a segment and its single edge lies on the boundary.
pub fn edge_counts(d: u32) -> EdgeCounts {
    let t = standard_half_triangulation(d);
    let config = lattice_points(t.region);
    let mut edges: BTreeSet<_> = t.edges();
    if t.is_empty() {
        edges.extend(
            (1..config.len() as u32).map(|i| crate::geometry::Edge::new(i - 1, i)),
        );
    }
    let interior = edges.iter().filter(|e| !config.is_boundary_edge(**e)).count() as u64;
    EdgeCounts {
        total: edges.len() as u64,
        interior,
    }
}

/// `3n − n_b − 3` from measured point counts.
pub fn pick_edge_count(n: u64, nb: u64) -> u64 {
    3 * n - nb - 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBoundExponents {
    /// `¾d² − 2d − 3` (even) or `¾d² + d − 7/4` (odd).
    #[serde(with = "decimal::ratio")]
    pub printed_u: Rational64,
    /// Interior edges of a unimodular half-region triangulation; `2^this`
    /// bounds the half-region count.
    pub anclin_interior: u64,
    pub total_edges: u64,
    /// `¾d² + d − ¾`.
    #[serde(with = "decimal::ratio")]
    pub theorem_cap: Rational64,
    /// `¾d² − 2d`.
    #[serde(with = "decimal::ratio")]
    pub rough_rectangle: Rational64,
}

fn r(n: i64, q: i64) -> Rational64 {
    Rational64::new(n, q)
}

pub fn printed_u_exponent(d: u32) -> Rational64 {
    let d = i64::from(d);
    let sq = r(3 * d * d, 4);
    if d % 2 == 0 {
        sq - r(2 * d + 3, 1)
    } else {
        sq + r(d, 1) - r(7, 4)
    }
}

pub fn upper_bound_exponents(d: u32) -> UpperBoundExponents {
    let edges = edge_counts(d);
    let di = i64::from(d);
    let sq = r(3 * di * di, 4);
    UpperBoundExponents {
        printed_u: printed_u_exponent(d),
        anclin_interior: edges.interior,
        total_edges: edges.total,
        theorem_cap: sq + r(di, 1) - r(3, 4),
        rough_rectangle: sq - r(2 * di, 1),
    }
}

/// Whether `2^exponent ≥ value`, exactly. Fractional exponents compare
/// through `2^num ≥ value^den`.
pub fn pow2_at_least(exponent: Rational64, value: &BigUint) -> bool {
    if value.is_zero() {
        return true;
    }
    let (num, den) = (*exponent.numer(), *exponent.denom());
    if num < 0 {
        return false;
    }
    let lhs = BigUint::one() << num as u64;
    lhs >= value.pow(den as u32)
}

/// Whether the printed exponent fails to bound the given half-region count.
pub fn printed_u_unsound(d: u32, f_half: &BigUint) -> bool {
    !pow2_at_least(printed_u_exponent(d), f_half)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub d: u32,
    #[serde(with = "decimal::big")]
    pub f_half: BigUint,
    #[serde(with = "decimal::big")]
    pub f_sym: BigUint,
    #[serde(with = "decimal::big")]
    pub upper: BigUint,
    #[serde(with = "decimal::big")]
    pub lower_slack: BigUint,
    #[serde(with = "decimal::big")]
    pub upper_slack: BigUint,
}

/// Checks `f_half ≤ f_sym ≤ 2^⌊d/2⌋ · f_half`.
pub fn sandwich_check(d: u32, f_half: &BigUint, f_sym: &BigUint) -> Result<SandwichReport, BoundsError> {
    let upper = f_half << (d / 2) as usize;
    if f_half > f_sym {
        return Err(BoundsError::SandwichViolation {
            d,
            detail: format!("half count {f_half} exceeds symmetric count {f_sym}"),
        });
    }
    if *f_sym > upper {
        return Err(BoundsError::SandwichViolation {
            d,
            detail: format!("symmetric count {f_sym} exceeds {upper}"),
        });
    }
    Ok(SandwichReport {
        d,
        lower_slack: f_sym - f_half,
        upper_slack: &upper - f_sym,
        f_half: f_half.clone(),
        f_sym: f_sym.clone(),
        upper,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub d: u32,
    #[serde(with = "decimal::big")]
    pub l1: BigUint,
    #[serde(with = "decimal::big")]
    pub l2: BigUint,
    #[serde(with = "decimal::big")]
    pub l2_as_printed: BigUint,
    #[serde(with = "decimal::big_opt")]
    pub f_half_ref: Option<BigUint>,
    pub exponents: UpperBoundExponents,
}

pub fn bounds_row(d: u32) -> BoundsRow {
    BoundsRow {
        d,
        l1: lower_bound_1(d),
        l2: lower_bound_2(d, L2Variant::TableMatching),
        l2_as_printed: lower_bound_2(d, L2Variant::AsPrinted),
        f_half_ref: reference::tables().table1.f_half(d),
        exponents: upper_bound_exponents(d),
    }
}

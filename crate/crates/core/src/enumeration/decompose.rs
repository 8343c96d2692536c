//! The correspondence between symmetric triangulations of the full triangle
//! and triangulations of the half region plus a choice of diagonal in each
//! unit square straddling the axis.
//!
//! Axis square `k` has corners `(k,k), (k+1,k), (k,k+1), (k+1,k+1)`. A
//! `Main` split uses the diagonal on the axis, so its lower triangle
//! `(k,k), (k+1,k), (k+1,k+1)` lies in the half region. An `Anti` split uses
//! the other diagonal and produces two triangles that are each mapped to
//! themselves by the reflection.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{enumerate_region, Mode, Triangulation};
use crate::error::EnumerationError;
use crate::geometry::{
    is_unimodular, lattice_points, reflection, LatticePoint, PointConfiguration, Region,
    RegionKind, Simplex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Split {
    /// Diagonal from `(k+1,k)` to `(k,k+1)`, crossing the axis.
    Anti,
    /// Diagonal from `(k,k)` to `(k+1,k+1)`, on the axis.
    Main,
}

/// One flag per axis square, `floor(d/2)` of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitVector(pub Vec<Split>);

impl SplitVector {
    pub fn all_main(d: u32) -> Self {
        Self(vec![Split::Main; (d / 2) as usize])
    }

    pub fn anti_count(&self) -> usize {
        self.0.iter().filter(|s| **s == Split::Anti).count()
    }
}

fn pt(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

/// Corners of the lower triangle of axis square `k`.
pub fn lower_square_triangle(k: i64) -> [LatticePoint; 3] {
    [pt(k, k), pt(k + 1, k), pt(k + 1, k + 1)]
}

fn anti_pair(k: i64) -> [[LatticePoint; 3]; 2] {
    [
        [pt(k + 1, k), pt(k, k + 1), pt(k, k)],
        [pt(k + 1, k), pt(k, k + 1), pt(k + 1, k + 1)],
    ]
}

/// The triangle at the top of the half region for odd `d`, fixed by the
/// reflection.
fn central_triangle(d: u32) -> Option<[LatticePoint; 3]> {
    (d % 2 == 1).then(|| {
        let k = i64::from(d - 1) / 2;
        [pt(k, k), pt(k + 1, k), pt(k, k + 1)]
    })
}

fn at(config: &PointConfiguration, p: [LatticePoint; 3]) -> Simplex {
    config
        .simplex_at(p[0], p[1], p[2])
        .expect("axis triangles lie inside the region")
}

fn coords(config: &PointConfiguration, s: Simplex) -> [LatticePoint; 3] {
    config.simplex_points(s)
}

/// Rebuilds a symmetric triangulation from a half-region triangulation and
/// split flags.
pub fn compose(t_half: &Triangulation, splits: &SplitVector) -> Result<Triangulation, EnumerationError> {
    let region = t_half.region;
    if region.kind != RegionKind::HalfRegion {
        return Err(EnumerationError::NotDecomposable(format!(
            "expected a half-region triangulation, got {region}"
        )));
    }
    let d = region.d;
    let squares = (d / 2) as usize;
    if splits.0.len() != squares {
        return Err(EnumerationError::SplitLength {
            got: splits.0.len(),
            expected: squares,
        });
    }
    let half = lattice_points(region);
    let full = lattice_points(Region::full(d));
    let pi = reflection(&full)?;

    let lower: Vec<Simplex> = (0..squares)
        .map(|k| at(&half, lower_square_triangle(k as i64)))
        .collect();
    for (k, flag) in splits.0.iter().enumerate() {
        if *flag == Split::Anti && !t_half.contains(lower[k]) {
            return Err(EnumerationError::InvalidSplit(k));
        }
    }

    let mut out = Vec::with_capacity(2 * t_half.len() + 1);
    for &s in t_half.simplices() {
        let replaced = lower
            .iter()
            .zip(&splits.0)
            .any(|(l, flag)| *l == s && *flag == Split::Anti);
        if replaced {
            continue;
        }
        let image = at(&full, coords(&half, s));
        out.push(image);
        out.push(pi.apply_simplex(image));
    }
    for (k, flag) in splits.0.iter().enumerate() {
        if *flag == Split::Anti {
            for tri in anti_pair(k as i64) {
                out.push(at(&full, tri));
            }
        }
    }
    if let Some(c) = central_triangle(d) {
        out.push(at(&full, c));
    }
    Ok(Triangulation::new(Region::full(d), out))
}

/// Mirrors a half-region triangulation across the axis (all squares split
/// along the axis), adding the central triangle for odd `d`.
pub fn reflect_extend(t_half: &Triangulation) -> Triangulation {
    compose(t_half, &SplitVector::all_main(t_half.region.d))
        .expect("a half-region triangulation always extends with Main splits")
}

/// Inverse of [`compose`].
pub fn decompose(t: &Triangulation) -> Result<(Triangulation, SplitVector), EnumerationError> {
    let region = t.region;
    if region.kind != RegionKind::FullTriangle {
        return Err(EnumerationError::NotDecomposable(format!(
            "expected a full-triangle triangulation, got {region}"
        )));
    }
    let d = region.d;
    let full = lattice_points(region);
    let half = lattice_points(Region::half(d));
    let pi = reflection(&full)?;
    if !t.is_invariant_under(&pi) {
        return Err(EnumerationError::NotDecomposable("not reflection invariant".into()));
    }
    if let Some(s) = t.simplices().iter().find(|s| !is_unimodular(&full, **s)) {
        return Err(EnumerationError::NotDecomposable(format!("simplex {s} is not unimodular")));
    }

    let squares = (d / 2) as usize;
    let mut splits = SplitVector::all_main(d);
    let mut half_simplices = Vec::new();
    let mut upper_anti = vec![false; squares];
    let central = central_triangle(d).map(|c| at(&full, c));
    for &s in t.simplices() {
        let p = coords(&full, s);
        if p.iter().all(|q| q.y <= q.x) {
            half_simplices.push(at(&half, p));
            continue;
        }
        if p.iter().all(|q| q.y >= q.x) || Some(s) == central {
            continue;
        }
        let k = (0..squares).find_map(|k| {
            let [a1, a2] = anti_pair(k as i64).map(|tri| at(&full, tri));
            if s == a1 {
                Some((k, true))
            } else if s == a2 {
                Some((k, false))
            } else {
                None
            }
        });
        match k {
            Some((k, true)) => {
                splits.0[k] = Split::Anti;
                half_simplices.push(at(&half, lower_square_triangle(k as i64)));
            }
            Some((k, false)) => upper_anti[k] = true,
            None => {
                return Err(EnumerationError::NotDecomposable(format!(
                    "simplex {s} crosses the axis outside an axis square"
                )))
            }
        }
    }
    for k in 0..squares {
        if (splits.0[k] == Split::Anti) != upper_anti[k] {
            return Err(EnumerationError::NotDecomposable(format!(
                "axis square {k} has only one anti-diagonal triangle"
            )));
        }
    }
    Ok((Triangulation::new(Region::half(d), half_simplices), splits))
}

/// Sum over all unimodular triangulations of the half region of
/// `2^(number of axis squares whose lower triangle is used)`.
pub fn count_via_decomposition(d: u32) -> Result<BigUint, EnumerationError> {
    let half = lattice_points(Region::half(d));
    let lower: Vec<Simplex> = (0..(d / 2) as i64)
        .map(|k| at(&half, lower_square_triangle(k)))
        .collect();
    let mut total = BigUint::from(0u32);
    let mut visit = |t: &Triangulation| {
        let s = lower.iter().filter(|l| t.contains(**l)).count();
        total += BigUint::from(1u32) << s;
    };
    enumerate_region(Region::half(d), Mode::Unimodular, Some(&mut visit))?;
    Ok(total)
}

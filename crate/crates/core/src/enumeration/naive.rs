//! Brute-force oracle: enumerate every triangulation without any symmetry
//! machinery, then filter.
//!
//! Each triangulation has exactly one triangle on the bottom side next to the
//! origin, and from then on the triangle on the far side of the lex-smallest
//! open interior edge is forced, so every triangulation is reached once.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;

use super::{Mode, Triangulation};
use crate::error::EnumerationError;
use crate::geometry::{
    lattice_points, normalized_area, properly_intersect, reflection, Edge, PointConfiguration,
    Region, Simplex,
};

pub const NAIVE_MAX_D: u32 = 5;

struct Naive<'a> {
    config: &'a PointConfiguration,
    tris: Vec<Simplex>,
    compat: Vec<Vec<bool>>,
    by_edge: HashMap<Edge, Vec<usize>>,
    total: u64,
    chosen: Vec<usize>,
    open: BTreeMap<Edge, u8>,
    covered: u64,
}

impl Naive<'_> {
    fn add(&mut self, t: usize) {
        self.chosen.push(t);
        self.covered += normalized_area(self.config, self.tris[t]);
        for e in self.tris[t].edges() {
            *self.open.entry(e).or_default() += 1;
        }
    }

    fn remove(&mut self) {
        let t = self.chosen.pop().expect("non-empty");
        self.covered -= normalized_area(self.config, self.tris[t]);
        for e in self.tris[t].edges() {
            let c = self.open.get_mut(&e).expect("edge present");
            *c -= 1;
            if *c == 0 {
                self.open.remove(&e);
            }
        }
    }

    fn fits(&self, t: usize) -> bool {
        self.chosen.iter().all(|&c| c != t && self.compat[c][t])
    }

    fn run(&mut self, visit: &mut dyn FnMut(&Triangulation)) {
        if self.covered == self.total {
            let simplices = self.chosen.iter().map(|&t| self.tris[t]).collect();
            visit(&Triangulation::new(self.config.region(), simplices));
            return;
        }
        let Some(edge) = self
            .open
            .iter()
            .find(|(e, &c)| c == 1 && !self.config.is_boundary_edge(**e))
            .map(|(e, _)| *e)
        else {
            return;
        };
        let options = self.by_edge.get(&edge).cloned().unwrap_or_default();
        for t in options {
            if self.fits(t) {
                self.add(t);
                self.run(visit);
                self.remove();
            }
        }
    }
}

/// Visits every triangulation of `region` and returns how many there are.
pub fn enumerate_naive(
    region: Region,
    mode: Mode,
    visit: &mut dyn FnMut(&Triangulation),
) -> Result<u64, EnumerationError> {
    if region.d < 1 {
        return Err(EnumerationError::InvalidDilation(region.d));
    }
    if region.d > NAIVE_MAX_D {
        return Err(EnumerationError::NaiveGuard {
            d: region.d,
            max: NAIVE_MAX_D,
        });
    }
    let config = lattice_points(region);
    let total = region.normalized_area();
    let mut count = 0u64;
    let mut counting = |t: &Triangulation| {
        count += 1;
        visit(t);
    };
    if total == 0 {
        counting(&Triangulation::new(region, Vec::new()));
        return Ok(count);
    }

    let tris: Vec<Simplex> = match mode {
        Mode::Unimodular => config.unimodular_simplices(),
        Mode::All => config.nondegenerate_simplices(),
    };
    let compat: Vec<Vec<bool>> = tris
        .iter()
        .map(|&a| tris.iter().map(|&b| properly_intersect(&config, a, b)).collect())
        .collect();
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for e in t.edges() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    // Triangles with an edge from the origin along the bottom side.
    let seeds: Vec<usize> = tris
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            t.contains(0) && t.0.iter().any(|&i| i != 0 && config.point(i).y == 0)
        })
        .map(|(i, _)| i)
        .collect();

    let mut search = Naive {
        config: &config,
        tris,
        compat,
        by_edge,
        total,
        chosen: Vec::new(),
        open: BTreeMap::new(),
        covered: 0,
    };
    for seed in seeds {
        search.add(seed);
        search.run(&mut counting);
        search.remove();
    }
    Ok(count)
}

/// Number of reflection-invariant triangulations of the full triangle,
/// obtained by filtering all triangulations.
pub fn enumerate_naive_symmetric(d: u32, mode: Mode) -> Result<BigUint, EnumerationError> {
    let region = Region::full(d);
    if d < 1 {
        return Err(EnumerationError::InvalidDilation(d));
    }
    let config = lattice_points(region);
    let pi = reflection(&config)?;
    let mut symmetric = 0u64;
    enumerate_naive(region, mode, &mut |t| {
        if t.is_invariant_under(&pi) {
            symmetric += 1;
        }
    })?;
    Ok(BigUint::from(symmetric))
}

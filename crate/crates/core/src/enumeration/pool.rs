//! Precomputed orbit pool: representatives, admissibility bitsets and
//! edge/point incidence used by the search.

use std::collections::{BTreeSet, HashMap};

use crate::geometry::{normalized_area, properly_intersect, Edge, Group, PointConfiguration, Simplex, SymmetryAction};

use super::Mode;

/// Flat row-major bit matrix with `words` u64 per row.
#[derive(Clone, Debug)]
pub(crate) struct BitRows {
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, words: usize) -> Self {
        Self {
            words,
            data: vec![0; rows * words],
        }
    }

    #[inline]
    pub(crate) fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    #[inline]
    fn set(&mut self, r: usize, bit: usize) {
        self.data[r * self.words + bit / 64] |= 1 << (bit % 64);
    }
}

#[inline]
pub(crate) fn last_common(a: &[u64], b: &[u64]) -> Option<usize> {
    a.iter()
        .zip(b)
        .enumerate()
        .rev()
        .find_map(|(w, (x, y))| {
            let m = x & y;
            (m != 0).then(|| w * 64 + 63 - m.leading_zeros() as usize)
        })
}

pub(crate) struct OrbitPool {
    pub config: PointConfiguration,
    pub reps: Vec<Simplex>,
    pub orbits: Vec<Vec<Simplex>>,
    pub orbit_area: Vec<u64>,
    /// Edge ids of every simplex in the orbit, with multiplicity.
    pub orbit_edges: Vec<Vec<u32>>,
    pub orbit_points: Vec<Vec<u32>>,
    /// Lex-minimal edge id over all simplices in the orbit.
    pub min_edge: Vec<u32>,
    pub compat: BitRows,
    pub edges: Vec<Edge>,
    pub edge_interior: Vec<bool>,
    pub edge_cover: BitRows,
    pub point_cover: BitRows,
    pub required_point: Vec<bool>,
    pub total_area: u64,
    pub words: usize,
    /// Actions on representatives of the non-trivially acting elements of
    /// the canonicity group.
    pub rep_perms: Vec<Vec<u32>>,
}

impl OrbitPool {
    /// `simplices` must already be filtered (nondegenerate, feasible) and
    /// closed under `involution` when one is given.
    pub fn build(
        config: PointConfiguration,
        simplices: &[Simplex],
        involution: Option<&SymmetryAction>,
        mode: Mode,
        canonicity: Option<&Group>,
    ) -> Self {
        let mut reps: BTreeSet<Simplex> = BTreeSet::new();
        for &s in simplices {
            let image = involution.map_or(s, |pi| pi.apply_simplex(s));
            reps.insert(s.min(image));
        }
        let reps: Vec<Simplex> = reps.into_iter().collect();
        let orbits: Vec<Vec<Simplex>> = reps
            .iter()
            .map(|&r| {
                let image = involution.map_or(r, |pi| pi.apply_simplex(r));
                if image == r {
                    vec![r]
                } else {
                    vec![r, image]
                }
            })
            .collect();

        let edges: Vec<Edge> = orbits
            .iter()
            .flatten()
            .flat_map(|s| s.edges())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let edge_id: HashMap<Edge, u32> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i as u32))
            .collect();
        let edge_interior: Vec<bool> = edges.iter().map(|e| !config.is_boundary_edge(*e)).collect();

        let n_reps = reps.len();
        let words = n_reps.div_ceil(64).max(1);
        let orbit_area = orbits
            .iter()
            .map(|o| o.iter().map(|s| normalized_area(&config, *s)).sum())
            .collect();
        let orbit_edges: Vec<Vec<u32>> = orbits
            .iter()
            .map(|o| o.iter().flat_map(|s| s.edges()).map(|e| edge_id[&e]).collect())
            .collect();
        let orbit_points: Vec<Vec<u32>> = orbits
            .iter()
            .map(|o| o.iter().flat_map(|s| s.0).collect())
            .collect();
        let min_edge = orbit_edges
            .iter()
            .map(|es| *es.iter().min().expect("orbit has edges"))
            .collect();

        let mut edge_cover = BitRows::new(edges.len(), words);
        let mut point_cover = BitRows::new(config.len(), words);
        for r in 0..n_reps {
            for &e in &orbit_edges[r] {
                edge_cover.set(e as usize, r);
            }
            for &p in &orbit_points[r] {
                point_cover.set(p as usize, r);
            }
        }

        let boxes: Vec<[i64; 4]> = orbits
            .iter()
            .map(|o| {
                let mut b = [i64::MAX, i64::MAX, i64::MIN, i64::MIN];
                for p in o.iter().flat_map(|s| config.simplex_points(*s)) {
                    b = [b[0].min(p.x), b[1].min(p.y), b[2].max(p.x), b[3].max(p.y)];
                }
                b
            })
            .collect();
        let mut compat = BitRows::new(n_reps, words);
        for i in 0..n_reps {
            for j in i + 1..n_reps {
                let (a, b) = (boxes[i], boxes[j]);
                let apart = a[2] < b[0] || b[2] < a[0] || a[3] < b[1] || b[3] < a[1];
                let ok = apart
                    || orbits[i].iter().all(|&s| {
                        orbits[j]
                            .iter()
                            .all(|&r| properly_intersect(&config, s, r))
                    });
                if ok {
                    compat.set(i, j);
                    compat.set(j, i);
                }
            }
        }

        let hull = config.region().hull();
        let required_point = config
            .points()
            .iter()
            .map(|p| match mode {
                Mode::Unimodular => true,
                Mode::All => hull.contains(p),
            })
            .collect();

        let rep_index: HashMap<Simplex, u32> = reps
            .iter()
            .enumerate()
            .map(|(i, r)| (*r, i as u32))
            .collect();
        let rep_perms = canonicity
            .map(|g| {
                g.elements()
                    .iter()
                    .filter_map(|act| {
                        let perm: Vec<u32> = reps
                            .iter()
                            .map(|&r| {
                                let s = act.apply_simplex(r);
                                let rep = involution.map_or(s, |pi| s.min(pi.apply_simplex(s)));
                                rep_index[&rep]
                            })
                            .collect();
                        let trivial = perm.iter().enumerate().all(|(i, &j)| i as u32 == j);
                        (!trivial).then_some(perm)
                    })
                    .collect()
            })
            .unwrap_or_default();

        let total_area = config.region().normalized_area();
        Self {
            config,
            reps,
            orbits,
            orbit_area,
            orbit_edges,
            orbit_points,
            min_edge,
            compat,
            edges,
            edge_interior,
            edge_cover,
            point_cover,
            required_point,
            total_area,
            words,
            rep_perms,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    /// Candidate set at the root: every representative.
    pub fn all_bits(&self) -> Vec<u64> {
        let mut bits = vec![u64::MAX; self.words];
        let n = self.len();
        let tail = n % 64;
        if tail != 0 {
            bits[self.words - 1] = (1u64 << tail) - 1;
        }
        if n == 0 {
            bits[0] = 0;
        }
        bits
    }

    /// Expanded, sorted simplices for a set of representative ids.
    pub fn expand(&self, chosen: &[u32]) -> Vec<Simplex> {
        let mut out: Vec<Simplex> = chosen
            .iter()
            .flat_map(|&r| self.orbits[r as usize].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Number of distinct images of a complete state under the canonicity
    /// group.
    pub fn orbit_size(&self, chosen: &[u32]) -> u64 {
        if self.rep_perms.is_empty() {
            return 1;
        }
        let mut images: BTreeSet<Vec<u32>> = BTreeSet::new();
        images.insert(chosen.to_vec());
        for perm in &self.rep_perms {
            let mut img: Vec<u32> = chosen.iter().map(|&r| perm[r as usize]).collect();
            img.sort_unstable();
            images.insert(img);
        }
        images.len() as u64
    }
}

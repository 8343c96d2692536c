//! Enumeration of triangulations of lattice regions.
//!
//! [`enumerate_symmetric`] counts triangulations of the full triangle that
//! are invariant under the reflection `(x, y) -> (y, x)`, each once up to the
//! symmetries that preserve the pool of reflection-feasible simplices.
//! [`enumerate_region`] is the same search with a trivial group, used for the
//! half region and for plain counts. [`enumerate_naive_symmetric`] is an
//! independent brute-force oracle.

mod decompose;
mod naive;
mod pool;
mod search;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use decompose::{
    compose, count_via_decomposition, decompose, lower_square_triangle, reflect_extend, Split,
    SplitVector,
};
pub use naive::{enumerate_naive, enumerate_naive_symmetric, NAIVE_MAX_D};

use crate::error::EnumerationError;
use crate::geometry::{
    feasible_symmetry_group, h_feasible, lattice_points, normalized_area, properly_intersect,
    reflection, symmetry_group, Edge, Group, PointConfiguration, Region,
    Simplex, SymmetryAction,
};
use pool::OrbitPool;
use search::SearchOptions;

/// Which simplices may appear in a triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Only normalized-area-one triangles; every lattice point is used.
    Unimodular,
    /// Every affinely independent triple; points may stay unused.
    All,
}

/// Strength of the dead-end pruning applied at every node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pruning {
    Off,
    /// Only the lex-minimal uncovered interior facet rule.
    Verbatim,
    /// The facet rule, plus: every open interior edge and the lex-minimal
    /// unused required point must still be coverable, and no child may pass
    /// the last candidate covering any of them.
    #[default]
    Full,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Emit {
    #[default]
    CountOnly,
    Stream,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of orbit representatives in the pool.
    pub max_pool: usize,
    /// Abort the search after this many nodes.
    pub max_nodes: Option<u64>,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_pool: 20_000,
            max_nodes: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub d: u32,
    pub mode: Mode,
    pub symmetric: bool,
    pub workers: usize,
    pub emit: Emit,
    pub pruning: Pruning,
    pub canonical_check: bool,
    pub limits: Limits,
}

impl EnumerationConfig {
    pub fn symmetric(d: u32, mode: Mode) -> Self {
        Self {
            d,
            mode,
            symmetric: true,
            workers: 1,
            emit: Emit::CountOnly,
            pruning: Pruning::Full,
            canonical_check: true,
            limits: Limits::default(),
        }
    }

    pub fn plain(d: u32, mode: Mode) -> Self {
        Self {
            symmetric: false,
            ..Self::symmetric(d, mode)
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_pruning(mut self, pruning: Pruning) -> Self {
        self.pruning = pruning;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    /// Triangulations up to the symmetry group in use.
    pub count: BigUint,
    /// Triangulations without identifying symmetric copies.
    pub raw_count: BigUint,
    pub nodes: u64,
    /// Orbit representatives in the simplex pool.
    pub pool_size: usize,
    /// Order of the group used for canonical forms.
    pub group_order: usize,
}

/// A set of triangles of a region, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangulation {
    pub region: Region,
    simplices: Vec<Simplex>,
}

impl Triangulation {
    pub fn new(region: Region, mut simplices: Vec<Simplex>) -> Self {
        simplices.sort_unstable();
        simplices.dedup();
        Self { region, simplices }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.simplices.binary_search(&s).is_ok()
    }

    /// Distinct edges of all triangles.
    pub fn edges(&self) -> BTreeSet<Edge> {
        self.simplices.iter().flat_map(|s| s.edges()).collect()
    }

    pub fn map(&self, action: &SymmetryAction) -> Self {
        Self::new(
            self.region,
            self.simplices.iter().map(|s| action.apply_simplex(*s)).collect(),
        )
    }

    pub fn is_invariant_under(&self, action: &SymmetryAction) -> bool {
        self.map(action) == *self
    }

    /// One stream line: space-separated sorted triples `i,j,k`.
    pub fn to_line(&self) -> String {
        self.simplices
            .iter()
            .map(Simplex::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn from_line(region: Region, line: &str) -> Result<Self, String> {
        let simplices = line
            .split_whitespace()
            .map(|tok| {
                let parts: Vec<u32> = tok
                    .split(',')
                    .map(|v| v.parse::<u32>().map_err(|e| format!("bad index in {tok:?}: {e}")))
                    .collect::<Result<_, _>>()?;
                match parts.as_slice() {
                    [a, b, c] => Ok(Simplex::new(*a, *b, *c)),
                    _ => Err(format!("expected a triple, got {tok:?}")),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(region, simplices))
    }
}

/// Problems found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    IndexOutOfRange(Simplex),
    Degenerate(Simplex),
    NotUnimodular(Simplex),
    Overlap(Simplex, Simplex),
    AreaMismatch { covered: u64, expected: u64 },
    UnusedPoint(u32),
}

/// Checks that `t` is a triangulation of its region in the given mode.
pub fn validate(config: &PointConfiguration, t: &Triangulation, mode: Mode) -> Vec<Defect> {
    let mut defects = Vec::new();
    let n = config.len() as u32;
    for &s in t.simplices() {
        if s.0.iter().any(|&i| i >= n) {
            defects.push(Defect::IndexOutOfRange(s));
        }
    }
    if !defects.is_empty() {
        return defects;
    }
    let mut covered = 0;
    for &s in t.simplices() {
        let area = normalized_area(config, s);
        covered += area;
        if area == 0 {
            defects.push(Defect::Degenerate(s));
        } else if mode == Mode::Unimodular && area != 1 {
            defects.push(Defect::NotUnimodular(s));
        }
    }
    if !defects.is_empty() {
        return defects;
    }
    let simplices = t.simplices();
    for (i, &a) in simplices.iter().enumerate() {
        for &b in &simplices[i + 1..] {
            if !properly_intersect(config, a, b) {
                defects.push(Defect::Overlap(a, b));
            }
        }
    }
    let expected = config.region().normalized_area();
    if covered != expected {
        defects.push(Defect::AreaMismatch { covered, expected });
    }
    if mode == Mode::Unimodular && expected > 0 {
        let used: BTreeSet<u32> = simplices.iter().flat_map(|s| s.0).collect();
        defects.extend((0..n).filter(|i| !used.contains(i)).map(Defect::UnusedPoint));
    }
    defects
}

fn pool_simplices(config: &PointConfiguration, mode: Mode) -> Vec<Simplex> {
    match mode {
        Mode::Unimodular => config.unimodular_simplices(),
        Mode::All => config.nondegenerate_simplices(),
    }
}

fn check_pool_budget(config: &PointConfiguration, limits: &Limits) -> Result<(), EnumerationError> {
    // The pool scan is cubic in the number of points.
    let n = config.len();
    let triples = n.saturating_mul(n.saturating_sub(1)).saturating_mul(n.saturating_sub(2)) / 6;
    if triples > limits.max_pool.saturating_mul(50) {
        return Err(EnumerationError::PoolLimit {
            size: triples,
            limit: limits.max_pool,
        });
    }
    Ok(())
}

/// Everything the search needs for one run.
struct Prepared {
    pool: OrbitPool,
    group_order: usize,
}

fn prepare_symmetric(cfg: &EnumerationConfig) -> Result<Prepared, EnumerationError> {
    let config = lattice_points(Region::full(cfg.d));
    check_pool_budget(&config, &cfg.limits)?;
    let pi = reflection(&config)?;
    let feasible: Vec<Simplex> = pool_simplices(&config, cfg.mode)
        .into_iter()
        .filter(|s| h_feasible(&config, &pi, *s))
        .collect();
    let gh = feasible_symmetry_group(&symmetry_group(&config), &feasible);
    let pool = OrbitPool::build(config, &feasible, Some(&pi), cfg.mode, Some(&gh));
    if pool.len() > cfg.limits.max_pool {
        return Err(EnumerationError::PoolLimit {
            size: pool.len(),
            limit: cfg.limits.max_pool,
        });
    }
    Ok(Prepared {
        pool,
        group_order: gh.order(),
    })
}

fn prepare_plain(
    region: Region,
    mode: Mode,
    group: Option<&Group>,
    limits: &Limits,
) -> Result<Prepared, EnumerationError> {
    let config = lattice_points(region);
    check_pool_budget(&config, limits)?;
    let simplices = pool_simplices(&config, mode);
    let pool = OrbitPool::build(config, &simplices, None, mode, group);
    if pool.len() > limits.max_pool {
        return Err(EnumerationError::PoolLimit {
            size: pool.len(),
            limit: limits.max_pool,
        });
    }
    Ok(Prepared {
        pool,
        group_order: group.map_or(1, Group::order),
    })
}

fn execute(
    prepared: &Prepared,
    cfg: &EnumerationConfig,
    visitor: Option<&mut dyn FnMut(&Triangulation)>,
) -> Result<EnumerationResult, EnumerationError> {
    let pool = &prepared.pool;
    let opts = SearchOptions {
        pruning: cfg.pruning,
        canonical_check: cfg.canonical_check,
        max_nodes: cfg.limits.max_nodes,
    };
    let region = pool.config.region();
    let tally = match (cfg.emit, visitor) {
        (Emit::Stream, Some(visit)) => {
            let mut adapter = |chosen: &[u32]| {
                let t = Triangulation {
                    region,
                    simplices: pool.expand(chosen),
                };
                visit(&t);
            };
            search::run(pool, opts, cfg.workers, Some(&mut adapter))?
        }
        _ => search::run(pool, opts, cfg.workers, None)?,
    };
    Ok(EnumerationResult {
        count: BigUint::from(tally.classes),
        raw_count: BigUint::from(tally.raw),
        nodes: tally.nodes,
        pool_size: pool.len(),
        group_order: prepared.group_order,
    })
}

/// Counts reflection-invariant triangulations of the full triangle `cfg.d`,
/// each once up to the feasible symmetry group. With [`Emit::Stream`] the
/// visitor receives every canonical triangulation.
pub fn enumerate_symmetric(
    cfg: &EnumerationConfig,
    visitor: Option<&mut dyn FnMut(&Triangulation)>,
) -> Result<EnumerationResult, EnumerationError> {
    if cfg.d < 1 {
        return Err(EnumerationError::InvalidDilation(cfg.d));
    }
    let prepared = prepare_symmetric(cfg)?;
    execute(&prepared, cfg, visitor)
}

/// Counts all triangulations of `region` (no symmetry identified).
pub fn enumerate_region(
    region: Region,
    mode: Mode,
    visitor: Option<&mut dyn FnMut(&Triangulation)>,
) -> Result<EnumerationResult, EnumerationError> {
    let mut cfg = EnumerationConfig::plain(region.d, mode);
    if visitor.is_some() {
        cfg.emit = Emit::Stream;
    }
    enumerate_region_with(region, &cfg, visitor)
}

/// [`enumerate_region`] with explicit workers, pruning and limits.
pub fn enumerate_region_with(
    region: Region,
    cfg: &EnumerationConfig,
    visitor: Option<&mut dyn FnMut(&Triangulation)>,
) -> Result<EnumerationResult, EnumerationError> {
    if region.d < 1 {
        return Err(EnumerationError::InvalidDilation(region.d));
    }
    let prepared = prepare_plain(region, cfg.mode, None, &cfg.limits)?;
    execute(&prepared, cfg, visitor)
}

/// Counts triangulations of `region` up to its full affine symmetry group.
pub fn enumerate_region_up_to_symmetry(
    region: Region,
    cfg: &EnumerationConfig,
    visitor: Option<&mut dyn FnMut(&Triangulation)>,
) -> Result<EnumerationResult, EnumerationError> {
    if region.d < 1 {
        return Err(EnumerationError::InvalidDilation(region.d));
    }
    let group = symmetry_group(&lattice_points(region));
    let prepared = prepare_plain(region, cfg.mode, Some(&group), &cfg.limits)?;
    execute(&prepared, cfg, visitor)
}

/// Dispatches on `cfg.symmetric`: the full triangle up to the feasible group,
/// or all triangulations of the full triangle.
pub fn enumerate(
    cfg: &EnumerationConfig,
    visitor: Option<&mut dyn FnMut(&Triangulation)>,
) -> Result<EnumerationResult, EnumerationError> {
    if cfg.symmetric {
        enumerate_symmetric(cfg, visitor)
    } else {
        enumerate_region_with(Region::full(cfg.d), cfg, visitor)
    }
}

/// Orbit representative of `s` under `{id, π}`.
pub fn orbit_representative(pi: &SymmetryAction, s: Simplex) -> Simplex {
    s.min(pi.apply_simplex(s))
}

/// An in-progress symmetric triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialState {
    pub region: Region,
    /// Orbit representatives in the order they were added.
    pub chosen: Vec<Simplex>,
    pub expanded: BTreeSet<Simplex>,
    pub edge_cover: BTreeMap<Edge, u8>,
    pub covered_area: u64,
}

impl PartialState {
    pub fn new(region: Region) -> Self {
        Self {
            region,
            chosen: Vec::new(),
            expanded: BTreeSet::new(),
            edge_cover: BTreeMap::new(),
            covered_area: 0,
        }
    }

    /// Adds the orbit of `rep` under `involution` (or just `rep`).
    pub fn push(
        &mut self,
        config: &PointConfiguration,
        involution: Option<&SymmetryAction>,
        rep: Simplex,
    ) {
        self.chosen.push(rep);
        let mut orbit = vec![rep];
        if let Some(pi) = involution {
            let image = pi.apply_simplex(rep);
            if image != rep {
                orbit.push(image);
            }
        }
        for s in orbit {
            if self.expanded.insert(s) {
                self.covered_area += normalized_area(config, s);
                for e in s.edges() {
                    *self.edge_cover.entry(e).or_default() += 1;
                }
            }
        }
    }

    /// Lex-minimal interior edge with exactly one incident triangle.
    pub fn min_uncovered_interior_edge(&self, config: &PointConfiguration) -> Option<Edge> {
        self.edge_cover
            .iter()
            .find(|(e, &c)| c == 1 && !config.is_boundary_edge(**e))
            .map(|(e, _)| *e)
    }
}

/// True iff the state covers the whole region.
pub fn is_complete(state: &PartialState) -> bool {
    state.covered_area == state.region.normalized_area()
}

/// The facet pruning rule: `true` when the lex-minimal uncovered interior
/// edge of `state` is lex-smaller than every facet of every simplex in
/// `candidates` (the orbit-expanded admissible simplices).
pub fn prune_check(config: &PointConfiguration, state: &PartialState, candidates: &[Simplex]) -> bool {
    let Some(open) = state.min_uncovered_interior_edge(config) else {
        return false;
    };
    match candidates.iter().flat_map(|s| s.edges()).min() {
        Some(best) => open < best,
        None => true,
    }
}

/// `true` iff the sorted representative sequence of `state` is not larger
/// than that of any image `g(state)`, `g` in `group`.
pub fn canonical_check(state: &PartialState, group: &Group, involution: Option<&SymmetryAction>) -> bool {
    let rep = |s: Simplex| involution.map_or(s, |pi| orbit_representative(pi, s));
    let mut own: Vec<Simplex> = state.chosen.iter().map(|&s| rep(s)).collect();
    own.sort_unstable();
    group.elements().iter().all(|g| {
        let mut image: Vec<Simplex> = own.iter().map(|&s| rep(g.apply_simplex(s))).collect();
        image.sort_unstable();
        own <= image
    })
}

//! Lattice regions, point configurations and exact predicates.
//!
//! Everything here works on exact integers. Points of a configuration are
//! sorted ascending by `(y, x)` and addressed by their position in that order;
//! simplices and edges are sorted index tuples, so the derived `Ord` on them is
//! the lexicographic order used throughout the enumeration.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// A point of the integer lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Image under the reflection at the line `x = y`.
    pub const fn transposed(self) -> Self {
        Self { x: self.y, y: self.x }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `a, b, c`; positive for a
/// counter-clockwise turn.
#[inline]
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// `conv{(0,0), (d,0), (0,d)}`.
    FullTriangle,
    /// Lattice points of the full triangle with `y <= x`, i.e. the part
    /// below the symmetry axis. For odd `d` its hull is a quadrilateral.
    HalfRegion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    pub d: u32,
}

impl Region {
    pub const fn full(d: u32) -> Self {
        Self {
            kind: RegionKind::FullTriangle,
            d,
        }
    }

    pub const fn half(d: u32) -> Self {
        Self {
            kind: RegionKind::HalfRegion,
            d,
        }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        let d = i64::from(self.d);
        let in_full = p.x >= 0 && p.y >= 0 && p.x + p.y <= d;
        match self.kind {
            RegionKind::FullTriangle => in_full,
            RegionKind::HalfRegion => in_full && p.y <= p.x,
        }
    }

    /// Hull vertices in counter-clockwise order starting at the origin.
    ///
    /// `HalfRegion(1)` is degenerate (a segment) and yields two vertices.
    pub fn hull(&self) -> Vec<LatticePoint> {
        let d = i64::from(self.d);
        match self.kind {
            RegionKind::FullTriangle => vec![
                LatticePoint::new(0, 0),
                LatticePoint::new(d, 0),
                LatticePoint::new(0, d),
            ],
            RegionKind::HalfRegion if d % 2 == 0 => vec![
                LatticePoint::new(0, 0),
                LatticePoint::new(d, 0),
                LatticePoint::new(d / 2, d / 2),
            ],
            RegionKind::HalfRegion if d == 1 => {
                vec![LatticePoint::new(0, 0), LatticePoint::new(1, 0)]
            }
            RegionKind::HalfRegion => {
                let k = (d - 1) / 2;
                vec![
                    LatticePoint::new(0, 0),
                    LatticePoint::new(d, 0),
                    LatticePoint::new(k + 1, k),
                    LatticePoint::new(k, k),
                ]
            }
        }
    }

    /// Twice the Euclidean area of the region.
    pub fn normalized_area(&self) -> u64 {
        let hull = self.hull();
        let n = hull.len();
        let twice: i64 = (0..n)
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                a.x * b.y - a.y * b.x
            })
            .sum();
        twice.unsigned_abs()
    }

    /// True when the closed segment `a b` lies on the boundary of the region.
    pub fn segment_on_boundary(&self, a: LatticePoint, b: LatticePoint) -> bool {
        let hull = self.hull();
        let n = hull.len();
        (0..n).any(|i| {
            let (u, v) = (hull[i], hull[(i + 1) % n]);
            on_closed_segment(u, v, a) && on_closed_segment(u, v, b)
        })
    }

    pub fn point_on_boundary(&self, p: LatticePoint) -> bool {
        let hull = self.hull();
        let n = hull.len();
        (0..n).any(|i| on_closed_segment(hull[i], hull[(i + 1) % n], p))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RegionKind::FullTriangle => write!(f, "full({})", self.d),
            RegionKind::HalfRegion => write!(f, "half({})", self.d),
        }
    }
}

fn on_closed_segment(u: LatticePoint, v: LatticePoint, p: LatticePoint) -> bool {
    orient(u, v, p) == 0
        && p.x >= u.x.min(v.x)
        && p.x <= u.x.max(v.x)
        && p.y >= u.y.min(v.y)
        && p.y <= u.y.max(v.y)
}

/// Sorted triple of point indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(pub [u32; 3]);

impl Simplex {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        Self(v)
    }

    pub fn vertices(&self) -> [u32; 3] {
        self.0
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0.contains(&i)
    }

    /// The three facets, in lexicographic order.
    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge([a, b]), Edge([a, c]), Edge([b, c])]
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a},{b},{c}")
    }
}

/// Sorted pair of point indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub [u32; 2]);

impl Edge {
    pub fn new(a: u32, b: u32) -> Self {
        if a <= b {
            Self([a, b])
        } else {
            Self([b, a])
        }
    }
}

/// All lattice points of a region with a fixed `(y, x)` order.
#[derive(Clone, Debug)]
pub struct PointConfiguration {
    region: Region,
    points: Vec<LatticePoint>,
    index_of: HashMap<LatticePoint, u32>,
}

impl PointConfiguration {
    pub fn region(&self) -> Region {
        self.region
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn point(&self, i: u32) -> LatticePoint {
        self.points[i as usize]
    }

    pub fn index_of(&self, p: LatticePoint) -> Option<u32> {
        self.index_of.get(&p).copied()
    }

    pub fn simplex_points(&self, s: Simplex) -> [LatticePoint; 3] {
        s.0.map(|i| self.point(i))
    }

    /// Simplex from three coordinates; `None` if any point is missing.
    pub fn simplex_at(&self, a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Option<Simplex> {
        Some(Simplex::new(
            self.index_of(a)?,
            self.index_of(b)?,
            self.index_of(c)?,
        ))
    }

    pub fn is_boundary_edge(&self, e: Edge) -> bool {
        self.region
            .segment_on_boundary(self.point(e.0[0]), self.point(e.0[1]))
    }

    pub fn boundary_point_count(&self) -> usize {
        self.points
            .iter()
            .filter(|p| self.region.point_on_boundary(**p))
            .count()
    }

    /// Every affinely independent triple, lexicographically sorted.
    pub fn nondegenerate_simplices(&self) -> Vec<Simplex> {
        self.simplices_where(|area| area > 0)
    }

    /// Every triple of normalized area one, lexicographically sorted.
    pub fn unimodular_simplices(&self) -> Vec<Simplex> {
        self.simplices_where(|area| area == 1)
    }

    fn simplices_where(&self, keep: impl Fn(u64) -> bool) -> Vec<Simplex> {
        let n = self.len() as u32;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = Simplex([a, b, c]);
                    if keep(normalized_area(self, s)) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

/// All lattice points of `region`, sorted by `(y, x)`.
pub fn lattice_points(region: Region) -> PointConfiguration {
    let d = i64::from(region.d);
    let mut points = Vec::new();
    for y in 0..=d {
        for x in 0..=d - y {
            let p = LatticePoint::new(x, y);
            if region.contains(p) {
                points.push(p);
            }
        }
    }
    let index_of = points
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, i as u32))
        .collect();
    PointConfiguration {
        region,
        points,
        index_of,
    }
}

/// `|det(p2 - p1, p3 - p1)|`; zero for collinear triples.
pub fn normalized_area(config: &PointConfiguration, s: Simplex) -> u64 {
    let [a, b, c] = config.simplex_points(s);
    orient(a, b, c).unsigned_abs()
}

pub fn is_unimodular(config: &PointConfiguration, s: Simplex) -> bool {
    normalized_area(config, s) == 1
}

/// Closed-triangle containment; `tri` must be nondegenerate.
fn in_closed_triangle(tri: [LatticePoint; 3], p: LatticePoint) -> bool {
    let o1 = orient(tri[0], tri[1], p).signum();
    let o2 = orient(tri[1], tri[2], p).signum();
    let o3 = orient(tri[2], tri[0], p).signum();
    let has_neg = o1 < 0 || o2 < 0 || o3 < 0;
    let has_pos = o1 > 0 || o2 > 0 || o3 > 0;
    !(has_neg && has_pos)
}

/// Transversal crossing in the relative interiors of both segments.
fn segments_cross(a: LatticePoint, b: LatticePoint, c: LatticePoint, d: LatticePoint) -> bool {
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// True iff the closed triangles meet in a common face of both (nothing, a
/// shared vertex or a shared edge). Both simplices must be nondegenerate.
pub fn properly_intersect(config: &PointConfiguration, s: Simplex, r: Simplex) -> bool {
    if s == r {
        return true;
    }
    let sp = config.simplex_points(s);
    let rp = config.simplex_points(r);
    let shared = |i: u32, other: &Simplex| other.contains(i);

    // A vertex of one triangle that is not a vertex of the other must stay
    // outside the other closed triangle.
    for (k, &i) in s.0.iter().enumerate() {
        if !shared(i, &r) && in_closed_triangle(rp, sp[k]) {
            return false;
        }
    }
    for (k, &i) in r.0.iter().enumerate() {
        if !shared(i, &s) && in_closed_triangle(sp, rp[k]) {
            return false;
        }
    }

    for ea in s.edges() {
        for eb in r.edges() {
            let (a0, a1) = (config.point(ea.0[0]), config.point(ea.0[1]));
            let (b0, b1) = (config.point(eb.0[0]), config.point(eb.0[1]));
            if segments_cross(a0, a1, b0, b1) {
                return false;
            }
        }
    }

    // A shared edge needs the two apexes on opposite sides.
    for e in s.edges() {
        if r.edges().contains(&e) {
            let (u, v) = (config.point(e.0[0]), config.point(e.0[1]));
            let apex_s = config.point(third_vertex(s, e));
            let apex_r = config.point(third_vertex(r, e));
            if orient(u, v, apex_s).signum() == orient(u, v, apex_r).signum() {
                return false;
            }
        }
    }
    true
}

fn third_vertex(s: Simplex, e: Edge) -> u32 {
    s.0.into_iter()
        .find(|i| !e.0.contains(i))
        .expect("edge belongs to simplex")
}

/// Affine lattice map together with the permutation it induces on a
/// configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetryAction {
    pub matrix: [[i64; 2]; 2],
    pub translation: [i64; 2],
    pub permutation: Vec<u32>,
}

impl SymmetryAction {
    pub fn identity(config: &PointConfiguration) -> Self {
        Self {
            matrix: [[1, 0], [0, 1]],
            translation: [0, 0],
            permutation: (0..config.len() as u32).collect(),
        }
    }

    /// Builds the action of an affine map, failing if any image leaves the
    /// configuration.
    pub fn from_affine(
        config: &PointConfiguration,
        matrix: [[i64; 2]; 2],
        translation: [i64; 2],
    ) -> Result<Self, GeometryError> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det.abs() != 1 {
            return Err(GeometryError::NotUnimodularMap(det));
        }
        let permutation = config
            .points()
            .iter()
            .map(|p| {
                let q = apply_affine(matrix, translation, *p);
                config
                    .index_of(q)
                    .ok_or(GeometryError::ImageOutsideConfiguration(*p, q))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            matrix,
            translation,
            permutation,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.permutation
            .iter()
            .enumerate()
            .all(|(i, &j)| i as u32 == j)
    }

    pub fn determinant(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    #[inline]
    pub fn apply_index(&self, i: u32) -> u32 {
        self.permutation[i as usize]
    }

    pub fn apply_point(&self, p: LatticePoint) -> LatticePoint {
        apply_affine(self.matrix, self.translation, p)
    }

    pub fn apply_simplex(&self, s: Simplex) -> Simplex {
        let [a, b, c] = s.0;
        Simplex::new(self.apply_index(a), self.apply_index(b), self.apply_index(c))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let m = mat_mul(self.matrix, other.matrix);
        let t = apply_affine(
            self.matrix,
            self.translation,
            LatticePoint::new(other.translation[0], other.translation[1]),
        );
        Self {
            matrix: m,
            translation: [t.x, t.y],
            permutation: other
                .permutation
                .iter()
                .map(|&j| self.permutation[j as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.matrix;
        let det = a * d - b * c;
        // det is ±1, so the adjugate divided by det stays integral.
        let inv = [[d * det, -b * det], [-c * det, a * det]];
        let t = apply_affine(
            inv,
            [0, 0],
            LatticePoint::new(-self.translation[0], -self.translation[1]),
        );
        let mut permutation = vec![0; self.permutation.len()];
        for (i, &j) in self.permutation.iter().enumerate() {
            permutation[j as usize] = i as u32;
        }
        Self {
            matrix: inv,
            translation: [t.x, t.y],
            permutation,
        }
    }
}

fn apply_affine(m: [[i64; 2]; 2], t: [i64; 2], p: LatticePoint) -> LatticePoint {
    LatticePoint::new(
        m[0][0] * p.x + m[0][1] * p.y + t[0],
        m[1][0] * p.x + m[1][1] * p.y + t[1],
    )
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// A finite group of symmetries; the identity is always the first element.
#[derive(Clone, Debug)]
pub struct Group {
    elements: Vec<SymmetryAction>,
}

impl Group {
    /// Wraps a set of actions, moving the identity to the front. The caller
    /// guarantees closure.
    pub fn from_elements(mut elements: Vec<SymmetryAction>) -> Self {
        if let Some(pos) = elements.iter().position(SymmetryAction::is_identity) {
            elements.swap(0, pos);
        }
        elements.sort_by(|a, b| {
            b.is_identity()
                .cmp(&a.is_identity())
                .then_with(|| a.permutation.cmp(&b.permutation))
        });
        elements.dedup_by(|a, b| a.permutation == b.permutation);
        Self { elements }
    }

    pub fn trivial(config: &PointConfiguration) -> Self {
        Self {
            elements: vec![SymmetryAction::identity(config)],
        }
    }

    pub fn elements(&self) -> &[SymmetryAction] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains_permutation(&self, perm: &[u32]) -> bool {
        self.elements.iter().any(|g| g.permutation == perm)
    }

    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains_permutation(&a.inverse().permutation)
                && self
                    .elements
                    .iter()
                    .all(|b| self.contains_permutation(&a.compose(b).permutation))
        })
    }
}

/// All affine lattice symmetries of the configuration's point set.
///
/// Three affinely independent hull vertices are sent to every ordered triple
/// of hull vertices; each candidate map is solved exactly and validated on
/// every point.
pub fn symmetry_group(config: &PointConfiguration) -> Group {
    let hull = config.region().hull();
    let pts = config.points();
    let Some(basis) = affine_basis(&hull).or_else(|| affine_basis(pts)) else {
        return Group::trivial(config);
    };
    let targets: &[LatticePoint] = if affine_basis(&hull).is_some() {
        &hull
    } else {
        pts
    };

    let mut elements = Vec::new();
    for &a in targets {
        for &b in targets {
            for &c in targets {
                if a == b || b == c || a == c {
                    continue;
                }
                if let Some((m, t)) = solve_affine(basis, [a, b, c]) {
                    if let Ok(action) = SymmetryAction::from_affine(config, m, t) {
                        elements.push(action);
                    }
                }
            }
        }
    }
    if elements.is_empty() {
        elements.push(SymmetryAction::identity(config));
    }
    Group::from_elements(elements)
}

fn affine_basis(pts: &[LatticePoint]) -> Option<[LatticePoint; 3]> {
    let (&a, rest) = pts.split_first()?;
    let &b = rest.iter().find(|p| **p != a)?;
    let &c = rest.iter().find(|p| orient(a, b, **p) != 0)?;
    Some([a, b, c])
}

/// Integer affine map sending `src[i]` to `dst[i]`, if one exists.
fn solve_affine(
    src: [LatticePoint; 3],
    dst: [LatticePoint; 3],
) -> Option<([[i64; 2]; 2], [i64; 2])> {
    // Columns of the linear part solve M * (src1 - src0, src2 - src0) = (dst1 - dst0, dst2 - dst0).
    let (u1, u2) = (
        (src[1].x - src[0].x, src[1].y - src[0].y),
        (src[2].x - src[0].x, src[2].y - src[0].y),
    );
    let (v1, v2) = (
        (dst[1].x - dst[0].x, dst[1].y - dst[0].y),
        (dst[2].x - dst[0].x, dst[2].y - dst[0].y),
    );
    let det = u1.0 * u2.1 - u2.0 * u1.1;
    if det == 0 {
        return None;
    }
    // M = V * U^{-1}, U^{-1} = adj(U) / det.
    let adj = [[u2.1, -u2.0], [-u1.1, u1.0]];
    let v = [[v1.0, v2.0], [v1.1, v2.1]];
    let mut m = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let num = v[i][0] * adj[0][j] + v[i][1] * adj[1][j];
            if num % det != 0 {
                return None;
            }
            m[i][j] = num / det;
        }
    }
    let image = apply_affine(m, [0, 0], src[0]);
    Some((m, [dst[0].x - image.x, dst[0].y - image.y]))
}

/// The reflection `(x, y) -> (y, x)`, generator of the group `H`.
pub fn reflection(config: &PointConfiguration) -> Result<SymmetryAction, GeometryError> {
    if config.region().kind != RegionKind::FullTriangle {
        return Err(GeometryError::NotSymmetric(config.region()));
    }
    SymmetryAction::from_affine(config, [[0, 1], [1, 0]], [0, 0])
}

/// The group `H = {id, π}` of a full triangle.
pub fn reflection_group(config: &PointConfiguration) -> Result<Group, GeometryError> {
    let pi = reflection(config)?;
    Ok(Group::from_elements(vec![
        SymmetryAction::identity(config),
        pi,
    ]))
}

/// Whether the whole orbit `{s, π(s)}` can coexist in one triangulation.
pub fn h_feasible(config: &PointConfiguration, pi: &SymmetryAction, s: Simplex) -> bool {
    let image = pi.apply_simplex(s);
    image == s || properly_intersect(config, s, image)
}

/// Whether the union of the `H`-orbits of `s` and `r` is pairwise properly
/// intersecting.
pub fn h_admissible_pair(
    config: &PointConfiguration,
    pi: &SymmetryAction,
    s: Simplex,
    r: Simplex,
) -> bool {
    let orbit_s = [s, pi.apply_simplex(s)];
    let orbit_r = [r, pi.apply_simplex(r)];
    orbit_s.iter().all(|&a| {
        orbit_r
            .iter()
            .all(|&b| a == b || properly_intersect(config, a, b))
    })
}

/// Structural kinds of `H`-feasible unimodular triangles in a full triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeasibleClass {
    /// The simplex or its mirror image lies in the half region.
    SubsetOfHalf,
    /// `{(x, x-1), (x-1, x), (x', x')}` with `x' ∈ {x-1, x}`.
    AxisTriangle { x: i64, x_prime: i64 },
    Infeasible,
    /// The simplex is not unimodular; the classification says nothing.
    OutOfLemmaScope,
}

/// Classifies a simplex of a full triangle by coordinates alone.
pub fn classify_h_feasible(config: &PointConfiguration, s: Simplex) -> FeasibleClass {
    if !is_unimodular(config, s) {
        return FeasibleClass::OutOfLemmaScope;
    }
    let pts = config.simplex_points(s);
    if pts.iter().all(|p| p.y <= p.x) || pts.iter().all(|p| p.y >= p.x) {
        return FeasibleClass::SubsetOfHalf;
    }
    let Some(off) = pts.iter().find(|p| p.x - p.y == 1) else {
        return FeasibleClass::Infeasible;
    };
    let x = off.x;
    let mirror = LatticePoint::new(x - 1, x);
    let Some(apex) = pts.iter().find(|p| p.x == p.y) else {
        return FeasibleClass::Infeasible;
    };
    if pts.contains(&mirror) && (apex.x == x || apex.x == x - 1) {
        FeasibleClass::AxisTriangle {
            x,
            x_prime: apex.x,
        }
    } else {
        FeasibleClass::Infeasible
    }
}

/// The subgroup of `group` fixing `pool` as a set.
pub fn feasible_symmetry_group(group: &Group, pool: &[Simplex]) -> Group {
    let set: std::collections::HashSet<Simplex> = pool.iter().copied().collect();
    let elements = group
        .elements()
        .iter()
        .filter(|g| pool.iter().all(|s| set.contains(&g.apply_simplex(*s))))
        .cloned()
        .collect();
    Group::from_elements(elements)
}

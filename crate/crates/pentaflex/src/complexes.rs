//! Combinatorics of the bipyramid and its subdivision, realizations in
//! 3-space, edge lengths, congruence and non-degeneracy checks.

use crate::numeric::{certified_sign, NumericError, Scalar, DEFAULT_MAX_PRECISION_BITS};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("bipyramids need n >= 4 (triangular bipyramids are rigid), got n = {0}")]
    InvalidN(u8),
    #[error("edge {0}-{1} has certified-zero length")]
    DegenerateEdge(Vertex, Vertex),
    #[error("missing coordinates for vertex {0}")]
    MissingVertex(Vertex),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Vertex label. Ordering: equator ascending, then T, B, N, and the
/// auxiliary vertex 0 of the octahedra last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Eq(u8),
    Top,
    Bottom,
    Sub,
    Zero,
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Eq(i) => write!(f, "{i}"),
            Vertex::Top => write!(f, "T"),
            Vertex::Bottom => write!(f, "B"),
            Vertex::Sub => write!(f, "N"),
            Vertex::Zero => write!(f, "0"),
        }
    }
}

impl Vertex {
    pub fn parse(s: &str) -> Option<Vertex> {
        match s {
            "T" => Some(Vertex::Top),
            "B" => Some(Vertex::Bottom),
            "N" => Some(Vertex::Sub),
            "0" => Some(Vertex::Zero),
            _ => s.parse::<u8>().ok().filter(|&i| i >= 1).map(Vertex::Eq),
        }
    }
}

/// Unordered vertex pair, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(pub Vertex, pub Vertex);

impl EdgeKey {
    pub fn new(a: Vertex, b: Vertex) -> EdgeKey {
        if a <= b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Oriented triangular face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(pub [Vertex; 3]);

impl Face {
    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn shared_vertices(&self, other: &Face) -> Vec<Vertex> {
        self.0.iter().copied().filter(|v| other.contains(*v)).collect()
    }

    pub fn edges(&self) -> [EdgeKey; 3] {
        [
            EdgeKey::new(self.0[0], self.0[1]),
            EdgeKey::new(self.0[1], self.0[2]),
            EdgeKey::new(self.0[2], self.0[0]),
        ]
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.0[0], self.0[1], self.0[2])
    }
}

/// The n-gonal bipyramid: an n-cycle equator, every equator vertex
/// joined to the two apexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipyramidComplex {
    n: u8,
}

pub fn build_bipyramid(n: u8) -> Result<BipyramidComplex, ComplexError> {
    if n < 4 {
        return Err(ComplexError::InvalidN(n));
    }
    Ok(BipyramidComplex { n })
}

impl BipyramidComplex {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = (1..=self.n).map(Vertex::Eq).collect();
        v.push(Vertex::Top);
        v.push(Vertex::Bottom);
        v
    }

    fn next(&self, i: u8) -> u8 {
        if i == self.n {
            1
        } else {
            i + 1
        }
    }

    /// Oriented equatorial edges (1,2), ..., (n,1).
    pub fn equator_edges(&self) -> Vec<(Vertex, Vertex)> {
        (1..=self.n).map(|i| (Vertex::Eq(i), Vertex::Eq(self.next(i)))).collect()
    }

    /// Faces (i, i+1, T) and (i+1, i, B), each edge lying in exactly two
    /// faces with opposite orientation.
    pub fn faces(&self) -> Vec<Face> {
        let mut out = Vec::with_capacity(2 * self.n as usize);
        for i in 1..=self.n {
            out.push(Face([Vertex::Eq(i), Vertex::Eq(self.next(i)), Vertex::Top]));
        }
        for i in 1..=self.n {
            out.push(Face([Vertex::Eq(self.next(i)), Vertex::Eq(i), Vertex::Bottom]));
        }
        out
    }

    pub fn edges(&self) -> Vec<EdgeKey> {
        let mut out: Vec<EdgeKey> = self
            .equator_edges()
            .into_iter()
            .map(|(a, b)| EdgeKey::new(a, b))
            .collect();
        for i in 1..=self.n {
            out.push(EdgeKey::new(Vertex::Eq(i), Vertex::Top));
            out.push(EdgeKey::new(Vertex::Eq(i), Vertex::Bottom));
        }
        out.sort();
        out
    }

    /// Unordered vertex pairs that are not edges (equator diagonals and
    /// the top-bottom pair).
    pub fn non_edges(&self) -> Vec<EdgeKey> {
        let vs = self.vertices();
        let edges = self.edges();
        let mut out = Vec::new();
        for (a, b) in pairs(&vs) {
            let k = EdgeKey::new(a, b);
            if !edges.contains(&k) {
                out.push(k);
            }
        }
        out
    }

    /// The 3-cycles of the graph (= the faces, as vertex sets).
    pub fn triangles(&self) -> Vec<[Vertex; 3]> {
        self.faces().iter().map(|f| f.0).collect()
    }

    pub fn almost_tetrahedra(&self) -> Vec<AlmostTetrahedron> {
        (1..=self.n)
            .map(|i| AlmostTetrahedron { index: (Vertex::Eq(i), Vertex::Eq(self.next(i))) })
            .collect()
    }
}

/// Subgraph on {i, i+1, T, B}: a tetrahedron missing the edge {T, B}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlmostTetrahedron {
    pub index: (Vertex, Vertex),
}

impl AlmostTetrahedron {
    pub fn vertex_set(&self) -> [Vertex; 4] {
        [self.index.0, self.index.1, Vertex::Top, Vertex::Bottom]
    }

    pub fn missing_edge(&self) -> EdgeKey {
        EdgeKey::new(Vertex::Top, Vertex::Bottom)
    }
}

/// The pentagonal bipyramid with face {B,1,2} replaced by three faces
/// through the new vertex N. 8 vertices, 18 edges, 12 faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdividedComplex {
    base: BipyramidComplex,
}

pub fn build_subdivided() -> SubdividedComplex {
    SubdividedComplex { base: build_bipyramid(5).expect("n = 5 is valid") }
}

impl SubdividedComplex {
    pub fn base(&self) -> &BipyramidComplex {
        &self.base
    }

    pub fn replaced_face(&self) -> Face {
        Face([Vertex::Eq(2), Vertex::Eq(1), Vertex::Bottom])
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v = self.base.vertices();
        v.push(Vertex::Sub);
        v
    }

    /// Faces of the subdivided complex; the three new faces keep the
    /// boundary orientation of the removed face {B,1,2}.
    pub fn faces(&self) -> Vec<Face> {
        let removed = self.replaced_face();
        let mut out: Vec<Face> = self
            .base
            .faces()
            .into_iter()
            .filter(|f| {
                let mut a = f.0;
                let mut b = removed.0;
                a.sort();
                b.sort();
                a != b
            })
            .collect();
        out.push(Face([Vertex::Sub, Vertex::Eq(2), Vertex::Eq(1)]));
        out.push(Face([Vertex::Sub, Vertex::Eq(1), Vertex::Bottom]));
        out.push(Face([Vertex::Sub, Vertex::Bottom, Vertex::Eq(2)]));
        out
    }

    pub fn edges(&self) -> Vec<EdgeKey> {
        let mut out = self.base.edges();
        out.push(EdgeKey::new(Vertex::Sub, Vertex::Eq(1)));
        out.push(EdgeKey::new(Vertex::Sub, Vertex::Eq(2)));
        out.push(EdgeKey::new(Vertex::Sub, Vertex::Bottom));
        out.sort();
        out
    }
}

fn pairs(vs: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// Assignment of 3D points to vertex labels.
#[derive(Debug, Clone, Default)]
pub struct Realization {
    coords: BTreeMap<Vertex, [Scalar; 3]>,
}

impl Realization {
    pub fn new() -> Realization {
        Realization { coords: BTreeMap::new() }
    }

    pub fn insert(&mut self, v: Vertex, p: [Scalar; 3]) {
        self.coords.insert(v, p);
    }

    pub fn point(&self, v: Vertex) -> Result<&[Scalar; 3], ComplexError> {
        self.coords.get(&v).ok_or(ComplexError::MissingVertex(v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.coords.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, &[Scalar; 3])> {
        self.coords.iter()
    }

    pub fn dist_sq(&self, u: Vertex, v: Vertex) -> Result<Scalar, ComplexError> {
        let p = self.point(u)?;
        let q = self.point(v)?;
        Ok(point_dist_sq(p, q))
    }

    /// Apply a map to every coordinate triple (isometries, mirrors,
    /// scalings for tests).
    pub fn map_points<F: Fn(&[Scalar; 3]) -> [Scalar; 3]>(&self, f: F) -> Realization {
        Realization { coords: self.coords.iter().map(|(v, p)| (*v, f(p))).collect() }
    }

    /// Restrict to the given vertex set.
    pub fn restricted(&self, vs: &[Vertex]) -> Realization {
        Realization {
            coords: self
                .coords
                .iter()
                .filter(|(v, _)| vs.contains(v))
                .map(|(v, p)| (*v, p.clone()))
                .collect(),
        }
    }
}

pub fn point_dist_sq(p: &[Scalar; 3], q: &[Scalar; 3]) -> Scalar {
    let mut acc = Scalar::zero();
    for k in 0..3 {
        let d = p[k].sub(&q[k]);
        acc = acc.add(&d.mul(&d));
    }
    acc
}

pub fn point_sub(p: &[Scalar; 3], q: &[Scalar; 3]) -> [Scalar; 3] {
    [p[0].sub(&q[0]), p[1].sub(&q[1]), p[2].sub(&q[2])]
}

pub fn point_add(p: &[Scalar; 3], q: &[Scalar; 3]) -> [Scalar; 3] {
    [p[0].add(&q[0]), p[1].add(&q[1]), p[2].add(&q[2])]
}

pub fn point_scale(k: &Scalar, p: &[Scalar; 3]) -> [Scalar; 3] {
    [k.mul(&p[0]), k.mul(&p[1]), k.mul(&p[2])]
}

pub fn cross(u: &[Scalar; 3], v: &[Scalar; 3]) -> [Scalar; 3] {
    [
        u[1].mul(&v[2]).sub(&u[2].mul(&v[1])),
        u[2].mul(&v[0]).sub(&u[0].mul(&v[2])),
        u[0].mul(&v[1]).sub(&u[1].mul(&v[0])),
    ]
}

pub fn dot(u: &[Scalar; 3], v: &[Scalar; 3]) -> Scalar {
    u[0].mul(&v[0]).add(&u[1].mul(&v[1])).add(&u[2].mul(&v[2]))
}

/// Squared lengths (and lengths on demand) for a set of edges.
#[derive(Debug, Clone)]
pub struct EdgeLengths {
    pub lambda_sq: BTreeMap<EdgeKey, Scalar>,
}

/// Squared length of each edge; errors if an edge is certified
/// degenerate.
pub fn edge_lengths_sq(rho: &Realization, edges: &[EdgeKey]) -> Result<EdgeLengths, ComplexError> {
    let mut lambda_sq = BTreeMap::new();
    for &EdgeKey(u, v) in edges {
        let d = rho.dist_sq(u, v)?;
        if certified_sign(&d, DEFAULT_MAX_PRECISION_BITS)? == 0 {
            return Err(ComplexError::DegenerateEdge(u, v));
        }
        lambda_sq.insert(EdgeKey(u, v), d);
    }
    Ok(EdgeLengths { lambda_sq })
}

/// Decide whether two scalars are equal: exactly for exact values,
/// within enclosure width `2^(-tol_bits)` otherwise.
pub fn scalars_equal(a: &Scalar, b: &Scalar, tol_bits: u32, max_bits: u32) -> Result<bool, NumericError> {
    let diff = a.sub(b);
    match certified_sign(&diff, max_bits) {
        Ok(0) => Ok(true),
        Ok(_) => Ok(false),
        Err(NumericError::SignUndecidable { .. }) => {
            // Cannot separate from zero; accept as equal if the
            // enclosure is pinned below the tolerance.
            let refined = diff.refined(tol_bits, max_bits)?;
            let iv = refined.enclosure(tol_bits);
            Ok(iv.contains_zero())
        }
        Err(e) => Err(e),
    }
}

/// True iff a direct isometry maps `r1` onto `r2`: all pairwise squared
/// distances agree and one non-degenerate oriented volume keeps its
/// sign.
pub fn are_congruent(
    r1: &Realization,
    r2: &Realization,
    tol_bits: u32,
    max_bits: u32,
) -> Result<bool, ComplexError> {
    let vs: Vec<Vertex> = r1.vertices().collect();
    let vs2: Vec<Vertex> = r2.vertices().collect();
    if vs != vs2 {
        return Ok(false);
    }
    for (a, b) in pairs(&vs) {
        let d1 = r1.dist_sq(a, b)?;
        let d2 = r2.dist_sq(a, b)?;
        if !scalars_equal(&d1, &d2, tol_bits, max_bits)? {
            return Ok(false);
        }
    }
    // Find a quadruple with certified-nonzero volume in r1 and compare
    // orientation signs.
    for quad in quadruples(&vs) {
        let v1 = crate::cayley_menger::oriented_volume(
            r1.point(quad[0])?,
            r1.point(quad[1])?,
            r1.point(quad[2])?,
            r1.point(quad[3])?,
        );
        let s1 = match certified_sign(&v1, max_bits) {
            Ok(s) if s != 0 => s,
            _ => continue,
        };
        let v2 = crate::cayley_menger::oriented_volume(
            r2.point(quad[0])?,
            r2.point(quad[1])?,
            r2.point(quad[2])?,
            r2.point(quad[3])?,
        );
        let s2 = certified_sign(&v2, max_bits)?;
        return Ok(s1 == s2);
    }
    // All quadruples degenerate (planar realization): distances alone
    // determine congruence.
    Ok(true)
}

fn quadruples(vs: &[Vertex]) -> Vec<[Vertex; 4]> {
    let mut out = Vec::new();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            for k in j + 1..vs.len() {
                for l in k + 1..vs.len() {
                    out.push([vs[i], vs[j], vs[k], vs[l]]);
                }
            }
        }
    }
    out
}

/// Findings of a non-degeneracy check over flex samples.
#[derive(Debug, Clone, Default)]
pub struct NondegeneracyReport {
    /// (sample index, triangle) that is collinear.
    pub collinear_triangles: Vec<(usize, [Vertex; 3])>,
    /// Non-edges whose squared distance is constant across all samples.
    pub constant_non_edges: Vec<EdgeKey>,
    /// Pairs where a predicate could not be decided.
    pub undecided: Vec<String>,
}

impl NondegeneracyReport {
    pub fn is_nondegenerate(&self) -> bool {
        self.collinear_triangles.is_empty()
            && self.constant_non_edges.is_empty()
            && self.undecided.is_empty()
    }
}

/// Check the two non-degeneracy conditions over flex samples: no
/// 3-cycle collinear at any sample, and every non-edge changes its
/// length somewhere.
pub fn check_nondegeneracy(
    samples: &[Realization],
    complex: &BipyramidComplex,
    tol_bits: u32,
    max_bits: u32,
) -> Result<NondegeneracyReport, ComplexError> {
    assert!(samples.len() >= 2, "need at least two flex samples");
    let mut report = NondegeneracyReport::default();
    for (idx, rho) in samples.iter().enumerate() {
        for tri in complex.triangles() {
            let u = point_sub(rho.point(tri[1])?, rho.point(tri[0])?);
            let v = point_sub(rho.point(tri[2])?, rho.point(tri[0])?);
            let c = cross(&u, &v);
            let norm_sq = dot(&c, &c);
            match certified_sign(&norm_sq, max_bits) {
                Ok(0) => report.collinear_triangles.push((idx, tri)),
                Ok(_) => {}
                Err(NumericError::SignUndecidable { .. }) => {
                    report.undecided.push(format!(
                        "collinearity of {}-{}-{} at sample {idx}",
                        tri[0], tri[1], tri[2]
                    ));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    for k in complex.non_edges() {
        let base = samples[0].dist_sq(k.0, k.1)?;
        let mut constant = true;
        for rho in &samples[1..] {
            let d = rho.dist_sq(k.0, k.1)?;
            if !scalars_equal(&base, &d, tol_bits, max_bits)? {
                constant = false;
                break;
            }
        }
        if constant {
            report.constant_non_edges.push(k);
        }
    }
    Ok(report)
}

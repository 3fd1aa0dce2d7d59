//! Certified triangle–triangle contact classification and
//! self-intersection scanning of realized polyhedra.
//!
//! Contact through a combinatorially shared vertex or edge is allowed;
//! `Improper` means the faces meet beyond any shared simplex. Predicates
//! that are identically zero by construction (a shared vertex lies on
//! the other face's plane) are set to exact zero by label rather than
//! evaluated, so radical coordinates never stall on unprovable zeros.

use crate::complexes::{
    cross, dot, point_sub, ComplexError, Face, Realization, Vertex,
};
use crate::numeric::{certified_sign, NumericError, Scalar, DEFAULT_MAX_PRECISION_BITS};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IntersectionError {
    #[error("face {0} is degenerate (collinear vertices)")]
    DegenerateTriangle(Face),
    #[error("predicate undecidable for pair ({0}, {1}): {2}")]
    Undecidable(Face, Face, &'static str),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

const MAXB: u32 = DEFAULT_MAX_PRECISION_BITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactClass {
    Disjoint,
    SharedVertexOnly,
    SharedEdgeOnly,
    Improper,
}

impl ContactClass {
    pub fn name(&self) -> &'static str {
        match self {
            ContactClass::Disjoint => "disjoint",
            ContactClass::SharedVertexOnly => "shared-vertex",
            ContactClass::SharedEdgeOnly => "shared-edge",
            ContactClass::Improper => "improper",
        }
    }
}

fn sgn(x: &Scalar, f1: Face, f2: Face, what: &'static str) -> Result<i8, IntersectionError> {
    match certified_sign(x, MAXB) {
        Ok(s) => Ok(s),
        Err(NumericError::SignUndecidable { .. }) => Err(IntersectionError::Undecidable(f1, f2, what)),
        Err(e) => Err(e.into()),
    }
}

/// 6× the oriented volume of (a, b, c, d); the plane-side predicate.
fn orient3d(a: &[Scalar; 3], b: &[Scalar; 3], c: &[Scalar; 3], d: &[Scalar; 3]) -> Scalar {
    let u = point_sub(a, d);
    let v = point_sub(b, d);
    let w = point_sub(c, d);
    dot(&u, &cross(&v, &w))
}

struct Tri<'a> {
    labels: [Vertex; 3],
    pts: [&'a [Scalar; 3]; 3],
}

impl<'a> Tri<'a> {
    fn from_face(rho: &'a Realization, f: &Face) -> Result<Tri<'a>, IntersectionError> {
        Ok(Tri {
            labels: f.0,
            pts: [rho.point(f.0[0])?, rho.point(f.0[1])?, rho.point(f.0[2])?],
        })
    }

    fn normal(&self) -> [Scalar; 3] {
        cross(&point_sub(self.pts[1], self.pts[0]), &point_sub(self.pts[2], self.pts[0]))
    }
}

/// Plane-side values of `tri`'s vertices against `plane`'s supporting
/// plane; vertices shared with the plane triangle are structurally zero.
fn plane_heights(tri: &Tri, plane: &Tri, shared: &[Vertex]) -> Vec<Scalar> {
    tri.labels
        .iter()
        .zip(tri.pts.iter())
        .map(|(l, p)| {
            if shared.contains(l) {
                Scalar::zero()
            } else {
                orient3d(plane.pts[0], plane.pts[1], plane.pts[2], p)
            }
        })
        .collect()
}

/// Classify how the realized faces `f1` and `f2` meet.
pub fn classify_contact(rho: &Realization, f1: &Face, f2: &Face) -> Result<ContactClass, IntersectionError> {
    let t1 = Tri::from_face(rho, f1)?;
    let t2 = Tri::from_face(rho, f2)?;
    for (t, f) in [(&t1, f1), (&t2, f2)] {
        let n = t.normal();
        if sgn(&dot(&n, &n), *f1, *f2, "triangle degeneracy")? == 0 {
            return Err(IntersectionError::DegenerateTriangle(*f));
        }
    }
    let shared = f1.shared_vertices(f2);
    let by_shared = |len: usize| match len {
        0 => ContactClass::Disjoint,
        1 => ContactClass::SharedVertexOnly,
        _ => ContactClass::SharedEdgeOnly,
    };

    let h2 = plane_heights(&t2, &t1, &shared);
    let s2: Vec<i8> = h2
        .iter()
        .map(|h| sgn(h, *f1, *f2, "plane side"))
        .collect::<Result<_, _>>()?;
    if s2.iter().all(|&s| s > 0) || s2.iter().all(|&s| s < 0) {
        return Ok(by_shared(shared.len()));
    }
    if s2.iter().all(|&s| s == 0) {
        return classify_coplanar(&t1, &t2, f1, f2, &shared);
    }
    let h1 = plane_heights(&t1, &t2, &shared);
    let s1: Vec<i8> = h1
        .iter()
        .map(|h| sgn(h, *f1, *f2, "plane side"))
        .collect::<Result<_, _>>()?;
    if s1.iter().all(|&s| s > 0) || s1.iter().all(|&s| s < 0) {
        return Ok(by_shared(shared.len()));
    }
    if shared.len() == 2 {
        // Non-coplanar faces through a common edge meet exactly on it.
        return Ok(ContactClass::SharedEdgeOnly);
    }

    // Both triangles cross the common line of the two planes; compare
    // the parameter ranges of the two clipped segments along it.
    let d = cross(&t1.normal(), &t2.normal());
    if shared.len() == 1 {
        let sv = shared[0];
        let origin = rho.point(sv)?;
        let r1 = clip_relative_params(&t1, &h1, origin, &d, sv, *f1, *f2)?;
        let r2 = clip_relative_params(&t2, &h2, origin, &d, sv, *f1, *f2)?;
        // Each range contains 0 (the shared vertex); contact extends
        // beyond it iff both ranges continue to the same side.
        let pos = r1.iter().any(|&s| s > 0) && r2.iter().any(|&s| s > 0);
        let neg = r1.iter().any(|&s| s < 0) && r2.iter().any(|&s| s < 0);
        if pos || neg {
            Ok(ContactClass::Improper)
        } else {
            Ok(ContactClass::SharedVertexOnly)
        }
    } else {
        let p1 = clip_points(&t1, &h1, *f1, *f2)?;
        let p2 = clip_points(&t2, &h2, *f1, *f2)?;
        if p1.is_empty() || p2.is_empty() {
            return Ok(ContactClass::Disjoint);
        }
        // Pairwise parameter comparisons along d decide interval overlap
        // without forming min/max ties.
        let mut any_pos = false;
        let mut any_neg = false;
        let mut any_zero = false;
        for a in &p1 {
            let pa = dot(a, &d);
            for b in &p2 {
                let pb = dot(b, &d);
                match sgn(&pa.sub(&pb), *f1, *f2, "clip parameter order")? {
                    s if s > 0 => any_pos = true,
                    s if s < 0 => any_neg = true,
                    _ => any_zero = true,
                }
            }
        }
        if any_pos && any_neg {
            Ok(ContactClass::Improper)
        } else if any_zero {
            // Ranges touch in a single point; no shared simplex excuses it.
            Ok(ContactClass::Improper)
        } else {
            Ok(ContactClass::Disjoint)
        }
    }
}

/// Intersection points of `tri` with the plane whose per-vertex heights
/// are `h` (triangle–plane clipping).
fn clip_points(tri: &Tri, h: &[Scalar], f1: Face, f2: Face) -> Result<Vec<[Scalar; 3]>, IntersectionError> {
    let s: Vec<i8> = h.iter().map(|x| sgn(x, f1, f2, "clip side")).collect::<Result<_, _>>()?;
    let mut pts = Vec::new();
    for i in 0..3 {
        if s[i] == 0 {
            pts.push(tri.pts[i].clone());
        }
        let j = (i + 1) % 3;
        if s[i] * s[j] < 0 {
            // crossing point at t = h_i / (h_i − h_j)
            let t = h[i].div(&h[i].sub(&h[j]), MAXB)?;
            let e = point_sub(tri.pts[j], tri.pts[i]);
            pts.push([
                tri.pts[i][0].add(&t.mul(&e[0])),
                tri.pts[i][1].add(&t.mul(&e[1])),
                tri.pts[i][2].add(&t.mul(&e[2])),
            ]);
        }
    }
    Ok(pts)
}

/// Signs of the clip-segment parameters relative to the shared vertex:
/// the shared vertex contributes a structural zero, every other clip
/// point the certified sign of its offset along `d`.
fn clip_relative_params(
    tri: &Tri,
    h: &[Scalar],
    origin: &[Scalar; 3],
    d: &[Scalar; 3],
    shared: Vertex,
    f1: Face,
    f2: Face,
) -> Result<Vec<i8>, IntersectionError> {
    let s: Vec<i8> = h.iter().map(|x| sgn(x, f1, f2, "clip side")).collect::<Result<_, _>>()?;
    let mut signs = Vec::new();
    for i in 0..3 {
        if s[i] == 0 {
            if tri.labels[i] == shared {
                signs.push(0);
            } else {
                signs.push(sgn(&dot(&point_sub(tri.pts[i], origin), d), f1, f2, "relative clip parameter")?);
            }
        }
        let j = (i + 1) % 3;
        if s[i] * s[j] < 0 {
            let t = h[i].div(&h[i].sub(&h[j]), MAXB)?;
            let e = point_sub(tri.pts[j], tri.pts[i]);
            let p = [
                tri.pts[i][0].add(&t.mul(&e[0])),
                tri.pts[i][1].add(&t.mul(&e[1])),
                tri.pts[i][2].add(&t.mul(&e[2])),
            ];
            signs.push(sgn(&dot(&point_sub(&p, origin), d), f1, f2, "relative clip parameter")?);
        }
    }
    Ok(signs)
}

// -- coplanar subroutine ----------------------------------------------------

fn classify_coplanar(
    t1: &Tri,
    t2: &Tri,
    f1: &Face,
    f2: &Face,
    shared: &[Vertex],
) -> Result<ContactClass, IntersectionError> {
    // Project out an axis on which the common normal is certified nonzero.
    let n = t1.normal();
    let mut axis = None;
    for (i, c) in n.iter().enumerate() {
        if sgn(c, *f1, *f2, "normal component")? != 0 {
            axis = Some(i);
            break;
        }
    }
    let axis = axis.ok_or(IntersectionError::DegenerateTriangle(*f1))?;
    let pr = |p: &[Scalar; 3]| -> [Scalar; 2] {
        let mut out = Vec::with_capacity(2);
        for (i, c) in p.iter().enumerate() {
            if i != axis {
                out.push(c.clone());
            }
        }
        [out[0].clone(), out[1].clone()]
    };
    let u1: Vec<[Scalar; 2]> = t1.pts.iter().map(|p| pr(p)).collect();
    let u2: Vec<[Scalar; 2]> = t2.pts.iter().map(|p| pr(p)).collect();

    let orient2 = |a: &[Scalar; 2], b: &[Scalar; 2], c: &[Scalar; 2]| -> Scalar {
        b[0].sub(&a[0]).mul(&c[1].sub(&a[1])).sub(&b[1].sub(&a[1]).mul(&c[0].sub(&a[0])))
    };

    if shared.len() == 2 {
        // Improper exactly when the two opposite vertices fall on the
        // same side of the shared edge.
        let a = pr(pt_of(t1, shared[0]).or_else(|| pt_of(t2, shared[0])).unwrap());
        let b = pr(pt_of(t1, shared[1]).or_else(|| pt_of(t2, shared[1])).unwrap());
        let c1 = pr(opposite_vertex(t1, shared));
        let c2 = pr(opposite_vertex(t2, shared));
        let o1 = sgn(&orient2(&a, &b, &c1), *f1, *f2, "edge side")?;
        let o2 = sgn(&orient2(&a, &b, &c2), *f1, *f2, "edge side")?;
        return if o1 * o2 < 0 {
            Ok(ContactClass::SharedEdgeOnly)
        } else {
            Ok(ContactClass::Improper)
        };
    }

    let shared_proj: Vec<[Scalar; 2]> = shared
        .iter()
        .map(|v| pr(pt_of(t1, *v).unwrap()))
        .collect();
    let mut beyond = false;
    // Non-shared vertices inside the other triangle.
    for (tri_from, tri_to) in [((t2, &u2), &u1), ((t1, &u1), &u2)] {
        let ((t_from, u_from), u_to) = (tri_from, tri_to);
        for (l, v) in t_from.labels.iter().zip(u_from.iter()) {
            if shared.contains(l) {
                continue;
            }
            if point_in_triangle_2d(v, u_to, &orient2, *f1, *f2)? {
                beyond = true;
            }
        }
    }
    // Edge–edge meetings beyond the shared point.
    for i in 0..3 {
        for j in 0..3 {
            let meet = segment_points_2d(
                &u1[i],
                &u1[(i + 1) % 3],
                &u2[j],
                &u2[(j + 1) % 3],
                &orient2,
                *f1,
                *f2,
            )?;
            for p in meet {
                let is_shared_pt = match shared_proj.first() {
                    Some(sp) => {
                        sgn(&p[0].sub(&sp[0]), *f1, *f2, "shared point identity")? == 0
                            && sgn(&p[1].sub(&sp[1]), *f1, *f2, "shared point identity")? == 0
                    }
                    None => false,
                };
                if !is_shared_pt {
                    beyond = true;
                }
            }
        }
    }
    if beyond {
        Ok(ContactClass::Improper)
    } else if shared.len() == 1 {
        Ok(ContactClass::SharedVertexOnly)
    } else {
        Ok(ContactClass::Disjoint)
    }
}

fn pt_of<'a>(t: &Tri<'a>, v: Vertex) -> Option<&'a [Scalar; 3]> {
    t.labels.iter().position(|&l| l == v).map(|i| t.pts[i])
}

fn opposite_vertex<'a>(t: &Tri<'a>, shared: &[Vertex]) -> &'a [Scalar; 3] {
    let i = t
        .labels
        .iter()
        .position(|l| !shared.contains(l))
        .expect("triangle has a vertex off the shared edge");
    t.pts[i]
}

fn point_in_triangle_2d<F>(
    p: &[Scalar; 2],
    tri: &[[Scalar; 2]],
    orient2: &F,
    f1: Face,
    f2: Face,
) -> Result<bool, IntersectionError>
where
    F: Fn(&[Scalar; 2], &[Scalar; 2], &[Scalar; 2]) -> Scalar,
{
    let mut pos = false;
    let mut neg = false;
    for i in 0..3 {
        match sgn(&orient2(&tri[i], &tri[(i + 1) % 3], p), f1, f2, "2d orientation")? {
            s if s > 0 => pos = true,
            s if s < 0 => neg = true,
            _ => {}
        }
    }
    Ok(!(pos && neg))
}

/// Points where two 2D segments meet (0, 1 proper crossing, or the
/// endpoints lying on the other segment in collinear/touching cases).
fn segment_points_2d<F>(
    a: &[Scalar; 2],
    b: &[Scalar; 2],
    p: &[Scalar; 2],
    q: &[Scalar; 2],
    orient2: &F,
    f1: Face,
    f2: Face,
) -> Result<Vec<[Scalar; 2]>, IntersectionError>
where
    F: Fn(&[Scalar; 2], &[Scalar; 2], &[Scalar; 2]) -> Scalar,
{
    let d1 = sgn(&orient2(a, b, p), f1, f2, "2d crossing")?;
    let d2 = sgn(&orient2(a, b, q), f1, f2, "2d crossing")?;
    let d3 = sgn(&orient2(p, q, a), f1, f2, "2d crossing")?;
    let d4 = sgn(&orient2(p, q, b), f1, f2, "2d crossing")?;
    if d1 * d2 < 0 && d3 * d4 < 0 {
        let denom = b[0]
            .sub(&a[0])
            .mul(&q[1].sub(&p[1]))
            .sub(&b[1].sub(&a[1]).mul(&q[0].sub(&p[0])));
        let t = p[0]
            .sub(&a[0])
            .mul(&q[1].sub(&p[1]))
            .sub(&p[1].sub(&a[1]).mul(&q[0].sub(&p[0])))
            .div(&denom, MAXB)?;
        return Ok(vec![[
            a[0].add(&t.mul(&b[0].sub(&a[0]))),
            a[1].add(&t.mul(&b[1].sub(&a[1]))),
        ]]);
    }
    let mut out: Vec<[Scalar; 2]> = Vec::new();
    for (u, v, w, dd) in [(a, b, p, d1), (a, b, q, d2), (p, q, a, d3), (p, q, b, d4)] {
        if dd != 0 {
            continue;
        }
        // w is on the line through u, v; check it lies within the box.
        let mut inside = true;
        for k in 0..2 {
            let lo_side = sgn(&w[k].sub(&u[k]), f1, f2, "collinear box")?;
            let hi_side = sgn(&w[k].sub(&v[k]), f1, f2, "collinear box")?;
            if lo_side * hi_side > 0 {
                inside = false;
            }
        }
        if inside {
            let duplicate = out.iter().any(|p_| {
                matches!(certified_sign(&p_[0].sub(&w[0]), MAXB), Ok(0))
                    && matches!(certified_sign(&p_[1].sub(&w[1]), MAXB), Ok(0))
            });
            if !duplicate {
                out.push(w.clone());
            }
        }
    }
    Ok(out)
}

// -- whole-polyhedron scanning ---------------------------------------------

#[derive(Debug)]
pub struct ContactReport {
    pub pairs: Vec<(Face, Face, ContactClass)>,
    pub improper: Vec<(Face, Face)>,
    pub undecided: Vec<(Face, Face, &'static str)>,
    /// Minimum squared distance over face pairs sharing no vertex.
    pub min_separation_sq: Option<Scalar>,
}

impl ContactReport {
    pub fn improper_count(&self) -> usize {
        self.improper.len()
    }
}

/// Classify every unordered face pair, in the canonical order the face
/// list induces, and measure the minimum separation margin over vertex-
/// disjoint pairs.
pub fn scan_polyhedron(rho: &Realization, faces: &[Face]) -> Result<ContactReport, IntersectionError> {
    let mut report = ContactReport {
        pairs: Vec::new(),
        improper: Vec::new(),
        undecided: Vec::new(),
        min_separation_sq: None,
    };
    for (i, f1) in faces.iter().enumerate() {
        for f2 in &faces[i + 1..] {
            match classify_contact(rho, f1, f2) {
                Ok(class) => {
                    if class == ContactClass::Improper {
                        report.improper.push((*f1, *f2));
                    }
                    report.pairs.push((*f1, *f2, class));
                }
                Err(IntersectionError::Undecidable(_, _, what)) => {
                    report.undecided.push((*f1, *f2, what));
                }
                Err(e) => return Err(e),
            }
            if f1.shared_vertices(f2).is_empty() {
                let d = triangle_distance_sq(rho, f1, f2)?;
                report.min_separation_sq = Some(match report.min_separation_sq.take() {
                    None => d,
                    Some(m) => m.min(&d),
                });
            }
        }
    }
    Ok(report)
}

/// Scan a family of poses; one report per sample.
pub fn scan_flex<E, S>(
    poses: impl IntoIterator<Item = Result<(S, Realization), E>>,
    faces: &[Face],
) -> Result<Vec<(S, ContactReport)>, IntersectionError>
where
    IntersectionError: From<E>,
{
    let mut out = Vec::new();
    for pose in poses {
        let (sample, rho) = pose?;
        out.push((sample, scan_polyhedron(&rho, faces)?));
    }
    Ok(out)
}

// -- separation margin ------------------------------------------------------

/// Squared distance from a point to a segment (exact clamped projection).
fn point_segment_dist_sq(p: &[Scalar; 3], a: &[Scalar; 3], b: &[Scalar; 3]) -> Result<Scalar, IntersectionError> {
    let v = point_sub(b, a);
    let w = point_sub(p, a);
    let vv = dot(&v, &v);
    let t = dot(&w, &v).div(&vv, MAXB)?;
    let t = t.max(&Scalar::zero()).min(&Scalar::from_int(1));
    let diff = [
        w[0].sub(&t.mul(&v[0])),
        w[1].sub(&t.mul(&v[1])),
        w[2].sub(&t.mul(&v[2])),
    ];
    Ok(dot(&diff, &diff))
}

/// Interior–interior critical point of two segments, clamped to the
/// parameter square; None when (near-)parallel.
fn segment_segment_candidate(
    p1: &[Scalar; 3],
    q1: &[Scalar; 3],
    p2: &[Scalar; 3],
    q2: &[Scalar; 3],
) -> Option<Scalar> {
    let u = point_sub(q1, p1);
    let v = point_sub(q2, p2);
    let w0 = point_sub(p1, p2);
    let a = dot(&u, &u);
    let b = dot(&u, &v);
    let c = dot(&v, &v);
    let d = dot(&u, &w0);
    let e = dot(&v, &w0);
    let denom = a.mul(&c).sub(&b.mul(&b));
    let s = b.mul(&e).sub(&c.mul(&d)).div(&denom, MAXB).ok()?;
    let t = a.mul(&e).sub(&b.mul(&d)).div(&denom, MAXB).ok()?;
    let s = s.max(&Scalar::zero()).min(&Scalar::from_int(1));
    let t = t.max(&Scalar::zero()).min(&Scalar::from_int(1));
    let diff = [
        w0[0].add(&s.mul(&u[0])).sub(&t.mul(&v[0])),
        w0[1].add(&s.mul(&u[1])).sub(&t.mul(&v[1])),
        w0[2].add(&s.mul(&u[2])).sub(&t.mul(&v[2])),
    ];
    Some(dot(&diff, &diff))
}

/// Squared distance from a point to a triangle's interior, when the
/// plane projection falls inside; boundary cases are covered by the
/// segment candidates.
fn point_triangle_interior_candidate(p: &[Scalar; 3], tri: &Tri) -> Option<Scalar> {
    let n = tri.normal();
    let nn = dot(&n, &n);
    let h = dot(&point_sub(p, tri.pts[0]), &n);
    // Projection q = p − (h/nn)·n; inside test via consistent volumes.
    let mut pos = false;
    let mut neg = false;
    for i in 0..3 {
        let side = orient3d(tri.pts[i], tri.pts[(i + 1) % 3], &[
            tri.pts[i][0].add(&n[0]),
            tri.pts[i][1].add(&n[1]),
            tri.pts[i][2].add(&n[2]),
        ], p);
        match certified_sign(&side, MAXB) {
            Ok(s) if s > 0 => pos = true,
            Ok(s) if s < 0 => neg = true,
            Ok(_) => {}
            Err(_) => return None,
        }
    }
    if pos && neg {
        return None;
    }
    Some(h.mul(&h).div(&nn, MAXB).ok()?)
}

/// Distance² between two vertex-disjoint realized triangles: minimum of
/// all clamped point–segment, segment–segment, and gated point-interior
/// candidates.
pub fn triangle_distance_sq(rho: &Realization, f1: &Face, f2: &Face) -> Result<Scalar, IntersectionError> {
    let t1 = Tri::from_face(rho, f1)?;
    let t2 = Tri::from_face(rho, f2)?;
    let mut best: Option<Scalar> = None;
    let mut fold = |cand: Scalar| {
        best = Some(match best.take() {
            None => cand,
            Some(m) => m.min(&cand),
        });
    };
    for i in 0..3 {
        for j in 0..3 {
            fold(point_segment_dist_sq(t1.pts[i], t2.pts[j], t2.pts[(j + 1) % 3])?);
            fold(point_segment_dist_sq(t2.pts[i], t1.pts[j], t1.pts[(j + 1) % 3])?);
            if let Some(c) =
                segment_segment_candidate(t1.pts[i], t1.pts[(i + 1) % 3], t2.pts[j], t2.pts[(j + 1) % 3])
            {
                fold(c);
            }
        }
        if let Some(c) = point_triangle_interior_candidate(t1.pts[i], &t2) {
            fold(c);
        }
        if let Some(c) = point_triangle_interior_candidate(t2.pts[i], &t1) {
            fold(c);
        }
    }
    Ok(best.expect("point-segment candidates always exist"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_bipyramid, build_subdivided};
    use crate::constructions::{place_vertex_n, type1_construct, Type1Params};

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::from_frac(n, d)
    }

    fn tri_realization(pts: &[(Vertex, [(i64, i64); 3])]) -> Realization {
        let mut r = Realization::new();
        for (v, p) in pts {
            r.insert(*v, [rat(p[0].0, p[0].1), rat(p[1].0, p[1].1), rat(p[2].0, p[2].1)]);
        }
        r
    }

    #[test]
    fn far_apart_triangles_disjoint() {
        let r = tri_realization(&[
            (Vertex::Eq(1), [(0, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(2), [(1, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(3), [(0, 1), (1, 1), (0, 1)]),
            (Vertex::Eq(4), [(10, 1), (0, 1), (5, 1)]),
            (Vertex::Eq(5), [(11, 1), (0, 1), (5, 1)]),
            (Vertex::Top, [(10, 1), (1, 1), (5, 1)]),
        ]);
        let f1 = Face([Vertex::Eq(1), Vertex::Eq(2), Vertex::Eq(3)]);
        let f2 = Face([Vertex::Eq(4), Vertex::Eq(5), Vertex::Top]);
        assert_eq!(classify_contact(&r, &f1, &f2).unwrap(), ContactClass::Disjoint);
        let d = triangle_distance_sq(&r, &f1, &f2).unwrap();
        assert_eq!(certified_sign(&d, 1024).unwrap(), 1);
    }

    #[test]
    fn crossing_triangles_improper() {
        // f2 pierces f1 through its interior
        let r = tri_realization(&[
            (Vertex::Eq(1), [(-2, 1), (-2, 1), (0, 1)]),
            (Vertex::Eq(2), [(2, 1), (-2, 1), (0, 1)]),
            (Vertex::Eq(3), [(0, 1), (2, 1), (0, 1)]),
            (Vertex::Eq(4), [(0, 1), (0, 1), (-1, 1)]),
            (Vertex::Eq(5), [(1, 2), (0, 1), (1, 1)]),
            (Vertex::Top, [(-1, 2), (0, 1), (1, 1)]),
        ]);
        let f1 = Face([Vertex::Eq(1), Vertex::Eq(2), Vertex::Eq(3)]);
        let f2 = Face([Vertex::Eq(4), Vertex::Eq(5), Vertex::Top]);
        assert_eq!(classify_contact(&r, &f1, &f2).unwrap(), ContactClass::Improper);
        // symmetry
        assert_eq!(classify_contact(&r, &f2, &f1).unwrap(), ContactClass::Improper);
    }

    fn convex_bipyramid() -> Realization {
        tri_realization(&[
            (Vertex::Eq(1), [(1, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(2), [(1, 3), (19, 20), (0, 1)]),
            (Vertex::Eq(3), [(-4, 5), (3, 5), (0, 1)]),
            (Vertex::Eq(4), [(-4, 5), (-3, 5), (0, 1)]),
            (Vertex::Eq(5), [(1, 3), (-19, 20), (0, 1)]),
            (Vertex::Top, [(0, 1), (0, 1), (1, 1)]),
            (Vertex::Bottom, [(0, 1), (0, 1), (-1, 1)]),
        ])
    }

    #[test]
    fn convex_bipyramid_is_clean() {
        let rho = convex_bipyramid();
        let b5 = build_bipyramid(5).unwrap();
        let report = scan_polyhedron(&rho, &b5.faces()).unwrap();
        assert_eq!(report.improper_count(), 0, "improper: {:?}", report.improper);
        assert!(report.undecided.is_empty());
        let margin = report.min_separation_sq.unwrap();
        assert_eq!(certified_sign(&margin, 1024).unwrap(), 1);
        // adjacent faces share their edge
        for (f1, f2, class) in &report.pairs {
            if f1.shared_vertices(f2).len() == 2 {
                assert_eq!(*class, ContactClass::SharedEdgeOnly, "{f1} vs {f2}");
            }
        }
    }

    #[test]
    fn unit_height_realization_has_exactly_three_improper_pairs() {
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let report = scan_polyhedron(&rho, &b5.faces()).unwrap();
        assert!(report.undecided.is_empty());
        let mut got: Vec<(Vec<Vertex>, Vec<Vertex>)> = report
            .improper
            .iter()
            .map(|(a, b)| {
                let mut x = a.0.to_vec();
                let mut y = b.0.to_vec();
                x.sort();
                y.sort();
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        got.sort();
        use Vertex::*;
        let expect = |a: [Vertex; 3], b: [Vertex; 3]| {
            let mut x = a.to_vec();
            let mut y = b.to_vec();
            x.sort();
            y.sort();
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        };
        let mut want = vec![
            expect([Bottom, Eq(1), Eq(2)], [Top, Eq(4), Eq(5)]),
            expect([Bottom, Eq(1), Eq(2)], [Top, Eq(5), Eq(1)]),
            expect([Bottom, Eq(1), Eq(2)], [Bottom, Eq(4), Eq(5)]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn subdivided_unit_height_realization_is_embedded() {
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let with_n = place_vertex_n(&rho).unwrap();
        let s = build_subdivided();
        let report = scan_polyhedron(&with_n, &s.faces()).unwrap();
        assert_eq!(report.improper_count(), 0, "improper: {:?}", report.improper);
        assert!(report.undecided.is_empty());
        assert_eq!(
            certified_sign(report.min_separation_sq.as_ref().unwrap(), 1024).unwrap(),
            1
        );
    }

    #[test]
    fn rational_isometry_and_scaling_invariance() {
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let base = scan_polyhedron(&rho, &b5.faces()).unwrap();
        let moved = rho.map_points(|p| {
            [
                rat(3, 5).mul(&p[0]).sub(&rat(4, 5).mul(&p[1])).add(&Scalar::from_int(7)),
                rat(4, 5).mul(&p[0]).add(&rat(3, 5).mul(&p[1])).sub(&Scalar::from_int(2)),
                p[2].add(&Scalar::from_int(1)),
            ]
        });
        let scaled = rho.map_points(|p| [rat(3, 2).mul(&p[0]), rat(3, 2).mul(&p[1]), rat(3, 2).mul(&p[2])]);
        for other in [moved, scaled] {
            let r2 = scan_polyhedron(&other, &b5.faces()).unwrap();
            let classes: Vec<_> = base.pairs.iter().map(|(_, _, c)| *c).collect();
            let classes2: Vec<_> = r2.pairs.iter().map(|(_, _, c)| *c).collect();
            assert_eq!(classes, classes2);
        }
    }

    #[test]
    fn coplanar_shared_edge_cases() {
        // two coplanar triangles sharing edge 1-2, opposite sides: proper
        let mut r = tri_realization(&[
            (Vertex::Eq(1), [(0, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(2), [(2, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(3), [(1, 1), (1, 1), (0, 1)]),
            (Vertex::Eq(4), [(1, 1), (-1, 1), (0, 1)]),
        ]);
        let f1 = Face([Vertex::Eq(1), Vertex::Eq(2), Vertex::Eq(3)]);
        let f2 = Face([Vertex::Eq(2), Vertex::Eq(1), Vertex::Eq(4)]);
        assert_eq!(classify_contact(&r, &f1, &f2).unwrap(), ContactClass::SharedEdgeOnly);
        // fold vertex 4 onto the same side: improper overlap
        r.insert(Vertex::Eq(4), [rat(1, 1), rat(1, 2), rat(0, 1)]);
        assert_eq!(classify_contact(&r, &f1, &f2).unwrap(), ContactClass::Improper);
    }

    #[test]
    fn shared_vertex_cases() {
        // two triangles sharing only vertex 1, otherwise separated
        let r = tri_realization(&[
            (Vertex::Eq(1), [(0, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(2), [(1, 1), (0, 1), (1, 1)]),
            (Vertex::Eq(3), [(1, 1), (1, 1), (1, 1)]),
            (Vertex::Eq(4), [(-1, 1), (0, 1), (-1, 1)]),
            (Vertex::Eq(5), [(-1, 1), (1, 1), (-1, 1)]),
        ]);
        let f1 = Face([Vertex::Eq(1), Vertex::Eq(2), Vertex::Eq(3)]);
        let f2 = Face([Vertex::Eq(1), Vertex::Eq(4), Vertex::Eq(5)]);
        assert_eq!(classify_contact(&r, &f1, &f2).unwrap(), ContactClass::SharedVertexOnly);
        // fold one triangle through the other: improper through the vertex
        let r2 = tri_realization(&[
            (Vertex::Eq(1), [(0, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(2), [(2, 1), (-1, 1), (0, 1)]),
            (Vertex::Eq(3), [(2, 1), (1, 1), (0, 1)]),
            (Vertex::Eq(4), [(2, 1), (0, 1), (-1, 1)]),
            (Vertex::Eq(5), [(2, 1), (0, 1), (1, 1)]),
        ]);
        let f1 = Face([Vertex::Eq(1), Vertex::Eq(2), Vertex::Eq(3)]);
        let f2 = Face([Vertex::Eq(1), Vertex::Eq(4), Vertex::Eq(5)]);
        assert_eq!(classify_contact(&r2, &f1, &f2).unwrap(), ContactClass::Improper);
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let r = tri_realization(&[
            (Vertex::Eq(1), [(0, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(2), [(1, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(3), [(2, 1), (0, 1), (0, 1)]),
            (Vertex::Eq(4), [(0, 1), (5, 1), (0, 1)]),
            (Vertex::Eq(5), [(1, 1), (5, 1), (0, 1)]),
            (Vertex::Top, [(0, 1), (5, 1), (1, 1)]),
        ]);
        let f1 = Face([Vertex::Eq(1), Vertex::Eq(2), Vertex::Eq(3)]);
        let f2 = Face([Vertex::Eq(4), Vertex::Eq(5), Vertex::Top]);
        assert!(matches!(
            classify_contact(&r, &f1, &f2),
            Err(IntersectionError::DegenerateTriangle(_))
        ));
    }
}

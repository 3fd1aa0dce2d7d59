//! Oriented Cayley–Menger coordinates of a bipyramid: squared distances
//! together with oriented volumes of the almost-tetrahedra, the bordered
//! determinant identities they satisfy, and the recursion reconstructing
//! all diagonal distances and volumes from the edge data.

use crate::complexes::{BipyramidComplex, ComplexError, EdgeKey, Realization, Vertex};
use crate::numeric::{certified_sign, NumericError, Scalar, DEFAULT_MAX_PRECISION_BITS};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CmError {
    #[error("coefficient a is certified zero reconstructing pair ({i},{j}) with pivot {k}")]
    SingularCoefficient { i: u8, j: u8, k: u8 },
    #[error("seed violates 288 s^2 = det M on equatorial edge ({0},{1})")]
    InconsistentSeed(u8, u8),
    #[error("missing value for pair {0}-{1}")]
    MissingPair(Vertex, Vertex),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Oriented volume of the tetrahedron spanned by four points:
/// det(a1 − a4, a2 − a4, a3 − a4) / 6.
pub fn oriented_volume(a1: &[Scalar; 3], a2: &[Scalar; 3], a3: &[Scalar; 3], a4: &[Scalar; 3]) -> Scalar {
    let u = crate::complexes::point_sub(a1, a4);
    let v = crate::complexes::point_sub(a2, a4);
    let w = crate::complexes::point_sub(a3, a4);
    let d = crate::complexes::dot(&u, &crate::complexes::cross(&v, &w));
    d.mul(&Scalar::from_frac(1, 6))
}

/// Exact determinant of a square matrix of scalars by Laplace expansion
/// along the first row.
pub fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Scalar::zero();
    for (col, entry) in m[0].iter().enumerate() {
        if let Some(r) = entry.as_exact() {
            if num_traits::Zero::is_zero(r) {
                continue;
            }
        }
        let minor: Vec<Vec<Scalar>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = entry.mul(&determinant(&minor));
        acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Bordered 5×5 Cayley–Menger determinant of four points p, q, r, s
/// given their six pairwise squared distances.
pub fn bordered_det_4(
    d_pq: &Scalar,
    d_pr: &Scalar,
    d_ps: &Scalar,
    d_qr: &Scalar,
    d_qs: &Scalar,
    d_rs: &Scalar,
) -> Scalar {
    let z = Scalar::zero;
    let one = || Scalar::from_int(1);
    let m = vec![
        vec![z(), one(), one(), one(), one()],
        vec![one(), z(), d_pq.clone(), d_pr.clone(), d_ps.clone()],
        vec![one(), d_pq.clone(), z(), d_qr.clone(), d_qs.clone()],
        vec![one(), d_pr.clone(), d_qr.clone(), z(), d_rs.clone()],
        vec![one(), d_ps.clone(), d_qs.clone(), d_rs.clone(), z()],
    ];
    determinant(&m)
}

/// Determinant of the matrix M_{i,i+1,T,B} for an almost-tetrahedron,
/// taking squared distances in this order.
pub fn cm_det_5x5(
    d_i_ip1: &Scalar,
    d_i_t: &Scalar,
    d_i_b: &Scalar,
    d_ip1_t: &Scalar,
    d_ip1_b: &Scalar,
    d_tb: &Scalar,
) -> Scalar {
    bordered_det_4(d_i_ip1, d_i_t, d_i_b, d_ip1_t, d_ip1_b, d_tb)
}

/// Oriented volume of the tetrahedron on a diagonal pair (i, j) with
/// both apexes; antisymmetric in (i, j), and equal to s_{i,i+1} on
/// equatorial edges.
#[derive(Debug, Clone)]
pub struct SignedDiagonalVolume {
    pub i: u8,
    pub j: u8,
    pub value: Scalar,
}

/// Squared volume W of a tetrahedron, a polynomial in its six squared
/// distances.
#[derive(Debug, Clone)]
pub struct SquaredVolume {
    pub vertex_quadruple: [Vertex; 4],
    pub value: Scalar,
}

/// The image of a realization under the squared-distance / oriented-
/// volume embedding. `sigma` covers ordered equatorial pairs; its
/// restriction to edges (i, i+1) is the s-coordinate.
#[derive(Debug, Clone)]
pub struct ConfigurationPoint {
    pub n: u8,
    pub d: BTreeMap<EdgeKey, Scalar>,
    pub sigma: BTreeMap<(u8, u8), Scalar>,
}

impl ConfigurationPoint {
    pub fn dist_sq(&self, u: Vertex, v: Vertex) -> Result<&Scalar, CmError> {
        if u == v {
            // d_vv = 0 is represented implicitly; callers use dist_sq_or_zero.
        }
        self.d.get(&EdgeKey::new(u, v)).ok_or(CmError::MissingPair(u, v))
    }

    pub fn dist_sq_or_zero(&self, u: Vertex, v: Vertex) -> Result<Scalar, CmError> {
        if u == v {
            return Ok(Scalar::zero());
        }
        self.dist_sq(u, v).cloned()
    }

    /// ς_{ij}; antisymmetric, zero on the diagonal.
    pub fn sigma(&self, i: u8, j: u8) -> Result<Scalar, CmError> {
        if i == j {
            return Ok(Scalar::zero());
        }
        if let Some(v) = self.sigma.get(&(i, j)) {
            return Ok(v.clone());
        }
        if let Some(v) = self.sigma.get(&(j, i)) {
            return Ok(v.neg());
        }
        Err(CmError::MissingPair(Vertex::Eq(i), Vertex::Eq(j)))
    }

    fn next(&self, i: u8) -> u8 {
        if i == self.n {
            1
        } else {
            i + 1
        }
    }

    /// The s-coordinates on oriented equatorial edges (i, i+1).
    pub fn s_edges(&self) -> Result<Vec<((u8, u8), Scalar)>, CmError> {
        (1..=self.n)
            .map(|i| {
                let j = self.next(i);
                Ok(((i, j), self.sigma(i, j)?))
            })
            .collect()
    }

    /// Squared volume of a tetrahedron on labels, via the bordered
    /// determinant of its squared distances over 288.
    pub fn squared_volume(&self, q: [Vertex; 4]) -> Result<SquaredVolume, CmError> {
        let det = bordered_det_4(
            &self.dist_sq_or_zero(q[0], q[1])?,
            &self.dist_sq_or_zero(q[0], q[2])?,
            &self.dist_sq_or_zero(q[0], q[3])?,
            &self.dist_sq_or_zero(q[1], q[2])?,
            &self.dist_sq_or_zero(q[1], q[3])?,
            &self.dist_sq_or_zero(q[2], q[3])?,
        );
        let value = det.mul(&Scalar::from_frac(1, 288));
        Ok(SquaredVolume { vertex_quadruple: q, value })
    }
}

/// Embed a realization: all pairwise squared distances plus the
/// oriented volumes of the almost-tetrahedra.
pub fn embed(rho: &Realization, complex: &BipyramidComplex) -> Result<ConfigurationPoint, CmError> {
    let vs = complex.vertices();
    let mut d = BTreeMap::new();
    for (a_idx, &a) in vs.iter().enumerate() {
        for &b in &vs[a_idx + 1..] {
            d.insert(EdgeKey::new(a, b), rho.dist_sq(a, b)?);
        }
    }
    let mut sigma = BTreeMap::new();
    for (i, j) in complex
        .equator_edges()
        .into_iter()
        .map(|(a, b)| match (a, b) {
            (Vertex::Eq(i), Vertex::Eq(j)) => (i, j),
            _ => unreachable!("equator edges join equator vertices"),
        })
    {
        let v = oriented_volume(
            rho.point(Vertex::Eq(i))?,
            rho.point(Vertex::Eq(j))?,
            rho.point(Vertex::Top)?,
            rho.point(Vertex::Bottom)?,
        );
        sigma.insert((i, j), v);
    }
    Ok(ConfigurationPoint { n: complex.n(), d, sigma })
}

/// Σ of the s-coordinates over the equator. This equals the generalized
/// volume of the realization (fix B at the origin: only faces through T
/// contribute, giving the almost-tetrahedron volumes), and it vanishes
/// along any flex by the bellows theorem.
pub fn generalized_volume(cp: &ConfigurationPoint) -> Result<Scalar, CmError> {
    let mut acc = Scalar::zero();
    for (_, s) in cp.s_edges()? {
        acc = acc.add(&s);
    }
    Ok(acc)
}

/// a_k = 2(d_kT d_kB + d_kT d_TB + d_kB d_TB) − (d_kT² + d_kB² + d_TB²).
fn coeff_a_k(d_kt: &Scalar, d_kb: &Scalar, d_tb: &Scalar) -> Scalar {
    let two = Scalar::from_int(2);
    let prod_sum = d_kt.mul(d_kb).add(&d_kt.mul(d_tb)).add(&d_kb.mul(d_tb));
    let sq_sum = d_kt.mul(d_kt).add(&d_kb.mul(d_kb)).add(&d_tb.mul(d_tb));
    two.mul(&prod_sum).sub(&sq_sum)
}

struct BInputs {
    d_ik: Scalar,
    d_kj: Scalar,
    d_it: Scalar,
    d_ib: Scalar,
    d_jt: Scalar,
    d_jb: Scalar,
    d_kt: Scalar,
    d_kb: Scalar,
    d_tb: Scalar,
}

/// The reconstruction polynomial b_{ijk}.
fn coeff_b_ijk(v: &BInputs) -> Scalar {
    let two = Scalar::from_int(2);
    let line1 = v
        .d_ik
        .mul(&v.d_jb.sub(&v.d_jt))
        .add(&v.d_kj.mul(&v.d_ib.sub(&v.d_it)))
        .add(&v.d_kb.mul(&v.d_it.add(&v.d_jt)))
        .sub(&v.d_kt.mul(&v.d_ib.add(&v.d_jb)))
        .mul(&v.d_kb.sub(&v.d_kt));
    let line2 = v.d_tb.mul(
        &v.d_it
            .mul(&v.d_kb.add(&v.d_kj))
            .add(&v.d_ib.mul(&v.d_kt.add(&v.d_kj)))
            .add(&v.d_jt.mul(&v.d_ik.add(&v.d_kb)))
            .add(&v.d_jb.mul(&v.d_ik.add(&v.d_kt))),
    );
    let line3 = v.d_kb.add(&v.d_kt).sub(&v.d_tb).mul(
        &v.d_tb
            .mul(&v.d_ik.add(&v.d_kj))
            .add(&v.d_it.mul(&v.d_jb).add(&v.d_jt.mul(&v.d_ib))),
    );
    let line4 = two.mul(
        &v.d_it
            .mul(&v.d_kb)
            .mul(&v.d_jt)
            .add(&v.d_ib.mul(&v.d_kt).mul(&v.d_jb))
            .add(&v.d_kb.mul(&v.d_kt).mul(&v.d_tb))
            .add(&v.d_ik.mul(&v.d_kj).mul(&v.d_tb)),
    );
    line1.sub(&line2).sub(&line3).add(&line4)
}

fn b_inputs(cp: &ConfigurationPoint, i: u8, j: u8, k: u8) -> Result<BInputs, CmError> {
    let t = Vertex::Top;
    let b = Vertex::Bottom;
    Ok(BInputs {
        d_ik: cp.dist_sq_or_zero(Vertex::Eq(i), Vertex::Eq(k))?,
        d_kj: cp.dist_sq_or_zero(Vertex::Eq(k), Vertex::Eq(j))?,
        d_it: cp.dist_sq_or_zero(Vertex::Eq(i), t)?,
        d_ib: cp.dist_sq_or_zero(Vertex::Eq(i), b)?,
        d_jt: cp.dist_sq_or_zero(Vertex::Eq(j), t)?,
        d_jb: cp.dist_sq_or_zero(Vertex::Eq(j), b)?,
        d_kt: cp.dist_sq_or_zero(Vertex::Eq(k), t)?,
        d_kb: cp.dist_sq_or_zero(Vertex::Eq(k), b)?,
        d_tb: cp.dist_sq_or_zero(t, b)?,
    })
}

/// Solve a_k d_ij + b_ijk − 288 ς_ik ς_kj = 0 for d_ij.
pub fn reconstruct_d_ij(cp: &ConfigurationPoint, i: u8, j: u8, k: u8) -> Result<Scalar, CmError> {
    let inputs = b_inputs(cp, i, j, k)?;
    let a = coeff_a_k(&inputs.d_kt, &inputs.d_kb, &inputs.d_tb);
    match certified_sign(&a, DEFAULT_MAX_PRECISION_BITS)? {
        0 => return Err(CmError::SingularCoefficient { i, j, k }),
        _ => {}
    }
    let b = coeff_b_ijk(&inputs);
    let prod = Scalar::from_int(288).mul(&cp.sigma(i, k)?).mul(&cp.sigma(k, j)?);
    Ok(prod.sub(&b).div(&a, DEFAULT_MAX_PRECISION_BITS)?)
}

/// Solve a_{i,j,k} ς_ij + b_{i,j,k} = 0 for ς_ij, the coefficients
/// being polynomials in ς_ik + ς_kj and squared tetrahedron volumes.
pub fn reconstruct_sigma_ij(cp: &ConfigurationPoint, i: u8, j: u8, k: u8) -> Result<Scalar, CmError> {
    let t = Vertex::Top;
    let bt = Vertex::Bottom;
    let w_ikjb = cp.squared_volume([Vertex::Eq(i), Vertex::Eq(k), Vertex::Eq(j), bt])?.value;
    let w_ikjt = cp.squared_volume([Vertex::Eq(i), Vertex::Eq(k), Vertex::Eq(j), t])?.value;
    let w_ijtb = cp.squared_volume([Vertex::Eq(i), Vertex::Eq(j), t, bt])?.value;
    let p = cp.sigma(i, k)?.add(&cp.sigma(k, j)?);
    let p2 = p.mul(&p);
    let two = Scalar::from_int(2);
    let a = Scalar::from_int(-4)
        .mul(&p)
        .mul(&p2.sub(&w_ikjb).sub(&w_ikjt).add(&w_ijtb));
    let b = p2
        .mul(
            &p2.sub(&two.mul(&w_ikjb))
                .sub(&two.mul(&w_ikjt))
                .add(&Scalar::from_int(6).mul(&w_ijtb)),
        )
        .add(&{
            let q = w_ikjb.add(&w_ikjt).sub(&w_ijtb);
            q.mul(&q)
        })
        .sub(&Scalar::from_int(4).mul(&w_ikjb).mul(&w_ikjt));
    match certified_sign(&a, DEFAULT_MAX_PRECISION_BITS)? {
        0 => return Err(CmError::SingularCoefficient { i, j, k }),
        _ => {}
    }
    Ok(b.neg().div(&a, DEFAULT_MAX_PRECISION_BITS)?)
}

/// Edge data seeding the reconstruction: squared lengths of all graph
/// edges, the apex distance, and the oriented almost-tetrahedron
/// volumes.
#[derive(Debug, Clone)]
pub struct ReconstructionSeed {
    pub n: u8,
    /// d_{i,i+1}, d_{i,T}, d_{i,B} for every equatorial i, plus any
    /// already-known diagonals.
    pub edge_d: BTreeMap<EdgeKey, Scalar>,
    pub d_tb: Scalar,
    /// s_{i,i+1} on oriented equatorial edges.
    pub s: BTreeMap<(u8, u8), Scalar>,
}

impl ReconstructionSeed {
    /// Restrict a configuration point to the seed data.
    pub fn from_configuration(cp: &ConfigurationPoint, complex: &BipyramidComplex) -> Result<ReconstructionSeed, CmError> {
        let mut edge_d = BTreeMap::new();
        for e in complex.edges() {
            edge_d.insert(e, cp.dist_sq(e.0, e.1)?.clone());
        }
        Ok(ReconstructionSeed {
            n: cp.n,
            edge_d,
            d_tb: cp.dist_sq(Vertex::Top, Vertex::Bottom)?.clone(),
            s: cp.s_edges()?.into_iter().collect(),
        })
    }
}

/// Rebuild the full distance and oriented-volume tables from edge data
/// by induction on the index gap, pivoting at k = j − 1.
pub fn reconstruct_all(seed: &ReconstructionSeed) -> Result<ConfigurationPoint, CmError> {
    let n = seed.n;
    let mut d = seed.edge_d.clone();
    d.insert(EdgeKey::new(Vertex::Top, Vertex::Bottom), seed.d_tb.clone());
    let mut cp = ConfigurationPoint { n, d, sigma: seed.s.clone() };

    // Membership check on each equatorial edge: 288 s^2 = det M.
    for i in 1..=n {
        let j = if i == n { 1 } else { i + 1 };
        let s = cp.sigma(i, j)?;
        let det = cm_det_5x5(
            cp.dist_sq(Vertex::Eq(i), Vertex::Eq(j))?,
            cp.dist_sq(Vertex::Eq(i), Vertex::Top)?,
            cp.dist_sq(Vertex::Eq(i), Vertex::Bottom)?,
            cp.dist_sq(Vertex::Eq(j), Vertex::Top)?,
            cp.dist_sq(Vertex::Eq(j), Vertex::Bottom)?,
            &seed.d_tb,
        );
        let residual = Scalar::from_int(288).mul(&s.mul(&s)).sub(&det);
        match certified_sign(&residual, DEFAULT_MAX_PRECISION_BITS) {
            Ok(0) => {}
            Ok(_) => return Err(CmError::InconsistentSeed(i, j)),
            // Radical seeds cannot certify exact membership; accept.
            Err(NumericError::SignUndecidable { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }

    for gap in 2..n {
        for i in 1..=(n - gap) {
            let j = i + gap;
            let k = j - 1;
            let key = EdgeKey::new(Vertex::Eq(i), Vertex::Eq(j));
            if !cp.d.contains_key(&key) {
                let dij = reconstruct_d_ij(&cp, i, j, k)?;
                cp.d.insert(key, dij);
            }
            if !cp.sigma.contains_key(&(i, j)) && !cp.sigma.contains_key(&(j, i)) {
                let sij = reconstruct_sigma_ij(&cp, i, j, k)?;
                cp.sigma.insert((i, j), sij);
            }
        }
    }
    Ok(cp)
}

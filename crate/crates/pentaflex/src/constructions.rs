//! Explicit flexible-bipyramid constructions: the Type III motion, the
//! six-parameter Type I (line-symmetric) construction with its
//! ω-identities, placement of the subdividing vertex N, and the radical
//! curve parametrization flexing the 8-vertex polyhedron.

use crate::complexes::{
    cross, dot, point_add, point_scale, point_sub, ComplexError, Realization, Vertex,
};
use crate::numeric::{
    certified_sign, NumericError, Scalar, DEFAULT_MAX_PRECISION_BITS, DEFAULT_PRECISION_BITS,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("parameter outside the flex domain: {0} is certified negative")]
    OutOfFlexDomain(&'static str),
    #[error("frame points are collinear; cannot place vertex N")]
    CollinearFrame,
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

const MAXB: u32 = DEFAULT_MAX_PRECISION_BITS;

fn rat(n: i64, d: i64) -> Scalar {
    Scalar::from_frac(n, d)
}

/// Evaluate a polynomial in a², given its coefficients for descending
/// even powers starting at a^(2·(len−1)).
fn poly_in_a2(coeffs: &[i64], a2: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for &c in coeffs {
        acc = acc.mul(a2).add(&Scalar::from_int(c));
    }
    acc
}

// ---------------------------------------------------------------------------
// Type III motion
// ---------------------------------------------------------------------------

/// The rational motion of a pentagonal bipyramid built from two Type III
/// octahedra. The triangle {2, 3, T} is fixed; everything else is a
/// rational function of t. With `include_zero`, the removed vertex 0 of
/// the underlying construction is also placed.
pub fn type3_pose(t: &Scalar, include_zero: bool) -> Result<Realization, ConstructionError> {
    let t2 = t.mul(t);
    let mut rho = Realization::new();
    rho.insert(Vertex::Top, [Scalar::zero(), rat(1, 4), Scalar::zero()]);
    rho.insert(Vertex::Eq(2), [rat(1, 6), Scalar::zero(), Scalar::zero()]);
    rho.insert(Vertex::Eq(3), [Scalar::zero(), Scalar::zero(), Scalar::zero()]);

    // ρ(1) = 3 / (28 (9t² + 13)) · (−9t² + 10, (69t² + 161)/4, 23t)
    let den1 = Scalar::from_int(9).mul(&t2).add(&Scalar::from_int(13));
    let f1 = Scalar::from_int(3).div(&Scalar::from_int(28).mul(&den1), MAXB)?;
    rho.insert(
        Vertex::Eq(1),
        [
            f1.mul(&Scalar::from_int(-9).mul(&t2).add(&Scalar::from_int(10))),
            f1.mul(&Scalar::from_int(69).mul(&t2).add(&Scalar::from_int(161)).mul(&rat(1, 4))),
            f1.mul(&Scalar::from_int(23).mul(t)),
        ],
    );

    // ρ(4) = 989 / (493 (t² + 4)(4t² + 1)) · ((−4t⁴ + t² − 4)/6, 0, 2t³ + 2t)
    let t2p4 = t2.add(&Scalar::from_int(4));
    let den4 = Scalar::from_int(493).mul(&t2p4).mul(&Scalar::from_int(4).mul(&t2).add(&Scalar::from_int(1)));
    let f4 = Scalar::from_int(989).div(&den4, MAXB)?;
    let t4 = t2.mul(&t2);
    rho.insert(
        Vertex::Eq(4),
        [
            f4.mul(
                &Scalar::from_int(-4)
                    .mul(&t4)
                    .add(&t2)
                    .sub(&Scalar::from_int(4))
                    .mul(&rat(1, 6)),
            ),
            Scalar::zero(),
            f4.mul(&Scalar::from_int(2).mul(&t2.mul(t)).add(&Scalar::from_int(2).mul(t))),
        ],
    );

    // ρ(5) = 69 / (9794 (9t² + 13)) ·
    //        ((126t⁴ − 2429t² − 1244)/(t²+4), (231t² + 2971)/4,
    //         (−1063t³ + 992t)/(t²+4))
    let f5 = Scalar::from_int(69).div(&Scalar::from_int(9794).mul(&den1), MAXB)?;
    let x5 = Scalar::from_int(126)
        .mul(&t4)
        .sub(&Scalar::from_int(2429).mul(&t2))
        .sub(&Scalar::from_int(1244))
        .div(&t2p4, MAXB)?;
    let z5 = Scalar::from_int(-1063)
        .mul(&t2.mul(t))
        .add(&Scalar::from_int(992).mul(t))
        .div(&t2p4, MAXB)?;
    rho.insert(
        Vertex::Eq(5),
        [
            f5.mul(&x5),
            f5.mul(&Scalar::from_int(231).mul(&t2).add(&Scalar::from_int(2971)).mul(&rat(1, 4))),
            f5.mul(&z5),
        ],
    );

    // ρ(B) = 1/9 · (−4/3, (−t² + 1)/(t² + 1), 2t/(t² + 1))
    let t2p1 = t2.add(&Scalar::from_int(1));
    rho.insert(
        Vertex::Bottom,
        [
            rat(-4, 27),
            rat(1, 9).mul(&Scalar::from_int(1).sub(&t2).div(&t2p1, MAXB)?),
            rat(1, 9).mul(&Scalar::from_int(2).mul(t).div(&t2p1, MAXB)?),
        ],
    );

    if include_zero {
        // ρ(0) = 23/157 · ((−3t² + 12)/(2t² + 8), 2, 6t/(t² + 4))
        let f0 = rat(23, 157);
        rho.insert(
            Vertex::Zero,
            [
                f0.mul(
                    &Scalar::from_int(-3)
                        .mul(&t2)
                        .add(&Scalar::from_int(12))
                        .div(&Scalar::from_int(2).mul(&t2).add(&Scalar::from_int(8)), MAXB)?,
                ),
                f0.mul(&Scalar::from_int(2)),
                f0.mul(&Scalar::from_int(6).mul(t).div(&t2p4, MAXB)?),
            ],
        );
    }
    Ok(rho)
}

/// The t = ∞ pose of the Type III motion: the limit of each coordinate
/// function (flat, like t = 0).
pub fn type3_pose_infinity(include_zero: bool) -> Realization {
    let mut rho = Realization::new();
    rho.insert(Vertex::Top, [Scalar::zero(), rat(1, 4), Scalar::zero()]);
    rho.insert(Vertex::Eq(2), [rat(1, 6), Scalar::zero(), Scalar::zero()]);
    rho.insert(Vertex::Eq(3), [Scalar::zero(), Scalar::zero(), Scalar::zero()]);
    rho.insert(Vertex::Eq(1), [rat(-3, 28), rat(23, 112), Scalar::zero()]);
    rho.insert(Vertex::Eq(4), [rat(-989, 2958), Scalar::zero(), Scalar::zero()]);
    rho.insert(Vertex::Eq(5), [rat(483, 4897), rat(1771, 39176), Scalar::zero()]);
    rho.insert(Vertex::Bottom, [rat(-4, 27), rat(-1, 9), Scalar::zero()]);
    if include_zero {
        rho.insert(Vertex::Zero, [rat(-69, 314), rat(46, 157), Scalar::zero()]);
    }
    rho
}

// ---------------------------------------------------------------------------
// Type I construction
// ---------------------------------------------------------------------------

/// Parameters of the line-symmetric construction: ℓ1 is the x-axis, ℓ2
/// the line in the xy-plane whose reflection has matrix entries
/// c = (t²−1)/(t²+1) and s = 2t/(t²+1); T and B sit at (0,0,±a); vertex
/// 3 at (x3, y3, z3); vertex 0 at μ·p1 + (1−μ)·p5.
#[derive(Debug, Clone)]
pub struct Type1Params {
    pub t: Scalar,
    pub a: Scalar,
    pub x3: Scalar,
    pub y3: Scalar,
    pub z3: Scalar,
    pub mu: Scalar,
}

impl Type1Params {
    pub fn from_rationals(t: (i64, i64), a: (i64, i64), x3: (i64, i64), y3: (i64, i64), z3: (i64, i64), mu: (i64, i64)) -> Type1Params {
        Type1Params {
            t: rat(t.0, t.1),
            a: rat(a.0, a.1),
            x3: rat(x3.0, x3.1),
            y3: rat(y3.0, y3.1),
            z3: rat(z3.0, z3.1),
            mu: rat(mu.0, mu.1),
        }
    }

    /// The parameters of the published embedded example.
    pub fn unit_height_example() -> Type1Params {
        Type1Params::from_rationals((-5, 8), (1, 1), (15, 7), (11, 4), (5, 2), (2, 7))
    }

    /// c and s of the ℓ2 reflection matrix.
    pub fn reflection_entries(&self) -> Result<(Scalar, Scalar), ConstructionError> {
        let t2 = self.t.mul(&self.t);
        let den = t2.add(&Scalar::from_int(1));
        let c = t2.sub(&Scalar::from_int(1)).div(&den, MAXB)?;
        let s = Scalar::from_int(2).mul(&self.t).div(&den, MAXB)?;
        Ok((c, s))
    }
}

/// The two glued octahedron realizations: O_k on {0,1,2,3,T,B} and O_p
/// on {0,3,4,5,T,B}, agreeing on the shared vertices.
#[derive(Debug, Clone)]
pub struct FittingPair {
    pub rho_k: Realization,
    pub rho_p: Realization,
}

/// Build the fitting pair and the pentagonal bipyramid realization
/// (with vertex 0 retained for the ω / fitting-pair checks).
pub fn type1_construct(p: &Type1Params) -> Result<(FittingPair, Realization), ConstructionError> {
    if certified_sign(&p.a, MAXB)? == 0 {
        return Err(ConstructionError::DegenerateParams("apex height a is zero".into()));
    }
    if certified_sign(&p.z3, MAXB)? == 0 {
        return Err(ConstructionError::DegenerateParams(
            "z3 is zero: vertex 3 lies in the plane of the symmetry lines".into(),
        ));
    }
    let (c, s) = p.reflection_entries()?;
    let p_t = [Scalar::zero(), Scalar::zero(), p.a.clone()];
    let p_b = [Scalar::zero(), Scalar::zero(), p.a.neg()];
    let p3 = [p.x3.clone(), p.y3.clone(), p.z3.clone()];
    let p1 = [p.x3.clone(), p.y3.neg(), p.z3.neg()];
    let p5 = [
        c.mul(&p.x3).add(&s.mul(&p.y3)),
        c.neg().mul(&p.y3).add(&s.mul(&p.x3)),
        p.z3.neg(),
    ];
    let one_minus_mu = Scalar::from_int(1).sub(&p.mu);
    let p0 = point_add(&point_scale(&p.mu, &p1), &point_scale(&one_minus_mu, &p5));
    // p2 and p4: the reflections of p0 across ℓ1 and ℓ2.
    let mcm1 = p.mu.mul(&c.sub(&Scalar::from_int(1))); // μ(c−1)
    let msms = p.mu.mul(&s).sub(&s); // μs − s
    let p2 = [
        mcm1.sub(&c).neg().mul(&p.x3).sub(&msms.mul(&p.y3)),
        msms.mul(&p.x3).sub(&mcm1.sub(&c).mul(&p.y3)),
        p.z3.clone(),
    ];
    let p4 = [
        p.mu.mul(&s).neg().mul(&p.y3).add(&mcm1.add(&Scalar::from_int(1)).mul(&p.x3)),
        p.mu.mul(&s).mul(&p.x3).add(&mcm1.add(&Scalar::from_int(1)).mul(&p.y3)),
        p.z3.clone(),
    ];

    let mut rho = Realization::new();
    rho.insert(Vertex::Top, p_t);
    rho.insert(Vertex::Bottom, p_b);
    rho.insert(Vertex::Eq(1), p1);
    rho.insert(Vertex::Eq(2), p2);
    rho.insert(Vertex::Eq(3), p3);
    rho.insert(Vertex::Eq(4), p4);
    rho.insert(Vertex::Eq(5), p5);
    rho.insert(Vertex::Zero, p0);

    let pair = FittingPair {
        rho_k: rho.restricted(&[
            Vertex::Zero,
            Vertex::Eq(1),
            Vertex::Eq(2),
            Vertex::Eq(3),
            Vertex::Top,
            Vertex::Bottom,
        ]),
        rho_p: rho.restricted(&[
            Vertex::Zero,
            Vertex::Eq(3),
            Vertex::Eq(4),
            Vertex::Eq(5),
            Vertex::Top,
            Vertex::Bottom,
        ]),
    };
    Ok((pair, rho))
}

/// Residuals of the two polynomial identities satisfied by the squared
/// edge lengths of every Type I construction:
/// ω_1T + ω_2T − ω_0T − ω_3T and ω_01·ω_05 − (ω_0T − ω_1T)².
#[derive(Debug, Clone)]
pub struct OmegaReport {
    pub linear_residual: Scalar,
    pub pythagoras_residual: Scalar,
}

pub fn omega_check(p: &Type1Params) -> Result<OmegaReport, ConstructionError> {
    let (_, rho) = type1_construct(p)?;
    let w = |u: Vertex, v: Vertex| rho.dist_sq(u, v);
    let w01 = w(Vertex::Zero, Vertex::Eq(1))?;
    let w05 = w(Vertex::Zero, Vertex::Eq(5))?;
    let w0t = w(Vertex::Zero, Vertex::Top)?;
    let w1t = w(Vertex::Eq(1), Vertex::Top)?;
    let w2t = w(Vertex::Eq(2), Vertex::Top)?;
    let w3t = w(Vertex::Eq(3), Vertex::Top)?;
    let linear_residual = w1t.add(&w2t).sub(&w0t).sub(&w3t);
    let diff = w0t.sub(&w1t);
    let pythagoras_residual = w01.mul(&w05).sub(&diff.mul(&diff));
    Ok(OmegaReport { linear_residual, pythagoras_residual })
}

/// Which distance relation |p1 − p5| satisfies for a fitting pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceCase {
    /// Vertex 0 between 1 and 5: λ15 = λ10 + λ05.
    Sum,
    /// Vertex 0 beyond an endpoint: λ15 = |λ10 − λ05|.
    Difference,
    Undecided,
}

#[derive(Debug, Clone)]
pub struct FittingPairReport {
    pub shared_vertices_coincide: bool,
    pub collinear_015: bool,
    pub distance_case: DistanceCase,
}

impl FittingPairReport {
    pub fn pass(&self) -> bool {
        self.shared_vertices_coincide && self.collinear_015
    }
}

/// Verify the gluing constraints of a fitting pair: the shared vertices
/// {0, 3, T, B} coincide and 0, 1, 5 are collinear; report whether the
/// induced |1–5| length is the sum or the difference of |1–0| and
/// |0–5|.
pub fn fitting_pair_check(fp: &FittingPair) -> Result<FittingPairReport, ConstructionError> {
    let mut shared = true;
    for v in [Vertex::Zero, Vertex::Eq(3), Vertex::Top, Vertex::Bottom] {
        let a = fp.rho_k.point(v)?;
        let b = fp.rho_p.point(v)?;
        let d = crate::complexes::point_dist_sq(a, b);
        match certified_sign(&d, MAXB) {
            Ok(0) => {}
            Ok(_) => shared = false,
            Err(NumericError::SignUndecidable { .. }) => {
                // Enclosure cannot separate the points; accept as shared
                // only if the distance is pinned tiny.
                let refined = d.refined(DEFAULT_PRECISION_BITS, MAXB)?;
                if refined.enclosure(DEFAULT_PRECISION_BITS).sign() == Some(1) {
                    shared = false;
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    let p0 = fp.rho_k.point(Vertex::Zero)?;
    let p1 = fp.rho_k.point(Vertex::Eq(1))?;
    let p5 = fp.rho_p.point(Vertex::Eq(5))?;
    let u = point_sub(p1, p0);
    let v = point_sub(p5, p0);
    let c = cross(&u, &v);
    let norm_sq = dot(&c, &c);
    let collinear = match certified_sign(&norm_sq, MAXB) {
        Ok(0) => true,
        Ok(_) => false,
        Err(NumericError::SignUndecidable { .. }) => {
            let refined = norm_sq.refined(DEFAULT_PRECISION_BITS, MAXB)?;
            refined.enclosure(DEFAULT_PRECISION_BITS).sign() != Some(1)
        }
        Err(e) => return Err(e.into()),
    };
    // On the line through 1 and 5, the directions 1−0 and 5−0 oppose
    // exactly when 0 lies between them — the sum case.
    let distance_case = match certified_sign(&dot(&u, &v), MAXB) {
        Ok(s) if s < 0 => DistanceCase::Sum,
        Ok(s) if s > 0 => DistanceCase::Difference,
        _ => DistanceCase::Undecided,
    };
    Ok(FittingPairReport { shared_vertices_coincide: shared, collinear_015: collinear, distance_case })
}

// ---------------------------------------------------------------------------
// Vertex N
// ---------------------------------------------------------------------------

/// Place the subdividing vertex:
/// N = p1 − (9/10)(p2−p1) + 3(pB−p1) + (3/5)(p2−p1)×(pB−p1).
pub fn place_vertex_n(rho: &Realization) -> Result<Realization, ConstructionError> {
    let p1 = rho.point(Vertex::Eq(1))?;
    let p2 = rho.point(Vertex::Eq(2))?;
    let pb = rho.point(Vertex::Bottom)?;
    let u = point_sub(p2, p1);
    let w = point_sub(pb, p1);
    let c = cross(&u, &w);
    match certified_sign(&dot(&c, &c), MAXB) {
        Ok(0) => return Err(ConstructionError::CollinearFrame),
        Ok(_) => {}
        Err(NumericError::SignUndecidable { .. }) => return Err(ConstructionError::CollinearFrame),
        Err(e) => return Err(e.into()),
    }
    let n = point_add(
        &point_add(
            &point_add(p1, &point_scale(&rat(-9, 10), &u)),
            &point_scale(&Scalar::from_int(3), &w),
        ),
        &point_scale(&rat(3, 5), &c),
    );
    let mut out = rho.clone();
    out.insert(Vertex::Sub, n);
    Ok(out)
}

// ---------------------------------------------------------------------------
// The radical flex curve of the embedded 8-vertex example
// ---------------------------------------------------------------------------

/// Branch of the flex curve. The curve carries one free radical sign —
/// the inner root √(A1·A2) — and the construction admits a global
/// mirror; flipping the sign of t alone does not preserve the edge
/// lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flex8Branch {
    pub inner_positive: bool,
    pub mirrored: bool,
}

impl Flex8Branch {
    pub const PRINCIPAL: Flex8Branch = Flex8Branch { inner_positive: true, mirrored: false };

    pub fn all() -> [Flex8Branch; 4] {
        [
            Flex8Branch { inner_positive: true, mirrored: false },
            Flex8Branch { inner_positive: false, mirrored: false },
            Flex8Branch { inner_positive: true, mirrored: true },
            Flex8Branch { inner_positive: false, mirrored: true },
        ]
    }
}

/// The five defining polynomials of the curve, evaluated at a.
#[derive(Debug, Clone)]
pub struct FlexCurvePoint {
    pub a: Scalar,
    pub a1: Scalar,
    pub a2: Scalar,
    pub b: Scalar,
    pub c1: Scalar,
    pub c2: Scalar,
}

pub fn flex_curve_point(a: &Scalar) -> FlexCurvePoint {
    let a2v = a.mul(a);
    FlexCurvePoint {
        a: a.clone(),
        a1: poly_in_a2(&[-2029832431225781, 3583108625879406, -1376807431326600], &a2v),
        a2: poly_in_a2(&[-69776, 744101, -436100], &a2v),
        b: poly_in_a2(&[-3419024, 41949653, -21368900], &a2v),
        c1: poly_in_a2(&[14910363664, -192762292317, 1211236673778, -560045725400], &a2v),
        c2: poly_in_a2(&[4472093788624, -40400312279273, 38266083804200, -9318977290000], &a2v),
    }
}

/// Evaluate the radical parametrization of the flex curve at a:
/// t = −√(9529·A2)/(76232a), z3 = 5/(2a), μ = 2/7,
/// x3 = √(89(C1 − 20√(A1A2))/B)/623·… with fixed integer coefficients.
pub fn flex8_params(a: &Scalar, branch: Flex8Branch) -> Result<Type1Params, ConstructionError> {
    let cp = flex_curve_point(a);
    if certified_sign(&cp.a, MAXB)? == 0 {
        return Err(ConstructionError::DegenerateParams("a = 0".into()));
    }
    if certified_sign(&cp.b, MAXB)? == 0 {
        return Err(ConstructionError::DegenerateParams("B(a) = 0".into()));
    }
    if certified_sign(&cp.a2, MAXB)? < 0 {
        return Err(ConstructionError::OutOfFlexDomain("A2"));
    }
    let inner_radicand = cp.a1.mul(&cp.a2);
    if certified_sign(&inner_radicand, MAXB)? < 0 {
        return Err(ConstructionError::OutOfFlexDomain("A1*A2"));
    }
    let prec = DEFAULT_PRECISION_BITS.max(160);
    let inner_root = Scalar::from(inner_radicand.sqrt(prec, MAXB)?);
    let inner = if branch.inner_positive { inner_root } else { inner_root.neg() };

    // t = −√(9529 A2) / (76232 a)
    let t_rad = Scalar::from_int(9529).mul(&cp.a2);
    let t = Scalar::from(t_rad.sqrt(prec, MAXB)?)
        .neg()
        .div(&Scalar::from_int(76232).mul(a), MAXB)?;

    let z3 = Scalar::from_int(5).div(&Scalar::from_int(2).mul(a), MAXB)?;
    let mu = rat(2, 7);

    // x3 = (√89/623)·√((C1 − 20·inner)/B)
    let x3_radicand = cp.c1.sub(&Scalar::from_int(20).mul(&inner)).div(&cp.b, MAXB)?;
    if certified_sign(&x3_radicand, MAXB)? < 0 {
        return Err(ConstructionError::OutOfFlexDomain("(C1 - 20 sqrt(A1 A2))/B"));
    }
    let x3 = Scalar::from(Scalar::from_int(89).mul(&x3_radicand).sqrt(prec, MAXB)?)
        .div(&Scalar::from_int(623), MAXB)?;

    // y3 = (√89/(2492 a))·√((320 a² inner − C2)/B)
    let y3_radicand = Scalar::from_int(320)
        .mul(&a.mul(a))
        .mul(&inner)
        .sub(&cp.c2)
        .div(&cp.b, MAXB)?;
    if certified_sign(&y3_radicand, MAXB)? < 0 {
        return Err(ConstructionError::OutOfFlexDomain("(320 a^2 sqrt(A1 A2) - C2)/B"));
    }
    let y3 = Scalar::from(Scalar::from_int(89).mul(&y3_radicand).sqrt(prec, MAXB)?)
        .div(&Scalar::from_int(2492).mul(a), MAXB)?;

    Ok(Type1Params { t, a: a.clone(), x3, y3, z3, mu })
}

/// Realization (vertex 0 retained) at a point of the flex curve,
/// applying the mirror reflection for mirrored branches.
pub fn flex8_pose(a: &Scalar, branch: Flex8Branch) -> Result<Realization, ConstructionError> {
    let params = flex8_params(a, branch)?;
    let (_, rho) = type1_construct(&params)?;
    if branch.mirrored {
        Ok(rho.map_points(|p| [p[0].clone(), p[1].clone(), p[2].neg()]))
    } else {
        Ok(rho)
    }
}

/// Rational bracket [lo, hi] around a = 1 on which the given branch is
/// certified inside the flex domain. Recovered numerically: stepping
/// then bisecting each side to 2^(−refine_bits), returning the last
/// certified-good endpoints.
pub fn recover_flex_bracket(
    branch: Flex8Branch,
    refine_bits: u32,
) -> Result<(BigRational, BigRational), ConstructionError> {
    let one = BigRational::from_integer(BigInt::from(1));
    let in_domain = |a: &BigRational| flex8_params(&Scalar::Exact(a.clone()), branch).is_ok();
    if !in_domain(&one) {
        return Err(ConstructionError::OutOfFlexDomain("a = 1"));
    }
    let step = BigRational::new(BigInt::from(1), BigInt::from(64));
    let tol = BigRational::new(BigInt::from(1), BigInt::from(1) << (refine_bits as usize));
    let mut endpoints = [one.clone(), one.clone()];
    for (idx, dir) in [(0usize, -1i64), (1usize, 1i64)] {
        let delta = &step * BigRational::from_integer(BigInt::from(dir));
        let mut good = one.clone();
        let mut probe = &good + &delta;
        while in_domain(&probe) {
            good = probe.clone();
            probe = &probe + &delta;
        }
        let mut bad = probe;
        while (&bad - &good).abs() > tol {
            let mid = (&bad + &good) / BigRational::from_integer(BigInt::from(2));
            if in_domain(&mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        endpoints[idx] = good;
    }
    let [lo, hi] = endpoints;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_bipyramid, edge_lengths_sq};
    use crate::numeric::Dyadic;

    fn exact_eq(a: &Scalar, b: &Scalar) {
        assert_eq!(certified_sign(&a.sub(b), 1024).unwrap(), 0);
    }

    fn close(a: &Scalar, target: (i64, i64), width_bits: u32) {
        let t = rat(target.0, target.1);
        let refined = a.sub(&t).refined(width_bits, 4096).unwrap();
        let iv = refined.enclosure(width_bits);
        assert!(iv.contains_zero(), "value not within 2^-{width_bits} of {}/{}", target.0, target.1);
        assert!(iv.width() <= Dyadic::pow2(-(width_bits as i64)));
    }

    #[test]
    fn type3_fixed_triangle_and_flat_poses() {
        for tv in [rat(0, 1), rat(1, 1), rat(7, 3)] {
            let rho = type3_pose(&tv, true).unwrap();
            exact_eq(&rho.point(Vertex::Top).unwrap()[1], &rat(1, 4));
            exact_eq(&rho.point(Vertex::Eq(2)).unwrap()[0], &rat(1, 6));
        }
        let flat = type3_pose(&Scalar::zero(), true).unwrap();
        for v in flat.vertices().collect::<Vec<_>>() {
            exact_eq(&flat.point(v).unwrap()[2], &Scalar::zero());
        }
    }

    #[test]
    fn type3_edge_lengths_constant_including_infinity() {
        let b5 = build_bipyramid(5).unwrap();
        let edges = b5.edges();
        let base = edge_lengths_sq(&type3_pose(&rat(1, 1), false).unwrap(), &edges).unwrap();
        for tv in [rat(2, 1), rat(-1, 3), rat(22, 7)] {
            let other = edge_lengths_sq(&type3_pose(&tv, false).unwrap(), &edges).unwrap();
            for (k, v) in &base.lambda_sq {
                exact_eq(v, &other.lambda_sq[k]);
            }
        }
        let inf = edge_lengths_sq(&type3_pose_infinity(false), &edges).unwrap();
        for (k, v) in &base.lambda_sq {
            exact_eq(v, &inf.lambda_sq[k]);
        }
    }

    #[test]
    fn type3_vertex_zero_collinear_with_1_and_5() {
        for tv in [rat(1, 1), rat(-3, 5), rat(9, 2)] {
            let rho = type3_pose(&tv, true).unwrap();
            let p0 = rho.point(Vertex::Zero).unwrap();
            let p1 = rho.point(Vertex::Eq(1)).unwrap();
            let p5 = rho.point(Vertex::Eq(5)).unwrap();
            let c = cross(&point_sub(p1, p0), &point_sub(p5, p0));
            exact_eq(&dot(&c, &c), &Scalar::zero());
        }
    }

    #[test]
    fn type1_unit_height_parameters() {
        let p = Type1Params::unit_height_example();
        let (c, s) = p.reflection_entries().unwrap();
        exact_eq(&c, &rat(-39, 89));
        exact_eq(&s, &rat(-80, 89));
        let (pair, rho) = type1_construct(&p).unwrap();
        let p1 = rho.point(Vertex::Eq(1)).unwrap();
        exact_eq(&p1[0], &rat(15, 7));
        exact_eq(&p1[1], &rat(-11, 4));
        exact_eq(&p1[2], &rat(-5, 2));
        let report = fitting_pair_check(&pair).unwrap();
        assert!(report.pass());
        assert_eq!(report.distance_case, DistanceCase::Sum);
    }

    #[test]
    fn distance_case_follows_mu() {
        let mut p = Type1Params::unit_height_example();
        p.mu = rat(3, 2);
        let (pair, _) = type1_construct(&p).unwrap();
        assert_eq!(fitting_pair_check(&pair).unwrap().distance_case, DistanceCase::Difference);
    }

    #[test]
    fn perturbed_pair_fails_shared_vertices() {
        let (mut pair, _) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let p3 = pair.rho_p.point(Vertex::Eq(3)).unwrap().clone();
        pair.rho_p
            .insert(Vertex::Eq(3), [p3[0].add(&Scalar::from_int(1)), p3[1].clone(), p3[2].clone()]);
        assert!(!fitting_pair_check(&pair).unwrap().shared_vertices_coincide);
    }

    #[test]
    fn omega_identities_vanish() {
        for p in [
            Type1Params::unit_height_example(),
            Type1Params::from_rationals((1, 3), (2, 1), (1, 1), (3, 2), (1, 2), (5, 4)),
            Type1Params::from_rationals((-7, 2), (1, 3), (-2, 5), (4, 3), (7, 6), (-1, 2)),
        ] {
            let report = omega_check(&p).unwrap();
            exact_eq(&report.linear_residual, &Scalar::zero());
            exact_eq(&report.pythagoras_residual, &Scalar::zero());
        }
    }

    #[test]
    fn type1_symmetry_invariants() {
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        // λ_{1,2} = λ_{4,5} exactly, both equal to |p0 − p3|.
        let d12 = rho.dist_sq(Vertex::Eq(1), Vertex::Eq(2)).unwrap();
        let d45 = rho.dist_sq(Vertex::Eq(4), Vertex::Eq(5)).unwrap();
        let d03 = rho.dist_sq(Vertex::Zero, Vertex::Eq(3)).unwrap();
        exact_eq(&d12, &d45);
        exact_eq(&d12, &d03);
        // s_{1,2} + s_{4,5} = 0 exactly.
        let b5 = build_bipyramid(5).unwrap();
        let cp = crate::cayley_menger::embed(&rho.restricted(&b5.vertices()), &b5).unwrap();
        exact_eq(&cp.sigma(1, 2).unwrap().add(&cp.sigma(4, 5).unwrap()), &Scalar::zero());
        // line symmetry of O_k: swapping 1↔3, 0↔2, T↔B preserves distances.
        use Vertex::*;
        let swap = |v: Vertex| match v {
            Eq(1) => Eq(3),
            Eq(3) => Eq(1),
            Zero => Eq(2),
            Eq(2) => Zero,
            Top => Bottom,
            Bottom => Top,
            other => other,
        };
        let ok = [Zero, Eq(1), Eq(2), Eq(3), Top, Bottom];
        for (ai, &u) in ok.iter().enumerate() {
            for &v in &ok[ai + 1..] {
                exact_eq(
                    &rho.dist_sq(u, v).unwrap(),
                    &rho.dist_sq(swap(u), swap(v)).unwrap(),
                );
            }
        }
    }

    #[test]
    fn flex8_unit_height_round_trip() {
        let params = flex8_params(&Scalar::from_int(1), Flex8Branch::PRINCIPAL).unwrap();
        close(&params.t, (-5, 8), 80);
        close(&params.x3, (15, 7), 80);
        close(&params.y3, (11, 4), 80);
        exact_eq(&params.z3, &rat(5, 2));
        exact_eq(&params.mu, &rat(2, 7));
    }

    #[test]
    fn flex8_preserves_edge_lengths() {
        let b5 = build_bipyramid(5).unwrap();
        let edges = b5.edges();
        let base = flex8_pose(&Scalar::from_int(1), Flex8Branch::PRINCIPAL).unwrap();
        let base_len = edge_lengths_sq(&base.restricted(&b5.vertices()), &edges).unwrap();
        for av in [rat(101, 100), rat(99, 100), rat(21, 20)] {
            let other = flex8_pose(&av, Flex8Branch::PRINCIPAL).unwrap();
            let other_len = edge_lengths_sq(&other.restricted(&b5.vertices()), &edges).unwrap();
            for (k, v) in &base_len.lambda_sq {
                let diff = v.sub(&other_len.lambda_sq[k]).refined(64, 4096).unwrap();
                assert!(
                    diff.enclosure(64).contains_zero(),
                    "edge {k} changed length between a=1 and the sample"
                );
            }
        }
    }

    #[test]
    fn flex8_out_of_domain() {
        assert!(matches!(
            flex8_params(&Scalar::from_int(2), Flex8Branch::PRINCIPAL),
            Err(ConstructionError::OutOfFlexDomain(_))
        ));
    }

    #[test]
    fn flex_bracket_contains_one() {
        let (lo, hi) = recover_flex_bracket(Flex8Branch::PRINCIPAL, 16).unwrap();
        let one = BigRational::from_integer(BigInt::from(1));
        assert!(lo < one && one < hi, "bracket [{lo}, {hi}] must contain 1");
        assert!(flex8_params(&Scalar::Exact(lo.clone()), Flex8Branch::PRINCIPAL).is_ok());
        assert!(flex8_params(&Scalar::Exact(hi.clone()), Flex8Branch::PRINCIPAL).is_ok());
    }

    #[test]
    fn vertex_n_placement() {
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let with_n = place_vertex_n(&rho).unwrap();
        let n = with_n.point(Vertex::Sub).unwrap();
        // exact rationals at the unit-height parameters
        for coord in n {
            assert!(coord.is_exact());
        }
        // N's distances to its neighbors are preserved along the flex.
        let sample = flex8_pose(&rat(101, 100), Flex8Branch::PRINCIPAL).unwrap();
        let sample_n = place_vertex_n(&sample).unwrap();
        for v in [Vertex::Bottom, Vertex::Eq(1), Vertex::Eq(2)] {
            let d1 = with_n.dist_sq(Vertex::Sub, v).unwrap();
            let d2 = sample_n.dist_sq(Vertex::Sub, v).unwrap();
            let diff = d1.sub(&d2).refined(64, 4096).unwrap();
            assert!(diff.enclosure(64).contains_zero());
        }
        // collinear frame rejected
        let mut degenerate = rho.clone();
        let p1 = rho.point(Vertex::Eq(1)).unwrap().clone();
        let p2 = rho.point(Vertex::Eq(2)).unwrap().clone();
        let mid = point_scale(&rat(1, 2), &point_add(&p1, &p2));
        degenerate.insert(Vertex::Bottom, mid);
        assert!(matches!(place_vertex_n(&degenerate), Err(ConstructionError::CollinearFrame)));
    }
}

//! Numeric sign-group analysis of a motion: enumerate real fibers of
//! the top–bottom distance map, collect sign vectors of the oriented
//! almost-tetrahedron volumes, and classify against the two admissible
//! sign-flip groups.
//!
//! Real sampling can only exhibit elements, never exclude larger
//! groups; the classification reports what was observed and labels the
//! rest `Inconclusive` rather than inventing a third class.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cayley_menger::{embed, CmError, ConfigurationPoint};
use crate::complexes::{
    are_congruent, build_bipyramid, BipyramidComplex, ComplexError, EdgeKey,
    EdgeLengths, Realization, Vertex,
};
use crate::constructions::{
    flex8_pose, recover_flex_bracket, type3_pose, type3_pose_infinity, ConstructionError,
    Flex8Branch,
};
use crate::numeric::{certified_sign, NumericError, Scalar, DEFAULT_MAX_PRECISION_BITS};
use thiserror::Error;

const MAXB: u32 = DEFAULT_MAX_PRECISION_BITS;

#[derive(Debug, Error)]
pub enum GaloisError {
    #[error("edge ({0},{1}) has certified-zero or undecidable oriented volume")]
    FlatEdge(u8, u8),
    #[error("target distance lies outside the observed motion range")]
    TargetOutOfRange,
    #[error("sign vector does not have exactly two ones")]
    WrongSupport,
    #[error("sign-group structure violated: {0}")]
    StructureViolation(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

// -- sign vectors and groups ------------------------------------------------

/// Sign flips of (s_{1,2}, …, s_{5,1}) between two configurations with
/// the same edge lengths, indexed by the equatorial edges in cyclic
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignVector(pub [u8; 5]);

impl SignVector {
    pub fn zero() -> SignVector {
        SignVector([0; 5])
    }

    pub fn all_flip() -> SignVector {
        SignVector([1; 5])
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn xor(&self, other: &SignVector) -> SignVector {
        let mut out = [0u8; 5];
        for i in 0..5 {
            out[i] = self.0[i] ^ other.0[i];
        }
        SignVector(out)
    }

    /// All ten images under the dihedral symmetries of the 5-cycle.
    pub fn dihedral_orbit(&self) -> Vec<SignVector> {
        let mut out = Vec::with_capacity(10);
        for r in 0..5 {
            let mut rot = [0u8; 5];
            let mut refl = [0u8; 5];
            for i in 0..5 {
                rot[i] = self.0[(i + r) % 5];
                refl[i] = self.0[(5 + r - i) % 5];
            }
            out.push(SignVector(rot));
            out.push(SignVector(refl));
        }
        out
    }

    /// Lexicographically minimal representative of the dihedral orbit.
    pub fn dihedral_canonical(&self) -> SignVector {
        self.dihedral_orbit().into_iter().min().unwrap()
    }

    pub fn same_dihedral_class(&self, other: &SignVector) -> bool {
        self.dihedral_canonical() == other.dihedral_canonical()
    }
}

impl std::fmt::Display for SignVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.0[0], self.0[1], self.0[2], self.0[3], self.0[4]
        )
    }
}

/// The observed sign-flip group: XOR-closure of the observed vectors.
///
/// Structural invariants: contains zero, closed under XOR, and no
/// element has exactly one or exactly four ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignGroup {
    elements: BTreeSet<SignVector>,
}

impl SignGroup {
    pub fn generate<I: IntoIterator<Item = SignVector>>(vectors: I) -> Result<SignGroup, GaloisError> {
        let mut elements = BTreeSet::new();
        elements.insert(SignVector::zero());
        for v in vectors {
            if elements.contains(&v) {
                continue;
            }
            let existing: Vec<SignVector> = elements.iter().cloned().collect();
            for e in existing {
                elements.insert(e.xor(&v));
            }
            elements.insert(v);
        }
        // closure pass (generators arrive incrementally, so the single
        // sweep above already multiplies by every coset representative,
        // but verify to be safe)
        loop {
            let mut added = false;
            let all: Vec<SignVector> = elements.iter().cloned().collect();
            for a in &all {
                for b in &all {
                    if elements.insert(a.xor(b)) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        for e in &elements {
            let k = e.ones();
            if k == 1 || k == 4 {
                return Err(GaloisError::StructureViolation(format!(
                    "element {e} has exactly {k} ones"
                )));
            }
        }
        Ok(SignGroup { elements })
    }

    pub fn elements(&self) -> impl Iterator<Item = &SignVector> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always contains zero
    }

    pub fn contains(&self, v: &SignVector) -> bool {
        self.elements.contains(v)
    }
}

/// Compare the certified signs of the five equatorial oriented volumes
/// at two configurations with the same edge lengths.
pub fn sign_vector(base: &ConfigurationPoint, other: &ConfigurationPoint) -> Result<SignVector, GaloisError> {
    let mut bits = [0u8; 5];
    for (k, ((i, j), s_base)) in base.s_edges()?.into_iter().enumerate() {
        let s_other = other.sigma(i, j)?;
        let sb = nonzero_sign(&s_base, i, j)?;
        let so = nonzero_sign(&s_other, i, j)?;
        bits[k] = if sb == so { 0 } else { 1 };
    }
    Ok(SignVector(bits))
}

fn nonzero_sign(s: &Scalar, i: u8, j: u8) -> Result<i8, GaloisError> {
    match certified_sign(s, MAXB) {
        Ok(0) | Err(NumericError::SignUndecidable { .. }) => Err(GaloisError::FlatEdge(i, j)),
        Ok(sg) => Ok(sg),
        Err(e) => Err(e.into()),
    }
}

// -- motion range -----------------------------------------------------------

/// Extreme top–bottom squared distances of one flexing almost
/// tetrahedron with the given squared edge lengths (the hinge is the
/// equatorial edge; min/max at the two flat positions of the hinge
/// dihedral).
#[derive(Debug, Clone)]
pub struct EdgeRange {
    pub edge: (u8, u8),
    pub m_sq: Scalar,
    pub big_m_sq: Scalar,
}

/// Per-edge flat-pose extremes of d_TB and the global motion interval
/// (m, M): the motion can only exist where every almost tetrahedron is
/// realizable, i.e. max m_e < d_TB < min M_e.
#[derive(Debug, Clone)]
pub struct MotionRange {
    pub per_edge: Vec<EdgeRange>,
    pub m_sq: Scalar,
    pub big_m_sq: Scalar,
}

fn edge_range(
    edge: (u8, u8),
    c_sq: &Scalar,
    d_it: &Scalar,
    d_jt: &Scalar,
    d_ib: &Scalar,
    d_jb: &Scalar,
) -> Result<EdgeRange, GaloisError> {
    // Place the hinge i, j on a line of length c. The apex heights off
    // the hinge axis satisfy u = (d_i· − d_j· + c²)/(2c), h² = d_i· − u².
    let four_c2 = Scalar::from_int(4).mul(c_sq);
    let ut_num = d_it.sub(d_jt).add(c_sq);
    let ub_num = d_ib.sub(d_jb).add(c_sq);
    let du_sq = {
        let n = ut_num.sub(&ub_num);
        n.mul(&n).div(&four_c2, MAXB)?
    };
    let ht_sq = d_it.sub(&ut_num.mul(&ut_num).div(&four_c2, MAXB)?);
    let hb_sq = d_ib.sub(&ub_num.mul(&ub_num).div(&four_c2, MAXB)?);
    let cross = Scalar::from(ht_sq.mul(&hb_sq).sqrt(128, MAXB)?);
    let base = du_sq.add(&ht_sq).add(&hb_sq);
    let two_cross = Scalar::from_int(2).mul(&cross);
    Ok(EdgeRange {
        edge,
        m_sq: base.sub(&two_cross),
        big_m_sq: base.add(&two_cross),
    })
}

/// Motion range from the (constant) edge lengths of a configuration.
pub fn motion_range(cp: &ConfigurationPoint) -> Result<MotionRange, GaloisError> {
    let mut per_edge = Vec::new();
    for i in 1..=cp.n {
        let j = if i == cp.n { 1 } else { i + 1 };
        let vi = Vertex::Eq(i);
        let vj = Vertex::Eq(j);
        let r = edge_range(
            (i, j),
            cp.dist_sq(vi, vj)?,
            cp.dist_sq(vi, Vertex::Top)?,
            cp.dist_sq(vj, Vertex::Top)?,
            cp.dist_sq(vi, Vertex::Bottom)?,
            cp.dist_sq(vj, Vertex::Bottom)?,
        )?;
        per_edge.push(r);
    }
    let mut m_sq = per_edge[0].m_sq.clone();
    let mut big_m_sq = per_edge[0].big_m_sq.clone();
    for r in &per_edge[1..] {
        m_sq = m_sq.max(&r.m_sq);
        big_m_sq = big_m_sq.min(&r.big_m_sq);
    }
    Ok(MotionRange { per_edge, m_sq, big_m_sq })
}

// -- motion branches and fibers --------------------------------------------

type PoseFn = Box<dyn Fn(&BigRational) -> Result<Realization, ConstructionError>>;

/// One real branch of a motion: poses over a closed rational parameter
/// interval, plus a cheap evaluator for the squared top–bottom distance
/// used by the root search.
pub struct MotionBranch {
    pub pose: PoseFn,
    pub lo: BigRational,
    pub hi: BigRational,
}

fn rat_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl MotionBranch {
    pub fn new(pose: PoseFn, lo: BigRational, hi: BigRational) -> MotionBranch {
        MotionBranch { pose, lo, hi }
    }

    /// The all-rational pentagonal motion on a symmetric t-window.
    pub fn type3(half_width: i64) -> MotionBranch {
        MotionBranch::new(
            Box::new(|t: &BigRational| type3_pose(&Scalar::from(t.clone()), false)),
            rat_i64(-half_width, 1),
            rat_i64(half_width, 1),
        )
    }

    /// The same motion in the u = 1/t chart, covering a neighbourhood
    /// of t = ∞ (u = 0).
    pub fn type3_inverted_chart(half_width_inv: i64) -> MotionBranch {
        MotionBranch::new(
            Box::new(|u: &BigRational| {
                if u.is_zero() {
                    Ok(type3_pose_infinity(false))
                } else {
                    type3_pose(&Scalar::from(u.recip()), false)
                }
            }),
            rat_i64(-1, half_width_inv),
            rat_i64(1, half_width_inv),
        )
    }

    /// The four real radical branches of the 8-vertex flex (restricted
    /// to the bipyramid vertices), each over the recovered parameter
    /// bracket shrunk by a safety margin.
    pub fn flex8_all(refine_bits: u32) -> Result<Vec<MotionBranch>, GaloisError> {
        let mut out = Vec::new();
        for branch in Flex8Branch::all() {
            let (lo, hi) = recover_flex_bracket(branch, refine_bits)?;
            let margin = (&hi - &lo) / BigRational::from_integer(BigInt::from(64));
            out.push(MotionBranch::new(
                Box::new(move |a: &BigRational| flex8_pose(&Scalar::from(a.clone()), branch)),
                &lo + &margin,
                &hi - &margin,
            ));
        }
        Ok(out)
    }

    fn d_tb_sq(&self, p: &BigRational) -> Result<Scalar, GaloisError> {
        let rho = (self.pose)(p)?;
        Ok(rho.dist_sq(Vertex::Top, Vertex::Bottom)?)
    }
}

/// One configuration found in a fiber of the top–bottom distance map.
pub struct FiberPoint {
    pub branch: usize,
    pub param: BigRational,
    pub realization: Realization,
    pub point: ConfigurationPoint,
}

fn target_diff_sign(branch: &MotionBranch, p: &BigRational, target_sq: &Scalar) -> Result<i8, GaloisError> {
    let d = branch.d_tb_sq(p)?.sub(target_sq);
    Ok(certified_sign(&d, MAXB)?)
}

/// All real configurations with d_TB² = target (up to the parameter
/// tolerance 2^−tol_bits), found by a grid scan plus bisection per
/// branch and deduplicated modulo direct isometries.
pub fn fiber(
    branches: &[MotionBranch],
    complex: &BipyramidComplex,
    target_d_tb_sq: &Scalar,
    grid: u32,
    tol_bits: u32,
) -> Result<Vec<FiberPoint>, GaloisError> {
    let mut roots: Vec<(usize, BigRational)> = Vec::new();
    let mut all_signs: Vec<i8> = Vec::new();
    for (bi, branch) in branches.iter().enumerate() {
        let step = (&branch.hi - &branch.lo) / BigRational::from_integer(BigInt::from(grid));
        let mut prev: Option<(BigRational, i8)> = None;
        for k in 0..=grid {
            let p = &branch.lo + &step * BigRational::from_integer(BigInt::from(k));
            let s = target_diff_sign(branch, &p, target_d_tb_sq)?;
            all_signs.push(s);
            if s == 0 {
                roots.push((bi, p.clone()));
            } else if let Some((pp, ps)) = &prev {
                if *ps != 0 && *ps != s {
                    roots.push((bi, bisect(branch, pp, &p, *ps, target_d_tb_sq, tol_bits)?));
                }
            }
            prev = Some((p, s));
        }
    }
    if roots.is_empty() {
        return Err(GaloisError::TargetOutOfRange);
    }
    let mut out: Vec<FiberPoint> = Vec::new();
    for (bi, p) in roots {
        let rho = (branches[bi].pose)(&p)?;
        let mut duplicate = false;
        for kept in &out {
            if are_congruent(&kept.realization, &rho, tol_bits.min(30), MAXB)? {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            let point = embed(&rho, complex)?;
            out.push(FiberPoint { branch: bi, param: p, realization: rho, point });
        }
    }
    Ok(out)
}

fn bisect(
    branch: &MotionBranch,
    lo: &BigRational,
    hi: &BigRational,
    lo_sign: i8,
    target_sq: &Scalar,
    tol_bits: u32,
) -> Result<BigRational, GaloisError> {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let tol = BigRational::new(BigInt::one(), BigInt::one() << (tol_bits as usize));
    let half = rat_i64(1, 2);
    while (&hi - &lo).abs() > tol {
        let mid = (&lo + &hi) * &half;
        let s = target_diff_sign(branch, &mid, target_sq)?;
        if s == 0 {
            return Ok(mid);
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((&lo + &hi) * half)
}

// -- classification ---------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisClass {
    /// ⟨1⁵⟩: the only nontrivial flip negates every equatorial volume.
    AllFlip,
    /// ⟨1⁵, v⟩ for a two-ones element v, reported up to dihedral
    /// relabeling by its canonical representative.
    FourElement { canonical_two_ones: SignVector },
    /// Real fibers did not exhibit more than the trivial element; no
    /// claim is made about the full group.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub class: GaloisClass,
    pub group: SignGroup,
}

/// Merge the sign vectors observed within each fiber and classify the
/// generated group. Needs fibers over several (≥ 3) generic targets to
/// be meaningful; the result is heuristic in the sense that a real scan
/// can only ever exhibit a subgroup.
pub fn classify(fibers: &[Vec<FiberPoint>]) -> Result<Classification, GaloisError> {
    let mut observed: Vec<SignVector> = Vec::new();
    for fib in fibers {
        if let Some(base) = fib.first() {
            for other in &fib[1..] {
                observed.push(sign_vector(&base.point, &other.point)?);
            }
        }
    }
    let group = SignGroup::generate(observed)?;
    let all = SignVector::all_flip();
    let class = if group.len() == 2 && group.contains(&all) {
        GaloisClass::AllFlip
    } else if group.len() == 4 && group.contains(&all) {
        match group.elements().find(|e| e.ones() == 2) {
            Some(v) => GaloisClass::FourElement { canonical_two_ones: v.dihedral_canonical() },
            None => GaloisClass::Inconclusive,
        }
    } else {
        GaloisClass::Inconclusive
    };
    Ok(Classification { class, group })
}

/// Default generic targets: the 25%, 50% and 75% quantiles of the
/// observed d_TB² range, nudged off any per-edge flat-pose extreme.
pub fn default_targets(
    branches: &[MotionBranch],
    grid: u32,
) -> Result<Vec<Scalar>, GaloisError> {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    let mut sample_cp: Option<ConfigurationPoint> = None;
    let complex = build_bipyramid(5)?;
    for branch in branches {
        let step = (&branch.hi - &branch.lo) / BigRational::from_integer(BigInt::from(grid));
        for k in 0..=grid {
            let p = &branch.lo + &step * BigRational::from_integer(BigInt::from(k));
            let d = branch.d_tb_sq(&p)?;
            let r = scalar_to_rational(&d);
            lo = Some(match lo.take() {
                None => r.clone(),
                Some(x) => x.min(r.clone()),
            });
            hi = Some(match hi.take() {
                None => r,
                Some(x) => x.max(r),
            });
            if sample_cp.is_none() {
                sample_cp = Some(embed(&(branch.pose)(&p)?, &complex)?);
            }
        }
    }
    let (lo, hi) = (lo.ok_or(GaloisError::TargetOutOfRange)?, hi.ok_or(GaloisError::TargetOutOfRange)?);
    let span = &hi - &lo;
    let range = motion_range(sample_cp.as_ref().expect("sampled at least once"))?;
    let mut out = Vec::new();
    for q in [rat_i64(1, 4), rat_i64(1, 2), rat_i64(3, 4)] {
        let mut target = &lo + &span * q;
        // keep clear of branch points where sign vectors are undefined
        for _ in 0..4 {
            if target_is_generic(&target, &range)? {
                break;
            }
            target += &span * rat_i64(1, 64);
        }
        out.push(Scalar::from(target));
    }
    Ok(out)
}

fn target_is_generic(target: &BigRational, range: &MotionRange) -> Result<bool, GaloisError> {
    let t = Scalar::from(target.clone());
    for er in &range.per_edge {
        for extreme in [&er.m_sq, &er.big_m_sq] {
            let diff = t.sub(extreme).refined(48, MAXB)?;
            let enc = diff.enclosure(64);
            let close = !enc.lo.sub(&crate::numeric::Dyadic::pow2(-16)).is_positive()
                && !enc.hi.add(&crate::numeric::Dyadic::pow2(-16)).is_negative();
            if close {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn scalar_to_rational(s: &Scalar) -> BigRational {
    if let Some(r) = s.as_exact() {
        return r.clone();
    }
    let enc = s.enclosure(96);
    (enc.lo.as_rational() + enc.hi.as_rational()) / BigRational::from_integer(BigInt::from(2))
}

// -- group-theoretic consequence checks ------------------------------------

/// Σ s_e over the support of a group element; certified zero for every
/// element of a flexible motion's group.
pub fn zero_sum_check(cp: &ConfigurationPoint, element: &SignVector) -> Result<Scalar, GaloisError> {
    let mut acc = Scalar::zero();
    for (k, ((i, j), s)) in cp.s_edges()?.into_iter().enumerate() {
        let _ = (i, j);
        if element.0[k] == 1 {
            acc = acc.add(&s);
        }
    }
    Ok(acc)
}

/// Consequences of a two-ones group element: the two supported edges
/// have equal length, and their almost tetrahedra reach the flat
/// extremes simultaneously (equal per-edge m and M).
#[derive(Debug, Clone)]
pub struct TwoOnesReport {
    pub edges: [(u8, u8); 2],
    pub length_diff: Scalar,
    pub lengths_equal: bool,
    pub extremes_equal: Option<bool>,
}

pub fn two_ones_consequences(
    lengths: &EdgeLengths,
    element: &SignVector,
) -> Result<TwoOnesReport, GaloisError> {
    if element.ones() != 2 {
        return Err(GaloisError::WrongSupport);
    }
    let supported: Vec<(u8, u8)> = (0..5u8)
        .filter(|&k| element.0[k as usize] == 1)
        .map(|k| (k + 1, if k == 4 { 1 } else { k + 2 }))
        .collect();
    let edges = [supported[0], supported[1]];
    let lam = |(i, j): (u8, u8)| -> Result<&Scalar, GaloisError> {
        lengths
            .lambda_sq
            .get(&EdgeKey::new(Vertex::Eq(i), Vertex::Eq(j)))
            .ok_or_else(|| GaloisError::StructureViolation(format!("missing edge {i}-{j}")))
    };
    let diff = lam(edges[0])?.sub(lam(edges[1])?);
    let lengths_equal = crate::complexes::scalars_equal(lam(edges[0])?, lam(edges[1])?, 100, MAXB)?;
    // Simultaneous flattening: the flat extremes of the two almost
    // tetrahedra coincide. Compare the rational ingredients of the
    // extreme formulas so radical-vs-radical ties stay decidable.
    let er: Vec<EdgeRange> = edges
        .iter()
        .map(|&(i, j)| {
            let tb = |v: Vertex, w: Vertex| -> Result<&Scalar, GaloisError> {
                lengths
                    .lambda_sq
                    .get(&EdgeKey::new(v, w))
                    .ok_or_else(|| GaloisError::StructureViolation(format!("missing edge {v}-{w}")))
            };
            edge_range(
                (i, j),
                lam((i, j))?,
                tb(Vertex::Eq(i), Vertex::Top)?,
                tb(Vertex::Eq(j), Vertex::Top)?,
                tb(Vertex::Eq(i), Vertex::Bottom)?,
                tb(Vertex::Eq(j), Vertex::Bottom)?,
            )
        })
        .collect::<Result<_, _>>()?;
    let extremes_equal = match (
        crate::complexes::scalars_equal(&er[0].m_sq, &er[1].m_sq, 100, MAXB),
        crate::complexes::scalars_equal(&er[0].big_m_sq, &er[1].big_m_sq, 100, MAXB),
    ) {
        (Ok(a), Ok(b)) => Some(a && b),
        _ => None,
    };
    Ok(TwoOnesReport { edges, length_diff: diff, lengths_equal, extremes_equal })
}

// -- flat poses -------------------------------------------------------------

#[derive(Debug)]
pub struct FlatPoseReport {
    /// (branch index, parameter) at which all five equatorial oriented
    /// volumes are certified zero simultaneously.
    pub flat: Vec<(usize, BigRational)>,
    pub range: MotionRange,
    pub samples: usize,
}

/// Scan the sampled flex for whole-polyhedron flat poses and report the
/// motion range derived from the (constant) edge lengths.
pub fn flat_pose_scan(
    branches: &[MotionBranch],
    complex: &BipyramidComplex,
    grid: u32,
) -> Result<FlatPoseReport, GaloisError> {
    let mut flat = Vec::new();
    let mut samples = 0usize;
    let mut range: Option<MotionRange> = None;
    for (bi, branch) in branches.iter().enumerate() {
        let step = (&branch.hi - &branch.lo) / BigRational::from_integer(BigInt::from(grid));
        for k in 0..=grid {
            let p = &branch.lo + &step * BigRational::from_integer(BigInt::from(k));
            let cp = embed(&(branch.pose)(&p)?, complex)?;
            samples += 1;
            if range.is_none() {
                range = Some(motion_range(&cp)?);
            }
            let mut all_zero = true;
            for (_, s) in cp.s_edges()? {
                match certified_sign(&s, MAXB) {
                    Ok(0) => {}
                    _ => {
                        all_zero = false;
                        break;
                    }
                }
            }
            if all_zero {
                flat.push((bi, p));
            }
        }
    }
    Ok(FlatPoseReport {
        flat,
        range: range.ok_or(GaloisError::TargetOutOfRange)?,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{type1_construct, Type1Params};
    use crate::complexes::edge_lengths_sq;

    #[test]
    fn sign_group_generation_and_invariants() {
        let g = SignGroup::generate([SignVector([1, 0, 0, 1, 0]), SignVector::all_flip()]).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.contains(&SignVector([0, 1, 1, 0, 1])));
        // single-one generator violates the structure
        assert!(matches!(
            SignGroup::generate([SignVector([1, 0, 0, 0, 0])]),
            Err(GaloisError::StructureViolation(_))
        ));
    }

    #[test]
    fn dihedral_canonicalization() {
        let v = SignVector([1, 0, 0, 1, 0]);
        let w = SignVector([1, 0, 1, 0, 0]);
        assert!(v.same_dihedral_class(&w));
        assert_eq!(v.dihedral_canonical(), w.dihedral_canonical());
        // the canonical form is orbit-minimal
        let c = v.dihedral_canonical();
        assert!(v.dihedral_orbit().iter().all(|o| &c <= o));
        // adjacent two-ones is a different class
        assert!(!v.same_dihedral_class(&SignVector([1, 1, 0, 0, 0])));
    }

    #[test]
    fn sign_vector_identity_and_mirror() {
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let cp = embed(&rho, &b5).unwrap();
        assert_eq!(sign_vector(&cp, &cp).unwrap(), SignVector::zero());
        let mirror = rho.map_points(|p| [p[0].clone(), p[1].clone(), p[2].neg()]);
        let cpm = embed(&mirror, &b5).unwrap();
        assert_eq!(sign_vector(&cp, &cpm).unwrap(), SignVector::all_flip());
    }

    #[test]
    fn motion_range_brackets_current_distance() {
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let cp = embed(&rho, &b5).unwrap();
        let range = motion_range(&cp).unwrap();
        let d_tb = cp.dist_sq(Vertex::Top, Vertex::Bottom).unwrap();
        assert_eq!(certified_sign(&d_tb.sub(&range.m_sq), MAXB).unwrap(), 1);
        assert_eq!(certified_sign(&range.big_m_sq.sub(d_tb), MAXB).unwrap(), 1);
    }

    #[test]
    fn pentagonal_motion_fiber_and_class() {
        let branches = vec![MotionBranch::type3(4)];
        let b5 = build_bipyramid(5).unwrap();
        let targets = default_targets(&branches, 16).unwrap();
        assert_eq!(targets.len(), 3);
        let mut fibers = Vec::new();
        for t in &targets {
            let f = fiber(&branches, &b5, t, 16, 44).unwrap();
            assert_eq!(f.len(), 2, "two mirror configurations per target");
            assert_eq!(
                sign_vector(&f[0].point, &f[1].point).unwrap(),
                SignVector::all_flip()
            );
            fibers.push(f);
        }
        let c = classify(&fibers).unwrap();
        assert_eq!(c.class, GaloisClass::AllFlip);
    }

    #[test]
    fn fiber_rejects_out_of_range_target() {
        let branches = vec![MotionBranch::type3(4)];
        let b5 = build_bipyramid(5).unwrap();
        assert!(matches!(
            fiber(&branches, &b5, &Scalar::from_int(1000), 8, 30),
            Err(GaloisError::TargetOutOfRange)
        ));
    }

    #[test]
    fn pentagonal_motion_flat_poses_in_both_charts() {
        let branches = vec![MotionBranch::type3(4), MotionBranch::type3_inverted_chart(4)];
        let b5 = build_bipyramid(5).unwrap();
        let report = flat_pose_scan(&branches, &b5, 16).unwrap();
        let params: Vec<(usize, BigRational)> = report.flat;
        assert!(params.contains(&(0, BigRational::zero())), "flat at t = 0");
        assert!(params.contains(&(1, BigRational::zero())), "flat at t = ∞ (chart origin)");
        assert_eq!(params.len(), 2);
    }

    #[test]
    fn zero_sum_over_full_support_is_zero_on_motion() {
        // along a flexible motion the generalized volume vanishes
        let rho = type3_pose(&Scalar::from_frac(3, 7), false).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let cp = embed(&rho, &b5).unwrap();
        let s = zero_sum_check(&cp, &SignVector::all_flip()).unwrap();
        assert_eq!(s.as_exact().map(|r| r.is_zero()), Some(true));
        let empty = zero_sum_check(&cp, &SignVector::zero()).unwrap();
        assert_eq!(certified_sign(&empty, MAXB).unwrap(), 0);
    }

    #[test]
    fn two_ones_consequences_on_rotation_symmetric_family() {
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let lengths = edge_lengths_sq(&rho, &b5.edges()).unwrap();
        let v = SignVector([1, 0, 0, 1, 0]); // edges (1,2) and (4,5)
        let report = two_ones_consequences(&lengths, &v).unwrap();
        assert!(report.lengths_equal, "diff = {:?}", report.length_diff);
        assert_eq!(report.extremes_equal, Some(true));
        // s_{1,2} + s_{4,5} = 0 exactly
        let cp = embed(&rho, &b5).unwrap();
        let s = zero_sum_check(&cp, &v).unwrap();
        assert_eq!(s.as_exact().map(|r| r.is_zero()), Some(true));
        // wrong support rejected
        assert!(matches!(
            two_ones_consequences(&lengths, &SignVector::all_flip()),
            Err(GaloisError::WrongSupport)
        ));
    }

    #[test]
    fn eight_vertex_flex_classifies_as_four_element_group() {
        let branches = MotionBranch::flex8_all(12).unwrap();
        assert_eq!(branches.len(), 4);
        let b5 = build_bipyramid(5).unwrap();
        let targets = default_targets(&branches, 8).unwrap();
        let mut fibers = Vec::new();
        for t in &targets {
            let f = fiber(&branches, &b5, t, 8, 40).unwrap();
            assert_eq!(f.len(), 4, "four branch configurations per target");
            fibers.push(f);
        }
        let c = classify(&fibers).unwrap();
        match &c.class {
            GaloisClass::FourElement { canonical_two_ones } => {
                assert!(canonical_two_ones.same_dihedral_class(&SignVector([1, 0, 1, 0, 0])));
            }
            other => panic!("expected FourElement, got {other:?}"),
        }
        assert_eq!(c.group.len(), 4);
        assert!(c.group.contains(&SignVector([1, 0, 0, 1, 0])));
    }
}

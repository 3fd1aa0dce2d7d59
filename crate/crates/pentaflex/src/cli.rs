//! Command-line front end: construct, verify, scan, classify, and
//! export animation frames. JSON in, JSON/OBJ out, deterministic for a
//! fixed configuration.
//!
//! Exit codes: 0 ok, 1 check failed, 2 bad config, 3 construction or
//! domain error, 4 undecidable predicate.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::cayley_menger::{cm_det_5x5, embed, generalized_volume};
use crate::complexes::{build_bipyramid, build_subdivided, edge_lengths_sq, Realization};
use crate::constructions::{
    fitting_pair_check, flex8_pose, omega_check, place_vertex_n, recover_flex_bracket, type1_construct,
    type3_pose, ConstructionError, DistanceCase, Flex8Branch, Type1Params,
};
use crate::galois::{classify, default_targets, fiber, GaloisError, MotionBranch};
use crate::intersections::scan_polyhedron;
use crate::json::{
    classification_to_json, contact_report_to_json, rational_from_str, realization_from_json,
    realization_to_json, scalar_to_json,
};
use crate::numeric::{certified_sign, NumericError, Scalar};
use crate::obj::{frame_name, obj_export};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_CONFIG: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;
pub const EXIT_UNDECIDABLE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "pentaflex",
    version,
    about = "Flexible pentagonal bipyramids: exact construction, certified verification, \
             self-intersection scanning, and sign-group classification"
)]
pub struct Cli {
    /// Working precision for certified evaluation.
    #[arg(long, global = true, default_value_t = 128)]
    pub precision_bits: u32,
    /// Precision ceiling before a sign is reported undecidable.
    #[arg(long, global = true, default_value_t = 1024)]
    pub max_precision_bits: u32,
    /// JSON configuration file (merged under explicit flags).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (constructs, reports) or directory (frames); stdout
    /// by default.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized verification sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Construct a realization and emit it as JSON (optionally OBJ).
    Construct(ConstructArgs),
    /// Check the defining identities of a family (or a realization
    /// file against its family reference).
    Verify(VerifyArgs),
    /// Classify every face-pair contact of one pose.
    Scan(FamilyArgs),
    /// Classify the sign-flip group of a motion from its real fibers.
    Classify(ClassifyArgs),
    /// Export an OBJ animation of a motion.
    Frames(FramesArgs),
}

#[derive(Args, Clone)]
pub struct FamilyArgs {
    /// All-rational pentagonal motion (parameter t).
    #[arg(long)]
    pub type3: bool,
    /// Rotation-symmetric construction (six rational parameters).
    #[arg(long)]
    pub type1: bool,
    /// Radical one-parameter flex of the embedded 8-vertex polyhedron (parameter a).
    #[arg(long)]
    pub flex8: bool,
    /// Parameter t of the pentagonal motion ("p/q"; "inf" for the
    /// 1/t-chart origin).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Parameter a of the radical flex ("p/q").
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Type-1 parameters "t,a,x3,y3,z3,mu" as rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Radical branch "s1,s2" with s ∈ {+1,-1}: s1 = inner radical
    /// sign, s2 = +1 upright / -1 mirrored. Default "+1,+1".
    #[arg(long, allow_hyphen_values = true)]
    pub branch: Option<String>,
    /// Subdivide face B-1-2 with the extra vertex N.
    #[arg(long)]
    pub with_n: bool,
}

#[derive(Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Additionally write the mesh to this OBJ file.
    #[arg(long)]
    pub obj: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of parameter samples for family sweeps.
    #[arg(long, default_value_t = 17)]
    pub samples: u32,
    /// Realization JSON to check against the family reference.
    #[arg(long)]
    pub realization: Option<PathBuf>,
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Grid resolution of the fiber search.
    #[arg(long, default_value_t = 16)]
    pub grid: u32,
}

#[derive(Args)]
pub struct FramesArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of frames.
    #[arg(long, default_value_t = 24)]
    pub count: u32,
}

pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn bad_config(msg: impl Into<String>) -> Failure {
        Failure { code: EXIT_BAD_CONFIG, message: msg.into() }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Failure {
        let code = match &e {
            ConstructionError::Numeric(NumericError::SignUndecidable { .. }) => EXIT_UNDECIDABLE,
            _ => EXIT_CONSTRUCTION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<GaloisError> for Failure {
    fn from(e: GaloisError) -> Failure {
        let code = match &e {
            GaloisError::FlatEdge(_, _) => EXIT_UNDECIDABLE,
            GaloisError::Numeric(NumericError::SignUndecidable { .. }) => EXIT_UNDECIDABLE,
            GaloisError::TargetOutOfRange | GaloisError::WrongSupport => EXIT_BAD_CONFIG,
            _ => EXIT_CONSTRUCTION,
        };
        Failure { code, message: e.to_string() }
    }
}

macro_rules! impl_failure_via_construction_code {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Failure {
                Failure { code: EXIT_CONSTRUCTION, message: e.to_string() }
            }
        }
    )*};
}
impl_failure_via_construction_code!(
    crate::complexes::ComplexError,
    crate::cayley_menger::CmError,
    crate::obj::ObjError
);

impl From<crate::json::JsonError> for Failure {
    fn from(e: crate::json::JsonError) -> Failure {
        Failure::bad_config(e.to_string())
    }
}

impl From<crate::intersections::IntersectionError> for Failure {
    fn from(e: crate::intersections::IntersectionError) -> Failure {
        let code = match &e {
            crate::intersections::IntersectionError::Undecidable(_, _, _) => EXIT_UNDECIDABLE,
            _ => EXIT_CONSTRUCTION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Failure {
        let code = match &e {
            NumericError::SignUndecidable { .. } => EXIT_UNDECIDABLE,
            _ => EXIT_CONSTRUCTION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::bad_config(e.to_string())
    }
}

/// Entry point; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            let body = json!({ "error": f.message });
            println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            f.code
        }
    }
}

// -- family resolution ------------------------------------------------------

#[derive(Clone)]
enum FamilySpec {
    Type3 { t: Option<BigRational> }, // None = t → ∞ (chart origin)
    Type1 { params: Type1Params },
    Flex8 { a: BigRational, branch: Flex8Branch },
}

fn load_config(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::bad_config(format!("config: {e}")))
}

fn parse_branch(text: &str) -> Result<Flex8Branch, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Failure::bad_config(format!("branch must be \"s1,s2\", got {text:?}")));
    }
    let sign = |s: &str| match s {
        "1" | "+1" => Ok(true),
        "-1" => Ok(false),
        other => Err(Failure::bad_config(format!("branch sign {other:?} (want +1 or -1)"))),
    };
    Ok(Flex8Branch { inner_positive: sign(parts[0])?, mirrored: !sign(parts[1])? })
}

fn branch_from_json(v: &Value) -> Result<Flex8Branch, Failure> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Failure::bad_config("branch must be [s1, s2]"))?;
    let sign = |x: &Value| match x.as_i64() {
        Some(1) => Ok(true),
        Some(-1) => Ok(false),
        _ => Err(Failure::bad_config("branch entries must be 1 or -1")),
    };
    Ok(Flex8Branch { inner_positive: sign(&arr[0])?, mirrored: !sign(&arr[1])? })
}

fn rational_arg(text: &str, what: &str) -> Result<BigRational, Failure> {
    rational_from_str(text).map_err(|_| Failure::bad_config(format!("bad {what}: {text:?}")))
}

fn params_from_list(text: &str) -> Result<Type1Params, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(Failure::bad_config(format!(
            "--params wants 6 comma-separated rationals t,a,x3,y3,z3,mu; got {}",
            parts.len()
        )));
    }
    let mut vals = Vec::with_capacity(6);
    for p in &parts {
        vals.push(Scalar::from(rational_arg(p, "type1 parameter")?));
    }
    Ok(Type1Params {
        t: vals[0].clone(),
        a: vals[1].clone(),
        x3: vals[2].clone(),
        y3: vals[3].clone(),
        z3: vals[4].clone(),
        mu: vals[5].clone(),
    })
}

fn resolve_family(cli: &Cli, fam: &FamilyArgs, param_required: bool) -> Result<FamilySpec, Failure> {
    let config = match &cli.config {
        Some(path) => Some(load_config(path)?),
        None => None,
    };
    let construction = if fam.type3 {
        "type3".to_string()
    } else if fam.type1 {
        "type1".to_string()
    } else if fam.flex8 {
        "flex8".to_string()
    } else if let Some(c) = config.as_ref().and_then(|c| c.get("construction")).and_then(Value::as_str) {
        c.to_string()
    } else {
        return Err(Failure::bad_config("select a family: --type3, --type1, or --flex8"));
    };
    let cfg_params = config.as_ref().and_then(|c| c.get("params"));
    let cfg_str = |key: &str| -> Option<String> {
        cfg_params
            .and_then(|p| p.get(key))
            .map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
    };
    match construction.as_str() {
        "type3" => {
            let t_text = match fam.t.clone().or_else(|| cfg_str("t")) {
                Some(t) => t,
                None if !param_required => "0".to_string(),
                None => return Err(Failure::bad_config("type3 needs --t")),
            };
            if t_text == "inf" || t_text == "∞" {
                Ok(FamilySpec::Type3 { t: None })
            } else {
                Ok(FamilySpec::Type3 { t: Some(rational_arg(&t_text, "t")?) })
            }
        }
        "type1" => {
            if let Some(text) = &fam.params {
                Ok(FamilySpec::Type1 { params: params_from_list(text)? })
            } else if let Some(p) = cfg_params {
                let field = |k: &'static str| -> Result<Scalar, Failure> {
                    let v = p.get(k).ok_or_else(|| Failure::bad_config(format!("type1 params missing {k:?}")))?;
                    Ok(crate::json::scalar_from_json(v)?)
                };
                Ok(FamilySpec::Type1 {
                    params: Type1Params {
                        t: field("t")?,
                        a: field("a")?,
                        x3: field("x3")?,
                        y3: field("y3")?,
                        z3: field("z3")?,
                        mu: field("mu")?,
                    },
                })
            } else {
                Err(Failure::bad_config("type1 needs --params t,a,x3,y3,z3,mu"))
            }
        }
        "flex8" => {
            let a_text = match fam.a.clone().or_else(|| cfg_str("a")) {
                Some(a) => a,
                None if !param_required => "1".to_string(),
                None => return Err(Failure::bad_config("flex8 needs --a")),
            };
            let branch = if let Some(b) = &fam.branch {
                parse_branch(b)?
            } else if let Some(b) = config.as_ref().and_then(|c| c.get("branch")) {
                branch_from_json(b)?
            } else {
                Flex8Branch::PRINCIPAL
            };
            Ok(FamilySpec::Flex8 { a: rational_arg(&a_text, "a")?, branch })
        }
        other => Err(Failure::bad_config(format!("unknown construction {other:?}"))),
    }
}

fn construct_pose(spec: &FamilySpec, with_n: bool) -> Result<Realization, Failure> {
    let rho = match spec {
        FamilySpec::Type3 { t: Some(t) } => type3_pose(&Scalar::from(t.clone()), false)?,
        FamilySpec::Type3 { t: None } => crate::constructions::type3_pose_infinity(false),
        FamilySpec::Type1 { params } => type1_construct(params)?.1,
        FamilySpec::Flex8 { a, branch } => flex8_pose(&Scalar::from(a.clone()), *branch)?,
    };
    if with_n {
        Ok(place_vertex_n(&rho)?)
    } else {
        Ok(rho)
    }
}

fn emit(out: &Option<PathBuf>, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

// -- subcommands ------------------------------------------------------------

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    if cli.precision_bits == 0 || cli.max_precision_bits < cli.precision_bits {
        return Err(Failure::bad_config("precision flags must satisfy 0 < precision ≤ max"));
    }
    match &cli.command {
        Command::Construct(args) => cmd_construct(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Scan(fam) => cmd_scan(cli, fam),
        Command::Classify(args) => cmd_classify(cli, args),
        Command::Frames(args) => cmd_frames(cli, args),
    }
}

/// Drop scaffolding vertices (the type-1 auxiliary vertex 0) that no
/// face of the output polyhedron references.
fn restrict_to_faces(rho: &Realization, faces: &[crate::complexes::Face]) -> Realization {
    let mut out = Realization::new();
    for (v, p) in rho.iter() {
        if faces.iter().any(|f| f.contains(*v)) {
            out.insert(*v, p.clone());
        }
    }
    out
}

fn faces_for(with_n: bool) -> Vec<crate::complexes::Face> {
    if with_n {
        build_subdivided().faces()
    } else {
        build_bipyramid(5).expect("n = 5 is valid").faces()
    }
}

fn cmd_construct(cli: &Cli, args: &ConstructArgs) -> Result<i32, Failure> {
    let spec = resolve_family(cli, &args.family, true)?;
    let faces = faces_for(args.family.with_n);
    let rho = restrict_to_faces(&construct_pose(&spec, args.family.with_n)?, &faces);
    let mut body = realization_to_json(&rho).as_object().cloned().expect("object");
    body.insert("precision_bits".into(), json!(cli.precision_bits));
    body.insert("max_precision_bits".into(), json!(cli.max_precision_bits));
    if let Some(obj_path) = &args.obj {
        let text = obj_export(&rho, &faces)?;
        std::fs::write(obj_path, text)?;
        body.insert("obj".into(), json!(obj_path.display().to_string()));
    }
    emit(&cli.out, &Value::Object(body))?;
    Ok(EXIT_OK)
}

struct CheckList {
    checks: Vec<Value>,
    all_pass: bool,
}

impl CheckList {
    fn new() -> CheckList {
        CheckList { checks: Vec::new(), all_pass: true }
    }

    fn push(&mut self, name: &str, pass: bool, detail: Value) {
        if !pass {
            self.all_pass = false;
        }
        self.checks.push(json!({ "name": name, "pass": pass, "detail": detail }));
    }
}

/// Certified-zero check tolerant of radical inputs: exact zero, or an
/// enclosure pinned below 2^−64.
fn is_negligible(s: &Scalar) -> bool {
    match certified_sign(s, 1024) {
        Ok(0) => true,
        Ok(_) => false,
        Err(_) => s
            .refined(64, 1024)
            .map(|r| r.enclosure(96).width_log2().map(|w| w <= -64).unwrap_or(false))
            .unwrap_or(false),
    }
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn random_rational(state: &mut u64) -> BigRational {
    let num = (splitmix(state) % 1999) as i64 - 999;
    let den = (splitmix(state) % 63) as i64 + 1;
    BigRational::new(num.into(), den.into())
}

fn membership_check(rho: &Realization, checks: &mut CheckList, label: &str) -> Result<(), Failure> {
    let b5 = build_bipyramid(5)?;
    let cp = embed(rho, &b5)?;
    let mut ok = true;
    use crate::complexes::Vertex;
    for ((i, j), s) in cp.s_edges()? {
        let (vi, vj) = (Vertex::Eq(i), Vertex::Eq(j));
        let det = cm_det_5x5(
            cp.dist_sq(vi, vj)?,
            cp.dist_sq(vi, Vertex::Top)?,
            cp.dist_sq(vi, Vertex::Bottom)?,
            cp.dist_sq(vj, Vertex::Top)?,
            cp.dist_sq(vj, Vertex::Bottom)?,
            cp.dist_sq(Vertex::Top, Vertex::Bottom)?,
        );
        let resid = Scalar::from_int(288).mul(&s.mul(&s)).sub(&det);
        if !is_negligible(&resid) {
            ok = false;
        }
    }
    checks.push(&format!("{label}: 288s² = det(M)"), ok, Value::Null);
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<i32, Failure> {
    let spec = resolve_family(cli, &args.family, args.realization.is_some())?;
    let mut checks = CheckList::new();
    let mut state = cli.seed ^ 0xa076_1d64_78bd_642f;

    if let Some(path) = &args.realization {
        // compare a stored realization against the family reference
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Failure::bad_config(e.to_string()))?;
        let stored = realization_from_json(&v)?;
        let reference = construct_pose(&spec, args.family.with_n)?;
        let edges = if args.family.with_n {
            build_subdivided().edges()
        } else {
            build_bipyramid(5)?.edges()
        };
        let lr = edge_lengths_sq(&reference, &edges)?;
        let ls = edge_lengths_sq(&stored, &edges)?;
        let mut ok = true;
        let mut bad = Vec::new();
        for (k, a) in &lr.lambda_sq {
            let b = &ls.lambda_sq[k];
            if !is_negligible(&a.sub(b)) {
                ok = false;
                bad.push(json!(format!("{}-{}", k.0, k.1)));
            }
        }
        checks.push("edge lengths match family reference", ok, json!(bad));
    } else {
        match &spec {
            FamilySpec::Type3 { .. } => {
                let base = type3_pose(&Scalar::zero(), false)?;
                let b5 = build_bipyramid(5)?;
                let edges = b5.edges();
                let base_lengths = edge_lengths_sq(&base, &edges)?;
                let mut constant = true;
                let mut zero_sum = true;
                for _ in 0..args.samples {
                    let t = random_rational(&mut state);
                    let rho = type3_pose(&Scalar::from(t), false)?;
                    let lengths = edge_lengths_sq(&rho, &edges)?;
                    for (k, a) in &base_lengths.lambda_sq {
                        if lengths.lambda_sq[k].sub(a).as_exact().map(|r| !num_traits::Zero::is_zero(r)).unwrap_or(true) {
                            constant = false;
                        }
                    }
                    let cp = embed(&rho, &b5)?;
                    if certified_sign(&generalized_volume(&cp)?, cli.max_precision_bits)? != 0 {
                        zero_sum = false;
                    }
                }
                checks.push("edge lengths constant along the motion (exact)", constant, Value::Null);
                checks.push("generalized volume vanishes along the motion", zero_sum, Value::Null);
                membership_check(&type3_pose(&Scalar::from_frac(3, 7), false)?, &mut checks, "sample pose")?;
            }
            FamilySpec::Type1 { params } => {
                let report = omega_check(params)?;
                checks.push(
                    "ω linear identity",
                    is_negligible(&report.linear_residual),
                    scalar_to_json(&report.linear_residual),
                );
                checks.push(
                    "ω product identity",
                    is_negligible(&report.pythagoras_residual),
                    scalar_to_json(&report.pythagoras_residual),
                );
                let (fp, rho) = type1_construct(params)?;
                let fpr = fitting_pair_check(&fp)?;
                checks.push("fitting pair shares 0, 3, T, B", fpr.shared_vertices_coincide, Value::Null);
                checks.push(
                    "0 between 1 and 5 ⇒ distance sum case",
                    matches!(fpr.distance_case, DistanceCase::Sum | DistanceCase::Difference),
                    json!(format!("{:?}", fpr.distance_case)),
                );
                membership_check(&rho, &mut checks, "constructed pose")?;
            }
            FamilySpec::Flex8 { branch, .. } => {
                let (lo, hi) = recover_flex_bracket(*branch, 10)?;
                let span = &hi - &lo;
                let margin = &span / BigRational::from_integer(16.into());
                let (lo, hi) = (&lo + &margin, &hi - &margin);
                let n = args.samples.clamp(2, 64);
                let s = build_subdivided();
                let edges = s.edges();
                let mut base: Option<crate::complexes::EdgeLengths> = None;
                let mut constant = true;
                for k in 0..n {
                    let a = &lo
                        + (&hi - &lo) * BigRational::new((k as i64).into(), ((n - 1) as i64).into());
                    let rho = place_vertex_n(&flex8_pose(&Scalar::from(a), *branch)?)?;
                    let lengths = edge_lengths_sq(&rho, &edges)?;
                    match &base {
                        None => base = Some(lengths),
                        Some(b) => {
                            for (k, v) in &b.lambda_sq {
                                if !is_negligible(&lengths.lambda_sq[k].sub(v)) {
                                    constant = false;
                                }
                            }
                        }
                    }
                }
                checks.push(
                    "edge lengths constant along the flex (within 2^-64)",
                    constant,
                    json!({"samples": n}),
                );
            }
        }
    }

    let body = json!({ "checks": checks.checks, "pass": checks.all_pass });
    emit(&cli.out, &body)?;
    Ok(if checks.all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_scan(cli: &Cli, fam: &FamilyArgs) -> Result<i32, Failure> {
    let spec = resolve_family(cli, fam, true)?;
    let rho = construct_pose(&spec, fam.with_n)?;
    let report = scan_polyhedron(&rho, &faces_for(fam.with_n))?;
    let undecided = !report.undecided.is_empty();
    emit(&cli.out, &contact_report_to_json(&report))?;
    Ok(if undecided { EXIT_UNDECIDABLE } else { EXIT_OK })
}

fn cmd_classify(cli: &Cli, args: &ClassifyArgs) -> Result<i32, Failure> {
    let spec = resolve_family(cli, &args.family, false)?;
    let branches = match &spec {
        FamilySpec::Type3 { .. } => vec![MotionBranch::type3(4)],
        FamilySpec::Flex8 { .. } => MotionBranch::flex8_all(12)?,
        FamilySpec::Type1 { .. } => {
            return Err(Failure::bad_config(
                "classify needs a motion: --type3 or --flex8 (a single type1 pose has no flex parameter)",
            ))
        }
    };
    let b5 = build_bipyramid(5)?;
    let targets = default_targets(&branches, args.grid)?;
    let mut fibers = Vec::new();
    for t in &targets {
        fibers.push(fiber(&branches, &b5, t, args.grid, 44)?);
    }
    let classification = classify(&fibers)?;
    emit(&cli.out, &classification_to_json(&classification))?;
    Ok(EXIT_OK)
}

fn cmd_frames(cli: &Cli, args: &FramesArgs) -> Result<i32, Failure> {
    let spec = resolve_family(cli, &args.family, false)?;
    if args.count == 0 {
        return Err(Failure::bad_config("--count must be positive"));
    }
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let faces = faces_for(args.family.with_n);
    let params: Vec<FamilySpec> = match &spec {
        FamilySpec::Type3 { .. } => (0..args.count)
            .map(|k| {
                // sweep t over [-4, 4]
                let t = BigRational::new((8 * k as i64 - 4 * (args.count as i64 - 1)).into(), ((args.count as i64 - 1).max(1)).into());
                FamilySpec::Type3 { t: Some(t) }
            })
            .collect(),
        FamilySpec::Flex8 { branch, .. } => {
            let (lo, hi) = recover_flex_bracket(*branch, 10)?;
            let span = &hi - &lo;
            let margin = &span / BigRational::from_integer(16.into());
            let (lo, hi) = (&lo + &margin, &hi - &margin);
            (0..args.count)
                .map(|k| FamilySpec::Flex8 {
                    a: &lo
                        + (&hi - &lo)
                            * BigRational::new((k as i64).into(), ((args.count as i64 - 1).max(1)).into()),
                    branch: *branch,
                })
                .collect()
        }
        FamilySpec::Type1 { .. } => vec![spec.clone(); args.count as usize],
    };
    let mut files = Vec::new();
    for (k, p) in params.iter().enumerate() {
        let rho = restrict_to_faces(&construct_pose(p, args.family.with_n)?, &faces);
        let name = frame_name(k);
        std::fs::write(dir.join(&name), obj_export(&rho, &faces)?)?;
        files.push(name);
    }
    let mut meta = Map::new();
    meta.insert("frames".into(), json!(files));
    meta.insert("directory".into(), json!(dir.display().to_string()));
    println!("{}", serde_json::to_string_pretty(&Value::Object(meta)).expect("serializable"));
    Ok(EXIT_OK)
}

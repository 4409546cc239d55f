//! Command-line front end: `rankzeta <module> <op> [flags]`.
//!
//! Every command prints one JSON document (or CSV where a table makes sense)
//! to standard output or `--output`. Exit codes: 0 pass, 1 check failure or
//! numerical failure, 2 usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{run_criterion, CheckConfig, Criterion};
use crate::eisenstein::{epstein_direct, epstein_fourier, truncated_integral_closed, truncated_integral_geo, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::lattice::{
    arthur_truncation_one, degree, dual_lattice, first_minimum, fundamental_relation_check, h0, hn_polygon,
    hn_slope_excess, is_semistable, micro_bridge_check, GroupPoint, LatticeBasis, Polygon, H0_TOL,
};
use crate::periods::{
    calibrate_spec, fe_check, find_zeros, parabolic_name, parse_parabolic, CalibrationOptions, ZeroOptions, ZetaFunction,
    ZetaSpec,
};
use crate::presets::preset;
use crate::rootdata::{build_root_system, dump_json, CartanType};
use crate::specfun::c;
use crate::truncomb::{identity_check, Identity, SamplingSpec};

#[derive(Debug, Parser)]
#[command(name = "rankzeta", version, about = "High-rank zeta functions over Q and rank-two lattice checks")]
pub struct RunConfig {
    /// Worker threads for the parallel kernels (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ξ^{G/P} from Weyl periods and iterated residues.
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Rank-two Epstein series and the truncated Rankin–Selberg integral.
    #[command(subcommand)]
    Epstein(EpsteinCmd),
    /// Rank-two lattice invariants, stability and bridge identities.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Exact checks of the truncation identities.
    #[command(subcommand)]
    Truncomb(TruncombCmd),
    /// Root system data.
    #[command(subcommand)]
    Rootdata(RootdataCmd),
    /// Run one acceptance criterion (name or number 1–9).
    Check {
        criterion: String,
        /// Multiplier on the stated sample counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Group: SL2…SL5, Sp4, G2 (or A1…A4, C2).
    #[arg(long, default_value = "SL2")]
    pub group: String,
    /// Maximal parabolic: P{k}{n-k} for SL(n), long/short for Sp4 and G2.
    #[arg(long)]
    pub parabolic: Option<String>,
    /// JSON spec file; overrides --group/--parabolic.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ZetaCmd {
    /// Evaluate the normalized ξ^{G/P}(σ).
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        sigma: Vec<f64>,
    },
    /// Check ξ^{G/P}(σ) = ξ^{G/P}(1−σ) on seeded random points.
    Fe {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Locate zeros on the critical line and count them by the argument principle.
    Zeros {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 15.0)]
        t_max: f64,
        /// Largest admissible |Re σ − 1/2|.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Calibrate the normalization and print the resulting spec.
    Calibrate {
        #[command(flatten)]
        spec: SpecArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum EpsteinCmd {
    /// Ê(z, s) by Fourier expansion, and by the direct lattice sum when Re s > 1.
    Eval {
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        point: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        s: Vec<f64>,
    },
    /// Geometric truncated integral against its closed form.
    RsCheck {
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        s: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Basis rows b1 = (a, b), b2 = (c, d).
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, conflicts_with = "point")]
    pub basis: Option<Vec<f64>>,
    /// Upper-half-plane point; the lattice is (Z + Zz)/√y.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    pub point: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// h⁰(Λ) = log Σ exp(−π|v|²).
    H0 {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Riemann–Roch defect h⁰(Λ) − h⁰(Λ∨) − deg Λ.
    Rr {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Harder–Narasimhan polygon.
    Hn {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Semistability by the HN route and by the cusp route.
    Semistable {
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Micro Bridge, Fundamental Relation and Λᵀ1 at g = n(u) diag(a₁, 1/a₁) k(θ).
    Bridge {
        #[arg(long, num_args = 3, value_names = ["A1", "U", "THETA"], allow_negative_numbers = true)]
        g: Vec<f64>,
        /// Polygon value p(1).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p: f64,
        /// Truncation parameter t = α(T).
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TruncombCmd {
    /// Check one identity (or `all`) exhaustively in rank ≤ 2, sampled above.
    Check {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "all")]
        identity: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Fixed Λ for the `Lemma2-phi` identity, comma-separated rationals in weight coordinates.
        #[arg(long)]
        lambda: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RootdataCmd {
    /// Cartan matrix, positive roots, coroots and Weyl group size.
    Dump {
        #[arg(long)]
        group: String,
    },
}

/// A finished command: the report and whether it passed.
struct Outcome {
    pass: bool,
    json: Value,
    csv: Option<String>,
}

impl Outcome {
    fn new<T: Serialize>(pass: bool, report: &T) -> Result<Self> {
        Ok(Outcome {
            pass,
            json: serde_json::to_value(report)?,
            csv: None,
        })
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cfg) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("rankzeta: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Dimension { .. }
        | Error::Domain { .. }
        | Error::Range { .. }
        | Error::Pole { .. }
        | Error::DegenerateBasis { .. }
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn execute(cfg: &RunConfig) -> Result<bool> {
    if cfg.threads == Some(0) {
        return Err(Error::Config("--threads must be positive".into()));
    }
    let out = with_threads(cfg.threads, || dispatch(cfg))??;
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Csv => out
            .csv
            .ok_or_else(|| Error::Config("this command has no CSV form; use --format json".into()))?,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(out.pass)
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R>(_threads: Option<usize>, f: impl FnOnce() -> R) -> Result<R> {
    Ok(f())
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Zeta(cmd) => zeta(cmd, cfg.seed),
        Command::Epstein(cmd) => epstein(cmd),
        Command::Lattice(cmd) => lattice(cmd),
        Command::Truncomb(TruncombCmd::Check {
            group,
            identity,
            samples,
            lambda,
        }) => truncomb(group, identity, *samples, lambda.as_deref(), cfg.seed),
        Command::Rootdata(RootdataCmd::Dump { group }) => {
            let rs = build_root_system(group.parse()?);
            Ok(Outcome {
                pass: true,
                json: dump_json(&rs),
                csv: None,
            })
        }
        Command::Check { criterion, scale } => {
            if !(*scale > 0.0) {
                return Err(Error::Config("--scale must be positive".into()));
            }
            let criterion: Criterion = criterion.parse()?;
            let rep = run_criterion(criterion, &CheckConfig { seed: cfg.seed, scale: *scale })?;
            Outcome::new(rep.pass, &rep)
        }
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {x}")))
    }
}

fn load_spec(a: &SpecArgs) -> Result<ZetaSpec> {
    if let Some(path) = &a.spec {
        return ZetaSpec::from_json(&std::fs::read_to_string(path)?);
    }
    let group: CartanType = a.group.parse()?;
    let alpha_p = match &a.parabolic {
        Some(name) => parse_parabolic(group, name)?,
        None if group.rank() == 1 => 0,
        None => return Err(Error::Config(format!("--parabolic is required for {}", group.group_name()))),
    };
    preset(group, alpha_p)
}

fn spec_label(spec: &ZetaSpec) -> String {
    format!("{}/{}", spec.group.group_name(), parabolic_name(spec.group, spec.alpha_p))
}

fn zeta(cmd: &ZetaCmd, seed: u64) -> Result<Outcome> {
    match cmd {
        ZetaCmd::Eval { spec, sigma } => {
            let spec = load_spec(spec)?;
            let sigma = match sigma.as_slice() {
                [re, im] => c(*re, *im),
                _ => return Err(Error::Config("--sigma RE IM is required".into())),
            };
            let value = ZetaFunction::new(spec.clone())?.eval(sigma)?;
            Outcome::new(true, &json!({ "spec": spec_label(&spec), "sigma": sigma, "value": value }))
        }
        ZetaCmd::Fe { spec, samples, tol } => {
            positive("--tol", *tol)?;
            let zf = ZetaFunction::new(load_spec(spec)?)?;
            let rep = fe_check(&zf, *samples, seed, *tol)?;
            let mut out = Outcome::new(rep.pass, &rep)?;
            out.csv = Some(rep.to_csv()?);
            Ok(out)
        }
        ZetaCmd::Zeros { spec, t_max, tol } => {
            positive("--t-max", *t_max)?;
            positive("--tol", *tol)?;
            let zf = ZetaFunction::new(load_spec(spec)?)?;
            let rep = find_zeros(&zf, &ZeroOptions::for_scale(*t_max, zf.spec.norm.max_clearing_scale()))?;
            let pass = rep.counts_match && rep.max_re_deviation < *tol;
            let mut out = Outcome::new(pass, &rep)?;
            out.csv = Some(rep.to_csv()?);
            Ok(out)
        }
        ZetaCmd::Calibrate { spec } => {
            let (spec, cal) = calibrate_spec(&load_spec(spec)?, &CalibrationOptions::default())?;
            Outcome::new(true, &json!({ "spec": spec, "centre": cal.centre, "deviation": cal.deviation }))
        }
    }
}

fn complex_arg(name: &str, v: &[f64]) -> Result<crate::specfun::C64> {
    match v {
        [re, im] => Ok(c(*re, *im)),
        _ => Err(Error::Config(format!("{name} RE IM is required"))),
    }
}

fn epstein(cmd: &EpsteinCmd) -> Result<Outcome> {
    match cmd {
        EpsteinCmd::Eval { point, s } => {
            let z = match point.as_slice() {
                [x, y] => UpperHalfPoint::new(*x, *y)?,
                _ => return Err(Error::Config("--point X Y is required".into())),
            };
            let s = complex_arg("--s", s)?;
            let fourier = epstein_fourier(z, s, None)?;
            let direct = if s.re > 1.0 { Some(epstein_direct(z, s)?) } else { None };
            let rel_diff = direct.map(|d| (d - fourier).norm() / d.norm());
            Outcome::new(true, &json!({ "point": z, "s": s, "fourier": fourier, "direct": direct, "relative_difference": rel_diff }))
        }
        EpsteinCmd::RsCheck { s, t, tol } => {
            positive("--tol", *tol)?;
            if !(*t >= 1.0) {
                return Err(Error::Config(format!("--t must be at least 1, got {t}")));
            }
            let s = complex_arg("--s", s)?;
            let geo = truncated_integral_geo(s, *t, (*tol * 1e-3).max(1e-12))?;
            let closed = truncated_integral_closed(s, *t)?;
            let err = (geo.value - closed).norm();
            Outcome::new(
                err <= *tol,
                &json!({ "s": s, "T": t, "geometric": geo, "closed": closed, "abs_err": err, "tol": tol, "pass": err <= *tol }),
            )
        }
    }
}

fn load_lattice(a: &LatticeArgs) -> Result<LatticeBasis> {
    match (&a.basis, &a.point) {
        (Some(b), None) => LatticeBasis::from_slice(b),
        (None, Some(p)) => match p.as_slice() {
            [x, y] => Ok(LatticeBasis::from_point(UpperHalfPoint::new(*x, *y)?)),
            _ => Err(Error::Config("--point X Y".into())),
        },
        _ => Err(Error::Config("give the lattice as --basis A B C D or --point X Y".into())),
    }
}

fn lattice(cmd: &LatticeCmd) -> Result<Outcome> {
    match cmd {
        LatticeCmd::H0 { lattice } => {
            let b = load_lattice(lattice)?;
            Outcome::new(true, &json!({ "basis": b, "h0": h0(&b, H0_TOL), "degree": degree(&b) }))
        }
        LatticeCmd::Rr { lattice, tol } => {
            positive("--tol", *tol)?;
            let b = load_lattice(lattice)?;
            let (h, hd, d) = (h0(&b, H0_TOL), h0(&dual_lattice(&b), H0_TOL), degree(&b));
            let defect = h - hd - d;
            let pass = defect.abs() <= *tol;
            Outcome::new(pass, &json!({ "basis": b, "h0": h, "h0_dual": hd, "degree": d, "defect": defect, "tol": tol, "pass": pass }))
        }
        LatticeCmd::Hn { lattice } => {
            let b = load_lattice(lattice)?;
            Outcome::new(
                true,
                &json!({ "basis": b, "polygon": hn_polygon(&b), "first_minimum": first_minimum(&b), "slope_excess": hn_slope_excess(&b) }),
            )
        }
        LatticeCmd::Semistable { lattice } => {
            let b = load_lattice(lattice)?;
            let v = is_semistable(&b)?;
            let agree = v.boundary || v.hn_route == v.cusp_route;
            Outcome::new(agree, &json!({ "basis": b, "verdict": v, "routes_agree": agree }))
        }
        LatticeCmd::Bridge { g, p, t } => {
            let g = match g.as_slice() {
                [a1, u, theta] => GroupPoint::new(*a1, *u, *theta)?,
                _ => return Err(Error::Config("--g A1 U THETA is required".into())),
            };
            if *t < 0.0 {
                return Err(Error::Config("--t must be non-negative".into()));
            }
            let poly = Polygon::rank2(*p);
            let mut pass = true;
            let mut tally = |r: Result<(bool, Value)>| -> Result<Value> {
                match r {
                    Ok((ok, v)) => {
                        pass &= ok;
                        Ok(json!({ "holds": ok, "sides": v }))
                    }
                    Err(Error::Tie(why)) => Ok(json!({ "tie": why })),
                    Err(e) => Err(e),
                }
            };
            let micro = tally(micro_bridge_check(&g, &poly).and_then(|s| Ok((s.holds(), serde_json::to_value(s)?))))?;
            let fund = if *p >= 0.0 {
                tally(fundamental_relation_check(&g, &poly).map(|(l, r)| (l == r, json!([l, r]))))?
            } else {
                json!({ "skipped": "needs p(1) >= 0" })
            };
            let arthur = tally(
                arthur_truncation_one(&g, *t)
                    .and_then(|b| Ok((b.truncated_sum == b.region, serde_json::to_value(b)?))),
            )?;
            Outcome::new(
                pass,
                &json!({ "g": g, "p1": p, "t": t, "micro_bridge": micro, "fundamental_relation": fund, "arthur_truncation": arthur }),
            )
        }
    }
}

fn truncomb(group: &str, identity: &str, samples: usize, lambda: Option<&str>, seed: u64) -> Result<Outcome> {
    let group: CartanType = group.parse()?;
    let ids: Vec<Identity> = if identity.eq_ignore_ascii_case("all") {
        Identity::ALL.to_vec()
    } else {
        vec![identity.parse()?]
    };
    let lambda = lambda
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse::<Rational64>().map_err(|e| Error::Config(format!("bad rational '{x}': {e}"))))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let spec = SamplingSpec { samples, seed, lambda };
    let reports = ids.into_iter().map(|id| identity_check(group, id, &spec)).collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    Outcome::new(pass, &json!({ "seed": seed, "pass": pass, "reports": reports }))
}

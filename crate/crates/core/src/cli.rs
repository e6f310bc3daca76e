//! The `octoforms` command line. [`run`] takes the argument vector and a sink
//! and returns the process exit code: 0 pass, 1 failed invariant, 2 usage.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::berger::{berger_mc, FitReport, SampledForm};
use crate::canonical::{cgm_form, kahler_matrix, kotrbaty_psi8, spin9_charpoly, spin9_form, spin9_tau4};
use crate::clifford::{delta, CliffordSystem, StandardKind};
use crate::error::{Error, Result};
use crate::even_clifford::{build_model, eiii_closures, eiii_tau2, structure_census, ModelName};
use crate::export::{matrix_rows, sig17, triplets};
use crate::exterior::{charpoly_coeffs, Multivector};
use crate::hopf::{inner_products, lambda_report, random_sphere_point, SpherePoint16};
use crate::rational::Rational;
use crate::sphere_fields::{build_fields, sigma, verify_system};
use crate::verify::{run_suite, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "octoforms", version, about = "Exact octonionic and Spin(9) computations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker threads for the Monte-Carlo checks [env: OCTOFORMS_WORKERS, default 4].
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..), global = true)]
    pub workers: Option<u16>,
    /// Include the slow checks (EVIII closure).
    #[arg(long, global = true)]
    pub deep: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Export a canonical form.
    Form(FormArgs),
    /// Characteristic coefficients of the Kähler-form matrix of a system.
    Charpoly(KindArgs),
    /// Maximal orthonormal vector fields on S^{m-1}.
    Fields(FieldsArgs),
    /// Hopf map, λ identity and inner products at a point of S¹⁵.
    Hopf(HopfArgs),
    /// A standard Clifford system, optionally extended.
    Clifford(CliffordArgs),
    /// Even Clifford structures, closures and the structure census.
    CliffordStructure(StructureArgs),
    /// Monte-Carlo integral of the line forms over 𝕆P¹.
    Berger(BergerArgs),
    /// Run the whole invariant suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Φ = τ₄/360.
    Spin9,
    Tau4,
    Cgm,
    /// Real part of Ψ₈.
    Psi8,
    Tau8,
}

#[derive(Args, Debug)]
pub struct FormArgs {
    #[arg(long, value_enum, default_value_t = Which::Spin9)]
    pub which: Which,
}

#[derive(Args, Debug)]
pub struct KindArgs {
    #[arg(long, default_value = "spin9")]
    pub kind: StandardKind,
}

#[derive(Args, Debug)]
pub struct FieldsArgs {
    #[arg(long)]
    pub m: usize,
    /// Check the three matrix conditions exactly.
    #[arg(long)]
    pub verify: bool,
    /// Random points for the pointwise check.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct HopfArgs {
    /// 16 coordinates (`p/q` each), or 32 integers read as numerator/denominator pairs.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Vec<String>,
}

#[derive(Args, Debug)]
pub struct CliffordArgs {
    #[arg(long, default_value = "spin9")]
    pub kind: StandardKind,
    /// Number of extension steps `C_m → C_{m+1}`.
    #[arg(long, default_value_t = 0)]
    pub extend: usize,
}

#[derive(Args, Debug)]
pub struct StructureArgs {
    #[arg(long, default_value = "EIII")]
    pub model: ModelName,
    /// Independence counts of the standard families.
    #[arg(long)]
    pub census: bool,
    /// Lie closure of the J_αβ.
    #[arg(long)]
    pub closure: bool,
    /// The EIII identity τ₂ = −3ω².
    #[arg(long)]
    pub tau2: bool,
}

#[derive(Args, Debug)]
pub struct BergerArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Monte-Carlo samples for the Berger check (0 skips it).
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

struct Ctx<'a> {
    format: Format,
    seed: u64,
    workers: usize,
    deep: bool,
    out: &'a mut dyn Write,
}

enum Failure {
    Usage(String),
    Runtime(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::OffSphere | Error::Unsupported(_) | Error::InvalidArgument(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Runtime(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = std::result::Result<bool, Failure>;

impl Ctx<'_> {
    fn json(&mut self, v: &impl Serialize) -> std::result::Result<(), Failure> {
        serde_json::to_writer_pretty(&mut *self.out, v)?;
        writeln!(self.out)?;
        Ok(())
    }

    fn no_csv(&self, what: &str) -> std::result::Result<(), Failure> {
        if self.format == Format::Csv {
            return Err(Failure::Usage(format!("{what} has no CSV output")));
        }
        Ok(())
    }
}

pub const WORKERS_ENV: &str = "OCTOFORMS_WORKERS";

/// The flag wins; otherwise the environment, otherwise 4.
fn resolve_workers(flag: Option<u16>) -> std::result::Result<usize, String> {
    if let Some(w) = flag {
        return Ok(w as usize);
    }
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(4),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w >= 1 => Ok(w),
            _ => Err(format!("{WORKERS_ENV} must be a positive integer, got '{v}'")),
        },
    }
}

/// Parses `args` (program name first), runs the command and writes to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(std::io::stderr(), "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let format = if cli.json { Format::Json } else { cli.format };
    let workers = match resolve_workers(cli.workers) {
        Ok(w) => w,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx { format, seed: cli.seed, workers, deep: cli.deep, out };
    let result = match &cli.command {
        Command::Form(a) => form(&mut ctx, a),
        Command::Charpoly(a) => charpoly(&mut ctx, a),
        Command::Fields(a) => fields(&mut ctx, a),
        Command::Hopf(a) => hopf(&mut ctx, a),
        Command::Clifford(a) => clifford(&mut ctx, a),
        Command::CliffordStructure(a) => structure(&mut ctx, a),
        Command::Berger(a) => berger(&mut ctx, a),
        Command::Verify(a) => verify(&mut ctx, a),
    };
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", <Cli as clap::CommandFactory>::command().render_usage());
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

fn emit_form(ctx: &mut Ctx, name: &str, f: &Multivector) -> Outcome {
    match ctx.format {
        Format::Csv => write!(ctx.out, "{}", f.to_csv())?,
        Format::Json => ctx.json(&json!({ "name": name, "form": f.to_json() }))?,
        Format::Text => {
            writeln!(ctx.out, "{name}: {} monomials on R^{}, grade {:?}", f.len(), f.n(), f.grade())?;
            for (c, count) in f.coeff_histogram() {
                writeln!(ctx.out, "  coefficient {c:>4}: {count}")?;
            }
            writeln!(ctx.out, "  {f}")?;
        }
    }
    Ok(true)
}

fn form(ctx: &mut Ctx, a: &FormArgs) -> Outcome {
    match a.which {
        Which::Spin9 => emit_form(ctx, "Phi", spin9_form()),
        Which::Tau4 => emit_form(ctx, "tau4", spin9_tau4()),
        Which::Cgm => emit_form(ctx, "Omega_CGM", &cgm_form()?),
        Which::Psi8 => emit_form(ctx, "Re Psi8", &kotrbaty_psi8()?.real()),
        Which::Tau8 => emit_form(ctx, "tau8", &spin9_charpoly()[7]),
    }
}

fn charpoly(ctx: &mut Ctx, a: &KindArgs) -> Outcome {
    ctx.no_csv("charpoly")?;
    let owned;
    let taus: &[Multivector] = if a.kind == StandardKind::Spin9 {
        spin9_charpoly()
    } else {
        owned = charpoly_coeffs(&kahler_matrix(&CliffordSystem::standard(a.kind))?)?;
        &owned
    };
    if ctx.format == Format::Json {
        let rows: Vec<_> = taus
            .iter()
            .enumerate()
            .map(|(j, t)| json!({ "j": j + 1, "grade": 2 * (j + 1), "terms": t.len(), "gcd": t.integer_gcd(), "form": t.to_json() }))
            .collect();
        ctx.json(&json!({ "kind": a.kind, "tau": rows }))?;
    } else {
        writeln!(ctx.out, "{}: characteristic coefficients of the {}x{} matrix of Kahler forms", a.kind, taus.len(), taus.len())?;
        for (j, t) in taus.iter().enumerate() {
            let gcd = t.integer_gcd().map_or("-".to_string(), |g| g.to_string());
            writeln!(ctx.out, "  tau{:<2} {:>3}-form  {:>5} terms  gcd {gcd}", j + 1, 2 * (j + 1), t.len())?;
        }
    }
    Ok(true)
}

fn fields(ctx: &mut Ctx, a: &FieldsArgs) -> Outcome {
    ctx.no_csv("fields")?;
    let v = build_fields(a.m)?;
    let expected = sigma(a.m)?;
    let report = a.verify.then(|| verify_system(&v, a.samples, ctx.seed));
    let ok = v.len() == expected && report.as_ref().is_none_or(|r| r.passed());
    if ctx.format == Format::Json {
        let mats: Vec<_> = v.fields.iter().map(triplets).collect();
        ctx.json(&json!({
            "m": v.m,
            "sigma": expected,
            "count": v.len(),
            "labels": v.labels,
            "left_mult": v.left_mult,
            "fields": mats,
            "report": report,
        }))?;
    } else {
        writeln!(ctx.out, "S^{}: {} fields (sigma = {expected})", a.m - 1, v.len())?;
        for l in &v.labels {
            writeln!(ctx.out, "  {l}")?;
        }
        if let Some(r) = &report {
            writeln!(ctx.out, "{r}")?;
            for f in &r.failures {
                writeln!(ctx.out, "  {f:?}")?;
            }
        }
    }
    Ok(ok)
}

fn parse_point(words: &[String]) -> Result<Vec<Rational>> {
    use num_traits::Zero;
    let vals = words.iter().map(|w| w.trim().parse::<Rational>()).collect::<Result<Vec<_>>>()?;
    match vals.len() {
        16 => Ok(vals),
        32 => vals
            .chunks(2)
            .map(|p| {
                if p[1].is_zero() {
                    Err(Error::Parse("zero denominator".into()))
                } else {
                    Ok(&p[0] / &p[1])
                }
            })
            .collect(),
        n => Err(Error::Parse(format!("--point takes 16 rationals or 32 integers, got {n}"))),
    }
}

fn hopf(ctx: &mut Ctx, a: &HopfArgs) -> Outcome {
    use rand::SeedableRng;
    ctx.no_csv("hopf")?;
    let p = if a.point.is_empty() {
        random_sphere_point(&mut rand_chacha::ChaCha8Rng::seed_from_u64(ctx.seed))
    } else {
        SpherePoint16::from_coords(&parse_point(&a.point)?)?
    };
    let n = p.coords();
    let r = lambda_report(&p)?;
    // ⟨I_α N, N⟩ = λ_α
    let inner = inner_products(&p, &n)?;
    let consistent = inner == r.lambda;
    if ctx.format == Format::Json {
        ctx.json(&json!({
            "point": n,
            "lambda": r.lambda,
            "norm2": r.norm2,
            "reconstructs": r.reconstructs,
            "orthonormal": r.orthonormal,
            "inner_products": inner,
        }))?;
    } else {
        let fmt = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        writeln!(ctx.out, "N      = ({})", fmt(&n))?;
        writeln!(ctx.out, "lambda = ({})", fmt(&r.lambda))?;
        writeln!(ctx.out, "<I_a N, N> = ({})", fmt(&inner))?;
        writeln!(ctx.out, "sum lambda^2 = {}, N = sum lambda_a I_a N: {}, I_a N orthonormal: {}", r.norm2, r.reconstructs, r.orthonormal)?;
    }
    Ok(r.passed() && consistent)
}

fn clifford(ctx: &mut Ctx, a: &CliffordArgs) -> Outcome {
    ctx.no_csv("clifford")?;
    let mut c = CliffordSystem::standard(a.kind);
    for _ in 0..a.extend {
        c = c.extend()?;
    }
    let report = c.verify();
    let trace = c.trace_invariant()?;
    let d = delta(c.m())?;
    if ctx.format == Format::Json {
        let mats: Vec<_> = c.mats().iter().map(matrix_rows).collect();
        ctx.json(&json!({
            "kind": a.kind,
            "extend": a.extend,
            "n": c.n(),
            "m": c.m(),
            "delta": d.to_string(),
            "trace_invariant": trace,
            "report": report,
            "matrices": mats,
        }))?;
    } else {
        writeln!(ctx.out, "C_{} on R^{} (delta({}) = {d})", c.m(), c.n(), c.m())?;
        writeln!(
            ctx.out,
            "symmetric {}, involutions {}, anticommuting {}",
            report.symmetric, report.involutions, report.anticommuting
        )?;
        writeln!(ctx.out, "tr(P_0 ... P_m) = {trace}")?;
        for f in &report.failures {
            writeln!(ctx.out, "  {f}")?;
        }
    }
    Ok(report.passed())
}

fn structure(ctx: &mut Ctx, a: &StructureArgs) -> Outcome {
    ctx.no_csv("clifford-structure")?;
    if a.model == ModelName::EVIII && a.closure && !ctx.deep {
        return Err(Failure::Usage("the EVIII closure needs --deep".into()));
    }
    let model = build_model(a.model);
    let check = model.check();
    let mut ok = check.passed();
    let mut doc = json!({ "model": a.model, "ambient_dim": model.ambient_dim, "rank": model.rank(), "labels": model.labels, "check": check });
    let mut text = vec![format!(
        "{}: rank {} on R^{}; orthonormal {}, squares {}, {} J_ab skew complex structures: {}",
        a.model,
        model.rank(),
        model.ambient_dim,
        check.orthonormal,
        check.squares_ok,
        check.lambda2_count,
        check.lambda2_complex
    )];
    if a.closure {
        let dim = model.closure_dim()?;
        doc["closure_dim"] = json!(dim);
        text.push(format!("Lie closure of the J_ab: {dim}"));
        if a.model == ModelName::EIII {
            let (from_j9, spin9) = eiii_closures()?;
            doc["closure_from_j_a9"] = json!(from_j9);
            doc["spin9_closure"] = json!(spin9);
            text.push(format!("closure of J_a9: {from_j9}, spin9 part: {spin9}"));
            ok &= dim == 45 && from_j9 == 45 && spin9 == 36;
        }
    }
    if a.tau2 {
        if a.model != ModelName::EIII {
            return Err(Failure::Usage("--tau2 applies to EIII only".into()));
        }
        let t = eiii_tau2()?;
        ok &= t.identity_holds() && t.tau4_nonzero();
        doc["tau2"] = json!({
            "identity_holds": t.identity_holds(),
            "tau2_terms": t.tau2.len(),
            "tau4_samples": t.tau4_samples,
        });
        text.push(format!("tau2 + 3 omega^2 = 0: {} ({} terms in tau2)", t.identity_holds(), t.tau2.len()));
        for (w, c) in &t.tau4_samples {
            text.push(format!("tau4 on e^{w:?}: {c}"));
        }
    }
    if a.census {
        let census = structure_census()?;
        ok &= census.passed();
        doc["census"] = json!(census);
        text.push(census.to_string().trim_end().to_string());
    }
    if ctx.format == Format::Json {
        ctx.json(&doc)?;
    } else {
        for line in text {
            writeln!(ctx.out, "{line}")?;
        }
    }
    Ok(ok)
}

fn fit_text(f: &FitReport) -> String {
    format!(
        "samples {}\nseed {}\nc {}\nexpected constant {}\ncosine {}\nresidual rms {}\nzero slots {}\nzero block S {}\nnull mean {}\nnull sd {}\nz {}\nper-slot 3-sigma exceedances {}\nmax |z| {}\n",
        f.samples,
        f.seed,
        sig17(f.c),
        sig17(f.expected_constant),
        sig17(f.cosine),
        sig17(f.residual_rms),
        f.zero_slots,
        sig17(f.zero_block_ss),
        sig17(f.zero_block_expected),
        sig17(f.zero_block_sd),
        sig17(f.zero_block_z),
        f.exceedances,
        sig17(f.max_abs_z),
    )
}

fn berger(ctx: &mut Ctx, a: &BergerArgs) -> Outcome {
    let (mean, fit): (SampledForm, FitReport) = berger_mc(a.samples, ctx.seed, ctx.workers)?;
    match ctx.format {
        Format::Csv => write!(ctx.out, "{}", mean.to_csv())?,
        // A struct rather than `json!`, which would re-render the floats.
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                fit: &'a FitReport,
                mean: &'a SampledForm,
            }
            ctx.json(&Doc { fit: &fit, mean: &mean })?
        }
        Format::Text => write!(ctx.out, "{}", fit_text(&fit))?,
    }
    Ok(fit.cosine >= 0.999 && fit.zero_pattern_ok())
}

fn verify(ctx: &mut Ctx, a: &VerifyArgs) -> Outcome {
    ctx.no_csv("verify")?;
    let cfg = VerifyConfig { seed: ctx.seed, workers: ctx.workers, berger_samples: a.samples, deep: ctx.deep };
    let summary = run_suite(&cfg);
    for c in &summary.checks {
        eprintln!("{:<22} {:.2} s", c.name, c.seconds);
    }
    if ctx.format == Format::Json {
        ctx.json(&summary)?;
    } else {
        writeln!(ctx.out, "{summary}")?;
    }
    Ok(summary.passed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("octoforms").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn spin9_csv_has_702_rows() {
        let (code, out) = run_capture(&["form", "--which", "spin9", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 703);
        assert_eq!(out.lines().next(), Some("blade;coeff"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["form", "--bogus"]).0, 2);
        assert_eq!(run_capture(&["nope"]).0, 2);
        assert_eq!(run_capture(&["hopf", "--point", "1,2"]).0, 2);
        assert_eq!(run_capture(&["hopf", "--format", "csv"]).0, 2);
        assert_eq!(run_capture(&["clifford-structure", "--model", "EVIII", "--closure"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn off_sphere_point_is_rejected() {
        let p: Vec<String> = (0..16).map(|i| if i < 2 { "1".to_string() } else { "0".to_string() }).collect();
        assert_eq!(run_capture(&["hopf", "--point", &p.join(",")]).0, 2);
    }

    #[test]
    fn hopf_point_pairs() {
        // (3/5, 0, …, 0 | 0, …, 4/5) as numerator/denominator pairs
        let mut w = vec!["0".to_string(); 32];
        for k in 0..16 {
            w[2 * k + 1] = "1".into();
        }
        w[0] = "3".into();
        w[1] = "5".into();
        w[30] = "4".into();
        w[31] = "5".into();
        let (code, out) = run_capture(&["hopf", "--json", "--point", &w.join(",")]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["norm2"], "1");
        assert_eq!(v["lambda"][8], "-7/25");
    }

    #[test]
    fn fields_json_uses_triplets() {
        let (code, out) = run_capture(&["fields", "--m", "16", "--verify", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"], 8);
        assert_eq!(v["fields"][0]["entries"][0].as_array().unwrap().len(), 3);
    }

    #[test]
    fn clifford_json_is_rational_strings() {
        let (code, out) = run_capture(&["clifford", "--kind", "spin9", "--extend", "1", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["n"], 32);
        assert!(v["matrices"][0][0][0].is_string());
    }
}

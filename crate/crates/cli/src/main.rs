//! `opdc`: coefficient tables, transform pipelines and verification suites.
//!
//! Exit status: 0 on success, 1 when a verification suite finds a
//! violation, 2 on usage errors and parameter poles.

mod output;
mod suites;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use opdc_core::cmv::{build_pencil_matrix, pencil_mirror, pencil_recurrence};
use opdc_core::dressing::{chain_step, verify_identities};
use opdc_core::families::{
    bi_coeffs, bi_reflection, bi_seed, cbi_coeffs, rw_coeffs, BIParameters, RWParameters, ReflectionMode,
};
use opdc_core::linalg::tridiagonal_eigenvalues;
use opdc_core::opuc::{classify, szego_table};
use opdc_core::sampling::{Sampler, DEFAULT_BOUND};
use opdc_core::transforms::{
    chihara_polynomial_check, chihara_split, christoffel, geronimus_reconstruct, rescale, sdg_step, AcForm,
    ThreeTermRecurrence,
};
use opdc_core::{Error, Rational, ReflectionSequence};

use output::{Format, Report, Table};

#[derive(Parser, Debug)]
#[command(name = "opdc", version, about = "Reflection parameters, pencils, spectral transforms and Bannai-Ito / Racah-Wilson families")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    output: Format,

    /// Seed for randomized suites and default sequences; OPDC_SEED overrides it
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recurrence coefficients of a closed-form family
    Families {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        bi: BiArgs,
        #[command(flatten)]
        rw: RwArgs,
        /// Number of coefficients
        #[arg(short = 'n', default_value_t = 8)]
        n: usize,
        /// Also emit the reflection parameters and seeds (bi, cbi only)
        #[arg(long)]
        reflections: bool,
    },
    /// Szegő polynomials and classification of reflection parameters
    Szego {
        #[arg(long, allow_hyphen_values = true)]
        a: RatList,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Three-term recurrence and matrix of the pencil L + λM - xI
    Pencil {
        #[arg(long, allow_hyphen_values = true)]
        a: RatList,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Rational,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        x: Rational,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Spectral transformations of recurrences
    Transform {
        #[command(subcommand)]
        kind: Transform,
    },
    /// Verification suites
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// One step of a 1-periodic dressing chain for a fixed λ̃
    Chain {
        #[arg(long, allow_hyphen_values = true)]
        lambda: FloatArg,
        #[arg(long, allow_hyphen_values = true)]
        x: FloatArg,
        #[arg(long = "lambda-t", allow_hyphen_values = true)]
        lambda_t: FloatArg,
        #[arg(short = 'n', default_value_t = 16)]
        n: usize,
        /// Reflection parameters; seeded values in (-1, 1) when omitted
        #[arg(long, allow_hyphen_values = true)]
        a: Option<RatList>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Bi,
    Cbi,
    Rw,
}

#[derive(Args, Debug, Clone)]
struct BiArgs {
    #[arg(long, allow_hyphen_values = true)]
    rho1: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    rho2: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    r1: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    r2: Option<Rational>,
}

impl BiArgs {
    fn get(&self) -> Result<BIParameters, String> {
        match (&self.rho1, &self.rho2, &self.r1, &self.r2) {
            (Some(a), Some(b), Some(c), Some(d)) => Ok(BIParameters::new(a.clone(), b.clone(), c.clone(), d.clone())),
            _ => Err("need --rho1, --rho2, --r1 and --r2".into()),
        }
    }

    fn any(&self) -> bool {
        self.rho1.is_some() || self.rho2.is_some() || self.r1.is_some() || self.r2.is_some()
    }
}

#[derive(Args, Debug, Clone)]
struct RwArgs {
    #[arg(long, allow_hyphen_values = true)]
    beta1: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    beta2: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    beta3: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    beta4: Option<Rational>,
}

impl RwArgs {
    fn get(&self) -> Result<RWParameters, String> {
        match (&self.beta1, &self.beta2, &self.beta3, &self.beta4) {
            (Some(a), Some(b), Some(c), Some(d)) => Ok(RWParameters::new(a.clone(), b.clone(), c.clone(), d.clone())),
            _ => Err("need --beta1, --beta2, --beta3 and --beta4".into()),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Transform {
    /// Christoffel transform of (b, u) at θ, with the Geronimus roundtrip
    Christoffel {
        #[arg(long, allow_hyphen_values = true)]
        b: RatList,
        #[arg(long, allow_hyphen_values = true)]
        u: RatList,
        #[arg(long, allow_hyphen_values = true)]
        theta: Rational,
    },
    /// Christoffel transform of the pencil recurrence at θ = λ + 1
    Sdg {
        #[arg(long, allow_hyphen_values = true)]
        a: RatList,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Rational,
        #[arg(short = 'n')]
        n: usize,
    },
    /// SDG step at λλ₀ followed by the rescaling with s² = λ
    Rescale {
        #[arg(long, allow_hyphen_values = true)]
        a: RatList,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Rational,
        #[arg(long = "sqrt-lambda", allow_hyphen_values = true)]
        sqrt_lambda: Rational,
        #[arg(long, allow_hyphen_values = true)]
        lambda0: Rational,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Quadratic split of AC data; with --alpha and --c2 also the polynomial check
    Chihara {
        #[arg(long = "A", allow_hyphen_values = true)]
        a: RatList,
        #[arg(long = "C", allow_hyphen_values = true)]
        c: RatList,
        #[arg(long, allow_hyphen_values = true)]
        chi: Rational,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, allow_hyphen_values = true, requires = "c2")]
        alpha: Option<Rational>,
        #[arg(long, allow_hyphen_values = true, requires = "alpha")]
        c2: Option<Rational>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct SuiteArgs {
    /// Number of random draws
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Bound on numerators and denominators of drawn fractions
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: i64,
    #[arg(short = 'n', default_value_t = 50)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Floating-point pencil identities
    Identities {
        #[arg(long, allow_hyphen_values = true)]
        a: RatList,
        #[arg(long, allow_hyphen_values = true)]
        lambda: FloatArg,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        lambda0: FloatArg,
        #[arg(short = 'n', default_value_t = 64)]
        n: usize,
        /// Bannai-Ito parameters for the spectral grid diagnostic
        #[command(flatten)]
        bi: BiArgs,
    },
    /// Exact Bannai-Ito chain: reflections, seeds, kernel, SDG image, identification
    BiChain(SuiteArgs),
    /// Exact Racah-Wilson bridge
    RwBridge(SuiteArgs),
    /// Cholesky and LU Darboux transformations
    Darboux(SuiteArgs),
    /// Quadratic relations between L and M, and between random Jacobi matrices
    QuadAlgebra(SuiteArgs),
}

/// Comma-separated fractions.
#[derive(Clone, Debug)]
struct RatList(Vec<Rational>);

impl FromStr for RatList {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Rational::parse_list(s).map(RatList)
    }
}

impl RatList {
    /// The list repeated periodically to length `n`.
    fn periodic(&self, n: usize) -> Result<ReflectionSequence, String> {
        if self.0.is_empty() {
            return Err("empty coefficient list".into());
        }
        let a = (0..n).map(|k| self.0[k % self.0.len()].clone()).collect();
        Ok(ReflectionSequence::explicit(a))
    }
}

/// A decimal or a fraction `p/q`.
#[derive(Clone, Copy, Debug)]
struct FloatArg(f64);

impl FromStr for FloatArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v = if s.contains('/') {
            s.parse::<Rational>().map_err(|e| e.to_string())?.to_f64()
        } else {
            s.parse::<f64>().map_err(|e| format!("cannot parse {s:?} as a number: {e}"))?
        };
        if v.is_finite() { Ok(FloatArg(v)) } else { Err(format!("{s:?} is not finite")) }
    }
}

/// What a command produced.
enum Outcome {
    Done(Report),
    Violation(Report),
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

fn rat_values(xs: &[Rational]) -> Value {
    json!(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn families(family: Family, bi: &BiArgs, rw: &RwArgs, n: usize, reflections: bool) -> Result<Report, Failure> {
    let mut obj = Map::new();
    let mut table;
    match family {
        Family::Bi | Family::Cbi => {
            let p = bi.get()?;
            obj.insert("family".into(), json!(if matches!(family, Family::Bi) { "bannai-ito" } else { "complementary-bannai-ito" }));
            obj.insert("params".into(), serde_json::to_value(&p).expect("serializable"));
            obj.insert("n".into(), json!(n));
            if let Family::Bi = family {
                let c = bi_coeffs(&p, n)?;
                for (name, xs) in [("A", &c.a), ("C", &c.c), ("b", &c.rec.b), ("u", &c.rec.u)] {
                    for (k, x) in xs.iter().enumerate() {
                        obj.insert(format!("{name}{k}"), json!(x.to_string()));
                    }
                }
                table = Table::new(&["k", "A", "C", "b", "u"]);
                for k in 0..n {
                    table.push_rationals(k, &[&c.a[k], &c.c[k], &c.rec.b[k], &c.rec.u[k]]);
                }
            } else {
                let c = cbi_coeffs(&p, n)?;
                for (name, xs) in [("b", &c.rec.b), ("v", &c.v)] {
                    for (k, x) in xs.iter().enumerate() {
                        obj.insert(format!("{name}{k}"), json!(x.to_string()));
                    }
                }
                table = Table::new(&["k", "b", "v"]);
                for k in 0..n {
                    table.push_rationals(k, &[&c.rec.b[k], &c.v[k]]);
                }
            }
            if reflections {
                let seed = bi_seed(&p)?;
                let a = bi_reflection(&p, n, ReflectionMode::ClosedForm)?;
                for (k, x) in a.iter().enumerate() {
                    obj.insert(format!("a{k}"), json!(x.to_string()));
                }
                obj.insert("seed".into(), serde_json::to_value(&seed).expect("serializable"));
            }
        }
        Family::Rw => {
            if reflections {
                return Err(Failure::Usage("--reflections is available for bi and cbi only".into()));
            }
            let p = rw.get()?;
            let c = rw_coeffs(&p, n)?;
            obj.insert("family".into(), json!("racah-wilson"));
            obj.insert("params".into(), serde_json::to_value(&p).expect("serializable"));
            obj.insert("n".into(), json!(n));
            for (name, xs) in [("A", &c.a), ("C", &c.c), ("b", &c.rec.b), ("u", &c.rec.u)] {
                for (k, x) in xs.iter().enumerate() {
                    obj.insert(format!("{name}{k}"), json!(x.to_string()));
                }
            }
            table = Table::new(&["k", "A", "C", "b", "u"]);
            for k in 0..n {
                table.push_rationals(k, &[&c.a[k], &c.c[k], &c.rec.b[k], &c.rec.u[k]]);
            }
        }
    }
    Ok(Report::new(Value::Object(obj), table))
}

fn szego(a: &RatList, n: usize) -> Result<Report, Failure> {
    let seq = a.periodic(n)?;
    let table_rows = szego_table(&seq, n)?;
    let class = classify(&seq, n)?;
    let last = table_rows.last().expect("k = 0 is always present");
    let mut table = Table::new(&["k", "j", "phi", "phi_star"]);
    for pair in &table_rows {
        for j in 0..=pair.n {
            table.push_rationals_pair(pair.n, j, &pair.phi.coeff(j), &pair.phi_star.coeff(j));
        }
    }
    let json = json!({
        "a": rat_values(&seq.a),
        "n": n,
        "classification": class,
        "phi": last.phi,
        "phi_star": last.phi_star,
        "phi_text": last.phi.to_string(),
        "table": table_rows,
    });
    Ok(Report::new(json, table))
}

fn pencil(a: &RatList, lambda: &Rational, x: &Rational, n: usize) -> Result<Report, Failure> {
    let seq = a.periodic(n)?;
    let rec = pencil_recurrence(&seq, lambda, n)?;
    let mirror = pencil_mirror(&seq, lambda, x, n)?;
    let matrix = build_pencil_matrix(&seq, lambda.to_f64(), x.to_f64(), n)?;
    let mut table = Table::new(&[]);
    let spectrum = matrix.symmetrized().map(|m| {
        let mut ev = tridiagonal_eigenvalues(&m);
        ev.sort_by(f64::total_cmp);
        ev
    });
    if let Some(ev) = &spectrum {
        for e in ev {
            table.push_floats(&[*e]);
        }
    }
    let json = json!({
        "a": rat_values(&seq.a),
        "lambda": lambda.to_string(),
        "x": x.to_string(),
        "b": rat_values(&rec.b),
        "u": rat_values(&rec.u),
        "exact": mirror,
        "matrix": matrix,
        "spectrum": spectrum,
    });
    Ok(Report::new(json, table))
}

fn recurrence_table(rec: &ThreeTermRecurrence) -> Table {
    let mut t = Table::new(&["k", "b", "u"]);
    for k in 0..rec.len() {
        t.push_rationals(k, &[&rec.b[k], &rec.u[k]]);
    }
    t
}

fn transform(kind: &Transform) -> Result<Report, Failure> {
    match kind {
        Transform::Christoffel { b, u, theta } => {
            if b.0.len() != u.0.len() {
                return Err(Failure::Usage("--b and --u need the same length".into()));
            }
            let rec = ThreeTermRecurrence::new(b.0.clone(), u.0.clone());
            let r = christoffel(&rec, theta)?;
            let back = geronimus_reconstruct(&r)?;
            let table = recurrence_table(&r.transformed);
            let json = json!({ "christoffel": r, "roundtrip": back == rec });
            Ok(Report::new(json, table))
        }
        Transform::Sdg { a, lambda, n } => {
            let seq = a.periodic(*n)?;
            let r = sdg_step(&seq, lambda, *n)?;
            let table = recurrence_table(&r.recurrence);
            Ok(Report::new(serde_json::to_value(&r).expect("serializable"), table))
        }
        Transform::Rescale {
            a,
            lambda,
            sqrt_lambda,
            lambda0,
            n,
        } => {
            let seq = a.periodic(*n)?;
            let sdg = sdg_step(&seq, &(lambda * lambda0), *n)?;
            let r = rescale(&sdg, lambda, sqrt_lambda, lambda0)?;
            let table = recurrence_table(&r.recurrence);
            Ok(Report::new(serde_json::to_value(&r).expect("serializable"), table))
        }
        Transform::Chihara {
            a,
            c,
            chi,
            n,
            alpha,
            c2,
            depth,
        } => {
            let split = chihara_split(&a.0, &c.0, chi, *n)?;
            let check = match (alpha, c2) {
                (Some(alpha), Some(c2)) => {
                    let theta = &(&chi.square() + alpha) - c2;
                    let p = ThreeTermRecurrence::from_ac(AcForm {
                        a: a.0.clone(),
                        c: c.0.clone(),
                        theta: theta.clone(),
                    });
                    let k = christoffel(&p, &theta)?;
                    Some(chihara_polynomial_check(&p, &k.transformed, alpha, c2, chi, *depth)?)
                }
                _ => None,
            };
            let table = recurrence_table(&split);
            Ok(Report::new(json!({ "recurrence": split, "check": check }), table))
        }
    }
}

fn identities(a: &RatList, lambda: f64, lambda0: f64, n: usize, bi: &BiArgs) -> Result<Outcome, Failure> {
    let size = n + n % 2;
    let seq = a.periodic(size)?;
    let params = if bi.any() { Some(bi.get()?) } else { None };
    let rep = verify_identities(&seq, lambda, lambda0, n, params.as_ref())?;
    let mut table = Table::new(&["identity", "n", "interior", "max_residual", "tolerance", "pass", "asserted"]);
    for c in &rep.checks {
        table.push_raw(vec![
            c.identity.clone(),
            c.n.to_string(),
            c.interior.to_string(),
            output::float(c.max_residual),
            output::float(c.tolerance),
            c.pass.to_string(),
            c.asserted.to_string(),
        ]);
    }
    let pass = rep.pass;
    let report = Report::new(serde_json::to_value(&rep).expect("serializable"), table);
    Ok(if pass { Outcome::Done(report) } else { Outcome::Violation(report) })
}

fn chain(lambda: f64, x: f64, lambda_t: f64, n: usize, a: Option<&RatList>, seed: u64) -> Result<Report, Failure> {
    let size = n + n % 2;
    let seq = match a {
        Some(list) => list.periodic(size)?,
        None => {
            let mut s = Sampler::new(seed, DEFAULT_BOUND);
            ReflectionSequence::explicit((0..size).map(|_| suites::classical_rational(&mut s)).collect())
        }
    };
    let rep = chain_step(&seq, lambda, x, lambda_t, n)?;
    let mut table = Table::new(&["x_t", "r0", "r1", "r2", "s0", "s1", "s2", "residual", "trivial"]);
    for s in &rep.solutions {
        let mut row: Vec<String> = [s.x_t, s.r0, s.r1, s.r2, s.s0, s.s1, s.s2, s.residual]
            .iter()
            .map(|v| output::float(*v))
            .collect();
        row.push(s.trivial_flag.to_string());
        table.push_raw(row);
    }
    let json = json!({ "a": rat_values(&seq.a), "report": rep });
    Ok(Report::new(json, table))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Families {
            family,
            bi,
            rw,
            n,
            reflections,
        } => families(*family, bi, rw, *n, *reflections).map(Outcome::Done),
        Command::Szego { a, n } => szego(a, *n).map(Outcome::Done),
        Command::Pencil { a, lambda, x, n } => pencil(a, lambda, x, *n).map(Outcome::Done),
        Command::Transform { kind } => transform(kind).map(Outcome::Done),
        Command::Verify { suite } => match suite {
            Suite::Identities {
                a,
                lambda,
                lambda0,
                n,
                bi,
            } => identities(a, lambda.0, lambda0.0, *n, bi),
            Suite::BiChain(s) => Ok(suites::bi_chain(cli.seed, s.trials, s.bound, s.n)),
            Suite::RwBridge(s) => Ok(suites::rw_bridge(cli.seed, s.trials, s.bound, s.n)),
            Suite::Darboux(s) => Ok(suites::darboux(cli.seed, s.trials, s.n)),
            Suite::QuadAlgebra(s) => Ok(suites::quad_algebra(cli.seed, s.trials, s.n)),
        },
        Command::Chain {
            lambda,
            x,
            lambda_t,
            n,
            a,
        } => chain(lambda.0, x.0, lambda_t.0, *n, a.as_ref(), cli.seed).map(Outcome::Done),
    }
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Ok(v) = std::env::var("OPDC_SEED") {
        match v.parse() {
            Ok(seed) => cli.seed = seed,
            Err(_) => {
                eprintln!("error: OPDC_SEED={v:?} is not a 64-bit unsigned integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok(Outcome::Done(r)) => {
            print!("{}", r.render(cli.output));
            ExitCode::SUCCESS
        }
        Ok(Outcome::Violation(r)) => {
            print!("{}", r.render(cli.output));
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

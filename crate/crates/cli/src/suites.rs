//! Randomized verification suites behind `opdc verify`.
//!
//! Each suite draws parameters from a seeded [`Sampler`], redraws on poles
//! (at most [`MAX_ATTEMPTS`] times in total) and stops at the first
//! violation, reporting the exact inputs that produced it.

use serde::Serialize;
use serde_json::{json, Value};

use opdc_core::cmv::build_lm;
use opdc_core::dressing::{cholesky_darboux, lu_darboux, quad_algebra_solve, JacobiMatrix};
use opdc_core::families::{
    beta_map, bi_coeffs, bi_identify_q, bi_reflection, bi_seed, cbi_coeffs, rw_coeffs, rw_reflection,
    ReflectionMode,
};
use opdc_core::linalg::{max_abs_diff, symmetric_eigenpairs, tridiagonal_eigenvalues};
use opdc_core::sampling::{Sampler, MAX_ATTEMPTS};
use opdc_core::transforms::{
    chihara_polynomial_check, chihara_split, christoffel, rescale, sdg_step, AcForm, ThreeTermRecurrence,
};
use opdc_core::{Error, Rational, ReflectionSequence};

use crate::output::{float, Report, Table};
use crate::Outcome;

const TOL_ISOSPECTRAL: f64 = 1e-10;
const TOL_INTERTWINING: f64 = 1e-9;
const TOL_QUAD_RELATION: f64 = 1e-10;
const TOL_QUAD_EMPTY: f64 = 1e-6;
const CHIHARA_DEPTH: usize = 6;

/// A rational in (-1, 1) with denominator below 40.
pub fn classical_rational(s: &mut Sampler) -> Rational {
    let den = s.f64_in(2.0, 40.0) as i64;
    let num = s.f64_in(-(den as f64) + 1.0, den as f64 - 1.0) as i64;
    Rational::new(num, den).expect("nonzero denominator")
}

fn is_pole(e: &Error) -> bool {
    matches!(
        e,
        Error::PoleInParameters { .. } | Error::DegenerateRecursion { .. } | Error::ZeroAtTheta { .. }
    )
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: usize,
}

#[derive(Serialize)]
struct Counterexample {
    trial: usize,
    check: String,
    inputs: Value,
    detail: String,
}

#[derive(Serialize)]
struct SuiteReport {
    suite: &'static str,
    seed: u64,
    trials: usize,
    bound: i64,
    n: usize,
    redrawn: usize,
    checks: Vec<Check>,
    counterexample: Option<Counterexample>,
    pass: bool,
}

impl SuiteReport {
    fn new(suite: &'static str, seed: u64, trials: usize, bound: i64, n: usize, names: &[&'static str]) -> Self {
        SuiteReport {
            suite,
            seed,
            trials,
            bound,
            n,
            redrawn: 0,
            checks: names.iter().map(|&name| Check { name, passed: 0 }).collect(),
            counterexample: None,
            pass: true,
        }
    }

    fn fail(&mut self, trial: usize, check: impl Into<String>, inputs: Value, detail: impl Into<String>) {
        self.pass = false;
        self.counterexample = Some(Counterexample {
            trial,
            check: check.into(),
            inputs,
            detail: detail.into(),
        });
    }

    fn finish(self) -> Outcome {
        let mut table = Table::new(&["suite", "check", "passed", "trials"]);
        for c in &self.checks {
            table.push_raw(vec![self.suite.into(), c.name.into(), c.passed.to_string(), self.trials.to_string()]);
        }
        if let Some(c) = &self.counterexample {
            table.push_raw(vec![
                self.suite.into(),
                format!("FAILED {}", c.check),
                c.trial.to_string(),
                csv_quote(&format!("{} {}", c.inputs, c.detail)),
            ]);
        }
        let pass = self.pass;
        let report = Report::new(serde_json::to_value(&self).expect("serializable"), table);
        if pass {
            Outcome::Done(report)
        } else {
            Outcome::Violation(report)
        }
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Runs `trials` draws. `compute` does all the exact work for one draw; a
/// pole-type error leads to a redraw. `checks` returns, per named check,
/// `Err(detail)` on a violation.
fn run_exact<T: Serialize, U>(
    report: &mut SuiteReport,
    sampler: &mut Sampler,
    mut draw: impl FnMut(&mut Sampler) -> T,
    mut compute: impl FnMut(&T) -> Result<U, Error>,
    mut checks: impl FnMut(&T, &U) -> Vec<Result<(), String>>,
) {
    let mut trial = 0;
    while trial < report.trials {
        let t = draw(sampler);
        let inputs = serde_json::to_value(&t).expect("serializable");
        let u = match compute(&t) {
            Ok(u) => u,
            Err(e) if is_pole(&e) => {
                report.redrawn += 1;
                if report.redrawn > MAX_ATTEMPTS {
                    report.fail(trial, "sampling", inputs, format!("more than {MAX_ATTEMPTS} pole draws"));
                    return;
                }
                continue;
            }
            Err(e) => {
                report.fail(trial, "evaluation", inputs, e.to_string());
                return;
            }
        };
        for (i, r) in checks(&t, &u).into_iter().enumerate() {
            match r {
                Ok(()) => report.checks[i].passed += 1,
                Err(m) => {
                    let name = report.checks[i].name;
                    report.fail(trial, name, inputs, m);
                    return;
                }
            }
        }
        trial += 1;
    }
}

fn first_difference(x: &[Rational], y: &[Rational], what: &str) -> Result<(), String> {
    if x.len() != y.len() {
        return Err(format!("{what}: lengths {} and {}", x.len(), y.len()));
    }
    match x.iter().zip(y).position(|(a, b)| a != b) {
        None => Ok(()),
        Some(k) => Err(format!("{what}_{k}: {} vs {}", x[k], y[k])),
    }
}

fn same_recurrence(x: &ThreeTermRecurrence, y: &ThreeTermRecurrence, n: usize) -> Result<(), String> {
    first_difference(&x.b[..n], &y.b[..n], "b")?;
    first_difference(&x.u[..n], &y.u[..n], "u")
}

const BI_CHECKS: [&str; 5] = [
    "reflection-closed-form-vs-recursion",
    "kernel-at-rho1-is-complementary",
    "sdg-rescale-is-complementary",
    "seed-chi-equals-rho2",
    "pencil-identification",
];

pub fn bi_chain(seed: u64, trials: usize, bound: i64, n: usize) -> Outcome {
    let n = n.max(1);
    let mut report = SuiteReport::new("bi-chain", seed, trials, bound, n, &BI_CHECKS);
    let mut s = Sampler::new(seed, bound);
    run_exact(
        &mut report,
        &mut s,
        Sampler::bi_parameters,
        |p| {
            let closed = bi_reflection(p, n, ReflectionMode::ClosedForm)?;
            let recursive = bi_reflection(p, n, ReflectionMode::Recursive)?;
            let cbi = cbi_coeffs(p, n)?;
            let kernel = christoffel(&bi_coeffs(p, n + 1)?.rec, &p.rho1)?;
            let sd = bi_seed(p)?;
            let sdg = sdg_step(&ReflectionSequence::explicit(closed.clone()), &(&sd.lambda_bi * &sd.lambda0), n)?;
            let scaled = rescale(&sdg, &sd.lambda_bi, &sd.sqrt_lambda_bi, &sd.lambda0)?;
            let ident = bi_identify_q(p, n)?;
            Ok((closed, recursive, cbi, kernel, scaled, ident))
        },
        |p, (closed, recursive, cbi, kernel, scaled, ident)| {
            vec![
                first_difference(closed, recursive, "a"),
                same_recurrence(&kernel.transformed, &cbi.rec, n),
                same_recurrence(&scaled.recurrence, &cbi.rec, n),
                if scaled.chi == p.rho2 { Ok(()) } else { Err(format!("chi = {}", scaled.chi)) },
                if ident.pass { Ok(()) } else { Err("identification report did not pass".into()) },
            ]
        },
    );
    report.finish()
}

const RW_CHECKS: [&str; 4] = [
    "sigma-equals-g-plus-2",
    "complementary-from-wilson-split",
    "reflections-agree",
    "chihara-polynomials",
];

pub fn rw_bridge(seed: u64, trials: usize, bound: i64, n: usize) -> Outcome {
    let n = n.max(2);
    let mut report = SuiteReport::new("rw-bridge", seed, trials, bound, n, &RW_CHECKS);
    let mut s = Sampler::new(seed, bound);
    let zero = Rational::zero();
    run_exact(
        &mut report,
        &mut s,
        Sampler::bi_parameters,
        |p| {
            let b = beta_map(p);
            let rw = rw_coeffs(&b, n / 2 + 1)?;
            let split = chihara_split(&rw.a, &rw.c, &p.rho2, n)?;
            let cbi = cbi_coeffs(p, n)?;
            let ar = rw_reflection(&b, n)?;
            let ab = bi_reflection(p, n, ReflectionMode::ClosedForm)?;
            // In y = -x² the Wilson data is an AC-form at θ = β₁² = ρ₂².
            let depth = CHIHARA_DEPTH.min(n / 2);
            let wilson = rw_coeffs(&b, depth + 2)?;
            let theta = b.beta1.square();
            let flipped = ThreeTermRecurrence::from_ac(AcForm {
                a: wilson.a,
                c: wilson.c,
                theta: theta.clone(),
            });
            let kernel = christoffel(&flipped, &theta)?;
            let chihara = chihara_polynomial_check(&flipped, &kernel.transformed, &zero, &zero, &p.rho2, depth)?;
            Ok((b, split, cbi, ar, ab, chihara))
        },
        |p, (b, split, cbi, ar, ab, chihara)| {
            vec![
                if b.sigma() == &p.g() + &Rational::int(2) {
                    Ok(())
                } else {
                    Err(format!("sigma = {}, g = {}", b.sigma(), p.g()))
                },
                same_recurrence(split, &cbi.rec, n),
                first_difference(ar, ab, "a"),
                if chihara.pass { Ok(()) } else { Err(format!("first failure at {:?}", chihara.first_failure)) },
            ]
        },
    );
    report.finish()
}

fn random_pd_jacobi(s: &mut Sampler, n: usize) -> JacobiMatrix {
    let diag = (0..n).map(|_| s.f64_in(2.5, 4.0)).collect();
    let off = (0..n - 1).map(|_| s.f64_in(0.1, 1.0)).collect();
    JacobiMatrix::new(diag, off).expect("finite entries")
}

fn jacobi_inputs(j: &JacobiMatrix) -> Value {
    json!({
        "diag": j.diag.iter().map(|v| float(*v)).collect::<Vec<_>>(),
        "off": j.off.iter().map(|v| float(*v)).collect::<Vec<_>>(),
    })
}

const DARBOUX_CHECKS: [&str; 3] = ["cholesky-isospectral", "cholesky-intertwining", "lu-isospectral"];

pub fn darboux(seed: u64, trials: usize, n: usize) -> Outcome {
    let n = n.max(2);
    let mut report = SuiteReport::new("darboux", seed, trials, 0, n, &DARBOUX_CHECKS);
    let mut s = Sampler::new(seed, 1);
    for trial in 0..trials {
        let j = random_pd_jacobi(&mut s, n);
        let spectrum = j.eigenvalues();
        let theta = spectrum[0] - s.f64_in(0.5, 1.5);
        let outcome = (|| -> Result<Vec<Result<(), String>>, Error> {
            let (jt, l) = cholesky_darboux(&j)?;
            let spec = max_abs_diff(&spectrum, &jt.eigenvalues());
            let ld = l.to_dense();
            let jtd = jt.to_dense();
            let mut inter: f64 = 0.0;
            for (mu, f) in symmetric_eigenpairs(&j.to_dense()) {
                let g = ld.transpose() * f;
                inter = inter.max((&jtd * &g - &g * mu).amax() / g.amax());
            }
            let lu = lu_darboux(&j, theta)?;
            let lu_spec = lu
                .jt
                .symmetrized()
                .map(|m| max_abs_diff(&spectrum, &tridiagonal_eigenvalues(&m)));
            Ok(vec![
                if spec < TOL_ISOSPECTRAL { Ok(()) } else { Err(format!("spectra differ by {spec:e}")) },
                if inter < TOL_INTERTWINING { Ok(()) } else { Err(format!("intertwining residual {inter:e}")) },
                match lu_spec {
                    Some(d) if d < TOL_ISOSPECTRAL => Ok(()),
                    Some(d) => Err(format!("spectra differ by {d:e} at theta = {}", float(theta))),
                    None => Err("UL + theta I has a non-positive off-diagonal product".into()),
                },
            ])
        })();
        let mut inputs = jacobi_inputs(&j);
        inputs["theta"] = json!(float(theta));
        match outcome {
            Ok(results) => {
                for (i, r) in results.into_iter().enumerate() {
                    match r {
                        Ok(()) => report.checks[i].passed += 1,
                        Err(m) => {
                            let name = report.checks[i].name;
                            report.fail(trial, name, inputs, m);
                            return report.finish();
                        }
                    }
                }
            }
            Err(e) => {
                report.fail(trial, "evaluation", inputs, e.to_string());
                return report.finish();
            }
        }
    }
    report.finish()
}

const QUAD_CHECKS: [&str; 2] = ["pencil-pair-relations", "random-pair-no-relation"];

pub fn quad_algebra(seed: u64, trials: usize, n: usize) -> Outcome {
    let n = (n.max(8) + 1) & !1;
    let mut report = SuiteReport::new("quad-algebra", seed, trials, 0, n, &QUAD_CHECKS);
    let mut s = Sampler::new(seed, 1);
    let e1 = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0];
    let e2 = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0];
    for trial in 0..trials {
        let a: Vec<Rational> = (0..n).map(|_| classical_rational(&mut s)).collect();
        let ja = random_pd_jacobi(&mut s, n);
        let jb = random_pd_jacobi(&mut s, n);
        let outcome = (|| -> Result<Vec<Result<(), String>>, Error> {
            let (l, m) = build_lm(&ReflectionSequence::explicit(a.clone()), n)?;
            let pair = quad_algebra_solve(&l.entries, &m.entries)?;
            let rnd = quad_algebra_solve(&ja.to_dense(), &jb.to_dense())?;
            let worst = pair.solutions.iter().map(|x| x.residual).fold(0.0, f64::max);
            Ok(vec![
                if pair.contains(&e1, 1e-8) && pair.contains(&e2, 1e-8) && worst < TOL_QUAD_RELATION {
                    Ok(())
                } else {
                    Err(format!("{} relations, worst residual {worst:e}", pair.solutions.len()))
                },
                if rnd.solutions.is_empty() && rnd.singular_values[0] > TOL_QUAD_EMPTY {
                    Ok(())
                } else {
                    Err(format!("smallest singular value {:e}", rnd.singular_values[0]))
                },
            ])
        })();
        match outcome {
            Ok(results) => {
                for (i, r) in results.into_iter().enumerate() {
                    match r {
                        Ok(()) => report.checks[i].passed += 1,
                        Err(m) => {
                            let name = report.checks[i].name;
                            let inputs = if i == 0 {
                                json!({ "a": a })
                            } else {
                                json!({ "A": jacobi_inputs(&ja), "B": jacobi_inputs(&jb) })
                            };
                            report.fail(trial, name, inputs, m);
                            return report.finish();
                        }
                    }
                }
            }
            Err(e) => {
                report.fail(trial, "evaluation", json!({ "a": a }), e.to_string());
                return report.finish();
            }
        }
    }
    report.finish()
}

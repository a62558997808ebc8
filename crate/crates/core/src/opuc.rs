//! Reflection (Verblunsky) parameters and the Szegő recurrence for monic
//! orthogonal polynomials on the unit circle, restricted to real parameters.
//!
//! The convention `a_{-1} = -1` is built in: [`reflection_at`] returns `-1`
//! for index `-1`, and every recurrence that reaches back one step uses it.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{self, BIParameters, RWParameters, ReflectionMode};
use crate::polynomial::Polynomial;
use crate::rational::Rational;

/// Closed-form reflection-parameter families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum Generator {
    /// Parameters whose SDG image is the complementary Bannai-Ito family.
    BannaiIto(BIParameters),
    /// Parameters whose pencil polynomials are the Bannai-Ito polynomials.
    BannaiItoQ(BIParameters),
    /// Delsarte-Genin preimages of the symmetrized Racah-Wilson polynomials.
    RacahWilson(RWParameters),
}

impl Generator {
    pub fn reflections(&self, n: usize) -> Result<Vec<Rational>> {
        match self {
            Generator::BannaiIto(p) => families::bi_reflection(p, n, ReflectionMode::ClosedForm),
            Generator::BannaiItoQ(p) => families::bi_reflection_q(p, n),
            Generator::RacahWilson(p) => families::rw_reflection(p, n),
        }
    }
}

/// A real reflection-parameter sequence, either an explicit finite prefix or
/// a closed-form generator.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ReflectionSequence {
    #[serde(default)]
    pub a: Vec<Rational>,
    #[serde(default)]
    pub generator: Option<Generator>,
}

impl ReflectionSequence {
    pub fn explicit(a: Vec<Rational>) -> Self {
        ReflectionSequence { a, generator: None }
    }

    pub fn generated(generator: Generator) -> Self {
        ReflectionSequence {
            a: Vec::new(),
            generator: Some(generator),
        }
    }

    /// `a_0, ..., a_{n-1}`.
    ///
    /// Explicit entries take precedence; a generator supplies the rest.
    pub fn prefix(&self, n: usize) -> Result<Cow<'_, [Rational]>> {
        if self.a.len() >= n {
            return Ok(Cow::Borrowed(&self.a[..n]));
        }
        match &self.generator {
            Some(g) => {
                let mut out = g.reflections(n)?;
                out[..self.a.len()].clone_from_slice(&self.a);
                Ok(Cow::Owned(out))
            }
            None => Err(Error::InsufficientData {
                needed: n,
                available: self.a.len(),
            }),
        }
    }
}

/// `a_k` with the convention `a_{-1} = -1`.
pub fn reflection_at(a: &[Rational], k: isize) -> Rational {
    if k == -1 {
        -Rational::one()
    } else {
        a[k as usize].clone()
    }
}

/// `|1 - a^2|`, the exact square of `r`.
pub fn rsq(a: &Rational) -> Rational {
    (Rational::one() - a.square()).abs()
}

/// `-1` when `|a| > 1`, `+1` otherwise.
pub fn epsilon(a: &Rational) -> i8 {
    if a.abs() > Rational::one() {
        -1
    } else {
        1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub epsilon: Vec<i8>,
    pub rsq: Vec<Rational>,
    /// Every `|a_k| < 1`.
    pub classical: bool,
    /// Some `|a_k| = 1`.
    pub degenerate: bool,
}

pub fn classify(seq: &ReflectionSequence, n: usize) -> Result<Classification> {
    let a = seq.prefix(n)?;
    let one = Rational::one();
    Ok(Classification {
        epsilon: a.iter().map(epsilon).collect(),
        rsq: a.iter().map(rsq).collect(),
        classical: a.iter().all(|x| x.abs() < one),
        degenerate: a.iter().any(|x| x.abs() == one),
    })
}

/// `Φ_n` and its reversal `Φ_n^*`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SzegoPair {
    pub n: usize,
    pub phi: Polynomial,
    pub phi_star: Polynomial,
}

impl SzegoPair {
    fn initial() -> Self {
        SzegoPair {
            n: 0,
            phi: Polynomial::one(),
            phi_star: Polynomial::one(),
        }
    }

    /// One step of `Φ_{k+1} = zΦ_k - a_k Φ_k^*`, `Φ_{k+1}^* = Φ_k^* - a_k zΦ_k`.
    fn step(&self, a: &Rational) -> Self {
        let z_phi = self.phi.shift();
        SzegoPair {
            n: self.n + 1,
            phi: &z_phi - &self.phi_star.scale(a),
            phi_star: &self.phi_star - &z_phi.scale(a),
        }
    }
}

pub fn szego_polynomials(seq: &ReflectionSequence, n: usize) -> Result<SzegoPair> {
    let a = seq.prefix(n)?;
    Ok(a.iter().fold(SzegoPair::initial(), |pair, ak| pair.step(ak)))
}

/// All pairs `(Φ_k, Φ_k^*)` for `k = 0..=n`.
pub fn szego_table(seq: &ReflectionSequence, n: usize) -> Result<Vec<SzegoPair>> {
    let a = seq.prefix(n)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(SzegoPair::initial());
    for ak in a.iter() {
        let next = out.last().expect("non-empty").step(ak);
        out.push(next);
    }
    Ok(out)
}

//! Spectral transformations at the level of exact recurrence coefficients.
//!
//! Recurrences are monic: `P_{k+1}(x) = (x - b_k) P_k(x) - u_k P_{k-1}(x)`
//! with `u_0 = 0`. An AC-form `(A, C, θ)` encodes `b_k = θ - A_k - C_k`,
//! `u_k = C_k A_{k-1}`, which is the LU factorization of `J - θ`.

use serde::{Deserialize, Serialize};

use crate::cmv::pencil_recurrence;
use crate::error::{Error, Result};
use crate::opuc::{reflection_at, ReflectionSequence};
use crate::polynomial::Polynomial;
use crate::rational::Rational;

/// Number of indices for which [`christoffel`] cross-checks `A_k` against
/// `P_{k+1}(θ)/P_k(θ)` by explicit polynomial evaluation.
pub const DEFAULT_CHECK_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcForm {
    #[serde(rename = "A")]
    pub a: Vec<Rational>,
    #[serde(rename = "C")]
    pub c: Vec<Rational>,
    pub theta: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeTermRecurrence {
    pub b: Vec<Rational>,
    pub u: Vec<Rational>,
    #[serde(rename = "AC", default)]
    pub ac: Option<AcForm>,
}

impl ThreeTermRecurrence {
    /// `u_0` is forced to zero.
    pub fn new(b: Vec<Rational>, mut u: Vec<Rational>) -> Self {
        if let Some(u0) = u.first_mut() {
            *u0 = Rational::zero();
        }
        ThreeTermRecurrence { b, u, ac: None }
    }

    /// Canonical conversion `(A, C, θ) ↦ (b, u)`; the AC data is kept.
    pub fn from_ac(ac: AcForm) -> Self {
        let n = ac.a.len().min(ac.c.len());
        let b = (0..n).map(|k| &(&ac.theta - &ac.a[k]) - &ac.c[k]).collect();
        let u = (0..n)
            .map(|k| if k == 0 { Rational::zero() } else { &ac.c[k] * &ac.a[k - 1] })
            .collect();
        ThreeTermRecurrence { b, u, ac: Some(ac) }
    }

    pub fn len(&self) -> usize {
        self.b.len().min(self.u.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `P_0, ..., P_n`; needs `n` coefficients.
    pub fn polynomials(&self, n: usize) -> Result<Vec<Polynomial>> {
        if n > self.len() {
            return Err(Error::InsufficientData {
                needed: n,
                available: self.len(),
            });
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(Polynomial::one());
        for k in 0..n {
            let next = &(&out[k] * &Polynomial::linear(&self.b[k]))
                - &if k == 0 { Polynomial::zero() } else { out[k - 1].scale(&self.u[k]) };
            out.push(next);
        }
        Ok(out)
    }

    /// `P_0(x), ..., P_n(x)` evaluated through the recurrence.
    pub fn values_at(&self, x: &Rational, n: usize) -> Result<Vec<Rational>> {
        if n > self.len() {
            return Err(Error::InsufficientData {
                needed: n,
                available: self.len(),
            });
        }
        let mut out = vec![Rational::one()];
        for k in 0..n {
            let prev = if k == 0 { Rational::zero() } else { &self.u[k] * &out[k - 1] };
            out.push(&(&(x - &self.b[k]) * &out[k]) - &prev);
        }
        Ok(out)
    }

    /// First `n` coefficients (and AC data, when attached).
    pub fn truncate(&self, n: usize) -> Self {
        ThreeTermRecurrence {
            b: self.b[..n.min(self.b.len())].to_vec(),
            u: self.u[..n.min(self.u.len())].to_vec(),
            ac: self.ac.as_ref().map(|ac| AcForm {
                a: ac.a[..n.min(ac.a.len())].to_vec(),
                c: ac.c[..n.min(ac.c.len())].to_vec(),
                theta: ac.theta.clone(),
            }),
        }
    }

    /// Same coefficients, AC data dropped; used for comparisons.
    pub fn coefficients_only(&self) -> Self {
        ThreeTermRecurrence {
            b: self.b.clone(),
            u: self.u.clone(),
            ac: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChristoffelResult {
    #[serde(rename = "A")]
    pub a: Vec<Rational>,
    #[serde(rename = "C")]
    pub c: Vec<Rational>,
    pub theta: Rational,
    /// Kernel polynomials `(P_{k+1} - A_k P_k)/(x - θ)`; one coefficient
    /// shorter than the input because `b̃_k` needs `C_{k+1}`.
    pub transformed: ThreeTermRecurrence,
}

impl ChristoffelResult {
    pub fn ac_form(&self) -> AcForm {
        AcForm {
            a: self.a.clone(),
            c: self.c.clone(),
            theta: self.theta.clone(),
        }
    }
}

pub fn christoffel(rec: &ThreeTermRecurrence, theta: &Rational) -> Result<ChristoffelResult> {
    christoffel_checked(rec, theta, DEFAULT_CHECK_DEPTH)
}

/// Christoffel transform at `θ` through the iteration `A_0 = θ - b_0`,
/// `C_k = u_k / A_{k-1}`, `A_k = θ - b_k - C_k`.
///
/// For `k < check_depth` the result is cross-checked against
/// `A_k = P_{k+1}(θ) / P_k(θ)` with explicitly expanded polynomials.
pub fn christoffel_checked(
    rec: &ThreeTermRecurrence,
    theta: &Rational,
    check_depth: usize,
) -> Result<ChristoffelResult> {
    let n = rec.len();
    let mut a: Vec<Rational> = Vec::with_capacity(n);
    let mut c: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let ck = if k == 0 {
            Rational::zero()
        } else {
            rec.u[k].try_div(&a[k - 1]).map_err(|_| Error::ZeroAtTheta { index: k - 1 })?
        };
        let ak = &(theta - &rec.b[k]) - &ck;
        a.push(ak);
        c.push(ck);
    }
    if let Some(index) = a.iter().position(Rational::is_zero) {
        return Err(Error::ZeroAtTheta { index });
    }

    let depth = check_depth.min(n);
    if depth > 0 {
        let polys = rec.polynomials(depth)?;
        for k in 0..depth.saturating_sub(1) {
            let expected = polys[k + 1].eval(theta).try_div(&polys[k].eval(theta))?;
            if expected != a[k] {
                return Err(Error::IdentityViolation {
                    identity: "A_n = P_{n+1}(theta)/P_n(theta)".into(),
                    index: k,
                });
            }
        }
    }

    let m = n.saturating_sub(1);
    let b = (0..m).map(|k| &(theta - &a[k]) - &c[k + 1]).collect();
    let u = (0..m).map(|k| &c[k] * &a[k]).collect();
    Ok(ChristoffelResult {
        a,
        c,
        theta: theta.clone(),
        transformed: ThreeTermRecurrence::new(b, u),
    })
}

/// Geronimus inverse of [`christoffel`].
///
/// The kernel recurrence has AC data `Ã_k = A_k`, `C̃_k = C_{k+1}`; the
/// original is rebuilt as `b_k = θ - Ã_k - C̃_{k-1}`, `u_k = C̃_{k-1} Ã_{k-1}`,
/// and cross-checked at polynomial level against `P_k = P̃_k - C_k P̃_{k-1}`.
pub fn geronimus_reconstruct(result: &ChristoffelResult) -> Result<ThreeTermRecurrence> {
    let n = result.a.len();
    let theta = &result.theta;
    let tilde_a = &result.a;
    let tilde_c: Vec<Rational> = result.c.iter().skip(1).cloned().collect();
    let b: Vec<Rational> = (0..n)
        .map(|k| {
            let prev_c = if k == 0 { Rational::zero() } else { tilde_c[k - 1].clone() };
            &(theta - &tilde_a[k]) - &prev_c
        })
        .collect();
    let u: Vec<Rational> = (0..n)
        .map(|k| if k == 0 { Rational::zero() } else { &tilde_c[k - 1] * &tilde_a[k - 1] })
        .collect();
    let rebuilt = ThreeTermRecurrence::new(b, u);

    let m = result.transformed.len();
    let kernel = result.transformed.polynomials(m)?;
    let original = rebuilt.polynomials(m)?;
    for k in 0..=m {
        let expected = if k == 0 {
            kernel[0].clone()
        } else {
            &kernel[k] - &kernel[k - 1].scale(&result.c[k])
        };
        if original[k] != expected {
            return Err(Error::IdentityViolation {
                identity: "P_n = tP_n - C_n tP_{n-1}".into(),
                index: k,
            });
        }
    }
    Ok(rebuilt)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdgResult {
    pub lambda: Rational,
    /// `u*_k = (1 + a_{k-1})(1 - a_k)`, independent of `λ`.
    pub ustar: Vec<Rational>,
    #[serde(rename = "A")]
    pub a: Vec<Rational>,
    #[serde(rename = "C")]
    pub c: Vec<Rational>,
    /// Kernel-polynomial recurrence: diagonal `(-1)^k (λ - 1)`, product `λ u*_k`.
    pub recurrence: ThreeTermRecurrence,
}

/// Christoffel transform of the pencil recurrence at `θ = λ + 1`, checked
/// against the closed forms
/// `A_k = 1 - a_k` (even) / `λ(1 - a_k)` (odd),
/// `C_k = λ(1 + a_{k-1})` (even) / `1 + a_{k-1}` (odd).
pub fn sdg_step(seq: &ReflectionSequence, lambda: &Rational, n: usize) -> Result<SdgResult> {
    let a = seq.prefix(n)?;
    let one = Rational::one();
    for k in 0..n {
        if a[k] == one {
            return Err(Error::ZeroAtTheta { index: k });
        }
        if k >= 1 && a[k - 1] == -&one {
            return Err(Error::ZeroAtTheta { index: k });
        }
    }
    if lambda.is_zero() && n > 1 {
        return Err(Error::ZeroAtTheta { index: 1 });
    }

    let pencil = pencil_recurrence(seq, lambda, n)?;
    let theta = lambda + &one;
    let generic = christoffel(&pencil.as_recurrence(), &theta)?;

    let closed_a: Vec<Rational> = (0..n)
        .map(|k| {
            let base = &one - &a[k];
            if k % 2 == 0 { base } else { lambda * &base }
        })
        .collect();
    let closed_c: Vec<Rational> = (0..n)
        .map(|k| {
            if k == 0 {
                return Rational::zero();
            }
            let base = &one + &a[k - 1];
            if k % 2 == 0 { lambda * &base } else { base }
        })
        .collect();
    if let Some(index) = (0..n).find(|&k| generic.a[k] != closed_a[k] || generic.c[k] != closed_c[k]) {
        return Err(Error::IdentityViolation {
            identity: "SDG closed form of A_n, C_n at theta = lambda + 1".into(),
            index,
        });
    }

    let ustar: Vec<Rational> = (0..n)
        .map(|k| &(&one + &reflection_at(&a, k as isize - 1)) * &(&one - &a[k]))
        .collect();
    let lm1 = lambda - &one;
    let b: Vec<Rational> = (0..n).map(|k| if k % 2 == 0 { lm1.clone() } else { -&lm1 }).collect();
    let u: Vec<Rational> = ustar.iter().map(|x| lambda * x).collect();
    let recurrence = ThreeTermRecurrence::new(b, u);

    let t = &generic.transformed;
    if let Some(index) = (0..t.len()).find(|&k| t.b[k] != recurrence.b[k] || t.u[k] != recurrence.u[k]) {
        return Err(Error::IdentityViolation {
            identity: "kernel recurrence diagonal (-1)^n(lambda-1), product lambda u*_n".into(),
            index,
        });
    }

    Ok(SdgResult {
        lambda: lambda.clone(),
        ustar,
        a: generic.a,
        c: generic.c,
        recurrence,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescaleResult {
    pub lambda: Rational,
    pub sqrt_lambda: Rational,
    pub lambda0: Rational,
    /// `χ = λ₀ s - 1/s`
    pub chi: Rational,
    /// Diagonal `(-1)^k χ`, product `λ₀ u*_k`.
    pub recurrence: ThreeTermRecurrence,
}

/// `S_k(x) = s^{-k} Q̃_k(s x; λλ₀)` with `s² = λ`.
///
/// `sdg` must have been computed at `λ·λ₀`; its recurrence is rescaled
/// (`b ↦ b/s`, `u ↦ u/λ`) and compared with the closed form.
pub fn rescale(
    sdg: &SdgResult,
    lambda: &Rational,
    sqrt_lambda: &Rational,
    lambda0: &Rational,
) -> Result<RescaleResult> {
    if sqrt_lambda.is_zero() {
        return Err(Error::ZeroSqrt);
    }
    if &sqrt_lambda.square() != lambda {
        return Err(Error::NotAPerfectSquare {
            value: lambda.to_string(),
            root: sqrt_lambda.to_string(),
        });
    }
    let chi = &(lambda0 * sqrt_lambda) - &sqrt_lambda.recip()?;
    let n = sdg.ustar.len();
    let b: Vec<Rational> = (0..n).map(|k| if k % 2 == 0 { chi.clone() } else { -&chi }).collect();
    let u: Vec<Rational> = sdg.ustar.iter().map(|x| lambda0 * x).collect();
    let recurrence = ThreeTermRecurrence::new(b, u);

    let src = &sdg.recurrence;
    for k in 0..src.len().min(n) {
        let b_ok = src.b[k].try_div(sqrt_lambda)? == recurrence.b[k];
        let u_ok = src.u[k].try_div(lambda)? == recurrence.u[k];
        if !(b_ok && u_ok) {
            return Err(Error::IdentityViolation {
                identity: "rescaled SDG recurrence (sdg lambda must equal lambda*lambda0)".into(),
                index: k,
            });
        }
    }
    Ok(RescaleResult {
        lambda: lambda.clone(),
        sqrt_lambda: sqrt_lambda.clone(),
        lambda0: lambda0.clone(),
        chi,
        recurrence,
    })
}

/// Recurrence `S_{k+1} + (-1)^k χ S_k + v_k S_{k-1} = x S_k` with
/// `v_{2m} = -C_m`, `v_{2m+1} = -A_m`, for `k < n`.
pub fn chihara_split(a: &[Rational], c: &[Rational], chi: &Rational, n: usize) -> Result<ThreeTermRecurrence> {
    let need_c = n.div_ceil(2);
    let need_a = n / 2;
    if c.len() < need_c || a.len() < need_a {
        return Err(Error::InsufficientData {
            needed: need_c.max(need_a),
            available: a.len().min(c.len()),
        });
    }
    let b = (0..n).map(|k| if k % 2 == 0 { chi.clone() } else { -chi }).collect();
    let v = (0..n)
        .map(|k| if k % 2 == 0 { -&c[k / 2] } else { -&a[k / 2] })
        .collect();
    Ok(ThreeTermRecurrence::new(b, v))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiharaReport {
    pub depth: usize,
    /// `S_{2k} = P_k(x² + α - c²)` for every `k ≤ depth`.
    pub even_ok: bool,
    /// `S_{2k+1} = (x - χ) P̃_k(x² + α - c²)` for every `k ≤ depth`.
    pub odd_ok: bool,
    pub first_failure: Option<usize>,
    pub pass: bool,
}

/// Polynomial-level check of the quadratic (Chihara) construction.
///
/// `p_rec` must carry its AC-form with `θ = χ² + α - c²`; `tp_rec` is the
/// Christoffel transform of `p_rec` at that `θ`.
pub fn chihara_polynomial_check(
    p_rec: &ThreeTermRecurrence,
    tp_rec: &ThreeTermRecurrence,
    alpha: &Rational,
    c2: &Rational,
    chi: &Rational,
    depth: usize,
) -> Result<ChiharaReport> {
    let ac = p_rec.ac.as_ref().ok_or(Error::MissingAcForm)?;
    let expected_theta = &(&chi.square() + alpha) - c2;
    if ac.theta != expected_theta {
        return Err(Error::InconsistentTheta {
            expected: expected_theta.to_string(),
            found: ac.theta.to_string(),
        });
    }
    let s_rec = chihara_split(&ac.a, &ac.c, chi, 2 * depth + 1)?;
    let s = s_rec.polynomials(2 * depth + 1)?;
    let p = p_rec.polynomials(depth)?;
    let tp = tp_rec.polynomials(depth)?;
    let y = Polynomial::new(vec![alpha - c2, Rational::zero(), Rational::one()]);
    let x_minus_chi = Polynomial::linear(chi);

    let mut even_ok = true;
    let mut odd_ok = true;
    let mut first_failure = None;
    for k in 0..=depth {
        let e = s[2 * k] == p[k].compose(&y);
        let o = s[2 * k + 1] == &x_minus_chi * &tp[k].compose(&y);
        even_ok &= e;
        odd_ok &= o;
        if !(e && o) && first_failure.is_none() {
            first_failure = Some(k);
        }
    }
    Ok(ChiharaReport {
        depth,
        even_ok,
        odd_ok,
        first_failure,
        pass: even_ok && odd_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn chebyshev_like(n: usize) -> ThreeTermRecurrence {
        ThreeTermRecurrence::new(vec![q("0"); n], vec![q("1/4"); n])
    }

    /// Independent oracle: Christoffel data read off explicit kernel
    /// polynomials `(P_{k+1} - A_k P_k)/(x - θ)` by synthetic division.
    fn kernel_by_division(rec: &ThreeTermRecurrence, theta: &Rational, n: usize) -> Vec<Polynomial> {
        let p = rec.polynomials(n + 1).unwrap();
        (0..=n)
            .map(|k| {
                let ak = p[k + 1].eval(theta).try_div(&p[k].eval(theta)).unwrap();
                let num = &p[k + 1] - &p[k].scale(&ak);
                // divide by (x - θ)
                let cs = num.coeffs();
                let deg = cs.len() - 1;
                let mut out = vec![Rational::zero(); deg];
                let mut carry = Rational::zero();
                for i in (0..deg).rev() {
                    carry = &cs[i + 1] + &(&carry * theta);
                    out[i] = carry.clone();
                }
                assert_eq!(&cs[0] + &(&carry * theta), Rational::zero(), "remainder");
                Polynomial::new(out)
            })
            .collect()
    }

    #[test]
    fn christoffel_worked_example() {
        let r = christoffel(&chebyshev_like(6), &q("1")).unwrap();
        assert_eq!(&r.a[..3], &[q("1"), q("3/4"), q("2/3")]);
        assert_eq!(&r.c[..3], &[q("0"), q("1/4"), q("1/3")]);
        assert_eq!(r.transformed.b[0], q("-1/4"));
        assert_eq!(r.transformed.u[1], q("3/16"));
    }

    #[test]
    fn christoffel_matches_division_oracle() {
        let rec = chebyshev_like(8);
        let r = christoffel(&rec, &q("1")).unwrap();
        let kernels = kernel_by_division(&rec, &q("1"), 6);
        let from_rec = r.transformed.polynomials(6).unwrap();
        assert_eq!(kernels, from_rec);
    }

    #[test]
    fn zero_at_theta() {
        let rec = ThreeTermRecurrence::new(vec![q("2"), q("0")], vec![q("0"), q("1")]);
        assert_eq!(christoffel(&rec, &q("2")).unwrap_err(), Error::ZeroAtTheta { index: 0 });
    }

    #[test]
    fn geronimus_roundtrip_example() {
        let rec = chebyshev_like(10);
        let r = christoffel(&rec, &q("1")).unwrap();
        assert_eq!(geronimus_reconstruct(&r).unwrap(), rec);
    }

    #[test]
    fn sdg_examples() {
        let seq = ReflectionSequence::explicit(Rational::parse_list("1/2,-1/3,1/4").unwrap());
        let r = sdg_step(&seq, &q("2"), 3).unwrap();
        assert_eq!(r.ustar, vec![q("0"), q("2"), q("1/2")]);
        assert_eq!(r.recurrence.b, vec![q("1"), q("-1"), q("1")]);
        let r3 = sdg_step(&seq, &q("3"), 3).unwrap();
        assert_eq!(r3.ustar, r.ustar);
    }

    #[test]
    fn sdg_degenerate_factors() {
        let seq = ReflectionSequence::explicit(Rational::parse_list("1/2,1,0").unwrap());
        assert_eq!(sdg_step(&seq, &q("2"), 3).unwrap_err(), Error::ZeroAtTheta { index: 1 });
        let seq = ReflectionSequence::explicit(Rational::parse_list("-1,1/2").unwrap());
        assert_eq!(sdg_step(&seq, &q("2"), 2).unwrap_err(), Error::ZeroAtTheta { index: 1 });
    }

    #[test]
    fn rescale_examples() {
        let seq = ReflectionSequence::explicit(Rational::parse_list("1/2,-1/3,1/4").unwrap());
        // χ = λ₀ s - 1/s
        let sdg = sdg_step(&seq, &q("4"), 3).unwrap();
        let r = rescale(&sdg, &q("4"), &q("2"), &q("1")).unwrap();
        assert_eq!(r.chi, q("3/2"));
        assert_eq!(r.recurrence.u, vec![q("0"), q("2"), q("1/2")]);

        let sdg = sdg_step(&seq, &q("1"), 3).unwrap();
        assert_eq!(rescale(&sdg, &q("1"), &q("1"), &q("1")).unwrap().chi, q("0"));

        let lam = q("144/289");
        let lam0 = q("-119/144");
        let sdg = sdg_step(&seq, &(&lam * &lam0), 3).unwrap();
        let r = rescale(&sdg, &lam, &q("-12/17"), &lam0).unwrap();
        assert_eq!(r.chi, q("2"));
    }

    #[test]
    fn rescale_errors() {
        let seq = ReflectionSequence::explicit(Rational::parse_list("1/2,-1/3").unwrap());
        let sdg = sdg_step(&seq, &q("2"), 2).unwrap();
        assert!(matches!(rescale(&sdg, &q("2"), &q("3/2"), &q("1")), Err(Error::NotAPerfectSquare { .. })));
        assert_eq!(rescale(&sdg, &q("0"), &q("0"), &q("1")).unwrap_err(), Error::ZeroSqrt);
        // wrong sdg lambda
        assert!(matches!(rescale(&sdg, &q("4"), &q("2"), &q("1")), Err(Error::IdentityViolation { .. })));
    }

    #[test]
    fn chihara_split_examples() {
        let a = [q("234/53"), q("7")];
        let c = [q("0"), q("9/106")];
        let s = chihara_split(&a, &c, &q("0"), 3).unwrap();
        assert_eq!(s.u, vec![q("0"), q("-234/53"), q("-9/106")]);
        assert!(s.b.iter().all(Rational::is_zero));
        assert!(chihara_split(&a, &c, &q("0"), 6).is_err());
    }

    #[test]
    fn chihara_check_examples() {
        let cheb = chebyshev_like(6);
        // θ = χ² + α - c² = -1
        let theta = q("-1");
        let r = christoffel(&cheb, &theta).unwrap();
        let p_rec = ThreeTermRecurrence::from_ac(r.ac_form());
        assert_eq!(p_rec.coefficients_only(), cheb);
        let rep0 = chihara_polynomial_check(&p_rec, &r.transformed, &q("0"), &q("1"), &q("0"), 0).unwrap();
        assert!(rep0.pass);
        let rep1 = chihara_polynomial_check(&p_rec, &r.transformed, &q("0"), &q("1"), &q("0"), 1).unwrap();
        assert!(rep1.pass);
        assert!(matches!(
            chihara_polynomial_check(&p_rec, &r.transformed, &q("0"), &q("2"), &q("0"), 1),
            Err(Error::InconsistentTheta { .. })
        ));
        assert_eq!(
            chihara_polynomial_check(&cheb, &r.transformed, &q("0"), &q("1"), &q("0"), 1).unwrap_err(),
            Error::MissingAcForm
        );
    }

    fn arb_rational(bound: i64) -> impl Strategy<Value = Rational> {
        (-bound..=bound, 1..=bound).prop_map(|(n, d)| Rational::new(n, d).unwrap())
    }

    fn arb_recurrence(len: usize) -> impl Strategy<Value = ThreeTermRecurrence> {
        (
            prop::collection::vec(arb_rational(9), len),
            prop::collection::vec(arb_rational(9).prop_filter("nonzero", |x| !x.is_zero()), len),
        )
            .prop_map(|(b, u)| ThreeTermRecurrence::new(b, u))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn christoffel_geronimus_roundtrip(rec in arb_recurrence(12), theta in arb_rational(9)) {
            match christoffel(&rec, &theta) {
                Ok(r) => prop_assert_eq!(geronimus_reconstruct(&r).unwrap(), rec),
                Err(Error::ZeroAtTheta { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }

        #[test]
        fn sdg_ustar_is_lambda_invariant(
            a in prop::collection::vec(arb_rational(7), 2..10),
            l1 in arb_rational(7),
            l2 in arb_rational(7),
        ) {
            prop_assume!(!l1.is_zero() && !l2.is_zero());
            let seq = ReflectionSequence::explicit(a.clone());
            let n = a.len();
            match (sdg_step(&seq, &l1, n), sdg_step(&seq, &l2, n)) {
                (Ok(r1), Ok(r2)) => prop_assert_eq!(r1.ustar, r2.ustar),
                (Err(Error::ZeroAtTheta { .. }), _) | (_, Err(Error::ZeroAtTheta { .. })) => {}
                (Err(e), _) | (_, Err(e)) => return Err(TestCaseError::fail(e.to_string())),
            }
        }

        #[test]
        fn chihara_split_inverts(
            a in prop::collection::vec(arb_rational(9), 5),
            c in prop::collection::vec(arb_rational(9), 5),
            chi in arb_rational(9),
        ) {
            let s = chihara_split(&a, &c, &chi, 10).unwrap();
            for m in 0..5 {
                if m > 0 {
                    prop_assert_eq!(-&s.u[2 * m], c[m].clone());
                }
                prop_assert_eq!(-&s.u[2 * m + 1], a[m].clone());
            }
        }
    }
}

//! Closed-form recurrence data for the Bannai-Ito, complementary Bannai-Ito and
//! Racah-Wilson families, together with the reflection parameters that map
//! onto them through the Schur-Delsarte-Genin construction.
//!
//! Every generator checks its denominators as it goes and reports the first
//! vanishing factor as [`Error::PoleInParameters`], naming the factor in terms
//! of the running index `n`.

use serde::{Deserialize, Serialize};

use crate::cmv::pencil_recurrence;
use crate::error::{Error, Result};
use crate::opuc::ReflectionSequence;
use crate::rational::Rational;
use crate::transforms::{AcForm, ThreeTermRecurrence};

/// `(ρ₁, ρ₂, r₁, r₂)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BIParameters {
    pub rho1: Rational,
    pub rho2: Rational,
    pub r1: Rational,
    pub r2: Rational,
}

impl BIParameters {
    pub fn new(rho1: Rational, rho2: Rational, r1: Rational, r2: Rational) -> Self {
        BIParameters { rho1, rho2, r1, r2 }
    }

    /// `g = ρ₁ + ρ₂ - r₁ - r₂`
    pub fn g(&self) -> Rational {
        &(&self.rho1 + &self.rho2) - &(&self.r1 + &self.r2)
    }
}

/// `(β₁, β₂, β₃, β₄)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RWParameters {
    pub beta1: Rational,
    pub beta2: Rational,
    pub beta3: Rational,
    pub beta4: Rational,
}

impl RWParameters {
    pub fn new(beta1: Rational, beta2: Rational, beta3: Rational, beta4: Rational) -> Self {
        RWParameters {
            beta1,
            beta2,
            beta3,
            beta4,
        }
    }

    /// `σ = β₁ + β₂ + β₃ + β₄`
    pub fn sigma(&self) -> Rational {
        &(&self.beta1 + &self.beta2) + &(&self.beta3 + &self.beta4)
    }
}

/// `num / den`, or a pole error naming `factor` at index `index`.
fn ratio(num: Rational, den: &Rational, index: usize, factor: &str) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::pole(index, factor));
    }
    num.try_div(den)
}

fn nonzero(value: &Rational, index: usize, factor: &str) -> Result<()> {
    if value.is_zero() {
        Err(Error::pole(index, factor))
    } else {
        Ok(())
    }
}

fn q(k: usize) -> Rational {
    Rational::from(k)
}

fn half_of(k: usize) -> Rational {
    Rational::new(k as i64, 2).expect("nonzero denominator")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BICoefficients {
    #[serde(rename = "A")]
    pub a: Vec<Rational>,
    #[serde(rename = "C")]
    pub c: Vec<Rational>,
    pub rec: ThreeTermRecurrence,
}

/// Bannai-Ito `A_k`, `C_k` for `k < n` and the monic recurrence
/// `b_k = ρ₁ - A_k - C_k`, `u_k = A_{k-1} C_k`.
pub fn bi_coeffs(p: &BIParameters, n: usize) -> Result<BICoefficients> {
    let g = p.g();
    let two = Rational::int(2);
    let four = Rational::int(4);
    let mut a = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for k in 0..n {
        let k1 = q(k + 1);
        let den_a = &four * &(&k1 + &g);
        let num_a = if k % 2 == 0 {
            (&(&k1 + &(&two * &p.rho1)) - &(&two * &p.r1))
                * (&(&k1 + &(&two * &p.rho1)) - &(&two * &p.r2))
        } else {
            (&k1 + &(&two * &g)) * (&k1 + &(&two * &(&p.rho1 + &p.rho2)))
        };
        a.push(ratio(num_a, &den_a, k, "n+1+g")?);

        if k == 0 {
            c.push(Rational::zero());
            continue;
        }
        let kq = q(k);
        let den_c = &four * &(&kq + &g);
        let num_c = if k % 2 == 0 {
            &kq * &(&kq - &(&two * &(&p.r1 + &p.r2)))
        } else {
            (&(&kq - &(&two * &p.r2)) + &(&two * &p.rho2))
                * (&(&kq - &(&two * &p.r1)) + &(&two * &p.rho2))
        };
        c.push(-ratio(num_c, &den_c, k, "n+g")?);
    }
    let rec = ThreeTermRecurrence::from_ac(AcForm {
        a: a.clone(),
        c: c.clone(),
        theta: p.rho1.clone(),
    });
    Ok(BICoefficients { a, c, rec })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CBICoefficients {
    pub v: Vec<Rational>,
    pub rec: ThreeTermRecurrence,
}

/// Complementary Bannai-Ito data: `v_k` for `k < n` and the recurrence with
/// diagonal `(-1)^k ρ₂` and off-diagonal product `v_k`.
///
/// `v_0 = 0` through its factor `n`; its denominator `g(g+1)` is not
/// evaluated.
pub fn cbi_coeffs(p: &BIParameters, n: usize) -> Result<CBICoefficients> {
    let g = p.g();
    let h = Rational::half();
    let one = Rational::one();
    let mut v = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 {
            v.push(Rational::zero());
            continue;
        }
        let m = q(k / 2);
        // both branches share the denominator (k+g)(k+1+g)
        let d0 = &q(k) + &g;
        let d1 = &q(k + 1) + &g;
        nonzero(&d0, k, "n+g")?;
        nonzero(&d1, k, "n+1+g")?;
        let num = if k % 2 == 0 {
            &(&m * &(&(&m + &p.rho1) - &p.r1 + &h))
                * &(&(&(&m + &p.rho1) - &p.r2 + &h) * &(&m - &(&p.r1 + &p.r2)))
        } else {
            &(&(&m + &g + &one) * &(&(&m + &p.rho1) + &p.rho2 + &one))
                * &(&(&(&m + &p.rho2) - &p.r1 + &h) * &(&(&m + &p.rho2) - &p.r2 + &h))
        };
        v.push(-num.try_div(&(&d0 * &d1))?);
    }
    let b = (0..n)
        .map(|k| if k % 2 == 0 { p.rho2.clone() } else { -&p.rho2 })
        .collect();
    let rec = ThreeTermRecurrence::new(b, v.clone());
    Ok(CBICoefficients { v, rec })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BISeed {
    pub a0: Rational,
    pub lambda0: Rational,
    pub lambda_bi: Rational,
    /// Signed branch `2 / (-ρ₂ - r₂ - 1/2)`.
    pub sqrt_lambda_bi: Rational,
}

/// Seeds `a₀`, `λ₀` and the point `λ_BI` with its signed square root.
///
/// The root is taken as `2/(-ρ₂-r₂-1/2)` even when negative: that is the
/// branch for which `λ₀ s - 1/s = ρ₂` holds identically.
pub fn bi_seed(p: &BIParameters) -> Result<BISeed> {
    let h = Rational::half();
    let one = Rational::one();
    let two = Rational::int(2);
    let g = p.g();
    let d1 = &(-&p.rho2 - &p.r2) - &h;
    let d2 = &(&p.rho2 - &p.r2) - &h;
    nonzero(&d1, 0, "-rho2-r2-1/2")?;
    nonzero(&d2, 0, "rho2-r2-1/2")?;
    let g1 = &g + &one;
    nonzero(&g1, 0, "g+1")?;

    let num = &two * &(&(&(&p.rho1 - &p.r2) + &h) * &(-&p.r1 - &p.r2));
    let a0 = &one - &num.try_div(&(&d1 * &g1))?;
    let lambda0 = &(&d1 * &d2) * &Rational::new(1, 4)?;
    let sqrt_lambda_bi = two.try_div(&d1)?;
    let lambda_bi = sqrt_lambda_bi.square();

    let chi = &(&lambda0 * &sqrt_lambda_bi) - &sqrt_lambda_bi.recip()?;
    if chi != p.rho2 {
        return Err(Error::IdentityViolation {
            identity: "lambda0*s - 1/s = rho2".into(),
            index: 0,
        });
    }
    Ok(BISeed {
        a0,
        lambda0,
        lambda_bi,
        sqrt_lambda_bi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReflectionMode {
    ClosedForm,
    Recursive,
}

/// Reflection parameters whose SDG image is the complementary Bannai-Ito
/// family, `a_0 .. a_{n-1}`.
///
/// `Recursive` seeds `a₀` from [`bi_seed`] and applies
/// `a_k = 1 - v_k / (λ₀ (1 + a_{k-1}))` for `k ≥ 1` only; at `k = 0` the same
/// relation degenerates to `v₀ = λ₀(1 + a_{-1})(1 - a₀) = 0`.
pub fn bi_reflection(p: &BIParameters, n: usize, mode: ReflectionMode) -> Result<Vec<Rational>> {
    match mode {
        ReflectionMode::ClosedForm => bi_reflection_closed(p, n),
        ReflectionMode::Recursive => bi_reflection_recursive(p, n),
    }
}

fn bi_reflection_closed(p: &BIParameters, n: usize) -> Result<Vec<Rational>> {
    let h = Rational::half();
    let one = Rational::one();
    let two = Rational::int(2);
    let g = p.g();
    let d1 = &(-&p.rho2 - &p.r2) - &h;
    let d2 = &(&p.rho2 - &p.r2) - &h;
    let mut a = Vec::with_capacity(n);
    for k in 0..n {
        let kg = &(&q(k) + &g) + &one;
        let (num, den) = if k % 2 == 0 {
            nonzero(&d1, k, "-rho2-r2-1/2")?;
            let num = (&(&p.rho1 - &p.r2) + &half_of(k + 1)) * (&(-&p.r1 - &p.r2) + &half_of(k));
            (num, &d1 * &kg)
        } else {
            nonzero(&d2, k, "rho2-r2-1/2")?;
            let num = (&g + &half_of(k + 1)) * (&(&p.rho2 - &p.r2) + &half_of(k));
            (num, &d2 * &kg)
        };
        nonzero(&kg, k, "n+g+1")?;
        a.push(&one - &(&two * &num.try_div(&den)?));
    }
    Ok(a)
}

fn bi_reflection_recursive(p: &BIParameters, n: usize) -> Result<Vec<Rational>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let seed = bi_seed(p)?;
    let v = cbi_coeffs(p, n)?.v;
    let one = Rational::one();
    let mut a = Vec::with_capacity(n);
    a.push(seed.a0);
    for k in 1..n {
        let prev = &one + &a[k - 1];
        if prev.is_zero() {
            return Err(Error::DegenerateRecursion { index: k });
        }
        let next = &one - &v[k].try_div(&(&seed.lambda0 * &prev))?;
        a.push(next);
    }
    Ok(a)
}

/// Reflection parameters whose pencil polynomials reproduce the Bannai-Ito
/// polynomials: the closed form obtained by applying [`subs1`] to the
/// complementary family.
///
/// even `n`: `1 - 2(ρ₂-r₂+(n+1)/2)(ρ₂-r₁+(n+1)/2) / ((ρ₂-ρ₁)(n+g+1))`,
/// odd `n`: `1 - 2(g+(n+1)/2)(ρ₁+ρ₂+(n+1)/2) / ((ρ₁+ρ₂)(n+g+1))`.
pub fn bi_reflection_q(p: &BIParameters, n: usize) -> Result<Vec<Rational>> {
    let one = Rational::one();
    let two = Rational::int(2);
    let g = p.g();
    let diff = &p.rho2 - &p.rho1;
    let sum = &p.rho1 + &p.rho2;
    let mut a = Vec::with_capacity(n);
    for k in 0..n {
        let kg = &(&q(k) + &g) + &one;
        let hk = half_of(k + 1);
        let (num, den) = if k % 2 == 0 {
            nonzero(&diff, k, "rho2-rho1")?;
            let num = (&(&p.rho2 - &p.r2) + &hk) * (&(&p.rho2 - &p.r1) + &hk);
            (num, &diff * &kg)
        } else {
            nonzero(&sum, k, "rho1+rho2")?;
            let num = (&g + &hk) * (&sum + &hk);
            (num, &sum * &kg)
        };
        nonzero(&kg, k, "n+g+1")?;
        a.push(&one - &(&two * &num.try_div(&den)?));
    }
    Ok(a)
}

/// The same family with `ρ₁` and `ρ₂` exchanged in the even branch, `1 - 2(ρ₁-r₂+(n+1)/2)(ρ₁-r₁+(n+1)/2) / ((ρ₁-ρ₂)(n+g+1))`.
///
/// Kept only so that reports can show it disagrees with [`bi_reflection_q`]
/// (it equals `-a_n` on even indices).
pub fn bi_reflection_q_swapped(p: &BIParameters, n: usize) -> Result<Vec<Rational>> {
    let one = Rational::one();
    let two = Rational::int(2);
    let g = p.g();
    let diff = &p.rho1 - &p.rho2;
    let mut a = bi_reflection_q(p, n)?;
    for k in (0..n).step_by(2) {
        let kg = &(&q(k) + &g) + &one;
        let hk = half_of(k + 1);
        let num = (&(&p.rho1 - &p.r2) + &hk) * (&(&p.rho1 - &p.r1) + &hk);
        a[k] = &one - &(&two * &num.try_div(&(&diff * &kg))?);
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RWCoefficients {
    #[serde(rename = "A")]
    pub a: Vec<Rational>,
    #[serde(rename = "C")]
    pub c: Vec<Rational>,
    /// Monic Wilson recurrence: diagonal `A_k + C_k - β₁²`, product
    /// `A_{k-1} C_k`. Its AC-form is `(−A, −C, θ = −β₁²)`.
    pub rec: ThreeTermRecurrence,
}

/// Racah-Wilson `A_k`, `C_k` for `k < n`.
pub fn rw_coeffs(p: &RWParameters, n: usize) -> Result<RWCoefficients> {
    let sigma = p.sigma();
    let one = Rational::one();
    let two = Rational::int(2);
    let mut a = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for k in 0..n {
        let kq = q(k);
        let tk = &two * &kq;
        let s1 = &(&tk + &sigma) - &one;
        let s0 = &tk + &sigma;
        nonzero(&s1, k, "2n+sigma-1")?;
        nonzero(&s0, k, "2n+sigma")?;
        let num_a = &(&(&(&kq + &sigma) - &one) * &(&(&kq + &p.beta1) + &p.beta2))
            * &(&(&(&kq + &p.beta1) + &p.beta3) * &(&(&kq + &p.beta1) + &p.beta4));
        a.push(num_a.try_div(&(&s1 * &s0))?);

        if k == 0 {
            c.push(Rational::zero());
            continue;
        }
        let s2 = &(&tk + &sigma) - &two;
        nonzero(&s2, k, "2n+sigma-2")?;
        let num_c = &(&kq * &(&(&(&kq + &p.beta2) + &p.beta3) - &one))
            * &(&(&(&(&kq + &p.beta2) + &p.beta4) - &one) * &(&(&(&kq + &p.beta3) + &p.beta4) - &one));
        c.push(num_c.try_div(&(&s1 * &s2))?);
    }
    let rec = ThreeTermRecurrence::from_ac(AcForm {
        a: a.iter().map(|x| -x).collect(),
        c: c.iter().map(|x| -x).collect(),
        theta: -p.beta1.square(),
    });
    Ok(RWCoefficients { a, c, rec })
}

/// `β₁ = ρ₂`, `β₂ = 1 + ρ₁`, `β₃ = 1/2 - r₁`, `β₄ = 1/2 - r₂`.
pub fn beta_map(p: &BIParameters) -> RWParameters {
    let h = Rational::half();
    RWParameters {
        beta1: p.rho2.clone(),
        beta2: &Rational::one() + &p.rho1,
        beta3: &h - &p.r1,
        beta4: &h - &p.r2,
    }
}

/// Delsarte-Genin preimages of the symmetrized Racah-Wilson polynomials.
pub fn rw_reflection(p: &RWParameters, n: usize) -> Result<Vec<Rational>> {
    let sigma = p.sigma();
    let one = Rational::one();
    let two = Rational::int(2);
    let h = Rational::half();
    let d_even = &(&p.beta4 - &p.beta1) - &one;
    let d_odd = &(&p.beta1 + &p.beta4) - &one;
    let mut a = Vec::with_capacity(n);
    for k in 0..n {
        let ks = &(&q(k) + &sigma) - &one;
        nonzero(&ks, k, "n+sigma-1")?;
        let hk = half_of(k);
        let (num, den) = if k % 2 == 0 {
            nonzero(&d_even, k, "beta4-beta1-1")?;
            let num = (&(&(&p.beta2 + &p.beta4) + &hk) - &one)
                * (&(&(&p.beta3 + &p.beta4) + &hk) - &one);
            (num, &d_even * &ks)
        } else {
            nonzero(&d_odd, k, "beta1+beta4-1")?;
            let num = (&(&sigma + &hk) - &Rational::new(3, 2)?)
                * (&(&(&p.beta1 + &p.beta4) + &hk) - &h);
            (num, &d_odd * &ks)
        };
        a.push(&one - &(&two * &num.try_div(&den)?));
    }
    Ok(a)
}

/// `(ρ₁, ρ₂, r₁, r₂) ↦ (-r₂-1/2, ρ₁, r₁, -ρ₂-1/2)`; preserves `g`.
pub fn subs1(p: &BIParameters) -> BIParameters {
    let h = Rational::half();
    BIParameters {
        rho1: &(-&p.r2) - &h,
        rho2: p.rho1.clone(),
        r1: p.r1.clone(),
        r2: &(-&p.rho2) - &h,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentificationReport {
    pub params: BIParameters,
    pub n: usize,
    /// `(ρ₂ + ρ₁) / (ρ₂ - ρ₁)`
    pub lambda: Rational,
    pub a: Vec<Rational>,
    /// Closed form and the substitution route agree.
    pub paths_agree: bool,
    /// First even index where the swapped even branch disagrees, if any.
    pub swapped_form_mismatch: Option<usize>,
    pub b_matches: bool,
    pub u_matches: bool,
    pub pass: bool,
}

/// Checks that the pencil recurrence of [`bi_reflection_q`] at
/// `λ = (ρ₂+ρ₁)/(ρ₂-ρ₁)` is the Bannai-Ito recurrence rescaled by
/// `2/(ρ₂-ρ₁)`:
/// `b_k(λ) = 2(ρ₁ - A_k - C_k)/(ρ₂-ρ₁)` and `u_k(λ) = 4 A_{k-1} C_k/(ρ₂-ρ₁)²`.
pub fn bi_identify_q(p: &BIParameters, n: usize) -> Result<IdentificationReport> {
    let diff = &p.rho2 - &p.rho1;
    nonzero(&diff, 0, "rho2-rho1")?;
    nonzero(&(&p.rho2 + &p.rho1), 0, "rho1+rho2")?;
    let lambda = (&p.rho2 + &p.rho1).try_div(&diff)?;

    let closed = bi_reflection_q(p, n)?;
    let via_subs = bi_reflection(&subs1(p), n, ReflectionMode::ClosedForm)?;
    let paths_agree = closed == via_subs;
    if !paths_agree {
        let index = closed.iter().zip(&via_subs).position(|(x, y)| x != y).unwrap_or(0);
        return Err(Error::IdentityViolation {
            identity: "a_Bannai_1 closed form = a_Bannai o subs1".into(),
            index,
        });
    }
    let swapped = bi_reflection_q_swapped(p, n)?;
    let swapped_form_mismatch = closed.iter().zip(&swapped).position(|(x, y)| x != y);

    let pencil = pencil_recurrence(&ReflectionSequence::explicit(closed.clone()), &lambda, n)?;
    let bi = bi_coeffs(p, n)?;
    let two = Rational::int(2);
    let scale_b = two.try_div(&diff)?;
    let scale_u = scale_b.square();
    let mut b_matches = true;
    let mut u_matches = true;
    for k in 0..n {
        let target_b = &scale_b * &(&(&p.rho1 - &bi.a[k]) - &bi.c[k]);
        let target_u = if k == 0 {
            Rational::zero()
        } else {
            &scale_u * &(&bi.a[k - 1] * &bi.c[k])
        };
        let ok_b = pencil.b[k] == target_b;
        let ok_u = pencil.u[k] == target_u;
        b_matches &= ok_b;
        u_matches &= ok_u;
        if !(ok_b && ok_u) {
            return Err(Error::IdentityViolation {
                identity: if ok_b { "u_n(lambda) = 4 A_{n-1} C_n/(rho2-rho1)^2" } else { "b_n(lambda) = 2(rho1 - A_n - C_n)/(rho2-rho1)" }
                    .into(),
                index: k,
            });
        }
    }
    Ok(IdentificationReport {
        params: p.clone(),
        n,
        lambda,
        a: closed,
        paths_agree,
        swapped_form_mismatch,
        b_matches,
        u_matches,
        pass: paths_agree && b_matches && u_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn sample() -> BIParameters {
        BIParameters::new(q("1"), q("2"), q("1/4"), q("1/3"))
    }

    #[test]
    fn bi_coefficient_examples() {
        let bi = bi_coeffs(&sample(), 3).unwrap();
        assert_eq!(bi.a[0], q("35/82"));
        assert_eq!(bi.c[1], q("-117/82"));
        assert_eq!(bi.c[0], q("0"));
        assert_eq!(bi.rec.u[0], q("0"));
        assert_eq!(bi.rec.b[0], q("1") - q("35/82"));
        assert_eq!(bi.rec.u[1], q("35/82") * q("-117/82"));
    }

    #[test]
    fn cbi_coefficient_examples() {
        let cbi = cbi_coeffs(&sample(), 3).unwrap();
        assert_eq!(cbi.v, vec![q("0"), q("-234/53"), q("-9/106")]);
        assert_eq!(cbi.rec.b, vec![q("2"), q("-2"), q("2")]);
    }

    #[test]
    fn seed_examples() {
        let s = bi_seed(&sample()).unwrap();
        assert_eq!(s.a0, q("599/697"));
        assert_eq!(s.lambda0, q("-119/144"));
        assert_eq!(s.lambda_bi, q("144/289"));
        assert_eq!(s.sqrt_lambda_bi, q("-12/17"));
    }

    #[test]
    fn reflection_examples_both_modes() {
        let closed = bi_reflection(&sample(), 2, ReflectionMode::ClosedForm).unwrap();
        let rec = bi_reflection(&sample(), 2, ReflectionMode::Recursive).unwrap();
        assert_eq!(closed, vec![q("599/697"), q("-695/371")]);
        assert_eq!(rec, closed);
        // λ₀(1+a₀) = -63/41 and v₁ / that = 1066/371
        let s = bi_seed(&sample()).unwrap();
        let denom = &s.lambda0 * &(q("1") + &s.a0);
        assert_eq!(denom, q("-63/41"));
        assert_eq!(q("-234/53").try_div(&denom).unwrap(), q("1066/371"));
    }

    #[test]
    fn rw_examples() {
        let beta = beta_map(&sample());
        assert_eq!(beta, RWParameters::new(q("2"), q("2"), q("1/4"), q("1/6")));
        assert_eq!(beta.sigma(), q("53/12"));
        assert_eq!(beta.sigma(), sample().g() + q("2"));
        let rw = rw_coeffs(&beta, 3).unwrap();
        assert_eq!(rw.a[0], q("234/53"));
        assert_eq!(rw.c[1], q("9/106"));
        assert_eq!(rw.c[0], q("0"));
        assert_eq!(rw_reflection(&beta, 1).unwrap()[0], q("599/697"));
        assert_eq!(
            beta_map(&BIParameters::new(q("0"), q("0"), q("1/2"), q("1/2"))),
            RWParameters::new(q("0"), q("1"), q("0"), q("0"))
        );
    }

    #[test]
    fn rw_reflection_pole() {
        // β₄ = β₁ + 1
        let beta = RWParameters::new(q("1"), q("2"), q("1/3"), q("2"));
        match rw_reflection(&beta, 2).unwrap_err() {
            Error::PoleInParameters { index: 0, factor } => assert_eq!(factor, "beta4-beta1-1"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn subs1_examples() {
        let s = subs1(&sample());
        assert_eq!(s, BIParameters::new(q("-5/6"), q("1"), q("1/4"), q("-5/2")));
        assert_eq!(s.g(), sample().g());
        // not an involution
        assert_ne!(subs1(&s), sample());
    }

    #[test]
    fn identification_example() {
        let r = bi_identify_q(&sample(), 12).unwrap();
        assert_eq!(r.lambda, q("3"));
        assert!(r.pass);
        assert_eq!(r.swapped_form_mismatch, Some(0));
        let pencil = pencil_recurrence(&ReflectionSequence::explicit(r.a.clone()), &r.lambda, 1).unwrap();
        assert_eq!(pencil.b[0], q("47/41"));
    }

    #[test]
    fn swapped_even_branch_is_negated() {
        let p = sample();
        let good = bi_reflection_q(&p, 8).unwrap();
        let swapped = bi_reflection_q_swapped(&p, 8).unwrap();
        for k in 0..8 {
            if k % 2 == 0 {
                assert_eq!(swapped[k], -&good[k]);
            } else {
                assert_eq!(swapped[k], good[k]);
            }
        }
    }

    #[test]
    fn poles_name_the_factor() {
        // g = -1 makes n+1+g vanish at n = 0
        let p = BIParameters::new(q("0"), q("0"), q("1/2"), q("1/2"));
        assert_eq!(p.g(), q("-1"));
        match bi_coeffs(&p, 2).unwrap_err() {
            Error::PoleInParameters { index, factor } => {
                assert_eq!(index, 0);
                assert_eq!(factor, "n+1+g");
            }
            e => panic!("unexpected {e:?}"),
        }
        // -ρ₂-r₂-1/2 = 0
        let p = BIParameters::new(q("1"), q("-1"), q("1/4"), q("1/2"));
        assert!(matches!(bi_seed(&p), Err(Error::PoleInParameters { .. })));
    }

    #[test]
    fn recursion_breakdown_is_reported() {
        // find parameters where 1 + a_k = 0 for some k by scanning a small grid
        let grid = ["-2", "-3/2", "-1", "-1/2", "0", "1/2", "1", "3/2", "2"];
        let mut seen = false;
        'outer: for r1 in grid {
            for r2 in grid {
                for rho1 in grid {
                    for rho2 in grid {
                        let p = BIParameters::new(q(rho1), q(rho2), q(r1), q(r2));
                        if let Ok(a) = bi_reflection(&p, 6, ReflectionMode::ClosedForm) {
                            if let Some(k) = a[..5].iter().position(|x| *x == q("-1")) {
                                if bi_seed(&p).is_err() || cbi_coeffs(&p, 6).is_err() {
                                    continue;
                                }
                                match bi_reflection(&p, 6, ReflectionMode::Recursive) {
                                    Err(Error::DegenerateRecursion { index }) => assert_eq!(index, k + 1),
                                    Err(Error::PoleInParameters { .. }) => continue,
                                    other => panic!("expected breakdown, got {other:?}"),
                                }
                                seen = true;
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        assert!(seen, "grid contained no breakdown case");
    }
}

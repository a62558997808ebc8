//! End-to-end routes through several modules that must land on the same
//! exact recurrence.

use opdc_core::families::{
    beta_map, bi_coeffs, bi_reflection, bi_seed, cbi_coeffs, rw_coeffs, ReflectionMode, BIParameters,
};
use opdc_core::sampling::Sampler;
use opdc_core::transforms::{
    chihara_polynomial_check, chihara_split, christoffel, rescale, sdg_step, AcForm, ThreeTermRecurrence,
};
use opdc_core::{Rational, ReflectionSequence, Result};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn sample() -> BIParameters {
    BIParameters::new(q("1"), q("2"), q("1/4"), q("1/3"))
}

/// Reflection parameters -> pencil -> Christoffel at λ+1 -> rescale, compared
/// with the complementary Bannai-Ito recurrence written down directly.
fn sdg_route(p: &BIParameters, n: usize) -> Result<(ThreeTermRecurrence, ThreeTermRecurrence)> {
    let seed = bi_seed(p)?;
    let a = bi_reflection(p, n, ReflectionMode::ClosedForm)?;
    let t = &seed.lambda_bi * &seed.lambda0;
    let sdg = sdg_step(&ReflectionSequence::explicit(a), &t, n)?;
    let s = rescale(&sdg, &seed.lambda_bi, &seed.sqrt_lambda_bi, &seed.lambda0)?;
    assert_eq!(s.chi, p.rho2);
    Ok((s.recurrence, cbi_coeffs(p, n)?.rec))
}

#[test]
fn sdg_image_is_complementary_bannai_ito() {
    let (via_sdg, direct) = sdg_route(&sample(), 12).unwrap();
    assert_eq!(via_sdg, direct);
    assert_eq!(direct.u[1], q("-234/53"));
    assert_eq!(direct.u[2], q("-9/106"));
}

#[test]
fn sdg_image_on_random_parameters() {
    let mut s = Sampler::new(11, 12);
    let mut checked = 0;
    for _ in 0..400 {
        let p = s.bi_parameters();
        if let Ok((via_sdg, direct)) = sdg_route(&p, 16) {
            assert_eq!(via_sdg, direct, "{p:?}");
            checked += 1;
        }
        if checked == 40 {
            break;
        }
    }
    assert_eq!(checked, 40);
}

#[test]
fn kernel_of_bannai_ito_is_complementary() {
    let p = sample();
    let bi = bi_coeffs(&p, 12).unwrap();
    let k = christoffel(&bi.rec, &p.rho1).unwrap();
    let cbi = cbi_coeffs(&p, 11).unwrap();
    assert_eq!(k.transformed, cbi.rec);
}

#[test]
fn wilson_quadratic_split_gives_complementary_bannai_ito() {
    let p = sample();
    let rw = rw_coeffs(&beta_map(&p), 8).unwrap();
    let cbi = cbi_coeffs(&p, 14).unwrap();
    assert_eq!(chihara_split(&rw.a, &rw.c, &p.rho2, 14).unwrap(), cbi.rec);

    // In y = -x^2 the Wilson data is an AC-form with theta = beta1^2 = rho2^2,
    // so chi = rho2 with alpha = c^2 = 0.
    let beta1_sq = beta_map(&p).beta1.square();
    let flipped = ThreeTermRecurrence::from_ac(AcForm {
        a: rw.a.clone(),
        c: rw.c.clone(),
        theta: beta1_sq.clone(),
    });
    let kernel = christoffel(&flipped, &beta1_sq).unwrap();
    let rep = chihara_polynomial_check(&flipped, &kernel.transformed, &q("0"), &q("0"), &p.rho2, 6).unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn worked_instance_numbers() {
    let p = sample();
    let a = bi_reflection(&p, 3, ReflectionMode::Recursive).unwrap();
    assert_eq!(a, vec![q("599/697"), q("-695/371"), q("19/17")]);
    assert_eq!(bi_seed(&p).unwrap().lambda0, q("-119/144"));
}

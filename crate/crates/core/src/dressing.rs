//! Finite-matrix Darboux transformations, quadratic relations between two
//! tridiagonal operators, 1-periodic dressing-chain steps for the pencil
//! `J(λ, x) = L + λM - xI`, and floating-point checks of pencil identities.
//!
//! Residuals of products of truncated matrices are measured on the leading
//! `(n - 4)×(n - 4)` block.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use serde::Serialize;

use crate::cmv::{build_lm, build_pencil_matrix, interior_residual, TridiagonalMatrix};
use crate::error::{Error, Result};
use crate::families::{cbi_coeffs, BIParameters};
use crate::linalg::symmetric_eigenvalues;
use crate::opuc::ReflectionSequence;
use crate::rational::Rational;

/// Rows/columns dropped from products of two banded truncations.
pub const INTERIOR_MARGIN: usize = 4;

/// How the two-operator notation `A - λB - xI` maps onto the pencil.
pub const SIGN_CONVENTION: &str = "J(lambda, x) = L + lambda*M - x*I, i.e. A - lambda*B - x*I with (A, B) = (L, -M)";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiMatrix {
    pub n: usize,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || off.len() + 1 != n {
            return Err(Error::InvalidDimension {
                requested: n,
                reason: "Jacobi matrix needs n diagonal and n-1 off-diagonal entries",
            });
        }
        Ok(JacobiMatrix { n, diag, off })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            m[(i, i)] = self.diag[i];
        }
        for (i, b) in self.off.iter().enumerate() {
            m[(i, i + 1)] = *b;
            m[(i + 1, i)] = *b;
        }
        m
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.to_dense())
    }
}

/// Lower bidiagonal factor with diagonal `diag` and subdiagonal `sub`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBidiagonal {
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
}

impl LowerBidiagonal {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.diag.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (i, s) in self.sub.iter().enumerate() {
            m[(i + 1, i)] = *s;
        }
        m
    }
}

/// `J = LL*` ↦ `J̃ = L*L`.
pub fn cholesky_darboux(j: &JacobiMatrix) -> Result<(JacobiMatrix, LowerBidiagonal)> {
    let n = j.n;
    let mut l = Vec::with_capacity(n);
    let mut m = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let pivot = if k == 0 { j.diag[0] } else { j.diag[k] - m[k - 1] * m[k - 1] };
        if !(pivot > 0.0) {
            return Err(Error::NotPositiveDefinite { index: k });
        }
        let lk = pivot.sqrt();
        l.push(lk);
        if k + 1 < n {
            m.push(j.off[k] / lk);
        }
    }
    let diag = (0..n)
        .map(|k| l[k] * l[k] + if k + 1 < n { m[k] * m[k] } else { 0.0 })
        .collect();
    let off = (0..n - 1).map(|k| m[k] * l[k + 1]).collect();
    Ok((JacobiMatrix::new(diag, off)?, LowerBidiagonal { diag: l, sub: m }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LuDarboux {
    /// Diagonal of `U` in `J - θI = LU`.
    pub pivots: Vec<f64>,
    /// Subdiagonal of the unit lower factor `L`.
    pub multipliers: Vec<f64>,
    /// `UL + θI`; its last diagonal entry is a truncation artifact.
    pub jt: TridiagonalMatrix,
}

/// `J - θI = LU` ↦ `UL + θI`.
pub fn lu_darboux(j: &JacobiMatrix, theta: f64) -> Result<LuDarboux> {
    let n = j.n;
    let scale = j.diag.iter().chain(&j.off).fold(theta.abs(), |acc, v| acc.max(v.abs())).max(1.0);
    let mut p = Vec::with_capacity(n);
    let mut ell = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let pk = if k == 0 {
            j.diag[0] - theta
        } else {
            j.diag[k] - theta - ell[k - 1] * j.off[k - 1]
        };
        if pk.abs() <= 1e-13 * scale {
            return Err(Error::SingularPivot { index: k });
        }
        p.push(pk);
        if k + 1 < n {
            ell.push(j.off[k] / pk);
        }
    }
    let diag = (0..n)
        .map(|k| theta + p[k] + if k + 1 < n { j.off[k] * ell[k] } else { 0.0 })
        .collect();
    let sup = j.off.clone();
    let sub = (0..n - 1).map(|k| p[k + 1] * ell[k]).collect();
    Ok(LuDarboux {
        pivots: p,
        multipliers: ell,
        jt: TridiagonalMatrix::new(diag, sup, sub)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticAlgebraSolution {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub xi4: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub zeta: f64,
    pub residual: f64,
}

impl QuadraticAlgebraSolution {
    pub fn coefficients(&self) -> [f64; 7] {
        [self.xi1, self.xi2, self.xi3, self.xi4, self.eta1, self.eta2, self.zeta]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticAlgebraReport {
    pub n: usize,
    pub interior: usize,
    /// Ascending.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub solutions: Vec<QuadraticAlgebraSolution>,
}

impl QuadraticAlgebraReport {
    /// Distance of the normalized `v` from the span of the solutions.
    pub fn distance_to_span(&self, v: &[f64; 7]) -> f64 {
        let v = DVector::from_row_slice(v);
        let v = &v / v.norm();
        let mut rest = v.clone();
        for s in &self.solutions {
            let b = DVector::from_row_slice(&s.coefficients());
            rest -= &b * b.dot(&v);
        }
        rest.norm()
    }

    pub fn contains(&self, v: &[f64; 7], tol: f64) -> bool {
        self.distance_to_span(v) < tol
    }
}

/// Relative singular-value cutoff of the numerical nullspace.
pub const QUAD_NULLSPACE_THRESHOLD: f64 = 1e-8;

fn interior_vec(x: &DMatrix<f64>, m: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            out.push(x[(i, j)]);
        }
    }
    out
}

fn quad_terms(a: &DMatrix<f64>, b: &DMatrix<f64>) -> [DMatrix<f64>; 7] {
    let n = a.nrows();
    [a * a, b * b, a * b, b * a, a.clone(), b.clone(), DMatrix::identity(n, n)]
}

/// Numerical nullspace of `ξ₁A² + ξ₂B² + ξ₃AB + ξ₄BA + η₁A + η₂B + ζI = 0`
/// on the interior block; an empty solution list means no relation.
pub fn quad_algebra_solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<QuadraticAlgebraReport> {
    let n = a.nrows();
    if n < 8 || a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::InvalidDimension {
            requested: n,
            reason: "quadratic algebra needs two square matrices of equal size >= 8",
        });
    }
    let m = n - INTERIOR_MARGIN;
    let terms = quad_terms(a, b);
    let cols: Vec<Vec<f64>> = terms.iter().map(|t| interior_vec(t, m)).collect();
    let sys = DMatrix::from_fn(m * m, 7, |i, j| cols[j][i]);
    let svd = SVD::new(sys, false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let threshold = QUAD_NULLSPACE_THRESHOLD * smax;
    let mut singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular_values.sort_by(f64::total_cmp);

    let mut solutions = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s >= threshold {
            continue;
        }
        let mut c: Vec<f64> = v_t.row(k).iter().copied().collect();
        canonical_sign(&mut c);
        let mut comb = DMatrix::zeros(n, n);
        for (ck, t) in c.iter().zip(&terms) {
            comb += t * *ck;
        }
        let residual = interior_residual(&comb, &DMatrix::zeros(n, n), m);
        solutions.push(QuadraticAlgebraSolution {
            xi1: c[0],
            xi2: c[1],
            xi3: c[2],
            xi4: c[3],
            eta1: c[4],
            eta2: c[5],
            zeta: c[6],
            residual,
        });
    }
    solutions.sort_by(|x, y| x.residual.total_cmp(&y.residual));
    Ok(QuadraticAlgebraReport {
        n,
        interior: m,
        singular_values,
        threshold,
        solutions,
    })
}

/// Flip so that the first entry of magnitude above 1e-12 is positive.
fn canonical_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStepSolution {
    pub lambda_t: f64,
    pub x_t: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    /// `‖J̃D - KJ‖_max` on the interior block.
    pub residual: f64,
    /// `D` is a multiple of `J(λ, x)`.
    pub trivial_flag: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticReference {
    /// `x²(λ̃ - λ)(λ̃ + 3λ)`
    pub discriminant: f64,
    pub roots: Vec<f64>,
    /// Second-smallest relative singular value of the linear system at each root.
    pub second_singular_value: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStepReport {
    pub convention: &'static str,
    pub lambda: f64,
    pub x: f64,
    pub lambda_t: f64,
    pub n: usize,
    pub interior: usize,
    /// Ordered by residual, then coefficients.
    pub solutions: Vec<ChainStepSolution>,
    /// Values of `x̃` where a solution other than `D ∝ J` was found.
    pub nontrivial_x_t: Vec<f64>,
    pub reference_quadratic: QuadraticReference,
    /// `±sqrt(λ̃(x² + λλ̃ - 1)/λ - λλ̃ + 1)`, where the five basis relations
    /// lose rank.
    pub rank_condition_roots: Vec<f64>,
}

/// Relative singular value below which `x̃` is accepted as a rank drop.
pub const CHAIN_ACCEPT: f64 = 1e-7;
const CHAIN_GRID: usize = 2001;

/// Linear system `J̃D - KJ = 0` in `(r0, r1, r2, s0, s1, s2)` as
/// `P + x̃ Q`, columns being vectorized interior blocks.
struct ChainSystem {
    p: DMatrix<f64>,
    q: DMatrix<f64>,
    l: DMatrix<f64>,
    m: DMatrix<f64>,
    j: DMatrix<f64>,
    jt0: DMatrix<f64>,
    interior: usize,
}

impl ChainSystem {
    fn new(l: DMatrix<f64>, m: DMatrix<f64>, lambda: f64, x: f64, lambda_t: f64) -> Self {
        let n = l.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        let j = &l + &m * lambda - &id * x;
        let jt0 = &l + &m * lambda_t;
        let interior = n - INTERIOR_MARGIN;
        let p_cols = [
            jt0.clone(),
            &jt0 * &l,
            &jt0 * &m,
            -j.clone(),
            -(&l * &j),
            -(&m * &j),
        ];
        let zero = DMatrix::<f64>::zeros(n, n);
        let q_cols = [-id.clone(), -l.clone(), -m.clone(), zero.clone(), zero.clone(), zero];
        let stack = |cols: &[DMatrix<f64>; 6]| {
            let v: Vec<Vec<f64>> = cols.iter().map(|c| interior_vec(c, interior)).collect();
            DMatrix::from_fn(interior * interior, 6, |i, k| v[k][i])
        };
        ChainSystem {
            p: stack(&p_cols),
            q: stack(&q_cols),
            l,
            m,
            j,
            jt0,
            interior,
        }
    }

    fn system(&self, x_t: f64) -> DMatrix<f64> {
        &self.p + &self.q * x_t
    }

    /// Ascending singular values and matching right singular vectors.
    fn svd(&self, x_t: f64) -> (Vec<f64>, Vec<DVector<f64>>) {
        let svd = SVD::new(self.system(x_t), false, true);
        let v_t = svd.v_t.expect("requested");
        let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
        idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let sv = idx.iter().map(|&k| svd.singular_values[k]).collect();
        let vecs = idx.iter().map(|&k| v_t.row(k).transpose()).collect();
        (sv, vecs)
    }

    /// Second-smallest singular value relative to the largest.
    fn second_rel(&self, x_t: f64) -> f64 {
        let (sv, _) = self.svd(x_t);
        sv[1] / sv[sv.len() - 1]
    }

    /// Cheap version through the 6×6 Gram matrix, for grid scans only.
    fn second_rel_gram(&self, ptp: &DMatrix<f64>, cross: &DMatrix<f64>, qtq: &DMatrix<f64>, x_t: f64) -> f64 {
        let g = ptp + cross * x_t + qtq * (x_t * x_t);
        let mut ev: Vec<f64> = SymmetricEigen::new(g).eigenvalues.iter().map(|e| e.max(0.0)).collect();
        ev.sort_by(f64::total_cmp);
        (ev[1] / ev[5]).sqrt()
    }

    fn residual(&self, c: &[f64; 6], x_t: f64) -> f64 {
        let n = self.l.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        let jt = &self.jt0 - &id * x_t;
        let d = &id * c[0] + &self.l * c[1] + &self.m * c[2];
        let k = &id * c[3] + &self.l * c[4] + &self.m * c[5];
        interior_residual(&(&jt * &d), &(&k * &self.j), self.interior)
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd { c } else { d }
}

fn reference_quadratic(lambda: f64, x: f64, lambda_t: f64) -> (f64, Vec<f64>) {
    let disc = x * x * (lambda_t - lambda) * (lambda_t + 3.0 * lambda);
    let roots = if disc >= 0.0 {
        let s = disc.sqrt();
        let mid = x * (lambda + lambda_t);
        vec![(mid - s) / (2.0 * lambda), (mid + s) / (2.0 * lambda)]
    } else {
        Vec::new()
    };
    (disc, roots)
}

fn rank_condition_roots(lambda: f64, x: f64, lambda_t: f64) -> Vec<f64> {
    let sq = lambda_t * (x * x + lambda * lambda_t - 1.0) / lambda - lambda * lambda_t + 1.0;
    if sq < 0.0 {
        Vec::new()
    } else {
        vec![-sq.sqrt(), sq.sqrt()]
    }
}

/// Searches for `(x̃, D, K)` with `J̃D = KJ`, `J̃ = L + λ̃M - x̃I` and
/// `D, K` in the span of `{I, L, M}`, for a fixed `λ̃`.
///
/// For each `x̃` the relation is linear in `(r0, r1, r2, s0, s1, s2)`; the
/// choice `D = J`, `K = J̃` always solves it. Other solutions exist only
/// where the system loses one more rank, which is located by scanning the
/// second-smallest singular value over `x̃` and refining local minima.
pub fn chain_step(
    seq: &ReflectionSequence,
    lambda: f64,
    x: f64,
    lambda_t: f64,
    n: usize,
) -> Result<ChainStepReport> {
    if lambda == 0.0 || !lambda.is_finite() || !x.is_finite() || !lambda_t.is_finite() {
        return Err(Error::NonFinite("chain_step needs finite lambda != 0, x, lambda_t"));
    }
    let n = n.max(INTERIOR_MARGIN + 4);
    let (l, m) = build_lm(seq, n)?;
    let n = l.n;
    let sys = ChainSystem::new(l.entries, m.entries, lambda, x, lambda_t);
    let ptp = sys.p.transpose() * &sys.p;
    let cross = sys.p.transpose() * &sys.q + sys.q.transpose() * &sys.p;
    let qtq = sys.q.transpose() * &sys.q;

    let (discriminant, reference_roots) = reference_quadratic(lambda, x, lambda_t);
    let radius = 2.0 + 2.0 * ((1.0 + (lambda_t / lambda).abs()) * (x * x + (lambda * lambda_t).abs() + 1.0)).sqrt();
    let step = 2.0 * radius / (CHAIN_GRID - 1) as f64;
    let grid: Vec<f64> = (0..CHAIN_GRID).map(|i| -radius + step * i as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| sys.second_rel_gram(&ptp, &cross, &qtq, t)).collect();

    let mut accepted: Vec<f64> = Vec::new();
    for i in 1..CHAIN_GRID - 1 {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
            let t = golden_min(|t| sys.second_rel(t), grid[i - 1], grid[i + 1]);
            if sys.second_rel(t) < CHAIN_ACCEPT && !accepted.iter().any(|a| (a - t).abs() < 1e-9 * (1.0 + t.abs())) {
                accepted.push(t);
            }
        }
    }
    accepted.sort_by(f64::total_cmp);

    let trivial = |x_t: f64| -> ChainStepSolution {
        let mut c = [-x, 1.0, lambda, -x_t, 1.0, lambda_t];
        let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        c.iter_mut().for_each(|v| *v /= norm);
        make_solution(&sys, lambda_t, x_t, c, lambda, x)
    };

    let mut solutions = vec![trivial(x)];
    for r in &reference_roots {
        solutions.push(trivial(*r));
    }
    let mut nontrivial_x_t = Vec::new();
    for &x_t in &accepted {
        let (sv, vecs) = sys.svd(x_t);
        let smax = sv[sv.len() - 1];
        let t = DVector::from_row_slice(&[-x, 1.0, lambda, -x_t, 1.0, lambda_t]);
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for (s, v) in sv.iter().zip(&vecs) {
            if *s >= CHAIN_ACCEPT * smax {
                break;
            }
            // remove the D ∝ J direction through its r1 component
            let mut w = v - &t * v[1];
            for b in &basis {
                w -= b * b.dot(&w);
            }
            let norm = w.norm();
            if norm > 1e-6 {
                basis.push(w / norm);
            }
        }
        let mut found = false;
        for w in basis {
            let rn = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            let scale = if rn > 1e-9 { rn } else { 1.0 };
            let mut c = [0.0; 6];
            for k in 0..6 {
                c[k] = w[k] / scale;
            }
            canonical_sign(&mut c);
            let sol = make_solution(&sys, lambda_t, x_t, c, lambda, x);
            found |= !sol.trivial_flag;
            solutions.push(sol);
        }
        if found {
            nontrivial_x_t.push(x_t);
        }
        solutions.push(trivial(x_t));
    }
    solutions.sort_by(|a, b| {
        a.residual
            .total_cmp(&b.residual)
            .then(a.x_t.total_cmp(&b.x_t))
            .then(a.r0.total_cmp(&b.r0))
            .then(a.r1.total_cmp(&b.r1))
            .then(a.r2.total_cmp(&b.r2))
    });
    let best = solutions.first().map_or(f64::INFINITY, |s| s.residual);
    if best > 1e-6 {
        return Err(Error::NoSolution { best_residual: best });
    }
    let second_singular_value = reference_roots.iter().map(|&r| sys.second_rel(r)).collect();
    Ok(ChainStepReport {
        convention: SIGN_CONVENTION,
        lambda,
        x,
        lambda_t,
        n,
        interior: sys.interior,
        solutions,
        nontrivial_x_t,
        reference_quadratic: QuadraticReference {
            discriminant,
            roots: reference_roots,
            second_singular_value,
        },
        rank_condition_roots: rank_condition_roots(lambda, x, lambda_t),
    })
}

fn make_solution(sys: &ChainSystem, lambda_t: f64, x_t: f64, c: [f64; 6], lambda: f64, x: f64) -> ChainStepSolution {
    // (r1, r2, r0) ∝ (1, λ, -x)
    let dir = [1.0, lambda, -x];
    let r = [c[1], c[2], c[0]];
    let dn = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let dot: f64 = dir.iter().zip(&r).map(|(a, b)| a * b).sum();
    let trivial_flag = rn > 0.0 && (1.0 - (dot / (dn * rn)).abs()) < 1e-10;
    ChainStepSolution {
        lambda_t,
        x_t,
        r0: c[0],
        r1: c[1],
        r2: c[2],
        s0: c[3],
        s1: c[4],
        s2: c[5],
        residual: sys.residual(&c, x_t),
        trivial_flag,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub n: usize,
    pub interior: usize,
    pub max_residual: f64,
    pub pass: bool,
    pub tolerance: f64,
    /// `false` for entries that are evaluated only to be reported.
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProgressionFit {
    pub count: usize,
    pub offset: f64,
    pub step: f64,
    pub rms_residual: f64,
}

/// Heuristic fit of a truncated complementary Bannai-Ito spectrum to two
/// arithmetic progressions, one per sign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridDiagnostic {
    pub n: usize,
    pub positive: Option<ProgressionFit>,
    pub negative: Option<ProgressionFit>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub convention: &'static str,
    pub lambda: f64,
    pub lambda0: f64,
    pub checks: Vec<IdentityCheck>,
    pub grid: Option<GridDiagnostic>,
    pub pass: bool,
}

pub const TOL_INVOLUTION: f64 = 1e-12;
pub const TOL_ANTICOMMUTATOR: f64 = 1e-12;
pub const TOL_PENCIL_SQUARE: f64 = 1e-11;
pub const TOL_EXPANSION: f64 = 1e-12;

/// Matrix identities of the pencil on the interior block:
/// `L² = M² = I`, `K(λ)K(-λ) + K(-λ)K(λ) = 2(1-λ²)I`, and for `t = λλ₀`
/// `K(t)² = (1+t²)I + t(LM+ML) = (1-t)²I + t(L+M)²`, which for `λ > 0`
/// equals `λ[χ²I + λ₀(L+M)²]` with `χ = λ₀√λ - 1/√λ`. Two wrong
/// variants (`1/λ` prefactor, `λ` in place of `λλ₀`) are evaluated and
/// reported without being asserted.
pub fn verify_identities(
    seq: &ReflectionSequence,
    lambda: f64,
    lambda0: f64,
    n: usize,
    bi: Option<&BIParameters>,
) -> Result<IdentityReport> {
    if !lambda.is_finite() || !lambda0.is_finite() {
        return Err(Error::NonFinite("verify_identities"));
    }
    let (l, m) = build_lm(seq, n.max(INTERIOR_MARGIN + 2))?;
    let n = l.n;
    let interior = n - INTERIOR_MARGIN;
    let (l, m) = (l.entries, m.entries);
    let id = DMatrix::<f64>::identity(n, n);
    let pencil = |t: f64| build_pencil_matrix(seq, t, 0.0, n).map(|k| k.to_dense());
    let mut checks = Vec::new();
    let mut push = |name: &str, lhs: &DMatrix<f64>, rhs: &DMatrix<f64>, tol: f64, asserted: bool| {
        let r = interior_residual(lhs, rhs, interior);
        checks.push(IdentityCheck {
            identity: name.to_string(),
            n,
            interior,
            max_residual: r,
            pass: r < tol,
            tolerance: tol,
            asserted,
        });
    };

    push("involution-L", &(&l * &l), &id, TOL_INVOLUTION, true);
    push("involution-M", &(&m * &m), &id, TOL_INVOLUTION, true);

    let kp = pencil(lambda)?;
    let km = pencil(-lambda)?;
    let anti = &kp * &km + &km * &kp;
    push("anticommutator", &anti, &(&id * (2.0 * (1.0 - lambda * lambda))), TOL_ANTICOMMUTATOR, true);

    let t = lambda * lambda0;
    let kt = pencil(t)?;
    let k2 = &kt * &kt;
    let lpm = &l + &m;
    let lpm2 = &lpm * &lpm;
    let expansion = &id * (1.0 + t * t) + (&l * &m + &m * &l) * t;
    push("pencil-square-expansion", &k2, &expansion, TOL_EXPANSION, true);
    let corrected = &id * ((1.0 - t) * (1.0 - t)) + &lpm2 * t;
    push("pencil-square", &k2, &corrected, TOL_PENCIL_SQUARE, true);
    let variant_first = &id * ((1.0 - t) * (1.0 - t)) + &lpm2 * lambda;
    push("pencil-square-variant-first-line", &k2, &variant_first, TOL_PENCIL_SQUARE, false);
    if lambda > 0.0 {
        let s = lambda.sqrt();
        let chi = lambda0 * s - 1.0 / s;
        let inner = &id * (chi * chi) + &lpm2 * lambda0;
        push("pencil-square-chi", &k2, &(&inner * lambda), TOL_PENCIL_SQUARE, true);
        push("pencil-square-variant-chi", &k2, &(&inner / lambda), TOL_PENCIL_SQUARE, false);
    }

    let grid = match bi {
        Some(p) => Some(grid_diagnostic(p, n)?),
        None => None,
    };
    let pass = checks.iter().filter(|c| c.asserted).all(|c| c.pass);
    Ok(IdentityReport {
        convention: SIGN_CONVENTION,
        lambda,
        lambda0,
        checks,
        grid,
        pass,
    })
}

fn fit_progression(values: &[f64]) -> Option<ProgressionFit> {
    let k = values.len();
    if k < 2 {
        return None;
    }
    let kf = k as f64;
    let mean_i = (kf - 1.0) / 2.0;
    let mean_v = values.iter().sum::<f64>() / kf;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, v) in values.iter().enumerate() {
        let di = i as f64 - mean_i;
        sxy += di * (v - mean_v);
        sxx += di * di;
    }
    let step = sxy / sxx;
    let offset = mean_v - step * mean_i;
    let rms = (values
        .iter()
        .enumerate()
        .map(|(i, v)| (v - offset - step * i as f64).powi(2))
        .sum::<f64>()
        / kf)
        .sqrt();
    Some(ProgressionFit {
        count: k,
        offset,
        step,
        rms_residual: rms,
    })
}

/// Eigenvalues of the symmetrized complementary Bannai-Ito truncation,
/// split by sign; only the half of each group closest to zero is fitted.
pub fn grid_diagnostic(p: &BIParameters, n: usize) -> Result<GridDiagnostic> {
    let cbi = cbi_coeffs(p, n)?;
    let v = &cbi.rec.u;
    if let Some(k) = (1..n).find(|&k| !v[k].is_positive()) {
        return Ok(GridDiagnostic {
            n,
            positive: None,
            negative: None,
            note: format!("v_{k} <= 0: truncation is not a Jacobi matrix"),
        });
    }
    let diag: Vec<f64> = cbi.rec.b.iter().map(Rational::to_f64).collect();
    let off: Vec<f64> = v[1..].iter().map(|x| x.to_f64().sqrt()).collect();
    let ev = JacobiMatrix::new(diag, off)?.eigenvalues();
    let mut pos: Vec<f64> = ev.iter().copied().filter(|x| *x >= 0.0).collect();
    let mut neg: Vec<f64> = ev.iter().copied().filter(|x| *x < 0.0).map(|x| -x).collect();
    pos.sort_by(f64::total_cmp);
    neg.sort_by(f64::total_cmp);
    let half = |xs: &[f64]| xs[..xs.len().div_ceil(2)].to_vec();
    Ok(GridDiagnostic {
        n,
        positive: fit_progression(&half(&pos)),
        negative: fit_progression(&half(&neg)).map(|f| ProgressionFit {
            offset: -f.offset,
            step: -f.step,
            ..f
        }),
        note: "heuristic: least-squares line through the smaller half of each sign group".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralMappingGap {
    pub n: usize,
    /// Median over eigenvalues `x` of `K(λλ₀)` of
    /// `min_μ |x² - λ(χ² + λ₀μ²)|`, `μ` ranging over eigenvalues of `L + M`.
    pub median_gap: f64,
    pub max_gap: f64,
}

/// Needs a classical sequence (both matrices symmetric) and `λ > 0`.
pub fn spectral_mapping_gap(seq: &ReflectionSequence, lambda: f64, lambda0: f64, n: usize) -> Result<SpectralMappingGap> {
    if !(lambda > 0.0) {
        return Err(Error::NonFinite("spectral mapping needs lambda > 0"));
    }
    let (l, m) = build_lm(seq, n)?;
    let n = l.n;
    let a = seq.prefix(n)?;
    if let Some(index) = a.iter().position(|x| x.abs() >= Rational::one()) {
        return Err(Error::DegenerateReflection { index });
    }
    let s = lambda.sqrt();
    let chi = lambda0 * s - 1.0 / s;
    let k = build_pencil_matrix(seq, lambda * lambda0, 0.0, n)?.to_dense();
    let xs = symmetric_eigenvalues(&k);
    let mus = symmetric_eigenvalues(&(&l.entries + &m.entries));
    let targets: Vec<f64> = mus.iter().map(|mu| lambda * (chi * chi + lambda0 * mu * mu)).collect();
    let mut gaps: Vec<f64> = xs
        .iter()
        .map(|x| targets.iter().map(|t| (x * x - t).abs()).fold(f64::INFINITY, f64::min))
        .collect();
    gaps.sort_by(f64::total_cmp);
    Ok(SpectralMappingGap {
        n,
        median_gap: gaps[gaps.len() / 2],
        max_gap: gaps[gaps.len() - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::transforms::{christoffel, ThreeTermRecurrence};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn seq(list: &str) -> ReflectionSequence {
        ReflectionSequence::explicit(Rational::parse_list(list).unwrap())
    }

    fn classical(n: usize) -> ReflectionSequence {
        // deterministic |a_k| < 1
        let a = (0..n)
            .map(|k| Rational::new(((k * 7 + 3) % 11) as i64 - 5, 7).unwrap())
            .collect();
        ReflectionSequence::explicit(a)
    }

    #[test]
    fn cholesky_worked_example() {
        let j = JacobiMatrix::new(vec![2.0, 2.0], vec![1.0]).unwrap();
        let (jt, l) = cholesky_darboux(&j).unwrap();
        assert!(max_abs_diff(&jt.diag, &[2.5, 1.5]) < 1e-15);
        assert!((jt.off[0] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let ld = l.to_dense();
        assert!((&ld * ld.transpose() - j.to_dense()).amax() < 1e-12);
        assert!(max_abs_diff(&jt.eigenvalues(), &[1.0, 3.0]) < 1e-12);
        assert!(max_abs_diff(&j.eigenvalues(), &[1.0, 3.0]) < 1e-12);
    }

    #[test]
    fn cholesky_identity_and_failure() {
        let j = JacobiMatrix::new(vec![1.0; 4], vec![0.0; 3]).unwrap();
        let (jt, _) = cholesky_darboux(&j).unwrap();
        assert_eq!(jt, j);
        let bad = JacobiMatrix::new(vec![1.0, 1.0], vec![2.0]).unwrap();
        assert_eq!(cholesky_darboux(&bad).unwrap_err(), Error::NotPositiveDefinite { index: 1 });
    }

    #[test]
    fn lu_trivial_and_singular() {
        let j = JacobiMatrix::new(vec![1.0, 2.0], vec![0.0]).unwrap();
        let r = lu_darboux(&j, 0.0).unwrap();
        assert_eq!(r.jt.diag, vec![1.0, 2.0]);
        assert_eq!(r.jt.off_products(), vec![0.0]);
        let j = JacobiMatrix::new(vec![2.0, 2.0], vec![1.0]).unwrap();
        assert_eq!(lu_darboux(&j, 2.0).unwrap_err(), Error::SingularPivot { index: 0 });
    }

    #[test]
    fn lu_matches_christoffel() {
        let n = 12;
        let j = JacobiMatrix::new(vec![0.0; n], vec![0.5; n - 1]).unwrap();
        let rec = ThreeTermRecurrence::new(vec![q("0"); n], vec![q("1/4"); n]);
        let theta = q("-3/2");
        let r = lu_darboux(&j, theta.to_f64()).unwrap();
        let c = christoffel(&rec, &theta).unwrap();
        for k in 0..n - 1 {
            assert!((r.jt.diag[k] - c.transformed.b[k].to_f64()).abs() < 1e-12, "diag {k}");
            if k + 1 < n - 1 {
                let p = r.jt.off_products()[k];
                assert!((p - c.transformed.u[k + 1].to_f64()).abs() < 1e-12, "off {k}");
            }
        }
    }

    #[test]
    fn quad_algebra_on_l_m() {
        let (l, m) = build_lm(&classical(16), 16).unwrap();
        let rep = quad_algebra_solve(&l.entries, &m.entries).unwrap();
        assert!(rep.solutions.len() >= 2);
        assert!(rep.contains(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0], 1e-8));
        assert!(rep.contains(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0], 1e-8));
        assert!(rep.solutions.iter().all(|s| s.residual < 1e-10));
    }

    #[test]
    fn quad_algebra_free_jacobi_with_identity() {
        let n = 16;
        let a = JacobiMatrix::new(vec![0.0; n], vec![1.0; n - 1]).unwrap().to_dense();
        let rep = quad_algebra_solve(&a, &DMatrix::identity(n, n)).unwrap();
        assert_eq!(rep.solutions.len(), 4);
    }

    #[test]
    fn quad_algebra_random_pair_is_empty() {
        let n = 14;
        let mut s = crate::sampling::Sampler::new(3, 20);
        let mut jac = || {
            let d: Vec<f64> = (0..n).map(|_| s.f64_in(-1.0, 1.0)).collect();
            let o: Vec<f64> = (0..n - 1).map(|_| s.f64_in(0.2, 1.0)).collect();
            JacobiMatrix::new(d, o).unwrap().to_dense()
        };
        let (a, b) = (jac(), jac());
        let rep = quad_algebra_solve(&a, &b).unwrap();
        assert!(rep.solutions.is_empty());
        assert!(rep.singular_values[0] > 1e-6);
    }

    #[test]
    fn chain_trivial_identity_at_equal_lambda() {
        let s = classical(16);
        let rep = chain_step(&s, 0.7, 0.3, 0.7, 16).unwrap();
        assert!(rep.solutions.iter().all(|x| x.residual < 1e-10));
        let ident = rep
            .solutions
            .iter()
            .find(|x| (x.x_t - 0.3).abs() < 1e-9 && !x.trivial_flag)
            .expect("identity solution");
        assert!((ident.r0 - 1.0).abs() < 1e-8 && ident.r1.abs() < 1e-8 && ident.r2.abs() < 1e-8);
        assert!((ident.s0 - 1.0).abs() < 1e-8 && ident.s1.abs() < 1e-8 && ident.s2.abs() < 1e-8);
        assert!(rep.solutions.iter().any(|x| x.trivial_flag));
    }

    #[test]
    fn chain_nontrivial_matches_rank_condition() {
        let s = classical(20);
        let (lambda, x, lt) = (0.8, 0.6, 1.7);
        let rep = chain_step(&s, lambda, x, lt, 20).unwrap();
        assert_eq!(rep.rank_condition_roots.len(), 2);
        assert_eq!(rep.nontrivial_x_t.len(), 2);
        for (a, b) in rep.nontrivial_x_t.iter().zip(&rep.rank_condition_roots) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
        for sol in rep.solutions.iter().filter(|s| !s.trivial_flag) {
            assert!(sol.residual < 1e-9);
        }
        // the quadratic's roots leave only the trivial solution
        assert!(rep.reference_quadratic.second_singular_value.iter().all(|v| *v > 1e-6));
    }

    #[test]
    fn identities_free_case() {
        let s = ReflectionSequence::explicit(vec![Rational::zero(); 64]);
        let rep = verify_identities(&s, 0.5, 1.0, 64, None).unwrap();
        let anti = rep.checks.iter().find(|c| c.identity == "anticommutator").unwrap();
        assert!(anti.max_residual < 1e-14);
        assert!(rep.pass);
    }

    #[test]
    fn identities_report_typo() {
        let s = classical(64);
        let rep = verify_identities(&s, 1.3, 0.6, 64, None).unwrap();
        assert!(rep.pass, "{:?}", rep.checks);
        for c in &rep.checks {
            if c.identity.starts_with("involution") {
                assert!(c.max_residual < 1e-13);
            }
            if !c.asserted {
                assert!(c.max_residual > 1e-3, "{}", c.identity);
            }
        }
    }

    #[test]
    fn identities_degenerate() {
        assert_eq!(
            verify_identities(&seq("0,1,0,0,0,0,0,0"), 0.5, 1.0, 8, None).unwrap_err(),
            Error::DegenerateReflection { index: 1 }
        );
    }

    #[test]
    fn spectral_mapping_improves() {
        let a: Vec<Rational> = (0..128).map(|k| if k % 2 == 0 { q("1/3") } else { q("-1/5") }).collect();
        let s = ReflectionSequence::explicit(a);
        let g64 = spectral_mapping_gap(&s, 1.5, 0.7, 64).unwrap();
        let g128 = spectral_mapping_gap(&s, 1.5, 0.7, 128).unwrap();
        assert!(g128.median_gap < g64.median_gap, "{g64:?} {g128:?}");
    }

    #[test]
    fn grid_diagnostic_runs() {
        let p = BIParameters::new(q("1"), q("2"), q("1/4"), q("1/3"));
        let g = grid_diagnostic(&p, 40).unwrap();
        assert!(g.positive.is_some() || g.note.contains("<= 0"));
    }
}

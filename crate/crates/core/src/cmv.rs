//! The block factors `L`, `M`, the CMV matrix `U = LM`, and the tridiagonal
//! pencil `K(λ) = L + λM`.
//!
//! Truncations are leading `n×n` blocks of the semi-infinite matrices. For
//! `|a_k| > 1` the 2×2 blocks pick up the sign `ε_k = -1` below the diagonal,
//! so `K(λ)` is only symmetric in the classical regime.

use nalgebra::DMatrix;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::opuc::{epsilon, reflection_at, rsq, ReflectionSequence};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TridiagonalMatrix {
    pub n: usize,
    pub diag: Vec<f64>,
    #[serde(rename = "super")]
    pub sup: Vec<f64>,
    pub sub: Vec<f64>,
    /// Trailing rows whose entries are unreliable in products.
    pub interior_margin: usize,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, sup: Vec<f64>, sub: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sup.len() != n - 1 || sub.len() != n - 1 {
            return Err(Error::InvalidDimension {
                requested: n,
                reason: "tridiagonal needs n diagonal and n-1 off-diagonal entries",
            });
        }
        Ok(TridiagonalMatrix {
            n,
            diag,
            sup,
            sub,
            interior_margin: 2,
        })
    }

    pub fn symmetric(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        let sub = off.clone();
        TridiagonalMatrix::new(diag, off, sub)
    }

    pub fn is_symmetric(&self) -> bool {
        self.sup == self.sub
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            m[(i, i)] = self.diag[i];
        }
        for i in 0..self.n - 1 {
            m[(i, i + 1)] = self.sup[i];
            m[(i + 1, i)] = self.sub[i];
        }
        m
    }

    /// Products `super_k * sub_k`, the `u_{k+1}` of the monic recurrence.
    pub fn off_products(&self) -> Vec<f64> {
        self.sup.iter().zip(&self.sub).map(|(s, t)| s * t).collect()
    }

    /// Symmetric matrix with the same diagonal and off-diagonal
    /// `sqrt(super_k * sub_k)`; requires positive products.
    pub fn symmetrized(&self) -> Option<TridiagonalMatrix> {
        let prods = self.off_products();
        if prods.iter().any(|p| *p <= 0.0) {
            return None;
        }
        let off: Vec<f64> = prods.iter().map(|p| p.sqrt()).collect();
        let mut out = TridiagonalMatrix::symmetric(self.diag.clone(), off).ok()?;
        out.interior_margin = self.interior_margin;
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockKind {
    L,
    M,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReflectionMatrix {
    pub n: usize,
    pub kind: BlockKind,
    pub entries: DMatrix<f64>,
}

impl Serialize for BlockReflectionMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BlockReflectionMatrix", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("entries", &dense_rows(&self.entries))?;
        st.end()
    }
}

/// Row-major nested vectors.
pub fn dense_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn check_nondegenerate(a: &[Rational]) -> Result<()> {
    let one = Rational::one();
    match a.iter().position(|x| x.abs() == one) {
        Some(index) => Err(Error::DegenerateReflection { index }),
        None => Ok(()),
    }
}

/// Writes the block `[[a, r], [ε r, -a]]` at rows `k, k+1`, cut at `n`.
fn put_block(m: &mut DMatrix<f64>, k: usize, a: &Rational, scale: f64) {
    let n = m.nrows();
    let af = a.to_f64();
    m[(k, k)] = scale * af;
    if k + 1 < n {
        let r = rsq(a).to_f64().sqrt();
        m[(k, k + 1)] = scale * r;
        m[(k + 1, k)] = scale * f64::from(epsilon(a)) * r;
        m[(k + 1, k + 1)] = -scale * af;
    }
}

fn block_matrix(a: &[Rational], n: usize, kind: BlockKind) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let start = match kind {
        BlockKind::L => 0,
        BlockKind::M => {
            m[(0, 0)] = 1.0;
            1
        }
    };
    for k in (start..n).step_by(2) {
        put_block(&mut m, k, &a[k], 1.0);
    }
    m
}

/// Requested size rounded up to an even dimension, at least 2.
pub fn lm_dimension(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidDimension {
            requested: n,
            reason: "L and M need n >= 2",
        });
    }
    Ok(n + n % 2)
}

/// `n×n` truncations of `L` and `M`; `n` is rounded up to even.
pub fn build_lm(seq: &ReflectionSequence, n: usize) -> Result<(BlockReflectionMatrix, BlockReflectionMatrix)> {
    let n = lm_dimension(n)?;
    let a = seq.prefix(n)?;
    check_nondegenerate(&a)?;
    Ok((
        BlockReflectionMatrix {
            n,
            kind: BlockKind::L,
            entries: block_matrix(&a, n, BlockKind::L),
        },
        BlockReflectionMatrix {
            n,
            kind: BlockKind::M,
            entries: block_matrix(&a, n, BlockKind::M),
        },
    ))
}

/// `U = LM`.
pub fn build_cmv(seq: &ReflectionSequence, n: usize) -> Result<DMatrix<f64>> {
    let (l, m) = build_lm(seq, n)?;
    Ok(&l.entries * &m.entries)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilRecurrence {
    pub b: Vec<Rational>,
    pub u: Vec<Rational>,
    pub lambda: Rational,
}

/// Exact monic recurrence of `K(λ)`:
/// `b_k = a_k - λa_{k-1}` (even), `λa_k - a_{k-1}` (odd);
/// `u_k = λ²(1 - a_{k-1}²)` (even), `1 - a_{k-1}²` (odd).
pub fn pencil_recurrence(seq: &ReflectionSequence, lambda: &Rational, n: usize) -> Result<PencilRecurrence> {
    let a = seq.prefix(n)?;
    let one = Rational::one();
    let lsq = lambda.square();
    let mut b = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    for k in 0..n {
        let prev = reflection_at(&a, k as isize - 1);
        let base = &one - &prev.square();
        if k % 2 == 0 {
            b.push(&a[k] - &(lambda * &prev));
            u.push(&lsq * &base);
        } else {
            b.push(&(lambda * &a[k]) - &prev);
            u.push(base);
        }
    }
    Ok(PencilRecurrence {
        b,
        u,
        lambda: lambda.clone(),
    })
}

impl PencilRecurrence {
    pub fn as_recurrence(&self) -> crate::transforms::ThreeTermRecurrence {
        crate::transforms::ThreeTermRecurrence::new(self.b.clone(), self.u.clone())
    }
}

/// `K(λ) - xI` as a tridiagonal matrix; off-diagonals `r_0, λr_1, r_2, ...`
/// above and the same times `ε_k` below.
pub fn build_pencil_matrix(seq: &ReflectionSequence, lambda: f64, x: f64, n: usize) -> Result<TridiagonalMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension {
            requested: n,
            reason: "pencil needs n >= 1",
        });
    }
    let a = seq.prefix(n)?;
    check_nondegenerate(&a[..n - 1])?;
    let af: Vec<f64> = a.iter().map(Rational::to_f64).collect();
    let at = |k: isize| if k < 0 { -1.0 } else { af[k as usize] };
    let diag = (0..n)
        .map(|k| {
            let prev = at(k as isize - 1);
            let b = if k % 2 == 0 { af[k] - lambda * prev } else { lambda * af[k] - prev };
            b - x
        })
        .collect();
    let mut sup = Vec::with_capacity(n - 1);
    let mut sub = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let w = if k % 2 == 0 { 1.0 } else { lambda };
        let r = rsq(&a[k]).to_f64().sqrt();
        sup.push(w * r);
        sub.push(w * f64::from(epsilon(&a[k])) * r);
    }
    TridiagonalMatrix::new(diag, sup, sub)
}

/// Exact squared-quantity mirror of [`build_pencil_matrix`]: the diagonal
/// `b_k - x` and the products `super_k * sub_k`, both rational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactPencilMirror {
    pub diag: Vec<Rational>,
    pub off_products: Vec<Rational>,
}

pub fn pencil_mirror(seq: &ReflectionSequence, lambda: &Rational, x: &Rational, n: usize) -> Result<ExactPencilMirror> {
    let a = seq.prefix(n)?;
    let lsq = lambda.square();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let prev = reflection_at(&a, k as isize - 1);
        let b = if k % 2 == 0 { &a[k] - &(lambda * &prev) } else { &(lambda * &a[k]) - &prev };
        diag.push(&b - x);
    }
    let off_products = (0..n.saturating_sub(1))
        .map(|k| {
            // ε_k r_k² = 1 - a_k²
            let e = Rational::int(i64::from(epsilon(&a[k])));
            let p = &e * &rsq(&a[k]);
            if k % 2 == 0 { p } else { &lsq * &p }
        })
        .collect();
    Ok(ExactPencilMirror { diag, off_products })
}

/// Leading `m×m` block of `x`, as a max-abs entry of `x - target`.
pub fn interior_residual(x: &DMatrix<f64>, target: &DMatrix<f64>, m: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            worst = worst.max((x[(i, j)] - target[(i, j)]).abs());
        }
    }
    worst
}

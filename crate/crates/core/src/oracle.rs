//! Classical invariants of the closed braid, computed exactly: reduced
//! Burau matrices, the Alexander polynomial, the determinant, a Seifert
//! matrix from the braided Seifert surface, and the signature.
//!
//! These never look at representations and serve as the independent check
//! on the fixed-point counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::braid::{require_knot, BraidWord};
use crate::error::{Error, Result};
use crate::laurent::{as_bigint, LaurentPoly};

pub type PolyMatrix = Vec<Vec<LaurentPoly>>;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self + selfᵀ`.
    pub fn symmetrized(&self) -> Self {
        let t = self.transpose();
        let mut s = self.clone();
        for (a, b) in s.data.iter_mut().zip(&t.data) {
            *a += b;
        }
        s
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).take(self.rows).collect()
    }

    fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| BigRational::from_integer(self[(i, j)].into()))
                    .collect()
            })
            .collect()
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut a = self.to_rational();
        let n = self.rows;
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            let pivot = a[k][k].clone();
            det *= &pivot;
            for r in k + 1..n {
                if a[r][k].is_zero() {
                    continue;
                }
                let f = &a[r][k] / &pivot;
                for c in k..n {
                    let delta = &f * &a[k][c];
                    a[r][c] -= delta;
                }
            }
        }
        det.to_integer()
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

fn identity_poly(n: usize) -> PolyMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
                .collect()
        })
        .collect()
}

fn poly_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let mut out = vec![vec![LaurentPoly::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

/// Reduced Burau matrix of one letter in `B_n`.
pub fn burau_generator(n: usize, g: i32) -> PolyMatrix {
    let d = n - 1;
    let k = g.unsigned_abs() as usize - 1;
    let mut m = identity_poly(d);
    if g > 0 {
        m[k][k] = LaurentPoly::int_monomial(-1, 1);
        if k >= 1 {
            m[k][k - 1] = LaurentPoly::int_monomial(1, 1);
        }
        if k + 1 < d {
            m[k][k + 1] = LaurentPoly::one();
        }
    } else {
        m[k][k] = LaurentPoly::int_monomial(-1, -1);
        if k >= 1 {
            m[k][k - 1] = LaurentPoly::one();
        }
        if k + 1 < d {
            m[k][k + 1] = LaurentPoly::int_monomial(1, -1);
        }
    }
    m
}

/// Product of reduced Burau generator matrices in word order.
pub fn burau_reduced(b: &BraidWord) -> Result<PolyMatrix> {
    let n = b.strands();
    if n < 2 {
        return Err(Error::Domain("reduced Burau needs at least two strands".into()));
    }
    Ok(b
        .letters()
        .iter()
        .fold(identity_poly(n - 1), |acc, &g| poly_mul(&acc, &burau_generator(n, g))))
}

/// Fraction-free (Bareiss) determinant over `Q[t, t^{-1}]`.
pub fn poly_determinant(m: &PolyMatrix) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return LaurentPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Alexander polynomial from `det(Burau − I)·(1 − t)/(1 − t^n)`, centered
/// and signed so that `Δ(1) = 1`.
pub fn alexander(b: &BraidWord) -> Result<LaurentPoly> {
    require_knot(b)?;
    let n = b.strands();
    if n == 1 {
        return Ok(LaurentPoly::one());
    }
    let mut m = burau_reduced(b)?;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = &row[i] - &LaurentPoly::one();
    }
    let det = poly_determinant(&m);
    let num = &det * &LaurentPoly::from_ints(0, &[1, -1]);
    let mut den_coeffs = vec![0; n + 1];
    den_coeffs[0] = 1;
    den_coeffs[n] = -1;
    let den = LaurentPoly::from_ints(0, &den_coeffs);
    let p = num
        .div_exact(&den)
        .ok_or_else(|| Error::Internal("Burau determinant not divisible by (1 - t^n)/(1 - t)".into()))?
        .symmetrized();
    if p.eval_int(1) != BigRational::one() {
        return Err(Error::Internal(format!("Alexander polynomial {p} has |Δ(1)| != 1")));
    }
    Ok(p)
}

/// `|Δ(−1)|`.
pub fn determinant(b: &BraidWord) -> Result<u64> {
    let v = alexander(b)?.eval_int(-1);
    as_bigint(&v)
        .and_then(|x| x.abs().to_u64())
        .ok_or_else(|| Error::Internal(format!("Δ(-1) = {v} is not a machine integer")))
}

/// A cycle on the braided Seifert surface: up the band of one crossing in
/// column `col`, down the band of the next crossing in that column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct BandLoop {
    col: usize,
    lo: usize,
    hi: usize,
    sign_lo: i64,
    sign_hi: i64,
}

fn band_loops(b: &BraidWord) -> Vec<BandLoop> {
    let mut loops = Vec::new();
    for col in 1..b.strands() {
        let hits: Vec<(usize, i64)> = b
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.unsigned_abs() as usize == col)
            .map(|(p, g)| (p, g.signum() as i64))
            .collect();
        for w in hits.windows(2) {
            loops.push(BandLoop {
                col,
                lo: w[0].0,
                hi: w[1].0,
                sign_lo: w[0].1,
                sign_hi: w[1].1,
            });
        }
    }
    loops
}

/// `lk(a, b⁺)` for band loops of the closed-braid surface.
///
/// Self-linking picks up `−ε/2` from each half-twisted band. Consecutive
/// loops of one column cross once inside their shared band, and the pushed
/// copy passes over or under depending on the twist. Loops in neighbouring
/// columns only meet in the disk they share, where an interleaved pair
/// `lo < lo' < hi < hi'` crosses once; nested or disjoint spans do not link.
fn band_linking(a: &BandLoop, b: &BandLoop) -> i64 {
    if a == b {
        return -(a.sign_lo + a.sign_hi) / 2;
    }
    if a.col == b.col {
        if a.hi == b.lo {
            return if a.sign_hi > 0 { 1 } else { 0 };
        }
        if b.hi == a.lo {
            return if b.sign_hi > 0 { 0 } else { -1 };
        }
        return 0;
    }
    if b.col == a.col + 1 {
        if a.lo < b.lo && b.lo < a.hi && a.hi < b.hi {
            return -1;
        }
        if b.lo < a.lo && a.lo < b.hi && b.hi < a.hi {
            return 1;
        }
    }
    0
}

/// Seifert matrix of the closure, one basis loop per consecutive pair of
/// letters in a column (size `c − n + 1`).
pub fn seifert_matrix(b: &BraidWord) -> Result<IntegerMatrix> {
    require_knot(b)?;
    if let Some(col) = (1..b.strands()).find(|&c| b.column_count(c) == 0) {
        return Err(Error::SplitDiagram(col));
    }
    let loops = band_loops(b);
    let m = loops.len();
    let mut v = IntegerMatrix::zeros(m, m);
    for (i, a) in loops.iter().enumerate() {
        for (j, c) in loops.iter().enumerate() {
            v[(i, j)] = band_linking(a, c);
        }
    }
    Ok(v)
}

/// `det(V − tVᵀ)`, the Alexander polynomial by the Seifert-form route.
pub fn seifert_alexander(v: &IntegerMatrix) -> LaurentPoly {
    let n = v.rows();
    let m: PolyMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    &LaurentPoly::int_monomial(v[(i, j)], 0)
                        - &LaurentPoly::int_monomial(v[(j, i)], 1)
                })
                .collect()
        })
        .collect();
    poly_determinant(&m)
}

/// Signature of a symmetric integer matrix by exact congruence
/// diagonalization.
pub fn symmetric_signature(s: &IntegerMatrix) -> i64 {
    let n = s.rows();
    let mut a = s.to_rational();
    let mut sig = 0i64;
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // row/col k += row/col j makes the pivot 2·a[k][j]
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                continue;
            }
        }
        let pivot = a[k][k].clone();
        sig += if pivot.is_positive() { 1 } else { -1 };
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &pivot;
            for c in k..n {
                let delta = &f * &a[k][c];
                a[r][c] -= delta;
            }
            for rr in k..n {
                let delta = &f * &a[rr][k];
                a[rr][r] -= delta;
            }
        }
    }
    sig
}

/// Signature of `V + Vᵀ`; the right-handed trefoil `σ_1³` gets `−2`.
pub fn signature(b: &BraidWord) -> Result<i64> {
    Ok(symmetric_signature(&seifert_matrix(b)?.symmetrized()))
}

/// `(det − 1)/2`, the number of binary dihedral traceless classes.
pub fn binary_dihedral_count(b: &BraidWord) -> Result<u64> {
    let d = determinant(b)?;
    if d % 2 == 0 {
        return Err(Error::Internal(format!("knot determinant {d} is even")));
    }
    Ok((d - 1) / 2)
}

//! Dickson matrices of σ-polynomials and the exact linear algebra around them.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::{Felt, FieldCtx};
use crate::linpoly::SigmaPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("the point x must be nonzero")]
    ZeroPoint,
}

/// Dense row-major matrix over F_{q^n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Felt>,
}

impl Matrix {
    pub fn from_fn(rows: usize, cols: usize, mut entry: impl FnMut(usize, usize) -> Felt) -> Self {
        let data = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| entry(r, c)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Felt>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { Felt::ONE } else { Felt::ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Felt {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Felt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Submatrix on the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]))
    }

    /// The submatrix obtained by deleting row `r` and column `c`.
    pub fn without(&self, r: usize, c: usize) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.select(&rows, &cols)
    }

    /// Row echelon reduction in place; returns the pivot columns and the
    /// number of row swaps performed.
    fn eliminate(&mut self, ctx: &FieldCtx) -> (Vec<usize>, usize) {
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut top = 0;
        for col in 0..self.cols {
            if top == self.rows {
                break;
            }
            let Some(pr) = (top..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if pr != top {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, top * self.cols + c);
                }
                swaps += 1;
            }
            let inv = ctx.inv(self.get(top, col)).expect("pivot is nonzero");
            for r in top + 1..self.rows {
                let lead = self.get(r, col);
                if lead.is_zero() {
                    continue;
                }
                let factor = ctx.mul(lead, inv);
                for c in col..self.cols {
                    let v = ctx.sub(self.get(r, c), ctx.mul(factor, self.get(top, c)));
                    self.data[r * self.cols + c] = v;
                }
            }
            pivots.push(col);
            top += 1;
        }
        (pivots, swaps)
    }

    pub fn det(&self, ctx: &FieldCtx) -> Result<Felt, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(Felt::ONE);
        }
        let mut m = self.clone();
        let (pivots, swaps) = m.eliminate(ctx);
        if pivots.len() < self.rows {
            return Ok(Felt::ZERO);
        }
        let prod = (0..self.rows).fold(Felt::ONE, |acc, i| ctx.mul(acc, m.get(i, i)));
        Ok(if swaps % 2 == 1 { ctx.neg(prod) } else { prod })
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.clone().eliminate(ctx).0.len()
    }

    pub fn mul(&self, other: &Matrix, ctx: &FieldCtx) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(Felt::ZERO, |acc, k| ctx.add(acc, ctx.mul(self.get(r, k), other.get(k, c))))
        })
    }
}

/// Row-major list of rows, each a list of `0` / `g^k` strings.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(self.row(r))?;
        }
        seq.end()
    }
}

/// The σ-matrix of Dickson: entry `(r, c)` is `a_{(c - r) mod n}^{σ^r}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DicksonMatrix {
    s: u32,
    entries: Matrix,
}

impl DicksonMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }
}

/// `(X_0, .., X_{n-1}) -> (X_{n-1}, X_0, .., X_{n-2})^σ`; maps each row of a
/// Dickson matrix to the next one, cyclically.
pub fn phi(ctx: &FieldCtx, s: u32, row: &[Felt]) -> Vec<Felt> {
    let n = row.len();
    (0..n).map(|c| ctx.frobenius(row[(c + n - 1) % n], s as i64)).collect()
}

pub fn build_dickson(f: &SigmaPoly) -> DicksonMatrix {
    let ctx = &**f.ctx();
    let n = f.n() as usize;
    let entries = Matrix::from_fn(n, n, |r, c| {
        let a = f.coeff((c + n - r) % n);
        ctx.pow_reduced(a, ctx.sigma_power(f.s(), r as u32))
    });
    DicksonMatrix { s: f.s(), entries }
}

/// Rank of `f` read off the nested minors: `M^{(r)}` is the block of the
/// first `r` rows and last `r` columns, and the rank is the largest `t`
/// with `det M^{(t)} != 0` after all larger ones vanish.
pub fn rank_nested_minors(f: &SigmaPoly) -> u32 {
    let ctx = &**f.ctx();
    let m = build_dickson(f);
    let n = m.n();
    for t in (1..=n).rev() {
        let rows: Vec<usize> = (0..t).collect();
        let cols: Vec<usize> = (n - t..n).collect();
        let det = m.entries.select(&rows, &cols).det(ctx).expect("square block");
        if !det.is_zero() {
            return t as u32;
        }
    }
    0
}

/// `g_x(t) = -f(x) t + f(x t)`, where `f` is taken without its `a_0` term.
pub fn gx_poly(f: &SigmaPoly, x: Felt) -> Result<SigmaPoly, MatrixError> {
    if x.is_zero() {
        return Err(MatrixError::ZeroPoint);
    }
    let ctx = &**f.ctx();
    let f1 = f.normalize_a0();
    let mut coeffs: Vec<Felt> = (0..f.n())
        .map(|i| ctx.mul(f1.coeff(i as usize), ctx.pow_reduced(x, ctx.sigma_power(f.s(), i))))
        .collect();
    coeffs[0] = ctx.neg(f1.eval(x));
    Ok(SigmaPoly::new(f.ctx().clone(), f.s(), coeffs).expect("same shape as f"))
}

/// Dickson matrix of `g_x`; the `a_0` term of `f` cancels in `g_x`, so it
/// is ignored rather than rejected.
pub fn build_gx_matrix(f: &SigmaPoly, x: Felt) -> Result<DicksonMatrix, MatrixError> {
    Ok(build_dickson(&gx_poly(f, x)?))
}

/// Determinant of the North-West principal `(n-1)`-block of the `g_x` matrix.
pub fn nw_minor_det(f: &SigmaPoly, x: Felt) -> Result<Felt, MatrixError> {
    let m = build_gx_matrix(f, x)?;
    let n = m.n();
    let idx: Vec<usize> = (0..n - 1).collect();
    m.entries.select(&idx, &idx).det(f.ctx())
}

/// The `(n-1)x(n-1)` matrix with diagonal `-(1+z)^{σ^r}`, superdiagonal `1`
/// and subdiagonal `z^{σ^r}`.
pub fn build_bz(ctx: &FieldCtx, s: u32, z: Felt) -> Matrix {
    let m = ctx.n() as usize - 1;
    let one_plus = ctx.add(Felt::ONE, z);
    Matrix::from_fn(m, m, |r, c| {
        let sig = ctx.sigma_power(s, r as u32);
        if c == r {
            ctx.neg(ctx.pow_reduced(one_plus, sig))
        } else if c == r + 1 {
            Felt::ONE
        } else if r == c + 1 {
            ctx.pow_reduced(z, sig)
        } else {
            Felt::ZERO
        }
    })
}

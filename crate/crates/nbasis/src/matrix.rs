//! Square matrices over a field context, plus low level row kernels
//! that operate directly on flattened coordinate rows. The kernels
//! treat a row as consecutive chunks, one chunk per entry, so the same
//! code serves ranks over F_q inside F_{q^n} and plain linear solves.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FFElement, FieldCtx};

#[derive(Clone)]
pub struct MatrixFq {
    ctx: Arc<FieldCtx>,
    size: usize,
    entries: Vec<FFElement>,
}

impl PartialEq for MatrixFq {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.entries == other.entries
    }
}

impl Eq for MatrixFq {}

impl std::fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MatrixFq {}x{} [", self.size, self.size)?;
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" | "))?;
        }
        write!(f, "]")
    }
}

impl MatrixFq {
    pub fn from_fn(
        ctx: &Arc<FieldCtx>,
        size: usize,
        mut f: impl FnMut(usize, usize) -> FFElement,
    ) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        MatrixFq {
            ctx: ctx.clone(),
            size,
            entries,
        }
    }

    pub fn identity(ctx: &Arc<FieldCtx>, size: usize) -> Self {
        MatrixFq::from_fn(ctx, size, |i, j| {
            if i == j {
                FFElement::one(ctx)
            } else {
                FFElement::zero(ctx)
            }
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &FFElement {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FFElement) {
        self.entries[i * self.size + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        MatrixFq::from_fn(&self.ctx, self.size, |i, j| {
            let mut acc = FFElement::zero(&self.ctx);
            for k in 0..self.size {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn is_identity(&self) -> bool {
        for i in 0..self.size {
            for j in 0..self.size {
                let e = self.get(i, j);
                if i == j {
                    if !e.is_one() {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[FFElement]) -> Vec<FFElement> {
        assert_eq!(v.len(), self.size, "vector length mismatch");
        (0..self.size)
            .map(|i| {
                let mut acc = FFElement::zero(&self.ctx);
                for k in 0..self.size {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    /// Gauss-Jordan inverse. Fails with Singular when the rank drops.
    pub fn inverse(&self) -> Result<MatrixFq> {
        let n = self.size;
        let mut work: Vec<Vec<FFElement>> = (0..n)
            .map(|i| {
                let mut row: Vec<FFElement> = (0..n).map(|j| self.get(i, j).clone()).collect();
                for j in 0..n {
                    row.push(if i == j {
                        FFElement::one(&self.ctx)
                    } else {
                        FFElement::zero(&self.ctx)
                    });
                }
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !work[r][col].is_zero())
                .ok_or(Error::Singular)?;
            work.swap(col, pivot);
            let inv = work[col][col].inv()?;
            for x in work[col].iter_mut() {
                *x = x.mul(&inv);
            }
            for r in 0..n {
                if r == col || work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].clone();
                for c in col..2 * n {
                    let t = work[col][c].mul(&factor);
                    work[r][c] = work[r][c].sub(&t);
                }
            }
        }
        Ok(MatrixFq::from_fn(&self.ctx, n, |i, j| {
            work[i][n + j].clone()
        }))
    }
}

// ----- flat row kernels -----
//
// A row is a Vec<u64> holding `cols` chunks of `chunk` residues; chunk
// arithmetic is delegated to the field context of the entries.

fn chunk_is_zero(row: &[u64], j: usize, chunk: usize) -> bool {
    row[j * chunk..(j + 1) * chunk].iter().all(|&x| x == 0)
}

/// row_a = scale_a * row_a - scale_b * row_b, entrywise over F_q.
fn row_combine(
    fq: &FieldCtx,
    row_a: &mut [u64],
    scale_a: &[u64],
    row_b: &[u64],
    scale_b: &[u64],
    chunk: usize,
    from_col: usize,
) {
    let cols = row_a.len() / chunk;
    let mut tmp = vec![0u64; chunk];
    for j in from_col..cols {
        let a = &row_a[j * chunk..(j + 1) * chunk];
        let b = &row_b[j * chunk..(j + 1) * chunk];
        let left = fq.mul_in(a, scale_a);
        let right = fq.mul_in(b, scale_b);
        fq.sub_in(&left, &right, &mut tmp);
        row_a[j * chunk..(j + 1) * chunk].copy_from_slice(&tmp);
    }
}

/// Rank of a set of rows over F_q, division free: pivots are never
/// normalized, eliminations cross multiply instead.
pub(crate) fn rank_rows(fq: &FieldCtx, rows: &mut [Vec<u64>], chunk: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len() / chunk;
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| !chunk_is_zero(&rows[r], col, chunk))
        else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_val = rows[rank][col * chunk..(col + 1) * chunk].to_vec();
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if chunk_is_zero(row, col, chunk) {
                continue;
            }
            let factor = row[col * chunk..(col + 1) * chunk].to_vec();
            row_combine(fq, row, &pivot_val, pivot_row, &factor, chunk, col);
        }
        rank += 1;
    }
    rank
}

/// Express `target` as a linear combination of `basis` vectors over
/// F_q, if possible. Returns the combination coefficients as chunks,
/// one per basis vector.
pub(crate) fn express(
    fq: &FieldCtx,
    basis: &[Vec<u64>],
    target: &[u64],
    chunk: usize,
) -> Result<Option<Vec<Vec<u64>>>> {
    let k = basis.len();
    if k == 0 {
        return Ok(if target.iter().all(|&x| x == 0) {
            Some(Vec::new())
        } else {
            None
        });
    }
    let cols = target.len() / chunk;
    // Augment each basis row with combination bookkeeping: row i is
    // followed by the i-th unit vector over F_q.
    let one = {
        let mut v = vec![0u64; chunk];
        v[0] = 1;
        v
    };
    let mut work: Vec<Vec<u64>> = basis
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut w = row.clone();
            w.resize((cols + k) * chunk, 0);
            w[(cols + i) * chunk..(cols + i) * chunk + chunk].copy_from_slice(&one);
            w
        })
        .collect();
    let mut aug_target = target.to_vec();
    aug_target.resize((cols + k) * chunk, 0);

    let mut row_at = 0usize;
    for col in 0..cols {
        if row_at == k {
            break;
        }
        let Some(pivot) = (row_at..k).find(|&r| !chunk_is_zero(&work[r], col, chunk)) else {
            continue;
        };
        work.swap(row_at, pivot);
        let inv = fq.inv_in(&work[row_at][col * chunk..(col + 1) * chunk])?;
        let scaled: Vec<u64> = {
            let row = &work[row_at];
            let mut s = vec![0u64; row.len()];
            for j in 0..cols + k {
                let prod = fq.mul_in(&row[j * chunk..(j + 1) * chunk], &inv);
                s[j * chunk..(j + 1) * chunk].copy_from_slice(&prod);
            }
            s
        };
        work[row_at] = scaled;
        for r in 0..k {
            if r == row_at || chunk_is_zero(&work[r], col, chunk) {
                continue;
            }
            let factor = work[r][col * chunk..(col + 1) * chunk].to_vec();
            let pivot_row = work[row_at].clone();
            row_combine(fq, &mut work[r], &one, &pivot_row, &factor, chunk, 0);
        }
        if !chunk_is_zero(&aug_target, col, chunk) {
            let factor = aug_target[col * chunk..(col + 1) * chunk].to_vec();
            let pivot_row = work[row_at].clone();
            row_combine(fq, &mut aug_target, &one, &pivot_row, &factor, chunk, 0);
        }
        row_at += 1;
    }
    // The target reduces to zero on the value columns exactly when it
    // lies in the span; the bookkeeping columns then hold the negated
    // combination.
    for j in 0..cols {
        if !chunk_is_zero(&aug_target, j, chunk) {
            return Ok(None);
        }
    }
    let mut coeffs = Vec::with_capacity(k);
    for i in 0..k {
        let c = &aug_target[(cols + i) * chunk..(cols + i + 1) * chunk];
        let mut neg = vec![0u64; chunk];
        fq.neg_in(c, &mut neg);
        coeffs.push(neg);
    }
    Ok(Some(coeffs))
}

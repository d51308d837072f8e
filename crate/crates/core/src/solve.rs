//! Exact linear-system solving over a prime field by reduced row echelon
//! form, returning one particular solution and a nullspace basis.
//!
//! Pivoting is deterministic (first nonzero entry, top to bottom) and free
//! variables are set to zero in the particular solution, so identical
//! inputs always produce identical outputs.

use crate::error::AlgebraError;
use crate::modular::Modulus;

/// Rectangular coefficient matrix over Z_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    modulus: Modulus,
    entries: Vec<u64>,
}

impl RectMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        modulus: Modulus,
        entries: Vec<u64>,
    ) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::BadEntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let entries = entries.into_iter().map(|e| modulus.reduce(e)).collect();
        Ok(Self {
            rows,
            cols,
            modulus,
            entries,
        })
    }

    /// Assembles the matrix whose c-th column is `columns[c]`.
    pub fn from_columns(columns: &[Vec<u64>], modulus: Modulus) -> Result<Self, AlgebraError> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.len());
        let mut entries = vec![0u64; rows * cols];
        for (c, column) in columns.iter().enumerate() {
            if column.len() != rows {
                return Err(AlgebraError::BadEntryCount {
                    expected: rows,
                    got: column.len(),
                });
            }
            for (r, &v) in column.iter().enumerate() {
                entries[r * cols + c] = modulus.reduce(v);
            }
        }
        Ok(Self {
            rows,
            cols,
            modulus,
            entries,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.cols + col]
    }

    /// Matrix-vector product, used by residual checks.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let m = self.modulus.value() as u128;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u128;
                for c in 0..self.cols {
                    acc = (acc + self.get(r, c) as u128 * v[c] as u128) % m;
                }
                acc as u64
            })
            .collect()
    }
}

/// Output of `solve_linear`: one solution plus a basis of the homogeneous
/// solution space in reduced echelon convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolveResult {
    pub modulus: Modulus,
    pub rank: usize,
    pub particular: Vec<u64>,
    pub nullspace: Vec<Vec<u64>>,
}

/// Solves coeff * x = rhs over the prime field Z_p.
///
/// Composite moduli are rejected: elimination needs every nonzero pivot to
/// be a unit, which only a field guarantees. Callers working mod n = pq
/// reduce to each prime factor first.
pub fn solve_linear(coeff: &RectMatrix, rhs: &[u64]) -> Result<LinearSolveResult, AlgebraError> {
    let m = coeff.modulus;
    if !m.is_prime() {
        return Err(AlgebraError::CompositeModulus {
            modulus: m.value(),
        });
    }
    let rows = coeff.rows;
    let cols = coeff.cols;
    if rhs.len() != rows {
        return Err(AlgebraError::BadEntryCount {
            expected: rows,
            got: rhs.len(),
        });
    }

    // augmented working copy [coeff | rhs]
    let width = cols + 1;
    let mut work = vec![0u64; rows * width];
    for r in 0..rows {
        for c in 0..cols {
            work[r * width + c] = coeff.get(r, c);
        }
        work[r * width + cols] = m.reduce(rhs[r]);
    }

    let mut pivot_cols = Vec::new();
    let mut next_row = 0usize;
    for col in 0..cols {
        if next_row == rows {
            break;
        }
        let Some(pivot) = (next_row..rows).find(|&r| work[r * width + col] != 0) else {
            continue;
        };
        if pivot != next_row {
            for j in 0..width {
                work.swap(next_row * width + j, pivot * width + j);
            }
        }
        let inv = m
            .inv(work[next_row * width + col])
            .expect("nonzero is a unit over a prime field");
        for j in col..width {
            work[next_row * width + j] = m.mul(work[next_row * width + j], inv);
        }
        for r in 0..rows {
            if r == next_row {
                continue;
            }
            let f = work[r * width + col];
            if f == 0 {
                continue;
            }
            for j in col..width {
                let sub = m.mul(f, work[next_row * width + j]);
                work[r * width + j] = m.sub(work[r * width + j], sub);
            }
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    let rank = pivot_cols.len();

    for r in rank..rows {
        if work[r * width + cols] != 0 {
            return Err(AlgebraError::Inconsistent);
        }
    }

    let mut particular = vec![0u64; cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        particular[c] = work[i * width + cols];
    }

    let mut nullspace = Vec::with_capacity(cols - rank);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &c in &pivot_cols {
            s[c] = true;
        }
        s
    };
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &c) in pivot_cols.iter().enumerate() {
            v[c] = m.neg(work[i * width + free]);
        }
        nullspace.push(v);
    }

    let result = LinearSolveResult {
        modulus: m,
        rank,
        particular,
        nullspace,
    };

    #[cfg(debug_assertions)]
    {
        let residual = coeff.apply(&result.particular);
        debug_assert!(
            residual
                .iter()
                .zip(rhs)
                .all(|(&got, &want)| got == m.reduce(want)),
            "particular solution fails residual check"
        );
        for v in &result.nullspace {
            debug_assert!(
                coeff.apply(v).iter().all(|&x| x == 0),
                "nullspace vector fails homogeneous check"
            );
        }
    }

    Ok(result)
}

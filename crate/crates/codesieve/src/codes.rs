//! Random binary linear codes, membership tests, code towers and code
//! puncturing.
//!
//! Matrices are stored as rows of [`Word`]; all arithmetic is over
//! `F_2`, so elimination is XOR of rows and membership is a parity of
//! AND-overlaps.

use crate::hamming::{Word, WordError};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("code dimension k must satisfy 1 <= k <= n (got k={k}, n={n})")]
    BadDimension { k: usize, n: usize },
    #[error("punctured length {n_prime} must exceed the dimension {k}")]
    PunctureTooShort { n_prime: usize, k: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// An `[n, k]` binary linear code with a full-rank generator and the
/// matching parity-check matrix (`parity . generator^T = 0`).
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: Vec<Word>,
    parity: Vec<Word>,
}

impl LinearCode {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &[Word] {
        &self.generator
    }

    pub fn parity(&self) -> &[Word] {
        &self.parity
    }

    /// True iff every parity check annihilates `x`.
    pub fn contains(&self, x: &Word) -> Result<bool, CodeError> {
        for h in &self.parity {
            if x.overlap(h)? % 2 == 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Enumerates all `2^k` codewords; intended for small `k` only.
    pub fn codewords(&self) -> impl Iterator<Item = Word> + '_ {
        (0u64..(1u64 << self.k)).map(move |mask| {
            let mut acc = Word::zero(self.n).unwrap();
            for (i, row) in self.generator.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    acc = acc.add(row).unwrap();
                }
            }
            acc
        })
    }
}

/// Row-reduces `rows` in place; returns the rank and the pivot column of
/// each nonzero row (rows are left in row-echelon order).
fn row_reduce(rows: &mut [Word]) -> (usize, Vec<usize>) {
    let n = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r].bit(col)) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.bit(col) {
                *row = row.add(&pivot).unwrap();
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    (rank, pivots)
}

/// Nullspace basis of the row space of `reduced` (which must be in
/// reduced row-echelon form with the given pivot columns): one parity
/// row per free column.
fn nullspace(n: usize, reduced: &[Word], pivots: &[usize]) -> Vec<Word> {
    let mut parity = Vec::with_capacity(n - pivots.len());
    for col in 0..n {
        if pivots.contains(&col) {
            continue;
        }
        let mut h = Word::zero(n).unwrap();
        h.set_bit(col, true);
        for (row, &p) in reduced.iter().zip(pivots) {
            if row.bit(col) {
                h.set_bit(p, true);
            }
        }
        parity.push(h);
    }
    parity
}

fn code_from_independent_rows(n: usize, rows: Vec<Word>) -> LinearCode {
    let generator = rows.clone();
    let mut reduced = rows;
    let (rank, pivots) = row_reduce(&mut reduced);
    debug_assert_eq!(rank, generator.len());
    reduced.truncate(rank);
    let parity = nullspace(n, &reduced, &pivots);
    LinearCode {
        n,
        k: rank,
        generator,
        parity,
    }
}

/// Samples a uniform full-rank `k x n` generator matrix (resampling the
/// rare rank-deficient draws) and derives its parity-check matrix.
pub fn sample_random_code<R: Rng>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<LinearCode, CodeError> {
    if k == 0 || k > n {
        return Err(CodeError::BadDimension { k, n });
    }
    loop {
        let rows: Vec<Word> = (0..k)
            .map(|_| {
                let mut w = Word::zero(n).unwrap();
                for i in 0..n {
                    if rng.gen::<bool>() {
                        w.set_bit(i, true);
                    }
                }
                w
            })
            .collect();
        let mut probe = rows.clone();
        let (rank, _) = row_reduce(&mut probe);
        if rank == k {
            return Ok(code_from_independent_rows(n, rows));
        }
    }
}

/// A tower `F_2^n = C_0 .. C_{n-k} = C` of nested codes with dimension
/// decrements of one: level `i` keeps the vectors annihilated by the
/// first `i` parity checks.
#[derive(Clone, Debug)]
pub struct CodeTower {
    base: LinearCode,
    checks: Vec<Word>,
}

impl CodeTower {
    pub fn base(&self) -> &LinearCode {
        &self.base
    }

    /// Number of strict levels, `n - k`.
    pub fn levels(&self) -> usize {
        self.checks.len()
    }

    pub fn checks(&self) -> &[Word] {
        &self.checks
    }

    /// Membership in `C_level`: the first `level` checks all vanish.
    pub fn contains_prefix(&self, level: usize, x: &Word) -> Result<bool, CodeError> {
        for h in &self.checks[..level] {
            if x.overlap(h)? % 2 == 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds a tower from `code` by putting its `n - k` parity rows in a
/// uniformly random order, so that the final level is exactly `code`.
pub fn build_tower<R: Rng>(code: &LinearCode, rng: &mut R) -> CodeTower {
    let mut checks = code.parity.clone();
    // Fisher-Yates
    for i in (1..checks.len()).rev() {
        let j = rng.gen_range(0..=i);
        checks.swap(i, j);
    }
    CodeTower {
        base: code.clone(),
        checks,
    }
}

/// Result of puncturing: the dimension may drop below `k`, which is a
/// reported outcome rather than an error (the ISD loop resamples on it).
#[derive(Clone, Debug)]
pub struct PunctureOutcome {
    /// Dimension of the punctured code.
    pub dim: usize,
    /// The punctured code, when its dimension is at least 1.
    pub code: Option<LinearCode>,
}

/// Restricts the generator columns to `supp(mask)`.
pub fn puncture(code: &LinearCode, mask: &Word) -> Result<PunctureOutcome, CodeError> {
    let n_prime = mask.weight();
    if n_prime <= code.k {
        return Err(CodeError::PunctureTooShort {
            n_prime,
            k: code.k,
        });
    }
    let mut rows: Vec<Word> = code
        .generator
        .iter()
        .map(|g| g.project(mask))
        .collect::<Result<_, _>>()?;
    let (rank, _) = row_reduce(&mut rows);
    rows.truncate(rank);
    let code = if rank > 0 {
        Some(code_from_independent_rows(n_prime, rows))
    } else {
        None
    };
    Ok(PunctureOutcome { dim: rank, code })
}

//! Fixed-length binary vectors with Hamming operations, and uniform
//! samplers over spheres and overlap-constrained regions.
//!
//! A [`Word`] is an immutable bit vector of length at most
//! [`MAX_DIM`], stored densely in 64-bit blocks so that weight, XOR and
//! AND run in time proportional to `n/64`. Coordinate `0` is the first
//! (leftmost) coordinate throughout.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest supported vector length.
pub const MAX_DIM: usize = 1024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("dimension {0} exceeds the maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("coordinate {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("weight {w} exceeds dimension {n}")]
    WeightExceedsDimension { w: usize, n: usize },
    #[error("empty region: no weight-{w} vector has overlap {alpha} with the given center")]
    EmptyRegion { w: usize, alpha: usize },
    #[error("malformed word literal: {0}")]
    BadLiteral(String),
}

/// A binary vector in `F_2^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: usize,
    blocks: Vec<u64>,
}

impl Word {
    /// The all-zero word of length `n`.
    pub fn zero(n: usize) -> Result<Self, WordError> {
        if n > MAX_DIM {
            return Err(WordError::DimensionTooLarge(n));
        }
        Ok(Word {
            len: n,
            blocks: vec![0; n.div_ceil(64)],
        })
    }

    /// The all-one word of length `n`.
    pub fn ones(n: usize) -> Result<Self, WordError> {
        let mut w = Word::zero(n)?;
        for b in w.blocks.iter_mut() {
            *b = u64::MAX;
        }
        w.clear_tail();
        Ok(w)
    }

    /// Builds a word from the coordinates in `support` (each set to 1).
    pub fn from_support(n: usize, support: &[usize]) -> Result<Self, WordError> {
        let mut w = Word::zero(n)?;
        for &i in support {
            if i >= n {
                return Err(WordError::IndexOutOfRange { index: i, len: n });
            }
            w.blocks[i / 64] |= 1u64 << (i % 64);
        }
        Ok(w)
    }

    /// Parses a literal like `"1100"`; the leftmost character is
    /// coordinate 0.
    pub fn from_bit_str(s: &str) -> Result<Self, WordError> {
        let mut w = Word::zero(s.len())?;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => w.blocks[i / 64] |= 1u64 << (i % 64),
                _ => return Err(WordError::BadLiteral(s.to_string())),
            }
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Hamming weight: the number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.blocks[i / 64] |= 1u64 << (i % 64);
        } else {
            self.blocks[i / 64] &= !(1u64 << (i % 64));
        }
    }

    /// Coordinatewise XOR.
    pub fn add(&self, other: &Word) -> Result<Word, WordError> {
        self.check_len(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Word {
            len: self.len,
            blocks,
        })
    }

    /// Coordinatewise AND.
    pub fn meet(&self, other: &Word) -> Result<Word, WordError> {
        self.check_len(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a & b)
            .collect();
        Ok(Word {
            len: self.len,
            blocks,
        })
    }

    /// Overlap weight `|self AND other|` without materializing the meet.
    pub fn overlap(&self, other: &Word) -> Result<usize, WordError> {
        self.check_len(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// Projects onto the support of `c`: a word of length `|c|` listing
    /// the coordinates of `self` at `supp(c)` in ascending index order.
    pub fn project(&self, c: &Word) -> Result<Word, WordError> {
        self.check_len(c)?;
        let mut out = Word::zero(c.weight())?;
        let mut pos = 0;
        for i in c.support() {
            if self.bit(i) {
                out.set_bit(pos, true);
            }
            pos += 1;
        }
        Ok(out)
    }

    /// Ascending indices of the nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let tz = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(bi * 64 + tz)
                }
            })
        })
    }

    /// Concatenates `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        let mut out = Word::zero(self.len + other.len)?;
        for i in self.support() {
            out.set_bit(i, true);
        }
        for i in other.support() {
            out.set_bit(self.len + i, true);
        }
        Ok(out)
    }

    /// Extracts coordinates `[start, start + len)` as a word of length `len`.
    pub fn slice(&self, start: usize, len: usize) -> Result<Word, WordError> {
        if start + len > self.len {
            return Err(WordError::IndexOutOfRange {
                index: start + len,
                len: self.len,
            });
        }
        let mut out = Word::zero(len)?;
        for i in 0..len {
            if self.bit(start + i) {
                out.set_bit(i, true);
            }
        }
        Ok(out)
    }

    /// Serializes as `n=<dim>:<hex>`, lowercase, most-significant
    /// coordinate first: the word is read as the integer with coordinate
    /// `i` contributing `2^(n-1-i)`, printed with `ceil(n/4)` hex digits.
    pub fn to_hex_tagged(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut out = format!("n={}:", self.len);
        for d in 0..digits {
            let mut nibble = 0u8;
            for j in 0..4usize {
                let power = 4 * (digits - d - 1) + j;
                if power < self.len && self.bit(self.len - 1 - power) {
                    nibble |= 1 << j;
                }
            }
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    /// Parses the `n=<dim>:<hex>` form produced by [`Word::to_hex_tagged`].
    pub fn from_hex_tagged(s: &str) -> Result<Self, WordError> {
        let bad = || WordError::BadLiteral(s.to_string());
        let rest = s.strip_prefix("n=").ok_or_else(bad)?;
        let (dim, hex) = rest.split_once(':').ok_or_else(bad)?;
        let n: usize = dim.parse().map_err(|_| bad())?;
        let digits = n.div_ceil(4);
        if hex.len() != digits {
            return Err(bad());
        }
        let mut w = Word::zero(n)?;
        for (d, ch) in hex.chars().enumerate() {
            if ch.is_ascii_uppercase() {
                return Err(bad());
            }
            let nibble = ch.to_digit(16).ok_or_else(bad)? as u8;
            for j in 0..4usize {
                if (nibble >> j) & 1 == 1 {
                    let power = 4 * (digits - d - 1) + j;
                    if power >= n {
                        return Err(bad());
                    }
                    w.set_bit(n - 1 - power, true);
                }
            }
        }
        Ok(w)
    }

    fn check_len(&self, other: &Word) -> Result<(), WordError> {
        if self.len != other.len {
            return Err(WordError::LengthMismatch(self.len, other.len));
        }
        Ok(())
    }

    fn clear_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Deterministic seed for a counter-based random stream.
///
/// Identical `(seed, stream)` pairs reproduce identical draws; parallel
/// tasks each derive their own stream with [`Seed::split`] so results do
/// not depend on the thread count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed {
    pub seed: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(seed: u64) -> Self {
        Seed { seed, stream: 0 }
    }

    /// Derives the `index`-th child stream.
    pub fn split(&self, index: u64) -> Seed {
        Seed {
            seed: self.seed,
            stream: self
                .stream
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(index)
                .wrapping_add(1),
        }
    }

    /// Instantiates the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Draws `w` distinct positions out of `n` by partial Fisher-Yates.
fn sample_positions<R: Rng>(n: usize, w: usize, rng: &mut R) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..w {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(w);
    idx
}

/// Uniform sample from the weight-`w` sphere in `F_2^n`.
pub fn sample_sphere<R: Rng>(n: usize, w: usize, rng: &mut R) -> Result<Word, WordError> {
    if w > n {
        return Err(WordError::WeightExceedsDimension { w, n });
    }
    Word::from_support(n, &sample_positions(n, w, rng))
}

/// Uniform sample from `{x in S_w^n : |x AND c| = alpha}`: `alpha`
/// positions chosen uniformly inside `supp(c)` and `w - alpha` outside.
pub fn sample_region<R: Rng>(
    n: usize,
    c: &Word,
    w: usize,
    alpha: usize,
    rng: &mut R,
) -> Result<Word, WordError> {
    if c.len() != n {
        return Err(WordError::LengthMismatch(c.len(), n));
    }
    let v = c.weight();
    if alpha > w.min(v) || w - alpha > n - v {
        return Err(WordError::EmptyRegion { w, alpha });
    }
    let inside: Vec<usize> = c.support().collect();
    let outside: Vec<usize> = (0..n).filter(|&i| !c.bit(i)).collect();
    let mut support = Vec::with_capacity(w);
    for pos in sample_positions(v, alpha, rng) {
        support.push(inside[pos]);
    }
    for pos in sample_positions(n - v, w - alpha, rng) {
        support.push(outside[pos]);
    }
    Word::from_support(n, &support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn word(s: &str) -> Word {
        Word::from_bit_str(s).unwrap()
    }

    #[test]
    fn weight_basics() {
        assert_eq!(word("0000").weight(), 0);
        assert_eq!(word("1111").weight(), 4);
        assert_eq!(word("1010").weight(), 2);
    }

    #[test]
    fn add_and_meet() {
        assert_eq!(word("1100").add(&word("0110")).unwrap(), word("1010"));
        assert_eq!(word("1100").meet(&word("0110")).unwrap(), word("0100"));
        assert!(word("110").add(&word("1100")).is_err());
    }

    #[test]
    fn weight_identity_on_random_words() {
        let mut rng = Seed::new(11).rng();
        for _ in 0..200 {
            let x = sample_sphere(67, 21, &mut rng).unwrap();
            let y = sample_sphere(67, 30, &mut rng).unwrap();
            let lhs = x.add(&y).unwrap().weight();
            let rhs = x.weight() + y.weight() - 2 * x.meet(&y).unwrap().weight();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn add_is_involution() {
        let mut rng = Seed::new(3).rng();
        for _ in 0..100 {
            let x = sample_sphere(130, 40, &mut rng).unwrap();
            let y = sample_sphere(130, 12, &mut rng).unwrap();
            assert_eq!(x.add(&y).unwrap().add(&y).unwrap(), x);
        }
    }

    #[test]
    fn project_examples() {
        assert_eq!(word("1010").project(&word("1100")).unwrap(), word("10"));
        let x = word("1010");
        assert_eq!(x.project(&Word::ones(4).unwrap()).unwrap(), x);
        let mut rng = Seed::new(5).rng();
        for _ in 0..50 {
            let x = sample_sphere(40, 13, &mut rng).unwrap();
            let c = sample_sphere(40, 9, &mut rng).unwrap();
            assert_eq!(
                x.project(&c).unwrap().weight(),
                x.meet(&c).unwrap().weight()
            );
        }
    }

    #[test]
    fn sphere_sampler_edge_weights() {
        let mut rng = Seed::new(1).rng();
        assert_eq!(sample_sphere(9, 0, &mut rng).unwrap(), Word::zero(9).unwrap());
        assert_eq!(sample_sphere(9, 9, &mut rng).unwrap(), Word::ones(9).unwrap());
        assert!(sample_sphere(4, 5, &mut rng).is_err());
    }

    #[test]
    fn sphere_sampler_is_uniform_chi_square() {
        // 15 outcomes in S_2^6; chi-square with 14 dof, threshold for
        // p = 0.001 is 36.12.
        let mut rng = Seed::new(42).rng();
        let draws = 100_000usize;
        let mut counts: HashMap<Word, usize> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(sample_sphere(6, 2, &mut rng).unwrap()).or_default() += 1;
        }
        assert_eq!(counts.len(), 15);
        let expect = draws as f64 / 15.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        assert!(chi2 < 36.12, "chi-square {chi2} too large");
    }

    #[test]
    fn region_sampler_uniform_and_constrained() {
        let c = word("1100");
        let mut rng = Seed::new(9).rng();
        let mut counts: HashMap<Word, usize> = HashMap::new();
        let draws = 40_000usize;
        for _ in 0..draws {
            let x = sample_region(4, &c, 2, 1, &mut rng).unwrap();
            assert_eq!(x.weight(), 2);
            assert_eq!(x.meet(&c).unwrap().weight(), 1);
            *counts.entry(x).or_default() += 1;
        }
        // the region is exactly {1010, 1001, 0110, 0101}
        assert_eq!(counts.len(), 4);
        let expect = draws as f64 / 4.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        // 3 dof, p = 0.001 threshold 16.27
        assert!(chi2 < 16.27, "chi-square {chi2} too large");
    }

    #[test]
    fn region_sampler_degenerate_center() {
        let c = word("110100");
        let mut rng = Seed::new(2).rng();
        let x = sample_region(6, &c, 3, 3, &mut rng).unwrap();
        assert_eq!(x, c);
        assert!(sample_region(6, &c, 2, 3, &mut rng).is_err());
    }

    #[test]
    fn projected_region_samples_are_uniform_on_small_sphere() {
        // sample_region composed with project is uniform on S_alpha^{|c|}
        let c = word("11011000");
        let mut rng = Seed::new(77).rng();
        let mut counts: HashMap<Word, usize> = HashMap::new();
        let draws = 24_000usize;
        for _ in 0..draws {
            let x = sample_region(8, &c, 3, 2, &mut rng).unwrap();
            *counts.entry(x.project(&c).unwrap()).or_default() += 1;
        }
        // S_2^4 has 6 outcomes; 5 dof, p = 0.001 threshold 20.52
        assert_eq!(counts.len(), 6);
        let expect = draws as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        assert!(chi2 < 20.52, "chi-square {chi2} too large");
    }

    #[test]
    fn identical_seeds_reproduce_draws() {
        let s = Seed::new(123).split(7);
        let a: Vec<Word> = {
            let mut rng = s.rng();
            (0..32).map(|_| sample_sphere(50, 11, &mut rng).unwrap()).collect()
        };
        let b: Vec<Word> = {
            let mut rng = s.rng();
            (0..32).map(|_| sample_sphere(50, 11, &mut rng).unwrap()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(s.split(0), s.split(1));
    }

    #[test]
    fn hex_roundtrip() {
        for s in ["1100", "0110", "1", "000000000001", "10101"] {
            let w = word(s);
            let tagged = w.to_hex_tagged();
            assert_eq!(Word::from_hex_tagged(&tagged).unwrap(), w, "{tagged}");
        }
        // coordinate 0 is the most significant bit: 1000 -> 8
        assert_eq!(word("1000").to_hex_tagged(), "n=4:8");
        assert_eq!(word("0001").to_hex_tagged(), "n=4:1");
        assert_eq!(word("10000").to_hex_tagged(), "n=5:10");
        let mut rng = Seed::new(4).rng();
        for _ in 0..50 {
            let w = sample_sphere(131, 40, &mut rng).unwrap();
            assert_eq!(Word::from_hex_tagged(&w.to_hex_tagged()).unwrap(), w);
        }
    }

    #[test]
    fn dimension_guard() {
        assert!(Word::zero(1024).is_ok());
        assert!(Word::zero(1025).is_err());
    }
}

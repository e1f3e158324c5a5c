//! Truncated power series over GF(2) with an exact rational exponent offset.
//!
//! An [`F2Series`] stands for `q^(offset24/24) * sum_{n < trunc} bit(n) q^n`,
//! where only the coefficients with `n < trunc` are known. Every q-expansion
//! handled by this crate (eta products, partition generating functions,
//! dissections) lives in this carrier, so all exponents are multiples of
//! 1/24 and coefficients are reduced mod 2.
//!
//! Coefficients are packed 64 per `u64`, least significant bit first.
//! Multiplication is shift-and-XOR over packed words, iterating over the set
//! bits of the sparser operand, and squaring is the Frobenius map
//! `f(q)^2 = f(q^2)`.

use std::fmt;

use thiserror::Error;

/// Bits per packed word.
pub const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term is zero (or unknown); the series is not invertible")]
    ConstantTermZero,
    #[error("residue {b} is not in [0, {a})")]
    BadResidue { a: u64, b: u64 },
    #[error("offsets {left}/24 and {right}/24 differ by a non-integral exponent")]
    OffsetMismatch { left: i64, right: i64 },
    #[error("operation needs an integral exponent offset, found {0}/24")]
    FractionalOffset(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Reads 64 bits starting at bit position `pos` (which may be negative or
/// run past the end; missing bits read as zero).
#[inline]
pub(crate) fn read_word(words: &[u64], pos: i64) -> u64 {
    if pos <= -(WORD_BITS as i64) {
        return 0;
    }
    let w = pos.div_euclid(WORD_BITS as i64);
    let b = pos.rem_euclid(WORD_BITS as i64) as u32;
    let get = |i: i64| -> u64 {
        if i < 0 || i as usize >= words.len() {
            0
        } else {
            words[i as usize]
        }
    };
    if b == 0 {
        get(w)
    } else {
        (get(w) >> b) | (get(w + 1) << (WORD_BITS as u32 - b))
    }
}

/// `dst ^= src << shift` restricted to `dst.len()` words.
#[inline]
fn xor_shifted_into(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / WORD_BITS;
    let bs = (shift % WORD_BITS) as u32;
    if ws >= dst.len() {
        return;
    }
    let end = dst.len().min(ws + src.len() + usize::from(bs != 0));
    let dst = &mut dst[ws..end];
    if bs == 0 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= *s;
        }
    } else {
        let mut carry = 0u64;
        for (i, d) in dst.iter_mut().enumerate() {
            let s = src.get(i).copied().unwrap_or(0);
            *d ^= (s << bs) | carry;
            carry = s >> (WORD_BITS as u32 - bs);
        }
    }
}

/// Generalized pentagonal numbers `k(3k-1)/2`, `k` in Z, below `limit`, in
/// increasing order (0, 1, 2, 5, 7, 12, 15, ...).
pub fn generalized_pentagonals(limit: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    out.push(0);
    let mut k = 1usize;
    loop {
        let a = k * (3 * k - 1) / 2;
        let b = k * (3 * k + 1) / 2;
        if a >= limit {
            break;
        }
        out.push(a);
        if b < limit {
            out.push(b);
        }
        k += 1;
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Series {
    words: Vec<u64>,
    trunc: usize,
    offset24: i64,
}

impl fmt::Debug for F2Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<usize> = self.support().take(16).collect();
        f.debug_struct("F2Series")
            .field("offset24", &self.offset24)
            .field("trunc", &self.trunc)
            .field("ones", &self.count_ones())
            .field("support_head", &shown)
            .finish()
    }
}

impl F2Series {
    pub fn zero(trunc: usize, offset24: i64) -> Self {
        F2Series {
            words: vec![0; words_for(trunc)],
            trunc,
            offset24,
        }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc, 0);
        if trunc > 0 {
            s.words[0] = 1;
        }
        s
    }

    /// Builds a series from exponents; repeated exponents cancel (XOR) and
    /// exponents at or beyond `trunc` are dropped.
    pub fn from_exponents<I>(exponents: I, trunc: usize, offset24: i64) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::zero(trunc, offset24);
        for e in exponents {
            if e < trunc {
                s.words[e / WORD_BITS] ^= 1u64 << (e % WORD_BITS);
            }
        }
        s
    }

    /// Builds a series from packed words; bits at or beyond `trunc` are cleared.
    pub fn from_words(mut words: Vec<u64>, trunc: usize, offset24: i64) -> Self {
        words.resize(words_for(trunc), 0);
        let mut s = F2Series {
            words,
            trunc,
            offset24,
        };
        s.mask_tail();
        s
    }

    /// `(q;q)_inf` reduced mod 2: the generalized pentagonal numbers.
    pub fn euler(trunc: usize) -> Self {
        Self::from_exponents(generalized_pentagonals(trunc), trunc, 0)
    }

    /// `eta(delta z)^r` mod 2, known up to relative exponent `trunc`, with
    /// `offset24 = delta * r`.
    pub fn eta_power(delta: u64, r: i64, trunc: usize) -> Self {
        assert!(delta >= 1, "eta_power: delta must be positive");
        let d = delta as usize;
        let inner_trunc = trunc.div_ceil(d).max(1);
        let base = F2Series::euler(inner_trunc);
        let powered = match r {
            0 => F2Series::one(inner_trunc),
            1 => base,
            -1 => base.inv().expect("euler product has constant term 1"),
            _ => base.pow(r).expect("euler product has constant term 1"),
        };
        let mut out = powered.inflate(delta).truncated(trunc);
        out.offset24 = delta as i64 * r;
        out
    }

    fn mask_tail(&mut self) {
        let rem = self.trunc % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    /// Exclusive upper bound of known absolute exponents, in units of 1/24.
    pub fn horizon24(&self) -> i64 {
        self.offset24 + 24 * self.trunc as i64
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn bit(&self, n: usize) -> bool {
        n < self.trunc && (self.words[n / WORD_BITS] >> (n % WORD_BITS)) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of set bits with index `< n`.
    pub fn count_ones_below(&self, n: usize) -> u64 {
        let n = n.min(self.trunc);
        let full = n / WORD_BITS;
        let mut c: u64 = self.words[..full]
            .iter()
            .map(|w| w.count_ones() as u64)
            .sum();
        let rem = n % WORD_BITS;
        if rem != 0 {
            c += (self.words[full] & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        c
    }

    /// Index of the first set bit, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD_BITS + b)
                }
            })
        })
    }

    /// Keeps only the first `trunc` coefficients (never extends the horizon).
    pub fn truncated(mut self, trunc: usize) -> Self {
        if trunc < self.trunc {
            self.trunc = trunc;
            self.words.truncate(words_for(trunc));
            self.mask_tail();
        }
        self
    }

    /// Multiplies by `q^k`.
    pub fn shift(mut self, k: i64) -> Self {
        self.offset24 += 24 * k;
        self
    }

    /// Re-expresses the series with a smaller offset `target24`, prepending
    /// zero coefficients. The horizon is unchanged.
    pub fn realigned(&self, target24: i64) -> Result<Self, SeriesError> {
        let diff = self.offset24 - target24;
        if diff % 24 != 0 {
            return Err(SeriesError::OffsetMismatch {
                left: self.offset24,
                right: target24,
            });
        }
        if diff < 0 {
            return Err(SeriesError::InvalidArgument(format!(
                "cannot realign offset {}/24 upward to {}/24",
                self.offset24, target24
            )));
        }
        let pad = (diff / 24) as usize;
        let trunc = self.trunc + pad;
        let mut words = vec![0u64; words_for(trunc)];
        xor_shifted_into(&mut words, &self.words, pad);
        Ok(F2Series {
            words,
            trunc,
            offset24: target24,
        })
    }

    /// Coefficientwise sum (XOR). Offsets must agree modulo 24; the result
    /// sits at the smaller offset and is known up to the smaller horizon.
    pub fn add(&self, other: &F2Series) -> Result<F2Series, SeriesError> {
        let base = self.offset24.min(other.offset24);
        let a = self.realigned(base)?;
        let b = other.realigned(base)?;
        let trunc = a.trunc.min(b.trunc);
        let mut out = a.truncated(trunc);
        for (d, s) in out.words.iter_mut().zip(&b.words) {
            *d ^= *s;
        }
        out.mask_tail();
        Ok(out)
    }

    /// First absolute exponent (in units of 1/24) at which the two series
    /// differ within their common horizon, or `None` if they agree there.
    pub fn first_mismatch(&self, other: &F2Series) -> Result<Option<i64>, SeriesError> {
        let base = self.offset24.min(other.offset24);
        let a = self.realigned(base)?;
        let b = other.realigned(base)?;
        let trunc = a.trunc.min(b.trunc);
        let nw = words_for(trunc);
        for i in 0..nw {
            let mut x = a.words[i] ^ b.words[i];
            if i + 1 == nw && trunc % WORD_BITS != 0 {
                x &= (1u64 << (trunc % WORD_BITS)) - 1;
            }
            if x != 0 {
                let idx = i * WORD_BITS + x.trailing_zeros() as usize;
                return Ok(Some(base + 24 * idx as i64));
            }
        }
        Ok(None)
    }

    /// Product over GF(2). The result is known only where no unknown
    /// coefficient of either factor can contribute.
    pub fn mul(&self, other: &F2Series) -> F2Series {
        let va = self.valuation().unwrap_or(self.trunc);
        let vb = other.valuation().unwrap_or(other.trunc);
        let trunc = (self.trunc + vb).min(other.trunc + va);
        let offset24 = self.offset24 + other.offset24;
        let mut out = vec![0u64; words_for(trunc)];
        let (sparse, dense) = if self.count_ones_below(trunc) <= other.count_ones_below(trunc) {
            (self, other)
        } else {
            (other, self)
        };
        for i in sparse.support() {
            if i >= trunc {
                break;
            }
            xor_shifted_into(&mut out, &dense.words, i);
        }
        F2Series::from_words(out, trunc, offset24)
    }

    /// Frobenius squaring: bit `n` moves to bit `2n`.
    pub fn square(&self) -> F2Series {
        self.inflate(2)
    }

    /// Multiplicative inverse, computed by word-parallel back-substitution
    /// `g[n] = [n == 0] + sum_{k >= 1, f[k] = 1} g[n - k]`.
    pub fn inv(&self) -> Result<F2Series, SeriesError> {
        if !self.bit(0) {
            return Err(SeriesError::ConstantTermZero);
        }
        let trunc = self.trunc;
        let support: Vec<usize> = self.support().skip(1).collect();
        let split = support.partition_point(|&k| k < WORD_BITS);
        let (near, far) = support.split_at(split);
        let nw = words_for(trunc);
        let mut g = vec![0u64; nw];
        for w in 0..nw {
            let n0 = (w * WORD_BITS) as i64;
            let mut acc = 0u64;
            for &k in far {
                if k as i64 > n0 + WORD_BITS as i64 - 1 {
                    break;
                }
                acc ^= read_word(&g[..w], n0 - k as i64);
            }
            let prev = if w > 0 { g[w - 1] } else { 0 };
            let mut cur = 0u64;
            let bits = (trunc - w * WORD_BITS).min(WORD_BITS);
            for j in 0..bits {
                let mut b = (acc >> j) & 1;
                if w == 0 && j == 0 {
                    b ^= 1;
                }
                for &k in near {
                    if k <= j {
                        b ^= (cur >> (j - k)) & 1;
                    } else {
                        b ^= (prev >> (WORD_BITS + j - k)) & 1;
                    }
                }
                cur |= b << j;
            }
            g[w] = cur;
        }
        Ok(F2Series::from_words(g, trunc, -self.offset24))
    }

    /// `f^e` by binary exponentiation with Frobenius squaring. Negative
    /// exponents need an invertible series.
    pub fn pow(&self, e: i64) -> Result<F2Series, SeriesError> {
        if e == 0 {
            return Ok(F2Series::one(self.trunc));
        }
        if e < 0 {
            if !self.bit(0) {
                return Err(SeriesError::ConstantTermZero);
            }
            let n = e.unsigned_abs() as i64;
            // When the positive power stays sparse, inverting it is far
            // cheaper than raising the (dense) inverse to a power.
            let positive = self.pow(n)?;
            if positive.count_ones().saturating_mul(16) <= positive.trunc as u64 {
                return positive.inv();
            }
            return self.inv()?.pow(n);
        }
        let mut e = e as u64;
        let mut base = self.clone();
        let mut acc: Option<F2Series> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.square();
        }
        Ok(acc.expect("e > 0"))
    }

    /// `sum_n c(a n + b) q^n` where `c(N)` is the coefficient of the absolute
    /// exponent `q^N`; the offset must be integral.
    pub fn dissect(&self, a: u64, b: u64) -> Result<F2Series, SeriesError> {
        if a == 0 || b >= a {
            return Err(SeriesError::BadResidue { a, b });
        }
        if self.offset24 % 24 != 0 {
            return Err(SeriesError::FractionalOffset(self.offset24));
        }
        let (a, b) = (a as i64, b as i64);
        let k = self.offset24 / 24;
        // smallest N with a N + b >= k
        let n0 = (k - b).div_euclid(a) + i64::from((k - b).rem_euclid(a) != 0);
        let first = a * n0 + b - k;
        let trunc = if first >= self.trunc as i64 {
            0
        } else {
            ((self.trunc as i64 - first + a - 1) / a) as usize
        };
        if a == 1 {
            let words = (0..words_for(trunc))
                .map(|i| read_word(&self.words, first + (i * WORD_BITS) as i64))
                .collect();
            return Ok(F2Series::from_words(words, trunc, 24 * n0));
        }
        let mut out = F2Series::zero(trunc, 24 * n0);
        for n in 0..trunc {
            if self.bit((first + a * n as i64) as usize) {
                out.words[n / WORD_BITS] |= 1u64 << (n % WORD_BITS);
            }
        }
        Ok(out)
    }

    /// Substitutes `q -> q^d`.
    pub fn inflate(&self, d: u64) -> F2Series {
        assert!(d >= 1, "inflate: d must be positive");
        let d = d as usize;
        let offset24 = self.offset24 * d as i64;
        if d == 1 {
            return self.clone();
        }
        let trunc = self.trunc * d;
        let mut words = vec![0u64; words_for(trunc)];
        if d == 2 {
            for (i, &w) in self.words.iter().enumerate() {
                let lo = spread_bits(w as u32);
                let hi = spread_bits((w >> 32) as u32);
                words[2 * i] = lo;
                if 2 * i + 1 < words.len() {
                    words[2 * i + 1] = hi;
                }
            }
        } else {
            for n in self.support() {
                let e = n * d;
                words[e / WORD_BITS] |= 1u64 << (e % WORD_BITS);
            }
        }
        F2Series::from_words(words, trunc, offset24)
    }

    /// Packed little-endian bytes of the coefficients with index `< n`.
    pub fn packed_bytes(&self, n: usize) -> Vec<u8> {
        let n = n.min(self.trunc);
        let nw = words_for(n);
        let mut out = Vec::with_capacity(nw * 8);
        for i in 0..nw {
            let mut w = self.words[i];
            if i + 1 == nw && !n.is_multiple_of(WORD_BITS) {
                w &= (1u64 << (n % WORD_BITS)) - 1;
            }
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }
}

/// Interleaves the bits of `x` with zeros: bit `i` moves to bit `2i`.
#[inline]
fn spread_bits(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

//! Segmented sieve with block prefix tables, and its on-disk format.
//!
//! Bit `n` of the bitset is set iff `n` is prime, for `0 <= n <= limit`.
//! Every [`BLOCK`] integers the store records the number of primes and the
//! sum of primes strictly below the block start, so `π(t)` and `Σ_{p≤t} p`
//! cost one table lookup plus a scan of at most one block.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{LabError, Result};

/// Integers per prefix-table block.
pub const BLOCK: u64 = 1 << 16;
const WORDS_PER_BLOCK: usize = (BLOCK / 64) as usize;

/// Largest supported sieve limit. Keeps `Σp` inside a `u64`.
pub const MAX_LIMIT: u64 = 1 << 34;

const MAGIC: &[u8; 4] = b"JLPK";
const VERSION: u32 = 1;

// Odd positions set: the candidate pattern for any even block start.
const ODD_MASK: u64 = 0xAAAA_AAAA_AAAA_AAAA;

#[derive(Clone, PartialEq, Eq)]
pub struct PrimeStore {
    limit: u64,
    words: Vec<u64>,
    /// `prefix_counts[b]` = number of primes below `b * BLOCK`.
    prefix_counts: Vec<u64>,
    /// `prefix_sums[b]` = sum of primes below `b * BLOCK`.
    prefix_sums: Vec<u64>,
}

impl std::fmt::Debug for PrimeStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeStore")
            .field("limit", &self.limit)
            .field("primes", &self.total_primes())
            .finish()
    }
}

fn small_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn try_zeroed(len: usize) -> Result<Vec<u64>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len).map_err(|_| LabError::Capacity {
        resource: "memory (bytes)",
        required: (len * 8) as f64,
        available: 0.0,
    })?;
    v.resize(len, 0);
    Ok(v)
}

fn sum_set_bits(word: u64, base: u64) -> u64 {
    let mut w = word;
    let mut s = 0;
    while w != 0 {
        s += base + u64::from(w.trailing_zeros());
        w &= w - 1;
    }
    s
}

impl PrimeStore {
    /// Sieves all primes up to `limit`.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(LabError::invalid(format!("sieve limit must be >= 2, got {limit}")));
        }
        if limit > MAX_LIMIT {
            return Err(LabError::Capacity {
                resource: "sieve limit cap",
                required: limit as f64,
                available: MAX_LIMIT as f64,
            });
        }
        let nblocks = (limit / BLOCK + 1) as usize;
        let mut words = try_zeroed(nblocks * WORDS_PER_BLOCK)?;
        let root = (limit as f64).sqrt() as u64 + 1;
        let base: Vec<u64> = small_primes(root).into_iter().filter(|&p| p > 2).collect();

        words
            .par_chunks_mut(WORDS_PER_BLOCK)
            .enumerate()
            .for_each(|(b, seg)| sieve_block(b as u64, seg, &base, limit));

        let mut prefix_counts = Vec::with_capacity(nblocks + 1);
        let mut prefix_sums = Vec::with_capacity(nblocks + 1);
        let (mut count, mut sum) = (0u64, 0u64);
        for (b, seg) in words.chunks(WORDS_PER_BLOCK).enumerate() {
            prefix_counts.push(count);
            prefix_sums.push(sum);
            let (c, s) = block_totals(b as u64, seg);
            count += c;
            sum += s;
        }
        prefix_counts.push(count);
        prefix_sums.push(sum);

        Ok(PrimeStore { limit, words, prefix_counts, prefix_sums })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn total_primes(&self) -> u64 {
        *self.prefix_counts.last().expect("prefix table is never empty")
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// Primes in increasing order.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = i as u64 * 64;
            std::iter::successors(if w == 0 { None } else { Some(w) }, |&x| {
                let next = x & (x - 1);
                (next != 0).then_some(next)
            })
            .map(move |x| base + u64::from(x.trailing_zeros()))
        })
    }

    fn check_argument(&self, t: f64) -> Result<u64> {
        if t.is_nan() || t < 0.0 {
            return Err(LabError::invalid(format!("prime-count argument must be >= 0, got {t}")));
        }
        if t > self.limit as f64 {
            return Err(LabError::OutOfRange {
                what: "t",
                value: t,
                min: 0.0,
                max: self.limit as f64,
            });
        }
        Ok(t.floor() as u64)
    }

    /// `π(t)`, the number of primes `<= floor(t)`.
    pub fn prime_count(&self, t: f64) -> Result<u64> {
        let n = self.check_argument(t)?;
        Ok(self.count_upto(n))
    }

    /// `Σ_{p <= floor(t)} p`.
    pub fn prime_sum(&self, t: f64) -> Result<u64> {
        let n = self.check_argument(t)?;
        Ok(self.sum_upto(n))
    }

    pub(crate) fn count_upto(&self, n: u64) -> u64 {
        let b = (n / BLOCK) as usize;
        let first = b * WORDS_PER_BLOCK;
        let last = (n / 64) as usize;
        let mut count = self.prefix_counts[b];
        for &w in &self.words[first..last] {
            count += u64::from(w.count_ones());
        }
        count + u64::from((self.words[last] & low_mask(n % 64)).count_ones())
    }

    pub(crate) fn sum_upto(&self, n: u64) -> u64 {
        let b = (n / BLOCK) as usize;
        let first = b * WORDS_PER_BLOCK;
        let last = (n / 64) as usize;
        let mut sum = self.prefix_sums[b];
        for (i, &w) in self.words[first..last].iter().enumerate() {
            sum += sum_set_bits(w, (first + i) as u64 * 64);
        }
        sum + sum_set_bits(self.words[last] & low_mask(n % 64), last as u64 * 64)
    }

    /// Recomputes every block from the bitset and compares with the stored
    /// prefix tables.
    pub fn verify_prefixes(&self) -> Result<()> {
        let nblocks = self.words.len() / WORDS_PER_BLOCK;
        if self.prefix_counts.len() != nblocks + 1 || self.prefix_sums.len() != nblocks + 1 {
            return Err(LabError::Integrity("prefix table length mismatch".into()));
        }
        let (mut count, mut sum) = (0u64, 0u64);
        for (b, seg) in self.words.chunks(WORDS_PER_BLOCK).enumerate() {
            if self.prefix_counts[b] != count || self.prefix_sums[b] != sum {
                return Err(LabError::Integrity(format!("prefix tables disagree at block {b}")));
            }
            let (c, s) = block_totals(b as u64, seg);
            count += c;
            sum += s;
        }
        if self.prefix_counts[nblocks] != count || self.prefix_sums[nblocks] != sum {
            return Err(LabError::Integrity("prefix table totals disagree".into()));
        }
        Ok(())
    }

    /// Serializes as `JLPK | version u32 | limit u64 | bitset | counts | sums | crc32`,
    /// all little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(
            16 + 8 * (self.words.len() + self.prefix_counts.len() + self.prefix_sums.len()) + 4,
        );
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.limit.to_le_bytes());
        for v in self.words.iter().chain(&self.prefix_counts).chain(&self.prefix_sums) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 20 {
            return Err(LabError::Integrity("prime store file is truncated".into()));
        }
        let (body, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
        if crc32fast::hash(body) != stored {
            return Err(LabError::Integrity("prime store checksum mismatch".into()));
        }
        if &body[..4] != MAGIC {
            return Err(LabError::Integrity("not a prime store file (bad magic)".into()));
        }
        let version = u32::from_le_bytes(body[4..8].try_into().expect("4 bytes"));
        if version != VERSION {
            return Err(LabError::Integrity(format!(
                "unsupported prime store version {version} (expected {VERSION})"
            )));
        }
        let limit = u64::from_le_bytes(body[8..16].try_into().expect("8 bytes"));
        if !(2..=MAX_LIMIT).contains(&limit) {
            return Err(LabError::Integrity(format!("stored limit {limit} is invalid")));
        }
        let nblocks = (limit / BLOCK + 1) as usize;
        let nwords = nblocks * WORDS_PER_BLOCK;
        let expected = 16 + 8 * (nwords + 2 * (nblocks + 1));
        if body.len() != expected {
            return Err(LabError::Integrity(format!(
                "prime store body has {} bytes, expected {expected}",
                body.len()
            )));
        }
        let mut values = body[16..]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")));
        let words: Vec<u64> = values.by_ref().take(nwords).collect();
        let prefix_counts: Vec<u64> = values.by_ref().take(nblocks + 1).collect();
        let prefix_sums: Vec<u64> = values.collect();
        let store = PrimeStore { limit, words, prefix_counts, prefix_sums };
        store.verify_prefixes()?;
        Ok(store)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&self.to_bytes())?;
            f.sync_all()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

fn low_mask(bit: u64) -> u64 {
    // bits 0..=bit
    if bit == 63 {
        u64::MAX
    } else {
        (1u64 << (bit + 1)) - 1
    }
}

fn sieve_block(b: u64, seg: &mut [u64], base: &[u64], limit: u64) {
    let lo = b * BLOCK;
    let hi = lo + BLOCK; // exclusive
    seg.fill(ODD_MASK);
    if b == 0 {
        seg[0] &= !0b10; // 1 is not prime
        seg[0] |= 0b100; // 2 is
    }
    for &p in base {
        let sq = p * p;
        if sq >= hi {
            break;
        }
        let mut m = if sq >= lo { sq } else { lo.div_ceil(p) * p };
        if m % 2 == 0 {
            m += p;
        }
        let step = 2 * p;
        while m < hi {
            let off = m - lo;
            seg[(off / 64) as usize] &= !(1u64 << (off % 64));
            m += step;
        }
    }
    if limit < hi - 1 {
        let cut = limit - lo; // keep offsets 0..=cut
        let w = (cut / 64) as usize;
        seg[w] &= low_mask(cut % 64);
        seg[w + 1..].fill(0);
    }
}

fn block_totals(b: u64, seg: &[u64]) -> (u64, u64) {
    let lo = b * BLOCK;
    seg.iter().enumerate().fold((0, 0), |(c, s), (i, &w)| {
        (c + u64::from(w.count_ones()), s + sum_set_bits(w, lo + i as u64 * 64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn ten_has_four_primes() {
        let s = PrimeStore::build(10).unwrap();
        assert_eq!(s.primes().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        assert_eq!(s.prime_count(10.0).unwrap(), 4);
    }

    #[test]
    fn limit_two() {
        let s = PrimeStore::build(2).unwrap();
        assert_eq!(s.primes().collect::<Vec<_>>(), vec![2]);
        assert_eq!(s.prime_count(1.5).unwrap(), 0);
        assert_eq!(s.prime_count(2.0).unwrap(), 1);
    }

    #[test]
    fn agrees_with_trial_division_across_block_boundary() {
        let limit = 2 * BLOCK + 777;
        let s = PrimeStore::build(limit).unwrap();
        let mut count = 0;
        let mut sum = 0;
        for n in 0..=limit {
            assert_eq!(s.is_prime(n), trial_division(n), "n = {n}");
            if trial_division(n) {
                count += 1;
                sum += n;
            }
            if n % 997 == 0 || n == limit || n % BLOCK <= 1 {
                assert_eq!(s.count_upto(n), count, "pi({n})");
                assert_eq!(s.sum_upto(n), sum, "sum({n})");
            }
        }
        assert_eq!(s.total_primes(), count);
        s.verify_prefixes().unwrap();
    }

    #[test]
    fn pi_of_a_million() {
        let s = PrimeStore::build(1_000_000).unwrap();
        assert_eq!(s.prime_count(100.0).unwrap(), 25);
        assert_eq!(s.prime_count(1e6).unwrap(), 78_498);
        assert_eq!(s.total_primes(), 78_498);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(PrimeStore::build(1), Err(LabError::InvalidArgument(_))));
        let s = PrimeStore::build(100).unwrap();
        assert!(matches!(s.prime_count(100.5), Err(LabError::OutOfRange { .. })));
        assert!(s.prime_count(-1.0).is_err());
    }

    #[test]
    fn byte_format_round_trips_and_detects_corruption() {
        let s = PrimeStore::build(200_000).unwrap();
        let bytes = s.to_bytes();
        assert_eq!(&bytes[..4], b"JLPK");
        assert_eq!(PrimeStore::from_bytes(&bytes).unwrap(), s);

        let mut bad = bytes.clone();
        bad[100] ^= 1;
        let err = PrimeStore::from_bytes(&bad).unwrap_err();
        assert!(err.to_string().contains("checksum mismatch"), "{err}");

        let mut wrong_version = bytes[..bytes.len() - 4].to_vec();
        wrong_version[4] = 9;
        let crc = crc32fast::hash(&wrong_version);
        wrong_version.extend_from_slice(&crc.to_le_bytes());
        assert!(PrimeStore::from_bytes(&wrong_version).unwrap_err().to_string().contains("version"));
    }
}

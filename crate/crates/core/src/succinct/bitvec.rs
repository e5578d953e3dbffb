//! Plain bitvector with a two-level rank directory.

use crate::codec::{put_u64, put_u64_slice, write_record, CodecError, Cursor};
use alloc::vec;
use alloc::vec::Vec;

const MAGIC: [u8; 4] = *b"BVEC";
const WORDS_PER_BLOCK: usize = 8; // 512 bits per directory block

/// A growable buffer of bits, used to assemble bitvectors before freezing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitBuf {
    words: Vec<u64>,
    len: usize,
}

impl BitBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_len(len: usize) -> Self {
        BitBuf {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let w = self.len / 64;
        if w == self.words.len() {
            self.words.push(0);
        }
        if bit {
            self.words[w] |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Sets the bit at 0-based position `idx` (must be within the length).
    pub fn set(&mut self, idx: usize, bit: bool) {
        assert!(idx < self.len, "bit index {} out of range {}", idx, self.len);
        let mask = 1u64 << (idx % 64);
        if bit {
            self.words[idx / 64] |= mask;
        } else {
            self.words[idx / 64] &= !mask;
        }
    }

    pub fn get(&self, idx: usize) -> Option<bool> {
        if idx >= self.len {
            return None;
        }
        Some(self.words[idx / 64] >> (idx % 64) & 1 == 1)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl FromIterator<bool> for BitBuf {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut buf = BitBuf::new();
        for b in iter {
            buf.push(b);
        }
        buf
    }
}

/// Immutable bitvector with constant-time rank and binary-search select.
///
/// The directory stores, per 512-bit block, one absolute count plus packed
/// 9-bit within-block counts: 128 directory bits per 512 data bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    buf: BitBuf,
    // counts[2b] = ones before block b; counts[2b+1] = packed 9-bit counts
    // of ones within block b before word j, for j in 1..8.
    counts: Vec<u64>,
    ones: u64,
}

impl BitVector {
    pub fn from_buf(buf: BitBuf) -> Self {
        let blocks = buf.words.len() / WORDS_PER_BLOCK + 1;
        let mut counts = Vec::with_capacity(blocks * 2);
        let mut abs = 0u64;
        for b in 0..blocks {
            counts.push(abs);
            let mut packed = 0u64;
            let mut within = 0u64;
            for j in 0..WORDS_PER_BLOCK {
                let w = b * WORDS_PER_BLOCK + j;
                if j > 0 {
                    packed |= within << (9 * (j - 1));
                }
                if w < buf.words.len() {
                    within += buf.words[w].count_ones() as u64;
                }
            }
            counts.push(packed);
            abs += within;
        }
        BitVector {
            buf,
            counts,
            ones: abs,
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self::from_buf(bits.into_iter().collect())
    }

    /// Builds a bitvector of length `len` with ones at the given 0-based
    /// positions (strictly increasing).
    pub fn from_positions(len: usize, positions: &[u64]) -> Self {
        let mut buf = BitBuf::with_len(len);
        for &p in positions {
            buf.set(p as usize, true);
        }
        Self::from_buf(buf)
    }

    pub fn len(&self) -> usize {
        self.buf.len
    }

    pub fn is_empty(&self) -> bool {
        self.buf.len == 0
    }

    pub fn num_ones(&self) -> u64 {
        self.ones
    }

    /// Bit at 0-based position `idx`.
    pub fn get(&self, idx: usize) -> Option<bool> {
        self.buf.get(idx)
    }

    fn sub_count(&self, block: usize, j: usize) -> u64 {
        if j == 0 {
            0
        } else {
            self.counts[2 * block + 1] >> (9 * (j - 1)) & 0x1ff
        }
    }

    /// Number of set bits among the first `prefix` positions
    /// (equivalently, in 1-based positions `[1, prefix]`).
    pub fn rank1(&self, prefix: usize) -> Option<u64> {
        if prefix > self.buf.len {
            return None;
        }
        let w = prefix / 64;
        let block = w / WORDS_PER_BLOCK;
        let j = w % WORDS_PER_BLOCK;
        let mut r = self.counts[2 * block] + self.sub_count(block, j);
        let bit = prefix % 64;
        if bit > 0 {
            r += (self.buf.words[w] & ((1u64 << bit) - 1)).count_ones() as u64;
        }
        Some(r)
    }

    /// Number of unset bits among the first `prefix` positions.
    pub fn rank0(&self, prefix: usize) -> Option<u64> {
        Some(prefix as u64 - self.rank1(prefix)?)
    }

    /// 1-based position of the k-th set bit, `1 <= k <= num_ones()`.
    pub fn select1(&self, k: u64) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        // Find the block whose absolute count is still below k.
        let nblocks = self.counts.len() / 2;
        let (mut lo, mut hi) = (0usize, nblocks);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.counts[2 * mid] < k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut remaining = k - self.counts[2 * lo];
        for j in 0..WORDS_PER_BLOCK {
            let w = lo * WORDS_PER_BLOCK + j;
            if w >= self.buf.words.len() {
                break;
            }
            let ones = self.buf.words[w].count_ones() as u64;
            if remaining > ones {
                remaining -= ones;
                continue;
            }
            return Some(w * 64 + select_in_word(self.buf.words[w], remaining) + 1);
        }
        None
    }

    /// 1-based position of the k-th unset bit.
    pub fn select0(&self, k: u64) -> Option<usize> {
        if k == 0 || k > self.buf.len as u64 - self.ones {
            return None;
        }
        let nblocks = self.counts.len() / 2;
        let zeros_before = |b: usize| (b * WORDS_PER_BLOCK * 64) as u64 - self.counts[2 * b];
        let (mut lo, mut hi) = (0usize, nblocks);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if zeros_before(mid) < k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut remaining = k - zeros_before(lo);
        for j in 0..WORDS_PER_BLOCK {
            let w = lo * WORDS_PER_BLOCK + j;
            if w >= self.buf.words.len() {
                break;
            }
            let word = !self.buf.words[w];
            let zeros = word.count_ones() as u64;
            if remaining > zeros {
                remaining -= zeros;
                continue;
            }
            let pos = w * 64 + select_in_word(word, remaining);
            return if pos < self.buf.len { Some(pos + 1) } else { None };
        }
        None
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        let mut payload = Vec::new();
        put_u64(&mut payload, self.buf.len as u64);
        put_u64_slice(&mut payload, &self.buf.words);
        write_record(out, MAGIC, 1, &payload);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let mut rec = cur.record(MAGIC, 1)?;
        let len = rec.u64()? as usize;
        let words = rec.u64_vec()?;
        if words.len() != len.div_ceil(64) {
            return Err(CodecError::Corrupt("bitvector word count"));
        }
        Ok(Self::from_buf(BitBuf { words, len }))
    }
}

/// 0-based position of the k-th set bit within a word, `1 <= k <= popcount`.
fn select_in_word(mut word: u64, k: u64) -> usize {
    debug_assert!(k >= 1 && k <= word.count_ones() as u64);
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitVector {
        BitVector::from_bools(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn rank_on_small_patterns() {
        let bv = bits("1010");
        assert_eq!(bv.rank1(0), Some(0));
        assert_eq!(bv.rank1(3), Some(2));
        assert_eq!(bv.rank1(4), Some(2));
        assert_eq!(bv.rank1(5), None);
        let all = bits("11111");
        assert_eq!(all.rank1(5), Some(5));
    }

    #[test]
    fn select_on_small_patterns() {
        let bv = bits("1010");
        assert_eq!(bv.select1(1), Some(1));
        assert_eq!(bv.select1(2), Some(3));
        assert_eq!(bv.select1(3), None);
        assert_eq!(bits("1").select1(1), Some(1));
        assert_eq!(bits("0011").select1(1), Some(3));
        assert_eq!(bv.select0(1), Some(2));
        assert_eq!(bv.select0(2), Some(4));
        assert_eq!(bv.select0(3), None);
    }

    #[test]
    fn rank_select_inverse_relation() {
        let bv = bits("0110100111010001");
        for k in 1..=bv.num_ones() {
            let pos = bv.select1(k).unwrap();
            assert_eq!(bv.rank1(pos), Some(k));
            assert_eq!(bv.get(pos - 1), Some(true));
            assert_eq!(bv.rank1(pos - 1), Some(k - 1));
        }
        for i in 0..=bv.len() {
            assert_eq!(bv.rank1(i).unwrap() + bv.rank0(i).unwrap(), i as u64);
        }
    }

    #[test]
    fn agrees_with_scan_across_block_boundaries() {
        // Deterministic pseudo-random content spanning several 512-bit blocks.
        let mut state = 0x9e3779b97f4a7c15u64;
        let content: Vec<bool> = (0..5000)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                state >> 62 == 3
            })
            .collect();
        let bv = BitVector::from_bools(content.iter().copied());
        let mut ones = 0u64;
        let mut next_one = 1u64;
        let mut next_zero = 1u64;
        for (i, &b) in content.iter().enumerate() {
            assert_eq!(bv.rank1(i), Some(ones));
            if b {
                assert_eq!(bv.select1(next_one), Some(i + 1));
                next_one += 1;
                ones += 1;
            } else {
                assert_eq!(bv.select0(next_zero), Some(i + 1));
                next_zero += 1;
            }
        }
        assert_eq!(bv.rank1(content.len()), Some(ones));
    }

    #[test]
    fn serialization_round_trips() {
        let bv = bits("10110010011");
        let mut out = Vec::new();
        bv.serialize_into(&mut out);
        let back = BitVector::deserialize(&mut Cursor::new(&out)).unwrap();
        assert_eq!(back, bv);
        let mut again = Vec::new();
        back.serialize_into(&mut again);
        assert_eq!(again, out);
    }

    #[test]
    fn empty_bitvector() {
        let bv = BitVector::from_bools(core::iter::empty());
        assert_eq!(bv.len(), 0);
        assert_eq!(bv.rank1(0), Some(0));
        assert_eq!(bv.select1(1), None);
    }
}

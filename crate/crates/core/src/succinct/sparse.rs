//! Sparse bitvector storing set-bit positions directly.
//!
//! Each 0-based position is split into `low_width` low bits, kept in a
//! [`FixedWidthIntArray`], and a high part coded in unary inside a plain
//! bitvector: the i-th set bit is written at position `high(i) + i`. Select
//! is a select on the unary part; rank locates the bucket of the queried
//! position and scans the few low parts inside it.

use super::{BitBuf, BitVector, FixedWidthIntArray};
use crate::codec::{put_u64, write_record, CodecError, Cursor};
use alloc::vec::Vec;

const MAGIC: [u8; 4] = *b"SBVC";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBitVector {
    len: usize,
    low_width: u32,
    lows: FixedWidthIntArray,
    highs: BitVector,
}

impl SparseBitVector {
    /// Builds from strictly increasing 0-based set-bit positions.
    pub fn from_positions(len: usize, positions: &[u64]) -> Self {
        let n = positions.len() as u64;
        assert!(
            positions.iter().all(|&p| (p as usize) < len),
            "set position beyond length"
        );
        assert!(
            positions.windows(2).all(|w| w[0] < w[1]),
            "positions must be strictly increasing"
        );
        let low_width = if n == 0 {
            0
        } else {
            // floor(log2(u / n)), clamped to keep the unary part linear in n.
            let ratio = (len as u64 / n).max(1);
            63 - ratio.leading_zeros()
        };
        let mut lows = FixedWidthIntArray::zeroed(low_width, positions.len());
        let mask = if low_width == 0 {
            0
        } else {
            (1u64 << low_width) - 1
        };
        let top_buckets = if len == 0 {
            0
        } else {
            ((len - 1) as u64 >> low_width) + 1
        };
        let mut highs = BitBuf::with_len(positions.len() + top_buckets as usize);
        for (i, &p) in positions.iter().enumerate() {
            lows.set(i, p & mask);
            highs.set((p >> low_width) as usize + i, true);
        }
        SparseBitVector {
            len,
            low_width,
            lows,
            highs: BitVector::from_buf(highs),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn num_ones(&self) -> u64 {
        self.lows.len() as u64
    }

    /// 1-based position of the k-th set bit.
    pub fn select1(&self, k: u64) -> Option<usize> {
        if k == 0 || k > self.num_ones() {
            return None;
        }
        let unary_pos = self.highs.select1(k)? as u64 - 1;
        let bucket = unary_pos - (k - 1);
        let low = self.lows.get(k as usize - 1).unwrap();
        Some(((bucket << self.low_width) | low) as usize + 1)
    }

    /// Number of set bits among the first `prefix` positions.
    pub fn rank1(&self, prefix: usize) -> Option<u64> {
        if prefix > self.len {
            return None;
        }
        if prefix == 0 || self.num_ones() == 0 {
            return Some(0);
        }
        let p = prefix as u64 - 1; // count ones at positions <= p
        let bucket = p >> self.low_width;
        // Zeros in the unary part close buckets: the `bucket`-th zero sits
        // after all ones of earlier buckets, so those ones number
        // select0(bucket) - bucket.
        let mut idx = if bucket == 0 {
            0
        } else {
            self.highs.select0(bucket).unwrap() as u64 - bucket
        };
        let low_bound = if self.low_width == 0 {
            0
        } else {
            p & ((1u64 << self.low_width) - 1)
        };
        // Ones inside the bucket occupy consecutive unary positions starting
        // at bucket + idx, with increasing low parts.
        while (idx as usize) < self.lows.len()
            && self.highs.get((bucket + idx) as usize) == Some(true)
            && self.lows.get(idx as usize).unwrap() <= low_bound
        {
            idx += 1;
        }
        Some(idx)
    }

    pub fn get(&self, idx: usize) -> Option<bool> {
        if idx >= self.len {
            return None;
        }
        Some(self.rank1(idx + 1).unwrap() > self.rank1(idx).unwrap())
    }

    /// Decodes back to the 0-based positions of set bits.
    pub fn positions(&self) -> Vec<u64> {
        (1..=self.num_ones())
            .map(|k| self.select1(k).unwrap() as u64 - 1)
            .collect()
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        let mut payload = Vec::new();
        put_u64(&mut payload, self.len as u64);
        put_u64(&mut payload, self.low_width as u64);
        self.lows.serialize_into(&mut payload);
        self.highs.serialize_into(&mut payload);
        write_record(out, MAGIC, 1, &payload);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let mut rec = cur.record(MAGIC, 1)?;
        let len = rec.u64()? as usize;
        let low_width = rec.u64()? as u32;
        let lows = FixedWidthIntArray::deserialize(&mut rec)?;
        let highs = BitVector::deserialize(&mut rec)?;
        Ok(SparseBitVector {
            len,
            low_width,
            lows,
            highs,
        })
    }
}

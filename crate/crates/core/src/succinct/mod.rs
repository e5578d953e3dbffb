//! Rank/select bitvectors and fixed-width integer arrays.
//!
//! These are the building blocks every index in this crate sits on:
//!
//! * [`BitVector`] — a plain bitvector with a two-level rank directory
//!   (constant-time rank, ~25% space overhead) and binary-search select.
//! * [`SparseBitVector`] — positions of set bits split into fixed-width low
//!   parts and a unary-coded high part; constant-time select, suited to very
//!   sparse contents.
//! * [`RrrBitVector`] — block-compressed bitvector (class + enumerative
//!   offset per 15-bit block) with a sampled rank directory.
//! * [`FixedWidthIntArray`] — `n` integers of exactly `w` bits each.
//!
//! Bit positions in query results are 1-based: `select1(k)` returns the
//! 1-based position of the k-th set bit, and `rank1(i)` counts set bits among
//! the first `i` positions. All structures are immutable once built and safe
//! for concurrent readers.

mod bitvec;
mod intarray;
mod rrr;
mod sparse;

pub use bitvec::{BitBuf, BitVector};
pub use intarray::FixedWidthIntArray;
pub use rrr::RrrBitVector;
pub use sparse::SparseBitVector;

use crate::codec::{CodecError, Cursor};
use alloc::vec::Vec;

/// A rank-capable bitmap that is either plain or RRR-compressed.
///
/// Wavelet-matrix levels are built against this so the compressed variant is
/// interchangeable with the plain one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankBits {
    Plain(BitVector),
    Rrr(RrrBitVector),
}

impl RankBits {
    pub fn from_buf(buf: BitBuf, rrr_sampling: Option<u32>) -> Self {
        match rrr_sampling {
            None => RankBits::Plain(BitVector::from_buf(buf)),
            Some(s) => RankBits::Rrr(RrrBitVector::from_buf(&buf, s)),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RankBits::Plain(b) => b.len(),
            RankBits::Rrr(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_ones(&self) -> u64 {
        match self {
            RankBits::Plain(b) => b.num_ones(),
            RankBits::Rrr(b) => b.num_ones(),
        }
    }

    /// Bit at 0-based position `idx`.
    pub fn get(&self, idx: usize) -> Option<bool> {
        match self {
            RankBits::Plain(b) => b.get(idx),
            RankBits::Rrr(b) => b.get(idx),
        }
    }

    /// Number of set bits among the first `prefix` positions.
    pub fn rank1(&self, prefix: usize) -> Option<u64> {
        match self {
            RankBits::Plain(b) => b.rank1(prefix),
            RankBits::Rrr(b) => b.rank1(prefix),
        }
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        match self {
            RankBits::Plain(b) => {
                out.push(0);
                b.serialize_into(out);
            }
            RankBits::Rrr(b) => {
                out.push(1);
                b.serialize_into(out);
            }
        }
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        match cur.u8()? {
            0 => Ok(RankBits::Plain(BitVector::deserialize(cur)?)),
            1 => Ok(RankBits::Rrr(RrrBitVector::deserialize(cur)?)),
            _ => Err(CodecError::Corrupt("unknown bitmap tag")),
        }
    }
}

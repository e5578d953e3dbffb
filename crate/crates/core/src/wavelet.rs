//! Wavelet matrix over an integer sequence.
//!
//! Stores `width = ceil(log2(alphabet))` bitmaps of the sequence length; level
//! 0 holds the top bit of every value, and each level reorders positions by
//! the bit above (zeros first). Supports access, rank, and counting the
//! values of a range that fall inside an interval, each in `O(width)` bitmap
//! rank operations.
//!
//! Bitmaps are plain by default; RRR-compressed bitmaps can be selected at
//! build time and behave identically.

use crate::codec::{put_u64, write_record, CodecError, Cursor};
use crate::succinct::{BitBuf, RankBits};
use alloc::vec::Vec;
use core::fmt;

const MAGIC: [u8; 4] = *b"WMAT";

/// Build/behaviour options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WaveletOptions {
    /// When set, level bitmaps are RRR-compressed with this sampling rate.
    pub rrr_sampling: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WaveletError {
    PositionOutOfRange { pos: usize, len: usize },
    InvalidRange,
    ValueTooWide { value: u64, width: u32 },
}

impl fmt::Display for WaveletError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveletError::PositionOutOfRange { pos, len } => {
                write!(f, "position {} out of range 1..={}", pos, len)
            }
            WaveletError::InvalidRange => write!(f, "invalid query range"),
            WaveletError::ValueTooWide { value, width } => {
                write!(f, "value {} does not fit in {} bits", value, width)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Level {
    bits: RankBits,
    zeros: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletMatrix {
    len: usize,
    width: u32,
    levels: Vec<Level>,
}

impl WaveletMatrix {
    /// Builds over `values`; the alphabet is `[0, alphabet_size)` and must
    /// cover every value. At least one level is always built.
    pub fn build(
        values: &[u64],
        alphabet_size: u64,
        opts: WaveletOptions,
    ) -> Result<Self, WaveletError> {
        let width = FixedWidth::for_alphabet(alphabet_size);
        for &v in values {
            if width.0 < 64 && v >> width.0 != 0 {
                return Err(WaveletError::ValueTooWide {
                    value: v,
                    width: width.0,
                });
            }
        }
        let mut current: Vec<u64> = values.to_vec();
        let mut levels = Vec::with_capacity(width.0 as usize);
        for level in (0..width.0).rev() {
            let mut buf = BitBuf::with_len(current.len());
            let mut ones = Vec::new();
            let mut zeros = Vec::new();
            for (i, &v) in current.iter().enumerate() {
                if v >> level & 1 == 1 {
                    buf.set(i, true);
                    ones.push(v);
                } else {
                    zeros.push(v);
                }
            }
            levels.push(Level {
                bits: RankBits::from_buf(buf, opts.rrr_sampling),
                zeros: zeros.len() as u64,
            });
            zeros.extend_from_slice(&ones);
            current = zeros;
        }
        Ok(WaveletMatrix {
            len: values.len(),
            width: width.0,
            levels,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of bits per value.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Value at 1-based position `pos`.
    pub fn access(&self, pos: usize) -> Result<u64, WaveletError> {
        if pos == 0 || pos > self.len {
            return Err(WaveletError::PositionOutOfRange { pos, len: self.len });
        }
        let mut idx = pos - 1;
        let mut value = 0u64;
        for (d, level) in self.levels.iter().enumerate() {
            let bit = level.bits.get(idx).unwrap();
            if bit {
                value |= 1u64 << (self.width as usize - 1 - d);
                idx = (level.zeros + level.bits.rank1(idx).unwrap()) as usize;
            } else {
                idx -= level.bits.rank1(idx).unwrap() as usize;
            }
        }
        Ok(value)
    }

    /// Occurrences of values `< bound` within 0-based half-open `[lo, hi)`.
    fn count_below(&self, mut lo: usize, mut hi: usize, bound: u64) -> u64 {
        if self.width < 64 && bound >> self.width != 0 {
            return (hi - lo) as u64;
        }
        let mut count = 0u64;
        for (d, level) in self.levels.iter().enumerate() {
            let bit = bound >> (self.width as usize - 1 - d) & 1 == 1;
            let ones_lo = level.bits.rank1(lo).unwrap();
            let ones_hi = level.bits.rank1(hi).unwrap();
            if bit {
                // everything with a 0 here is below the bound
                count += (hi - lo) as u64 - (ones_hi - ones_lo);
                lo = (level.zeros + ones_lo) as usize;
                hi = (level.zeros + ones_hi) as usize;
            } else {
                lo -= ones_lo as usize;
                hi -= ones_hi as usize;
            }
            if lo == hi {
                break;
            }
        }
        count
    }

    /// Counts positions in the 1-based inclusive range `[pos_lo, pos_hi]`
    /// whose value lies in `[val_lo, val_hi]`.
    pub fn range_count(
        &self,
        pos_lo: usize,
        pos_hi: usize,
        val_lo: u64,
        val_hi: u64,
    ) -> Result<u64, WaveletError> {
        if pos_lo == 0 || pos_lo > pos_hi || pos_hi > self.len || val_lo > val_hi {
            return Err(WaveletError::InvalidRange);
        }
        let lo = pos_lo - 1;
        let hi = pos_hi;
        let below_hi = match val_hi.checked_add(1) {
            Some(b) => self.count_below(lo, hi, b),
            None => (hi - lo) as u64,
        };
        Ok(below_hi - self.count_below(lo, hi, val_lo))
    }

    /// Occurrences of `value` in the 1-based inclusive range.
    pub fn rank_value(
        &self,
        pos_lo: usize,
        pos_hi: usize,
        value: u64,
    ) -> Result<u64, WaveletError> {
        self.range_count(pos_lo, pos_hi, value, value)
    }

    /// Serialized payload size in bytes (excluding record headers).
    pub fn payload_bytes(&self) -> usize {
        let mut out = Vec::new();
        self.serialize_into(&mut out);
        out.len()
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        let mut payload = Vec::new();
        put_u64(&mut payload, self.len as u64);
        put_u64(&mut payload, self.width as u64);
        for level in &self.levels {
            put_u64(&mut payload, level.zeros);
            level.bits.serialize_into(&mut payload);
        }
        write_record(out, MAGIC, 1, &payload);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let mut rec = cur.record(MAGIC, 1)?;
        let len = rec.u64()? as usize;
        let width = rec.u64()? as u32;
        if width == 0 || width > 64 {
            return Err(CodecError::Corrupt("wavelet width"));
        }
        let mut levels = Vec::with_capacity(width as usize);
        for _ in 0..width {
            let zeros = rec.u64()?;
            let bits = RankBits::deserialize(&mut rec)?;
            if bits.len() != len {
                return Err(CodecError::Corrupt("wavelet level length"));
            }
            levels.push(Level { bits, zeros });
        }
        Ok(WaveletMatrix { len, width, levels })
    }
}

/// Bits needed for an alphabet `[0, size)`; at least 1.
struct FixedWidth(u32);

impl FixedWidth {
    fn for_alphabet(size: u64) -> Self {
        let max = size.saturating_sub(1);
        FixedWidth((64 - max.leading_zeros()).max(1))
    }
}

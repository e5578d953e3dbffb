//! Fixed-width packed integer array.

use crate::codec::{put_u64, put_u64_slice, write_record, CodecError, Cursor};
use alloc::vec;
use alloc::vec::Vec;

const MAGIC: [u8; 4] = *b"FWIA";

/// `n` values stored in exactly `width` bits each, `0 <= width <= 64`.
///
/// A width of 0 is allowed and stores nothing; every value is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedWidthIntArray {
    words: Vec<u64>,
    len: usize,
    width: u32,
}

impl FixedWidthIntArray {
    pub fn new(width: u32) -> Self {
        assert!(width <= 64);
        FixedWidthIntArray {
            words: Vec::new(),
            len: 0,
            width,
        }
    }

    pub fn zeroed(width: u32, len: usize) -> Self {
        assert!(width <= 64);
        FixedWidthIntArray {
            words: vec![0; (len * width as usize).div_ceil(64)],
            len,
            width,
        }
    }

    pub fn from_values(width: u32, values: &[u64]) -> Self {
        let mut a = Self::zeroed(width, values.len());
        for (i, &v) in values.iter().enumerate() {
            a.set(i, v);
        }
        a
    }

    /// Smallest width that can hold `max_value`.
    pub fn width_for(max_value: u64) -> u32 {
        64 - max_value.leading_zeros()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Number of payload bytes when serialized (excluding the record header).
    pub fn payload_bytes(&self) -> usize {
        self.words.len() * 8 + 24
    }

    pub fn push(&mut self, value: u64) {
        let needed = ((self.len + 1) * self.width as usize).div_ceil(64);
        if needed > self.words.len() {
            self.words.resize(needed, 0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    /// Value at 0-based index `idx`, or `None` out of range.
    pub fn get(&self, idx: usize) -> Option<u64> {
        if idx >= self.len {
            return None;
        }
        if self.width == 0 {
            return Some(0);
        }
        let w = self.width as usize;
        let bit = idx * w;
        let word = bit / 64;
        let off = bit % 64;
        let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        let mut v = self.words[word] >> off;
        if off + w > 64 {
            v |= self.words[word + 1] << (64 - off);
        }
        Some(v & mask)
    }

    /// Stores `value` at `idx`; `value` must fit in the width.
    pub fn set(&mut self, idx: usize, value: u64) {
        assert!(idx < self.len, "index {} out of range {}", idx, self.len);
        if self.width == 0 {
            assert_eq!(value, 0, "width-0 array stores only zeros");
            return;
        }
        let w = self.width as usize;
        let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        assert!(value <= mask, "value {} does not fit in {} bits", value, w);
        let bit = idx * w;
        let word = bit / 64;
        let off = bit % 64;
        self.words[word] = (self.words[word] & !(mask << off)) | (value << off);
        if off + w > 64 {
            let high_bits = off + w - 64;
            let high_mask = (1u64 << high_bits) - 1;
            self.words[word + 1] = (self.words[word + 1] & !high_mask) | (value >> (64 - off));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i).unwrap())
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        let mut payload = Vec::new();
        put_u64(&mut payload, self.len as u64);
        put_u64(&mut payload, self.width as u64);
        put_u64_slice(&mut payload, &self.words);
        write_record(out, MAGIC, 1, &payload);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let mut rec = cur.record(MAGIC, 1)?;
        let len = rec.u64()? as usize;
        let width = rec.u64()? as u32;
        if width > 64 {
            return Err(CodecError::Corrupt("int array width"));
        }
        let words = rec.u64_vec()?;
        if words.len() != (len * width as usize).div_ceil(64) {
            return Err(CodecError::Corrupt("int array word count"));
        }
        Ok(FixedWidthIntArray { words, len, width })
    }
}

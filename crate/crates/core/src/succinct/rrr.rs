//! Block-compressed bitvector.
//!
//! The content is cut into 15-bit blocks. Each block stores its class (the
//! number of set bits, 4 bits) plus an enumerative offset identifying the
//! block among all blocks of that class, taking `ceil(log2(C(15, class)))`
//! bits. A rank directory samples cumulative ones and the offset-stream bit
//! position every `sampling` blocks; rank scans at most `sampling` classes
//! and decodes a single block.

use super::{BitBuf, FixedWidthIntArray};
use crate::codec::{put_u64, put_u64_slice, write_record, CodecError, Cursor};
use alloc::vec::Vec;

const MAGIC: [u8; 4] = *b"RRRB";
const BLOCK: usize = 15;

// C(n, k) for n, k in 0..=15.
const fn binomials() -> [[u16; 16]; 16] {
    let mut c = [[0u16; 16]; 16];
    let mut n = 0;
    while n < 16 {
        c[n][0] = 1;
        let mut k = 1;
        while k <= n {
            c[n][k] = c[n - 1][k - 1] + if k <= n - 1 { c[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    c
}

const BINOM: [[u16; 16]; 16] = binomials();

// Offset width in bits for each class.
const fn class_widths() -> [u32; 16] {
    let mut w = [0u32; 16];
    let mut k = 0;
    while k <= 15 {
        let count = BINOM[15][k] as u32;
        let mut bits = 0;
        while (1u32 << bits) < count {
            bits += 1;
        }
        w[k] = bits;
        k += 1;
    }
    w
}

const CLASS_WIDTH: [u32; 16] = class_widths();

/// Enumerative rank of a 15-bit block within its class (combinadic).
fn encode_offset(block: u16) -> u64 {
    let mut offset = 0u64;
    let mut j = 0usize;
    for p in 0..BLOCK {
        if block >> p & 1 == 1 {
            j += 1;
            offset += BINOM[p][j] as u64;
        }
    }
    offset
}

fn decode_offset(mut offset: u64, class: usize) -> u16 {
    let mut block = 0u16;
    let mut j = class;
    while j > 0 {
        // largest p with C(p, j) <= offset
        let mut p = j - 1;
        while p + 1 < 16 && BINOM[p + 1][j] as u64 <= offset {
            p += 1;
        }
        block |= 1 << p;
        offset -= BINOM[p][j] as u64;
        j -= 1;
    }
    block
}

fn read_bits(words: &[u64], pos: usize, width: u32) -> u64 {
    if width == 0 {
        return 0;
    }
    let word = pos / 64;
    let off = pos % 64;
    let mask = (1u64 << width) - 1;
    let mut v = words[word] >> off;
    if off + width as usize > 64 && word + 1 < words.len() {
        v |= words[word + 1] << (64 - off);
    }
    v & mask
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrrBitVector {
    len: usize,
    ones: u64,
    sampling: u32,
    classes: FixedWidthIntArray,
    offsets: Vec<u64>,
    offset_bits: usize,
    // Per sample: cumulative ones before the sampled block, and the bit
    // position of its offset within the stream.
    sample_ones: FixedWidthIntArray,
    sample_pos: FixedWidthIntArray,
}

impl RrrBitVector {
    pub fn from_buf(buf: &BitBuf, sampling: u32) -> Self {
        assert!(sampling >= 1);
        let len = buf.len();
        let nblocks = len.div_ceil(BLOCK);
        let mut classes = FixedWidthIntArray::zeroed(4, nblocks);
        let mut stream = BitBuf::new();
        let mut block_pos = Vec::with_capacity(nblocks);
        let mut block_ones = Vec::with_capacity(nblocks);
        let mut ones = 0u64;
        for b in 0..nblocks {
            let mut bits = 0u16;
            for i in 0..BLOCK {
                if buf.get(b * BLOCK + i) == Some(true) {
                    bits |= 1 << i;
                }
            }
            let class = bits.count_ones() as usize;
            classes.set(b, class as u64);
            block_pos.push(stream.len());
            block_ones.push(ones);
            ones += class as u64;
            let offset = encode_offset(bits);
            for i in 0..CLASS_WIDTH[class] {
                stream.push(offset >> i & 1 == 1);
            }
        }
        let offset_bits = stream.len();
        let nsamples = nblocks.div_ceil(sampling as usize);
        let mut sample_ones =
            FixedWidthIntArray::zeroed(FixedWidthIntArray::width_for(ones.max(1)), nsamples);
        let mut sample_pos = FixedWidthIntArray::zeroed(
            FixedWidthIntArray::width_for(offset_bits.max(1) as u64),
            nsamples,
        );
        for s in 0..nsamples {
            let b = s * sampling as usize;
            sample_ones.set(s, block_ones[b]);
            sample_pos.set(s, block_pos[b] as u64);
        }
        RrrBitVector {
            len,
            ones,
            sampling,
            classes,
            offsets: stream.words().to_vec(),
            offset_bits,
            sample_ones,
            sample_pos,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn num_ones(&self) -> u64 {
        self.ones
    }

    pub fn sampling(&self) -> u32 {
        self.sampling
    }

    /// Walks from the nearest sample to block `b`; returns (ones before b,
    /// stream bit position of b's offset).
    fn locate_block(&self, b: usize) -> (u64, usize) {
        let s = b / self.sampling as usize;
        let mut ones = self.sample_ones.get(s).unwrap();
        let mut pos = self.sample_pos.get(s).unwrap() as usize;
        for blk in s * self.sampling as usize..b {
            let class = self.classes.get(blk).unwrap() as usize;
            ones += class as u64;
            pos += CLASS_WIDTH[class] as usize;
        }
        (ones, pos)
    }

    fn decode_block(&self, b: usize, pos: usize) -> u16 {
        let class = self.classes.get(b).unwrap() as usize;
        decode_offset(read_bits(&self.offsets, pos, CLASS_WIDTH[class]), class)
    }

    pub fn get(&self, idx: usize) -> Option<bool> {
        if idx >= self.len {
            return None;
        }
        let b = idx / BLOCK;
        let (_, pos) = self.locate_block(b);
        Some(self.decode_block(b, pos) >> (idx % BLOCK) & 1 == 1)
    }

    /// Number of set bits among the first `prefix` positions.
    pub fn rank1(&self, prefix: usize) -> Option<u64> {
        if prefix > self.len {
            return None;
        }
        if prefix == 0 {
            return Some(0);
        }
        let b = prefix / BLOCK;
        let r = prefix % BLOCK;
        if b == self.classes.len() {
            return Some(self.ones);
        }
        let (mut ones, pos) = self.locate_block(b);
        if r > 0 {
            let bits = self.decode_block(b, pos);
            ones += (bits & ((1u16 << r) - 1)).count_ones() as u64;
        }
        Some(ones)
    }

    /// 1-based position of the k-th set bit.
    pub fn select1(&self, k: u64) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        // Binary search over samples, then scan.
        let nsamples = self.sample_ones.len();
        let (mut lo, mut hi) = (0usize, nsamples);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.sample_ones.get(mid).unwrap() < k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut b = lo * self.sampling as usize;
        let mut ones = self.sample_ones.get(lo).unwrap();
        let mut pos = self.sample_pos.get(lo).unwrap() as usize;
        loop {
            let class = self.classes.get(b).unwrap() as usize;
            if ones + class as u64 >= k {
                let mut bits = self.decode_block(b, pos);
                let mut remaining = k - ones;
                while remaining > 1 {
                    bits &= bits - 1;
                    remaining -= 1;
                }
                return Some(b * BLOCK + bits.trailing_zeros() as usize + 1);
            }
            ones += class as u64;
            pos += CLASS_WIDTH[class] as usize;
            b += 1;
        }
    }

    /// Payload size in bytes once serialized (excluding the record header).
    pub fn payload_bytes(&self) -> usize {
        32 + self.classes.payload_bytes() + self.offsets.len() * 8 + 8
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        let mut payload = Vec::new();
        put_u64(&mut payload, self.len as u64);
        put_u64(&mut payload, self.sampling as u64);
        put_u64(&mut payload, self.offset_bits as u64);
        self.classes.serialize_into(&mut payload);
        put_u64_slice(&mut payload, &self.offsets);
        write_record(out, MAGIC, 1, &payload);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let mut rec = cur.record(MAGIC, 1)?;
        let len = rec.u64()? as usize;
        let sampling = rec.u64()? as u32;
        let offset_bits = rec.u64()? as usize;
        let classes = FixedWidthIntArray::deserialize(&mut rec)?;
        let offsets = rec.u64_vec()?;
        if sampling == 0 || classes.len() != len.div_ceil(BLOCK) {
            return Err(CodecError::Corrupt("rrr geometry"));
        }
        // Rebuild the sampled directory.
        let mut ones = 0u64;
        let mut pos = 0usize;
        let nblocks = classes.len();
        let nsamples = nblocks.div_ceil(sampling as usize);
        let mut block_ones = Vec::with_capacity(nsamples);
        let mut block_pos = Vec::with_capacity(nsamples);
        for b in 0..nblocks {
            if b % sampling as usize == 0 {
                block_ones.push(ones);
                block_pos.push(pos as u64);
            }
            let class = classes.get(b).unwrap() as usize;
            if class > 15 {
                return Err(CodecError::Corrupt("rrr class"));
            }
            ones += class as u64;
            pos += CLASS_WIDTH[class] as usize;
        }
        if pos != offset_bits {
            return Err(CodecError::Corrupt("rrr offset stream length"));
        }
        let sample_ones = FixedWidthIntArray::from_values(
            FixedWidthIntArray::width_for(ones.max(1)),
            &block_ones,
        );
        let sample_pos = FixedWidthIntArray::from_values(
            FixedWidthIntArray::width_for(offset_bits.max(1) as u64),
            &block_pos,
        );
        Ok(RrrBitVector {
            len,
            ones,
            sampling,
            classes,
            offsets,
            offset_bits,
            sample_ones,
            sample_pos,
        })
    }
}

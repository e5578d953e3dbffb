//! Cyclic compressed suffix array over an integer sequence of 0-terminated
//! trip strings.
//!
//! Suffix comparison treats each trip as a cyclic string: the successor of a
//! trip's terminator is the trip's own first position, so following the
//! successor permutation from any rank walks round exactly one trip. One
//! extra sentinel suffix, smaller than everything, closes the suffix array
//! (rank 1, a fixed point of the permutation); all real suffixes occupy
//! ranks `2..=n+1`.
//!
//! The index keeps only the sampled successor permutation (absolute samples
//! every `t_psi` ranks, zigzag var-byte deltas in between) and a sparse
//! bitvector marking where each symbol's region of ranks starts. Backward
//! search proceeds right-to-left over a pattern of symbol ranges; within a
//! region the permutation is increasing, so each step is a pair of binary
//! searches.

use crate::codec::{put_u64, write_record, CodecError, Cursor};
use crate::succinct::{FixedWidthIntArray, SparseBitVector};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CsaError {
    Malformed(&'static str),
}

impl fmt::Display for CsaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CsaError::Malformed(what) => write!(f, "malformed sequence: {}", what),
        }
    }
}

/// The text: trip strings over `1..sigma`, each terminated by a 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSequence {
    symbols: Vec<u32>,
    // 1-based start position of the trip containing each position
    trip_start: Vec<u32>,
    // (start, len) per trip, 1-based starts
    trips: Vec<(u32, u32)>,
}

impl IntSequence {
    pub fn new(symbols: Vec<u32>) -> Result<Self, CsaError> {
        if symbols.is_empty() {
            return Err(CsaError::Malformed("empty sequence"));
        }
        if *symbols.last().unwrap() != 0 {
            return Err(CsaError::Malformed("sequence must end with a terminator"));
        }
        let mut trip_start = Vec::with_capacity(symbols.len());
        let mut trips = Vec::new();
        let mut start = 1u32;
        for (i, &sym) in symbols.iter().enumerate() {
            trip_start.push(start);
            if sym == 0 {
                let len = i as u32 + 2 - start;
                if len < 2 {
                    return Err(CsaError::Malformed("empty trip"));
                }
                trips.push((start, len));
                start = i as u32 + 2;
            }
        }
        Ok(IntSequence {
            symbols,
            trip_start,
            trips,
        })
    }

    /// Text length `n`.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn num_trips(&self) -> usize {
        self.trips.len()
    }

    pub fn trips(&self) -> &[(u32, u32)] {
        &self.trips
    }

    /// Symbol at 1-based position.
    pub fn get(&self, pos: usize) -> Option<u32> {
        self.symbols.get(pos.wrapping_sub(1)).copied()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    fn sym(&self, pos: u32) -> u32 {
        self.symbols[pos as usize - 1]
    }

    /// Cyclic successor: past a terminator the trip wraps to its own start.
    pub fn succ(&self, pos: u32) -> u32 {
        if self.sym(pos) == 0 {
            self.trip_start[pos as usize - 1]
        } else {
            pos + 1
        }
    }

    fn trip_len_at(&self, pos: u32) -> u32 {
        let start = self.trip_start[pos as usize - 1];
        // trips are ordered by start; binary search
        let idx = self.trips.partition_point(|&(s, _)| s < start);
        self.trips[idx].1
    }

    /// Lexicographic comparison of the infinite cyclic strings starting at
    /// `a` and `b`, ties broken by text position. Two rotations agreeing on
    /// `len(a) + len(b)` symbols are equal forever.
    fn compare_rotations(&self, a: u32, b: u32) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let bound = self.trip_len_at(a) + self.trip_len_at(b);
        let (mut i, mut j) = (a, b);
        for _ in 0..bound {
            let (x, y) = (self.sym(i), self.sym(j));
            if x != y {
                return x.cmp(&y);
            }
            i = self.succ(i);
            j = self.succ(j);
        }
        a.cmp(&b)
    }
}

/// Build-time suffix array (discarded once the compressed index exists).
///
/// Ranks run `1..=n+1`; rank 1 is the sentinel at position `n+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSuffixArray {
    rank_to_pos: Vec<u32>,
    pos_to_rank: Vec<u32>,
}

impl CyclicSuffixArray {
    pub fn num_ranks(&self) -> usize {
        self.rank_to_pos.len()
    }

    /// 1-based text position of the suffix with 1-based rank `rank`.
    pub fn at(&self, rank: usize) -> u32 {
        self.rank_to_pos[rank - 1]
    }

    /// Rank of the suffix starting at 1-based `pos`.
    pub fn rank_of(&self, pos: u32) -> u32 {
        self.pos_to_rank[pos as usize - 1]
    }
}

/// Sorts all cyclic rotations; the sentinel takes rank 1.
pub fn build_cyclic_sa(s: &IntSequence) -> CyclicSuffixArray {
    let n = s.len();
    let mut order: Vec<u32> = (1..=n as u32).collect();
    order.sort_unstable_by(|&a, &b| s.compare_rotations(a, b));
    let mut rank_to_pos = Vec::with_capacity(n + 1);
    rank_to_pos.push(n as u32 + 1);
    rank_to_pos.extend(order);
    let mut pos_to_rank = vec![0u32; n + 1];
    for (r, &p) in rank_to_pos.iter().enumerate() {
        pos_to_rank[p as usize - 1] = r as u32 + 1;
    }
    CyclicSuffixArray {
        rank_to_pos,
        pos_to_rank,
    }
}

const MAGIC: [u8; 4] = *b"CCSA";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsaOptions {
    /// Sampling period of the successor permutation.
    pub t_psi: u32,
}

impl Default for CsaOptions {
    fn default() -> Self {
        CsaOptions { t_psi: 128 }
    }
}

/// The compressed index: sampled successor permutation plus region marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCsa {
    text_len: u32,
    num_trips: u32,
    sigma: u32,
    t_psi: u32,
    used_symbols: Vec<u32>,
    regions: SparseBitVector,
    psi_samples: FixedWidthIntArray,
    gap_offsets: FixedWidthIntArray,
    gaps: Vec<u8>,
}

impl CyclicCsa {
    pub fn build(s: &IntSequence, sa: &CyclicSuffixArray, opts: CsaOptions) -> Self {
        assert!(opts.t_psi >= 1);
        let n = s.len();
        let m = n + 1;
        assert_eq!(sa.num_ranks(), m);

        let mut psi_raw = Vec::with_capacity(m);
        psi_raw.push(1u32); // sentinel fixed point
        for rank in 2..=m {
            let pos = sa.at(rank);
            psi_raw.push(sa.rank_of(s.succ(pos)));
        }

        // Region starts: sentinel, first real rank, then every first-symbol change.
        let mut starts = vec![0u64];
        if m > 1 {
            starts.push(1);
            for rank in 3..=m {
                if s.sym(sa.at(rank)) != s.sym(sa.at(rank - 1)) {
                    starts.push(rank as u64 - 1);
                }
            }
        }
        let regions = SparseBitVector::from_positions(m, &starts);

        let mut used_symbols: Vec<u32> = s.symbols().iter().copied().filter(|&x| x != 0).collect();
        used_symbols.sort_unstable();
        used_symbols.dedup();
        let sigma = used_symbols.last().map_or(1, |&x| x + 1);

        #[cfg(debug_assertions)]
        for w in 2..=m {
            let same_region = regions.rank1(w).unwrap() == regions.rank1(w - 1).unwrap();
            if same_region {
                debug_assert!(
                    psi_raw[w - 1] > psi_raw[w - 2],
                    "successor permutation must increase within a region"
                );
            }
        }

        let t = opts.t_psi as usize;
        let mut samples = FixedWidthIntArray::new(FixedWidthIntArray::width_for(m as u64));
        let mut gap_offsets = Vec::new();
        let mut gaps = Vec::new();
        for (i, &v) in psi_raw.iter().enumerate() {
            if i % t == 0 {
                samples.push(v as u64);
                gap_offsets.push(gaps.len() as u64);
            } else {
                let delta = v as i64 - psi_raw[i - 1] as i64;
                write_vbyte(&mut gaps, zigzag(delta));
            }
        }
        let gap_offsets = FixedWidthIntArray::from_values(
            FixedWidthIntArray::width_for(gaps.len().max(1) as u64),
            &gap_offsets,
        );

        CyclicCsa {
            text_len: n as u32,
            num_trips: s.num_trips() as u32,
            sigma,
            t_psi: opts.t_psi,
            used_symbols,
            regions,
            psi_samples: samples,
            gap_offsets,
            gaps,
        }
    }

    /// Length of the indexed text (terminators included, sentinel excluded).
    pub fn text_len(&self) -> usize {
        self.text_len as usize
    }

    /// Number of ranks, `text_len + 1`.
    pub fn num_ranks(&self) -> usize {
        self.text_len as usize + 1
    }

    pub fn num_trips(&self) -> usize {
        self.num_trips as usize
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn t_psi(&self) -> u32 {
        self.t_psi
    }

    /// Successor permutation at 1-based `rank`, rebuilt from the nearest
    /// sample plus decoded deltas.
    pub fn psi(&self, rank: usize) -> Option<usize> {
        if rank == 0 || rank > self.num_ranks() {
            return None;
        }
        let t = self.t_psi as usize;
        let block = (rank - 1) / t;
        let mut v = self.psi_samples.get(block).unwrap() as i64;
        let mut off = self.gap_offsets.get(block).unwrap() as usize;
        for _ in 0..(rank - 1) - block * t {
            let (z, read) = read_vbyte(&self.gaps, off);
            v += unzigzag(z);
            off += read;
        }
        Some(v as usize)
    }

    fn num_regions(&self) -> usize {
        self.regions.num_ones() as usize
    }

    fn region_start(&self, region: usize) -> usize {
        self.regions.select1(region as u64).unwrap()
    }

    fn region_end(&self, region: usize) -> usize {
        if region == self.num_regions() {
            self.num_ranks()
        } else {
            self.region_start(region + 1) - 1
        }
    }

    /// First symbol of the suffix at `rank`. Both the sentinel and the
    /// terminator region report symbol 0.
    pub fn symbol_at(&self, rank: usize) -> Option<u32> {
        if rank == 0 || rank > self.num_ranks() {
            return None;
        }
        let region = self.regions.rank1(rank).unwrap() as usize;
        Some(match region {
            1 | 2 => 0,
            r => self.used_symbols[r - 3],
        })
    }

    /// Ranks of the terminator region (one per trip; sentinel excluded).
    pub fn terminator_range(&self) -> (usize, usize) {
        (self.region_start(2), self.region_end(2))
    }

    /// Contiguous rank span of all suffixes whose first symbol lies in
    /// `[sym_lo, sym_hi]`, or `None` when no such symbol occurs.
    pub fn rank_span(&self, sym_lo: u32, sym_hi: u32) -> Option<(usize, usize)> {
        if sym_lo > sym_hi {
            return None;
        }
        let lo_region = if sym_lo == 0 {
            2
        } else {
            let i = self.used_symbols.partition_point(|&x| x < sym_lo);
            if i == self.used_symbols.len() || self.used_symbols[i] > sym_hi {
                return None;
            }
            3 + i
        };
        let below = self.used_symbols.partition_point(|&x| x <= sym_hi);
        let hi_region = if below == 0 {
            if sym_lo > 0 {
                return None;
            }
            2
        } else {
            2 + below
        };
        if lo_region > hi_region {
            return None;
        }
        Some((self.region_start(lo_region), self.region_end(hi_region)))
    }

    /// Smallest/largest rank within `[lo, hi]` whose psi lies in `[sp, ep]`;
    /// psi is increasing over the searched span.
    fn psi_sub_range(
        &self,
        lo: usize,
        hi: usize,
        sp: usize,
        ep: usize,
    ) -> Option<(usize, usize)> {
        // first rank with psi >= sp
        let (mut a, mut b) = (lo, hi + 1);
        while a < b {
            let mid = (a + b) / 2;
            if self.psi(mid).unwrap() >= sp {
                b = mid;
            } else {
                a = mid + 1;
            }
        }
        let first = a;
        if first > hi {
            return None;
        }
        // last rank with psi <= ep
        let (mut a, mut b) = (lo, hi + 1);
        while a < b {
            let mid = (a + b) / 2;
            if self.psi(mid).unwrap() <= ep {
                a = mid + 1;
            } else {
                b = mid;
            }
        }
        if a == lo {
            return None;
        }
        let last = a - 1;
        if first > last {
            None
        } else {
            Some((first, last))
        }
    }

    /// Backward search for a pattern of inclusive symbol ranges, matched
    /// left-to-right with trip-cyclic continuation. Returns the 1-based rank
    /// range of suffixes whose expansion matches, or `None` when empty.
    ///
    /// Elements before the last must map to a single region span whose
    /// matches stay contiguous; the queries built by the trip index use
    /// single symbols there, which always satisfy this.
    pub fn backward_search(&self, pattern: &[(u32, u32)]) -> Option<(usize, usize)> {
        let (&(last_lo, last_hi), rest) = pattern.split_last()?;
        let (mut sp, mut ep) = self.rank_span(last_lo, last_hi)?;
        for &(a, b) in rest.iter().rev() {
            let (span_lo, span_hi) = self.rank_span(a, b)?;
            let first_region = self.regions.rank1(span_lo).unwrap() as usize;
            let last_region = self.regions.rank1(span_hi).unwrap() as usize;
            let mut found: Option<(usize, usize)> = None;
            for region in first_region..=last_region {
                let lo = self.region_start(region).max(span_lo);
                let hi = self.region_end(region).min(span_hi);
                if let Some((f, l)) = self.psi_sub_range(lo, hi, sp, ep) {
                    found = match found {
                        None => Some((f, l)),
                        Some((pf, pl)) => {
                            assert!(
                                region == first_region || pl + 1 >= self.region_start(region),
                                "multi-region pattern element produced a gap"
                            );
                            Some((pf.min(f), pl.max(l)))
                        }
                    };
                }
            }
            let (nsp, nep) = found?;
            sp = nsp;
            ep = nep;
        }
        Some((sp, ep))
    }

    /// Serialized size in bytes of the successor permutation alone.
    pub fn psi_byte_size(&self) -> usize {
        self.psi_samples.payload_bytes() + self.gap_offsets.payload_bytes() + self.gaps.len()
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        let mut payload = Vec::new();
        put_u64(&mut payload, self.text_len as u64);
        put_u64(&mut payload, self.num_trips as u64);
        put_u64(&mut payload, self.sigma as u64);
        put_u64(&mut payload, self.t_psi as u64);
        let used: Vec<u64> = self.used_symbols.iter().map(|&x| x as u64).collect();
        FixedWidthIntArray::from_values(
            FixedWidthIntArray::width_for(self.sigma.max(1) as u64),
            &used,
        )
        .serialize_into(&mut payload);
        self.regions.serialize_into(&mut payload);
        self.psi_samples.serialize_into(&mut payload);
        self.gap_offsets.serialize_into(&mut payload);
        put_u64(&mut payload, self.gaps.len() as u64);
        payload.extend_from_slice(&self.gaps);
        write_record(out, MAGIC, 1, &payload);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let mut rec = cur.record(MAGIC, 1)?;
        let text_len = rec.u64()? as u32;
        let num_trips = rec.u64()? as u32;
        let sigma = rec.u64()? as u32;
        let t_psi = rec.u64()? as u32;
        let used = FixedWidthIntArray::deserialize(&mut rec)?;
        let used_symbols: Vec<u32> = used.iter().map(|x| x as u32).collect();
        let regions = SparseBitVector::deserialize(&mut rec)?;
        let psi_samples = FixedWidthIntArray::deserialize(&mut rec)?;
        let gap_offsets = FixedWidthIntArray::deserialize(&mut rec)?;
        let gap_len = rec.u64()? as usize;
        let gaps = rec.take(gap_len)?.to_vec();
        if t_psi == 0 || regions.len() != text_len as usize + 1 {
            return Err(CodecError::Corrupt("csa geometry"));
        }
        Ok(CyclicCsa {
            text_len,
            num_trips,
            sigma,
            t_psi,
            used_symbols,
            regions,
            psi_samples,
            gap_offsets,
            gaps,
        })
    }
}

fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

fn unzigzag(z: u64) -> i64 {
    ((z >> 1) as i64) ^ -((z & 1) as i64)
}

fn write_vbyte(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn read_vbyte(buf: &[u8], mut off: usize) -> (u64, usize) {
    let mut v = 0u64;
    let mut shift = 0;
    let mut read = 0;
    loop {
        let byte = buf[off];
        off += 1;
        read += 1;
        v |= ((byte & 0x7f) as u64) << shift;
        if byte & 0x80 == 0 {
            return (v, read);
        }
        shift += 7;
    }
}

//! The trip self-index: vocabulary, sequence construction, and queries.
//!
//! Every trip becomes a short string: one symbol per boarding pair
//! (stop, line), one *ender* symbol naming the final stop, then a 0
//! terminator. Symbol ids come from a vocabulary laid out as
//! `[terminator][enders 1..=n_s][pairs (s,l) sorted by s then l]`; unused
//! entries are skipped via a rank over the marker bitvector, which keeps the
//! pair symbols of one stop contiguous — a stop query is a single symbol
//! range. The collection is indexed by a [`CyclicCsa`] and the journey ids,
//! permuted into suffix-array order, by a [`WaveletMatrix`].
//!
//! Query shapes follow from the cyclic encoding: trips starting at X match
//! `[0][X]`, trips ending at Y match `[Y]`, and origin-destination counting
//! matches `[Y][0][X]`, the terminator crossing being legal because every
//! suffix wraps inside its own trip.

use crate::csa::{build_cyclic_sa, CsaError, CsaOptions, CyclicCsa, CyclicSuffixArray, IntSequence};
use crate::codec::{put_u64, write_record, CodecError, Cursor};
use crate::offer::{LineId, NetworkOffer, OfferError, StopId};
use crate::succinct::BitVector;
use crate::trips::{TripError, Triple, UserTrip};
use crate::wavelet::{WaveletMatrix, WaveletOptions};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum TtctrError {
    Offer(OfferError),
    Trip { trip: usize, error: TripError },
    UnusedPair { stop: u32, line: u32 },
    NoTrips,
    InvalidQuery(&'static str),
    Malformed(CsaError),
}

impl fmt::Display for TtctrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TtctrError::Offer(e) => write!(f, "{}", e),
            TtctrError::Trip { trip, error } => write!(f, "trip {}: {}", trip, error),
            TtctrError::UnusedPair { stop, line } => {
                write!(f, "pair (stop {}, line {}) never observed", stop, line)
            }
            TtctrError::NoTrips => write!(f, "no trips to index"),
            TtctrError::InvalidQuery(what) => write!(f, "invalid query: {}", what),
            TtctrError::Malformed(e) => write!(f, "{}", e),
        }
    }
}

impl From<OfferError> for TtctrError {
    fn from(e: OfferError) -> Self {
        TtctrError::Offer(e)
    }
}

const VOCAB_MAGIC: [u8; 4] = *b"VOCB";

/// Symbol id space over enders and (stop, line) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    n_s: u32,
    n_l: u32,
    bits: BitVector,
    ender_count: u32,
}

/// What a symbol id decodes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VocabEntry {
    /// Final stop of a trip.
    Ender(StopId),
    /// A boarding at (stop, line).
    Pair(StopId, LineId),
}

impl Vocabulary {
    fn ender_slot(&self, stop: StopId) -> usize {
        stop.0 as usize
    }

    fn pair_slot(&self, stop: StopId, line: LineId) -> usize {
        (self.n_s + self.n_l * (stop.0 - 1) + line.0) as usize
    }

    fn from_marks(n_s: u32, n_l: u32, marks: &mut [bool]) -> Self {
        let bits = BitVector::from_bools(marks.iter().copied());
        let ender_count = bits.rank1(n_s as usize + 1).unwrap() as u32;
        Vocabulary {
            n_s,
            n_l,
            bits,
            ender_count,
        }
    }

    /// Marks exactly the symbols occurring in `trips`.
    pub fn from_observed(offer: &NetworkOffer, trips: &[UserTrip]) -> Self {
        let (n_s, n_l) = (offer.num_stops(), offer.num_lines());
        let mut marks = vec![false; (1 + n_s * (1 + n_l)) as usize];
        let probe = Vocabulary {
            n_s,
            n_l,
            bits: BitVector::from_bools(core::iter::empty()),
            ender_count: 0,
        };
        for trip in trips {
            for st in &trip.stages {
                marks[probe.pair_slot(st.board.stop, st.board.line)] = true;
            }
            marks[probe.ender_slot(trip.last().alight_stop)] = true;
        }
        Self::from_marks(n_s, n_l, &mut marks)
    }

    /// Marks every stop as a possible ender and every pair present in the
    /// network topology.
    pub fn from_topology(offer: &NetworkOffer) -> Self {
        let (n_s, n_l) = (offer.num_stops(), offer.num_lines());
        let mut marks = vec![false; (1 + n_s * (1 + n_l)) as usize];
        let probe = Vocabulary {
            n_s,
            n_l,
            bits: BitVector::from_bools(core::iter::empty()),
            ender_count: 0,
        };
        for s in 1..=n_s {
            marks[probe.ender_slot(StopId(s))] = true;
        }
        for line in offer.lines() {
            for &s in &line.stops {
                marks[probe.pair_slot(s, line.id)] = true;
            }
        }
        Self::from_marks(n_s, n_l, &mut marks)
    }

    /// Total entries including the terminator slot.
    pub fn total_entries(&self) -> usize {
        (1 + self.n_s * (1 + self.n_l)) as usize
    }

    /// Number of marked (used) entries.
    pub fn used_count(&self) -> u32 {
        self.bits.num_ones() as u32
    }

    /// Number of marked ender symbols; ender ids occupy `1..=ender_count`.
    pub fn ender_count(&self) -> u32 {
        self.ender_count
    }

    pub fn is_ender_symbol(&self, sym: u32) -> bool {
        sym >= 1 && sym <= self.ender_count
    }

    /// Compacted id of the pair (stop, line); an error if never marked.
    pub fn encode_pair(&self, stop: StopId, line: LineId) -> Result<u32, TtctrError> {
        self.try_encode_pair(stop, line)
            .ok_or(TtctrError::UnusedPair {
                stop: stop.0,
                line: line.0,
            })
    }

    pub fn try_encode_pair(&self, stop: StopId, line: LineId) -> Option<u32> {
        if stop.0 == 0 || stop.0 > self.n_s || line.0 == 0 || line.0 > self.n_l {
            return None;
        }
        let slot = self.pair_slot(stop, line);
        if self.bits.get(slot) == Some(true) {
            Some(self.bits.rank1(slot + 1).unwrap() as u32)
        } else {
            None
        }
    }

    pub fn try_encode_ender(&self, stop: StopId) -> Option<u32> {
        if stop.0 == 0 || stop.0 > self.n_s {
            return None;
        }
        let slot = self.ender_slot(stop);
        if self.bits.get(slot) == Some(true) {
            Some(self.bits.rank1(slot + 1).unwrap() as u32)
        } else {
            None
        }
    }

    /// Inclusive id range of every marked pair of `stop` — contiguous by the
    /// vocabulary layout.
    pub fn pair_range(&self, stop: StopId) -> Option<(u32, u32)> {
        if stop.0 == 0 || stop.0 > self.n_s {
            return None;
        }
        let first = self.pair_slot(stop, LineId(1));
        let last = self.pair_slot(stop, LineId(self.n_l));
        let before = self.bits.rank1(first).unwrap() as u32;
        let through = self.bits.rank1(last + 1).unwrap() as u32;
        if through == before {
            None
        } else {
            Some((before + 1, through))
        }
    }

    pub fn decode(&self, sym: u32) -> Option<VocabEntry> {
        if sym == 0 || sym > self.used_count() {
            return None;
        }
        let slot = self.bits.select1(sym as u64).unwrap() - 1;
        Some(if slot <= self.n_s as usize {
            VocabEntry::Ender(StopId(slot as u32))
        } else {
            let t = slot as u32 - self.n_s - 1;
            VocabEntry::Pair(StopId(t / self.n_l + 1), LineId(t % self.n_l + 1))
        })
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        let mut payload = Vec::new();
        put_u64(&mut payload, self.n_s as u64);
        put_u64(&mut payload, self.n_l as u64);
        self.bits.serialize_into(&mut payload);
        write_record(out, VOCAB_MAGIC, 1, &payload);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let mut rec = cur.record(VOCAB_MAGIC, 1)?;
        let n_s = rec.u64()? as u32;
        let n_l = rec.u64()? as u32;
        let bits = BitVector::deserialize(&mut rec)?;
        if bits.len() != (1 + n_s * (1 + n_l)) as usize {
            return Err(CodecError::Corrupt("vocabulary length"));
        }
        let ender_count = bits.rank1(n_s as usize + 1).unwrap() as u32;
        Ok(Vocabulary {
            n_s,
            n_l,
            bits,
            ender_count,
        })
    }
}

/// Encodes trips (canonical triple form) into the text sequence plus the
/// aligned journey codes. Each terminator position carries the journey of
/// the trip's first boarding.
pub fn encode_trips(
    vocab: &Vocabulary,
    trips: &[UserTrip],
) -> Result<(IntSequence, Vec<u32>), TtctrError> {
    if trips.is_empty() {
        return Err(TtctrError::NoTrips);
    }
    let mut symbols = Vec::new();
    let mut jcodes = Vec::new();
    for (i, trip) in trips.iter().enumerate() {
        let wrap = |error: TripError| TtctrError::Trip { trip: i, error };
        if trip.stages.is_empty() {
            return Err(wrap(TripError::Empty));
        }
        for st in &trip.stages {
            symbols.push(vocab.encode_pair(st.board.stop, st.board.line)?);
            jcodes.push(st.board.journey);
        }
        let last = trip.last();
        let ender =
            vocab
                .try_encode_ender(last.alight_stop)
                .ok_or(TtctrError::UnusedPair {
                    stop: last.alight_stop.0,
                    line: 0,
                })?;
        symbols.push(ender);
        jcodes.push(last.board.journey);
        symbols.push(0);
        jcodes.push(trip.first().board.journey);
    }
    let sequence = IntSequence::new(symbols).map_err(TtctrError::Malformed)?;
    Ok((sequence, jcodes))
}

/// Build options.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TtctrOptions {
    pub t_psi: u32,
    /// RRR sampling for the journey wavelet matrix bitmaps; plain if `None`.
    pub wm_rrr_sampling: Option<u32>,
    /// Mark the vocabulary from the network topology instead of the corpus.
    pub topology_vocab: bool,
}

impl Default for TtctrOptions {
    fn default() -> Self {
        TtctrOptions {
            t_psi: 128,
            wm_rrr_sampling: None,
            topology_vocab: false,
        }
    }
}

/// Counting query over indexed trips; at least one stop must be present.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TripCountQuery {
    pub start_stop: Option<StopId>,
    pub end_stop: Option<StopId>,
    pub start_line: Option<LineId>,
    pub end_line: Option<LineId>,
    /// Restricts the departure instant of the trip's first journey to
    /// `[t1, t2)`.
    pub interval: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtctrIndex {
    vocab: Vocabulary,
    csa: CyclicCsa,
    journeys: WaveletMatrix,
}

/// Build-time structures, exposed for inspection and tests; the index itself
/// never keeps them.
pub struct BuildArtifacts {
    pub sequence: IntSequence,
    pub jcodes: Vec<u32>,
    pub suffix_array: CyclicSuffixArray,
}

pub fn build(
    offer: &NetworkOffer,
    trips: &[UserTrip],
    opts: TtctrOptions,
) -> Result<TtctrIndex, TtctrError> {
    Ok(build_with_artifacts(offer, trips, opts)?.0)
}

pub fn build_with_artifacts(
    offer: &NetworkOffer,
    trips: &[UserTrip],
    opts: TtctrOptions,
) -> Result<(TtctrIndex, BuildArtifacts), TtctrError> {
    if trips.is_empty() {
        return Err(TtctrError::NoTrips);
    }
    for (i, trip) in trips.iter().enumerate() {
        trip.validate(offer)
            .map_err(|error| TtctrError::Trip { trip: i, error })?;
    }
    let vocab = if opts.topology_vocab {
        let v = Vocabulary::from_topology(offer);
        // enders observed in the corpus are always marked; pairs must lie on
        // their line, which validate() already guarantees.
        v
    } else {
        Vocabulary::from_observed(offer, trips)
    };
    let (sequence, jcodes) = encode_trips(&vocab, trips)?;
    let suffix_array = build_cyclic_sa(&sequence);
    let csa = CyclicCsa::build(&sequence, &suffix_array, CsaOptions { t_psi: opts.t_psi });

    let m = sequence.len() + 1;
    let mut jpsi = Vec::with_capacity(m);
    jpsi.push(0u64); // sentinel
    for rank in 2..=m {
        jpsi.push(jcodes[suffix_array.at(rank) as usize - 1] as u64);
    }
    let sigma_j = offer.max_journeys().max(1) as u64;
    let journeys = WaveletMatrix::build(
        &jpsi,
        sigma_j,
        WaveletOptions {
            rrr_sampling: opts.wm_rrr_sampling,
        },
    )
    .map_err(|_| TtctrError::InvalidQuery("journey id beyond schedule"))?;

    Ok((
        TtctrIndex {
            vocab,
            csa,
            journeys,
        },
        BuildArtifacts {
            sequence,
            jcodes,
            suffix_array,
        },
    ))
}

/// Everything learned from one walk around a matched trip.
struct TripWalk {
    term_rank: usize,
    first_rank: usize,
    last_pair_sym: u32,
}

impl TtctrIndex {
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn csa(&self) -> &CyclicCsa {
        &self.csa
    }

    pub fn journeys(&self) -> &WaveletMatrix {
        &self.journeys
    }

    pub fn num_trips(&self) -> usize {
        self.csa.num_trips()
    }

    fn check_stop(&self, offer: &NetworkOffer, stop: StopId) -> Result<(), TtctrError> {
        offer.stop(stop)?;
        Ok(())
    }

    /// Builds the search pattern for a query; `None` means the answer is
    /// trivially 0 (a stop or pair that never occurs in the corpus).
    fn query_pattern(
        &self,
        offer: &NetworkOffer,
        q: &TripCountQuery,
    ) -> Result<Option<Vec<(u32, u32)>>, TtctrError> {
        if q.start_stop.is_none() && q.end_stop.is_none() {
            return Err(TtctrError::InvalidQuery("need a start or an end stop"));
        }
        if q.start_line.is_some() && q.start_stop.is_none() {
            return Err(TtctrError::InvalidQuery("start line needs a start stop"));
        }
        if q.end_line.is_some() && q.end_stop.is_none() {
            return Err(TtctrError::InvalidQuery("end line needs an end stop"));
        }
        if let Some((t1, t2)) = q.interval {
            if t1 > t2 {
                return Err(TtctrError::Offer(OfferError::InvalidInterval));
            }
        }
        if let Some(l) = q.start_line.or(q.end_line) {
            offer.line(l)?;
        }
        let start_elem = match (q.start_stop, q.start_line) {
            (Some(x), Some(l)) => {
                self.check_stop(offer, x)?;
                match self.vocab.try_encode_pair(x, l) {
                    Some(sym) => Some((sym, sym)),
                    None => return Ok(None),
                }
            }
            (Some(x), None) => {
                self.check_stop(offer, x)?;
                match self.vocab.pair_range(x) {
                    Some(range) => Some(range),
                    None => return Ok(None),
                }
            }
            (None, _) => None,
        };
        let end_elem = match q.end_stop {
            Some(y) => {
                self.check_stop(offer, y)?;
                match self.vocab.try_encode_ender(y) {
                    Some(sym) => Some((sym, sym)),
                    None => return Ok(None),
                }
            }
            None => None,
        };
        Ok(Some(match (end_elem, start_elem) {
            (Some(y), Some(x)) => vec![y, (0, 0), x],
            (None, Some(x)) => vec![(0, 0), x],
            (Some(y), None) => vec![y],
            (None, None) => unreachable!(),
        }))
    }

    /// Number of trips matching every restriction of `q`.
    pub fn count_trips(&self, offer: &NetworkOffer, q: &TripCountQuery) -> Result<u64, TtctrError> {
        let Some(pattern) = self.query_pattern(offer, q)? else {
            return Ok(0);
        };
        let Some((sp, ep)) = self.csa.backward_search(&pattern) else {
            return Ok(0);
        };
        let plain_count = (ep - sp + 1) as u64;
        if q.end_line.is_none() && q.interval.is_none() {
            return Ok(plain_count);
        }
        // Fast path: matches sit in the terminator region (start-anchored
        // pattern) and the start line is fixed, so the aligned journey codes
        // are the first journeys of the matched trips and one wavelet range
        // count applies the whole time filter.
        if let (Some((t1, t2)), Some(line), None, None) =
            (q.interval, q.start_line, q.end_stop, q.end_line)
        {
            return Ok(match offer.journeys_in_interval(line, t1, t2)? {
                Some((j_lo, j_hi)) => self
                    .journeys
                    .range_count(sp, ep, j_lo as u64, j_hi as u64)
                    .expect("range within index"),
                None => 0,
            });
        }
        let mut count = 0u64;
        for rank in sp..=ep {
            if self.occurrence_matches(offer, rank, q)? {
                count += 1;
            }
        }
        Ok(count)
    }

    fn occurrence_matches(
        &self,
        offer: &NetworkOffer,
        rank: usize,
        q: &TripCountQuery,
    ) -> Result<bool, TtctrError> {
        let walk = self.walk_trip(rank);
        if let Some(end_line) = q.end_line {
            match self.vocab.decode(walk.last_pair_sym) {
                Some(VocabEntry::Pair(_, l)) if l == end_line => {}
                _ => return Ok(false),
            }
        }
        if let Some((t1, t2)) = q.interval {
            let j1 = self.journeys.access(walk.term_rank).expect("rank in index") as u32;
            let first_sym = self.csa.symbol_at(walk.first_rank).unwrap();
            let Some(VocabEntry::Pair(_, l1)) = self.vocab.decode(first_sym) else {
                return Ok(false);
            };
            let dep = offer.departure(l1, j1)?;
            if dep < t1 || dep >= t2 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// One full turn around the trip containing `rank`.
    fn walk_trip(&self, rank: usize) -> TripWalk {
        let mut r = rank;
        while self.csa.symbol_at(r).unwrap() != 0 {
            r = self.csa.psi(r).unwrap();
        }
        let term_rank = r;
        let first_rank = self.csa.psi(term_rank).unwrap();
        let mut last_pair_sym = self.csa.symbol_at(first_rank).unwrap();
        let mut r = self.csa.psi(first_rank).unwrap();
        loop {
            let sym = self.csa.symbol_at(r).unwrap();
            if self.vocab.is_ender_symbol(sym) {
                break;
            }
            last_pair_sym = sym;
            r = self.csa.psi(r).unwrap();
        }
        TripWalk {
            term_rank,
            first_rank,
            last_pair_sym,
        }
    }

    /// Stage boardings (not trips) of the pair (stop, line) whose journey
    /// departs within `[t1, t2)`.
    pub fn count_boardings(
        &self,
        offer: &NetworkOffer,
        stop: StopId,
        line: LineId,
        t1: i64,
        t2: i64,
    ) -> Result<u64, TtctrError> {
        offer.stop(stop)?;
        offer.line(line)?;
        let Some(sym) = self.vocab.try_encode_pair(stop, line) else {
            return Ok(0);
        };
        let Some((sp, ep)) = self.csa.backward_search(&[(sym, sym)]) else {
            return Ok(0);
        };
        Ok(match offer.journeys_in_interval(line, t1, t2)? {
            Some((j_lo, j_hi)) => self
                .journeys
                .range_count(sp, ep, j_lo as u64, j_hi as u64)
                .expect("range within index"),
            None => 0,
        })
    }

    /// Counts matches and decodes up to `limit` of them back into canonical
    /// triple sequences by walking the trip cycle.
    pub fn list_matches(
        &self,
        offer: &NetworkOffer,
        q: &TripCountQuery,
        limit: usize,
    ) -> Result<(u64, Vec<Vec<Triple>>), TtctrError> {
        let Some(pattern) = self.query_pattern(offer, q)? else {
            return Ok((0, Vec::new()));
        };
        let Some((sp, ep)) = self.csa.backward_search(&pattern) else {
            return Ok((0, Vec::new()));
        };
        let needs_refinement = q.end_line.is_some() || q.interval.is_some();
        let mut count = 0u64;
        let mut decoded = Vec::new();
        for rank in sp..=ep {
            if needs_refinement && !self.occurrence_matches(offer, rank, q)? {
                continue;
            }
            count += 1;
            if decoded.len() < limit {
                decoded.push(self.decode_trip(rank));
            }
        }
        Ok((count, decoded))
    }

    /// Canonical triples of the trip whose cycle contains `rank`.
    pub fn decode_trip(&self, rank: usize) -> Vec<Triple> {
        let walk = self.walk_trip(rank);
        let mut triples = Vec::new();
        let mut r = walk.first_rank;
        let mut last_line = LineId(0);
        loop {
            let sym = self.csa.symbol_at(r).unwrap();
            let journey = self.journeys.access(r).expect("rank in index") as u32;
            match self.vocab.decode(sym).expect("indexed symbol decodes") {
                VocabEntry::Pair(s, l) => {
                    triples.push(Triple {
                        stop: s,
                        line: l,
                        journey,
                    });
                    last_line = l;
                }
                VocabEntry::Ender(s) => {
                    triples.push(Triple {
                        stop: s,
                        line: last_line,
                        journey,
                    });
                    return triples;
                }
            }
            r = self.csa.psi(r).unwrap();
        }
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        self.vocab.serialize_into(out);
        self.csa.serialize_into(out);
        self.journeys.serialize_into(out);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let vocab = Vocabulary::deserialize(cur)?;
        let csa = CyclicCsa::deserialize(cur)?;
        let journeys = WaveletMatrix::deserialize(cur)?;
        if journeys.len() != csa.num_ranks() {
            return Err(CodecError::Corrupt("journey matrix length"));
        }
        Ok(TtctrIndex {
            vocab,
            csa,
            journeys,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fixture() -> (NetworkOffer, Vec<UserTrip>) {
        (fixtures::small_network(), fixtures::small_trips())
    }

    #[test]
    fn vocabulary_ids_and_compaction() {
        let (offer, trips) = fixture();
        let vocab = Vocabulary::from_observed(&offer, &trips);
        assert_eq!(vocab.total_entries(), 1 + 14 * 3);
        assert_eq!(vocab.used_count(), 11);
        // pair slots follow n_s + n_l*(s-1) + l
        assert_eq!(vocab.pair_slot(StopId(1), LineId(1)), 15);
        assert_eq!(vocab.pair_slot(StopId(13), LineId(2)), 40);
        assert_eq!(vocab.encode_pair(StopId(13), LineId(2)).unwrap(), 11);
        assert_eq!(vocab.try_encode_ender(StopId(11)), Some(2));
        assert!(matches!(
            vocab.encode_pair(StopId(5), LineId(1)),
            Err(TtctrError::UnusedPair { .. })
        ));
        assert_eq!(
            vocab.decode(11),
            Some(VocabEntry::Pair(StopId(13), LineId(2)))
        );
        assert_eq!(vocab.decode(2), Some(VocabEntry::Ender(StopId(11))));
    }

    #[test]
    fn pair_ids_of_a_stop_are_contiguous() {
        let (offer, trips) = fixture();
        for vocab in [
            Vocabulary::from_observed(&offer, &trips),
            Vocabulary::from_topology(&offer),
        ] {
            for s in 1..=offer.num_stops() {
                let used: Vec<u32> = (1..=offer.num_lines())
                    .filter_map(|l| vocab.try_encode_pair(StopId(s), LineId(l)))
                    .collect();
                match vocab.pair_range(StopId(s)) {
                    None => assert!(used.is_empty()),
                    Some((lo, hi)) => {
                        assert_eq!(used, (lo..=hi).collect::<Vec<u32>>());
                    }
                }
            }
        }
    }

    #[test]
    fn encoding_matches_worked_sequence() {
        let (offer, trips) = fixture();
        let vocab = Vocabulary::from_observed(&offer, &trips);
        let (seq, jcodes) = encode_trips(&vocab, &trips).unwrap();
        assert_eq!(
            seq.symbols(),
            &[5, 10, 2, 0, 6, 1, 0, 7, 10, 3, 0, 8, 2, 0, 11, 9, 4, 0]
        );
        assert_eq!(seq.get(15), Some(11));
        assert_eq!(seq.get(18), Some(0));
        assert_eq!(jcodes[8 - 1], 1);
        assert_eq!(jcodes[9 - 1], 2);
        assert_eq!(
            jcodes,
            vec![0, 1, 1, 0, 1, 1, 1, 1, 2, 2, 1, 0, 0, 0, 2, 2, 2, 2]
        );
    }

    #[test]
    fn journey_codes_in_suffix_order() {
        let (offer, trips) = fixture();
        let (index, art) =
            build_with_artifacts(&offer, &trips, TtctrOptions::default()).unwrap();
        assert_eq!(art.suffix_array.at(14), 8);
        assert_eq!(art.suffix_array.at(18), 9);
        assert_eq!(index.journeys().access(14).unwrap(), 1);
        assert_eq!(index.journeys().access(18).unwrap(), 2);
    }

    #[test]
    fn empty_trip_list_is_an_error() {
        let (offer, _) = fixture();
        assert!(matches!(
            build(&offer, &[], TtctrOptions::default()),
            Err(TtctrError::NoTrips)
        ));
    }

    fn q() -> TripCountQuery {
        TripCountQuery::default()
    }

    #[test]
    fn counting_by_start_and_end_stop() {
        let (offer, trips) = fixture();
        let index = build(&offer, &trips, TtctrOptions::default()).unwrap();
        let count = |query: &TripCountQuery| index.count_trips(&offer, query).unwrap();

        assert_eq!(
            count(&TripCountQuery {
                start_stop: Some(StopId(1)),
                ..q()
            }),
            1
        );
        assert_eq!(
            count(&TripCountQuery {
                end_stop: Some(StopId(11)),
                ..q()
            }),
            2
        );
        assert_eq!(
            count(&TripCountQuery {
                start_stop: Some(StopId(3)),
                end_stop: Some(StopId(12)),
                ..q()
            }),
            1
        );
        // a whole-period time filter changes nothing
        let (t0, t1) = offer.period();
        assert_eq!(
            count(&TripCountQuery {
                start_stop: Some(StopId(3)),
                end_stop: Some(StopId(12)),
                interval: Some((t0, t1)),
                ..q()
            }),
            1
        );
        // stop that never starts a trip
        assert_eq!(
            count(&TripCountQuery {
                start_stop: Some(StopId(4)),
                ..q()
            }),
            0
        );
        assert!(index.count_trips(&offer, &q()).is_err());
    }

    #[test]
    fn counting_with_line_and_time_restrictions() {
        let (offer, trips) = fixture();
        let index = build(&offer, &trips, TtctrOptions::default()).unwrap();
        let count = |query: &TripCountQuery| index.count_trips(&offer, query).unwrap();

        // two trips start on line 1, one of them at stop 1
        assert_eq!(
            count(&TripCountQuery {
                start_stop: Some(StopId(1)),
                start_line: Some(LineId(1)),
                ..q()
            }),
            1
        );
        // trips ending at stop 11 ride line 2 at the end
        assert_eq!(
            count(&TripCountQuery {
                end_stop: Some(StopId(11)),
                end_line: Some(LineId(2)),
                ..q()
            }),
            2
        );
        assert_eq!(
            count(&TripCountQuery {
                end_stop: Some(StopId(11)),
                end_line: Some(LineId(1)),
                ..q()
            }),
            0
        );
        // time filter on the first journey's departure: the trip from stop 3
        // boards journey 1 of line 1, departing 06:20.
        assert_eq!(
            count(&TripCountQuery {
                start_stop: Some(StopId(3)),
                start_line: Some(LineId(1)),
                interval: Some((21_600, 23_000)),
                ..q()
            }),
            1
        );
        assert_eq!(
            count(&TripCountQuery {
                start_stop: Some(StopId(3)),
                start_line: Some(LineId(1)),
                interval: Some((23_000, 86_400)),
                ..q()
            }),
            0
        );
        // same filter without the line pins the start day per occurrence
        assert_eq!(
            count(&TripCountQuery {
                start_stop: Some(StopId(3)),
                interval: Some((21_600, 23_000)),
                ..q()
            }),
            1
        );
    }

    #[test]
    fn boarding_counts_by_journey_range() {
        let (offer, trips) = fixture();
        let index = build(&offer, &trips, TtctrOptions::default()).unwrap();
        let (t0, t1) = offer.period();
        // stop 10 on line 2 is boarded by two trips over the whole period
        assert_eq!(
            index
                .count_boardings(&offer, StopId(10), LineId(2), t0, t1)
                .unwrap(),
            2
        );
        // journey 1 of line 2 departs 06:15; only one of those boardings uses it
        assert_eq!(
            index
                .count_boardings(&offer, StopId(10), LineId(2), 22_200, 22_800)
                .unwrap(),
            1
        );
        // empty interval
        assert_eq!(
            index
                .count_boardings(&offer, StopId(10), LineId(2), 500, 500)
                .unwrap(),
            0
        );
        // unused pair is simply zero
        assert_eq!(
            index
                .count_boardings(&offer, StopId(5), LineId(2), t0, t1)
                .unwrap(),
            0
        );
    }

    #[test]
    fn matches_decode_back_to_their_trips() {
        let (offer, trips) = fixture();
        let index = build(&offer, &trips, TtctrOptions::default()).unwrap();
        let (count, decoded) = index
            .list_matches(
                &offer,
                &TripCountQuery {
                    end_stop: Some(StopId(14)),
                    ..q()
                },
                10,
            )
            .unwrap();
        assert_eq!(count, 1);
        assert_eq!(decoded, vec![trips[4].to_triples()]);

        // limit 0 still counts
        let (count, decoded) = index
            .list_matches(
                &offer,
                &TripCountQuery {
                    end_stop: Some(StopId(11)),
                    ..q()
                },
                0,
            )
            .unwrap();
        assert_eq!(count, 2);
        assert!(decoded.is_empty());

        // every trip decodes losslessly
        for t in &trips {
            let (_, decoded) = index
                .list_matches(
                    &offer,
                    &TripCountQuery {
                        start_stop: Some(t.first().board.stop),
                        start_line: Some(t.first().board.line),
                        end_stop: Some(t.last().alight_stop),
                        ..q()
                    },
                    100,
                )
                .unwrap();
            assert!(decoded.contains(&t.to_triples()));
        }
    }

    #[test]
    fn index_serialization_round_trips() {
        let (offer, trips) = fixture();
        let index = build(&offer, &trips, TtctrOptions::default()).unwrap();
        let mut out = Vec::new();
        index.serialize_into(&mut out);
        let back = TtctrIndex::deserialize(&mut Cursor::new(&out)).unwrap();
        assert_eq!(back, index);
        let mut again = Vec::new();
        back.serialize_into(&mut again);
        assert_eq!(again, out);
    }
}

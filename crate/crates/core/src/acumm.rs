//! Per-line accumulated get-on/get-off matrices with O(1) window sums.
//!
//! For each line, a raw matrix counts boardings (and a twin one alightings)
//! per journey (row) and stop position (column). The stored form is the 2D
//! prefix sum, so any window reduces to four reads via inclusion-exclusion
//! ([`count_range`]); row and column 0 are virtual zeros. The differential
//! encoding keeps one middle column verbatim and every other cell as its
//! magnitude of difference from that column — the accumulated matrix is
//! monotone along rows, so the side of the column implies the sign.

use crate::codec::{put_u32, put_u64, write_record, CodecError, Cursor};
use crate::offer::{LineId, NetworkOffer, OfferError};
use crate::succinct::FixedWidthIntArray;
use crate::trips::{TripError, UserTrip};
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum AcummError {
    Offer(OfferError),
    Trip { trip: usize, error: TripError },
    Window { x1: usize, y1: usize, x2: usize, y2: usize, rows: usize, cols: usize },
    JourneyOutOfRange { journey: u32, rows: usize },
    LastStopHasNoSegment,
    EmptyDayList,
    CountOverflow,
}

impl fmt::Display for AcummError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcummError::Offer(e) => write!(f, "{}", e),
            AcummError::Trip { trip, error } => write!(f, "trip {}: {}", trip, error),
            AcummError::Window { x1, y1, x2, y2, rows, cols } => write!(
                f,
                "window ({},{})-({},{}) outside {}x{} matrix",
                x1, y1, x2, y2, rows, cols
            ),
            AcummError::JourneyOutOfRange { journey, rows } => {
                write!(f, "journey {} outside {} rows", journey, rows)
            }
            AcummError::LastStopHasNoSegment => {
                write!(f, "no segment after the last stop")
            }
            AcummError::EmptyDayList => write!(f, "day list is empty"),
            AcummError::CountOverflow => write!(f, "accumulated count exceeds 32 bits"),
        }
    }
}

impl From<OfferError> for AcummError {
    fn from(e: OfferError) -> Self {
        AcummError::Offer(e)
    }
}

/// Read access to an accumulated matrix including the virtual zeros.
pub trait CellRead {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// Accumulated value at `(r, c)`; `r == 0` or `c == 0` reads the virtual
    /// zero border without touching storage.
    fn cell(&self, r: usize, c: usize) -> u64;
}

/// Plain accumulated matrix: one 32-bit integer per cell, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccumulatedMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<u32>,
}

impl AccumulatedMatrix {
    /// Accumulates a raw count matrix (row-major, `rows x cols`).
    pub fn from_raw_counts(rows: usize, cols: usize, raw: &[u64]) -> Result<Self, AcummError> {
        assert_eq!(raw.len(), rows * cols);
        let mut cells = vec![0u32; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                let up = if r > 0 { cells[(r - 1) * cols + c] as u64 } else { 0 };
                let left = if c > 0 { cells[r * cols + c - 1] as u64 } else { 0 };
                let diag = if r > 0 && c > 0 {
                    cells[(r - 1) * cols + c - 1] as u64
                } else {
                    0
                };
                let v = raw[r * cols + c] + up + left - diag;
                cells[r * cols + c] =
                    u32::try_from(v).map_err(|_| AcummError::CountOverflow)?;
            }
        }
        Ok(AccumulatedMatrix { rows, cols, cells })
    }

    pub fn total(&self) -> u64 {
        self.cell(self.rows, self.cols)
    }
}

impl CellRead for AccumulatedMatrix {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn cell(&self, r: usize, c: usize) -> u64 {
        if r == 0 || c == 0 {
            0
        } else {
            self.cells[(r - 1) * self.cols + (c - 1)] as u64
        }
    }
}

/// Differential form: middle column verbatim, other cells as unsigned
/// differences from it, all bit-packed to the observed maxima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialMatrix {
    rows: usize,
    cols: usize,
    mid: usize,
    mid_col: FixedWidthIntArray,
    diffs: FixedWidthIntArray,
}

impl DifferentialMatrix {
    pub fn from_accumulated(m: &AccumulatedMatrix) -> Self {
        let (rows, cols) = (m.rows, m.cols);
        let mid = (cols + 1).div_ceil(2);
        let mut mid_max = 0u64;
        let mut diff_max = 0u64;
        for r in 1..=rows {
            mid_max = mid_max.max(m.cell(r, mid));
            for c in 1..=cols {
                if c != mid {
                    diff_max = diff_max.max(m.cell(r, c).abs_diff(m.cell(r, mid)));
                }
            }
        }
        let mut mid_col = FixedWidthIntArray::zeroed(FixedWidthIntArray::width_for(mid_max), rows);
        let mut diffs = FixedWidthIntArray::zeroed(
            FixedWidthIntArray::width_for(diff_max),
            rows * (cols - 1),
        );
        for r in 1..=rows {
            mid_col.set(r - 1, m.cell(r, mid));
            for c in 1..=cols {
                if c != mid {
                    let idx = (r - 1) * (cols - 1) + if c < mid { c - 1 } else { c - 2 };
                    diffs.set(idx, m.cell(r, c).abs_diff(m.cell(r, mid)));
                }
            }
        }
        DifferentialMatrix {
            rows,
            cols,
            mid,
            mid_col,
            diffs,
        }
    }

    /// Width in bits of the difference cells.
    pub fn diff_width(&self) -> u32 {
        self.diffs.width()
    }
}

impl CellRead for DifferentialMatrix {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn cell(&self, r: usize, c: usize) -> u64 {
        if r == 0 || c == 0 {
            return 0;
        }
        let mid_val = self.mid_col.get(r - 1).unwrap();
        if c == self.mid {
            return mid_val;
        }
        let idx = (r - 1) * (self.cols - 1) + if c < self.mid { c - 1 } else { c - 2 };
        let d = self.diffs.get(idx).unwrap();
        // accumulated rows are monotone in the column, so the side of the
        // middle column decides the sign
        if c < self.mid {
            mid_val - d
        } else {
            mid_val + d
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixEncoding {
    Plain,
    Differential,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matrix {
    Plain(AccumulatedMatrix),
    Differential(DifferentialMatrix),
}

impl Matrix {
    fn encode(m: AccumulatedMatrix, enc: MatrixEncoding) -> Self {
        match enc {
            MatrixEncoding::Plain => Matrix::Plain(m),
            MatrixEncoding::Differential => {
                Matrix::Differential(DifferentialMatrix::from_accumulated(&m))
            }
        }
    }

    /// Serialized payload bytes of the cell data.
    pub fn payload_bytes(&self) -> usize {
        match self {
            Matrix::Plain(m) => m.cells.len() * 4,
            Matrix::Differential(m) => m.mid_col.payload_bytes() + m.diffs.payload_bytes(),
        }
    }
}

impl CellRead for Matrix {
    fn rows(&self) -> usize {
        match self {
            Matrix::Plain(m) => m.rows(),
            Matrix::Differential(m) => m.rows(),
        }
    }

    fn cols(&self) -> usize {
        match self {
            Matrix::Plain(m) => m.cols(),
            Matrix::Differential(m) => m.cols(),
        }
    }

    fn cell(&self, r: usize, c: usize) -> u64 {
        match self {
            Matrix::Plain(m) => m.cell(r, c),
            Matrix::Differential(m) => m.cell(r, c),
        }
    }
}

/// Counts cell reads without changing results; lets tests pin the four-read
/// contract of [`count_range`].
pub struct ReadCounter<'a, M: CellRead + ?Sized> {
    inner: &'a M,
    reads: Cell<u64>,
}

impl<'a, M: CellRead + ?Sized> ReadCounter<'a, M> {
    pub fn new(inner: &'a M) -> Self {
        ReadCounter {
            inner,
            reads: Cell::new(0),
        }
    }

    pub fn reads(&self) -> u64 {
        self.reads.get()
    }

    pub fn reset(&self) {
        self.reads.set(0);
    }
}

impl<'a, M: CellRead + ?Sized> CellRead for ReadCounter<'a, M> {
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn cell(&self, r: usize, c: usize) -> u64 {
        self.reads.set(self.reads.get() + 1);
        self.inner.cell(r, c)
    }
}

/// Window sum over the raw counts via four accumulated-matrix reads,
/// `1 <= x1 <= x2 <= rows`, `1 <= y1 <= y2 <= cols`.
pub fn count_range<M: CellRead + ?Sized>(
    m: &M,
    x1: usize,
    y1: usize,
    x2: usize,
    y2: usize,
) -> Result<u64, AcummError> {
    if x1 < 1 || y1 < 1 || x1 > x2 || y1 > y2 || x2 > m.rows() || y2 > m.cols() {
        return Err(AcummError::Window {
            x1,
            y1,
            x2,
            y2,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(m.cell(x2, y2) + m.cell(x1 - 1, y1 - 1) - m.cell(x2, y1 - 1) - m.cell(x1 - 1, y2))
}

const PAIR_MAGIC: [u8; 4] = *b"ACMP";

/// Get-on and get-off accumulated matrices of one line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccumulatedMatrixPair {
    pub line: LineId,
    pub get_on: Matrix,
    pub get_off: Matrix,
}

impl AccumulatedMatrixPair {
    pub fn rows(&self) -> usize {
        self.get_on.rows()
    }

    pub fn cols(&self) -> usize {
        self.get_on.cols()
    }

    fn journey_row(&self, journey: u32) -> Result<usize, AcummError> {
        let row = journey as usize + 1;
        if row > self.rows() {
            return Err(AcummError::JourneyOutOfRange {
                journey,
                rows: self.rows(),
            });
        }
        Ok(row)
    }

    /// Boardings at one stop position over an inclusive journey range.
    pub fn boardings_at_stop(
        &self,
        stop_pos: usize,
        j_lo: u32,
        j_hi: u32,
    ) -> Result<u64, AcummError> {
        count_range(
            &self.get_on,
            self.journey_row(j_lo)?,
            stop_pos,
            self.journey_row(j_hi)?,
            stop_pos,
        )
    }

    /// Boardings over a whole journey (one row).
    pub fn journey_boardings(&self, journey: u32) -> Result<u64, AcummError> {
        let row = self.journey_row(journey)?;
        count_range(&self.get_on, row, 1, row, self.cols())
    }

    /// Boardings in a journey range over a stop-position range (window).
    pub fn window_boardings(
        &self,
        j_lo: u32,
        j_hi: u32,
        p_lo: usize,
        p_hi: usize,
    ) -> Result<u64, AcummError> {
        count_range(
            &self.get_on,
            self.journey_row(j_lo)?,
            p_lo,
            self.journey_row(j_hi)?,
            p_hi,
        )
    }

    /// Passengers aboard journey `j` between stop positions `x` and `x + 1`:
    /// everyone on by `x` minus everyone off by `x`.
    pub fn load_between_stops(&self, journey: u32, x: usize) -> Result<u64, AcummError> {
        if x >= self.cols() {
            return Err(AcummError::LastStopHasNoSegment);
        }
        let row = self.journey_row(journey)?;
        let on = count_range(&self.get_on, row, 1, row, x)?;
        let off = count_range(&self.get_off, row, 1, row, x)?;
        debug_assert!(on >= off, "more alightings than boardings before a segment");
        Ok(on - off)
    }

    /// Mean boardings of a stop-position window over several days, each a
    /// contiguous journey range. Exact as a fraction.
    pub fn average_over_days(
        &self,
        days: &[(u32, u32)],
        p_lo: usize,
        p_hi: usize,
    ) -> Result<DayAverage, AcummError> {
        if days.is_empty() {
            return Err(AcummError::EmptyDayList);
        }
        let mut total = 0u64;
        for &(j_lo, j_hi) in days {
            total += self.window_boardings(j_lo, j_hi, p_lo, p_hi)?;
        }
        Ok(DayAverage {
            total,
            days: days.len() as u32,
        })
    }

    pub fn serialize_into(&self, out: &mut Vec<u8>) {
        let mut payload = Vec::new();
        put_u32(&mut payload, self.line.0);
        put_u64(&mut payload, self.rows() as u64);
        put_u64(&mut payload, self.cols() as u64);
        for m in [&self.get_on, &self.get_off] {
            match m {
                Matrix::Plain(p) => {
                    payload.push(0);
                    for &c in &p.cells {
                        put_u32(&mut payload, c);
                    }
                }
                Matrix::Differential(d) => {
                    payload.push(1);
                    put_u64(&mut payload, d.mid as u64);
                    d.mid_col.serialize_into(&mut payload);
                    d.diffs.serialize_into(&mut payload);
                }
            }
        }
        write_record(out, PAIR_MAGIC, 1, &payload);
    }

    pub fn deserialize(cur: &mut Cursor<'_>) -> Result<Self, CodecError> {
        let mut rec = cur.record(PAIR_MAGIC, 1)?;
        let line = LineId(rec.u32()?);
        let rows = rec.u64()? as usize;
        let cols = rec.u64()? as usize;
        let read_matrix = |rec: &mut Cursor<'_>| -> Result<Matrix, CodecError> {
            match rec.u8()? {
                0 => {
                    let mut cells = Vec::with_capacity(rows * cols);
                    for _ in 0..rows * cols {
                        cells.push(rec.u32()?);
                    }
                    Ok(Matrix::Plain(AccumulatedMatrix { rows, cols, cells }))
                }
                1 => {
                    let mid = rec.u64()? as usize;
                    let mid_col = FixedWidthIntArray::deserialize(rec)?;
                    let diffs = FixedWidthIntArray::deserialize(rec)?;
                    if mid_col.len() != rows || diffs.len() != rows * cols.saturating_sub(1) {
                        return Err(CodecError::Corrupt("differential matrix geometry"));
                    }
                    Ok(Matrix::Differential(DifferentialMatrix {
                        rows,
                        cols,
                        mid,
                        mid_col,
                        diffs,
                    }))
                }
                _ => Err(CodecError::Corrupt("matrix encoding tag")),
            }
        };
        let get_on = read_matrix(&mut rec)?;
        let get_off = read_matrix(&mut rec)?;
        Ok(AccumulatedMatrixPair { line, get_on, get_off })
    }
}

/// Exact rational mean over days.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DayAverage {
    pub total: u64,
    pub days: u32,
}

impl DayAverage {
    pub fn as_f64(&self) -> f64 {
        self.total as f64 / self.days as f64
    }
}

/// Builds the matrix pair of every line from the trips; one get-on and one
/// get-off event per stage.
pub fn build_matrices(
    offer: &NetworkOffer,
    trips: &[UserTrip],
    encoding: MatrixEncoding,
) -> Result<Vec<AccumulatedMatrixPair>, AcummError> {
    let n_l = offer.num_lines() as usize;
    let mut raw_on: Vec<Vec<u64>> = Vec::with_capacity(n_l);
    let mut raw_off: Vec<Vec<u64>> = Vec::with_capacity(n_l);
    for line in offer.lines() {
        let rows = offer.num_journeys(line.id)? as usize;
        let cols = line.num_stops();
        raw_on.push(vec![0; rows * cols]);
        raw_off.push(vec![0; rows * cols]);
    }
    for (i, trip) in trips.iter().enumerate() {
        trip.validate(offer)
            .map_err(|error| AcummError::Trip { trip: i, error })?;
        for st in &trip.stages {
            let line = offer.line(st.board.line)?;
            let cols = line.num_stops();
            let p = line.position_of(st.board.stop).unwrap();
            let q = line.position_of(st.alight_stop).unwrap();
            let row = st.board.journey as usize;
            let l = st.board.line.0 as usize - 1;
            raw_on[l][row * cols + (p - 1)] += 1;
            raw_off[l][row * cols + (q - 1)] += 1;
        }
    }
    let mut pairs = Vec::with_capacity(n_l);
    for line in offer.lines() {
        let l = line.id.0 as usize - 1;
        let rows = offer.num_journeys(line.id)? as usize;
        let cols = line.num_stops();
        let on = AccumulatedMatrix::from_raw_counts(rows, cols, &raw_on[l])?;
        let off = AccumulatedMatrix::from_raw_counts(rows, cols, &raw_off[l])?;
        debug_assert_eq!(on.total(), off.total());
        pairs.push(AccumulatedMatrixPair {
            line: line.id,
            get_on: Matrix::encode(on, encoding),
            get_off: Matrix::encode(off, encoding),
        });
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn two_by_two() -> AccumulatedMatrix {
        AccumulatedMatrix::from_raw_counts(2, 2, &[1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn accumulation_by_hand() {
        let m = two_by_two();
        assert_eq!(m.cell(1, 1), 1);
        assert_eq!(m.cell(1, 2), 3);
        assert_eq!(m.cell(2, 1), 4);
        assert_eq!(m.cell(2, 2), 10);
        assert_eq!(m.cell(0, 2), 0);
        assert_eq!(m.cell(2, 0), 0);
    }

    #[test]
    fn window_sums() {
        let m = two_by_two();
        assert_eq!(count_range(&m, 1, 1, 2, 2).unwrap(), 10);
        assert_eq!(count_range(&m, 2, 2, 2, 2).unwrap(), 4);
        assert_eq!(count_range(&m, 1, 1, 1, 1).unwrap(), 1);
        assert_eq!(count_range(&m, 1, 2, 2, 2).unwrap(), 6);
        assert!(count_range(&m, 0, 1, 2, 2).is_err());
        assert!(count_range(&m, 1, 1, 3, 2).is_err());
        assert!(count_range(&m, 2, 2, 1, 1).is_err());
    }

    #[test]
    fn exactly_four_reads_each_time() {
        let m = two_by_two();
        let counted = ReadCounter::new(&m);
        for (x1, y1, x2, y2) in [(1, 1, 2, 2), (1, 1, 1, 1), (2, 2, 2, 2), (1, 2, 2, 2)] {
            counted.reset();
            count_range(&counted, x1, y1, x2, y2).unwrap();
            assert_eq!(counted.reads(), 4);
        }
    }

    #[test]
    fn differential_decodes_exactly() {
        let raw: Vec<u64> = (0..7 * 9).map(|i| (i * 37 % 11) as u64).collect();
        let plain = AccumulatedMatrix::from_raw_counts(7, 9, &raw).unwrap();
        let diff = DifferentialMatrix::from_accumulated(&plain);
        assert_eq!(diff.mid, 5);
        for r in 0..=7 {
            for c in 0..=9 {
                assert_eq!(diff.cell(r, c), plain.cell(r, c), "cell ({}, {})", r, c);
            }
        }
        // even column count takes the ceiling middle
        let plain = AccumulatedMatrix::from_raw_counts(3, 4, &[1; 12]).unwrap();
        let diff = DifferentialMatrix::from_accumulated(&plain);
        assert_eq!(diff.mid, 3);
        for r in 0..=3 {
            for c in 0..=4 {
                assert_eq!(diff.cell(r, c), plain.cell(r, c));
            }
        }
    }

    fn fixture_pairs(enc: MatrixEncoding) -> Vec<AccumulatedMatrixPair> {
        let offer = fixtures::small_network();
        build_matrices(&offer, &fixtures::small_trips(), enc).unwrap()
    }

    #[test]
    fn fixture_boardings_per_journey() {
        let pairs = fixture_pairs(MatrixEncoding::Plain);
        let line2 = &pairs[1];
        // journey 0 of line 2 carries exactly one boarding (at its 2nd stop)
        assert_eq!(line2.journey_boardings(0).unwrap(), 1);
        assert_eq!(
            count_range(&line2.get_on, 1, 2, 1, 2).unwrap(),
            1,
            "the boarding sits at stop position 2"
        );
        // stop 10 is position 3 on line 2; journeys 0..=2 see two boardings
        assert_eq!(line2.boardings_at_stop(3, 0, 2).unwrap(), 2);
        // empty journey range at a later window
        assert_eq!(line2.boardings_at_stop(3, 10, 10).unwrap(), 0);
    }

    #[test]
    fn fixture_load_per_segment() {
        let pairs = fixture_pairs(MatrixEncoding::Plain);
        let line2 = &pairs[1];
        // journey 1 of line 2: one rider from position 3 to position 5
        assert_eq!(line2.load_between_stops(1, 3).unwrap(), 1);
        assert_eq!(line2.load_between_stops(1, 4).unwrap(), 1);
        assert_eq!(line2.load_between_stops(1, 5).unwrap(), 0);
        assert_eq!(line2.load_between_stops(1, 1).unwrap(), 0);
        assert!(matches!(
            line2.load_between_stops(1, line2.cols()),
            Err(AcummError::LastStopHasNoSegment)
        ));
    }

    #[test]
    fn row_strip_equals_sum_of_cells() {
        let pairs = fixture_pairs(MatrixEncoding::Plain);
        let line1 = &pairs[0];
        let cols = line1.cols();
        for j in 0..4u32 {
            let strip = line1.window_boardings(j, j, 1, cols).unwrap();
            let sum: u64 = (1..=cols)
                .map(|p| line1.boardings_at_stop(p, j, j).unwrap())
                .sum();
            assert_eq!(strip, sum);
        }
    }

    #[test]
    fn averages_over_days() {
        let offer = fixtures::small_network();
        let pairs = fixture_pairs(MatrixEncoding::Plain);
        let line2 = &pairs[1];
        let day0 = offer
            .journeys_in_interval(LineId(2), 0, 86_400)
            .unwrap()
            .unwrap();
        let one = line2.average_over_days(&[day0], 1, line2.cols()).unwrap();
        assert_eq!(one.total, line2.window_boardings(day0.0, day0.1, 1, line2.cols()).unwrap());
        assert_eq!(one.days, 1);
        let two = line2
            .average_over_days(&[day0, day0], 1, line2.cols())
            .unwrap();
        assert_eq!(two.as_f64(), one.as_f64());
        assert!(matches!(
            line2.average_over_days(&[], 1, 2),
            Err(AcummError::EmptyDayList)
        ));
    }

    #[test]
    fn encodings_answer_identically() {
        let plain = fixture_pairs(MatrixEncoding::Plain);
        let diff = fixture_pairs(MatrixEncoding::Differential);
        for (p, d) in plain.iter().zip(&diff) {
            for r in 0..=p.rows() {
                for c in 0..=p.cols() {
                    assert_eq!(p.get_on.cell(r, c), d.get_on.cell(r, c));
                    assert_eq!(p.get_off.cell(r, c), d.get_off.cell(r, c));
                }
            }
        }
    }

    #[test]
    fn empty_trip_list_zeroes_everything() {
        let offer = fixtures::small_network();
        let pairs = build_matrices(&offer, &[], MatrixEncoding::Plain).unwrap();
        for p in &pairs {
            assert_eq!(p.window_boardings(0, p.rows() as u32 - 1, 1, p.cols()).unwrap(), 0);
        }
    }

    #[test]
    fn serialization_round_trips() {
        for enc in [MatrixEncoding::Plain, MatrixEncoding::Differential] {
            for pair in fixture_pairs(enc) {
                let mut out = Vec::new();
                pair.serialize_into(&mut out);
                let back = AccumulatedMatrixPair::deserialize(&mut Cursor::new(&out)).unwrap();
                assert_eq!(back, pair);
            }
        }
    }
}

//! Brute-force reference answers for every query, by scanning raw trips.
//!
//! Deliberately linear per query and free of any index machinery; these are
//! the ground truth the property and acceptance suites compare against.

use crate::offer::{LineId, NetworkOffer, OfferError, StopId};
use crate::trips::{TripError, UserTrip};
use crate::ttctr::{TripCountQuery, TtctrError};
use alloc::vec::Vec;

/// Which journey anchors a trip for temporal restrictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalAnchor {
    /// The first boarding's journey departure (the indexed semantics).
    TripStart,
    /// The final stage's journey departure (the alternative reading).
    TripEnd,
}

struct TripSummary {
    first_stop: StopId,
    first_line: LineId,
    first_dep: i64,
    last_stop: StopId,
    last_line: LineId,
    last_dep: i64,
}

struct StageEvent {
    journey: u32,
    board_pos: usize,
    alight_pos: usize,
    board_stop: StopId,
}

/// The decoded trip collection plus per-line stage tallies.
pub struct TripStore<'a> {
    offer: &'a NetworkOffer,
    trips: Vec<UserTrip>,
    summaries: Vec<TripSummary>,
    line_stages: Vec<Vec<StageEvent>>,
}

impl<'a> TripStore<'a> {
    /// Validates every trip and precomputes scan summaries.
    pub fn new(offer: &'a NetworkOffer, trips: Vec<UserTrip>) -> Result<Self, (usize, TripError)> {
        let mut summaries = Vec::with_capacity(trips.len());
        let mut line_stages: Vec<Vec<StageEvent>> =
            (0..offer.num_lines()).map(|_| Vec::new()).collect();
        for (i, trip) in trips.iter().enumerate() {
            trip.validate(offer).map_err(|e| (i, e))?;
            let (first, last) = (trip.first(), trip.last());
            summaries.push(TripSummary {
                first_stop: first.board.stop,
                first_line: first.board.line,
                first_dep: offer
                    .departure(first.board.line, first.board.journey)
                    .map_err(|e| (i, TripError::Offer(e)))?,
                last_stop: last.alight_stop,
                last_line: last.board.line,
                last_dep: offer
                    .departure(last.board.line, last.board.journey)
                    .map_err(|e| (i, TripError::Offer(e)))?,
            });
            for st in &trip.stages {
                let line = offer.line(st.board.line).map_err(|e| (i, TripError::Offer(e)))?;
                line_stages[st.board.line.0 as usize - 1].push(StageEvent {
                    journey: st.board.journey,
                    board_pos: line.position_of(st.board.stop).unwrap(),
                    alight_pos: line.position_of(st.alight_stop).unwrap(),
                    board_stop: st.board.stop,
                });
            }
        }
        Ok(TripStore {
            offer,
            trips,
            summaries,
            line_stages,
        })
    }

    pub fn offer(&self) -> &NetworkOffer {
        self.offer
    }

    pub fn trips(&self) -> &[UserTrip] {
        &self.trips
    }

    pub fn num_trips(&self) -> usize {
        self.trips.len()
    }

    /// Linear-scan trip count with the same restriction semantics as the
    /// trip index; the temporal anchor is selectable.
    pub fn count_trips(
        &self,
        q: &TripCountQuery,
        anchor: TemporalAnchor,
    ) -> Result<u64, TtctrError> {
        if q.start_stop.is_none() && q.end_stop.is_none() {
            return Err(TtctrError::InvalidQuery("need a start or an end stop"));
        }
        if let Some((t1, t2)) = q.interval {
            if t1 > t2 {
                return Err(TtctrError::Offer(OfferError::InvalidInterval));
            }
        }
        Ok(self
            .summaries
            .iter()
            .filter(|s| {
                q.start_stop.is_none_or(|x| s.first_stop == x)
                    && q.start_line.is_none_or(|l| s.first_line == l)
                    && q.end_stop.is_none_or(|y| s.last_stop == y)
                    && q.end_line.is_none_or(|l| s.last_line == l)
                    && q.interval.is_none_or(|(t1, t2)| {
                        let dep = match anchor {
                            TemporalAnchor::TripStart => s.first_dep,
                            TemporalAnchor::TripEnd => s.last_dep,
                        };
                        dep >= t1 && dep < t2
                    })
            })
            .count() as u64)
    }

    /// Stage boardings of (stop, line) whose journey departs in `[t1, t2)`.
    pub fn count_boardings(&self, stop: StopId, line: LineId, t1: i64, t2: i64) -> u64 {
        let deps = &self.offer.schedule(line).unwrap().departures;
        self.line_stages[line.0 as usize - 1]
            .iter()
            .filter(|e| {
                e.board_stop == stop && {
                    let dep = deps[e.journey as usize];
                    dep >= t1 && dep < t2
                }
            })
            .count() as u64
    }

    /// Boardings at a stop position over an inclusive journey range.
    pub fn boardings_at_stop(&self, line: LineId, stop_pos: usize, j_lo: u32, j_hi: u32) -> u64 {
        self.line_stages[line.0 as usize - 1]
            .iter()
            .filter(|e| e.board_pos == stop_pos && e.journey >= j_lo && e.journey <= j_hi)
            .count() as u64
    }

    /// Boardings anywhere on one journey.
    pub fn journey_boardings(&self, line: LineId, journey: u32) -> u64 {
        self.line_stages[line.0 as usize - 1]
            .iter()
            .filter(|e| e.journey == journey)
            .count() as u64
    }

    /// Boardings in a journey range over a stop-position range.
    pub fn window_boardings(&self, line: LineId, j_lo: u32, j_hi: u32, p_lo: usize, p_hi: usize) -> u64 {
        self.line_stages[line.0 as usize - 1]
            .iter()
            .filter(|e| {
                e.journey >= j_lo && e.journey <= j_hi && e.board_pos >= p_lo && e.board_pos <= p_hi
            })
            .count() as u64
    }

    /// Riders aboard journey `j` between stop positions `x` and `x + 1`.
    pub fn load_between_stops(&self, line: LineId, journey: u32, x: usize) -> u64 {
        let stages = &self.line_stages[line.0 as usize - 1];
        let on = stages
            .iter()
            .filter(|e| e.journey == journey && e.board_pos <= x)
            .count() as u64;
        let off = stages
            .iter()
            .filter(|e| e.journey == journey && e.alight_pos <= x)
            .count() as u64;
        on - off
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn store(offer: &NetworkOffer) -> TripStore<'_> {
        TripStore::new(offer, fixtures::small_trips()).unwrap()
    }

    fn q() -> TripCountQuery {
        TripCountQuery::default()
    }

    #[test]
    fn counts_visible_by_inspection() {
        let offer = fixtures::small_network();
        let store = store(&offer);
        let count = |query: &TripCountQuery| {
            store.count_trips(query, TemporalAnchor::TripStart).unwrap()
        };
        assert_eq!(
            count(&TripCountQuery { start_stop: Some(StopId(3)), end_stop: Some(StopId(12)), ..q() }),
            1
        );
        assert_eq!(count(&TripCountQuery { end_stop: Some(StopId(11)), ..q() }), 2);
        assert_eq!(count(&TripCountQuery { start_stop: Some(StopId(1)), ..q() }), 1);
        // whole-period filter is vacuous
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
        assert!(store.count_trips(&q(), TemporalAnchor::TripStart).is_err());
    }

    #[test]
    fn temporal_anchor_variants_differ_when_trips_span_journeys() {
        let offer = fixtures::small_network();
        let store = store(&offer);
        // the trip from stop 13 starts on journey 2 of line 2 (departs
        // 06:30) and ends on journey 2 of line 1 (departs 06:40)
        let query = TripCountQuery {
            start_stop: Some(StopId(13)),
            interval: Some((23_400, 24_000)),
            ..q()
        };
        assert_eq!(store.count_trips(&query, TemporalAnchor::TripStart).unwrap(), 1);
        assert_eq!(store.count_trips(&query, TemporalAnchor::TripEnd).unwrap(), 0);
    }

    #[test]
    fn stage_tallies() {
        let offer = fixtures::small_network();
        let store = store(&offer);
        let (t0, t1) = offer.period();
        assert_eq!(store.count_boardings(StopId(10), LineId(2), t0, t1), 2);
        assert_eq!(store.boardings_at_stop(LineId(2), 3, 0, 2), 2);
        assert_eq!(store.journey_boardings(LineId(2), 0), 1);
        assert_eq!(store.window_boardings(LineId(2), 0, 2, 1, 8), 4);
        assert_eq!(store.load_between_stops(LineId(2), 1, 3), 1);
        assert_eq!(store.load_between_stops(LineId(2), 1, 5), 0);
    }

    #[test]
    fn rejects_invalid_trips() {
        let offer = fixtures::small_network();
        let mut trips = fixtures::small_trips();
        trips[2].stages[1].board.journey = 9999;
        assert!(TripStore::new(&offer, trips).is_err());
    }
}

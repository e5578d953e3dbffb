//! User trips: sequences of stages over the network.
//!
//! A [`Stage`] is one boarding (stop, line, journey) plus the stop where the
//! user got off. The *canonical triple form* of a trip drops intermediate
//! alight stops — the next boarding is at the same stop or within walking
//! range — and appends one final triple that repeats the line and journey of
//! the last stage while naming the final stop. That form is what the trips
//! file and the trip index store; [`UserTrip::from_triples`] recovers the
//! intermediate alight stops deterministically.

use crate::offer::{LineId, NetworkOffer, OfferError, StopId};
use alloc::vec::Vec;
use core::fmt;

/// Transfers may walk at most this far between stops.
pub const TRANSFER_WALK_RADIUS_M: f64 = 100.0;
/// Transfers may wait at most this long for the next boarding.
pub const TRANSFER_MAX_WAIT_S: i64 = 1_800;
/// A trip traverses at most this many stops in total.
pub const MAX_TRIP_TRAVERSED: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boarding {
    pub stop: StopId,
    pub line: LineId,
    pub journey: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stage {
    pub board: Boarding,
    pub alight_stop: StopId,
}

/// One element of the canonical triple form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub stop: StopId,
    pub line: LineId,
    pub journey: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserTrip {
    pub stages: Vec<Stage>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TripError {
    Offer(OfferError),
    Empty,
    TooFewTriples,
    AlightNotAfterBoard { line: u32, board: u32, alight: u32 },
    LastTripleMismatch,
    SameLineReboard { line: u32 },
    TransferTooFar { from: u32, to: u32, meters: f64 },
    TransferWait { seconds: i64 },
    TooLong { traversed: u32 },
    NoAlightMatches { line: u32, near: u32 },
}

impl fmt::Display for TripError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripError::Offer(e) => write!(f, "{}", e),
            TripError::Empty => write!(f, "trip has no stages"),
            TripError::TooFewTriples => write!(f, "canonical form needs >= 2 triples"),
            TripError::AlightNotAfterBoard { line, board, alight } => write!(
                f,
                "alight stop {} not after board stop {} on line {}",
                alight, board, line
            ),
            TripError::LastTripleMismatch => {
                write!(f, "last triple must repeat the previous line and journey")
            }
            TripError::SameLineReboard { line } => {
                write!(f, "reboarded line {} straight after leaving it", line)
            }
            TripError::TransferTooFar { from, to, meters } => write!(
                f,
                "transfer from stop {} to stop {} walks {:.0} m",
                from, to, meters
            ),
            TripError::TransferWait { seconds } => {
                write!(f, "transfer wait of {} s out of range", seconds)
            }
            TripError::TooLong { traversed } => {
                write!(f, "trip traverses {} stops", traversed)
            }
            TripError::NoAlightMatches { line, near } => write!(
                f,
                "no stop on line {} within walking range of stop {}",
                line, near
            ),
        }
    }
}

impl From<OfferError> for TripError {
    fn from(e: OfferError) -> Self {
        TripError::Offer(e)
    }
}

impl UserTrip {
    pub fn new(stages: Vec<Stage>) -> Self {
        UserTrip { stages }
    }

    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    pub fn first(&self) -> &Stage {
        &self.stages[0]
    }

    pub fn last(&self) -> &Stage {
        self.stages.last().unwrap()
    }

    /// Stops traversed while riding, summed over stages.
    pub fn traversed_stops(&self, offer: &NetworkOffer) -> Result<u32, TripError> {
        let mut total = 0u32;
        for st in &self.stages {
            let line = offer.line(st.board.line)?;
            let p = line
                .position_of(st.board.stop)
                .ok_or(OfferError::StopNotOnLine {
                    stop: st.board.stop.0,
                    line: st.board.line.0,
                })?;
            let q = line
                .position_of(st.alight_stop)
                .ok_or(OfferError::StopNotOnLine {
                    stop: st.alight_stop.0,
                    line: st.board.line.0,
                })?;
            if q <= p {
                return Err(TripError::AlightNotAfterBoard {
                    line: st.board.line.0,
                    board: st.board.stop.0,
                    alight: st.alight_stop.0,
                });
            }
            total += (q - p) as u32;
        }
        Ok(total)
    }

    /// Canonical triple form: one triple per boarding plus the final stop
    /// repeating the last line and journey.
    pub fn to_triples(&self) -> Vec<Triple> {
        let mut out: Vec<Triple> = self
            .stages
            .iter()
            .map(|st| Triple {
                stop: st.board.stop,
                line: st.board.line,
                journey: st.board.journey,
            })
            .collect();
        let last = self.last();
        out.push(Triple {
            stop: last.alight_stop,
            line: last.board.line,
            journey: last.board.journey,
        });
        out
    }

    /// Rebuilds a trip from its canonical triple form, recovering each
    /// intermediate alight stop as the earliest stop after the boarding that
    /// lies within walking range of the next boarding stop.
    pub fn from_triples(offer: &NetworkOffer, triples: &[Triple]) -> Result<Self, TripError> {
        if triples.len() < 2 {
            return Err(TripError::TooFewTriples);
        }
        let (last, boards) = triples.split_last().unwrap();
        let final_stage = boards.last().unwrap();
        if last.line != final_stage.line || last.journey != final_stage.journey {
            return Err(TripError::LastTripleMismatch);
        }
        let mut stages = Vec::with_capacity(boards.len());
        for (i, b) in boards.iter().enumerate() {
            let next_stop = if i + 1 < boards.len() {
                boards[i + 1].stop
            } else {
                last.stop
            };
            let alight_stop = if i + 1 < boards.len() {
                reconstruct_alight(offer, b.line, b.stop, next_stop)?
            } else {
                next_stop
            };
            stages.push(Stage {
                board: Boarding {
                    stop: b.stop,
                    line: b.line,
                    journey: b.journey,
                },
                alight_stop,
            });
        }
        Ok(UserTrip { stages })
    }

    /// Checks every trip invariant against the offer.
    pub fn validate(&self, offer: &NetworkOffer) -> Result<(), TripError> {
        if self.stages.is_empty() {
            return Err(TripError::Empty);
        }
        let traversed = self.traversed_stops(offer)?;
        if traversed > MAX_TRIP_TRAVERSED {
            return Err(TripError::TooLong { traversed });
        }
        for st in &self.stages {
            // journey must exist; position checks ran in traversed_stops
            offer.departure(st.board.line, st.board.journey)?;
        }
        for pair in self.stages.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.board.line == b.board.line {
                return Err(TripError::SameLineReboard {
                    line: a.board.line.0,
                });
            }
            let walk = offer.distance_m(a.alight_stop, b.board.stop)?;
            if walk > TRANSFER_WALK_RADIUS_M {
                return Err(TripError::TransferTooFar {
                    from: a.alight_stop.0,
                    to: b.board.stop.0,
                    meters: walk,
                });
            }
            let alight_t = offer.stop_arrival_time(a.board.line, a.board.journey, a.alight_stop)?;
            let board_t = offer.stop_arrival_time(b.board.line, b.board.journey, b.board.stop)?;
            let wait = board_t - alight_t;
            if !(0..=TRANSFER_MAX_WAIT_S).contains(&wait) {
                return Err(TripError::TransferWait { seconds: wait });
            }
        }
        Ok(())
    }
}

/// The earliest stop strictly after `board_stop` on `line` within walking
/// range of `near`. This is the rule both the trips file reader and the
/// generator agree on, so the canonical form is lossless in practice.
pub fn reconstruct_alight(
    offer: &NetworkOffer,
    line: LineId,
    board_stop: StopId,
    near: StopId,
) -> Result<StopId, TripError> {
    let l = offer.line(line)?;
    let p = l.position_of(board_stop).ok_or(OfferError::StopNotOnLine {
        stop: board_stop.0,
        line: line.0,
    })?;
    for &cand in &l.stops[p..] {
        if cand == near || offer.distance_m(cand, near)? <= TRANSFER_WALK_RADIUS_M {
            return Ok(cand);
        }
    }
    Err(TripError::NoAlightMatches {
        line: line.0,
        near: near.0,
    })
}

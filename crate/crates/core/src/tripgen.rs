//! Synthetic user-trip generator.
//!
//! Each trip starts at a random stop of a random journey and rides along.
//! After every traversed stop the trip may end (probability grows linearly
//! with the stops traversed so far, hard-capped); once a stage is two stops
//! old the rider may also switch lines, alighting and boarding any journey
//! reachable from the current stop — same stop or a short walk — within the
//! transfer wait window, never back onto the line just left. A trip ends
//! quietly when a switch finds no feasible boarding.
//!
//! Generation is deterministic for a fixed seed.

use crate::offer::{LineId, NetworkOffer, StopId};
use crate::trips::{
    reconstruct_alight, Boarding, Stage, UserTrip, MAX_TRIP_TRAVERSED, TRANSFER_MAX_WAIT_S,
    TRANSFER_WALK_RADIUS_M,
};
use alloc::vec::Vec;
use core::fmt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub trip_count: usize,
    pub rng_seed: u64,
    /// Per-stop probability that a stage ends with a line switch, applied
    /// once the stage is at least two stops old.
    pub switch_probability: f64,
    /// Per-stop trip-end probability is `end_prob_coefficient * traversed`.
    pub end_prob_coefficient: f64,
    pub max_trip_stops: u32,
    pub max_wait_seconds: i64,
    pub walk_radius_meters: f64,
}

impl GeneratorConfig {
    pub fn new(trip_count: usize, rng_seed: u64) -> Self {
        GeneratorConfig {
            trip_count,
            rng_seed,
            switch_probability: 0.1,
            end_prob_coefficient: 0.01,
            max_trip_stops: MAX_TRIP_TRAVERSED,
            max_wait_seconds: TRANSFER_MAX_WAIT_S,
            walk_radius_meters: TRANSFER_WALK_RADIUS_M,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    EmptyNetwork,
    BadConfig(&'static str),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::EmptyNetwork => write!(f, "network has no lines"),
            GenError::BadConfig(what) => write!(f, "bad generator config: {}", what),
        }
    }
}

fn rng_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn rng_below(rng: &mut ChaCha8Rng, k: usize) -> usize {
    (rng.next_u64() % k as u64) as usize
}

/// All boardings reachable from `stop` at instant `t`: at the same stop or
/// any stop within walking range, arriving within the wait window, excluding
/// the line just left and boardings at a line's final stop. Ordered by
/// (stop, line, journey).
pub fn find_transfer_candidates(
    offer: &NetworkOffer,
    stop: StopId,
    t: i64,
    prev_line: LineId,
) -> Vec<Boarding> {
    candidates_within(offer, stop, t, prev_line, TRANSFER_WALK_RADIUS_M, TRANSFER_MAX_WAIT_S)
}

fn candidates_within(
    offer: &NetworkOffer,
    stop: StopId,
    t: i64,
    prev_line: LineId,
    radius_m: f64,
    wait_s: i64,
) -> Vec<Boarding> {
    let mut out = Vec::new();
    for near in offer.stops() {
        if near.id != stop && offer.distance_m(stop, near.id).unwrap() > radius_m {
            continue;
        }
        for &line_id in offer.lines_of_stop(near.id).unwrap() {
            if line_id == prev_line {
                continue;
            }
            let line = offer.line(line_id).unwrap();
            if line.last_stop() == near.id {
                continue;
            }
            let acc = line.acc_seconds[line.position_of(near.id).unwrap() - 1] as i64;
            // arrival = departure + acc must land in [t, t + wait]
            if let Some((j_lo, j_hi)) = offer
                .journeys_in_interval(line_id, t - acc, t + wait_s - acc + 1)
                .unwrap()
            {
                for j in j_lo..=j_hi {
                    out.push(Boarding {
                        stop: near.id,
                        line: line_id,
                        journey: j,
                    });
                }
            }
        }
    }
    out
}

/// Generates exactly `cfg.trip_count` trips, deterministically for the seed.
pub fn generate_trips(
    offer: &NetworkOffer,
    cfg: &GeneratorConfig,
) -> Result<Vec<UserTrip>, GenError> {
    if offer.num_lines() == 0 {
        return Err(GenError::EmptyNetwork);
    }
    if !(0.0..=1.0).contains(&cfg.switch_probability)
        || !(0.0..=1.0).contains(&cfg.end_prob_coefficient)
    {
        return Err(GenError::BadConfig("probabilities must lie in [0, 1]"));
    }
    if cfg.walk_radius_meters > TRANSFER_WALK_RADIUS_M {
        return Err(GenError::BadConfig("walk radius beyond the transfer rule"));
    }
    if cfg.max_wait_seconds > TRANSFER_MAX_WAIT_S || cfg.max_wait_seconds < 0 {
        return Err(GenError::BadConfig("wait window beyond the transfer rule"));
    }
    if cfg.max_trip_stops > MAX_TRIP_TRAVERSED || cfg.max_trip_stops == 0 {
        return Err(GenError::BadConfig("trip cap beyond the length rule"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let trips = (0..cfg.trip_count)
        .map(|_| generate_one(offer, cfg, &mut rng))
        .collect();
    Ok(trips)
}

fn generate_one(offer: &NetworkOffer, cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> UserTrip {
    // random boarding: line, journey, then any position but the last
    let line_id = LineId(rng_below(rng, offer.num_lines() as usize) as u32 + 1);
    let journey = rng_below(rng, offer.num_journeys(line_id).unwrap() as usize) as u32;
    let line = offer.line(line_id).unwrap();
    let board_pos = 1 + rng_below(rng, line.num_stops() - 1);

    let mut stages: Vec<Stage> = Vec::new();
    let mut cur_line = line_id;
    let mut cur_journey = journey;
    let mut stage_board = board_pos;
    let mut pos = board_pos;
    let mut traversed = 0u32;

    loop {
        pos += 1;
        traversed += 1;
        let line = offer.line(cur_line).unwrap();
        let board_stop = line.stops[stage_board - 1];
        let here = line.stops[pos - 1];

        // trip end; wins any tie with a switch at the same stop
        let must_end = traversed >= cfg.max_trip_stops;
        if must_end || rng_f64(rng) < cfg.end_prob_coefficient * traversed as f64 {
            stages.push(Stage {
                board: Boarding {
                    stop: board_stop,
                    line: cur_line,
                    journey: cur_journey,
                },
                alight_stop: here,
            });
            break;
        }

        let at_line_end = pos == line.num_stops();
        let wants_switch =
            pos - stage_board >= 2 && rng_f64(rng) < cfg.switch_probability;
        if !(at_line_end || wants_switch) {
            continue;
        }

        stages.push(Stage {
            board: Boarding {
                stop: board_stop,
                line: cur_line,
                journey: cur_journey,
            },
            alight_stop: here,
        });
        let t_here = offer.stop_arrival_time(cur_line, cur_journey, here).unwrap();
        let mut candidates = candidates_within(
            offer,
            here,
            t_here,
            cur_line,
            cfg.walk_radius_meters,
            cfg.max_wait_seconds,
        );
        // keep only boardings the canonical triple form can reconstruct:
        // the actual alight stop must be the earliest one within walking
        // range of the next boarding stop
        candidates.retain(|c| {
            reconstruct_alight(offer, cur_line, board_stop, c.stop)
                .is_ok_and(|rec| rec == here)
        });
        if candidates.is_empty() {
            break; // no feasible connection: the trip simply ends here
        }
        let chosen = candidates[rng_below(rng, candidates.len())];
        cur_line = chosen.line;
        cur_journey = chosen.journey;
        stage_board = offer
            .line(cur_line)
            .unwrap()
            .position_of(chosen.stop)
            .unwrap();
        pos = stage_board;
    }
    UserTrip::new(stages)
}

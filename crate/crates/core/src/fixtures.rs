//! A small two-line demonstration network with five hand-written trips.
//!
//! Fourteen stops, two lines that cross at stops 9, 10 and 14, a two-day
//! analysis period, and 48 journeys per line per day. Used throughout the
//! test suites and handy as a worked example of the data model.

use crate::offer::{Line, LineId, LineSchedule, NetworkOffer, Stop, StopId};
use crate::trips::{Boarding, Stage, UserTrip};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Two days starting at epoch 0.
pub const PERIOD: (i64, i64) = (0, 2 * 86_400);

pub fn small_network() -> NetworkOffer {
    let stops: Vec<Stop> = (1..=14u32)
        .map(|i| Stop {
            id: StopId(i),
            label: format!("S{}", i),
            // a loose grid, all pairs well over 100 m apart
            lat_udeg: 40_000_000 + 5_000 * ((i - 1) / 4) as i64,
            lon_udeg: -3_000_000 + 5_000 * ((i - 1) % 4) as i64,
        })
        .collect();

    let lines = vec![
        Line {
            id: LineId(1),
            stops: [1, 2, 3, 10, 7, 8, 9, 14].map(StopId).to_vec(),
            acc_seconds: vec![0, 150, 305, 420, 560, 640, 720, 800],
        },
        Line {
            id: LineId(2),
            stops: [13, 6, 10, 5, 11, 9, 12, 14].map(StopId).to_vec(),
            acc_seconds: vec![0, 120, 300, 433, 540, 660, 780, 900],
        },
    ];

    // 48 journeys per day from 06:00; line 1 every 20 min, line 2 every 15.
    let day_departures = |headway: i64| -> Vec<i64> {
        (0..2)
            .flat_map(|day| (0..48).map(move |j| day * 86_400 + 21_600 + j * headway))
            .collect()
    };
    let schedules = vec![
        LineSchedule {
            line: LineId(1),
            departures: day_departures(1_200),
        },
        LineSchedule {
            line: LineId(2),
            departures: day_departures(900),
        },
    ];

    NetworkOffer::new(stops, lines, schedules, PERIOD).unwrap()
}

/// Five trips over [`small_network`], all on day one.
pub fn small_trips() -> Vec<UserTrip> {
    let stage = |stop: u32, line: u32, journey: u32, alight: u32| Stage {
        board: Boarding {
            stop: StopId(stop),
            line: LineId(line),
            journey,
        },
        alight_stop: StopId(alight),
    };
    vec![
        UserTrip::new(vec![stage(1, 1, 0, 10), stage(10, 2, 1, 11)]),
        UserTrip::new(vec![stage(2, 1, 1, 7)]),
        UserTrip::new(vec![stage(3, 1, 1, 10), stage(10, 2, 2, 12)]),
        UserTrip::new(vec![stage(6, 2, 0, 11)]),
        UserTrip::new(vec![stage(13, 2, 2, 9), stage(9, 1, 2, 14)]),
    ]
}

//! The network *offer*: stops, lines, journey schedules, and the inverted
//! stop-to-lines index.
//!
//! Stops and lines carry dense 1-based ids. Journeys of a line are numbered
//! `0..n_j` ordered by departure time over the whole analysis period, so any
//! time interval maps to a contiguous journey range. Per-stop times are the
//! line's average accumulated seconds from its first stop; the arrival of
//! journey `j` at a stop is simply `departure(j) + acc_seconds(stop)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub const SECONDS_PER_DAY: i64 = 86_400;

/// 1-based stop identifier, dense over `1..=num_stops`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StopId(pub u32);

/// 1-based line identifier, dense over `1..=num_lines`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineId(pub u32);

impl fmt::Display for StopId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stop {
    pub id: StopId,
    pub label: String,
    /// Latitude/longitude in microdegrees (exact, text-format friendly).
    pub lat_udeg: i64,
    pub lon_udeg: i64,
}

impl Stop {
    pub fn lat(&self) -> f64 {
        self.lat_udeg as f64 * 1e-6
    }

    pub fn lon(&self) -> f64 {
        self.lon_udeg as f64 * 1e-6
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub id: LineId,
    /// Ordered stop sequence; a line and its return line are distinct lines.
    pub stops: Vec<StopId>,
    /// Average accumulated seconds from the first stop; `acc_seconds[0] == 0`
    /// and strictly increasing.
    pub acc_seconds: Vec<u32>,
}

impl Line {
    /// 1-based position of `stop` on this line.
    pub fn position_of(&self, stop: StopId) -> Option<usize> {
        self.stops.iter().position(|&s| s == stop).map(|p| p + 1)
    }

    pub fn num_stops(&self) -> usize {
        self.stops.len()
    }

    pub fn last_stop(&self) -> StopId {
        *self.stops.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSchedule {
    pub line: LineId,
    /// Absolute departure instants (epoch seconds) of every journey in the
    /// analysis period, strictly increasing. Journey `j` departs at
    /// `departures[j]`.
    pub departures: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OfferError {
    UnknownStop(u32),
    UnknownLine(u32),
    StopNotOnLine { stop: u32, line: u32 },
    JourneyOutOfRange { line: u32, journey: u32 },
    InvalidInterval,
    Invalid(&'static str),
}

impl fmt::Display for OfferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OfferError::UnknownStop(s) => write!(f, "unknown stop {}", s),
            OfferError::UnknownLine(l) => write!(f, "unknown line {}", l),
            OfferError::StopNotOnLine { stop, line } => {
                write!(f, "stop {} is not on line {}", stop, line)
            }
            OfferError::JourneyOutOfRange { line, journey } => {
                write!(f, "journey {} out of range for line {}", journey, line)
            }
            OfferError::InvalidInterval => write!(f, "interval end precedes start"),
            OfferError::Invalid(what) => write!(f, "invalid offer: {}", what),
        }
    }
}

/// The complete static description of the network supply.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkOffer {
    stops: Vec<Stop>,
    lines: Vec<Line>,
    schedules: Vec<LineSchedule>,
    stop_lines: Vec<Vec<LineId>>,
    period: (i64, i64),
}

impl NetworkOffer {
    /// Validates every structural invariant and builds the inverted index.
    pub fn new(
        stops: Vec<Stop>,
        lines: Vec<Line>,
        schedules: Vec<LineSchedule>,
        period: (i64, i64),
    ) -> Result<Self, OfferError> {
        if period.0 >= period.1 {
            return Err(OfferError::Invalid("empty analysis period"));
        }
        for (i, s) in stops.iter().enumerate() {
            if s.id.0 as usize != i + 1 {
                return Err(OfferError::Invalid("stop ids must be dense 1..n"));
            }
        }
        for (i, l) in lines.iter().enumerate() {
            if l.id.0 as usize != i + 1 {
                return Err(OfferError::Invalid("line ids must be dense 1..n"));
            }
            if l.stops.len() < 2 || l.stops.len() != l.acc_seconds.len() {
                return Err(OfferError::Invalid("line needs >= 2 stops with times"));
            }
            if l.acc_seconds[0] != 0 {
                return Err(OfferError::Invalid("first accumulated time must be 0"));
            }
            if !l.acc_seconds.windows(2).all(|w| w[0] < w[1]) {
                return Err(OfferError::Invalid(
                    "accumulated times must be strictly increasing",
                ));
            }
            for (k, &s) in l.stops.iter().enumerate() {
                if s.0 == 0 || s.0 as usize > stops.len() {
                    return Err(OfferError::UnknownStop(s.0));
                }
                if l.stops[..k].contains(&s) {
                    return Err(OfferError::Invalid("stop repeats within a line"));
                }
            }
        }
        if schedules.len() != lines.len() {
            return Err(OfferError::Invalid("every line needs a schedule"));
        }
        for (i, sch) in schedules.iter().enumerate() {
            if sch.line.0 as usize != i + 1 {
                return Err(OfferError::Invalid("schedules must follow line order"));
            }
            if sch.departures.is_empty() {
                return Err(OfferError::Invalid("line has no journeys"));
            }
            if !sch.departures.windows(2).all(|w| w[0] < w[1]) {
                return Err(OfferError::Invalid(
                    "departures must be strictly increasing",
                ));
            }
            if sch.departures[0] < period.0
                || *sch.departures.last().unwrap() >= period.1
            {
                return Err(OfferError::Invalid(
                    "departure outside the analysis period",
                ));
            }
        }
        let mut stop_lines = vec![Vec::new(); stops.len()];
        for l in &lines {
            for &s in &l.stops {
                stop_lines[s.0 as usize - 1].push(l.id);
            }
        }
        for ls in &mut stop_lines {
            ls.sort_unstable();
            ls.dedup();
        }
        Ok(NetworkOffer {
            stops,
            lines,
            schedules,
            stop_lines,
            period,
        })
    }

    pub fn num_stops(&self) -> u32 {
        self.stops.len() as u32
    }

    pub fn num_lines(&self) -> u32 {
        self.lines.len() as u32
    }

    /// The analysis period `[begin, end)` in epoch seconds.
    pub fn period(&self) -> (i64, i64) {
        self.period
    }

    pub fn num_days(&self) -> u32 {
        ((self.period.1 - self.period.0 + SECONDS_PER_DAY - 1) / SECONDS_PER_DAY) as u32
    }

    /// Bounds `[begin, end)` of the `day`-th calendar day of the period.
    pub fn day_bounds(&self, day: u32) -> (i64, i64) {
        let start = self.period.0 + day as i64 * SECONDS_PER_DAY;
        (start, start + SECONDS_PER_DAY)
    }

    pub fn stops(&self) -> &[Stop] {
        &self.stops
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn schedules(&self) -> &[LineSchedule] {
        &self.schedules
    }

    pub fn stop(&self, id: StopId) -> Result<&Stop, OfferError> {
        self.stops
            .get(id.0.wrapping_sub(1) as usize)
            .ok_or(OfferError::UnknownStop(id.0))
    }

    pub fn line(&self, id: LineId) -> Result<&Line, OfferError> {
        self.lines
            .get(id.0.wrapping_sub(1) as usize)
            .ok_or(OfferError::UnknownLine(id.0))
    }

    pub fn schedule(&self, id: LineId) -> Result<&LineSchedule, OfferError> {
        self.line(id)?;
        Ok(&self.schedules[id.0 as usize - 1])
    }

    /// Number of journeys of `line` over the whole period.
    pub fn num_journeys(&self, line: LineId) -> Result<u32, OfferError> {
        Ok(self.schedule(line)?.departures.len() as u32)
    }

    /// Largest journey count over all lines.
    pub fn max_journeys(&self) -> u32 {
        self.schedules
            .iter()
            .map(|s| s.departures.len() as u32)
            .max()
            .unwrap_or(0)
    }

    /// Departure instant of journey `j` of `line`.
    pub fn departure(&self, line: LineId, journey: u32) -> Result<i64, OfferError> {
        let sch = self.schedule(line)?;
        sch.departures
            .get(journey as usize)
            .copied()
            .ok_or(OfferError::JourneyOutOfRange {
                line: line.0,
                journey,
            })
    }

    /// Instant at which journey `j` of `line` reaches `stop`.
    pub fn stop_arrival_time(
        &self,
        line: LineId,
        journey: u32,
        stop: StopId,
    ) -> Result<i64, OfferError> {
        let l = self.line(line)?;
        let pos = l.position_of(stop).ok_or(OfferError::StopNotOnLine {
            stop: stop.0,
            line: line.0,
        })?;
        Ok(self.departure(line, journey)? + l.acc_seconds[pos - 1] as i64)
    }

    /// Maximal contiguous journey range of `line` departing within
    /// `[t1, t2)`, as inclusive 0-based journey ids; `None` when empty.
    pub fn journeys_in_interval(
        &self,
        line: LineId,
        t1: i64,
        t2: i64,
    ) -> Result<Option<(u32, u32)>, OfferError> {
        if t1 > t2 {
            return Err(OfferError::InvalidInterval);
        }
        let deps = &self.schedule(line)?.departures;
        let lo = deps.partition_point(|&d| d < t1);
        let hi = deps.partition_point(|&d| d < t2);
        if lo == hi {
            Ok(None)
        } else {
            Ok(Some((lo as u32, hi as u32 - 1)))
        }
    }

    /// Lines serving `stop`, ascending.
    pub fn lines_of_stop(&self, stop: StopId) -> Result<&[LineId], OfferError> {
        self.stop(stop)?;
        Ok(&self.stop_lines[stop.0 as usize - 1])
    }

    /// Great-circle distance between two stops in meters.
    pub fn distance_m(&self, a: StopId, b: StopId) -> Result<f64, OfferError> {
        let (a, b) = (self.stop(a)?, self.stop(b)?);
        Ok(haversine_m(a.lat(), a.lon(), b.lat(), b.lon()))
    }
}

/// Great-circle distance in meters between two (lat, lon) points in degrees.
pub fn haversine_m(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    const EARTH_RADIUS_M: f64 = 6_371_000.0;
    let rad = core::f64::consts::PI / 180.0;
    let (phi1, phi2) = (lat1 * rad, lat2 * rad);
    let dphi = (lat2 - lat1) * rad;
    let dlambda = (lon2 - lon1) * rad;
    let a = libm::sin(dphi / 2.0) * libm::sin(dphi / 2.0)
        + libm::cos(phi1) * libm::cos(phi2) * libm::sin(dlambda / 2.0) * libm::sin(dlambda / 2.0);
    2.0 * EARTH_RADIUS_M * libm::atan2(libm::sqrt(a), libm::sqrt(1.0 - a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn arrival_times_from_accumulated_seconds() {
        let o = fixtures::small_network();
        // Line 1, journey 1 departs 06:20 on day 1; the third stop is 305 s in.
        assert_eq!(
            o.stop_arrival_time(LineId(1), 1, StopId(3)).unwrap(),
            21_600 + 1_200 + 305
        );
        // Line 2, journey 2 departs 06:30; its third stop is 300 s in.
        assert_eq!(
            o.stop_arrival_time(LineId(2), 2, StopId(10)).unwrap(),
            23_400 + 300
        );
        // First stop of any journey is the departure itself.
        assert_eq!(
            o.stop_arrival_time(LineId(1), 5, StopId(1)).unwrap(),
            o.departure(LineId(1), 5).unwrap()
        );
        assert!(matches!(
            o.stop_arrival_time(LineId(1), 0, StopId(13)),
            Err(OfferError::StopNotOnLine { .. })
        ));
    }

    #[test]
    fn arrival_strictly_increases_along_a_line() {
        let o = fixtures::small_network();
        for line in o.lines() {
            let mut prev = i64::MIN;
            for &s in &line.stops {
                let t = o.stop_arrival_time(line.id, 0, s).unwrap();
                assert!(t > prev);
                prev = t;
            }
        }
    }

    #[test]
    fn journey_ranges_per_day() {
        let o = fixtures::small_network();
        let (d1, d2) = (o.day_bounds(0), o.day_bounds(1));
        assert_eq!(
            o.journeys_in_interval(LineId(1), d1.0, d1.1).unwrap(),
            Some((0, 47))
        );
        assert_eq!(
            o.journeys_in_interval(LineId(1), d2.0, d2.1).unwrap(),
            Some((48, 95))
        );
        // before the first departure
        assert_eq!(o.journeys_in_interval(LineId(1), 0, 21_600).unwrap(), None);
        assert!(o.journeys_in_interval(LineId(99), 0, 1).is_err());
    }

    #[test]
    fn adjacent_intervals_partition_journeys() {
        let o = fixtures::small_network();
        let (t0, t3) = o.period();
        for mid in [t0, 30_000, 90_000, t3] {
            let whole = o.journeys_in_interval(LineId(2), t0, t3).unwrap().unwrap();
            let left = o.journeys_in_interval(LineId(2), t0, mid).unwrap();
            let right = o.journeys_in_interval(LineId(2), mid, t3).unwrap();
            let count = |r: Option<(u32, u32)>| r.map_or(0, |(a, b)| b - a + 1);
            assert_eq!(count(Some(whole)), count(left) + count(right));
        }
    }

    #[test]
    fn inverted_index_matches_line_membership() {
        let o = fixtures::small_network();
        assert_eq!(o.lines_of_stop(StopId(10)).unwrap(), &[LineId(1), LineId(2)]);
        assert_eq!(o.lines_of_stop(StopId(4)).unwrap(), &[] as &[LineId]);
        assert_eq!(o.lines_of_stop(StopId(13)).unwrap(), &[LineId(2)]);
        for s in 1..=o.num_stops() {
            for l in 1..=o.num_lines() {
                let on_line = o.line(LineId(l)).unwrap().stops.contains(&StopId(s));
                let in_index = o.lines_of_stop(StopId(s)).unwrap().contains(&LineId(l));
                assert_eq!(on_line, in_index);
            }
        }
    }

    #[test]
    fn haversine_scale() {
        // one degree of latitude is about 111 km
        let d = haversine_m(40.0, -3.0, 41.0, -3.0);
        assert!((d - 111_195.0).abs() < 100.0);
        assert_eq!(haversine_m(40.0, -3.0, 40.0, -3.0), 0.0);
    }

    #[test]
    fn rejects_malformed_offers() {
        let o = fixtures::small_network();
        let stops = o.stops().to_vec();
        let mut lines = o.lines().to_vec();
        let schedules = o.schedules().to_vec();
        lines[0].acc_seconds[0] = 5;
        assert!(NetworkOffer::new(stops, lines, schedules, o.period()).is_err());
    }
}

//! Compact in-memory indexes for collections of user trips over a public
//! transportation network.
//!
//! Two complementary structures are provided:
//!
//! * [`ttctr`] — a self-index over the trips themselves: each trip becomes a
//!   short string of (stop, line) symbols, the whole collection is indexed by
//!   a cyclic compressed suffix array ([`csa`]) and the journey identifiers
//!   ride along in a wavelet matrix ([`wavelet`]). It answers counting and
//!   pattern queries about where trips start, end, and switch lines.
//! * [`acumm`] — per-line accumulated get-on/get-off matrices with O(1)
//!   window aggregation ([`acumm::count_range`]). It answers load and
//!   aggregate queries per journey, stop, or window.
//!
//! Both are built over the same network description ([`offer`]) and the same
//! trip collection ([`trips`]); a brute-force reference implementation of all
//! queries lives in [`oracle`] and a synthetic trip generator in [`tripgen`].
//!
//! The crate is `no_std` (with `alloc`); everything that touches files lives
//! in the companion `tripidx` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod acumm;
pub mod codec;
pub mod csa;
pub mod fixtures;
pub mod offer;
pub mod oracle;
pub mod succinct;
pub mod tripgen;
pub mod trips;
pub mod ttctr;
pub mod wavelet;

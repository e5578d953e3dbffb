//! Property suites pinning every structure to a brute-force oracle.

use proptest::prelude::*;
use tripidx_core::acumm::{self, AccumulatedMatrix, MatrixEncoding};
use tripidx_core::csa::{build_cyclic_sa, CsaOptions, CyclicCsa};
use tripidx_core::fixtures;
use tripidx_core::offer::{LineId, StopId};
use tripidx_core::oracle::{TemporalAnchor, TripStore};
use tripidx_core::succinct::{BitBuf, BitVector, FixedWidthIntArray, RrrBitVector, SparseBitVector};
use tripidx_core::tripgen::{generate_trips, GeneratorConfig};
use tripidx_core::ttctr::{self, TripCountQuery, TtctrOptions};
use tripidx_core::wavelet::{WaveletMatrix, WaveletOptions};

proptest! {
    #[test]
    fn bitvectors_agree_with_scanning(bits in proptest::collection::vec(any::<bool>(), 0..2000)) {
        let plain = BitVector::from_bools(bits.iter().copied());
        let positions: Vec<u64> = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as u64))
            .collect();
        let sparse = SparseBitVector::from_positions(bits.len(), &positions);
        let buf: BitBuf = bits.iter().copied().collect();
        let rrr = RrrBitVector::from_buf(&buf, 8);

        let mut ones = 0u64;
        for i in 0..=bits.len() {
            prop_assert_eq!(plain.rank1(i), Some(ones));
            prop_assert_eq!(sparse.rank1(i), Some(ones));
            prop_assert_eq!(rrr.rank1(i), Some(ones));
            if i < bits.len() && bits[i] {
                ones += 1;
                prop_assert_eq!(plain.select1(ones), Some(i + 1));
                prop_assert_eq!(sparse.select1(ones), Some(i + 1));
                prop_assert_eq!(rrr.select1(ones), Some(i + 1));
            }
        }
        prop_assert_eq!(plain.select1(ones + 1), None);
        prop_assert_eq!(sparse.select1(ones + 1), None);
    }

    #[test]
    fn int_array_round_trips(
        width in 1u32..=64,
        writes in proptest::collection::vec((0usize..200, any::<u64>()), 1..60),
    ) {
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        let mut reference = vec![0u64; 200];
        let mut arr = FixedWidthIntArray::zeroed(width, 200);
        for (idx, v) in writes {
            let v = v & mask;
            arr.set(idx, v);
            reference[idx] = v;
        }
        for (i, &v) in reference.iter().enumerate() {
            prop_assert_eq!(arr.get(i), Some(v));
        }
    }

    #[test]
    fn wavelet_counts_match_scans(
        values in proptest::collection::vec(0u64..500, 1..400),
        queries in proptest::collection::vec((0usize..400, 0usize..400, 0u64..520, 0u64..520), 50),
    ) {
        let wm = WaveletMatrix::build(&values, 500, WaveletOptions::default()).unwrap();
        for (a, b, x, y) in queries {
            let (pl, ph) = ((a % values.len()).min(b % values.len()) + 1,
                            (a % values.len()).max(b % values.len()) + 1);
            let (vl, vh) = (x.min(y), x.max(y));
            let naive = values[pl - 1..ph].iter().filter(|&&v| v >= vl && v <= vh).count() as u64;
            prop_assert_eq!(wm.range_count(pl, ph, vl, vh).unwrap(), naive);
        }
    }

    #[test]
    fn window_sums_match_double_loops(
        rows in 1usize..12,
        cols in 1usize..12,
        seed in any::<u64>(),
    ) {
        let mut state = seed | 1;
        let mut raw = vec![0u64; rows * cols];
        for cell in raw.iter_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *cell = state % 17;
        }
        let plain = AccumulatedMatrix::from_raw_counts(rows, cols, &raw).unwrap();
        let diff = acumm::DifferentialMatrix::from_accumulated(&plain);
        for x1 in 1..=rows {
            for y1 in 1..=cols {
                for x2 in x1..=rows {
                    for y2 in y1..=cols {
                        let mut naive = 0u64;
                        for r in x1..=x2 {
                            for c in y1..=y2 {
                                naive += raw[(r - 1) * cols + (c - 1)];
                            }
                        }
                        prop_assert_eq!(acumm::count_range(&plain, x1, y1, x2, y2).unwrap(), naive);
                        prop_assert_eq!(acumm::count_range(&diff, x1, y1, x2, y2).unwrap(), naive);
                    }
                }
            }
        }
    }

    #[test]
    fn adjacent_windows_are_additive(
        rows in 2usize..10,
        cols in 2usize..10,
        seed in any::<u64>(),
    ) {
        let mut state = seed | 1;
        let mut raw = vec![0u64; rows * cols];
        for cell in raw.iter_mut() {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            *cell = state % 9;
        }
        let m = AccumulatedMatrix::from_raw_counts(rows, cols, &raw).unwrap();
        let split = 1 + (seed as usize) % (cols - 1);
        for r in 1..=rows {
            let left = acumm::count_range(&m, 1, 1, r, split).unwrap();
            let right = acumm::count_range(&m, 1, split + 1, r, cols).unwrap();
            let whole = acumm::count_range(&m, 1, 1, r, cols).unwrap();
            prop_assert_eq!(left + right, whole);
        }
    }
}

/// Random trip corpora over the in-crate demonstration network.
fn random_corpus(seed: u64, count: usize) -> (tripidx_core::offer::NetworkOffer, Vec<tripidx_core::trips::UserTrip>) {
    let offer = fixtures::small_network();
    let trips = generate_trips(&offer, &GeneratorConfig::new(count, seed)).unwrap();
    (offer, trips)
}

#[test]
fn psi_cycles_partition_ranks_by_trip() {
    let (offer, trips) = random_corpus(11, 500);
    let vocab = ttctr::Vocabulary::from_observed(&offer, &trips);
    let (seq, _) = ttctr::encode_trips(&vocab, &trips).unwrap();
    let sa = build_cyclic_sa(&seq);
    let csa = CyclicCsa::build(&seq, &sa, CsaOptions { t_psi: 32 });

    let m = csa.num_ranks();
    let mut seen = vec![false; m + 1];
    seen[1] = true; // sentinel fixed point
    assert_eq!(csa.psi(1), Some(1));
    let mut cycles = Vec::new();
    for start in 2..=m {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut r = start;
        loop {
            assert!(!seen[r], "rank revisited across cycles");
            seen[r] = true;
            len += 1;
            r = csa.psi(r).unwrap();
            if r == start {
                break;
            }
        }
        cycles.push(len);
    }
    cycles.sort_unstable();
    let mut trip_lens: Vec<usize> = seq.trips().iter().map(|&(_, l)| l as usize).collect();
    trip_lens.sort_unstable();
    assert_eq!(cycles, trip_lens);
    assert_eq!(cycles.len(), trips.len());
}

#[test]
fn sampled_psi_equals_dense_psi_everywhere() {
    let (offer, trips) = random_corpus(5, 400);
    let vocab = ttctr::Vocabulary::from_observed(&offer, &trips);
    let (seq, _) = ttctr::encode_trips(&vocab, &trips).unwrap();
    let sa = build_cyclic_sa(&seq);
    let dense = CyclicCsa::build(&seq, &sa, CsaOptions { t_psi: 1 });
    for t in [32, 128, 512] {
        let sampled = CyclicCsa::build(&seq, &sa, CsaOptions { t_psi: t });
        for rank in 1..=dense.num_ranks() {
            assert_eq!(sampled.psi(rank), dense.psi(rank));
        }
    }
}

#[test]
fn symbol_regions_match_suffix_array() {
    let (offer, trips) = random_corpus(17, 300);
    let vocab = ttctr::Vocabulary::from_observed(&offer, &trips);
    let (seq, _) = ttctr::encode_trips(&vocab, &trips).unwrap();
    let sa = build_cyclic_sa(&seq);
    let csa = CyclicCsa::build(&seq, &sa, CsaOptions { t_psi: 64 });
    for rank in 2..=csa.num_ranks() {
        assert_eq!(csa.symbol_at(rank), seq.get(sa.at(rank) as usize));
    }
    assert_eq!(csa.symbol_at(1), Some(0));
}

/// Index and oracle agree on every query family over random corpora and
/// random queries, including the temporal and line restrictions.
#[test]
fn index_matches_oracle_on_random_queries() {
    let (offer, trips) = random_corpus(23, 800);
    let index = ttctr::build(&offer, &trips, TtctrOptions::default()).unwrap();
    let store = TripStore::new(&offer, trips.clone()).unwrap();
    let pairs = acumm::build_matrices(&offer, &trips, MatrixEncoding::Differential).unwrap();

    let mut state = 99u64;
    let mut rng = move |k: u64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state % k
    };
    let (t0, _) = offer.period();
    for _ in 0..2_000 {
        let t = &trips[rng(trips.len() as u64) as usize];
        let day = rng(2) as i64;
        let interval = (t0 + day * 86_400, t0 + (day + 1) * 86_400);
        let q = TripCountQuery {
            start_stop: (rng(2) == 0 || rng(2) == 0).then_some(t.first().board.stop),
            end_stop: Some(t.last().alight_stop),
            start_line: None,
            end_line: (rng(3) == 0).then_some(t.last().board.line),
            interval: (rng(3) == 0).then_some(interval),
        };
        let q = TripCountQuery {
            start_line: (q.start_stop.is_some() && rng(3) == 0).then_some(t.first().board.line),
            ..q
        };
        assert_eq!(
            index.count_trips(&offer, &q).unwrap(),
            store.count_trips(&q, TemporalAnchor::TripStart).unwrap(),
            "query {:?}",
            q
        );
    }

    // boarding counts and matrix families
    for _ in 0..1_000 {
        let t = &trips[rng(trips.len() as u64) as usize];
        let st = &t.stages[rng(t.num_stages() as u64) as usize];
        let (line, stop) = (st.board.line, st.board.stop);
        let day = rng(2) as i64;
        let (d0, d1) = (t0 + day * 86_400, t0 + (day + 1) * 86_400);
        assert_eq!(
            index.count_boardings(&offer, stop, line, d0, d1).unwrap(),
            store.count_boardings(stop, line, d0, d1)
        );

        let pair = &pairs[line.0 as usize - 1];
        let rows = pair.rows() as u32;
        let cols = pair.cols();
        let (a, b) = (rng(rows as u64) as u32, rng(rows as u64) as u32);
        let (j_lo, j_hi) = (a.min(b), a.max(b));
        let (c, d) = (1 + rng(cols as u64) as usize, 1 + rng(cols as u64) as usize);
        let (p_lo, p_hi) = (c.min(d), c.max(d));
        assert_eq!(
            pair.boardings_at_stop(p_lo, j_lo, j_hi).unwrap(),
            store.boardings_at_stop(line, p_lo, j_lo, j_hi)
        );
        assert_eq!(
            pair.journey_boardings(j_lo).unwrap(),
            store.journey_boardings(line, j_lo)
        );
        assert_eq!(
            pair.window_boardings(j_lo, j_hi, p_lo, p_hi).unwrap(),
            store.window_boardings(line, j_lo, j_hi, p_lo, p_hi)
        );
        let x = 1 + rng(cols as u64 - 1) as usize;
        assert_eq!(
            pair.load_between_stops(j_lo, x).unwrap(),
            store.load_between_stops(line, j_lo, x)
        );
    }
}

/// Load is non-negative at every segment and zero after the final stop,
/// which is conservation: on-totals equal off-totals per journey.
#[test]
fn journey_loads_conserve_riders() {
    let (offer, trips) = random_corpus(31, 600);
    let pairs = acumm::build_matrices(&offer, &trips, MatrixEncoding::Plain).unwrap();
    for pair in &pairs {
        for j in 0..pair.rows() as u32 {
            for x in 1..pair.cols() {
                let _ = pair.load_between_stops(j, x).unwrap(); // u64: >= 0
            }
            let row_on = pair.journey_boardings(j).unwrap();
            let row_off = acumm::count_range(&pair.get_off, j as usize + 1, 1, j as usize + 1, pair.cols()).unwrap();
            assert_eq!(row_on, row_off);
        }
    }
}

/// Every trip decodes back out of the index exactly.
#[test]
fn decoding_is_lossless_over_a_generated_corpus() {
    let (offer, trips) = random_corpus(47, 300);
    let index = ttctr::build(&offer, &trips, TtctrOptions::default()).unwrap();
    let term = index.csa().terminator_range();
    assert_eq!(term.1 - term.0 + 1, trips.len());
    let mut decoded: Vec<Vec<_>> = (term.0..=term.1).map(|r| index.decode_trip(r)).collect();
    let mut expected: Vec<Vec<_>> = trips.iter().map(|t| t.to_triples()).collect();
    decoded.sort();
    expected.sort();
    assert_eq!(decoded, expected);
}

#[test]
fn observed_and_topology_vocabularies_answer_alike() {
    let (offer, trips) = random_corpus(53, 400);
    let observed = ttctr::build(&offer, &trips, TtctrOptions::default()).unwrap();
    let topology = ttctr::build(
        &offer,
        &trips,
        TtctrOptions {
            topology_vocab: true,
            ..TtctrOptions::default()
        },
    )
    .unwrap();
    let store = TripStore::new(&offer, trips).unwrap();
    for s in 1..=offer.num_stops() {
        for y in 1..=offer.num_stops() {
            let q = TripCountQuery {
                start_stop: Some(StopId(s)),
                end_stop: Some(StopId(y)),
                ..TripCountQuery::default()
            };
            let expected = store.count_trips(&q, TemporalAnchor::TripStart).unwrap();
            assert_eq!(observed.count_trips(&offer, &q).unwrap(), expected);
            assert_eq!(topology.count_trips(&offer, &q).unwrap(), expected);
        }
    }
    let (t0, t1) = offer.period();
    for l in 1..=offer.num_lines() {
        for s in 1..=offer.num_stops() {
            assert_eq!(
                topology
                    .count_boardings(&offer, StopId(s), LineId(l), t0, t1)
                    .unwrap(),
                store.count_boardings(StopId(s), LineId(l), t0, t1)
            );
        }
    }
}

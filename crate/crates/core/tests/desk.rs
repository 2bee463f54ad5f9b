//! Desk-scale replays through the harness with the lockstep oracle.

mod common;

use bpcc::bench::{component_curve, median_of_trials, replay, BatchKind, Mode, ReplayOptions, StreamFile};
use bpcc::generate::StreamSpec;
use common::bfs_component_count;

fn options(mode: Mode, threads: usize) -> ReplayOptions {
    ReplayOptions {
        mode,
        threads,
        check_oracle: true,
    }
}

#[test]
fn rmat_desk_stream_has_no_oracle_mismatch() {
    let spec = StreamSpec::rmat(1 << 20, 8_000_000, 21, 100_000);
    let file = StreamFile::from_generator(&spec, 10_000, 5).unwrap();
    let simple = replay(&file, options(Mode::Simple, 0)).unwrap();
    let baseline = replay(&file, options(Mode::SeqUfPc, 0)).unwrap();
    assert_eq!(simple.answers, baseline.answers);

    let edges: Vec<(u32, u32)> = file
        .batches
        .iter()
        .filter(|b| b.kind == BatchKind::Update)
        .flat_map(|b| b.pairs.iter().copied())
        .collect();
    let curve = component_curve(&simple);
    assert!(curve.windows(2).all(|w| w[1].components <= w[0].components));
    assert_eq!(curve.last().unwrap().components, bfs_component_count(file.n, &edges));
    assert_eq!(curve.len(), 81);
}

#[test]
fn family_mode_batch_matrix() {
    let families = [
        StreamSpec::grid3d(32, 1, 1),
        StreamSpec::random(1 << 15, 5, 2, 1),
        StreamSpec::local(1 << 15, 16, 64, 3, 1),
        StreamSpec::rmat(1 << 15, 5 << 15, 4, 1),
    ];
    for spec in families {
        for batch_size in [1_000, 100_000] {
            let file = StreamFile::from_generator(
                &StreamSpec {
                    batch_size,
                    ..spec.clone()
                },
                500,
                9,
            )
            .unwrap();
            let mut answers = None;
            for mode in [Mode::Simple, Mode::WorkEfficient] {
                let r =
                    replay(&file, options(mode, 0)).unwrap_or_else(|e| panic!("{spec} batch {batch_size} {mode}: {e}"));
                match &answers {
                    None => answers = Some(r.answers),
                    Some(a) => assert_eq!(&r.answers, a),
                }
            }
        }
    }
}

#[test]
fn answers_do_not_depend_on_thread_count() {
    let file = StreamFile::from_generator(&StreamSpec::local(50_000, 4, 32, 8, 20_000), 5_000, 1).unwrap();
    let base = replay(&file, options(Mode::Simple, 1)).unwrap();
    for threads in [2, 4] {
        for mode in [Mode::Simple, Mode::WorkEfficient] {
            let r = replay(&file, options(mode, threads)).unwrap();
            assert_eq!(r.answers, base.answers);
            assert_eq!(r.threads, threads);
        }
    }
}

#[test]
fn medians_stay_within_the_trial_envelope() {
    let file = StreamFile::from_generator(&StreamSpec::random(1 << 16, 5, 3, 20_000), 2_000, 2).unwrap();
    let runs: Vec<_> = (0..3)
        .map(|_| replay(&file, options(Mode::Simple, 0)).unwrap())
        .collect();
    let m = median_of_trials(&runs).unwrap();
    for (i, row) in m.rows.iter().enumerate() {
        let times: Vec<f64> = runs.iter().map(|r| r.rows[i].wall_seconds).collect();
        let lo = times.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = times.iter().copied().fold(0.0, f64::max);
        assert!(lo <= row.wall_seconds && row.wall_seconds <= hi);
        assert_eq!(row.per_second, row.size as f64 / row.wall_seconds);
    }
    assert_eq!(m.answers, runs[0].answers);
}

#[test]
fn fully_connecting_stream_ends_at_one() {
    let file = StreamFile::from_generator(&StreamSpec::grid3d(10, 0, 333), 0, 0).unwrap();
    let r = replay(&file, options(Mode::WorkEfficient, 0)).unwrap();
    let curve = component_curve(&r);
    assert_eq!(curve[0].components, 1000);
    assert_eq!(curve.last().unwrap().components, 1);
    assert_eq!(curve.last().unwrap().percent, 100.0);
}

use opart::cache::{build_table, load_table, save_table, table_for, Method};
use opart::parallel::{blocks, map_blocks, run_check};
use opart_core::{AlphaParam, CheckKind, PrecisionContext};
use proptest::prelude::*;

proptest! {
    #[test]
    fn blocks_partition_the_range(from in 0u64..1000, len in 0u64..500, parts in 1usize..40) {
        let to = from + len;
        let b = blocks(from, to, parts);
        prop_assert!(b.len() <= parts);
        prop_assert_eq!(b[0].0, from);
        prop_assert_eq!(b.last().unwrap().1, to);
        for w in b.windows(2) {
            prop_assert_eq!(w[0].1 + 1, w[1].0);
        }
        let sizes: Vec<u64> = b.iter().map(|(a, z)| z - a + 1).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn map_blocks_preserves_order(from in 0u64..100, len in 0u64..200, jobs in 1usize..9) {
        let to = from + len;
        let got = map_blocks(from, to, jobs, |a, b| Ok((a..=b).collect())).unwrap();
        prop_assert_eq!(got, (from..=to).collect::<Vec<_>>());
    }
}

#[test]
fn empty_range_has_no_blocks() {
    assert!(blocks(5, 4, 3).is_empty());
}

#[test]
fn parallel_report_matches_serial() {
    let table = build_table(400, Method::Series).unwrap();
    let ctx = PrecisionContext::with_digits(60).unwrap();
    let kind = CheckKind::Convexity {
        alpha: AlphaParam::from_integer(1),
    };
    let serial = run_check(&kind, 19, 399, Some(&table), &ctx, false, 1).unwrap();
    let parallel = run_check(&kind, 19, 399, Some(&table), &ctx, false, 5).unwrap();
    assert!(serial.all_pass);
    assert_eq!(serial.records.len(), parallel.records.len());
    for (a, b) in serial.records.iter().zip(&parallel.records) {
        assert_eq!(a.n, b.n);
        assert_eq!(a.verdict(), b.verdict());
        assert_eq!(a.margin.to_string_sig(40), b.margin.to_string_sig(40));
    }
}

#[test]
fn cache_round_trip_and_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let table = build_table(250, Method::Both).unwrap();
    save_table(&path, &table).unwrap();
    let back = load_table(&path).unwrap();
    assert_eq!(back.values(), table.values());
    assert_eq!(back.checksum(), table.checksum());
    // a covering cache is reused, a short one is rebuilt and replaced
    assert_eq!(table_for(Some(&path), 100).unwrap().n_max(), 250);
    assert_eq!(table_for(Some(&path), 300).unwrap().n_max(), 300);
    assert_eq!(load_table(&path).unwrap().n_max(), 300);
}

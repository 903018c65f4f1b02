use super::*;
use crate::exact::sparse_table;
use crate::numerics::audit;
use alloc::vec;
use num_rational::BigRational;
use proptest::prelude::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * y.abs().max(1e-300)
}

fn alpha(s: &str) -> AlphaParam {
    AlphaParam::parse(s).unwrap()
}

#[test]
fn alpha_parsing() {
    let half = AlphaParam::ratio(1, 2);
    assert_eq!(alpha("0.5"), half);
    assert_eq!(alpha("1/2"), half);
    assert_eq!(alpha(" 5e-1 "), half);
    assert_eq!(alpha("3490"), AlphaParam::from_integer(3490));
    assert_eq!(alpha("1.5e-3"), AlphaParam::ratio(3, 2000));
    assert_eq!(alpha("0"), AlphaParam::zero());
    for bad in ["-1", "abc", "", "1/0", "1.2.3", "-0.5"] {
        assert!(AlphaParam::parse(bad).is_err(), "{bad:?}");
    }
    assert!(AlphaParam::new(BigRational::new((-1).into(), 3.into())).is_err());
}

#[test]
fn starting_index() {
    assert_eq!(n_alpha(&AlphaParam::zero()).unwrap(), 4522);
    let one = threshold(&AlphaParam::from_integer(1)).unwrap();
    assert_eq!((one.reciprocal_term, one.quartic_term, one.value), (Some(3492), 2127, 5505));
    let two = threshold(&AlphaParam::from_integer(2)).unwrap();
    assert_eq!((two.reciprocal_term, two.quartic_term, two.value), (Some(1747), 6311, 6311));
    let half = threshold(&AlphaParam::ratio(1, 2)).unwrap();
    assert_eq!((half.reciprocal_term, half.quartic_term, half.value), (Some(6982), 1078, 6982));
    assert_eq!(n_alpha(&AlphaParam::from_integer(3490)).unwrap(), 3016003943246559);
    assert_eq!(half.n1(), 6982);
    assert_eq!(two.n1(), 4522);
}

#[test]
fn starting_index_oracle() {
    // f64 evaluation of the quartic term away from integer boundaries
    for a in [1u64, 2, 7, 40, 1000] {
        let q = (4.0 * (11.0 + 5.0 * a as f64) / (3.0 * core::f64::consts::PI)).powi(4).ceil() as u64;
        let th = threshold(&AlphaParam::from_integer(a)).unwrap();
        assert_eq!(th.quartic_term, q, "α = {a}");
        assert_eq!(th.value, (3490 / a + 2).max(q).max(5505));
    }
}

#[test]
fn second_differences_of_polynomials() {
    let c = delta2(10, &ctx(), |a, _| Ok(a.ratio(7, 3))).unwrap();
    assert_eq!(c.signum(), Ordering::Equal);
    for n in [1u64, 5, 1000] {
        let q = delta2(n, &ctx(), |a, m| Ok(a.mul(&a.uint(m), &a.uint(m)))).unwrap();
        assert_eq!(q.to_string_sig(10), "2.000000000e+0");
    }
    assert!(delta2(0, &ctx(), |a, _| Ok(a.int(0))).is_err());
}

#[test]
fn second_difference_of_log_table() {
    let table = sparse_table(10);
    let d = delta2(3, &ctx(), |a, m| a.ln_big(table.value(m).unwrap())).unwrap();
    assert!(close(d.to_f64(), (7.0f64 / 8.0).ln(), 1e-15));
    assert_eq!(d.signum(), Ordering::Less);
}

#[test]
fn log_r_values() {
    let table = sparse_table(10);
    let ln2 = core::f64::consts::LN_2;
    assert!(close(log_r(1, &AlphaParam::zero(), &table, &ctx()).unwrap().to_f64(), ln2, 1e-15));
    assert!(close(log_r(1, &alpha("2.75"), &table, &ctx()).unwrap().to_f64(), ln2, 1e-15));
    let v = log_r(3, &AlphaParam::from_integer(1), &table, &ctx()).unwrap().to_f64();
    assert!(close(v, (8.0f64 / 3.0).ln() / 3.0, 1e-15));
    assert!(log_r(0, &AlphaParam::zero(), &table, &ctx()).is_err());
    assert!(log_r(11, &AlphaParam::zero(), &table, &ctx()).is_err());
}

#[test]
fn centred_log_r_difference() {
    let table = sparse_table(10);
    let d = delta2_log_r(3, &AlphaParam::zero(), &table, &ctx()).unwrap();
    let direct = 14f64.ln() / 4.0 + 4f64.ln() / 2.0 - 2.0 * 8f64.ln() / 3.0;
    assert!(close(d.to_f64(), direct, 1e-13));
    assert_eq!(delta2_log_r(5, &AlphaParam::zero(), &table, &ctx()).unwrap().signum(), Ordering::Greater);
    assert!(delta2_log_r(1, &AlphaParam::zero(), &table, &ctx()).is_err());
    assert!(delta2_log_r(10, &AlphaParam::zero(), &table, &ctx()).is_err());
}

#[test]
fn centre_convention_replay() {
    let table = sparse_table(40);
    let al = alpha("0.75");
    for n in [2u64, 7, 20, 39] {
        let d = delta2_log_r(n, &al, &table, &ctx()).unwrap();
        let f = |m| log_r(m, &al, &table, &ctx()).unwrap();
        let replay = audit(&ctx(), "replay", |a| {
            let v = [f(n - 1), f(n), f(n + 1)];
            Ok(second_difference(a, [v[0].value(), v[1].value(), v[2].value()]))
        })
        .unwrap();
        assert!(d.agrees_with(&replay, 100), "n = {n}");
    }
}

#[test]
fn lemma2_small_window() {
    let r = run_check(&CheckKind::Lemma2, 2, 14, None, &ctx(), false).unwrap();
    assert!(r.all_pass, "{:?}", r.first_failure);
    assert_eq!(r.records.len(), 13);
    // the proof-internal claims about L1, L2 start at n = 9
    assert_eq!(r.records[0].claims.len(), 2);
    assert_eq!(r.records[7].claims.len(), 4);
}

#[test]
fn lemma2_diagnostic() {
    let rec = &check_records(&CheckKind::Lemma2, 4, 4, None, &ctx()).unwrap()[0];
    let g1 = rec.diagnostics.iter().find(|(k, _)| *k == "g1''").unwrap();
    assert!(close(g1.1.as_real().unwrap().to_f64(), 3.0 * core::f64::consts::PI / 128.0, 1e-15));
}

#[test]
fn lemma2_lower_intermediate_needs_nine() {
    // L1 > -5 ln μ̄(n-1)/(n-1)³ is claimed from n = 9 and fails just below
    use main_term_bounds::{g3pp_log, log_over_cube};
    let a = Arith::new(60, 10).unwrap();
    let holds = |n: u64| {
        let l1 = a.add(&log_over_cube(&a, -6, n - 1).unwrap(), &g3pp_log(&a, n + 1).unwrap());
        a.cmp(&l1, &log_over_cube(&a, -5, n - 1).unwrap()) == Ordering::Greater
    };
    assert!(!holds(8));
    assert!((9..200).all(holds));
}

#[test]
fn lemma3_window() {
    let table = sparse_table(80);
    let r = run_check(&CheckKind::Lemma3, 38, 79, Some(&table), &ctx(), false).unwrap();
    assert!(r.all_pass, "{:?}", r.first_failure);
    let first = &r.records[0];
    assert!(first.claims.iter().any(|c| c.name == "|e(n)| < 1/5" && c.verdict == Verdict::Pass));
    assert!(run_check(&CheckKind::Lemma3, 37, 40, Some(&table), &ctx(), false).is_err());
}

#[test]
fn lemma3_bound_value() {
    let table = sparse_table(101);
    let rec = &check_records(&CheckKind::Lemma3, 100, 100, Some(&table), &ctx()).unwrap()[0];
    let bound = rec.upper.as_ref().unwrap().as_real().unwrap().to_f64();
    let expected = 5.0 / 99.0 * (-core::f64::consts::PI * 99f64.sqrt() / 12.0).exp();
    assert!(close(bound, expected, 1e-13));
}

#[test]
fn lemma4_examples() {
    let r = run_check(&CheckKind::Lemma4 { alpha: AlphaParam::from_integer(1) }, 7, 200, None, &ctx(), false).unwrap();
    assert!(r.all_pass);
    let r = run_check(&CheckKind::Lemma4 { alpha: AlphaParam::ratio(1, 2) }, 7, 7, None, &ctx(), false).unwrap();
    assert!(r.all_pass);
    assert!(run_check(&CheckKind::Lemma4 { alpha: AlphaParam::zero() }, 7, 8, None, &ctx(), false).is_err());
    assert!(run_check(&CheckKind::Lemma4 { alpha: AlphaParam::from_integer(1) }, 6, 8, None, &ctx(), false).is_err());
}

#[test]
fn convexity_range_starts() {
    let table = sparse_table(40);
    let one = CheckKind::Convexity { alpha: AlphaParam::from_integer(1) };
    let zero = CheckKind::Convexity { alpha: AlphaParam::zero() };
    assert!(run_check(&one, 19, 30, Some(&table), &ctx(), false).unwrap().all_pass);
    assert!(run_check(&zero, 4, 30, Some(&table), &ctx(), false).unwrap().all_pass);
    let below = run_check(&one, 18, 18, Some(&table), &ctx(), true).unwrap();
    assert_eq!(below.first_failure, Some(18));
    assert!(!below.paper_claim);
    let below = run_check(&zero, 3, 3, Some(&table), &ctx(), true).unwrap();
    assert_eq!(below.first_failure, Some(3));
    assert!(matches!(
        run_check(&one, 18, 20, Some(&table), &ctx(), false),
        Err(Error::BelowThreshold { threshold: 19, .. })
    ));
}

#[test]
fn corollary3_start() {
    let table = sparse_table(40);
    let r = run_check(&CheckKind::Corollary3, 2, 30, Some(&table), &ctx(), false).unwrap();
    assert!(r.all_pass);
    assert_eq!(r.records[0].regime, Some("direct"));
    // Δ² log r_0 vanishes exactly at n = 2 (ln 2 + ln 8/3 - ln 4 = 0)
    assert!(r.records[0].middle.as_real().unwrap().to_f64().abs() < 1e-100);
}

#[test]
fn range_errors() {
    let table = sparse_table(40);
    let t1 = CheckKind::Theorem1 { alpha: AlphaParam::zero() };
    assert!(matches!(run_check(&t1, 4522, 4521, Some(&table), &ctx(), false), Err(Error::EmptyRange { .. })));
    assert!(matches!(run_check(&t1, 20, 30, Some(&table), &ctx(), false), Err(Error::BelowThreshold { .. })));
    assert!(matches!(run_check(&t1, 20, 40, Some(&table), &ctx(), true), Err(Error::TableTooShort { .. })));
    let r = run_check(&t1, 20, 30, Some(&table), &ctx(), true).unwrap();
    assert!(!r.paper_claim);
    assert!(r.notes.iter().any(|n| n.contains("no paper claim")));
    assert!(run_check(&CheckKind::Corollary3, 2, 3, None, &ctx(), false).is_err());
}

#[test]
fn logconcavity_exact() {
    let table = sparse_table(60);
    let r = engel_logconcavity_check(2, 59, &table).unwrap();
    assert!(r.all_pass);
    match &r.records[1].margin {
        Quantity::Exact(v) => assert_eq!(*v, BigInt::from(64 - 56)),
        Quantity::Real(_) => panic!("expected an exact margin"),
    }
    // equality at n = 1 and n = 2: the non-strict inequality holds, the strict one does not
    let low = run_check(&CheckKind::LogConcavity, 1, 3, Some(&table), &ctx(), true).unwrap();
    assert!(low.all_pass);
    let strict: Vec<bool> = low
        .records
        .iter()
        .map(|r| matches!(&r.diagnostics[0].1, Quantity::Exact(v) if *v == BigInt::from(1)))
        .collect();
    assert_eq!(strict, [false, false, true]);
    assert!(engel_logconcavity_check(1, 3, &table).is_err());
}

#[test]
fn report_merge_orders_records() {
    let table = sparse_table(40);
    let kind = CheckKind::Corollary3;
    let a = run_check(&kind, 20, 30, Some(&table), &ctx(), false).unwrap();
    let b = run_check(&kind, 2, 19, Some(&table), &ctx(), false).unwrap();
    let merged = RangeReport::merge(vec![a, b]).unwrap();
    assert_eq!((merged.n_from, merged.n_to), (2, 30));
    let ns: Vec<u64> = merged.records.iter().map(|r| r.n).collect();
    assert_eq!(ns, (2..=30).collect::<Vec<_>>());
    assert!(merged.all_pass);
}

#[test]
fn verdict_combination() {
    use Verdict::*;
    assert_eq!(Pass.and(Pass), Pass);
    assert_eq!(Pass.and(Indeterminate), Indeterminate);
    assert_eq!(Indeterminate.and(Fail), Fail);
}

#[test]
fn asymptotic_rows_small() {
    let table = sparse_table(60);
    let rows = asymptotic_table(&AlphaParam::zero(), &[10, 50], &table, &ctx()).unwrap();
    let d = delta2_log_r(50, &AlphaParam::zero(), &table, &ctx()).unwrap().to_f64();
    assert!(close(rows[1].scaled.to_f64(), d * 50f64.powf(2.5), 1e-13));
    let dist = rows[1].scaled.to_f64() - 3.0 * core::f64::consts::PI / 4.0;
    assert!(close(rows[1].distance.to_f64(), dist, 1e-12));
    assert!(asymptotic_table(&AlphaParam::zero(), &[1], &table, &ctx()).is_err());
    assert!(asymptotic_table(&AlphaParam::zero(), &[60], &table, &ctx()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lemma4_middle_is_linear_in_alpha(num in 1u64..50, den in 1u64..20, n in 7u64..400) {
        let a1 = CheckKind::Lemma4 { alpha: AlphaParam::ratio(num, den) };
        let a2 = CheckKind::Lemma4 { alpha: AlphaParam::ratio(2 * num, den) };
        let r1 = &check_records(&a1, n, n, None, &ctx()).unwrap()[0];
        let r2 = &check_records(&a2, n, n, None, &ctx()).unwrap()[0];
        prop_assert_eq!(r1.verdict(), r2.verdict());
        let m1 = r1.middle.as_real().unwrap();
        let m2 = r2.middle.as_real().unwrap();
        let doubled = audit(&ctx(), "2x", |a| Ok(a.mul(&a.int(2), m1.value()))).unwrap();
        prop_assert!(doubled.agrees_with(m2, 100));
    }

    #[test]
    fn lemma2_lower_below_upper(n in 2u64..3000) {
        let r = &check_records(&CheckKind::Lemma2, n, n, None, &ctx()).unwrap()[0];
        prop_assert_eq!(r.claims[0].verdict, Verdict::Pass);
        prop_assert_eq!(r.verdict(), Verdict::Pass);
    }

    #[test]
    fn alpha_decimal_round_trip(num in 0u64..100_000, scale in 0u32..6) {
        let den = 10u64.pow(scale);
        let text = if scale == 0 {
            alloc::format!("{num}")
        } else {
            alloc::format!("{}.{:0width$}", num / den, num % den, width = scale as usize)
        };
        prop_assert_eq!(AlphaParam::parse(&text).unwrap(), AlphaParam::ratio(num, den));
    }
}

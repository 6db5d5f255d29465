use proptest::prelude::*;

use super::*;

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn z(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn vertices(curve: &TradeoffCurve) -> Vec<(Rational, Rational)> {
    curve.envelope.iter().map(|p| (p.m, p.r)).collect()
}

#[test]
fn memory_examples() {
    assert_eq!(memory_sp(4, 2, 6, 1).unwrap(), z(6));
    assert_eq!(memory_sp(5, 1, 7, 1).unwrap(), q(11, 4));
    for (c, r) in [(4, 2), (5, 3), (6, 1), (6, 6)] {
        assert_eq!(memory_sp(c, r, 9, 0).unwrap(), z(crate::combinatorics::choose(c - 1, r as isize - 1) as i128));
    }
    assert!(memory_sp(4, 2, 6, 3).is_err());
    assert!(memory_sp(4, 5, 6, 0).is_err());
}

#[test]
fn rate_examples() {
    assert_eq!(rate_sp(4, 2, 1).unwrap(), z(2));
    assert_eq!(rate_sp(5, 2, 0).unwrap(), z(10));
    for c in 2..=8 {
        assert_eq!(rate_sp(c, c - 1, 1).unwrap(), z(1));
    }
    assert!(rate_sp(4, 2, 3).is_err());
}

#[test]
fn min_feasible_examples() {
    assert_eq!(min_feasible_memory(4, 2).unwrap(), q(5, 2));
    assert_eq!(min_feasible_memory(2, 1).unwrap(), z(1));
    assert!(matches!(min_feasible_memory(3, 3), Err(Error::NotApplicable(_))));
}

#[test]
fn lower_bound_examples() {
    assert_eq!(lower_bound(4, 3, 8, z(3)).unwrap(), z(4));
    assert_eq!(lower_bound(4, 3, 8, z(11)).unwrap(), z(1));
    assert_eq!(lower_bound(3, 3, 5, z(0)).unwrap(), z(1));
    assert_eq!(lower_bound(5, 1, 1, z(10)).unwrap(), z(1));
    // N = 3: only l = 1 is admissible and gives exactly 1.
    assert_eq!(lower_bound(5, 2, 3, z(4)).unwrap(), z(1));
    assert!(matches!(lower_bound(4, 2, 6, z(2)), Err(Error::Infeasible(_))));
}

#[test]
fn rpkp_reduction_at_r1() {
    let cv = curve_secrecy_only(5, 1, 7).unwrap();
    let expected = vec![(z(1), z(5)), (q(11, 4), q(5, 2)), (q(17, 3), q(5, 3)), (q(23, 2), q(5, 4)), (z(28), z(1))];
    assert_eq!(vertices(&cv), expected);
    assert_eq!(vertices(&curve_rpkp(5, 7).unwrap()), expected);
    for k in 2..=8 {
        for n in 1..=12 {
            assert_eq!(vertices(&curve_secrecy_only(k, 1, n).unwrap()), vertices(&curve_rpkp(k, n).unwrap()));
        }
    }
}

#[test]
fn secrecy_privacy_curve_example() {
    let cv = curve_secrecy_privacy(5, 1, 7).unwrap();
    let expected = vec![(z(1), z(5)), (q(11, 4), q(5, 2)), (q(17, 3), q(5, 3)), (q(23, 2), q(5, 4)), (z(29), z(1))];
    assert_eq!(vertices(&cv), expected);
    let cv = curve_secrecy_privacy(5, 2, 15).unwrap();
    assert_eq!(cv.envelope[2].m, z(24));
    assert_eq!(cv.envelope[3].m, z(94));
    assert_eq!(memory_corner(5, 2, 15).unwrap(), z(90));
}

#[test]
fn full_access_corner_has_no_memory() {
    let cv = curve_secrecy_only(3, 3, 4).unwrap();
    assert_eq!(vertices(&cv), vec![(z(0), z(1))]);
    let cv = curve_secrecy_privacy(3, 3, 4).unwrap();
    assert_eq!(vertices(&cv), vec![(z(1), z(1))]);
}

#[test]
fn memory_share_examples() {
    let cv = curve_secrecy_only(5, 1, 7).unwrap();
    assert_eq!(memory_share(&cv, q(11, 4)).unwrap(), q(5, 2));
    assert_eq!(memory_share(&cv, (z(1) + q(11, 4)) / 2).unwrap(), (z(5) + q(5, 2)) / 2);
    assert_eq!(memory_share(&cv, z(1000)).unwrap(), z(1));
    assert!(matches!(memory_share(&cv, q(1, 2)), Err(Error::Infeasible(_))));
}

#[test]
fn envelope_drops_dominated_and_concave_points() {
    let p = |m, r| RateMemoryPoint { m: z(m), r: z(r), t: PointLabel::Interpolated, variant: Variant::SecrecyOnly };
    let env = lower_envelope(&[p(0, 10), p(1, 9), p(2, 4), p(3, 5), p(4, 2), p(6, 1), p(6, 3)]);
    let got: Vec<_> = env.iter().map(|x| (x.m, x.r)).collect();
    assert_eq!(got, vec![(z(0), z(10)), (z(2), z(4)), (z(4), z(2)), (z(6), z(1))]);
}

#[test]
fn decimal_rendering() {
    assert_eq!(decimal(q(11, 4)), "2.75");
    assert_eq!(decimal(q(1, 3)), "0.333333333333");
    assert_eq!(decimal(z(6)), "6");
    assert_eq!(decimal(q(94, 3)), "31.3333333333");
}

#[test]
fn gap_certificate_optimal_instance() {
    for m in [z(3), z(11), z(20)] {
        let cert = gap_certificate(4, 3, 8, m).unwrap();
        assert_eq!(cert.ratio, z(1), "M={m}");
        assert_eq!(cert.regime, Regime::Optimal);
        assert!(cert.within_claim);
    }
    let interior = gap_certificate(4, 3, 8, z(5)).unwrap();
    assert_eq!(interior.regime, Regime::Uncertified);
    assert!(interior.ratio > z(1));
}

#[test]
fn gap_certificate_order_five_instance() {
    let mut m = z(13);
    while m <= z(70) {
        let cert = gap_certificate(4, 2, 20, m).unwrap();
        assert_eq!(cert.regime, Regime::Order5);
        assert!(cert.ratio <= z(5), "M={m} ratio={}", cert.ratio);
        m += q(1, 4);
    }
    assert_eq!(gap_certificate(4, 2, 20, z(12)).unwrap().regime, Regime::Uncertified);
}

#[test]
fn bounds_row_regimes() {
    assert_eq!(bounds_row(4, 2, 6, z(2)).unwrap().regime, "infeasible");
    let row = bounds_row(4, 2, 6, q(5, 2)).unwrap();
    assert_eq!(row.regime, "unachieved");
    assert!(row.lower_bound.is_some() && row.achievable.is_none());
    assert_eq!(bounds_row(4, 3, 8, z(3)).unwrap().regime, "optimal");
}

#[test]
fn same_cache_examples() {
    let rows = compare_same_cache(5, 10, &[1, 2, 3]).unwrap();
    let first = |r: usize| rows.iter().find(|x| x.r == r).unwrap();
    assert_eq!((first(1).m_axis, first(1).rpu), (z(1), z(1)));
    assert_eq!((first(2).m_axis, first(2).rpu), (z(4), z(1)));
    assert_eq!((first(3).m_axis, first(3).rpu), (z(6), z(1)));
    assert!(rows.iter().all(|x| x.baseline == (x.r == 1)));

    let r2 = vertices(&curve_secrecy_only(5, 2, 10).unwrap());
    assert_eq!(r2, vec![(z(4), z(10)), (q(22, 3), q(10, 3)), (q(52, 3), q(5, 3)), (z(60), z(1))]);
    let r3 = vertices(&curve_secrecy_only(5, 3, 10).unwrap());
    assert_eq!(r3, vec![(z(6), z(10)), (z(11), q(5, 2)), (z(40), z(1))]);

    let at = |r: usize, m: Rational| rows.iter().find(|x| x.r == r && x.m_axis == m).map(|x| x.rpu);
    let mut aligned = 0;
    for row in rows.iter().filter(|x| x.r == 3 && x.m_axis >= q(63, 2)) {
        if let Some(r2) = at(2, row.m_axis) {
            assert!(row.rpu < r2);
            aligned += 1;
        }
    }
    assert!(aligned > 0);
    assert!(rows.iter().all(|x| x.rpu * z(crate::combinatorics::choose(5, x.r as isize) as i128) >= z(1)));
}

#[test]
fn same_access_dedicated_dominates() {
    for n in [10, 50] {
        let rows = compare_same_access(5, n, &[1, 2, 3]).unwrap();
        let dedicated: Vec<_> = rows.iter().filter(|x| x.r == 1).collect();
        for row in rows.iter().filter(|x| x.r > 1) {
            if let Some(d) = dedicated.iter().find(|d| d.m_axis == row.m_axis) {
                assert!(d.rpu <= row.rpu, "N={n} r={} access={}", row.r, row.m_axis);
            }
        }
        let cache_rows = compare_same_cache(5, n, &[1, 2, 3]).unwrap();
        for d in &dedicated {
            if let Some(same) = cache_rows.iter().find(|x| x.r == 1 && x.m_axis == d.m_axis) {
                assert_eq!(same.rpu, d.rpu);
            }
        }
    }
    let rows = compare_same_access(5, 50, &[2]).unwrap();
    let cv = curve_secrecy_only(5, 2, 50).unwrap();
    assert_eq!(rows[0].m_axis, cv.envelope[0].m * 2);
}

#[test]
fn dominance_over_lower_bound() {
    for c in 1..=6 {
        for r in 1..=c {
            for n in 1..=12 {
                for cv in [curve_secrecy_privacy(c, r, n).unwrap(), curve_secrecy_only(c, r, n).unwrap()] {
                    for m in sample_envelope(&cv, 17).iter().map(|p| p.m).chain(cv.points.iter().map(|p| p.m)) {
                        let ach = memory_share(&cv, m).unwrap();
                        let lb = lower_bound(c, r, n, m).unwrap();
                        assert!(ach >= lb, "C={c} r={r} N={n} M={m} {}: {ach} < {lb}", cv.variant);
                    }
                }
            }
        }
    }
}

#[test]
fn monotone_in_t() {
    for c in 1..=8 {
        for r in 1..=c {
            for t in 1..=c - r {
                assert!(rate_sp(c, r, t).unwrap() < rate_sp(c, r, t - 1).unwrap());
                assert!(memory_sp(c, r, 5, t).unwrap() > memory_sp(c, r, 5, t - 1).unwrap());
            }
        }
    }
}

#[test]
fn r1_closed_forms() {
    for c in 1..=8 {
        for n in 1..=10 {
            for t in 0..=c - 1 {
                assert_eq!(rate_sp(c, 1, t).unwrap(), q(c as i128, t as i128 + 1));
                if t < c {
                    let m = memory_sp(c, 1, n, t).unwrap();
                    assert_eq!(m, q((n * t) as i128, (c - t) as i128) + 1);
                    if t + 2 <= c {
                        assert_eq!(rpkp_rate(c, n, m), rate_sp(c, 1, t).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn r1_gap_localisation() {
    for c in 2..=8 {
        for n in 1..=15 {
            if c == 2 && n == 1 {
                // The corner coincides with the t = 0 point; see r1_gap_degenerate.
                continue;
            }
            let sp = curve_secrecy_privacy(c, 1, n).unwrap();
            let so = curve_secrecy_only(c, 1, n).unwrap();
            let lo = q((n * (c - 2)) as i128, 2) + 1;
            let hi = z((n * (c - 1) + 1) as i128);
            let mut grid: Vec<Rational> = sp.points.iter().chain(&so.points).map(|p| p.m).collect();
            grid.extend((0..=64).map(|i| z(1) + (hi + 3 - z(1)) * q(i, 64)));
            let mut strict = false;
            for m in grid {
                let (a, b) = (memory_share(&sp, m).unwrap(), memory_share(&so, m).unwrap());
                if m <= lo || m >= hi {
                    assert_eq!(a, b, "C={c} N={n} M={m}");
                } else {
                    assert!(a >= b);
                    strict |= a > b;
                }
            }
            assert!(strict, "C={c} N={n}");
        }
    }
}

#[test]
fn r1_gap_degenerate() {
    let so = curve_secrecy_only(2, 1, 1).unwrap();
    assert_eq!(vertices(&so), vec![(z(1), z(1))]);
}

proptest! {
    #[test]
    fn lower_bound_non_increasing(c in 2usize..=8, r_off in 0usize..8, n in 1usize..=30, a in 0i128..400, b in 0i128..400) {
        let r = 1 + r_off % (c - 1);
        let floor = min_feasible_memory(c, r).unwrap();
        let (m1, m2) = (floor + q(a.min(b), 4), floor + q(a.max(b), 4));
        let (l1, l2) = (lower_bound(c, r, n, m1).unwrap(), lower_bound(c, r, n, m2).unwrap());
        prop_assert!(l1 >= l2);
        prop_assert!(l2 >= z(1));
    }

    #[test]
    fn envelope_is_convex_and_monotone(c in 1usize..=10, r_off in 0usize..10, n in 1usize..=40, private in any::<bool>()) {
        let r = 1 + r_off % c;
        let cv = if private { curve_secrecy_privacy(c, r, n).unwrap() } else { curve_secrecy_only(c, r, n).unwrap() };
        for w in cv.envelope.windows(2) {
            prop_assert!(w[0].m < w[1].m && w[0].r > w[1].r);
        }
        for w in cv.envelope.windows(3) {
            let s1 = (w[1].r - w[0].r) / (w[1].m - w[0].m);
            let s2 = (w[2].r - w[1].r) / (w[2].m - w[1].m);
            prop_assert!(s1 < s2);
        }
        for p in &cv.points {
            prop_assert!(memory_share(&cv, p.m).unwrap() <= p.r);
            prop_assert!(p.r >= z(1));
        }
    }
}

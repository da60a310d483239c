use doubling_holes::holes::{
    catalog, gap_interval, gap_tuples, power_of_half, sample_k, sturmian_hole, test_supercritical, Endpoint, Family,
};
use doubling_holes::words::cyclic_extremes;
use doubling_holes::{binary_expansion, CfTuple, ExpansionForm, Extension, Kind, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn dy(k: u64, m: u64) -> Rational {
    Rational::dyadic(k, m).unwrap()
}

fn cf(s: &str) -> CfTuple {
    s.parse().unwrap()
}

#[test]
fn gap_intervals_have_the_expected_shape() {
    for t in gap_tuples(50) {
        let g = gap_interval(&t).unwrap();
        let q = g.p_over_q.den as usize;
        assert!(g.alpha < g.beta, "{t}");
        assert_eq!(g.gamma, g.beta.checked_add(&Rational::quarter()).unwrap());
        let a = binary_expansion(&g.alpha, ExpansionForm::Lower).unwrap();
        let c = binary_expansion(&g.gamma, ExpansionForm::Lower).unwrap();
        assert!(a.is_purely_periodic() && c.is_purely_periodic(), "{t}: {a} {c}");
        assert_eq!(q % a.period().len(), 0);
        assert_eq!(q % c.period().len(), 0);
        let (ra, _) = cyclic_extremes(a.period()).unwrap();
        let (rc, _) = cyclic_extremes(c.period()).unwrap();
        assert_eq!(ra, rc, "{t}: α and γ lie on different cycles");
    }
}

#[test]
fn catalog_widths_and_mirrors() {
    let stur = [cf("(1,1,1,1,1,1,1,1)"), cf("(2,1,3)"), cf("(5)")];
    let cat = catalog(20, &stur, 9).unwrap();
    let quarter = Rational::quarter();
    for e in &cat {
        match (&e.left, &e.right) {
            (Endpoint::Exact(l), Endpoint::Exact(r)) if e.family.is_degenerate() => {
                assert!(l == &Rational::half() || r == &Rational::half(), "{e:?}");
            }
            (Endpoint::Exact(l), Endpoint::Exact(r)) => {
                assert_eq!(r.checked_sub(l).unwrap(), quarter, "{e:?}");
            }
            (Endpoint::Bracket { lo: ll, hi: lh }, Endpoint::Bracket { lo: rl, hi: rh }) => {
                assert_eq!(rl.checked_sub(ll).unwrap(), quarter);
                assert_eq!(rh.checked_sub(lh).unwrap(), quarter);
            }
            _ => panic!("mixed endpoints in {e:?}"),
        }
        let m = e.mirror();
        assert!(cat.iter().any(|o| o.left == m.left && o.right == m.right), "no mirror for {e:?}");
    }
    for (i, a) in cat.iter().enumerate() {
        for b in &cat[i + 1..] {
            assert!(a.left != b.left || a.right != b.right, "duplicate {a:?}");
        }
    }
}

#[test]
fn catalog_gap_entries_are_certified() {
    let cat = catalog(20, &[], 9).unwrap();
    for k in [8, 10] {
        let eps = power_of_half(k);
        for e in cat.iter().filter(|e| e.left.exact().is_some()) {
            let rep = test_supercritical(&e.left, &e.right, &eps).unwrap();
            assert!(rep.pass, "{} ({}, {}) at 2^-{k}: {} / {}", e.family, e.left, e.right, rep.outer.kind, rep.inner.kind);
        }
    }
}

#[test]
fn sturmian_entries_are_certified_through_their_brackets() {
    let cat = catalog(3, &[cf("(1,1,1,1,1,1,1,1)"), cf("(2,1,3)")], 0).unwrap();
    let eps = power_of_half(10);
    for e in cat.iter().filter(|e| matches!(e.family, Family::Sturmian | Family::MirrorSturmian)) {
        let rep = test_supercritical(&e.left, &e.right, &eps).unwrap();
        assert!(rep.pass, "{e:?}");
        assert!(rep.outer_hole.a() >= e.left.hi().checked_sub(&eps).as_ref().unwrap());
    }
}

#[test]
fn left_endpoints_inside_a_gap_are_not_supercritical() {
    let eps = power_of_half(10);
    let mut rng = StdRng::seed_from_u64(42);
    let tuples: Vec<CfTuple> = gap_tuples(12)
        .into_iter()
        .filter(|t| {
            let g = gap_interval(t).unwrap();
            g.beta.checked_sub(&g.alpha).unwrap().to_f64() > 8.0 * eps.to_f64()
        })
        .collect();
    assert!(tuples.len() >= 3);
    for i in 0..20 {
        let g = gap_interval(&tuples[i % tuples.len()]).unwrap();
        let lo = g.alpha.checked_add(&eps).unwrap().checked_add(&eps).unwrap();
        let hi = g.beta.checked_sub(&eps).unwrap().checked_sub(&eps).unwrap();
        let x = loop {
            let k = rng.random_range(0..1u64 << 24);
            let x = dy(k, 24);
            if x > lo && x < hi {
                break x;
            }
        };
        let right = x.checked_add(&Rational::quarter()).unwrap();
        let rep = test_supercritical(&Endpoint::Exact(x.clone()), &Endpoint::Exact(right), &eps).unwrap();
        assert!(!rep.pass, "{x} inside [{}, {}]", g.alpha, g.beta);
    }
}

#[test]
fn gap_endpoints_of_convergents_close_in_from_both_sides() {
    for digits in [[2u32, 2, 2, 2, 2, 2, 2, 2], [3, 2, 4, 2, 2, 5, 2, 3], [2, 3, 2, 3, 2, 3, 2, 3], [1, 2, 2, 3, 2, 2, 2, 2]] {
        let full = CfTuple::new(digits.to_vec()).unwrap();
        // Resolve the limit well past the point where the longest prefix
        // used below stops agreeing with it.
        let bits = 4 * full.fraction().den as usize;
        let limit = sturmian_hole(&full, bits, Extension::OnesTail).unwrap().left;
        let mut odd: Vec<Rational> = Vec::new();
        let mut even: Vec<Rational> = Vec::new();
        for n in 1..digits.len() {
            let t = CfTuple::new(digits[..n].to_vec()).unwrap();
            if !t.last_ge2() {
                continue;
            }
            let a = gap_interval(&t).unwrap().alpha;
            if n % 2 == 1 {
                assert!(a > limit.1, "{t}");
                odd.push(a);
            } else {
                assert!(a < limit.0, "{t}");
                even.push(a);
            }
        }
        assert!(odd.len() >= 3 && even.len() >= 3, "{full}");
        assert!(odd.windows(2).all(|w| w[1] < w[0]), "{full}");
        assert!(even.windows(2).all(|w| w[1] > w[0]), "{full}");
    }
}

#[test]
fn sturmian_left_endpoints_lie_between_a_quarter_and_a_third() {
    let samples = [cf("(1,1,1,1,1,1)"), cf("(9,2)"), cf("(2,1,3)"), cf("(1,4,1)"), cf("(30)"), cf("(1,1,7)")];
    let third = r("1/3");
    for (lo, hi) in sample_k(&samples, 40).unwrap() {
        assert!(lo > Rational::quarter() && hi < third, "[{lo}, {hi}]");
        assert!(hi.checked_sub(&lo).unwrap() <= power_of_half(40));
    }
}

#[test]
fn fibonacci_hole_brackets() {
    let s = sturmian_hole(&cf("(1,1,1,1,1)"), 30, Extension::OnesTail).unwrap();
    assert!((s.left.0.to_f64() - 0.322549).abs() < 1e-6);
    assert!((s.right.0.to_f64() - 0.572549).abs() < 1e-6);
    let width = s.left.1.checked_sub(&s.left.0).unwrap();
    let gap_lo = s.right.0.checked_sub(&s.left.1).unwrap();
    let gap_hi = s.right.1.checked_sub(&s.left.0).unwrap();
    let quarter = Rational::quarter();
    assert!(quarter.checked_sub(&gap_lo).unwrap() <= width && gap_hi.checked_sub(&quarter).unwrap() <= width);
}

#[test]
fn shrinking_the_third_hole_keeps_only_countably_many_cycles() {
    let eps = power_of_half(10);
    let rep = test_supercritical(&Endpoint::Exact(r("1/3")), &Endpoint::Exact(r("2/3")), &eps).unwrap();
    assert_eq!(rep.outer.kind, Kind::FixedOnly);
    assert_eq!(rep.inner.kind, Kind::CountableCycles);
    assert!(!rep.pass);
}

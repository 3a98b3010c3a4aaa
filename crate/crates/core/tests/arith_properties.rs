use framesmith::arith::{rat, Affine, IntervalSet, PiRational, Piece, PiecewiseLinear};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pr(n: i64, d: i64) -> PiRational {
    PiRational::new(n, d)
}

/// Up to four intervals with endpoints on a 1/8 lattice in [-4, 4].
fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((-32i64..32, 1i64..12), 0..4)
        .prop_map(|v| IntervalSet::from_pieces(v.into_iter().map(|(l, w)| (pr(l, 8), pr(l + w, 8)))))
}

fn probes() -> Vec<PiRational> {
    // off-lattice points, so membership does not hinge on endpoints
    (-70..70).map(|n| pr(2 * n + 1, 34)).collect()
}

proptest! {
    #[test]
    fn boolean_algebra_matches_pointwise_membership(a in interval_set(), b in interval_set()) {
        let (u, i, d) = (a.union(&b), a.intersect(&b), a.difference(&b));
        for x in probes() {
            let (ia, ib) = (a.contains(&x), b.contains(&x));
            prop_assert_eq!(u.contains(&x), ia || ib);
            prop_assert_eq!(i.contains(&x), ia && ib);
            prop_assert_eq!(d.contains(&x), ia && !ib);
        }
        prop_assert_eq!(u.measure(), a.measure() + b.measure() - i.measure());
        prop_assert_eq!(d.union(&i), a.clone());
    }

    #[test]
    fn translation_and_dilation_preserve_structure(a in interval_set(), k in -3i64..3, m in 2i64..4) {
        prop_assert_eq!(a.translate(k).translate(-k), a.clone());
        prop_assert_eq!(a.dilate(m).measure(), a.measure() * rat(m, 1));
        for x in probes() {
            prop_assert_eq!(a.dilate(m).contains(&x.scale(&rat(m, 1))), a.contains(&x));
        }
    }
}

fn random_pwl(rng: &mut ChaCha8Rng) -> PiecewiseLinear {
    let mut x = rng.random_range(-16..0i64);
    let mut pieces = Vec::new();
    for _ in 0..rng.random_range(1..5) {
        let w = rng.random_range(1..6i64);
        if rng.random_bool(0.7) {
            let slope = rat(rng.random_range(-9..10), rng.random_range(1..5));
            let intercept = rat(rng.random_range(-9..10), rng.random_range(1..5));
            pieces.push(Piece::new(pr(x, 4), pr(x + w, 4), Affine::new(slope, intercept)));
        }
        x += w;
    }
    PiecewiseLinear::new(pieces).unwrap()
}

#[test]
fn pwl_sum_agrees_pointwise_at_random_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (f, g) = (random_pwl(&mut rng), random_pwl(&mut rng));
        let (sum, diff) = (f.add(&g), f.sub(&g));
        for _ in 0..50 {
            let x = pr(rng.random_range(-80..80), rng.random_range(1..23));
            assert_eq!(sum.eval(&x), f.eval(&x) + g.eval(&x), "at {x}");
            assert_eq!(diff.eval(&x), f.eval(&x) - g.eval(&x), "at {x}");
        }
    }
}

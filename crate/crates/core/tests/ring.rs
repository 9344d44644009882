use num_bigint::BigInt;
use proptest::prelude::*;
use xzsat::RingReal;

/// `(a + b√2) / 2^k` as a big-integer triple, compared by cross-multiplying.
#[derive(Debug, Clone)]
struct Big {
    a: BigInt,
    b: BigInt,
    k: u32,
}

impl Big {
    fn of(r: RingReal) -> Self {
        Big {
            a: r.a().into(),
            b: r.b().into(),
            k: r.k(),
        }
    }

    fn add(&self, o: &Big) -> Big {
        let k = self.k.max(o.k);
        let s = BigInt::from(1) << (k - self.k);
        let t = BigInt::from(1) << (k - o.k);
        Big {
            a: &self.a * &s + &o.a * &t,
            b: &self.b * &s + &o.b * &t,
            k,
        }
    }

    fn mul(&self, o: &Big) -> Big {
        Big {
            a: &self.a * &o.a + BigInt::from(2) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            k: self.k + o.k,
        }
    }

    fn same(&self, o: &Big) -> bool {
        let k = self.k.max(o.k);
        let s = BigInt::from(1) << (k - self.k);
        let t = BigInt::from(1) << (k - o.k);
        &self.a * &s == &o.a * &t && &self.b * &s == &o.b * &t
    }
}

fn ring() -> impl Strategy<Value = RingReal> {
    (-1000i128..1000, -1000i128..1000, 0u32..12).prop_map(|(a, b, k)| RingReal::new(a, b, k))
}

proptest! {
    #[test]
    fn arithmetic_matches_big_integers(x in ring(), y in ring()) {
        prop_assert!(Big::of(x + y).same(&Big::of(x).add(&Big::of(y))));
        prop_assert!(Big::of(x * y).same(&Big::of(x).mul(&Big::of(y))));
        let neg_y = Big::of(-y);
        prop_assert!(Big::of(x - y).same(&Big::of(x).add(&neg_y)));
    }

    #[test]
    fn results_stay_canonical(x in ring(), y in ring()) {
        prop_assert!((x + y).is_canonical());
        prop_assert!((x * y).is_canonical());
        prop_assert!((x - x).is_zero());
    }

    #[test]
    fn equality_is_value_equality(a in -500i128..500, b in -500i128..500, k in 0u32..8, s in 0u32..6) {
        let scaled = RingReal::new(a << s, b << s, k + s);
        prop_assert_eq!(scaled, RingReal::new(a, b, k));
    }

    #[test]
    fn to_f64_tracks_value(x in ring()) {
        let expected = (x.a() as f64 + x.b() as f64 * std::f64::consts::SQRT_2) / f64::powi(2.0, x.k() as i32);
        prop_assert!((x.to_f64() - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
    }

    #[test]
    fn parse_round_trips(x in ring()) {
        let back: RingReal = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn inverse_root_two_squares_to_half() {
    let r = RingReal::FRAC_1_SQRT_2;
    assert_eq!(r * r, RingReal::HALF);
    assert_eq!(RingReal::SQRT_2.div_sqrt2(), RingReal::ONE);
}

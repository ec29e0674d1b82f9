//! Property tests for the exact series ring and the theta layer.

use num::BigRational;
use proptest::prelude::*;

use qchain::series::{
    pochhammer_finite, Coeff, Exponent, Monomial, Sign, TruncSeries,
};
use qchain::theta::{expand_j, normalize_j, JSymbol};

fn coeff(v: i64) -> Coeff {
    BigRational::from_integer(v.into())
}

/// Random small series: scale 1, exponents from `min_exp`, order 12.
fn series_strategy() -> impl Strategy<Value = TruncSeries> {
    (
        -3i64..=3,
        prop::collection::vec(-4i64..=4, 0..=8),
    )
        .prop_map(|(min_exp, coeffs)| {
            TruncSeries::from_parts(
                1,
                min_exp,
                12,
                coeffs.into_iter().map(coeff).collect(),
            )
        })
}

fn monomial_strategy() -> impl Strategy<Value = Monomial> {
    (any::<bool>(), 0i64..=4).prop_map(|(neg, e)| {
        Monomial::new(
            if neg { Sign::Minus } else { Sign::Plus },
            Exponent::from_integer(e),
        )
    })
}

fn common_order(series: &[&TruncSeries]) -> i64 {
    series.iter().map(|s| s.order_q()).min().unwrap()
}

proptest! {
    #[test]
    fn addition_commutes_and_associates(
        a in series_strategy(),
        b in series_strategy(),
        c in series_strategy(),
    ) {
        let t = common_order(&[&a, &b, &c]);
        prop_assert!(a.add(&b).agrees_to(&b.add(&a), t));
        prop_assert!(a.add(&b).add(&c).agrees_to(&a.add(&b.add(&c)), t));
    }

    #[test]
    fn multiplication_commutes_and_associates(
        a in series_strategy(),
        b in series_strategy(),
        c in series_strategy(),
    ) {
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        let t = ab.order_q().min(ba.order_q());
        prop_assert!(ab.agrees_to(&ba, t));
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        let t = left.order_q().min(right.order_q());
        prop_assert!(left.agrees_to(&right, t));
    }

    #[test]
    fn multiplication_distributes(
        a in series_strategy(),
        b in series_strategy(),
        c in series_strategy(),
    ) {
        let left = a.mul(&b.add(&c));
        let right = a.mul(&b).add(&a.mul(&c));
        let t = left.order_q().min(right.order_q());
        prop_assert!(left.agrees_to(&right, t));
    }

    #[test]
    fn inversion_is_two_sided(a in series_strategy()) {
        prop_assume!(!a.is_zero());
        let inv = a.invert().unwrap();
        let left = a.mul(&inv);
        let right = inv.mul(&a);
        let t = left.order_q().min(right.order_q());
        prop_assert!(left.agrees_to(&TruncSeries::one(t), t));
        prop_assert!(right.agrees_to(&TruncSeries::one(t), t));
    }

    #[test]
    fn pochhammer_recurrence(a in monomial_strategy(), n in 0u64..=20) {
        // (a; q)_{n+1} = (a; q)_n · (1 - a q^n)
        let lhs = pochhammer_finite(&a, n + 1, 25);
        let shifted = a.mul(&Monomial::q_power(n as i64));
        let factor = TruncSeries::one(25).sub(&TruncSeries::monomial(&shifted, 25));
        let rhs = pochhammer_finite(&a, n, 25).mul(&factor);
        prop_assert!(lhs.agrees_to(&rhs, 25));
    }

    #[test]
    fn rescale_round_trip(a in series_strategy(), k in 1i64..=5) {
        prop_assert_eq!(a.rescale(k).reduce_scale(), a.clone());
    }

    #[test]
    fn serialization_round_trip(a in series_strategy()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: TruncSeries = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn normalization_preserves_expansion(
        neg in any::<bool>(),
        a in -24i64..=24,
        m in 1i64..=8,
    ) {
        let sym = JSymbol::new(if neg { Sign::Minus } else { Sign::Plus }, a, m);
        let n = normalize_j(&sym);
        prop_assert!(n.canonical.a >= 0 && n.canonical.a < m);
        let lhs = expand_j(&sym, 40);
        if n.is_zero {
            prop_assert!(lhs.is_zero());
        } else {
            let shift = *n.prefactor.exp.numer();
            let rhs = expand_j(&n.canonical, 40 - shift).mul_monomial(&n.prefactor);
            prop_assert!(lhs.agrees_to(&rhs, 40));
        }
    }
}

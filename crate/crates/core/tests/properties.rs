//! Property tests over generated inputs.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use recfrac::bigmath::{decimal_render, nth_root_interval, parse_decimal, pow, pow10, Rational};
use recfrac::forms::NmForm;
use recfrac::paraperm::TriMatrix;

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..200).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

proptest! {
    #[test]
    fn render_round_trips(q in rational(), digits in 0u32..12) {
        let text = decimal_render(&q, digits);
        let back = parse_decimal(&text).unwrap();
        let eps = Rational::new(BigInt::one(), pow10(digits));
        prop_assert!((&q - &back).abs() < eps);
        // truncation never moves away from zero
        prop_assert!(back.abs() <= q.abs());
    }

    #[test]
    fn root_enclosure_holds(q in rational(), n in 1u32..8, digits in 0u32..10) {
        let x = if n % 2 == 0 { q.abs() } else { q };
        let iv = nth_root_interval(&x, n, digits).unwrap();
        prop_assert!(iv.lower <= iv.upper);
        prop_assert!(iv.width() <= Rational::new(BigInt::one(), pow10(digits)));
        prop_assert!(pow(&iv.lower, n) <= x && x <= pow(&iv.upper, n));
    }

    #[test]
    fn cayley_hamilton(m in rational(), coords in prop::collection::vec(rational(), 1..6)) {
        let x = NmForm::new(m, coords).unwrap();
        prop_assert!(x.cayley_hamilton_residual().is_zero());
    }

    #[test]
    fn literal_round_trip(m in rational(), coords in prop::collection::vec(rational(), 1..6)) {
        let x = NmForm::new(m, coords).unwrap();
        prop_assert_eq!(x.to_string().parse::<NmForm>().unwrap(), x);
    }

    #[test]
    fn pper_fast_equals_definition(entries in prop::collection::vec(rational(), 28)) {
        // order 7 uses 28 entries
        let mut it = entries.into_iter();
        let a = TriMatrix::from_fn(7, |_, _| it.next().unwrap());
        prop_assert_eq!(a.pper(), a.pper_def());
        prop_assert_eq!(a.ddet(), a.ddet_def());
    }
}

//! Property test: the canonical printed form of a rational function is a
//! fixed point of the expression parser.
//!
//! For random rational functions with small exact complex-rational
//! coefficients, `parse(print(f))` must reproduce `f` exactly (structural
//! equality of reduced forms, not numerical closeness), and printing the
//! parsed value must reproduce the original text byte for byte.

use proptest::prelude::*;

use qriccati::algebra::{ExactComplexRational, Polynomial, RationalFunction};
use qriccati_cli::expr::parse_rational;

fn scalar_strategy() -> impl Strategy<Value = ExactComplexRational> {
    let part = (-9i64..=9, 1i64..=9).prop_map(|(p, r)| ExactComplexRational::from_ratio(p, r));
    (part.clone(), proptest::option::weighted(0.4, part)).prop_map(|(re, im)| match im {
        Some(im) => &re + &(&ExactComplexRational::i() * &im),
        None => re,
    })
}

fn polynomial_strategy(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(scalar_strategy(), 1..=max_degree + 1).prop_map(Polynomial::new)
}

fn rational_strategy() -> impl Strategy<Value = RationalFunction> {
    (polynomial_strategy(4), polynomial_strategy(3))
        .prop_filter("denominator must be nonzero", |(_, den)| !den.is_zero())
        .prop_map(|(num, den)| RationalFunction::new(num, den).expect("nonzero denominator"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_rational_functions_reparse_exactly(f in rational_strategy()) {
        let text = f.to_string();
        let back = parse_rational(&text).expect("canonical print parses");
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }
}

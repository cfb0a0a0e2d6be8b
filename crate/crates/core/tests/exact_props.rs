use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use mldeg::exact::{
    eval_descending, expand_root_product, matrix_rank_exact, solve_exact_linear, ExactMatrix,
    GaussianRational,
};
use mldeg::io::{matrix_to_json, parse_matrix_json};

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (rational(), rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
}

fn rational_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(rational(), n), n))
}

fn gaussian_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(gaussian(), c), r)
            .prop_map(|rows| ExactMatrix::from_rows(rows).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_recovers_x(a in rational_matrix(8), seed in prop::collection::vec(rational(), 8)) {
        let n = a.len();
        let x = seed[..n].to_vec();
        let m = ExactMatrix::from_rational_rows(a).unwrap();
        let b = m.mul_rational_vec(&x).unwrap();
        match solve_exact_linear(&m, &b) {
            Ok(got) => prop_assert_eq!(got, x),
            Err(_) => prop_assert!(matrix_rank_exact(&m) < n),
        }
    }

    #[test]
    fn root_product_vanishes_at_roots(roots in prop::collection::vec(-20i64..=20, 0..10)) {
        let roots: Vec<BigInt> = roots.into_iter().map(BigInt::from).collect();
        let coeffs = expand_root_product(&roots);
        prop_assert_eq!(coeffs.len(), roots.len() + 1);
        for r in &roots {
            prop_assert!(eval_descending(&coeffs, r).is_zero());
        }
    }

    #[test]
    fn rational_round_trips(a in rational(), b in rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a);
        }
    }

    #[test]
    fn gaussian_round_trips(a in gaussian(), b in gaussian()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
        let text = a.to_string();
        prop_assert_eq!(text.parse::<GaussianRational>().unwrap(), a);
    }

    #[test]
    fn rank_invariant_under_row_operations(
        m in gaussian_matrix(),
        i in 0usize..5,
        j in 0usize..5,
        s in gaussian(),
    ) {
        let rank = matrix_rank_exact(&m);
        prop_assert!(rank <= m.rows().min(m.cols()));
        prop_assert_eq!(matrix_rank_exact(&m.transpose()), rank);

        let (i, j) = (i % m.rows(), j % m.rows());
        let mut swapped = m.clone();
        swapped.swap_rows(i, j);
        prop_assert_eq!(matrix_rank_exact(&swapped), rank);

        if !s.is_zero() {
            let mut scaled = m.clone();
            scaled.scale_row(i, &s);
            prop_assert_eq!(matrix_rank_exact(&scaled), rank);
        }
    }

    #[test]
    fn matrix_json_round_trips(m in gaussian_matrix()) {
        let text = matrix_to_json(&m);
        let back = parse_matrix_json(&text).unwrap();
        prop_assert_eq!(matrix_to_json(&back), text);
        prop_assert_eq!(back, m);
    }
}

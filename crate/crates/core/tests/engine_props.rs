use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use mldeg::engine::{
    annihilated_by_characteristic, euler_record, ml_degree, ml_degree_by_row, ml_degree_with,
    ml_table,
};
use mldeg::{lambda_table, ModelShape};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn euler_record_reassembles(m in 2usize..=12, n in 2usize..=30) {
        let table = lambda_table(m.min(n)).unwrap();
        let rec = euler_record(ModelShape::new(m, n), &table).unwrap();
        prop_assert_eq!(&rec.chi_y, &(-&rec.ml_degree + &rec.obstruction));
        prop_assert!(rec.ml_degree.is_positive());
    }

    #[test]
    fn row_and_column_paths_agree(m in 2usize..=9, n in 2usize..=9) {
        let table = lambda_table(9).unwrap();
        let shape = ModelShape::new(m, n);
        prop_assert_eq!(
            ml_degree_with(shape, &table).unwrap(),
            ml_degree_by_row(shape.transposed(), &table).unwrap()
        );
    }
}

#[test]
fn characteristic_polynomial_annihilates() {
    let table = lambda_table(7).unwrap();
    for row in table.rows() {
        assert!(
            annihilated_by_characteristic(row, 20).unwrap(),
            "m = {}",
            row.m()
        );
    }
}

#[test]
fn degenerate_shapes_have_degree_one() {
    for k in 1..=6 {
        assert_eq!(ml_degree(ModelShape::new(1, k)).unwrap(), BigInt::from(1));
        assert_eq!(ml_degree(ModelShape::new(k, 2)).unwrap(), BigInt::from(1));
    }
    assert!(ml_degree(ModelShape::new(0, 4)).is_err());
}

#[test]
fn table_grows_along_rows() {
    let t = ml_table(8, 16).unwrap();
    for m in 3..=8 {
        for n in 3..16 {
            assert!(t.get(m, n + 1).unwrap() > t.get(m, n).unwrap(), "({m},{n})");
        }
    }
}

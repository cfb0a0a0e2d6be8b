//! Published values used by the verification suite.

/// ML degrees of `X_mn` for `m = 2..=7` and `n = m..=m+6`; row `k` holds
/// `n = m + k`, column `m - 2` holds `m`.
pub const ML_DEGREE_TABLE: [[u64; 6]; 7] = [
    [1, 10, 191, 6776, 378477, 30305766],
    [1, 26, 843, 40924, 2865245, 274740990],
    [1, 58, 3119, 212936, 19177197, 2244706374],
    [1, 122, 10587, 1015564, 118430045, 17048729886],
    [1, 250, 34271, 4586456, 692277357, 122818757286],
    [1, 506, 107883, 19984444, 3892815965, 850742384190],
    [1, 1018, 333839, 84986216, 21284701677, 5720543812614],
];

/// `(m, n, MLdeg(X_mn))` for every entry of [`ML_DEGREE_TABLE`].
pub fn ml_degree_entries() -> Vec<(usize, usize, u64)> {
    let mut out = Vec::with_capacity(42);
    for m in 2..=7 {
        for (k, row) in ML_DEGREE_TABLE.iter().enumerate() {
            out.push((m, m + k, row[m - 2]));
        }
    }
    out
}

/// `Lambda_2` through `Lambda_7`.
pub const LAMBDA_ROWS: [&[i64]; 6] = [
    &[2],
    &[-12, 12],
    &[50, -120, 72],
    &[-180, 780, -1080, 480],
    &[602, -4200, 10080, -10080, 3600],
    &[-1932, 20412, -75600, 127680, -100800, 30240],
];

/// `MLdeg(X_{20,20})`.
pub const ML_DEGREE_20_20: &str = "19674198689452133729973092792823813947695";

/// Generic `3 x 3` counts whose likelihood has ten critical points.
pub const GENERIC_3X3_DATA: [[u64; 3]; 3] = [[7, 11, 5], [3, 13, 2], [8, 6, 9]];

/// The `3 x 3` ML degree.
pub const ML_DEGREE_3X3: usize = 10;

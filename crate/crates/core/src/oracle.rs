//! Numerical critical point counts for small models.
//!
//! For the rank-one model the maximum likelihood estimate is explicit. For
//! the `3 x 3` rank-two model (the hypersurface `det p = 0` in the chart
//! `sum p = 1`) the critical points solve the Lagrange system
//!
//! ```text
//! p_ij * (lambda * C_ij(p) + mu) = u_ij / u_++      (9 equations)
//! det(p) = 0
//! sum p_ij = 1
//! ```
//!
//! where `C_ij` is the `(i, j)` cofactor. It is solved by damped Newton from
//! many pseudo-random complex starts; converged endpoints are filtered and
//! deduplicated. Every start draws from its own ChaCha stream, so the result
//! does not depend on how starts are scheduled across threads.

use nalgebra::{Matrix3, SMatrix, SVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{matrix_rank_exact, ExactMatrix, GaussianRational};
use crate::parallel;

/// Observed counts `u_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
}

impl DataMatrix {
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch(
                "data rows must be nonempty and rectangular".into(),
            ));
        }
        Ok(DataMatrix {
            rows: r,
            cols: c,
            counts: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn scaled(&self, k: u64) -> Self {
        DataMatrix {
            rows: self.rows,
            cols: self.cols,
            counts: self.counts.iter().map(|v| v * k).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.cols).map(<[u64]>::to_vec).collect()
    }

    fn has_zero_margin(&self) -> bool {
        self.row_sums().contains(&0) || self.col_sums().contains(&0)
    }

    fn exact_rank(&self) -> usize {
        let rows = self
            .to_rows()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| GaussianRational::from_int(v as i64))
                    .collect()
            })
            .collect();
        matrix_rank_exact(&ExactMatrix::from_rows(rows).expect("rectangular"))
    }
}

/// A candidate point `p` in the chart `sum p = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityPoint {
    pub rows: usize,
    pub cols: usize,
    #[serde(serialize_with = "serialize_complex")]
    pub p: Vec<Complex64>,
    /// Max-norm residual of the defining system at `p`.
    pub residual: f64,
    /// Some coordinate is zero: the point lies off the torus.
    pub boundary: bool,
}

fn serialize_complex<S: serde::Serializer>(
    v: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl ProbabilityPoint {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.p[i * self.cols + j]
    }

    fn as_matrix3(&self) -> Matrix3<Complex64> {
        Matrix3::from_fn(|i, j| self.get(i, j))
    }
}

/// Rank-one maximum likelihood estimate `p_ij = u_i+ u_+j / u_++^2`, exact.
pub fn rank1_mle_exact(u: &DataMatrix) -> Result<Vec<BigRational>> {
    let total = u.total();
    if total == 0 {
        return Err(Error::EmptyData);
    }
    let denom = BigInt::from(total) * BigInt::from(total);
    let rs = u.row_sums();
    let cs = u.col_sums();
    Ok(rs
        .iter()
        .flat_map(|&r| {
            let denom = denom.clone();
            cs.iter()
                .map(move |&c| BigRational::new(BigInt::from(r) * BigInt::from(c), denom.clone()))
        })
        .collect())
}

pub fn rank1_mle(u: &DataMatrix) -> Result<ProbabilityPoint> {
    let exact = rank1_mle_exact(u)?;
    let boundary = exact.iter().any(Zero::is_zero);
    let p: Vec<Complex64> = exact
        .iter()
        .map(|v| Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    let mut point = ProbabilityPoint {
        rows: u.rows(),
        cols: u.cols(),
        p,
        residual: 0.0,
        boundary,
    };
    if !boundary {
        point.residual = rank1_residual(&point, u);
    }
    Ok(point)
}

/// Which model a point is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Rank1,
    Rank2Of3x3,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub residual: f64,
    pub pass: bool,
}

pub fn verify_critical_point(
    p: &ProbabilityPoint,
    u: &DataMatrix,
    model: Model,
    tol: f64,
) -> Result<ResidualReport> {
    if p.rows != u.rows() || p.cols != u.cols() || p.p.len() != p.rows * p.cols {
        return Err(Error::ShapeMismatch(format!(
            "point is {}x{}, data is {}x{}",
            p.rows,
            p.cols,
            u.rows(),
            u.cols()
        )));
    }
    if u.total() == 0 {
        return Err(Error::EmptyData);
    }
    let residual = match model {
        Model::Rank1 => rank1_residual(p, u),
        Model::Rank2Of3x3 => {
            if u.rows() != 3 || u.cols() != 3 {
                return Err(Error::ShapeMismatch("rank-two oracle is 3x3 only".into()));
            }
            rank2_residual(p, u)
        }
    };
    Ok(ResidualReport {
        residual,
        pass: residual.is_finite() && residual < tol,
    })
}

/// Membership in the Segre variety plus orthogonality of `grad l_u = u / p`
/// to the tangent directions `e_i (x) c` and `r (x) f_j`, each measured
/// against the multiplier of the hyperplane `sum p = 1`.
fn rank1_residual(p: &ProbabilityPoint, u: &DataMatrix) -> f64 {
    let (m, n) = (p.rows, p.cols);
    let total = u.total() as f64;
    let r: Vec<Complex64> = (0..m).map(|i| (0..n).map(|j| p.get(i, j)).sum()).collect();
    let c: Vec<Complex64> = (0..n).map(|j| (0..m).map(|i| p.get(i, j)).sum()).collect();
    let sum: Complex64 = r.iter().sum();
    let mut res = (sum - 1.0).norm();
    for (i, ri) in r.iter().enumerate() {
        for (j, cj) in c.iter().enumerate() {
            res = res.max((p.get(i, j) - ri * cj).norm());
        }
    }
    let grad = |i: usize, j: usize| Complex64::new(u.get(i, j) as f64, 0.0) / p.get(i, j);
    // the multiplier equals u_++ on the chart
    for i in 0..m {
        let dir: Complex64 = (0..n).map(|j| grad(i, j) * c[j]).sum();
        let len: Complex64 = c.iter().sum();
        res = res.max(((dir - total * len) / total).norm());
    }
    for j in 0..n {
        let dir: Complex64 = (0..m).map(|i| grad(i, j) * r[i]).sum();
        let len: Complex64 = r.iter().sum();
        res = res.max(((dir - total * len) / total).norm());
    }
    res
}

fn cofactors(p: &Matrix3<Complex64>) -> Matrix3<Complex64> {
    Matrix3::from_fn(|i, j| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        p[(r0, c0)] * p[(r1, c1)] - p[(r0, c1)] * p[(r1, c0)]
    })
}

fn det3(p: &Matrix3<Complex64>) -> Complex64 {
    let c = cofactors(p);
    (0..3).map(|j| p[(0, j)] * c[(0, j)]).sum()
}

fn normalized(u: &DataMatrix) -> [f64; 9] {
    let total = u.total() as f64;
    let mut w = [0.0; 9];
    for (k, slot) in w.iter_mut().enumerate() {
        *slot = u.get(k / 3, k % 3) as f64 / total;
    }
    w
}

/// Residual of the Lagrange system at `p`, with `(lambda, mu)` fitted by
/// least squares.
fn rank2_residual(p: &ProbabilityPoint, u: &DataMatrix) -> f64 {
    let w = normalized(u);
    let pm = p.as_matrix3();
    let cof = cofactors(&pm);
    // p_ij C_ij lambda + p_ij mu = w_ij
    let a = SMatrix::<Complex64, 9, 2>::from_fn(|k, col| {
        let (i, j) = (k / 3, k % 3);
        if col == 0 {
            pm[(i, j)] * cof[(i, j)]
        } else {
            pm[(i, j)]
        }
    });
    let b = SVector::<Complex64, 9>::from_fn(|k, _| Complex64::new(w[k], 0.0));
    let normal = a.adjoint() * a;
    let Some(coef) = normal.lu().solve(&(a.adjoint() * b)) else {
        return f64::INFINITY;
    };
    let z = state_from(&pm, coef[0], coef[1]);
    lagrange_residual(&z, &w).amax_norm()
}

type State = SVector<Complex64, 11>;
type Jacobian = SMatrix<Complex64, 11, 11>;

fn state_from(p: &Matrix3<Complex64>, lambda: Complex64, mu: Complex64) -> State {
    let mut z = State::zeros();
    for k in 0..9 {
        z[k] = p[(k / 3, k % 3)];
    }
    z[9] = lambda;
    z[10] = mu;
    z
}

fn point_matrix(z: &State) -> Matrix3<Complex64> {
    Matrix3::from_fn(|i, j| z[3 * i + j])
}

trait AmaxNorm {
    fn amax_norm(&self) -> f64;
}

impl AmaxNorm for State {
    fn amax_norm(&self) -> f64 {
        self.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn lagrange_residual(z: &State, w: &[f64; 9]) -> State {
    let p = point_matrix(z);
    let cof = cofactors(&p);
    let (lambda, mu) = (z[9], z[10]);
    let mut f = State::zeros();
    for k in 0..9 {
        let (i, j) = (k / 3, k % 3);
        f[k] = p[(i, j)] * (lambda * cof[(i, j)] + mu) - w[k];
    }
    f[9] = det3(&p);
    f[10] = (0..9).map(|k| z[k]).sum::<Complex64>() - 1.0;
    f
}

/// `d^2 det / dp_ij dp_kl`.
fn det_hessian(p: &Matrix3<Complex64>, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
    if i == k || j == l {
        return Complex64::zero();
    }
    let r = 3 - i - k;
    let s = 3 - j - l;
    // sign of the permutation sending rows (0, 1, 2) to the chosen columns
    let mut perm = [0usize; 3];
    perm[i] = j;
    perm[k] = l;
    perm[r] = s;
    let inversions = (0..3)
        .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
        .filter(|&(a, b)| perm[a] > perm[b])
        .count();
    let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
    p[(r, s)] * sign
}

fn lagrange_jacobian(z: &State) -> Jacobian {
    let p = point_matrix(z);
    let cof = cofactors(&p);
    let (lambda, mu) = (z[9], z[10]);
    let mut jac = Jacobian::zeros();
    for a in 0..9 {
        let (i, j) = (a / 3, a % 3);
        for b in 0..9 {
            let (k, l) = (b / 3, b % 3);
            let mut d = p[(i, j)] * lambda * det_hessian(&p, i, j, k, l);
            if a == b {
                d += lambda * cof[(i, j)] + mu;
            }
            jac[(a, b)] = d;
        }
        jac[(a, 9)] = p[(i, j)] * cof[(i, j)];
        jac[(a, 10)] = p[(i, j)];
        jac[(9, a)] = cof[(i, j)];
        jac[(10, a)] = Complex64::new(1.0, 0.0);
    }
    jac
}

/// Tuning knobs for [`count_critical_points_3x3`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleParams {
    pub starts: usize,
    pub seed: u64,
    pub newton_tol: f64,
    pub dedup_tol: f64,
    /// Accepted points need every `|p_ij|` above this.
    pub coordinate_floor: f64,
    /// Accepted points need `sigma_2 / sigma_3` above this.
    pub rank_gap: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            starts: 5000,
            seed: 42,
            newton_tol: 1e-10,
            dedup_tol: 1e-6,
            coordinate_floor: 1e-8,
            rank_gap: 1e6,
            max_iterations: 200,
            max_halvings: 30,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RejectedCounts {
    pub on_coordinate_hyperplane: usize,
    pub rank_deficient: usize,
    pub non_converged: usize,
    pub duplicate: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPointReport {
    pub count: usize,
    pub accepted: Vec<ProbabilityPoint>,
    pub rejected: RejectedCounts,
    pub seed: u64,
    pub starts: usize,
    pub warnings: Vec<String>,
}

enum Outcome {
    Converged(State, f64),
    NonConverged,
}

fn random_start(rng: &mut ChaCha8Rng) -> State {
    let mut gauss = || -> f64 { StandardNormal.sample(&mut *rng) };
    // a random rank-two matrix with positive entries, normalized to sum one
    let left: [[f64; 2]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| 0.1 + gauss().abs()));
    let right: [[f64; 3]; 2] =
        std::array::from_fn(|_| std::array::from_fn(|_| 0.1 + gauss().abs()));
    let mut base = Matrix3::<Complex64>::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let v = left[i][0] * right[0][j] + left[i][1] * right[1][j];
            base[(i, j)] = Complex64::new(v, 0.0);
        }
    }
    let total: Complex64 = base.iter().sum();
    base /= total;
    for v in base.iter_mut() {
        *v *= Complex64::new(1.0 + 0.5 * gauss(), 0.5 * gauss());
    }
    let total: Complex64 = base.iter().sum();
    base /= total;
    let lambda = Complex64::new(gauss(), gauss()) * 30.0;
    let mu = Complex64::new(1.0 + 0.5 * gauss(), 0.5 * gauss());
    state_from(&base, lambda, mu)
}

fn newton(mut z: State, w: &[f64; 9], params: &OracleParams) -> Outcome {
    let mut f = lagrange_residual(&z, w);
    let mut norm = f.amax_norm();
    for _ in 0..params.max_iterations {
        if norm < params.newton_tol {
            return Outcome::Converged(z, norm);
        }
        let Some(step) = lagrange_jacobian(&z).lu().solve(&(-f)) else {
            return Outcome::NonConverged;
        };
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..=params.max_halvings {
            let trial = z + step * Complex64::new(t, 0.0);
            let trial_f = lagrange_residual(&trial, w);
            let trial_norm = trial_f.amax_norm();
            if trial_norm.is_finite() && trial_norm < norm {
                z = trial;
                f = trial_f;
                norm = trial_norm;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if norm < params.newton_tol {
        Outcome::Converged(z, norm)
    } else {
        Outcome::NonConverged
    }
}

fn run_start(index: usize, w: &[f64; 9], params: &OracleParams) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index as u64);
    // burn one draw so streams that differ only in seed never line up
    let _: u64 = rng.gen();
    newton(random_start(&mut rng), w, params)
}

fn singular_values(p: &Matrix3<Complex64>) -> [f64; 3] {
    let sv = p.svd(false, false).singular_values;
    let mut s = [sv[0], sv[1], sv[2]];
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn point_distance(a: &ProbabilityPoint, b: &ProbabilityPoint) -> f64 {
    let scale = a.p.iter().chain(&b.p).map(|v| v.norm()).fold(1.0, f64::max);
    a.p.iter()
        .zip(&b.p)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Orders points by their coordinates, real parts first.
fn canonical_cmp(a: &ProbabilityPoint, b: &ProbabilityPoint) -> std::cmp::Ordering {
    for (x, y) in a.p.iter().zip(&b.p) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Counts critical points of the likelihood on `3 x 3` matrices of rank at
/// most two by multi-start Newton.
///
/// The count is an empirical lower bound on the ML degree: starts that reach
/// the same point are merged, and a point can be missed if no start falls
/// into its basin.
pub fn count_critical_points_3x3(
    u: &DataMatrix,
    params: &OracleParams,
) -> Result<CriticalPointReport> {
    if u.rows() != 3 || u.cols() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "rank-two oracle needs 3x3 data, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    if u.total() == 0 {
        return Err(Error::EmptyData);
    }
    let mut warnings = Vec::new();
    if u.has_zero_margin() {
        warnings.push("DegenerateData: a row or column sum is zero".to_string());
    }
    if u.exact_rank() <= 1 {
        warnings.push("DegenerateData: data matrix has rank one and is not generic".to_string());
    }
    let w = normalized(u);
    let outcomes = parallel::map_range(params.starts, |k| run_start(k, &w, params));

    let mut rejected = RejectedCounts::default();
    let mut candidates = Vec::new();
    for outcome in outcomes {
        let (z, residual) = match outcome {
            Outcome::Converged(z, r) => (z, r),
            Outcome::NonConverged => {
                rejected.non_converged += 1;
                continue;
            }
        };
        let pm = point_matrix(&z);
        if pm.iter().any(|v| v.norm() <= params.coordinate_floor) {
            rejected.on_coordinate_hyperplane += 1;
            continue;
        }
        let s = singular_values(&pm);
        if !(s[1] > params.rank_gap * s[2] && s[1] > s[0] / params.rank_gap) {
            rejected.rank_deficient += 1;
            continue;
        }
        candidates.push(ProbabilityPoint {
            rows: 3,
            cols: 3,
            p: pm.transpose().iter().copied().collect(),
            residual,
            boundary: false,
        });
    }
    candidates.sort_by(canonical_cmp);
    let mut accepted: Vec<ProbabilityPoint> = Vec::new();
    for c in candidates {
        match accepted
            .iter_mut()
            .find(|a| point_distance(a, &c) < params.dedup_tol)
        {
            Some(existing) => {
                rejected.duplicate += 1;
                if c.residual < existing.residual {
                    *existing = c;
                }
            }
            None => accepted.push(c),
        }
    }
    accepted.sort_by(canonical_cmp);
    Ok(CriticalPointReport {
        count: accepted.len(),
        accepted,
        rejected,
        seed: params.seed,
        starts: params.starts,
        warnings,
    })
}

//! Dense complex linear algebra with tolerance-aware rank decisions.
//!
//! Every rank decision in the crate goes through [`rank`], [`nullspace`] or
//! [`range`]: a singular value counts as nonzero when it exceeds
//! `tol * sigma_max` (or `tol` when the matrix is zero).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;
pub type Vector = DVector<C64>;
pub type Rng = ChaCha8Rng;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 1;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(rng: &mut Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im)
}

pub fn random_vector(rng: &mut Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| random_scalar(rng))
}

pub fn random_matrix(rng: &mut Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| random_scalar(rng))
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = ONE;
    v
}

pub fn is_finite(m: &Mat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn ensure_finite(m: &Mat) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix has non-finite entries".into()))
    }
}

fn ensure_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")))
    }
}

/// Singular value decomposition with singular values sorted descending.
/// `v` is square (cols x cols) so trailing columns span the nullspace.
struct FullSvd {
    sigma: Vec<f64>,
    u: Mat,
    v: Mat,
}

/// Relative reconstruction error accepted from a single SVD attempt.
const SVD_ACCEPT: f64 = 1e-11;
const SVD_ATTEMPTS: u64 = 12;

/// `(u, sigma, v)` with `w = u diag(sigma) v^*`, unsorted. Requires rows >= cols.
fn raw_svd(w: &Mat) -> SvdParts {
    let svd = w.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").adjoint();
    (u, svd.singular_values.iter().copied().collect(), v)
}

fn svd_defect(w: &Mat, u: &Mat, sigma: &[f64], v: &Mat) -> f64 {
    let k = sigma.len();
    let d = Mat::from_fn(k, k, |i, j| if i == j { c(sigma[i], 0.0) } else { ZERO });
    let scale = w.norm().max(f64::MIN_POSITIVE);
    let rec = (u * d * v.adjoint() - w).norm() / scale;
    let ou = (u.adjoint() * u - identity(k)).norm();
    let ov = (v.adjoint() * v - identity(k)).norm();
    rec.max(ou).max(ov)
}

type SvdParts = (Mat, Vec<f64>, Mat);

/// nalgebra's complex SVD occasionally returns a wrong factorization for
/// rank-deficient input. Each attempt is checked; on failure we retry on the
/// adjoint and on seeded unitary rotations `Q w`, keeping the best result.
fn checked_svd(w: &Mat) -> SvdParts {
    let (rows, cols) = w.shape();
    let mut best = raw_svd(w);
    let mut best_defect = svd_defect(w, &best.0, &best.1, &best.2);
    let retry = |attempt: u64| -> Option<SvdParts> {
        if attempt == 0 {
            // the adjoint of a tall matrix is wide, which raw_svd does not take
            return (rows == cols).then(|| {
                let (u, s, v) = raw_svd(&w.adjoint());
                (v, s, u)
            });
        }
        let q = random_matrix(&mut rng(attempt), rows, rows).qr().q();
        let (u, s, v) = raw_svd(&(&q * w));
        Some((q.adjoint() * u, s, v))
    };
    for attempt in 0..=SVD_ATTEMPTS {
        if best_defect <= SVD_ACCEPT {
            break;
        }
        if let Some((u, s, v)) = retry(attempt) {
            let defect = svd_defect(w, &u, &s, &v);
            if defect < best_defect {
                best = (u, s, v);
                best_defect = defect;
            }
        }
    }
    best
}

fn full_svd(m: &Mat) -> FullSvd {
    let (rows, cols) = m.shape();
    let padded;
    let work = if rows < cols {
        let mut p = Mat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let (u, sv, v) = checked_svd(work);
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap_or(std::cmp::Ordering::Equal));
    let sigma: Vec<f64> = order.iter().map(|&i| sv[i]).collect();
    let mut su = Mat::zeros(u.nrows(), order.len());
    let mut sv_mat = Mat::zeros(cols, order.len());
    for (dst, &src) in order.iter().enumerate() {
        su.set_column(dst, &u.column(src));
        sv_mat.set_column(dst, &v.column(src));
    }
    // the padded rows never matter for u: we only hand out the first `rows` entries
    let su = su.rows(0, rows).into_owned();
    FullSvd { sigma, u: su, v: sv_mat }
}

fn threshold(sigma: &[f64], tol: f64) -> f64 {
    let top = sigma.first().copied().unwrap_or(0.0);
    if top > 0.0 {
        tol * top
    } else {
        tol
    }
}

pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    full_svd(m).sigma
}

pub fn rank(m: &Mat, tol: f64) -> Result<usize> {
    ensure_tol(tol)?;
    ensure_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let sigma = full_svd(m).sigma;
    let thr = threshold(&sigma, tol);
    Ok(sigma.iter().filter(|&&s| s > thr).count())
}

/// Orthonormal nullspace basis, returned as the columns of a matrix.
pub fn nullspace_mat(m: &Mat, tol: f64) -> Result<Mat> {
    ensure_tol(tol)?;
    ensure_finite(m)?;
    let cols = m.ncols();
    if cols == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    if m.nrows() == 0 {
        return Ok(identity(cols));
    }
    let svd = full_svd(m);
    let thr = threshold(&svd.sigma, tol);
    let r = svd.sigma.iter().filter(|&&s| s > thr).count();
    Ok(svd.v.columns(r, cols - r).into_owned())
}

fn scaled_threshold(sigma: &[f64], tol: f64, scale: f64) -> f64 {
    let top = sigma.first().copied().unwrap_or(0.0).max(scale);
    if top > 0.0 {
        tol * top
    } else {
        tol
    }
}

/// Nullspace with singular values judged against `tol * max(sigma_max, scale)`,
/// for systems whose natural size is known independently of their entries.
/// Without the floor, a matrix that is zero up to rounding has full rank.
pub fn nullspace_scaled(m: &Mat, tol: f64, scale: f64) -> Result<Mat> {
    ensure_tol(tol)?;
    ensure_finite(m)?;
    let cols = m.ncols();
    if cols == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    if m.nrows() == 0 {
        return Ok(identity(cols));
    }
    let svd = full_svd(m);
    let thr = scaled_threshold(&svd.sigma, tol, scale);
    let r = svd.sigma.iter().filter(|&&s| s > thr).count();
    Ok(svd.v.columns(r, cols - r).into_owned())
}

/// Column space with the threshold of [`nullspace_scaled`].
pub fn range_scaled(m: &Mat, tol: f64, scale: f64) -> Result<Mat> {
    ensure_tol(tol)?;
    ensure_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Mat::zeros(m.nrows(), 0));
    }
    let svd = full_svd(m);
    let thr = scaled_threshold(&svd.sigma, tol, scale);
    let r = svd.sigma.iter().filter(|&&s| s > thr).count();
    Ok(svd.u.columns(0, r).into_owned())
}

/// Rank with the threshold of [`nullspace_scaled`].
pub fn rank_scaled(m: &Mat, tol: f64, scale: f64) -> Result<usize> {
    ensure_tol(tol)?;
    ensure_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let sigma = full_svd(m).sigma;
    let thr = scaled_threshold(&sigma, tol, scale);
    Ok(sigma.iter().filter(|&&s| s > thr).count())
}

pub fn nullspace(m: &Mat, tol: f64) -> Result<Vec<Mat>> {
    let basis = nullspace_mat(m, tol)?;
    Ok(columns(&basis))
}

/// Orthonormal basis of the column space.
pub fn range(m: &Mat, tol: f64) -> Result<Mat> {
    ensure_tol(tol)?;
    ensure_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Mat::zeros(m.nrows(), 0));
    }
    let svd = full_svd(m);
    let thr = threshold(&svd.sigma, tol);
    let r = svd.sigma.iter().filter(|&&s| s > thr).count();
    Ok(svd.u.columns(0, r).into_owned())
}

/// The `k` right singular vectors belonging to the smallest singular values,
/// together with those singular values (ascending).
pub fn smallest_right_singular(m: &Mat, k: usize) -> (Mat, Vec<f64>) {
    let cols = m.ncols();
    let svd = full_svd(m);
    let mut sigma = svd.sigma.clone();
    sigma.resize(cols, 0.0);
    let start = cols - k;
    let vecs = svd.v.columns(start, k).into_owned();
    let mut vals: Vec<f64> = sigma[start..].to_vec();
    vals.reverse();
    let mut rev = Mat::zeros(cols, k);
    for j in 0..k {
        rev.set_column(j, &vecs.column(k - 1 - j));
    }
    (rev, vals)
}

pub fn columns(m: &Mat) -> Vec<Mat> {
    (0..m.ncols()).map(|j| col(m, j)).collect()
}

/// Column `j` of `m` as a one-column matrix.
pub fn col(m: &Mat, j: usize) -> Mat {
    m.columns(j, 1).into_owned()
}

/// A vector as a one-column matrix.
pub fn as_col(v: &Vector) -> Mat {
    Mat::from_column_slice(v.len(), 1, v.as_slice())
}

pub fn hstack(blocks: &[Mat], rows: usize) -> Mat {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), (rows, b.ncols())).copy_from(b);
        at += b.ncols();
    }
    out
}

pub fn vstack(blocks: &[Mat], cols: usize) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Column-major vectorization.
pub fn vec_of(m: &Mat) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

pub fn unvec(v: &[C64], rows: usize, cols: usize) -> Mat {
    Mat::from_column_slice(rows, cols, v)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalInconsistency("matrix is singular".into()))
}

/// Distance of `v` from the column span of the orthonormal `basis`.
pub fn projection_residual(basis: &Mat, v: &Mat) -> f64 {
    if basis.ncols() == 0 {
        return v.norm();
    }
    (v - basis * (basis.adjoint() * v)).norm()
}

pub fn is_hermitian(m: &Mat, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).norm() <= tol * m.norm().max(1.0)
}

const EIG_MAX_ITER: usize = 10_000;
const EIG_RETRIES: u64 = 4;

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and a
/// unitary matrix of eigenvectors (columns).
pub fn eig_hermitian(m: &Mat, tol: f64) -> Result<(Vec<f64>, Mat)> {
    ensure_tol(tol)?;
    ensure_finite(m)?;
    if !is_hermitian(m, tol) {
        return Err(Error::InvalidInput("matrix is not Hermitian".into()));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::try_new(herm, f64::EPSILON, EIG_MAX_ITER)
        .ok_or_else(|| Error::NumericalInconsistency("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eigenvalues(m: &Mat) -> Result<Vec<C64>> {
    ensure_finite(m)?;
    if !m.is_square() {
        return Err(Error::InvalidInput("eigenvalues of a non-square matrix".into()));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    // nalgebra's Schur iteration can stall; cap it and retry on unitary
    // conjugates, which have the same spectrum.
    let n = m.nrows();
    for attempt in 0..=EIG_RETRIES {
        let work = if attempt == 0 {
            m.clone()
        } else {
            let q = random_matrix(&mut rng(attempt), n, n).qr().q();
            &q * m * q.adjoint()
        };
        if let Some(vals) = nalgebra::Schur::try_new(work, f64::EPSILON, EIG_MAX_ITER).and_then(|s| s.eigenvalues()) {
            return Ok(vals.iter().copied().collect());
        }
    }
    Err(Error::NumericalInconsistency("Schur iteration did not converge".into()))
}

/// All `X` (d' x d) with `X * P_i = Q_i * X` for every pair, as an
/// orthonormal basis under the Frobenius inner product.
pub fn solve_sandwich(pairs: &[(Mat, Mat)], tol: f64) -> Result<Vec<Mat>> {
    ensure_tol(tol)?;
    let (first_p, first_q) = pairs
        .first()
        .ok_or_else(|| Error::InvalidInput("solve_sandwich needs at least one pair".into()))?;
    let d = first_p.nrows();
    let dq = first_q.nrows();
    for (p, q) in pairs {
        if p.shape() != (d, d) || q.shape() != (dq, dq) {
            return Err(Error::InvalidInput(format!(
                "sandwich pair has shapes {:?} and {:?}, expected ({d}, {d}) and ({dq}, {dq})",
                p.shape(),
                q.shape()
            )));
        }
        ensure_finite(p)?;
        ensure_finite(q)?;
    }
    let n = d * dq;
    if n == 0 {
        return Ok(Vec::new());
    }
    let id_d = identity(d);
    let id_q = identity(dq);
    let scale = pairs.iter().map(|(p, q)| p.norm().max(q.norm())).fold(0.0, f64::max);
    // Stack the Kronecker blocks, compressing through QR so the working
    // matrix never grows past a few multiples of n rows.
    let mut stacked: Option<Mat> = None;
    let mut pending: Vec<Mat> = Vec::new();
    let mut pending_rows = 0;
    let compress = |acc: Option<Mat>, pending: &mut Vec<Mat>| -> Mat {
        let mut blocks = Vec::with_capacity(pending.len() + 1);
        if let Some(a) = acc {
            blocks.push(a);
        }
        blocks.append(pending);
        let tall = vstack(&blocks, n);
        if tall.nrows() > n {
            tall.qr().r()
        } else {
            tall
        }
    };
    for (p, q) in pairs {
        let block = kron(&p.transpose(), &id_q) - kron(&id_d, q);
        pending_rows += block.nrows();
        pending.push(block);
        if pending_rows >= 4 * n {
            stacked = Some(compress(stacked.take(), &mut pending));
            pending_rows = 0;
        }
    }
    if !pending.is_empty() {
        stacked = Some(compress(stacked.take(), &mut pending));
    }
    let system = stacked.expect("at least one pair");
    let null = nullspace_scaled(&system, tol, scale)?;
    Ok((0..null.ncols())
        .map(|j| unvec(null.column(j).as_slice(), dq, d))
        .collect())
}

/// Deterministic orthonormal basis of the column span of `q`.
///
/// The span is brought to reduced column-echelon form (pivot coordinates in
/// ascending index order) and then Gram-Schmidt orthonormalized in pivot
/// order, so the result does not depend on which basis of the span was
/// passed in. Each vector has a real positive entry at its pivot.
pub fn canonical_basis(q: &Mat, tol: f64) -> Mat {
    let (n, k) = q.shape();
    if k == 0 {
        return Mat::zeros(n, 0);
    }
    let scale = q.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let pivot_thr = (tol.sqrt() * 1e-2).max(1e-10) * scale;
    // rows of `work` are the spanning vectors
    let mut work = q.transpose();
    let mut pivots = Vec::with_capacity(k);
    let mut row = 0;
    for col in 0..n {
        if row == k {
            break;
        }
        let (best, best_abs) = (row..k)
            .map(|r| (r, work[(r, col)].norm()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_abs <= pivot_thr {
            continue;
        }
        work.swap_rows(row, best);
        let p = work[(row, col)];
        for j in 0..n {
            work[(row, j)] /= p;
        }
        for r in 0..k {
            if r != row {
                let f = work[(r, col)];
                if f != ZERO {
                    for j in 0..n {
                        let v = work[(row, j)];
                        work[(r, j)] -= f * v;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let vecs: Vec<Vector> = (0..row).map(|r| work.row(r).transpose()).collect();
    let mut out: Vec<Vector> = Vec::with_capacity(vecs.len());
    for (v, &pc) in vecs.into_iter().zip(&pivots) {
        let mut w = v;
        for _ in 0..2 {
            for u in &out {
                let proj = u.dotc(&w);
                w -= u * proj;
            }
        }
        let norm = w.norm();
        let mut w = w / c(norm, 0.0);
        let phase = w[pc];
        if phase.norm() > 0.0 {
            w *= phase.conj() / c(phase.norm(), 0.0);
        }
        out.push(w);
    }
    let mut m = Mat::zeros(n, out.len());
    for (j, v) in out.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, data: &[f64]) -> Mat {
        Mat::from_row_iterator(rows, cols, data.iter().map(|&x| c(x, 0.0)))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Mat::zeros(3, 3), 1e-9).unwrap(), 0);
        assert_eq!(rank(&identity(3), 1e-9).unwrap(), 3);
        assert_eq!(rank(&real(2, 2, &[1.0, 1.0, 1.0, 1.0]), 1e-9).unwrap(), 1);
    }

    #[test]
    fn range_of_rank_one_idempotent() {
        let x = Vector::from_vec(vec![c(0.3, -0.1), c(-0.1, -0.5), c(0.0, 0.1)]);
        let mut g = rng(3);
        for _ in 0..64 {
            let y = random_vector(&mut g, 3);
            let y = &y / (y.adjoint() * &x)[(0, 0)].conj();
            let p = &x * y.adjoint();
            assert!((&p * &p - &p).norm() < 1e-12 * p.norm().max(1.0));
            let u = range(&p, 1e-9).unwrap();
            assert_eq!(u.ncols(), 1);
            assert!((&p * &u - &u).norm() < 1e-10 * p.norm().max(1.0));
        }
    }

    #[test]
    fn rank_rejects_bad_input() {
        let mut m = identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(rank(&m, 1e-9), Err(Error::InvalidInput(_))));
        assert!(matches!(rank(&identity(2), 0.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&identity(2), 1e-9).unwrap().is_empty());

        let ns = nullspace(&real(1, 2, &[1.0, -1.0]), 1e-9).unwrap();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // unique up to a phase
        let phase = v[0] / c(s, 0.0);
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!((v[1] - phase * c(s, 0.0)).norm() < 1e-12);

        let ns = nullspace(&Mat::zeros(2, 2), 1e-9).unwrap();
        assert_eq!(ns.len(), 2);
        let q = hstack(&ns, 2);
        assert!((q.adjoint() * &q - identity(2)).norm() < 1e-12);
    }

    #[test]
    fn eig_hermitian_examples() {
        let (vals, _) = eig_hermitian(&real(2, 2, &[2.0, 0.0, 0.0, 1.0]), 1e-9).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 2.0).abs() < 1e-12);

        let x = real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let (vals, v) = eig_hermitian(&x, 1e-9).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        assert!((v.adjoint() * &v - identity(2)).norm() < 1e-12);

        let (vals, _) = eig_hermitian(&identity(2), 1e-9).unwrap();
        assert!(vals.iter().all(|l| (l - 1.0).abs() < 1e-12));

        let bad = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eig_hermitian(&bad, 1e-9), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn general_eigenvalues_of_rotation() {
        let m = real(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let mut vals = eigenvalues(&m).unwrap();
        vals.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((vals[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((vals[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn sandwich_identity_gives_full_space() {
        let basis = solve_sandwich(&[(identity(2), identity(2))], 1e-9).unwrap();
        assert_eq!(basis.len(), 4);
    }

    /// Independent construction of the commutant dimension: the stacked
    /// Kronecker system built row by row, without the QR compression.
    fn brute_commutant_dim(mats: &[Mat]) -> usize {
        let d = mats[0].nrows();
        let n = d * d;
        let mut rows = Vec::new();
        for m in mats {
            for r in 0..d {
                for col in 0..d {
                    // coefficient row of (X m - m X)[r, col] in vec(X)
                    let mut row = vec![ZERO; n];
                    for k in 0..d {
                        row[r + k * d] += m[(k, col)];
                        row[k + col * d] -= m[(r, k)];
                    }
                    rows.push(row);
                }
            }
        }
        let sys = Mat::from_fn(rows.len(), n, |i, j| rows[i][j]);
        n - rank(&sys, 1e-9).unwrap()
    }

    #[test]
    fn sandwich_schur_on_matrix_units() {
        // natural module of M_2: rho(E_ij) = E_ij
        let mut mats = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let mut e = Mat::zeros(2, 2);
                e[(i, j)] = ONE;
                mats.push(e);
            }
        }
        assert_eq!(brute_commutant_dim(&mats), 1);
        let pairs: Vec<_> = mats.iter().map(|m| (m.clone(), m.clone())).collect();
        let basis = solve_sandwich(&pairs, 1e-9).unwrap();
        assert_eq!(basis.len(), 1);
        let x = &basis[0];
        let scale = x[(0, 0)];
        assert!((x - identity(2) * scale).norm() < 1e-12);
    }

    #[test]
    fn sandwich_inequivalent_characters() {
        let one = real(1, 1, &[1.0]);
        let minus = real(1, 1, &[-1.0]);
        // rho(1) and rho(g) for the trivial and sign characters of Z/2
        let pairs = vec![(one.clone(), one.clone()), (one.clone(), minus)];
        assert!(solve_sandwich(&pairs, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn sandwich_rejects_shape_mismatch() {
        let pairs = vec![(identity(2), identity(2)), (identity(3), identity(2))];
        assert!(matches!(solve_sandwich(&pairs, 1e-9), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn canonical_basis_is_independent_of_spanning_set() {
        let mut r = rng(7);
        let span = random_matrix(&mut r, 5, 2);
        let mix = random_matrix(&mut r, 2, 2);
        let a = canonical_basis(&range(&span, 1e-9).unwrap(), 1e-9);
        let b = canonical_basis(&range(&(&span * mix), 1e-9).unwrap(), 1e-9);
        assert!((a - b).norm() < 1e-10);
        let id = canonical_basis(&identity(3), 1e-9);
        assert!((id - identity(3)).norm() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn low_rank(seed: u64, rows: usize, cols: usize, r: usize) -> Mat {
            let mut g = rng(seed);
            random_matrix(&mut g, rows, r) * random_matrix(&mut g, r, cols)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn rank_plus_nullity(seed in 0u64..1000, rows in 1usize..7, cols in 1usize..7, r in 0usize..7) {
                let r = r.min(rows).min(cols);
                let m = low_rank(seed, rows, cols, r);
                let tol = 1e-9;
                let rk = rank(&m, tol).unwrap();
                let ns = nullspace_mat(&m, tol).unwrap();
                prop_assert_eq!(rk, r);
                prop_assert_eq!(rk + ns.ncols(), cols);
                prop_assert!((ns.adjoint() * &ns - identity(ns.ncols())).norm() < 1e-10);
                if ns.ncols() > 0 {
                    prop_assert!((&m * &ns).norm() <= tol * m.norm().max(1.0) * 10.0);
                }
            }

            #[test]
            fn range_spans_column_space(seed in 0u64..1000, rows in 1usize..7, cols in 1usize..7, r in 0usize..7) {
                let r = r.min(rows).min(cols);
                let m = low_rank(seed, rows, cols, r);
                let u = range(&m, 1e-9).unwrap();
                prop_assert_eq!(u.ncols(), r);
                let resid = &m - &u * (u.adjoint() * &m);
                prop_assert!(resid.norm() <= 1e-10 * m.norm().max(1.0));
            }

            #[test]
            fn hermitian_reconstruction(seed in 0u64..1000, n in 1usize..7) {
                let mut g = rng(seed);
                let a = random_matrix(&mut g, n, n);
                let h = &a + a.adjoint();
                let tol = 1e-9;
                let (vals, v) = eig_hermitian(&h, tol).unwrap();
                let lam = Mat::from_diagonal(&Vector::from_iterator(n, vals.iter().map(|&x| c(x, 0.0))));
                let rec = &v * lam * v.adjoint();
                prop_assert!((rec - &h).norm() <= 10.0 * tol * h.norm());
                prop_assert!((v.adjoint() * &v - identity(n)).norm() < 1e-10);
                prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            }

            #[test]
            fn sandwich_residual_bound(seed in 0u64..1000, d in 1usize..4) {
                // conjugate pairs share a nontrivial solution space
                let mut g = rng(seed);
                let p1 = random_matrix(&mut g, d, d);
                let s = random_matrix(&mut g, d, d) + identity(d) * c(3.0, 0.0);
                let sinv = inverse(&s).unwrap();
                let q1 = &s * &p1 * &sinv;
                let tol = 1e-9;
                let basis = solve_sandwich(&[(identity(d), identity(d)), (p1.clone(), q1.clone())], tol).unwrap();
                prop_assert!(!basis.is_empty());
                for x in &basis {
                    let res = (x * &p1 - &q1 * x).norm();
                    let bound = tol * (x.norm() * p1.norm() + q1.norm() * x.norm());
                    prop_assert!(res <= bound, "residual {} bound {}", res, bound);
                }
            }
        }
    }
}

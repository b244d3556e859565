//! Finite-dimensional unital associative algebras given by structure constants.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::group_action::AlgebraAction;
use crate::numeric::{self, Mat, Vector, ONE, ZERO};

/// Above this dimension the associativity and representation checks sample
/// random elements instead of running over every basis triple.
pub const EXHAUSTIVE_CHECK_DIM: usize = 32;
const SAMPLED_CHECKS: usize = 64;
const SAMPLE_SEED: u64 = 0x5eed_a55c;

/// A unital associative algebra over the complex numbers.
///
/// Multiplication is stored as left-multiplication matrices: `left[i]` is the
/// matrix of `x -> b_i * x`, so the structure constant `c[i][j][k]` (the
/// coefficient of `b_k` in `b_i * b_j`) is `left[i][(k, j)]`.
#[derive(Debug, Clone)]
pub struct Algebra {
    dim: usize,
    labels: Vec<String>,
    left: Vec<Mat>,
    unit: Vector,
    generators: Vec<Vector>,
    tol: f64,
    semisimple: OnceLock<bool>,
}

/// Validates sparse structure constants `(i, j, k, value)` meaning
/// `b_i * b_j += value * b_k`.
pub fn make_algebra(
    dim: usize,
    mult: &[(usize, usize, usize, numeric::C64)],
    unit: Vector,
    tol: f64,
) -> Result<Algebra> {
    if dim == 0 {
        return Err(Error::InvalidInput("algebra dimension must be positive".into()));
    }
    let mut left = vec![Mat::zeros(dim, dim); dim];
    for &(i, j, k, v) in mult {
        if i >= dim || j >= dim || k >= dim {
            return Err(Error::InvalidInput(format!(
                "structure constant index ({i}, {j}, {k}) out of range for dimension {dim}"
            )));
        }
        left[i][(k, j)] += v;
    }
    Algebra::from_left(left, unit, tol)
}

impl Algebra {
    pub fn from_left(left: Vec<Mat>, unit: Vector, tol: f64) -> Result<Self> {
        let dim = left.len();
        if dim == 0 {
            return Err(Error::InvalidInput("algebra dimension must be positive".into()));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        if unit.len() != dim || left.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::InvalidInput(format!(
                "structure tensor shape does not match dimension {dim}"
            )));
        }
        if left.iter().any(|m| !numeric::is_finite(m)) || unit.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite structure constants".into()));
        }
        let alg = Algebra {
            dim,
            labels: (0..dim).map(|i| format!("b{i}")).collect(),
            generators: (0..dim).map(|i| numeric::basis_vector(dim, i)).collect(),
            left,
            unit,
            tol,
            semisimple: OnceLock::new(),
        };
        alg.check_unit()?;
        alg.check_associativity()?;
        Ok(alg)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    /// Replaces the generating set used by commutant and cyclic-span
    /// computations. The caller guarantees that these elements generate the
    /// algebra.
    pub fn with_generators(mut self, generators: Vec<Vector>) -> Self {
        assert!(generators.iter().all(|g| g.len() == self.dim));
        self.generators = generators;
        self
    }

    /// Same structure with another tolerance; the structure is not
    /// re-validated.
    pub fn with_tol(mut self, tol: f64) -> Self {
        assert!(tol > 0.0 && tol.is_finite());
        self.tol = tol;
        self.semisimple = OnceLock::new();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn left(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    pub fn left_all(&self) -> &[Mat] {
        &self.left
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> numeric::C64 {
        self.left[i][(k, j)]
    }

    /// Nonzero structure constants as `(i, j, k, value)`.
    pub fn sparse_mult(&self) -> Vec<(usize, usize, usize, numeric::C64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let v = self.left[i][(k, j)];
                    if v != ZERO {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    pub fn basis(&self, i: usize) -> Vector {
        numeric::basis_vector(self.dim, i)
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != ZERO {
                out += (&self.left[i] * y) * xi;
            }
        }
        out
    }

    pub fn left_matrix(&self, x: &Vector) -> Mat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != ZERO {
                out += &self.left[i] * xi;
            }
        }
        out
    }

    /// Matrix of `x -> x * y`.
    pub fn right_matrix(&self, y: &Vector) -> Mat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            out.set_column(i, &(&self.left[i] * y));
        }
        out
    }

    fn check_unit(&self) -> Result<()> {
        let lu = self.left_matrix(&self.unit);
        for j in 0..self.dim {
            let mut col = lu.column(j).into_owned();
            col[j] -= ONE;
            let r = col.norm();
            if r > self.tol {
                return Err(Error::UnitViolation { index: j, residual: r });
            }
        }
        for i in 0..self.dim {
            let mut v = &self.left[i] * &self.unit;
            v[i] -= ONE;
            let r = v.norm();
            if r > self.tol * self.left[i].norm().max(1.0) {
                return Err(Error::UnitViolation { index: i, residual: r });
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.dim;
        if n <= EXHAUSTIVE_CHECK_DIM {
            for i in 0..n {
                for j in 0..n {
                    // L_{b_i b_j} must equal L_i L_j; column k is the triple (i, j, k)
                    let lhs = &self.left[i] * &self.left[j];
                    let prod = self.left[i].column(j).into_owned();
                    let rhs = self.left_matrix(&prod);
                    let diff = rhs - lhs;
                    let scale = (self.left[i].norm() * self.left[j].norm()).max(1.0);
                    let (k, r) = worst_column(&diff);
                    if r > self.tol * scale {
                        return Err(Error::AssociativityViolation { i, j, k, residual: r });
                    }
                }
            }
        } else {
            let mut rng = numeric::rng(SAMPLE_SEED);
            for s in 0..SAMPLED_CHECKS {
                let x = numeric::random_vector(&mut rng, n);
                let y = numeric::random_vector(&mut rng, n);
                let z = numeric::random_vector(&mut rng, n);
                let r = self.associativity_residual(&x, &y, &z);
                if r > self.tol {
                    return Err(Error::AssociativityViolation { i: s, j: s, k: s, residual: r });
                }
            }
        }
        Ok(())
    }

    /// Relative residual `|(xy)z - x(yz)| / (|L_x| |L_y| |z|)`.
    pub fn associativity_residual(&self, x: &Vector, y: &Vector, z: &Vector) -> f64 {
        let lhs = self.mul(&self.mul(x, y), z);
        let rhs = self.mul(x, &self.mul(y, z));
        let scale = self.left_matrix(x).norm() * self.left_matrix(y).norm() * z.norm();
        (lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE)
    }

    /// Gram matrix of the trace form `T(a, b) = tr(L_a L_b)`.
    pub fn trace_form(&self) -> Mat {
        let n = self.dim;
        let flat = Mat::from_fn(n * n, n, |r, i| self.left[i].as_slice()[r]);
        let flat_t = Mat::from_fn(n * n, n, |r, i| {
            // entry r of vec(L_i^T) in column-major order
            let (row, col) = (r % n, r / n);
            self.left[i][(col, row)]
        });
        flat.transpose() * flat_t
    }

    pub fn is_semisimple(&self, tol: f64) -> Result<bool> {
        Ok(numeric::rank(&self.trace_form(), tol)? == self.dim)
    }

    /// Semisimplicity at the algebra's own tolerance, computed once.
    pub fn semisimple(&self) -> bool {
        *self
            .semisimple
            .get_or_init(|| self.is_semisimple(self.tol).unwrap_or(false))
    }

    /// True when both algebras have the same dimension and structure
    /// constants within `tol`.
    pub fn same_structure(&self, other: &Algebra, tol: f64) -> bool {
        self.dim == other.dim
            && (&self.unit - &other.unit).norm() <= tol
            && self
                .left
                .iter()
                .zip(&other.left)
                .all(|(a, b)| (a - b).norm() <= tol * a.norm().max(1.0))
    }
}

fn worst_column(m: &Mat) -> (usize, f64) {
    (0..m.ncols())
        .map(|k| (k, m.column(k).norm()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
}

pub fn is_semisimple(a: &Algebra, tol: f64) -> Result<bool> {
    a.is_semisimple(tol)
}

/// `M_n(C)` with matrix units `E_ij` at index `i * n + j`.
pub fn matrix_algebra(n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix algebra size must be positive".into()));
    }
    let dim = n * n;
    let mut left = vec![Mat::zeros(dim, dim); dim];
    for i in 0..n {
        for j in 0..n {
            // E_ij E_jl = E_il
            for l in 0..n {
                left[i * n + j][(i * n + l, j * n + l)] = ONE;
            }
        }
    }
    let mut unit = Vector::zeros(dim);
    for i in 0..n {
        unit[i * n + i] = ONE;
    }
    let labels = (0..n)
        .flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1)))
        .collect();
    Ok(Algebra::from_left(left, unit, numeric::DEFAULT_TOL)?.with_labels(labels))
}

pub fn direct_sum(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da + db;
    let mut left = Vec::with_capacity(dim);
    for m in a.left_all() {
        let mut l = Mat::zeros(dim, dim);
        l.view_mut((0, 0), (da, da)).copy_from(m);
        left.push(l);
    }
    for m in b.left_all() {
        let mut l = Mat::zeros(dim, dim);
        l.view_mut((da, da), (db, db)).copy_from(m);
        left.push(l);
    }
    let mut unit = Vector::zeros(dim);
    unit.rows_mut(0, da).copy_from(a.unit());
    unit.rows_mut(da, db).copy_from(b.unit());
    let labels = a
        .labels()
        .iter()
        .map(|l| format!("{l}.0"))
        .chain(b.labels().iter().map(|l| format!("{l}.1")))
        .collect();
    Ok(Algebra::from_left(left, unit, a.tol().max(b.tol()))?.with_labels(labels))
}

/// A subalgebra given by its own structure constants and an injective,
/// multiplicative coordinate map into the parent.
#[derive(Debug, Clone)]
pub struct SubalgebraEmbedding {
    pub sub: Arc<Algebra>,
    /// dim(parent) x dim(sub); columns are the images of the sub basis.
    pub inclusion: Mat,
}

impl SubalgebraEmbedding {
    pub fn map(&self, x: &Vector) -> Vector {
        &self.inclusion * x
    }

    pub fn identity(a: &Arc<Algebra>) -> Self {
        SubalgebraEmbedding { sub: a.clone(), inclusion: numeric::identity(a.dim()) }
    }
}

/// Builds the subalgebra spanned by the orthonormal columns of `basis`,
/// with unit `unit` (parent coordinates). Products are projected back onto
/// the span; anything left over beyond `tol` is a closure failure.
pub fn subalgebra_from_basis(
    parent: &Algebra,
    basis: &Mat,
    unit: &Vector,
    tol: f64,
) -> Result<SubalgebraEmbedding> {
    let r = basis.ncols();
    if r == 0 {
        return Err(Error::InvalidInput("empty subalgebra basis".into()));
    }
    let cols: Vec<Vector> = (0..r).map(|j| basis.column(j).into_owned()).collect();
    let proj = basis.adjoint();
    let mut left = vec![Mat::zeros(r, r); r];
    let mut worst: f64 = 0.0;
    for a in 0..r {
        for b in 0..r {
            let p = parent.mul(&cols[a], &cols[b]);
            let coords = &proj * &p;
            let resid = (&p - basis * &coords).norm();
            let scale = (parent.left_matrix(&cols[a]).norm()).max(1.0);
            worst = worst.max(resid / scale);
            left[a].set_column(b, &coords);
        }
    }
    if worst > tol {
        return Err(Error::ClosureViolation { residual: worst });
    }
    let sub_unit = &proj * unit;
    let unit_resid = (unit - basis * &sub_unit).norm();
    if unit_resid > tol * unit.norm().max(1.0) {
        return Err(Error::ClosureViolation { residual: unit_resid });
    }
    let sub = Algebra::from_left(left, sub_unit, tol)?;
    Ok(SubalgebraEmbedding { sub: Arc::new(sub), inclusion: basis.clone() })
}

/// The subalgebra `A^G` of elements fixed by every group element.
pub fn fixed_subalgebra(action: &AlgebraAction) -> Result<SubalgebraEmbedding> {
    let a = action.target();
    let n = a.dim();
    let id = numeric::identity(n);
    let blocks: Vec<Mat> = action.mats().iter().map(|m| m - &id).collect();
    let stacked = numeric::vstack(&blocks, n);
    let null = numeric::nullspace_scaled(&stacked, action.tol(), 1.0)?;
    let basis = numeric::canonical_basis(&null, action.tol());
    subalgebra_from_basis(a, &basis, a.unit(), action.tol())
}

/// The corner algebra `e A e` with unit `e`.
pub fn corner_algebra(a: &Algebra, e: &Vector, tol: f64) -> Result<SubalgebraEmbedding> {
    let ee = a.mul(e, e);
    let resid = (&ee - e).norm();
    if resid > tol * e.norm().max(1.0) * a.left_matrix(e).norm().max(1.0) {
        return Err(Error::NotIdempotent { residual: resid });
    }
    let span = a.left_matrix(e) * a.right_matrix(e);
    let q = numeric::range(&span, tol)?;
    let basis = numeric::canonical_basis(&q, tol);
    subalgebra_from_basis(a, &basis, e, tol)
}

/// Dual numbers `C[x]/(x^2)`: the smallest non-semisimple algebra.
pub fn dual_numbers() -> Result<Algebra> {
    let mult = [(0, 0, 0, ONE), (0, 1, 1, ONE), (1, 0, 1, ONE)];
    let mut unit = Vector::zeros(2);
    unit[0] = ONE;
    Ok(make_algebra(2, &mult, unit, numeric::DEFAULT_TOL)?.with_labels(vec!["1".into(), "x".into()]))
}

/// Algebra with a new basis: column `j` of `change` holds the old coordinates
/// of new basis vector `j`.
pub fn change_basis(a: &Algebra, change: &Mat) -> Result<Algebra> {
    let inv = numeric::inverse(change)?;
    let n = a.dim();
    let mut left = Vec::with_capacity(n);
    for j in 0..n {
        let x = change.column(j).into_owned();
        left.push(&inv * a.left_matrix(&x) * change);
    }
    let unit = &inv * a.unit();
    Algebra::from_left(left, unit, a.tol())
}

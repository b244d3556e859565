//! Modules over an [`Algebra`]: hom spaces, simplicity, twists, restriction
//! and isotypic decomposition.
//!
//! Decomposition samples a random element of the commutant
//! `End_A(M)`. For a semisimple algebra the commutant is a product of full
//! matrix algebras acting on the multiplicity spaces, so a generic element has
//! one eigenspace per simple summand. When the commutant is closed under the
//! adjoint the sample is Hermitized and split with a Hermitian
//! eigendecomposition; otherwise its eigenvalues come from the complex Schur
//! form and each eigenspace from the smallest right singular vectors of
//! `X - lambda I`.

use std::sync::Arc;

use crate::algebra::{Algebra, SubalgebraEmbedding, EXHAUSTIVE_CHECK_DIM};
use crate::error::{Error, Result};
use crate::group_action::{AlgebraAction, FiniteGroup};
use crate::numeric::{self, c, Mat, Vector, ZERO};

/// Relative eigenvalue gap below which two commutant eigenvalues are
/// treated as one.
pub const EIGEN_GAP: f64 = 1e-6;
/// Reseeds allowed after the first commutant sample.
pub const MAX_RETRIES: u32 = 8;
/// Number of random start vectors in the cyclic-span simplicity test.
pub const CYCLIC_PROBES: usize = 3;

#[derive(Debug, Clone)]
pub struct Module {
    algebra: Arc<Algebra>,
    dim: usize,
    rho: Vec<Mat>,
    tol: f64,
}

pub fn make_module(algebra: Arc<Algebra>, rho: Vec<Mat>, tol: f64) -> Result<Module> {
    if rho.len() != algebra.dim() {
        return Err(Error::InvalidInput(format!(
            "expected {} action matrices, got {}",
            algebra.dim(),
            rho.len()
        )));
    }
    let dim = rho.first().map(|m| m.nrows()).unwrap_or(0);
    if rho.iter().any(|m| m.shape() != (dim, dim) || !numeric::is_finite(m)) {
        return Err(Error::InvalidInput("module action matrices are malformed".into()));
    }
    let m = Module { algebra, dim, rho, tol };
    m.validate()?;
    Ok(m)
}

impl Module {
    /// Constructs without validation; callers guarantee the representation
    /// property by construction.
    pub(crate) fn from_parts(algebra: Arc<Algebra>, rho: Vec<Mat>, tol: f64) -> Module {
        let dim = rho.first().map(|m| m.nrows()).unwrap_or(0);
        Module { algebra, dim, rho, tol }
    }

    /// The left regular module.
    pub fn regular(algebra: &Arc<Algebra>) -> Module {
        Module::from_parts(algebra.clone(), algebra.left_all().to_vec(), algebra.tol())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn rho(&self, i: usize) -> &Mat {
        &self.rho[i]
    }

    pub fn rho_all(&self) -> &[Mat] {
        &self.rho
    }

    /// Action matrix of an arbitrary element.
    pub fn act(&self, x: &Vector) -> Mat {
        let mut out = Mat::zeros(self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != ZERO {
                out += &self.rho[i] * xi;
            }
        }
        out
    }

    pub fn generator_mats(&self) -> Vec<Mat> {
        self.algebra.generators().iter().map(|g| self.act(g)).collect()
    }

    /// Largest relative violation of `rho(b_i) rho(b_j) = rho(b_i b_j)` and
    /// of `rho(1) = I`, with the offending pair.
    pub fn representation_residual(&self) -> (f64, usize, usize) {
        let a = &self.algebra;
        let n = a.dim();
        let unit_res = (self.act(a.unit()) - numeric::identity(self.dim)).norm();
        let mut worst = (unit_res, usize::MAX, usize::MAX);
        if self.dim == 0 {
            return worst;
        }
        if n <= EXHAUSTIVE_CHECK_DIM {
            for i in 0..n {
                for j in 0..n {
                    let lhs = &self.rho[i] * &self.rho[j];
                    let rhs = self.act(&a.left(i).column(j).into_owned());
                    let scale = (self.rho[i].norm() * self.rho[j].norm()).max(1.0);
                    let r = (lhs - rhs).norm() / scale;
                    if r > worst.0 {
                        worst = (r, i, j);
                    }
                }
            }
        } else {
            let mut rng = numeric::rng(0x4e9_5eed);
            for s in 0..32 {
                let x = numeric::random_vector(&mut rng, n);
                let y = numeric::random_vector(&mut rng, n);
                let rx = self.act(&x);
                let ry = self.act(&y);
                let rxy = self.act(&a.mul(&x, &y));
                let scale = (rx.norm() * ry.norm()).max(1.0);
                let r = (&rx * &ry - rxy).norm() / scale;
                if r > worst.0 {
                    worst = (r, s, s);
                }
            }
        }
        worst
    }

    pub fn validate(&self) -> Result<()> {
        let (r, i, j) = self.representation_residual();
        if r > self.tol {
            return Err(Error::NotARepresentation { i, j, residual: r });
        }
        Ok(())
    }

    /// Largest relative distance of `rho(g) U` from the span of the
    /// orthonormal columns of `basis`, over the generators.
    pub fn invariance_residual(&self, basis: &Mat) -> f64 {
        self.generator_mats()
            .iter()
            .map(|g| {
                let img = g * basis;
                numeric::projection_residual(basis, &img) / g.norm().max(1.0)
            })
            .fold(0.0, f64::max)
    }

    /// The submodule carried by the orthonormal columns of `basis`.
    pub fn submodule(&self, basis: &Mat) -> Result<Module> {
        let r = self.invariance_residual(basis);
        if r > self.tol {
            return Err(Error::NumericalInconsistency(format!(
                "subspace is not invariant: residual {r:.3e}"
            )));
        }
        Ok(self.compress(basis))
    }

    fn compress(&self, basis: &Mat) -> Module {
        let adj = basis.adjoint();
        let rho = self.rho.iter().map(|m| &adj * m * basis).collect();
        Module::from_parts(self.algebra.clone(), rho, self.tol)
    }

    /// `P^-1 rho P`: the same module in another basis.
    pub fn conjugate(&self, p: &Mat) -> Result<Module> {
        let inv = numeric::inverse(p)?;
        let rho = self.rho.iter().map(|m| &inv * m * p).collect();
        Ok(Module::from_parts(self.algebra.clone(), rho, self.tol))
    }

    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let (d1, d2) = (self.dim, other.dim);
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| {
                let mut m = Mat::zeros(d1 + d2, d1 + d2);
                m.view_mut((0, 0), (d1, d1)).copy_from(a);
                m.view_mut((d1, d1), (d2, d2)).copy_from(b);
                m
            })
            .collect();
        Ok(Module::from_parts(self.algebra.clone(), rho, self.tol.max(other.tol)))
    }

    /// Same carrier and matrices over another (structurally identical)
    /// algebra handle.
    pub fn rebind(&self, algebra: Arc<Algebra>) -> Result<Module> {
        make_module(algebra, self.rho.clone(), self.tol)
    }
}

/// Basis of `Hom_A(M, N)`: matrices `X` (dim N x dim M) with
/// `X rho_M(a) = rho_N(a) X`, orthonormal under the Frobenius product.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<Mat>> {
    if !Arc::ptr_eq(&m.algebra, &n.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    if m.dim == 0 || n.dim == 0 {
        return Ok(Vec::new());
    }
    let gens = &m.algebra.generators();
    let pairs: Vec<(Mat, Mat)> = gens.iter().map(|g| (m.act(g), n.act(g))).collect();
    numeric::solve_sandwich(&pairs, m.tol.max(n.tol))
}

/// Outcome of the two independent simplicity criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplicity {
    pub commutant_dim: usize,
    /// Dimension of the cyclic span of each random probe in `M^{+dim M}`.
    pub cyclic_dims: Vec<usize>,
    pub dim: usize,
}

impl Simplicity {
    pub fn by_commutant(&self) -> bool {
        self.commutant_dim == 1
    }

    pub fn by_cyclic_span(&self) -> bool {
        self.cyclic_dims.iter().all(|&d| d == self.dim * self.dim)
    }
}

/// Dimension of the smallest submodule containing `v`.
pub fn cyclic_span_dim(m: &Module, v: &Vector) -> usize {
    let gens = m.generator_mats();
    let mut basis: Vec<Vector> = Vec::new();
    let mut queue = Vec::new();
    if let Some(q) = orthogonalize(&basis, v, m.tol) {
        basis.push(q.clone());
        queue.push(q);
    }
    while let Some(q) = queue.pop() {
        for g in &gens {
            if basis.len() == m.dim {
                return basis.len();
            }
            let w = g * &q;
            if let Some(nq) = orthogonalize(&basis, &w, m.tol) {
                basis.push(nq.clone());
                queue.push(nq);
            }
        }
    }
    basis.len()
}

/// Dimension of the cyclic span of `x` in `M^{+k}`, where the columns of
/// `x` (dim M x k) are the components.
pub fn cyclic_span_dim_multi(m: &Module, x: &Mat) -> Result<usize> {
    let cols: Vec<Mat> = m
        .rho
        .iter()
        .map(|r| numeric::as_col(&numeric::vec_of(&(r * x))))
        .collect();
    numeric::rank(&numeric::hstack(&cols, m.dim * x.ncols()), m.tol)
}

fn orthogonalize(basis: &[Vector], v: &Vector, tol: f64) -> Option<Vector> {
    let norm0 = v.norm();
    if norm0 == 0.0 {
        return None;
    }
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let p = b.dotc(&w);
            w -= b * p;
        }
    }
    let norm = w.norm();
    if norm > tol.sqrt() * 1e-2 * norm0 && norm > tol * norm0 {
        Some(w / c(norm, 0.0))
    } else {
        None
    }
}

/// A single vector cannot separate a simple module from a cyclic
/// non-simple one, so each probe lives in `M^{+dim M}`: its cyclic span is
/// `rho(A) X`, which is all of `End(M)` exactly when `M` is simple.
pub fn simplicity(m: &Module, seed: u64) -> Result<Simplicity> {
    if m.dim == 0 {
        return Err(Error::InvalidInput("zero-dimensional module".into()));
    }
    if !m.algebra.semisimple() {
        return Err(Error::NotSemisimple);
    }
    let commutant_dim = hom_space(m, m)?.len();
    let mut rng = numeric::rng(seed);
    let cyclic_dims = (0..CYCLIC_PROBES)
        .map(|_| cyclic_span_dim_multi(m, &numeric::random_matrix(&mut rng, m.dim, m.dim)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Simplicity { commutant_dim, cyclic_dims, dim: m.dim })
}

/// Simplicity by commutant dimension and by cyclic generation; the two
/// criteria must agree.
pub fn is_simple(m: &Module, seed: u64) -> Result<bool> {
    let s = simplicity(m, seed)?;
    if s.by_commutant() != s.by_cyclic_span() {
        return Err(Error::NumericalInconsistency(format!(
            "commutant dimension {} disagrees with cyclic spans {:?} (module dim {})",
            s.commutant_dim, s.cyclic_dims, s.dim
        )));
    }
    Ok(s.by_commutant())
}

/// The twisted module `^g M` with `a * m = g^{-1}(a) m`.
pub fn twist(m: &Module, g: usize, action: &AlgebraAction) -> Result<Module> {
    if !Arc::ptr_eq(&m.algebra, action.target()) {
        return Err(Error::ModuleAlgebraMismatch);
    }
    if g >= action.group().order() {
        return Err(Error::InvalidInput(format!("group element {g} out of range")));
    }
    let ginv = action.group().inv(g);
    let mat = action.mat(ginv);
    let n = m.algebra.dim();
    let rho = (0..n).map(|i| m.act(&mat.column(i).into_owned())).collect();
    Ok(Module::from_parts(m.algebra.clone(), rho, m.tol))
}

/// Restriction of scalars along a subalgebra embedding.
pub fn restrict(m: &Module, emb: &SubalgebraEmbedding) -> Result<Module> {
    if emb.inclusion.nrows() != m.algebra.dim() {
        return Err(Error::ModuleAlgebraMismatch);
    }
    let rho = (0..emb.sub.dim())
        .map(|j| m.act(&emb.inclusion.column(j).into_owned()))
        .collect();
    make_module(emb.sub.clone(), rho, m.tol)
}

/// Orthonormal basis of the `G`-invariant vectors of a module over the plain
/// group algebra `C[G]` (basis element `i` is group element `i`). Computed
/// as the image of `sum_g rho(g)` and cross-checked against the joint fixed
/// space of all `rho(g)`.
pub fn invariant_subspace(m: &Module, group: &FiniteGroup) -> Result<Mat> {
    let a = &m.algebra;
    let n = group.order();
    if a.dim() != n {
        return Err(Error::InvalidInput("module is not over a group algebra of this group".into()));
    }
    for g in 0..n {
        for h in 0..n {
            let prod = a.left(g).column(h).into_owned();
            let expect = numeric::basis_vector(n, group.mul(g, h));
            if (prod - expect).norm() > a.tol() {
                return Err(Error::InvalidInput(
                    "algebra is not the untwisted group algebra of this group".into(),
                ));
            }
        }
    }
    let d = m.dim;
    if d == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let mut sym = Mat::zeros(d, d);
    for g in 0..n {
        sym += &m.rho[g];
    }
    let image = numeric::range_scaled(&sym, m.tol, n as f64)?;
    let id = numeric::identity(d);
    let blocks: Vec<Mat> = m.rho.iter().map(|r| r - &id).collect();
    let fixed = numeric::nullspace_scaled(&numeric::vstack(&blocks, d), m.tol, 1.0)?;
    if fixed.ncols() != image.ncols() {
        return Err(Error::NumericalInconsistency(format!(
            "symmetrizer image has dimension {} but the fixed space has dimension {}",
            image.ncols(),
            fixed.ncols()
        )));
    }
    Ok(image)
}

/// Joint fixed space of a group-algebra module, as a separate computation
/// from [`invariant_subspace`].
pub fn joint_fixed_space(m: &Module) -> Result<Mat> {
    let d = m.dim;
    let id = numeric::identity(d);
    let blocks: Vec<Mat> = m.rho.iter().map(|r| r - &id).collect();
    numeric::nullspace_scaled(&numeric::vstack(&blocks, d), m.tol, 1.0)
}

/// One simple summand found by [`decompose`].
#[derive(Debug, Clone)]
pub struct Piece {
    /// Orthonormal basis (dim M x dim piece) in module coordinates.
    pub basis: Mat,
    pub class: usize,
    /// Isomorphism from the class representative onto this piece, in the
    /// coordinates of `basis`.
    pub from_rep: Mat,
}

#[derive(Debug, Clone)]
pub struct IsoClass {
    /// The representative `W`, carried by `rep_basis`.
    pub rep: Module,
    pub rep_basis: Mat,
    pub multiplicity: usize,
    /// Orthonormal basis of the isotypic component `M^W`.
    pub isotypic: Mat,
    /// Orthonormal basis of `{ f(w) : f in Hom(W, M) }` with `w` the first
    /// basis vector of the representative.
    pub multiplicity_space: Mat,
    /// Basis of `Hom(W, M)`, one map per piece of this class.
    pub homs: Vec<Mat>,
}

impl IsoClass {
    pub fn simple_dim(&self) -> usize {
        self.rep.dim()
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub pieces: Vec<Piece>,
    pub classes: Vec<IsoClass>,
    /// Seed of the commutant sample that succeeded.
    pub seed: u64,
}

impl Decomposition {
    pub fn total_dim(&self) -> usize {
        self.classes.iter().map(|c| c.simple_dim() * c.multiplicity).sum()
    }
}

pub fn decompose(m: &Module, seed: u64) -> Result<Decomposition> {
    precheck(m)?;
    let commutant = hom_space(m, m)?;
    decompose_with_commutant(m, &commutant, seed)
}

/// Decomposes the regular module of `algebra`, using right multiplications
/// as the (known) commutant.
pub fn decompose_regular(algebra: &Arc<Algebra>, seed: u64) -> Result<(Module, Decomposition)> {
    let reg = Module::regular(algebra);
    precheck(&reg)?;
    let commutant: Vec<Mat> = (0..algebra.dim())
        .map(|i| algebra.right_matrix(&algebra.basis(i)))
        .collect();
    let dec = decompose_with_commutant(&reg, &commutant, seed)?;
    Ok((reg, dec))
}

fn precheck(m: &Module) -> Result<()> {
    if m.dim == 0 {
        return Err(Error::InvalidInput("zero-dimensional module".into()));
    }
    if !m.algebra.semisimple() {
        return Err(Error::NotSemisimple);
    }
    Ok(())
}

fn decompose_with_commutant(m: &Module, commutant: &[Mat], seed: u64) -> Result<Decomposition> {
    let d = m.dim;
    let flat = numeric::hstack(
        &commutant.iter().map(|x| numeric::as_col(&numeric::vec_of(x))).collect::<Vec<Mat>>(),
        d * d,
    );
    let span = numeric::range(&flat, m.tol)?;
    if span.ncols() == 1 {
        let basis = numeric::identity(d);
        return Ok(build(m, vec![basis], seed)?.expect("single simple piece"));
    }
    let star_closed = (0..span.ncols()).all(|j| {
        let x = numeric::unvec(span.column(j).as_slice(), d, d);
        let xs = numeric::as_col(&numeric::vec_of(&x.adjoint()));
        numeric::projection_residual(&span, &xs) <= m.tol.sqrt() * 1e-2
    });
    for attempt in 0..=MAX_RETRIES {
        let s = seed.wrapping_add(attempt as u64);
        let mut rng = numeric::rng(s);
        let coeffs = numeric::random_vector(&mut rng, span.ncols());
        let x = numeric::unvec((&span * coeffs).as_slice(), d, d);
        let bases = if star_closed { hermitian_split(&x, m.tol)? } else { general_split(&x)? };
        if let Some(bases) = bases {
            if let Some(dec) = build(m, bases, s)? {
                return Ok(dec);
            }
        }
    }
    Err(Error::DegenerateSample { seed, attempts: MAX_RETRIES + 1 })
}

fn hermitian_split(x: &Mat, tol: f64) -> Result<Option<Vec<Mat>>> {
    let h = (x + x.adjoint()) * c(0.5, 0.0);
    let (vals, vecs) = numeric::eig_hermitian(&h, tol.max(1e-12))?;
    let radius = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if radius <= f64::MIN_POSITIVE {
        return Ok(None);
    }
    let mut groups: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..vals.len() {
        if vals[i] - vals[i - 1] > EIGEN_GAP * radius {
            groups.push(vec![i]);
        } else {
            groups.last_mut().expect("nonempty").push(i);
        }
    }
    Ok(Some(
        groups
            .iter()
            .map(|g| {
                let cols: Vec<Mat> = g.iter().map(|&i| numeric::col(&vecs, i)).collect();
                numeric::hstack(&cols, vecs.nrows())
            })
            .collect(),
    ))
}

fn general_split(x: &Mat) -> Result<Option<Vec<Mat>>> {
    let n = x.nrows();
    let vals = numeric::eigenvalues(x)?;
    let radius = vals.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    if radius <= f64::MIN_POSITIVE {
        return Ok(None);
    }
    // single-linkage clustering in the complex plane
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (vals[i] - vals[j]).norm() <= EIGEN_GAP * radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<(numeric::C64, usize)> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => {
                clusters[k].0 += vals[i];
                clusters[k].1 += 1;
            }
            None => {
                roots.push(r);
                clusters.push((vals[i], 1));
            }
        }
    }
    let mut clusters: Vec<(numeric::C64, usize)> = clusters
        .into_iter()
        .map(|(s, k)| (s / c(k as f64, 0.0), k))
        .collect();
    clusters.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let id = numeric::identity(n);
    let xnorm = x.norm();
    let mut bases = Vec::with_capacity(clusters.len());
    for (lambda, k) in clusters {
        let shifted = x - &id * lambda;
        let (vecs, svals) = numeric::smallest_right_singular(&shifted, k);
        if svals.last().copied().unwrap_or(0.0) > EIGEN_GAP * xnorm {
            return Ok(None);
        }
        bases.push(vecs);
    }
    Ok(Some(bases))
}

/// Turns candidate eigenspaces into a decomposition; `None` when a
/// candidate is not an invariant simple subspace (the sample was degenerate).
fn build(m: &Module, bases: Vec<Mat>, seed: u64) -> Result<Option<Decomposition>> {
    let d = m.dim;
    let all = numeric::hstack(&bases, d);
    if numeric::rank(&all, m.tol)? != d {
        return Ok(None);
    }
    let mut subs = Vec::with_capacity(bases.len());
    for b in &bases {
        if m.invariance_residual(b) > m.tol {
            return Ok(None);
        }
        let sub = m.compress(b);
        if bases.len() > 1 && hom_space(&sub, &sub)?.len() != 1 {
            return Ok(None);
        }
        subs.push(sub);
    }
    // classes in order of first appearance
    let mut reps: Vec<usize> = Vec::new();
    let mut assignment: Vec<(usize, Mat)> = Vec::with_capacity(subs.len());
    for (p, sub) in subs.iter().enumerate() {
        let mut found = None;
        for (cls, &r) in reps.iter().enumerate() {
            if subs[r].dim() != sub.dim() {
                continue;
            }
            let homs = hom_space(&subs[r], sub)?;
            match homs.len() {
                0 => {}
                1 => {
                    found = Some((cls, homs[0].clone()));
                    break;
                }
                k => {
                    return Err(Error::NumericalInconsistency(format!(
                        "hom space between simple pieces has dimension {k}"
                    )))
                }
            }
        }
        match found {
            Some((cls, x)) => {
                let scale = (sub.dim() as f64).sqrt() / x.norm();
                assignment.push((cls, x * c(scale, 0.0)));
            }
            None => {
                reps.push(p);
                assignment.push((reps.len() - 1, numeric::identity(sub.dim())));
            }
        }
    }
    // ascending by simple dimension, ties by first appearance
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&k| (subs[reps[k]].dim(), k));
    let mut relabel = vec![0; reps.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let pieces: Vec<Piece> = bases
        .iter()
        .zip(assignment)
        .map(|(b, (cls, x))| Piece { basis: b.clone(), class: relabel[cls], from_rep: x })
        .collect();
    let mut classes = Vec::with_capacity(reps.len());
    for &old in &order {
        let rep_index = reps[old];
        let cls = relabel[old];
        let members: Vec<&Piece> = pieces.iter().filter(|p| p.class == cls).collect();
        let iso_blocks: Vec<Mat> = members.iter().map(|p| p.basis.clone()).collect();
        let homs: Vec<Mat> = members.iter().map(|p| &p.basis * &p.from_rep).collect();
        let images: Vec<Mat> = homs.iter().map(|f| numeric::col(f, 0)).collect();
        classes.push(IsoClass {
            rep: subs[rep_index].clone(),
            rep_basis: bases[rep_index].clone(),
            multiplicity: members.len(),
            isotypic: numeric::range(&numeric::hstack(&iso_blocks, d), m.tol)?,
            multiplicity_space: numeric::range(&numeric::hstack(&images, d), m.tol)?,
            homs,
        });
    }
    Ok(Some(Decomposition { pieces, classes, seed }))
}

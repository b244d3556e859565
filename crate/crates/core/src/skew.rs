//! The skew group algebra `A # G`, its symmetrizer and corner, and the
//! module constructions that move between `A`, `A # H` and `A # G`.
//!
//! Basis element `(i, g)` (written `b_i g`) sits at index `i * |G| + g`, and
//! multiplication is `(b_i g)(b_j h) = (b_i g(b_j)) gh`.

use std::sync::Arc;

use crate::algebra::{corner_algebra, fixed_subalgebra, Algebra, SubalgebraEmbedding};
use crate::error::{Error, Result};
use crate::group_action::{left_cosets, AlgebraAction, FiniteGroup, Subgroup};
use crate::numeric::{self, c, Mat, Vector, ONE};
use crate::projective::{Cocycle, TwistedModule};
use crate::repmod::{make_module, Module};

#[derive(Debug, Clone)]
pub struct SkewAlgebra {
    action: AlgebraAction,
    /// The acting group as a subgroup of some ambient group; the whole group
    /// unless built by [`sub_skew`].
    subgroup: Subgroup,
    ambient: FiniteGroup,
    alg: Arc<Algebra>,
}

pub fn skew_group_algebra(action: &AlgebraAction) -> Result<SkewAlgebra> {
    let whole = action.group().whole();
    build(action.clone(), whole, action.group().clone())
}

/// `A # H` for a subgroup `H`, with the group indexed locally.
pub fn sub_skew(s: &SkewAlgebra, h: &Subgroup) -> Result<SkewAlgebra> {
    if s.subgroup.order() != s.ambient.order() {
        return Err(Error::InvalidInput("sub_skew expects the full skew algebra".into()));
    }
    for &g in &h.elements {
        if g >= s.group().order() {
            return Err(Error::NotASubgroup(format!("element {g} out of range")));
        }
    }
    let checked = s.group().subgroup(&h.elements)?;
    build(s.action.restrict(&checked), checked, s.ambient.clone())
}

fn build(action: AlgebraAction, subgroup: Subgroup, ambient: FiniteGroup) -> Result<SkewAlgebra> {
    let a = action.target().clone();
    let group = action.group();
    let (n, m) = (a.dim(), group.order());
    let dim = n * m;
    let mut left = Vec::with_capacity(dim);
    for i in 0..n {
        for g in 0..m {
            let block = a.left(i) * action.mat(g);
            let mut l = Mat::zeros(dim, dim);
            for h in 0..m {
                let gh = group.mul(g, h);
                for j in 0..n {
                    for k in 0..n {
                        let v = block[(k, j)];
                        if v != numeric::ZERO {
                            l[(k * m + gh, j * m + h)] = v;
                        }
                    }
                }
            }
            left.push(l);
        }
    }
    let mut unit = Vector::zeros(dim);
    for i in 0..n {
        unit[i * m + group.identity()] = a.unit()[i];
    }
    let labels = (0..n)
        .flat_map(|i| {
            let a = a.clone();
            (0..m).map(move |g| format!("{}*g{g}", a.labels()[i]))
        })
        .collect();
    let mut generators: Vec<Vector> = (0..n).map(|i| embed_a_coords(&a.basis(i), m, group.identity())).collect();
    generators.extend((0..m).filter(|&g| g != group.identity()).map(|g| embed_g_coords(&a, m, g)));
    let alg = Algebra::from_left(left, unit, action.tol())?
        .with_labels(labels)
        .with_generators(generators);
    Ok(SkewAlgebra { action, subgroup, ambient, alg: Arc::new(alg) })
}

fn embed_a_coords(x: &Vector, m: usize, e: usize) -> Vector {
    let mut out = Vector::zeros(x.len() * m);
    for (i, &v) in x.iter().enumerate() {
        out[i * m + e] = v;
    }
    out
}

fn embed_g_coords(a: &Algebra, m: usize, g: usize) -> Vector {
    let mut out = Vector::zeros(a.dim() * m);
    for (i, &v) in a.unit().iter().enumerate() {
        out[i * m + g] = v;
    }
    out
}

impl SkewAlgebra {
    pub fn base(&self) -> &Arc<Algebra> {
        self.action.target()
    }

    /// The acting group with local indices.
    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn action(&self) -> &AlgebraAction {
        &self.action
    }

    pub fn alg(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn ambient(&self) -> &FiniteGroup {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn tol(&self) -> f64 {
        self.action.tol()
    }

    pub fn index(&self, i: usize, g: usize) -> usize {
        i * self.group().order() + g
    }

    pub fn embed_a(&self, x: &Vector) -> Vector {
        embed_a_coords(x, self.group().order(), self.group().identity())
    }

    pub fn embed_g(&self, g: usize) -> Vector {
        embed_g_coords(self.base(), self.group().order(), g)
    }

    /// dim(A # G) x dim(A) coordinate matrix of `embed_a`.
    pub fn embed_a_matrix(&self) -> Mat {
        let n = self.base().dim();
        let mut out = Mat::zeros(self.dim(), n);
        for i in 0..n {
            out.set_column(i, &self.embed_a(&numeric::basis_vector(n, i)));
        }
        out
    }
}

/// The idempotent `e = |G|^-1 sum_g g`.
pub fn symmetrizer(s: &SkewAlgebra) -> Vector {
    let m = s.group().order();
    let mut e = Vector::zeros(s.dim());
    for g in 0..m {
        e += s.embed_g(g);
    }
    e / c(m as f64, 0.0)
}

/// The corner algebra `e (A # G) e`.
pub fn corner(s: &SkewAlgebra) -> Result<SubalgebraEmbedding> {
    corner_algebra(&s.alg, &symmetrizer(s), s.tol())
}

/// Numerical evidence that `Phi: A^G -> e(A # G)e, a -> ae` is an algebra
/// isomorphism and that `Psi: A -> (A # G)e, a -> ae` is an isomorphism of
/// `(A # G, A^G)`-bimodules.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiPsiCheck {
    pub dim_invariant: usize,
    pub dim_corner: usize,
    pub phi_rank: usize,
    /// Coordinates of `Phi` against the corner basis (dim corner x dim A^G).
    pub phi: Mat,
    pub phi_image_residual: f64,
    pub phi_mult_residual: f64,
    pub phi_unit_residual: f64,
    pub dim_base: usize,
    pub dim_psi_target: usize,
    pub psi_rank: usize,
    pub psi_left_residual: f64,
    pub psi_right_residual: f64,
    pub idempotent_residual: f64,
    pub commute_residual: f64,
}

impl PhiPsiCheck {
    pub fn phi_bijective(&self) -> bool {
        self.dim_invariant == self.dim_corner && self.phi_rank == self.dim_corner
    }

    pub fn psi_bijective(&self) -> bool {
        self.dim_base == self.dim_psi_target && self.psi_rank == self.dim_base
    }

    pub fn max_residual(&self) -> f64 {
        [
            self.phi_image_residual,
            self.phi_mult_residual,
            self.phi_unit_residual,
            self.psi_left_residual,
            self.psi_right_residual,
            self.idempotent_residual,
            self.commute_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.phi_bijective() && self.psi_bijective() && self.max_residual() <= tol
    }
}

fn rel(diff: f64, a: f64, b: f64) -> f64 {
    diff / a.max(b).max(1.0)
}

pub fn check_phi_psi(s: &SkewAlgebra) -> Result<PhiPsiCheck> {
    let inv = fixed_subalgebra(&s.action)?;
    let cor = corner(s)?;
    check_phi_psi_with(s, &inv, &cor)
}

/// As [`check_phi_psi`] against given `A^G` and corner embeddings, so that
/// `phi` is expressed in the caller's bases.
pub fn check_phi_psi_with(
    s: &SkewAlgebra,
    inv: &SubalgebraEmbedding,
    cor: &SubalgebraEmbedding,
) -> Result<PhiPsiCheck> {
    let tol = s.tol();
    let alg = &s.alg;
    let base = s.base();
    let e = symmetrizer(s);
    let emb_a = s.embed_a_matrix();
    let re = alg.right_matrix(&e);

    let ee = alg.mul(&e, &e);
    let idempotent_residual = rel((&ee - &e).norm(), ee.norm(), e.norm());
    let mut commute_residual: f64 = 0.0;
    for j in 0..inv.sub.dim() {
        let a = s.embed_a(&inv.inclusion.column(j).into_owned());
        let (ea, ae) = (alg.mul(&e, &a), alg.mul(&a, &e));
        commute_residual = commute_residual.max(rel((&ea - &ae).norm(), ea.norm(), ae.norm()));
    }
    for g in 0..s.group().order() {
        let h = s.embed_g(g);
        let (eh, he) = (alg.mul(&e, &h), alg.mul(&h, &e));
        commute_residual = commute_residual.max(rel((&eh - &he).norm(), eh.norm(), he.norm()));
    }

    // Phi in skew coordinates, then against the orthonormal corner basis
    let phi_full = &re * &emb_a * &inv.inclusion;
    let phi = cor.inclusion.adjoint() * &phi_full;
    let phi_image_residual =
        rel((&phi_full - &cor.inclusion * &phi).norm(), phi_full.norm(), 0.0);
    let phi_rank = numeric::rank(&phi, tol)?;
    let k = inv.sub.dim();
    let mut phi_mult_residual: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let (a, b) = (inv.sub.basis(i), inv.sub.basis(j));
            let lhs = &phi_full * inv.sub.mul(&a, &b);
            let rhs = alg.mul(&(&phi_full * &a), &(&phi_full * &b));
            phi_mult_residual = phi_mult_residual.max(rel((&lhs - &rhs).norm(), lhs.norm(), rhs.norm()));
        }
    }
    let phi_unit = &phi_full * inv.sub.unit();
    let phi_unit_residual = rel((&phi_unit - &e).norm(), e.norm(), 0.0);

    // Psi: a -> ae into (A # G)e
    let psi = &re * &emb_a;
    let target = numeric::range(&re, tol)?;
    let psi_rank = numeric::rank(&psi, tol)?;
    let nat = natural_module(s);
    let mut psi_left_residual: f64 = 0.0;
    for x in alg.generators() {
        let lhs = alg.left_matrix(x) * &psi;
        let rhs = &psi * nat.act(x);
        psi_left_residual = psi_left_residual.max(rel((&lhs - &rhs).norm(), lhs.norm(), rhs.norm()));
    }
    let mut psi_right_residual: f64 = 0.0;
    for j in 0..k {
        let cj = inv.inclusion.column(j).into_owned();
        let lhs = alg.right_matrix(&s.embed_a(&cj)) * &psi;
        let rhs = &psi * base.right_matrix(&cj);
        psi_right_residual = psi_right_residual.max(rel((&lhs - &rhs).norm(), lhs.norm(), rhs.norm()));
    }
    Ok(PhiPsiCheck {
        dim_invariant: k,
        dim_corner: cor.sub.dim(),
        phi_rank,
        phi,
        phi_image_residual,
        phi_mult_residual,
        phi_unit_residual,
        dim_base: base.dim(),
        dim_psi_target: target.ncols(),
        psi_rank,
        psi_left_residual,
        psi_right_residual,
        idempotent_residual,
        commute_residual,
    })
}

/// `eN` as a module over the corner: carrier is the image of `rho_N(e)`.
/// A zero-dimensional result is returned as such.
pub fn corner_module(n: &Module, s: &SkewAlgebra, cor: &SubalgebraEmbedding) -> Result<(Module, Mat)> {
    if !Arc::ptr_eq(n.algebra(), &s.alg) || cor.inclusion.nrows() != s.dim() {
        return Err(Error::ModuleAlgebraMismatch);
    }
    let e = symmetrizer(s);
    let image = numeric::range_scaled(&n.act(&e), n.tol(), 1.0)?;
    let adj = image.adjoint();
    let rho = (0..cor.sub.dim())
        .map(|j| &adj * n.act(&cor.inclusion.column(j).into_owned()) * &image)
        .collect::<Vec<_>>();
    if image.ncols() == 0 {
        return Ok((Module::from_parts(cor.sub.clone(), rho, n.tol()), image));
    }
    Ok((make_module(cor.sub.clone(), rho, n.tol())?, image))
}

/// `A` as an `A # G`-module: `(b g) . a = b g(a)`.
pub fn natural_module(s: &SkewAlgebra) -> Module {
    let base = s.base();
    let m = s.group().order();
    let rho = (0..s.dim())
        .map(|k| base.left(k / m) * s.action.mat(k % m))
        .collect();
    Module::from_parts(s.alg.clone(), rho, s.tol())
}

/// `Ind_{A # H}^{A # G} M` on `k * dim M` coordinates, coset representative
/// major. Representative order follows [`left_cosets`].
pub fn induce(m: &Module, sub: &SkewAlgebra, s: &SkewAlgebra) -> Result<Module> {
    if !Arc::ptr_eq(m.algebra(), &sub.alg) {
        return Err(Error::ModuleAlgebraMismatch);
    }
    if !Arc::ptr_eq(sub.base(), s.base()) || sub.ambient() != s.group() {
        return Err(Error::ModuleAlgebraMismatch);
    }
    let g = s.group();
    let h = sub.subgroup();
    let reps = left_cosets(g, &h.elements)?;
    let k = reps.len();
    let d = m.dim();
    let n = s.base().dim();
    let order = g.order();
    let mut rho = Vec::with_capacity(s.dim());
    // block (l, i) for group element x: x g_i = g_l h
    let mut routes = vec![vec![(0usize, 0usize); k]; order];
    for (x, route) in routes.iter_mut().enumerate() {
        for (i, &gi) in reps.iter().enumerate() {
            let xgi = g.mul(x, gi);
            let (l, hl) = reps
                .iter()
                .enumerate()
                .find_map(|(l, &gl)| h.local(g.mul(g.inv(gl), xgi)).map(|hl| (l, hl)))
                .ok_or_else(|| Error::NumericalInconsistency("coset lookup failed".into()))?;
            route[i] = (l, hl);
        }
    }
    let sub_order = h.order();
    for j in 0..n {
        for x in 0..order {
            let mut big = Mat::zeros(k * d, k * d);
            for (i, &(l, hl)) in routes[x].iter().enumerate() {
                let back = s.action.mat(g.inv(reps[l]));
                let mut block = Mat::zeros(d, d);
                for t in 0..n {
                    let coef = back[(t, j)];
                    if coef != numeric::ZERO {
                        block += m.rho(t * sub_order + hl) * coef;
                    }
                }
                big.view_mut((l * d, i * d), (d, d)).copy_from(&block);
            }
            rho.push(big);
        }
    }
    make_module(s.alg.clone(), rho, m.tol())
}

/// The module `M (x) V` over `A # G_M` with `(a h)(m (x) v) = a phi(h) m (x) c_h v`.
/// `V` must be a module over the twisted group algebra whose structure
/// constants are the inverse of the cocycle of `phi`.
pub fn extend_to_skew(
    m: &Module,
    phi: &[Mat],
    cocycle: &Cocycle,
    v: &TwistedModule,
    t: &SkewAlgebra,
) -> Result<Module> {
    if !Arc::ptr_eq(m.algebra(), t.base()) {
        return Err(Error::ModuleAlgebraMismatch);
    }
    let order = t.group().order();
    if phi.len() != order || cocycle.order() != order || v.twisted.group.order() != order {
        return Err(Error::InvalidInput("intertwiners, cocycle and group disagree in size".into()));
    }
    let tol = m.tol();
    for h in 0..order {
        for k in 0..order {
            let want = ONE / cocycle.get(h, k);
            let have = v.twisted.coefficient(h, k);
            let r = (have - want).norm() / want.norm().max(1.0);
            if r > tol {
                return Err(Error::CocycleMismatch { h, k, residual: r });
            }
        }
    }
    let n = t.base().dim();
    let mut rho = Vec::with_capacity(t.dim());
    for i in 0..n {
        for h in 0..order {
            let left = m.rho(i) * &phi[h];
            rho.push(numeric::kron(&left, v.module.rho(h)));
        }
    }
    make_module(t.alg.clone(), rho, tol)
}

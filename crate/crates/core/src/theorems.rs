//! End-to-end verification pipelines producing [`VerificationReport`]s.
//!
//! Every check records the dimensions and residuals it decided on; a
//! failed check always carries a witness string.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{fixed_subalgebra, SubalgebraEmbedding};
use crate::error::{Error, Result};
use crate::group_action::{left_cosets, AlgebraAction};
use crate::numeric::{self, Mat};
use crate::projective::{
    contragredient, dual_tensor, inertia, projective_isotypics, twisted_group_algebra, ProjectiveIsotypics,
    ProjectiveSystem, TwistedModule,
};
use crate::repmod::{
    self, decompose, decompose_regular, hom_space, invariant_subspace, joint_fixed_space, restrict, simplicity,
    Module,
};
use crate::skew::{
    check_phi_psi_with, corner, corner_module, extend_to_skew, induce, skew_group_algebra, sub_skew, SkewAlgebra,
};

/// Number of random triples in the skew associativity check.
pub const ASSOCIATIVITY_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub dims: BTreeMap<String, usize>,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            pass: true,
            dims: BTreeMap::new(),
            residuals: BTreeMap::new(),
            witness: None,
        }
    }

    pub fn dim(mut self, key: &str, value: usize) -> Self {
        self.dims.insert(key.into(), value);
        self
    }

    pub fn residual(mut self, key: &str, value: f64) -> Self {
        self.residuals.insert(key.into(), value);
        self
    }

    /// Requires `cond`; on failure records `witness`.
    pub fn require(mut self, cond: bool, witness: impl FnOnce() -> String) -> Self {
        if !cond {
            self.pass = false;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
        self
    }

    /// Requires `residuals[key] <= tol`.
    pub fn bounded(self, key: &str, value: f64, tol: f64) -> Self {
        let rec = self.residual(key, value);
        rec.require(value <= tol, || format!("{key} = {value:.3e} exceeds {tol:.1e}"))
    }

    pub fn equal(self, a_key: &str, a: usize, b_key: &str, b: usize) -> Self {
        self.dim(a_key, a)
            .dim(b_key, b)
            .require(a == b, || format!("{a_key} = {a} but {b_key} = {b}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub instance: String,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(instance: impl Into<String>, seed: u64, tol: f64) -> Self {
        VerificationReport { instance: instance.into(), seed, tol, checks: Vec::new() }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Isomorphism certificate: equal dimension, a nonzero hom space, and a
/// random element of it that is invertible.
pub fn certify_isomorphism(a: &Module, b: &Module, seed: u64, name: &str) -> Result<CheckRecord> {
    let homs = hom_space(a, b)?;
    let mut rec = CheckRecord::new(name)
        .equal("dim_source", a.dim(), "dim_target", b.dim())
        .dim("hom_dim", homs.len())
        .require(!homs.is_empty(), || "hom space is zero".into());
    if !homs.is_empty() && a.dim() == b.dim() {
        let mut rng = numeric::rng(seed);
        let mut x = Mat::zeros(b.dim(), a.dim());
        for h in &homs {
            x += h * numeric::random_scalar(&mut rng);
        }
        let r = numeric::rank(&x, a.tol().max(b.tol()))?;
        rec = rec.dim("sampled_hom_rank", r).require(r == a.dim(), || format!("sampled hom has rank {r}"));
    }
    Ok(rec)
}

fn simplicity_record(m: &Module, seed: u64, name: &str) -> Result<CheckRecord> {
    let s = simplicity(m, seed)?;
    let agree = s.by_commutant() == s.by_cyclic_span();
    if !agree {
        return Err(Error::NumericalInconsistency(format!(
            "{name}: commutant dimension {} disagrees with cyclic spans {:?}",
            s.commutant_dim, s.cyclic_dims
        )));
    }
    let min_cyclic = s.cyclic_dims.iter().copied().min().unwrap_or(0);
    Ok(CheckRecord::new(name)
        .dim("module_dim", s.dim)
        .dim("commutant_dim", s.commutant_dim)
        .dim("min_cyclic_span_dim", min_cyclic)
        .require(s.by_commutant(), || format!("commutant dimension {}", s.commutant_dim)))
}

/// Associativity of `A # G` on random triples, plus the unit law.
pub fn check_skew_product(s: &SkewAlgebra, instance: &str, seed: u64) -> VerificationReport {
    let tol = s.tol();
    let mut report = VerificationReport::new(instance, seed, tol);
    let alg = s.alg();
    let mut rng = numeric::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..ASSOCIATIVITY_SAMPLES {
        let x = numeric::random_vector(&mut rng, alg.dim());
        let y = numeric::random_vector(&mut rng, alg.dim());
        let z = numeric::random_vector(&mut rng, alg.dim());
        worst = worst.max(alg.associativity_residual(&x, &y, &z));
    }
    report.push(
        CheckRecord::new("skew_associativity")
            .dim("skew_dim", alg.dim())
            .dim("base_dim", s.base().dim())
            .dim("group_order", s.group().order())
            .dim("samples", ASSOCIATIVITY_SAMPLES)
            .bounded("max_relative_residual", worst, tol),
    );
    let x = numeric::random_vector(&mut rng, alg.dim());
    let ux = alg.mul(alg.unit(), &x);
    let xu = alg.mul(&x, alg.unit());
    let unit_res = ((&ux - &x).norm()).max((&xu - &x).norm()) / x.norm();
    report.push(CheckRecord::new("skew_unit").bounded("unit_residual", unit_res, tol));
    report
}

/// The corner isomorphisms `Phi` and `Psi`, with the corner span computed
/// independently of `A^G`.
pub fn check_phi_psi_report(s: &SkewAlgebra, instance: &str, seed: u64) -> Result<VerificationReport> {
    let tol = s.tol();
    let inv = fixed_subalgebra(s.action())?;
    let cor = corner(s)?;
    let chk = check_phi_psi_with(s, &inv, &cor)?;
    let mut report = VerificationReport::new(instance, seed, tol);
    report.push(
        CheckRecord::new("symmetrizer")
            .bounded("idempotent_residual", chk.idempotent_residual, tol)
            .bounded("commute_residual", chk.commute_residual, tol),
    );
    report.push(
        CheckRecord::new("phi_isomorphism")
            .equal("invariant_dim", chk.dim_invariant, "corner_dim", chk.dim_corner)
            .equal("phi_rank", chk.phi_rank, "corner_dim_check", chk.dim_corner)
            .bounded("image_residual", chk.phi_image_residual, tol)
            .bounded("mult_residual", chk.phi_mult_residual, tol)
            .bounded("unit_residual", chk.phi_unit_residual, tol),
    );
    report.push(
        CheckRecord::new("psi_bimodule_isomorphism")
            .equal("base_dim", chk.dim_base, "target_dim", chk.dim_psi_target)
            .equal("psi_rank", chk.psi_rank, "base_dim_check", chk.dim_base)
            .bounded("left_residual", chk.psi_left_residual, tol)
            .bounded("right_residual", chk.psi_right_residual, tol),
    );
    Ok(report)
}

/// `eN` is simple over the corner for every simple `N` with `eN != 0`,
/// and every simple corner module arises this way.
pub fn check_invariant_theory(s: &SkewAlgebra, instance: &str, seed: u64) -> Result<VerificationReport> {
    let tol = s.tol();
    if !s.base().semisimple() {
        return Err(Error::NotSemisimple);
    }
    let mut report = VerificationReport::new(instance, seed, tol);
    let (_, dec) = decompose_regular(s.alg(), seed)?;
    let cor = corner(s)?;
    let mut corner_modules = Vec::new();
    for (k, class) in dec.classes.iter().enumerate() {
        let (en, _) = corner_module(&class.rep, s, &cor)?;
        let name = format!("corner_simple/{k}");
        if en.dim() == 0 {
            report.push(CheckRecord::new(name).dim("simple_dim", class.rep.dim()).dim("corner_module_dim", 0));
            continue;
        }
        let rec = simplicity_record(&en, seed, &name)?.dim("simple_dim", class.rep.dim());
        report.push(rec);
        corner_modules.push(en);
    }
    let (_, cdec) = decompose_regular(&cor.sub, seed)?;
    let mut hit = vec![false; cdec.classes.len()];
    for (c, class) in cdec.classes.iter().enumerate() {
        for en in &corner_modules {
            if en.dim() == class.rep.dim() && !hom_space(&class.rep, en)?.is_empty() {
                hit[c] = true;
                break;
            }
        }
    }
    let missed: Vec<usize> = hit.iter().enumerate().filter(|(_, h)| !**h).map(|(c, _)| c).collect();
    report.push(
        CheckRecord::new("corner_surjective")
            .dim("skew_classes", dec.classes.len())
            .equal("nonzero_corner_classes", corner_modules.len(), "corner_classes", cdec.classes.len())
            .dim("corner_dim", cor.sub.dim())
            .require(missed.is_empty(), || format!("corner classes {missed:?} not reached")),
    );
    Ok(report)
}

/// A simple `A # G`-module is induced from `A^l (x) H^nu` over its inertia.
pub fn clifford_correspondence(
    n: &Module,
    s: &SkewAlgebra,
    instance: &str,
    seed: u64,
) -> Result<VerificationReport> {
    if !Arc::ptr_eq(n.algebra(), s.alg()) {
        return Err(Error::ModuleAlgebraMismatch);
    }
    let tol = n.tol();
    if !repmod::is_simple(n, seed)? {
        return Err(Error::NotSimple);
    }
    let mut report = VerificationReport::new(instance, seed, tol);
    let emb = SubalgebraEmbedding { sub: s.base().clone(), inclusion: s.embed_a_matrix() };
    let res = restrict(n, &emb)?;
    let dec = decompose(&res, seed)?;
    let u = dec.pieces[0].basis.clone();
    let a_lambda = res.submodule(&u)?;
    let system = inertia(&a_lambda, s.action(), seed)?;
    let h = &system.inertia;

    // P = sum over the inertia of h . A^l, inside N
    let moved: Vec<Mat> = h.elements.iter().map(|&g| n.act(&s.embed_g(g)) * &u).collect();
    let p_basis = numeric::range(&numeric::hstack(&moved, n.dim()), tol)?;
    let p_mod = res.submodule(&p_basis)?;
    let h_nu = hom_space(&a_lambda, &p_mod)?;
    let nu = h_nu.len();

    // T -> rho_P(h) T phi(h)^-1 makes Hom_A(A^l, P) a module for the exponent -1 algebra
    let adj = p_basis.adjoint();
    let mut rho = Vec::with_capacity(h.order());
    for (local, &g) in h.elements.iter().enumerate() {
        let rp = &adj * n.act(&s.embed_g(g)) * &p_basis;
        let phi_inv = numeric::inverse(&system.phi[local])?;
        let mut m = Mat::zeros(nu, nu);
        for (j, tj) in h_nu.iter().enumerate() {
            let img = &rp * tj * &phi_inv;
            for (i, ti) in h_nu.iter().enumerate() {
                m[(i, j)] = ti.dotc(&img);
            }
        }
        rho.push(m);
    }
    let tga = Arc::new(twisted_group_algebra(&system.cocycle, -1, tol)?);
    let v = TwistedModule::new(tga, rho, tol)?;
    let t = sub_skew(s, h)?;
    let ext = extend_to_skew(&a_lambda, &system.phi, &system.cocycle, &v, &t)?;
    let ind = induce(&ext, &t, s)?;
    let index = left_cosets(s.group(), &h.elements)?.len();

    report.push(
        CheckRecord::new("inertia")
            .dim("inertia_order", h.order())
            .dim("index", index)
            .bounded("intertwiner_residual", system.intertwiner_residual(), tol)
            .bounded("cocycle_identity_residual", system.cocycle.identity_residual().0, tol),
    );
    report.push(simplicity_record(&v.module, seed, "multiplicity_module_simple")?.dim("h_nu_dim", nu));
    report.push(
        CheckRecord::new("dimension_accounting")
            .dim("simple_a_dim", a_lambda.dim())
            .dim("h_nu_dim", nu)
            .equal("n_dim", n.dim(), "predicted_dim", a_lambda.dim() * nu * index),
    );
    report.push(certify_isomorphism(&ind, n, seed, "induced_isomorphic")?);
    Ok(report)
}

/// The simple module `Ind(M (x) W*)` together with its ingredients.
#[derive(Debug, Clone)]
pub struct InducedData {
    pub w: TwistedModule,
    pub w_dual: TwistedModule,
    pub sub: SkewAlgebra,
    /// `M (x) W*` over `A # G_M`.
    pub extended: Module,
    pub induced: Module,
    pub index: usize,
}

pub fn build_induced(
    system: &ProjectiveSystem,
    iso: &ProjectiveIsotypics,
    gamma: usize,
    s: &SkewAlgebra,
) -> Result<InducedData> {
    let w = iso.representative(gamma);
    let w_dual = contragredient(&w)?;
    let sub = sub_skew(s, &system.inertia)?;
    let extended = extend_to_skew(&system.module, &system.phi, &system.cocycle, &w_dual, &sub)?;
    let induced = induce(&extended, &sub, s)?;
    let index = left_cosets(s.group(), &system.inertia.elements)?.len();
    Ok(InducedData { w, w_dual, sub, extended, induced, index })
}

/// `Ind(M (x) W_gamma*)` is simple and has the predicted dimension.
pub fn induced_simplicity(
    system: &ProjectiveSystem,
    iso: &ProjectiveIsotypics,
    gamma: usize,
    s: &SkewAlgebra,
    instance: &str,
    seed: u64,
) -> Result<VerificationReport> {
    let tol = system.module.tol();
    let data = build_induced(system, iso, gamma, s)?;
    let mut report = VerificationReport::new(instance, seed, tol);
    let predicted = data.index * system.module.dim() * data.w.dim();
    report.push(
        CheckRecord::new(format!("induced_dimension/{gamma}"))
            .dim("index", data.index)
            .dim("module_dim", system.module.dim())
            .dim("w_dim", data.w.dim())
            .equal("induced_dim", data.induced.dim(), "predicted_dim", predicted),
    );
    let s_rec = simplicity(&data.induced, seed)?;
    let min_cyclic = s_rec.cyclic_dims.iter().copied().min().unwrap_or(0);
    report.push(
        CheckRecord::new(format!("induced_simple/{gamma}"))
            .dim("commutant_dim", s_rec.commutant_dim)
            .dim("min_cyclic_span_dim", min_cyclic)
            .require(s_rec.by_commutant(), || format!("commutant dimension {}", s_rec.commutant_dim))
            .require(s_rec.by_cyclic_span(), || format!("cyclic spans {:?}", s_rec.cyclic_dims)),
    );
    Ok(report)
}

/// `dim Hom(M, N) = dim Inv(M* (x) N)`, with the invariants computed both as
/// the symmetrizer image and as the joint fixed space.
pub fn hom_inv_check(m: &TwistedModule, n: &TwistedModule, instance: &str, seed: u64) -> Result<VerificationReport> {
    let tol = m.module.tol().max(n.module.tol());
    let homs = hom_space(&m.module, &n.module)?;
    let t = dual_tensor(m, n)?;
    let fixed = joint_fixed_space(&t)?;
    let image = invariant_subspace(&t, &m.twisted.group)?;
    let mut report = VerificationReport::new(instance, seed, tol);
    report.push(
        CheckRecord::new("hom_equals_invariants")
            .equal("hom_dim", homs.len(), "symmetrizer_image_dim", image.ncols())
            .equal("fixed_space_dim", fixed.ncols(), "symmetrizer_image_dim_check", image.ncols()),
    );
    Ok(report)
}

/// `hom_equals_invariants` for every ordered pair among `W` (the module
/// over the twisted group algebra of its inertia) and the simple classes
/// `W_gamma` occurring in it.
pub fn hom_inv_pairs(m: &Module, action: &AlgebraAction, instance: &str, seed: u64) -> Result<VerificationReport> {
    let system = inertia(m, action, seed)?;
    let iso = projective_isotypics(&system, seed)?;
    let mut mods = vec![("w".to_string(), iso.twisted_module.clone())];
    for gamma in 0..iso.decomposition.classes.len() {
        mods.push((format!("w{gamma}"), iso.representative(gamma)));
    }
    let mut report = VerificationReport::new(instance, seed, m.tol());
    for (a_name, a) in &mods {
        for (b_name, b) in &mods {
            for mut rec in hom_inv_check(a, b, instance, seed)?.checks {
                rec.name = format!("{}/{a_name},{b_name}", rec.name);
                report.push(rec);
            }
        }
    }
    Ok(report)
}

/// Semisimplicity of `A` and of `A # G` through their trace forms.
pub fn check_semisimple(action: &AlgebraAction, instance: &str, seed: u64) -> Result<VerificationReport> {
    let a = action.target();
    let s = skew_group_algebra(action)?;
    let mut report = VerificationReport::new(instance, seed, action.tol());
    report.push(
        CheckRecord::new("base_semisimple")
            .dim("algebra_dim", a.dim())
            .require(a.semisimple(), || "trace form of A is degenerate".into()),
    );
    report.push(
        CheckRecord::new("skew_semisimple")
            .dim("skew_dim", s.dim())
            .require(s.alg().semisimple(), || "trace form of A # G is degenerate".into()),
    );
    Ok(report)
}

/// The inertia subgroup of `M`: intertwiners exist on it and nowhere else.
pub fn check_inertia(m: &Module, action: &AlgebraAction, instance: &str, seed: u64) -> Result<VerificationReport> {
    let tol = m.tol();
    let system = inertia(m, action, seed)?;
    let outside: Vec<usize> = (0..action.group().order())
        .filter(|g| !system.inertia.contains(*g))
        .collect();
    let mut stray = Vec::new();
    for &g in &outside {
        if !hom_space(m, &repmod::twist(m, g, action)?)?.is_empty() {
            stray.push(g);
        }
    }
    let mut report = VerificationReport::new(instance, seed, tol);
    report.push(
        CheckRecord::new("inertia")
            .dim("module_dim", m.dim())
            .dim("group_order", action.group().order())
            .dim("inertia_order", system.inertia.order())
            .bounded("intertwiner_residual", system.intertwiner_residual(), tol),
    );
    report.push(
        CheckRecord::new("outside_inertia")
            .dim("elements_checked", outside.len())
            .require(stray.is_empty(), || format!("elements {stray:?} fix the class of M")),
    );
    Ok(report)
}

/// The cocycle of the normalised intertwiners: exact normalisation, the
/// cocycle identity and `phi(h) phi(k) = alpha(h, k) phi(hk)`.
pub fn check_cocycle(m: &Module, action: &AlgebraAction, instance: &str, seed: u64) -> Result<VerificationReport> {
    let tol = m.tol();
    let system = inertia(m, action, seed)?;
    let alpha = &system.cocycle;
    let h = alpha.group();
    let mut product: f64 = 0.0;
    for a in 0..h.order() {
        for b in 0..h.order() {
            let lhs = &system.phi[a] * &system.phi[b];
            let rhs = &system.phi[h.mul(a, b)] * alpha.get(a, b);
            product = product.max((&lhs - &rhs).norm() / rhs.norm().max(1.0));
        }
    }
    let mut report = VerificationReport::new(instance, seed, tol);
    report.push(
        CheckRecord::new("cocycle_normalized")
            .dim("inertia_order", h.order())
            .require(alpha.normalized_exactly(), || "alpha(1, h) or alpha(h, 1) differs from 1".into()),
    );
    report.push(
        CheckRecord::new("cocycle_identity")
            .bounded("identity_residual", alpha.identity_residual().0, tol)
            .residual("modulus_deviation", alpha.modulus_deviation()),
    );
    report.push(CheckRecord::new("projective_products").bounded("product_residual", product, tol));
    Ok(report)
}

fn span_equal(a: &Mat, b: &Mat, tol: f64) -> Result<(bool, usize, usize, usize)> {
    let rows = a.nrows();
    let ra = numeric::rank_scaled(a, tol, 1.0)?;
    let rb = numeric::rank_scaled(b, tol, 1.0)?;
    let rab = numeric::rank_scaled(&numeric::hstack(&[a.clone(), b.clone()], rows), tol, 1.0)?;
    Ok((ra == rb && rb == rab, ra, rb, rab))
}

/// The multiplicity spaces `M_gamma` are simple over `A^G`, by direct
/// restriction and through the corner of the induced module.
pub fn main_theorem(m: &Module, action: &AlgebraAction, instance: &str, seed: u64) -> Result<VerificationReport> {
    let tol = m.tol();
    if !m.algebra().semisimple() {
        return Err(Error::NotSemisimple);
    }
    let system = inertia(m, action, seed)?;
    let iso = projective_isotypics(&system, seed)?;
    let inv = fixed_subalgebra(action)?;
    let res = restrict(m, &inv)?;
    let s = skew_group_algebra(action)?;
    let cor = corner(&s)?;
    let phi = check_phi_psi_with(&s, &inv, &cor)?;
    let mut report = VerificationReport::new(instance, seed, tol);
    report.push(
        CheckRecord::new("projective_system")
            .dim("inertia_order", system.inertia.order())
            .dim("classes", iso.decomposition.classes.len())
            .dim("invariant_dim", inv.sub.dim())
            .bounded("intertwiner_residual", system.intertwiner_residual(), tol)
            .bounded("cocycle_identity_residual", system.cocycle.identity_residual().0, tol)
            .residual("cocycle_modulus_deviation", system.cocycle.modulus_deviation()),
    );
    let total: usize = iso.decomposition.classes.iter().map(|c| c.simple_dim() * c.multiplicity).sum();
    report.push(CheckRecord::new("projective_dimension").equal("module_dim", m.dim(), "sum_w_times_m", total));
    for (gamma, class) in iso.decomposition.classes.iter().enumerate() {
        // (a) direct route
        let m_gamma = &class.multiplicity_space;
        let lemma = res.invariance_residual(m_gamma);
        report.push(
            CheckRecord::new(format!("multiplicity_space_invariant/{gamma}"))
                .dim("m_gamma_dim", m_gamma.ncols())
                .bounded("invariance_residual", lemma, tol),
        );
        let direct = res.submodule(m_gamma)?;
        let direct_rec = simplicity_record(&direct, seed, &format!("direct_route_simple/{gamma}"))?;
        let direct_simple = direct_rec.pass;
        report.push(direct_rec);

        // (b) corner route
        let data = build_induced(&system, &iso, gamma, &s)?;
        let (em, em_basis) = corner_module(&data.induced, &s, &cor)?;
        let ww = dual_tensor(&data.w_dual, &data.w_dual)?;
        let inv_ww = invariant_subspace(&ww, &system.inertia.group)?.ncols();
        report.push(
            CheckRecord::new(format!("corner_dimension/{gamma}"))
                .dim("inv_w_w_dual_dim", inv_ww)
                .dim("m_gamma_dim", m_gamma.ncols())
                .equal("e_induced_dim", em.dim(), "predicted_dim", m_gamma.ncols() * inv_ww),
        );

        // e(Ind) = rho(e)(1 (x) Inv(M (x) W*)), with the invariants computed two ways
        let h_elems = &system.inertia;
        let ext = &data.extended;
        let d_ext = ext.dim();
        let id = numeric::identity(d_ext);
        let blocks: Vec<Mat> = (0..h_elems.order())
            .map(|h| ext.act(&data.sub.embed_g(h)) - &id)
            .collect();
        let t_direct = numeric::nullspace_scaled(&numeric::vstack(&blocks, d_ext), tol, 1.0)?;
        let dw = data.w.dim();
        let inv_basis = invariant_subspace(&ww, &system.inertia.group)?;
        let mut images = Vec::new();
        for f in &class.homs {
            for k in 0..inv_basis.ncols() {
                let t = Mat::from_fn(dw, dw, |a, b| inv_basis[(a * dw + b, k)]);
                let ft = f * t;
                images.push(Mat::from_fn(d_ext, 1, |r, _| ft[(r / dw, r % dw)]));
            }
        }
        let t_image = if images.is_empty() { Mat::zeros(d_ext, 0) } else { numeric::hstack(&images, d_ext) };
        let (inv_ok, r1, r2, r12) = span_equal(&t_direct, &t_image, tol)?;
        let big = data.induced.dim();
        let mut lifted = Mat::zeros(big, t_direct.ncols());
        lifted.view_mut((0, 0), (d_ext, t_direct.ncols())).copy_from(&t_direct);
        let e = crate::skew::symmetrizer(&s);
        let pushed = data.induced.act(&e) * lifted;
        let (e_ok, q1, q2, q12) = span_equal(&em_basis, &pushed, tol)?;
        report.push(
            CheckRecord::new(format!("corner_equals_invariants/{gamma}"))
                .dim("inv_direct_dim", r1)
                .dim("inv_from_m_gamma_dim", r2)
                .dim("inv_joint_dim", r12)
                .dim("e_image_dim", q1)
                .dim("e_of_invariants_dim", q2)
                .dim("e_joint_dim", q12)
                .require(inv_ok, || format!("invariant spans differ: {r1}, {r2}, joint {r12}"))
                .require(e_ok, || format!("e-image spans differ: {q1}, {q2}, joint {q12}")),
        );
        if em.dim() == 0 {
            report.push(
                CheckRecord::new(format!("corner_route_simple/{gamma}"))
                    .require(false, || "e(Ind) is zero".into()),
            );
            continue;
        }
        let corner_rec = simplicity_record(&em, seed, &format!("corner_route_simple/{gamma}"))?;
        let corner_simple = corner_rec.pass;
        report.push(corner_rec);

        // transport along Phi to A^G and compare with the direct route
        let rho = (0..inv.sub.dim())
            .map(|j| em.act(&phi.phi.column(j).into_owned()))
            .collect();
        let transported = repmod::make_module(inv.sub.clone(), rho, tol)?;
        report.push(certify_isomorphism(&direct, &transported, seed, &format!("routes_agree/{gamma}"))?);
        report.push(
            CheckRecord::new(format!("route_verdicts/{gamma}"))
                .require(direct_simple == corner_simple, || {
                    format!("direct {direct_simple}, corner {corner_simple}")
                }),
        );
    }
    Ok(report)
}

/// `M` restricted to `A^G` splits into the `M_gamma`, each with
/// multiplicity `dim W_gamma`.
pub fn complete_reducibility(
    m: &Module,
    action: &AlgebraAction,
    instance: &str,
    seed: u64,
) -> Result<VerificationReport> {
    let tol = m.tol();
    let system = inertia(m, action, seed)?;
    let iso = projective_isotypics(&system, seed)?;
    let inv = fixed_subalgebra(action)?;
    let res = restrict(m, &inv)?;
    let dec = decompose(&res, seed)?;
    let mut report = VerificationReport::new(instance, seed, tol);
    let piece_sum: usize = dec.pieces.iter().map(|p| p.basis.ncols()).sum();
    let all = numeric::hstack(&dec.pieces.iter().map(|p| p.basis.clone()).collect::<Vec<_>>(), m.dim());
    let span = numeric::rank(&all, tol)?;
    report.push(
        CheckRecord::new("pieces_exhaust")
            .dim("pieces", dec.pieces.len())
            .equal("piece_dim_sum", piece_sum, "module_dim", m.dim())
            .equal("pieces_span", span, "module_dim_check", m.dim()),
    );
    let gammas: Vec<Module> = iso
        .decomposition
        .classes
        .iter()
        .map(|c| res.submodule(&c.multiplicity_space))
        .collect::<Result<_>>()?;
    let mut used = vec![false; gammas.len()];
    for (k, class) in dec.classes.iter().enumerate() {
        let mut matched = None;
        for (g, mg) in gammas.iter().enumerate() {
            if mg.dim() == class.rep.dim() && !hom_space(&class.rep, mg)?.is_empty() {
                matched = Some(g);
                break;
            }
        }
        let name = format!("class_matches_gamma/{k}");
        match matched {
            Some(g) => {
                used[g] = true;
                let w_dim = iso.decomposition.classes[g].simple_dim();
                report.push(
                    CheckRecord::new(name)
                        .dim("gamma", g)
                        .dim("simple_dim", class.rep.dim())
                        .equal("multiplicity", class.multiplicity, "w_gamma_dim", w_dim),
                );
            }
            None => report.push(
                CheckRecord::new(name)
                    .dim("simple_dim", class.rep.dim())
                    .require(false, || "no multiplicity space is isomorphic to this class".into()),
            ),
        }
    }
    report.push(
        CheckRecord::new("every_gamma_occurs")
            .equal("restricted_classes", dec.classes.len(), "gammas", gammas.len())
            .require(used.iter().all(|&u| u), || format!("unmatched gammas: {used:?}")),
    );
    Ok(report)
}

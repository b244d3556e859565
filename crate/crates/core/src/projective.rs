//! Inertia subgroups, intertwiners, 2-cocycles and twisted group algebras.
//!
//! For a simple `A`-module `M` and `h` in the inertia subgroup `G_M`, the
//! intertwiner `phi(h)` satisfies `phi(h) rho(a) = rho(h(a)) phi(h)`. These
//! compose only up to scalars, `phi(h) phi(k) = alpha(h, k) phi(hk)`, so `M`
//! is a module over the twisted group algebra with
//! `c_h c_k = alpha(h, k) c_{hk}` (exponent +1); dual objects live over the
//! exponent -1 algebra.

use std::sync::Arc;

use crate::algebra::{make_algebra, Algebra};
use crate::error::{Error, Result};
use crate::group_action::{AlgebraAction, FiniteGroup, Subgroup};
use crate::numeric::{self, c, Mat, C64, ONE};
use crate::repmod::{self, hom_space, is_simple, make_module, twist, Decomposition, Module};

/// A normalized 2-cocycle table over local group indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    group: FiniteGroup,
    table: Vec<Vec<C64>>,
}

impl Cocycle {
    pub fn trivial(group: &FiniteGroup) -> Cocycle {
        let n = group.order();
        Cocycle { group: group.clone(), table: vec![vec![ONE; n]; n] }
    }

    /// Validates normalization and the cocycle identity.
    pub fn new(group: FiniteGroup, table: Vec<Vec<C64>>, tol: f64) -> Result<Cocycle> {
        let n = group.order();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!("cocycle table must be {n} x {n}")));
        }
        if table.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite() || z.norm() == 0.0) {
            return Err(Error::InvalidInput("cocycle values must be finite and nonzero".into()));
        }
        let e = group.identity();
        for h in 0..n {
            for (a, b) in [(e, h), (h, e)] {
                let r = (table[a][b] - ONE).norm();
                if r > tol {
                    return Err(Error::NotProjective { h: a, k: b, residual: r });
                }
            }
        }
        let cocycle = Cocycle { group, table };
        let (r, h, k, _) = cocycle.identity_residual();
        if r > tol {
            return Err(Error::NotProjective { h, k, residual: r });
        }
        Ok(cocycle)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn get(&self, h: usize, k: usize) -> C64 {
        self.table[h][k]
    }

    pub fn table(&self) -> &[Vec<C64>] {
        &self.table
    }

    /// Worst relative violation of `a(h,k) a(hk,l) = a(h,kl) a(k,l)` and the
    /// offending triple.
    pub fn identity_residual(&self) -> (f64, usize, usize, usize) {
        let g = &self.group;
        let n = g.order();
        let mut worst = (0.0, 0, 0, 0);
        for h in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = self.table[h][k] * self.table[g.mul(h, k)][l];
                    let rhs = self.table[h][g.mul(k, l)] * self.table[k][l];
                    let r = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0);
                    if r > worst.0 {
                        worst = (r, h, k, l);
                    }
                }
            }
        }
        worst
    }

    /// Whether `a(1, h) = a(h, 1) = 1` holds bit-exactly.
    pub fn normalized_exactly(&self) -> bool {
        let e = self.group.identity();
        (0..self.order()).all(|h| self.table[e][h] == ONE && self.table[h][e] == ONE)
    }

    /// Largest `| |a(h,k)| - 1 |`; reported, never enforced.
    pub fn modulus_deviation(&self) -> f64 {
        self.table.iter().flatten().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn inverse(&self) -> Cocycle {
        let table = self.table.iter().map(|r| r.iter().map(|z| ONE / z).collect()).collect();
        Cocycle { group: self.group.clone(), table }
    }

    /// `a(h, k) / a(k, h)` for commuting `h, k`: invariant under coboundaries.
    pub fn commutator_ratio(&self, h: usize, k: usize) -> C64 {
        self.table[h][k] / self.table[k][h]
    }
}

/// `alpha(h, k)` read off from `phi(h) phi(k)` against `phi(hk)` at the
/// largest entry of `phi(hk)`.
pub fn extract_cocycle(phi: &[Mat], group: &FiniteGroup, tol: f64) -> Result<Cocycle> {
    let n = group.order();
    if phi.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} intertwiners, got {}", phi.len())));
    }
    let e = group.identity();
    let d = phi[e].nrows();
    let r = (&phi[e] - numeric::identity(d)).norm();
    if r > tol {
        return Err(Error::InvalidInput(format!("phi(1) is not the identity: residual {r:.3e}")));
    }
    let mut table = vec![vec![ONE; n]; n];
    for h in 0..n {
        for k in 0..n {
            if h == e || k == e {
                continue;
            }
            let p = &phi[h] * &phi[k];
            let q = &phi[group.mul(h, k)];
            let (idx, _) = q
                .iter()
                .enumerate()
                .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
            let alpha = p[idx] / q[idx];
            let resid = (&p - q * alpha).norm();
            if resid > tol * q.norm() {
                return Err(Error::NotProjective { h, k, residual: resid / q.norm() });
            }
            table[h][k] = alpha;
        }
    }
    Cocycle::new(group.clone(), table, tol)
}

/// `C^alpha[G]` with `c_h c_k = alpha(h,k)^exponent c_{hk}`.
#[derive(Debug, Clone)]
pub struct TwistedGroupAlgebra {
    pub group: FiniteGroup,
    pub cocycle: Cocycle,
    pub exponent: i32,
    pub algebra: Arc<Algebra>,
}

impl TwistedGroupAlgebra {
    pub fn coefficient(&self, h: usize, k: usize) -> C64 {
        let a = self.cocycle.get(h, k);
        if self.exponent >= 0 {
            a
        } else {
            ONE / a
        }
    }
}

pub fn twisted_group_algebra(cocycle: &Cocycle, exponent: i32, tol: f64) -> Result<TwistedGroupAlgebra> {
    if exponent != 1 && exponent != -1 {
        return Err(Error::InvalidInput(format!("exponent must be +1 or -1, got {exponent}")));
    }
    let g = cocycle.group();
    let n = g.order();
    let mut mult = Vec::with_capacity(n * n);
    for h in 0..n {
        for k in 0..n {
            let a = cocycle.get(h, k);
            let v = if exponent == 1 { a } else { ONE / a };
            mult.push((h, k, g.mul(h, k), v));
        }
    }
    let unit = numeric::basis_vector(n, g.identity());
    let labels = (0..n).map(|h| format!("c{h}")).collect();
    let algebra = make_algebra(n, &mult, unit, tol)?.with_labels(labels);
    Ok(TwistedGroupAlgebra {
        group: g.clone(),
        cocycle: cocycle.clone(),
        exponent,
        algebra: Arc::new(algebra),
    })
}

/// A module over a twisted group algebra, basis element `h` acting as `c_h`.
#[derive(Debug, Clone)]
pub struct TwistedModule {
    pub twisted: Arc<TwistedGroupAlgebra>,
    pub module: Module,
}

impl TwistedModule {
    pub fn new(twisted: Arc<TwistedGroupAlgebra>, rho: Vec<Mat>, tol: f64) -> Result<TwistedModule> {
        let module = make_module(twisted.algebra.clone(), rho, tol)?;
        Ok(TwistedModule { twisted, module })
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// The dual `W*` with `c_g` acting by the inverse transpose of `W`'s action;
/// it is a module for the opposite exponent.
pub fn contragredient(w: &TwistedModule) -> Result<TwistedModule> {
    let tol = w.module.tol();
    let dual_alg = twisted_group_algebra(&w.twisted.cocycle, -w.twisted.exponent, w.twisted.algebra.tol())?;
    let rho = w
        .module
        .rho_all()
        .iter()
        .map(|m| numeric::inverse(m).map(|inv| inv.transpose()))
        .collect::<Result<Vec<_>>>()?;
    TwistedModule::new(Arc::new(dual_alg), rho, tol)
}

/// Inertia data of a simple module.
#[derive(Debug, Clone)]
pub struct ProjectiveSystem {
    pub module: Module,
    pub action: AlgebraAction,
    pub inertia: Subgroup,
    /// `phi[local]` for each element of the inertia subgroup.
    pub phi: Vec<Mat>,
    pub cocycle: Cocycle,
}

impl ProjectiveSystem {
    /// Worst relative residual of `phi(h) rho(b_i) = rho(h(b_i)) phi(h)`.
    pub fn intertwiner_residual(&self) -> f64 {
        let n = self.module.algebra().dim();
        let mut worst: f64 = 0.0;
        for (local, &h) in self.inertia.elements.iter().enumerate() {
            let p = &self.phi[local];
            let mat = self.action.mat(h);
            for i in 0..n {
                let lhs = p * self.module.rho(i);
                let rhs = self.module.act(&mat.column(i).into_owned()) * p;
                let r = (&lhs - &rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0);
                worst = worst.max(r);
            }
        }
        worst
    }
}

fn normalize(x: &Mat) -> Mat {
    let d = x.nrows();
    let max = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = x
        .iter()
        .find(|z| z.norm() >= (1.0 - 1e-6) * max)
        .copied()
        .unwrap_or(ONE);
    let phase = pivot.conj() / c(pivot.norm(), 0.0);
    let y = x * phase;
    let scale = (d as f64).sqrt() / y.norm();
    y * c(scale, 0.0)
}

/// `G_M = { h : ^hM is isomorphic to M }` with normalized intertwiners and
/// the resulting cocycle.
pub fn inertia(m: &Module, action: &AlgebraAction, seed: u64) -> Result<ProjectiveSystem> {
    if !Arc::ptr_eq(m.algebra(), action.target()) {
        return Err(Error::ModuleAlgebraMismatch);
    }
    if !is_simple(m, seed)? {
        return Err(Error::NotSimple);
    }
    let g = action.group();
    let d = m.dim();
    let mut members = Vec::new();
    let mut mats = Vec::new();
    for h in 0..g.order() {
        let homs = hom_space(&twist(m, h, action)?, m)?;
        match homs.len() {
            0 => {}
            1 => {
                members.push(h);
                mats.push(if h == g.identity() { numeric::identity(d) } else { normalize(&homs[0]) });
            }
            k => {
                return Err(Error::NumericalInconsistency(format!(
                    "hom space from twist by {h} has dimension {k} for a simple module"
                )))
            }
        }
    }
    let inertia = g
        .subgroup(&members)
        .map_err(|e| Error::NumericalInconsistency(format!("inertia set is not a subgroup: {e}")))?;
    let cocycle = extract_cocycle(&mats, &inertia.group, m.tol())?;
    Ok(ProjectiveSystem { module: m.clone(), action: action.clone(), inertia, phi: mats, cocycle })
}

/// `M` as a module over the exponent +1 twisted group algebra, `c_h -> phi(h)`.
pub fn module_over_twisted(system: &ProjectiveSystem) -> Result<TwistedModule> {
    let tol = system.module.tol();
    let tga = Arc::new(twisted_group_algebra(&system.cocycle, 1, tol)?);
    TwistedModule::new(tga, system.phi.clone(), tol).map_err(|e| match e {
        Error::NotARepresentation { i, j, residual } => Error::NotProjective { h: i, k: j, residual },
        other => other,
    })
}

/// Isotypic data of `M` over the exponent +1 twisted group algebra.
#[derive(Debug, Clone)]
pub struct ProjectiveIsotypics {
    pub twisted_module: TwistedModule,
    pub decomposition: Decomposition,
    /// Per class: rank of `{ f_j(w_t) }` against dim of the isotypic
    /// component, witnessing `M^l = M_l (x) W_l`.
    pub identification: Vec<(usize, usize)>,
}

impl ProjectiveIsotypics {
    /// `W_l` as a twisted module.
    pub fn representative(&self, class: usize) -> TwistedModule {
        TwistedModule {
            twisted: self.twisted_module.twisted.clone(),
            module: self.decomposition.classes[class].rep.clone(),
        }
    }
}

pub fn projective_isotypics(system: &ProjectiveSystem, seed: u64) -> Result<ProjectiveIsotypics> {
    let tm = module_over_twisted(system)?;
    let decomposition = repmod::decompose(&tm.module, seed)?;
    let tol = tm.module.tol();
    let d = tm.dim();
    let mut identification = Vec::with_capacity(decomposition.classes.len());
    for class in &decomposition.classes {
        let mut vecs = Vec::new();
        for f in &class.homs {
            vecs.push(f.clone());
        }
        let stacked = numeric::hstack(&vecs, d);
        let rank = numeric::rank(&stacked, tol)?;
        if numeric::projection_residual(&class.isotypic, &stacked) > tol.sqrt() {
            return Err(Error::NumericalInconsistency(
                "multiplicity tensor map leaves the isotypic component".into(),
            ));
        }
        identification.push((rank, class.isotypic.ncols()));
    }
    Ok(ProjectiveIsotypics { twisted_module: tm, decomposition, identification })
}

/// `M* (x) N` for two modules over the same twisted group algebra, as a
/// module over the untwisted group algebra: the cocycles cancel.
pub fn dual_tensor(m: &TwistedModule, n: &TwistedModule) -> Result<Module> {
    if !Arc::ptr_eq(&m.twisted, &n.twisted) {
        return Err(Error::AlgebraMismatch);
    }
    let group = &m.twisted.group;
    let tol = m.module.tol().max(n.module.tol());
    let plain = twisted_group_algebra(&Cocycle::trivial(group), 1, tol)?;
    let rho = (0..group.order())
        .map(|g| {
            let inv_t = numeric::inverse(m.module.rho(g))?.transpose();
            Ok(numeric::kron(&inv_t, n.module.rho(g)))
        })
        .collect::<Result<Vec<_>>>()?;
    make_module(plain.algebra, rho, tol)
}

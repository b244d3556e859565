//! Built-in instances `(A, G, action, M)` and a seeded generator of random
//! ones.

use std::sync::Arc;

use rand::Rng as _;

use crate::algebra::{change_basis, direct_sum, make_algebra, matrix_algebra, Algebra};
use crate::error::{Error, Result};
use crate::group_action::{make_action, AlgebraAction, FiniteGroup};
use crate::numeric::{self, c, Mat, Vector, ONE, ZERO};
use crate::repmod::{make_module, Module};

pub const FIXTURE_NAMES: [&str; 5] = ["trivial", "swap", "pauli", "perm", "cyclic"];

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub action: AlgebraAction,
    pub module: Module,
}

impl Instance {
    pub fn algebra(&self) -> &Arc<Algebra> {
        self.action.target()
    }

    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn tol(&self) -> f64 {
        self.action.tol()
    }
}

pub fn fixture(name: &str, tol: f64) -> Result<Instance> {
    match name {
        "trivial" => trivial(tol),
        "swap" => swap(tol),
        "pauli" => pauli(tol),
        "perm" => perm(tol),
        "cyclic" => cyclic(tol),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

pub fn all_fixtures(tol: f64) -> Result<Vec<Instance>> {
    FIXTURE_NAMES.iter().map(|n| fixture(n, tol)).collect()
}

fn unit_matrix(n: usize, r: usize, s: usize) -> Mat {
    let mut e = Mat::zeros(n, n);
    e[(r, s)] = ONE;
    e
}

/// Coordinates of `X -> U X U^-1` on the matrix units of `M_n`.
fn conjugation(u: &Mat) -> Result<Mat> {
    let n = u.nrows();
    let uinv = numeric::inverse(u)?;
    let mut m = Mat::zeros(n * n, n * n);
    for k in 0..n * n {
        let img = u * unit_matrix(n, k / n, k % n) * &uinv;
        for r in 0..n * n {
            m[(r, k)] = img[(r / n, r % n)];
        }
    }
    Ok(m)
}

fn field(tol: f64) -> Result<Algebra> {
    make_algebra(1, &[(0, 0, 0, ONE)], Vector::from_element(1, ONE), tol)
}

fn trivial(tol: f64) -> Result<Instance> {
    let a = Arc::new(field(tol)?);
    let action = make_action(FiniteGroup::trivial(), a.clone(), vec![numeric::identity(1)], tol)?;
    let module = make_module(a, vec![numeric::identity(1)], tol)?;
    Ok(Instance { name: "trivial".into(), action, module })
}

fn swap(tol: f64) -> Result<Instance> {
    let m2 = matrix_algebra(2)?;
    let a = Arc::new(direct_sum(&m2, &m2)?.with_tol(tol));
    let mut p = Mat::zeros(8, 8);
    for i in 0..4 {
        p[(i + 4, i)] = ONE;
        p[(i, i + 4)] = ONE;
    }
    let action = make_action(FiniteGroup::cyclic(2), a.clone(), vec![numeric::identity(8), p], tol)?;
    let rho = (0..8)
        .map(|k| if k < 4 { unit_matrix(2, k / 2, k % 2) } else { Mat::zeros(2, 2) })
        .collect();
    let module = make_module(a, rho, tol)?;
    Ok(Instance { name: "swap".into(), action, module })
}

pub fn pauli_x() -> Mat {
    Mat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_z() -> Mat {
    Mat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

fn pauli(tol: f64) -> Result<Instance> {
    let a = Arc::new(matrix_algebra(2)?.with_tol(tol));
    let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    // element 2a + b acts by conjugation with X^a Z^b
    let mats = (0..4)
        .map(|g| conjugation(&(pauli_x().pow((g / 2) as u32) * pauli_z().pow((g % 2) as u32))))
        .collect::<Result<Vec<_>>>()?;
    let action = make_action(v4, a.clone(), mats, tol)?;
    let rho = (0..4).map(|k| unit_matrix(2, k / 2, k % 2)).collect();
    let module = make_module(a, rho, tol)?;
    Ok(Instance { name: "pauli".into(), action, module })
}

fn permutation_matrix(p: &[usize]) -> Mat {
    let n = p.len();
    let mut m = Mat::zeros(n, n);
    for (i, &j) in p.iter().enumerate() {
        m[(j, i)] = ONE;
    }
    m
}

fn perm(tol: f64) -> Result<Instance> {
    let mult: Vec<_> = (0..3).map(|i| (i, i, i, ONE)).collect();
    let a = Arc::new(make_algebra(3, &mult, Vector::from_element(3, ONE), tol)?);
    let (g, perms) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]])?;
    let mats = perms.iter().map(|p| permutation_matrix(p)).collect();
    let action = make_action(g, a.clone(), mats, tol)?;
    let rho = (0..3)
        .map(|i| if i == 0 { numeric::identity(1) } else { Mat::zeros(1, 1) })
        .collect();
    let module = make_module(a, rho, tol)?;
    Ok(Instance { name: "perm".into(), action, module })
}

fn cyclic(tol: f64) -> Result<Instance> {
    let mut mult = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            mult.push((i, j, (i + j) % 3, ONE));
        }
    }
    let a = Arc::new(make_algebra(3, &mult, numeric::basis_vector(3, 0), tol)?);
    let inversion = permutation_matrix(&[0, 2, 1]);
    let action = make_action(FiniteGroup::cyclic(2), a.clone(), vec![numeric::identity(3), inversion], tol)?;
    let w = c(0.0, 2.0 * std::f64::consts::PI / 3.0).exp();
    let rho = (0..3).map(|j| Mat::from_element(1, 1, w.powi(j))).collect();
    let module = make_module(a, rho, tol)?;
    Ok(Instance { name: "cyclic".into(), action, module })
}

/// Block shapes `(blocks, n)` with `blocks * n^2 <= 12`.
const SHAPES: [(usize, usize); 6] = [(1, 2), (2, 2), (3, 2), (1, 3), (2, 1), (3, 1)];

/// A random instance: `A` is a sum of equal blocks `M_n`, `G = H x K` with
/// `H` permuting blocks and `K` conjugating every block by the same
/// projective representation, `|G| <= 8`. The whole instance is then written
/// in a random non-orthogonal basis. `M` is the natural module of block 0.
pub fn random_instance(seed: u64, tol: f64) -> Result<Instance> {
    let mut rng = numeric::rng(seed);
    let (b, n) = SHAPES[rng.random_range(0..SHAPES.len())];
    let (h_group, h_perms) = block_group(b, &mut rng)?;
    let k_reps = inner_group(n, h_group.order(), &mut rng);
    let k_group = match k_reps.len() {
        1 => FiniteGroup::trivial(),
        2 => FiniteGroup::cyclic(2),
        3 => FiniteGroup::cyclic(3),
        4 => FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        _ => unreachable!("inner group orders are 1 to 4"),
    };
    let group = FiniteGroup::direct_product(&h_group, &k_group);

    let block = matrix_algebra(n)?;
    let mut a = block.clone();
    for _ in 1..b {
        a = direct_sum(&a, &block)?;
    }
    let nn = n * n;
    let dim = b * nn;
    let mut mats = Vec::with_capacity(group.order());
    for perm in &h_perms {
        for u in &k_reps {
            let conj = conjugation(u)?;
            let mut m = Mat::zeros(dim, dim);
            for (src, &dst) in perm.iter().enumerate() {
                m.view_mut((dst * nn, src * nn), (nn, nn)).copy_from(&conj);
            }
            mats.push(m);
        }
    }
    let rho: Vec<Mat> = (0..dim)
        .map(|k| if k < nn { unit_matrix(n, (k % nn) / n, k % n) } else { Mat::zeros(n, n) })
        .collect();

    // gauge: new basis vector j has old coordinates P[:, j]
    let p = numeric::identity(dim) + numeric::random_matrix(&mut rng, dim, dim) * c(0.2, 0.0);
    let pinv = numeric::inverse(&p)?;
    let a = Arc::new(change_basis(&a.with_tol(tol), &p)?);
    let mats = mats.iter().map(|m| &pinv * m * &p).collect();
    let action = make_action(group, a.clone(), mats, tol)?;
    let rho = (0..dim)
        .map(|j| {
            let mut out = Mat::zeros(n, n);
            for (i, r) in rho.iter().enumerate() {
                out += r * p[(i, j)];
            }
            out
        })
        .collect();
    let module = make_module(a, rho, tol)?;
    Ok(Instance { name: format!("random/{seed}"), action, module })
}

/// A group permuting `b` blocks, with its permutations.
fn block_group(b: usize, rng: &mut numeric::Rng) -> Result<(FiniteGroup, Vec<Vec<usize>>)> {
    let identity: Vec<usize> = (0..b).collect();
    let gens: Vec<Vec<usize>> = match (b, rng.random_range(0..3)) {
        (1, _) | (_, 0) => vec![],
        (2, _) => vec![vec![1, 0]],
        (3, 1) => vec![vec![1, 2, 0]],
        (3, _) => vec![vec![1, 0, 2], vec![1, 2, 0]],
        _ => vec![],
    };
    if gens.is_empty() {
        return Ok((FiniteGroup::trivial(), vec![identity]));
    }
    FiniteGroup::from_permutations(&gens)
}

/// Matrices `U_k` whose conjugations realize the inner factor `K`, indexed
/// like the matching [`FiniteGroup`], with `|H| |K| <= 8`.
fn inner_group(n: usize, h_order: usize, rng: &mut numeric::Rng) -> Vec<Mat> {
    let id = numeric::identity(n);
    let budget = 8 / h_order;
    let mut options: Vec<Vec<Mat>> = vec![vec![id.clone()]];
    if n == 2 {
        if budget >= 2 {
            options.push(vec![id.clone(), pauli_z()]);
        }
        if budget >= 4 {
            options.push((0..4).map(|g| pauli_x().pow((g / 2) as u32) * pauli_z().pow((g % 2) as u32)).collect());
        }
    }
    if n == 3 && budget >= 3 {
        let w = c(0.0, 2.0 * std::f64::consts::PI / 3.0).exp();
        let clock = Mat::from_diagonal(&Vector::from_vec(vec![ONE, w, w * w]));
        options.push((0..3).map(|k| clock.pow(k as u32)).collect());
    }
    options.swap_remove(rng.random_range(0..options.len()))
}

//! Finite groups as multiplication tables and their actions on algebras.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use crate::algebra::{Algebra, EXHAUSTIVE_CHECK_DIM};
use crate::error::{Error, Result};
use crate::numeric::{self, Mat, Vector};

/// A finite group; elements are referenced by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

pub fn make_group(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::InvalidInput("group table is empty".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidInput(format!("row {i} of the group table has length {}", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidInput(format!("group table entry {bad} out of range")));
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or(Error::NoIdentity)?;
    let mut inverses = Vec::with_capacity(n);
    for x in 0..n {
        let inv = (0..n)
            .find(|&y| table[x][y] == identity && table[y][x] == identity)
            .ok_or(Error::NoInverse { element: x })?;
        inverses.push(inv);
    }
    for a in 0..n {
        for b in 0..n {
            let ab = table[a][b];
            for cc in 0..n {
                if table[ab][cc] != table[a][table[b][cc]] {
                    return Err(Error::NotAssociative { a, b, c: cc });
                }
            }
        }
    }
    Ok(FiniteGroup { table, identity, inverses })
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        make_group(vec![vec![0]]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        make_group(table).expect("cyclic group")
    }

    /// Group generated by permutations (images of `0..degree`). The identity
    /// is element 0; further elements appear in breadth-first order over
    /// right multiplication by the generators. Also returns the permutations.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<(Self, Vec<Vec<usize>>)> {
        let degree = gens.first().map(|g| g.len()).unwrap_or(1);
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidInput("generator is not a permutation".into()));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p = compose(&elems[i], g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let table = (0..n)
            .map(|i| (0..n).map(|j| index[&compose(&elems[i], &elems[j])]).collect())
            .collect();
        Ok((make_group(table)?, elems))
    }

    /// Elements `(a, b)` indexed `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        make_group(table).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let n = self.order();
        let mut member = vec![false; n];
        for &e in elements {
            if e >= n {
                return false;
            }
            member[e] = true;
        }
        member[self.identity]
            && elements.iter().all(|&a| member[self.inv(a)])
            && elements.iter().all(|&a| elements.iter().all(|&b| member[self.mul(a, b)]))
    }

    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut elems = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if !self.is_subgroup(&elems) {
            return Err(Error::NotASubgroup(format!("{elems:?} is not closed")));
        }
        let local: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| local[&self.mul(a, b)]).collect())
            .collect();
        Ok(Subgroup { group: make_group(table)?, elements: elems })
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup(&(0..self.order()).collect::<Vec<_>>()).expect("whole group")
    }

    pub fn cyclic_subgroup(&self, g: usize) -> Subgroup {
        let mut elems = vec![self.identity];
        let mut x = g;
        while x != self.identity {
            elems.push(x);
            x = self.mul(x, g);
        }
        self.subgroup(&elems).expect("cyclic subgroup")
    }
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p q)(i) = p(q(i))
    q.iter().map(|&i| p[i]).collect()
}

/// A subgroup with its own multiplication table over local indices.
/// `elements[local]` is the index in the parent group, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn local(&self, global: usize) -> Option<usize> {
        self.elements.binary_search(&global).ok()
    }

    pub fn contains(&self, global: usize) -> bool {
        self.local(global).is_some()
    }
}

/// Left coset representatives of `h` in `g`: the identity first, then the
/// minimal-index element of every other coset in ascending order.
pub fn left_cosets(g: &FiniteGroup, h: &[usize]) -> Result<Vec<usize>> {
    let sub = g.subgroup(h)?;
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    let starts = std::iter::once(g.identity()).chain(0..g.order());
    for x in starts {
        if covered[x] {
            continue;
        }
        for &k in &sub.elements {
            covered[g.mul(x, k)] = true;
        }
        reps.push(x);
    }
    Ok(reps)
}

/// A finite group acting on an algebra by automorphisms; `mats[g]` is the
/// coordinate matrix of `a -> g(a)`.
#[derive(Debug, Clone)]
pub struct AlgebraAction {
    group: FiniteGroup,
    target: Arc<Algebra>,
    mats: Vec<Mat>,
    tol: f64,
}

pub fn make_action(
    group: FiniteGroup,
    target: Arc<Algebra>,
    mats: Vec<Mat>,
    tol: f64,
) -> Result<AlgebraAction> {
    let n = target.dim();
    if mats.len() != group.order() {
        return Err(Error::InvalidInput(format!(
            "expected {} action matrices, got {}",
            group.order(),
            mats.len()
        )));
    }
    if let Some(bad) = mats.iter().position(|m| m.shape() != (n, n) || !numeric::is_finite(m)) {
        return Err(Error::InvalidInput(format!("action matrix {bad} is malformed")));
    }
    let e = group.identity();
    let id_res = (&mats[e] - numeric::identity(n)).norm();
    if id_res > tol {
        return Err(Error::NotHomomorphism { g: e, h: e, residual: id_res });
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            let lhs = &mats[group.mul(g, h)];
            let rhs = &mats[g] * &mats[h];
            let r = (lhs - &rhs).norm();
            if r > tol * (mats[g].norm() * mats[h].norm()).max(1.0) {
                return Err(Error::NotHomomorphism { g, h, residual: r });
            }
        }
    }
    let action = AlgebraAction { group, target, mats, tol };
    action.check_automorphisms()?;
    Ok(action)
}

impl AlgebraAction {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn mat(&self, g: usize) -> &Mat {
        &self.mats[g]
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn apply(&self, g: usize, x: &Vector) -> Vector {
        &self.mats[g] * x
    }

    fn check_automorphisms(&self) -> Result<()> {
        let a = &self.target;
        let n = a.dim();
        for g in 0..self.group.order() {
            let m = &self.mats[g];
            let r = (m * a.unit() - a.unit()).norm();
            if r > self.tol * a.unit().norm().max(1.0) {
                return Err(Error::NotAutomorphism { g, i: usize::MAX, j: usize::MAX, residual: r });
            }
            if n <= EXHAUSTIVE_CHECK_DIM {
                let images: Vec<Vector> = (0..n).map(|i| m.column(i).into_owned()).collect();
                for i in 0..n {
                    for j in 0..n {
                        let lhs = m * a.mul(&a.basis(i), &a.basis(j));
                        let rhs = a.mul(&images[i], &images[j]);
                        let r = (lhs - rhs).norm();
                        let scale = (m.norm() * m.norm() * a.left(i).norm()).max(1.0);
                        if r > self.tol * scale {
                            return Err(Error::NotAutomorphism { g, i, j, residual: r });
                        }
                    }
                }
            } else {
                let mut rng = numeric::rng(0xacc7);
                for s in 0..16 {
                    let x = numeric::random_vector(&mut rng, n);
                    let y = numeric::random_vector(&mut rng, n);
                    let lhs = m * a.mul(&x, &y);
                    let rhs = a.mul(&(m * &x), &(m * &y));
                    let r = (&lhs - &rhs).norm();
                    let scale = (m.norm() * m.norm() * a.left_matrix(&x).norm() * y.norm()).max(1.0);
                    if r > self.tol * scale {
                        return Err(Error::NotAutomorphism { g, i: s, j: s, residual: r });
                    }
                }
            }
        }
        Ok(())
    }

    /// The action restricted to a subgroup, over the subgroup's local indices.
    pub fn restrict(&self, sub: &Subgroup) -> AlgebraAction {
        AlgebraAction {
            group: sub.group.clone(),
            target: self.target.clone(),
            mats: sub.elements.iter().map(|&g| self.mats[g].clone()).collect(),
            tol: self.tol,
        }
    }

    /// Builds an action on a conjugated basis: `change` as in
    /// [`crate::algebra::change_basis`].
    pub fn change_basis(&self, target: Arc<Algebra>, change: &Mat) -> Result<AlgebraAction> {
        let inv = numeric::inverse(change)?;
        let mats = self.mats.iter().map(|m| &inv * m * change).collect();
        make_action(self.group.clone(), target, mats, self.tol)
    }
}

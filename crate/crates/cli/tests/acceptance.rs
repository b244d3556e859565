//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the terminal.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use skewgroup::fixtures::{all_fixtures, fixture, pauli_x, pauli_z, random_instance, Instance, FIXTURE_NAMES};
use skewgroup::group_action::{make_action, FiniteGroup};
use skewgroup::numeric::{self, c, Mat, C64};
use skewgroup::projective::{inertia, projective_isotypics, twisted_group_algebra, Cocycle, TwistedModule};
use skewgroup::repmod::{decompose_regular, Module};
use skewgroup::skew::{skew_group_algebra, symmetrizer};
use skewgroup::theorems::{
    check_cocycle, check_invariant_theory, check_phi_psi_report, check_skew_product, complete_reducibility,
    hom_inv_check, induced_simplicity, main_theorem, VerificationReport,
};
use skewgroup_cli::fixture::instance_job;
use skewgroup_cli::run::Status;
use skewgroup_cli::{build_job, render_json, run_job};

const TOL: f64 = 1e-9;
const SEED: u64 = 1;
/// Bound on every residual the criteria inspect.
const RESIDUAL_BOUND: f64 = 1e-8;
const RANDOM_INSTANCES: u64 = 20;
const RANDOM_MODULE_PAIRS: usize = 50;
const TOL_SWEEP: [f64; 5] = [1e-10, 1e-9, 1e-8, 1e-7, 1e-6];

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(r: &VerificationReport) -> Outcome {
    let failed: Vec<String> = r
        .failures()
        .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
        .collect();
    ensure(failed.is_empty(), || format!("{}: {}", r.instance, failed.join("; ")))
}

fn dim(r: &VerificationReport, check: &str, key: &str) -> Result<usize, String> {
    r.check(check)
        .and_then(|c| c.dims.get(key).copied())
        .ok_or_else(|| format!("{}: no {check}.{key}", r.instance))
}

fn residual(r: &VerificationReport, check: &str, key: &str) -> Result<f64, String> {
    r.check(check)
        .and_then(|c| c.residuals.get(key).copied())
        .ok_or_else(|| format!("{}: no {check}.{key}", r.instance))
}

fn bounded(r: &VerificationReport, check: &str, key: &str) -> Outcome {
    let v = residual(r, check, key)?;
    ensure(v <= RESIDUAL_BOUND, || format!("{}: {check}.{key} = {v:.3e}", r.instance))
}

fn err(e: skewgroup::Error) -> String {
    e.to_string()
}

fn fixtures() -> Result<Vec<Instance>, String> {
    all_fixtures(TOL).map_err(err)
}

fn fixtures_and_random() -> Result<Vec<Instance>, String> {
    let mut all = fixtures()?;
    for seed in 0..RANDOM_INSTANCES {
        all.push(random_instance(seed, TOL).map_err(err)?);
    }
    Ok(all)
}

/// Skew product: associativity on random triples and the trivial-group case.
fn criterion_1() -> Outcome {
    for inst in fixtures()? {
        let s = skew_group_algebra(&inst.action).map_err(err)?;
        let r = check_skew_product(&s, &inst.name, SEED);
        passed(&r)?;
        ensure(dim(&r, "skew_associativity", "samples")? == 100, || "expected 100 samples".into())?;
        bounded(&r, "skew_associativity", "max_relative_residual")?;

        let a = inst.algebra();
        let trivial = make_action(FiniteGroup::trivial(), a.clone(), vec![numeric::identity(a.dim())], TOL)
            .map_err(err)?;
        let st = skew_group_algebra(&trivial).map_err(err)?;
        let n = a.dim();
        ensure(st.dim() == n, || format!("{}: A # 1 has dim {}", inst.name, st.dim()))?;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y) = (st.alg().structure_constant(i, j, k), a.structure_constant(i, j, k));
                    ensure(x == y, || format!("{}: constant ({i},{j},{k}) {x} vs {y}", inst.name))?;
                }
            }
        }
    }
    Ok(())
}

/// `(1/|G|) sum_g tr(g)`: the dimension of the fixed space of the action.
fn fixed_dim_by_character(inst: &Instance) -> usize {
    let g = inst.group().order();
    let tr: C64 = inst.action.mats().iter().map(|m| m.trace()).sum();
    (tr.re / g as f64).round() as usize
}

/// Span of `e b_i e` over the basis of `A # G`.
fn corner_dim_by_span(inst: &Instance) -> Result<usize, String> {
    let s = skew_group_algebra(&inst.action).map_err(err)?;
    let e = symmetrizer(&s);
    let cols: Vec<Mat> = (0..s.dim())
        .map(|i| {
            let v = s.alg().mul(&s.alg().mul(&e, &s.alg().basis(i)), &e);
            numeric::as_col(&v)
        })
        .collect();
    numeric::rank(&numeric::hstack(&cols, s.dim()), TOL).map_err(err)
}

/// Phi is a bijective algebra map and both sides have the oracle dimension.
fn criterion_2() -> Outcome {
    let expected = [("trivial", 1), ("swap", 4), ("pauli", 1), ("perm", 1), ("cyclic", 2)];
    for (name, want) in expected {
        let inst = fixture(name, TOL).map_err(err)?;
        let s = skew_group_algebra(&inst.action).map_err(err)?;
        let r = check_phi_psi_report(&s, name, SEED).map_err(err)?;
        passed(&r)?;
        for key in ["image_residual", "mult_residual", "unit_residual"] {
            bounded(&r, "phi_isomorphism", key)?;
        }
        let inv = dim(&r, "phi_isomorphism", "invariant_dim")?;
        let cor = dim(&r, "phi_isomorphism", "corner_dim")?;
        let rank = dim(&r, "phi_isomorphism", "phi_rank")?;
        let by_char = fixed_dim_by_character(&inst);
        let by_span = corner_dim_by_span(&inst)?;
        ensure(inv == want && cor == want && rank == want, || {
            format!("{name}: invariant {inv}, corner {cor}, rank {rank}, expected {want}")
        })?;
        ensure(by_char == want && by_span == want, || {
            format!("{name}: oracles give fixed {by_char}, corner span {by_span}, expected {want}")
        })?;
    }
    Ok(())
}

/// Simple modules with `eN != 0` give simple corner modules, hitting every class.
fn criterion_3() -> Outcome {
    for inst in fixtures_and_random()? {
        let s = skew_group_algebra(&inst.action).map_err(err)?;
        let r = check_invariant_theory(&s, &inst.name, SEED).map_err(err)?;
        passed(&r)?;
    }
    Ok(())
}

/// Coordinates of `E_rs -> U E_rs U^-1` on the matrix units of `M_2`.
fn conjugation_matrix(u: &Mat) -> Mat {
    let uinv = numeric::inverse(u).expect("invertible");
    let mut m = Mat::zeros(4, 4);
    for k in 0..4 {
        let mut e = Mat::zeros(2, 2);
        e[(k / 2, k % 2)] = numeric::ONE;
        let img = u * e * &uinv;
        for r in 0..4 {
            m[(r, k)] = img[(r / 2, r % 2)];
        }
    }
    m
}

/// Cocycles are normalised exactly, satisfy the cocycle identity, and pauli
/// has `alpha(x, z) / alpha(z, x) = -1`.
fn criterion_4() -> Outcome {
    for inst in fixtures()? {
        let r = check_cocycle(&inst.module, &inst.action, &inst.name, SEED).map_err(err)?;
        passed(&r)?;
        bounded(&r, "cocycle_identity", "identity_residual")?;
        let system = inertia(&inst.module, &inst.action, SEED).map_err(err)?;
        let alpha = &system.cocycle;
        let e = alpha.group().identity();
        for h in 0..alpha.order() {
            ensure(alpha.get(e, h) == numeric::ONE && alpha.get(h, e) == numeric::ONE, || {
                format!("{}: alpha not normalised at {h}", inst.name)
            })?;
        }
    }
    let inst = fixture("pauli", TOL).map_err(err)?;
    let system = inertia(&inst.module, &inst.action, SEED).map_err(err)?;
    let find = |u: &Mat| {
        let target = conjugation_matrix(u);
        (0..inst.group().order()).find(|&g| (inst.action.mat(g) - &target).norm() < 1e-12)
    };
    let (x, z) = (find(&pauli_x()), find(&pauli_z()));
    let (x, z) = x.zip(z).ok_or("pauli: no element acts as conjugation by X or Z")?;
    let (lx, lz) = (system.inertia.local(x).ok_or("x outside inertia")?, system.inertia.local(z).ok_or("z outside inertia")?);
    let ratio = system.cocycle.commutator_ratio(lx, lz);
    ensure((ratio - c(-1.0, 0.0)).norm() <= RESIDUAL_BOUND, || format!("pauli: alpha(x,z)/alpha(z,x) = {ratio}"))
}

/// `Ind(M (x) W*)` is simple by both criteria with the exact dimension law.
fn criterion_5() -> Outcome {
    for inst in fixtures()? {
        let s = skew_group_algebra(&inst.action).map_err(err)?;
        let system = inertia(&inst.module, &inst.action, SEED).map_err(err)?;
        let iso = projective_isotypics(&system, SEED).map_err(err)?;
        for gamma in 0..iso.decomposition.classes.len() {
            let r = induced_simplicity(&system, &iso, gamma, &s, &inst.name, SEED).map_err(err)?;
            passed(&r)?;
            let d = format!("induced_dimension/{gamma}");
            let law = dim(&r, &d, "index")? * dim(&r, &d, "module_dim")? * dim(&r, &d, "w_dim")?;
            ensure(dim(&r, &d, "induced_dim")? == law, || format!("{}: dimension law fails", inst.name))?;
            ensure(
                dim(&r, &d, "index")? * system.inertia.order() == inst.group().order(),
                || format!("{}: index times inertia order is not |G|", inst.name),
            )?;
            let simple = format!("induced_simple/{gamma}");
            let full = dim(&r, &d, "induced_dim")?.pow(2);
            ensure(
                dim(&r, &simple, "commutant_dim")? == 1 && dim(&r, &simple, "min_cyclic_span_dim")? == full,
                || format!("{}: induced module fails a simplicity criterion", inst.name),
            )?;
        }
    }
    Ok(())
}

fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    let z = FiniteGroup::cyclic;
    let perms = |gens: &[Vec<usize>]| FiniteGroup::from_permutations(gens).expect("permutation group").0;
    vec![
        ("Z2", z(2)),
        ("Z3", z(3)),
        ("Z4", z(4)),
        ("Z5", z(5)),
        ("Z6", z(6)),
        ("Z7", z(7)),
        ("V4", FiniteGroup::direct_product(&z(2), &z(2))),
        ("S3", perms(&[vec![1, 0, 2], vec![1, 2, 0]])),
        ("D4", perms(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])),
        ("Z8", z(8)),
        ("Z2xZ4", FiniteGroup::direct_product(&z(2), &z(4))),
        ("Z2^3", FiniteGroup::direct_product(&FiniteGroup::direct_product(&z(2), &z(2)), &z(2))),
    ]
}

/// A seeded random module over `C[G]`: random multiplicities of the simple
/// modules, in a random basis.
fn random_group_module(simples: &[Module], rng: &mut numeric::Rng) -> Result<Module, String> {
    use rand::Rng as _;
    loop {
        let mut m: Option<Module> = None;
        for s in simples {
            for _ in 0..rng.random_range(0..=2) {
                m = Some(match m {
                    None => s.clone(),
                    Some(acc) => acc.direct_sum(s).map_err(err)?,
                });
            }
        }
        let Some(m) = m else { continue };
        if m.dim() > 8 {
            continue;
        }
        let d = m.dim();
        let p = numeric::identity(d) + numeric::random_matrix(rng, d, d) * c(0.3, 0.0);
        return m.conjugate(&p).map_err(err);
    }
}

/// `(1/|G|) sum_g conj(chi_M(g)) chi_N(g)`.
fn character_pairing(m: &Module, n: &Module, order: usize) -> usize {
    let s: C64 = (0..order).map(|g| m.rho(g).trace().conj() * n.rho(g).trace()).sum();
    (s.re / order as f64).round() as usize
}

/// `dim Hom = dim e(M* (x) N) = dim (M* (x) N)^G`, against characters.
fn criterion_6() -> Outcome {
    let groups = small_groups();
    let mut rng = numeric::rng(SEED);
    for pair in 0..RANDOM_MODULE_PAIRS {
        let (gname, g) = &groups[pair % groups.len()];
        let tga = Arc::new(twisted_group_algebra(&Cocycle::trivial(g), 1, TOL).map_err(err)?);
        let (_, dec) = decompose_regular(&tga.algebra, SEED).map_err(err)?;
        let simples: Vec<Module> = dec.classes.iter().map(|c| c.rep.clone()).collect();
        let m = random_group_module(&simples, &mut rng)?;
        let n = random_group_module(&simples, &mut rng)?;
        let oracle = character_pairing(&m, &n, g.order());
        let wm = TwistedModule { twisted: tga.clone(), module: m };
        let wn = TwistedModule { twisted: tga.clone(), module: n };
        let r = hom_inv_check(&wm, &wn, &format!("{gname}/{pair}"), SEED).map_err(err)?;
        passed(&r)?;
        let hom = dim(&r, "hom_equals_invariants", "hom_dim")?;
        let image = dim(&r, "hom_equals_invariants", "symmetrizer_image_dim")?;
        let fixed = dim(&r, "hom_equals_invariants", "fixed_space_dim")?;
        ensure(hom == oracle && image == oracle && fixed == oracle, || {
            format!("{gname}/{pair}: hom {hom}, image {image}, fixed {fixed}, characters {oracle}")
        })?;
    }
    Ok(())
}

/// Each `M_gamma` is simple over `A^G` by both routes with the dimension identity.
fn criterion_7() -> Outcome {
    for inst in fixtures()? {
        let r = main_theorem(&inst.module, &inst.action, &inst.name, SEED).map_err(err)?;
        passed(&r)?;
        let classes = dim(&r, "projective_system", "classes")?;
        for gamma in 0..classes {
            let d = format!("corner_dimension/{gamma}");
            let (em, mg, inv) = (
                dim(&r, &d, "e_induced_dim")?,
                dim(&r, &d, "m_gamma_dim")?,
                dim(&r, &d, "inv_w_w_dual_dim")?,
            );
            // Schur: Inv(W (x) W*) = End(W) is one-dimensional for simple W
            ensure(inv == 1 && em == mg * inv, || format!("{}: dim eM {em} vs {mg} x {inv}", inst.name))?;
            let direct = r.check(&format!("direct_route_simple/{gamma}")).map(|c| c.pass);
            let corner = r.check(&format!("corner_route_simple/{gamma}")).map(|c| c.pass);
            ensure(direct == Some(true) && corner == Some(true), || format!("{}: route verdicts", inst.name))?;
        }
        match inst.name.as_str() {
            "pauli" => {
                ensure(dim(&r, "direct_route_simple/0", "module_dim")? == 1, || "pauli: dim M_gamma".into())?;
                ensure(dim(&r, "projective_system", "invariant_dim")? == 1, || "pauli: A^G".into())?;
            }
            "swap" => {
                ensure(dim(&r, "direct_route_simple/0", "module_dim")? == 2, || "swap: dim M_gamma".into())?;
                ensure(dim(&r, "projective_system", "invariant_dim")? == 4, || "swap: A^G".into())?;
            }
            _ => {}
        }
    }
    Ok(())
}

/// `M` restricted to `A^G` decomposes with multiplicities `dim W_gamma`.
fn criterion_8() -> Outcome {
    for inst in fixtures_and_random()? {
        let r = complete_reducibility(&inst.module, &inst.action, &inst.name, SEED).map_err(err)?;
        passed(&r)?;
        let sum = dim(&r, "pieces_exhaust", "piece_dim_sum")?;
        ensure(sum == inst.module.dim(), || format!("{}: pieces sum to {sum}", inst.name))?;
        for c in r.checks.iter().filter(|c| c.name.starts_with("class_matches_gamma/")) {
            ensure(c.dims["multiplicity"] == c.dims["w_gamma_dim"], || format!("{}: {}", inst.name, c.name))?;
        }
    }
    Ok(())
}

/// Byte-identical reports and tolerance-stable verdicts.
fn criterion_9() -> Outcome {
    for name in FIXTURE_NAMES {
        let spec = instance_job(&fixture(name, TOL).map_err(err)?);
        let verdicts = |tol: f64| -> Result<Vec<(Status, Vec<bool>)>, String> {
            let job = build_job(&spec, Some(tol), None).map_err(|e| e.to_string())?;
            let report = run_job(&job, &[]);
            Ok(report
                .tasks
                .iter()
                .map(|t| (t.status, t.report.iter().flat_map(|r| r.checks.iter().map(|c| c.pass)).collect()))
                .collect())
        };
        let json = || -> Result<String, String> {
            let job = build_job(&spec, None, None).map_err(|e| e.to_string())?;
            Ok(render_json(&run_job(&job, &[])))
        };
        ensure(json()? == json()?, || format!("{name}: reports differ between runs"))?;
        let base = verdicts(TOL)?;
        ensure(base.iter().all(|(s, _)| *s == Status::Pass), || format!("{name}: not every task passes"))?;
        for tol in TOL_SWEEP {
            ensure(verdicts(tol)? == base, || format!("{name}: verdicts change at tol {tol:e}"))?;
        }
    }
    // and across processes
    let dir = std::env::temp_dir().join(format!("skewgroup-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("pauli.json");
    let spec = instance_job(&fixture("pauli", TOL).map_err(err)?);
    std::fs::write(&path, serde_json::to_string(&spec).expect("job serializes")).map_err(|e| e.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_skewgroup"))
            .args(["run", "--json", path.to_str().expect("utf-8 path")])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    let _ = std::fs::remove_dir_all(&dir);
    ensure(a.status.code() == Some(0) && a.stdout == b.stdout, || "binary reports differ".into())
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, title: "skew product", limit: secs(1), run: criterion_1 },
        Criterion { id: 2, title: "phi/psi isomorphisms", limit: secs(1), run: criterion_2 },
        Criterion { id: 3, title: "invariant theory", limit: secs(60), run: criterion_3 },
        Criterion { id: 4, title: "cocycle validity", limit: secs(1), run: criterion_4 },
        Criterion { id: 5, title: "induced simplicity", limit: secs(5), run: criterion_5 },
        Criterion { id: 6, title: "hom = invariants", limit: secs(10), run: criterion_6 },
        Criterion { id: 7, title: "multiplicity spaces simple", limit: secs(5), run: criterion_7 },
        Criterion { id: 8, title: "complete reducibility", limit: secs(30), run: criterion_8 },
        Criterion { id: 9, title: "determinism and tolerance stability", limit: None, run: criterion_9 },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, c.limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:.0?}"));
            }
        }
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {} ({elapsed:.2?})", c.id, c.title),
            Err(e) => {
                failures += 1;
                println!("criterion {}: FAIL  {} ({elapsed:.2?}): {e}", c.id, c.title);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

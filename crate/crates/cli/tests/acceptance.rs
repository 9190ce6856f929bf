//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use vkampen::deleted_product::{
    deleted_product_pairs, evaluate_on_cycle, finger_move_cochain, pair_cycle_basis, z_j_on_vertices, FingerMoveBasis,
    FingerMoveSpan, SkewCochain,
};
use vkampen::forms::{omega_psi, psi_boundary_class, HomomorphismPsi, IntersectionForm};
use vkampen::geometry::{reduce_ring, vk_representative, vk_representative_with_retry, Placement};
use vkampen::kuhnel::{closed_form_bound, lemma_zj_identity, max_admissible_n, radon_threshold};
use vkampen::quadratic::{
    brute_force_psi_search, build_system, decode_model, emit_dimacs_xor, solve_z2, QuadraticSystem, SolveOptions, Status,
};
use vkampen::sat::dimacs::parse_dimacs;
use vkampen::sat::{self, Budget, SatResult};
use vkampen::simplicial::{combinations, Chain, Simplex, SimplicialComplex};
use vkampen::{Integer, Z2};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vkampen_json(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_vkampen"))
        .args(args)
        .arg("--json")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> Result<T, String>) -> Result<T, String> {
    let start = Instant::now();
    let v = f()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))?;
    Ok(v)
}

fn delta(n: u32, k: usize) -> SimplicialComplex {
    SimplicialComplex::simplex_skeleton(n, k).unwrap()
}

fn theta_z2(complex: &SimplicialComplex, k: usize) -> SkewCochain<Z2> {
    reduce_ring(&vk_representative_with_retry(complex, k, 0).unwrap().1)
}

fn system(complex: &SimplicialComplex, k: usize, form: &IntersectionForm<Z2>) -> QuadraticSystem<Z2> {
    build_system(complex, k, form, &theta_z2(complex, k)).unwrap()
}

fn criterion_1() -> Outcome {
    for source in ["delta:4:1", "delta:6:2"] {
        let r = timed(Duration::from_secs(5), source, || vkampen_json(&["obstruct", "--complex", source]))?;
        ensure(r["class"] == "nontrivial", || format!("{source}: class {}", r["class"]))?;
        let z = r["z_j"].as_array().ok_or("missing z_j")?;
        ensure(!z.is_empty() && z.iter().all(|v| v["value"] == 1), || format!("{source}: z_J {z:?}"))?;
    }
    Ok("K5 and the 2-skeleton of the 6-simplex are obstructed, z_J = 1".into())
}

fn criterion_2() -> Outcome {
    let r = timed(Duration::from_secs(1), "obstruct delta:3:1", || {
        vkampen_json(&["obstruct", "--complex", "delta:3:1", "--ring", "Z"])
    })?;
    ensure(r["class"] == "trivial", || format!("class {}", r["class"]))?;
    let coeffs: Vec<Integer> = r["f_witness"]
        .as_array()
        .ok_or("no F-witness")?
        .iter()
        .map(|v| Integer::from(v.as_i64().unwrap()))
        .collect();
    let complex = delta(3, 1);
    let (_, theta) = vk_representative_with_retry(&complex, 1, r["seed"].as_u64().unwrap()).unwrap();
    let sum = FingerMoveBasis::new(&complex, 1).unwrap().expand(&coeffs).unwrap();
    ensure(sum.sub(&theta).unwrap().is_zero(), || "F-witness does not sum to ϑ".into())?;
    Ok(format!("K4 trivial over Z, witness of {} finger moves re-expanded to ϑ", coeffs.len()))
}

fn solve_status(n: u32, form: &str) -> Result<String, String> {
    let source = format!("delta:{n}:1");
    let r = vkampen_json(&["solve", "--complex", &source, "--form", form])?;
    Ok(r["status"].as_str().unwrap_or_default().to_string())
}

fn criterion_3() -> Outcome {
    timed(Duration::from_secs(30), "projective plane row", || {
        let (a, b) = (solve_status(5, "identity:1")?, solve_status(6, "identity:1")?);
        ensure(a == "sat" && b == "unsat", || format!("K6 {a}, K7 {b}"))
    })?;
    Ok("K6 sat, K7 unsat for Ω ~ I_1".into())
}

fn criterion_4() -> Outcome {
    timed(Duration::from_secs(300), "torus row", || {
        let (a, b) = (solve_status(6, "symplectic:1")?, solve_status(7, "symplectic:1")?);
        ensure(a == "sat" && b == "unsat", || format!("K7 {a}, K8 {b}"))
    })?;
    Ok("K7 sat, K8 unsat for the hyperbolic form".into())
}

fn criterion_5() -> Outcome {
    // (k, β, identity max n, symplectic (lower, upper) allowed range).
    let rows: [(usize, usize, u32, Option<(u32, u32)>); 6] = [
        (1, 1, 5, None),
        (1, 2, 5, Some((6, 6))),
        (1, 3, 6, None),
        (1, 4, 7, Some((7, 7))),
        (2, 1, 8, None),
        (2, 2, 8, Some((7, 8))),
    ];
    let budget = Budget {
        time: Some(Duration::from_secs(300)),
        branches: None,
    };
    let mut cells = Vec::new();
    for (k, beta, id_max, sym) in rows {
        let start = Instant::now();
        let id = max_admissible_n(k, &IntersectionForm::identity(k, beta).unwrap(), 64, &budget).unwrap();
        ensure(id.lower == id_max && id.upper == id_max, || {
            format!("k={k} β={beta} identity: {}..{}", id.lower, id.upper)
        })?;
        let mut cell = format!("k={k} β={beta}: {id_max}");
        if let Some((lo, hi)) = sym {
            let s = max_admissible_n(k, &IntersectionForm::symplectic(k, beta / 2), 64, &budget).unwrap();
            ensure(lo <= s.lower && s.upper <= hi, || {
                format!("k={k} β={beta} symplectic: {}..{}", s.lower, s.upper)
            })?;
            cell += &if s.is_exact() {
                format!(", {}", s.lower)
            } else {
                format!(", {}≤n≤{}", s.lower, s.upper)
            };
        }
        let took = start.elapsed();
        ensure(took < Duration::from_secs(1800), || format!("k={k} β={beta} took {took:?}"))?;
        cells.push(format!("{cell} ({:.1}s)", took.as_secs_f64()));
    }
    Ok(cells.join("; "))
}

fn criterion_6() -> Outcome {
    let got = [
        closed_form_bound(1, 1, false),
        closed_form_bound(2, 1, false),
        closed_form_bound(1, 2, true),
        radon_threshold(1, 1, false),
    ];
    ensure(got == [5, 8, 6, 7], || format!("{got:?}"))?;
    Ok("5, 8, 6 and Radon 7".into())
}

fn random_graph(rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let n: u32 = rng.gen_range(4..=6);
    let mut edges: Vec<Vec<u32>> = combinations(n, 2);
    let keep = rng.gen_range(5.min(edges.len())..=10.min(edges.len()));
    for i in 0..keep {
        let j = rng.gen_range(i..edges.len());
        edges.swap(i, j);
    }
    edges.truncate(keep);
    SimplicialComplex::build(n, &edges).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let forms = [
        IntersectionForm::trivial(1),
        IntersectionForm::identity(1, 1).unwrap(),
        IntersectionForm::identity(1, 2).unwrap(),
        IntersectionForm::symplectic(1, 1),
    ];
    let mut sat = 0;
    let mut total = 0;
    timed(Duration::from_secs(600), "oracle comparison", || {
        for _ in 0..100 {
            let complex = random_graph(&mut rng);
            let theta = theta_z2(&complex, 1);
            for form in &forms {
                let sys = build_system(&complex, 1, form, &theta).unwrap();
                let fast = solve_z2(&sys, &SolveOptions::default()).unwrap();
                let brute = brute_force_psi_search(&complex, 1, form, &theta, 20).unwrap();
                ensure(fast.status == brute.status && fast.status != Status::Unknown, || {
                    format!("{:?} with {form:?}: {} vs {}", complex.facets(), fast.status, brute.status)
                })?;
                sat += usize::from(fast.status == Status::Sat);
                total += 1;
            }
        }
        Ok(())
    })?;
    Ok(format!("{total} instances agree ({sat} sat)"))
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    timed(Duration::from_secs(300), "placements", || {
        for (n, k) in [(4u32, 1usize), (6, 2)] {
            let complex = delta(n, k);
            let span = FingerMoveSpan::<Integer>::new(&complex, k).unwrap();
            let mut thetas = Vec::new();
            let mut seed = 0;
            while thetas.len() < 20 {
                let p = Placement::random(n + 1, k, 1000, seed).unwrap();
                seed += 1;
                if let Ok(t) = vk_representative(&complex, k, &p) {
                    thetas.push(t);
                }
            }
            for i in 0..thetas.len() {
                for j in i + 1..thetas.len() {
                    let d = thetas[i].sub(&thetas[j]).unwrap();
                    ensure(span.membership(&d).unwrap().is_some(), || format!("Δ_{n}^({k}) placements {i}, {j}"))?;
                    checked += 1;
                }
            }
        }
        Ok(())
    })?;
    Ok(format!("{checked} pairwise differences lie in F over Z"))
}

fn random_form(rng: &mut ChaCha8Rng, k: usize) -> IntersectionForm<Z2> {
    let b = rng.gen_range(0..=2);
    let mut m = vec![vec![Z2(false); b]; b];
    for i in 0..b {
        for j in i..b {
            let v = Z2(rng.gen());
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    IntersectionForm::custom(k, m).unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checks = 0;
    timed(Duration::from_secs(120), "z_J identity", || {
        for round in 0..200 {
            let k = 1 + round % 2;
            let n = 2 * k as u32 + 3;
            let complex = delta(n, k);
            let form = random_form(&mut rng, k);
            let b = form.rank();
            let mut psi = HomomorphismPsi::zero(&complex, k, b);
            for s in complex.simplices(k) {
                psi.set(s.clone(), (0..b).map(|_| Z2(rng.gen())).collect()).unwrap();
            }
            let omega = omega_psi(&psi, &form, &complex).unwrap();
            for j in combinations(n + 1, 2 * k + 3) {
                let direct = evaluate_on_cycle(&omega, &z_j_on_vertices(&complex, k, &j).unwrap()).unwrap();
                for &v in &j {
                    let rest: Vec<u32> = j.iter().copied().filter(|&u| u != v).collect();
                    let mut through_v = Z2(false);
                    for a in combinations(2 * k as u32 + 2, k + 1) {
                        if a[0] != 0 {
                            continue;
                        }
                        let side = |pick: bool| {
                            let mut vs: Vec<u32> =
                                (0..rest.len() as u32).filter(|i| a.contains(i) == pick).map(|i| rest[i as usize]).collect();
                            vs.push(v);
                            psi_boundary_class(&psi, &Simplex::new(vs).unwrap()).unwrap()
                        };
                        through_v = through_v + form.evaluate(&side(true), &side(false)).unwrap();
                    }
                    let (lhs, rhs) = lemma_zj_identity(&j, v, &psi, &form).unwrap();
                    ensure(lhs == direct && rhs == through_v && lhs == rhs, || {
                        format!("k={k} J={j:?} v={v}: {lhs:?} {rhs:?} {direct:?} {through_v:?}")
                    })?;
                    checks += 1;
                }
            }
        }
        Ok(())
    })?;
    Ok(format!("{checks} (ψ, J, v) triples"))
}

fn property(name: &str, cases: u32, strategy: impl Strategy<Value = u64>, f: impl Fn(u64) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, f).map_err(|e| format!("{name}: {e}"))
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn criterion_10() -> Outcome {
    property("skew-symmetry", 24, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=2);
        let complex = delta(2 * k as u32 + 2, k);
        let p = Placement::random(complex.n_vertices(), k, 500, seed).unwrap();
        let Ok(theta) = vk_representative(&complex, k, &p) else {
            return Ok(());
        };
        let form = IntersectionForm::<Integer>::symplectic(k, 1);
        let mut psi = HomomorphismPsi::zero(&complex, k, 2);
        for s in complex.simplices(k) {
            psi.set(s.clone(), (0..2).map(|_| Integer::from(rng.gen_range(-3..=3))).collect()).unwrap();
        }
        let omega = omega_psi(&psi, &form, &complex).unwrap();
        let basis = FingerMoveBasis::new(&complex, k).unwrap();
        let moves: Vec<SkewCochain<Integer>> = basis
            .moves()
            .iter()
            .take(5)
            .map(|m| finger_move_cochain(&m.eta, &m.mu, &complex).unwrap())
            .collect();
        let sign = if k % 2 == 0 { Integer::one() } else { -Integer::one() };
        for xi in [&theta, &omega].into_iter().chain(&moves) {
            for pair in deleted_product_pairs(&complex, k).pairs() {
                let (a, b) = (pair.first(), pair.second());
                if xi.value(b, a) != &sign * xi.value(a, b) {
                    return Err(fail(format!("skew-symmetry fails on {a:?} × {b:?}")));
                }
            }
        }
        Ok(())
    })?;

    property("∂∂ = 0", 64, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(2..=4);
        let mut chain = Chain::<Integer>::zero();
        for _ in 0..rng.gen_range(1..6) {
            let mut vs: Vec<u32> = (0..9).collect();
            for i in 0..=d {
                let j = rng.gen_range(i..vs.len());
                vs.swap(i, j);
            }
            vs.truncate(d + 1);
            chain.add_term(Simplex::new(vs).unwrap(), Integer::from(rng.gen_range(-4..=4))).unwrap();
        }
        let dd = chain.boundary().unwrap().boundary().unwrap();
        if dd.is_zero() {
            Ok(())
        } else {
            Err(fail(format!("∂∂ = {dd:?}")))
        }
    })?;

    property("finger moves vanish on cycles", 16, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let complex = if rng.gen() { random_graph(&mut rng) } else { delta(5, 2) };
        let k = complex.dim().unwrap();
        let basis = FingerMoveBasis::new(&complex, k).unwrap();
        let cycles = pair_cycle_basis(&complex, k);
        for m in basis.moves().iter().take(12) {
            let phi = finger_move_cochain::<Z2>(&m.eta, &m.mu, &complex).unwrap();
            for z in &cycles {
                if evaluate_on_cycle(&phi, z).unwrap() != Z2(false) {
                    return Err(fail(format!("φ({m:?}) is nonzero on a cycle")));
                }
            }
        }
        Ok(())
    })?;

    let forms = [
        IntersectionForm::identity(1, 1).unwrap(),
        IntersectionForm::identity(1, 2).unwrap(),
        IntersectionForm::symplectic(1, 1),
    ];
    property("witness soundness and DIMACS round trip", 24, any::<u64>(), |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let complex = random_graph(&mut rng);
        let form = &forms[rng.gen_range(0..forms.len())];
        let sys = system(&complex, 1, form);
        let report = solve_z2(&sys, &SolveOptions::default()).unwrap();
        let export = emit_dimacs_xor(&sys);
        let parsed = parse_dimacs(&export.text).unwrap();
        let (res, _) = sat::solve(&parsed, &Budget::unlimited());
        match (&report.status, &res) {
            (Status::Sat, SatResult::Sat(model)) => {
                let w = decode_model(&sys, &export.var_map, model).unwrap();
                if !sys.check_witness(&w).unwrap().is_valid() {
                    return Err(fail("decoded model fails the system".into()));
                }
                let w = report.witness.as_ref().unwrap().to_witness::<Z2>();
                // θ + ω_ψ = Σ x φ, recomputed from scratch.
                let mut psi = HomomorphismPsi::zero(&complex, 1, form.rank());
                for (s, y) in sys.simplices().iter().zip(&w.y) {
                    psi.set(s.clone(), y.clone()).unwrap();
                }
                let lhs = theta_z2(&complex, 1).add(&omega_psi(&psi, form, &complex).unwrap()).unwrap();
                let rhs = FingerMoveBasis::new(&complex, 1).unwrap().expand(&w.x).unwrap();
                if !lhs.sub(&rhs).unwrap().is_zero() {
                    return Err(fail("solver witness is unsound".into()));
                }
                Ok(())
            }
            (Status::Unsat, SatResult::Unsat) => Ok(()),
            (s, r) => Err(fail(format!("solver {s} but DIMACS {r:?}"))),
        }
    })?;

    for form in &forms {
        let statuses: Vec<Status> = (3..=6)
            .map(|n| solve_z2(&system(&delta(n, 1), 1, form), &SolveOptions::default()).unwrap().status)
            .collect();
        let first_unsat = statuses.iter().position(|s| *s == Status::Unsat).unwrap_or(statuses.len());
        ensure(
            statuses[..first_unsat].iter().all(|s| *s == Status::Sat) && statuses[first_unsat..].iter().all(|s| *s == Status::Unsat),
            || format!("monotonicity in n fails for {form:?}: {statuses:?}"),
        )?;
    }
    Ok("skew-symmetry, ∂∂=0, cycle vanishing, witnesses, monotonicity, DIMACS".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("classical nonembeddability", criterion_1),
        ("planar baseline", criterion_2),
        ("projective-plane row", criterion_3),
        ("torus row", criterion_4),
        ("table of maximal n", criterion_5),
        ("closed-form calculators", criterion_6),
        ("oracle equivalence", criterion_7),
        ("representative well-definedness", criterion_8),
        ("z_J identity", criterion_9),
        ("property suite", criterion_10),
    ];
    // Optional criterion numbers select a subset, e.g. `-- 7 10`.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name} [{secs:.2}s]: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

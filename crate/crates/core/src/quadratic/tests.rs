use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::deleted_product::{is_in_f, SkewCochain};
use crate::forms::{omega_psi, HomomorphismPsi};
use crate::geometry::{reduce_ring, vk_representative_with_retry};
use crate::ring::{Integer, Z2};
use crate::sat::dimacs::parse_dimacs;
use crate::sat::{self as sat_mod, SatResult};
use crate::simplicial::{Simplex, SimplicialComplex};

fn delta(n: u32, k: usize) -> SimplicialComplex {
    SimplicialComplex::simplex_skeleton(n, k).unwrap()
}

fn theta_z2(complex: &SimplicialComplex, k: usize) -> SkewCochain<Z2> {
    reduce_ring(&vk_representative_with_retry(complex, k, 0).unwrap().1)
}

fn system(complex: &SimplicialComplex, k: usize, form: IntersectionForm<Z2>) -> QuadraticSystem<Z2> {
    build_system(complex, k, &form, &theta_z2(complex, k)).unwrap()
}

fn solve(sys: &QuadraticSystem<Z2>) -> SolveReport {
    solve_z2(sys, &SolveOptions::default()).unwrap()
}

#[test]
fn system_sizes() {
    let k5 = system(&delta(4, 1), 1, IntersectionForm::trivial(1));
    assert_eq!((k5.n_equations(), k5.n_x(), k5.n_y()), (15, 30, 0));
    let k6 = system(&delta(5, 1), 1, IntersectionForm::identity(1, 1).unwrap());
    assert_eq!((k6.n_equations(), k6.n_y()), (45, 15));
    let sym = system(&delta(4, 1), 1, IntersectionForm::symplectic(1, 1));
    assert_eq!(sym.n_y(), 20);
}

#[test]
fn build_rejects_mismatched_dimensions() {
    let theta = theta_z2(&delta(4, 1), 1);
    assert!(build_system(&delta(4, 1), 1, &IntersectionForm::<Z2>::trivial(2), &theta).is_err());
    assert!(build_system(&delta(4, 2), 2, &IntersectionForm::<Z2>::trivial(2), &theta).is_err());
}

#[test]
fn projective_plane_row() {
    assert_eq!(solve(&system(&delta(4, 1), 1, IntersectionForm::trivial(1))).status, Status::Unsat);
    let id = || IntersectionForm::identity(1, 1).unwrap();
    let k6 = solve(&system(&delta(5, 1), 1, id()));
    assert_eq!(k6.status, Status::Sat);
    assert!(k6.witness.is_some());
    assert_eq!(solve(&system(&delta(6, 1), 1, id())).status, Status::Unsat);
}

#[test]
fn witness_checking() {
    let sys = system(&delta(4, 1), 1, IntersectionForm::trivial(1));
    let zero = Witness {
        x: vec![Z2::ZERO; 30],
        y: vec![vec![]; 10],
    };
    assert!(!sys.check_witness(&zero).unwrap().is_valid());
    assert!(sys
        .check_witness(&Witness {
            x: vec![Z2::ZERO; 3],
            y: vec![vec![]; 10]
        })
        .is_err());

    let sys = system(&delta(5, 1), 1, IntersectionForm::identity(1, 1).unwrap());
    let w = solve(&sys).witness.unwrap().to_witness::<Z2>();
    assert!(sys.check_witness(&w).unwrap().is_valid());
    for j in [0, 7, 29] {
        let mut bad = w.clone();
        bad.x[j] = bad.x[j] + Z2::ONE;
        let check = sys.check_witness(&bad).unwrap();
        assert!(!check.is_valid());
        let touched: Vec<usize> = sys.basis().column(j).iter().map(|&(p, _)| p).collect();
        assert_eq!(check.violated, touched);
    }
}

#[test]
fn enumeration_and_sat_agree() {
    let cases = [
        (delta(5, 1), IntersectionForm::identity(1, 1).unwrap()),
        (delta(6, 1), IntersectionForm::identity(1, 1).unwrap()),
        (delta(5, 1), IntersectionForm::symplectic(1, 1)),
        (delta(4, 1), IntersectionForm::identity(1, 2).unwrap()),
    ];
    for (complex, form) in cases {
        let sys = system(&complex, 1, form);
        let by_enum = solve_z2(&sys, &SolveOptions::default()).unwrap();
        let by_sat = solve_z2(
            &sys,
            &SolveOptions {
                enumeration_max_bits: 0,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(by_enum.stats.strategy, Some(Strategy::Enumeration));
        assert_eq!(by_sat.stats.strategy, Some(Strategy::Sat));
        assert_eq!(by_enum.status, by_sat.status);
        let single = solve_z2(
            &sys,
            &SolveOptions {
                threads: 1,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(single.witness, by_enum.witness, "enumeration must be schedule independent");
    }
}

#[test]
fn budgets_yield_unknown() {
    let sys = system(&delta(6, 1), 1, IntersectionForm::identity(1, 1).unwrap());
    let tiny = SolveOptions {
        budget: Budget {
            time: None,
            branches: Some(1),
        },
        threads: 1,
        ..SolveOptions::default()
    };
    assert_eq!(solve_z2(&sys, &tiny).unwrap().status, Status::Unknown);
    let tiny_sat = SolveOptions {
        enumeration_max_bits: 0,
        ..tiny
    };
    assert_eq!(solve_z2(&sys, &tiny_sat).unwrap().status, Status::Unknown);
}

#[test]
fn brute_force_agrees_on_small_complete_graphs() {
    let forms = [
        IntersectionForm::trivial(1),
        IntersectionForm::identity(1, 1).unwrap(),
        IntersectionForm::symplectic(1, 1),
    ];
    for n in [3u32, 4, 5] {
        let complex = delta(n, 1);
        let theta = theta_z2(&complex, 1);
        for form in &forms {
            let bits = complex.count(1) * form.rank();
            if bits > 20 {
                continue;
            }
            let sys = build_system(&complex, 1, form, &theta).unwrap();
            let brute = brute_force_psi_search(&complex, 1, form, &theta, 20).unwrap();
            assert_eq!(solve(&sys).status, brute.status, "n={n} form={form:?}");
            if let Some(w) = brute.witness {
                assert!(sys.check_witness(&w.to_witness()).unwrap().is_valid());
            }
        }
    }
    let k6 = delta(5, 1);
    assert!(brute_force_psi_search(&k6, 1, &IntersectionForm::symplectic(1, 1), &theta_z2(&k6, 1), 20).is_err());
}

#[test]
fn only_the_restriction_to_cycles_matters() {
    // ψ = λ∘∂ vanishes on cycles; its ω must lie in F.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, k) in [(5u32, 1usize), (6, 1), (6, 2)] {
        let complex = delta(n, k);
        for form in [IntersectionForm::<Z2>::identity(k, 2).unwrap(), IntersectionForm::symplectic(k, 1)] {
            for _ in 0..5 {
                let lambda: Vec<(Simplex, Vec<Z2>)> = complex
                    .simplices(k - 1)
                    .map(|s| (s.clone(), (0..2).map(|_| Z2(rng.gen())).collect()))
                    .collect();
                let mut psi = HomomorphismPsi::zero(&complex, k, 2);
                for s in complex.simplices(k) {
                    let mut v = vec![Z2::ZERO; 2];
                    for (_, f) in s.facets() {
                        let l = &lambda.iter().find(|(t, _)| *t == f).unwrap().1;
                        v = v.iter().zip(l).map(|(a, b)| *a + *b).collect();
                    }
                    psi.set(s.clone(), v).unwrap();
                }
                let omega = omega_psi(&psi, &form, &complex).unwrap();
                assert!(is_in_f(&omega, &complex).unwrap().is_some());
            }
        }
    }
}

#[test]
fn gauge_fixes_a_complement_of_the_cycles() {
    let free = gauge_free_simplices(&delta(6, 1), 1);
    let simplices: Vec<_> = delta(6, 1).simplices(1).cloned().collect();
    // 21 edges, a spanning tree of 6 fixed: the star of vertex 0.
    assert_eq!(free.iter().filter(|&&f| !f).count(), 6);
    for (s, f) in simplices.iter().zip(&free) {
        assert_eq!(*f, !s.contains_vertex(0));
    }
    let free2 = gauge_free_simplices(&delta(6, 2), 2);
    assert_eq!(free2.iter().filter(|&&f| f).count(), 35 - 15);
}

#[test]
fn dimacs_export_shape() {
    let sys = system(&delta(4, 1), 1, IntersectionForm::trivial(1));
    let export = emit_dimacs_xor(&sys);
    assert_eq!(export.text.lines().filter(|l| l.starts_with('x')).count(), 15);
    assert_eq!(export.formula.clauses().len(), 0);
    assert_eq!(export.var_map.x.len(), 30);
    let sys = system(&delta(4, 1), 1, IntersectionForm::identity(1, 1).unwrap());
    let export = emit_dimacs_xor(&sys);
    assert_eq!(export.var_map.products.len(), 15);
    assert_eq!(export.formula.clauses().len(), 45);
    assert_eq!(emit_dimacs_xor(&sys).text, export.text);
}

fn random_graph(rng: &mut ChaCha8Rng, n: u32, max_edges: usize) -> SimplicialComplex {
    let mut edges: Vec<Vec<u32>> = crate::simplicial::combinations(n, 2);
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.gen_range(0..=i));
    }
    let m = rng.gen_range(4..=max_edges.min(edges.len()));
    edges.truncate(m);
    SimplicialComplex::build(n, &edges).unwrap()
}

#[test]
fn dimacs_round_trip_matches_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let forms = [
        IntersectionForm::trivial(1),
        IntersectionForm::identity(1, 1).unwrap(),
        IntersectionForm::symplectic(1, 1),
    ];
    for round in 0..50 {
        let complex = random_graph(&mut rng, 6, 11);
        let form = forms[round % forms.len()].clone();
        let sys = system(&complex, 1, form);
        let export = emit_dimacs_xor(&sys);
        let parsed = parse_dimacs(&export.text).unwrap();
        assert_eq!(parsed, export.formula);
        let (res, _) = sat_mod::solve(&parsed, &Budget::unlimited());
        let direct = solve(&sys).status;
        match res {
            SatResult::Sat(model) => {
                assert_eq!(direct, Status::Sat, "round {round}");
                let listing: String = model
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| format!("{} ", if v { i as i64 + 1 } else { -(i as i64 + 1) }))
                    .collect();
                let reread = parse_model(&format!("s SATISFIABLE\nv {listing}0\n"), export.var_map.num_vars).unwrap();
                let w = decode_model(&sys, &export.var_map, &reread).unwrap();
                assert!(sys.check_witness(&w).unwrap().is_valid(), "round {round}");
            }
            SatResult::Unsat => assert_eq!(direct, Status::Unsat, "round {round}"),
            SatResult::Unknown => unreachable!(),
        }
    }
}

#[test]
fn swapped_orientation_gives_the_same_equation() {
    // Over Z: lhs(τ×σ) = (-1)^k lhs(σ×τ) and likewise for ϑ.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (n, k, form) in [
        (5u32, 1usize, IntersectionForm::<Integer>::symplectic(1, 1)),
        (6, 2, IntersectionForm::<Integer>::identity(2, 2).unwrap()),
    ] {
        let complex = delta(n, k);
        let (_, theta) = vk_representative_with_retry(&complex, k, 0).unwrap();
        let sys = build_system(&complex, k, &form, &theta).unwrap();
        let x: Vec<Integer> = (0..sys.n_x()).map(|_| Integer::from(rng.gen_range(-2..3))).collect();
        let mut psi = HomomorphismPsi::new(form.rank());
        for s in sys.simplices() {
            psi.set(s.clone(), (0..form.rank()).map(|_| Integer::from(rng.gen_range(-2..3))).collect())
                .unwrap();
        }
        let linear = sys.basis().expand(&x).unwrap();
        for pair in sys.pairs().pairs() {
            let (a, b) = (pair.first(), pair.second());
            let fwd = linear.value(a, b) + form.evaluate(psi.get(a).unwrap(), psi.get(b).unwrap()).unwrap()
                - theta.value(a, b);
            let back = linear.value(b, a) + form.evaluate(psi.get(b).unwrap(), psi.get(a).unwrap()).unwrap()
                - theta.value(b, a);
            assert_eq!(back, Integer::neg_one_pow(k) * fwd);
        }
    }
}

#[test]
fn satisfiability_passes_to_full_subcomplexes() {
    let complex = delta(6, 1);
    let form = IntersectionForm::<Z2>::symplectic(1, 1);
    let placement = crate::geometry::Placement::default_for(7, 1).unwrap();
    let theta = reduce_ring(&crate::geometry::vk_representative(&complex, 1, &placement).unwrap());
    let sys = build_system(&complex, 1, &form, &theta).unwrap();
    let report = solve(&sys);
    assert_eq!(report.status, Status::Sat);
    let w = report.witness.unwrap().to_witness::<Z2>();
    for drop in 0..7u32 {
        let keep: Vec<u32> = (0..7).filter(|&v| v != drop).collect();
        let (sub, labels) = complex.induced_subcomplex(&keep).unwrap();
        let relabel = |s: &Simplex| Simplex::new(s.vertices().iter().map(|&v| labels[v as usize]).collect()).unwrap();
        let sub_theta = reduce_ring(&crate::geometry::vk_representative(&complex, 1, &placement).unwrap());
        let sub_placement = crate::geometry::Placement::new(
            1,
            labels.iter().map(|&v| placement.parameters()[v as usize].clone()).collect(),
        )
        .unwrap();
        let sub_sys = build_system(
            &sub,
            1,
            &form,
            &reduce_ring(&crate::geometry::vk_representative(&sub, 1, &sub_placement).unwrap()),
        )
        .unwrap();
        // Restrict the witness.
        let x = sub_sys
            .basis()
            .moves()
            .iter()
            .map(|m| {
                let j = sys
                    .basis()
                    .moves()
                    .iter()
                    .position(|big| big.eta == relabel(&m.eta) && big.mu == relabel(&m.mu))
                    .unwrap();
                w.x[j]
            })
            .collect();
        let y = sub_sys
            .simplices()
            .iter()
            .map(|s| w.y[sys.simplices().iter().position(|t| *t == relabel(s)).unwrap()].clone())
            .collect();
        let restricted = Witness { x, y };
        assert!(sub_sys.check_witness(&restricted).unwrap().is_valid(), "drop {drop}");
        assert!(!sub_theta.is_zero());
    }
}

#[test]
fn integer_modes() {
    let k4 = delta(3, 1);
    let (_, theta) = vk_representative_with_retry(&k4, 1, 0).unwrap();
    let sys = build_system(&k4, 1, &IntersectionForm::trivial(1), &theta).unwrap();
    let r = solve_linear_z(&sys).unwrap();
    assert_eq!(r.status, Status::Sat);
    assert!(sys.check_witness(&r.witness.unwrap().to_witness()).unwrap().is_valid());

    let k5 = delta(4, 1);
    let (_, theta5) = vk_representative_with_retry(&k5, 1, 0).unwrap();
    let sys5 = build_system(&k5, 1, &IntersectionForm::trivial(1), &theta5).unwrap();
    assert_eq!(box_search_z(&sys5, 3, &Budget::unlimited()).unwrap().status, Status::Unsat);

    let sym = IntersectionForm::<Integer>::symplectic(1, 1);
    let sys_sym = build_system(&k4, 1, &sym, &theta).unwrap();
    assert!(solve_linear_z(&sys_sym).is_err());
    let r = box_search_z(&sys_sym, 1, &Budget::unlimited()).unwrap();
    assert_eq!(r.status, Status::Sat);

    let sys5_sym = build_system(&k5, 1, &sym, &theta5).unwrap();
    let limited = Budget {
        time: None,
        branches: Some(10),
    };
    let r = box_search_z(&sys5_sym, 1, &limited).unwrap();
    assert_ne!(r.status, Status::Unsat, "a box search never proves unsat");
}

#[test]
fn report_round_trips_through_json() {
    let sys = system(&delta(5, 1), 1, IntersectionForm::identity(1, 1).unwrap());
    let r = solve(&sys);
    let text = serde_json::to_string(&r).unwrap();
    assert!(text.contains("\"status\":\"sat\""));
    assert_eq!(serde_json::from_str::<SolveReport>(&text).unwrap(), r);
    let unsat = solve(&system(&delta(4, 1), 1, IntersectionForm::trivial(1)));
    let text = serde_json::to_string(&unsat).unwrap();
    assert!(!text.contains("witness"));
    assert_eq!(serde_json::from_str::<SolveReport>(&text).unwrap(), unsat);
}

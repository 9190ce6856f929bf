//! Exhaustive search over homomorphisms, and the integer-coefficient modes.

use std::time::Instant;

use num_traits::Zero;

use super::{QuadraticSystem, SolveReport, SolveStats, Status, Strategy, Witness};
use crate::deleted_product::{deleted_product_pairs, FingerMoveSpan, SkewCochain};
use crate::error::{Error, Result};
use crate::forms::{omega_psi, HomomorphismPsi, IntersectionForm};
use crate::linalg::HermiteForm;
use crate::ring::{Integer, Z2};
use crate::sat::Budget;
use crate::simplicial::SimplicialComplex;

/// Tries every `ψ: C_k → Z2^b` and tests `ω_ψ - ϑ ∈ F` directly.
///
/// Shares nothing with [`solve_z2`](super::solve_z2) beyond the finger-move
/// span, which makes it an independent check of the reduction.
pub fn brute_force_psi_search(
    complex: &SimplicialComplex,
    k: usize,
    form: &IntersectionForm<Z2>,
    theta: &SkewCochain<Z2>,
    max_bits: usize,
) -> Result<SolveReport> {
    let start = Instant::now();
    let pairs = deleted_product_pairs(complex, k);
    let simplices = pairs.simplices();
    let b = form.rank();
    let bits = simplices.len() * b;
    if bits > max_bits || bits >= 63 {
        return Err(Error::TooLarge(format!(
            "{bits} homomorphism bits exceed the brute-force limit of {max_bits}"
        )));
    }
    let span = FingerMoveSpan::<Z2>::new(complex, k)?;
    let theta_values = theta.to_vector(&pairs)?;
    let mut values = vec![vec![Z2::ZERO; b]; simplices.len()];
    let mut diff = vec![Z2::ZERO; pairs.len()];
    let mut tried = 0u64;
    for mask in 0..1u64 << bits {
        tried += 1;
        for (s, v) in values.iter_mut().enumerate() {
            for (i, c) in v.iter_mut().enumerate() {
                *c = Z2(mask >> (s * b + i) & 1 == 1);
            }
        }
        for (p, d) in diff.iter_mut().enumerate() {
            let (a, c) = pairs.endpoints(p);
            *d = form.evaluate(&values[a], &values[c])? - theta_values[p];
        }
        if let Some(x) = span.membership_values(&diff)? {
            let mut psi = HomomorphismPsi::new(b);
            for (s, v) in simplices.iter().zip(&values) {
                psi.set(s.clone(), v.clone())?;
            }
            let expected = omega_psi(&psi, form, complex)?.sub(theta)?;
            assert_eq!(span.basis().expand(&x)?, expected, "span witness does not reproduce ω_ψ - ϑ");
            return Ok(SolveReport {
                status: Status::Sat,
                witness: Some(Witness { x, y: values }.to_file()?),
                stats: oracle_stats(Strategy::BruteForce, &pairs, span.basis().cols(), bits, tried, start),
            });
        }
    }
    Ok(SolveReport {
        status: Status::Unsat,
        witness: None,
        stats: oracle_stats(Strategy::BruteForce, &pairs, span.basis().cols(), bits, tried, start),
    })
}

fn oracle_stats(
    strategy: Strategy,
    pairs: &crate::deleted_product::PairIndex,
    x_vars: usize,
    y_vars: usize,
    tried: u64,
    start: Instant,
) -> SolveStats {
    SolveStats {
        strategy: Some(strategy),
        equations: pairs.len(),
        x_vars,
        y_vars,
        free_y_vars: y_vars,
        branches: tried,
        conflicts: 0,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn form_is_zero(form: &IntersectionForm<Integer>) -> bool {
    form.matrix().iter().flatten().all(Zero::is_zero)
}

/// Exact decision over Z when the form vanishes: the system is then linear.
pub fn solve_linear_z(sys: &QuadraticSystem<Integer>) -> Result<SolveReport> {
    if !form_is_zero(sys.form()) {
        return Err(Error::InvalidForm(
            "solvability over Z with a nonzero form is undecidable in general; \
             use a witness check or a bounded box search"
                .into(),
        ));
    }
    let start = Instant::now();
    let hnf = HermiteForm::new(&sys.basis().int_matrix());
    let x = hnf.solve(sys.rhs())?;
    let status = if x.is_some() { Status::Sat } else { Status::Unsat };
    let witness = match x {
        Some(x) => {
            let w = Witness {
                x,
                y: vec![vec![Integer::zero(); sys.form().rank()]; sys.simplices().len()],
            };
            assert!(sys.check_witness(&w)?.is_valid(), "lattice witness fails the system");
            Some(w.to_file()?)
        }
        None => None,
    };
    Ok(SolveReport {
        status,
        witness,
        stats: oracle_stats(Strategy::Linear, sys.pairs(), sys.n_x(), sys.n_y(), 1, start),
    })
}

/// Searches `y` with every entry in `[-bound, bound]`, solving for `x` exactly.
///
/// Finding nothing proves nothing over Z, so an exhausted box reports `unknown`.
/// A vanishing form makes the system linear and is decided exactly instead.
pub fn box_search_z(sys: &QuadraticSystem<Integer>, bound: u64, budget: &Budget) -> Result<SolveReport> {
    if form_is_zero(sys.form()) {
        return solve_linear_z(sys);
    }
    let start = Instant::now();
    let hnf = HermiteForm::new(&sys.basis().int_matrix());
    let n = sys.simplices().len();
    let b = sys.form().rank();
    // Values in the order 0, 1, -1, 2, -2, ...
    let ladder: Vec<Integer> = std::iter::once(0i64)
        .chain((1..=bound as i64).flat_map(|v| [v, -v]))
        .map(Integer::from)
        .collect();
    let mut digits = vec![0usize; n * b];
    let mut tried = 0u64;
    loop {
        tried += 1;
        let y: Vec<Vec<Integer>> = (0..n)
            .map(|s| (0..b).map(|i| ladder[digits[s * b + i]].clone()).collect())
            .collect();
        let q = sys.quadratic_part(&y)?;
        let residual: Vec<Integer> = sys.rhs().iter().zip(&q).map(|(r, v)| r - v).collect();
        if let Some(x) = hnf.solve(&residual)? {
            let w = Witness { x, y };
            assert!(sys.check_witness(&w)?.is_valid(), "box-search witness fails the system");
            return Ok(SolveReport {
                status: Status::Sat,
                witness: Some(w.to_file()?),
                stats: oracle_stats(Strategy::BoxSearch, sys.pairs(), sys.n_x(), sys.n_y(), tried, start),
            });
        }
        let over_time = budget.time.is_some_and(|t| start.elapsed() >= t);
        let over_branches = budget.branches.is_some_and(|limit| tried >= limit);
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(SolveReport {
                    status: Status::Unknown,
                    witness: None,
                    stats: oracle_stats(Strategy::BoxSearch, sys.pairs(), sys.n_x(), sys.n_y(), tried, start),
                });
            }
            digits[pos] += 1;
            if digits[pos] < ladder.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if over_time || over_branches {
            return Ok(SolveReport {
                status: Status::Unknown,
                witness: None,
                stats: oracle_stats(Strategy::BoxSearch, sys.pairs(), sys.n_x(), sys.n_y(), tried, start),
            });
        }
    }
}

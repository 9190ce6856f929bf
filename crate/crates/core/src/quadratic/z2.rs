//! Deciding the system over Z2.
//!
//! The `x` unknowns enter linearly, so they are eliminated first: the system is
//! solvable for a given `y` exactly when the residual `ϑ - q(y)` passes every
//! parity check of the finger-move span. What remains is a set of quadratic
//! parity constraints in `y` alone, decided by enumeration for small instances
//! and by the CDCL+XOR solver otherwise.
//!
//! Only the restriction of `ψ` to the cycles `Z_k` affects the class of `ω_ψ`,
//! so `y` is fixed to zero on a set of simplices whose boundaries form a basis
//! of `B_{k-1}`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::{QuadraticSystem, SolveOptions, SolveReport, SolveStats, Status, Strategy, Witness};
use crate::error::Result;
use crate::linalg::{BitVec, Gf2Elimination, Gf2Matrix};
use crate::ring::Z2;
use crate::sat::{self, Budget, Formula, SatResult};
use crate::simplicial::SimplicialComplex;

/// For each `k`-simplex (in lexicographic order), whether its `y` stays free.
pub fn gauge_free_simplices(complex: &SimplicialComplex, k: usize) -> Vec<bool> {
    let simplices: Vec<_> = complex.simplices(k).collect();
    if k == 0 {
        return vec![true; simplices.len()];
    }
    let faces: HashMap<_, usize> = complex.simplices(k - 1).enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut boundary = Gf2Matrix::zeros(faces.len(), simplices.len());
    for (c, s) in simplices.iter().enumerate() {
        for (_, f) in s.facets() {
            boundary.set(faces[&f], c, true);
        }
    }
    let mut free = vec![true; simplices.len()];
    for &c in Gf2Elimination::new(&boundary).pivot_cols() {
        free[c] = false;
    }
    free
}

struct Prepared {
    elim: Gf2Elimination,
    /// Parity checks over pairs whose common kernel is the span of the finger moves.
    checks: Vec<BitVec>,
    /// Each check applied to `ϑ`.
    target: BitVec,
    rhs: BitVec,
    free: Vec<bool>,
}

impl Prepared {
    fn new(sys: &QuadraticSystem<Z2>) -> Result<Self> {
        let g = sys.basis().gf2_matrix();
        let elim = Gf2Elimination::new(&g);
        let left = g.left_kernel();
        let checks = if left.is_empty() {
            Vec::new()
        } else {
            Gf2Elimination::new(&Gf2Matrix::from_rows(sys.n_equations(), left)?)
                .row_basis()
                .to_vec()
        };
        let rhs = BitVec::from_bools(&sys.rhs().iter().map(|v| v.bit()).collect::<Vec<_>>());
        let target = BitVec::from_bools(&checks.iter().map(|c| c.dot(&rhs)).collect::<Vec<_>>());
        let free = gauge_free_simplices(sys.complex(), sys.k());
        Ok(Prepared {
            elim,
            checks,
            target,
            rhs,
            free,
        })
    }

    /// Completes `y` to a witness by solving for `x`.
    fn witness(&self, sys: &QuadraticSystem<Z2>, y: Vec<Vec<Z2>>) -> Result<Option<Witness<Z2>>> {
        let q = sys.quadratic_part(&y)?;
        let mut residual = self.rhs.clone();
        for (p, v) in q.iter().enumerate() {
            if v.bit() {
                residual.flip(p);
            }
        }
        Ok(self.elim.solve(&residual)?.map(|x| Witness {
            x: x.to_bools().into_iter().map(Z2).collect(),
            y,
        }))
    }
}

enum Outcome {
    Found(Vec<Vec<Z2>>),
    Exhausted,
    OutOfBudget,
}

/// Decides the system over Z2. A `sat` report always carries a checked witness.
pub fn solve_z2(sys: &QuadraticSystem<Z2>, options: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let prep = Prepared::new(sys)?;
    let b = sys.form().rank();
    let free_bits = prep.free.iter().filter(|&&f| f).count() * b;
    let mut stats = SolveStats {
        equations: sys.n_equations(),
        x_vars: sys.n_x(),
        y_vars: sys.n_y(),
        free_y_vars: free_bits,
        ..SolveStats::default()
    };
    let form_is_zero = sys.form().matrix().iter().flatten().all(|v| !v.bit());
    let outcome = if free_bits == 0 || form_is_zero {
        stats.strategy = Some(Strategy::Linear);
        if prep.target.is_zero() {
            Outcome::Found(vec![vec![Z2::ZERO; b]; sys.simplices().len()])
        } else {
            Outcome::Exhausted
        }
    } else if free_bits <= options.enumeration_max_bits {
        stats.strategy = Some(Strategy::Enumeration);
        enumerate(sys, &prep, options, start, &mut stats)
    } else {
        stats.strategy = Some(Strategy::Sat);
        sat_search(sys, &prep, &options.budget, &mut stats)
    };
    let (status, witness) = match outcome {
        Outcome::Found(y) => {
            let w = prep
                .witness(sys, y)?
                .expect("a y passing every parity check leaves a consistent linear system");
            let check = sys.check_witness(&w)?;
            assert!(check.is_valid(), "solver witness violates equations {:?}", check.violated);
            (Status::Sat, Some(w.to_file()?))
        }
        Outcome::Exhausted => (Status::Unsat, None),
        Outcome::OutOfBudget => (Status::Unknown, None),
    };
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(SolveReport { status, witness, stats })
}

/// Gray-code enumeration of the free `y` bits with an incrementally maintained syndrome.
struct Enumerator {
    b: usize,
    /// Row `i` of `A` as a bit mask; `A` is symmetric over Z2.
    a_rows: Vec<u64>,
    /// Free bit `j` is bit `bits[j].1` of simplex `bits[j].0`.
    bits: Vec<(usize, usize)>,
    /// `(partner simplex, pair)` for every pair whose partner is free.
    partners: Vec<Vec<(usize, usize)>>,
    words: usize,
    /// Check column of each pair, `words` u64s per pair.
    columns: Vec<u64>,
    target: Vec<u64>,
}

struct EnumState {
    y: Vec<u64>,
    ay: Vec<u64>,
    syndrome: Vec<u64>,
}

impl Enumerator {
    fn new(sys: &QuadraticSystem<Z2>, prep: &Prepared) -> Self {
        let b = sys.form().rank();
        let a_rows = (0..b)
            .map(|i| (0..b).fold(0u64, |m, j| m | (u64::from(sys.form().entry(i, j).bit()) << j)))
            .collect();
        let n = sys.simplices().len();
        let bits = (0..n)
            .filter(|&s| prep.free[s])
            .flat_map(|s| (0..b).map(move |i| (s, i)))
            .collect();
        let mut partners = vec![Vec::new(); n];
        for p in 0..sys.n_equations() {
            let (a, c) = sys.pairs().endpoints(p);
            if prep.free[a] && prep.free[c] {
                partners[a].push((c, p));
                partners[c].push((a, p));
            }
        }
        let m = prep.checks.len();
        let words = m.div_ceil(64).max(1);
        let mut columns = vec![0u64; sys.n_equations() * words];
        for (r, check) in prep.checks.iter().enumerate() {
            for p in check.ones() {
                columns[p * words + r / 64] |= 1 << (r % 64);
            }
        }
        let mut target = vec![0u64; words];
        for r in prep.target.ones() {
            target[r / 64] |= 1 << (r % 64);
        }
        Enumerator {
            b,
            a_rows,
            bits,
            partners,
            words,
            columns,
            target,
        }
    }

    fn fresh(&self) -> EnumState {
        let n = self.partners.len();
        EnumState {
            y: vec![0; n],
            ay: vec![0; n],
            syndrome: vec![0; self.words],
        }
    }

    fn flip(&self, st: &mut EnumState, j: usize) {
        let (s, i) = self.bits[j];
        st.y[s] ^= 1 << i;
        for &(t, p) in &self.partners[s] {
            if st.ay[t] >> i & 1 == 1 {
                let col = &self.columns[p * self.words..(p + 1) * self.words];
                for (w, c) in st.syndrome.iter_mut().zip(col) {
                    *w ^= c;
                }
            }
        }
        st.ay[s] ^= self.a_rows[i];
    }

    fn hit(&self, st: &EnumState) -> bool {
        st.syndrome == self.target
    }

    fn y_values(&self, st: &EnumState) -> Vec<Vec<Z2>> {
        st.y.iter().map(|&m| (0..self.b).map(|i| Z2(m >> i & 1 == 1)).collect()).collect()
    }
}

fn enumerate(
    sys: &QuadraticSystem<Z2>,
    prep: &Prepared,
    options: &SolveOptions,
    start: Instant,
    stats: &mut SolveStats,
) -> Outcome {
    let en = Enumerator::new(sys, prep);
    let total = en.bits.len();
    let threads = match options.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        t => t,
    };
    // High bits select a chunk; the low bits are walked in Gray-code order.
    let chunk_bits = if total >= 16 { (threads * 4).next_power_of_two().trailing_zeros() as usize } else { 0 };
    let chunk_bits = chunk_bits.min(total);
    let low = total - chunk_bits;
    let n_chunks = 1usize << chunk_bits;

    let next_chunk = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let out_of_budget = AtomicBool::new(false);
    let tried = AtomicU64::new(0);
    let found: Mutex<Option<(usize, Vec<Vec<Z2>>)>> = Mutex::new(None);

    let worker = || {
        loop {
            let chunk = next_chunk.fetch_add(1, Ordering::Relaxed);
            if chunk >= n_chunks || chunk > best.load(Ordering::Relaxed) || out_of_budget.load(Ordering::Relaxed) {
                return;
            }
            let mut st = en.fresh();
            for h in 0..chunk_bits {
                if chunk >> h & 1 == 1 {
                    en.flip(&mut st, low + h);
                }
            }
            let mut hit = en.hit(&st);
            let mut step: u64 = 1;
            let steps = 1u64 << low;
            let mut local = 1u64;
            while !hit && step < steps {
                en.flip(&mut st, step.trailing_zeros() as usize);
                hit = en.hit(&st);
                step += 1;
                local += 1;
                if local == 1 << 10 {
                    let done = tried.fetch_add(local, Ordering::Relaxed) + local;
                    local = 0;
                    let over_time = options.budget.time.is_some_and(|t| start.elapsed() >= t);
                    let over_branches = options.budget.branches.is_some_and(|b| done > b);
                    if over_time || over_branches {
                        out_of_budget.store(true, Ordering::Relaxed);
                    }
                    if out_of_budget.load(Ordering::Relaxed) || chunk > best.load(Ordering::Relaxed) {
                        return;
                    }
                }
            }
            tried.fetch_add(local, Ordering::Relaxed);
            if hit {
                best.fetch_min(chunk, Ordering::Relaxed);
                let mut slot = found.lock().expect("enumeration worker panicked");
                if slot.as_ref().is_none_or(|(c, _)| chunk < *c) {
                    *slot = Some((chunk, en.y_values(&st)));
                }
            }
        }
    };
    if threads <= 1 || n_chunks == 1 {
        worker();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..threads.min(n_chunks) {
                scope.spawn(worker);
            }
        });
    }
    stats.branches = tried.load(Ordering::Relaxed);
    match found.into_inner().expect("enumeration worker panicked") {
        Some((_, y)) => Outcome::Found(y),
        None if out_of_budget.load(Ordering::Relaxed) => Outcome::OutOfBudget,
        None => Outcome::Exhausted,
    }
}

fn sat_search(sys: &QuadraticSystem<Z2>, prep: &Prepared, budget: &Budget, stats: &mut SolveStats) -> Outcome {
    let b = sys.form().rank();
    let n = sys.simplices().len();
    let mut formula = Formula::new();
    let y_var: Vec<Option<Vec<u32>>> = (0..n)
        .map(|s| prep.free[s].then(|| (0..b).map(|_| formula.new_var()).collect()))
        .collect();
    let mut terms: Vec<Vec<u32>> = vec![Vec::new(); sys.n_equations()];
    for (p, pair_terms) in terms.iter_mut().enumerate() {
        let (a, c) = sys.pairs().endpoints(p);
        let (Some(ya), Some(yc)) = (&y_var[a], &y_var[c]) else { continue };
        for i in 0..b {
            for j in 0..b {
                if sys.form().entry(i, j).bit() {
                    let prod = formula.new_var();
                    formula.add_and_gate(prod, ya[i], yc[j]);
                    pair_terms.push(prod);
                }
            }
        }
    }
    for (r, check) in prep.checks.iter().enumerate() {
        let vars = check.ones().flat_map(|p| terms[p].iter().copied()).collect();
        formula.add_xor(vars, prep.target.get(r));
    }
    let (result, sat_stats) = sat::solve(&formula, budget);
    stats.branches = sat_stats.decisions;
    stats.conflicts = sat_stats.conflicts;
    match result {
        SatResult::Sat(model) => Outcome::Found(
            y_var
                .iter()
                .map(|vars| match vars {
                    Some(vs) => vs.iter().map(|&v| Z2(model[v as usize])).collect(),
                    None => vec![Z2::ZERO; b],
                })
                .collect(),
        ),
        SatResult::Unsat => Outcome::Exhausted,
        SatResult::Unknown => Outcome::OutOfBudget,
    }
}

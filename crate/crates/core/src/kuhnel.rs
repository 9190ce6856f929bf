//! Complete skeleta in 2k-manifolds: necessary conditions as a SAT instance,
//! the maximal-n search, and the closed-form bounds.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{psi_boundary_class, HomomorphismPsi, IntersectionForm};
use crate::quadratic::Status;
use crate::ring::Z2;
use crate::sat::dimacs::write_dimacs;
use crate::linalg::Gf2Matrix;
use crate::sat::{self, Budget, Formula, Lit, SatResult, SolverStats};
use crate::simplicial::{binomial, combinations, Simplex};

/// Splits `vertices` into unordered pairs of disjoint `size`-subsets covering it.
fn halves(vertices: &[u32]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let size = vertices.len() / 2;
    let (first, rest) = vertices.split_first().expect("nonempty vertex set");
    combinations(rest.len() as u32, size - 1)
        .into_iter()
        .map(|pick| {
            let mut a = vec![*first];
            a.extend(pick.iter().map(|&i| rest[i as usize]));
            let b = vertices.iter().copied().filter(|v| !a.contains(v)).collect();
            (a, b)
        })
        .collect()
}

fn subsets(vertices: &[u32], size: usize) -> Vec<Vec<u32>> {
    combinations(vertices.len() as u32, size)
        .into_iter()
        .map(|c| c.into_iter().map(|i| vertices[i as usize]).collect())
        .collect()
}

fn with_vertex(s: &[u32], v: u32) -> Simplex {
    let mut vs = s.to_vec();
    vs.push(v);
    Simplex::new(vs).expect("distinct vertices")
}

fn check_k(k: usize, form: &IntersectionForm<Z2>) -> Result<()> {
    if k == 0 || form.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "dimension {k} against a form for k={}",
            form.k()
        )));
    }
    Ok(())
}

/// CNF+XOR encoding of the necessary conditions for `Δ_n^(k)`.
///
/// Unknowns are `ψ` on the `k`-simplices avoiding vertex 0; `ψ` vanishes on
/// the rest, which span a complement of the cycles. Each `h_κ = ψ(∂κ)` is an
/// XOR-defined auxiliary (or a plain `y` when `0 ∈ κ`).
#[derive(Clone, Debug)]
pub struct KuhnelInstance {
    k: usize,
    n: u32,
    form: IntersectionForm<Z2>,
    formula: Formula,
    simplices: Vec<Simplex>,
    /// First `y` variable of each free simplex.
    y_base: Vec<Option<u32>>,
    condition_i: usize,
    condition_ii: usize,
}

struct Encoder<'a> {
    b: usize,
    form: &'a IntersectionForm<Z2>,
    formula: Formula,
    index: HashMap<Vec<u32>, usize>,
    y_base: Vec<Option<u32>>,
    h: HashMap<Simplex, u32>,
    products: HashMap<(u32, u32), u32>,
}

impl Encoder<'_> {
    /// First variable of `h_κ`.
    fn h(&mut self, kappa: &Simplex) -> u32 {
        if kappa.contains_vertex(0) {
            let rest = kappa.facet(0).expect("positive dimension");
            return self.y_base[self.index[rest.vertices()]].expect("simplex avoiding 0 is free");
        }
        if let Some(&v) = self.h.get(kappa) {
            return v;
        }
        let base = self.formula.num_vars();
        for _ in 0..self.b {
            self.formula.new_var();
        }
        let faces: Vec<u32> = kappa
            .facets()
            .map(|(_, f)| self.y_base[self.index[f.vertices()]].expect("facets avoid 0"))
            .collect();
        for i in 0..self.b as u32 {
            let mut vars: Vec<u32> = faces.iter().map(|&f| f + i).collect();
            vars.push(base + i);
            self.formula.add_xor(vars, false);
        }
        self.h.insert(kappa.clone(), base);
        base
    }

    fn product(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return a;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&p) = self.products.get(&key) {
            return p;
        }
        let p = self.formula.new_var();
        self.formula.add_and_gate(p, a, b);
        self.products.insert(key, p);
        p
    }

    fn free_vars(&self, simplices: &[Simplex]) -> (Vec<usize>, Vec<u32>) {
        let free: Vec<usize> = (0..simplices.len()).filter(|&i| self.y_base[i].is_some()).collect();
        let b = self.b as u32;
        let x = free
            .iter()
            .flat_map(|&i| {
                let base = self.y_base[i].expect("free");
                (0..b).map(move |c| base + c)
            })
            .collect();
        (free, x)
    }

    /// `x ≤lex π(x)` for every transposition inside each group. A vertex
    /// permutation acts on gauge-fixed unknowns by `y'_τ = h_{π(0*τ)}`.
    fn lex_leader(&mut self, simplices: &[Simplex], groups: &[Vec<u32>], n: u32) -> Result<()> {
        let (free, x) = self.free_vars(simplices);
        for group in groups {
            for (p, &u) in group.iter().enumerate() {
                for &w in &group[p + 1..] {
                    debug_assert!(u <= n && w <= n);
                    let swap = |v: u32| if v == u { w } else if v == w { u } else { v };
                    let mut image = Vec::with_capacity(x.len());
                    for &i in &free {
                        let mut vs: Vec<u32> = simplices[i].vertices().iter().map(|&v| swap(v)).collect();
                        vs.push(swap(0));
                        let base = self.h(&Simplex::new(vs)?);
                        image.extend((0..self.b as u32).map(|c| base + c));
                    }
                    self.formula.add_lex_leq(&x, &image);
                }
            }
        }
        Ok(())
    }

    fn form_lex_leader(&mut self, simplices: &[Simplex]) {
        let (free, x) = self.free_vars(simplices);
        for perm in form_permutations(self.form) {
            let image: Vec<u32> = free
                .iter()
                .flat_map(|&i| {
                    let base = self.y_base[i].expect("free");
                    perm.iter().map(move |&c| base + c as u32)
                })
                .collect();
            self.formula.add_lex_leq(&x, &image);
        }
    }

    /// Variables whose XOR is `Ω(h_κ, h_κ')`.
    fn omega_terms(&mut self, kappa: &Simplex, other: &Simplex, out: &mut Vec<u32>) {
        let (ha, hb) = (self.h(kappa), self.h(other));
        for i in 0..self.b {
            for j in 0..self.b {
                if self.form.entry(i, j).bit() {
                    let p = self.product(ha + i as u32, hb + j as u32);
                    out.push(p);
                }
            }
        }
    }
}

/// How much of the symmetry of the conditions is broken in the encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Symmetry {
    None,
    /// Lex-leader constraints for all vertex transpositions and for the
    /// coordinate permutations preserving the form.
    Transpositions,
    /// Fixes `Ω(h_{0A}, h_{0B}) = 1` for `A = {1..k+1}`, `B = {k+2..2k+2}`,
    /// pins `(h_{0A}, h_{0B})` to a hyperbolic pair for nondegenerate
    /// alternating forms, and keeps lex-leader constraints for the
    /// transpositions preserving `A`, `B` and the remaining vertices.
    Anchored,
    /// `Anchored` for nondegenerate alternating forms, else `Transpositions`.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    pub symmetry: Symmetry,
}

/// Basis indices `(i, j)` with `A[i][j] = 1`, when the form is alternating and
/// nondegenerate.
fn hyperbolic_pair(form: &IntersectionForm<Z2>) -> Option<(usize, usize)> {
    let b = form.rank();
    if b == 0 || !form.is_alternating() {
        return None;
    }
    let dense: Vec<Vec<u8>> = form.matrix().iter().map(|r| r.iter().map(|e| u8::from(e.bit())).collect()).collect();
    if Gf2Matrix::from_dense(&dense).ok()?.rank() < b {
        return None;
    }
    (0..b).flat_map(|i| (0..b).map(move |j| (i, j))).find(|&(i, j)| form.entry(i, j).bit())
}

/// Coordinate permutations `p` with `A[p i][p j] = A[i][j]`, identity excluded.
fn form_permutations(form: &IntersectionForm<Z2>) -> Vec<Vec<usize>> {
    let b = form.rank();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..b).collect();
    // Heap's algorithm over all b! orders; b is at most a handful here.
    let mut c = vec![0usize; b];
    let mut i = 0;
    while i < b {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let preserved = (0..b).all(|x| (0..b).all(|y| form.entry(perm[x], perm[y]) == form.entry(x, y)));
            if preserved {
                out.push(perm.clone());
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Builds the instance: condition (i) for every unordered pair of disjoint
/// `(k+1)`-simplices, condition (ii) for every `(2k+3)`-subset `J` at `min J`.
pub fn encode_conditions(k: usize, n: u32, form: &IntersectionForm<Z2>) -> Result<KuhnelInstance> {
    encode_conditions_with(k, n, form, EncodeOptions::default())
}

pub fn encode_conditions_with(
    k: usize,
    n: u32,
    form: &IntersectionForm<Z2>,
    options: EncodeOptions,
) -> Result<KuhnelInstance> {
    check_k(k, form)?;
    let b = form.rank();
    let simplices: Vec<Simplex> = combinations(n + 1, k + 1)
        .into_iter()
        .map(Simplex::new)
        .collect::<Result<_>>()?;
    let index = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices().to_vec(), i))
        .collect();
    let mut formula = Formula::new();
    let y_base = simplices
        .iter()
        .map(|s| {
            (!s.contains_vertex(0)).then(|| {
                let base = formula.num_vars();
                for _ in 0..b {
                    formula.new_var();
                }
                base
            })
        })
        .collect();
    let mut enc = Encoder {
        b,
        form,
        formula,
        index,
        y_base,
        h: HashMap::new(),
        products: HashMap::new(),
    };

    let all: Vec<u32> = (0..=n).collect();
    let mut condition_i = 0;
    if n as usize + 1 >= 2 * (k + 2) {
        for support in subsets(&all, 2 * (k + 2)) {
            for (a, c) in halves(&support) {
                let mut terms = Vec::new();
                enc.omega_terms(&Simplex::new(a)?, &Simplex::new(c)?, &mut terms);
                enc.formula.add_xor(terms, false);
                condition_i += 1;
            }
        }
    }
    let mut condition_ii = 0;
    if n as usize + 1 >= 2 * k + 3 {
        for j in subsets(&all, 2 * k + 3) {
            let (v, rest) = j.split_first().expect("nonempty");
            let mut terms = Vec::new();
            for (a, c) in halves(rest) {
                enc.omega_terms(&with_vertex(&a, *v), &with_vertex(&c, *v), &mut terms);
            }
            enc.formula.add_xor(terms, true);
            condition_ii += 1;
        }
    }

    let symmetry = match options.symmetry {
        Symmetry::Auto if hyperbolic_pair(form).is_some() => Symmetry::Anchored,
        Symmetry::Auto => Symmetry::Transpositions,
        other => other,
    };
    match symmetry {
        Symmetry::None | Symmetry::Auto => {}
        Symmetry::Transpositions => {
            // Every vertex permutation and every form isometry maps solutions
            // to solutions, so the lex-least member of each orbit survives.
            let groups = [(0..=n).collect::<Vec<u32>>()];
            enc.lex_leader(&simplices, &groups, n)?;
            enc.form_lex_leader(&simplices);
        }
        Symmetry::Anchored if n as usize + 1 >= 2 * k + 3 => {
            // Condition (ii) at J = {0..2k+2}, v = 0 has a split with
            // Ω = 1; a permutation fixing 0 moves it onto (A, B).
            let a: Vec<u32> = (1..=k as u32 + 1).collect();
            let c: Vec<u32> = (k as u32 + 2..=2 * k as u32 + 2).collect();
            let (ya, yc) = (enc.h(&with_vertex(&a, 0)), enc.h(&with_vertex(&c, 0)));
            let mut terms = Vec::new();
            enc.omega_terms(&with_vertex(&a, 0), &with_vertex(&c, 0), &mut terms);
            enc.formula.add_xor(terms, true);
            match hyperbolic_pair(form) {
                // The isometry group of a nondegenerate alternating form is
                // transitive on hyperbolic pairs.
                Some((i, j)) => {
                    for t in 0..b {
                        enc.formula.add_clause(vec![Lit::new(ya + t as u32, t == i)]);
                        enc.formula.add_clause(vec![Lit::new(yc + t as u32, t == j)]);
                    }
                }
                None => enc.form_lex_leader(&simplices),
            }
            let rest: Vec<u32> = (2 * k as u32 + 3..=n).collect();
            enc.lex_leader(&simplices, &[a, c, rest], n)?;
        }
        Symmetry::Anchored => enc.form_lex_leader(&simplices),
    }
    Ok(KuhnelInstance {
        k,
        n,
        form: form.clone(),
        formula: enc.formula,
        simplices,
        y_base: enc.y_base,
        condition_i,
        condition_ii,
    })
}

/// Outcome of one instance.
#[derive(Clone, Debug)]
pub struct KuhnelSolution {
    pub status: Status,
    /// Decoded `ψ` when satisfiable.
    pub psi: Option<HomomorphismPsi<Z2>>,
    pub stats: SolverStats,
    pub elapsed_ms: u64,
}

impl KuhnelInstance {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn form(&self) -> &IntersectionForm<Z2> {
        &self.form
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn condition_i_count(&self) -> usize {
        self.condition_i
    }

    pub fn condition_ii_count(&self) -> usize {
        self.condition_ii
    }

    /// Number of free `ψ` bits.
    pub fn free_bits(&self) -> usize {
        self.y_base.iter().flatten().count() * self.form.rank()
    }

    /// `ψ` on every `k`-simplex, zero on those containing vertex 0.
    pub fn decode(&self, model: &[bool]) -> Result<HomomorphismPsi<Z2>> {
        if model.len() < self.formula.num_vars() as usize {
            return Err(Error::DimensionMismatch(format!(
                "model has {} values for {} variables",
                model.len(),
                self.formula.num_vars()
            )));
        }
        let b = self.form.rank();
        let mut psi = HomomorphismPsi::new(b);
        for (s, base) in self.simplices.iter().zip(&self.y_base) {
            let v = match base {
                Some(base) => (0..b).map(|i| Z2(model[*base as usize + i])).collect(),
                None => vec![Z2::ZERO; b],
            };
            psi.set(s.clone(), v)?;
        }
        Ok(psi)
    }

    pub fn solve(&self, budget: &Budget) -> Result<KuhnelSolution> {
        let start = Instant::now();
        let (result, stats) = sat::solve(&self.formula, budget);
        let (status, psi) = match result {
            SatResult::Sat(model) => {
                let psi = self.decode(&model)?;
                let check = check_conditions(self.k, self.n, &self.form, &psi)?;
                assert!(check.is_valid(), "decoded assignment violates {check:?}");
                (Status::Sat, Some(psi))
            }
            SatResult::Unsat => (Status::Unsat, None),
            SatResult::Unknown => (Status::Unknown, None),
        };
        Ok(KuhnelSolution {
            status,
            psi,
            stats,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    pub fn to_dimacs(&self) -> String {
        let b = self.form.rank();
        let mut comments = vec![
            format!(
                "complete {}-skeleton on {} vertices, form rank {b}, alternating {}",
                self.k,
                self.n + 1,
                self.form.is_alternating()
            ),
            format!(
                "{} disjoint-pair constraints, {} J-constraints",
                self.condition_i, self.condition_ii
            ),
            "y variables (simplex: first variable, coordinates consecutive):".to_string(),
        ];
        for (s, base) in self.simplices.iter().zip(&self.y_base) {
            if let Some(base) = base {
                comments.push(format!("y {:?} {}", s.vertices(), base + 1));
            }
        }
        write_dimacs(&self.formula, &comments)
    }
}

/// Violations of the two conditions, checked at every vertex of every `J`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionCheck {
    pub condition_i: Vec<(Simplex, Simplex)>,
    pub condition_ii: Vec<(Vec<u32>, u32)>,
}

impl ConditionCheck {
    pub fn is_valid(&self) -> bool {
        self.condition_i.is_empty() && self.condition_ii.is_empty()
    }
}

/// Evaluates both conditions on `Δ_n^(k)` directly from `ψ`.
pub fn check_conditions(
    k: usize,
    n: u32,
    form: &IntersectionForm<Z2>,
    psi: &HomomorphismPsi<Z2>,
) -> Result<ConditionCheck> {
    check_k(k, form)?;
    let all: Vec<u32> = (0..=n).collect();
    let mut h: HashMap<Simplex, Vec<Z2>> = HashMap::new();
    for kappa in combinations(n + 1, k + 2) {
        let kappa = Simplex::new(kappa)?;
        let value = psi_boundary_class(psi, &kappa)?;
        h.insert(kappa, value);
    }
    let mut check = ConditionCheck::default();
    if n as usize + 1 >= 2 * (k + 2) {
        for support in subsets(&all, 2 * (k + 2)) {
            for (a, c) in halves(&support) {
                let (a, c) = (Simplex::new(a)?, Simplex::new(c)?);
                if form.evaluate(&h[&a], &h[&c])?.bit() {
                    check.condition_i.push((a, c));
                }
            }
        }
    }
    if n as usize + 1 >= 2 * k + 3 {
        for j in subsets(&all, 2 * k + 3) {
            for &v in &j {
                let (_, rhs) = lemma_zj_identity(&j, v, psi, form)?;
                if !rhs.bit() {
                    check.condition_ii.push((j.clone(), v));
                }
            }
        }
    }
    Ok(check)
}

/// Both sides of the `z_J` identity: the direct sum of `Ω(ψσ', ψτ')` over
/// disjoint pairs in `J`, and the sum over pairs avoiding `v` of
/// `Ω(ψ∂(σ*v), ψ∂(τ*v))`.
pub fn lemma_zj_identity(
    j: &[u32],
    v: u32,
    psi: &HomomorphismPsi<Z2>,
    form: &IntersectionForm<Z2>,
) -> Result<(Z2, Z2)> {
    let mut j = j.to_vec();
    j.sort_unstable();
    j.dedup();
    if j.len() < 3 || j.len() % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "J must have 2k+3 distinct vertices, got {}",
            j.len()
        )));
    }
    let k = (j.len() - 3) / 2;
    check_k(k, form)?;
    let Some(pos) = j.iter().position(|&u| u == v) else {
        return Err(Error::InvalidInput(format!("vertex {v} is not in J")));
    };

    let mut lhs = Z2::ZERO;
    for support in subsets(&j, 2 * (k + 1)) {
        for (a, c) in halves(&support) {
            lhs += form.evaluate(psi.get(&Simplex::new(a)?)?, psi.get(&Simplex::new(c)?)?)?;
        }
    }
    let mut rest = j.clone();
    rest.remove(pos);
    let mut rhs = Z2::ZERO;
    for (a, c) in halves(&rest) {
        let ha = psi_boundary_class(psi, &with_vertex(&a, v))?;
        let hc = psi_boundary_class(psi, &with_vertex(&c, v))?;
        rhs += form.evaluate(&ha, &hc)?;
    }
    Ok((lhs, rhs))
}

/// `(2k+1) + (k+1)β`, or `(2k+1) + ⌊(k+2)β/2⌋` for alternating forms.
pub fn closed_form_bound(k: u64, beta: u64, alternating: bool) -> u64 {
    if alternating {
        2 * k + 1 + (k + 2) * beta / 2
    } else {
        2 * k + 1 + (k + 1) * beta
    }
}

/// Smallest `r` for which the Radon-type statement holds.
pub fn radon_threshold(k: u64, beta: u64, alternating: bool) -> u64 {
    closed_form_bound(k, beta, alternating) + 2
}

/// `(-1)^k C(2k+1, k+1) (χ - 2)`.
pub fn kuhnel_conjecture_rhs(k: u64, chi: i64) -> BigInt {
    let c = BigInt::from(binomial(2 * k + 1, k + 1));
    let v = c * BigInt::from(chi - 2);
    if k % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Largest `n` with `C(n-k-1, k+1) ≤ rhs`; `None` when even `n = 2k+1` fails.
pub fn conjecture_max_n(k: u64, rhs: &BigInt) -> Option<u64> {
    if *rhs < BigInt::from(0) {
        return None;
    }
    let mut n = 2 * k + 1;
    while BigInt::from(binomial(n + 1 - k - 1, k + 1)) <= *rhs {
        n += 1;
    }
    Some(n)
}

/// Euler characteristic of a `(k-1)`-connected closed `2k`-manifold.
pub fn default_chi(k: u64, beta: u64) -> i64 {
    let b = beta as i64;
    if k % 2 == 0 {
        2 + b
    } else {
        2 - b
    }
}

/// All closed-form quantities for one `(k, β)` configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub k: u64,
    pub beta: u64,
    pub alternating: bool,
    pub chi: i64,
    pub closed_form: u64,
    pub radon: u64,
    pub conjecture_rhs: String,
    pub conjecture_max_n: Option<u64>,
}

pub fn bounds_report(k: u64, beta: u64, alternating: bool, chi: Option<i64>) -> BoundsReport {
    let chi = chi.unwrap_or_else(|| default_chi(k, beta));
    let rhs = kuhnel_conjecture_rhs(k, chi);
    BoundsReport {
        k,
        beta,
        alternating,
        chi,
        closed_form: closed_form_bound(k, beta, alternating),
        radon: radon_threshold(k, beta, alternating),
        conjecture_max_n: conjecture_max_n(k, &rhs),
        conjecture_rhs: rhs.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub n: u32,
    pub status: Status,
    pub elapsed_ms: u64,
    pub decisions: u64,
    pub conflicts: u64,
}

/// Maximal `n` for which the conditions hold, or the interval still open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxN {
    pub k: usize,
    pub beta: usize,
    pub alternating: bool,
    /// Largest `n` proven satisfiable.
    pub lower: u32,
    /// Smallest proven unsatisfiable `n` minus one, else the closed-form bound.
    pub upper: u32,
    pub probes: Vec<Probe>,
}

impl MaxN {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Upward scan from `n = 2k+2` to the closed-form bound, one budget per probe.
///
/// Satisfiability is monotone in `n`, so the first unsatisfiable `n` closes
/// the search. Unknown probes do not stop it: a later sat still raises the
/// lower end, a later unsat still lowers the upper end. Past the closed-form
/// bound the conditions are provably unsatisfiable, so no probe is spent there.
pub fn max_admissible_n(k: usize, form: &IntersectionForm<Z2>, n_cap: u32, budget: &Budget) -> Result<MaxN> {
    check_k(k, form)?;
    let beta = form.rank();
    let alternating = form.is_alternating();
    let closed = closed_form_bound(k as u64, beta as u64, alternating) as u32;
    let first = 2 * k as u32 + 2;
    if n_cap < first {
        return Err(Error::InvalidInput(format!("n cap {n_cap} is below 2k+2 = {first}")));
    }
    let mut lower = first - 1;
    let mut upper = closed;
    let mut probes = Vec::new();
    for n in first..=n_cap.min(closed) {
        let solution = encode_conditions(k, n, form)?.solve(budget)?;
        probes.push(Probe {
            n,
            status: solution.status,
            elapsed_ms: solution.elapsed_ms,
            decisions: solution.stats.decisions,
            conflicts: solution.stats.conflicts,
        });
        match solution.status {
            Status::Sat => lower = n,
            Status::Unsat => {
                upper = n - 1;
                break;
            }
            Status::Unknown => {}
        }
    }
    assert!(lower <= upper, "sat at n={lower} contradicts the bound {upper}");
    Ok(MaxN {
        k,
        beta,
        alternating,
        lower,
        upper,
        probes,
    })
}

//! Deleted products, skew-symmetric cochains and the finger-move subgroup.
//!
//! A cell `σ × τ` of the deleted product is stored once, as the unordered pair
//! with `σ < τ` lexicographically. Skew-symmetric cochains keep only the value
//! on that canonical cell; the other order is `(-1)^k` times it. The position of
//! a pair in [`PairIndex`] is the row index of every matrix and the equation
//! index of every system built downstream.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{BitVec, Gf2Elimination, Gf2Matrix, HermiteForm, IntMatrix};
use crate::ring::{Coefficient, Z2};
use crate::simplicial::{incidence_sign, Simplex, SimplicialComplex};

/// A canonical cell of the deleted product: two disjoint `k`-simplices, `first < second`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellPair {
    first: Simplex,
    second: Simplex,
}

impl CellPair {
    /// Canonicalizes `a × b`; the flag is true when the arguments were swapped.
    pub fn new(a: Simplex, b: Simplex) -> Result<(CellPair, bool)> {
        if a.dim() != b.dim() {
            return Err(Error::WrongDimension {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        if !a.is_disjoint(&b) {
            return Err(Error::NotDisjoint(a.into(), b.into()));
        }
        Ok(if a < b {
            (CellPair { first: a, second: b }, false)
        } else {
            (CellPair { first: b, second: a }, true)
        })
    }

    pub fn canonical(a: Simplex, b: Simplex) -> Result<CellPair> {
        Ok(CellPair::new(a, b)?.0)
    }

    pub fn first(&self) -> &Simplex {
        &self.first
    }

    pub fn second(&self) -> &Simplex {
        &self.second
    }

    pub fn k(&self) -> usize {
        self.first.dim()
    }
}

impl fmt::Debug for CellPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}×{:?}", self.first, self.second)
    }
}

/// The canonical cells of the deleted product in lexicographic order.
#[derive(Clone, Debug)]
pub struct PairIndex {
    k: usize,
    simplices: Vec<Simplex>,
    pairs: Vec<CellPair>,
    /// Positions of each pair's simplices in `simplices`.
    endpoints: Vec<(usize, usize)>,
    lookup: HashMap<CellPair, usize>,
}

impl PairIndex {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[CellPair] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> &CellPair {
        &self.pairs[i]
    }

    pub fn position(&self, pair: &CellPair) -> Option<usize> {
        self.lookup.get(pair).copied()
    }

    /// The `k`-simplices of the complex, in the order used for `y` variables.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// Indices into [`simplices`](Self::simplices) of pair `i`.
    pub fn endpoints(&self, i: usize) -> (usize, usize) {
        self.endpoints[i]
    }
}

/// All unordered pairs of disjoint `k`-simplices of `complex`.
pub fn deleted_product_pairs(complex: &SimplicialComplex, k: usize) -> PairIndex {
    let simplices: Vec<Simplex> = complex.simplices(k).cloned().collect();
    let mut pairs = Vec::new();
    let mut endpoints = Vec::new();
    for (i, a) in simplices.iter().enumerate() {
        for (j, b) in simplices.iter().enumerate().skip(i + 1) {
            if a.is_disjoint(b) {
                pairs.push(CellPair {
                    first: a.clone(),
                    second: b.clone(),
                });
                endpoints.push((i, j));
            }
        }
    }
    let lookup = pairs.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    PairIndex {
        k,
        simplices,
        pairs,
        endpoints,
        lookup,
    }
}

/// A skew-symmetric cochain on the `2k`-cells of a deleted product.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewCochain<R> {
    k: usize,
    values: BTreeMap<CellPair, R>,
}

impl<R: Coefficient> SkewCochain<R> {
    pub fn zero(k: usize) -> Self {
        SkewCochain {
            k,
            values: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `ξ(a × b)`; zero off the support. Applies `ξ(τ×σ) = (-1)^k ξ(σ×τ)`.
    pub fn value(&self, a: &Simplex, b: &Simplex) -> R {
        let swapped = b < a;
        let key = if swapped {
            CellPair {
                first: b.clone(),
                second: a.clone(),
            }
        } else {
            CellPair {
                first: a.clone(),
                second: b.clone(),
            }
        };
        let v = self.values.get(&key).cloned().unwrap_or_else(R::zero);
        if swapped {
            R::neg_one_pow(self.k) * v
        } else {
            v
        }
    }

    /// Value on the canonical orientation of `pair`.
    pub fn at(&self, pair: &CellPair) -> R {
        self.values.get(pair).cloned().unwrap_or_else(R::zero)
    }

    /// Sets `ξ(a × b) = v` (and therefore `ξ(b × a) = (-1)^k v`).
    pub fn set(&mut self, a: Simplex, b: Simplex, v: R) -> Result<()> {
        if a.dim() != self.k {
            return Err(Error::WrongDimension {
                expected: self.k,
                got: a.dim(),
            });
        }
        let (pair, swapped) = CellPair::new(a, b)?;
        let v = if swapped { R::neg_one_pow(self.k) * v } else { v };
        self.set_canonical(pair, v);
        Ok(())
    }

    fn set_canonical(&mut self, pair: CellPair, v: R) {
        if v.is_zero() {
            self.values.remove(&pair);
        } else {
            self.values.insert(pair, v);
        }
    }

    /// Nonzero values on canonical cells.
    pub fn support(&self) -> impl Iterator<Item = (&CellPair, &R)> {
        self.values.iter()
    }

    pub fn add(&self, other: &SkewCochain<R>) -> Result<SkewCochain<R>> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SkewCochain<R>) -> Result<SkewCochain<R>> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &SkewCochain<R>, op: impl Fn(R, R) -> R) -> Result<SkewCochain<R>> {
        if self.k != other.k {
            return Err(Error::WrongDimension {
                expected: self.k,
                got: other.k,
            });
        }
        let mut out = self.clone();
        for (pair, v) in &other.values {
            let new = op(out.at(pair), v.clone());
            out.set_canonical(pair.clone(), new);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &R) -> SkewCochain<R> {
        let mut out = SkewCochain::zero(self.k);
        for (pair, v) in &self.values {
            out.set_canonical(pair.clone(), c.clone() * v.clone());
        }
        out
    }

    /// Applies a ring map entrywise, e.g. reduction mod 2.
    pub fn map<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> SkewCochain<S> {
        let mut out = SkewCochain::zero(self.k);
        for (pair, v) in &self.values {
            out.set_canonical(pair.clone(), f(v));
        }
        out
    }

    /// Values on `index` in pair order. Fails if the support leaves the index.
    pub fn to_vector(&self, index: &PairIndex) -> Result<Vec<R>> {
        if self.k != index.k && !self.is_zero() {
            return Err(Error::WrongDimension {
                expected: index.k,
                got: self.k,
            });
        }
        let mut out = vec![R::zero(); index.len()];
        for (pair, v) in &self.values {
            let i = index.position(pair).ok_or_else(|| {
                Error::NotInComplex(
                    pair.first.vertices().iter().chain(pair.second.vertices()).copied().collect(),
                )
            })?;
            out[i] = v.clone();
        }
        Ok(out)
    }

    pub fn from_vector(index: &PairIndex, values: &[R]) -> Result<SkewCochain<R>> {
        if values.len() != index.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} cells",
                values.len(),
                index.len()
            )));
        }
        let mut out = SkewCochain::zero(index.k);
        for (pair, v) in index.pairs.iter().zip(values) {
            out.set_canonical(pair.clone(), v.clone());
        }
        Ok(out)
    }
}

impl<R: Coefficient> fmt::Debug for SkewCochain<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.values.iter()).finish()
    }
}

/// A finger move: pull `mu` (a `k`-simplex) across `eta` (a disjoint `(k-1)`-simplex).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FingerMove {
    pub eta: Simplex,
    pub mu: Simplex,
}

/// `φ_{η,μ}`: `[η:σ]` on `σ × μ` for every `k`-simplex `σ ⊃ η`, skew-extended.
pub fn finger_move_cochain<R: Coefficient>(
    eta: &Simplex,
    mu: &Simplex,
    complex: &SimplicialComplex,
) -> Result<SkewCochain<R>> {
    let k = mu.dim();
    if eta.dim() + 1 != k {
        return Err(Error::WrongDimension {
            expected: k.saturating_sub(1),
            got: eta.dim(),
        });
    }
    for s in [eta, mu] {
        if !complex.contains(s) {
            return Err(Error::NotInComplex(s.vertices().to_vec()));
        }
    }
    if !eta.is_disjoint(mu) {
        return Err(Error::NotDisjoint(eta.vertices().to_vec(), mu.vertices().to_vec()));
    }
    let mut phi = SkewCochain::zero(k);
    for v in 0..complex.n_vertices() {
        if mu.contains_vertex(v) {
            continue;
        }
        let Some(sigma) = eta.join_vertex(v) else { continue };
        if !complex.contains(&sigma) {
            continue;
        }
        let sign = incidence_sign(eta, &sigma)?;
        phi.set(sigma, mu.clone(), R::from_i64(sign as i64))?;
    }
    Ok(phi)
}

/// All finger moves of `complex` in dimension `k`, as sparse columns over the pair index.
#[derive(Clone, Debug)]
pub struct FingerMoveBasis {
    pairs: PairIndex,
    moves: Vec<FingerMove>,
    /// `columns[j]` lists `(pair position, sign)` of the nonzero entries of `φ_j`.
    columns: Vec<Vec<(usize, i8)>>,
}

impl FingerMoveBasis {
    pub fn new(complex: &SimplicialComplex, k: usize) -> Result<Self> {
        let pairs = deleted_product_pairs(complex, k);
        let mut moves = Vec::new();
        let mut columns = Vec::new();
        if k == 0 {
            return Ok(FingerMoveBasis {
                pairs,
                moves,
                columns,
            });
        }
        let etas: Vec<Simplex> = complex.simplices(k - 1).cloned().collect();
        for eta in &etas {
            for mu in pairs.simplices() {
                if !eta.is_disjoint(mu) {
                    continue;
                }
                let phi = finger_move_cochain::<BigInt>(eta, mu, complex)?;
                let mut col: Vec<(usize, i8)> = phi
                    .support()
                    .map(|(pair, v)| {
                        let row = pairs.position(pair).expect("finger move leaves the deleted product");
                        (row, if v.is_zero() { 0 } else if v > &BigInt::zero() { 1 } else { -1 })
                    })
                    .collect();
                col.sort_unstable();
                moves.push(FingerMove {
                    eta: eta.clone(),
                    mu: mu.clone(),
                });
                columns.push(col);
            }
        }
        Ok(FingerMoveBasis {
            pairs,
            moves,
            columns,
        })
    }

    pub fn pairs(&self) -> &PairIndex {
        &self.pairs
    }

    pub fn moves(&self) -> &[FingerMove] {
        &self.moves
    }

    pub fn column(&self, j: usize) -> &[(usize, i8)] {
        &self.columns[j]
    }

    pub fn rows(&self) -> usize {
        self.pairs.len()
    }

    pub fn cols(&self) -> usize {
        self.moves.len()
    }

    pub fn gf2_matrix(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.rows(), self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, _) in col {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn int_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows(), self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, s) in col {
                m.set(i, j, BigInt::from(s));
            }
        }
        m
    }

    /// `Σ_j coeffs[j] φ_j`.
    pub fn expand<R: Coefficient>(&self, coeffs: &[R]) -> Result<SkewCochain<R>> {
        if coeffs.len() != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} finger moves",
                coeffs.len(),
                self.cols()
            )));
        }
        let mut values = vec![R::zero(); self.rows()];
        for (col, c) in self.columns.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for &(i, s) in col {
                values[i] = values[i].clone() + R::from_i64(s as i64) * c.clone();
            }
        }
        SkewCochain::from_vector(&self.pairs, &values)
    }
}

/// Rings over which membership in the finger-move span can be decided.
pub trait SpanRing: Coefficient {
    type Solver: Clone + Send + Sync;

    fn span_solver(basis: &FingerMoveBasis) -> Self::Solver;

    fn span_solve(solver: &Self::Solver, target: &[Self]) -> Option<Vec<Self>>;
}

impl SpanRing for Z2 {
    type Solver = Gf2Elimination;

    fn span_solver(basis: &FingerMoveBasis) -> Gf2Elimination {
        Gf2Elimination::new(&basis.gf2_matrix())
    }

    fn span_solve(solver: &Gf2Elimination, target: &[Z2]) -> Option<Vec<Z2>> {
        let b = BitVec::from_bools(&target.iter().map(|v| v.bit()).collect::<Vec<_>>());
        solver
            .solve(&b)
            .expect("target sized by the pair index")
            .map(|x| x.to_bools().into_iter().map(Z2).collect())
    }
}

impl SpanRing for BigInt {
    type Solver = HermiteForm;

    fn span_solver(basis: &FingerMoveBasis) -> HermiteForm {
        HermiteForm::new(&basis.int_matrix())
    }

    fn span_solve(solver: &HermiteForm, target: &[BigInt]) -> Option<Vec<BigInt>> {
        solver.solve(target).expect("target sized by the pair index")
    }
}

/// The subgroup `F` of a complex, preprocessed for repeated membership queries.
#[derive(Clone, Debug)]
pub struct FingerMoveSpan<R: SpanRing> {
    basis: FingerMoveBasis,
    solver: R::Solver,
}

impl<R: SpanRing> FingerMoveSpan<R>
where
    R::Solver: fmt::Debug,
{
    pub fn new(complex: &SimplicialComplex, k: usize) -> Result<Self> {
        let basis = FingerMoveBasis::new(complex, k)?;
        let solver = R::span_solver(&basis);
        Ok(FingerMoveSpan { basis, solver })
    }

    pub fn basis(&self) -> &FingerMoveBasis {
        &self.basis
    }

    /// Coefficients `x` with `Σ x_j φ_j = ξ`, or `None` if `ξ ∉ F`.
    pub fn membership(&self, xi: &SkewCochain<R>) -> Result<Option<Vec<R>>> {
        let target = xi.to_vector(&self.basis.pairs)?;
        self.membership_values(&target)
    }

    /// As [`membership`](Self::membership), for values listed in pair order.
    pub fn membership_values(&self, target: &[R]) -> Result<Option<Vec<R>>> {
        if target.len() != self.basis.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} cells",
                target.len(),
                self.basis.rows()
            )));
        }
        Ok(R::span_solve(&self.solver, target))
    }
}

/// One-shot form of [`FingerMoveSpan::membership`].
pub fn is_in_f<R: SpanRing>(
    xi: &SkewCochain<R>,
    complex: &SimplicialComplex,
) -> Result<Option<Vec<R>>>
where
    R::Solver: fmt::Debug,
{
    FingerMoveSpan::<R>::new(complex, xi.k())?.membership(xi)
}

/// A mod-2 chain of unordered cells `⟨σ × τ⟩` of the quotient `K̄`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PairCycle {
    cells: BTreeSet<CellPair>,
}

impl PairCycle {
    pub fn new() -> Self {
        PairCycle::default()
    }

    /// Adds `⟨a × b⟩` modulo 2.
    pub fn toggle(&mut self, a: Simplex, b: Simplex) -> Result<()> {
        let pair = CellPair::canonical(a, b)?;
        if !self.cells.remove(&pair) {
            self.cells.insert(pair);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = &CellPair> {
        self.cells.iter()
    }
}

impl fmt::Debug for PairCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.cells.iter()).finish()
    }
}

/// `Φ(ξ)(z)` over Z2.
pub fn evaluate_on_cycle(xi: &SkewCochain<Z2>, z: &PairCycle) -> Result<Z2> {
    let mut acc = Z2::ZERO;
    for cell in &z.cells {
        if cell.k() != xi.k() {
            return Err(Error::WrongDimension {
                expected: xi.k(),
                got: cell.k(),
            });
        }
        acc += xi.at(cell);
    }
    Ok(acc)
}

/// `z_J`: the sum of all unordered pairs of disjoint `k`-simplices of `j`, which
/// must be the full `k`-skeleton on `2k + 3` vertices.
pub fn z_j_cycle(j: &SimplicialComplex, k: usize) -> Result<PairCycle> {
    let expected = 2 * k + 3;
    if j.n_vertices() as usize != expected {
        return Err(Error::NotFullSkeleton {
            k,
            expected,
            reason: format!("{} vertices", j.n_vertices()),
        });
    }
    if !j.is_full_skeleton(k) {
        return Err(Error::NotFullSkeleton {
            k,
            expected,
            reason: "missing or extra simplices".into(),
        });
    }
    let mut z = PairCycle::new();
    for pair in deleted_product_pairs(j, k).pairs {
        z.cells.insert(pair);
    }
    Ok(z)
}

/// `z_J` for the full subcomplex of `complex` on `vertices`, in the labels of `complex`.
pub fn z_j_on_vertices(complex: &SimplicialComplex, k: usize, vertices: &[u32]) -> Result<PairCycle> {
    let (sub, labels) = complex.induced_subcomplex(vertices)?;
    // Only the k-skeleton of the induced subcomplex matters.
    let sub_k = truncate(&sub, k);
    let local = z_j_cycle(&sub_k, k)?;
    let relabel = |s: &Simplex| Simplex::from_sorted(s.vertices().iter().map(|&v| labels[v as usize]).collect());
    let mut z = PairCycle::new();
    for cell in local.cells {
        z.cells.insert(CellPair::canonical(relabel(&cell.first), relabel(&cell.second))?);
    }
    Ok(z)
}

fn truncate(complex: &SimplicialComplex, k: usize) -> SimplicialComplex {
    let facets: Vec<Vec<u32>> = (0..=k)
        .flat_map(|d| complex.simplices(d).map(|s| s.vertices().to_vec()).collect::<Vec<_>>())
        .collect();
    SimplicialComplex::build(complex.n_vertices(), &facets).expect("faces of a valid complex")
}

/// The mod-2 boundary `C_{2k}(K̄) → C_{2k-1}(K̄)`, computed from faces.
///
/// Rows are the unordered cells `⟨η × μ⟩` with `dim η = k-1`, `dim μ = k`,
/// listed in the same order as [`FingerMoveBasis::moves`].
pub fn quotient_boundary_matrix(complex: &SimplicialComplex, k: usize) -> (PairIndex, Vec<FingerMove>, Gf2Matrix) {
    let pairs = deleted_product_pairs(complex, k);
    let mut rows: Vec<FingerMove> = Vec::new();
    if k > 0 {
        for eta in complex.simplices(k - 1) {
            for mu in pairs.simplices() {
                if eta.is_disjoint(mu) {
                    rows.push(FingerMove {
                        eta: eta.clone(),
                        mu: mu.clone(),
                    });
                }
            }
        }
    }
    let row_of: HashMap<&FingerMove, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut m = Gf2Matrix::zeros(rows.len(), pairs.len());
    for (c, pair) in pairs.pairs().iter().enumerate() {
        for (face_side, other) in [(&pair.first, &pair.second), (&pair.second, &pair.first)] {
            for (_, eta) in face_side.facets() {
                let key = FingerMove {
                    eta,
                    mu: other.clone(),
                };
                let r = row_of[&key];
                m.set(r, c, !m.get(r, c));
            }
        }
    }
    (pairs, rows, m)
}

/// A basis of the mod-2 cycles `Z_{2k}(K̄; Z2)`.
pub fn pair_cycle_basis(complex: &SimplicialComplex, k: usize) -> Vec<PairCycle> {
    let (pairs, _, boundary) = quotient_boundary_matrix(complex, k);
    boundary
        .kernel()
        .into_iter()
        .map(|v| PairCycle {
            cells: v.ones().map(|i| pairs.pair(i).clone()).collect(),
        })
        .collect()
}

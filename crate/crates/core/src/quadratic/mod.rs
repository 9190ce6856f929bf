//! The quadratic system whose solvability decides whether the obstruction can
//! be cancelled by a homomorphism into the middle homology of the target.
//!
//! For every unordered pair `σ × τ` of disjoint `k`-simplices there is one equation
//!
//! ```text
//! Σ x_{η,μ} φ_{η,μ}(σ × τ) + y_σᵀ A y_τ = ϑ(σ × τ)
//! ```
//!
//! in unknowns `x` (one per finger move) and `y_σ ∈ R^b` (one vector per
//! `k`-simplex). Both sides are skew-symmetric, so the swapped pair gives the
//! same equation.

mod export;
mod oracle;
mod z2;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::deleted_product::{FingerMoveBasis, PairIndex, SkewCochain};
use crate::error::{Error, Result};
use crate::forms::IntersectionForm;
use crate::ring::Coefficient;
use crate::sat::Budget;
use crate::simplicial::{Simplex, SimplicialComplex};

pub use export::{decode_model, emit_dimacs_xor, parse_model, DimacsExport, ProductEntry, VarMap, XEntry, YEntry};
pub use oracle::{box_search_z, brute_force_psi_search, solve_linear_z};
pub use z2::{gauge_free_simplices, solve_z2};

#[derive(Clone, Debug)]
pub struct QuadraticSystem<R> {
    complex: SimplicialComplex,
    k: usize,
    basis: FingerMoveBasis,
    form: IntersectionForm<R>,
    rhs: Vec<R>,
}

impl<R: Coefficient> QuadraticSystem<R> {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pairs(&self) -> &PairIndex {
        self.basis.pairs()
    }

    pub fn basis(&self) -> &FingerMoveBasis {
        &self.basis
    }

    pub fn form(&self) -> &IntersectionForm<R> {
        &self.form
    }

    /// `ϑ` on each canonical pair.
    pub fn rhs(&self) -> &[R] {
        &self.rhs
    }

    pub fn n_equations(&self) -> usize {
        self.pairs().len()
    }

    pub fn n_x(&self) -> usize {
        self.basis.cols()
    }

    /// The `k`-simplices carrying a `y` vector, in variable order.
    pub fn simplices(&self) -> &[Simplex] {
        self.pairs().simplices()
    }

    /// Total number of scalar `y` unknowns.
    pub fn n_y(&self) -> usize {
        self.simplices().len() * self.form.rank()
    }

    /// `y_σᵀ A y_τ` for every pair.
    pub fn quadratic_part(&self, y: &[Vec<R>]) -> Result<Vec<R>> {
        self.check_y_shape(y)?;
        (0..self.n_equations())
            .map(|p| {
                let (a, b) = self.pairs().endpoints(p);
                self.form.evaluate(&y[a], &y[b])
            })
            .collect()
    }

    fn check_y_shape(&self, y: &[Vec<R>]) -> Result<()> {
        if y.len() != self.simplices().len() || y.iter().any(|v| v.len() != self.form.rank()) {
            return Err(Error::DimensionMismatch(format!(
                "y must hold {} vectors of length {}",
                self.simplices().len(),
                self.form.rank()
            )));
        }
        Ok(())
    }

    /// Evaluates every equation; reports which ones fail.
    pub fn check_witness(&self, w: &Witness<R>) -> Result<WitnessCheck> {
        if w.x.len() != self.n_x() {
            return Err(Error::DimensionMismatch(format!(
                "x has {} entries for {} finger moves",
                w.x.len(),
                self.n_x()
            )));
        }
        let linear = self.basis.expand(&w.x)?.to_vector(self.pairs())?;
        let quad = self.quadratic_part(&w.y)?;
        let violated = (0..self.n_equations())
            .filter(|&p| linear[p].clone() + quad[p].clone() != self.rhs[p])
            .collect();
        Ok(WitnessCheck { violated })
    }
}

/// Assembles the system for `complex` in dimension `k`.
pub fn build_system<R: Coefficient>(
    complex: &SimplicialComplex,
    k: usize,
    form: &IntersectionForm<R>,
    theta: &SkewCochain<R>,
) -> Result<QuadraticSystem<R>> {
    if form.k() != k {
        return Err(Error::WrongDimension {
            expected: k,
            got: form.k(),
        });
    }
    if theta.k() != k && !theta.is_zero() {
        return Err(Error::WrongDimension {
            expected: k,
            got: theta.k(),
        });
    }
    let basis = FingerMoveBasis::new(complex, k)?;
    let rhs = theta.to_vector(basis.pairs())?;
    Ok(QuadraticSystem {
        complex: complex.clone(),
        k,
        basis,
        form: form.clone(),
        rhs,
    })
}

/// Values of all unknowns: `x` in finger-move order, `y` in simplex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<R> {
    pub x: Vec<R>,
    pub y: Vec<Vec<R>>,
}

impl<R: Coefficient> Witness<R> {
    pub fn to_file(&self) -> Result<WitnessFile> {
        let conv = |v: &R| v.to_i64().ok_or_else(|| Error::TooLarge(format!("witness entry {v}")));
        Ok(WitnessFile {
            x: self.x.iter().map(conv).collect::<Result<_>>()?,
            y: self
                .y
                .iter()
                .map(|row| row.iter().map(conv).collect::<Result<_>>())
                .collect::<Result<_>>()?,
        })
    }
}

/// Ring-agnostic serialized witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub x: Vec<i64>,
    pub y: Vec<Vec<i64>>,
}

impl WitnessFile {
    pub fn to_witness<R: Coefficient>(&self) -> Witness<R> {
        Witness {
            x: self.x.iter().map(|&v| R::from_i64(v)).collect(),
            y: self.y.iter().map(|row| row.iter().map(|&v| R::from_i64(v)).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    /// Indices of failing equations, in pair order.
    pub violated: Vec<usize>,
}

impl WitnessCheck {
    pub fn is_valid(&self) -> bool {
        self.violated.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unsat,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// No quadratic unknowns: a single linear membership test.
    Linear,
    Enumeration,
    Sat,
    BruteForce,
    BoxSearch,
    WitnessCheck,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub strategy: Option<Strategy>,
    pub equations: usize,
    pub x_vars: usize,
    pub y_vars: usize,
    /// `y` unknowns left after fixing the gauge.
    pub free_y_vars: usize,
    /// Assignments tried (enumeration) or decisions (SAT).
    pub branches: u64,
    pub conflicts: u64,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFile>,
    pub stats: SolveStats,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub budget: Budget,
    /// Enumerate `y` directly when at most this many free bits remain.
    pub enumeration_max_bits: usize,
    /// Worker threads for enumeration; 0 picks the available parallelism.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: Budget::unlimited(),
            enumeration_max_bits: 24,
            threads: 0,
        }
    }
}

impl SolveOptions {
    pub fn with_time(mut self, limit: Duration) -> Self {
        self.budget.time = Some(limit);
        self
    }
}

#[cfg(test)]
mod tests;

//! A small CDCL SAT solver with native XOR constraints.
//!
//! Formulas mix ordinary clauses with parity constraints `x_1 ⊕ … ⊕ x_m = b`.
//! Parity constraints are propagated with two watched variables and explain
//! their implications lazily, so learning works the same for both kinds.

mod cdcl;
pub mod dimacs;

use std::fmt;
use std::ops::Not;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use cdcl::solve;

/// A literal: variable index and polarity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | u32::from(!positive))
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(var, true)
    }

    pub fn neg(var: u32) -> Lit {
        Lit::new(var, false)
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based signed DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var()) + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(v: i64) -> Option<Lit> {
        if v == 0 || v.unsigned_abs() > u64::from(u32::MAX >> 1) {
            return None;
        }
        Some(Lit::new((v.unsigned_abs() - 1) as u32, v > 0))
    }

    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var() as usize] == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// `vars[0] ⊕ … ⊕ vars[m-1] = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorClause {
    pub vars: Vec<u32>,
    pub rhs: bool,
}

impl XorClause {
    /// Sorts the variables and cancels repeated ones in pairs.
    pub fn new(mut vars: Vec<u32>, rhs: bool) -> XorClause {
        vars.sort_unstable();
        let mut out: Vec<u32> = Vec::with_capacity(vars.len());
        for v in vars {
            if out.last() == Some(&v) {
                out.pop();
            } else {
                out.push(v);
            }
        }
        XorClause { vars: out, rhs }
    }

    pub fn eval(&self, model: &[bool]) -> bool {
        self.vars.iter().fold(false, |acc, &v| acc ^ model[v as usize]) == self.rhs
    }
}

/// A CNF formula with XOR constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    xors: Vec<XorClause>,
}

impl Formula {
    pub fn new() -> Self {
        Formula::default()
    }

    pub fn with_vars(num_vars: u32) -> Self {
        Formula {
            num_vars,
            ..Formula::default()
        }
    }

    pub fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn xors(&self) -> &[XorClause] {
        &self.xors
    }

    fn reserve(&mut self, var: u32) {
        self.num_vars = self.num_vars.max(var + 1);
    }

    pub fn add_clause(&mut self, lits: Vec<Lit>) {
        for l in &lits {
            self.reserve(l.var());
        }
        self.clauses.push(lits);
    }

    pub fn add_xor(&mut self, vars: Vec<u32>, rhs: bool) {
        for &v in &vars {
            self.reserve(v);
        }
        self.xors.push(XorClause::new(vars, rhs));
    }

    /// Tseitin clauses for `out ↔ a ∧ b`.
    pub fn add_and_gate(&mut self, out: u32, a: u32, b: u32) {
        self.add_clause(vec![Lit::neg(out), Lit::pos(a)]);
        self.add_clause(vec![Lit::neg(out), Lit::pos(b)]);
        self.add_clause(vec![Lit::pos(out), Lit::neg(a), Lit::neg(b)]);
    }

    /// `x ≤ y` lexicographically (false < true), as a chain of prefix-equality
    /// variables. Equal positions are skipped.
    pub fn add_lex_leq(&mut self, x: &[u32], y: &[u32]) {
        assert_eq!(x.len(), y.len(), "lex comparison of unequal lengths");
        let mut eq: Option<u32> = None;
        let positions: Vec<(u32, u32)> = x.iter().zip(y).filter(|(a, b)| a != b).map(|(&a, &b)| (a, b)).collect();
        for (i, &(a, b)) in positions.iter().enumerate() {
            let guard: Vec<Lit> = eq.map(Lit::neg).into_iter().collect();
            let mut c = guard.clone();
            c.extend([Lit::neg(a), Lit::pos(b)]);
            self.add_clause(c);
            if i + 1 == positions.len() {
                break;
            }
            // Prefix still equal after this position.
            let next = self.new_var();
            for (la, lb) in [(Lit::pos(a), Lit::pos(b)), (Lit::neg(a), Lit::neg(b))] {
                let mut c = guard.clone();
                c.extend([!la, !lb, Lit::pos(next)]);
                self.add_clause(c);
            }
            eq = Some(next);
        }
    }

    /// Whether `model` satisfies every constraint.
    pub fn eval(&self, model: &[bool]) -> bool {
        model.len() >= self.num_vars as usize
            && self.clauses.iter().all(|c| c.iter().any(|l| l.eval(model)))
            && self.xors.iter().all(|x| x.eval(model))
    }
}

/// Resource limits; `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    /// Maximum number of branching decisions.
    pub branches: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Vec<bool>),
    Unsat,
    Unknown,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

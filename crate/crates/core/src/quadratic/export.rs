//! DIMACS CNF+XOR export of the full system and decoding of external models.

use serde::{Deserialize, Serialize};

use super::{QuadraticSystem, Witness};
use crate::error::{Error, Result};
use crate::ring::Z2;
use crate::sat::dimacs::write_dimacs;
use crate::sat::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XEntry {
    /// 1-based DIMACS variable.
    pub var: u32,
    pub eta: Vec<u32>,
    pub mu: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YEntry {
    pub var: u32,
    pub simplex: Vec<u32>,
    pub coordinate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub var: u32,
    pub left: u32,
    pub right: u32,
}

/// Sidecar mapping DIMACS variables back to unknowns of the system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarMap {
    pub num_vars: u32,
    pub x: Vec<XEntry>,
    pub y: Vec<YEntry>,
    pub products: Vec<ProductEntry>,
}

#[derive(Clone, Debug)]
pub struct DimacsExport {
    pub formula: Formula,
    pub text: String,
    pub var_map: VarMap,
}

/// One XOR line per equation and an AND gate per product term.
///
/// Variables are numbered `x` first (finger-move order), then `y` (simplex
/// order, coordinates innermost), then products (pair order, then `(i, j)`).
pub fn emit_dimacs_xor(sys: &QuadraticSystem<Z2>) -> DimacsExport {
    let b = sys.form().rank();
    let n_x = sys.n_x() as u32;
    let mut formula = Formula::with_vars(n_x + sys.n_y() as u32);
    let y_var = |s: usize, i: usize| n_x + (s * b + i) as u32;

    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); sys.n_equations()];
    for j in 0..sys.n_x() {
        for &(p, _) in sys.basis().column(j) {
            rows[p].push(j as u32);
        }
    }
    let mut products = Vec::new();
    for (p, row) in rows.iter_mut().enumerate() {
        let (a, c) = sys.pairs().endpoints(p);
        for i in 0..b {
            for j in 0..b {
                if sys.form().entry(i, j).bit() {
                    let prod = formula.new_var();
                    formula.add_and_gate(prod, y_var(a, i), y_var(c, j));
                    products.push(ProductEntry {
                        var: prod + 1,
                        left: y_var(a, i) + 1,
                        right: y_var(c, j) + 1,
                    });
                    row.push(prod);
                }
            }
        }
    }
    for (p, row) in rows.into_iter().enumerate() {
        formula.add_xor(row, sys.rhs()[p].bit());
    }

    let x = sys
        .basis()
        .moves()
        .iter()
        .enumerate()
        .map(|(j, m)| XEntry {
            var: j as u32 + 1,
            eta: m.eta.vertices().to_vec(),
            mu: m.mu.vertices().to_vec(),
        })
        .collect();
    let y = sys
        .simplices()
        .iter()
        .enumerate()
        .flat_map(|(s, simplex)| {
            (0..b).map(move |i| YEntry {
                var: y_var(s, i) + 1,
                simplex: simplex.vertices().to_vec(),
                coordinate: i,
            })
        })
        .collect();
    let var_map = VarMap {
        num_vars: formula.num_vars(),
        x,
        y,
        products,
    };
    let comments = vec![
        format!(
            "quadratic system: k={}, {} equations, form rank {}",
            sys.k(),
            sys.n_equations(),
            b
        ),
        format!("variables 1..{n_x}: x, one per finger move (eta, mu)"),
        format!(
            "variables {}..{}: y, simplex-major, coordinate-minor",
            n_x + 1,
            n_x + sys.n_y() as u32
        ),
        format!(
            "variables {}..{}: products p <-> y_a & y_b (3 clauses each)",
            n_x + sys.n_y() as u32 + 1,
            formula.num_vars()
        ),
        "x-lines: one XOR per unordered simplex pair, in lexicographic pair order".to_string(),
    ];
    let text = write_dimacs(&formula, &comments);
    DimacsExport { formula, text, var_map }
}

/// Reads a model from solver output: `v`-lines or bare signed integers.
pub fn parse_model(text: &str, num_vars: u32) -> Result<Vec<bool>> {
    let mut model = vec![false; num_vars as usize];
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('c') || line.starts_with('s') || line.is_empty() {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| Error::Parse(format!("bad model literal `{tok}`")))?;
            if v == 0 {
                continue;
            }
            let idx = v.unsigned_abs() as usize - 1;
            if idx >= model.len() {
                return Err(Error::Parse(format!("model literal {v} exceeds {num_vars} variables")));
            }
            model[idx] = v > 0;
        }
    }
    Ok(model)
}

/// Recovers `x` and `y` from a model of the exported formula.
pub fn decode_model(sys: &QuadraticSystem<Z2>, var_map: &VarMap, model: &[bool]) -> Result<Witness<Z2>> {
    if model.len() < var_map.num_vars as usize {
        return Err(Error::DimensionMismatch(format!(
            "model has {} values for {} variables",
            model.len(),
            var_map.num_vars
        )));
    }
    let b = sys.form().rank();
    let x = var_map.x.iter().map(|e| Z2(model[e.var as usize - 1])).collect();
    let mut y = vec![vec![Z2::ZERO; b]; sys.simplices().len()];
    for (idx, e) in var_map.y.iter().enumerate() {
        y[idx / b.max(1)][e.coordinate] = Z2(model[e.var as usize - 1]);
    }
    Ok(Witness { x, y })
}

//! DIMACS CNF with `x`-prefixed XOR lines.
//!
//! An XOR line `x1 -2 3 0` states `x1 ⊕ ¬x2 ⊕ x3 = true`; a negated literal
//! flips the parity. This is the extension read by XOR-aware solvers.

use std::fmt::Write as _;

use super::{Formula, Lit};
use crate::error::{Error, Result};

/// Renders `formula`; `comments` become leading `c` lines.
pub fn write_dimacs(formula: &Formula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let xor_lines = formula.xors().iter().filter(|x| !x.vars.is_empty() || x.rhs).count();
    let _ = writeln!(out, "p cnf {} {}", formula.num_vars(), formula.clauses().len() + xor_lines);
    for clause in formula.clauses() {
        for l in clause {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    for x in formula.xors() {
        if x.vars.is_empty() {
            if x.rhs {
                out.push_str("0\n");
            }
            continue;
        }
        out.push('x');
        for (i, &v) in x.vars.iter().enumerate() {
            let positive = i > 0 || x.rhs;
            let _ = write!(out, "{} ", Lit::new(v, positive).to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF with optional XOR lines.
pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut formula = Formula::new();
    let mut declared_vars = None;
    let mut pending: Vec<Lit> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("DIMACS line {}: {msg}", lineno + 1));
        if let Some(header) = line.strip_prefix('p') {
            let fields: Vec<&str> = header.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(err("expected `p cnf VARS CLAUSES`"));
            }
            let vars: u32 = fields[1].parse().map_err(|_| err("bad variable count"))?;
            declared_vars = Some(vars);
            continue;
        }
        if let Some(body) = line.strip_prefix('x') {
            if !pending.is_empty() {
                return Err(err("XOR line inside an unterminated clause"));
            }
            let mut vars = Vec::new();
            let mut rhs = true;
            let mut terminated = false;
            for tok in body.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| err("bad literal"))?;
                if v == 0 {
                    terminated = true;
                    break;
                }
                let lit = Lit::from_dimacs(v).ok_or_else(|| err("bad literal"))?;
                rhs ^= !lit.is_positive();
                vars.push(lit.var());
            }
            if !terminated {
                return Err(err("XOR line must end with 0"));
            }
            formula.add_xor(vars, rhs);
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| err("bad literal"))?;
            if v == 0 {
                formula.add_clause(std::mem::take(&mut pending));
            } else {
                pending.push(Lit::from_dimacs(v).ok_or_else(|| err("bad literal"))?);
            }
        }
    }
    if !pending.is_empty() {
        return Err(Error::Parse("DIMACS input ends inside a clause".into()));
    }
    let declared = declared_vars.ok_or_else(|| Error::Parse("missing `p cnf` header".into()))?;
    if formula.num_vars() > declared {
        return Err(Error::Parse(format!(
            "variable {} exceeds the declared count {declared}",
            formula.num_vars()
        )));
    }
    let mut sized = Formula::with_vars(declared);
    for c in formula.clauses() {
        sized.add_clause(c.clone());
    }
    for x in formula.xors() {
        sized.add_xor(x.vars.clone(), x.rhs);
    }
    Ok(sized)
}

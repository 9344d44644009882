//! DIMACS CNF input and the classical embedding into Z-basis projectors.

use std::str::FromStr;

use thiserror::Error;

use crate::hamiltonian::{Basis, InstanceError, ProjectorTerm, XZInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("clause {clause} repeats variable {var}")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("clause {clause} has {len} literals, at most 3 allowed")]
    TooWide { clause: usize, len: usize },
    #[error("clause {0} is empty")]
    Empty(usize),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// A CNF formula over variables `1..=n_vars`; literal `-v` is `¬x_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub n_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    /// Whether `assignment` (index 0 is `x_1`) satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

fn err(line: usize, message: impl Into<String>) -> CnfError {
    CnfError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_dimacs(text: &str) -> Result<Cnf, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') || l.starts_with('%') {
            continue;
        }
        if l.starts_with('p') {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] if header.is_none() => {
                    let v = v
                        .parse()
                        .map_err(|_| err(line, format!("invalid variable count {v:?}")))?;
                    let c = c
                        .parse()
                        .map_err(|_| err(line, format!("invalid clause count {c:?}")))?;
                    header = Some((v, c));
                }
                _ => return Err(err(line, format!("invalid problem line {l:?}"))),
            }
            continue;
        }
        let (n_vars, _) = header.ok_or_else(|| err(line, "clause before \"p cnf\" header"))?;
        for tok in l.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| err(line, format!("invalid literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > n_vars {
                return Err(err(line, format!("literal {lit} exceeds {n_vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let (n_vars, n_clauses) = header.ok_or_else(|| err(last_line.max(1), "missing \"p cnf\" header"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != n_clauses {
        return Err(err(
            last_line.max(1),
            format!("header declares {n_clauses} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Cnf { n_vars, clauses })
}

impl FromStr for Cnf {
    type Err = CnfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_dimacs(s)
    }
}

/// One Z-basis term per clause, penalizing its unique violating assignment.
pub fn embed_3sat(cnf: &Cnf) -> Result<XZInstance, CnfError> {
    let mut terms = Vec::with_capacity(cnf.clauses.len());
    for (i, clause) in cnf.clauses.iter().enumerate() {
        let index = i + 1;
        if clause.is_empty() {
            return Err(CnfError::Empty(index));
        }
        if clause.len() > 3 {
            return Err(CnfError::TooWide {
                clause: index,
                len: clause.len(),
            });
        }
        let vars: Vec<usize> = clause.iter().map(|l| l.unsigned_abs() as usize).collect();
        for (j, v) in vars.iter().enumerate() {
            if vars[..j].contains(v) {
                return Err(CnfError::RepeatedVariable { clause: index, var: *v });
            }
        }
        // a positive literal is violated by 0, a negative one by 1
        let violating = clause.iter().fold(0usize, |acc, &l| (acc << 1) | usize::from(l < 0));
        let term = ProjectorTerm::new(Basis::Z, vars, [violating]).expect("distinct variables");
        terms.push(term);
    }
    Ok(XZInstance::new(cnf.n_vars, terms, None, None)?)
}

//! CNF formulas: DIMACS I/O, normalization, conflict pairs, exhaustive SAT.

use std::fmt::Write as _;
use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("no `p cnf` header found")]
    NoHeader,
    #[error("line {line}: malformed header {text:?}")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid token {token:?}")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: variable {var} out of range 1..={num_vars}")]
    VarOutOfRange { line: usize, var: u64, num_vars: u32 },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("header declares {declared} clauses, found {actual}")]
    ClauseCountMismatch { declared: usize, actual: usize },
    #[error("clause {clause} has width {width}; at most 3 literals are supported")]
    ClauseTooWide { clause: usize, width: usize },
    #[error("formula has {num_vars} variables, exhaustive search is capped at {cap}")]
    TooManyVariables { num_vars: u32, cap: u32 },
    #[error("input is not UTF-8")]
    Encoding,
    #[error("read failed: {0}")]
    Io(String),
}

/// Literal `x_var` (positive) or `¬x_var`. Variables are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, positive: false }
    }

    /// Exponent α with x^1 = x and x^0 = ¬x.
    pub fn alpha(self) -> u8 {
        self.positive as u8
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    fn is_satisfied_by(self, assignment: u64) -> bool {
        (assignment >> (self.var - 1) & 1 == 1) == self.positive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_tautology(&self) -> bool {
        self.literals.iter().any(|l| self.literals.iter().any(|m| m.var == l.var && m.positive != l.positive))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

/// Position of a literal: 1-based clause index and 1-based position inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LiteralPos {
    pub clause: usize,
    pub position: usize,
}

/// `q` carries ¬x_m (α = 0), `r` carries x_m (α = 1), in different clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConflictPair {
    pub q: LiteralPos,
    pub r: LiteralPos,
}

impl ConflictPair {
    pub fn new(q: (usize, usize), r: (usize, usize)) -> Self {
        ConflictPair { q: LiteralPos { clause: q.0, position: q.1 }, r: LiteralPos { clause: r.0, position: r.1 } }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatResult {
    pub satisfiable: bool,
    /// `witness[m - 1]` is the value of `x_m`.
    pub witness: Option<Vec<bool>>,
}

pub const DEFAULT_MAX_SAT_VARS: u32 = 24;

pub fn read_dimacs(mut reader: impl Read) -> Result<CnfFormula, CnfError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(|e| CnfError::Io(e.to_string()))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CnfError::Encoding)?;
    parse_dimacs(text)
}

/// Parses DIMACS CNF. Clause width is not limited here; `normalize` enforces it.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::DuplicateHeader { line: lineno });
            }
            let malformed = || CnfError::MalformedHeader { line: lineno, text: trimmed.to_string() };
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(malformed());
            }
            let n = parts[2].parse::<u32>().map_err(|_| malformed())?;
            let t = parts[3].parse::<usize>().map_err(|_| malformed())?;
            header = Some((n, t));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(CnfError::MissingHeader { line: lineno });
        };
        for token in trimmed.split_whitespace() {
            let value: i64 =
                token.parse().map_err(|_| CnfError::InvalidToken { line: lineno, token: token.to_string() })?;
            if value == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause { line: lineno });
                }
                clauses.push(Clause::new(std::mem::take(&mut current)));
                continue;
            }
            let var = value.unsigned_abs();
            if var > num_vars as u64 {
                return Err(CnfError::VarOutOfRange { line: lineno, var, num_vars });
            }
            current.push(Literal { var: var as u32, positive: value > 0 });
        }
    }
    let Some((num_vars, declared)) = header else {
        return Err(CnfError::NoHeader);
    };
    if !current.is_empty() {
        return Err(CnfError::Unterminated);
    }
    if declared != clauses.len() {
        return Err(CnfError::ClauseCountMismatch { declared, actual: clauses.len() });
    }
    Ok(CnfFormula { num_vars, clauses })
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Self {
        CnfFormula { num_vars, clauses }
    }

    /// Builds a formula from DIMACS-style signed integers per clause.
    pub fn from_ints(num_vars: u32, clauses: &[&[i64]]) -> Self {
        let clauses = clauses
            .iter()
            .map(|c| {
                Clause::new(c.iter().map(|&x| Literal { var: x.unsigned_abs() as u32, positive: x > 0 }).collect())
            })
            .collect();
        CnfFormula { num_vars, clauses }
    }

    /// Seeded random 3-CNF: each clause has three distinct variables with
    /// independent signs, so the result is already normalized.
    pub fn random_3cnf(num_vars: u32, num_clauses: usize, seed: u64) -> CnfFormula {
        assert!(num_vars >= 3, "a 3-CNF needs at least three variables");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clauses = (0..num_clauses)
            .map(|_| {
                let vars = rand::seq::index::sample(&mut rng, num_vars as usize, 3);
                Clause::new(vars.iter().map(|v| Literal { var: v as u32 + 1, positive: rng.gen() }).collect())
            })
            .collect();
        CnfFormula { num_vars, clauses }
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in &c.literals {
                write!(out, "{} ", l.to_dimacs()).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    /// Drops clauses containing both x_m and ¬x_m, removes repeated
    /// literals, and enforces width at most 3.
    pub fn normalize(&self) -> Result<CnfFormula, CnfError> {
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for (i, c) in self.clauses.iter().enumerate() {
            if c.is_tautology() {
                continue;
            }
            let mut lits: Vec<Literal> = Vec::with_capacity(c.width());
            for l in &c.literals {
                if !lits.contains(l) {
                    lits.push(*l);
                }
            }
            if lits.len() > 3 {
                return Err(CnfError::ClauseTooWide { clause: i + 1, width: lits.len() });
            }
            clauses.push(Clause::new(lits));
        }
        Ok(CnfFormula { num_vars: self.num_vars, clauses })
    }

    pub fn is_normalized(&self) -> bool {
        self.clauses.iter().all(|c| {
            (1..=3).contains(&c.width())
                && !c.is_tautology()
                && c.literals.iter().enumerate().all(|(i, l)| !c.literals[..i].contains(l))
                && c.literals.iter().all(|l| l.var >= 1 && l.var <= self.num_vars)
        })
    }

    /// All pairs (q, r) of literal positions with the same variable where q
    /// is negative and r positive, in lexicographic order of
    /// (q.clause, q.position, r.clause, r.position).
    pub fn conflict_pairs(&self) -> Vec<ConflictPair> {
        let positions: Vec<(LiteralPos, Literal)> = self
            .clauses
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| {
                c.literals.iter().enumerate().map(move |(li, l)| (LiteralPos { clause: ci + 1, position: li + 1 }, *l))
            })
            .collect();
        let mut out = Vec::new();
        for (q, lq) in positions.iter().filter(|(_, l)| !l.positive) {
            for (r, lr) in positions.iter().filter(|(_, l)| l.positive) {
                if lq.var == lr.var {
                    out.push(ConflictPair { q: *q, r: *r });
                }
            }
        }
        out
    }

    /// `assignment` bit `m - 1` holds the value of `x_m`.
    pub fn evaluate(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| c.literals.iter().any(|l| l.is_satisfied_by(assignment)))
    }

    /// Exhaustive search over all 2^n assignments. The witness is the
    /// satisfying assignment with the smallest integer encoding.
    pub fn brute_force_sat(&self, max_vars: u32) -> Result<SatResult, CnfError> {
        if self.num_vars > max_vars || self.num_vars > 63 {
            return Err(CnfError::TooManyVariables { num_vars: self.num_vars, cap: max_vars });
        }
        let masks: Vec<(u64, u64)> = self
            .clauses
            .iter()
            .map(|c| {
                c.literals.iter().fold((0u64, 0u64), |(p, n), l| {
                    let bit = 1u64 << (l.var - 1);
                    if l.positive {
                        (p | bit, n)
                    } else {
                        (p, n | bit)
                    }
                })
            })
            .collect();
        let found = (0..1u64 << self.num_vars)
            .into_par_iter()
            .find_first(|&a| masks.iter().all(|&(p, n)| a & p != 0 || !a & n != 0));
        Ok(SatResult {
            satisfiable: found.is_some(),
            witness: found.map(|a| (0..self.num_vars).map(|m| a >> m & 1 == 1).collect()),
        })
    }
}

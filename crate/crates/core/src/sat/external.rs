//! Optional adapter for an external SAT or MaxSAT solver.
//!
//! The problem is written to the solver's stdin in DIMACS (or WCNF); the
//! `s`, `o` and `v` lines of its stdout are parsed back.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use crate::error::{Error, Result};

use super::cnf::{CnfInstance, WeightedCnf};
use super::dimacs::{write_cnf, write_wcnf};

/// Environment variable naming the external solver executable.
pub const SOLVER_ENV: &str = "RFX_EXTERNAL_SOLVER";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExternalStatus {
    Sat,
    Unsat,
    Optimum,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalAnswer {
    pub status: ExternalStatus,
    /// One value per variable; unmentioned variables default to false.
    pub model: Option<Vec<bool>>,
    /// Last `o` line, for MaxSAT solvers.
    pub cost: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ExternalSolver {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl ExternalSolver {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        ExternalSolver {
            program: program.into(),
            args: Vec::new(),
        }
    }

    /// The solver named by [`SOLVER_ENV`], if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(SOLVER_ENV).map(ExternalSolver::new)
    }

    pub fn solve_cnf(&self, cnf: &CnfInstance) -> Result<ExternalAnswer> {
        let out = self.run(&write_cnf(cnf))?;
        parse_solver_output(&out, cnf.var_count())
    }

    pub fn solve_wcnf(&self, problem: &WeightedCnf) -> Result<ExternalAnswer> {
        let out = self.run(&write_wcnf(problem))?;
        parse_solver_output(&out, problem.var_count())
    }

    fn run(&self, input: &str) -> Result<String> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Error::External(format!("cannot start {}: {e}", self.program.display())))?;
        child.stdin.take().expect("piped stdin").write_all(input.as_bytes())?;
        let output = child.wait_with_output()?;
        String::from_utf8(output.stdout).map_err(|_| Error::External("solver output is not UTF-8".into()))
    }
}

/// Parses competition-style solver output.
pub fn parse_solver_output(text: &str, var_count: usize) -> Result<ExternalAnswer> {
    let mut status = None;
    let mut cost = None;
    let mut values: Vec<i64> = Vec::new();
    let mut saw_values = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(match rest.trim() {
                "SATISFIABLE" => ExternalStatus::Sat,
                "UNSATISFIABLE" => ExternalStatus::Unsat,
                "OPTIMUM FOUND" => ExternalStatus::Optimum,
                _ => ExternalStatus::Unknown,
            });
        } else if let Some(rest) = line.strip_prefix("o ") {
            cost = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| Error::External(format!("bad cost line `{line}`")))?,
            );
        } else if let Some(rest) = line.strip_prefix('v') {
            saw_values = true;
            let rest = rest.trim();
            // Some MaxSAT solvers print the model as a 0/1 string.
            if !rest.is_empty() && rest.chars().all(|c| c == '0' || c == '1') && !rest.contains(' ') && rest.len() > 1 {
                values.extend(
                    rest.chars()
                        .enumerate()
                        .map(|(i, c)| if c == '1' { i as i64 + 1 } else { -(i as i64 + 1) }),
                );
                continue;
            }
            for tok in rest.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| Error::External(format!("bad value `{tok}` in `{line}`")))?;
                if v != 0 {
                    values.push(v);
                }
            }
        }
    }
    let status = status.ok_or_else(|| Error::External("no status line in solver output".into()))?;
    let model = if saw_values {
        let mut bits = vec![false; var_count];
        for v in values {
            let idx = v.unsigned_abs() as usize;
            if idx == 0 || idx > var_count {
                continue;
            }
            bits[idx - 1] = v > 0;
        }
        Some(bits)
    } else {
        None
    };
    Ok(ExternalAnswer { status, model, cost })
}

//! DIMACS CNF, old-style WCNF and a DIMACS-like DNF term list.
//!
//! WCNF headers read `p wcnf <vars> <clauses> <top>`; every clause whose
//! weight is at least `top` is hard. The top weight may be omitted, in which
//! case all clauses are soft. DNF files read `p dnf <vars> <terms>` followed
//! by zero-terminated terms.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::logic::{Clause, Literal, Term};

use super::cnf::{CnfInstance, WeightedCnf};

struct Header {
    kind: String,
    vars: usize,
    count: usize,
    top: Option<u64>,
    line: usize,
}

type Rows = Vec<(usize, Vec<i64>)>;

/// Zero-terminated integer rows after the header, each tagged with the
/// line on which it started.
fn read_rows(text: &str, format: &'static str) -> Result<(Header, Rows)> {
    let err = |line: usize, message: String| Error::Parse { format, line, message };
    let mut header: Option<Header> = None;
    let mut rows = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut start = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.starts_with('%') {
            break;
        }
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate problem line".into()));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() < 3 || fields.len() > 4 {
                return Err(err(line_no, format!("malformed problem line `{line}`")));
            }
            let num = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| err(line_no, format!("expected a non-negative integer, found `{s}`")))
            };
            header = Some(Header {
                kind: fields[0].to_string(),
                vars: num(fields[1])? as usize,
                count: num(fields[2])? as usize,
                top: fields.get(3).map(|s| num(s)).transpose()?,
                line: line_no,
            });
            continue;
        }
        if header.is_none() {
            return Err(err(line_no, "data before the problem line".into()));
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("expected an integer, found `{tok}`")))?;
            if current.is_empty() {
                start = line_no;
            }
            if v != 0 {
                current.push(v);
            } else {
                rows.push((start, std::mem::take(&mut current)));
            }
        }
    }
    let header = header.ok_or_else(|| err(0, "missing problem line".into()))?;
    if !current.is_empty() {
        return Err(err(start, "row is not terminated by 0".into()));
    }
    if rows.len() != header.count {
        return Err(err(
            header.line,
            format!("header declares {} rows, found {}", header.count, rows.len()),
        ));
    }
    Ok((header, rows))
}

fn literals(codes: &[i64], vars: usize, line: usize, format: &'static str) -> Result<Vec<Literal>> {
    codes
        .iter()
        .map(|&c| {
            if c.unsigned_abs() as usize > vars {
                Err(Error::Parse {
                    format,
                    line,
                    message: format!("literal {c} exceeds the declared {vars} variables"),
                })
            } else {
                Ok(Literal::from_dimacs(c))
            }
        })
        .collect()
}

fn expect_kind(h: &Header, kind: &str, format: &'static str) -> Result<()> {
    if h.kind != kind {
        return Err(Error::Parse {
            format,
            line: h.line,
            message: format!("expected `p {kind}`, found `p {}`", h.kind),
        });
    }
    Ok(())
}

/// Parses DIMACS CNF. Tautological clauses are dropped.
pub fn parse_cnf(text: &str) -> Result<CnfInstance> {
    const F: &str = "DIMACS";
    let (h, rows) = read_rows(text, F)?;
    expect_kind(&h, "cnf", F)?;
    if h.top.is_some() {
        return Err(Error::Parse {
            format: F,
            line: h.line,
            message: "unexpected field on the problem line".into(),
        });
    }
    let mut cnf = CnfInstance::new(h.vars);
    for (line, codes) in rows {
        cnf.add_clause(Clause::new(literals(&codes, h.vars, line, F)?))?;
    }
    Ok(cnf)
}

pub fn write_cnf(cnf: &CnfInstance) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.var_count(), cnf.len());
    for c in cnf.clauses() {
        write_row(&mut out, None, c.iter());
    }
    out
}

fn write_row(out: &mut String, weight: Option<u64>, lits: impl Iterator<Item = Literal>) {
    if let Some(w) = weight {
        write!(out, "{w} ").expect("write to string");
    }
    for l in lits {
        write!(out, "{} ", l.to_dimacs()).expect("write to string");
    }
    out.push_str("0\n");
}

/// Parses old-style WCNF; the first integer of each row is its weight.
pub fn parse_wcnf(text: &str) -> Result<WeightedCnf> {
    const F: &str = "WCNF";
    let (h, rows) = read_rows(text, F)?;
    expect_kind(&h, "wcnf", F)?;
    let mut hard = CnfInstance::new(h.vars);
    let mut soft = Vec::new();
    for (line, codes) in rows {
        let Some((&w, rest)) = codes.split_first() else {
            return Err(Error::Parse {
                format: F,
                line,
                message: "missing weight".into(),
            });
        };
        if w < 1 {
            return Err(Error::Parse {
                format: F,
                line,
                message: format!("weight must be positive, found {w}"),
            });
        }
        let clause = Clause::new(literals(rest, h.vars, line, F)?);
        match h.top {
            Some(top) if w as u64 >= top => hard.add_clause(clause)?,
            _ => soft.push((clause, w as u64)),
        }
    }
    let mut out = WeightedCnf::new(hard);
    for (c, w) in soft {
        out.add_soft(c, w)?;
    }
    Ok(out)
}

/// Writes old-style WCNF with top weight one above the total soft weight.
pub fn write_wcnf(problem: &WeightedCnf) -> String {
    let top = problem.total_soft_weight() + 1;
    let count = problem.hard.len() + problem.soft().len();
    let mut out = format!("p wcnf {} {count} {top}\n", problem.var_count());
    for c in problem.hard.clauses() {
        write_row(&mut out, Some(top), c.iter());
    }
    for (c, w) in problem.soft() {
        write_row(&mut out, Some(*w), c.iter());
    }
    out
}

/// Parses a DNF term list. Returns the variable count and the terms.
pub fn parse_dnf(text: &str) -> Result<(usize, Vec<Term>)> {
    const F: &str = "DNF";
    let (h, rows) = read_rows(text, F)?;
    expect_kind(&h, "dnf", F)?;
    let mut terms = Vec::with_capacity(rows.len());
    for (line, codes) in rows {
        let lits = literals(&codes, h.vars, line, F)?;
        let t = Term::new(lits).map_err(|e| Error::Parse {
            format: F,
            line,
            message: e.to_string(),
        })?;
        terms.push(t);
    }
    Ok((h.vars, terms))
}

pub fn write_dnf(var_count: usize, terms: &[Term]) -> String {
    let mut out = format!("p dnf {var_count} {}\n", terms.len());
    for t in terms {
        write_row(&mut out, None, t.iter());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::orchid;
    use crate::sat::implicant::build_implicant_cnf;

    #[test]
    fn parse_simple_cnf() {
        let cnf = parse_cnf("c comment\np cnf 2 1\n1 2 0\n").unwrap();
        assert_eq!(cnf.var_count(), 2);
        assert_eq!(cnf.clauses(), &[Clause::from_dimacs(&[1, 2])]);
    }

    #[test]
    fn clauses_may_span_lines() {
        let cnf = parse_cnf("p cnf 3 2\n1 -2\n 3 0 -1 0\n").unwrap();
        assert_eq!(cnf.len(), 2);
        assert_eq!(cnf.clauses()[1], Clause::from_dimacs(&[-1]));
    }

    #[test]
    fn implicant_cnf_round_trip() {
        let h = build_implicant_cnf(&orchid::forest());
        assert_eq!(parse_cnf(&write_cnf(&h)).unwrap(), h);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = parse_cnf("p cnf 2 1\n1 x 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_cnf("p cnf 2 1\n1 3 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_cnf("1 2 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        let e = parse_cnf("p cnf 2 2\n1 2 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        let e = parse_cnf("p cnf 2 1\n1 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn wcnf_top_weight() {
        let p = parse_wcnf("p wcnf 2 3 10\n10 1 2 0\n1 -1 0\n2 -2 0\n").unwrap();
        assert_eq!(p.hard.len(), 1);
        assert_eq!(p.soft().len(), 2);
        let text = write_wcnf(&p);
        assert!(text.starts_with("p wcnf 2 3 4\n4 1 2 0\n"));
        assert_eq!(parse_wcnf(&text).unwrap(), p);
        let all_soft = parse_wcnf("p wcnf 1 1\n7 1 0\n").unwrap();
        assert_eq!(all_soft.soft(), &[(Clause::from_dimacs(&[1]), 7)]);
    }

    #[test]
    fn dnf_round_trip() {
        let (n, terms) = parse_dnf("p dnf 4 2\n2 0\n1 -2 4 0\n").unwrap();
        assert_eq!(n, 4);
        assert_eq!(terms.len(), 2);
        assert_eq!(parse_dnf(&write_dnf(n, &terms)).unwrap(), (n, terms));
        assert!(parse_dnf("p dnf 2 1\n1 -1 0\n").is_err());
    }
}

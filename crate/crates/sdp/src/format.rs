//! Line-oriented plain-text problem dumps.
//!
//! ```text
//! ctxdim-sdp v1
//! blocks <k>
//! block <name> <dim>
//! objective <block> <row> <col> <re> <im>
//! constraint <j> rhs <b>
//! coef <j> <block> <row> <col> <re> <im>
//! ```
//!
//! Entries absent from the file are zero. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use num_complex::Complex64;

use ctxdim_core::linalg::CMatrix;

use crate::error::{Error, Result};
use crate::problem::SdpProblem;

pub const HEADER: &str = "ctxdim-sdp v1";

fn write_entries(out: &mut String, prefix: &str, m: &CMatrix) {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            if z.re != 0.0 || z.im != 0.0 {
                let _ = writeln!(out, "{prefix} {r} {c} {:e} {:e}", z.re, z.im);
            }
        }
    }
}

pub fn dump(problem: &SdpProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "blocks {}", problem.blocks.len());
    for b in &problem.blocks {
        let _ = writeln!(out, "block {} {}", b.name, b.dim);
    }
    for (i, c) in problem.objective.iter().enumerate() {
        write_entries(&mut out, &format!("objective {i}"), c);
    }
    for (j, con) in problem.constraints.iter().enumerate() {
        let _ = writeln!(out, "constraint {j} rhs {:e}", con.rhs);
        for (i, a) in &con.terms {
            write_entries(&mut out, &format!("coef {j} {i}"), a);
        }
    }
    out
}

struct Cursor<'a> {
    line: usize,
    fields: Vec<&'a str>,
}

impl Cursor<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, message: message.into() }
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        if self.fields.len() == n {
            Ok(())
        } else {
            Err(self.err(format!("expected {n} fields, found {}", self.fields.len())))
        }
    }

    fn parse<T: std::str::FromStr>(&self, k: usize, what: &str) -> Result<T> {
        self.fields[k].parse().map_err(|_| self.err(format!("bad {what} '{}'", self.fields[k])))
    }
}

pub fn parse(text: &str) -> Result<SdpProblem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((line, other)) => {
            return Err(Error::Parse { line, message: format!("expected header '{HEADER}', found '{other}'") })
        }
        None => return Err(Error::Parse { line: 0, message: "empty input".into() }),
    }
    let mut problem = SdpProblem::new();
    let mut declared: Option<usize> = None;
    for (line, text) in lines {
        let cur = Cursor { line, fields: text.split_whitespace().collect() };
        match cur.fields[0] {
            "blocks" => {
                cur.expect_len(2)?;
                declared = Some(cur.parse(1, "block count")?);
            }
            "block" => {
                cur.expect_len(3)?;
                let dim: usize = cur.parse(2, "dimension")?;
                if dim == 0 {
                    return Err(cur.err("zero block dimension"));
                }
                problem.add_block(cur.fields[1], dim);
            }
            "objective" => {
                cur.expect_len(6)?;
                let (i, r, c, z) = entry(&cur, 1, &problem)?;
                problem.objective[i][(r, c)] = z;
            }
            "constraint" => {
                cur.expect_len(4)?;
                let j: usize = cur.parse(1, "constraint index")?;
                if j != problem.constraints.len() || cur.fields[2] != "rhs" {
                    return Err(cur.err(format!("expected 'constraint {} rhs <b>'", problem.constraints.len())));
                }
                let rhs: f64 = cur.parse(3, "rhs")?;
                problem.add_constraint(Vec::new(), rhs);
            }
            "coef" => {
                cur.expect_len(7)?;
                let j: usize = cur.parse(1, "constraint index")?;
                if j + 1 != problem.constraints.len() {
                    return Err(cur.err(format!("coef for constraint {j} outside its section")));
                }
                let (i, r, c, z) = entry(&cur, 2, &problem)?;
                let terms = &mut problem.constraints[j].terms;
                let pos = match terms.iter().position(|(b, _)| *b == i) {
                    Some(p) => p,
                    None => {
                        let dim = problem.blocks[i].dim;
                        terms.push((i, CMatrix::zeros(dim, dim)));
                        terms.len() - 1
                    }
                };
                terms[pos].1[(r, c)] = z;
            }
            other => return Err(cur.err(format!("unknown record '{other}'"))),
        }
    }
    if declared != Some(problem.blocks.len()) {
        return Err(Error::Parse {
            line: 0,
            message: format!("declared {declared:?} blocks, found {}", problem.blocks.len()),
        });
    }
    problem.validate()?;
    Ok(problem)
}

fn entry(cur: &Cursor<'_>, at: usize, problem: &SdpProblem) -> Result<(usize, usize, usize, Complex64)> {
    let i: usize = cur.parse(at, "block index")?;
    let r: usize = cur.parse(at + 1, "row")?;
    let c: usize = cur.parse(at + 2, "column")?;
    let re: f64 = cur.parse(at + 3, "real part")?;
    let im: f64 = cur.parse(at + 4, "imaginary part")?;
    let dim = problem.blocks.get(i).ok_or_else(|| cur.err(format!("unknown block {i}")))?.dim;
    if r >= dim || c >= dim {
        return Err(cur.err(format!("entry ({r}, {c}) outside {dim}x{dim} block")));
    }
    Ok((i, r, c, Complex64::new(re, im)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ctxdim_core::linalg::{c, identity};

    #[test]
    fn dump_then_parse_is_identity() {
        let mut p = SdpProblem::new();
        p.add_block("rho", 2);
        p.add_block("aux", 1);
        p.set_objective(
            0,
            CMatrix::from_row_slice(2, 2, &[c(0.1, 0.0), c(1.0 / 3.0, -0.7), c(1.0 / 3.0, 0.7), c(-2.5, 0.0)]),
        );
        p.add_constraint(vec![(0, identity(2)), (1, identity(1).scale(-1.0))], 0.125);
        p.add_constraint(vec![(1, identity(1))], 1e-300);
        let back = parse(&dump(&p)).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_bad_header_and_ranges() {
        assert!(matches!(parse("sdp v0\n"), Err(Error::Parse { line: 1, .. })));
        let text = "ctxdim-sdp v1\nblocks 1\nblock x 2\nobjective 0 2 0 1 0\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn rejects_non_hermitian_coefficients() {
        let text = "ctxdim-sdp v1\nblocks 1\nblock x 2\nobjective 0 0 1 1 0\n";
        assert!(matches!(parse(text), Err(Error::NotHermitian { .. })));
    }
}

//! Linear mode: pp formulas over a ring written as systems of homogeneous equations.
//!
//! ```text
//! lformula := ["vars" IDENT {IDENT} ":"] [("E" | "exists") IDENT {IDENT} ":"] system
//! system   := "T" | equation {"&" equation}
//! equation := sum "=" sum
//! sum      := ["-"] term {("+" | "-") term}
//! term     := INT ["*" IDENT] | "@" INT "*" IDENT | IDENT
//! ```
//!
//! `k*x` scales by the integer `k` (read in the ring as `k·1`), `@i*x` by the ring element
//! with index `i`. The only constant allowed is `0`.

use super::parser::{lex_line, Cursor, ParseError, Tok};

/// Coefficient as written; the ring interprets it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coef {
    Int(i64),
    Elem(usize),
    NegElem(usize),
}

impl Coef {
    fn negate(self) -> Coef {
        match self {
            Coef::Int(k) => Coef::Int(-k),
            Coef::Elem(i) => Coef::NegElem(i),
            Coef::NegElem(i) => Coef::Elem(i),
        }
    }
}

/// Rows of `lhs - rhs` over columns `free ++ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSyntax {
    pub free: Vec<String>,
    pub bound: Vec<String>,
    pub rows: Vec<Vec<(usize, Coef)>>,
}

type RawTerm = (Coef, Option<String>);

fn names_until_colon(cur: &mut Cursor) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    while *cur.peek() != Tok::Colon {
        let name = cur.ident()?;
        if out.contains(&name) {
            return Err(cur.error(format!("variable `{name}` listed twice")));
        }
        out.push(name);
    }
    cur.expect(Tok::Colon)?;
    Ok(out)
}

fn parse_term(cur: &mut Cursor, negative: bool) -> Result<RawTerm, ParseError> {
    let sign = |c: Coef| if negative { c.negate() } else { c };
    match cur.peek().clone() {
        Tok::Int(k) => {
            cur.next();
            if *cur.peek() == Tok::Star {
                cur.next();
                let v = cur.ident()?;
                Ok((sign(Coef::Int(k)), Some(v)))
            } else if k == 0 {
                Ok((Coef::Int(0), None))
            } else {
                Err(cur.error(format!("constant `{k}` is not allowed; equations are homogeneous")))
            }
        }
        Tok::At => {
            cur.next();
            let i = match cur.next() {
                Tok::Int(i) if i >= 0 => i as usize,
                t => return Err(cur.error(format!("expected a ring element index after `@`, found {t}"))),
            };
            cur.expect(Tok::Star)?;
            let v = cur.ident()?;
            Ok((sign(Coef::Elem(i)), Some(v)))
        }
        Tok::Ident(_) => {
            let v = cur.ident()?;
            Ok((sign(Coef::Int(1)), Some(v)))
        }
        t => Err(cur.error(format!("expected a term, found {t}"))),
    }
}

fn parse_sum(cur: &mut Cursor) -> Result<Vec<RawTerm>, ParseError> {
    let mut negative = false;
    if *cur.peek() == Tok::Minus {
        cur.next();
        negative = true;
    }
    let mut out = vec![parse_term(cur, negative)?];
    loop {
        match cur.peek() {
            Tok::Plus => negative = false,
            Tok::Minus => negative = true,
            _ => return Ok(out),
        }
        cur.next();
        out.push(parse_term(cur, negative)?);
    }
}

/// Parses a linear pp formula; free variables are listed by `vars`, taken from `free`, or
/// collected in order of first occurrence.
pub fn parse_linear(text: &str, free: Option<&[String]>) -> Result<LinearSyntax, ParseError> {
    let mut cur = Cursor::new(lex_line(text, 1)?, 1);
    let mut declared: Option<Vec<String>> = free.map(|f| f.to_vec());
    if matches!(cur.peek(), Tok::Ident(k) if k == "vars") {
        cur.next();
        let vs = names_until_colon(&mut cur)?;
        if let Some(d) = &declared {
            if *d != vs {
                return Err(cur.error("`vars` list disagrees with the expected free variables"));
            }
        }
        declared = Some(vs);
    }
    let mut bound = Vec::new();
    if matches!(cur.peek(), Tok::Ident(k) if k == "E" || k == "exists") && matches!(cur.peek2(), Tok::Ident(_)) {
        cur.next();
        bound = names_until_colon(&mut cur)?;
    }
    if let Some(d) = &declared {
        if let Some(b) = bound.iter().find(|b| d.contains(b)) {
            return Err(cur.error(format!("`{b}` is both free and bound")));
        }
    }
    let mut equations: Vec<(Vec<RawTerm>, Vec<RawTerm>, usize)> = Vec::new();
    if matches!(cur.peek(), Tok::Ident(k) if k == "T") && *cur.peek2() == Tok::End {
        cur.next();
    } else {
        loop {
            let col = cur.col();
            let lhs = parse_sum(&mut cur)?;
            cur.expect(Tok::Eq)?;
            let rhs = parse_sum(&mut cur)?;
            equations.push((lhs, rhs, col));
            if *cur.peek() == Tok::Amp {
                cur.next();
            } else {
                break;
            }
        }
    }
    if *cur.peek() != Tok::End {
        return Err(cur.error(format!("unexpected {}", cur.peek())));
    }
    let mut free_vars = declared.clone().unwrap_or_default();
    for (l, r, col) in &equations {
        for (_, v) in l.iter().chain(r) {
            let Some(v) = v else { continue };
            if bound.contains(v) || free_vars.contains(v) {
                continue;
            }
            if declared.is_some() {
                return Err(ParseError { line: 1, col: *col, message: format!("unknown variable `{v}`") });
            }
            free_vars.push(v.clone());
        }
    }
    let column = |v: &str| {
        free_vars.iter().position(|f| f == v).unwrap_or_else(|| free_vars.len() + bound.iter().position(|b| b == v).unwrap())
    };
    let rows = equations
        .iter()
        .map(|(l, r, _)| {
            let mut row = Vec::new();
            for (c, v) in l {
                if let Some(v) = v {
                    row.push((column(v), *c));
                }
            }
            for (c, v) in r {
                if let Some(v) = v {
                    row.push((column(v), c.negate()));
                }
            }
            row
        })
        .collect();
    Ok(LinearSyntax { free: free_vars, bound, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility() {
        let s = parse_linear("E y: x = 2*y", None).unwrap();
        assert_eq!(s.free, ["x"]);
        assert_eq!(s.bound, ["y"]);
        assert_eq!(s.rows, vec![vec![(0, Coef::Int(1)), (1, Coef::Int(-2))]]);
    }

    #[test]
    fn zero_and_truth() {
        let s = parse_linear("x = 0", None).unwrap();
        assert_eq!(s.rows, vec![vec![(0, Coef::Int(1))]]);
        let free = ["x".to_string()];
        let t = parse_linear("T", Some(&free)).unwrap();
        assert!(t.rows.is_empty() && t.free == free);
    }

    #[test]
    fn ring_elements_and_signs() {
        let s = parse_linear("vars a b: -a + @3*b = 0 & a - b = 0", None).unwrap();
        assert_eq!(s.rows[0], vec![(0, Coef::Int(-1)), (1, Coef::Elem(3))]);
        assert_eq!(s.rows[1], vec![(0, Coef::Int(1)), (1, Coef::Int(-1))]);
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_linear("x = 1", None).unwrap_err();
        assert_eq!(e.col, 6);
        assert!(parse_linear("x = y", Some(&["x".to_string()])).is_err());
        assert!(parse_linear("x = 0 | y = 0", None).is_err());
    }
}

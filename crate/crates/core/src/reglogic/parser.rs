//! Parser for `.rth` theory files.
//!
//! ```text
//! line     := decl | sequent
//! decl     := "sort" IDENT | "rel" IDENT "(" [IDENT {"," IDENT}] ")"
//!           | "fun" IDENT "(" [IDENT {"," IDENT}] ")" "->" IDENT
//! sequent  := ["forall" vars ":"] formula "=>" formula
//! formula  := "exists" vars ":" formula | conj
//! conj     := unit {"&" unit}
//! unit     := "T" | "(" formula ")" | "exists" vars ":" formula
//!           | IDENT "(" terms ")" | IDENT | term "=" term
//! vars     := var {var}          var := IDENT | "(" IDENT ":" IDENT ")"
//! term     := IDENT | IDENT "(" terms ")"
//! ```
//!
//! One sequent or declaration per line; `#` starts a comment. Without any `sort`
//! declaration the single sort `U` is used, and undeclared relation and function
//! symbols are added on first use.

use std::fmt;

use thiserror::Error;

use super::syntax::{Formula, FunSymbol, RelSymbol, Sequent, Signature, Term, Theory, Var};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Colon,
    Amp,
    Implies,
    Arrow,
    Eq,
    Plus,
    Minus,
    Star,
    At,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(k) => write!(f, "`{k}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Implies => write!(f, "`=>`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::At => write!(f, "`@`"),
            Tok::End => write!(f, "end of line"),
        }
    }
}

/// Tokens of one line with their 1-based columns.
pub(crate) fn lex_line(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, message: String| ParseError { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            ' ' | '\t' | '\r' => i += 1,
            '(' => {
                out.push((Tok::LParen, col));
                i += 1
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1
            }
            ',' => {
                out.push((Tok::Comma, col));
                i += 1
            }
            ':' => {
                out.push((Tok::Colon, col));
                i += 1
            }
            '&' => {
                out.push((Tok::Amp, col));
                i += 1
            }
            '+' => {
                out.push((Tok::Plus, col));
                i += 1
            }
            '*' => {
                out.push((Tok::Star, col));
                i += 1
            }
            '@' => {
                out.push((Tok::At, col));
                i += 1
            }
            '=' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Implies, col));
                i += 2
            }
            '=' => {
                out.push((Tok::Eq, col));
                i += 1
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, col));
                i += 2
            }
            '-' => {
                out.push((Tok::Minus, col));
                i += 1
            }
            '\\' if chars.get(i + 1) == Some(&'/') => {
                return Err(err(col, "disjunction `\\/` is not allowed in regular logic".into()))
            }
            '|' => return Err(err(col, "disjunction `|` is not allowed in regular logic".into())),
            '~' | '!' | '¬' => return Err(err(col, format!("negation `{c}` is not allowed in regular logic"))),
            '∨' => return Err(err(col, "disjunction `∨` is not allowed in regular logic".into())),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let k = s.parse().map_err(|_| err(col, format!("integer `{s}` out of range")))?;
                out.push((Tok::Int(k), col));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            c => return Err(err(col, format!("unexpected character `{c}`"))),
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl Cursor {
    pub(crate) fn new(toks: Vec<(Tok, usize)>, line: usize) -> Self {
        Cursor { toks, pos: 0, line }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    pub(crate) fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    pub(crate) fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col(), message: message.into() }
    }

    pub(crate) fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {t}, found {}", self.peek())))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            t => Err(self.error(format!("expected a name, found {t}"))),
        }
    }
}

const KEYWORDS: [&str; 6] = ["forall", "exists", "T", "sort", "rel", "fun"];

/// Parsed variable list entry: name plus optional explicit sort.
type RawVar = (String, Option<String>, usize);

fn parse_vars(cur: &mut Cursor) -> Result<Vec<RawVar>, ParseError> {
    let mut out = Vec::new();
    loop {
        let col = cur.col();
        match cur.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                cur.next();
                out.push((s, None, col));
            }
            Tok::LParen => {
                cur.next();
                let name = cur.ident()?;
                cur.expect(Tok::Colon)?;
                let sort = cur.ident()?;
                cur.expect(Tok::RParen)?;
                out.push((name, Some(sort), col));
            }
            Tok::Colon if !out.is_empty() => return Ok(out),
            t => return Err(cur.error(format!("expected a variable, found {t}"))),
        }
    }
}

/// Pre-sort formula: binders keep their raw variable entries.
#[derive(Clone, Debug)]
enum RawFormula {
    True,
    Rel(String, Vec<Term>, usize),
    Eq(Term, Term, usize),
    And(Box<RawFormula>, Box<RawFormula>),
    Exists(Vec<RawVar>, Box<RawFormula>),
}

fn parse_formula(cur: &mut Cursor) -> Result<RawFormula, ParseError> {
    if matches!(cur.peek(), Tok::Ident(s) if s == "exists") {
        cur.next();
        let vars = parse_vars(cur)?;
        cur.expect(Tok::Colon)?;
        let body = parse_formula(cur)?;
        return Ok(RawFormula::Exists(vars, Box::new(body)));
    }
    let mut acc = parse_unit(cur)?;
    while *cur.peek() == Tok::Amp {
        cur.next();
        let rhs = parse_unit(cur)?;
        acc = RawFormula::And(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_terms(cur: &mut Cursor) -> Result<Vec<Term>, ParseError> {
    cur.expect(Tok::LParen)?;
    let mut args = Vec::new();
    if *cur.peek() != Tok::RParen {
        loop {
            args.push(parse_term(cur)?);
            if *cur.peek() == Tok::Comma {
                cur.next();
            } else {
                break;
            }
        }
    }
    cur.expect(Tok::RParen)?;
    Ok(args)
}

fn parse_term(cur: &mut Cursor) -> Result<Term, ParseError> {
    let name = cur.ident()?;
    if KEYWORDS.contains(&name.as_str()) {
        return Err(cur.error(format!("keyword `{name}` cannot be used as a term")));
    }
    if *cur.peek() == Tok::LParen {
        Ok(Term::App(name, parse_terms(cur)?))
    } else {
        Ok(Term::Var(name))
    }
}

fn parse_unit(cur: &mut Cursor) -> Result<RawFormula, ParseError> {
    let col = cur.col();
    match cur.peek().clone() {
        Tok::Ident(s) if s == "T" => {
            cur.next();
            Ok(RawFormula::True)
        }
        Tok::Ident(s) if s == "exists" => parse_formula(cur),
        Tok::Ident(s) if s == "forall" => Err(cur.error("`forall` is only allowed at the start of a sequent")),
        Tok::Ident(s) if s == "or" || s == "not" => Err(cur.error(format!("`{s}` is not allowed in regular logic"))),
        Tok::LParen => {
            cur.next();
            let f = parse_formula(cur)?;
            cur.expect(Tok::RParen)?;
            Ok(f)
        }
        Tok::Ident(name) => {
            let term = parse_term(cur)?;
            match cur.peek() {
                Tok::Eq => {
                    cur.next();
                    let rhs = parse_term(cur)?;
                    Ok(RawFormula::Eq(term, rhs, col))
                }
                Tok::Arrow => Err(cur.error("implication `->` is only allowed as the sequent arrow `=>`")),
                _ => match term {
                    Term::App(r, args) => Ok(RawFormula::Rel(r, args, col)),
                    Term::Var(_) => Ok(RawFormula::Rel(name, Vec::new(), col)),
                },
            }
        }
        t => Err(cur.error(format!("expected a formula, found {t}"))),
    }
}

/// Builds the signature on the fly when nothing was declared.
struct SortChecker<'a> {
    sig: &'a mut Signature,
    infer: bool,
    line: usize,
    // union-find over variable bindings; each node may carry a sort
    parent: Vec<usize>,
    sort: Vec<Option<usize>>,
}

impl SortChecker<'_> {
    fn err(&self, col: usize, message: String) -> ParseError {
        ParseError { line: self.line, col, message }
    }

    fn fresh(&mut self, sort: Option<usize>) -> usize {
        self.parent.push(self.parent.len());
        self.sort.push(sort);
        self.parent.len() - 1
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn unify(&mut self, a: usize, b: usize, col: usize) -> Result<(), ParseError> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(());
        }
        match (self.sort[ra], self.sort[rb]) {
            (Some(x), Some(y)) if x != y => {
                return Err(self.err(col, format!("sort mismatch: `{}` vs `{}`", self.sig.sorts[x], self.sig.sorts[y])))
            }
            (None, s) => self.sort[ra] = s,
            _ => {}
        }
        self.parent[rb] = ra;
        Ok(())
    }

    fn constrain(&mut self, node: usize, sort: usize, col: usize) -> Result<(), ParseError> {
        let s = self.fresh(Some(sort));
        self.unify(node, s, col)
    }

    fn term(&mut self, t: &Term, scope: &[(String, usize)], col: usize) -> Result<usize, ParseError> {
        match t {
            Term::Var(v) => scope
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|&(_, id)| id)
                .ok_or_else(|| self.err(col, format!("unbound variable `{v}`"))),
            Term::App(fname, args) => {
                let ids = args.iter().map(|a| self.term(a, scope, col)).collect::<Result<Vec<_>, _>>()?;
                let fi = match self.sig.function(fname) {
                    Some(i) => i,
                    None if self.infer && self.sig.relation(fname).is_none() => {
                        self.sig.functions.push(FunSymbol { name: fname.clone(), args: vec![0; args.len()], result: 0 });
                        self.sig.functions.len() - 1
                    }
                    None => return Err(self.err(col, format!("unknown function symbol `{fname}`"))),
                };
                let sym = self.sig.functions[fi].clone();
                if sym.args.len() != args.len() {
                    return Err(self.err(col, format!("`{fname}` expects {} arguments", sym.args.len())));
                }
                for (id, &s) in ids.iter().zip(&sym.args) {
                    self.constrain(*id, s, col)?;
                }
                Ok(self.fresh(Some(sym.result)))
            }
        }
    }

    fn formula(&mut self, f: &RawFormula, scope: &mut Vec<(String, usize)>, binders: &mut Vec<usize>) -> Result<(), ParseError> {
        match f {
            RawFormula::True => Ok(()),
            RawFormula::Rel(r, args, col) => {
                let ri = match self.sig.relation(r) {
                    Some(i) => i,
                    None if self.infer && self.sig.function(r).is_none() => {
                        self.sig.relations.push(RelSymbol { name: r.clone(), sorts: vec![0; args.len()] });
                        self.sig.relations.len() - 1
                    }
                    None => return Err(self.err(*col, format!("unknown relation symbol `{r}`"))),
                };
                let sorts = self.sig.relations[ri].sorts.clone();
                if sorts.len() != args.len() {
                    return Err(self.err(*col, format!("`{r}` expects {} arguments", sorts.len())));
                }
                for (a, s) in args.iter().zip(sorts) {
                    let id = self.term(a, scope, *col)?;
                    self.constrain(id, s, *col)?;
                }
                Ok(())
            }
            RawFormula::Eq(a, b, col) => {
                let (x, y) = (self.term(a, scope, *col)?, self.term(b, scope, *col)?);
                self.unify(x, y, *col)
            }
            RawFormula::And(a, b) => {
                self.formula(a, scope, binders)?;
                self.formula(b, scope, binders)
            }
            RawFormula::Exists(vars, body) => {
                let n = scope.len();
                self.bind(vars, scope, binders)?;
                self.formula(body, scope, binders)?;
                scope.truncate(n);
                Ok(())
            }
        }
    }

    fn bind(&mut self, vars: &[RawVar], scope: &mut Vec<(String, usize)>, binders: &mut Vec<usize>) -> Result<(), ParseError> {
        for (name, sort, col) in vars {
            if KEYWORDS.contains(&name.as_str()) {
                return Err(self.err(*col, format!("keyword `{name}` cannot be a variable")));
            }
            let s = match sort {
                Some(sn) => Some(self.sig.sort(sn).ok_or_else(|| self.err(*col, format!("unknown sort `{sn}`")))?),
                None => None,
            };
            let id = self.fresh(s);
            binders.push(id);
            scope.push((name.clone(), id));
        }
        Ok(())
    }

    fn resolve(&mut self, id: usize, col: usize) -> Result<usize, ParseError> {
        let r = self.find(id);
        match self.sort[r] {
            Some(s) => Ok(s),
            None if self.sig.sorts.len() == 1 => Ok(0),
            None => Err(self.err(col, "cannot infer the sort of a variable; annotate it as `(x:S)`".into())),
        }
    }

    fn build(&mut self, f: &RawFormula, binders: &mut std::slice::Iter<'_, usize>) -> Result<Formula, ParseError> {
        Ok(match f {
            RawFormula::True => Formula::True,
            RawFormula::Rel(r, args, _) => Formula::Rel(r.clone(), args.clone()),
            RawFormula::Eq(a, b, _) => Formula::Eq(a.clone(), b.clone()),
            RawFormula::And(a, b) => Formula::and(self.build(a, binders)?, self.build(b, binders)?),
            RawFormula::Exists(vars, body) => {
                let mut vs = Vec::new();
                for (name, _, col) in vars {
                    let id = *binders.next().expect("binder order matches");
                    vs.push(Var { name: name.clone(), sort: self.resolve(id, *col)? });
                }
                Formula::Exists(vs, Box::new(self.build(body, binders)?))
            }
        })
    }
}

fn free_raw(f: &RawFormula, bound: &mut Vec<String>, out: &mut Vec<(String, usize)>) {
    fn term(t: &Term, col: usize, bound: &[String], out: &mut Vec<(String, usize)>) {
        match t {
            Term::Var(v) => {
                if !bound.contains(v) && !out.iter().any(|(n, _)| n == v) {
                    out.push((v.clone(), col));
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| term(a, col, bound, out)),
        }
    }
    match f {
        RawFormula::True => {}
        RawFormula::Rel(_, args, col) => args.iter().for_each(|a| term(a, *col, bound, out)),
        RawFormula::Eq(a, b, col) => {
            term(a, *col, bound, out);
            term(b, *col, bound, out);
        }
        RawFormula::And(a, b) => {
            free_raw(a, bound, out);
            free_raw(b, bound, out);
        }
        RawFormula::Exists(vs, body) => {
            let n = bound.len();
            bound.extend(vs.iter().map(|v| v.0.clone()));
            free_raw(body, bound, out);
            bound.truncate(n);
        }
    }
}

fn parse_sequent_line(cur: &mut Cursor, sig: &mut Signature, infer: bool, line: usize) -> Result<Sequent, ParseError> {
    let mut vars: Vec<RawVar> = Vec::new();
    let explicit = matches!(cur.peek(), Tok::Ident(s) if s == "forall");
    if explicit {
        cur.next();
        vars = parse_vars(cur)?;
        cur.expect(Tok::Colon)?;
    }
    let lhs = parse_formula(cur)?;
    if *cur.peek() != Tok::Implies {
        return Err(cur.error(format!("expected `=>`, found {}", cur.peek())));
    }
    cur.next();
    let rhs = parse_formula(cur)?;
    if *cur.peek() != Tok::End {
        return Err(cur.error(format!("unexpected {} after the sequent", cur.peek())));
    }
    if !explicit {
        let mut free = Vec::new();
        free_raw(&lhs, &mut Vec::new(), &mut free);
        free_raw(&rhs, &mut Vec::new(), &mut free);
        vars = free.into_iter().map(|(n, col)| (n, None, col)).collect();
    }
    let mut ck = SortChecker { sig, infer, line, parent: Vec::new(), sort: Vec::new() };
    let mut scope = Vec::new();
    let mut top = Vec::new();
    ck.bind(&vars, &mut scope, &mut top)?;
    let mut lb = Vec::new();
    ck.formula(&lhs, &mut scope, &mut lb)?;
    let mut rb = Vec::new();
    ck.formula(&rhs, &mut scope, &mut rb)?;
    let mut out_vars = Vec::new();
    for ((name, _, col), id) in vars.iter().zip(&top) {
        out_vars.push(Var { name: name.clone(), sort: ck.resolve(*id, *col)? });
    }
    let lhs = ck.build(&lhs, &mut lb.iter())?;
    let rhs = ck.build(&rhs, &mut rb.iter())?;
    Ok(Sequent { vars: out_vars, lhs, rhs })
}

fn parse_decl(cur: &mut Cursor, sig: &mut Signature, kw: &str) -> Result<(), ParseError> {
    cur.next();
    let col = cur.col();
    let name = cur.ident()?;
    let taken = sig.sort(&name).is_some() || sig.relation(&name).is_some() || sig.function(&name).is_some();
    if taken || KEYWORDS.contains(&name.as_str()) {
        return Err(ParseError { line: cur.line, col, message: format!("name `{name}` is already in use") });
    }
    if kw == "sort" {
        sig.sorts.push(name);
    } else {
        cur.expect(Tok::LParen)?;
        let mut sorts = Vec::new();
        if *cur.peek() != Tok::RParen {
            loop {
                let col = cur.col();
                let s = cur.ident()?;
                sorts.push(sig.sort(&s).ok_or(ParseError { line: cur.line, col, message: format!("unknown sort `{s}`") })?);
                if *cur.peek() == Tok::Comma {
                    cur.next();
                } else {
                    break;
                }
            }
        }
        cur.expect(Tok::RParen)?;
        if kw == "rel" {
            sig.relations.push(RelSymbol { name, sorts });
        } else {
            cur.expect(Tok::Arrow)?;
            let col = cur.col();
            let s = cur.ident()?;
            let result = sig.sort(&s).ok_or(ParseError { line: cur.line, col, message: format!("unknown sort `{s}`") })?;
            sig.functions.push(FunSymbol { name, args: sorts, result });
        }
    }
    if *cur.peek() != Tok::End {
        return Err(cur.error(format!("unexpected {} after the declaration", cur.peek())));
    }
    Ok(())
}

/// Parses a theory, inferring a one-sorted signature if no sort is declared.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut sig = Signature::default();
    let mut lines = Vec::new();
    let mut infer = true;
    for (i, raw) in text.lines().enumerate() {
        let toks = lex_line(raw, i + 1)?;
        if toks.len() > 1 {
            lines.push((i + 1, toks));
        }
    }
    for (line, toks) in &lines {
        if matches!(&toks[0].0, Tok::Ident(s) if s == "sort") {
            infer = false;
            parse_decl(&mut Cursor::new(toks.clone(), *line), &mut sig, "sort")?;
        }
    }
    if infer {
        sig.sorts.push("U".into());
    }
    let mut sequents = Vec::new();
    for (line, toks) in lines {
        let mut cur = Cursor::new(toks, line);
        match cur.peek().clone() {
            Tok::Ident(s) if s == "sort" => {}
            Tok::Ident(s) if s == "rel" || s == "fun" => {
                if infer {
                    infer = false;
                    if sig.relations.len() + sig.functions.len() > 0 {
                        return Err(cur.error("declarations must precede sequents"));
                    }
                }
                parse_decl(&mut cur, &mut sig, &s)?;
            }
            _ => sequents.push(parse_sequent_line(&mut cur, &mut sig, infer, line)?),
        }
    }
    Ok(Theory { signature: sig, sequents })
}

/// Parses one formula against a signature; its free variables must be listed in `free`.
pub fn parse_formula_with(text: &str, sig: &Signature, free: &[Var]) -> Result<Formula, ParseError> {
    let toks = lex_line(text, 1)?;
    let mut cur = Cursor::new(toks, 1);
    let raw = parse_formula(&mut cur)?;
    if *cur.peek() != Tok::End {
        return Err(cur.error(format!("unexpected {}", cur.peek())));
    }
    let mut sig2 = sig.clone();
    let mut ck = SortChecker { sig: &mut sig2, infer: false, line: 1, parent: Vec::new(), sort: Vec::new() };
    let mut scope = Vec::new();
    for v in free {
        let id = ck.fresh(Some(v.sort));
        scope.push((v.name.clone(), id));
    }
    let mut binders = Vec::new();
    ck.formula(&raw, &mut scope, &mut binders)?;
    ck.build(&raw, &mut binders.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sequent() {
        let t = parse_theory("forall x: (exists y: E(x,y)) => T").unwrap();
        assert_eq!(t.sequents.len(), 1);
        assert_eq!(t.signature.relations[0].sorts.len(), 2);
        assert_eq!(t.sequents[0].rhs, Formula::True);
    }

    #[test]
    fn disjunction_is_rejected_with_position() {
        let e = parse_theory("p \\/ q").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
        assert!(e.message.contains("disjunction"));
        assert!(parse_theory("forall x: P(x) => ~Q(x)").is_err());
        let e = parse_theory("forall x: P(x) -> Q(x) => T").unwrap_err();
        assert!(e.message.contains("->"), "{e}");
    }

    #[test]
    fn declarations_and_functions() {
        let src = "sort V\nsort W\nrel R(V,W)\nfun f(V) -> W\nforall x: T => R(x, f(x))\n";
        let t = parse_theory(src).unwrap();
        assert_eq!(t.signature.sorts, vec!["V", "W"]);
        assert_eq!(t.sequents[0].vars[0].sort, 0);
        assert!(parse_theory("sort V\nsort W\nrel R(V,W)\nforall x: R(x,x) => T").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let src = "# a comment\nforall x y: E(x,y) & (exists z: E(y,z) & P(z)) => exists w: E(w,x) & x = y\nP(a) => T\n";
        let t = parse_theory(src).unwrap();
        let printed = t.to_string();
        assert_eq!(parse_theory(&printed).unwrap(), t, "{printed}");
    }
}

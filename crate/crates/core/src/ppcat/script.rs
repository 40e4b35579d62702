//! Batch scripts for the pp-pair category.
//!
//! ```text
//! ring z4
//! module M = R/(2) + R
//! obj X = pair(x = x, x = 0)
//! mor f : X -> X = graph(x' = 2*x)
//! ker f          # binds ker_f and ker_f_in
//! coker f        # binds coker_f and coker_f_out
//! cover X        # binds cover_X
//! mor h = compose(g, f)
//! ev M f
//! equal f g
//! serre X M N
//! ```
//!
//! In a graph the source variables keep their names and the target's get a trailing `'`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use super::category::{PpCatError, PpCategory, PpMorphism, PpObject};
use super::ev::{cokernel_exact, ev_morphism, ev_object, ev_summary, kernel_exact, serre_membership};
use crate::modpp::{small_modules, FiniteModule, FiniteRing, LinearPp};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

/// One executed statement. `ok` is false when a certification or query failed.
#[derive(Clone, Debug, Serialize)]
pub struct ScriptEvent {
    pub line: usize,
    pub statement: String,
    pub ok: bool,
    pub result: Value,
}

struct Obj {
    obj: PpObject,
    names: Vec<String>,
}

struct State {
    cat: Option<PpCategory>,
    modules: BTreeMap<String, FiniteModule>,
    objects: BTreeMap<String, Obj>,
    morphisms: BTreeMap<String, (PpMorphism, String, String)>,
    corpus: Vec<FiniteModule>,
}

/// Largest module used when certifying kernels, cokernels and covers.
pub const CERTIFY_MAX_SIZE: usize = 16;

/// Splits `a, b` at the first top-level comma.
fn split_pair(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.trim().strip_prefix(name)?.trim_start().strip_prefix('(')?.strip_suffix(')')
}

fn describe(cat: &PpCategory, o: &Obj) -> Value {
    json!({
        "upper": o.obj.upper().display(cat.ring(), &o.names).to_string(),
        "lower": o.obj.lower().display(cat.ring(), &o.names).to_string(),
        "arity": o.obj.arity(),
    })
}

impl State {
    fn cat(&self) -> Result<&PpCategory, String> {
        self.cat.as_ref().ok_or_else(|| "declare `ring` first".to_string())
    }

    fn object(&self, name: &str) -> Result<&Obj, String> {
        self.objects.get(name).ok_or_else(|| format!("unknown object `{name}`"))
    }

    fn morphism(&self, name: &str) -> Result<&(PpMorphism, String, String), String> {
        self.morphisms.get(name).ok_or_else(|| format!("unknown morphism `{name}`"))
    }

    fn module(&self, name: &str) -> Result<&FiniteModule, String> {
        self.modules.get(name).ok_or_else(|| format!("unknown module `{name}`"))
    }

    fn bind_object(&mut self, name: &str, obj: PpObject, names: Vec<String>) -> Value {
        let o = Obj { obj, names };
        let v = describe(self.cat.as_ref().expect("ring set"), &o);
        self.objects.insert(name.to_string(), o);
        v
    }

    fn certify(&self, check: impl Fn(&FiniteModule) -> Result<bool, PpCatError>) -> Result<(bool, usize), String> {
        let mut ok = true;
        for m in &self.corpus {
            ok &= check(m).map_err(|e| e.to_string())?;
        }
        Ok((ok, self.corpus.len()))
    }

    fn exec(&mut self, text: &str) -> Result<(bool, Value), String> {
        let (head, rest) = text.split_once(char::is_whitespace).map(|(a, b)| (a, b.trim())).unwrap_or((text, ""));
        match head {
            "ring" => {
                let ring = FiniteRing::by_name(rest).map_err(|e| e.to_string())?;
                self.corpus = small_modules(&ring, CERTIFY_MAX_SIZE);
                self.cat = Some(PpCategory::new(ring));
                Ok((true, json!({ "ring": rest, "corpus": self.corpus.len() })))
            }
            "module" => {
                let (name, spec) = rest.split_once('=').ok_or("expected `module NAME = SPEC`")?;
                let m = FiniteModule::parse_spec(self.cat()?.ring(), spec.trim()).map_err(|e| e.to_string())?;
                let size = m.size();
                self.modules.insert(name.trim().to_string(), m);
                Ok((true, json!({ "module": name.trim(), "size": size })))
            }
            "obj" => {
                let (name, body) = rest.split_once('=').ok_or("expected `obj NAME = pair(PHI, PSI)`")?;
                let name = name.trim();
                let cat = self.cat()?.clone();
                let args = call(body, "pair").ok_or("expected `pair(PHI, PSI)`")?;
                let (a, b) = split_pair(args).ok_or("`pair` takes two formulas")?;
                let (phi, names) = LinearPp::parse(cat.ring(), a, None).map_err(|e| e.to_string())?;
                let (psi, _) = LinearPp::parse(cat.ring(), b, Some(&names)).map_err(|e| e.to_string())?;
                let obj = cat.object(phi, psi).map_err(|e| e.to_string())?;
                let v = self.bind_object(name, obj, names);
                Ok((true, json!({ "object": name, "value": v })))
            }
            "mor" => self.exec_mor(rest),
            "ker" | "coker" => {
                let cat = self.cat()?.clone();
                let (f, src, tgt) = self.morphism(rest)?.clone();
                let kernel = head == "ker";
                let (obj, arrow) = if kernel { cat.kernel(&f) } else { cat.cokernel(&f) }.map_err(|e| e.to_string())?;
                let (ok, n) = self.certify(|m| if kernel { kernel_exact(m, &f, &arrow) } else { cokernel_exact(m, &f, &arrow) })?;
                let names = self.object(if kernel { &src } else { &tgt })?.names.clone();
                let oname = format!("{head}_{rest}");
                let aname = format!("{oname}_{}", if kernel { "in" } else { "out" });
                let v = self.bind_object(&oname, obj, names);
                let ends = if kernel { (oname.clone(), src) } else { (tgt, oname.clone()) };
                self.morphisms.insert(aname.clone(), (arrow, ends.0, ends.1));
                Ok((ok, json!({ "object": oname, "value": v, "morphism": aname, "certified_on": n })))
            }
            "cover" => {
                let cat = self.cat()?.clone();
                let x = self.object(rest)?;
                let names = x.names.clone();
                let c = cat.representable_cover(&x.obj).map_err(|e| e.to_string())?;
                let epi = cat.is_epi(&c).map_err(|e| e.to_string())?;
                let (surj, n) = self.certify(|m| ev_summary(m, &c).map(|e| e.well_defined && e.surjective))?;
                let sname = format!("rep_{rest}");
                let w = c.source().arity();
                let src_names: Vec<String> = (0..w).map(|i| names.get(i).cloned().unwrap_or_else(|| format!("w{i}"))).collect();
                let v = self.bind_object(&sname, c.source().clone(), src_names);
                let mname = format!("cover_{rest}");
                self.morphisms.insert(mname.clone(), (c, sname.clone(), rest.to_string()));
                Ok((epi && surj, json!({ "morphism": mname, "source": sname, "value": v, "epi": epi, "certified_on": n })))
            }
            "ev" => {
                let (m, what) = rest.split_once(char::is_whitespace).ok_or("expected `ev MODULE NAME`")?;
                let module = self.module(m)?.clone();
                let what = what.trim();
                if let Ok((f, _, _)) = self.morphism(what) {
                    let e = ev_morphism(&module, f).map_err(|e| e.to_string())?;
                    Ok((
                        e.well_defined,
                        json!({
                            "source_order": e.source.order(), "target_order": e.target.order(),
                            "kernel_order": e.kernel().len(), "image_order": e.image().len(), "table": e.table,
                        }),
                    ))
                } else {
                    let x = self.object(what)?;
                    let g = ev_object(&module, &x.obj).map_err(|e| e.to_string())?;
                    Ok((true, json!({ "order": g.order() })))
                }
            }
            "equal" => {
                let (a, b) = rest.split_once(char::is_whitespace).ok_or("expected `equal F G`")?;
                let eq = self.cat()?.mor_equal(&self.morphism(a)?.0, &self.morphism(b.trim())?.0).map_err(|e| e.to_string())?;
                Ok((eq, json!({ "equal": eq })))
            }
            "zero" => {
                let z = self.cat()?.is_zero(&self.object(rest)?.obj).map_err(|e| e.to_string())?;
                Ok((z, json!({ "zero": z })))
            }
            "serre" => {
                let mut words = rest.split_whitespace();
                let x = words.next().ok_or("expected `serre OBJ MODULE...`")?;
                let gens = words.map(|w| self.module(w).cloned()).collect::<Result<Vec<_>, _>>()?;
                let member = serre_membership(&gens, &self.object(x)?.obj).map_err(|e| e.to_string())?;
                Ok((member, json!({ "member": member })))
            }
            other => Err(format!("unknown statement `{other}`")),
        }
    }

    fn exec_mor(&mut self, rest: &str) -> Result<(bool, Value), String> {
        let (lhs, body) = rest.split_once('=').ok_or("expected `mor NAME : X -> Y = graph(RHO)`")?;
        let cat = self.cat()?.clone();
        if let Some(args) = call(body, "compose") {
            let name = lhs.trim();
            let (g, f) = split_pair(args).ok_or("`compose` takes two morphisms")?;
            let (g, _, gt) = self.morphism(g.trim())?.clone();
            let (f, fs, _) = self.morphism(f.trim())?.clone();
            let h = cat.compose(&g, &f).map_err(|e| e.to_string())?;
            self.morphisms.insert(name.to_string(), (h, fs, gt));
            return Ok((true, json!({ "morphism": name })));
        }
        let (name, ends) = lhs.split_once(':').ok_or("expected `NAME : X -> Y`")?;
        let (x, y) = ends.split_once("->").ok_or("expected `X -> Y`")?;
        let (name, x, y) = (name.trim(), x.trim(), y.trim());
        let args = call(body, "graph").ok_or("expected `graph(RHO)`")?;
        let (sx, sy) = (self.object(x)?, self.object(y)?);
        let mut vars = sx.names.clone();
        vars.extend(sy.names.iter().map(|n| format!("{n}'")));
        let (rho, _) = LinearPp::parse(cat.ring(), args, Some(&vars)).map_err(|e| e.to_string())?;
        let f = cat.morphism(&sx.obj, &sy.obj, &rho).map_err(|e| e.to_string())?;
        self.morphisms.insert(name.to_string(), (f, x.to_string(), y.to_string()));
        Ok((true, json!({ "morphism": name })))
    }
}

/// Runs a script. Statement failures (bad input) stop the run with an error; query results
/// that come out negative are reported with `ok = false`.
pub fn run_script(text: &str) -> Result<Vec<ScriptEvent>, ScriptError> {
    let mut state = State { cat: None, modules: BTreeMap::new(), objects: BTreeMap::new(), morphisms: BTreeMap::new(), corpus: Vec::new() };
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (ok, result) = state.exec(line).map_err(|message| ScriptError { line: i + 1, message })?;
        out.push(ScriptEvent { line: i + 1, statement: line.to_string(), ok, result });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_script() {
        let script = "ring z4\nmodule M = R\nmodule N = R/(2)\nobj X = pair(x = x, x = 0)\nmor f : X -> X = graph(x' = 2*x)\n\
                      ker f\ncoker f\nev M ker_f\nev N f\nobj D = pair(E y: x = 2*y, 2*x = 0)\nserre D M\nserre D N\ncover coker_f\n";
        let ev = run_script(script).unwrap();
        let by_line = |l: usize| ev.iter().find(|e| e.line == l).unwrap();
        assert!(by_line(6).ok && by_line(7).ok);
        assert_eq!(by_line(8).result["order"], 2);
        assert!(by_line(11).ok);
        assert!(!by_line(12).ok);
        assert!(by_line(13).ok);
    }

    #[test]
    fn errors_carry_lines() {
        let e = run_script("ring z4\nobj X = pair(x = x)\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(run_script("obj X = pair(x = x, x = 0)").is_err());
        let e = run_script("ring z4\nobj X = pair(x = x, x = 0)\nmor f : X -> X = graph(2*x' = x)").unwrap_err();
        assert!(e.message.contains("totality"), "{}", e.message);
    }
}

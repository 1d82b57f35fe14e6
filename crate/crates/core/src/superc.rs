//! λ-lifting into supercombinator programs and their reduction.
//!
//! A program is a list of definitions `$N x1 .. xn = E` with λ-free
//! bodies, followed by a λ-free main expression. Definition names start
//! with `$` so they never clash with source identifiers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::eval::delta_step;
use crate::outcome::{run_steps, trace_line, EvalError, Outcome};
use crate::syntax::{all_vars, fresh_var, parse, subst, ConstVal, ParseError, Term, VarSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScDef {
    /// Includes the leading `$`.
    pub name: String,
    pub params: Vec<String>,
    pub body: Term,
}

impl ScDef {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// The definition as an abstraction `\params. body`.
    pub fn as_lambda(&self) -> Term {
        Term::lams(self.params.iter().cloned(), self.body.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScProgram {
    pub defs: Vec<ScDef>,
    pub main: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Supercombinator,
    /// Closed, but some inner abstraction has free variables.
    CombinatorOnly,
    /// Has free variables.
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("cannot lift an open term: free variable '{0}'")]
    FreeVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("invalid program: {0}")]
    Invalid(String),
}

pub fn is_global(name: &str) -> bool {
    name.starts_with('$')
}

/// Free variables other than definition names, in order of first occurrence.
fn free_locals_in_order(t: &Term) -> Vec<String> {
    fn go(t: &Term, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match t {
            Term::Var(x) => {
                if !is_global(x) && !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(a, b) | Term::Pair(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Term::Lam(x, body) => {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn strip_binders(t: &Term) -> (Vec<&str>, &Term) {
    let mut binders = Vec::new();
    let mut cur = t;
    while let Term::Lam(x, body) = cur {
        binders.push(x.as_str());
        cur = body;
    }
    (binders, cur)
}

fn is_supercombinator(t: &Term) -> bool {
    fn inner_ok(e: &Term) -> bool {
        match e {
            Term::Lam(..) => is_supercombinator(e),
            Term::Var(_) | Term::Const(_) => true,
            Term::App(a, b) | Term::Pair(a, b) => inner_ok(a) && inner_ok(b),
        }
    }
    let (_, body) = strip_binders(t);
    free_locals_in_order(t).is_empty() && inner_ok(body)
}

/// Definition names (`$N`) count as constants, not free variables.
pub fn classify(t: &Term) -> Classification {
    if !free_locals_in_order(t).is_empty() {
        Classification::Neither
    } else if is_supercombinator(t) {
        Classification::Supercombinator
    } else {
        Classification::CombinatorOnly
    }
}

/// Letters handed out to source binders: X, Y, Z, X1, Y1, Z1, X2, ...
struct Names {
    next: usize,
    taken: BTreeSet<String>,
}

impl Names {
    fn letter(k: usize) -> String {
        let base = ["X", "Y", "Z"][k % 3];
        match k / 3 {
            0 => base.to_string(),
            round => format!("{base}{round}"),
        }
    }

    /// One letter per binder, concatenated: a two-binder abstraction
    /// extracted first becomes `$XY`.
    fn fresh(&mut self, binders: usize) -> String {
        loop {
            let mut name = String::from("$");
            for _ in 0..binders.max(1) {
                name.push_str(&Self::letter(self.next));
                self.next += 1;
            }
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

struct Lifter {
    names: Names,
    defs: Vec<ScDef>,
}

impl Lifter {
    /// Post-order walk: every abstraction is lifted after the ones inside
    /// it, and left ones before right ones.
    fn lift(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(_) | Term::Const(_) => t.clone(),
            Term::App(a, b) => {
                let a = self.lift(a);
                Term::app(a, self.lift(b))
            }
            Term::Pair(a, b) => {
                let a = self.lift(a);
                Term::pair(a, self.lift(b))
            }
            Term::Lam(..) => {
                let (binders, body) = strip_binders(t);
                let body = self.lift(body);
                let mut binders: Vec<String> = binders.into_iter().map(String::from).collect();
                let chain = Term::lams(binders.iter().cloned(), body.clone());
                let extras = free_locals_in_order(&chain);

                // only the last of several equal binders is visible in the body
                let mut avoid: VarSet = all_vars(&chain);
                for i in 0..binders.len() {
                    if binders[i + 1..].contains(&binders[i]) {
                        let fresh = fresh_var(&avoid, &binders[i]);
                        avoid.insert(fresh.clone());
                        binders[i] = fresh;
                    }
                }

                let name = self.names.fresh(binders.len());
                let mut params = extras.clone();
                params.extend(binders);
                self.defs.push(ScDef { name: name.clone(), params, body });
                Term::apps(Term::Var(name), extras.into_iter().map(Term::Var))
            }
        }
    }
}

/// Lifts every abstraction of a closed term into a supercombinator
/// definition. Free variables of an abstraction become leading extra
/// parameters; consecutive binders share one definition. `$N` names in
/// the input count as existing definitions and are never reused.
pub fn lift(t: &Term) -> Result<ScProgram, LiftError> {
    let (globals, locals): (BTreeSet<String>, BTreeSet<String>) =
        crate::syntax::free_vars(t).into_iter().partition(|x| is_global(x));
    if let Some(x) = locals.into_iter().next() {
        return Err(LiftError::FreeVariable(x));
    }
    let mut lifter = Lifter { names: Names { next: 0, taken: globals }, defs: Vec::new() };
    let main = lifter.lift(t);
    Ok(ScProgram { defs: lifter.defs, main })
}

impl ScProgram {
    pub fn def(&self, name: &str) -> Option<&ScDef> {
        self.defs.iter().find(|d| d.name == name)
    }

    /// Checks unique names, λ-free bodies, closed bodies and that every
    /// referenced definition exists.
    pub fn validate(&self) -> Result<(), ProgramError> {
        let mut names = BTreeSet::new();
        for d in &self.defs {
            if !is_global(&d.name) {
                return Err(ProgramError::Invalid(format!("definition name '{}' must start with '$'", d.name)));
            }
            if !names.insert(d.name.as_str()) {
                return Err(ProgramError::Invalid(format!("duplicate definition '{}'", d.name)));
            }
        }
        let check = |what: &str, t: &Term, params: &[String]| -> Result<(), ProgramError> {
            if t.contains_lam() {
                return Err(ProgramError::Invalid(format!("{what} contains an abstraction")));
            }
            for x in crate::syntax::free_vars(t) {
                if is_global(&x) {
                    if !names.contains(x.as_str()) {
                        return Err(ProgramError::Invalid(format!("{what} refers to undefined '{x}'")));
                    }
                } else if !params.contains(&x) {
                    return Err(ProgramError::Invalid(format!("{what} has free variable '{x}'")));
                }
            }
            Ok(())
        };
        for d in &self.defs {
            check(&format!("body of {}", d.name), &d.body, &d.params)?;
        }
        check("main expression", &self.main, &[])
    }
}

impl fmt::Display for ScProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_program(self))
    }
}

/// Definitions one per line, a `----` rule, then the main expression.
pub fn print_program(p: &ScProgram) -> String {
    let mut out = String::new();
    for d in &p.defs {
        out.push_str(&d.name);
        for x in &d.params {
            out.push(' ');
            out.push_str(x);
        }
        out.push_str(" = ");
        out.push_str(&crate::syntax::print(&d.body));
        out.push('\n');
    }
    out.push_str("----\n");
    out.push_str(&crate::syntax::print(&p.main));
    out
}

fn is_rule_line(line: &str) -> bool {
    let t = line.trim();
    t.len() >= 4 && t.chars().all(|c| c == '-')
}

fn shift_error(e: ParseError, line: usize, col: usize) -> ParseError {
    if e.line == 1 {
        ParseError { line, col: e.col + col - 1, message: e.message }
    } else {
        ParseError { line: e.line + line - 1, ..e }
    }
}

/// Reads the format written by [`print_program`]. Blank lines and `--`
/// comments are allowed in the definition block.
pub fn parse_program(text: &str) -> Result<ScProgram, ProgramError> {
    let lines: Vec<&str> = text.lines().collect();
    let rule = lines
        .iter()
        .position(|l| is_rule_line(l))
        .ok_or_else(|| ProgramError::Malformed { line: lines.len().max(1), message: "missing '----' separator".into() })?;

    let mut defs = Vec::new();
    for (i, line) in lines[..rule].iter().enumerate() {
        let line_no = i + 1;
        let content = line.split("--").next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let eq = content
            .find('=')
            .ok_or_else(|| ProgramError::Malformed { line: line_no, message: "expected '$NAME params = body'".into() })?;
        let mut lhs = content[..eq].split_whitespace();
        let name = lhs.next().unwrap_or_default();
        if !is_global(name) || name.len() < 2 || !name[1..].chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ProgramError::Malformed { line: line_no, message: format!("bad definition name '{name}'") });
        }
        let mut params = Vec::new();
        for p in lhs {
            match parse(p) {
                Ok(Term::Var(x)) if !is_global(&x) => params.push(x),
                _ => return Err(ProgramError::Malformed { line: line_no, message: format!("bad parameter '{p}'") }),
            }
        }
        let body_col = line[..eq].chars().count() + 2;
        let body = parse(&line[eq + 1..]).map_err(|e| shift_error(e, line_no, body_col))?;
        defs.push(ScDef { name: name.to_string(), params, body });
    }

    let main_text = lines[rule + 1..].join("\n");
    let main = parse(&main_text).map_err(|e| shift_error(e, rule + 2, 1))?;
    let program = ScProgram { defs, main };
    program.validate()?;
    Ok(program)
}

fn instantiate(def: &ScDef, args: &[&Term]) -> Term {
    // bodies are λ-free, so plain replacement cannot capture; the
    // simultaneous map keeps parameters from interfering with each other
    let map: BTreeMap<&str, &Term> = def.params.iter().map(String::as_str).zip(args.iter().copied()).collect();
    fn go(t: &Term, map: &BTreeMap<&str, &Term>) -> Term {
        match t {
            Term::Var(x) => map.get(x.as_str()).map(|a| (*a).clone()).unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::App(a, b) => Term::app(go(a, map), go(b, map)),
            Term::Pair(a, b) => Term::pair(go(a, map), go(b, map)),
            Term::Lam(x, b) => {
                // not produced by lift; fall back to capture-avoiding substitution
                let mut inner = map.clone();
                inner.remove(x.as_str());
                let mut out = Term::lam(x.clone(), b.as_ref().clone());
                for (k, v) in inner {
                    out = subst(v, k, &out);
                }
                out
            }
        }
    }
    go(&def.body, &map)
}

struct Machine<'p> {
    defs: BTreeMap<&'p str, &'p ScDef>,
}

impl Machine<'_> {
    fn unsaturated(&self, t: &Term) -> bool {
        let (head, args) = t.spine();
        matches!(head, Term::Var(n) if self.defs.get(n.as_str()).is_some_and(|d| args.len() < d.arity()))
    }

    fn contract_root(&self, t: &Term) -> Result<Option<Term>, EvalError> {
        let (head, args) = t.spine();
        if let Term::Var(n) = head {
            if let Some(d) = self.defs.get(n.as_str()) {
                if args.len() == d.arity() {
                    return Ok(Some(instantiate(d, &args)));
                }
            }
        }
        if let Term::App(f, a) = t {
            match (&**f, &**a) {
                (Term::Pair(l, r), _) => return Ok(Some(Term::apps((**a).clone(), [(**l).clone(), (**r).clone()]))),
                (Term::Const(ConstVal::AddPair), x) if self.unsaturated(x) => {
                    return Ok(Some(Term::app(x.clone(), Term::Const(ConstVal::Add))));
                }
                _ => {}
            }
        }
        delta_step(t)
    }

    fn step(&self, t: &Term) -> Result<Option<Term>, EvalError> {
        if let Some(r) = self.contract_root(t)? {
            return Ok(Some(r));
        }
        Ok(match t {
            Term::App(f, a) => match self.step(f)? {
                Some(f2) => Some(Term::app(f2, (**a).clone())),
                None => self.step(a)?.map(|a2| Term::app((**f).clone(), a2)),
            },
            Term::Pair(l, r) => match self.step(l)? {
                Some(l2) => Some(Term::pair(l2, (**r).clone())),
                None => self.step(r)?.map(|r2| Term::pair((**l).clone(), r2)),
            },
            Term::Lam(x, b) => self.step(b)?.map(|b2| Term::lam(x.clone(), b2)),
            Term::Var(_) | Term::Const(_) => None,
        })
    }
}

/// Normal-order reduction of the main expression. A definition applied to
/// as many arguments as it has parameters unfolds in one step.
pub fn sc_reduce(p: &ScProgram, max_steps: usize) -> Result<Outcome<Term>, EvalError> {
    sc_reduce_observed(p, max_steps, |_, _| {})
}

pub fn sc_reduce_observed<O>(p: &ScProgram, max_steps: usize, observe: O) -> Result<Outcome<Term>, EvalError>
where
    O: FnMut(usize, &Term),
{
    let machine = Machine { defs: p.defs.iter().map(|d| (d.name.as_str(), d)).collect() };
    run_steps(p.main.clone(), max_steps.max(1), |t| machine.step(t), observe)
}

pub fn sc_reduce_traced(p: &ScProgram, max_steps: usize) -> Result<(Outcome<Term>, Vec<String>), EvalError> {
    let mut lines = Vec::new();
    let out = sc_reduce_observed(p, max_steps, |n, t| lines.push(trace_line(n, &crate::syntax::print(t))))?;
    Ok((out, lines))
}

//! Simple types: Curry-style inference by unification and Church-style
//! checking of fully annotated terms.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::syntax::{desugar_pairs, print, ConstVal, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Base(String),
    TVar(u32),
    Arrow(Box<Type>, Box<Type>),
}

/// Maps type variables to types. Kept idempotent: no range type mentions
/// a variable of the domain.
pub type TypeSubst = BTreeMap<u32, Type>;

pub type TypeEnv = BTreeMap<String, Type>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch: cannot unify {0} with {1}")]
    Mismatch(Type, Type),
    #[error("occurs check: {0} occurs in {1}")]
    OccursCheck(Type, Type),
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("in '{at}': cannot apply a term of type {fun} to an argument of type {arg}")]
    RuleFViolation { fun: Type, arg: Type, at: String },
    #[error("no type given for '{0}'")]
    Unannotated(String),
}

pub const NAT: &str = "N";

impl Type {
    pub fn nat() -> Type {
        Type::Base(NAT.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Right-nested arrow `a1 -> a2 -> ... -> r`.
    pub fn arrows(doms: impl IntoIterator<Item = Type>, cod: Type) -> Type {
        let doms: Vec<Type> = doms.into_iter().collect();
        doms.into_iter().rev().fold(cod, |acc, d| Type::arrow(d, acc))
    }

    pub fn contains_var(&self, v: u32) -> bool {
        match self {
            Type::TVar(w) => *w == v,
            Type::Base(_) => false,
            Type::Arrow(a, b) => a.contains_var(v) || b.contains_var(v),
        }
    }

    /// Variable ids in order of first occurrence, left to right.
    pub fn vars(&self) -> Vec<u32> {
        fn go(t: &Type, out: &mut Vec<u32>) {
            match t {
                Type::TVar(v) => {
                    if !out.contains(v) {
                        out.push(*v)
                    }
                }
                Type::Base(_) => {}
                Type::Arrow(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        self.vars().is_empty()
    }

    pub fn apply(&self, s: &TypeSubst) -> Type {
        match self {
            Type::TVar(v) => match s.get(v) {
                Some(t) => t.apply(s),
                None => self.clone(),
            },
            Type::Base(_) => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.apply(s), b.apply(s)),
        }
    }

    fn rename(&self, map: &BTreeMap<u32, u32>) -> Type {
        match self {
            Type::TVar(v) => Type::TVar(map[v]),
            Type::Base(_) => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.rename(map), b.rename(map)),
        }
    }
}

fn var_name(v: u32) -> String {
    let letter = char::from(b'a' + (v % 26) as u8);
    match v / 26 {
        0 => letter.to_string(),
        n => format!("{letter}{n}"),
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(name) => f.write_str(name),
            Type::TVar(v) => f.write_str(&var_name(*v)),
            Type::Arrow(a, b) => {
                if matches!(**a, Type::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

/// Renames variables to 0, 1, 2, ... (printed a, b, c) jointly across
/// `ts`, keeping the relative order of the original ids. Inference
/// allocates ids as it walks the term, so this order follows the term.
pub fn canonicalize_all(ts: &[Type]) -> Vec<Type> {
    let mut ids: Vec<u32> = ts.iter().flat_map(Type::vars).collect();
    ids.sort_unstable();
    ids.dedup();
    let map: BTreeMap<u32, u32> = ids.into_iter().zip(0..).collect();
    ts.iter().map(|t| t.rename(&map)).collect()
}

pub fn canonicalize(t: &Type) -> Type {
    canonicalize_all(std::slice::from_ref(t)).remove(0)
}

/// Finds σ with σ(general) = specific, extending `sigma`.
fn matches_into(general: &Type, specific: &Type, sigma: &mut BTreeMap<u32, Type>) -> bool {
    match (general, specific) {
        (Type::TVar(v), _) => match sigma.get(v) {
            Some(bound) => bound == specific,
            None => {
                sigma.insert(*v, specific.clone());
                true
            }
        },
        (Type::Base(a), Type::Base(b)) => a == b,
        (Type::Arrow(a, b), Type::Arrow(c, d)) => matches_into(a, c, sigma) && matches_into(b, d, sigma),
        _ => false,
    }
}

/// True when `specific` is a substitution instance of `general`.
pub fn is_instance(specific: &Type, general: &Type) -> bool {
    matches_into(general, specific, &mut BTreeMap::new())
}

/// Equal up to a bijective renaming of type variables.
pub fn equivalent(a: &Type, b: &Type) -> bool {
    is_instance(a, b) && is_instance(b, a)
}

/// Most general unifier of `c1` and `c2` extending `s`.
pub fn unify(c1: &Type, c2: &Type, s: &TypeSubst) -> Result<TypeSubst, TypeError> {
    let mut s = s.clone();
    unify_in(c1, c2, &mut s)?;
    Ok(s)
}

fn bind(v: u32, t: Type, s: &mut TypeSubst) -> Result<(), TypeError> {
    if t == Type::TVar(v) {
        return Ok(());
    }
    if t.contains_var(v) {
        return Err(TypeError::OccursCheck(Type::TVar(v), t));
    }
    let single = TypeSubst::from([(v, t.clone())]);
    for range in s.values_mut() {
        *range = range.apply(&single);
    }
    s.insert(v, t);
    Ok(())
}

fn unify_in(c1: &Type, c2: &Type, s: &mut TypeSubst) -> Result<(), TypeError> {
    let (a, b) = (c1.apply(s), c2.apply(s));
    match (&a, &b) {
        _ if a == b => Ok(()),
        (Type::TVar(v), _) => bind(*v, b.clone(), s),
        (_, Type::TVar(v)) => bind(*v, a.clone(), s),
        (Type::Arrow(d1, r1), Type::Arrow(d2, r2)) => {
            unify_in(d1, d2, s)?;
            unify_in(r1, r2, s)
        }
        _ => Err(TypeError::Mismatch(a, b)),
    }
}

fn curried_arith() -> Type {
    Type::arrows([Type::nat(), Type::nat()], Type::nat())
}

/// `+` consumes a pair `\r. r m n`, so it takes something of type
/// `(N -> N -> N) -> N`.
fn pair_add() -> Type {
    Type::arrow(Type::arrow(curried_arith(), Type::nat()), Type::nat())
}

struct Infer {
    subst: TypeSubst,
    next: u32,
    bindings: Vec<(String, Type)>,
}

impl Infer {
    fn fresh(&mut self) -> Type {
        let v = self.next;
        self.next += 1;
        Type::TVar(v)
    }

    fn constant(&mut self, c: &ConstVal) -> Type {
        match c {
            ConstVal::Int(_) => Type::nat(),
            ConstVal::Add | ConstVal::Sub => curried_arith(),
            ConstVal::AddPair => pair_add(),
            ConstVal::Fix => {
                let a = self.fresh();
                Type::arrow(Type::arrow(a.clone(), a.clone()), a)
            }
            ConstVal::Opaque(_) => self.fresh(),
        }
    }

    fn go(&mut self, t: &Term, env: &mut Vec<(String, Type)>, globals: &TypeEnv) -> Result<Type, TypeError> {
        match t {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, ty)| ty.clone())
                .or_else(|| globals.get(x).cloned())
                .ok_or_else(|| TypeError::UnboundVariable(x.clone())),
            Term::Const(c) => Ok(self.constant(c)),
            Term::App(f, a) => {
                // function first, then argument, then the result variable;
                // canonical naming depends on this allocation order
                let tf = self.go(f, env, globals)?;
                let ta = self.go(a, env, globals)?;
                let r = self.fresh();
                unify_in(&tf, &Type::arrow(ta, r.clone()), &mut self.subst)?;
                Ok(r)
            }
            Term::Lam(x, body) => {
                let a = self.fresh();
                self.bindings.push((x.clone(), a.clone()));
                env.push((x.clone(), a.clone()));
                let tb = self.go(body, env, globals);
                env.pop();
                Ok(Type::arrow(a, tb?))
            }
            Term::Pair(..) => unreachable!("pairs are desugared before inference"),
        }
    }
}

fn run_infer(t: &Term, env: &TypeEnv) -> Result<(Type, Infer), TypeError> {
    let next = env.values().flat_map(Type::vars).max().map_or(0, |m| m + 1);
    let mut inf = Infer { subst: TypeSubst::new(), next, bindings: Vec::new() };
    let ty = inf.go(&desugar_pairs(t), &mut Vec::new(), env).map_err(|e| match e {
        TypeError::Mismatch(a, b) => {
            let c = canonicalize_all(&[a, b]);
            TypeError::Mismatch(c[0].clone(), c[1].clone())
        }
        TypeError::OccursCheck(a, b) => {
            let c = canonicalize_all(&[a, b]);
            TypeError::OccursCheck(c[0].clone(), c[1].clone())
        }
        other => other,
    })?;
    Ok((ty.apply(&inf.subst), inf))
}

/// Principal type of `t` under `env`, with variables renamed a, b, c, ...
pub fn infer(t: &Term, env: &TypeEnv) -> Result<Type, TypeError> {
    run_infer(t, env).map(|(ty, _)| canonicalize(&ty))
}

/// Principal type together with the type of every binder in the
/// pair-desugared term, in binder order. The types are not canonicalized.
pub fn infer_with_bindings(t: &Term, env: &TypeEnv) -> Result<(Type, Vec<(String, Type)>), TypeError> {
    let (ty, inf) = run_infer(t, env)?;
    let bindings = inf.bindings.into_iter().map(|(x, b)| (x, b.apply(&inf.subst))).collect();
    Ok((ty, bindings))
}

/// Types a term whose variables all carry a fixed type, bottom-up, with
/// no unification. `fix` and opaque constants have no fixed type and are
/// rejected. Pairs are desugared first.
pub fn check_typed_term(t: &Term, annotations: &TypeEnv) -> Result<Type, TypeError> {
    fn go(t: &Term, ann: &TypeEnv) -> Result<Type, TypeError> {
        match t {
            Term::Var(x) => ann.get(x).cloned().ok_or_else(|| TypeError::Unannotated(x.clone())),
            Term::Const(c) => match c {
                ConstVal::Int(_) => Ok(Type::nat()),
                ConstVal::Add | ConstVal::Sub => Ok(curried_arith()),
                ConstVal::AddPair => Ok(pair_add()),
                ConstVal::Fix | ConstVal::Opaque(_) => Err(TypeError::Unannotated(c.to_string())),
            },
            Term::App(f, a) => {
                let (tf, ta) = (go(f, ann)?, go(a, ann)?);
                match &tf {
                    Type::Arrow(dom, cod) if **dom == ta => Ok((**cod).clone()),
                    _ => Err(TypeError::RuleFViolation { fun: tf, arg: ta, at: print(t) }),
                }
            }
            Term::Lam(x, body) => {
                let tx = ann.get(x).cloned().ok_or_else(|| TypeError::Unannotated(x.clone()))?;
                Ok(Type::arrow(tx, go(body, ann)?))
            }
            Term::Pair(..) => unreachable!("pairs are desugared before checking"),
        }
    }
    go(&desugar_pairs(t), annotations)
}

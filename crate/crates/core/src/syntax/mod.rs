//! Object language: named terms, constants, substitution and α-equivalence.

mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;

pub use parser::{parse, ParseError};
pub use printer::{print, print_resugared};

/// Identifier set with lexicographic iteration order.
pub type VarSet = BTreeSet<String>;

/// Primitive constants of the object language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstVal {
    Int(i64),
    /// `+`: addition taking a pair.
    AddPair,
    /// `add`: curried addition.
    Add,
    /// `sub`: curried subtraction, `sub a b = a - b`.
    Sub,
    /// `fix`: fixpoint, `fix f -> f (fix f)`.
    Fix,
    /// Inert constant with no δ-rule, written `@name`.
    Opaque(String),
}

impl ConstVal {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            ConstVal::Int(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for ConstVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstVal::Int(n) => write!(f, "{n}"),
            ConstVal::AddPair => f.write_str("+"),
            ConstVal::Add => f.write_str("add"),
            ConstVal::Sub => f.write_str("sub"),
            ConstVal::Fix => f.write_str("fix"),
            ConstVal::Opaque(name) => write!(f, "@{name}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(ConstVal),
    App(Box<Term>, Box<Term>),
    Lam(String, Box<Term>),
    /// Pair literal `[l, r]`, definitionally `\s. s l r` for fresh `s`.
    Pair(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn int(n: i64) -> Term {
        Term::Const(ConstVal::Int(n))
    }

    pub fn constant(c: ConstVal) -> Term {
        Term::Const(c)
    }

    pub fn opaque(name: impl Into<String>) -> Term {
        Term::Const(ConstVal::Opaque(name.into()))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application `head a1 a2 ... an`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn lam(binder: impl Into<String>, body: Term) -> Term {
        Term::Lam(binder.into(), Box::new(body))
    }

    /// Nested abstraction `\x1 ... xn. body`.
    pub fn lams<S: Into<String>>(binders: impl IntoIterator<Item = S>, body: Term) -> Term {
        let binders: Vec<String> = binders.into_iter().map(Into::into).collect();
        binders
            .into_iter()
            .rev()
            .fold(body, |acc, x| Term::lam(x, acc))
    }

    pub fn pair(left: Term, right: Term) -> Term {
        Term::Pair(Box::new(left), Box::new(right))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Const(c) => c.as_int(),
            _ => None,
        }
    }

    /// Splits `h a1 ... an` into `h` and `[a1, ..., an]`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(a, b) | Term::Pair(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn contains_lam(&self) -> bool {
        match self {
            Term::Lam(..) => true,
            Term::Var(_) | Term::Const(_) => false,
            Term::App(a, b) | Term::Pair(a, b) => a.contains_lam() || b.contains_lam(),
        }
    }

    pub fn contains_pair(&self) -> bool {
        match self {
            Term::Pair(..) => true,
            Term::Var(_) | Term::Const(_) => false,
            Term::Lam(_, b) => b.contains_pair(),
            Term::App(a, b) => a.contains_pair() || b.contains_pair(),
        }
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// Variables with at least one free occurrence.
pub fn free_vars(t: &Term) -> VarSet {
    let mut out = VarSet::new();
    let mut bound = Vec::new();
    collect_free(t, &mut bound, &mut out);
    out
}

fn collect_free<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut VarSet) {
    match t {
        Term::Var(x) => {
            if !bound.contains(&x.as_str()) {
                out.insert(x.clone());
            }
        }
        Term::Const(_) => {}
        Term::App(a, b) | Term::Pair(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::Lam(x, body) => {
            bound.push(x);
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

pub fn occurs_free(x: &str, t: &Term) -> bool {
    match t {
        Term::Var(y) => x == y,
        Term::Const(_) => false,
        Term::App(a, b) | Term::Pair(a, b) => occurs_free(x, a) || occurs_free(x, b),
        Term::Lam(y, body) => x != y && occurs_free(x, body),
    }
}

/// Every identifier in the term, free or bound, binders included.
pub fn all_vars(t: &Term) -> VarSet {
    fn go(t: &Term, out: &mut VarSet) {
        match t {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(a, b) | Term::Pair(a, b) => {
                go(a, out);
                go(b, out);
            }
            Term::Lam(x, body) => {
                out.insert(x.clone());
                go(body, out);
            }
        }
    }
    let mut out = VarSet::new();
    go(t, &mut out);
    out
}

/// `hint`, then `hint1`, `hint2`, ... until the name is not in `avoid`.
pub fn fresh_var(avoid: &VarSet, hint: &str) -> String {
    if !avoid.contains(hint) {
        return hint.to_string();
    }
    (1u64..)
        .map(|i| format!("{hint}{i}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded counter")
}

/// Computes `[g/x]f`: every free occurrence of `x` in `f` replaced by `g`.
pub fn subst(g: &Term, x: &str, f: &Term) -> Term {
    let g_free = free_vars(g);
    subst_with(g, &g_free, x, f)
}

fn subst_with(g: &Term, g_free: &VarSet, x: &str, f: &Term) -> Term {
    match f {
        Term::Var(y) if y == x => g.clone(),
        Term::Var(_) | Term::Const(_) => f.clone(),
        Term::App(a, b) => Term::app(subst_with(g, g_free, x, a), subst_with(g, g_free, x, b)),
        Term::Pair(a, b) => Term::pair(subst_with(g, g_free, x, a), subst_with(g, g_free, x, b)),
        Term::Lam(y, _) if y == x => f.clone(),
        Term::Lam(y, body) => {
            if !g_free.contains(y) || !occurs_free(x, body) {
                Term::lam(y.clone(), subst_with(g, g_free, x, body))
            } else {
                let mut avoid = all_vars(g);
                avoid.extend(all_vars(body));
                avoid.insert(x.to_string());
                let z = fresh_var(&avoid, y);
                let renamed = subst(&Term::Var(z.clone()), y, body);
                Term::lam(z, subst_with(g, g_free, x, &renamed))
            }
        }
    }
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(a: &'a Term, b: &'a Term, env_a: &mut Vec<&'a str>, env_b: &mut Vec<&'a str>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let ix = env_a.iter().rposition(|v| v == x);
                let iy = env_b.iter().rposition(|v| v == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::App(f1, a1), Term::App(f2, a2)) | (Term::Pair(f1, a1), Term::Pair(f2, a2)) => {
                go(f1, f2, env_a, env_b) && go(a1, a2, env_a, env_b)
            }
            (Term::Lam(x, b1), Term::Lam(y, b2)) => {
                env_a.push(x);
                env_b.push(y);
                let eq = go(b1, b2, env_a, env_b);
                env_a.pop();
                env_b.pop();
                eq
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// Replaces every pair literal `[l, r]` by `\s. s l r` with a fresh selector `s`.
pub fn desugar_pairs(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(a, b) => Term::app(desugar_pairs(a), desugar_pairs(b)),
        Term::Lam(x, body) => Term::lam(x.clone(), desugar_pairs(body)),
        Term::Pair(l, r) => {
            let l = desugar_pairs(l);
            let r = desugar_pairs(r);
            let mut avoid = all_vars(&l);
            avoid.extend(all_vars(&r));
            let sel = fresh_var(&avoid, "r");
            Term::lam(
                sel.clone(),
                Term::apps(Term::Var(sel), [l, r]),
            )
        }
    }
}

/// Recognizes the desugared pair shape `\r. r a b` with `r` free in neither component.
pub fn as_pair_shape(t: &Term) -> Option<(&Term, &Term)> {
    let Term::Lam(r, body) = t else { return None };
    let Term::App(f, b) = &**body else { return None };
    let Term::App(head, a) = &**f else { return None };
    match &**head {
        Term::Var(h) if h == r && !occurs_free(r, a) && !occurs_free(r, b) => Some((a, b)),
        _ => None,
    }
}

//! Bracket abstraction into the {I, K, S} basis and a weak reduction
//! machine for the resulting applicative forms.

use std::fmt;

use crate::outcome::{checked_add, checked_sub, run_steps, trace_line, EvalError, Outcome};
use crate::syntax::{desugar_pairs, ConstVal, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CombTerm {
    I,
    K,
    S,
    Var(String),
    Const(ConstVal),
    App(Box<CombTerm>, Box<CombTerm>),
}

/// Rule selection for bracket abstraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SkiMode {
    /// `S` on every application, `K` only on atoms. Reproduces the
    /// textbook derivation shape exactly.
    #[default]
    Naive,
    /// `K` whenever the variable is not free in the body.
    Optimized,
}

impl std::str::FromStr for SkiMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(SkiMode::Naive),
            "optimized" => Ok(SkiMode::Optimized),
            other => Err(format!("unknown SKI mode '{other}' (expected naive or optimized)")),
        }
    }
}

impl CombTerm {
    pub fn app(f: CombTerm, a: CombTerm) -> CombTerm {
        CombTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apps(head: CombTerm, args: impl IntoIterator<Item = CombTerm>) -> CombTerm {
        args.into_iter().fold(head, CombTerm::app)
    }

    pub fn int(n: i64) -> CombTerm {
        CombTerm::Const(ConstVal::Int(n))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            CombTerm::Const(c) => c.as_int(),
            _ => None,
        }
    }

    pub fn spine(&self) -> (&CombTerm, Vec<&CombTerm>) {
        let mut head = self;
        let mut args = Vec::new();
        while let CombTerm::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn occurs(&self, x: &str) -> bool {
        match self {
            CombTerm::Var(y) => x == y,
            CombTerm::App(f, a) => f.occurs(x) || a.occurs(x),
            _ => false,
        }
    }

    /// Built from I, K and S alone.
    pub fn is_combinator(&self) -> bool {
        match self {
            CombTerm::I | CombTerm::K | CombTerm::S => true,
            CombTerm::Var(_) | CombTerm::Const(_) => false,
            CombTerm::App(f, a) => f.is_combinator() && a.is_combinator(),
        }
    }

    /// Number of application nodes.
    pub fn app_count(&self) -> usize {
        match self {
            CombTerm::App(f, a) => 1 + f.app_count() + a.app_count(),
            _ => 0,
        }
    }
}

impl fmt::Display for CombTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &CombTerm, arg: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                CombTerm::I => f.write_str("I"),
                CombTerm::K => f.write_str("K"),
                CombTerm::S => f.write_str("S"),
                CombTerm::Var(x) => f.write_str(x),
                CombTerm::Const(c) => write!(f, "{c}"),
                CombTerm::App(..) => {
                    if arg {
                        f.write_str("(")?;
                    }
                    let (head, args) = t.spine();
                    go(head, true, f)?;
                    for a in args {
                        f.write_str(" ")?;
                        go(a, true, f)?;
                    }
                    if arg {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, false, f)
    }
}

/// Eliminates `x` from a λ-free body:
/// `[x]x = I`, `[x]P = K P`, `[x](P Q) = S ([x]P) ([x]Q)`.
pub fn bracket_abstract(x: &str, body: &CombTerm, mode: SkiMode) -> CombTerm {
    match body {
        CombTerm::Var(y) if y == x => CombTerm::I,
        _ if mode == SkiMode::Optimized && !body.occurs(x) => CombTerm::app(CombTerm::K, body.clone()),
        CombTerm::App(p, q) => CombTerm::apps(
            CombTerm::S,
            [bracket_abstract(x, p, mode), bracket_abstract(x, q, mode)],
        ),
        _ => CombTerm::app(CombTerm::K, body.clone()),
    }
}

/// Translates a term into the basis, eliminating abstractions innermost first.
pub fn ski_compile(t: &Term, mode: SkiMode) -> CombTerm {
    fn go(t: &Term, mode: SkiMode) -> CombTerm {
        match t {
            Term::Var(x) => CombTerm::Var(x.clone()),
            Term::Const(c) => CombTerm::Const(c.clone()),
            Term::App(f, a) => CombTerm::app(go(f, mode), go(a, mode)),
            Term::Lam(x, body) => bracket_abstract(x, &go(body, mode), mode),
            Term::Pair(..) => unreachable!("pairs are desugared before translation"),
        }
    }
    go(&desugar_pairs(t), mode)
}

fn contract_spine(head: &CombTerm, args: &[&CombTerm]) -> Result<Option<CombTerm>, EvalError> {
    let rebuild = |t: CombTerm, used: usize| Some(CombTerm::apps(t, args[used..].iter().map(|a| (*a).clone())));
    Ok(match (head, args) {
        (CombTerm::I, [x, ..]) => rebuild((*x).clone(), 1),
        (CombTerm::K, [x, _, ..]) => rebuild((*x).clone(), 2),
        (CombTerm::S, [x, y, z, ..]) => {
            let (x, y, z) = ((*x).clone(), (*y).clone(), (*z).clone());
            rebuild(CombTerm::app(CombTerm::app(x, z.clone()), CombTerm::app(y, z)), 3)
        }
        (CombTerm::Const(c @ (ConstVal::Add | ConstVal::Sub)), [a, b, ..]) => match (a.as_int(), b.as_int()) {
            (Some(m), Some(n)) => {
                let v = if *c == ConstVal::Add { checked_add(m, n)? } else { checked_sub(m, n)? };
                rebuild(CombTerm::int(v), 2)
            }
            _ => None,
        },
        // +[x,y] = [x,y] add: a pair is the function that feeds its components to a consumer.
        (CombTerm::Const(ConstVal::AddPair), [p, ..]) if p.as_int().is_none() => {
            rebuild(CombTerm::app((*p).clone(), CombTerm::Const(ConstVal::Add)), 1)
        }
        (CombTerm::Const(ConstVal::Fix), [g, ..]) => {
            let g = (*g).clone();
            let again = CombTerm::app(CombTerm::Const(ConstVal::Fix), g.clone());
            rebuild(CombTerm::app(g, again), 1)
        }
        _ => None,
    })
}

/// Contracts the leftmost-outermost I/K/S/δ redex.
pub fn ski_step(t: &CombTerm) -> Result<Option<CombTerm>, EvalError> {
    let (head, args) = t.spine();
    if let Some(r) = contract_spine(head, &args)? {
        return Ok(Some(r));
    }
    for (i, a) in args.iter().enumerate() {
        if let Some(a2) = ski_step(a)? {
            let new_args = args
                .iter()
                .enumerate()
                .map(|(j, b)| if i == j { a2.clone() } else { (*b).clone() })
                .collect::<Vec<_>>();
            return Ok(Some(CombTerm::apps(head.clone(), new_args)));
        }
    }
    Ok(None)
}

pub fn ski_reduce(t: &CombTerm, max_steps: usize) -> Result<Outcome<CombTerm>, EvalError> {
    run_steps(t.clone(), max_steps.max(1), ski_step, |_, _| {})
}

pub fn ski_reduce_traced(t: &CombTerm, max_steps: usize) -> Result<(Outcome<CombTerm>, Vec<String>), EvalError> {
    let mut lines = Vec::new();
    let out = run_steps(t.clone(), max_steps.max(1), ski_step, |n, cur| lines.push(trace_line(n, &cur.to_string())))?;
    Ok((out, lines))
}

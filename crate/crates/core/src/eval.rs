//! Directed reduction for the λ-theory: β, δ for the arithmetic constants,
//! optional η, under normal or applicative order with a step budget.

use crate::outcome::{checked_add, checked_sub, run_steps, EvalError, Outcome};
use crate::syntax::{as_pair_shape, desugar_pairs, occurs_free, print_resugared, subst, ConstVal, Term};

pub type ReduceOutcome = Outcome<Term>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Leftmost-outermost redex first.
    #[default]
    NormalOrder,
    /// Leftmost-innermost redex first.
    ApplicativeOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub max_steps: usize,
    pub use_eta: bool,
    pub strategy: Strategy,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { max_steps: 10_000, use_eta: false, strategy: Strategy::NormalOrder }
    }
}

impl EvalConfig {
    pub fn with_max_steps(max_steps: usize) -> Self {
        EvalConfig { max_steps: max_steps.max(1), ..Default::default() }
    }
}

/// Contracts a δ-redex at the root of `t`, if `t` is one.
pub fn delta_step(t: &Term) -> Result<Option<Term>, EvalError> {
    let (head, args) = t.spine();
    let Term::Const(c) = head else { return Ok(None) };
    match (c, args.as_slice()) {
        (ConstVal::Add, [a, b]) => match (a.as_int(), b.as_int()) {
            (Some(m), Some(n)) => Ok(Some(Term::int(checked_add(m, n)?))),
            _ => Ok(None),
        },
        (ConstVal::Sub, [a, b]) => match (a.as_int(), b.as_int()) {
            (Some(m), Some(n)) => Ok(Some(Term::int(checked_sub(m, n)?))),
            _ => Ok(None),
        },
        (ConstVal::AddPair, [p]) => {
            let parts = match p {
                Term::Pair(l, r) => Some((&**l, &**r)),
                Term::Lam(..) => as_pair_shape(p),
                _ => None,
            };
            match parts.and_then(|(l, r)| l.as_int().zip(r.as_int())) {
                Some((m, n)) => Ok(Some(Term::int(checked_add(m, n)?))),
                None => Ok(None),
            }
        }
        (ConstVal::Fix, [f]) => Ok(Some(Term::app((*f).clone(), t.clone()))),
        _ => Ok(None),
    }
}

fn eta_root(t: &Term) -> Option<Term> {
    let Term::Lam(x, body) = t else { return None };
    let Term::App(f, arg) = &**body else { return None };
    match &**arg {
        Term::Var(y) if y == x && !occurs_free(x, f) => Some((**f).clone()),
        _ => None,
    }
}

fn contract_root(t: &Term, use_eta: bool) -> Result<Option<Term>, EvalError> {
    if let Term::App(f, a) = t {
        match &**f {
            Term::Lam(x, body) => return Ok(Some(subst(a, x, body))),
            Term::Pair(l, r) => return Ok(Some(Term::apps((**a).clone(), [(**l).clone(), (**r).clone()]))),
            _ => {}
        }
    }
    if let Some(r) = delta_step(t)? {
        return Ok(Some(r));
    }
    if use_eta {
        return Ok(eta_root(t));
    }
    Ok(None)
}

fn step_children<F>(t: &Term, mut step: F) -> Result<Option<Term>, EvalError>
where
    F: FnMut(&Term) -> Result<Option<Term>, EvalError>,
{
    Ok(match t {
        Term::Var(_) | Term::Const(_) => None,
        Term::App(f, a) => match step(f)? {
            Some(f2) => Some(Term::app(f2, (**a).clone())),
            None => step(a)?.map(|a2| Term::app((**f).clone(), a2)),
        },
        Term::Pair(l, r) => match step(l)? {
            Some(l2) => Some(Term::pair(l2, (**r).clone())),
            None => step(r)?.map(|r2| Term::pair((**l).clone(), r2)),
        },
        Term::Lam(x, body) => step(body)?.map(|b| Term::lam(x.clone(), b)),
    })
}

fn normal_step(t: &Term, use_eta: bool) -> Result<Option<Term>, EvalError> {
    if let Some(r) = contract_root(t, use_eta)? {
        return Ok(Some(r));
    }
    step_children(t, |c| normal_step(c, use_eta))
}

fn applicative_step(t: &Term, use_eta: bool) -> Result<Option<Term>, EvalError> {
    if let Some(r) = step_children(t, |c| applicative_step(c, use_eta))? {
        return Ok(Some(r));
    }
    contract_root(t, use_eta)
}

/// Contracts the leftmost-outermost β- or δ-redex.
pub fn beta_step(t: &Term) -> Result<Option<Term>, EvalError> {
    normal_step(t, false)
}

/// Contracts the leftmost-outermost η-redex `\x. f x` with `x` not free in `f`.
pub fn eta_step(t: &Term) -> Option<Term> {
    if let Some(r) = eta_root(t) {
        return Some(r);
    }
    match t {
        Term::Var(_) | Term::Const(_) => None,
        Term::App(f, a) => match eta_step(f) {
            Some(f2) => Some(Term::app(f2, (**a).clone())),
            None => eta_step(a).map(|a2| Term::app((**f).clone(), a2)),
        },
        Term::Pair(l, r) => match eta_step(l) {
            Some(l2) => Some(Term::pair(l2, (**r).clone())),
            None => eta_step(r).map(|r2| Term::pair((**l).clone(), r2)),
        },
        Term::Lam(x, body) => eta_step(body).map(|b| Term::lam(x.clone(), b)),
    }
}

/// One contraction under the configured strategy.
pub fn step(t: &Term, cfg: &EvalConfig) -> Result<Option<Term>, EvalError> {
    match cfg.strategy {
        Strategy::NormalOrder => normal_step(t, cfg.use_eta),
        Strategy::ApplicativeOrder => applicative_step(t, cfg.use_eta),
    }
}

pub fn reduce(t: &Term, cfg: &EvalConfig) -> Result<ReduceOutcome, EvalError> {
    reduce_observed(t, cfg, |_, _| {})
}

/// Reduces `t`, handing every intermediate term to `observe`.
pub fn reduce_observed<O>(t: &Term, cfg: &EvalConfig, observe: O) -> Result<ReduceOutcome, EvalError>
where
    O: FnMut(usize, &Term),
{
    let start = desugar_pairs(t);
    run_steps(start, cfg.max_steps.max(1), |cur| step(cur, cfg), observe)
}

/// Reduces `t` and returns the `step N: ...` trace alongside the outcome.
pub fn reduce_traced(t: &Term, cfg: &EvalConfig) -> Result<(ReduceOutcome, Vec<String>), EvalError> {
    let mut lines = Vec::new();
    let out = reduce_observed(t, cfg, |n, cur| lines.push(crate::outcome::trace_line(n, &print_resugared(cur))))?;
    Ok((out, lines))
}

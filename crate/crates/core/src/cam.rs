//! Categorical combinator code: compilation from nameless terms and
//! evaluation "by closure", i.e. by applying the code to an environment
//! value and rewriting with the syntactic equations.
//!
//! Environments are ordinary values of the same syntax: the nested pair
//! `[...[(), wn]..., w0]` binds `wi` to index `i`.

use std::fmt;

use crate::debruijn::{encode, DTerm, DebruijnError};
use crate::outcome::{checked_add, checked_sub, run_steps, trace_line, EvalError, Outcome};
use crate::syntax::{ConstVal, Term};

pub type CamOutcome = Outcome<CatCode>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CatCode {
    /// `$[x, y]`, abbreviating `eps o <x, y>`.
    AppC(Box<CatCode>, Box<CatCode>),
    /// `L(x)`, currying.
    LamC(Box<CatCode>),
    /// `'x`, the constant arrow.
    QuoteC(Box<CatCode>),
    /// `n!`, abbreviating `Snd o Fst^n`.
    Bang(usize),
    /// `<x, y>`.
    Couple(Box<CatCode>, Box<CatCode>),
    /// `[x, y]`, a pair value.
    PairV(Box<CatCode>, Box<CatCode>),
    Fst,
    Snd,
    /// `x o y`.
    Comp(Box<CatCode>, Box<CatCode>),
    Eps,
    Unit,
    /// Identity arrow, `Id x = x`. Never produced by the compiler.
    Id,
    KConst(ConstVal),
    IntV(i64),
    /// Juxtaposition `x y`: code applied to a value.
    Apply(Box<CatCode>, Box<CatCode>),
}

/// Name of the equation used by one rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `(x o y) z = x (y z)`
    Ass,
    /// `Fst [x, y] = x`
    Fst,
    /// `Snd [x, y] = y`
    Snd,
    /// `<x, y> z = [x z, y z]`
    Dpair,
    /// `eps [L(x) y, z] = x [y, z]`
    Ac,
    /// `('x) y = x`
    Quote,
    /// `0! [x, y] = y`, `(n+1)! [x, y] = n! x`
    Bang,
    /// `$[x, y] z = eps [x z, y z]`
    Dollar,
    /// `L(x) y z = x [y, z]`
    Curry,
    /// `Id x = x`
    Id,
    /// `eps [f, z] = f z` for a non-closure arrow `f`.
    EpsApply,
    /// `eps [[a, b], g] = eps [eps [g, a], b]`: a pair consumes a selector.
    EpsPair,
    /// Arithmetic and fixpoint constants.
    Delta,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Ass => "ass",
            Rule::Fst => "fst",
            Rule::Snd => "snd",
            Rule::Dpair => "dpair",
            Rule::Ac => "ac",
            Rule::Quote => "quote",
            Rule::Bang => "bang",
            Rule::Dollar => "dollar",
            Rule::Curry => "curry",
            Rule::Id => "id",
            Rule::EpsApply => "eps-apply",
            Rule::EpsPair => "eps-pair",
            Rule::Delta => "delta",
        })
    }
}

use CatCode as C;

fn bx(c: CatCode) -> Box<CatCode> {
    Box::new(c)
}

impl CatCode {
    pub fn app_c(x: CatCode, y: CatCode) -> CatCode {
        C::AppC(bx(x), bx(y))
    }

    pub fn lam(x: CatCode) -> CatCode {
        C::LamC(bx(x))
    }

    pub fn quote(x: CatCode) -> CatCode {
        C::QuoteC(bx(x))
    }

    pub fn couple(x: CatCode, y: CatCode) -> CatCode {
        C::Couple(bx(x), bx(y))
    }

    pub fn pair(x: CatCode, y: CatCode) -> CatCode {
        C::PairV(bx(x), bx(y))
    }

    pub fn comp(x: CatCode, y: CatCode) -> CatCode {
        C::Comp(bx(x), bx(y))
    }

    pub fn apply(f: CatCode, x: CatCode) -> CatCode {
        C::Apply(bx(f), bx(x))
    }

    /// `eps [f, x]`
    pub fn eps(f: CatCode, x: CatCode) -> CatCode {
        C::apply(C::Eps, C::pair(f, x))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            C::IntV(n) => Some(*n),
            _ => None,
        }
    }

    /// Whether the code uses only the forms the compiler emits.
    pub fn is_compiled_form(&self) -> bool {
        match self {
            C::AppC(x, y) | C::Couple(x, y) | C::Comp(x, y) => x.is_compiled_form() && y.is_compiled_form(),
            C::LamC(x) | C::QuoteC(x) => x.is_compiled_form(),
            C::Bang(_) | C::KConst(_) | C::IntV(_) | C::Snd => true,
            C::PairV(..) | C::Fst | C::Eps | C::Unit | C::Id | C::Apply(..) => false,
        }
    }

    /// Whether only `eps`, `L`, `<,>`, `[,]`, `o`, `Fst`, `Snd`, `()`,
    /// constants and quoted integers occur.
    pub fn is_primitive_form(&self) -> bool {
        match self {
            C::AppC(..) | C::Bang(_) | C::Id => false,
            C::QuoteC(x) => matches!(**x, C::IntV(_)),
            C::LamC(x) => x.is_primitive_form(),
            C::Couple(x, y) | C::PairV(x, y) | C::Comp(x, y) | C::Apply(x, y) => {
                x.is_primitive_form() && y.is_primitive_form()
            }
            C::Fst | C::Snd | C::Eps | C::Unit | C::KConst(_) | C::IntV(_) => true,
        }
    }
}

/// Translates nameless terms: `n -> n!`, `(M N) -> $[M, N]`, `\.M -> L(M)`,
/// `[M, N] -> <M, N>`, integer `k -> 'k`, and any other constant
/// `c -> L(c o Snd)`, the expanded form of `'c`.
pub fn cam_compile(d: &DTerm) -> CatCode {
    match d {
        DTerm::Index(n) => C::Bang(*n),
        DTerm::Const(ConstVal::Int(n)) => C::quote(C::IntV(*n)),
        DTerm::Const(c) => C::lam(C::comp(C::KConst(c.clone()), C::Snd)),
        DTerm::App(f, a) => C::app_c(cam_compile(f), cam_compile(a)),
        DTerm::Lam(body) => C::lam(cam_compile(body)),
        DTerm::Pair(l, r) => C::couple(cam_compile(l), cam_compile(r)),
    }
}

/// Encodes a closed term and compiles it.
pub fn compile_term(t: &Term) -> Result<CatCode, DebruijnError> {
    Ok(cam_compile(&encode(t)?))
}

fn fst_power(n: usize) -> CatCode {
    (1..n).fold(C::Fst, |acc, _| C::comp(C::Fst, acc))
}

/// Rewrites `$[x, y]` to `eps o <x, y>`, `n!` to `Snd o Fst^n` and quoted
/// function constants `'c` to `L(c o Snd)`. Quoted integers are data and
/// stay quoted.
pub fn expand_abbreviations(c: &CatCode) -> CatCode {
    match c {
        C::AppC(x, y) => C::comp(C::Eps, C::couple(expand_abbreviations(x), expand_abbreviations(y))),
        C::Bang(0) => C::Snd,
        C::Bang(n) => C::comp(C::Snd, fst_power(*n)),
        C::QuoteC(m) => match &**m {
            C::IntV(_) => c.clone(),
            other => C::lam(C::comp(expand_abbreviations(other), C::Snd)),
        },
        C::LamC(x) => C::lam(expand_abbreviations(x)),
        C::Couple(x, y) => C::couple(expand_abbreviations(x), expand_abbreviations(y)),
        C::PairV(x, y) => C::pair(expand_abbreviations(x), expand_abbreviations(y)),
        C::Comp(x, y) => C::comp(expand_abbreviations(x), expand_abbreviations(y)),
        C::Apply(x, y) => C::apply(expand_abbreviations(x), expand_abbreviations(y)),
        C::Fst | C::Snd | C::Eps | C::Unit | C::Id | C::KConst(_) | C::IntV(_) => c.clone(),
    }
}

fn delta(f: &CatCode, z: &CatCode) -> Result<Option<CatCode>, EvalError> {
    match (f, z) {
        (C::KConst(ConstVal::AddPair), C::PairV(a, b)) => match (a.as_int(), b.as_int()) {
            (Some(m), Some(n)) => Ok(Some(C::IntV(checked_add(m, n)?))),
            _ => Ok(None),
        },
        // a closure standing for a pair: +p = p add
        (C::KConst(ConstVal::AddPair), C::Apply(h, _)) if matches!(**h, C::LamC(_)) => {
            Ok(Some(C::eps(z.clone(), C::KConst(ConstVal::Add))))
        }
        (C::Apply(g, a), C::IntV(n)) => match (&**g, a.as_int()) {
            (C::KConst(ConstVal::Add), Some(m)) => Ok(Some(C::IntV(checked_add(m, *n)?))),
            (C::KConst(ConstVal::Sub), Some(m)) => Ok(Some(C::IntV(checked_sub(m, *n)?))),
            _ => Ok(None),
        },
        (C::KConst(ConstVal::Fix), g) => {
            Ok(Some(C::eps(g.clone(), C::apply(C::KConst(ConstVal::Fix), g.clone()))))
        }
        _ => Ok(None),
    }
}

fn contract_root(c: &CatCode) -> Result<Option<(CatCode, Rule)>, EvalError> {
    let C::Apply(f, z) = c else { return Ok(None) };
    let z = &**z;
    let out = match (&**f, z) {
        (C::Comp(x, y), _) => (C::apply((**x).clone(), C::apply((**y).clone(), z.clone())), Rule::Ass),
        (C::Fst, C::PairV(a, _)) => ((**a).clone(), Rule::Fst),
        (C::Snd, C::PairV(_, b)) => ((**b).clone(), Rule::Snd),
        (C::Couple(x, y), _) => (
            C::pair(C::apply((**x).clone(), z.clone()), C::apply((**y).clone(), z.clone())),
            Rule::Dpair,
        ),
        (C::QuoteC(x), _) => ((**x).clone(), Rule::Quote),
        (C::Bang(0), C::PairV(_, b)) => ((**b).clone(), Rule::Bang),
        (C::Bang(n), C::PairV(a, _)) => (C::apply(C::Bang(n - 1), (**a).clone()), Rule::Bang),
        (C::AppC(x, y), _) => (
            C::eps(C::apply((**x).clone(), z.clone()), C::apply((**y).clone(), z.clone())),
            Rule::Dollar,
        ),
        (C::Apply(g, y), _) if matches!(**g, C::LamC(_)) => {
            let C::LamC(x) = &**g else { unreachable!() };
            (C::apply((**x).clone(), C::pair((**y).clone(), z.clone())), Rule::Curry)
        }
        (C::Id, _) => (z.clone(), Rule::Id),
        (C::Eps, C::PairV(g, w)) => match &**g {
            C::Apply(h, y) if matches!(**h, C::LamC(_)) => {
                let C::LamC(x) = &**h else { unreachable!() };
                (C::apply((**x).clone(), C::pair((**y).clone(), (**w).clone())), Rule::Ac)
            }
            C::PairV(a, b) => (
                C::eps(C::eps((**w).clone(), (**a).clone()), (**b).clone()),
                Rule::EpsPair,
            ),
            C::IntV(_) | C::Unit => return Ok(None),
            other => (C::apply(other.clone(), (**w).clone()), Rule::EpsApply),
        },
        (f, z) => match delta(f, z)? {
            Some(r) => (r, Rule::Delta),
            None => return Ok(None),
        },
    };
    Ok(Some(out))
}

fn children_step(c: &CatCode) -> Result<Option<(CatCode, Rule)>, EvalError> {
    fn two(
        x: &CatCode,
        y: &CatCode,
        rebuild: fn(CatCode, CatCode) -> CatCode,
    ) -> Result<Option<(CatCode, Rule)>, EvalError> {
        if let Some((x2, r)) = step_with_rule(x)? {
            return Ok(Some((rebuild(x2, y.clone()), r)));
        }
        Ok(step_with_rule(y)?.map(|(y2, r)| (rebuild(x.clone(), y2), r)))
    }
    match c {
        C::Apply(x, y) => two(x, y, C::apply),
        C::PairV(x, y) => two(x, y, C::pair),
        C::AppC(x, y) => two(x, y, C::app_c),
        C::Couple(x, y) => two(x, y, C::couple),
        C::Comp(x, y) => two(x, y, C::comp),
        C::LamC(x) => Ok(step_with_rule(x)?.map(|(x2, r)| (C::lam(x2), r))),
        C::QuoteC(x) => Ok(step_with_rule(x)?.map(|(x2, r)| (C::quote(x2), r))),
        _ => Ok(None),
    }
}

/// Leftmost-innermost contraction, reporting the equation used.
pub fn step_with_rule(c: &CatCode) -> Result<Option<(CatCode, Rule)>, EvalError> {
    if let Some(r) = children_step(c)? {
        return Ok(Some(r));
    }
    contract_root(c)
}

pub fn cam_step(c: &CatCode) -> Result<Option<CatCode>, EvalError> {
    Ok(step_with_rule(c)?.map(|(c, _)| c))
}

/// Rewrites `c` until no equation applies or the budget runs out.
pub fn cam_normalize(c: &CatCode, max_steps: usize) -> Result<CamOutcome, EvalError> {
    run_steps(c.clone(), max_steps.max(1), cam_step, |_, _| {})
}

/// Applies compiled code to the empty environment `()` and evaluates.
pub fn cam_eval_closure(compiled: &CatCode, max_steps: usize) -> Result<CamOutcome, EvalError> {
    cam_normalize(&C::apply(compiled.clone(), C::Unit), max_steps)
}

/// One traced rewrite: the equation used and the resulting code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CamTraceStep {
    pub rule: Rule,
    pub code: CatCode,
}

/// Like [`cam_eval_closure`], also returning every rewrite in order.
pub fn cam_eval_traced(compiled: &CatCode, max_steps: usize) -> Result<(CamOutcome, Vec<CamTraceStep>), EvalError> {
    let mut steps = Vec::new();
    let start = C::apply(compiled.clone(), C::Unit);
    let out = run_steps(
        start,
        max_steps.max(1),
        |cur| {
            Ok(step_with_rule(cur)?.map(|(next, rule)| {
                steps.push(CamTraceStep { rule, code: next.clone() });
                next
            }))
        },
        |_, _| {},
    )?;
    // the budget check probes one extra step past the limit
    steps.truncate(out.steps);
    Ok((out, steps))
}

/// `step N: <code>` lines, starting from the initial application.
pub fn trace_lines(compiled: &CatCode, steps: &[CamTraceStep]) -> Vec<String> {
    let start = C::apply(compiled.clone(), C::Unit);
    std::iter::once(trace_line(0, &start.to_string()))
        .chain(steps.iter().enumerate().map(|(i, s)| trace_line(i + 1, &s.code.to_string())))
        .collect()
}

/// Printer settings. With `expand_quotes`, `'m` prints as `L(m o Snd)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CamPrinter {
    pub expand_quotes: bool,
}

impl CamPrinter {
    pub fn print(&self, c: &CatCode) -> String {
        let mut out = String::new();
        self.write(c, &mut out);
        out
    }

    fn write(&self, c: &CatCode, out: &mut String) {
        match c {
            C::AppC(x, y) => self.bracketed("$[", x, y, "]", out),
            C::Couple(x, y) => self.bracketed("<", x, y, ">", out),
            C::PairV(x, y) => self.bracketed("[", x, y, "]", out),
            C::LamC(x) => {
                out.push_str("L(");
                self.write(x, out);
                out.push(')');
            }
            C::QuoteC(x) if self.expand_quotes => {
                out.push_str("L(");
                self.operand(x, out);
                out.push_str(" o Snd)");
            }
            C::QuoteC(x) => {
                out.push('\'');
                match **x {
                    C::Comp(..) | C::Apply(..) => {
                        out.push('(');
                        self.write(x, out);
                        out.push(')');
                    }
                    _ => self.write(x, out),
                }
            }
            C::Bang(n) => {
                out.push_str(&n.to_string());
                out.push('!');
            }
            C::Fst => out.push_str("Fst"),
            C::Snd => out.push_str("Snd"),
            C::Eps => out.push_str("eps"),
            C::Unit => out.push_str("()"),
            C::Id => out.push_str("Id"),
            C::KConst(k) => out.push_str(&k.to_string()),
            C::IntV(n) => out.push_str(&n.to_string()),
            C::Comp(x, y) => {
                self.operand(x, out);
                out.push_str(" o ");
                self.operand(y, out);
            }
            C::Apply(f, x) => {
                match **f {
                    C::Comp(..) => {
                        out.push('(');
                        self.write(f, out);
                        out.push(')');
                    }
                    _ => self.write(f, out),
                }
                match **x {
                    C::Apply(..) | C::Comp(..) => {
                        out.push('(');
                        self.write(x, out);
                        out.push(')');
                    }
                    C::PairV(..) | C::Unit => self.write(x, out),
                    _ => {
                        out.push(' ');
                        self.write(x, out);
                    }
                }
            }
        }
    }

    fn operand(&self, c: &CatCode, out: &mut String) {
        match c {
            C::Comp(..) | C::Apply(..) => {
                out.push('(');
                self.write(c, out);
                out.push(')');
            }
            _ => self.write(c, out),
        }
    }

    fn bracketed(&self, open: &str, x: &CatCode, y: &CatCode, close: &str, out: &mut String) {
        out.push_str(open);
        self.write(x, out);
        out.push_str(", ");
        self.write(y, out);
        out.push_str(close);
    }
}

impl fmt::Display for CatCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&CamPrinter::default().print(self))
    }
}

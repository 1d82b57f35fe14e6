//! Nameless terms: every bound variable is replaced by the number of
//! abstractions between it and its binder.

use std::fmt;

use thiserror::Error;

use crate::syntax::{ConstVal, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DTerm {
    Index(usize),
    Const(ConstVal),
    App(Box<DTerm>, Box<DTerm>),
    Lam(Box<DTerm>),
    Pair(Box<DTerm>, Box<DTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DebruijnError {
    #[error("free variable '{0}' in a term that must be closed")]
    FreeVariable(String),
    #[error("index #{index} escapes its {depth} enclosing binder(s)")]
    DanglingIndex { index: usize, depth: usize },
}

impl DTerm {
    pub fn app(f: DTerm, a: DTerm) -> DTerm {
        DTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(body: DTerm) -> DTerm {
        DTerm::Lam(Box::new(body))
    }

    pub fn pair(l: DTerm, r: DTerm) -> DTerm {
        DTerm::Pair(Box::new(l), Box::new(r))
    }

    pub fn int(n: i64) -> DTerm {
        DTerm::Const(ConstVal::Int(n))
    }
}

pub fn encode(t: &Term) -> Result<DTerm, DebruijnError> {
    fn go(t: &Term, scope: &mut Vec<String>) -> Result<DTerm, DebruijnError> {
        Ok(match t {
            Term::Var(x) => {
                let pos = scope
                    .iter()
                    .rposition(|b| b == x)
                    .ok_or_else(|| DebruijnError::FreeVariable(x.clone()))?;
                DTerm::Index(scope.len() - 1 - pos)
            }
            Term::Const(c) => DTerm::Const(c.clone()),
            Term::App(f, a) => DTerm::app(go(f, scope)?, go(a, scope)?),
            Term::Pair(l, r) => DTerm::pair(go(l, scope)?, go(r, scope)?),
            Term::Lam(x, body) => {
                scope.push(x.clone());
                let b = go(body, scope);
                scope.pop();
                DTerm::lam(b?)
            }
        })
    }
    go(t, &mut Vec::new())
}

/// Names the binder at depth `d` as `v{d}`, which can never capture.
pub fn decode(d: &DTerm) -> Result<Term, DebruijnError> {
    fn go(d: &DTerm, depth: usize) -> Result<Term, DebruijnError> {
        Ok(match d {
            DTerm::Index(n) => {
                if *n >= depth {
                    return Err(DebruijnError::DanglingIndex { index: *n, depth });
                }
                Term::Var(format!("v{}", depth - 1 - n))
            }
            DTerm::Const(c) => Term::Const(c.clone()),
            DTerm::App(f, a) => Term::app(go(f, depth)?, go(a, depth)?),
            DTerm::Pair(l, r) => Term::pair(go(l, depth)?, go(r, depth)?),
            DTerm::Lam(body) => Term::lam(format!("v{depth}"), go(body, depth + 1)?),
        })
    }
    go(d, 0)
}

fn write_d(d: &DTerm, arg_pos: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match d {
        DTerm::Index(n) => write!(f, "#{n}"),
        DTerm::Const(c) => write!(f, "{c}"),
        DTerm::Pair(l, r) => {
            f.write_str("[")?;
            write_d(l, false, f)?;
            f.write_str(", ")?;
            write_d(r, false, f)?;
            f.write_str("]")
        }
        DTerm::Lam(body) => {
            f.write_str("\\.")?;
            match **body {
                DTerm::App(..) => {
                    f.write_str("(")?;
                    write_d(body, false, f)?;
                    f.write_str(")")
                }
                _ => write_d(body, false, f),
            }
        }
        DTerm::App(fun, a) => {
            if arg_pos {
                f.write_str("(")?;
            }
            match **fun {
                DTerm::Lam(_) => {
                    f.write_str("(")?;
                    write_d(fun, false, f)?;
                    f.write_str(")")?;
                }
                _ => write_d(fun, false, f)?,
            }
            f.write_str(" ")?;
            match **a {
                DTerm::Lam(_) => {
                    f.write_str("(")?;
                    write_d(a, false, f)?;
                    f.write_str(")")?;
                }
                _ => write_d(a, true, f)?,
            }
            if arg_pos {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for DTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_d(self, false, f)
    }
}

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How a reduction run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    NormalForm,
    BudgetExhausted,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::NormalForm => "normal-form",
            Status::BudgetExhausted => "budget-exhausted",
        })
    }
}

/// Final term of a reduction run together with the number of contractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome<T> {
    pub result: T,
    pub steps: usize,
    pub status: Status,
}

impl<T> Outcome<T> {
    pub fn is_normal(&self) -> bool {
        self.status == Status::NormalForm
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("integer overflow in {op} {lhs} {rhs}")]
    Overflow { op: &'static str, lhs: i64, rhs: i64 },
}

pub(crate) fn checked_add(lhs: i64, rhs: i64) -> Result<i64, EvalError> {
    lhs.checked_add(rhs).ok_or(EvalError::Overflow { op: "add", lhs, rhs })
}

pub(crate) fn checked_sub(lhs: i64, rhs: i64) -> Result<i64, EvalError> {
    lhs.checked_sub(rhs).ok_or(EvalError::Overflow { op: "sub", lhs, rhs })
}

/// Drives `step` until it reports no redex or `max_steps` contractions
/// have been made. `observe` sees the start term (step 0) and every
/// intermediate result.
pub(crate) fn run_steps<T, F, O>(start: T, max_steps: usize, mut step: F, mut observe: O) -> Result<Outcome<T>, EvalError>
where
    F: FnMut(&T) -> Result<Option<T>, EvalError>,
    O: FnMut(usize, &T),
{
    let mut cur = start;
    observe(0, &cur);
    let mut steps = 0;
    loop {
        if steps >= max_steps {
            // the budget is spent; check whether we happen to be done anyway
            let status = if step(&cur)?.is_none() { Status::NormalForm } else { Status::BudgetExhausted };
            return Ok(Outcome { result: cur, steps, status });
        }
        match step(&cur)? {
            Some(next) => {
                steps += 1;
                observe(steps, &next);
                cur = next;
            }
            None => return Ok(Outcome { result: cur, steps, status: Status::NormalForm }),
        }
    }
}

/// Formats one trace line.
pub fn trace_line(n: usize, printed: &str) -> String {
    format!("step {n}: {printed}")
}

//! Seeded term generators and reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use applicative::cam::{cam_eval_closure, compile_term};
use applicative::eval::{reduce, EvalConfig};
use applicative::ski::{ski_compile, ski_reduce, SkiMode};
use applicative::superc::{lift, sc_reduce};
use applicative::syntax::{free_vars, ConstVal, Term};
use applicative::types::Type;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Binder names are drawn from a tiny pool so shadowing is common.
pub const POOL: [&str; 3] = ["x", "y", "z"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_int(rng: &mut ChaCha8Rng) -> Term {
    Term::int(rng.gen_range(-9..=20))
}

fn pick_var(rng: &mut ChaCha8Rng, scope: &[String]) -> Term {
    Term::var(scope.choose(rng).expect("non-empty scope").clone())
}

fn untyped(rng: &mut ChaCha8Rng, scope: &mut Vec<String>, free: &[&str], depth: u32) -> Term {
    let names: Vec<String> = scope.iter().cloned().chain(free.iter().map(|s| s.to_string())).collect();
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0..=4 if !names.is_empty() => pick_var(rng, &names),
            5 => Term::Const([ConstVal::Add, ConstVal::Sub, ConstVal::AddPair].choose(rng).unwrap().clone()),
            _ => small_int(rng),
        };
    }
    match rng.gen_range(0..10) {
        0..=2 => {
            let x = POOL.choose(rng).unwrap().to_string();
            scope.push(x.clone());
            let body = untyped(rng, scope, free, depth - 1);
            scope.pop();
            Term::lam(x, body)
        }
        3..=6 => {
            let f = untyped(rng, scope, free, depth - 1);
            Term::app(f, untyped(rng, scope, free, depth - 1))
        }
        7 => {
            let a = untyped(rng, scope, free, depth - 1);
            let b = untyped(rng, scope, free, depth - 1);
            Term::apps(Term::Const(ConstVal::Add), [a, b])
        }
        8 => {
            let a = untyped(rng, scope, free, depth - 1);
            Term::pair(a, untyped(rng, scope, free, depth - 1))
        }
        _ => {
            let a = untyped(rng, scope, free, depth - 1);
            Term::app(Term::Const(ConstVal::AddPair), Term::pair(a, small_int(rng)))
        }
    }
}

/// Closed untyped term of depth at most `depth`; may diverge or get stuck.
pub fn closed_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    untyped(rng, &mut Vec::new(), &[], depth)
}

/// Term whose free variables come from the same pool its binders use.
pub fn open_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    untyped(rng, &mut Vec::new(), &POOL, depth)
}

pub fn nat() -> Type {
    Type::nat()
}

pub fn arrow(a: Type, b: Type) -> Type {
    Type::arrow(a, b)
}

pub fn random_type(rng: &mut ChaCha8Rng, depth: u32) -> Type {
    if depth == 0 || rng.gen_bool(0.5) {
        nat()
    } else {
        arrow(random_type(rng, depth - 1), random_type(rng, depth - 1))
    }
}

fn visible<'a>(ctx: &'a [(String, Type)], ty: &Type) -> Vec<&'a String> {
    ctx.iter()
        .enumerate()
        .filter(|(i, (x, t))| t == ty && !ctx[i + 1..].iter().any(|(y, _)| y == x))
        .map(|(_, (x, _))| x)
        .collect()
}

fn curried() -> Type {
    arrow(nat(), arrow(nat(), nat()))
}

fn typed_in(rng: &mut ChaCha8Rng, ctx: &mut Vec<(String, Type)>, ty: &Type, depth: u32) -> Term {
    let vars: Vec<String> = visible(ctx, ty).into_iter().cloned().collect();
    let leaf = depth == 0 || rng.gen_bool(0.15);
    if !vars.is_empty() && (leaf || rng.gen_bool(0.2)) {
        return Term::var(vars.choose(rng).unwrap().clone());
    }
    if *ty == nat() {
        if leaf {
            return small_int(rng);
        }
        return match rng.gen_range(0..8) {
            0 | 1 => {
                let c = [ConstVal::Add, ConstVal::Sub].choose(rng).unwrap().clone();
                let a = typed_in(rng, ctx, &nat(), depth - 1);
                Term::apps(Term::Const(c), [a, typed_in(rng, ctx, &nat(), depth - 1)])
            }
            2 => {
                let a = typed_in(rng, ctx, &nat(), depth - 1);
                Term::app(Term::Const(ConstVal::AddPair), Term::pair(a, typed_in(rng, ctx, &nat(), depth - 1)))
            }
            3 => {
                // a pair used as a function: [a, b] k = k a b
                let a = typed_in(rng, ctx, &nat(), depth - 1);
                let b = typed_in(rng, ctx, &nat(), depth - 1);
                Term::app(Term::pair(a, b), typed_in(rng, ctx, &curried(), depth - 1))
            }
            _ => application(rng, ctx, ty, depth),
        };
    }
    let Type::Arrow(dom, cod) = ty else { unreachable!("only N and arrows are generated") };
    if *ty == curried() && rng.gen_bool(0.3) {
        return Term::Const([ConstVal::Add, ConstVal::Sub].choose(rng).unwrap().clone());
    }
    if leaf || rng.gen_bool(0.7) {
        let x = POOL.choose(rng).unwrap().to_string();
        ctx.push((x.clone(), (**dom).clone()));
        let body = typed_in(rng, ctx, cod, depth.saturating_sub(1));
        ctx.pop();
        return Term::lam(x, body);
    }
    if **dom == nat() && **cod == nat() && rng.gen_bool(0.5) {
        let c = [ConstVal::Add, ConstVal::Sub].choose(rng).unwrap().clone();
        return Term::app(Term::Const(c), typed_in(rng, ctx, &nat(), depth - 1));
    }
    application(rng, ctx, ty, depth)
}

fn application(rng: &mut ChaCha8Rng, ctx: &mut Vec<(String, Type)>, ty: &Type, depth: u32) -> Term {
    let sigma = random_type(rng, 1);
    let f = typed_in(rng, ctx, &arrow(sigma.clone(), ty.clone()), depth - 1);
    Term::app(f, typed_in(rng, ctx, &sigma, depth - 1))
}

/// Closed, simply typed term of type `ty`.
pub fn typed_term(rng: &mut ChaCha8Rng, ty: &Type, depth: u32) -> Term {
    typed_in(rng, &mut Vec::new(), ty, depth)
}

/// Closed term of type N; all such terms normalize.
pub fn nat_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    typed_term(rng, &nat(), depth)
}

/// Renames every binder with `fresh`, leaving free variables alone.
pub fn rename_binders(t: &Term, fresh: &mut impl FnMut(&str) -> String) -> Term {
    fn go(t: &Term, env: &mut Vec<(String, String)>, fresh: &mut impl FnMut(&str) -> String) -> Term {
        match t {
            Term::Var(x) => match env.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Term::var(new.clone()),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::App(a, b) => Term::app(go(a, env, fresh), go(b, env, fresh)),
            Term::Pair(a, b) => Term::pair(go(a, env, fresh), go(b, env, fresh)),
            Term::Lam(x, body) => {
                let new = fresh(x);
                env.push((x.clone(), new.clone()));
                let b = go(body, env, fresh);
                env.pop();
                Term::lam(new, b)
            }
        }
    }
    go(t, &mut Vec::new(), fresh)
}

/// Every binder gets a distinct name that appears nowhere else.
pub fn rename_apart(t: &Term, tag: &str) -> Term {
    let mut n = 0;
    rename_binders(t, &mut |_| {
        n += 1;
        format!("{tag}{n}_")
    })
}

/// Replaces free occurrences of `x` with no renaming at all; correct only
/// when no binder of `f` is free in `g`.
pub fn naive_subst(g: &Term, x: &str, f: &Term) -> Term {
    match f {
        Term::Var(y) if y == x => g.clone(),
        Term::Var(_) | Term::Const(_) => f.clone(),
        Term::App(a, b) => Term::app(naive_subst(g, x, a), naive_subst(g, x, b)),
        Term::Pair(a, b) => Term::pair(naive_subst(g, x, a), naive_subst(g, x, b)),
        Term::Lam(y, _) if y == x => f.clone(),
        Term::Lam(y, body) => Term::lam(y.clone(), naive_subst(g, x, body)),
    }
}

pub fn beta_int(t: &Term, budget: usize) -> Option<i64> {
    let out = reduce(t, &EvalConfig::with_max_steps(budget)).ok()?;
    out.is_normal().then(|| out.result.as_int()).flatten()
}

pub fn ski_int(t: &Term, mode: SkiMode, budget: usize) -> Option<i64> {
    let out = ski_reduce(&ski_compile(t, mode), budget).ok()?;
    out.is_normal().then(|| out.result.as_int()).flatten()
}

pub fn cam_int(t: &Term, budget: usize) -> Option<i64> {
    let out = cam_eval_closure(&compile_term(t).ok()?, budget).ok()?;
    out.is_normal().then(|| out.result.as_int()).flatten()
}

pub fn sc_int(t: &Term, budget: usize) -> Option<i64> {
    let out = sc_reduce(&lift(t).ok()?, budget).ok()?;
    out.is_normal().then(|| out.result.as_int()).flatten()
}

pub fn is_closed(t: &Term) -> bool {
    free_vars(t).is_empty()
}

/// Random ground type per variable id, built lazily.
pub fn ground_substitution(rng: &mut ChaCha8Rng, ids: impl IntoIterator<Item = u32>) -> BTreeMap<u32, Type> {
    ids.into_iter().map(|v| (v, random_type(rng, 2))).collect()
}

pub fn corpus() -> Vec<(String, String)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "lam"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).expect("corpus file"))
        })
        .collect()
}

// proptest strategies

pub fn arb_name() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => prop::sample::select(vec!["x", "y", "z"]).prop_map(String::from),
        1 => "[a-w][a-z0-9_]{0,3}".prop_filter("keyword", |s| !matches!(s.as_str(), "add" | "sub" | "fix")),
    ]
}

/// Any term, including `$N` global names.
pub fn arb_term() -> impl Strategy<Value = Term> {
    arb_term_with(1)
}

fn arb_term_with(global_weight: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        4 => arb_name().prop_map(Term::Var),
        2 => (-50i64..50).prop_map(Term::int),
        1 => prop::sample::select(vec![ConstVal::Add, ConstVal::Sub, ConstVal::AddPair, ConstVal::Fix]).prop_map(Term::Const),
        1 => "[a-z]{1,3}".prop_map(Term::opaque),
        global_weight => "[XYZ][0-9]?".prop_map(|n| Term::var(format!("${n}"))),
    ];
    leaf.prop_recursive(6, 48, 3, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            2 => (arb_name(), inner.clone()).prop_map(|(x, b)| Term::lam(x, b)),
            1 => (inner.clone(), inner).prop_map(|(a, b)| Term::pair(a, b)),
        ]
    })
}

/// A closed term: every free variable gets wrapped in a binder.
pub fn arb_closed_term() -> impl Strategy<Value = Term> {
    arb_term_with(0).prop_map(|t| {
        let free: Vec<String> = free_vars(&t).into_iter().collect();
        free.into_iter().rev().fold(t, |acc, x| Term::lam(x, acc))
    })
}

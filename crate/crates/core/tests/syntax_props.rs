mod common;

use applicative::debruijn::{decode, encode};
use applicative::eval::{beta_step, reduce, EvalConfig};
use applicative::syntax::{alpha_eq, free_vars, occurs_free, parse, print, subst, Term};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn alpha_variant(t: &Term, salt: u32) -> Term {
    let mut n = 0;
    rename_binders(t, &mut |x| {
        n += 1;
        // reuse source names half the time so shadowing survives renaming
        if (n + salt).is_multiple_of(2) {
            x.to_string()
        } else {
            format!("r{salt}_{n}")
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_inverts_print(t in arb_term()) {
        let text = print(&t);
        prop_assert_eq!(parse(&text).unwrap(), t, "{}", text);
    }

    #[test]
    fn print_inverts_parse_up_to_whitespace(t in arb_term()) {
        let text = print(&t);
        let spaced = text.replace(' ', "   ").replace('(', "( ").replace(')', " )");
        prop_assert_eq!(print(&parse(&spaced).unwrap()), text);
    }

    #[test]
    fn alpha_eq_is_an_equivalence(t in arb_term(), u in arb_term(), salt in 0u32..4) {
        let v1 = rename_apart(&t, "p");
        let v2 = alpha_variant(&v1, salt);
        prop_assert!(alpha_eq(&t, &t));
        prop_assert!(alpha_eq(&t, &v1));
        prop_assert!(alpha_eq(&v1, &t));
        prop_assert!(alpha_eq(&v1, &v2));
        prop_assert!(alpha_eq(&t, &v2));
        prop_assert_eq!(alpha_eq(&t, &u), alpha_eq(&u, &t));
        if alpha_eq(&t, &u) {
            prop_assert!(alpha_eq(&v2, &u));
        }
    }

    #[test]
    fn substitution_removes_the_variable(g in arb_term(), f in arb_term(), x in arb_name()) {
        if !occurs_free(&x, &g) {
            prop_assert!(!occurs_free(&x, &subst(&g, &x, &f)));
        }
    }

    #[test]
    fn substitution_keeps_free_variables_free(g in arb_term(), f in arb_term(), x in arb_name()) {
        let r = subst(&g, &x, &f);
        if occurs_free(&x, &f) {
            for v in free_vars(&g) {
                prop_assert!(occurs_free(&v, &r), "{} lost in {}", v, print(&r));
            }
        }
        prop_assert!(alpha_eq(&r, &naive_subst(&g, &x, &rename_apart(&f, "c"))));
    }

    #[test]
    fn de_bruijn_round_trip(t in arb_closed_term()) {
        let d = encode(&t).unwrap();
        let back = decode(&d).unwrap();
        prop_assert!(alpha_eq(&back, &t));
        prop_assert_eq!(encode(&back).unwrap(), d);
    }

    #[test]
    fn de_bruijn_forms_are_canonical(t in arb_closed_term(), u in arb_closed_term(), salt in 0u32..4) {
        let v = alpha_variant(&t, salt);
        prop_assert_eq!(encode(&t).unwrap(), encode(&v).unwrap());
        prop_assert_eq!(encode(&t).unwrap() == encode(&u).unwrap(), alpha_eq(&t, &u));
    }

    #[test]
    fn beta_never_adds_free_variables(t in arb_term()) {
        if let Ok(Some(next)) = beta_step(&t) {
            prop_assert!(free_vars(&next).is_subset(&free_vars(&t)));
        }
    }
}

#[test]
fn seeded_capture_cases_match_the_renaming_oracle() {
    // g's free variables are exactly the names f likes to bind
    let mut rng = rng(7);
    for _ in 0..2000 {
        let g = open_term(&mut rng, 3);
        let f = open_term(&mut rng, 5);
        let x = POOL[rng.gen_range(0..POOL.len())];
        let got = subst(&g, x, &f);
        let oracle = naive_subst(&g, x, &rename_apart(&f, "o"));
        assert!(alpha_eq(&got, &oracle), "[{} / {x}] {} gave {}", print(&g), print(&f), print(&got));
    }
}

#[test]
fn reduction_is_deterministic() {
    let mut rng = rng(11);
    let cfg = EvalConfig::with_max_steps(300);
    for _ in 0..200 {
        let t = closed_term(&mut rng, 6);
        assert_eq!(reduce(&t, &cfg), reduce(&t, &cfg));
    }
}

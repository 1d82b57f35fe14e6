use super::{as_pair_shape, Term};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    Top,
    Head,
    Arg,
}

/// Concrete syntax for `t`; `parse(&print(t)) == t`.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, Pos::Top, false, &mut out);
    out
}

/// Like [`print`], but abstractions of the shape `\r. r a b` are shown as
/// the pair `[a, b]` they encode. Used for reduction traces.
pub fn print_resugared(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, Pos::Top, true, &mut out);
    out
}

fn write_term(t: &Term, pos: Pos, resugar: bool, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Const(c) => out.push_str(&c.to_string()),
        Term::Pair(l, r) => write_pair(l, r, resugar, out),
        Term::Lam(..) if resugar && as_pair_shape(t).is_some() => {
            let (l, r) = as_pair_shape(t).unwrap();
            write_pair(l, r, resugar, out);
        }
        Term::Lam(..) => {
            if pos != Pos::Top {
                out.push('(');
            }
            out.push('\\');
            let mut cur = t;
            let mut first = true;
            while let Term::Lam(x, body) = cur {
                if !first && resugar && as_pair_shape(cur).is_some() {
                    break;
                }
                if !first {
                    out.push(' ');
                }
                out.push_str(x);
                first = false;
                cur = body;
            }
            out.push_str(". ");
            write_term(cur, Pos::Top, resugar, out);
            if pos != Pos::Top {
                out.push(')');
            }
        }
        Term::App(..) => {
            if pos == Pos::Arg {
                out.push('(');
            }
            let (head, args) = t.spine();
            write_term(head, Pos::Head, resugar, out);
            for a in args {
                out.push(' ');
                write_term(a, Pos::Arg, resugar, out);
            }
            if pos == Pos::Arg {
                out.push(')');
            }
        }
    }
}

fn write_pair(l: &Term, r: &Term, resugar: bool, out: &mut String) {
    out.push('[');
    write_term(l, Pos::Top, resugar, out);
    out.push_str(", ");
    write_term(r, Pos::Top, resugar, out);
    out.push(']');
}

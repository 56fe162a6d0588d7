//! Pretty printer. Connectives that desugar to a recognizable shape are
//! printed in sugared form (`->`, `Khat_i`, `dia`, `<phi>`, `false`);
//! since the parser desugars them to the same AST, `parse(print(f))`
//! returns `f` for every formula.

use super::{Formula, BOT_ATOM};

const PREC_IMPLIES: u8 = 0;
const PREC_AND: u8 = 1;
const PREC_UNARY: u8 = 2;
const PREC_ATOM: u8 = 3;

/// A sugared reading of a negation-rooted shape, if one applies.
enum Sugar<'a> {
    False,
    Implies(&'a Formula, &'a Formula),
    Khat(&'a str, &'a Formula),
    Dia(&'a Formula),
    DiaAnnounce(&'a Formula, &'a Formula),
}

fn is_bot(f: &Formula) -> bool {
    matches!(f, Formula::And(l, r)
        if matches!(&**l, Formula::Atom(p) if p == BOT_ATOM)
        && matches!(&**r, Formula::Not(inner)
            if matches!(&**inner, Formula::Atom(p) if p == BOT_ATOM)))
}

fn sugar(f: &Formula) -> Option<Sugar<'_>> {
    if is_bot(f) {
        return Some(Sugar::False);
    }
    let Formula::Not(g) = f else { return None };
    match &**g {
        Formula::And(l, r) if !is_bot(g) => match &**r {
            Formula::Not(h) => Some(Sugar::Implies(l, h)),
            _ => None,
        },
        Formula::Know(i, h) => match &**h {
            Formula::Not(body) => Some(Sugar::Khat(i, body)),
            _ => None,
        },
        Formula::Box(h) => match &**h {
            Formula::Not(body) => Some(Sugar::Dia(body)),
            _ => None,
        },
        Formula::Announce(a, h) => match &**h {
            Formula::Not(body) => Some(Sugar::DiaAnnounce(a, body)),
            _ => None,
        },
        _ => None,
    }
}

fn prec(f: &Formula) -> u8 {
    match sugar(f) {
        Some(Sugar::False) => return PREC_ATOM,
        Some(Sugar::Implies(_, _)) => return PREC_IMPLIES,
        Some(_) => return PREC_UNARY,
        None => {}
    }
    match f {
        Formula::Atom(_) | Formula::Int(_) => PREC_ATOM,
        Formula::Not(_) | Formula::Know(_, _) | Formula::Box(_) | Formula::Announce(_, _) => {
            PREC_UNARY
        }
        Formula::And(_, _) => PREC_AND,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    let wrap = prec(f) < min;
    if wrap {
        out.push('(');
    }
    match sugar(f) {
        Some(Sugar::False) => out.push_str("false"),
        Some(Sugar::Implies(l, r)) => {
            write_at(l, PREC_AND, out);
            out.push_str(" -> ");
            write_at(r, PREC_IMPLIES, out);
        }
        Some(Sugar::Khat(i, g)) => {
            out.push_str("Khat_");
            out.push_str(i);
            out.push(' ');
            write_at(g, PREC_UNARY, out);
        }
        Some(Sugar::Dia(g)) => {
            out.push_str("dia ");
            write_at(g, PREC_UNARY, out);
        }
        Some(Sugar::DiaAnnounce(a, g)) => {
            out.push('<');
            write_at(a, PREC_IMPLIES, out);
            out.push_str("> ");
            write_at(g, PREC_UNARY, out);
        }
        None => match f {
            Formula::Atom(p) => out.push_str(p),
            Formula::Not(g) => {
                out.push('~');
                write_at(g, PREC_UNARY, out);
            }
            Formula::And(g, h) => {
                write_at(g, PREC_AND, out);
                out.push_str(" & ");
                write_at(h, PREC_UNARY, out);
            }
            Formula::Know(i, g) => {
                out.push_str("K_");
                out.push_str(i);
                out.push(' ');
                write_at(g, PREC_UNARY, out);
            }
            Formula::Int(g) => {
                out.push_str("int(");
                write_at(g, PREC_IMPLIES, out);
                out.push(')');
            }
            Formula::Announce(g, h) => {
                out.push('[');
                write_at(g, PREC_IMPLIES, out);
                out.push_str("] ");
                write_at(h, PREC_UNARY, out);
            }
            Formula::Box(g) => {
                out.push_str("box ");
                write_at(g, PREC_UNARY, out);
            }
        },
    }
    if wrap {
        out.push(')');
    }
}

pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_at(f, PREC_IMPLIES, &mut out);
    out
}

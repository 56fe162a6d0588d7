//! Formula AST, concrete syntax, complexity measures, and necessity forms.
//!
//! Only the primitive connectives are stored: atoms, negation, conjunction,
//! per-agent knowledge, interior, announcement, and the arbitrary-announcement
//! box. Everything else (`|`, `->`, `<->`, `Khat_i`, `dia`, `<f>g`, `false`)
//! is a parse-time abbreviation.

mod parse;
mod print;

pub use parse::{parse, ParseError};
pub use print::print;

use std::collections::HashSet;
use std::fmt;

/// Proposition id reserved for the falsum abbreviation: `false` desugars to
/// `Atom(BOT_ATOM) & ~Atom(BOT_ATOM)`. User models must not valuate it.
pub const BOT_ATOM: &str = "_bot";

/// A formula over the primitive connectives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `K_i f`: agent i knows f.
    Know(String, Box<Formula>),
    /// `int(f)`: f is true and can be announced.
    Int(Box<Formula>),
    /// `[f] g`: after publicly announcing f, g holds.
    Announce(Box<Formula>, Box<Formula>),
    /// `box f`: f holds after every announcement of a box-free formula.
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    // an AST constructor, not a logical-negation operator on self
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn know(agent: impl Into<String>, f: Formula) -> Formula {
        Formula::Know(agent.into(), Box::new(f))
    }

    pub fn int(f: Formula) -> Formula {
        Formula::Int(Box::new(f))
    }

    pub fn announce(f: Formula, g: Formula) -> Formula {
        Formula::Announce(Box::new(f), Box::new(g))
    }

    pub fn quant_box(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    // Abbreviations. These desugar immediately; the AST never stores them.

    pub fn bot() -> Formula {
        Formula::and(Formula::atom(BOT_ATOM), Formula::not(Formula::atom(BOT_ATOM)))
    }

    /// `f | g` as `~(~f & ~g)`.
    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(f), Formula::not(g)))
    }

    /// `f -> g` as `~(f & ~g)`.
    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::not(Formula::and(f, Formula::not(g)))
    }

    /// `f <-> g` as `(f -> g) & (g -> f)`.
    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::and(
            Formula::implies(f.clone(), g.clone()),
            Formula::implies(g, f),
        )
    }

    /// `Khat_i f` as `~K_i ~f`.
    pub fn khat(agent: impl Into<String>, f: Formula) -> Formula {
        Formula::not(Formula::know(agent, Formula::not(f)))
    }

    /// `<f> g` as `~[f]~g`.
    pub fn dia_announce(f: Formula, g: Formula) -> Formula {
        Formula::not(Formula::announce(f, Formula::not(g)))
    }

    /// `dia f` as `~box ~f`.
    pub fn dia(f: Formula) -> Formula {
        Formula::not(Formula::quant_box(Formula::not(f)))
    }

    /// Weighted symbol count. The announcement clause weighs its right
    /// argument by 4, which makes the rewrite measure in `compare` work out.
    pub fn size(&self) -> u64 {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) => f.size() + 1,
            Formula::And(f, g) => f.size() + g.size(),
            Formula::Know(_, f) => f.size() + 1,
            Formula::Int(f) => f.size() + 1,
            Formula::Announce(f, g) => f.size() + 4 * g.size(),
            Formula::Box(f) => f.size() + 1,
        }
    }

    /// Nesting depth of the arbitrary-announcement box.
    pub fn box_depth(&self) -> u32 {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Know(_, f) | Formula::Int(f) => f.box_depth(),
            Formula::And(f, g) | Formula::Announce(f, g) => f.box_depth().max(g.box_depth()),
            Formula::Box(f) => f.box_depth() + 1,
        }
    }

    /// Box-depth paired with size, ordered lexicographically.
    pub fn measure(&self) -> (u32, u64) {
        (self.box_depth(), self.size())
    }

    /// No announcement and no box: the purely epistemic fragment.
    pub fn is_el(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) | Formula::Know(_, f) | Formula::Int(f) => f.is_el(),
            Formula::And(f, g) => f.is_el() && g.is_el(),
            Formula::Announce(_, _) | Formula::Box(_) => false,
        }
    }

    /// No box, announcements allowed. Equivalent to `box_depth() == 0`.
    pub fn is_pal(&self) -> bool {
        self.box_depth() == 0
    }

    /// No modalities at all.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => f.is_propositional(),
            Formula::And(f, g) => f.is_propositional() && g.is_propositional(),
            _ => false,
        }
    }

    /// The formula itself and all proper subformulas.
    pub fn subformulas(&self) -> HashSet<Formula> {
        let mut out = HashSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut HashSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Atom(_) => {}
            Formula::Not(f) | Formula::Know(_, f) | Formula::Int(f) | Formula::Box(f) => {
                f.collect_subformulas(out)
            }
            Formula::And(f, g) | Formula::Announce(f, g) => {
                f.collect_subformulas(out);
                g.collect_subformulas(out);
            }
        }
    }

    /// Atom names occurring in the formula, excluding the reserved falsum id.
    pub fn atoms(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        self.collect_atoms(&mut out);
        out.remove(BOT_ATOM);
        out
    }

    fn collect_atoms(&self, out: &mut HashSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Not(f) | Formula::Know(_, f) | Formula::Int(f) | Formula::Box(f) => {
                f.collect_atoms(out)
            }
            Formula::And(f, g) | Formula::Announce(f, g) => {
                f.collect_atoms(out);
                g.collect_atoms(out);
            }
        }
    }

    /// Agent names occurring under knowledge operators.
    pub fn agents(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut HashSet<String>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Know(i, f) => {
                out.insert(i.clone());
                f.collect_agents(out);
            }
            Formula::Not(f) | Formula::Int(f) | Formula::Box(f) => f.collect_agents(out),
            Formula::And(f, g) | Formula::Announce(f, g) => {
                f.collect_agents(out);
                g.collect_agents(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(self))
    }
}

/// The three strict orders derived from size and box-depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    /// `S(f) < S(g)`
    pub less_s: bool,
    /// `d(f) < d(g)`
    pub less_d: bool,
    /// lexicographic: `d(f) < d(g)`, or equal depths and `S(f) < S(g)`
    pub less_sd: bool,
}

pub fn compare(f: &Formula, g: &Formula) -> Comparison {
    let (df, sf) = f.measure();
    let (dg, sg) = g.measure();
    Comparison {
        less_s: sf < sg,
        less_d: df < dg,
        less_sd: df < dg || (df == dg && sf < sg),
    }
}

/// A formula context with exactly one hole, built from implications,
/// knowledge, interior, and announcements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NecessityForm {
    Hole,
    Implies(Formula, Box<NecessityForm>),
    Know(String, Box<NecessityForm>),
    Int(Box<NecessityForm>),
    Announce(Formula, Box<NecessityForm>),
}

impl NecessityForm {
    /// Replace the hole by `f`.
    pub fn instantiate(&self, f: &Formula) -> Formula {
        match self {
            NecessityForm::Hole => f.clone(),
            NecessityForm::Implies(g, inner) => {
                Formula::implies(g.clone(), inner.instantiate(f))
            }
            NecessityForm::Know(i, inner) => Formula::know(i.clone(), inner.instantiate(f)),
            NecessityForm::Int(inner) => Formula::int(inner.instantiate(f)),
            NecessityForm::Announce(g, inner) => {
                Formula::announce(g.clone(), inner.instantiate(f))
            }
        }
    }
}

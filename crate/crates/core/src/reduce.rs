//! Translation of announcement formulas into the announcement-free
//! epistemic fragment.
//!
//! The translation is a structural recursion keyed on the shape of the
//! announced formula, applying one rewrite per announcement:
//!
//! ```text
//! R1  [f]p        ->  int(f) -> p
//! R2  [f]~g       ->  int(f) -> ~[f]g
//! R3  [f](g & h)  ->  [f]g & [f]h
//! R4  [f]int(g)   ->  int(f) -> int([f]g)
//! R5  [f]K_i g    ->  int(f) -> K_i [f]g
//! R6  [f][g]h     ->  [~[f]~int(g)]h
//! ```
//!
//! Every rewrite strictly shrinks the announcement being eliminated under
//! the (box-depth, size) lexicographic measure; the recursion asserts this
//! at each step and the trace records the measures.

use crate::formula::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("formula contains the arbitrary-announcement box and cannot be reduced")]
    ContainsBox,
    #[error("rewrite {rule:?} failed to shrink the measure: {before} -> {after}")]
    MeasureViolation {
        rule: RuleId,
        before: String,
        after: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One announcement elimination: which rule fired, the redex, its rewrite,
/// and the (box-depth, size) measures of the key rewritten announcement
/// before and after.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub rule: RuleId,
    pub before: Formula,
    pub after: Formula,
    pub measure_before: (u32, u64),
    pub measure_after: (u32, u64),
}

fn lex_less(a: (u32, u64), b: (u32, u64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Pick the rewrite for `[phi]psi` and the subproblem whose measure the
/// step is charged against.
fn step(phi: &Formula, psi: &Formula) -> (RuleId, Formula, Formula) {
    let ann = |p: &Formula, q: &Formula| Formula::announce(p.clone(), q.clone());
    match psi {
        Formula::Atom(_) => {
            let after = Formula::implies(Formula::int(phi.clone()), psi.clone());
            (RuleId::R1, after, psi.clone())
        }
        Formula::Not(g) => {
            let inner = Formula::not(ann(phi, g));
            let after = Formula::implies(Formula::int(phi.clone()), inner.clone());
            (RuleId::R2, after, inner)
        }
        Formula::And(g, h) => {
            let left = ann(phi, g);
            let right = ann(phi, h);
            let charged = if lex_less(right.measure(), left.measure()) {
                left.clone()
            } else {
                right.clone()
            };
            (RuleId::R3, Formula::and(left, right), charged)
        }
        Formula::Int(g) => {
            let inner = Formula::int(ann(phi, g));
            let after = Formula::implies(Formula::int(phi.clone()), inner.clone());
            (RuleId::R4, after, inner)
        }
        Formula::Know(i, g) => {
            let inner = Formula::know(i.clone(), ann(phi, g));
            let after = Formula::implies(Formula::int(phi.clone()), inner.clone());
            (RuleId::R5, after, inner)
        }
        Formula::Announce(g, h) => {
            let lifted = Formula::not(ann(phi, &Formula::not(Formula::int((**g).clone()))));
            let after = Formula::announce(lifted, (**h).clone());
            (RuleId::R6, after.clone(), after)
        }
        Formula::Box(_) => unreachable!("box-freeness is checked before reduction"),
    }
}

fn reduce_inner(f: &Formula, trace: &mut Vec<TraceStep>) -> Result<Formula, ReduceError> {
    match f {
        Formula::Atom(_) => Ok(f.clone()),
        Formula::Not(g) => Ok(Formula::not(reduce_inner(g, trace)?)),
        Formula::And(g, h) => Ok(Formula::and(
            reduce_inner(g, trace)?,
            reduce_inner(h, trace)?,
        )),
        Formula::Know(i, g) => Ok(Formula::know(i.clone(), reduce_inner(g, trace)?)),
        Formula::Int(g) => Ok(Formula::int(reduce_inner(g, trace)?)),
        Formula::Box(_) => Err(ReduceError::ContainsBox),
        Formula::Announce(phi, psi) => {
            let (rule, after, charged) = step(phi, psi);
            let before_measure = f.measure();
            let charged_measure = charged.measure();
            if !lex_less(charged_measure, before_measure) {
                return Err(ReduceError::MeasureViolation {
                    rule,
                    before: f.to_string(),
                    after: charged.to_string(),
                });
            }
            trace.push(TraceStep {
                rule,
                before: f.clone(),
                after: after.clone(),
                measure_before: before_measure,
                measure_after: charged_measure,
            });
            reduce_inner(&after, trace)
        }
    }
}

/// Translate a box-free formula to an equivalent announcement-free one.
pub fn reduce_to_el(f: &Formula) -> Result<Formula, ReduceError> {
    let mut trace = Vec::new();
    reduce_with_trace(f, &mut trace)
}

/// As `reduce_to_el`, returning every announcement-elimination step.
pub fn reduction_trace(f: &Formula) -> Result<(Formula, Vec<TraceStep>), ReduceError> {
    let mut trace = Vec::new();
    let out = reduce_with_trace(f, &mut trace)?;
    Ok((out, trace))
}

fn reduce_with_trace(f: &Formula, trace: &mut Vec<TraceStep>) -> Result<Formula, ReduceError> {
    if f.box_depth() != 0 {
        return Err(ReduceError::ContainsBox);
    }
    let out = reduce_inner(f, trace)?;
    debug_assert!(out.is_el());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn r1_example() {
        let f = parse("[p] q").unwrap();
        let reduced = reduce_to_el(&f).unwrap();
        assert_eq!(reduced, parse("int(p) -> q").unwrap());
    }

    #[test]
    fn r5_then_r1() {
        let f = parse("[p] K_a q").unwrap();
        let reduced = reduce_to_el(&f).unwrap();
        assert_eq!(reduced, parse("int(p) -> K_a (int(p) -> q)").unwrap());
    }

    #[test]
    fn trace_rules_and_measures() {
        let (_, trace) = reduction_trace(&parse("[p] q").unwrap()).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].rule, RuleId::R1);

        let (_, trace) = reduction_trace(&parse("[p] ~q").unwrap()).unwrap();
        let rules: Vec<RuleId> = trace.iter().map(|s| s.rule).collect();
        assert_eq!(rules, vec![RuleId::R2, RuleId::R1]);

        let (_, trace) = reduction_trace(&parse("[p][q] r").unwrap()).unwrap();
        assert_eq!(trace[0].rule, RuleId::R6);
        for step in &trace {
            assert!(lex_less(step.measure_after, step.measure_before));
        }
    }

    #[test]
    fn nested_announcement_goes_through_r6() {
        let f = parse("[p][q] r").unwrap();
        let reduced = reduce_to_el(&f).unwrap();
        let via_r6 = reduce_to_el(&parse("[~[p]~int(q)] r").unwrap()).unwrap();
        assert_eq!(reduced, via_r6);
        assert!(reduced.is_el());
    }

    #[test]
    fn box_is_rejected() {
        assert_eq!(
            reduce_to_el(&parse("box p").unwrap()),
            Err(ReduceError::ContainsBox)
        );
        assert_eq!(
            reduce_to_el(&parse("[box p] q").unwrap()),
            Err(ReduceError::ContainsBox)
        );
    }

    #[test]
    fn idempotent() {
        for text in ["[p] q", "[p & ~q] K_a int(p)", "[p][q] (r & K_a r)"] {
            let once = reduce_to_el(&parse(text).unwrap()).unwrap();
            let twice = reduce_to_el(&once).unwrap();
            assert_eq!(once, twice);
        }
    }
}

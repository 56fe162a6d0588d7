//! The recursive satisfaction relation, extensions, updates, definable-open
//! families, and validity checking.
//!
//! The arbitrary-announcement box quantifies over announcements of box-free
//! formulas. On a finite model an announcement only matters through the
//! open set the update restricts to, and those opens are exactly the open
//! members of the family of epistemically definable subsets relative to the
//! current neighbourhood function. Evaluation therefore closes the atom
//! extensions under relative complement, intersection, the knowledge
//! operator, and interior, and quantifies over the open members. Each
//! member carries a box- and announcement-free witness formula that
//! evaluates back to it, which both certifies the construction and supplies
//! a concrete announcement realizing the update.

use crate::formula::{Formula, BOT_ATOM};
use crate::model::{NeighbourhoodFunction, Situation, TopoModel};
use crate::topology::Mask;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoxMode {
    /// Quantify over updates definable by announcement (the logic's box).
    #[default]
    Announcement,
    /// Quantify over all opens containing the point, in the style of the
    /// subset-space effort modality.
    Effort,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("evaluation point is outside the domain of the neighbourhood function")]
    OutsideDomain,
    #[error("unknown agent '{0}'")]
    UnknownAgent(String),
    #[error("unknown proposition '{0}'")]
    UnknownProposition(String),
}

/// The definable subsets of a domain, each with a witness formula whose
/// extension reproduces it.
#[derive(Debug, Clone)]
pub struct DefinableFamily {
    members: Vec<(Mask, Formula)>,
    index: HashMap<Mask, usize>,
}

impl DefinableFamily {
    pub fn members(&self) -> &[(Mask, Formula)] {
        &self.members
    }

    pub fn contains(&self, s: Mask) -> bool {
        self.index.contains_key(&s)
    }

    pub fn witness(&self, s: Mask) -> Option<&Formula> {
        self.index.get(&s).map(|&i| &self.members[i].1)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Evaluation context: a model, a box mode, and a memo of definable
/// families keyed by extensional function identity. The cache only avoids
/// recomputation; results never depend on it.
pub struct Evaluator<'a> {
    model: &'a TopoModel,
    mode: BoxMode,
    families: RefCell<HashMap<NeighbourhoodFunction, Rc<DefinableFamily>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(model: &'a TopoModel, mode: BoxMode) -> Self {
        Evaluator {
            model,
            mode,
            families: RefCell::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &TopoModel {
        self.model
    }

    pub fn mode(&self) -> BoxMode {
        self.mode
    }

    /// Truth at the situation `(x, theta)`.
    pub fn evaluate(
        &self,
        theta: &NeighbourhoodFunction,
        x: usize,
        f: &Formula,
    ) -> Result<bool, EvalError> {
        if !theta.contains(x) {
            return Err(EvalError::OutsideDomain);
        }
        match f {
            Formula::Atom(p) => {
                if p == BOT_ATOM {
                    return Ok(false);
                }
                let set = self
                    .model
                    .valuation
                    .get(p)
                    .ok_or_else(|| EvalError::UnknownProposition(p.clone()))?;
                Ok(set & (1 << x) != 0)
            }
            Formula::Not(g) => Ok(!self.evaluate(theta, x, g)?),
            Formula::And(g, h) => Ok(self.evaluate(theta, x, g)? && self.evaluate(theta, x, h)?),
            Formula::Know(agent, g) => {
                let i = self
                    .model
                    .agent_index(agent)
                    .ok_or_else(|| EvalError::UnknownAgent(agent.clone()))?;
                let cell = theta.get(x, i);
                for y in self.model.space().iter_points(cell) {
                    if !self.evaluate(theta, y, g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Int(g) => {
                let ext = self.extension(theta, g)?;
                let interior = self
                    .model
                    .topology()
                    .interior(ext)
                    .expect("extension is a subset of the space");
                Ok(interior & (1 << x) != 0)
            }
            Formula::Announce(g, h) => {
                let updated = self.update(theta, g)?;
                if !updated.contains(x) {
                    // the announcement cannot (truthfully) be made here
                    return Ok(true);
                }
                self.evaluate(&updated, x, h)
            }
            Formula::Box(g) => match self.mode {
                BoxMode::Announcement => {
                    let family = self.definable_family(theta);
                    for (u, _) in family.members() {
                        if self.model.topology().is_open(*u) && u & (1 << x) != 0 {
                            let restricted = theta.restrict_unchecked(*u);
                            if !self.evaluate(&restricted, x, g)? {
                                return Ok(false);
                            }
                        }
                    }
                    Ok(true)
                }
                BoxMode::Effort => {
                    let dom = theta.domain();
                    for &u in self.model.topology().opens() {
                        if u & (1 << x) != 0 && u & !dom == 0 {
                            let restricted = theta.restrict_unchecked(u);
                            if !self.evaluate(&restricted, x, g)? {
                                return Ok(false);
                            }
                        }
                    }
                    Ok(true)
                }
            },
        }
    }

    /// The set of domain points satisfying `f` under `theta`.
    pub fn extension(
        &self,
        theta: &NeighbourhoodFunction,
        f: &Formula,
    ) -> Result<Mask, EvalError> {
        let mut out = 0;
        for y in self.model.space().iter_points(theta.domain()) {
            if self.evaluate(theta, y, f)? {
                out |= 1 << y;
            }
        }
        Ok(out)
    }

    /// The updated function: `theta` restricted to the interior of the
    /// extension of `f`. May have an empty domain.
    pub fn update(
        &self,
        theta: &NeighbourhoodFunction,
        f: &Formula,
    ) -> Result<NeighbourhoodFunction, EvalError> {
        let ext = self.extension(theta, f)?;
        let interior = self
            .model
            .topology()
            .interior(ext)
            .expect("extension is a subset of the space");
        Ok(theta.restrict_unchecked(interior))
    }

    /// The least family over `Dom(theta)` containing the atom extensions,
    /// the empty set, and the domain, closed under relative complement,
    /// intersection, the per-agent knowledge operator, and interior.
    pub fn definable_family(&self, theta: &NeighbourhoodFunction) -> Rc<DefinableFamily> {
        if let Some(fam) = self.families.borrow().get(theta) {
            return Rc::clone(fam);
        }
        let fam = Rc::new(self.compute_family(theta));
        self.families
            .borrow_mut()
            .insert(theta.clone(), Rc::clone(&fam));
        fam
    }

    fn compute_family(&self, theta: &NeighbourhoodFunction) -> DefinableFamily {
        let topo = self.model.topology();
        let space = self.model.space();
        let dom = theta.domain();
        let num_agents = self.model.agents.len();

        let mut index: HashMap<Mask, usize> = HashMap::new();
        let mut members: Vec<(Mask, Formula)> = Vec::new();
        let mut worklist: Vec<usize> = Vec::new();
        let add = |members: &mut Vec<(Mask, Formula)>,
                       index: &mut HashMap<Mask, usize>,
                       worklist: &mut Vec<usize>,
                       s: Mask,
                       w: Formula| {
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(s) {
                e.insert(members.len());
                worklist.push(members.len());
                members.push((s, w));
            }
        };

        add(&mut members, &mut index, &mut worklist, 0, Formula::bot());
        add(
            &mut members,
            &mut index,
            &mut worklist,
            dom,
            Formula::not(Formula::bot()),
        );
        let mut props: Vec<(&String, &Mask)> = self.model.valuation.iter().collect();
        props.sort();
        for (prop, &set) in props {
            add(
                &mut members,
                &mut index,
                &mut worklist,
                set & dom,
                Formula::atom(prop.clone()),
            );
        }

        while let Some(idx) = worklist.pop() {
            let (s, w) = members[idx].clone();
            let mut new: Vec<(Mask, Formula)> = Vec::new();
            new.push((dom & !s, Formula::not(w.clone())));
            let interior = topo.interior(s).expect("member is a subset of the space");
            new.push((interior, Formula::int(w.clone())));
            for i in 0..num_agents {
                let mut ks = 0;
                for x in space.iter_points(dom) {
                    if theta.get(x, i) & !s == 0 {
                        ks |= 1 << x;
                    }
                }
                new.push((ks, Formula::know(self.model.agents[i].clone(), w.clone())));
            }
            for (t, wt) in &members {
                if !index.contains_key(&(s & t)) {
                    new.push((s & t, Formula::and(w.clone(), wt.clone())));
                }
            }
            for (s2, w2) in new {
                add(&mut members, &mut index, &mut worklist, s2, w2);
            }
        }

        DefinableFamily { members, index }
    }

    /// Truth at every situation over the induced function set.
    pub fn valid_in_model(&self, f: &Formula) -> Result<bool, EvalError> {
        for theta in self.model.frame.enumerate_phi() {
            for x in self.model.space().iter_points(theta.domain()) {
                if !self.evaluate(&theta, x, f)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// One-shot convenience wrappers matching the operation surface.
pub fn evaluate(
    model: &TopoModel,
    situation: &Situation,
    f: &Formula,
    mode: BoxMode,
) -> Result<bool, EvalError> {
    Evaluator::new(model, mode).evaluate(&situation.theta, situation.point, f)
}

pub fn extension(
    model: &TopoModel,
    theta: &NeighbourhoodFunction,
    f: &Formula,
    mode: BoxMode,
) -> Result<Mask, EvalError> {
    Evaluator::new(model, mode).extension(theta, f)
}

pub fn update(
    model: &TopoModel,
    theta: &NeighbourhoodFunction,
    f: &Formula,
) -> Result<NeighbourhoodFunction, EvalError> {
    Evaluator::new(model, BoxMode::Announcement).update(theta, f)
}

pub fn valid_in_model(model: &TopoModel, f: &Formula, mode: BoxMode) -> Result<bool, EvalError> {
    Evaluator::new(model, mode).valid_in_model(f)
}

/// Search for a situation and formula where announcement- and effort-mode
/// evaluation disagree. `None` means the search found nothing; it never
/// establishes that no disagreement exists.
pub fn find_distinguishing(
    model: &TopoModel,
    candidates: &[Formula],
) -> Result<Option<(Situation, Formula)>, EvalError> {
    let announcement = Evaluator::new(model, BoxMode::Announcement);
    let effort = Evaluator::new(model, BoxMode::Effort);
    for theta in model.frame.enumerate_phi() {
        for x in model.space().iter_points(theta.domain()) {
            for f in candidates {
                let a = announcement.evaluate(&theta, x, f)?;
                let e = effort.evaluate(&theta, x, f)?;
                if a != e {
                    return Ok(Some((
                        Situation {
                            point: x,
                            theta: theta.clone(),
                        },
                        f.clone(),
                    )));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::jewel_model;

    fn eval_at(model: &TopoModel, theta_name: &str, point: &str, text: &str) -> bool {
        let theta = model.generator(theta_name).unwrap().func.clone();
        let x = model.space().index_of(point).unwrap();
        let f = parse(text).unwrap();
        Evaluator::new(model, BoxMode::Announcement)
            .evaluate(&theta, x, &f)
            .unwrap()
    }

    #[test]
    fn jewel_basic_knowledge() {
        let m = jewel_model();
        assert!(eval_at(&m, "thetaPrime", "111", "K_e t"));
        assert!(eval_at(&m, "thetaPrime", "111", "K_e ~(K_i ~t | K_i t)"));
        assert!(eval_at(&m, "thetaPrime", "111", "K_e Khat_i ~(K_e t | K_e ~t)"));
    }

    #[test]
    fn jewel_announcement_of_jewel() {
        let m = jewel_model();
        assert!(eval_at(
            &m,
            "thetaPrime",
            "111",
            "[j] (K_e (j & d & t) & K_i (j & d) & ~K_i (t | K_i ~t))"
        ));
    }

    #[test]
    fn jewel_diamond_learn_everything() {
        let m = jewel_model();
        assert!(eval_at(
            &m,
            "theta",
            "111",
            "dia (K_e (j & d & t) & K_i (j & d & t))"
        ));
    }

    #[test]
    fn jewel_extensions() {
        let m = jewel_model();
        let sp = m.space();
        let ev = Evaluator::new(&m, BoxMode::Announcement);
        let theta = &m.generator("thetaPrime").unwrap().func;
        // [[j]] within the full domain, then its interior
        let j = parse("j").unwrap();
        assert_eq!(
            ev.extension(theta, &j).unwrap(),
            sp.mask_from_ids(["100", "101", "110", "111"]).unwrap()
        );
        let int_j = parse("int(j)").unwrap();
        assert_eq!(
            ev.extension(theta, &int_j).unwrap(),
            sp.mask_from_ids(["111", "110"]).unwrap()
        );
        let falsum = parse("false").unwrap();
        assert_eq!(ev.extension(theta, &falsum).unwrap(), 0);
    }

    #[test]
    fn jewel_update_by_jewel() {
        let m = jewel_model();
        let sp = m.space();
        let ev = Evaluator::new(&m, BoxMode::Announcement);
        let theta = &m.generator("thetaPrime").unwrap().func;
        let updated = ev.update(theta, &parse("j").unwrap()).unwrap();
        assert_eq!(updated.domain(), sp.mask_from_ids(["111", "110"]).unwrap());
        let x111 = sp.index_of("111").unwrap();
        let e = m.agent_index("e").unwrap();
        let i = m.agent_index("i").unwrap();
        assert_eq!(updated.get(x111, e), sp.mask_from_ids(["111"]).unwrap());
        assert_eq!(
            updated.get(x111, i),
            sp.mask_from_ids(["111", "110"]).unwrap()
        );
    }

    #[test]
    fn update_by_tautology_is_identity() {
        let m = jewel_model();
        let ev = Evaluator::new(&m, BoxMode::Announcement);
        let theta = &m.generator("theta").unwrap().func;
        let updated = ev.update(theta, &parse("j | ~j").unwrap()).unwrap();
        assert_eq!(&updated, theta);
    }

    #[test]
    fn jewel_family_covers_all_opens() {
        let m = jewel_model();
        let ev = Evaluator::new(&m, BoxMode::Announcement);
        for gen in &m.frame.generators {
            let family = ev.definable_family(&gen.func);
            for &u in m.topology().opens() {
                assert!(family.contains(u), "open {u:#b} missing from family");
            }
        }
    }

    #[test]
    fn family_witnesses_evaluate_back() {
        let m = jewel_model();
        let ev = Evaluator::new(&m, BoxMode::Announcement);
        let theta = &m.generator("thetaPrime").unwrap().func;
        let family = ev.definable_family(theta);
        for (s, w) in family.members() {
            assert!(w.is_el());
            assert_eq!(ev.extension(theta, w).unwrap(), *s, "witness {w} drifted");
        }
    }

    #[test]
    fn indiscrete_family_is_trivial() {
        // indiscrete topology, one agent with cell X, no atoms
        use crate::model::{Generator, TopoFrame};
        use crate::topology::{PointSet, Topology};
        let sp = PointSet::new(vec!["x".into(), "y".into()]).unwrap();
        let full = sp.full();
        let topology = Topology::indiscrete(sp);
        let func = NeighbourhoodFunction::new(full, 1, vec![vec![full], vec![full]]);
        let m = TopoModel {
            frame: TopoFrame {
                topology,
                generators: vec![Generator {
                    name: "g".into(),
                    func: func.clone(),
                }],
            },
            agents: vec!["a".into()],
            valuation: HashMap::new(),
        };
        let ev = Evaluator::new(&m, BoxMode::Announcement);
        let family = ev.definable_family(&func);
        assert_eq!(family.len(), 2);
        assert!(family.contains(0) && family.contains(full));
    }

    #[test]
    fn jewel_modelwide_validities() {
        let m = jewel_model();
        let checks = [
            "~d -> box (~(K_e j | K_e ~j) & ~(K_e t | K_e ~t))",
            "[j] false <-> ~int(j)",
            "K_i j -> int(j)",
        ];
        for text in checks {
            let f = parse(text).unwrap();
            assert!(
                valid_in_model(&m, &f, BoxMode::Announcement).unwrap(),
                "{text} should be valid"
            );
        }
        // sanity: something invalid
        let f = parse("K_i t").unwrap();
        assert!(!valid_in_model(&m, &f, BoxMode::Announcement).unwrap());
    }

    #[test]
    fn jewel_modes_coincide() {
        // every open is definable on the jewel model, so the box modes agree
        let m = jewel_model();
        let candidates = [
            parse("box ~K_i t").unwrap(),
            parse("dia (K_e t & K_i t)").unwrap(),
            parse("box (d | ~K_e j)").unwrap(),
        ];
        assert!(find_distinguishing(&m, &candidates).unwrap().is_none());
    }

    #[test]
    fn errors_are_reported() {
        let m = jewel_model();
        let theta = m.generator("theta").unwrap().func.clone();
        let ev = Evaluator::new(&m, BoxMode::Announcement);
        let x = m.space().index_of("111").unwrap();
        assert_eq!(
            ev.evaluate(&theta, x, &parse("zzz").unwrap()),
            Err(EvalError::UnknownProposition("zzz".into()))
        );
        assert_eq!(
            ev.evaluate(&theta, x, &parse("K_bob j").unwrap()),
            Err(EvalError::UnknownAgent("bob".into()))
        );
        let empty = theta.restrict_unchecked(0);
        assert_eq!(
            ev.evaluate(&empty, x, &parse("j").unwrap()),
            Err(EvalError::OutsideDomain)
        );
    }
}

//! Random model and formula generation, axiom-schema instantiation, the
//! soundness suite, and an independent bounded-enumeration oracle for the
//! arbitrary-announcement box.

use crate::formula::Formula;
use crate::model::{
    Generator, ModelFile, NeighbourhoodFunction, Situation, TopoFrame, TopoModel,
};
use crate::semantics::{BoxMode, EvalError, Evaluator};
use crate::topology::{Mask, PointSet, Topology};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TestkitError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("random model construction failed after {0} retries")]
    ConstructionFailed(usize),
    #[error("schema R7 requires a box-free formula for chi, got '{0}'")]
    R7FragmentViolation(String),
    #[error("the box oracle needs a box formula, got '{0}'")]
    NotABox(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Deterministic generation parameters: the same seed and config always
/// produce the same models and formulas.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub max_points: usize,
    pub num_agents: usize,
    pub num_atoms: usize,
    pub max_formula_size: u64,
    pub subbase_density: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_points: 5,
            num_agents: 2,
            num_atoms: 2,
            max_formula_size: 8,
            subbase_density: 0.5,
        }
    }
}

const AGENT_NAMES: [&str; 3] = ["a", "b", "c"];
const ATOM_NAMES: [&str; 4] = ["p", "q", "r", "s"];

impl GenConfig {
    pub fn check(&self) -> Result<(), TestkitError> {
        if self.max_points == 0 || self.max_points > crate::topology::MAX_POINTS {
            return Err(TestkitError::InvalidConfig(format!(
                "max_points must be 1..={}",
                crate::topology::MAX_POINTS
            )));
        }
        if self.num_agents == 0 || self.num_agents > AGENT_NAMES.len() {
            return Err(TestkitError::InvalidConfig("num_agents must be 1..=3".into()));
        }
        if self.num_atoms == 0 || self.num_atoms > ATOM_NAMES.len() {
            return Err(TestkitError::InvalidConfig("num_atoms must be 1..=4".into()));
        }
        if self.max_formula_size == 0 {
            return Err(TestkitError::InvalidConfig(
                "max_formula_size must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.subbase_density) {
            return Err(TestkitError::InvalidConfig(
                "subbase_density must lie in [0,1]".into(),
            ));
        }
        Ok(())
    }

    fn agents(&self) -> Vec<String> {
        AGENT_NAMES[..self.num_agents]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn atoms(&self) -> Vec<String> {
        ATOM_NAMES[..self.num_atoms]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }
}

/// A random well-formed topo-model: topology from a random subbase,
/// per-agent generator partitions built by splitting cells along random
/// opens, random valuation.
pub fn random_model(cfg: &GenConfig) -> Result<TopoModel, TestkitError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = rng.gen_range(1..=cfg.max_points);
    let points: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let space = PointSet::new(points).expect("bounds checked");
    let full = space.full();

    let subbase_count = (cfg.subbase_density * (2 * n) as f64).round() as usize;
    let subbase: Vec<Mask> = (0..subbase_count)
        .map(|_| rng.gen_range(1..=full))
        .collect();
    let topology = Topology::from_subbase(space, &subbase).expect("subsets of the space");
    let opens: Vec<Mask> = topology.opens().to_vec();
    let space = topology.space().clone();

    let num_generators = rng.gen_range(1..=2);
    let mut generators = Vec::new();
    for g in 0..num_generators {
        let mut assign = vec![vec![0; cfg.num_agents]; space.len()];
        #[allow(clippy::needless_range_loop)] // agent indexes a column, not a row
        for agent in 0..cfg.num_agents {
            // partition of X into opens: start coarse and split cells along
            // random opens while both halves stay open
            let mut cells: Vec<Mask> = vec![full];
            for _ in 0..2 * n {
                let ci = rng.gen_range(0..cells.len());
                let cell = cells[ci];
                let u = opens[rng.gen_range(0..opens.len())];
                let inside = cell & u;
                let outside = cell & !u;
                if inside != 0 && outside != 0 && topology.is_open(outside) {
                    cells[ci] = inside;
                    cells.push(outside);
                }
            }
            for &cell in &cells {
                for x in space.iter_points(cell) {
                    assign[x][agent] = cell;
                }
            }
        }
        generators.push(Generator {
            name: format!("g{g}"),
            func: NeighbourhoodFunction::new(full, cfg.num_agents, assign),
        });
    }

    let valuation: HashMap<String, Mask> = cfg
        .atoms()
        .into_iter()
        .map(|p| (p, rng.gen_range(0..=full)))
        .collect();

    let model = TopoModel {
        frame: TopoFrame {
            topology,
            generators,
        },
        agents: cfg.agents(),
        valuation,
    };
    let violations = model.validate();
    if !violations.is_empty() {
        // construction is correct by design; surface loudly if it is not
        return Err(TestkitError::ConstructionFailed(violations.len()));
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    El,
    Pal,
    Apal,
}

/// A random formula of the given fragment with `size <= max_formula_size`,
/// over the atom and agent names used by `random_model`.
pub fn random_formula(cfg: &GenConfig, fragment: Fragment) -> Result<Formula, TestkitError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(gen_formula(
        &mut rng,
        cfg.max_formula_size,
        fragment,
        &cfg.atoms(),
        &cfg.agents(),
    ))
}

fn gen_formula(
    rng: &mut ChaCha8Rng,
    budget: u64,
    fragment: Fragment,
    atoms: &[String],
    agents: &[String],
) -> Formula {
    let atom = |rng: &mut ChaCha8Rng| Formula::atom(atoms[rng.gen_range(0..atoms.len())].clone());
    if budget <= 1 {
        return atom(rng);
    }
    // weighted connective choice; announcements need budget for the 4x
    // weighting of their body
    let mut choices: Vec<(u32, u8)> = vec![(2, 0), (3, 1), (3, 2), (3, 3), (2, 4)];
    if fragment != Fragment::El && budget >= 5 {
        choices.push((3, 5));
    }
    if fragment == Fragment::Apal {
        choices.push((1, 6));
    }
    let total: u32 = choices.iter().map(|(w, _)| w).sum();
    let mut pick = rng.gen_range(0..total);
    let mut kind = 0;
    for (w, k) in choices {
        if pick < w {
            kind = k;
            break;
        }
        pick -= w;
    }
    match kind {
        0 => atom(rng),
        1 => Formula::not(gen_formula(rng, budget - 1, fragment, atoms, agents)),
        2 => {
            let left = rng.gen_range(1..budget);
            Formula::and(
                gen_formula(rng, left, fragment, atoms, agents),
                gen_formula(rng, budget - left, fragment, atoms, agents),
            )
        }
        3 => Formula::know(
            agents[rng.gen_range(0..agents.len())].clone(),
            gen_formula(rng, budget - 1, fragment, atoms, agents),
        ),
        4 => Formula::int(gen_formula(rng, budget - 1, fragment, atoms, agents)),
        5 => {
            let body = rng.gen_range(1..=(budget - 1) / 4);
            Formula::announce(
                gen_formula(rng, budget - 4 * body, fragment, atoms, agents),
                gen_formula(rng, body, fragment, atoms, agents),
            )
        }
        _ => Formula::quant_box(gen_formula(rng, budget - 1, fragment, atoms, agents)),
    }
}

/// The axiom schemas and reduction axioms of the proof system, instantiated
/// over metavariable bindings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Schema {
    P,
    KK,
    KT,
    K4,
    K5,
    IntK,
    IntT,
    Int4,
    KInt,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
}

pub const ALL_SCHEMAS: [Schema; 16] = [
    Schema::P,
    Schema::KK,
    Schema::KT,
    Schema::K4,
    Schema::K5,
    Schema::IntK,
    Schema::IntT,
    Schema::Int4,
    Schema::KInt,
    Schema::R1,
    Schema::R2,
    Schema::R3,
    Schema::R4,
    Schema::R5,
    Schema::R6,
    Schema::R7,
];

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Metavariable bindings for schema instantiation. `prop` feeds the atom
/// slot of R1; `chi` must be box-free for R7.
#[derive(Debug, Clone)]
pub struct Bindings {
    pub phi: Formula,
    pub psi: Formula,
    pub chi: Formula,
    pub agent: String,
    pub prop: String,
}

pub fn instantiate_schema(schema: Schema, b: &Bindings) -> Result<Formula, TestkitError> {
    use Formula as F;
    let phi = || b.phi.clone();
    let psi = || b.psi.clone();
    let chi = || b.chi.clone();
    let know = |f| F::know(b.agent.clone(), f);
    Ok(match schema {
        // a propositional tautology template; every instantiation is valid
        Schema::P => F::and(
            F::or(phi(), F::not(phi())),
            F::implies(phi(), F::implies(psi(), phi())),
        ),
        Schema::KK => F::implies(
            know(F::implies(phi(), psi())),
            F::implies(know(phi()), know(psi())),
        ),
        Schema::KT => F::implies(know(phi()), phi()),
        Schema::K4 => F::implies(know(phi()), know(know(phi()))),
        Schema::K5 => F::implies(F::not(know(phi())), know(F::not(know(phi())))),
        Schema::IntK => F::implies(
            F::int(F::implies(phi(), psi())),
            F::implies(F::int(phi()), F::int(psi())),
        ),
        Schema::IntT => F::implies(F::int(phi()), phi()),
        Schema::Int4 => F::implies(F::int(phi()), F::int(F::int(phi()))),
        Schema::KInt => F::implies(know(phi()), F::int(phi())),
        Schema::R1 => F::iff(
            F::announce(phi(), F::atom(b.prop.clone())),
            F::implies(F::int(phi()), F::atom(b.prop.clone())),
        ),
        Schema::R2 => F::iff(
            F::announce(phi(), F::not(psi())),
            F::implies(F::int(phi()), F::not(F::announce(phi(), psi()))),
        ),
        Schema::R3 => F::iff(
            F::announce(phi(), F::and(psi(), chi())),
            F::and(F::announce(phi(), psi()), F::announce(phi(), chi())),
        ),
        Schema::R4 => F::iff(
            F::announce(phi(), F::int(psi())),
            F::implies(F::int(phi()), F::int(F::announce(phi(), psi()))),
        ),
        Schema::R5 => F::iff(
            F::announce(phi(), know(psi())),
            F::implies(F::int(phi()), know(F::announce(phi(), psi()))),
        ),
        Schema::R6 => F::iff(
            F::announce(phi(), F::announce(psi(), chi())),
            F::announce(
                F::not(F::announce(phi(), F::not(F::int(psi())))),
                chi(),
            ),
        ),
        Schema::R7 => {
            if b.chi.box_depth() != 0 {
                return Err(TestkitError::R7FragmentViolation(b.chi.to_string()));
            }
            F::implies(F::quant_box(phi()), F::announce(chi(), phi()))
        }
    })
}

#[derive(Debug, Serialize)]
pub struct SchemaFailure {
    pub seed: u64,
    pub model: ModelFile,
    pub instance: String,
}

#[derive(Debug, Serialize)]
pub struct SchemaReport {
    pub schema: Schema,
    pub trials: usize,
    pub failures: Vec<SchemaFailure>,
}

#[derive(Debug, Serialize)]
pub struct SoundnessReport {
    pub schemas: Vec<SchemaReport>,
    /// necessitation-style rule checks: premises found valid whose
    /// conclusions under DR2/DR3/DR4 were not
    pub rule_failures: Vec<SchemaFailure>,
    pub trials: usize,
}

impl SoundnessReport {
    pub fn total_failures(&self) -> usize {
        self.schemas.iter().map(|s| s.failures.len()).sum::<usize>()
            + self.rule_failures.len()
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.schemas {
            writeln!(
                f,
                "{:?}: {}/{} trials valid{}",
                s.schema,
                s.trials - s.failures.len(),
                s.trials,
                if s.failures.is_empty() { "" } else { " FAIL" }
            )?;
            for fail in &s.failures {
                writeln!(f, "  seed {}: counterexample instance {}", fail.seed, fail.instance)?;
            }
        }
        writeln!(
            f,
            "rule preservation: {} failure(s)",
            self.rule_failures.len()
        )?;
        Ok(())
    }
}

/// Check every schema on random (model, bindings) pairs, plus DR2/DR3/DR4
/// preservation spot checks. Failures are report content, not errors.
pub fn soundness_suite(cfg: &GenConfig, trials: usize) -> Result<SoundnessReport, TestkitError> {
    cfg.check()?;
    let mut per_schema: Vec<SchemaReport> = ALL_SCHEMAS
        .iter()
        .map(|&schema| SchemaReport {
            schema,
            trials,
            failures: Vec::new(),
        })
        .collect();
    let mut rule_failures = Vec::new();

    for trial in 0..trials {
        let seed = cfg.seed.wrapping_add(trial as u64);
        let trial_cfg = GenConfig { seed, ..cfg.clone() };
        let model = random_model(&trial_cfg)?;
        let bindings = random_bindings(&trial_cfg);
        let ev = Evaluator::new(&model, BoxMode::Announcement);
        for (i, &schema) in ALL_SCHEMAS.iter().enumerate() {
            let instance = instantiate_schema(schema, &bindings)?;
            if !ev.valid_in_model(&instance)? {
                per_schema[i].failures.push(SchemaFailure {
                    seed,
                    model: model.to_file(),
                    instance: instance.to_string(),
                });
            }
        }
        // DR2/DR3/DR4: validity of phi must be preserved by K_i, int, [psi]
        let premise = bindings.phi.clone();
        if ev.valid_in_model(&premise)? {
            let conclusions = [
                Formula::know(bindings.agent.clone(), premise.clone()),
                Formula::int(premise.clone()),
                Formula::announce(bindings.psi.clone(), premise.clone()),
            ];
            for conclusion in conclusions {
                if !ev.valid_in_model(&conclusion)? {
                    rule_failures.push(SchemaFailure {
                        seed,
                        model: model.to_file(),
                        instance: conclusion.to_string(),
                    });
                }
            }
        }
    }

    Ok(SoundnessReport {
        schemas: per_schema,
        rule_failures,
        trials,
    })
}

/// Random metavariable bindings over the names used by `random_model`:
/// `phi` and `psi` range over the full language, `chi` stays box-free so
/// every binding set is admissible for R7.
pub fn random_bindings(cfg: &GenConfig) -> Bindings {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let atoms = cfg.atoms();
    let agents = cfg.agents();
    let size = cfg.max_formula_size.min(6);
    Bindings {
        phi: gen_formula(&mut rng, size, Fragment::Apal, &atoms, &agents),
        psi: gen_formula(&mut rng, size, Fragment::Apal, &atoms, &agents),
        chi: gen_formula(&mut rng, size, Fragment::Pal, &atoms, &agents),
        agent: agents[rng.gen_range(0..agents.len())].clone(),
        prop: atoms[rng.gen_range(0..atoms.len())].clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    True,
    False,
    Unknown,
}

/// Decide `box g` at a situation by literally enumerating announcements:
/// box- and announcement-free formulas over the model's atoms and agents,
/// breadth-first by size up to `bound`, deduplicated by extension under the
/// situation's function (composition of the epistemic connectives only
/// depends on argument extensions, so this loses nothing).
///
/// Returns `False` as soon as some announcement refutes `g`; `True` once
/// the realized updates cover every open member of the definable family
/// with no refutation; `Unknown` if the bound runs out first.
pub fn box_oracle(
    model: &TopoModel,
    situation: &Situation,
    f: &Formula,
    bound: u64,
) -> Result<OracleVerdict, TestkitError> {
    let body = match f {
        Formula::Box(g) => g,
        _ => return Err(TestkitError::NotABox(f.to_string())),
    };
    let theta = &situation.theta;
    let x = situation.point;
    let topo = model.topology();
    let space = model.space();
    let dom = theta.domain();
    let ev = Evaluator::new(model, BoxMode::Announcement);

    // extension classes of announcement-free formulas, by minimal size
    let mut class_of: HashMap<Mask, Formula> = HashMap::new();
    let mut by_size: Vec<Vec<Mask>> = vec![Vec::new(); (bound + 1) as usize];
    let mut realized: HashSet<Mask> = HashSet::new();

    let mut props: Vec<(&String, &Mask)> = model.valuation.iter().collect();
    props.sort();

    for size in 1..=bound {
        // candidates of this exact size, in a deterministic order
        let mut candidates: Vec<(Mask, Formula)> = Vec::new();
        if size == 1 {
            for (p, &set) in &props {
                candidates.push((set & dom, Formula::atom((*p).clone())));
            }
        }
        if size >= 2 {
            for &e in &by_size[(size - 1) as usize] {
                let w = class_of[&e].clone();
                candidates.push((dom & !e, Formula::not(w.clone())));
                let interior = topo.interior(e).expect("subset of the space");
                candidates.push((interior, Formula::int(w.clone())));
                for (i, agent) in model.agents.iter().enumerate() {
                    let mut ks = 0;
                    for y in space.iter_points(dom) {
                        if theta.get(y, i) & !e == 0 {
                            ks |= 1 << y;
                        }
                    }
                    candidates.push((ks, Formula::know(agent.clone(), w.clone())));
                }
            }
            for left in 1..size {
                let right = size - left;
                if right < left {
                    break;
                }
                for &e1 in &by_size[left as usize] {
                    for &e2 in &by_size[right as usize] {
                        candidates.push((
                            e1 & e2,
                            Formula::and(class_of[&e1].clone(), class_of[&e2].clone()),
                        ));
                    }
                }
            }
        }
        candidates.sort_by_key(|(_, f)| f.to_string());
        for (ext, witness) in candidates {
            if class_of.contains_key(&ext) {
                continue;
            }
            class_of.insert(ext, witness);
            by_size[size as usize].push(ext);
            let update = topo.interior(ext).expect("subset of the space");
            if realized.insert(update) && update & (1 << x) != 0 {
                let restricted = theta.restrict_unchecked(update);
                if !ev.evaluate(&restricted, x, body)? {
                    return Ok(OracleVerdict::False);
                }
            }
        }
    }

    let family = ev.definable_family(theta);
    let family_opens: HashSet<Mask> = family
        .members()
        .iter()
        .map(|(s, _)| *s)
        .filter(|&s| topo.is_open(s))
        .collect();
    if realized == family_opens {
        Ok(OracleVerdict::True)
    } else {
        Ok(OracleVerdict::Unknown)
    }
}

/// Outcome of a semantic spot check of the infinitary announcement rule on
/// one (context, formula) pair.
#[derive(Debug, Clone, Copy)]
pub struct Dr5Outcome {
    /// the boxed conclusion is valid in the model
    pub box_valid: bool,
    /// every enumerated announcement instance of the premise is valid
    pub instances_valid: bool,
    /// the enumerated announcements realize every definable update for
    /// every function in the model; when true, the two flags must agree
    pub closure_complete: bool,
}

/// Compare validity of `xi(box chi)` against validity of `xi([psi]chi)`
/// for announcement-free `psi` enumerated up to `bound`.
pub fn dr5_spot_check(
    model: &TopoModel,
    xi: &crate::formula::NecessityForm,
    chi: &Formula,
    bound: u64,
) -> Result<Dr5Outcome, TestkitError> {
    let ev = Evaluator::new(model, BoxMode::Announcement);
    let topo = model.topology();
    let phi_set = model.frame.enumerate_phi();

    // enumerate announcement candidates per theta and pool the witnesses
    let mut witnesses: Vec<Formula> = Vec::new();
    let mut seen = HashSet::new();
    let mut closure_complete = true;
    for theta in &phi_set {
        let family = ev.definable_family(theta);
        let mut realized = HashSet::new();
        for (s, w) in family.members() {
            if w.size() <= bound {
                let update = topo.interior(*s).expect("subset of the space");
                realized.insert(update);
                if seen.insert(w.clone()) {
                    witnesses.push(w.clone());
                }
            }
        }
        let opens: HashSet<Mask> = family
            .members()
            .iter()
            .map(|(s, _)| *s)
            .filter(|&s| topo.is_open(s))
            .collect();
        if realized != opens {
            closure_complete = false;
        }
    }

    let box_valid = ev.valid_in_model(&xi.instantiate(&Formula::quant_box(chi.clone())))?;
    let mut instances_valid = true;
    for w in &witnesses {
        let instance = xi.instantiate(&Formula::announce(w.clone(), chi.clone()));
        if !ev.valid_in_model(&instance)? {
            instances_valid = false;
            break;
        }
    }
    Ok(Dr5Outcome {
        box_valid,
        instances_valid,
        closure_complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::formula::NecessityForm;
    use crate::model::jewel_model;
    use crate::semantics::evaluate;

    #[test]
    fn random_model_is_deterministic_and_wellformed() {
        for seed in 0..20 {
            let cfg = GenConfig { seed, ..GenConfig::default() };
            let a = random_model(&cfg).unwrap();
            let b = random_model(&cfg).unwrap();
            assert_eq!(a.to_string(), b.to_string());
            assert!(a.validate().is_empty());
        }
    }

    #[test]
    fn one_point_model() {
        let cfg = GenConfig { max_points: 1, ..GenConfig::default() };
        let m = random_model(&cfg).unwrap();
        assert_eq!(m.space().len(), 1);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn config_bounds_are_enforced() {
        let bad = GenConfig { max_points: 13, ..GenConfig::default() };
        assert!(matches!(random_model(&bad), Err(TestkitError::InvalidConfig(_))));
        let bad = GenConfig { num_agents: 0, ..GenConfig::default() };
        assert!(matches!(random_model(&bad), Err(TestkitError::InvalidConfig(_))));
        let bad = GenConfig { subbase_density: 1.5, ..GenConfig::default() };
        assert!(matches!(random_model(&bad), Err(TestkitError::InvalidConfig(_))));
    }

    #[test]
    fn random_formula_respects_fragment_and_size() {
        for seed in 0..50 {
            let cfg = GenConfig { seed, max_formula_size: 12, ..GenConfig::default() };
            let el = random_formula(&cfg, Fragment::El).unwrap();
            assert!(el.is_el());
            assert!(el.size() <= 12, "{el} has size {}", el.size());
            let pal = random_formula(&cfg, Fragment::Pal).unwrap();
            assert!(pal.is_pal());
            assert!(pal.size() <= 12);
            let apal = random_formula(&cfg, Fragment::Apal).unwrap();
            assert!(apal.size() <= 12);
        }
    }

    fn bindings(phi: &str, psi: &str, chi: &str) -> Bindings {
        Bindings {
            phi: parse(phi).unwrap(),
            psi: parse(psi).unwrap(),
            chi: parse(chi).unwrap(),
            agent: "a".into(),
            prop: "p".into(),
        }
    }

    #[test]
    fn schema_instances_match_concrete_syntax() {
        let b = bindings("p", "q", "r");
        let r2 = instantiate_schema(Schema::R2, &b).unwrap();
        assert_eq!(r2, parse("[p]~q <-> (int(p) -> ~[p]q)").unwrap());
        let r6 = instantiate_schema(Schema::R6, &b).unwrap();
        assert_eq!(r6, parse("[p][q]r <-> [~[p]~int(q)]r").unwrap());
        let kt = instantiate_schema(Schema::KT, &b).unwrap();
        assert_eq!(kt, parse("K_a p -> p").unwrap());
    }

    #[test]
    fn r7_requires_box_free_chi() {
        let b = bindings("p", "q", "box r");
        assert!(matches!(
            instantiate_schema(Schema::R7, &b),
            Err(TestkitError::R7FragmentViolation(_))
        ));
        let b = bindings("box p", "q", "r");
        assert!(instantiate_schema(Schema::R7, &b).is_ok());
    }

    #[test]
    fn soundness_suite_finds_no_counterexamples() {
        let cfg = GenConfig { seed: 7, max_points: 4, max_formula_size: 5, ..GenConfig::default() };
        let report = soundness_suite(&cfg, 5).unwrap();
        assert_eq!(report.total_failures(), 0, "{report}");
        assert_eq!(report.schemas.len(), ALL_SCHEMAS.len());
        // the report serializes
        serde_json::to_string(&report).unwrap();
    }

    #[test]
    fn oracle_refutes_and_agrees_with_evaluator() {
        let m = jewel_model();
        let theta = m.generator("theta").unwrap().func.clone();
        let x = m.space().index_of("111").unwrap();
        let s = Situation { point: x, theta };
        // announcing j & d & t leaves only 111, where K_e t holds
        let f = parse("box ~K_e t").unwrap();
        assert_eq!(box_oracle(&m, &s, &f, 4).unwrap(), OracleVerdict::False);
        assert!(!evaluate(&m, &s, &f, BoxMode::Announcement).unwrap());
    }

    #[test]
    fn oracle_is_honest_about_small_bounds() {
        let m = jewel_model();
        let theta = m.generator("theta").unwrap().func.clone();
        let x = m.space().index_of("111").unwrap();
        let s = Situation { point: x, theta };
        let f = parse("box (j | ~j)").unwrap();
        assert_eq!(box_oracle(&m, &s, &f, 1).unwrap(), OracleVerdict::Unknown);
    }

    #[test]
    fn oracle_rejects_non_box() {
        let m = jewel_model();
        let theta = m.generator("theta").unwrap().func.clone();
        let s = Situation { point: 0, theta };
        assert!(matches!(
            box_oracle(&m, &s, &parse("j").unwrap(), 3),
            Err(TestkitError::NotABox(_))
        ));
    }

    #[test]
    fn dr5_spot_check_is_consistent_on_jewel() {
        let m = jewel_model();
        for chi in ["j | ~j", "int(j) -> j", "K_e t"] {
            let out =
                dr5_spot_check(&m, &NecessityForm::Hole, &parse(chi).unwrap(), u64::MAX).unwrap();
            assert!(out.closure_complete);
            assert_eq!(out.box_valid, out.instances_valid, "chi = {chi}");
        }
    }
}

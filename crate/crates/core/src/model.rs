//! Neighbourhood function sets, topo-frames, topo-models, and the JSON
//! model file format.
//!
//! A neighbourhood function assigns each point of its (open) domain, per
//! agent, an open epistemic neighbourhood. The five structural conditions
//! it must satisfy are checked by [`TopoModel::validate`], which reports
//! violations as data instead of failing.

use crate::formula::BOT_ATOM;
use crate::topology::{Mask, PointSet, Topology, TopologyError};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("model has no agents")]
    NoAgents,
    #[error("duplicate agent id '{0}'")]
    DuplicateAgent(String),
    #[error("generator '{0}' has no cells for agent '{1}'")]
    MissingAgentCells(String, String),
    #[error("generator '{0}' lists cells for unknown agent '{1}'")]
    UnknownAgentCells(String, String),
    #[error("duplicate generator name '{0}'")]
    DuplicateGenerator(String),
    #[error("model has no generators")]
    NoGenerators,
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("restriction set {0:#b} is not open")]
    RestrictionNotOpen(Mask),
    #[error("point '{1}' is outside the domain of '{0}'")]
    OutsideDomain(String, String),
}

/// A partial map point -> agent -> open set. Rows outside the domain are
/// normalized to zero so that derived equality is extensional.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NeighbourhoodFunction {
    domain: Mask,
    num_agents: usize,
    assign: Vec<Vec<Mask>>,
}

impl NeighbourhoodFunction {
    pub fn new(domain: Mask, num_agents: usize, mut assign: Vec<Vec<Mask>>) -> Self {
        for (x, row) in assign.iter_mut().enumerate() {
            debug_assert_eq!(row.len(), num_agents);
            if domain & (1 << x) == 0 {
                row.iter_mut().for_each(|m| *m = 0);
            }
        }
        NeighbourhoodFunction {
            domain,
            num_agents,
            assign,
        }
    }

    pub fn domain(&self) -> Mask {
        self.domain
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_points(&self) -> usize {
        self.assign.len()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.domain & (1 << point) != 0
    }

    /// The epistemic neighbourhood of `agent` at `point`. Zero outside the
    /// domain.
    pub fn get(&self, point: usize, agent: usize) -> Mask {
        self.assign[point][agent]
    }

    /// The restriction to an open set `u`: domain and every cell are
    /// intersected with `u`.
    pub fn restrict(&self, topo: &Topology, u: Mask) -> Result<Self, ModelError> {
        if !topo.is_open(u) {
            return Err(ModelError::RestrictionNotOpen(u));
        }
        Ok(self.restrict_unchecked(u))
    }

    pub(crate) fn restrict_unchecked(&self, u: Mask) -> Self {
        let assign = self
            .assign
            .iter()
            .map(|row| row.iter().map(|&m| m & u).collect())
            .collect();
        NeighbourhoodFunction::new(self.domain & u, self.num_agents, assign)
    }

    /// Structural conditions, reported per witnessing point/agent.
    fn check_conditions(&self, topo: &Topology, name: &str, out: &mut Vec<Violation>) {
        let space = topo.space();
        for x in space.iter_points(self.domain) {
            for i in 0..self.num_agents {
                let cell = self.get(x, i);
                if !topo.is_open(cell) {
                    out.push(Violation::CellNotOpen {
                        function: name.to_string(),
                        point: space.id(x).to_string(),
                        agent_index: i,
                    });
                }
                if cell & (1 << x) == 0 {
                    out.push(Violation::PointOutsideOwnCell {
                        function: name.to_string(),
                        point: space.id(x).to_string(),
                        agent_index: i,
                    });
                }
                if cell & !self.domain != 0 {
                    out.push(Violation::CellOutsideDomain {
                        function: name.to_string(),
                        point: space.id(x).to_string(),
                        agent_index: i,
                    });
                }
                for y in space.iter_points(cell & self.domain) {
                    if self.get(y, i) != cell {
                        out.push(Violation::CellsDisagree {
                            function: name.to_string(),
                            point: space.id(x).to_string(),
                            other: space.id(y).to_string(),
                            agent_index: i,
                        });
                    }
                }
            }
        }
    }
}

/// A named total neighbourhood function used to present the function set.
#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub func: NeighbourhoodFunction,
}

/// Topology plus total generators. The induced function set is the closure
/// of the generators under restriction to opens.
#[derive(Debug, Clone)]
pub struct TopoFrame {
    pub topology: Topology,
    pub generators: Vec<Generator>,
}

impl TopoFrame {
    /// All restrictions of generators to opens, deduplicated extensionally.
    pub fn enumerate_phi(&self) -> Vec<NeighbourhoodFunction> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for gen in &self.generators {
            for &u in self.topology.opens() {
                let theta = gen.func.restrict_unchecked(u);
                if seen.insert(theta.clone()) {
                    out.push(theta);
                }
            }
        }
        out
    }
}

/// A frame plus agent list and valuation.
#[derive(Debug, Clone)]
pub struct TopoModel {
    pub frame: TopoFrame,
    pub agents: Vec<String>,
    pub valuation: HashMap<String, Mask>,
}

/// An evaluation point inside the domain of a neighbourhood function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Situation {
    pub point: usize,
    pub theta: NeighbourhoodFunction,
}

/// A structural defect found by [`TopoModel::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{function}: cell at point {point} for agent #{agent_index} is not open")]
    CellNotOpen {
        function: String,
        point: String,
        agent_index: usize,
    },
    #[error("{function}: point {point} is missing from its own cell for agent #{agent_index}")]
    PointOutsideOwnCell {
        function: String,
        point: String,
        agent_index: usize,
    },
    #[error("{function}: cell at point {point} for agent #{agent_index} leaves the domain")]
    CellOutsideDomain {
        function: String,
        point: String,
        agent_index: usize,
    },
    #[error("{function}: cells at {point} and {other} overlap but differ for agent #{agent_index}")]
    CellsDisagree {
        function: String,
        point: String,
        other: String,
        agent_index: usize,
    },
    #[error("generator '{function}' is not total (domain misses point {point})")]
    GeneratorNotTotal { function: String, point: String },
    #[error("valuation of '{prop}' is not a subset of the space")]
    ValuationOutOfSpace { prop: String },
    #[error("proposition id '{prop}' is reserved")]
    ReservedProposition { prop: String },
    #[error("generator '{function}' assigns {rows} agent cells per point, model has {agents} agents")]
    AgentArityMismatch {
        function: String,
        rows: usize,
        agents: usize,
    },
}

impl TopoModel {
    pub fn agent_index(&self, id: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == id)
    }

    pub fn space(&self) -> &PointSet {
        self.frame.topology.space()
    }

    pub fn topology(&self) -> &Topology {
        &self.frame.topology
    }

    pub fn generator(&self, name: &str) -> Result<&Generator, ModelError> {
        self.frame
            .generators
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| ModelError::UnknownGenerator(name.to_string()))
    }

    /// Check every structural invariant; an empty report means the model is
    /// well formed. Conditions (1)-(4) are checked on each generator and on
    /// all of its restrictions to opens.
    pub fn validate(&self) -> Vec<Violation> {
        let topo = &self.frame.topology;
        let space = topo.space();
        let full = space.full();
        let mut out = Vec::new();
        for gen in &self.frame.generators {
            if gen.func.num_agents() != self.agents.len() {
                out.push(Violation::AgentArityMismatch {
                    function: gen.name.clone(),
                    rows: gen.func.num_agents(),
                    agents: self.agents.len(),
                });
                continue;
            }
            if gen.func.domain() != full {
                for x in space.iter_points(full & !gen.func.domain()) {
                    out.push(Violation::GeneratorNotTotal {
                        function: gen.name.clone(),
                        point: space.id(x).to_string(),
                    });
                }
            }
            gen.func.check_conditions(topo, &gen.name, &mut out);
            // conditions also hold on restrictions when they hold on the
            // generator; spot-check them anyway on every open
            if out.is_empty() {
                for &u in topo.opens() {
                    let restricted = gen.func.restrict_unchecked(u);
                    let name = format!("{}|{:?}", gen.name, space.ids_in(u));
                    restricted.check_conditions(topo, &name, &mut out);
                }
            }
        }
        for (prop, &set) in &self.valuation {
            if prop == BOT_ATOM {
                out.push(Violation::ReservedProposition { prop: prop.clone() });
            }
            if !space.contains_subset(set) {
                out.push(Violation::ValuationOutOfSpace { prop: prop.clone() });
            }
        }
        out
    }

    /// Serialize back to the file format. The opens stand in for the
    /// original subbase (they generate the same topology).
    pub fn to_file(&self) -> ModelFile {
        let space = self.space();
        let subbase = self
            .topology()
            .opens()
            .iter()
            .filter(|&&u| u != 0)
            .map(|&u| space.ids_in(u))
            .collect();
        let generators = self
            .frame
            .generators
            .iter()
            .map(|gen| {
                let mut cells: HashMap<String, Vec<Vec<String>>> = HashMap::new();
                for (i, agent) in self.agents.iter().enumerate() {
                    let mut seen = Vec::new();
                    for x in space.iter_points(gen.func.domain()) {
                        let cell = gen.func.get(x, i);
                        if !seen.contains(&cell) {
                            seen.push(cell);
                        }
                    }
                    cells.insert(agent.clone(), seen.iter().map(|&c| space.ids_in(c)).collect());
                }
                GeneratorFile {
                    name: gen.name.clone(),
                    cells,
                }
            })
            .collect();
        ModelFile {
            points: space.ids().to_vec(),
            agents: self.agents.clone(),
            subbase,
            generators,
            valuation: self
                .valuation
                .iter()
                .map(|(p, &s)| (p.clone(), space.ids_in(s)))
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// JSON model file format

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub points: Vec<String>,
    pub agents: Vec<String>,
    pub subbase: Vec<Vec<String>>,
    pub generators: Vec<GeneratorFile>,
    pub valuation: HashMap<String, Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub name: String,
    pub cells: HashMap<String, Vec<Vec<String>>>,
}

/// The example model bundled with the crate: two agents hunting a jewel in
/// a tomb, three bits of state (jewel present, tomb discovered, tomb in the
/// valley).
pub const JEWEL_JSON: &str = include_str!("../assets/jewel.json");

pub fn jewel_model() -> TopoModel {
    load_model(JEWEL_JSON).expect("bundled model is well formed")
}

/// Parse a model file. Cell lists that fail to partition the points are
/// loaded leniently: the resulting defects surface through `validate`
/// rather than aborting the load.
pub fn load_model(json: &str) -> Result<TopoModel, ModelError> {
    let file: ModelFile = serde_json::from_str(json)?;
    model_from_file(&file)
}

pub fn model_from_file(file: &ModelFile) -> Result<TopoModel, ModelError> {
    let space = PointSet::new(file.points.clone())?;
    if file.agents.is_empty() {
        return Err(ModelError::NoAgents);
    }
    let mut seen_agents = HashSet::new();
    for a in &file.agents {
        if !seen_agents.insert(a.clone()) {
            return Err(ModelError::DuplicateAgent(a.clone()));
        }
    }
    let mut subbase = Vec::new();
    for ids in &file.subbase {
        subbase.push(space.mask_from_ids(ids.iter().map(String::as_str))?);
    }
    let topology = Topology::from_subbase(space, &subbase)?;
    let space = topology.space();

    if file.generators.is_empty() {
        return Err(ModelError::NoGenerators);
    }
    let mut generators = Vec::new();
    let mut seen_names = HashSet::new();
    for gen in &file.generators {
        if !seen_names.insert(gen.name.clone()) {
            return Err(ModelError::DuplicateGenerator(gen.name.clone()));
        }
        for agent in gen.cells.keys() {
            if !file.agents.contains(agent) {
                return Err(ModelError::UnknownAgentCells(
                    gen.name.clone(),
                    agent.clone(),
                ));
            }
        }
        let mut assign = vec![vec![0; file.agents.len()]; space.len()];
        for (i, agent) in file.agents.iter().enumerate() {
            let cells = gen
                .cells
                .get(agent)
                .ok_or_else(|| ModelError::MissingAgentCells(gen.name.clone(), agent.clone()))?;
            for cell_ids in cells {
                let cell = space.mask_from_ids(cell_ids.iter().map(String::as_str))?;
                for x in space.iter_points(cell) {
                    // first containing cell wins; overlaps become condition
                    // (4) violations in validate
                    if assign[x][i] == 0 {
                        assign[x][i] = cell;
                    }
                }
            }
        }
        let func = NeighbourhoodFunction::new(space.full(), file.agents.len(), assign);
        generators.push(Generator {
            name: gen.name.clone(),
            func,
        });
    }

    let mut valuation = HashMap::new();
    for (prop, ids) in &file.valuation {
        let set = topology
            .space()
            .mask_from_ids(ids.iter().map(String::as_str))?;
        valuation.insert(prop.clone(), set);
    }

    Ok(TopoModel {
        frame: TopoFrame {
            topology,
            generators,
        },
        agents: file.agents.clone(),
        valuation,
    })
}

impl fmt::Display for TopoModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = self.space();
        writeln!(f, "points: {:?}", space.ids())?;
        writeln!(f, "agents: {:?}", self.agents)?;
        writeln!(f, "opens: {}", self.topology().opens().len())?;
        for gen in &self.frame.generators {
            writeln!(f, "generator {}:", gen.name)?;
            for x in space.iter_points(gen.func.domain()) {
                let cells: Vec<_> = (0..self.agents.len())
                    .map(|i| space.ids_in(gen.func.get(x, i)))
                    .collect();
                writeln!(f, "  {} -> {:?}", space.id(x), cells)?;
            }
        }
        let mut props: Vec<_> = self.valuation.iter().collect();
        props.sort();
        for (prop, &set) in props {
            writeln!(f, "V({prop}) = {:?}", space.ids_in(set))?;
        }
        Ok(())
    }
}

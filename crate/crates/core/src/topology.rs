//! Finite topological spaces over bitmask-encoded subsets.
//!
//! Opens are enumerated explicitly. Spaces stay small (a dozen points or
//! so), so the family of opens fits comfortably in memory and interior is
//! a linear scan over it.

use std::collections::HashSet;
use thiserror::Error;

/// Subsets of the space, one bit per point in `PointSet` order.
pub type Mask = u32;

pub const MAX_POINTS: usize = 12;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("point set must be nonempty")]
    EmptySpace,
    #[error("too many points: {0} (max {MAX_POINTS})")]
    TooManyPoints(usize),
    #[error("duplicate point id '{0}'")]
    DuplicatePoint(String),
    #[error("unknown point id '{0}'")]
    UnknownPoint(String),
    #[error("set {0:#b} is not a subset of the space")]
    NotASubset(Mask),
    #[error("set {0:#b} is not open")]
    NotOpen(Mask),
}

/// An ordered, duplicate-free list of point ids; subsets of it are bitmasks
/// over that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    ids: Vec<String>,
}

impl PointSet {
    pub fn new(ids: Vec<String>) -> Result<PointSet, TopologyError> {
        if ids.is_empty() {
            return Err(TopologyError::EmptySpace);
        }
        if ids.len() > MAX_POINTS {
            return Err(TopologyError::TooManyPoints(ids.len()));
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id.clone()) {
                return Err(TopologyError::DuplicatePoint(id.clone()));
            }
        }
        Ok(PointSet { ids })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: nonempty
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, idx: usize) -> &str {
        &self.ids[idx]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, TopologyError> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| TopologyError::UnknownPoint(id.to_string()))
    }

    /// The full space as a mask.
    pub fn full(&self) -> Mask {
        if self.ids.len() == Mask::BITS as usize {
            Mask::MAX
        } else {
            (1 << self.ids.len()) - 1
        }
    }

    pub fn contains_subset(&self, s: Mask) -> bool {
        s & !self.full() == 0
    }

    pub fn mask_from_ids<'a, I: IntoIterator<Item = &'a str>>(
        &self,
        ids: I,
    ) -> Result<Mask, TopologyError> {
        let mut m = 0;
        for id in ids {
            m |= 1 << self.index_of(id)?;
        }
        Ok(m)
    }

    pub fn ids_in(&self, s: Mask) -> Vec<String> {
        self.iter_points(s).map(|i| self.ids[i].clone()).collect()
    }

    /// Indices of the points in `s`, ascending.
    pub fn iter_points(&self, s: Mask) -> impl Iterator<Item = usize> + '_ {
        (0..self.ids.len()).filter(move |i| s & (1 << i) != 0)
    }
}

/// A finite topology: the space plus the enumerated family of opens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    space: PointSet,
    opens: Vec<Mask>,
    open_set: HashSet<Mask>,
}

impl Topology {
    /// The smallest topology containing every subbase element: empty set,
    /// the full space, and the closure of the subbase under pairwise
    /// intersection and union (which suffices on a finite space).
    pub fn from_subbase(space: PointSet, subbase: &[Mask]) -> Result<Topology, TopologyError> {
        let full = space.full();
        for &s in subbase {
            if !space.contains_subset(s) {
                return Err(TopologyError::NotASubset(s));
            }
        }
        let mut family: HashSet<Mask> = HashSet::from([0, full]);
        family.extend(subbase.iter().copied());
        let mut worklist: Vec<Mask> = family.iter().copied().collect();
        while let Some(a) = worklist.pop() {
            let current: Vec<Mask> = family.iter().copied().collect();
            for b in current {
                for c in [a & b, a | b] {
                    if family.insert(c) {
                        worklist.push(c);
                    }
                }
            }
        }
        let mut opens: Vec<Mask> = family.iter().copied().collect();
        opens.sort_unstable();
        Ok(Topology {
            space,
            opens,
            open_set: family,
        })
    }

    /// The indiscrete topology on the given space.
    pub fn indiscrete(space: PointSet) -> Topology {
        Topology::from_subbase(space, &[]).expect("empty subbase is always valid")
    }

    pub fn space(&self) -> &PointSet {
        &self.space
    }

    /// All opens, ascending as masks.
    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    pub fn is_open(&self, s: Mask) -> bool {
        self.open_set.contains(&s)
    }

    /// The largest open subset of `s`: the union of all opens inside it.
    pub fn interior(&self, s: Mask) -> Result<Mask, TopologyError> {
        if !self.space.contains_subset(s) {
            return Err(TopologyError::NotASubset(s));
        }
        Ok(self
            .opens
            .iter()
            .filter(|&&u| u & !s == 0)
            .fold(0, |acc, &u| acc | u))
    }

    /// True iff every nonempty open is a union of members of `family`.
    pub fn is_base(&self, family: &[Mask]) -> Result<bool, TopologyError> {
        for &b in family {
            if !self.is_open(b) {
                return Err(TopologyError::NotOpen(b));
            }
        }
        for &u in &self.opens {
            if u == 0 {
                continue;
            }
            let covered = family
                .iter()
                .filter(|&&b| b & !u == 0)
                .fold(0, |acc, &b| acc | b);
            if covered != u {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

//! Finite Kolmogorov probability machinery: sample spaces, events,
//! generated algebras, exact-rational measures, measurability of random
//! quantities, and physical-admissibility checks on joined algebras.
//!
//! Everything here is finite and exact. Sample spaces hold at most 64
//! elements so events are single-word bitmasks, and probabilities are
//! arbitrary-precision rationals so the measure axioms can be asserted
//! with zero tolerance.

mod algebra;
mod compat;
mod prob;
mod quantity;

pub use algebra::{generate_algebra, join_algebras, SigmaAlgebra};
pub use compat::{is_physically_admissible, AdmissibilityReport, CompatibilityRelation};
pub use prob::{parse_weight, verify_measure, AxiomViolation, MeasureReport, ProbabilityMeasure};
pub use quantity::{is_measurable, preimage_event, Measurability, RandomQuantity};

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Largest supported sample space; events are u64 bitmasks.
pub const MAX_SPACE: usize = 64;

/// A finite set of elementary events, identified by the indices `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSpace {
    size: usize,
}

impl SampleSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptySampleSpace);
        }
        if size > MAX_SPACE {
            return Err(Error::SpaceTooLarge {
                size,
                max: MAX_SPACE,
            });
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Bitmask with one bit per elementary event.
    pub fn full_mask(&self) -> u64 {
        if self.size == MAX_SPACE {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    pub fn contains(&self, element: usize) -> bool {
        element < self.size
    }
}

/// A subset of a sample space, plus the observables whose measured values
/// single it out. The tags are metadata: two events are equal when their
/// member sets are equal.
#[derive(Debug, Clone)]
pub struct Event {
    mask: u64,
    tags: BTreeSet<String>,
}

impl Event {
    /// Event from a raw bitmask, untagged.
    pub fn from_mask(mask: u64) -> Self {
        Self {
            mask,
            tags: BTreeSet::new(),
        }
    }

    /// Event from element indices, untagged. Fails on indices outside `space`.
    pub fn from_members<I>(space: &SampleSpace, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = 0u64;
        for index in members {
            if !space.contains(index) {
                return Err(Error::GeneratorOutOfRange {
                    index,
                    size: space.size(),
                });
            }
            mask |= 1u64 << index;
        }
        Ok(Self::from_mask(mask))
    }

    pub fn with_tags<I, S>(mut self, tags: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.tags = tags.into_iter().map(Into::into).collect();
        self
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn tags(&self) -> &BTreeSet<String> {
        &self.tags
    }

    pub fn members(&self) -> Vec<usize> {
        (0..MAX_SPACE).filter(|i| self.mask >> i & 1 == 1).collect()
    }

    pub fn contains(&self, element: usize) -> bool {
        element < MAX_SPACE && self.mask >> element & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: &Event) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn intersection(&self, other: &Event) -> Event {
        let mut tags = self.tags.clone();
        tags.extend(other.tags.iter().cloned());
        Event {
            mask: self.mask & other.mask,
            tags,
        }
    }

    pub fn union(&self, other: &Event) -> Event {
        let mut tags = self.tags.clone();
        tags.extend(other.tags.iter().cloned());
        Event {
            mask: self.mask | other.mask,
            tags,
        }
    }

    pub fn complement_in(&self, space: &SampleSpace) -> Event {
        Event {
            mask: space.full_mask() & !self.mask,
            tags: self.tags.clone(),
        }
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.mask.cmp(&other.mask)
    }
}

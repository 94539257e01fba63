//! Observable compatibility and physical admissibility of algebras.
//!
//! A joined algebra may be perfectly sound mathematically yet contain
//! events that no experiment can pick out, because selecting them would
//! require simultaneous sharp values of incompatible observables. The
//! admissibility check flags exactly those events via their tags.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::measure::{Event, SigmaAlgebra};

/// Which observables can be measured together. Reflexivity is implicit
/// and pairs are stored unordered, so the relation is symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityRelation {
    observables: BTreeSet<String>,
    compatible: BTreeSet<(String, String)>,
}

impl CompatibilityRelation {
    pub fn new<I, P, S>(observables: I, compatible_pairs: P) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        P: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let observables: BTreeSet<String> = observables.into_iter().map(Into::into).collect();
        let mut compatible = BTreeSet::new();
        for (a, b) in compatible_pairs {
            let (a, b) = (a.into(), b.into());
            for name in [&a, &b] {
                if !observables.contains(name) {
                    return Err(Error::UnknownObservable { name: name.clone() });
                }
            }
            if a != b {
                let pair = if a < b { (a, b) } else { (b, a) };
                compatible.insert(pair);
            }
        }
        Ok(Self {
            observables,
            compatible,
        })
    }

    pub fn observables(&self) -> &BTreeSet<String> {
        &self.observables
    }

    pub fn contains(&self, name: &str) -> bool {
        self.observables.contains(name)
    }

    /// True iff the two observables can be measured in one experiment.
    /// Every observable is compatible with itself.
    pub fn compatible(&self, a: &str, b: &str) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        if a == b {
            return true;
        }
        let pair = if a < b { (a, b) } else { (b, a) };
        self.compatible
            .contains(&(pair.0.to_string(), pair.1.to_string()))
    }
}

/// Events no experiment can select, each with the incompatible
/// observable pair (first in tag order) that disqualifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub offending: Vec<(Event, (String, String))>,
    pub events_checked: usize,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.offending.is_empty()
    }
}

/// An algebra is physically admissible iff every event's tags are
/// pairwise compatible. Offending events come back in bitmask order.
pub fn is_physically_admissible(
    algebra: &SigmaAlgebra,
    relation: &CompatibilityRelation,
) -> Result<AdmissibilityReport> {
    let mut offending = Vec::new();
    for event in algebra.events() {
        let tags: Vec<&String> = event.tags().iter().collect();
        for name in &tags {
            if !relation.contains(name) {
                return Err(Error::UnknownObservable {
                    name: (*name).clone(),
                });
            }
        }
        let clash = tags
            .iter()
            .enumerate()
            .flat_map(|(i, a)| tags[i + 1..].iter().map(move |b| (a, b)))
            .find(|(a, b)| !relation.compatible(a, b));
        if let Some((a, b)) = clash {
            offending.push((event.clone(), ((*a).clone(), (*b).clone())));
        }
    }
    Ok(AdmissibilityReport {
        offending,
        events_checked: algebra.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{generate_algebra, join_algebras, SampleSpace};

    fn joined_two_observable_algebra() -> SigmaAlgebra {
        let s = SampleSpace::new(4).unwrap();
        let g1 = Event::from_mask(0b0011).with_tags(["y"]);
        let g2 = Event::from_mask(0b0101).with_tags(["y2"]);
        let f1 = generate_algebra(s, &[g1]).unwrap();
        let f2 = generate_algebra(s, &[g2]).unwrap();
        join_algebras(&f1, &f2).unwrap()
    }

    #[test]
    fn relation_is_symmetric_and_reflexive() {
        let rel = CompatibilityRelation::new(["a", "b", "c"], [("a", "b")]).unwrap();
        assert!(rel.compatible("a", "b"));
        assert!(rel.compatible("b", "a"));
        assert!(rel.compatible("c", "c"));
        assert!(!rel.compatible("a", "c"));
        assert!(!rel.compatible("a", "missing"));
    }

    #[test]
    fn unknown_pair_member_is_rejected() {
        assert!(matches!(
            CompatibilityRelation::new(["a"], [("a", "b")]),
            Err(Error::UnknownObservable { name }) if name == "b"
        ));
    }

    #[test]
    fn single_observable_algebra_is_admissible() {
        let s = SampleSpace::new(4).unwrap();
        let f = generate_algebra(s, &[Event::from_mask(0b0011).with_tags(["y"])]).unwrap();
        let rel = CompatibilityRelation::new(["y"], []).unwrap();
        let report = is_physically_admissible(&f, &rel).unwrap();
        assert!(report.is_admissible());
        assert_eq!(report.events_checked, 4);
    }

    #[test]
    fn untagged_algebra_is_vacuously_admissible() {
        let s = SampleSpace::new(4).unwrap();
        let f = generate_algebra(s, &[Event::from_mask(0b0110)]).unwrap();
        let rel = CompatibilityRelation::new(["y"], []).unwrap();
        assert!(is_physically_admissible(&f, &rel).unwrap().is_admissible());
    }

    #[test]
    fn incompatible_tags_flag_the_joined_events() {
        let joined = joined_two_observable_algebra();
        let rel = CompatibilityRelation::new(["y", "y2"], []).unwrap();
        let report = is_physically_admissible(&joined, &rel).unwrap();
        assert!(!report.is_admissible());
        // 16 events minus ∅, Ω, and the four single-observable events.
        assert_eq!(report.offending.len(), 10);
        let (event, pair) = &report.offending[0];
        assert_eq!(event.mask(), 0b0001);
        assert_eq!(pair, &("y".to_string(), "y2".to_string()));
        let masks: Vec<u64> = report.offending.iter().map(|(e, _)| e.mask()).collect();
        let mut sorted = masks.clone();
        sorted.sort_unstable();
        assert_eq!(masks, sorted);
    }

    #[test]
    fn marking_the_pair_compatible_clears_the_report() {
        let joined = joined_two_observable_algebra();
        let rel = CompatibilityRelation::new(["y", "y2"], [("y", "y2")]).unwrap();
        assert!(is_physically_admissible(&joined, &rel)
            .unwrap()
            .is_admissible());
    }

    #[test]
    fn tag_outside_relation_is_an_error() {
        let joined = joined_two_observable_algebra();
        let rel = CompatibilityRelation::new(["y"], []).unwrap();
        assert!(matches!(
            is_physically_admissible(&joined, &rel),
            Err(Error::UnknownObservable { name }) if name == "y2"
        ));
    }
}

//! Generated σ-algebras on finite sample spaces.
//!
//! On a finite space the σ-algebra generated by a family of events is
//! computed exactly: the atoms are the equivalence classes of elements
//! under "belongs to the same generators", and the events are all unions
//! of atoms. Every closure property (complement, union, intersection)
//! holds by construction and is re-checkable exhaustively in tests.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::measure::{Event, SampleSpace};

/// Cap on atom count; the algebra materializes all 2^atoms events.
pub const MAX_ATOMS: usize = 16;
/// Cap on distinct observable tags across the generators.
pub const MAX_TAGS: usize = 12;

type TaggedMask = (u64, BTreeSet<String>);

/// A σ-algebra over a finite sample space, stored extensionally: the
/// atoms (minimal nonempty events) and every union of them.
///
/// Each event carries the smallest set of observable tags that suffices
/// to express it from the generators: tags(E) is the least tag set T,
/// ordered by size then alphabetically, such that E lies in the algebra
/// generated by the generators tagged only with observables in T. An
/// intersection of events from two differently-tagged generators thus
/// gets the union of their tags, while a generator itself keeps its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaAlgebra {
    space: SampleSpace,
    generators: BTreeSet<TaggedMask>,
    atoms: Vec<u64>,
    events: Vec<Event>,
}

impl SigmaAlgebra {
    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    /// Atom bitmasks, sorted by smallest member index.
    pub fn atom_masks(&self) -> &[u64] {
        &self.atoms
    }

    /// The atoms as tagged events of the algebra.
    pub fn atoms(&self) -> Vec<&Event> {
        self.atoms
            .iter()
            .map(|&mask| self.event(mask).expect("atom is an event"))
            .collect()
    }

    /// All events, sorted by bitmask. Always a power of two of them.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Membership test: a set belongs to the algebra iff it splits no atom.
    pub fn contains_mask(&self, mask: u64) -> bool {
        if mask & !self.space.full_mask() != 0 {
            return false;
        }
        self.atoms
            .iter()
            .all(|&atom| mask & atom == 0 || mask & atom == atom)
    }

    pub fn contains(&self, event: &Event) -> bool {
        self.contains_mask(event.mask())
    }

    /// The algebra's own copy of the event with this mask, tags included.
    pub fn event(&self, mask: u64) -> Option<&Event> {
        self.events
            .binary_search_by_key(&mask, Event::mask)
            .ok()
            .map(|i| &self.events[i])
    }

    /// The generators this algebra was built from, tags included.
    pub fn generator_events(&self) -> Vec<Event> {
        self.generators
            .iter()
            .map(|(mask, tags)| Event::from_mask(*mask).with_tags(tags.iter().cloned()))
            .collect()
    }
}

/// The smallest σ-algebra over `space` containing every generator.
pub fn generate_algebra(space: SampleSpace, generators: &[Event]) -> Result<SigmaAlgebra> {
    let full = space.full_mask();
    for generator in generators {
        let stray = generator.mask() & !full;
        if stray != 0 {
            return Err(Error::GeneratorOutOfRange {
                index: stray.trailing_zeros() as usize,
                size: space.size(),
            });
        }
    }
    let canonical: BTreeSet<TaggedMask> = generators
        .iter()
        .map(|g| (g.mask(), g.tags().clone()))
        .collect();
    build(space, canonical)
}

/// The smallest σ-algebra containing both operands, i.e. the algebra
/// generated by the union of their generator families.
pub fn join_algebras(left: &SigmaAlgebra, right: &SigmaAlgebra) -> Result<SigmaAlgebra> {
    if left.space != right.space {
        return Err(Error::MismatchedSpaces {
            left: left.space.size(),
            right: right.space.size(),
        });
    }
    let mut generators = left.generators.clone();
    generators.extend(right.generators.iter().cloned());
    build(left.space, generators)
}

fn build(space: SampleSpace, generators: BTreeSet<TaggedMask>) -> Result<SigmaAlgebra> {
    let masks: Vec<u64> = {
        let unique: BTreeSet<u64> = generators.iter().map(|(m, _)| *m).collect();
        unique.into_iter().collect()
    };
    let atoms = atoms_of(space, &masks);
    if atoms.len() > MAX_ATOMS {
        return Err(Error::AtomLimitExceeded {
            atoms: atoms.len(),
            max: MAX_ATOMS,
        });
    }

    let mut event_masks: Vec<u64> = (0u32..1 << atoms.len())
        .map(|bits| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .fold(0u64, |acc, (_, &atom)| acc | atom)
        })
        .collect();
    event_masks.sort_unstable();

    let tag_table = assign_tags(space, &generators, &event_masks)?;
    let events = event_masks
        .into_iter()
        .map(|mask| Event::from_mask(mask).with_tags(tag_table[&mask].iter().cloned()))
        .collect();

    Ok(SigmaAlgebra {
        space,
        generators,
        atoms,
        events,
    })
}

/// Atoms of σ(masks): elements are equivalent when the same generators
/// contain them. Result sorted by smallest member index.
fn atoms_of(space: SampleSpace, masks: &[u64]) -> Vec<u64> {
    let mut classes: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for element in 0..space.size() {
        let signature: Vec<bool> = masks.iter().map(|m| m >> element & 1 == 1).collect();
        *classes.entry(signature).or_insert(0) |= 1u64 << element;
    }
    let mut atoms: Vec<u64> = classes.into_values().collect();
    atoms.sort_unstable_by_key(|atom| atom.trailing_zeros());
    atoms
}

fn is_union_of_atoms(mask: u64, atoms: &[u64]) -> bool {
    atoms
        .iter()
        .all(|&atom| mask & atom == 0 || mask & atom == atom)
}

/// Minimal tag set per event: the first tag subset T, ordered by size
/// then alphabetically, whose T-tagged generators already generate the
/// event. Untagged generators count toward every T.
fn assign_tags(
    space: SampleSpace,
    generators: &BTreeSet<TaggedMask>,
    event_masks: &[u64],
) -> Result<BTreeMap<u64, BTreeSet<String>>> {
    let universe: Vec<String> = generators
        .iter()
        .flat_map(|(_, tags)| tags.iter().cloned())
        .collect::<BTreeSet<String>>()
        .into_iter()
        .collect();
    if universe.len() > MAX_TAGS {
        return Err(Error::TagLimitExceeded {
            tags: universe.len(),
            max: MAX_TAGS,
        });
    }

    let tag_bits_of = |tags: &BTreeSet<String>| -> u32 {
        universe
            .iter()
            .enumerate()
            .filter(|(_, name)| tags.contains(*name))
            .fold(0u32, |acc, (i, _)| acc | 1 << i)
    };
    let tagged: Vec<(u64, u32)> = generators
        .iter()
        .map(|(mask, tags)| (*mask, tag_bits_of(tags)))
        .collect();

    let mut subsets: Vec<u32> = (0..1u32 << universe.len()).collect();
    subsets.sort_unstable_by_key(|&s| (s.count_ones(), s));

    let mut atoms_cache: Vec<Option<Vec<u64>>> = vec![None; 1 << universe.len()];
    let mut table = BTreeMap::new();
    for &mask in event_masks {
        let chosen = subsets
            .iter()
            .copied()
            .find(|&subset| {
                let atoms = atoms_cache[subset as usize].get_or_insert_with(|| {
                    let masks: Vec<u64> = tagged
                        .iter()
                        .filter(|(_, bits)| bits & !subset == 0)
                        .map(|(m, _)| *m)
                        .collect();
                    atoms_of(space, &masks)
                });
                is_union_of_atoms(mask, atoms)
            })
            .expect("event lies in the full algebra");
        let tags: BTreeSet<String> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| chosen >> i & 1 == 1)
            .map(|(_, name)| name.clone())
            .collect();
        table.insert(mask, tags);
    }
    Ok(table)
}

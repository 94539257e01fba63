//! Exact-rational probability measures and axiom verification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measure::{Event, SigmaAlgebra};

/// A probability measure on a finite algebra: one rational weight per
/// atom, with P(F) the exact sum of the weights of the atoms inside F.
///
/// Construction accepts any weights with the right count, including
/// invalid ones, so that `verify_measure` can report which axiom a bad
/// assignment breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityMeasure {
    algebra: SigmaAlgebra,
    weights: Vec<BigRational>,
}

impl ProbabilityMeasure {
    pub fn new(algebra: SigmaAlgebra, weights: Vec<BigRational>) -> Result<Self> {
        let expected = algebra.atom_masks().len();
        if weights.len() != expected {
            return Err(Error::WeightCount {
                expected,
                got: weights.len(),
            });
        }
        Ok(Self { algebra, weights })
    }

    /// Uniform weights 1/k on the k atoms.
    pub fn uniform(algebra: SigmaAlgebra) -> Self {
        let k = algebra.atom_masks().len();
        let weight = BigRational::new(BigInt::one(), BigInt::from(k));
        let weights = vec![weight; k];
        Self { algebra, weights }
    }

    pub fn algebra(&self) -> &SigmaAlgebra {
        &self.algebra
    }

    /// Atom weights, parallel to `algebra().atom_masks()`.
    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// P(event), exactly. The event must belong to the algebra.
    pub fn probability(&self, event: &Event) -> Result<BigRational> {
        if !self.algebra.contains(event) {
            return Err(Error::EventNotInAlgebra);
        }
        let mask = event.mask();
        let mut total = BigRational::zero();
        for (atom, weight) in self.algebra.atom_masks().iter().zip(&self.weights) {
            if atom & mask == *atom {
                total += weight;
            }
        }
        Ok(total)
    }
}

/// One broken measure axiom, naming the event(s) that witness it.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomViolation {
    /// P(event) falls outside [0, 1].
    ProbabilityOutOfRange {
        event: Event,
        probability: BigRational,
    },
    /// P(∅) differs from 0.
    EmptyNotZero { probability: BigRational },
    /// P(Ω) differs from 1; `event` is Ω.
    NormalizationFailure { event: Event, total: BigRational },
    /// P(left ∪ right) differs from P(left) + P(right) for disjoint events.
    AdditivityFailure {
        left: Event,
        right: Event,
        union_probability: BigRational,
        sum: BigRational,
    },
}

/// Outcome of exhaustive axiom verification.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub empty_probability: BigRational,
    pub total_probability: BigRational,
    pub events_checked: usize,
    pub disjoint_pairs_checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl MeasureReport {
    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every measure axiom exhaustively and exactly: the range of
/// P over all events, P(∅) = 0, P(Ω) = 1, and additivity over every
/// disjoint event pair. The pair sweep visits 3^k combinations for k
/// atoms, so keep k modest.
pub fn verify_measure(measure: &ProbabilityMeasure) -> MeasureReport {
    let algebra = measure.algebra();
    let k = algebra.atom_masks().len();
    let zero = BigRational::zero();
    let one = BigRational::one();

    // P over atom subsets, indexed by atom-selection bits.
    let mut sums: Vec<BigRational> = Vec::with_capacity(1 << k);
    sums.push(zero.clone());
    for bits in 1usize..1 << k {
        let low = bits.trailing_zeros() as usize;
        let rest = bits & (bits - 1);
        sums.push(&sums[rest] + &measure.weights()[low]);
    }
    let mask_of = |bits: usize| -> u64 {
        algebra
            .atom_masks()
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .fold(0u64, |acc, (_, &atom)| acc | atom)
    };
    let event_of = |bits: usize| -> Event {
        algebra
            .event(mask_of(bits))
            .expect("atom union is an event")
            .clone()
    };

    let mut violations = Vec::new();
    for (bits, p) in sums.iter().enumerate() {
        if *p < zero || *p > one {
            violations.push(AxiomViolation::ProbabilityOutOfRange {
                event: event_of(bits),
                probability: p.clone(),
            });
        }
    }

    let empty_probability = sums[0].clone();
    if !empty_probability.is_zero() {
        violations.push(AxiomViolation::EmptyNotZero {
            probability: empty_probability.clone(),
        });
    }

    let full_bits = (1usize << k) - 1;
    let total_probability = sums[full_bits].clone();
    if !total_probability.is_one() {
        violations.push(AxiomViolation::NormalizationFailure {
            event: event_of(full_bits),
            total: total_probability.clone(),
        });
    }

    let mut disjoint_pairs_checked = 0usize;
    for left_bits in 0usize..1 << k {
        let rest = full_bits & !left_bits;
        // All subsets of the complementary atoms, empty set included.
        let mut right_bits = rest;
        loop {
            if left_bits <= right_bits {
                disjoint_pairs_checked += 1;
                let union = &sums[left_bits | right_bits];
                let sum = &sums[left_bits] + &sums[right_bits];
                if *union != sum {
                    violations.push(AxiomViolation::AdditivityFailure {
                        left: event_of(left_bits),
                        right: event_of(right_bits),
                        union_probability: union.clone(),
                        sum,
                    });
                }
            }
            if right_bits == 0 {
                break;
            }
            right_bits = (right_bits - 1) & rest;
        }
    }

    MeasureReport {
        empty_probability,
        total_probability,
        events_checked: 1 << k,
        disjoint_pairs_checked,
        violations,
    }
}

/// Parses an exact rational of the form `p/q` or a bare integer `p`.
pub fn parse_weight(text: &str) -> Result<BigRational> {
    let malformed = || Error::MalformedWeight {
        text: text.to_string(),
    };
    let trimmed = text.trim();
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let numerator = BigInt::from_str(num_text).map_err(|_| malformed())?;
    let denominator = BigInt::from_str(den_text).map_err(|_| malformed())?;
    if denominator.is_zero() {
        return Err(malformed());
    }
    Ok(BigRational::new(numerator, denominator))
}

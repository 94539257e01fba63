//! Random quantities and measurability with respect to a finite algebra.

use crate::error::{Error, Result};
use crate::measure::{Event, SigmaAlgebra, MAX_SPACE};

/// A real-valued function on the sample space, one value per elementary
/// event. Values may be ±∞; NaN is rejected at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomQuantity {
    values: Vec<f64>,
}

impl RandomQuantity {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySampleSpace);
        }
        if values.len() > MAX_SPACE {
            return Err(Error::SpaceTooLarge {
                size: values.len(),
                max: MAX_SPACE,
            });
        }
        if let Some(index) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::NanValue { index });
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, element: usize) -> f64 {
        self.values[element]
    }

    /// The distinct values taken, ascending. Signed zeros collapse.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut sorted = self.values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        sorted.dedup_by(|a, b| a == b);
        sorted
    }

    /// Bitmask of the elements where the quantity equals `value`.
    pub fn level_set(&self, value: f64) -> u64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == value)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }
}

/// Verdict of a measurability check. A failure carries the smallest
/// value whose level set splits an atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measurability {
    Measurable,
    NotMeasurable { witness: f64 },
}

impl Measurability {
    pub fn is_measurable(&self) -> bool {
        matches!(self, Measurability::Measurable)
    }
}

/// A quantity is measurable with respect to an algebra iff every level
/// set {ω : X(ω) = v} is a union of atoms.
pub fn is_measurable(quantity: &RandomQuantity, algebra: &SigmaAlgebra) -> Result<Measurability> {
    if quantity.len() != algebra.space().size() {
        return Err(Error::MismatchedSpaces {
            left: quantity.len(),
            right: algebra.space().size(),
        });
    }
    for value in quantity.distinct_values() {
        if !algebra.contains_mask(quantity.level_set(value)) {
            return Ok(Measurability::NotMeasurable { witness: value });
        }
    }
    Ok(Measurability::Measurable)
}

/// The event {ω : lo < X(ω) ≤ hi}, the preimage of a semiopen interval.
/// Infinite endpoints are allowed; `lo` must be strictly below `hi`.
pub fn preimage_event(quantity: &RandomQuantity, lo: f64, hi: f64) -> Result<Event> {
    // NaN endpoints compare as unordered and are rejected along with
    // empty intervals.
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let mask = quantity
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| lo < **v && **v <= hi)
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    Ok(Event::from_mask(mask))
}

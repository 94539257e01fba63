//! Noncontextual assignments over orthogonal triads, and the two-device
//! spin-1 agreement experiment.
//!
//! For a spin-1 system the squared projections on any three mutually
//! orthogonal directions sum to 2, so a noncontextual value assignment
//! must give every triad the pattern (1, 0, 1) in some order while each
//! direction keeps a single value across all triads containing it. The
//! search decides whether such an assignment exists for a given triad
//! system.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exec::{batch_count, batch_len, map_batches, ExecMode};
use crate::rng::{StreamPlan, SLOT_SPIN1};

/// A family of orthogonal triads over named directions. Orthogonality is
/// the caller's claim; only the combinatorial structure matters here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriadSystem {
    directions: Vec<String>,
    triads: Vec<[usize; 3]>,
}

impl TriadSystem {
    pub fn new(directions: Vec<String>, triads: Vec<[String; 3]>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in &directions {
            if !seen.insert(name.clone()) {
                return Err(Error::RepeatedDirection { name: name.clone() });
            }
        }
        let index_of: BTreeMap<&str, usize> = directions
            .iter()
            .enumerate()
            .map(|(i, name)| (name.as_str(), i))
            .collect();
        let mut resolved = Vec::with_capacity(triads.len());
        for (index, triad) in triads.iter().enumerate() {
            let mut ids = [0usize; 3];
            for (slot, name) in triad.iter().enumerate() {
                ids[slot] = *index_of.get(name.as_str()).ok_or_else(|| {
                    Error::UnknownTriadDirection {
                        index,
                        name: name.clone(),
                    }
                })?;
            }
            if ids[0] == ids[1] || ids[0] == ids[2] || ids[1] == ids[2] {
                let name = if ids[0] == ids[1] || ids[0] == ids[2] {
                    triad[0].clone()
                } else {
                    triad[1].clone()
                };
                return Err(Error::RepeatedTriadDirection { index, name });
            }
            resolved.push(ids);
        }
        Ok(Self {
            directions,
            triads: resolved,
        })
    }

    /// Construction from string literals.
    pub fn from_names(directions: &[&str], triads: &[[&str; 3]]) -> Result<Self> {
        Self::new(
            directions.iter().map(|s| s.to_string()).collect(),
            triads
                .iter()
                .map(|t| [t[0].to_string(), t[1].to_string(), t[2].to_string()])
                .collect(),
        )
    }

    pub fn directions(&self) -> &[String] {
        &self.directions
    }

    pub fn triads(&self) -> &[[usize; 3]] {
        &self.triads
    }

    pub fn triad_names(&self) -> Vec<[&str; 3]> {
        self.triads
            .iter()
            .map(|t| t.map(|i| self.directions[i].as_str()))
            .collect()
    }

    /// One device type per triad: the three squared projections it
    /// measures together.
    pub fn device_types(&self) -> Vec<DeviceType> {
        self.triad_names()
            .iter()
            .enumerate()
            .map(|(i, names)| DeviceType {
                id: format!("triad{i}"),
                observables: names.iter().map(|n| n.to_string()).collect(),
            })
            .collect()
    }

    /// True iff every triad sums to exactly 2 under the assignment.
    pub fn satisfies(&self, assignment: &Assignment) -> bool {
        assignment.values.len() == self.directions.len()
            && self.triads.iter().all(|t| {
                t.iter().map(|&i| assignment.values[i] as u32).sum::<u32>() == 2
            })
    }
}

/// One {0,1} value per direction, the same value wherever the direction
/// appears.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<u8>,
}

impl Assignment {
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn as_map(&self, system: &TriadSystem) -> BTreeMap<String, u8> {
        system
            .directions
            .iter()
            .cloned()
            .zip(self.values.iter().copied())
            .collect()
    }
}

/// A set of observables one apparatus measures together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceType {
    pub id: String,
    pub observables: BTreeSet<String>,
}

/// Deterministic backtracking search for an assignment giving every
/// triad one 0 and two 1s. Directions are decided in declared order,
/// value 1 tried before 0; a triad prunes as soon as it holds two 0s or
/// three 1s. Returns the first assignment in that order, or None.
pub fn find_noncontextual_assignment(system: &TriadSystem) -> Option<Assignment> {
    let d = system.directions.len();
    let mut triads_touching: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (t, triad) in system.triads.iter().enumerate() {
        for &i in triad {
            triads_touching[i].push(t);
        }
    }
    let mut values: Vec<Option<u8>> = vec![None; d];

    fn feasible(system: &TriadSystem, values: &[Option<u8>], triad: usize) -> bool {
        let mut zeros = 0;
        let mut ones = 0;
        for &i in &system.triads[triad] {
            match values[i] {
                Some(0) => zeros += 1,
                Some(_) => ones += 1,
                None => {}
            }
        }
        zeros <= 1 && ones <= 2
    }

    fn assign(
        system: &TriadSystem,
        triads_touching: &[Vec<usize>],
        values: &mut Vec<Option<u8>>,
        next: usize,
    ) -> bool {
        if next == values.len() {
            return true;
        }
        for candidate in [1u8, 0u8] {
            values[next] = Some(candidate);
            let ok = triads_touching[next]
                .iter()
                .all(|&t| feasible(system, values, t));
            if ok && assign(system, triads_touching, values, next + 1) {
                return true;
            }
        }
        values[next] = None;
        false
    }

    if assign(system, &triads_touching, &mut values, 0) {
        let values = values.into_iter().map(|v| v.unwrap()).collect();
        let assignment = Assignment { values };
        debug_assert!(system.satisfies(&assignment));
        Some(assignment)
    } else {
        None
    }
}

/// Result of the two-device agreement simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementEstimate {
    /// Fraction of decays where both device types reported the same value.
    pub agreement: f64,
    /// Binomial standard error of the agreement rate.
    pub std_error: f64,
    /// Empirical fraction of decays carrying the value 1.
    pub marginal_one: f64,
    pub n: u64,
}

/// Simulates n decays of a spin-1 singlet read out by two device types.
/// Each decay carries one shared squared-projection value v ∈ {0, 1}
/// with P(v = 1) = `p_one`; a type-1 device reports v, a type-2 device
/// flips it with probability `flip_prob`. Agreement in expectation is
/// 1 − flip_prob, independent of the marginal.
pub fn simulate_spin1_agreement_with_marginal(
    flip_prob: f64,
    p_one: f64,
    n: u64,
    plan: &StreamPlan,
    mode: ExecMode,
) -> Result<AgreementEstimate> {
    for value in [flip_prob, p_one] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidProbability { value });
        }
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let counts = map_batches(mode, batch_count(n), |batch| {
        let mut stream = plan.stream(SLOT_SPIN1, batch);
        let mut agreements = 0u64;
        let mut ones = 0u64;
        for _ in 0..batch_len(n, batch) {
            let v_is_one = stream.next_f64() < p_one;
            let flipped = stream.next_f64() < flip_prob;
            if v_is_one {
                ones += 1;
            }
            if !flipped {
                agreements += 1;
            }
        }
        (agreements, ones)
    });
    let agreements: u64 = counts.iter().map(|(a, _)| a).sum();
    let ones: u64 = counts.iter().map(|(_, o)| o).sum();
    let agreement = agreements as f64 / n as f64;
    let std_error = (agreement * (1.0 - agreement) / n as f64).sqrt();
    Ok(AgreementEstimate {
        agreement,
        std_error,
        marginal_one: ones as f64 / n as f64,
        n,
    })
}

/// `simulate_spin1_agreement_with_marginal` at the spin-1 marginal
/// P(v = 1) = 2/3 implied by the one-0-two-1s rule under symmetry.
pub fn simulate_spin1_agreement(
    flip_prob: f64,
    n: u64,
    plan: &StreamPlan,
    mode: ExecMode,
) -> Result<AgreementEstimate> {
    simulate_spin1_agreement_with_marginal(flip_prob, 2.0 / 3.0, n, plan, mode)
}

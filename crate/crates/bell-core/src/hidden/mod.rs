//! Hidden-variable models and CHSH estimation under two sampling regimes.
//!
//! The experiment measures four direction pairs (contexts). In the
//! shared regime every context evaluates its outcomes on one common
//! collection of hidden states, which is exactly the premise of the
//! I ≤ 1/2 bound, and the empirical estimate obeys that bound for every
//! finite sample. In the disjoint regime each context owns an
//! independent random stream and draws its own states, so no common
//! collection exists and the bound's derivation does not apply.

mod disjoint;
mod estimate;
mod models;

pub use disjoint::{
    chsh_disjoint, draw_context_sample, ContextSample, ContextSampler, DisjointOutcome,
    ModelContextSampler, QuantumContextSampler,
};
pub use estimate::{
    chsh_shared, chsh_shared_estimate, draw_shared_sample, estimate_correlation,
    estimate_correlation_on, pointwise_bell_identity, sample_lambda,
};
pub use models::{ConstantModel, HashResponseModel, ResponseModel, SignModel};

use crate::quantum::Direction;

/// Labels for the four contexts, in report order.
pub const CONTEXT_LABELS: [&str; 4] = ["ab", "ab'", "a'b", "a'b'"];

/// Identity of one drawn hidden state: the stream it came from and its
/// draw index there. Unique within a run by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId {
    pub stream: u64,
    pub index: u64,
}

/// One hidden state λ: a point on the unit sphere plus its identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalState {
    pub lambda: [f64; 3],
    pub id: StateId,
}

impl PhysicalState {
    pub fn norm(&self) -> f64 {
        self.lambda.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// One device type: the analyzer direction pair it measures.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementContext {
    pub a: Direction,
    pub b: Direction,
    pub device_type: String,
}

impl MeasurementContext {
    pub fn new(a: Direction, b: Direction, device_type: impl Into<String>) -> Self {
        Self {
            a,
            b,
            device_type: device_type.into(),
        }
    }

    /// Separation angle of the pair, in [0, π].
    pub fn theta(&self) -> f64 {
        self.a.angle_between(&self.b)
    }
}

/// The CHSH direction quadruple (a, b, a', b').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub a: Direction,
    pub b: Direction,
    pub a2: Direction,
    pub b2: Direction,
}

impl Angles {
    pub fn new(a: f64, b: f64, a2: f64, b2: f64) -> Self {
        Self {
            a: Direction::new(a),
            b: Direction::new(b),
            a2: Direction::new(a2),
            b2: Direction::new(b2),
        }
    }

    /// The four measurement contexts in report order:
    /// (a,b), (a,b'), (a',b), (a',b').
    pub fn contexts(&self) -> [MeasurementContext; 4] {
        [
            MeasurementContext::new(self.a, self.b, CONTEXT_LABELS[0]),
            MeasurementContext::new(self.a, self.b2, CONTEXT_LABELS[1]),
            MeasurementContext::new(self.a2, self.b, CONTEXT_LABELS[2]),
            MeasurementContext::new(self.a2, self.b2, CONTEXT_LABELS[3]),
        ]
    }

    pub fn as_array(&self) -> [f64; 4] {
        [
            self.a.angle(),
            self.b.angle(),
            self.a2.angle(),
            self.b2.angle(),
        ]
    }
}

/// An empirical correlation: mean outcome product, its standard error,
/// and the trial count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n: u64,
}

impl CorrelationEstimate {
    /// Builds the estimate from the trial count and the net product sign
    /// count (trials with product +1/4 minus trials with −1/4). Outcome
    /// products are exactly ±1/4, so the sum of squares is n/16 exactly
    /// and the sample variance has the closed form n(1/16 − mean²)/(n−1).
    pub fn from_net_quarters(net: i64, n: u64) -> Self {
        assert!(n >= 1, "estimate requires at least one trial");
        assert!(net.unsigned_abs() <= n, "net sign count exceeds trials");
        let value = net as f64 / (4.0 * n as f64);
        let std_error = if n < 2 {
            0.0
        } else {
            ((0.0625 - value * value).max(0.0) / (n - 1) as f64).sqrt()
        };
        Self {
            value,
            std_error,
            n,
        }
    }
}

/// The CHSH statistic assembled from the four per-context estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshEstimate {
    /// Per-context correlations, in `CONTEXT_LABELS` order.
    pub contexts: [CorrelationEstimate; 4],
    /// |E(a,b) − E(a,b')| + |E(a',b) + E(a',b')|.
    pub i: f64,
    /// Root-sum-square of the four standard errors. For shared sampling
    /// the four estimates are correlated, so this is only indicative.
    pub i_std_error: f64,
}

impl ChshEstimate {
    pub fn from_contexts(contexts: [CorrelationEstimate; 4]) -> Self {
        let [e0, e1, e2, e3] = contexts;
        let i = (e0.value - e1.value).abs() + (e2.value + e3.value).abs();
        let i_std_error = contexts
            .iter()
            .map(|c| c.std_error * c.std_error)
            .sum::<f64>()
            .sqrt();
        Self {
            contexts,
            i,
            i_std_error,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_arithmetic_is_exact_for_pure_samples() {
        let all_minus = CorrelationEstimate::from_net_quarters(-100, 100);
        assert_eq!(all_minus.value, -0.25);
        assert_eq!(all_minus.std_error, 0.0);

        let all_plus = CorrelationEstimate::from_net_quarters(7, 7);
        assert_eq!(all_plus.value, 0.25);
    }

    #[test]
    fn balanced_sample_has_binomial_error() {
        let e = CorrelationEstimate::from_net_quarters(0, 10_001);
        assert_eq!(e.value, 0.0);
        // se = sqrt(1/16 / (n−1)) = 1/(4√(n−1)).
        assert!((e.std_error - 0.0025).abs() < 1e-9);
    }

    #[test]
    fn single_trial_has_zero_error() {
        let e = CorrelationEstimate::from_net_quarters(1, 1);
        assert_eq!(e.std_error, 0.0);
        assert_eq!(e.n, 1);
    }

    #[test]
    fn chsh_combines_in_report_order() {
        let est = |v: f64| CorrelationEstimate {
            value: v,
            std_error: 0.01,
            n: 4,
        };
        let chsh = ChshEstimate::from_contexts([est(-0.25), est(0.25), est(-0.25), est(-0.25)]);
        assert_eq!(chsh.i, 1.0);
        assert!((chsh.i_std_error - 0.02).abs() < 1e-15);
    }

    #[test]
    fn context_layout_follows_the_quadruple() {
        let angles = Angles::new(0.0, 0.5, 1.0, 1.5);
        let contexts = angles.contexts();
        assert_eq!(contexts[0].device_type, "ab");
        assert_eq!(contexts[1].a.angle(), 0.0);
        assert_eq!(contexts[1].b.angle(), 1.5);
        assert_eq!(contexts[2].a.angle(), 1.0);
        assert_eq!(contexts[2].b.angle(), 0.5);
        assert_eq!(contexts[3].device_type, "a'b'");
    }
}

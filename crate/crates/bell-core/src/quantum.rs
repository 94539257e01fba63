//! Closed-form predictions for the spin-1/2 singlet pair.
//!
//! Both analyzers measure a spin projection along a planar direction and
//! report ±1/2. For analyzer angles separated by θ the correlation of the
//! two outcomes is E(θ) = −¼cosθ: perfect anticorrelation at θ = 0,
//! independence at θ = π/2. The joint outcome distribution is pinned down
//! by that correlation plus uniform marginals and exchange symmetry.

use crate::error::{Error, Result};
use crate::rng::StateStream;

/// A measurement direction in the analyzer plane, as an angle normalized
/// into [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    angle: f64,
}

impl Direction {
    pub fn new(angle: f64) -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut normalized = angle.rem_euclid(two_pi);
        // rem_euclid can round up to the modulus itself.
        if normalized >= two_pi {
            normalized = 0.0;
        }
        Self { angle: normalized }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Separation angle between the two directions, in [0, π].
    pub fn angle_between(&self, other: &Direction) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let diff = (self.angle - other.angle).rem_euclid(two_pi);
        diff.min(two_pi - diff)
    }

    /// Embedding into 3-space, in the measurement plane.
    pub fn unit_vector(&self) -> [f64; 3] {
        [self.angle.cos(), self.angle.sin(), 0.0]
    }
}

/// One detector reading: spin projection +1/2 or −1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinOutcome {
    Plus,
    Minus,
}

impl SpinOutcome {
    pub fn value(&self) -> f64 {
        match self {
            SpinOutcome::Plus => 0.5,
            SpinOutcome::Minus => -0.5,
        }
    }

    pub fn flipped(&self) -> SpinOutcome {
        match self {
            SpinOutcome::Plus => SpinOutcome::Minus,
            SpinOutcome::Minus => SpinOutcome::Plus,
        }
    }
}

/// The pair of readings from one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutcomePair {
    pub a: SpinOutcome,
    pub b: SpinOutcome,
}

impl OutcomePair {
    /// Product of the two readings, exactly ±1/4.
    pub fn product(&self) -> f64 {
        self.a.value() * self.b.value()
    }

    pub fn same_sign(&self) -> bool {
        self.a == self.b
    }
}

const PAIRS: [OutcomePair; 4] = [
    OutcomePair {
        a: SpinOutcome::Plus,
        b: SpinOutcome::Plus,
    },
    OutcomePair {
        a: SpinOutcome::Plus,
        b: SpinOutcome::Minus,
    },
    OutcomePair {
        a: SpinOutcome::Minus,
        b: SpinOutcome::Plus,
    },
    OutcomePair {
        a: SpinOutcome::Minus,
        b: SpinOutcome::Minus,
    },
];

/// Joint distribution of the four outcome pairs at separation θ:
/// p(same signs) = sin²(θ/2) split equally between (+,+) and (−,−),
/// p(opposite) = cos²(θ/2) split equally. Marginals are uniform and the
/// product expectation equals −¼cosθ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPmf {
    theta: f64,
    p_same: f64,
    expectation: f64,
}

impl JointPmf {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Probability that the two readings share a sign.
    pub fn p_same_sign(&self) -> f64 {
        self.p_same
    }

    pub fn probability(&self, pair: OutcomePair) -> f64 {
        if pair.same_sign() {
            self.p_same / 2.0
        } else {
            (1.0 - self.p_same) / 2.0
        }
    }

    /// All four entries in the fixed order (++, +−, −+, −−).
    pub fn probabilities(&self) -> [(OutcomePair, f64); 4] {
        PAIRS.map(|pair| (pair, self.probability(pair)))
    }

    /// Expectation of the outcome product, −¼cosθ, computed directly
    /// rather than from the rounded probabilities.
    pub fn expectation(&self) -> f64 {
        self.expectation
    }

    /// One trial; always consumes exactly two uniform draws, so the
    /// stream position after n trials is independent of the outcomes.
    pub fn sample(&self, stream: &mut StateStream) -> OutcomePair {
        let same = stream.next_f64() < self.p_same;
        let a = if stream.next_f64() < 0.5 {
            SpinOutcome::Plus
        } else {
            SpinOutcome::Minus
        };
        let b = if same { a } else { a.flipped() };
        OutcomePair { a, b }
    }
}

/// The singlet joint pmf at separation θ ∈ [0, π].
pub fn singlet_joint_pmf(theta: f64) -> Result<JointPmf> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::ThetaOutOfRange { theta });
    }
    let cos = theta.cos();
    Ok(JointPmf {
        theta,
        p_same: (1.0 - cos) / 2.0,
        expectation: -0.25 * cos,
    })
}

/// Quantum correlation of the two ±1/2 readings: −¼cos θ_ab.
pub fn quantum_correlation(a: Direction, b: Direction) -> f64 {
    -0.25 * a.angle_between(&b).cos()
}

/// One sampled trial at separation θ ∈ [0, π].
pub fn sample_pair(theta: f64, stream: &mut StateStream) -> Result<OutcomePair> {
    Ok(singlet_joint_pmf(theta)?.sample(stream))
}

/// The two-context combination |E(a,b) − E(a,b')| + |E(a',b) + E(a',b')|
/// for any correlation function E.
pub fn chsh_value<E>(correlation: E, a: Direction, b: Direction, a2: Direction, b2: Direction) -> f64
where
    E: Fn(Direction, Direction) -> f64,
{
    (correlation(a, b) - correlation(a, b2)).abs()
        + (correlation(a2, b) + correlation(a2, b2)).abs()
}

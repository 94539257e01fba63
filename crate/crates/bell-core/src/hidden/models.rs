//! Deterministic response models: one ±1/2 outcome per (direction, state).

use crate::hidden::PhysicalState;
use crate::quantum::{Direction, SpinOutcome};

/// A local deterministic outcome rule. The same (direction, state) pair
/// always produces the same reading, and readings are exactly ±1/2.
pub trait ResponseModel: Sync {
    fn label(&self) -> &str;
    fn respond_a(&self, direction: Direction, state: &PhysicalState) -> SpinOutcome;
    fn respond_b(&self, direction: Direction, state: &PhysicalState) -> SpinOutcome;

    /// Product of the two wings' readings, exactly ±1/4.
    fn product(&self, a: Direction, b: Direction, state: &PhysicalState) -> f64 {
        self.respond_a(a, state).value() * self.respond_b(b, state).value()
    }
}

/// The hemisphere rule: wing A reads +1/2 when λ lies on the â side of
/// the equator (ties count as +1/2), wing B reads the opposite of what A
/// would read along its own axis. Anticorrelation at equal settings is
/// exact, and the population correlation is linear in the separation:
/// E(θ) = −¼(1 − 2θ/π).
#[derive(Debug, Clone, Copy, Default)]
pub struct SignModel;

impl SignModel {
    /// Closed-form population correlation at separation θ ∈ [0, π].
    pub fn analytic_correlation(theta: f64) -> f64 {
        -0.25 * (1.0 - 2.0 * theta / std::f64::consts::PI)
    }

    fn hemisphere(direction: Direction, state: &PhysicalState) -> SpinOutcome {
        let axis = direction.unit_vector();
        let dot = axis[0] * state.lambda[0] + axis[1] * state.lambda[1] + axis[2] * state.lambda[2];
        if dot >= 0.0 {
            SpinOutcome::Plus
        } else {
            SpinOutcome::Minus
        }
    }
}

impl ResponseModel for SignModel {
    fn label(&self) -> &str {
        "lhv-sign"
    }

    fn respond_a(&self, direction: Direction, state: &PhysicalState) -> SpinOutcome {
        Self::hemisphere(direction, state)
    }

    fn respond_b(&self, direction: Direction, state: &PhysicalState) -> SpinOutcome {
        Self::hemisphere(direction, state).flipped()
    }
}

/// Fixed readings regardless of direction and state.
#[derive(Debug, Clone, Copy)]
pub struct ConstantModel {
    pub a: SpinOutcome,
    pub b: SpinOutcome,
}

impl ResponseModel for ConstantModel {
    fn label(&self) -> &str {
        "constant"
    }

    fn respond_a(&self, _direction: Direction, _state: &PhysicalState) -> SpinOutcome {
        self.a
    }

    fn respond_b(&self, _direction: Direction, _state: &PhysicalState) -> SpinOutcome {
        self.b
    }
}

/// Adversarial stress model: readings are a deterministic hash of the
/// direction, the state, and a salt, so sweeping salts explores wild
/// response rules while staying a legitimate deterministic model.
#[derive(Debug, Clone, Copy)]
pub struct HashResponseModel {
    pub salt: u64,
}

impl HashResponseModel {
    fn mix(mut x: u64) -> u64 {
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
        x ^ (x >> 31)
    }

    fn respond(&self, wing: u64, direction: Direction, state: &PhysicalState) -> SpinOutcome {
        let mut h = Self::mix(self.salt ^ wing);
        h = Self::mix(h ^ direction.angle().to_bits());
        for component in state.lambda {
            h = Self::mix(h ^ component.to_bits());
        }
        h = Self::mix(h ^ state.id.stream ^ state.id.index.rotate_left(17));
        if h & 1 == 0 {
            SpinOutcome::Plus
        } else {
            SpinOutcome::Minus
        }
    }
}

impl ResponseModel for HashResponseModel {
    fn label(&self) -> &str {
        "hash"
    }

    fn respond_a(&self, direction: Direction, state: &PhysicalState) -> SpinOutcome {
        self.respond(0x0a, direction, state)
    }

    fn respond_b(&self, direction: Direction, state: &PhysicalState) -> SpinOutcome {
        self.respond(0x0b, direction, state)
    }
}

//! Sampling hidden states and estimating correlations on a shared sample.

use crate::error::{Error, Result};
use crate::exec::{batch_count, batch_len, map_batches, ExecMode};
use crate::hidden::{
    Angles, ChshEstimate, CorrelationEstimate, PhysicalState, ResponseModel, StateId,
};
use crate::quantum::Direction;
use crate::rng::{StateStream, StreamPlan, SLOT_SHARED};

/// Draws one hidden state, uniform on the unit sphere, consuming exactly
/// two uniforms. The identity tag records the stream and draw index.
pub fn sample_lambda(stream: &mut StateStream) -> PhysicalState {
    let index = stream.next_state_index();
    let z = 2.0 * stream.next_f64() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * stream.next_f64();
    let r = (1.0 - z * z).max(0.0).sqrt();
    PhysicalState {
        lambda: [r * phi.cos(), r * phi.sin(), z],
        id: StateId {
            stream: stream.stream_id(),
            index,
        },
    }
}

/// Draws the one state collection that all four contexts will share.
/// Batches are generated on their own substreams and concatenated in
/// batch order, so the result is identical in both execution modes.
pub fn draw_shared_sample(plan: &StreamPlan, n: u64, mode: ExecMode) -> Result<Vec<PhysicalState>> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let chunks = map_batches(mode, batch_count(n), |batch| {
        let mut stream = plan.stream(SLOT_SHARED, batch);
        (0..batch_len(n, batch))
            .map(|_| sample_lambda(&mut stream))
            .collect::<Vec<_>>()
    });
    Ok(chunks.into_iter().flatten().collect())
}

fn net_quarters<M>(model: &M, a: Direction, b: Direction, states: &[PhysicalState]) -> i64
where
    M: ResponseModel + ?Sized,
{
    states
        .iter()
        .map(|state| {
            if model.product(a, b, state) > 0.0 {
                1i64
            } else {
                -1i64
            }
        })
        .sum()
}

/// Empirical correlation of the model's outcome products over `states`,
/// split into fixed-size chunks so both execution modes sum the same
/// integers in the same order.
pub fn estimate_correlation_on<M>(
    mode: ExecMode,
    model: &M,
    a: Direction,
    b: Direction,
    states: &[PhysicalState],
) -> Result<CorrelationEstimate>
where
    M: ResponseModel + ?Sized,
{
    if states.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = states.len() as u64;
    let nets = map_batches(mode, batch_count(n), |batch| {
        let start = (batch * crate::exec::BATCH_SIZE) as usize;
        let len = batch_len(n, batch) as usize;
        net_quarters(model, a, b, &states[start..start + len])
    });
    Ok(CorrelationEstimate::from_net_quarters(
        nets.iter().sum(),
        n,
    ))
}

/// Sequential form of `estimate_correlation_on`.
pub fn estimate_correlation<M>(
    model: &M,
    a: Direction,
    b: Direction,
    states: &[PhysicalState],
) -> Result<CorrelationEstimate>
where
    M: ResponseModel + ?Sized,
{
    estimate_correlation_on(ExecMode::Sequential, model, a, b, states)
}

/// All four context correlations evaluated on the SAME state collection,
/// combined into the CHSH statistic. This is the shared-probability-space
/// setup, so the result never exceeds 1/2 up to rounding.
pub fn chsh_shared_estimate<M>(
    mode: ExecMode,
    model: &M,
    angles: &Angles,
    states: &[PhysicalState],
) -> Result<ChshEstimate>
where
    M: ResponseModel + ?Sized,
{
    let contexts = angles.contexts();
    let mut estimates = [CorrelationEstimate {
        value: 0.0,
        std_error: 0.0,
        n: 0,
    }; 4];
    for (slot, context) in contexts.iter().enumerate() {
        estimates[slot] = estimate_correlation_on(mode, model, context.a, context.b, states)?;
    }
    Ok(ChshEstimate::from_contexts(estimates))
}

/// The CHSH statistic on a shared sample; see `chsh_shared_estimate`.
pub fn chsh_shared<M>(model: &M, angles: &Angles, states: &[PhysicalState]) -> Result<f64>
where
    M: ResponseModel + ?Sized,
{
    Ok(chsh_shared_estimate(ExecMode::Sequential, model, angles, states)?.i)
}

/// Evaluates (|B_b − B_b'|, |B_b + B_b'|) for one state. With ±1/2
/// readings one entry is exactly 0 and the other exactly 1, which is the
/// pointwise identity behind the 1/2 bound.
pub fn pointwise_bell_identity<M>(
    model: &M,
    b: Direction,
    b2: Direction,
    state: &PhysicalState,
) -> (f64, f64)
where
    M: ResponseModel + ?Sized,
{
    let first = model.respond_b(b, state).value();
    let second = model.respond_b(b2, state).value();
    ((first - second).abs(), (first + second).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hidden::{ConstantModel, HashResponseModel, SignModel};
    use crate::quantum::SpinOutcome;
    use crate::rng::SLOT_SCRATCH;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn lambda_lies_on_the_sphere_with_unique_ids() {
        let plan = StreamPlan::new(17);
        let states = draw_shared_sample(&plan, 40_000, ExecMode::Sequential).unwrap();
        let mut ids: Vec<_> = states.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), states.len());
        for state in &states {
            assert!((state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_moments_match_the_uniform_law() {
        let plan = StreamPlan::new(20260819);
        let states = draw_shared_sample(&plan, 200_000, ExecMode::Sequential).unwrap();
        let n = states.len() as f64;
        for axis in 0..3 {
            let mean = states.iter().map(|s| s.lambda[axis]).sum::<f64>() / n;
            assert!(mean.abs() < 0.006, "axis {axis}: mean = {mean}");
        }
        let zz = states.iter().map(|s| s.lambda[2] * s.lambda[2]).sum::<f64>() / n;
        assert!((zz - 1.0 / 3.0).abs() < 0.004, "zz = {zz}");
    }

    #[test]
    fn shared_sample_is_mode_independent() {
        let plan = StreamPlan::new(8);
        let seq = draw_shared_sample(&plan, 50_000, ExecMode::Sequential).unwrap();
        let par = draw_shared_sample(&plan, 50_000, ExecMode::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn equal_settings_estimate_is_exactly_minus_quarter() {
        let plan = StreamPlan::new(4);
        let states = draw_shared_sample(&plan, 1000, ExecMode::Sequential).unwrap();
        let d = Direction::new(1.1);
        let e = estimate_correlation(&SignModel, d, d, &states).unwrap();
        assert_eq!(e.value, -0.25);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn constant_model_estimate_is_exactly_plus_quarter() {
        let plan = StreamPlan::new(4);
        let states = draw_shared_sample(&plan, 257, ExecMode::Sequential).unwrap();
        let m = ConstantModel {
            a: SpinOutcome::Plus,
            b: SpinOutcome::Plus,
        };
        let e = estimate_correlation(&m, Direction::new(0.0), Direction::new(2.0), &states).unwrap();
        assert_eq!(e.value, 0.25);
    }

    #[test]
    fn estimate_ignores_state_order() {
        let plan = StreamPlan::new(12);
        let mut states = draw_shared_sample(&plan, 5000, ExecMode::Sequential).unwrap();
        let a = Direction::new(0.4);
        let b = Direction::new(2.2);
        let before = estimate_correlation(&SignModel, a, b, &states).unwrap();
        states.reverse();
        states.swap(0, 2500);
        let after = estimate_correlation(&SignModel, a, b, &states).unwrap();
        assert_eq!(before.value, after.value);
        assert_eq!(before.std_error, after.std_error);
    }

    #[test]
    fn empty_sample_is_rejected() {
        let err = estimate_correlation(&SignModel, Direction::new(0.0), Direction::new(1.0), &[]);
        assert!(matches!(err, Err(Error::EmptySample)));
        assert!(matches!(
            draw_shared_sample(&StreamPlan::new(0), 0, ExecMode::Sequential),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn shared_chsh_never_exceeds_half() {
        let plan = StreamPlan::new(77);
        let states = draw_shared_sample(&plan, 4000, ExecMode::Sequential).unwrap();
        let angles = Angles::new(0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4);
        let i = chsh_shared(&SignModel, &angles, &states).unwrap();
        assert!(i <= 0.5 + 1e-12, "I = {i}");
        for salt in 0..20 {
            let m = HashResponseModel { salt };
            let i = chsh_shared(&m, &angles, &states).unwrap();
            assert!(i <= 0.5 + 1e-12, "salt {salt}: I = {i}");
        }
    }

    #[test]
    fn pointwise_identity_is_exact() {
        let plan = StreamPlan::new(5);
        let mut stream = plan.stream(SLOT_SCRATCH, 0);
        // Aligned settings: B readings coincide, so the pair is (0, 1).
        let state = sample_lambda(&mut stream);
        let b = Direction::new(0.7);
        assert_eq!(pointwise_bell_identity(&SignModel, b, b, &state), (0.0, 1.0));
        // Opposed settings with λ on the axis: readings differ, (1, 0).
        let on_axis = PhysicalState {
            lambda: [1.0, 0.0, 0.0],
            id: state.id,
        };
        assert_eq!(
            pointwise_bell_identity(&SignModel, Direction::new(0.0), Direction::new(PI), &on_axis),
            (1.0, 0.0)
        );
        // Every case lands on a permutation of (0, 1).
        for salt in 0..8 {
            let m = HashResponseModel { salt };
            for _ in 0..100 {
                let s = sample_lambda(&mut stream);
                let b2 = Direction::new(stream.next_f64() * 7.0);
                let pair = pointwise_bell_identity(&m, b, b2, &s);
                assert!(pair == (0.0, 1.0) || pair == (1.0, 0.0));
            }
        }
    }
}

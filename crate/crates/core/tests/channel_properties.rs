//! Invariants of the signalling probabilities and the shell machinery.

use lrspread::channel::{
    causal_boundary, ghz_signal, lower_bound_window, lr_bound_envelope, product_signal, product_signal_lower_bound,
    BoundParams, ChannelSetup, InitialState,
};
use lrspread::LatticeSpec;
use proptest::prelude::*;

fn chain(len: usize, delta: usize, alpha: f64, state: InitialState) -> ChannelSetup {
    ChannelSetup::new(LatticeSpec::chain(len).unwrap(), delta, alpha, state).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn probabilities_lie_in_unit_interval(
        len in 5usize..400,
        delta_frac in 0.0f64..1.0,
        alpha in 0.0f64..3.0,
        t in 0.0f64..50.0,
    ) {
        let max_delta = (len - 1) / 2;
        let delta = 1 + (delta_frac * (max_delta - 1) as f64) as usize;
        let p = product_signal(&chain(len, delta, alpha, InitialState::ProductPlus), t).unwrap();
        let g = ghz_signal(&chain(len, delta, alpha, InitialState::Ghz), t).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((0.0..=1.0).contains(&g));
    }

    #[test]
    fn product_signal_dominates_its_lower_bound(
        len in 5usize..400,
        delta_frac in 0.0f64..1.0,
        alpha in 0.0f64..3.0,
        s in 0.0f64..=1.0,
    ) {
        let max_delta = (len - 1) / 2;
        let delta = 1 + (delta_frac * (max_delta - 1) as f64) as usize;
        let setup = chain(len, delta, alpha, InitialState::ProductPlus);
        let t = s * lower_bound_window(&setup);
        let p = product_signal(&setup, t).unwrap();
        let lb = product_signal_lower_bound(&setup, t).unwrap();
        prop_assert!(p >= lb, "p = {p}, bound = {lb}");
    }

    #[test]
    fn product_signal_is_monotone_in_receiver_region(
        alpha in 0.0f64..2.0,
        t in 0.0f64..1.0,
        delta in 1usize..20,
    ) {
        // Removing receivers can only lower the signal.
        let near = product_signal(&chain(101, delta, alpha, InitialState::ProductPlus), t).unwrap();
        let far = product_signal(&chain(101, delta + 1, alpha, InitialState::ProductPlus), t).unwrap();
        prop_assert!(near >= far);
    }

    #[test]
    fn shell_sums_decrease_with_distance_and_exponent(
        side in 3usize..40,
        dim in 1usize..4,
        delta in 0usize..20,
        exponent in 0.0f64..4.0,
    ) {
        let side = if dim == 3 { side.min(15) } else { side };
        let lat = LatticeSpec::hypercube(dim, side).unwrap();
        let shells = lat.shell_counts(lat.origin()).unwrap();
        let a = shells.shell_sum(delta, exponent).unwrap();
        let b = shells.shell_sum(delta + 1, exponent).unwrap();
        let c = shells.shell_sum(delta, exponent + 0.5).unwrap();
        prop_assert!(a >= b);
        prop_assert!(a >= c);
    }

    #[test]
    fn causal_boundary_inverts_the_envelope(
        c in 0.01f64..10.0,
        v in 0.1f64..10.0,
        eps in 1e-6f64..0.5,
        delta in 1usize..200,
        extra in 0.01f64..3.0,
    ) {
        let alpha = 1.0 + extra;
        let params = BoundParams { c, v, xi: 1.0, epsilon: eps, size_a: 1, size_b: 1 };
        let t = causal_boundary(&params, alpha, 1, delta).unwrap();
        let env = lr_bound_envelope(&params, alpha, 1, delta, t).unwrap();
        prop_assert!(((env - eps) / eps).abs() < 1e-9);
    }
}

#[test]
fn elementary_inequalities() {
    for i in 0..=10_000 {
        let x = i as f64 / 10_000.0;
        assert!(x.cos() <= 1.0 - 0.4 * x * x + f64::EPSILON, "cos at {x}");
    }
    for i in 0..10_000 {
        let x = i as f64 / 10_000.0;
        assert!((-x).ln_1p() <= -x, "log at {x}");
    }
}

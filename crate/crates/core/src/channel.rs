//! Signal probabilities of the long-range Ising-type channel Hamiltonian
//!
//! `H = (1 - Z_o)/2 * sum_{j in B} (1 + dist(o, j))^{-alpha} (1 - Z_j)`
//!
//! together with the long-range Lieb-Robinson envelope and its causal boundary.
//! The receiver region `B` is always the full exterior `{j : dist(o, j) >= delta}`.

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::lattice::{LatticeSpec, ShellTable};
use crate::numeric::CompensatedSum;

/// Multiplier on `t * f(delta)` in the GHZ phase.
///
/// The GHZ-projector measurement accumulates phase `2 t c_j` per receiver
/// (the same `2t` that appears in the product-state formula); the exact
/// state-vector simulation in the tests pins this value.
pub const GHZ_PHASE_FACTOR: f64 = 2.0;

/// Bisection tolerance in `t` for threshold crossings.
pub const CROSSING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    ProductPlus,
    Ghz,
}

/// Sender at the lattice origin, receivers at distance `>= delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSetup {
    lattice: LatticeSpec,
    delta: usize,
    alpha: f64,
    state: InitialState,
    shells: ShellTable,
}

impl ChannelSetup {
    pub fn new(lattice: LatticeSpec, delta: usize, alpha: f64, state: InitialState) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::input(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        if delta == 0 {
            return Err(Error::input("receiver distance delta must be positive"));
        }
        let shells = lattice.shell_counts(lattice.origin())?;
        if delta > shells.max_distance() {
            return Err(Error::input(format!(
                "receiver region empty: delta {delta} exceeds largest distance {}",
                shells.max_distance()
            )));
        }
        Ok(ChannelSetup { lattice, delta, alpha, state, shells })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn initial_state(&self) -> InitialState {
        self.state
    }

    pub fn shells(&self) -> &ShellTable {
        &self.shells
    }

    /// `|B|`
    pub fn receiver_count(&self) -> u64 {
        self.shells.exterior_size(self.delta)
    }

    /// `f(delta) = sum_{j in B} (1 + dist(o, j))^{-alpha}`
    pub fn ghz_coupling_sum(&self) -> f64 {
        self.shells
            .shell_sum(self.delta, self.alpha)
            .expect("alpha validated at construction")
    }

    fn require(&self, state: InitialState) -> Result<()> {
        if self.state == state {
            Ok(())
        } else {
            Err(Error::input(format!(
                "setup prepared for {:?}, operation needs {state:?}",
                self.state
            )))
        }
    }

    /// Same lattice and exponent, different receiver distance.
    pub fn at_delta(&self, delta: usize) -> Result<Self> {
        if delta == 0 || delta > self.shells.max_distance() {
            return Err(Error::input(format!("delta {delta} outside 1..={}", self.shells.max_distance())));
        }
        Ok(ChannelSetup { delta, ..self.clone() })
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!("time must be finite and >= 0, got {t}")))
    }
}

/// `ln[(1 + cos x) / 2] = 2 ln|cos(x/2)|`, accurate for small `x`.
fn ln_half_one_plus_cos(x: f64) -> f64 {
    let s = (x / 4.0).sin();
    let c = (-2.0 * s * s).ln_1p();
    if c.is_nan() {
        // cos(x/2) < 0: fall back to the absolute value
        2.0 * (x / 2.0).cos().abs().ln()
    } else {
        2.0 * c
    }
}

/// Signal probability for the `|+>`-product receiver state,
/// `p_t = 1 - prod_{j in B} [1 + cos(2t / (1 + dist)^alpha)] / 2`, summed in log space.
pub fn product_signal(setup: &ChannelSetup, t: f64) -> Result<f64> {
    setup.require(InitialState::ProductPlus)?;
    check_time(t)?;
    let mut log_survival = CompensatedSum::new();
    for (l, &n) in setup.shells.counts.iter().enumerate().skip(setup.delta) {
        if n == 0 {
            continue;
        }
        let x = 2.0 * t * (1.0 + l as f64).powf(-setup.alpha);
        let term = ln_half_one_plus_cos(x);
        if term == f64::NEG_INFINITY {
            return Ok(1.0);
        }
        log_survival.add(n as f64 * term);
    }
    Ok((-log_survival.value().exp_m1()).clamp(0.0, 1.0))
}

/// Upper end of the time window in which the lower bound holds, `(1 + delta)^alpha / 2`.
pub fn lower_bound_window(setup: &ChannelSetup) -> f64 {
    0.5 * (1.0 + setup.delta as f64).powf(setup.alpha)
}

/// `1 - exp[-(4t^2/5) sum_{j in B} (1 + dist)^{-2 alpha}]`, valid for `2t <= (1 + delta)^alpha`.
pub fn product_signal_lower_bound(setup: &ChannelSetup, t: f64) -> Result<f64> {
    setup.require(InitialState::ProductPlus)?;
    check_time(t)?;
    let window = lower_bound_window(setup);
    if t > window {
        return Err(Error::Precondition(format!(
            "lower bound requires 2t <= (1 + delta)^alpha, i.e. t <= {window} (got t = {t})"
        )));
    }
    let s = setup.shells.shell_sum(setup.delta, 2.0 * setup.alpha)?;
    Ok((-(-0.8 * t * t * s).exp_m1()).clamp(0.0, 1.0))
}

/// GHZ-receiver signal probability `1 - [1 + cos(phase)] / 2` with
/// `phase = GHZ_PHASE_FACTOR * t * f(delta)`.
pub fn ghz_signal(setup: &ChannelSetup, t: f64) -> Result<f64> {
    setup.require(InitialState::Ghz)?;
    check_time(t)?;
    let phase = GHZ_PHASE_FACTOR * t * setup.ghz_coupling_sum();
    let s = (0.5 * phase).sin();
    Ok(s * s)
}

/// Earliest `t` with `ghz_signal >= epsilon`, by bisection on the monotone
/// branch `phase in [0, pi]`.
pub fn ghz_arrival_time(setup: &ChannelSetup, epsilon: f64) -> Result<f64> {
    setup.require(InitialState::Ghz)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::input(format!("threshold must lie in (0, 1], got {epsilon}")));
    }
    let f = setup.ghz_coupling_sum();
    let t_peak = PI / (GHZ_PHASE_FACTOR * f);
    bisect_crossing(|t| ghz_signal(setup, t).unwrap_or(0.0), epsilon, 0.0, t_peak)
}

/// Bisection for the first crossing of a curve that increases monotonically
/// from below `level` at `lo` to at least `level` at `hi`.
pub fn bisect_crossing<F: Fn(f64) -> f64>(curve: F, level: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    if curve(hi) < level {
        return Err(Error::input(format!("curve never reaches {level} on [{lo}, {hi}]")));
    }
    if curve(lo) >= level {
        return Ok(lo);
    }
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        if curve(mid) >= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Coefficients `c_m` of the shell size of the infinite `Z^D` lattice written
/// as a polynomial in `x = 1 + l`: `|{r : |r|_1 = l}| = sum_m c_m x^m` for `l >= 1`.
pub fn hypercubic_shell_polynomial(dim: usize) -> Vec<f64> {
    // |shell l| = sum_{k=1}^{D} 2^k C(D, k) C(l - 1, k - 1)
    let mut total = vec![0.0; dim.max(1)];
    for k in 1..=dim {
        // C(l - 1, k - 1) = prod_{i=1}^{k-1} (x - 1 - i) / (k - 1)!
        let mut poly = vec![1.0];
        for i in 1..k {
            let shift = -(1.0 + i as f64);
            let mut next = vec![0.0; poly.len() + 1];
            for (m, &c) in poly.iter().enumerate() {
                next[m + 1] += c;
                next[m] += shift * c;
            }
            poly = next;
        }
        let fact: f64 = (1..k).map(|i| i as f64).product();
        let weight = 2f64.powi(k as i32) * binomial(dim, k) / fact;
        for (m, c) in poly.into_iter().enumerate() {
            total[m] += weight * c;
        }
    }
    total
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `f(delta) = sum_{|r|_1 >= delta} (1 + |r|_1)^{-alpha}` on the infinite `Z^D`, `delta >= 1`.
///
/// Written as `sum_m c_m zeta(alpha - m, 1 + delta)` with the shell polynomial
/// above. For `alpha <= D` the series diverges and the Hurwitz zeta values are
/// analytic continuations, with the pole at `alpha - m = 1` replaced by its
/// finite part. The result is the regularised value of the divergent sum,
/// which carries its `delta` dependence.
pub fn infinite_lattice_tail(dim: usize, alpha: f64, delta: usize) -> Result<f64> {
    if dim == 0 {
        return Err(Error::input("dimension must be positive"));
    }
    if alpha == dim as f64 {
        return Err(Error::domain("alpha equals the lattice dimension; f(delta) grows logarithmically"));
    }
    if !(alpha - (dim as f64 - 1.0) >= -4.0) || !alpha.is_finite() {
        return Err(Error::input(format!("alpha = {alpha} outside the supported range")));
    }
    let a = 1.0 + delta as f64;
    let mut acc = CompensatedSum::new();
    for (m, c) in hypercubic_shell_polynomial(dim).into_iter().enumerate() {
        if c != 0.0 {
            acc.add(c * crate::numeric::hurwitz_zeta_regularized(alpha - m as f64, a));
        }
    }
    Ok(acc.value())
}

/// Least-squares slope of `ln |f(delta)|` against `ln delta` over an inclusive range.
///
/// `f` is the infinite-lattice tail from [`infinite_lattice_tail`]; the lattice
/// must reach at least four times the largest fitted distance from its origin.
/// For `alpha > D` the slope approaches `D - alpha`, for `alpha < D` it is the
/// growth exponent `D - alpha` of the regularised sum.
pub fn ghz_front_exponent(lattice: &LatticeSpec, alpha: f64, delta_range: (usize, usize)) -> Result<f64> {
    let dim = lattice.dimension();
    let (lo, hi) = delta_range;
    if lo == 0 || hi < lo || hi - lo + 1 < 3 {
        return Err(Error::input(format!(
            "need at least 3 distinct positive distances, got {lo}..={hi}"
        )));
    }
    let l_max = lattice.max_distance_from(lattice.origin())?;
    if l_max < 4 * hi {
        return Err(Error::Precondition(format!(
            "lattice too small: largest distance {l_max} < 4 x {hi}"
        )));
    }
    let mut points = Vec::with_capacity(hi - lo + 1);
    for d in lo..=hi {
        let f = infinite_lattice_tail(dim, alpha, d)?;
        if f == 0.0 {
            return Err(Error::domain(format!("f({d}) vanishes; ln|f| undefined")));
        }
        points.push(((d as f64).ln(), f.abs().ln()));
    }
    Ok(crate::analysis::least_squares(&points)?.slope)
}

/// Constants of the long-range Lieb-Robinson bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub c: f64,
    pub v: f64,
    pub xi: f64,
    pub epsilon: f64,
    pub size_a: u64,
    pub size_b: u64,
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64| x > 0.0 && x.is_finite();
        if !(pos(self.c) && pos(self.v) && pos(self.xi) && pos(self.epsilon)) {
            return Err(Error::input(format!("bound constants must be positive: {self:?}")));
        }
        if self.epsilon >= 1.0 {
            return Err(Error::input(format!("epsilon must be < 1, got {}", self.epsilon)));
        }
        if self.size_a == 0 || self.size_b == 0 {
            return Err(Error::input("region sizes must be positive"));
        }
        Ok(())
    }

    fn min_size(&self) -> f64 {
        self.size_a.min(self.size_b) as f64
    }
}

fn check_bound_regime(alpha: f64, dim: usize) -> Result<()> {
    if alpha > dim as f64 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "bound not proven in this regime: alpha = {alpha} <= D = {dim}"
        )))
    }
}

/// `C min(|A|,|B|) (e^{v|t|} - 1) / (1 + delta)^{alpha - D}`, defined for `alpha > D`.
pub fn lr_bound_envelope(params: &BoundParams, alpha: f64, dim: usize, delta: usize, t: f64) -> Result<f64> {
    params.validate()?;
    check_bound_regime(alpha, dim)?;
    let decay = (1.0 + delta as f64).powf(alpha - dim as f64);
    Ok(params.c * params.min_size() * (params.v * t.abs()).exp_m1() / decay)
}

/// Time at which the envelope reaches `epsilon`:
/// `t* = ln[1 + epsilon (1 + delta)^{alpha - D} / (C min(|A|,|B|))] / v`.
///
/// Grows like `(alpha - D) ln(delta) / v`. The exponent is taken as `alpha - D`
/// so that the region widens with distance.
pub fn causal_boundary(params: &BoundParams, alpha: f64, dim: usize, delta: usize) -> Result<f64> {
    params.validate()?;
    check_bound_regime(alpha, dim)?;
    let growth = (1.0 + delta as f64).powf(alpha - dim as f64);
    Ok((params.epsilon * growth / (params.c * params.min_size())).ln_1p() / params.v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Exact,
    LowerBound,
}

/// `p_t` sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalCurve {
    pub times: Vec<f64>,
    pub p: Vec<f64>,
    pub setup: ChannelSetup,
    pub kind: CurveKind,
}

#[derive(Debug, Serialize)]
struct CurveMeta {
    alpha: f64,
    dimension: usize,
    extents: Vec<usize>,
    delta: usize,
    receiver_count: u64,
    state: InitialState,
    kind: CurveKind,
    ghz_phase_factor: f64,
}

impl SignalCurve {
    /// Evaluates the curve on `times` (must be increasing and non-negative).
    pub fn sample(setup: &ChannelSetup, times: &[f64], kind: CurveKind) -> Result<Self> {
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("time grid must be strictly increasing"));
        }
        let eval = |t: f64| match (setup.state, kind) {
            (InitialState::ProductPlus, CurveKind::Exact) => product_signal(setup, t),
            (InitialState::ProductPlus, CurveKind::LowerBound) => product_signal_lower_bound(setup, t),
            (InitialState::Ghz, CurveKind::Exact) => ghz_signal(setup, t),
            (InitialState::Ghz, CurveKind::LowerBound) => {
                Err(Error::input("no lower-bound curve for the GHZ state"))
            }
        };
        let p = times.par_iter().map(|&t| eval(t)).collect::<Result<Vec<_>>>()?;
        Ok(SignalCurve { times: times.to_vec(), p, setup: setup.clone(), kind })
    }

    /// Writes `<stem>.csv` (`t,p`) and `<stem>.json` metadata into `dir`.
    pub fn export(&self, dir: &Path, stem: &str) -> Result<()> {
        let rows = self
            .times
            .iter()
            .zip(&self.p)
            .map(|(&t, &p)| [io::fmt_f64(t), io::fmt_f64(p)]);
        io::write_csv(dir.join(format!("{stem}.csv")), &["t", "p"], rows)?;
        let meta = CurveMeta {
            alpha: self.setup.alpha,
            dimension: self.setup.lattice.dimension(),
            extents: self.setup.lattice.extents().to_vec(),
            delta: self.setup.delta,
            receiver_count: self.setup.receiver_count(),
            state: self.setup.state,
            kind: self.kind,
            ghz_phase_factor: GHZ_PHASE_FACTOR,
        };
        io::write_json(dir.join(format!("{stem}.json")), &meta)
    }
}

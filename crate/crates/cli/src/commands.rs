//! One configuration struct and pipeline per subcommand.
//!
//! Every struct doubles as the clap argument set and the JSON config schema.
//! Parameters without a documented default stay `Option` until
//! `fill_defaults`, so the manifest shows exactly what was used.

use std::path::{Path, PathBuf};

use clap::Args;
use lrspread::analysis::{
    bound_velocity_through, compare_with_bound, extract_front, scaling_study, BoundReport, CausalFront,
    DEFAULT_EPSILON_ANALYTIC, DEFAULT_EPSILON_ED,
};
use lrspread::channel::{
    ghz_arrival_time, ghz_front_exponent, infinite_lattice_tail, lower_bound_window, product_signal, BoundParams,
    ChannelSetup, CurveKind, InitialState, SignalCurve,
};
use lrspread::ed::PropagatorConfig;
use lrspread::ising::{correlation_field, IsingModel};
use lrspread::xxz::{destagger_field, destagger_magnitude_field, run_quench, Observable, QuenchConfig};
use lrspread::{CorrelationField, LatticeSpec};
use serde::{Deserialize, Serialize};

use crate::config::{config_error, require, Window};

/// A subcommand: resolved parameters plus the pipeline that writes artifacts.
pub trait Pipeline: Serialize + serde::de::DeserializeOwned {
    fn fill_defaults(&mut self);

    /// Runs into `dir` and returns a one-line summary. May record
    /// parameters it derived from the inputs.
    fn run(&mut self, dir: &Path) -> anyhow::Result<String>;
}

fn uniform_grid(t_max: f64, dt: f64) -> anyhow::Result<Vec<f64>> {
    if !(dt > 0.0) || !(t_max > 0.0) || !dt.is_finite() || !t_max.is_finite() {
        return Err(config_error(format!("need t_max > 0 and dt > 0, got t_max = {t_max}, dt = {dt}")));
    }
    let steps = (t_max / dt).round() as usize;
    Ok((0..=steps).map(|i| i as f64 * dt).collect())
}

/// Front with a fit over `window`, or over every distance `>= 3` when no
/// window is given. Returns `None` when nothing crosses the threshold.
fn front_with_fit(field: &CorrelationField, epsilon: f64, window: Option<Window>) -> anyhow::Result<Option<CausalFront>> {
    let front = match extract_front(field, epsilon) {
        Ok(f) => f,
        Err(lrspread::Error::EmptyFront { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let window = window.map(Window::pair).unwrap_or_else(|| front.default_window());
    Ok(Some(match front.clone().with_fit(window) {
        Ok(f) => f,
        Err(lrspread::Error::Input(_)) => front,
        Err(e) => return Err(e.into()),
    }))
}

fn describe_front(front: &Option<CausalFront>, n_distances: usize) -> String {
    match front {
        None => "no distance reaches the threshold".into(),
        Some(f) => {
            let fit = match &f.fit {
                Some(fit) => format!("q = {:.4} over {}:{}", fit.q, fit.window.0, fit.window.1),
                None => "too few points to fit".into(),
            };
            format!("{fit}, reached {}/{n_distances} distances", f.deltas.len())
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsingCmd {
    /// Coupling exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Chain length [default: 1001].
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling amplitude J [default: 1].
    #[arg(long)]
    pub j: Option<f64>,
    /// Sender site [default: central site].
    #[arg(long)]
    pub origin: Option<usize>,
    /// Largest distance [default: to the chain end].
    #[arg(long)]
    pub delta_max: Option<usize>,
    /// Final time [default: 2].
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Time resolution [default: 0.01].
    #[arg(long)]
    pub dt: Option<f64>,
    /// Front threshold [default: 1e-3].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fit window `lo:hi` [default: 3 to the farthest reached distance].
    #[arg(long)]
    pub fit: Option<Window>,
}

impl Pipeline for IsingCmd {
    fn fill_defaults(&mut self) {
        let n = *self.n.get_or_insert(1001);
        self.j.get_or_insert(1.0);
        let o = *self.origin.get_or_insert((n.max(1) - 1) / 2);
        self.delta_max.get_or_insert(n.saturating_sub(o + 1));
        self.tmax.get_or_insert(2.0);
        self.dt.get_or_insert(0.01);
        self.epsilon.get_or_insert(DEFAULT_EPSILON_ANALYTIC);
    }

    fn run(&mut self, dir: &Path) -> anyhow::Result<String> {
        let alpha = require(self.alpha, "alpha")?;
        let n = require(self.n, "n")?;
        let model = IsingModel::new(LatticeSpec::chain(n)?, require(self.j, "j")?, alpha)?;
        let grid = uniform_grid(require(self.tmax, "tmax")?, require(self.dt, "dt")?)?;
        let delta_max = require(self.delta_max, "delta_max")?;
        let field = correlation_field(&model, require(self.origin, "origin")?, delta_max, &grid)?;
        field.export(dir, "field")?;
        let front = front_with_fit(&field, require(self.epsilon, "epsilon")?, self.fit)?;
        if let Some(f) = &front {
            f.export(dir, "front")?;
        }
        Ok(format!("ising alpha={alpha} N={n}: {}", describe_front(&front, delta_max)))
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelProductCmd {
    /// Coupling exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lattice dimension [default: 1].
    #[arg(long)]
    pub d: Option<usize>,
    /// Sites per axis [default: 1001].
    #[arg(long)]
    pub length: Option<usize>,
    /// Distance from the sender to the receiver region [default: 1].
    #[arg(long)]
    pub delta: Option<usize>,
    /// Final time [default: 1].
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Number of time samples [default: 101].
    #[arg(long)]
    pub points: Option<usize>,
    /// Also export the lower-bound curve inside its validity window.
    #[arg(long)]
    pub lower_bound: bool,
}

fn time_samples(t_max: f64, points: usize) -> anyhow::Result<Vec<f64>> {
    if points < 2 || !(t_max > 0.0) || !t_max.is_finite() {
        return Err(config_error(format!("need tmax > 0 and at least 2 points, got {t_max} and {points}")));
    }
    Ok((0..points).map(|i| t_max * i as f64 / (points - 1) as f64).collect())
}

impl Pipeline for ChannelProductCmd {
    fn fill_defaults(&mut self) {
        self.d.get_or_insert(1);
        self.length.get_or_insert(1001);
        self.delta.get_or_insert(1);
        self.tmax.get_or_insert(1.0);
        self.points.get_or_insert(101);
    }

    fn run(&mut self, dir: &Path) -> anyhow::Result<String> {
        let alpha = require(self.alpha, "alpha")?;
        let lattice = LatticeSpec::hypercube(require(self.d, "d")?, require(self.length, "length")?)?;
        let setup = ChannelSetup::new(lattice, require(self.delta, "delta")?, alpha, InitialState::ProductPlus)?;
        let t_max = require(self.tmax, "tmax")?;
        let times = time_samples(t_max, require(self.points, "points")?)?;
        SignalCurve::sample(&setup, &times, CurveKind::Exact)?.export(dir, "signal")?;
        if self.lower_bound {
            let window = lower_bound_window(&setup);
            let inside: Vec<f64> = times.iter().copied().filter(|&t| t <= window).collect();
            SignalCurve::sample(&setup, &inside, CurveKind::LowerBound)?.export(dir, "signal_lower_bound")?;
        }
        Ok(format!(
            "channel-product alpha={alpha}: |B| = {}, p(t={t_max}) = {:.6}",
            setup.receiver_count(),
            product_signal(&setup, t_max)?
        ))
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelGhzCmd {
    /// Coupling exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lattice dimension [default: 1].
    #[arg(long)]
    pub d: Option<usize>,
    /// Sites per axis [default: 4001].
    #[arg(long)]
    pub length: Option<usize>,
    /// Distance window `lo:hi` for the exponent fit [default: 10:200].
    #[arg(long)]
    pub fit: Option<Window>,
    /// Receiver distance for an optional signal curve.
    #[arg(long)]
    pub delta: Option<usize>,
    /// Arrival threshold for the signal curve [default: 1e-3].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of time samples up to the first maximum [default: 101].
    #[arg(long)]
    pub points: Option<usize>,
}

impl Pipeline for ChannelGhzCmd {
    fn fill_defaults(&mut self) {
        self.d.get_or_insert(1);
        self.length.get_or_insert(4001);
        self.fit.get_or_insert(Window { lo: 10, hi: 200 });
        self.epsilon.get_or_insert(DEFAULT_EPSILON_ANALYTIC);
        self.points.get_or_insert(101);
    }

    fn run(&mut self, dir: &Path) -> anyhow::Result<String> {
        let alpha = require(self.alpha, "alpha")?;
        let dim = require(self.d, "d")?;
        let lattice = LatticeSpec::hypercube(dim, require(self.length, "length")?)?;
        let window = require(self.fit, "fit")?;
        let slope = ghz_front_exponent(&lattice, alpha, window.pair())?;

        let shells = lattice.shell_counts(lattice.origin())?;
        let rows = (window.lo..=window.hi)
            .map(|d| {
                Ok([
                    d.to_string(),
                    lrspread::io::fmt_f64(infinite_lattice_tail(dim, alpha, d)?),
                    lrspread::io::fmt_f64(shells.shell_sum(d, alpha)?),
                ])
            })
            .collect::<lrspread::Result<Vec<_>>>()?;
        lrspread::io::write_csv(dir.join("coupling_sum.csv"), &["delta", "f_infinite", "f_lattice"], rows)?;
        let expected = dim as f64 - alpha;
        lrspread::io::write_json(
            dir.join("exponent.json"),
            &serde_json::json!({
                "slope": slope,
                "expected": expected,
                "alpha": alpha,
                "D": dim,
                "window": window,
            }),
        )?;

        let mut summary = format!("channel-ghz alpha={alpha} D={dim}: slope = {slope:.4} (D - alpha = {expected})");
        if let Some(delta) = self.delta {
            let setup = ChannelSetup::new(lattice, delta, alpha, InitialState::Ghz)?;
            let eps = require(self.epsilon, "epsilon")?;
            let t_peak = std::f64::consts::PI / (lrspread::channel::GHZ_PHASE_FACTOR * setup.ghz_coupling_sum());
            let times = time_samples(t_peak, require(self.points, "points")?)?;
            SignalCurve::sample(&setup, &times, CurveKind::Exact)?.export(dir, "signal")?;
            summary += &format!(", t*(delta={delta}) = {:.6e}", ghz_arrival_time(&setup, eps)?);
        }
        Ok(summary)
    }
}

fn parse_observable(s: &str) -> Result<Observable, String> {
    match s {
        "pm" | "pm_abs" => Ok(Observable::Pm),
        other => serde_json::from_value(other.into()).map_err(|_| format!("unknown observable `{other}` (zz_connected, pm)")),
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct XxzCmd {
    /// Coupling exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Chain length, even [default: 14].
    #[arg(long)]
    pub n: Option<usize>,
    /// Flip-flop amplitude [default: 2].
    #[arg(long)]
    pub j_perp: Option<f64>,
    /// Ising amplitude [default: 1].
    #[arg(long)]
    pub j_z: Option<f64>,
    /// Final time [default: 2].
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Propagation step [default: 0.0025].
    #[arg(long)]
    pub dt: Option<f64>,
    /// Steps between recorded slices [default: 20].
    #[arg(long)]
    pub stride: Option<usize>,
    /// Initial Krylov dimension [default: 12].
    #[arg(long)]
    pub krylov_dim: Option<usize>,
    /// Krylov dimension cap [default: 30].
    #[arg(long)]
    pub max_krylov_dim: Option<usize>,
    /// Krylov residual tolerance [default: 1e-10].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Observables, comma separated [default: zz_connected,pm].
    #[arg(long, value_delimiter = ',', value_parser = parse_observable)]
    pub observables: Option<Vec<Observable>>,
    /// Reference site [default: central site].
    #[arg(long)]
    pub origin: Option<usize>,
    /// Largest distance [default: to the chain end].
    #[arg(long)]
    pub delta_max: Option<usize>,
    /// Largest accepted chain [default: 16].
    #[arg(long)]
    pub max_sites: Option<usize>,
    /// Front threshold on the de-staggered magnitude [default: 1e-2].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fit window `lo:hi` [default: 3 to the farthest reached distance].
    #[arg(long)]
    pub fit: Option<Window>,
}

impl Pipeline for XxzCmd {
    fn fill_defaults(&mut self) {
        let base = QuenchConfig::new(self.n.unwrap_or(14), 0.0, 1.0);
        self.n.get_or_insert(base.n_sites);
        self.j_perp.get_or_insert(base.j_perp);
        self.j_z.get_or_insert(base.j_z);
        self.tmax.get_or_insert(2.0);
        self.dt.get_or_insert(base.propagator.dt);
        self.stride.get_or_insert(base.sample_stride);
        self.krylov_dim.get_or_insert(base.propagator.krylov_dim);
        self.max_krylov_dim.get_or_insert(base.propagator.max_krylov_dim);
        self.tolerance.get_or_insert(base.propagator.tolerance);
        self.observables.get_or_insert(base.observables.clone());
        self.max_sites.get_or_insert(base.max_sites);
        let mut probe = base;
        probe.origin = self.origin;
        if probe.n_sites >= 2 {
            self.origin.get_or_insert(probe.origin());
            if self.origin.is_some_and(|o| o < probe.n_sites) {
                probe.origin = self.origin;
                self.delta_max.get_or_insert(probe.delta_max());
            }
        }
        self.epsilon.get_or_insert(DEFAULT_EPSILON_ED);
    }

    fn run(&mut self, dir: &Path) -> anyhow::Result<String> {
        let cfg = self.quench_config()?;
        let eps = require(self.epsilon, "epsilon")?;
        let mut parts = Vec::new();
        for field in run_quench(&cfg)? {
            let tag = field.observable.clone();
            field.export(dir, &tag)?;
            let envelope = destagger_magnitude_field(&field);
            envelope.export(dir, &format!("{tag}_destaggered"))?;
            let front = front_with_fit(&envelope, eps, self.fit)?;
            if let Some(f) = &front {
                f.export(dir, &format!("{tag}_front"))?;
            }
            parts.push(format!("{tag}: {}", describe_front(&front, field.n_distances())));
        }
        Ok(format!("xxz-ed alpha={} N={}: {}", cfg.alpha, cfg.n_sites, parts.join("; ")))
    }
}

impl XxzCmd {
    fn quench_config(&self) -> anyhow::Result<QuenchConfig> {
        let mut cfg = QuenchConfig::new(require(self.n, "n")?, require(self.alpha, "alpha")?, require(self.tmax, "tmax")?);
        cfg.j_perp = require(self.j_perp, "j_perp")?;
        cfg.j_z = require(self.j_z, "j_z")?;
        cfg.sample_stride = require(self.stride, "stride")?;
        cfg.observables = self.observables.clone().unwrap_or_default();
        cfg.origin = self.origin;
        cfg.delta_max = self.delta_max;
        cfg.max_sites = require(self.max_sites, "max_sites")?;
        cfg.propagator = PropagatorConfig {
            dt: require(self.dt, "dt")?,
            krylov_dim: require(self.krylov_dim, "krylov_dim")?,
            max_krylov_dim: require(self.max_krylov_dim, "max_krylov_dim")?,
            tolerance: require(self.tolerance, "tolerance")?,
        };
        cfg.validate().map_err(|e| config_error(e.to_string()))?;
        cfg.propagator
            .validate(1 << cfg.n_sites)
            .map_err(|e| config_error(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DestaggerMode {
    /// Use the field as stored.
    #[default]
    None,
    /// Running maximum of the signed values.
    Signed,
    /// Running maximum of the absolute values.
    Magnitude,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontCmd {
    /// Field CSV (`delta,t,value`) written by `ising` or `xxz-ed`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Threshold [default: 1e-2 for exact-diagonalization fields, 1e-3 otherwise].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fit window `lo:hi` [default: 3 to the farthest reached distance].
    #[arg(long)]
    pub fit: Option<Window>,
    /// De-staggering applied before extraction [default: none].
    #[arg(long, value_enum)]
    pub destagger: Option<DestaggerMode>,
}

impl Pipeline for FrontCmd {
    fn fill_defaults(&mut self) {
        self.destagger.get_or_insert_default();
    }

    fn run(&mut self, dir: &Path) -> anyhow::Result<String> {
        let input = self.input.clone().ok_or_else(|| config_error("missing required parameter `input`"))?;
        let field = CorrelationField::load(&input).map_err(|e| config_error(e.to_string()))?;
        let exact_diag = field.metadata.get("model").and_then(|m| m.as_str()) == Some("long_range_xxz");
        let eps = *self
            .epsilon
            .get_or_insert(if exact_diag { DEFAULT_EPSILON_ED } else { DEFAULT_EPSILON_ANALYTIC });
        let field = match self.destagger.unwrap_or_default() {
            DestaggerMode::None => field,
            DestaggerMode::Signed => destagger_field(&field),
            DestaggerMode::Magnitude => destagger_magnitude_field(&field),
        };
        let front = extract_front(&field, eps)?;
        let window = self.fit.map(Window::pair).unwrap_or_else(|| front.default_window());
        let front = front.with_fit(window)?;
        front.export(dir, "front")?;
        let fit = front.fit.expect("fit stored above");
        Ok(format!(
            "front {}: q = {:.4}, prefactor = {:.4e}, residual = {:.2e} over {}:{} (epsilon = {eps}, {} omitted)",
            input.display(),
            fit.q,
            fit.prefactor,
            fit.residual,
            window.0,
            window.1,
            front.omitted.len()
        ))
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingCmd {
    /// Coupling exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Chain lengths, comma separated [default: 1000,10000,100000].
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Rescaled times, comma separated [default: 0.1,1].
    #[arg(long, value_delimiter = ',')]
    pub tau: Option<Vec<f64>>,
    /// Distances `lo:hi` [default: 20:120].
    #[arg(long)]
    pub deltas: Option<Window>,
}

impl Pipeline for ScalingCmd {
    fn fill_defaults(&mut self) {
        self.n.get_or_insert_with(|| vec![1_000, 10_000, 100_000]);
        self.tau.get_or_insert_with(|| vec![0.1, 1.0]);
        self.deltas.get_or_insert(Window { lo: 20, hi: 120 });
    }

    fn run(&mut self, dir: &Path) -> anyhow::Result<String> {
        let alpha = require(self.alpha, "alpha")?;
        let window = require(self.deltas, "deltas")?;
        let deltas: Vec<usize> = (window.lo..=window.hi).collect();
        let series = scaling_study(alpha, self.n.as_deref().unwrap_or_default(), self.tau.as_deref().unwrap_or_default(), &deltas)?;
        let mut parts = Vec::new();
        for s in &series {
            s.export(dir, &format!("scaling_tau{}", s.tau))?;
            parts.push(format!("tau={}: relative spread {:.4}", s.tau, s.relative_spread()));
        }
        Ok(format!("scaling alpha={alpha}: {}", parts.join(", ")))
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundCompareCmd {
    /// Front CSV (`delta,t_star`).
    #[arg(long)]
    pub front: Option<PathBuf>,
    /// Coupling exponent, must exceed the dimension.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lattice dimension [default: 1].
    #[arg(long)]
    pub d: Option<usize>,
    /// Bound prefactor C [default: 1].
    #[arg(long)]
    pub c: Option<f64>,
    /// Bound velocity v; required unless `touch_at` is given.
    #[arg(long)]
    pub v: Option<f64>,
    /// Length scale of the short-range form [default: 1].
    #[arg(long)]
    pub xi: Option<f64>,
    /// Threshold [default: the front's own threshold, else 1e-3].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Region sizes |A| and |B| [default: 1].
    #[arg(long)]
    pub size_a: Option<u64>,
    #[arg(long)]
    pub size_b: Option<u64>,
    /// Distances `lo:hi` to compare [default: all front distances].
    #[arg(long)]
    pub window: Option<Window>,
    /// Choose v so that the boundary passes through the front at this distance.
    #[arg(long)]
    pub touch_at: Option<usize>,
}

impl Pipeline for BoundCompareCmd {
    fn fill_defaults(&mut self) {
        self.d.get_or_insert(1);
        self.c.get_or_insert(1.0);
        self.xi.get_or_insert(1.0);
        self.size_a.get_or_insert(1);
        self.size_b.get_or_insert(1);
    }

    fn run(&mut self, dir: &Path) -> anyhow::Result<String> {
        let path = self.front.clone().ok_or_else(|| config_error("missing required parameter `front`"))?;
        let front = CausalFront::load(&path).map_err(|e| config_error(e.to_string()))?;
        let alpha = require(self.alpha, "alpha")?;
        let dim = require(self.d, "d")?;
        let eps = *self
            .epsilon
            .get_or_insert(if front.epsilon.is_nan() { DEFAULT_EPSILON_ANALYTIC } else { front.epsilon });
        let mut params = BoundParams {
            c: require(self.c, "c")?,
            v: self.v.unwrap_or(1.0),
            xi: require(self.xi, "xi")?,
            epsilon: eps,
            size_a: require(self.size_a, "size_a")?,
            size_b: require(self.size_b, "size_b")?,
        };
        match (self.touch_at, self.v) {
            (Some(d), _) => {
                let t = front
                    .arrival_at(d)
                    .ok_or_else(|| config_error(format!("front has no arrival time at delta = {d}")))?;
                params.v = bound_velocity_through(&params, alpha, dim, d, t)?;
                self.v = Some(params.v);
            }
            (None, Some(_)) => {}
            (None, None) => return Err(config_error("give either `v` or `touch_at`")),
        }
        let window = self
            .window
            .map(Window::pair)
            .unwrap_or((front.deltas.first().copied().unwrap_or(1), front.deltas.last().copied().unwrap_or(1)));
        let report = compare_with_bound(&front, &params, alpha, dim, window)?;
        lrspread::io::write_json(dir.join("bound_report.json"), &serde_json::json!({ "params": params, "report": report }))?;
        Ok(match report {
            BoundReport::Empty { window } => format!("bound-compare: no front distance in {}:{}", window.0, window.1),
            BoundReport::Ratios { min_ratio, median_ratio, entries } => format!(
                "bound-compare alpha={alpha}: v = {:.4e}, min ratio {min_ratio:.4}, median ratio {median_ratio:.4} over {} distances",
                params.v,
                entries.len()
            ),
        })
    }
}

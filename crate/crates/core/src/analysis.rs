//! Causal fronts, power-law fits, finite-size extrapolation and comparison
//! with the long-range bound.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{causal_boundary, BoundParams};
use crate::error::{Error, Result};
use crate::field::CorrelationField;
use crate::io;
use crate::ising::{connected_xx, time_from_rescaled, IsingModel};

/// Threshold for exact-diagonalization fields.
pub const DEFAULT_EPSILON_ED: f64 = 1e-2;
/// Threshold for analytic fields.
pub const DEFAULT_EPSILON_ANALYTIC: f64 = 1e-3;
/// Distances below this are excluded from default fit windows.
pub const DEFAULT_MIN_FIT_DELTA: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
}

/// Ordinary least squares `y = intercept + slope x`.
pub fn least_squares(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::input(format!("need at least 2 points to fit, got {}", points.len())));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::input("non-finite point in fit"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::input("degenerate fit: all abscissae coincide"));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(LinearFit { slope, intercept, rms_residual: (ss / n).sqrt() })
}

/// `t* = prefactor * delta^q` fitted in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub q: f64,
    pub prefactor: f64,
    /// RMS residual of `ln t*`.
    pub residual: f64,
    pub window: (usize, usize),
    pub n_points: usize,
}

/// Arrival times `t*(delta)` at which `|C|` first reaches `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalFront {
    pub epsilon: f64,
    pub deltas: Vec<usize>,
    pub arrival: Vec<f64>,
    /// Distances whose row never reached the threshold.
    pub omitted: Vec<usize>,
    pub fit: Option<PowerLawFit>,
    pub source: BTreeMap<String, Value>,
}

impl CausalFront {
    /// Builds a front from explicit pairs (sorted by distance).
    pub fn from_pairs(epsilon: f64, pairs: &[(usize, f64)]) -> Result<Self> {
        if pairs.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::input("front distances must be strictly increasing"));
        }
        if pairs.iter().any(|p| !(p.1 >= 0.0) || !p.1.is_finite()) {
            return Err(Error::input("arrival times must be finite and >= 0"));
        }
        Ok(CausalFront {
            epsilon,
            deltas: pairs.iter().map(|p| p.0).collect(),
            arrival: pairs.iter().map(|p| p.1).collect(),
            omitted: Vec::new(),
            fit: None,
            source: BTreeMap::new(),
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.deltas.iter().copied().zip(self.arrival.iter().copied())
    }

    pub fn arrival_at(&self, delta: usize) -> Option<f64> {
        self.deltas.binary_search(&delta).ok().map(|i| self.arrival[i])
    }

    /// Fits over `window` and stores the result.
    pub fn with_fit(mut self, window: (usize, usize)) -> Result<Self> {
        self.fit = Some(fit_power_law(&self, window)?);
        Ok(self)
    }

    /// Default window: every distance `>= 3`.
    pub fn default_window(&self) -> (usize, usize) {
        (DEFAULT_MIN_FIT_DELTA, self.deltas.last().copied().unwrap_or(DEFAULT_MIN_FIT_DELTA))
    }

    /// `<stem>.csv` (`delta,t_star`) plus `<stem>_fit.json` when a fit exists.
    pub fn export(&self, dir: &Path, stem: &str) -> Result<()> {
        let rows = self.pairs().map(|(d, t)| [d.to_string(), io::fmt_f64(t)]);
        io::write_csv(dir.join(format!("{stem}.csv")), &["delta", "t_star"], rows)?;
        if let Some(fit) = &self.fit {
            let report = serde_json::json!({
                "q": fit.q,
                "prefactor": fit.prefactor,
                "residual": fit.residual,
                "epsilon": self.epsilon,
                "window": [fit.window.0, fit.window.1],
                "n_points": fit.n_points,
                "omitted": self.omitted,
                "source": self.source,
            });
            io::write_json(dir.join(format!("{stem}_fit.json")), &report)?;
        }
        Ok(())
    }

    /// Reads a `delta,t_star` CSV. Threshold and provenance come from the
    /// `_fit.json` report next to it when present; otherwise `epsilon` is NaN.
    pub fn load(csv_path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(csv_path)?;
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::input("empty front CSV"))?;
        if header.trim() != "delta,t_star" {
            return Err(Error::input(format!(
                "{}: expected header `delta,t_star`, found `{header}`",
                csv_path.display()
            )));
        }
        let mut pairs = Vec::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::input(format!("{}: malformed row {}", csv_path.display(), n + 2));
            let (d, t) = line.split_once(',').ok_or_else(bad)?;
            let d: usize = d.trim().parse().map_err(|_| bad())?;
            let t: f64 = t.trim().parse().map_err(|_| bad())?;
            pairs.push((d, t));
        }
        let mut front = CausalFront::from_pairs(f64::NAN, &pairs)
            .map_err(|e| Error::input(format!("{}: {e}", csv_path.display())))?;
        let stem = csv_path.file_stem().unwrap_or_default().to_string_lossy();
        let report = csv_path.with_file_name(format!("{stem}_fit.json"));
        if report.exists() {
            let v: Value = serde_json::from_str(&std::fs::read_to_string(&report)?)
                .map_err(|e| Error::input(format!("{}: {e}", report.display())))?;
            if let Some(eps) = v.get("epsilon").and_then(Value::as_f64) {
                front.epsilon = eps;
            }
            if let Some(Value::Object(m)) = v.get("source") {
                front.source = m.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            }
        }
        Ok(front)
    }
}

/// Earliest time at which `|C(delta, t)|` reaches `epsilon`, linearly
/// interpolated between the bracketing grid times. Rows that never reach it
/// are listed in [`CausalFront::omitted`].
pub fn extract_front(field: &CorrelationField, epsilon: f64) -> Result<CausalFront> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::input(format!("threshold must be positive, got {epsilon}")));
    }
    let crossings: Vec<Option<f64>> = (0..field.n_distances())
        .into_par_iter()
        .map(|di| {
            let col = field.column(di);
            let hit = col.iter().position(|v| v.abs() >= epsilon)?;
            if hit == 0 {
                return Some(field.times[0]);
            }
            let (c0, c1) = (col[hit - 1].abs(), col[hit].abs());
            let (t0, t1) = (field.times[hit - 1], field.times[hit]);
            Some(t0 + (epsilon - c0) / (c1 - c0) * (t1 - t0))
        })
        .collect();
    let mut deltas = Vec::new();
    let mut arrival = Vec::new();
    let mut omitted = Vec::new();
    for (&d, c) in field.distances.iter().zip(crossings) {
        match c {
            Some(t) => {
                deltas.push(d);
                arrival.push(t);
            }
            None => omitted.push(d),
        }
    }
    if deltas.is_empty() {
        return Err(Error::EmptyFront { epsilon, max_abs: field.max_abs() });
    }
    let mut source = field.metadata.clone();
    source.insert("observable".into(), field.observable.clone().into());
    Ok(CausalFront { epsilon, deltas, arrival, omitted, fit: None, source })
}

/// Least-squares fit of `ln t*` against `ln delta` over the inclusive
/// distance window. Points with `t* = 0` carry no log-information and are skipped.
pub fn fit_power_law(front: &CausalFront, window: (usize, usize)) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = front
        .pairs()
        .filter(|&(d, t)| d >= window.0 && d <= window.1 && d > 0 && t > 0.0)
        .map(|(d, t)| ((d as f64).ln(), t.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::input(format!(
            "degenerate fit window {}..={}: {} usable points, need 3",
            window.0,
            window.1,
            pts.len()
        )));
    }
    let fit = least_squares(&pts)?;
    Ok(PowerLawFit {
        q: fit.slope,
        prefactor: fit.intercept.exp(),
        residual: fit.rms_residual,
        window,
        n_points: pts.len(),
    })
}

/// Correlator values at a fixed rescaled time for several system sizes,
/// extrapolated linearly in `1/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSeries {
    pub alpha: f64,
    pub tau: f64,
    pub n_values: Vec<usize>,
    pub deltas: Vec<usize>,
    /// `values[n_index][delta_index]`
    pub values: Vec<Vec<f64>>,
    pub extrapolated: Vec<f64>,
    pub slopes: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl ScalingSeries {
    /// Extrapolates precomputed values.
    pub fn from_values(alpha: f64, tau: f64, n_values: Vec<usize>, deltas: Vec<usize>, values: Vec<Vec<f64>>) -> Result<Self> {
        if n_values.len() < 2 {
            return Err(Error::input(format!("need at least 2 system sizes, got {}", n_values.len())));
        }
        if n_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("system sizes must be strictly increasing"));
        }
        if values.len() != n_values.len() || values.iter().any(|r| r.len() != deltas.len()) {
            return Err(Error::input("values do not match the (N, delta) grid"));
        }
        let mut extrapolated = Vec::with_capacity(deltas.len());
        let mut slopes = Vec::with_capacity(deltas.len());
        let mut residuals = Vec::with_capacity(deltas.len());
        for di in 0..deltas.len() {
            let pts: Vec<(f64, f64)> = n_values
                .iter()
                .zip(&values)
                .map(|(&n, row)| (1.0 / n as f64, row[di]))
                .collect();
            let fit = least_squares(&pts)?;
            extrapolated.push(fit.intercept);
            slopes.push(fit.slope);
            residuals.push(fit.rms_residual);
        }
        Ok(ScalingSeries { alpha, tau, n_values, deltas, values, extrapolated, slopes, residuals })
    }

    /// Largest pairwise difference of the extrapolated values.
    pub fn spread(&self) -> f64 {
        let max = self.extrapolated.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.extrapolated.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    pub fn mean_extrapolated(&self) -> f64 {
        self.extrapolated.iter().sum::<f64>() / self.extrapolated.len() as f64
    }

    /// `spread / |mean|`
    pub fn relative_spread(&self) -> f64 {
        self.spread() / self.mean_extrapolated().abs()
    }

    /// `<stem>.csv` with columns `n,inv_n,delta,value`, `<stem>_extrapolated.csv`
    /// with `delta,extrapolated,slope,residual`, and a `<stem>.json` summary.
    pub fn export(&self, dir: &Path, stem: &str) -> Result<()> {
        let rows = self.n_values.iter().zip(&self.values).flat_map(|(&n, row)| {
            self.deltas.iter().zip(row).map(move |(&d, &v)| {
                [n.to_string(), io::fmt_f64(1.0 / n as f64), d.to_string(), io::fmt_f64(v)]
            })
        });
        io::write_csv(dir.join(format!("{stem}.csv")), &["n", "inv_n", "delta", "value"], rows)?;
        let rows = (0..self.deltas.len()).map(|i| {
            [
                self.deltas[i].to_string(),
                io::fmt_f64(self.extrapolated[i]),
                io::fmt_f64(self.slopes[i]),
                io::fmt_f64(self.residuals[i]),
            ]
        });
        io::write_csv(
            dir.join(format!("{stem}_extrapolated.csv")),
            &["delta", "extrapolated", "slope", "residual"],
            rows,
        )?;
        let summary = serde_json::json!({
            "observable": "xx_connected",
            "alpha": self.alpha,
            "tau": self.tau,
            "n_values": self.n_values,
            "deltas": self.deltas,
            "spread": self.spread(),
            "mean_extrapolated": self.mean_extrapolated(),
            "relative_spread": self.relative_spread(),
            "raw_spreads": self.raw_spreads(),
        });
        io::write_json(dir.join(format!("{stem}.json")), &summary)
    }

    /// Spread of the raw values across distances at each size.
    pub fn raw_spreads(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| {
                let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let min = row.iter().cloned().fold(f64::INFINITY, f64::min);
                max - min
            })
            .collect()
    }
}

/// Long-range Ising connected correlators on centered chains of each size in
/// `n_values`, at `t = tau N^{alpha - 1/2}`, extrapolated to `1/N -> 0`.
/// Returns one series per `tau`.
pub fn scaling_study(alpha: f64, n_values: &[usize], taus: &[f64], deltas: &[usize]) -> Result<Vec<ScalingSeries>> {
    if n_values.len() < 2 {
        return Err(Error::input(format!("need at least 2 system sizes, got {}", n_values.len())));
    }
    if taus.is_empty() || deltas.is_empty() {
        return Err(Error::input("tau and delta lists must be nonempty"));
    }
    let models: Vec<IsingModel> = n_values
        .iter()
        .map(|&n| IsingModel::chain(n, alpha))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        let values: Vec<Vec<f64>> = models
            .iter()
            .map(|m| {
                let n = m.n_sites();
                let o = m.lattice().origin();
                let t = time_from_rescaled(tau, n, alpha);
                deltas
                    .par_iter()
                    .map(|&d| {
                        if o + d >= n {
                            return Err(Error::input(format!("distance {d} does not fit a chain of {n}")));
                        }
                        connected_xx(m, o, o + d, t)
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        out.push(ScalingSeries::from_values(alpha, tau, n_values.to_vec(), deltas.to_vec(), values)?);
    }
    Ok(out)
}

/// Per-distance ratio of measured arrival time to the bound's causal boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub delta: usize,
    pub t_star: f64,
    pub t_bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundReport {
    /// No front distance falls inside the requested window.
    Empty { window: (usize, usize) },
    Ratios {
        entries: Vec<BoundEntry>,
        min_ratio: f64,
        median_ratio: f64,
    },
}

/// Ratios `t*(delta) / causal_boundary(delta)` over the front's distances
/// within `window`. All ratios are `>= 1` when the front respects the bound
/// with the supplied constants.
pub fn compare_with_bound(
    front: &CausalFront,
    params: &BoundParams,
    alpha: f64,
    dim: usize,
    window: (usize, usize),
) -> Result<BoundReport> {
    let entries: Vec<BoundEntry> = front
        .pairs()
        .filter(|&(d, _)| d >= window.0 && d <= window.1)
        .map(|(delta, t_star)| {
            let t_bound = causal_boundary(params, alpha, dim, delta)?;
            Ok(BoundEntry { delta, t_star, t_bound, ratio: t_star / t_bound })
        })
        .collect::<Result<_>>()?;
    // Surface domain errors even when the window is empty.
    causal_boundary(params, alpha, dim, window.0)?;
    if entries.is_empty() {
        return Ok(BoundReport::Empty { window });
    }
    let mut ratios: Vec<f64> = entries.iter().map(|e| e.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let k = ratios.len();
    let median = if k % 2 == 1 { ratios[k / 2] } else { 0.5 * (ratios[k / 2 - 1] + ratios[k / 2]) };
    Ok(BoundReport::Ratios { min_ratio: ratios[0], median_ratio: median, entries })
}

/// Velocity `v` for which the causal boundary passes through `(delta, t_star)`.
pub fn bound_velocity_through(params: &BoundParams, alpha: f64, dim: usize, delta: usize, t_star: f64) -> Result<f64> {
    if !(t_star > 0.0) {
        return Err(Error::input("arrival time must be positive"));
    }
    let unit = BoundParams { v: 1.0, ..*params };
    Ok(causal_boundary(&unit, alpha, dim, delta)? / t_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_field(arrival: impl Fn(usize) -> f64, deltas: std::ops::RangeInclusive<usize>, dt: f64, n_t: usize) -> CorrelationField {
        let ds: Vec<usize> = deltas.collect();
        let ts: Vec<f64> = (0..n_t).map(|i| i as f64 * dt).collect();
        let mut vals = Vec::new();
        for &t in &ts {
            for &d in &ds {
                vals.push(if t >= arrival(d) { 1.0 } else { 0.0 });
            }
        }
        CorrelationField::new(ds, ts, vals, "synthetic").unwrap()
    }

    #[test]
    fn front_export_then_load() {
        let dir = std::env::temp_dir().join(format!("lrspread-front-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let front = CausalFront::from_pairs(1e-3, &[(3, 0.5), (4, 0.75), (6, 1.0 / 3.0)])
            .unwrap()
            .with_fit((3, 6))
            .unwrap();
        front.export(&dir, "fr").unwrap();
        let back = CausalFront::load(&dir.join("fr.csv")).unwrap();
        assert_eq!(back.deltas, front.deltas);
        assert_eq!(back.arrival, front.arrival);
        assert_eq!(back.epsilon, 1e-3);
        std::fs::write(dir.join("bad.csv"), "delta,t_star\n3,0.5\nx,1\n").unwrap();
        let err = CausalFront::load(&dir.join("bad.csv")).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn linear_cone_gives_unit_exponent() {
        // step at t = delta / v0 with the threshold at half height
        let v0 = 2.0;
        let f = step_field(|d| d as f64 / v0, 1..=40, 0.01, 2500);
        let front = extract_front(&f, 0.5).unwrap();
        for (d, t) in front.pairs() {
            assert!((t - d as f64 / v0).abs() <= 0.01);
        }
        let fit = fit_power_law(&front, (3, 40)).unwrap();
        assert!((fit.q - 1.0).abs() < 0.01, "q = {}", fit.q);
    }

    #[test]
    fn parabolic_front() {
        let f = step_field(|d| 0.05 * (d * d) as f64, 1..=50, 0.01, 13000);
        let front = extract_front(&f, 0.5).unwrap();
        let fit = fit_power_law(&front, (3, 50)).unwrap();
        assert!((fit.q - 2.0).abs() < 0.02, "q = {}", fit.q);
    }

    #[test]
    fn interpolation_and_omission() {
        let f = CorrelationField::new(
            vec![1, 2],
            vec![0.0, 1.0, 2.0],
            vec![0.0, 0.0, 0.4, 0.0, -0.8, 0.05],
            "x",
        )
        .unwrap();
        let front = extract_front(&f, 0.6).unwrap();
        assert_eq!(front.deltas, vec![1]);
        assert!((front.arrival[0] - 1.5).abs() < 1e-15);
        assert_eq!(front.omitted, vec![2]);
        assert!(matches!(extract_front(&f, 0.9), Err(Error::EmptyFront { .. })));
        assert!(extract_front(&f, 0.0).is_err());
    }

    #[test]
    fn exact_power_law_fit() {
        let pairs: Vec<(usize, f64)> = (3..40).map(|d| (d, 3.0 * (d as f64).powf(1.7))).collect();
        let front = CausalFront::from_pairs(1e-3, &pairs).unwrap();
        let fit = fit_power_law(&front, (3, 40)).unwrap();
        assert!((fit.q - 1.7).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-11);
        assert!(fit.residual < 1e-12);

        let flat: Vec<(usize, f64)> = (3..20).map(|d| (d, 0.8)).collect();
        let fit = fit_power_law(&CausalFront::from_pairs(1e-3, &flat).unwrap(), (1, 100)).unwrap();
        assert!(fit.q.abs() < 1e-12);
    }

    #[test]
    fn degenerate_windows() {
        let pairs: Vec<(usize, f64)> = (1..10).map(|d| (d, d as f64)).collect();
        let front = CausalFront::from_pairs(1e-2, &pairs).unwrap();
        assert!(matches!(fit_power_law(&front, (3, 4)), Err(Error::Input(_))));
        assert!(fit_power_law(&front, (20, 30)).is_err());
        assert!(least_squares(&[(1.0, 2.0), (1.0, 3.0), (1.0, 4.0)]).is_err());
    }

    #[test]
    fn synthetic_scaling_without_size_dependence() {
        let vals = vec![vec![0.3, 0.1]; 3];
        let s = ScalingSeries::from_values(0.25, 1.0, vec![10, 100, 1000], vec![5, 6], vals).unwrap();
        assert!(s.slopes.iter().all(|b| b.abs() < 1e-12));
        assert!((s.extrapolated[0] - 0.3).abs() < 1e-12);
        let same = ScalingSeries::from_values(0.25, 1.0, vec![10, 100], vec![5, 6], vec![vec![0.2, 0.2]; 2]).unwrap();
        assert!(same.spread().abs() < 1e-12);
        assert!(scaling_study(0.25, &[100], &[1.0], &[5]).is_err());
    }

    #[test]
    fn half_exponent_rescaling_is_identity() {
        let s = scaling_study(0.5, &[101, 201], &[0.3], &[4, 8]).unwrap();
        for (k, &n) in [101usize, 201].iter().enumerate() {
            let m = IsingModel::chain(n, 0.5).unwrap();
            let o = m.lattice().origin();
            assert_eq!(s[0].values[k][0], connected_xx(&m, o, o + 4, 0.3).unwrap());
        }
    }

    #[test]
    fn bound_comparison_on_the_boundary() {
        let params = BoundParams { c: 1.0, v: 0.5, xi: 1.0, epsilon: 1e-2, size_a: 1, size_b: 1 };
        let pairs: Vec<(usize, f64)> =
            (2..12).map(|d| (d, causal_boundary(&params, 2.0, 1, d).unwrap())).collect();
        let front = CausalFront::from_pairs(1e-2, &pairs).unwrap();
        match compare_with_bound(&front, &params, 2.0, 1, (1, 100)).unwrap() {
            BoundReport::Ratios { entries, min_ratio, median_ratio } => {
                assert_eq!(entries.len(), 10);
                assert!(entries.iter().all(|e| (e.ratio - 1.0).abs() < 1e-14));
                assert!((min_ratio - 1.0).abs() < 1e-14 && (median_ratio - 1.0).abs() < 1e-14);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            compare_with_bound(&front, &params, 2.0, 1, (50, 60)).unwrap(),
            BoundReport::Empty { window: (50, 60) }
        );
        assert!(matches!(compare_with_bound(&front, &params, 1.0, 1, (1, 10)), Err(Error::Domain(_))));
    }

    #[test]
    fn velocity_through_point() {
        let params = BoundParams { c: 2.0, v: 123.0, xi: 1.0, epsilon: 1e-3, size_a: 1, size_b: 4 };
        let v = bound_velocity_through(&params, 1.5, 1, 5, 0.7).unwrap();
        let p = BoundParams { v, ..params };
        assert!((causal_boundary(&p, 1.5, 1, 5).unwrap() - 0.7).abs() < 1e-14);
    }
}

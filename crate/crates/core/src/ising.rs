//! Closed-form dynamics of the long-range Ising model
//! `H = -sum_{i != j} J_ij Z_i Z_j` with `J_ij = J dist(i, j)^{-alpha}`,
//! starting from `|+>^N`.
//!
//! The sum counts every unordered pair `{i, j}` once, so flipping spin `k`
//! changes the energy by `2 Z_k sum_j J_kj Z_j`. Every Heisenberg-picture
//! `X_k(t)` is therefore `X_k` times a phase diagonal in the Z basis, and
//! expectation values in `|+>^N` reduce to averages of phases over uniformly
//! random spins:
//!
//! * `<X_k(t)> = prod_{j != k} cos(2 t J_kj)`
//! * `<X_a X_b(t)> = (P_+ + P_-) / 2` with
//!   `P_± = prod_{j != a,b} cos(2 t (J_aj ± J_bj))`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::CorrelationField;
use crate::lattice::{GraphDistance, LatticeSpec};

/// Phase per unit `J t` picked up by a bond when one of its spins flips.
pub const PAIR_PHASE: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    lattice: LatticeSpec,
    j: f64,
    alpha: f64,
    /// `J d^{-alpha}` for `d = 0..=max distance` (entry 0 unused).
    table: Vec<f64>,
}

impl IsingModel {
    pub fn new(lattice: LatticeSpec, j: f64, alpha: f64) -> Result<Self> {
        if !j.is_finite() {
            return Err(Error::input("coupling amplitude must be finite"));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::input(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        let l_max: usize = lattice.extents().iter().map(|e| e - 1).sum();
        let table = (0..=l_max)
            .map(|d| if d == 0 { 0.0 } else { j * (d as f64).powf(-alpha) })
            .collect();
        Ok(IsingModel { lattice, j, alpha, table })
    }

    /// Chain of `n` sites with `J = 1`.
    pub fn chain(n: usize, alpha: f64) -> Result<Self> {
        Self::new(LatticeSpec::chain(n)?, 1.0, alpha)
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_sites(&self) -> usize {
        self.lattice.len()
    }

    /// `J_ij`, zero on the diagonal.
    pub fn coupling(&self, i: usize, k: usize) -> Result<f64> {
        Ok(self.table[self.lattice.distance(i, k)?])
    }

    #[inline]
    fn coupling_unchecked(&self, i: usize, k: usize) -> f64 {
        self.table[self.lattice.distance(i, k).unwrap_or(0)]
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!("time must be finite and >= 0, got {t}")))
    }
}

/// `<X_j(t)>` from `|+>^N`.
pub fn magnetization_x(model: &IsingModel, j: usize, t: f64) -> Result<f64> {
    model.lattice.check_site(j)?;
    check_time(t)?;
    Ok(magnetization_unchecked(model, j, t))
}

fn magnetization_unchecked(model: &IsingModel, j: usize, t: f64) -> f64 {
    let w = PAIR_PHASE * t;
    let [m] = symmetric_product(model, j, &[j], |k| [(w * model.coupling_unchecked(j, k)).cos()]);
    m
}

/// Componentwise product of `factor(k)` over all sites `k` not in `skip`.
///
/// On chains the sites are visited in mirror pairs `center -+ s`, each pair
/// multiplied together first, so reflecting the whole configuration about
/// `center` gives bit-identical results.
fn symmetric_product<const K: usize>(
    model: &IsingModel,
    center: usize,
    skip: &[usize],
    factor: impl Fn(usize) -> [f64; K],
) -> [f64; K] {
    let n = model.n_sites();
    let mut acc = [1.0; K];
    if model.lattice.dimension() != 1 {
        for k in (0..n).filter(|k| !skip.contains(k)) {
            let f = factor(k);
            for c in 0..K {
                acc[c] *= f[c];
            }
        }
        return acc;
    }
    let reach = center.max(n - 1 - center);
    for s in 0..=reach {
        let left = center.checked_sub(s).filter(|k| !skip.contains(k));
        let right = Some(center + s).filter(|&k| s > 0 && k < n && !skip.contains(&k));
        let pair = match (left, right) {
            (Some(a), Some(b)) => {
                let (fa, fb) = (factor(a), factor(b));
                std::array::from_fn(|c| fa[c] * fb[c])
            }
            (Some(a), None) => factor(a),
            (None, Some(b)) => factor(b),
            (None, None) => continue,
        };
        for c in 0..K {
            acc[c] *= pair[c];
        }
    }
    acc
}

/// `<X_o X_j> - <X_o><X_j>` at time `t` from `|+>^N`.
pub fn connected_xx(model: &IsingModel, o: usize, j: usize, t: f64) -> Result<f64> {
    model.lattice.check_site(o)?;
    model.lattice.check_site(j)?;
    check_time(t)?;
    if o == j {
        return Err(Error::input(format!("connected correlator needs distinct sites, got {o} twice")));
    }
    let m_o = magnetization_unchecked(model, o, t);
    Ok(connected_with(model, o, j, t, m_o))
}

fn connected_with(model: &IsingModel, o: usize, j: usize, t: f64, m_o: f64) -> f64 {
    let w = PAIR_PHASE * t;
    let [m_j, plus, minus] = symmetric_product(model, o, &[o, j], |k| {
        let a = model.coupling_unchecked(o, k);
        let b = model.coupling_unchecked(j, k);
        [(w * b).cos(), (w * (a + b)).cos(), (w * (a - b)).cos()]
    });
    let m_j = m_j * (w * model.coupling_unchecked(j, o)).cos();
    0.5 * (plus + minus) - m_o * m_j
}

/// Site `delta` steps from `o` along the first axis, in direction `sign`.
fn site_at(lattice: &LatticeSpec, o: usize, delta: usize, sign: isize) -> Result<usize> {
    let mut c = lattice.coords(o)?;
    let x = c[0] as isize + sign * delta as isize;
    if x < 0 || x >= lattice.extents()[0] as isize {
        return Err(Error::input(format!(
            "distance {delta} from site {o} leaves the lattice"
        )));
    }
    c[0] = x as usize;
    lattice.index_of(&c)
}

/// `C(delta, t)` for `delta = 1..=delta_max`, moving away from `o` along the
/// first lattice axis in the positive direction.
pub fn correlation_field(model: &IsingModel, o: usize, delta_max: usize, t_grid: &[f64]) -> Result<CorrelationField> {
    correlation_field_along(model, o, delta_max, t_grid, 1)
}

/// As [`correlation_field`], with receivers at `o + sign * delta`.
pub fn correlation_field_along(
    model: &IsingModel,
    o: usize,
    delta_max: usize,
    t_grid: &[f64],
    sign: isize,
) -> Result<CorrelationField> {
    if sign != 1 && sign != -1 {
        return Err(Error::input("direction must be +1 or -1"));
    }
    if delta_max == 0 {
        return Err(Error::input("delta_max must be positive"));
    }
    for &t in t_grid {
        check_time(t)?;
    }
    let sites: Vec<usize> = (1..=delta_max)
        .map(|d| site_at(&model.lattice, o, d, sign))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = t_grid
        .par_iter()
        .map(|&t| {
            let m_o = magnetization_unchecked(model, o, t);
            sites.iter().map(|&j| connected_with(model, o, j, t, m_o)).collect()
        })
        .collect();
    let values = rows.into_iter().flatten().collect();
    Ok(CorrelationField::new((1..=delta_max).collect(), t_grid.to_vec(), values, "xx_connected")?
        .with_meta("model", "long_range_ising")
        .with_meta("alpha", model.alpha)
        .with_meta("J", model.j)
        .with_meta("N", model.n_sites())
        .with_meta("D", model.lattice.dimension())
        .with_meta("extents", model.lattice.extents().to_vec())
        .with_meta("origin", o)
        .with_meta("direction", sign)
        .with_meta("coupling", "J * dist^-alpha, each pair once")
        .with_meta("initial_state", "plus_x_product"))
}

/// `tau = t N^{1/2 - alpha}`
pub fn rescaled_time(t: f64, n: usize, alpha: f64) -> f64 {
    t * (n as f64).powf(0.5 - alpha)
}

/// Inverse of [`rescaled_time`].
pub fn time_from_rescaled(tau: f64, n: usize, alpha: f64) -> f64 {
    tau * (n as f64).powf(alpha - 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_values() {
        let m = IsingModel::chain(21, 0.75).unwrap();
        assert_eq!(magnetization_x(&m, 10, 0.0).unwrap(), 1.0);
        assert_eq!(connected_xx(&m, 10, 13, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn couplings_follow_power_law() {
        let m = IsingModel::new(LatticeSpec::chain(30).unwrap(), 1.7, 1.3).unwrap();
        for (i, k) in [(0usize, 1usize), (3, 17), (29, 2)] {
            let d = (i as f64 - k as f64).abs();
            assert!((m.coupling(i, k).unwrap() * d.powf(1.3) - 1.7).abs() < 1e-13);
            assert_eq!(m.coupling(i, k).unwrap(), m.coupling(k, i).unwrap());
        }
        assert_eq!(m.coupling(4, 4).unwrap(), 0.0);
    }

    #[test]
    fn nearest_neighbour_limit() {
        // Bulk site with two neighbours: cos(2 J t)^2.
        let m = IsingModel::chain(3, 200.0).unwrap();
        for t in [0.1, 0.37, 1.0] {
            let v = magnetization_x(&m, 1, t).unwrap();
            assert!((v - (2.0 * t as f64).cos().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn equal_sites_rejected() {
        let m = IsingModel::chain(9, 1.0).unwrap();
        assert!(matches!(connected_xx(&m, 3, 3, 0.5), Err(Error::Input(_))));
        assert!(connected_xx(&m, 3, 9, 0.5).is_err());
    }

    #[test]
    fn rescaled_time_arithmetic() {
        assert_eq!(rescaled_time(2.5, 12345, 0.5), 2.5);
        assert!((rescaled_time(1.0, 10_000, 0.25) - 10.0).abs() < 1e-12);
        let t = 0.731;
        let back = time_from_rescaled(rescaled_time(t, 777, 0.9), 777, 0.9);
        assert!((back - t).abs() <= 2.0 * f64::EPSILON * t);
    }

    #[test]
    fn field_first_row_zero_and_mirror_symmetric() {
        let m = IsingModel::chain(41, 0.75).unwrap();
        let ts = [0.0, 0.2, 0.5];
        let f = correlation_field(&m, 20, 15, &ts).unwrap();
        assert!(f.row(0).iter().all(|&v| v == 0.0));
        let g = correlation_field_along(&m, 20, 15, &ts, -1).unwrap();
        assert_eq!(f.values(), g.values());
        assert!(correlation_field(&m, 20, 21, &ts).is_err());
    }

    #[test]
    fn even_in_coupling_sign() {
        let lat = LatticeSpec::chain(15).unwrap();
        let p = IsingModel::new(lat.clone(), 1.0, 0.6).unwrap();
        let n = IsingModel::new(lat, -1.0, 0.6).unwrap();
        for t in [0.1, 0.9, 2.2] {
            let a = connected_xx(&p, 7, 11, t).unwrap();
            let b = connected_xx(&n, 7, 11, t).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }
}

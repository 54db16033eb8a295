//! Open-boundary hypercubic lattices, graph distance and shell counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Anything with sites and a graph distance between them.
pub trait GraphDistance {
    fn n_sites(&self) -> usize;

    /// Number of edges along the shortest path between sites `i` and `j`.
    fn distance(&self, i: usize, j: usize) -> Result<usize>;
}

/// A D-dimensional hypercubic lattice with open boundaries.
///
/// Sites are indexed row-major: the last axis varies fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    extents: Vec<usize>,
    origin: usize,
}

impl LatticeSpec {
    /// Lattice with the given per-axis extents and the origin at the most
    /// central site (ties broken toward the lower index).
    pub fn new(extents: Vec<usize>) -> Result<Self> {
        if extents.is_empty() {
            return Err(Error::input("lattice needs at least one axis"));
        }
        if extents.iter().any(|&e| e == 0) {
            return Err(Error::input(format!("zero extent in {extents:?}")));
        }
        extents
            .iter()
            .try_fold(1usize, |acc, &e| acc.checked_mul(e))
            .ok_or_else(|| Error::input("lattice size overflows usize"))?;
        let center: Vec<usize> = extents.iter().map(|&e| (e - 1) / 2).collect();
        let mut spec = LatticeSpec { extents, origin: 0 };
        spec.origin = spec.index_of(&center)?;
        Ok(spec)
    }

    /// Open chain of `len` sites.
    pub fn chain(len: usize) -> Result<Self> {
        Self::new(vec![len])
    }

    /// Hypercube with `side` sites along each of `dim` axes.
    pub fn hypercube(dim: usize, side: usize) -> Result<Self> {
        Self::new(vec![side; dim])
    }

    /// Replaces the origin.
    pub fn with_origin(mut self, origin: usize) -> Result<Self> {
        self.check_site(origin)?;
        self.origin = origin;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn check_site(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "site {i} outside lattice of {} sites",
                self.len()
            )))
        }
    }

    /// Per-axis coordinates of site `i`.
    pub fn coords(&self, i: usize) -> Result<Vec<usize>> {
        self.check_site(i)?;
        let mut rem = i;
        let mut c = vec![0; self.extents.len()];
        for (axis, &e) in self.extents.iter().enumerate().rev() {
            c[axis] = rem % e;
            rem /= e;
        }
        Ok(c)
    }

    /// Site index from per-axis coordinates.
    pub fn index_of(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.extents.len() {
            return Err(Error::input(format!(
                "expected {} coordinates, got {}",
                self.extents.len(),
                coords.len()
            )));
        }
        let mut idx = 0;
        for (&c, &e) in coords.iter().zip(&self.extents) {
            if c >= e {
                return Err(Error::input(format!("coordinate {c} outside extent {e}")));
            }
            idx = idx * e + c;
        }
        Ok(idx)
    }

    /// Largest graph distance from `o` to any site.
    pub fn max_distance_from(&self, o: usize) -> Result<usize> {
        let c = self.coords(o)?;
        Ok(c
            .iter()
            .zip(&self.extents)
            .map(|(&ci, &e)| ci.max(e - 1 - ci))
            .sum())
    }

    /// Shell counts around `o`: `counts[l]` sites at distance exactly `l`.
    ///
    /// The count is the convolution of the per-axis distance histograms,
    /// which enumerates every site exactly once.
    pub fn shell_counts(&self, o: usize) -> Result<ShellTable> {
        let c = self.coords(o)?;
        let mut counts: Vec<u64> = vec![1];
        for (&ci, &e) in c.iter().zip(&self.extents) {
            let reach = ci.max(e - 1 - ci);
            let mut axis = vec![0u64; reach + 1];
            for x in 0..e {
                axis[x.abs_diff(ci)] += 1;
            }
            let mut next = vec![0u64; counts.len() + reach];
            for (l, &n) in counts.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                for (k, &m) in axis.iter().enumerate() {
                    next[l + k] += n * m;
                }
            }
            counts = next;
        }
        Ok(ShellTable { origin: o, counts })
    }
}

impl GraphDistance for LatticeSpec {
    fn n_sites(&self) -> usize {
        self.len()
    }

    fn distance(&self, i: usize, j: usize) -> Result<usize> {
        self.check_site(i)?;
        self.check_site(j)?;
        let (mut a, mut b) = (i, j);
        let mut d = 0;
        for &e in self.extents.iter().rev() {
            d += (a % e).abs_diff(b % e);
            a /= e;
            b /= e;
        }
        Ok(d)
    }
}

/// Number of sites at each graph distance from an origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellTable {
    pub origin: usize,
    pub counts: Vec<u64>,
}

impl ShellTable {
    pub fn max_distance(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of sites at distance `>= delta`.
    pub fn exterior_size(&self, delta: usize) -> u64 {
        self.counts.iter().skip(delta).sum()
    }

    /// `sum_{l >= delta} (1 + l)^{-exponent} * counts[l]`, compensated.
    ///
    /// Returns 0 when `delta` exceeds the largest distance.
    pub fn shell_sum(&self, delta: usize, exponent: f64) -> Result<f64> {
        if !(exponent >= 0.0) || !exponent.is_finite() {
            return Err(Error::input(format!(
                "shell sum exponent must be finite and >= 0, got {exponent}"
            )));
        }
        let mut acc = CompensatedSum::new();
        for (l, &n) in self.counts.iter().enumerate().skip(delta) {
            if n > 0 {
                acc.add(n as f64 * (1.0 + l as f64).powf(-exponent));
            }
        }
        Ok(acc.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    fn bfs_distance(spec: &LatticeSpec, from: usize, to: usize) -> usize {
        let n = spec.len();
        let mut dist = vec![usize::MAX; n];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            if s == to {
                return dist[s];
            }
            let c = spec.coords(s).unwrap();
            for axis in 0..c.len() {
                for step in [-1i64, 1] {
                    let x = c[axis] as i64 + step;
                    if x < 0 || x >= spec.extents()[axis] as i64 {
                        continue;
                    }
                    let mut nc = c.clone();
                    nc[axis] = x as usize;
                    let nb = spec.index_of(&nc).unwrap();
                    if dist[nb] == usize::MAX {
                        dist[nb] = dist[s] + 1;
                        queue.push_back(nb);
                    }
                }
            }
        }
        unreachable!("lattice is connected")
    }

    #[test]
    fn distance_identity_and_manhattan() {
        let chain = LatticeSpec::chain(11).unwrap();
        assert_eq!(chain.distance(5, 5).unwrap(), 0);
        let sq = LatticeSpec::hypercube(2, 10).unwrap();
        let a = sq.index_of(&[0, 0]).unwrap();
        let b = sq.index_of(&[3, 4]).unwrap();
        assert_eq!(sq.distance(a, b).unwrap(), 7);
    }

    #[test]
    fn distance_matches_bfs_in_three_dimensions() {
        let spec = LatticeSpec::new(vec![4, 5, 3]).unwrap();
        let mut state = 12345u64;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let i = (state >> 33) as usize % spec.len();
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % spec.len();
            assert_eq!(spec.distance(i, j).unwrap(), bfs_distance(&spec, i, j));
        }
    }

    #[test]
    fn invalid_sites_are_rejected() {
        let chain = LatticeSpec::chain(4).unwrap();
        assert!(matches!(chain.distance(0, 4), Err(Error::Input(_))));
        assert!(chain.shell_counts(7).is_err());
        assert!(LatticeSpec::new(vec![]).is_err());
        assert!(LatticeSpec::new(vec![3, 0]).is_err());
        assert!(LatticeSpec::chain(4).unwrap().with_origin(4).is_err());
    }

    #[test]
    fn origin_defaults_to_center_with_low_tie_break() {
        assert_eq!(LatticeSpec::chain(21).unwrap().origin(), 10);
        assert_eq!(LatticeSpec::chain(14).unwrap().origin(), 6);
        let sq = LatticeSpec::hypercube(2, 21).unwrap();
        assert_eq!(sq.coords(sq.origin()).unwrap(), vec![10, 10]);
    }

    #[test]
    fn centered_chain_has_two_sites_per_shell() {
        let l = 30;
        let chain = LatticeSpec::chain(2 * l + 1).unwrap();
        let t = chain.shell_counts(chain.origin()).unwrap();
        assert_eq!(t.counts[0], 1);
        assert_eq!(t.max_distance(), l);
        assert!(t.counts[1..].iter().all(|&c| c == 2));
    }

    #[test]
    fn square_shells_match_enumeration() {
        let sq = LatticeSpec::hypercube(2, 21).unwrap();
        let o = sq.origin();
        let t = sq.shell_counts(o).unwrap();
        let mut brute = vec![0u64; t.counts.len()];
        for j in 0..sq.len() {
            brute[sq.distance(o, j).unwrap()] += 1;
        }
        assert_eq!(t.counts, brute);
        assert_eq!(t.counts[1], 4);
        assert_eq!(t.counts[2], 8);
        assert_eq!(t.total(), sq.len() as u64);
    }

    #[test]
    fn hypercube_shells_grow_like_surface() {
        // Inside the bulk the shell at distance l of a D-cube holds Theta(l^{D-1}) sites.
        for dim in 1..=3usize {
            let side = 41;
            let spec = LatticeSpec::hypercube(dim, side).unwrap();
            let t = spec.shell_counts(spec.origin()).unwrap();
            let ratios: Vec<f64> = (1..=20)
                .map(|l| t.counts[l] as f64 / (l as f64).powi(dim as i32 - 1))
                .collect();
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            assert!(lo > 0.0);
            // 2^D l^{D-1} / (D-1)! is the leading term; ratios stay within a fixed band.
            assert!(hi / lo < 3.0, "dim {dim}: {lo} .. {hi}");
        }
    }

    #[test]
    fn shell_sum_edge_cases() {
        let chain = LatticeSpec::chain(101).unwrap();
        let t = chain.shell_counts(chain.origin()).unwrap();
        assert_eq!(t.shell_sum(0, 0.0).unwrap(), 101.0);
        assert_eq!(t.shell_sum(t.max_distance() + 1, 1.3).unwrap(), 0.0);
        assert!(t.shell_sum(0, -1.0).is_err());
    }

    #[test]
    fn shell_sum_matches_direct_site_sum() {
        let chain = LatticeSpec::chain(2001).unwrap();
        let o = chain.origin();
        let t = chain.shell_counts(o).unwrap();
        let alpha = 0.75;
        for delta in [0usize, 1, 7, 500] {
            let direct: f64 = (0..chain.len())
                .map(|j| chain.distance(o, j).unwrap())
                .filter(|&d| d >= delta)
                .map(|d| (1.0 + d as f64).powf(-2.0 * alpha))
                .sum();
            let s = t.shell_sum(delta, 2.0 * alpha).unwrap();
            assert!((s - direct).abs() <= 1e-12 * direct.max(1.0));
        }
    }

    #[test]
    fn shell_sum_convergence_follows_half_dimension_threshold() {
        let sums = |alpha: f64| -> Vec<f64> {
            [1_001usize, 10_001, 100_001]
                .iter()
                .map(|&n| {
                    let c = LatticeSpec::chain(n).unwrap();
                    c.shell_counts(c.origin()).unwrap().shell_sum(1, 2.0 * alpha).unwrap()
                })
                .collect()
        };
        let conv = sums(0.75);
        let d1 = conv[1] - conv[0];
        let d2 = conv[2] - conv[1];
        assert!(d2 < d1 / 2.0 && d2 > 0.0);
        let div = sums(0.25);
        // Grows like sqrt(L): each decade multiplies by ~sqrt(10).
        assert!(div[2] / div[1] > 2.5 && div[1] / div[0] > 2.5);
    }
}

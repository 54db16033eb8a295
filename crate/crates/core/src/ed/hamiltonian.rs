use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::lattice::{GraphDistance, LatticeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `Z_i Z_j`
    Zz,
    /// `S+_i S-_j + S-_i S+_j`
    FlipFlop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteKind {
    Z,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub kind: PairKind,
    pub coeff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteTerm {
    pub site: usize,
    pub kind: SiteKind,
    pub coeff: f64,
}

/// Real-coefficient spin-1/2 Hamiltonian as a list of Hermitian terms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpinHamiltonian {
    pub n_sites: usize,
    pub pair_terms: Vec<PairTerm>,
    pub site_terms: Vec<SiteTerm>,
}

impl SpinHamiltonian {
    pub fn new(n_sites: usize) -> Self {
        SpinHamiltonian { n_sites, ..Default::default() }
    }

    pub fn add_pair(&mut self, i: usize, j: usize, kind: PairKind, coeff: f64) -> Result<()> {
        if i >= self.n_sites || j >= self.n_sites || i == j {
            return Err(Error::input(format!("bad pair ({i}, {j}) for {} sites", self.n_sites)));
        }
        if !coeff.is_finite() {
            return Err(Error::input("non-finite coefficient"));
        }
        self.pair_terms.push(PairTerm { i, j, kind, coeff });
        Ok(())
    }

    pub fn add_site(&mut self, site: usize, kind: SiteKind, coeff: f64) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::input(format!("site {site} outside {} sites", self.n_sites)));
        }
        if !coeff.is_finite() {
            return Err(Error::input("non-finite coefficient"));
        }
        self.site_terms.push(SiteTerm { site, kind, coeff });
        Ok(())
    }

    pub fn n_terms(&self) -> usize {
        self.pair_terms.len() + self.site_terms.len()
    }

    /// Diagonal plus flip-mask form used by the matrix-free product.
    pub fn compile(&self) -> CompiledHamiltonian {
        let dim = 1usize << self.n_sites;
        let zz: Vec<(usize, f64)> = self
            .pair_terms
            .iter()
            .filter(|t| t.kind == PairKind::Zz)
            .map(|t| ((1 << t.i) | (1 << t.j), t.coeff))
            .collect();
        let z: Vec<(usize, f64)> = self
            .site_terms
            .iter()
            .filter(|t| t.kind == SiteKind::Z)
            .map(|t| (1 << t.site, t.coeff))
            .collect();
        let diag: Vec<f64> = (0..dim)
            .into_par_iter()
            .map(|x| {
                let mut e = 0.0;
                for &(m, c) in &zz {
                    // aligned bits: even parity under the mask
                    e += if (x & m).count_ones() % 2 == 0 { c } else { -c };
                }
                for &(m, c) in &z {
                    e += if x & m == 0 { c } else { -c };
                }
                e
            })
            .collect();
        let flipflop = self
            .pair_terms
            .iter()
            .filter(|t| t.kind == PairKind::FlipFlop)
            .map(|t| ((1 << t.i) | (1 << t.j), t.coeff))
            .collect();
        let flips = self
            .site_terms
            .iter()
            .filter(|t| t.kind == SiteKind::X)
            .map(|t| (1 << t.site, t.coeff))
            .collect();
        CompiledHamiltonian { n_sites: self.n_sites, diag, flipflop, flips }
    }

    /// `H|psi>`, unnormalized.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.compile().apply(psi)
    }
}

/// `H` stored as its diagonal and a list of off-diagonal bit masks.
#[derive(Debug, Clone)]
pub struct CompiledHamiltonian {
    n_sites: usize,
    diag: Vec<f64>,
    /// Pair masks: acts when the two bits differ, swapping them.
    flipflop: Vec<(usize, f64)>,
    /// Single-bit masks from X terms.
    flips: Vec<(usize, f64)>,
}

const APPLY_CHUNK: usize = 1024;

impl CompiledHamiltonian {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// `out = H x`. Each output element is gathered independently, so the
    /// result does not depend on how the index range is split.
    pub fn apply_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.diag.len());
        debug_assert_eq!(out.len(), self.diag.len());
        out.par_chunks_mut(APPLY_CHUNK).enumerate().for_each(|(c, chunk)| {
            let base = c * APPLY_CHUNK;
            for (off, y) in chunk.iter_mut().enumerate() {
                let idx = base + off;
                let mut acc = x[idx] * self.diag[idx];
                for &(m, coeff) in &self.flipflop {
                    let b = idx & m;
                    if b != 0 && b != m {
                        acc += x[idx ^ m] * coeff;
                    }
                }
                for &(m, coeff) in &self.flips {
                    acc += x[idx ^ m] * coeff;
                }
                *y = acc;
            }
        });
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_sites() != self.n_sites {
            return Err(Error::input(format!(
                "state has {} sites, Hamiltonian {}",
                psi.n_sites(),
                self.n_sites
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        self.apply_into(psi.amplitudes(), &mut out);
        StateVector::from_raw(self.n_sites, out)
    }

    /// `<psi|H|psi>`
    pub fn energy(&self, psi: &StateVector) -> Result<f64> {
        let h = self.apply(psi)?;
        Ok(psi.inner(&h)?.re)
    }
}

fn check_chain(lattice: &LatticeSpec) -> Result<usize> {
    if lattice.dimension() != 1 {
        return Err(Error::input(format!(
            "spin-chain Hamiltonians need D = 1, got D = {}",
            lattice.dimension()
        )));
    }
    let n = lattice.len();
    if n < 2 {
        return Err(Error::input(format!("need at least 2 sites, got {n}")));
    }
    if n > super::state::MAX_SITES {
        return Err(Error::input(format!("{n} sites exceed the dense-state limit")));
    }
    Ok(n)
}

/// Long-range XXZ chain
/// `sum_{i > j} dist^{-alpha} [J_perp/2 (S+_i S-_j + h.c.) + J_z Z_i Z_j]`.
pub fn build_xxz(lattice: &LatticeSpec, j_perp: f64, j_z: f64, alpha: f64) -> Result<SpinHamiltonian> {
    let n = check_chain(lattice)?;
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::input(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    let mut h = SpinHamiltonian::new(n);
    for i in 0..n {
        for j in 0..i {
            let decay = (lattice.distance(i, j)? as f64).powf(-alpha);
            h.add_pair(i, j, PairKind::FlipFlop, 0.5 * j_perp * decay)?;
            h.add_pair(i, j, PairKind::Zz, j_z * decay)?;
        }
    }
    Ok(h)
}

/// Long-range Ising chain `-sum_{i != j} J dist^{-alpha} Z_i Z_j`, one `Z Z`
/// term of coefficient `-J dist^{-alpha}` per unordered pair.
pub fn build_ising(lattice: &LatticeSpec, j: f64, alpha: f64) -> Result<SpinHamiltonian> {
    let n = check_chain(lattice)?;
    let mut h = SpinHamiltonian::new(n);
    for a in 0..n {
        for b in 0..a {
            let c = j * (lattice.distance(a, b)? as f64).powf(-alpha);
            h.add_pair(a, b, PairKind::Zz, -c)?;
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_xxz_terms() {
        let h = build_xxz(&LatticeSpec::chain(2).unwrap(), 2.0, 1.0, 0.75).unwrap();
        assert_eq!(h.pair_terms.len(), 2);
        let mut coeffs: Vec<f64> = h.pair_terms.iter().map(|t| t.coeff).collect();
        coeffs.sort_by(f64::total_cmp);
        assert_eq!(coeffs, vec![1.0, 1.0]);
        assert!(build_xxz(&LatticeSpec::chain(1).unwrap(), 2.0, 1.0, 1.0).is_err());
        assert!(build_xxz(&LatticeSpec::hypercube(2, 3).unwrap(), 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn term_count_and_power_law() {
        let n = 9;
        let lat = LatticeSpec::chain(n).unwrap();
        let h = build_xxz(&lat, 2.0, 1.0, 1.5).unwrap();
        assert_eq!(h.pair_terms.len(), n * (n - 1));
        for t in &h.pair_terms {
            let d = (t.i as f64 - t.j as f64).abs();
            let base = match t.kind {
                PairKind::FlipFlop => 1.0,
                PairKind::Zz => 1.0,
            };
            assert!((t.coeff * d.powf(1.5) - base).abs() < 1e-13);
        }
    }

    #[test]
    fn large_exponent_is_nearest_neighbour() {
        let h = build_xxz(&LatticeSpec::chain(6).unwrap(), 2.0, 1.0, 100.0).unwrap();
        for t in &h.pair_terms {
            if t.i.abs_diff(t.j) > 1 {
                assert!(t.coeff.abs() < 1e-30);
            } else {
                assert!(t.coeff == 1.0);
            }
        }
    }

    #[test]
    fn elementary_actions() {
        // |10>: site 0 holds bit 1 -> index 0b01
        let psi = StateVector::basis(2, 0b01).unwrap();
        let mut zz = SpinHamiltonian::new(2);
        zz.add_pair(0, 1, PairKind::Zz, 0.7).unwrap();
        let out = zz.apply(&psi).unwrap();
        assert_eq!(out.amplitudes()[0b01], Complex64::new(-0.7, 0.0));

        let mut ff = SpinHamiltonian::new(2);
        ff.add_pair(1, 0, PairKind::FlipFlop, 1.0).unwrap();
        let out = ff.apply(&psi).unwrap();
        assert_eq!(out.amplitudes()[0b10], Complex64::new(1.0, 0.0));
        assert_eq!(out.amplitudes()[0b01], Complex64::new(0.0, 0.0));

        let aligned = StateVector::basis(2, 0b11).unwrap();
        assert_eq!(ff.apply(&aligned).unwrap().norm(), 0.0);

        let mut x = SpinHamiltonian::new(3);
        x.add_site(2, SiteKind::X, 0.5).unwrap();
        x.add_site(0, SiteKind::Z, 2.0).unwrap();
        let out = x.apply(&StateVector::basis(3, 0).unwrap()).unwrap();
        assert_eq!(out.amplitudes()[0b100], Complex64::new(0.5, 0.0));
        assert_eq!(out.amplitudes()[0], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn dimension_mismatch() {
        let h = build_xxz(&LatticeSpec::chain(3).unwrap(), 2.0, 1.0, 1.0).unwrap();
        assert!(matches!(h.apply(&StateVector::plus_x(4).unwrap()), Err(Error::Input(_))));
        let mut s = SpinHamiltonian::new(3);
        assert!(s.add_pair(1, 1, PairKind::Zz, 1.0).is_err());
        assert!(s.add_site(3, SiteKind::Z, 1.0).is_err());
    }
}

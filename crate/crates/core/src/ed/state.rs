use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{deterministic_csum, deterministic_sum};

/// Largest chain the dense state representation accepts.
pub const MAX_SITES: usize = 26;

/// Tolerance on the Euclidean norm of a normalized state.
pub const NORM_TOL: f64 = 1e-10;

const CHECKPOINT_MAGIC: &[u8; 8] = b"LRSPSV01";

/// Dense amplitudes over the `2^N` product basis.
///
/// Bit `k` of a basis index is the state of site `k`; `Z` acts as `+1` on
/// bit value 0 and `-1` on bit value 1.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amps: Vec<Complex64>,
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SITES {
        return Err(Error::input(format!("state needs 1..={MAX_SITES} sites, got {n}")));
    }
    Ok(())
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized.
    pub fn from_amplitudes(n_sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        let s = Self::from_raw(n_sites, amps)?;
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::input(format!("state norm {norm} differs from 1")));
        }
        Ok(s)
    }

    /// Wraps amplitudes without normalization check (e.g. `H|psi>`).
    pub fn from_raw(n_sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_sites(n_sites)?;
        if amps.len() != 1usize << n_sites {
            return Err(Error::input(format!(
                "expected 2^{n_sites} = {} amplitudes, got {}",
                1usize << n_sites,
                amps.len()
            )));
        }
        Ok(StateVector { n_sites, amps })
    }

    /// Product basis state `|bits>`.
    pub fn basis(n_sites: usize, bits: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        if bits >= dim {
            return Err(Error::input(format!("basis index {bits} >= {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[bits] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_sites, amps })
    }

    /// `|1,0,1,0,...>`: odd bits on even sites.
    pub fn staggered(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let bits = (0..n_sites).step_by(2).fold(0usize, |b, k| b | (1 << k));
        Self::basis(n_sites, bits)
    }

    /// `|+>^N`
    pub fn plus_x(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(StateVector { n_sites, amps: vec![a; dim] })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        deterministic_sum(self.amps.len(), |i| self.amps[i].norm_sqr()).sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::input("inner product of states with different sizes"));
        }
        Ok(deterministic_csum(self.amps.len(), |i| self.amps[i].conj() * other.amps[i]))
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::input("cannot normalize a zero or non-finite vector"));
        }
        let inv = 1.0 / n;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    fn check_site(&self, i: usize) -> Result<()> {
        if i < self.n_sites {
            Ok(())
        } else {
            Err(Error::input(format!("site {i} outside {}-site state", self.n_sites)))
        }
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return Err(Error::input(format!("two-site expectation needs distinct sites, got {i} twice")));
        }
        Ok(())
    }

    /// `<Z_i>`
    pub fn expectation_z(&self, i: usize) -> Result<f64> {
        self.check_site(i)?;
        Ok(deterministic_sum(self.amps.len(), |x| {
            let s = if (x >> i) & 1 == 0 { 1.0 } else { -1.0 };
            s * self.amps[x].norm_sqr()
        }))
    }

    /// `<Z_i Z_j>`
    pub fn expectation_zz(&self, i: usize, j: usize) -> Result<f64> {
        self.check_pair(i, j)?;
        Ok(deterministic_sum(self.amps.len(), |x| {
            let s = if ((x >> i) ^ (x >> j)) & 1 == 0 { 1.0 } else { -1.0 };
            s * self.amps[x].norm_sqr()
        }))
    }

    /// `<Z_i Z_j> - <Z_i><Z_j>`
    pub fn connected_zz(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.expectation_zz(i, j)? - self.expectation_z(i)? * self.expectation_z(j)?)
    }

    /// `<S+_i S-_j>` with `S+ = |0><1|`.
    pub fn expectation_pm(&self, i: usize, j: usize) -> Result<Complex64> {
        self.check_pair(i, j)?;
        let flip = (1usize << i) | (1usize << j);
        Ok(deterministic_csum(self.amps.len(), |x| {
            // S-_j needs bit j = 0, S+_i then needs bit i = 1.
            if (x >> j) & 1 == 0 && (x >> i) & 1 == 1 {
                self.amps[x ^ flip].conj() * self.amps[x]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// `<X_i X_j>`
    pub fn expectation_xx(&self, i: usize, j: usize) -> Result<f64> {
        self.check_pair(i, j)?;
        let flip = (1usize << i) | (1usize << j);
        Ok(deterministic_sum(self.amps.len(), |x| (self.amps[x ^ flip].conj() * self.amps[x]).re))
    }

    /// `<X_i>`
    pub fn expectation_x(&self, i: usize) -> Result<f64> {
        self.check_site(i)?;
        let flip = 1usize << i;
        Ok(deterministic_sum(self.amps.len(), |x| (self.amps[x ^ flip].conj() * self.amps[x]).re))
    }

    /// `<sum_k Z_k>`
    pub fn total_magnetization(&self) -> f64 {
        let n = self.n_sites;
        deterministic_sum(self.amps.len(), |x| {
            let up = n as i64 - 2 * (x.count_ones() as i64);
            up as f64 * self.amps[x].norm_sqr()
        })
    }

    /// Little-endian checkpoint: 8-byte magic, `N` as u64, then interleaved
    /// re/im f64 pairs for every amplitude.
    pub fn write_checkpoint(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::with_capacity(16 + 16 * self.amps.len());
        buf.extend_from_slice(CHECKPOINT_MAGIC);
        buf.extend_from_slice(&(self.n_sites as u64).to_le_bytes());
        for a in &self.amps {
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
        let mut f = fs::File::create(path)?;
        f.write_all(&buf)?;
        Ok(())
    }

    pub fn read_checkpoint(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        fs::File::open(path)?.read_to_end(&mut bytes)?;
        if bytes.len() < 16 || &bytes[..8] != CHECKPOINT_MAGIC {
            return Err(Error::input(format!("{}: not a state checkpoint", path.display())));
        }
        let n = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        check_sites(n)?;
        let dim = 1usize << n;
        if bytes.len() != 16 + 16 * dim {
            return Err(Error::input(format!(
                "{}: expected {} bytes for N = {n}, found {}",
                path.display(),
                16 + 16 * dim,
                bytes.len()
            )));
        }
        let amps = bytes[16..]
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        Ok(StateVector { n_sites: n, amps })
    }
}

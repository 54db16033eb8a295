//! Small numerical helpers shared by the physics modules.

use rayon::prelude::*;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Fixed block length for parallel reductions. Block boundaries depend only on
/// the input length, so the result does not depend on the thread count.
pub(crate) const REDUCE_BLOCK: usize = 4096;

/// Deterministic parallel sum of `f(i)` for `i in 0..len`.
///
/// Partial sums are formed over fixed-size blocks and then combined
/// sequentially in block order.
pub fn deterministic_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let blocks = len.div_ceil(REDUCE_BLOCK);
    let partials: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * REDUCE_BLOCK;
            let hi = (lo + REDUCE_BLOCK).min(len);
            compensated_sum((lo..hi).map(&f))
        })
        .collect();
    compensated_sum(partials)
}

/// Complex counterpart of [`deterministic_sum`].
pub fn deterministic_csum<F>(len: usize, f: F) -> num_complex::Complex64
where
    F: Fn(usize) -> num_complex::Complex64 + Sync,
{
    let blocks = len.div_ceil(REDUCE_BLOCK);
    let partials: Vec<(CompensatedSum, CompensatedSum)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * REDUCE_BLOCK;
            let hi = (lo + REDUCE_BLOCK).min(len);
            let mut re = CompensatedSum::new();
            let mut im = CompensatedSum::new();
            for i in lo..hi {
                let z = f(i);
                re.add(z.re);
                im.add(z.im);
            }
            (re, im)
        })
        .collect();
    let re = compensated_sum(partials.iter().map(|p| p.0.value()));
    let im = compensated_sum(partials.iter().map(|p| p.1.value()));
    num_complex::Complex64::new(re, im)
}

/// Hurwitz zeta function `zeta(s, a) = sum_{k>=0} (k + a)^{-s}`, `a > 0`.
///
/// Euler-Maclaurin summation: direct terms up to `k = n - 1`, then the
/// integral tail and Bernoulli corrections. The same expression is the
/// analytic continuation for `s < 1`; accurate for `-4 <= s`, `s != 1`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s != 1.0, "hurwitz_zeta has a pole at s = 1");
    assert!(s >= -4.0, "hurwitz_zeta continuation only for s >= -4");
    assert!(a > 0.0, "hurwitz_zeta requires a > 0");
    // B_{2k} / (2k)!
    const B2K_OVER_FACT: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    let n = 16usize;
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        acc.add((k as f64 + a).powf(-s));
    }
    let x = n as f64 + a;
    let xs = x.powf(-s);
    acc.add(x * xs / (s - 1.0));
    acc.add(0.5 * xs);
    // Rising factorial s(s+1)...(s+2k-2) times x^{-s-2k+1}.
    let mut poch = s;
    let mut pow = xs / x;
    for (k, &c) in B2K_OVER_FACT.iter().enumerate() {
        acc.add(c * poch * pow);
        let j = 2 * k as u32 + 1;
        poch *= (s + j as f64) * (s + j as f64 + 1.0);
        pow /= x * x;
    }
    acc.value()
}

/// `zeta(s, a)`, with the pole at `s = 1` replaced by its finite part `-psi(a)`.
pub fn hurwitz_zeta_regularized(s: f64, a: f64) -> f64 {
    if s == 1.0 {
        -digamma(a)
    } else {
        hurwitz_zeta(s, a)
    }
}

/// Digamma function for `x > 0`: upward recurrence, then the asymptotic series.
pub fn digamma(mut x: f64) -> f64 {
    assert!(x > 0.0, "digamma requires x > 0");
    let mut acc = 0.0;
    while x < 20.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    acc + x.ln() - 0.5 / x - series
}

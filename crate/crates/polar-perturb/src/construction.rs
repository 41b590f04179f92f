//! Gaussian-approximation reliability computation and information-set
//! selection.
//!
//! Bit-channel LLRs are modeled as N(mu, 2*mu); the mean recursion is
//!   mu_N^(2i)   = phi^{-1}(1 - (1 - phi(mu_{N/2}^(i)))^2)
//!   mu_N^(2i+1) = 2 * mu_{N/2}^(i)
//! with base mu_1 = 2/sigma^2 and
//!   phi(x) = 1 - integral (4*pi*x)^{-1/2} tanh(t/2) exp(-(t-x)^2/(4x)) dt.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// GA means and Bhattacharyya upper bounds per bit-channel, in decoding
/// order, for one channel noise variance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReliabilityProfile {
    pub mu: Vec<f64>,
    pub z_bound: Vec<f64>,
    pub sigma2: f64,
}

/// Exponents for the theory-compliant information sets:
/// beta in (1/3, 1/2), alpha in (1-2*beta, beta), gamma < beta.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TheoryParams {
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl TheoryParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 1.0 / 3.0 && self.beta < 0.5) {
            return Err(Error::Config(format!(
                "beta must lie in (1/3, 1/2), got {}",
                self.beta
            )));
        }
        if !(self.alpha > 1.0 - 2.0 * self.beta && self.alpha < self.beta) {
            return Err(Error::Config(format!(
                "alpha must lie in (1-2*beta, beta) = ({}, {}), got {}",
                1.0 - 2.0 * self.beta,
                self.beta,
                self.alpha
            )));
        }
        if self.gamma >= self.beta {
            return Err(Error::Config(format!(
                "gamma must be < beta, got gamma={} beta={}",
                self.gamma, self.beta
            )));
        }
        Ok(())
    }
}

const PHI_REL_TOL: f64 = 1e-12;
/// Above this argument the integral underflows; switch to the asymptotic
/// expansion phi(x) ~ exp(-x/4) sqrt(pi/x) (1 - 10/(7x)).
const PHI_ASYMPTOTIC_X: f64 = 700.0;

/// Integrand of 1 - E[tanh(t/2)] pulled inside the expectation:
/// 1 - tanh(t/2) = 2 / (1 + e^t), which keeps the integrand positive and
/// avoids the catastrophic cancellation of 1 - (integral near 1) at large x.
fn phi_integrand(t: f64, x: f64) -> f64 {
    let d = t - x;
    let sig = if t > 0.0 {
        let e = (-t).exp();
        2.0 * e / (1.0 + e)
    } else {
        2.0 / (1.0 + t.exp())
    };
    sig * (-d * d / (4.0 * x)).exp()
}

/// Adaptive Simpson with the classic tolerance-halving acceptance test.
/// The absolute tolerance is pre-scaled to the integral's magnitude, so
/// the result carries relative accuracy while tail panels accept at once.
fn adaptive_simpson(x: f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = phi_integrand(lm, x);
    let frm = phi_integrand(rm, x);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(x, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adaptive_simpson(x, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Initial uniform panel count. Must be fine enough that the sigmoid
/// shoulder near t = 0 (width of a few units) is sampled even when the
/// Gaussian window is thousands wide; otherwise adaptive refinement
/// sees only near-zero samples there and accepts a spike-free estimate.
const PHI_PANELS: usize = 256;

/// phi(x) from the GA recursion; strictly decreasing, phi(0) = 1.
pub fn phi(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Numerical {
            context: "phi".into(),
            detail: format!("argument must be nonnegative, got {x}"),
        });
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x > PHI_ASYMPTOTIC_X {
        return Ok((-x / 4.0).exp() * (std::f64::consts::PI / x).sqrt() * (1.0 - 10.0 / (7.0 * x)));
    }
    // Gaussian mass outside x +/- 40*sqrt(2x) is negligible, and for x in
    // this range the window always contains the sigmoid shoulder at t ~ 0.
    let half_width = 40.0 * (2.0 * x).sqrt().max(x.sqrt());
    let a = x - half_width;
    let b = x + half_width;
    let h = (b - a) / PHI_PANELS as f64;
    let mut cells = Vec::with_capacity(PHI_PANELS);
    let mut rough = 0.0;
    let mut f_lo = phi_integrand(a, x);
    for i in 0..PHI_PANELS {
        let lo = a + i as f64 * h;
        let fm = phi_integrand(lo + 0.5 * h, x);
        let f_hi = phi_integrand(lo + h, x);
        let s = h / 6.0 * (f_lo + 4.0 * fm + f_hi);
        rough += s;
        cells.push((lo, lo + h, f_lo, fm, f_hi, s));
        f_lo = f_hi;
    }
    let tol = (rough * PHI_REL_TOL).max(1e-300) / PHI_PANELS as f64;
    let integral: f64 = cells
        .iter()
        .map(|&(lo, hi, fa, fm, fb, s)| adaptive_simpson(x, lo, hi, fa, fm, fb, s, tol, 40))
        .sum();
    Ok((integral / (4.0 * std::f64::consts::PI * x).sqrt()).clamp(0.0, 1.0))
}

/// Inverse of [`phi`] on (0, 1), by geometric bracket expansion and
/// bisection on the monotone function.
pub fn phi_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Numerical {
            context: "phi_inv".into(),
            detail: format!("target must lie in (0,1), got {y}"),
        });
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    // phi is decreasing: expand hi until phi(hi) < y.
    while phi(hi)? >= y {
        lo = hi;
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Numerical {
                context: "phi_inv".into(),
                detail: format!("bracket expansion failed for y = {y}"),
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid)? > y {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// GA means for all 2^n bit-channels in decoding order.
pub fn ga_means(n: u32, sigma2: f64) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::Config("ga_means requires n >= 1".into()));
    }
    if sigma2 <= 0.0 {
        return Err(Error::Config(format!("sigma2 must be positive, got {sigma2}")));
    }
    let mut mu = vec![2.0 / sigma2];
    // Identical parent means repeat heavily across a level; memoize the
    // f-branch update per distinct value.
    let mut cache: HashMap<u64, f64> = HashMap::new();
    for level in 1..=n {
        let mut next = Vec::with_capacity(mu.len() * 2);
        for (idx, &m) in mu.iter().enumerate() {
            let key = m.to_bits();
            let even = match cache.get(&key) {
                Some(&v) => v,
                None => {
                    let pm = phi(m).map_err(|e| annotate(e, level, 2 * idx))?;
                    // 1 - (1 - pm)^2 without cancellation for tiny pm.
                    let target = pm * (2.0 - pm);
                    let v = if target == 0.0 {
                        // phi underflowed at huge mu; the asymptotic form
                        // phi(x) ~ exp(-x/4) sqrt(pi/x) gives
                        // phi^{-1}(2 phi(m)) ~ m - 4 ln 2.
                        m - 4.0 * std::f64::consts::LN_2
                    } else if target >= 1.0 {
                        0.0
                    } else {
                        phi_inv(target).map_err(|e| annotate(e, level, 2 * idx))?
                    };
                    cache.insert(key, v);
                    v
                }
            };
            next.push(even);
            next.push(2.0 * m);
        }
        mu = next;
    }
    Ok(mu)
}

fn annotate(e: Error, level: u32, index: usize) -> Error {
    match e {
        Error::Numerical { context, detail } => Error::Numerical {
            context: format!("{context} (level {level}, index {index})"),
            detail,
        },
        other => other,
    }
}

/// Bhattacharyya upper bounds for all 2^n bit-channels: base
/// Z_0 = exp(-1/(2*sigma2)), f-branch 2Z - Z^2 (upper bound), g-branch Z^2.
pub fn bhattacharyya_bounds(n: u32, sigma2: f64) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::Config("bhattacharyya_bounds requires n >= 1".into()));
    }
    if sigma2 <= 0.0 {
        return Err(Error::Config(format!("sigma2 must be positive, got {sigma2}")));
    }
    let mut z = vec![(-1.0 / (2.0 * sigma2)).exp()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(z.len() * 2);
        for &zi in &z {
            next.push((2.0 * zi - zi * zi).min(1.0));
            next.push(zi * zi);
        }
        z = next;
    }
    Ok(z)
}

/// Indices of the K largest means; ties broken toward the smaller index.
/// Result sorted ascending.
pub fn select_info_set(mu: &[f64], k: usize) -> Result<Vec<usize>> {
    if k > mu.len() {
        return Err(Error::Config(format!(
            "K = {k} exceeds block length {}",
            mu.len()
        )));
    }
    let mut order: Vec<usize> = (0..mu.len()).collect();
    order.sort_by(|&a, &b| mu[b].partial_cmp(&mu[a]).unwrap().then(a.cmp(&b)));
    let mut chosen: Vec<usize> = order[..k].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Theory-restricted information set {i : Z_i < 2^{-N^beta}}. May be
/// empty at small N.
pub fn theory_info_set(n: u32, sigma2: f64, params: &TheoryParams) -> Result<Vec<usize>> {
    params.validate()?;
    let z = bhattacharyya_bounds(n, sigma2)?;
    let big_n = (1u64 << n) as f64;
    let threshold = 2f64.powf(-big_n.powf(params.beta));
    Ok(z.iter()
        .enumerate()
        .filter(|(_, &zi)| zi < threshold)
        .map(|(i, _)| i)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn phi_at_zero_is_one() {
        assert_eq!(phi(0.0).unwrap(), 1.0);
    }

    #[test]
    fn phi_rejects_negative() {
        assert!(phi(-1.0).is_err());
    }

    #[test]
    fn phi_strictly_decreasing_samples() {
        let a = phi(0.1).unwrap();
        let b = phi(1.0).unwrap();
        let c = phi(10.0).unwrap();
        assert!(c < b && b < a);
        assert!(a < 1.0 && c > 0.0);
    }

    #[test]
    fn phi_matches_trapezoid_oracle() {
        // Independent high-resolution trapezoid over the same window.
        for &x in &[0.5f64, 2.0, 10.0, 50.0] {
            let w = 40.0 * x.sqrt();
            let (a, b) = (x - w, x + w);
            let steps = 2_000_000usize;
            let h = (b - a) / steps as f64;
            let mut sum = 0.5 * (phi_integrand(a, x) + phi_integrand(b, x));
            for i in 1..steps {
                sum += phi_integrand(a + i as f64 * h, x);
            }
            let oracle = sum * h / (4.0 * std::f64::consts::PI * x).sqrt();
            assert_abs_diff_eq!(phi(x).unwrap(), oracle, epsilon = 1e-8);
        }
    }

    #[test]
    fn phi_inv_round_trip() {
        for &x in &[0.1, 1.0, 10.0, 100.0] {
            let y = phi(x).unwrap();
            assert_abs_diff_eq!(phi_inv(y).unwrap(), x, epsilon = 1e-6 * x.max(1.0));
        }
    }

    #[test]
    fn phi_inv_near_one_tends_to_zero() {
        assert!(phi_inv(0.9999).unwrap() < 1e-3);
    }

    #[test]
    fn phi_inv_rejects_out_of_range() {
        assert!(phi_inv(0.0).is_err());
        assert!(phi_inv(1.0).is_err());
        assert!(phi_inv(-0.5).is_err());
    }

    #[test]
    fn phi_inv_half_matches_bisection_oracle() {
        // Plain bisection against phi on a fixed wide bracket.
        let target = 0.5;
        let (mut lo, mut hi) = (0.0f64, 100.0f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if phi(mid).unwrap() > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_abs_diff_eq!(phi_inv(target).unwrap(), 0.5 * (lo + hi), epsilon = 1e-8);
    }

    #[test]
    fn ga_means_paper_examples() {
        // n=1, sigma2=1: odd branch doubles mu_1 = 2.
        let mu = ga_means(1, 1.0).unwrap();
        assert_abs_diff_eq!(mu[1], 4.0, epsilon = 1e-12);
        assert!(mu[0] < 2.0);
        // n=2, sigma2=0.5: two odd branches double twice from mu_1 = 4.
        let mu4 = ga_means(2, 0.5).unwrap();
        assert_abs_diff_eq!(mu4[3], 16.0, epsilon = 1e-12);
    }

    #[test]
    fn odd_branch_doubling_exact() {
        let parent = ga_means(5, 0.7).unwrap();
        let child = ga_means(6, 0.7).unwrap();
        for (i, &p) in parent.iter().enumerate() {
            assert_eq!(child[2 * i + 1], 2.0 * p);
        }
    }

    #[test]
    fn recursion_consistency_even_branch() {
        let parent = ga_means(5, 0.5).unwrap();
        let child = ga_means(6, 0.5).unwrap();
        for (i, &p) in parent.iter().enumerate() {
            let lhs = 1.0 - phi(child[2 * i]).unwrap();
            let rhs = (1.0 - phi(p).unwrap()).powi(2);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-6);
        }
    }

    #[test]
    fn polarization_trend() {
        let mut prev_max = f64::MIN;
        let mut prev_min = f64::MAX;
        for n in 1..=8 {
            let mu = ga_means(n, 0.5).unwrap();
            let max = mu.iter().cloned().fold(f64::MIN, f64::max);
            let min = mu.iter().cloned().fold(f64::MAX, f64::min);
            assert!(max >= prev_max - 1e-9);
            assert!(min <= prev_min + 1e-9);
            prev_max = max;
            prev_min = min;
        }
    }

    #[test]
    fn bhattacharyya_base_and_recursion() {
        let z = bhattacharyya_bounds(1, 0.5).unwrap();
        let z0 = (-1.0f64).exp();
        assert_abs_diff_eq!(z0, 0.36787944117144233, epsilon = 1e-15);
        assert_abs_diff_eq!(z[1], z0 * z0, epsilon = 1e-15);
        assert_abs_diff_eq!(z[0], 2.0 * z0 - z0 * z0, epsilon = 1e-15);
        // All-g path at depth n is repeated squaring.
        let z3 = bhattacharyya_bounds(3, 0.5).unwrap();
        assert_abs_diff_eq!(z3[7], z0.powi(8), epsilon = 1e-15);
        assert!(z3.iter().all(|&zi| zi > 0.0 && zi < 1.0));
    }

    #[test]
    fn f_branch_never_improves() {
        let parent = bhattacharyya_bounds(4, 0.5).unwrap();
        let child = bhattacharyya_bounds(5, 0.5).unwrap();
        for (i, &p) in parent.iter().enumerate() {
            assert!(child[2 * i] >= p - 1e-15);
        }
    }

    #[test]
    fn select_info_set_examples() {
        assert_eq!(select_info_set(&[1.0, 4.0, 3.0, 8.0], 2).unwrap(), vec![1, 3]);
        assert_eq!(select_info_set(&[1.0, 2.0], 2).unwrap(), vec![0, 1]);
        // Tie at indices 2 and 5, one slot: pick 2.
        let mu = [0.0, 0.0, 5.0, 0.0, 0.0, 5.0];
        assert_eq!(select_info_set(&mu, 1).unwrap(), vec![2]);
        assert!(select_info_set(&mu, 7).is_err());
    }

    #[test]
    fn theory_set_can_be_empty_at_small_n() {
        let params = TheoryParams { beta: 0.49, alpha: 0.2, gamma: 0.4 };
        let set = theory_info_set(3, 2.5, &params).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn theory_params_interval_checks() {
        assert!(TheoryParams { beta: 0.3, alpha: 0.2, gamma: 0.1 }.validate().is_err());
        assert!(TheoryParams { beta: 0.45, alpha: 0.5, gamma: 0.1 }.validate().is_err());
        assert!(TheoryParams { beta: 0.45, alpha: 0.2, gamma: 0.5 }.validate().is_err());
        assert!(TheoryParams { beta: 0.45, alpha: 0.2, gamma: 0.4 }.validate().is_ok());
    }
}

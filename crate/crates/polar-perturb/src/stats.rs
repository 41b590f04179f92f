//! Small statistics helpers for Monte Carlo proportions.

/// z for a two-sided 95% interval.
pub const Z_95: f64 = 1.959963984540054;
/// z for a one-sided 95% test.
pub const Z_95_ONE_SIDED: f64 = 1.6448536269514722;

/// 95% Wilson score interval for `hits` successes in `trials`.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let margin = (Z_95 / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // The exact endpoints at 0 and n hits are 0 and 1; snap them so
    // rounding noise in center - margin does not leak into reports.
    let lo = if hits == 0 { 0.0 } else { (center - margin).max(0.0) };
    let hi = if hits == trials { 1.0 } else { (center + margin).min(1.0) };
    (lo, hi)
}

/// One-sided test that proportion a is not greater than proportion b at
/// 95%: returns true when hits_a/n_a <= hits_b/n_b plus the pooled
/// standard-error allowance.
pub fn not_significantly_greater(hits_a: u64, n_a: u64, hits_b: u64, n_b: u64) -> bool {
    if n_a == 0 || n_b == 0 {
        return true;
    }
    let pa = hits_a as f64 / n_a as f64;
    let pb = hits_b as f64 / n_b as f64;
    let pooled = (hits_a + hits_b) as f64 / (n_a + n_b) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n_a as f64 + 1.0 / n_b as f64)).sqrt();
    pa <= pb + Z_95_ONE_SIDED * se
}

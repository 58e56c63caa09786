//! Quadrature reference for the discretized normal score model.

#![allow(dead_code)]

pub fn density(x: f64, mean: f64, sigma: f64) -> f64 {
    let z = (x - mean) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

/// Composite Simpson rule over `[lo, hi]`.
pub fn simpson(lo: f64, hi: f64, steps: usize, f: impl Fn(f64) -> f64) -> f64 {
    let steps = steps + steps % 2;
    let h = (hi - lo) / steps as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + i as f64 * h);
    }
    acc * h / 3.0
}

/// P(goals = k) by quadrature: k = 0 collects everything below 0.5.
pub fn quad_pmf(k: u64, mean: f64, sigma: f64) -> f64 {
    let hi = k as f64 + 0.5;
    let lo = if k == 0 { mean - 14.0 * sigma } else { k as f64 - 0.5 };
    if hi <= lo {
        return 0.0;
    }
    simpson(lo, hi, 2000, |x| density(x, mean, sigma))
}

/// Win/draw/loss of `(ma, mb)` by double summation over quadrature pmfs.
pub fn quad_outcomes(ma: f64, mb: f64, sigma: f64) -> (f64, f64, f64) {
    let kmax = (ma.max(mb) + 14.0 * sigma).ceil() as u64;
    let pa: Vec<f64> = (0..=kmax).map(|k| quad_pmf(k, ma, sigma)).collect();
    let pb: Vec<f64> = (0..=kmax).map(|k| quad_pmf(k, mb, sigma)).collect();
    let (mut w, mut d, mut l) = (0.0, 0.0, 0.0);
    for (i, x) in pa.iter().enumerate() {
        for (j, y) in pb.iter().enumerate() {
            match i.cmp(&j) {
                std::cmp::Ordering::Greater => w += x * y,
                std::cmp::Ordering::Equal => d += x * y,
                std::cmp::Ordering::Less => l += x * y,
            }
        }
    }
    (w, d, l)
}

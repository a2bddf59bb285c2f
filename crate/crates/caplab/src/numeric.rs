//! Small numeric helpers shared across the solvers.

use rand::Rng;

/// log(sum exp(t)) evaluated stably; returns -inf for an empty slice or one
/// containing only -inf.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = terms.iter().map(|&t| (t - m).exp()).sum();
    m + s.ln()
}

/// Compensated accumulator for long sums of small terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Euclidean projection of `v` onto the probability simplex.
pub fn project_to_simplex(v: &mut [f64]) {
    let n = v.len();
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
        sum += *x;
    }
    // Guard against an all-clipped slice when v was far outside the simplex.
    if sum <= 0.0 {
        let unif = 1.0 / n as f64;
        v.iter_mut().for_each(|x| *x = unif);
    } else {
        v.iter_mut().for_each(|x| *x /= sum);
    }
}

/// Draws a point uniformly from the probability simplex (flat Dirichlet) via
/// normalized exponentials.
pub fn random_simplex_point<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..k)
            .map(|_| -(1.0 - rng.gen::<f64>()).ln())
            .collect();
        let s: f64 = v.iter().sum();
        if s > 0.0 && s.is_finite() {
            v.iter_mut().for_each(|x| *x /= s);
            return v;
        }
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns `(x, f(x))` with the bracket narrowed below `tol`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Relative-or-absolute closeness test used throughout the test suites.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

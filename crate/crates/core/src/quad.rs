//! Gauss–Legendre rules.

use num_complex::Complex;

use crate::Real;

#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// n-point rule on [−1, 1], nodes from Newton's method on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let nf = T::of_u64(n as u64);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n.div_ceil(2) {
            let mut x = (T::PI() * (T::of_u64(i as u64) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn integrate<F>(&self, f: F, a: T, b: T, panels: usize) -> Complex<T>
    where
        F: Fn(T) -> Complex<T>,
    {
        let h = (b - a) / T::of_u64(panels as u64);
        let half = h / T::lit(2.0);
        let mut s = Complex::new(T::zero(), T::zero());
        for k in 0..panels {
            let mid = a + h * (T::of_u64(k as u64) + T::lit(0.5));
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += f(mid + half * *x) * *w;
            }
        }
        s * half
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::of_u64(k as u64);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::of_u64(n as u64);
    (p1, nf * (x * p1 - p0) / (x * x - T::one()))
}

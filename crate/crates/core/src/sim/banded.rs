use crate::Real;

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Clone, Debug)]
pub struct BandMatrix<T> {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    data: Vec<T>,
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, data: vec![T::zero(); n * (kl + ku + 1)] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku);
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if j + self.kl < i || j > i + self.ku {
            T::zero()
        } else {
            self.data[self.idx(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn row_range(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.kl)..=(i + self.ku).min(self.n - 1)
    }

    pub fn matvec(&self, x: &[T], out: &mut [T]) {
        for i in 0..self.n {
            let mut s = T::zero();
            for j in self.row_range(i) {
                s += self.data[self.idx(i, j)] * x[j];
            }
            out[i] = s;
        }
    }
}

/// LU factors with partial pivoting. Row interchanges widen the upper band to
/// `kl + ku`.
#[derive(Clone, Debug)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    w: usize,
    u: Vec<T>,
    mult: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Real> BandedLu<T> {
    /// `None` when a zero pivot is met.
    pub fn factor(a: &BandMatrix<T>) -> Option<Self> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let w = 2 * kl + ku + 1;
        // row i stores columns i−kl ..= i+kl+ku
        let mut u = vec![T::zero(); n * w];
        let at = |i: usize, j: usize| i * w + (j + kl - i);
        for i in 0..n {
            for j in a.row_range(i) {
                u[at(i, j)] = a.get(i, j);
            }
        }
        let mut mult = vec![T::zero(); n * kl.max(1)];
        let mut piv = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let jmax = (k + kl + ku).min(n - 1);
            let mut p = k;
            for i in k + 1..=last {
                if u[at(i, k)].abs() > u[at(p, k)].abs() {
                    p = i;
                }
            }
            if u[at(p, k)] == T::zero() {
                return None;
            }
            piv[k] = p;
            if p != k {
                for j in k..=jmax {
                    u.swap(at(k, j), at(p, j));
                }
            }
            let d = u[at(k, k)];
            for i in k + 1..=last {
                let m = u[at(i, k)] / d;
                mult[k * kl + (i - k - 1)] = m;
                u[at(i, k)] = T::zero();
                if m != T::zero() {
                    for j in k + 1..=jmax {
                        let v = u[at(k, j)];
                        u[at(i, j)] -= m * v;
                    }
                }
            }
        }
        Some(Self { n, kl, w, u, mult, piv })
    }

    /// Solves in place.
    pub fn solve(&self, b: &mut [T]) {
        let (n, kl, w) = (self.n, self.kl, self.w);
        let at = |i: usize, j: usize| i * w + (j + kl - i);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                b[i] -= self.mult[k * kl + (i - k - 1)] * bk;
            }
        }
        let span = w - kl - 1;
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + span).min(n - 1) {
                s -= self.u[at(k, j)] * b[j];
            }
            b[k] = s / self.u[at(k, k)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solves_random_band_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, kl, ku) in &[(1, 0, 0), (5, 1, 1), (40, 2, 3), (200, 2, 3), (60, 3, 1)] {
            let mut a = BandMatrix::<f64>::zeros(n, kl, ku);
            for i in 0..n {
                for j in a.row_range(i) {
                    // weak diagonal forces pivoting
                    a.set(i, j, rng.gen_range(-1.0..1.0) * if i == j { 0.01 } else { 1.0 });
                }
            }
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut b = vec![0.0; n];
            a.matvec(&x, &mut b);
            let lu = BandedLu::factor(&a).unwrap();
            lu.solve(&mut b);
            let err = x.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            assert!(err < 1e-9, "n={n}: {err}");
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = BandMatrix::<f64>::zeros(4, 1, 1);
        assert!(BandedLu::factor(&a).is_none());
    }
}

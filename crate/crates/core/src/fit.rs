use crate::Real;

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    assert_eq!(xs.len(), ys.len());
    let n = T::of_u64(xs.len() as u64);
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = ly.iter().fold(T::zero(), |a, &b| a + b) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (x, y) in lx.iter().zip(&ly) {
        sxy += (*x - mx) * (*y - my);
        sxx += (*x - mx) * (*x - mx);
    }
    sxy / sxx
}

/// Logarithmically spaced points from `a` to `b` inclusive.
pub fn logspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    let mut out: Vec<T> = (0..n)
        .map(|i| (la + (lb - la) * T::of_u64(i as u64) / T::of_u64((n - 1) as u64)).exp())
        .collect();
    out[0] = a;
    out[n - 1] = b;
    out
}

//! Float math routed through `libm` for the functions `core` does not provide.
//!
//! `abs`, `max`, `min` and friends come from `core` and are used directly;
//! only the transcendentals and `floor` need shims in a `no_std` build.

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

pub(crate) const LN_2: f64 = core::f64::consts::LN_2;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; nodes are mirrored so the
/// rule is exactly symmetric (odd-degree monomials integrate to exactly 0).
pub(crate) fn gauss_legendre(n: usize) -> (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) {
    use alloc::vec;
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Asymptotic root estimate, then Newton on P_n.
        let mut z = cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        nodes[i] = -z.abs();
        nodes[n - 1 - i] = z.abs();
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

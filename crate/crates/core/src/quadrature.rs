//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_DEPTH: u32 = 48;

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * w;
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let integral = kronrod * half;
    let err = ((kronrod - gauss) * half).norm();
    (integral, err)
}

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol`, with
/// `abs_tol` as the floor for integrals that vanish.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (whole, err) = gk15(&f, a, b);
    if !whole.re.is_finite() || !whole.im.is_finite() {
        return Err(Error::Numeric("non-finite integrand".into()));
    }
    let tol = (rel_tol * whole.norm()).max(abs_tol);
    let mut budget = 20_000usize;
    recurse(&f, a, b, whole, err, tol, 0, &mut budget)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    estimate: Complex64,
    err: f64,
    tol: f64,
    depth: u32,
    budget: &mut usize,
) -> Result<Complex64> {
    if err <= tol {
        return Ok(estimate);
    }
    if depth >= MAX_DEPTH || *budget == 0 {
        return Err(Error::Numeric(format!(
            "quadrature did not converge on [{a}, {b}] (error {err:e} > {tol:e})"
        )));
    }
    *budget -= 1;
    let mid = 0.5 * (a + b);
    let (left, el) = gk15(f, a, mid);
    let (right, er) = gk15(f, mid, b);
    let half_tol = 0.5 * tol;
    Ok(recurse(f, a, mid, left, el, half_tol, depth + 1, budget)?
        + recurse(f, mid, b, right, er, half_tol, depth + 1, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| Complex64::new(x * x * x, 2.0 * x), 0.0, 2.0, 1e-12, 1e-300).unwrap();
        assert!((v.re - 4.0).abs() < 1e-13);
        assert!((v.im - 4.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_phase() {
        let w = 7.0;
        let t = 10.0;
        let v = integrate(|x| Complex64::new(0.0, w * x).exp(), 0.0, t, 1e-12, 1e-300).unwrap();
        let exact = (Complex64::new(0.0, w * t).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((v - exact).norm() < 1e-11 * exact.norm());
    }

    #[test]
    fn divergent_integral_reports_non_convergence() {
        let r = integrate(|x| Complex64::new(1.0 / x, 0.0), 0.0, 1.0, 1e-10, 1e-300);
        assert!(r.is_err());
    }
}

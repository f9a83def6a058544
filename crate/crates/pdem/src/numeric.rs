//! Small numerical utilities: quadrature, root bracketing and refinement,
//! grids. All iterative routines propagate integrand/function errors.

use crate::error::{Error, Result};

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
        .collect()
}

/// Trapezoid rule on an arbitrary (increasing) grid.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mut acc = 0.0;
    for i in 1..xs.len() {
        acc += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    }
    acc
}

/// Recursive adaptive Simpson quadrature with Richardson acceptance
/// (|S_fine − S_coarse| < 15·tol). Depth exhaustion returns the refined
/// estimate rather than failing: the remaining error on such subintervals
/// is below the resolution the tolerance budget assigns them.
pub fn adaptive_simpson<F>(f: &mut F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let fa = f(a)?;
    let fm = f(m)?;
    let fb = f(b)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_refine(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine<F>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() < 15.0 * tol {
        return Ok(refined + (refined - whole) / 15.0);
    }
    let half_tol = 0.5 * tol;
    Ok(
        simpson_refine(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
            + simpson_refine(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?,
    )
}

/// Sign-change brackets of `f` on `n` evenly spaced samples. A sample that
/// is exactly zero is returned as a degenerate bracket.
pub fn scan_brackets<F>(f: &mut F, lo: f64, hi: f64, n: usize) -> Result<Vec<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!(
            "scan range needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "scan needs at least 2 points, got {n}"
        )));
    }
    let xs = linspace(lo, hi, n);
    let mut brackets = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in &xs {
        let y = f(x)?;
        if y == 0.0 {
            brackets.push((x, x));
            prev = None;
            continue;
        }
        if let Some((px, py)) = prev {
            if py * y < 0.0 {
                brackets.push((px, x));
            }
        }
        prev = Some((x, y));
    }
    Ok(brackets)
}

/// Bisection to an interval of width `x_tol`; requires a sign change (or an
/// exact zero at an endpoint / degenerate bracket).
pub fn bisect<F>(f: &mut F, bracket: (f64, f64), x_tol: f64, max_iter: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = bracket;
    if lo == hi {
        return Ok(lo);
    }
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(Error::Convergence(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo < x_tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fmid = f(mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    Err(Error::Convergence(format!(
        "bisection did not reach width {x_tol} within {max_iter} iterations"
    )))
}

/// A few secant iterations to sharpen a root already isolated by bisection.
/// Falls back to the input on stagnation or if an evaluation fails.
pub fn secant_polish<F>(f: &mut F, x0: f64, step: f64, iters: u32) -> f64
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut a = x0;
    let mut b = x0 + step;
    let mut fa = match f(a) {
        Ok(v) => v,
        Err(_) => return x0,
    };
    let mut best = a;
    for _ in 0..iters {
        let fb = match f(b) {
            Ok(v) => v,
            Err(_) => return best,
        };
        if fb == fa || !fb.is_finite() {
            return best;
        }
        let next = b - fb * (b - a) / (fb - fa);
        if !next.is_finite() {
            return best;
        }
        a = b;
        fa = fb;
        b = next;
        best = next;
    }
    best
}

/// Scan for sign changes, then bisect each bracket and polish; returns the
/// roots in ascending order.
pub fn scan_and_bisect<F>(
    f: &mut F,
    lo: f64,
    hi: f64,
    scan_points: usize,
    x_tol: f64,
) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(x_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {x_tol}"
        )));
    }
    let brackets = scan_brackets(f, lo, hi, scan_points)?;
    let mut roots = Vec::with_capacity(brackets.len());
    for bracket in brackets {
        let root = bisect(f, bracket, x_tol, 200)?;
        roots.push(secant_polish(f, root, x_tol, 6));
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        let mut f = |x: f64| Ok(x * x * x - 2.0 * x + 1.0);
        let got = adaptive_simpson(&mut f, -1.0, 2.0, 1e-12, 40).unwrap();
        // antiderivative x^4/4 - x^2 + x
        let expect = (4.0 - 4.0 + 2.0) - (0.25 - 1.0 - 1.0);
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn simpson_meets_tolerance_on_oscillatory_integrands() {
        let mut f = |x: f64| Ok((10.0 * x).sin());
        let got = adaptive_simpson(&mut f, 0.0, 3.0, 1e-12, 48).unwrap();
        let expect = (1.0 - (30.0_f64).cos()) / 10.0;
        assert!((got - expect).abs() < 1e-11);
    }

    #[test]
    fn simpson_handles_sqrt_endpoint_singularities() {
        let mut f = |x: f64| Ok(x.max(0.0).sqrt());
        let got = adaptive_simpson(&mut f, 0.0, 1.0, 1e-10, 48).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn simpson_propagates_integrand_errors() {
        let mut f = |x: f64| {
            if x > 0.5 {
                Err(Error::Domain("beyond the fence".into()))
            } else {
                Ok(x)
            }
        };
        assert!(adaptive_simpson(&mut f, 0.0, 1.0, 1e-10, 20).is_err());
    }

    #[test]
    fn bisection_finds_cubic_root() {
        let mut f = |x: f64| Ok(x * x * x - 2.0);
        let root = bisect(&mut f, (0.0, 2.0), 1e-14, 200).unwrap();
        assert!((root - 2.0_f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn bisection_requires_a_sign_change() {
        let mut f = |x: f64| Ok(x * x + 1.0);
        assert!(bisect(&mut f, (-1.0, 1.0), 1e-10, 100).is_err());
    }

    #[test]
    fn scan_and_bisect_collects_all_roots() {
        let mut f = |x: f64| Ok((x).sin());
        let roots = scan_and_bisect(&mut f, 0.5, 10.0, 400, 1e-12).unwrap();
        assert_eq!(roots.len(), 3);
        for (i, r) in roots.iter().enumerate() {
            assert!((r - (i + 1) as f64 * std::f64::consts::PI).abs() < 1e-10);
        }
    }

    #[test]
    fn trapezoid_on_linear_data_is_exact() {
        let xs = linspace(0.0, 4.0, 9);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((trapezoid(&xs, &ys) - 28.0).abs() < 1e-12);
    }

    #[test]
    fn linspace_endpoints_are_exact() {
        let xs = linspace(-2.5, 7.5, 11);
        assert_eq!(xs[0], -2.5);
        assert_eq!(xs[10], 7.5);
        assert_eq!(xs.len(), 11);
        assert!((xs[5] - 2.5).abs() < 1e-14);
    }
}

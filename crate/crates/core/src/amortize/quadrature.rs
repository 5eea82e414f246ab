/// Adaptive Simpson quadrature of `f` on `[a, b]` with relative tolerance `rel`.
///
/// Returns `None` if the integrand produces a non-finite value.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel: f64) -> Option<f64> {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    if !whole.is_finite() {
        return None;
    }
    let tol = rel * whole.abs() + f64::MIN_POSITIVE;
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if !(left.is_finite() && right.is_finite()) {
        return None;
    }
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol || m <= a || m >= b {
        return Some(left + right + diff / 15.0);
    }
    Some(
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
    )
}

/// `int_0^half f(t) dt` for an integrand that is smooth away from `t = 0`
/// but may vary on scales down to `scale` near it: the range is cut into
/// geometrically shrinking pieces `[half 2^-(k+1), half 2^-k]`.
pub fn graded_from_zero<F: Fn(f64) -> f64>(f: &F, half: f64, scale: f64, rel: f64) -> Option<f64> {
    if half <= 0.0 {
        return Some(0.0);
    }
    let floor = 1e-7 * scale;
    let levels = if floor > 0.0 && half > floor {
        ((half / floor).log2().ceil() as usize).min(4000)
    } else {
        0
    };
    let mut total = 0.0;
    let mut hi = half;
    for _ in 0..levels {
        let lo = 0.5 * hi;
        total += adaptive_simpson(f, lo, hi, rel)?;
        hi = lo;
    }
    total += adaptive_simpson(f, 0.0, hi, rel)?;
    Some(total)
}

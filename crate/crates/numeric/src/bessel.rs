//! Modified Bessel function `K_0` on the positive axis.
//!
//! Power series below `u = 2`, Steed's continued fraction above. The large-`u`
//! asymptotic series and the integral `int_0^inf exp(-u cosh t) dt` are kept
//! as independent cross-checks.

use crate::NumericError;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn bessel_k0(u: f64) -> Result<f64, NumericError> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(NumericError::Domain(format!("K0 needs a positive finite argument, got {u}")));
    }
    Ok(if u < 2.0 { k0_series(u) } else { k0_steed(u) })
}

/// `-(ln(u/2) + gamma) I_0(u) + sum_k (u^2/4)^k / (k!)^2 H_k`.
fn k0_series(u: f64) -> f64 {
    let q = 0.25 * u * u;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harm = 0.0;
    let mut rest = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harm += 1.0 / kf;
        i0 += term;
        rest += term * harm;
        if term * harm.max(1.0) < 1e-18 * rest.abs().max(i0) {
            break;
        }
    }
    -((0.5 * u).ln() + EULER_GAMMA) * i0 + rest
}

/// Steed's method for the second continued fraction (Temme's normalization).
fn k0_steed(u: f64) -> f64 {
    let mut b = 2.0 * (1.0 + u);
    let mut d = 1.0 / b;
    let mut delh = d;
    let (mut q1, mut q2) = (0.0, 1.0);
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * u)).sqrt() * (-u).exp() / s
}

/// Asymptotic series `sqrt(pi/2u) e^{-u} sum_k ((2k-1)!!)^2 / (k! (-8u)^k)`,
/// truncated at its smallest term. Returns the value and the size of the
/// first omitted term (relative).
pub fn k0_asymptotic(u: f64) -> (f64, f64) {
    let mut term = 1.0f64;
    let mut sum = 1.0;
    let mut last = 1.0f64;
    for k in 1..200 {
        let kf = k as f64;
        let next = -term * (2.0 * kf - 1.0).powi(2) / (8.0 * u * kf);
        if next.abs() >= last {
            break;
        }
        term = next;
        last = next.abs();
        sum += term;
    }
    ((std::f64::consts::PI / (2.0 * u)).sqrt() * (-u).exp() * sum, last)
}

/// Trapezoid rule for `int_0^inf exp(-u cosh t) dt`; geometrically
/// convergent since the integrand is entire and doubly-exponentially decaying.
pub fn k0_integral(u: f64) -> f64 {
    let h: f64 = 1.0 / 32.0;
    let mut s = 0.5 * (-u).exp();
    let mut t = h;
    loop {
        let f = (-u * t.cosh()).exp();
        s += f;
        if f < 1e-300 || t > 50.0 {
            break;
        }
        t += h;
    }
    s * h
}

/// Agreement of the evaluation routes, as used by the test suite and by
/// `todactl run`: series/continued fraction against the integral at three
/// points, and the small-`u` logarithmic behaviour. Returns the worst
/// relative discrepancy.
pub fn self_test() -> f64 {
    let mut worst: f64 = 0.0;
    for u in [0.5, 2.0, 7.5] {
        let a = bessel_k0(u).unwrap_or(f64::NAN);
        worst = worst.max(((a - k0_integral(u)) / a).abs());
    }
    // both routes agree across the switch point
    worst = worst.max(((k0_series(2.0) - k0_steed(2.0)) / k0_steed(2.0)).abs());
    let u = 1e-8;
    worst = worst.max((k0_series(u) + (0.5 * u).ln() + EULER_GAMMA).abs());
    worst
}

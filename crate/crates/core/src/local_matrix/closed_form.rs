//! Closed-form spectra of the palindromic width-5 and width-6 families.
//!
//! Width 5: `[a, 1/2, 1-2a, 1/2, a]`, spectrum `{1, 1/2, 1/2 - 2a, a, a}`.
//!
//! Width 6: `[a, b, c, c, b, a]` with `c = 1 - a - b`, spectrum
//! `{1, a, a, b - a, ((1-a-b) ± √D)/2}` where `D = 1 + 2a - 7a² - 6b + 2ab + 9b²`.

use num_complex::Complex64;
use num_traits::Signed;

use super::Spectrum;
use crate::rational::{int, rat, to_f64, Rational};

pub fn w5_coefficients(a: &Rational) -> Vec<Rational> {
    let h = rat(1, 2);
    vec![a.clone(), h.clone(), int(1) - a * int(2), h, a.clone()]
}

pub fn w6_coefficients(a: &Rational, b: &Rational) -> Vec<Rational> {
    let c = int(1) - a - b;
    vec![a.clone(), b.clone(), c.clone(), c, b.clone(), a.clone()]
}

pub fn w5_closed_form(a: &Rational) -> Spectrum {
    let values = [int(1), rat(1, 2), rat(1, 2) - a * int(2), a.clone(), a.clone()];
    Spectrum::new(values.iter().map(|x| Complex64::new(to_f64(x), 0.0)).collect())
}

/// The discriminant `D(a, b)` of the quadratic factor `μ² - (1-a-b)μ + ...`.
pub fn w6_discriminant(a: &Rational, b: &Rational) -> Rational {
    int(1) + a * int(2) - a * a * int(7) - b * int(6) + a * b * int(2) + b * b * int(9)
}

/// The width-6 spectrum with the roots of the quadratic factor `((1-a-b) ± √D) / 2`.
pub fn w6_closed_form(a: &Rational, b: &Rational) -> Spectrum {
    w6_with_divisor(a, b, 2.0)
}

/// The width-6 spectrum with the quadratic roots written as `(1-a-b) ± √D`, without the
/// halving. Kept to document that this form does not reproduce the width-6 example scheme.
pub fn w6_closed_form_as_printed(a: &Rational, b: &Rational) -> Spectrum {
    w6_with_divisor(a, b, 1.0)
}

fn w6_with_divisor(a: &Rational, b: &Rational, divisor: f64) -> Spectrum {
    let d = w6_discriminant(a, b);
    let center = to_f64(&(int(1) - a - b));
    let root = to_f64(&d.abs()).sqrt();
    let (p, q) = if d.is_negative() {
        (
            Complex64::new(center / divisor, root / divisor),
            Complex64::new(center / divisor, -root / divisor),
        )
    } else {
        (
            Complex64::new((center + root) / divisor, 0.0),
            Complex64::new((center - root) / divisor, 0.0),
        )
    };
    let fa = to_f64(a);
    Spectrum::new(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(fa, 0.0),
        Complex64::new(fa, 0.0),
        Complex64::new(to_f64(&(b - a)), 0.0),
        p,
        q,
    ])
}

/// True iff the width-6 family at `(a, b)` has a nonreal eigenvalue pair, i.e. `D < 0`.
///
/// Equivalently `a < r₋(b)` or `a > r₊(b)` with the bounds of [`complex_region_bounds`].
pub fn complex_region_predicate(a: &Rational, b: &Rational) -> bool {
    w6_discriminant(a, b).is_negative()
}

/// The roots `r± = (1 + b ± 2√(2(1 - 5b + 8b²))) / 7` of `D(·, b)`; `D(a, b) < 0` exactly
/// outside `[r₋, r₊]`. The radicand is positive for every real `b`.
pub fn complex_region_bounds(b: &Rational) -> (f64, f64) {
    let radicand = to_f64(&(int(2) * (int(1) - b * int(5) + b * b * int(8))));
    let s = 2.0 * radicand.sqrt();
    let base = 1.0 + to_f64(b);
    ((base - s) / 7.0, (base + s) / 7.0)
}

//! Eigenvalue computation.
//!
//! Two routes:
//!
//! * [`eigenvalues`]: general float matrices, via the real Schur form (Hessenberg reduction
//!   and shifted QR). Backward stable; repeated defective eigenvalues are only resolved to
//!   about `sqrt(eps)`.
//! * [`exact_eigenvalues`]: rational matrices. The characteristic polynomial is formed
//!   exactly, split into squarefree factors `p = Π f_k^k` (so multiplicities are exact), and
//!   only the simple roots of each `f_k` are found numerically, then Newton-polished. Every
//!   reported root `μ` of `f_k` satisfies `|f_k(μ)| ≲ 8 eps Σ|c_i||μ|^i` unless polishing was
//!   rejected, in which case the companion-matrix root is kept.

use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::Spectrum;
use crate::rational::{self, Rational};
use crate::symbol::LaurentPoly;
use crate::{Error, Result};

const MAX_QR_ITERATIONS: usize = 10_000;

/// All eigenvalues of a real square matrix, with multiplicity.
pub fn eigenvalues(matrix: &DMatrix<f64>) -> Result<Spectrum> {
    Ok(Spectrum::new(float_eigenvalues(matrix)?))
}

fn float_eigenvalues(matrix: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("matrix has non-finite entries".into()));
    }
    if rows == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(matrix.clone(), f64::EPSILON, MAX_QR_ITERATIONS).ok_or_else(|| {
        Error::NumericalFailure(format!(
            "Schur iteration exceeded {MAX_QR_ITERATIONS} steps on a {rows}x{rows} matrix"
        ))
    })?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Characteristic polynomial `det(xI - A)` of a rational square matrix.
///
/// The matrix is scaled to integers by the common denominator `d`, the integer polynomial is
/// built with the Faddeev–LeVerrier recurrence (its divisions by `k` are exact for integer
/// matrices) and rescaled by `d^{k-n}`.
pub fn characteristic_polynomial(entries: &[Vec<Rational>]) -> Result<LaurentPoly> {
    let n = entries.len();
    if let Some(row) = entries.iter().find(|r| r.len() != n) {
        return Err(Error::NonSquare {
            rows: n,
            cols: row.len(),
        });
    }
    let d = rational::common_denominator(entries.iter().flatten());
    let b: Vec<Vec<BigInt>> = entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.numer() * (&d / x.denom()))
                .collect()
        })
        .collect();
    let sparse: Vec<Vec<(usize, &BigInt)>> = b
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
        .collect();

    // coeffs[k] is the coefficient of x^k
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = identity(n);
    for k in 1..=n {
        let bm: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| sparse[i].iter().map(|(l, v)| *v * &m[*l][j]).sum())
                    .collect()
            })
            .collect();
        let trace: BigInt = (0..n).map(|i| &bm[i][i]).sum();
        let c = -trace / BigInt::from(k);
        m = bm;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
        coeffs[n - k] = c;
    }

    let d_rat = Rational::from_integer(d);
    let mut scale = Rational::one();
    let mut out = Vec::with_capacity(n + 1);
    for k in (0..=n).rev() {
        out.push((k as i64, Rational::from_integer(coeffs[k].clone()) / &scale));
        scale *= &d_rat;
    }
    Ok(LaurentPoly::from_terms(out))
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Yun's squarefree decomposition over ℚ: `p = lc · Π f_k^k` with each `f_k` monic,
/// squarefree and pairwise coprime. Returns `(f_k, k)` for nonconstant factors.
pub fn squarefree_factors(p: &LaurentPoly) -> Result<Vec<(LaurentPoly, usize)>> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) < 1 {
        return Ok(out);
    }
    let exact = |num: &LaurentPoly, den: &LaurentPoly| -> Result<LaurentPoly> {
        let (q, r) = num.div_rem(den)?;
        debug_assert!(r.is_zero(), "Yun division must be exact");
        Ok(q)
    };
    let f = p.monic();
    let fp = f.derivative();
    let a0 = f.gcd(&fp)?;
    let mut b = exact(&f, &a0)?;
    let mut c = exact(&fp, &a0)?;
    let mut d = &c - &b.derivative();
    let mut k = 1;
    while b.degree().unwrap_or(0) >= 1 {
        let a = b.gcd(&d)?;
        if a.degree().unwrap_or(0) >= 1 {
            out.push((a.clone(), k));
        }
        b = exact(&b, &a)?;
        c = exact(&d, &a)?;
        d = &c - &b.derivative();
        k += 1;
    }
    Ok(out)
}

/// Eigenvalues of a rational matrix with exact multiplicities.
pub fn exact_eigenvalues(entries: &[Vec<Rational>]) -> Result<Vec<Complex64>> {
    let chi = characteristic_polynomial(entries)?;
    let mut out = Vec::with_capacity(entries.len());
    for (factor, multiplicity) in squarefree_factors(&chi)? {
        let roots = squarefree_roots(&factor)?;
        for root in roots {
            out.extend(std::iter::repeat_n(root, multiplicity));
        }
    }
    debug_assert_eq!(out.len(), entries.len());
    Ok(out)
}

/// Roots of a monic squarefree rational polynomial.
fn squarefree_roots(f: &LaurentPoly) -> Result<Vec<Complex64>> {
    let deg = f.degree().unwrap_or(0);
    match deg {
        0 => Ok(Vec::new()),
        1 => Ok(vec![Complex64::new(rational::to_f64(&-f.coeff(0)), 0.0)]),
        2 => Ok(quadratic_roots(&f.coeff(1), &f.coeff(0))),
        _ => companion_roots(f),
    }
}

/// Roots of `x^2 + p x + q` from the exact discriminant.
fn quadratic_roots(p: &Rational, q: &Rational) -> Vec<Complex64> {
    let disc = p * p - q * rational::int(4);
    let half_p = rational::to_f64(p) / 2.0;
    if disc.is_negative() {
        let im = rational::to_f64(&-disc).sqrt() / 2.0;
        vec![Complex64::new(-half_p, im), Complex64::new(-half_p, -im)]
    } else {
        let sq = rational::to_f64(&disc).sqrt() / 2.0;
        if p.is_zero() {
            return vec![Complex64::new(sq, 0.0), Complex64::new(-sq, 0.0)];
        }
        // larger-magnitude root first, the other from the product q
        let big = -half_p - half_p.signum() * sq;
        let small = rational::to_f64(q) / big;
        vec![Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
    }
}

fn companion_roots(f: &LaurentPoly) -> Result<Vec<Complex64>> {
    let deg = f.degree().unwrap_or(0) as usize;
    let c: Vec<f64> = (0..=deg as i64).map(|k| rational::to_f64(&f.coeff(k))).collect();
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if i == 0 {
            -c[deg - 1 - j]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let raw = float_eigenvalues(&companion)?;
    let polished: Vec<Complex64> = raw.iter().map(|&z| newton_polish(&c, z)).collect();
    Ok(finish_roots(raw, polished))
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn newton_polish(c: &[f64], start: Complex64) -> Complex64 {
    let mut z = start;
    let (mut best, mut best_res) = (z, horner(c, z).0.norm());
    for _ in 0..50 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        let res = horner(c, z).0.norm();
        if res < best_res {
            best = z;
            best_res = res;
        }
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1e-300) {
            break;
        }
    }
    best
}

/// Accepts the polished roots unless polishing merged distinct roots or broke conjugate
/// symmetry; snaps numerically real roots to the real axis and pairs conjugates exactly.
fn finish_roots(raw: Vec<Complex64>, polished: Vec<Complex64>) -> Vec<Complex64> {
    let scale = raw.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let snap = |z: Complex64| {
        if z.im.abs() <= 1e-14 * scale {
            Complex64::new(z.re, 0.0)
        } else {
            z
        }
    };
    let collided = polished.iter().enumerate().any(|(i, a)| {
        polished[i + 1..]
            .iter()
            .any(|b| (a - b).norm() <= 1e-10 * scale)
    });
    let candidates: Vec<Complex64> = if collided { raw.clone() } else { polished };
    let candidates: Vec<Complex64> = candidates.into_iter().map(snap).collect();

    let mut reals: Vec<Complex64> = candidates.iter().copied().filter(|z| z.im == 0.0).collect();
    let upper: Vec<Complex64> = candidates.iter().copied().filter(|z| z.im > 0.0).collect();
    let lower: Vec<Complex64> = candidates.iter().copied().filter(|z| z.im < 0.0).collect();
    if upper.len() != lower.len() {
        return raw;
    }
    let mut taken = vec![false; lower.len()];
    for u in &upper {
        let Some((k, _)) = lower
            .iter()
            .enumerate()
            .filter(|(k, _)| !taken[*k])
            .map(|(k, l)| (k, (l.conj() - u).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
        else {
            return raw;
        };
        taken[k] = true;
        let l = lower[k];
        let avg = Complex64::new((u.re + l.re) / 2.0, (u.im - l.im) / 2.0);
        reals.push(avg);
        reals.push(avg.conj());
    }
    reals
}

//! The local subdivision matrix and its spectrum.
//!
//! For a mask of width `n` the local matrix `A` is the `n × n` matrix that maps the `n`
//! control points nearest a mesh point to their `n` successors after one refinement step.
//! With 0-based indices its entries are `A[i][j] = coeffs[2j - i]` (zero outside the mask),
//! i.e. `a_{2j-i-c}` in 1-based indexing with `c = 1 - support_min` for a centered mask.
//! Row `i` collects every coefficient of one parity, so rows sum to one exactly when the
//! even and the odd coefficients each sum to one.

mod closed_form;
mod eigen;

pub use closed_form::{
    complex_region_bounds, complex_region_predicate, w5_closed_form, w5_coefficients,
    w6_closed_form, w6_closed_form_as_printed, w6_coefficients, w6_discriminant,
};
pub use eigen::{characteristic_polynomial, eigenvalues, exact_eigenvalues, squarefree_factors};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::scheme::{canonical_support_min, Mask};
use crate::{Error, Result};

/// Default tolerance when comparing eigenvalues.
pub const EIGEN_TOL: f64 = 1e-9;
/// Default tolerance for deciding real/complex and unit eigenvalues.
pub const CLASSIFY_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMatrix {
    pub n: usize,
    #[serde(with = "rational_rows")]
    pub entries: Vec<Vec<Rational>>,
    /// The shift `c` in `A_{ij} = a_{2j-i-c}` (1-based) for the centered mask.
    pub column_offset: i64,
}

impl LocalMatrix {
    /// Builds the matrix from a dense coefficient list; zero end coefficients are allowed,
    /// which parameter families need (e.g. `a = 0` in the width-6 family).
    pub fn from_coefficients(coeffs: &[Rational]) -> Result<Self> {
        let n = coeffs.len();
        if n < 2 {
            return Err(Error::WidthTooSmall(n));
        }
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let k = 2 * j as i64 - i as i64;
                        if (0..n as i64).contains(&k) {
                            coeffs[k as usize].clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            entries,
            column_offset: 1 - canonical_support_min(n),
        })
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| rational::to_f64(&self.entries[i][j]))
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        self.entries.iter().map(|row| row.iter().sum()).collect()
    }

    /// `A v` in exact arithmetic.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n, "vector length must match the matrix");
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect()
    }

    /// Spectrum through the exact characteristic polynomial (multiplicities are exact).
    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(Spectrum::new(exact_eigenvalues(&self.entries)?))
    }
}

pub fn build_local_matrix(mask: &Mask) -> Result<LocalMatrix> {
    LocalMatrix::from_coefficients(mask.coeffs())
}

/// Eigenvalues sorted by modulus (descending), then real part, then imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    #[serde(with = "complex_list")]
    pub eigenvalues: Vec<Complex64>,
    pub has_complex: bool,
    pub negative_real_count: usize,
    /// Second-largest modulus (0 for a 1×1 spectrum).
    pub subdominant_modulus: f64,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<Complex64>) -> Self {
        eigenvalues.sort_by(|x, y| {
            y.norm()
                .total_cmp(&x.norm())
                .then(y.re.total_cmp(&x.re))
                .then(y.im.total_cmp(&x.im))
        });
        let class = classify_values(&eigenvalues, CLASSIFY_TOL);
        let subdominant_modulus = eigenvalues.get(1).map_or(0.0, |z| z.norm());
        Self {
            eigenvalues,
            has_complex: class.has_complex,
            negative_real_count: class.negative_real_count,
            subdominant_modulus,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Distinct eigenvalues with multiplicities; values closer than `tol` are merged.
    pub fn distinct(&self, tol: f64) -> Vec<(Complex64, usize)> {
        let mut groups: Vec<(Complex64, usize)> = Vec::new();
        for &z in &self.eigenvalues {
            match groups.iter_mut().find(|(g, _)| (g - z).norm() <= tol) {
                Some(g) => g.1 += 1,
                None => groups.push((z, 1)),
            }
        }
        groups
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumClass {
    pub has_complex: bool,
    pub negative_real_count: usize,
    /// Exactly one eigenvalue within `tol` of 1, all others of modulus below `1 - tol`.
    pub convergence_spectral_ok: bool,
}

pub fn classify(spectrum: &Spectrum, tol: f64) -> SpectrumClass {
    assert!(tol > 0.0, "classification tolerance must be positive");
    classify_values(&spectrum.eigenvalues, tol)
}

fn classify_values(values: &[Complex64], tol: f64) -> SpectrumClass {
    let one = Complex64::new(1.0, 0.0);
    let unit = values.iter().filter(|z| (*z - one).norm() <= tol).count();
    let rest_inside = values
        .iter()
        .filter(|z| (*z - one).norm() > tol)
        .all(|z| z.norm() < 1.0 - tol);
    SpectrumClass {
        has_complex: values.iter().any(|z| z.im.abs() > tol),
        negative_real_count: values.iter().filter(|z| z.re < -tol).count(),
        convergence_spectral_ok: unit == 1 && rest_inside,
    }
}

/// Largest distance in an optimal-by-greedy pairing of two eigenvalue multisets.
///
/// Each expected value takes its nearest unused partner. Returns `f64::INFINITY` when the
/// sizes differ.
pub fn multiset_distance(expected: &[Complex64], actual: &[Complex64]) -> f64 {
    if expected.len() != actual.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; actual.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let (k, d) = actual
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, a)| (k, (a - e).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("sizes match");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

mod complex_list {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(values: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        values
            .iter()
            .map(|z| ReIm { re: z.re, im: z.im })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<ReIm>::deserialize(d)?
            .into_iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect())
    }
}

mod rational_rows {
    use crate::rational::{self, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        rows.iter()
            .map(|row| row.iter().map(rational::format).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| rational::parse(s).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

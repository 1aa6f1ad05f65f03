//! The local matrix as a linear dynamical system `v_{k+1} = A v_k`.
//!
//! A window of `n` control points around a fixed mesh point evolves by the local matrix. For a
//! convergent scheme it tends to a constant vector `v̄` determined by the left eigenvector of
//! eigenvalue 1. The deviation `v_k - v̄` splits into eigenmodes: a real eigenvalue `μ < 0`
//! makes its coordinate alternate in sign, and a complex pair `ρ e^{±iθ}` acts on its invariant
//! plane as a rotation by `θ` combined with a contraction by `ρ`.
//!
//! Trajectories are iterated exactly; floating point enters only when deviations are
//! decomposed into modes.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::export::format_g;
use crate::local_matrix::{classify, LocalMatrix, Spectrum, CLASSIFY_TOL};
use crate::rational::{self, Rational};
use crate::refine::ControlPolygon;
use crate::{Error, Result};

/// Relative size below which a mode coordinate is treated as numerical noise.
pub const MODE_NOISE_FLOOR: f64 = 1e-10;
/// Magnitudes below this are excluded from per-step ratios.
pub const RATIO_FLOOR: f64 = 1e-12;

/// The `n` values of `P` nearest `center_index`; ties go to the lower index, so even `n`
/// gives `center - n/2 ..= center + n/2 - 1`.
pub fn window_vector(p: &ControlPolygon, center_index: i64, n: usize) -> Vec<Rational> {
    let start = center_index - (n as i64) / 2;
    (0..n as i64).map(|j| p.value_at(start + j)).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    #[default]
    Inf,
    Two,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TrajectoryStatus {
    Convergent,
    /// The spectrum fails `μ_1 = 1 > |μ_i|`; states are still reported.
    NotConvergent { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    /// Contraction factor `|μ|`.
    pub rho: f64,
    /// Rotation angle `arg μ` in radians, in `(0, π)`.
    pub theta: f64,
}

/// One eigenmode: a real eigenvalue or a complex pair (stored with positive imaginary part).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeTrack {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    /// Euclidean norm of the mode coordinates of `v_k - v̄`, one per state.
    pub magnitudes: Vec<f64>,
    /// `(k, m_{k+1} / m_k)` for every `k` with `m_k > RATIO_FLOOR`.
    pub ratios: Vec<(usize, f64)>,
    /// Real modes only: transitions where both coordinates are above the noise floor.
    pub eligible_transitions: Option<usize>,
    /// Real modes only: eligible transitions where the coordinates change sign.
    pub sign_flips: Option<usize>,
}

impl ModeTrack {
    pub fn is_complex(&self) -> bool {
        self.im != 0.0
    }

    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn label(&self) -> String {
        if self.is_complex() {
            format!("mu={}+-{}i", format_g(self.re, 6), format_g(self.im, 6))
        } else {
            format!("mu={}", format_g(self.re, 6))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    /// `v_0, …, v_K`.
    pub states: Vec<Vec<f64>>,
    /// `v̄`, absent when eigenvalue 1 has no usable left eigenvector.
    pub fixed_point: Option<Vec<f64>>,
    /// `‖v_k - v̄‖`, one per state (empty without a fixed point).
    pub distances: Vec<f64>,
    pub norm: Norm,
    /// Number of `k` with `d_{k+1} > d_k`, compared exactly.
    pub monotonicity_violations: usize,
    pub status: TrajectoryStatus,
    /// Filled by [`decompose_modes`]; eigenvalue 1 is not listed.
    pub modes: Vec<ModeTrack>,
    /// The complex pair of largest modulus, if any.
    pub rotation: Option<Rotation>,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    deviations: Vec<Vec<f64>>,
    #[serde(skip)]
    matrix: Option<DMatrix<f64>>,
}

impl TrajectoryReport {
    pub fn mode(&self, eigenvalue: Complex64, tol: f64) -> Option<&ModeTrack> {
        self.modes.iter().find(|m| (m.eigenvalue() - eigenvalue).norm() <= tol)
    }
}

/// Iterates `v_{k+1} = A v_k` for `k_max` steps with the ∞-norm.
pub fn iterate_local(v0: &[Rational], a: &LocalMatrix, k_max: usize) -> Result<TrajectoryReport> {
    iterate_local_with(v0, a, k_max, Norm::Inf)
}

pub fn iterate_local_with(
    v0: &[Rational],
    a: &LocalMatrix,
    k_max: usize,
    norm: Norm,
) -> Result<TrajectoryReport> {
    if v0.len() != a.n {
        return Err(Error::Invalid(format!(
            "initial vector has length {}, matrix is {}x{}",
            v0.len(),
            a.n,
            a.n
        )));
    }
    if k_max < 1 {
        return Err(Error::Invalid("at least one iteration step is required".into()));
    }

    let mut exact = Vec::with_capacity(k_max + 1);
    exact.push(v0.to_vec());
    for k in 0..k_max {
        let next = a.apply(&exact[k]);
        exact.push(next);
    }

    let spectrum = a.spectrum()?;
    let class = classify(&spectrum, CLASSIFY_TOL);
    let status = if class.convergence_spectral_ok {
        TrajectoryStatus::Convergent
    } else {
        let second = spectrum.subdominant_modulus;
        TrajectoryStatus::NotConvergent {
            reason: format!(
                "spectrum is not (1, |mu| < 1): leading modulus {:.6}, second {:.6}",
                spectrum.eigenvalues.first().map_or(0.0, |z| z.norm()),
                second
            ),
        }
    };

    let mut diagnostics = Vec::new();
    let fixed = fixed_point(a, v0);
    if fixed.is_none() {
        diagnostics.push("eigenvalue 1 has no left eigenvector with nonzero weight".to_string());
    }

    let to_f64 = |v: &[Rational]| v.iter().map(rational::to_f64).collect::<Vec<f64>>();
    let states: Vec<Vec<f64>> = exact.iter().map(|v| to_f64(v)).collect();
    let mut distances = Vec::new();
    let mut deviations = Vec::new();
    let mut violations = 0;
    if let Some(vbar) = &fixed {
        let exact_dist: Vec<Rational> = exact
            .iter()
            .map(|v| {
                let dev: Vec<Rational> = v.iter().zip(vbar).map(|(x, y)| x - y).collect();
                let d = match norm {
                    Norm::Inf => dev.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero),
                    Norm::Two => dev.iter().map(|x| x * x).sum(),
                };
                deviations.push(to_f64(&dev));
                d
            })
            .collect();
        violations = exact_dist.windows(2).filter(|w| w[1] > w[0]).count();
        distances = exact_dist
            .iter()
            .map(|d| match norm {
                Norm::Inf => rational::to_f64(d),
                Norm::Two => rational::to_f64(d).sqrt(),
            })
            .collect();
    }

    Ok(TrajectoryReport {
        states,
        fixed_point: fixed.as_deref().map(to_f64),
        distances,
        norm,
        monotonicity_violations: violations,
        status,
        modes: Vec::new(),
        rotation: None,
        diagnostics,
        deviations,
        matrix: Some(a.to_f64()),
    })
}

/// `v̄ = (l·v0 / l·1) 1` with `l` the exact left eigenvector of eigenvalue 1.
fn fixed_point(a: &LocalMatrix, v0: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.n;
    let shifted: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let t = a.entries[j][i].clone();
                    if i == j {
                        t - Rational::one()
                    } else {
                        t
                    }
                })
                .collect()
        })
        .collect();
    let null = rational_null_space(shifted);
    if null.len() != 1 {
        return None;
    }
    let l = &null[0];
    let weight: Rational = l.iter().sum();
    if weight.is_zero() {
        return None;
    }
    let value: Rational = l.iter().zip(v0).map(|(x, y)| x * y).sum::<Rational>() / weight;
    Some(vec![value; n])
}

/// Basis of `{x : M x = 0}` by exact row reduction.
fn rational_null_space(mut m: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// Splits each deviation `v_k - v̄` into eigenmode coordinates.
///
/// The eigenvector basis is formed numerically: null vectors of `A - μI` for real `μ` and the
/// real and imaginary parts of a null vector of `A - μI` for each complex pair. Deviations are
/// solved against this basis (eigenvalue 1 included). A defective eigenvalue makes the basis
/// incomplete; the decomposition is then skipped and a diagnostic recorded.
pub fn decompose_modes(mut traj: TrajectoryReport, spectrum: &Spectrum) -> TrajectoryReport {
    traj.modes.clear();
    traj.rotation = None;
    let Some(a) = traj.matrix.clone() else {
        traj.diagnostics.push("no matrix attached to the trajectory".into());
        return traj;
    };
    if traj.deviations.is_empty() {
        traj.diagnostics.push("mode decomposition needs a fixed point".into());
        return traj;
    }
    let n = a.nrows();
    if spectrum.len() != n {
        traj.diagnostics.push(format!(
            "spectrum has {} values, matrix is {n}x{n}",
            spectrum.len()
        ));
        return traj;
    }

    let scale = a.norm().max(1.0);
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(n);
    // (eigenvalue, multiplicity, first column, column count, is_unit)
    let mut blocks: Vec<(Complex64, usize, usize, usize, bool)> = Vec::new();
    for (mu, mult) in spectrum.distinct(1e-9) {
        if mu.im < -CLASSIFY_TOL {
            continue;
        }
        let is_complex = mu.im > CLASSIFY_TOL;
        let null = if is_complex {
            complex_null_space(&a, mu, mult, scale)
        } else {
            real_null_space(&a, mu.re, mult, scale)
                .into_iter()
                .map(|v| (v, None))
                .collect()
        };
        if null.len() < mult {
            traj.diagnostics.push(format!(
                "eigenvalue {} is defective (algebraic {mult}, geometric {}); mode decomposition skipped",
                fmt_complex(mu),
                null.len()
            ));
            return traj;
        }
        let first = columns.len();
        for (re, im) in null {
            columns.push(re);
            if let Some(im) = im {
                columns.push(im);
            }
        }
        let mu = if is_complex { mu } else { Complex64::new(mu.re, 0.0) };
        let unit = (mu - Complex64::new(1.0, 0.0)).norm() <= CLASSIFY_TOL;
        blocks.push((mu, mult, first, columns.len() - first, unit));
    }
    if columns.len() != n {
        traj.diagnostics.push(format!(
            "eigenvector basis has {} columns for a {n}x{n} matrix; mode decomposition skipped",
            columns.len()
        ));
        return traj;
    }
    let basis = DMatrix::from_columns(&columns);
    let lu = basis.clone().lu();
    let sv = basis.singular_values();
    if sv.min() <= 1e-12 * sv.max() {
        traj.diagnostics.push("eigenvector basis is numerically singular; mode decomposition skipped".into());
        return traj;
    }

    let coords: Vec<DVector<f64>> = traj
        .deviations
        .iter()
        .map(|d| lu.solve(&DVector::from_column_slice(d)).expect("nonsingular basis"))
        .collect();

    let per_block = |k: usize, first: usize, count: usize| coords[k].rows(first, count).into_owned();
    let steps = coords.len();
    let mut all_mags: Vec<Vec<f64>> = Vec::new();
    for &(_, _, first, count, _) in &blocks {
        all_mags.push((0..steps).map(|k| per_block(k, first, count).norm()).collect());
    }
    let step_max: Vec<f64> = (0..steps)
        .map(|k| {
            blocks
                .iter()
                .zip(&all_mags)
                .filter(|(b, _)| !b.4)
                .map(|(_, m)| m[k])
                .fold(0.0, f64::max)
        })
        .collect();

    for (block, mags) in blocks.iter().zip(all_mags) {
        let &(mu, mult, first, count, unit) = block;
        if unit {
            continue;
        }
        let ratios = (0..steps - 1)
            .filter(|&k| mags[k] > RATIO_FLOOR)
            .map(|k| (k, mags[k + 1] / mags[k]))
            .collect();
        let (eligible, flips) = if mu.im == 0.0 {
            let mut eligible = 0;
            let mut flips = 0;
            for k in 0..steps - 1 {
                let floor = MODE_NOISE_FLOOR;
                if mags[k] > floor * step_max[k] && mags[k + 1] > floor * step_max[k + 1] {
                    eligible += 1;
                    if per_block(k, first, count).dot(&per_block(k + 1, first, count)) < 0.0 {
                        flips += 1;
                    }
                }
            }
            (Some(eligible), Some(flips))
        } else {
            (None, None)
        };
        traj.modes.push(ModeTrack {
            re: mu.re,
            im: mu.im,
            multiplicity: mult,
            magnitudes: mags,
            ratios,
            eligible_transitions: eligible,
            sign_flips: flips,
        });
    }
    traj.rotation = traj
        .modes
        .iter()
        .filter(|m| m.is_complex())
        .max_by(|x, y| x.eigenvalue().norm().total_cmp(&y.eigenvalue().norm()))
        .map(|m| Rotation {
            rho: m.eigenvalue().norm(),
            theta: m.eigenvalue().arg(),
        });
    traj
}

fn fmt_complex(z: Complex64) -> String {
    if z.im.abs() <= CLASSIFY_TOL {
        format_g(z.re, 9)
    } else {
        format!("{}{:+}i", format_g(z.re, 9), z.im)
    }
}

/// Right singular vectors of `A - μI` whose singular values are negligible.
fn real_null_space(a: &DMatrix<f64>, mu: f64, max: usize, scale: f64) -> Vec<DVector<f64>> {
    let n = a.nrows();
    let shifted = a - DMatrix::identity(n, n) * mu;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    order
        .into_iter()
        .take(max)
        .filter(|&i| svd.singular_values[i] <= 1e-7 * scale)
        .map(|i| v_t.row(i).transpose())
        .collect()
}

/// Null vectors `w` of `A - μI` (complex `μ`), returned as `(Re w, Im w)`.
fn complex_null_space(
    a: &DMatrix<f64>,
    mu: Complex64,
    max: usize,
    scale: f64,
) -> Vec<(DVector<f64>, Option<DVector<f64>>)> {
    let n = a.nrows();
    let shifted = a.map(|x| Complex64::new(x, 0.0)) - DMatrix::<Complex64>::identity(n, n) * mu;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    order
        .into_iter()
        .take(max)
        .filter(|&i| svd.singular_values[i] <= 1e-7 * scale)
        .map(|i| {
            // rows of V^H are conjugated right singular vectors
            let w: DVector<Complex64> = v_t.row(i).adjoint();
            (w.map(|z| z.re), Some(w.map(|z| z.im)))
        })
        .collect()
}

/// CSV with columns `k`, `d_k` and one magnitude column per mode.
pub fn trajectory_to_csv(traj: &TrajectoryReport) -> String {
    let mut out = String::from("k,d_k");
    for m in &traj.modes {
        out.push(',');
        out.push_str(&m.label());
    }
    out.push('\n');
    for k in 0..traj.states.len() {
        let _ = write!(out, "{k},");
        match traj.distances.get(k) {
            Some(d) => out.push_str(&format_g(*d, 12)),
            None => out.push_str("nan"),
        }
        for m in &traj.modes {
            let _ = write!(out, ",{}", format_g(m.magnitudes[k], 12));
        }
        out.push('\n');
    }
    out
}

//! Exact refinement of finitely supported control polygons.
//!
//! One step computes `P'_m = Σ_l a_{m-2l} P_l`, which is the even rule for even `m` and the
//! odd rule for odd `m`. The sequence is zero outside the stored window, so a window
//! `[f, l]` refines to `[2f + min σ(a), 2l + max σ(a)]` before trimming zeros.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::export::format_g;
use crate::rational::{self, Rational};
use crate::scheme::Mask;
use crate::{Error, Execution, Result};

/// Default cap on stored values produced by [`refine_k`].
pub const DEFAULT_VALUE_CAP: usize = 10_000_000;

/// Outputs at least this long are computed with the requested [`Execution`].
const PARALLEL_THRESHOLD: usize = 2048;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mesh {
    /// Level-`k` point `i` sits at `t = i 2^{-k}`.
    #[default]
    Primal,
    /// Level-`k` point `i` sits at `t = (i + 1/2) 2^{-k}`.
    Dual,
}

/// A level-`k` control sequence, zero outside `first_index .. first_index + values.len()`.
///
/// Zeros at either end of `values` are trimmed on construction; the zero polygon stores no
/// values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlPolygon {
    level: u32,
    first_index: i64,
    #[serde(with = "rational::serde_vec_str")]
    values: Vec<Rational>,
    mesh: Mesh,
}

impl ControlPolygon {
    pub fn new(level: u32, first_index: i64, values: Vec<Rational>) -> Self {
        Self::with_mesh(level, first_index, values, Mesh::Primal)
    }

    pub fn with_mesh(level: u32, first_index: i64, values: Vec<Rational>, mesh: Mesh) -> Self {
        let Some(first) = values.iter().position(|v| !v.is_zero()) else {
            return Self { level, first_index, values: Vec::new(), mesh };
        };
        let last = values.iter().rposition(|v| !v.is_zero()).unwrap_or(first);
        Self {
            level,
            first_index: first_index + first as i64,
            values: values[first..=last].to_vec(),
            mesh,
        }
    }

    /// The level-0 sequence with a single 1 at index 0.
    pub fn delta() -> Self {
        Self::new(0, 0, vec![Rational::one()])
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    /// Index of the last stored value (`first_index - 1` for the zero polygon).
    pub fn last_index(&self) -> i64 {
        self.first_index + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `P_i`, zero outside the stored window.
    pub fn value_at(&self, index: i64) -> Rational {
        let offset = index - self.first_index;
        if offset < 0 || offset as usize >= self.values.len() {
            Rational::zero()
        } else {
            self.values[offset as usize].clone()
        }
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().sum()
    }

    /// Parameter of point `index` at this level on this mesh.
    pub fn parameter(&self, index: i64) -> Rational {
        let denom = Rational::from_integer(num_bigint::BigInt::one() << self.level);
        let i = rational::int(index);
        match self.mesh {
            Mesh::Primal => i / denom,
            Mesh::Dual => (i + rational::rat(1, 2)) / denom,
        }
    }
}

/// One refinement step.
pub fn refine_once(p: &ControlPolygon, mask: &Mask) -> ControlPolygon {
    refine_once_with(p, mask, Execution::Sequential)
}

/// One refinement step, computing output entries with the given execution strategy.
pub fn refine_once_with(p: &ControlPolygon, mask: &Mask, exec: Execution) -> ControlPolygon {
    if p.is_zero() {
        return ControlPolygon::with_mesh(p.level + 1, 2 * p.first_index, Vec::new(), p.mesh);
    }
    let smin = mask.support_min();
    let coeffs = mask.coeffs();
    let w = coeffs.len() as i64;
    let len = p.values.len() as i64;
    let out_len = (2 * (len - 1) + w) as usize;
    // output offset q corresponds to index 2 first + smin + q; it collects the stored
    // offsets j with 0 <= q - 2j < w
    let entry = |q: usize| -> Rational {
        let q = q as i64;
        let j_lo = (q - w + 2).div_euclid(2).max(0);
        let j_hi = (q.div_euclid(2)).min(len - 1);
        let mut acc = Rational::zero();
        for j in j_lo..=j_hi {
            let c = &coeffs[(q - 2 * j) as usize];
            let v = &p.values[j as usize];
            if !c.is_zero() && !v.is_zero() {
                acc += c * v;
            }
        }
        acc
    };
    let values = if out_len >= PARALLEL_THRESHOLD {
        exec.map_range(out_len, entry)
    } else {
        (0..out_len).map(entry).collect()
    };
    ControlPolygon::with_mesh(p.level + 1, 2 * p.first_index + smin, values, p.mesh)
}

/// `k` refinement steps with the default value cap.
pub fn refine_k(p: &ControlPolygon, mask: &Mask, k: u32) -> Result<ControlPolygon> {
    refine_k_with(p, mask, k, DEFAULT_VALUE_CAP, Execution::default())
}

/// `k` refinement steps; fails before a step whose output window would exceed `cap` values.
pub fn refine_k_with(
    p: &ControlPolygon,
    mask: &Mask,
    k: u32,
    cap: usize,
    exec: Execution,
) -> Result<ControlPolygon> {
    let mut current = p.clone();
    for step in 0..k {
        let len = current.values.len();
        let next_len = if len == 0 { 0 } else { 2 * (len - 1) + mask.width() };
        if next_len > cap {
            return Err(Error::ResourceLimit(format!(
                "refinement step {} would store {next_len} values (cap {cap})",
                step + 1
            )));
        }
        current = refine_once_with(&current, mask, exec);
    }
    Ok(current)
}

/// Sample points `(t, value)` with strictly increasing `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    pub points: Vec<(f64, f64)>,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Value at the sample whose parameter equals `t` exactly, if any.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.points.iter().find(|p| p.0 == t).map(|p| p.1)
    }
}

/// The stored window as curve samples.
pub fn parameterize(p: &ControlPolygon) -> SampledCurve {
    sample_range(p, p.first_index, p.last_index())
}

fn sample_range(p: &ControlPolygon, lo: i64, hi: i64) -> SampledCurve {
    SampledCurve {
        points: (lo..=hi)
            .map(|i| {
                (
                    rational::to_f64(&p.parameter(i)),
                    rational::to_f64(&p.value_at(i)),
                )
            })
            .collect(),
    }
}

/// Half-width of the basis experiment's parameter interval `[-4, 4]`.
pub const BASIS_HALF_WIDTH: i64 = 4;

/// The initial sequence of the basis experiment: a single 1 on the integers `-4..=4`.
pub fn basis_polygon() -> ControlPolygon {
    ControlPolygon::delta()
}

/// Refines the basis sequence `iters` times and returns exact samples `(t, value)` for every
/// primal mesh point of `[-4, 4]`, including points outside the nonzero window.
pub fn basis_samples_exact(mask: &Mask, iters: u32) -> Result<Vec<(Rational, Rational)>> {
    let p = refine_k(&basis_polygon(), mask, iters)?;
    let span = BASIS_HALF_WIDTH << iters;
    Ok((-span..=span).map(|i| (p.parameter(i), p.value_at(i))).collect())
}

/// Float version of [`basis_samples_exact`]: `8 · 2^iters + 1` points on `[-4, 4]`.
pub fn basis_experiment(mask: &Mask, iters: u32) -> Result<SampledCurve> {
    let p = refine_k(&basis_polygon(), mask, iters)?;
    let span = BASIS_HALF_WIDTH << iters;
    Ok(sample_range(&p, -span, span))
}

/// CSV with header `t,value`, 12 significant digits, LF line endings.
pub fn curve_to_csv(curve: &SampledCurve) -> String {
    let mut out = String::with_capacity(24 * (curve.len() + 1));
    out.push_str("t,value\n");
    for &(t, y) in &curve.points {
        let _ = writeln!(out, "{},{}", format_g(t, 12), format_g(y, 12));
    }
    out
}

/// A standalone SVG holding one polyline; `y` is flipped so larger values are drawn higher.
pub fn curve_to_svg(curve: &SampledCurve) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(t, y) in &curve.points {
        x0 = x0.min(t);
        x1 = x1.max(t);
        y0 = y0.min(-y);
        y1 = y1.max(-y);
    }
    if curve.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let pad = 0.02 * (x1 - x0).max(y1 - y0).max(1e-9);
    let (vx, vy) = (x0 - pad, y0 - pad);
    let (vw, vh) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let mut points = String::with_capacity(20 * curve.len());
    for (i, &(t, y)) in curve.points.iter().enumerate() {
        if i > 0 {
            points.push(' ');
        }
        let _ = write!(points, "{},{}", format_g(t, 8), format_g(-y, 8));
    }
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
            "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" ",
            "vector-effect=\"non-scaling-stroke\" points=\"{}\"/>\n",
            "</svg>\n"
        ),
        format_g(vx, 8),
        format_g(vy, 8),
        format_g(vw, 8),
        format_g(vh, 8),
        points
    )
}

/// Largest `|P_i|` in the window.
pub fn max_abs(p: &ControlPolygon) -> Rational {
    p.values.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
}

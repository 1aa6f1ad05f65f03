//! Grid scans over palindromic mask families.
//!
//! For each width the mask is palindromic and satisfies `s(1) = 2`, `s(-1) = 0`, which leaves
//! these free parameters (support centered as in [`canonical_support_min`]):
//!
//! | width | mask | free |
//! |---|---|---|
//! | 2 | `1, 1` | none |
//! | 3 | `1/2, 1, 1/2` | none |
//! | 4 | `a, 1-a, 1-a, a` | `a` |
//! | 5 | `a, 1/2, 1-2a, 1/2, a` | `a` |
//! | 6 | `a, b, c, c, b, a`, `c = 1-a-b` | `a, b` |
//! | 7 | `x, y, 1/2-x, 1-2y, 1/2-x, y, x` | `x, y` |
//! | 8 | `x, y, z, w, w, z, y, x`, `w = 1-x-y-z` | `x, y, z` |
//!
//! Odd widths: the even rule is `y, 1-2y, y` (or `a_{±2}, a_0`) and the odd rule pairs the
//! remaining entries. Even widths: each rule holds one entry of every mirrored pair, so a
//! single sum `= 1` remains.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::convergence::{contractivity_norm, difference_scheme};
use crate::export::format_g;
use crate::local_matrix::{classify, w6_discriminant, LocalMatrix, CLASSIFY_TOL};
use crate::rational::{self, int, rat, Rational};
use crate::scheme::{canonical_support_min, Mask};
use crate::{Error, Execution, Result};

/// Default cap on the number of grid cells in one scan.
pub const DEFAULT_CELL_CAP: usize = 1_000_000;
/// Width-6 cells with `|D|` below this are reported as degenerate.
pub const DEGENERATE_DISCRIMINANT: f64 = 1e-10;
/// Upper bound on the number of "simplest" witnesses per class.
pub const MAX_SIMPLEST_WITNESSES: usize = 16;

pub const MIN_WIDTH: usize = 2;
pub const MAX_WIDTH: usize = 8;

/// Free parameters of the width-`w` family.
pub fn parameter_names(width: usize) -> &'static [&'static str] {
    match width {
        4 | 5 => &["a"],
        6 => &["a", "b"],
        7 => &["x", "y"],
        8 => &["x", "y", "z"],
        _ => &[],
    }
}

/// Coefficients of the width-`w` family (zero end coefficients are kept).
pub fn family_coefficients(width: usize, params: &[Rational]) -> Result<Vec<Rational>> {
    if !(MIN_WIDTH..=MAX_WIDTH).contains(&width) {
        return Err(Error::Invalid(format!("width must be in {MIN_WIDTH}..={MAX_WIDTH}, got {width}")));
    }
    let expected = parameter_names(width).len();
    if params.len() != expected {
        return Err(Error::Invalid(format!(
            "width {width} has {expected} free parameters, got {}",
            params.len()
        )));
    }
    let h = rat(1, 2);
    let one = int(1);
    let c = |x: &Rational| x.clone();
    Ok(match width {
        2 => vec![one.clone(), one],
        3 => vec![h.clone(), one, h],
        4 => {
            let a = &params[0];
            let m = &one - a;
            vec![c(a), m.clone(), m, c(a)]
        }
        5 => crate::local_matrix::w5_coefficients(&params[0]),
        6 => crate::local_matrix::w6_coefficients(&params[0], &params[1]),
        7 => {
            let (x, y) = (&params[0], &params[1]);
            let hx = &h - x;
            vec![c(x), c(y), hx.clone(), &one - y * int(2), hx, c(y), c(x)]
        }
        _ => {
            let (x, y, z) = (&params[0], &params[1], &params[2]);
            let w = &one - x - y - z;
            vec![c(x), c(y), c(z), w.clone(), w, c(z), c(y), c(x)]
        }
    })
}

/// The family mask on its centered support (zero end coefficients trimmed).
pub fn family_mask(width: usize, params: &[Rational]) -> Result<Mask> {
    Mask::new(canonical_support_min(width), family_coefficients(width, params)?)
}

/// `lo, lo + step, …` up to `hi` inclusive, in exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamRange {
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub hi: Rational,
    #[serde(with = "rational::serde_str")]
    pub step: Rational,
}

impl ParamRange {
    pub fn new(lo: Rational, hi: Rational, step: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Invalid(format!("range needs lo < hi, got {lo} .. {hi}")));
        }
        if !step.is_positive() {
            return Err(Error::Invalid(format!("range step must be positive, got {step}")));
        }
        Ok(Self { lo, hi, step })
    }

    /// Parses `lo:hi:step` with rational components.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Invalid(format!("grid range {text:?} is not lo:hi:step")));
        }
        Self::new(
            rational::parse(parts[0].trim())?,
            rational::parse(parts[1].trim())?,
            rational::parse(parts[2].trim())?,
        )
    }

    pub fn count(&self) -> usize {
        let n = ((&self.hi - &self.lo) / &self.step).floor().to_integer();
        usize::try_from(n).map_or(usize::MAX, |n| n.saturating_add(1))
    }

    pub fn value(&self, k: usize) -> Rational {
        &self.lo + &self.step * int(k as i64)
    }

    pub fn values(&self) -> Vec<Rational> {
        (0..self.count()).map(|k| self.value(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub width: usize,
    pub param_ranges: Vec<ParamRange>,
    /// Also require `‖S_b‖ < 1` for the convergent classes.
    pub convergence_filter: bool,
    pub cell_cap: usize,
}

impl SearchSpec {
    pub fn new(width: usize, param_ranges: Vec<ParamRange>, convergence_filter: bool) -> Result<Self> {
        if !(MIN_WIDTH..=MAX_WIDTH).contains(&width) {
            return Err(Error::Invalid(format!("width must be in {MIN_WIDTH}..={MAX_WIDTH}, got {width}")));
        }
        let expected = parameter_names(width).len();
        if param_ranges.len() != expected {
            return Err(Error::Invalid(format!(
                "width {width} has {expected} free parameters, got {} ranges",
                param_ranges.len()
            )));
        }
        Ok(Self { width, param_ranges, convergence_filter, cell_cap: DEFAULT_CELL_CAP })
    }

    /// Default grids: `[-1, 1]` step 1/100 for widths 4 and 5, `[-1/2, 1/2]^2` step 1/100 for
    /// width 6, step 1/50 for width 7 and `[-1/2, 1/2]^3` step 1/20 for width 8.
    pub fn default_for(width: usize) -> Result<Self> {
        let range = |lo: Rational, hi: Rational, step: Rational| ParamRange::new(lo, hi, step);
        let unit = || range(int(-1), int(1), rat(1, 100));
        let half = |step| range(rat(-1, 2), rat(1, 2), step);
        let ranges = match width {
            2 | 3 => Vec::new(),
            4 | 5 => vec![unit()?],
            6 => vec![half(rat(1, 100))?, half(rat(1, 100))?],
            7 => vec![half(rat(1, 50))?, half(rat(1, 50))?],
            8 => vec![half(rat(1, 20))?, half(rat(1, 20))?, half(rat(1, 20))?],
            _ => return Self::new(width, Vec::new(), true),
        };
        Self::new(width, ranges, true)
    }

    pub fn cell_count(&self) -> usize {
        self.param_ranges
            .iter()
            .fold(1usize, |acc, r| acc.saturating_mul(r.count()))
    }

    /// Parameters of cell `index`; the first parameter varies slowest.
    pub fn cell_params(&self, mut index: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.param_ranges.len()];
        for (slot, r) in out.iter_mut().zip(&self.param_ranges).rev() {
            let n = r.count();
            *slot = r.value(index % n);
            index /= n;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellClass {
    RealConvergent,
    ComplexConvergent,
    RealOther,
    ComplexOther,
}

impl CellClass {
    pub const ALL: [CellClass; 4] = [
        CellClass::RealConvergent,
        CellClass::ComplexConvergent,
        CellClass::RealOther,
        CellClass::ComplexOther,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CellClass::RealConvergent => "RealConvergent",
            CellClass::ComplexConvergent => "ComplexConvergent",
            CellClass::RealOther => "RealOther",
            CellClass::ComplexOther => "ComplexOther",
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, CellClass::ComplexConvergent | CellClass::ComplexOther)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    #[serde(with = "rational::serde_vec_str")]
    pub params: Vec<Rational>,
    pub class: CellClass,
    pub max_imag: f64,
    pub negative_real_count: usize,
    /// Distance of the eigenvalue nearest 1 from 1.
    pub unit_eigenvalue_error: f64,
    /// Too close to the real/complex boundary for the classification to be trusted.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub real_convergent: usize,
    pub complex_convergent: usize,
    pub real_other: usize,
    pub complex_other: usize,
}

impl ClassCounts {
    pub fn get(&self, class: CellClass) -> usize {
        match class {
            CellClass::RealConvergent => self.real_convergent,
            CellClass::ComplexConvergent => self.complex_convergent,
            CellClass::RealOther => self.real_other,
            CellClass::ComplexOther => self.complex_other,
        }
    }

    fn bump(&mut self, class: CellClass) {
        match class {
            CellClass::RealConvergent => self.real_convergent += 1,
            CellClass::ComplexConvergent => self.complex_convergent += 1,
            CellClass::RealOther => self.real_other += 1,
            CellClass::ComplexOther => self.complex_other += 1,
        }
    }

    pub fn total(&self) -> usize {
        CellClass::ALL.iter().map(|c| self.get(*c)).sum()
    }

    pub fn complex(&self) -> usize {
        self.complex_convergent + self.complex_other
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    /// First cell of the class in grid order.
    First,
    /// Cell with the largest `max |Im μ|`.
    MaxImag,
    /// Cells whose parameters have the smallest common denominator.
    Simplest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub class: CellClass,
    pub kind: WitnessKind,
    pub cell: Cell,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub width: usize,
    pub parameter_names: Vec<String>,
    pub cells: Vec<Cell>,
    pub counts: ClassCounts,
    pub degenerate: usize,
    pub witnesses: Vec<Witness>,
}

impl SearchResult {
    pub fn witnesses_of(&self, class: CellClass) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(move |w| w.class == class)
    }
}

/// Classifies one parameter cell.
pub fn evaluate_cell(width: usize, params: &[Rational], convergence_filter: bool) -> Result<Cell> {
    let coeffs = family_coefficients(width, params)?;
    let matrix = LocalMatrix::from_coefficients(&coeffs)?;
    let spectrum = matrix.spectrum()?;
    let class = classify(&spectrum, CLASSIFY_TOL);
    let mut convergent = class.convergence_spectral_ok;
    if convergent && convergence_filter {
        let mask = Mask::new(canonical_support_min(width), coeffs)?;
        convergent = contractivity_norm(&difference_scheme(&mask)?) < int(1);
    }
    let max_imag = spectrum.max_imag();
    let degenerate = if width == 6 {
        rational::to_f64(&w6_discriminant(&params[0], &params[1])).abs() < DEGENERATE_DISCRIMINANT
    } else {
        max_imag > 0.0 && max_imag <= CLASSIFY_TOL
    };
    let unit_eigenvalue_error = spectrum
        .eigenvalues
        .iter()
        .map(|z| (z - num_complex::Complex64::new(1.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    Ok(Cell {
        params: params.to_vec(),
        class: match (class.has_complex, convergent) {
            (false, true) => CellClass::RealConvergent,
            (true, true) => CellClass::ComplexConvergent,
            (false, false) => CellClass::RealOther,
            (true, false) => CellClass::ComplexOther,
        },
        max_imag,
        negative_real_count: class.negative_real_count,
        unit_eigenvalue_error,
        degenerate,
    })
}

/// Evaluates every grid cell; output order is grid order regardless of `exec`.
pub fn scan(spec: &SearchSpec, exec: Execution) -> Result<SearchResult> {
    let n = spec.cell_count();
    if n > spec.cell_cap {
        return Err(Error::ResourceLimit(format!(
            "grid has {n} cells (cap {})",
            spec.cell_cap
        )));
    }
    let cells = exec
        .map_range(n, |i| evaluate_cell(spec.width, &spec.cell_params(i), spec.convergence_filter))
        .into_iter()
        .collect::<Result<Vec<Cell>>>()?;
    let mut counts = ClassCounts::default();
    for c in &cells {
        counts.bump(c.class);
    }
    let degenerate = cells.iter().filter(|c| c.degenerate).count();
    let witnesses = select_witnesses(&cells);
    Ok(SearchResult {
        width: spec.width,
        parameter_names: parameter_names(spec.width).iter().map(|s| s.to_string()).collect(),
        cells,
        counts,
        degenerate,
        witnesses,
    })
}

fn select_witnesses(cells: &[Cell]) -> Vec<Witness> {
    let mut out = Vec::new();
    for class in CellClass::ALL {
        let members: Vec<&Cell> = cells.iter().filter(|c| c.class == class && !c.degenerate).collect();
        let Some(first) = members.first() else { continue };
        let push = |out: &mut Vec<Witness>, kind, cell: &Cell| {
            out.push(Witness { class, kind, cell: cell.clone() })
        };
        push(&mut out, WitnessKind::First, first);
        if class.is_complex() {
            let best = members
                .iter()
                .copied()
                .reduce(|x, y| if y.max_imag > x.max_imag { y } else { x })
                .expect("nonempty");
            push(&mut out, WitnessKind::MaxImag, best);
        }
        let den = |c: &Cell| rational::common_denominator(c.params.iter());
        if let Some(min_den) = members.iter().map(|c| den(c)).min() {
            for c in members.iter().filter(|c| den(c) == min_den).take(MAX_SIMPLEST_WITNESSES) {
                push(&mut out, WitnessKind::Simplest, c);
            }
        }
    }
    out
}

/// `g(b) = 1 + b - 2 √(2 (1 - 5b + 8b²))` on a grid; returns `(max g, argmax)`.
pub fn negativity_lemma_check(range: &ParamRange) -> (f64, Rational) {
    let mut best = (f64::NEG_INFINITY, range.lo.clone());
    for b in range.values() {
        let g = negativity_function(&b);
        if g > best.0 {
            best = (g, b);
        }
    }
    best
}

pub fn negativity_function(b: &Rational) -> f64 {
    let radicand = rational::to_f64(&(int(2) * (int(1) - b * int(5) + b * b * int(8))));
    1.0 + rational::to_f64(b) - 2.0 * radicand.sqrt()
}

/// Exact sign of `g(b)`: compares `(1 + b)²` with `8 (1 - 5b + 8b²)` when `1 + b ≥ 0`.
pub fn negativity_sign_exact(b: &Rational) -> Ordering {
    let lhs = int(1) + b;
    if lhs.is_negative() {
        return Ordering::Less;
    }
    (&lhs * &lhs).cmp(&(int(8) * (int(1) - b * int(5) + b * b * int(8))))
}

/// Checks `D(a, a + 1/4) = (2a + 1/4)² ≥ 0` exactly for every grid value `a`, i.e. that the
/// width-6 masks that admit a `C^1` lift have only real eigenvalues.
pub fn c1_w6_obstruction(range: &ParamRange) -> bool {
    range.values().iter().all(|a| {
        let b = a + rat(1, 4);
        let root = a * int(2) + rat(1, 4);
        let d = w6_discriminant(a, &b);
        d == &root * &root && !d.is_negative()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthSummary {
    pub width: usize,
    pub cells: usize,
    pub counts: ClassCounts,
    pub degenerate: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinWidthReport {
    /// Smallest width with a `ComplexConvergent` cell, if any width up to the maximum has one.
    pub min_width: Option<usize>,
    pub witnesses: Vec<Witness>,
    pub per_width: Vec<WidthSummary>,
}

/// Scans widths `2..=max_width` (default grids unless `overrides` has a spec for the width)
/// and stops at the first width with a `ComplexConvergent` cell.
pub fn min_width_report(max_width: usize, overrides: &[SearchSpec], exec: Execution) -> Result<MinWidthReport> {
    if max_width < MIN_WIDTH {
        return Err(Error::Invalid(format!("max width must be at least {MIN_WIDTH}")));
    }
    let mut per_width = Vec::new();
    for width in MIN_WIDTH..=max_width.min(MAX_WIDTH) {
        let spec = match overrides.iter().find(|s| s.width == width) {
            Some(s) => s.clone(),
            None => SearchSpec::default_for(width)?,
        };
        let result = scan(&spec, exec)?;
        per_width.push(WidthSummary {
            width,
            cells: result.cells.len(),
            counts: result.counts,
            degenerate: result.degenerate,
        });
        if result.counts.complex_convergent > 0 {
            let witnesses = result.witnesses_of(CellClass::ComplexConvergent).cloned().collect();
            return Ok(MinWidthReport { min_width: Some(width), witnesses, per_width });
        }
    }
    Ok(MinWidthReport { min_width: None, witnesses: Vec::new(), per_width })
}

/// One row per cell: parameters, class, `max_imag`, negative count, degenerate flag.
pub fn result_to_csv(result: &SearchResult) -> String {
    let mut out = String::new();
    for name in &result.parameter_names {
        out.push_str(name);
        out.push(',');
    }
    out.push_str("class,max_imag,negative_real_count,degenerate\n");
    for c in &result.cells {
        for p in &c.params {
            out.push_str(&rational::format(p));
            out.push(',');
        }
        let _ = writeln!(
            out,
            "{},{},{},{}",
            c.class.name(),
            format_g(c.max_imag, 12),
            c.negative_real_count,
            c.degenerate
        );
    }
    out
}

#[derive(Serialize)]
struct Summary<'a> {
    width: usize,
    parameter_names: &'a [String],
    cells: usize,
    counts: ClassCounts,
    degenerate: usize,
    witnesses: &'a [Witness],
}

/// Counts and witnesses as pretty JSON (cells omitted).
pub fn result_summary_json(result: &SearchResult) -> String {
    let summary = Summary {
        width: result.width,
        parameter_names: &result.parameter_names,
        cells: result.cells.len(),
        counts: result.counts,
        degenerate: result.degenerate,
        witnesses: &result.witnesses,
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::necessary_conditions;
    use crate::local_matrix::complex_region_predicate;

    fn range(lo: (i64, i64), hi: (i64, i64), step: (i64, i64)) -> ParamRange {
        ParamRange::new(rat(lo.0, lo.1), rat(hi.0, hi.1), rat(step.0, step.1)).unwrap()
    }

    #[test]
    fn families_pass_necessary_conditions() {
        for width in MIN_WIDTH..=MAX_WIDTH {
            let params: Vec<Rational> = (0..parameter_names(width).len()).map(|k| rat(k as i64 + 1, 7)).collect();
            let coeffs = family_coefficients(width, &params).unwrap();
            assert_eq!(coeffs.len(), width);
            let reversed: Vec<Rational> = coeffs.iter().rev().cloned().collect();
            assert_eq!(coeffs, reversed, "width {width} palindromic");
            let mask = family_mask(width, &params).unwrap();
            assert!(necessary_conditions(&mask).2, "width {width}");
        }
        assert!(family_coefficients(6, &[int(0)]).is_err());
        assert!(family_coefficients(9, &[]).is_err());
    }

    #[test]
    fn range_parsing_and_counts() {
        let r = ParamRange::parse("-1:1:1/100").unwrap();
        assert_eq!(r.count(), 201);
        assert_eq!(r.value(200), int(1));
        assert_eq!(range((0, 1), (1, 1), (1, 3)).values(), vec![int(0), rat(1, 3), rat(2, 3), int(1)]);
        assert_eq!(range((0, 1), (1, 1), (2, 5)).count(), 3);
        assert!(ParamRange::parse("1:0:1").is_err());
        assert!(ParamRange::parse("0:1:0").is_err());
        assert!(ParamRange::parse("0:1").is_err());
    }

    #[test]
    fn cell_order_is_row_major() {
        let spec = SearchSpec::new(6, vec![range((0, 1), (1, 1), (1, 2)), range((0, 1), (1, 1), (1, 1))], true).unwrap();
        let all: Vec<Vec<Rational>> = (0..spec.cell_count()).map(|i| spec.cell_params(i)).collect();
        assert_eq!(
            all,
            vec![
                vec![int(0), int(0)],
                vec![int(0), int(1)],
                vec![rat(1, 2), int(0)],
                vec![rat(1, 2), int(1)],
                vec![int(1), int(0)],
                vec![int(1), int(1)],
            ]
        );
    }

    #[test]
    fn width_five_is_real() {
        let spec = SearchSpec::new(5, vec![range((-1, 1), (1, 1), (1, 200))], true).unwrap();
        let r = scan(&spec, Execution::default()).unwrap();
        assert_eq!(r.cells.len(), 401);
        assert_eq!(r.counts.complex(), 0);
        assert_eq!(r.counts.total(), 401);
    }

    #[test]
    fn example_cell_is_complex_convergent() {
        let cell = evaluate_cell(6, &[rat(-1, 10), rat(3, 10)], true).unwrap();
        assert_eq!(cell.class, CellClass::ComplexConvergent);
        assert_eq!(cell.negative_real_count, 2);
        assert!((cell.max_imag - 2f64.sqrt() / 5.0).abs() < 1e-12);
    }

    #[test]
    fn filter_separates_spectral_from_norm_convergence() {
        // complex pair, spectrally convergent, but ‖S_b‖ = 1.04
        let p = [rat(19, 50), rat(13, 50)];
        assert_eq!(evaluate_cell(6, &p, true).unwrap().class, CellClass::ComplexOther);
        assert_eq!(evaluate_cell(6, &p, false).unwrap().class, CellClass::ComplexConvergent);
    }

    #[test]
    fn coarse_width_six_scan_agrees_with_predicate() {
        let spec = SearchSpec::new(6, vec![range((-1, 2), (1, 2), (1, 20)); 2], true).unwrap();
        let seq = scan(&spec, Execution::Sequential).unwrap();
        let par = scan(&spec, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        for c in seq.cells.iter().filter(|c| !c.degenerate) {
            assert_eq!(c.class.is_complex(), complex_region_predicate(&c.params[0], &c.params[1]), "{:?}", c.params);
            assert!(c.unit_eigenvalue_error < 1e-9);
            if c.class == CellClass::ComplexConvergent {
                assert!(c.negative_real_count >= 2);
            }
        }
        assert!(seq.degenerate > 0);
        assert!(seq.cells.iter().any(|c| c.params == vec![rat(-1, 10), rat(3, 10)] && c.class == CellClass::ComplexConvergent));
    }

    #[test]
    fn negativity_function_is_nonpositive() {
        let (max, arg) = negativity_lemma_check(&range((-5, 1), (5, 1), (1, 1000)));
        assert!(max <= 1e-9);
        assert_eq!(arg, rat(333, 1000));
        assert_eq!(negativity_sign_exact(&rat(1, 3)), Ordering::Equal);
        assert_eq!(negativity_sign_exact(&int(0)), Ordering::Less);
        assert!((negativity_function(&int(0)) - (1.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn c1_obstruction() {
        assert!(c1_w6_obstruction(&range((-1, 1), (1, 1), (1, 100))));
        assert_eq!(w6_discriminant(&rat(-1, 8), &rat(1, 8)), int(0));
        assert_eq!(w6_discriminant(&int(0), &rat(1, 4)), rat(1, 16));
    }

    #[test]
    fn csv_and_summary() {
        let spec = SearchSpec::new(4, vec![range((0, 1), (1, 2), (1, 4))], true).unwrap();
        let r = scan(&spec, Execution::Sequential).unwrap();
        let csv = result_to_csv(&r);
        assert!(csv.starts_with("a,class,max_imag,negative_real_count,degenerate\n0,"));
        assert_eq!(csv.lines().count(), 4);
        let json: serde_json::Value = serde_json::from_str(&result_summary_json(&r)).unwrap();
        assert_eq!(json["cells"], 3);
        assert_eq!(json["counts"]["complex_convergent"], 0);
    }

    #[test]
    fn cell_cap() {
        let mut spec = SearchSpec::default_for(6).unwrap();
        spec.cell_cap = 100;
        assert!(matches!(scan(&spec, Execution::Sequential), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn small_max_widths_find_nothing() {
        let r = min_width_report(2, &[], Execution::default()).unwrap();
        assert_eq!(r.min_width, None);
        assert_eq!(r.per_width.len(), 1);
        let r = min_width_report(5, &[], Execution::default()).unwrap();
        assert_eq!(r.min_width, None);
        assert!(r.per_width.iter().all(|w| w.counts.complex() == 0));
    }
}

//! Subdivision masks, their symmetry classes and the built-in scheme catalog.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{self, rat, Rational};
use crate::symbol::LaurentPoly;
use crate::{Error, Result};

/// A finite mask `a_{support_min}, …, a_{support_min + width - 1}`.
///
/// Invariant: at least one coefficient, first and last nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mask {
    support_min: i64,
    #[serde(with = "rational::serde_vec_str")]
    coeffs: Vec<Rational>,
}

impl Mask {
    /// Builds a mask, trimming zero coefficients at both ends.
    pub fn new(support_min: i64, coeffs: Vec<Rational>) -> Result<Self> {
        let first = coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroMask)?;
        let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(first);
        Ok(Self {
            support_min: support_min + first as i64,
            coeffs: coeffs[first..=last].to_vec(),
        })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fractions(support_min: i64, fractions: &[(i64, i64)]) -> Result<Self> {
        Self::new(support_min, fractions.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn support_min(&self) -> i64 {
        self.support_min
    }

    pub fn support_max(&self) -> i64 {
        self.support_min + self.coeffs.len() as i64 - 1
    }

    pub fn width(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `a_i`, zero outside the support.
    pub fn get(&self, index: i64) -> Rational {
        let offset = index - self.support_min;
        if offset < 0 || offset as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[offset as usize].clone()
        }
    }

    /// The same coefficients placed on a different support.
    pub fn translated(&self, support_min: i64) -> Self {
        Self {
            support_min,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Support moved to `-n..n` (odd width) or `1-n..n` (even width, `n = width/2`).
    pub fn centered(&self) -> Self {
        self.translated(canonical_support_min(self.width()))
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "a_{}={}", self.support_min + i as i64, c)?;
        }
        write!(f, "}}")
    }
}

/// Lowest support index of the palindromic centering for a given width.
pub fn canonical_support_min(width: usize) -> i64 {
    let w = width as i64;
    if w % 2 == 1 {
        -(w - 1) / 2
    } else {
        1 - w / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryClass {
    /// Odd width, `a_i = a_{-i}` after centering.
    Primal,
    /// Even width, `a_i = a_{1-i}` after centering.
    Dual,
    Asymmetric,
}

/// Result of [`classify_symmetry`]: the class plus the centering used to test it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub class: SymmetryClass,
    /// Support start after centering (`-n` primal, `1-n` dual).
    pub centered_support_min: i64,
    /// Translation applied to the given mask to reach the centered support.
    pub shift: i64,
}

pub fn symbol_of(mask: &Mask) -> LaurentPoly {
    LaurentPoly::from_coeffs(mask.support_min, &mask.coeffs)
}

/// Inverse of [`symbol_of`]. `support_min` must equal the lowest exponent of the symbol;
/// pass `None` to take it from the symbol.
pub fn mask_of(symbol: &LaurentPoly, support_min: Option<i64>) -> Result<Mask> {
    let (lo, coeffs) = symbol.dense();
    if coeffs.is_empty() {
        return Err(Error::ZeroMask);
    }
    if let Some(requested) = support_min {
        if requested != lo {
            return Err(Error::Invalid(format!(
                "symbol starts at exponent {lo}, not {requested}"
            )));
        }
    }
    Mask::new(lo, coeffs)
}

/// Classifies the mask by palindromic symmetry; independent of where the support sits.
pub fn classify_symmetry(mask: &Mask) -> SymmetryReport {
    let w = mask.width();
    let palindromic = (0..w / 2).all(|i| mask.coeffs[i] == mask.coeffs[w - 1 - i]);
    let class = match (palindromic, w % 2) {
        (false, _) => SymmetryClass::Asymmetric,
        (true, 1) => SymmetryClass::Primal,
        (true, _) => SymmetryClass::Dual,
    };
    let centered_support_min = canonical_support_min(w);
    SymmetryReport {
        class,
        centered_support_min,
        shift: centered_support_min - mask.support_min,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeRecord {
    pub name: String,
    pub mask: Mask,
    /// Documented `C^m` smoothness, when known.
    pub smoothness: Option<u32>,
}

impl SchemeRecord {
    pub fn new(name: impl Into<String>, mask: Mask, smoothness: Option<u32>) -> Self {
        Self {
            name: name.into(),
            mask,
            smoothness,
        }
    }
}

/// The four reference schemes, keyed `"a"` … `"d"`.
///
/// * `a`: width-6 dual scheme with a complex eigenvalue pair, `C^0`.
/// * `b`: `((1+z)/2)` lift of `a`, `C^1`, still complex.
/// * `c`: the two-point ("simplest") scheme, `C^0`.
/// * `d`: cubic B-spline, `C^2`.
///
/// The printed source of `a` repeats the index `a_2`; the last entry is `a_3` by the dual
/// symmetry `a_i = a_{1-i}`.
#[derive(Clone, Debug)]
pub struct Catalog {
    records: BTreeMap<String, SchemeRecord>,
}

impl Catalog {
    pub fn builtin() -> Self {
        let entries = [
            ("a", -2, &[(-1, 10), (3, 10), (4, 5), (4, 5), (3, 10), (-1, 10)][..], 0),
            (
                "b",
                -3,
                &[(-1, 20), (1, 10), (11, 20), (4, 5), (11, 20), (1, 10), (-1, 20)][..],
                1,
            ),
            ("c", -1, &[(1, 2), (1, 1), (1, 2)][..], 0),
            ("d", -2, &[(1, 8), (4, 8), (6, 8), (4, 8), (1, 8)][..], 2),
        ];
        let records = entries
            .into_iter()
            .map(|(name, lo, fr, m)| {
                let mask = Mask::from_fractions(lo, fr).expect("catalog masks are nonzero");
                (name.to_string(), SchemeRecord::new(name, mask, Some(m)))
            })
            .collect();
        Self { records }
    }

    pub fn get(&self, name: &str) -> Result<&SchemeRecord> {
        self.records
            .get(name)
            .ok_or_else(|| Error::UnknownScheme(name.to_string()))
    }

    /// Adds a user scheme; names must be unique.
    pub fn register(&mut self, record: SchemeRecord) -> Result<()> {
        if self.records.contains_key(&record.name) {
            return Err(Error::Invalid(format!(
                "scheme {:?} is already registered",
                record.name
            )));
        }
        self.records.insert(record.name.clone(), record);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = &SchemeRecord> {
        self.records.values()
    }
}

/// Looks up a built-in scheme by name.
pub fn catalog_get(name: &str) -> Result<SchemeRecord> {
    Catalog::builtin().get(name).cloned()
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    name: String,
    support_min: i64,
    coeffs: Vec<String>,
    smoothness: Option<u32>,
}

/// Serializes a record as `{"name", "support_min", "coeffs": ["p/q", …], "smoothness"}`.
pub fn scheme_to_json(record: &SchemeRecord) -> String {
    let file = SchemeFile {
        name: record.name.clone(),
        support_min: record.mask.support_min,
        coeffs: record.mask.coeffs.iter().map(rational::format).collect(),
        smoothness: record.smoothness,
    };
    let mut out = serde_json::to_string_pretty(&file).expect("scheme file serializes");
    out.push('\n');
    out
}

pub fn scheme_from_json(text: &str) -> Result<SchemeRecord> {
    let file: SchemeFile = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .filter(|_| msg.contains("field"))
            .unwrap_or("document")
            .to_string();
        Error::Parse {
            field,
            line: e.line(),
            column: e.column(),
            message: msg,
        }
    })?;
    let mut coeffs = Vec::with_capacity(file.coeffs.len());
    for (i, raw) in file.coeffs.iter().enumerate() {
        let value = rational::parse(raw).map_err(|e| {
            let (line, column) = locate(text, raw);
            Error::Parse {
                field: format!("coeffs[{i}]"),
                line,
                column,
                message: e.to_string(),
            }
        })?;
        coeffs.push(value);
    }
    let field_error = |message: &str| {
        let (line, column) = locate(text, "coeffs");
        Error::Parse {
            field: "coeffs".into(),
            line,
            column,
            message: message.into(),
        }
    };
    if coeffs.is_empty() {
        return Err(field_error("mask needs at least one coefficient"));
    }
    if coeffs[0].is_zero() || coeffs[coeffs.len() - 1].is_zero() {
        return Err(field_error("first and last coefficients must be nonzero"));
    }
    let mask = Mask::new(file.support_min, coeffs)?;
    Ok(SchemeRecord::new(file.name, mask, file.smoothness))
}

/// 1-based line/column of the first quoted occurrence of `needle`, or (0, 0).
fn locate(text: &str, needle: &str) -> (usize, usize) {
    let quoted = format!("\"{needle}\"");
    match text.find(&quoted) {
        Some(pos) => {
            let before = &text[..pos];
            let line = before.matches('\n').count() + 1;
            let column = pos - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        }
        None => (0, 0),
    }
}

pub fn load_scheme(path: impl AsRef<Path>) -> Result<SchemeRecord> {
    let text = std::fs::read_to_string(path)?;
    scheme_from_json(&text)
}

pub fn save_scheme(record: &SchemeRecord, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, scheme_to_json(record))?;
    Ok(())
}

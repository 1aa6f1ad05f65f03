//! Convergence certification through the symbol.
//!
//! A scheme can only converge when `s_a(1) = 2` and `s_a(-1) = 0`. Then `s_a = (1+z) s_b`
//! and the scheme is `C^0` when the difference scheme `S_b` is contractive, which is checked
//! with the norm `max(Σ|b_{2j}|, Σ|b_{2j+1}|) < 1`. Every factor `(1+z)/2` that can be divided
//! out of the symbol of a `C^k` scheme adds one order of smoothness.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::scheme::{mask_of, symbol_of, Mask};
use crate::symbol::LaurentPoly;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// `s(1) != 2` or `s(-1) != 0`.
    Divergent,
    C0Certified,
    /// Necessary conditions hold but no norm test succeeded; the norm test is only sufficient.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    #[serde(with = "rational::serde_str")]
    pub s_at_1: Rational,
    #[serde(with = "rational::serde_str")]
    pub s_at_minus1: Rational,
    pub necessary_ok: bool,
    /// The mask `b` with `s_a(z) = (1+z) s_b(z)`.
    pub difference_mask: Option<Mask>,
    /// `‖S_b‖`, single step.
    #[serde(with = "rational::serde_opt_str")]
    pub norm: Option<Rational>,
    pub verdict: Verdict,
    /// Largest `m` for which `s_a = ((1+z)/2)^m s_q` with `S_q` certified `C^0`.
    pub certified_smoothness: Option<u32>,
    /// First power `L > 1` with `‖S_b^L‖ < 1`, only searched when enabled.
    pub iterated_norm: Option<IteratedNorm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedNorm {
    pub power: u32,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Highest power `L` of the difference scheme whose norm is tried (1 = single step only).
    pub max_norm_power: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { max_norm_power: 1 }
    }
}

/// `(s_a(1), s_a(-1), s_a(1) == 2 && s_a(-1) == 0)`.
pub fn necessary_conditions(mask: &Mask) -> (Rational, Rational, bool) {
    symbol_conditions(&symbol_of(mask))
}

fn symbol_conditions(symbol: &LaurentPoly) -> (Rational, Rational, bool) {
    let one = Rational::one();
    let s1 = symbol.eval(&one).expect("z = 1 is nonzero");
    let sm1 = symbol.eval(&-one).expect("z = -1 is nonzero");
    let ok = s1 == rational::int(2) && sm1.is_zero();
    (s1, sm1, ok)
}

/// Symbol of the difference scheme, `s_a(z) / (1+z)`.
pub fn difference_symbol(symbol: &LaurentPoly) -> Result<LaurentPoly> {
    let sm1 = symbol.eval(&-Rational::one())?;
    if !sm1.is_zero() {
        return Err(Error::NotFactorable {
            s_at_minus1: rational::format(&sm1),
        });
    }
    symbol.div_exact(&LaurentPoly::one_plus_z())
}

pub fn difference_scheme(mask: &Mask) -> Result<Mask> {
    mask_of(&difference_symbol(&symbol_of(mask))?, None)
}

/// `‖S_b‖ = max(Σ_j |b_{2j}|, Σ_j |b_{2j+1}|)`.
pub fn contractivity_norm(b: &Mask) -> Rational {
    symbol_norm(&symbol_of(b))
}

fn symbol_norm(b: &LaurentPoly) -> Rational {
    let (even, odd) = b.parity_sums();
    even.max(odd)
}

/// `‖S_b^L‖`: the `2^L`-residue abs sums of `Π_{r<L} s_b(z^{2^r})`.
pub fn iterated_norm(b: &Mask, power: u32) -> Rational {
    iterated_symbol_norm(&symbol_of(b), power)
}

fn iterated_symbol_norm(b: &LaurentPoly, power: u32) -> Rational {
    assert!(power >= 1, "norm power starts at 1");
    let mut product = LaurentPoly::one();
    for r in 0..power {
        product = &product * &b.dilate(1 << r);
    }
    product
        .residue_abs_sums(1 << power)
        .into_iter()
        .max()
        .unwrap_or_else(Rational::zero)
}

/// First `L` in `1..=max_power` with `‖S_b^L‖ < 1`.
fn contractive_power(b: &LaurentPoly, max_power: u32) -> Option<IteratedNorm> {
    (1..=max_power.max(1)).find_map(|power| {
        let value = iterated_symbol_norm(b, power);
        (value < Rational::one()).then_some(IteratedNorm { power, value })
    })
}

pub fn certify(mask: &Mask, target_m: u32) -> ConvergenceReport {
    certify_with(mask, target_m, &CertifyOptions::default())
}

/// Runs the smoothness ladder up to `target_m`.
///
/// At rung `m` the quotient `q = s_a / ((1+z)/2)^m` must divide exactly and pass the necessary
/// conditions again; it is certified when its difference scheme is contractive. The ladder
/// stops at the first rung that cannot be formed.
pub fn certify_with(mask: &Mask, target_m: u32, options: &CertifyOptions) -> ConvergenceReport {
    let symbol = symbol_of(mask);
    let (s_at_1, s_at_minus1, necessary_ok) = symbol_conditions(&symbol);
    if !necessary_ok {
        return ConvergenceReport {
            s_at_1,
            s_at_minus1,
            necessary_ok,
            difference_mask: None,
            norm: None,
            verdict: Verdict::Divergent,
            certified_smoothness: None,
            iterated_norm: None,
        };
    }

    let b = difference_symbol(&symbol).expect("s(-1) = 0 was checked");
    let norm = symbol_norm(&b);
    let iterated = if options.max_norm_power > 1 && norm >= Rational::one() {
        contractive_power(&b, options.max_norm_power).filter(|n| n.power > 1)
    } else {
        None
    };

    let mut certified = None;
    let mut quotient = symbol;
    let half = LaurentPoly::half_one_plus_z();
    for m in 0..=target_m {
        if m > 0 {
            match quotient.div_exact(&half) {
                Ok(q) => quotient = q,
                Err(_) => break,
            }
        }
        if !symbol_conditions(&quotient).2 {
            break;
        }
        let qb = difference_symbol(&quotient).expect("quotient passed s(-1) = 0");
        if contractive_power(&qb, options.max_norm_power).is_some() {
            certified = Some(m);
        }
    }

    ConvergenceReport {
        s_at_1,
        s_at_minus1,
        necessary_ok,
        difference_mask: mask_of(&b, None).ok(),
        norm: Some(norm),
        verdict: if certified.is_some() {
            Verdict::C0Certified
        } else {
            Verdict::Inconclusive
        },
        certified_smoothness: certified,
        iterated_norm: iterated,
    }
}

/// `((1+z)/2) · s(z)`.
pub fn lift_symbol(symbol: &LaurentPoly) -> LaurentPoly {
    &LaurentPoly::half_one_plus_z() * symbol
}

/// Mask of `((1+z)/2) s_a(z)`: one wider, primal and dual swap.
pub fn smooth_lift(mask: &Mask) -> Mask {
    mask_of(&lift_symbol(&symbol_of(mask)), None).expect("lift of a nonzero mask is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::scheme::{catalog_get, classify_symmetry, SymmetryClass};
    use proptest::prelude::*;

    fn mask(name: &str) -> Mask {
        catalog_get(name).unwrap().mask
    }

    fn ones() -> Mask {
        Mask::new(-1, vec![int(1), int(1), int(1)]).unwrap()
    }

    #[test]
    fn necessary_conditions_examples() {
        assert_eq!(necessary_conditions(&mask("a")), (int(2), int(0), true));
        assert_eq!(necessary_conditions(&mask("d")), (int(2), int(0), true));
        let (s1, sm1, ok) = necessary_conditions(&ones());
        assert_eq!(s1, int(3));
        assert_eq!(sm1, int(-1));
        assert!(!ok);
    }

    #[test]
    fn difference_schemes() {
        let b = difference_scheme(&mask("a")).unwrap();
        assert_eq!(b.support_min(), -2);
        assert_eq!(b.coeffs(), &[rat(-1, 10), rat(2, 5), rat(2, 5), rat(2, 5), rat(-1, 10)]);
        let bc = difference_scheme(&mask("c")).unwrap();
        assert_eq!(bc.support_min(), -1);
        assert_eq!(bc.coeffs(), &[rat(1, 2), rat(1, 2)]);
        assert!(matches!(difference_scheme(&ones()), Err(Error::NotFactorable { .. })));
    }

    #[test]
    fn contractivity_norms() {
        let norm = |n| contractivity_norm(&difference_scheme(&mask(n)).unwrap());
        assert_eq!(norm("a"), rat(4, 5));
        assert_eq!(norm("c"), rat(1, 2));
        let bd = difference_scheme(&mask("d")).unwrap();
        assert_eq!(bd.coeffs(), &[rat(1, 8), rat(3, 8), rat(3, 8), rat(1, 8)]);
        assert_eq!(contractivity_norm(&bd), rat(1, 2));
    }

    #[test]
    fn certification_ladder() {
        let d = certify(&mask("d"), 2);
        assert_eq!(d.verdict, Verdict::C0Certified);
        assert_eq!(d.certified_smoothness, Some(2));
        // d has exactly two smoothing factors above a contractive scheme
        assert_eq!(certify(&mask("d"), 5).certified_smoothness, Some(2));

        let b = certify(&mask("b"), 1);
        assert_eq!(b.certified_smoothness, Some(1));
        assert_eq!(b.norm, Some(rat(3, 5)));

        let a = certify(&mask("a"), 3);
        assert_eq!(a.certified_smoothness, Some(0));
        assert_eq!(a.norm, Some(rat(4, 5)));

        for target in 0..4 {
            let r = certify(&ones(), target);
            assert_eq!(r.verdict, Verdict::Divergent);
            assert_eq!(r.certified_smoothness, None);
            assert!(r.difference_mask.is_none());
        }
    }

    #[test]
    fn norm_failure_is_inconclusive_not_divergent() {
        // (19/50, 13/50) width-6 family: ‖S_b‖ = 31/25 but ‖S_b^2‖ < 1.
        let a = rat(19, 50);
        let b = rat(13, 50);
        let c = int(1) - &a - &b;
        let m = Mask::new(-2, vec![a.clone(), b.clone(), c.clone(), c, b, a]).unwrap();
        let plain = certify(&m, 0);
        assert_eq!(plain.verdict, Verdict::Inconclusive);
        assert!(plain.norm.clone().unwrap() >= int(1));

        let sharp = certify_with(&m, 0, &CertifyOptions { max_norm_power: 8 });
        assert_eq!(sharp.verdict, Verdict::C0Certified);
        let it = sharp.iterated_norm.unwrap();
        assert_eq!(it.power, 2);
        assert!(it.value < int(1));
    }

    #[test]
    fn iterated_norm_power_one_matches_single_step() {
        let b = difference_scheme(&mask("a")).unwrap();
        assert_eq!(iterated_norm(&b, 1), contractivity_norm(&b));
        assert!(iterated_norm(&b, 2) < int(1));
    }

    #[test]
    fn smooth_lifts() {
        let la = smooth_lift(&mask("a"));
        assert_eq!(
            la.coeffs(),
            &[rat(-1, 20), rat(1, 10), rat(11, 20), rat(4, 5), rat(11, 20), rat(1, 10), rat(-1, 20)]
        );
        assert_eq!(la.coeffs(), mask("b").coeffs());
        assert_eq!(classify_symmetry(&la).class, SymmetryClass::Primal);

        let lc = smooth_lift(&mask("c"));
        assert_eq!(lc.coeffs(), &[rat(1, 4), rat(3, 4), rat(3, 4), rat(1, 4)]);
        assert_eq!(classify_symmetry(&lc).class, SymmetryClass::Dual);

        assert!(lift_symbol(&LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn report_json_field_names() {
        let json = serde_json::to_value(certify(&mask("a"), 0)).unwrap();
        assert_eq!(json["norm"], "4/5");
        assert_eq!(json["s_at_1"], "2");
        assert_eq!(json["verdict"], "C0Certified");
        assert_eq!(json["certified_smoothness"], 0);
        assert_eq!(json["difference_mask"]["coeffs"][1], "2/5");
    }

    /// Random masks satisfying s(1) = 2, s(-1) = 0: even and odd entries each sum to 1.
    fn convergent_candidate() -> impl Strategy<Value = Mask> {
        (
            -4i64..4,
            prop::collection::vec((-6i64..7, 1i64..6), 1..4),
            prop::collection::vec((-6i64..7, 1i64..6), 1..4),
        )
            .prop_filter_map("nonzero ends", |(lo, ev, od)| {
                let mut even: Vec<Rational> = ev.iter().map(|&(n, d)| rat(n, d)).collect();
                let mut odd: Vec<Rational> = od.iter().map(|&(n, d)| rat(n, d)).collect();
                let se: Rational = even.iter().sum();
                let so: Rational = odd.iter().sum();
                even.push(int(1) - se);
                odd.push(int(1) - so);
                let mut coeffs = vec![int(0); 2 * even.len().max(odd.len())];
                for (i, c) in even.into_iter().enumerate() {
                    coeffs[2 * i] = c;
                }
                for (i, c) in odd.into_iter().enumerate() {
                    coeffs[2 * i + 1] = c;
                }
                let lo = 2 * lo;
                Mask::new(lo, coeffs).ok()
            })
    }

    proptest! {
        #[test]
        fn difference_factorization_is_exact(m in convergent_candidate()) {
            let b = difference_scheme(&m).unwrap();
            let rebuilt = &LaurentPoly::one_plus_z() * &symbol_of(&b);
            prop_assert_eq!(rebuilt, symbol_of(&m));
        }

        #[test]
        fn difference_of_lift_is_half_symbol(m in convergent_candidate()) {
            let lifted = smooth_lift(&m);
            prop_assert_eq!(lifted.width(), m.width() + 1);
            let b = difference_scheme(&lifted).unwrap();
            prop_assert_eq!(symbol_of(&b), symbol_of(&m).scale(&rat(1, 2)));
        }

        #[test]
        fn lift_gains_a_rung(m in convergent_candidate(), target in 0u32..3) {
            if let Some(k) = certify(&m, target).certified_smoothness {
                let lifted = certify(&smooth_lift(&m), target + 1).certified_smoothness;
                prop_assert!(lifted.unwrap() > k);
            }
        }

        #[test]
        fn necessary_conditions_translation_invariant(m in convergent_candidate(), shift in -5i64..5) {
            let moved = m.translated(m.support_min() + shift);
            prop_assert_eq!(necessary_conditions(&m), necessary_conditions(&moved));
        }
    }
}

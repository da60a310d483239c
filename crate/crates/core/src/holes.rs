//! Gap intervals, Sturmian holes and the catalogue of supercritical holes.

use std::fmt;

use malachite_nz::natural::Natural;
use malachite_base::num::arithmetic::traits::PowerOf2;

use crate::error::{arg, Result};
use crate::exact::{pi_value, Rational};
use crate::survivor::{classify, Classification, Hole, Kind};
use crate::words::{
    cf_of_fraction, characteristic_prefix, farey_below_half, standard_words, CfTuple, EvPeriodicWord, Extension,
    Fraction, Word,
};

/// Bits of precision used for Sturmian entries of the catalogue.
pub const CATALOG_PRECISION: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapInterval {
    pub cf: CfTuple,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub p_over_q: Fraction,
}

/// `[α, β]` for the fraction with continued fraction `cf`, and `γ = β + 1/4`.
pub fn gap_interval(cf: &CfTuple) -> Result<GapInterval> {
    if !cf.last_ge2() {
        return arg(format!("{cf} must end in an entry of at least 2"));
    }
    let n = cf.len();
    let s = standard_words(cf);
    let s_n = &s[n + 1];
    let s_n1 = &s[n];
    let s_n2 = &s[n - 1];
    let period = s_n1.pow(cf.last() as usize - 1).concat(s_n2).concat(s_n1);
    let prefix: Word = "01".parse()?;
    let first = pi_value(&EvPeriodicWord::new(prefix.clone(), s_n.clone())?);
    let second = pi_value(&EvPeriodicWord::new(prefix, period)?);
    let (alpha, beta) = if n % 2 == 1 { (first, second) } else { (second, first) };
    let gamma = beta.checked_add(&Rational::quarter()).expect("β stays below 3/4");
    Ok(GapInterval { cf: cf.clone(), alpha, beta, gamma, p_over_q: cf.fraction() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmianHoleBracket {
    pub cf_prefix: CfTuple,
    pub left: (Rational, Rational),
    pub right: (Rational, Rational),
    pub precision_bits: usize,
}

/// Rational brackets for `(π(01 s_∞), π(10 s_∞))`.
pub fn sturmian_hole(cf: &CfTuple, precision_bits: usize, ext: Extension) -> Result<SturmianHoleBracket> {
    let p = characteristic_prefix(cf, precision_bits, ext)?;
    let head = Word::new(vec![0, 1])?.concat(&p);
    let lo = pi_value(&EvPeriodicWord::new(head.clone(), Word::new(vec![0])?)?);
    let hi = pi_value(&EvPeriodicWord::new(head, Word::new(vec![1])?)?);
    let q = Rational::quarter();
    let right = (lo.checked_add(&q).expect("below 1"), hi.checked_add(&q).expect("below 1"));
    Ok(SturmianHoleBracket { cf_prefix: cf.clone(), left: (lo, hi), right, precision_bits })
}

/// Left endpoints of Sturmian holes, as brackets.
pub fn sample_k(samples: &[CfTuple], precision_bits: usize) -> Result<Vec<(Rational, Rational)>> {
    samples
        .iter()
        .map(|cf| Ok(sturmian_hole(cf, precision_bits, Extension::OnesTail)?.left))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Exact(Rational),
    Bracket { lo: Rational, hi: Rational },
}

impl Endpoint {
    pub fn lo(&self) -> &Rational {
        match self {
            Endpoint::Exact(x) => x,
            Endpoint::Bracket { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Endpoint::Exact(x) => x,
            Endpoint::Bracket { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Endpoint::Exact(x) => Some(x),
            Endpoint::Bracket { .. } => None,
        }
    }

    /// The image under `x ↦ 1 - x`.
    pub fn complement(&self) -> Endpoint {
        match self {
            Endpoint::Exact(x) => Endpoint::Exact(x.complement()),
            Endpoint::Bracket { lo, hi } => Endpoint::Bracket { lo: hi.complement(), hi: lo.complement() },
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Exact(x) => write!(f, "{x}"),
            Endpoint::Bracket { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Degenerate,
    MirrorDegenerate,
    OneThird,
    MirrorOneThird,
    GapAlpha,
    MirrorGapAlpha,
    GapBeta,
    MirrorGapBeta,
    Sturmian,
    MirrorSturmian,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Degenerate => "Degenerate",
            Family::MirrorDegenerate => "MirrorDegenerate",
            Family::OneThird => "OneThird",
            Family::MirrorOneThird => "MirrorOneThird",
            Family::GapAlpha => "GapAlpha",
            Family::MirrorGapAlpha => "MirrorGapAlpha",
            Family::GapBeta => "GapBeta",
            Family::MirrorGapBeta => "MirrorGapBeta",
            Family::Sturmian => "Sturmian",
            Family::MirrorSturmian => "MirrorSturmian",
        }
    }

    pub fn mirror(self) -> Family {
        match self {
            Family::Degenerate => Family::MirrorDegenerate,
            Family::MirrorDegenerate => Family::Degenerate,
            Family::OneThird => Family::MirrorOneThird,
            Family::MirrorOneThird => Family::OneThird,
            Family::GapAlpha => Family::MirrorGapAlpha,
            Family::MirrorGapAlpha => Family::GapAlpha,
            Family::GapBeta => Family::MirrorGapBeta,
            Family::MirrorGapBeta => Family::GapBeta,
            Family::Sturmian => Family::MirrorSturmian,
            Family::MirrorSturmian => Family::Sturmian,
        }
    }

    pub fn is_degenerate(self) -> bool {
        matches!(self, Family::Degenerate | Family::MirrorDegenerate)
    }

    pub fn is_gap(self) -> bool {
        matches!(self, Family::GapAlpha | Family::MirrorGapAlpha | Family::GapBeta | Family::MirrorGapBeta)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parameter {
    Cf(CfTuple),
    Alpha(Rational),
    None,
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::Cf(cf) => write!(f, "{cf}"),
            Parameter::Alpha(a) => write!(f, "{a}"),
            Parameter::None => f.write_str("-"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub family: Family,
    pub left: Endpoint,
    pub right: Endpoint,
    pub parameter: Parameter,
}

impl CatalogEntry {
    pub fn mirror(&self) -> CatalogEntry {
        CatalogEntry {
            family: self.family.mirror(),
            left: self.right.complement(),
            right: self.left.complement(),
            parameter: self.parameter.clone(),
        }
    }

    /// The hole itself when both endpoints are exact.
    pub fn hole(&self) -> Option<Hole> {
        Hole::new(self.left.exact()?.clone(), self.right.exact()?.clone()).ok()
    }

    /// Convergent denominator for gap entries.
    pub fn denominator(&self) -> Option<u64> {
        match (&self.parameter, self.family.is_gap()) {
            (Parameter::Cf(cf), true) => Some(cf.fraction().den),
            _ => None,
        }
    }
}

/// Continued fractions of all `p/q < 1/2` with `3 ≤ q ≤ max_q`, ordered by value.
pub fn gap_tuples(max_q: u64) -> Vec<CfTuple> {
    farey_below_half(max_q)
        .into_iter()
        .filter(|f| f.den >= 3)
        .map(|f| cf_of_fraction(f.num, f.den).expect("fraction lies in (0, 1/2)"))
        .collect()
}

/// Supercritical holes: gap families up to `max_q`, the one-third hole, the
/// requested Sturmian holes and `degenerate_samples` evenly spaced members of
/// the degenerate family, each with its mirror image.
pub fn catalog(max_q: u64, sturmian_samples: &[CfTuple], degenerate_samples: usize) -> Result<Vec<CatalogEntry>> {
    if max_q < 2 {
        return arg("max_q must be at least 2");
    }
    let quarter = Rational::quarter();
    let mut base = Vec::new();
    for k in 0..degenerate_samples {
        let alpha = if degenerate_samples == 1 {
            Rational::zero()
        } else {
            let den = Natural::from(4 * (degenerate_samples as u64 - 1));
            Rational::from_naturals(Natural::from(k as u64), den)?
        };
        base.push(CatalogEntry {
            family: Family::Degenerate,
            left: Endpoint::Exact(alpha.clone()),
            right: Endpoint::Exact(Rational::half()),
            parameter: Parameter::Alpha(alpha),
        });
    }
    base.push(CatalogEntry {
        family: Family::OneThird,
        left: Endpoint::Exact(Rational::new(1, 3)?),
        right: Endpoint::Exact(Rational::new(7, 12)?),
        parameter: Parameter::None,
    });
    for cf in gap_tuples(max_q) {
        let g = gap_interval(&cf)?;
        for (family, x) in [(Family::GapAlpha, &g.alpha), (Family::GapBeta, &g.beta)] {
            base.push(CatalogEntry {
                family,
                left: Endpoint::Exact(x.clone()),
                right: Endpoint::Exact(x.checked_add(&quarter).expect("below 1")),
                parameter: Parameter::Cf(cf.clone()),
            });
        }
    }
    for cf in sturmian_samples {
        let s = sturmian_hole(cf, CATALOG_PRECISION, Extension::OnesTail)?;
        base.push(CatalogEntry {
            family: Family::Sturmian,
            left: Endpoint::Bracket { lo: s.left.0, hi: s.left.1 },
            right: Endpoint::Bracket { lo: s.right.0, hi: s.right.1 },
            parameter: Parameter::Cf(cf.clone()),
        });
    }
    let mut out: Vec<CatalogEntry> = Vec::with_capacity(base.len() * 2);
    for e in base {
        let m = e.mirror();
        for entry in [e, m] {
            if !out.iter().any(|o| o.left == entry.left && o.right == entry.right) {
                out.push(entry);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupercriticalReport {
    pub outer_hole: Hole,
    pub inner_hole: Hole,
    pub outer: Classification,
    pub inner: Classification,
    pub pass: bool,
}

/// Enlarge and shrink the hole by `eps`: supercritical holes leave only the
/// fixed point when enlarged and positive entropy when shrunk.
///
/// Bracketed endpoints are resolved so that a pass holds for every hole
/// consistent with the brackets: the enlarged hole is the smallest and the
/// shrunk hole the largest candidate.
pub fn test_supercritical(left: &Endpoint, right: &Endpoint, eps: &Rational) -> Result<SupercriticalReport> {
    if eps.is_zero() {
        return arg("epsilon must be positive");
    }
    let outer_a = left.hi().saturating_sub(eps);
    let outer_b = right.lo().saturating_add(eps);
    let inner_a = left.lo().checked_add(eps);
    let inner_b = right.hi().checked_sub(eps);
    let (inner_a, inner_b) = match (inner_a, inner_b) {
        (Some(a), Some(b)) if a < b => (a, b),
        _ => return arg(format!("shrinking ({left}, {right}) by {eps} leaves nothing")),
    };
    let outer_hole = Hole::new(outer_a, outer_b)?;
    let inner_hole = Hole::new(inner_a, inner_b)?;
    let outer = classify(&outer_hole)?;
    let inner = classify(&inner_hole)?;
    let pass = outer.kind == Kind::FixedOnly && inner.kind == Kind::PositiveEntropy;
    Ok(SupercriticalReport { outer_hole, inner_hole, outer, inner, pass })
}

/// `2^{-k}`.
pub fn power_of_half(k: u64) -> Rational {
    Rational::from_naturals(Natural::from(1u32), Natural::power_of_2(k)).expect("in range")
}

//! Exact rationals on `[0, 1]`, binary expansions, and the doubling map.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Floor, PowerOf2};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::num::logic::traits::BitConvertible;
use malachite_base::rounding_modes::RoundingMode;
use malachite_nz::natural::Natural;
use malachite_q::Rational as Q;

use crate::error::{arg, Error, Result};
use crate::words::{EvPeriodicWord, Word};

/// A reduced fraction in `[0, 1]`.
///
/// The doubling map acts on `[0, 1)`; the value 1 is allowed so that it can
/// serve as an interval bound.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Q);

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return arg("zero denominator");
        }
        Self::from_q(Q::from_unsigneds(num, den))
    }

    pub fn from_naturals(num: Natural, den: Natural) -> Result<Self> {
        if den == 0u32 {
            return arg("zero denominator");
        }
        Self::from_q(Q::from_naturals(num, den))
    }

    pub(crate) fn from_q(q: Q) -> Result<Self> {
        if !(0u32..=1u32).contains(&q) {
            return Err(Error::Range(format!("{q} is outside [0, 1]")));
        }
        Ok(Rational(q))
    }

    pub(crate) fn as_q(&self) -> &Q {
        &self.0
    }

    pub fn zero() -> Self {
        Rational(Q::ZERO)
    }

    pub fn one() -> Self {
        Rational(Q::ONE)
    }

    pub fn half() -> Self {
        Rational(Q::from_unsigneds(1u32, 2))
    }

    pub fn quarter() -> Self {
        Rational(Q::from_unsigneds(1u32, 4))
    }

    /// `k / 2^m`.
    pub fn dyadic(k: u64, m: u64) -> Result<Self> {
        Self::from_naturals(Natural::from(k), Natural::power_of_2(m))
    }

    pub fn numerator(&self) -> &Natural {
        self.0.numerator_ref()
    }

    pub fn denominator(&self) -> &Natural {
        self.0.denominator_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0u32
    }

    pub fn is_one(&self) -> bool {
        self.0 == 1u32
    }

    pub fn is_dyadic(&self) -> bool {
        let d = self.denominator();
        d.trailing_zeros() == Some(d.significant_bits_u64() - 1)
    }

    pub fn to_f64(&self) -> f64 {
        f64::rounding_from(&self.0, RoundingMode::Nearest).0
    }

    pub fn to_f64_floor(&self) -> f64 {
        f64::rounding_from(&self.0, RoundingMode::Floor).0
    }

    pub fn to_f64_ceil(&self) -> f64 {
        f64::rounding_from(&self.0, RoundingMode::Ceiling).0
    }

    pub fn checked_add(&self, other: &Rational) -> Option<Rational> {
        Self::from_q(&self.0 + &other.0).ok()
    }

    pub fn checked_sub(&self, other: &Rational) -> Option<Rational> {
        Self::from_q(&self.0 - &other.0).ok()
    }

    /// `self + other`, clamped to 1.
    pub fn saturating_add(&self, other: &Rational) -> Rational {
        self.checked_add(other).unwrap_or_else(Rational::one)
    }

    /// `self - other`, clamped to 0.
    pub fn saturating_sub(&self, other: &Rational) -> Rational {
        self.checked_sub(other).unwrap_or_else(Rational::zero)
    }

    /// `1 - self`.
    pub fn complement(&self) -> Rational {
        Rational(Q::ONE - &self.0)
    }

    pub fn midpoint(&self, other: &Rational) -> Rational {
        Rational((&self.0 + &other.0) / Q::from(2u32))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses a reduced `p/q`, or the integers `0` and `1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_nat = |t: &str| -> Result<Natural> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return arg(format!("malformed fraction '{s}'"));
            }
            Natural::from_str(t).map_err(|_| Error::Argument(format!("malformed fraction '{s}'")))
        };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (parse_nat(n)?, parse_nat(d)?),
            None => (parse_nat(s)?, Natural::ONE),
        };
        if den == 0u32 {
            return arg(format!("zero denominator in '{s}'"));
        }
        let r = Self::from_naturals(num.clone(), den.clone())?;
        if *r.numerator() != num {
            return arg(format!("'{s}' is not in lowest terms"));
        }
        Ok(r)
    }
}

trait SignificantBits {
    fn significant_bits_u64(&self) -> u64;
}

impl SignificantBits for Natural {
    fn significant_bits_u64(&self) -> u64 {
        use malachite_base::num::logic::traits::SignificantBits as _;
        self.significant_bits()
    }
}

/// Which binary expansion of a dyadic rational to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionForm {
    /// Never ends in `1^∞`.
    Lower,
    /// Ends in `1^∞` for dyadic `x > 0`; same as `Lower` otherwise.
    Upper,
}

fn natural_from_bits(bits: &[u8]) -> Natural {
    Natural::from_bits_desc(bits.iter().map(|&b| b == 1))
}

/// `π(w) = Σ w_k 2^{-k}` computed exactly.
pub fn pi_value(w: &EvPeriodicWord) -> Rational {
    let m = w.pre().len() as u64;
    let p = w.period().len() as u64;
    let a = natural_from_bits(w.pre().symbols());
    let b = natural_from_bits(w.period().symbols());
    let cycle = Natural::power_of_2(p) - Natural::ONE;
    let num = a * &cycle + b;
    let den = Natural::power_of_2(m) * cycle;
    Rational::from_naturals(num, den).expect("π lands in [0, 1]")
}

/// `1^∞`, the formal expansion of 1.
pub fn expansion_of_one() -> EvPeriodicWord {
    EvPeriodicWord::new_exact(Word::empty(), Word::from_vec_unchecked(vec![1])).unwrap()
}

/// Binary expansion of `x ∈ [0, 1)`.
pub fn binary_expansion(x: &Rational, form: ExpansionForm) -> Result<EvPeriodicWord> {
    if x.is_one() {
        return Err(Error::Range("1 has only the formal expansion 1^∞".into()));
    }
    let den = x.denominator();
    let m = den.trailing_zeros().expect("denominator is positive");
    let odd: Natural = den >> m;
    let (pre, tail_num) = match u128::try_from(den) {
        Ok(d) if d < 1u128 << 126 => {
            let n = u128::try_from(x.numerator()).expect("numerator below denominator");
            let (pre, r) = leading_digits_small(n, d, m as usize);
            (pre, Natural::from(r >> m))
        }
        _ => leading_digits_big(x.numerator().clone(), den, m as usize),
    };
    let period = if odd == 1u32 {
        vec![0]
    } else {
        match u128::try_from(&odd) {
            Ok(o) if o < 1u128 << 126 => {
                periodic_digits_small(u128::try_from(&tail_num).expect("fits"), o)
            }
            _ => periodic_digits_big(tail_num, &odd),
        }
    };
    let word = EvPeriodicWord::new_exact(Word::from_vec_unchecked(pre), Word::from_vec_unchecked(period))?;
    match form {
        ExpansionForm::Upper if odd == 1u32 && !x.is_zero() => {
            let mut pre = word.pre().symbols().to_vec();
            let last = pre.len() - 1;
            pre[last] = 0;
            EvPeriodicWord::new_exact(Word::from_vec_unchecked(pre), Word::from_vec_unchecked(vec![1]))
        }
        _ => Ok(word),
    }
}

fn leading_digits_small(mut r: u128, d: u128, m: usize) -> (Vec<u8>, u128) {
    let mut digits = Vec::with_capacity(m);
    for _ in 0..m {
        r <<= 1;
        if r >= d {
            r -= d;
            digits.push(1);
        } else {
            digits.push(0);
        }
    }
    (digits, r)
}

fn leading_digits_big(mut r: Natural, d: &Natural, m: usize) -> (Vec<u8>, Natural) {
    let mut digits = Vec::with_capacity(m);
    for _ in 0..m {
        r <<= 1u64;
        if &r >= d {
            r -= d;
            digits.push(1);
        } else {
            digits.push(0);
        }
    }
    (digits, r >> m as u64)
}

fn periodic_digits_small(start: u128, o: u128) -> Vec<u8> {
    let mut digits = Vec::new();
    let mut r = start;
    loop {
        r <<= 1;
        if r >= o {
            r -= o;
            digits.push(1);
        } else {
            digits.push(0);
        }
        if r == start {
            return digits;
        }
    }
}

fn periodic_digits_big(start: Natural, o: &Natural) -> Vec<u8> {
    let mut digits = Vec::new();
    let mut r = start.clone();
    loop {
        r <<= 1u64;
        if &r >= o {
            r -= o;
            digits.push(1);
        } else {
            digits.push(0);
        }
        if r == start {
            return digits;
        }
    }
}

/// `T(x) = 2x mod 1` on `[0, 1)`.
pub fn doubling_map(x: &Rational) -> Result<Rational> {
    if x.is_one() {
        return Err(Error::Range("the doubling map acts on [0, 1)".into()));
    }
    let twice = &x.0 * Q::from(2u32);
    let frac = &twice - Q::from((&twice).floor());
    Rational::from_q(frac)
}

/// Forward orbit of a rational up to its first repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitResult {
    pub transient: Vec<Rational>,
    pub cycle: Vec<Rational>,
}

impl OrbitResult {
    pub fn cycle_length(&self) -> usize {
        self.cycle.len()
    }

    pub fn points(&self) -> impl Iterator<Item = &Rational> {
        self.transient.iter().chain(self.cycle.iter())
    }
}

/// Iterate the doubling map from `x` until a point repeats.
pub fn orbit(x: &Rational, max_steps: usize) -> Result<OrbitResult> {
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut cur = x.clone();
    for _ in 0..=max_steps {
        if let Some(&i) = seen.get(&cur) {
            let cycle = points.split_off(i);
            return Ok(OrbitResult { transient: points, cycle });
        }
        seen.insert(cur.clone(), points.len());
        let next = doubling_map(&cur)?;
        points.push(cur);
        cur = next;
    }
    Err(Error::OrbitBudget { partial: points })
}

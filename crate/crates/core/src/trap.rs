//! Finite checks of the trap property `⋃_k T^{-k}[c, d] = (0, 1)`.

use std::fmt;

use malachite_base::num::arithmetic::traits::{Ceiling, Floor, PowerOf2};
use malachite_base::num::logic::traits::BitConvertible;
use malachite_nz::natural::Natural;
use malachite_q::Rational as Q;

use crate::error::{arg, Result};
use crate::exact::Rational;
use crate::words::{lyndon_words, EvPeriodicWord, Word};

const MAX_DEPTH: usize = 120;
const MAX_RESIDUAL: usize = 1 << 20;
const WITNESS_LEN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrapVerdict {
    Trapped,
    Escapes,
    Unknown,
}

impl fmt::Display for TrapVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrapVerdict::Trapped => "trapped",
            TrapVerdict::Escapes => "escapes",
            TrapVerdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrapReport {
    pub verdict: TrapVerdict,
    /// Total length of the cylinders at the last generation that have not
    /// yet entered `[c, d]`.
    pub residual_measure: Rational,
    /// Residual measure per generation, starting with generation 0.
    pub history: Vec<Rational>,
    /// A point of `(0, 1)` whose orbit never meets `[c, d]`.
    pub escape_witness: Option<EvPeriodicWord>,
}

impl TrapReport {
    pub fn trapped(&self) -> Option<bool> {
        match self.verdict {
            TrapVerdict::Trapped => Some(true),
            TrapVerdict::Escapes => Some(false),
            TrapVerdict::Unknown => None,
        }
    }
}

fn word_value(w: &Word) -> Natural {
    Natural::from_bits_desc(w.symbols().iter().map(|&b| b == 1))
}

fn find_witness(c: &Q, d: &Q, max_len: usize) -> Option<EvPeriodicWord> {
    let mut words: Vec<Word> = lyndon_words(max_len).into_iter().filter(|w| w.len() > 1).collect();
    words.sort_by_key(|w| w.len());
    for w in words {
        let den = Natural::power_of_2(w.len() as u64) - Natural::from(1u32);
        let avoids = (0..w.len()).all(|k| {
            let x = Q::from_naturals(word_value(&w.rotate_left(k)), den.clone());
            &x < c || &x > d
        });
        if avoids {
            return Some(EvPeriodicWord::periodic(w).expect("nonempty"));
        }
    }
    let half = Q::from_unsigneds(1u32, 2);
    if &half < c || &half > d {
        return "1(0)".parse().ok();
    }
    None
}

/// Test whether `[c, d]` is a trap by exact subdivision up to `depth`.
///
/// A dyadic cylinder `[w]` is captured once the interval of some suffix of
/// `w` lies inside `[c, d]`, since that suffix is an iterate image of `[w]`.
pub fn is_trap(c: &Rational, d: &Rational, depth: usize, tol: f64) -> Result<TrapReport> {
    if c >= d || c.is_zero() || d.is_one() {
        return arg(format!("[{c}, {d}] must satisfy 0 < c < d < 1"));
    }
    if depth == 0 || depth > MAX_DEPTH {
        return arg(format!("depth must lie in 1..={MAX_DEPTH}"));
    }
    let (cq, dq) = (c.as_q(), d.as_q());
    let witness = find_witness(cq, dq, depth.min(WITNESS_LEN));

    // A suffix of length j with value k is captured iff lo[j] ≤ k ≤ hi[j].
    let mut lo = vec![0u128; depth + 1];
    let mut hi = vec![0i128; depth + 1];
    for j in 1..=depth {
        let scale = Q::from(Natural::power_of_2(j as u64));
        let l = Natural::try_from(Q::from((cq * &scale).ceiling())).expect("nonnegative");
        let h = Natural::try_from(Q::from((dq * &scale).floor())).expect("nonnegative");
        lo[j] = u128::try_from(&l).expect("fits");
        hi[j] = u128::try_from(&h).expect("fits") as i128 - 1;
    }
    let captured = |w: u128, len: usize| {
        (1..=len).any(|j| {
            let k = if j == 128 { w } else { w & ((1u128 << j) - 1) };
            k >= lo[j] && (k as i128) <= hi[j]
        })
    };

    let mut residual: Vec<u128> = vec![0];
    let mut history = vec![Rational::one()];
    let mut overflow = false;
    for len in 1..=depth {
        let mut grown = Vec::with_capacity(residual.len() * 2);
        for &w in &residual {
            for s in 0..2u128 {
                let v = (w << 1) | s;
                if !captured(v, len) {
                    grown.push(v);
                }
            }
        }
        residual = grown;
        history.push(Rational::dyadic(residual.len() as u64, len as u64)?);
        if residual.len() > MAX_RESIDUAL {
            overflow = true;
            break;
        }
    }
    let residual_measure = history.last().cloned().expect("generation 0 is recorded");

    let verdict = if witness.is_some() {
        TrapVerdict::Escapes
    } else if !overflow && residual_measure.to_f64() < tol && contracting(&history) {
        TrapVerdict::Trapped
    } else {
        TrapVerdict::Unknown
    };
    Ok(TrapReport { verdict, residual_measure, history, escape_witness: witness })
}

// Strict decrease over the second half of the recorded generations.
fn contracting(history: &[Rational]) -> bool {
    let start = history.len() / 2;
    history[start.saturating_sub(1)..].windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn middle_third_is_a_trap() {
        let rep = is_trap(&r("1/3"), &r("2/3"), 20, 1e-3).unwrap();
        assert_eq!(rep.verdict, TrapVerdict::Trapped);
        assert!(rep.escape_witness.is_none());
        assert!(rep.residual_measure.to_f64() < 1e-3);
    }

    #[test]
    fn two_cycle_escapes_a_narrow_interval() {
        let rep = is_trap(&r("2/5"), &r("9/20"), 12, 1e-3).unwrap();
        assert_eq!(rep.verdict, TrapVerdict::Escapes);
        assert_eq!(rep.escape_witness.unwrap().to_string(), "(01)");
    }

    #[test]
    fn half_is_a_witness_when_outside() {
        // Every cycle of length at most 3 meets [1/6, 9/20].
        let rep = is_trap(&r("1/6"), &r("9/20"), 3, 1e-3).unwrap();
        assert_eq!(rep.escape_witness.unwrap().to_string(), "1(0)");
    }

    #[test]
    fn degenerate_intervals_are_rejected() {
        assert!(is_trap(&r("1/2"), &r("1/2"), 10, 1e-3).is_err());
        assert!(is_trap(&r("0"), &r("1/2"), 10, 1e-3).is_err());
        assert!(is_trap(&r("1/3"), &r("1/2"), 0, 1e-3).is_err());
    }

    #[test]
    fn shallow_depth_is_inconclusive() {
        let rep = is_trap(&r("1/3"), &r("2/3"), 3, 1e-3).unwrap();
        assert_eq!(rep.verdict, TrapVerdict::Unknown);
    }
}

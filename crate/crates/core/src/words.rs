//! Finite and eventually periodic 0-1 words.
//!
//! Standard words are generated from a tuple `(a_1, ..., a_n)` of positive
//! integers, which encodes the continued fraction `[a_1 + 1, a_2, ..., a_n]`:
//! `s_{-1} = 1`, `s_0 = 0` and `s_{k+1} = s_k^{a_{k+1}} s_{k-1}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{arg, Error, Result};

/// A finite word over `{0, 1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|&&s| s > 1) {
            return arg(format!("symbol {s} is not binary"));
        }
        Ok(Word(symbols))
    }

    pub(crate) fn from_vec_unchecked(symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| s <= 1));
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of 1s.
    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&s| s == 1).count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn rotate_left(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    /// Swap 0 and 1.
    pub fn complement(&self) -> Word {
        Word(self.0.iter().map(|&s| 1 - s).collect())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Shortest `u` with `self = u^k`.
    pub fn primitive_root(&self) -> Word {
        let n = self.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]) {
                return Word(self.0[..d].to_vec());
            }
        }
        self.clone()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_root().len() == self.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => arg(format!("'{c}' is not a binary symbol")),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// Continued-fraction data `(a_1, ..., a_n)` standing for `[a_1 + 1, a_2, ..., a_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CfTuple(Vec<u32>);

impl CfTuple {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return arg("continued-fraction tuple is empty");
        }
        if entries.contains(&0) {
            return arg("continued-fraction entries must be positive");
        }
        Ok(CfTuple(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> u32 {
        *self.0.last().expect("nonempty")
    }

    /// Whether the tuple uses the normalization `a_n >= 2`.
    pub fn last_ge2(&self) -> bool {
        self.last() >= 2
    }

    pub fn extended(&self, extra: &[u32]) -> Result<CfTuple> {
        let mut v = self.0.clone();
        v.extend_from_slice(extra);
        CfTuple::new(v)
    }

    pub fn with_ones(&self, k: usize) -> CfTuple {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat_n(1, k));
        CfTuple(v)
    }

    /// Convergents `(p_k, q_k)` of `[a_1 + 1, ..., a_k]` for `k = 1..=n`.
    pub fn convergents(&self) -> Vec<(u64, u64)> {
        let (mut p0, mut q0) = (1u64, 0u64);
        let (mut p1, mut q1) = (0u64, 1u64);
        let mut out = Vec::with_capacity(self.len());
        for (k, &a) in self.0.iter().enumerate() {
            let c = if k == 0 { a as u64 + 1 } else { a as u64 };
            let p2 = c.checked_mul(p1).and_then(|v| v.checked_add(p0));
            let q2 = c.checked_mul(q1).and_then(|v| v.checked_add(q0));
            let (p2, q2) = p2.zip(q2).expect("convergent overflows u64");
            out.push((p2, q2));
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
        }
        out
    }

    /// The last convergent `p_n / q_n`.
    pub fn fraction(&self) -> Fraction {
        let (p, q) = *self.convergents().last().expect("nonempty");
        Fraction { num: p, den: q }
    }
}

impl fmt::Display for CfTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for CfTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let entries = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| Error::Argument(format!("bad entry '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        CfTuple::new(entries)
    }
}

/// A small nonnegative fraction, used for Farey and Stern–Brocot bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        Fraction { num, den }
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// An eventually periodic infinite word `pre · period^∞`.
///
/// Values are kept in canonical form: the period is primitive and the
/// preperiod is as short as possible. [`EvPeriodicWord::new`] additionally
/// rewrites a `u01^∞` tail as `u10^∞`; [`EvPeriodicWord::new_exact`] keeps the
/// sequence as given and is what upper binary expansions are built with.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvPeriodicWord {
    pre: Word,
    period: Word,
}

impl EvPeriodicWord {
    pub fn new(pre: Word, period: Word) -> Result<Self> {
        let mut w = Self::new_exact(pre, period)?;
        if w.period.0 == [1] && !w.pre.is_empty() {
            // absorption leaves a preperiod ending in 0
            let last = w.pre.0.len() - 1;
            w.pre.0[last] = 1;
            w.period = Word(vec![0]);
        }
        Ok(w)
    }

    /// Canonical form of exactly the sequence `pre · period^∞`.
    pub fn new_exact(pre: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return arg("period must be nonempty");
        }
        let mut pre = pre.0;
        let mut period = period.primitive_root().0;
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Ok(EvPeriodicWord { pre: Word(pre), period: Word(period) })
    }

    pub fn periodic(period: Word) -> Result<Self> {
        Self::new(Word::empty(), period)
    }

    pub fn pre(&self) -> &Word {
        &self.pre
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    /// Whether the word ends in `1^∞`.
    pub fn ends_in_ones(&self) -> bool {
        self.period.0 == [1]
    }

    /// Symbol at position `i` (0-based).
    pub fn symbol(&self, i: usize) -> u8 {
        let m = self.pre.len();
        if i < m {
            self.pre.0[i]
        } else {
            self.period.0[(i - m) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.symbol(i)).collect())
    }

    /// The one-sided shift.
    pub fn shift(&self) -> EvPeriodicWord {
        if self.pre.is_empty() {
            EvPeriodicWord { pre: Word::empty(), period: self.period.rotate_left(1) }
        } else {
            EvPeriodicWord { pre: Word(self.pre.0[1..].to_vec()), period: self.period.clone() }
        }
    }

    /// `w ↦ uw` for a finite prefix `u`.
    pub fn prepend(&self, u: &Word) -> EvPeriodicWord {
        Self::new_exact(u.concat(&self.pre), self.period.clone()).expect("period nonempty")
    }

    pub fn complement(&self) -> EvPeriodicWord {
        Self::new_exact(self.pre.complement(), self.period.complement()).expect("period nonempty")
    }
}

impl fmt::Display for EvPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pre, self.period)
    }
}

impl FromStr for EvPeriodicWord {
    type Err = Error;

    /// Parses `pre(period)`; a tail of `(1)` is kept as written.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (pre, rest) = s
            .split_once('(')
            .ok_or_else(|| Error::Argument(format!("'{s}' has no '(period)'")))?;
        let period = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Argument(format!("'{s}' has unterminated period")))?;
        EvPeriodicWord::new_exact(pre.parse()?, period.parse()?)
    }
}

impl PartialOrd for EvPeriodicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EvPeriodicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

/// Lexicographic order of the infinite sequences.
pub fn lex_compare(u: &EvPeriodicWord, v: &EvPeriodicWord) -> Ordering {
    // Past both preperiods the words are periodic; agreement on p + q more
    // symbols forces equality (Fine–Wilf).
    let horizon = u.pre.len().max(v.pre.len()) + u.period.len() + v.period.len();
    for i in 0..horizon {
        match u.symbol(i).cmp(&v.symbol(i)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// Standard words `s_{-1}, s_0, ..., s_n`; index `k + 1` holds `s_k`.
pub fn standard_words(cf: &CfTuple) -> Vec<Word> {
    let mut words = vec![Word(vec![1]), Word(vec![0])];
    for &a in cf.entries() {
        let n = words.len();
        let next = words[n - 1].pow(a as usize).concat(&words[n - 2]);
        words.push(next);
    }
    words
}

/// Whether a characteristic prefix may grow the tuple by trailing 1s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Extension {
    /// Only the symbols fixed by the given entries are emitted.
    Disabled,
    /// The tuple is read as `(a_1, ..., a_n, 1, 1, ...)`.
    #[default]
    OnesTail,
}

/// Number of leading symbols of the characteristic word fixed by the entries.
///
/// Every continuation begins with `s_n s_{n-1}`.
pub fn determined_length(cf: &CfTuple) -> usize {
    let cv = cf.convergents();
    let n = cv.len();
    let q_prev = if n >= 2 { cv[n - 2].1 } else { 1 };
    (cv[n - 1].1 + q_prev) as usize
}

/// First `len` symbols of the characteristic word.
pub fn characteristic_prefix(cf: &CfTuple, len: usize, ext: Extension) -> Result<Word> {
    let mut cf = cf.clone();
    let mut avail = determined_length(&cf);
    if avail < len {
        match ext {
            Extension::Disabled => return Err(Error::Length { requested: len, available: avail }),
            Extension::OnesTail => {
                while avail < len {
                    cf = cf.with_ones(1);
                    avail = determined_length(&cf);
                }
            }
        }
    }
    let words = standard_words(&cf);
    let n = words.len();
    let mut prefix = words[n - 1].concat(&words[n - 2]).0;
    prefix.truncate(len);
    Ok(Word(prefix))
}

/// Every two factors of equal length differ by at most one in their number of 1s.
pub fn is_balanced(w: &Word) -> bool {
    let s = w.symbols();
    let mut prefix = vec![0usize; s.len() + 1];
    for (i, &x) in s.iter().enumerate() {
        prefix[i + 1] = prefix[i] + x as usize;
    }
    for n in 1..s.len() {
        let (mut lo, mut hi) = (usize::MAX, 0);
        for i in 0..=s.len() - n {
            let c = prefix[i + n] - prefix[i];
            lo = lo.min(c);
            hi = hi.max(c);
        }
        if hi - lo > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least and greatest rotations of `w`.
///
/// Rotations of equal length compared as periodic infinite words order the
/// same way as the finite words themselves.
pub fn cyclic_extremes(w: &Word) -> Result<(Word, Word)> {
    if w.is_empty() {
        return arg("cyclic extremes of the empty word");
    }
    let rotations = (0..w.len()).map(|k| w.rotate_left(k));
    let mut min = w.clone();
    let mut max = w.clone();
    for r in rotations {
        if r < min {
            min = r.clone();
        }
        if r > max {
            max = r;
        }
    }
    Ok((min, max))
}

/// Prefix of the Thue–Morse sequence `0110 1001 1001 0110 ...`.
pub fn thue_morse(len: usize) -> Word {
    Word((0..len).map(|k| (k.count_ones() % 2) as u8).collect())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Farey parents `l < p/q < r` whose mediant is `p/q`.
pub fn farey_parents(p: u64, q: u64) -> Result<(Fraction, Fraction)> {
    if q < 2 || p == 0 || p >= q {
        return arg(format!("{p}/{q} is not strictly between 0 and 1"));
    }
    if gcd(p, q) != 1 {
        return arg(format!("{p}/{q} is not reduced"));
    }
    // left = a/b with p*b - q*a = 1, 0 < b < q
    let b = mod_inverse(p, q);
    let a = ((p as u128 * b as u128 - 1) / q as u128) as u64;
    Ok((Fraction::new(a, b), Fraction::new(p - a, q - b)))
}

fn mod_inverse(p: u64, q: u64) -> u64 {
    let (mut r0, mut r1) = (q as i128, p as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    t0.rem_euclid(q as i128) as u64
}

/// Normalized tuple (`a_n >= 2`) of a reduced `p/q` in `(0, 1/2)`.
pub fn cf_of_fraction(p: u64, q: u64) -> Result<CfTuple> {
    if p == 0 || 2 * p >= q {
        return arg(format!("{p}/{q} is not in (0, 1/2)"));
    }
    if gcd(p, q) != 1 {
        return arg(format!("{p}/{q} is not reduced"));
    }
    let mut quotients = Vec::new();
    let (mut num, mut den) = (q, p);
    while den != 0 {
        quotients.push((num / den) as u32);
        (num, den) = (den, num % den);
    }
    quotients[0] -= 1;
    CfTuple::new(quotients)
}

/// Reduced fractions in `(0, 1/2)` with denominator at most `max_q`, by
/// Stern–Brocot descent below `1/2`, in increasing order.
pub fn farey_below_half(max_q: u64) -> Vec<Fraction> {
    fn walk(l: Fraction, r: Fraction, max_q: u64, out: &mut Vec<Fraction>) {
        let m = Fraction::new(l.num + r.num, l.den + r.den);
        if m.den > max_q {
            return;
        }
        walk(l, m, max_q, out);
        out.push(m);
        walk(m, r, max_q, out);
    }
    let mut out = Vec::new();
    walk(Fraction::new(0, 1), Fraction::new(1, 2), max_q, &mut out);
    out
}

/// Binary Lyndon words of length `1..=max_len` in lexicographic order (Duval).
pub fn lyndon_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(Word(w.clone()));
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    out
}

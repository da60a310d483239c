//! Survivor automata for open holes with rational endpoints.
//!
//! A sequence `w` survives the hole `(a, b)` when every tail `σ^k w` satisfies
//! `σ^k w ⪯ lower(a)` or `σ^k w ⪰ upper(b)`. At a dyadic endpoint the lower
//! expansion is the lexicographically larger one, so both codings of a
//! boundary point pass. The automaton reads `w` one
//! symbol at a time and remembers, for every tail started so far that has not
//! yet been cleared, the pair of endpoint tails it is still tied with.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use malachite_base::num::arithmetic::traits::PowerOf2;
use malachite_base::num::basic::traits::One;
use malachite_base::num::logic::traits::BitConvertible;
use malachite_nz::natural::Natural;
use malachite_q::Rational as Q;

use crate::error::{arg, Error, Result};
use crate::exact::{binary_expansion, expansion_of_one, ExpansionForm, Rational};
use crate::perron::{self, Entropy};
use crate::words::{cyclic_extremes, lyndon_words, EvPeriodicWord, Word};

/// Default cap on the number of automaton states.
pub const DEFAULT_MAX_STATES: usize = 1 << 20;

/// An open interval `(a, b)` with `0 ≤ a < b ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hole {
    a: Rational,
    b: Rational,
}

impl Hole {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a >= b {
            return arg(format!("hole ({a}, {b}) is empty"));
        }
        Ok(Hole { a, b })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// The image under `x ↦ 1 - x`.
    pub fn mirror(&self) -> Hole {
        Hole { a: self.b.complement(), b: self.a.complement() }
    }

    pub fn contains(&self, other: &Hole) -> bool {
        self.a <= other.a && other.b <= self.b
    }
}

impl fmt::Display for Hole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Coarse shape of a survivor set, ordered by size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    FixedOnly,
    CountableCycles,
    PositiveEntropy,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::FixedOnly => "FixedOnly",
            Kind::CountableCycles => "CountableCycles",
            Kind::PositiveEntropy => "PositiveEntropy",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub kind: Kind,
    /// Surviving cycles other than the fixed point, as minimal rotations.
    /// Only isolated cycles are listed; a branching component carries
    /// infinitely many.
    pub cycles: Vec<EvPeriodicWord>,
    /// Whether `0^∞` survives.
    pub zero_loop: bool,
    pub entropy: Entropy,
    /// Number of live automaton states.
    pub states: usize,
}

impl Classification {
    pub fn dimension(&self) -> f64 {
        self.entropy.dimension()
    }
}

/// Deterministic safety automaton; every infinite run is accepting.
#[derive(Clone, Debug)]
pub struct SurvivorAutomaton {
    next: Vec<[Option<u32>; 2]>,
    start: u32,
    live: Vec<bool>,
}

// Endpoint tails merged into one table, indexed by lexicographic rank.
struct Tails {
    symbol: Vec<u8>,
    next: Vec<u32>,
    a: u32,
    b: u32,
}

impl Tails {
    fn new(a: &EvPeriodicWord, b: &EvPeriodicWord) -> Tails {
        let mut all = Vec::new();
        for w in [a, b] {
            let mut t = w.clone();
            for _ in 0..w.pre().len() + w.period().len() {
                all.push(t.clone());
                t = t.shift();
            }
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        let rank = |w: &EvPeriodicWord| sorted.binary_search(w).expect("tail is listed") as u32;
        let symbol = sorted.iter().map(|t| t.symbol(0)).collect();
        let next = sorted.iter().map(|t| rank(&t.shift())).collect();
        Tails { symbol, next, a: rank(a), b: rank(b) }
    }
}

// A pending tail must not land strictly between `lo` and `hi`; `None` marks a
// side that is already settled in the forbidden direction.
type Constraint = (Option<u32>, Option<u32>);

enum Step {
    Cleared,
    Pending(Constraint),
    Dead,
}

fn step(t: &Tails, (lo, hi): Constraint, s: u8) -> Step {
    let lo = match lo {
        None => None,
        Some(r) => match s.cmp(&t.symbol[r as usize]) {
            Ordering::Less => return Step::Cleared,
            Ordering::Equal => Some(t.next[r as usize]),
            Ordering::Greater => None,
        },
    };
    let hi = match hi {
        None => None,
        Some(r) => match s.cmp(&t.symbol[r as usize]) {
            Ordering::Greater => return Step::Cleared,
            Ordering::Equal => Some(t.next[r as usize]),
            Ordering::Less => None,
        },
    };
    if lo.is_none() && hi.is_none() {
        Step::Dead
    } else {
        Step::Pending((lo, hi))
    }
}

fn covers(outer: Constraint, inner: Constraint) -> bool {
    let lo_ok = match (outer.0, inner.0) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x <= y,
    };
    let hi_ok = match (outer.1, inner.1) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x >= y,
    };
    lo_ok && hi_ok
}

fn reduce(mut cs: Vec<Constraint>) -> Vec<Constraint> {
    cs.retain(|c| !matches!(c, (Some(lo), Some(hi)) if lo >= hi));
    cs.sort();
    cs.dedup();
    let mut kept: Vec<Constraint> = Vec::with_capacity(cs.len());
    for (i, &c) in cs.iter().enumerate() {
        let dominated = cs.iter().enumerate().any(|(j, &d)| j != i && covers(d, c) && (!covers(c, d) || j < i));
        if !dominated {
            kept.push(c);
        }
    }
    kept
}

/// Survivor automaton for `h` with the default state budget.
pub fn build_automaton(h: &Hole) -> Result<SurvivorAutomaton> {
    build_automaton_with_budget(h, DEFAULT_MAX_STATES)
}

pub fn build_automaton_with_budget(h: &Hole, max_states: usize) -> Result<SurvivorAutomaton> {
    let lower_a = binary_expansion(h.a(), ExpansionForm::Lower)?;
    let upper_b = if h.b().is_one() {
        expansion_of_one()
    } else {
        binary_expansion(h.b(), ExpansionForm::Upper)?
    };
    let tails = Tails::new(&lower_a, &upper_b);
    let fresh: Constraint = (Some(tails.a), Some(tails.b));

    let mut ids: HashMap<Vec<Constraint>, u32> = HashMap::new();
    let mut states: Vec<Vec<Constraint>> = vec![Vec::new()];
    ids.insert(Vec::new(), 0);
    let mut next: Vec<[Option<u32>; 2]> = Vec::new();
    let mut queue = VecDeque::from([0u32]);
    while let Some(id) = queue.pop_front() {
        let current = states[id as usize].clone();
        let mut row = [None, None];
        for s in 0..2u8 {
            let mut out = Vec::with_capacity(current.len() + 1);
            let mut dead = false;
            for &c in current.iter().chain(std::iter::once(&fresh)) {
                match step(&tails, c, s) {
                    Step::Cleared => {}
                    Step::Pending(c) => out.push(c),
                    Step::Dead => {
                        dead = true;
                        break;
                    }
                }
            }
            if dead {
                continue;
            }
            let out = reduce(out);
            let target = match ids.get(&out) {
                Some(&t) => t,
                None => {
                    if states.len() >= max_states {
                        return Err(Error::Budget(format!("survivor automaton for {h} exceeds {max_states} states")));
                    }
                    let t = states.len() as u32;
                    ids.insert(out.clone(), t);
                    states.push(out);
                    queue.push_back(t);
                    t
                }
            };
            row[s as usize] = Some(target);
        }
        if next.len() <= id as usize {
            next.resize(id as usize + 1, [None, None]);
        }
        next[id as usize] = row;
    }
    next.resize(states.len(), [None, None]);
    Ok(SurvivorAutomaton::assemble(next, 0))
}

impl SurvivorAutomaton {
    /// Automaton from explicit labelled edges `(from, symbol, to)`.
    pub fn from_edges(states: usize, edges: &[(u32, u8, u32)], start: u32) -> Result<Self> {
        if start as usize >= states {
            return arg("start state out of range");
        }
        let mut next = vec![[None, None]; states];
        for &(from, s, to) in edges {
            if from as usize >= states || to as usize >= states || s > 1 {
                return arg(format!("bad edge {from} {s} {to}"));
            }
            if next[from as usize][s as usize].replace(to).is_some() {
                return arg(format!("state {from} has two edges on {s}"));
            }
        }
        Ok(Self::assemble(next, start))
    }

    fn assemble(next: Vec<[Option<u32>; 2]>, start: u32) -> Self {
        let n = next.len();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut outdeg = vec![0usize; n];
        for (i, row) in next.iter().enumerate() {
            for t in row.iter().flatten() {
                preds[*t as usize].push(i as u32);
                outdeg[i] += 1;
            }
        }
        let mut live = vec![true; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| outdeg[i] == 0).collect();
        while let Some(i) = queue.pop_front() {
            if !live[i] {
                continue;
            }
            live[i] = false;
            for &p in &preds[i] {
                let p = p as usize;
                outdeg[p] -= 1;
                if outdeg[p] == 0 && live[p] {
                    queue.push_back(p);
                }
            }
        }
        SurvivorAutomaton { next, start, live }
    }

    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn live_count(&self) -> usize {
        self.live.iter().filter(|&&l| l).count()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn is_live(&self, state: u32) -> bool {
        self.live[state as usize]
    }

    /// Transition restricted to live states.
    pub fn live_next(&self, state: u32, symbol: u8) -> Option<u32> {
        self.next[state as usize][symbol as usize].filter(|&t| self.live[t as usize])
    }

    /// Number of length-`m` words that extend to an accepted sequence.
    pub fn count_prefixes(&self, m: usize) -> u128 {
        if !self.is_live(self.start) {
            return 0;
        }
        let mut counts = vec![0u128; self.next.len()];
        counts[self.start as usize] = 1;
        for _ in 0..m {
            let mut fresh = vec![0u128; counts.len()];
            for (i, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for s in 0..2 {
                    if let Some(t) = self.live_next(i as u32, s) {
                        fresh[t as usize] = fresh[t as usize].saturating_add(c);
                    }
                }
            }
            counts = fresh;
        }
        counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
    }

    /// Whether the automaton accepts the infinite sequence `w`.
    pub fn accepts(&self, w: &EvPeriodicWord) -> bool {
        let mut state = self.start;
        for &s in w.pre().symbols() {
            match self.next[state as usize][s as usize] {
                Some(t) => state = t,
                None => return false,
            }
        }
        let mut seen = vec![false; self.next.len()];
        while !seen[state as usize] {
            seen[state as usize] = true;
            for &s in w.period().symbols() {
                match self.next[state as usize][s as usize] {
                    Some(t) => state = t,
                    None => return false,
                }
            }
        }
        true
    }

    /// Live transitions as text, one `from symbol → to` line each.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "start {}", self.start).unwrap();
        let live: Vec<String> = (0..self.next.len()).filter(|&i| self.live[i]).map(|i| i.to_string()).collect();
        writeln!(out, "live {}", live.join(" ")).unwrap();
        for i in 0..self.next.len() as u32 {
            for s in 0..2 {
                if let Some(t) = self.live_next(i, s) {
                    if self.is_live(i) {
                        writeln!(out, "{i} {s} → {t}").unwrap();
                    }
                }
            }
        }
        out
    }

    /// Strongly connected components of the live graph that carry a cycle.
    pub(crate) fn cyclic_components(&self) -> Vec<Vec<u32>> {
        tarjan(self)
            .into_iter()
            .filter(|comp| {
                comp.len() > 1 || {
                    let v = comp[0];
                    (0..2).any(|s| self.live_next(v, s) == Some(v))
                }
            })
            .collect()
    }
}

fn tarjan(m: &SurvivorAutomaton) -> Vec<Vec<u32>> {
    let n = m.next.len();
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0u32;
    for root in 0..n as u32 {
        if !m.is_live(root) || index[root as usize] != u32::MAX {
            continue;
        }
        let mut call: Vec<(u32, u8)> = vec![(root, 0)];
        index[root as usize] = counter;
        low[root as usize] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < 2 {
                let s = *edge;
                *edge += 1;
                if let Some(w) = m.live_next(v, s) {
                    if index[w as usize] == u32::MAX {
                        index[w as usize] = counter;
                        low[w as usize] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w as usize] = true;
                        call.push((w, 0));
                    } else if on_stack[w as usize] {
                        low[v as usize] = low[v as usize].min(index[w as usize]);
                    }
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent as usize] = low[parent as usize].min(low[v as usize]);
            }
            if low[v as usize] == index[v as usize] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w as usize] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort();
    comps
}

// Component structure shared by classification and entropy.
pub(crate) struct Structure {
    pub branching: Vec<Vec<u32>>,
    pub loops: Vec<Word>,
}

pub(crate) fn structure(m: &SurvivorAutomaton) -> Structure {
    let mut branching = Vec::new();
    let mut loops = Vec::new();
    for comp in m.cyclic_components() {
        let inside = |t: u32| comp.binary_search(&t).is_ok();
        let branches = comp
            .iter()
            .any(|&v| (0..2).all(|s| m.live_next(v, s).is_some_and(inside)));
        if branches {
            branching.push(comp);
            continue;
        }
        let mut label = Vec::with_capacity(comp.len());
        let mut v = comp[0];
        loop {
            let (s, t) = (0..2u8)
                .find_map(|s| m.live_next(v, s).filter(|&t| inside(t)).map(|t| (s, t)))
                .expect("component is a cycle");
            label.push(s);
            v = t;
            if v == comp[0] {
                break;
            }
        }
        loops.push(Word::from_vec_unchecked(label));
    }
    Structure { branching, loops }
}

/// Certified entropy bracket of the live subgraph.
pub fn entropy(m: &SurvivorAutomaton) -> Result<Entropy> {
    if m.live_count() == 0 {
        return Err(Error::EntropyUndefined);
    }
    perron::entropy_of(m, &structure(m).branching)
}

/// Decide the shape of the survivor set of `h`.
pub fn classify(h: &Hole) -> Result<Classification> {
    classify_automaton(&build_automaton(h)?)
}

pub fn classify_automaton(m: &SurvivorAutomaton) -> Result<Classification> {
    let st = structure(m);
    let zero_loop = m.accepts(&EvPeriodicWord::periodic(Word::from_vec_unchecked(vec![0]))?);
    let mut cycles: Vec<Word> = Vec::new();
    for label in &st.loops {
        let (root, _) = cyclic_extremes(&label.primitive_root())?;
        match root.symbols() {
            [0] => {}
            // 1^∞ codes the point 1, identified with the fixed point 0.
            [1] => {}
            _ => cycles.push(root),
        }
    }
    cycles.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    cycles.dedup();
    let kind = if !st.branching.is_empty() {
        Kind::PositiveEntropy
    } else if !cycles.is_empty() {
        Kind::CountableCycles
    } else {
        Kind::FixedOnly
    };
    let entropy = if m.live_count() == 0 {
        return Err(Error::EntropyUndefined);
    } else {
        perron::entropy_of(m, &st.branching)?
    };
    let cycles = cycles.into_iter().map(|c| EvPeriodicWord::periodic(c).expect("nonempty")).collect();
    Ok(Classification { kind, cycles, zero_loop, entropy, states: m.live_count() })
}

/// Value of the periodic point `(w)^∞` with word `w` read as an integer `n`.
fn periodic_point(n: &Natural, len: usize) -> Q {
    let den = Natural::power_of_2(len as u64) - Natural::ONE;
    Q::from_naturals(n.clone(), den)
}

fn outside(x: &Q, h: &Hole) -> bool {
    x <= h.a().as_q() || x >= h.b().as_q()
}

/// Periodic orbits of period at most `max_len` that avoid `h`, one minimal
/// rotation per orbit. The fixed point `0` is included when it survives.
pub fn enumerate_surviving_cycles(h: &Hole, max_len: usize) -> Vec<EvPeriodicWord> {
    let mut out: Vec<Word> = lyndon_words(max_len)
        .into_iter()
        .filter(|w| w.symbols() != [1])
        .filter(|w| {
            (0..w.len()).all(|k| {
                let r = w.rotate_left(k);
                let n = Natural::from_bits_desc(r.symbols().iter().map(|&b| b == 1));
                outside(&periodic_point(&n, r.len()), h)
            })
        })
        .collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out.into_iter().map(|w| EvPeriodicWord::periodic(w).expect("nonempty")).collect()
}

/// Entropy bracket of the shift `Σ_n` in which every `0` is followed by at
/// least `n` ones.
pub fn sigma_n_entropy(n: usize) -> Result<Entropy> {
    if n == 0 {
        return arg("n must be positive");
    }
    let k = n as u32;
    let mut edges: Vec<(u32, u8, u32)> = (0..k).map(|i| (i, 1, i + 1)).collect();
    edges.push((k, 1, k));
    edges.push((k, 0, 0));
    entropy(&SurvivorAutomaton::from_edges(n + 1, &edges, k)?)
}

/// Hausdorff dimension of `π(Σ_n)`.
pub fn sigma_n_dimension(n: usize) -> Result<f64> {
    Ok(sigma_n_entropy(n)?.dimension())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hole(a: &str, b: &str) -> Hole {
        Hole::new(a.parse().unwrap(), b.parse().unwrap()).unwrap()
    }

    fn ev(s: &str) -> EvPeriodicWord {
        s.parse().unwrap()
    }

    // Tail-by-tail check of a finite word followed by a periodic part.
    fn brute_accepts(w: &EvPeriodicWord, h: &Hole) -> bool {
        let mut t = w.clone();
        for _ in 0..w.pre().len() + w.period().len() {
            let x = crate::exact::pi_value(&t);
            if x > *h.a() && x < *h.b() {
                return false;
            }
            t = t.shift();
        }
        true
    }

    #[test]
    fn third_hole_keeps_the_two_cycle() {
        let h = hole("1/3", "2/3");
        let m = build_automaton(&h).unwrap();
        assert!(m.accepts(&ev("(01)")));
        assert!(m.accepts(&ev("(0)")));
        assert!(!m.accepts(&ev("011(0)")));
        assert!(!m.accepts(&ev("(001)")));
        let ratio = m.count_prefixes(16) as f64 / m.count_prefixes(8) as f64;
        assert!(ratio < 4.0, "{ratio}");
    }

    #[test]
    fn acceptance_matches_tail_check() {
        let holes = [hole("1/3", "2/3"), hole("2/5", "3/5"), hole("21/50", "29/50"), hole("1/4", "1/2"), hole("3/8", "1")];
        for h in &holes {
            let m = build_automaton(h).unwrap();
            for pre in crate::words::lyndon_words(5).iter().chain([Word::empty()].iter()) {
                for per in crate::words::lyndon_words(5) {
                    let w = EvPeriodicWord::new(pre.clone(), per).unwrap();
                    assert_eq!(m.accepts(&w), brute_accepts(&w, h), "{h} {w}");
                }
            }
        }
    }

    #[test]
    fn classification_ladder() {
        let c = classify(&hole("3/10", "7/10")).unwrap();
        assert_eq!(c.kind, Kind::FixedOnly);
        assert!(c.zero_loop);
        assert_eq!(c.entropy, Entropy::ZERO);

        let c = classify(&hole("17/50", "33/50")).unwrap();
        assert_eq!(c.kind, Kind::CountableCycles);
        assert_eq!(c.cycles, vec![ev("(01)")]);
        assert_eq!(c.entropy, Entropy::ZERO);

        let c = classify(&hole("21/50", "29/50")).unwrap();
        assert_eq!(c.kind, Kind::PositiveEntropy);
        assert!(c.entropy.lo > 0.0);
    }

    #[test]
    fn empty_hole_is_rejected() {
        let half = Rational::half();
        assert!(matches!(Hole::new(half.clone(), half), Err(Error::Argument(_))));
    }

    #[test]
    fn surviving_cycle_examples() {
        let names = |v: Vec<EvPeriodicWord>| v.iter().map(|w| w.to_string()).collect::<Vec<_>>();
        assert_eq!(names(enumerate_surviving_cycles(&hole("17/50", "33/50"), 10)), ["(0)", "(01)"]);
        assert_eq!(names(enumerate_surviving_cycles(&hole("2/5", "3/5"), 4)), ["(0)", "(01)", "(0011)"]);
        assert_eq!(names(enumerate_surviving_cycles(&hole("3/10", "7/10"), 10)), ["(0)"]);
    }

    #[test]
    fn golden_mean_entropy() {
        let e = sigma_n_entropy(1).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(e.lo <= golden.ln() + 1e-15 && golden.ln() - 1e-15 <= e.hi);
        assert!(e.hi - e.lo <= 1e-10);
        assert!(sigma_n_dimension(2).unwrap() < sigma_n_dimension(1).unwrap());
    }

    #[test]
    fn no_live_states_has_no_entropy() {
        let m = SurvivorAutomaton::from_edges(2, &[(0, 0, 1)], 0).unwrap();
        assert_eq!(entropy(&m), Err(Error::EntropyUndefined));
    }

    #[test]
    fn dump_is_stable() {
        let m = SurvivorAutomaton::from_edges(2, &[(0, 1, 1), (1, 0, 0), (1, 1, 1)], 1).unwrap();
        assert_eq!(m.dump(), "start 1\nlive 0 1\n0 1 → 1\n1 0 → 0\n1 1 → 1\n");
        let h = hole("2/5", "3/5");
        assert_eq!(build_automaton(&h).unwrap().dump(), build_automaton(&h).unwrap().dump());
    }
}

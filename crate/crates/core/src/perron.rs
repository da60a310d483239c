//! Certified Perron roots of the live subgraph.
//!
//! A floating approximation of the Perron vector is refined by power and
//! inverse iteration; the Collatz–Wielandt ratios of that vector are then
//! evaluated exactly, which brackets the root regardless of how good the
//! approximation was.

use std::collections::VecDeque;

use malachite_q::Rational as Q;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::survivor::SurvivorAutomaton;

/// Bracket `[lo, hi]` around a topological entropy, in nats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entropy {
    pub lo: f64,
    pub hi: f64,
}

impl Entropy {
    pub const ZERO: Entropy = Entropy { lo: 0.0, hi: 0.0 };

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_zero(&self) -> bool {
        self.hi == 0.0
    }

    pub fn contains(&self, h: f64) -> bool {
        self.lo <= h && h <= self.hi
    }

    /// Hausdorff dimension of the coded set: entropy over `log 2`.
    pub fn dimension(&self) -> f64 {
        self.midpoint() / std::f64::consts::LN_2
    }

    pub fn dimension_bracket(&self) -> (f64, f64) {
        (self.lo / std::f64::consts::LN_2, self.hi / std::f64::consts::LN_2)
    }
}

const DENSE_LIMIT: usize = 2000;

pub(crate) fn entropy_of(m: &SurvivorAutomaton, branching: &[Vec<u32>]) -> Result<Entropy> {
    let mut best = Entropy::ZERO;
    for comp in branching {
        let out = local_graph(m, comp);
        let e = component_entropy(&out)?;
        best.lo = best.lo.max(e.lo);
        best.hi = best.hi.max(e.hi);
    }
    Ok(best)
}

fn local_graph(m: &SurvivorAutomaton, comp: &[u32]) -> Vec<Vec<usize>> {
    comp.iter()
        .map(|&v| {
            (0..2)
                .filter_map(|s| m.live_next(v, s))
                .filter_map(|t| comp.binary_search(&t).ok())
                .collect()
        })
        .collect()
}

fn component_entropy(out: &[Vec<usize>]) -> Result<Entropy> {
    let x = perron_vector(out);
    let (rho_lo, rho_hi) = collatz_wielandt(out, &x)
        .or_else(|| collatz_wielandt(out, &power_iteration(out, 64)))
        .ok_or_else(|| Error::Budget("no positive Perron vector approximation".into()))?;
    let lo_f = f64_down(&rho_lo);
    let hi_f = f64_up(&rho_hi);
    let lo = if lo_f > 1.0 { down(lo_f.ln(), 2).max(0.0) } else { 0.0 };
    let lo = if lo > 0.0 { lo } else { two_loop_bound(out) };
    Ok(Entropy { lo, hi: up(hi_f.ln(), 2) })
}

fn f64_down(q: &Q) -> f64 {
    use malachite_base::num::conversion::traits::RoundingFrom;
    use malachite_base::rounding_modes::RoundingMode;
    f64::rounding_from(q, RoundingMode::Floor).0
}

fn f64_up(q: &Q) -> f64 {
    use malachite_base::num::conversion::traits::RoundingFrom;
    use malachite_base::rounding_modes::RoundingMode;
    f64::rounding_from(q, RoundingMode::Ceiling).0
}

// `ln` is accurate to within an ulp; a couple of extra ulps absorb that.
fn down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}

fn up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

fn power_step(out: &[Vec<usize>], x: &[f64]) -> Vec<f64> {
    let mut y: Vec<f64> = out.iter().enumerate().map(|(i, o)| x[i] + o.iter().map(|&j| x[j]).sum::<f64>()).collect();
    let max = y.iter().cloned().fold(0.0, f64::max);
    y.iter_mut().for_each(|v| *v /= max);
    y
}

fn power_iteration(out: &[Vec<usize>], steps: usize) -> Vec<f64> {
    let mut x = vec![1.0; out.len()];
    for _ in 0..steps {
        x = power_step(out, &x);
    }
    x
}

fn float_ratios(out: &[Vec<usize>], x: &[f64]) -> (f64, f64) {
    out.iter().enumerate().fold((f64::INFINITY, 0.0f64), |(lo, hi), (i, o)| {
        let r = o.iter().map(|&j| x[j]).sum::<f64>() / x[i];
        (lo.min(r), hi.max(r))
    })
}

fn perron_vector(out: &[Vec<usize>]) -> Vec<f64> {
    let n = out.len();
    let mut x = vec![1.0; n];
    let budget = (50_000_000 / (n + 1)).clamp(64, 20_000);
    let mut step = 0;
    while step < budget {
        for _ in 0..16 {
            x = power_step(out, &x);
        }
        step += 16;
        let (lo, hi) = float_ratios(out, &x);
        if hi - lo <= 1e-14 * hi {
            return x;
        }
        if step >= 256 && n <= DENSE_LIMIT {
            break;
        }
    }
    if n > DENSE_LIMIT {
        return x;
    }
    // Shifted inverse iteration; the shift tracks the Collatz–Wielandt upper
    // bound, which never drops below the root.
    for _ in 0..12 {
        let (lo, hi) = float_ratios(out, &x);
        if hi - lo <= 1e-14 * hi {
            break;
        }
        let shift = hi + (hi - lo) * 0.01 + 1e-12 * hi;
        let mut m = DMatrix::<f64>::identity(n, n) * shift;
        for (i, o) in out.iter().enumerate() {
            for &j in o {
                m[(i, j)] -= 1.0;
            }
        }
        let lu = m.lu();
        let mut v = DVector::from_vec(x.clone());
        for _ in 0..3 {
            match lu.solve(&v) {
                Some(w) if w.amax().is_finite() && w.amax() > 0.0 => v = &w / w.amax(),
                _ => return x,
            }
        }
        if !v.iter().all(|&t| t > 0.0 && t.is_finite()) {
            return x;
        }
        x = v.iter().cloned().collect();
    }
    x
}

/// Exact `min_i (Ax)_i / x_i` and `max_i (Ax)_i / x_i`.
fn collatz_wielandt(out: &[Vec<usize>], x: &[f64]) -> Option<(Q, Q)> {
    if !x.iter().all(|&t| t > 0.0 && t.is_finite()) {
        return None;
    }
    let xs: Vec<Q> = x.iter().map(|&t| Q::try_from(t).expect("finite")).collect();
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for (i, o) in out.iter().enumerate() {
        let sum: Q = o.iter().map(|&j| &xs[j]).sum();
        let r = sum / &xs[i];
        if lo.as_ref().is_none_or(|l| &r < l) {
            lo = Some(r.clone());
        }
        if hi.as_ref().is_none_or(|h| &r > h) {
            hi = Some(r);
        }
    }
    Some((lo?, hi?))
}

// Two distinct first-return loops at a branching vertex, of lengths l0 and
// l1, generate a free subsystem whose growth rate solves x^-l0 + x^-l1 = 1.
fn two_loop_bound(out: &[Vec<usize>]) -> f64 {
    let Some(v) = (0..out.len()).find(|&v| out[v].len() == 2) else {
        return 0.0;
    };
    let l0 = 1 + return_distance(out, out[v][0], v);
    let l1 = 1 + return_distance(out, out[v][1], v);
    let f = |x: f64| x.powi(-(l0 as i32)) + x.powi(-(l1 as i32)) - 1.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..100 {
        let mid = (lo + hi) / 2.0;
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    down((lo * (1.0 - 1e-12)).ln(), 2).max(0.0)
}

fn return_distance(out: &[Vec<usize>], from: usize, to: usize) -> usize {
    let mut dist = vec![usize::MAX; out.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            return dist[u];
        }
        for &w in &out[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    unreachable!("component is strongly connected")
}

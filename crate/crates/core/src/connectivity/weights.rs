//! The cut weight `w = (A *_{k-2} A) o (A *_{k-2} A)` and min-ratio cuts.

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::energy::energy;
use crate::error::{Error, Result};
use crate::function::iterated_self_conv;
use crate::group::GroupSet;
use crate::keys::{with_arith, Arith, Keyed};
use crate::IntFn;

/// Largest bit length of `T_k(A)` the weight matrix supports.
const WEIGHT_BITS: u64 = 126;

/// `a / b < c / d` for non-negative integers, without overflow.
pub(crate) fn ratio_lt(a: u128, b: u128, c: u128, d: u128) -> bool {
    match (a.checked_mul(d), c.checked_mul(b)) {
        (Some(x), Some(y)) => x < y,
        _ => BigUint::from(a) * BigUint::from(d) < BigUint::from(c) * BigUint::from(b),
    }
}

/// Pairwise weights `W[i][j] = w(a_i - a_j)` over the elements of `A`, with
/// `sum_{i,j} W[i][j] = T_k(A)`.
#[derive(Clone, Debug)]
pub struct CutWeight {
    set: GroupSet,
    k: u32,
    total: u128,
    matrix: Vec<u128>,
}

impl CutWeight {
    pub fn new(a: &GroupSet, k: u32) -> Result<Self> {
        let t = energy(a, k)?.value;
        if t.bits() > WEIGHT_BITS {
            return Err(Error::capacity("cut weight bit length", t.bits() as usize, WEIGHT_BITS as usize));
        }
        let total = u128::try_from(&t).expect("checked bit length");
        let keyed = Keyed::new(a.spec(), a.elems());
        let matrix = with_arith!(&keyed, |arith, keys| weight_matrix(arith, keys, k));
        Ok(CutWeight { set: a.clone(), k, total, matrix })
    }

    pub fn set(&self) -> &GroupSet {
        &self.set
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// `T_k(A)`.
    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn total_big(&self) -> BigUint {
        BigUint::from(self.total)
    }

    #[inline]
    pub fn w(&self, i: usize, j: usize) -> u128 {
        self.matrix[i * self.set.len() + j]
    }

    /// `e(E, F) = sum_{e in E, f in F} w(e - f)` over positions.
    pub fn e(&self, es: &[usize], fs: &[usize]) -> u128 {
        es.iter().map(|&i| fs.iter().map(|&j| self.w(i, j)).sum::<u128>()).sum()
    }

    /// The weight as a function on the whole group.
    pub fn weight_function(&self) -> IntFn {
        let g: IntFn = iterated_self_conv(&self.set, self.k - 2);
        g.correlate(&g).expect("same group")
    }

    /// Cut of `part` minimizing `e(E, F) / (|E| |F|)`; `None` when
    /// `|part| < 2`. Exact (all `2^(n-1) - 1` cuts) when `|part| <= exact_cap`.
    pub fn min_ratio_cut(&self, part: &[usize], exact_cap: usize, rng: &mut ChaCha8Rng) -> Option<Cut> {
        if part.len() < 2 {
            return None;
        }
        Some(if part.len() <= exact_cap {
            self.exact_cut(part)
        } else {
            self.heuristic_cut(part, rng)
        })
    }

    fn local(&self, part: &[usize]) -> Vec<u128> {
        let n = part.len();
        let mut w = Vec::with_capacity(n * n);
        for &i in part {
            w.extend(part.iter().map(|&j| self.w(i, j)));
        }
        w
    }

    fn exact_cut(&self, part: &[usize]) -> Cut {
        let n = part.len();
        let w = self.local(part);
        let mut state = CutState::all_in_e(&w, n);
        let mut best: Option<(u128, usize, Vec<bool>)> = None;
        for g in 1u64..(1u64 << (n - 1)) {
            let x = g.trailing_zeros() as usize + 1;
            state.flip(&w, x);
            let ef = (state.ne * (n - state.ne)) as u128;
            let better = match &best {
                None => true,
                Some((be, bef, _)) => ratio_lt(state.e, ef, *be, *bef as u128),
            };
            if better {
                best = Some((state.e, ef as usize, state.in_f.clone()));
            }
        }
        let (weight, _, in_f) = best.expect("n >= 2");
        Cut::from_mask(part, &in_f, weight, true)
    }

    fn heuristic_cut(&self, part: &[usize], rng: &mut ChaCha8Rng) -> Cut {
        let n = part.len();
        let w = self.local(part);
        let mut best: Option<(u128, u128, Vec<bool>)> = None;
        let mut consider = |s: &CutState| {
            let ef = (s.ne * (n - s.ne)) as u128;
            if best.as_ref().is_none_or(|(be, bef, _)| ratio_lt(s.e, ef, *be, *bef)) {
                best = Some((s.e, ef, s.in_f.clone()));
            }
        };
        for x in 0..n {
            let mut s = CutState::all_in_e(&w, n);
            s.flip(&w, x);
            consider(&s);
        }
        let restarts = 8 + n / 4;
        for _ in 0..restarts {
            let mut s = CutState::all_in_e(&w, n);
            for x in 0..n {
                if rng.gen_bool(0.5) {
                    s.flip(&w, x);
                }
            }
            if s.ne == 0 || s.ne == n {
                s.flip(&w, rng.gen_range(0..n));
            }
            s.descend(&w, 4 * n);
            consider(&s);
        }
        let (weight, _, in_f) = best.expect("n >= 2");
        Cut::from_mask(part, &in_f, weight, false)
    }
}

fn weight_matrix<A: Arith>(arith: &A, keys: &[A::K], k: u32) -> Vec<u128> {
    let mut g: FxHashMap<A::K, u128> = keys.iter().map(|x| (x.clone(), 1)).collect();
    for _ in 2..k {
        let mut next: FxHashMap<A::K, u128> = FxHashMap::default();
        for (s, v) in &g {
            for x in keys {
                *next.entry(arith.add(s, x)).or_insert(0) += v;
            }
        }
        g = next;
    }
    let support: Vec<(&A::K, &u128)> = g.iter().collect();
    let mut memo: FxHashMap<A::K, u128> = FxHashMap::default();
    let m = keys.len();
    let mut out = vec![0u128; m * m];
    for i in 0..m {
        for j in 0..m {
            let d = arith.add(&keys[i], &arith.neg(&keys[j]));
            let v = *memo.entry(d.clone()).or_insert_with(|| {
                // w(d) = sum_s g(s) g(s - d)
                let nd = arith.neg(&d);
                support
                    .iter()
                    .map(|(s, gv)| g.get(&arith.add(s, &nd)).map_or(0, |h| **gv * h))
                    .sum()
            });
            out[i * m + j] = v;
        }
    }
    out
}

/// Incremental state for cuts of one part: `e`, and each element's weight
/// towards the two sides.
struct CutState {
    in_f: Vec<bool>,
    ne: usize,
    e: u128,
    to_e: Vec<u128>,
    to_f: Vec<u128>,
}

impl CutState {
    fn all_in_e(w: &[u128], n: usize) -> Self {
        let to_e = (0..n).map(|x| w[x * n..(x + 1) * n].iter().sum()).collect();
        CutState { in_f: vec![false; n], ne: n, e: 0, to_e, to_f: vec![0; n] }
    }

    fn delta_parts(&self, w: &[u128], n: usize, x: usize) -> (u128, u128) {
        let wxx = w[x * n + x];
        if self.in_f[x] {
            (self.to_e[x], self.to_f[x] - wxx)
        } else {
            (self.to_f[x], self.to_e[x] - wxx)
        }
    }

    fn flip(&mut self, w: &[u128], x: usize) {
        let n = self.in_f.len();
        let (lose, gain) = self.delta_parts(w, n, x);
        self.e = self.e - lose + gain;
        let row = &w[x * n..(x + 1) * n];
        if self.in_f[x] {
            for y in 0..n {
                self.to_f[y] -= row[y];
                self.to_e[y] += row[y];
            }
            self.ne += 1;
        } else {
            for y in 0..n {
                self.to_e[y] -= row[y];
                self.to_f[y] += row[y];
            }
            self.ne -= 1;
        }
        self.in_f[x] = !self.in_f[x];
    }

    /// Best-improvement single moves until no move lowers the ratio.
    fn descend(&mut self, w: &[u128], max_moves: usize) {
        let n = self.in_f.len();
        for _ in 0..max_moves {
            let cur_ef = (self.ne * (n - self.ne)) as u128;
            let mut best: Option<(usize, u128, u128)> = None;
            for x in 0..n {
                let ne = if self.in_f[x] { self.ne + 1 } else { self.ne - 1 };
                if ne == 0 || ne == n {
                    continue;
                }
                let (lose, gain) = self.delta_parts(w, n, x);
                let e = self.e - lose + gain;
                let ef = (ne * (n - ne)) as u128;
                let (be, bef) = best.map_or((self.e, cur_ef), |(_, a, b)| (a, b));
                if ratio_lt(e, ef, be, bef) {
                    best = Some((x, e, ef));
                }
            }
            match best {
                Some((x, _, _)) => self.flip(w, x),
                None => return,
            }
        }
    }
}

/// A bipartition `E | F` of a part, by positions in the ambient set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub e_side: Vec<usize>,
    pub f_side: Vec<usize>,
    /// `e(E, F)`.
    pub weight: u128,
    /// Found by exhaustive search.
    pub exact: bool,
}

impl Cut {
    fn from_mask(part: &[usize], in_f: &[bool], weight: u128, exact: bool) -> Cut {
        let (mut e_side, mut f_side) = (Vec::new(), Vec::new());
        for (x, &p) in part.iter().enumerate() {
            if in_f[x] {
                f_side.push(p);
            } else {
                e_side.push(p);
            }
        }
        Cut { e_side, f_side, weight, exact }
    }
}

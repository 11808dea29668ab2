//! Exhaustive profile enumeration over scaled integers.
//!
//! Every cost share `c_e/j` and potential term `H_j·c_e` (with `j ≤ k`) is an
//! integer once multiplied by `S = D·lcm(1..=k)`, where `D` clears all cost
//! denominators. The kernel works on those integers and converts back to
//! [`EpsCost`] at the boundary, so results are exact.

use std::ops::{Add, AddAssign, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{harmonic, lcm_upto, EpsCost, Rational};
use crate::error::{Error, Result};
use crate::game::{ensure_valid, Game};
use crate::path::{enumerate_simple_paths, Path};
use crate::profile::StrategyProfile;

/// Profiles per work unit in parallel scans. Fixed so that chunking never
/// depends on the thread count.
const CHUNK: u128 = 2048;

/// Largest absolute scaled total the kernel accepts.
const MAGNITUDE_LIMIT: u32 = 100;

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Per-player cap on simple paths.
    pub max_paths: usize,
    /// Cap on the number of strategy profiles.
    pub max_profiles: u128,
    /// Split scans across the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_paths: crate::path::DEFAULT_PATH_CAP, max_profiles: 100_000_000, parallel: true }
    }
}

impl Limits {
    pub fn sequential(self) -> Self {
        Limits { parallel: false, ..self }
    }
}

/// `a + b·ε` scaled by the kernel's factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Fx {
    pub a: i128,
    pub b: i128,
}

impl Add for Fx {
    type Output = Fx;
    fn add(self, rhs: Fx) -> Fx {
        Fx { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Add<&Fx> for Fx {
    type Output = Fx;
    fn add(self, rhs: &Fx) -> Fx {
        self + *rhs
    }
}

impl Sub for Fx {
    type Output = Fx;
    fn sub(self, rhs: Fx) -> Fx {
        Fx { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl AddAssign for Fx {
    fn add_assign(&mut self, rhs: Fx) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl SubAssign for Fx {
    fn sub_assign(&mut self, rhs: Fx) {
        self.a -= rhs.a;
        self.b -= rhs.b;
    }
}

/// Scaled share and potential rows of one cost using `i128` only. Slot 0
/// of the share row holds the full scaled cost. `None` on overflow.
fn scaled_rows_small(cost: &EpsCost, k: usize, scale: i128) -> Option<(Vec<Fx>, Vec<Fx>)> {
    let base = |x: &Rational| -> Option<i128> {
        let n = x.numer().to_i128()?;
        let d = x.denom().to_i128()?;
        n.checked_mul(scale / d)
    };
    let (a, b) = (base(&cost.a)?, base(&cost.b)?);
    let mut sh = vec![Fx { a, b }];
    let mut po = vec![Fx::default()];
    let (mut pa, mut pb) = (0i128, 0i128);
    for j in 1..=k as i128 {
        sh.push(Fx { a: a / j, b: b / j });
        pa = pa.checked_add(a / j)?;
        pb = pb.checked_add(b / j)?;
        po.push(Fx { a: pa, b: pb });
    }
    Some((sh, po))
}

pub(crate) struct Kernel {
    k: usize,
    vertex_count: usize,
    scale: BigInt,
    cost: Vec<Fx>,
    /// `share[e][j] = c_e·S/j`, index 0 unused.
    share: Vec<Vec<Fx>>,
    /// `pot[e][j] = H_j·c_e·S`.
    pot: Vec<Vec<Fx>>,
    paths: Vec<Vec<Path>>,
    adj: Vec<Vec<(usize, usize)>>,
    terminals: Vec<(usize, usize)>,
    radix: Vec<u128>,
    total: u128,
}

impl Kernel {
    pub fn new(game: &Game, limits: &Limits) -> Result<Kernel> {
        ensure_valid(game)?;
        let k = game.k();
        let mut paths = Vec::with_capacity(k);
        for i in 0..k {
            paths.push(enumerate_simple_paths(game, i, limits.max_paths)?);
        }
        let mut total: u128 = 1;
        for ps in &paths {
            total = total.saturating_mul(ps.len() as u128);
            if total > limits.max_profiles {
                return Err(Error::Explosion {
                    what: "strategy profiles".into(),
                    limit: limits.max_profiles,
                    count: total,
                });
            }
        }
        let radix = paths.iter().map(|p| p.len() as u128).collect();

        let denominators = game
            .edges
            .iter()
            .flat_map(|e| [e.cost.a.denom().clone(), e.cost.b.denom().clone()])
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let scale = denominators * lcm_upto(k.max(1));
        let scaled = |x: &Rational, mult: &Rational| -> Result<i128> {
            let v = x * mult * Rational::from_integer(scale.clone());
            debug_assert!(v.is_integer());
            v.to_integer().to_i128().ok_or_else(|| Error::Overflow(format!("scaled value of {x} does not fit")))
        };
        let mut cost = Vec::new();
        let mut share = Vec::new();
        let mut pot = Vec::new();
        let mut magnitude = BigInt::from(0);
        let small_scale = scale.to_i128();
        for e in &game.edges {
            let (sh, po) = match small_scale.and_then(|s| scaled_rows_small(&e.cost, k, s)) {
                Some(rows) => rows,
                None => {
                    let mut sh = vec![Fx::default()];
                    let mut po = vec![Fx::default()];
                    for j in 1..=k {
                        let inv = Rational::new(BigInt::one(), BigInt::from(j));
                        let h = harmonic(j);
                        sh.push(Fx { a: scaled(&e.cost.a, &inv)?, b: scaled(&e.cost.b, &inv)? });
                        po.push(Fx { a: scaled(&e.cost.a, &h)?, b: scaled(&e.cost.b, &h)? });
                    }
                    let one = Rational::one();
                    sh[0] = Fx { a: scaled(&e.cost.a, &one)?, b: scaled(&e.cost.b, &one)? };
                    (sh, po)
                }
            };
            cost.push(sh[0]);
            let mut sh = sh;
            sh[0] = Fx::default();
            if let Some(top) = po.last() {
                magnitude += BigInt::from(top.a).abs() + BigInt::from(top.b).abs();
            }
            share.push(sh);
            pot.push(po);
        }
        if magnitude.bits() > u64::from(MAGNITUDE_LIMIT) {
            return Err(Error::Overflow(format!(
                "scaled cost total needs {} bits (limit {MAGNITUDE_LIMIT})",
                magnitude.bits()
            )));
        }
        Ok(Kernel {
            k,
            vertex_count: game.vertex_count,
            scale,
            cost,
            share,
            pot,
            paths,
            adj: game.adjacency(),
            terminals: game.players.iter().map(|p| (p.source, p.target)).collect(),
            radix,
            total,
        })
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn paths(&self, player: usize) -> &[Path] {
        &self.paths[player]
    }

    pub fn to_eps(&self, x: Fx) -> EpsCost {
        let s = &self.scale;
        EpsCost::new(Rational::new(BigInt::from(x.a), s.clone()), Rational::new(BigInt::from(x.b), s.clone()))
    }

    pub fn decode(&self, mut index: u128) -> Vec<usize> {
        let mut digits = vec![0usize; self.k];
        for i in (0..self.k).rev() {
            let r = self.radix[i];
            digits[i] = (index % r) as usize;
            index /= r;
        }
        digits
    }

    pub fn profile(&self, index: u128) -> StrategyProfile {
        let digits = self.decode(index);
        StrategyProfile::new(digits.iter().enumerate().map(|(i, &d)| self.paths[i][d].clone()).collect())
    }

    pub fn cursor(&self, start: u128) -> Cursor<'_> {
        let mut c = Cursor {
            kernel: self,
            index: start,
            digits: vec![0; self.k],
            loads: vec![0; self.cost.len()],
            cost: Fx::default(),
            pot: Fx::default(),
            mark: vec![false; self.cost.len()],
            dist: vec![None; self.vertex_count],
            done: vec![false; self.vertex_count],
        };
        let digits = self.decode(start.min(self.total.saturating_sub(1)));
        for (i, &d) in digits.iter().enumerate() {
            c.place(i, d);
        }
        c.digits = digits;
        c
    }

    /// Runs `scan` over consecutive ranges and returns the partial results in
    /// range order.
    pub fn map_ranges<R, F>(&self, parallel: bool, scan: F) -> Vec<R>
    where
        R: Send,
        F: Fn(&Kernel, u128, u128) -> R + Sync,
    {
        let chunks: Vec<(u128, u128)> =
            (0..self.total.div_ceil(CHUNK)).map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(self.total))).collect();
        if parallel && chunks.len() > 1 {
            chunks.into_par_iter().map(|(s, e)| scan(self, s, e)).collect()
        } else {
            chunks.into_iter().map(|(s, e)| scan(self, s, e)).collect()
        }
    }
}

/// Incrementally maintained state of one profile during a scan.
pub(crate) struct Cursor<'k> {
    kernel: &'k Kernel,
    index: u128,
    digits: Vec<usize>,
    loads: Vec<usize>,
    cost: Fx,
    pot: Fx,
    mark: Vec<bool>,
    dist: Vec<Option<Fx>>,
    done: Vec<bool>,
}

impl<'k> Cursor<'k> {
    fn place(&mut self, player: usize, path: usize) {
        let kn = self.kernel;
        for &e in kn.paths[player][path].edges() {
            let l = self.loads[e];
            self.pot += kn.pot[e][l + 1] - kn.pot[e][l];
            if l == 0 {
                self.cost += kn.cost[e];
            }
            self.loads[e] = l + 1;
        }
    }

    fn remove(&mut self, player: usize, path: usize) {
        let kn = self.kernel;
        for &e in kn.paths[player][path].edges() {
            let l = self.loads[e];
            self.pot -= kn.pot[e][l] - kn.pot[e][l - 1];
            if l == 1 {
                self.cost -= kn.cost[e];
            }
            self.loads[e] = l - 1;
        }
    }

    pub fn index(&self) -> u128 {
        self.index
    }

    pub fn social_cost(&self) -> Fx {
        self.cost
    }

    pub fn potential(&self) -> Fx {
        self.pot
    }

    /// Moves to the next profile in canonical order.
    pub fn advance(&mut self) {
        self.index += 1;
        let kn = self.kernel;
        for i in (0..kn.k).rev() {
            let old = self.digits[i];
            self.remove(i, old);
            if old + 1 < kn.paths[i].len() {
                self.digits[i] = old + 1;
                self.place(i, old + 1);
                return;
            }
            self.digits[i] = 0;
            self.place(i, 0);
        }
    }

    pub fn player_cost(&self, i: usize) -> Fx {
        let kn = self.kernel;
        kn.paths[i][self.digits[i]].edges().iter().fold(Fx::default(), |acc, &e| acc + kn.share[e][self.loads[e]])
    }

    /// Whether some path gives player `i` a cost strictly below `current`.
    /// Dijkstra on residual shares with an early cutoff at `current`.
    fn can_improve(&mut self, i: usize, current: Fx) -> bool {
        let kn = self.kernel;
        let (s, t) = kn.terminals[i];
        if s == t {
            return false;
        }
        let own = kn.paths[i][self.digits[i]].edges();
        for &e in own {
            self.mark[e] = true;
        }
        self.dist.iter_mut().for_each(|d| *d = None);
        self.done.iter_mut().for_each(|d| *d = false);
        self.dist[s] = Some(Fx::default());
        let improves = loop {
            let mut pick: Option<usize> = None;
            for x in 0..kn.vertex_count {
                if !self.done[x] && self.dist[x].is_some() && pick.is_none_or(|p| self.dist[x] < self.dist[p]) {
                    pick = Some(x);
                }
            }
            let Some(x) = pick else { break false };
            let dx = self.dist[x].unwrap();
            if dx >= current {
                break false;
            }
            if x == t {
                break true;
            }
            self.done[x] = true;
            for &(e, y) in &kn.adj[x] {
                if self.done[y] {
                    continue;
                }
                let others = self.loads[e] - usize::from(self.mark[e]);
                let through = dx + kn.share[e][others + 1];
                if self.dist[y].is_none_or(|d| through < d) {
                    self.dist[y] = Some(through);
                }
            }
        };
        for &e in own {
            self.mark[e] = false;
        }
        improves
    }

    pub fn is_nash(&mut self) -> bool {
        (0..self.kernel.k).all(|i| {
            let cur = self.player_cost(i);
            !self.can_improve(i, cur)
        })
    }
}

/// Partial result of a scan for minima and equilibria.
#[derive(Clone, Debug, Default)]
pub(crate) struct ScanSummary {
    pub opt: Option<(Fx, Vec<u128>)>,
    pub potmin: Option<(Fx, Vec<u128>)>,
    /// `(index, social cost, potential)` of every Nash equilibrium.
    pub nash: Vec<(u128, Fx, Fx)>,
}

fn push_min(slot: &mut Option<(Fx, Vec<u128>)>, value: Fx, index: u128) {
    match slot {
        Some((best, list)) if value == *best => list.push(index),
        Some((best, _)) if value > *best => {}
        _ => *slot = Some((value, vec![index])),
    }
}

fn merge_min(slot: &mut Option<(Fx, Vec<u128>)>, other: Option<(Fx, Vec<u128>)>) {
    let Some((value, list)) = other else { return };
    match slot {
        Some((best, mine)) if value == *best => mine.extend(list),
        Some((best, _)) if value > *best => {}
        _ => *slot = Some((value, list)),
    }
}

impl ScanSummary {
    pub fn merge(parts: Vec<ScanSummary>) -> ScanSummary {
        let mut out = ScanSummary::default();
        for part in parts {
            merge_min(&mut out.opt, part.opt);
            merge_min(&mut out.potmin, part.potmin);
            out.nash.extend(part.nash);
        }
        out
    }
}

pub(crate) fn scan_summary(kernel: &Kernel, parallel: bool) -> ScanSummary {
    let parts = kernel.map_ranges(parallel, |kn, start, end| {
        let mut part = ScanSummary::default();
        let mut cur = kn.cursor(start);
        for idx in start..end {
            if idx > start {
                cur.advance();
            }
            debug_assert_eq!(cur.index(), idx);
            let cost = cur.social_cost();
            let pot = cur.potential();
            push_min(&mut part.opt, cost, idx);
            push_min(&mut part.potmin, pot, idx);
            if cur.is_nash() {
                part.nash.push((idx, cost, pot));
            }
        }
        part
    });
    ScanSummary::merge(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::profile::{potential, social_cost};

    fn two_parallel(a: i64, b: i64) -> Game {
        let mut g = Game::new(2, false);
        g.add_edge(0, 1, EpsCost::from_ints(a, 0));
        g.add_edge(0, 1, EpsCost::from_ints(b, 0));
        g.add_player(0, 1);
        g.add_player(0, 1);
        g
    }

    #[test]
    fn scaled_values_round_trip() {
        let mut g = two_parallel(1, 3);
        g.edges[0].cost = EpsCost::new(ratio(2, 3), ratio(1, 5));
        let kn = Kernel::new(&g, &Limits::default()).unwrap();
        for idx in 0..kn.total() {
            let cur = kn.cursor(idx);
            let prof = kn.profile(idx);
            assert_eq!(kn.to_eps(cur.social_cost()), social_cost(&g, &prof));
            assert_eq!(kn.to_eps(cur.potential()), potential(&g, &prof));
        }
    }

    #[test]
    fn advance_matches_fresh_cursor() {
        let g = two_parallel(1, 3);
        let kn = Kernel::new(&g, &Limits::default()).unwrap();
        let mut cur = kn.cursor(0);
        for idx in 1..kn.total() {
            cur.advance();
            let fresh = kn.cursor(idx);
            assert_eq!(cur.social_cost(), fresh.social_cost());
            assert_eq!(cur.potential(), fresh.potential());
            assert_eq!(cur.index(), idx);
        }
    }

    #[test]
    fn pooled_profiles_are_the_equilibria() {
        let g = two_parallel(1, 1);
        let kn = Kernel::new(&g, &Limits::default()).unwrap();
        let s = scan_summary(&kn, false);
        let idx: Vec<u128> = s.nash.iter().map(|n| n.0).collect();
        assert_eq!(idx, vec![0, 3]);
    }

    #[test]
    fn profile_budget_is_enforced() {
        let g = two_parallel(1, 1);
        let limits = Limits { max_profiles: 3, ..Limits::default() };
        assert!(matches!(Kernel::new(&g, &limits), Err(Error::Explosion { count: 4, .. })));
    }
}

//! Tabels and the straightening rewrite system on pairs of rows.
//!
//! A *tabel* is a finite family of labeled chains, kept sorted descending in
//! the row order.  On an ordered pair of rows three kinds of *relations* can
//! hold — diagonal, column-wise and anti-diagonal — each witnessed by
//! positions `(h,k)` within controller bounds that depend on the row lengths
//! and on the correction bit delta.  A pair with no relation is *standard*;
//! a tabel is standard when every pair of rows is.  Every relation can be
//! removed by a block swap between the two rows, and the rewrite system
//! terminates in the unique standard tabel with the same shape and entry
//! multiset.
//!
//! Positions in the public API (`Relation`, the `transform_*` witnesses) are
//! 1-based, matching the way the relations are defined; internal code is
//! 0-based.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chains::{
    is_chain, Ambient, Chain, Interval, Label, LabeledChain, RawLabeledChain,
};
use crate::error::{Error, Result};

/// Shape of a tabel: the labels and lengths of its rows, in row order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape(pub Vec<(Label, usize)>);

impl Shape {
    pub fn row_lengths(&self) -> Vec<usize> {
        self.0.iter().map(|&(_, l)| l).collect()
    }

    /// Total number of cells.
    pub fn cells(&self) -> usize {
        self.0.iter().map(|&(_, l)| l).sum()
    }
}

/// Controller bounds for the three relations on an ordered pair of rows.
///
/// With `r`, `s` the two row lengths, the bounds are
///
/// | case    | diagonal    | column-wise | anti-diagonal |
/// |---------|-------------|-------------|---------------|
/// | `r < s` | `r - delta` | `r - delta` | `r - 1`       |
/// | `r > s` | `s - 1`     | `s`         | `s - delta`   |
/// | `r = s` | `s - 1`     | `s - delta` | `s - 1`       |
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairControllers {
    pub delta: u8,
    pub diagonal: usize,
    pub column_wise: usize,
    pub anti_diagonal: usize,
}

/// A relation witness on an ordered pair of rows `(a, b)`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `a_h > b_k` with `h < k`, `a_h` outside `interval(b)`.
    Diagonal { h: usize, k: usize },
    /// `a_h > b_h`, `a_h` outside `interval(b)`; only sought on
    /// diagonally sorted pairs.
    ColumnWise { h: usize },
    /// `b_h > a_k` with `h < k`, `b_h` outside `interval(a)`; only sought on
    /// diagonally and column-wise sorted pairs.
    AntiDiagonal { h: usize, k: usize },
}

// ---------------------------------------------------------------------------
// pair engine (0-based)
// ---------------------------------------------------------------------------

/// Validity context for a pair of rows: chains constrained by labels, or by
/// the ambient interval alone (the unlabeled variant, which forces delta=0).
#[derive(Clone, Copy)]
enum Bounds<'a> {
    Labeled(&'a LabeledChain, &'a LabeledChain),
    Unlabeled(Ambient),
}

impl Bounds<'_> {
    fn delta(&self, a: &[u32], b: &[u32]) -> u8 {
        match self {
            Bounds::Unlabeled(_) => 0,
            Bounds::Labeled(p, q) => {
                let n = p.ambient().n();
                let (r, s) = (a.len(), b.len());
                let hit = if r <= s {
                    a[r - 1] == n && q.label().hi() == n - 1
                } else {
                    b[s - 1] == n && p.label().hi() == n - 1
                };
                hit as u8
            }
        }
    }

    fn controllers(&self, a: &[u32], b: &[u32]) -> PairControllers {
        let delta = self.delta(a, b);
        let d = delta as usize;
        let (r, s) = (a.len(), b.len());
        let (diagonal, column_wise, anti_diagonal) = match r.cmp(&s) {
            Ordering::Less => (r - d, r - d, r - 1),
            Ordering::Greater => (s - 1, s, s - d),
            Ordering::Equal => (s - 1, s - d, s - 1),
        };
        PairControllers { delta, diagonal, column_wise, anti_diagonal }
    }

    /// Panics when a block swap breaks a chain, its window, or the row
    /// order; every transform is supposed to preserve all three.
    fn validate_step(&self, a: &[u32], b: &[u32]) {
        assert!(is_chain(a) && is_chain(b), "block swap produced a non-chain");
        match self {
            Bounds::Unlabeled(amb) => {
                assert!(a[0] >= 1 && *a.last().unwrap() <= amb.n());
                assert!(b[0] >= 1 && *b.last().unwrap() <= amb.n());
            }
            Bounds::Labeled(p, q) => {
                let (sig, gam) = (p.label(), q.label());
                assert!(a[0] >= sig.lo() && *a.last().unwrap() <= sig.hi());
                assert!(b[0] >= gam.lo() && *b.last().unwrap() <= gam.hi());
                let amb = p.ambient();
                let label_cmp = gam.rank(amb).cmp(&sig.rank(amb));
                let order = label_cmp.then_with(|| crate::chains::cmp_chain_monomials(a, b));
                assert_ne!(order, Ordering::Less, "block swap broke the row order");
            }
        }
    }

    /// Like `validate_step` but quiet; used to probe arbitrary witnesses.
    fn step_is_valid(&self, a: &[u32], b: &[u32]) -> bool {
        if !(is_chain(a) && is_chain(b)) {
            return false;
        }
        match self {
            Bounds::Unlabeled(amb) => {
                a[0] >= 1
                    && *a.last().unwrap() <= amb.n()
                    && b[0] >= 1
                    && *b.last().unwrap() <= amb.n()
            }
            Bounds::Labeled(p, q) => {
                let (sig, gam) = (p.label(), q.label());
                if a[0] < sig.lo() || *a.last().unwrap() > sig.hi() {
                    return false;
                }
                if b[0] < gam.lo() || *b.last().unwrap() > gam.hi() {
                    return false;
                }
                let amb = p.ambient();
                let label_cmp = gam.rank(amb).cmp(&sig.rank(amb));
                label_cmp.then_with(|| crate::chains::cmp_chain_monomials(a, b))
                    != Ordering::Less
            }
        }
    }
}

/// Canonical diagonal witness: the pair `(h,k)` whose monomial `x_h x_k` is
/// smallest in the term order, i.e. largest `h`, then largest `k`.
fn diag_witness(a: &[u32], b: &[u32], bound: usize) -> Option<(usize, usize)> {
    let ib = Interval::of(b);
    let mut best = None;
    for h in 0..bound.min(a.len()) {
        if ib.contains(a[h]) {
            continue;
        }
        if let Some(k) = (h + 1..b.len()).rev().find(|&k| b[k] < a[h]) {
            best = Some((h, k));
        }
    }
    best
}

/// Canonical column-wise witness: the largest violating position.
fn col_witness(a: &[u32], b: &[u32], bound: usize) -> Option<usize> {
    let ib = Interval::of(b);
    (0..bound.min(a.len()).min(b.len()))
        .rev()
        .find(|&h| a[h] > b[h] && !ib.contains(a[h]))
}

/// Canonical anti-diagonal witness: the smallest violating `h`, then the
/// largest `k` for that `h`.  Taking `h` minimal is what keeps the block swap
/// from reintroducing a column-wise violation when the swapped runs overlap
/// in a column; `k` maximal keeps the rebuilt rows valid chains.
fn anti_witness(a: &[u32], b: &[u32], bound: usize) -> Option<(usize, usize)> {
    let ia = Interval::of(a);
    for h in 0..bound.min(b.len()) {
        if ia.contains(b[h]) {
            continue;
        }
        if let Some(k) = (h + 1..a.len()).rev().find(|&k| a[k] < b[h]) {
            return Some((h, k));
        }
    }
    None
}

/// Block swap for a diagonal witness: with `v` the maximal run length such
/// that `a[h-i] > b[k-i]` for all `i <= v`, the blocks `a[h-v..=h]` and
/// `b[k-v..=k]` trade places.
fn diag_step(a: &[u32], b: &[u32], h: usize, k: usize) -> (Vec<u32>, Vec<u32>) {
    let mut v = 0;
    while v < h && a[h - v - 1] > b[k - v - 1] {
        v += 1;
    }
    let na = [&a[..h - v], &b[k - v..=k], &a[h + 1..]].concat();
    let nb = [&b[..k - v], &a[h - v..=h], &b[k + 1..]].concat();
    (na, nb)
}

/// Block swap at equal positions for a column-wise witness.
fn col_step(a: &[u32], b: &[u32], h: usize) -> (Vec<u32>, Vec<u32>) {
    let mut v = 0;
    while v < h && a[h - v - 1] > b[h - v - 1] {
        v += 1;
    }
    let na = [&a[..h - v], &b[h - v..=h], &a[h + 1..]].concat();
    let nb = [&b[..h - v], &a[h - v..=h], &b[h + 1..]].concat();
    (na, nb)
}

/// Block swap for an anti-diagonal witness (roles of the rows mirrored).
fn anti_step(a: &[u32], b: &[u32], h: usize, k: usize) -> (Vec<u32>, Vec<u32>) {
    let mut v = 0;
    while v < h && b[h - v - 1] > a[k - v - 1] {
        v += 1;
    }
    let na = [&a[..k - v], &b[h - v..=h], &a[k + 1..]].concat();
    let nb = [&b[..h - v], &a[k - v..=k], &b[h + 1..]].concat();
    (na, nb)
}

fn run_diag_phase(bounds: &Bounds, a: &mut Vec<u32>, b: &mut Vec<u32>) {
    let mut prev: Option<(usize, usize)> = None;
    while let Some((h, k)) = diag_witness(a, b, bounds.controllers(a, b).diagonal) {
        if let Some(p) = prev {
            assert!((h, k) < p, "diagonal witness measure failed to decrease");
        }
        prev = Some((h, k));
        let (na, nb) = diag_step(a, b, h, k);
        bounds.validate_step(&na, &nb);
        *a = na;
        *b = nb;
    }
}

fn run_col_phase(bounds: &Bounds, a: &mut Vec<u32>, b: &mut Vec<u32>) {
    let mut prev: Option<usize> = None;
    while let Some(h) = col_witness(a, b, bounds.controllers(a, b).column_wise) {
        if let Some(p) = prev {
            assert!(h < p, "column-wise witness measure failed to decrease");
        }
        prev = Some(h);
        let (na, nb) = col_step(a, b, h);
        bounds.validate_step(&na, &nb);
        *a = na;
        *b = nb;
        debug_assert!(
            diag_witness(a, b, bounds.controllers(a, b).diagonal).is_none(),
            "column-wise step broke diagonal sortedness"
        );
    }
}

fn run_anti_phase(bounds: &Bounds, a: &mut Vec<u32>, b: &mut Vec<u32>) {
    // every anti-diagonal swap moves strictly larger entries into the first
    // row, so the first-row entry sum is a termination measure
    let mut prev: u64 = a.iter().map(|&x| u64::from(x)).sum();
    while let Some((h, k)) = anti_witness(a, b, bounds.controllers(a, b).anti_diagonal) {
        let (na, nb) = anti_step(a, b, h, k);
        bounds.validate_step(&na, &nb);
        *a = na;
        *b = nb;
        let sum: u64 = a.iter().map(|&x| u64::from(x)).sum();
        assert!(sum > prev, "anti-diagonal witness measure failed to increase");
        prev = sum;
        debug_assert!(
            {
                let c = bounds.controllers(a, b);
                diag_witness(a, b, c.diagonal).is_none()
                    && col_witness(a, b, c.column_wise).is_none()
            },
            "anti-diagonal step broke earlier sortedness"
        );
    }
}

fn reduce_entries(bounds: &Bounds, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    run_diag_phase(bounds, &mut a, &mut b);
    run_col_phase(bounds, &mut a, &mut b);
    run_anti_phase(bounds, &mut a, &mut b);
    (a, b)
}

fn standard_entries(bounds: &Bounds, a: &[u32], b: &[u32]) -> bool {
    let c = bounds.controllers(a, b);
    let ib = Interval::of(b);
    // first violating position of each sorting condition, if any, must open a
    // tail lying inside the other row's interval set
    let cond1 = match (0..c.diagonal).find(|&h| a[h] > b[h + 1]) {
        None => true,
        Some(h) => (h..c.diagonal).all(|j| ib.contains(a[j])),
    };
    let cond2 = match (0..c.column_wise).find(|&h| a[h] > b[h]) {
        None => true,
        Some(h) => (h..c.column_wise).all(|j| ib.contains(a[j])),
    };
    let ia = Interval::of(a);
    let cond3 = match (0..c.anti_diagonal).find(|&h| b[h] > a[h + 1]) {
        None => true,
        Some(h) => (h..c.anti_diagonal).all(|j| ia.contains(b[j])),
    };
    cond1 && cond2 && cond3
}

fn relation_entries(bounds: &Bounds, a: &[u32], b: &[u32]) -> Option<Relation> {
    let c = bounds.controllers(a, b);
    if let Some((h, k)) = diag_witness(a, b, c.diagonal) {
        return Some(Relation::Diagonal { h: h + 1, k: k + 1 });
    }
    if let Some(h) = col_witness(a, b, c.column_wise) {
        return Some(Relation::ColumnWise { h: h + 1 });
    }
    if let Some((h, k)) = anti_witness(a, b, c.anti_diagonal) {
        return Some(Relation::AntiDiagonal { h: h + 1, k: k + 1 });
    }
    None
}

// ---------------------------------------------------------------------------
// public pair operations
// ---------------------------------------------------------------------------

fn labeled_bounds<'a>(p: &'a LabeledChain, q: &'a LabeledChain) -> Bounds<'a> {
    assert_eq!(p.ambient(), q.ambient(), "pair across different ambients");
    debug_assert!(p.cmp_c(q) != Ordering::Less, "pair must be given in row order");
    Bounds::Labeled(p, q)
}

/// The correction bit: 1 exactly when the shorter row ends at `n` while the
/// longer row's label closes at `n - 1`.
pub fn delta(p: &LabeledChain, q: &LabeledChain) -> u8 {
    labeled_bounds(p, q).delta(p.entries(), q.entries())
}

/// Controller bounds of the ordered pair `(p, q)`.
pub fn controllers(p: &LabeledChain, q: &LabeledChain) -> PairControllers {
    labeled_bounds(p, q).controllers(p.entries(), q.entries())
}

/// Finds the highest-priority relation on `(p, q)` with its canonical
/// witness, or `None` when the pair is standard.
pub fn find_relation(p: &LabeledChain, q: &LabeledChain) -> Option<Relation> {
    relation_entries(&labeled_bounds(p, q), p.entries(), q.entries())
}

/// Standardness of the ordered pair `(p, q)` checked against the defining
/// sorting conditions (not via witness search; the two agree).
pub fn is_standard_pair(p: &LabeledChain, q: &LabeledChain) -> bool {
    standard_entries(&labeled_bounds(p, q), p.entries(), q.entries())
}

fn rebuild(
    p: &LabeledChain,
    q: &LabeledChain,
    a: Vec<u32>,
    b: Vec<u32>,
) -> (LabeledChain, LabeledChain) {
    let na = LabeledChain::from_parts(p.ambient(), p.label().lo(), p.label().hi(), &a)
        .expect("transform produced an invalid labeled chain");
    let nb = LabeledChain::from_parts(q.ambient(), q.label().lo(), q.label().hi(), &b)
        .expect("transform produced an invalid labeled chain");
    (na, nb)
}

fn checked_first_step(
    bounds: &Bounds,
    a: &[u32],
    b: &[u32],
    rel: Relation,
) -> Result<(Vec<u32>, Vec<u32>)> {
    let c = bounds.controllers(a, b);
    let err = |msg: String| Err(Error::InvalidWitness(msg));
    let (na, nb) = match rel {
        Relation::Diagonal { h, k } => {
            if h == 0 || k <= h || h > c.diagonal || k > b.len() {
                return err(format!("({h},{k}) is outside the diagonal controller range"));
            }
            let (h, k) = (h - 1, k - 1);
            if a[h] <= b[k] || Interval::of(b).contains(a[h]) {
                return err(format!("({},{}) is not a diagonal witness", h + 1, k + 1));
            }
            diag_step(a, b, h, k)
        }
        Relation::ColumnWise { h } => {
            if h == 0 || h > c.column_wise || h > b.len() {
                return err(format!("{h} is outside the column-wise controller range"));
            }
            if diag_witness(a, b, c.diagonal).is_some() {
                return err("pair is not diagonally sorted".into());
            }
            let h = h - 1;
            if a[h] <= b[h] || Interval::of(b).contains(a[h]) {
                return err(format!("{} is not a column-wise witness", h + 1));
            }
            col_step(a, b, h)
        }
        Relation::AntiDiagonal { h, k } => {
            if h == 0 || k <= h || h > c.anti_diagonal || k > a.len() {
                return err(format!(
                    "({h},{k}) is outside the anti-diagonal controller range"
                ));
            }
            if diag_witness(a, b, c.diagonal).is_some()
                || col_witness(a, b, c.column_wise).is_some()
            {
                return err("pair is not diagonally and column-wise sorted".into());
            }
            let (h, k) = (h - 1, k - 1);
            if b[h] <= a[k] || Interval::of(a).contains(b[h]) {
                return err(format!("({},{}) is not an anti-diagonal witness", h + 1, k + 1));
            }
            anti_step(a, b, h, k)
        }
    };
    if !bounds.step_is_valid(&na, &nb) {
        return err(format!("witness {rel:?} does not admit a block swap"));
    }
    Ok((na, nb))
}

/// Applies the block swap at the diagonal witness `(h, k)` (1-based) and
/// keeps sorting until no diagonal relation is left.
pub fn transform_diagonal(
    p: &LabeledChain,
    q: &LabeledChain,
    h: usize,
    k: usize,
) -> Result<(LabeledChain, LabeledChain)> {
    let bounds = labeled_bounds(p, q);
    let (mut a, mut b) =
        checked_first_step(&bounds, p.entries(), q.entries(), Relation::Diagonal { h, k })?;
    run_diag_phase(&bounds, &mut a, &mut b);
    Ok(rebuild(p, q, a, b))
}

/// Applies the block swap at the column-wise witness `h` (1-based) on a
/// diagonally sorted pair and keeps sorting until no column-wise relation is
/// left; diagonal sortedness is preserved.
pub fn transform_columnwise(
    p: &LabeledChain,
    q: &LabeledChain,
    h: usize,
) -> Result<(LabeledChain, LabeledChain)> {
    let bounds = labeled_bounds(p, q);
    let (mut a, mut b) =
        checked_first_step(&bounds, p.entries(), q.entries(), Relation::ColumnWise { h })?;
    run_col_phase(&bounds, &mut a, &mut b);
    Ok(rebuild(p, q, a, b))
}

/// Applies the block swap at the anti-diagonal witness `(h, k)` (1-based) on
/// a diagonally and column-wise sorted pair and keeps sorting until the pair
/// is standard.
pub fn transform_antidiagonal(
    p: &LabeledChain,
    q: &LabeledChain,
    h: usize,
    k: usize,
) -> Result<(LabeledChain, LabeledChain)> {
    let bounds = labeled_bounds(p, q);
    let (mut a, mut b) =
        checked_first_step(&bounds, p.entries(), q.entries(), Relation::AntiDiagonal { h, k })?;
    run_anti_phase(&bounds, &mut a, &mut b);
    Ok(rebuild(p, q, a, b))
}

/// Reduces `{p, q}` to its standard form.  The inputs may come in either
/// order; the result is sorted descending.
pub fn reduce_pair(p: &LabeledChain, q: &LabeledChain) -> (LabeledChain, LabeledChain) {
    let (p, q) = if p.cmp_c(q) == Ordering::Less { (q, p) } else { (p, q) };
    let bounds = labeled_bounds(p, q);
    let (a, b) = reduce_entries(&bounds, p.entries(), q.entries());
    let (na, nb) = rebuild(p, q, a, b);
    debug_assert!(is_standard_pair(&na, &nb));
    (na, nb)
}

/// The unlabeled variant: both rows live anywhere in `[1,n]`, delta is
/// forced to 0, and the rows keep their given positions.
pub fn reduce_pair_unlabeled(ambient: Ambient, a: &Chain, b: &Chain) -> (Chain, Chain) {
    let bounds = Bounds::Unlabeled(ambient);
    let (na, nb) = reduce_entries(&bounds, a.entries(), b.entries());
    debug_assert!(standard_entries(&bounds, &na, &nb));
    (
        Chain::new(ambient, na).expect("unlabeled reduction produced a non-chain"),
        Chain::new(ambient, nb).expect("unlabeled reduction produced a non-chain"),
    )
}

/// Standardness of an ordered unlabeled pair (delta = 0).
pub fn is_standard_pair_unlabeled(ambient: Ambient, a: &Chain, b: &Chain) -> bool {
    standard_entries(&Bounds::Unlabeled(ambient), a.entries(), b.entries())
}

/// Relation search on an ordered unlabeled pair (delta = 0).
pub fn find_relation_unlabeled(ambient: Ambient, a: &Chain, b: &Chain) -> Option<Relation> {
    relation_entries(&Bounds::Unlabeled(ambient), a.entries(), b.entries())
}

// ---------------------------------------------------------------------------
// tabels
// ---------------------------------------------------------------------------

/// A family of labeled chains over one ambient interval, sorted descending
/// in the row order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tabel {
    ambient: Ambient,
    rows: Vec<LabeledChain>,
}

impl Tabel {
    pub fn new(ambient: Ambient, mut rows: Vec<LabeledChain>) -> Result<Self> {
        for row in &rows {
            if row.ambient() != ambient {
                return Err(Error::AmbientMismatch(ambient.n(), row.ambient().n()));
            }
        }
        rows.sort_by(|p, q| q.cmp_c(p));
        Ok(Tabel { ambient, rows })
    }

    #[inline]
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    #[inline]
    pub fn rows(&self) -> &[LabeledChain] {
        &self.rows
    }

    pub fn shape(&self) -> Shape {
        Shape(self.rows.iter().map(|r| (r.label(), r.len())).collect())
    }

    /// All row entries, sorted ascending with multiplicity.
    pub fn entry_multiset(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.rows.iter().flat_map(|r| r.entries().to_vec()).collect();
        out.sort_unstable();
        out
    }

    /// True when every ordered pair of rows is standard.
    pub fn is_standard(&self) -> bool {
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if !is_standard_pair(&self.rows[i], &self.rows[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Deterministic reduction to the standard form: repeatedly pick the
    /// first non-standard pair in row order, standardize it, re-sort.
    ///
    /// Termination of each pair reduction is guaranteed by the witness
    /// measures; the outer fixpoint loop carries a step budget as a guard
    /// against implementation bugs and panics when it is exhausted.
    pub fn reduce(&self) -> Tabel {
        let mut rows = self.rows.clone();
        let cells: u64 = rows.iter().map(|r| r.len() as u64).sum();
        let pairs = (rows.len() * rows.len().max(1)) as u64;
        let mut budget = 1000 + cells * (self.ambient.n() as u64).pow(2) * (pairs + 1);
        'outer: loop {
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    if !is_standard_pair(&rows[i], &rows[j]) {
                        let (np, nq) = reduce_pair(&rows[i], &rows[j]);
                        rows[i] = np;
                        rows[j] = nq;
                        rows.sort_by(|p, q| q.cmp_c(p));
                        budget = budget
                            .checked_sub(1)
                            .expect("tabel reduction exceeded its step budget");
                        continue 'outer;
                    }
                }
            }
            break;
        }
        let out = Tabel { ambient: self.ambient, rows };
        debug_assert!(out.is_standard());
        debug_assert_eq!(out.entry_multiset(), self.entry_multiset());
        out
    }

    /// Reduction by a randomized admissible strategy: a random non-standard
    /// pair, a random admissible witness of its highest-priority relation,
    /// one block swap at a time.  Any such strategy converges to the same
    /// standard form as [`Tabel::reduce`].
    pub fn reduce_with_strategy<R: Rng>(&self, rng: &mut R) -> Tabel {
        let mut rows = self.rows.clone();
        let mut budget: u64 = 500_000;
        loop {
            let bad: Vec<(usize, usize)> = (0..rows.len())
                .flat_map(|i| (i + 1..rows.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| !is_standard_pair(&rows[i], &rows[j]))
                .collect();
            let Some(&(i, j)) = bad.choose(rng) else { break };
            let (p, q) = (&rows[i], &rows[j]);
            let bounds = labeled_bounds(p, q);
            let (a, b) = (p.entries(), q.entries());
            let steps = admissible_steps(&bounds, a, b);
            assert!(!steps.is_empty(), "non-standard pair with no admissible step");
            let (na, nb) = steps.choose(rng).unwrap().clone();
            let (np, nq) = rebuild(p, q, na, nb);
            rows[i] = np;
            rows[j] = nq;
            rows.sort_by(|p, q| q.cmp_c(p));
            budget = budget
                .checked_sub(1)
                .expect("randomized tabel reduction exceeded its step budget");
        }
        let out = Tabel { ambient: self.ambient, rows };
        debug_assert_eq!(out.entry_multiset(), self.entry_multiset());
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawTabel::of(self)).expect("tabel serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawTabel = serde_json::from_str(s)?;
        raw.build()
    }
}

/// Single block swaps admissible on the pair: every witness of the current
/// highest-priority relation kind whose swap yields valid rows and keeps the
/// sortedness established by the earlier phases.
fn admissible_steps(bounds: &Bounds, a: &[u32], b: &[u32]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let c = bounds.controllers(a, b);
    let ib = Interval::of(b);
    let mut out = Vec::new();
    let diag_sorted = |x: &[u32], y: &[u32]| {
        diag_witness(x, y, bounds.controllers(x, y).diagonal).is_none()
    };
    let col_sorted = |x: &[u32], y: &[u32]| {
        col_witness(x, y, bounds.controllers(x, y).column_wise).is_none()
    };
    if diag_witness(a, b, c.diagonal).is_some() {
        for h in 0..c.diagonal.min(a.len()) {
            if ib.contains(a[h]) {
                continue;
            }
            for k in h + 1..b.len() {
                if b[k] < a[h] {
                    let (na, nb) = diag_step(a, b, h, k);
                    if bounds.step_is_valid(&na, &nb) {
                        out.push((na, nb));
                    }
                }
            }
        }
    } else if col_witness(a, b, c.column_wise).is_some() {
        for h in 0..c.column_wise.min(a.len()).min(b.len()) {
            if a[h] > b[h] && !ib.contains(a[h]) {
                let (na, nb) = col_step(a, b, h);
                if bounds.step_is_valid(&na, &nb) && diag_sorted(&na, &nb) {
                    out.push((na, nb));
                }
            }
        }
    } else {
        let ia = Interval::of(a);
        for h in 0..c.anti_diagonal.min(b.len()) {
            if ia.contains(b[h]) {
                continue;
            }
            for k in h + 1..a.len() {
                if a[k] < b[h] {
                    let (na, nb) = anti_step(a, b, h, k);
                    if bounds.step_is_valid(&na, &nb)
                        && diag_sorted(&na, &nb)
                        && col_sorted(&na, &nb)
                    {
                        out.push((na, nb));
                    }
                }
            }
        }
    }
    out
}

impl fmt::Display for Tabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Serialization shape of a tabel: `{"ambient":n,"rows":[...]}`.
#[derive(Serialize, Deserialize)]
pub struct RawTabel {
    pub ambient: u32,
    pub rows: Vec<RawLabeledChain>,
}

impl RawTabel {
    pub fn of(t: &Tabel) -> Self {
        RawTabel {
            ambient: t.ambient().n(),
            rows: t.rows().iter().map(RawLabeledChain::of).collect(),
        }
    }

    pub fn build(&self) -> Result<Tabel> {
        let ambient = Ambient::new(self.ambient)?;
        let rows = self
            .rows
            .iter()
            .map(|r| r.build(ambient))
            .collect::<Result<Vec<_>>>()?;
        Tabel::new(ambient, rows)
    }
}

/// Column-major cell numbering of rows with the given lengths: cell `(i,j)`
/// gets the position of `(i,j)` in the enumeration that walks column 1 top
/// to bottom, then column 2, and so on.
pub fn assign_labels(lengths: &[usize]) -> Vec<Vec<u32>> {
    let mut grid: Vec<Vec<u32>> = lengths.iter().map(|&l| vec![0; l]).collect();
    let mut next = 1;
    for j in 0..lengths.iter().copied().max().unwrap_or(0) {
        for (i, &len) in lengths.iter().enumerate() {
            if j < len {
                grid[i][j] = next;
                next += 1;
            }
        }
    }
    grid
}

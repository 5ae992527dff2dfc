//! Labeled chains of minor diagonals.
//!
//! A *chain* in `[1,n]` is a sequence `a_1 <_1 a_2 <_1 ... <_1 a_r` where
//! `i <_1 j` means `j >= i + 2`.  A chain picks one diagonal per row out of a
//! Hankel matrix, so chains of length `r` inside the window of a label are in
//! bijection with the maximal minors of the `r`-row Hankel matrix of that
//! label.  The four labels `(1,n)`, `(1,n-1)`, `(2,n)`, `(2,n-1)` are the
//! *close cuts* of `[1,n]`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ambient interval `[1,n]`, `n >= 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ambient(u32);

impl Ambient {
    pub fn new(n: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::AmbientTooSmall(n));
        }
        Ok(Ambient(n))
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.0
    }

    /// The four close cuts of `[1,n]`, in descending label order.
    pub fn labels(&self) -> [Label; 4] {
        let n = self.0;
        [
            Label { lo: 1, hi: n - 1 },
            Label { lo: 1, hi: n },
            Label { lo: 2, hi: n - 1 },
            Label { lo: 2, hi: n },
        ]
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[1,{}]", self.0)
    }
}

/// A close cut `(lo,hi)` with `lo` in `{1,2}` and `hi` in `{n-1,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    lo: u32,
    hi: u32,
}

impl Label {
    pub fn new(ambient: Ambient, lo: u32, hi: u32) -> Result<Self> {
        let n = ambient.n();
        if (lo == 1 || lo == 2) && (hi == n - 1 || hi == n) {
            Ok(Label { lo, hi })
        } else {
            Err(Error::BadLabel { lo, hi, n })
        }
    }

    #[inline]
    pub fn lo(&self) -> u32 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> u32 {
        self.hi
    }

    /// Window width `hi - lo + 1`.
    #[inline]
    pub fn window(&self) -> u32 {
        self.hi - self.lo + 1
    }

    /// Largest row count of a Hankel matrix with this label, i.e. the largest
    /// length of a chain inside the window.
    #[inline]
    pub fn max_rows(&self) -> usize {
        ((self.window() + 1) / 2) as usize
    }

    /// Position in the label order `(1,n-1) > (1,n) > (2,n-1) > (2,n)`;
    /// smaller rank means greater label.
    pub fn rank(&self, ambient: Ambient) -> u8 {
        let n = ambient.n();
        match (self.lo, self.hi == n - 1) {
            (1, true) => 0,
            (1, false) => 1,
            (2, true) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// Returns true when `entries` is strictly increasing with gaps of at least 2.
pub fn is_chain(entries: &[u32]) -> bool {
    entries.windows(2).all(|w| w[1] >= w[0] + 2)
}

/// An unlabeled chain in `[1,n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(Vec<u32>);

impl Chain {
    pub fn new(ambient: Ambient, entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::BadChain("chain must be nonempty".into()));
        }
        if entries[0] < 1 || *entries.last().unwrap() > ambient.n() {
            return Err(Error::BadChain(format!(
                "entries {:?} leave the ambient interval {}",
                entries, ambient
            )));
        }
        if !is_chain(&entries) {
            return Err(Error::BadChain(format!(
                "entries {:?} must increase with gaps of at least 2",
                entries
            )));
        }
        Ok(Chain(entries))
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `interval(a) = union over i >= 2 of {a_i - 1, a_i}`; the first entry
    /// contributes nothing.
    pub fn interval(&self) -> Interval {
        Interval::of(&self.0)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        Ok(())
    }
}

/// The set `interval(a)`, kept as a sorted list for fast membership tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval(Vec<u32>);

impl Interval {
    pub fn of(entries: &[u32]) -> Self {
        let mut vals: Vec<u32> = entries
            .iter()
            .skip(1)
            .flat_map(|&a| [a - 1, a])
            .collect();
        vals.sort_unstable();
        vals.dedup();
        Interval(vals)
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }
}

/// Compares `x_a` and `x_b` under the diagonal term order: total degree
/// first, then lexicographically with `x_1` largest.  With sorted index
/// sequences this means: longer chain wins; at equal length the first
/// differing position with the *smaller* index wins.
pub fn cmp_chain_monomials(a: &[u32], b: &[u32]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| {
            for (x, y) in a.iter().zip(b) {
                match x.cmp(y) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {}
                }
            }
            Ordering::Equal
        })
}

/// A chain carried by a close-cut label; stands for one maximal minor of the
/// Hankel matrix of that label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledChain {
    ambient: Ambient,
    label: Label,
    chain: Chain,
}

impl LabeledChain {
    pub fn new(ambient: Ambient, label: Label, chain: Chain) -> Result<Self> {
        Label::new(ambient, label.lo(), label.hi())?;
        let a = chain.entries();
        if a[0] < label.lo() || *a.last().unwrap() > label.hi() {
            return Err(Error::BadLabeledChain(format!(
                "chain {} leaves the window of {}",
                chain, label
            )));
        }
        if chain.len() > label.max_rows() {
            return Err(Error::BadLabeledChain(format!(
                "chain {} has more rows than {} admits ({})",
                chain,
                label,
                label.max_rows()
            )));
        }
        Ok(LabeledChain { ambient, label, chain })
    }

    /// Convenience constructor from raw parts.
    pub fn from_parts(ambient: Ambient, lo: u32, hi: u32, entries: &[u32]) -> Result<Self> {
        let label = Label::new(ambient, lo, hi)?;
        let chain = Chain::new(ambient, entries.to_vec())?;
        Self::new(ambient, label, chain)
    }

    #[inline]
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    #[inline]
    pub fn label(&self) -> Label {
        self.label
    }

    #[inline]
    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        self.chain.entries()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Column indices of the minor this labeled chain selects: entry `a_i`
    /// sits in matrix row `i` at column `a_i - lo - i + 2` (1-based).
    pub fn minor_columns(&self) -> Vec<u32> {
        self.entries()
            .iter()
            .enumerate()
            .map(|(i, &a)| a - self.label.lo() - i as u32 + 1)
            .collect()
    }

    /// Total order used to sort tabel rows: label order first, then the
    /// diagonal term order on the chain monomials.  Panics on mismatched
    /// ambients; use [`compare_c`] at validation boundaries.
    pub fn cmp_c(&self, other: &Self) -> Ordering {
        assert_eq!(
            self.ambient, other.ambient,
            "cmp_c across different ambient intervals"
        );
        other
            .label
            .rank(self.ambient)
            .cmp(&self.label.rank(self.ambient))
            .then_with(|| cmp_chain_monomials(self.entries(), other.entries()))
    }

    pub fn parse(ambient: Ambient, s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("expected '(lo,hi)|a1,...,ar', got '{s}'")))?;
        let head = head.trim();
        let inner = head
            .strip_prefix('(')
            .and_then(|h| h.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad label '{head}'")))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad label '{head}'")))?;
        let parse_u32 = |t: &str| -> Result<u32> {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad number '{t}'")))
        };
        let entries = tail
            .split(',')
            .map(parse_u32)
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(ambient, parse_u32(lo)?, parse_u32(hi)?, &entries)
    }
}

impl fmt::Display for LabeledChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.label, self.chain)
    }
}

/// Checked comparison in the row order; errors on mismatched ambients.
pub fn compare_c(p: &LabeledChain, q: &LabeledChain) -> Result<Ordering> {
    if p.ambient() != q.ambient() {
        return Err(Error::AmbientMismatch(p.ambient().n(), q.ambient().n()));
    }
    Ok(p.cmp_c(q))
}

/// All chains of length `len` inside `[lo,hi]`.
pub fn chains_in_window(lo: u32, hi: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    let mut cur = Vec::with_capacity(len);
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, next_min: u32, hi: u32, left: usize) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        // leave room for the remaining `left - 1` entries with gap 2
        let max_start = hi.wrapping_sub(2 * (left as u32 - 1));
        if next_min > max_start || max_start > hi {
            return;
        }
        for v in next_min..=max_start {
            cur.push(v);
            rec(out, cur, v + 2, hi, left - 1);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, lo, hi, len);
    out
}

/// All labeled chains of the given label and length.
pub fn labeled_chains(ambient: Ambient, label: Label, len: usize) -> Vec<LabeledChain> {
    chains_in_window(label.lo(), label.hi(), len)
        .into_iter()
        .map(|e| LabeledChain::from_parts(ambient, label.lo(), label.hi(), &e).unwrap())
        .collect()
}

/// All labeled chains over all four labels with length up to `max_len`,
/// sorted descending in the row order.
pub fn all_labeled_chains(ambient: Ambient, max_len: usize) -> Vec<LabeledChain> {
    let mut out = Vec::new();
    for label in ambient.labels() {
        for len in 1..=label.max_rows().min(max_len) {
            out.extend(labeled_chains(ambient, label, len));
        }
    }
    out.sort_by(|p, q| q.cmp_c(p));
    out
}

/// Uniformly random chain of length `len` in `[lo,hi]`, when one exists.
pub fn random_chain_in_window<R: rand::Rng>(
    rng: &mut R,
    lo: u32,
    hi: u32,
    len: usize,
) -> Option<Vec<u32>> {
    if len == 0 || hi < lo {
        return None;
    }
    let w = (hi - lo + 1) as usize;
    if 2 * len - 1 > w {
        return None;
    }
    // chains of length len biject with ascending len-subsets of [lo, hi-len+1]
    let mut picks = rand::seq::index::sample(rng, w - len + 1, len).into_vec();
    picks.sort_unstable();
    Some(
        picks
            .iter()
            .enumerate()
            .map(|(i, &c)| lo + c as u32 + i as u32)
            .collect(),
    )
}

/// Uniformly random labeled chain of the given label and length.
pub fn random_labeled_chain<R: rand::Rng>(
    rng: &mut R,
    ambient: Ambient,
    label: Label,
    len: usize,
) -> Option<LabeledChain> {
    let entries = random_chain_in_window(rng, label.lo(), label.hi(), len)?;
    Some(LabeledChain::from_parts(ambient, label.lo(), label.hi(), &entries).unwrap())
}

/// Serialization shape of a labeled chain: `{"label":[lo,hi],"chain":[...]}`.
#[derive(Serialize, Deserialize)]
pub struct RawLabeledChain {
    pub label: (u32, u32),
    pub chain: Vec<u32>,
}

impl RawLabeledChain {
    pub fn of(lc: &LabeledChain) -> Self {
        RawLabeledChain {
            label: (lc.label().lo(), lc.label().hi()),
            chain: lc.entries().to_vec(),
        }
    }

    pub fn build(&self, ambient: Ambient) -> Result<LabeledChain> {
        LabeledChain::from_parts(ambient, self.label.0, self.label.1, &self.chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb(n: u32) -> Ambient {
        Ambient::new(n).unwrap()
    }

    fn lc(n: u32, lo: u32, hi: u32, entries: &[u32]) -> LabeledChain {
        LabeledChain::from_parts(amb(n), lo, hi, entries).unwrap()
    }

    #[test]
    fn ambient_rejects_small_n() {
        assert!(Ambient::new(3).is_err());
        assert!(Ambient::new(4).is_ok());
    }

    #[test]
    fn label_validation() {
        let a = amb(10);
        assert!(Label::new(a, 1, 10).is_ok());
        assert!(Label::new(a, 2, 9).is_ok());
        assert!(Label::new(a, 3, 10).is_err());
        assert!(Label::new(a, 1, 8).is_err());
    }

    #[test]
    fn chain_validation() {
        let a = amb(10);
        assert!(Chain::new(a, vec![1, 3, 5]).is_ok());
        assert!(Chain::new(a, vec![1, 2]).is_err());
        assert!(Chain::new(a, vec![3, 3]).is_err());
        assert!(Chain::new(a, vec![0, 4]).is_err());
        assert!(Chain::new(a, vec![9, 11]).is_err());
        assert!(Chain::new(a, vec![]).is_err());
    }

    #[test]
    fn labeled_chain_respects_window_and_row_bound() {
        let a = amb(10);
        // (2,9) admits chains within [2,9] of length at most 4
        assert!(LabeledChain::from_parts(a, 2, 9, &[2, 4, 6, 8]).is_ok());
        assert!(LabeledChain::from_parts(a, 2, 9, &[1, 4]).is_err());
        assert!(LabeledChain::from_parts(a, 2, 9, &[2, 10]).is_err());
    }

    #[test]
    fn interval_skips_first_entry() {
        let c = Chain::new(amb(30), vec![1, 4, 18, 24, 30]).unwrap();
        let got: Vec<u32> = c.interval().iter().collect();
        assert_eq!(got, vec![3, 4, 17, 18, 23, 24, 29, 30]);
        assert!(c.interval().contains(23));
        assert!(!c.interval().contains(1));
    }

    #[test]
    fn interval_of_singleton_is_empty() {
        let c = Chain::new(amb(10), vec![5]).unwrap();
        assert_eq!(c.interval().iter().count(), 0);
    }

    #[test]
    fn row_order_label_first() {
        let n = 30;
        let p = lc(n, 1, 29, &[1, 7, 12]);
        let q = lc(n, 1, 30, &[1, 4]);
        assert_eq!(compare_c(&p, &q).unwrap(), Ordering::Greater);
    }

    #[test]
    fn row_order_degree_breaks_equal_labels() {
        let n = 30;
        let p = lc(n, 1, 30, &[2, 7, 23, 25, 27, 30]);
        let q = lc(n, 1, 30, &[1, 18, 23, 27, 30]);
        assert_eq!(compare_c(&p, &q).unwrap(), Ordering::Greater);
    }

    #[test]
    fn row_order_lex_at_equal_degree() {
        // x_1 x_5 beats x_2 x_4 under the diagonal order
        let p = lc(6, 1, 6, &[1, 5]);
        let q = lc(6, 1, 6, &[2, 4]);
        assert_eq!(compare_c(&p, &q).unwrap(), Ordering::Greater);
    }

    #[test]
    fn row_order_rejects_mixed_ambients() {
        let p = lc(6, 1, 6, &[1, 5]);
        let q = lc(7, 1, 7, &[1, 5]);
        assert!(compare_c(&p, &q).is_err());
    }

    #[test]
    fn row_order_is_total_on_small_ambients() {
        for n in 4..=8 {
            let all = all_labeled_chains(amb(n), usize::MAX);
            for p in &all {
                for q in &all {
                    let pq = p.cmp_c(q);
                    assert_eq!(pq, q.cmp_c(p).reverse());
                    if pq == Ordering::Equal {
                        assert_eq!(p, q, "distinct rows compare equal");
                    }
                    for r in &all {
                        if pq != Ordering::Less && q.cmp_c(r) != Ordering::Less {
                            assert_ne!(p.cmp_c(r), Ordering::Less, "transitivity");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn minor_columns_examples() {
        assert_eq!(lc(10, 1, 10, &[4, 7, 10]).minor_columns(), vec![4, 6, 8]);
        assert_eq!(lc(10, 1, 10, &[1, 3, 5]).minor_columns(), vec![1, 2, 3]);
        assert_eq!(lc(10, 2, 9, &[2, 5]).minor_columns(), vec![1, 3]);
    }

    #[test]
    fn minor_columns_increase_within_bounds() {
        for n in [6, 8, 10] {
            for p in all_labeled_chains(amb(n), usize::MAX) {
                let cols = p.minor_columns();
                let width = p.label().window() as usize - p.len() + 1;
                assert!(cols.windows(2).all(|w| w[0] < w[1]));
                assert!(cols.iter().all(|&c| 1 <= c && c as usize <= width));
            }
        }
    }

    #[test]
    fn chain_enumeration_counts() {
        // chains of length t in a window of width w are counted by C(w-t+1, t)
        let binom = |n: u64, k: u64| -> u64 {
            if k > n {
                return 0;
            }
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        };
        for w in 1..=12u32 {
            for t in 1..=6usize {
                let count = chains_in_window(3, 2 + w, t).len() as u64;
                assert_eq!(count, binom((w as u64).saturating_sub(t as u64) + 1, t as u64));
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let p = lc(30, 2, 29, &[5, 7, 11, 15]);
        let s = p.to_string();
        assert_eq!(s, "(2,29)|5,7,11,15");
        assert_eq!(LabeledChain::parse(amb(30), &s).unwrap(), p);
        assert!(LabeledChain::parse(amb(30), "(3,29)|5").is_err());
        assert!(LabeledChain::parse(amb(30), "(2,29)|5,6").is_err());
    }
}

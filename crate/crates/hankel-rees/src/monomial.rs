//! Monomials in `x_1,...,x_n` and the auxiliary `t` variables, ordered by
//! the diagonal term order.
//!
//! The order is degree-lexicographic on the `x` block with `x_1` largest —
//! under it the leading term of every Hankel minor is its main-diagonal
//! product — refined by a degree-lexicographic order on the `t` block.  Any
//! diagonal order works for the theory; this one is the crate-wide default
//! and is what [`Ord`] on [`Monomial`] implements.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An auxiliary variable `t[lo,hi,rows]`, one per label and row count.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct TVar {
    pub lo: u32,
    pub hi: u32,
    pub rows: u32,
}

impl fmt::Display for TVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t[{},{},{}]", self.lo, self.hi, self.rows)
    }
}

/// A power product of `x` and `t` variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    /// `xs[i]` is the exponent of `x_{i+1}`; trailing zeros are trimmed so
    /// the representation is canonical.
    xs: SmallVec<[u8; 16]>,
    /// Exponents of the `t` variables, sorted by variable.
    ts: SmallVec<[(TVar, u32); 2]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// The variable `x_i` (1-based).
    pub fn x(i: u32) -> Self {
        Self::x_pow(i, 1)
    }

    pub fn x_pow(i: u32, e: u32) -> Self {
        assert!(i >= 1, "x variables are 1-based");
        let mut m = Monomial::one();
        if e > 0 {
            m.xs.resize(i as usize, 0);
            m.xs[i as usize - 1] = u8::try_from(e).expect("exponent too large");
        }
        m
    }

    pub fn t(v: TVar) -> Self {
        let mut m = Monomial::one();
        m.ts.push((v, 1));
        m
    }

    /// `x_{a_1} x_{a_2} ... x_{a_r}` for a sorted index multiset.
    pub fn from_indices(indices: &[u32]) -> Self {
        let mut m = Monomial::one();
        for &i in indices {
            assert!(i >= 1);
            if m.xs.len() < i as usize {
                m.xs.resize(i as usize, 0);
            }
            m.xs[i as usize - 1] += 1;
        }
        m
    }

    fn trim(&mut self) {
        while self.xs.last() == Some(&0) {
            self.xs.pop();
        }
        self.ts.retain(|&mut (_, e)| e > 0);
    }

    pub fn is_one(&self) -> bool {
        self.xs.is_empty() && self.ts.is_empty()
    }

    /// Total degree in the `x` variables.
    pub fn x_degree(&self) -> u32 {
        self.xs.iter().map(|&e| e as u32).sum()
    }

    /// Total degree in the `t` variables.
    pub fn t_degree(&self) -> u32 {
        self.ts.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_of_x(&self, i: u32) -> u32 {
        self.xs.get(i as usize - 1).map_or(0, |&e| e as u32)
    }

    pub fn degree_of_t(&self, v: TVar) -> u32 {
        self.ts.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    /// Nonzero `x` exponents as `(variable, exponent)` pairs, ascending.
    pub fn x_exponents(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.xs
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| (i as u32 + 1, e as u32))
    }

    pub fn t_exponents(&self) -> impl Iterator<Item = (TVar, u32)> + '_ {
        self.ts.iter().copied()
    }

    /// The `x` indices with multiplicity, ascending; inverse of
    /// [`Monomial::from_indices`] for pure `x` monomials.
    pub fn x_indices(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.x_degree() as usize);
        for (i, e) in self.x_exponents() {
            out.extend(std::iter::repeat(i).take(e as usize));
        }
        out
    }

    pub fn has_t(&self) -> bool {
        !self.ts.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut xs = self.xs.clone();
        if xs.len() < other.xs.len() {
            xs.resize(other.xs.len(), 0);
        }
        for (i, &e) in other.xs.iter().enumerate() {
            xs[i] = xs[i].checked_add(e).expect("x exponent overflow");
        }
        let mut ts = self.ts.clone();
        for &(v, e) in &other.ts {
            match ts.iter_mut().find(|(w, _)| *w == v) {
                Some((_, f)) => *f += e,
                None => ts.push((v, e)),
            }
        }
        ts.sort_by_key(|&(v, _)| v);
        let mut m = Monomial { xs, ts };
        m.trim();
        m
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.xs.len() > other.xs.len() {
            return false;
        }
        if !self.xs.iter().zip(&other.xs).all(|(a, b)| a <= b) {
            return false;
        }
        self.ts
            .iter()
            .all(|&(v, e)| other.degree_of_t(v) >= e)
    }

    pub fn try_div(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let mut xs = self.xs.clone();
        for (i, &e) in other.xs.iter().enumerate() {
            xs[i] -= e;
        }
        let mut ts = self.ts.clone();
        for t in ts.iter_mut() {
            t.1 -= other.degree_of_t(t.0);
        }
        let mut m = Monomial { xs, ts };
        m.trim();
        Some(m)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut xs = self.xs.clone();
        if xs.len() < other.xs.len() {
            xs.resize(other.xs.len(), 0);
        }
        for (i, &e) in other.xs.iter().enumerate() {
            xs[i] = xs[i].max(e);
        }
        let mut ts = self.ts.clone();
        for &(v, e) in &other.ts {
            match ts.iter_mut().find(|(w, _)| *w == v) {
                Some((_, f)) => *f = (*f).max(e),
                None => ts.push((v, e)),
            }
        }
        ts.sort_by_key(|&(v, _)| v);
        let mut m = Monomial { xs, ts };
        m.trim();
        m
    }

    pub fn is_coprime_with(&self, other: &Self) -> bool {
        let shared_x = self
            .xs
            .iter()
            .zip(&other.xs)
            .any(|(&a, &b)| a > 0 && b > 0);
        let shared_t = self
            .ts
            .iter()
            .any(|&(v, _)| other.degree_of_t(v) > 0);
        !shared_x && !shared_t
    }

    /// Restriction to the `x` block.
    pub fn x_part(&self) -> Monomial {
        Monomial { xs: self.xs.clone(), ts: SmallVec::new() }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut m = Monomial::one();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.rsplit_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?,
                ),
                None => (factor, 1),
            };
            if let Some(i) = base.strip_prefix('x') {
                let i = i
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad variable '{base}'")))?;
                m = m.mul(&Monomial::x_pow(i, exp));
            } else if let Some(t) = base.strip_prefix("t[").and_then(|t| t.strip_suffix(']')) {
                let parts: Vec<&str> = t.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!("bad t variable '{base}'")));
                }
                let nums = parts
                    .iter()
                    .map(|p| {
                        p.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad t variable '{base}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let v = TVar { lo: nums[0], hi: nums[1], rows: nums[2] };
                for _ in 0..exp {
                    m = m.mul(&Monomial::t(v));
                }
            } else {
                return Err(Error::Parse(format!("bad factor '{factor}'")));
            }
        }
        Ok(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x_degree()
            .cmp(&other.x_degree())
            .then_with(|| {
                // lex with x_1 largest: at the first differing position the
                // higher exponent wins
                let len = self.xs.len().max(other.xs.len());
                for i in 0..len {
                    let a = self.xs.get(i).copied().unwrap_or(0);
                    let b = other.xs.get(i).copied().unwrap_or(0);
                    match a.cmp(&b) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
            .then_with(|| self.t_degree().cmp(&other.t_degree()))
            .then_with(|| {
                // lex over the union of t variables, smallest variable first
                let mut i = 0;
                let mut j = 0;
                loop {
                    match (self.ts.get(i), other.ts.get(j)) {
                        (None, None) => return Ordering::Equal,
                        (Some(_), None) => return Ordering::Greater,
                        (None, Some(_)) => return Ordering::Less,
                        (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                            Ordering::Less => return Ordering::Greater,
                            Ordering::Greater => return Ordering::Less,
                            Ordering::Equal => {
                                match e.cmp(&f) {
                                    Ordering::Equal => {}
                                    ord => return ord,
                                }
                                i += 1;
                                j += 1;
                            }
                        },
                    }
                }
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, e) in self.x_exponents() {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "x{i}^{e}")?;
            first = false;
        }
        for (v, e) in self.t_exponents() {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "{v}^{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// JSON shape of a monomial: `{"x":[[i,e],...],"t":[[lo,hi,rows,e],...]}`.
#[derive(Serialize, Deserialize, Default)]
pub struct RawMonomial {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub t: Vec<(u32, u32, u32, u32)>,
}

impl RawMonomial {
    pub fn of(m: &Monomial) -> Self {
        RawMonomial {
            x: m.x_exponents().collect(),
            t: m.t_exponents().map(|(v, e)| (v.lo, v.hi, v.rows, e)).collect(),
        }
    }

    pub fn build(&self) -> Monomial {
        let mut m = Monomial::one();
        for &(i, e) in &self.x {
            m = m.mul(&Monomial::x_pow(i, e));
        }
        for &(lo, hi, rows, e) in &self.t {
            for _ in 0..e {
                m = m.mul(&Monomial::t(TVar { lo, hi, rows }));
            }
        }
        m
    }
}

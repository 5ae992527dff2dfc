//! Exact multivariate polynomial arithmetic over the rationals, with
//! division (normal-form reduction) against finite sets of divisors under
//! the diagonal term order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigRational, One, Signed, Zero};

use crate::monomial::Monomial;

pub type Coeff = BigRational;

/// A polynomial stored as term map keyed by monomial; the leading term under
/// the diagonal order is the last entry.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::from_term(Coeff::one(), Monomial::one())
    }

    pub fn from_term(c: Coeff, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::from_term(Coeff::one(), m)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_term(Coeff::from_integer(c.into()), Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending order of the term order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    /// The largest monomial, if any.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.values().next_back()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, c: Coeff, m: Monomial) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    /// Divide every coefficient by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Polynomial::zero(),
            Some(lc) => self.scale(&(Coeff::one() / lc)),
        }
    }

    /// Total degree in the `x` variables of the largest term with maximal
    /// degree (the order is degree-compatible, so this is the leading term).
    pub fn x_degree(&self) -> Option<u32> {
        self.leading_monomial().map(|m| m.x_degree())
    }

    /// Maximum over terms of the exponent of `x_i`.
    pub fn max_degree_of_x(&self, i: u32) -> u32 {
        self.terms.keys().map(|m| m.degree_of_x(i)).max().unwrap_or(0)
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(c.clone(), f(m));
        }
        out
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Coeff::one())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // print in descending order, leading term first
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a.is_one() && !m.is_one() {
                write!(f, "{m}")?;
            } else if m.is_one() {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Outcome of [`reduce_full`]: quotients aligned with the divisors plus the
/// remainder.
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// One-step leading-term reduction: if some divisor's leading term divides
/// the leading term of `p`, cancel it and return the result.
///
/// Ties go to the divisor whose leading monomial is largest in the term
/// order (first in index order among equals), which makes the step
/// deterministic.
pub fn reduce_step(p: &Polynomial, divisors: &[Polynomial]) -> Option<Polynomial> {
    let (lm, lc) = p.leading_term()?;
    let mut best: Option<(usize, &Monomial)> = None;
    for (i, g) in divisors.iter().enumerate() {
        if let Some(gm) = g.leading_monomial() {
            if gm.divides(lm) {
                match best {
                    Some((_, bm)) if gm <= bm => {}
                    _ => best = Some((i, gm)),
                }
            }
        }
    }
    let (i, gm) = best?;
    let g = &divisors[i];
    let factor = lm.try_div(gm).expect("divisibility was just checked");
    let scale = lc / g.leading_coeff().expect("divisor is nonzero");
    Some(p - &g.mul_monomial(&factor).scale(&scale))
}

/// Full normal form: repeatedly cancel the leading term while possible, then
/// move it to the remainder and continue with the rest.  The remainder has
/// no term divisible by any divisor's leading monomial.
pub fn reduce_full(p: &Polynomial, divisors: &[Polynomial]) -> Division {
    let mut quotients = vec![Polynomial::zero(); divisors.len()];
    let mut remainder = Polynomial::zero();
    let mut work = p.clone();
    'outer: while let Some((lm, lc)) = work.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let mut best: Option<(usize, &Monomial)> = None;
        for (i, g) in divisors.iter().enumerate() {
            if let Some(gm) = g.leading_monomial() {
                if gm.divides(&lm) {
                    match best {
                        Some((_, bm)) if gm <= bm => {}
                        _ => best = Some((i, gm)),
                    }
                }
            }
        }
        if let Some((i, gm)) = best {
            let factor = lm.try_div(gm).expect("divisibility was just checked");
            let scale = &lc / divisors[i].leading_coeff().expect("divisor is nonzero");
            work = &work - &divisors[i].mul_monomial(&factor).scale(&scale);
            quotients[i].add_term(scale, factor);
            continue 'outer;
        }
        remainder.add_term(lc, lm.clone());
        work.terms.remove(&lm);
    }
    Division { quotients, remainder }
}

/// Normal form only.
pub fn reduce(p: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    reduce_full(p, divisors).remainder
}

/// The S-polynomial `(lcm/lt_f)·f − (lcm/lt_g)·g`, scaled so both leading
/// terms cancel exactly.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fm, fc) = f.leading_term().expect("s_polynomial of zero");
    let (gm, gc) = g.leading_term().expect("s_polynomial of zero");
    let l = fm.lcm(gm);
    let a = f
        .mul_monomial(&l.try_div(fm).unwrap())
        .scale(&(Coeff::one() / fc));
    let b = g
        .mul_monomial(&l.try_div(gm).unwrap())
        .scale(&(Coeff::one() / gc));
    &a - &b
}

/// Exact division, panicking if the remainder is nonzero; used where theory
/// guarantees divisibility (fraction-free elimination).
pub fn div_exact(p: &Polynomial, d: &Polynomial) -> Polynomial {
    let out = reduce_full(p, std::slice::from_ref(d));
    assert!(
        out.remainder.is_zero(),
        "exact division left a remainder: {} / {}",
        p,
        d
    );
    out.quotients.into_iter().next().unwrap()
}

/// Determinant of a square matrix of polynomials by fraction-free Gaussian
/// elimination (Bareiss), with row pivoting; all intermediate divisions are
/// exact.
pub fn determinant(mat: &[Vec<Polynomial>]) -> Polynomial {
    let n = mat.len();
    if n == 0 {
        return Polynomial::one();
    }
    assert!(mat.iter().all(|r| r.len() == n), "matrix must be square");
    let mut m: Vec<Vec<Polynomial>> = mat.to_vec();
    let mut sign = 1i64;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Polynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = if k == 0 { t } else { div_exact(&t, &prev) };
            }
        }
        prev = m[k][k].clone();
        for row in m.iter_mut().skip(k + 1) {
            row[k] = Polynomial::zero();
        }
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -&det
    } else {
        det
    }
}

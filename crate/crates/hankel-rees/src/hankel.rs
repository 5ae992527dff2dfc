//! Hankel matrices on index windows, their maximal minors as exact
//! polynomials, and the two Laplace expansions that relate a minor to
//! shifted minors one size down.

use crate::chains::{is_chain, Label, LabeledChain};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{determinant, Polynomial};

/// Index grid of the Hankel matrix with `t` rows on the window of `label`:
/// entry `(i,j)` holds the variable index `lo + i + j − 2` (1-based `i,j`),
/// dimensions `t × (hi − lo − t + 2)`.
pub fn hankel_entries(label: Label, t: usize) -> Result<Vec<Vec<u32>>> {
    if t < 1 || t > label.max_rows() {
        return Err(Error::RowCountOutOfRange { t, max: label.max_rows() });
    }
    let cols = (label.hi() - label.lo() + 2) as usize - t;
    Ok((1..=t)
        .map(|i| {
            (1..=cols)
                .map(|j| label.lo() + i as u32 + j as u32 - 2)
                .collect()
        })
        .collect())
}

/// The `r × r` matrix whose determinant is the maximal minor on diagonal
/// `chain`: entry `(i,k) = x_{a_k − k + i}`.  The grid depends only on the
/// diagonal, not on which Hankel window hosts it.
fn minor_matrix(chain: &[u32]) -> Vec<Vec<Polynomial>> {
    let r = chain.len();
    (1..=r as u32)
        .map(|i| {
            chain
                .iter()
                .zip(1u32..)
                .map(|(&a, k)| Polynomial::monomial(Monomial::x(a - k + i)))
                .collect()
        })
        .collect()
}

/// Maximal minor of a bare diagonal chain (no label required); used for
/// windows outside the four supported cuts.
pub fn chain_minor(chain: &[u32]) -> Result<Polynomial> {
    if !is_chain(chain) {
        return Err(Error::BadChain(format!("{chain:?} is not a chain")));
    }
    Ok(determinant(&minor_matrix(chain)))
}

/// The maximal minor `[a_1,…,a_r]` of the labeled chain's Hankel matrix.
/// Its leading term under the diagonal order is `x_{a_1}···x_{a_r}`.
pub fn minor(lc: &LabeledChain) -> Polynomial {
    determinant(&minor_matrix(lc.entries()))
}

/// One term of a Laplace expansion: `sign · x_var · minor(chain)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplaceTerm {
    pub sign: i64,
    pub var: u32,
    pub minor: LabeledChain,
}

/// Laplace expansion of `[a]` along the first row of its matrix:
/// the `j`-th term is `(−1)^{j+1} x_{a_j−j+1} [a_1+1,…,a_{j−1}+1, a_{j+1},…,a_r]`.
pub fn laplace_first_row(lc: &LabeledChain) -> Result<Vec<LaplaceTerm>> {
    let a = lc.entries();
    let r = a.len();
    if r < 2 {
        return Err(Error::LaplaceTooSmall(r));
    }
    let mut out = Vec::with_capacity(r);
    for j in 1..=r {
        let mut rest: Vec<u32> = Vec::with_capacity(r - 1);
        rest.extend(a[..j - 1].iter().map(|&v| v + 1));
        rest.extend_from_slice(&a[j..]);
        let sub = LabeledChain::from_parts(lc.ambient(), lc.label().lo(), lc.label().hi(), &rest)?;
        out.push(LaplaceTerm {
            sign: if j % 2 == 1 { 1 } else { -1 },
            var: a[j - 1] - j as u32 + 1,
            minor: sub,
        });
    }
    Ok(out)
}

/// Laplace expansion of `[a]` along the last row:
/// the `j`-th term is `(−1)^{r+j} x_{a_j+r−j} [a_1,…,a_{j−1}, a_{j+1}−1,…,a_r−1]`.
pub fn laplace_last_row(lc: &LabeledChain) -> Result<Vec<LaplaceTerm>> {
    let a = lc.entries();
    let r = a.len();
    if r < 2 {
        return Err(Error::LaplaceTooSmall(r));
    }
    let mut out = Vec::with_capacity(r);
    for j in 1..=r {
        let mut rest: Vec<u32> = Vec::with_capacity(r - 1);
        rest.extend_from_slice(&a[..j - 1]);
        rest.extend(a[j..].iter().map(|&v| v - 1));
        let sub = LabeledChain::from_parts(lc.ambient(), lc.label().lo(), lc.label().hi(), &rest)?;
        out.push(LaplaceTerm {
            sign: if (r + j) % 2 == 0 { 1 } else { -1 },
            var: a[j - 1] + (r - j) as u32,
            minor: sub,
        });
    }
    Ok(out)
}

/// Sum a Laplace expansion back into a single polynomial.
pub fn laplace_sum(terms: &[LaplaceTerm]) -> Polynomial {
    let mut acc = Polynomial::zero();
    for t in terms {
        let part = minor(&t.minor)
            .mul_monomial(&Monomial::x(t.var))
            .scale(&num::BigRational::from_integer(t.sign.into()));
        acc = &acc + &part;
    }
    acc
}

/// Verify the corner-variable degree bounds on a product of two minors:
/// every term `u` of `[a][b]` satisfies `deg_{x_1}(u) ≤ deg_{x_1}(x_a x_b)`
/// and `deg_{x_n}(u) ≤ deg_{x_n}(x_a x_b)` (both bounds are at most 2).
pub fn degree_bound_check(p: &LabeledChain, q: &LabeledChain) -> bool {
    let n = p.ambient().n();
    let bound = |i: u32| -> u32 {
        let c = |lc: &LabeledChain| u32::from(lc.entries().contains(&i));
        c(p) + c(q)
    };
    let (b1, bn) = (bound(1), bound(n));
    if b1 > 2 || bn > 2 {
        return false;
    }
    let product = &minor(p) * &minor(q);
    let ok = product
        .terms()
        .all(|(m, _)| m.degree_of_x(1) <= b1 && m.degree_of_x(n) <= bn);
    ok
}

//! Buchberger's criterion as a yes/no test with witnesses: a finite set is
//! a Gröbner basis iff every S-polynomial reduces to zero modulo the set.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::monomial::Monomial;
use crate::poly::{reduce, s_polynomial, Polynomial};

/// Resource limits for a Buchberger run.  Exceeding a limit yields
/// [`GroebnerResult::Inconclusive`], never a pass.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    /// Maximum number of S-pairs to reduce (checked up front against the
    /// surviving pair count, so the outcome stays deterministic).
    pub max_spairs: Option<usize>,
    /// Optional wall-clock limit.  Leaving it unset keeps results
    /// byte-reproducible; with a deadline, only inconclusive outcomes can
    /// vary between runs.
    pub deadline: Option<Duration>,
}

/// A failing S-pair: generators `i < j` whose S-polynomial leaves the
/// nonzero `remainder`.  The remainder's leading monomial lies in the
/// initial ideal but outside the span of the generators' leading terms.
#[derive(Clone, Debug)]
pub struct SPairWitness {
    pub i: usize,
    pub j: usize,
    pub remainder: Polynomial,
}

impl SPairWitness {
    /// The monomial that certifies the failure.
    pub fn offending_monomial(&self) -> &Monomial {
        self.remainder
            .leading_monomial()
            .expect("witness remainder is nonzero")
    }
}

#[derive(Debug)]
pub enum GroebnerResult {
    /// Every surviving S-pair reduced to zero.
    IsBasis { pairs_reduced: usize, pairs_skipped: usize },
    /// Some S-pair left a nonzero remainder.
    NotBasis(SPairWitness),
    /// A resource budget was exhausted before a verdict.
    Inconclusive(String),
}

impl GroebnerResult {
    pub fn is_basis(&self) -> bool {
        matches!(self, GroebnerResult::IsBasis { .. })
    }
}

/// S-pairs that must be reduced after Buchberger's two elimination
/// criteria.
///
/// A pair `(i,j)` is dropped when its leading monomials are coprime, or
/// when some `k` has `lm_k | lcm(i,j)` with both `lcm(i,k)` and `lcm(k,j)`
/// *strict* divisors of `lcm(i,j)`.  The strictness keeps the elimination
/// well-founded: each dropped pair only depends on pairs with strictly
/// smaller lcm in the divisibility order, so induction bottoms out at pairs
/// that are actually reduced.
fn surviving_pairs(lms: &[Monomial]) -> (Vec<(usize, usize)>, usize) {
    let n = lms.len();
    let mut keep = Vec::new();
    let mut skipped = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let l = lms[i].lcm(&lms[j]);
            if l == lms[i].mul(&lms[j]) {
                skipped += 1;
                continue;
            }
            let chained = (0..n).any(|k| {
                k != i
                    && k != j
                    && lms[k].divides(&l)
                    && lms[i].lcm(&lms[k]) != l
                    && lms[k].lcm(&lms[j]) != l
            });
            if chained {
                skipped += 1;
            } else {
                keep.push((i, j));
            }
        }
    }
    (keep, skipped)
}

/// Decide whether `gens` is a Gröbner basis of the ideal it generates,
/// under the crate's diagonal term order.
///
/// On failure the witness is the first failing pair in lexicographic pair
/// order, independent of thread count.
pub fn is_groebner(gens: &[Polynomial], budget: &Budget) -> GroebnerResult {
    assert!(
        gens.iter().all(|g| !g.is_zero()),
        "generators must be nonzero"
    );
    if gens.len() < 2 {
        return GroebnerResult::IsBasis { pairs_reduced: 0, pairs_skipped: 0 };
    }
    let lms: Vec<Monomial> = gens
        .iter()
        .map(|g| g.leading_monomial().unwrap().clone())
        .collect();
    let (pairs, pairs_skipped) = surviving_pairs(&lms);
    if let Some(max) = budget.max_spairs {
        if pairs.len() > max {
            return GroebnerResult::Inconclusive(format!(
                "{} surviving S-pairs exceed the budget of {max}",
                pairs.len()
            ));
        }
    }
    let start = Instant::now();
    enum Hit {
        Witness(SPairWitness),
        TimedOut,
    }
    let hit = pairs.par_iter().find_map_first(|&(i, j)| {
        if let Some(limit) = budget.deadline {
            if start.elapsed() > limit {
                return Some(Hit::TimedOut);
            }
        }
        let s = s_polynomial(&gens[i], &gens[j]);
        let r = reduce(&s, gens);
        if r.is_zero() {
            None
        } else {
            Some(Hit::Witness(SPairWitness { i, j, remainder: r }))
        }
    });
    match hit {
        None => GroebnerResult::IsBasis { pairs_reduced: pairs.len(), pairs_skipped },
        Some(Hit::Witness(w)) => GroebnerResult::NotBasis(w),
        Some(Hit::TimedOut) => {
            GroebnerResult::Inconclusive("wall-clock budget exhausted".into())
        }
    }
}

/// Same verdict with both elimination criteria disabled; slow, used to
/// validate the filters.
#[cfg(test)]
pub(crate) fn is_groebner_unfiltered(gens: &[Polynomial]) -> GroebnerResult {
    let mut reduced = 0;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let r = reduce(&s_polynomial(&gens[i], &gens[j]), gens);
            reduced += 1;
            if !r.is_zero() {
                return GroebnerResult::NotBasis(SPairWitness { i, j, remainder: r });
            }
        }
    }
    GroebnerResult::IsBasis { pairs_reduced: reduced, pairs_skipped: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{labeled_chains, Ambient};
    use crate::hankel::minor;
    use crate::poly::Coeff;
    use crate::monomial::Monomial;

    fn p(terms: &[(i64, &[u32])]) -> Polynomial {
        let mut out = Polynomial::zero();
        for &(c, idx) in terms {
            out.add_term(Coeff::from_integer(c.into()), Monomial::from_indices(idx));
        }
        out
    }

    #[test]
    fn single_polynomial_is_a_basis() {
        let g = vec![p(&[(1, &[1, 3]), (-1, &[2, 2])])];
        assert!(is_groebner(&g, &Budget::default()).is_basis());
    }

    #[test]
    fn coprime_leading_terms_short_circuit() {
        let g = vec![p(&[(1, &[1, 1]), (-1, &[2])]), p(&[(1, &[3, 3]), (-1, &[4])])];
        match is_groebner(&g, &Budget::default()) {
            GroebnerResult::IsBasis { pairs_reduced, pairs_skipped } => {
                assert_eq!(pairs_reduced, 0);
                assert_eq!(pairs_skipped, 1);
            }
            other => panic!("expected a basis, got {other:?}"),
        }
    }

    #[test]
    fn detects_a_non_basis_with_witness() {
        // S(x1^3 - x2, x1^2 x2 - x3) = x1 x3 - x2^2, irreducible
        let f = p(&[(1, &[1, 1, 1]), (-1, &[2])]);
        let g = p(&[(1, &[1, 1, 2]), (-1, &[3])]);
        match is_groebner(&[f, g], &Budget::default()) {
            GroebnerResult::NotBasis(w) => {
                assert_eq!((w.i, w.j), (0, 1));
                assert_eq!(w.remainder, p(&[(1, &[1, 3]), (-1, &[2, 2])]));
                assert_eq!(w.offending_monomial(), &Monomial::from_indices(&[1, 3]));
            }
            other => panic!("expected a failure, got {other:?}"),
        }
    }

    #[test]
    fn hankel_two_minors_form_a_basis() {
        let n = Ambient::new(6).unwrap();
        let label = n.labels()[1]; // (1,6)
        assert_eq!((label.lo(), label.hi()), (1, 6));
        let gens: Vec<Polynomial> = labeled_chains(n, label, 2)
            .iter()
            .map(minor)
            .collect();
        assert_eq!(gens.len(), 10);
        assert!(is_groebner(&gens, &Budget::default()).is_basis());
    }

    #[test]
    fn filters_agree_with_the_unfiltered_run() {
        let n = Ambient::new(6).unwrap();
        for label in n.labels() {
            let gens: Vec<Polynomial> = labeled_chains(n, label, 2).iter().map(minor).collect();
            let fast = is_groebner(&gens, &Budget::default());
            let slow = is_groebner_unfiltered(&gens);
            assert_eq!(fast.is_basis(), slow.is_basis());
        }
        let f = p(&[(1, &[1, 1, 1]), (-1, &[2])]);
        let g = p(&[(1, &[1, 1, 2]), (-1, &[3])]);
        let h = p(&[(1, &[2, 2]), (-1, &[1, 3])]);
        let fast = is_groebner(&[f.clone(), g.clone(), h.clone()], &Budget::default());
        let slow = is_groebner_unfiltered(&[f, g, h]);
        assert_eq!(fast.is_basis(), slow.is_basis());
    }

    #[test]
    fn spair_budget_trips_deterministically() {
        let f = p(&[(1, &[1, 1, 1]), (-1, &[2])]);
        let g = p(&[(1, &[1, 1, 2]), (-1, &[3])]);
        match is_groebner(&[f, g], &Budget { max_spairs: Some(0), deadline: None }) {
            GroebnerResult::Inconclusive(msg) => assert!(msg.contains("budget")),
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }
}

//! The presentation ring of the multi-Rees algebra: monomials in `x` and
//! `z` variables, the maps φ and φ^in, standard monomials and their
//! normal forms, the marked quadratic binomial system, straightening of
//! products of minors, and the lifted quadratic relations.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use num::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chains::{
    compare_c, labeled_chains, Ambient, Label, LabeledChain, RawLabeledChain,
};
use crate::error::{Error, Result};
use crate::hankel::minor;
use crate::monomial::{Monomial, RawMonomial, TVar};
use crate::poly::{Coeff, Polynomial};
use crate::tabel::{is_standard_pair, reduce_pair, Tabel};

fn tvar(label: Label, rows: usize) -> TVar {
    TVar { lo: label.lo(), hi: label.hi(), rows: rows as u32 }
}

/// A monomial of the presentation ring: an `x`-power-product times a
/// multiset of `z` variables, the latter stored as the tabel of their
/// labeled chains.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReesMonomial {
    xpart: Monomial,
    tabel: Tabel,
}

impl ReesMonomial {
    pub fn new(ambient: Ambient, xpart: Monomial, rows: Vec<LabeledChain>) -> Result<Self> {
        if xpart.has_t() {
            return Err(Error::Parse("x-part may not contain t variables".into()));
        }
        if let Some((v, _)) = xpart.x_exponents().last() {
            if v > ambient.n() {
                return Err(Error::Parse(format!(
                    "x{v} exceeds the ambient bound {}",
                    ambient.n()
                )));
            }
        }
        Ok(ReesMonomial { xpart, tabel: Tabel::new(ambient, rows)? })
    }

    pub fn from_tabel(xpart: Monomial, tabel: Tabel) -> Self {
        assert!(!xpart.has_t());
        ReesMonomial { xpart, tabel }
    }

    pub fn pure_z(ambient: Ambient, rows: Vec<LabeledChain>) -> Result<Self> {
        Self::new(ambient, Monomial::one(), rows)
    }

    pub fn ambient(&self) -> Ambient {
        self.tabel.ambient()
    }

    pub fn xpart(&self) -> &Monomial {
        &self.xpart
    }

    pub fn tabel(&self) -> &Tabel {
        &self.tabel
    }

    pub fn rows(&self) -> &[LabeledChain] {
        self.tabel.rows()
    }

    pub fn z_degree(&self) -> usize {
        self.tabel.rows().len()
    }

    pub fn x_degree(&self) -> u32 {
        self.xpart.x_degree()
    }

    /// The grading datum preserved by every map here: total `x` degree of
    /// the x-part plus, per `(label, rows)` slot, the number of `z`
    /// factors.
    pub fn multidegree(&self) -> (u32, Vec<((u32, u32, usize), usize)>) {
        let mut counts: HashMap<(u32, u32, usize), usize> = HashMap::new();
        for row in self.tabel.rows() {
            *counts
                .entry((row.label().lo(), row.label().hi(), row.len()))
                .or_insert(0) += 1;
        }
        let mut v: Vec<_> = counts.into_iter().collect();
        v.sort_unstable();
        (self.xpart.x_degree(), v)
    }

    /// The monomial image under `φ^in`: each `z`-factor contributes its
    /// diagonal product `x_{a_1}···x_{a_r}` times `t[σ,r]`.
    pub fn phi_in(&self) -> Monomial {
        let mut m = self.xpart.clone();
        for row in self.tabel.rows() {
            m = m.mul(&Monomial::from_indices(row.entries()));
            m = m.mul(&Monomial::t(tvar(row.label(), row.len())));
        }
        m
    }

    /// The polynomial image under `φ`: each `z`-factor contributes its full
    /// minor times `t[σ,r]`.
    pub fn phi(&self) -> Polynomial {
        let mut p = Polynomial::monomial(self.xpart.clone());
        for row in self.tabel.rows() {
            p = &p * &minor(row);
            p = p.mul_monomial(&Monomial::t(tvar(row.label(), row.len())));
        }
        p
    }

    /// A monomial is standard when its tabel is standard and every `x`
    /// variable `i` of the x-part satisfies, against every row `(σ,a)`:
    /// `i ≤ a_1`, or `σ₂ < i`, or `i ∈ interval(a)`.
    pub fn is_standard(&self) -> bool {
        self.tabel.is_standard() && self.x_violation().is_none()
    }

    fn x_violation(&self) -> Option<(u32, usize)> {
        for (i, _) in self.xpart.x_exponents() {
            for (r, row) in self.tabel.rows().iter().enumerate() {
                if i <= row.entries()[0] {
                    continue;
                }
                if row.label().hi() < i {
                    continue;
                }
                if row.chain().interval().contains(i) {
                    continue;
                }
                return Some((i, r));
            }
        }
        None
    }

    /// The unique standard monomial with the same `φ^in` image and
    /// multidegree, computed by alternating tabel reduction with x-swaps:
    /// a violating `x_i` is exchanged with the largest chain entry below it.
    pub fn standardize(&self) -> ReesMonomial {
        let mut xpart = self.xpart.clone();
        let mut tabel = self.tabel.clone();
        // each swap lowers the index sum of the x-part by at least one
        let mut budget = (self.ambient().n() * self.x_degree()) as usize + 1;
        loop {
            tabel = tabel.reduce();
            let current = ReesMonomial { xpart: xpart.clone(), tabel: tabel.clone() };
            let Some((i, r)) = current.x_violation() else {
                debug_assert!(current.is_standard());
                return current;
            };
            budget = budget
                .checked_sub(1)
                .expect("monomial standardization exceeded its swap budget");
            let row = &tabel.rows()[r];
            let a = row.entries();
            let t = a
                .iter()
                .rposition(|&e| e < i)
                .expect("violating variable exceeds the first chain entry");
            let mut entries = a.to_vec();
            entries[t] = i;
            let replaced =
                LabeledChain::from_parts(row.ambient(), row.label().lo(), row.label().hi(), &entries)
                    .expect("x-swap produced an invalid labeled chain");
            xpart = xpart
                .try_div(&Monomial::x(i))
                .expect("violating variable is present in the x-part")
                .mul(&Monomial::x(a[t]));
            let mut rows = tabel.rows().to_vec();
            rows[r] = replaced;
            tabel = Tabel::new(tabel.ambient(), rows).expect("x-swap broke the tabel");
        }
    }
}

impl fmt::Display for ReesMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.xpart.is_one() && self.tabel.rows().is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        if !self.xpart.is_one() {
            write!(f, "{}", self.xpart)?;
            first = false;
        }
        for row in self.tabel.rows() {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "z[{row}]")?;
            first = false;
        }
        Ok(())
    }
}

/// JSON shape of a presentation monomial.
#[derive(Serialize, Deserialize)]
pub struct RawReesMonomial {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<(u32, u32)>,
    pub rows: Vec<RawLabeledChain>,
}

impl RawReesMonomial {
    pub fn of(mv: &ReesMonomial) -> Self {
        RawReesMonomial {
            x: mv.xpart.x_exponents().collect(),
            rows: mv.tabel.rows().iter().map(RawLabeledChain::of).collect(),
        }
    }

    pub fn build(&self, ambient: Ambient) -> Result<ReesMonomial> {
        let raw = RawMonomial { x: self.x.clone(), t: vec![] };
        let rows = self
            .rows
            .iter()
            .map(|r| r.build(ambient))
            .collect::<Result<Vec<_>>>()?;
        ReesMonomial::new(ambient, raw.build(), rows)
    }
}

/// A non-standard quadratic monomial together with its standard form; the
/// rewriting rule "replace `marked` by `tail`".
#[derive(Clone, Debug)]
pub struct MarkedBinomial {
    pub marked: ReesMonomial,
    pub tail: ReesMonomial,
}

impl MarkedBinomial {
    /// Both sides share `φ^in` image and multidegree; the marked side is
    /// non-standard, the tail standard, and the two differ.
    pub fn is_coherent(&self) -> bool {
        self.marked.phi_in() == self.tail.phi_in()
            && self.marked.multidegree() == self.tail.multidegree()
            && !self.marked.is_standard()
            && self.tail.is_standard()
            && self.marked != self.tail
    }
}

/// The marked quadratic system: one binomial per non-standard monomial
/// `x_i z_{σ,a}` or `z_{σ,a} z_{γ,b}` within the given bounds, indexed for
/// fast rewriting.
pub struct MarkedSet {
    ambient: Ambient,
    max_len: usize,
    binomials: Vec<MarkedBinomial>,
    zz: HashMap<(LabeledChain, LabeledChain), usize>,
    xz: HashMap<(u32, LabeledChain), usize>,
    zz_count: usize,
}

impl MarkedSet {
    /// Enumerates every quadratic non-standard monomial over chains of
    /// length at most `max_len` and pairs it with its standard form.
    /// z-z binomials come first (pairs in descending row order), then x-z
    /// binomials (variables ascending, rows descending).
    pub fn generate(ambient: Ambient, max_len: usize) -> Self {
        let chains = crate::chains::all_labeled_chains(ambient, max_len);
        let mut binomials = Vec::new();
        let mut zz = HashMap::new();
        let mut xz = HashMap::new();
        for i in 0..chains.len() {
            for j in i..chains.len() {
                let (p, q) = (&chains[i], &chains[j]);
                if is_standard_pair(p, q) {
                    continue;
                }
                let marked = ReesMonomial::pure_z(ambient, vec![p.clone(), q.clone()])
                    .expect("chains share the ambient");
                let tail = marked.standardize();
                zz.insert((p.clone(), q.clone()), binomials.len());
                binomials.push(MarkedBinomial { marked, tail });
            }
        }
        let zz_count = binomials.len();
        for v in 1..=ambient.n() {
            for row in &chains {
                let marked = ReesMonomial::new(ambient, Monomial::x(v), vec![row.clone()])
                    .expect("chain is valid");
                if marked.is_standard() {
                    continue;
                }
                let tail = marked.standardize();
                xz.insert((v, row.clone()), binomials.len());
                binomials.push(MarkedBinomial { marked, tail });
            }
        }
        MarkedSet { ambient, max_len, binomials, zz, xz, zz_count }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn binomials(&self) -> &[MarkedBinomial] {
        &self.binomials
    }

    /// The z-z binomials only (prefix of `binomials`).
    pub fn zz_binomials(&self) -> &[MarkedBinomial] {
        &self.binomials[..self.zz_count]
    }

    pub fn xz_binomials(&self) -> &[MarkedBinomial] {
        &self.binomials[self.zz_count..]
    }

    fn occurrences(&self, mv: &ReesMonomial) -> Vec<Occurrence> {
        let rows = mv.rows();
        let mut occ = Vec::new();
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                // rows are kept sorted descending, so (i, j) is ordered
                if let Some(&b) = self.zz.get(&(rows[i].clone(), rows[j].clone())) {
                    occ.push(Occurrence::ZZ(i, j, b));
                }
            }
        }
        for (v, _) in mv.xpart.x_exponents() {
            for (i, row) in rows.iter().enumerate() {
                if let Some(&b) = self.xz.get(&(v, row.clone())) {
                    occ.push(Occurrence::XZ(v, i, b));
                }
            }
        }
        occ
    }

    fn apply(&self, mv: &ReesMonomial, occ: &Occurrence) -> ReesMonomial {
        match *occ {
            Occurrence::ZZ(i, j, b) => {
                let tail = &self.binomials[b].tail;
                debug_assert!(tail.xpart.is_one());
                let mut rows: Vec<LabeledChain> = Vec::with_capacity(mv.rows().len());
                for (k, row) in mv.rows().iter().enumerate() {
                    if k != i && k != j {
                        rows.push(row.clone());
                    }
                }
                rows.extend(tail.rows().iter().cloned());
                ReesMonomial::new(self.ambient, mv.xpart.clone(), rows)
                    .expect("rewrite preserves validity")
            }
            Occurrence::XZ(v, i, b) => {
                let tail = &self.binomials[b].tail;
                debug_assert_eq!(tail.rows().len(), 1);
                let mut rows = mv.rows().to_vec();
                rows[i] = tail.rows()[0].clone();
                let xpart = mv
                    .xpart
                    .try_div(&Monomial::x(v))
                    .expect("occurrence variable divides the x-part")
                    .mul(&tail.xpart);
                ReesMonomial::new(self.ambient, xpart, rows).expect("rewrite preserves validity")
            }
        }
    }

    fn rewrite_with(
        &self,
        mv: &ReesMonomial,
        mut choose: impl FnMut(usize) -> usize,
    ) -> Result<ReesMonomial> {
        let mut current = mv.clone();
        let mut budget = 10_000usize
            + 100 * (current.z_degree() + current.x_degree() as usize).pow(2)
                * self.ambient.n() as usize;
        loop {
            let occ = self.occurrences(&current);
            if occ.is_empty() {
                return Ok(current);
            }
            budget = budget.checked_sub(1).ok_or_else(|| {
                Error::BudgetExceeded(format!("rewriting {mv} did not converge"))
            })?;
            let pick = choose(occ.len());
            current = self.apply(&current, &occ[pick]);
        }
    }

    /// Normal form, always replacing the first marked occurrence.
    pub fn rewrite(&self, mv: &ReesMonomial) -> Result<ReesMonomial> {
        self.rewrite_with(mv, |_| 0)
    }

    /// Normal form via randomly chosen occurrences; converges to the same
    /// result as [`MarkedSet::rewrite`] for any strategy.
    pub fn rewrite_random<R: Rng>(&self, mv: &ReesMonomial, rng: &mut R) -> Result<ReesMonomial> {
        self.rewrite_with(mv, |n| rng.gen_range(0..n))
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<serde_json::Value> = self
            .binomials
            .iter()
            .map(|b| {
                serde_json::json!({
                    "marked": RawReesMonomial::of(&b.marked),
                    "tail": RawReesMonomial::of(&b.tail),
                })
            })
            .collect();
        serde_json::to_string(&raw).expect("binomial serialization cannot fail")
    }
}

enum Occurrence {
    /// Rows `i < j` form a marked pair (binomial index).
    ZZ(usize, usize, usize),
    /// Variable `v` against row `i` is marked (binomial index).
    XZ(u32, usize, usize),
}

// ---------------------------------------------------------------------------
// straightening
// ---------------------------------------------------------------------------

/// A standard representation of a product of two minors:
/// `[a][b] = Σ λ_i [c^(i)][d^(i)]` with every pair standard and the leading
/// terms strictly decreasing; `λ_1 = 1` and the first pair is the standard
/// form of the input pair.
#[derive(Clone, Debug)]
pub struct StandardRepresentation {
    pub pairs: Vec<(Coeff, LabeledChain, LabeledChain)>,
}

impl StandardRepresentation {
    /// Expands `Σ λ_i [c^(i)][d^(i)]`.
    pub fn polynomial(&self) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (l, c, d) in &self.pairs {
            acc = &acc + &(&minor(c) * &minor(d)).scale(l);
        }
        acc
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<serde_json::Value> = self
            .pairs
            .iter()
            .map(|(l, c, d)| {
                serde_json::json!({
                    "lambda": l.to_string(),
                    "pair": [RawLabeledChain::of(c), RawLabeledChain::of(d)],
                })
            })
            .collect();
        serde_json::to_string(&raw).expect("representation serialization cannot fail")
    }
}

/// Number of monomials of total degree `d` in `n` variables; the hard upper
/// bound on straightening loop length.
fn monomial_count(n: u32, d: u32) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = acc * (n as u128 - 1 + i) / i;
    }
    usize::try_from(acc).unwrap_or(usize::MAX)
}

/// Splits a pure-`x` monomial of degree `r + s` into a labeled pair of
/// chains matching `shape`, returned in standard form.  Bipartitions are
/// searched in lexicographic order; the standardized result is independent
/// of which valid bipartition is found first.
pub fn factor_leading_term(
    ambient: Ambient,
    m: &Monomial,
    shape: ((Label, usize), (Label, usize)),
) -> Result<(LabeledChain, LabeledChain)> {
    let ((sigma, r), (gamma, s)) = shape;
    if m.has_t() || m.x_degree() as usize != r + s {
        return Err(Error::DegreeMismatch(format!(
            "{m} does not have x-degree {}",
            r + s
        )));
    }
    let indices = m.x_indices();
    let mut seen = std::collections::HashSet::new();
    for picks in (0..indices.len()).combinations(r) {
        let e: Vec<u32> = picks.iter().map(|&p| indices[p]).collect();
        if !seen.insert(e.clone()) {
            continue;
        }
        let mut in_e = vec![false; indices.len()];
        for &p in &picks {
            in_e[p] = true;
        }
        let f: Vec<u32> = indices
            .iter()
            .enumerate()
            .filter(|&(pos, _)| !in_e[pos])
            .map(|(_, &v)| v)
            .collect();
        let Ok(p) = LabeledChain::from_parts(ambient, sigma.lo(), sigma.hi(), &e) else {
            continue;
        };
        let Ok(q) = LabeledChain::from_parts(ambient, gamma.lo(), gamma.hi(), &f) else {
            continue;
        };
        return Ok(reduce_pair(&p, &q));
    }
    Err(Error::NoBipartition(format!(
        "{m} admits no chain bipartition for the given shape"
    )))
}

/// Straightens the product `[a][b]`: subtracts the standard pair's product,
/// then repeatedly factors the leading term of the difference through
/// [`factor_leading_term`] until nothing is left.  Inputs may come in
/// either row order.
pub fn straighten(p: &LabeledChain, q: &LabeledChain) -> Result<StandardRepresentation> {
    let (p, q) = match compare_c(p, q)? {
        std::cmp::Ordering::Less => (q, p),
        _ => (p, q),
    };
    let shape = ((p.label(), p.len()), (q.label(), q.len()));
    let ambient = p.ambient();
    let target = &minor(p) * &minor(q);
    let (c1, d1) = reduce_pair(p, q);
    let mut rep = StandardRepresentation { pairs: vec![(Coeff::one(), c1.clone(), d1.clone())] };
    let mut delta = &target - &(&minor(&c1) * &minor(&d1));
    let mut budget = monomial_count(ambient.n(), (p.len() + q.len()) as u32) + 8;
    let mut last_lm = Monomial::from_indices(&[p.entries(), q.entries()].concat());
    while !delta.is_zero() {
        budget = budget.checked_sub(1).ok_or_else(|| {
            Error::NonConvergence(format!("straightening [{p}][{q}] did not terminate"))
        })?;
        let (lm, lc) = delta.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        assert!(
            lm < last_lm,
            "straightening leading terms must strictly decrease"
        );
        let (c, d) = factor_leading_term(ambient, &lm, shape)?;
        debug_assert!(is_standard_pair(&c, &d));
        delta = &delta - &(&minor(&c) * &minor(&d)).scale(&lc);
        rep.pairs.push((lc, c, d));
        last_lm = lm;
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// lifted relations
// ---------------------------------------------------------------------------

/// A formal combination of presentation monomials.
#[derive(Clone, Debug)]
pub struct ReesPolynomial {
    pub terms: Vec<(Coeff, ReesMonomial)>,
}

impl ReesPolynomial {
    /// Evaluates under `φ` (minors expanded).
    pub fn phi(&self) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (c, mv) in &self.terms {
            acc = &acc + &mv.phi().scale(c);
        }
        acc
    }

    /// All terms share the same `(x-degree, z-slot counts)` datum.
    pub fn is_multihomogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(_, mv)| mv.multidegree());
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }
}

impl fmt::Display for ReesPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, mv)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{mv}")?;
            } else {
                write!(f, "({c})*{mv}")?;
            }
        }
        Ok(())
    }
}

/// Lifts one x-z binomial `x_i z_a − x_j z_c` to an element of the kernel
/// of `φ`: expresses `x_i [a]` as a combination of standard `x_e [f]`
/// terms by leading-term elimination.
fn lift_xz(set: &MarkedSet, b: &MarkedBinomial) -> Result<ReesPolynomial> {
    let ambient = set.ambient();
    let row = &b.marked.rows()[0];
    let label = row.label();
    let r = row.len();
    let mut terms: Vec<(Coeff, ReesMonomial)> = vec![(Coeff::one(), b.marked.clone())];
    let mut delta = b.marked.phi().map_monomials(|m| m.x_part());
    let mut budget = monomial_count(ambient.n(), r as u32 + 1) + 8;
    while !delta.is_zero() {
        budget = budget.checked_sub(1).ok_or_else(|| {
            Error::NonConvergence(format!("lifting {} did not terminate", b.marked))
        })?;
        let (lm, lc) = delta.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let indices = lm.x_indices();
        let mut factored = None;
        for lone in 0..indices.len() {
            let mut rest = indices.clone();
            let v = rest.remove(lone);
            let Ok(f) = LabeledChain::from_parts(ambient, label.lo(), label.hi(), &rest) else {
                continue;
            };
            let mv = ReesMonomial::new(ambient, Monomial::x(v), vec![f])?;
            factored = Some(mv.standardize());
            break;
        }
        let mv = factored.ok_or_else(|| {
            Error::NoBipartition(format!("{lm} admits no variable-chain factorization"))
        })?;
        delta = &delta - &mv.phi().map_monomials(|m| m.x_part()).scale(&lc);
        terms.push((-lc, mv));
    }
    // first recorded term after the marked one is its standard form
    debug_assert_eq!(terms.get(1).map(|(_, mv)| mv), Some(&b.tail));
    debug_assert_eq!(
        terms.get(1).map(|(c, _)| c),
        Some(&-Coeff::one())
    );
    Ok(ReesPolynomial { terms })
}

/// Lifts every marked binomial to an element of `ker φ`:
/// z-z binomials via straightening
/// (`z_a z_b − Σ λ_i z_{c^(i)} z_{d^(i)}`), x-z binomials via the
/// length-preserving relations of a single Hankel family.
pub fn lift_marked_set(set: &MarkedSet) -> Result<Vec<ReesPolynomial>> {
    let ambient = set.ambient();
    let mut out = Vec::with_capacity(set.binomials().len());
    for b in set.zz_binomials() {
        let rows = b.marked.rows();
        let rep = straighten(&rows[0], &rows[1])?;
        let mut terms: Vec<(Coeff, ReesMonomial)> = vec![(Coeff::one(), b.marked.clone())];
        for (l, c, d) in &rep.pairs {
            terms.push((
                -l.clone(),
                ReesMonomial::pure_z(ambient, vec![c.clone(), d.clone()])?,
            ));
        }
        debug_assert_eq!(terms[1].1, b.tail);
        out.push(ReesPolynomial { terms });
    }
    for b in set.xz_binomials() {
        out.push(lift_xz(set, b)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// enumeration helpers
// ---------------------------------------------------------------------------

/// The `(label, rows)` slots available under a length bound, in label-rank
/// then length order.
pub fn label_length_slots(ambient: Ambient, max_len: usize) -> Vec<(Label, usize)> {
    let mut out = Vec::new();
    for label in ambient.labels() {
        for len in 1..=label.max_rows().min(max_len) {
            out.push((label, len));
        }
    }
    out
}

/// All multisets of `z_deg` slots; fibers of `φ^in` never mix shapes, so
/// exhaustive sweeps can shard on these.
pub fn shape_multisets(ambient: Ambient, max_len: usize, z_deg: usize) -> Vec<Vec<(Label, usize)>> {
    label_length_slots(ambient, max_len)
        .into_iter()
        .combinations_with_replacement(z_deg)
        .collect()
}

/// Every row multiset realizing the given shape multiset.
pub fn tabels_of_shape(ambient: Ambient, shape: &[(Label, usize)]) -> Vec<Vec<LabeledChain>> {
    let mut groups: Vec<((Label, usize), usize)> = Vec::new();
    for &slot in shape {
        match groups.last_mut() {
            Some((s, c)) if *s == slot => *c += 1,
            _ => groups.push((slot, 1)),
        }
    }
    let per_group: Vec<Vec<Vec<LabeledChain>>> = groups
        .iter()
        .map(|&((label, len), count)| {
            labeled_chains(ambient, label, len)
                .into_iter()
                .combinations_with_replacement(count)
                .collect()
        })
        .collect();
    per_group
        .into_iter()
        .multi_cartesian_product()
        .map(|parts| parts.into_iter().flatten().collect())
        .collect()
}

/// All `x` monomials of degree exactly `d` on variables `1..=n`.
pub fn x_monomials_of_degree(n: u32, d: u32) -> Vec<Monomial> {
    (1..=n)
        .combinations_with_replacement(d as usize)
        .map(|idx| Monomial::from_indices(&idx))
        .collect()
}

/// A uniform-ish random presentation monomial for property tests.
pub fn random_rees_monomial<R: Rng>(
    rng: &mut R,
    ambient: Ambient,
    max_len: usize,
    z_deg: usize,
    x_deg: u32,
) -> ReesMonomial {
    let slots = label_length_slots(ambient, max_len);
    let mut rows = Vec::with_capacity(z_deg);
    while rows.len() < z_deg {
        let (label, len) = slots[rng.gen_range(0..slots.len())];
        if let Some(row) = crate::chains::random_labeled_chain(rng, ambient, label, len) {
            rows.push(row);
        }
    }
    let mut xpart = Monomial::one();
    for _ in 0..x_deg {
        xpart = xpart.mul(&Monomial::x(rng.gen_range(1..=ambient.n())));
    }
    ReesMonomial::new(ambient, xpart, rows).expect("random rows share the ambient")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn amb(n: u32) -> Ambient {
        Ambient::new(n).unwrap()
    }

    fn lc(n: u32, lo: u32, hi: u32, entries: &[u32]) -> LabeledChain {
        LabeledChain::from_parts(amb(n), lo, hi, entries).unwrap()
    }

    fn zmv(n: u32, rows: &[(u32, u32, &[u32])]) -> ReesMonomial {
        ReesMonomial::pure_z(
            amb(n),
            rows.iter().map(|&(lo, hi, e)| lc(n, lo, hi, e)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn phi_in_examples() {
        let mv = zmv(6, &[(1, 6, &[1, 3])]);
        assert_eq!(mv.phi_in().to_string(), "x1^1*x3^1*t[1,6,2]^1");
        let mv2 = ReesMonomial::new(amb(6), Monomial::x(2), vec![lc(6, 1, 6, &[1, 4])]).unwrap();
        assert_eq!(mv2.phi_in().to_string(), "x1^1*x2^1*x4^1*t[1,6,2]^1");
    }

    #[test]
    fn phi_expands_minors() {
        let mv = zmv(6, &[(1, 6, &[1, 3])]);
        let img = mv.phi();
        assert_eq!(img.to_string(), "x1^1*x3^1*t[1,6,2]^1 - x2^2*t[1,6,2]^1");
        let pure = ReesMonomial::new(amb(6), Monomial::from_indices(&[2, 5]), vec![]).unwrap();
        assert_eq!(pure.phi(), Polynomial::monomial(Monomial::from_indices(&[2, 5])));
        // leading x-data of phi matches phi_in
        let mv3 = zmv(7, &[(1, 7, &[2, 4, 6]), (2, 6, &[3, 5])]);
        assert_eq!(
            mv3.phi().leading_monomial().unwrap().x_part(),
            mv3.phi_in().x_part()
        );
    }

    #[test]
    fn standardness_of_x_against_rows() {
        let ok = ReesMonomial::new(amb(6), Monomial::x(1), vec![lc(6, 1, 6, &[2, 4])]).unwrap();
        assert!(ok.is_standard());
        let bad = ReesMonomial::new(amb(6), Monomial::x(3), vec![lc(6, 1, 6, &[2, 5])]).unwrap();
        assert!(!bad.is_standard());
        // beyond the window is fine: x5 against a row of label (1,4) would
        // be, but such labels don't exist; use hi < i via label (2,5) at n=6
        let above = ReesMonomial::new(amb(6), Monomial::x(6), vec![lc(6, 2, 5, &[2, 4])]).unwrap();
        assert!(above.is_standard());
        // the interval clause
        let inside = ReesMonomial::new(amb(6), Monomial::x(4), vec![lc(6, 1, 6, &[2, 5])]).unwrap();
        assert!(inside.is_standard());
    }

    #[test]
    fn standardize_swaps_x_into_the_chain() {
        let bad = ReesMonomial::new(amb(6), Monomial::x(3), vec![lc(6, 1, 6, &[2, 5])]).unwrap();
        let fixed = bad.standardize();
        assert_eq!(
            fixed,
            ReesMonomial::new(amb(6), Monomial::x(2), vec![lc(6, 1, 6, &[3, 5])]).unwrap()
        );
        assert_eq!(fixed.phi_in(), bad.phi_in());
        assert_eq!(fixed.multidegree(), bad.multidegree());
        assert!(fixed.is_standard());
        assert_eq!(fixed.standardize(), fixed);
    }

    #[test]
    fn standardize_cascades_swaps() {
        let bad =
            ReesMonomial::new(amb(8), Monomial::x(8), vec![lc(8, 1, 8, &[1, 4, 6])]).unwrap();
        let fixed = bad.standardize();
        assert_eq!(
            fixed,
            ReesMonomial::new(amb(8), Monomial::x(1), vec![lc(8, 1, 8, &[4, 6, 8])]).unwrap()
        );
        assert_eq!(fixed.phi_in(), bad.phi_in());
    }

    #[test]
    fn standardize_reduces_the_tabel() {
        let a = zmv(
            30,
            &[
                (1, 30, &[1, 4, 18, 24, 30]),
                (2, 29, &[5, 7, 11, 15, 17, 19, 22, 28]),
            ],
        );
        let b = zmv(
            30,
            &[
                (1, 30, &[1, 5, 11, 18, 30]),
                (2, 29, &[4, 7, 15, 17, 19, 22, 24, 28]),
            ],
        );
        assert!(!a.is_standard());
        assert!(b.is_standard());
        assert_eq!(a.standardize(), b);
    }

    #[test]
    fn marked_set_is_coherent() {
        let set = MarkedSet::generate(amb(6), 2);
        assert!(!set.binomials().is_empty());
        for b in set.binomials() {
            assert!(b.is_coherent(), "{} -> {}", b.marked, b.tail);
        }
        assert_eq!(set.zz_binomials().len(), 229);
        assert_eq!(set.xz_binomials().len(), 79);
    }

    #[test]
    fn rewrite_agrees_with_standardize() {
        let set = MarkedSet::generate(amb(6), 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let mv = random_rees_monomial(&mut rng, amb(6), 2, 3, 2);
            let nf = set.rewrite(&mv).unwrap();
            assert_eq!(nf, mv.standardize(), "{mv}");
            assert!(nf.is_standard());
            let r1 = set.rewrite_random(&mv, &mut rng).unwrap();
            let r2 = set.rewrite_random(&mv, &mut rng).unwrap();
            assert_eq!(r1, nf);
            assert_eq!(r2, nf);
        }
        // standard monomials rewrite to themselves
        let std_mv = zmv(6, &[(1, 6, &[1, 3])]);
        assert_eq!(set.rewrite(&std_mv).unwrap(), std_mv);
    }

    #[test]
    fn factoring_a_leading_term() {
        let label = Label::new(amb(6), 1, 6).unwrap();
        let m = Monomial::from_indices(&[1, 2, 3, 5]);
        let (c, d) = factor_leading_term(amb(6), &m, ((label, 2), (label, 2))).unwrap();
        assert!(is_standard_pair(&c, &d));
        let mut all: Vec<u32> = [c.entries(), d.entries()].concat();
        all.sort_unstable();
        assert_eq!(all, vec![1, 2, 3, 5]);
        let bad = factor_leading_term(amb(6), &Monomial::x(1), ((label, 2), (label, 2)));
        assert!(matches!(bad, Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn straighten_worked_pair() {
        let p = lc(6, 1, 6, &[2, 4]);
        let q = lc(6, 1, 6, &[1, 5]);
        let rep = straighten(&p, &q).unwrap();
        assert_eq!(rep.polynomial(), &minor(&p) * &minor(&q));
        assert!(rep.pairs[0].0.is_one());
        for (_, c, d) in &rep.pairs {
            assert!(is_standard_pair(c, d));
        }
        for w in rep.pairs.windows(2) {
            let lm = |t: &(Coeff, LabeledChain, LabeledChain)| {
                Monomial::from_indices(&[t.1.entries(), t.2.entries()].concat())
            };
            assert!(lm(&w[0]) > lm(&w[1]));
        }
    }

    #[test]
    fn straighten_standard_pair_is_single_term() {
        let p = lc(6, 1, 6, &[1, 3]);
        let rep = straighten(&p, &p).unwrap();
        assert_eq!(rep.pairs.len(), 1);
        assert_eq!(rep.polynomial(), &minor(&p) * &minor(&p));
    }

    #[test]
    fn straighten_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let ambient = amb(8);
        for _ in 0..60 {
            let slots = label_length_slots(ambient, 3);
            let (l1, r1) = slots[rng.gen_range(0..slots.len())];
            let (l2, r2) = slots[rng.gen_range(0..slots.len())];
            let (Some(p), Some(q)) = (
                crate::chains::random_labeled_chain(&mut rng, ambient, l1, r1),
                crate::chains::random_labeled_chain(&mut rng, ambient, l2, r2),
            ) else {
                continue;
            };
            let rep = straighten(&p, &q).unwrap();
            assert_eq!(rep.polynomial(), &minor(&p) * &minor(&q), "{p} {q}");
        }
    }

    #[test]
    fn lifts_evaluate_to_zero() {
        let set = MarkedSet::generate(amb(6), 2);
        let lifted = lift_marked_set(&set).unwrap();
        assert_eq!(lifted.len(), set.binomials().len());
        for (l, b) in lifted.iter().zip(set.binomials()) {
            assert!(l.phi().is_zero(), "lift of {} -> {}", b.marked, b.tail);
            assert!(l.is_multihomogeneous());
        }
    }

    #[test]
    fn enumeration_helpers_cover_the_space() {
        let ambient = amb(6);
        let slots = label_length_slots(ambient, 2);
        // labels (1,5),(1,6),(2,5),(2,6) each admit lengths 1 and 2
        assert_eq!(slots.len(), 8);
        let shapes = shape_multisets(ambient, 2, 2);
        assert_eq!(shapes.len(), 8 * 9 / 2);
        let label = Label::new(ambient, 1, 6).unwrap();
        let tabs = tabels_of_shape(ambient, &[(label, 2), (label, 2)]);
        // 10 choose-2-with-repetition multisets of the 10 chains
        assert_eq!(tabs.len(), 55);
        assert_eq!(x_monomials_of_degree(6, 2).len(), 21);
        assert_eq!(x_monomials_of_degree(6, 0), vec![Monomial::one()]);
    }

    #[test]
    fn rees_monomial_json_round_trip() {
        let mv = ReesMonomial::new(
            amb(6),
            Monomial::from_indices(&[2, 2]),
            vec![lc(6, 1, 6, &[1, 4]), lc(6, 2, 6, &[3, 5])],
        )
        .unwrap();
        let raw = RawReesMonomial::of(&mv);
        let js = serde_json::to_string(&raw).unwrap();
        let back: RawReesMonomial = serde_json::from_str(&js).unwrap();
        assert_eq!(back.build(amb(6)).unwrap(), mv);
    }
}

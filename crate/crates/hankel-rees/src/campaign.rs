//! Verification campaigns and reports: Gröbner checks for products of
//! determinantal ideals, initial-ideal commutation, the non-close-cut
//! counterexample, and replay of embedded golden examples.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::chains::{chains_in_window, labeled_chains, Ambient, Label, LabeledChain};
use crate::error::{Error, Result};
use crate::groebner::{is_groebner, Budget, GroebnerResult};
use crate::hankel::{chain_minor, laplace_last_row, laplace_sum, minor};
use crate::monomial::Monomial;
use crate::poly::{Coeff, Polynomial};
use crate::tabel::{
    assign_labels, transform_antidiagonal, transform_columnwise, transform_diagonal, Tabel,
};

/// What a campaign runs on: the ambient bound, the ideals selected as
/// `(label, minor size)`, and resource limits.
#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub ambient: Ambient,
    pub selectors: Vec<(Label, usize)>,
    /// Highest degree swept by dimension cross-checks.
    pub degree_bound: u32,
    pub seed: u64,
    pub max_spairs: Option<usize>,
}

impl CampaignConfig {
    pub fn new(ambient: Ambient, selectors: Vec<(Label, usize)>) -> Result<Self> {
        if selectors.is_empty() {
            return Err(Error::Parse("at least one ideal selector required".into()));
        }
        for &(label, len) in &selectors {
            if len < 1 || len > label.max_rows() {
                return Err(Error::RowCountOutOfRange { t: len, max: label.max_rows() });
            }
        }
        let total: usize = selectors.iter().map(|&(_, len)| len).sum();
        Ok(CampaignConfig {
            ambient,
            selectors,
            degree_bound: total as u32 + 4,
            seed: 0,
            max_spairs: None,
        })
    }

    fn generator_degree(&self) -> u32 {
        self.selectors.iter().map(|&(_, len)| len as u32).sum()
    }

    fn id(&self, kind: &str) -> String {
        let sel = self
            .selectors
            .iter()
            .map(|(l, r)| format!("{},{}:{}", l.lo(), l.hi(), r))
            .collect::<Vec<_>>()
            .join("+");
        format!(
            "{kind} n={} ideals={sel} bound={} seed={}",
            self.ambient.n(),
            self.degree_bound,
            self.seed
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

/// One verified statement inside a report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn pass(name: &str, detail: impl Into<Option<String>>) -> Self {
        Check { name: name.into(), status: Status::Pass, detail: detail.into(), witness: None }
    }

    fn fail(name: &str, witness: String) -> Self {
        Check { name: name.into(), status: Status::Fail, detail: None, witness: Some(witness) }
    }

    fn inconclusive(name: &str, detail: String) -> Self {
        Check {
            name: name.into(),
            status: Status::Inconclusive,
            detail: Some(detail),
            witness: None,
        }
    }
}

/// Outcome of a campaign.  `canonical_json` omits the timing field so that
/// reports are byte-identical across runs and worker counts.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub campaign: String,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    fn assemble(campaign: String, checks: Vec<Check>, started: Instant) -> Self {
        let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
        Report {
            schema: "hankel-rees/1",
            campaign,
            status,
            checks,
            elapsed_ms: Some(started.elapsed().as_millis() as u64),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Deterministic form: the timing field stripped.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.elapsed_ms = None;
        serde_json::to_string(&c).expect("report serialization cannot fail")
    }
}

/// The natural generators of a product of the selected ideals: all products
/// of one maximal minor per selector (full cartesian product, so the count
/// is the product of the per-ideal counts).
pub fn natural_generators(ambient: Ambient, selectors: &[(Label, usize)]) -> Vec<Polynomial> {
    let mut acc = vec![Polynomial::one()];
    for &(label, len) in selectors {
        let minors: Vec<Polynomial> = labeled_chains(ambient, label, len).iter().map(minor).collect();
        acc = acc
            .iter()
            .flat_map(|p| minors.iter().map(move |m| p * m))
            .collect();
    }
    acc
}

fn dedupe(polys: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(polys.len());
    for p in polys {
        if seen.insert(p.to_string()) {
            out.push(p);
        }
    }
    out
}

fn groebner_check(name: &str, gens: &[Polynomial], budget: &Budget) -> (Check, Option<Monomial>) {
    match is_groebner(gens, budget) {
        GroebnerResult::IsBasis { pairs_reduced, pairs_skipped } => (
            Check::pass(
                name,
                Some(format!(
                    "{} generators, {pairs_reduced} S-pairs reduced, {pairs_skipped} skipped",
                    gens.len()
                )),
            ),
            None,
        ),
        GroebnerResult::NotBasis(w) => {
            let m = w.offending_monomial().clone();
            (
                Check::fail(
                    name,
                    format!(
                        "S-pair ({},{}) leaves remainder {}; offending monomial {m}",
                        w.i, w.j, w.remainder
                    ),
                ),
                Some(m),
            )
        }
        GroebnerResult::Inconclusive(msg) => (Check::inconclusive(name, msg), None),
    }
}

/// Verifies that the natural generators of the selected product form a
/// Gröbner basis (expected to pass for any multiset of close-cut labels).
pub fn check_product_gb(config: &CampaignConfig) -> Report {
    let started = Instant::now();
    let gens = dedupe(natural_generators(config.ambient, &config.selectors));
    let budget = Budget { max_spairs: config.max_spairs, deadline: None };
    let (check, _) = groebner_check("natural-generators-groebner", &gens, &budget);
    Report::assemble(config.id("check-gb"), vec![check], started)
}

/// The dimension of the degree-`d` slice of the ideal spanned by
/// homogeneous `gens`: the rank of all monomial multiples of the
/// generators in that degree.
pub fn ideal_dimension_in_degree(gens: &[Polynomial], n: u32, d: u32) -> usize {
    let mut pivots: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for g in gens {
        let Some(deg) = g.x_degree() else { continue };
        if deg > d {
            continue;
        }
        for m in crate::rees::x_monomials_of_degree(n, d - deg) {
            let mut row = g.mul_monomial(&m);
            while let Some((lm, lc)) = row.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
                match pivots.get(&lm) {
                    Some(p) => {
                        let scale = &lc / p.leading_coeff().unwrap();
                        row = &row - &p.scale(&scale);
                    }
                    None => {
                        pivots.insert(lm, row);
                        break;
                    }
                }
            }
        }
    }
    pivots.len()
}

/// The dimension of the degree-`d` slice of the monomial ideal generated by
/// `leads`: monomials of degree `d` divisible by at least one generator.
pub fn monomial_ideal_dimension_in_degree(leads: &[Monomial], n: u32, d: u32) -> usize {
    crate::rees::x_monomials_of_degree(n, d)
        .iter()
        .filter(|m| leads.iter().any(|l| l.divides(m)))
        .count()
}

/// Verifies that taking initial ideals commutes with the product: once via
/// the Gröbner criterion, once by comparing degreewise dimensions of the
/// product ideal against the monomial ideal of leading-term products, up to
/// the configured bound.
pub fn check_initial_commutes(config: &CampaignConfig) -> Report {
    let started = Instant::now();
    let gens = dedupe(natural_generators(config.ambient, &config.selectors));
    let budget = Budget { max_spairs: config.max_spairs, deadline: None };
    let (gb_check, _) = groebner_check("natural-generators-groebner", &gens, &budget);
    let mut checks = vec![gb_check];
    let leads: Vec<Monomial> = gens
        .iter()
        .map(|g| g.leading_monomial().unwrap().clone())
        .collect();
    let n = config.ambient.n();
    let lo = config.generator_degree();
    let mut profile = Vec::new();
    let mut mismatch = None;
    for d in lo..=config.degree_bound.max(lo) {
        let a = ideal_dimension_in_degree(&gens, n, d);
        let b = monomial_ideal_dimension_in_degree(&leads, n, d);
        profile.push(format!("d={d}:{a}/{b}"));
        if a != b && mismatch.is_none() {
            mismatch = Some((d, a, b));
        }
    }
    checks.push(match mismatch {
        None => Check::pass(
            "degreewise-dimensions",
            Some(format!("ideal/monomial dimensions agree: {}", profile.join(" "))),
        ),
        Some((d, a, b)) => Check::fail(
            "degreewise-dimensions",
            format!("degree {d}: ideal dimension {a} vs leading-term product dimension {b}"),
        ),
    });
    Report::assemble(config.id("check-commute"), checks, started)
}

/// Reproduces the failure of initial-ideal commutation for the non-close
/// cut `(3,n)`: the product `I_{(1,n),2}·I_{(3,n),2}` admits a monomial in
/// `in(product)` outside the product of initial ideals.  The report passes
/// exactly when the witness exists and the close-cut control pair is clean.
pub fn reproduce_counterexample(ambient: Ambient) -> Report {
    let started = Instant::now();
    let n = ambient.n();
    let campaign = format!("counterexample n={n}");
    let mut checks = Vec::new();

    let close = Label::new(ambient, 1, n).expect("(1,n) is a close cut");
    let close_minors: Vec<Polynomial> =
        labeled_chains(ambient, close, 2).iter().map(minor).collect();
    let far_minors: Vec<Polynomial> = chains_in_window(3, n, 2)
        .iter()
        .map(|c| chain_minor(c).expect("enumerated diagonals are chains"))
        .collect();
    let gens: Vec<Polynomial> = close_minors
        .iter()
        .flat_map(|p| far_minors.iter().map(move |q| p * q))
        .collect();
    let gens = dedupe(gens);

    let budget = Budget::default();
    match is_groebner(&gens, &budget) {
        GroebnerResult::NotBasis(w) => {
            let m = w.offending_monomial().clone();
            checks.push(Check::pass(
                "product-not-groebner",
                Some(format!(
                    "S-pair ({},{}) leaves remainder {}; witness monomial {m}",
                    w.i, w.j, w.remainder
                )),
            ));
            let leads: Vec<Monomial> = gens
                .iter()
                .map(|g| g.leading_monomial().unwrap().clone())
                .collect();
            if leads.iter().any(|l| l.divides(&m)) {
                checks.push(Check::fail(
                    "witness-outside-leading-term-product",
                    format!("{m} is divisible by a leading-term product"),
                ));
            } else {
                checks.push(Check::pass(
                    "witness-outside-leading-term-product",
                    Some(format!(
                        "{m} lies in in(product) but not in the product of initial ideals"
                    )),
                ));
            }
            let d = m.x_degree();
            let a = ideal_dimension_in_degree(&gens, n, d);
            let b = monomial_ideal_dimension_in_degree(&leads, n, d);
            checks.push(if a > b {
                Check::pass(
                    "dimension-separation",
                    Some(format!("degree {d}: ideal dimension {a} > monomial dimension {b}")),
                )
            } else {
                Check::fail(
                    "dimension-separation",
                    format!("degree {d}: ideal dimension {a} vs monomial dimension {b}"),
                )
            });
        }
        GroebnerResult::IsBasis { .. } => {
            checks.push(Check::fail(
                "product-not-groebner",
                "expected a failing S-pair, found none".into(),
            ));
        }
        GroebnerResult::Inconclusive(msg) => {
            checks.push(Check::inconclusive("product-not-groebner", msg));
        }
    }

    let control_label = Label::new(ambient, 2, n).expect("(2,n) is a close cut");
    let control = CampaignConfig::new(ambient, vec![(close, 2), (control_label, 2)])
        .expect("control selectors are valid");
    let control_gens = dedupe(natural_generators(ambient, &control.selectors));
    let (control_check, _) =
        groebner_check("close-cut-control", &control_gens, &budget);
    checks.push(control_check);

    Report::assemble(campaign, checks, started)
}

// ---------------------------------------------------------------------------
// golden examples
// ---------------------------------------------------------------------------

const TWO_ROW_START: &str = r#"{"ambient":30,"rows":[{"label":[1,30],"chain":[1,4,18,24,30]},{"label":[2,29],"chain":[5,7,11,15,17,19,22,28]}]}"#;
const TWO_ROW_AFTER_DIAGONAL: &str = r#"{"ambient":30,"rows":[{"label":[1,30],"chain":[1,4,15,18,30]},{"label":[2,29],"chain":[5,7,11,17,19,22,24,28]}]}"#;
const TWO_ROW_AFTER_COLUMNWISE: &str = r#"{"ambient":30,"rows":[{"label":[1,30],"chain":[1,4,11,18,30]},{"label":[2,29],"chain":[5,7,15,17,19,22,24,28]}]}"#;
const TWO_ROW_STANDARD: &str = r#"{"ambient":30,"rows":[{"label":[1,30],"chain":[1,5,11,18,30]},{"label":[2,29],"chain":[4,7,15,17,19,22,24,28]}]}"#;

const FIVE_ROW_START: &str = r#"{"ambient":30,"rows":[{"label":[1,29],"chain":[8,12,18,20,22]},{"label":[1,30],"chain":[2,7,23,25,27,30]},{"label":[1,30],"chain":[1,18,23,27,30]},{"label":[2,29],"chain":[2,5,7,9,13,16,20,25]},{"label":[2,30],"chain":[8,10,12,17,25,28]}]}"#;
const FIVE_ROW_STANDARD: &str = r#"{"ambient":30,"rows":[{"label":[1,29],"chain":[1,7,12,18,25]},{"label":[1,30],"chain":[2,8,12,20,25,30]},{"label":[1,30],"chain":[2,8,13,22,27]},{"label":[2,29],"chain":[5,9,16,18,20,23,25,28]},{"label":[2,30],"chain":[7,10,17,23,27,30]}]}"#;

const LABELING_LENGTHS: [usize; 4] = [8, 4, 6, 5];
const LABELING_EXPECTED: &str =
    "[[1,5,9,13,17,20,22,23],[2,6,10,14],[3,7,11,15,18,21],[4,8,12,16,19]]";

const LAPLACE_EXPECTED: &str = "x10*[4,7] - x8*[4,9] + x6*[6,9]";

fn byte_check(name: &str, observed: &str, expected: &str) -> Check {
    if observed == expected {
        Check::pass(name, Some(format!("matches: {observed}")))
    } else {
        Check::fail(name, format!("expected {expected}, observed {observed}"))
    }
}

/// Replays the embedded worked examples and byte-compares each canonical
/// output.
pub fn replay_golden() -> Report {
    let started = Instant::now();
    let mut checks = Vec::new();

    let run = |checks: &mut Vec<Check>| -> Result<()> {
        let start = Tabel::from_json(TWO_ROW_START)?;
        let ambient = start.ambient();
        let (p, q) = (&start.rows()[0], &start.rows()[1]);
        let (p1, q1) = transform_diagonal(p, q, 4, 7)?;
        let a1 = Tabel::new(ambient, vec![p1.clone(), q1.clone()])?;
        checks.push(byte_check("two-row-diagonal", &a1.to_json(), TWO_ROW_AFTER_DIAGONAL));
        let (p2, q2) = transform_columnwise(&p1, &q1, 3)?;
        let a2 = Tabel::new(ambient, vec![p2.clone(), q2.clone()])?;
        checks.push(byte_check("two-row-columnwise", &a2.to_json(), TWO_ROW_AFTER_COLUMNWISE));
        let (p3, q3) = transform_antidiagonal(&p2, &q2, 1, 2)?;
        let b = Tabel::new(ambient, vec![p3.clone(), q3.clone()])?;
        checks.push(byte_check("two-row-antidiagonal", &b.to_json(), TWO_ROW_STANDARD));
        checks.push(byte_check(
            "two-row-reduce",
            &start.reduce().to_json(),
            TWO_ROW_STANDARD,
        ));

        let five = Tabel::from_json(FIVE_ROW_START)?;
        checks.push(byte_check("five-row-reduce", &five.reduce().to_json(), FIVE_ROW_STANDARD));

        let grid = assign_labels(&LABELING_LENGTHS);
        let grid_json = serde_json::to_string(&grid)?;
        checks.push(byte_check("labeling-grid", &grid_json, LABELING_EXPECTED));

        let c = LabeledChain::from_parts(Ambient::new(10)?, 1, 10, &[4, 7, 10])?;
        let terms = laplace_last_row(&c)?;
        let mut rendered = String::new();
        for (i, t) in terms.iter().rev().enumerate() {
            if i == 0 {
                if t.sign < 0 {
                    rendered.push('-');
                }
            } else if t.sign < 0 {
                rendered.push_str(" - ");
            } else {
                rendered.push_str(" + ");
            }
            let entries = t
                .minor
                .entries()
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",");
            rendered.push_str(&format!("x{}*[{}]", t.var, entries));
        }
        checks.push(byte_check("laplace-expansion", &rendered, LAPLACE_EXPECTED));
        let resums = laplace_sum(&terms) == minor(&c);
        checks.push(if resums {
            Check::pass("laplace-resums", Some("expansion equals the minor".into()))
        } else {
            Check::fail("laplace-resums", "expansion does not equal the minor".into())
        });
        Ok(())
    };
    if let Err(e) = run(&mut checks) {
        checks.push(Check::fail("golden-replay", format!("error during replay: {e}")));
    }
    Report::assemble("golden".into(), checks, started)
}

// ---------------------------------------------------------------------------

/// Straightening as a campaign (used by the CLI): wraps
/// [`crate::rees::straighten`] with a verification that the representation
/// expands back to the product.
pub fn straighten_campaign(p: &LabeledChain, q: &LabeledChain) -> Report {
    let started = Instant::now();
    let campaign = format!("straighten [{p}][{q}]");
    let mut checks = Vec::new();
    match crate::rees::straighten(p, q) {
        Ok(rep) => {
            let ok = rep.polynomial() == &minor(p) * &minor(q);
            checks.push(if ok {
                Check::pass(
                    "expansion-matches-product",
                    Some(format!("{} standard pairs", rep.pairs.len())),
                )
            } else {
                Check::fail("expansion-matches-product", "expansion differs".into())
            });
            let monic = rep.pairs[0].0 == Coeff::from_integer(1.into());
            checks.push(if monic {
                Check::pass("leading-coefficient-one", None)
            } else {
                Check::fail("leading-coefficient-one", format!("λ₁ = {}", rep.pairs[0].0))
            });
        }
        Err(e) => checks.push(Check::fail("straightening", format!("{e}"))),
    }
    Report::assemble(campaign, checks, started)
}

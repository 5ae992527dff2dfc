//! Acceptance suite: every headline guarantee of the crate, each test
//! printing one summary line and enforcing a wall-clock budget.  The budgets
//! are deliberately loose — they exist to catch algorithmic regressions, not
//! to benchmark.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hankel_rees::campaign::{
    check_product_gb, replay_golden, reproduce_counterexample, CampaignConfig, Status,
};
use hankel_rees::chains::{all_labeled_chains, random_labeled_chain, Ambient, Label, LabeledChain};
use hankel_rees::hankel::{laplace_first_row, laplace_last_row, laplace_sum, minor};
use hankel_rees::monomial::Monomial;
use hankel_rees::poly::{Coeff, Polynomial};
use hankel_rees::rees::{
    lift_marked_set, shape_multisets, straighten, tabels_of_shape, x_monomials_of_degree,
    MarkedSet, ReesMonomial,
};
use hankel_rees::tabel::{is_standard_pair, Tabel};

fn finish(name: &str, detail: String, started: Instant, limit: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < limit,
        "{name} took {elapsed:?}, over its {limit:?} budget"
    );
    println!("{name}: pass — {detail} in {elapsed:.2?} (budget {limit:?})");
}

#[test]
fn criterion_1_golden_examples_replay_exactly() {
    let started = Instant::now();
    let report = replay_golden();
    for check in &report.checks {
        assert_eq!(check.status, Status::Pass, "{}: {check:?}", check.name);
    }
    assert!(report.passed());
    finish(
        "golden examples",
        format!("{} byte-level replays", report.checks.len()),
        started,
        Duration::from_secs(1),
    );
}

/// A random tabel drawn within the given bounds, seeded per case.
fn random_tabel(rng: &mut impl Rng, max_n: u32, max_rows: usize, max_len: usize) -> Tabel {
    let ambient = Ambient::new(rng.gen_range(4..=max_n)).unwrap();
    let labels = ambient.labels();
    let rows = (0..rng.gen_range(1..=max_rows))
        .map(|_| {
            let label = labels[rng.gen_range(0..labels.len())];
            let len = rng.gen_range(1..=label.max_rows().min(max_len));
            random_labeled_chain(rng, ambient, label, len).expect("length fits the window")
        })
        .collect();
    Tabel::new(ambient, rows).expect("rows share the ambient")
}

#[test]
fn criterion_2_reduction_is_confluent_on_random_tabels() {
    let started = Instant::now();
    let cases: u64 = 10_000;
    (0..cases).into_par_iter().for_each(|case| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7AB3_1000 + case);
        let tabel = random_tabel(&mut rng, 30, 5, 8);
        let fixed = tabel.reduce();
        assert!(
            fixed.is_standard(),
            "deterministic reducer left {fixed} non-standard"
        );
        assert_eq!(fixed.shape(), tabel.shape(), "reduction changed the shape of {tabel}");
        assert_eq!(
            fixed.entry_multiset(),
            tabel.entry_multiset(),
            "reduction changed the entries of {tabel}"
        );
        for salt in [0x11u64, 0x22] {
            let mut strategy = ChaCha8Rng::seed_from_u64((salt << 32) ^ case);
            assert_eq!(
                tabel.reduce_with_strategy(&mut strategy),
                fixed,
                "a random strategy diverged on {tabel}"
            );
        }
    });
    finish(
        "reduction confluence",
        format!("{cases} random tabels, three strategies each"),
        started,
        Duration::from_secs(60),
    );
}

/// Textbook cofactor expansion along the first row; the slow determinant
/// oracle.
fn cofactor_determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(),
        1 => m[0][0].clone(),
        size => {
            let mut acc = Polynomial::zero();
            for j in 0..size {
                let rest: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let piece = &m[0][j] * &cofactor_determinant(&rest);
                acc = if j % 2 == 0 { &acc + &piece } else { &acc - &piece };
            }
            acc
        }
    }
}

/// The matrix of a diagonal chain rebuilt from first principles: row `i`,
/// column `k` holds `x_{a_k - k + i}` (0-based).
fn diagonal_matrix(chain: &[u32]) -> Vec<Vec<Polynomial>> {
    let r = chain.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|k| Polynomial::monomial(Monomial::x(chain[k] - k as u32 + i as u32)))
                .collect()
        })
        .collect()
}

#[test]
fn criterion_3_minors_match_an_independent_cofactor_oracle() {
    let started = Instant::now();
    let chains: Vec<LabeledChain> = (4..=10)
        .flat_map(|n| all_labeled_chains(Ambient::new(n).unwrap(), 4))
        .collect();
    chains.par_iter().for_each(|lc| {
        let det = minor(lc);
        assert_eq!(
            det,
            cofactor_determinant(&diagonal_matrix(lc.entries())),
            "fraction-free determinant of {lc} disagrees with the cofactor oracle"
        );
        let lead = Monomial::from_indices(lc.entries());
        assert_eq!(det.leading_monomial(), Some(&lead), "wrong leading monomial for {lc}");
        assert_eq!(det.coeff_of(&lead), Coeff::one(), "leading coefficient of {lc} is not +1");
        if lc.len() >= 2 {
            assert_eq!(
                laplace_sum(&laplace_first_row(lc).unwrap()),
                det,
                "first-row Laplace expansion of {lc} does not re-sum"
            );
            assert_eq!(
                laplace_sum(&laplace_last_row(lc).unwrap()),
                det,
                "last-row Laplace expansion of {lc} does not re-sum"
            );
        }
    });
    finish(
        "minor correctness",
        format!("{} labeled chains, five checks each", chains.len()),
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_4_straightening_expands_back_to_the_product() {
    let started = Instant::now();
    let cases: u64 = 1_000;
    (0..cases).into_par_iter().for_each(|case| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x57A1_0000 + case);
        let ambient = Ambient::new(rng.gen_range(4..=9)).unwrap();
        let labels = ambient.labels();
        let draw = |rng: &mut ChaCha8Rng| {
            let label = labels[rng.gen_range(0..labels.len())];
            let len = rng.gen_range(1..=label.max_rows().min(3));
            random_labeled_chain(rng, ambient, label, len).expect("length fits the window")
        };
        let p = draw(&mut rng);
        let q = draw(&mut rng);
        let rep = straighten(&p, &q)
            .unwrap_or_else(|e| panic!("straightening [{p}][{q}] failed: {e}"));
        assert_eq!(
            rep.polynomial(),
            &minor(&p) * &minor(&q),
            "representation of [{p}][{q}] does not expand back to the product"
        );
        assert!(rep.pairs[0].0.is_one(), "leading coefficient is not 1 for [{p}][{q}]");
        let mut previous: Option<Monomial> = None;
        for (_, c, d) in &rep.pairs {
            assert!(
                is_standard_pair(c, d),
                "non-standard pair [{c}][{d}] in the representation of [{p}][{q}]"
            );
            let lead = Monomial::from_indices(&[c.entries(), d.entries()].concat());
            if let Some(prev) = &previous {
                assert!(lead < *prev, "leading terms fail to decrease at [{c}][{d}]");
            }
            previous = Some(lead);
        }
    });
    finish(
        "straightening",
        format!("{cases} random products, exact expansion"),
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_5_each_image_fiber_contains_exactly_one_standard_monomial() {
    let started = Instant::now();
    let (mut monomials, mut fibers) = (0usize, 0usize);
    for n in 4..=7 {
        let ambient = Ambient::new(n).unwrap();
        let deepest = ambient.labels().iter().map(|l| l.max_rows()).max().unwrap();
        let rules = MarkedSet::generate(ambient, deepest);

        // pure x-monomials: every one is standard and already a normal form
        for degree in 0..=2 {
            for x in x_monomials_of_degree(n, degree) {
                let mv = ReesMonomial::new(ambient, x, vec![]).unwrap();
                assert!(mv.is_standard());
                assert_eq!(rules.rewrite(&mv).unwrap(), mv);
                monomials += 1;
                fibers += 1;
            }
        }

        // the image determines the shape multiset (t-part) and the x-degree,
        // so fibers never cross these shard boundaries
        let mut shards = Vec::new();
        for z_degree in 1..=3 {
            for shape in shape_multisets(ambient, deepest, z_degree) {
                for x_degree in 0..=2u32 {
                    shards.push((shape.clone(), x_degree));
                }
            }
        }
        let tallies: Vec<(usize, usize)> = shards
            .par_iter()
            .enumerate()
            .map(|(index, (shape, x_degree))| {
                let mut rng = ChaCha8Rng::seed_from_u64(0xF1BE_0000 + index as u64);
                let xs = x_monomials_of_degree(n, *x_degree);
                let mut by_image: HashMap<Monomial, (usize, ReesMonomial)> = HashMap::new();
                let mut seen = 0usize;
                for rows in tabels_of_shape(ambient, shape) {
                    for x in &xs {
                        let mv = ReesMonomial::new(ambient, x.clone(), rows.clone()).unwrap();
                        let normal = mv.standardize();
                        assert_eq!(
                            rules.rewrite(&mv).unwrap(),
                            normal,
                            "rewriting and direct standardization disagree on {mv}"
                        );
                        let r1 = rules.rewrite_random(&mv, &mut rng).unwrap();
                        let r2 = rules.rewrite_random(&mv, &mut rng).unwrap();
                        assert_eq!(r1, normal, "a random strategy diverged on {mv}");
                        assert_eq!(r2, normal, "a random strategy diverged on {mv}");
                        let image = mv.phi_in();
                        assert_eq!(
                            normal.phi_in(),
                            image,
                            "standardization changed the image of {mv}"
                        );
                        let entry = by_image.entry(image).or_insert_with(|| (0, normal.clone()));
                        assert_eq!(
                            entry.1, normal,
                            "two members of one fiber normalize differently: {mv}"
                        );
                        if mv.is_standard() {
                            entry.0 += 1;
                        }
                        seen += 1;
                    }
                }
                for (image, (standard_count, _)) in &by_image {
                    assert_eq!(
                        *standard_count, 1,
                        "fiber of {image} holds {standard_count} standard monomials"
                    );
                }
                (seen, by_image.len())
            })
            .collect();
        for (seen, shard_fibers) in tallies {
            monomials += seen;
            fibers += shard_fibers;
        }
    }
    finish(
        "standard-monomial fibers",
        format!("{monomials} monomials across {fibers} fibers"),
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_6_products_of_close_cut_ideals_keep_groebner_generators() {
    let started = Instant::now();
    let mut campaigns: Vec<CampaignConfig> = Vec::new();
    for n in [6u32, 7, 8] {
        let ambient = Ambient::new(n).unwrap();
        let mut selectors = Vec::new();
        for label in ambient.labels() {
            for rows in 1..=label.max_rows().min(3) {
                selectors.push((label, rows));
            }
        }
        for (i, &first) in selectors.iter().enumerate() {
            campaigns.push(CampaignConfig::new(ambient, vec![first]).unwrap());
            for &second in &selectors[i..] {
                campaigns.push(CampaignConfig::new(ambient, vec![first, second]).unwrap());
            }
        }
    }
    let ambient = Ambient::new(6).unwrap();
    let triple = vec![
        (Label::new(ambient, 1, 6).unwrap(), 2),
        (Label::new(ambient, 2, 6).unwrap(), 2),
        (Label::new(ambient, 2, 5).unwrap(), 2),
    ];
    campaigns.push(CampaignConfig::new(ambient, triple).unwrap());

    let total = campaigns.len();
    let failures: Vec<String> = campaigns
        .par_iter()
        .filter_map(|config| {
            let report = check_product_gb(config);
            (!report.passed()).then(|| report.canonical_json())
        })
        .collect();
    assert!(
        failures.is_empty(),
        "products with non-Gröbner natural generators:\n{}",
        failures.join("\n")
    );
    finish(
        "product Gröbner bases",
        format!("{total} ideal products, all exact"),
        started,
        Duration::from_secs(1800),
    );
}

#[test]
fn criterion_7_far_cut_product_fails_where_the_close_cut_control_passes() {
    let started = Instant::now();
    let report = reproduce_counterexample(Ambient::new(6).unwrap());
    assert!(report.passed(), "{}", report.to_json());
    let product_check = report
        .checks
        .iter()
        .find(|c| c.name == "product-not-groebner")
        .expect("campaign reports the product check");
    assert!(
        product_check.detail.as_deref().unwrap_or("").contains("witness monomial"),
        "no witness recorded: {}",
        report.to_json()
    );
    finish(
        "counterexample",
        format!("witness found, control clean ({} checks)", report.checks.len()),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_8_lifted_relations_lie_in_the_kernel_of_phi() {
    let started = Instant::now();
    let mut relations = 0usize;
    for n in 4..=7 {
        let ambient = Ambient::new(n).unwrap();
        let rules = MarkedSet::generate(ambient, 3);
        let lifted =
            lift_marked_set(&rules).unwrap_or_else(|e| panic!("lifting at n={n} failed: {e}"));
        assert_eq!(lifted.len(), rules.binomials().len());
        lifted.par_iter().for_each(|relation| {
            assert!(relation.is_multihomogeneous(), "inhomogeneous lift {relation}");
            assert!(relation.phi().is_zero(), "nonzero image of the lift {relation}");
        });
        relations += lifted.len();
    }
    finish(
        "lifted relations",
        format!("{relations} kernel elements, exact expansion"),
        started,
        Duration::from_secs(120),
    );
}

mod common;

use common::{all_strings, relative_gap};
use fieldmatch::crp::ModelPriors;
use fieldmatch::models::{ApositionalStats, DiscreteStats, FieldModel, PositionalStats};
use fieldmatch::Alphabet;
use proptest::prelude::*;

const SYMBOLS: &str = "ABCD";

fn priors() -> ModelPriors<f64> {
    ModelPriors::default()
}

/// A compact alphabet of 1 to 4 symbols and up to 20 strings of length at
/// most 5 over it.
fn small_field() -> impl Strategy<Value = (Alphabet, Vec<String>)> {
    (1usize..=4).prop_flat_map(|k| {
        let symbols: Vec<char> = SYMBOLS.chars().take(k).collect();
        let alphabet = Alphabet::compact(&SYMBOLS[..k], 'A').unwrap();
        let value = prop::collection::vec(prop::sample::select(symbols), 0..=5).prop_map(|cs| cs.into_iter().collect());
        (Just(alphabet), prop::collection::vec(value, 0..=20))
    })
}

fn chain_rule<M: FieldModel>(values: &[String], alphabet: &Alphabet) -> f64 {
    let mut stats = M::empty(alphabet);
    let mut total = 0.0;
    for v in values {
        total += stats.log_predictive(v, &priors());
        stats.observe(v);
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn joints_match_sequential_oracles((alphabet, values) in small_field()) {
        let a = alphabet.len();
        let p = common::DEFAULT;
        let d = DiscreteStats::fit(&values, &alphabet).log_joint(&priors());
        prop_assert!(relative_gap(d, common::discrete_sequential(&values, &p, a)) < 1e-9);
        let pos = PositionalStats::fit(&values, &alphabet).log_joint(&priors());
        prop_assert!(relative_gap(pos, common::positional_sequential(&values, &p, a)) < 1e-9);
        let apos = ApositionalStats::fit(&values, &alphabet).log_joint(&priors());
        prop_assert!(relative_gap(apos, common::apositional_sequential(&values, &p, a)) < 1e-9);
    }

    #[test]
    fn joints_equal_chained_predictives((alphabet, values) in small_field()) {
        let check = |joint: f64, chained: f64| joint == chained || relative_gap(joint, chained) < 1e-9;
        prop_assert!(check(DiscreteStats::fit(&values, &alphabet).log_joint(&priors()), chain_rule::<DiscreteStats>(&values, &alphabet)));
        prop_assert!(check(PositionalStats::fit(&values, &alphabet).log_joint(&priors()), chain_rule::<PositionalStats>(&values, &alphabet)));
        prop_assert!(check(ApositionalStats::fit(&values, &alphabet).log_joint(&priors()), chain_rule::<ApositionalStats>(&values, &alphabet)));
    }

    #[test]
    fn joints_ignore_order((alphabet, values) in small_field(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = values.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(DiscreteStats::fit(&values, &alphabet), DiscreteStats::fit(&shuffled, &alphabet));
        prop_assert_eq!(
            PositionalStats::fit(&values, &alphabet).log_joint(&priors()),
            PositionalStats::fit(&shuffled, &alphabet).log_joint(&priors())
        );
        prop_assert_eq!(
            ApositionalStats::fit(&values, &alphabet).log_joint(&priors()),
            ApositionalStats::fit(&shuffled, &alphabet).log_joint(&priors())
        );
    }

    #[test]
    fn merge_equals_concatenated_fit((alphabet, x) in small_field(), split in 0usize..=20) {
        let cut = split.min(x.len());
        let (left, right) = x.split_at(cut);
        fn same<M: FieldModel + PartialEq + std::fmt::Debug>(l: &[String], r: &[String], all: &[String], a: &Alphabet) -> bool {
            let merged = M::fit(l, a).merge(&M::fit(r, a)).unwrap();
            let whole = M::fit(all, a);
            merged == whole && merged.log_joint(&priors()).to_bits() == whole.log_joint(&priors()).to_bits()
        }
        prop_assert!(same::<DiscreteStats>(left, right, &x, &alphabet));
        prop_assert!(same::<PositionalStats>(left, right, &x, &alphabet));
        prop_assert!(same::<ApositionalStats>(left, right, &x, &alphabet));
    }

    #[test]
    fn pooled_counts_are_column_sums((alphabet, values) in small_field()) {
        let pos = PositionalStats::fit(&values, &alphabet);
        let apos = ApositionalStats::fit(&values, &alphabet);
        for &c in alphabet.symbols() {
            let column: u64 = (1..=pos.max_length()).map(|j| pos.char_count(j, c)).sum();
            prop_assert_eq!(column, apos.char_count(c));
        }
        prop_assert!(apos.count_parameters() <= pos.count_parameters());
        let disc = DiscreteStats::fit(&values, &alphabet);
        prop_assert!(pos.count_parameters() <= disc.count_parameters() * (pos.max_length() + 1));
    }
}

#[test]
fn predictive_mass_matches_poisson_cdf() {
    let alphabet = Alphabet::compact("AB", 'A').unwrap();
    let p = ModelPriors::<f64>::new(3.0, 1.0, 3.0).unwrap();
    let strings = all_strings(alphabet.symbols(), 8);
    assert_eq!(strings.len(), 511);
    let cdf: f64 = (0..=8).map(|l| common::poisson(l, 1.0)).sum();
    for mass in [
        strings.iter().map(|s| DiscreteStats::empty(&alphabet).log_predictive(s, &p).exp()).sum::<f64>(),
        strings.iter().map(|s| PositionalStats::empty(&alphabet).log_predictive(s, &p).exp()).sum::<f64>(),
        strings.iter().map(|s| ApositionalStats::empty(&alphabet).log_predictive(s, &p).exp()).sum::<f64>(),
    ] {
        assert!((mass - cdf).abs() < 1e-9, "{mass} vs {cdf}");
        assert!(((1.0 - mass) - (1.0 - cdf)).abs() < 1e-9);
    }
}

#[test]
fn fitted_predictive_is_still_normalized() {
    // after observing data the predictive over all strings up to length 8
    // plus the unseen tail still sums to one for the positional model
    let alphabet = Alphabet::compact("AB", 'A').unwrap();
    let p = ModelPriors::<f64>::new(3.0, 1.0, 3.0).unwrap();
    let stats = PositionalStats::fit(["AB", "A", "BBA"], &alphabet);
    let mass: f64 = all_strings(alphabet.symbols(), 8)
        .iter()
        .map(|s| stats.log_predictive(s, &p).exp())
        .sum();
    // every observed length is at most 3, so the remaining mass is the
    // unobserved-length share of the length CRP beyond 8
    let tail: f64 = (9..40).map(|l| 3.0 * common::poisson(l, 1.0) / 6.0).sum();
    assert!((mass + tail - 1.0).abs() < 1e-9, "{mass} + {tail}");
}

#[test]
fn default_alphabet_agrees_with_oracles() {
    let alphabet = Alphabet::default();
    let values: Vec<String> = ["2015-01-02", "2015-01-02", "A-1", "", "ZZ TOP"].map(String::from).to_vec();
    let p = common::DEFAULT;
    let d = DiscreteStats::fit(&values, &alphabet).log_joint(&priors());
    assert!(relative_gap(d, common::discrete_sequential(&values, &p, 64)) < 1e-9);
    let pos = PositionalStats::fit(&values, &alphabet).log_joint(&priors());
    assert!(relative_gap(pos, common::positional_sequential(&values, &p, 64)) < 1e-9);
    let apos = ApositionalStats::fit(&values, &alphabet).log_joint(&priors());
    assert!(relative_gap(apos, common::apositional_sequential(&values, &p, 64)) < 1e-9);
}

#[test]
fn joints_survive_large_counts() {
    let alphabet = Alphabet::default();
    let mut stats = PositionalStats::empty(&alphabet);
    for i in 0..2_000_000u32 {
        stats.observe(if i % 3 == 0 { "AB" } else { "C" });
    }
    let joint: f64 = stats.log_joint(&priors());
    assert!(joint.is_finite() && joint < 0.0);
    let f32_joint: f32 = stats.log_joint(&ModelPriors::<f32>::default());
    assert!(f32_joint.is_finite());
    assert!(relative_gap(f64::from(f32_joint), joint) < 1e-4);
}

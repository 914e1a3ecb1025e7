use std::collections::BTreeSet;

use proptest::prelude::*;

use ppric::bounds::{best_lower, compute_report};
use ppric::construct::feasible_recipes;
use ppric::covering::{verify_covering, CoveringDesign};
use ppric::metric::combinatorics::Subsets;
use ppric::ppric::{is_ppric, verify_enumeration, verify_exact};
use ppric::protocol::{ground_truth, privacy_level, run_simulation, Database};
use ppric::{BinaryWord, PpricCode, SchemeParams};

/// An admissible triple with `L ≤ max_l` and `s ≥ 1`.
fn triple(max_l: usize) -> impl Strategy<Value = (usize, usize, usize)> {
    (4..=max_l)
        .prop_flat_map(|l| (Just(l), 1..=(l - 1) / 2))
        .prop_flat_map(|(l, s)| (Just(l), Just(s), 0..=(l - 2 * s - 1)))
}

/// A random code of 1..=8 distinct weight-`s` words at an admissible triple.
fn small_code(max_l: usize) -> impl Strategy<Value = PpricCode> {
    triple(max_l).prop_flat_map(|(l, s, r)| {
        let words: Vec<u128> = Subsets::new(l, s).collect();
        let n = words.len();
        proptest::sample::subsequence(words, 1..=n.min(8)).prop_map(move |masks| {
            PpricCode::from_masks(SchemeParams::new(l, s, r).unwrap(), &masks).unwrap()
        })
    })
}

/// `small_code`, repaired into a PPRIC code by adding, for each violator,
/// the first word in a shuffled order that is far enough from it.
fn ppric_code(max_l: usize) -> impl Strategy<Value = PpricCode> {
    (small_code(max_l), any::<u64>()).prop_map(|(code, seed)| {
        let p = code.params();
        let perm = ppric::protocol::shared_permutation(p.l, seed);
        let order: Vec<BinaryWord> = Subsets::new(p.l, p.s)
            .map(|m| {
                BinaryWord::from_bits(p.l, m)
                    .unwrap()
                    .permute(&perm)
                    .unwrap()
            })
            .collect();
        let mut code = code;
        while let Some(y) = verify_exact(&code).violator {
            let far = order
                .iter()
                .find(|c| c.hamming_distance(&y).unwrap() > p.r + p.s)
                .expect("the complete code is PPRIC");
            let mut words = code.codewords().to_vec();
            words.push(*far);
            code = PpricCode::new(p, words).unwrap();
        }
        code
    })
}

fn permuted(code: &PpricCode, perm: &[usize]) -> PpricCode {
    let words = code
        .codewords()
        .iter()
        .map(|c| c.permute(perm).unwrap())
        .collect();
    PpricCode::new(code.params(), words).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_verifier_matches_enumeration(code in small_code(10)) {
        let fast = verify_exact(&code);
        let slow = verify_enumeration(&code).unwrap();
        prop_assert_eq!(fast.is_ppric, slow.is_ppric);
        if let Some(y) = fast.violator {
            // the reported violator really is one
            let p = code.params();
            prop_assert!(y.weight() > p.r);
            for c in code.codewords() {
                prop_assert!(c.hamming_distance(&y).unwrap() <= p.r + p.s);
            }
        }
    }

    #[test]
    fn verdict_is_permutation_invariant(code in small_code(10), seed in any::<u64>()) {
        let perm = ppric::protocol::shared_permutation(code.params().l, seed);
        prop_assert_eq!(is_ppric(&code), is_ppric(&permuted(&code, &perm)));
    }

    #[test]
    fn supersets_of_codes_stay_codes(code in ppric_code(9), extra in any::<proptest::sample::Index>()) {
        let p = code.params();
        let unused: Vec<u128> = Subsets::new(p.l, p.s).filter(|m| !code.masks().contains(m)).collect();
        prop_assume!(!unused.is_empty());
        let mut masks = code.masks();
        masks.push(unused[extra.index(unused.len())]);
        prop_assert!(is_ppric(&PpricCode::from_masks(p, &masks).unwrap()));
    }

    #[test]
    fn padding_keeps_codes(code in ppric_code(9)) {
        prop_assert!(is_ppric(&code.pad_coordinate().unwrap()));
    }

    #[test]
    fn complements_of_a_code_cover(code in ppric_code(10)) {
        let p = code.params();
        let design = CoveringDesign::new(p.l, p.l - p.s, p.r + 2, code.complement_supports()).unwrap();
        prop_assert!(verify_covering(&design).unwrap());
        prop_assert!(code.len() >= best_lower(p.l, p.s, p.r).unwrap());
    }

    #[test]
    fn lower_never_exceeds_upper((l, s, r) in triple(40)) {
        let rep = compute_report(l, s, r).unwrap();
        if let Some(u) = rep.best_upper {
            prop_assert!(rep.best_lower as u128 <= u);
        }
        if let Some(e) = rep.exact {
            prop_assert!(rep.best_lower <= e);
            prop_assert!(rep.best_upper.is_none_or(|u| e as u128 <= u));
        }
        prop_assert!(rep.best_lower >= r + 3);
    }

    #[test]
    fn privacy_in_unit_interval(l in 1usize..300, s in 0usize..300) {
        let v = privacy_level(l, s.min(l));
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn protocol_reconstructs_exactly(
        (l, s, r) in triple(12),
        which in any::<proptest::sample::Index>(),
        records in proptest::collection::vec(any::<u128>(), 1..20),
        x_bits in any::<u128>(),
        flips in proptest::collection::vec(any::<proptest::sample::Index>(), 0..4),
        seed in any::<u64>(),
    ) {
        let recipes = feasible_recipes(l, s, r);
        let codes: Vec<PpricCode> = recipes.iter().filter_map(|rc| rc.build().ok()).collect();
        prop_assume!(!codes.is_empty());
        let code = &codes[which.index(codes.len())];
        let mask = (1u128 << l) - 1;
        let x = BinaryWord::from_bits(l, x_bits & mask).unwrap();
        // half the records sit a few flips from x so the answer is rarely empty
        let db: Vec<BinaryWord> = records
            .iter()
            .enumerate()
            .map(|(i, &bits)| {
                let near = flips.iter().take(i % 4).fold(x_bits & mask, |b, f| b ^ 1 << f.index(l));
                BinaryWord::from_bits(l, if i % 2 == 0 { near } else { bits & mask }).unwrap()
            })
            .collect();
        let db = Database::new(db).unwrap();
        let t = run_simulation(&db, &x, r, code, seed).unwrap();
        prop_assert_eq!(&t.reconstructed, &ground_truth(&db, &x, r).unwrap());
        let union: BTreeSet<usize> = t.answers.iter().flatten().copied().collect();
        prop_assert!(t.reconstructed.is_subset(&union));
    }
}

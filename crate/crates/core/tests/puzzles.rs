use ladderlab_core::puzzles::{
    builtin_vectors_k4, partition_count, partitions, p200_note, solve_free_component, PuzzleVector,
};
use proptest::prelude::*;

#[test]
fn p4_lists_the_five_partitions() {
    let got: Vec<String> = partitions(4).unwrap().map(|p| p.to_string()).collect();
    assert_eq!(got, ["1+1+1+1", "2+1+1", "2+2", "3+1", "4"]);
}

#[test]
fn p200_and_the_quoted_value() {
    assert_eq!(partition_count(200).unwrap().to_string(), "3972999029388");
    assert!(p200_note().contains("3372999029388"));
}

#[test]
fn enumeration_limits() {
    assert!(partitions(0).is_err());
    assert!(partitions(101).is_err());
    assert!(partition_count(10_001).is_err());
}

#[test]
fn builtin_vectors_sum_to_four_and_a_half() {
    for v in builtin_vectors_k4() {
        assert_eq!(v.exponents().iter().sum::<f64>(), 4.5);
    }
}

#[test]
fn free_component_closes_the_product() {
    let v = solve_free_component(&[1.0_f64.exp(), 1.5_f64.exp(), 0.5_f64.exp()]).unwrap();
    let prod: f64 = v.factors().iter().product();
    assert!((prod / 4.5_f64.exp() - 1.0).abs() < 1e-12);
    assert!(PuzzleVector::complete(&[Some(1.0), None, Some(1.0), None]).is_err());
}

proptest! {
    #[test]
    fn enumeration_agrees_with_count(k in 1usize..=30) {
        let listed = partitions(k).unwrap().count();
        prop_assert_eq!(listed.to_string(), partition_count(k).unwrap().to_string());
    }

    #[test]
    fn partitions_are_canonical(k in 1usize..=20) {
        for p in partitions(k).unwrap() {
            prop_assert_eq!(p.parts().iter().sum::<usize>(), k);
            prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn completion_always_sums(e in proptest::collection::vec(-3.0f64..3.0, 1..6)) {
        let mut slots: Vec<Option<f64>> = e.into_iter().map(Some).collect();
        slots.push(None);
        let v = PuzzleVector::complete(&slots).unwrap();
        prop_assert!((v.exponents().iter().sum::<f64>() - 4.5).abs() < 1e-12);
    }
}

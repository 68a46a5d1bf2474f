use nemo::kcap::k_cap;
use nemo::rng::SeedStream;
use proptest::prelude::*;

/// Sort-based reference: the indices of the k largest values, or `None`
/// when the k-th and (k+1)-th largest are tied.
fn sorted_top(input: &[f64], k: usize) -> Option<Vec<u32>> {
    let mut idx: Vec<u32> = (0..input.len() as u32).collect();
    idx.sort_by(|&a, &b| input[b as usize].total_cmp(&input[a as usize]));
    if k < input.len() && input[idx[k - 1] as usize] == input[idx[k] as usize] {
        return None;
    }
    let mut top = idx[..k].to_vec();
    top.sort_unstable();
    Some(top)
}

fn small_ints() -> impl Strategy<Value = (Vec<f64>, usize)> {
    (1usize..40).prop_flat_map(|n| {
        (
            proptest::collection::vec((0u8..6).prop_map(f64::from), n),
            1..=n,
        )
    })
}

proptest! {
    #[test]
    fn agrees_with_sort_when_untied(input in proptest::collection::vec(0.001f64..100.0, 1..200), k in 1usize..50, seed: u64) {
        let k = k.min(input.len());
        let got = k_cap(&input, k, &mut SeedStream::new(seed, 0).rng());
        if let Some(want) = sorted_top(&input, k) {
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn ties_stay_in_closure((input, k) in small_ints(), seed: u64) {
        let got = k_cap(&input, k, &mut SeedStream::new(seed, 0).rng());
        let max = input.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max <= 0.0 {
            prop_assert!(got.is_empty());
        } else {
            let mut vals = input.clone();
            vals.sort_by(|a, b| b.total_cmp(a));
            let threshold = vals[k - 1];
            prop_assert_eq!(got.len(), k);
            prop_assert!(got.windows(2).all(|w| w[0] < w[1]));
            for (i, &v) in input.iter().enumerate() {
                if v > threshold {
                    prop_assert!(got.contains(&(i as u32)));
                }
                if v < threshold {
                    prop_assert!(!got.contains(&(i as u32)));
                }
            }
        }
    }

    #[test]
    fn same_seed_same_choice((input, k) in small_ints(), seed: u64) {
        let a = k_cap(&input, k, &mut SeedStream::new(seed, 7).rng());
        let b = k_cap(&input, k, &mut SeedStream::new(seed, 7).rng());
        prop_assert_eq!(a, b);
    }
}

#[test]
fn ties_are_spread_over_the_closure() {
    let input = [1.0; 10];
    let mut counts = [0u32; 10];
    let mut rng = SeedStream::new(3, 0).rng();
    for _ in 0..2000 {
        for i in k_cap(&input, 3, &mut rng) {
            counts[i as usize] += 1;
        }
    }
    // each index is picked with probability 3/10
    assert!(counts.iter().all(|&c| (500..700).contains(&c)), "{counts:?}");
}

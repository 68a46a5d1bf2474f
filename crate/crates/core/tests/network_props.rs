use nemo::gates::alternation_wiring;
use nemo::graph::random_set;
use nemo::rng::SeedStream;
use nemo::{AreaId, Mode, ModelParams, Network, NetworkBuilder};
use proptest::prelude::*;

fn two_areas(n: usize, k: usize, p: f64, seed: u64) -> (Network, AreaId, AreaId) {
    let mut b = NetworkBuilder::new(ModelParams::new(n, k, p, 0.1).unwrap(), seed);
    let s = b.input_area("S");
    let a = b.brain_area("A");
    b.fiber(s, a).recurrent(a);
    (b.build().unwrap(), s, a)
}

fn all_weights(net: &Network) -> Vec<Vec<f64>> {
    net.fibers().iter().map(|f| f.weights().to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hebbian_matches_direct_rule(seed: u64, rounds in 1usize..5) {
        let (mut net, s, a) = two_areas(120, 8, 0.3, seed);
        net.set_homeostasis(false);
        net.set_mode(Mode::Training);
        let mut rng = SeedStream::labeled(seed, "test").rng();
        for _ in 0..rounds {
            let before = all_weights(&net);
            let pre_s = net.firing(s).to_vec();
            let pre_a = net.firing(a).to_vec();
            let stim = random_set(120, 8, &mut rng);
            net.step(&[(s, &stim)]).unwrap();
            let post = net.firing(a).to_vec();
            for (fi, f) in net.fibers().iter().enumerate() {
                let pre = if f.src == s { &pre_s } else { &pre_a };
                let nd = 120;
                for (idx, (&old, &new)) in before[fi].iter().zip(f.weights()).enumerate() {
                    let (j, i) = ((idx / nd) as u32, (idx % nd) as u32);
                    let hit = f.mask().contains(idx) && pre.contains(&j) && post.contains(&i);
                    let want = if hit { old * 1.1 } else { old };
                    prop_assert!((new - want).abs() <= 1e-12 * want.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn homeostasis_sums_to_one(seed: u64, rounds in 1usize..8) {
        let (mut net, s, a) = two_areas(150, 10, 0.2, seed);
        net.set_mode(Mode::Training);
        let mut rng = SeedStream::labeled(seed, "test").rng();
        for _ in 0..rounds {
            let stim = random_set(150, 10, &mut rng);
            net.step(&[(s, &stim)]).unwrap();
            net.homeostasis();
            for (i, sum) in net.incoming_sums(a).into_iter().enumerate() {
                if net.has_incoming(a, i) {
                    prop_assert!((sum - 1.0).abs() <= 1e-9, "neuron {} sums to {}", i, sum);
                }
            }
        }
        prop_assert!(net.normalisation_error() <= 1e-9);
    }

    #[test]
    fn evaluation_mode_freezes_weights(seed: u64) {
        let (mut net, s, _) = two_areas(100, 8, 0.3, seed);
        net.set_mode(Mode::Evaluation);
        let before = all_weights(&net);
        let mut rng = SeedStream::labeled(seed, "test").rng();
        for _ in 0..4 {
            let stim = random_set(100, 8, &mut rng);
            net.step(&[(s, &stim)]).unwrap();
            net.homeostasis();
        }
        prop_assert_eq!(before, all_weights(&net));
    }

    #[test]
    fn alternation_for_any_schedule(seed: u64, schedule in proptest::collection::vec(any::<bool>(), 1..30)) {
        let mut b = NetworkBuilder::new(ModelParams::new(100, 6, 0.3, 0.1).unwrap(), seed);
        let s = b.input_area("S");
        let a = b.brain_area("A");
        let bb = b.brain_area("B");
        b.fiber(s, a).fiber(s, bb).fiber(a, bb).fiber(bb, a);
        let mut net = b.build().unwrap();
        alternation_wiring(net.gates_mut(), a, bb).unwrap();
        let mut rng = SeedStream::labeled(seed, "test").rng();
        let mut order = Vec::new();
        for present in schedule {
            let stim = random_set(100, 6, &mut rng);
            if present { net.step(&[(s, &stim)]).unwrap() } else { net.step(&[]).unwrap() }
            let fa = !net.firing(a).is_empty();
            let fb = !net.firing(bb).is_empty();
            prop_assert!(!(fa && fb));
            if fa { order.push('A') }
            if fb { order.push('B') }
        }
        for (i, c) in order.iter().enumerate() {
            prop_assert_eq!(*c, if i % 2 == 0 { 'A' } else { 'B' });
        }
    }
}

#[test]
fn same_seed_same_network() {
    let run = |seed| {
        let (mut net, s, _) = two_areas(200, 12, 0.2, seed);
        net.set_mode(Mode::Training);
        let mut rng = SeedStream::labeled(seed, "test").rng();
        for _ in 0..5 {
            let stim = random_set(200, 12, &mut rng);
            net.step(&[(s, &stim)]).unwrap();
            net.homeostasis();
        }
        net.to_snapshot().unwrap()
    };
    assert_eq!(run(9), run(9));
    assert_ne!(run(9), run(10));
}

use rand::Rng;

/// Indices of the `k` largest entries of `input`, sorted ascending.
///
/// Entries tied with the `k`-th largest value are chosen uniformly at random
/// from `rng`. An input whose maximum is not positive is treated as an area
/// at rest and yields no firing at all.
pub fn k_cap<R: Rng + ?Sized>(input: &[f64], k: usize, rng: &mut R) -> Vec<u32> {
    let k = k.min(input.len());
    if k == 0 {
        return Vec::new();
    }
    let max = input.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return Vec::new();
    }

    let mut order: Vec<u32> = (0..input.len() as u32).collect();
    let (_, nth, _) = order.select_nth_unstable_by(k - 1, |&a, &b| {
        input[b as usize].total_cmp(&input[a as usize])
    });
    let threshold = input[*nth as usize];

    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    let mut ties: Vec<u32> = Vec::new();
    for (i, &v) in input.iter().enumerate() {
        if v > threshold {
            chosen.push(i as u32);
        } else if v == threshold {
            ties.push(i as u32);
        }
    }
    let need = k - chosen.len();
    if need == ties.len() {
        chosen.extend_from_slice(&ties);
    } else {
        for t in rand::seq::index::sample(rng, ties.len(), need) {
            chosen.push(ties[t]);
        }
    }
    chosen.sort_unstable();
    chosen
}

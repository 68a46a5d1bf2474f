use serde::{Deserialize, Serialize};

/// A set of neuron ids, kept sorted and duplicate free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assembly(Vec<u32>);

/// Stimuli are assemblies placed in input areas.
pub type StimulusSet = Assembly;

impl Assembly {
    pub fn new(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self(ids)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn intersection_len(&self, other: &Assembly) -> usize {
        intersection_len(&self.0, &other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<u32>> for Assembly {
    fn from(ids: Vec<u32>) -> Self {
        Self::new(ids)
    }
}

/// Size of the intersection of two sorted id slices.
pub fn intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// `|fired ∩ target| / k`, or 0 when `k` is 0.
pub fn overlap_fraction(fired: &[u32], target: &Assembly, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    intersection_len(fired, target.as_slice()) as f64 / k as f64
}

/// Index of the assembly with the largest intersection with `fired`.
/// Ties go to the lowest index. `None` when `candidates` is empty.
pub fn best_match(fired: &[u32], candidates: &[Assembly]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (idx, c) in candidates.iter().enumerate() {
        let hits = intersection_len(fired, c.as_slice());
        if best.map_or(true, |(_, h)| hits > h) {
            best = Some((idx, hits));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalises_input() {
        let a = Assembly::new(vec![5, 1, 5, 3]);
        assert_eq!(a.as_slice(), &[1, 3, 5]);
    }

    #[test]
    fn intersections() {
        let a = Assembly::new(vec![1, 2, 3, 9]);
        let b = Assembly::new(vec![2, 9, 10]);
        assert_eq!(a.intersection_len(&b), 2);
        assert_eq!(overlap_fraction(a.as_slice(), &b, 4), 0.5);
        assert_eq!(best_match(&[9, 10], &[a, b]), Some((1, 2)));
    }
}

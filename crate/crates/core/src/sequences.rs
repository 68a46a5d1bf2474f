//! Sequence memorisation by repeated presentation.
//!
//! A simple copy network has an input area `S` projecting into a recurrent
//! area `A`. The scaffold variant adds a second recurrent area `B` wired
//! both ways with `A`; only `A` sees the stimuli.
//!
//! One presentation starts from rest and clamps `S_1 .. S_L` on consecutive
//! rounds. The cap for element `σ` appears in `A` one round after `S_σ`, and
//! in `B` one round after that.

use serde::{Deserialize, Serialize};

use crate::assembly::{Assembly, StimulusSet};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::graph::sample_stimuli;
use crate::network::{AreaId, Mode, Network, NetworkBuilder};
use crate::params::ModelParams;
use crate::rng::SeedStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeqModel {
    Simple,
    Scaffold,
}

/// Caps formed during training, one entry per presentation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SequenceTrace {
    pub a: Vec<Vec<Assembly>>,
    pub b: Vec<Vec<Assembly>>,
}

impl SequenceTrace {
    /// Caps of the final presentation, used as the assemblies to recall.
    pub fn reference(&self) -> Option<&[Assembly]> {
        self.a.last().map(Vec::as_slice)
    }

    pub fn reference_b(&self) -> Option<&[Assembly]> {
        self.b.last().map(Vec::as_slice)
    }

    /// Caps of the first presentation.
    pub fn first(&self) -> Option<&[Assembly]> {
        self.a.first().map(Vec::as_slice)
    }

    pub fn presentations(&self) -> usize {
        self.a.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecallReport {
    /// First cued position, 1-based.
    pub start: usize,
    /// Recall in `A` for positions `start..=L`.
    pub recall: Vec<f64>,
    /// Recall in `B` for the same positions, scaffold only.
    pub recall_b: Option<Vec<f64>>,
    /// Largest pairwise overlap among the reference assemblies in `A`.
    pub max_overlap: f64,
}

impl RecallReport {
    pub fn last(&self) -> f64 {
        self.recall.last().copied().unwrap_or(0.0)
    }

    pub fn last_b(&self) -> Option<f64> {
        self.recall_b.as_ref().and_then(|r| r.last().copied())
    }
}

/// Largest `|A_σ ∩ A_σ'| / k` over distinct positions.
pub fn max_overlap(assemblies: &[Assembly], k: usize) -> f64 {
    let mut best = 0usize;
    for (i, a) in assemblies.iter().enumerate() {
        for b in &assemblies[i + 1..] {
            best = best.max(a.intersection_len(b));
        }
    }
    if k == 0 {
        0.0
    } else {
        best as f64 / k as f64
    }
}

pub struct SequenceNet {
    model: SeqModel,
    net: Network,
    s: AreaId,
    a: AreaId,
    b: Option<AreaId>,
    stimuli: Vec<StimulusSet>,
    trace: SequenceTrace,
}

impl SequenceNet {
    /// Builds the network and draws `len` stimuli with overlap at most `delta`.
    pub fn new(params: ModelParams, model: SeqModel, len: usize, delta: usize, seed: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParams("sequence length must be positive".into()));
        }
        let stimuli = sample_stimuli(
            params.n,
            params.k,
            len,
            delta,
            &mut SeedStream::labeled(seed, "stimuli:S").rng(),
        )?;
        Self::with_stimuli(params, model, stimuli, seed)
    }

    pub fn with_stimuli(
        params: ModelParams,
        model: SeqModel,
        stimuli: Vec<StimulusSet>,
        seed: u64,
    ) -> Result<Self> {
        let mut builder = NetworkBuilder::new(params, seed);
        let s = builder.input_area("S");
        let a = builder.brain_area("A");
        builder.fiber(s, a).recurrent(a);
        let b = match model {
            SeqModel::Simple => None,
            SeqModel::Scaffold => {
                let b = builder.brain_area("B");
                builder.fiber(a, b).fiber(b, a).recurrent(b);
                Some(b)
            }
        };
        let net = builder.build()?;
        Ok(Self {
            model,
            net,
            s,
            a,
            b,
            stimuli,
            trace: SequenceTrace::default(),
        })
    }

    pub fn model(&self) -> SeqModel {
        self.model
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn network_mut(&mut self) -> &mut Network {
        &mut self.net
    }

    pub fn stimuli(&self) -> &[StimulusSet] {
        &self.stimuli
    }

    pub fn trace(&self) -> &SequenceTrace {
        &self.trace
    }

    pub fn len(&self) -> usize {
        self.stimuli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stimuli.is_empty()
    }

    pub fn area_a(&self) -> AreaId {
        self.a
    }

    pub fn area_b(&self) -> Option<AreaId> {
        self.b
    }

    /// One presentation from rest followed by homeostasis.
    pub fn present_once(&mut self) -> Result<()> {
        let len = self.stimuli.len();
        self.net.set_mode(Mode::Training);
        self.net.reset_to_rest();
        let mut caps_a = Vec::with_capacity(len);
        let mut caps_b = Vec::with_capacity(len);
        let rounds = len + if self.b.is_some() { 2 } else { 1 };
        for t in 1..=rounds {
            if t == len + 2 {
                // Only B still has an element to form; keep A quiet so the
                // trailing round does not grow a spurious cap there.
                self.net.gates_mut().set(self.a, Gate::Counter(0))?;
            }
            match self.stimuli.get(t - 1) {
                Some(stim) => self.net.step(&[(self.s, stim)])?,
                None => self.net.step(&[])?,
            }
            if (2..=len + 1).contains(&t) {
                caps_a.push(Assembly::new(self.net.firing(self.a).to_vec()));
            }
            if let Some(b) = self.b {
                if t >= 3 {
                    caps_b.push(Assembly::new(self.net.firing(b).to_vec()));
                }
            }
        }
        self.net.homeostasis();
        self.net.reset_to_rest();
        self.trace.a.push(caps_a);
        if self.b.is_some() {
            self.trace.b.push(caps_b);
        }
        Ok(())
    }

    pub fn train(&mut self, presentations: usize) -> Result<()> {
        for _ in 0..presentations {
            self.present_once()?;
        }
        Ok(())
    }

    /// Fires `S_start` once from rest and lets the brain areas run on their
    /// own for the rest of the sequence. Weights and dynamic state are left
    /// exactly as they were.
    pub fn cued_recall(&mut self, start: usize) -> Result<RecallReport> {
        let len = self.stimuli.len();
        if start == 0 || start > len {
            return Err(Error::OutOfRange {
                index: start,
                len: len + 1,
            });
        }
        let reference: Vec<Assembly> = match self.trace.reference() {
            Some(r) => r.to_vec(),
            None => vec![Assembly::empty(); len],
        };
        let reference_b: Option<Vec<Assembly>> = self.b.map(|_| match self.trace.reference_b() {
            Some(r) => r.to_vec(),
            None => vec![Assembly::empty(); len],
        });
        let k = self.net.params().k;
        let (s, a, b) = (self.s, self.a, self.b);
        let cue = self.stimuli[start - 1].clone();
        let steps = len - start + 1 + usize::from(b.is_some());

        let (fired_a, fired_b) = self.net.frozen(|net| -> Result<_> {
            net.reset_to_rest();
            net.step(&[(s, &cue)])?;
            let mut fa = Vec::with_capacity(steps);
            let mut fb = Vec::with_capacity(steps);
            for _ in 0..steps {
                net.step(&[])?;
                fa.push(net.firing(a).to_vec());
                if let Some(b) = b {
                    fb.push(net.firing(b).to_vec());
                }
            }
            net.reset_to_rest();
            Ok((fa, fb))
        })?;

        let recall = (start..=len)
            .map(|j| crate::assembly::overlap_fraction(&fired_a[j - start], &reference[j - 1], k))
            .collect();
        let recall_b = reference_b.map(|rb| {
            (start..=len)
                .map(|j| crate::assembly::overlap_fraction(&fired_b[j - start + 1], &rb[j - 1], k))
                .collect()
        });
        Ok(RecallReport {
            start,
            recall,
            recall_b,
            max_overlap: max_overlap(&reference, k),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ModelParams {
        ModelParams::new(300, 15, 0.3, 0.1).unwrap()
    }

    #[test]
    fn overlap_extremes() {
        let a = Assembly::new(vec![1, 2, 3]);
        assert_eq!(max_overlap(&[a.clone(), a.clone()], 3), 1.0);
        let b = Assembly::new(vec![4, 5, 6]);
        assert_eq!(max_overlap(&[a, b], 3), 0.0);
    }

    #[test]
    fn trace_shapes() {
        let mut seq = SequenceNet::new(small(), SeqModel::Scaffold, 6, 0, 3).unwrap();
        seq.train(2).unwrap();
        let t = seq.trace();
        assert_eq!(t.presentations(), 2);
        assert_eq!(t.a[1].len(), 6);
        assert_eq!(t.b[1].len(), 6);
        assert!(t.a[1].iter().chain(&t.b[1]).all(|c| c.len() == 15));
    }

    #[test]
    fn recall_range_checked() {
        let mut seq = SequenceNet::new(small(), SeqModel::Simple, 4, 0, 3).unwrap();
        assert!(seq.cued_recall(0).is_err());
        assert!(seq.cued_recall(5).is_err());
        assert_eq!(seq.cued_recall(4).unwrap().recall.len(), 1);
    }

    #[test]
    fn recall_leaves_state() {
        let mut seq = SequenceNet::new(small(), SeqModel::Simple, 5, 0, 3).unwrap();
        seq.train(3).unwrap();
        let before = seq.network().save_state();
        let fibers = seq.network().fibers().to_vec();
        seq.cued_recall(1).unwrap();
        assert_eq!(before, seq.network().save_state());
        assert_eq!(fibers, seq.network().fibers());
    }
}

//! Learning a finite state machine by presenting its transitions, and
//! running it on strings with the learned network.

use serde::{Deserialize, Serialize};

use crate::arcnet::{ArcNet, ArcTransition, RoundFiring, Schedule};
use crate::assembly::{intersection_len, overlap_fraction};
use crate::error::Result;
use crate::fsm::{Decision, Fsm};
use crate::params::ModelParams;

/// Overlap of one round's cap with the assembly the machine predicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundOverlap {
    pub round: usize,
    /// `"S"` for state rounds, `"A"` for arc rounds.
    pub area: String,
    /// State name, or `state/symbol` for arcs.
    pub expected: String,
    pub overlap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Simulation {
    pub decision: Decision,
    /// State whose assembly best matches the last cap.
    pub final_state: usize,
    pub trace: Vec<RoundOverlap>,
    pub outputs: Vec<Option<char>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecall {
    pub state: usize,
    pub symbol: usize,
    pub recall: f64,
    /// Output-area recall, transducers only.
    pub output_recall: Option<f64>,
}

pub struct FsmNetwork {
    fsm: Fsm,
    arcs: ArcNet,
    transitions: Vec<ArcTransition>,
    outputs: Vec<char>,
}

impl FsmNetwork {
    /// Builds the network and assigns assemblies; no training yet.
    pub fn new(fsm: Fsm, params: ModelParams, delta: usize, seed: u64) -> Result<Self> {
        let q = fsm.states.len();
        let sigma = fsm.symbols.len();
        if params.n < q * q * sigma * sigma {
            log::warn!(
                "n = {} is below |Q|^2 |Σ|^2 = {}; transitions may interfere",
                params.n,
                q * q * sigma * sigma
            );
        }
        let outputs = fsm.output_symbols();
        let out_spec: Vec<(&str, usize)> = if outputs.is_empty() {
            Vec::new()
        } else {
            vec![("B", outputs.len())]
        };
        let arcs = ArcNet::new(params, sigma, q, &out_spec, delta, seed)?;
        let transitions = fsm
            .delta
            .iter()
            .map(|(&(state, symbol), &next)| ArcTransition {
                state,
                symbol,
                next,
                outputs: if outputs.is_empty() {
                    Vec::new()
                } else {
                    vec![fsm
                        .output
                        .get(&(state, symbol))
                        .map(|g| outputs.binary_search(g).expect("collected above"))]
                },
            })
            .collect();
        Ok(Self {
            fsm,
            arcs,
            transitions,
            outputs,
        })
    }

    /// Trains with `presentations` per transition.
    pub fn train(&mut self, presentations: usize, schedule: Schedule) -> Result<()> {
        self.arcs.train(&self.transitions, presentations, schedule)
    }

    /// One shuffled presentation of every transition.
    pub fn train_epoch(&mut self) -> Result<()> {
        self.arcs.epoch(&self.transitions)
    }

    pub fn fsm(&self) -> &Fsm {
        &self.fsm
    }

    pub fn arc_net(&self) -> &ArcNet {
        &self.arcs
    }

    pub fn arc_net_mut(&mut self) -> &mut ArcNet {
        &mut self.arcs
    }

    /// Runs `input` with the end marker appended. The state cap after the
    /// end marker (round `2L + 3` for `L` input symbols) decides: accept only
    /// if the accept assembly matches strictly better than every other state.
    pub fn simulate_string(&mut self, input: &str) -> Result<Simulation> {
        let symbols = self.fsm.encode(input)?;
        let reference = self.fsm.reference_run(input)?;
        let log = self.arcs.run(self.fsm.initial, &symbols)?;
        let k = self.arcs.k();

        let trace = self.overlap_trace(&log, &symbols, &reference.states, k);
        let last = &log.last().expect("at least one round").state;
        let hits: Vec<usize> = self
            .arcs
            .state_assemblies()
            .iter()
            .map(|a| intersection_len(last, a.as_slice()))
            .collect();
        let best = *hits.iter().max().expect("states exist");
        let final_state = hits.iter().position(|&h| h == best).expect("max exists");
        let accept = self.fsm.accept;
        let decision = if hits
            .iter()
            .enumerate()
            .all(|(q, &h)| q == accept || h < hits[accept])
        {
            Decision::Accept
        } else {
            Decision::Reject
        };
        let outputs = if self.outputs.is_empty() {
            Vec::new()
        } else {
            log.iter()
                .skip(2)
                .step_by(2)
                .map(|r| {
                    crate::assembly::best_match(&r.outputs[0], self.arcs.output_assemblies(0))
                        .filter(|&(_, h)| h > 0)
                        .map(|(i, _)| self.outputs[i])
                })
                .collect()
        };
        Ok(Simulation {
            decision,
            final_state,
            trace,
            outputs,
        })
    }

    fn overlap_trace(
        &self,
        log: &[RoundFiring],
        symbols: &[usize],
        states: &[usize],
        k: usize,
    ) -> Vec<RoundOverlap> {
        let fsm = &self.fsm;
        let mut trace = Vec::with_capacity(log.len());
        for r in log {
            if r.round % 2 == 1 {
                let q = states[r.round / 2];
                trace.push(RoundOverlap {
                    round: r.round,
                    area: "S".into(),
                    expected: fsm.states[q].clone(),
                    overlap: overlap_fraction(&r.state, &self.arcs.state_assemblies()[q], k),
                });
            } else {
                let i = r.round / 2 - 1;
                let (q, s) = (states[i], symbols[i]);
                let overlap = self
                    .arcs
                    .arcs()
                    .get(&(q, s))
                    .map_or(0.0, |a| overlap_fraction(&r.arc, a, k));
                trace.push(RoundOverlap {
                    round: r.round,
                    area: "A".into(),
                    expected: format!("{}/{}", fsm.states[q], fsm.symbols[s]),
                    overlap,
                });
            }
        }
        trace
    }

    /// For every transition, fires its state and symbol together and
    /// measures the next-state assembly two rounds later.
    pub fn transition_recall(&mut self) -> Result<Vec<TransitionRecall>> {
        let k = self.arcs.k();
        let mut out = Vec::with_capacity(self.transitions.len());
        for tr in self.transitions.clone() {
            let (_, s3) = self.arcs.probe(tr.state, tr.symbol)?;
            let recall = overlap_fraction(&s3.state, &self.arcs.state_assemblies()[tr.next], k);
            let output_recall = tr.outputs.first().copied().flatten().map(|g| {
                overlap_fraction(&s3.outputs[0], &self.arcs.output_assemblies(0)[g], k)
            });
            out.push(TransitionRecall {
                state: tr.state,
                symbol: tr.symbol,
                recall,
                output_recall,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::even_zeros;

    #[test]
    fn trace_alternates_areas() {
        let p = ModelParams::new(400, 20, 0.3, 0.1).unwrap();
        let mut net = FsmNetwork::new(even_zeros(), p, 0, 5).unwrap();
        net.train(2, Schedule::Shuffled).unwrap();
        let sim = net.simulate_string("010").unwrap();
        assert_eq!(sim.trace.len(), 9);
        for r in &sim.trace {
            assert_eq!(r.area, if r.round % 2 == 1 { "S" } else { "A" });
        }
        assert_eq!(sim.trace[0].overlap, 1.0);
    }
}

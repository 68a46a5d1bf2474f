//! State/symbol/arc networks shared by the FSM and TM controllers.
//!
//! An input area `I` holds one assembly per symbol and a brain area `S` one
//! per state. Both project into an arc area `A`, which projects back into
//! `S` and into any number of output areas. `S` and `A` alternate under
//! interneuron control, so a state and symbol firing together on round `t`
//! produce an arc cap on `t + 1` and the next state on `t + 2`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::assembly::Assembly;
use crate::error::{Error, Result};
use crate::gates::alternation_wiring;
use crate::graph::sample_stimuli;
use crate::network::{AreaId, Mode, Network, NetworkBuilder};
use crate::params::ModelParams;
use crate::rng::SeedStream;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// Every epoch presents each transition once, in a fresh random order.
    #[default]
    Shuffled,
    /// Each transition is presented all its times in a row.
    Blocked,
}

/// One transition to memorise. `outputs[o]` is the assembly index to fire in
/// output area `o`, or `None` to keep that area silent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcTransition {
    pub state: usize,
    pub symbol: usize,
    pub next: usize,
    pub outputs: Vec<Option<usize>>,
}

/// Firing of every controller area on one round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundFiring {
    pub round: usize,
    pub state: Vec<u32>,
    pub arc: Vec<u32>,
    pub outputs: Vec<Vec<u32>>,
}

pub struct ArcNet {
    net: Network,
    input: AreaId,
    state: AreaId,
    arc: AreaId,
    outputs: Vec<AreaId>,
    symbol_asm: Vec<Assembly>,
    state_asm: Vec<Assembly>,
    output_asm: Vec<Vec<Assembly>>,
    arcs: BTreeMap<(usize, usize), Assembly>,
    seed: u64,
    epochs: usize,
}

impl ArcNet {
    /// `outputs` lists the extra output areas by name and assembly count.
    ///
    /// The arc and state areas have no recurrent fibers: under alternation
    /// neither fires on consecutive rounds, so such fibers would never carry
    /// input.
    ///
    /// The drive fibers `I -> A` and `S -> A` start non-plastic, so each arc
    /// stays the cap that `S_q ∪ I_σ` evokes on the untrained weights. With
    /// plastic drive the caps of transitions sharing a state merge within a
    /// few epochs. See [`ArcNet::set_drive_plasticity`].
    pub fn new(
        params: ModelParams,
        symbols: usize,
        states: usize,
        outputs: &[(&str, usize)],
        delta: usize,
        seed: u64,
    ) -> Result<Self> {
        let mut b = NetworkBuilder::new(params, seed);
        let input = b.input_area("I");
        let state = b.brain_area("S");
        let arc = b.brain_area("A");
        b.fiber(input, arc).fiber(state, arc).fiber(arc, state);
        let out_ids: Vec<AreaId> = outputs
            .iter()
            .map(|(name, _)| {
                let id = b.brain_area(name);
                b.fiber(arc, id);
                id
            })
            .collect();
        let mut net = b.build()?;
        alternation_wiring(net.gates_mut(), state, arc)?;
        net.set_plastic(input, arc, false)?;
        net.set_plastic(state, arc, false)?;

        let (n, k) = (params.n, params.k);
        let draw = |label: &str, count: usize| {
            sample_stimuli(n, k, count, delta, &mut SeedStream::labeled(seed, label).rng())
        };
        let symbol_asm = draw("assemblies:I", symbols)?;
        let state_asm = draw("assemblies:S", states)?;
        let output_asm = outputs
            .iter()
            .map(|(name, count)| draw(&format!("assemblies:{name}"), *count))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            net,
            input,
            state,
            arc,
            outputs: out_ids,
            symbol_asm,
            state_asm,
            output_asm,
            arcs: BTreeMap::new(),
            seed,
            epochs: 0,
        })
    }

    /// Turns Hebbian learning on the `I -> A` and `S -> A` fibers on or off.
    pub fn set_drive_plasticity(&mut self, plastic: bool) -> Result<()> {
        self.net.set_plastic(self.input, self.arc, plastic)?;
        self.net.set_plastic(self.state, self.arc, plastic)
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn network_mut(&mut self) -> &mut Network {
        &mut self.net
    }

    pub fn symbol_assemblies(&self) -> &[Assembly] {
        &self.symbol_asm
    }

    pub fn state_assemblies(&self) -> &[Assembly] {
        &self.state_asm
    }

    pub fn output_assemblies(&self, output: usize) -> &[Assembly] {
        &self.output_asm[output]
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    /// Arc caps recorded on the latest presentation of each transition.
    pub fn arcs(&self) -> &BTreeMap<(usize, usize), Assembly> {
        &self.arcs
    }

    pub fn k(&self) -> usize {
        self.net.params().k
    }

    fn check(&self, tr: &ArcTransition) -> Result<()> {
        let range = |index: usize, len: usize| {
            if index < len {
                Ok(())
            } else {
                Err(Error::OutOfRange { index, len })
            }
        };
        range(tr.state, self.state_asm.len())?;
        range(tr.next, self.state_asm.len())?;
        range(tr.symbol, self.symbol_asm.len())?;
        if tr.outputs.len() != self.outputs.len() {
            return Err(Error::InvalidParams(format!(
                "transition lists {} outputs, network has {}",
                tr.outputs.len(),
                self.outputs.len()
            )));
        }
        for (o, out) in tr.outputs.iter().enumerate() {
            if let Some(x) = out {
                range(*x, self.output_asm[o].len())?;
            }
        }
        Ok(())
    }

    /// Fires `{S_q, I_σ}`, then the arc cap, then the targets, with plasticity
    /// on, and applies homeostasis.
    pub fn present(&mut self, tr: &ArcTransition) -> Result<()> {
        self.check(tr)?;
        self.net.set_mode(Mode::Training);
        self.net.reset_to_rest();
        self.net.step(&[
            (self.state, &self.state_asm[tr.state]),
            (self.input, &self.symbol_asm[tr.symbol]),
        ])?;
        self.net.step(&[])?;
        let cap = Assembly::new(self.net.firing(self.arc).to_vec());

        let silent = Assembly::empty();
        let mut clamps: Vec<(AreaId, &Assembly)> = vec![(self.state, &self.state_asm[tr.next])];
        for (o, out) in tr.outputs.iter().enumerate() {
            let set = match out {
                Some(x) => &self.output_asm[o][*x],
                None => &silent,
            };
            clamps.push((self.outputs[o], set));
        }
        self.net.step(&clamps)?;
        self.net.homeostasis();
        self.net.reset_to_rest();
        self.arcs.insert((tr.state, tr.symbol), cap);
        Ok(())
    }

    /// `epochs` presentations of every transition.
    pub fn train(&mut self, transitions: &[ArcTransition], epochs: usize, schedule: Schedule) -> Result<()> {
        match schedule {
            Schedule::Blocked => {
                for tr in transitions {
                    for _ in 0..epochs {
                        self.present(tr)?;
                    }
                }
                self.epochs += epochs;
            }
            Schedule::Shuffled => {
                for _ in 0..epochs {
                    self.epoch(transitions)?;
                }
            }
        }
        self.net.set_mode(Mode::Evaluation);
        Ok(())
    }

    /// One shuffled pass over `transitions`.
    pub fn epoch(&mut self, transitions: &[ArcTransition]) -> Result<()> {
        let mut order: Vec<usize> = (0..transitions.len()).collect();
        let mut rng = SeedStream::labeled(self.seed, &format!("schedule:{}", self.epochs)).rng();
        order.shuffle(&mut rng);
        for i in order {
            self.present(&transitions[i])?;
        }
        self.epochs += 1;
        self.net.set_mode(Mode::Evaluation);
        Ok(())
    }

    /// Starts from `S_state` and feeds `symbols` on odd rounds, recording
    /// every round. With `m` symbols the last state cap forms on round
    /// `2m + 1`. Frozen: weights and dynamic state are not disturbed.
    pub fn run(&mut self, state: usize, symbols: &[usize]) -> Result<Vec<RoundFiring>> {
        if state >= self.state_asm.len() {
            return Err(Error::OutOfRange {
                index: state,
                len: self.state_asm.len(),
            });
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= self.symbol_asm.len()) {
            return Err(Error::OutOfRange {
                index: bad,
                len: self.symbol_asm.len(),
            });
        }
        let (input, st, arc) = (self.input, self.state, self.arc);
        let outputs = self.outputs.clone();
        let start = self.state_asm[state].clone();
        let feed: Vec<Assembly> = symbols.iter().map(|&s| self.symbol_asm[s].clone()).collect();
        let rounds = 2 * symbols.len() + 1;
        self.net.frozen(|net| {
            net.reset_to_rest();
            let mut log = Vec::with_capacity(rounds);
            for round in 1..=rounds {
                let sym = if round % 2 == 1 { feed.get(round / 2) } else { None };
                let mut clamps: Vec<(AreaId, &Assembly)> = Vec::new();
                if round == 1 {
                    clamps.push((st, &start));
                }
                if let Some(s) = sym {
                    clamps.push((input, s));
                }
                net.step(&clamps)?;
                log.push(RoundFiring {
                    round,
                    state: net.firing(st).to_vec(),
                    arc: net.firing(arc).to_vec(),
                    outputs: outputs.iter().map(|&o| net.firing(o).to_vec()).collect(),
                });
            }
            net.reset_to_rest();
            Ok(log)
        })
    }

    /// Fires `S_state` and `I_symbol` together and returns rounds 2 and 3.
    pub fn probe(&mut self, state: usize, symbol: usize) -> Result<(RoundFiring, RoundFiring)> {
        let log = self.run(state, &[symbol])?;
        let mut it = log.into_iter().skip(1);
        Ok((it.next().expect("two rounds"), it.next().expect("three rounds")))
    }

    /// Largest `|A_x ∩ A_y| / k` between recorded arc caps.
    pub fn max_arc_overlap(&self) -> f64 {
        let caps: Vec<Assembly> = self.arcs.values().cloned().collect();
        crate::sequences::max_overlap(&caps, self.k())
    }
}

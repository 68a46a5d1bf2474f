//! The two-area alternation circuit, run as a firing table.
//!
//! Areas `A` and `B` both read the input area `S` and each other. Each
//! round lists who fires: the stimulus `S_t`, the cap of whichever brain area
//! is open (numbered per area), and the interneurons. `D_X` fires when `X`
//! will be disinhibited next round and `I_X` when it will be inhibited.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gates::alternation_wiring;
use crate::graph::sample_stimuli;
use crate::network::{AreaId, Network, NetworkBuilder};
use crate::params::ModelParams;
use crate::rng::SeedStream;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternationRow {
    pub round: u64,
    pub firing: Vec<String>,
}

impl fmt::Display for AlternationRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.round, self.firing.join(", "))
    }
}

pub struct Alternation {
    net: Network,
    s: AreaId,
    a: AreaId,
    b: AreaId,
    seed: u64,
}

impl Alternation {
    pub fn new(params: ModelParams, seed: u64) -> Result<Self> {
        let mut builder = NetworkBuilder::new(params, seed);
        let s = builder.input_area("S");
        let a = builder.brain_area("A");
        let b = builder.brain_area("B");
        builder.fiber(s, a).fiber(s, b).fiber(a, b).fiber(b, a);
        let mut net = builder.build()?;
        alternation_wiring(net.gates_mut(), a, b)?;
        Ok(Self { net, s, a, b, seed })
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    /// Clamps `rounds` disjoint stimuli, one per round, and tabulates who fires.
    pub fn table(&mut self, rounds: usize) -> Result<Vec<AlternationRow>> {
        let p = *self.net.params();
        let stimuli = sample_stimuli(
            p.n,
            p.k,
            rounds,
            0,
            &mut SeedStream::labeled(self.seed, "stimuli:S").rng(),
        )?;
        let mut caps = [0usize; 2];
        let mut rows = Vec::with_capacity(rounds);
        for (t, stim) in stimuli.iter().enumerate() {
            self.net.step(&[(self.s, stim)])?;
            let mut firing = vec![format!("S_{}", t + 1)];
            for (i, (area, name)) in [(self.a, "A"), (self.b, "B")].into_iter().enumerate() {
                if !self.net.firing(area).is_empty() {
                    caps[i] += 1;
                    firing.push(format!("{name}_{}", caps[i]));
                }
            }
            for (area, name) in [(self.a, "A"), (self.b, "B")] {
                if self.net.gates().is_open(area) {
                    firing.push(format!("D_{name}"));
                }
            }
            for (area, name) in [(self.a, "A"), (self.b, "B")] {
                if !self.net.gates().is_open(area) {
                    firing.push(format!("I_{name}"));
                }
            }
            rows.push(AlternationRow {
                round: self.net.round(),
                firing,
            });
        }
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn areas_take_turns() {
        let mut alt = Alternation::new(ModelParams::new(200, 10, 0.2, 0.1).unwrap(), 4).unwrap();
        let rows = alt.table(8).unwrap();
        for row in &rows[1..] {
            let caps: Vec<_> = row.firing.iter().filter(|f| f.starts_with('A') || f.starts_with('B')).collect();
            assert_eq!(caps.len(), 1, "{row}");
            let expect = if row.round % 2 == 0 { 'A' } else { 'B' };
            assert!(caps[0].starts_with(expect), "{row}");
        }
    }
}

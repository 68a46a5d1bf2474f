//! One half of a tape: a stack of assemblies cycling through three areas.
//!
//! The top of the stack is the assembly that fired last, in one of `H1`,
//! `H2`, `H3`. Each assembly projects forward to the one below it (area
//! `i` to area `i + 1`) and to the assembly of its symbol in `Sym`.
//! Interneuron rules keyed on the control areas `C_add` and `C_delete`
//! decide which area may fire during an operation:
//!
//! * `C_add` with the top in `H_i` opens `H_{i-1}` for the new assembly and
//!   keeps `H_i` firing while the two get linked;
//! * `C_delete` with the top in `H_i` opens `H_{i+1}`, where the link from
//!   the top recalls the assembly below it.
//!
//! New assemblies are driven by fresh random caps of the input area `E`.
//! The bottom of every half is a sentinel assembly linked to the blank.
//!
//! Homeostasis is off in a tape half. Each assembly's recurrent weights are
//! strengthened on every round it fires, so after normalisation they would
//! drown out the forward link that a delete relies on.

use serde::{Deserialize, Serialize};

use crate::assembly::{best_match, Assembly};
use crate::error::{Error, Result};
use crate::gates::{Event, Gate, GateAction, GateRule};
use crate::graph::sample_stimuli;
use crate::network::{AreaId, AreaKind, Mode, Network, NetworkBuilder};
use crate::params::ModelParams;
use crate::rng::SeedStream;

/// Rounds per operation: `max(⌈5 √(ln n) / β⌉, 10)`.
pub fn default_rounds(n: usize, beta: f64) -> usize {
    if beta <= 0.0 {
        return 10;
    }
    let t = (5.0 * (n as f64).ln().sqrt() / beta).ceil() as usize;
    t.max(10)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TapeConfig {
    /// Rounds per add or delete.
    pub rounds: usize,
    /// Rounds of an add during which the old top keeps firing to receive
    /// the forward link. The symbol is clamped for the rest of the window.
    pub link_rounds: usize,
    /// Number of driver caps available, i.e. the most adds a half supports.
    pub drivers: usize,
}

impl TapeConfig {
    pub fn for_params(params: &ModelParams) -> Self {
        let rounds = default_rounds(params.n, params.beta);
        Self {
            rounds,
            link_rounds: rounds / 2,
            drivers: 256,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.rounds < 3 || self.link_rounds == 0 || self.link_rounds + 2 > self.rounds {
            return Err(Error::InvalidParams(format!(
                "tape needs rounds >= 3 and 1 <= link_rounds <= rounds - 2, got {} and {}",
                self.rounds, self.link_rounds
            )));
        }
        Ok(())
    }
}

/// Which areas held the chain after each operation, bottom first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub area: usize,
    pub assembly: Assembly,
}

#[derive(Clone)]
pub struct TapeHalf {
    net: Network,
    h: [AreaId; 3],
    sym: AreaId,
    drive: AreaId,
    c_add: AreaId,
    c_delete: AreaId,
    symbols: Vec<Assembly>,
    drivers: Vec<Assembly>,
    used: usize,
    cfg: TapeConfig,
    chain: Vec<ChainEntry>,
    blank: usize,
}

impl TapeHalf {
    /// A half over `symbols` symbols; `blank` indexes the blank symbol, which
    /// the bottom sentinel is linked to.
    pub fn new(params: ModelParams, symbols: usize, blank: usize, cfg: TapeConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        if blank >= symbols {
            return Err(Error::OutOfRange {
                index: blank,
                len: symbols,
            });
        }
        let mut b = NetworkBuilder::new(params, seed);
        let h = [b.brain_area("H1"), b.brain_area("H2"), b.brain_area("H3")];
        let sym = b.brain_area("Sym");
        let drive = b.input_area("E");
        let c_add = b.sized_area("C_add", AreaKind::Input, params.k, params.k);
        let c_delete = b.sized_area("C_delete", AreaKind::Input, params.k, params.k);
        for i in 0..3 {
            b.recurrent(h[i]).fiber(h[i], h[(i + 1) % 3]).fiber(h[i], sym).fiber(drive, h[i]);
        }
        let mut net = b.build()?;
        net.set_homeostasis(false);

        let t = cfg.rounds as u32;
        let g = net.gates_mut();
        for i in 0..3 {
            let (prev, this, next) = (h[(i + 2) % 3], h[i], h[(i + 1) % 3]);
            let add = vec![Event::Fired(c_add), Event::Fired(this)];
            // The new top stays open one round past the window so that it
            // fires alongside the next control signal.
            g.add_rule(GateRule::new(add.clone(), prev, GateAction::Disinhibit(t)))?;
            g.add_rule(GateRule::new(add, this, GateAction::Disinhibit(cfg.link_rounds as u32)))?;
            g.add_rule(GateRule::new(
                vec![Event::Fired(c_delete), Event::Fired(this)],
                next,
                GateAction::Disinhibit(t),
            ))?;
            g.set_initial(this, Gate::Counter(0))?;
        }
        g.set_initial(sym, Gate::Counter(0))?;
        net.reset_to_rest();

        let (n, k) = (params.n, params.k);
        let overlap = (6.0 * (n as f64).ln()).floor() as usize;
        let symbol_asm = sample_stimuli(n, k, symbols, 0, &mut SeedStream::labeled(seed, "assemblies:Sym").rng())?;
        let drivers = sample_stimuli(n, k, cfg.drivers, overlap, &mut SeedStream::labeled(seed, "drivers:E").rng())?;
        let mut half = Self {
            net,
            h,
            sym,
            drive,
            c_add,
            c_delete,
            symbols: symbol_asm,
            drivers,
            used: 0,
            cfg,
            chain: Vec::new(),
            blank,
        };
        half.push_bottom()?;
        Ok(half)
    }

    fn control(&self) -> Assembly {
        Assembly::new((0..self.net.params().k as u32).collect())
    }

    fn next_driver(&mut self) -> Result<Assembly> {
        let z = self.drivers.get(self.used).cloned().ok_or(Error::OutOfRange {
            index: self.used,
            len: self.drivers.len(),
        })?;
        self.used += 1;
        Ok(z)
    }

    fn top_area(&self) -> usize {
        self.chain.last().expect("sentinel always present").area
    }

    fn push_bottom(&mut self) -> Result<()> {
        self.net.set_mode(Mode::Training);
        let z = self.next_driver()?;
        let s = self.symbols[self.blank].clone();
        self.net.gates_mut().set(self.h[0], Gate::Counter(self.cfg.rounds as u32 + 1))?;
        for r in 1..=self.cfg.rounds {
            if r > self.cfg.link_rounds + 1 {
                self.net.step(&[(self.drive, &z), (self.sym, &s)])?;
            } else {
                self.net.step(&[(self.drive, &z)])?;
            }
        }
        self.finish(0)
    }

    fn finish(&mut self, area: usize) -> Result<()> {
        for area in self.h.into_iter().chain([self.sym]) {
            self.net.rescale_incoming(area, 1e100);
        }
        let cap = Assembly::new(self.net.firing(self.h[area]).to_vec());
        self.chain.push(ChainEntry { area, assembly: cap });
        Ok(())
    }

    /// Symbols stored above the sentinel.
    pub fn depth(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.depth() == 0
    }

    pub fn rounds(&self) -> usize {
        self.cfg.rounds
    }

    pub fn config(&self) -> &TapeConfig {
        &self.cfg
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn symbol_assemblies(&self) -> &[Assembly] {
        &self.symbols
    }

    /// Chain of assemblies, bottom sentinel first, as recorded when each was
    /// created or uncovered.
    pub fn chain(&self) -> &[ChainEntry] {
        &self.chain
    }

    pub fn area_of(&self, index: usize) -> AreaId {
        self.h[index]
    }

    /// Pushes `symbol`. Takes exactly [`TapeHalf::rounds`] rounds.
    pub fn add(&mut self, symbol: usize) -> Result<()> {
        if symbol >= self.symbols.len() {
            return Err(Error::OutOfRange {
                index: symbol,
                len: self.symbols.len(),
            });
        }
        let i = self.top_area();
        let z = self.next_driver()?;
        let s = self.symbols[symbol].clone();
        let c = self.control();
        self.net.set_mode(Mode::Training);
        self.net.step(&[(self.c_add, &c)])?;
        for r in 2..=self.cfg.rounds {
            if r > self.cfg.link_rounds + 1 {
                self.net.step(&[(self.drive, &z), (self.sym, &s)])?;
            } else {
                self.net.step(&[(self.drive, &z)])?;
            }
        }
        self.finish((i + 2) % 3)
    }

    /// Pops the top symbol. Takes exactly [`TapeHalf::rounds`] rounds.
    pub fn delete(&mut self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyTape);
        }
        let i = self.top_area();
        let c = self.control();
        self.net.set_mode(Mode::Training);
        self.net.step(&[(self.c_delete, &c)])?;
        for _ in 2..=self.cfg.rounds {
            self.net.step(&[])?;
        }
        self.chain.pop();
        self.chain.pop();
        self.finish((i + 1) % 3)
    }

    fn recall_symbol(&mut self) -> Result<Vec<u32>> {
        let sym = self.sym;
        self.net.frozen(|net| {
            net.gates_mut().set(sym, Gate::Counter(1))?;
            net.step(&[])?;
            Ok(net.firing(sym).to_vec())
        })
    }

    /// Lets `Sym` fire once from the current top and returns the best
    /// matching symbol. Leaves the network untouched.
    pub fn read_top(&mut self) -> Result<usize> {
        let fired = self.recall_symbol()?;
        Ok(best_match(&fired, &self.symbols).map_or(self.blank, |(i, _)| i))
    }

    /// Overlap of the symbol recalled by the current top with `symbol`.
    pub fn read_overlap(&mut self, symbol: usize) -> Result<f64> {
        let fired = self.recall_symbol()?;
        Ok(crate::assembly::overlap_fraction(&fired, &self.symbols[symbol], self.net.params().k))
    }

    /// Reads the whole half top to bottom by popping a copy.
    pub fn contents(&self) -> Result<Vec<usize>> {
        let mut copy = self.clone();
        let mut out = Vec::with_capacity(copy.depth());
        while !copy.is_empty() {
            out.push(copy.read_top()?);
            copy.delete()?;
        }
        Ok(out)
    }
}

/// Plain stack used as the oracle for [`TapeHalf`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReferenceStack {
    items: Vec<usize>,
}

impl ReferenceStack {
    pub fn push(&mut self, symbol: usize) {
        self.items.push(symbol);
    }

    pub fn pop(&mut self) -> Option<usize> {
        self.items.pop()
    }

    pub fn top(&self) -> Option<usize> {
        self.items.last().copied()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> TapeHalf {
        let p = ModelParams::new(600, 30, 0.3, 0.1).unwrap();
        let cfg = TapeConfig {
            rounds: 40,
            link_rounds: 20,
            drivers: 16,
        };
        TapeHalf::new(p, 3, 2, cfg, 9).unwrap()
    }

    #[test]
    fn rounds_default() {
        assert_eq!(default_rounds(1000, 0.1), 132);
        assert_eq!(default_rounds(1000, 10.0), 10);
    }

    #[test]
    fn stack_semantics() {
        let mut t = half();
        assert_eq!(t.read_top().unwrap(), 2);
        t.add(1).unwrap();
        assert_eq!(t.read_top().unwrap(), 1);
        t.add(0).unwrap();
        assert_eq!(t.read_top().unwrap(), 0);
        t.delete().unwrap();
        assert_eq!(t.read_top().unwrap(), 1);
        t.delete().unwrap();
        assert_eq!(t.read_top().unwrap(), 2);
        assert!(t.is_empty());
        assert!(matches!(t.delete(), Err(Error::EmptyTape)));
    }

    #[test]
    fn chain_cycles_backwards_through_areas() {
        let mut t = half();
        for s in [0, 1, 0, 1] {
            t.add(s).unwrap();
        }
        let areas: Vec<usize> = t.chain().iter().map(|c| c.area).collect();
        assert_eq!(areas, vec![0, 2, 1, 0, 2]);
    }

    #[test]
    fn window_length_matches_config() {
        let mut t = half();
        let before = t.network().round();
        t.add(0).unwrap();
        assert_eq!(t.network().round() - before, 40);
        t.delete().unwrap();
        assert_eq!(t.network().round() - before, 80);
    }
}

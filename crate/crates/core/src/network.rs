//! Areas, fibers and the synchronous update step.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assembly::Assembly;
use crate::error::{Error, Result};
use crate::gates::GateController;
use crate::graph::{gen_fiber, gen_recurrent};
use crate::kcap::k_cap;
use crate::params::ModelParams;
use crate::rng::SeedStream;

/// Current snapshot format version.
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AreaId(pub usize);

impl fmt::Display for AreaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AreaKind {
    /// Fires only what is clamped onto it; has no incoming synapses.
    Input,
    /// Fires the k-cap of its synaptic input.
    Brain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub name: String,
    pub kind: AreaKind,
    pub n: usize,
    pub k: usize,
    firing: Vec<u32>,
}

impl Area {
    pub fn firing(&self) -> &[u32] {
        &self.firing
    }
}

/// A directed bundle of synapses from `src` to `dst`.
///
/// Both the mask and the weights are src-major: edge `j -> i` sits at
/// `j * nd + i`. Weights are zero off the mask.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fiber {
    pub src: AreaId,
    pub dst: AreaId,
    pub ns: usize,
    pub nd: usize,
    pub plastic: bool,
    #[serde(with = "bits")]
    mask: FixedBitSet,
    weights: Vec<f64>,
}

impl Fiber {
    fn from_mask(src: AreaId, dst: AreaId, ns: usize, nd: usize, mask: FixedBitSet) -> Self {
        let weights = (0..ns * nd)
            .map(|idx| if mask.contains(idx) { 1.0 } else { 0.0 })
            .collect();
        Self {
            src,
            dst,
            ns,
            nd,
            plastic: true,
            mask,
            weights,
        }
    }

    pub fn is_recurrent(&self) -> bool {
        self.src == self.dst
    }

    pub fn has_edge(&self, j: usize, i: usize) -> bool {
        self.mask.contains(j * self.nd + i)
    }

    pub fn weight(&self, j: usize, i: usize) -> f64 {
        self.weights[j * self.nd + i]
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.mask
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones(..)
    }

    /// Sum of the weights onto destination neuron `i`.
    pub fn incoming_sum(&self, i: usize) -> f64 {
        (0..self.ns).map(|j| self.weights[j * self.nd + i]).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Hebbian updates and homeostasis are active.
    Training,
    /// Weights are frozen.
    Evaluation,
}

/// Called after every homeostasis pass.
pub type HomeostasisHook = Arc<dyn Fn(&Network) + Send + Sync>;

/// The mutable part of a network that a measurement disturbs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynState {
    firing: Vec<Vec<u32>>,
    gates: GateController,
    round: u64,
    tie_rng: ChaCha8Rng,
}

#[derive(Clone, Serialize, Deserialize)]
pub struct Network {
    params: ModelParams,
    areas: Vec<Area>,
    fibers: Vec<Fiber>,
    incoming: Vec<Vec<usize>>,
    gates: GateController,
    mode: Mode,
    homeostasis: bool,
    round: u64,
    tie_rng: ChaCha8Rng,
    #[serde(with = "bits_vec")]
    dirty: Vec<FixedBitSet>,
    #[serde(skip)]
    hook: Option<HomeostasisHook>,
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Network")
            .field("params", &self.params)
            .field("areas", &self.areas.iter().map(|a| &a.name).collect::<Vec<_>>())
            .field("fibers", &self.fibers.len())
            .field("mode", &self.mode)
            .field("round", &self.round)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    format: String,
    version: u32,
    network: Network,
}

impl Network {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn areas(&self) -> &[Area] {
        &self.areas
    }

    pub fn area(&self, id: AreaId) -> &Area {
        &self.areas[id.0]
    }

    pub fn area_id(&self, name: &str) -> Option<AreaId> {
        self.areas.iter().position(|a| a.name == name).map(AreaId)
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn fiber(&self, src: AreaId, dst: AreaId) -> Option<&Fiber> {
        self.fibers.iter().find(|f| f.src == src && f.dst == dst)
    }

    /// Disables or enables plasticity on one fiber.
    pub fn set_plastic(&mut self, src: AreaId, dst: AreaId, plastic: bool) -> Result<()> {
        let f = self
            .fibers
            .iter_mut()
            .find(|f| f.src == src && f.dst == dst)
            .ok_or_else(|| Error::Wiring(format!("no fiber {src} -> {dst}")))?;
        f.plastic = plastic;
        Ok(())
    }

    pub fn firing(&self, id: AreaId) -> &[u32] {
        &self.areas[id.0].firing
    }

    pub fn gates(&self) -> &GateController {
        &self.gates
    }

    pub fn gates_mut(&mut self) -> &mut GateController {
        &mut self.gates
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: Mode) {
        self.mode = mode;
    }

    /// Turns the homeostasis pass on or off; it is on by default.
    pub fn set_homeostasis(&mut self, enabled: bool) {
        self.homeostasis = enabled;
    }

    pub fn homeostasis_enabled(&self) -> bool {
        self.homeostasis
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn set_homeostasis_hook(&mut self, hook: Option<HomeostasisHook>) {
        self.hook = hook;
    }

    /// Synaptic input to every neuron of `area` from the current firing.
    pub fn total_input(&self, area: AreaId) -> Vec<f64> {
        let mut acc = vec![0.0; self.areas[area.0].n];
        self.accumulate_input(area, &mut acc);
        acc
    }

    fn accumulate_input(&self, area: AreaId, acc: &mut [f64]) {
        for &fi in &self.incoming[area.0] {
            let f = &self.fibers[fi];
            for &j in &self.areas[f.src.0].firing {
                let row = &f.weights[j as usize * f.nd..(j as usize + 1) * f.nd];
                for (a, &w) in acc.iter_mut().zip(row) {
                    *a += w;
                }
            }
        }
    }

    /// One synchronous round.
    ///
    /// Clamped areas fire their clamp (input areas only while their gate is
    /// open; brain areas unconditionally). Every other open brain area fires
    /// the k-cap of its input and closed areas stay silent. In training mode
    /// the Hebbian rule then strengthens every edge from a neuron that fired
    /// last round to one that fires now, and finally the gates advance.
    pub fn step(&mut self, clamps: &[(AreaId, &Assembly)]) -> Result<()> {
        for (id, set) in clamps {
            let area = self.areas.get(id.0).ok_or(Error::UnknownArea(id.0))?;
            if let Some(&last) = set.as_slice().last() {
                if last as usize >= area.n {
                    return Err(Error::OutOfRange {
                        index: last as usize,
                        len: area.n,
                    });
                }
            }
        }

        let mut next: Vec<Vec<u32>> = Vec::with_capacity(self.areas.len());
        let mut input = Vec::new();
        for (idx, area) in self.areas.iter().enumerate() {
            let id = AreaId(idx);
            let clamp = clamps.iter().find(|(a, _)| *a == id).map(|(_, s)| *s);
            let open = self.gates.is_open(id);
            let fired = match (area.kind, clamp) {
                (AreaKind::Input, Some(s)) if open => s.as_slice().to_vec(),
                (AreaKind::Input, _) => Vec::new(),
                (AreaKind::Brain, Some(s)) => s.as_slice().to_vec(),
                (AreaKind::Brain, None) if open => {
                    input.clear();
                    input.resize(area.n, 0.0);
                    self.accumulate_input(id, &mut input);
                    k_cap(&input, area.k, &mut self.tie_rng)
                }
                (AreaKind::Brain, None) => Vec::new(),
            };
            next.push(fired);
        }

        if self.mode == Mode::Training && self.params.beta > 0.0 {
            self.hebbian(&next);
        }

        let fired: Vec<bool> = next.iter().map(|f| !f.is_empty()).collect();
        for (area, f) in self.areas.iter_mut().zip(next) {
            area.firing = f;
        }
        self.gates.apply(&fired, self.round)?;
        self.round += 1;
        Ok(())
    }

    fn hebbian(&mut self, next: &[Vec<u32>]) {
        let factor = 1.0 + self.params.beta;
        for f in self.fibers.iter_mut().filter(|f| f.plastic) {
            let pre = &self.areas[f.src.0].firing;
            let post = &next[f.dst.0];
            if pre.is_empty() || post.is_empty() {
                continue;
            }
            let dirty = &mut self.dirty[f.dst.0];
            for &j in pre {
                let base = j as usize * f.nd;
                for &i in post {
                    let idx = base + i as usize;
                    if f.mask.contains(idx) {
                        f.weights[idx] *= factor;
                        dirty.insert(i as usize);
                    }
                }
            }
        }
    }

    /// Rescales the incoming weights of every brain neuron, jointly across
    /// all its fibers, to sum to one. Neurons whose weights have not changed
    /// since the last pass are already normalised and are skipped, as are
    /// neurons with no incoming synapses. Does nothing in evaluation mode.
    pub fn homeostasis(&mut self) {
        if self.mode == Mode::Evaluation || !self.homeostasis {
            return;
        }
        for a in 0..self.areas.len() {
            if self.areas[a].kind == AreaKind::Input || self.dirty[a].is_clear() {
                continue;
            }
            let n = self.areas[a].n;
            let dirty: Vec<usize> = self.dirty[a].ones().collect();
            if dirty.len() * 8 >= n {
                self.normalise_rows(a, &dirty);
            } else {
                self.normalise_columns(a, &dirty);
            }
            self.dirty[a].clear();
        }
        if let Some(hook) = self.hook.clone() {
            hook(self);
        }
    }

    fn normalise_columns(&mut self, a: usize, dirty: &[usize]) {
        for &i in dirty {
            let mut sum = 0.0;
            for &fi in &self.incoming[a] {
                let f = &self.fibers[fi];
                for j in 0..f.ns {
                    sum += f.weights[j * f.nd + i];
                }
            }
            if sum > 0.0 {
                for &fi in &self.incoming[a] {
                    let f = &mut self.fibers[fi];
                    for j in 0..f.ns {
                        f.weights[j * f.nd + i] /= sum;
                    }
                }
            }
        }
    }

    fn normalise_rows(&mut self, a: usize, dirty: &[usize]) {
        let n = self.areas[a].n;
        let mut sums = vec![0.0; n];
        for &fi in &self.incoming[a] {
            let f = &self.fibers[fi];
            for row in f.weights.chunks_exact(f.nd) {
                for (s, &w) in sums.iter_mut().zip(row) {
                    *s += w;
                }
            }
        }
        let mut divisor = vec![1.0; n];
        for &i in dirty {
            if sums[i] > 0.0 {
                divisor[i] = sums[i];
            }
        }
        for &fi in &self.incoming[a] {
            let f = &mut self.fibers[fi];
            for row in f.weights.chunks_exact_mut(f.nd) {
                for (w, &d) in row.iter_mut().zip(&divisor) {
                    *w /= d;
                }
            }
        }
    }

    /// Sum of all weights onto neuron `i` of `area`, across every fiber.
    pub fn incoming_sum(&self, area: AreaId, i: usize) -> f64 {
        self.incoming[area.0]
            .iter()
            .map(|&fi| self.fibers[fi].incoming_sum(i))
            .sum()
    }

    /// Summed incoming weight of every neuron of `area`, in one pass.
    pub fn incoming_sums(&self, area: AreaId) -> Vec<f64> {
        let mut sums = vec![0.0; self.areas[area.0].n];
        for &fi in &self.incoming[area.0] {
            let f = &self.fibers[fi];
            for row in f.weights.chunks_exact(f.nd) {
                for (s, &w) in sums.iter_mut().zip(row) {
                    *s += w;
                }
            }
        }
        sums
    }

    /// Largest `|sum - 1|` over the incoming weights of brain neurons that
    /// have any synapse. Zero right after a homeostasis pass.
    pub fn normalisation_error(&self) -> f64 {
        (0..self.areas.len())
            .filter(|&a| self.areas[a].kind == AreaKind::Brain)
            .flat_map(|a| self.incoming_sums(AreaId(a)))
            .filter(|&s| s > 0.0)
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Whether neuron `i` of `area` has any incoming synapse.
    pub fn has_incoming(&self, area: AreaId, i: usize) -> bool {
        self.incoming[area.0].iter().any(|&fi| {
            let f = &self.fibers[fi];
            (0..f.ns).any(|j| f.has_edge(j, i))
        })
    }

    /// Divides every weight into `area` by the largest one if that exceeds
    /// `limit`. The k-cap of an area is unchanged by a common positive
    /// factor, so this only guards against overflow in long runs without
    /// homeostasis. Returns whether a rescale happened.
    pub fn rescale_incoming(&mut self, area: AreaId, limit: f64) -> bool {
        let max = self.incoming[area.0]
            .iter()
            .flat_map(|&fi| self.fibers[fi].weights.iter().copied())
            .fold(0.0, f64::max);
        if max <= limit {
            return false;
        }
        for &fi in &self.incoming[area.0] {
            self.fibers[fi].weights.iter_mut().for_each(|w| *w /= max);
        }
        true
    }

    /// Clears all firing and restores the initial gate configuration.
    /// Weights, mode and the round counter are kept.
    pub fn reset_to_rest(&mut self) {
        for a in &mut self.areas {
            a.firing.clear();
        }
        self.gates.reset();
    }

    pub fn save_state(&self) -> DynState {
        DynState {
            firing: self.areas.iter().map(|a| a.firing.clone()).collect(),
            gates: self.gates.clone(),
            round: self.round,
            tie_rng: self.tie_rng.clone(),
        }
    }

    pub fn restore_state(&mut self, state: DynState) {
        for (a, f) in self.areas.iter_mut().zip(state.firing) {
            a.firing = f;
        }
        self.gates = state.gates;
        self.round = state.round;
        self.tie_rng = state.tie_rng;
    }

    /// Runs `f` in evaluation mode and then puts back everything it may have
    /// disturbed, so measurements never influence later training.
    pub fn frozen<T>(&mut self, f: impl FnOnce(&mut Network) -> T) -> T {
        let state = self.save_state();
        let mode = self.mode;
        self.mode = Mode::Evaluation;
        let out = f(self);
        self.mode = mode;
        self.restore_state(state);
        out
    }

    /// Forces the firing of `area` without stepping, e.g. to seed a probe.
    pub fn set_firing(&mut self, area: AreaId, set: &Assembly) -> Result<()> {
        let a = self.areas.get_mut(area.0).ok_or(Error::UnknownArea(area.0))?;
        a.firing = set.as_slice().to_vec();
        Ok(())
    }

    pub fn to_snapshot(&self) -> Result<String> {
        let snap = SnapshotRef {
            format: "nemo-network",
            version: SNAPSHOT_VERSION,
            network: self,
        };
        Ok(serde_json::to_string(&snap)?)
    }

    pub fn from_snapshot(text: &str) -> Result<Self> {
        let snap: Snapshot = serde_json::from_str(text)?;
        if snap.format != "nemo-network" {
            return Err(Error::Snapshot(format!("unexpected format `{}`", snap.format)));
        }
        if snap.version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported version {} (expected {SNAPSHOT_VERSION})",
                snap.version
            )));
        }
        Ok(snap.network)
    }
}

/// Bit sets travel as `(len, blocks)` so any serde format can carry them.
mod bits {
    use fixedbitset::FixedBitSet;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(set: &FixedBitSet, s: S) -> Result<S::Ok, S::Error> {
        (set.len(), set.as_slice()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<FixedBitSet, D::Error> {
        let (len, blocks): (usize, Vec<usize>) = Deserialize::deserialize(d)?;
        Ok(FixedBitSet::with_capacity_and_blocks(len, blocks))
    }
}

mod bits_vec {
    use fixedbitset::FixedBitSet;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(sets: &[FixedBitSet], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<(usize, &[usize])> = sets.iter().map(|b| (b.len(), b.as_slice())).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<FixedBitSet>, D::Error> {
        let raw: Vec<(usize, Vec<usize>)> = Deserialize::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|(len, blocks)| FixedBitSet::with_capacity_and_blocks(len, blocks))
            .collect())
    }
}

#[derive(Serialize)]
struct SnapshotRef<'a> {
    format: &'a str,
    version: u32,
    network: &'a Network,
}

/// Declares areas and fibers, then draws the random graphs.
pub struct NetworkBuilder {
    params: ModelParams,
    seed: u64,
    areas: Vec<Area>,
    fibers: Vec<(AreaId, AreaId, f64)>,
}

impl NetworkBuilder {
    pub fn new(params: ModelParams, seed: u64) -> Self {
        Self {
            params,
            seed,
            areas: Vec::new(),
            fibers: Vec::new(),
        }
    }

    fn area(&mut self, name: &str, kind: AreaKind, n: usize, k: usize) -> AreaId {
        self.areas.push(Area {
            name: name.to_string(),
            kind,
            n,
            k,
            firing: Vec::new(),
        });
        AreaId(self.areas.len() - 1)
    }

    /// An input area sized like the model parameters.
    pub fn input_area(&mut self, name: &str) -> AreaId {
        self.area(name, AreaKind::Input, self.params.n, self.params.k)
    }

    pub fn brain_area(&mut self, name: &str) -> AreaId {
        self.area(name, AreaKind::Brain, self.params.n, self.params.k)
    }

    pub fn sized_area(&mut self, name: &str, kind: AreaKind, n: usize, k: usize) -> AreaId {
        self.area(name, kind, n, k)
    }

    pub fn fiber(&mut self, src: AreaId, dst: AreaId) -> &mut Self {
        self.fibers.push((src, dst, self.params.p));
        self
    }

    pub fn fiber_with_p(&mut self, src: AreaId, dst: AreaId, p: f64) -> &mut Self {
        self.fibers.push((src, dst, p));
        self
    }

    pub fn recurrent(&mut self, area: AreaId) -> &mut Self {
        self.fiber(area, area)
    }

    pub fn build(self) -> Result<Network> {
        self.params.validate()?;
        let mut fibers = Vec::with_capacity(self.fibers.len());
        let mut incoming = vec![Vec::new(); self.areas.len()];
        for (src, dst, p) in self.fibers {
            let (s, d) = match (self.areas.get(src.0), self.areas.get(dst.0)) {
                (Some(s), Some(d)) => (s, d),
                (None, _) => return Err(Error::UnknownArea(src.0)),
                (_, None) => return Err(Error::UnknownArea(dst.0)),
            };
            if d.kind == AreaKind::Input {
                return Err(Error::Wiring(format!(
                    "input area `{}` cannot receive a fiber",
                    d.name
                )));
            }
            if incoming[dst.0].iter().any(|&fi: &usize| {
                let f: &Fiber = &fibers[fi];
                f.src == src
            }) {
                return Err(Error::Wiring(format!(
                    "duplicate fiber `{}` -> `{}`",
                    s.name, d.name
                )));
            }
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidParams(format!("edge probability {p}")));
            }
            let mut rng = SeedStream::labeled(self.seed, &format!("fiber:{}->{}", s.name, d.name)).rng();
            let mask = if src == dst {
                gen_recurrent(s.n, p, &mut rng)
            } else {
                gen_fiber(s.n, d.n, p, &mut rng)
            };
            incoming[dst.0].push(fibers.len());
            fibers.push(Fiber::from_mask(src, dst, s.n, d.n, mask));
        }
        let dirty = self
            .areas
            .iter()
            .map(|a| {
                let mut bits = FixedBitSet::with_capacity(a.n);
                if a.kind == AreaKind::Brain {
                    bits.insert_range(..);
                }
                bits
            })
            .collect();
        Ok(Network {
            params: self.params,
            gates: GateController::new(self.areas.len()),
            areas: self.areas,
            fibers,
            incoming,
            mode: Mode::Training,
            homeostasis: true,
            round: 0,
            tie_rng: SeedStream::labeled(self.seed, "ties").rng(),
            dirty,
            hook: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, k: usize, p: f64, beta: f64) -> ModelParams {
        ModelParams::new(n, k, p, beta).unwrap()
    }

    fn pair(p: ModelParams, seed: u64) -> (Network, AreaId, AreaId) {
        let mut b = NetworkBuilder::new(p, seed);
        let s = b.input_area("S");
        let a = b.brain_area("A");
        b.fiber(s, a).recurrent(a);
        (b.build().unwrap(), s, a)
    }

    #[test]
    fn rest_gives_zero_input() {
        let (net, _, a) = pair(params(50, 5, 0.3, 0.1), 1);
        assert!(net.total_input(a).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rejects_fiber_into_input() {
        let mut b = NetworkBuilder::new(params(10, 2, 0.5, 0.1), 1);
        let s = b.input_area("S");
        let a = b.brain_area("A");
        b.fiber(a, s);
        assert!(matches!(b.build(), Err(Error::Wiring(_))));
    }

    #[test]
    fn unknown_clamp_is_error() {
        let (mut net, _, _) = pair(params(10, 2, 0.5, 0.1), 1);
        let set = Assembly::new(vec![0, 1]);
        assert!(matches!(
            net.step(&[(AreaId(9), &set)]),
            Err(Error::UnknownArea(9))
        ));
    }

    #[test]
    fn hebbian_compounds() {
        let (mut net, s, a) = pair(params(4, 4, 1.0, 0.1), 1);
        let all = Assembly::new(vec![0, 1, 2, 3]);
        net.step(&[(s, &all)]).unwrap();
        assert!(net.firing(a).is_empty());
        net.step(&[(s, &all)]).unwrap();
        let w = net.fiber(s, a).unwrap().weight(0, 0);
        assert!((w - 1.1).abs() < 1e-15);
        net.step(&[(s, &all)]).unwrap();
        let f = net.fiber(s, a).unwrap();
        assert!((f.weight(0, 0) - 1.21).abs() < 1e-12);
        let r = net.fiber(a, a).unwrap();
        assert!((r.weight(0, 1) - 1.1).abs() < 1e-15);
        assert_eq!(r.weight(0, 0), 0.0);
    }

    #[test]
    fn silent_post_keeps_weight() {
        let (mut net, s, a) = pair(params(4, 4, 1.0, 0.1), 1);
        net.gates_mut()
            .set_initial(a, crate::gates::Gate::Counter(0))
            .unwrap();
        let all = Assembly::new(vec![0, 1, 2, 3]);
        net.step(&[(s, &all)]).unwrap();
        net.step(&[(s, &all)]).unwrap();
        assert_eq!(net.fiber(s, a).unwrap().weight(0, 0), 1.0);
    }

    #[test]
    fn homeostasis_normalises() {
        let (mut net, s, a) = pair(params(30, 5, 0.5, 0.2), 4);
        let set = Assembly::new(vec![1, 2, 3, 4, 5]);
        for _ in 0..5 {
            net.step(&[(s, &set)]).unwrap();
        }
        net.homeostasis();
        for i in 0..30 {
            if net.has_incoming(a, i) {
                assert!((net.incoming_sum(a, i) - 1.0).abs() < 1e-12);
            }
        }
        let before = net.fibers().to_vec();
        net.homeostasis();
        assert_eq!(before, net.fibers());
    }

    #[test]
    fn snapshot_roundtrip() {
        let (mut net, s, _) = pair(params(20, 4, 0.4, 0.1), 2);
        let set = Assembly::new(vec![0, 1, 2, 3]);
        net.step(&[(s, &set)]).unwrap();
        net.step(&[(s, &set)]).unwrap();
        let text = net.to_snapshot().unwrap();
        let back = Network::from_snapshot(&text).unwrap();
        assert_eq!(back.fibers(), net.fibers());
        assert_eq!(back.areas(), net.areas());
        assert_eq!(back.round(), net.round());
        assert!(Network::from_snapshot(&text.replace("\"version\":1", "\"version\":7")).is_err());
    }

    #[test]
    fn reset_is_idempotent() {
        let (mut net, s, a) = pair(params(20, 4, 0.4, 0.1), 2);
        let set = Assembly::new(vec![0, 1, 2, 3]);
        net.step(&[(s, &set)]).unwrap();
        net.step(&[(s, &set)]).unwrap();
        net.reset_to_rest();
        assert!(net.total_input(a).iter().all(|&x| x == 0.0));
        let once = net.save_state();
        net.reset_to_rest();
        assert_eq!(once, net.save_state());
    }
}

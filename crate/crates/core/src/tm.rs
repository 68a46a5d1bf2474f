//! Single-tape Turing machines: text format, reference interpreter and the
//! assembly simulation built from an arc controller and two tape halves.
//!
//! ```text
//! // appends a 1 to a unary number
//! states: scan acc rej
//! alphabet: 1 _
//! initial: scan
//! accept: acc
//! reject: rej
//! scan 1 -> scan 1 R
//! scan _ -> acc 1 R
//! ```
//!
//! `_` is the blank and is always part of the alphabet. A left move must
//! write back the symbol it read.
//!
//! The tape is held as two stacks. The head reads the top of the right
//! half; moving right pops the right half and pushes the written symbol on
//! the left, moving left pops the left half onto the right.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::arcnet::{ArcNet, ArcTransition, Schedule};
use crate::assembly::{best_match, overlap_fraction};
use crate::error::{Error, Result};
use crate::fsm::single_char;
use crate::params::ModelParams;
use crate::rng::SeedStream;
use crate::tape::{TapeConfig, TapeHalf};

pub const BLANK: char = '_';

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
}

impl Move {
    pub fn index(self) -> usize {
        match self {
            Move::L => 0,
            Move::R => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Move::L
        } else {
            Move::R
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::L => "L",
            Move::R => "R",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Action {
    pub next: usize,
    pub write: usize,
    pub dir: Move,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuringMachine {
    pub states: Vec<String>,
    /// Tape symbols; the blank is always present.
    pub symbols: Vec<char>,
    pub blank: usize,
    pub initial: usize,
    pub accept: usize,
    pub reject: usize,
    pub delta: BTreeMap<(usize, usize), Action>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Accept,
    Reject,
    Timeout,
}

/// One step of a run: what the machine saw and did.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmStep {
    pub state: String,
    pub read: char,
    pub written: char,
    pub dir: Move,
    pub next: String,
    /// Overlaps of the decoded next state, write and move assemblies; empty
    /// for reference runs.
    pub overlaps: Vec<f64>,
}

impl fmt::Display for TmStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {} {} {}", self.state, self.read, self.next, self.written, self.dir)?;
        for o in &self.overlaps {
            write!(f, " {o:.3}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmRun {
    pub outcome: Outcome,
    pub steps: Vec<TmStep>,
    /// Final tape with leading and trailing blanks removed.
    pub tape: String,
}

/// Two-stack tape over symbol indices, top at the end of each vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct StackTape {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl TuringMachine {
    pub fn parse(text: &str) -> Result<Self> {
        let mut states: Option<(usize, Vec<String>)> = None;
        let mut alphabet: Option<Vec<char>> = None;
        let mut named: BTreeMap<&str, String> = BTreeMap::new();
        let mut lines: Vec<(usize, Vec<&str>)> = Vec::new();

        for (no, raw) in text.lines().enumerate() {
            let no = no + 1;
            let line = raw.split("//").next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, rest)) = line.split_once(':') else {
                lines.push((no, line.split_whitespace().collect()));
                continue;
            };
            let words: Vec<&str> = rest.split_whitespace().collect();
            let key = key.trim();
            let dup = || Error::parse(no, format!("duplicate `{key}` header"));
            match key {
                "states" => {
                    if states.is_some() {
                        return Err(dup());
                    }
                    states = Some((no, words.iter().map(|w| w.to_string()).collect()));
                }
                "alphabet" => {
                    if alphabet.is_some() {
                        return Err(dup());
                    }
                    let mut syms = Vec::new();
                    for w in &words {
                        let c = single_char(w, no)?;
                        if syms.contains(&c) {
                            return Err(Error::parse(no, format!("symbol `{c}` declared twice")));
                        }
                        syms.push(c);
                    }
                    alphabet = Some(syms);
                }
                "initial" | "accept" | "reject" => {
                    let [w] = words.as_slice() else {
                        return Err(Error::parse(no, format!("`{key}` takes exactly one state")));
                    };
                    let slot = match key {
                        "initial" => "initial",
                        "accept" => "accept",
                        _ => "reject",
                    };
                    if named.insert(slot, w.to_string()).is_some() {
                        return Err(dup());
                    }
                }
                other => return Err(Error::parse(no, format!("unknown header `{other}`"))),
            }
        }

        let missing = |what: &str| Error::parse(0, format!("missing `{what}` header"));
        let (states_line, states) = states.ok_or_else(|| missing("states"))?;
        let mut symbols = alphabet.ok_or_else(|| missing("alphabet"))?;
        if !symbols.contains(&BLANK) {
            symbols.push(BLANK);
        }
        let blank = symbols.iter().position(|&c| c == BLANK).expect("inserted above");
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::parse(states_line, format!("state `{s}` declared twice")));
            }
        }
        let find = |name: &str, line: usize| -> Result<usize> {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::parse(line, format!("unknown state `{name}`")))
        };
        let sym = |c: char, line: usize| -> Result<usize> {
            symbols
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| Error::parse(line, format!("unknown symbol `{c}`")))
        };
        let header = |key: &str| -> Result<usize> { find(named.get(key).ok_or_else(|| missing(key))?, 0) };
        let initial = header("initial")?;
        let accept = header("accept")?;
        let reject = header("reject")?;
        if accept == reject {
            return Err(Error::parse(0, "accept and reject must differ"));
        }
        if initial == accept || initial == reject {
            return Err(Error::parse(0, "the initial state cannot be terminal"));
        }

        let mut delta = BTreeMap::new();
        for (no, words) in lines {
            let [q, s, "->", r, w, d] = words.as_slice() else {
                return Err(Error::parse(no, "expected `q σ -> r ρ d`"));
            };
            let q = find(q, no)?;
            let next = find(r, no)?;
            let read = sym(single_char(s, no)?, no)?;
            let write = sym(single_char(w, no)?, no)?;
            let dir = match *d {
                "L" => Move::L,
                "R" => Move::R,
                other => return Err(Error::parse(no, format!("direction `{other}` is not L or R"))),
            };
            if q == accept || q == reject {
                return Err(Error::parse(no, "terminal states have no transitions"));
            }
            if dir == Move::L && write != read {
                return Err(Error::parse(no, "a left move must write the symbol it reads"));
            }
            if delta.insert((q, read), Action { next, write, dir }).is_some() {
                return Err(Error::parse(no, "duplicate transition"));
            }
        }

        let tm = TuringMachine {
            states,
            symbols,
            blank,
            initial,
            accept,
            reject,
            delta,
        };
        for q in tm.working_states() {
            for (s, &c) in tm.symbols.iter().enumerate() {
                if !tm.delta.contains_key(&(q, s)) {
                    return Err(Error::parse(
                        0,
                        format!("missing transition for `{}` on `{c}`", tm.states[q]),
                    ));
                }
            }
        }
        Ok(tm)
    }

    /// Canonical text form; parsing it gives back an identical machine.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let alpha: Vec<String> = self.symbols.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "alphabet: {}", alpha.join(" "));
        let _ = writeln!(out, "initial: {}", self.states[self.initial]);
        let _ = writeln!(out, "accept: {}", self.states[self.accept]);
        let _ = writeln!(out, "reject: {}", self.states[self.reject]);
        for (&(q, s), a) in &self.delta {
            let _ = writeln!(
                out,
                "{} {} -> {} {} {}",
                self.states[q], self.symbols[s], self.states[a.next], self.symbols[a.write], a.dir
            );
        }
        out
    }

    pub fn is_terminal(&self, q: usize) -> bool {
        q == self.accept || q == self.reject
    }

    pub fn working_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(move |&q| !self.is_terminal(q))
    }

    pub fn symbol_index(&self, c: char) -> Result<usize> {
        self.symbols
            .iter()
            .position(|&x| x == c)
            .ok_or(Error::UnknownSymbol(c))
    }

    pub fn encode(&self, input: &str) -> Result<Vec<usize>> {
        input.chars().map(|c| self.symbol_index(c)).collect()
    }

    fn outcome(&self, q: usize) -> Option<Outcome> {
        if q == self.accept {
            Some(Outcome::Accept)
        } else if q == self.reject {
            Some(Outcome::Reject)
        } else {
            None
        }
    }

    /// Renders a tape bottom-left to bottom-right, blanks trimmed.
    pub fn render(&self, left: &[usize], right_top_first: &[usize]) -> String {
        let cells: String = left
            .iter()
            .chain(right_top_first)
            .map(|&s| self.symbols[s])
            .collect();
        cells.trim_matches(BLANK).to_string()
    }

    /// Exact symbolic run of at most `max_steps` transitions.
    pub fn reference_run(&self, input: &str, max_steps: usize) -> Result<TmRun> {
        let mut tape = StackTape {
            left: Vec::new(),
            right: self.encode(input)?.into_iter().rev().collect(),
        };
        let mut q = self.initial;
        let mut steps = Vec::new();
        let outcome = loop {
            if let Some(o) = self.outcome(q) {
                break o;
            }
            if steps.len() == max_steps {
                break Outcome::Timeout;
            }
            let read = tape.right.last().copied().unwrap_or(self.blank);
            let a = self.delta[&(q, read)];
            match a.dir {
                Move::R => {
                    tape.right.pop();
                    tape.left.push(a.write);
                }
                Move::L => {
                    let x = tape.left.pop().unwrap_or(self.blank);
                    tape.right.push(x);
                }
            }
            steps.push(TmStep {
                state: self.states[q].clone(),
                read: self.symbols[read],
                written: self.symbols[a.write],
                dir: a.dir,
                next: self.states[a.next].clone(),
                overlaps: Vec::new(),
            });
            q = a.next;
        };
        let right: Vec<usize> = tape.right.iter().rev().copied().collect();
        Ok(TmRun {
            outcome,
            steps,
            tape: self.render(&tape.left, &right),
        })
    }
}

/// Accepts at once: `δ(q₀, _) = (q_A, _, R)`, rejects anything else.
pub fn immediate_accept() -> TuringMachine {
    TuringMachine::parse(
        "states: start acc rej\nalphabet: 1 _\ninitial: start\naccept: acc\nreject: rej\n\
         start _ -> acc _ R\nstart 1 -> rej 1 R\n",
    )
    .expect("built-in machine is well formed")
}

/// Appends a `1` to a unary number and accepts.
pub fn unary_successor() -> TuringMachine {
    TuringMachine::parse(
        "states: scan acc rej\nalphabet: 1 _\ninitial: scan\naccept: acc\nreject: rej\n\
         scan 1 -> scan 1 R\nscan _ -> acc 1 R\n",
    )
    .expect("built-in machine is well formed")
}

/// Parameters of an assembly TM simulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmConfig {
    pub controller: ModelParams,
    pub tape: ModelParams,
    pub tape_config: TapeConfig,
    /// Presentations per transition when training the controller.
    pub presentations: usize,
}

impl TmConfig {
    pub fn new(controller: ModelParams, tape: ModelParams) -> Self {
        Self {
            controller,
            tape,
            tape_config: TapeConfig::for_params(&tape),
            presentations: 15,
        }
    }
}

/// A Turing machine simulated with assemblies.
///
/// The controller is an arc network whose arcs project to the next state,
/// to a write area `M` and to a move area `D`. The state between steps is
/// the best matching state assembly of the last state cap.
pub struct TmNetwork {
    tm: TuringMachine,
    cfg: TmConfig,
    arcs: ArcNet,
    transitions: Vec<ArcTransition>,
    seed: u64,
}

impl TmNetwork {
    pub fn new(tm: TuringMachine, cfg: TmConfig, seed: u64) -> Result<Self> {
        let q = tm.states.len();
        let sigma = tm.symbols.len();
        let t = cfg.tape_config.rounds;
        let need = 2 * (t * t).max(q * q * sigma * sigma);
        if cfg.tape.n < need {
            log::warn!("tape n = {} is below 2 max(T^2, |Q|^2 |Σ|^2) = {need}", cfg.tape.n);
        }
        let arcs = ArcNet::new(
            cfg.controller,
            sigma,
            q,
            &[("M", sigma), ("D", 2)],
            0,
            SeedStream::labeled(seed, "controller").stream,
        )?;
        let transitions = tm
            .delta
            .iter()
            .map(|(&(state, symbol), a)| ArcTransition {
                state,
                symbol,
                next: a.next,
                outputs: vec![Some(a.write), Some(a.dir.index())],
            })
            .collect();
        Ok(Self {
            tm,
            cfg,
            arcs,
            transitions,
            seed,
        })
    }

    pub fn machine(&self) -> &TuringMachine {
        &self.tm
    }

    pub fn controller(&self) -> &ArcNet {
        &self.arcs
    }

    pub fn controller_mut(&mut self) -> &mut ArcNet {
        &mut self.arcs
    }

    /// Presents every transition `presentations` times.
    pub fn train(&mut self) -> Result<()> {
        self.arcs
            .train(&self.transitions, self.cfg.presentations, Schedule::Shuffled)
    }

    fn new_half(&self, label: &str) -> Result<TapeHalf> {
        TapeHalf::new(
            self.cfg.tape,
            self.tm.symbols.len(),
            self.tm.blank,
            self.cfg.tape_config,
            SeedStream::labeled(self.seed, label).stream,
        )
    }

    /// Loads `input` on the right half, head on its first symbol, and runs
    /// until the decoded state is terminal or `max_steps` steps have run.
    pub fn run(&mut self, input: &str, max_steps: usize) -> Result<TmRun> {
        let symbols = self.tm.encode(input)?;
        let mut left = self.new_half("tape:left")?;
        let mut right = self.new_half("tape:right")?;
        for &s in symbols.iter().rev() {
            right.add(s)?;
        }
        let k = self.cfg.controller.k;
        let mut q = self.tm.initial;
        let mut steps = Vec::new();
        let outcome = loop {
            if let Some(o) = self.tm.outcome(q) {
                break o;
            }
            if steps.len() == max_steps {
                break Outcome::Timeout;
            }
            let read = right.read_top()?;
            let (_, s3) = self.arcs.probe(q, read)?;
            let decode = |fired: &[u32], set: &[crate::Assembly]| {
                best_match(fired, set).map(|(i, _)| i).unwrap_or(0)
            };
            let next = decode(&s3.state, self.arcs.state_assemblies());
            let write = decode(&s3.outputs[0], self.arcs.output_assemblies(0));
            let dir = Move::from_index(decode(&s3.outputs[1], self.arcs.output_assemblies(1)));
            let overlaps = vec![
                overlap_fraction(&s3.state, &self.arcs.state_assemblies()[next], k),
                overlap_fraction(&s3.outputs[0], &self.arcs.output_assemblies(0)[write], k),
                overlap_fraction(&s3.outputs[1], &self.arcs.output_assemblies(1)[dir.index()], k),
            ];
            match dir {
                Move::R => {
                    if right.is_empty() {
                        right.add(self.tm.blank)?;
                    }
                    right.delete()?;
                    left.add(write)?;
                }
                Move::L => {
                    if left.is_empty() {
                        left.add(self.tm.blank)?;
                    }
                    let x = left.read_top()?;
                    left.delete()?;
                    right.add(x)?;
                }
            }
            steps.push(TmStep {
                state: self.tm.states[q].clone(),
                read: self.tm.symbols[read],
                written: self.tm.symbols[write],
                dir,
                next: self.tm.states[next].clone(),
                overlaps,
            });
            q = next;
        };
        let mut l = left.contents()?;
        l.reverse();
        let r = right.contents()?;
        Ok(TmRun {
            outcome,
            steps,
            tape: self.tm.render(&l, &r),
        })
    }
}

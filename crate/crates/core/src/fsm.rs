//! Finite state machines: text format, validation and a reference
//! interpreter.
//!
//! ```text
//! // accepts binary strings with an even number of zeros
//! states: even odd acc rej
//! alphabet: 0 1
//! initial: even
//! accept: acc
//! reject: rej
//! even 0 -> odd
//! even 1 -> even
//! even # -> acc
//! odd 0 -> even
//! odd 1 -> odd
//! odd # -> rej
//! ```
//!
//! Symbols are single characters and `#` is the end-of-input marker, which is
//! implicitly part of every alphabet. A transducer appends `/ γ` to its
//! transition lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The end-of-input marker.
pub const END: char = '#';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Accept,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fsm {
    pub states: Vec<String>,
    /// Input symbols; the end marker is always the last entry.
    pub symbols: Vec<char>,
    pub initial: usize,
    pub accept: usize,
    pub reject: usize,
    /// `(state, symbol) -> next state`, by index.
    pub delta: BTreeMap<(usize, usize), usize>,
    /// Output symbol per transition, for transducers.
    pub output: BTreeMap<(usize, usize), char>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsmRun {
    pub decision: Decision,
    /// Visited states, starting with the initial one and ending terminal.
    pub states: Vec<usize>,
    pub outputs: Vec<Option<char>>,
}

impl Fsm {
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(Default)]
        struct Headers {
            states: Option<(usize, Vec<String>)>,
            alphabet: Option<Vec<char>>,
            initial: Option<String>,
            accept: Option<String>,
            reject: Option<String>,
        }
        let mut h = Headers::default();
        let mut lines: Vec<(usize, Vec<&str>)> = Vec::new();

        for (no, raw) in text.lines().enumerate() {
            let no = no + 1;
            let line = raw.split("//").next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, rest)) = line.split_once(':') {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let single = || -> Result<String> {
                    match words.as_slice() {
                        [w] => Ok((*w).to_string()),
                        _ => Err(Error::parse(no, format!("`{key}` takes exactly one state"))),
                    }
                };
                let dup = || Error::parse(no, format!("duplicate `{key}` header"));
                match key.trim() {
                    "states" => {
                        if h.states.is_some() {
                            return Err(dup());
                        }
                        h.states = Some((no, words.iter().map(|w| w.to_string()).collect()));
                    }
                    "alphabet" => {
                        if h.alphabet.is_some() {
                            return Err(dup());
                        }
                        let mut syms = Vec::new();
                        for w in &words {
                            let c = single_char(w, no)?;
                            if c == END {
                                return Err(Error::parse(no, "`#` is implicit and cannot be declared"));
                            }
                            if syms.contains(&c) {
                                return Err(Error::parse(no, format!("symbol `{c}` declared twice")));
                            }
                            syms.push(c);
                        }
                        h.alphabet = Some(syms);
                    }
                    "initial" if h.initial.is_none() => h.initial = Some(single()?),
                    "accept" if h.accept.is_none() => h.accept = Some(single()?),
                    "reject" if h.reject.is_none() => h.reject = Some(single()?),
                    "initial" | "accept" | "reject" => return Err(dup()),
                    other => return Err(Error::parse(no, format!("unknown header `{other}`"))),
                }
                continue;
            }
            lines.push((no, line.split_whitespace().collect()));
        }

        let missing = |what: &str| Error::parse(0, format!("missing `{what}` header"));
        let (states_line, states) = h.states.ok_or_else(|| missing("states"))?;
        let mut symbols = h.alphabet.ok_or_else(|| missing("alphabet"))?;
        symbols.push(END);
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
        let initial = find(&h.initial.ok_or_else(|| missing("initial"))?, 0)?;
        let accept = find(&h.accept.ok_or_else(|| missing("accept"))?, 0)?;
        let reject = find(&h.reject.ok_or_else(|| missing("reject"))?, 0)?;
        if accept == reject {
            return Err(Error::parse(0, "accept and reject must differ"));
        }
        if initial == accept || initial == reject {
            return Err(Error::parse(0, "the initial state cannot be terminal"));
        }

        let mut delta = BTreeMap::new();
        let mut output = BTreeMap::new();
        for (no, words) in lines {
            let (q, sym, r, out) = match words.as_slice() {
                [q, s, "->", r] => (q, s, r, None),
                [q, s, "->", r, "/", g] => (q, s, r, Some(single_char(g, no)?)),
                _ => return Err(Error::parse(no, "expected `q σ -> r` or `q σ -> r / γ`")),
            };
            let q = find(q, no)?;
            let r = find(r, no)?;
            let c = single_char(sym, no)?;
            let s = symbols
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| Error::parse(no, format!("unknown symbol `{c}`")))?;
            if q == accept || q == reject {
                return Err(Error::parse(no, "terminal states have no transitions"));
            }
            let terminal_target = r == accept || r == reject;
            if c == END && !terminal_target {
                return Err(Error::parse(no, "`#` must lead to the accept or reject state"));
            }
            if c != END && terminal_target {
                return Err(Error::parse(no, "only `#` may lead to a terminal state"));
            }
            if delta.insert((q, s), r).is_some() {
                return Err(Error::parse(no, "duplicate transition"));
            }
            if let Some(g) = out {
                output.insert((q, s), g);
            }
        }

        let fsm = Fsm {
            states,
            symbols,
            initial,
            accept,
            reject,
            delta,
            output,
        };
        for q in fsm.working_states() {
            for (s, &c) in fsm.symbols.iter().enumerate() {
                if !fsm.delta.contains_key(&(q, s)) {
                    return Err(Error::parse(
                        0,
                        format!("missing transition for `{}` on `{c}`", fsm.states[q]),
                    ));
                }
            }
        }
        Ok(fsm)
    }

    /// Canonical text form; parsing it gives back an identical machine.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let alpha: Vec<String> = self.input_symbols().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "alphabet: {}", alpha.join(" "));
        let _ = writeln!(out, "initial: {}", self.states[self.initial]);
        let _ = writeln!(out, "accept: {}", self.states[self.accept]);
        let _ = writeln!(out, "reject: {}", self.states[self.reject]);
        for (&(q, s), &r) in &self.delta {
            let _ = write!(out, "{} {} -> {}", self.states[q], self.symbols[s], self.states[r]);
            if let Some(g) = self.output.get(&(q, s)) {
                let _ = write!(out, " / {g}");
            }
            out.push('\n');
        }
        out
    }

    /// Symbols excluding the end marker.
    pub fn input_symbols(&self) -> &[char] {
        &self.symbols[..self.symbols.len() - 1]
    }

    pub fn end_symbol(&self) -> usize {
        self.symbols.len() - 1
    }

    pub fn symbol_index(&self, c: char) -> Result<usize> {
        self.symbols
            .iter()
            .position(|&x| x == c)
            .ok_or(Error::UnknownSymbol(c))
    }

    pub fn is_terminal(&self, q: usize) -> bool {
        q == self.accept || q == self.reject
    }

    /// Non-terminal states.
    pub fn working_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(move |&q| !self.is_terminal(q))
    }

    /// Distinct output symbols, sorted.
    pub fn output_symbols(&self) -> Vec<char> {
        let mut g: Vec<char> = self.output.values().copied().collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Symbol indices of `input` followed by the end marker.
    pub fn encode(&self, input: &str) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(input.chars().count() + 1);
        for c in input.chars() {
            if c == END {
                return Err(Error::UnknownSymbol(c));
            }
            out.push(self.symbol_index(c)?);
        }
        out.push(self.end_symbol());
        Ok(out)
    }

    pub fn reference_run(&self, input: &str) -> Result<FsmRun> {
        let mut q = self.initial;
        let mut states = vec![q];
        let mut outputs = Vec::new();
        for s in self.encode(input)? {
            outputs.push(self.output.get(&(q, s)).copied());
            q = self.delta[&(q, s)];
            states.push(q);
        }
        let decision = if q == self.accept {
            Decision::Accept
        } else {
            Decision::Reject
        };
        Ok(FsmRun {
            decision,
            states,
            outputs,
        })
    }
}

pub(crate) fn single_char(word: &str, line: usize) -> Result<char> {
    let mut it = word.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::parse(line, format!("`{word}` is not a single character"))),
    }
}

/// Accepts decimal numbers whose digit sum is divisible by three.
pub fn div3() -> Fsm {
    let mut text = String::from(
        "states: r0 r1 r2 acc rej\nalphabet: 0 1 2 3 4 5 6 7 8 9\ninitial: r0\naccept: acc\nreject: rej\n",
    );
    for q in 0..3 {
        for d in 0..10 {
            let _ = writeln!(text, "r{q} {d} -> r{}", (q + d) % 3);
        }
        let _ = writeln!(text, "r{q} # -> {}", if q == 0 { "acc" } else { "rej" });
    }
    Fsm::parse(&text).expect("built-in machine is well formed")
}

/// Accepts binary strings containing an even number of zeros.
pub fn even_zeros() -> Fsm {
    Fsm::parse(
        "states: even odd acc rej\nalphabet: 0 1\ninitial: even\naccept: acc\nreject: rej\n\
         even 0 -> odd\neven 1 -> even\neven # -> acc\nodd 0 -> even\nodd 1 -> odd\nodd # -> rej\n",
    )
    .expect("built-in machine is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_zeros_shape() {
        let f = even_zeros();
        assert_eq!(f.working_states().count(), 2);
        assert_eq!(f.states.len(), 4);
        assert_eq!(f.symbols, vec!['0', '1', '#']);
    }

    #[test]
    fn even_zeros_runs() {
        let f = even_zeros();
        assert_eq!(f.reference_run("00").unwrap().decision, Decision::Accept);
        assert_eq!(f.reference_run("0").unwrap().decision, Decision::Reject);
        assert_eq!(f.reference_run("").unwrap().decision, Decision::Accept);
        assert!(f.reference_run("2").is_err());
        assert!(f.reference_run("0#").is_err());
    }

    #[test]
    fn div3_known_string() {
        let f = div3();
        assert_eq!(f.delta.len(), 33);
        let run = f.reference_run("30471").unwrap();
        assert_eq!(run.decision, Decision::Accept);
        assert_eq!(run.states.len(), 7);
        assert_eq!(f.reference_run("31").unwrap().decision, Decision::Reject);
    }

    #[test]
    fn single_state_accepts_empty() {
        let f = Fsm::parse("states: s a r\nalphabet:\ninitial: s\naccept: a\nreject: r\ns # -> a\n")
            .unwrap();
        assert_eq!(f.reference_run("").unwrap().decision, Decision::Accept);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let base = "states: s a r\nalphabet: x\ninitial: s\naccept: a\nreject: r\n";
        let undeclared = format!("{base}s x -> s\nt x -> s\ns # -> a\n");
        assert!(matches!(Fsm::parse(&undeclared), Err(Error::Parse { line: 7, .. })));
        let missing_end = format!("{base}s x -> s\n");
        assert!(Fsm::parse(&missing_end).is_err());
        let dup = format!("{base}s x -> s\ns x -> s\ns # -> a\n");
        assert!(matches!(Fsm::parse(&dup), Err(Error::Parse { line: 7, .. })));
        let bad_sym = format!("{base}s y -> s\n");
        assert!(matches!(Fsm::parse(&bad_sym), Err(Error::Parse { line: 6, .. })));
    }

    #[test]
    fn transducer_roundtrip() {
        let text = "// flips bits\nstates: s a r\nalphabet: 0 1\ninitial: s\naccept: a\nreject: r\n\
                    s 0 -> s / 1\ns 1 -> s / 0\ns # -> a\n";
        let f = Fsm::parse(text).unwrap();
        assert_eq!(f.output_symbols(), vec!['0', '1']);
        let run = f.reference_run("01").unwrap();
        assert_eq!(run.outputs, vec![Some('1'), Some('0'), None]);
        assert_eq!(Fsm::parse(&f.to_text()).unwrap(), f);
    }
}

//! Interneuron gates as deterministic logic.
//!
//! Each gated area carries a counter of upcoming rounds during which it may
//! fire. After every excitatory step the controller decrements the counters
//! and then evaluates its rules against the events of that step, so a rule
//! triggered by round `t` first affects round `t + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::AreaId;

/// Counter value that never decrements.
pub const HOLD: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    /// Not under interneuron control; always free to fire.
    Free,
    /// Open while the counter is positive.
    Counter(u32),
}

impl Gate {
    pub fn is_open(self) -> bool {
        match self {
            Gate::Free => true,
            Gate::Counter(c) => c > 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Event {
    /// The area fired in the step just taken.
    Fired(AreaId),
    /// The area has fired in exactly this many consecutive steps.
    FiredStreak(AreaId, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateAction {
    /// Keep the target open for at least this many rounds.
    Disinhibit(u32),
    Inhibit,
}

/// Fires `action` on `target` when every event in `when` holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRule {
    pub when: Vec<Event>,
    pub target: AreaId,
    pub action: GateAction,
}

impl GateRule {
    pub fn new(when: Vec<Event>, target: AreaId, action: GateAction) -> Self {
        Self {
            when,
            target,
            action,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateController {
    rules: Vec<GateRule>,
    gates: Vec<Gate>,
    initial: Vec<Gate>,
    streaks: Vec<u32>,
}

impl GateController {
    /// A controller for `areas` ungated areas and no rules.
    pub fn new(areas: usize) -> Self {
        Self {
            rules: Vec::new(),
            gates: vec![Gate::Free; areas],
            initial: vec![Gate::Free; areas],
            streaks: vec![0; areas],
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Sets both the current and the reset state of `area`.
    pub fn set_initial(&mut self, area: AreaId, gate: Gate) -> Result<()> {
        self.check(area)?;
        self.gates[area.0] = gate;
        self.initial[area.0] = gate;
        Ok(())
    }

    /// Overrides the current state of `area` without touching its reset state.
    pub fn set(&mut self, area: AreaId, gate: Gate) -> Result<()> {
        self.check(area)?;
        self.gates[area.0] = gate;
        Ok(())
    }

    pub fn add_rule(&mut self, rule: GateRule) -> Result<()> {
        self.check(rule.target)?;
        for e in &rule.when {
            match *e {
                Event::Fired(a) => self.check(a)?,
                Event::FiredStreak(a, m) => {
                    self.check(a)?;
                    if m == 0 {
                        return Err(Error::Wiring("streak length must be positive".into()));
                    }
                }
            }
        }
        if let GateAction::Disinhibit(0) = rule.action {
            return Err(Error::Wiring("disinhibition lasts at least one round".into()));
        }
        if self.gates[rule.target.0] == Gate::Free {
            self.gates[rule.target.0] = Gate::Counter(0);
            self.initial[rule.target.0] = Gate::Counter(0);
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn rules(&self) -> &[GateRule] {
        &self.rules
    }

    pub fn gate(&self, area: AreaId) -> Gate {
        self.gates[area.0]
    }

    pub fn is_open(&self, area: AreaId) -> bool {
        self.gates[area.0].is_open()
    }

    pub fn streak(&self, area: AreaId) -> u32 {
        self.streaks[area.0]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn reset(&mut self) {
        self.gates.clone_from(&self.initial);
        self.streaks.iter_mut().for_each(|s| *s = 0);
    }

    /// Advances the controller past a step whose firing pattern is `fired`.
    pub fn apply(&mut self, fired: &[bool], round: u64) -> Result<()> {
        for (s, &f) in self.streaks.iter_mut().zip(fired) {
            *s = if f { s.saturating_add(1) } else { 0 };
        }
        for g in &mut self.gates {
            if let Gate::Counter(c) = g {
                if *c != HOLD && *c > 0 {
                    *c -= 1;
                }
            }
        }

        let mut pending: Vec<Option<GateAction>> = vec![None; self.gates.len()];
        for rule in &self.rules {
            let hit = rule.when.iter().all(|e| match *e {
                Event::Fired(a) => fired.get(a.0).copied().unwrap_or(false),
                Event::FiredStreak(a, m) => self.streaks[a.0] == m,
            });
            if !hit {
                continue;
            }
            let slot = &mut pending[rule.target.0];
            *slot = Some(match (*slot, rule.action) {
                (None, a) => a,
                (Some(GateAction::Inhibit), GateAction::Inhibit) => GateAction::Inhibit,
                (Some(GateAction::Disinhibit(x)), GateAction::Disinhibit(y)) => {
                    GateAction::Disinhibit(x.max(y))
                }
                _ => {
                    return Err(Error::GateConflict {
                        area: rule.target.0,
                        round,
                    })
                }
            });
        }

        for (g, action) in self.gates.iter_mut().zip(pending) {
            match action {
                None => {}
                Some(GateAction::Inhibit) => *g = Gate::Counter(0),
                Some(GateAction::Disinhibit(d)) => {
                    let current = match *g {
                        Gate::Counter(c) => c,
                        Gate::Free => 0,
                    };
                    *g = Gate::Counter(current.max(d));
                }
            }
        }
        Ok(())
    }

    fn check(&self, area: AreaId) -> Result<()> {
        if area.0 < self.gates.len() {
            Ok(())
        } else {
            Err(Error::UnknownArea(area.0))
        }
    }
}

/// Alternation between `a` and `b`: a firing of either area opens the other
/// for one round and closes itself. `a` starts open, `b` closed.
pub fn alternation_wiring(controller: &mut GateController, a: AreaId, b: AreaId) -> Result<()> {
    controller.add_rule(GateRule::new(vec![Event::Fired(b)], a, GateAction::Disinhibit(1)))?;
    controller.add_rule(GateRule::new(vec![Event::Fired(a)], b, GateAction::Disinhibit(1)))?;
    controller.add_rule(GateRule::new(vec![Event::Fired(a)], a, GateAction::Inhibit))?;
    controller.add_rule(GateRule::new(vec![Event::Fired(b)], b, GateAction::Inhibit))?;
    controller.set_initial(a, Gate::Counter(HOLD))?;
    controller.set_initial(b, Gate::Counter(0))?;
    Ok(())
}

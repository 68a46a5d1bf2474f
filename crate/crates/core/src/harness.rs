//! Seeded multi-trial experiments and their CSV output.
//!
//! An experiment is described by a TOML file:
//!
//! ```toml
//! id = "seq-scaffold"
//! kind = "scaffold-seq"
//! seed = 1
//! trials = 10
//! length = 20
//! presentations = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
//!
//! [params]
//! n = 1000
//! k = 30
//! p = 0.2
//! beta = 0.1
//! ```
//!
//! Every trial gets its own seed from `(seed, id, trial)`, trials run on a
//! thread pool, and rows come out in trial order. Rows have the columns
//! `experiment,param,value,trial,metric,metric_value`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcnet::Schedule;
use crate::error::{Error, Result};
use crate::fsm::{Decision, Fsm};
use crate::fsmnet::FsmNetwork;
use crate::network::Network;
use crate::params::ModelParams;
use crate::rng::{child_seed, SeedStream};
use crate::sequences::{SeqModel, SequenceNet};
use crate::tape::TapeConfig;
use crate::tm::{Outcome, TmConfig, TmNetwork, TuringMachine};

/// CSV header, fixed for schema version 1.
pub const CSV_HEADER: &str = "experiment,param,value,trial,metric,metric_value";

/// Recall below which `seq-capacity` counts a length as past capacity.
pub const CAPACITY_THRESHOLD: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    SimpleSeq,
    ScaffoldSeq,
    SeqCapacity,
    SeqSweep,
    FsmTrain,
    FsmRun,
    FsmSweep,
    FsmStrlen,
    TmRun,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::SimpleSeq,
        Kind::ScaffoldSeq,
        Kind::SeqCapacity,
        Kind::SeqSweep,
        Kind::FsmTrain,
        Kind::FsmRun,
        Kind::FsmSweep,
        Kind::FsmStrlen,
        Kind::TmRun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::SimpleSeq => "simple-seq",
            Kind::ScaffoldSeq => "scaffold-seq",
            Kind::SeqCapacity => "seq-capacity",
            Kind::SeqSweep => "seq-sweep",
            Kind::FsmTrain => "fsm-train",
            Kind::FsmRun => "fsm-run",
            Kind::FsmSweep => "fsm-sweep",
            Kind::FsmStrlen => "fsm-strlen",
            Kind::TmRun => "tm-run",
        }
    }

    fn sequence_model(self, configured: Option<SeqModel>) -> SeqModel {
        match self {
            Kind::SimpleSeq => SeqModel::Simple,
            Kind::ScaffoldSeq => SeqModel::Scaffold,
            _ => configured.unwrap_or(SeqModel::Simple),
        }
    }
}

/// Swept model parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    N,
    K,
    P,
    Beta,
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::N => "n",
            SweepParam::K => "k",
            SweepParam::P => "p",
            SweepParam::Beta => "beta",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
    /// With an `n` sweep, set `k = round(sqrt(n))` at each point.
    #[serde(default)]
    pub k_sqrt: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment id, also part of every trial seed. Defaults to the kind.
    #[serde(default)]
    pub id: Option<String>,
    pub kind: Kind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub params: ModelParams,
    /// Sequence length `L`; for `seq-capacity` the grid of lengths.
    #[serde(default = "default_lengths")]
    pub length: Vec<usize>,
    /// Presentations `T`, one value or a grid.
    #[serde(default = "default_presentations")]
    pub presentations: Vec<usize>,
    /// Largest overlap between stimulus assemblies.
    #[serde(default)]
    pub delta: usize,
    /// Sequence model for the capacity and sweep kinds.
    #[serde(default)]
    pub model: Option<SeqModel>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    /// FSM or TM description file, relative to the config file.
    #[serde(default)]
    pub machine: Option<PathBuf>,
    #[serde(default)]
    pub schedule: Schedule,
    /// Random strings scored per classification accuracy.
    #[serde(default = "default_strings")]
    pub strings: usize,
    /// Lengths of the random strings; a grid for `fsm-strlen`.
    #[serde(default = "default_string_lengths")]
    pub string_lengths: Vec<usize>,
    /// Explicit inputs for `fsm-run` and `tm-run`.
    #[serde(default)]
    pub inputs: Vec<String>,
    /// Step budget per TM run.
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    /// Tape parameters for `tm-run`; `params` then sizes the controller.
    #[serde(default)]
    pub tape_params: Option<ModelParams>,
    /// Rounds per tape operation, overriding the default.
    #[serde(default)]
    pub tape_rounds: Option<usize>,
    /// Record after every homeostasis pass how far incoming sums stray
    /// from one, and report it as the `homeostasis_error` metric.
    #[serde(default)]
    pub audit_homeostasis: bool,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_trials() -> usize {
    10
}
fn default_lengths() -> Vec<usize> {
    vec![20]
}
fn default_presentations() -> Vec<usize> {
    vec![10]
}
fn default_strings() -> usize {
    50
}
fn default_string_lengths() -> Vec<usize> {
    vec![20]
}
fn default_max_steps() -> usize {
    200
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::Config(format!("line {line}: {}", e.message()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn id(&self) -> &str {
        self.id.as_deref().unwrap_or(self.kind.name())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.params.validate()?;
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.length.is_empty() || self.length.contains(&0) {
            return bad("length needs positive values".into());
        }
        if self.presentations.is_empty() {
            return bad("presentations must not be empty".into());
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return bad("sweep grid must not be empty".into());
            }
        }
        let needs_sweep = matches!(self.kind, Kind::SeqSweep | Kind::FsmSweep);
        if needs_sweep && self.sweep.is_none() {
            return bad(format!("`{}` needs a [sweep] table", self.kind.name()));
        }
        let needs_machine = matches!(
            self.kind,
            Kind::FsmTrain | Kind::FsmRun | Kind::FsmSweep | Kind::FsmStrlen | Kind::TmRun
        );
        if needs_machine && self.machine.is_none() {
            return bad(format!("`{}` needs a machine file", self.kind.name()));
        }
        if matches!(self.kind, Kind::FsmRun | Kind::TmRun) && self.inputs.is_empty() {
            return bad(format!("`{}` needs inputs", self.kind.name()));
        }
        if self.string_lengths.is_empty() {
            return bad("string_lengths must not be empty".into());
        }
        Ok(())
    }

    fn machine_text(&self) -> Result<String> {
        let path = self.machine.as_ref().expect("validated");
        let full = match &self.base_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.clone(),
        };
        std::fs::read_to_string(&full)
            .map_err(|e| Error::Config(format!("cannot read machine `{}`: {e}", full.display())))
    }

    fn swept_params(&self, value: f64) -> Result<ModelParams> {
        let s = self.sweep.as_ref().expect("validated");
        let mut p = self.params;
        match s.param {
            SweepParam::N => {
                p.n = value as usize;
                if s.k_sqrt {
                    p.k = ((p.n as f64).sqrt().round() as usize).max(1);
                }
            }
            SweepParam::K => p.k = value as usize,
            SweepParam::P => p.p = value,
            SweepParam::Beta => p.beta = value,
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub param: String,
    pub value: String,
    pub trial: usize,
    pub metric: String,
    pub metric_value: f64,
}

/// Records the normalisation error after every homeostasis pass.
#[derive(Clone, Debug, Default)]
pub struct HomeostasisAudit {
    inner: Arc<Mutex<(usize, f64)>>,
}

impl HomeostasisAudit {
    pub fn attach(net: &mut Network) -> Self {
        let audit = Self::default();
        let inner = audit.inner.clone();
        net.set_homeostasis_hook(Some(Arc::new(move |n: &Network| {
            let err = n.normalisation_error();
            let mut g = inner.lock().expect("audit lock");
            g.0 += 1;
            g.1 = g.1.max(err);
        })));
        audit
    }

    /// Passes observed so far.
    pub fn passes(&self) -> usize {
        self.inner.lock().expect("audit lock").0
    }

    /// Largest error seen in any pass.
    pub fn max_error(&self) -> f64 {
        self.inner.lock().expect("audit lock").1
    }
}

struct Trial<'a> {
    cfg: &'a ExperimentConfig,
    index: usize,
    seed: u64,
    rows: Vec<ResultRow>,
    audits: Vec<HomeostasisAudit>,
}

impl Trial<'_> {
    fn push(&mut self, param: &str, value: impl ToString, metric: &str, v: f64) {
        self.rows.push(ResultRow {
            experiment: self.cfg.id().to_string(),
            param: param.to_string(),
            value: value.to_string(),
            trial: self.index,
            metric: metric.to_string(),
            metric_value: v,
        });
    }

    fn audit(&mut self, net: &mut Network) {
        if self.cfg.audit_homeostasis {
            self.audits.push(HomeostasisAudit::attach(net));
        }
    }

    fn finish(mut self) -> Vec<ResultRow> {
        if self.cfg.audit_homeostasis {
            let err = self.audits.iter().map(|a| a.max_error()).fold(0.0, f64::max);
            let passes: usize = self.audits.iter().map(|a| a.passes()).sum();
            self.push("", "", "homeostasis_error", err);
            self.push("", "", "homeostasis_passes", passes as f64);
        }
        self.rows
    }
}

/// Runs every trial of `cfg` and returns the rows in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let machine = match cfg.kind {
        Kind::FsmTrain | Kind::FsmRun | Kind::FsmSweep | Kind::FsmStrlen | Kind::TmRun => {
            Some(cfg.machine_text()?)
        }
        _ => None,
    };
    let per_trial: Vec<Result<Vec<ResultRow>>> = (0..cfg.trials)
        .into_par_iter()
        .map(|index| {
            let mut t = Trial {
                cfg,
                index,
                seed: child_seed(cfg.seed, cfg.id(), index as u64),
                rows: Vec::new(),
                audits: Vec::new(),
            };
            run_trial(&mut t, machine.as_deref())?;
            Ok(t.finish())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_trial {
        rows.extend(r?);
    }
    Ok(rows)
}

fn run_trial(t: &mut Trial<'_>, machine: Option<&str>) -> Result<()> {
    let cfg = t.cfg;
    match cfg.kind {
        Kind::SimpleSeq | Kind::ScaffoldSeq => {
            let model = cfg.kind.sequence_model(cfg.model);
            sequence_curve(t, cfg.params, model, cfg.length[0], "T", None)
        }
        Kind::SeqCapacity => {
            let model = cfg.kind.sequence_model(cfg.model);
            for &len in &cfg.length {
                sequence_curve(t, cfg.params, model, len, "L", Some(len.to_string()))?;
            }
            // First length whose last-element recall drops below 0.8; zero if none does.
            let suffix = if cfg.presentations.len() > 1 {
                format!("@T{}", cfg.presentations.iter().max().expect("nonempty"))
            } else {
                String::new()
            };
            let metric = format!("recall_last{suffix}");
            let first_drop = t
                .rows
                .iter()
                .filter(|r| r.metric == metric && r.metric_value < CAPACITY_THRESHOLD)
                .filter_map(|r| r.value.parse::<usize>().ok())
                .min()
                .unwrap_or(0);
            t.push("", "", "capacity_drop_length", first_drop as f64);
            Ok(())
        }
        Kind::SeqSweep => {
            let model = cfg.kind.sequence_model(cfg.model);
            let sweep = cfg.sweep.as_ref().expect("validated");
            for &v in &sweep.values {
                let p = cfg.swept_params(v)?;
                sequence_curve(t, p, model, cfg.length[0], sweep.param.name(), Some(fmt_value(v)))?;
            }
            Ok(())
        }
        Kind::FsmTrain => {
            let fsm = Fsm::parse(machine.expect("loaded"))?;
            let mut net = fsm_network(t, fsm, cfg.params)?;
            let mut done = 0;
            let mut grid = cfg.presentations.clone();
            grid.sort_unstable();
            for &p in &grid {
                for _ in done..p {
                    net.train_epoch()?;
                }
                done = p;
                fsm_metrics(t, &mut net, "T", &p.to_string(), cfg.string_lengths[0])?;
            }
            Ok(())
        }
        Kind::FsmSweep => {
            let sweep = cfg.sweep.as_ref().expect("validated");
            for &v in &sweep.values {
                let fsm = Fsm::parse(machine.expect("loaded"))?;
                let mut net = fsm_network(t, fsm, cfg.swept_params(v)?)?;
                net.train(cfg.presentations[0], cfg.schedule)?;
                fsm_metrics(t, &mut net, sweep.param.name(), &fmt_value(v), cfg.string_lengths[0])?;
            }
            Ok(())
        }
        Kind::FsmStrlen => {
            let fsm = Fsm::parse(machine.expect("loaded"))?;
            let mut net = fsm_network(t, fsm, cfg.params)?;
            net.train(cfg.presentations[0], cfg.schedule)?;
            for &len in &cfg.string_lengths {
                let acc = accuracy(&mut net, cfg.strings, len, t.seed)?;
                t.push("length", len, "accuracy", acc);
            }
            Ok(())
        }
        Kind::FsmRun => {
            let fsm = Fsm::parse(machine.expect("loaded"))?;
            let mut net = fsm_network(t, fsm, cfg.params)?;
            net.train(cfg.presentations[0], cfg.schedule)?;
            for input in &cfg.inputs {
                let sim = net.simulate_string(input)?;
                let reference = net.fsm().reference_run(input)?;
                let accept = f64::from(u8::from(sim.decision == Decision::Accept));
                t.push("input", input, "accepted", accept);
                t.push("input", input, "correct", f64::from(u8::from(sim.decision == reference.decision)));
                let last = sim.trace.last().map_or(0.0, |r| r.overlap);
                t.push("input", input, "final_overlap", last);
            }
            Ok(())
        }
        Kind::TmRun => {
            let tm = TuringMachine::parse(machine.expect("loaded"))?;
            let tape = cfg.tape_params.unwrap_or(cfg.params);
            let mut tcfg = TmConfig::new(cfg.params, tape);
            tcfg.presentations = cfg.presentations[0];
            if let Some(r) = cfg.tape_rounds {
                tcfg.tape_config = TapeConfig {
                    rounds: r,
                    link_rounds: r / 2,
                    ..tcfg.tape_config
                };
            }
            let mut net = TmNetwork::new(tm, tcfg, t.seed)?;
            t.audit(net.controller_mut().network_mut());
            net.train()?;
            for input in &cfg.inputs {
                let run = net.run(input, cfg.max_steps)?;
                let reference = net.machine().reference_run(input, cfg.max_steps)?;
                let same = run.outcome == reference.outcome;
                t.push("input", input, "outcome_match", f64::from(u8::from(same)));
                t.push("input", input, "tape_match", f64::from(u8::from(run.tape == reference.tape)));
                t.push("input", input, "accepted", f64::from(u8::from(run.outcome == Outcome::Accept)));
                t.push("input", input, "steps", run.steps.len() as f64);
            }
            Ok(())
        }
    }
}

fn fmt_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Trains one network up the presentation grid, measuring cued recall from
/// the first element at every grid point.
fn sequence_curve(
    t: &mut Trial<'_>,
    params: ModelParams,
    model: SeqModel,
    len: usize,
    param: &str,
    value: Option<String>,
) -> Result<()> {
    let cfg = t.cfg;
    let label = value.unwrap_or_default();
    let mut net = SequenceNet::new(params, model, len, cfg.delta, t.seed)?;
    t.audit(net.network_mut());
    let mut grid = cfg.presentations.clone();
    grid.sort_unstable();
    let mut done = 0;
    for &p in &grid {
        net.train(p - done.min(p))?;
        done = p;
        let report = net.cued_recall(1)?;
        let (param, value) = if param == "T" {
            ("T".to_string(), p.to_string())
        } else {
            (param.to_string(), label.clone())
        };
        let suffix = if grid.len() > 1 && param != "T" {
            format!("@T{p}")
        } else {
            String::new()
        };
        let mean = report.recall.iter().sum::<f64>() / report.recall.len() as f64;
        t.push(&param, &value, &format!("recall_last{suffix}"), report.last());
        t.push(&param, &value, &format!("recall_mean{suffix}"), mean);
        if let Some(b) = report.last_b() {
            t.push(&param, &value, &format!("recall_last_b{suffix}"), b);
        }
        t.push(&param, &value, &format!("max_overlap{suffix}"), report.max_overlap);
    }
    Ok(())
}

fn fsm_network(t: &mut Trial<'_>, fsm: Fsm, params: ModelParams) -> Result<FsmNetwork> {
    let mut net = FsmNetwork::new(fsm, params, t.cfg.delta, t.seed)?;
    t.audit(net.arc_net_mut().network_mut());
    Ok(net)
}

fn fsm_metrics(t: &mut Trial<'_>, net: &mut FsmNetwork, param: &str, value: &str, len: usize) -> Result<()> {
    let recall = net.transition_recall()?;
    let mean = recall.iter().map(|r| r.recall).sum::<f64>() / recall.len() as f64;
    let min = recall.iter().map(|r| r.recall).fold(1.0, f64::min);
    t.push(param, value, "recall_mean", mean);
    t.push(param, value, "recall_min", min);
    for r in &recall {
        let name = format!(
            "recall:{}/{}",
            net.fsm().states[r.state],
            net.fsm().symbols[r.symbol]
        );
        t.push(param, value, &name, r.recall);
    }
    t.push(param, value, "max_arc_overlap", net.arc_net().max_arc_overlap());
    let acc = accuracy(net, t.cfg.strings, len, t.seed)?;
    t.push(param, value, "accuracy", acc);
    Ok(())
}

/// Random strings over the machine's input alphabet, from the trial seed.
pub fn random_strings(fsm: &Fsm, count: usize, len: usize, seed: u64) -> Vec<String> {
    let alphabet = fsm.input_symbols();
    let mut rng = SeedStream::labeled(seed, &format!("strings:{len}")).rng();
    (0..count)
        .map(|_| (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect())
        .collect()
}

/// Fraction of random strings the network classifies like the reference.
pub fn accuracy(net: &mut FsmNetwork, count: usize, len: usize, seed: u64) -> Result<f64> {
    if count == 0 {
        return Ok(0.0);
    }
    let strings = random_strings(net.fsm(), count, len, seed);
    let mut correct = 0;
    for s in &strings {
        let sim = net.simulate_string(s)?;
        if sim.decision == net.fsm().reference_run(s)?.decision {
            correct += 1;
        }
    }
    Ok(correct as f64 / count as f64)
}

/// Writes rows as CSV with the fixed header.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))
        .map_err(|e| Error::Config(e.to_string()))?;
    for r in rows {
        w.write_record([
            r.experiment.as_str(),
            r.param.as_str(),
            r.value.as_str(),
            &r.trial.to_string(),
            r.metric.as_str(),
            &format!("{}", r.metric_value),
        ])
        .map_err(|e| Error::Config(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_csv`].
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r
        .headers()
        .map_err(|e| Error::Config(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Config(format!("unexpected CSV header `{}`", header.join(","))));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Config(e.to_string())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub param: String,
    pub value: String,
    pub metric: String,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Mean and range over trials for each `(param, value, metric)`, in order of
/// first appearance.
pub fn aggregate(rows: &[ResultRow]) -> Vec<Summary> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<(String, String, String), Vec<f64>> = BTreeMap::new();
    for r in rows {
        let key = (r.param.clone(), r.value.clone(), r.metric.clone());
        let entry = groups.entry(key.clone()).or_default();
        if entry.is_empty() {
            order.push(key);
        }
        entry.push(r.metric_value);
    }
    order
        .into_iter()
        .map(|key| {
            let vals = &groups[&key];
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Summary {
                param: key.0,
                value: key.1,
                metric: key.2,
                mean,
                min,
                max,
                count: vals.len(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(metric: &str, v: f64) -> ResultRow {
        ResultRow {
            experiment: "x".into(),
            param: "T".into(),
            value: "1".into(),
            trial: 0,
            metric: metric.into(),
            metric_value: v,
        }
    }

    #[test]
    fn aggregate_single_and_pair() {
        let s = aggregate(&[row("m", 0.3)]);
        assert_eq!((s[0].mean, s[0].min, s[0].max), (0.3, 0.3, 0.3));
        let s = aggregate(&[row("m", 0.0), row("m", 1.0)]);
        assert_eq!((s[0].mean, s[0].min, s[0].max), (0.5, 0.0, 1.0));
    }

    #[test]
    fn config_errors_name_the_line() {
        let text = "kind = \"simple-seq\"\ntrials = 0\n[params]\nn = 100\nk = 10\np = 0.1\nbeta = 0.1\n";
        assert!(matches!(ExperimentConfig::from_toml(text), Err(Error::Config(_))));
        let text = "kind = \"simple-seq\"\nbogus = 1\n";
        let err = ExperimentConfig::from_toml(text).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let text = "kind = \"seq-sweep\"\n[params]\nn = 100\nk = 10\np = 0.1\nbeta = 0.1\n";
        assert!(ExperimentConfig::from_toml(text).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let rows = vec![row("recall_last", 0.25), row("max_overlap", 1.0 / 3.0)];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    }
}

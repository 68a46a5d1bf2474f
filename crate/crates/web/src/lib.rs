//! wasm-bindgen entry points for the browser demo in `www/`.
//!
//! Every function takes plain numbers and strings and returns a JSON string,
//! so the page needs no bindings beyond `JSON.parse`.

use nemo::alternation::Alternation;
use nemo::fsm::Fsm;
use nemo::fsmnet::FsmNetwork;
use nemo::sequences::{SeqModel, SequenceNet};
use nemo::ModelParams;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_js<T: Serialize>(value: &T) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

fn js_err(e: nemo::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[derive(Serialize)]
struct Curves {
    presentations: Vec<usize>,
    simple: Vec<f64>,
    scaffold: Vec<f64>,
}

/// Last-element recall after 1..=`max_t` presentations, for the simple and
/// scaffolded models trained on the same stimuli.
#[wasm_bindgen(js_name = syncSequenceCurves)]
pub fn sync_sequence_curves(
    n: usize,
    k: usize,
    p: f64,
    beta: f64,
    len: usize,
    max_t: usize,
    seed: u64,
) -> Result<String, JsError> {
    let params = ModelParams::new(n, k, p, beta).map_err(js_err)?;
    let mut curves = Curves {
        presentations: (1..=max_t).collect(),
        simple: Vec::with_capacity(max_t),
        scaffold: Vec::with_capacity(max_t),
    };
    for (model, out) in [
        (SeqModel::Simple, &mut curves.simple),
        (SeqModel::Scaffold, &mut curves.scaffold),
    ] {
        let mut net = SequenceNet::new(params, model, len, 0, seed).map_err(js_err)?;
        for _ in 0..max_t {
            net.train(1).map_err(js_err)?;
            out.push(net.cued_recall(1).map_err(js_err)?.last());
        }
    }
    to_js(&curves)
}

#[derive(Serialize)]
struct FsmTrace {
    simulation: nemo::fsmnet::Simulation,
    expected: nemo::fsm::Decision,
    states: Vec<String>,
}

/// Trains a network on the machine in `fsm_text` and runs it on `input`.
#[wasm_bindgen(js_name = fsmTrace)]
#[allow(clippy::too_many_arguments)]
pub fn fsm_trace(
    fsm_text: &str,
    input: &str,
    n: usize,
    k: usize,
    p: f64,
    beta: f64,
    presentations: usize,
    seed: u64,
) -> Result<String, JsError> {
    let fsm = Fsm::parse(fsm_text).map_err(js_err)?;
    let expected = fsm.reference_run(input).map_err(js_err)?.decision;
    let states = fsm.states.clone();
    let params = ModelParams::new(n, k, p, beta).map_err(js_err)?;
    let mut net = FsmNetwork::new(fsm, params, 0, seed).map_err(js_err)?;
    net.train(presentations, Default::default()).map_err(js_err)?;
    let simulation = net.simulate_string(input).map_err(js_err)?;
    to_js(&FsmTrace {
        simulation,
        expected,
        states,
    })
}

/// Firing table of the alternation circuit over `rounds` rounds.
#[wasm_bindgen(js_name = alternationTable)]
pub fn alternation_table(rounds: usize, seed: u64) -> Result<String, JsError> {
    let params = ModelParams::new(200, 10, 0.2, 0.1).map_err(js_err)?;
    let mut alt = Alternation::new(params, seed).map_err(js_err)?;
    to_js(&alt.table(rounds).map_err(js_err)?)
}

/// Text of a built-in machine, to prefill the editor.
#[wasm_bindgen(js_name = builtinFsm)]
pub fn builtin_fsm(name: &str) -> Result<String, JsError> {
    match name {
        "even-zeros" => Ok(nemo::fsm::even_zeros().to_text()),
        "div3" => Ok(nemo::fsm::div3().to_text()),
        _ => Err(JsError::new(&format!("no built-in machine `{name}`"))),
    }
}

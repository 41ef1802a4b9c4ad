//! String-in/string-out bindings for the static demo page in `www/`.
//! Every export returns JSON so the page needs no generated types.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use tm_core::events::behavior_to_text;
use tm_core::model::Entity;
use tm_core::{
    default_rule_profile, derive_behavior, export_dot, object_violations, objectify, occurrences,
    parse, serialize, simulate, validate, Diagnostic, StaticModel, Strictness,
};

const CORPUS: [(&str, &str, &str); 9] = [
    ("chair.tm", "strict", include_str!("../../../corpus/chair.tm")),
    ("chair-object-bad.tm", "strict", include_str!("../../../corpus/chair-object-bad.tm")),
    ("chair-object.tm", "strict", include_str!("../../../corpus/chair-object.tm")),
    ("customer.tm", "strict", include_str!("../../../corpus/customer.tm")),
    ("withdrawal.tm", "lenient", include_str!("../../../corpus/withdrawal.tm")),
    ("playing.tm", "strict", include_str!("../../../corpus/playing.tm")),
    ("order.tm", "strict", include_str!("../../../corpus/order.tm")),
    ("geometric.tm", "strict", include_str!("../../../corpus/geometric.tm")),
    ("geometric-union.tm", "strict", include_str!("../../../corpus/geometric-union.tm")),
];

fn lines(diagnostics: &[Diagnostic]) -> Vec<String> {
    diagnostics.iter().map(ToString::to_string).collect()
}

fn strictness(profile: &str) -> Strictness {
    Strictness::from_name(profile).unwrap_or_default()
}

fn load(text: &str) -> Result<StaticModel, Value> {
    let r = parse(text);
    r.model
        .ok_or_else(|| json!({ "ok": false, "diagnostics": lines(&r.diagnostics) }))
}

/// `[{name, profile, text}]` for the bundled examples.
#[wasm_bindgen]
pub fn corpus() -> String {
    let files: Vec<Value> = CORPUS
        .iter()
        .map(|(name, profile, text)| json!({ "name": name, "profile": profile, "text": text }))
        .collect();
    Value::Array(files).to_string()
}

/// `{ok, diagnostics, scenarios, thimacs, dot}`.
#[wasm_bindgen]
pub fn check(text: &str, profile: &str) -> String {
    let model = match load(text) {
        Ok(m) => m,
        Err(v) => return v.to_string(),
    };
    let report = validate(&model, &default_rule_profile(strictness(profile)));
    json!({
        "ok": report.passed,
        "diagnostics": lines(&report.diagnostics),
        "scenarios": model.scenarios().iter().map(|s| s.name.as_str()).collect::<Vec<_>>(),
        "thimacs": model.thimac_ids().map(|id| model.thimac_path(id)).collect::<Vec<_>>(),
        "dot": export_dot(&model),
    })
    .to_string()
}

/// `{ok, diagnostics, trace, occurrences, behavior}`; refuses invalid models.
#[wasm_bindgen]
pub fn run_scenario(text: &str, scenario: &str, profile: &str, max_steps: u32) -> String {
    let model = match load(text) {
        Ok(m) => m,
        Err(v) => return v.to_string(),
    };
    let report = validate(&model, &default_rule_profile(strictness(profile)));
    if !report.passed {
        return json!({ "ok": false, "diagnostics": lines(&report.diagnostics) }).to_string();
    }
    let Some(s) = model.scenario(scenario) else {
        return json!({ "ok": false, "diagnostics": [format!("no scenario named `{scenario}`")] })
            .to_string();
    };
    let trace = match simulate(&model, s, max_steps.max(1)) {
        Ok(t) => t,
        Err(e) => return json!({ "ok": false, "diagnostics": [e.to_string()] }).to_string(),
    };
    let (table, behavior) = match occurrences(&model, &trace, model.events()) {
        Ok(t) => {
            let b = behavior_to_text(&derive_behavior(&t));
            (t.to_text(), b)
        }
        Err(e) => return json!({ "ok": false, "diagnostics": [e.to_string()] }).to_string(),
    };
    json!({
        "ok": true,
        "diagnostics": [],
        "trace": trace.to_text(&model),
        "occurrences": table,
        "behavior": behavior,
    })
    .to_string()
}

/// `{ok, diagnostics, violations, text}`: the encapsulation violations of
/// `thimac` and the canonical text of the objectified model.
#[wasm_bindgen(js_name = objectify)]
pub fn objectify_text(text: &str, thimac: &str) -> String {
    let model = match load(text) {
        Ok(m) => m,
        Err(v) => return v.to_string(),
    };
    let id = match model.resolve_path(thimac) {
        Ok(Entity::Thimac(id)) => id,
        Ok(Entity::Stage(_)) => {
            return json!({ "ok": false, "diagnostics": [format!("`{thimac}` is a stage")] })
                .to_string()
        }
        Err(e) => return json!({ "ok": false, "diagnostics": [e.to_string()] }).to_string(),
    };
    let (Ok(violations), Ok(rewritten)) = (object_violations(&model, id), objectify(&model, id))
    else {
        return json!({ "ok": false, "diagnostics": ["unknown thimac"] }).to_string();
    };
    json!({
        "ok": true,
        "diagnostics": [],
        "violations": lines(&violations),
        "text": serialize(&rewritten),
    })
    .to_string()
}

//! Report builders behind the command-line subcommands: each takes a parsed
//! input document plus options and returns a JSON body, a CSV table, a
//! one-line verdict, and the process exit code. The binary and the C API
//! both go through these, so reports are byte-identical across entry
//! points. Nothing here reads the clock; timing stays on stderr.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::groebner::GroebnerConfig;
use crate::parse::{weight_to_value, InputDoc};
use crate::pl_probe::{
    default_candidates, probe, replay_check, sample_curve_seeded, uniqueness_probe,
    CandidateFunction, PLVerdict, Trend, DEFAULT_SAMPLE_SEED,
};
use crate::poly::{render_polynomial, Polynomial, TermOrder};
use crate::resolution::{
    annihilator, characteristic_variety, hilbert_resolution, overdetermination_report,
    PruneKind,
};
use crate::variety::{branch_report, factor, puiseux_at_infinity};
use crate::weights::{
    check_axioms, subadditivity_check, WeightFunction, WeightSpec,
};

/// Defaults for every tunable the subcommands expose.
#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub seed: u64,
    pub puiseux_order: u32,
    pub rmax: f64,
    pub alpha: u32,
    pub radii: usize,
    pub angles: usize,
    pub s: u32,
    pub epsilon: f64,
    pub factors: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            seed: DEFAULT_SAMPLE_SEED,
            puiseux_order: 6,
            rmax: 1e4,
            alpha: 2,
            radii: 20,
            angles: 12,
            s: 2,
            epsilon: 1.0,
            factors: 2000,
        }
    }
}

/// One subcommand's result before the manifest is attached.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub body: Value,
    pub csv: String,
    pub verdict_summary: String,
    pub exit_code: i32,
    pub parameters: BTreeMap<String, String>,
}

/// Wraps a bundle with the run manifest. The manifest carries everything
/// needed to reproduce the run; wall time is deliberately absent so that
/// identical inputs give identical bytes.
pub fn finalize(subcommand: &str, input_text: &str, bundle: &ReportBundle) -> Value {
    let digest = Sha256::digest(input_text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    json!({
        "manifest": {
            "subcommand": subcommand,
            "input_sha256": hex,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "parameters": bundle.parameters,
            "verdict_summary": bundle.verdict_summary,
        },
        "report": bundle.body,
    })
}

fn prune_label(kind: PruneKind) -> &'static str {
    match kind {
        PruneKind::ZeroRow => "zero row",
        PruneKind::Dependent => "dependent",
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Free resolution, integrability conditions, and annihilator of a system.
pub fn resolve_report(doc: &InputDoc) -> Result<ReportBundle> {
    let system = doc.system.as_ref().ok_or_else(|| {
        Error::Input(
            "resolve needs a \"matrix\" entry: rows of operator symbols over \
             the declared variables"
                .into(),
        )
    })?;
    let order = TermOrder::grevlex();
    let config = GroebnerConfig::default();
    let res = hilbert_resolution(&system.matrix, &order, &config)?;
    let over = overdetermination_report(&res);
    let ann = annihilator(&system.matrix, &order, &config)?;
    let cv = characteristic_variety(&ann);
    let vars = Some(system.variables.as_slice());

    let render = |p: &Polynomial| render_polynomial(p, vars);
    let body = json!({
        "label": doc.label,
        "variables": system.variables,
        "resolution": {
            "ranks": res.ranks(),
            "length": res.length(),
            "all_steps_certified": res.all_steps_certified(),
        },
        "overdetermined": over.overdetermined,
        "conditions": over.rendered,
        "dropped_equations": over
            .dropped
            .iter()
            .map(|(idx, kind)| json!({"equation": idx, "reason": prune_label(*kind)}))
            .collect::<Vec<_>>(),
        "annihilator": ann.iter().map(render).collect::<Vec<_>>(),
        "characteristic_variety": {
            "generators": cv.generators.iter().map(render).collect::<Vec<_>>(),
            "full_space": cv.full_space,
        },
    });

    let mut csv = String::from("step,rank\n");
    for (i, r) in res.ranks().iter().enumerate() {
        csv.push_str(&format!("{i},{r}\n"));
    }

    let verdict_summary = if over.overdetermined {
        format!(
            "overdetermined: {} integrability conditions, resolution ranks {:?}",
            over.rendered.len(),
            res.ranks()
        )
    } else {
        "not overdetermined".to_string()
    };

    Ok(ReportBundle {
        body,
        csv,
        verdict_summary,
        exit_code: 0,
        parameters: BTreeMap::new(),
    })
}

/// The curve a variety-flavored subcommand works on: explicit when given,
/// otherwise the sign-flipped principal annihilator generator of the system.
fn resolve_curve(doc: &InputDoc) -> Result<(Polynomial, Vec<String>, Option<String>)> {
    if let Some(curve) = &doc.curve {
        return Ok((curve.clone(), doc.variables.clone(), None));
    }
    let Some(system) = &doc.system else {
        return Err(Error::Input(
            "no curve to work on: give an explicit \"curve\" polynomial in two \
             variables, or a \"matrix\" whose annihilator is principal"
                .into(),
        ));
    };
    let order = TermOrder::grevlex();
    let ann = annihilator(&system.matrix, &order, &GroebnerConfig::default())?;
    if ann.is_empty() {
        return Err(Error::Input(
            "the system's annihilator is the zero ideal, so its characteristic \
             variety is all of space; give an explicit \"curve\" to expand"
                .into(),
        ));
    }
    if ann.len() > 1 {
        return Err(Error::Input(format!(
            "the system's annihilator has {} generators, not one; expansion at \
             infinity needs a plane curve, so give an explicit \"curve\"",
            ann.len()
        )));
    }
    if system.variables.len() != 2 {
        return Err(Error::Input(format!(
            "branch expansion needs exactly two variables, the system has {}; \
             give an explicit two-variable \"curve\"",
            system.variables.len()
        )));
    }
    let curve = ann[0].sign_flip();
    let note = format!(
        "curve derived from the system: characteristic variety of the \
         principal annihilator, {}",
        render_polynomial(&curve, Some(&system.variables))
    );
    Ok((curve, system.variables.clone(), Some(note)))
}

/// Factorization and Puiseux branches at infinity of the curve.
pub fn variety_report(doc: &InputDoc, opts: &ReportOptions) -> Result<ReportBundle> {
    let (curve, variables, derivation_note) = resolve_curve(doc)?;
    let vars = Some(variables.as_slice());
    let factors = factor(&curve)?;
    let expansion = puiseux_at_infinity(&curve, opts.puiseux_order)?;

    let (weight, weight_note) = match doc.weights.first() {
        Some(w) => (w.clone(), None),
        None => (
            WeightSpec::Gevrey {
                alpha: crate::poly::Rat::new(1.into(), 2.into()),
            },
            Some("no weight given; branch report uses gevrey 1/2".to_string()),
        ),
    };
    let branches = branch_report(&expansion.branches, &weight);

    let mut notes: Vec<String> = Vec::new();
    notes.extend(derivation_note);
    notes.extend(weight_note);

    let body = json!({
        "label": doc.label,
        "curve": render_polynomial(&curve, vars),
        "factors": factors
            .factors
            .iter()
            .map(|(f, m)| json!({
                "factor": render_polynomial(f, vars),
                "multiplicity": m,
            }))
            .collect::<Vec<_>>(),
        "unit": crate::parse::rat_to_json(&factors.unit),
        "branch_count": expansion.branches.len(),
        "curve_y_degree": expansion.curve_y_degree,
        "squarefree_reduced": expansion.squarefree_reduced,
        "zero_branch": expansion.zero_branch,
        "branches": serde_json::to_value(&branches)?,
        "notes": notes,
    });

    let mut csv = String::from("branch,leading_exponent,ramification,exact\n");
    for (i, b) in branches.branches.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            i,
            b.leading_exponent.as_deref().unwrap_or("none"),
            b.ramification,
            b.exact
        ));
    }

    let verdict_summary = format!(
        "{} branches ({} exact), {} irreducible factors",
        expansion.branches.len(),
        expansion.branches.iter().filter(|b| b.exact).count(),
        factors.factors.len()
    );

    let mut parameters = BTreeMap::new();
    parameters.insert("puiseux_order".into(), opts.puiseux_order.to_string());

    Ok(ReportBundle {
        body,
        csv,
        verdict_summary,
        exit_code: 0,
        parameters,
    })
}

/// Axiom verdicts, boundary notes, and subadditivity constants for every
/// weight in the document.
pub fn weights_report(doc: &InputDoc) -> Result<ReportBundle> {
    if doc.weights.is_empty() {
        return Err(Error::Input(
            "weights needs at least one entry under \"weights\"".into(),
        ));
    }
    let mut entries = Vec::new();
    let mut csv = String::from("family,alpha,beta,gamma_prime,delta,estimated_k\n");
    let mut all_pass = true;
    for spec in &doc.weights {
        let w = WeightFunction::new(spec.clone())?;
        let axioms = check_axioms(&w, 1e4)?;
        let pilot = subadditivity_check(&w, 1.0);
        let estimated_k = (pilot.worst_ratio * (1.0 + 1e-9)).max(1.0);
        let sub = subadditivity_check(&w, estimated_k);
        let axioms_value = serde_json::to_value(&axioms)?;
        let verdict_of = |key: &str| -> String {
            let v = &axioms_value[key];
            if let Value::Object(map) = v {
                for scalar in ["holds", "verdict", "convex"] {
                    if let Some(x) = map.get(scalar) {
                        return x.to_string().trim_matches('"').to_string();
                    }
                }
            }
            v.to_string()
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{estimated_k}\n",
            csv_field(spec.family_name()),
            csv_field(&verdict_of("alpha")),
            csv_field(&verdict_of("beta")),
            csv_field(&verdict_of("gamma_prime")),
            csv_field(&verdict_of("delta")),
        ));
        if !sub.holds {
            all_pass = false;
        }
        entries.push(json!({
            "weight": weight_to_value(spec),
            "family": spec.family_name(),
            "axioms": axioms_value,
            "gamma_note": spec.gamma_note(),
            "subadditivity": {
                "estimated_k": estimated_k,
                "worst_ratio": sub.worst_ratio,
                "worst_pair": sub.worst_pair,
                "holds": sub.holds,
            },
        }));
    }

    let body = json!({
        "label": doc.label,
        "weights": entries,
    });
    let verdict_summary = format!(
        "{} weights checked{}",
        doc.weights.len(),
        if all_pass { "" } else { "; subadditivity failed for at least one" }
    );
    Ok(ReportBundle {
        body,
        csv,
        verdict_summary,
        exit_code: 0,
        parameters: BTreeMap::new(),
    })
}

/// Support-width decay experiment for a gevrey weight.
pub fn pw_check_report(
    explicit_weight: Option<&WeightSpec>,
    opts: &ReportOptions,
) -> Result<ReportBundle> {
    let weight = match explicit_weight {
        Some(w) => w.clone(),
        None => {
            if opts.s == 0 {
                return Err(Error::Input(
                    "width exponent s must be a positive integer".into(),
                ));
            }
            WeightSpec::Gevrey {
                alpha: crate::poly::Rat::new(1.into(), i64::from(opts.s).into()),
            }
        }
    };
    let fit = crate::bounds::paley_wiener_experiment(&weight, opts.epsilon, opts.factors)?;

    let mut csv = String::from("t,log_envelope,omega\n");
    for row in &fit.envelope {
        csv.push_str(&format!("{},{},{}\n", row.t, row.log_envelope, row.omega));
    }

    let verdict_summary = format!(
        "fitted decay exponent p = {:.4}, achieved index k = {:.1}",
        fit.fitted_p, fit.achieved_k
    );
    let mut parameters = BTreeMap::new();
    parameters.insert("epsilon".into(), opts.epsilon.to_string());
    parameters.insert("factors".into(), opts.factors.to_string());
    parameters.insert("s".into(), fit.s.to_string());

    Ok(ReportBundle {
        body: serde_json::to_value(&fit)?,
        csv,
        verdict_summary,
        exit_code: 0,
        parameters,
    })
}

fn probe_csv(label: &str, verdict: &PLVerdict, csv: &mut String) {
    for cv in &verdict.candidates {
        for row in &cv.rows {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                label,
                csv_field(&cv.name),
                row.radius,
                row.beta.map_or("none".into(), |b| b.to_string()),
                row.c.map_or("none".into(), |c| c.to_string()),
            ));
        }
    }
}

fn trend_word(t: Trend) -> &'static str {
    match t {
        Trend::Stable => "stable",
        Trend::Growing => "growing",
        Trend::Vacuous => "vacuous",
    }
}

fn summarize_verdict(v: &PLVerdict) -> String {
    match (v.beta_empirical, v.c_empirical) {
        (Some(b), Some(c)) => format!("{} (beta = {b}, C = {c:.4})", trend_word(v.trend)),
        _ => trend_word(v.trend).to_string(),
    }
}

/// Finite-radius probe of both growth-transfer bounds on the curve.
pub fn pl_probe_report(doc: &InputDoc, opts: &ReportOptions) -> Result<ReportBundle> {
    let (curve, variables, derivation_note) = resolve_curve(doc)?;
    let k1 = doc.regions.get("k1").ok_or_else(|| {
        Error::Input("pl-probe needs regions.k1, the conclusion exhaustion".into())
    })?;
    let k2 = doc.regions.get("k2").ok_or_else(|| {
        Error::Input("pl-probe needs regions.k2, the hypothesis exhaustion".into())
    })?;
    let spec = doc.weights.first().ok_or_else(|| {
        Error::Input("pl-probe needs a weight under \"weights\"".into())
    })?;
    let weight = WeightFunction::new(spec.clone())?;

    let sampler = sample_curve_seeded(&curve, opts.rmax, opts.radii, opts.angles, opts.seed)?;
    let candidates = default_candidates();
    let mean_value = probe(&sampler, k1, k2, &weight, opts.alpha, &candidates)?;
    let modulus_candidates: Vec<CandidateFunction> = candidates
        .iter()
        .filter(|c| matches!(c, CandidateFunction::LogAbsPolynomial { .. }))
        .cloned()
        .collect();
    let modulus = uniqueness_probe(&sampler, k1, k2, &weight, opts.alpha, &modulus_candidates)?;
    let replay_mean = replay_check(&sampler, k1, k2, &weight, &candidates, &mean_value)?;
    let replay_modulus =
        replay_check(&sampler, k1, k2, &weight, &modulus_candidates, &modulus)?;

    let exit_code = if mean_value.trend == Trend::Growing || modulus.trend == Trend::Growing
    {
        2
    } else if mean_value.trend == Trend::Vacuous || modulus.trend == Trend::Vacuous {
        3
    } else {
        0
    };

    let mut notes: Vec<String> = Vec::new();
    notes.extend(derivation_note);

    let body = json!({
        "label": doc.label,
        "curve": render_polynomial(&curve, Some(variables.as_slice())),
        "samples": sampler.points.len(),
        "rejected_points": sampler.rejected,
        "regions": {
            "k1": crate::parse::region_to_value(k1),
            "k2": crate::parse::region_to_value(k2),
        },
        "weight": weight_to_value(spec),
        "mean_value_probe": serde_json::to_value(&mean_value)?,
        "modulus_probe": serde_json::to_value(&modulus)?,
        "replay": {
            "mean_value": replay_mean,
            "modulus": replay_modulus,
        },
        "notes": notes,
    });

    let mut csv = String::from("probe,candidate,radius,beta,c\n");
    probe_csv("mean-value", &mean_value, &mut csv);
    probe_csv("modulus", &modulus, &mut csv);

    let verdict_summary = format!(
        "mean-value: {}; modulus: {}; replay {}",
        summarize_verdict(&mean_value),
        summarize_verdict(&modulus),
        if replay_mean && replay_modulus { "passed" } else { "FAILED" }
    );

    let mut parameters = BTreeMap::new();
    parameters.insert("alpha".into(), opts.alpha.to_string());
    parameters.insert("angles".into(), opts.angles.to_string());
    parameters.insert("radii".into(), opts.radii.to_string());
    parameters.insert("rmax".into(), opts.rmax.to_string());
    parameters.insert("seed".into(), opts.seed.to_string());

    Ok(ReportBundle {
        body,
        csv,
        verdict_summary,
        exit_code,
        parameters,
    })
}

/// Renders a finalized report as pretty JSON with a trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report values serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_document;

    const GRADIENT: &str = r#"{
        "label": "gradient",
        "variables": ["z1", "z2"],
        "matrix": [["z1"], ["z2"]]
    }"#;

    const CUSP: &str = r#"{
        "variables": ["z1", "z2"],
        "curve": "z2^2 - z1^3",
        "weights": [{"family": "gevrey", "alpha": "1/2"}],
        "regions": {
            "k1": {"kind": "box", "lower": [-1, -1], "upper": [1, 1]},
            "k2": {"kind": "box", "lower": [-2, -2], "upper": [2, 2]}
        }
    }"#;

    fn doc(text: &str) -> InputDoc {
        parse_document(text, false).unwrap()
    }

    #[test]
    fn gradient_resolve_reports_the_curl_condition() {
        let bundle = resolve_report(&doc(GRADIENT)).unwrap();
        assert_eq!(bundle.exit_code, 0);
        assert_eq!(bundle.body["overdetermined"], true);
        let conditions = bundle.body["conditions"].as_array().unwrap();
        assert_eq!(conditions.len(), 1);
        let c = conditions[0].as_str().unwrap();
        assert!(c.contains("D1") && c.contains("D2"), "{c}");
        assert!(bundle.csv.starts_with("step,rank\n"));
    }

    #[test]
    fn single_operator_is_not_overdetermined() {
        let text = r#"{"variables": ["z1", "z2"], "matrix": [["z1 + z2"]]}"#;
        let bundle = resolve_report(&doc(text)).unwrap();
        assert_eq!(bundle.body["overdetermined"], false);
        assert_eq!(bundle.verdict_summary, "not overdetermined");
    }

    #[test]
    fn cusp_variety_reports_two_exact_branches() {
        let bundle = variety_report(&doc(CUSP), &ReportOptions::default()).unwrap();
        assert_eq!(bundle.body["branch_count"], 2);
        let branches = bundle.body["branches"]["branches"].as_array().unwrap();
        assert_eq!(branches.len(), 2);
        for b in branches {
            assert_eq!(b["leading_exponent"], "3/2");
        }
        assert!(bundle.csv.contains("3/2"));
    }

    #[test]
    fn variety_derives_the_curve_from_a_gradient_system() {
        let text = r#"{"variables": ["z1", "z2"], "matrix": [["z2"], ["z1*z2"]]}"#;
        let bundle = variety_report(&doc(text), &ReportOptions::default()).unwrap();
        let notes = bundle.body["notes"].as_array().unwrap();
        assert!(notes[0].as_str().unwrap().contains("derived from the system"));
    }

    #[test]
    fn variety_without_curve_or_system_guides_the_user() {
        let text = r#"{"variables": ["z1", "z2"]}"#;
        let err = variety_report(&doc(text), &ReportOptions::default()).unwrap_err();
        assert!(err.to_string().contains("curve"), "{err}");
    }

    #[test]
    fn weights_report_covers_axioms_and_subadditivity() {
        let text = r#"{"weights": [
            {"family": "gevrey", "alpha": "1/2"},
            {"family": "logpow", "beta": 1}
        ]}"#;
        let bundle = weights_report(&doc(text)).unwrap();
        let entries = bundle.body["weights"].as_array().unwrap();
        assert_eq!(entries.len(), 2);
        assert!(entries[0]["subadditivity"]["holds"].as_bool().unwrap());
        assert!(entries[1]["gamma_note"]
            .as_str()
            .unwrap()
            .contains("(gamma)"));
        assert!(bundle.csv.lines().count() >= 3);
    }

    #[test]
    fn pw_check_defaults_fit_the_square_root_decay() {
        let bundle = pw_check_report(None, &ReportOptions::default()).unwrap();
        let p = bundle.body["fitted_p"].as_f64().unwrap();
        assert!((p - 0.5).abs() < 0.075, "fitted p = {p}");
        assert!(bundle.csv.starts_with("t,log_envelope,omega\n"));
    }

    #[test]
    fn pl_probe_line_variety_is_stable_with_exit_zero() {
        let text = r#"{
            "variables": ["z1", "z2"],
            "curve": "z2",
            "weights": [{"family": "gevrey", "alpha": "1/2"}],
            "regions": {
                "k1": {"kind": "box", "lower": [-1, -1], "upper": [1, 1]},
                "k2": {"kind": "box", "lower": [-2, -2], "upper": [2, 2]}
            }
        }"#;
        let bundle = pl_probe_report(&doc(text), &ReportOptions::default()).unwrap();
        assert_eq!(bundle.exit_code, 0);
        assert_eq!(bundle.body["replay"]["mean_value"], true);
        assert_eq!(bundle.body["replay"]["modulus"], true);
        assert!(bundle.verdict_summary.contains("replay passed"));
    }

    #[test]
    fn pl_probe_missing_regions_is_an_input_error() {
        let text = r#"{"variables": ["z1", "z2"], "curve": "z2"}"#;
        let err = pl_probe_report(&doc(text), &ReportOptions::default()).unwrap_err();
        assert!(err.to_string().contains("regions.k1"), "{err}");
    }

    #[test]
    fn manifest_is_deterministic_and_hashes_the_input() {
        let bundle = resolve_report(&doc(GRADIENT)).unwrap();
        let a = render_json(&finalize("resolve", GRADIENT, &bundle));
        let b = render_json(&finalize("resolve", GRADIENT, &bundle));
        assert_eq!(a, b);
        assert!(a.contains("\"input_sha256\""));
        assert!(a.contains("\"tool_version\""));
        assert!(!a.to_lowercase().contains("wall"));
    }

    #[test]
    fn cusp_probe_exit_code_matches_the_trend() {
        let bundle = pl_probe_report(&doc(CUSP), &ReportOptions::default()).unwrap();
        let trend = bundle.body["mean_value_probe"]["trend"].as_str().unwrap();
        let expected = match trend {
            "growing" => 2,
            "vacuous" => 3,
            _ => {
                let other = bundle.body["modulus_probe"]["trend"].as_str().unwrap();
                match other {
                    "growing" => 2,
                    "vacuous" => 3,
                    _ => 0,
                }
            }
        };
        assert_eq!(bundle.exit_code, expected);
    }
}

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use serde::Deserialize;
use serde_json::{json, Value};

use pluscx::chains::{BasedChainComplex, CoefficientMode, ComplexSpec};
use pluscx::cobordism::{classify, enumerate_classes, realize, ChainCobordismModel, CobordismModelSpec};
use pluscx::foxcw::build_presentation_complex;
use pluscx::grouphomology::{h2_group, homology_sphere_criterion, knot_group_criterion, moore_criterion, KnotVerdictKind};
use pluscx::grouprings::GroupRingMatrix;
use pluscx::groups::{AbelianQuotient, FiniteGroup};
use pluscx::plusconstruction::{corrected_evaluations, framing_correction, homology_equivalence_target, plus_with_torsion, FramingProblem};
use pluscx::torsion::{conjugate, dual_sign, invariant, is_trivial_candidate, TorsionClass, TorsionClassSpec};
use pluscx::{Config, RingSpec};

use crate::inputs::{bad, base_dir, group_arg, load_group, read_json, words, HomJob, PresentationJob};

/// What a command produced: `holds` is false for a well-formed obstruction.
pub struct Outcome {
    pub holds: bool,
    pub result: Value,
    pub text: String,
}

impl Outcome {
    fn ok(result: Value, text: String) -> Self {
        Outcome { holds: true, result, text }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Builtin label, or a description by order for groups read from tables.
fn label(g: &FiniteGroup) -> String {
    if g.label().is_empty() {
        format!("G of order {}", g.order())
    } else {
        g.label().to_string()
    }
}

fn ring_arg(s: &str) -> Result<RingSpec> {
    s.parse::<RingSpec>().map_err(|e| bad(format!("ring '{s}': {e}")))
}

fn lines(v: &[String]) -> String {
    v.iter().enumerate().map(|(d, h)| format!("  H_{d} = {h}\n")).collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HomologyInput {
    Complex(ComplexSpec),
    Presentation(PresentationJob),
}

pub fn homology(path: &Path, ring: &str, mode: CoefficientMode, cfg: &Config) -> Result<Outcome> {
    let ring = ring_arg(ring)?;
    let input: HomologyInput = read_json(path)?;
    let c = match input {
        HomologyInput::Complex(spec) => BasedChainComplex::from_spec(&spec, cfg.exhaustive_check_bound)?,
        HomologyInput::Presentation(job) => {
            let hom = job.hom(&base_dir(path), cfg)?;
            build_presentation_complex(hom.source(), &hom, &RingSpec::Integers).into_complex()
        }
    };
    let h = c.homology(&ring, mode, cfg.bit_bound)?;
    Ok(Outcome::ok(json!({ "ranks": c.ranks(), "homology": h }), h.to_string()))
}

pub fn schur(group: &str, ring: &str, cfg: &Config) -> Result<Outcome> {
    let g = group_arg(group, cfg)?;
    let ring = ring_arg(ring)?;
    let h = h2_group(&g, &ring, cfg)?;
    let mut text = format!("H_2({}; {}) = {}\n", label(&g), ring, h.description);
    if h.partial {
        text.push_str("  partial: only the number of cyclic summands of some p-part is known\n");
    }
    Ok(Outcome::ok(json!({ "group": label(&g), "order": g.order(), "h2": h }), text))
}

fn h1_text(g: &std::sync::Arc<FiniteGroup>) -> Result<(Vec<u64>, String)> {
    let ab = AbelianQuotient::of(g)?;
    let f = ab.factors().to_vec();
    let text = if f.is_empty() { "0".to_string() } else { f.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ") };
    Ok((f, text))
}

pub fn moore(group: &str, cfg: &Config) -> Result<Outcome> {
    let g = group_arg(group, cfg)?;
    let holds = moore_criterion(&g, cfg)?;
    let h = h2_group(&g, &RingSpec::Integers, cfg)?;
    let text = format!(
        "Moore space M({}, 1): {}\n  H_2 = {}\n",
        label(&g),
        if holds { "exists" } else { "does not exist" },
        h.description
    );
    let mut result = json!({ "group": label(&g), "holds": holds, "h2": h });
    if !holds {
        result["obstruction"] = json!({ "kind": "nonzero_h2", "h2": h.description });
    }
    Ok(Outcome { holds, result, text })
}

pub fn sphere(group: &str, cfg: &Config) -> Result<Outcome> {
    let g = group_arg(group, cfg)?;
    let holds = homology_sphere_criterion(&g, cfg)?;
    let (h1, h1s) = h1_text(&g)?;
    let h2 = if h1.is_empty() { Some(h2_group(&g, &RingSpec::Integers, cfg)?) } else { None };
    let h2s = h2.as_ref().map_or("not computed".to_string(), |h| h.description.clone());
    let text = format!("{} is {}superperfect\n  H_1 = {h1s}\n  H_2 = {h2s}\n", label(&g), if holds { "" } else { "not " });
    let mut result = json!({ "group": label(&g), "holds": holds, "h1": h1, "h2": h2 });
    if !holds {
        let kind = if h1.is_empty() { "nonzero_h2" } else { "nonzero_h1" };
        result["obstruction"] = json!({ "kind": kind, "h1": h1s, "h2": h2s });
    }
    Ok(Outcome { holds, result, text })
}

#[derive(Deserialize)]
struct KnotJob {
    #[serde(flatten)]
    presentation: PresentationJob,
    #[serde(default)]
    witness: Option<String>,
    #[serde(default)]
    probes: Vec<HomJob>,
}

pub fn knot(path: &Path, cfg: &Config) -> Result<Outcome> {
    let job: KnotJob = read_json(path)?;
    let p = job.presentation.presentation()?;
    let base = base_dir(path);
    let witness = job.witness.as_ref().map(|w| words(std::slice::from_ref(w), &p)).transpose()?.map(|mut v| v.remove(0));
    let probes = job.probes.iter().map(|h| h.build(&p, &base, cfg)).collect::<Result<Vec<_>>>()?;
    let v = knot_group_criterion(&p, witness.as_ref(), &probes, cfg)?;
    let verdict = to_value(&v.verdict);
    let mut text = format!("knot group criterion: {}\n  H_1 = {}\n", verdict.as_str().unwrap_or_default(), v.h1);
    for n in &v.notes {
        let _ = writeln!(text, "  {n}");
    }
    let holds = v.verdict != KnotVerdictKind::Refuted;
    let mut result = to_value(&v);
    if !holds {
        result["obstruction"] = json!({ "kind": "refuted", "reasons": v.notes });
    }
    Ok(Outcome { holds, result, text })
}

#[derive(Deserialize)]
struct PlusJob {
    #[serde(flatten)]
    presentation: PresentationJob,
    #[serde(default, rename = "P_seeds")]
    seeds: Option<Vec<String>>,
    #[serde(default)]
    torsion_matrix: Option<Vec<Vec<String>>>,
    #[serde(default)]
    ring: Option<String>,
    #[serde(default)]
    parity: i64,
}

impl PlusJob {
    fn torsion(&self, g: &std::sync::Arc<FiniteGroup>) -> Result<GroupRingMatrix> {
        Ok(match &self.torsion_matrix {
            Some(rows) => GroupRingMatrix::parse(g, &RingSpec::Integers, rows)?,
            None => GroupRingMatrix::identity(g, &RingSpec::Integers, 1),
        })
    }
}

/// With `P_seeds`, a plus construction with prescribed torsion; without,
/// the homology-equivalence target of the map to `G`.
pub fn plus(path: &Path, cfg: &Config) -> Result<Outcome> {
    let job: PlusJob = read_json(path)?;
    let hom = job.presentation.hom(&base_dir(path), cfg)?;
    let Some(seed_strings) = &job.seeds else {
        let ring = ring_arg(job.ring.as_deref().unwrap_or("Z"))?;
        let r = homology_equivalence_target(&hom, &ring, cfg)?;
        let rep = &r.report;
        let text = format!(
            "homology target over {}: {} new generators, {} new relators, {} 3-cells\n  X:\n{}  Y:\n{}  H_q(Y, X) = 0 for q >= 3: {}\n  im b = 0: {}\n",
            rep.ring,
            rep.new_generators.len(),
            rep.new_relators.len(),
            rep.three_cells,
            lines(&rep.x_homology),
            lines(&rep.y_homology),
            rep.relative_vanishes_from_3,
            rep.im_b_zero
        );
        let result = json!({
            "mode": "homology_target",
            "report": rep,
            "presentation": r.w_presentation.to_spec(),
            "added_cells": r.added_cells,
            "y": r.y.to_spec(),
        });
        return Ok(Outcome::ok(result, text));
    };
    let p = hom.source().clone();
    let seeds = words(seed_strings, &p)?;
    let a = job.torsion(hom.target())?;
    let x = build_presentation_complex(&p, &hom, &RingSpec::Integers);
    let r = plus_with_torsion(&x, &seeds, &a, job.parity, cfg)?;
    let inv = invariant(&r.torsion)?;
    let mut text = format!(
        "plus construction: {} seed 2-cells, {} 2-cells and 3-cells in all\n  {}\n  homology preserved: {}\n  torsion: {:?}\n",
        r.report.seed_cells,
        r.report.total_cells,
        r.report.perfection,
        r.report.homology_preserved,
        r.torsion.representative().to_strings()
    );
    for c in &inv.characters {
        let _ = writeln!(text, "  |chi{:?}(det)| = {:.*}", c.character, cfg.float_digits, c.magnitude);
    }
    let result = json!({
        "mode": "torsion",
        "report": r.report,
        "torsion": r.torsion,
        "invariant": inv,
        "added_cells": r.added_cells,
        "plus": r.plus.to_spec(),
        "relative": r.relative.to_spec(),
    });
    Ok(Outcome::ok(result, text))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Class(TorsionClassSpec),
    Rows(Vec<Vec<String>>),
}

pub struct TorsionFlags<'a> {
    pub group: Option<&'a str>,
    pub parity: Option<i64>,
    pub conjugate: bool,
    pub dual: bool,
    pub invariant: bool,
    pub search: bool,
}

pub fn torsion(path: &Path, flags: &TorsionFlags, cfg: &Config) -> Result<Outcome> {
    let input: MatrixInput = read_json(path)?;
    let mut t = match input {
        MatrixInput::Class(spec) => {
            let g = load_group(&spec.group, &base_dir(path), cfg)?;
            TorsionClass::new(GroupRingMatrix::parse(&g, &RingSpec::Integers, &spec.representative)?, spec.parity as i64)?
        }
        MatrixInput::Rows(rows) => {
            let name = flags.group.ok_or_else(|| bad("a bare matrix needs --group"))?;
            let g = group_arg(name, cfg)?;
            TorsionClass::new(GroupRingMatrix::parse(&g, &RingSpec::Integers, &rows)?, 0)?
        }
    };
    if let Some(n) = flags.parity {
        t = t.with_parity(n);
    }
    if flags.conjugate {
        t = conjugate(&t);
    }
    if flags.dual {
        t = dual_sign(&t);
    }
    let mut text = format!("torsion class over Z[{}], parity {}\n", label(t.group()), t.parity());
    for row in t.representative().to_strings() {
        let _ = writeln!(text, "  [{}]", row.join(", "));
    }
    let mut result = json!({ "class": t, "inverse": t.inverse().to_strings() });
    if flags.invariant {
        let inv = invariant(&t)?;
        let _ = writeln!(text, "  det in Z[G_ab] = {}", inv.det_abelianized);
        for c in &inv.characters {
            let _ = writeln!(text, "  |chi{:?}(det)| = {:.*}", c.character, cfg.float_digits, c.magnitude);
        }
        result["invariant"] = to_value(&inv);
    }
    if flags.search {
        let v = is_trivial_candidate(&t, cfg)?;
        let _ = writeln!(text, "  triviality search: {}", v.reason);
        result["triviality"] = to_value(&v);
    }
    Ok(Outcome::ok(result, text))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ModelInput {
    Model(Box<CobordismModelSpec>),
    Report { result: ModelHolder },
}

#[derive(Deserialize)]
struct ModelHolder {
    model: Box<CobordismModelSpec>,
}

fn class_text(c: &pluscx::cobordism::CobordismClass, cfg: &Config) -> String {
    let mut text = format!(
        "P = <<{}>> of order {}, G of order {}\n  tau(W, N): {:?}\n",
        c.seeds.join(", "),
        c.p_order.map_or("?".to_string(), |o| o.to_string()),
        c.group_order,
        c.torsion.representative().to_strings()
    );
    if let Some(inv) = &c.invariant {
        for ch in &inv.characters {
            let _ = writeln!(text, "  |chi{:?}(det)| = {:.*}", ch.character, cfg.float_digits, ch.magnitude);
        }
    }
    text
}

pub fn classify_cmd(path: &Path, cfg: &Config) -> Result<Outcome> {
    let spec = match read_json::<ModelInput>(path)? {
        ModelInput::Model(m) => m,
        ModelInput::Report { result } => result.model,
    };
    let m = ChainCobordismModel::from_spec(&spec, cfg)?;
    let c = classify(&m, cfg)?;
    Ok(Outcome::ok(to_value(&c), class_text(&c, cfg)))
}

pub fn realize_cmd(path: &Path, model_out: Option<&Path>, cfg: &Config) -> Result<Outcome> {
    let job: PlusJob = read_json(path)?;
    let hom = job.presentation.hom(&base_dir(path), cfg)?;
    let p = hom.source().clone();
    let seeds = words(job.seeds.as_deref().unwrap_or_default(), &p)?;
    let tau = TorsionClass::new(job.torsion(hom.target())?, job.parity)?;
    let x = build_presentation_complex(&p, &hom, &RingSpec::Integers);
    let m = realize(&x, &seeds, &tau, cfg)?;
    let c = classify(&m, cfg)?;
    let spec = m.to_spec();
    if let Some(out) = model_out {
        let body = serde_json::to_string_pretty(&spec)? + "\n";
        std::fs::write(out, body).map_err(|e| bad(format!("cannot write {}: {e}", out.display())))?;
    }
    let text = format!("realized model with W ranks {:?}\n  {}", m.w_complex().ranks(), class_text(&c, cfg));
    Ok(Outcome::ok(json!({ "model": spec, "class": c }), text))
}

pub fn enumerate(group: &str, cfg: &Config) -> Result<Outcome> {
    let g = group_arg(group, cfg)?;
    let classes = enumerate_classes(&g, cfg)?;
    let mut text = format!("perfect normal subgroups of {} (order {})\n", label(&g), g.order());
    for c in &classes {
        let _ = writeln!(text, "  |P| = {:<4} |G/P| = {:<4} {}", c.p_order, c.quotient_order, c.detection);
    }
    Ok(Outcome::ok(json!({ "group": label(&g), "order": g.order(), "classes": classes }), text))
}

pub fn framing(path: &Path) -> Result<Outcome> {
    let fp: FramingProblem = read_json(path)?;
    let eps = framing_correction(&fp)?;
    let after = corrected_evaluations(&fp, &eps);
    let text = format!("framing correction eps = {eps:?}\n  corrected evaluations = {after:?}\n");
    Ok(Outcome::ok(json!({ "epsilon": eps, "corrected": after }), text))
}

//! One function per subcommand. Each returns the object in all three
//! renderings plus whether every check it ran passed.

use dwork_core::cy3::{cy3_basis, cy3_dims, cy3_matrix_brackets, CY3_MAX_SYMBOLIC_H};
use dwork_core::dworkgeo::matched_c;
use dwork_core::liealg::{amsy_decompose, fr_identities, verify_theorem2};
use dwork_core::modular::{sl2_triple, truncate_poly, weights};
use dwork_core::{DworkError, Model, Result};
use serde_json::{json, Map, Value};

use crate::args::Suite;
use crate::fixtures::{self, action_formulas, relation_string, Fixture};
use crate::render::*;
use crate::suites::{self, Check};

pub struct Emit {
    pub object: Value,
    pub text: String,
    pub latex: String,
    pub ok: bool,
}

impl Emit {
    fn new(object: Value, text: String, latex: String) -> Emit {
        Emit { object, text, latex, ok: true }
    }
}

pub fn build(model: &Model) -> Result<Emit> {
    let spec = model.spec();
    let slots: Map<String, Value> = spec.slot_map().iter().map(|(v, (i, j))| (v.to_string(), json!([i, j]))).collect();
    let deps: Map<String, Value> =
        spec.dependent_exprs.iter().map(|((i, j), f)| (format!("s{}{}", i, j), f.to_string().into())).collect();
    let vars: Vec<String> = spec.vars().iter().map(|v| v.to_string()).collect();
    let object = json!({
        "vars": vars,
        "slot_map": slots,
        "dependent_exprs": deps,
        "relation": relation_string(model),
        "inverted_locus": spec.inverted_locus().to_string(),
        "s": mat_json(&spec.s),
        "omega": mat_json(&spec.omega),
        "phi": mat_json(&spec.phi),
    });
    let mut text = format!("chart variables: {}\nslots:\n", vars.join(" "));
    for (v, (i, j)) in spec.slot_map() {
        text.push_str(&format!("  {} = s{}{}\n", v, i, j));
    }
    text.push_str("dependent entries:\n");
    for ((i, j), f) in &spec.dependent_exprs {
        text.push_str(&format!("  s{}{} = {}\n", i, j, f));
    }
    text.push_str(&format!("inverted: {}\nS:\n{}Omega:\n{}", spec.inverted_locus(), mat_text(&spec.s), mat_text(&spec.omega)));
    let latex = format!("S = {}\\Omega = {}", mat_latex(&spec.s), mat_latex(&spec.omega));
    Ok(Emit::new(object, text, latex))
}

pub fn ra(model: &Model) -> Result<Emit> {
    let r = model.r()?;
    let y = model.yukawa()?;
    let ys: Map<String, Value> = y.ys.iter().enumerate().map(|(i, f)| (format!("Y{}", i + 1), f.to_string().into())).collect();
    let mut object = field_json(r);
    object["yukawa"] = Value::Object(ys);
    let mut text = field_text("R", r);
    for (i, f) in y.ys.iter().enumerate() {
        text.push_str(&format!("Y{} = {}\n", i + 1, f));
    }
    Ok(Emit::new(object, text, field_latex("R", r)))
}

pub fn basis(model: &Model) -> Result<Emit> {
    let mut object = Map::new();
    let mut text = String::new();
    let mut latex = String::new();
    for ((a, b), f) in model.basis()? {
        let name = format!("R_g{}{}", a, b);
        object.insert(name.clone(), field_json(f));
        text.push_str(&field_text(&name, f));
        latex.push_str(&field_latex(&name, f));
    }
    Ok(Emit::new(Value::Object(object), text, latex))
}

fn sl2_case(n: usize) -> &'static str {
    match n {
        1 => "F = R_g12, Hf = -R_g11",
        2 => "F = 2 R_g12, Hf = -2 R_g11",
        _ => "F = R_g12, Hf = R_g22 - R_g11",
    }
}

pub fn sl2(model: &Model) -> Result<Emit> {
    let t = sl2_triple(model)?;
    let case = sl2_case(model.n());
    let object = json!({ "case": case, "R": field_json(&t.e), "F": field_json(&t.f), "Hf": field_json(&t.hf) });
    let text = format!("{}\n{}{}{}", case, field_text("R", &t.e), field_text("F", &t.f), field_text("Hf", &t.hf));
    let latex = format!("{}{}{}", field_latex("R", &t.e), field_latex("F", &t.f), field_latex("H_f", &t.hf));
    Ok(Emit::new(object, text, latex))
}

pub fn weight_cmd(model: &Model) -> Result<Emit> {
    let (w, rep) = weights(model)?;
    let ws: Map<String, Value> = w.iter().map(|(v, k)| (v.to_string(), json!(k))).collect();
    let lines: Vec<Value> = rep
        .lines
        .iter()
        .map(|l| {
            json!({ "var": l.var.to_string(), "weight": l.weight, "r_degree": l.r_degree, "r_ok": l.r_ok,
                    "f_degree": l.f_degree, "f_ok": l.f_ok })
        })
        .collect();
    let object = json!({ "weights": ws, "degrees": lines, "all_ok": rep.all_ok() });
    let mut text = String::from("var  w  deg R  deg F\n");
    for l in &rep.lines {
        let show = |d: Option<i64>| d.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
        text.push_str(&format!(
            "{:<4} {:>2} {:>5}{} {:>5}{}\n",
            l.var.to_string(),
            l.weight,
            show(l.r_degree),
            if l.r_ok { " " } else { "!" },
            show(l.f_degree),
            if l.f_ok { " " } else { "!" }
        ));
    }
    let latex = format!(
        "w = ({})\n",
        w.values().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
    );
    // a report, not a check: n >= 5 outcomes are informational
    Ok(Emit::new(object, text, latex))
}

pub fn brackets(model: &Model) -> Result<Emit> {
    let mut rep = verify_theorem2(model)?;
    rep.extend(fr_identities(model)?);
    let ok = rep.all_true();
    Ok(Emit { object: report_json(&rep), text: report_text(&rep), latex: report_latex(&rep), ok })
}

pub fn action(model: &Model) -> Result<Emit> {
    let a = action_formulas(model)?;
    let mut object = field_json(&a);
    let mut text = String::new();
    let mut latex = String::from("\\begin{align*}\n");
    for (v, f) in a.iter() {
        text.push_str(&format!("{} . g = {}\n", v, f));
        latex.push_str(&format!("{} \\bullet g &= {} \\\\\n", latex_poly(&v.to_string()), latex_ratfn(f)));
    }
    latex.push_str("\\end{align*}\n");
    let sgs: Vec<String> = dwork_core::groupaction::subgroups(model.n()).iter().map(|s| format!("{:?}", s)).collect();
    object["parameters"] = json!(sgs);
    Ok(Emit::new(object, text, latex))
}

pub fn decompose(model: &Model) -> Result<Emit> {
    let tr = truncate_poly(model.r()?, model.ctx());
    let mut object = json!({ "field": field_json(&tr) });
    let mut text = field_text("truncate(R)", &tr);
    let mut latex = field_latex("\\tilde R", &tr);
    match amsy_decompose(model, &tr) {
        Ok(d) => {
            let cs: Map<String, Value> = d.f.iter().map(|((a, b), k)| (format!("g{}{}", a, b), k.to_string().into())).collect();
            object["result"] = json!({ "f0": d.f0.to_string(), "coefficients": cs });
            text.push_str(&format!("member:\n  f0 = {}\n", d.f0));
            latex.push_str(&format!("f_0 = {}\n", latex_ratfn(&d.f0)));
            for ((a, b), k) in &d.f {
                if !k.is_zero() {
                    text.push_str(&format!("  f_g{}{} = {}\n", a, b, k));
                    latex.push_str(&format!("f_{{g_{{{}{}}}}} = {}\n", a, b, latex_ratfn(k)));
                }
            }
        }
        Err(DworkError::NotMember { i, j, value }) => {
            object["not_member"] = json!({ "entry": [i, j], "value": value });
            text.push_str(&format!("not a member: entry ({},{}) = {}\n", i, j, value));
            latex.push_str(&format!("\\text{{not a member: entry }}({},{})\n", i, j));
        }
        Err(e) => return Err(e),
    }
    Ok(Emit::new(object, text, latex))
}

pub fn cy3(h: usize) -> Result<Emit> {
    let (a, b, c) = cy3_dims(h);
    let basis = cy3_basis(h)?;
    let rep = cy3_matrix_brackets(h)?;
    let gens: Map<String, Value> = basis.gens.iter().map(|(g, m)| (g.to_string(), mat_json(m))).collect();
    let object = json!({
        "h": h,
        "dims": [a, b, c],
        "symbolic_rows": h <= CY3_MAX_SYMBOLIC_H,
        "phi": mat_json(&basis.phi),
        "generators": gens,
        "report": report_json(&rep),
    });
    let mut text = format!("h = {}: dims ({}, {}, {}), {} constant generators\nPhi:\n{}", h, a, b, c, basis.gens.len(), mat_text(&basis.phi));
    if h > CY3_MAX_SYMBOLIC_H {
        text.push_str(&format!("rows involving R_a need h <= {}; only constant pairs checked\n", CY3_MAX_SYMBOLIC_H));
    }
    text.push_str(&report_text(&rep));
    let latex = format!("\\Phi = {}{}", mat_latex(&basis.phi), report_latex(&rep));
    let ok = rep.all_true();
    Ok(Emit { object, text, latex, ok })
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({ "suite": c.suite.name(), "name": c.name, "ok": c.ok, "detail": c.detail }))
            .collect(),
    )
}

fn checks_text(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!("{} [{}] {}\n", if c.ok { "ok  " } else { "FAIL" }, c.suite.name(), c.name));
        if !c.ok && !c.detail.is_empty() {
            for line in c.detail.lines() {
                s.push_str(&format!("     {}\n", line));
            }
        }
    }
    let bad = checks.iter().filter(|c| !c.ok).count();
    s.push_str(&format!("{} checks, {} failed\n", checks.len(), bad));
    s
}

fn checks_latex(checks: &[Check]) -> String {
    let mut s = String::from("\\begin{tabular}{lll}\n");
    for c in checks {
        s.push_str(&format!(
            "{} & \\texttt{{{}}} & {} \\\\\n",
            c.suite.name(),
            c.name.replace('_', "\\_"),
            if c.ok { "\\checkmark" } else { "$\\times$" }
        ));
    }
    s.push_str("\\end{tabular}\n");
    s
}

/// Suites plus the fixture comparisons for n when the c mode is matched.
pub fn verify(model: &Model, suite: Suite, fixture: Option<&Fixture>) -> Result<Emit> {
    let matched = model.params().c_mode == dwork_core::CMode::Matched && matched_c(model.n()).is_some();
    let fx = match fixture {
        Some(f) if matched => fixtures::compare(model, f)?,
        _ => Vec::new(),
    };
    let checks = suites::run(model, suite, &fx)?;
    let ok = checks.iter().all(|c| c.ok);
    let object = json!({ "suite": suite.name(), "fixture": fixture.is_some() && matched, "checks": checks_json(&checks), "all_ok": ok });
    Ok(Emit { object, text: checks_text(&checks), latex: checks_latex(&checks), ok })
}

pub fn fixture_cmd(model: &Model, fixture: Option<&Fixture>, emit: bool) -> Result<Emit> {
    if emit {
        let object = fixtures::emit(model)?;
        let text = serde_json::to_string_pretty(&object).expect("serializable") + "\n";
        return Ok(Emit::new(object, text.clone(), text));
    }
    let Some(fx) = fixture else {
        let object = json!({ "checks": [], "all_ok": false, "missing": true });
        return Ok(Emit { object, text: format!("no fixture for n = {}\n", model.n()), latex: String::new(), ok: false });
    };
    let fc = fixtures::compare(model, fx)?;
    let checks: Vec<Check> =
        fc.iter().map(|f| Check { suite: f.suite, name: f.object.clone(), ok: f.ok, detail: f.detail.clone() }).collect();
    let ok = checks.iter().all(|c| c.ok);
    let object = json!({ "checks": checks_json(&checks), "all_ok": ok });
    Ok(Emit { object, text: checks_text(&checks), latex: checks_latex(&checks), ok })
}

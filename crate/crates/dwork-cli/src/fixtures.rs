//! Reference displays per n, stored as expression strings, and their
//! comparison against computed objects. Strings are parsed under the
//! model's quotient context and compared through canonical form.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use dwork_core::dworkgeo::matched_c;
use dwork_core::groupaction::{act, generic_point, subgroups, symbolic_elem};
use dwork_core::liealg::amsy_decompose;
use dwork_core::modular::{sl2_triple, truncate_poly, weights_of};
use dwork_core::{DworkError, Model, VecField};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use symcore::{parse_ratfn, RatFn, Var};

use crate::args::Suite;
use crate::render::field_json;

pub const ENV_VAR: &str = "DWORK_FIXTURES";

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Fixture {
    pub n: usize,
    pub c_matched: String,
    pub c_derivation: String,
    pub relation: Option<String>,
    pub objects: Map<String, Value>,
}

/// Flag, then $DWORK_FIXTURES, then the fixtures shipped with the sources.
pub fn fixture_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(ENV_VAR) {
        return PathBuf::from(p);
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// `Ok(None)` when the directory has no file for n.
pub fn load(dir: &Path, n: usize) -> Result<Option<Fixture>, String> {
    let path = dir.join(format!("n{}.json", n));
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {}", path.display(), e))?;
    let fx: Fixture = serde_json::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e))?;
    if fx.n != n {
        return Err(format!("{}: holds n = {}", path.display(), fx.n));
    }
    Ok(Some(fx))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCheck {
    pub object: String,
    pub suite: Suite,
    pub ok: bool,
    pub detail: String,
}

fn suite_of(object: &str) -> Suite {
    match object {
        "R" | "relation" | "c_matched" | "Y1" => Suite::Omega,
        "Hf" | "F" => Suite::Sl2,
        "weights" => Suite::Weights,
        "action" => Suite::Action,
        "truncate_R" | "decomposition" | "obstruction" => Suite::Membership,
        s if s.starts_with("R_g") => Suite::Theorem2,
        _ => Suite::All,
    }
}

struct Cmp<'a> {
    model: &'a Model,
    out: Vec<FixtureCheck>,
}

impl Cmp<'_> {
    fn parse(&self, s: &str) -> Result<RatFn, String> {
        parse_ratfn(s, self.model.ctx()).map_err(|e| format!("cannot parse `{}`: {}", s, e))
    }

    fn push(&mut self, object: &str, ok: bool, detail: String) {
        self.out.push(FixtureCheck { object: object.to_string(), suite: suite_of(object), ok, detail });
    }

    fn scalar(&mut self, object: &str, want: &Value, got: &RatFn) {
        let res = match want.as_str() {
            Some(s) => self.parse(s).map(|w| (w.to_string(), got.to_string())),
            None => Err("expected a string".into()),
        };
        match res {
            Ok((w, g)) => {
                let ok = w == g;
                self.push(object, ok, if ok { g } else { format!("fixture {} / computed {}", w, g) })
            }
            Err(e) => self.push(object, false, e),
        }
    }

    /// Every listed component matches; with `exhaustive`, unlisted
    /// components must vanish.
    fn field(&mut self, object: &str, want: &Value, got: &VecField, exhaustive: bool) {
        let Some(map) = want.as_object() else {
            return self.push(object, false, "expected an object of components".into());
        };
        let mut bad = Vec::new();
        let mut seen = BTreeSet::new();
        for (k, s) in map {
            let Ok(v) = k.parse::<Var>() else {
                bad.push(format!("{}: not a variable", k));
                continue;
            };
            seen.insert(v);
            let w = match s.as_str().map(|s| self.parse(s)) {
                Some(Ok(w)) => w,
                Some(Err(e)) => {
                    bad.push(e);
                    continue;
                }
                None => {
                    bad.push(format!("{}: expected a string", k));
                    continue;
                }
            };
            let g = got.get(v);
            if w.to_string() != g.to_string() {
                bad.push(format!("{}: fixture {} / computed {}", k, w, g));
            }
        }
        if exhaustive {
            for (v, g) in got.iter() {
                if !seen.contains(&v) {
                    bad.push(format!("{}: fixture 0 / computed {}", v, g));
                }
            }
        }
        let ok = bad.is_empty();
        self.push(object, ok, if ok { format!("{} components", map.len()) } else { bad.join("; ") });
    }
}

fn action_field(model: &Model) -> dwork_core::Result<VecField> {
    let n = model.n();
    if subgroups(n).len() > 12 {
        return Err(DworkError::IndexOutOfRange(format!("{} group parameters for n={}", subgroups(n).len(), n)));
    }
    let spec = model.spec();
    let g = symbolic_elem(n, Var::g)?;
    Ok(VecField::from_map(act(spec, &generic_point(spec), &g.mat)?))
}

/// The symbolic action t . g as a map coordinate -> expression.
pub fn action_formulas(model: &Model) -> dwork_core::Result<VecField> {
    action_field(model)
}

pub fn relation_string(model: &Model) -> Option<String> {
    model.spec().relation.as_ref().map(|(v, p)| format!("{}^2 = {}", v, p))
}

/// Compares every object of `fx`. Model errors other than the expected
/// NotMember propagate.
pub fn compare(model: &Model, fx: &Fixture) -> dwork_core::Result<Vec<FixtureCheck>> {
    let ctx = model.ctx();
    let mut c = Cmp { model, out: Vec::new() };
    let c_want = matched_c(model.n()).map(|r| r.to_string()).unwrap_or_default();
    let ok = c_want == fx.c_matched;
    c.push("c_matched", ok, format!("fixture {} / default {}", fx.c_matched, c_want));

    match (&fx.relation, &model.spec().relation) {
        (None, None) => c.push("relation", true, "none".into()),
        (Some(s), Some((pivot, p))) => {
            let parsed = s.split_once('=').map(|(l, r)| (l.trim().to_string(), c.parse(r.trim())));
            match parsed {
                Some((lhs, Ok(rhs))) => {
                    let ok = lhs == format!("{}^2", pivot) && rhs.to_string() == p.to_string();
                    c.push("relation", ok, format!("fixture {} / computed {}^2 = {}", s, pivot, p));
                }
                Some((_, Err(e))) => c.push("relation", false, e),
                None => c.push("relation", false, format!("`{}` is not an equation", s)),
            }
        }
        (w, g) => c.push("relation", false, format!("fixture {:?} / computed {:?}", w, g.as_ref().map(|x| x.0))),
    }

    for (name, want) in &fx.objects {
        match name.as_str() {
            "R" => c.field(name, want, model.r()?, true),
            "Hf" => c.field(name, want, &sl2_triple(model)?.hf, true),
            "F" => c.field(name, want, &sl2_triple(model)?.f, true),
            "truncate_R" => c.field(name, want, &truncate_poly(model.r()?, ctx), true),
            "action" => c.field(name, want, &action_field(model)?, false),
            "Y1" => c.scalar(name, want, &model.yukawa()?.get(1).unwrap_or_else(RatFn::zero)),
            "weights" => {
                let hf = sl2_triple(model)?.hf;
                let w = weights_of(&hf, &model.spec().vars())?;
                let got: Map<String, Value> = w.iter().map(|(v, k)| (v.to_string(), json!(k))).collect();
                let ok = want.as_object() == Some(&got);
                c.push(name, ok, format!("fixture {} / computed {}", want, Value::Object(got)));
            }
            "decomposition" => decomposition(&mut c, model, want)?,
            "obstruction" => obstruction(&mut c, model, want)?,
            s if s.starts_with("R_g") => {
                let idx = s[3..].as_bytes();
                let field = match idx {
                    [a, b] if a.is_ascii_digit() && b.is_ascii_digit() => {
                        model.basis_field((a - b'0') as usize, (b - b'0') as usize).ok()
                    }
                    _ => None,
                };
                match field {
                    Some(f) => c.field(name, want, f, true),
                    None => c.push(name, false, "no such basis field".into()),
                }
            }
            _ => c.push(name, false, "unknown object".into()),
        }
    }
    Ok(c.out)
}

fn decomposition(c: &mut Cmp, model: &Model, want: &Value) -> dwork_core::Result<()> {
    let ctx = model.ctx();
    let name = "decomposition";
    let d = match amsy_decompose(model, &truncate_poly(model.r()?, ctx)) {
        Ok(d) => d,
        Err(DworkError::NotMember { i, j, value }) => {
            c.push(name, false, format!("computed NotMember at ({},{}): {}", i, j, value));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let factor = match want.get("factor").and_then(Value::as_str) {
        Some("Y1") => model.yukawa()?.get(1).unwrap_or_else(RatFn::zero),
        Some(s) => match c.parse(s) {
            Ok(f) => f,
            Err(e) => return Ok(c.push(name, false, e)),
        },
        None => RatFn::one(),
    };
    let mut bad = Vec::new();
    match want.get("f0").and_then(Value::as_str).map(|s| c.parse(s)) {
        Some(Ok(f0)) if f0 == d.f0 => {}
        Some(Ok(f0)) => bad.push(format!("f0: fixture {} / computed {}", f0, d.f0)),
        Some(Err(e)) => bad.push(e),
        None => bad.push("f0 missing".into()),
    }
    let coeffs = want.get("coefficients").and_then(Value::as_object).cloned().unwrap_or_default();
    for (&(a, b), k) in &d.f {
        let key = format!("g{}{}", a, b);
        let w = match coeffs.get(&key).and_then(Value::as_str).map(|s| c.parse(s)) {
            Some(Ok(w)) => ctx.mul(&w, &factor),
            Some(Err(e)) => {
                bad.push(e);
                continue;
            }
            None => RatFn::zero(),
        };
        if w.to_string() != k.to_string() {
            bad.push(format!("{}: fixture {} / computed {}", key, w, k));
        }
    }
    for key in coeffs.keys() {
        if !d.f.keys().any(|(a, b)| format!("g{}{}", a, b) == *key) {
            bad.push(format!("{}: not a basis index", key));
        }
    }
    let ok = bad.is_empty();
    c.push(name, ok, if ok { format!("{} coefficients", coeffs.len()) } else { bad.join("; ") });
    Ok(())
}

fn obstruction(c: &mut Cmp, model: &Model, want: &Value) -> dwork_core::Result<()> {
    let name = "obstruction";
    let entry: Option<(usize, usize)> = want.get("entry").and_then(|e| serde_json::from_value(e.clone()).ok());
    let value = want.get("value").and_then(Value::as_str).map(|s| c.parse(s));
    match amsy_decompose(model, &truncate_poly(model.r()?, model.ctx())) {
        Ok(_) => c.push(name, false, "computed a decomposition".into()),
        Err(DworkError::NotMember { i, j, value: got }) => match (entry, value) {
            (Some(e), Some(Ok(v))) => {
                let ok = e == (i, j) && v.to_string() == got;
                c.push(name, ok, format!("fixture ({},{}) {} / computed ({},{}) {}", e.0, e.1, v, i, j, got));
            }
            (_, Some(Err(e))) => c.push(name, false, e),
            _ => c.push(name, false, "fixture needs entry and value".into()),
        },
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Fixture-shaped JSON computed from scratch (canonical strings).
pub fn emit(model: &Model) -> dwork_core::Result<Value> {
    let n = model.n();
    let ctx = model.ctx();
    let t = sl2_triple(model)?;
    let comps = |v: &VecField| field_json(v)["components"].clone();
    let mut objects = Map::new();
    objects.insert("R".into(), comps(model.r()?));
    for ((a, b), f) in model.basis()? {
        if *a == 1 && *b <= 2 {
            objects.insert(format!("R_g{}{}", a, b), comps(f));
        }
    }
    objects.insert("Hf".into(), comps(&t.hf));
    objects.insert("F".into(), comps(&t.f));
    let w = weights_of(&t.hf, &model.spec().vars())?;
    objects.insert("weights".into(), w.iter().map(|(v, k)| (v.to_string(), json!(k))).collect::<Map<_, _>>().into());
    if subgroups(n).len() <= 12 {
        objects.insert("action".into(), comps(&action_field(model)?));
    }
    objects.insert("truncate_R".into(), comps(&truncate_poly(model.r()?, ctx)));
    Ok(json!({
        "n": n,
        "c_matched": matched_c(n).map(|r| r.to_string()).unwrap_or_default(),
        "c_derivation": "computed",
        "relation": relation_string(model),
        "objects": objects,
    }))
}

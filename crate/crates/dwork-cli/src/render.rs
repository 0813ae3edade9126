//! Text, JSON and LaTeX renderings of fields, matrices and reports.

use dwork_core::liealg::BracketReport;
use dwork_core::VecField;
use serde_json::{json, Map, Value};
use symcore::{MatF, RatFn};

pub fn field_json(v: &VecField) -> Value {
    let comps: Map<String, Value> = v.iter().map(|(k, f)| (k.to_string(), Value::String(f.to_string()))).collect();
    json!({ "components": comps })
}

pub fn field_text(name: &str, v: &VecField) -> String {
    let mut s = format!("{}:\n", name);
    if v.is_zero() {
        s.push_str("  0\n");
    }
    for (k, f) in v.iter() {
        s.push_str(&format!("  d/d{:<4} {}\n", k.to_string(), f));
    }
    s
}

pub fn mat_json(m: &MatF) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| m.get(i, j).to_string().into()).collect())).collect())
}

pub fn mat_text(m: &MatF) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    cells.iter().map(|row| format!("  [{}]\n", row.iter().map(|c| format!("{:>w$}", c, w = width)).collect::<Vec<_>>().join(", "))).collect()
}

pub fn report_json(rep: &BracketReport) -> Value {
    let entries: Vec<Value> = rep
        .entries
        .iter()
        .map(|e| json!({ "name": e.name, "lhs": e.lhs, "rhs": e.rhs, "equal": e.equal, "conditional": e.conditional }))
        .collect();
    json!({ "header": rep.header, "entries": entries, "all_true": rep.all_true() })
}

pub fn report_text(rep: &BracketReport) -> String {
    let mut s = String::new();
    for h in &rep.header {
        s.push_str(&format!("# {}\n", h));
    }
    for e in &rep.entries {
        let tag = if e.equal { "ok  " } else { "FAIL" };
        let cond = if e.conditional { " (conditional)" } else { "" };
        s.push_str(&format!("{} {}{}\n", tag, e.name, cond));
        if !e.equal {
            s.push_str(&format!("     lhs: {}\n     rhs: {}\n", e.lhs, e.rhs));
        }
    }
    s
}

fn latex_escape(s: &str) -> String {
    s.replace('_', "\\_").replace('#', "\\#")
}

pub fn report_latex(rep: &BracketReport) -> String {
    let mut s = String::from("\\begin{tabular}{lll}\n");
    for e in &rep.entries {
        let mark = if e.equal { "\\checkmark" } else { "$\\times$" };
        s.push_str(&format!(
            "\\texttt{{{}}} & {} & {} \\\\\n",
            latex_escape(&e.name),
            mark,
            if e.conditional { "conditional" } else { "" }
        ));
    }
    s.push_str("\\end{tabular}\n");
    s
}

/// `t12^3*g2` -> `t_{12}^{3} g_{2}`
pub fn latex_poly(s: &str) -> String {
    let mut out = String::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_ascii_alphabetic() {
            let mut j = i + 1;
            while j < cs.len() && cs[j].is_ascii_digit() {
                j += 1;
            }
            out.push(c);
            if j > i + 1 {
                out.push_str(&format!("_{{{}}}", cs[i + 1..j].iter().collect::<String>()));
            }
            i = j;
        } else if c == '^' {
            let mut j = i + 1;
            if j < cs.len() && cs[j] == '-' {
                j += 1;
            }
            while j < cs.len() && cs[j].is_ascii_digit() {
                j += 1;
            }
            out.push_str(&format!("^{{{}}}", cs[i + 1..j].iter().collect::<String>()));
            i = j;
        } else if c == '*' {
            out.push(' ');
            i += 1;
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

pub fn latex_ratfn(f: &RatFn) -> String {
    if f.den().is_one() {
        return latex_poly(&f.num().to_string());
    }
    format!("\\frac{{{}}}{{{}}}", latex_poly(&f.num().to_string()), latex_poly(&f.den().to_string()))
}

/// `name = (f_1) d/dt_1 + ...` in the display style of the source.
pub fn field_latex(name: &str, v: &VecField) -> String {
    if v.is_zero() {
        return format!("{} = 0\n", name);
    }
    let terms: Vec<String> = v
        .iter()
        .map(|(k, f)| format!("\\left({}\\right)\\frac{{\\partial}}{{\\partial {}}}", latex_ratfn(f), latex_poly(&k.to_string())))
        .collect();
    format!("\\begin{{align*}}\n{} = {}\n\\end{{align*}}\n", latex_name(name), terms.join("\n  + "))
}

pub fn latex_name(name: &str) -> String {
    match name.split_once('_') {
        Some((a, b)) => format!("{}_{{{}}}", a, b),
        None => name.to_string(),
    }
}

pub fn mat_latex(m: &MatF) -> String {
    let rows: Vec<String> =
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| latex_ratfn(m.get(i, j))).collect::<Vec<_>>().join(" & ")).collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}\n", rows.join(" \\\\\n"))
}

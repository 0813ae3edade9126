//! Verification suites. Each check is a named boolean with a diff-style
//! detail; the suites run independently and are reported in fixed order.

use dwork_core::chart::chart_defect;
use dwork_core::crosscheck::oracle_crosscheck;
use dwork_core::groupaction::{
    act, generic_point, group_defect, group_elem, infinitesimal_matches, lie_gen, subgroups, symbolic_elem, Subgroup,
};
use dwork_core::liealg::{
    amsy_decompose, compose, flatness_report, fr_identities, jacobi_report, structure_report, verify_theorem2,
    BracketReport,
};
use dwork_core::modular::{sl2_triple, truncate_poly, weights, yukawa_defect};
use dwork_core::{DworkError, Model, Result};
use rayon::prelude::*;
use symcore::{rat, QuotientCtx, RatFn, Var};

use crate::args::Suite;
use crate::fixtures::FixtureCheck;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

fn check(suite: Suite, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
    Check { suite, name: name.into(), ok, detail: detail.into() }
}

fn from_report(suite: Suite, rep: &BracketReport) -> Vec<Check> {
    rep.entries
        .iter()
        .map(|e| {
            let detail = if e.equal { String::new() } else { format!("lhs: {}\nrhs: {}", e.lhs, e.rhs) };
            let name = if e.conditional { format!("{} (conditional)", e.name) } else { e.name.clone() };
            check(suite, name, e.equal, detail)
        })
        .collect()
}

/// Sample pairs used for flatness above n = 3.
pub const FLATNESS_SAMPLE: (usize, u64) = (5, 7);
/// Oracle equalities checked per n.
pub const ORACLE_LINES: usize = 50;

fn omega(model: &Model) -> Result<Vec<Check>> {
    let s = Suite::Omega;
    let n = model.n();
    let ctx = model.ctx();
    let spec = model.spec();
    let mut out = Vec::new();
    out.push(check(s, "S Omega S^T = Phi", chart_defect(spec).is_zero(), ""));
    let pd = model.conn.phi_defect();
    out.push(check(s, "A Phi + Phi A^T = 0", pd.is_none(), pd.map(|(v, i, j)| format!("d{} at ({},{})", v, i, j)).unwrap_or_default()));
    let r = model.r()?;
    let y = model.yukawa()?;
    let ym = y.matrix();
    let got = model.contract(r);
    out.push(check(s, "contract(A, R) = Y", got == ym, if got == ym { String::new() } else { format!("got\n{}", got) }));
    out.push(check(s, "Y Phi + Phi Y^T = 0", yukawa_defect(&ym, &spec.phi, ctx).is_zero(), ""));
    // pairs i < n-1-i; the odd-n middle coupling is not self-paired
    for i in (0..n).filter(|i| 2 * i + 1 < n) {
        let a = y.get(i as isize).unwrap_or_else(RatFn::zero);
        let b = y.get((n - 1 - i) as isize).unwrap_or_else(RatFn::zero);
        let ok = ctx.add(&a, &b).is_zero();
        out.push(check(s, format!("Y_{} = -Y_{}", i, n - 1 - i), ok, if ok { String::new() } else { format!("{} vs {}", a, b) }));
    }
    if let Some(d) = model.conn.relation_defect(r) {
        out.push(check(s, "R tangent to the relation", d.is_zero(), d.to_string()));
    }
    for ((a, b), f) in model.basis()? {
        let want = lie_gen(n, *a, *b)?.mat.transpose();
        let got = model.contract(f);
        out.push(check(s, format!("contract(A, R_g{}{}) = g{}{}^T", a, b, a, b), got == want, ""));
        if let Some(d) = model.conn.relation_defect(f) {
            out.push(check(s, format!("R_g{}{} tangent to the relation", a, b), d.is_zero(), d.to_string()));
        }
    }
    let rep = oracle_crosscheck(model, ORACLE_LINES, n as u64)?;
    let bad: Vec<&str> = rep.lines.iter().filter(|l| !(l.canonical && l.oracle)).map(|l| l.name.as_str()).collect();
    out.push(check(
        s,
        format!("oracle: {} equalities at {} points", rep.lines.len(), rep.points),
        rep.all_agree() && rep.points > 0,
        bad.join(", "),
    ));
    Ok(out)
}

fn theorem2(model: &Model) -> Result<Vec<Check>> {
    let mut out = from_report(Suite::Theorem2, &verify_theorem2(model)?);
    out.extend(from_report(Suite::Theorem2, &structure_report(model)?));
    Ok(out)
}

fn sl2(model: &Model) -> Result<Vec<Check>> {
    let names = ["[R,F] = Hf", "[Hf,R] = 2R", "[Hf,F] = -2F"];
    Ok(match sl2_triple(model) {
        Ok(_) => names.iter().map(|n| check(Suite::Sl2, *n, true, "")).collect(),
        Err(DworkError::Sl2Violation(which)) => {
            let at = names.iter().position(|n| n.replace(' ', "") == which.replace(' ', "")).unwrap_or(0);
            names
                .iter()
                .enumerate()
                .filter(|(i, _)| *i <= at)
                .map(|(i, n)| check(Suite::Sl2, *n, i < at, if i == at { "fails" } else { "" }))
                .collect()
        }
        Err(e) => return Err(e),
    })
}

fn flatness(model: &Model) -> Result<Vec<Check>> {
    let n = model.n();
    let sample = if n <= 3 { None } else { Some(FLATNESS_SAMPLE) };
    let mut out = from_report(Suite::Flatness, &flatness_report(model, sample)?);
    if n <= 4 {
        out.extend(from_report(Suite::Flatness, &jacobi_report(model)?));
    }
    Ok(out)
}

/// Fixed rational parameters, nonzero on the multiplicative subgroups.
fn numeric_params(n: usize, shift: i64) -> Vec<RatFn> {
    subgroups(n)
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let k = (i as i64 * 7 + shift) % 11 - 5;
            let k = if matches!(s, Subgroup::Mult(_)) && k == 0 { 3 } else { k };
            RatFn::from_rat(&rat(k, 1 + (i as i64 + shift) % 4))
        })
        .collect()
}

fn action(model: &Model) -> Result<Vec<Check>> {
    let s = Suite::Action;
    let n = model.n();
    let spec = model.spec();
    let mut out = Vec::new();
    for m in infinitesimal_matches(model)? {
        let detail = m.matches.iter().map(|(a, b, sg)| format!("{:+} R_g{}{}", sg, a, b)).collect::<Vec<_>>().join(", ");
        out.push(check(s, format!("d/dp (t . G_{}) = ±R_g for one g", m.subgroup), m.unique().is_some(), detail));
    }
    let symbolic = subgroups(n).len() <= 12;
    if symbolic {
        let g = symbolic_elem(n, Var::g)?;
        out.push(check(s, "g^T Phi g = Phi (symbolic)", group_defect(&g.mat, &spec.phi, &QuotientCtx::plain()).is_zero(), ""));
    }
    let plain = QuotientCtx::plain();
    let (g, h) = if symbolic && n <= 4 {
        (symbolic_elem(n, Var::g)?.mat, symbolic_elem(n, Var::h)?.mat)
    } else {
        (group_elem(n, &numeric_params(n, 1))?.mat, group_elem(n, &numeric_params(n, 4))?.mat)
    };
    let pt = generic_point(spec);
    let lhs = act(spec, &act(spec, &pt, &g)?, &h)?;
    let rhs = act(spec, &pt, &g.mul(&h, &plain))?;
    let label = if symbolic && n <= 4 { "symbolic" } else { "numeric" };
    out.push(check(s, format!("(t . g) . h = t . (gh) ({})", label), lhs == rhs, ""));
    Ok(out)
}

fn weight_suite(model: &Model) -> Result<Vec<Check>> {
    let s = Suite::Weights;
    let (w, rep) = weights(model)?;
    let mut out = Vec::new();
    let ws: Vec<String> = w.iter().map(|(v, k)| format!("{}:{}", v, k)).collect();
    out.push(check(s, "weights", true, ws.join(" ")));
    for l in &rep.lines {
        let show = |d: Option<i64>| d.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
        out.push(check(s, format!("deg R({}) = {}", l.var, l.weight + 2), l.r_ok, format!("got {}", show(l.r_degree))));
        out.push(check(s, format!("deg F({}) = {}", l.var, l.weight - 2), l.f_ok, format!("got {}", show(l.f_degree))));
    }
    out.extend(from_report(s, &fr_identities(model)?));
    Ok(out)
}

fn membership(model: &Model) -> Result<Vec<Check>> {
    let s = Suite::Membership;
    let ctx = model.ctx();
    let r = model.r()?;
    let mut out = Vec::new();
    let d = amsy_decompose(model, r)?;
    let ok = d.f0.is_one() && d.f.values().all(RatFn::is_zero);
    out.push(check(s, "decompose(R) = R", ok, ""));
    let tr = truncate_poly(r, ctx);
    match amsy_decompose(model, &tr) {
        Ok(d) => {
            let back = compose(model, &d)?;
            out.push(check(s, "truncate(R) is a member; compose round-trips", back == tr, ""));
        }
        Err(DworkError::NotMember { i, j, value }) => {
            out.push(check(s, "truncate(R) is not a member", true, format!("entry ({},{}) = {}", i, j, value)));
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

pub fn run_one(model: &Model, suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Omega => omega(model),
        Suite::Theorem2 => theorem2(model),
        Suite::Sl2 => sl2(model),
        Suite::Flatness => flatness(model),
        Suite::Action => action(model),
        Suite::Weights => weight_suite(model),
        Suite::Membership => membership(model),
        Suite::All => run(model, Suite::All, &[]),
    }
}

/// Runs the selected suites in parallel, then appends fixture checks that
/// belong to them. Output order is the suite order.
pub fn run(model: &Model, suite: Suite, fixture: &[FixtureCheck]) -> Result<Vec<Check>> {
    let chosen: Vec<Suite> = Suite::EACH.iter().copied().filter(|s| suite == Suite::All || *s == suite).collect();
    let parts: Vec<Result<Vec<Check>>> = chosen.par_iter().map(|s| run_one(model, *s)).collect();
    let mut out = Vec::new();
    for (s, part) in chosen.iter().zip(parts) {
        out.extend(part?);
        for f in fixture.iter().filter(|f| f.suite == *s || (f.suite == Suite::All && suite == Suite::All)) {
            out.push(check(*s, format!("fixture {}", f.object), f.ok, f.detail.clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dwork_core::{model, CMode};

    #[test]
    fn n3_all_suites_pass() {
        let m = model(3, &CMode::Matched).unwrap();
        let checks = run(&m, Suite::All, &[]).unwrap();
        assert!(checks.iter().all(|c| c.ok), "{:?}", checks.iter().find(|c| !c.ok));
        for s in Suite::EACH {
            assert!(checks.iter().any(|c| c.suite == s), "{:?} empty", s);
        }
    }

    #[test]
    fn n1_bracket_row_fails() {
        let m = model(1, &CMode::Matched).unwrap();
        let bad: Vec<String> =
            run(&m, Suite::Theorem2, &[]).unwrap().into_iter().filter(|c| !c.ok).map(|c| c.name).collect();
        assert_eq!(bad, vec!["[R, R_g11]".to_string()]);
    }

    #[test]
    fn numeric_params_are_group_elements() {
        for n in 1..=6 {
            let g = group_elem(n, &numeric_params(n, 1)).unwrap();
            assert!(group_defect(&g.mat, &dwork_core::phi_matrix(n), &QuotientCtx::plain()).is_zero());
        }
    }
}

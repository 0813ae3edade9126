//! Randomized numeric evaluation of identities the pipeline settles
//! symbolically: S Ω S^T = Φ, A(R) = Y and A(R_g) = g^T, each entry
//! compared both canonically and at random points.

use std::collections::BTreeSet;

use symcore::{sample_points, MatF, Quad, Rat, SamplePoint, Var, ORACLE_POINTS};

use crate::error::Result;
use crate::groupaction::lie_gen;
use crate::model::Model;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleLine {
    pub name: String,
    pub canonical: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub n: usize,
    pub points: usize,
    pub lines: Vec<OracleLine>,
}

impl OracleReport {
    /// Every equality holds canonically and numerically.
    pub fn all_agree(&self) -> bool {
        self.lines.iter().all(|l| l.canonical && l.oracle)
    }
}

type NumMat = Vec<Vec<Quad>>;

fn eval_mat(m: &MatF, pt: &SamplePoint) -> Option<NumMat> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| pt.eval(m.get(i, j))).collect()).collect()
}

fn num_mul(a: &NumMat, b: &NumMat, p: &Rat) -> NumMat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(Quad::zero(), |acc, l| acc.add(&a[i][l].mul(&b[l][j], p)))).collect())
        .collect()
}

fn num_transpose(a: &NumMat) -> NumMat {
    (0..a[0].len()).map(|j| (0..a.len()).map(|i| a[i][j].clone()).collect()).collect()
}

fn mat_vars(m: &MatF, out: &mut BTreeSet<Var>) {
    for e in m.entries() {
        out.extend(e.vars());
    }
}

/// Per point: (S Ω S^T, Φ) and, per field, (A(V), expected) evaluated
/// numerically from the components.
struct Sample {
    sos: NumMat,
    phi: NumMat,
    fields: Vec<(NumMat, NumMat)>,
}

/// Cross-checks the first `count` entry equalities at ORACLE_POINTS points.
pub fn oracle_crosscheck(model: &Model, count: usize, seed: u64) -> Result<OracleReport> {
    let spec = model.spec();
    let ctx = model.ctx();
    let size = model.n() + 1;
    let r = model.r()?;
    let y = model.yukawa()?.matrix();
    let mut fields = vec![("R".to_string(), r.clone(), y)];
    for (&(a, b), f) in model.basis()? {
        fields.push((format!("R_g{}{}", a, b), f.clone(), lie_gen(model.n(), a, b)?.mat.transpose()));
    }

    let mut vars = BTreeSet::new();
    mat_vars(&spec.s, &mut vars);
    mat_vars(&spec.omega, &mut vars);
    for (_, m) in model.conn.a.iter() {
        mat_vars(m, &mut vars);
    }
    for (_, f, _) in &fields {
        for (_, e) in f.iter() {
            vars.extend(e.vars());
        }
    }

    let pts = sample_points(&vars, ctx, seed, ORACLE_POINTS);
    let mut samples = Vec::new();
    for pt in &pts {
        let p = &pt.p;
        let s = eval_mat(&spec.s, pt);
        let om = eval_mat(&spec.omega, pt);
        let (Some(s), Some(om)) = (s, om) else { continue };
        let sos = num_mul(&num_mul(&s, &om, p), &num_transpose(&s), p);
        let phi = eval_mat(&spec.phi, pt).expect("constant");
        let mut fs = Vec::new();
        let mut ok = true;
        for (_, f, want) in &fields {
            let mut acc: NumMat = vec![vec![Quad::zero(); size]; size];
            for (v, m) in model.conn.a.iter() {
                let (Some(mv), Some(fv)) = (eval_mat(m, pt), pt.eval(&f.get(v))) else {
                    ok = false;
                    break;
                };
                for i in 0..size {
                    for j in 0..size {
                        acc[i][j] = acc[i][j].add(&mv[i][j].mul(&fv, p));
                    }
                }
            }
            fs.push((acc, eval_mat(want, pt).expect("constant or regular")));
        }
        if ok {
            samples.push(Sample { sos, phi, fields: fs });
        }
    }
    let points = samples.len();

    let mut lines = Vec::new();
    let chart_ok = crate::chart::chart_defect(spec).is_zero();
    'outer: for i in 0..size {
        for j in i..size {
            if lines.len() >= count {
                break 'outer;
            }
            let oracle = points > 0 && samples.iter().all(|s| s.sos[i][j] == s.phi[i][j]);
            lines.push(OracleLine { name: format!("(S Ω S^T)_{}{} = Φ_{}{}", i + 1, j + 1, i + 1, j + 1), canonical: chart_ok, oracle });
        }
    }
    'fields: for (k, (name, f, want)) in fields.iter().enumerate() {
        let got = model.contract(f);
        for i in 0..size {
            for j in 0..size {
                if lines.len() >= count {
                    break 'fields;
                }
                let canonical = got.get(i, j) == want.get(i, j);
                let oracle = points > 0 && samples.iter().all(|s| s.fields[k].0[i][j] == s.fields[k].1[i][j]);
                lines.push(OracleLine { name: format!("A({})_{}{}", name, i + 1, j + 1), canonical, oracle });
            }
        }
    }
    Ok(OracleReport { n: model.n(), points, lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dworkgeo::CMode;
    use crate::model::model;

    #[test]
    fn agree_up_to_six() {
        for n in 1..=6 {
            let m = model(n, &CMode::Matched).unwrap();
            let rep = oracle_crosscheck(&m, 50, 1).unwrap();
            let size = n + 1;
            let total = size * (size + 1) / 2 + (1 + m.basis().unwrap().len()) * size * size;
            assert_eq!(rep.lines.len(), total.min(50));
            assert_eq!(rep.points, ORACLE_POINTS);
            assert!(rep.all_agree(), "n={}: {:?}", n, rep.lines.iter().find(|l| !(l.canonical && l.oracle)));
        }
    }

    #[test]
    fn symbolic_c_agrees() {
        let m = model(2, &CMode::Symbolic).unwrap();
        assert!(oracle_crosscheck(&m, 50, 2).unwrap().all_agree());
    }
}

//! Yukawa couplings, the modular vector field R, the basis fields R_{g_ab},
//! sl2 triples, weights and polynomial truncation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use symcore::{MatF, Poly, QuotientCtx, Rat, RatFn, Var};

use crate::chart::ChartSpec;
use crate::connection::{Connection, VecField};
use crate::error::{DworkError, Result};
use crate::liealg::bracket;
use crate::model::Model;

/// Y_1 .. Y_{n-2}; Y_0 = 1 and Y_{n-1} = -1 by convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YukawaSet {
    pub n: usize,
    pub ys: Vec<RatFn>,
}

impl YukawaSet {
    /// Y_i with the boundary conventions; None outside 0..=n-1.
    pub fn get(&self, i: isize) -> Option<RatFn> {
        let n = self.n as isize;
        if i == 0 {
            return Some(RatFn::one());
        }
        if i == n - 1 && n >= 2 {
            return Some(RatFn::from_i64(-1));
        }
        if i >= 1 && i <= n - 2 {
            return Some(self.ys[(i - 1) as usize].clone());
        }
        None
    }

    /// Banded matrix: 1 at (1,2), Y_i at (i+1,i+2), -1 at (n,n+1).
    pub fn matrix(&self) -> MatF {
        let n = self.n;
        let mut y = MatF::zero(n + 1, n + 1);
        y.set(0, 1, RatFn::one());
        for (i, yi) in self.ys.iter().enumerate() {
            y.set(i + 1, i + 2, yi.clone());
        }
        if n >= 2 {
            y.set(n - 1, n, RatFn::from_i64(-1));
        }
        y
    }
}

/// s22 s_{i+1,i+1} / s_{i+2,i+2}
fn yukawa_ratio(spec: &ChartSpec, i: usize) -> Result<RatFn> {
    let ctx = &spec.ctx;
    let num = ctx.mul(spec.s_entry(2, 2), spec.s_entry(i + 1, i + 1));
    Ok(ctx.div(&num, spec.s_entry(i + 2, i + 2))?)
}

pub fn yukawa(spec: &ChartSpec) -> Result<YukawaSet> {
    let ctx = &spec.ctx;
    let n = spec.params.n;
    if n < 3 {
        return Ok(YukawaSet { n, ys: Vec::new() });
    }
    let mut ys: BTreeMap<usize, RatFn> = BTreeMap::new();
    let last = if n % 2 == 1 { (n - 3) / 2 } else { (n - 2) / 2 };
    for i in 1..=last {
        let y = yukawa_ratio(spec, i)?;
        ys.insert(n - 1 - i, ctx.neg(&y));
        ys.insert(i, y);
    }
    if n % 2 == 1 {
        let m = spec.params.m;
        let sign = if ((3 * n + 3) / 2) % 2 == 0 { 1 } else { -1 };
        let k = Rat::from_integer(BigInt::from(sign) * BigInt::from(n + 2).pow(n as u32));
        let smm = spec.s_entry(m, m);
        let num = ctx.mul(&ctx.scale(&spec.params.c, &k), &ctx.mul(spec.s_entry(2, 2), &ctx.mul(smm, smm)));
        let disc = ctx.reduce(&spec.params.disc());
        ys.insert((n - 1) / 2, ctx.div(&num, &disc)?);
    }
    Ok(YukawaSet { n, ys: (1..=n - 2).map(|i| ys[&i].clone()).collect() })
}

/// Y Phi + Phi Y^T
pub fn yukawa_defect(y: &MatF, phi: &MatF, ctx: &QuotientCtx) -> MatF {
    y.mul(phi, ctx).add(&phi.mul(&y.transpose(), ctx), ctx)
}

pub(crate) fn modular_vf_with(conn: &Connection) -> Result<(VecField, YukawaSet)> {
    let spec = &conn.spec;
    let ys = yukawa(spec)?;
    let y = ys.matrix();
    if let Some((i, j, e)) = yukawa_defect(&y, &spec.phi, &spec.ctx).first_nonzero() {
        return Err(DworkError::NoSuchField(format!("Y Phi + Phi Y^T nonzero at ({},{}): {}", i + 1, j + 1, e)));
    }
    Ok((conn.solve_vf(&y)?, ys))
}

/// The modular vector field R and its Yukawa couplings.
pub fn modular_vf(model: &Model) -> Result<(VecField, YukawaSet)> {
    model.modular().cloned()
}

/// R_{g_ab} over the canonical index set.
pub fn basis_vf(model: &Model) -> Result<BTreeMap<(usize, usize), VecField>> {
    model.basis().cloned()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: VecField,
    pub f: VecField,
    pub hf: VecField,
}

/// (R, F, Hf) with the case split n = 1, n = 2, n >= 3; relations checked.
pub fn sl2_triple(model: &Model) -> Result<Sl2Triple> {
    let ctx = model.ctx();
    let n = model.n();
    let r = model.r()?.clone();
    let g11 = model.basis_field(1, 1)?;
    let g12 = model.basis_field(1, 2)?;
    let (f, hf) = match n {
        1 => (g12.clone(), g11.neg(ctx)),
        2 => {
            let two = RatFn::from_i64(2);
            (g12.scale(&two, ctx), g11.scale(&two, ctx).neg(ctx))
        }
        _ => (g12.clone(), model.basis_field(2, 2)?.sub(g11, ctx)),
    };
    let t = Sl2Triple { e: r, f, hf };
    let two = RatFn::from_i64(2);
    if bracket(&t.e, &t.f, ctx) != t.hf {
        return Err(DworkError::Sl2Violation("[R,F] = Hf".into()));
    }
    if bracket(&t.hf, &t.e, ctx) != t.e.scale(&two, ctx) {
        return Err(DworkError::Sl2Violation("[Hf,R] = 2R".into()));
    }
    if bracket(&t.hf, &t.f, ctx) != t.f.scale(&two, ctx).neg(ctx) {
        return Err(DworkError::Sl2Violation("[Hf,F] = -2F".into()));
    }
    Ok(t)
}

pub type Weights = BTreeMap<Var, i64>;

/// Reads w off Hf = sum w_i t_i d/dt_i.
pub fn weights_of(hf: &VecField, vars: &[Var]) -> Result<Weights> {
    let mut w = Weights::new();
    for &v in vars {
        let c = hf.get(v);
        if c.is_zero() {
            w.insert(v, 0);
            continue;
        }
        let k = c.num().div_exact(&symcore::ZPoly::var(v)).and_then(|q| q.as_constant());
        match (k, c.den().as_constant()) {
            (Some(k), Some(d)) if (&k % &d) == BigInt::from(0) => {
                let q: BigInt = k / d;
                w.insert(v, i64::try_from(q).map_err(|_| DworkError::Sl2Violation("weight overflow".into()))?);
            }
            _ => return Err(DworkError::Sl2Violation(format!("Hf component on {} is {}, not a multiple of it", v, c))),
        }
    }
    Ok(w)
}

/// Weighted degree of f when numerator and denominator are both
/// quasi-homogeneous; c has weight 0.
pub fn weighted_degree(f: &RatFn, w: &Weights) -> Option<i64> {
    let wf = |v: Var| if v == Var::C { 0 } else { w.get(&v).copied().unwrap_or(0) };
    let (nlo, nhi) = f.num().weighted_degree_range(&wf)?;
    let (dlo, dhi) = f.den().weighted_degree_range(&wf)?;
    if nlo != nhi || dlo != dhi {
        return None;
    }
    Some(nhi - dhi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLine {
    pub var: Var,
    pub weight: i64,
    /// degree of the R component, None if not quasi-homogeneous or zero
    pub r_degree: Option<i64>,
    pub r_ok: bool,
    pub f_degree: Option<i64>,
    pub f_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub lines: Vec<DegreeLine>,
}

impl DegreeReport {
    pub fn all_ok(&self) -> bool {
        self.lines.iter().all(|l| l.r_ok && l.f_ok)
    }
}

/// Checks deg R(t_i) = w_i + 2 and deg F(t_i) = w_i - 2 (zero components pass).
pub fn degree_report(r: &VecField, f: &VecField, w: &Weights) -> DegreeReport {
    let lines = w
        .iter()
        .map(|(&v, &wi)| {
            let rc = r.get(v);
            let fc = f.get(v);
            let rd = weighted_degree(&rc, w);
            let fd = weighted_degree(&fc, w);
            DegreeLine {
                var: v,
                weight: wi,
                r_degree: if rc.is_zero() { None } else { rd },
                r_ok: rc.is_zero() || rd == Some(wi + 2),
                f_degree: if fc.is_zero() { None } else { fd },
                f_ok: fc.is_zero() || fd == Some(wi - 2),
            }
        })
        .collect();
    DegreeReport { lines }
}

/// Weights and the quasi-homogeneity report.
pub fn weights(model: &Model) -> Result<(Weights, DegreeReport)> {
    let t = sl2_triple(model)?;
    let w = weights_of(&t.hf, &model.spec().vars())?;
    let rep = degree_report(&t.e, &t.f, &w);
    Ok((w, rep))
}

/// Polynomial part of each component: numerator = q * denominator + r, keep q.
pub fn truncate_poly(v: &VecField, ctx: &QuotientCtx) -> VecField {
    v.map(|f| {
        if f.is_polynomial() {
            return f.clone();
        }
        let (num, den) = f.rat_parts();
        let (q, _) = num.div_rem(&den);
        ctx.from_poly(&q)
    })
}

/// Truncation of a single function, exposed for reports.
pub fn poly_part(f: &RatFn, ctx: &QuotientCtx) -> RatFn {
    let (num, den) = f.rat_parts();
    let (q, _): (Poly<Rat>, Poly<Rat>) = num.div_rem(&den);
    ctx.from_poly(&q)
}

//! The upper-triangular group G preserving Phi: Lie algebra basis g_ab,
//! one-parameter subgroups, the decomposition g = G_1 ... G_{d-1}, and the
//! right action on the chart.

use std::collections::BTreeMap;

use symcore::{rat, MatF, QuotientCtx, RatFn, Var};

use crate::chart::ChartSpec;
use crate::model::Model;
use crate::connection::VecField;
use crate::dworkgeo::phi_matrix;
use crate::error::{DworkError, Result};

/// A canonical basis element g_ab of Lie(G).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieGen {
    pub a: usize,
    pub b: usize,
    pub mat: MatF,
}

fn half(n: usize) -> usize {
    if n % 2 == 1 {
        (n + 1) / 2
    } else {
        n / 2
    }
}

/// (a,b) with 1 <= a <= m, a <= b <= 2m+1-a, in lexicographic order.
pub fn lie_indices(n: usize) -> Vec<(usize, usize)> {
    let m = half(n);
    (1..=m).flat_map(|a| (a..=2 * m + 1 - a).map(move |b| (a, b))).collect()
}

/// g^T Phi + Phi g
pub fn lie_defect(g: &MatF, phi: &MatF) -> MatF {
    let ctx = QuotientCtx::plain();
    g.transpose().mul(phi, &ctx).add(&phi.mul(g, &ctx), &ctx)
}

pub fn lie_gen(n: usize, a: usize, b: usize) -> Result<LieGen> {
    let m = half(n);
    if a < 1 || a > m || b < a || b > 2 * m + 1 - a {
        return Err(DworkError::IndexOutOfRange(format!("g_{}{} for n={}", a, b, n)));
    }
    let size = n + 1;
    let mut g = MatF::zero(size, size);
    let (p, q) = (n + 2 - b, n + 2 - a);
    let partner = if n % 2 == 1 && b > m { 1 } else { -1 };
    g.set(p - 1, q - 1, RatFn::from_i64(partner));
    // when the two positions coincide the single entry is 1
    g.set(a - 1, b - 1, RatFn::one());
    assert!(lie_defect(&g, &phi_matrix(n)).is_zero(), "g_{}{} not in Lie(G)", a, b);
    Ok(LieGen { a, b, mat: g })
}

/// One-parameter subgroup G_k, k = 1..d-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subgroup {
    /// (i,i) -> 1/p, (n+2-i, n+2-i) -> p
    Mult(usize),
    /// unipotent with parameter at (n+2-j, n+2-i)
    Add(usize, usize),
}

pub fn subgroups(n: usize) -> Vec<Subgroup> {
    let m = half(n);
    let mut out: Vec<Subgroup> = (1..=m).map(Subgroup::Mult).collect();
    for i in 1..=m {
        let jmax = if n % 2 == 1 { n + 2 - i } else { n + 1 - i };
        for j in i + 1..=jmax {
            out.push(Subgroup::Add(i, j));
        }
    }
    out
}

/// Matrix of one subgroup at parameter p.
pub fn subgroup_matrix(n: usize, sg: &Subgroup, p: &RatFn, ctx: &QuotientCtx) -> Result<MatF> {
    let size = n + 1;
    let m = half(n);
    let mut g = MatF::identity(size);
    match *sg {
        Subgroup::Mult(i) => {
            g.set(i - 1, i - 1, ctx.inv(p)?);
            g.set(n + 1 - i, n + 1 - i, p.clone());
        }
        Subgroup::Add(i, j) => {
            let (r, c) = (n + 2 - j, n + 2 - i);
            g.set(r - 1, c - 1, p.clone());
            if (r, c) != (i, j) {
                let v = if n % 2 == 1 && j > m { p.clone() } else { ctx.neg(p) };
                g.set(i - 1, j - 1, v);
            }
            if n % 2 == 0 && j == (n + 2) / 2 {
                let sq = ctx.mul(p, p);
                g.set(i - 1, n + 1 - i, ctx.scale(&sq, &rat(-1, 2)));
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElem {
    pub params: Vec<RatFn>,
    pub mat: MatF,
}

/// g^T Phi g - Phi
pub fn group_defect(g: &MatF, phi: &MatF, ctx: &QuotientCtx) -> MatF {
    g.transpose().mul(phi, ctx).mul(g, ctx).sub(phi, ctx)
}

/// g = G_1(p_1) ... G_{d-1}(p_{d-1}).
pub fn group_elem(n: usize, params: &[RatFn]) -> Result<GroupElem> {
    let ctx = QuotientCtx::plain();
    let sgs = subgroups(n);
    if params.len() != sgs.len() {
        return Err(DworkError::IndexOutOfRange(format!("{} parameters for {} subgroups", params.len(), sgs.len())));
    }
    let mut g = MatF::identity(n + 1);
    for (k, (sg, p)) in sgs.iter().zip(params).enumerate() {
        if matches!(sg, Subgroup::Mult(_)) && p.is_zero() {
            return Err(DworkError::ZeroScalar(k + 1));
        }
        g = g.mul(&subgroup_matrix(n, sg, p, &ctx)?, &ctx);
    }
    if let Some((i, j, e)) = group_defect(&g, &phi_matrix(n), &ctx).first_nonzero() {
        panic!("g^T Phi g != Phi at ({},{}): {}", i + 1, j + 1, e);
    }
    Ok(GroupElem { params: params.to_vec(), mat: g })
}

/// Fully symbolic element with parameters from `var` (e.g. `Var::g`).
pub fn symbolic_elem(n: usize, var: fn(usize) -> Var) -> Result<GroupElem> {
    let k = subgroups(n).len();
    group_elem(n, &(1..=k).map(|i| RatFn::var(var(i))).collect::<Vec<_>>())
}

/// Identity parameters: 1 for multiplicative, 0 for additive subgroups.
pub fn identity_params(n: usize) -> Vec<RatFn> {
    subgroups(n)
        .iter()
        .map(|s| if matches!(s, Subgroup::Mult(_)) { RatFn::one() } else { RatFn::zero() })
        .collect()
}

/// Inverse of the decomposition: matrix -> parameters.
pub fn recover(n: usize, g: &MatF) -> Result<Vec<RatFn>> {
    let ctx = QuotientCtx::plain();
    let sgs = subgroups(n);
    let mut params = Vec::with_capacity(sgs.len());
    let mut rest = g.clone();
    for sg in &sgs {
        match *sg {
            Subgroup::Mult(i) => params.push(ctx.inv(g.get(i - 1, i - 1))?),
            Subgroup::Add(..) => break,
        }
    }
    for (sg, p) in sgs.iter().zip(params.clone()) {
        let inv = subgroup_matrix(n, sg, &ctx.inv(&p)?, &ctx)?;
        rest = inv.mul(&rest, &ctx);
    }
    for sg in sgs.iter().filter(|s| matches!(s, Subgroup::Add(..))) {
        let Subgroup::Add(i, j) = *sg else { unreachable!() };
        let p = rest.get(n + 1 - j, n + 1 - i).clone();
        let inv = subgroup_matrix(n, sg, &ctx.neg(&p), &ctx)?;
        rest = inv.mul(&rest, &ctx);
        params.push(p);
    }
    if rest != MatF::identity(n + 1) {
        return Err(DworkError::ActionShapeViolation("matrix is not a product of the subgroups".into()));
    }
    Ok(params)
}

/// A chart point: coordinate -> value.
pub type Point = BTreeMap<Var, RatFn>;

pub fn generic_point(spec: &ChartSpec) -> Point {
    spec.vars().into_iter().map(|v| (v, RatFn::var(v))).collect()
}

fn eval_at(f: &RatFn, pt: &Point, ctx: &QuotientCtx) -> Result<RatFn> {
    Ok(ctx.substitute(f, &|v| pt.get(&v).cloned())?)
}

/// t . g: reads the new coordinates off S' = g^T S diag(k, ..., k^{n+1}),
/// k = 1/g_11, and checks S' has chart shape.
pub fn act(spec: &ChartSpec, pt: &Point, g: &MatF) -> Result<Point> {
    let ctx = &spec.ctx;
    let n = spec.params.n;
    let size = n + 1;
    let s = spec.s.map(|f| eval_at(f, pt, ctx).expect("point avoids the inverted locus"));
    let k = ctx.inv(g.get(0, 0))?;
    let mut dg = MatF::zero(size, size);
    let mut kp = RatFn::one();
    for i in 0..size {
        kp = ctx.mul(&kp, &k);
        dg.set(i, i, kp.clone());
    }
    let g = g.map(|f| ctx.reduce(f));
    let s2 = g.transpose().mul(&s, ctx).mul(&dg, ctx);
    if !s2.get(0, 0).is_one() {
        return Err(DworkError::ActionShapeViolation(format!("s'11 = {}", s2.get(0, 0))));
    }
    if !s2.is_lower_triangular() {
        return Err(DworkError::ActionShapeViolation("S' is not lower triangular".into()));
    }
    let mut out = Point::new();
    let x = spec.params.t1();
    let y = spec.params.tb();
    out.insert(x, ctx.mul(&pt[&x], &k));
    out.insert(y, ctx.mul(&pt[&y], &ctx.pow(&k, (n + 2) as i32)?));
    for (v, (i, j)) in spec.slot_map() {
        out.insert(*v, s2.get(i - 1, j - 1).clone());
    }
    for (pos, f) in &spec.dependent_exprs {
        let want = eval_at(f, &out, ctx)?;
        if !ctx.sub(&want, s2.get(pos.0 - 1, pos.1 - 1)).is_zero() {
            return Err(DworkError::ActionShapeViolation(format!("dependent s{}{} not preserved", pos.0, pos.1)));
        }
    }
    if let Some((pivot, p)) = &spec.relation {
        let lhs = ctx.mul(&out[pivot], &out[pivot]);
        let rhs = eval_at(p, &out, ctx)?;
        if !ctx.sub(&lhs, &rhs).is_zero() {
            return Err(DworkError::ActionShapeViolation("relation not preserved".into()));
        }
    }
    Ok(out)
}

/// Derivative of t . G_i(p) at the identity parameter, as a field.
pub fn infinitesimal(spec: &ChartSpec, i: usize) -> Result<VecField> {
    let n = spec.params.n;
    let ctx = &spec.ctx;
    let sgs = subgroups(n);
    if i < 1 || i > sgs.len() {
        return Err(DworkError::IndexOutOfRange(format!("subgroup {} for n={}", i, n)));
    }
    // the other parameters are constants, so one variable serves every i
    let eps = Var::g(1);
    let mut params = identity_params(n);
    params[i - 1] = RatFn::var(eps);
    let g = group_elem(n, &params)?;
    let out = act(spec, &generic_point(spec), &g.mat)?;
    let at = if matches!(sgs[i - 1], Subgroup::Mult(_)) { RatFn::one() } else { RatFn::zero() };
    let mut h = VecField::zero();
    for (v, f) in out {
        let d = ctx.derive(&f, eps);
        h.set(v, ctx.substitute(&d, &|w| if w == eps { Some(at.clone()) } else { None })?);
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfMatch {
    pub subgroup: usize,
    /// every (a, b, sign) with derivative = sign * R_{g_ab}
    pub matches: Vec<(usize, usize, i64)>,
}

impl InfMatch {
    pub fn unique(&self) -> Option<(usize, usize, i64)> {
        match self.matches.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }
}

/// For each subgroup, the basis fields equal to plus or minus its
/// infinitesimal action.
pub fn infinitesimal_matches(model: &Model) -> Result<Vec<InfMatch>> {
    let spec = model.spec();
    let ctx = model.ctx();
    let basis = model.basis()?;
    (1..=subgroups(model.n()).len())
        .map(|i| {
            let v = infinitesimal(spec, i)?;
            let mut matches = Vec::new();
            for (&(a, b), r) in basis {
                if v == *r {
                    matches.push((a, b, 1));
                } else if v == r.neg(ctx) {
                    matches.push((a, b, -1));
                }
            }
            Ok(InfMatch { subgroup: i, matches })
        })
        .collect()
}

/// Subgroup counts (multiplicative, additive).
pub fn subgroup_counts(n: usize) -> (usize, usize) {
    let sgs = subgroups(n);
    let mult = sgs.iter().filter(|s| matches!(s, Subgroup::Mult(_))).count();
    (mult, sgs.len() - mult)
}

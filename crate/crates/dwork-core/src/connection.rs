//! Gauss-Manin connection on the chart, contraction with vector fields and
//! the vector-field solver.

use std::collections::BTreeMap;
use std::fmt;

use symcore::{mat_inverse, solve_linear, MatF, QuotientCtx, RatFn, Var};

use crate::chart::{ChartSpec, Pos};
use crate::dworkgeo::{base_connection, OneFormMat};
use crate::error::{DworkError, Result};

/// A derivation sum_v V(v) d/dv on the chart; zero components are omitted.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct VecField {
    comps: BTreeMap<Var, RatFn>,
}

impl VecField {
    pub fn zero() -> VecField {
        VecField::default()
    }

    pub fn from_map(comps: BTreeMap<Var, RatFn>) -> VecField {
        let mut v = VecField::zero();
        for (k, f) in comps {
            v.set(k, f);
        }
        v
    }

    /// d/dv
    pub fn coordinate(v: Var) -> VecField {
        let mut f = VecField::zero();
        f.set(v, RatFn::one());
        f
    }

    pub fn get(&self, v: Var) -> RatFn {
        self.comps.get(&v).cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn set(&mut self, v: Var, f: RatFn) {
        if f.is_zero() {
            self.comps.remove(&v);
        } else {
            self.comps.insert(v, f);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &RatFn)> {
        self.comps.iter().map(|(v, f)| (*v, f))
    }

    pub fn support(&self) -> Vec<Var> {
        self.comps.keys().copied().collect()
    }

    pub fn add(&self, o: &VecField, ctx: &QuotientCtx) -> VecField {
        let mut out = self.clone();
        for (v, f) in o.iter() {
            out.set(v, ctx.add(&self.get(v), f));
        }
        out
    }

    pub fn sub(&self, o: &VecField, ctx: &QuotientCtx) -> VecField {
        self.add(&o.neg(ctx), ctx)
    }

    pub fn neg(&self, ctx: &QuotientCtx) -> VecField {
        VecField::from_map(self.comps.iter().map(|(v, f)| (*v, ctx.neg(f))).collect())
    }

    pub fn scale(&self, k: &RatFn, ctx: &QuotientCtx) -> VecField {
        VecField::from_map(self.comps.iter().map(|(v, f)| (*v, ctx.mul(k, f))).collect())
    }

    /// V(f) = sum_v V(v) df/dv
    pub fn apply(&self, f: &RatFn, ctx: &QuotientCtx) -> RatFn {
        let mut acc = RatFn::zero();
        for (v, c) in self.iter() {
            if !f.contains_var(v) {
                continue;
            }
            acc = ctx.add(&acc, &ctx.mul(c, &ctx.derive(f, v)));
        }
        acc
    }

    pub fn map(&self, f: impl Fn(&RatFn) -> RatFn) -> VecField {
        VecField::from_map(self.comps.iter().map(|(v, c)| (*v, f(c))).collect())
    }
}

impl fmt::Display for VecField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.comps.iter().map(|(v, c)| format!("({})*d/d{}", c, v)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for VecField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A = (dS + S B) S^{-1}, one matrix per chart variable.
pub fn full_connection(spec: &ChartSpec, b: &OneFormMat) -> Result<OneFormMat> {
    let ctx = &spec.ctx;
    let s = &spec.s;
    let sinv = mat_inverse(s, ctx)?;
    let mut a = OneFormMat::new(spec.params.size());
    for v in spec.vars() {
        let mut m = s.derive(v, ctx);
        if let Some(bv) = b.get(v) {
            let bv = bv.map(|f| ctx.reduce(f));
            m = m.add(&s.mul(&bv, ctx), ctx);
        }
        a.insert(v, m.mul(&sinv, ctx));
    }
    Ok(a)
}

/// A_H = sum_v H(v) A_v
pub fn contract(a: &OneFormMat, h: &VecField, ctx: &QuotientCtx) -> MatF {
    let size = a.size();
    let mut out = MatF::zero(size, size);
    for (v, c) in h.iter() {
        if let Some(av) = a.get(v) {
            out = out.add(&av.scale(c, ctx), ctx);
        }
    }
    out
}

/// Chart data plus the connection and derivative tables the solver needs.
#[derive(Debug)]
pub struct Connection {
    pub spec: ChartSpec,
    pub b: OneFormMat,
    pub a: OneFormMat,
    dep_grad: BTreeMap<Pos, Vec<(Var, RatFn)>>,
}

impl Connection {
    pub fn new(spec: ChartSpec) -> Result<Connection> {
        let b = base_connection(spec.params.n);
        let a = full_connection(&spec, &b)?;
        let ctx = &spec.ctx;
        let mut dep_grad = BTreeMap::new();
        for (pos, f) in &spec.dependent_exprs {
            let g: Vec<(Var, RatFn)> =
                f.vars().into_iter().filter(|v| *v != Var::C).map(|v| (v, ctx.derive(f, v))).collect();
            dep_grad.insert(*pos, g);
        }
        Ok(Connection { spec, b, a, dep_grad })
    }

    pub fn ctx(&self) -> &QuotientCtx {
        &self.spec.ctx
    }

    pub fn contract(&self, h: &VecField) -> MatF {
        contract(&self.a, h, self.ctx())
    }

    /// H(f) for a dependent entry using the cached gradient.
    fn apply_dep(&self, h: &VecField, pos: Pos) -> RatFn {
        let ctx = self.ctx();
        let mut acc = RatFn::zero();
        for (v, g) in &self.dep_grad[&pos] {
            let c = h.get(*v);
            if !c.is_zero() {
                acc = ctx.add(&acc, &ctx.mul(&c, g));
            }
        }
        acc
    }

    /// H(t_D^2 - P), which must vanish modulo the relation.
    pub fn relation_defect(&self, h: &VecField) -> Option<RatFn> {
        let (pivot, p) = self.spec.relation.as_ref()?;
        let ctx = self.ctx();
        let lhs = ctx.mul(&ctx.scale(&RatFn::var(*pivot), &symcore::rat_int(2)), &h.get(*pivot));
        let rhs = h.apply(p, &QuotientCtx::plain());
        Some(ctx.sub(&lhs, &ctx.reduce(&rhs)))
    }

    /// The unique field H with A_H = target, or NoSuchField.
    pub fn solve_vf(&self, target: &MatF) -> Result<VecField> {
        let ctx = self.ctx();
        let spec = &self.spec;
        let size = spec.params.size();
        if target.rows() != size || target.cols() != size {
            return Err(DworkError::NoSuchField(format!("target is {}x{}", target.rows(), target.cols())));
        }
        let x = spec.params.t1();
        let y = spec.params.tb();
        let bx = self.b.component(x).map(|f| ctx.reduce(f));
        let by = self.b.component(y).map(|f| ctx.reduce(f));
        let s = &spec.s;
        let ms = target.mul(s, ctx);
        // S has first row (1, 0, ..., 0), so (S B)_{1j} = B_{1j}
        let sys = MatF::from_rows(vec![
            vec![bx.get(0, 0).clone(), by.get(0, 0).clone()],
            vec![bx.get(0, 1).clone(), by.get(0, 1).clone()],
        ]);
        let sol = solve_linear(&sys, &[ms.get(0, 0).clone(), ms.get(0, 1).clone()], ctx)?.unique()?;
        let (ta, tb) = (sol[0].clone(), sol[1].clone());
        let bh = bx.scale(&ta, ctx).add(&by.scale(&tb, ctx), ctx);
        let e = ms.sub(&s.mul(&bh, ctx), ctx);

        let mut h = VecField::zero();
        h.set(x, ta);
        h.set(y, tb);
        for (v, (i, j)) in spec.slot_map() {
            h.set(*v, e.get(i - 1, j - 1).clone());
        }
        for i in 0..size {
            for j in i + 1..size {
                if !e.get(i, j).is_zero() {
                    return Err(DworkError::NoSuchField(format!(
                        "upper entry ({},{}) of Sdot is {}",
                        i + 1,
                        j + 1,
                        e.get(i, j)
                    )));
                }
            }
        }
        if !e.get(0, 0).is_zero() {
            return Err(DworkError::NoSuchField(format!("s11 derivative is {}", e.get(0, 0))));
        }
        for pos in spec.dependent_exprs.keys() {
            let want = self.apply_dep(&h, *pos);
            let got = e.get(pos.0 - 1, pos.1 - 1);
            if ctx.sub(&want, got).is_zero() {
                continue;
            }
            return Err(DworkError::NoSuchField(format!(
                "dependent s{}{} is not transported: {} vs {}",
                pos.0, pos.1, got, want
            )));
        }
        if let Some(r) = self.relation_defect(&h) {
            if !r.is_zero() {
                return Err(DworkError::NoSuchField(format!("not tangent to the relation: {}", r)));
            }
        }
        Ok(h)
    }

    /// Checks A Phi + Phi A^T = 0 as a 1-form on T. For even n the ambient
    /// forms are taken modulo d(t_D^2 - P), so the defect must be a matrix
    /// multiple of that differential. Returns the first failing component.
    pub fn phi_defect(&self) -> Option<(Var, usize, usize)> {
        let ctx = self.ctx();
        let phi = &self.spec.phi;
        let mut defects = BTreeMap::new();
        for v in self.spec.vars() {
            let av = self.a.component(v);
            defects.insert(v, av.mul(phi, ctx).add(&phi.mul(&av.transpose(), ctx), ctx));
        }
        let (pivot, p) = match &self.spec.relation {
            None => {
                return defects.iter().find_map(|(v, d)| d.first_nonzero().map(|(i, j, _)| (*v, i + 1, j + 1)));
            }
            Some(r) => r,
        };
        let two_t = ctx.scale(&RatFn::var(*pivot), &symcore::rat_int(2));
        let lambda = defects[pivot].map(|f| ctx.div(f, &two_t).unwrap());
        for (v, d) in &defects {
            if v == pivot {
                continue;
            }
            let dp = ctx.reduce(&ctx.neg(&QuotientCtx::plain().derive(p, *v)));
            let expect = lambda.scale(&dp, ctx);
            if let Some((i, j, _)) = d.sub(&expect, ctx).first_nonzero() {
                return Some((*v, i + 1, j + 1));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::solve_dependents;
    use crate::dworkgeo::{CMode, DworkParams};
    use symcore::parse_ratfn;

    fn conn(n: usize, mode: CMode) -> Connection {
        Connection::new(solve_dependents(&DworkParams::new(n, mode)).unwrap()).unwrap()
    }

    fn field(pairs: &[(usize, &str)], ctx: &QuotientCtx) -> VecField {
        VecField::from_map(pairs.iter().map(|(i, s)| (Var::t(*i), parse_ratfn(s, ctx).unwrap())).collect())
    }

    #[test]
    fn contract_is_linear() {
        let c = conn(1, CMode::Symbolic);
        let ctx = c.ctx();
        assert!(c.contract(&VecField::zero()).is_zero());
        let h = field(&[(1, "t2"), (2, "t1*t3"), (3, "1")], ctx);
        let t1 = RatFn::var(Var::t(1));
        assert_eq!(c.contract(&h.scale(&t1, ctx)), c.contract(&h).scale(&t1, ctx));
    }

    #[test]
    fn phi_compatibility() {
        for n in 1..=4 {
            assert_eq!(conn(n, CMode::Symbolic).phi_defect(), None, "n={}", n);
        }
    }

    #[test]
    fn solve_zero_and_g11() {
        for n in 1..=2 {
            let c = conn(n, CMode::Symbolic);
            assert!(c.solve_vf(&MatF::zero(n + 1, n + 1)).unwrap().is_zero());
        }
        let c = conn(1, CMode::Matched);
        let mut g11 = MatF::zero(2, 2);
        g11.set(0, 0, RatFn::one());
        g11.set(1, 1, RatFn::from_i64(-1));
        let h = c.solve_vf(&g11.transpose()).unwrap();
        assert_eq!(h, field(&[(1, "-t1"), (2, "-2*t2"), (3, "-3*t3")], c.ctx()));
        assert_eq!(c.contract(&h), g11.transpose());
    }

    #[test]
    fn degenerate_slice() {
        // S frozen to the identity: dS = 0, so A_{t1} = B_{t1}
        let c = conn(1, CMode::Symbolic);
        let mut spec = c.spec.clone();
        spec.s = MatF::identity(2);
        let a = full_connection(&spec, &c.b).unwrap();
        assert_eq!(a.component(Var::t(1)), c.b.component(Var::t(1)));
    }

    #[test]
    fn no_field_for_bad_target() {
        let c = conn(1, CMode::Symbolic);
        let mut t = MatF::zero(2, 2);
        t.set(0, 0, RatFn::one());
        assert!(matches!(c.solve_vf(&t), Err(DworkError::NoSuchField(_))));
    }
}

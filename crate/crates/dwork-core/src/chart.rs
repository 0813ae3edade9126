//! The enhanced-moduli chart: which entries of the lower-triangular S are
//! coordinates, the elimination of the remaining entries from
//! S Omega S^T = Phi, and the even-n quadratic relation.

use std::collections::BTreeMap;

use symcore::{MatF, QuotientCtx, RatFn, Var};

use crate::dworkgeo::{intersection_matrix, phi_matrix, DworkParams};
use crate::error::{DworkError, Result};

pub type Pos = (usize, usize);

/// Layout of S without the dependent expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartLayout {
    pub n: usize,
    /// chart variable -> 1-based position in S
    pub slot_map: BTreeMap<Var, Pos>,
    /// the even-n extra ambient variable sitting on the middle diagonal
    pub extra: Option<Var>,
    /// positions filled by elimination
    pub dependents: Vec<Pos>,
}

impl ChartLayout {
    pub fn var_at(&self, pos: Pos) -> Option<Var> {
        self.slot_map.iter().find(|(_, &p)| p == pos).map(|(v, _)| *v)
    }

    /// Independent slots, i.e. the slot map without the extra variable.
    pub fn independent(&self) -> impl Iterator<Item = (Var, Pos)> + '_ {
        self.slot_map.iter().filter(move |(v, _)| Some(**v) != self.extra).map(|(v, p)| (*v, *p))
    }
}

/// Position (i,j), j <= i, (i,j) != (1,1) is a coordinate when i+j <= n+2
/// (odd n) or i+j <= n+1 (even n); numbering is row-major skipping n+2, and
/// the even-n middle slot takes the smallest unused index.
pub fn chart_spec(n: usize) -> ChartLayout {
    let odd = n % 2 == 1;
    let lim = if odd { n + 2 } else { n + 1 };
    let size = n + 1;
    let mut slot_map = BTreeMap::new();
    let mut dependents = Vec::new();
    let mut idx = 2;
    let mut used = vec![1, n + 2];
    for i in 1..=size {
        for j in 1..=i {
            if (i, j) == (1, 1) {
                continue;
            }
            if i + j <= lim {
                if idx == n + 2 {
                    idx += 1;
                }
                slot_map.insert(Var::t(idx), (i, j));
                used.push(idx);
                idx += 1;
            } else {
                dependents.push((i, j));
            }
        }
    }
    let mut extra = None;
    if !odd {
        let mid = (n / 2 + 1, n / 2 + 1);
        let k = (1..).find(|k| !used.contains(k)).unwrap();
        slot_map.insert(Var::t(k), mid);
        dependents.retain(|&p| p != mid);
        extra = Some(Var::t(k));
    }
    ChartLayout { n, slot_map, extra, dependents }
}

/// Complete chart: layout plus dependent expressions and relation.
#[derive(Clone, Debug)]
pub struct ChartSpec {
    pub params: DworkParams,
    pub layout: ChartLayout,
    pub dependent_exprs: BTreeMap<Pos, RatFn>,
    /// (pivot, P) with pivot^2 = P
    pub relation: Option<(Var, RatFn)>,
    pub ctx: QuotientCtx,
    pub omega: MatF,
    pub phi: MatF,
    /// S with dependents substituted
    pub s: MatF,
}

impl ChartSpec {
    pub fn slot_map(&self) -> &BTreeMap<Var, Pos> {
        &self.layout.slot_map
    }

    pub fn vars(&self) -> Vec<Var> {
        self.params.chart_vars()
    }

    /// s_ij, 1-based.
    pub fn s_entry(&self, i: usize, j: usize) -> &RatFn {
        self.s.get(i - 1, j - 1)
    }

    /// Product of the diagonal coordinates s_22 .. s_mm.
    pub fn tcheck(&self) -> RatFn {
        let mut acc = RatFn::one();
        for i in 2..=self.params.m {
            acc = self.ctx.mul(&acc, self.s_entry(i, i));
        }
        acc
    }

    /// t_{n+2} (t_{n+2} - t1^{n+2}) tcheck, the locus made invertible on T.
    pub fn inverted_locus(&self) -> RatFn {
        let ctx = &self.ctx;
        let y = RatFn::var(self.params.tb());
        let f = ctx.mul(&y, &ctx.neg(&self.params.disc()));
        ctx.mul(&f, &self.tcheck())
    }

    /// Irreducible-ish factors whose powers may appear in denominators of
    /// regular functions.
    pub fn locus_factors(&self) -> Vec<RatFn> {
        let mut out = vec![RatFn::var(self.params.tb()), self.params.disc()];
        for i in 2..=self.params.m {
            out.push(self.s_entry(i, i).clone());
        }
        out
    }

    /// Regular on T: the denominator divides a power of the inverted locus
    /// (c counts as a constant).
    pub fn is_regular(&self, f: &RatFn) -> bool {
        let mut den = f.den().clone();
        for fac in self.locus_factors() {
            let fz = fac.num();
            if fz.is_constant() {
                continue;
            }
            while let Some(q) = den.div_exact(fz) {
                den = q;
            }
        }
        den.vars().iter().all(|v| *v == Var::C)
    }

    /// The closed form of the diagonal dependent s_{(n+2-i)(n+2-i)}.
    pub fn diagonal_formula(&self, i: usize) -> Result<RatFn> {
        let p = &self.params;
        let ctx = &self.ctx;
        let n = p.n;
        let sign = if (n + i + 1) % 2 == 0 { 1 } else { -1 };
        let k = ctx.scale(&p.c, &symcore::Rat::from_integer(num_bigint::BigInt::from(n + 2).pow(n as u32)));
        let lead = ctx.div(&RatFn::from_i64(sign), &k)?;
        let rest = ctx.div(&p.disc(), self.s_entry(i, i))?;
        Ok(ctx.mul(&lead, &rest))
    }
}

#[derive(Clone)]
enum Entry {
    Zero,
    Known(RatFn),
    Unknown(Pos),
}

/// Solves the dependent entries of S from S Omega S^T = Phi, equations
/// ordered by increasing i+j then i.
pub fn solve_dependents(params: &DworkParams) -> Result<ChartSpec> {
    let n = params.n;
    let size = params.size();
    let layout = chart_spec(n);
    let omega = intersection_matrix(params)?;
    let phi = phi_matrix(n);
    let mut ctx = QuotientCtx::plain();

    let mut ent: BTreeMap<Pos, Entry> = BTreeMap::new();
    for i in 1..=size {
        for j in 1..=size {
            ent.insert((i, j), if j > i { Entry::Zero } else { Entry::Unknown((i, j)) });
        }
    }
    ent.insert((1, 1), Entry::Known(RatFn::one()));
    for (v, p) in &layout.slot_map {
        ent.insert(*p, Entry::Known(RatFn::var(*v)));
    }
    let mut solved: BTreeMap<Pos, RatFn> = BTreeMap::new();
    let mut relation = None;

    let mut eqs: Vec<Pos> = (1..=size).flat_map(|i| (i..=size).map(move |j| (i, j))).collect();
    eqs.sort_by_key(|&(i, j)| (i + j, i));

    for (i, j) in eqs {
        let mut constant = RatFn::zero();
        let mut lin: BTreeMap<Pos, RatFn> = BTreeMap::new();
        let mut quad: BTreeMap<(Pos, Pos), RatFn> = BTreeMap::new();
        for k in 1..=i {
            for l in 1..=j {
                let w = omega.get(k - 1, l - 1);
                if w.is_zero() {
                    continue;
                }
                let a = &ent[&(i, k)];
                let b = &ent[&(j, l)];
                match (a, b) {
                    (Entry::Zero, _) | (_, Entry::Zero) => {}
                    (Entry::Known(x), Entry::Known(y)) => {
                        constant = ctx.add(&constant, &ctx.mul(&ctx.mul(x, w), y));
                    }
                    (Entry::Known(x), Entry::Unknown(u)) | (Entry::Unknown(u), Entry::Known(x)) => {
                        let e = lin.entry(*u).or_insert_with(RatFn::zero);
                        *e = ctx.add(e, &ctx.mul(x, w));
                    }
                    (Entry::Unknown(u), Entry::Unknown(v)) => {
                        let key = if u <= v { (*u, *v) } else { (*v, *u) };
                        let e = quad.entry(key).or_insert_with(RatFn::zero);
                        *e = ctx.add(e, w);
                    }
                }
            }
        }
        lin.retain(|_, c| !c.is_zero());
        quad.retain(|_, c| !c.is_zero());
        let stuck = |reason: String| DworkError::EliminationStuck { i, j, reason };
        if !quad.is_empty() {
            return Err(stuck("equation is quadratic in the unknowns".into()));
        }
        let rhs = ctx.sub(phi.get(i - 1, j - 1), &constant);
        match lin.len() {
            0 => {
                if rhs.is_zero() {
                    continue;
                }
                let mid = (params.m + 1, params.m + 1);
                let pivot = layout.extra;
                if !params.is_odd() && (i, j) == mid && relation.is_none() {
                    let pivot = pivot.unwrap();
                    let f = ctx.neg(&rhs);
                    let cs = f.num().coeffs_in(pivot);
                    if cs.len() != 3 || !cs[1].is_zero() {
                        return Err(stuck(format!("middle equation is not of the form a + b*{}^2", pivot)));
                    }
                    let rel_ctx = QuotientCtx::with_relation(pivot, cs[0].neg(), cs[2].clone())?;
                    relation = Some((pivot, rel_ctx.relation_rhs().unwrap()));
                    ctx = rel_ctx;
                    for v in solved.values_mut() {
                        *v = ctx.reduce(v);
                    }
                    for e in ent.values_mut() {
                        if let Entry::Known(f) = e {
                            *f = ctx.reduce(f);
                        }
                    }
                    continue;
                }
                return Err(stuck(format!("residue {} with no unknown left", rhs)));
            }
            1 => {
                let (u, coef) = lin.into_iter().next().unwrap();
                let val = ctx.div(&rhs, &coef)?;
                solved.insert(u, val.clone());
                ent.insert(u, Entry::Known(val));
            }
            _ => {
                let names: Vec<String> = lin.keys().map(|p| format!("s{}{}", p.0, p.1)).collect();
                return Err(stuck(format!("several unknowns {}", names.join(", "))));
            }
        }
    }
    if let Some(p) = layout.dependents.iter().find(|p| !solved.contains_key(p)) {
        return Err(DworkError::EliminationStuck { i: p.0, j: p.1, reason: "dependent never determined".into() });
    }
    if !params.is_odd() && relation.is_none() {
        return Err(DworkError::EliminationStuck {
            i: params.m + 1,
            j: params.m + 1,
            reason: "no relation produced".into(),
        });
    }
    let s = MatF::from_fn(size, size, |i, j| match &ent[&(i + 1, j + 1)] {
        Entry::Known(f) => f.clone(),
        _ => RatFn::zero(),
    });
    Ok(ChartSpec { params: params.clone(), layout, dependent_exprs: solved, relation, ctx, omega, phi, s })
}

/// S Omega S^T - Phi; zero for a consistent chart.
pub fn chart_defect(spec: &ChartSpec) -> MatF {
    let ctx = &spec.ctx;
    let om = spec.omega.map(|f| ctx.reduce(f));
    spec.s.mul(&om, ctx).mul(&spec.s.transpose(), ctx).sub(&spec.phi, ctx)
}

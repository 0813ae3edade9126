//! Randomized evaluation: an independent check of canonical equality.
//! Under a relation pivot^2 = P the pivot is sent to sqrt(P(point)), and
//! arithmetic happens in Q(sqrt(P(point))).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::ZPoly;
use crate::ratfn::{QuotientCtx, RatFn};
use crate::var::Var;
use crate::Rat;

/// Default number of sample points.
pub const ORACLE_POINTS: usize = 5;

/// a + b*sqrt(p).
#[derive(Clone, Debug, PartialEq)]
pub struct Quad {
    pub a: Rat,
    pub b: Rat,
}

impl Quad {
    pub fn zero() -> Quad {
        Quad { a: Rat::zero(), b: Rat::zero() }
    }
    pub fn from_rat(r: Rat) -> Quad {
        Quad { a: r, b: Rat::zero() }
    }
    fn from_int(c: &BigInt) -> Quad {
        Quad { a: Rat::from_integer(c.clone()), b: Rat::zero() }
    }
    pub fn add(&self, o: &Quad) -> Quad {
        Quad { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    pub fn sub(&self, o: &Quad) -> Quad {
        Quad { a: &self.a - &o.a, b: &self.b - &o.b }
    }
    pub fn mul(&self, o: &Quad, p: &Rat) -> Quad {
        Quad { a: &self.a * &o.a + &self.b * &o.b * p, b: &self.a * &o.b + &self.b * &o.a }
    }
    /// None for zero; a^2 - p b^2 is nonzero since p is not a square.
    pub fn div(&self, o: &Quad, p: &Rat) -> Option<Quad> {
        let norm = &o.a * &o.a - &o.b * &o.b * p;
        if norm.is_zero() {
            return None;
        }
        let conj = Quad { a: o.a.clone() / &norm, b: -o.b.clone() / &norm };
        Some(self.mul(&conj, p))
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

fn is_rational_square(r: &Rat) -> bool {
    if r.is_negative() {
        return false;
    }
    let sq = |k: &BigInt| {
        let s = k.sqrt();
        &s * &s == *k
    };
    sq(r.numer()) && sq(r.denom())
}

fn eval_poly(p: &ZPoly, point: &BTreeMap<Var, Rat>, pivot: Option<Var>, pval: &Rat) -> Quad {
    let mut acc = Quad { a: Rat::zero(), b: Rat::zero() };
    for (m, c) in p.terms() {
        let mut t = Quad::from_int(c);
        for (v, k) in m.vars() {
            let x = if Some(v) == pivot {
                Quad { a: Rat::zero(), b: Rat::from_integer(1.into()) }
            } else {
                Quad { a: point[&v].clone(), b: Rat::zero() }
            };
            for _ in 0..k {
                t = t.mul(&x, pval);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let mut n: i64 = 0;
    while n == 0 {
        n = rng.gen_range(-60..=60);
    }
    let d: i64 = rng.gen_range(1..=17);
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Agreement of `a` and `b` at `points` random rational points avoiding
/// their denominators.
pub fn oracle_equal(a: &RatFn, b: &RatFn, ctx: &QuotientCtx, seed: u64, points: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rel = ctx.relation();
    let pivot = rel.map(|r| r.pivot);
    let mut vars: BTreeSet<Var> = a.vars();
    vars.extend(b.vars());
    if let Some(r) = rel {
        vars.extend(r.p_num.vars());
        vars.extend(r.p_den.vars());
    }
    if let Some(p) = pivot {
        vars.remove(&p);
    }
    let mut checked = 0;
    let mut attempts = 0;
    while checked < points {
        attempts += 1;
        assert!(attempts < 1000, "oracle could not find a regular sample point");
        let point: BTreeMap<Var, Rat> = vars.iter().map(|&v| (v, random_rat(&mut rng))).collect();
        let pval = match rel {
            None => Rat::zero(),
            Some(r) => {
                let zero = Rat::zero();
                let n = eval_poly(&r.p_num, &point, None, &zero).a;
                let d = eval_poly(&r.p_den, &point, None, &zero).a;
                if d.is_zero() {
                    continue;
                }
                let p = n / d;
                if is_rational_square(&p) {
                    continue;
                }
                p
            }
        };
        let an = eval_poly(a.num(), &point, pivot, &pval);
        let ad = eval_poly(a.den(), &point, pivot, &pval);
        let bn = eval_poly(b.num(), &point, pivot, &pval);
        let bd = eval_poly(b.den(), &point, pivot, &pval);
        if ad.is_zero() || bd.is_zero() {
            continue;
        }
        if !an.mul(&bd, &pval).sub(&bn.mul(&ad, &pval)).is_zero() {
            return false;
        }
        checked += 1;
    }
    true
}

/// A random point for evaluating functions of a chart. Under a relation the
/// pivot is sqrt(P(point)) and values live in Q(sqrt(P(point))).
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub point: BTreeMap<Var, Rat>,
    pub pivot: Option<Var>,
    /// P at the point; zero without a relation
    pub p: Rat,
}

impl SamplePoint {
    /// Value of f, or None where its denominator vanishes.
    pub fn eval(&self, f: &RatFn) -> Option<Quad> {
        let d = eval_poly(f.den(), &self.point, self.pivot, &self.p);
        let n = eval_poly(f.num(), &self.point, self.pivot, &self.p);
        n.div(&d, &self.p)
    }
}

/// `count` sample points over `vars` (the pivot is excluded automatically).
pub fn sample_points(vars: &BTreeSet<Var>, ctx: &QuotientCtx, seed: u64, count: usize) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rel = ctx.relation();
    let pivot = rel.map(|r| r.pivot);
    let mut vars = vars.clone();
    if let Some(r) = rel {
        vars.extend(r.p_num.vars());
        vars.extend(r.p_den.vars());
    }
    if let Some(p) = pivot {
        vars.remove(&p);
    }
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 1000, "could not find sample points");
        let point: BTreeMap<Var, Rat> = vars.iter().map(|&v| (v, random_rat(&mut rng))).collect();
        let p = match rel {
            None => Rat::zero(),
            Some(r) => {
                let zero = Rat::zero();
                let n = eval_poly(&r.p_num, &point, None, &zero).a;
                let d = eval_poly(&r.p_den, &point, None, &zero).a;
                if d.is_zero() {
                    continue;
                }
                let p = n / d;
                if is_rational_square(&p) {
                    continue;
                }
                p
            }
        };
        out.push(SamplePoint { point, pivot, p });
    }
    out
}

/// Value of `f` at a rational point (plain context only); `None` if the
/// denominator vanishes there.
pub fn eval_at(f: &RatFn, point: &dyn Fn(Var) -> Rat) -> Option<Rat> {
    let vars: BTreeSet<Var> = f.vars();
    let pt: BTreeMap<Var, Rat> = vars.iter().map(|&v| (v, point(v))).collect();
    let zero = Rat::zero();
    let d = eval_poly(f.den(), &pt, None, &zero).a;
    if d.is_zero() {
        return None;
    }
    Some(eval_poly(f.num(), &pt, None, &zero).a / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfn;
    use crate::parse::parse_zpoly;

    #[test]
    fn agrees_with_canonical_equality() {
        let ctx = QuotientCtx::plain();
        let a = parse_ratfn("(t1^2 - t2^2)/(t1 + t2)", &ctx).unwrap();
        let b = parse_ratfn("t1 - t2", &ctx).unwrap();
        let c = parse_ratfn("t1 - t2 + 1/t3", &ctx).unwrap();
        assert!(oracle_equal(&a, &b, &ctx, 1, ORACLE_POINTS));
        assert!(!oracle_equal(&a, &c, &ctx, 1, ORACLE_POINTS));
    }

    #[test]
    fn sample_point_arithmetic() {
        let ctx = QuotientCtx::with_relation(Var::t(3), parse_zpoly("4*t1^4 - 4*t4").unwrap(), ZPoly::one()).unwrap();
        let f = parse_ratfn("t3/(t1 + t3)", &ctx).unwrap();
        let g = parse_ratfn("(t1 + t3)/t3", &ctx).unwrap();
        let vars: BTreeSet<Var> = [Var::t(1), Var::t(4)].into_iter().collect();
        for pt in sample_points(&vars, &ctx, 3, 4) {
            let p = pt.p.clone();
            let prod = pt.eval(&f).unwrap().mul(&pt.eval(&g).unwrap(), &p);
            assert_eq!(prod, Quad::from_rat(Rat::from_integer(1.into())));
        }
    }

    #[test]
    fn quadratic_extension() {
        let ctx = QuotientCtx::with_relation(
            Var::t(8),
            parse_zpoly("36*t1^6 - 36*t6").unwrap(),
            ZPoly::one(),
        )
        .unwrap();
        let a = parse_ratfn("t8^3", &ctx).unwrap();
        let b = parse_ratfn("t8*(36*t1^6 - 36*t6)", &ctx).unwrap();
        assert_eq!(a, b);
        assert!(oracle_equal(&a, &b, &ctx, 7, ORACLE_POINTS));
        let c = parse_ratfn("t8*(36*t1^6 - 35*t6)", &ctx).unwrap();
        assert!(!oracle_equal(&a, &c, &ctx, 7, ORACLE_POINTS));
    }
}

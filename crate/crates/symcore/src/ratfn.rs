use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::SymError;
use crate::gcd::gcd_cofactors;
use crate::mono::Mono;
use crate::poly::{Poly, ZPoly};
use crate::var::Var;
use crate::Rat;

/// Reduced fraction num/den with num, den in Z[vars], no common factor,
/// and den having positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: ZPoly,
    den: ZPoly,
}

/// Quadratic relation pivot^2 = p_num / p_den, both sides free of the pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub pivot: Var,
    pub p_num: ZPoly,
    pub p_den: ZPoly,
}

/// Arithmetic context: plain Q(vars), or Q(vars) modulo one quadratic
/// relation. Normal forms under a relation have degree <= 1 in the pivot and
/// pivot-free denominators.
#[derive(Clone, Debug, Default)]
pub struct QuotientCtx {
    rel: Option<Arc<Relation>>,
}

impl RatFn {
    pub fn zero() -> RatFn {
        RatFn { num: ZPoly::zero(), den: ZPoly::one() }
    }

    pub fn one() -> RatFn {
        RatFn { num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_i64(k: i64) -> RatFn {
        RatFn { num: ZPoly::from_i64(k), den: ZPoly::one() }
    }

    pub fn from_rat(r: &Rat) -> RatFn {
        if r.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: ZPoly::constant(r.numer().clone()), den: ZPoly::constant(r.denom().clone()) }
    }

    pub fn var(v: Var) -> RatFn {
        RatFn { num: ZPoly::var(v), den: ZPoly::one() }
    }

    /// Integer polynomial as a fraction (no relation reduction).
    pub fn from_zpoly(p: ZPoly) -> RatFn {
        RatFn { num: p, den: ZPoly::one() }
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(Rat::new(n, d))
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    /// Numerator and denominator over Q with the denominator monic in
    /// leading coefficient; used for the polynomial-part split.
    pub fn rat_parts(&self) -> (Poly<Rat>, Poly<Rat>) {
        (self.num.to_rat(), self.den.to_rat())
    }

    // Canonical form of num/den ignoring any relation.
    fn reduced(num: ZPoly, den: ZPoly) -> Result<RatFn, SymError> {
        if den.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let (_, n, d) = gcd_cofactors(&num, &den);
        Ok(RatFn::signed(n, d))
    }

    fn signed(num: ZPoly, den: ZPoly) -> RatFn {
        if den.lc().is_negative() {
            RatFn { num: num.neg(), den: den.neg() }
        } else {
            RatFn { num, den }
        }
    }

    /// Leading term (monomial and sign) of the numerator; handy for display.
    pub fn leading_mono(&self) -> Mono {
        self.num.lm()
    }
}

impl Relation {
    // f = result / p_den^k with result of degree <= 1 in the pivot
    fn reduce_poly(&self, f: &ZPoly) -> (ZPoly, u32) {
        let deg = f.degree_in(self.pivot);
        if deg <= 1 {
            return (f.clone(), 0);
        }
        let cs = f.coeffs_in(self.pivot);
        let kmax = (deg / 2) as usize;
        let mut pn_pows = vec![ZPoly::one()];
        let mut pd_pows = vec![ZPoly::one()];
        for j in 1..=kmax {
            pn_pows.push(pn_pows[j - 1].mul(&self.p_num));
            pd_pows.push(pd_pows[j - 1].mul(&self.p_den));
        }
        let mut even = ZPoly::zero();
        let mut odd = ZPoly::zero();
        for (k, c) in cs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = k / 2;
            let term = c.mul(&pn_pows[j]).mul(&pd_pows[kmax - j]);
            if k % 2 == 0 {
                even = even.add(&term);
            } else {
                odd = odd.add(&term);
            }
        }
        let res = ZPoly::from_coeffs_in(self.pivot, &[even, odd]);
        (res, kmax as u32)
    }

    fn reduce(&self, mut num: ZPoly, mut den: ZPoly) -> Result<RatFn, SymError> {
        loop {
            let (n1, k1) = self.reduce_poly(&num);
            let (d1, k2) = self.reduce_poly(&den);
            num = n1;
            den = d1;
            if k1 > 0 {
                den = den.mul(&self.p_den.pow(k1));
            }
            if k2 > 0 {
                num = num.mul(&self.p_den.pow(k2));
            }
            if den.is_zero() {
                return Err(SymError::ZeroDenominator);
            }
            if !den.contains_var(self.pivot) {
                break;
            }
            // multiply by the conjugate a - b*pivot
            let cs = den.coeffs_in(self.pivot);
            let conj = ZPoly::from_coeffs_in(self.pivot, &[cs[0].clone(), cs[1].neg()]);
            num = num.mul(&conj);
            den = den.mul(&conj);
        }
        RatFn::reduced(num, den)
    }
}

impl QuotientCtx {
    pub fn plain() -> QuotientCtx {
        QuotientCtx { rel: None }
    }

    /// Context with pivot^2 = p_num/p_den.
    pub fn with_relation(pivot: Var, p_num: ZPoly, p_den: ZPoly) -> Result<QuotientCtx, SymError> {
        if p_num.contains_var(pivot) || p_den.contains_var(pivot) {
            return Err(SymError::DimensionMismatch("relation right side contains the pivot".into()));
        }
        if p_den.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        let r = RatFn::reduced(p_num, p_den)?;
        Ok(QuotientCtx { rel: Some(Arc::new(Relation { pivot, p_num: r.num, p_den: r.den })) })
    }

    pub fn relation(&self) -> Option<&Relation> {
        self.rel.as_deref()
    }

    /// The right side of the relation as a fraction.
    pub fn relation_rhs(&self) -> Option<RatFn> {
        self.rel.as_ref().map(|r| RatFn { num: r.p_num.clone(), den: r.p_den.clone() })
    }

    fn is_canonical_under(&self, f: &RatFn) -> bool {
        match &self.rel {
            None => true,
            Some(r) => !f.den.contains_var(r.pivot) && f.num.degree_in(r.pivot) <= 1,
        }
    }

    fn fix(&self, f: RatFn) -> Result<RatFn, SymError> {
        match &self.rel {
            Some(r) if !self.is_canonical_under(&f) => r.reduce(f.num, f.den),
            _ => Ok(f),
        }
    }

    /// Canonical representative of num/den.
    pub fn normalize(&self, num: &Poly<Rat>, den: &Poly<Rat>) -> Result<RatFn, SymError> {
        let (zn, ln) = num.clear_denominators();
        let (zd, ld) = den.clear_denominators();
        let n = zn.scale(&ld);
        let d = zd.scale(&ln);
        self.normalize_z(n, d)
    }

    pub fn normalize_z(&self, num: ZPoly, den: ZPoly) -> Result<RatFn, SymError> {
        match &self.rel {
            Some(r) => r.reduce(num, den),
            None => RatFn::reduced(num, den),
        }
    }

    /// Re-canonicalizes a fraction built elsewhere (e.g. in a plain context).
    pub fn reduce(&self, f: &RatFn) -> RatFn {
        self.fix(f.clone()).expect("denominator vanishes modulo the relation")
    }

    pub fn from_poly(&self, p: &Poly<Rat>) -> RatFn {
        self.normalize(p, &Poly::one()).unwrap()
    }

    pub fn from_zpoly(&self, p: ZPoly) -> RatFn {
        self.reduce(&RatFn::from_zpoly(p))
    }

    pub fn neg(&self, a: &RatFn) -> RatFn {
        RatFn { num: a.num.neg(), den: a.den.clone() }
    }

    pub fn add(&self, a: &RatFn, b: &RatFn) -> RatFn {
        self.add_sub(a, b, false)
    }

    pub fn sub(&self, a: &RatFn, b: &RatFn) -> RatFn {
        self.add_sub(a, b, true)
    }

    fn add_sub(&self, a: &RatFn, b: &RatFn, negate: bool) -> RatFn {
        if b.is_zero() {
            return a.clone();
        }
        if a.is_zero() {
            return if negate { self.neg(b) } else { b.clone() };
        }
        let comb = |x: &ZPoly, y: &ZPoly| if negate { x.sub(y) } else { x.add(y) };
        let out = if a.den == b.den {
            let n = comb(&a.num, &b.num);
            if a.den.is_one() {
                RatFn { num: n, den: a.den.clone() }
            } else {
                let (_, n2, d2) = gcd_cofactors(&n, &a.den);
                RatFn::signed(n2, d2)
            }
        } else if a.den.is_one() || b.den.is_one() {
            // den coprime to the other numerator already
            let n = comb(&a.num.mul(&b.den), &b.num.mul(&a.den));
            RatFn::signed(n, a.den.mul(&b.den))
        } else {
            let (g, a1, b1) = gcd_cofactors(&a.den, &b.den);
            let n = comb(&a.num.mul(&b1), &b.num.mul(&a1));
            if g.is_one() {
                RatFn::signed(n, a.den.mul(&b.den))
            } else {
                let (_, n2, gr) = gcd_cofactors(&n, &g);
                RatFn::signed(n2, a1.mul(&b1).mul(&gr))
            }
        };
        let out = if out.num.is_zero() { RatFn::zero() } else { out };
        self.fix(out).expect("sum has zero denominator")
    }

    pub fn mul(&self, a: &RatFn, b: &RatFn) -> RatFn {
        if a.is_zero() || b.is_zero() {
            return RatFn::zero();
        }
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        let (_, an, bd) = gcd_cofactors(&a.num, &b.den);
        let (_, bn, ad) = gcd_cofactors(&b.num, &a.den);
        let out = RatFn::signed(an.mul(&bn), ad.mul(&bd));
        self.fix(out).expect("product has zero denominator")
    }

    pub fn inv(&self, a: &RatFn) -> Result<RatFn, SymError> {
        if a.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        self.fix(RatFn::signed(a.den.clone(), a.num.clone()))
    }

    pub fn div(&self, a: &RatFn, b: &RatFn) -> Result<RatFn, SymError> {
        let bi = self.inv(b)?;
        Ok(self.mul(a, &bi))
    }

    pub fn scale(&self, a: &RatFn, k: &Rat) -> RatFn {
        self.mul(a, &RatFn::from_rat(k))
    }

    pub fn pow(&self, a: &RatFn, k: i32) -> Result<RatFn, SymError> {
        let base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut r = RatFn::one();
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        Ok(r)
    }

    /// Formal partial derivative treating the pivot as an independent
    /// coordinate.
    pub fn derive(&self, f: &RatFn, v: Var) -> RatFn {
        if !f.contains_var(v) {
            return RatFn::zero();
        }
        let dn = f.num.derive(v);
        if !f.den.contains_var(v) {
            if f.den.is_one() {
                return self.fix(RatFn { num: dn, den: f.den.clone() }).unwrap();
            }
            let (_, n, d) = gcd_cofactors(&dn, &f.den);
            return self.fix(RatFn::signed(n, d)).unwrap();
        }
        let dd = f.den.derive(v);
        let (g, d_over_g, dd_over_g) = gcd_cofactors(&f.den, &dd);
        let num = dn.mul(&d_over_g).sub(&f.num.mul(&dd_over_g));
        let den = f.den.mul(&d_over_g);
        let (_, n2, gr) = gcd_cofactors(&num, &g);
        let den = den.div_exact(&g).unwrap().mul(&gr);
        self.fix(RatFn::signed(n2, den)).unwrap()
    }

    /// Sum of many terms.
    pub fn sum<'a, I: IntoIterator<Item = &'a RatFn>>(&self, it: I) -> RatFn {
        let mut acc = RatFn::zero();
        for x in it {
            acc = self.add(&acc, x);
        }
        acc
    }

    /// Simultaneous substitution of variables by fractions.
    pub fn substitute(&self, f: &RatFn, map: &dyn Fn(Var) -> Option<RatFn>) -> Result<RatFn, SymError> {
        let n = self.subst_poly(&f.num, map)?;
        let d = self.subst_poly(&f.den, map)?;
        self.div(&n, &d)
    }

    fn subst_poly(&self, p: &ZPoly, map: &dyn Fn(Var) -> Option<RatFn>) -> Result<RatFn, SymError> {
        let vars = p.vars();
        let mut images: Vec<(Var, RatFn)> = Vec::new();
        for v in vars {
            images.push((v, map(v).unwrap_or_else(|| RatFn::var(v))));
        }
        // cache powers per variable
        let mut powers: Vec<Vec<RatFn>> = images.iter().map(|(_, x)| vec![RatFn::one(), x.clone()]).collect();
        let mut acc = RatFn::zero();
        for (m, c) in p.terms() {
            let mut t = RatFn::from_zpoly(ZPoly::constant(c.clone()));
            for (idx, (v, _)) in images.iter().enumerate() {
                let k = m.exp(*v) as usize;
                if k == 0 {
                    continue;
                }
                while powers[idx].len() <= k {
                    let next = self.mul(powers[idx].last().unwrap(), &powers[idx][1]);
                    powers[idx].push(next);
                }
                t = self.mul(&t, &powers[idx][k]);
            }
            acc = self.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Whether f vanishes, i.e. is the zero normal form.
    pub fn is_zero(&self, f: &RatFn) -> bool {
        self.reduce(f).is_zero()
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let bare = self.den.is_constant()
            || (self.den.len() == 1 && self.den.lc().is_one() && self.den.lm().vars().count() == 1);
        if bare {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Integer as a fraction constant.
pub fn rat_int(k: i64) -> Rat {
    Rat::from_integer(BigInt::from(k))
}

/// p/q as an exact rational.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_ratfn, parse_zpoly};

    fn plain(s: &str) -> RatFn {
        parse_ratfn(s, &QuotientCtx::plain()).unwrap()
    }

    fn n4() -> QuotientCtx {
        QuotientCtx::with_relation(Var::t(8), parse_zpoly("36*t1^6 - 36*t6").unwrap(), ZPoly::one()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let ctx = QuotientCtx::plain();
        let num = parse_zpoly("t1^2 - t3^2").unwrap().to_rat();
        let den = parse_zpoly("t1 - t3").unwrap().to_rat();
        assert_eq!(ctx.normalize(&num, &den).unwrap(), plain("t1 + t3"));
        let z = ctx.normalize(&Poly::zero(), &den).unwrap();
        assert!(z.is_zero() && z.den().is_one());
        assert_eq!(ctx.normalize(&num, &Poly::zero()), Err(SymError::ZeroDenominator));
        let t8sq = parse_zpoly("t8^2").unwrap().to_rat();
        assert_eq!(n4().normalize(&t8sq, &Poly::one()).unwrap(), plain("36*t1^6 - 36*t6"));
    }

    #[test]
    fn relation_reduction() {
        let ctx = n4();
        // t8^2 - P is zero
        assert!(parse_ratfn("t8^2 - 36*t1^6 + 36*t6", &ctx).unwrap().is_zero());
        // pivot in a denominator is rationalized away
        let f = parse_ratfn("1/t8", &ctx).unwrap();
        assert!(!f.den().contains_var(Var::t(8)));
        assert_eq!(f.to_string(), "t8/(36*t1^6 - 36*t6)");
        let g = parse_ratfn("t3/(t8 + t3)", &ctx).unwrap();
        assert_eq!(ctx.mul(&g, &parse_ratfn("t8 + t3", &ctx).unwrap()), plain("t3"));
        // a denominator vanishing modulo the relation
        assert!(parse_ratfn("1/(t8^2 - 36*t1^6 + 36*t6)", &ctx).is_err());
    }

    #[test]
    fn rational_relation() {
        // pivot^2 = (t1^4 - t4)/(-16*c)
        let ctx = QuotientCtx::with_relation(
            Var::t(3),
            parse_zpoly("t1^4 - t4").unwrap(),
            parse_zpoly("-16*c").unwrap(),
        )
        .unwrap();
        let sq = parse_ratfn("t3^2", &ctx).unwrap();
        assert_eq!(sq, plain("(t1^4 - t4)/(-16*c)"));
        let cube = parse_ratfn("t3^3*c", &ctx).unwrap();
        assert_eq!(cube, plain("-(t1^4*t3 - t3*t4)/16"));
        let again = ctx.reduce(&cube);
        assert_eq!(again, cube);
    }

    #[test]
    fn derivative_examples() {
        let ctx = QuotientCtx::plain();
        assert_eq!(ctx.derive(&plain("t1^2*t3"), Var::t(1)), plain("2*t1*t3"));
        assert_eq!(ctx.derive(&plain("1/t3"), Var::t(3)), plain("-1/t3^2"));
        let f = plain("t1 + t2");
        let g = plain("t2^2");
        let lhs = ctx.derive(&ctx.mul(&f, &g), Var::t(2));
        let rhs = ctx.add(
            &ctx.mul(&f, &ctx.derive(&g, Var::t(2))),
            &ctx.mul(&g, &ctx.derive(&f, Var::t(2))),
        );
        assert_eq!(lhs, rhs);
        let q = plain("(t1 + t2)/(t1^3 - t3)^2");
        let dq = ctx.derive(&q, Var::t(1));
        assert_eq!(dq, plain("(t1^3 - t3 - 3*t1^2*(t1 + t2)*2)/(t1^3 - t3)^3"));
    }

    #[test]
    fn henrici_paths() {
        let ctx = QuotientCtx::plain();
        let a = plain("1/(t1*(t1 - t2))");
        let b = plain("1/(t2*(t1 - t2))");
        assert_eq!(ctx.sub(&a, &b), plain("-1/(t1*t2)"));
        assert_eq!(ctx.add(&plain("t1/t2"), &plain("1/t2")), plain("(t1 + 1)/t2"));
        assert!(ctx.sub(&a, &a).is_zero());
        assert_eq!(ctx.div(&plain("t1"), &plain("2*t1")).unwrap(), plain("1/2"));
    }

    #[test]
    fn substitution() {
        let ctx = QuotientCtx::plain();
        let f = plain("(t1^2 + t2)/t3");
        let g = ctx
            .substitute(&f, &|v| if v == Var::t(1) { Some(plain("t1*g1")) } else { None })
            .unwrap();
        assert_eq!(g, plain("(t1^2*g1^2 + t2)/t3"));
    }
}

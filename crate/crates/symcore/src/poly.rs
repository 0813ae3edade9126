use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::coeff::Coeff;
use crate::mono::Mono;
use crate::var::Var;
use crate::Rat;

/// Sparse multivariate polynomial. Terms are kept in strictly decreasing
/// graded lexicographic order with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C = Rat> {
    terms: Vec<(Mono, C)>,
}

pub type ZPoly = Poly<BigInt>;

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Mono::ONE, c)
    }

    pub fn from_i64(k: i64) -> Self {
        Self::constant(C::from_i64(k))
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Mono::var(v), C::one())
    }

    /// Builds from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(mut terms: Vec<(Mono, C)>) -> Self {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, C)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1.add_assign(&c),
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some(last) = out.last() {
            if last.1.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn lt(&self) -> Option<&(Mono, C)> {
        self.terms.first()
    }

    pub fn lc(&self) -> C {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(C::zero)
    }

    pub fn lm(&self) -> Mono {
        self.terms.first().map(|t| t.0).unwrap_or(Mono::ONE)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.0.exp(v) as u32).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.0.exp(v) as u32).min().unwrap_or(0)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|t| t.0.exp(v) != 0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for (m, _) in &self.terms {
            for (v, _) in m.vars() {
                s.insert(v);
            }
        }
        s
    }

    /// gcd of all monomials.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        match it.next() {
            None => Mono::ONE,
            Some(first) => it.fold(first.0, |g, t| g.gcd(&t.0)),
        }
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = a[i].1.clone();
                    if negate {
                        c.sub_assign(&b[j].1);
                    } else {
                        c.add_assign(&b[j].1);
                    }
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { t.1.neg() } else { t.1.clone() };
            out.push((t.0, c));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let (small, big) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_term(m, c);
        }
        let mut prods = Vec::with_capacity(small.len() * big.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                prods.push((ma.mul(mb), ca.mul(cb)));
            }
        }
        Self::from_terms(prods)
    }

    pub fn mul_term(&self, m: &Mono, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(a, b)| (a.mul(m), b.mul(c))).collect() }
    }

    pub fn mul_mono(&self, m: &Mono) -> Self {
        Poly { terms: self.terms.iter().map(|(a, b)| (a.mul(m), b.clone())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.mul_term(&Mono::ONE, c)
    }

    /// Divides every monomial by `m`, which must divide all of them.
    pub fn div_mono(&self, m: &Mono) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(a, b)| (a.div(m).expect("monomial does not divide"), b.clone()))
                .collect(),
        }
    }

    pub fn div_coeff_exact(&self, c: &C) -> Option<Self> {
        let mut out = Vec::with_capacity(self.len());
        for (m, a) in &self.terms {
            out.push((*m, a.div_exact(c)?));
        }
        Some(Poly { terms: out })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one();
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Exact quotient self / d, or `None` if d does not divide self.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                out.push((m.div(dm)?, c.div_exact(dc)?));
            }
            return Some(Poly { terms: out });
        }
        let (dm, dc) = d.terms[0].clone();
        if !dm.divides(&self.terms[0].0) {
            return None;
        }
        for v in d.vars() {
            if d.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        // Heap division: the heap holds, per quotient term j, the next
        // product q_j * d_i still to be subtracted.
        let mut q: Vec<(Mono, C)> = Vec::new();
        let mut heap: BinaryHeap<(Mono, usize, usize)> = BinaryHeap::new();
        let mut fi = 0;
        loop {
            let fm = self.terms.get(fi).map(|t| t.0);
            let hm = heap.peek().map(|t| t.0);
            let m = match (fm, hm) {
                (None, None) => break,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.max(b),
            };
            let mut coef = C::zero();
            if fm == Some(m) {
                coef = self.terms[fi].1.clone();
                fi += 1;
            }
            while let Some(&(hm, j, i)) = heap.peek() {
                if hm != m {
                    break;
                }
                heap.pop();
                coef.sub_assign(&q[j].1.mul(&d.terms[i].1));
                if i + 1 < d.terms.len() {
                    heap.push((q[j].0.mul(&d.terms[i + 1].0), j, i + 1));
                }
            }
            if coef.is_zero() {
                continue;
            }
            let qm = m.div(&dm)?;
            let qc = coef.div_exact(&dc)?;
            q.push((qm, qc));
            heap.push((qm.mul(&d.terms[1].0), q.len() - 1, 1));
        }
        Some(Poly { terms: q })
    }

    /// Formal partial derivative.
    pub fn derive(&self, v: Var) -> Self {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let k = m.exp(v);
            if k == 0 {
                continue;
            }
            let mut nm = *m;
            nm.set(v, k - 1);
            out.push((nm, c.mul(&C::from_i64(k as i64))));
        }
        // removing one power of v can reorder terms
        Self::from_terms(out)
    }

    /// Coefficients with respect to `v`: result[k] is the coefficient of v^k.
    pub fn coeffs_in(&self, v: Var) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, C)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exp(v);
            let mut nm = *m;
            nm.set(v, 0);
            buckets[k as usize].push((nm, c.clone()));
        }
        buckets.into_iter().map(Self::from_terms).collect()
    }

    /// Inverse of `coeffs_in`.
    pub fn from_coeffs_in(v: Var, coeffs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut nm = *m;
                nm.set(v, u8::try_from(k).expect("exponent overflow"));
                terms.push((nm, c.clone()));
            }
        }
        Self::from_terms(terms)
    }

    /// Substitutes a constant for `v`.
    pub fn eval_var(&self, v: Var, x: &C) -> Self {
        let deg = self.degree_in(v) as usize;
        let mut pows = Vec::with_capacity(deg + 1);
        pows.push(C::one());
        for k in 1..=deg {
            let p = pows[k - 1].mul(x);
            pows.push(p);
        }
        let mut out = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let k = m.exp(v) as usize;
            let mut nm = *m;
            nm.set(v, 0);
            let nc = c.mul(&pows[k]);
            if !nc.is_zero() {
                out.push((nm, nc));
            }
        }
        Self::from_terms(out)
    }

    /// Evaluates all variables with `f`.
    pub fn eval<T, F>(&self, f: F) -> T
    where
        T: Clone + std::ops::Add<Output = T> + std::ops::Mul<Output = T> + From<C>,
        F: Fn(Var) -> T,
    {
        let mut acc: Option<T> = None;
        for (m, c) in &self.terms {
            let mut t: T = T::from(c.clone());
            for (v, k) in m.vars() {
                let x = f(v);
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a + t,
            });
        }
        acc.unwrap_or_else(|| T::from(C::zero()))
    }

    /// Replaces `v` by `with`.
    pub fn substitute(&self, v: Var, with: &Self) -> Self {
        if !self.contains_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        // Horner from the top
        let mut acc = Self::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(with).add(c);
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))).collect())
    }

    /// Weighted degrees of all terms, as (min, max).
    pub fn weighted_degree_range(&self, w: &dyn Fn(Var) -> i64) -> Option<(i64, i64)> {
        let mut it = self.terms.iter().map(|(m, _)| m.weighted_degree(w));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }
}

impl ZPoly {
    /// gcd of the integer coefficients, positive; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::from(0);
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g == BigInt::from(1) {
                break;
            }
        }
        g
    }

    pub fn to_rat(&self) -> Poly<Rat> {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, Rat::from_integer(c.clone()))).collect() }
    }

    /// Max absolute value of the coefficients.
    pub fn max_norm(&self) -> BigInt {
        self.terms.iter().map(|t| t.1.abs()).max().unwrap_or_else(|| BigInt::from(0))
    }
}

impl Poly<Rat> {
    /// Writes self = z / k with z integral and k > 0 an integer.
    pub fn clear_denominators(&self) -> (ZPoly, BigInt) {
        let mut l = BigInt::from(1);
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
        }
        let z = Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.numer() * (&l / c.denom())))
                .collect(),
        };
        (z, l)
    }

    /// Division with remainder by `d`: self = q*d + r where no term of r is
    /// divisible by the leading monomial of d.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = d.terms[0].clone();
        let mut p = self.clone();
        let mut q = Vec::new();
        let mut r = Vec::new();
        while let Some((pm, pc)) = p.terms.first().cloned() {
            match pm.div(&dm) {
                Some(m) => {
                    let c = &pc / &dc;
                    p = p.sub(&d.mul_term(&m, &c));
                    q.push((m, c));
                }
                None => {
                    r.push((pm, pc));
                    p.terms.remove(0);
                }
            }
        }
        (Poly::from_terms(q), Poly::from_terms(r))
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> ZPoly {
        ZPoly::var(Var::t(i))
    }

    fn k(x: i64) -> ZPoly {
        ZPoly::from_i64(x)
    }

    #[test]
    fn ring_basics() {
        let a = t(1).add(&t(2));
        let b = t(1).sub(&t(2));
        let p = a.mul(&b);
        assert_eq!(p, t(1).mul(&t(1)).sub(&t(2).mul(&t(2))));
        assert_eq!(p.to_string(), "-t2^2 + t1^2");
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.pow(3).len(), 4);
    }

    #[test]
    fn exact_division() {
        let a = t(1).add(&k(3).mul(&t(2)));
        let b = t(3).sub(&k(2));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.add(&k(1)).div_exact(&a), None);
        // integer content must divide too
        assert_eq!(k(3).mul(&t(1)).div_exact(&k(2)), None);
    }

    #[test]
    fn derivative_and_coeffs() {
        let p = t(1).pow(2).mul(&t(3)).add(&t(3));
        assert_eq!(p.derive(Var::t(1)), k(2).mul(&t(1)).mul(&t(3)));
        let cs = p.coeffs_in(Var::t(1));
        assert_eq!(cs.len(), 3);
        assert_eq!(ZPoly::from_coeffs_in(Var::t(1), &cs), p);
        assert_eq!(p.eval_var(Var::t(1), &BigInt::from(2)), k(5).mul(&t(3)));
        assert_eq!(p.substitute(Var::t(3), &t(2)), t(1).pow(2).mul(&t(2)).add(&t(2)));
    }

    #[test]
    fn division_with_remainder() {
        let x = Poly::<Rat>::var(Var::t(1));
        let y = Poly::<Rat>::var(Var::t(5));
        let den = x.pow(5).sub(&y);
        let num = x.pow(5).mul(&x).sub(&Poly::from_i64(7));
        let (q, r) = num.div_rem(&den);
        assert_eq!(q, x);
        assert_eq!(r, x.mul(&y).sub(&Poly::from_i64(7)));
    }
}

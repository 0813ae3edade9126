//! Multivariate gcd over Z.
//!
//! Trivial cases (constants, monomial factors, variables present in only one
//! argument, exact divisibility) are peeled off first. What remains goes to a
//! heuristic gcd: evaluate the main variable at a large integer, recurse, and
//! recover the gcd by symmetric xi-adic interpolation, accepting the candidate
//! only after trial division. If that fails a few times we fall back to a
//! primitive pseudo-remainder sequence.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::ZPoly;
use crate::var::Var;

const HEU_ATTEMPTS: usize = 6;

/// Greatest common divisor in Z[vars], with positive leading coefficient.
/// gcd(0, 0) = 0.
pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    normalize_sign(gcd_inner(a, b))
}

/// gcd together with the cofactors a/g and b/g.
pub fn gcd_cofactors(a: &ZPoly, b: &ZPoly) -> (ZPoly, ZPoly, ZPoly) {
    let g = gcd(a, b);
    if g.is_zero() {
        return (g, ZPoly::zero(), ZPoly::zero());
    }
    if g.is_one() {
        return (g, a.clone(), b.clone());
    }
    let ca = a.div_exact(&g).expect("gcd does not divide first argument");
    let cb = b.div_exact(&g).expect("gcd does not divide second argument");
    (g, ca, cb)
}

fn normalize_sign(p: ZPoly) -> ZPoly {
    if p.lc().is_negative() {
        p.neg()
    } else {
        p
    }
}

fn int_gcd_poly(a: &ZPoly, b: &ZPoly) -> ZPoly {
    ZPoly::constant(a.content().gcd(&b.content()))
}

fn gcd_inner(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return int_gcd_poly(a, b);
    }
    if a == b {
        return a.clone();
    }
    // split off monomial content
    let ma = a.mono_content();
    let mb = b.mono_content();
    let mg = ma.gcd(&mb);
    let a1 = if ma.is_one() { a.clone() } else { a.div_mono(&ma) };
    let b1 = if mb.is_one() { b.clone() } else { b.div_mono(&mb) };
    let g = gcd_no_mono(&a1, &b1);
    if mg.is_one() {
        g
    } else {
        g.mul_mono(&mg)
    }
}

// Neither argument has a monomial factor.
fn gcd_no_mono(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_constant() || b.is_constant() {
        return int_gcd_poly(a, b);
    }
    if a.is_monomial() || b.is_monomial() {
        // monomial with trivial monomial part is a constant, handled above;
        // a monomial-free polynomial and a pure monomial share only content
        return int_gcd_poly(a, b);
    }
    let va = a.vars();
    let vb = b.vars();
    let only_a: Vec<Var> = va.difference(&vb).copied().collect();
    let only_b: Vec<Var> = vb.difference(&va).copied().collect();
    if !only_a.is_empty() {
        return gcd_with_coeffs(b, a, &only_a);
    }
    if !only_b.is_empty() {
        return gcd_with_coeffs(a, b, &only_b);
    }
    // same variable set
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.clone();
    }
    let ca = a.content();
    let cb = b.content();
    let cg = ca.gcd(&cb);
    let pa = a.div_coeff_exact(&ca).unwrap();
    let pb = b.div_coeff_exact(&cb).unwrap();
    let g = match heuristic(&pa, &pb, &va) {
        Some(g) => g,
        None => prs_gcd(&pa, &pb, &va),
    };
    g.scale(&cg)
}

// gcd(keep, other) where `extra` are variables of `other` absent from `keep`:
// the gcd divides every coefficient of `other` viewed as a polynomial in them.
fn gcd_with_coeffs(keep: &ZPoly, other: &ZPoly, extra: &[Var]) -> ZPoly {
    let mut parts = vec![other.clone()];
    for &v in extra {
        let mut next = Vec::new();
        for p in &parts {
            for c in p.coeffs_in(v) {
                if !c.is_zero() {
                    next.push(c);
                }
            }
        }
        parts = next;
    }
    // smallest first so the running gcd shrinks quickly
    parts.sort_by_key(|p| p.len());
    let mut g = keep.clone();
    for p in &parts {
        g = gcd_inner(&g, p);
        if g.is_constant() {
            // still need the integer content of the remaining parts
            let mut c = g.as_constant().unwrap().abs();
            for q in &parts {
                if c.is_one() {
                    break;
                }
                c = c.gcd(&q.content());
            }
            return ZPoly::constant(c);
        }
    }
    g
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

// Recovers a polynomial in `x` from its image at x = xi.
fn interpolate(h: &ZPoly, xi: &BigInt, x: Var) -> ZPoly {
    let mut h = h.clone();
    let mut coeffs = Vec::new();
    while !h.is_zero() {
        let g = ZPoly::from_terms(
            h.terms()
                .iter()
                .map(|(m, c)| (*m, symmetric_mod(c, xi)))
                .collect(),
        );
        h = h.sub(&g).div_coeff_exact(xi).expect("interpolation step not exact");
        coeffs.push(g);
    }
    ZPoly::from_coeffs_in(x, &coeffs)
}

fn primitive(p: &ZPoly) -> ZPoly {
    let c = p.content();
    if c.is_zero() || c.is_one() {
        normalize_sign(p.clone())
    } else {
        normalize_sign(p.div_coeff_exact(&c).unwrap())
    }
}

fn heuristic(f: &ZPoly, g: &ZPoly, vars: &BTreeSet<Var>) -> Option<ZPoly> {
    // main variable: the one of highest degree keeps the images smallest
    let x = *vars
        .iter()
        .max_by_key(|&&v| (f.degree_in(v).max(g.degree_in(v)), std::cmp::Reverse(v)))?;
    let f_norm = f.max_norm();
    let g_norm = g.max_norm();
    let lo: BigInt = f_norm.clone().min(g_norm.clone());
    let b: BigInt = BigInt::from(2) * lo + 29;
    let lcf = f.lc().abs();
    let lcg = g.lc().abs();
    let q: BigInt = (&f_norm / &lcf).min(&g_norm / &lcg);
    let alt: BigInt = BigInt::from(2) * q + 4;
    let sq: BigInt = BigInt::from(99) * b.sqrt();
    let mut xi: BigInt = b.min(sq).max(alt);
    for _ in 0..HEU_ATTEMPTS {
        let ff = f.eval_var(x, &xi);
        let gg = g.eval_var(x, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            let h = gcd_inner(&ff, &gg);
            let cand = primitive(&interpolate(&h, &xi, x));
            if !cand.is_constant() || cand.is_one() {
                if let Some(_) = f.div_exact(&cand) {
                    if g.div_exact(&cand).is_some() {
                        return Some(cand);
                    }
                }
            }
            // try via the cofactor images
            if !h.is_zero() {
                if let Some(cff) = ff.div_exact(&h) {
                    let cff = interpolate(&cff, &xi, x);
                    if let Some(cand) = f.div_exact(&cff) {
                        let cand = primitive(&cand);
                        if g.div_exact(&cand).is_some() {
                            return Some(cand);
                        }
                    }
                }
                if let Some(cfg) = gg.div_exact(&h) {
                    let cfg = interpolate(&cfg, &xi, x);
                    if let Some(cand) = g.div_exact(&cfg) {
                        let cand = primitive(&cand);
                        if f.div_exact(&cand).is_some() {
                            return Some(cand);
                        }
                    }
                }
            }
        }
        let r = xi.sqrt().sqrt();
        xi = BigInt::from(73794) * &xi * r / BigInt::from(27011);
    }
    None
}

// content of p with respect to x: gcd of its coefficients in x
fn content_in(p: &ZPoly, x: Var) -> ZPoly {
    let cs: Vec<ZPoly> = p.coeffs_in(x).into_iter().filter(|c| !c.is_zero()).collect();
    let mut g = ZPoly::zero();
    for c in &cs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn prem(a: &[ZPoly], b: &[ZPoly]) -> Vec<ZPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<ZPoly> = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bc.mul(&lr));
        }
        while matches!(r.last(), Some(c) if c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn prs_gcd(f: &ZPoly, g: &ZPoly, vars: &BTreeSet<Var>) -> ZPoly {
    let x = *vars.iter().next().unwrap();
    let cf = content_in(f, x);
    let cg = content_in(g, x);
    let cont = gcd(&cf, &cg);
    let mut a = f.div_exact(&cf).unwrap();
    let mut b = g.div_exact(&cg).unwrap();
    if a.degree_in(x) < b.degree_in(x) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut ca = a.coeffs_in(x);
    let mut cb = b.coeffs_in(x);
    loop {
        if cb.len() == 1 {
            // b is a nonzero constant in x and primitive, so the gcd is trivial
            return cont;
        }
        let r = prem(&ca, &cb);
        if r.is_empty() {
            let p = ZPoly::from_coeffs_in(x, &cb);
            let p = p.div_exact(&content_in(&p, x)).unwrap();
            return normalize_sign(p.mul(&cont));
        }
        let rp = ZPoly::from_coeffs_in(x, &r);
        let rp = rp.div_exact(&content_in(&rp, x)).unwrap();
        ca = cb;
        cb = rp.coeffs_in(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_zpoly;

    fn p(s: &str) -> ZPoly {
        parse_zpoly(s).unwrap()
    }

    #[test]
    fn simple_cases() {
        assert_eq!(gcd(&p("6*t1"), &p("4")), p("2"));
        assert_eq!(gcd(&p("t1^2 - t3^2"), &p("t1 - t3")), p("t3 - t1"));
        assert_eq!(gcd(&p("t1^2*t2"), &p("t1*t2^3 + t1")), p("t1"));
        assert_eq!(gcd(&p("0"), &p("-2*t1")), p("2*t1"));
        assert_eq!(gcd(&p("t1 + 1"), &p("t2 + 1")), p("1"));
    }

    #[test]
    fn multivariate_common_factor() {
        let a = p("t1^3 - t3 + 2*t2*t1");
        let b = p("7*t2^2*t3 - t1 + 5");
        let c = p("3*t1*t2 - t3^2 + 1");
        // normalized to a positive leading coefficient
        let g = gcd(&a.mul(&c), &b.mul(&c));
        assert_eq!(g, c.neg());
        let (_, ca, cb) = gcd_cofactors(&a.mul(&c), &b.mul(&c));
        assert_eq!(ca, a.neg());
        assert_eq!(cb, b.neg());
    }

    #[test]
    fn prs_fallback_agrees() {
        let a = p("t1^2*t2 - 3*t2^2 + t1 - 1");
        let b = p("t1*t2 + 4*t2^3 - 2");
        let c = p("2*t1*t2^2 - t1 + 3*t2");
        let vars: BTreeSet<Var> = [Var::t(1), Var::t(2)].into_iter().collect();
        let g = prs_gcd(&a.mul(&c), &b.mul(&c), &vars);
        assert_eq!(g, c);
        let h = heuristic(&a.mul(&c), &b.mul(&c), &vars).unwrap();
        assert_eq!(h, c);
    }

    #[test]
    fn coprime_large() {
        let a = p("t1^6 - t6");
        let b = p("t3^2*t8 + 36*t1^6 - 36*t6 + t2");
        assert!(gcd(&a, &b).is_one());
        let sq = a.mul(&a);
        assert_eq!(gcd(&sq.mul(&b), &a.mul(&p("t2 + t3"))), a);
    }
}

//! Constants and base matrices of the Dwork family: dimensions, the constant
//! intersection matrix Phi, Stirling numbers, the Gauss-Manin matrix B on the
//! (t1, t_{n+2}) base and the intersection-form matrix Omega.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use symcore::{rat, solve_linear, MatF, QuotientCtx, Rat, RatFn, Var};

use crate::error::{DworkError, Result};

/// How the constant c_n enters the computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CMode {
    /// c is kept as the indeterminate `c`.
    Symbolic,
    /// The matched default for n = 1..4; symbolic beyond.
    Matched,
    /// A fixed rational.
    Explicit(Rat),
}

impl CMode {
    pub fn label(&self) -> String {
        match self {
            CMode::Symbolic => "symbolic".into(),
            CMode::Matched => "matched".into(),
            CMode::Explicit(r) => format!("explicit:{}", r),
        }
    }
}

/// Values of c_n making the computed fields agree with the published
/// displays (and the even-n relation constants 4 and 36).
pub fn matched_c(n: usize) -> Option<Rat> {
    match n {
        1 => Some(rat(1, 27)),
        2 => Some(rat(-1, 64)),
        3 => Some(rat(1, 78125)),
        4 => Some(rat(1, 46656)),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DworkParams {
    pub n: usize,
    /// dimension of the moduli space T
    pub d: usize,
    pub m: usize,
    /// number of ambient chart variables
    pub big_d: usize,
    /// n mod 2
    pub rho: usize,
    pub c: RatFn,
    pub c_mode: CMode,
}

impl DworkParams {
    pub fn new(n: usize, mode: CMode) -> DworkParams {
        assert!(n >= 1, "n must be positive");
        let odd = n % 2 == 1;
        let d = if odd { (n + 1) * (n + 3) / 4 + 1 } else { n * (n + 2) / 4 + 1 };
        let m = if odd { (n + 1) / 2 } else { n / 2 };
        let big_d = if odd { d } else { d + 1 };
        let c = match &mode {
            CMode::Symbolic => RatFn::var(Var::C),
            CMode::Matched => matched_c(n).map(|r| RatFn::from_rat(&r)).unwrap_or_else(|| RatFn::var(Var::C)),
            CMode::Explicit(r) => RatFn::from_rat(r),
        };
        DworkParams { n, d, m, big_d, rho: n % 2, c, c_mode: mode }
    }

    pub fn is_odd(&self) -> bool {
        self.rho == 1
    }

    /// Size of S, Omega, Phi.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn t1(&self) -> Var {
        Var::t(1)
    }

    /// The base parameter t_{n+2}.
    pub fn tb(&self) -> Var {
        Var::t(self.n + 2)
    }

    pub fn chart_vars(&self) -> Vec<Var> {
        (1..=self.big_d).map(Var::t).collect()
    }

    /// t1^{n+2} - t_{n+2}
    pub fn disc(&self) -> RatFn {
        let ctx = QuotientCtx::plain();
        let x = RatFn::var(self.t1());
        let p = ctx.pow(&x, (self.n + 2) as i32).unwrap();
        ctx.sub(&p, &RatFn::var(self.tb()))
    }

    /// The rule-based chart layout is only confirmed against displays up to n = 5.
    pub fn rule_extrapolated(&self) -> bool {
        self.n >= 6
    }
}

/// `moduli_dim(n)` with symbolic c.
pub fn moduli_dim(n: usize) -> DworkParams {
    DworkParams::new(n, CMode::Symbolic)
}

/// Phi_n: [[0, J_m], [-J_m, 0]] for odd n, J_{n+1} for even n.
pub fn phi_matrix(n: usize) -> MatF {
    let size = n + 1;
    let mut phi = MatF::zero(size, size);
    if n % 2 == 1 {
        let m = (n + 1) / 2;
        for i in 0..m {
            phi.set(i, size - 1 - i, RatFn::one());
            phi.set(size - 1 - i, i, RatFn::from_i64(-1));
        }
    } else {
        for i in 0..size {
            phi.set(i, size - 1 - i, RatFn::one());
        }
    }
    phi
}

/// Stirling number of the second kind via the alternating sum.
pub fn stirling2(r: usize, s: usize) -> BigInt {
    assert!(s <= r);
    let mut acc = BigInt::zero();
    let mut binom = BigInt::one();
    for i in 0..=s {
        let term = &binom * BigInt::from(s - i).pow(r as u32);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        binom = binom * BigInt::from(s - i) / BigInt::from(i + 1);
    }
    let mut fact = BigInt::one();
    for k in 2..=s {
        fact *= BigInt::from(k);
    }
    acc / fact
}

/// Matrix-valued 1-form: variable -> coefficient matrix of its differential.
#[derive(Clone, PartialEq, Eq)]
pub struct OneFormMat {
    size: usize,
    comps: BTreeMap<Var, MatF>,
}

impl OneFormMat {
    pub fn new(size: usize) -> OneFormMat {
        OneFormMat { size, comps: BTreeMap::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, v: Var, m: MatF) {
        assert_eq!((m.rows(), m.cols()), (self.size, self.size));
        if m.is_zero() {
            self.comps.remove(&v);
        } else {
            self.comps.insert(v, m);
        }
    }

    pub fn get(&self, v: Var) -> Option<&MatF> {
        self.comps.get(&v)
    }

    /// Coefficient matrix of dv, zero when absent.
    pub fn component(&self, v: Var) -> MatF {
        self.comps.get(&v).cloned().unwrap_or_else(|| MatF::zero(self.size, self.size))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.comps.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &MatF)> {
        self.comps.iter().map(|(v, m)| (*v, m))
    }
}

impl fmt::Debug for OneFormMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, m) in &self.comps {
            writeln!(f, "d{}: {}", v, m)?;
        }
        Ok(())
    }
}

fn frac(num: &RatFn, den: &RatFn) -> RatFn {
    QuotientCtx::plain().div(num, den).expect("nonzero denominator")
}

/// Gauss-Manin matrix B of the Dwork family in the basis omega, as a 1-form
/// over {t1, t_{n+2}}.
pub fn base_connection(n: usize) -> OneFormMat {
    let ctx = QuotientCtx::plain();
    let p = moduli_dim(n);
    let size = p.size();
    let x = RatFn::var(p.t1());
    let y = RatFn::var(p.tb());
    let np2 = RatFn::from_i64((n + 2) as i64);
    let disc = p.disc();
    let xp = |k: usize| ctx.pow(&x, k as i32).unwrap();
    let np2y = ctx.mul(&np2, &y);
    let np2y_disc = ctx.mul(&np2y, &disc);

    let mut bx = MatF::zero(size, size);
    let mut by = MatF::zero(size, size);
    for i in 1..=n {
        by.set(i - 1, i - 1, frac(&RatFn::from_i64(-(i as i64)), &np2y));
        bx.set(i - 1, i, RatFn::one());
        by.set(i - 1, i, ctx.neg(&frac(&x, &np2y)));
    }
    for j in 1..=n {
        let s2 = RatFn::from_rat(&Rat::from_integer(stirling2(n + 2, j)));
        bx.set(n, j - 1, ctx.neg(&frac(&ctx.mul(&s2, &xp(j)), &disc)));
        by.set(n, j - 1, frac(&ctx.mul(&s2, &xp(j + 1)), &np2y_disc));
    }
    let s2 = RatFn::from_rat(&Rat::from_integer(stirling2(n + 2, n + 1)));
    bx.set(n, n, ctx.neg(&frac(&ctx.mul(&s2, &xp(n + 1)), &disc)));
    let top = ctx.add(
        &ctx.scale(&xp(n + 2), &rat((n * (n + 1) / 2) as i64, 1)),
        &ctx.scale(&y, &rat((n + 1) as i64, 1)),
    );
    by.set(n, n, frac(&top, &np2y_disc));

    let mut b = OneFormMat::new(size);
    b.insert(p.t1(), bx);
    b.insert(p.tb(), by);
    b
}

/// `dM_v - (B_v M + M B_v^T)` for one base variable.
fn omega_defect(om: &MatF, bv: &MatF, v: Var, ctx: &QuotientCtx) -> MatF {
    let lhs = om.derive(v, ctx);
    let rhs = bv.mul(om, ctx).add(&om.mul(&bv.transpose(), ctx), ctx);
    lhs.sub(&rhs, ctx)
}

/// Intersection-form matrix Omega in the basis omega: zero above the
/// antidiagonal, the prescribed antidiagonal, and the remaining entries
/// solved antidiagonal by antidiagonal from dOmega = B Omega + Omega B^T.
pub fn intersection_matrix(p: &DworkParams) -> Result<MatF> {
    let ctx = QuotientCtx::plain();
    let n = p.n;
    let size = p.size();
    let b = base_connection(n);
    let base_vars = [p.t1(), p.tb()];
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let signed = |f: &RatFn| if sign == 1 { f.clone() } else { ctx.neg(f) };

    let coef = Rat::from_integer(BigInt::from(-((n + 2) as i64)).pow(n as u32));
    let q = frac(&ctx.scale(&p.c, &coef), &p.disc());
    let mut om = MatF::zero(size, size);
    for j in 1..=size {
        let v = if (j - 1) % 2 == 0 { q.clone() } else { ctx.neg(&q) };
        om.set(j - 1, n + 1 - j, v);
    }

    // 1-based antidiagonal index s = i + j
    for s in (n + 3)..=(2 * n + 2) {
        let mut unknowns = Vec::new();
        for i in 1..=size {
            if s <= i || s - i > size || i > s - i {
                continue;
            }
            let j = s - i;
            if i == j && p.is_odd() {
                continue;
            }
            unknowns.push((i, j));
        }
        let place = |om: &mut MatF, vals: &[RatFn]| {
            for (&(i, j), v) in unknowns.iter().zip(vals) {
                om.set(i - 1, j - 1, v.clone());
                if i != j {
                    om.set(j - 1, i - 1, signed(v));
                }
            }
        };
        // the equations are affine in the unknowns: probe with unit vectors
        let eqs = |om: &MatF| -> Vec<RatFn> {
            let mut out = Vec::new();
            for v in base_vars {
                let def = omega_defect(om, &b.component(v), v, &ctx);
                for i in 1..=size {
                    if s - 1 > i && s - 1 - i <= size {
                        out.push(def.get(i - 1, s - 2 - i).clone());
                    }
                }
            }
            out
        };
        let zeros = vec![RatFn::zero(); unknowns.len()];
        place(&mut om, &zeros);
        let e0 = eqs(&om);
        let mut cols = Vec::with_capacity(unknowns.len());
        for k in 0..unknowns.len() {
            let mut unit = zeros.clone();
            unit[k] = RatFn::one();
            place(&mut om, &unit);
            let ek = eqs(&om);
            cols.push(ek.iter().zip(&e0).map(|(a, z)| ctx.sub(a, z)).collect::<Vec<_>>());
        }
        place(&mut om, &zeros);
        if unknowns.is_empty() {
            if let Some(bad) = e0.iter().find(|e| !e.is_zero()) {
                return Err(DworkError::OmegaInconsistent { antidiagonal: s, reason: format!("nonzero residue {}", bad) });
            }
            continue;
        }
        let mat = MatF::from_fn(e0.len(), unknowns.len(), |r, k| cols[k][r].clone());
        let rhs: Vec<RatFn> = e0.iter().map(|e| ctx.neg(e)).collect();
        let sol = solve_linear(&mat, &rhs, &ctx).map_err(|e| DworkError::OmegaInconsistent {
            antidiagonal: s,
            reason: e.to_string(),
        })?;
        let x = sol.unique().map_err(|e| DworkError::OmegaInconsistent { antidiagonal: s, reason: e.to_string() })?;
        place(&mut om, &x);
    }

    for v in base_vars {
        let def = omega_defect(&om, &b.component(v), v, &ctx);
        if let Some((i, j, e)) = def.first_nonzero() {
            return Err(DworkError::OmegaInconsistent {
                antidiagonal: i + j + 2,
                reason: format!("d{} identity fails at ({},{}): {}", v, i + 1, j + 1, e),
            });
        }
    }
    Ok(om)
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcore::parse_ratfn;

    fn pr(s: &str) -> RatFn {
        parse_ratfn(s, &QuotientCtx::plain()).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = moduli_dim(1);
        assert_eq!((p.d, p.m, p.big_d, p.rho), (3, 1, 3, 1));
        let p = moduli_dim(3);
        assert_eq!((p.d, p.m, p.big_d), (7, 2, 7));
        let p = moduli_dim(4);
        assert_eq!((p.d, p.m, p.big_d, p.rho), (7, 2, 8, 0));
    }

    #[test]
    fn phi_examples() {
        let m1 = |v: Vec<Vec<i64>>| MatF::from_rows(v.into_iter().map(|r| r.into_iter().map(RatFn::from_i64).collect()).collect());
        assert_eq!(phi_matrix(1), m1(vec![vec![0, 1], vec![-1, 0]]));
        assert_eq!(phi_matrix(2), m1(vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]));
        assert_eq!(
            phi_matrix(3),
            m1(vec![vec![0, 0, 0, 1], vec![0, 0, 1, 0], vec![0, -1, 0, 0], vec![-1, 0, 0, 0]])
        );
    }

    #[test]
    fn phi_symmetry_and_square() {
        let ctx = QuotientCtx::plain();
        for n in 1..=8 {
            let phi = phi_matrix(n);
            let sign = if n % 2 == 0 { RatFn::one() } else { RatFn::from_i64(-1) };
            assert_eq!(phi.transpose(), phi.scale(&sign, &ctx));
            assert_eq!(phi.mul(&phi, &ctx), MatF::identity(n + 1).scale(&sign, &ctx));
        }
    }

    fn brute_partitions(r: usize, s: usize) -> u64 {
        // count surjections r -> s, divide by s!
        let mut count = 0u64;
        let total = (s as u64).pow(r as u32);
        for code in 0..total {
            let mut seen = vec![false; s];
            let mut c = code;
            for _ in 0..r {
                seen[(c % s as u64) as usize] = true;
                c /= s as u64;
            }
            if seen.iter().all(|&b| b) {
                count += 1;
            }
        }
        count / (1..=s as u64).product::<u64>()
    }

    #[test]
    fn stirling_examples() {
        for r in 0..8 {
            assert_eq!(stirling2(r, r), BigInt::one());
        }
        assert_eq!(stirling2(4, 1), BigInt::one());
        assert_eq!(stirling2(3, 2), BigInt::from(3));
        assert_eq!(stirling2(3, 2), BigInt::from(brute_partitions(3, 2)));
        assert_eq!(stirling2(6, 3), BigInt::from(brute_partitions(6, 3)));
    }

    #[test]
    fn stirling_recurrence() {
        for r in 1..=12 {
            for s in 1..=r {
                let prev = if s <= r - 1 { stirling2(r - 1, s) } else { BigInt::zero() };
                let rhs = BigInt::from(s) * prev + stirling2(r - 1, s - 1);
                assert_eq!(stirling2(r, s), rhs, "S2({},{})", r, s);
            }
        }
    }

    #[test]
    fn base_connection_examples() {
        let b = base_connection(1);
        let by = b.component(Var::t(3));
        let bx = b.component(Var::t(1));
        assert_eq!(by.get(0, 0), &pr("-1/(3*t3)"));
        assert_eq!(bx.get(1, 0), &pr("-t1/(t1^3-t3)"));
        for n in 2..=5 {
            let b = base_connection(n);
            for v in [Var::t(1), Var::t(n + 2)] {
                assert!(b.component(v).get(0, 2).is_zero());
            }
        }
    }

    #[test]
    fn base_connection_sparsity() {
        for n in 1..=7 {
            let b = base_connection(n);
            let bx = b.component(Var::t(1));
            let by = b.component(Var::t(n + 2));
            for i in 0..n {
                for j in 0..=n {
                    let band_x = j == i + 1;
                    let band_y = j == i || j == i + 1;
                    assert_eq!(!bx.get(i, j).is_zero(), band_x, "n={} x ({},{})", n, i, j);
                    assert_eq!(!by.get(i, j).is_zero(), band_y, "n={} y ({},{})", n, i, j);
                }
            }
            for j in 0..=n {
                assert!(!bx.get(n, j).is_zero() && !by.get(n, j).is_zero());
            }
        }
    }

    #[test]
    fn omega_n1() {
        let p = moduli_dim(1);
        let om = intersection_matrix(&p).unwrap();
        let q = pr("-3*c/(t1^3-t3)");
        assert_eq!(om.get(0, 1), &q);
        assert_eq!(om.get(1, 0), &QuotientCtx::plain().neg(&q));
        assert!(om.get(0, 0).is_zero() && om.get(1, 1).is_zero());
    }

    #[test]
    fn omega_n2_entries() {
        let om = intersection_matrix(&moduli_dim(2)).unwrap();
        assert_eq!(om.get(0, 2), &pr("16*c/(t1^4-t4)"));
        assert_eq!(om.get(1, 2), &pr("32*c*t1^3/(t1^4-t4)^2"));
        assert_eq!(om.get(2, 2), &pr("-16*c*t1^2*(5*t1^4-t4)/(t1^4-t4)^3"));
    }

    #[test]
    fn omega_symmetry_and_invertible() {
        let ctx = QuotientCtx::plain();
        for n in 1..=7 {
            let om = intersection_matrix(&moduli_dim(n)).unwrap();
            let sign = if n % 2 == 0 { RatFn::one() } else { RatFn::from_i64(-1) };
            assert_eq!(om.transpose(), om.scale(&sign, &ctx), "n={}", n);
            assert!(om.get(0, 0).is_zero());
            for i in 0..=n {
                for j in 0..=n {
                    if i + j + 2 <= n + 1 {
                        assert!(om.get(i, j).is_zero());
                    }
                }
            }
            // antitriangular with nonzero antidiagonal, so invertible
            assert!(symcore::mat_inverse(&om, &ctx).is_ok());
        }
    }
}

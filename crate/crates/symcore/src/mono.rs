use std::cmp::Ordering;
use std::fmt;

use crate::var::{Var, MAX_VARS};

/// Exponent vector. Exponents are stored from the largest variable down,
/// so comparing (degree, array) gives graded lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono {
    deg: u32,
    e: [u8; MAX_VARS],
}

#[inline]
fn pos(v: Var) -> usize {
    MAX_VARS - 1 - v.slot()
}

impl Mono {
    pub const ONE: Mono = Mono { deg: 0, e: [0; MAX_VARS] };

    pub fn var(v: Var) -> Mono {
        Mono::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, k: u8) -> Mono {
        let mut m = Mono::ONE;
        m.e[pos(v)] = k;
        m.deg = k as u32;
        m
    }

    pub fn from_pairs(pairs: &[(Var, u8)]) -> Mono {
        let mut m = Mono::ONE;
        for &(v, k) in pairs {
            m.set(v, m.exp(v).checked_add(k).expect("exponent overflow"));
        }
        m
    }

    #[inline]
    pub fn exp(&self, v: Var) -> u8 {
        self.e[pos(v)]
    }

    pub fn set(&mut self, v: Var, k: u8) {
        let p = pos(v);
        self.deg = self.deg - self.e[p] as u32 + k as u32;
        self.e[p] = k;
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Variables with nonzero exponent, in increasing variable order.
    pub fn vars(&self) -> impl Iterator<Item = (Var, u8)> + '_ {
        (0..MAX_VARS)
            .rev()
            .filter(move |&p| self.e[p] != 0)
            .map(move |p| (Var::from_slot(MAX_VARS - 1 - p), self.e[p]))
    }

    #[inline]
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.e[i] = r.e[i].checked_add(o.e[i]).expect("exponent overflow");
        }
        r.deg += o.deg;
        r
    }

    /// self / o if o divides self.
    #[inline]
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if o.deg > self.deg {
            return None;
        }
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.e[i] = self.e[i].checked_sub(o.e[i])?;
        }
        r.deg -= o.deg;
        Some(r)
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && (0..MAX_VARS).all(|i| self.e[i] <= o.e[i])
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        let mut r = Mono::ONE;
        for i in 0..MAX_VARS {
            r.e[i] = self.e[i].min(o.e[i]);
            r.deg += r.e[i] as u32;
        }
        r
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut r = Mono::ONE;
        for i in 0..MAX_VARS {
            r.e[i] = self.e[i].max(o.e[i]);
            r.deg += r.e[i] as u32;
        }
        r
    }

    pub fn pow(&self, k: u32) -> Mono {
        let mut r = *self;
        for x in r.e.iter_mut() {
            *x = u8::try_from(*x as u32 * k).expect("exponent overflow");
        }
        r.deg *= k;
        r
    }

    /// Weighted degree; `w` is indexed by variable slot.
    pub fn weighted_degree(&self, w: &dyn Fn(Var) -> i64) -> i64 {
        self.vars().map(|(v, k)| w(v) * k as i64).sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Mono) -> Ordering {
        self.deg.cmp(&o.deg).then_with(|| self.e.cmp(&o.e))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, k) in self.vars() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(usize, u8)]) -> Mono {
        Mono::from_pairs(&p.iter().map(|&(i, k)| (Var::t(i), k)).collect::<Vec<_>>())
    }

    #[test]
    fn grlex() {
        // degree first
        assert!(m(&[(1, 2)]) > m(&[(5, 1)]));
        // then the larger variable wins
        assert!(m(&[(2, 1)]) > m(&[(1, 1)]));
        assert!(m(&[(1, 1), (3, 1)]) > m(&[(2, 2)]));
        assert!(Mono::var(Var::C) > m(&[(9, 1)]));
    }

    #[test]
    fn arithmetic() {
        let a = m(&[(1, 2), (3, 1)]);
        let b = m(&[(1, 1), (2, 1)]);
        assert_eq!(a.mul(&b), m(&[(1, 3), (2, 1), (3, 1)]));
        assert_eq!(a.div(&b), None);
        assert_eq!(a.div(&m(&[(1, 1)])), Some(m(&[(1, 1), (3, 1)])));
        assert_eq!(a.gcd(&b), m(&[(1, 1)]));
        assert_eq!(a.lcm(&b).degree(), 4);
        assert_eq!(a.to_string(), "t1^2*t3");
    }
}

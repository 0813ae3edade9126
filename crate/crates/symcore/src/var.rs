use std::fmt;
use std::str::FromStr;

use crate::error::SymError;

/// Number of variable slots in a monomial.
pub const MAX_VARS: usize = 64;

const T_BASE: u8 = 0;
const T_COUNT: u8 = 24;
const G_BASE: u8 = 24;
const G_COUNT: u8 = 12;
const H_BASE: u8 = 36;
const H_COUNT: u8 = 12;
const SYM_BASE: u8 = 48;
const SYM_COUNT: u8 = 15;
const C_SLOT: u8 = 63;

/// A variable. The slot index doubles as the variable order:
/// t1 < t2 < ... < g1 < ... < h1 < ... < formal symbols < c.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u8);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    /// chart coordinate t_i
    T(usize),
    /// first family of group parameters g_i
    G(usize),
    /// second family of group parameters h_i
    H(usize),
    /// formal symmetric symbol C_ijk, stored by sorted index triple
    Sym(usize),
    /// the constant c_n
    C,
}

impl Var {
    pub const C: Var = Var(C_SLOT);

    /// t_i, 1-based.
    pub fn t(i: usize) -> Var {
        assert!(i >= 1 && i <= T_COUNT as usize, "t{} out of range", i);
        Var(T_BASE + (i - 1) as u8)
    }

    pub fn g(i: usize) -> Var {
        assert!(i >= 1 && i <= G_COUNT as usize, "g{} out of range", i);
        Var(G_BASE + (i - 1) as u8)
    }

    pub fn h(i: usize) -> Var {
        assert!(i >= 1 && i <= H_COUNT as usize, "h{} out of range", i);
        Var(H_BASE + (i - 1) as u8)
    }

    /// Formal symbol C_{ijk}; indices may come in any order.
    pub fn sym(i: usize, j: usize, k: usize) -> Var {
        let mut v = [i, j, k];
        v.sort_unstable();
        let idx = sym_index(v);
        assert!(idx < SYM_COUNT as usize, "C{}{}{} out of range", v[0], v[1], v[2]);
        Var(SYM_BASE + idx as u8)
    }

    pub fn slot(self) -> usize {
        self.0 as usize
    }

    pub fn from_slot(s: usize) -> Var {
        assert!(s < MAX_VARS);
        Var(s as u8)
    }

    pub fn kind(self) -> VarKind {
        let s = self.0;
        if s == C_SLOT {
            VarKind::C
        } else if s >= SYM_BASE {
            VarKind::Sym((s - SYM_BASE) as usize)
        } else if s >= H_BASE {
            VarKind::H((s - H_BASE) as usize + 1)
        } else if s >= G_BASE {
            VarKind::G((s - G_BASE) as usize + 1)
        } else {
            VarKind::T((s - T_BASE) as usize + 1)
        }
    }

    /// Index i of a chart variable t_i.
    pub fn t_index(self) -> Option<usize> {
        match self.kind() {
            VarKind::T(i) => Some(i),
            _ => None,
        }
    }
}

// Triples i <= j <= k ordered by k, then j, then i, so the numbering
// does not depend on the Hodge number.
fn sym_index(v: [usize; 3]) -> usize {
    let mut idx = 0;
    for k in 1..=v[2] {
        for j in 1..=k {
            for i in 1..=j {
                if [i, j, k] == v {
                    return idx;
                }
                idx += 1;
            }
        }
    }
    unreachable!()
}

fn sym_triple(idx: usize) -> [usize; 3] {
    let mut n = 0;
    for k in 1.. {
        for j in 1..=k {
            for i in 1..=j {
                if n == idx {
                    return [i, j, k];
                }
                n += 1;
            }
        }
    }
    unreachable!()
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            VarKind::T(i) => write!(f, "t{}", i),
            VarKind::G(i) => write!(f, "g{}", i),
            VarKind::H(i) => write!(f, "h{}", i),
            VarKind::Sym(i) => {
                let [a, b, c] = sym_triple(i);
                write!(f, "C{}{}{}", a, b, c)
            }
            VarKind::C => write!(f, "c"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Var {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Var, SymError> {
        let bad = || SymError::UnknownVariable(s.to_string());
        if s == "c" {
            return Ok(Var::C);
        }
        let (head, rest) = s.split_at(1.min(s.len()));
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if head == "C" {
            if rest.len() != 3 {
                return Err(bad());
            }
            let d: Vec<usize> = rest.bytes().map(|b| (b - b'0') as usize).collect();
            if d.contains(&0) {
                return Err(bad());
            }
            let mut v = [d[0], d[1], d[2]];
            v.sort_unstable();
            if sym_index(v) >= SYM_COUNT as usize {
                return Err(bad());
            }
            return Ok(Var::sym(v[0], v[1], v[2]));
        }
        let i: usize = rest.parse().map_err(|_| bad())?;
        let (base, count) = match head {
            "t" => (T_BASE, T_COUNT),
            "g" => (G_BASE, G_COUNT),
            "h" => (H_BASE, H_COUNT),
            _ => return Err(bad()),
        };
        if i == 0 || i > count as usize {
            return Err(bad());
        }
        Ok(Var(base + (i - 1) as u8))
    }
}

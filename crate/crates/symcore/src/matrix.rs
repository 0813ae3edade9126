use std::fmt;

use crate::error::SymError;
use crate::ratfn::{QuotientCtx, RatFn};

/// Dense row-major matrix of fractions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatF {
    rows: usize,
    cols: usize,
    data: Vec<RatFn>,
}

/// Result of `solve_linear`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub x: Vec<RatFn>,
    /// M*x - b vanishes identically (checked by re-multiplication).
    pub residual_zero: bool,
    /// Dimension of the solution space; free unknowns were set to zero.
    pub nullity: usize,
}

impl LinearSolution {
    /// The solution, or `Underdetermined` if it is not unique.
    pub fn unique(self) -> Result<Vec<RatFn>, SymError> {
        if self.nullity > 0 {
            Err(SymError::Underdetermined(self.nullity))
        } else {
            Ok(self.x)
        }
    }
}

impl MatF {
    pub fn zero(rows: usize, cols: usize) -> MatF {
        MatF { rows, cols, data: vec![RatFn::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> MatF {
        let mut m = MatF::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = RatFn::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatFn>>) -> MatF {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        MatF { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> RatFn) -> MatF {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatF { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// 0-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &RatFn {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFn) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RatFn] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[RatFn] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> MatF {
        MatF::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&RatFn) -> RatFn) -> MatF {
        MatF { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    fn check_same(&self, o: &MatF) -> Result<(), SymError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(SymError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &MatF, ctx: &QuotientCtx) -> MatF {
        self.check_same(o).unwrap();
        MatF {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| ctx.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, o: &MatF, ctx: &QuotientCtx) -> MatF {
        self.check_same(o).unwrap();
        MatF {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| ctx.sub(a, b)).collect(),
        }
    }

    pub fn neg(&self, ctx: &QuotientCtx) -> MatF {
        self.map(|x| ctx.neg(x))
    }

    pub fn scale(&self, f: &RatFn, ctx: &QuotientCtx) -> MatF {
        if f.is_zero() {
            return MatF::zero(self.rows, self.cols);
        }
        self.map(|x| ctx.mul(x, f))
    }

    pub fn mul(&self, o: &MatF, ctx: &QuotientCtx) -> MatF {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = MatF::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = RatFn::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = ctx.add(&acc, &ctx.mul(a, b));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, x: &[RatFn], ctx: &QuotientCtx) -> Vec<RatFn> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = RatFn::zero();
                for k in 0..self.cols {
                    if !self.get(i, k).is_zero() && !x[k].is_zero() {
                        acc = ctx.add(&acc, &ctx.mul(self.get(i, k), &x[k]));
                    }
                }
                acc
            })
            .collect()
    }

    /// [self, o] = self*o - o*self.
    pub fn commutator(&self, o: &MatF, ctx: &QuotientCtx) -> MatF {
        self.mul(o, ctx).sub(&o.mul(self, ctx), ctx)
    }

    pub fn derive(&self, v: crate::var::Var, ctx: &QuotientCtx) -> MatF {
        self.map(|x| ctx.derive(x, v))
    }

    /// First nonzero entry in row-major order, 0-based.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &RatFn)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.get(i, j)))
            .find(|(_, _, x)| !x.is_zero())
    }
}

fn weight(f: &RatFn) -> usize {
    f.num().len() + f.den().len()
}

/// Solves M x = b by Gauss-Jordan elimination over the fraction field,
/// choosing the sparsest available pivot at each step.
pub fn solve_linear(m: &MatF, b: &[RatFn], ctx: &QuotientCtx) -> Result<LinearSolution, SymError> {
    if b.len() != m.rows {
        return Err(SymError::DimensionMismatch(format!("{} rows vs rhs of {}", m.rows, b.len())));
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<RatFn>> = (0..rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| weight(&a[i][c]));
        let Some(p) = best else { continue };
        a.swap(r, p);
        let inv = ctx.inv(&a[r][c])?;
        for k in c..=cols {
            if !a[r][k].is_zero() {
                a[r][k] = ctx.mul(&a[r][k], &inv);
            }
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in c..=cols {
                if a[r][k].is_zero() {
                    continue;
                }
                let t = ctx.mul(&f, &a[r][k]);
                a[i][k] = ctx.sub(&a[i][k], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    for row in a.iter().skip(r) {
        if !row[cols].is_zero() {
            return Err(SymError::Inconsistent);
        }
    }
    let mut x = vec![RatFn::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    let mx = m.mul_vec(&x, ctx);
    let residual_zero = mx.iter().zip(b).all(|(u, v)| ctx.sub(u, v).is_zero());
    Ok(LinearSolution { x, residual_zero, nullity: cols - pivots.len() })
}

/// Inverse of a square matrix. Lower-triangular input uses forward
/// substitution.
pub fn mat_inverse(m: &MatF, ctx: &QuotientCtx) -> Result<MatF, SymError> {
    if !m.is_square() {
        return Err(SymError::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = m.rows;
    if m.is_lower_triangular() {
        let mut x = MatF::zero(n, n);
        let mut dinv = Vec::with_capacity(n);
        for i in 0..n {
            if m.get(i, i).is_zero() {
                return Err(SymError::Singular);
            }
            dinv.push(ctx.inv(m.get(i, i))?);
        }
        for j in 0..n {
            x.set(j, j, dinv[j].clone());
            for i in j + 1..n {
                let mut acc = RatFn::zero();
                for k in j..i {
                    if m.get(i, k).is_zero() || x.get(k, j).is_zero() {
                        continue;
                    }
                    acc = ctx.add(&acc, &ctx.mul(m.get(i, k), x.get(k, j)));
                }
                let v = ctx.neg(&ctx.mul(&acc, &dinv[i]));
                x.set(i, j, v);
            }
        }
        return Ok(x);
    }
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<RatFn> = (0..n).map(|i| if i == j { RatFn::one() } else { RatFn::zero() }).collect();
        let sol = match solve_linear(m, &e, ctx) {
            Ok(s) => s,
            Err(SymError::Inconsistent) => return Err(SymError::Singular),
            Err(e) => return Err(e),
        };
        if sol.nullity > 0 {
            return Err(SymError::Singular);
        }
        cols.push(sol.x);
    }
    Ok(MatF::from_fn(n, n, |i, j| cols[j][i].clone()))
}

impl fmt::Display for MatF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MatF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

//! Small exact linear algebra over Z/p^M with pivot-valuation ledgers.
//!
//! Everything here is desk-scale (matrices up to a few dozen rows), so the
//! algorithms are chosen for exactness, not asymptotics: Berkowitz for the
//! characteristic polynomial (division-free, so no ledger loss), Gaussian
//! elimination with minimal-valuation pivoting for solves and kernels.

use crate::error::{Error, Result};
use crate::padic::{PadicCtx, PadicElem};

#[derive(Debug, Clone)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<PadicElem>,
    ctx: PadicCtx,
}

impl Matrix {
    pub fn zero(ctx: PadicCtx, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![ctx.zero(); rows * cols], ctx }
    }

    pub fn identity(ctx: PadicCtx, n: usize) -> Matrix {
        let mut m = Matrix::zero(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = ctx.one();
        }
        m
    }

    pub fn ctx(&self) -> PadicCtx {
        self.ctx
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].add(&a.mul(&other[(k, j)]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[PadicElem]) -> Vec<PadicElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ctx.zero();
                for j in 0..self.cols {
                    acc = acc.add(&self[(i, j)].mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = out.data[i].add(&other.data[i]);
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = out.data[i].sub(&other.data[i]);
        }
        out
    }

    pub fn scal(&self, c: &PadicElem) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = x.mul(c);
        }
        out
    }

    pub fn pow(&self, mut e: u128) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.ctx, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn congruent(&self, other: &Matrix, digits: u32) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.congruent(b, digits))
    }

    /// Characteristic polynomial det(xI - A) by the Berkowitz vector method:
    /// division-free, so entries stay exact mod p^M.  Returned as
    /// coefficients c_0..c_n ordered low to high with c_n = 1.
    pub fn charpoly(&self) -> Vec<PadicElem> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ctx = self.ctx;
        if n == 0 {
            return vec![ctx.one()];
        }
        // Invariant: c holds the Berkowitz vector of the leading r x r block,
        // highest degree first, with lead entry (-1)^r.
        let mut c: Vec<PadicElem> = vec![ctx.one().neg(), self[(0, 0)]];
        for r in 1..n {
            let m = self[(r, r)];
            // powers[j] = R * M^j * S over the leading block
            let mut powers = Vec::with_capacity(r);
            let mut cur: Vec<PadicElem> = (0..r).map(|i| self[(i, r)]).collect();
            for _ in 0..r {
                let mut dot = ctx.zero();
                for i in 0..r {
                    dot = dot.add(&self[(r, i)].mul(&cur[i]));
                }
                powers.push(dot);
                let mut next = vec![ctx.zero(); r];
                for i in 0..r {
                    for j in 0..r {
                        next[i] = next[i].add(&self[(i, j)].mul(&cur[j]));
                    }
                }
                cur = next;
            }
            // Toeplitz product: nc[i] -= c[i]; nc[i+1] += m c[i];
            // nc[i+j+2] += powers[j] c[i].
            let mut nc = vec![ctx.zero(); c.len() + 1];
            for i in 0..c.len() {
                nc[i] = nc[i].sub(&c[i]);
                nc[i + 1] = nc[i + 1].add(&m.mul(&c[i]));
                for (j, pw) in powers.iter().enumerate() {
                    let k = i + j + 2;
                    if k < nc.len() {
                        nc[k] = nc[k].add(&pw.mul(&c[i]));
                    }
                }
            }
            c = nc;
        }
        // lead entry is (-1)^n: flip to a monic low..high vector
        let sign = if n % 2 == 0 { ctx.one() } else { ctx.one().neg() };
        c.iter().rev().map(|x| x.mul(&sign)).collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = PadicElem;
    fn index(&self, (i, j): (usize, usize)) -> &PadicElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut PadicElem {
        &mut self.data[i * self.cols + j]
    }
}

/// Evaluate a polynomial given low..high at x.
pub fn poly_eval(coeffs: &[PadicElem], x: &PadicElem) -> PadicElem {
    let ctx = x.ctx();
    let mut acc = ctx.zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

fn poly_derivative(coeffs: &[PadicElem], ctx: &PadicCtx) -> Vec<PadicElem> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul(&ctx.from_u64(i as u64)))
        .collect()
}

/// Hensel-lift all roots of a monic polynomial that are simple modulo p.
/// Returns the lifted roots; roots that collide mod p are reported through
/// `MultiplicityNotOne` only if `require_all_simple` is set.
pub fn simple_roots(coeffs: &[PadicElem], ctx: &PadicCtx) -> Result<Vec<PadicElem>> {
    let p = ctx.p();
    let deriv = poly_derivative(coeffs, ctx);
    let mut roots = Vec::new();
    for r in 0..p {
        let x0 = ctx.from_u64(r);
        if poly_eval(coeffs, &x0).valuation() == 0 {
            continue;
        }
        if poly_eval(&deriv, &x0).valuation() > 0 {
            // multiple root mod p: not liftable by plain Newton
            continue;
        }
        let mut x = x0;
        for _ in 0..ctx.prec() + 1 {
            let fx = poly_eval(coeffs, &x);
            if fx.is_zero() {
                break;
            }
            x = x.sub(&fx.mul(&poly_eval(&deriv, &x).invert()?));
        }
        roots.push(x);
    }
    Ok(roots)
}

/// Count roots mod p with multiplicity >= 2 (obstructions to eigen-splitting).
pub fn has_multiple_root_mod_p(coeffs: &[PadicElem], ctx: &PadicCtx) -> bool {
    let deriv = poly_derivative(coeffs, ctx);
    (0..ctx.p()).any(|r| {
        let x0 = ctx.from_u64(r);
        poly_eval(coeffs, &x0).valuation() > 0 && poly_eval(&deriv, &x0).valuation() > 0
    })
}

/// Solve M x = b by Gaussian elimination with minimal-valuation pivots.
/// Choosing the minimal-valuation pivot per column keeps every elimination
/// factor integral; dividing through a pivot of valuation v charges the
/// ledger v digits.  Returns (solution, certified_digits).
pub fn solve(m: &Matrix, b: &[PadicElem]) -> Result<(Vec<PadicElem>, u32)> {
    assert_eq!(m.rows, b.len());
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let ctx = m.ctx();
    let mut a = m.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let mut best = col;
        let mut best_v = u32::MAX;
        for row in col..n {
            let v = a[(row, col)].valuation();
            if v < best_v {
                best_v = v;
                best = row;
            }
        }
        if best_v >= ctx.prec() {
            return Err(Error::BasisDegenerate(format!(
                "pivot column {col} vanishes at working precision"
            )));
        }
        if best != col {
            for j in 0..n {
                let t = a[(col, j)];
                a[(col, j)] = a[(best, j)];
                a[(best, j)] = t;
            }
            rhs.swap(col, best);
        }
        let piv = a[(col, col)];
        let inv = piv.div_p_pow(best_v)?.invert()?;
        for row in 0..n {
            if row == col {
                continue;
            }
            let entry = a[(row, col)];
            if entry.is_zero() {
                continue;
            }
            // v(entry) >= v(pivot) by the pivot choice, so this is exact
            let factor = entry.div_p_pow(best_v)?.mul(&inv);
            for j in 0..n {
                a[(row, j)] = a[(row, j)].sub(&factor.mul(&a[(col, j)]));
            }
            rhs[row] = rhs[row].sub(&factor.mul(&rhs[col]));
        }
    }
    let mut x = vec![ctx.zero(); n];
    let mut min_digits = ctx.prec();
    for i in 0..n {
        let piv = a[(i, i)];
        let v = piv.valuation();
        if v >= ctx.prec() {
            return Err(Error::BasisDegenerate(format!("zero diagonal at row {i}")));
        }
        let r = rhs[i];
        if r.valuation() < v {
            return Err(Error::PrecisionExhausted(format!(
                "rhs valuation {} below pivot valuation {v} at row {i}",
                r.valuation()
            )));
        }
        let xi = r.div_p_pow(v)?.mul(&piv.div_p_pow(v)?.invert()?);
        min_digits = min_digits.min(xi.prec());
        x[i] = xi;
    }
    Ok((x, min_digits))
}

/// One kernel vector of a matrix whose reduction mod p has corank exactly 1.
/// The free coordinate is normalized to 1.
pub fn kernel_vector(m: &Matrix) -> Result<Vec<PadicElem>> {
    let n = m.rows;
    let mut a = m.clone();
    let mut col_of_row: Vec<Option<usize>> = vec![None; n];
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        // find a unit pivot in this column below `row`
        let mut found = None;
        for r in row..n {
            if a[(r, col)].valuation() == 0 {
                found = Some(r);
                break;
            }
        }
        let Some(r) = found else { continue };
        if r != row {
            for j in 0..n {
                let t = a[(row, j)];
                a[(row, j)] = a[(r, j)];
                a[(r, j)] = t;
            }
        }
        let inv = a[(row, col)].invert()?;
        for j in 0..n {
            a[(row, j)] = a[(row, j)].mul(&inv);
        }
        for r2 in 0..n {
            if r2 == row {
                continue;
            }
            let f = a[(r2, col)];
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                a[(r2, j)] = a[(r2, j)].sub(&f.mul(&a[(row, j)]));
            }
        }
        col_of_row[row] = Some(col);
        pivot_cols.push(col);
        row += 1;
    }
    if row != n - 1 {
        return Err(Error::MultiplicityNotOne);
    }
    let free_col = (0..n).find(|c| !pivot_cols.contains(c)).unwrap();
    let mut v = vec![m.ctx().zero(); n];
    v[free_col] = m.ctx().one();
    for r in 0..row {
        let c = col_of_row[r].unwrap();
        v[c] = a[(r, free_col)].neg();
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicCtx {
        PadicCtx::new(7, 6).unwrap()
    }

    #[test]
    fn charpoly_2x2() {
        let c = ctx();
        let mut m = Matrix::zero(c, 2, 2);
        m[(0, 0)] = c.from_u64(2);
        m[(0, 1)] = c.from_u64(1);
        m[(1, 0)] = c.from_u64(3);
        m[(1, 1)] = c.from_u64(4);
        // x^2 - 6x + 5
        let cp = m.charpoly();
        assert_eq!(cp.len(), 3);
        assert!(cp[2].congruent_shared(&c.one()));
        assert!(cp[1].congruent_shared(&c.from_i64(-6)));
        assert!(cp[0].congruent_shared(&c.from_i64(5)));
    }

    #[test]
    fn charpoly_3x3_diag() {
        let c = ctx();
        let mut m = Matrix::zero(c, 3, 3);
        for (i, d) in [1u64, 2, 3].iter().enumerate() {
            m[(i, i)] = c.from_u64(*d);
        }
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let cp = m.charpoly();
        assert!(cp[3].congruent_shared(&c.one()));
        assert!(cp[2].congruent_shared(&c.from_i64(-6)));
        assert!(cp[1].congruent_shared(&c.from_i64(11)));
        assert!(cp[0].congruent_shared(&c.from_i64(-6)));
    }

    #[test]
    fn roots_and_kernel() {
        let c = ctx();
        // x^2 - 5x + 6: roots 2, 3
        let coeffs = vec![c.from_i64(6), c.from_i64(-5), c.one()];
        let mut roots = simple_roots(&coeffs, &c).unwrap();
        roots.sort_by_key(|r| r.residue());
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].residue(), 2);
        assert_eq!(roots[1].residue(), 3);
        // kernel of (A - 2I) for diag-ish A
        let mut m = Matrix::zero(c, 2, 2);
        m[(0, 0)] = c.zero();
        m[(0, 1)] = c.from_u64(1);
        m[(1, 0)] = c.zero();
        m[(1, 1)] = c.from_u64(1);
        let v = kernel_vector(&m).unwrap();
        let img = m.mul_vec(&v);
        assert!(img.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_unit_pivots() {
        let c = ctx();
        let mut m = Matrix::zero(c, 2, 2);
        m[(0, 0)] = c.from_u64(1);
        m[(0, 1)] = c.from_u64(2);
        m[(1, 0)] = c.from_u64(3);
        m[(1, 1)] = c.from_u64(4);
        let b = vec![c.from_u64(5), c.from_u64(11)];
        let (x, digits) = solve(&m, &b).unwrap();
        assert_eq!(digits, 6);
        let back = m.mul_vec(&x);
        assert!(back[0].congruent_shared(&b[0]));
        assert!(back[1].congruent_shared(&b[1]));
    }
}

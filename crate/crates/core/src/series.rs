//! Dense truncated q-series over exact p-adic coefficients.
//!
//! This is the shared base ring S+ for the operator-interpolation engine and
//! the coefficient layer of the modular-form module: elements are
//! sum_{n < Q} s_n q^n with the derivation theta(q^n) = n q^n and the
//! value-oracle action (phi . s)_n = phi(n) s_n extending it.

use crate::error::{Error, Result};
use crate::padic::{PadicCtx, PadicElem};

#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    coeffs: Vec<PadicElem>,
    ctx: PadicCtx,
}

impl QSeries {
    pub fn zero(ctx: PadicCtx, qprec: usize) -> QSeries {
        QSeries { coeffs: vec![ctx.zero(); qprec], ctx }
    }

    pub fn one(ctx: PadicCtx, qprec: usize) -> QSeries {
        let mut s = QSeries::zero(ctx, qprec);
        if qprec > 0 {
            s.coeffs[0] = ctx.one();
        }
        s
    }

    /// q^n truncated at qprec.
    pub fn monomial(ctx: PadicCtx, n: usize, qprec: usize) -> QSeries {
        let mut s = QSeries::zero(ctx, qprec);
        if n < qprec {
            s.coeffs[n] = ctx.one();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<PadicElem>, ctx: PadicCtx) -> QSeries {
        QSeries { coeffs, ctx }
    }

    pub fn ctx(&self) -> PadicCtx {
        self.ctx
    }

    pub fn qprec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> PadicElem {
        self.coeffs.get(n).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn coeffs(&self) -> &[PadicElem] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, v: PadicElem) {
        if n < self.coeffs.len() {
            self.coeffs[n] = v;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate_q(&self, qprec: usize) -> QSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(qprec);
        QSeries { coeffs, ctx: self.ctx }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let q = self.qprec().min(other.qprec());
        let coeffs = (0..q).map(|n| self.coeffs[n].add(&other.coeffs[n])).collect();
        QSeries { coeffs, ctx: self.ctx }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let q = self.qprec().min(other.qprec());
        let coeffs = (0..q).map(|n| self.coeffs[n].sub(&other.coeffs[n])).collect();
        QSeries { coeffs, ctx: self.ctx }
    }

    pub fn neg(&self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), ctx: self.ctx }
    }

    pub fn scal(&self, c: &PadicElem) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(), ctx: self.ctx }
    }

    pub fn scal_i64(&self, c: i64) -> QSeries {
        self.scal(&self.ctx.from_i64(c))
    }

    /// Cauchy product truncated at min(Q_a, Q_b).
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let q = self.qprec().min(other.qprec());
        let mut coeffs = vec![self.ctx.zero(); q];
        for i in 0..q {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..q - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        QSeries { coeffs, ctx: self.ctx }
    }

    pub fn pow(&self, mut e: u64) -> QSeries {
        let mut base = self.clone();
        let mut acc = QSeries::one(self.ctx, self.qprec());
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

    /// Inverse of a series with unit constant term, by the linear recurrence
    /// b_n = -a_0^{-1} sum_{j>=1} a_j b_{n-j}.
    pub fn invert(&self) -> Result<QSeries> {
        if self.qprec() == 0 {
            return Err(Error::QPrecisionExhausted("empty series".into()));
        }
        let a0 = self.coeffs[0];
        if a0.valuation() > 0 {
            return Err(Error::NotAUnit);
        }
        let a0inv = a0.invert()?;
        let q = self.qprec();
        let mut b = vec![self.ctx.zero(); q];
        b[0] = a0inv;
        for n in 1..q {
            let mut acc = self.ctx.zero();
            for j in 1..=n {
                acc = acc.add(&self.coeffs[j].mul(&b[n - j]));
            }
            b[n] = acc.neg().mul(&a0inv);
        }
        Ok(QSeries { coeffs: b, ctx: self.ctx })
    }

    /// The Atkin--Serre derivation theta = q d/dq: a_n -> n a_n.
    pub fn theta(&self) -> QSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.mul(&self.ctx.from_u64(n as u64)))
            .collect();
        QSeries { coeffs, ctx: self.ctx }
    }

    /// Value-oracle action: a_n -> phi(n) a_n.  Taking phi = identity
    /// recovers theta.
    pub fn oracle_action<F: Fn(u64) -> PadicElem>(&self, phi: F) -> QSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.mul(&phi(n as u64)))
            .collect();
        QSeries { coeffs, ctx: self.ctx }
    }

    /// Minimal valuation over coefficients (the sup-norm exponent); equals
    /// the ledger precision for an identically-zero series.
    pub fn min_valuation(&self) -> u32 {
        self.coeffs.iter().map(|c| c.valuation()).min().unwrap_or(0)
    }

    /// Minimal ledger precision over coefficients.
    pub fn min_prec(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).min().unwrap_or(0)
    }

    pub fn div_p_pow(&self, e: u32) -> Result<QSeries> {
        let coeffs: Result<Vec<_>> = self.coeffs.iter().map(|c| c.div_p_pow(e)).collect();
        Ok(QSeries { coeffs: coeffs?, ctx: self.ctx.with_prec(self.ctx.prec() - e) })
    }

    pub fn mul_p_pow(&self, e: u32) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| c.mul_p_pow(e)).collect(), ctx: self.ctx }
    }

    /// Coefficientwise agreement modulo p^digits on the shared q-range.
    pub fn congruent(&self, other: &QSeries, digits: u32) -> bool {
        let q = self.qprec().min(other.qprec());
        (0..q).all(|n| self.coeffs[n].congruent(&other.coeffs[n], digits))
    }

    pub fn congruent_shared(&self, other: &QSeries) -> bool {
        let q = self.qprec().min(other.qprec());
        (0..q).all(|n| self.coeffs[n].congruent_shared(&other.coeffs[n]))
    }
}

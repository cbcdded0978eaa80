//! Exact Bernoulli numbers through the tangent-number triangle.
//!
//! The triangle recurrence works entirely over integers, so B_{2n} comes out
//! as one exact division at the end; that keeps weight-500-scale Eisenstein
//! constants affordable, where the naive convolution over rationals is not.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{PadicCtx, PadicElem};

/// B_k as an exact rational.  B_1 = -1/2; odd k >= 3 give 0.
pub fn bernoulli(k: usize) -> BigRational {
    match k {
        0 => return BigRational::one(),
        1 => return BigRational::new(BigInt::from(-1), BigInt::from(2)),
        _ if k % 2 == 1 => return BigRational::zero(),
        _ => {}
    }
    let n = k / 2;
    // tangent numbers: t[1] = 1, t[j] = (j-1) t[j-1], then the triangle
    let mut t: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    t[1] = BigUint::one();
    for j in 2..=n {
        t[j] = &t[j - 1] * BigUint::from(j - 1);
    }
    for row in 2..=n {
        for j in row..=n {
            t[j] = &t[j - 1] * BigUint::from(j - row) + &t[j] * BigUint::from(j - row + 2);
        }
    }
    // B_{2n} = (-1)^{n-1} 2n t_n / (4^n (4^n - 1))
    let four_n = BigUint::from(4u32).pow(n as u32);
    let den = &four_n * (&four_n - BigUint::one());
    let num = BigInt::from(&t[n] * BigUint::from(2 * n));
    let num = if n % 2 == 1 { num } else { -num };
    BigRational::new(num, BigInt::from(den))
}

fn bigint_valuation(x: &BigInt, p: u64) -> u32 {
    let mut v = 0;
    let mut y = x.abs();
    let pp = BigInt::from(p);
    while (&y % &pp).is_zero() && !y.is_zero() {
        y /= &pp;
        v += 1;
    }
    v
}

fn bigint_mod(x: &BigInt, ctx: &PadicCtx) -> PadicElem {
    let m = BigInt::from(ctx.modulus());
    let r = ((x % &m) + &m) % &m;
    let (_, digits) = r.to_u64_digits();
    ctx.from_u64(digits.first().copied().unwrap_or(0))
}

/// Map an exact rational into Z/p^M; fails when p divides the reduced
/// denominator (the von Staudt-Clausen style obstruction surfaces here).
pub fn rational_mod(x: &BigRational, ctx: &PadicCtx) -> Result<PadicElem> {
    let den = x.denom();
    if bigint_valuation(den, ctx.p()) > 0 {
        return Err(Error::EisensteinNotIntegral(format!(
            "denominator has positive valuation at p = {}",
            ctx.p()
        )));
    }
    let n = bigint_mod(x.numer(), ctx);
    let d = bigint_mod(den, ctx);
    Ok(n.mul(&d.invert()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli(0), br(1, 1));
        assert_eq!(bernoulli(1), br(-1, 2));
        assert_eq!(bernoulli(2), br(1, 6));
        assert_eq!(bernoulli(3), br(0, 1));
        assert_eq!(bernoulli(4), br(-1, 30));
        assert_eq!(bernoulli(6), br(1, 42));
        assert_eq!(bernoulli(8), br(-1, 30));
        assert_eq!(bernoulli(10), br(5, 66));
        assert_eq!(bernoulli(12), br(-691, 2730));
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        // denominator of B_k is the product of primes q with (q-1) | k
        for k in [2usize, 4, 6, 8, 10, 12, 16, 20] {
            let b = bernoulli(k);
            let mut den = BigInt::one();
            for q in 2u64..=(k as u64 + 1) {
                let mut is_p = true;
                for d in 2..q {
                    if q % d == 0 {
                        is_p = false;
                        break;
                    }
                }
                if is_p && k as u64 % (q - 1) == 0 {
                    den *= BigInt::from(q);
                }
            }
            assert_eq!(b.denom().clone(), den, "k = {k}");
        }
    }

    #[test]
    fn rational_mod_obstruction() {
        let ctx = PadicCtx::new(5, 4).unwrap();
        assert!(rational_mod(&br(1, 3), &ctx).is_ok());
        assert!(rational_mod(&br(2, 15), &ctx).is_err());
        assert_eq!(rational_mod(&br(-1, 2), &ctx).unwrap().residue(), 312);
    }

    #[test]
    fn kummer_congruence_spot_check() {
        // B_k / k = B_{k'} / k' mod 5 for k = 2, k' = 6 (k = k' mod 4)
        let ctx = PadicCtx::new(5, 1).unwrap();
        let b2 = rational_mod(&(bernoulli(2) / br(2, 1)), &ctx).unwrap();
        let b6 = rational_mod(&(bernoulli(6) / br(6, 1)), &ctx).unwrap();
        assert_eq!(b2, b6);
    }
}

//! Arithmetic modulo an odd prime `p` together with the generator-derived
//! constants used by the constructions.

use crate::error::{Error, Result};
use crate::perm::Label;

/// Largest prime accepted by the `p²` constructions (`n = p² ≤ 9409`).
pub const MAX_P_SQUARED_PRIME: u32 = 97;

/// Deterministic trial division; adequate for `n < 2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`.
pub fn mod_inverse(a: u64, p: u64) -> Result<u64> {
    // Extended Euclid on (a mod p, p).
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { a, p });
    }
    Ok(t0.rem_euclid(p as i64) as u64)
}

fn distinct_prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Multiplicative order of `a` modulo the prime `p` (`a ≢ 0`).
pub fn multiplicative_order(a: u64, p: u64) -> u64 {
    let mut order = p - 1;
    for q in distinct_prime_factors(p - 1) {
        while order.is_multiple_of(q) && mod_pow(a, order / q, p) == 1 {
            order /= q;
        }
    }
    order
}

pub fn is_generator(a: u64, p: u64) -> bool {
    !a.is_multiple_of(p) && multiplicative_order(a, p) == p - 1
}

pub fn smallest_generator(p: u64) -> u64 {
    (2..p).find(|&g| is_generator(g, p)).unwrap_or(1)
}

/// A prime `p`, a generator `x` of `Z_p^*`, and everything derived from it:
///
/// * `y = x⁻¹`, `x' = (x−1)⁻¹`, `y' = (y−1)⁻¹`
/// * `x_i = x + x² + … + x^i` and `y_i = y + … + y^i` for `1 ≤ i ≤ p−2`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    p: u32,
    x: u32,
    y: u32,
    x_prime: u32,
    y_prime: u32,
    x_partial: Vec<u32>,
    y_partial: Vec<u32>,
}

impl FieldContext {
    /// `x = None` picks the smallest generator.
    pub fn new(p: u32, x: Option<u32>) -> Result<Self> {
        let pw = p as u64;
        if p < 3 || !is_prime(pw) {
            return Err(Error::NotOddPrime(pw));
        }
        let x = match x {
            Some(x) => {
                let xw = x as u64 % pw;
                if xw == 0 || !is_generator(xw, pw) {
                    let order = if xw == 0 {
                        0
                    } else {
                        multiplicative_order(xw, pw)
                    };
                    return Err(Error::NotGenerator {
                        x: x as u64,
                        p: pw,
                        order,
                    });
                }
                xw
            }
            None => smallest_generator(pw),
        };
        let y = mod_inverse(x, pw)?;
        // x is a generator and p ≥ 3, so x ≠ 1 and y ≠ 1.
        let x_prime = mod_inverse(x + pw - 1, pw)?;
        let y_prime = mod_inverse(y + pw - 1, pw)?;
        let partial = |g: u64| {
            let mut sums = Vec::with_capacity(p as usize - 2);
            let (mut power, mut sum) = (1u64, 0u64);
            for _ in 1..=p - 2 {
                power = power * g % pw;
                sum = (sum + power) % pw;
                sums.push(sum as u32);
            }
            sums
        };
        Ok(FieldContext {
            p,
            x: x as u32,
            y: y as u32,
            x_prime: x_prime as u32,
            y_prime: y_prime as u32,
            x_partial: partial(x),
            y_partial: partial(y),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn x(&self) -> u32 {
        self.x
    }
    pub fn y(&self) -> u32 {
        self.y
    }
    pub fn x_prime(&self) -> u32 {
        self.x_prime
    }
    pub fn y_prime(&self) -> u32 {
        self.y_prime
    }

    /// `x_i` for `1 ≤ i ≤ p−2`.
    pub fn x_partial(&self, i: usize) -> u32 {
        self.x_partial[i - 1]
    }

    /// `y_i` for `1 ≤ i ≤ p−2`.
    pub fn y_partial(&self, i: usize) -> u32 {
        self.y_partial[i - 1]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        ((a as u64 % p + p - b as u64 % p) % p) as u32
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        mod_pow(a as u64, e, self.p as u64) as u32
    }
    pub fn inv(&self, a: u32) -> Result<u32> {
        mod_inverse(a as u64, self.p as u64).map(|v| v as u32)
    }

    /// Number of labels in `Z_p × Z_p`.
    pub fn pair_count(&self) -> usize {
        self.p as usize * self.p as usize
    }

    /// `(a, b) ↦ a·p + b`.
    #[inline]
    pub fn encode(&self, a: u32, b: u32) -> Label {
        a * self.p + b
    }

    #[inline]
    pub fn decode(&self, label: Label) -> (u32, u32) {
        (label / self.p, label % self.p)
    }

    /// Rejects primes outside the range the `p²` constructions support.
    pub fn ensure_p_squared_range(&self) -> Result<()> {
        if self.p > MAX_P_SQUARED_PRIME {
            return Err(Error::PrimeOutOfRange(self.p));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_p5_default() {
        let ctx = FieldContext::new(5, None).unwrap();
        assert_eq!(
            (ctx.x(), ctx.y(), ctx.x_prime(), ctx.y_prime()),
            (2, 3, 1, 3)
        );
        // x_1 = 2, x_2 = 2+4 = 6 ≡ 1, x_3 = 1+8 ≡ 4
        assert_eq!(
            (ctx.x_partial(1), ctx.x_partial(2), ctx.x_partial(3)),
            (2, 1, 4)
        );
        // y_1 = 3, y_2 = 3+9 ≡ 2, y_3 = 2+27 ≡ 4
        assert_eq!(
            (ctx.y_partial(1), ctx.y_partial(2), ctx.y_partial(3)),
            (3, 2, 4)
        );
    }

    #[test]
    fn context_rejects() {
        assert!(matches!(
            FieldContext::new(5, Some(4)),
            Err(Error::NotGenerator { order: 2, .. })
        ));
        assert!(matches!(
            FieldContext::new(9, None),
            Err(Error::NotOddPrime(9))
        ));
        assert!(matches!(
            FieldContext::new(2, None),
            Err(Error::NotOddPrime(2))
        ));
        assert!(FieldContext::new(7, Some(0)).is_err());
        assert!(FieldContext::new(7, Some(2)).is_err());
        assert_eq!(FieldContext::new(7, Some(5)).unwrap().y(), 3);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(1, 13).unwrap(), 1);
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert_eq!(mod_inverse(7, 11).unwrap(), 8);
        assert!(mod_inverse(0, 7).is_err());
        assert!(mod_inverse(14, 7).is_err());
    }

    #[test]
    fn generator_powers_enumerate_units() {
        for p in [3u32, 5, 7, 11, 13, 31, 97, 101] {
            let ctx = FieldContext::new(p, None).unwrap();
            for g in [ctx.x(), ctx.y()] {
                let mut seen = vec![false; p as usize];
                for e in 0..p as u64 - 1 {
                    let v = ctx.pow(g, e) as usize;
                    assert!(!seen[v]);
                    seen[v] = true;
                }
                assert!(!seen[0]);
            }
            assert_eq!(ctx.mul(ctx.x(), ctx.y()), 1);
            assert_eq!(ctx.mul(ctx.x_prime(), ctx.sub(ctx.x(), 1)), 1);
            assert_eq!(ctx.mul(ctx.y_prime(), ctx.sub(ctx.y(), 1)), 1);
            for i in 2..=p as usize - 2 {
                assert_eq!(
                    ctx.x_partial(i),
                    ctx.add(ctx.x_partial(i - 1), ctx.pow(ctx.x(), i as u64))
                );
            }
        }
    }

    #[test]
    fn primality_and_orders() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(2_147_483_647));
        assert_eq!(multiplicative_order(4, 5), 2);
        assert_eq!(smallest_generator(7), 3);
        assert_eq!(smallest_generator(41), 6);
    }

    #[test]
    fn encode_round_trip() {
        let ctx = FieldContext::new(7, None).unwrap();
        for l in 0..49 {
            let (a, b) = ctx.decode(l);
            assert_eq!(ctx.encode(a, b), l);
        }
        assert!(ctx.ensure_p_squared_range().is_ok());
        assert!(FieldContext::new(101, None)
            .unwrap()
            .ensure_p_squared_range()
            .is_err());
    }
}

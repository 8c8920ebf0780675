//! Exact arithmetic in ℚ(√2, √3, √5), which contains every `cos(π/m)` for
//! `m ∈ {2, 3, 4, 5, 6}`.
//!
//! Elements are stored on the basis `√(2^a 3^b 5^c)`, `a, b, c ∈ {0, 1}`,
//! indexed by the bitmask `a | b<<1 | c<<2`.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::rat;

const PRIMES: [i64; 3] = [2, 3, 5];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    c: [BigRational; 8],
}

impl Surd {
    pub fn zero() -> Self {
        Surd { c: Default::default() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut s = Surd::zero();
        s.c[0] = r;
        s
    }

    pub fn from_int(v: i64) -> Self {
        Surd::from_rational(rat(v, 1))
    }

    /// `coeff · √(product of primes in mask)`.
    pub fn basis(mask: usize, coeff: BigRational) -> Self {
        let mut s = Surd::zero();
        s.c[mask] = coeff;
        s
    }

    /// `-2 cos(π/m)`, the off-diagonal entry of the doubled Tits form.
    /// `None` outside `m ∈ {2,3,4,5,6}` and `m = ∞` (encoded as 0).
    pub fn minus_two_cos_pi_over(m: u32) -> Option<Self> {
        Some(match m {
            0 => Surd::from_int(-2),
            1 => Surd::from_int(2),
            2 => Surd::zero(),
            3 => Surd::from_int(-1),
            4 => Surd::basis(0b001, rat(-1, 1)),
            5 => {
                // -(1+√5)/2
                let mut s = Surd::from_rational(rat(-1, 2));
                s.c[0b100] = rat(-1, 2);
                s
            }
            6 => Surd::basis(0b010, rat(-1, 1)),
            _ => return None,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Surd) -> Surd {
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&o.c) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&o.c) {
            *a -= b;
        }
        out
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let common = i & j;
                let mut k = a * b;
                for (bit, p) in PRIMES.iter().enumerate() {
                    if common >> bit & 1 == 1 {
                        k *= rat(*p, 1);
                    }
                }
                out.c[i ^ j] += k;
            }
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.c
            .iter()
            .enumerate()
            .map(|(mask, c)| {
                let radicand: i64 = PRIMES
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, p)| p)
                    .product();
                crate::scalar::rational_to_f64(c) * (radicand as f64).sqrt()
            })
            .sum()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        sign_in(self, 3)
    }
}

/// Sign of `x`, known to lie in the subfield generated by the first `level`
/// square roots. Writes `x = a + b√p` with `a, b` one level down; when `a`
/// and `b` disagree in sign the answer follows from comparing `a²` with
/// `p b²`, which is again one level down.
fn sign_in(x: &Surd, level: usize) -> Ordering {
    if level == 0 {
        return x.c[0].cmp(&BigRational::zero());
    }
    let bit = 1 << (level - 1);
    let mut a = Surd::zero();
    let mut b = Surd::zero();
    for mask in 0..8 {
        if mask & bit == 0 {
            a.c[mask] = x.c[mask].clone();
        } else {
            b.c[mask ^ bit] = x.c[mask].clone();
        }
    }
    let sa = sign_in(&a, level - 1);
    let sb = sign_in(&b, level - 1);
    match (sa, sb) {
        (s, Ordering::Equal) => s,
        (Ordering::Equal, s) => s,
        (s, t) if s == t => s,
        _ => {
            let p = Surd::from_int(PRIMES[level - 1]);
            let diff = a.mul(&a).sub(&p.mul(&b).mul(&b));
            match sign_in(&diff, level - 1) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => unreachable!("√p is irrational"),
            }
        }
    }
}

impl Default for Surd {
    fn default() -> Self {
        Surd::zero()
    }
}

impl Surd {
    pub fn one() -> Self {
        Surd::from_rational(BigRational::one())
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    pub fn has_negative_rational_part(&self) -> bool {
        self.c[0].is_negative()
    }
}

//! Univariate polynomials over ℚ, rational functions in one variable `t`,
//! and exact real-root isolation by Sturm sequences.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{format_rational, rat};

/// Dense polynomial with ascending coefficients; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Lowest-degree nonzero coefficient.
    pub fn trailing(&self) -> BigRational {
        self.coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, exp: u32) -> Poly {
        (0..exp).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading();
        a.scale(&lead.recip())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64, 1))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Value at `x` in any scalar field (Horner).
    pub fn eval_in<F: crate::scalar::Scalar>(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc.mul(x).add(&F::from_rational(c)))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::scalar::rational_to_f64(c))
    }

    /// Coefficient-reversed polynomial `t^deg · p(1/t)`.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    pub fn is_palindromic(&self) -> bool {
        let r = self.reversed();
        r == *self
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients (truncating any fractional part).
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.to_integer()).collect()
    }

    /// Multiplicity of `root` as a root of `self` via repeated division by a
    /// linear factor; returns the multiplicity and the cofactor.
    pub fn strip_factor(&self, factor: &Poly) -> (u32, Poly) {
        let mut p = self.clone();
        let mut k = 0;
        if p.is_zero() {
            return (0, p);
        }
        loop {
            let (q, r) = p.div_rem(factor);
            if !r.is_zero() {
                return (k, p);
            }
            p = q;
            k += 1;
        }
    }

    /// Plain ascending rendering, e.g. `1-2t+t^2`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mag_s = format_rational(&mag);
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                if mag.is_integer() {
                    out.push_str(&mag_s);
                } else {
                    out.push_str(&format!("({mag_s})"));
                }
            }
            match i {
                0 => {}
                1 => out.push('t'),
                _ => out.push_str(&format!("t^{i}")),
            }
        }
        out
    }

    /// Rendering with powers of `(1+t)` and `(1-t)` pulled out.
    pub fn render_factored(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (kp, rest) = self.strip_factor(&Poly::from_ints(&[1, 1]));
        let (km, rest) = rest.strip_factor(&Poly::from_ints(&[1, -1]));
        let mut pieces: Vec<String> = Vec::new();
        let mut sign = "";
        let rest_is_const = rest.degree() == Some(0);
        if rest_is_const && rest.leading().abs().is_one() {
            if rest.leading().is_negative() {
                sign = "-";
            }
        } else {
            let r = rest.render();
            let terms = rest.coeffs.iter().filter(|c| !c.is_zero()).count();
            if terms > 1 {
                pieces.push(format!("({r})"));
            } else {
                pieces.push(r);
            }
        }
        let pow = |k: u32| if k == 1 { String::new() } else { format!("^{k}") };
        let mut factors = Vec::new();
        if kp > 0 {
            factors.push(format!("(1+t){}", pow(kp)));
        }
        if km > 0 {
            factors.push(format!("(1-t){}", pow(km)));
        }
        factors.extend(pieces);
        if factors.is_empty() {
            factors.push("1".into());
        }
        format!("{sign}{}", factors.concat())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `numerator / denominator` in lowest terms with integer coefficients whose
/// overall content is 1. The denominator's lowest-degree nonzero coefficient
/// is positive, so a growth series reads `(1+t)/(1-t)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        // clear denominators, then remove common integer content
        let mut l = BigInt::one();
        for c in num.coeffs().iter().chain(den.coeffs()) {
            l = l.lcm(c.denom());
        }
        let lr = BigRational::from_integer(l);
        let (num, den) = (num.scale(&lr), den.scale(&lr));
        let mut content = BigInt::zero();
        for c in num.coeffs().iter().chain(den.coeffs()) {
            content = content.gcd(c.numer());
        }
        let mut s = BigRational::from_integer(content).recip();
        if den.trailing().is_negative() {
            s = -s;
        }
        RationalFunction { num: num.scale(&s), den: den.scale(&s) }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction::new(p, Poly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RationalFunction::from_poly(Poly::constant(c))
    }

    /// The formal variable `t`.
    pub fn t() -> Self {
        RationalFunction::from_poly(Poly::t())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RationalFunction::new(self.den.clone(), self.num.clone()))
        }
    }

    /// `f(1/t)` as a rational function in `t`.
    pub fn substitute_reciprocal(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        // p(1/t) = rev(p)/t^deg p
        if dn > dd {
            den = den.mul(&Poly::monomial(BigRational::one(), dn - dd));
        } else if dd > dn {
            num = num.mul(&Poly::monomial(BigRational::one(), dd - dn));
        }
        RationalFunction::new(num, den)
    }

    /// Exact value at `x`.
    pub fn eval(&self, x: &BigRational) -> crate::Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(crate::Error::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Taylor coefficients at 0 up to `degree` inclusive; `None` if 0 is a pole.
    pub fn taylor(&self, degree: usize) -> Option<Vec<BigRational>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return None;
        }
        let inv = d0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            let mut acc = self.num.coeff(k);
            for j in 1..=k.min(self.den.coeffs().len().saturating_sub(1)) {
                acc -= self.den.coeff(j) * &out[k - j];
            }
            out.push(acc * &inv);
        }
        Some(out)
    }

    pub fn render(&self) -> String {
        let n = self.num.render_factored();
        if self.is_polynomial() {
            let c = self.den.coeff(0);
            if c.is_one() {
                return n;
            }
            return format!("{n}/{}", format_rational(&c));
        }
        format!("{n}/{}", self.den.render_factored())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction(({}) / ({}))", self.num, self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl crate::scalar::Scalar for RationalFunction {
    fn zero() -> Self {
        RationalFunction::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RationalFunction::from_poly(Poly::one())
    }
    fn from_i64(v: i64) -> Self {
        RationalFunction::constant(rat(v, 1))
    }
    fn from_rational(r: &BigRational) -> Self {
        RationalFunction::constant(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}

/// Square-free part `p / gcd(p, p')`.
pub fn square_free(p: &Poly) -> Poly {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        return p.clone();
    }
    p.div_rem(&g).0
}

/// Sturm sequence of a square-free polynomial.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of the square-free `p` in `(lo, hi]`.
pub fn count_roots(seq: &[Poly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_changes(seq, lo).saturating_sub(sign_changes(seq, hi))
}

/// Exact closed form of an algebraic root when one is found.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactRoot {
    Rational(BigRational),
    /// The root `(-b + sign·√(b²-4ac)) / (2a)` of `a t² + b t + c`, `a > 0`.
    Quadratic { a: BigInt, b: BigInt, c: BigInt, plus: bool },
}

impl ExactRoot {
    pub fn approx(&self) -> f64 {
        match self {
            ExactRoot::Rational(r) => crate::scalar::rational_to_f64(r),
            ExactRoot::Quadratic { a, b, c, plus } => {
                let (a, b, c) = (a.to_f64().unwrap(), b.to_f64().unwrap(), c.to_f64().unwrap());
                let d = (b * b - 4.0 * a * c).sqrt();
                if *plus {
                    (-b + d) / (2.0 * a)
                } else {
                    (-b - d) / (2.0 * a)
                }
            }
        }
    }
}

impl fmt::Display for ExactRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactRoot::Rational(r) => f.write_str(&format_rational(r)),
            ExactRoot::Quadratic { a, b, c, plus } => {
                let disc = b * b - BigInt::from(4) * a * c;
                let op = if *plus { '+' } else { '-' };
                write!(f, "({}{op}sqrt({disc}))/{}", -b, BigInt::from(2) * a)
            }
        }
    }
}

/// Isolates the smallest positive real root of `p`, if any, to an interval
/// `(lo, hi]` with `hi - lo <= width` containing exactly one root.
pub fn smallest_positive_root(p: &Poly, width: &BigRational) -> Option<(BigRational, BigRational)> {
    if p.degree().unwrap_or(0) == 0 {
        return None;
    }
    let q = square_free(p);
    let seq = sturm_sequence(&q);
    // Cauchy bound
    let lead = q.leading().abs();
    let bound = q.coeffs()[..q.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(BigRational::zero(), |m, c| if c > m { c } else { m })
        + BigRational::one();
    let mut lo = BigRational::zero();
    let mut hi = bound;
    if count_roots(&seq, &lo, &hi) == 0 {
        return None;
    }
    let two = rat(2, 1);
    loop {
        let n = count_roots(&seq, &lo, &hi);
        if n == 1 && &(&hi - &lo) <= width {
            return Some((lo, hi));
        }
        let mid = (&lo + &hi) / &two;
        if count_roots(&seq, &lo, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

fn divisors(n: &BigInt, cap: u64) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > cap {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Tries to name the root isolated in `(lo, hi]` exactly: first as a rational
/// (rational root theorem), then as a root of an integer quadratic factor.
pub fn identify_root(p: &Poly, lo: &BigRational, hi: &BigRational) -> Option<ExactRoot> {
    let q = RationalFunction::from_poly(square_free(p));
    let q = q.numerator().clone();
    let ints = q.integer_coeffs();
    let a0 = ints.iter().find(|c| !c.is_zero())?.clone();
    let an = ints.last()?.clone();
    // strip t^k so the constant term is nonzero
    let shift = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let q = Poly::new(q.coeffs()[shift..].to_vec());
    let cap = 1_000_000;
    let (num_divs, den_divs) = (divisors(&a0, cap)?, divisors(&an, cap)?);
    for pn in &num_divs {
        for qd in &den_divs {
            for sgn in [1, -1] {
                let cand = BigRational::new(pn * sgn, qd.clone());
                if &cand > lo && &cand <= hi && q.eval(&cand).is_zero() {
                    return Some(ExactRoot::Rational(cand));
                }
            }
        }
    }
    let mid = crate::scalar::rational_to_f64(&((lo + hi) / rat(2, 1)));
    if mid == 0.0 {
        return None;
    }
    for a in &den_divs {
        for c in &num_divs {
            for sc in [1i64, -1] {
                let c = c * sc;
                let (af, cf) = (a.to_f64()?, c.to_f64()?);
                let b = (-(af * mid * mid + cf) / mid).round();
                if !b.is_finite() || b.abs() > 1e12 {
                    continue;
                }
                let b = BigInt::from(b as i64);
                let quad = Poly::new(vec![
                    BigRational::from_integer(c.clone()),
                    BigRational::from_integer(b.clone()),
                    BigRational::from_integer(a.clone()),
                ]);
                let (_, r) = q.div_rem(&quad);
                if !r.is_zero() {
                    continue;
                }
                // the isolated root must be a root of this factor
                let seq = sturm_sequence(&square_free(&quad));
                if count_roots(&seq, lo, hi) != 1 {
                    continue;
                }
                let disc = &b * &b - BigInt::from(4) * a * &c;
                if disc.is_negative() {
                    continue;
                }
                let s = disc.sqrt();
                if &s * &s == disc {
                    // reducible; rational case handled above
                    continue;
                }
                for plus in [false, true] {
                    let r = ExactRoot::Quadratic { a: a.clone(), b: b.clone(), c: c.clone(), plus };
                    let v = r.approx();
                    if v > crate::scalar::rational_to_f64(lo) - 1e-9
                        && v <= crate::scalar::rational_to_f64(hi) + 1e-9
                    {
                        return Some(r);
                    }
                }
            }
        }
    }
    None
}

//! Exact scalars: rationals with a machine-word fast path, and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

/// A commutative field with exact arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// 0 for the rationals.
    fn characteristic() -> u64;
    fn parse(s: &str) -> Option<Self>;
    /// Short field name used in reports, e.g. `Q` or `F7`.
    fn name() -> String;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
    fn div_ref(&self, o: &Self) -> Self {
        self.mul_ref(&o.inv().expect("division by zero"))
    }
    fn sign(parity: i64) -> Self {
        if parity.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }
    /// Distinct roots in the field of the polynomial with coefficients `c[0] + c[1] x + ...`.
    fn roots(c: &[Self]) -> Vec<Self>;
}

/// Rational number in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in an `i64` are kept inline;
/// everything else falls back to a `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n == 0 {
            return Rational::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Rational::Small(a, b),
            _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new reduces; callers pass reduced values.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Rational::Small(a, b),
            _ => Rational::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Rational::Big(r) => (**r).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        self.to_big().numer().clone()
    }

    pub fn denom(&self) -> BigInt {
        self.to_big().denom().clone()
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, o: Rational) -> Rational {
        match (&self, &o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rational::from_i128(a + c, b)
                } else {
                    Rational::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Rational::from_big(self.to_big() + o.to_big()),
        }
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, o: Rational) -> Rational {
        self + (-o)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(a, b) if a != i64::MIN => Rational::Small(-a, b),
            r => Rational::from_big(-r.to_big()),
        }
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, o: Rational) -> Rational {
        match (&self, &o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * o.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(a, 1) => write!(f, "{a}"),
            Rational::Small(a, b) => write!(f, "{a}/{b}"),
            Rational::Big(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn divisors(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
            if out.len() > cap {
                return None;
            }
        }
        i += 1;
    }
    Some(out)
}

fn eval<F: Field>(c: &[F], x: &F) -> F {
    let mut acc = F::zero();
    for a in c.iter().rev() {
        acc = acc * x.clone() + a.clone();
    }
    acc
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::Small(0, 1)
    }
    fn one() -> Self {
        Rational::Small(1, 1)
    }
    fn from_i64(n: i64) -> Self {
        Rational::Small(n, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
    fn inv(&self) -> Option<Self> {
        match self {
            Rational::Small(0, _) => None,
            Rational::Small(a, b) => Some(Rational::from_i128(*b as i128, *a as i128)),
            Rational::Big(r) => Some(Rational::from_big(r.recip())),
        }
    }
    fn characteristic() -> u64 {
        0
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::from_big(BigRational::new(n, d)))
    }
    fn name() -> String {
        "Q".into()
    }
    fn roots(c: &[Self]) -> Vec<Self> {
        let mut c: Vec<Rational> = c.to_vec();
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        let mut out = Vec::new();
        if c.len() <= 1 {
            return out;
        }
        if c[0].is_zero() {
            out.push(Rational::zero());
            while c[0].is_zero() {
                c.remove(0);
            }
        }
        if c.len() <= 1 {
            return out;
        }
        // Clear denominators, then apply the rational root theorem.
        let mut l = BigInt::one();
        for a in &c {
            l = l.lcm(&a.denom());
        }
        let ints: Vec<BigInt> = c.iter().map(|a| a.numer() * (&l / a.denom())).collect();
        let (Some(ps), Some(qs)) = (divisors(&ints[0], 4096), divisors(ints.last().unwrap(), 4096))
        else {
            return out;
        };
        let mut seen = std::collections::HashSet::new();
        for p in &ps {
            for q in &qs {
                for s in [1, -1] {
                    let r = Rational::from_big(BigRational::new(p * s, q.clone()));
                    if seen.insert(r.clone()) && eval(&c, &r).is_zero() {
                        out.push(r);
                    }
                }
            }
        }
        out
    }
}

/// Element of the prime field with `P` elements, stored in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }
    fn pow(self, mut e: u64) -> Self {
        let mut b = self.0 as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % P as u128;
            }
            b = b * b % P as u128;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(self.0 * o.0 % P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn characteristic() -> u64 {
        P
    }
    fn parse(s: &str) -> Option<Self> {
        let r = Rational::parse(s)?;
        let m = BigInt::from(P);
        let n = r.numer().mod_floor(&m).to_u64()?;
        let d = Fp::<P>(r.denom().mod_floor(&m).to_u64()?);
        Some(Fp(n) * d.inv()?)
    }
    fn name() -> String {
        format!("F{P}")
    }
    fn roots(c: &[Self]) -> Vec<Self> {
        let mut c = c.to_vec();
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.len() <= 1 {
            return Vec::new();
        }
        if P <= 1 << 16 {
            return (0..P).map(Fp).filter(|x| eval(&c, x).is_zero()).collect();
        }
        crate::poly::roots_large_prime(&c)
    }
}

/// The primes accepted by the command-line `--field` switch.
pub const SUPPORTED_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 101, 32003, 2147483647];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_big_agree() {
        let a = Rational::new(i64::MAX, 3);
        let b = Rational::new(2, 7);
        let big = a.to_big() * b.to_big();
        assert_eq!((a.clone() * b.clone()).to_big(), big);
        // (a/b)*b = a
        let q = a.div_ref(&b);
        assert_eq!(q * b, a);
    }

    #[test]
    fn lowest_terms() {
        assert_eq!(Rational::new(4, -6), Rational::new(-2, 3));
        assert_eq!(Rational::parse("10/4").unwrap(), Rational::new(5, 2));
        assert!(Rational::parse("1/0").is_none());
    }

    #[test]
    fn overflow_roundtrip() {
        let x = Rational::new(i64::MAX, 1);
        let y = x.clone() + x.clone();
        assert!(matches!(y, Rational::Big(_)));
        assert_eq!(y - x.clone(), x);
    }

    #[test]
    fn fp_inverse() {
        for a in 1..7 {
            let x = Fp::<7>(a);
            assert_eq!(x * x.inv().unwrap(), Fp::<7>(1));
        }
        assert_eq!(Fp::<5>::parse("1/2"), Some(Fp(3)));
    }

    #[test]
    fn rational_roots() {
        // (x-1)(2x+3) = 2x^2 + x - 3
        let c = [Rational::from_i64(-3), Rational::from_i64(1), Rational::from_i64(2)];
        let mut r = Rational::roots(&c);
        r.sort_by_key(|x| x.to_string());
        assert_eq!(r, vec![Rational::new(-3, 2), Rational::one()]);
        // x^2 + 1 has none
        assert!(Rational::roots(&[Rational::one(), Rational::zero(), Rational::one()]).is_empty());
    }

    #[test]
    fn large_prime_roots() {
        type F = Fp<2147483647>;
        // (x - 5)(x + 9)(x^2 + 1)
        let mut c = vec![F::one()];
        for f in [vec![F::new(-5), F::one()], vec![F::new(9), F::one()], vec![F::one(), F::zero(), F::one()]] {
            c = crate::poly::mul(&c, &f);
        }
        let mut r = F::roots(&c);
        r.sort_by_key(|x| x.0);
        assert_eq!(r, vec![F::new(5), F::new(-9)]);
    }

    proptest::proptest! {
        #[test]
        fn arithmetic_matches_big_rationals(a in proptest::num::i64::ANY, b in 1i64.., c in proptest::num::i64::ANY, d in 1i64..) {
            let (x, y) = (Rational::new(a, b), Rational::new(c, d));
            let (bx, by) = (x.to_big(), y.to_big());
            proptest::prop_assert_eq!((x.clone() + y.clone()).to_big(), &bx + &by);
            proptest::prop_assert_eq!((x.clone() - y.clone()).to_big(), &bx - &by);
            proptest::prop_assert_eq!((x.clone() * y.clone()).to_big(), &bx * &by);
            if !y.is_zero() {
                proptest::prop_assert_eq!(x.div_ref(&y).to_big(), &bx / &by);
            }
        }

        #[test]
        fn fp_parse_respects_products(n in -1000i64..1000, m in 1i64..1000) {
            type F = Fp<101>;
            let q = F::parse(&format!("{n}/{m}"));
            if m % 101 == 0 {
                proptest::prop_assert!(q.is_none());
            } else {
                proptest::prop_assert_eq!(q.unwrap() * F::new(m), F::new(n));
            }
        }
    }
}

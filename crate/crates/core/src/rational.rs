//! Exact rationals with an `i64` fast path.
//!
//! Values that fit in a reduced `i64` fraction are always stored in the small
//! form, so the representation is canonical and structural equality is value
//! equality. Overflowing operations promote to `BigRational`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Q {
    /// Reduced fraction, denominator > 0.
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

impl Q {
    pub fn from_int(n: i64) -> Q {
        Q::Small(n, 1)
    }

    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "zero denominator");
        Q::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Q {
        let g = gcd_i128(num, den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Q::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Q::Small(n, d),
            _ => Q::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Q {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Q::Small(n, d);
        }
        Q::Big(Box::new(r))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Q::Small(n, _) => n.signum() as i32,
            Q::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn inv(&self) -> Q {
        match self {
            Q::Small(0, _) => panic!("division by zero"),
            Q::Small(n, d) => Q::from_i128(*d as i128, *n as i128),
            Q::Big(b) => Q::from_big(b.recip()),
        }
    }

    pub fn numer_i64(&self) -> Option<i64> {
        match self {
            Q::Small(n, _) => Some(*n),
            Q::Big(_) => None,
        }
    }

    pub fn denom_i64(&self) -> Option<i64> {
        match self {
            Q::Small(_, d) => Some(*d),
            Q::Big(_) => None,
        }
    }

    /// Integer numerator and denominator as big integers.
    pub fn parts(&self) -> (BigInt, BigInt) {
        match self {
            Q::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (b.numer().clone(), b.denom().clone()),
        }
    }

    pub fn pow(&self, e: u32) -> Q {
        let mut acc = Q::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Q {
    fn default() -> Self {
        Q::Small(0, 1)
    }
}

impl Zero for Q {
    fn zero() -> Self {
        Q::Small(0, 1)
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl One for Q {
    fn one() -> Self {
        Q::Small(1, 1)
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::Small(n, 1)
    }
}

impl From<i32> for Q {
    fn from(n: i32) -> Q {
        Q::Small(n as i64, 1)
    }
}

impl From<BigInt> for Q {
    fn from(n: BigInt) -> Q {
        Q::from_big(BigRational::from_integer(n))
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, rhs: &Q) -> Q {
        match (self, rhs) {
            (Q::Small(0, _), _) => rhs.clone(),
            (_, Q::Small(0, _)) => self.clone(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Q::Small(s, 1);
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(s) => Q::from_i128(s, z),
                        None => Q::from_big(self.to_big() + rhs.to_big()),
                    },
                    _ => Q::from_big(self.to_big() + rhs.to_big()),
                }
            }
            _ => Q::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, rhs: &Q) -> Q {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, rhs: &Q) -> Q {
        match (self, rhs) {
            (Q::Small(0, _), _) | (_, Q::Small(0, _)) => Q::zero(),
            (Q::Small(1, 1), _) => rhs.clone(),
            (_, Q::Small(1, 1)) => self.clone(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        return Q::Small(p, 1);
                    }
                }
                Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Q::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, rhs: &Q) -> Q {
        self * &rhs.inv()
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(n, d) => match n.checked_neg() {
                Some(m) => Q::Small(m, *d),
                None => Q::from_big(-self.to_big()),
            },
            Q::Big(b) => Q::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Q> for Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Q> for Q {
            type Output = Q;
            fn $m(self, rhs: &Q) -> Q {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, rhs: &Q) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, rhs: &Q) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Q> for Q {
    fn mul_assign(&mut self, rhs: &Q) {
        *self = &*self * rhs;
    }
}

impl Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Q {
    type Err = String;
    fn from_str(s: &str) -> Result<Q, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| format!("bad rational: {s}"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad rational: {s}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator: {s}"));
        }
        let g = n.gcd(&d);
        let mut n = n / &g;
        let mut d = d / &g;
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Ok(Q::from_big(BigRational::new_raw(n, d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic_is_reduced() {
        let a = Q::new(2, 4);
        assert_eq!(a, Q::new(1, 2));
        assert_eq!(&a + &a, Q::one());
        assert_eq!(&Q::new(1, 3) - &Q::new(1, 2), Q::new(-1, 6));
        assert_eq!(Q::new(-3, -6), Q::new(1, 2));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Q::from_int(i64::MAX);
        let sum = &big + &big;
        assert!(matches!(sum, Q::Big(_)));
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(matches!(back, Q::Small(_, _)));
        let sq = &big * &big;
        assert_eq!(&sq / &big, big);
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-7", "3/5", "-12/8", "123456789012345678901234567890/7"] {
            let q: Q = s.parse().unwrap();
            let r: Q = q.to_string().parse().unwrap();
            assert_eq!(q, r);
        }
    }
}

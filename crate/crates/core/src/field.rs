//! Exact scalars: arbitrary-precision rationals and prime fields GF(p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Largest supported prime modulus.
pub const MAX_PRIME: u64 = 1 << 31;

/// The ground field of a backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// GF(p), checking that `p` is a prime no larger than 2^31.
    pub fn prime(p: u64) -> Option<Field> {
        (p >= 2 && p <= MAX_PRIME && is_prime(p)).then_some(Field::Prime(p))
    }

    pub fn zero(self) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rat(BigRational::zero()),
            Field::Prime(p) => FieldElem::Mod(0, p),
        }
    }

    pub fn one(self) -> FieldElem {
        self.int(1)
    }

    pub fn int(self, n: i64) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElem::Mod(n.rem_euclid(p as i64) as u64, p),
        }
    }

    /// `num / den`; `None` when `den` vanishes in the field.
    pub fn frac(self, num: &BigInt, den: &BigInt) -> Option<FieldElem> {
        match self {
            Field::Rational => {
                (!den.is_zero()).then(|| FieldElem::Rat(BigRational::new(num.clone(), den.clone())))
            }
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &m) + &m) % &m;
                    u64::try_from(r).expect("residue fits u64")
                };
                let d = FieldElem::Mod(reduce(den), p);
                let n = FieldElem::Mod(reduce(num), p);
                d.inv().map(|di| &n * &di)
            }
        }
    }

    /// Characteristic (0 for Q).
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Number of elements, if finite.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    /// All elements of a finite field, in increasing residue order.
    pub fn elements(self) -> Option<Vec<FieldElem>> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..p).map(|v| FieldElem::Mod(v, p)).collect()),
        }
    }

    /// An element of multiplicative order exactly `m`, if the field has one.
    pub fn root_of_unity(self, m: u64) -> Option<FieldElem> {
        if m == 0 {
            return None;
        }
        if m == 1 {
            return Some(self.one());
        }
        match self {
            Field::Rational => (m == 2).then(|| self.int(-1)),
            Field::Prime(p) => {
                if (p - 1) % m != 0 {
                    return None;
                }
                let factors = prime_factors(m);
                (2..p).map(|g| FieldElem::Mod(g, p)).find_map(|g| {
                    let z = g.pow((p - 1) / m);
                    let order_is_m = factors.iter().all(|q| !z.pow(m / q).is_one());
                    order_is_m.then_some(z)
                })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rational") || t.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("GF"))
            .or_else(|| t.strip_prefix("F_"))
            .ok_or_else(|| format!("unknown field `{t}` (expected Q or GF(p))"))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| format!("bad modulus in field `{t}`"))?;
        Field::prime(p).ok_or_else(|| format!("{p} is not a prime below 2^31"))
    }
}

/// An exact field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rat(BigRational),
    /// `(residue, modulus)` with `residue < modulus`.
    Mod(u64, u64),
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rat(_) => Field::Rational,
            FieldElem::Mod(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Mod(v, _) => *v == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Rat(r) => FieldElem::Rat(r.recip()),
            FieldElem::Mod(v, p) => FieldElem::Mod(mod_pow(*v, p - 2, *p), *p),
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The rational value, when this is a rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rat(r) => Some(r),
            FieldElem::Mod(..) => None,
        }
    }

    fn expect_same(&self, other: &FieldElem) {
        assert_eq!(
            self.field(),
            other.field(),
            "field mismatch in scalar arithmetic"
        );
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

impl<'a> Add for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &'a FieldElem) -> FieldElem {
        self.expect_same(rhs);
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Mod(a, p), FieldElem::Mod(b, _)) => FieldElem::Mod((a + b) % p, *p),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &'a FieldElem) -> FieldElem {
        self.expect_same(rhs);
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a - b),
            (FieldElem::Mod(a, p), FieldElem::Mod(b, _)) => FieldElem::Mod((a + p - b) % p, *p),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &'a FieldElem) -> FieldElem {
        self.expect_same(rhs);
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Mod(a, p), FieldElem::Mod(b, _)) => FieldElem::Mod(a * b % p, *p),
            _ => unreachable!(),
        }
    }
}

impl<'a> Neg for &'a FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Mod(a, p) => FieldElem::Mod((p - a) % p, *p),
        }
    }
}

/// Parses `"3"`, `"-2"`, `"5/7"` into an element of `field`.
pub fn parse_elem(field: Field, s: &str) -> Result<FieldElem, String> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad number `{t}`"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad number `{t}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{t}`"));
    }
    field
        .frac(&n, &d)
        .ok_or_else(|| format!("denominator of `{t}` vanishes in {field}"))
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

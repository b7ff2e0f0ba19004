//! Exact sums `sum_k q_k zeta^k` of `p^M`-th roots of unity with rational
//! weights.
//!
//! Character values of the p-adic field are `p`-power roots of unity, so
//! every integral of a locally constant function against characters lands in
//! `Q(zeta_{p^M})`. Equality is decided exactly: write `k = r + s p^{M-1}`;
//! the only linear relations among the `zeta^k` are
//! `sum_{s=0}^{p-1} zeta^{r + s p^{M-1}} = 0`, one per residue `r`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::padic::{phase_to_complex, UnitPhase};

#[derive(Debug, Clone)]
pub struct Cyclotomic {
    /// 1 for plain rationals.
    p: u64,
    order_exp: u32,
    terms: BTreeMap<u64, BigRational>,
}

impl Cyclotomic {
    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(0, q);
        }
        Cyclotomic {
            p: 1,
            order_exp: 0,
            terms,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The root of unity `exp(2 pi i q)`; `q` must have a `p`-power denominator.
    pub fn from_phase(phase: &UnitPhase) -> Self {
        let p = phase.prime().get();
        let q = phase.phase();
        if q.is_zero() {
            return Self::from_integer(1);
        }
        let den = q.denom().to_u64().expect("phase denominator fits in u64");
        let mut m = 0u32;
        let mut d = den;
        while d.is_multiple_of(p) {
            d /= p;
            m += 1;
        }
        assert_eq!(d, 1, "phase denominator {den} is not a power of {p}");
        let k = q.numer().to_u64().expect("phase numerator fits in u64");
        let mut terms = BTreeMap::new();
        terms.insert(k, BigRational::from_integer(BigInt::from(1)));
        Cyclotomic {
            p,
            order_exp: m,
            terms,
        }
    }

    fn order(&self) -> u64 {
        if self.p == 1 {
            1
        } else {
            self.p.pow(self.order_exp)
        }
    }

    fn common(&self, other: &Self) -> (u64, u32) {
        let p = match (self.p, other.p) {
            (1, q) | (q, 1) => q,
            (a, b) => {
                assert_eq!(a, b, "mixing roots of unity of different primes");
                a
            }
        };
        if p == 1 {
            (1, 0)
        } else {
            (p, self.order_exp.max(other.order_exp).max(1))
        }
    }

    fn lift(&self, p: u64, order_exp: u32) -> BTreeMap<u64, BigRational> {
        if self.p == 1 {
            return self.terms.clone();
        }
        let factor = p.pow(order_exp - self.order_exp);
        self.terms
            .iter()
            .map(|(k, v)| (k * factor, v.clone()))
            .collect()
    }

    fn with_terms(p: u64, order_exp: u32, terms: BTreeMap<u64, BigRational>) -> Self {
        let mut c = Cyclotomic {
            p,
            order_exp,
            terms,
        };
        c.terms.retain(|_, v| !v.is_zero());
        c
    }

    /// Canonical coordinates in the basis `zeta^{r + s p^{M-1}}`, `s < p - 1`.
    pub fn normalized(&self) -> BTreeMap<u64, BigRational> {
        if self.p == 1 || self.order_exp == 0 {
            return self
                .terms
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (*k, v.clone()))
                .collect();
        }
        let block = self.p.pow(self.order_exp - 1);
        let top = self.p - 1;
        let mut out: BTreeMap<u64, BigRational> = BTreeMap::new();
        let mut shifts: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (k, v) in &self.terms {
            if k / block == top {
                shifts.insert(k % block, v.clone());
            } else {
                *out.entry(*k).or_insert_with(BigRational::zero) += v;
            }
        }
        for (r, a) in shifts {
            for s in 0..top {
                *out.entry(r + s * block).or_insert_with(BigRational::zero) -= &a;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn conj(&self) -> Self {
        let n = self.order();
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| ((n - k) % n, v.clone()))
            .collect();
        Cyclotomic {
            p: self.p,
            order_exp: self.order_exp,
            terms,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (*k, v * q)).collect();
        Self::with_terms(self.p, self.order_exp, terms)
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = BigInt::from(self.order());
        self.terms
            .iter()
            .map(|(k, v)| {
                let z = phase_to_complex(&BigRational::new(BigInt::from(*k), n.clone()));
                z * v.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// The value when it is a rational number.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.normalized();
        match n.len() {
            0 => Some(BigRational::zero()),
            1 => n.get(&0).cloned(),
            _ => None,
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        (self - other).normalized().is_empty()
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.normalized().is_empty()
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (p, m) = self.common(rhs);
        let mut terms = self.lift(p, m);
        for (k, v) in rhs.lift(p, m) {
            *terms.entry(k).or_insert_with(BigRational::zero) += v;
        }
        Cyclotomic::with_terms(p, m, terms)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (p, m) = self.common(rhs);
        let n = if p == 1 { 1 } else { p.pow(m) };
        let a = self.lift(p, m);
        let b = rhs.lift(p, m);
        let mut terms: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (ka, va) in &a {
            for (kb, vb) in &b {
                *terms.entry((ka + kb) % n).or_insert_with(BigRational::zero) += va * vb;
            }
        }
        Cyclotomic::with_terms(p, m, terms)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        let terms = self.terms.iter().map(|(k, v)| (*k, -v)).collect();
        Cyclotomic {
            p: self.p,
            order_exp: self.order_exp,
            terms,
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        if n.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = n
            .iter()
            .map(|(k, v)| {
                if *k == 0 {
                    v.to_string()
                } else {
                    format!("{v}*z{}^{k}", self.order())
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

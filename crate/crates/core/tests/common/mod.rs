//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use padic_vladimirov::realization::{CMatrix, CVector};
use padic_vladimirov::{PadicRational, Prime, WaveletExpansion, WaveletIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// `a / (p^k m)` with small `a`, `k` and a cofactor `m`.
pub fn rational(rng: &mut impl Rng, p: Prime) -> PadicRational {
    let num: i64 = rng.gen_range(-300..=300);
    let k = rng.gen_range(0..4u32);
    let m = [1i64, 1, 1, 2, 3, 5, 7][rng.gen_range(0..7)];
    let den = (p.get() as i64).pow(k) * m;
    PadicRational::new(p, BigRational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn nonzero_rational(rng: &mut impl Rng, p: Prime) -> PadicRational {
    loop {
        let x = rational(rng, p);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn distinct_points(rng: &mut impl Rng, p: Prime, n: usize) -> Vec<PadicRational> {
    let mut pts: Vec<PadicRational> = Vec::new();
    while pts.len() < n {
        let x = rational(rng, p);
        if !pts.contains(&x) {
            pts.push(x);
        }
    }
    pts
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn index(rng: &mut impl Rng, p: Prime, levels: std::ops::RangeInclusive<i64>) -> WaveletIndex {
    let n = rng.gen_range(levels);
    let j = rng.gen_range(1..p.get());
    let m = rng.gen_range(0..3u32);
    let k = rng.gen_range(0..(p.get() as i64).pow(m));
    let eps = BigRational::new(BigInt::from(k), BigInt::from((p.get() as i64).pow(m)));
    WaveletIndex::from_coset(p, n, j, &eps).unwrap()
}

/// Random finite expansion; roughly half of the indices sit at
/// `eps = {p^N x}` for one of `anchors`, so point values there are nonzero.
pub fn expansion(
    rng: &mut impl Rng,
    p: Prime,
    terms: usize,
    anchors: &[PadicRational],
) -> WaveletExpansion {
    let mut e = WaveletExpansion::zero(p);
    for _ in 0..terms {
        let idx = if !anchors.is_empty() && rng.gen_bool(0.5) {
            let x = &anchors[rng.gen_range(0..anchors.len())];
            let n = rng.gen_range(-4..=4);
            WaveletIndex::from_coset(p, n, rng.gen_range(1..p.get()), &(x.value() * p.pow(n)))
                .unwrap()
        } else {
            index(rng, p, -4..=4)
        };
        e.add_coefficient(idx, complex(rng));
    }
    e
}

pub fn cvector(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex(rng))
}

pub fn cmatrix(rng: &mut impl Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex(rng))
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
    let m = cmatrix(rng, n);
    (&m + m.adjoint()).map(|z| z * 0.5)
}

/// Hermitian with eigenvalues bounded away from zero.
pub fn well_conditioned_hermitian(rng: &mut impl Rng, n: usize) -> CMatrix {
    let mut m = hermitian(rng, n).map(|z| z * 0.3);
    for i in 0..n {
        m[(i, i)] += Complex64::new(if rng.gen_bool(0.5) { 2.0 } else { -2.0 }, 0.0);
    }
    m
}

pub mod strategies {
    use super::*;
    use padic_vladimirov::{Ball, TestFunction};
    use proptest::prelude::*;

    pub fn prime() -> impl Strategy<Value = Prime> {
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7)].prop_map(|p| Prime::new(p).unwrap())
    }

    pub fn rational_for(p: Prime) -> impl Strategy<Value = PadicRational> {
        (
            -500i64..=500,
            0u32..4,
            prop_oneof![Just(1i64), Just(1), Just(2), Just(3), Just(11)],
            0u32..3,
        )
            .prop_map(move |(num, k, m, up)| {
                let pp = p.get() as i64;
                let q =
                    BigRational::new(BigInt::from(num * pp.pow(up)), BigInt::from(pp.pow(k) * m));
                PadicRational::new(p, q)
            })
    }

    pub fn ball_for(p: Prime) -> impl Strategy<Value = Ball> {
        (rational_for(p), -3i64..=3).prop_map(|(c, g)| Ball::new(c, g))
    }

    pub fn test_function_for(p: Prime) -> impl Strategy<Value = TestFunction<Complex64>> {
        proptest::collection::vec((ball_for(p), -2.0f64..2.0, -2.0f64..2.0), 0..5).prop_map(
            move |terms| {
                TestFunction::from_terms(
                    p,
                    terms
                        .into_iter()
                        .map(|(b, re, im)| (b, Complex64::new(re, im)))
                        .collect(),
                )
                .unwrap()
            },
        )
    }

    /// Test functions whose transform stays small: radii in `-1..=1` and
    /// centers with `|a| <= p`, so each transform splits a term into at
    /// most `p^2` pieces.
    pub fn tame_test_function_for(p: Prime) -> impl Strategy<Value = TestFunction<Complex64>> {
        let center = (
            -200i64..=200,
            0u32..2,
            prop_oneof![Just(1i64), Just(2), Just(11)],
        )
            .prop_map(move |(num, k, m)| {
                let q =
                    BigRational::new(BigInt::from(num), BigInt::from((p.get() as i64).pow(k) * m));
                PadicRational::new(p, q)
            });
        proptest::collection::vec((center, -1i64..=1, -2.0f64..2.0, -2.0f64..2.0), 0..5).prop_map(
            move |terms| {
                TestFunction::from_terms(
                    p,
                    terms
                        .into_iter()
                        .map(|(c, g, re, im)| (Ball::new(c, g), Complex64::new(re, im)))
                        .collect(),
                )
                .unwrap()
            },
        )
    }

    pub fn index_for(p: Prime) -> impl Strategy<Value = WaveletIndex> {
        (-4i64..=4, 1..p.get(), 0u32..3, 0u64..1000).prop_map(move |(n, j, m, k)| {
            let d = p.get().pow(m);
            WaveletIndex::from_coset(
                p,
                n,
                j,
                &BigRational::new(BigInt::from(k % d), BigInt::from(d)),
            )
            .unwrap()
        })
    }

    pub fn expansion_for(p: Prime) -> impl Strategy<Value = WaveletExpansion> {
        proptest::collection::vec((index_for(p), -1.0f64..1.0, -1.0f64..1.0), 0..10).prop_map(
            move |v| {
                WaveletExpansion::finite(
                    p,
                    v.into_iter().map(|(i, re, im)| (i, Complex64::new(re, im))),
                )
                .unwrap()
            },
        )
    }
}

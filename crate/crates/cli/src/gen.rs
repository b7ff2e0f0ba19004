//! Seeded random inputs for the verification suites.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use padic_vladimirov::realization::{CMatrix, CVector};
use padic_vladimirov::{Ball, PadicRational, Prime, TestFunction, WaveletExpansion, WaveletIndex};
use rand::Rng;

/// `a / (p^k m)` with `|a| <= 300`, `k < 4` and a small cofactor `m`.
pub fn rational(rng: &mut impl Rng, p: Prime) -> PadicRational {
    let num: i64 = rng.gen_range(-300..=300);
    let k = rng.gen_range(0..4u32);
    let m = [1i64, 1, 1, 2, 3, 5, 7][rng.gen_range(0..7)];
    let den = (p.get() as i64).pow(k) * m;
    PadicRational::new(p, BigRational::new(BigInt::from(num), BigInt::from(den)))
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
    // shallower cosets for large p keep Fourier transforms of wavelets small
    let depth = match p.get() {
        2..=5 => 3,
        6..=11 => 2,
        _ => 1,
    };
    let d = (p.get() as i64).pow(rng.gen_range(0..depth));
    let eps = BigRational::new(BigInt::from(rng.gen_range(0..d)), BigInt::from(d));
    WaveletIndex::from_coset(p, n, j, &eps).expect("valid coset")
}

/// Finite expansion; about half the indices sit on one of `anchors`.
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
                .expect("valid coset")
        } else {
            index(rng, p, -4..=4)
        };
        e.add_coefficient(idx, complex(rng));
    }
    e
}

/// Test function with `1..=max_terms` balls, radii in `-1..=1` and centers
/// of norm at most `p` (at most 1 for `p > 5`), so Fourier transforms stay
/// small.
pub fn test_function(rng: &mut impl Rng, p: Prime, max_terms: usize) -> TestFunction<Complex64> {
    let terms = rng.gen_range(1..=max_terms);
    let balls = (0..terms)
        .map(|_| {
            let num: i64 = rng.gen_range(-200..=200);
            let depth = if p.get() <= 5 { 2 } else { 1 };
            let den =
                (p.get() as i64).pow(rng.gen_range(0..depth)) * [1i64, 2, 13][rng.gen_range(0..3)];
            let c = PadicRational::new(p, BigRational::new(BigInt::from(num), BigInt::from(den)));
            let coeff = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            (Ball::new(c, rng.gen_range(-1..=1)), coeff)
        })
        .collect();
    TestFunction::from_terms(p, balls).expect("same prime")
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

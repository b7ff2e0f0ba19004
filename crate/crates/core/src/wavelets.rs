//! The wavelet basis `psi_{N j eps}(x) = p^{-N/2} chi_p(p^{N-1} j x) Omega(|p^N x - eps|_p)`.
//!
//! `N` ranges over the integers, `j` over `1..p`, and `eps` over the coset
//! representatives `k / p^m` of `Q_p / Z_p`. The support of `psi_{N j eps}`
//! is the ball `B_N(p^{-N} eps)` and the character factor is constant on
//! each of its `p` children, which is what every exact computation here
//! exploits.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{
    fractional_part_of, rational_string, Ball, BallRelation, PadicRational, Prime, UnitPhase,
};
use crate::schwartz::{Coefficient, TestFunction};

/// Index `(N, j, eps)` of a basis wavelet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WaveletIndex {
    #[serde(rename = "N")]
    pub n: i64,
    pub j: u64,
    #[serde(with = "rational_string")]
    pub eps: BigRational,
}

impl WaveletIndex {
    /// Validates `1 <= j < p` and that `eps` is already a canonical coset
    /// representative.
    pub fn new(p: Prime, n: i64, j: u64, eps: BigRational) -> Result<Self> {
        let idx = WaveletIndex { n, j, eps };
        idx.validate(p)?;
        Ok(idx)
    }

    /// Reduces any rational to its class in `Q_p / Z_p`.
    pub fn from_coset(p: Prime, n: i64, j: u64, eps: &BigRational) -> Result<Self> {
        Self::new(p, n, j, fractional_part_of(p, eps))
    }

    pub fn validate(&self, p: Prime) -> Result<()> {
        if self.j == 0 || self.j >= p.get() {
            return Err(Error::InvalidIndex(format!(
                "j = {} not in [1, {}]",
                self.j,
                p.get() - 1
            )));
        }
        if fractional_part_of(p, &self.eps) != self.eps {
            return Err(Error::InvalidIndex(format!(
                "eps = {} is not a canonical representative of Q_{}/Z_{}",
                self.eps, p, p
            )));
        }
        Ok(())
    }

    /// `B_N(p^{-N} eps)`.
    pub fn support(&self, p: Prime) -> Ball {
        Ball::new(PadicRational::new(p, &self.eps * p.pow(-self.n)), self.n)
    }

    /// `p^{-N/2}`.
    pub fn amplitude(&self, p: Prime) -> f64 {
        p.powf(-(self.n as f64) / 2.0)
    }

    /// Exact value: `None` off the support, else the phase of
    /// `chi_p(p^{N-1} j x)`; the full value is `p^{-N/2}` times that.
    pub fn phase_at(&self, x: &PadicRational) -> Option<crate::padic::UnitPhase> {
        let p = x.prime();
        let shifted = x.scale(self.n) - PadicRational::new(p, self.eps.clone());
        if !shifted.is_integral() {
            return None;
        }
        Some(x.scale(self.n - 1).mul_int(self.j as i64).character())
    }

    pub fn eval(&self, x: &PadicRational) -> Complex64 {
        match self.phase_at(x) {
            Some(ph) => ph.value() * self.amplitude(x.prime()),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `p^{N/2} psi`: the children of the support weighted by the character.
    pub fn unscaled<C: Coefficient>(&self, p: Prime) -> TestFunction<C> {
        let terms = self
            .support(p)
            .children()
            .into_iter()
            .map(|child| {
                let ph = child
                    .center()
                    .scale(self.n - 1)
                    .mul_int(self.j as i64)
                    .character();
                (child, C::from_phase(&ph))
            })
            .collect();
        TestFunction::from_canonical_terms(p, terms)
    }

    pub fn to_test_function(&self, p: Prime) -> TestFunction<Complex64> {
        self.unscaled::<Complex64>(p)
            .scaled(&Complex64::new(self.amplitude(p), 0.0))
            .canonicalize()
    }
}

/// `psi_{N j eps}(x)`.
pub fn wavelet_eval(idx: &WaveletIndex, x: &PadicRational) -> Complex64 {
    idx.eval(x)
}

/// `p^{N/2} (psi_I, phi)`, exact in the coefficient field of `phi`.
///
/// The support of `psi_I` is cut into its children (where the character is
/// constant) and into the balls of `phi` (where `phi` is constant).
pub fn inner_test_unscaled<C: Coefficient>(idx: &WaveletIndex, phi: &TestFunction<C>) -> C {
    let p = phi.prime();
    let phi = phi.canonicalize();
    let support = idx.support(p);
    let char_at = |b: &Ball| {
        C::from_phase(
            &b.center()
                .scale(idx.n - 1)
                .mul_int(idx.j as i64)
                .character(),
        )
    };
    let mut acc = C::zero();
    for (ball, c) in phi.terms() {
        match ball.relation(&support).expect("same prime") {
            BallRelation::Disjoint => {}
            BallRelation::FirstInsideSecond => {
                let w = C::from_rational(&ball.haar_measure());
                acc = acc.plus(&char_at(ball).times(&w).times(&c.conjugate()));
            }
            BallRelation::Equal | BallRelation::SecondInsideFirst => {
                for child in support.children() {
                    let w = C::from_rational(&child.haar_measure());
                    acc = acc.plus(&char_at(&child).times(&w).times(&c.conjugate()));
                }
            }
        }
    }
    acc
}

/// `(psi_I, phi) = int psi_I conj(phi)`.
pub fn wavelet_inner_test(idx: &WaveletIndex, phi: &TestFunction<Complex64>) -> Complex64 {
    inner_test_unscaled(idx, phi) * idx.amplitude(phi.prime())
}

/// Finite set of wavelet coefficients plus bounds on what was left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpansionJson", into = "ExpansionJson")]
pub struct WaveletExpansion {
    p: Prime,
    coeffs: BTreeMap<WaveletIndex, Complex64>,
    l2_tail: f64,
    sup_tail: f64,
    tail_floor: Option<i64>,
}

impl WaveletExpansion {
    pub fn zero(p: Prime) -> Self {
        WaveletExpansion {
            p,
            coeffs: BTreeMap::new(),
            l2_tail: 0.0,
            sup_tail: 0.0,
            tail_floor: None,
        }
    }

    /// Finite expansion; indices are validated and repeated indices summed.
    pub fn finite(
        p: Prime,
        coeffs: impl IntoIterator<Item = (WaveletIndex, Complex64)>,
    ) -> Result<Self> {
        let mut e = Self::zero(p);
        for (idx, c) in coeffs {
            idx.validate(p)?;
            e.add_coefficient(idx, c);
        }
        Ok(e)
    }

    pub fn single(p: Prime, idx: WaveletIndex, c: Complex64) -> Result<Self> {
        Self::finite(p, [(idx, c)])
    }

    /// Attaches omitted-term bounds. `tail_floor` is the lowest level at
    /// which an omitted coefficient may be nonzero.
    pub fn with_tails(mut self, l2_tail: f64, sup_tail: f64, tail_floor: Option<i64>) -> Self {
        self.l2_tail = l2_tail;
        self.sup_tail = sup_tail;
        self.tail_floor = tail_floor;
        self
    }

    pub fn add_coefficient(&mut self, idx: WaveletIndex, c: Complex64) {
        let slot = self.coeffs.entry(idx).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn coefficients(&self) -> &BTreeMap<WaveletIndex, Complex64> {
        &self.coeffs
    }

    pub fn coefficient(&self, idx: &WaveletIndex) -> Complex64 {
        self.coeffs.get(idx).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn l2_tail(&self) -> f64 {
        self.l2_tail
    }

    pub fn sup_tail(&self) -> f64 {
        self.sup_tail
    }

    pub fn tail_floor(&self) -> Option<i64> {
        self.tail_floor
    }

    pub fn is_finite(&self) -> bool {
        self.l2_tail == 0.0 && self.sup_tail == 0.0
    }

    /// `sum |c|^2` of the represented terms.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// `sum_{j, eps} |c_{N j eps}|^2` per level `N`.
    pub fn level_norms(&self) -> BTreeMap<i64, f64> {
        let mut out = BTreeMap::new();
        for (idx, c) in &self.coeffs {
            *out.entry(idx.n).or_insert(0.0) += c.norm_sqr();
        }
        out
    }

    /// Inner product of the represented parts, conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        Ok(self
            .coeffs
            .iter()
            .filter_map(|(i, a)| other.coeffs.get(i).map(|b| a * b.conj()))
            .sum())
    }

    /// `a * self + b * other`; tails add.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p.get(), other.p.get()));
        }
        let mut out = self.scaled(a);
        for (i, c) in &other.coeffs {
            out.add_coefficient(i.clone(), c * b);
        }
        out.l2_tail += b.norm() * other.l2_tail;
        out.sup_tail += b.norm() * other.sup_tail;
        out.tail_floor = match (out.tail_floor, other.tail_floor) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        Ok(out)
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        WaveletExpansion {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (i.clone(), c * a))
                .collect(),
            l2_tail: a.norm() * self.l2_tail,
            sup_tail: a.norm() * self.sup_tail,
            tail_floor: self.tail_floor,
        }
    }

    /// Multiplies coefficient `(N, j, eps)` by `f(N)`; tails untouched.
    pub(crate) fn map_levels(&self, f: impl Fn(i64) -> f64) -> Self {
        WaveletExpansion {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (i.clone(), c * f(i.n)))
                .collect(),
            l2_tail: self.l2_tail,
            sup_tail: self.sup_tail,
            tail_floor: self.tail_floor,
        }
    }

    /// Value of the represented sum at `x` and a bound on the omitted part.
    ///
    /// Panics if two different `eps` contribute at the same `(N, j)`, which
    /// the ultrametric inequality rules out.
    pub fn point_eval(&self, x: &PadicRational) -> (Complex64, f64) {
        let mut seen: BTreeMap<(i64, u64), &BigRational> = BTreeMap::new();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        for (idx, c) in &self.coeffs {
            let v = idx.eval(x);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            if let Some(prev) = seen.insert((idx.n, idx.j), &idx.eps) {
                panic!(
                    "two wavelets ({prev} and {}) at level {} overlap at {x}",
                    idx.eps, idx.n
                );
            }
            neumaier(&mut sum, &mut comp, c * v);
        }
        (sum + comp, self.sup_tail)
    }
}

/// Compensated complex summation step.
pub(crate) fn neumaier(sum: &mut Complex64, comp: &mut Complex64, term: Complex64) {
    fn step(s: &mut f64, c: &mut f64, x: f64) {
        let t = *s + x;
        if s.abs() >= x.abs() {
            *c += (*s - t) + x;
        } else {
            *c += (x - t) + *s;
        }
        *s = t;
    }
    step(&mut sum.re, &mut comp.re, term.re);
    step(&mut sum.im, &mut comp.im, term.im);
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    #[serde(flatten)]
    index: WaveletIndex,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    p: u64,
    coeffs: Vec<CoeffJson>,
    #[serde(default)]
    l2_tail: f64,
    #[serde(default)]
    sup_tail: f64,
    #[serde(default)]
    tail_floor: Option<i64>,
}

impl From<WaveletExpansion> for ExpansionJson {
    fn from(e: WaveletExpansion) -> Self {
        ExpansionJson {
            p: e.p.get(),
            coeffs: e
                .coeffs
                .into_iter()
                .map(|(index, c)| CoeffJson {
                    index,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
            l2_tail: e.l2_tail,
            sup_tail: e.sup_tail,
            tail_floor: e.tail_floor,
        }
    }
}

impl TryFrom<ExpansionJson> for WaveletExpansion {
    type Error = Error;
    fn try_from(j: ExpansionJson) -> Result<Self> {
        let p = Prime::new(j.p)?;
        let e = WaveletExpansion::finite(
            p,
            j.coeffs
                .into_iter()
                .map(|c| (c.index, Complex64::new(c.re, c.im))),
        )?;
        Ok(e.with_tails(j.l2_tail, j.sup_tail, j.tail_floor))
    }
}

/// Wavelet expansion of a test function.
///
/// Coefficients at levels `n_min..=n_max` are kept. Below the parameter of
/// constancy every coefficient vanishes; above the support exponent `Gamma`
/// only `eps = 0` survives, with `c_{N j 0} = p^{-N/2} int phi`. Everything in
/// between is enumerated exactly from the balls of `phi`. The `L2` tail is
/// the Parseval remainder, the sup tail sums per-level bounds.
pub fn expand_test_function(
    phi: &TestFunction<Complex64>,
    n_min: i64,
    n_max: i64,
) -> WaveletExpansion {
    let p = phi.prime();
    let phi = phi.canonicalize();
    let (Some(low), Some(support)) = (phi.constancy_parameter(), phi.support_exponent()) else {
        return WaveletExpansion::zero(p);
    };
    let first = low + 1;
    let integral = phi.integrate();

    let mut kept = WaveletExpansion::zero(p);
    let mut sup_tail = 0.0;
    let mut tail_floor: Option<i64> = None;
    let omit = |n: i64, floor: &mut Option<i64>| {
        if floor.is_none_or(|f| n < f) {
            *floor = Some(n);
        }
    };

    for n in first..=support {
        let mut candidates: Vec<BigRational> = phi
            .terms()
            .iter()
            .filter(|(b, _)| b.radius_exp() < n)
            .map(|(b, _)| fractional_part_of(p, &(b.center().value() * p.pow(n))))
            .collect();
        candidates.sort();
        candidates.dedup();
        let mut level_sup = 0.0;
        let mut level = Vec::new();
        for j in 1..p.get() {
            let mut jmax: f64 = 0.0;
            for eps in &candidates {
                let idx = WaveletIndex {
                    n,
                    j,
                    eps: eps.clone(),
                };
                let c = wavelet_inner_test(&idx, &phi).conj();
                if c.norm() > 0.0 {
                    jmax = jmax.max(c.norm());
                    level.push((idx, c));
                }
            }
            level_sup += jmax;
        }
        if n >= n_min && n <= n_max {
            for (i, c) in level {
                kept.add_coefficient(i, c);
            }
        } else if !level.is_empty() {
            sup_tail += level_sup * p.powf(-(n as f64) / 2.0);
            omit(n, &mut tail_floor);
        }
    }

    // closed-form family above the support exponent
    let closed_start = (support + 1).max(first);
    let closed_kept_end = n_max;
    for n in closed_start.max(n_min)..=closed_kept_end {
        let c = integral * p.powf(-(n as f64) / 2.0);
        if c.norm() == 0.0 {
            break;
        }
        for j in 1..p.get() {
            kept.add_coefficient(
                WaveletIndex {
                    n,
                    j,
                    eps: BigRational::zero(),
                },
                c,
            );
        }
    }
    if integral.norm() > 0.0 {
        if closed_start < n_min {
            for n in closed_start..n_min {
                sup_tail += (p.get() - 1) as f64 * integral.norm() * p.powi(-n);
                omit(n, &mut tail_floor);
            }
        }
        let last = closed_kept_end.max(closed_start - 1).max(n_min - 1);
        sup_tail += integral.norm() * p.powi(-last);
        omit(last + 1, &mut tail_floor);
    }

    let radicand = phi.norm_sq() - kept.norm_sq();
    debug_assert!(
        radicand >= -1e-12 * phi.norm_sq().max(1.0),
        "Parseval remainder negative: {radicand}"
    );
    let l2_tail = radicand.max(0.0).sqrt();
    if l2_tail == 0.0 && sup_tail == 0.0 {
        tail_floor = None;
    }
    kept.with_tails(l2_tail, sup_tail, tail_floor)
}

/// Outcome of an orthonormality check over a window of wavelets.
#[derive(Debug, Clone, PartialEq)]
pub struct GramCheck {
    pub indices: usize,
    /// Entries computed; every other pair has disjoint supports.
    pub entries: usize,
    pub max_defect: f64,
    /// Entries not exactly equal to the identity in the coefficient field.
    pub inexact_entries: usize,
}

/// Gram matrix of all `psi_{N j eps}` with `n_lo <= N <= n_hi` whose
/// support meets `B_radius(0)`.
///
/// Supports are nested or disjoint, so only nested pairs are computed.
/// For equal supports the product is summed over the `p` children; for a
/// strictly smaller support `T` inside `S`, `psi_S` is constant on `T`,
/// so the entry is `psi_S(center T) * conj(int psi_T)`.
pub fn gram_window<C: Coefficient>(p: Prime, n_lo: i64, n_hi: i64, radius: i64) -> GramCheck {
    let mut supports: Vec<Ball> = Vec::new();
    for n in n_lo..=n_hi {
        if n >= radius {
            supports.push(Ball::centered(p, n));
        } else {
            supports.extend(Ball::centered(p, radius).descendants(n));
        }
    }
    let js: Vec<u64> = (1..p.get()).collect();
    let mut check = GramCheck {
        indices: supports.len() * js.len(),
        entries: 0,
        max_defect: 0.0,
        inexact_entries: 0,
    };
    let mut record = |value: &C, expected: &C, scale: f64, count: usize| {
        let diff = value.plus(&expected.negated());
        if !diff.is_zero() {
            check.inexact_entries += count;
            check.max_defect = check.max_defect.max(diff.to_complex().norm() * scale);
        }
        check.entries += count;
    };
    let p_c = C::from_rational(&BigRational::from_integer(p.as_bigint()));

    // Every phase in the window is k / p^m for this m, so characters are
    // handled as exponents mod p^m and each root of unity is built once.
    let m = (radius - n_lo + 1).max(0) as u32;
    let modulus = p
        .get()
        .checked_pow(m)
        .expect("window too deep for u64 exponents");
    let exponent = |ph: &UnitPhase| -> u64 {
        let d = ph.phase().denom().to_u64().expect("small denominator");
        debug_assert_eq!(modulus % d, 0);
        ph.phase().numer().to_u64().expect("small numerator") * (modulus / d)
    };
    let mut roots: HashMap<u64, C> = HashMap::new();
    let mut root = |k: u64| -> C {
        roots
            .entry(k % modulus)
            .or_insert_with(|| {
                C::from_phase(&UnitPhase::new(
                    p,
                    BigRational::new(k.into(), modulus.into()),
                ))
            })
            .clone()
    };

    for t in &supports {
        let nt = t.radius_exp();
        // chi_p(p^{N-1} x) on each child; wavelet j takes its j-th power
        let base: Vec<u64> = t
            .children()
            .iter()
            .map(|k| exponent(&k.center().scale(nt - 1).character()))
            .collect();
        let phases: Vec<Vec<u64>> = js
            .iter()
            .map(|&j| base.iter().map(|b| b * j % modulus).collect())
            .collect();
        // p^{1-N} p^{N/2} int psi_T, a plain sum of roots of unity
        let integrals: Vec<C> = phases
            .iter()
            .map(|row| row.iter().fold(C::zero(), |acc, &k| acc.plus(&root(k))))
            .collect();
        let vanishing: Vec<bool> = integrals.iter().map(|c| c.is_zero()).collect();

        // diagonal block, scaled by p^{1-N}: p on the diagonal, 0 off it
        for (a, row_a) in phases.iter().enumerate() {
            for (b, row_b) in phases.iter().enumerate() {
                let u = row_a
                    .iter()
                    .zip(row_b)
                    .fold(C::zero(), |acc, (&x, &y)| acc.plus(&root(x + modulus - y)));
                let expected = if a == b { p_c.clone() } else { C::zero() };
                record(&u, &expected, 1.0 / p.as_f64(), 1);
            }
        }

        // blocks against strictly larger supports; each entry and its
        // mirror (psi_T, psi_S) = conj(psi_S, psi_T) are counted together
        for ns in (nt + 1)..=n_hi {
            let at_center = exponent(&t.center().scale(ns - 1).character());
            let scale = p.powi(nt - 1) * p.powf(-((ns + nt) as f64) / 2.0);
            for &j in &js {
                let at_t = root(at_center * j);
                for (integral, &zero) in integrals.iter().zip(&vanishing) {
                    if zero {
                        // a root of unity times an exact zero
                        record(&C::zero(), &C::zero(), scale, 2);
                    } else {
                        record(&at_t.times(&integral.conjugate()), &C::zero(), scale, 2);
                    }
                }
            }
        }
    }
    check
}

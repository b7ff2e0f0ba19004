//! Test functions: finite linear combinations of ball indicators.
//!
//! A [`TestFunction`] is generic over its coefficient field. `Complex64`
//! is the working mode; [`Cyclotomic`] gives exact arithmetic, which is
//! closed under the Fourier transform because character values of the
//! p-adic field are `p`-power roots of unity.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::padic::{format_rational, parse_rational, Ball, PadicRational, Prime, UnitPhase};

/// Scalar field of test-function coefficients.
pub trait Coefficient: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &BigRational) -> Self;
    fn from_phase(phase: &UnitPhase) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conjugate(&self) -> Self;
    fn to_complex(&self) -> Complex64;
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_phase(phase: &UnitPhase) -> Self {
        phase.value()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl Coefficient for Cyclotomic {
    fn zero() -> Self {
        <Cyclotomic as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &BigRational) -> Self {
        Cyclotomic::from_rational(q.clone())
    }
    fn from_phase(phase: &UnitPhase) -> Self {
        Cyclotomic::from_phase(phase)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn to_complex(&self) -> Complex64 {
        Cyclotomic::to_complex(self)
    }
}

/// `sum_i c_i 1_{B_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction<C: Coefficient = Complex64> {
    p: Prime,
    terms: Vec<(Ball, C)>,
    canonical: bool,
}

/// Exact-coefficient test function.
pub type ExactTestFunction = TestFunction<Cyclotomic>;

impl<C: Coefficient> TestFunction<C> {
    pub fn zero(p: Prime) -> Self {
        TestFunction {
            p,
            terms: Vec::new(),
            canonical: true,
        }
    }

    /// Uncanonicalized combination; balls may overlap.
    pub fn from_terms(p: Prime, terms: Vec<(Ball, C)>) -> Result<Self> {
        for (b, _) in &terms {
            if b.prime() != p {
                return Err(Error::PrimeMismatch(p.get(), b.prime().get()));
            }
        }
        Ok(TestFunction {
            p,
            terms,
            canonical: false,
        })
    }

    /// Caller guarantees disjoint balls, nonzero coefficients, no mergeable siblings.
    pub(crate) fn from_canonical_terms(p: Prime, terms: Vec<(Ball, C)>) -> Self {
        TestFunction {
            p,
            terms,
            canonical: true,
        }
    }

    pub fn indicator(ball: Ball) -> Self {
        let p = ball.prime();
        let one = C::from_rational(&BigRational::from_integer(1.into()));
        TestFunction {
            p,
            terms: vec![(ball, one)],
            canonical: true,
        }
    }

    /// `Omega(|x|_p)`, the indicator of `Z_p`.
    pub fn omega(p: Prime) -> Self {
        Self::indicator(Ball::centered(p, 0))
    }

    /// `delta(|x|_p - p^gamma)`, the indicator of the sphere `S_gamma`.
    pub fn sphere_indicator(p: Prime, gamma: i64) -> Self {
        let one = C::from_rational(&BigRational::from_integer(1.into()));
        TestFunction {
            p,
            terms: vec![
                (Ball::centered(p, gamma), one.clone()),
                (Ball::centered(p, gamma - 1), one.negated()),
            ],
            canonical: false,
        }
        .canonicalize()
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn terms(&self) -> &[(Ball, C)] {
        &self.terms
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_zero(&self) -> bool {
        self.canonicalize().terms.is_empty()
    }

    pub fn push(&mut self, ball: Ball, coeff: C) {
        assert_eq!(ball.prime(), self.p);
        self.terms.push((ball, coeff));
        self.canonical = false;
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(TestFunction {
            p: self.p,
            terms,
            canonical: false,
        })
    }

    pub fn scaled(&self, c: &C) -> Self {
        TestFunction {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(b, v)| (b.clone(), v.times(c)))
                .collect(),
            canonical: false,
        }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TestFunction<D> {
        TestFunction {
            p: self.p,
            terms: self.terms.iter().map(|(b, v)| (b.clone(), f(v))).collect(),
            canonical: false,
        }
    }

    pub fn to_complex(&self) -> TestFunction<Complex64> {
        let mut f = self.map(|c| c.to_complex());
        f.canonical = self.canonical;
        f
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p.get(), other.p.get()))
        }
    }

    /// Pointwise-equal form with pairwise disjoint balls and nonzero
    /// coefficients; complete sets of `p` sibling balls carrying equal
    /// coefficients are merged into their parent.
    pub fn canonicalize(&self) -> Self {
        if self.canonical {
            return self.clone();
        }
        let mut terms: Vec<(Ball, C)> = self
            .terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .cloned()
            .collect();
        terms.sort_by_key(|t| std::cmp::Reverse(t.0.radius_exp()));

        // group under maximal balls
        let mut roots: Vec<(Ball, Vec<(Ball, C)>)> = Vec::new();
        let mut root_at: HashMap<Ball, usize> = HashMap::new();
        let mut root_radii: Vec<i64> = Vec::new();
        for (ball, c) in terms {
            let home = root_radii
                .iter()
                .find_map(|&r| root_at.get(&ball.ancestor(r)).copied());
            match home {
                Some(i) => roots[i].1.push((ball, c)),
                None => {
                    let r = ball.radius_exp();
                    if root_radii.last() != Some(&r) {
                        root_radii.push(r);
                    }
                    root_at.insert(ball.clone(), roots.len());
                    roots.push((ball.clone(), vec![(ball, c)]));
                }
            }
        }
        let mut out = Vec::new();
        for (root, group) in roots {
            refine(&root, C::zero(), group, &mut out);
        }
        coalesce(self.p, &mut out);
        out.sort_by(|a, b| {
            (a.0.radius_exp(), a.0.center().value()).cmp(&(b.0.radius_exp(), b.0.center().value()))
        });
        TestFunction {
            p: self.p,
            terms: out,
            canonical: true,
        }
    }

    /// `phi(x)`: sum of coefficients of the balls containing `x`.
    pub fn evaluate(&self, x: &PadicRational) -> C {
        self.terms
            .iter()
            .filter(|(b, _)| b.contains(x))
            .fold(C::zero(), |acc, (_, c)| acc.plus(c))
    }

    /// Haar integral `sum_i c_i p^{gamma_i}`.
    pub fn integrate(&self) -> C {
        self.terms.iter().fold(C::zero(), |acc, (b, c)| {
            acc.plus(&c.times(&C::from_rational(&b.haar_measure())))
        })
    }

    /// `(phi, psi) = int phi conj(psi)`, over the common refinement.
    pub fn inner_product(&self, other: &Self) -> Result<C> {
        self.same_prime(other)?;
        let a = self.canonicalize();
        let b = other.canonicalize();
        let mut acc = C::zero();
        // canonical terms are disjoint, so every nested pair is found by
        // looking up the ancestors of the smaller ball
        let ((sa, ra), (sb, rb)) = (ball_index(&a.terms), ball_index(&b.terms));
        for (ba, ca) in &a.terms {
            let w = C::from_rational(&ba.haar_measure());
            for &r in rb.iter().filter(|&&r| r >= ba.radius_exp()) {
                if let Some(&k) = sb.get(&ba.ancestor(r)) {
                    acc = acc.plus(&ca.times(&b.terms[k].1.conjugate()).times(&w));
                }
            }
        }
        for (bb, cb) in &b.terms {
            let w = C::from_rational(&bb.haar_measure());
            for &r in ra.iter().filter(|&&r| r > bb.radius_exp()) {
                if let Some(&k) = sa.get(&bb.ancestor(r)) {
                    acc = acc.plus(&a.terms[k].1.times(&cb.conjugate()).times(&w));
                }
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner_product(self)
            .map(|c| c.to_complex().re)
            .unwrap_or(f64::NAN)
    }

    /// `F[phi](xi) = int chi_p(xi x) phi(x) dx`.
    ///
    /// Each indicator maps to `p^gamma chi_p(xi a) 1_{B_{-gamma}}(xi)`; the
    /// character is constant on sub-balls of radius `p^{v(a)}`, which is the
    /// splitting used here.
    pub fn fourier(&self) -> Self {
        let canon = self.canonicalize();
        let p = self.p;
        let mut raw = Vec::new();
        for (ball, c) in &canon.terms {
            let g = ball.radius_exp();
            let a = ball.center();
            let outer = Ball::centered(p, -g);
            let level = match a.valuation() {
                Some(v) => v.min(-g),
                None => -g,
            };
            let weight = c.times(&C::from_rational(&ball.haar_measure()));
            for piece in outer.descendants(level) {
                let phase = (piece.center() * a).character();
                raw.push((piece, weight.times(&C::from_phase(&phase))));
            }
        }
        TestFunction {
            p,
            terms: raw,
            canonical: false,
        }
        .canonicalize()
    }

    /// Smallest `Gamma` with `supp phi` inside `B_Gamma(0)`; `None` for zero.
    pub fn support_exponent(&self) -> Option<i64> {
        self.canonicalize()
            .terms
            .iter()
            .map(|(b, _)| match b.center().norm_exp() {
                Some(e) => e.max(b.radius_exp()),
                None => b.radius_exp(),
            })
            .max()
    }

    /// Largest `l` with `phi(x + y) = phi(x)` for all `|y|_p <= p^l`;
    /// `None` for the zero function.
    pub fn constancy_parameter(&self) -> Option<i64> {
        self.canonicalize()
            .terms
            .iter()
            .map(|(b, _)| b.radius_exp())
            .min()
    }
}

/// Ball-to-position map and the distinct radii present.
fn ball_index<C>(terms: &[(Ball, C)]) -> (HashMap<Ball, usize>, BTreeSet<i64>) {
    let map = terms
        .iter()
        .enumerate()
        .map(|(i, (b, _))| (b.clone(), i))
        .collect();
    let radii = terms.iter().map(|(b, _)| b.radius_exp()).collect();
    (map, radii)
}

fn refine<C: Coefficient>(
    ball: &Ball,
    inherited: C,
    group: Vec<(Ball, C)>,
    out: &mut Vec<(Ball, C)>,
) {
    let mut acc = inherited;
    let mut inner = Vec::new();
    for (b, c) in group {
        if b.radius_exp() == ball.radius_exp() {
            acc = acc.plus(&c);
        } else {
            inner.push((b, c));
        }
    }
    if inner.is_empty() {
        if !acc.is_zero() {
            out.push((ball.clone(), acc));
        }
        return;
    }
    let level = ball.radius_exp() - 1;
    let mut buckets: HashMap<Ball, Vec<(Ball, C)>> = HashMap::new();
    for (b, c) in inner {
        buckets.entry(b.ancestor(level)).or_default().push((b, c));
    }
    for child in ball.children() {
        let mine = buckets.remove(&child).unwrap_or_default();
        refine(&child, acc.clone(), mine, out);
    }
}

fn coalesce<C: Coefficient>(p: Prime, terms: &mut Vec<(Ball, C)>) {
    loop {
        let mut by_parent: HashMap<Ball, Vec<usize>> = HashMap::new();
        for (i, (b, _)) in terms.iter().enumerate() {
            by_parent.entry(b.parent()).or_default().push(i);
        }
        let mut merged = false;
        let mut remove = vec![false; terms.len()];
        let mut added = Vec::new();
        for (parent, idx) in by_parent {
            if idx.len() as u64 != p.get() {
                continue;
            }
            let c0 = &terms[idx[0]].1;
            if idx.iter().all(|&i| &terms[i].1 == c0) {
                added.push((parent, c0.clone()));
                for &i in &idx {
                    remove[i] = true;
                }
                merged = true;
            }
        }
        if !merged {
            return;
        }
        let mut keep: Vec<(Ball, C)> = terms
            .drain(..)
            .zip(remove)
            .filter(|(_, r)| !r)
            .map(|(t, _)| t)
            .collect();
        keep.extend(added);
        *terms = keep;
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    center: String,
    gamma: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TestFunctionJson {
    p: u64,
    terms: Vec<TermJson>,
}

impl Serialize for TestFunction<Complex64> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TestFunctionJson {
            p: self.p.get(),
            terms: self
                .terms
                .iter()
                .map(|(b, c)| TermJson {
                    center: format_rational(b.center().value()),
                    gamma: b.radius_exp(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TestFunction<Complex64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TestFunctionJson::deserialize(d)?;
        let p = Prime::new(raw.p).map_err(D::Error::custom)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let c = parse_rational(&t.center).map_err(D::Error::custom)?;
            terms.push((
                Ball::new(PadicRational::new(p, c), t.gamma),
                Complex64::new(t.re, t.im),
            ));
        }
        TestFunction::from_terms(p, terms).map_err(D::Error::custom)
    }
}

//! The Green function `h_k` of `D^alpha + I` at a point `x_k`, the unique
//! `L2` solution of `D^alpha h + h = delta_{x_k}`, which exists iff
//! `alpha > 1/2`.
//!
//! Its wavelet coefficients sit at `eps = {p^N x_k}_p` only and equal
//! `p^{-N/2} chi_p(-p^{N-1} j x_k) / (p^{alpha(1-N)} + 1)`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{fractional_part_of, PadicRational, Prime};
use crate::schwartz::TestFunction;
use crate::vladimirov::eigenvalue;
use crate::wavelets::{expand_test_function, neumaier, WaveletExpansion, WaveletIndex};

/// Largest number of levels any single series evaluation may visit.
const MAX_LEVELS: i64 = 1 << 22;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.5 {
        return Err(Error::NotInL2(alpha));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "alpha must be finite (got {alpha})"
        )));
    }
    Ok(())
}

/// `(p-1) p^{-N} / (p^{alpha(1-N)} + 1)`: the summed magnitude of level `N`.
fn level_weight(p: Prime, alpha: f64, n: i64) -> f64 {
    (p.as_f64() - 1.0) * p.powi(-n) / (eigenvalue(p, alpha, n) + 1.0)
}

/// Smallest `M >= start` with `p^{-M} <= budget`.
fn upper_cut(p: Prime, start: i64, budget: f64) -> i64 {
    let need = (-(budget.ln()) / p.as_f64().ln()).ceil() as i64;
    let mut m = start.max(need);
    while p.powi(-m) > budget {
        m += 1;
    }
    m
}

/// Sum of `level_weight` over `N < low` for `alpha > 1`, bounded by the
/// geometric series `(p-1) p^{-alpha} p^{(alpha-1)N}`.
fn lower_tail(p: Prime, alpha: f64, low: i64) -> f64 {
    let q = alpha - 1.0;
    (p.as_f64() - 1.0) * p.powf(-alpha) * p.powf(q * (low - 1) as f64) / (1.0 - p.powf(-q))
}

/// Largest `L` with `lower_tail(L) <= budget`.
fn lower_cut(p: Prime, alpha: f64, budget: f64) -> Result<i64> {
    let mut l = 0;
    while lower_tail(p, alpha, l) > budget {
        l -= 1;
        if -l > MAX_LEVELS {
            return Err(Error::NotFinite);
        }
    }
    Ok(l)
}

fn sum_sorted(mut terms: Vec<f64>) -> (f64, f64) {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let n = terms.len() as f64;
    let max = terms.first().map_or(0.0, |t| t.abs());
    let mut s = Complex64::zero();
    let mut c = Complex64::zero();
    for t in terms {
        neumaier(&mut s, &mut c, Complex64::new(t, 0.0));
    }
    (
        s.re + c.re,
        4.0 * f64::EPSILON * (n * max).max(f64::MIN_POSITIVE),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenFunction {
    p: Prime,
    alpha: f64,
    anchor: PadicRational,
}

impl GreenFunction {
    pub fn new(alpha: f64, anchor: PadicRational) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(GreenFunction {
            p: anchor.prime(),
            alpha,
            anchor,
        })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn anchor(&self) -> &PadicRational {
        &self.anchor
    }

    /// `{p^N x_k}_p`, the only shift carrying a coefficient at level `N`.
    pub fn eps_at(&self, n: i64) -> BigRational {
        fractional_part_of(self.p, &(self.anchor.value() * self.p.pow(n)))
    }

    pub fn index(&self, n: i64, j: u64) -> WaveletIndex {
        WaveletIndex {
            n,
            j,
            eps: self.eps_at(n),
        }
    }

    pub fn coefficient(&self, idx: &WaveletIndex) -> Complex64 {
        if idx.eps != self.eps_at(idx.n) {
            return Complex64::zero();
        }
        let ch = self
            .anchor
            .scale(idx.n - 1)
            .mul_int(-(idx.j as i64))
            .character()
            .value();
        ch * (self.p.powf(-(idx.n as f64) / 2.0) / (eigenvalue(self.p, self.alpha, idx.n) + 1.0))
    }

    /// Direct summation of the wavelet series at `x`, returning the complex
    /// value and a bound on truncation plus rounding.
    ///
    /// Only levels `N >= log_p |x - x_k|_p` reach `x`. The sum stops at the
    /// first `M` with `p^{-M} <= tol / 2`.
    pub fn eval_complex(&self, x: &PadicRational, tol: f64) -> Result<(Complex64, f64)> {
        let diff = x - &self.anchor;
        let Some(gamma0) = diff.norm_exp() else {
            return Err(Error::DiagonalDivergence(self.alpha));
        };
        let m = upper_cut(self.p, gamma0, tol / 2.0);
        if m - gamma0 > MAX_LEVELS {
            return Err(Error::NotFinite);
        }
        let mut terms = Vec::new();
        for n in gamma0..=m {
            for j in 1..self.p.get() {
                let idx = self.index(n, j);
                let v = self.coefficient(&idx) * idx.eval(x);
                if v != Complex64::zero() {
                    terms.push(v);
                }
            }
        }
        terms.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        let max = terms.first().map_or(0.0, |t| t.norm());
        let count = terms.len() as f64;
        let mut s = Complex64::zero();
        let mut c = Complex64::zero();
        for t in terms {
            neumaier(&mut s, &mut c, t);
        }
        let rounding = 4.0 * f64::EPSILON * count * max;
        Ok((s + c, self.p.powi(-m) + rounding))
    }

    /// `h_k(x)` with a bound on the error. The imaginary part of the raw sum
    /// is checked against the realness of `h_k` and dropped.
    ///
    /// At `x = x_k` this is the diagonal value for `alpha > 1` and an error
    /// otherwise.
    pub fn eval(&self, x: &PadicRational, tol: f64) -> Result<(f64, f64)> {
        if *x == self.anchor {
            return diagonal_value(self.p, self.alpha, tol);
        }
        let (v, bound) = self.eval_complex(x, tol)?;
        assert!(
            v.im.abs() <= 1e-12 + bound,
            "Green function has imaginary part {} at {x}",
            v.im
        );
        Ok((v.re, bound))
    }

    /// Coefficients at levels `n_min..=n_max`.
    pub fn expansion(&self, n_min: i64, n_max: i64) -> WaveletExpansion {
        let mut e = WaveletExpansion::zero(self.p);
        for n in n_min..=n_max {
            for j in 1..self.p.get() {
                let idx = self.index(n, j);
                let c = self.coefficient(&idx);
                e.add_coefficient(idx, c);
            }
        }
        e
    }

    /// `(w, h_k) = sum_I w_I conj(h_I)` for a finite expansion `w`.
    pub fn pair_with(&self, w: &WaveletExpansion) -> Result<Complex64> {
        if w.prime() != self.p {
            return Err(Error::PrimeMismatch(w.prime().get(), self.p.get()));
        }
        Ok(w.coefficients()
            .iter()
            .map(|(i, c)| c * self.coefficient(i).conj())
            .sum())
    }

    /// `sup_x` of the omitted part when only levels `N >= n_low` are kept,
    /// ignoring the upper truncation. Finite only for `alpha > 1`: for
    /// smaller `alpha` the low levels are controlled only away from `x_k`,
    /// see [`GreenFunction::tail_bound_away`].
    pub fn uniform_lower_tail(&self, n_low: i64) -> Option<f64> {
        (self.alpha > 1.0).then(|| lower_tail(self.p, self.alpha, n_low))
    }

    /// Same, but for `x` with `|x - x_k|_p >= p^{gamma_min}`: levels below
    /// `gamma_min` never reach such `x`.
    pub fn tail_bound_away(&self, n_low: i64, gamma_min: i64) -> f64 {
        if n_low <= gamma_min {
            0.0
        } else {
            (gamma_min..n_low)
                .map(|n| level_weight(self.p, self.alpha, n))
                .sum()
        }
    }
}

/// `h_k(x)` at any `x` with `|x - x_k|_p = p^{gamma0}`:
/// `-p^{-gamma0} / (lambda_{gamma0} + 1) + (p-1) sum_{N > gamma0} p^{-N} / (lambda_N + 1)`.
///
/// The first term comes from the nontrivial character sum
/// `sum_{j=1}^{p-1} chi_p(p^{gamma0-1} j (x - x_k)) = -1`; above `gamma0`
/// every character is `1`.
pub fn radial_oracle(p: Prime, alpha: f64, gamma0: i64, tol: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    let m = upper_cut(p, gamma0, tol / 2.0);
    if m - gamma0 > MAX_LEVELS {
        return Err(Error::NotFinite);
    }
    let mut terms = vec![-p.powi(-gamma0) / (eigenvalue(p, alpha, gamma0) + 1.0)];
    terms.extend(((gamma0 + 1)..=m).map(|n| level_weight(p, alpha, n)));
    let (v, rounding) = sum_sorted(terms);
    Ok((v, p.powi(-m) + rounding))
}

/// `h_k(x_k) = (p-1) sum_{N in Z} p^{-N} / (lambda_N + 1)`, the same for every
/// `x_k`. The series converges only for `alpha > 1`.
pub fn diagonal_value(p: Prime, alpha: f64, tol: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if alpha <= 1.0 {
        return Err(Error::DiagonalDivergence(alpha));
    }
    let low = lower_cut(p, alpha, tol / 2.0)?;
    let high = upper_cut(p, low, tol / 2.0);
    let (v, rounding) = sum_sorted((low..=high).map(|n| level_weight(p, alpha, n)).collect());
    Ok((v, lower_tail(p, alpha, low) + p.powi(-high) + rounding))
}

/// `<delta_{x_k}, .>`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaFunctional {
    pub point: PadicRational,
}

impl DeltaFunctional {
    pub fn new(point: PadicRational) -> Self {
        DeltaFunctional { point }
    }

    /// `p^{-N/2} chi_p(-p^{N-1} j x_k)` at `eps = {p^N x_k}_p`, zero elsewhere.
    pub fn coefficient(&self, idx: &WaveletIndex) -> Complex64 {
        let p = self.point.prime();
        if idx.eps != fractional_part_of(p, &(self.point.value() * p.pow(idx.n))) {
            return Complex64::zero();
        }
        self.point
            .scale(idx.n - 1)
            .mul_int(-(idx.j as i64))
            .character()
            .value()
            * idx.amplitude(p)
    }

    /// `u(x_k) = sum_I c_I conj(d_I)`.
    pub fn pair(&self, e: &WaveletExpansion) -> Complex64 {
        e.coefficients()
            .iter()
            .map(|(i, c)| c * self.coefficient(i).conj())
            .sum()
    }
}

pub fn delta_pairing(d: &DeltaFunctional, e: &WaveletExpansion) -> Complex64 {
    d.pair(e)
}

/// What `weak_residual` is tested against.
#[derive(Debug, Clone, PartialEq)]
pub enum WeakProbe<'a> {
    Expansion(&'a WaveletExpansion),
    Test(&'a TestFunction<Complex64>),
}

/// `|<h_k, (D^alpha + I) phi> - phi(x_k)|` and its guaranteed bound.
///
/// The pairing runs over wavelet coefficients of `phi` against the Green
/// coefficients. For a finite expansion the identity is exact; a test
/// function is expanded with enough levels that the omitted part is at most
/// `tol`.
pub fn weak_residual(g: &GreenFunction, phi: WeakProbe<'_>, tol: f64) -> Result<(f64, f64)> {
    let p = g.prime();
    let (e, target) = match phi {
        WeakProbe::Expansion(e) => {
            let (v, _) = e.point_eval(g.anchor());
            (e.clone(), v)
        }
        WeakProbe::Test(f) => {
            let f = f.canonicalize();
            let Some(low) = f.constancy_parameter() else {
                return Ok((0.0, 0.0));
            };
            let top = f.support_exponent().unwrap_or(low);
            let integral = f.integrate().norm();
            let n_max = if integral > 0.0 {
                upper_cut(p, top, tol / integral)
            } else {
                top
            };
            (
                expand_test_function(&f, low + 1, n_max),
                f.evaluate(g.anchor()),
            )
        }
    };
    let pairing: Complex64 = e
        .coefficients()
        .iter()
        .map(|(i, c)| c * (eigenvalue(p, g.alpha(), i.n) + 1.0) * g.coefficient(i).conj())
        .sum();
    // both sums add terms of size |c| p^{-N/2}
    let scale = e
        .coefficients()
        .iter()
        .map(|(i, c)| c.norm() * i.amplitude(p))
        .sum::<f64>()
        .max(1.0);
    let rounding = 8.0 * f64::EPSILON * scale * e.len().max(1) as f64;
    Ok(((pairing - target).norm(), e.sup_tail() + rounding))
}

/// Partial sums of a per-level increment on both sides of `N = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelPartials {
    /// `(N, sum over 1..=N)` for `N = 1, 2, ...`.
    pub positive: Vec<(i64, f64)>,
    /// `(N, sum over N..=0)` for `N = 0, -1, ..., n_floor`.
    pub negative: Vec<(i64, f64)>,
    /// Increments on the negative side.
    pub increments: Vec<(i64, f64)>,
}

impl LevelPartials {
    fn build(n_floor: i64, n_top: i64, inc: impl Fn(i64) -> f64) -> Self {
        let mut positive = Vec::new();
        let mut s = 0.0;
        for n in 1..=n_top {
            s += inc(n);
            positive.push((n, s));
        }
        let mut negative = Vec::new();
        let mut increments = Vec::new();
        let mut s = 0.0;
        for n in (n_floor..=0).rev() {
            let d = inc(n);
            s += d;
            increments.push((n, d));
            negative.push((n, s));
        }
        LevelPartials {
            positive,
            negative,
            increments,
        }
    }

    pub fn negative_total(&self) -> f64 {
        self.negative.last().map_or(0.0, |x| x.1)
    }

    pub fn positive_total(&self) -> f64 {
        self.positive.last().map_or(0.0, |x| x.1)
    }
}

/// `||D^{alpha/2} h_k||^2` by levels: increment
/// `(p-1) p^{-N} lambda_N / (lambda_N + 1)^2`. The positive side runs up to
/// `N = 64`, the negative side down to `n_floor`.
pub fn half_power_membership(g: &GreenFunction, n_floor: i64) -> LevelPartials {
    let (p, a) = (g.prime(), g.alpha());
    LevelPartials::build(n_floor, 64, |n| {
        let l = eigenvalue(p, a, n);
        (p.as_f64() - 1.0) * p.powi(-n) * l / (l + 1.0).powi(2)
    })
}

/// Lower bound `(p-1) p^{(alpha-1)N} / (4 p^alpha)` for the `N <= 0`
/// increments of [`half_power_membership`].
pub fn half_power_lower_bound(p: Prime, alpha: f64, n: i64) -> f64 {
    (p.as_f64() - 1.0) * p.powf((alpha - 1.0) * n as f64) / (4.0 * p.powf(alpha))
}

/// `||h_k||^2` by levels: increment `(p-1) p^{-N} / (lambda_N + 1)^2`.
/// Defined for every `alpha > 0` so divergence at `alpha <= 1/2` can be
/// observed.
pub fn green_norm_partials(p: Prime, alpha: f64, n_floor: i64) -> LevelPartials {
    LevelPartials::build(n_floor, 64, |n| {
        (p.as_f64() - 1.0) * p.powi(-n) / (eigenvalue(p, alpha, n) + 1.0).powi(2)
    })
}

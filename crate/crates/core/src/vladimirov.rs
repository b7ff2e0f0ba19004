//! The Vladimirov operator `D^alpha`, the Fourier multiplier by `|xi|_p^alpha`.
//!
//! On the wavelet basis it is diagonal with eigenvalue `p^{alpha(1-N)}` at
//! level `N`, which is how it is applied here. An independent point oracle
//! evaluates the Fourier definition directly on ball combinations.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{Ball, PadicRational, Prime};
use crate::schwartz::TestFunction;
use crate::wavelets::{expand_test_function, neumaier, WaveletExpansion, WaveletIndex};

/// `psi_{N j eps} -> (p^{alpha(1-N)} + shift) psi_{N j eps}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMultiplier {
    pub alpha: f64,
    pub shift: f64,
}

impl SpectralMultiplier {
    pub fn new(alpha: f64, shift: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && shift.is_finite() && shift >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "multiplier needs alpha > 0 and shift >= 0 (got {alpha}, {shift})"
            )));
        }
        Ok(SpectralMultiplier { alpha, shift })
    }

    /// `D^alpha`.
    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0)
    }

    /// `D^alpha + I`.
    pub fn shifted(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn eigenvalue(&self, p: Prime, n: i64) -> f64 {
        eigenvalue(p, self.alpha, n) + self.shift
    }
}

/// `p^{alpha(1-N)}`.
pub fn eigenvalue(p: Prime, alpha: f64, n: i64) -> f64 {
    p.powf(alpha * (1 - n) as f64)
}

/// Coefficientwise multiplication. Omitted terms are bounded using the
/// largest eigenvalue over the omitted levels, which sits at the tail floor
/// because eigenvalues decrease in `N`.
pub fn apply_spectral(m: &SpectralMultiplier, e: &WaveletExpansion) -> Result<WaveletExpansion> {
    let p = e.prime();
    let out = e.map_levels(|n| m.eigenvalue(p, n));
    if e.is_finite() {
        return Ok(out);
    }
    let floor = e.tail_floor().ok_or(Error::UnboundedTail)?;
    let sup = m.eigenvalue(p, floor);
    Ok(out.with_tails(e.l2_tail() * sup, e.sup_tail() * sup, Some(floor)))
}

/// `D^alpha phi` for a test function, by the wavelet route: expand with
/// every level from the parameter of constancy up to `n_max`, multiply,
/// keep the tail bounds.
pub fn dalpha_test_function(
    phi: &TestFunction<Complex64>,
    alpha: f64,
    n_max: i64,
) -> Result<WaveletExpansion> {
    let m = SpectralMultiplier::power(alpha)?;
    let low = phi.canonicalize().constancy_parameter().unwrap_or(0);
    apply_spectral(&m, &expand_test_function(phi, low + 1, n_max))
}

/// `int_{B_gamma(c)} |xi|^alpha chi_p(-xi x) d xi`, in closed form.
fn ball_integral(ball: &Ball, alpha: f64, x: &PadicRational) -> Complex64 {
    let p = ball.prime();
    let gamma = ball.radius_exp();
    let c = ball.center();
    let x_exp = x.norm_exp();
    match c.norm_exp() {
        Some(ce) if ce > gamma => {
            // |xi| = |c| on the whole ball
            if x_exp.is_none_or(|s| s <= -gamma) {
                let phase = (c * x).mul_int(-1).character().value();
                phase * (p.powf(alpha * ce as f64) * p.powi(gamma))
            } else {
                Complex64::zero()
            }
        }
        _ => {
            // sum over spheres S_k, k <= gamma, with a geometric inner part
            let ratio = p.powf(-(alpha + 1.0));
            let full = |k: i64| {
                (1.0 - 1.0 / p.as_f64()) * p.powf((alpha + 1.0) * k as f64) / (1.0 - ratio)
            };
            match x_exp {
                None => Complex64::new(full(gamma), 0.0),
                Some(s) => {
                    let mut v = full(gamma.min(-s));
                    let edge = 1 - s;
                    if edge <= gamma {
                        v -= p.powf(alpha * edge as f64) * p.powi(edge - 1);
                    }
                    Complex64::new(v, 0.0)
                }
            }
        }
    }
}

/// `(D^alpha phi)(x) = int |xi|^alpha F[phi](xi) chi_p(-xi x) d xi`, summed
/// exactly ball by ball over the Fourier transform.
pub fn dalpha_point_oracle(
    phi: &TestFunction<Complex64>,
    alpha: f64,
    x: &PadicRational,
) -> Complex64 {
    dalpha_point_oracle_many(phi, alpha, std::slice::from_ref(x))[0]
}

/// [`dalpha_point_oracle`] at several points, transforming `phi` once.
pub fn dalpha_point_oracle_many(
    phi: &TestFunction<Complex64>,
    alpha: f64,
    xs: &[PadicRational],
) -> Vec<Complex64> {
    let f = phi.fourier();
    xs.iter()
        .map(|x| {
            let mut sum = Complex64::zero();
            let mut comp = Complex64::zero();
            for (ball, c) in f.terms() {
                neumaier(&mut sum, &mut comp, c * ball_integral(ball, alpha, x));
            }
            sum + comp
        })
        .collect()
}

/// Squared coefficient mass per level, as needed by membership probes.
pub trait LevelNorms {
    fn prime(&self) -> Prime;
    /// Highest level with nonzero mass, if any.
    fn top_level(&self) -> Option<i64>;
    /// `sum_{j, eps} |c_{N j eps}|^2`.
    fn level_norm_sq(&self, n: i64) -> f64;
}

impl LevelNorms for WaveletExpansion {
    fn prime(&self) -> Prime {
        WaveletExpansion::prime(self)
    }

    fn top_level(&self) -> Option<i64> {
        self.coefficients().keys().map(|i| i.n).max()
    }

    fn level_norm_sq(&self, n: i64) -> f64 {
        self.coefficients()
            .iter()
            .filter(|(i, _)| i.n == n)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }
}

/// Partial sums of `sum |c|^2 p^{2 alpha(1-N)}` from the top level down to
/// `n_floor`, as `(N, partial sum through N)`.
pub fn domain_membership_partial<E: LevelNorms + ?Sized>(
    e: &E,
    alpha: f64,
    n_floor: i64,
) -> Vec<(i64, f64)> {
    let p = e.prime();
    let Some(top) = e.top_level() else {
        return vec![(n_floor, 0.0)];
    };
    let mut acc = 0.0;
    let mut comp = 0.0;
    let mut out = Vec::new();
    for n in (n_floor..=top.max(n_floor)).rev() {
        let term = e.level_norm_sq(n) * eigenvalue(p, alpha, n).powi(2);
        let t = acc + term;
        comp += if acc.abs() >= term.abs() {
            (acc - t) + term
        } else {
            (term - t) + acc
        };
        acc = t;
        out.push((n, acc + comp));
    }
    out
}

/// `f = sum_{N <= -1} p^{(N-1)/2} / |N| psi_{N 1 0}`: in `D(D^alpha)` exactly
/// for `alpha <= 1/2`, and unbounded near `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counterexample {
    pub p: Prime,
}

impl Counterexample {
    pub fn new(p: Prime) -> Self {
        Counterexample { p }
    }

    /// Coefficient at `(N, 1, 0)`; zero elsewhere.
    pub fn coefficient(&self, n: i64) -> f64 {
        if n <= -1 {
            self.p.powf((n - 1) as f64 / 2.0) / n.unsigned_abs() as f64
        } else {
            0.0
        }
    }

    /// Truncation to `n_floor <= N <= -1`. The omitted part near `N -> -inf`
    /// carries an `L2` bound but no pointwise one, and eigenvalues are
    /// unbounded there, so no tail floor is recorded.
    pub fn truncated(&self, n_floor: i64) -> WaveletExpansion {
        let coeffs = (n_floor..=-1).map(|n| {
            (
                WaveletIndex {
                    n,
                    j: 1,
                    eps: BigRational::zero(),
                },
                Complex64::new(self.coefficient(n), 0.0),
            )
        });
        let e = WaveletExpansion::finite(self.p, coeffs).expect("j = 1 and eps = 0 are valid");
        let l2 =
            (self.p.powi(n_floor - 2) / (n_floor * n_floor) as f64 / (1.0 - 1.0 / self.p.as_f64()))
                .sqrt();
        e.with_tails(l2, f64::INFINITY, None)
    }

    /// Bound on `sum_{N < n_floor} |c_N|^2 p^{2 alpha(1-N)}` from the geometric
    /// series `p^{2 alpha - 1} p^{N(1 - 2 alpha)} / n_floor^2`; `None` when
    /// that series diverges (`alpha >= 1/2`).
    pub fn membership_tail_bound(&self, alpha: f64, n_floor: i64) -> Option<f64> {
        let q = 1.0 - 2.0 * alpha;
        if q <= 0.0 || n_floor > -1 {
            return None;
        }
        let p = self.p.as_f64();
        let first = p.powf(2.0 * alpha - 1.0) * p.powf((n_floor - 1) as f64 * q);
        Some(first / (1.0 - p.powf(-q)) / (n_floor * n_floor) as f64)
    }

    /// Direct summation of `sum_N |N|^{-1} p^{-1/2} chi_p(p^{N-1} x) Omega(|p^N x|_p)`.
    /// Finite for `x != 0` (only `-v(x) <= N <= -1` survive); diverges at `0`.
    pub fn direct_series(&self, x: &PadicRational) -> Result<Complex64> {
        let v = x.valuation().ok_or(Error::NotFinite)?;
        let amp = self.p.powf(-0.5);
        let mut sum = Complex64::zero();
        let mut comp = Complex64::zero();
        for n in -v..=-1 {
            let ch = x.scale(n - 1).character().value();
            neumaier(&mut sum, &mut comp, ch * (amp / n.unsigned_abs() as f64));
        }
        Ok(sum + comp)
    }

    /// `f(p^n) = p^{-1/2} [chi_p(p^{-1}) / n + sum_{k=1}^{n-1} 1/k]`.
    pub fn value_at_power(&self, n: u32) -> Complex64 {
        assert!(n >= 1, "n must be positive");
        let ch = PadicRational::power_of_p(self.p, -1).character().value();
        let harmonic: f64 = (1..n).rev().map(|k| 1.0 / k as f64).sum();
        (ch / n as f64 + harmonic) * self.p.powf(-0.5)
    }
}

impl LevelNorms for Counterexample {
    fn prime(&self) -> Prime {
        self.p
    }

    fn top_level(&self) -> Option<i64> {
        Some(-1)
    }

    fn level_norm_sq(&self, n: i64) -> f64 {
        self.coefficient(n).powi(2)
    }
}

/// `f(p^n)` of the counterexample, closed form.
pub fn counterexample_value(p: Prime, n: u32) -> Complex64 {
    Counterexample::new(p).value_at_power(n)
}

/// `(D^alpha phi)(x)` by the wavelet route, truncated so the omitted part is
/// at most `tol`.
pub fn dalpha_eval(
    phi: &TestFunction<Complex64>,
    alpha: f64,
    x: &PadicRational,
    tol: f64,
) -> Result<(Complex64, f64)> {
    let integral = phi.integrate().norm();
    let top = phi.support_exponent().unwrap_or(0);
    // closed family tail: p^{-M} |int phi| times the largest omitted eigenvalue
    let mut n_max = top;
    while integral * phi.prime().powi(-n_max) * eigenvalue(phi.prime(), alpha, n_max + 1) > tol {
        n_max += 1;
    }
    let e = dalpha_test_function(phi, alpha, n_max)?;
    Ok(e.point_eval(x))
}

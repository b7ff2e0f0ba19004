//! Point interactions: finite-rank perturbations of `D^alpha` at points
//! `x_1..x_n`.
//!
//! Elements of the adjoint domain are `f = u + sum_j c_j h_j` with `u` a
//! finite wavelet expansion and `h_j` the Green functions. The boundary maps
//! are `Gamma_0 f = (u(x_k) + (R c)_k)_k` and `Gamma_1 f = -c`, where `R`
//! collects `h_j(x_k)` (with a user-chosen diagonal when `alpha <= 1`). The
//! realization `A_B` is the restriction to `B Gamma_0 f = Gamma_1 f`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::{diagonal_value, GreenFunction};
use crate::padic::{format_rational, parse_rational, PadicRational, Prime};
use crate::vladimirov::{apply_spectral, SpectralMultiplier};
use crate::wavelets::{WaveletExpansion, WaveletIndex};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Configs are capped at this many points.
pub const MAX_POINTS: usize = 64;
/// Entrywise tolerance for Hermiticity of user matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for identities that involve the computed `R`.
pub const R_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionConfig {
    pub p: Prime,
    pub alpha: f64,
    pub points: Vec<PadicRational>,
    pub b: CMatrix,
    /// Diagonal of `R` when `1/2 < alpha <= 1`.
    pub r: f64,
    pub y: Option<CMatrix>,
}

impl InteractionConfig {
    pub fn new(
        p: Prime,
        alpha: f64,
        points: Vec<PadicRational>,
        b: CMatrix,
        r: f64,
        y: Option<CMatrix>,
    ) -> Result<Self> {
        let cfg = InteractionConfig {
            p,
            alpha,
            points,
            b,
            r,
            y,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_nan() || self.alpha <= 0.5 {
            return Err(Error::NotInL2(self.alpha));
        }
        if !self.alpha.is_finite() || !self.r.is_finite() {
            return Err(Error::InvalidConfig("alpha and r must be finite".into()));
        }
        let n = self.points.len();
        if n == 0 || n > MAX_POINTS {
            return Err(Error::InvalidConfig(format!(
                "need 1..={MAX_POINTS} points, got {n}"
            )));
        }
        for (i, x) in self.points.iter().enumerate() {
            if x.prime() != self.p {
                return Err(Error::PrimeMismatch(x.prime().get(), self.p.get()));
            }
            if self.points[..i].contains(x) {
                return Err(Error::InvalidConfig(format!("point {x} repeated")));
            }
        }
        if self.b.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "B is {:?}, expected {n}x{n}",
                self.b.shape()
            )));
        }
        if let Some(y) = &self.y {
            if y.shape() != (n, n) {
                return Err(Error::Dimension(format!(
                    "Y is {:?}, expected {n}x{n}",
                    y.shape()
                )));
            }
        }
        if self
            .b
            .iter()
            .chain(self.y.iter().flatten())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidConfig("matrix entries must be finite".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn greens(&self) -> Vec<GreenFunction> {
        self.points
            .iter()
            .map(|x| GreenFunction::new(self.alpha, x.clone()).expect("alpha validated"))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    p: u64,
    alpha: f64,
    points: Vec<String>,
    #[serde(rename = "B")]
    b: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    r: f64,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    y: Option<Vec<Vec<[f64; 2]>>>,
}

fn matrix_from_rows(name: &str, rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Dimension(format!(
            "{name} row of length {} in a {n}-row matrix",
            bad.len()
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl InteractionConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: ConfigJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let p = Prime::new(raw.p)?;
        let points = raw
            .points
            .iter()
            .map(|s| parse_rational(s).map(|q| PadicRational::new(p, q)))
            .collect::<Result<Vec<_>>>()?;
        let b = matrix_from_rows("B", &raw.b)?;
        let y = raw
            .y
            .as_deref()
            .map(|rows| matrix_from_rows("Y", rows))
            .transpose()?;
        Self::new(p, raw.alpha, points, b, raw.r, y)
    }

    pub fn to_json(&self) -> String {
        let raw = ConfigJson {
            p: self.p.get(),
            alpha: self.alpha,
            points: self
                .points
                .iter()
                .map(|x| format_rational(x.value()))
                .collect(),
            b: matrix_to_rows(&self.b),
            r: self.r,
            y: self.y.as_ref().map(matrix_to_rows),
        };
        serde_json::to_string(&raw).expect("plain data serializes")
    }
}

/// `f = u + sum_j c_j h_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainElement {
    pub u: WaveletExpansion,
    pub c: CVector,
}

impl DomainElement {
    pub fn new(u: WaveletExpansion, c: CVector) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::InvalidConfig(
                "regular part must be a finite expansion".into(),
            ));
        }
        Ok(DomainElement { u, c })
    }

    pub fn regular(u: WaveletExpansion, n: usize) -> Result<Self> {
        Self::new(u, CVector::zeros(n))
    }

    pub fn defect(p: Prime, c: CVector) -> Self {
        DomainElement {
            u: WaveletExpansion::zero(p),
            c,
        }
    }

    /// `a f + b g`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.c.len() != other.c.len() {
            return Err(Error::Dimension("defect parts of different length".into()));
        }
        Ok(DomainElement {
            u: self.u.combine(a, &other.u, b)?,
            c: self.c.map(|z| z * a) + other.c.map(|z| z * b),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Regularized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    pub entries: CMatrix,
    pub provenance: Vec<Vec<Provenance>>,
    /// Largest evaluation error bound among computed entries.
    pub bound: f64,
}

/// `r_kj = h_j(x_k)`; the diagonal is the convergent diagonal value for
/// `alpha > 1` and the config's `r` otherwise.
pub fn build_r_matrix(cfg: &InteractionConfig, tol: f64) -> Result<RMatrix> {
    cfg.validate()?;
    let n = cfg.n();
    let greens = cfg.greens();
    let mut entries = CMatrix::zeros(n, n);
    let mut provenance = vec![vec![Provenance::Computed; n]; n];
    let mut bound: f64 = 0.0;
    for k in 0..n {
        for j in 0..n {
            let (v, b) = if k == j {
                if cfg.alpha > 1.0 {
                    diagonal_value(cfg.p, cfg.alpha, tol)?
                } else {
                    provenance[k][j] = Provenance::Regularized;
                    (cfg.r, 0.0)
                }
            } else {
                greens[j].eval(&cfg.points[k], tol)?
            };
            entries[(k, j)] = Complex64::new(v, 0.0);
            bound = bound.max(b);
        }
    }
    let defect = hermitian_defect(&entries);
    assert!(defect <= R_TOL, "R fails symmetry by {defect}");
    Ok(RMatrix {
        entries,
        provenance,
        bound,
    })
}

/// `max |M - M^H|` entrywise.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `max_i |v_i|`.
pub fn inf_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `(a, b) = sum a_i conj(b_i)`.
fn dot(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub gamma0: CVector,
    pub gamma1: CVector,
}

fn point_values(u: &WaveletExpansion, cfg: &InteractionConfig) -> CVector {
    CVector::from_iterator(cfg.n(), cfg.points.iter().map(|x| u.point_eval(x).0))
}

pub fn gamma_maps(f: &DomainElement, cfg: &InteractionConfig, r: &RMatrix) -> BoundaryData {
    assert_eq!(f.c.len(), cfg.n(), "defect vector length");
    BoundaryData {
        gamma0: point_values(&f.u, cfg) + &r.entries * &f.c,
        gamma1: -f.c.clone(),
    }
}

/// `A* f = D^alpha u - sum_j c_j h_j`, as `(D^alpha u, -c)`.
pub fn adjoint_apply(f: &DomainElement, cfg: &InteractionConfig) -> Result<DomainElement> {
    let du = apply_spectral(&SpectralMultiplier::power(cfg.alpha)?, &f.u)?;
    DomainElement::new(du, -f.c.clone())
}

/// `(f, g)` minus the `(h_j, h_k)` block, which cancels in every
/// antisymmetric combination used here.
fn reduced_inner(
    f: &DomainElement,
    g: &DomainElement,
    greens: &[GreenFunction],
) -> Result<Complex64> {
    let mut s = f.u.inner(&g.u)?;
    for (k, h) in greens.iter().enumerate() {
        s += g.c[k].conj() * h.pair_with(&f.u)?;
        s += f.c[k] * h.pair_with(&g.u)?.conj();
    }
    Ok(s)
}

/// `(A* f, g) - (f, A* g)` up to the cancelling `(h, h)` terms.
pub fn symmetry_defect(
    f: &DomainElement,
    g: &DomainElement,
    cfg: &InteractionConfig,
) -> Result<Complex64> {
    let greens = cfg.greens();
    let af = adjoint_apply(f, cfg)?;
    let ag = adjoint_apply(g, cfg)?;
    Ok(reduced_inner(&af, g, &greens)? - reduced_inner(f, &ag, &greens)?)
}

/// `|(A*f, g) - (f, A*g) - [(Gamma_1 f, Gamma_0 g) - (Gamma_0 f, Gamma_1 g)]|`.
pub fn green_identity_defect(
    f: &DomainElement,
    g: &DomainElement,
    cfg: &InteractionConfig,
    r: &RMatrix,
) -> Result<f64> {
    let lhs = symmetry_defect(f, g, cfg)?;
    let bf = gamma_maps(f, cfg, r);
    let bg = gamma_maps(g, cfg, r);
    let rhs = dot(&bf.gamma1, &bg.gamma0) - dot(&bf.gamma0, &bg.gamma1);
    Ok((lhs - rhs).norm())
}

/// `||B Gamma_0 f - Gamma_1 f||_inf <= tol`.
pub fn realization_domain_check(
    f: &DomainElement,
    cfg: &InteractionConfig,
    r: &RMatrix,
    tol: f64,
) -> bool {
    let bd = gamma_maps(f, cfg, r);
    inf_norm(&(&cfg.b * &bd.gamma0 - &bd.gamma1)) <= tol
}

/// Level at which the wavelets around distinct points have disjoint supports:
/// one below the smallest `log_p |x_i - x_k|_p`.
fn separation_level(cfg: &InteractionConfig) -> i64 {
    let mut best: Option<i64> = None;
    for (i, a) in cfg.points.iter().enumerate() {
        for b in &cfg.points[..i] {
            let e = (a - b).norm_exp().expect("points distinct");
            best = Some(best.map_or(e, |x| x.min(e)));
        }
    }
    best.map_or(0, |e| e - 1)
}

/// A finite `u` with prescribed values at the points: one wavelet
/// `psi_{N0, 1, {p^N0 x_i}}` per point, at a level where supports are disjoint.
pub fn regular_part_with_values(
    cfg: &InteractionConfig,
    values: &CVector,
) -> Result<WaveletExpansion> {
    let n0 = separation_level(cfg);
    let mut u = WaveletExpansion::zero(cfg.p);
    for (x, v) in cfg.points.iter().zip(values.iter()) {
        let idx = WaveletIndex::from_coset(cfg.p, n0, 1, &(x.value() * cfg.p.pow(n0)))?;
        let at = idx.eval(x);
        if !v.is_zero() {
            u.add_coefficient(idx, v / at);
        }
    }
    Ok(u)
}

/// An element with `Gamma_0 f = gamma0` and `Gamma_1 f = gamma1`.
pub fn construct_with_boundary(
    gamma0: &CVector,
    gamma1: &CVector,
    cfg: &InteractionConfig,
    r: &RMatrix,
) -> Result<DomainElement> {
    if gamma0.len() != cfg.n() || gamma1.len() != cfg.n() {
        return Err(Error::Dimension(
            "boundary vectors must have one entry per point".into(),
        ));
    }
    let c = -gamma1.clone();
    let values = gamma0 - &r.entries * &c;
    DomainElement::new(regular_part_with_values(cfg, &values)?, c)
}

/// An element of `D(A_B)` with defect part `c`: `Gamma_0 f = v` for the
/// least-norm `v` with `B v = -c`.
pub fn construct_domain_element(
    c: &CVector,
    cfg: &InteractionConfig,
    r: &RMatrix,
) -> Result<DomainElement> {
    if c.len() != cfg.n() {
        return Err(Error::Dimension(
            "defect vector must have one entry per point".into(),
        ));
    }
    let target = -c.clone();
    let pinv = cfg
        .b
        .clone()
        .pseudo_inverse(1e-12)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let v = &pinv * &target;
    let miss = inf_norm(&(&cfg.b * &v - &target));
    if miss > 1e-10 * inf_norm(&target).max(1.0) {
        return Err(Error::Range(miss));
    }
    construct_with_boundary(&v, &target, cfg, r)
}

pub fn is_self_adjoint(cfg: &InteractionConfig) -> bool {
    hermitian_defect(&cfg.b) <= HERMITIAN_TOL
}

fn y_matrix(cfg: &InteractionConfig) -> Result<&CMatrix> {
    let y = cfg.y.as_ref().ok_or(Error::MissingY)?;
    let sv = y.clone().singular_values();
    let top = sv.max();
    if top == 0.0 || sv.min() <= 1e-12 * top {
        return Err(Error::SingularY);
    }
    Ok(y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaTransformReport {
    /// `max |Gamma_0(eta f) - Y^H Gamma_0 f|` over `f = h_k`.
    pub gamma0_defect: f64,
    /// `max |Gamma_1(eta f) - Y Gamma_1 f|` over `f = h_k`.
    pub gamma1_defect: f64,
    /// `max |R Y - Y^H R|`.
    pub ry_defect: f64,
    pub ry_relation_holds: bool,
    /// `1/2 < alpha <= 1`, where the relation is a hypothesis rather than a
    /// consequence of the true values of `h_j(x_k)`.
    pub regularized_regime: bool,
}

/// Checks the transformation rules of `eta` on the defect space, where it
/// acts by `Y`: `eta h_k = sum_j y_jk h_j`.
pub fn eta_transform_check(cfg: &InteractionConfig, r: &RMatrix) -> Result<EtaTransformReport> {
    let y = cfg.y.as_ref().ok_or(Error::MissingY)?;
    let n = cfg.n();
    let mut g0: f64 = 0.0;
    let mut g1: f64 = 0.0;
    for k in 0..n {
        let c = CVector::from_fn(n, |i, _| {
            if i == k {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::zero()
            }
        });
        let f = DomainElement::defect(cfg.p, c.clone());
        let ef = DomainElement::defect(cfg.p, y * &c);
        let bf = gamma_maps(&f, cfg, r);
        let be = gamma_maps(&ef, cfg, r);
        g0 = g0.max(inf_norm(&(&be.gamma0 - y.adjoint() * &bf.gamma0)));
        g1 = g1.max(inf_norm(&(&be.gamma1 - y * &bf.gamma1)));
    }
    let ry = (&r.entries * y - y.adjoint() * &r.entries)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    Ok(EtaTransformReport {
        gamma0_defect: g0,
        gamma1_defect: g1,
        ry_defect: ry,
        ry_relation_holds: ry <= R_TOL,
        regularized_regime: cfg.alpha <= 1.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaVerdict {
    pub eta_self_adjoint: bool,
    pub yb_defect: f64,
    pub yb_hermitian: bool,
    pub ry_defect: f64,
    /// Required only when `1/2 < alpha <= 1`; `None` otherwise.
    pub ry_hermitian: Option<bool>,
    pub diagnostics: Vec<String>,
}

/// `A_B` is `eta`-self-adjoint iff `Y B` is Hermitian, plus `R Y` Hermitian
/// when the diagonal of `R` is regularized.
pub fn is_eta_self_adjoint(cfg: &InteractionConfig, r: &RMatrix) -> Result<EtaVerdict> {
    let y = y_matrix(cfg)?;
    let yb_defect = hermitian_defect(&(y * &cfg.b));
    let ry_defect = hermitian_defect(&(&r.entries * y));
    let yb_hermitian = yb_defect <= HERMITIAN_TOL;
    let ry_hermitian = (cfg.alpha <= 1.0).then_some(ry_defect <= R_TOL);
    let mut diagnostics = Vec::new();
    if !yb_hermitian {
        diagnostics.push(format!("YB is not Hermitian (defect {yb_defect:.3e})"));
    }
    if ry_hermitian == Some(false) {
        diagnostics.push(format!(
            "RY is not Hermitian (defect {ry_defect:.3e}), required for alpha <= 1"
        ));
    }
    Ok(EtaVerdict {
        eta_self_adjoint: yb_hermitian && ry_hermitian != Some(false),
        yb_defect,
        yb_hermitian,
        ry_defect,
        ry_hermitian,
        diagnostics,
    })
}

/// Membership in the domain of the Friedrichs extension: `c = 0` when
/// `alpha <= 1` (the extension is `D^alpha` itself), and vanishing values
/// `Gamma_0 f = 0` at the points when `alpha > 1`.
pub fn friedrichs_domain_check(
    f: &DomainElement,
    cfg: &InteractionConfig,
    r: &RMatrix,
    tol: f64,
) -> bool {
    if cfg.alpha <= 1.0 {
        inf_norm(&f.c) <= tol
    } else {
        inf_norm(&gamma_maps(f, cfg, r).gamma0) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg(alpha: f64, points: &[(i64, i64)], b: CMatrix, y: Option<CMatrix>) -> InteractionConfig {
        let p = Prime::new(2).unwrap();
        let pts = points
            .iter()
            .map(|&(a, d)| PadicRational::from_ratio(p, a, d))
            .collect();
        InteractionConfig::new(p, alpha, pts, b, 0.0, y).unwrap()
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let s = r#"{"p":2,"alpha":1.5,"points":["0","1","1/2"],"B":[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]}"#;
        let cfg = InteractionConfig::from_json(s).unwrap();
        assert_eq!(cfg.r, 0.0);
        assert!(cfg.y.is_none());
        assert_eq!(InteractionConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        let dup = r#"{"p":2,"alpha":1.5,"points":["1","1"],"B":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(InteractionConfig::from_json(dup).is_err());
        let low = r#"{"p":2,"alpha":0.5,"points":["1"],"B":[[[1,0]]]}"#;
        assert!(matches!(
            InteractionConfig::from_json(low),
            Err(Error::NotInL2(_))
        ));
        let shape = r#"{"p":2,"alpha":1.5,"points":["1","0"],"B":[[[1,0]]]}"#;
        assert!(matches!(
            InteractionConfig::from_json(shape),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn r_matrix_examples() {
        let one = cfg(2.0, &[(0, 1)], CMatrix::identity(1, 1), None);
        let r = build_r_matrix(&one, 1e-12).unwrap();
        let (d, _) = diagonal_value(one.p, 2.0, 1e-12).unwrap();
        assert!((r.entries[(0, 0)].re - d).abs() < 1e-12);
        let two = cfg(0.8, &[(0, 1), (1, 1)], CMatrix::identity(2, 2), None);
        let r = build_r_matrix(&two, 1e-12).unwrap();
        assert_eq!(r.entries[(0, 0)], Complex64::zero());
        assert_eq!(r.provenance[1][1], Provenance::Regularized);
        assert!((r.entries[(0, 1)] - r.entries[(1, 0)]).norm() < 1e-12);
        assert!(r.entries[(0, 1)].im == 0.0);
    }

    #[test]
    fn self_adjoint_examples() {
        let herm = |rows: [[Complex64; 2]; 2]| {
            cfg(
                1.5,
                &[(0, 1), (1, 1)],
                CMatrix::from_fn(2, 2, |i, j| rows[i][j]),
                None,
            )
        };
        assert!(is_self_adjoint(&herm([
            [c(1., 0.), c(0., 0.)],
            [c(0., 0.), c(2., 0.)]
        ])));
        assert!(!is_self_adjoint(&herm([
            [c(0., 0.), c(1., 0.)],
            [c(0., 0.), c(0., 0.)]
        ])));
        assert!(is_self_adjoint(&herm([
            [c(1., 0.), c(0., 1.)],
            [c(0., -1.), c(3., 0.)]
        ])));
    }

    #[test]
    fn single_point_construction() {
        let k = cfg(2.0, &[(1, 1)], CMatrix::identity(1, 1), None);
        let r = build_r_matrix(&k, 1e-12).unwrap();
        let cc = CVector::from_element(1, c(-1.0, 0.0));
        let f = construct_domain_element(&cc, &k, &r).unwrap();
        assert!(realization_domain_check(&f, &k, &r, 1e-12));
        let (u1, _) = f.u.point_eval(&k.points[0]);
        assert!((u1 - (c(1.0, 0.0) + r.entries[(0, 0)])).norm() < 1e-12);
        let mut bad = f.clone();
        bad.c[0] += 0.1;
        assert!(!realization_domain_check(&bad, &k, &r, 1e-9));
    }

    #[test]
    fn singular_b_range() {
        let k = cfg(
            1.5,
            &[(0, 1), (1, 2)],
            CMatrix::from_fn(2, 2, |i, _| if i == 0 { c(1., 0.) } else { c(0., 0.) }),
            None,
        );
        let r = build_r_matrix(&k, 1e-12).unwrap();
        let ok = CVector::from_vec(vec![c(2., 0.), c(0., 0.)]);
        assert!(construct_domain_element(&ok, &k, &r).is_ok());
        let bad = CVector::from_vec(vec![c(0., 0.), c(1., 0.)]);
        assert!(matches!(
            construct_domain_element(&bad, &k, &r),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn adjoint_on_defect_and_wavelet() {
        let k = cfg(2.0, &[(0, 1)], CMatrix::identity(1, 1), None);
        let h = DomainElement::defect(k.p, CVector::from_element(1, c(1.0, 0.0)));
        let a = adjoint_apply(&h, &k).unwrap();
        assert!(a.u.is_empty() && a.c[0] == c(-1.0, 0.0));
        let psi = WaveletExpansion::single(
            k.p,
            WaveletIndex::from_coset(k.p, 1, 1, &num_rational::BigRational::zero()).unwrap(),
            c(1.0, 0.0),
        )
        .unwrap();
        let f = DomainElement::regular(psi.clone(), 1).unwrap();
        assert_eq!(adjoint_apply(&f, &k).unwrap().u, psi);
    }

    #[test]
    fn green_identity_small() {
        let k = cfg(1.5, &[(0, 1), (1, 4)], CMatrix::identity(2, 2), None);
        let r = build_r_matrix(&k, 1e-13).unwrap();
        let f = construct_with_boundary(
            &CVector::from_vec(vec![c(1., 2.), c(-0.5, 0.)]),
            &CVector::from_vec(vec![c(0.3, 0.), c(0., 1.)]),
            &k,
            &r,
        )
        .unwrap();
        let g = construct_with_boundary(
            &CVector::from_vec(vec![c(0., 1.), c(2., 0.)]),
            &CVector::from_vec(vec![c(1., -1.), c(0.5, 0.)]),
            &k,
            &r,
        )
        .unwrap();
        assert!(green_identity_defect(&f, &g, &k, &r).unwrap() < 1e-12);
        assert!(green_identity_defect(&f, &f, &k, &r).unwrap() < 1e-12);
        let bd = gamma_maps(&f, &k, &r);
        assert!((bd.gamma0[0] - c(1., 2.)).norm() < 1e-12 && bd.gamma1[1] == c(0., 1.));
    }

    #[test]
    fn eta_examples() {
        let b = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(2., 0.), c(3., 0.), c(1., 0.)]);
        let swap = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let k = cfg(1.5, &[(0, 1), (1, 1)], b.clone(), Some(swap.clone()));
        let r = build_r_matrix(&k, 1e-12).unwrap();
        // YB = [[3,1],[1,2]]
        let v = is_eta_self_adjoint(&k, &r).unwrap();
        assert!(v.eta_self_adjoint && !is_self_adjoint(&k));
        let rep = eta_transform_check(&k, &r).unwrap();
        assert!(rep.gamma1_defect == 0.0);
        // R Y for symmetric R with equal diagonals is symmetric
        assert!(rep.ry_relation_holds && rep.gamma0_defect < 1e-10);

        let sing = cfg(
            1.5,
            &[(0, 1)],
            CMatrix::identity(1, 1),
            Some(CMatrix::zeros(1, 1)),
        );
        let r1 = build_r_matrix(&sing, 1e-12).unwrap();
        assert!(matches!(
            is_eta_self_adjoint(&sing, &r1),
            Err(Error::SingularY)
        ));
        let none = cfg(1.5, &[(0, 1)], CMatrix::identity(1, 1), None);
        assert!(matches!(
            is_eta_self_adjoint(&none, &r1),
            Err(Error::MissingY)
        ));
    }

    #[test]
    fn eta_low_alpha_gate() {
        // diagonal real Y with unequal entries; R off-diagonal nonzero
        let y = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1., 0.), c(2., 0.)]));
        let b = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1., 0.), c(1., 0.)]));
        let k = cfg(0.8, &[(0, 1), (1, 1)], b, Some(y));
        let r = build_r_matrix(&k, 1e-12).unwrap();
        let v = is_eta_self_adjoint(&k, &r).unwrap();
        assert!(v.yb_hermitian);
        assert_eq!(v.ry_hermitian, Some(false));
        assert!(!v.eta_self_adjoint);
        assert_eq!(v.diagnostics.len(), 1);
        let rep = eta_transform_check(&k, &r).unwrap();
        assert!(!rep.ry_relation_holds && rep.regularized_regime);
    }

    #[test]
    fn friedrichs_examples() {
        let k = cfg(0.8, &[(0, 1), (1, 1)], CMatrix::identity(2, 2), None);
        let r = build_r_matrix(&k, 1e-12).unwrap();
        let u =
            regular_part_with_values(&k, &CVector::from_vec(vec![c(1., 0.), c(2., 0.)])).unwrap();
        assert!(friedrichs_domain_check(
            &DomainElement::regular(u.clone(), 2).unwrap(),
            &k,
            &r,
            1e-12
        ));
        let e1 = DomainElement::new(u, CVector::from_vec(vec![c(1., 0.), c(0., 0.)])).unwrap();
        assert!(!friedrichs_domain_check(&e1, &k, &r, 1e-12));

        let k = cfg(2.0, &[(0, 1), (1, 1)], CMatrix::identity(2, 2), None);
        let r = build_r_matrix(&k, 1e-12).unwrap();
        let f = construct_with_boundary(
            &CVector::zeros(2),
            &CVector::from_vec(vec![c(1., 0.), c(0., 3.)]),
            &k,
            &r,
        )
        .unwrap();
        assert!(friedrichs_domain_check(&f, &k, &r, 1e-10));
        let u =
            regular_part_with_values(&k, &CVector::from_vec(vec![c(1., 0.), c(0., 0.)])).unwrap();
        assert!(!friedrichs_domain_check(
            &DomainElement::regular(u, 2).unwrap(),
            &k,
            &r,
            1e-10
        ));
    }
}

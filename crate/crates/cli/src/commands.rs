//! `green-table`, `classify`, `counterexample` and `friedrichs-check`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use padic_vladimirov::green::radial_oracle;
use padic_vladimirov::realization::{
    build_r_matrix, construct_with_boundary, friedrichs_domain_check, gamma_maps, hermitian_defect,
    inf_norm, is_eta_self_adjoint, is_self_adjoint, regular_part_with_values, CMatrix, CVector,
};
use padic_vladimirov::vladimirov::counterexample_value;
use padic_vladimirov::{
    Counterexample, DomainElement, GreenFunction, InteractionConfig, PadicRational, Prime,
    WaveletExpansion,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gen;
use crate::output::{csv, num, pair, CliError, CliResult};
use crate::report::RunReport;

/// Values of the Green function at distance `p^gamma0` from `point`, one
/// row per `gamma0`, followed by one row per extra evaluation point.
pub fn green_table(
    p: Prime,
    alpha: f64,
    point: &PadicRational,
    gammas: (i64, i64),
    extra: &[PadicRational],
    tol: f64,
) -> CliResult<String> {
    let g = GreenFunction::new(alpha, point.clone())?;
    let (lo, hi) = gammas;
    if lo > hi {
        return Err(CliError::Config(format!("empty gamma range {lo}..{hi}")));
    }
    let mut rows = Vec::new();
    for gamma0 in lo..=hi {
        let (v, bound) = radial_oracle(p, alpha, gamma0, tol)?;
        rows.push(vec![
            gamma0.to_string(),
            num(p.powi(gamma0)),
            num(v),
            num(bound),
        ]);
    }
    for x in extra {
        let (v, bound) = g.eval(x, tol)?;
        let (gamma0, radius) = match (x - point).norm_exp() {
            Some(e) => (e.to_string(), num(p.powi(e))),
            None => ("-inf".to_string(), num(0.0)),
        };
        rows.push(vec![gamma0, radius, num(v), num(bound)]);
    }
    Ok(csv(&["gamma0", "radius", "h_value", "tail_bound"], &rows))
}

/// `f(p^n)` by direct summation next to the closed formula.
pub fn counterexample_table(p: Prime, n_max: u32) -> CliResult<String> {
    if n_max < 1 {
        return Err(CliError::Config("n_max must be at least 1".into()));
    }
    let f = Counterexample::new(p);
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        let direct = f.direct_series(&PadicRational::power_of_p(p, n as i64))?;
        let closed = counterexample_value(p, n);
        worst = worst.max((direct - closed).norm() / (1.0 + direct.norm()));
        rows.push(vec![
            n.to_string(),
            num(direct.re),
            num(closed.re),
            num(direct.im),
            num(closed.im),
        ]);
    }
    if worst > 1e-12 {
        return Err(CliError::Failure(format!(
            "direct series and closed formula differ by {worst:e}"
        )));
    }
    Ok(csv(
        &["n", "direct", "closed", "direct_im", "closed_im"],
        &rows,
    ))
}

#[derive(Serialize)]
pub struct Classification {
    pub self_adjoint: bool,
    pub eta_self_adjoint: Option<bool>,
    #[serde(rename = "RY_hermitian")]
    pub ry_hermitian: Option<bool>,
    #[serde(rename = "YB_hermitian")]
    pub yb_hermitian: Option<bool>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "R_provenance")]
    pub r_provenance: Vec<Vec<padic_vladimirov::realization::Provenance>>,
    pub diagnostics: BTreeMap<&'static str, serde_json::Value>,
}

fn rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

pub fn classify(cfg: &InteractionConfig, tol: f64) -> CliResult<Classification> {
    let r = build_r_matrix(cfg, tol)?;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("B_hermitian_defect", hermitian_defect(&cfg.b).into());
    diagnostics.insert("R_bound", r.bound.into());
    diagnostics.insert("regularized_diagonal", (cfg.alpha <= 1.0).into());
    let (eta, ry, yb) = if cfg.y.is_some() {
        let v = is_eta_self_adjoint(cfg, &r)?;
        diagnostics.insert("YB_hermitian_defect", v.yb_defect.into());
        diagnostics.insert("RY_hermitian_defect", v.ry_defect.into());
        diagnostics.insert("failed_conditions", v.diagnostics.clone().into());
        (
            Some(v.eta_self_adjoint),
            v.ry_hermitian,
            Some(v.yb_hermitian),
        )
    } else {
        (None, None, None)
    };
    Ok(Classification {
        self_adjoint: is_self_adjoint(cfg),
        eta_self_adjoint: eta,
        ry_hermitian: ry,
        yb_hermitian: yb,
        r: rows(&r.entries),
        r_provenance: r.provenance.clone(),
        diagnostics,
    })
}

/// Element file for `friedrichs-check`: a finite expansion `u` and the
/// defect coefficients `c` as `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
pub struct ElementJson {
    pub u: WaveletExpansion,
    pub c: Vec<[f64; 2]>,
}

#[derive(Serialize)]
pub struct FriedrichsVerdict {
    pub alpha: f64,
    pub criterion: &'static str,
    pub in_friedrichs_domain: bool,
    pub gamma0: Vec<[f64; 2]>,
    pub c: Vec<[f64; 2]>,
}

fn criterion(alpha: f64) -> &'static str {
    if alpha <= 1.0 {
        "c = 0"
    } else {
        "f(x_k) = 0 for every k"
    }
}

pub fn parse_element(text: &str, cfg: &InteractionConfig) -> CliResult<DomainElement> {
    let raw: ElementJson = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("malformed element: {e}")))?;
    if raw.u.prime() != cfg.p {
        return Err(CliError::Config(
            "element and configuration use different primes".into(),
        ));
    }
    if raw.c.len() != cfg.n() {
        return Err(CliError::Config(format!(
            "element has {} defect coefficients, expected {}",
            raw.c.len(),
            cfg.n()
        )));
    }
    let c = CVector::from_iterator(cfg.n(), raw.c.iter().map(|z| Complex64::new(z[0], z[1])));
    Ok(DomainElement::new(raw.u, c)?)
}

pub fn friedrichs_single(
    cfg: &InteractionConfig,
    f: &DomainElement,
    tol: f64,
) -> CliResult<FriedrichsVerdict> {
    let r = build_r_matrix(cfg, tol)?;
    let bd = gamma_maps(f, cfg, &r);
    Ok(FriedrichsVerdict {
        alpha: cfg.alpha,
        criterion: criterion(cfg.alpha),
        in_friedrichs_domain: friedrichs_domain_check(f, cfg, &r, tol),
        gamma0: bd.gamma0.iter().map(|z| pair(*z)).collect(),
        c: f.c.iter().map(|z| pair(*z)).collect(),
    })
}

/// Seeded sample: elements that must be accepted and elements that must be
/// rejected under the regime of `cfg.alpha`.
pub fn friedrichs_sample(cfg: &InteractionConfig, tol: f64, seed: u64, report: &mut RunReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.n();
    let r = match build_r_matrix(cfg, tol) {
        Ok(r) => r,
        Err(e) => {
            report.require("realization", "R matrix", || Err(e.into()));
            return;
        }
    };
    if cfg.alpha <= 1.0 {
        report.require("realization", "predicate equals c = 0", || {
            let mut ok = true;
            for k in 0..20 {
                let u = gen::expansion(&mut rng, cfg.p, 8, &cfg.points);
                let c = if k % 2 == 0 {
                    CVector::zeros(n)
                } else {
                    gen::cvector(&mut rng, n)
                };
                let f = DomainElement::new(u, c)?;
                ok &= friedrichs_domain_check(&f, cfg, &r, tol) == (k % 2 == 0);
            }
            Ok((ok, "20 elements".into()))
        });
    } else {
        report.require(
            "realization",
            "vanishing values accepted, perturbations rejected",
            || {
                let mut ok = true;
                for _ in 0..20 {
                    let gamma1 = gen::cvector(&mut rng, n);
                    let f = construct_with_boundary(&CVector::zeros(n), &gamma1, cfg, &r)?;
                    ok &= inf_norm(&f.c) > 0.0 && friedrichs_domain_check(&f, cfg, &r, tol);
                    let mut bump = CVector::zeros(n);
                    bump[rng.gen_range(0..n)] = Complex64::new(1e-3, 0.0);
                    let one = Complex64::new(1.0, 0.0);
                    let moved = DomainElement::new(
                        f.u.combine(one, &regular_part_with_values(cfg, &bump)?, one)?,
                        f.c.clone(),
                    )?;
                    ok &= !friedrichs_domain_check(&moved, cfg, &r, tol);
                }
                Ok((ok, "20 constructed elements".into()))
            },
        );
    }
}

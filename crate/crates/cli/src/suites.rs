//! Seeded invariant suites behind `padic verify`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_vladimirov::green::{diagonal_value, radial_oracle, weak_residual, WeakProbe};
use padic_vladimirov::realization::{
    adjoint_apply, build_r_matrix, construct_with_boundary, gamma_maps, green_identity_defect,
    hermitian_defect, inf_norm, is_eta_self_adjoint, is_self_adjoint, symmetry_defect, CVector,
};
use padic_vladimirov::vladimirov::{
    apply_spectral, counterexample_value, dalpha_eval, dalpha_point_oracle,
    dalpha_point_oracle_many, eigenvalue,
};
use padic_vladimirov::wavelets::{expand_test_function, gram_window};
use padic_vladimirov::{
    Ball, Counterexample, Cyclotomic, DomainElement, Error, ExactTestFunction, GreenFunction,
    InteractionConfig, PadicRational, Prime, SpectralMultiplier, TestFunction, WaveletExpansion,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gen;
use crate::output::CliResult;
use crate::report::RunReport;

pub const SUITES: [&str; 6] = [
    "core",
    "schwartz",
    "wavelets",
    "vladimirov",
    "green",
    "realization",
];

pub struct Params {
    pub p: Prime,
    pub alpha: f64,
    pub tol: f64,
    pub seed: u64,
    pub config: Option<InteractionConfig>,
}

/// Runs `suite` (or every suite for `all`) into `report`. Each suite gets
/// its own stream derived from the seed, so results do not depend on which
/// other suites ran.
pub fn run(suite: &str, params: &Params, report: &mut RunReport) {
    for (k, name) in SUITES.iter().enumerate() {
        if suite != "all" && suite != *name {
            continue;
        }
        let mut rng =
            ChaCha8Rng::seed_from_u64(params.seed.wrapping_mul(31).wrapping_add(k as u64));
        match *name {
            "core" => core(params, &mut rng, report),
            "schwartz" => schwartz(params, &mut rng, report),
            "wavelets" => wavelets(params, &mut rng, report),
            "vladimirov" => vladimirov(params, &mut rng, report),
            "green" => green(params, &mut rng, report),
            _ => realization(params, &mut rng, report),
        }
    }
}

/// Sample size shrunk for large primes, where pieces multiply by `p`.
fn samples(p: Prime, small: usize) -> usize {
    if p.get() <= 11 {
        small
    } else {
        small.div_ceil(6)
    }
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn core(pr: &Params, rng: &mut ChaCha8Rng, report: &mut RunReport) {
    let p = pr.p;
    let pairs: Vec<(PadicRational, PadicRational)> = (0..300)
        .map(|_| (gen::rational(rng, p), gen::rational(rng, p)))
        .collect();
    report.require("core", "ultrametric inequality", || {
        let bad = pairs
            .iter()
            .filter(|(x, y)| {
                let s = (x + y).norm();
                let (a, b) = (x.norm(), y.norm());
                s > a.clone().max(b.clone()) || (a != b && s != a.max(b))
            })
            .count();
        Ok((bad == 0, format!("{} pairs, {bad} violations", pairs.len())))
    });
    report.require("core", "norm is multiplicative", || {
        let bad = pairs
            .iter()
            .filter(|(x, y)| (x * y).norm() != x.norm() * y.norm())
            .count();
        Ok((bad == 0, format!("{bad} violations")))
    });
    report.require("core", "character is additive", || {
        let bad = pairs
            .iter()
            .filter(|(x, y)| (x + y).character() != x.character() * y.character())
            .count();
        Ok((bad == 0, format!("{bad} violations")))
    });
    report.require("core", "fractional part splits off an integer", || {
        let bad = pairs
            .iter()
            .filter(|(x, _)| {
                let f = x.fractional_part();
                let rest = x - &PadicRational::new(p, f.clone());
                f < BigRational::zero() || f >= BigRational::one() || !rest.is_integral()
            })
            .count();
        Ok((bad == 0, format!("{bad} violations")))
    });
    report.require("core", "children partition a ball", || {
        let mut bad = 0;
        for (x, y) in &pairs[..50] {
            let b = Ball::new(x.clone(), rng.gen_range(-3..=3));
            let kids = b.children();
            let total: BigRational = kids.iter().map(|k| k.haar_measure()).sum();
            let hits = kids.iter().filter(|k| k.contains(y)).count();
            if total != b.haar_measure() || hits != usize::from(b.contains(y)) {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("50 balls, {bad} violations")))
    });
}

fn schwartz(pr: &Params, rng: &mut ChaCha8Rng, report: &mut RunReport) {
    let p = pr.p;
    let fs: Vec<TestFunction<Complex64>> = (0..samples(p, 30))
        .map(|_| gen::test_function(rng, p, 4))
        .collect();
    let xs: Vec<PadicRational> = (0..8).map(|_| gen::rational(rng, p)).collect();
    let probes = |f: &TestFunction<Complex64>| -> Vec<PadicRational> {
        f.terms()
            .iter()
            .map(|(b, _)| b.center().clone())
            .chain(xs.iter().cloned())
            .collect()
    };
    report.run(
        "schwartz",
        "canonical form preserves values",
        pr.tol,
        || {
            let d = max(fs.iter().flat_map(|f| {
                let c = f.canonicalize();
                probes(f)
                    .into_iter()
                    .map(move |x| (f.evaluate(&x) - c.evaluate(&x)).norm())
            }));
            Ok((d, format!("{} functions", fs.len())))
        },
    );
    report.run(
        "schwartz",
        "Fourier transform inverts up to reflection",
        pr.tol,
        || {
            let d = max(fs.iter().flat_map(|f| {
                let ff = f.fourier().fourier();
                probes(f)
                    .into_iter()
                    .map(move |x| (ff.evaluate(&x.mul_int(-1)) - f.evaluate(&x)).norm())
            }));
            Ok((d, String::new()))
        },
    );
    report.run(
        "schwartz",
        "Parseval for the Fourier transform",
        pr.tol,
        || {
            let d = max(fs
                .iter()
                .map(|f| (f.fourier().norm_sq() - f.norm_sq()).abs() / (1.0 + f.norm_sq())));
            Ok((d, "relative".into()))
        },
    );
    report.require("schwartz", "exact Fourier transform matches float", || {
        let mut worst: f64 = 0.0;
        let mut exact_ok = true;
        // the double transform has p^2 pieces per ball, too many in Q(zeta_p) for large p
        let involution = p.get() <= 11;
        for f in fs.iter().take(10) {
            let terms = f
                .terms()
                .iter()
                .map(|(b, _)| (b.clone(), Cyclotomic::from_integer(rng.gen_range(-4..=4))))
                .collect();
            let e = ExactTestFunction::from_terms(p, terms)?;
            let ef = e.fourier();
            let eff = involution.then(|| ef.fourier());
            let ff = e.to_complex().fourier();
            for x in probes(f) {
                worst = worst.max((ef.evaluate(&x).to_complex() - ff.evaluate(&x)).norm());
                if let Some(eff) = &eff {
                    exact_ok &= eff.evaluate(&x.mul_int(-1)) == e.evaluate(&x);
                }
            }
        }
        let note = if involution {
            format!("exact involution {exact_ok}")
        } else {
            "exact involution skipped for p > 11".into()
        };
        Ok((
            worst <= pr.tol && exact_ok,
            format!("float gap {worst:.3e}, {note}"),
        ))
    });
}

fn wavelets(pr: &Params, rng: &mut ChaCha8Rng, report: &mut RunReport) {
    let p = pr.p;
    report.run("wavelets", "orthonormality on a window", pr.tol, || {
        let (lo, hi, radius) = match p.get() {
            2 | 3 => (-3, 3, 3),
            5 | 7 => (-2, 2, 2),
            11 => (0, 1, 1),
            _ => (1, 1, 1),
        };
        let exact = gram_window::<Cyclotomic>(p, lo, hi, radius);
        let float = gram_window::<Complex64>(p, lo, hi, radius);
        let d = if exact.inexact_entries > 0 {
            f64::INFINITY
        } else {
            float.max_defect
        };
        Ok((
            d,
            format!(
                "{} indices, {} entries, exact mismatches {}",
                exact.indices, exact.entries, exact.inexact_entries
            ),
        ))
    });
    let fs: Vec<TestFunction<Complex64>> = (0..samples(p, 20))
        .map(|_| gen::test_function(rng, p, 4))
        .collect();
    report.run(
        "wavelets",
        "expansion reconstructs within its tail",
        pr.tol,
        || {
            let mut d: f64 = 0.0;
            for f in &fs {
                let e = expand_test_function(f, i64::MIN / 4, 40);
                for (b, _) in f.terms() {
                    let (v, tail) = e.point_eval(b.center());
                    d = d.max(((v - f.evaluate(b.center())).norm() - tail).max(0.0));
                }
            }
            Ok((d, "excess over the sup tail".into()))
        },
    );
    report.run("wavelets", "Parseval for expansions", pr.tol, || {
        let d = max(fs.iter().map(|f| {
            let e = expand_test_function(f, i64::MIN / 4, 40);
            (e.norm_sq() + e.l2_tail().powi(2) - f.norm_sq()).abs() / (1.0 + f.norm_sq())
        }));
        Ok((d, "relative".into()))
    });
}

fn vladimirov(pr: &Params, rng: &mut ChaCha8Rng, report: &mut RunReport) {
    let (p, alpha) = (pr.p, pr.alpha);
    report.run("vladimirov", "wavelets are eigenfunctions", pr.tol, || {
        let mut d: f64 = 0.0;
        for _ in 0..samples(p, 10) {
            let idx = gen::index(rng, p, -3..=3);
            let f = idx.to_test_function(p);
            let lambda = eigenvalue(p, alpha, idx.n);
            let scale = lambda * idx.amplitude(p);
            let mut pts: Vec<PadicRational> = (0..6).map(|_| gen::rational(rng, p)).collect();
            pts.push(idx.support(p).center().clone());
            for (x, v) in pts.iter().zip(dalpha_point_oracle_many(&f, alpha, &pts)) {
                d = d.max((v - idx.eval(x) * lambda).norm() / scale);
            }
        }
        Ok((d, "relative to lambda p^{-N/2}".into()))
    });
    report.run("vladimirov", "powers compose", pr.tol, || {
        let mut d: f64 = 0.0;
        for _ in 0..20 {
            let e = gen::expansion(rng, p, 12, &[]);
            let a = rng.gen_range(0.1..2.0);
            let once = apply_spectral(&SpectralMultiplier::power(alpha + a)?, &e)?;
            let twice = apply_spectral(
                &SpectralMultiplier::power(a)?,
                &apply_spectral(&SpectralMultiplier::power(alpha)?, &e)?,
            )?;
            for (i, c) in once.coefficients() {
                d = d.max((twice.coefficient(i) - c).norm() / c.norm().max(1.0));
            }
        }
        Ok((d, "relative".into()))
    });
    report.run(
        "vladimirov",
        "wavelet route matches Fourier route",
        pr.tol,
        || {
            let mut d: f64 = 0.0;
            for _ in 0..samples(p, 10) {
                let f = gen::test_function(rng, p, 3);
                let x = gen::rational(rng, p);
                let oracle = dalpha_point_oracle(&f, alpha, &x);
                let (v, bound) = dalpha_eval(&f, alpha, &x, pr.tol / 10.0)?;
                d = d.max(((v - oracle).norm() - bound).max(0.0) / (1.0 + oracle.norm()));
            }
            Ok((d, "excess over the truncation bound".into()))
        },
    );
    report.run(
        "vladimirov",
        "counterexample closed form",
        pr.tol.max(1e-12),
        || {
            let f = Counterexample::new(p);
            let mut d: f64 = 0.0;
            for n in 1..=30u32 {
                let direct = f.direct_series(&PadicRational::power_of_p(p, n as i64))?;
                d = d.max((direct - counterexample_value(p, n)).norm() / (1.0 + direct.norm()));
            }
            Ok((d, "n = 1..30".into()))
        },
    );
    report.require(
        "vladimirov",
        "counterexample membership matches alpha <= 1/2",
        || {
            let bound = Counterexample::new(p).membership_tail_bound(alpha, -60);
            Ok((
                bound.is_some() == (alpha <= 0.5),
                format!("tail bound {bound:?}"),
            ))
        },
    );
}

fn green(pr: &Params, rng: &mut ChaCha8Rng, report: &mut RunReport) {
    let (p, alpha) = (pr.p, pr.alpha);
    if alpha <= 0.5 {
        report.require("green", "no L2 solution is reported", || {
            let g = GreenFunction::new(alpha, PadicRational::zero(p));
            let r = radial_oracle(p, alpha, 0, pr.tol);
            let ok = matches!(g, Err(Error::NotInL2(_))) && matches!(r, Err(Error::NotInL2(_)));
            Ok((ok, "Green function and radial form both rejected".into()))
        });
        return;
    }
    let anchors: Vec<PadicRational> = (0..3).map(|_| gen::rational(rng, p)).collect();
    report.run("green", "weak identity against Omega", pr.tol, || {
        let omega = TestFunction::<Complex64>::omega(p);
        let mut d: f64 = 0.0;
        for x in &anchors {
            let g = GreenFunction::new(alpha, x.clone())?;
            let (r, bound) = weak_residual(&g, WeakProbe::Test(&omega), pr.tol / 10.0)?;
            d = d.max(r.max(r - bound));
        }
        Ok((d, String::new()))
    });
    report.run(
        "green",
        "weak identity on finite expansions",
        pr.tol,
        || {
            let mut d: f64 = 0.0;
            for x in &anchors {
                let g = GreenFunction::new(alpha, x.clone())?;
                let e = gen::expansion(rng, p, 10, std::slice::from_ref(x));
                d = d.max(weak_residual(&g, WeakProbe::Expansion(&e), 0.0)?.0);
            }
            Ok((d, String::new()))
        },
    );
    report.run("green", "radial form matches direct series", pr.tol, || {
        let mut d: f64 = 0.0;
        for _ in 0..20 {
            let pts = gen::distinct_points(rng, p, 2);
            let g = GreenFunction::new(alpha, pts[1].clone())?;
            let (a, ba) = g.eval(&pts[0], pr.tol / 10.0)?;
            let gamma0 = (&pts[0] - &pts[1]).norm_exp().expect("distinct");
            let (b, bb) = radial_oracle(p, alpha, gamma0, pr.tol / 10.0)?;
            d = d.max(((a - b).abs() - ba - bb).max(0.0));
        }
        Ok((d, "excess over the evaluation bounds".into()))
    });
    if alpha > 1.0 {
        report.run("green", "diagonal value is anchor free", pr.tol, || {
            let (v, b) = diagonal_value(p, alpha, pr.tol / 10.0)?;
            let mut d: f64 = 0.0;
            for x in &anchors {
                let (w, wb) = GreenFunction::new(alpha, x.clone())?.eval(x, pr.tol / 10.0)?;
                d = d.max(((v - w).abs() - b - wb).max(0.0));
            }
            Ok((d, format!("h(x_k) = {v:.12}")))
        });
    } else {
        report.require("green", "diagonal series diverges", || {
            let r = diagonal_value(p, alpha, pr.tol);
            Ok((
                matches!(r, Err(Error::DiagonalDivergence(_))),
                "alpha <= 1".into(),
            ))
        });
    }
}

fn random_config(
    pr: &Params,
    rng: &mut ChaCha8Rng,
    n: usize,
    hermitian: bool,
) -> CliResult<InteractionConfig> {
    let pts = gen::distinct_points(rng, pr.p, n);
    let b = if hermitian {
        gen::hermitian(rng, n)
    } else {
        gen::cmatrix(rng, n)
    };
    let r = if pr.alpha <= 1.0 {
        rng.gen_range(-1.0..1.0)
    } else {
        0.0
    };
    Ok(InteractionConfig::new(pr.p, pr.alpha, pts, b, r, None)?)
}

/// `(D^alpha u, u)^{1/2}`, which bounds the rounding in `(D^alpha u, v)`.
fn energy(u: &WaveletExpansion, cfg: &InteractionConfig) -> f64 {
    u.coefficients()
        .iter()
        .map(|(i, c)| eigenvalue(cfg.p, cfg.alpha, i.n) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn realization(pr: &Params, rng: &mut ChaCha8Rng, report: &mut RunReport) {
    if pr.alpha <= 0.5 && pr.config.is_none() {
        report.require(
            "realization",
            "configuration rejected without L2 defects",
            || {
                let pts = gen::distinct_points(rng, pr.p, 2);
                let b = gen::hermitian(rng, 2);
                let r = InteractionConfig::new(pr.p, pr.alpha, pts, b, 0.0, None);
                Ok((matches!(r, Err(Error::NotInL2(_))), String::new()))
            },
        );
        return;
    }
    let configs: Vec<InteractionConfig> = match &pr.config {
        Some(c) => vec![c.clone()],
        None => {
            let mut v = Vec::new();
            for k in 0..6 {
                match random_config(pr, rng, 1 + k % 3, k % 2 == 0) {
                    Ok(c) => v.push(c),
                    Err(e) => {
                        report.require("realization", "random configuration", || Err(e));
                        return;
                    }
                }
            }
            v
        }
    };
    let element = |rng: &mut ChaCha8Rng, cfg: &InteractionConfig| {
        DomainElement::new(
            gen::expansion(rng, cfg.p, 8, &cfg.points),
            gen::cvector(rng, cfg.n()),
        )
    };
    report.run("realization", "R is Hermitian", pr.tol, || {
        let mut d: f64 = 0.0;
        for cfg in &configs {
            d = d.max(hermitian_defect(
                &build_r_matrix(cfg, pr.tol / 10.0)?.entries,
            ));
        }
        Ok((d, format!("{} configurations", configs.len())))
    });
    report.run("realization", "Green identity", pr.tol, || {
        let mut d: f64 = 0.0;
        for cfg in &configs {
            let r = build_r_matrix(cfg, pr.tol / 10.0)?;
            for _ in 0..8 {
                let (f, g) = (element(rng, cfg)?, element(rng, cfg)?);
                let scale = 1.0 + energy(&f.u, cfg) * energy(&g.u, cfg);
                d = d.max(green_identity_defect(&f, &g, cfg, &r)? / scale);
            }
        }
        Ok((d, "relative to 1 + |u_f|_E |u_g|_E".into()))
    });
    report.run("realization", "boundary values round trip", pr.tol, || {
        let mut d: f64 = 0.0;
        for cfg in &configs {
            let r = build_r_matrix(cfg, pr.tol / 10.0)?;
            let (a, b) = (gen::cvector(rng, cfg.n()), gen::cvector(rng, cfg.n()));
            let bd = gamma_maps(&construct_with_boundary(&a, &b, cfg, &r)?, cfg, &r);
            d = d
                .max(inf_norm(&(&bd.gamma0 - &a)))
                .max(inf_norm(&(&bd.gamma1 - &b)));
        }
        Ok((d, String::new()))
    });
    report.require(
        "realization",
        "adjoint maps defect vectors to their negatives",
        || {
            let mut ok = true;
            for cfg in &configs {
                let c = gen::cvector(rng, cfg.n());
                let h = adjoint_apply(&DomainElement::defect(cfg.p, c.clone()), cfg)?;
                ok &= h.u.is_empty() && h.c == -c;
            }
            Ok((ok, String::new()))
        },
    );
    report.run(
        "realization",
        "Hermitian B gives a symmetric restriction",
        pr.tol,
        || {
            let mut d: f64 = 0.0;
            let mut seen = 0;
            for cfg in configs.iter().filter(|c| is_self_adjoint(c)) {
                let r = build_r_matrix(cfg, pr.tol / 10.0)?;
                let mut elems = Vec::new();
                for _ in 0..2 {
                    let g0: CVector = gen::cvector(rng, cfg.n());
                    elems.push(construct_with_boundary(&g0, &(&cfg.b * &g0), cfg, &r)?);
                }
                let scale = 1.0 + energy(&elems[0].u, cfg) * energy(&elems[1].u, cfg);
                d = d.max(symmetry_defect(&elems[0], &elems[1], cfg)?.norm() / scale);
                seen += 1;
            }
            Ok((
                d,
                format!("{seen} Hermitian configurations, relative to 1 + |u_f|_E |u_g|_E"),
            ))
        },
    );
    if let Some(cfg) = configs.iter().find(|c| c.y.is_some()) {
        report.require("realization", "eta classification is consistent", || {
            let r = build_r_matrix(cfg, pr.tol / 10.0)?;
            let v = is_eta_self_adjoint(cfg, &r)?;
            let y = cfg.y.as_ref().expect("checked");
            let direct = hermitian_defect(&(y * &cfg.b)) <= 1e-12
                && (cfg.alpha > 1.0 || hermitian_defect(&(&r.entries * y)) <= 1e-10);
            Ok((
                v.eta_self_adjoint == direct,
                format!("eta-self-adjoint: {}", v.eta_self_adjoint),
            ))
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64) -> Params {
        Params {
            p: Prime::new(2).unwrap(),
            alpha,
            tol: 1e-10,
            seed: 7,
            config: None,
        }
    }

    #[test]
    fn every_suite_passes_at_alpha_one_and_a_half() {
        let mut report = RunReport::new("all", 2, 1.5, 1e-10, 7);
        run("all", &params(1.5), &mut report);
        assert!(report.passed, "{}", report.table());
    }

    #[test]
    fn low_alpha_reports_expected_errors() {
        let mut report = RunReport::new("green", 2, 0.4, 1e-10, 7);
        run("green", &params(0.4), &mut report);
        assert!(report.passed, "{}", report.table());
        assert_eq!(report.checks.len(), 1);
    }
}

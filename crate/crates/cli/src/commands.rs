use std::time::Instant;

use clap::Subcommand;
use dynr::{cdybe_residual, gauge_transform, lambda_self_bracket, rank_flags, zero_weight_residual};
use fedosov::{Caps, Fedosov};
use geom::{geometry_suite, FrameForm};
use liealg::relative_cohomology_dim;
use quantize::checks::{
    associativity_defect, check_gauge_element, conjugation_identities, cocycle_vs_associativity, equivalence_transform,
    ops_zero, qdybe_residual, quantization_check, series,
};
use quantize::diffop::series_is_zero;
use quantize::extract::{invariant_part, op_star, pairing_extract, strip_theta, theta_factor_residual, universal_star};
use quantize::{GJet, JetCtx, OpSeries, Pbw, UTensor};

use crate::model::{parse_weyl_curvature, FormEntry, Model};
use crate::report::{CapsInfo, Check, Report};
use crate::texpr::parse_element;
use crate::CliError;

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// CDYBE, zero weight, [Λ,Λ] = 0, rank and splittability.
    Check,
    /// Dimensions of the relative cohomology H^k(𝔤, 𝔥).
    Cohomology {
        #[arg(long)]
        degree: usize,
    },
    /// Connection and curvature suite on 𝔥* × G.
    Geometry,
    /// Full pipeline: Fedosov star product, extracted twist, all residuals.
    Quantize {
        #[arg(long, default_value_t = 2)]
        hbar: u32,
        /// Weyl curvature terms as JSON, one list of {A, B, coeff} per ℏ-order;
        /// overrides the model's.
        #[arg(long)]
        weyl_curvature: Option<String>,
    },
    /// The star product of two jet expressions in x1..xn and l1..ll.
    Star {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        hbar: u32,
    },
    /// The twist F(λ), cross-checked by the pairing solve.
    ExtractF {
        #[arg(long, default_value_t = 2)]
        hbar: u32,
    },
    /// Quantization axioms, QDYBE and associativity on sample jets.
    Residuals {
        #[arg(long, default_value_t = 2)]
        hbar: u32,
    },
    /// Gauge transform by the model's gauge element.
    Gauge,
    /// Equivalence transform of the twist by an element T of U𝔤[[ℏ]].
    Equivalence {
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 2)]
        hbar: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Cohomology { .. } => "cohomology",
            Command::Geometry => "geometry",
            Command::Quantize { .. } => "quantize",
            Command::Star { .. } => "star",
            Command::ExtractF { .. } => "extract-f",
            Command::Residuals { .. } => "residuals",
            Command::Gauge => "gauge",
            Command::Equivalence { .. } => "equivalence",
        }
    }
}

/// Everything downstream of the Fedosov construction.
struct Pipeline {
    caps: CapsInfo,
    geometry: Vec<Check>,
    fed: Fedosov,
    pbw: Pbw,
    jets: JetCtx,
    b: OpSeries,
    f: UTensor,
}

fn pipeline(model: &Model, order: u32, omegas: &[FrameForm]) -> Result<Pipeline, CliError> {
    let rep = geometry_suite(&model.rm, &model.base_point_or_default())?;
    let geometry = rep.checks.iter().map(|(n, ok)| Check::flag(format!("geometry: {n}"), *ok)).collect();
    let caps = Caps::for_order(order);
    let fed = Fedosov::from_report(&rep, omegas.to_vec(), caps)?;
    let pbw = Pbw::new(model.alg.clone());
    let d_jet = 2 * order + 2;
    let jets = JetCtx::new(model.alg.clone(), d_jet);
    let b = universal_star(&fed, &pbw, order)?;
    let f = invariant_part(&b, &pbw);
    let caps = CapsInfo { hbar_order: order, k_max: caps.k_max, n_max: caps.n_max, d_jet };
    Ok(Pipeline { caps, geometry, fed, pbw, jets, b, f })
}

fn labels(m: &Model) -> &[String] {
    m.alg.labels()
}

fn operator_checks(p: &Pipeline) -> Vec<Check> {
    vec![
        Check::residual("Fedosov curvature equation", p.fed.curvature_equation_residual().is_zero(), || {
            format!("{:?}", p.fed.curvature_equation_residual())
        }),
        Check::flag("pure-G products carry no λ-derivatives", strip_theta(&p.b, &p.pbw).iter().all(|x| x.is_left_invariant())),
        Check::residual("star operator = F(λ)Θ", ops_zero(&theta_factor_residual(&p.b, &p.f, &p.pbw)), || {
            format!("{:?}", theta_factor_residual(&p.b, &p.f, &p.pbw))
        }),
    ]
}

fn twist_checks(model: &Model, f: &UTensor, pbw: &Pbw) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let q = quantization_check(f, &model.rm, pbw);
    for (name, t) in q.named() {
        out.push(Check::residual(name, t.is_zero(), || t.render(labels(model))));
    }
    let qd = qdybe_residual(f, pbw)?;
    out.push(Check::residual("QDYBE", qd.is_zero(), || qd.render(labels(model))));
    Ok(out)
}

fn antisymmetric_part(f: &UTensor, model: &Model) -> String {
    let f1 = f.hbar_coeff(1);
    f1.sub(&f1.permute(&[1, 0])).truncate(0).render(labels(model))
}

/// Fixed λ-free and λ-dependent sample jets for the operator checks.
fn samples(jets: &JetCtx, l: usize) -> Result<Vec<GJet>, CliError> {
    let n = jets.dim();
    let x = |i: usize| format!("x{}", i % n + 1);
    let texts = [
        format!("{}*{} + 2*{}", x(1), x(2), x(0)),
        format!("{}^2 - {}", x(2), x(1)),
        format!("{}*{}*{} + 3", x(0), x(1), x(2)),
    ];
    let mut out = Vec::new();
    for t in &texts {
        out.push(jets.parse(t, l).map_err(|e| CliError::Expr { pos: e.position(), msg: e.to_string() })?);
    }
    Ok(out)
}

fn series_check(name: &str, s: &[GJet]) -> Check {
    Check::residual(name, series_is_zero(s) && s.iter().all(|x| x.prec() >= 0), || {
        s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" | ")
    })
}

pub fn run(cmd: &Command, model: &Model) -> Result<Report, CliError> {
    let start = Instant::now();
    let l = model.alg.cartan_dim();
    let mut caps = None;
    let mut checks = Vec::new();
    match cmd {
        Command::Check => {
            let c = cdybe_residual(&model.rm);
            checks.push(Check::residual("CDYBE", c.is_zero(), || c.to_string()));
            for (i, w) in zero_weight_residual(&model.rm).iter().enumerate() {
                checks.push(Check::residual(format!("zero weight h{}", i + 1), w.is_zero(), || w.to_string()));
            }
            let lam = lambda_self_bracket(&model.rm);
            checks.push(Check::residual("[Λ,Λ] = 0", lam.is_zero(), || format!("{lam:?}")));
            match rank_flags(&model.rm) {
                Ok(r) => {
                    checks.push(Check::info("rank", r.rank.to_string()));
                    checks.push(Check::info("nondegenerate", r.nondegenerate.to_string()));
                    checks.push(Check::info("splittable", r.splittable.to_string()));
                }
                Err(e) => checks.push(Check::info("rank", format!("unavailable: {e}"))),
            }
        }
        Command::Cohomology { degree } => {
            let (c, h) = relative_cohomology_dim(&model.alg, *degree)?;
            checks.push(Check::info(format!("dim C^{degree}"), c.to_string()));
            checks.push(Check::info(format!("dim H^{degree}"), h.to_string()));
        }
        Command::Geometry => {
            let rep = geometry_suite(&model.rm, &model.base_point_or_default())?;
            for (n, ok) in &rep.checks {
                checks.push(Check::flag(n.clone(), *ok));
            }
            checks.push(Check::info("nonzero connection coefficients", rep.connection.nonzero().len().to_string()));
            checks.push(Check::info("curvature vanishes", rep.curvature.is_zero().to_string()));
        }
        Command::Quantize { hbar, weyl_curvature } => {
            let omegas = match weyl_curvature {
                Some(text) => {
                    let orders: Vec<Vec<FormEntry>> = serde_json::from_str(text)
                        .map_err(|e| CliError::Schema { path: "--weyl-curvature".into(), msg: e.to_string() })?;
                    parse_weyl_curvature(&orders, l, model.alg.dim())?
                }
                None => model.omegas.clone(),
            };
            let p = pipeline(model, *hbar, &omegas)?;
            checks.extend(p.geometry.clone());
            checks.extend(operator_checks(&p));
            checks.extend(twist_checks(model, &p.f, &p.pbw)?);
            checks.push(Check::info("F1 - F1^21", antisymmetric_part(&p.f, model)));
            checks.push(Check::info("F", p.f.render(labels(model))));
            caps = Some(p.caps);
        }
        Command::Star { f, g, hbar } => {
            let p = pipeline(model, *hbar, &model.omegas)?;
            let parse = |t: &str| p.jets.parse(t, l).map_err(|e| CliError::Expr { pos: e.position(), msg: e.to_string() });
            let (fj, gj) = (parse(f)?, parse(g)?);
            for (k, term) in op_star(&p.jets, &p.b, &fj, &gj).iter().enumerate() {
                checks.push(Check::info(format!("ℏ^{k}"), format!("{term} (known to degree {})", term.prec())));
            }
            caps = Some(p.caps);
        }
        Command::ExtractF { hbar } => {
            let p = pipeline(model, *hbar, &model.omegas)?;
            checks.extend(operator_checks(&p));
            let d = p.f.terms().flat_map(|((_, ms), _)| ms.iter().map(|m| m.iter().sum::<u32>())).max().unwrap_or(0);
            let jets = JetCtx::new(model.alg.clone(), d + 2);
            let paired = pairing_extract(&jets, &p.pbw, d, *hbar, |a, b| Ok(op_star(&jets, &p.b, a, b)))?;
            checks.push(Check::residual("pairing solve agrees with operator route", paired == p.f, || {
                paired.sub(&p.f).render(labels(model))
            }));
            checks.push(Check::info("F1 - F1^21", antisymmetric_part(&p.f, model)));
            checks.push(Check::info("F", p.f.render(labels(model))));
            caps = Some(p.caps);
        }
        Command::Residuals { hbar } => {
            let p = pipeline(model, *hbar, &model.omegas)?;
            checks.extend(twist_checks(model, &p.f, &p.pbw)?);
            let js = samples(&p.jets, l)?;
            let lam = p.jets.parse("1/(l1+1)", l).ok();
            let mixed: Vec<GJet> = match &lam {
                Some(a) => js.iter().map(|j| j.mul_jet(a)).collect(),
                None => js.clone(),
            };
            let d = associativity_defect(&p.jets, &p.b, &series(&mixed[0]), &series(&mixed[1]), &series(&mixed[2]), *hbar);
            checks.push(series_check("associativity on sample jets", &d));
            let c = cocycle_vs_associativity(&p.jets, &p.pbw, &p.f, &p.b, [&js[0], &js[1], &js[2]]);
            checks.push(series_check("associativity defect = cocycle residual", &c.defect_minus_residual));
            caps = Some(p.caps);
        }
        Command::Gauge => {
            let g = model.gauge.as_ref().ok_or_else(|| CliError::Missing("the model has no gauge element".into()))?;
            let rg = gauge_transform(&model.rm, g)?;
            let c = cdybe_residual(&rg);
            checks.push(Check::residual("CDYBE of r_g", c.is_zero(), || c.to_string()));
            for (i, w) in zero_weight_residual(&rg).iter().enumerate() {
                checks.push(Check::residual(format!("zero weight of r_g, h{}", i + 1), w.is_zero(), || w.to_string()));
            }
            let before = rank_flags(&model.rm).ok().map(|r| r.rank);
            let after = rank_flags(&rg).ok().map(|r| r.rank);
            checks.push(Check::flag("rank preserved", before.is_some() && before == after));
            checks.push(Check::info("r_g", rg.r.to_string()));
        }
        Command::Equivalence { t, hbar } => {
            let p = pipeline(model, *hbar, &model.omegas)?;
            let t = parse_element(t, &p.pbw, *hbar)?;
            check_gauge_element(&t, &p.pbw)?;
            let e = equivalence_transform(&p.f, &t, &p.pbw)?;
            checks.extend(twist_checks(model, &e, &p.pbw)?);
            for (name, r) in conjugation_identities(&t, &p.pbw) {
                checks.push(Check::residual(name, ops_zero(&r), || format!("{r:?}")));
            }
            checks.push(Check::info("E", e.render(labels(model))));
            caps = Some(p.caps);
        }
    }
    Ok(Report {
        command: cmd.name().to_string(),
        model: model.name.clone(),
        caps,
        checks,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

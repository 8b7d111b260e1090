//! Finite-radius probe of the two growth-transfer implications on a plane
//! curve: sample the curve's fibers on circles, evaluate candidate
//! functions, and estimate the smallest index and constant making the
//! conclusion bound hold on the samples.
//!
//! The probe is a falsifier and explorer, never a prover: the implications
//! quantify over whole function classes and all radii, so every verdict
//! carries the caveat below and a trend flag instead of a truth value.

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{supporting_function_f64, ConvexBody};
use crate::error::{Error, Result};
use crate::parse::RegionSpec;
use crate::poly::{parse_polynomial, rat_to_f64, render_polynomial, Polynomial, Rat};
use crate::variety::multigcd;
use crate::variety::numeric::all_roots;
use crate::weights::WeightFunction;

/// Embedded in every verdict.
pub const PROBE_CAVEAT: &str = "finite-radius probe: a growing trend is evidence \
    against the principle at this scale, never a proof; a stable trend is never \
    a certificate";

/// Seed for the sampling angles when the caller does not pick one.
pub const DEFAULT_SAMPLE_SEED: u64 = 42;

/// Largest conclusion index the per-radius scan tries.
pub const BETA_MAX: u32 = 64;

/// Admissibility cap on the conclusion constant (additive for mean-value
/// candidates, multiplicative for modulus candidates).
pub const CONSTANT_CAP: f64 = 32.0;

const SAMPLE_CAP: usize = 20_000;
const RESIDUAL_TOL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-6;
const REL_TOL: f64 = 1e-9;
const PERTURB_ATTEMPTS: usize = 8;
const HYP2_ALPHA_MAX: u32 = 8;
const HYP2_C_GRID: [f64; 7] = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

/// One accepted curve point.
#[derive(Debug, Clone, Serialize)]
pub struct SamplePoint {
    pub zeta: [[f64; 2]; 2],
    pub radius: f64,
}

impl SamplePoint {
    pub fn coords(&self) -> [Complex64; 2] {
        [
            Complex64::new(self.zeta[0][0], self.zeta[0][1]),
            Complex64::new(self.zeta[1][0], self.zeta[1][1]),
        ]
    }
}

/// Curve points solved fiberwise over circles |ζ₁| = r.
#[derive(Debug, Clone)]
pub struct CurveSampler {
    /// Fiber-generating curve, after any ζ₁-only content was divided out.
    pub curve: Polynomial,
    pub removed_content: Option<Polynomial>,
    pub r_max: f64,
    pub radii: Vec<f64>,
    pub points: Vec<SamplePoint>,
    /// Roots discarded by the residual check.
    pub rejected: usize,
    pub notes: Vec<String>,
}

/// All ζ₂ roots of the curve's fiber over a fixed ζ₁.
pub fn fiber_points(curve: &Polynomial, zeta1: Complex64) -> Result<Vec<Complex64>> {
    if curve.n_vars() != 2 {
        return Err(Error::Input(format!(
            "fiber solve needs a curve in 2 variables, got {}",
            curve.n_vars()
        )));
    }
    let dy = curve.degree_in(1).ok_or_else(|| {
        Error::Input("fiber solve needs a nonzero curve".into())
    })?;
    let coeff_polys = slice_coefficients(curve, dy as usize);
    let point = [zeta1, Complex64::zero()];
    let coeffs: Vec<Complex64> = coeff_polys
        .iter()
        .map(|p| p.eval_complex(&point))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::Input(format!(
            "fiber over zeta1 = {zeta1} is identically zero; divide the shared \
             zeta1 factor out of the curve first"
        )));
    }
    Ok(all_roots(&coeffs))
}

fn slice_coefficients(curve: &Polynomial, dy: usize) -> Vec<Polynomial> {
    let mut coeff_polys = vec![Polynomial::zero(2); dy + 1];
    for (mono, coef) in curve.terms() {
        let exps = mono.exps();
        let b = exps[1] as usize;
        let stripped = crate::poly::Monomial::from_exps(vec![exps[0], 0]);
        coeff_polys[b].add_term(stripped, coef.clone());
    }
    coeff_polys
}

fn fiber_is_clean(roots: &[Complex64], coeffs_scale: f64, lead: Complex64) -> bool {
    if lead.norm() < 1e-9 * (1.0 + coeffs_scale) {
        return false;
    }
    let scale = 1.0 + roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if (a - b).norm() < CLUSTER_TOL * scale {
                return false;
            }
        }
    }
    true
}

/// Samples the curve on `radii` circles log-spaced from 1 to `r_max`, with
/// `angles` directions per circle, using the default angle seed.
pub fn sample_curve(
    curve: &Polynomial,
    r_max: f64,
    radii: usize,
    angles: usize,
) -> Result<CurveSampler> {
    sample_curve_seeded(curve, r_max, radii, angles, DEFAULT_SAMPLE_SEED)
}

/// As `sample_curve`, with the angle offset drawn from the given seed.
pub fn sample_curve_seeded(
    curve: &Polynomial,
    r_max: f64,
    radii: usize,
    angles: usize,
    seed: u64,
) -> Result<CurveSampler> {
    if curve.is_zero() {
        return Err(Error::Input("cannot sample the zero curve".into()));
    }
    if curve.n_vars() != 2 {
        return Err(Error::Input(format!(
            "curve sampling needs 2 variables, got {}",
            curve.n_vars()
        )));
    }
    if !r_max.is_finite() || r_max < 1.0 {
        return Err(Error::Input(format!(
            "largest radius must be a finite number of at least 1, got {r_max}"
        )));
    }
    if radii == 0 || angles == 0 {
        return Err(Error::Input("need at least one radius and one angle".into()));
    }
    let degree = curve.degree_in(1).unwrap_or(0).max(1) as usize;
    if radii * angles * degree > SAMPLE_CAP {
        return Err(Error::ResourceCap(format!(
            "{radii} radii x {angles} angles x fiber degree {degree} exceeds the \
             sample cap {SAMPLE_CAP}"
        )));
    }

    let mut notes = Vec::new();
    let mut working = curve.clone();
    let content = multigcd::content_in(&working, 1);
    let mut removed_content = None;
    if content.total_degree().unwrap_or(0) > 0 {
        if let Some(quotient) = multigcd::exact_div(&working, &content) {
            notes.push(format!(
                "divided out the zeta1-only factor {} shared by every fiber",
                render_polynomial(&content, None)
            ));
            removed_content = Some(content);
            working = quotient;
        }
    }
    if working.degree_in(1).unwrap_or(0) == 0 {
        return Err(Error::Input(
            "curve has no zeta2 dependence, so fibers over zeta1 are empty; \
             nothing to sample"
                .into(),
        ));
    }

    let radii_list: Vec<f64> = if radii == 1 {
        vec![r_max]
    } else {
        (0..radii)
            .map(|j| r_max.powf(j as f64 / (radii - 1) as f64))
            .collect()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset: f64 = rng.gen_range(0.0..1.0);
    let dy = working.degree_in(1).unwrap() as usize;
    let coeff_polys = slice_coefficients(&working, dy);

    let mut points = Vec::new();
    let mut rejected = 0usize;
    let mut stubborn_fibers = 0usize;
    for &r in &radii_list {
        for i in 0..angles {
            let base_theta = std::f64::consts::TAU * (i as f64 + offset) / angles as f64;
            let mut accepted: Option<(Complex64, Vec<Complex64>)> = None;
            for attempt in 0..=PERTURB_ATTEMPTS {
                let theta = base_theta
                    + std::f64::consts::TAU * 1e-4 * attempt as f64 * 1.618
                        / angles as f64;
                let w = Complex64::from_polar(r, theta);
                let point0 = [w, Complex64::zero()];
                let coeffs: Vec<Complex64> = coeff_polys
                    .iter()
                    .map(|p| p.eval_complex(&point0))
                    .collect::<Result<Vec<_>>>()?;
                let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if scale == 0.0 {
                    continue;
                }
                let roots = all_roots(&coeffs);
                if fiber_is_clean(&roots, scale, coeffs[dy]) {
                    accepted = Some((w, roots));
                    break;
                }
                if attempt == PERTURB_ATTEMPTS {
                    stubborn_fibers += 1;
                    accepted = Some((w, roots));
                }
            }
            let Some((w, roots)) = accepted else { continue };
            for y in roots {
                let zeta = [w, y];
                let value = working.eval_complex(&zeta)?.norm();
                let scale = working.eval_scale(&zeta)?.max(1.0);
                if value / scale < RESIDUAL_TOL {
                    points.push(SamplePoint {
                        zeta: [[w.re, w.im], [y.re, y.im]],
                        radius: r,
                    });
                } else {
                    rejected += 1;
                }
            }
        }
    }
    if stubborn_fibers > 0 {
        notes.push(format!(
            "{stubborn_fibers} fibers kept a near-multiple root after \
             {PERTURB_ATTEMPTS} angle perturbations"
        ));
    }
    if points.is_empty() {
        return Err(Error::Input(
            "no fiber point passed the residual check; the curve may be too \
             ill-conditioned at these radii"
                .into(),
        ));
    }
    Ok(CurveSampler {
        curve: working,
        removed_content,
        r_max,
        radii: radii_list,
        points,
        rejected,
        notes,
    })
}

/// A candidate growth function evaluated on curve samples.
#[derive(Debug, Clone)]
pub enum CandidateFunction {
    /// u = log |g(ζ)|.
    LogAbsPolynomial { g: Polynomial },
    /// u = Im Σ c_j ζ_j with real rational c.
    LinearImaginary { c: Vec<Rat> },
    /// Pointwise maximum of the parts.
    Max { parts: Vec<CandidateFunction> },
}

impl CandidateFunction {
    pub fn eval(&self, zeta: &[Complex64; 2]) -> f64 {
        match self {
            CandidateFunction::LogAbsPolynomial { g } => g
                .eval_complex(zeta)
                .map(|v| v.norm().ln())
                .unwrap_or(f64::NEG_INFINITY),
            CandidateFunction::LinearImaginary { c } => c
                .iter()
                .zip(zeta)
                .map(|(cj, zj)| rat_to_f64(cj) * zj.im)
                .sum(),
            CandidateFunction::Max { parts } => parts
                .iter()
                .map(|p| p.eval(zeta))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CandidateFunction::LogAbsPolynomial { g } => {
                format!("log|{}|", render_polynomial(g, None))
            }
            CandidateFunction::LinearImaginary { c } => {
                let mut form = Polynomial::zero(c.len());
                for (j, cj) in c.iter().enumerate() {
                    if !cj.is_zero() {
                        form = form.add(&Polynomial::var(c.len(), j).scale(cj));
                    }
                }
                format!("Im({})", render_polynomial(&form, None))
            }
            CandidateFunction::Max { parts } => {
                let inner: Vec<String> = parts.iter().map(CandidateFunction::name).collect();
                format!("max({})", inner.join(", "))
            }
        }
    }

    fn is_log_abs(&self) -> bool {
        matches!(self, CandidateFunction::LogAbsPolynomial { .. })
    }
}

/// The built-in candidate menu: log-moduli of a small polynomial list,
/// lattice linear forms in the imaginary parts, and two maxima.
pub fn default_candidates() -> Vec<CandidateFunction> {
    let vars: Vec<String> = vec!["z1".into(), "z2".into()];
    let poly = |src: &str| parse_polynomial(src, &vars).expect("builtin candidate parses");
    let mut out = Vec::new();
    for src in [
        "z1",
        "z2",
        "z1 + z2",
        "z1*z2",
        "z1^2 + z2^2",
        "z1^3 - z2^2",
    ] {
        out.push(CandidateFunction::LogAbsPolynomial { g: poly(src) });
    }
    let rat = |n: i64| Rat::from_integer(n.into());
    for (a, b) in [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (1, -1)] {
        out.push(CandidateFunction::LinearImaginary { c: vec![rat(a), rat(b)] });
    }
    out.push(CandidateFunction::Max {
        parts: vec![
            CandidateFunction::LinearImaginary { c: vec![rat(1), rat(0)] },
            CandidateFunction::LinearImaginary { c: vec![rat(0), rat(1)] },
        ],
    });
    out.push(CandidateFunction::Max {
        parts: vec![
            CandidateFunction::LogAbsPolynomial { g: poly("z1") },
            CandidateFunction::LinearImaginary { c: vec![rat(1), rat(0)] },
        ],
    });
    out
}

/// How the conclusion constant combines with the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    /// Mean-value candidates: u ≤ H + βω + C.
    Psh,
    /// Modulus candidates: sup u−ψ¹_β ≤ log C + sup u−ψ²_α.
    Holomorphic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Stable,
    Growing,
    Vacuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusRow {
    pub radius: f64,
    /// Minimal index whose constant stays within the cap, if any.
    pub beta: Option<u32>,
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoughBound {
    pub alpha_u: u32,
    pub c_u: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateVerdict {
    pub name: String,
    /// Bound by the K² budget at the given index.
    pub hypothesis_growth: bool,
    /// Best small K¹ rough bound found by grid search, when the mode uses one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_rough: Option<RoughBound>,
    pub admissible: bool,
    pub rows: Vec<RadiusRow>,
    pub beta_final: Option<u32>,
    pub c_final: Option<f64>,
    pub trend: Trend,
}

#[derive(Debug, Clone, Serialize)]
pub struct PLVerdict {
    pub caveat: &'static str,
    pub mode: ProbeMode,
    pub alpha: u32,
    pub r_max: f64,
    pub samples: usize,
    /// Fraction of candidates passing the hypotheses.
    pub hypothesis_pass_rate: f64,
    pub beta_empirical: Option<u32>,
    pub c_empirical: Option<f64>,
    pub trend: Trend,
    pub candidates: Vec<CandidateVerdict>,
    pub notes: Vec<String>,
}

struct SampleTables {
    /// u-independent data per sample: ω, H over K¹_β for β = 1..=BETA_MAX,
    /// and H plus index-weighted ω over K²_α.
    omega: Vec<f64>,
    h1: Vec<Vec<f64>>,
    bound2: Vec<f64>,
    radius: Vec<f64>,
}

fn build_tables(
    sampler: &CurveSampler,
    k1: &RegionSpec,
    k2: &RegionSpec,
    weight: &WeightFunction,
    alpha: u32,
) -> Result<SampleTables> {
    if k1.dim() != 2 || k2.dim() != 2 {
        return Err(Error::Input(format!(
            "regions must be 2-dimensional to match the curve, got {} and {}",
            k1.dim(),
            k2.dim()
        )));
    }
    let bodies1: Vec<ConvexBody> = (1..=BETA_MAX)
        .map(|b| k1.body_at(b))
        .collect::<Result<Vec<_>>>()?;
    let body2 = k2.body_at(alpha)?;

    let n = sampler.points.len();
    let mut omega = Vec::with_capacity(n);
    let mut h1 = Vec::with_capacity(n);
    let mut bound2 = Vec::with_capacity(n);
    let mut radius = Vec::with_capacity(n);
    for point in &sampler.points {
        let zeta = point.coords();
        let im = [zeta[0].im, zeta[1].im];
        let w = weight.eval(zeta[0].norm() + zeta[1].norm());
        let hs: Vec<f64> = bodies1
            .iter()
            .map(|b| supporting_function_f64(b, &im))
            .collect::<Result<Vec<_>>>()?;
        let h2 = supporting_function_f64(&body2, &im)?;
        omega.push(w);
        h1.push(hs);
        bound2.push(h2 + f64::from(alpha) * w);
        radius.push(point.radius);
    }
    Ok(SampleTables { omega, h1, bound2, radius })
}

fn leq_tol(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + REL_TOL * (1.0 + rhs.abs())
}

fn decade_beta_max(rows: &[RadiusRow], lo: f64, hi: f64) -> Option<u32> {
    rows.iter()
        .filter(|r| r.radius > lo && r.radius <= hi * (1.0 + 1e-12))
        .map(|r| r.beta.unwrap_or(BETA_MAX + 1))
        .max()
}

fn row_trend(rows: &[RadiusRow], r_max: f64) -> Trend {
    let top = decade_beta_max(rows, r_max / 10.0, r_max);
    let prev = decade_beta_max(rows, r_max / 100.0, r_max / 10.0);
    match (prev, top) {
        (Some(p), Some(t)) if t > p => Trend::Growing,
        _ => Trend::Stable,
    }
}

fn probe_common(
    sampler: &CurveSampler,
    k1: &RegionSpec,
    k2: &RegionSpec,
    weight: &WeightFunction,
    alpha: u32,
    candidates: &[CandidateFunction],
    mode: ProbeMode,
) -> Result<PLVerdict> {
    if candidates.is_empty() {
        return Err(Error::Input("the probe needs at least one candidate".into()));
    }
    if alpha == 0 || alpha > BETA_MAX {
        return Err(Error::Input(format!(
            "index alpha must be between 1 and {BETA_MAX}, got {alpha}"
        )));
    }
    if mode == ProbeMode::Holomorphic {
        if let Some(bad) = candidates.iter().find(|c| !c.is_log_abs()) {
            return Err(Error::Input(format!(
                "the modulus probe takes log-modulus candidates only; \"{}\" is \
                 not one",
                bad.name()
            )));
        }
    }

    let tables = build_tables(sampler, k1, k2, weight, alpha)?;
    let n = sampler.points.len();
    let identical_regions = k1 == k2;
    let mut notes = sampler.notes.clone();

    let mut verdicts = Vec::with_capacity(candidates.len());
    for candidate in candidates {
        let u: Vec<f64> = sampler
            .points
            .iter()
            .map(|p| candidate.eval(&p.coords()))
            .collect();

        let hypothesis_growth =
            (0..n).all(|s| u[s] == f64::NEG_INFINITY || leq_tol(u[s], tables.bound2[s]));

        let hypothesis_rough = if mode == ProbeMode::Psh {
            let mut found = None;
            'grid: for alpha_u in 1..=HYP2_ALPHA_MAX {
                for c_u in HYP2_C_GRID {
                    let ok = (0..n).all(|s| {
                        let bound = tables.h1[s][alpha_u as usize - 1]
                            + f64::from(alpha_u) * tables.omega[s]
                            + c_u;
                        u[s] == f64::NEG_INFINITY || leq_tol(u[s], bound)
                    });
                    if ok {
                        found = Some(RoughBound { alpha_u, c_u });
                        break 'grid;
                    }
                }
            }
            found
        } else {
            None
        };

        let admissible = match mode {
            ProbeMode::Psh => hypothesis_growth && hypothesis_rough.is_some(),
            ProbeMode::Holomorphic => true,
        };

        let (rows, trend) = if admissible {
            let deficit = |s: usize, b_idx: usize| {
                u[s] - (tables.h1[s][b_idx] + (b_idx as f64 + 1.0) * tables.omega[s])
            };
            let mut run_d1 = vec![f64::NEG_INFINITY; BETA_MAX as usize];
            let mut run_rhs = f64::NEG_INFINITY;
            let mut rows = Vec::with_capacity(sampler.radii.len());
            for &r in &sampler.radii {
                for s in (0..n).filter(|&s| tables.radius[s] == r) {
                    for (b_idx, slot) in run_d1.iter_mut().enumerate() {
                        *slot = slot.max(deficit(s, b_idx));
                    }
                    run_rhs = run_rhs.max(u[s] - tables.bound2[s]);
                }
                let mut best: Option<(u32, f64)> = None;
                for (b_idx, &d) in run_d1.iter().enumerate() {
                    let c = match mode {
                        ProbeMode::Psh => d.max(0.0),
                        ProbeMode::Holomorphic => {
                            if d == f64::NEG_INFINITY {
                                0.0
                            } else if run_rhs == f64::NEG_INFINITY {
                                f64::INFINITY
                            } else {
                                (d - run_rhs).exp()
                            }
                        }
                    };
                    if c <= CONSTANT_CAP + REL_TOL {
                        best = Some((b_idx as u32 + 1, c));
                        break;
                    }
                }
                rows.push(RadiusRow {
                    radius: r,
                    beta: best.map(|(b, _)| b),
                    c: best.map(|(_, c)| c),
                });
            }
            let trend = row_trend(&rows, sampler.r_max);
            (rows, trend)
        } else {
            (Vec::new(), Trend::Vacuous)
        };

        let beta_final = rows.last().and_then(|r| r.beta);
        let c_final = rows.last().and_then(|r| r.c);
        verdicts.push(CandidateVerdict {
            name: candidate.name(),
            hypothesis_growth,
            hypothesis_rough,
            admissible,
            rows,
            beta_final,
            c_final,
            trend,
        });
    }

    let admissible: Vec<&CandidateVerdict> = verdicts.iter().filter(|v| v.admissible).collect();
    let pass_rate = admissible.len() as f64 / verdicts.len() as f64;

    let (beta_empirical, c_empirical, trend) = if admissible.is_empty() {
        notes.push("vacuous at this scale: no candidate satisfies the hypotheses".into());
        (None, None, Trend::Vacuous)
    } else if identical_regions {
        notes.push(format!(
            "identical region specs: the conclusion at beta = {alpha} restates \
             the growth hypothesis, so beta = alpha with the neutral constant"
        ));
        let neutral = match mode {
            ProbeMode::Psh => 0.0,
            ProbeMode::Holomorphic => 1.0,
        };
        (Some(alpha), Some(neutral), Trend::Stable)
    } else {
        let betas: Vec<Option<u32>> = admissible.iter().map(|v| v.beta_final).collect();
        let beta = if betas.iter().any(Option::is_none) {
            None
        } else {
            betas.iter().map(|b| b.unwrap()).max()
        };
        let c = admissible
            .iter()
            .filter_map(|v| v.c_final)
            .fold(f64::NEG_INFINITY, f64::max);
        let c = (c != f64::NEG_INFINITY).then_some(c);
        let trend = if beta.is_none()
            || admissible.iter().any(|v| v.trend == Trend::Growing)
        {
            Trend::Growing
        } else {
            Trend::Stable
        };
        (beta, c, trend)
    };

    Ok(PLVerdict {
        caveat: PROBE_CAVEAT,
        mode,
        alpha,
        r_max: sampler.r_max,
        samples: n,
        hypothesis_pass_rate: pass_rate,
        beta_empirical,
        c_empirical,
        trend,
        candidates: verdicts,
        notes,
    })
}

/// Mean-value probe: candidates must pass both hypotheses, then the scan
/// looks for the smallest per-radius (β, C) with u ≤ H_{K¹_β} + βω + C.
pub fn probe(
    sampler: &CurveSampler,
    k1: &RegionSpec,
    k2: &RegionSpec,
    weight: &WeightFunction,
    alpha: u32,
    candidates: &[CandidateFunction],
) -> Result<PLVerdict> {
    probe_common(sampler, k1, k2, weight, alpha, candidates, ProbeMode::Psh)
}

/// Modulus probe: log-modulus candidates only, no rough-bound hypothesis;
/// the scan compares sup u−ψ¹_β against sup u−ψ²_α multiplicatively.
pub fn uniqueness_probe(
    sampler: &CurveSampler,
    k1: &RegionSpec,
    k2: &RegionSpec,
    weight: &WeightFunction,
    alpha: u32,
    candidates: &[CandidateFunction],
) -> Result<PLVerdict> {
    probe_common(
        sampler,
        k1,
        k2,
        weight,
        alpha,
        candidates,
        ProbeMode::Holomorphic,
    )
}

/// Recomputes every reported (β, C) against the stored samples and returns
/// whether all of them satisfy their conclusion inequality.
pub fn replay_check(
    sampler: &CurveSampler,
    k1: &RegionSpec,
    k2: &RegionSpec,
    weight: &WeightFunction,
    candidates: &[CandidateFunction],
    verdict: &PLVerdict,
) -> Result<bool> {
    let tables = build_tables(sampler, k1, k2, weight, verdict.alpha)?;
    let by_name: std::collections::BTreeMap<String, &CandidateFunction> = candidates
        .iter()
        .map(|c| (c.name(), c))
        .collect();
    for cv in verdict.candidates.iter().filter(|v| v.admissible) {
        let Some(candidate) = by_name.get(&cv.name) else {
            return Err(Error::Input(format!(
                "verdict names candidate \"{}\" that was not supplied",
                cv.name
            )));
        };
        let u: Vec<f64> = sampler
            .points
            .iter()
            .map(|p| candidate.eval(&p.coords()))
            .collect();
        for row in &cv.rows {
            let (Some(beta), Some(c)) = (row.beta, row.c) else { continue };
            let b_idx = beta as usize - 1;
            let within: Vec<usize> = (0..u.len())
                .filter(|&s| tables.radius[s] <= row.radius * (1.0 + 1e-12))
                .collect();
            match verdict.mode {
                ProbeMode::Psh => {
                    for &s in &within {
                        let bound =
                            tables.h1[s][b_idx] + f64::from(beta) * tables.omega[s] + c;
                        if u[s] != f64::NEG_INFINITY && !leq_tol(u[s], bound) {
                            return Ok(false);
                        }
                    }
                }
                ProbeMode::Holomorphic => {
                    let lhs = within
                        .iter()
                        .map(|&s| {
                            u[s] - tables.h1[s][b_idx] - f64::from(beta) * tables.omega[s]
                        })
                        .fold(f64::NEG_INFINITY, f64::max);
                    let rhs = within
                        .iter()
                        .map(|&s| u[s] - tables.bound2[s])
                        .fold(f64::NEG_INFINITY, f64::max);
                    if lhs != f64::NEG_INFINITY && !leq_tol(lhs, c.max(1e-300).ln() + rhs) {
                        return Ok(false);
                    }
                }
            }
        }
        if let (Some(beta), Some(c)) = (
            verdict.beta_empirical,
            verdict.c_empirical,
        ) {
            let b_idx = beta as usize - 1;
            match verdict.mode {
                ProbeMode::Psh => {
                    for s in 0..u.len() {
                        let bound =
                            tables.h1[s][b_idx] + f64::from(beta) * tables.omega[s] + c;
                        if u[s] != f64::NEG_INFINITY && !leq_tol(u[s], bound) {
                            return Ok(false);
                        }
                    }
                }
                ProbeMode::Holomorphic => {
                    let lhs = (0..u.len())
                        .map(|s| u[s] - tables.h1[s][b_idx] - f64::from(beta) * tables.omega[s])
                        .fold(f64::NEG_INFINITY, f64::max);
                    let rhs = (0..u.len())
                        .map(|s| u[s] - tables.bound2[s])
                        .fold(f64::NEG_INFINITY, f64::max);
                    if lhs != f64::NEG_INFINITY && !leq_tol(lhs, c.max(1e-300).ln() + rhs) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{RegionKind, RegionSpec};
    use crate::weights::WeightSpec;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn poly(src: &str) -> Polynomial {
        let vars: Vec<String> = vec!["z1".into(), "z2".into()];
        parse_polynomial(src, &vars).unwrap()
    }

    fn box_region(half: i64) -> RegionSpec {
        RegionSpec::from_kind(
            RegionKind::Box {
                lower: vec![Some(rat(-half)), Some(rat(-half))],
                upper: vec![Some(rat(half)), Some(rat(half))],
            },
            Vec::new(),
        )
        .unwrap()
    }

    fn gevrey_half() -> WeightFunction {
        WeightFunction::new(WeightSpec::Gevrey {
            alpha: Rat::new(1.into(), 2.into()),
        })
        .unwrap()
    }

    #[test]
    fn line_fiber_solves_explicitly() {
        let roots = fiber_points(&poly("z2 - z1"), Complex64::new(10.0, 0.0)).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - Complex64::new(10.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn cusp_fiber_has_symmetric_roots() {
        let mut roots = fiber_points(&poly("z2^2 - z1^3"), Complex64::new(1.0, 0.0)).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!((roots[1] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn hyperbola_fiber_at_minus_hundred() {
        let roots = fiber_points(&poly("z1*z2 - 1"), Complex64::new(-100.0, 0.0)).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - Complex64::new(-0.01, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sampler_points_satisfy_the_residual_invariant() {
        let sampler = sample_curve(&poly("z2^2 - z1^3"), 100.0, 5, 8).unwrap();
        assert_eq!(sampler.radii.len(), 5);
        assert!(!sampler.points.is_empty());
        for point in &sampler.points {
            let zeta = point.coords();
            let value = sampler.curve.eval_complex(&zeta).unwrap().norm();
            let scale = sampler.curve.eval_scale(&zeta).unwrap().max(1.0);
            assert!(value / scale < 1e-8);
        }
    }

    #[test]
    fn sampler_divides_out_vertical_lines() {
        let sampler = sample_curve(&poly("z1*z2 - z1"), 10.0, 3, 4).unwrap();
        assert!(sampler.removed_content.is_some());
        assert!(sampler.notes[0].contains("z1"));
        for point in &sampler.points {
            let zeta = point.coords();
            assert!((zeta[1] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn sampler_rejects_curves_without_fibers() {
        let err = sample_curve(&poly("z1"), 10.0, 3, 4).unwrap_err();
        assert!(err.to_string().contains("no zeta2 dependence"), "{err}");
        let err = sample_curve(&poly("0"), 10.0, 3, 4).unwrap_err();
        assert!(matches!(err, Error::Input(_)), "{err}");
    }

    #[test]
    fn line_variety_linear_candidate_is_stable_at_beta_one() {
        let sampler = sample_curve(&poly("z2"), 1e6, 25, 16).unwrap();
        let candidates = vec![CandidateFunction::LinearImaginary {
            c: vec![rat(1), rat(0)],
        }];
        let verdict = probe(
            &sampler,
            &box_region(1),
            &box_region(2),
            &gevrey_half(),
            1,
            &candidates,
        )
        .unwrap();
        assert_eq!(verdict.trend, Trend::Stable);
        assert_eq!(verdict.beta_empirical, Some(1));
        assert!(verdict.c_empirical.unwrap() < 1e-9);
        let cv = &verdict.candidates[0];
        assert!(cv.admissible);
        assert!(cv.rows.iter().all(|r| r.beta == Some(1)));
        assert_eq!(verdict.caveat, PROBE_CAVEAT);
    }

    #[test]
    fn identical_exhaustions_return_alpha_with_zero_constant() {
        let sampler = sample_curve(&poly("z2^2 - z1^3"), 1e4, 12, 8).unwrap();
        let verdict = probe(
            &sampler,
            &box_region(2),
            &box_region(2),
            &gevrey_half(),
            3,
            &default_candidates(),
        )
        .unwrap();
        assert!(verdict.hypothesis_pass_rate > 0.0);
        assert_eq!(verdict.beta_empirical, Some(3));
        assert_eq!(verdict.c_empirical, Some(0.0));
        assert_eq!(verdict.trend, Trend::Stable);
        assert!(verdict.notes.iter().any(|n| n.contains("identical region")));
    }

    #[test]
    fn impossible_candidates_make_the_verdict_vacuous() {
        let sampler = sample_curve(&poly("z2"), 1e4, 10, 8).unwrap();
        let candidates = vec![CandidateFunction::LinearImaginary {
            c: vec![rat(1_000_000), rat(0)],
        }];
        let verdict = probe(
            &sampler,
            &box_region(1),
            &box_region(2),
            &gevrey_half(),
            1,
            &candidates,
        )
        .unwrap();
        assert_eq!(verdict.trend, Trend::Vacuous);
        assert_eq!(verdict.beta_empirical, None);
        assert_eq!(verdict.hypothesis_pass_rate, 0.0);
        assert!(verdict.notes.iter().any(|n| n.contains("vacuous")));
    }

    #[test]
    fn enlarging_the_conclusion_region_never_raises_beta() {
        let sampler = sample_curve(&poly("z2^2 - z1^3"), 1e4, 12, 8).unwrap();
        let weight = gevrey_half();
        let candidates = default_candidates();
        let small = probe(
            &sampler,
            &box_region(1),
            &box_region(2),
            &weight,
            2,
            &candidates,
        )
        .unwrap();
        let large = probe(
            &sampler,
            &box_region(3),
            &box_region(2),
            &weight,
            2,
            &candidates,
        )
        .unwrap();
        let (Some(b_small), Some(b_large)) = (small.beta_empirical, large.beta_empirical)
        else {
            panic!("both probes should find a finite index");
        };
        assert!(b_large <= b_small, "{b_large} > {b_small}");
    }

    #[test]
    fn replay_confirms_every_reported_pair() {
        let sampler = sample_curve(&poly("z2^2 - z1^3"), 1e4, 12, 8).unwrap();
        let weight = gevrey_half();
        let candidates = default_candidates();
        let k1 = box_region(1);
        let k2 = box_region(2);
        let verdict = probe(&sampler, &k1, &k2, &weight, 2, &candidates).unwrap();
        assert!(replay_check(&sampler, &k1, &k2, &weight, &candidates, &verdict).unwrap());

        let holo: Vec<CandidateFunction> = candidates
            .iter()
            .filter(|c| c.is_log_abs())
            .cloned()
            .collect();
        let verdict =
            uniqueness_probe(&sampler, &k1, &k2, &weight, 2, &holo).unwrap();
        assert!(replay_check(&sampler, &k1, &k2, &weight, &holo, &verdict).unwrap());
    }

    #[test]
    fn uniqueness_with_identical_regions_gives_unit_constant() {
        let sampler = sample_curve(&poly("z2"), 1e4, 10, 8).unwrap();
        let candidates = vec![CandidateFunction::LogAbsPolynomial { g: poly("1 + z1") }];
        let verdict = uniqueness_probe(
            &sampler,
            &box_region(2),
            &box_region(2),
            &gevrey_half(),
            4,
            &candidates,
        )
        .unwrap();
        assert_eq!(verdict.beta_empirical, Some(4));
        assert_eq!(verdict.c_empirical, Some(1.0));
        assert_eq!(verdict.trend, Trend::Stable);
    }

    #[test]
    fn uniqueness_rejects_non_modulus_candidates() {
        let sampler = sample_curve(&poly("z2"), 1e2, 4, 4).unwrap();
        let err = uniqueness_probe(
            &sampler,
            &box_region(1),
            &box_region(2),
            &gevrey_half(),
            1,
            &[CandidateFunction::LinearImaginary { c: vec![rat(1), rat(0)] }],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Input(_)), "{err}");
    }

    #[test]
    fn constant_modulus_candidate_needs_only_the_first_index() {
        let sampler = sample_curve(&poly("z2"), 1e4, 10, 8).unwrap();
        let candidates = vec![CandidateFunction::LogAbsPolynomial { g: poly("1") }];
        let verdict = uniqueness_probe(
            &sampler,
            &box_region(1),
            &box_region(2),
            &gevrey_half(),
            2,
            &candidates,
        )
        .unwrap();
        assert_eq!(verdict.candidates[0].beta_final, Some(1));
        assert!(verdict.c_empirical.unwrap().is_finite());
    }

    #[test]
    fn modulus_growth_in_the_candidate_raises_the_index() {
        let sampler = sample_curve(&poly("z2"), 1e4, 25, 8).unwrap();
        let weight = gevrey_half();
        let k1 = box_region(1);
        let k2 = box_region(2);
        let low = uniqueness_probe(
            &sampler,
            &k1,
            &k2,
            &weight,
            12,
            &[CandidateFunction::LogAbsPolynomial { g: poly("z1") }],
        )
        .unwrap();
        let high = uniqueness_probe(
            &sampler,
            &k1,
            &k2,
            &weight,
            12,
            &[CandidateFunction::LogAbsPolynomial { g: poly("z1^6") }],
        )
        .unwrap();
        let b_low = low.candidates[0].beta_final.unwrap();
        let b_high = high.candidates[0].beta_final.unwrap();
        assert!(b_high > b_low, "{b_high} <= {b_low}");
    }

    #[test]
    fn verdict_serializes_with_the_caveat() {
        let sampler = sample_curve(&poly("z2"), 1e2, 4, 4).unwrap();
        let verdict = probe(
            &sampler,
            &box_region(1),
            &box_region(2),
            &gevrey_half(),
            1,
            &default_candidates(),
        )
        .unwrap();
        let json = serde_json::to_value(&verdict).unwrap();
        assert_eq!(
            json["caveat"].as_str().unwrap(),
            PROBE_CAVEAT
        );
        assert!(json["candidates"].as_array().unwrap().len() == 14);
        assert_eq!(json["mode"], "psh");
    }
}

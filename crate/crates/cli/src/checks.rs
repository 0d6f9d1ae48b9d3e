//! The analyses behind the subcommands, each producing findings and files.

use std::f64::consts::PI;

use chebdyn::chebfam::{
    attractors, build_family_map, g_components, h_components, q_parametrization,
    verify_markov_property, verify_q_pointwise_fixed, verify_rho_functional_equation,
    FamilyParameter,
};
use chebdyn::dyn1d::{
    chordal, composed_boundary_map, hyperbolicity_certificate, induced_boundary_map, ExtC,
    FixedType, RatMap1D,
};
use chebdyn::ergodic::{
    cloud_csv, entropy_lower_bound, eta_mass_on_u, fate_survey, itinerary, line_chart, lyapunov,
    realize_word, sample_mu, sample_nu_with, default_anchors, EtaMethod, Fate, FateConfig,
    ItineraryWord, LyapunovOutcome, NuConfig, OrbitRecord, LYAPUNOV_CSV_HEADER,
};
use chebdyn::exactpoly::{rat, strip_common_factor, HomPoly3, UniPoly};
use chebdyn::planemap::{PlaneMap, MATCH_TOL};
use chebdyn::projgeom::{AdaptedChart, C64};
use chebdyn::render::{
    render_basins, render_julia_1d, render_partition, GridSpec, ImageGrid, Palette,
};

use crate::report::{Finding, Outcome};
use crate::CliError;

/// Standard errors an exponent must clear to count as signed.
pub const Z_THRESHOLD: f64 = 5.0;

fn list<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Exact degrees `d(f^n)`, checked against `expected` when given.
pub fn degrees(
    map: &PlaneMap,
    depth: u32,
    max_degree: u64,
    expected: Option<&[u64]>,
) -> Result<Outcome, CliError> {
    let seq = map.degree_sequence(depth, max_degree)?;
    let got: Vec<u64> = seq.entries.iter().map(|e| e.1).collect();
    let mut out = Outcome::default();
    for (n, d) in &seq.entries {
        out.say(format!("d^{n}={d}"));
    }
    out.say(format!("lambda1_estimate={}", seq.lambda1_estimate));
    out.check(Finding::new(
        format!("{}_degrees_submultiplicative", map.name()),
        "d(f^(m+n)) <= d(f^m) d(f^n)",
        list(&got),
        "exact",
        seq.is_submultiplicative(),
    ));
    if let Some(want) = expected {
        out.check(Finding::new(
            format!("{}_degree_sequence", map.name()),
            list(want),
            list(&got),
            "exact",
            got == want,
        ));
    }
    out.file("degrees.csv", seq.to_csv());
    Ok(out)
}

/// `g∘h` composed exactly: no common factor, degree 4.
pub fn g_of_h() -> Result<Outcome, CliError> {
    let h = h_components();
    let comp = g_components()
        .iter()
        .map(|c| c.compose(&h))
        .collect::<Result<Vec<_>, _>>()?;
    let (reduced, common) = strip_common_factor(&comp[0], &comp[1], &comp[2])?;
    let degs: Vec<u32> = reduced.iter().map(HomPoly3::degree).collect();
    let mut out = Outcome::default();
    out.say(format!("d(g∘h)={}", degs[0]));
    out.check(Finding::new(
        "g_of_h_degree",
        "4 4 4 with trivial common factor",
        format!("{} common_factor_degree={}", list(&degs), common.degree()),
        "exact",
        degs == [4, 4, 4] && common == HomPoly3::one(),
    ));
    Ok(out)
}

pub fn topdeg(map: &PlaneMap, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    let rep = map.topological_degree(trials, seed)?;
    let mut out = Outcome::default();
    out.say(format!("topological_degree={}", rep.estimate));
    out.say(format!("exact_branches={}", rep.exact));
    out.say(format!("max_residual={:e}", rep.max_residual));
    let mut csv = String::from("count,targets\n");
    for (c, n) in &rep.histogram {
        csv.push_str(&format!("{c},{n}\n"));
    }
    out.file("topdeg.csv", csv);
    let unanimous = rep.histogram.len() == 1;
    if rep.exact {
        out.check(Finding::new(
            format!("{}_topological_degree", map.name()),
            format!("{} preimages at all {trials} targets", map.degree()),
            format!("histogram {:?}", rep.histogram),
            "unanimous",
            unanimous && rep.estimate == map.degree() as usize,
        ));
    } else {
        out.check(Finding::note(
            format!("{}_topological_degree_lower_bound", map.name()),
            rep.estimate.to_string(),
        ));
    }
    Ok(out)
}

/// With `expect_stable = false` the check passes when the first violation
/// occurs at `expected_step`.
pub fn stability(
    map: &PlaneMap,
    depth: usize,
    expect_stable: bool,
    expected_step: usize,
) -> Result<Outcome, CliError> {
    let rep = map.check_stability(depth)?;
    let mut out = Outcome::default();
    out.say(format!("stable_to_depth={}", rep.stable_to_depth));
    let mut csv = String::from("curve,name,step,distance\n");
    for v in &rep.violations {
        out.say(format!(
            "violation curve={} step={} distance={:e}",
            v.curve_name, v.step, v.distance
        ));
        csv.push_str(&format!("{},{},{},{:e}\n", v.curve, v.curve_name, v.step, v.distance));
    }
    out.file("stability.csv", rep.to_csv());
    out.file("violations.csv", csv);
    let first = rep.violations.iter().map(|v| v.step).min();
    let exact = rep.violations.iter().all(|v| v.distance <= MATCH_TOL);
    if expect_stable {
        out.check(Finding::new(
            format!("{}_algebraically_stable", map.name()),
            format!("no exceptional orbit meets the indeterminacy set by step {depth}"),
            match first {
                Some(s) => format!("violation at step {s}"),
                None => format!("stable_to_depth={}", rep.stable_to_depth),
            },
            format!("fs<={MATCH_TOL:e}"),
            rep.is_stable() && rep.stable_to_depth == depth,
        ));
    } else {
        out.check(Finding::new(
            format!("{}_not_algebraically_stable", map.name()),
            format!("first violation at step {expected_step}"),
            match first {
                Some(s) => format!("first violation at step {s}"),
                None => "no violation".into(),
            },
            format!("fs<={MATCH_TOL:e}"),
            first == Some(expected_step) && exact,
        ));
    }
    Ok(out)
}

/// The curve `T_t(Q)`, the proper transform of `A_3` under `f_t`.
pub fn exceptional_orbit_curve(t: &FamilyParameter) -> [UniPoly; 3] {
    let q = q_parametrization();
    let k = UniPoly::constant((rat(1, 1) - t.exact()) * rat(1, 3));
    let s = &(&q[0] + &q[1]) + &q[2];
    let shift = &s * &k;
    [&q[0] - &shift, &q[1] - &shift, &q[2] - &shift]
}

/// Plane degrees of `f_t^n(a_3)` for `n = 1..=max_n`.
pub fn curve_growth(t: &FamilyParameter, max_n: usize) -> Result<Outcome, CliError> {
    let map = build_family_map(t);
    let curve = exceptional_orbit_curve(t);
    let degs = (1..=max_n)
        .map(|n| map.image_curve_degree(&curve, n - 1, 1 << 14))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Outcome::default();
    let mut csv = String::from("n,degree\n");
    for (i, d) in degs.iter().enumerate() {
        out.say(format!("deg f_t^{}(a3)={d}", i + 1));
        csv.push_str(&format!("{},{d}\n", i + 1));
    }
    out.file("curve_growth.csv", csv);
    let monotone = degs.windows(2).all(|w| w[0] <= w[1]);
    let lower = degs.iter().enumerate().all(|(i, &d)| d >= i);
    out.check(Finding::new(
        format!("curve_growth_t={t}"),
        "nondecreasing and deg >= n-1",
        list(&degs),
        "exact",
        monotone && lower,
    ));
    Ok(out)
}

pub fn two_form(map: &PlaneMap, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let dev = map.verify_two_form(samples, seed)?;
    let weight = map.two_form_weight().map(|w| w.to_string()).unwrap_or_default();
    let mut out = Outcome::default();
    out.say(format!("{}: two-form weight {weight}, max relative error {dev:e}", map.name()));
    out.check(Finding::new(
        format!("{}_two_form_weight", map.name()),
        weight,
        format!("{dev:e}"),
        "1e-9",
        dev < 1e-9,
    ));
    Ok(out)
}

pub fn q_fixed(samples: usize, seed: u64) -> Outcome {
    let dev = verify_q_pointwise_fixed(samples, &FamilyParameter::one(), seed);
    let mut out = Outcome::default();
    out.say(format!("Q pointwise fixed: max FS deviation {dev:e}"));
    out.check(Finding::new("q_pointwise_fixed", "0", format!("{dev:e}"), "1e-9", dev < 1e-9));
    out
}

pub fn rho(samples: usize, seed: u64) -> Outcome {
    let c = verify_rho_functional_equation(samples, seed);
    let mut out = Outcome::default();
    out.say(format!("rho: c={} residual={:e} sign_preserved={}", c.c, c.max_rel_dev, c.sign_preserved));
    out.check(Finding::new(
        "rho_functional_equation",
        "c > 0",
        format!("c={} residual={:e}", c.c, c.max_rel_dev),
        "1e-8",
        c.c > 0.0 && c.max_rel_dev < 1e-8,
    ));
    out
}

pub fn markov(t: &FamilyParameter, samples: usize, seed: u64) -> Outcome {
    let c = verify_markov_property(samples, t, seed);
    let mut out = Outcome::default();
    out.say(format!(
        "markov t={t}: {} targets, {} exceptions",
        c.samples,
        c.exceptions.len()
    ));
    for (p, labels) in &c.exceptions {
        let names: Vec<&str> = labels.iter().map(|l| l.name()).collect();
        out.check(Finding::note(
            format!("markov_exception_t={t}"),
            format!("({} {}) -> {}", p[0], p[1], names.join(" ")),
        ));
    }
    out.check(Finding::new(
        format!("markov_one_branch_per_region_t={t}"),
        "0 exceptions",
        format!("{} exceptions in {}", c.exceptions.len(), c.samples),
        "none",
        c.exceptions.is_empty(),
    ));
    out
}

/// Adapted real coordinates `a,b`.
pub fn parse_point(s: &str) -> Result<(f64, f64), CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("--point {s}: expected `a,b`")))?;
    match v.as_slice() {
        [a, b] if a.is_finite() && b.is_finite() => Ok((*a, *b)),
        _ => Err(CliError::usage(format!("--point {s}: expected two finite numbers"))),
    }
}

pub fn itinerary_of(t: &FamilyParameter, point: (f64, f64), length: usize) -> Result<Outcome, CliError> {
    let p = AdaptedChart::new().from_real(point.0, point.1);
    let w = itinerary(t, &p, length)?;
    let mut out = Outcome::default();
    out.say(format!("itinerary={w}"));
    let mut csv = String::from("step,symbol\n");
    for (k, s) in w.symbols().iter().enumerate() {
        csv.push_str(&format!("{k},{s}\n"));
    }
    out.file("itinerary.csv", csv);
    Ok(out)
}

pub fn realize(t: &FamilyParameter, word: &ItineraryWord) -> Result<Outcome, CliError> {
    let p = realize_word(t, word, &default_anchors()[0])?;
    let a = AdaptedChart::new().to_chart(&p).map_err(chebdyn::planemap::MapError::from)?;
    let back = itinerary(t, &p, word.len())?;
    let mut out = Outcome::default();
    out.say(format!("point={},{}", a[0].re, a[1].re));
    out.file(
        "realize.csv",
        format!(
            "word,re_a,im_a,re_b,im_b\n{word},{},{},{},{}\n",
            a[0].re, a[0].im, a[1].re, a[1].im
        ),
    );
    out.check(Finding::new(
        "realized_itinerary",
        word.to_string(),
        back.to_string(),
        "exact",
        &back == word,
    ));
    Ok(out)
}

pub fn mu_samples(
    t: &FamilyParameter,
    samples: usize,
    burn_in: usize,
    length: usize,
    seed: u64,
) -> Result<(Outcome, Vec<OrbitRecord>), CliError> {
    let recs = sample_mu(t, samples, burn_in, length, seed)?;
    let max_im = recs
        .iter()
        .flat_map(|r| r.points.iter().map(|p| p.max_imag()))
        .fold(0.0, f64::max);
    let in_u = recs
        .iter()
        .all(|r| r.labels.iter().all(|l| l.and_then(|l| l.symbol()).is_some()));
    let mut out = Outcome::default();
    out.say(format!("mu: {} orbits of length {length}, max |Im| {max_im:e}", recs.len()));
    out.check(Finding::new(
        format!("mu_samples_real_t={t}"),
        "|Im| < 1e-12 and inside U",
        format!("max |Im| = {max_im:e}, in_u = {in_u}"),
        "1e-12",
        max_im < 1e-12 && in_u,
    ));
    out.file("mu_cloud.csv", cloud_csv(&recs));
    Ok((out, recs))
}

pub fn nu_samples(
    t: &FamilyParameter,
    samples: usize,
    history_depth: usize,
    length: usize,
    seed: u64,
) -> Result<(Outcome, Vec<OrbitRecord>), CliError> {
    let cfg = NuConfig {
        history_depth,
        orbit_length: length,
        ..NuConfig::default()
    };
    let recs = sample_nu_with(t, samples, &cfg, seed)?;
    let chart = line_chart();
    let complex = recs
        .iter()
        .filter(|r| {
            chart
                .to_chart(&r.points[0])
                .map(|z| z[0].im.abs() > 1e-3)
                .unwrap_or(false)
        })
        .count();
    let defect = recs.iter().map(OrbitRecord::max_relation_defect).fold(0.0, f64::max);
    let frac = complex as f64 / recs.len().max(1) as f64;
    let mut out = Outcome::default();
    out.say(format!(
        "nu: {} orbits, {complex} with |Im z| > 1e-3, orbit defect {defect:e}",
        recs.len()
    ));
    out.check(Finding::new(
        format!("nu_samples_complex_t={t}"),
        ">= 0.9 with |Im| > 1e-3",
        format!("{frac}"),
        "0.9",
        frac >= 0.9,
    ));
    out.check(Finding::new(
        format!("nu_orbit_relation_t={t}"),
        "f_t(z_k) = z_(k+1)",
        format!("{defect:e}"),
        "1e-8",
        defect < 1e-8,
    ));
    out.file("nu_cloud.csv", cloud_csv(&recs));
    Ok((out, recs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    Mu,
    Nu,
}

impl std::str::FromStr for Measure {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "mu" => Ok(Measure::Mu),
            "nu" => Ok(Measure::Nu),
            _ => Err(CliError::usage(format!("--measure {s}: expected `mu` or `nu`"))),
        }
    }
}

/// Exponents of each orbit with the sign pattern the measure predicts:
/// both positive for `μ`, one of each sign for `ν`.
pub fn lyapunov_signs(records: &[OrbitRecord], measure: Measure, seed: u64) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let mut csv = format!("{LYAPUNOV_CSV_HEADER}\n");
    let name = match measure {
        Measure::Mu => "mu",
        Measure::Nu => "nu",
    };
    for (i, rec) in records.iter().enumerate() {
        let (observed, ok) = match lyapunov(rec)? {
            LyapunovOutcome::Estimate(e) => {
                csv.push_str(&e.csv_row(seed));
                csv.push('\n');
                let z = e.z_scores();
                out.say(format!(
                    "{name} orbit {i}: lambda = {} {} (z = {:.1} {:.1})",
                    e.exponents[0], e.exponents[1], z[0], z[1]
                ));
                let ok = match measure {
                    Measure::Mu => z[0] > Z_THRESHOLD && z[1] > Z_THRESHOLD,
                    Measure::Nu => z[0] > Z_THRESHOLD && z[1] < -Z_THRESHOLD,
                };
                (format!("{} {} se {} {}", e.exponents[0], e.exponents[1], e.standard_error[0], e.standard_error[1]), ok)
            }
            LyapunovOutcome::NonHyperbolicSink { step } => {
                (format!("orbit fell into a sink at step {step}"), false)
            }
        };
        out.check(Finding::new(
            format!("{name}_lyapunov_signs_orbit_{i}"),
            match measure {
                Measure::Mu => "both > 0",
                Measure::Nu => "one > 0 and one < 0",
            },
            observed,
            format!("{Z_THRESHOLD} standard errors"),
            ok,
        ));
    }
    out.file(format!("lyapunov_{name}.csv"), csv);
    Ok(out)
}

pub const ETA_TARGET: f64 = 2.0 * PI * PI;

pub fn eta(method: EtaMethod) -> Result<Outcome, CliError> {
    let m = eta_mass_on_u(method)?;
    let rel = (m.estimate - ETA_TARGET).abs() / ETA_TARGET;
    let covers = (m.estimate - ETA_TARGET).abs() <= m.error_bound;
    let mut out = Outcome::default();
    out.say(format!(
        "eta_mass={} error_bound={} richardson={} levels={}",
        m.estimate, m.error_bound, m.richardson, m.levels
    ));
    out.file(
        "eta.csv",
        format!(
            "estimate,error_bound,richardson,levels,cells,target\n{},{},{},{},{},{}\n",
            m.estimate, m.error_bound, m.richardson, m.levels, m.cells, ETA_TARGET
        ),
    );
    out.check(Finding::new(
        "eta_mass_on_u",
        format!("{ETA_TARGET}"),
        format!("{} (relative error {rel:e})", m.estimate),
        "0.02",
        rel < 0.02,
    ));
    out.check(Finding::new(
        "eta_error_bound_covers",
        format!("|estimate - {ETA_TARGET}| <= error_bound"),
        format!("{} <= {}", (m.estimate - ETA_TARGET).abs(), m.error_bound),
        "certified",
        covers,
    ));
    Ok(out)
}

pub fn entropy(t: &FamilyParameter, depth: usize) -> Result<Outcome, CliError> {
    let r = entropy_lower_bound(t, depth)?;
    let upper = 4f64.ln();
    let mut out = Outcome::default();
    out.say(format!(
        "t={t} depth={depth}: realized {}/{} cylinders, bound={} epsilon={:e}",
        r.realized, r.total, r.bound, r.epsilon
    ));
    out.say(format!("upper bound log max(lambda1, lambda2) = {upper}"));
    out.file(
        "entropy.csv",
        format!(
            "depth,realized,total,epsilon,lower_bound,upper_bound\n{depth},{},{},{},{},{upper}\n",
            r.realized, r.total, r.epsilon, r.bound
        ),
    );
    for (w, e) in &r.failures {
        out.check(Finding::note(format!("unrealized_cylinder_t={t}"), format!("{w}: {e}")));
    }
    out.check(Finding::new(
        format!("full_shift_depth_{depth}_t={t}"),
        format!("{} cylinders", r.total),
        format!("{}", r.realized),
        "exact",
        r.realized == r.total && r.epsilon > 0.0,
    ));
    out.check(Finding::new(
        format!("entropy_lower_bound_t={t}"),
        format!("{upper}"),
        format!("{}", r.bound),
        "1e-12",
        (r.bound - upper).abs() < 1e-12,
    ));
    Ok(out)
}

/// `r` built three ways, its critical and fixed points, and its certificate.
pub fn boundary_map() -> Result<Outcome, CliError> {
    let literal = RatMap1D::literal_boundary_map();
    let induced = induced_boundary_map()?;
    let composed = composed_boundary_map()?;
    let mut out = Outcome::default();
    let exact = induced.numerator() == composed.numerator()
        && induced.denominator() == composed.denominator()
        && literal.numerator() == composed.numerator()
        && literal.denominator() == composed.denominator();
    let dev = (0..64)
        .map(|k| {
            let th = k as f64 * 0.37;
            let z = ExtC::Finite(C64::from_polar(0.2 + 0.15 * k as f64, th));
            chordal(literal.eval(z), composed.eval(z)).max(chordal(induced.eval(z), composed.eval(z)))
        })
        .fold(0.0, f64::max);
    out.say(format!("r constructions: exact={exact} max chordal deviation {dev:e}"));
    out.check(Finding::new(
        "r_constructions_agree",
        "identical",
        format!("exact={exact} deviation={dev:e}"),
        "1e-10",
        exact && dev < 1e-10,
    ));

    let cps = literal.critical_points()?;
    let total: usize = cps.iter().map(|c| c.1).sum();
    let finite: Vec<C64> = cps.iter().filter_map(|c| c.0.finite()).collect();
    let paired = finite.len() == cps.len()
        && finite.iter().all(|z| {
            z.im.abs() > 1e-6 && finite.iter().any(|w| (w - z.conj()).norm() < 1e-8)
        });
    let mut csv = String::from("re,im,multiplicity\n");
    for (c, m) in &cps {
        let p = c.pair();
        let z = if p[1].norm() == 0.0 { C64::new(f64::INFINITY, 0.0) } else { p[0] / p[1] };
        csv.push_str(&format!("{},{},{m}\n", z.re, z.im));
    }
    out.file("r_critical.csv", csv);
    out.check(Finding::new(
        "r_critical_points",
        "6 simple, 3 conjugate pairs",
        format!("{} points, multiplicity {total}, paired={paired}", cps.len()),
        "1e-8",
        cps.len() == 6 && total == 6 && paired,
    ));

    let fixed = literal.fixed_points_with_multipliers()?;
    let targets = [ExtC::Finite(C64::new(0.0, 0.0)), ExtC::Finite(C64::new(1.0, 0.0)), ExtC::Infinity];
    let mut attracting = Vec::new();
    let mut csv = String::from("re,im,multiplier_re,multiplier_im,kind\n");
    for f in &fixed {
        let p = f.location.pair();
        let z = if p[1].norm() == 0.0 { C64::new(f64::INFINITY, 0.0) } else { p[0] / p[1] };
        csv.push_str(&format!(
            "{},{},{},{},{:?}\n",
            z.re, z.im, f.multiplier.re, f.multiplier.im, f.kind
        ));
    }
    out.file("r_fixed.csv", csv);
    for z in targets {
        let hit = fixed
            .iter()
            .find(|f| chordal(f.location, z) < 1e-9)
            .map(|f| f.kind == FixedType::Attracting);
        attracting.push(hit == Some(true));
    }
    out.check(Finding::new(
        "r_fixed_points_attracting",
        "0 1 inf attracting",
        format!("{attracting:?}"),
        "1e-9",
        attracting.iter().all(|&a| a),
    ));

    let cert = hyperbolicity_certificate(&literal, 10_000, 1e-6);
    let (observed, ok) = match &cert {
        Ok(rep) => {
            let absorbed = rep.absorbed_per_cycle();
            let pairs = (0..rep.cycles.len()).all(|c| {
                let pts: Vec<C64> = rep
                    .critical
                    .iter()
                    .filter(|f| f.target == c)
                    .filter_map(|f| f.point.finite())
                    .collect();
                pts.len() == 2 && (pts[0] - pts[1].conj()).norm() < 1e-8
            });
            let fixed_cycles = rep.cycles.iter().all(|c| c.period() == 1);
            (
                format!("absorbed {absorbed:?}, conjugate pairs={pairs}"),
                absorbed == [2, 2, 2] && pairs && fixed_cycles,
            )
        }
        Err(e) => (e.to_string(), false),
    };
    out.say(format!("hyperbolicity certificate: {observed}"));
    out.check(Finding::new(
        "r_hyperbolicity_certificate",
        "granted, one conjugate pair per attracting fixed point",
        observed,
        "1e-6 capture radius",
        ok,
    ));
    Ok(out)
}

pub fn fates(
    t: &FamilyParameter,
    n: usize,
    cloud: &[OrbitRecord],
    seed: u64,
) -> Outcome {
    let s = fate_survey(t, n, cloud, &FateConfig::default(), seed);
    let mut out = Outcome::default();
    let classes: Vec<(String, usize)> = {
        let mut v: Vec<(String, usize)> = (0..3)
            .map(|j| (Fate::Attracted(j).name(), s.count(|f| f == Fate::Attracted(j))))
            .collect();
        for f in [Fate::NearOmega, Fate::TrappedInU, Fate::Indeterminate, Fate::Outlier, Fate::Unresolved] {
            v.push((f.name(), s.count(|g| g == f)));
        }
        v
    };
    for (name, c) in &classes {
        out.say(format!("{name}={c}"));
    }
    let sinks = attractors(t.value());
    for (j, p) in sinks.iter().enumerate() {
        let c = p.real_coords();
        out.say(format!("p{}(t) = [{} : {} : {}]", j + 1, c[0], c[1], c[2]));
    }
    for (i, (f, steps)) in s.fates.iter().enumerate() {
        if matches!(f, Fate::Outlier | Fate::Indeterminate) {
            let c = s.starts[i].coords();
            out.check(Finding::note(
                format!("fate_{}", f.name()),
                format!(
                    "start {i} [{} : {} : {}] after {steps} steps",
                    c[0], c[1], c[2]
                ),
            ));
        }
    }
    let frac = s.classified_fraction();
    out.check(Finding::new(
        format!("fate_trichotomy_t={t}"),
        ">= 0.99 of resolved orbits classified",
        format!("{} of {} resolved orbits classified ({frac})", s.count(Fate::is_classified), s.resolved()),
        "0.99",
        frac >= 0.99,
    ));
    out.file("fates.csv", s.to_csv());
    out
}

pub fn palette_or(text: Option<String>, fallback: Palette) -> Result<Palette, CliError> {
    match text {
        Some(t) => t.parse().map_err(|e: chebdyn::render::RenderError| CliError::usage(e.to_string())),
        None => Ok(fallback),
    }
}

fn image(out: &mut Outcome, name: &str, grid: &ImageGrid, palette: &Palette) -> Result<(), CliError> {
    out.file(format!("{name}.ppm"), grid.pixmap_bytes(palette)?);
    out.file(format!("{name}_census.csv"), grid.census_csv());
    out.say(format!("{name}: {}x{} pixels", grid.width(), grid.height()));
    Ok(())
}

pub fn basins_image(t: &FamilyParameter, spec: &GridSpec, iterations: usize, palette: &Palette) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    image(&mut out, "basins", &render_basins(t, spec, iterations), palette)?;
    Ok(out)
}

pub fn partition_image(t: &FamilyParameter, spec: &GridSpec, level: usize, palette: &Palette) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    image(&mut out, "partition", &render_partition(t, spec, level), palette)?;
    Ok(out)
}

pub fn julia_image(spec: &GridSpec, iterations: usize, palette: &Palette) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let r = RatMap1D::literal_boundary_map();
    image(&mut out, "julia", &render_julia_1d(&r, spec, iterations)?, palette)?;
    Ok(out)
}

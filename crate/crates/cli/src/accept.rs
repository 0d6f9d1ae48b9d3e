//! The acceptance suite: fourteen criteria, each reported pass or fail.

use chebdyn::chebfam::{build_family_map, f_map, g_map, h_map, FamilyParameter};
use chebdyn::ergodic::{EtaMethod, OrbitRecord};
use chebdyn::render::{GridSpec, Palette, Viewport};

use crate::checks::{self, Measure};
use crate::report::{findings_csv, Artifact, Finding, Outcome};
use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct AcceptOptions {
    /// Parameter of the small-`t` criteria (sampling, exponents, fates).
    pub t: FamilyParameter,
    pub seed: u64,
    pub threads: usize,
}

impl Default for AcceptOptions {
    fn default() -> Self {
        Self {
            t: FamilyParameter::parse("1/20").expect("valid parameter"),
            seed: 0,
            threads: crate::config::default_threads(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub findings: Vec<Finding>,
    pub summary: Vec<String>,
}

impl CriterionResult {
    /// `PASS 07 eta-mass: <first failing or last finding>`.
    pub fn line(&self) -> String {
        let key = self
            .findings
            .iter()
            .find(|f| !f.passed())
            .or_else(|| self.findings.iter().rev().find(|f| f.status != crate::Status::Note));
        let detail = key
            .map(|f| format!("{} observed {} (expected {})", f.check, f.observed, f.expected))
            .unwrap_or_default();
        format!(
            "{} {:02} {}: {detail}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AcceptReport {
    pub criteria: Vec<CriterionResult>,
    pub artifacts: Vec<Artifact>,
}

impl AcceptReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        self.criteria.iter().map(CriterionResult::line).collect()
    }

    /// All findings prefixed by criterion, the artifacts, a per-criterion
    /// table and the SHA-256 digests of every artifact.
    pub fn into_outcome(self) -> Outcome {
        let mut out = Outcome::default();
        let mut table = String::from("criterion,name,status\n");
        for c in &self.criteria {
            table.push_str(&format!(
                "{},{},{}\n",
                c.id,
                c.name,
                if c.passed { "pass" } else { "fail" }
            ));
            out.summary.push(c.line());
            for f in &c.findings {
                let mut f = f.clone();
                f.check = format!("c{:02}.{}", c.id, f.check);
                out.findings.push(f);
            }
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        out.say(format!("{passed}/{} criteria passed", self.criteria.len()));
        let mut digests = String::from("file,sha256\n");
        for a in &self.artifacts {
            digests.push_str(&format!("{},{}\n", a.name, a.sha256()));
        }
        out.artifacts = self.artifacts;
        out.file("acceptance.csv", table);
        out.file("digests.csv", digests);
        out
    }
}

struct Suite {
    criteria: Vec<CriterionResult>,
    artifacts: Vec<Artifact>,
}

impl Suite {
    fn run(&mut self, id: usize, name: &'static str, f: impl FnOnce() -> Result<Outcome, CliError>) {
        let out = f().unwrap_or_else(|e| {
            let mut o = Outcome::default();
            o.check(Finding::new(name, "completed", e.to_string(), "", false));
            o
        });
        let passed = !out.findings.is_empty() && out.passed();
        for a in out.artifacts {
            self.artifacts
                .push(Artifact::new(format!("c{id:02}_{name}/{}", a.name), a.bytes));
        }
        self.criteria.push(CriterionResult {
            id,
            name,
            passed,
            findings: out.findings,
            summary: out.summary,
        });
    }
}

fn absorb(into: &mut Outcome, from: Outcome, prefix: &str) {
    into.findings.extend(from.findings);
    into.summary.extend(from.summary);
    for a in from.artifacts {
        into.artifacts.push(Artifact::new(format!("{prefix}{}", a.name), a.bytes));
    }
}

fn param(s: &str) -> FamilyParameter {
    FamilyParameter::parse(s).expect("valid parameter")
}

/// The fixed parameter values plus `t` when it is not among them.
fn with_t(base: &[&str], t: &FamilyParameter) -> Vec<FamilyParameter> {
    let mut v: Vec<FamilyParameter> = base.iter().map(|s| param(s)).collect();
    if !v.contains(t) {
        v.push(t.clone());
    }
    v
}

const SAMPLES: usize = 10_000;
const ORBIT: usize = 10_000;
const CLOUD: usize = 1000;
const STARTS: usize = 10_000;

/// Runs every criterion inside a pool of `threads` workers.
pub fn accept(opts: &AcceptOptions) -> AcceptReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| run_suite(opts))
}

fn run_suite(opts: &AcceptOptions) -> AcceptReport {
    let seed = opts.seed;
    let t = &opts.t;
    let mut s = Suite {
        criteria: Vec::new(),
        artifacts: Vec::new(),
    };

    s.run(1, "degrees", || {
        let mut out = checks::g_of_h()?;
        absorb(&mut out, checks::topdeg(&f_map(), 100, seed)?, "f_");
        Ok(out)
    });

    s.run(2, "stability", || {
        let mut out = Outcome::default();
        absorb(&mut out, checks::stability(&f_map(), 12, false, 1)?, "f_");
        for tt in with_t(&["1/2", "1/20"], t) {
            let tag = format!("ft_{}_", tt.to_string().replace('/', "_"));
            absorb(&mut out, checks::stability(&build_family_map(&tt), 12, true, 0)?, &tag);
        }
        Ok(out)
    });

    s.run(3, "degree-law", || {
        checks::degrees(&build_family_map(&param("1/2")), 3, 4096, Some(&[4, 16, 64]))
    });

    s.run(4, "two-form", || {
        let mut out = Outcome::default();
        for m in [f_map(), h_map(), g_map()] {
            let tag = format!("{}_", m.name());
            absorb(&mut out, checks::two_form(&m, SAMPLES, seed)?, &tag);
        }
        Ok(out)
    });

    s.run(5, "q-fixed", || Ok(checks::q_fixed(SAMPLES, seed)));

    s.run(6, "rho-equation", || Ok(checks::rho(SAMPLES, seed)));

    s.run(7, "eta-mass", || {
        checks::eta(EtaMethod::Adaptive {
            max_depth: 16,
            tol: 0.01,
        })
    });

    s.run(8, "markov", || {
        let mut out = Outcome::default();
        for tt in with_t(&["1", "1/2", "1/20"], t) {
            absorb(&mut out, checks::markov(&tt, 1000, seed), "");
        }
        Ok(out)
    });

    s.run(9, "full-shift", || {
        let mut out = Outcome::default();
        for tt in with_t(&["1/2", "1/20"], t) {
            let tag = format!("t_{}_", tt.to_string().replace('/', "_"));
            absorb(&mut out, checks::entropy(&tt, 6)?, &tag);
        }
        Ok(out)
    });

    s.run(10, "curve-growth", || checks::curve_growth(&param("1/2"), 4));

    s.run(11, "boundary-map", checks::boundary_map);

    let mut cloud: Vec<OrbitRecord> = Vec::new();
    s.run(12, "hyperbolicity-types", || {
        let mut out = Outcome::default();
        let (o, _) = checks::mu_samples(t, CLOUD, 30, 1, seed)?;
        absorb(&mut out, o, "");
        let (o, recs) = checks::nu_samples(t, CLOUD, 20, 1, seed)?;
        absorb(&mut out, o, "");
        cloud = recs;
        let (_, mu) = checks::mu_samples(t, 1, 50, ORBIT, seed)?;
        absorb(&mut out, checks::lyapunov_signs(&mu, Measure::Mu, seed)?, "");
        let (_, nu) = checks::nu_samples(t, 1, 20, ORBIT, seed)?;
        absorb(&mut out, checks::lyapunov_signs(&nu, Measure::Nu, seed)?, "");
        Ok(out)
    });

    s.run(13, "fates", || {
        if cloud.is_empty() {
            return Err(CliError::usage("no saddle-measure cloud available"));
        }
        Ok(checks::fates(t, STARTS, &cloud, seed))
    });

    s.run(14, "determinism", || determinism(t, seed, opts.threads));

    AcceptReport {
        criteria: s.criteria,
        artifacts: s.artifacts,
    }
}

/// Figures and reduced versions of the stochastic outputs.
fn probe(t: &FamilyParameter, seed: u64) -> Result<Vec<Artifact>, CliError> {
    let mut out = Outcome::default();
    let square = GridSpec::new(256, 256, Viewport::adapted_default())?;
    let one = FamilyParameter::one();
    absorb(&mut out, checks::partition_image(&one, &square, 1, &Palette::partition())?, "");
    absorb(&mut out, checks::basins_image(&one, &square, 200, &Palette::basins())?, "");
    let strip = GridSpec::new(320, 120, Viewport::boundary_map_default())?;
    absorb(&mut out, checks::julia_image(&strip, 1000, &Palette::basins())?, "");
    absorb(&mut out, checks::mu_samples(t, 200, 30, 3, seed)?.0, "");
    let (o, nu) = checks::nu_samples(t, 50, 20, 2, seed)?;
    absorb(&mut out, o, "");
    absorb(&mut out, checks::fates(t, 300, &nu, seed), "");
    absorb(&mut out, checks::markov(t, 200, seed), "markov_");
    out.file("probe_findings.csv", findings_csv(&out.findings));
    Ok(out.artifacts)
}

fn determinism(t: &FamilyParameter, seed: u64, threads: usize) -> Result<Outcome, CliError> {
    let n = threads.max(2);
    let mut runs = Vec::new();
    for k in [1, n, n] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::usage(format!("thread pool of {k}: {e}")))?;
        runs.push(pool.install(|| probe(t, seed))?);
    }
    let mut out = Outcome::default();
    for (i, a) in runs[0].iter().enumerate() {
        let digests: Vec<String> = runs.iter().map(|r| r[i].sha256()).collect();
        out.check(Finding::new(
            format!("{}_identical", a.name),
            format!("threads 1, {n}, {n}"),
            digests[0].clone(),
            "byte-identical",
            digests.iter().all(|d| d == &digests[0]) && runs.iter().all(|r| r[i].bytes == a.bytes),
        ));
    }
    out.say(format!("{} probe files compared across three runs", runs[0].len()));
    out.artifacts = runs.swap_remove(0);
    Ok(out)
}

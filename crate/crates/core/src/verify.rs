//! Property sweeps over algebras and modules with deterministic reports.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::grading::{check_lie_torus, EigenspaceDecomposition};
use crate::repmod::{AxiomOutcome, ModuleKind, RealizedModule};
use crate::toroidal::{ToroidalAlgebra, ToroidalElement};
use crate::{CycScalar, Error, Result};

/// Triple counts up to this bound are enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepTarget {
    Algebra,
    Module,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub target: SweepTarget,
    pub window: i64,
    pub phi: (CycScalar, CycScalar),
    /// Samples for sampled checks; must be at least 1.
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
    /// Record wall-clock times (reports are then no longer byte-identical).
    pub timings: bool,
}

impl SweepConfig {
    pub fn new(target: SweepTarget, window: i64) -> Self {
        SweepConfig {
            target,
            window,
            phi: (CycScalar::zero(), CycScalar::zero()),
            samples: 100,
            seed: 0,
            threads: 0,
            timings: false,
        }
    }

    pub fn with_phi(mut self, a: i64, b: i64) -> Self {
        self.phi = (CycScalar::from_int(a), CycScalar::from_int(b));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Invalid("sample count must be at least 1".into()));
        }
        if self.window < 1 {
            return Err(Error::Invalid("window must be at least 1".into()));
        }
        Ok(())
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.threads == 0 {
            f()
        } else {
            rayon::ThreadPoolBuilder::new().num_threads(self.threads).build().expect("thread pool").install(f)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub status: Status,
    pub witnesses: Vec<Value>,
    pub elapsed_ms: Option<u64>,
    /// Number of cases examined.
    pub total: usize,
}

impl CheckResult {
    fn new(check: &str, witnesses: Vec<Value>, total: usize, started: Option<Instant>) -> Self {
        let status = if witnesses.is_empty() { Status::Pass } else { Status::Fail };
        CheckResult {
            check: check.to_string(),
            status,
            witnesses,
            elapsed_ms: started.map(|s| s.elapsed().as_millis() as u64),
            total,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepReport {
    pub checks: Vec<CheckResult>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.checks).expect("serializable report")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable report")
    }

    /// One `PASS name` or `FAIL name` line per check.
    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| format!("{} {}", if c.passed() { "PASS" } else { "FAIL" }, c.check))
            .collect()
    }
}

/// Enumerates or samples index triples `i < j < k`.
fn triple_count(n: usize) -> usize {
    if n < 3 { 0 } else { n * (n - 1) * (n - 2) / 6 }
}

/// Whether a Jacobi sweep over `n` basis elements enumerates every triple.
pub fn is_exhaustive(n: usize) -> bool {
    triple_count(n) <= EXHAUSTIVE_LIMIT
}

fn triples(n: usize, cfg: &SweepConfig) -> Vec<(usize, usize, usize)> {
    let count = triple_count(n);
    if is_exhaustive(n) {
        let mut out = Vec::with_capacity(count);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push((i, j, k));
                }
            }
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut out: Vec<(usize, usize, usize)> = (0..cfg.samples)
            .map(|_| {
                let mut t = [0usize; 3];
                loop {
                    for x in &mut t {
                        *x = rng.gen_range(0..n);
                    }
                    t.sort_unstable();
                    if t[0] < t[1] && t[1] < t[2] {
                        break;
                    }
                }
                (t[0], t[1], t[2])
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

enum Triple {
    Ok,
    Skipped,
    Bad(String),
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
pub fn jacobi_sum(t: &ToroidalAlgebra, x: &ToroidalElement, y: &ToroidalElement, z: &ToroidalElement) -> Result<ToroidalElement> {
    let a = t.bracket(x, &t.bracket(y, z)?)?;
    let b = t.bracket(y, &t.bracket(z, x)?)?;
    let c = t.bracket(z, &t.bracket(x, y)?)?;
    Ok(a.add(&b).add(&c))
}

fn jacobi_defect(t: &ToroidalAlgebra, x: &ToroidalElement, y: &ToroidalElement, z: &ToroidalElement) -> Result<Triple> {
    let cyc = |a: &ToroidalElement, b: &ToroidalElement, c: &ToroidalElement| -> Result<ToroidalElement> {
        t.bracket(a, &t.bracket(b, c)?)
    };
    let parts = [cyc(x, y, z), cyc(y, z, x), cyc(z, x, y)];
    let mut sum = ToroidalElement::zero();
    for p in parts {
        match p {
            Ok(v) => sum = sum.add(&v),
            Err(Error::WindowOverflow(_)) => return Ok(Triple::Skipped),
            Err(e) => return Ok(Triple::Bad(e.to_string())),
        }
    }
    Ok(if sum.is_zero() { Triple::Ok } else { Triple::Bad(t.render(&sum)) })
}

/// Antisymmetry and Jacobi identity on admissible basis triples of the window.
pub fn sweep_jacobi(dec: Arc<EigenspaceDecomposition>, cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let t = ToroidalAlgebra::new(dec, cfg.phi.clone(), cfg.window);
    let basis = t.window_basis();
    let n = basis.len();
    let clock = || cfg.timings.then(Instant::now);

    let started = clock();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let anti: Vec<Result<Option<Value>>> = cfg.run(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let (x, y) = (&basis[i], &basis[j]);
                match (t.bracket(x, y), t.bracket(y, x)) {
                    (Ok(a), Ok(b)) => {
                        let s = a.add(&b);
                        Ok((!s.is_zero()).then(|| {
                            json!({"x": t.render(x), "y": t.render(y), "defect": t.render(&s)})
                        }))
                    }
                    (Err(Error::WindowOverflow(_)), _) | (_, Err(Error::WindowOverflow(_))) => Ok(None),
                    (Err(e), _) | (_, Err(e)) => {
                        Ok(Some(json!({"x": t.render(x), "y": t.render(y), "defect": e.to_string()})))
                    }
                }
            })
            .collect()
    });
    let anti: Vec<Value> = anti.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    let mut report = SweepReport::default();
    report.checks.push(CheckResult::new("antisymmetry", anti, pairs.len(), started));

    let started = clock();
    let trip = triples(n, cfg);
    let results: Vec<Result<(bool, Option<Value>)>> = cfg.run(|| {
        trip.par_iter()
            .map(|&(i, j, k)| {
                let (x, y, z) = (&basis[i], &basis[j], &basis[k]);
                Ok(match jacobi_defect(&t, x, y, z)? {
                    Triple::Ok => (true, None),
                    Triple::Skipped => (false, None),
                    Triple::Bad(d) => {
                        (true, Some(json!({"x": t.render(x), "y": t.render(y), "z": t.render(z), "defect": d})))
                    }
                })
            })
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let admissible = results.iter().filter(|r| r.0).count();
    let bad: Vec<Value> = results.into_iter().filter_map(|r| r.1).collect();
    report.checks.push(CheckResult::new("jacobi", bad, admissible, started));
    Ok(report)
}

/// Module axiom, level zero, weight dimensions, Weyl symmetry and integrability.
pub fn sweep_module(m: &RealizedModule, cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let clock = || cfg.timings.then(Instant::now);
    let mut report = SweepReport::default();
    let t = &m.torus;
    let gens = m.generators();
    let degrees = t.window.degrees(m.n());

    let started = clock();
    let mut cases: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            for k in 0..degrees.len() {
                cases.push((i, j, k));
            }
        }
    }
    let out: Vec<Result<(bool, Option<Value>)>> = cfg.run(|| {
        cases
            .par_iter()
            .map(|&(i, j, k)| {
                Ok(match m.axiom_check(&gens[i], &gens[j], &degrees[k])? {
                    AxiomOutcome::Pass => (true, None),
                    AxiomOutcome::Skipped => (false, None),
                    AxiomOutcome::Fail => (
                        true,
                        Some(json!({"x": t.render(&gens[i]), "y": t.render(&gens[j]), "degree": degrees[k]})),
                    ),
                })
            })
            .collect()
    });
    let out = out.into_iter().collect::<Result<Vec<_>>>()?;
    let total = out.iter().filter(|r| r.0).count();
    let bad: Vec<Value> = out.into_iter().filter_map(|r| r.1).collect();
    report.checks.push(CheckResult::new("module_axiom", bad, total, started));

    if m.kind == ModuleKind::Realized {
        let started = clock();
        let ok = m.level_zero()?;
        let w = if ok { vec![] } else { vec![json!({"detail": "a central element acts nontrivially"})] };
        report.checks.push(CheckResult::new("level_zero", w, 1, started));

        let started = clock();
        let table = m.weight_table();
        let mut bad = Vec::new();
        for k in &degrees {
            let sum: usize = table.iter().filter(|e| &e.k == k).map(|e| e.dim).sum();
            let expect = m.dim_v1() * m.class_dim(&m.dec().group.quotient(k));
            if sum != expect {
                bad.push(json!({"degree": k, "dim": sum, "expected": expect}));
            }
        }
        report.checks.push(CheckResult::new("weight_dims", bad, degrees.len(), started));

        let started = clock();
        let (checked, fails) = m.weyl_check()?;
        let bad = fails
            .iter()
            .map(|f| {
                json!({
                    "root": {"alpha": f.root.alpha.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "k": f.root.k},
                    "degree": f.from.k,
                    "weight": f.from.weight.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "dim": f.from.dim,
                    "reflected_degree": f.to_k,
                    "reflected_dim": f.to_dim,
                })
            })
            .collect();
        report.checks.push(CheckResult::new("weyl", bad, checked, started));
    }

    if m.kind == ModuleKind::Realized {
        let started = clock();
        let samples = m.check_integrable(cfg.samples, cfg.seed);
        let bad = samples
            .iter()
            .filter(|s| s.exponent.is_none())
            .map(|s| json!({"generator": s.generator, "degree": s.degree, "index": s.index}))
            .collect();
        report.checks.push(CheckResult::new("integrability", bad, samples.len(), started));
    }
    Ok(report)
}

/// Lie-torus conditions of the grading on the window.
pub fn sweep_lietorus(dec: &EigenspaceDecomposition, cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let started = cfg.timings.then(Instant::now);
    let lt = check_lie_torus(dec, cfg.window);
    let elapsed = started.map(|s| s.elapsed().as_millis() as u64);
    let checks = lt
        .entries
        .iter()
        .map(|e| CheckResult {
            check: e.name.clone(),
            status: if e.pass { Status::Pass } else { Status::Fail },
            witnesses: if e.pass { vec![] } else { vec![json!({"detail": e.detail})] },
            elapsed_ms: elapsed,
            total: 1,
        })
        .collect();
    Ok(SweepReport { checks })
}

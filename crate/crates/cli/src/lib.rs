//! Job dispatch and report assembly for the `chowforge` binary.
//!
//! Reports are plain `serde_json` values; objects are key-sorted, so equal
//! jobs give byte-identical output once timings are dropped.

use std::collections::BTreeMap;
use std::time::Instant;

use chowforge_core::chow::DEFAULT_MONOMIAL_LIMIT;
use chowforge_core::identities::{self, SuiteOptions};
use chowforge_core::ktheory::{chern_tm, chern_tm_recursive, todd_tm, KTheory};
use chowforge_core::matroid::{mask_of, Mask};
use chowforge_core::positivity::{
    beta_product_positive, check_ample, check_p1, check_p2, check_p3, default_generators,
    is_big_and_nef, kv_strong_scan, kv_weak_scan,
};
use chowforge_core::rational::{self, Q};
use chowforge_core::{parse_divisor, render_divisor, ChowRing, DivisorClass, Error, Matroid, MatroidSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Describe,
    Chow,
    Tangent,
    Todd,
    Chi,
    ChowPoly,
    NefCheck,
    Dhr,
    KvScan,
    Identities,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Describe => "describe",
            Command::Chow => "chow",
            Command::Tangent => "tangent",
            Command::Todd => "todd",
            Command::Chi => "chi",
            Command::ChowPoly => "chow-poly",
            Command::NefCheck => "nef-check",
            Command::Dhr => "dhr",
            Command::KvScan => "kv-scan",
            Command::Identities => "identities",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub matroid: MatroidSpec,
    pub command: Command,
    /// Command-specific parameters; `null` when there are none.
    #[serde(default)]
    pub params: Value,
    /// Cap on flat and chain-monomial counts.
    #[serde(default)]
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    /// Milliseconds per phase.
    pub timings: BTreeMap<String, u64>,
}

impl Report {
    /// The report without timings: the part that must be reproducible.
    pub fn deterministic(&self) -> Value {
        json!({
            "version": self.version,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
        })
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Tabular rows. Scans produce `(matroid, divisor, property, value)`;
    /// everything else is flattened to `(path, value)`.
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        if let Some(rows) = self.results.get("rows").and_then(Value::as_array) {
            let mut out = vec![vec!["matroid".into(), "divisor".into(), "property".into(), "value".into()]];
            for r in rows {
                let field = |k: &str| match &r[k] {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    v => v.to_string(),
                };
                out.push(vec![field("matroid"), field("divisor"), field("property"), field("value")]);
            }
            return out;
        }
        let mut out = vec![vec!["path".into(), "value".into()]];
        flatten("", &self.results, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(xs) => xs.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push(vec![prefix.into(), s.clone()]),
        v => out.push(vec![prefix.into(), v.to_string()]),
    }
}

/// A failed job: machine-readable code plus message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobError {
    pub code: &'static str,
    pub message: String,
}

impl JobError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        JobError {
            code,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.code {
            "CAPACITY" => 3,
            "INTERNAL" => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"code": self.code, "message": self.message}})
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        JobError::new(e.code(), e.to_string())
    }
}

type JobResult<T> = std::result::Result<T, JobError>;

fn invalid(msg: impl Into<String>) -> JobError {
    JobError::new("INFEASIBLE_PRECONDITION", msg)
}

struct Clock {
    timings: BTreeMap<String, u64>,
    at: Instant,
}

impl Clock {
    fn new() -> Self {
        Clock {
            timings: BTreeMap::new(),
            at: Instant::now(),
        }
    }

    fn lap(&mut self, phase: &str) {
        self.timings.insert(phase.into(), self.at.elapsed().as_millis() as u64);
        self.at = Instant::now();
    }
}

/// Identity-suite failure is not an error: the report says which identity
/// failed and with what witness; see [`Report::suite_failed`].
pub fn run(job: &JobSpec) -> JobResult<Report> {
    let mut clock = Clock::new();
    let limit = job.limit.unwrap_or(DEFAULT_MONOMIAL_LIMIT);
    let m = job.matroid.build()?;
    if m.flats().len() > limit {
        return Err(Error::Capacity {
            what: "flats",
            count: m.flats().len(),
            limit,
        }
        .into());
    }
    clock.lap("matroid");

    let p = Params(&job.params);
    let results = if job.command == Command::Describe {
        describe(&m)
    } else {
        let ring = ChowRing::build_with_limit(&m, limit)?;
        clock.lap("ring");
        match job.command {
            Command::Describe => unreachable!(),
            Command::Chow => chow(&ring, &p)?,
            Command::Tangent => tangent(&ring)?,
            Command::Todd => todd(&ring)?,
            Command::Chi => chi(&ring, &p)?,
            Command::ChowPoly => chow_poly(&ring)?,
            Command::NefCheck => nef_check(&ring, &job.matroid, &p)?,
            Command::Dhr => dhr(&ring, &p)?,
            Command::KvScan => kv_scan(&ring, &job.matroid, &p)?,
            Command::Identities => identities(&ring, &p)?,
        }
    };
    clock.lap("compute");

    Ok(Report {
        version: VERSION.into(),
        command: job.command.name().into(),
        inputs: json!({
            "matroid": job.matroid,
            "params": job.params,
            "limit": limit,
        }),
        results,
        timings: clock.timings,
    })
}

impl Report {
    pub fn suite_failed(&self) -> bool {
        self.command == "identities" && self.results["passed"] == Value::Bool(false)
    }
}

/// Typed access to the `params` object.
struct Params<'a>(&'a Value);

impl Params<'_> {
    fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key).filter(|v| !v.is_null())
    }

    fn divisor(&self, m: &Matroid) -> JobResult<Option<DivisorClass>> {
        match self.get("divisor") {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(parse_divisor(m, s)?)),
            Some(Value::Object(map)) => {
                // {"x{1,2}": "1/2", "alpha": 3}: coefficients per atom
                let mut d = DivisorClass::zero(m);
                for (atom, c) in map {
                    let c = match c {
                        Value::String(s) => rational::parse(s)?,
                        Value::Number(n) if n.is_i64() => rational::q(n.as_i64().unwrap()),
                        v => return Err(JobError::new("PARSE", format!("bad coefficient {v} for {atom}"))),
                    };
                    d = d.add(&parse_divisor(m, atom)?.scale(&c));
                }
                Ok(Some(d))
            }
            Some(v) => Err(JobError::new("PARSE", format!("divisor must be a string or object, got {v}"))),
        }
    }

    fn required_divisor(&self, m: &Matroid) -> JobResult<DivisorClass> {
        self.divisor(m)?
            .ok_or_else(|| invalid("this command needs a divisor (--divisor or params.divisor)"))
    }

    fn uint(&self, key: &str, default: u64) -> JobResult<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .ok_or_else(|| JobError::new("PARSE", format!("params.{key} must be a nonnegative integer"))),
        }
    }
}

fn sets_json(m: Mask) -> Value {
    json!(chowforge_core::matroid::elements(m))
}

fn q_json(x: &Q) -> Value {
    Value::String(rational::render(x))
}

fn describe(m: &Matroid) -> Value {
    let flats: Vec<Value> = (0..=m.rank())
        .map(|k| Value::Array(m.flats().by_rank(k).iter().map(|f| sets_json(f.members)).collect()))
        .collect();
    json!({
        "n": m.n(),
        "rank": m.rank(),
        "flat_counts": (0..=m.rank()).map(|k| m.flats().by_rank(k).len()).collect::<Vec<_>>(),
        "flats_by_rank": flats,
    })
}

fn chow(ring: &ChowRing, p: &Params) -> JobResult<Value> {
    let m = ring.matroid();
    let basis: Vec<Vec<String>> = (0..ring.rank())
        .map(|d| ring.basis_monomials(d).iter().map(|mo| ring.monomial_key(mo)).collect())
        .collect();
    let mut out = json!({
        "dims": ring.dims(),
        "chain_monomials": ring.monomial_count(),
        "basis": basis,
    });
    if let Some(d) = p.divisor(m)? {
        let e = ring.divisor(&d)?;
        let mut powers = Vec::new();
        let mut acc = ring.one();
        for _ in 0..ring.rank() {
            powers.push(ring.element_to_json(&acc)?);
            acc = ring.multiply(&acc, &e)?;
        }
        let top = ring.pow(&e, ring.top_degree())?;
        out["divisor"] = render_divisor(m, &d).into();
        out["powers"] = powers.into();
        out["top_degree"] = q_json(&ring.degree(&top)?);
    }
    Ok(out)
}

fn tangent(ring: &ChowRing) -> JobResult<Value> {
    let c = chern_tm(ring)?;
    let rec = chern_tm_recursive(ring)?;
    let classes = (0..ring.rank())
        .map(|k| ring.element_to_json(&c.c(k)))
        .collect::<Result<Vec<_>, _>>()?;
    let euler = ring.degree(&c.c(ring.top_degree()))?;
    Ok(json!({
        "rank": c.rank,
        "chern": classes,
        "recursive_agrees": c == rec,
        "top_chern_degree": q_json(&euler),
    }))
}

fn todd(ring: &ChowRing) -> JobResult<Value> {
    let td = todd_tm(ring)?;
    let parts = (0..ring.rank())
        .map(|k| ring.element_to_json(&td.homogeneous_part(k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "todd": parts,
        "top_degree": q_json(&ring.degree(&td)?),
    }))
}

fn chi(ring: &ChowRing, p: &Params) -> JobResult<Value> {
    let m = ring.matroid();
    let d = p.required_divisor(m)?;
    let kt = KTheory::new(ring)?;
    let by_zeta = kt.chi_zeta(&d)?;
    let by_hrr = kt.chi_hrr_divisor(&d)?;
    if by_zeta != by_hrr {
        return Err(JobError::new(
            "INTERNAL",
            format!("chi_zeta = {by_zeta} but chi_hrr = {by_hrr}"),
        ));
    }
    let value = rational::to_i64(&by_zeta)
        .ok_or_else(|| JobError::new("INTERNAL", format!("Euler characteristic {by_zeta} is not an integer")))?;
    Ok(json!({
        "divisor": render_divisor(m, &d),
        "alpha_expression": kt.alpha_expression(&d)?.render(),
        "chi": value,
        "chi_zeta": q_json(&by_zeta),
        "chi_hrr": q_json(&by_hrr),
    }))
}

fn chow_poly(ring: &ChowRing) -> JobResult<Value> {
    let kt = KTheory::new(ring)?;
    Ok(json!({
        "coefficients": kt.chow_polynomial()?,
        "dims": ring.dims(),
    }))
}

fn nef_check(ring: &ChowRing, spec: &MatroidSpec, p: &Params) -> JobResult<Value> {
    let m = ring.matroid();
    let d = p.required_divisor(m)?;
    let text = render_divisor(m, &d);
    let p1 = check_p1(m, &d)?;
    let p2 = check_p2(m, &d)?;
    let p3 = check_p3(m, &d)?;
    let ample = check_ample(m, &d)?;
    let big_nef = if p3.holds { Some(is_big_and_nef(ring, &d)?) } else { None };
    let cert = |r: &chowforge_core::positivity::NefResult| {
        json!({
            "holds": r.holds,
            "certificate": r.certificate.as_ref().map(|c| c.to_json(m)),
            "failing_flag": r.failing_flag.as_ref().map(|f| f.flats.iter().map(|x| x.elements()).collect::<Vec<_>>()),
        })
    };
    let label = spec.label();
    let row = |prop: &str, v: Value| json!({"matroid": label, "divisor": text, "property": prop, "value": v});
    Ok(json!({
        "divisor": text,
        "P1": {"holds": p1.holds, "lift": p1.lift.as_ref().map(|l| l.to_json(m.n()))},
        "P2": cert(&p2),
        "P3": cert(&p3),
        "ample": cert(&ample),
        "big_and_nef": big_nef,
        "rows": [
            row("P1", p1.holds.into()),
            row("P2", p2.holds.into()),
            row("P3", p3.holds.into()),
            row("ample", ample.holds.into()),
            row("big_and_nef", big_nef.into()),
        ],
    }))
}

fn dhr(ring: &ChowRing, p: &Params) -> JobResult<Value> {
    let m = ring.matroid();
    let raw = match p.get("sets") {
        Some(v) => v,
        None => p.0,
    };
    let sets: Vec<Vec<usize>> = serde_json::from_value(raw.clone())
        .map_err(|e| JobError::new("PARSE", format!("dhr expects a list of subsets: {e}")))?;
    let masks = sets.iter().map(|s| mask_of(s, m.n())).collect::<Result<Vec<_>, _>>()?;
    let positive = beta_product_positive(ring, &masks)?;
    Ok(json!({
        "sets": sets,
        "dragon_hall_rado": m.dragon_hall_rado(&masks)?,
        "beta_positive": positive,
        "alpha_degree": u8::from(positive),
    }))
}

fn kv_scan(ring: &ChowRing, spec: &MatroidSpec, p: &Params) -> JobResult<Value> {
    let m = ring.matroid();
    let kt = KTheory::new(ring)?;
    let candidates = match p.divisor(m)? {
        Some(d) => vec![d],
        None => {
            // nef generators and their pairwise sums
            let max = p.uint("max", 50)? as usize;
            let gens = default_generators(ring)?;
            let mut out = gens.clone();
            for i in 0..gens.len() {
                for j in i + 1..gens.len() {
                    out.push(gens[i].add(&gens[j]));
                }
            }
            out.truncate(max);
            out
        }
    };
    let label = spec.label();
    let (mut rows, mut weak_bad, mut strong_bad) = (Vec::new(), 0, 0);
    for d in &candidates {
        let text = render_divisor(m, d);
        for (prop, scan) in [("kv_weak", kv_weak_scan(&kt, d)), ("kv_strong", kv_strong_scan(&kt, d))] {
            let value = match scan {
                Ok(s) => {
                    if !s.sign_ok {
                        if prop == "kv_weak" {
                            weak_bad += 1;
                        } else {
                            strong_bad += 1;
                        }
                    }
                    q_json(&s.value)
                }
                Err(Error::InfeasiblePrecondition(_)) => Value::String("skipped".into()),
                Err(e) => return Err(e.into()),
            };
            rows.push(json!({"matroid": label, "divisor": text, "property": prop, "value": value}));
        }
    }
    Ok(json!({
        "scanned": candidates.len(),
        "weak_sign_violations": weak_bad,
        "strong_sign_violations": strong_bad,
        "rows": rows,
    }))
}

fn identities(ring: &ChowRing, p: &Params) -> JobResult<Value> {
    let d = SuiteOptions::default();
    let opts = SuiteOptions {
        seed: p.uint("seed", d.seed)?,
        random_cases: p.uint("random_cases", d.random_cases as u64)? as usize,
        max_cases: p.uint("max_cases", d.max_cases as u64)? as usize,
    };
    let outcomes = match p.get("only") {
        None => identities::run_suite(ring, &opts)?,
        Some(Value::String(name)) => vec![identities::run_one(name, &KTheory::new(ring)?, &opts)?],
        Some(v) => return Err(JobError::new("PARSE", format!("params.only must be an identity name, got {v}"))),
    };
    let passed = outcomes.iter().all(|o| o.passed);
    Ok(json!({
        "passed": passed,
        "identities": outcomes,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(spec: MatroidSpec, command: Command, params: Value) -> JobSpec {
        JobSpec {
            matroid: spec,
            command,
            params,
            limit: None,
        }
    }

    #[test]
    fn chow_poly_u34() {
        let r = run(&job(MatroidSpec::Uniform { r: 3, n: 4 }, Command::ChowPoly, Value::Null)).unwrap();
        assert_eq!(r.results["coefficients"], json!([1, 7, 1]));
    }

    #[test]
    fn chi_u38() {
        let text = "−(4α − x{1,5} - x{1,6} - x{1,7} - x{1,8} - x{2,5} - x{2,6} - x{2,7} - x{2,8} \
                    - x{3,5} - x{3,6} - x{3,7} - x{3,8} - x{4,5} - x{4,6} - x{4,7} - x{4,8})";
        let r = run(&job(MatroidSpec::Uniform { r: 3, n: 8 }, Command::Chi, json!({"divisor": text}))).unwrap();
        assert_eq!(r.results["chi"], json!(3));
    }

    #[test]
    fn dhr_u34() {
        let r = run(&job(MatroidSpec::Uniform { r: 3, n: 4 }, Command::Dhr, json!([[1, 2], [3, 4]]))).unwrap();
        assert_eq!(r.results["beta_positive"], json!(true));
        let r = run(&job(MatroidSpec::Uniform { r: 3, n: 4 }, Command::Dhr, json!({"sets": [[1], [1]]}))).unwrap();
        assert_eq!(r.results["beta_positive"], json!(false));
    }

    #[test]
    fn error_codes() {
        let u34 = MatroidSpec::Uniform { r: 3, n: 4 };
        let e = run(&job(u34.clone(), Command::Chi, json!({"divisor": "2*alpha +"}))).unwrap_err();
        assert_eq!((e.code, e.exit_code()), ("PARSE", 2));
        let bases = MatroidSpec::Bases {
            n: 3,
            bases: vec![vec![1, 2], vec![1, 3]],
        };
        let e = run(&job(bases, Command::Chi, json!({"divisor": "x{1,2}"}))).unwrap_err();
        assert_eq!(e.code, "NOT_A_FLAT");
        let e = run(&job(u34.clone(), Command::Chi, Value::Null)).unwrap_err();
        assert_eq!(e.code, "INFEASIBLE_PRECONDITION");
        let mut j = job(MatroidSpec::Uniform { r: 3, n: 6 }, Command::Chow, Value::Null);
        j.limit = Some(10);
        let e = run(&j).unwrap_err();
        assert_eq!((e.code, e.exit_code()), ("CAPACITY", 3));
    }

    #[test]
    fn deterministic_reports() {
        let j = job(
            MatroidSpec::Uniform { r: 3, n: 5 },
            Command::NefCheck,
            json!({"divisor": "2*alpha - x{1,2} - x{3,4}"}),
        );
        let a = run(&j).unwrap().deterministic().to_string();
        let b = run(&j).unwrap().deterministic().to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_rows_for_scans() {
        let j = job(MatroidSpec::Uniform { r: 3, n: 4 }, Command::KvScan, json!({"max": 5}));
        let r = run(&j).unwrap();
        let rows = r.csv_rows();
        assert_eq!(rows[0], ["matroid", "divisor", "property", "value"]);
        assert_eq!(rows.len(), 1 + 2 * 5);
        assert_eq!(r.results["weak_sign_violations"], json!(0));
    }
}

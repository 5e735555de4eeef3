//! Dispatch of a job to the library and assembly of its report.

use brauer::field::place::{Place, PlaceKind};
use brauer::field::plane::{Line, Point};
use brauer::field::LayerKind;
use brauer::index::{exhibit_splitting_field, index, index_biquaternion_via_albert, period_index_scan};
use brauer::random::{random_arrangement_class, random_class, sample_rng};
use brauer::surgery::{kummer_kill_ramification, saltman_adjust, LocalRingSpec};
use brauer::symbol::{
    candidate_places, exponent, global_invariants, is_zero, laurent_decompose, ramification_divisor, second_residue_check, tame_residue,
    BrauerClass, KatoReport,
};
use brauer::witt::{albert_form, anisotropic_dimension_scan, is_hyperbolic, is_isotropic, u_bound, UBoundVariant};
use brauer::{Error, FieldTower};
use serde_json::{json, Map, Value};

use crate::job::{JobSpec, Verb};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_BUDGET: usize = 1000;

/// Why a job did not produce a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// A typed error from the library, or an input the verb cannot use.
    Domain(String),
    /// An internal consistency check fired (reciprocity, verification).
    Tripwire(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Tripwire(_) => 2,
        }
    }
    pub fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Tripwire(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvariantViolation(_) => Failure::Tripwire(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

/// The report of a successful job: `{verb, inputs, results, certificate}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub verb: Verb,
    pub inputs: Value,
    pub results: Value,
    pub certificate: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "verb": self.verb.name(),
            "inputs": self.inputs,
            "results": self.results,
            "certificate": self.certificate,
        })
    }
}

type Outcome = Result<(Value, Value), Failure>;

fn domain(msg: impl Into<String>) -> Failure {
    Failure::Domain(msg.into())
}

fn inputs(job: &JobSpec) -> Value {
    let o = &job.options;
    let mut opts = Map::new();
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            opts.insert(k.to_string(), v);
        }
    };
    put("seed", o.seed.map(Value::from));
    put("samples", o.samples.map(Value::from));
    put("budget", o.budget.map(Value::from));
    put("workers", o.workers.map(Value::from));
    put("n", o.n.map(Value::from));
    put("terms", o.terms.map(Value::from));
    put("max_deg", o.max_deg.map(Value::from));
    put("dim", o.dim.map(Value::from));
    put("place", o.place.clone().map(Value::from));
    put("center", o.center.map(|p| json!([p.x, p.y])));
    put("s", o.s.clone().map(Value::from));
    put("t", o.t.clone().map(Value::from));
    put("lambda", o.lambda.clone().map(Value::from));
    put("variant", o.variant.map(|v| serde_json::to_value(v).expect("serializable")));
    json!({
        "field": job.field.as_ref().map(|k| k.to_string()),
        "classes": job.classes.iter().map(|a| json!({"n": a.n(), "class": a.to_string()})).collect::<Vec<_>>(),
        "forms": job.forms.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "options": opts,
    })
}

/// Run a job. Scans and searches use only the job's seed, so equal jobs
/// produce equal reports.
pub fn run_job(job: &JobSpec) -> Result<Report, Failure> {
    let (results, certificate) = match job.verb {
        Verb::Residues => residues(job),
        Verb::Ramlocus => ramlocus(job),
        Verb::Exponent => exponent_verb(job),
        Verb::Index => index_verb(job),
        Verb::Iszero => iszero(job),
        Verb::Split => split(job),
        Verb::Scan => scan(job),
        Verb::Witt => witt(job),
        Verb::Albert => albert(job),
        Verb::Surgery => surgery(job),
        Verb::SplitSearch => split_search(job),
        Verb::Reciprocity => reciprocity(job),
        Verb::Kato => kato(job),
        Verb::UBound => ubound(job),
    }?;
    Ok(Report { verb: job.verb, inputs: inputs(job), results, certificate })
}

fn field(job: &JobSpec) -> Result<&FieldTower, Failure> {
    job.field.as_ref().ok_or_else(|| domain("a `field:` declaration is required"))
}

fn one_class(job: &JobSpec) -> Result<&BrauerClass, Failure> {
    match job.classes.as_slice() {
        [a] => Ok(a),
        cs => Err(domain(format!("verb `{}` takes exactly one class, got {}", job.verb, cs.len()))),
    }
}

fn seed(job: &JobSpec) -> u64 {
    job.options.seed.unwrap_or(DEFAULT_SEED)
}

fn samples(job: &JobSpec) -> usize {
    job.options.samples.unwrap_or(DEFAULT_SAMPLES)
}

fn residue_json(a: &BrauerClass, v: &Place) -> Result<Value, Failure> {
    let r = tame_residue(a, v)?;
    Ok(json!({
        "place": v.to_string(),
        "residue": r.rep.to_string(),
        "order": r.order(),
        "trivial": r.is_trivial(),
        "class": r.dlog,
    }))
}

fn residues(job: &JobSpec) -> Outcome {
    let a = one_class(job)?;
    let places = match &job.options.place {
        Some(p) => vec![Place::parse(a.field(), p)?],
        None => candidate_places(a)?,
    };
    let rows = places.iter().map(|v| residue_json(a, v)).collect::<Result<Vec<_>, _>>()?;
    Ok((json!({ "residues": rows }), Value::Null))
}

fn ramlocus(job: &JobSpec) -> Outcome {
    let a = one_class(job)?;
    let rows: Vec<Value> = ramification_divisor(a)?
        .iter()
        .map(|r| json!({"place": r.place.to_string(), "residue": r.rep.to_string(), "order": r.order()}))
        .collect();
    Ok((json!({ "places": rows }), Value::Null))
}

fn is_global(k: &FieldTower) -> bool {
    k.depth() == 1 && !k.is_closure() && k.layer(1).kind == LayerKind::Rational
}

fn invariants_json(a: &BrauerClass) -> Result<Vec<Value>, Failure> {
    Ok(global_invariants(a)?.iter().map(|i| json!({"place": i.place.to_string(), "invariant": i.to_string()})).collect())
}

fn exponent_verb(job: &JobSpec) -> Outcome {
    let a = one_class(job)?;
    let e = exponent(a)?;
    let k = a.field();
    let cert = if is_global(k) && !a.is_empty() {
        json!({ "invariants": invariants_json(a)? })
    } else if k.top().is_some_and(|l| l.kind == LayerKind::Laurent) {
        let s = laurent_decompose(a)?;
        json!({ "alpha0": s.alpha0.to_string(), "rho": s.rho.to_string() })
    } else {
        Value::Null
    };
    Ok((json!({ "exponent": e }), cert))
}

/// The entries `(a, b, c, d)` of `(a, b) + (c, d)` with `n = 2`.
fn biquaternion_entries(a: &BrauerClass) -> Option<[&brauer::FieldElem; 4]> {
    match a.terms() {
        [s, t] if a.n() == 2 && s.c == 1 && t.c == 1 => Some([&s.f, &s.g, &t.f, &t.g]),
        _ => None,
    }
}

fn index_verb(job: &JobSpec) -> Outcome {
    let a = one_class(job)?;
    let r = index(a)?;
    let mut results = json!({ "exponent": r.exponent, "index": r.index });
    if biquaternion_entries(a).is_some() {
        let albert = index_biquaternion_via_albert(a)?;
        if albert != r.index {
            return Err(Failure::Tripwire(format!("index {} disagrees with the Albert form index {albert} for {a}", r.index)));
        }
        results["albert_index"] = json!(albert);
    }
    Ok((results, serde_json::to_value(&r.certificate).expect("serializable")))
}

fn iszero(job: &JobSpec) -> Outcome {
    Ok((json!({ "zero": is_zero(one_class(job)?)? }), Value::Null))
}

fn split(job: &JobSpec) -> Outcome {
    let a = one_class(job)?;
    let w = exhibit_splitting_field(a, job.options.budget.unwrap_or(DEFAULT_BUDGET))?;
    let results = json!({ "degree": w.degree, "exponent": exponent(a)?, "steps": w.steps });
    let cert = json!({ "transcript": w.transcript, "candidates_tried": w.candidates_tried });
    Ok((results, cert))
}

fn scan(job: &JobSpec) -> Outcome {
    let k = field(job)?;
    let o = &job.options;
    let r = period_index_scan(
        k,
        o.n.unwrap_or(2),
        o.terms.unwrap_or(2),
        samples(job),
        seed(job),
        o.max_deg.unwrap_or(3),
        o.workers.unwrap_or(1),
    )?;
    if !r.brauer_ok {
        return Err(Failure::Tripwire("a sampled class violates exp | ind or rad(ind) = rad(exp)".into()));
    }
    Ok((serde_json::to_value(&r).expect("serializable"), Value::Null))
}

fn witt(job: &JobSpec) -> Outcome {
    let k = field(job)?;
    if !job.forms.is_empty() {
        let rows = job
            .forms
            .iter()
            .map(|q| {
                let hyperbolic = if q.dim() % 2 == 0 { Some(is_hyperbolic(q)?) } else { None };
                Ok(json!({ "form": q.to_string(), "dim": q.dim(), "isotropic": is_isotropic(q)?, "hyperbolic": hyperbolic }))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        return Ok((json!({ "forms": rows }), Value::Null));
    }
    let dim = job.options.dim.ok_or_else(|| domain("verb `witt` needs `form:` lines or a `dim:` option"))?;
    let r = anisotropic_dimension_scan(k, dim, samples(job), seed(job))?;
    let results = json!({
        "dim": r.dim,
        "samples": r.samples,
        "found_anisotropic": r.found_anisotropic,
        "witness": r.witness.as_ref().map(|q| q.to_string()),
        "canonical": r.canonical,
    });
    Ok((results, Value::Null))
}

fn albert(job: &JobSpec) -> Outcome {
    let a = one_class(job)?;
    let [p, q, r, s] = biquaternion_entries(a).ok_or_else(|| domain(format!("{a} is not (a, b) + (c, d) with n = 2")))?;
    let form = albert_form(p, q, r, s)?;
    let albert_index = index_biquaternion_via_albert(a)?;
    let recursion = index(a)?.index;
    if recursion != albert_index {
        return Err(Failure::Tripwire(format!("Albert index {albert_index} disagrees with the recursion index {recursion}")));
    }
    let results = json!({
        "form": form.to_string(),
        "isotropic": is_isotropic(&form)?,
        "hyperbolic": is_hyperbolic(&form)?,
        "index": albert_index,
    });
    Ok((results, json!({ "recursion_index": recursion })))
}

fn line_option(k: &FieldTower, s: &str) -> Result<Line, Failure> {
    match Place::parse(k, s)?.kind() {
        PlaceKind::Line(l) => Ok(*l),
        _ => Err(domain(format!("{s} is not a line"))),
    }
}

fn surgery(job: &JobSpec) -> Outcome {
    let a = one_class(job)?;
    let k = a.field();
    let gf = k.gf();
    let center = job.options.center.unwrap_or(Point { x: 0, y: 0 });
    let s = match &job.options.s {
        Some(s) => line_option(k, s)?,
        None => Line::new(1, 0, gf.neg(center.x), gf)?,
    };
    let t = match &job.options.t {
        Some(t) => line_option(k, t)?,
        None => Line::new(0, 1, gf.neg(center.y), gf)?,
    };
    let spec = LocalRingSpec::new(center, s, Some(t), gf)?;
    let r = saltman_adjust(a, &spec, a.n())?;
    if !r.verified {
        return Err(Failure::Tripwire(format!("adjusted class {} is still ramified at the center", r.adjusted)));
    }
    let results = json!({
        "case": r.case,
        "u": r.u.as_ref().map(|e| e.to_string()),
        "v": r.v.as_ref().map(|e| e.to_string()),
        "r": r.r,
        "second_residues": r.second_residues.map(|(x, y)| vec![x, y]),
        "adjusted": r.adjusted.to_string(),
        "verified": r.verified,
    });
    Ok((results, json!({ "scan": r.scan, "other_branches_clear": r.other_branches_clear })))
}

fn split_search(job: &JobSpec) -> Outcome {
    let first = job.classes.first().ok_or_else(|| domain("verb `split-search` needs at least one class"))?;
    let r = kummer_kill_ramification(&job.classes, first.n(), job.options.budget.unwrap_or(DEFAULT_BUDGET))?;
    let results = json!({
        "roots": r.roots.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "restricted_zero": r.restricted_zero,
        "candidates_tried": r.candidates_tried,
    });
    Ok((results, json!({ "transcript": r.transcript })))
}

fn reciprocity(job: &JobSpec) -> Outcome {
    if !job.classes.is_empty() {
        let mut rows = Vec::new();
        for a in &job.classes {
            let invs = global_invariants(a)?;
            let sum: u64 = invs.iter().map(|i| i.j as u64).sum();
            let ok = sum.is_multiple_of(a.n() as u64);
            if !ok {
                return Err(Failure::Tripwire(format!("local invariants of {a} sum to {sum}/{}", a.n())));
            }
            rows.push(json!({ "class": a.to_string(), "ok": ok, "invariants": invariants_json(a)? }));
        }
        let cert = json!({ "classes": rows });
        return Ok((json!({ "ok": true }), cert));
    }
    let k = field(job)?;
    let o = &job.options;
    let (n, terms, max_deg) = (o.n.unwrap_or(2), o.terms.unwrap_or(3), o.max_deg.unwrap_or(3));
    for i in 0..samples(job) {
        let a = random_class(k, n, terms, max_deg, &mut sample_rng(seed(job), i as u64))?;
        let sum: u64 = global_invariants(&a)?.iter().map(|inv| inv.j as u64).sum();
        if !sum.is_multiple_of(n as u64) {
            return Err(Failure::Tripwire(format!("sample {i}: local invariants of {a} sum to {sum}/{n}")));
        }
    }
    Ok((json!({ "ok": true, "samples": samples(job) }), Value::Null))
}

fn kato_points(r: &KatoReport, k: &FieldTower) -> Vec<Value> {
    r.points
        .iter()
        .map(|p| {
            let contributions: Vec<Value> =
                p.contributions.iter().map(|(l, c)| json!({ "line": l.to_elem(k).to_string(), "value": c })).collect();
            json!({ "point": [p.point.x, p.point.y], "contributions": contributions, "sum": p.sum })
        })
        .collect()
}

fn kato(job: &JobSpec) -> Outcome {
    if !job.classes.is_empty() {
        let a = one_class(job)?;
        let r = second_residue_check(a)?;
        if !r.ok {
            return Err(Failure::Tripwire(format!("second residues of {a} do not cancel")));
        }
        return Ok((json!({ "ok": true, "l": r.l, "points": r.points.len() }), json!({ "points": kato_points(&r, a.field()) })));
    }
    let k = field(job)?;
    let o = &job.options;
    let (n, terms) = (o.n.unwrap_or(2), o.terms.unwrap_or(2));
    let mut points = 0;
    for i in 0..samples(job) {
        let a = random_arrangement_class(k, n, terms, 4, &mut sample_rng(seed(job), i as u64))?;
        let r = second_residue_check(&a)?;
        if !r.ok {
            return Err(Failure::Tripwire(format!("sample {i}: second residues of {a} do not cancel")));
        }
        points += r.points.len();
    }
    Ok((json!({ "ok": true, "samples": samples(job), "points": points }), Value::Null))
}

fn ubound(job: &JobSpec) -> Outcome {
    let lambdas = job.options.lambda.as_ref().ok_or_else(|| domain("verb `u-bound` needs a `lambda:` option"))?;
    let variant = job.options.variant.unwrap_or(UBoundVariant::Improved);
    Ok((json!({ "bound": u_bound(lambdas, variant)? }), Value::Null))
}

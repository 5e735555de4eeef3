//! Acceptance suite: one PASS/FAIL line per criterion, with pinned sample
//! counts, thresholds and runtime limits. Runs without the libtest harness
//! so every line is printed; exits nonzero if any criterion fails.

use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use brauer::field::plane::{Line, Point};
use brauer::field::{FieldElem, FieldTower};
use brauer::index::{exhibit_splitting_field, index, index_biquaternion_via_albert, SplitStep};
use brauer::random::{random_arrangement_class, random_class, random_elem, random_origin_instance, sample_rng};
use brauer::surgery::{saltman_adjust, LocalRingSpec, SurgeryCase};
use brauer::symbol::{is_zero, reciprocity_check, second_residue_check, BrauerClass};
use brauer::witt::{anisotropic_dimension_scan, is_isotropic, pfister, random_form, u_bound, QuadForm, UBoundVariant};
use brauer::Error;
use rand::Rng;

/// Candidate budget for splitting-field searches.
const SPLIT_BUDGET: usize = 1000;
/// Minimum share of splitting-field searches that must succeed.
const SPLIT_SUCCESS_RATE: f64 = 0.95;

type Outcome = Result<String, String>;

fn field(s: &str) -> FieldTower {
    FieldTower::parse(s).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: brauer::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// 1. The biquaternion `(x, g) + (x + 1, y)` over `F_5(x)((y))`.
fn biquaternion_example() -> Outcome {
    let a = lib(BrauerClass::parse(&field("Fq(5,1)(x)((y))"), 2, "(x, g) + (x+1, y)"))?;
    let r = lib(index(&a))?;
    let albert = lib(index_biquaternion_via_albert(&a))?;
    check((r.exponent, r.index) == (2, 4), || format!("recursion gave exponent {}, index {}", r.exponent, r.index))?;
    check(albert == r.index, || format!("Albert path gave index {albert}"))?;
    Ok(format!("exponent {}, index {} (recursion) = {albert} (Albert)", r.exponent, r.index))
}

/// 2. The iterated examples for d = 3, 4 over `Fpbar(x)((x_2))...((x_d))`.
fn iterated_examples() -> Outcome {
    let cases = [
        ("Fpbar(5)(x)((x2))((x3))", "(x+1, x2) + (x+2, x3)", 4),
        ("Fpbar(5)(x)((x2))((x3))((x4))", "(x+1, x2) + (x+2, x3) + (x+3, x4)", 8),
    ];
    let mut found = Vec::new();
    for (k, s, want) in cases {
        let a = lib(BrauerClass::parse(&field(k), 2, s))?;
        let r = lib(index(&a))?;
        check((r.exponent, r.index) == (2, want), || format!("{s} over {k}: exponent {}, index {}", r.exponent, r.index))?;
        if a.terms().len() == 2 {
            let albert = lib(index_biquaternion_via_albert(&a))?;
            check(albert == want, || format!("Albert path gave {albert} for {s}"))?;
        }
        found.push(format!("d={}: {}", k.matches("((").count() + 1, r.index));
    }
    Ok(format!("index {} with exponent 2", found.join(", ")))
}

/// 3. Global fields: index = exponent, and splitting fields of degree = exponent.
fn hasse_shadow() -> Outcome {
    let per_field = 500;
    let (mut total, mut split_ok) = (0usize, 0usize);
    for (fi, k) in ["Fq(5,1)(t)", "Fq(13,1)(t)"].into_iter().enumerate() {
        let k = field(k);
        for i in 0..per_field as u64 {
            let mut rng = sample_rng(300 + fi as u64, i);
            let n = if rng.gen_bool(0.5) { 2 } else { 4 };
            let terms = rng.gen_range(1..=3);
            let a = lib(random_class(&k, n, terms, 3, &mut rng))?;
            let r = lib(index(&a))?;
            check(r.index == r.exponent, || format!("{a}: index {} != exponent {}", r.index, r.exponent))?;
            total += 1;
            match exhibit_splitting_field(&a, SPLIT_BUDGET) {
                Ok(w) => {
                    let degree: u32 = w
                        .steps
                        .iter()
                        .map(|s| match s {
                            SplitStep::Constant { degree } | SplitStep::Kummer { degree, .. } => *degree,
                        })
                        .product();
                    check(w.degree == r.exponent && degree.max(1) == w.degree, || format!("{a}: witness of degree {}", w.degree))?;
                    check(w.transcript.iter().all(|row| row.transported == "0"), || format!("{a}: witness leaves an invariant"))?;
                    split_ok += 1;
                }
                Err(Error::SearchExhausted(_)) => {}
                Err(e) => return Err(format!("{a}: splitting search failed with {e}")),
            }
        }
    }
    let rate = split_ok as f64 / total as f64;
    check(rate >= SPLIT_SUCCESS_RATE, || format!("splitting fields found for {split_ok}/{total}"))?;
    Ok(format!("index = exponent on {total}/{total}; splitting field of degree = exponent for {split_ok}/{total} (>= {SPLIT_SUCCESS_RATE})"))
}

/// 4. `Fpbar(x)((y))`: index = exponent.
fn tsen_shadow() -> Outcome {
    let k = field("Fpbar(5)(x)((y))");
    let mut exps = [0usize; 2];
    for i in 0..200 {
        let a = lib(random_class(&k, 2, 2, 3, &mut sample_rng(400, i)))?;
        let r = lib(index(&a))?;
        check(r.index == r.exponent, || format!("{a}: index {} != exponent {}", r.index, r.exponent))?;
        exps[(r.exponent == 2) as usize] += 1;
    }
    Ok(format!("index = exponent on 200/200 ({} of exponent 2)", exps[1]))
}

/// 5. Reciprocity over `F_5(t)`, in the library and through the CLI tripwire.
fn reciprocity() -> Outcome {
    let k = field("Fq(5,1)(t)");
    for i in 0..1000 {
        let mut rng = sample_rng(500, i);
        let n = if rng.gen_bool(0.5) { 2 } else { 4 };
        let terms = rng.gen_range(1..=3);
        let a = lib(random_class(&k, n, terms, 3, &mut rng))?;
        check(lib(reciprocity_check(&a))?, || format!("{a}: invariants do not sum to zero"))?;
    }
    for n in [2, 4] {
        let job = format!("field: Fq(5,1)(t)\nverb: reciprocity\nn: {n}\nsamples: 500\nseed: 5\n");
        let (code, _) = run_cli(&job, &[]);
        check(code == Some(0), || format!("CLI reciprocity scan (n = {n}) exited with {code:?}"))?;
    }
    Ok("0 failures on 1000 classes; CLI scans exit 0".into())
}

/// 6. Residues of residues on random line arrangements.
fn kato_complex() -> Outcome {
    let k = field("Fq(5,1)(x)(y)");
    let mut points = 0;
    for i in 0..500 {
        let a = lib(random_arrangement_class(&k, 2, 2, 4, &mut sample_rng(600, i)))?;
        let r = lib(second_residue_check(&a))?;
        check(r.ok, || format!("{a}: second residues do not cancel"))?;
        points += r.points.len();
    }
    Ok(format!("500 classes, {points} intersection points, all sums zero"))
}

/// 7. Surgery at the origin of the plane over `F_5`.
fn surgery() -> Outcome {
    let k = field("Fq(5,1)(x)(y)");
    let gf = k.gf();
    let spec = lib(LocalRingSpec::new(
        Point { x: 0, y: 0 },
        lib(Line::new(1, 0, 0, gf))?,
        Some(lib(Line::new(0, 1, 0, gf))?),
        gf,
    ))?;
    let mut report = Vec::new();
    for (case, crossing) in [(SurgeryCase::Ii, false), (SurgeryCase::Iii, true)] {
        let (mut done, mut drawn) = (0, 0u64);
        while done < 100 {
            check(drawn < 5000, || format!("only {done} instances of {case:?} in {drawn} draws"))?;
            let a = lib(random_origin_instance(&k, 2, crossing, &mut sample_rng(700 + crossing as u64, drawn)))?;
            drawn += 1;
            let r = lib(saltman_adjust(&a, &spec, 2))?;
            if r.case != case {
                continue;
            }
            check(r.verified, || format!("{a}: adjusted class fails the residue scan"))?;
            let again = lib(saltman_adjust(&r.adjusted, &spec, 2))?;
            check(again.case == SurgeryCase::I, || format!("{a}: adjusting twice is not case i"))?;
            done += 1;
        }
        report.push(format!("{case:?}: 100/100"));
    }
    Ok(format!("{} verified and idempotent", report.join(", ")))
}

/// 8. Probes of the u-invariant.
fn u_invariant_probes() -> Outcome {
    let kt = field("Fq(5,1)(t)");
    let scan = lib(anisotropic_dimension_scan(&kt, 5, 1000, 800))?;
    check(!scan.found_anisotropic, || format!("anisotropic 5-dim form over F_5(t): {:?}", scan.witness.map(|q| q.to_string())))?;
    let w = lib(QuadForm::parse(&kt, "1, -g, -t, g*t"))?;
    check(!lib(is_isotropic(&w))?, || format!("{w} is isotropic"))?;
    let kl = field("Fq(5,1)((x))((y))");
    let vars = ["g", "x", "y"].map(|s| FieldElem::parse(&kl, s).unwrap());
    let p = lib(pfister(&vars))?;
    check(!lib(is_isotropic(&p))?, || format!("{p} is isotropic"))?;
    for i in 0..200 {
        let q = lib(random_form(&kl, 9, 2, &mut sample_rng(801, i)))?;
        check(lib(is_isotropic(&q))?, || format!("{q} is anisotropic"))?;
    }
    Ok(format!("F_5(t): 1000 dim-5 samples isotropic, {w} anisotropic; F_5((x))((y)): <<g, x, y>> anisotropic, 200 dim-9 samples isotropic"))
}

/// 9. The improved bound from symbol lengths (1, 2, 1).
fn u_bound_value() -> Outcome {
    let b = lib(u_bound(&[1, 2, 1], UBoundVariant::Improved))?;
    check(b == 12, || format!("bound {b}"))?;
    Ok(format!("u <= {b}"))
}

/// 10. `(f, -f)`, `(f, 1 - f)` and `(f, g) + (g, f)` vanish.
fn relations() -> Outcome {
    let k = field("Fq(5,1)(t)");
    let one = FieldElem::one(&k);
    let mut counts = [0usize; 3];
    for i in 0..200 {
        let mut rng = sample_rng(1000, i);
        let n = if rng.gen_bool(0.5) { 2 } else { 4 };
        let (f, g) = (random_elem(&k, 3, &mut rng), random_elem(&k, 3, &mut rng));
        let mut one_minus = &one - &f;
        while one_minus.is_zero() {
            let f2 = random_elem(&k, 3, &mut rng);
            one_minus = &one - &f2;
        }
        let f1 = &one - &one_minus;
        let classes = [
            vec![(1, f.clone(), -&f)],
            vec![(1, f1, one_minus)],
            vec![(1, f.clone(), g.clone()), (1, g.clone(), f.clone())],
        ];
        for (j, terms) in classes.into_iter().enumerate() {
            let a = lib(BrauerClass::new(&k, n, terms))?;
            check(lib(is_zero(&a))?, || format!("{a} is not zero"))?;
            counts[j] += 1;
        }
    }
    Ok(format!("(f,-f): {}/200, (f,1-f): {}/200, (f,g)+(g,f): {}/200 zero", counts[0], counts[1], counts[2]))
}

fn run_cli(job: &str, args: &[&str]) -> (Option<i32>, Vec<u8>) {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_brauer"))
        .arg("--json")
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("brauer binary runs");
    child.stdin.take().unwrap().write_all(job.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code(), out.stdout)
}

/// 11. Scans rerun with the same seed print byte-identical JSON.
fn determinism() -> Outcome {
    let jobs = [
        "field: Fq(5,1)(t)\nverb: scan\nn: 4\nterms: 3\nsamples: 60\nseed: 11\n",
        "field: Fq(7,1)(x)((y))\nverb: scan\nn: 6\nterms: 2\nmax_deg: 2\nsamples: 40\nseed: 12\n",
        "field: Fpbar(5)(x)((y))\nverb: scan\nn: 2\nsamples: 40\nseed: 13\n",
        "field: Fq(5,1)(t)\nverb: witt\ndim: 5\nsamples: 40\nseed: 14\n",
        "field: Fq(5,1)(x)(y)\nverb: kato\nsamples: 40\nseed: 15\n",
        "field: Fq(5,1)(t)\nverb: reciprocity\nn: 4\nsamples: 100\nseed: 16\n",
    ];
    for job in jobs {
        let (c1, a) = run_cli(job, &[]);
        let (c2, b) = run_cli(job, &[]);
        check(c1 == Some(0) && c2 == Some(0), || format!("exit codes {c1:?}, {c2:?} for\n{job}"))?;
        check(a == b, || format!("outputs differ for\n{job}"))?;
        let (_, four) = run_cli(job, &["--workers", "4"]);
        let mut x: serde_json::Value = serde_json::from_slice(&a).unwrap();
        let mut y: serde_json::Value = serde_json::from_slice(&four).unwrap();
        for v in [&mut x, &mut y] {
            v["inputs"]["options"].as_object_mut().unwrap().remove("workers");
        }
        check(x == y, || format!("results depend on the worker count for\n{job}"))?;
    }
    Ok(format!("{} scan jobs byte-identical across reruns and worker counts", jobs.len()))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "biquaternion over F_5(x)((y))", Duration::from_secs(1), biquaternion_example),
        (2, "iterated examples d = 3, 4", Duration::from_secs(5), iterated_examples),
        (3, "global fields: index = exponent, splitting fields", Duration::from_secs(60), hasse_shadow),
        (4, "Fpbar(x)((y)): index = exponent", Duration::from_secs(30), tsen_shadow),
        (5, "reciprocity tripwire", Duration::from_secs(30), reciprocity),
        (6, "residue complex on line arrangements", Duration::from_secs(60), kato_complex),
        (7, "surgery at the origin", Duration::from_secs(30), surgery),
        (8, "u-invariant probes", Duration::from_secs(120), u_invariant_probes),
        (9, "u-bound (improved, 1,2,1) = 12", Duration::from_secs(1), u_bound_value),
        (10, "symbol relations vanish", Duration::from_secs(30), relations),
        (11, "deterministic scans", Duration::from_secs(120), determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || id.to_string() == *f) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if elapsed <= limit {
                Ok(d)
            } else {
                Err(format!("{d}; exceeded the {:.0?} limit", limit))
            }
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{id:>2}] {name}: {detail} ({:.2}s / limit {}s)", elapsed.as_secs_f64(), limit.as_secs());
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

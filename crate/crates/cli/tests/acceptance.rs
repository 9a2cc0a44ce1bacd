//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use std::path::{Path, PathBuf};
use std::process::Command;

use loccgate::cuts::{schmidt_vector, Cut};
use loccgate::majorization::{jonathan_plenio_possible, majorizes, nielsen_possible, Ensemble};
use loccgate::oracle::{majorizes_by_t_transforms, reduced_spectrum};
use loccgate::proposition::{build_full_basis_witness, pairwise_cuts, BasisSpec};
use loccgate::random::{random_basis, random_state, rng_from_seed};
use loccgate::statekit::{a_family_states, bell_states, build_family, FamilySpec};
use loccgate::witness::{build_superposition, check_indistinguishable, WitnessOptions};
use loccgate::{PairedCut, StateSet, Tolerances, Verdict, WitnessProblem};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn loccgate(args: &[&str], threads: Option<usize>) -> Result<(String, i32), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_loccgate"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("LOCCGATE_THREADS", n.to_string()),
        None => cmd.env_remove("LOCCGATE_THREADS"),
    };
    let out = cmd.output().map_err(|e| format!("cannot run loccgate: {e}"))?;
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    Ok((stdout, out.status.code().unwrap_or(-1)))
}

fn last_line(stdout: &str) -> &str {
    stdout.lines().last().unwrap_or("")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn witness_report(family: FamilySpec, probs: Option<Vec<f64>>) -> Result<(WitnessProblem, loccgate::WitnessReport), String> {
    let tol = Tolerances::default();
    let fam = build_family(family).map_err(|e| e.to_string())?;
    let k = fam.states.len();
    let problem = WitnessProblem::new(
        fam.states,
        fam.detectors.ok_or("family has no detectors")?,
        probs.unwrap_or_else(|| vec![1.0 / k as f64; k]),
        &tol,
    )
    .map_err(|e| e.to_string())?;
    let n = problem.state_parties();
    let cut = PairedCut::default_for(n, n).map_err(|e| e.to_string())?;
    let report = check_indistinguishable(&problem, &cut, &tol, WitnessOptions::default()).map_err(|e| e.to_string())?;
    Ok((problem, report))
}

fn bell_witness() -> Outcome {
    let (_, report) = witness_report(FamilySpec::Bell4, None)?;
    let largest = report.source_spectrum()[0];
    ensure(largest >= 1.0 - 1e-9, || format!("AC:BD largest coefficient {largest}"))?;
    let m = report.majorization();
    ensure(m.failing_prefix == Some(1), || format!("fails at prefix {:?}", m.failing_prefix))?;
    let margin = m.prefix_margins[0];
    ensure((margin + 0.5).abs() <= 1e-9, || format!("k=1 margin {margin}"))?;
    ensure(report.verdict == Verdict::Indistinguishable, || format!("verdict {}", report.verdict))?;
    Ok(format!("rank 1 across AC:BD, k=1 margin {margin}, {}", report.verdict))
}

fn ghz_witness() -> Outcome {
    let (problem, report) = witness_report(FamilySpec::Ghz8, None)?;
    let joint = build_superposition(&problem, &Tolerances::default()).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        let cut = Cut::split(&[j, j + 3], 6).map_err(|e| e.to_string())?;
        let largest = schmidt_vector(&joint, &cut).map_err(|e| e.to_string())?.largest();
        worst = worst.max(1.0 - largest);
    }
    ensure(worst <= 1e-8, || format!("deviation from rank 1: {worst}"))?;
    ensure(report.verdict == Verdict::Indistinguishable, || format!("verdict {}", report.verdict))?;
    Ok(format!("rank 1 across AD, BE, CF (deviation {worst:e}), {}", report.verdict))
}

fn proposition_properties() -> Outcome {
    let mut rng = rng_from_seed(2002);
    let (mut worst_product, mut worst_dev): (f64, f64) = (0.0, 0.0);
    for dims in [vec![2, 2], vec![2, 3], vec![3, 3]] {
        let reference = build_full_basis_witness(&BasisSpec::computational(dims.clone()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let vectors = random_basis(&dims, &mut rng).map_err(|e| e.to_string())?;
            let basis = BasisSpec::new(dims.clone(), vectors, 1e-9).map_err(|e| e.to_string())?;
            let w = build_full_basis_witness(&basis).map_err(|e| e.to_string())?;
            for cut in pairwise_cuts(dims.len()) {
                let largest = schmidt_vector(&w, &cut).map_err(|e| e.to_string())?.largest();
                worst_product = worst_product.max(1.0 - largest);
            }
            let dev = w
                .amps()
                .iter()
                .zip(reference.amps())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst_dev = worst_dev.max(dev);
        }
    }
    ensure(worst_product <= 1e-8, || format!("product deviation {worst_product}"))?;
    ensure(worst_dev <= 1e-9, || format!("basis dependence {worst_dev}"))?;
    Ok(format!(
        "150 Haar bases: product within {worst_product:.1e}, basis-independent within {worst_dev:.1e}"
    ))
}

fn s_versus_s_prime() -> Outcome {
    let s = data("s_set.json");
    let omega = data("omega_basis.json");
    let args = ["oneway", s.to_str().unwrap(), "--party", "0", "--basis-file", omega.to_str().unwrap()];
    let (out, code) = loccgate(&args, None)?;
    let oneway = last_line(&out).to_string();
    ensure(code == 0 && oneway == "DISTINGUISHABLE_BY_PROTOCOL", || format!("oneway on S: {oneway} (exit {code})"))?;
    let sp = data("s_prime.json");
    let (out, code) = loccgate(&["check", sp.to_str().unwrap(), "--probs", "0.16,0.16,0.68"], None)?;
    let check = last_line(&out).to_string();
    ensure(code == 0 && check == "INDISTINGUISHABLE", || format!("check on S': {check} (exit {code})"))?;
    Ok(format!("S {oneway}, S' {check}"))
}

fn sweep(probs: &str) -> Result<Value, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("sweep.json");
    let args = ["sweep", "--family", "a-family", "--probs", probs, "--grid", "0.001:0.999:0.001", "--out", path.to_str().unwrap()];
    let (_, code) = loccgate(&args, None)?;
    ensure(code == 0, || format!("sweep exited with {code}"))?;
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn rows(report: &Value) -> Vec<(f64, String)> {
    report["rows"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|r| (r["a"].as_f64().unwrap_or(f64::NAN), r["verdict"].as_str().unwrap_or("").to_string()))
        .collect()
}

fn verdict_at(a: f64, probs: &[f64]) -> Result<Verdict, String> {
    let tol = Tolerances::default();
    let states = StateSet::new(a_family_states(a).map_err(|e| e.to_string())?, tol.orth).map_err(|e| e.to_string())?;
    let problem =
        WitnessProblem::new(states, bell_states()[..3].to_vec(), probs.to_vec(), &tol).map_err(|e| e.to_string())?;
    let cut = PairedCut::default_for(2, 2).map_err(|e| e.to_string())?;
    Ok(check_indistinguishable(&problem, &cut, &tol, WitnessOptions::default())
        .map_err(|e| e.to_string())?
        .verdict)
}

fn a_family_uniform() -> Outcome {
    let report = sweep("uniform")?;
    let bounds: Vec<&Value> = report["boundaries"].as_array().into_iter().flatten().collect();
    ensure(bounds.len() == 2, || format!("{} boundaries found", bounds.len()))?;
    let field = |b: &Value, k: &str| b[k].as_f64().unwrap_or(f64::NAN);
    let (lo, hi) = (field(bounds[0], "estimate"), field(bounds[1], "estimate"));
    ensure((lo - 0.0252632).abs() <= 1e-4, || format!("lower boundary {lo}"))?;
    ensure((hi - 0.999681).abs() <= 1e-4, || format!("upper boundary {hi}"))?;
    for (a, verdict) in rows(&report) {
        let inside = a > lo && a < hi;
        let ok = if inside {
            verdict == "INDISTINGUISHABLE"
        } else {
            verdict == "INCONCLUSIVE" || verdict == "BOUNDARY"
        };
        ensure(ok, || format!("a = {a}: {verdict} ({})", if inside { "inside" } else { "outside" }))?;
    }
    let uniform = [1.0 / 3.0; 3];
    for b in &bounds {
        for a in [field(b, "estimate"), field(b, "outside")] {
            let v = verdict_at(a, &uniform)?;
            ensure(v != Verdict::Indistinguishable, || format!("endpoint a = {a}: {v}"))?;
        }
    }
    Ok(format!("boundaries {lo:.7} and {hi:.7}; verdicts consistent on 999 points"))
}

fn a_family_tuned() -> Outcome {
    let report = sweep("0.25,0.25,0.5")?;
    let rows = rows(&report);
    ensure(rows.len() == 999, || format!("{} rows", rows.len()))?;
    if let Some((a, v)) = rows.iter().find(|(_, v)| v != "INDISTINGUISHABLE") {
        return Err(format!("a = {a}: {v}"));
    }
    Ok("INDISTINGUISHABLE at all 999 grid points".into())
}

fn random_dims<R: Rng>(rng: &mut R, max_total: usize) -> Vec<usize> {
    loop {
        let n = rng.random_range(2..=4);
        let dims: Vec<usize> = (0..n).map(|_| rng.random_range(1..=4)).collect();
        if dims.iter().product::<usize>() <= max_total {
            return dims;
        }
    }
}

fn random_cut<R: Rng>(rng: &mut R, n: usize) -> Cut {
    loop {
        let left: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if !left.is_empty() && left.len() < n {
            return Cut::split(&left, n).expect("valid split");
        }
    }
}

fn schmidt_oracle() -> Outcome {
    let mut rng = rng_from_seed(0xacce);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let dims = random_dims(&mut rng, 256);
        let state = random_state(&dims, &mut rng).map_err(|e| e.to_string())?;
        let cut = random_cut(&mut rng, dims.len());
        let svd = schmidt_vector(&state, &cut).map_err(|e| e.to_string())?;
        let eig = reduced_spectrum(&state, cut.left());
        let len = eig.len().max(svd.len());
        for i in 0..len {
            let s = svd.probs().get(i).copied().unwrap_or(0.0);
            let e = eig.get(i).copied().unwrap_or(0.0);
            worst = worst.max((s - e).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("max elementwise difference {worst}"))?;
    Ok(format!("200 states, max difference {worst:.1e}"))
}

fn descending_grid_vectors() -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in (0..=remaining.min(max)).rev() {
            cur.push(v);
            rec(remaining - v, v, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=4 {
        rec(10, 10, len, &mut Vec::new(), &mut out);
    }
    out
}

fn criterion_consistency() -> Outcome {
    let mut rng = rng_from_seed(42);
    for trial in 0..500 {
        let dims = random_dims(&mut rng, 64);
        let cut = random_cut(&mut rng, dims.len());
        let source = random_state(&dims, &mut rng).map_err(|e| e.to_string())?;
        let target = random_state(&dims, &mut rng).map_err(|e| e.to_string())?;
        let ensemble = Ensemble::new(vec![(1.0, target.clone())], 1e-9).map_err(|e| e.to_string())?;
        let jp = jonathan_plenio_possible(&source, &cut, &ensemble, &cut, 1e-9).map_err(|e| e.to_string())?;
        let ni = nielsen_possible(&source, &target, &cut, 1e-9).map_err(|e| e.to_string())?;
        ensure(jp == ni, || format!("trial {trial}: singleton ensemble differs from Nielsen"))?;
    }
    let vectors = descending_grid_vectors();
    let mut pairs = 0;
    for x in &vectors {
        for y in &vectors {
            let px: Vec<f64> = x.iter().map(|&v| v as f64 / 10.0).collect();
            let py: Vec<f64> = y.iter().map(|&v| v as f64 / 10.0).collect();
            let fast = majorizes(&px, &py, 1e-9).map_err(|e| e.to_string())?.holds;
            let units = |v: &[u32]| v.iter().map(|&u| 2 * u).collect::<Vec<_>>();
            let slow = majorizes_by_t_transforms(&units(x), &units(y), 3);
            ensure(fast == slow, || format!("x = {px:?}, y = {py:?}: {fast} vs {slow}"))?;
            pairs += 1;
        }
    }
    Ok(format!("500 singleton ensembles agree; {pairs} grid pairs agree with T-transforms"))
}

fn search_determinism() -> Outcome {
    let file = data("a_family_0.01.json");
    let args = ["search", file.to_str().unwrap(), "--resolution", "20", "--seed", "7"];
    let mut reports = Vec::new();
    for threads in [1, 4] {
        for _ in 0..3 {
            let (out, code) = loccgate(&args, Some(threads))?;
            ensure(code == 0, || format!("search exited with {code}"))?;
            reports.push(out);
        }
    }
    ensure(reports.windows(2).all(|w| w[0] == w[1]), || "reports differ".into())?;
    Ok(format!("6 runs bit-identical ({} bytes)", reports[0].len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Bell full-basis witness", bell_witness),
        ("GHZ witness", ghz_witness),
        ("proposition property suite", proposition_properties),
        ("S vs S'", s_versus_s_prime),
        ("a-family, uniform p", a_family_uniform),
        ("a-family, p = (1/4, 1/4, 1/2)", a_family_tuned),
        ("Schmidt oracle", schmidt_oracle),
        ("criterion consistency", criterion_consistency),
        ("search determinism", search_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

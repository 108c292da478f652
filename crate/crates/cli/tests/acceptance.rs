//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use tempfile::TempDir;

use sdepth_core::bounds::{bound_report, depth_cycle_quotient, depth_line_quotient, BoundTarget};
use sdepth_core::certificate::{PosetKind, PosetSource};
use sdepth_core::format::write_ideal;
use sdepth_core::poset::{poset_of_ideal, poset_of_ideal_quotient, poset_of_quotient};
use sdepth_core::{
    alpha_test, cycle_ideal, decide_at_least, line_ideal, minimalize, naive_oracle, sdepth_exact,
    verify_partition, veronese_ideal, CertificateDocument, Decision, Monomial, MonomialIdeal,
    SdepthValue, SearchOptions, SubsetPoset,
};

type Outcome = Result<String, String>;

struct Ctx {
    dir: TempDir,
    /// Certificate files written by the exactness criteria.
    certificates: Vec<PathBuf>,
    line_values: Vec<(usize, usize)>,
    cycle_values: Vec<(usize, usize)>,
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sdepth"))
}

impl Ctx {
    fn save_ideal(&self, name: &str, ideal: &MonomialIdeal) -> PathBuf {
        let path = self.dir.path().join(name);
        if !path.exists() {
            fs::write(&path, write_ideal(ideal)).unwrap();
        }
        path
    }

    /// Runs the exact search under `budget` and checks the value; the
    /// certificate is kept for the integrity criterion.
    fn exact(
        &mut self,
        label: &str,
        poset: &SubsetPoset,
        source: PosetSource,
        expected: usize,
        budget: Duration,
    ) -> Result<Duration, String> {
        let options = SearchOptions {
            timeout: Some(budget),
            ..SearchOptions::default()
        };
        let start = Instant::now();
        let result = sdepth_exact(poset, None, &options);
        let elapsed = start.elapsed();
        if result.inconclusive {
            return Err(format!("{label}: inconclusive within {budget:?}"));
        }
        if result.value != SdepthValue::Finite(expected) {
            return Err(format!(
                "{label}: got {}, expected {expected}",
                result.value
            ));
        }
        if elapsed > budget {
            return Err(format!("{label}: took {elapsed:?}, budget {budget:?}"));
        }
        let cert = result
            .certificate
            .ok_or(format!("{label}: no certificate"))?;
        let path = self.dir.path().join(format!("{label}.cert.json"));
        fs::write(&path, CertificateDocument::new(source, &cert).to_json()).unwrap();
        self.certificates.push(path);
        Ok(elapsed)
    }

    fn quotient_source(&self, name: &str, ideal: &MonomialIdeal) -> PosetSource {
        PosetSource {
            kind: PosetKind::Quotient,
            ideal_file: self.save_ideal(name, ideal),
            ideal2_file: None,
        }
    }
}

fn line_exactness(ctx: &mut Ctx) -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 3..=12 {
        let ideal = line_ideal(n).unwrap();
        let source = ctx.quotient_source(&format!("I{n}.ideal"), &ideal);
        let poset = poset_of_quotient(&ideal).unwrap();
        let expected = ceil_div(n, 3);
        let t = ctx.exact(
            &format!("S_I{n}"),
            &poset,
            source,
            expected,
            Duration::from_secs(10),
        )?;
        slowest = slowest.max(t);
        ctx.line_values.push((n, expected));
    }
    Ok(format!("n = 3..12 match ceil(n/3), slowest {slowest:.1?}"))
}

fn cycle_exactness(ctx: &mut Ctx) -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in [3, 5, 6, 8, 9, 11, 12] {
        let ideal = cycle_ideal(n).unwrap();
        let source = ctx.quotient_source(&format!("J{n}.ideal"), &ideal);
        let poset = poset_of_quotient(&ideal).unwrap();
        let expected = ceil_div(n - 1, 3);
        let t = ctx.exact(
            &format!("S_J{n}"),
            &poset,
            source,
            expected,
            Duration::from_secs(30),
        )?;
        slowest = slowest.max(t);
        ctx.cycle_values.push((n, expected));
    }
    Ok(format!(
        "n = 3,5,6,8,9,11,12 match ceil((n-1)/3), slowest {slowest:.1?}"
    ))
}

fn cycle_congruence_one(ctx: &mut Ctx) -> Outcome {
    let mut parts = Vec::new();
    for (n, expected, budget) in [
        (4, 1, Duration::from_secs(600)),
        (7, 2, Duration::from_secs(600)),
        (10, 4, Duration::from_secs(600)),
        (13, 5, Duration::from_secs(7200)),
    ] {
        let ideal = cycle_ideal(n).unwrap();
        let source = ctx.quotient_source(&format!("J{n}.ideal"), &ideal);
        let poset = poset_of_quotient(&ideal).unwrap();
        let t = ctx.exact(&format!("S_J{n}"), &poset, source, expected, budget)?;
        parts.push(format!("J{n} = {expected} ({t:.1?})"));
        ctx.cycle_values.push((n, expected));
    }
    Ok(parts.join(", "))
}

fn alpha_refutation(_: &mut Ctx) -> Outcome {
    let beta = poset_of_quotient(&cycle_ideal(7).unwrap())
        .unwrap()
        .level_counts();
    let test = alpha_test(&beta, 3).map_err(|e| e.to_string())?;
    if test.pass || test.alpha != [1, 4, 3, -1] {
        return Err(format!("alpha = {:?}, pass = {}", test.alpha, test.pass));
    }
    Ok(format!(
        "beta = {:?}, alpha = {:?}, test fails",
        &beta[..4],
        test.alpha
    ))
}

/// Independent sets of the `n`-cycle of size `t`, by direct enumeration.
fn cycle_independent_sets(n: usize, t: usize) -> u64 {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == t)
        .filter(|m| (0..n).all(|i| m >> i & 1 == 0 || m >> ((i + 1) % n) & 1 == 0))
        .count() as u64
}

fn beta_closed_form(_: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 3..=16 {
        let counts = poset_of_quotient(&cycle_ideal(n).unwrap())
            .unwrap()
            .level_counts();
        for t in 0..=n {
            let closed = sdepth_core::bounds::cycle_beta_closed(n, t);
            let direct = cycle_independent_sets(n, t);
            if closed != counts[t] as i128 || counts[t] != direct {
                return Err(format!(
                    "n={n}, t={t}: closed {closed}, poset {}, direct {direct}",
                    counts[t]
                ));
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        return Err(format!("sweep took {elapsed:?}"));
    }
    Ok(format!("{checked} (n, t) pairs agree, {elapsed:.1?}"))
}

fn pair_exactness(ctx: &mut Ctx) -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 3..=10 {
        let j = cycle_ideal(n).unwrap();
        let i = line_ideal(n).unwrap();
        let source = PosetSource {
            kind: PosetKind::Pair,
            ideal_file: ctx.save_ideal(&format!("J{n}.ideal"), &j),
            ideal2_file: Some(ctx.save_ideal(&format!("I{n}.ideal"), &i)),
        };
        let poset = poset_of_ideal_quotient(&j, &i).unwrap();
        let t = ctx.exact(
            &format!("J{n}_I{n}"),
            &poset,
            source,
            ceil_div(n + 2, 3),
            Duration::from_secs(10),
        )?;
        slowest = slowest.max(t);
    }
    Ok(format!(
        "n = 3..10 match ceil((n+2)/3), slowest {slowest:.1?}"
    ))
}

fn random_ideal(rng: &mut StdRng, n: usize, max_gens: usize) -> MonomialIdeal {
    let count = rng.gen_range(1..=max_gens);
    let gens = (0..count)
        .map(|_| Monomial::from_mask(n, rng.gen_range(1u64..1 << n)))
        .collect();
    minimalize(gens, n).unwrap()
}

fn enlarge(rng: &mut StdRng, ideal: &MonomialIdeal) -> MonomialIdeal {
    let n = ideal.n();
    let mut gens = ideal.generators().to_vec();
    gens.extend_from_slice(random_ideal(rng, n, 2).generators());
    minimalize(gens, n).unwrap()
}

fn edge_ideal(n: usize, edges: &[(usize, usize)]) -> MonomialIdeal {
    let gens = edges
        .iter()
        .map(|&(a, b)| Monomial::from_support(n, &[a, b]).unwrap())
        .collect();
    minimalize(gens, n).unwrap()
}

fn oracle_equivalence(_: &mut Ctx) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut ideals = Vec::new();
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        ideals.push(random_ideal(&mut rng, n, 5));
    }
    let random_count = ideals.len();
    for v in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (1..=v)
            .flat_map(|a| (a + 1..=v).map(move |b| (a, b)))
            .collect();
        for subset in 0u32..1 << pairs.len() {
            let edges: Vec<_> = (0..pairs.len())
                .filter(|i| subset >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            ideals.push(edge_ideal(v, &edges));
        }
    }
    let mut compared = 0;
    for ideal in &ideals {
        let larger = enlarge(&mut rng, ideal);
        let posets = [
            poset_of_quotient(ideal).unwrap(),
            poset_of_ideal(ideal).unwrap(),
            poset_of_ideal_quotient(&larger, ideal).unwrap(),
        ];
        for poset in &posets {
            let oracle = naive_oracle(poset).map_err(|e| e.to_string())?;
            let exact = sdepth_exact(poset, None, &SearchOptions::default());
            if oracle.value != exact.value {
                return Err(format!(
                    "{ideal}: oracle {} vs engine {} on {} members",
                    oracle.value,
                    exact.value,
                    poset.len()
                ));
            }
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} posets agree ({random_count} random ideals, {} graphs)",
        ideals.len() - random_count
    ))
}

fn bound_validity(_: &mut Ctx) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xb0d5);
    let mut checked = 0;
    let mut violations = Vec::new();
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let small = random_ideal(&mut rng, n, 6);
        let large = enlarge(&mut rng, &small);
        for target in [
            BoundTarget::Ideal(small.clone()),
            BoundTarget::Quotient(small.clone()),
            BoundTarget::Pair {
                larger: large.clone(),
                smaller: small.clone(),
            },
        ] {
            let report = bound_report(&target).map_err(|e| e.to_string())?;
            let exact = sdepth_exact(&target.poset().unwrap(), None, &SearchOptions::default());
            let Some(v) = exact.value.finite() else {
                continue;
            };
            let v = v as i64;
            for b in &report.lower_bounds {
                checked += 1;
                if b.value > v {
                    violations.push(format!(
                        "{}: {} lower {} > {v}",
                        report.target, b.provenance, b.value
                    ));
                }
            }
            for b in &report.upper_bounds {
                checked += 1;
                if b.value < v {
                    violations.push(format!(
                        "{}: {} upper {} < {v}",
                        report.target, b.provenance, b.value
                    ));
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(format!("{checked} bound entries checked, 0 violations"))
    } else {
        Err(format!(
            "{} violations, first: {}",
            violations.len(),
            violations[0]
        ))
    }
}

fn verify_exit(path: &Path) -> i32 {
    bin()
        .arg("verify")
        .arg(path)
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

/// One field of the JSON document changed; each kind yields an invalid certificate.
fn corrupt(doc: &Value, rng: &mut StdRng, kind: usize) -> Value {
    let mut bad = doc.clone();
    let n = doc["n"].as_u64().unwrap();
    let intervals = bad["intervals"].as_array_mut().unwrap();
    let idx = rng.gen_range(0..intervals.len());
    match kind {
        0 | 1 => {
            let key = if kind == 0 { "F" } else { "G" };
            let list = intervals[idx][key].as_array_mut().unwrap();
            let e = rng.gen_range(1..=n);
            match list.iter().position(|x| x.as_u64() == Some(e)) {
                Some(p) => {
                    list.remove(p);
                }
                None => {
                    let at = list.iter().take_while(|x| x.as_u64().unwrap() < e).count();
                    list.insert(at, Value::from(e));
                }
            }
        }
        2 => {
            intervals.remove(idx);
        }
        3 => {
            let copy = intervals[idx].clone();
            intervals.push(copy);
        }
        4 => {
            let claim = bad["claimed_sdepth"].as_u64().unwrap();
            bad["claimed_sdepth"] = Value::from(claim + 1);
        }
        5 => {
            let claim = bad["claimed_sdepth"].as_u64().unwrap();
            bad["claimed_sdepth"] = Value::from(if claim > 0 { claim - 1 } else { claim + 2 });
        }
        _ => {
            bad["n"] = Value::from(n + 1);
        }
    }
    bad
}

fn certificate_integrity(ctx: &mut Ctx) -> Outcome {
    if ctx.certificates.is_empty() {
        return Err("no certificates were produced by the exactness criteria".into());
    }
    for path in &ctx.certificates {
        if verify_exit(path) != 0 {
            return Err(format!("{} rejected", path.display()));
        }
    }
    let mut rng = StdRng::seed_from_u64(0xc0de);
    let docs: Vec<Value> = ctx
        .certificates
        .iter()
        .map(|p| serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    let scratch = ctx.dir.path().join("corrupt.json");
    for i in 0..1000 {
        let doc = &docs[i % docs.len()];
        let bad = corrupt(doc, &mut rng, i % 7);
        fs::write(&scratch, bad.to_string()).unwrap();
        if verify_exit(&scratch) == 0 {
            return Err(format!("corruption #{i} accepted: {bad}"));
        }
    }
    Ok(format!(
        "{} emitted certificates verify, 1000 corruptions rejected",
        ctx.certificates.len()
    ))
}

fn conjecture_witnesses(ctx: &mut Ctx) -> Outcome {
    let mut count = 0;
    for &(n, v) in &ctx.line_values {
        let depth = ceil_div(n, 3);
        if depth_line_quotient(n).unwrap() != depth as i64 || v < depth {
            return Err(format!("S/I_{n}: sdepth {v}, depth {depth}"));
        }
        count += 1;
    }
    for &(n, v) in &ctx.cycle_values {
        let depth = ceil_div(n - 1, 3);
        if depth_cycle_quotient(n).unwrap() != depth as i64 || v < depth {
            return Err(format!("S/J_{n}: sdepth {v}, depth {depth}"));
        }
        count += 1;
    }
    if count == 0 {
        return Err("no values from the exactness criteria".into());
    }
    Ok(format!("sdepth >= depth on all {count} instances"))
}

fn veronese_constructivity(_: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 2..=8 {
        for k in 1..n {
            let poset = poset_of_quotient(&veronese_ideal(n, k + 1).unwrap()).unwrap();
            let report = decide_at_least(&poset, k, &SearchOptions::default()).unwrap();
            let Decision::Certificate(cert) = report.decision else {
                return Err(format!("n={n}, k={k}: no partition found"));
            };
            if verify_partition(&poset, &cert).is_err() {
                return Err(format!("n={n}, k={k}: certificate invalid"));
            }
            if let Some(iv) = cert
                .intervals
                .iter()
                .find(|iv| (iv.bottom.count_ones() as usize) < k && iv.top_size() != k)
            {
                return Err(format!(
                    "n={n}, k={k}: interval {iv} has the wrong top size"
                ));
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{cases} (n, k) cases, all low intervals reach level k, {elapsed:.1?}"
    ))
}

fn reproduction_command(_: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let out = bin().arg("reproduce").output().expect("binary runs");
    let elapsed = start.elapsed();
    let code = out.status.code().unwrap_or(-1);
    if code != 0 {
        return Err(format!(
            "exit {code}\n{}",
            String::from_utf8_lossy(&out.stdout)
        ));
    }
    if elapsed > Duration::from_secs(900) {
        return Err(format!("took {elapsed:?}"));
    }
    let rows = String::from_utf8_lossy(&out.stdout).lines().count();
    Ok(format!("exit 0, {rows} lines of output, {elapsed:.1?}"))
}

fn main() {
    let mut ctx = Ctx {
        dir: TempDir::new().unwrap(),
        certificates: Vec::new(),
        line_values: Vec::new(),
        cycle_values: Vec::new(),
    };
    let criteria: [(&str, fn(&mut Ctx) -> Outcome); 12] = [
        ("line quotient exactness", line_exactness),
        ("cycle quotient exactness, n = 0, 2 mod 3", cycle_exactness),
        ("cycle quotient, n = 1 mod 3", cycle_congruence_one),
        ("alpha-test refutation", alpha_refutation),
        ("beta closed form", beta_closed_form),
        ("pair quotient exactness", pair_exactness),
        ("oracle equivalence", oracle_equivalence),
        ("bound validity sweep", bound_validity),
        ("certificate integrity", certificate_integrity),
        ("sdepth >= depth witnesses", conjecture_witnesses),
        ("veronese constructivity", veronese_constructivity),
        ("reproduce command", reproduction_command),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(&mut ctx))).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2}  {name}: {detail} [{elapsed:.1?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}  {name}: {why} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

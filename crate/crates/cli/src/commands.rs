use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use serde_json::json;

use sdepth_core::bounds::{bound_report, BoundEntry, BoundReport, BoundTarget};
use sdepth_core::certificate::{PosetKind, PosetSource};
use sdepth_core::engine::{alpha_upper_bound, SdepthResult};
use sdepth_core::format::{parse_ideal, write_ideal};
use sdepth_core::poset::{poset_of_quotient_capped, HARD_MAX_VARS};
use sdepth_core::reproduce::reference_table;
use sdepth_core::{
    alpha_test, cycle_ideal, decide_at_least, empty_cut_bound, line_ideal, sdepth_exact,
    verify_partition, veronese_ideal, CertificateDocument, Decision, MonomialIdeal, SearchOptions,
    SearchStats, SubsetPoset,
};

use crate::report::Output;
use crate::{status, Family, PosetArgs};

pub struct Config {
    pub timeout: Option<Duration>,
    pub workers: usize,
}

impl Config {
    fn search(&self, hall_check: bool) -> SearchOptions {
        SearchOptions {
            workers: self.workers,
            timeout: self.timeout,
            hall_check,
        }
    }
}

fn load_ideal(path: &Path) -> Result<MonomialIdeal> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ideal(&text).with_context(|| format!("parsing {}", path.display()))
}

struct Target {
    source: PosetSource,
    bounds: BoundTarget,
}

fn target_from_source(source: PosetSource) -> Result<Target> {
    let first = load_ideal(&source.ideal_file)?;
    let bounds = match source.kind {
        PosetKind::Ideal => BoundTarget::Ideal(first),
        PosetKind::Quotient => BoundTarget::Quotient(first),
        PosetKind::Pair => {
            let Some(second) = &source.ideal2_file else {
                bail!("a pair needs two ideal files");
            };
            let smaller = load_ideal(second)?;
            if first.n() != smaller.n() {
                bail!(
                    "the ideals live in different rings (n = {} and n = {})",
                    first.n(),
                    smaller.n()
                );
            }
            if !smaller.is_subideal_of(&first)? {
                bail!(
                    "{} is not contained in {}",
                    second.display(),
                    source.ideal_file.display()
                );
            }
            BoundTarget::Pair {
                larger: first,
                smaller,
            }
        }
    };
    Ok(Target { source, bounds })
}

fn source_of(args: &PosetArgs) -> Option<PosetSource> {
    let (kind, ideal_file, ideal2_file) = match (&args.ideal, &args.quotient, &args.pair) {
        (Some(f), _, _) => (PosetKind::Ideal, f.clone(), None),
        (_, Some(f), _) => (PosetKind::Quotient, f.clone(), None),
        (_, _, Some(p)) => (PosetKind::Pair, p[0].clone(), Some(p[1].clone())),
        _ => return None,
    };
    Some(PosetSource {
        kind,
        ideal_file,
        ideal2_file,
    })
}

fn target(args: &PosetArgs) -> Result<Target> {
    match source_of(args) {
        Some(source) => target_from_source(source),
        None => bail!("one of --ideal, --quotient or --pair is required"),
    }
}

fn poset_of(target: &Target) -> Result<SubsetPoset> {
    if !target.bounds.is_squarefree() {
        bail!(
            "the ideal is not squarefree, so it has no characteristic poset; \
             --bounds-only still reports the generator-count bounds"
        );
    }
    Ok(target.bounds.poset()?)
}

pub fn gen(family: &Family, out: &mut Output) -> Result<u8> {
    let ideal = match family {
        Family::Line { n } => line_ideal(*n)?,
        Family::Cycle { n } => cycle_ideal(*n)?,
        Family::Veronese { n, d } => veronese_ideal(*n, *d)?,
        Family::File { path } => load_ideal(path)?,
    };
    let text = write_ideal(&ideal);
    out.raw(&text);
    out.set_json(json!({
        "n": ideal.n(),
        "generators": ideal.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "ideal": text,
    }));
    Ok(status::OK)
}

fn bound_lines(out: &mut Output, title: &str, entries: &[BoundEntry]) {
    if entries.is_empty() {
        return;
    }
    out.line(title);
    for e in entries {
        if e.value == e.display {
            out.line(format!("  {:<28}{}", e.provenance, e.value));
        } else {
            out.line(format!(
                "  {:<28}{} (raw {})",
                e.provenance, e.display, e.value
            ));
        }
    }
}

fn stats_line(stats: &SearchStats) -> String {
    format!(
        "{} nodes, {} alpha prunes, {} existence prunes, {} matching prunes, {} ms",
        stats.nodes, stats.prunes_alpha, stats.prunes_existence, stats.prunes_hall, stats.wall_ms
    )
}

fn write_certificate(
    path: &Path,
    source: &PosetSource,
    result: &SdepthResult,
) -> Result<Option<usize>> {
    let Some(cert) = &result.certificate else {
        eprintln!("note: no certificate to write (the module is zero)");
        return Ok(None);
    };
    let doc = CertificateDocument::new(source.clone(), cert);
    fs::write(path, doc.to_json()).with_context(|| format!("writing {}", path.display()))?;
    Ok(Some(cert.intervals.len()))
}

pub fn sdepth(
    config: &Config,
    args: &PosetArgs,
    bounds_only: bool,
    certificate: Option<&Path>,
    hall: bool,
    lower_hint: Option<usize>,
    out: &mut Output,
) -> Result<u8> {
    let target = target(args)?;
    let report = bound_report(&target.bounds)?;
    if bounds_only {
        bounds_report(&report, out);
        return Ok(status::OK);
    }
    let poset = poset_of(&target)?;
    let n = poset.n();
    let hint = lower_hint.unwrap_or_else(|| report.best_lower().clamp(0, n as i64) as usize);
    let result = sdepth_exact(&poset, Some(hint), &config.search(hall));
    let written = match certificate {
        Some(path) => write_certificate(path, &target.source, &result)?,
        None => None,
    };

    out.field(12, "module", &report.target);
    out.field(12, "n", n);
    if result.inconclusive {
        out.field(
            12,
            "sdepth",
            format!(
                "inconclusive, between {} and {} (time budget exhausted)",
                result.value,
                result.upper_bound.map_or("?".into(), |u| u.to_string())
            ),
        );
        eprintln!("warning: search stopped at the time budget; the result is a bracket");
    } else {
        out.field(12, "sdepth", result.value);
    }
    if let Some(k) = result.refutation_k {
        out.field(
            12,
            "refuted",
            format!("no partition with all tops of size >= {k}"),
        );
    }
    if let (Some(count), Some(path)) = (written, certificate) {
        out.field(
            12,
            "certificate",
            format!("{count} intervals, {}", path.display()),
        );
    }
    bound_lines(out, "lower bounds", &report.lower_bounds);
    bound_lines(out, "upper bounds", &report.upper_bounds);
    if let Some(d) = &report.depth_formula {
        out.field(12, "depth", format!("{}  ({})", d.value, d.provenance));
    }
    out.field(12, "search", stats_line(&result.stats));

    out.set_json(json!({
        "target": report.target,
        "n": n,
        "mode": "exact",
        "sdepth": result.value,
        "inconclusive": result.inconclusive,
        "lower": result.value,
        "upper": result.upper_bound,
        "refutation_k": result.refutation_k,
        "certificate": written.and(certificate),
        "bounds": report,
        "stats": result.stats,
    }));
    Ok(if result.inconclusive {
        status::INCONCLUSIVE
    } else {
        status::OK
    })
}

fn bounds_report(report: &BoundReport, out: &mut Output) {
    out.field(12, "module", &report.target);
    out.field(12, "n", report.n);
    match (&report.exact, report.finite) {
        (_, false) => out.field(12, "sdepth", "infinite (zero module)"),
        (Some(e), _) => out.field(12, "sdepth", format!("{}  ({})", e.value, e.provenance)),
        (None, _) => out.field(
            12,
            "sdepth",
            format!(
                "between {} and {}",
                report.best_lower(),
                report.best_upper().map_or("?".into(), |u| u.to_string())
            ),
        ),
    }
    bound_lines(out, "lower bounds", &report.lower_bounds);
    bound_lines(out, "upper bounds", &report.upper_bounds);
    if let Some(d) = &report.depth_formula {
        out.field(12, "depth", format!("{}  ({})", d.value, d.provenance));
    }
    let sdepth = if report.finite {
        json!(report.exact.as_ref().map(|e| e.value))
    } else {
        json!("infinite")
    };
    out.set_json(json!({
        "target": report.target,
        "n": report.n,
        "mode": "bounds-only",
        "sdepth": sdepth,
        "inconclusive": false,
        "lower": report.best_lower(),
        "upper": report.best_upper(),
        "refutation_k": null,
        "certificate": null,
        "bounds": report,
        "stats": null,
    }));
}

/// Relative poset paths recorded in a certificate are tried as given, then
/// next to the certificate file.
fn resolve(path: &Path, certificate: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = certificate.parent() {
            let alt = dir.join(path);
            if alt.exists() {
                return alt;
            }
        }
    }
    path.to_path_buf()
}

pub fn verify(args: &PosetArgs, certificate: &Path, out: &mut Output) -> Result<u8> {
    let text = fs::read_to_string(certificate)
        .with_context(|| format!("reading {}", certificate.display()))?;
    let doc = CertificateDocument::from_json(&text)
        .with_context(|| format!("parsing {}", certificate.display()))?;
    let source = match source_of(args) {
        Some(s) => s,
        None => {
            let mut s = doc.poset.clone();
            s.ideal_file = resolve(&s.ideal_file, certificate);
            s.ideal2_file = s.ideal2_file.map(|p| resolve(&p, certificate));
            s
        }
    };
    let target = target_from_source(source)?;
    let poset = poset_of(&target)?;
    let cert = doc.certificate()?;
    match verify_partition(&poset, &cert) {
        Ok(()) => {
            out.line(format!(
                "valid: {} intervals partition the poset, sdepth >= {}",
                cert.intervals.len(),
                cert.claimed_sdepth
            ));
            out.set_json(json!({
                "valid": true,
                "intervals": cert.intervals.len(),
                "claimed_sdepth": cert.claimed_sdepth,
                "violation": null,
            }));
            Ok(status::OK)
        }
        Err(v) => {
            eprintln!("invalid certificate ({}): {v}", v.kind());
            out.line(format!("invalid: {}", v.kind()));
            out.set_json(json!({
                "valid": false,
                "intervals": cert.intervals.len(),
                "claimed_sdepth": cert.claimed_sdepth,
                "violation": { "kind": v.kind(), "message": v.to_string() },
            }));
            Ok(status::INPUT)
        }
    }
}

pub fn alpha(args: &PosetArgs, k: usize, out: &mut Output) -> Result<u8> {
    let target = target(args)?;
    let poset = poset_of(&target)?;
    if k > poset.n() {
        bail!("k = {k} exceeds n = {}", poset.n());
    }
    let beta = poset.level_counts();
    let test = alpha_test(&beta, k)?;
    out.line(format!("{:>3}  {:>10}  {:>10}", "t", "beta", "alpha"));
    for t in 0..=k {
        out.line(format!("{t:>3}  {:>10}  {:>10}", beta[t], test.alpha[t]));
    }
    out.line(format!(
        "alpha-test at k = {k}: {}",
        if test.pass { "pass" } else { "fail" }
    ));
    out.set_json(json!({
        "target": target.bounds.describe(),
        "n": poset.n(),
        "k": k,
        "beta": beta,
        "alpha": test.alpha.iter().map(|a| *a as i64).collect::<Vec<_>>(),
        "pass": test.pass,
    }));
    Ok(status::OK)
}

pub fn poset(args: &PosetArgs, out: &mut Output) -> Result<u8> {
    let target = target(args)?;
    let poset = poset_of(&target)?;
    let counts = poset.level_counts();
    let maximal = poset.maximal_members().count();
    let cut = empty_cut_bound(&poset);
    let alpha_bound = (!poset.is_empty()).then(|| alpha_upper_bound(&counts));
    out.field(14, "module", target.bounds.describe());
    out.field(14, "n", poset.n());
    out.field(14, "members", poset.len());
    out.field(14, "level counts", format!("{counts:?}"));
    out.field(14, "maximal", maximal);
    if let (Some(c), Some(a)) = (cut, alpha_bound) {
        out.field(
            14,
            "upper bounds",
            format!("{a} (alpha-test), {c} (smallest maximal member)"),
        );
    }
    out.set_json(json!({
        "target": target.bounds.describe(),
        "n": poset.n(),
        "members": poset.len(),
        "level_counts": counts,
        "maximal_members": maximal,
        "alpha_upper_bound": alpha_bound,
        "empty_cut_bound": cut,
    }));
    Ok(status::OK)
}

pub fn reproduce(config: &Config, include_slow: bool, out: &mut Output) -> Result<u8> {
    let table = reference_table(include_slow, &config.search(false))?;
    out.line(format!(
        "{:<26}{:>10}{:>12}  agree",
        "quantity", "reference", "computed"
    ));
    let mut notes = Vec::new();
    for row in &table.rows {
        let mark = match (row.agree, row.binding) {
            (true, _) => "yes".to_string(),
            (false, true) => "NO".to_string(),
            (false, false) => {
                notes.push(row.note.clone().unwrap_or_default());
                format!("no [{}]", notes.len())
            }
        };
        out.line(format!(
            "{:<26}{:>10}{:>12}  {mark}",
            row.quantity, row.reference, row.computed
        ));
    }
    for (i, note) in notes.iter().enumerate() {
        out.line(format!("[{}] {note}", i + 1));
    }
    let ok = table.all_agree();
    out.line(if ok {
        "all binding rows agree"
    } else {
        "REGRESSION: some rows disagree"
    });
    out.set_json(json!({ "rows": table.rows, "all_agree": ok }));
    if !ok {
        eprintln!("error: computed values disagree with the reference table");
        return Ok(status::REGRESSION);
    }
    Ok(status::OK)
}

pub fn conjecture(
    config: &Config,
    ns: &[usize],
    certificate_dir: Option<&Path>,
    out: &mut Output,
) -> Result<u8> {
    for &n in ns {
        if n < 10 || n % 3 != 1 {
            bail!("n = {n} is not of the form 3m + 1 with n >= 10");
        }
    }
    if let Some(dir) = certificate_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut code = status::OK;
    let mut rows = Vec::new();
    for &n in ns {
        let k = n.div_ceil(3);
        let ideal = cycle_ideal(n)?;
        let poset = poset_of_quotient_capped(&ideal, HARD_MAX_VARS)?;
        let report = decide_at_least(&poset, k, &config.search(false))?;
        let mut cert_path = None;
        let verdict = match &report.decision {
            Decision::Certificate(cert) => {
                verify_partition(&poset, cert).map_err(|v| {
                    anyhow::anyhow!("internal error: emitted certificate fails: {v}")
                })?;
                if let Some(dir) = certificate_dir {
                    let ideal_file = dir.join(format!("J{n}.ideal"));
                    fs::write(&ideal_file, write_ideal(&ideal))?;
                    let path = dir.join(format!("J{n}.cert.json"));
                    let source = PosetSource {
                        kind: PosetKind::Quotient,
                        ideal_file,
                        ideal2_file: None,
                    };
                    fs::write(&path, CertificateDocument::new(source, cert).to_json())?;
                    cert_path = Some(path);
                }
                "confirmed"
            }
            Decision::Refuted => "refuted",
            Decision::TimedOut => {
                code = status::INCONCLUSIVE;
                "inconclusive"
            }
        };
        let detail = match verdict {
            "confirmed" => format!("sdepth(S/J_{n}) = {k}"),
            "refuted" => format!("sdepth(S/J_{n}) = {}", k - 1),
            _ => format!("{} <= sdepth(S/J_{n}) <= {k}", k - 1),
        };
        let mut line = format!(
            "n = {n:<3} {verdict:<13}{detail}  ({} ms)",
            report.stats.wall_ms
        );
        if let Some(p) = &cert_path {
            line.push_str(&format!("  certificate {}", p.display()));
        }
        out.line(line);
        rows.push(json!({
            "n": n,
            "k": k,
            "verdict": verdict,
            "certificate": cert_path,
            "stats": report.stats,
        }));
    }
    out.set_json(json!({ "results": rows }));
    Ok(code)
}

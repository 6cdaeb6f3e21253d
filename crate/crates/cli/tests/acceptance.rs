//! Acceptance criteria 1–9, one PASS/FAIL line each.
//!
//! Runtime budgets are wall-clock seconds under the test profile.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use fwedge_core::closure::{verify_dual_closure, TableClosure};
use fwedge_core::expansion::{Family, DEFAULT_CAP};
use fwedge_core::fixtures::{cyclic, s3, small_groups, two_generator_groups, with_adjoined_identity, with_chain};
use fwedge_core::group::FiniteGroup;
use fwedge_core::monoid::{FiniteInverseMonoid, MonoidError};
use fwedge_core::partial_action::{structure_iso, FiniteSemilattice};
use fwedge_core::report::Status;
use fwedge_core::suites::{self, cardinalities, Entry, Suite, SuiteConfig, SuiteReport};
use fwedge_core::verify::{canonical_morphism_m, to_table, VerifyError};

type Outcome = Result<String, String>;

/// Number, title, time budget in seconds, and the check.
type Criterion = (u8, &'static str, Option<f64>, fn() -> Outcome);

fn run(groups: &[FiniteGroup], suites_: &[Suite], cfg: &SuiteConfig) -> Result<SuiteReport, String> {
    let mut out = SuiteReport::default();
    for g in groups {
        for &s in suites_ {
            let r = suites::run(g, s, cfg).map_err(|e| format!("{} {s}: {e}", g.name()))?;
            out.entries.extend(r.entries);
        }
    }
    Ok(out)
}

fn first_failure(r: &SuiteReport) -> Result<(), String> {
    match r.failures().next() {
        Some(e) => Err(format!("{} {}: {} ({})", e.suite, e.instance, e.check, e.witness.clone().unwrap_or_default())),
        None => Ok(()),
    }
}

fn sampled(e: &Entry) -> bool {
    e.instance.contains("[sampled]")
}

/// Every named check occurs, for every listed group.
fn require_checks(r: &SuiteReport, groups: &[FiniteGroup], checks: &[&str]) -> Result<(), String> {
    for g in groups {
        for c in checks {
            let found = r.entries.iter().any(|e| e.check == *c && e.instance.contains(&format!("({},", g.name())));
            if !found {
                return Err(format!("no {c} entry for {}", g.name()));
            }
        }
    }
    Ok(())
}

fn group_entries<'a>(r: &'a SuiteReport, g: &FiniteGroup) -> impl Iterator<Item = &'a Entry> {
    let tag = format!("({},", g.name());
    r.entries.iter().filter(move |e| e.instance.contains(&tag))
}

/// The target in an instance like `M(Z2,Y) → Z2^1 (words ≤ 6, …)`.
fn target_of(e: &Entry) -> &str {
    let rest = e.instance.split_once("→ ").map_or("", |(_, r)| r);
    rest.split(" (").next().unwrap_or(rest).split(" [").next().unwrap_or(rest)
}

fn criterion1() -> Outcome {
    let z2 = cardinalities(&cyclic(2), 64, DEFAULT_CAP).map_err(|e| e.to_string())?;
    if z2 != [(7, 7), (9, 9), (9, 9)] {
        return Err(format!("Z2 counts {z2:?}, expected 7, 9, 9"));
    }
    let mut seen = Vec::new();
    for g in small_groups().into_iter().skip(2).chain(two_generator_groups()) {
        let c = cardinalities(&g, 64, DEFAULT_CAP).map_err(|e| e.to_string())?;
        if c.iter().any(|(a, b)| a != b) {
            return Err(format!("{} with |X| = {}: methods disagree {c:?}", g.name(), g.generators().len()));
        }
        seen.push(format!("{}/{}: {}, {}, {}", g.name(), g.generators().len(), c[0].0, c[1].0, c[2].0));
    }
    Ok(format!("Z2: 7, 9, 9; {}", seen.join("; ")))
}

fn criterion2() -> Outcome {
    let groups = small_groups();
    let r = run(&groups, &[Suite::Semilattice, Suite::Premorphism], &SuiteConfig::default())?;
    first_failure(&r)?;
    if let Some(e) = r.entries.iter().find(|e| sampled(e)) {
        return Err(format!("{} was sampled", e.instance));
    }
    let checks = [
        "identity-element",
        "generator-images",
        "natural-order",
        "sigma-point-fiber",
        "sigma-by-table",
        "maximum-of-class",
        "product-matches-expansion",
        "path-evaluation",
        "sigma-iff-group-value",
    ];
    require_checks(&r, &groups[1..], &checks)?;
    Ok(format!("{} entries over {} groups", r.entries.len(), groups.len()))
}

fn criterion3() -> Outcome {
    let suites_ = [Suite::Closure, Suite::Lemma31, Suite::Prop32];
    let exhaustive: Vec<FiniteGroup> = small_groups().into_iter().filter(|g| g.order() <= 3).collect();
    let r = run(&exhaustive, &suites_, &SuiteConfig::default())?;
    first_failure(&r)?;
    if let Some(e) = r.entries.iter().find(|e| sampled(e) && e.instance.contains("𝒳_Y")) {
        return Err(format!("{} was sampled", e.instance));
    }
    let checks =
        ["Cl1", "Cl2", "Cl3", "meet-of-closures", "rho-congruence", "quotient-isomorphism", "pi-multiplicative"];
    require_checks(&r, &exhaustive[1..], &checks)?;

    let six = s3();
    let cfg = SuiteConfig { samples: 10_000, seed: 0, ..SuiteConfig::default() };
    let r6 = run(std::slice::from_ref(&six), &suites_, &cfg)?;
    first_failure(&r6)?;
    for c in ["Cl1", "Cl3", "meet-of-closures", "rho-congruence", "pi-multiplicative"] {
        let n = r6.entries.iter().filter(|e| e.check == c).map(|e| e.instances).max().unwrap_or(0);
        if n < 10_000 {
            return Err(format!("S3 {c}: only {n} samples"));
        }
    }
    Ok(format!("exhaustive for |G| ≤ 3 ({} entries), S3 with 10^4 samples", r.entries.len()))
}

fn criterion4() -> Outcome {
    let groups = small_groups();
    let r = run(&groups, &[Suite::Prop42], &SuiteConfig::default())?;
    first_failure(&r)?;
    if let Some(e) = r.entries.iter().find(|e| sampled(e)) {
        return Err(format!("{} was sampled", e.instance));
    }
    require_checks(&r, &groups, &["m-is-order-scan-maximum", "decomposition", "enriched-generation"])?;
    Ok(format!("{} entries over {} groups", r.entries.len(), groups.len()))
}

fn criterion5() -> Outcome {
    let groups = small_groups();
    let r = run(&groups, &[Suite::Prop43], &SuiteConfig::default())?;
    first_failure(&r)?;
    if let Some(e) = r.entries.iter().find(|e| sampled(e)) {
        return Err(format!("{} was sampled", e.instance));
    }
    let checks = [
        "f-bijective",
        "f-multiplicative",
        "f-preserves-inverse",
        "f-preserves-m",
        "f-preserves-identity",
        "f-preserves-generators",
    ];
    require_checks(&r, &groups, &checks)?;
    let r6 = run(&[s3()], &[Suite::Prop43], &SuiteConfig { samples: 10_000, seed: 0, ..SuiteConfig::default() })?;
    first_failure(&r6)?;
    let pairs = r6.entries.iter().find(|e| e.check == "f-multiplicative").map_or(0, |e| e.instances);
    if pairs != 10_000 {
        return Err(format!("S3: {pairs} sampled pairs"));
    }
    Ok("exhaustive for |G| ≤ 4, S3 on 10^4 sampled pairs".into())
}

fn criterion6() -> Outcome {
    let groups = small_groups();
    let r = run(&groups, &[Suite::Thm44], &SuiteConfig::default())?;
    first_failure(&r)?;
    for g in &groups {
        let mut targets = vec![g.name().to_string(), format!("F({},X) table", g.name())];
        if !g.generators().is_empty() {
            targets.push(format!("{}^1", g.name()));
            targets.push(format!("{}×{{1>0}}", g.name()));
        }
        for t in &targets {
            for c in ["psi-well-defined", "factorization", "phi-preserves-m", "diagram", "single-edge-step"] {
                let e = group_entries(&r, g).find(|e| e.check == c && target_of(e) == t);
                let Some(e) = e else { return Err(format!("no {c} entry for {} → {t}", g.name())) };
                if c == "single-edge-step" && g.order() <= 3 && sampled(e) {
                    return Err(format!("{}: edge steps were sampled", e.instance));
                }
                if c == "psi-well-defined" && !e.instance.contains("words ≤ 6") {
                    return Err(format!("{}: not generated up to length 6", e.instance));
                }
            }
        }
    }
    let steps: usize = r.entries.iter().filter(|e| e.check == "single-edge-step").map(|e| e.instances).sum();
    Ok(format!(
        "{} targets over {} groups, {steps} edge steps",
        r.entries.iter().filter(|e| e.check == "factorization").count(),
        groups.len()
    ))
}

fn criterion7() -> Outcome {
    let z2 = cyclic(2);
    let m = to_table(&Family::margolis_meakin(&z2), DEFAULT_CAP).map_err(|e| e.to_string())?;
    if m.monoid.analyze().is_f_inverse() {
        return Err("M(Z2,{x}) reported F-inverse".into());
    }
    let names = (0..3).map(|i| format!("c{i}")).collect();
    let table: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| a.max(b)).collect()).collect();
    let chain = FiniteSemilattice::from_meet_table(names, &table).map_err(|e| e.to_string())?;
    let broken = TableClosure::new(chain, vec![0, 0, 2]);
    let xs = [0, 1, 2];
    let report = verify_dual_closure(&broken, &xs, &[]);
    let cl1 = report.get("Cl1").ok_or("no Cl1 finding")?;
    if cl1.status != Status::Fail || cl1.witness.is_none() {
        return Err("broken closure passed Cl1".into());
    }
    let s = FiniteInverseMonoid::from_group(&z2);
    match canonical_morphism_m(&z2, &s, &[0, 0], DEFAULT_CAP) {
        Err(VerifyError::Monoid(MonoidError::NuNotCanonical(_))) => {}
        other => return Err(format!("non-canonical ν gave {:?}", other.map(|_| ()))),
    }
    Ok(format!("Cl1 witness: {}", cl1.witness.as_deref().unwrap_or_default()))
}

fn criterion8() -> Outcome {
    let mut count = 0;
    for g in small_groups() {
        let mut monoids = vec![(
            format!("M({},X)", g.name()),
            to_table(&Family::margolis_meakin(&g), DEFAULT_CAP).map_err(|e| e.to_string())?.monoid,
        )];
        if let (Ok(a), Ok(b)) = (with_adjoined_identity(&g), with_chain(&g)) {
            monoids.push((format!("{}^1", g.name()), a));
            monoids.push((format!("{}×{{1>0}}", g.name()), b));
        }
        for (name, s) in monoids {
            let iso = structure_iso(&s).map_err(|e| format!("{name}: {e}"))?;
            for c in ["bijective", "multiplicative"] {
                let f = iso.report.get(c).ok_or(format!("{name}: no {c} check"))?;
                if f.status != Status::Pass {
                    return Err(format!("{name}: {c}: {}", f.witness.clone().unwrap_or_default()));
                }
            }
            if !iso.report.passed() {
                return Err(format!("{name}: {}", iso.report));
            }
            count += 1;
        }
    }
    Ok(format!("{count} E-unitary monoids"))
}

fn criterion9() -> Outcome {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut sizes = Vec::new();
    for file in ["z2.json", "z4.json"] {
        let once = || {
            Command::new(env!("CARGO_BIN_EXE_fwedge"))
                .args(["check", "--suite", "all", "--seed", "0", "--format", "json"])
                .arg(fixtures.join(file))
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (once()?, once()?);
        if !a.status.success() {
            return Err(format!("{file}: exit {:?}", a.status.code()));
        }
        if a.stdout != b.stdout {
            return Err(format!("{file}: reports differ"));
        }
        sizes.push(format!("{file} {} bytes", a.stdout.len()));
    }
    Ok(sizes.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "cardinalities by two methods", Some(10.0), criterion1),
        (2, "universal properties, |G| ≤ 4", Some(60.0), criterion2),
        (3, "closure operators and quotient product", Some(120.0), criterion3),
        (4, "m is the class maximum; decomposition", None, criterion4),
        (5, "f is an isomorphism", None, criterion5),
        (6, "universal property of the wedge expansion", Some(300.0), criterion6),
        (7, "negative controls", None, criterion7),
        (8, "E-unitary structure isomorphism", None, criterion8),
        (9, "determinism of check", None, criterion9),
    ];
    let mut failed = 0;
    for (n, title, budget, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        let timing = match budget {
            Some(b) => format!("{secs:.2}s of {b:.0}s"),
            None => format!("{secs:.2}s"),
        };
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if secs > b => Err(format!("over the {b:.0}s budget")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {n} {title} [{timing}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {n} {title} [{timing}]: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

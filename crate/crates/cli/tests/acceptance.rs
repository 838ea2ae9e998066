//! The ten acceptance criteria at full sample sizes, one PASS/FAIL line each
//! on stderr: `cargo test -p ampgen-cli --test acceptance`.

use std::io::Write;
use std::process::Command;

use ampgen_cli::verify::{self, run_criterion, VerifyOptions, VerifyReport, CRITERIA};

#[test]
fn acceptance_criteria() {
    let opts = VerifyOptions::default();
    let report = verify::run(&opts);
    let mut ids: Vec<_> = report.checks.iter().map(|c| c.id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), report.checks.len(), "check ids repeat");
    let mut failed = Vec::new();
    let _ = writeln!(std::io::stderr());
    for (n, title) in CRITERIA {
        let checks: Vec<_> = report.criterion(n).collect();
        let ok = !checks.is_empty() && checks.iter().all(|c| c.passed());
        let worst = checks
            .iter()
            .filter_map(|c| c.worst_rel_err)
            .fold(None, |m: Option<f64>, w| Some(m.map_or(w, |m| m.max(w))));
        let worst = worst.map(|w| format!(", worst rel err {w:.2e}")).unwrap_or_default();
        // Straight to stderr so the summary shows without --nocapture.
        let mut err = std::io::stderr().lock();
        let _ = writeln!(
            err,
            "{} criterion {n:>2} ({title}): {} checks{worst}",
            if ok { "PASS" } else { "FAIL" },
            checks.len()
        );
        if !ok {
            for c in checks.iter().filter(|c| !c.passed()) {
                let _ = writeln!(err, "    {c}");
            }
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn a_wrong_row_fails_exactly_one_identity() {
    let opts = VerifyOptions {
        mutation: Some(verify::sample_mutation()),
        ..VerifyOptions::default()
    };
    let checks = run_criterion(2, &opts);
    let failing: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
    assert_eq!(failing.len(), 1, "{failing:#?}");
    assert_eq!(failing[0].id, "identity/AV_CE/NO_DEGEN");
}

#[test]
fn report_round_trips_through_json_lines() {
    let opts = VerifyOptions {
        oracle_draws: 50,
        sample_draws: 20,
        ..VerifyOptions::default()
    };
    let report = VerifyReport {
        checks: [1, 5, 6, 9, 10].iter().flat_map(|n| run_criterion(*n, &opts)).collect(),
    };
    let text = report.to_jsonl();
    assert_eq!(text.lines().count(), report.checks.len());
    assert_eq!(VerifyReport::from_jsonl(&text).unwrap(), report);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ampgen");
    let dir = std::env::temp_dir().join(format!("ampgen-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let good = dir.join("fig1.cfg");
    std::fs::write(
        &good,
        "quantity = AV_CS\ngm = 9.36m\nro = 14.4k\nrs = 100\nrf = 5k\nswept = rd\nrange = 10, 1M, 11\nscale = log\n",
    )
    .unwrap();
    let out = Command::new(bin).arg("sweep").arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.starts_with("RD,general,oracle\n"));

    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "quantity = AV_CS\ngm = 9.36m\nswept = rd\nrange = 10, 1M, 1\n").unwrap();
    let out = Command::new(bin).arg("sweep").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("range"));

    let out = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(bin).args(["crossover", "fig1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("overtakes"));

    std::fs::remove_dir_all(&dir).unwrap();
}

mod common;

use std::fs;

use common::*;
use gmde_core::{arch_equal, ComponentKind};

#[test]
fn check_exit_codes() {
    let ok = gmde(&["check", &fixture("two_services.garch")], &[]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert!(ok.stdout.contains("no_deadlock: holds"));

    let dl = gmde(&["check", &fixture("deadlock.garch")], &[]);
    assert_eq!(dl.code, 2);
    assert!(dl.stdout.contains("no_deadlock: FAILS"));
    assert!(dl.stdout.contains("deadlock after 2 steps: 0 --Alice.start?--> "), "{}", dl.stdout);

    let cap = gmde(&["check", &fixture("state_cap.garch"), "--max-states", "50"], &[]);
    assert_eq!(cap.code, 3);
    assert!(cap.stderr.contains("STATE_SPACE_EXCEEDED") && cap.stderr.contains("50"), "{}", cap.stderr);
    assert!(cap.stdout.is_empty());
}

#[test]
fn parse_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.garch");
    fs::write(&p, "architecture X {\n  service A { provides }\n}\n").unwrap();
    let r = gmde(&["check", p.to_str().unwrap()], &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("bad.garch:2:24: [UNEXPECTED_TOKEN]"), "{}", r.stderr);

    let missing = gmde(&["check", dir.path().join("nope.garch").to_str().unwrap()], &[]);
    assert_eq!(missing.code, 1);
    assert!(missing.stderr.contains("cannot read"));
}

#[test]
fn ill_formed_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.garch");
    fs::write(&p, "architecture X { service A { requires p } service A { requires q } }").unwrap();
    let r = gmde(&["check", p.to_str().unwrap()], &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("ill-formed"), "{}", r.stderr);
}

#[test]
fn state_cap_from_environment() {
    let f = fixture("state_cap.garch");
    assert_eq!(gmde(&["check", &f], &[("GMDE_MAX_STATES", "50")]).code, 3);
    assert_eq!(gmde(&["check", &f], &[("GMDE_MAX_STATES", "64")]).code, 0);
    // the flag wins over the environment
    assert_eq!(gmde(&["check", &f, "--max-states", "64"], &[("GMDE_MAX_STATES", "50")]).code, 0);
    assert_eq!(gmde(&["check", &f], &[("GMDE_MAX_STATES", "lots")]).code, 64);
    assert_eq!(gmde(&["check", &f, "--max-states", "0"], &[]).code, 64);
}

#[test]
fn json_report_matches_schema() {
    for name in ["two_services.garch", "deadlock.garch", "imaging.garch"] {
        let r = gmde(&["check", "--json", &fixture(name)], &[]);
        let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(schema_errors("check-report.schema.json", &v), Vec::<String>::new(), "{name}");
        assert_eq!(v["all_hold"], r.code == 0);
    }
}

#[test]
fn aut_export() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("lts.aut");
    let r = gmde(&["check", &fixture("deadlock.garch"), "--aut", p.to_str().unwrap()], &[]);
    assert_eq!(r.code, 2);
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("des (0, 4, 4)\n"), "{text}");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn weave_dry_run_touches_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let before = snapshot(dir.path());
    let r = gmde(
        &["weave", &fixture("imaging.garch"), &fixture("replication.gpat"), "--dry-run", "--out", out.to_str().unwrap()],
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, fs::read_to_string(fixture("oracles/imaging_replication3.actions")).unwrap());
    assert_eq!(snapshot(dir.path()), before);
    assert!(!out.exists());
}

#[test]
fn weave_writes_stages_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let r = gmde(&["weave", &fixture("imaging.garch"), &fixture("replication.gpat"), "--out", dir.path().to_str().unwrap()], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("goal_result: true"));
    let trace = json(&dir.path().join("trace.json"));
    assert_eq!(schema_errors("trace.schema.json", &trace), Vec::<String>::new());
    let n = trace["actions"].as_array().unwrap().len();
    let stages = fs::read_dir(dir.path()).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_str().unwrap().starts_with("stage_")).count();
    assert_eq!(stages, n + 1);
    let first = load(&dir.path().join("stage_000.garch"));
    assert!(arch_equal(&first, &load(fixture("imaging.garch").as_ref())));
    let last = load(&dir.path().join(format!("stage_{n:03}.garch")));
    assert_eq!(last.components.len(), 6);
}

#[test]
fn weave_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(gmde(&["weave", &fixture("imaging.garch"), &fixture("replication.gpat"), "--out", d], &[]).code, 0);
    let again = gmde(&["weave", &format!("{d}/stage_010.garch"), &fixture("replication.gpat"), "--dry-run"], &[]);
    assert_eq!(again.code, 4);
    assert!(again.stderr.contains("NAME_COLLISION"), "{}", again.stderr);
    let no_match = gmde(&["weave", &fixture("two_services.garch"), &fixture("replication.gpat"), "--dry-run"], &[]);
    assert_eq!(no_match.code, 4);
    assert!(no_match.stderr.contains("NO_MATCH"));
    let usage = gmde(&["weave", &fixture("imaging.garch"), &fixture("replication.gpat")], &[]);
    assert_eq!(usage.code, 64);
}

#[test]
fn adapt_writes_deployment() {
    let dir = tempfile::tempdir().unwrap();
    let r = gmde(&["adapt", &fixture("imaging.garch"), &fixture("testgrid.gplat"), "--out", dir.path().to_str().unwrap()], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let dep = json(&dir.path().join("deployment.json"));
    assert_eq!(schema_errors("deploy.schema.json", &dep), Vec::<String>::new());
    assert_eq!(dep["placements"].as_array().unwrap().len(), 4);
    let n = json(&dir.path().join("trace.json"))["actions"].as_array().unwrap().len();
    let last = dir.path().join(format!("stage_{n:03}.garch"));
    assert_eq!(load(&last).component("registry").unwrap().kind, ComponentKind::Infrastructural);

    let again = gmde(&["adapt", last.to_str().unwrap(), &fixture("testgrid.gplat"), "--dry-run"], &[]);
    assert_eq!(again.code, 6);
    assert!(again.stderr.contains("ALREADY_CONCRETE"), "{}", again.stderr);
}

#[test]
fn adapt_unbound_kind_names_the_tag() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("gpu.garch");
    fs::write(&p, "architecture G { service Gpu tagged accelerator { provides run } }").unwrap();
    let r = gmde(&["adapt", p.to_str().unwrap(), &fixture("testgrid.gplat"), "--dry-run"], &[]);
    assert_eq!(r.code, 6);
    assert!(r.stderr.contains("UNBOUND_SERVICE_KIND") && r.stderr.contains("accelerator"), "{}", r.stderr);
}

#[test]
fn adapt_one_service_adds_two_constraints() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("one.garch");
    fs::write(&m, "architecture One { service S { provides inp requires out } connector loopback { from S.out to S.inp } }").unwrap();
    let prof = dir.path().join("bare.gplat");
    fs::write(&prof, "platform bare { bind service as \"plain\" protocol \"http\" node box capacity 1 }").unwrap();
    let out = dir.path().join("out");
    let r = gmde(&["adapt", m.to_str().unwrap(), prof.to_str().unwrap(), "--out", out.to_str().unwrap()], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let before = load(&m);
    let after = load(&out.join("stage_003.garch"));
    assert_eq!(after.constraints.len(), before.constraints.len() + 2);
}

#[test]
fn capacity_overflow_is_unplaced() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("three.garch");
    fs::write(&m, "architecture Three { service A { provides x } service B { provides x } service C { provides x } }").unwrap();
    let prof = dir.path().join("tiny.gplat");
    fs::write(&prof, "platform tiny { bind service as \"t\" protocol \"p\" node only capacity 2 }").unwrap();
    let out = dir.path().join("out");
    assert_eq!(gmde(&["adapt", m.to_str().unwrap(), prof.to_str().unwrap(), "--out", out.to_str().unwrap()], &[]).code, 0);
    let dep = json(&out.join("deployment.json"));
    assert_eq!(dep["placements"].as_array().unwrap().len(), 2);
    assert_eq!(dep["unplaced"], serde_json::json!(["C"]));
}

#[test]
fn export_dot_shapes() {
    let empty = gmde(&["export-dot", &fixture("empty.garch")], &[]);
    assert_eq!(empty.code, 0);
    assert_eq!(dot_counts(&empty.stdout), (0, 0));
    assert!(empty.stdout.starts_with("digraph \"Empty\" {"));

    let pair = gmde(&["export-dot", &fixture("two_services.garch")], &[]);
    assert_eq!(dot_counts(&pair.stdout), (2, 1));
    assert!(pair.stdout.contains("\"Client\" -> \"Server\" [label=\"link\"];"));
    assert_eq!(pair.stdout.matches("digraph").count(), 1);

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(gmde(&["weave", &fixture("imaging.garch"), &fixture("replication.gpat"), "--out", dir.path().to_str().unwrap()], &[]).code, 0);
    let dot_file = dir.path().join("g.dot");
    let woven = gmde(&["export-dot", dir.path().join("stage_010.garch").to_str().unwrap(), "--out", dot_file.to_str().unwrap()], &[]);
    assert_eq!(woven.code, 0);
    assert!(woven.stdout.is_empty());
    let text = fs::read_to_string(&dot_file).unwrap();
    assert_eq!(dot_counts(&text), (6, 5));
    let dashed: Vec<&str> = text.lines().filter(|l| l.contains("style=dashed")).collect();
    assert_eq!(dashed, ["  \"Store_dispatcher\" [label=\"Store_dispatcher\", shape=ellipse, style=dashed];"]);
}

#[test]
fn usage_and_help() {
    assert_eq!(gmde(&["frobnicate"], &[]).code, 64);
    assert_eq!(gmde(&[], &[]).code, 64);
    let help = gmde(&["--help"], &[]);
    assert_eq!(help.code, 0);
    for cmd in ["check", "weave", "adapt", "export-dot"] {
        assert!(help.stdout.contains(cmd), "{cmd}");
    }
}

#[test]
fn in_process_run_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = gmde::run(["gmde", "export-dot", &fixture("two_services.garch")], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), gmde(&["export-dot", &fixture("two_services.garch")], &[]).stdout);
}

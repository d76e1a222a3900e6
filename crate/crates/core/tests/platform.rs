use gmde_core::dsl::{parse_architecture, parse_profile, translate_to_core};
use gmde_core::platform::*;
use gmde_core::refine::RefinementAction;
use gmde_core::weave::weave;
use gmde_core::*;
use gmde_testkit::{fixture_arch, oracle, read_fixture};

fn testgrid() -> PlatformProfile {
    parse_profile(&read_fixture("testgrid.gplat")).unwrap()
}

fn woven() -> Architecture {
    let p = gmde_core::dsl::parse_pattern(&read_fixture("replication.gpat")).unwrap();
    weave(&fixture_arch("imaging.garch"), &p).unwrap().result().clone()
}

fn arch(src: &str) -> Architecture {
    translate_to_core(&parse_architecture(src).unwrap()).unwrap()
}

fn typed(a: &Architecture) -> usize {
    a.constraints.iter().filter(|c| c.key == TYPE_KEY).count()
}

fn is_removal(a: &RefinementAction) -> bool {
    matches!(a, RefinementAction::RemoveComponent { .. } | RefinementAction::RemoveConnector { .. })
}

#[test]
fn imaging_binds_services_and_adds_registry() {
    let a = fixture_arch("imaging.garch");
    let c = adapt_to_platform(&a, &testgrid()).unwrap();
    let d = c.result();
    assert!(c.goal_result);
    assert_eq!(d.level, AbstractionLevel::PlatformSpecific("testgrid".into()));
    assert_eq!(typed(d), 3);
    assert_eq!(d.component("registry").unwrap().kind, ComponentKind::Infrastructural);
    assert_eq!(d.components.len(), a.components.len() + 1);
    for k in &d.connectors {
        let p: Vec<_> = d.constraints_on(&k.name).filter(|c| c.key == PROTOCOL_KEY).collect();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].value, Value::Str("soap".into()));
    }
    assert!(!check_wellformed(d).has_errors());
}

#[test]
fn woven_model_adapts_without_removals() {
    let c = adapt_to_platform(&woven(), &testgrid()).unwrap();
    assert!(c.goal_result);
    assert!(!c.trace.iter().any(|t| is_removal(&t.action)));
    assert_eq!(typed(c.result()), 5);
    assert_eq!(c.stages.len(), c.trace.len() + 1);
    assert!(c.trace.iter().all(|t| t.origin == "testgrid"));
}

#[test]
fn second_adapt_is_refused() {
    let once = adapt_to_platform(&woven(), &testgrid()).unwrap();
    match adapt_to_platform(once.result(), &testgrid()) {
        Err(AdaptFailure::Platform(e)) => assert_eq!(e.code, PlatformErrorCode::AlreadyConcrete),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unbound_kind_names_the_tag() {
    let a = arch("architecture T { service Gpu tagged accelerator { provides run } }");
    let e = compile_adaptation(&a, &testgrid()).unwrap_err();
    assert_eq!(e.code, PlatformErrorCode::UnboundServiceKind);
    assert!(e.message.contains("accelerator"), "{e}");
}

#[test]
fn platform_infra_name_collision() {
    let a = arch("architecture T { service registry { provides x } }");
    assert_eq!(compile_adaptation(&a, &testgrid()).unwrap_err().code, PlatformErrorCode::NameCollision);
}

#[test]
fn single_service_with_self_connector_gains_two_constraints() {
    let p = parse_profile("platform bare { bind service as \"plain\" protocol \"http\" node box capacity 1 }").unwrap();
    let a = arch(
        "architecture One { service S { provides inp requires out } connector loopback { from S.out to S.inp } }",
    );
    let d = adapt_to_platform(&a, &p).unwrap().result().clone();
    assert_eq!(d.constraints.len(), a.constraints.len() + 2);
    assert_eq!(d.components, a.components);
}

#[test]
fn deployment_matches_first_fit_oracle() {
    let profile = testgrid();
    for base in [fixture_arch("imaging.garch"), woven()] {
        let d = adapt_to_platform(&base, &profile).unwrap().result().clone();
        let got = emit_deployment(&d, &profile).unwrap();
        let (rows, unplaced) = oracle::first_fit(&d, &profile);
        let mine: Vec<(String, String, u32)> =
            got.placements.iter().map(|p| (p.component.clone(), p.node_class.clone(), p.slot)).collect();
        assert_eq!(mine, rows);
        assert_eq!(got.unplaced, unplaced);
        assert_eq!(got.placements.len() + got.unplaced.len(), d.components.len());
        assert_eq!(got.bindings.len(), d.connectors.len());
    }
}

#[test]
fn woven_placement_spills_to_edge() {
    let profile = testgrid();
    let d = adapt_to_platform(&woven(), &profile).unwrap().result().clone();
    let got = emit_deployment(&d, &profile).unwrap();
    let rows: Vec<(&str, &str, u32)> =
        got.placements.iter().map(|p| (p.component.as_str(), p.node_class.as_str(), p.slot)).collect();
    assert_eq!(
        rows,
        [
            ("Portal", "compute", 0),
            ("Query", "compute", 1),
            ("Store", "compute", 2),
            ("Store_dispatcher", "compute", 3),
            ("Store_r1", "edge", 0),
            ("Store_r2", "edge", 1),
            ("registry", "edge", 2),
        ]
    );
    assert!(got.unplaced.is_empty());
}

#[test]
fn overflow_is_reported_unplaced() {
    let p = parse_profile("platform tiny { bind service as \"t\" protocol \"p\" node only capacity 2 }").unwrap();
    let a = arch("architecture Three { service A { provides x } service B { provides x } service C { provides x } }");
    let d = adapt_to_platform(&a, &p).unwrap().result().clone();
    let got = emit_deployment(&d, &p).unwrap();
    assert_eq!(got.placements.len(), 2);
    assert_eq!(got.unplaced, ["C"]);
}

#[test]
fn deployment_needs_matching_level() {
    let e = emit_deployment(&fixture_arch("imaging.garch"), &testgrid()).unwrap_err();
    assert_eq!(e.code, PlatformErrorCode::WrongLevel);
}

#[test]
fn generated_models_adapt_cleanly() {
    let profile = parse_profile(
        "platform wide { bind service as \"s\" on a { infra zz_bus { provides b } } protocol \"q\" node a capacity 3 node b capacity 4 }",
    )
    .unwrap();
    for seed in 0..100 {
        let mut a = gmde_testkit::gen::architecture(&mut gmde_testkit::rng(seed), 10);
        a.level = AbstractionLevel::Abstract;
        for c in &mut a.components {
            c.tags.clear();
        }
        let c = adapt_to_platform(&a, &profile).unwrap();
        let d = c.result();
        assert!(!check_wellformed(d).has_errors(), "seed {seed}");
        assert!(!c.trace.iter().any(|t| is_removal(&t.action)));
        let got = emit_deployment(d, &profile).unwrap();
        let (rows, unplaced) = oracle::first_fit(d, &profile);
        assert_eq!(got.placements.len(), rows.len(), "seed {seed}");
        assert_eq!(got.unplaced, unplaced, "seed {seed}");
        assert_eq!(got.placements.len() + got.unplaced.len(), d.components.len());
    }
}

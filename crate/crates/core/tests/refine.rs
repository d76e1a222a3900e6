use std::collections::BTreeMap;

use gmde_core::dsl::{format_action, parse_action};
use gmde_core::refine::*;
use gmde_core::*;
use gmde_testkit::{fixture_arch, gen, rng};

/// Applicable actions are the ones the guard accepts, and applying one
/// always gives a well-formed model.
#[test]
fn guard_agrees_with_apply_and_results_are_wellformed() {
    let mut applied = 0;
    let mut seen_codes = BTreeMap::new();
    for seed in 0..2000u64 {
        let mut r = rng(seed);
        let a = gen::architecture(&mut r, 6);
        let act = gen::action(&mut r, &a);
        let guard = check_preconditions(&a, &act);
        match apply_action(&a, &act) {
            Ok(b) => {
                applied += 1;
                assert!(guard.is_ok(), "seed {seed}: {act}");
                let d = check_wellformed(&b);
                assert!(!d.has_errors(), "seed {seed}: `{act}` broke the model:\n{d}");
            }
            Err(e) => {
                assert_eq!(guard, Err(e.clone()), "seed {seed}");
                *seen_codes.entry(e.code).or_insert(0) += 1;
            }
        }
    }
    assert!(applied > 300, "generator too rarely produces applicable actions: {applied}");
    assert!(seen_codes.len() >= 7, "error coverage too narrow: {seen_codes:?}");
}

#[test]
fn sequence_is_a_fold_of_single_steps() {
    for seed in 0..300u64 {
        let mut r = rng(seed);
        let a = gen::architecture(&mut r, 5);
        let mut actions = Vec::new();
        let mut cur = a.clone();
        // Build sequences that mostly succeed, with an occasional failing tail.
        for _ in 0..6 {
            let act = gen::action(&mut r, &cur);
            if let Ok(next) = apply_action(&cur, &act) {
                cur = next;
            }
            actions.push(act);
        }
        let folded = actions.iter().enumerate().try_fold(a.clone(), |m, (i, act)| {
            apply_action(&m, act).map_err(|error| SequenceError { index: i, error })
        });
        assert_eq!(apply_sequence(&a, &actions), folded, "seed {seed}");
    }
}

#[test]
fn input_is_never_modified() {
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let a = gen::architecture(&mut r, 5);
        let copy = a.clone();
        let act = gen::action(&mut r, &a);
        let _ = apply_action(&a, &act);
        assert_eq!(a, copy);
    }
}

#[test]
fn action_lines_round_trip() {
    for seed in 0..500u64 {
        let mut r = rng(seed);
        let a = gen::architecture(&mut r, 5);
        let act = gen::action(&mut r, &a);
        if check_preconditions(&a, &act).is_err() {
            continue;
        }
        let line = format_action(&act);
        let back = parse_action(&line).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{line}"));
        // Behaviors compare after the same simplification the parser applies.
        let applied = apply_action(&a, &back).unwrap();
        assert!(arch_equal(&applied, &apply_action(&a, &act).unwrap()), "seed {seed}: {line}");
    }
}

#[test]
fn removing_a_constrained_component_is_refused() {
    let a = fixture_arch("imaging.garch");
    let mut b = a.clone();
    b.connectors.retain(|k| !k.touches("Store"));
    let e = apply_action(&b, &RefinementAction::RemoveComponent { name: "Store".into() }).unwrap_err();
    assert_eq!(e.code, ActionErrorCode::WouldOrphanConstraint);
    let e = apply_action(&a, &RefinementAction::RemoveComponent { name: "Store".into() }).unwrap_err();
    assert_eq!(e.code, ActionErrorCode::WouldOrphanConnector);
}

#[test]
fn rename_component_updates_every_reference() {
    let a = fixture_arch("imaging.garch");
    let b = apply_action(
        &a,
        &RefinementAction::Rename { old: "Store".into(), new: "Archive".into(), target: RenameTarget::Component },
    )
    .unwrap();
    assert!(b.component("Store").is_none());
    assert_eq!(b.connector("query_store").unwrap().to, Attachment::new("Archive", "fetch"));
    assert!(b.behaviors.contains_key("Archive"));
    assert_eq!(b.constraints_on("Archive").count(), 1);
}

#[test]
fn add_connector_checks_directions_and_usage() {
    let a = fixture_arch("two_services.garch");
    let wrong = RefinementAction::AddConnector {
        connector: Connector::new("back", Attachment::new("Server", "inp"), Attachment::new("Client", "out")),
    };
    assert_eq!(apply_action(&a, &wrong).unwrap_err().code, ActionErrorCode::DirectionMismatch);
    let busy = RefinementAction::AddConnector {
        connector: Connector::new("again", Attachment::new("Client", "out"), Attachment::new("Server", "inp")),
    };
    assert_eq!(apply_action(&a, &busy).unwrap_err().code, ActionErrorCode::PortInUse);
}

#[test]
fn replace_behavior_rejects_foreign_ports() {
    let a = fixture_arch("two_services.garch");
    let act = RefinementAction::ReplaceBehavior {
        component: "Client".into(),
        behavior: Behavior::new(ProcExpr::send("nowhere", ProcExpr::Stop)),
    };
    assert_eq!(apply_action(&a, &act).unwrap_err().code, ActionErrorCode::BehaviorLabelUnknown);
}

use std::collections::{BTreeSet, HashSet};

use gmde_core::analysis::*;
use gmde_core::dsl::{parse_architecture, pretty_print, translate_to_core};
use gmde_core::*;
use gmde_testkit::{fixture_arch, gen, oracle, rng};

fn arch(src: &str) -> Architecture {
    translate_to_core(&parse_architecture(src).unwrap()).unwrap()
}

fn lts_of(src: &str) -> Lts {
    derive_lts(&arch(src), StateCap::default()).unwrap()
}

fn sat(lts: &Lts, f: &MuFormula) -> HashSet<usize> {
    eval_mu(lts, f).unwrap().states().into_iter().collect()
}

fn send(c: &str, p: &str) -> Label {
    Label::Send { component: c.into(), port: p.into() }
}

/// `nu X. (<*>true and [*]X)`
fn always_can_move() -> MuFormula {
    MuFormula::nu("X", MuFormula::and(MuFormula::diamond(LabelPattern::Any, MuFormula::True), MuFormula::boxed(LabelPattern::Any, MuFormula::var("X"))))
}

#[test]
fn stop_is_a_single_terminal_state() {
    let l = lts_of("architecture A { service S { provides x } behavior S = stop }");
    assert_eq!(l.num_states(), 1);
    assert!(l.transitions().is_empty());
    assert_eq!(l.terminal_success(), &BTreeSet::from([0]));
    assert!(check_deadlock_free(&l).is_none());
}

#[test]
fn unattached_send_is_visible() {
    let l = lts_of("architecture A { service C { requires p } behavior C = p!.stop }");
    assert_eq!(l.num_states(), 2);
    assert_eq!(l.transitions().len(), 1);
    assert_eq!(l.transitions()[0].label, send("C", "p"));
    assert_eq!(l.transitions()[0].label.to_string(), "C.p!");
}

#[test]
fn wired_pair_synchronises() {
    let l = lts_of(
        "architecture A { service C { requires a } service S { provides a } connector k { from C.a to S.a } \
         behavior C = a!.stop behavior S = a?.stop }",
    );
    assert_eq!(l.num_states(), 2);
    assert_eq!(l.transitions(), [Transition { source: 0, label: Label::Tau, target: 1 }]);
    assert_eq!(l.terminal_success(), &BTreeSet::from([1]));
}

#[test]
fn independent_senders_interleave() {
    let l = lts_of(
        "architecture A { service C { requires p } service D { requires q } behavior C = p!.stop behavior D = q!.stop }",
    );
    assert_eq!(l.num_states(), 4);
    assert_eq!(l.transitions().len(), 4);
}

#[test]
fn aut_output() {
    let l = lts_of("architecture A { service C { requires p } behavior C = p!.stop }");
    assert_eq!(l.to_aut(), "des (0, 1, 2)\n(0, \"C.p!\", 1)\n");
}

#[test]
fn nu_examples() {
    let f = always_can_move();
    let looped = Lts::new(1, vec![Transition { source: 0, label: Label::Tau, target: 0 }], BTreeSet::new());
    assert_eq!(sat(&looped, &f), HashSet::from([0]));
    let chain = Lts::new(2, vec![Transition { source: 0, label: Label::Tau, target: 1 }], BTreeSet::new());
    assert!(sat(&chain, &f).is_empty());
}

#[test]
fn open_formula_is_rejected() {
    let l = lts_of("architecture A { service S { provides x } behavior S = stop }");
    assert_eq!(eval_mu(&l, &MuFormula::var("Y")).unwrap_err(), AnalysisError::OpenFormula("Y".into()));
}

#[test]
fn agrees_with_subset_iteration_oracle() {
    let labels = gen::lts_alphabet();
    for seed in 0..100 {
        let mut r = rng(seed);
        let lts = gen::lts(&mut r, 1000);
        let f = gen::formula(&mut r, 5, 2, &labels);
        assert!(f.fixpoint_depth() <= 2);
        let got = eval_mu(&lts, &f).unwrap();
        let want = oracle::mu_kleene(&lts, &f);
        assert_eq!(got.states().into_iter().collect::<HashSet<_>>(), want, "seed {seed}: {f:?}");
        assert!(got.stats.max_iterations <= lts.num_states(), "seed {seed}");
        assert!(got.stats.monotone, "seed {seed}");
    }
}

#[test]
fn deeper_nesting_agrees_with_oracle() {
    let labels = gen::lts_alphabet();
    for seed in 0..60 {
        let mut r = rng(5_000 + seed);
        let lts = gen::lts(&mut r, 150);
        let f = gen::formula(&mut r, 8, 4, &labels);
        let got = eval_mu(&lts, &f).unwrap();
        assert_eq!(got.states().into_iter().collect::<HashSet<_>>(), oracle::mu_kleene(&lts, &f), "seed {seed}");
        assert!(got.stats.max_iterations <= lts.num_states());
        assert!(got.stats.monotone);
    }
}

#[test]
fn agrees_with_tarski_oracle_on_small_systems() {
    let labels = gen::lts_alphabet();
    for seed in 0..300 {
        let mut r = rng(10_000 + seed);
        let lts = gen::lts(&mut r, 8);
        let f = gen::formula(&mut r, 5, 2, &labels);
        assert_eq!(sat(&lts, &f), oracle::mu_tarski(&lts, &f), "seed {seed}: {f:?}");
    }
}

#[test]
fn diamond_and_box_are_dual() {
    let labels = gen::lts_alphabet();
    for seed in 0..200 {
        let mut r = rng(20_000 + seed);
        let lts = gen::lts(&mut r, 40);
        let phi = gen::formula(&mut r, 3, 1, &labels);
        let l = LabelPattern::Exact(labels[seed as usize % labels.len()].clone());
        let d = sat(&lts, &MuFormula::diamond(l.clone(), phi.clone()));
        let b = sat(&lts, &MuFormula::boxed(l, phi.dual()));
        let complement: HashSet<usize> = (0..lts.num_states()).filter(|s| !b.contains(s)).collect();
        assert_eq!(d, complement, "seed {seed}");
    }
}

#[test]
fn deadlock_check_matches_nu_encoding() {
    // terminal success becomes a self-loop on a label no system uses
    let ok = send("$", "done");
    for seed in 0..200 {
        let lts = gen::lts(&mut rng(30_000 + seed), 30);
        let mut ts = lts.transitions().to_vec();
        for &s in lts.terminal_success() {
            ts.push(Transition { source: s, label: ok.clone(), target: s });
        }
        let marked = Lts::new(lts.num_states(), ts, BTreeSet::new());
        let free = sat(&marked, &always_can_move()).contains(&0);
        let found = check_deadlock_free(&lts);
        assert_eq!(free, found.is_none(), "seed {seed}");
        assert_eq!(found.map(|p| p.len()), oracle::shortest_deadlock(&lts), "seed {seed}");
    }
}

#[test]
fn witness_path_is_a_real_run() {
    for seed in 0..100 {
        let lts = gen::lts(&mut rng(40_000 + seed), 60);
        let Some(p) = check_deadlock_free(&lts) else { continue };
        let mut stops: Vec<usize> = p.steps.iter().map(|x| x.0).skip(1).collect();
        stops.push(p.target);
        assert_eq!(p.steps.first().map_or(p.target, |x| x.0), 0);
        for ((s, l), next) in p.steps.iter().zip(stops) {
            assert!(lts.outgoing(*s).iter().any(|t| &t.label == l && t.target == next), "seed {seed}");
        }
        assert!(lts.outgoing(p.target).is_empty());
    }
}

#[test]
fn seeded_deadlock_fixture() {
    let a = fixture_arch("deadlock.garch");
    let lts = derive_lts(&a, StateCap::default()).unwrap();
    let p = check_deadlock_free(&lts).expect("deadlock");
    assert_eq!(Some(p.len()), oracle::shortest_deadlock(&lts));
    assert_eq!(p.len(), 2);
    let report = check_architecture(&a, StateCap::default()).unwrap();
    assert!(!report.all_hold());
    assert_eq!(report.properties[0].witness.as_ref(), Some(&p));
}

#[test]
fn fixtures_without_deadlock() {
    for name in ["imaging.garch", "two_services.garch"] {
        let report = check_architecture(&fixture_arch(name), StateCap::default()).unwrap();
        assert!(report.all_hold(), "{name}: {report:?}");
    }
    let report = check_architecture(&fixture_arch("two_services.garch"), StateCap::default()).unwrap();
    let can_start = &report.properties[1];
    assert_eq!(can_start.witness.as_ref().map(|w| w.len()), Some(1));
}

#[test]
fn state_cap_aborts() {
    let a = fixture_arch("state_cap.garch");
    assert_eq!(derive_lts(&a, StateCap::default()).unwrap().num_states(), 64);
    let e = derive_lts(&a, StateCap::new(50).unwrap()).unwrap_err();
    assert_eq!(e, AnalysisError::StateSpaceExceeded { cap: 50, reached: 51 });
    assert!(e.to_string().contains("50"));
    assert!(matches!(check_architecture(&a, StateCap::new(50).unwrap()), Err(AnalysisError::StateSpaceExceeded { cap: 50, .. })));
    assert_eq!(derive_lts(&a, StateCap::new(64).unwrap()).unwrap().num_states(), 64);
    assert!(StateCap::new(0).is_none());
}

#[test]
fn ill_formed_models_are_not_explored() {
    let mut a = fixture_arch("imaging.garch");
    a.connectors[0].to.port = "nope".into();
    assert_eq!(derive_lts(&a, StateCap::default()).unwrap_err().code(), "ILL_FORMED");
}

#[test]
fn equal_models_give_identical_lts() {
    let mut explored = 0;
    for seed in 0..60 {
        let a = gen::architecture(&mut rng(50_000 + seed), 4);
        let Ok(x) = derive_lts(&a, StateCap::new(2000).unwrap()) else { continue };
        explored += 1;
        let b = arch(&pretty_print(&a).unwrap());
        assert!(arch_equal(&a, &b));
        let y = derive_lts(&b, StateCap::new(2000).unwrap()).unwrap();
        assert_eq!(x, y, "seed {seed}");
        assert_eq!(x.to_aut(), y.to_aut());
        assert_eq!(oracle::reachable(&x).len(), x.num_states());
    }
    assert!(explored >= 30, "{explored}");
}

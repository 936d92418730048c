//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line with its runtime. Tolerances and budgets are pinned here.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::HashMap;
use std::time::Instant;

use odowold::classify::{
    popovici_n1, replay_certificate, Certificate, ClassifySession, ComponentId, Status,
};
use odowold::oracle::{
    build_window, check_relations_numeric, compare_with_classifier, project_component_at,
    DEFAULT_VERTEX_CAP,
};
use odowold::rep::{
    explore, is_nica_covariant, verify_relations, Arrow, Image, VertexKey, ViolationKind,
};
use odowold::semigroup::{GeneratorWord, Letter, OdometerElement};

mod common;
use common::{all_builtins, builtin, fn_unitary, inductive, key, sample_vertices};

fn finish(name: &str, started: Instant, limit_secs: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("criterion {name} PASS ({elapsed:.2}s, limit {limit_secs}s)");
    assert!(
        elapsed < limit_secs,
        "criterion {name} exceeded its runtime limit: {elapsed:.2}s >= {limit_secs}s"
    );
}

fn finish_unbounded(name: &str, started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("criterion {name} PASS ({elapsed:.2}s)");
}

fn enumerate_words(n: u8, max_len: usize) -> Vec<Vec<Letter>> {
    let mut alphabet = vec![Letter::W];
    for d in 1..=n {
        alphabet.push(Letter::V(d));
    }
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in &alphabet {
                let mut longer = w.clone();
                longer.push(*a);
                next.push(longer);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words
}

/// Criterion 1: exhaustive semigroup arithmetic for n in {2, 3}: reduce is
/// idempotent over all generator words of length <= 6, multiplication is
/// associative, and normal-form equality coincides with equality of
/// left-regular actions on the basis {|x| <= 8}.
#[test]
fn criterion_1_semigroup_brute_force() {
    let started = Instant::now();
    for n in [2u8, 3] {
        let words = enumerate_words(n, 6);

        // basis elements as (digit word, power) with |mu| + N <= 8
        let mut basis: Vec<(Vec<u8>, u32)> = Vec::new();
        let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
        while let Some(mu) = stack.pop() {
            for power in 0..=(8 - mu.len()) as u32 {
                basis.push((mu.clone(), power));
            }
            if mu.len() < 8 {
                for d in 1..=n {
                    let mut longer = mu.clone();
                    longer.push(d);
                    stack.push(longer);
                }
            }
        }

        // independent action interpreter over (digits, power)
        let act = |letters: &[Letter], x: &(Vec<u8>, u32)| -> (Vec<u8>, u32) {
            let mut digits = x.0.clone();
            let mut power = x.1;
            for letter in letters.iter().rev() {
                match letter {
                    Letter::V(d) => digits.insert(0, *d),
                    Letter::W => {
                        let mut done = false;
                        for slot in digits.iter_mut() {
                            if *slot < n {
                                *slot += 1;
                                done = true;
                                break;
                            }
                            *slot = 1;
                        }
                        if !done {
                            power += 1;
                        }
                    }
                }
            }
            (digits, power)
        };
        let signature = |letters: &[Letter]| -> u64 {
            let mut h: u64 = 0xcbf29ce484222325;
            let mut mix = |b: u8| {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            };
            for x in &basis {
                let (digits, power) = act(letters, x);
                for d in &digits {
                    mix(*d);
                }
                mix(0xff);
                for b in power.to_le_bytes() {
                    mix(b);
                }
            }
            h
        };

        let mut by_nf: HashMap<OdometerElement, u64> = HashMap::new();
        let mut by_sig: HashMap<u64, OdometerElement> = HashMap::new();
        for letters in &words {
            let word = GeneratorWord::new(n, letters.clone()).unwrap();
            let nf = word.reduce();
            assert_eq!(nf.to_word().reduce(), nf, "reduce must be idempotent");
            let sig = signature(letters);
            if let Some(prev) = by_nf.get(&nf) {
                assert_eq!(*prev, sig, "equal normal forms, different actions (n={n})");
            } else {
                by_nf.insert(nf.clone(), sig);
            }
            if let Some(prev) = by_sig.get(&sig) {
                assert_eq!(*prev, nf, "equal actions, different normal forms (n={n})");
            } else {
                by_sig.insert(sig, nf);
            }
        }

        // associativity: exhaustive over short elements, then the random
        // triples live in the property suite
        let short: Vec<OdometerElement> = by_nf
            .keys()
            .filter(|x| x.length() <= 2)
            .cloned()
            .collect();
        for a in &short {
            for b in &short {
                for c in &short {
                    let left = a.multiply(b).unwrap().multiply(c).unwrap();
                    let right = a.multiply(&b.multiply(c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
    finish("1 (semigroup brute force)", started, 10.0);
}

/// Criterion 2: all six builtins satisfy the defining relations exactly to
/// depth 8, and their radius-6 matrix windows carry residuals <= 1e-12.
#[test]
fn criterion_2_builtin_soundness() {
    let started = Instant::now();
    for (name, rep) in all_builtins() {
        let report = verify_relations(&rep, &rep.canonical_seeds(), 8);
        assert!(report.passed(), "{name}: {:?}", report.first());

        let win = build_window(&rep, &rep.canonical_seeds(), 6, DEFAULT_VERTEX_CAP).unwrap();
        let numeric = check_relations_numeric(&win, 1e-12);
        assert!(numeric.interior_checked > 0, "{name}: empty interior");
        assert!(
            numeric.max_relation_residual() <= 1e-12,
            "{name}: residual {_max:e}",
            _max = numeric.max_relation_residual()
        );
    }
    finish("2 (builtin soundness)", started, 30.0);
}

/// Criterion 3: the example classifications reproduce the expected
/// components with zero Unknowns at budget 32.
#[test]
fn criterion_3_example_classifications() {
    let started = Instant::now();
    let budget = 32;

    let expectations: Vec<(&str, odowold::rep::AtomicRep, ComponentId)> = vec![
        ("left_regular_on(2)", builtin("left_regular_on", 2), ComponentId::SS),
        ("left_regular_fn_unitary(2,1/3)", fn_unitary(2, "1/3"), ComponentId::US),
        ("su_tree(2)", builtin("su_tree", 2), ComponentId::SU),
        ("inductive(2,thue_morse)", inductive(2, "thue_morse"), ComponentId::UU),
        ("weak_shift(2)", builtin("weak_shift", 2), ComponentId::WS),
        ("slocinski", builtin("slocinski", 1), ComponentId::WS),
    ];
    for (name, rep, expected) in &expectations {
        let sample = explore(rep, &rep.canonical_seeds(), 4).order;
        assert!(!sample.is_empty());
        let mut session = ClassifySession::new(rep, budget);
        for v in &sample {
            let c = session.classify(v);
            for (component, status) in c.statuses() {
                assert_ne!(
                    status,
                    Status::Unknown,
                    "{name}: component {component:?} unknown at {v}"
                );
            }
            assert_eq!(c.resolved, Some(*expected), "{name} at {v}");
            if *expected == ComponentId::SS {
                let ss = c.ss.as_ref().expect("ss refinement");
                assert!(matches!(
                    ss.certificate,
                    Some(Certificate::StripPath { .. })
                ));
            }
            if *name == "weak_shift(2)" {
                assert!(c.uu.is_out() && c.us.is_out() && c.su.is_out());
                assert!(c.ss.is_none());
            }
        }
    }

    // the fn-unitary eigenvector phase
    let fu = fn_unitary(2, "1/3");
    let w_eps = fu.w_of(&key("e"));
    assert_eq!(
        w_eps.arrow().unwrap().phase,
        odowold::phase::Phase::new(1, 3),
        "W e_ε must carry the chosen eigenvalue"
    );

    // slocinski pinned at the origin
    let c = popovici_n1(&builtin("slocinski", 1), &key("(0,0)"), budget).unwrap();
    assert_eq!(c.resolved, Some(ComponentId::WS));

    finish("3 (example classifications)", started, 60.0);
}

/// Criterion 4: exact Nica covariance checks — the left regular families and
/// both unitary-W builtins pass; weak_shift(2) fails with witness (-1,0).
#[test]
fn criterion_4_nica_covariance() {
    let started = Instant::now();
    for n in [1u8, 2, 3] {
        let rep = builtin("left_regular_on", n);
        let report = is_nica_covariant(&rep, &rep.canonical_seeds(), 6);
        assert!(report.passed(), "left_regular_on({n}): {:?}", report.first());
    }
    for (name, rep) in [
        ("left_regular_fn_unitary", fn_unitary(2, "1/3")),
        ("inductive", inductive(2, "thue_morse")),
        ("su_tree", builtin("su_tree", 2)),
    ] {
        let report = is_nica_covariant(&rep, &rep.canonical_seeds(), 6);
        assert!(report.passed(), "{name}: {:?}", report.first());
    }
    let rep = builtin("weak_shift", 2);
    let report = is_nica_covariant(&rep, &rep.canonical_seeds(), 6);
    assert!(!report.passed());
    assert_eq!(report.first().unwrap().vertex, key("(-1,0)"));
    finish_unbounded("4 (nica covariance)", started);
}

/// Criterion 5: the matrix oracle agrees with the classifier on every
/// interior vertex of every builtin at radius 6, depth 4, tol 1e-6; at rank
/// one, classify, the commuting-pair formulas, and the projections agree
/// three ways on |r|, |t| <= 8.
#[test]
fn criterion_5_dual_implementation_agreement() {
    let started = Instant::now();
    let cases: Vec<(&str, u32, odowold::rep::AtomicRep)> = vec![
        ("left_regular_on(2)", 3, builtin("left_regular_on", 2)),
        ("left_regular_fn_unitary(2,1/3)", 4, fn_unitary(2, "1/3")),
        ("su_tree(2)", 4, builtin("su_tree", 2)),
        ("weak_shift(2)", 3, builtin("weak_shift", 2)),
        ("inductive(2,thue_morse)", 3, inductive(2, "thue_morse")),
        ("slocinski", 4, builtin("slocinski", 1)),
    ];
    for (name, seed_ball, rep) in &cases {
        let seeds = explore(rep, &rep.canonical_seeds(), *seed_ball).order;
        let report = compare_with_classifier(rep, &seeds, 6, 4, 1e-6, 32).unwrap();
        assert!(report.vertices_checked > 0, "{name}: empty interior");
        assert_eq!(report.skipped_unknown, 0, "{name}: unknowns in the interior");
        assert_eq!(
            report.skipped_shallow, 0,
            "{name}: certificates outreach the projection depth"
        );
        assert!(report.comparisons >= 4 * report.vertices_checked);
        assert!(
            report.passed(),
            "{name}: {:?}",
            report.disagreements.first()
        );
    }

    // rank-1 triple agreement on the grid |r|, |t| <= 8
    let rep = builtin("slocinski", 1);
    let mut grid = Vec::new();
    for r in -8..=8i64 {
        for t in -8..=8i64 {
            if r >= 0 || t >= 0 {
                grid.push(key(&format!("({r},{t})")));
            }
        }
    }
    let win = build_window(&rep, &grid, 12, DEFAULT_VERTEX_CAP).unwrap();
    let depth = 12;
    for v in &grid {
        let a = odowold::classify::classify(&rep, v, 64);
        let b = popovici_n1(&rep, v, 64).unwrap();
        assert_eq!(a.resolved, b.resolved, "dual mismatch at {v}");
        assert!(a.resolved.is_some(), "unknown at {v}");
        for (component, verdict) in [
            (ComponentId::UU, &a.uu),
            (ComponentId::US, &a.us),
            (ComponentId::SU, &a.su),
            (ComponentId::WS, &a.ws),
        ] {
            assert_eq!(
                verdict.status,
                b.verdict(component).unwrap().status,
                "dual status mismatch at {v} {component:?}"
            );
            let norm = project_component_at(&win, component, depth, std::slice::from_ref(v))[v];
            match verdict.status {
                Status::In => assert!(norm >= 1.0 - 1e-6, "at {v} {component:?}: {norm}"),
                Status::Out => assert!(norm <= 1e-6, "at {v} {component:?}: {norm}"),
                Status::Unknown => panic!("unknown at {v}"),
            }
        }
    }
    finish("5 (dual implementation agreement)", started, 120.0);
}

/// Criterion 6: invariant suites over at least 200 sampled vertices per
/// builtin — partition, reducing closure, phase independence, certificate
/// replay, projection monotonicity, boundary stability.
#[test]
fn criterion_6_invariant_suites() {
    let started = Instant::now();
    let budget = 64;
    for (name, rep) in all_builtins() {
        let sample = sample_vertices(&rep, 200);
        assert!(sample.len() >= 200, "{name}: sample too small");
        let mut session = ClassifySession::new(&rep, budget);
        let classifications: Vec<_> = sample.iter().map(|v| session.classify(v)).collect();

        // partition
        for c in &classifications {
            let ins = c.statuses().iter().filter(|(_, s)| *s == Status::In).count();
            assert!(ins <= 1, "{name}: partition violated at {}", c.vertex);
            if c.statuses().iter().all(|(_, s)| *s != Status::Unknown) {
                assert_eq!(ins, 1, "{name}: exhaustiveness violated at {}", c.vertex);
            }
        }

        // reducing closure under all 2n+2 arrows
        let canon = |c: ComponentId| match c {
            ComponentId::SS => ComponentId::WS,
            other => other,
        };
        for c in &classifications {
            let Some(resolved) = c.resolved else { continue };
            let v = &c.vertex;
            let mut neighbors = Vec::new();
            let mut push = |img: Image| {
                if let Image::Arrow(a) = img {
                    neighbors.push(a.target);
                }
            };
            push(rep.w_of(v));
            push(rep.w_back(v));
            for k in 1..=rep.rank() {
                push(rep.v_of(k, v));
                push(rep.v_back(k, v));
            }
            for u in neighbors {
                if let Some(other) = session.classify(&u).resolved {
                    assert_eq!(
                        canon(other),
                        canon(resolved),
                        "{name}: reducing closure fails {v} -> {u}"
                    );
                }
            }
        }

        // phase independence
        let stripped = rep.strip_phases();
        let mut bare = ClassifySession::new(&stripped, budget);
        for c in &classifications {
            let b = bare.classify(&c.vertex);
            assert_eq!(c.resolved, b.resolved, "{name} at {}", c.vertex);
            for ((ca, sa), (_, sb)) in c.statuses().iter().zip(b.statuses().iter()) {
                assert_eq!(sa, sb, "{name}: {ca:?} phase-dependent at {}", c.vertex);
            }
        }

        // certificate replay
        for c in &classifications {
            let ss_verdict = c.ss.iter().collect::<Vec<_>>();
            for verdict in [&c.uu, &c.us, &c.su, &c.ws]
                .into_iter()
                .chain(ss_verdict)
            {
                if let Some(cert) = &verdict.certificate {
                    assert!(
                        replay_certificate(&rep, cert),
                        "{name}: certificate fails replay at {}",
                        c.vertex
                    );
                }
            }
        }

        // projection monotonicity in depth for the unitary-row-unitary
        // component (an intersection of a decreasing family)
        let win = build_window(&rep, &explore(&rep, &rep.canonical_seeds(), 3).order, 6,
            DEFAULT_VERTEX_CAP)
        .unwrap();
        let eval: Vec<VertexKey> = win.keys().iter().take(200).cloned().collect();
        let mut last: Option<std::collections::BTreeMap<VertexKey, f64>> = None;
        for depth in 0..=4 {
            let values = project_component_at(&win, ComponentId::UU, depth, &eval);
            if let Some(prev) = &last {
                for (v, value) in &values {
                    assert!(
                        *value <= prev[v] + 1e-12,
                        "{name}: projection grew with depth at {v}"
                    );
                }
            }
            last = Some(values);
        }

        // boundary stability: enlarging the radius by 2 does not move the
        // projection values at the center of a per-vertex window
        for v in sample.iter().take(200) {
            let small = build_window(&rep, std::slice::from_ref(v), 3, DEFAULT_VERTEX_CAP).unwrap();
            let big = build_window(&rep, std::slice::from_ref(v), 5, DEFAULT_VERTEX_CAP).unwrap();
            for component in [ComponentId::UU, ComponentId::US, ComponentId::SU] {
                let a = project_component_at(&small, component, 1, std::slice::from_ref(v))[v];
                let b = project_component_at(&big, component, 1, std::slice::from_ref(v))[v];
                assert!(
                    (a - b).abs() <= 1e-6,
                    "{name}: {component:?} moved {a} -> {b} at {v}"
                );
            }
        }
    }
    finish_unbounded("6 (invariant suites)", started);
}

/// Criterion 7: the induced W is the unique map satisfying the relations on
/// the row-unitary builtins — any single perturbed arrow breaks a relation
/// within depth 2.
#[test]
fn criterion_7_induced_w_uniqueness() {
    let started = Instant::now();
    for (name, rep) in [
        ("su_tree(2)", builtin("su_tree", 2)),
        ("inductive(2,thue_morse)", inductive(2, "thue_morse")),
    ] {
        // the builtin W is the induced one
        let pool = sample_vertices(&rep, 120);
        for v in pool.iter().take(60) {
            let induced = odowold::rep::induce_w(&rep, v, None).unwrap();
            assert_eq!(rep.w_of(v).arrow(), Some(&induced), "{name}: at {v}");
        }

        // fault injection: 50 random single-arrow perturbations
        let mut state = 0x853c49e6748fea9bu64;
        let mut rand = move |bound: usize| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % bound
        };
        for round in 0..50 {
            let v0 = pool[rand(pool.len())].clone();
            let correct = rep.w_of(&v0).arrow().unwrap().clone();
            let perturbed = if round % 3 == 0 {
                // keep the target, break the phase
                Arrow::new(correct.target.clone(), odowold::phase::Phase::new(1, 2))
            } else {
                let mut target = pool[rand(pool.len())].clone();
                while target == correct.target {
                    target = pool[rand(pool.len())].clone();
                }
                Arrow::new(target, correct.phase)
            };
            let bad = rep.with_w_override(v0.clone(), perturbed);
            let report = verify_relations(&bad, std::slice::from_ref(&v0), 2);
            let relation_broken = report
                .violations
                .iter()
                .any(|viol| matches!(viol.kind, ViolationKind::Relation { .. }));
            assert!(
                relation_broken,
                "{name}: perturbation {round} at {v0} slipped through"
            );
        }
    }
    finish_unbounded("7 (induced W uniqueness)", started);
}

//! Invariant suites for the classifier: partition, reducing closure, phase
//! independence, certificate replay, the Nica-covariant coincidence, and the
//! rank-1 dual implementation.

use odowold::classify::{
    classify, popovici_n1, replay_certificate, Certificate, ClassifySession, ComponentId, Status,
};
use odowold::rep::{AtomicRep, Image, VertexKey};

mod common;
use common::{all_builtins, builtin, key, sample_vertices};

const BUDGET: u32 = 32;

/// At most one component claims each vertex; when every verdict is
/// conclusive, exactly one does.
#[test]
fn partition_at_most_one_in() {
    for (name, rep) in all_builtins() {
        let mut session = ClassifySession::new(&rep, BUDGET);
        for v in sample_vertices(&rep, 200) {
            let c = session.classify(&v);
            let ins = c.statuses().iter().filter(|(_, s)| *s == Status::In).count();
            assert!(ins <= 1, "{name}: two components claim {v}");
            if c.statuses().iter().all(|(_, s)| *s != Status::Unknown) {
                assert_eq!(ins, 1, "{name}: conclusive vertex {v} claimed by none");
            }
        }
    }
}

/// The components are reducing: every defined arrow out of a resolved vertex
/// leads to a vertex resolving to the same component (SS and WS both name
/// the residual component).
#[test]
fn resolved_components_are_reducing() {
    let canon = |c: ComponentId| match c {
        ComponentId::SS => ComponentId::WS,
        other => other,
    };
    for (name, rep) in all_builtins() {
        let mut session = ClassifySession::new(&rep, BUDGET);
        for v in sample_vertices(&rep, 120) {
            let Some(resolved) = session.classify(&v).resolved else {
                continue;
            };
            let mut neighbors: Vec<VertexKey> = Vec::new();
            let mut push = |img: Image| {
                if let Image::Arrow(a) = img {
                    neighbors.push(a.target);
                }
            };
            push(rep.w_of(&v));
            push(rep.w_back(&v));
            for k in 1..=rep.rank() {
                push(rep.v_of(k, &v));
                push(rep.v_back(k, &v));
            }
            for u in neighbors {
                if let Some(other) = session.classify(&u).resolved {
                    assert_eq!(
                        canon(other),
                        canon(resolved),
                        "{name}: {v} resolves {resolved:?} but its neighbor {u} resolves {other:?}"
                    );
                }
            }
        }
    }
}

/// The subspace formulas depend only on arrow supports, so stripping every
/// phase must not change any verdict.
#[test]
fn classification_is_phase_independent() {
    for (name, rep) in all_builtins() {
        let stripped = rep.strip_phases();
        let mut full = ClassifySession::new(&rep, BUDGET);
        let mut bare = ClassifySession::new(&stripped, BUDGET);
        for v in sample_vertices(&rep, 200) {
            let a = full.classify(&v);
            let b = bare.classify(&v);
            assert_eq!(a.resolved, b.resolved, "{name} at {v}");
            for ((ca, sa), (cb, sb)) in a.statuses().iter().zip(b.statuses().iter()) {
                assert_eq!(ca, cb);
                assert_eq!(sa, sb, "{name}: component {ca:?} differs at {v}");
            }
        }
    }
}

/// Every certificate the classifier emits replays against the arrows.
#[test]
fn certificates_replay_everywhere() {
    for (name, rep) in all_builtins() {
        let mut session = ClassifySession::new(&rep, BUDGET);
        let mut replayed = 0usize;
        for v in sample_vertices(&rep, 150) {
            let c = session.classify(&v);
            for verdict in [&c.uu, &c.us, &c.su, &c.ws] {
                if let Some(cert) = &verdict.certificate {
                    assert!(replay_certificate(&rep, cert), "{name}: stale cert at {v}");
                    replayed += 1;
                }
            }
            if let Some(ss) = &c.ss {
                let cert = ss.certificate.as_ref().unwrap();
                assert!(replay_certificate(&rep, cert), "{name}: stale ss cert at {v}");
                replayed += 1;
            }
        }
        assert!(replayed > 0, "{name}: nothing to replay");
    }
}

/// On Nica-covariant representations the residual component coincides with
/// copies of the left regular representation: every weak-bi-shift vertex
/// carries a strip-path certificate and is reported as SS.
#[test]
fn nica_covariant_ws_coincides_with_ss() {
    // among the builtins, only the left regular families have a nonzero
    // residual component while being Nica-covariant. The W-strip of
    // v_μ w^N crosses the full digit cycle twice, so the budget must cover
    // 2·n^{|μ|} steps for the deepest sampled word.
    for n in [1u8, 2] {
        let rep = builtin("left_regular_on", n);
        let mut session = ClassifySession::new(&rep, 64);
        for v in sample_vertices(&rep, 150) {
            let c = session.classify(&v);
            assert_eq!(c.resolved, Some(ComponentId::SS), "left_regular({n}) at {v}");
            assert_eq!(c.ws.status, Status::In);
            let ss = c.ss.expect("ss refinement");
            assert!(matches!(
                ss.certificate,
                Some(Certificate::StripPath { .. })
            ));
        }
    }
    // weak_shift resolves WS but must never claim SS; its W-strips walk
    // t down past zero, so the budget covers the deepest sampled t
    let rep = builtin("weak_shift", 2);
    let mut session = ClassifySession::new(&rep, 64);
    for v in sample_vertices(&rep, 150) {
        let c = session.classify(&v);
        assert_eq!(c.resolved, Some(ComponentId::WS), "weak_shift at {v}");
        assert!(c.ss.is_none(), "weak_shift must not claim SS at {v}");
    }
}

/// Eventually periodic chains still produce a unitary-row-unitary family
/// as long as the stream is not all one digit.
#[test]
fn cyclic_inductive_chains_classify_uu() {
    let rep = common::inductive(2, "periodic:12");
    let mut session = ClassifySession::new(&rep, BUDGET);
    for v in sample_vertices(&rep, 120) {
        let c = session.classify(&v);
        assert_eq!(c.resolved, Some(ComponentId::UU), "at {v}");
    }
}

/// The general-rank classifier and the commuting-pair formulas agree
/// verdict for verdict wherever both are conclusive.
#[test]
fn rank_one_dual_implementation_agrees() {
    let reps: Vec<(&str, AtomicRep)> = vec![
        ("slocinski", builtin("slocinski", 1)),
        ("left_regular_on(1)", builtin("left_regular_on", 1)),
    ];
    for (name, rep) in &reps {
        for v in sample_vertices(rep, 250) {
            let a = classify(rep, &v, BUDGET);
            let b = popovici_n1(rep, &v, BUDGET).unwrap();
            for c in [
                ComponentId::UU,
                ComponentId::US,
                ComponentId::SU,
                ComponentId::WS,
            ] {
                let sa = a.verdict(c).unwrap().status;
                let sb = b.verdict(c).unwrap().status;
                if sa != Status::Unknown && sb != Status::Unknown {
                    assert_eq!(sa, sb, "{name}: {c:?} differs at {v}");
                }
            }
            if a.resolved.is_some() && b.resolved.is_some() {
                assert_eq!(a.resolved, b.resolved, "{name} at {v}");
            }
        }
    }
    // Słociński's pair on the exhaustive grid |r|, |t| ≤ 10
    let rep = builtin("slocinski", 1);
    for r in -10..=10i64 {
        for t in -10..=10i64 {
            if r < 0 && t < 0 {
                continue;
            }
            let v = key(&format!("({r},{t})"));
            let a = classify(&rep, &v, 64);
            let b = popovici_n1(&rep, &v, 64).unwrap();
            assert_eq!(a.resolved, b.resolved, "at {v}");
            assert_eq!(a.resolved, Some(ComponentId::WS), "at {v}");
        }
    }
}

/// A finite file-backed patch classifies like its parent family where the
/// hints and arrows suffice, and honestly reports Unknown at the boundary.
#[test]
fn finite_patch_classification() {
    use odowold::format::{emit_rep_file, parse_rep_file};
    let parent = builtin("weak_shift", 2);
    let text = emit_rep_file(&parent, &parent.canonical_seeds(), 3);
    let rep = parse_rep_file(&text).unwrap();

    // the origin resolves through the file-carried hints alone
    let c = classify(&rep, &key("(0,0)"), 16);
    assert_eq!(c.resolved, Some(ComponentId::WS));
    assert!(c.uu.is_out() && c.us.is_out() && c.su.is_out());

    // a rim vertex's backward orbit leaves the patch: Unknown, never a guess
    let rim = key("(3,3)");
    assert!(rep.is_boundary(&rim), "expected a boundary vertex");
    let c = classify(&rep, &rim, 16);
    assert_eq!(c.uu.status, Status::Unknown);
    assert!(c.resolved.is_none());
}

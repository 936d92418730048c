//! Structural property suites for the builtin representation families.

use odowold::phase::Phase;
use odowold::rep::{
    explore, induce_w, is_nica_covariant, validate_hints, verify_relations, Arrow, Image,
    JointBack, VertexKey,
};

mod common;
use common::{all_builtins, builtin, fn_unitary, inductive, sample_vertices};

#[test]
fn every_builtin_verifies_at_depth_8() {
    for (name, rep) in all_builtins() {
        let report = verify_relations(&rep, &rep.canonical_seeds(), 8);
        assert!(report.passed(), "{name}: {:?}", report.first());
        assert!(report.explored > 0);
    }
}

#[test]
fn every_builtin_hint_validates() {
    for (name, rep) in all_builtins() {
        let report = validate_hints(&rep, &rep.canonical_seeds(), 7);
        assert!(report.passed(), "{name}: {:?}", report.first());
    }
}

/// backward ∘ forward is the identity (with conjugate phase) for W and each
/// V_k, over 500 pseudo-randomly chosen explored vertices per family.
#[test]
fn injectivity_round_trip() {
    for (name, rep) in all_builtins() {
        let pool = sample_vertices(&rep, 600);
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..500 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let v = &pool[(state >> 33) as usize % pool.len()];
            if let Image::Arrow(a) = rep.w_of(v) {
                let back = rep.w_back(&a.target);
                assert_eq!(
                    back,
                    Image::Arrow(Arrow::new(v.clone(), a.phase.conj())),
                    "{name}: W round trip at {v}"
                );
            }
            for k in 1..=rep.rank() {
                if let Image::Arrow(a) = rep.v_of(k, v) {
                    let back = rep.v_back(k, &a.target);
                    assert_eq!(
                        back,
                        Image::Arrow(Arrow::new(v.clone(), a.phase.conj())),
                        "{name}: V_{k} round trip at {v}"
                    );
                }
            }
        }
    }
}

/// Row-unitary families cover every vertex by exactly one V-range;
/// left-regular families leave wandering vertices uncovered.
#[test]
fn range_partition() {
    for name in ["su_tree", "inductive"] {
        let rep = if name == "su_tree" {
            builtin("su_tree", 2)
        } else {
            inductive(2, "thue_morse")
        };
        for v in sample_vertices(&rep, 300) {
            let mut hits = 0;
            for k in 1..=rep.rank() {
                if rep.v_back(k, &v).arrow().is_some() {
                    hits += 1;
                }
            }
            assert_eq!(hits, 1, "{name}: expected exactly one V-preimage at {v}");
        }
    }
    // the left regular representation misses the pure powers of w
    let rep = builtin("left_regular_on", 2);
    assert_eq!(rep.joint_v_back(&VertexKey::new("v[]w^3")), JointBack::Zero);
}

/// Wherever `W` is locally surjective, the representation is seen to be
/// Nica-covariant on that region.
#[test]
fn local_w_surjectivity_forces_nica() {
    let cases: Vec<(&str, odowold::rep::AtomicRep, Vec<VertexKey>, u32)> = vec![
        ("fn_unitary", fn_unitary(2, "1/3"), vec![VertexKey::new("e")], 6),
        (
            "inductive",
            inductive(2, "thue_morse"),
            vec![VertexKey::new("g0")],
            6,
        ),
        (
            "weak_shift interior",
            builtin("weak_shift", 2),
            vec![VertexKey::new("(5,5)")],
            2,
        ),
    ];
    for (name, rep, seeds, depth) in cases {
        let set = explore(&rep, &seeds, depth);
        let w_back_total = set
            .order
            .iter()
            .all(|v| rep.w_back(v).arrow().is_some());
        assert!(w_back_total, "{name}: the chosen region must have total W*");
        let report = is_nica_covariant(&rep, &seeds, depth);
        assert!(report.passed(), "{name}: {:?}", report.first());
    }
}

/// Rescaling every phase by per-generator scalars compatible with the
/// relations keeps them satisfied; an incoherent single flip does not.
#[test]
fn phase_coherence() {
    // n = 2 forces the W-scalar to 1 (it must satisfy α^{n-1} = 1), the
    // V-scalars must then agree with each other
    let rep = builtin("su_tree", 2);
    let rescaled = rep.rescale_phases(Phase::ONE, vec![Phase::new(2, 5), Phase::new(2, 5)]);
    let report = verify_relations(&rescaled, &rescaled.canonical_seeds(), 5);
    assert!(report.passed(), "{:?}", report.first());

    // n = 3 admits α of order 2: β_k = β α^{k-1}
    let rep3 = builtin("left_regular_on", 3);
    let alpha = Phase::new(1, 2);
    let beta = Phase::new(1, 7);
    let v_scalars = vec![
        beta,
        beta.mul(&alpha),
        beta.mul(&alpha).mul(&alpha),
    ];
    let rescaled3 = rep3.rescale_phases(alpha, v_scalars);
    let report3 = verify_relations(&rescaled3, &rescaled3.canonical_seeds(), 4);
    assert!(report3.passed(), "{:?}", report3.first());

    // flipping one phase on one side of a relation breaks it
    let target = rep.w_of(&VertexKey::new("2")).arrow().unwrap().clone();
    let flipped = rep.with_w_override(
        VertexKey::new("2"),
        Arrow::new(target.target, target.phase.mul(&Phase::new(1, 3))),
    );
    let report = verify_relations(&flipped, &flipped.canonical_seeds(), 3);
    assert!(!report.passed());
}

/// In the fn-unitary family, W preserves the level of every word.
#[test]
fn graded_w_preserves_address_length() {
    let rep = fn_unitary(2, "1/3");
    let len = |v: &VertexKey| if v.as_str() == "e" { 0 } else { v.as_str().len() };
    for v in sample_vertices(&rep, 250) {
        let w = rep.w_of(&v).arrow().unwrap().clone();
        assert_eq!(len(&w.target), len(&v), "W must preserve level at {v}");
    }
}

/// Backward totality of the product family `{WV_i}` over a region is
/// equivalent to joint totality of W* and the V-adjoints there.
#[test]
fn wv_totality_factors_through_w_and_v() {
    for stream in ["thue_morse", "periodic:12", "periodic:1"] {
        let rep = inductive(2, stream);
        let sample = sample_vertices(&rep, 200);
        let all_wv = sample
            .iter()
            .all(|v| matches!(rep.wv_back(v), JointBack::Arrow(..)));
        let all_w = sample.iter().all(|v| rep.w_back(v).arrow().is_some());
        let all_v = sample
            .iter()
            .all(|v| matches!(rep.joint_v_back(v), JointBack::Arrow(..)));
        assert_eq!(
            all_wv,
            all_w && all_v,
            "stream {stream}: {{WV_i}} totality must match W-and-V totality"
        );
    }
}

/// The generic induced-W construction reproduces each builtin's W.
#[test]
fn induced_w_matches_builtins() {
    use odowold::semigroup::OdometerElement;
    let su = builtin("su_tree", 2);
    let ind = inductive(2, "thue_morse");
    for rep in [&su, &ind] {
        for v in sample_vertices(rep, 200) {
            let induced = induce_w(rep, &v, None).unwrap();
            assert_eq!(rep.w_of(&v).arrow(), Some(&induced), "at {v}");
        }
    }
    // fn_unitary needs its wandering unitary λ on e_ε
    let rep = fn_unitary(2, "1/3");
    let lambda = Phase::new(1, 3);
    let map = move |v: &VertexKey| (v.as_str() == "e").then(|| (VertexKey::new("e"), lambda));
    for v in sample_vertices(&rep, 200) {
        let induced = induce_w(&rep, &v, Some(&map)).unwrap();
        assert_eq!(rep.w_of(&v).arrow(), Some(&induced), "at {v}");
    }
    // left_regular_on: the wandering unitary is the shift on the powers of w
    let rep = builtin("left_regular_on", 2);
    let map = |v: &VertexKey| -> Option<(VertexKey, Phase)> {
        let x = OdometerElement::parse_key(v.as_str(), 2)?;
        x.mu().is_empty().then(|| {
            let up = OdometerElement::new(2, vec![], x.power() + 1).unwrap();
            (VertexKey::new(up.key_string()), Phase::ONE)
        })
    };
    for v in sample_vertices(&rep, 200) {
        let induced = induce_w(&rep, &v, Some(&map)).unwrap();
        assert_eq!(rep.w_of(&v).arrow(), Some(&induced), "at {v}");
    }
}

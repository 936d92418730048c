//! Shared helpers for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use odowold::rep::{explore, make_builtin, AtomicRep, VertexKey};

pub fn builtin(name: &str, n: u8) -> AtomicRep {
    make_builtin(name, n, &BTreeMap::new()).unwrap()
}

pub fn fn_unitary(n: u8, lambda: &str) -> AtomicRep {
    let mut p = BTreeMap::new();
    p.insert("lambda".to_string(), lambda.to_string());
    make_builtin("left_regular_fn_unitary", n, &p).unwrap()
}

pub fn inductive(n: u8, stream: &str) -> AtomicRep {
    let mut p = BTreeMap::new();
    p.insert("stream".to_string(), stream.to_string());
    make_builtin("inductive", n, &p).unwrap()
}

/// The six builtin families at their canonical parameters.
pub fn all_builtins() -> Vec<(&'static str, AtomicRep)> {
    vec![
        ("left_regular_on(2)", builtin("left_regular_on", 2)),
        ("left_regular_fn_unitary(2,1/3)", fn_unitary(2, "1/3")),
        ("su_tree(2)", builtin("su_tree", 2)),
        ("weak_shift(2)", builtin("weak_shift", 2)),
        ("inductive(2,thue_morse)", inductive(2, "thue_morse")),
        ("slocinski", builtin("slocinski", 1)),
    ]
}

/// First `count` vertices in breadth-first order from the canonical seeds,
/// growing the exploration depth until enough are found.
pub fn sample_vertices(rep: &AtomicRep, count: usize) -> Vec<VertexKey> {
    let seeds = rep.canonical_seeds();
    for depth in 1..=14 {
        let set = explore(rep, &seeds, depth);
        if set.order.len() >= count {
            return set.order.into_iter().take(count).collect();
        }
    }
    explore(rep, &seeds, 14).order
}

pub fn key(s: &str) -> VertexKey {
    VertexKey::new(s)
}

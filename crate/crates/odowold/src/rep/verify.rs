//! Exact structural checks: defining relations, Nica covariance, hint
//! validation.

use std::fmt;

use serde::Serialize;

use super::{explore, AtomicRep, HintKind, Image, JointBack, VertexKey};

/// What went wrong at one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// `W V_k e_v != V_{k+1} e_v` (for `k < n`) or `W V_n e_v != V_1 W e_v`.
    Relation { name: String },
    /// Backward map does not invert the forward map (or vice versa).
    Inconsistent { map: String },
    /// Two distinct `V_k` ranges contain the vertex.
    RangeOverlap { first: u8, second: u8 },
    /// A non-boundary vertex of a finite representation lacks a forward arrow.
    MissingArrow { map: String },
    /// `W* V_1 e_v != V_n W* e_v`.
    NicaCovariance,
    /// A hinted region promise failed at the vertex.
    HintBroken { kind: String },
}

/// A check failure with its witness vertex and both sides rendered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: VertexKey,
    pub kind: ViolationKind,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at {}: expected {}, found {}",
            self.kind, self.vertex, self.expected, self.found
        )
    }
}

/// Outcome of an exact regional check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub explored: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

fn render(img: &Image) -> String {
    match img {
        Image::Arrow(a) => {
            if a.phase.is_one() {
                format!("e_{}", a.target)
            } else {
                format!("{}·e_{}", a.phase, a.target)
            }
        }
        Image::Zero => "0".to_string(),
        Image::Unexplored => "?".to_string(),
    }
}

/// Explores from the seeds and checks, vertex by vertex with exact phase
/// arithmetic: injectivity and forward/backward consistency of every symbol
/// map, pairwise disjointness of the `V_k` ranges, and both defining
/// relations `W V_k = V_{k+1}` and `W V_n = V_1 W`.
///
/// Violations are data, not errors; the report carries the first few with
/// their witnesses. Checks whose arrows leave the explored window of a
/// finite representation are skipped rather than failed.
pub fn verify_relations(rep: &AtomicRep, seeds: &[VertexKey], depth: u32) -> CheckReport {
    let set = explore(rep, seeds, depth);
    let n = rep.rank();
    let mut violations = Vec::new();
    let mut fail = |vertex: &VertexKey, kind: ViolationKind, expected: String, found: String| {
        if violations.len() < 16 {
            violations.push(Violation {
                vertex: vertex.clone(),
                kind,
                expected,
                found,
            });
        }
    };

    for v in &set.order {
        // forward/backward consistency for W
        match rep.w_of(v) {
            Image::Arrow(a) => {
                let back = rep.w_back(&a.target);
                let expect = Image::Arrow(super::Arrow::new(v.clone(), a.phase.conj()));
                if !matches!(back, Image::Unexplored) && back != expect {
                    fail(
                        v,
                        ViolationKind::Inconsistent {
                            map: "w".to_string(),
                        },
                        render(&expect),
                        render(&back),
                    );
                }
            }
            Image::Zero => unreachable!("forward maps never produce Zero"),
            Image::Unexplored => {
                if !rep.is_boundary(v) && rep.finite_vertices().is_some() {
                    fail(
                        v,
                        ViolationKind::MissingArrow {
                            map: "w".to_string(),
                        },
                        "an arrow".to_string(),
                        "nothing".to_string(),
                    );
                }
            }
        }
        // forward/backward consistency for each V_k
        for k in 1..=n {
            match rep.v_of(k, v) {
                Image::Arrow(a) => {
                    let back = rep.v_back(k, &a.target);
                    let expect = Image::Arrow(super::Arrow::new(v.clone(), a.phase.conj()));
                    if !matches!(back, Image::Unexplored) && back != expect {
                        fail(
                            v,
                            ViolationKind::Inconsistent {
                                map: format!("v{k}"),
                            },
                            render(&expect),
                            render(&back),
                        );
                    }
                }
                Image::Zero => unreachable!("forward maps never produce Zero"),
                Image::Unexplored => {
                    if !rep.is_boundary(v) && rep.finite_vertices().is_some() {
                        fail(
                            v,
                            ViolationKind::MissingArrow {
                                map: format!("v{k}"),
                            },
                            "an arrow".to_string(),
                            "nothing".to_string(),
                        );
                    }
                }
            }
        }
        // range disjointness
        let mut owner: Option<u8> = None;
        for k in 1..=n {
            if let Image::Arrow(_) = rep.v_back(k, v) {
                if let Some(prev) = owner {
                    fail(
                        v,
                        ViolationKind::RangeOverlap {
                            first: prev,
                            second: k,
                        },
                        "at most one k with e_v ∈ ran V_k".to_string(),
                        format!("v{prev} and v{k}"),
                    );
                }
                owner = Some(k);
            }
        }
        // the defining relations, with exact phases
        for k in 1..n {
            let lhs = compose(rep.v_of(k, v), |u| rep.w_of(u));
            let rhs = rep.v_of(k + 1, v);
            if conclusive(&lhs) && conclusive(&rhs) && lhs != rhs {
                fail(
                    v,
                    ViolationKind::Relation {
                        name: format!("WV_{k}=V_{}", k + 1),
                    },
                    render(&rhs),
                    render(&lhs),
                );
            }
        }
        let lhs = compose(rep.v_of(n, v), |u| rep.w_of(u));
        let rhs = compose(rep.w_of(v), |u| rep.v_of(1, u));
        if conclusive(&lhs) && conclusive(&rhs) && lhs != rhs {
            fail(
                v,
                ViolationKind::Relation {
                    name: "WV_n=V_1W".to_string(),
                },
                render(&rhs),
                render(&lhs),
            );
        }
    }

    CheckReport {
        explored: set.len(),
        violations,
    }
}

fn conclusive(img: &Image) -> bool {
    !matches!(img, Image::Unexplored)
}

/// Composes `op` after an image, multiplying phases. `Zero` and
/// `Unexplored` propagate.
pub(crate) fn compose(img: Image, op: impl Fn(&VertexKey) -> Image) -> Image {
    match img {
        Image::Arrow(a) => match op(&a.target) {
            Image::Arrow(b) => Image::Arrow(super::Arrow::new(b.target, a.phase.mul(&b.phase))),
            other => other,
        },
        other => other,
    }
}

/// Checks `W* V_1 e_v = V_n W* e_v` (including the zero cases and phases) on
/// the explored set. Returns the first witness on failure.
pub fn is_nica_covariant(rep: &AtomicRep, seeds: &[VertexKey], depth: u32) -> CheckReport {
    let set = explore(rep, seeds, depth);
    let mut violations = Vec::new();
    for v in &set.order {
        let lhs = compose(rep.v_of(1, v), |u| rep.w_back(u));
        let rhs = compose(rep.w_back(v), |u| rep.v_of(rep.rank(), u));
        if conclusive(&lhs) && conclusive(&rhs) && lhs != rhs && violations.len() < 16 {
            violations.push(Violation {
                vertex: v.clone(),
                kind: ViolationKind::NicaCovariance,
                expected: format!("W*V_1 e_v = {}", render(&lhs)),
                found: format!("V_nW* e_v = {}", render(&rhs)),
            });
        }
    }
    CheckReport {
        explored: set.len(),
        violations,
    }
}

/// Spot-checks every hint shipped with the representation over the explored
/// set: each vertex of a hinted region must satisfy the region's promised
/// step-and-stay-inside condition. `depth` bounds both the exploration and
/// the forward-orbit samples used for the kernel conditions.
pub fn validate_hints(rep: &AtomicRep, seeds: &[VertexKey], depth: u32) -> CheckReport {
    let set = explore(rep, seeds, depth);
    let mut violations = Vec::new();
    let mut fail = |vertex: &VertexKey, kind: HintKind, expected: &str, found: String| {
        if violations.len() < 16 {
            violations.push(Violation {
                vertex: vertex.clone(),
                kind: ViolationKind::HintBroken {
                    kind: kind.name().to_string(),
                },
                expected: expected.to_string(),
                found,
            });
        }
    };

    for hint in rep.hints() {
        for v in set.order.iter().filter(|v| hint.region.contains(v)) {
            match hint.kind {
                HintKind::WvBackwardTotal => match rep.wv_back(v) {
                    JointBack::Arrow(_, a) if hint.region.contains(&a.target) => {}
                    JointBack::Unexplored => {}
                    other => fail(
                        v,
                        hint.kind,
                        "a {WV_i}-backward step inside the region",
                        format!("{other:?}"),
                    ),
                },
                HintKind::WBackwardTotal | HintKind::WBackwardTotalInKernel => {
                    match rep.w_back(v) {
                        Image::Arrow(a) if hint.region.contains(&a.target) => {}
                        Image::Unexplored => {}
                        other => fail(
                            v,
                            hint.kind,
                            "a W-backward step inside the region",
                            render(&other),
                        ),
                    }
                    if hint.kind == HintKind::WBackwardTotalInKernel {
                        // the region must avoid every ran V_k along its
                        // forward W-orbit; sample to the configured depth
                        let mut cur = v.clone();
                        for _ in 0..=depth {
                            if rep.in_ran_v(&cur) == Some(true) {
                                fail(
                                    v,
                                    hint.kind,
                                    "forward W-orbit outside every ran V_k",
                                    format!("orbit meets a V-range at {cur}"),
                                );
                                break;
                            }
                            match rep.w_of(&cur) {
                                Image::Arrow(a) => cur = a.target,
                                _ => break,
                            }
                        }
                    }
                }
                HintKind::VBackwardTotal => match rep.joint_v_back(v) {
                    JointBack::Arrow(_, a) if hint.region.contains(&a.target) => {}
                    JointBack::Unexplored => {}
                    other => fail(
                        v,
                        hint.kind,
                        "a joint V-backward step inside the region",
                        format!("{other:?}"),
                    ),
                },
                HintKind::ForwardWAvoidsRanV => {
                    if rep.in_ran_v(v) == Some(true) {
                        fail(v, hint.kind, "vertex outside every ran V_k", "in a V-range".to_string());
                    }
                    if let Image::Arrow(a) = rep.w_of(v) {
                        if !hint.region.contains(&a.target) {
                            fail(
                                v,
                                hint.kind,
                                "forward W-step inside the region",
                                format!("escapes to {}", a.target),
                            );
                        }
                    }
                }
                HintKind::ForwardV1AvoidsRanW => {
                    if rep.in_ran_w(v) == Some(true) {
                        fail(v, hint.kind, "vertex outside ran W", "in ran W".to_string());
                    }
                    if let Image::Arrow(a) = rep.v_of(1, v) {
                        if !hint.region.contains(&a.target) {
                            fail(
                                v,
                                hint.kind,
                                "forward V_1-step inside the region",
                                format!("escapes to {}", a.target),
                            );
                        }
                    }
                }
            }
        }
    }

    CheckReport {
        explored: set.len(),
        violations,
    }
}

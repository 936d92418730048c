//! Bounded deterministic orbit walks with cycle detection and hint regions.
//!
//! Every membership question the classifier answers reduces to following one
//! deterministic chain of arrows — backward orbits are unique because the
//! `π_k` ranges are pairwise disjoint — until the chain dies, closes into a
//! cycle, enters a hinted region, violates a side condition, or exhausts its
//! budget. The walk records the visited chain so a verdict's certificate can
//! be replayed by walking it again.

use serde::Serialize;

use crate::rep::{AtomicRep, HintKind, Image, JointBack, VertexKey};

/// The deterministic chains the classifier walks.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    /// Backward under the row isometry `{V_2, ..., V_n, V_1 W}`.
    BackWv,
    /// Joint backward V-strip.
    BackV,
    /// Plain backward W-strip.
    BackW,
    /// Backward W, requiring every chain vertex to avoid every `ran V_k`.
    BackWAvoidRanV,
    /// Backward V_1 (joint digit must be 1), requiring every chain vertex to
    /// avoid `ran W`.
    BackV1AvoidRanW,
    /// Forward W, requiring every orbit vertex to avoid every `ran V_k`.
    ForwardWAvoidRanV,
    /// Forward V_1, requiring every orbit vertex to avoid `ran W`.
    ForwardV1AvoidRanW,
}

impl WalkKind {
    /// Hint kinds whose regions certify that this walk continues forever.
    fn region_kinds(&self) -> &'static [HintKind] {
        match self {
            WalkKind::BackWv => &[HintKind::WvBackwardTotal],
            WalkKind::BackV => &[HintKind::VBackwardTotal],
            WalkKind::BackW => &[HintKind::WBackwardTotal, HintKind::WBackwardTotalInKernel],
            WalkKind::BackWAvoidRanV => &[HintKind::WBackwardTotalInKernel],
            WalkKind::BackV1AvoidRanW => &[],
            WalkKind::ForwardWAvoidRanV => &[HintKind::ForwardWAvoidsRanV],
            WalkKind::ForwardV1AvoidRanW => &[HintKind::ForwardV1AvoidsRanW],
        }
    }
}

/// Why a walk stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkEnd {
    /// The step from the last chain vertex is `Zero` (for `BackV1AvoidRanW`,
    /// also a joint backward digit other than 1).
    Dead,
    /// The side condition failed at the last chain vertex.
    SideViolated { detail: String },
    /// The step from the last chain vertex returns to `chain[len - period]`.
    Cycle { period: usize },
    /// The last chain vertex lies in a hinted region certifying totality.
    Hint { kind: HintKind },
    /// Budget exhausted.
    Exhausted,
    /// An arrow or side test left the explored window.
    Unexplored,
}

#[derive(Clone, Debug)]
pub struct Walk {
    pub kind: WalkKind,
    pub chain: Vec<VertexKey>,
    /// Joint backward digits, for V-strip walks.
    pub digits: Vec<u8>,
    pub end: WalkEnd,
}

impl Walk {
    pub fn spent(&self) -> u32 {
        self.chain.len() as u32
    }
}

fn side_condition(rep: &AtomicRep, kind: WalkKind, v: &VertexKey) -> Result<(), WalkEnd> {
    match kind {
        WalkKind::BackWAvoidRanV | WalkKind::ForwardWAvoidRanV => match rep.in_ran_v(v) {
            Some(false) => Ok(()),
            Some(true) => Err(WalkEnd::SideViolated {
                detail: format!("{v} lies in a V-range"),
            }),
            None => Err(WalkEnd::Unexplored),
        },
        WalkKind::BackV1AvoidRanW | WalkKind::ForwardV1AvoidRanW => match rep.in_ran_w(v) {
            Some(false) => Ok(()),
            Some(true) => Err(WalkEnd::SideViolated {
                detail: format!("{v} lies in ran W"),
            }),
            None => Err(WalkEnd::Unexplored),
        },
        _ => Ok(()),
    }
}

/// One step of the walk. Returns the next vertex and the joint digit (0 when
/// the walk has no digit).
fn step(rep: &AtomicRep, kind: WalkKind, v: &VertexKey) -> Result<(VertexKey, u8), WalkEnd> {
    let from_image = |img: Image| match img {
        Image::Arrow(a) => Ok((a.target, 0)),
        Image::Zero => Err(WalkEnd::Dead),
        Image::Unexplored => Err(WalkEnd::Unexplored),
    };
    match kind {
        WalkKind::BackWv => match rep.wv_back(v) {
            JointBack::Arrow(k, a) => Ok((a.target, k)),
            JointBack::Zero => Err(WalkEnd::Dead),
            JointBack::Unexplored => Err(WalkEnd::Unexplored),
        },
        WalkKind::BackV => match rep.joint_v_back(v) {
            JointBack::Arrow(k, a) => Ok((a.target, k)),
            JointBack::Zero => Err(WalkEnd::Dead),
            JointBack::Unexplored => Err(WalkEnd::Unexplored),
        },
        WalkKind::BackW | WalkKind::BackWAvoidRanV => from_image(rep.w_back(v)),
        WalkKind::BackV1AvoidRanW => match rep.joint_v_back(v) {
            JointBack::Arrow(1, a) => Ok((a.target, 1)),
            // a backward digit other than 1 means no V_1-preimage exists
            JointBack::Arrow(..) | JointBack::Zero => Err(WalkEnd::Dead),
            JointBack::Unexplored => Err(WalkEnd::Unexplored),
        },
        WalkKind::ForwardWAvoidRanV => from_image(rep.w_of(v)),
        WalkKind::ForwardV1AvoidRanW => from_image(rep.v_of(1, v)),
    }
}

/// Walks the chain from `start`, visiting at most `budget` distinct vertices.
///
/// At each visited vertex, in order: the walk's side condition, then the
/// hinted regions, then cycle detection against the chain, then the step.
pub fn bounded_walk(rep: &AtomicRep, start: &VertexKey, kind: WalkKind, budget: u32) -> Walk {
    let mut chain: Vec<VertexKey> = Vec::new();
    let mut digits: Vec<u8> = Vec::new();
    let mut cur = start.clone();
    loop {
        chain.push(cur.clone());
        if let Err(end) = side_condition(rep, kind, &cur) {
            return Walk {
                kind,
                chain,
                digits,
                end,
            };
        }
        for hint in rep.hints() {
            if kind.region_kinds().contains(&hint.kind) && hint.region.contains(&cur) {
                return Walk {
                    kind,
                    chain,
                    digits,
                    end: WalkEnd::Hint { kind: hint.kind },
                };
            }
        }
        if chain.len() as u32 >= budget {
            return Walk {
                kind,
                chain,
                digits,
                end: WalkEnd::Exhausted,
            };
        }
        match step(rep, kind, &cur) {
            Err(end) => {
                return Walk {
                    kind,
                    chain,
                    digits,
                    end,
                }
            }
            Ok((next, digit)) => {
                if digit != 0 {
                    digits.push(digit);
                }
                if let Some(pos) = chain.iter().position(|u| *u == next) {
                    let period = chain.len() - pos;
                    return Walk {
                        kind,
                        chain,
                        digits,
                        end: WalkEnd::Cycle { period },
                    };
                }
                cur = next;
            }
        }
    }
}

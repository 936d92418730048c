//! The backward V-orbit taxonomy of atomic row isometries.

use super::{AtomicRep, HintKind, JointBack, VertexKey};

/// How the deterministic backward V-chain of a vertex behaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VOrbitType {
    /// The chain stops at a vertex outside every `ran V_k`; that terminal is
    /// a wandering vector and the component is a left regular representation.
    LeftRegularType { terminal: VertexKey },
    /// The chain revisits a vertex.
    CycleType { period: usize },
    /// The chain provably continues forever through fresh vertices.
    InductiveType,
    /// Budget exhausted without a certificate.
    Unknown,
}

/// Follows the backward V-chain from `vertex` for at most `budget` steps.
///
/// Termination gives the left-regular type with its wandering terminal; a
/// revisit gives the cycle type with its period; entering a region hinted
/// `VBackwardTotal` certifies the chain is infinite, which is the inductive
/// type when the region is not finite (a finite total region necessarily
/// contains a cycle, which the walk itself would find).
pub fn v_orbit_type(rep: &AtomicRep, vertex: &VertexKey, budget: u32) -> VOrbitType {
    assert!(budget >= 1);
    let mut chain: Vec<VertexKey> = vec![vertex.clone()];
    let mut cur = vertex.clone();
    for _ in 0..budget {
        if rep
            .hints()
            .iter()
            .any(|h| h.kind == HintKind::VBackwardTotal && h.region.contains(&cur))
        {
            let finite_region = rep.hints().iter().any(|h| {
                h.kind == HintKind::VBackwardTotal
                    && h.region.contains(&cur)
                    && matches!(h.region, super::Region::Keys(_))
            });
            if finite_region {
                // a finite v-backward-total region pigeonholes into a cycle
                return VOrbitType::CycleType { period: 0 };
            }
            return VOrbitType::InductiveType;
        }
        match rep.joint_v_back(&cur) {
            JointBack::Zero => {
                return VOrbitType::LeftRegularType { terminal: cur };
            }
            JointBack::Arrow(_, a) => {
                if let Some(pos) = chain.iter().position(|v| *v == a.target) {
                    return VOrbitType::CycleType {
                        period: chain.len() - pos,
                    };
                }
                chain.push(a.target.clone());
                cur = a.target;
            }
            JointBack::Unexplored => return VOrbitType::Unknown,
        }
    }
    VOrbitType::Unknown
}

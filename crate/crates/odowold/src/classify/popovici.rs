//! Independent classifier for rank 1, where the representation is a pair of
//! commuting isometries `(S_1, S_2) = (W, V_1)`.
//!
//! The three non-residual subspaces have direct descriptions for a commuting
//! pair: `H_uu = ∩_m (S_1 S_2)^m H`, and the unitary-pure / pure-unitary
//! pieces are built from `∩_i ker S_2* S_1^i` and `∩_i ker S_1* S_2^i`. This
//! module walks those formulas with its own loops — separate from the
//! general-rank machinery — so rank-1 classifications can be cross-validated
//! verdict for verdict.

use thiserror::Error;

use super::{Certificate, Classification, ComponentId, Verdict, WalkEnd, WalkKind};
use crate::rep::{AtomicRep, HintKind, Image, JointBack, VertexKey};

/// Membership predicate that may be inconclusive near a window boundary.
type AvoidPred<'a> = &'a dyn Fn(&VertexKey) -> Option<bool>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PopoviciError {
    #[error("rank must be 1, got {0}")]
    RankNotOne(u8),
}

struct Chain {
    chain: Vec<VertexKey>,
    end: WalkEnd,
}

impl Chain {
    fn spent(&self) -> u32 {
        self.chain.len() as u32
    }
}

/// Follow a deterministic map until it dies, cycles, enters one of the given
/// hinted regions, or violates the avoid predicate.
fn follow(
    rep: &AtomicRep,
    start: &VertexKey,
    budget: u32,
    step: impl Fn(&VertexKey) -> Image,
    avoid: Option<AvoidPred<'_>>,
    hint_kinds: &[HintKind],
) -> Chain {
    let mut chain = vec![start.clone()];
    let mut cur = start.clone();
    loop {
        if let Some(pred) = avoid {
            match pred(&cur) {
                Some(true) => {
                    return Chain {
                        chain,
                        end: WalkEnd::SideViolated {
                            detail: format!("{cur} hits the avoided range"),
                        },
                    }
                }
                Some(false) => {}
                None => return Chain { chain, end: WalkEnd::Unexplored },
            }
        }
        if let Some(hint) = rep
            .hints()
            .iter()
            .find(|h| hint_kinds.contains(&h.kind) && h.region.contains(&cur))
        {
            return Chain {
                chain,
                end: WalkEnd::Hint { kind: hint.kind },
            };
        }
        if chain.len() as u32 >= budget {
            return Chain {
                chain,
                end: WalkEnd::Exhausted,
            };
        }
        match step(&cur) {
            Image::Zero => return Chain { chain, end: WalkEnd::Dead },
            Image::Unexplored => return Chain { chain, end: WalkEnd::Unexplored },
            Image::Arrow(a) => {
                if let Some(pos) = chain.iter().position(|u| *u == a.target) {
                    let period = chain.len() - pos;
                    return Chain {
                        chain,
                        end: WalkEnd::Cycle { period },
                    };
                }
                chain.push(a.target.clone());
                cur = a.target;
            }
        }
    }
}

fn chain_cert(c: &Chain, walk: WalkKind) -> Certificate {
    match &c.end {
        WalkEnd::Dead => Certificate::DeadBackwardOrbit {
            walk,
            chain: c.chain.clone(),
        },
        WalkEnd::Cycle { period } => Certificate::OrbitCycle {
            walk,
            chain: c.chain.clone(),
            period: *period,
        },
        WalkEnd::Hint { kind } => Certificate::HintRegion {
            walk,
            hint: *kind,
            entry: c.chain.last().expect("nonempty").clone(),
            chain: c.chain.clone(),
        },
        WalkEnd::SideViolated { detail } => Certificate::RangeHit {
            walk,
            chain: c.chain.clone(),
            detail: detail.clone(),
        },
        _ => unreachable!("inconclusive chains carry no certificate"),
    }
}

fn infinite(end: &WalkEnd) -> Option<bool> {
    match end {
        WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => Some(true),
        WalkEnd::Dead | WalkEnd::SideViolated { .. } => Some(false),
        WalkEnd::Exhausted | WalkEnd::Unexplored => None,
    }
}

/// Classifies a vertex of a rank-1 representation by Popovici's formulas for
/// the commuting pair `(S_1, S_2) = (W, V_1)`.
pub fn popovici_n1(
    rep: &AtomicRep,
    v: &VertexKey,
    budget: u32,
) -> Result<Classification, PopoviciError> {
    if rep.rank() != 1 {
        return Err(PopoviciError::RankNotOne(rep.rank()));
    }
    assert!(budget >= 1);
    let mut explored: std::collections::BTreeSet<VertexKey> = Default::default();

    // H_uu = ∩_m (S_1 S_2)^m H: backward orbit of the product, stripping the
    // V_1 factor first (the opposite composition order from the general-rank
    // classifier; the two agree because the pair commutes).
    let product_back = |u: &VertexKey| -> Image {
        match rep.joint_v_back(u) {
            JointBack::Arrow(_, a) => match rep.w_back(&a.target) {
                Image::Arrow(b) => {
                    Image::Arrow(crate::rep::Arrow::new(b.target, a.phase.mul(&b.phase)))
                }
                other => other,
            },
            JointBack::Zero => Image::Zero,
            JointBack::Unexplored => Image::Unexplored,
        }
    };
    let uu_chain = follow(
        rep,
        v,
        budget,
        product_back,
        None,
        &[HintKind::WvBackwardTotal],
    );
    explored.extend(uu_chain.chain.iter().cloned());
    let uu = match infinite(&uu_chain.end) {
        Some(true) => Verdict::r#in(chain_cert(&uu_chain, WalkKind::BackWv), uu_chain.spent()),
        Some(false) => Verdict::out(chain_cert(&uu_chain, WalkKind::BackWv), uu_chain.spent()),
        None => Verdict::unknown(uu_chain.spent()),
    };

    let in_ran_v1 = |u: &VertexKey| rep.in_ran_v(u);
    let in_ran_w = |u: &VertexKey| rep.in_ran_w(u);

    // H_us = ⊕_m S_2^m (∩_k S_1^k (∩_i ker S_2* S_1^i)) with S_2 = V_1:
    // strip the V_1 chain, then test the terminal against W-orbits.
    let us = classify_half(
        rep,
        v,
        budget,
        &mut explored,
        HalfSpec {
            strip_step: &|u| match rep.joint_v_back(u) {
                JointBack::Arrow(_, a) => Image::Arrow(a),
                JointBack::Zero => Image::Zero,
                JointBack::Unexplored => Image::Unexplored,
            },
            strip_walk: WalkKind::BackV,
            strip_hints: &[HintKind::VBackwardTotal],
            fwd_step: &|u| rep.w_of(u),
            fwd_walk: WalkKind::ForwardWAvoidRanV,
            fwd_hints: &[HintKind::ForwardWAvoidsRanV],
            back_step: &|u| rep.w_back(u),
            back_walk: WalkKind::BackWAvoidRanV,
            back_hints: &[HintKind::WBackwardTotalInKernel],
            avoid: &in_ran_v1,
        },
    );

    // H_su mirror: strip the W chain, test against V_1-orbits.
    let su = classify_half(
        rep,
        v,
        budget,
        &mut explored,
        HalfSpec {
            strip_step: &|u| rep.w_back(u),
            strip_walk: WalkKind::BackW,
            strip_hints: &[HintKind::WBackwardTotal, HintKind::WBackwardTotalInKernel],
            fwd_step: &|u| rep.v_of(1, u),
            fwd_walk: WalkKind::ForwardV1AvoidRanW,
            fwd_hints: &[HintKind::ForwardV1AvoidsRanW],
            back_step: &|u| match rep.joint_v_back(u) {
                JointBack::Arrow(1, a) => Image::Arrow(a),
                JointBack::Arrow(..) | JointBack::Zero => Image::Zero,
                JointBack::Unexplored => Image::Unexplored,
            },
            back_walk: WalkKind::BackV1AvoidRanW,
            back_hints: &[],
            avoid: &in_ran_w,
        },
    );

    // Residual component and resolution, as in the general-rank classifier.
    let all_conclusive = uu.conclusive() && us.conclusive() && su.conclusive();
    let ins: Vec<(ComponentId, &Verdict)> = [
        (ComponentId::UU, &uu),
        (ComponentId::US, &us),
        (ComponentId::SU, &su),
    ]
    .into_iter()
    .filter(|(_, w)| w.is_in())
    .collect();
    let spent = uu.spent + us.spent + su.spent;
    let ws = if !all_conclusive {
        Verdict::unknown(spent)
    } else if let Some((_, inner)) = ins.first() {
        Verdict::out(
            Certificate::AllOf { parts: vec![inner.certificate.clone().expect("In carries evidence")] },
            spent,
        )
    } else {
        Verdict::r#in(
            Certificate::AllOf { parts: vec![
                uu.certificate.clone().expect("Out carries evidence"),
                us.certificate.clone().expect("Out carries evidence"),
                su.certificate.clone().expect("Out carries evidence"),
            ] },
            spent,
        )
    };

    let mut ss = None;
    let mut resolved = None;
    if all_conclusive {
        match ins.len() {
            0 => {
                resolved = Some(ComponentId::WS);
                // walk the strip path first so the covariance check covers
                // its vertices too
                if let Some((path, touched)) = strip_path(rep, v, budget) {
                    explored.extend(touched);
                    if nica_on(rep, &explored) == Some(true) {
                        ss = Some(Verdict::r#in(path, ws.spent));
                        resolved = Some(ComponentId::SS);
                    }
                }
            }
            1 => resolved = Some(ins[0].0),
            _ => resolved = None,
        }
    }

    Ok(Classification {
        vertex: v.clone(),
        uu,
        us,
        su,
        ws,
        ss,
        resolved,
        budget,
    })
}

struct HalfSpec<'a> {
    strip_step: &'a dyn Fn(&VertexKey) -> Image,
    strip_walk: WalkKind,
    strip_hints: &'a [HintKind],
    fwd_step: &'a dyn Fn(&VertexKey) -> Image,
    fwd_walk: WalkKind,
    fwd_hints: &'a [HintKind],
    back_step: &'a dyn Fn(&VertexKey) -> Image,
    back_walk: WalkKind,
    back_hints: &'a [HintKind],
    avoid: AvoidPred<'a>,
}

fn classify_half(
    rep: &AtomicRep,
    v: &VertexKey,
    budget: u32,
    explored: &mut std::collections::BTreeSet<VertexKey>,
    spec: HalfSpec<'_>,
) -> Verdict {
    let strip = follow(rep, v, budget, spec.strip_step, None, spec.strip_hints);
    explored.extend(strip.chain.iter().cloned());
    let mut spent = strip.spent();
    match infinite(&strip.end) {
        Some(true) => return Verdict::out(chain_cert(&strip, spec.strip_walk), spent),
        None => return Verdict::unknown(spent),
        Some(false) => {}
    }
    let f = strip.chain.last().expect("nonempty").clone();
    let strip_cert = chain_cert(&strip, spec.strip_walk);

    let fwd = follow(rep, &f, budget, spec.fwd_step, Some(spec.avoid), spec.fwd_hints);
    explored.extend(fwd.chain.iter().cloned());
    spent += fwd.spent();
    match &fwd.end {
        WalkEnd::SideViolated { .. } => {
            return Verdict::out(
                Certificate::AllOf { parts: vec![strip_cert, chain_cert(&fwd, spec.fwd_walk)] },
                spent,
            )
        }
        WalkEnd::Exhausted | WalkEnd::Unexplored => return Verdict::unknown(spent),
        WalkEnd::Dead => unreachable!("forward maps never annihilate"),
        WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => {}
    }
    let fwd_cert = chain_cert(&fwd, spec.fwd_walk);

    let back = follow(rep, &f, budget, spec.back_step, Some(spec.avoid), spec.back_hints);
    explored.extend(back.chain.iter().cloned());
    spent += back.spent();
    match &back.end {
        WalkEnd::Dead | WalkEnd::SideViolated { .. } => Verdict::out(
            Certificate::AllOf { parts: vec![strip_cert, chain_cert(&back, spec.back_walk)] },
            spent,
        ),
        WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => Verdict::r#in(
            Certificate::AllOf { parts: vec![strip_cert, fwd_cert, chain_cert(&back, spec.back_walk)] },
            spent,
        ),
        WalkEnd::Exhausted | WalkEnd::Unexplored => Verdict::unknown(spent),
    }
}

fn nica_on(rep: &AtomicRep, explored: &std::collections::BTreeSet<VertexKey>) -> Option<bool> {
    for u in explored {
        let lhs = crate::rep::verify_compose(rep.v_of(1, u), |t| rep.w_back(t));
        let rhs = crate::rep::verify_compose(rep.w_back(u), |t| rep.v_of(rep.rank(), t));
        if matches!(lhs, Image::Unexplored) || matches!(rhs, Image::Unexplored) {
            return None;
        }
        if lhs != rhs {
            return Some(false);
        }
    }
    Some(true)
}

fn strip_path(rep: &AtomicRep, v: &VertexKey, budget: u32) -> Option<(Certificate, Vec<VertexKey>)> {
    let strip = super::bounded_walk(rep, v, WalkKind::BackV, budget);
    if strip.end != WalkEnd::Dead {
        return None;
    }
    let f = strip.chain.last().expect("nonempty").clone();
    let wstrip = super::bounded_walk(rep, &f, WalkKind::BackW, budget);
    if wstrip.end != WalkEnd::Dead {
        return None;
    }
    let core = wstrip.chain.last().expect("nonempty").clone();
    if rep.in_ran_v(&core) != Some(false) || rep.in_ran_w(&core) != Some(false) {
        return None;
    }
    let mut touched = strip.chain.clone();
    touched.extend(wstrip.chain.iter().cloned());
    Some((
        Certificate::StripPath {
            mu: strip.digits.clone(),
            w_power: (wstrip.chain.len() - 1) as u64,
            core,
        },
        touched,
    ))
}

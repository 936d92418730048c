//! Constructing `W` from row-unitary structure: the induced add-one map.
//!
//! Given only the `V`-structure of an atomic representation, the relations
//! force `W` wherever the backward V-address of a vertex resolves: if the
//! address reads `n, n, ..., n, k_m` with `k_m ≠ n` then
//! `e_{i_0} = V_n^{m-1} V_{k_m} e_{i_m}` and necessarily
//! `W e_{i_0} = V_1^{m-1} V_{k_m+1} e_{i_m}`. If instead the address
//! terminates at a wandering vertex through all-`n` digits, a unitary on the
//! wandering space supplies the carry target and the rebuild uses all-1
//! digits.

use thiserror::Error;

use super::{Arrow, AtomicRep, Image, JointBack, VertexKey};
use crate::phase::Phase;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InduceError {
    #[error("no carry target: the backward V-address of {0} runs through digit n without resolving")]
    NoCarryTarget(VertexKey),
    #[error("backward V-address of {0} cycles through digit n only")]
    AddressCycleAllN(VertexKey),
    #[error("backward V-address of {0} is unexplored")]
    AddressUnexplored(VertexKey),
}

/// Map from wandering vertices to their image under the chosen unitary
/// `W_0` on the wandering space.
pub type WanderingMap<'a> = &'a dyn Fn(&VertexKey) -> Option<(VertexKey, Phase)>;

const ADDRESS_CAP: usize = 4096;

/// Computes the forced arrow `W e_vertex` from the V-structure alone.
///
/// Deterministic: backward V-steps are unique because the `π_k` ranges are
/// pairwise disjoint. Phases multiply along the strip-and-rebuild path.
pub fn induce_w(
    rep: &AtomicRep,
    vertex: &VertexKey,
    wandering_unitary: Option<WanderingMap>,
) -> Result<Arrow, InduceError> {
    let n = rep.rank();
    let mut cur = vertex.clone();
    let mut strip_phase = Phase::ONE;
    let mut visited = vec![cur.clone()];
    let mut steps = 0usize;
    loop {
        match rep.joint_v_back(&cur) {
            JointBack::Arrow(k, a) if k != n => {
                // resolve: W e = V_1^{m-1} V_{k+1} e_{i_m}, m = steps + 1
                let mut out = apply_v(rep, k + 1, &a.target)
                    .ok_or_else(|| InduceError::AddressUnexplored(vertex.clone()))?;
                for _ in 0..steps {
                    let next = apply_v(rep, 1, &out.target)
                        .ok_or_else(|| InduceError::AddressUnexplored(vertex.clone()))?;
                    out = Arrow::new(next.target, out.phase.mul(&next.phase));
                }
                return Ok(Arrow::new(
                    out.target,
                    strip_phase.mul(&a.phase).mul(&out.phase),
                ));
            }
            JointBack::Arrow(_, a) => {
                // digit n: strip and keep walking
                strip_phase = strip_phase.mul(&a.phase);
                cur = a.target;
                steps += 1;
                if visited.contains(&cur) {
                    return Err(InduceError::AddressCycleAllN(vertex.clone()));
                }
                visited.push(cur.clone());
                if steps > ADDRESS_CAP {
                    return Err(InduceError::NoCarryTarget(vertex.clone()));
                }
            }
            JointBack::Zero => {
                // wandering terminal reached through all-n digits
                let Some(map) = wandering_unitary else {
                    return Err(InduceError::NoCarryTarget(vertex.clone()));
                };
                let Some((image, lambda)) = map(&cur) else {
                    return Err(InduceError::NoCarryTarget(vertex.clone()));
                };
                let mut out = Arrow::new(image, lambda);
                for _ in 0..steps {
                    let next = apply_v(rep, 1, &out.target)
                        .ok_or_else(|| InduceError::AddressUnexplored(vertex.clone()))?;
                    out = Arrow::new(next.target, out.phase.mul(&next.phase));
                }
                return Ok(Arrow::new(out.target, strip_phase.mul(&out.phase)));
            }
            JointBack::Unexplored => return Err(InduceError::AddressUnexplored(vertex.clone())),
        }
    }
}

fn apply_v(rep: &AtomicRep, k: u8, v: &VertexKey) -> Option<Arrow> {
    match rep.v_of(k, v) {
        Image::Arrow(a) => Some(a),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::make_builtin;
    use crate::semigroup::OdometerElement;
    use std::collections::BTreeMap;

    #[test]
    fn su_tree_root_gets_v2() {
        let rep = make_builtin("su_tree", 2, &BTreeMap::new()).unwrap();
        // address of the root is 1,1,1,...: k_1 = 1 ≠ n, so W e_ρ = V_2 e_ρ
        let a = induce_w(&rep, &VertexKey::new("e"), None).unwrap();
        assert_eq!(a.target.as_str(), "2");
        assert_eq!(a.phase, Phase::ONE);
    }

    #[test]
    fn fn_unitary_wandering_vertex_takes_lambda() {
        let mut p = BTreeMap::new();
        p.insert("lambda".to_string(), "1/3".to_string());
        let rep = make_builtin("left_regular_fn_unitary", 2, &p).unwrap();
        let lambda = Phase::new(1, 3);
        let map = move |v: &VertexKey| {
            (v.as_str() == "e").then(|| (VertexKey::new("e"), lambda))
        };
        let a = induce_w(&rep, &VertexKey::new("e"), Some(&map)).unwrap();
        assert_eq!(a.target.as_str(), "e");
        assert_eq!(a.phase, lambda);
        // without a wandering unitary the empty address cannot resolve
        assert_eq!(
            induce_w(&rep, &VertexKey::new("e"), None),
            Err(InduceError::NoCarryTarget(VertexKey::new("e")))
        );
    }

    #[test]
    fn inductive_g0_resolves_at_first_digit() {
        let mut p = BTreeMap::new();
        p.insert("stream".to_string(), "thue_morse".to_string());
        let rep = make_builtin("inductive", 2, &p).unwrap();
        // address 1,2,2,1,...: k_1 = 1 ≠ 2, so W g_0 = V_2 g_1
        let a = induce_w(&rep, &VertexKey::new("g0"), None).unwrap();
        assert_eq!(a.target.as_str(), "2g1");
    }

    #[test]
    fn induced_w_matches_builtin_w() {
        use crate::rep::explore;
        let mut p = BTreeMap::new();
        p.insert("stream".to_string(), "thue_morse".to_string());
        let inductive = make_builtin("inductive", 2, &p).unwrap();
        let su = make_builtin("su_tree", 2, &BTreeMap::new()).unwrap();
        for rep in [&inductive, &su] {
            let set = explore(rep, &rep.canonical_seeds(), 5);
            for v in &set.order {
                let induced = induce_w(rep, v, None).unwrap();
                let direct = rep.w_of(v);
                assert_eq!(direct.arrow(), Some(&induced), "at {v}");
            }
        }
        // left_regular_on: the wandering unitary is the w-shift on {w^N}
        let lr = make_builtin("left_regular_on", 2, &BTreeMap::new()).unwrap();
        let map = |v: &VertexKey| -> Option<(VertexKey, Phase)> {
            let x = OdometerElement::parse_key(v.as_str(), 2)?;
            x.mu().is_empty().then(|| {
                let y = OdometerElement::new(2, vec![], x.power() + 1).unwrap();
                (VertexKey::new(y.key_string()), Phase::ONE)
            })
        };
        let set = explore(&lr, &lr.canonical_seeds(), 5);
        for v in &set.order {
            let induced = induce_w(&lr, v, Some(&map)).unwrap();
            assert_eq!(lr.w_of(v).arrow(), Some(&induced), "at {v}");
        }
    }

    #[test]
    fn all_n_cycle_is_reported() {
        // hand-built 2-cycle where both vertices sit in ran V_2
        use crate::rep::{AtomicRep, FiniteRep};
        let k = |s: &str| VertexKey::new(s);
        let fin = FiniteRep::new(
            2,
            vec![k("a"), k("b")],
            Default::default(),
            vec![],
            vec![
                (2, k("a"), Arrow::plain(k("b"))),
                (2, k("b"), Arrow::plain(k("a"))),
            ],
            vec![],
        )
        .unwrap();
        let rep = AtomicRep::from_finite(fin);
        assert_eq!(
            induce_w(&rep, &k("a"), None),
            Err(InduceError::AddressCycleAllN(k("a")))
        );
    }
}

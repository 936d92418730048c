//! Breadth-first exploration of a representation graph.

use std::collections::BTreeMap;

use super::{AtomicRep, Image, VertexKey};

/// The result of a bounded breadth-first closure: vertices in discovery
/// order together with their arrow distance from the seed set.
#[derive(Clone, Debug)]
pub struct ExploredSet {
    pub order: Vec<VertexKey>,
    pub dist: BTreeMap<VertexKey, u32>,
}

impl ExploredSet {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, v: &VertexKey) -> bool {
        self.dist.contains_key(v)
    }
}

/// Explores all vertices reachable from the seeds by at most `depth` forward
/// or backward arrows. Arrow order is fixed (`w`, `v_1..v_n`, `w*`,
/// `v_1*..v_n*`), so discovery order is deterministic.
pub fn explore(rep: &AtomicRep, seeds: &[VertexKey], depth: u32) -> ExploredSet {
    explore_capped(rep, seeds, depth, usize::MAX).expect("uncapped explore cannot overflow")
}

/// As [`explore`], but gives up with `Err(count_reached)` once more than
/// `cap` vertices are discovered.
pub fn explore_capped(
    rep: &AtomicRep,
    seeds: &[VertexKey],
    depth: u32,
    cap: usize,
) -> Result<ExploredSet, usize> {
    let mut order = Vec::new();
    let mut dist: BTreeMap<VertexKey, u32> = BTreeMap::new();
    let mut frontier: Vec<VertexKey> = Vec::new();
    for s in seeds {
        if rep.contains(s) && !dist.contains_key(s) {
            dist.insert(s.clone(), 0);
            order.push(s.clone());
            frontier.push(s.clone());
        }
    }
    let mut d = 0;
    while d < depth && !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for v in &frontier {
            let mut push = |img: Image| {
                if let Image::Arrow(a) = img {
                    if !dist.contains_key(&a.target) {
                        dist.insert(a.target.clone(), d);
                        order.push(a.target.clone());
                        next.push(a.target);
                    }
                }
            };
            push(rep.w_of(v));
            for k in 1..=rep.rank() {
                push(rep.v_of(k, v));
            }
            push(rep.w_back(v));
            for k in 1..=rep.rank() {
                push(rep.v_back(k, v));
            }
        }
        if order.len() > cap {
            return Err(order.len());
        }
        frontier = next;
    }
    Ok(ExploredSet { order, dist })
}

//! Finite, explicitly-listed representations backed by arrow tables.
//!
//! These come from representation files. Vertices marked `boundary` may have
//! missing arrows, which read back as `Unexplored`; a missing backward arrow
//! at a non-boundary vertex is a genuine `Zero` (the adjoint annihilates).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Arrow, Hint, Image, VertexKey};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiniteRepError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("digit {0} out of range for rank {1}")]
    DigitOutOfRange(u8, u8),
    #[error("arrow endpoint {0} is not a declared vertex")]
    UnknownVertex(VertexKey),
    #[error("duplicate {0} arrow out of {1}")]
    DuplicateArrow(String, VertexKey),
    #[error("injectivity broken: two {0} arrows end at {1}")]
    NonInjective(String, VertexKey),
    #[error("overlapping ranges at {0}: v{1} and v{2} arrows both end there")]
    OverlappingRanges(VertexKey, u8, u8),
}

/// An explicit finite atomic representation fragment.
#[derive(Clone, Debug)]
pub struct FiniteRep {
    n: u8,
    vertices: Vec<VertexKey>,
    vertex_set: BTreeSet<VertexKey>,
    boundary: BTreeSet<VertexKey>,
    w_fwd: BTreeMap<VertexKey, Arrow>,
    v_fwd: Vec<BTreeMap<VertexKey, Arrow>>,
    w_bwd: BTreeMap<VertexKey, Arrow>,
    v_bwd: Vec<BTreeMap<VertexKey, Arrow>>,
    hints: Vec<Hint>,
}

impl FiniteRep {
    pub fn new(
        n: u8,
        vertices: Vec<VertexKey>,
        boundary: BTreeSet<VertexKey>,
        w_arrows: Vec<(VertexKey, Arrow)>,
        v_arrows: Vec<(u8, VertexKey, Arrow)>,
        hints: Vec<Hint>,
    ) -> Result<FiniteRep, FiniteRepError> {
        if n == 0 {
            return Err(FiniteRepError::ZeroRank);
        }
        let vertex_set: BTreeSet<VertexKey> = vertices.iter().cloned().collect();
        let check = |v: &VertexKey| -> Result<(), FiniteRepError> {
            if vertex_set.contains(v) {
                Ok(())
            } else {
                Err(FiniteRepError::UnknownVertex(v.clone()))
            }
        };

        let mut w_fwd = BTreeMap::new();
        let mut w_bwd = BTreeMap::new();
        for (src, arrow) in w_arrows {
            check(&src)?;
            check(&arrow.target)?;
            if w_fwd.contains_key(&src) {
                return Err(FiniteRepError::DuplicateArrow("w".to_string(), src));
            }
            if w_bwd.contains_key(&arrow.target) {
                return Err(FiniteRepError::NonInjective("w".to_string(), arrow.target));
            }
            w_bwd.insert(arrow.target.clone(), arrow.conj(src.clone()));
            w_fwd.insert(src, arrow);
        }

        let mut v_fwd = vec![BTreeMap::new(); n as usize];
        let mut v_bwd = vec![BTreeMap::new(); n as usize];
        // which k's range a vertex already sits in, to flag overlaps
        let mut range_of: BTreeMap<VertexKey, u8> = BTreeMap::new();
        for (k, src, arrow) in v_arrows {
            if k < 1 || k > n {
                return Err(FiniteRepError::DigitOutOfRange(k, n));
            }
            check(&src)?;
            check(&arrow.target)?;
            let slot = (k - 1) as usize;
            if v_fwd[slot].contains_key(&src) {
                return Err(FiniteRepError::DuplicateArrow(format!("v{k}"), src));
            }
            match range_of.get(&arrow.target) {
                Some(prev) if *prev == k => {
                    return Err(FiniteRepError::NonInjective(
                        format!("v{k}"),
                        arrow.target,
                    ));
                }
                Some(prev) => {
                    return Err(FiniteRepError::OverlappingRanges(
                        arrow.target,
                        *prev,
                        k,
                    ));
                }
                None => {}
            }
            range_of.insert(arrow.target.clone(), k);
            v_bwd[slot].insert(arrow.target.clone(), arrow.conj(src.clone()));
            v_fwd[slot].insert(src, arrow);
        }

        Ok(FiniteRep {
            n,
            vertices,
            vertex_set,
            boundary,
            w_fwd,
            v_fwd,
            w_bwd,
            v_bwd,
            hints,
        })
    }

    pub fn rank(&self) -> u8 {
        self.n
    }

    pub fn vertices(&self) -> &[VertexKey] {
        &self.vertices
    }

    pub fn hints(&self) -> &[Hint] {
        &self.hints
    }

    pub fn contains(&self, v: &VertexKey) -> bool {
        self.vertex_set.contains(v)
    }

    pub fn is_boundary(&self, v: &VertexKey) -> bool {
        self.boundary.contains(v)
    }

    fn forward(&self, table: &BTreeMap<VertexKey, Arrow>, v: &VertexKey) -> Image {
        match table.get(v) {
            Some(a) => Image::Arrow(a.clone()),
            // a forward symbol map never annihilates: absence means the
            // arrow was not recorded
            None => Image::Unexplored,
        }
    }

    fn backward(&self, table: &BTreeMap<VertexKey, Arrow>, v: &VertexKey) -> Image {
        if !self.vertex_set.contains(v) {
            return Image::Unexplored;
        }
        match table.get(v) {
            Some(a) => Image::Arrow(a.clone()),
            None if self.boundary.contains(v) => Image::Unexplored,
            None => Image::Zero,
        }
    }

    pub fn w_of(&self, v: &VertexKey) -> Image {
        if !self.vertex_set.contains(v) {
            return Image::Unexplored;
        }
        self.forward(&self.w_fwd, v)
    }

    pub fn v_of(&self, k: u8, v: &VertexKey) -> Image {
        if !self.vertex_set.contains(v) {
            return Image::Unexplored;
        }
        self.forward(&self.v_fwd[(k - 1) as usize], v)
    }

    pub fn w_back(&self, v: &VertexKey) -> Image {
        self.backward(&self.w_bwd, v)
    }

    pub fn v_back(&self, k: u8, v: &VertexKey) -> Image {
        self.backward(&self.v_bwd[(k - 1) as usize], v)
    }
}

//! Atomic isometric representations of `O_n` as phase-labeled graph actions.
//!
//! An atomic representation maps a fixed orthonormal basis into itself up to
//! unimodular scalars: `W e_i = λ_i e_{τ(i)}` and `V_k e_i = ω_{k,i} e_{π_k(i)}`
//! with `τ` and the `π_k` injective and the ranges of the `π_k` pairwise
//! disjoint. We model the index set as opaque string keys, the symbol maps as
//! total functions on keys, and the adjoints as backward maps that may return
//! the distinguished value `Zero`.
//!
//! Backward maps distinguish `Zero` (the adjoint annihilates) from
//! `Unexplored` (outside a finite window). Conflating the two corrupts kernel
//! computations, so file-backed representations mark boundary vertices whose
//! missing arrows mean "unknown", never "zero".

mod builtins;
mod explore;
mod finite;
mod induce;
mod orbit;
mod verify;

pub use builtins::{make_builtin, BuiltinError, DigitStream};
pub use explore::{explore, explore_capped, ExploredSet};
pub use finite::{FiniteRep, FiniteRepError};
pub use induce::{induce_w, InduceError, WanderingMap};
pub use orbit::{v_orbit_type, VOrbitType};
pub use verify::{
    is_nica_covariant, validate_hints, verify_relations, CheckReport, Violation, ViolationKind,
};
pub(crate) use verify::compose as verify_compose;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::phase::Phase;

/// Opaque serializable token naming one basis vector. Equality is exact
/// token equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexKey(pub String);

impl VertexKey {
    pub fn new(s: impl Into<String>) -> VertexKey {
        VertexKey(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.0)
    }
}

impl From<&str> for VertexKey {
    fn from(s: &str) -> VertexKey {
        VertexKey(s.to_string())
    }
}

/// A scaled basis arrow: the image vector is `phase · e_target`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Arrow {
    pub target: VertexKey,
    pub phase: Phase,
}

impl Arrow {
    pub fn new(target: VertexKey, phase: Phase) -> Arrow {
        Arrow { target, phase }
    }

    pub fn plain(target: VertexKey) -> Arrow {
        Arrow {
            target,
            phase: Phase::ONE,
        }
    }

    fn conj(&self, source: VertexKey) -> Arrow {
        Arrow {
            target: source,
            phase: self.phase.conj(),
        }
    }
}

/// Image of a basis vector under a symbol map or its adjoint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Image {
    /// `phase · e_target`.
    Arrow(Arrow),
    /// The zero vector. Only the backward maps produce this.
    Zero,
    /// Outside the explored part of a finite representation.
    Unexplored,
}

impl Image {
    pub fn arrow(&self) -> Option<&Arrow> {
        match self {
            Image::Arrow(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Image::Zero)
    }
}

/// Joint backward image under the row isometry: the unique `k` whose range
/// contains the vertex, if any.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum JointBack {
    Arrow(u8, Arrow),
    Zero,
    Unexplored,
}

/// Integer constraint used in serializable region descriptions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum IntCond {
    Any,
    Lt(i64),
    Le(i64),
    Eq(i64),
    Ge(i64),
    Gt(i64),
}

impl IntCond {
    pub fn holds(&self, x: i64) -> bool {
        match self {
            IntCond::Any => true,
            IntCond::Lt(b) => x < *b,
            IntCond::Le(b) => x <= *b,
            IntCond::Eq(b) => x == *b,
            IntCond::Ge(b) => x >= *b,
            IntCond::Gt(b) => x > *b,
        }
    }
}

/// Digit-word constraint for normal-form regions.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MuCond {
    Any,
    Empty,
    /// Every digit equals 1 (vacuously true for the empty word).
    AllOnes,
}

/// A serializable membership predicate on vertex keys.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Region {
    All,
    Keys(std::collections::BTreeSet<VertexKey>),
    /// Constraints on `(r,t)` coordinate keys.
    Coord { r: IntCond, t: IntCond },
    /// Constraints on `v[...]w^N` normal-form keys.
    NormalForm { mu: MuCond, power: IntCond },
}

impl Region {
    pub fn contains(&self, v: &VertexKey) -> bool {
        match self {
            Region::All => true,
            Region::Keys(set) => set.contains(v),
            Region::Coord { r, t } => match builtins::parse_coord_key(v.as_str()) {
                Some((rv, tv)) => r.holds(rv) && t.holds(tv),
                None => false,
            },
            Region::NormalForm { mu, power } => {
                let Some((digits, n)) = builtins::parse_nf_key_raw(v.as_str()) else {
                    return false;
                };
                let mu_ok = match mu {
                    MuCond::Any => true,
                    MuCond::Empty => digits.is_empty(),
                    MuCond::AllOnes => digits.iter().all(|d| *d == 1),
                };
                mu_ok && power.holds(n as i64)
            }
        }
    }
}

/// Hint kinds: each names a region invariant that grounds an otherwise
/// infinite quantifier. The test suite spot-checks every shipped hint by
/// explicit orbit expansion before the classifier is allowed to consume it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum HintKind {
    /// Every vertex in the region has a backward step under the row isometry
    /// `{V_2, ..., V_n, V_1 W}` landing back in the region.
    WvBackwardTotal,
    /// Every vertex in the region has `W`-backward arrow landing in the region.
    WBackwardTotal,
    /// As `WBackwardTotal`, and the region lies inside
    /// `∩_{i,j} ker V_i* W^j` (no vertex of the region meets any `ran V_k`,
    /// nor does its forward `W`-orbit).
    WBackwardTotalInKernel,
    /// Every vertex in the region has a joint `V`-backward arrow landing in
    /// the region.
    VBackwardTotal,
    /// The region avoids every `ran V_k` and is forward-`W`-closed.
    ForwardWAvoidsRanV,
    /// The region avoids `ran W` and is forward-`V_1`-closed.
    ForwardV1AvoidsRanW,
}

impl HintKind {
    pub fn name(&self) -> &'static str {
        match self {
            HintKind::WvBackwardTotal => "wv-backward-total",
            HintKind::WBackwardTotal => "w-backward-total",
            HintKind::WBackwardTotalInKernel => "w-backward-total-in-kernel",
            HintKind::VBackwardTotal => "v-backward-total",
            HintKind::ForwardWAvoidsRanV => "forward-w-avoids-ran-v",
            HintKind::ForwardV1AvoidsRanW => "forward-v1-avoids-ran-w",
        }
    }

    pub fn from_name(s: &str) -> Option<HintKind> {
        match s {
            "wv-backward-total" => Some(HintKind::WvBackwardTotal),
            "w-backward-total" => Some(HintKind::WBackwardTotal),
            "w-backward-total-in-kernel" => Some(HintKind::WBackwardTotalInKernel),
            "v-backward-total" => Some(HintKind::VBackwardTotal),
            "forward-w-avoids-ran-v" => Some(HintKind::ForwardWAvoidsRanV),
            "forward-v1-avoids-ran-w" => Some(HintKind::ForwardV1AvoidsRanW),
            _ => None,
        }
    }
}

/// A finite certificate for an infinite quantifier: a promise about a region.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Hint {
    pub kind: HintKind,
    pub region: Region,
}

#[derive(Clone, Debug)]
enum RepKind {
    LeftRegular,
    FnUnitary { lambda: Phase },
    SuTree,
    WeakShift,
    Inductive { stream: DigitStream },
    Finite(FiniteRep),
}

/// Per-generator-class phase rescaling, used by the phase-coherence tests.
#[derive(Clone, Debug)]
struct Rescale {
    w: Phase,
    v: Vec<Phase>,
}

/// An atomic isometric representation of `O_n`.
///
/// Values are immutable and cheap to clone; lazy vertex expansion is a pure
/// function of the key, so a representation may be shared across threads.
#[derive(Clone, Debug)]
pub struct AtomicRep {
    n: u8,
    kind: RepKind,
    hints: Vec<Hint>,
    phases_stripped: bool,
    rescale: Option<Rescale>,
    w_overrides: BTreeMap<VertexKey, Arrow>,
    builtin_tag: Option<String>,
}

impl AtomicRep {
    fn from_kind(n: u8, kind: RepKind, hints: Vec<Hint>, tag: Option<String>) -> AtomicRep {
        AtomicRep {
            n,
            kind,
            hints,
            phases_stripped: false,
            rescale: None,
            w_overrides: BTreeMap::new(),
            builtin_tag: tag,
        }
    }

    pub fn from_finite(rep: FiniteRep) -> AtomicRep {
        let n = rep.rank();
        let hints = rep.hints().to_vec();
        AtomicRep::from_kind(n, RepKind::Finite(rep), hints, None)
    }

    pub fn rank(&self) -> u8 {
        self.n
    }

    pub fn hints(&self) -> &[Hint] {
        &self.hints
    }

    /// The builtin family id this representation was constructed from, if any.
    pub fn builtin_tag(&self) -> Option<&str> {
        self.builtin_tag.as_deref()
    }

    /// Appends hints (from a representation file) to the shipped ones.
    pub fn with_extra_hints(mut self, extra: Vec<Hint>) -> AtomicRep {
        self.hints.extend(extra);
        self
    }

    /// Identity-phase copy: every arrow keeps its target, phases become 1.
    pub fn strip_phases(&self) -> AtomicRep {
        let mut rep = self.clone();
        rep.phases_stripped = true;
        rep
    }

    /// Multiplies every `W`-phase by `w` and every `V_k`-phase by `v[k-1]`.
    /// Callers are responsible for choosing scalars compatible with the
    /// defining relations.
    pub fn rescale_phases(&self, w: Phase, v: Vec<Phase>) -> AtomicRep {
        assert_eq!(v.len(), self.n as usize);
        let mut rep = self.clone();
        rep.rescale = Some(Rescale { w, v });
        rep
    }

    /// Redirects `W e_v` to the given arrow, leaving everything else alone.
    /// Backward maps are not adjusted; this exists for fault-injection tests
    /// that check the forward relations.
    pub fn with_w_override(&self, v: VertexKey, arrow: Arrow) -> AtomicRep {
        let mut rep = self.clone();
        rep.w_overrides.insert(v, arrow);
        rep
    }

    /// Vertex membership test for the key.
    pub fn contains(&self, v: &VertexKey) -> bool {
        match &self.kind {
            RepKind::LeftRegular => builtins::lr_contains(self.n, v),
            RepKind::FnUnitary { .. } => builtins::fn_contains(self.n, v),
            RepKind::SuTree => builtins::su_contains(self.n, v),
            RepKind::WeakShift => builtins::ws_contains(v),
            RepKind::Inductive { stream } => builtins::ind_contains(self.n, stream, v),
            RepKind::Finite(f) => f.contains(v),
        }
    }

    /// The finite vertex list, for file-backed representations.
    pub fn finite_vertices(&self) -> Option<Vec<VertexKey>> {
        match &self.kind {
            RepKind::Finite(f) => Some(f.vertices().to_vec()),
            _ => None,
        }
    }

    /// Boundary marking for file-backed representations: missing arrows at
    /// these vertices are unexplored, not zero.
    pub fn is_boundary(&self, v: &VertexKey) -> bool {
        match &self.kind {
            RepKind::Finite(f) => f.is_boundary(v),
            _ => false,
        }
    }

    /// Natural starting vertices for exploration.
    pub fn canonical_seeds(&self) -> Vec<VertexKey> {
        match &self.kind {
            RepKind::LeftRegular => vec![builtins::lr_key(&crate::semigroup::OdometerElement::identity(self.n))],
            RepKind::FnUnitary { .. } | RepKind::SuTree => vec![VertexKey::new("e")],
            RepKind::WeakShift => vec![VertexKey::new("(0,0)")],
            RepKind::Inductive { .. } => vec![VertexKey::new("g0")],
            RepKind::Finite(f) => f.vertices().to_vec(),
        }
    }

    fn adjust_forward(&self, img: Image, class: GenClass) -> Image {
        let Image::Arrow(mut a) = img else { return img };
        if let Some(rs) = &self.rescale {
            let extra = match class {
                GenClass::W => rs.w,
                GenClass::V(k) => rs.v[k as usize - 1],
            };
            a.phase = a.phase.mul(&extra);
        }
        if self.phases_stripped {
            a.phase = Phase::ONE;
        }
        Image::Arrow(a)
    }

    fn adjust_backward(&self, img: Image, class: GenClass) -> Image {
        let Image::Arrow(mut a) = img else { return img };
        if let Some(rs) = &self.rescale {
            let extra = match class {
                GenClass::W => rs.w,
                GenClass::V(k) => rs.v[k as usize - 1],
            };
            a.phase = a.phase.mul(&extra.conj());
        }
        if self.phases_stripped {
            a.phase = Phase::ONE;
        }
        Image::Arrow(a)
    }

    /// `W e_v`.
    pub fn w_of(&self, v: &VertexKey) -> Image {
        if let Some(a) = self.w_overrides.get(v) {
            let mut a = a.clone();
            if self.phases_stripped {
                a.phase = Phase::ONE;
            }
            return Image::Arrow(a);
        }
        let base = match &self.kind {
            RepKind::LeftRegular => builtins::lr_w_of(self.n, v),
            RepKind::FnUnitary { lambda } => builtins::fn_w_of(self.n, *lambda, v),
            RepKind::SuTree => builtins::su_w_of(self.n, v),
            RepKind::WeakShift => builtins::ws_w_of(v),
            RepKind::Inductive { stream } => builtins::ind_w_of(self.n, stream, v),
            RepKind::Finite(f) => f.w_of(v),
        };
        self.adjust_forward(base, GenClass::W)
    }

    /// `V_k e_v`.
    pub fn v_of(&self, k: u8, v: &VertexKey) -> Image {
        debug_assert!(k >= 1 && k <= self.n);
        let base = match &self.kind {
            RepKind::LeftRegular => builtins::lr_v_of(self.n, k, v),
            RepKind::FnUnitary { .. } => builtins::fn_v_of(self.n, k, v),
            RepKind::SuTree => builtins::su_v_of(self.n, k, v),
            RepKind::WeakShift => builtins::ws_v_of(self.n, k, v),
            RepKind::Inductive { stream } => builtins::ind_v_of(self.n, stream, k, v),
            RepKind::Finite(f) => f.v_of(k, v),
        };
        self.adjust_forward(base, GenClass::V(k))
    }

    /// `W* e_v`, or `Zero` when the adjoint annihilates.
    pub fn w_back(&self, v: &VertexKey) -> Image {
        let base = match &self.kind {
            RepKind::LeftRegular => builtins::lr_w_back(self.n, v),
            RepKind::FnUnitary { lambda } => builtins::fn_w_back(self.n, *lambda, v),
            RepKind::SuTree => builtins::su_w_back(self.n, v),
            RepKind::WeakShift => builtins::ws_w_back(v),
            RepKind::Inductive { stream } => builtins::ind_w_back(self.n, stream, v),
            RepKind::Finite(f) => f.w_back(v),
        };
        self.adjust_backward(base, GenClass::W)
    }

    /// `V_k* e_v`, or `Zero` when `e_v ∉ ran V_k`.
    pub fn v_back(&self, k: u8, v: &VertexKey) -> Image {
        debug_assert!(k >= 1 && k <= self.n);
        let base = match &self.kind {
            RepKind::LeftRegular => builtins::lr_v_back(self.n, k, v),
            RepKind::FnUnitary { .. } => builtins::fn_v_back(self.n, k, v),
            RepKind::SuTree => builtins::su_v_back(self.n, k, v),
            RepKind::WeakShift => builtins::ws_v_back(self.n, k, v),
            RepKind::Inductive { stream } => builtins::ind_v_back(self.n, stream, k, v),
            RepKind::Finite(f) => f.v_back(k, v),
        };
        self.adjust_backward(base, GenClass::V(k))
    }

    /// The unique `(k, V_k* e_v)` with a nonzero adjoint, exploiting the
    /// pairwise disjointness of the `π_k` ranges.
    pub fn joint_v_back(&self, v: &VertexKey) -> JointBack {
        let mut found: Option<(u8, Arrow)> = None;
        for k in 1..=self.n {
            match self.v_back(k, v) {
                Image::Arrow(a) => {
                    if found.is_some() {
                        // Overlapping ranges are a presentation error; the
                        // verifier reports them. Walkers treat it as opaque.
                        return JointBack::Unexplored;
                    }
                    found = Some((k, a));
                }
                Image::Zero => {}
                Image::Unexplored => return JointBack::Unexplored,
            }
        }
        match found {
            Some((k, a)) => JointBack::Arrow(k, a),
            None => JointBack::Zero,
        }
    }

    /// Whether `e_v` lies in the range of some `V_k`.
    pub fn in_ran_v(&self, v: &VertexKey) -> Option<bool> {
        match self.joint_v_back(v) {
            JointBack::Arrow(..) => Some(true),
            JointBack::Zero => Some(false),
            JointBack::Unexplored => None,
        }
    }

    /// Whether `e_v` lies in `ran W`.
    pub fn in_ran_w(&self, v: &VertexKey) -> Option<bool> {
        match self.w_back(v) {
            Image::Arrow(_) => Some(true),
            Image::Zero => Some(false),
            Image::Unexplored => None,
        }
    }

    /// Backward step under the row isometry `{V_2, ..., V_n, V_1 W}`:
    /// `e_v = (W V_i) e_x` has the unique solution `x = V_i* W* e_v`.
    pub fn wv_back(&self, v: &VertexKey) -> JointBack {
        match self.w_back(v) {
            Image::Arrow(a) => match self.joint_v_back(&a.target) {
                JointBack::Arrow(k, b) => {
                    JointBack::Arrow(k, Arrow::new(b.target, a.phase.mul(&b.phase)))
                }
                other => other,
            },
            Image::Zero => JointBack::Zero,
            Image::Unexplored => JointBack::Unexplored,
        }
    }
}

#[derive(Clone, Copy)]
enum GenClass {
    W,
    V(u8),
}

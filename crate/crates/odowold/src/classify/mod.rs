//! The four-part Wold-type classifier.
//!
//! Per basis vector of an atomic representation, decides membership in
//!
//! * `H_uu` — `W` unitary, `{V_k}` row unitary: the largest subspace on which
//!   `{V_2, ..., V_n, V_1 W}` is a row unitary, so membership is an infinite
//!   backward orbit under that family;
//! * `H_us` — `W` unitary, `{V_k}` pure: `⊕_μ V_μ (∩_m W^m K)` with
//!   `K = ∩_{i,j} ker V_i* W^j`;
//! * `H_su` — `W` pure, `{V_k}` row unitary: `⊕_k W^k (∩_m V_1^m K')` with
//!   `K' = ∩_j ker W* V_1^j`;
//! * `H_ws` — the weak bi-shift residue, by complementation.
//!
//! Membership of a basis vector reduces to deterministic orbit questions
//! because the generator ranges are pairwise orthogonal. The logic is sound
//! and three-valued: `In` and `Out` always carry a finite replayable
//! certificate (a dead orbit, a cycle, or a validated hint region); anything
//! else is `Unknown` with the budget spent.
//!
//! When the representation additionally passes the Nica covariance check
//! `W* V_1 = V_n W*` on the explored region, a resolved weak bi-shift vertex
//! is upgraded to `H_ss` with a strip-path certificate exhibiting
//! `e_v = V_μ W^m e_core` for a jointly wandering core, the concrete form of
//! the copies-of-the-left-regular-representation description of that
//! component.

mod popovici;
mod walker;

pub use popovici::{popovici_n1, PopoviciError};
pub use walker::{bounded_walk, Walk, WalkEnd, WalkKind};

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::rep::{AtomicRep, HintKind, VertexKey};

/// The five component labels. `SS` refines `WS` for Nica-covariant
/// representations and is only ever reported alongside a passing regional
/// Nica covariance check.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum ComponentId {
    UU,
    US,
    SU,
    WS,
    SS,
}

impl ComponentId {
    pub fn name(&self) -> &'static str {
        match self {
            ComponentId::UU => "uu",
            ComponentId::US => "us",
            ComponentId::SU => "su",
            ComponentId::WS => "ws",
            ComponentId::SS => "ss",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    In,
    Out,
    Unknown,
}

/// A replayable piece of finite evidence. Re-walking the named chain against
/// the representation's arrows confirms the claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// The walk dies at the last chain vertex.
    DeadBackwardOrbit {
        walk: WalkKind,
        chain: Vec<VertexKey>,
    },
    /// The walk returns from the last chain vertex to `chain[len - period]`.
    OrbitCycle {
        walk: WalkKind,
        chain: Vec<VertexKey>,
        period: usize,
    },
    /// The walk reaches a vertex of a region hinted total for it.
    HintRegion {
        walk: WalkKind,
        hint: HintKind,
        entry: VertexKey,
        chain: Vec<VertexKey>,
    },
    /// The walk's side condition fails at the last chain vertex (a forward
    /// orbit meets a generator range, or a backward chain exits the kernel).
    RangeHit {
        walk: WalkKind,
        chain: Vec<VertexKey>,
        detail: String,
    },
    /// `e_v = V_μ W^m e_core` with the core jointly wandering
    /// (`core ∈ ∩_k ker V_k* ∩ ker W*`).
    StripPath {
        mu: Vec<u8>,
        w_power: u64,
        core: VertexKey,
    },
    /// Conjunction of sub-certificates.
    AllOf { parts: Vec<Certificate> },
}

impl Certificate {
    /// The longest orbit chain the certificate relies on. A depth-`d`
    /// truncated projection can only witness events within `d` steps, so
    /// numerical cross-checks require `evidence_depth() <= d`.
    pub fn evidence_depth(&self) -> usize {
        match self {
            Certificate::DeadBackwardOrbit { chain, .. }
            | Certificate::OrbitCycle { chain, .. }
            | Certificate::HintRegion { chain, .. }
            | Certificate::RangeHit { chain, .. } => chain.len(),
            Certificate::StripPath { mu, w_power, .. } => mu.len() + *w_power as usize,
            Certificate::AllOf { parts } => {
                parts.iter().map(|c| c.evidence_depth()).max().unwrap_or(0)
            }
        }
    }
}

/// Three-valued membership verdict with evidence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Distinct vertices expanded while deciding.
    pub spent: u32,
}

impl Verdict {
    fn r#in(cert: Certificate, spent: u32) -> Verdict {
        Verdict {
            status: Status::In,
            certificate: Some(cert),
            spent,
        }
    }

    fn out(cert: Certificate, spent: u32) -> Verdict {
        Verdict {
            status: Status::Out,
            certificate: Some(cert),
            spent,
        }
    }

    fn unknown(spent: u32) -> Verdict {
        Verdict {
            status: Status::Unknown,
            certificate: None,
            spent,
        }
    }

    pub fn is_in(&self) -> bool {
        self.status == Status::In
    }

    pub fn is_out(&self) -> bool {
        self.status == Status::Out
    }

    pub fn conclusive(&self) -> bool {
        self.status != Status::Unknown
    }
}

/// Per-vertex report across the four (or five) components.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub vertex: VertexKey,
    pub uu: Verdict,
    pub us: Verdict,
    pub su: Verdict,
    pub ws: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ss: Option<Verdict>,
    pub resolved: Option<ComponentId>,
    pub budget: u32,
}

impl Classification {
    pub fn verdict(&self, c: ComponentId) -> Option<&Verdict> {
        match c {
            ComponentId::UU => Some(&self.uu),
            ComponentId::US => Some(&self.us),
            ComponentId::SU => Some(&self.su),
            ComponentId::WS => Some(&self.ws),
            ComponentId::SS => self.ss.as_ref(),
        }
    }

    pub fn statuses(&self) -> [(ComponentId, Status); 4] {
        [
            (ComponentId::UU, self.uu.status),
            (ComponentId::US, self.us.status),
            (ComponentId::SU, self.su.status),
            (ComponentId::WS, self.ws.status),
        ]
    }
}

/// Flat JSON record shape for classifications: component statuses as
/// strings, certificates collected in a fixed order, stable field order.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRecord {
    pub vertex: String,
    pub uu: Status,
    pub us: Status,
    pub su: Status,
    pub ws: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ss: Option<Status>,
    pub resolved: Option<&'static str>,
    pub certificates: Vec<CertificateEntry>,
    pub budget: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateEntry {
    pub component: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl Classification {
    pub fn to_record(&self) -> ClassificationRecord {
        let mut certificates = Vec::new();
        let mut push = |component: &'static str, verdict: &Verdict| {
            certificates.push(CertificateEntry {
                component,
                status: verdict.status,
                certificate: verdict.certificate.clone(),
            });
        };
        push("uu", &self.uu);
        push("us", &self.us);
        push("su", &self.su);
        push("ws", &self.ws);
        if let Some(ss) = &self.ss {
            push("ss", ss);
        }
        ClassificationRecord {
            vertex: self.vertex.to_string(),
            uu: self.uu.status,
            us: self.us.status,
            su: self.su.status,
            ws: self.ws.status,
            ss: self.ss.as_ref().map(|v| v.status),
            resolved: self.resolved.map(|c| c.name()),
            certificates,
            budget: self.budget,
        }
    }
}

fn cert_of(walk: &Walk) -> Certificate {
    match &walk.end {
        WalkEnd::Dead => Certificate::DeadBackwardOrbit {
            walk: walk.kind,
            chain: walk.chain.clone(),
        },
        WalkEnd::Cycle { period } => Certificate::OrbitCycle {
            walk: walk.kind,
            chain: walk.chain.clone(),
            period: *period,
        },
        WalkEnd::Hint { kind } => Certificate::HintRegion {
            walk: walk.kind,
            hint: *kind,
            entry: walk.chain.last().expect("nonempty chain").clone(),
            chain: walk.chain.clone(),
        },
        WalkEnd::SideViolated { detail } => Certificate::RangeHit {
            walk: walk.kind,
            chain: walk.chain.clone(),
            detail: detail.clone(),
        },
        WalkEnd::Exhausted | WalkEnd::Unexplored => {
            unreachable!("inconclusive walks carry no certificate")
        }
    }
}

/// A classification session: owns a private memo table so orbit tails shared
/// between queries are walked once. Sessions on the same immutable
/// representation are independent and may run concurrently.
pub struct ClassifySession<'a> {
    rep: &'a AtomicRep,
    budget: u32,
    memo: HashMap<(VertexKey, ComponentId), Verdict>,
    explored: BTreeSet<VertexKey>,
}

impl<'a> ClassifySession<'a> {
    pub fn new(rep: &'a AtomicRep, budget: u32) -> ClassifySession<'a> {
        assert!(budget >= 1);
        ClassifySession {
            rep,
            budget,
            memo: HashMap::new(),
            explored: BTreeSet::new(),
        }
    }

    pub fn rep(&self) -> &AtomicRep {
        self.rep
    }

    /// Every vertex touched by any walk so far.
    pub fn explored(&self) -> &BTreeSet<VertexKey> {
        &self.explored
    }

    fn walk(&mut self, start: &VertexKey, kind: WalkKind) -> Walk {
        let walk = bounded_walk(self.rep, start, kind, self.budget);
        self.explored.extend(walk.chain.iter().cloned());
        walk
    }

    /// Membership in `H_uu`: the backward orbit under `{V_2, ..., V_n, V_1W}`
    /// must continue forever.
    pub fn in_uu(&mut self, v: &VertexKey) -> Verdict {
        if let Some(hit) = self.memo.get(&(v.clone(), ComponentId::UU)) {
            return hit.clone();
        }
        let walk = self.walk(v, WalkKind::BackWv);
        let spent = walk.spent();
        let verdict = match walk.end {
            WalkEnd::Dead => Verdict::out(cert_of(&walk), spent),
            WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => Verdict::r#in(cert_of(&walk), spent),
            WalkEnd::Exhausted | WalkEnd::Unexplored => Verdict::unknown(spent),
            WalkEnd::SideViolated { .. } => unreachable!("BackWv has no side condition"),
        };
        self.memo
            .insert((v.clone(), ComponentId::UU), verdict.clone());
        verdict
    }

    /// Membership in `H_us = ⊕_μ V_μ (∩_m W^m K)`, `K = ∩_{i,j} ker V_i* W^j`.
    ///
    /// Strips the backward V-chain to its wandering terminal `f`, then
    /// requires (a) the forward W-orbit of `f` to avoid every `V`-range
    /// (`f ∈ K`) and (b) the backward W-chain of `f` to exist forever while
    /// avoiding every `V`-range (`f ∈ ∩_m W^m K`; the chain's own vertices
    /// supply the kernel membership of the witnesses `x_m`).
    pub fn in_us(&mut self, v: &VertexKey) -> Verdict {
        if let Some(hit) = self.memo.get(&(v.clone(), ComponentId::US)) {
            return hit.clone();
        }
        let strip = self.walk(v, WalkKind::BackV);
        let mut spent = strip.spent();
        let verdict = match strip.end {
            WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => {
                // the chain never terminates, so v ∉ ⊕ V_μ (∩ ker V_i*)
                Verdict::out(cert_of(&strip), spent)
            }
            WalkEnd::Exhausted | WalkEnd::Unexplored => Verdict::unknown(spent),
            WalkEnd::SideViolated { .. } => unreachable!("BackV has no side condition"),
            WalkEnd::Dead => {
                let f = strip.chain.last().expect("nonempty chain").clone();
                let strip_cert = cert_of(&strip);
                let forward = self.walk(&f, WalkKind::ForwardWAvoidRanV);
                spent += forward.spent();
                match forward.end {
                    WalkEnd::SideViolated { .. } => {
                        Verdict::out(Certificate::AllOf { parts: vec![strip_cert, cert_of(&forward)] }, spent)
                    }
                    WalkEnd::Exhausted | WalkEnd::Unexplored => Verdict::unknown(spent),
                    WalkEnd::Dead => unreachable!("forward symbol maps never annihilate"),
                    WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => {
                        let fwd_cert = cert_of(&forward);
                        let back = self.walk(&f, WalkKind::BackWAvoidRanV);
                        spent += back.spent();
                        match back.end {
                            WalkEnd::Dead | WalkEnd::SideViolated { .. } => Verdict::out(
                                Certificate::AllOf { parts: vec![strip_cert, cert_of(&back)] },
                                spent,
                            ),
                            WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => Verdict::r#in(
                                Certificate::AllOf { parts: vec![strip_cert, fwd_cert, cert_of(&back)] },
                                spent,
                            ),
                            WalkEnd::Exhausted | WalkEnd::Unexplored => Verdict::unknown(spent),
                        }
                    }
                }
            }
        };
        self.memo
            .insert((v.clone(), ComponentId::US), verdict.clone());
        verdict
    }

    /// Membership in `H_su = ⊕_k W^k (∩_m V_1^m K')`, `K' = ∩_j ker W* V_1^j`.
    ///
    /// Mirror image of [`Self::in_us`]: strip the backward W-chain to
    /// `g ∈ ker W*`, then (a) the forward V_1-orbit of `g` avoids `ran W` and
    /// (b) the backward V_1-chain of `g` exists forever avoiding `ran W`.
    pub fn in_su(&mut self, v: &VertexKey) -> Verdict {
        if let Some(hit) = self.memo.get(&(v.clone(), ComponentId::SU)) {
            return hit.clone();
        }
        let strip = self.walk(v, WalkKind::BackW);
        let mut spent = strip.spent();
        let verdict = match strip.end {
            WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => Verdict::out(cert_of(&strip), spent),
            WalkEnd::Exhausted | WalkEnd::Unexplored => Verdict::unknown(spent),
            WalkEnd::SideViolated { .. } => unreachable!("BackW has no side condition"),
            WalkEnd::Dead => {
                let g = strip.chain.last().expect("nonempty chain").clone();
                let strip_cert = cert_of(&strip);
                let forward = self.walk(&g, WalkKind::ForwardV1AvoidRanW);
                spent += forward.spent();
                match forward.end {
                    WalkEnd::SideViolated { .. } => {
                        Verdict::out(Certificate::AllOf { parts: vec![strip_cert, cert_of(&forward)] }, spent)
                    }
                    WalkEnd::Exhausted | WalkEnd::Unexplored => Verdict::unknown(spent),
                    WalkEnd::Dead => unreachable!("forward symbol maps never annihilate"),
                    WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => {
                        let fwd_cert = cert_of(&forward);
                        let back = self.walk(&g, WalkKind::BackV1AvoidRanW);
                        spent += back.spent();
                        match back.end {
                            WalkEnd::Dead | WalkEnd::SideViolated { .. } => Verdict::out(
                                Certificate::AllOf { parts: vec![strip_cert, cert_of(&back)] },
                                spent,
                            ),
                            WalkEnd::Cycle { .. } => Verdict::r#in(
                                Certificate::AllOf { parts: vec![strip_cert, fwd_cert, cert_of(&back)] },
                                spent,
                            ),
                            WalkEnd::Hint { .. } => {
                                unreachable!("BackV1AvoidRanW consults no hint kind")
                            }
                            WalkEnd::Exhausted | WalkEnd::Unexplored => Verdict::unknown(spent),
                        }
                    }
                }
            }
        };
        self.memo
            .insert((v.clone(), ComponentId::SU), verdict.clone());
        verdict
    }

    /// Exact Nica covariance check `W* V_1 e_u = V_n W* e_u` over every
    /// vertex this session has explored. Inconclusive (boundary) vertices
    /// make the whole check inconclusive.
    fn nica_on_explored(&self) -> Option<bool> {
        use crate::rep::Image;
        let n = self.rep.rank();
        for u in &self.explored {
            let lhs = crate::rep::verify_compose(self.rep.v_of(1, u), |t| self.rep.w_back(t));
            let rhs = crate::rep::verify_compose(self.rep.w_back(u), |t| self.rep.v_of(n, t));
            if matches!(lhs, Image::Unexplored) || matches!(rhs, Image::Unexplored) {
                return None;
            }
            if lhs != rhs {
                return Some(false);
            }
        }
        Some(true)
    }

    /// Builds the strip-path certificate for a Nica-covariant weak bi-shift
    /// vertex: `e_v = V_μ W^m e_core` with a jointly wandering core.
    fn strip_path(&mut self, v: &VertexKey) -> Option<Certificate> {
        let strip = self.walk(v, WalkKind::BackV);
        if strip.end != WalkEnd::Dead {
            return None;
        }
        let f = strip.chain.last().expect("nonempty chain").clone();
        let wstrip = self.walk(&f, WalkKind::BackW);
        if wstrip.end != WalkEnd::Dead {
            return None;
        }
        let core = wstrip.chain.last().expect("nonempty chain").clone();
        if self.rep.in_ran_v(&core) != Some(false) || self.rep.in_ran_w(&core) != Some(false) {
            return None;
        }
        Some(Certificate::StripPath {
            mu: strip.digits.clone(),
            w_power: (wstrip.chain.len() - 1) as u64,
            core,
        })
    }

    /// Full per-vertex classification.
    pub fn classify(&mut self, v: &VertexKey) -> Classification {
        let uu = self.in_uu(v);
        let us = self.in_us(v);
        let su = self.in_su(v);

        let ins: Vec<(ComponentId, &Verdict)> = [
            (ComponentId::UU, &uu),
            (ComponentId::US, &us),
            (ComponentId::SU, &su),
        ]
        .into_iter()
        .filter(|(_, w)| w.is_in())
        .collect();
        let all_conclusive = uu.conclusive() && us.conclusive() && su.conclusive();
        let spent = uu.spent + us.spent + su.spent;

        let ws = if !all_conclusive {
            Verdict::unknown(spent)
        } else if let Some((_, inner)) = ins.first() {
            // one component claims the vertex, so the complement excludes it
            Verdict::out(
                Certificate::AllOf { parts: vec![inner.certificate.clone().expect("In carries evidence")] },
                spent,
            )
        } else {
            // three Outs: the decomposition is exhaustive, so the vertex
            // belongs to the residual weak bi-shift component
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
                    // walk the strip path first so the covariance check
                    // covers its vertices too
                    if let Some(path) = self.strip_path(v) {
                        if self.nica_on_explored() == Some(true) {
                            ss = Some(Verdict::r#in(path, ws.spent));
                            resolved = Some(ComponentId::SS);
                        }
                    }
                }
                1 => resolved = Some(ins[0].0),
                // impossible when the representation satisfies the axioms;
                // the partition property tests would flag it
                _ => resolved = None,
            }
        }

        Classification {
            vertex: v.clone(),
            uu,
            us,
            su,
            ws,
            ss,
            resolved,
            budget: self.budget,
        }
    }
}

/// One-shot helpers mirroring the session methods.
pub fn in_uu(rep: &AtomicRep, v: &VertexKey, budget: u32) -> Verdict {
    ClassifySession::new(rep, budget).in_uu(v)
}

pub fn in_us(rep: &AtomicRep, v: &VertexKey, budget: u32) -> Verdict {
    ClassifySession::new(rep, budget).in_us(v)
}

pub fn in_su(rep: &AtomicRep, v: &VertexKey, budget: u32) -> Verdict {
    ClassifySession::new(rep, budget).in_su(v)
}

pub fn classify(rep: &AtomicRep, v: &VertexKey, budget: u32) -> Classification {
    ClassifySession::new(rep, budget).classify(v)
}

/// Weak bi-shift report over an explored region.
#[derive(Clone, Debug, Serialize)]
pub struct WbsReport {
    pub explored: usize,
    /// Vertices witnessing failure, with the restricted operator that is not
    /// pure there.
    pub failures: Vec<(VertexKey, String)>,
    pub unknowns: Vec<VertexKey>,
}

impl WbsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.unknowns.is_empty()
    }
}

/// Checks the weak bi-shift conditions over the region explored from the seeds:
/// no vertex of `K = ∩ ker V_i* W^j` continues backward under `W` forever
/// inside `K`, no vertex of `K' = ∩ ker W* V_1^j` continues backward under
/// `V_1` forever inside `K'`, and no vertex certifies membership in `H_uu`.
pub fn weak_bi_shift_check(rep: &AtomicRep, seeds: &[VertexKey], budget: u32) -> WbsReport {
    let region = crate::rep::explore(rep, seeds, 4);
    let mut failures = Vec::new();
    let mut unknowns = Vec::new();
    let mut session = ClassifySession::new(rep, budget);
    for v in &region.order {
        // W restricted to K must be pure
        let in_k = bounded_walk(rep, v, WalkKind::ForwardWAvoidRanV, budget);
        match in_k.end {
            WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => {
                let back = bounded_walk(rep, v, WalkKind::BackWAvoidRanV, budget);
                match back.end {
                    WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => {
                        failures.push((v.clone(), "W restricted to ∩ker V_i*W^j".to_string()));
                    }
                    WalkEnd::Dead | WalkEnd::SideViolated { .. } => {}
                    _ => unknowns.push(v.clone()),
                }
            }
            WalkEnd::SideViolated { .. } => {}
            WalkEnd::Dead => unreachable!("forward maps never annihilate"),
            _ => unknowns.push(v.clone()),
        }
        // V_1 restricted to K' must be pure
        let in_kp = bounded_walk(rep, v, WalkKind::ForwardV1AvoidRanW, budget);
        match in_kp.end {
            WalkEnd::Cycle { .. } | WalkEnd::Hint { .. } => {
                let back = bounded_walk(rep, v, WalkKind::BackV1AvoidRanW, budget);
                match back.end {
                    WalkEnd::Cycle { .. } => {
                        failures.push((v.clone(), "V_1 restricted to ∩ker W*V_1^j".to_string()));
                    }
                    WalkEnd::Dead | WalkEnd::SideViolated { .. } => {}
                    WalkEnd::Hint { .. } => unreachable!("BackV1AvoidRanW consults no hints"),
                    _ => unknowns.push(v.clone()),
                }
            }
            WalkEnd::SideViolated { .. } => {}
            WalkEnd::Dead => unreachable!("forward maps never annihilate"),
            _ => unknowns.push(v.clone()),
        }
        // {V_2, ..., V_n, V_1W} must be pure
        let uu = session.in_uu(v);
        match uu.status {
            Status::In => failures.push((v.clone(), "{V_2,...,V_n,V_1W} row isometry".to_string())),
            Status::Out => {}
            Status::Unknown => unknowns.push(v.clone()),
        }
    }
    WbsReport {
        explored: region.len(),
        failures,
        unknowns,
    }
}

/// Re-walks a certificate against the representation and confirms its claim.
pub fn replay_certificate(rep: &AtomicRep, cert: &Certificate) -> bool {
    match cert {
        Certificate::AllOf { parts } => parts.iter().all(|c| replay_certificate(rep, c)),
        Certificate::DeadBackwardOrbit { walk, chain }
        | Certificate::OrbitCycle { walk, chain, .. }
        | Certificate::HintRegion { walk, chain, .. }
        | Certificate::RangeHit { walk, chain, .. } => {
            let Some(start) = chain.first() else {
                return false;
            };
            let again = bounded_walk(rep, start, *walk, chain.len() as u32 + 1);
            if again.chain != *chain {
                return false;
            }
            match (cert, &again.end) {
                (Certificate::DeadBackwardOrbit { .. }, WalkEnd::Dead) => true,
                (Certificate::OrbitCycle { period, .. }, WalkEnd::Cycle { period: p }) => {
                    period == p
                }
                (Certificate::HintRegion { hint, entry, .. }, WalkEnd::Hint { kind }) => {
                    hint == kind && again.chain.last() == Some(entry)
                }
                (Certificate::RangeHit { .. }, WalkEnd::SideViolated { .. }) => true,
                _ => false,
            }
        }
        Certificate::StripPath { mu, w_power, core } => {
            use crate::rep::Image;
            if rep.in_ran_v(core) != Some(false) || rep.in_ran_w(core) != Some(false) {
                return false;
            }
            let mut cur = core.clone();
            for _ in 0..*w_power {
                match rep.w_of(&cur) {
                    Image::Arrow(a) => cur = a.target,
                    _ => return false,
                }
            }
            for d in mu.iter().rev() {
                match rep.v_of(*d, &cur) {
                    Image::Arrow(a) => cur = a.target,
                    _ => return false,
                }
            }
            // a replayer holds the classified vertex; here we only confirm
            // the path exists and the claimed digits strip back down to it
            let strip = bounded_walk(rep, &cur, WalkKind::BackV, mu.len() as u32 + 2);
            strip.end == WalkEnd::Dead && strip.digits == *mu
        }
    }
}

//! Independent numerical verification on finite matrix windows.
//!
//! A window is a breadth-first closure of seed vertices realized as dense
//! complex matrices for `W, V_1, ..., V_n`. True isometries do not exist in
//! finite dimension, so every computation respects an interior margin: a
//! formula that composes `d` arrows is evaluated only at vertices at least
//! `d` arrow steps away from any vertex with a missing or window-exiting
//! arrow. The component projections are truncations of the subspace
//! formulas:
//!
//! * `P_uu^(m) = Σ_{|μ|=m} A_μ A_μ*` for `A_i = W V_i`, monotone
//!   non-increasing in `m`;
//! * `P_us^(d) = Σ_{|μ|≤d} V_μ P_L^(d) V_μ*` with
//!   `P_L^(d) = Π_{m≤d} W^m Q_K W^{*m}` and
//!   `Q_K = Π_{i≤n, j≤d} (I − W^{*j} V_i V_i* W^j)`;
//! * `P_su^(d)` the mirror image through `(W, V_1)` exchange;
//! * the residual weak bi-shift value is `1` minus the other three.
//!
//! Values near 1 indicate membership, near 0 exclusion; agreement with the
//! combinatorial classifier is the release gate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{ClassifySession, ComponentId, Status};
use crate::matrix::{add_into, basis_vector, norm_sqr, sub, CMatrix};
use crate::rep::{explore_capped, AtomicRep, Image, VertexKey};

pub const DEFAULT_VERTEX_CAP: usize = 200_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("window exceeds the vertex cap ({0} vertices)")]
    WindowTooLarge(usize),
    #[error("projection depth {depth} needs interior margin {margin}, but the window has no such vertices")]
    DepthExceedsMargin { depth: u32, margin: u32 },
    #[error("representation fails verify_relations on the window: {0}")]
    RelationsViolated(String),
}

/// Finite truncation of a representation with dense matrices and
/// interior/boundary marking.
pub struct Window {
    n: u8,
    keys: Vec<VertexKey>,
    index: BTreeMap<VertexKey, usize>,
    /// BFS distance from the seed set.
    dist: Vec<u32>,
    radius: u32,
    /// Arrow distance to the nearest vertex with a missing or exiting arrow
    /// (`u32::MAX` when every arrow of every vertex stays inside).
    taint: Vec<u32>,
    pub w: CMatrix,
    pub v: Vec<CMatrix>,
}

impl Window {
    pub fn rank(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn keys(&self) -> &[VertexKey] {
        &self.keys
    }

    pub fn index_of(&self, v: &VertexKey) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn dist_of(&self, v: &VertexKey) -> Option<u32> {
        self.index_of(v).map(|i| self.dist[i])
    }

    /// Vertices whose `margin`-step arrow neighborhoods lie entirely inside
    /// the window.
    pub fn interior(&self, margin: u32) -> Vec<usize> {
        (0..self.keys.len())
            .filter(|i| self.taint[*i] >= margin)
            .collect()
    }

    pub fn interior_keys(&self, margin: u32) -> Vec<VertexKey> {
        self.interior(margin)
            .into_iter()
            .map(|i| self.keys[i].clone())
            .collect()
    }

    fn basis(&self, i: usize) -> Vec<Complex64> {
        basis_vector(self.keys.len(), i)
    }
}

/// Breadth-first closure of the seeds to the given radius under all forward
/// and backward arrows, realized as dense matrices with a deterministic
/// (sorted) vertex ordering.
pub fn build_window(
    rep: &AtomicRep,
    seeds: &[VertexKey],
    radius: u32,
    cap: usize,
) -> Result<Window, OracleError> {
    assert!(radius >= 2, "windows need radius at least 2");
    let set = explore_capped(rep, seeds, radius, cap).map_err(OracleError::WindowTooLarge)?;
    let mut keys: Vec<VertexKey> = set.order.clone();
    keys.sort();
    let index: BTreeMap<VertexKey, usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect();
    let dim = keys.len();
    let dist: Vec<u32> = keys.iter().map(|k| set.dist[k]).collect();

    let n = rep.rank();
    let mut w = CMatrix::zeros(dim);
    let mut v = vec![CMatrix::zeros(dim); n as usize];
    let mut exits = vec![false; dim];

    for (j, key) in keys.iter().enumerate() {
        match rep.w_of(key) {
            Image::Arrow(a) => match index.get(&a.target) {
                Some(&i) => w.set(i, j, a.phase.to_complex()),
                None => exits[j] = true,
            },
            _ => exits[j] = true,
        }
        for k in 1..=n {
            match rep.v_of(k, key) {
                Image::Arrow(a) => match index.get(&a.target) {
                    Some(&i) => v[(k - 1) as usize].set(i, j, a.phase.to_complex()),
                    None => exits[j] = true,
                },
                _ => exits[j] = true,
            }
        }
        // backward arrows leaving the window also poison adjoint columns
        match rep.w_back(key) {
            Image::Arrow(a) if !index.contains_key(&a.target) => exits[j] = true,
            Image::Unexplored => exits[j] = true,
            _ => {}
        }
        for k in 1..=n {
            match rep.v_back(k, key) {
                Image::Arrow(a) if !index.contains_key(&a.target) => exits[j] = true,
                Image::Unexplored => exits[j] = true,
                _ => {}
            }
        }
    }

    // arrow-distance to the nearest exit vertex, over undirected in-window
    // arrows (forward entries and their reverses)
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); dim];
    {
        let mut add_edges = |m: &CMatrix| {
            for j in 0..dim {
                for i in 0..dim {
                    if m.get(i, j).norm_sqr() != 0.0 {
                        adjacency[j].push(i);
                        adjacency[i].push(j);
                    }
                }
            }
        };
        add_edges(&w);
        for m in &v {
            add_edges(m);
        }
    }
    let mut taint = vec![u32::MAX; dim];
    let mut queue = VecDeque::new();
    for (i, is_exit) in exits.iter().enumerate() {
        if *is_exit {
            taint[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let base = taint[i];
        for &j in &adjacency[i] {
            if taint[j] == u32::MAX {
                taint[j] = base + 1;
                queue.push_back(j);
            }
        }
    }

    Ok(Window {
        n,
        keys,
        index,
        dist,
        radius,
        taint,
        w,
        v,
    })
}

/// Exact-construction residuals measured on interior columns.
#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    /// Max column norm of each relation defect over the interior.
    pub residuals: BTreeMap<String, f64>,
    /// Nica covariance defect, reported separately with its witness column.
    pub nc_residual: f64,
    pub nc_witness: Option<VertexKey>,
    pub interior_checked: usize,
}

impl NumericReport {
    pub fn max_relation_residual(&self) -> f64 {
        self.residuals.values().cloned().fold(0.0, f64::max)
    }
}

/// Residuals of the defining relations, isometry, range orthogonality, and
/// Nica covariance, measured column by column on the interior.
pub fn check_relations_numeric(win: &Window, tol: f64) -> NumericReport {
    assert!(tol > 0.0);
    let n = win.n as usize;
    let interior = win.interior(2);
    let mut residuals: BTreeMap<String, f64> = BTreeMap::new();
    let mut nc_residual = 0.0;
    let mut nc_witness = None;

    for &j in &interior {
        let e = win.basis(j);
        let bump = |map: &mut BTreeMap<String, f64>, name: String, value: f64| {
            let slot = map.entry(name).or_insert(0.0);
            if value > *slot {
                *slot = value;
            }
        };
        for k in 0..n {
            // W V_k = V_{k+1} (k < n), W V_n = V_1 W
            let lhs = win.w.apply(&win.v[k].apply(&e));
            let rhs = if k + 1 < n {
                win.v[k + 1].apply(&e)
            } else {
                win.v[0].apply(&win.w.apply(&e))
            };
            let name = if k + 1 < n {
                format!("WV_{}=V_{}", k + 1, k + 2)
            } else {
                "WV_n=V_1W".to_string()
            };
            bump(&mut residuals, name, norm_sqr(&sub(&lhs, &rhs)).sqrt());

            // isometry V_k* V_k = I
            let back = win.v[k].apply_adj(&win.v[k].apply(&e));
            bump(
                &mut residuals,
                format!("V_{}*V_{}=I", k + 1, k + 1),
                norm_sqr(&sub(&back, &e)).sqrt(),
            );

            // range orthogonality V_j* V_k = 0 for j != k
            for l in 0..n {
                if l != k {
                    let cross = win.v[l].apply_adj(&win.v[k].apply(&e));
                    bump(
                        &mut residuals,
                        format!("V_{}*V_{}=0", l + 1, k + 1),
                        norm_sqr(&cross).sqrt(),
                    );
                }
            }
        }
        // isometry of W
        let back = win.w.apply_adj(&win.w.apply(&e));
        bump(
            &mut residuals,
            "W*W=I".to_string(),
            norm_sqr(&sub(&back, &e)).sqrt(),
        );

        // Nica covariance W* V_1 = V_n W*
        let lhs = win.w.apply_adj(&win.v[0].apply(&e));
        let rhs = win.v[n - 1].apply(&win.w.apply_adj(&e));
        let defect = norm_sqr(&sub(&lhs, &rhs)).sqrt();
        if defect > nc_residual {
            nc_residual = defect;
            nc_witness = Some(win.keys[j].clone());
        }
    }

    NumericReport {
        residuals,
        nc_residual,
        nc_witness: if nc_residual > tol { nc_witness } else { None },
        interior_checked: interior.len(),
    }
}

fn apply_w_pow(win: &Window, times: u32, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = x.to_vec();
    for _ in 0..times {
        y = win.w.apply(&y);
    }
    y
}

fn apply_w_adj_pow(win: &Window, times: u32, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = x.to_vec();
    for _ in 0..times {
        y = win.w.apply_adj(&y);
    }
    y
}

/// `Q_K x` for `K = ∩_{i,j≤d} ker V_i* W^j`, as the product of the
/// elementary co-range projections (the factors commute on atomic windows).
fn kernel_projection_us(win: &Window, depth: u32, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = x.to_vec();
    for j in 0..=depth {
        for vi in &win.v {
            let up = apply_w_pow(win, j, &y);
            let ranged = vi.apply(&vi.apply_adj(&up));
            let back = apply_w_adj_pow(win, j, &ranged);
            y = sub(&y, &back);
        }
    }
    y
}

/// `Q_K' x` for `K' = ∩_{j≤d} ker W* V_1^j`.
fn kernel_projection_su(win: &Window, depth: u32, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = x.to_vec();
    for j in 0..=depth {
        let mut up = y.clone();
        for _ in 0..j {
            up = win.v[0].apply(&up);
        }
        let ranged = win.w.apply(&win.w.apply_adj(&up));
        let mut back = ranged;
        for _ in 0..j {
            back = win.v[0].apply_adj(&back);
        }
        y = sub(&y, &back);
    }
    y
}

fn proj_uu(win: &Window, depth: u32, x: &[Complex64]) -> Vec<Complex64> {
    if depth == 0 {
        return x.to_vec();
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); x.len()];
    for vi in &win.v {
        // A_i* = V_i* W*
        let stripped = vi.apply_adj(&win.w.apply_adj(x));
        if norm_sqr(&stripped) == 0.0 {
            continue;
        }
        let inner = proj_uu(win, depth - 1, &stripped);
        let rebuilt = win.w.apply(&vi.apply(&inner));
        add_into(&mut acc, &rebuilt);
    }
    acc
}

fn proj_core_us(win: &Window, depth: u32, x: &[Complex64]) -> Vec<Complex64> {
    // P_L = Π_m W^m Q_K W^{*m}
    let mut y = x.to_vec();
    for m in 0..=depth {
        let down = apply_w_adj_pow(win, m, &y);
        let kept = kernel_projection_us(win, depth, &down);
        y = apply_w_pow(win, m, &kept);
    }
    y
}

fn proj_us(win: &Window, depth: u32, levels: u32, x: &[Complex64]) -> Vec<Complex64> {
    let mut acc = proj_core_us(win, depth, x);
    if levels == 0 {
        return acc;
    }
    for vi in &win.v {
        let stripped = vi.apply_adj(x);
        if norm_sqr(&stripped) == 0.0 {
            continue;
        }
        let inner = proj_us(win, depth, levels - 1, &stripped);
        add_into(&mut acc, &vi.apply(&inner));
    }
    acc
}

fn proj_core_su(win: &Window, depth: u32, x: &[Complex64]) -> Vec<Complex64> {
    // P_L' = Π_m V_1^m Q_K' V_1^{*m}
    let mut y = x.to_vec();
    for m in 0..=depth {
        let mut down = y.clone();
        for _ in 0..m {
            down = win.v[0].apply_adj(&down);
        }
        let kept = kernel_projection_su(win, depth, &down);
        let mut up = kept;
        for _ in 0..m {
            up = win.v[0].apply(&up);
        }
        y = up;
    }
    y
}

fn proj_su(win: &Window, depth: u32, x: &[Complex64]) -> Vec<Complex64> {
    // P_su = Σ_{k≤d} W^k P_L' W^{*k}
    let mut acc = vec![Complex64::new(0.0, 0.0); x.len()];
    for k in 0..=depth {
        let down = apply_w_adj_pow(win, k, x);
        if norm_sqr(&down) == 0.0 {
            break;
        }
        let kept = proj_core_su(win, depth, &down);
        add_into(&mut acc, &apply_w_pow(win, k, &kept));
    }
    acc
}

/// `‖P_c^(depth) e_v‖²` at the given vertices. Callers own the adequacy of
/// the truncation at their evaluation points; [`project_component`] applies
/// the interior-margin rule instead.
pub fn project_component_at(
    win: &Window,
    component: ComponentId,
    depth: u32,
    vertices: &[VertexKey],
) -> BTreeMap<VertexKey, f64> {
    let mut out = BTreeMap::new();
    for key in vertices {
        let Some(i) = win.index_of(key) else { continue };
        let e = win.basis(i);
        let value = match component {
            ComponentId::UU => norm_sqr(&proj_uu(win, depth, &e)),
            ComponentId::US => norm_sqr(&proj_us(win, depth, depth, &e)),
            ComponentId::SU => norm_sqr(&proj_su(win, depth, &e)),
            ComponentId::WS | ComponentId::SS => {
                let uu = norm_sqr(&proj_uu(win, depth, &e));
                let us = norm_sqr(&proj_us(win, depth, depth, &e));
                let su = norm_sqr(&proj_su(win, depth, &e));
                (1.0 - uu - us - su).clamp(0.0, 1.0)
            }
        };
        out.insert(key.clone(), value);
    }
    out
}

/// Projection norms on the interior sized for the formula: components
/// compose two arrows per quantifier level, so depth `d` requires margin
/// `2d`.
pub fn project_component(
    win: &Window,
    component: ComponentId,
    depth: u32,
) -> Result<BTreeMap<VertexKey, f64>, OracleError> {
    let margin = 2 * depth;
    let inside = win.interior_keys(margin);
    if inside.is_empty() {
        return Err(OracleError::DepthExceedsMargin { depth, margin });
    }
    Ok(project_component_at(win, component, depth, &inside))
}

/// Classical Wold data for a single window isometry: per-vertex
/// `‖P_{ran S^depth} e_v‖²` and the interior kernel of `S*` (the wandering
/// vectors).
pub fn wold_single(
    mat: &CMatrix,
    eval: &[usize],
    interior1: &[usize],
    depth: u32,
) -> (BTreeMap<usize, f64>, BTreeSet<usize>) {
    let mut norms = BTreeMap::new();
    for &i in eval {
        let mut x = basis_vector(mat.dim(), i);
        for _ in 0..depth {
            x = mat.apply_adj(&x);
        }
        for _ in 0..depth {
            x = mat.apply(&x);
        }
        norms.insert(i, norm_sqr(&x));
    }
    let wandering = interior1
        .iter()
        .copied()
        .filter(|&i| norm_sqr(&mat.apply_adj(&basis_vector(mat.dim(), i))) < 0.5)
        .collect();
    (norms, wandering)
}

/// Popescu's decomposition for a window row isometry: per-vertex norms of
/// the depth-fold joint range projection `Σ_{|μ|=depth} V_μ V_μ*` and the
/// interior joint kernel `∩_k ker V_k*`.
pub fn popescu_row(
    mats: &[CMatrix],
    eval: &[usize],
    interior1: &[usize],
    depth: u32,
) -> (BTreeMap<usize, f64>, BTreeSet<usize>) {
    fn level(mats: &[CMatrix], depth: u32, x: &[Complex64]) -> Vec<Complex64> {
        if depth == 0 {
            return x.to_vec();
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); x.len()];
        for m in mats {
            let stripped = m.apply_adj(x);
            if norm_sqr(&stripped) == 0.0 {
                continue;
            }
            add_into(&mut acc, &m.apply(&level(mats, depth - 1, &stripped)));
        }
        acc
    }
    let dim = mats[0].dim();
    let mut norms = BTreeMap::new();
    for &i in eval {
        norms.insert(i, norm_sqr(&level(mats, depth, &basis_vector(dim, i))));
    }
    let wandering = interior1
        .iter()
        .copied()
        .filter(|&i| {
            mats.iter()
                .all(|m| norm_sqr(&m.apply_adj(&basis_vector(dim, i))) < 0.5)
        })
        .collect();
    (norms, wandering)
}

#[derive(Clone, Debug, Serialize)]
pub struct Disagreement {
    pub vertex: VertexKey,
    pub component: ComponentId,
    pub classifier: Status,
    pub norm: f64,
}

/// Result of playing the classifier against the projections.
#[derive(Clone, Debug, Serialize)]
pub struct AgreementReport {
    pub window_size: usize,
    pub vertices_checked: usize,
    pub comparisons: usize,
    pub skipped_unknown: usize,
    /// Conclusive verdicts whose certificates reach past the projection
    /// depth; a depth-d truncation cannot witness deeper events either way.
    pub skipped_shallow: usize,
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// For every interior vertex where the classifier is conclusive, the
/// matching projection norm must be `≥ 1 − tol` for `In` and `≤ tol` for
/// `Out`. Refuses to run when the window violates the defining relations.
pub fn compare_with_classifier(
    rep: &AtomicRep,
    seeds: &[VertexKey],
    radius: u32,
    depth: u32,
    tol: f64,
    budget: u32,
) -> Result<AgreementReport, OracleError> {
    let relations = crate::rep::verify_relations(rep, seeds, radius.min(4));
    if !relations.passed() {
        return Err(OracleError::RelationsViolated(
            relations.first().map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    let win = build_window(rep, seeds, radius, DEFAULT_VERTEX_CAP)?;
    let margin = 2 * depth;
    let inside = win.interior_keys(margin);
    if inside.is_empty() {
        return Err(OracleError::DepthExceedsMargin { depth, margin });
    }

    let mut session = ClassifySession::new(rep, budget);
    let mut disagreements = Vec::new();
    let mut comparisons = 0usize;
    let mut skipped_unknown = 0usize;
    let mut skipped_shallow = 0usize;
    for key in &inside {
        let classification = session.classify(key);
        let e = win.basis(win.index_of(key).expect("interior key"));
        let uu = norm_sqr(&proj_uu(&win, depth, &e));
        let us = norm_sqr(&proj_us(&win, depth, depth, &e));
        let su = norm_sqr(&proj_su(&win, depth, &e));
        let ws = (1.0 - uu - us - su).clamp(0.0, 1.0);
        for (component, verdict, norm) in [
            (ComponentId::UU, &classification.uu, uu),
            (ComponentId::US, &classification.us, us),
            (ComponentId::SU, &classification.su, su),
            (ComponentId::WS, &classification.ws, ws),
        ] {
            if verdict.status == Status::Unknown {
                skipped_unknown += 1;
                continue;
            }
            let deep_enough = verdict
                .certificate
                .as_ref()
                .is_some_and(|c| c.evidence_depth() <= depth as usize);
            if !deep_enough {
                skipped_shallow += 1;
                continue;
            }
            comparisons += 1;
            let agreed = match verdict.status {
                Status::In => norm >= 1.0 - tol,
                Status::Out => norm <= tol,
                Status::Unknown => unreachable!(),
            };
            if !agreed {
                disagreements.push(Disagreement {
                    vertex: key.clone(),
                    component,
                    classifier: verdict.status,
                    norm,
                });
            }
        }
    }

    Ok(AgreementReport {
        window_size: win.len(),
        vertices_checked: inside.len(),
        comparisons,
        skipped_unknown,
        skipped_shallow,
        disagreements,
    })
}

//! The builtin representation families.
//!
//! Six constructions, one per corner of the decomposition plus the two
//! shift-style residual examples:
//!
//! * `left_regular_on` — `O_n` acting on `ℓ²(O_n)` by left multiplication.
//! * `left_regular_fn_unitary` — the free-semigroup left regular row isometry
//!   with the level-preserving unitary `W` determined by `W_0 = λ` on `e_ε`.
//! * `su_tree` — the rooted tree with a `V_1` cycle at the root: `W` is a
//!   unilateral shift, `{V_k}` a row unitary.
//! * `weak_shift` — the quarter-plane-union family `W(r,t) = (r,t+1)`,
//!   `V_k(r,t) = (r+1, nt+k-1)` on `{r ≥ 0 or t ≥ 0}`.
//! * `inductive` — an infinite backward chain `V_{k_m} g_m = g_{m-1}` driven
//!   by a digit stream, with a free forest over every chain vertex.
//! * `slocinski` — `weak_shift` at `n = 1`, the classical commuting pair that
//!   is neither unitary nor pure on any reducing subspace.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Arrow, AtomicRep, Hint, HintKind, Image, IntCond, MuCond, Region, RepKind, VertexKey};
use crate::phase::Phase;
use crate::semigroup::{add_one, sub_one, OdometerElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("builtin {0} requires parameter {1}")]
    MissingParam(&'static str, &'static str),
    #[error("bad rank for builtin {0}: {1}")]
    BadRank(&'static str, String),
    #[error("bad parameter {0}: {1}")]
    BadParam(&'static str, String),
}

/// The backward digit stream `(k_m)_{m ≥ 1}` of an inductive family:
/// `V_{k_m} g_m = g_{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitStream {
    /// `k_m = t(m-1) + 1` with `t` the Thue–Morse parity sequence; not
    /// eventually periodic, over the digits `{1, 2}`.
    ThueMorse,
    /// Periodic repetition of a fixed digit word.
    Periodic(Vec<u8>),
}

impl DigitStream {
    /// `k_m` for `m ≥ 1`.
    pub fn digit(&self, m: u64) -> u8 {
        debug_assert!(m >= 1);
        match self {
            DigitStream::ThueMorse => ((m - 1).count_ones() % 2) as u8 + 1,
            DigitStream::Periodic(word) => word[((m - 1) % word.len() as u64) as usize],
        }
    }

    /// Smallest `m ≥ from` with `k_m ≠ avoid`; `None` when no such index
    /// exists (periodic streams on a single digit).
    fn first_digit_not(&self, avoid: u8, from: u64) -> Option<u64> {
        let horizon = match self {
            // Thue–Morse is cube-free, so both digits occur in any window of
            // length 3; 8 leaves room to spare.
            DigitStream::ThueMorse => 8,
            DigitStream::Periodic(word) => word.len() as u64,
        };
        (from..from + horizon).find(|m| self.digit(*m) != avoid)
    }

    pub fn spec_string(&self) -> String {
        match self {
            DigitStream::ThueMorse => "thue_morse".to_string(),
            DigitStream::Periodic(word) => {
                let digits: String = word.iter().map(|d| d.to_string()).collect();
                format!("periodic:{digits}")
            }
        }
    }
}

/// Constructs one of the builtin representation families.
///
/// Parameters: `left_regular_fn_unitary` takes `lambda` (a rational turn like
/// `1/3`); `inductive` takes `stream` (`thue_morse` or `periodic:<digits>`).
/// `slocinski` forces `n = 1`. Word-keyed families are limited to `n ≤ 9` so
/// that digit strings stay unambiguous.
pub fn make_builtin(
    name: &str,
    n: u8,
    params: &BTreeMap<String, String>,
) -> Result<AtomicRep, BuiltinError> {
    if n == 0 {
        return Err(BuiltinError::BadRank("any", "rank 0".to_string()));
    }
    match name {
        "left_regular_on" => {
            let hints = vec![
                Hint {
                    kind: HintKind::ForwardWAvoidsRanV,
                    region: Region::NormalForm {
                        mu: MuCond::Empty,
                        power: IntCond::Any,
                    },
                },
                Hint {
                    kind: HintKind::ForwardV1AvoidsRanW,
                    region: Region::NormalForm {
                        mu: MuCond::AllOnes,
                        power: IntCond::Eq(0),
                    },
                },
            ];
            Ok(AtomicRep::from_kind(
                n,
                RepKind::LeftRegular,
                hints,
                Some("left_regular_on".to_string()),
            ))
        }
        "left_regular_fn_unitary" => {
            check_word_rank("left_regular_fn_unitary", n)?;
            let lambda: Phase = params
                .get("lambda")
                .ok_or(BuiltinError::MissingParam(
                    "left_regular_fn_unitary",
                    "lambda",
                ))?
                .parse()
                .map_err(|e| BuiltinError::BadParam("lambda", e))?;
            Ok(AtomicRep::from_kind(
                n,
                RepKind::FnUnitary { lambda },
                Vec::new(),
                Some("left_regular_fn_unitary".to_string()),
            ))
        }
        "su_tree" => {
            check_word_rank("su_tree", n)?;
            if n < 2 {
                return Err(BuiltinError::BadRank(
                    "su_tree",
                    "needs n >= 2 (at n = 1 the root loop leaves no carry target)".to_string(),
                ));
            }
            Ok(AtomicRep::from_kind(
                n,
                RepKind::SuTree,
                Vec::new(),
                Some("su_tree".to_string()),
            ))
        }
        "weak_shift" => Ok(AtomicRep::from_kind(
            n,
            RepKind::WeakShift,
            weak_shift_hints(),
            Some("weak_shift".to_string()),
        )),
        "slocinski" => {
            if n != 1 {
                return Err(BuiltinError::BadRank(
                    "slocinski",
                    format!("forces n = 1, got {n}"),
                ));
            }
            Ok(AtomicRep::from_kind(
                1,
                RepKind::WeakShift,
                weak_shift_hints(),
                Some("slocinski".to_string()),
            ))
        }
        "inductive" => {
            check_word_rank("inductive", n)?;
            let spec = params
                .get("stream")
                .ok_or(BuiltinError::MissingParam("inductive", "stream"))?;
            let stream = parse_stream(spec, n)?;
            let mut hints = vec![Hint {
                kind: HintKind::VBackwardTotal,
                region: Region::All,
            }];
            // W is everywhere invertible only when the stream keeps
            // producing digits other than 1 (subtract-one must resolve).
            let w_back_total = stream.first_digit_not(1, 1).is_some()
                && match &stream {
                    DigitStream::ThueMorse => true,
                    DigitStream::Periodic(word) => word.iter().any(|d| *d != 1),
                };
            if w_back_total {
                hints.push(Hint {
                    kind: HintKind::WBackwardTotal,
                    region: Region::All,
                });
                hints.push(Hint {
                    kind: HintKind::WvBackwardTotal,
                    region: Region::All,
                });
            }
            Ok(AtomicRep::from_kind(
                n,
                RepKind::Inductive { stream },
                hints,
                Some("inductive".to_string()),
            ))
        }
        other => Err(BuiltinError::UnknownBuiltin(other.to_string())),
    }
}

fn check_word_rank(name: &'static str, n: u8) -> Result<(), BuiltinError> {
    if n > 9 {
        return Err(BuiltinError::BadRank(
            name,
            format!("digit-string keys support n <= 9, got {n}"),
        ));
    }
    Ok(())
}

fn parse_stream(spec: &str, n: u8) -> Result<DigitStream, BuiltinError> {
    if spec == "thue_morse" {
        if n < 2 {
            return Err(BuiltinError::BadRank(
                "inductive",
                "thue_morse stream uses digits {1,2}, needs n >= 2".to_string(),
            ));
        }
        return Ok(DigitStream::ThueMorse);
    }
    if let Some(word) = spec.strip_prefix("periodic:") {
        if word.is_empty() {
            return Err(BuiltinError::BadParam(
                "stream",
                "periodic word must be nonempty".to_string(),
            ));
        }
        let mut digits = Vec::with_capacity(word.len());
        for c in word.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| BuiltinError::BadParam("stream", format!("bad digit {c:?}")))?
                as u8;
            if d < 1 || d > n {
                return Err(BuiltinError::BadParam(
                    "stream",
                    format!("digit {d} out of range for rank {n}"),
                ));
            }
            digits.push(d);
        }
        if digits.iter().all(|d| *d == n) && n > 1 {
            // The add-one address n^∞ never resolves, so no W exists.
            return Err(BuiltinError::BadParam(
                "stream",
                "all-n periodic stream admits no carry target for W".to_string(),
            ));
        }
        return Ok(DigitStream::Periodic(digits));
    }
    Err(BuiltinError::BadParam(
        "stream",
        format!("expected thue_morse or periodic:<digits>, got {spec:?}"),
    ))
}

fn weak_shift_hints() -> Vec<Hint> {
    vec![
        Hint {
            kind: HintKind::VBackwardTotal,
            region: Region::Coord {
                r: IntCond::Lt(0),
                t: IntCond::Ge(0),
            },
        },
        Hint {
            kind: HintKind::WBackwardTotal,
            region: Region::Coord {
                r: IntCond::Ge(0),
                t: IntCond::Lt(0),
            },
        },
    ]
}

// ---------------------------------------------------------------------------
// left_regular_on: vertices are odometer normal forms, keys `v[2,1]w^3`.

pub(super) fn lr_key(x: &OdometerElement) -> VertexKey {
    VertexKey::new(x.key_string())
}

fn lr_parse(n: u8, v: &VertexKey) -> Option<OdometerElement> {
    OdometerElement::parse_key(v.as_str(), n)
}

pub(super) fn lr_contains(n: u8, v: &VertexKey) -> bool {
    lr_parse(n, v).is_some()
}

pub(super) fn lr_w_of(n: u8, v: &VertexKey) -> Image {
    let Some(x) = lr_parse(n, v) else {
        return Image::Unexplored;
    };
    let (mu, carry) = add_one(x.mu(), n);
    let y = OdometerElement::new(n, mu, x.power() + carry as u64).unwrap();
    Image::Arrow(Arrow::plain(lr_key(&y)))
}

pub(super) fn lr_v_of(n: u8, k: u8, v: &VertexKey) -> Image {
    let Some(x) = lr_parse(n, v) else {
        return Image::Unexplored;
    };
    let mut mu = vec![k];
    mu.extend_from_slice(x.mu());
    let y = OdometerElement::new(n, mu, x.power()).unwrap();
    Image::Arrow(Arrow::plain(lr_key(&y)))
}

pub(super) fn lr_w_back(n: u8, v: &VertexKey) -> Image {
    let Some(x) = lr_parse(n, v) else {
        return Image::Unexplored;
    };
    if x.mu().is_empty() {
        return if x.power() >= 1 {
            let y = OdometerElement::new(n, Vec::new(), x.power() - 1).unwrap();
            Image::Arrow(Arrow::plain(lr_key(&y)))
        } else {
            Image::Zero
        };
    }
    let (mu, borrow) = sub_one(x.mu(), n);
    if borrow == 0 {
        let y = OdometerElement::new(n, mu, x.power()).unwrap();
        Image::Arrow(Arrow::plain(lr_key(&y)))
    } else if x.power() >= 1 {
        // all-ones word: the preimage is the all-n word one w lower
        let y = OdometerElement::new(n, mu, x.power() - 1).unwrap();
        Image::Arrow(Arrow::plain(lr_key(&y)))
    } else {
        Image::Zero
    }
}

pub(super) fn lr_v_back(n: u8, k: u8, v: &VertexKey) -> Image {
    let Some(x) = lr_parse(n, v) else {
        return Image::Unexplored;
    };
    match x.mu().first() {
        Some(d) if *d == k => {
            let y = OdometerElement::new(n, x.mu()[1..].to_vec(), x.power()).unwrap();
            Image::Arrow(Arrow::plain(lr_key(&y)))
        }
        _ => Image::Zero,
    }
}

/// Raw digits and power of a `v[...]w^N` key, without rank validation.
/// Region predicates use this so they stay rank-agnostic.
pub(super) fn parse_nf_key_raw(s: &str) -> Option<(Vec<u8>, u64)> {
    let rest = s.strip_prefix("v[")?;
    let (digits, tail) = rest.split_once(']')?;
    let power: u64 = tail.strip_prefix("w^")?.parse().ok()?;
    let mut mu = Vec::new();
    if !digits.is_empty() {
        for part in digits.split(',') {
            mu.push(part.trim().parse().ok()?);
        }
    }
    Some((mu, power))
}

// ---------------------------------------------------------------------------
// Digit-word keys shared by fn_unitary, su_tree, inductive: "e" is the empty
// word, otherwise a string of digits with the first digit outermost.

fn word_key(digits: &[u8]) -> VertexKey {
    if digits.is_empty() {
        VertexKey::new("e")
    } else {
        VertexKey::new(digits.iter().map(|d| d.to_string()).collect::<String>())
    }
}

fn parse_word(n: u8, s: &str) -> Option<Vec<u8>> {
    if s == "e" {
        return Some(Vec::new());
    }
    if s.is_empty() {
        return None;
    }
    let mut digits = Vec::with_capacity(s.len());
    for c in s.chars() {
        let d = c.to_digit(10)? as u8;
        if d < 1 || d > n {
            return None;
        }
        digits.push(d);
    }
    Some(digits)
}

// ---------------------------------------------------------------------------
// left_regular_fn_unitary: vertices are all words over 1..n; V_k prepends,
// W is level-preserving add-one with W e_ε = λ e_ε and phase λ on each carry.

pub(super) fn fn_contains(n: u8, v: &VertexKey) -> bool {
    parse_word(n, v.as_str()).is_some()
}

pub(super) fn fn_w_of(n: u8, lambda: Phase, v: &VertexKey) -> Image {
    let Some(mu) = parse_word(n, v.as_str()) else {
        return Image::Unexplored;
    };
    let (next, carry) = add_one(&mu, n);
    let phase = if carry == 1 { lambda } else { Phase::ONE };
    Image::Arrow(Arrow::new(word_key(&next), phase))
}

pub(super) fn fn_w_back(n: u8, lambda: Phase, v: &VertexKey) -> Image {
    let Some(mu) = parse_word(n, v.as_str()) else {
        return Image::Unexplored;
    };
    let (prev, borrow) = sub_one(&mu, n);
    let phase = if borrow == 1 {
        lambda.conj()
    } else {
        Phase::ONE
    };
    Image::Arrow(Arrow::new(word_key(&prev), phase))
}

pub(super) fn fn_v_of(n: u8, k: u8, v: &VertexKey) -> Image {
    let Some(mu) = parse_word(n, v.as_str()) else {
        return Image::Unexplored;
    };
    let mut next = vec![k];
    next.extend_from_slice(&mu);
    Image::Arrow(Arrow::plain(word_key(&next)))
}

pub(super) fn fn_v_back(n: u8, k: u8, v: &VertexKey) -> Image {
    let Some(mu) = parse_word(n, v.as_str()) else {
        return Image::Unexplored;
    };
    match mu.first() {
        Some(d) if *d == k => Image::Arrow(Arrow::plain(word_key(&mu[1..]))),
        _ => Image::Zero,
    }
}

// ---------------------------------------------------------------------------
// su_tree: vertices are ε together with words whose last (innermost) digit
// is at least 2. Identifying a word with the eventually-1 digit stream it
// heads, W is add-one on streams and every vertex has exactly one V-parent;
// the V_1 parent of ε is ε itself (the root cycle).

pub(super) fn su_contains(n: u8, v: &VertexKey) -> bool {
    match parse_word(n, v.as_str()) {
        Some(mu) => mu.last().is_none_or(|d| *d >= 2),
        None => false,
    }
}

pub(super) fn su_v_of(n: u8, k: u8, v: &VertexKey) -> Image {
    if !su_contains(n, v) {
        return Image::Unexplored;
    }
    let mu = parse_word(n, v.as_str()).unwrap();
    if mu.is_empty() && k == 1 {
        // canon collapses the all-ones word to ε: the root loop
        return Image::Arrow(Arrow::plain(VertexKey::new("e")));
    }
    let mut next = vec![k];
    next.extend_from_slice(&mu);
    Image::Arrow(Arrow::plain(word_key(&next)))
}

pub(super) fn su_v_back(n: u8, k: u8, v: &VertexKey) -> Image {
    if !su_contains(n, v) {
        return Image::Unexplored;
    }
    let mu = parse_word(n, v.as_str()).unwrap();
    match mu.first() {
        None => {
            if k == 1 {
                Image::Arrow(Arrow::plain(VertexKey::new("e")))
            } else {
                Image::Zero
            }
        }
        Some(d) if *d == k => Image::Arrow(Arrow::plain(word_key(&mu[1..]))),
        _ => Image::Zero,
    }
}

pub(super) fn su_w_of(n: u8, v: &VertexKey) -> Image {
    if !su_contains(n, v) {
        return Image::Unexplored;
    }
    let mut mu = parse_word(n, v.as_str()).unwrap();
    // add-one on mu·1^∞: roll leading n's, then increment the first non-n
    // digit (a virtual trailing 1 if the whole word is n's).
    let mut i = 0;
    while i < mu.len() && mu[i] == n {
        mu[i] = 1;
        i += 1;
    }
    if i < mu.len() {
        mu[i] += 1;
    } else {
        mu.push(2);
    }
    Image::Arrow(Arrow::plain(word_key(&mu)))
}

pub(super) fn su_w_back(n: u8, v: &VertexKey) -> Image {
    if !su_contains(n, v) {
        return Image::Unexplored;
    }
    let mut mu = parse_word(n, v.as_str()).unwrap();
    let Some(j) = mu.iter().position(|d| *d != 1) else {
        // all-ones stream is the root ε, which has no W-preimage
        return Image::Zero;
    };
    for d in mu.iter_mut().take(j) {
        *d = n;
    }
    mu[j] -= 1;
    while mu.last() == Some(&1) {
        mu.pop();
    }
    Image::Arrow(Arrow::plain(word_key(&mu)))
}

// ---------------------------------------------------------------------------
// weak_shift: vertices (r,t) with r >= 0 or t >= 0.

pub(super) fn parse_coord_key(s: &str) -> Option<(i64, i64)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (r, t) = inner.split_once(',')?;
    Some((r.trim().parse().ok()?, t.trim().parse().ok()?))
}

fn coord_key(r: i64, t: i64) -> VertexKey {
    VertexKey::new(format!("({r},{t})"))
}

fn coord_valid(r: i64, t: i64) -> bool {
    r >= 0 || t >= 0
}

pub(super) fn ws_contains(v: &VertexKey) -> bool {
    matches!(parse_coord_key(v.as_str()), Some((r, t)) if coord_valid(r, t))
}

pub(super) fn ws_w_of(v: &VertexKey) -> Image {
    let Some((r, t)) = parse_coord_key(v.as_str()).filter(|(r, t)| coord_valid(*r, *t)) else {
        return Image::Unexplored;
    };
    Image::Arrow(Arrow::plain(coord_key(r, t + 1)))
}

pub(super) fn ws_w_back(v: &VertexKey) -> Image {
    let Some((r, t)) = parse_coord_key(v.as_str()).filter(|(r, t)| coord_valid(*r, *t)) else {
        return Image::Unexplored;
    };
    if coord_valid(r, t - 1) {
        Image::Arrow(Arrow::plain(coord_key(r, t - 1)))
    } else {
        Image::Zero
    }
}

pub(super) fn ws_v_of(n: u8, k: u8, v: &VertexKey) -> Image {
    let Some((r, t)) = parse_coord_key(v.as_str()).filter(|(r, t)| coord_valid(*r, *t)) else {
        return Image::Unexplored;
    };
    Image::Arrow(Arrow::plain(coord_key(
        r + 1,
        n as i64 * t + k as i64 - 1,
    )))
}

pub(super) fn ws_v_back(n: u8, k: u8, v: &VertexKey) -> Image {
    let Some((r, t)) = parse_coord_key(v.as_str()).filter(|(r, t)| coord_valid(*r, *t)) else {
        return Image::Unexplored;
    };
    let base = n as i64;
    if t.rem_euclid(base) != k as i64 - 1 {
        return Image::Zero;
    }
    let pre_t = (t - (k as i64 - 1)) / base;
    if coord_valid(r - 1, pre_t) {
        Image::Arrow(Arrow::plain(coord_key(r - 1, pre_t)))
    } else {
        Image::Zero
    }
}

// ---------------------------------------------------------------------------
// inductive: vertices V_μ g_m, canonical when μ is empty or its last digit
// differs from the chain digit k_m. Keys: "g3" for g_3, "21g3" for V_2V_1 g_3.

fn ind_key(m: u64, mu: &[u8]) -> VertexKey {
    let digits: String = mu.iter().map(|d| d.to_string()).collect();
    VertexKey::new(format!("{digits}g{m}"))
}

fn ind_parse(n: u8, v: &VertexKey) -> Option<(u64, Vec<u8>)> {
    let s = v.as_str();
    let at = s.find('g')?;
    let (word, tail) = s.split_at(at);
    let m: u64 = tail[1..].parse().ok()?;
    let mut mu = Vec::with_capacity(word.len());
    for c in word.chars() {
        let d = c.to_digit(10)? as u8;
        if d < 1 || d > n {
            return None;
        }
        mu.push(d);
    }
    Some((m, mu))
}

fn ind_canon(stream: &DigitStream, mut m: u64, mut mu: Vec<u8>) -> (u64, Vec<u8>) {
    while m >= 1 && mu.last() == Some(&stream.digit(m)) {
        mu.pop();
        m -= 1;
    }
    (m, mu)
}

pub(super) fn ind_contains(n: u8, stream: &DigitStream, v: &VertexKey) -> bool {
    match ind_parse(n, v) {
        Some((m, mu)) => m == 0 || mu.last() != Some(&stream.digit(m)),
        None => false,
    }
}

pub(super) fn ind_v_of(n: u8, stream: &DigitStream, k: u8, v: &VertexKey) -> Image {
    if !ind_contains(n, stream, v) {
        return Image::Unexplored;
    }
    let (m, mu) = ind_parse(n, v).unwrap();
    let mut next = vec![k];
    next.extend_from_slice(&mu);
    let (m2, mu2) = ind_canon(stream, m, next);
    Image::Arrow(Arrow::plain(ind_key(m2, &mu2)))
}

pub(super) fn ind_v_back(n: u8, stream: &DigitStream, k: u8, v: &VertexKey) -> Image {
    if !ind_contains(n, stream, v) {
        return Image::Unexplored;
    }
    let (m, mu) = ind_parse(n, v).unwrap();
    match mu.first() {
        Some(d) if *d == k => Image::Arrow(Arrow::plain(ind_key(m, &mu[1..]))),
        Some(_) => Image::Zero,
        None => {
            // g_m = V_{k_{m+1}} g_{m+1}: the chain never terminates
            if stream.digit(m + 1) == k {
                Image::Arrow(Arrow::plain(ind_key(m + 1, &[])))
            } else {
                Image::Zero
            }
        }
    }
}

/// The backward V-address digit at position `j ≥ 1` of the vertex `(m, μ)`:
/// the digits of `μ` followed by the stream tail.
fn ind_address(stream: &DigitStream, m: u64, mu: &[u8], j: u64) -> u8 {
    if j <= mu.len() as u64 {
        mu[(j - 1) as usize]
    } else {
        stream.digit(m + (j - mu.len() as u64))
    }
}

/// The vertex left after stripping `j` backward V-steps from `(m, μ)`.
fn ind_stripped(m: u64, mu: &[u8], j: u64) -> (u64, Vec<u8>) {
    if j <= mu.len() as u64 {
        (m, mu[j as usize..].to_vec())
    } else {
        (m + (j - mu.len() as u64), Vec::new())
    }
}

/// Shared add-one/subtract-one along the backward address: find the first
/// address digit not equal to `roll`, replace the rolled prefix by `fill`,
/// and substitute `replace` at the pivot.
fn ind_address_step(
    n: u8,
    stream: &DigitStream,
    m: u64,
    mu: &[u8],
    roll: u8,
    fill: u8,
    delta: i8,
) -> Option<VertexKey> {
    let j = match mu.iter().position(|d| *d != roll) {
        Some(i) => i as u64 + 1,
        None => {
            let from = m + 1;
            let at = stream.first_digit_not(roll, from)?;
            mu.len() as u64 + (at - m)
        }
    };
    let pivot = ind_address(stream, m, mu, j);
    let (bm, base_mu) = ind_stripped(m, mu, j);
    // rebuild: V_fill^{j-1} V_{pivot+delta} applied to the stripped vertex
    let mut word = vec![fill; (j - 1) as usize];
    word.push((pivot as i16 + delta as i16) as u8);
    word.extend_from_slice(&base_mu);
    let (cm, cmu) = ind_canon(stream, bm, word);
    debug_assert!(cmu.iter().all(|d| *d >= 1 && *d <= n));
    Some(ind_key(cm, &cmu))
}

pub(super) fn ind_w_of(n: u8, stream: &DigitStream, v: &VertexKey) -> Image {
    if !ind_contains(n, stream, v) {
        return Image::Unexplored;
    }
    let (m, mu) = ind_parse(n, v).unwrap();
    // W V_n^{j-1} V_k = V_1^{j-1} V_{k+1}: add one along the address.
    match ind_address_step(n, stream, m, &mu, n, 1, 1) {
        Some(key) => Image::Arrow(Arrow::plain(key)),
        // construction rejects all-n streams, so this cannot happen for
        // builtins; kept for safety
        None => Image::Unexplored,
    }
}

pub(super) fn ind_w_back(n: u8, stream: &DigitStream, v: &VertexKey) -> Image {
    if !ind_contains(n, stream, v) {
        return Image::Unexplored;
    }
    let (m, mu) = ind_parse(n, v).unwrap();
    // W* is subtract-one: vertices with an all-1 address are outside ran W.
    match ind_address_step(n, stream, m, &mu, 1, n, -1) {
        Some(key) => Image::Arrow(Arrow::plain(key)),
        None => Image::Zero,
    }
}

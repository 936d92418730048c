//! The representation file format, its emitter, and the DOT renderer.
//!
//! Line-oriented, `#` starts a comment:
//!
//! ```text
//! odometer <n>
//! vertex <key>
//! arrow w <src> <dst> [<p>/<q>]
//! arrow v<k> <src> <dst> [<p>/<q>]
//! boundary <key>
//! hint <kind> <region-spec>
//! builtin <name> <n> [param=value ...]
//! ```
//!
//! Phases are rational turns `p/q` meaning `e^{2πi p/q}`, defaulting to
//! `0/1`. A `builtin` line replaces the explicit listing entirely (extra
//! `hint` lines are still allowed). Region specs: `all`, `keys:a,b,c`,
//! `coord:r<0,t>=0`, `nf:mu=empty`, `nf:mu=ones,N=0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::phase::Phase;
use crate::rep::{
    explore, make_builtin, Arrow, AtomicRep, FiniteRep, Hint, HintKind, Image, IntCond, MuCond,
    Region, VertexKey,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: presentation error: {msg}")]
    Presentation { line: usize, msg: String },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn presentation(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Presentation {
        line,
        msg: msg.into(),
    }
}

/// Parses a representation file into a validated [`AtomicRep`].
pub fn parse_rep_file(text: &str) -> Result<AtomicRep, ParseError> {
    let mut n: Option<(u8, usize)> = None;
    let mut vertices: Vec<VertexKey> = Vec::new();
    let mut vertex_set: BTreeSet<VertexKey> = BTreeSet::new();
    let mut boundary: BTreeSet<VertexKey> = BTreeSet::new();
    let mut w_arrows: Vec<(VertexKey, Arrow)> = Vec::new();
    let mut v_arrows: Vec<(u8, VertexKey, Arrow)> = Vec::new();
    let mut hints: Vec<Hint> = Vec::new();
    let mut builtin: Option<(String, u8, BTreeMap<String, String>, usize)> = None;
    let mut explicit_line: Option<usize> = None;

    // duplicate / injectivity bookkeeping with line numbers
    let mut w_out: BTreeMap<VertexKey, usize> = BTreeMap::new();
    let mut w_in: BTreeMap<VertexKey, usize> = BTreeMap::new();
    let mut v_out: BTreeMap<(u8, VertexKey), usize> = BTreeMap::new();
    let mut v_in: BTreeMap<VertexKey, (u8, usize)> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "odometer" => {
                if n.is_some() {
                    return Err(syntax(lineno, "duplicate odometer header"));
                }
                let rank: u8 = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|r| *r >= 1)
                    .ok_or_else(|| syntax(lineno, "expected `odometer <n>` with n >= 1"))?;
                n = Some((rank, lineno));
            }
            "vertex" => {
                explicit_line.get_or_insert(lineno);
                let key = VertexKey::new(
                    *tokens
                        .get(1)
                        .ok_or_else(|| syntax(lineno, "expected `vertex <key>`"))?,
                );
                if !vertex_set.insert(key.clone()) {
                    return Err(presentation(lineno, format!("duplicate vertex {key}")));
                }
                vertices.push(key);
            }
            "boundary" => {
                explicit_line.get_or_insert(lineno);
                let key = VertexKey::new(
                    *tokens
                        .get(1)
                        .ok_or_else(|| syntax(lineno, "expected `boundary <key>`"))?,
                );
                boundary.insert(key);
            }
            "arrow" => {
                explicit_line.get_or_insert(lineno);
                let (rank, _) =
                    n.ok_or_else(|| syntax(lineno, "arrow before the odometer header"))?;
                if tokens.len() < 4 {
                    return Err(syntax(lineno, "expected `arrow <map> <src> <dst> [p/q]`"));
                }
                let src = VertexKey::new(tokens[2]);
                let dst = VertexKey::new(tokens[3]);
                let phase = match tokens.get(4) {
                    Some(t) => t
                        .parse::<Phase>()
                        .map_err(|e| syntax(lineno, format!("bad phase: {e}")))?,
                    None => Phase::ONE,
                };
                if tokens[1] == "w" {
                    if let Some(prev) = w_out.insert(src.clone(), lineno) {
                        return Err(presentation(
                            lineno,
                            format!("duplicate w arrow out of {src} (first at line {prev})"),
                        ));
                    }
                    if let Some(prev) = w_in.insert(dst.clone(), lineno) {
                        return Err(presentation(
                            lineno,
                            format!("two w arrows end at {dst} (first at line {prev}): the map must stay injective"),
                        ));
                    }
                    w_arrows.push((src, Arrow::new(dst, phase)));
                } else if let Some(kstr) = tokens[1].strip_prefix('v') {
                    let k: u8 = kstr
                        .parse()
                        .map_err(|_| syntax(lineno, format!("bad generator {:?}", tokens[1])))?;
                    if k < 1 || k > rank {
                        return Err(presentation(
                            lineno,
                            format!("digit {k} out of range for rank {rank}"),
                        ));
                    }
                    if let Some(prev) = v_out.insert((k, src.clone()), lineno) {
                        return Err(presentation(
                            lineno,
                            format!("duplicate v{k} arrow out of {src} (first at line {prev})"),
                        ));
                    }
                    if let Some((prev_k, prev_line)) = v_in.insert(dst.clone(), (k, lineno)) {
                        if prev_k == k {
                            return Err(presentation(
                                lineno,
                                format!("two v{k} arrows end at {dst} (first at line {prev_line}): the map must stay injective"),
                            ));
                        }
                        return Err(presentation(
                            lineno,
                            format!("overlapping ranges at {dst}: v{prev_k} (line {prev_line}) and v{k}"),
                        ));
                    }
                    v_arrows.push((k, src, Arrow::new(dst, phase)));
                } else {
                    return Err(syntax(lineno, format!("unknown map {:?}", tokens[1])));
                }
            }
            "hint" => {
                let kind = tokens
                    .get(1)
                    .and_then(|t| HintKind::from_name(t))
                    .ok_or_else(|| syntax(lineno, "expected `hint <kind> <region>`"))?;
                let region_spec = tokens
                    .get(2)
                    .ok_or_else(|| syntax(lineno, "hint is missing its region"))?;
                let region = parse_region(region_spec)
                    .ok_or_else(|| syntax(lineno, format!("bad region spec {region_spec:?}")))?;
                hints.push(Hint { kind, region });
            }
            "builtin" => {
                if builtin.is_some() {
                    return Err(syntax(lineno, "duplicate builtin line"));
                }
                let name = tokens
                    .get(1)
                    .ok_or_else(|| syntax(lineno, "expected `builtin <name> <n> [params]`"))?
                    .to_string();
                let rank: u8 = tokens
                    .get(2)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| syntax(lineno, "builtin is missing its rank"))?;
                let mut params = BTreeMap::new();
                for tok in &tokens[3..] {
                    let (k, v) = tok.split_once('=').ok_or_else(|| {
                        syntax(lineno, format!("expected param=value, got {tok:?}"))
                    })?;
                    params.insert(k.to_string(), v.to_string());
                }
                builtin = Some((name, rank, params, lineno));
            }
            other => return Err(syntax(lineno, format!("unknown directive {other:?}"))),
        }
    }

    if let Some((name, rank, params, lineno)) = builtin {
        if let Some(el) = explicit_line {
            return Err(syntax(
                el.max(lineno),
                "explicit vertex/arrow listing cannot be combined with a builtin line",
            ));
        }
        let rep = make_builtin(&name, rank, &params)
            .map_err(|e| presentation(lineno, e.to_string()))?;
        return Ok(rep.with_extra_hints(hints));
    }

    let (rank, header_line) = n.ok_or_else(|| syntax(1, "missing `odometer <n>` header"))?;
    for (src, arrow) in &w_arrows {
        for key in [src, &arrow.target] {
            if !vertex_set.contains(key) {
                return Err(presentation(
                    header_line,
                    format!("w arrow endpoint {key} is not a declared vertex"),
                ));
            }
        }
    }
    for (k, src, arrow) in &v_arrows {
        for key in [src, &arrow.target] {
            if !vertex_set.contains(key) {
                return Err(presentation(
                    header_line,
                    format!("v{k} arrow endpoint {key} is not a declared vertex"),
                ));
            }
        }
    }
    let fin = FiniteRep::new(rank, vertices, boundary, w_arrows, v_arrows, hints)
        .map_err(|e| presentation(header_line, e.to_string()))?;
    Ok(AtomicRep::from_finite(fin))
}

pub fn parse_region(spec: &str) -> Option<Region> {
    if spec == "all" {
        return Some(Region::All);
    }
    if let Some(list) = spec.strip_prefix("keys:") {
        let keys: BTreeSet<VertexKey> = list
            .split(',')
            .filter(|s| !s.is_empty())
            .map(VertexKey::new)
            .collect();
        return Some(Region::Keys(keys));
    }
    if let Some(conds) = spec.strip_prefix("coord:") {
        let mut r = IntCond::Any;
        let mut t = IntCond::Any;
        for part in conds.split(',').filter(|s| !s.is_empty()) {
            let (var, cond) = parse_int_cond(part)?;
            match var {
                'r' => r = cond,
                't' => t = cond,
                _ => return None,
            }
        }
        return Some(Region::Coord { r, t });
    }
    if let Some(conds) = spec.strip_prefix("nf:") {
        let mut mu = MuCond::Any;
        let mut power = IntCond::Any;
        for part in conds.split(',').filter(|s| !s.is_empty()) {
            if let Some(v) = part.strip_prefix("mu=") {
                mu = match v {
                    "empty" => MuCond::Empty,
                    "ones" => MuCond::AllOnes,
                    "any" => MuCond::Any,
                    _ => return None,
                };
            } else {
                let (var, cond) = parse_int_cond(part)?;
                if var != 'N' {
                    return None;
                }
                power = cond;
            }
        }
        return Some(Region::NormalForm { mu, power });
    }
    None
}

fn parse_int_cond(part: &str) -> Option<(char, IntCond)> {
    let var = part.chars().next()?;
    let rest = &part[var.len_utf8()..];
    for (op, build) in [
        ("<=", IntCond::Le as fn(i64) -> IntCond),
        (">=", IntCond::Ge as fn(i64) -> IntCond),
        ("<", IntCond::Lt as fn(i64) -> IntCond),
        (">", IntCond::Gt as fn(i64) -> IntCond),
        ("=", IntCond::Eq as fn(i64) -> IntCond),
    ] {
        if let Some(num) = rest.strip_prefix(op) {
            return Some((var, build(num.parse().ok()?)));
        }
    }
    if rest == "*" {
        return Some((var, IntCond::Any));
    }
    None
}

pub fn region_spec(region: &Region) -> String {
    fn int_cond(var: &str, c: &IntCond) -> Option<String> {
        Some(match c {
            IntCond::Any => return None,
            IntCond::Lt(b) => format!("{var}<{b}"),
            IntCond::Le(b) => format!("{var}<={b}"),
            IntCond::Eq(b) => format!("{var}={b}"),
            IntCond::Ge(b) => format!("{var}>={b}"),
            IntCond::Gt(b) => format!("{var}>{b}"),
        })
    }
    match region {
        Region::All => "all".to_string(),
        Region::Keys(keys) => {
            let list: Vec<&str> = keys.iter().map(|k| k.as_str()).collect();
            format!("keys:{}", list.join(","))
        }
        Region::Coord { r, t } => {
            let parts: Vec<String> = [int_cond("r", r), int_cond("t", t)]
                .into_iter()
                .flatten()
                .collect();
            format!("coord:{}", parts.join(","))
        }
        Region::NormalForm { mu, power } => {
            let mut parts = Vec::new();
            match mu {
                MuCond::Any => {}
                MuCond::Empty => parts.push("mu=empty".to_string()),
                MuCond::AllOnes => parts.push("mu=ones".to_string()),
            }
            if let Some(p) = int_cond("N", power) {
                parts.push(p);
            }
            if parts.is_empty() {
                parts.push("mu=any".to_string());
            }
            format!("nf:{}", parts.join(","))
        }
    }
}

/// Renders a finite patch of the representation in the file format. The rim
/// of the explored ball is marked `boundary`; arrows that would leave the
/// patch are dropped.
pub fn emit_rep_file(rep: &AtomicRep, seeds: &[VertexKey], radius: u32) -> String {
    let set = explore(rep, seeds, radius);
    let mut keys: Vec<VertexKey> = set.order.clone();
    keys.sort();
    let inside: BTreeSet<&VertexKey> = keys.iter().collect();

    let mut out = String::new();
    let _ = writeln!(out, "# explored patch, radius {radius}");
    let _ = writeln!(out, "odometer {}", rep.rank());
    for key in &keys {
        let _ = writeln!(out, "vertex {key}");
    }
    let mut boundary: BTreeSet<VertexKey> = BTreeSet::new();
    let mut arrows: Vec<String> = Vec::new();
    for key in &keys {
        let mut record = |map: String, img: Image| match img {
            Image::Arrow(a) if inside.contains(&a.target) => {
                if a.phase.is_one() {
                    arrows.push(format!("arrow {map} {key} {}", a.target));
                } else {
                    arrows.push(format!("arrow {map} {key} {} {}", a.target, a.phase));
                }
            }
            Image::Arrow(_) | Image::Unexplored => {
                boundary.insert(key.clone());
            }
            Image::Zero => {}
        };
        record("w".to_string(), rep.w_of(key));
        for k in 1..=rep.rank() {
            record(format!("v{k}"), rep.v_of(k, key));
        }
        // vertices whose backward arrows leave the patch must be marked too,
        // so kernels are never inferred from truncation
        match rep.w_back(key) {
            Image::Arrow(a) if !inside.contains(&a.target) => {
                boundary.insert(key.clone());
            }
            Image::Unexplored => {
                boundary.insert(key.clone());
            }
            _ => {}
        }
        for k in 1..=rep.rank() {
            match rep.v_back(k, key) {
                Image::Arrow(a) if !inside.contains(&a.target) => {
                    boundary.insert(key.clone());
                }
                Image::Unexplored => {
                    boundary.insert(key.clone());
                }
                _ => {}
            }
        }
    }
    for line in arrows {
        let _ = writeln!(out, "{line}");
    }
    for key in &boundary {
        let _ = writeln!(out, "boundary {key}");
    }
    for hint in rep.hints() {
        let _ = writeln!(
            out,
            "hint {} {}",
            hint.kind.name(),
            region_spec(&hint.region)
        );
    }
    out
}

/// DOT rendering: solid edges labeled `1..n` for the `V_k`, dashed edges for
/// `W`, a `phase="p/q"` attribute when the phase is nonzero.
pub fn render_dot(rep: &AtomicRep, seeds: &[VertexKey], radius: u32) -> String {
    let set = explore(rep, seeds, radius);
    let mut keys: Vec<VertexKey> = set.order.clone();
    keys.sort();
    let inside: BTreeSet<&VertexKey> = keys.iter().collect();

    let mut out = String::new();
    let _ = writeln!(out, "digraph odometer {{");
    for key in &keys {
        let _ = writeln!(out, "  \"{key}\";");
    }
    for key in &keys {
        for k in 1..=rep.rank() {
            if let Image::Arrow(a) = rep.v_of(k, key) {
                if inside.contains(&a.target) {
                    let phase = if a.phase.is_one() {
                        String::new()
                    } else {
                        format!(", phase=\"{}\"", a.phase)
                    };
                    let _ = writeln!(
                        out,
                        "  \"{key}\" -> \"{}\" [label=\"{k}\"{phase}];",
                        a.target
                    );
                }
            }
        }
        if let Image::Arrow(a) = rep.w_of(key) {
            if inside.contains(&a.target) {
                let phase = if a.phase.is_one() {
                    String::new()
                } else {
                    format!(", phase=\"{}\"", a.phase)
                };
                let _ = writeln!(
                    out,
                    "  \"{key}\" -> \"{}\" [style=dashed{phase}];",
                    a.target
                );
            }
        }
    }
    let _ = writeln!(out, "}}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_parses() {
        let rep = parse_rep_file("odometer 2\nvertex a\nvertex b\narrow w a b\n").unwrap();
        assert_eq!(rep.rank(), 2);
        let img = rep.w_of(&VertexKey::new("a"));
        assert_eq!(img.arrow().unwrap().target, VertexKey::new("b"));
    }

    #[test]
    fn overlapping_ranges_give_presentation_error() {
        let text = "odometer 2\nvertex a\nvertex b\nvertex c\narrow v1 a c\narrow v2 b c\n";
        match parse_rep_file(text) {
            Err(ParseError::Presentation { line, msg }) => {
                assert_eq!(line, 6);
                assert!(msg.contains("overlapping ranges"), "{msg}");
            }
            other => panic!("expected presentation error, got {other:?}"),
        }
    }

    #[test]
    fn digit_out_of_range_names_the_line() {
        let text = "odometer 2\nvertex a\nvertex b\narrow v3 a b\n";
        match parse_rep_file(text) {
            Err(ParseError::Presentation { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected presentation error, got {other:?}"),
        }
    }

    #[test]
    fn builtin_line_delegates() {
        let rep = parse_rep_file("# comment\nbuiltin weak_shift 2\n").unwrap();
        assert_eq!(rep.builtin_tag(), Some("weak_shift"));
        assert!(parse_rep_file("builtin weak_shift 2\nvertex a\n").is_err());
        let with_param = parse_rep_file("builtin left_regular_fn_unitary 2 lambda=1/3\n").unwrap();
        assert_eq!(
            with_param.w_of(&VertexKey::new("e")).arrow().unwrap().phase,
            Phase::new(1, 3)
        );
    }

    #[test]
    fn emit_then_parse_round_trips_arrows() {
        let rep = parse_rep_file("builtin weak_shift 2\n").unwrap();
        let text = emit_rep_file(&rep, &rep.canonical_seeds(), 3);
        let back = parse_rep_file(&text).unwrap();
        let patch = explore(&back, &[VertexKey::new("(0,0)")], 2);
        for v in &patch.order {
            if back.is_boundary(v) {
                continue;
            }
            assert_eq!(back.w_of(v), rep.w_of(v), "w at {v}");
            for k in 1..=2 {
                assert_eq!(back.v_of(k, v), rep.v_of(k, v), "v{k} at {v}");
            }
        }
        // hints survive the round trip
        assert_eq!(back.hints(), rep.hints());
    }

    #[test]
    fn region_specs_round_trip() {
        for spec in [
            "all",
            "keys:a,b",
            "coord:r<0,t>=0",
            "coord:r>=0,t<0",
            "nf:mu=empty",
            "nf:mu=ones,N=0",
        ] {
            let region = parse_region(spec).unwrap();
            assert_eq!(region_spec(&region), spec);
        }
        assert!(parse_region("coord:x<0").is_none());
        assert!(parse_region("junk").is_none());
    }

    #[test]
    fn dot_renders_su_tree_structure() {
        let rep = parse_rep_file("builtin su_tree 2\n").unwrap();
        let dot = render_dot(&rep, &rep.canonical_seeds(), 3);
        // root loop labeled 1
        assert!(dot.contains("\"e\" -> \"e\" [label=\"1\"];"));
        // dashed W-chain
        assert!(dot.contains("\"e\" -> \"2\" [style=dashed];"));
    }
}

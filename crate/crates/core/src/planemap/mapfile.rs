//! Plain-text map definitions, one `key = value` per line.
//!
//! ```text
//! component1 = x1^2
//! component2 = x2^2
//! component3 = x3^2
//! indeterminacy = [0:1:1];[1:0:1]
//! exceptional = param(s, 1, -s-1) -> [1:1:1]
//! two_form_weight = 4
//! ```

use super::{ExceptionalCurve, MapError, PlaneMap};
use crate::exactpoly::{parse_poly, parse_rational, parse_unipoly, HomPoly3, PolyError, UniPoly};
use crate::projgeom::ProjPoint;

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_param_poly(s: &str) -> Result<UniPoly, PolyError> {
    match parse_unipoly(s, "s") {
        Err(PolyError::UnknownVariable(v)) if v == "z" => parse_unipoly(s, "z"),
        r => r,
    }
}

fn parse_exceptional(v: &str, idx: usize) -> Result<ExceptionalCurve, String> {
    let (lhs, rhs) = v.split_once("->").ok_or("expected `param(...) -> [..]`")?;
    let inner = lhs
        .trim()
        .strip_prefix("param(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or("expected `param(p1, p2, p3)`")?;
    let parts = split_top_level(inner);
    if parts.len() != 3 {
        return Err("a parametrization needs three components".into());
    }
    let mut param: [UniPoly; 3] = Default::default();
    for (slot, p) in param.iter_mut().zip(parts) {
        *slot = parse_param_poly(p).map_err(|e| e.to_string())?;
    }
    let image: ProjPoint = rhs.trim().parse().map_err(|e: crate::projgeom::GeomError| e.to_string())?;
    Ok(ExceptionalCurve {
        name: format!("E{}", idx + 1),
        param,
        image,
    })
}

/// Parses a map definition file.
pub fn parse_map_file(text: &str) -> Result<PlaneMap, MapError> {
    let mut comps: [Option<HomPoly3>; 3] = Default::default();
    let mut name = String::from("custom");
    let mut indet = Vec::new();
    let mut exc = Vec::new();
    let mut weight = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let err = |msg: String| MapError::MapFile { line, msg };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`".into()))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "component1" | "component2" | "component3" => {
                let i = (k.as_bytes()[9] - b'1') as usize;
                let p = parse_poly(v, &["x1", "x2", "x3"]).map_err(|e| err(e.to_string()))?;
                comps[i] = Some(p);
            }
            "name" => name = v.to_string(),
            "indeterminacy" => {
                for part in v.split(';').filter(|s| !s.trim().is_empty()) {
                    indet.push(part.parse::<ProjPoint>().map_err(|e| err(e.to_string()))?);
                }
            }
            "exceptional" => exc.push(parse_exceptional(v, exc.len()).map_err(err)?),
            "two_form_weight" => {
                weight = Some(parse_rational(v).ok_or_else(|| err(format!("bad rational `{v}`")))?)
            }
            _ => return Err(err(format!("unknown key `{k}`"))),
        }
    }
    let [Some(a), Some(b), Some(c)] = comps else {
        return Err(MapError::MapFile {
            line: 0,
            msg: "component1, component2 and component3 are all required".into(),
        });
    };
    let mut map = PlaneMap::new(&name, [a, b, c])?
        .with_indeterminacy(indet)?
        .with_exceptional(exc)?;
    if let Some(w) = weight {
        map = map.with_two_form_weight(w);
    }
    Ok(map)
}

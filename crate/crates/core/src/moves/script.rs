//! Move scripts: one step per line, `KIND loop leg segment p/q ...`.
//! An optional first line `DIAGRAM <json>` carries the starting diagram.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{EditKind, EditSpec, MoveKind, MoveSpec};
use crate::diagram::{from_json, to_json, BouquetDiagram, SegmentId};
use crate::error::{Error, Result};
use crate::geometry::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptStep {
    Move(MoveSpec),
    Edit(EditSpec),
}

impl std::fmt::Display for ScriptStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScriptStep::Move(m) => write!(f, "{m}"),
            ScriptStep::Edit(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub diagram: Option<BouquetDiagram>,
    pub steps: Vec<ScriptStep>,
}

fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn parse_index(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("bad index {s:?}")))
}

fn parse_step(line: &str) -> Result<ScriptStep> {
    let mut words = line.split_whitespace();
    let kind = words.next().ok_or_else(|| Error::Parse("empty step".into()))?;
    let mut idx = || -> Result<usize> {
        parse_index(words.next().ok_or_else(|| Error::Parse(format!("missing index in {line:?}")))?)
    };
    let target = SegmentId::new(idx()?, idx()?, idx()?);
    let params = words.map(parse_rat).collect::<Result<Vec<_>>>()?;
    let step = if let Ok(k) = MoveKind::from_str(kind) {
        if params.len() != k.param_count() {
            return Err(Error::Parse(format!("{k} takes {} parameters: {line:?}", k.param_count())));
        }
        ScriptStep::Move(MoveSpec::new(k, target, params))
    } else {
        let k = EditKind::from_str(kind).map_err(|_| Error::Parse(format!("unknown step kind {kind:?}")))?;
        if params.len() != k.param_count() {
            return Err(Error::Parse(format!("{k} takes {} parameters: {line:?}", k.param_count())));
        }
        ScriptStep::Edit(EditSpec::new(k, target, params))
    };
    Ok(step)
}

pub fn parse_script(text: &str) -> Result<Script> {
    let mut script = Script::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(json) = line.strip_prefix("DIAGRAM") {
            if script.diagram.is_some() || !script.steps.is_empty() {
                return Err(Error::Parse(format!("line {}: DIAGRAM must come first", n + 1)));
            }
            script.diagram = Some(from_json(json.trim())?);
            continue;
        }
        let step = parse_step(line).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("line {}: {m}", n + 1)),
            other => other,
        })?;
        script.steps.push(step);
    }
    Ok(script)
}

pub fn format_script(script: &Script) -> String {
    let mut s = String::new();
    if let Some(d) = &script.diagram {
        writeln!(s, "DIAGRAM {}", to_json(d)).unwrap();
    }
    for step in &script.steps {
        writeln!(s, "{step}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::fixtures::square;
    use crate::geometry::rat;

    #[test]
    fn round_trip() {
        let script = Script {
            diagram: Some(square()),
            steps: vec![
                ScriptStep::Move(MoveSpec::new(
                    MoveKind::KinkPair,
                    SegmentId::new(0, 0, 1),
                    vec![rat(1, 8), rat(1, 16), rat(-1, 1)],
                )),
                ScriptStep::Edit(EditSpec::new(
                    EditKind::SingleKink,
                    SegmentId::new(0, 0, 0),
                    vec![rat(1, 4), rat(1, 8), rat(1, 1)],
                )),
            ],
        };
        let text = format_script(&script);
        assert!(text.contains("KinkPair 0 0 1 1/8 1/16 -1/1\n"));
        assert_eq!(parse_script(&text).unwrap(), script);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_script("# comment\nKinkPair 0 0 1 1/8 1/16\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(parse_script("Twist 0 0 0 1/2").is_err());
        assert!(parse_script("Subdivide 0 0 0 1/0").is_err());
        assert!(parse_script("Subdivide 0 0 0 1/2\nDIAGRAM {}").is_err());
    }

    #[test]
    fn plain_integers_are_accepted() {
        let s = parse_script("Subdivide 0 0 0 1/2\nJiggle 0 0 1 0 -1/64").unwrap();
        assert_eq!(s.steps.len(), 2);
    }
}

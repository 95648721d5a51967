//! Diagram file format:
//! `{"n":N,"vertex":[xn,xd,yn,yd],"loops":[{"legs":[[[xn,xd,yn,yd],...],...]},...]}`.
//! Every coordinate is an integer numerator/denominator pair of arbitrary
//! size. Output is compact and canonical (lowest terms, positive
//! denominators), so serializing a parsed file is byte-stable.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::Value;

use super::{BouquetDiagram, Leg, LoopPath};
use crate::error::{Error, Result};
use crate::geometry::{Rat, RatPoint};

pub fn to_json(d: &BouquetDiagram) -> String {
    let mut s = String::new();
    write!(s, "{{\"n\":{},\"vertex\":", d.n()).unwrap();
    write_point(&mut s, d.vertex());
    s.push_str(",\"loops\":[");
    for (i, lp) in d.loops().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str("{\"legs\":[");
        for (k, leg) in lp.legs().iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push('[');
            for (j, p) in leg.points().iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                write_point(&mut s, p);
            }
            s.push(']');
        }
        s.push_str("]}");
    }
    s.push_str("]}");
    s
}

fn write_point(s: &mut String, p: &RatPoint) {
    write!(s, "[{},{},{},{}]", p.x.numer(), p.x.denom(), p.y.numer(), p.y.denom()).unwrap();
}

pub fn from_json(text: &str) -> Result<BouquetDiagram> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| perr("top level must be an object"))?;
    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| perr("missing or non-integer \"n\""))? as usize;
    let vertex = parse_point(obj.get("vertex").ok_or_else(|| perr("missing \"vertex\""))?)?;
    let loops_v = obj.get("loops").and_then(Value::as_array).ok_or_else(|| perr("missing \"loops\" array"))?;
    if loops_v.len() != n {
        return Err(perr(&format!("\"n\" is {n} but {} loops given", loops_v.len())));
    }
    let mut loops = Vec::with_capacity(n);
    for lv in loops_v {
        let legs_v = lv.get("legs").and_then(Value::as_array).ok_or_else(|| perr("loop without \"legs\" array"))?;
        let mut legs = Vec::with_capacity(legs_v.len());
        for leg_v in legs_v {
            let pts_v = leg_v.as_array().ok_or_else(|| perr("leg must be an array of points"))?;
            let pts = pts_v.iter().map(parse_point).collect::<Result<Vec<_>>>()?;
            legs.push(Leg::new(pts)?);
        }
        loops.push(LoopPath::new(legs)?);
    }
    BouquetDiagram::new(vertex, loops)
}

fn perr(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(num) => BigInt::from_str(&num.to_string()).map_err(|_| perr(&format!("not an integer: {num}"))),
        _ => Err(perr(&format!("expected integer, got {v}"))),
    }
}

fn parse_rat(num: &Value, den: &Value) -> Result<Rat> {
    let (n, d) = (parse_int(num)?, parse_int(den)?);
    if d.is_zero() {
        return Err(perr("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

fn parse_point(v: &Value) -> Result<RatPoint> {
    match v.as_array().map(Vec::as_slice) {
        Some([xn, xd, yn, yd]) => Ok(RatPoint::new(parse_rat(xn, xd)?, parse_rat(yn, yd)?)),
        _ => Err(perr(&format!("point must be [xn,xd,yn,yd], got {v}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn round_trip_is_byte_stable() {
        for d in [square(), figure_eight(), seam_chord()] {
            let text = to_json(&d);
            let back = from_json(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn canonicalizes_rationals() {
        let text = r#"{"n":1,"vertex":[0,5,0,-3],"loops":[{"legs":[[[0,1,0,1],[2,4,0,1],[1,-2,-2,-4],[0,1,0,1]]]}]}"#;
        let d = from_json(text).unwrap();
        assert_eq!(
            to_json(&d),
            r#"{"n":1,"vertex":[0,1,0,1],"loops":[{"legs":[[[0,1,0,1],[1,2,0,1],[-1,2,1,2],[0,1,0,1]]]}]}"#
        );
    }

    #[test]
    fn huge_integers_survive() {
        let big = "123456789012345678901234567890";
        let text = format!(
            r#"{{"n":1,"vertex":[0,1,0,1],"loops":[{{"legs":[[[0,1,0,1],[1,{big}7,0,1],[0,1,1,3],[0,1,0,1]]]}}]}}"#
        );
        let d = from_json(&text).unwrap();
        assert!(to_json(&d).contains(&format!("{big}7")));
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "not json",
            r#"{"n":1}"#,
            r#"{"n":2,"vertex":[0,1,0,1],"loops":[{"legs":[[[0,1,0,1],[1,2,0,1]]]}]}"#,
            r#"{"n":1,"vertex":[0,0,0,1],"loops":[{"legs":[[[0,1,0,1],[1,2,0,1]]]}]}"#,
            r#"{"n":1,"vertex":[0,1,0,1],"loops":[{"legs":[[[0,1,0,1],[1.5,2,0,1]]]}]}"#,
            r#"{"n":1,"vertex":[0,1,0,1],"loops":[{"legs":[[[0,1,0,1]]]}]}"#,
        ] {
            assert!(matches!(from_json(bad), Err(Error::Parse(_))), "{bad}");
        }
    }
}

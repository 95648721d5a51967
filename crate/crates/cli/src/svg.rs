//! Static SVG drawings. Coordinates are exact until the final formatting,
//! which rounds to 9 decimals; the y axis is flipped so the drawing reads
//! like the usual plane.

use std::fmt::Write as _;

use rp2_core::{crossings, BouquetDiagram, Rat, RatPoint, Result};

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// `r` rounded half away from zero to 9 decimals.
pub fn decimal(r: &Rat) -> String {
    let scaled = (r * Rat::from_integer(1_000_000_000.into())).round().to_integer();
    let digits = scaled.to_string();
    let (sign, digits) = match digits.strip_prefix('-') {
        Some(d) => ("-", d),
        None => ("", digits.as_str()),
    };
    let padded = format!("{digits:0>10}");
    let (int, frac) = padded.split_at(padded.len() - 9);
    format!("{sign}{int}.{frac}")
}

fn xy(p: &RatPoint) -> (String, String) {
    (decimal(&p.x), decimal(&-p.y.clone()))
}

pub fn render(d: &BouquetDiagram) -> Result<String> {
    let marks = crossings(d)?;
    let mut s = String::new();
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"640\" height=\"640\">\n",
    );
    s.push_str(
        "<circle id=\"seam\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999999\" \
         stroke-width=\"0.004\" stroke-dasharray=\"0.02 0.015\"/>\n",
    );
    for (i, lp) in d.loops().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        writeln!(
            s,
            "<g id=\"loop-{i}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"0.008\" stroke-linejoin=\"round\">"
        )
        .unwrap();
        for leg in lp.legs() {
            let pts: Vec<String> = leg
                .points()
                .iter()
                .map(|p| {
                    let (x, y) = xy(p);
                    format!("{x},{y}")
                })
                .collect();
            writeln!(s, "<polyline points=\"{}\"/>", pts.join(" ")).unwrap();
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g id=\"seam-points\" fill=\"#ffffff\" stroke=\"#333333\" stroke-width=\"0.004\">\n");
    for lp in d.loops() {
        let legs = lp.legs();
        for k in 0..legs.len() - 1 {
            for p in [legs[k].last(), legs[k + 1].first()] {
                let (x, y) = xy(p);
                writeln!(s, "<circle cx=\"{x}\" cy=\"{y}\" r=\"0.018\"/>").unwrap();
            }
        }
    }
    s.push_str("</g>\n<g id=\"crossings\" fill=\"#000000\">\n");
    for c in &marks {
        let (x, y) = xy(&c.location);
        writeln!(s, "<circle cx=\"{x}\" cy=\"{y}\" r=\"0.012\"/>").unwrap();
    }
    let (vx, vy) = xy(d.vertex());
    writeln!(s, "</g>\n<rect id=\"vertex\" x=\"{vx}\" y=\"{vy}\" width=\"0.04\" height=\"0.04\" transform=\"translate(-0.02 -0.02)\" fill=\"#000000\"/>")
        .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

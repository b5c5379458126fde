//! Text renderings of planar labelings.
//!
//! Coordinate 0 runs left to right and coordinate 1 bottom to top, so the
//! first line printed is the row with the largest `x_1`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::labeling::Labeling;

/// ASCII glyph for each color, in order.
pub const GLYPHS: &str = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// SVG fill for each color, in order.
pub const PALETTE: [&str; 9] = [
    "rgb(55,126,184)",  // blue
    "rgb(228,26,28)",   // red
    "rgb(152,78,163)",  // purple
    "rgb(77,175,74)",   // green
    "rgb(255,127,0)",   // orange
    "rgb(255,255,51)",  // yellow
    "rgb(166,86,40)",   // brown
    "rgb(247,129,191)", // pink
    "rgb(153,153,153)", // grey
];

/// Side of one square in SVG user units.
pub const CELL: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            other => Err(Error::Render(format!("unknown format {other:?}"))),
        }
    }
}

pub fn render(c: &Labeling, format: Format) -> Result<String> {
    match format {
        Format::Ascii => ascii(c),
        Format::Svg => svg(c),
    }
}

fn planar(c: &Labeling, colors: usize) -> Result<(usize, usize)> {
    let sides = c.domain().sides();
    if sides.len() != 2 {
        return Err(Error::Render(format!("only d = 2 can be drawn, got d = {}", sides.len())));
    }
    if c.k() > colors {
        return Err(Error::Render(format!("{} colors exceed the {colors} available", c.k())));
    }
    Ok((sides[0], sides[1]))
}

/// Rows in drawing order, each listing colors left to right.
fn rows(c: &Labeling, w: usize, h: usize) -> impl Iterator<Item = (usize, Vec<u8>)> + '_ {
    (0..h).rev().map(move |y| (h - 1 - y, (0..w).map(|x| c.at(x * h + y)).collect()))
}

pub fn ascii(c: &Labeling) -> Result<String> {
    let (w, h) = planar(c, GLYPHS.len())?;
    let glyphs = GLYPHS.as_bytes();
    let mut out = String::with_capacity((w + 1) * h);
    for (_, row) in rows(c, w, h) {
        out.extend(row.iter().map(|&k| glyphs[k as usize] as char));
        out.push('\n');
    }
    Ok(out)
}

pub fn svg(c: &Labeling) -> Result<String> {
    let (w, h) = planar(c, PALETTE.len())?;
    let (pw, ph) = (w * CELL, h * CELL);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{pw}" height="{ph}" viewBox="0 0 {pw} {ph}" shape-rendering="crispEdges">"#
    )
    .unwrap();
    for (line, row) in rows(c, w, h) {
        for (x, &k) in row.iter().enumerate() {
            writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                x * CELL,
                line * CELL,
                PALETTE[k as usize]
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusDomain;

    #[test]
    fn first_line_is_top_row() {
        let d = TorusDomain::new(vec![4, 6]).unwrap();
        let c = Labeling::from_fn(d, 4, |x| ((x[0] % 2) + 2 * (x[1] % 2)) as u8).unwrap();
        let text = ascii(&c).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0], "2323");
        assert_eq!(lines[5], "0101");
        let pic = svg(&c).unwrap();
        assert_eq!(pic.matches("<rect").count(), 24);
        assert!(pic.contains(r#"<rect x="0" y="100" width="20" height="20" fill="rgb(55,126,184)"/>"#));
    }

    #[test]
    fn rejects_other_dimensions() {
        let d = TorusDomain::new(vec![4, 4, 4]).unwrap();
        let c = Labeling::constant(d, 1, 0).unwrap();
        assert!(matches!(ascii(&c), Err(Error::Render(_))));
        assert!("png".parse::<Format>().is_err());
    }
}

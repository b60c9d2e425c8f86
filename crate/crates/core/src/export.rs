//! Point-set export: CSV rows with interval enclosures and SVG scatter plots.

use std::fmt::Write as _;
use std::io;

use num_rational::BigRational;
use serde::Serialize;

use crate::construction::GenerationSet;
use crate::ring::{lattice_coordinates, RingError};
use crate::scalar::interval::{decimal_digits, format_directed};
use crate::scalar::{ComplexInterval, ExactScalar};

/// One exported point with outward-rounded decimal bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRow {
    pub re_lo: String,
    pub re_hi: String,
    pub im_lo: String,
    pub im_hi: String,
    pub canonical_key: String,
    /// First generation containing the point.
    pub depth: usize,
    /// `(m, n)` with `point = m + n x`, for three-angle sets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<(String, String)>,
    #[serde(skip)]
    pub midpoint: (f64, f64),
}

pub fn format_interval(iv: &ComplexInterval) -> [String; 4] {
    let d = decimal_digits(iv.precision());
    [
        format_directed(iv.re.lo(), d, false),
        format_directed(iv.re.hi(), d, true),
        format_directed(iv.im.lo(), d, false),
        format_directed(iv.im.hi(), d, true),
    ]
}

/// Rows for every point of the last generation, each tagged with the first
/// depth at which it appears; ordered by depth, then canonical key.
///
/// `lattice_x` adds lattice coordinates relative to `Z + xZ`.
pub fn point_rows(
    gens: &[GenerationSet],
    prec: u32,
    theta: Option<&BigRational>,
    lattice_x: Option<&ExactScalar>,
) -> Result<Vec<PointRow>, RingError> {
    let mut rows = Vec::new();
    for (d, g) in gens.iter().enumerate() {
        for (key, v) in g.iter() {
            if d > 0 && gens[d - 1].contains(v) {
                continue;
            }
            let iv = v.to_interval(prec, theta)?;
            let [re_lo, re_hi, im_lo, im_hi] = format_interval(&iv);
            let lattice = match lattice_x {
                Some(x) => Some(match lattice_coordinates(v, x)? {
                    Some((m, n)) => (m.to_string(), n.to_string()),
                    None => (String::new(), String::new()),
                }),
                None => None,
            };
            rows.push(PointRow {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
                canonical_key: key.to_string(),
                depth: d,
                lattice,
                midpoint: (iv.re.midpoint_f64(), iv.im.midpoint_f64()),
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: io::Write>(rows: &[PointRow], out: W) -> Result<(), csv::Error> {
    let with_lattice = rows.iter().any(|r| r.lattice.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["re_lo", "re_hi", "im_lo", "im_hi", "canonical_key", "depth"];
    if with_lattice {
        header.extend(["lattice_m", "lattice_n"]);
    }
    w.write_record(&header)?;
    for r in rows {
        let depth = r.depth.to_string();
        let mut rec = vec![
            r.re_lo.as_str(),
            r.re_hi.as_str(),
            r.im_lo.as_str(),
            r.im_hi.as_str(),
            r.canonical_key.as_str(),
            depth.as_str(),
        ];
        if let Some((m, n)) = &r.lattice {
            rec.extend([m.as_str(), n.as_str()]);
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Visible region `[x_min, y_min, x_max, y_max]` in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Viewport {
    /// Bounding box of the rows with a 5% margin (at least 0.5).
    pub fn fit(rows: &[PointRow]) -> Viewport {
        let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 0.0f64);
        for r in rows {
            let (x, y) = r.midpoint;
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let pad = (0.05 * (x1 - x0).max(y1 - y0)).max(0.5);
        Viewport {
            x_min: x0 - pad,
            y_min: y0 - pad,
            x_max: x1 + pad,
            y_max: y1 + pad,
        }
    }
}

impl std::str::FromStr for Viewport {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        match v[..] {
            [x_min, y_min, x_max, y_max] if x_min < x_max && y_min < y_max => Ok(Viewport {
                x_min,
                y_min,
                x_max,
                y_max,
            }),
            _ => Err("expected x_min,y_min,x_max,y_max with min < max".into()),
        }
    }
}

/// One circle per point inside the viewport, in row order. The imaginary
/// axis points up.
pub fn render_svg(rows: &[PointRow], viewport: Viewport, radius: f64) -> String {
    let w = viewport.x_max - viewport.x_min;
    let h = viewport.y_max - viewport.y_min;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="800" height="{:.0}">"#,
        viewport.x_min,
        -viewport.y_max,
        w,
        h,
        800.0 * h / w
    );
    let _ = writeln!(
        s,
        r##"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="#ffffff"/>"##,
        viewport.x_min, -viewport.y_max, w, h
    );
    let _ = writeln!(
        s,
        r##"<g stroke="#bbbbbb" stroke-width="{:.6}"><line x1="{:.6}" y1="0" x2="{:.6}" y2="0"/><line x1="0" y1="{:.6}" x2="0" y2="{:.6}"/></g>"##,
        radius / 4.0,
        viewport.x_min,
        viewport.x_max,
        -viewport.y_max,
        -viewport.y_min
    );
    let _ = writeln!(s, r##"<g fill="#1f4e79">"##);
    for r in rows {
        let (x, y) = r.midpoint;
        if x < viewport.x_min || x > viewport.x_max || y < viewport.y_min || y > viewport.y_max {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" data-depth="{}"/>"#,
            x,
            if y == 0.0 { 0.0 } else { -y },
            radius,
            r.depth
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

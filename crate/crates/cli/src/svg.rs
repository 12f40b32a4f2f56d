//! Deterministic SVG rendering of a sampled curve.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use prime_curves::{CurveSamples, DerivativeOrder};

/// Fixed-precision coordinate, with `-0` folded into `0`.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        "0.000000".to_owned()
    } else {
        s
    }
}

/// A single closed polyline through the samples. The imaginary axis points up.
///
/// The view box is the bounding box padded by 5% of its extent on each side,
/// and the stroke width is one thousandth of the bounding-box diagonal.
pub fn svg_document(samples: &CurveSamples) -> Result<String, String> {
    if samples.order != DerivativeOrder::Value {
        return Err("plot needs samples of the curve itself (order 0)".into());
    }
    if samples.len() < 2 {
        return Err(format!("plot needs at least 2 samples, got {}", samples.len()));
    }
    let pts: Vec<(f64, f64)> = samples.values.iter().map(|z| (z.re, -z.im)).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    let diagonal = w.hypot(h);
    // A zero extent borrows the other axis, or 1 for a single point.
    let fallback = if w.max(h) > 0.0 { w.max(h) } else { 1.0 };
    let (bw, bh) = (if w > 0.0 { w } else { fallback }, if h > 0.0 { h } else { fallback });
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let (vw, vh) = (bw * 1.1, bh * 1.1);
    let stroke = if diagonal > 0.0 { diagonal } else { vw.hypot(vh) } / 1000.0;

    let mut path = String::with_capacity(pts.len() * 24);
    for (i, &(x, y)) in pts.iter().enumerate() {
        let _ = write!(path, "{}{} {}", if i == 0 { "M" } else { " L" }, num(x), num(y));
    }
    path.push_str(" Z");

    Ok(format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
            "<!-- n={} samples={} -->\n",
            "<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>\n",
            "</svg>\n"
        ),
        num(cx - vw / 2.0),
        num(cy - vh / 2.0),
        num(vw),
        num(vh),
        samples.n,
        samples.len(),
        path,
        num(stroke),
    ))
}

/// Writes [`svg_document`] to `path`.
pub fn render_svg(samples: &CurveSamples, path: &Path) -> io::Result<()> {
    let doc = svg_document(samples).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    std::fs::write(path, doc)
        .map_err(|e| io::Error::new(e.kind(), format!("cannot write {}: {e}", path.display())))
}

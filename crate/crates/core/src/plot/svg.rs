use std::fmt::Write;

use nalgebra::DVector;

use super::{PlotError, PlotStyle};
use crate::filters::FilterBank;
use crate::graph::Graph;

const COLORBAR_WIDTH: f64 = 70.0;
const GRADIENT_STEPS: usize = 16;

fn header(out: &mut String, style: &PlotStyle) {
    let (w, h) = (style.width, style.height);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.3} {h:.3}\">"
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
}

fn colorbar(out: &mut String, style: &PlotStyle, lo: f64, hi: f64) {
    let x = style.width - COLORBAR_WIDTH + 15.0;
    let (top, bottom) = (20.0, style.height - 20.0);
    out.push_str("<g id=\"colorbar\">\n<defs>\n<linearGradient id=\"colorbar-gradient\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n");
    for k in 0..=GRADIENT_STEPS {
        let t = k as f64 / GRADIENT_STEPS as f64;
        let _ = writeln!(out, "<stop offset=\"{t:.4}\" stop-color=\"{}\"/>", style.colormap.hex(t));
    }
    out.push_str("</linearGradient>\n</defs>\n");
    let _ = writeln!(
        out,
        "<rect x=\"{x:.3}\" y=\"{top:.3}\" width=\"15.000\" height=\"{:.3}\" fill=\"url(#colorbar-gradient)\" stroke=\"black\" stroke-width=\"0.5\"/>",
        bottom - top
    );
    let tx = x + 19.0;
    let _ = writeln!(out, "<text x=\"{tx:.3}\" y=\"{:.3}\" font-size=\"10\" font-family=\"sans-serif\">{hi:.4}</text>", top + 8.0);
    let _ = writeln!(out, "<text x=\"{tx:.3}\" y=\"{bottom:.3}\" font-size=\"10\" font-family=\"sans-serif\">{lo:.4}</text>");
    out.push_str("</g>\n");
}

/// Graph drawing with edges as `line` elements under vertices as `circle`
/// elements. With a signal, vertices are filled through the colormap and a
/// color bar is added; a constant signal maps to the middle color.
pub fn export_graph_svg(g: &Graph, signal: Option<&DVector<f64>>, style: &PlotStyle) -> Result<String, PlotError> {
    style.check()?;
    let coords = g.coords().ok_or(PlotError::MissingCoordinates)?;
    let n = g.n();
    if let Some(s) = signal {
        if s.len() != n {
            return Err(PlotError::ShapeMismatch { expected: n, got: s.len() });
        }
        if !s.iter().all(|v| v.is_finite()) {
            return Err(PlotError::NonFinite);
        }
    }
    if !coords.iter().all(|v| v.is_finite()) {
        return Err(PlotError::NonFinite);
    }
    let margin = 10.0 + 2.0 * style.vertex_radius;
    let right = if signal.is_some() { COLORBAR_WIDTH } else { 0.0 };
    let (aw, ah) = ((style.width - 2.0 * margin - right).max(1.0), (style.height - 2.0 * margin).max(1.0));
    let range = |c: usize| {
        let col = coords.column(c);
        if n == 0 {
            (0.0, 1.0)
        } else {
            (col.min(), col.max())
        }
    };
    let ((x0, x1), (y0, y1)) = (range(0), range(1));
    let (dx, dy) = ((x1 - x0).max(f64::MIN_POSITIVE), (y1 - y0).max(f64::MIN_POSITIVE));
    let scale = match (x1 > x0, y1 > y0) {
        (true, true) => (aw / dx).min(ah / dy),
        (true, false) => aw / dx,
        (false, true) => ah / dy,
        (false, false) => 1.0,
    };
    let cx = margin + aw / 2.0;
    let cy = margin + ah / 2.0;
    let pos = |i: usize| {
        let px = cx + (coords[(i, 0)] - (x0 + x1) / 2.0) * scale;
        let py = cy - (coords[(i, 1)] - (y0 + y1) / 2.0) * scale;
        (px, py)
    };

    let mut out = String::new();
    header(&mut out, style);
    if style.show_edges {
        let _ = writeln!(out, "<g id=\"edges\" stroke=\"#8c8c8c\" stroke-width=\"{:.3}\">", style.edge_width);
        for (i, j, _) in g.edges() {
            let ((ax, ay), (bx, by)) = (pos(i), pos(j));
            let _ = writeln!(out, "<line x1=\"{ax:.3}\" y1=\"{ay:.3}\" x2=\"{bx:.3}\" y2=\"{by:.3}\"/>");
        }
        out.push_str("</g>\n");
    }
    let (lo, hi) = match (signal, style.signal_range) {
        (Some(_), Some(r)) => r,
        (Some(s), None) if n > 0 => (s.min(), s.max()),
        _ => (0.0, 1.0),
    };
    out.push_str("<g id=\"vertices\" stroke=\"black\" stroke-width=\"0.5\">\n");
    for i in 0..n {
        let (px, py) = pos(i);
        let fill = match signal {
            Some(s) if hi > lo => style.colormap.hex((s[i] - lo) / (hi - lo)),
            _ => style.colormap.hex(0.5),
        };
        let _ = writeln!(out, "<circle cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"{:.3}\" fill=\"{fill}\"/>", style.vertex_radius);
    }
    out.push_str("</g>\n");
    if signal.is_some() {
        colorbar(&mut out, style, lo, hi);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Kernels of `fb` sampled at `grid_size` points of `[0, lmax]`, one
/// `polyline` each, plus a dashed polyline for the frame sum `sum_k g_k^2`.
pub fn export_filter_svg(fb: &FilterBank, lmax: f64, grid_size: usize, style: &PlotStyle) -> Result<String, PlotError> {
    style.check()?;
    if grid_size < 2 {
        return Err(PlotError::BadStyle("grid needs at least 2 points".into()));
    }
    if !(lmax > 0.0 && lmax.is_finite()) {
        return Err(PlotError::BadStyle(format!("lmax must be positive, got {lmax}")));
    }
    let xs: Vec<f64> = (0..grid_size).map(|i| lmax * i as f64 / (grid_size - 1) as f64).collect();
    let curves: Vec<Vec<f64>> = fb.kernels().iter().map(|k| xs.iter().map(|&x| k.eval(x)).collect()).collect();
    let frame: Vec<f64> = xs.iter().map(|&x| fb.frame_sum(x)).collect();
    if !curves.iter().flatten().chain(&frame).all(|v| v.is_finite()) {
        return Err(PlotError::NonFinite);
    }
    let all = curves.iter().flatten().chain(&frame);
    let lo = all.clone().fold(0.0_f64, |a, &v| a.min(v));
    let hi = all.fold(1.0_f64, |a, &v| a.max(v));
    let (left, right, top, bottom) = (60.0, style.width - 20.0, 20.0, style.height - 40.0);
    let px = |x: f64| left + (right - left) * x / lmax;
    let py = |y: f64| bottom - (bottom - top) * (y - lo) / (hi - lo);

    let mut out = String::new();
    header(&mut out, style);
    out.push_str("<g id=\"axes\" stroke=\"black\" stroke-width=\"1\">\n");
    let _ = writeln!(out, "<line x1=\"{left:.3}\" y1=\"{bottom:.3}\" x2=\"{right:.3}\" y2=\"{bottom:.3}\"/>");
    let _ = writeln!(out, "<line x1=\"{left:.3}\" y1=\"{bottom:.3}\" x2=\"{left:.3}\" y2=\"{top:.3}\"/>");
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (x, y) = (px(f * lmax), py(lo + f * (hi - lo)));
        let _ = writeln!(out, "<line x1=\"{x:.3}\" y1=\"{bottom:.3}\" x2=\"{x:.3}\" y2=\"{:.3}\"/>", bottom + 5.0);
        let _ = writeln!(out, "<line x1=\"{left:.3}\" y1=\"{y:.3}\" x2=\"{:.3}\" y2=\"{y:.3}\"/>", left - 5.0);
    }
    out.push_str("</g>\n<g id=\"tick-labels\" font-size=\"10\" font-family=\"sans-serif\">\n");
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (x, y) = (px(f * lmax), py(lo + f * (hi - lo)));
        let _ = writeln!(out, "<text x=\"{x:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{:.2}</text>", bottom + 17.0, f * lmax);
        let _ = writeln!(out, "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\">{:.2}</text>", left - 8.0, y + 3.0, lo + f * (hi - lo));
    }
    out.push_str("</g>\n<g id=\"kernels\" fill=\"none\" stroke-width=\"1.5\">\n");
    let nf = curves.len();
    let points = |ys: &[f64]| {
        let mut s = String::new();
        for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.3},{:.3}", px(x), py(y));
        }
        s
    };
    for (k, ys) in curves.iter().enumerate() {
        let t = if nf > 1 { k as f64 / (nf - 1) as f64 } else { 0.5 };
        let _ = writeln!(
            out,
            "<polyline class=\"kernel\" stroke=\"{}\" points=\"{}\"/>",
            style.colormap.hex(t),
            points(ys)
        );
    }
    let _ = writeln!(
        out,
        "<polyline class=\"frame\" stroke=\"black\" stroke-dasharray=\"6 4\" points=\"{}\"/>",
        points(&frame)
    );
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

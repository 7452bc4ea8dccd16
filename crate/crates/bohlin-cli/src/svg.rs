//! Minimal deterministic SVG writer: axes, two polyline orbits, legend.

use std::path::Path;

use bohlin::Sample;

use crate::CliError;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    fn fit(sets: &[&[Sample]]) -> Self {
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for set in sets {
            for s in *set {
                xmin = xmin.min(s.z.re);
                xmax = xmax.max(s.z.re);
                ymin = ymin.min(s.z.im);
                ymax = ymax.max(s.z.im);
            }
        }
        // Always show the origin; the force center anchors the picture.
        xmin = xmin.min(0.0);
        ymin = ymin.min(0.0);
        xmax = xmax.max(0.0);
        ymax = ymax.max(0.0);
        let span = (xmax - xmin).max(ymax - ymin).max(1e-12) * 1.1;
        let cx = 0.5 * (xmin + xmax);
        let cy = 0.5 * (ymin + ymax);
        Frame {
            x0: cx - 0.5 * span,
            y0: cy - 0.5 * span,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) * self.scale
    }

    // SVG y grows downward.
    fn py(&self, y: f64) -> f64 {
        SIZE - MARGIN - (y - self.y0) * self.scale
    }
}

fn polyline(frame: &Frame, samples: &[Sample], color: &str) -> String {
    let pts: Vec<String> = samples
        .iter()
        .map(|s| format!("{:.4},{:.4}", frame.px(s.z.re), frame.py(s.z.im)))
        .collect();
    format!(
        "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        pts.join(" ")
    )
}

/// A single orbit on its own canvas.
pub fn write_orbit(path: &Path, samples: &[Sample], label: &str) -> Result<(), CliError> {
    let frame = Frame::fit(&[samples]);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n",
        MARGIN,
        frame.py(0.0),
        SIZE - MARGIN,
        frame.py(0.0)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n",
        frame.px(0.0),
        MARGIN,
        frame.px(0.0),
        SIZE - MARGIN
    ));
    svg.push_str(&polyline(&frame, samples, "#0072b2"));
    svg.push_str(&format!(
        "  <text x=\"{MARGIN}\" y=\"20\" font-family=\"monospace\" font-size=\"13\" fill=\"#0072b2\">{label}</text>\n"
    ));
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Overlay of the source orbit and its dual image, with a caption block.
pub fn write_overlay(
    path: &Path,
    original: &[Sample],
    original_label: &str,
    dual: &[Sample],
    dual_label: &str,
    caption: &[String],
) -> Result<(), CliError> {
    let frame = Frame::fit(&[original, dual]);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // Axes through the origin.
    svg.push_str(&format!(
        "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n",
        MARGIN,
        frame.py(0.0),
        SIZE - MARGIN,
        frame.py(0.0)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n",
        frame.px(0.0),
        MARGIN,
        frame.px(0.0),
        SIZE - MARGIN
    ));
    svg.push_str(&polyline(&frame, original, "#0072b2"));
    svg.push_str(&polyline(&frame, dual, "#d55e00"));
    svg.push_str(&format!(
        "  <text x=\"{MARGIN}\" y=\"20\" font-family=\"monospace\" font-size=\"13\" fill=\"#0072b2\">{original_label}</text>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{MARGIN}\" y=\"36\" font-family=\"monospace\" font-size=\"13\" fill=\"#d55e00\">{dual_label}</text>\n"
    ));
    for (i, line) in caption.iter().enumerate() {
        svg.push_str(&format!(
            "  <text x=\"{MARGIN}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" fill=\"#333333\">{line}</text>\n",
            SIZE - 10.0 - 14.0 * (caption.len() - 1 - i) as f64
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

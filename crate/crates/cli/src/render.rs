//! SVG frame strips.

use std::fmt::Write as _;

use regcurve::{HomotopyPath, Point2, SampledCurve};

#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    /// Side of one square frame cell, in pixels.
    pub frame_size: u32,
    pub stroke_width: f64,
    pub frames_per_row: u32,
    /// Draw velocity direction ticks every `N/16` samples.
    pub arrow_marks: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            frame_size: 160,
            stroke_width: 1.5,
            frames_per_row: 8,
            arrow_marks: true,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.frame_size == 0 || self.frames_per_row == 0 {
            return Err("frame size and frames per row must be positive".into());
        }
        if !(self.stroke_width > 0.0 && self.stroke_width.is_finite()) {
            return Err(format!("stroke width must be positive, got {}", self.stroke_width));
        }
        Ok(())
    }
}

/// Indices of the frames to draw. Annotated keyframes (plus both ends) are
/// used when they fit in `max`, otherwise `max` evenly spaced frames.
pub fn select_frames(path: &HomotopyPath, max: usize) -> Vec<usize> {
    let count = path.len();
    let max = max.max(2);
    if count <= max {
        return (0..count).collect();
    }
    let mut keys: Vec<usize> = path
        .notes()
        .iter()
        .enumerate()
        .filter(|(_, n)| n.is_some())
        .map(|(i, _)| i)
        .collect();
    keys.push(0);
    keys.push(count - 1);
    keys.sort_unstable();
    keys.dedup();
    if keys.len() <= max {
        return keys;
    }
    let mut even: Vec<usize> = (0..max)
        .map(|j| ((j * (count - 1)) as f64 / (max - 1) as f64).round() as usize)
        .collect();
    even.dedup();
    even
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the given frames into one SVG, all drawn at a common scale so
/// that motion between frames stays visible.
pub fn render_frames(frames: &[(&SampledCurve, Option<&str>)], config: &RenderConfig) -> String {
    let size = config.frame_size as f64;
    let per_row = (config.frames_per_row as usize).min(frames.len()).max(1);
    let rows = frames.len().div_ceil(per_row).max(1);
    let label = 14.0;
    let (width, height) = (per_row as f64 * size, rows as f64 * (size + label));

    let (mut lo, mut hi) = (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for (f, _) in frames {
        for p in f.points() {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
    }
    let extent = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let margin = 0.08 * size;
    let unit = (size - 2.0 * margin) / extent;
    let mid = (lo + hi) * 0.5;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, (curve, note)) in frames.iter().enumerate() {
        let ox = (k % per_row) as f64 * size;
        let oy = (k / per_row) as f64 * (size + label);
        // y grows downwards in SVG
        let map = |p: Point2| (ox + size / 2.0 + (p.x - mid.x) * unit, oy + size / 2.0 - (p.y - mid.y) * unit);
        let _ = writeln!(svg, r#"<g id="frame-{k}">"#);
        let mut d = String::new();
        for (i, p) in curve.points().iter().enumerate() {
            let (x, y) = map(*p);
            let _ = write!(d, "{}{x:.2} {y:.2}", if i == 0 { "M" } else { " L" });
        }
        d.push_str(" Z");
        let _ = writeln!(
            svg,
            r#"<path d="{d}" fill="none" stroke="black" stroke-width="{:.2}" stroke-linejoin="round"/>"#,
            config.stroke_width
        );
        if config.arrow_marks {
            let n = curve.len();
            let step = (n / 16).max(1);
            let len = 0.05 * size;
            for i in (0..n).step_by(step) {
                let v = curve.velocities()[i];
                let speed = v.norm();
                if speed == 0.0 {
                    continue;
                }
                let (x0, y0) = map(curve.points()[i]);
                let (dx, dy) = (v.x / speed * len, -v.y / speed * len);
                let _ = writeln!(
                    svg,
                    r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{:.2}" stroke="#c03030" stroke-width="{:.2}"/>"##,
                    x0 + dx,
                    y0 + dy,
                    config.stroke_width
                );
            }
        }
        if let Some(note) = note {
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
                ox + size / 2.0,
                oy + size + label - 3.0,
                escape(note)
            );
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn render_curve(curve: &SampledCurve, config: &RenderConfig) -> String {
    render_frames(&[(curve, None)], config)
}

/// A strip of at most `max_frames` frames of `path`.
pub fn render_path(path: &HomotopyPath, max_frames: usize, config: &RenderConfig) -> String {
    let frames: Vec<(&SampledCurve, Option<&str>)> = select_frames(path, max_frames)
        .into_iter()
        .map(|i| (&path.frames()[i], path.notes()[i].as_deref()))
        .collect();
    render_frames(&frames, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use regcurve::{make_gamma, realize_code, realize_reduction, CanonicalIndex, Direction};

    #[test]
    fn one_frame_for_a_curve() {
        let g = make_gamma(CanonicalIndex::GammaK(1), 64).unwrap();
        let svg = render_curve(&g, &RenderConfig::default());
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<line").count(), 16);
        let plain = render_curve(&g, &RenderConfig { arrow_marks: false, ..RenderConfig::default() });
        assert_eq!(plain.matches("<line").count(), 0);
    }

    #[test]
    fn keyframes_preferred() {
        let word = "LLRLRLLR".parse().unwrap();
        let code = regcurve::homotopy::synthetic_code(&word, Direction::new(1.0, 0.0).unwrap());
        let path = realize_reduction(&realize_code(&code, 128).unwrap()).unwrap();
        let picked = select_frames(&path, 7);
        assert_eq!(picked.len(), 7);
        assert!(picked.iter().all(|&i| path.notes()[i].is_some() || i == 0 || i == path.len() - 1));
        let svg = render_path(&path, 7, &RenderConfig::default());
        assert_eq!(svg.matches("<path").count(), 7);
        let few = select_frames(&path, 3);
        assert_eq!(few.len(), 3);
        assert_eq!((few[0], few[2]), (0, path.len() - 1));
    }

    #[test]
    fn notes_are_escaped() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}

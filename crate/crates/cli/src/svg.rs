//! Dependency-free static SVG 1.1 log-log plots of the error tables.
//!
//! Fixed 800x600 canvas, 6-tick axes, one polyline per method, reference
//! guide lines for the slopes 1, 3/2, 2, 5/2 and 4, a legend, and hollow
//! markers for under-resolved points. Elements carry `class` and `data-*`
//! attributes so tests can locate series and guides by name.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::csvio::ErrorRow;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 40.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;
const N_TICKS: usize = 6;

const GUIDE_SLOPES: [(f64, &str); 5] = [
    (1.0, "nu^1"),
    (1.5, "nu^3/2"),
    (2.0, "nu^2"),
    (2.5, "nu^5/2"),
    (4.0, "nu^4"),
];

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Which error column to plot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Panel {
    Omega1,
    Omega2,
}

impl Panel {
    fn title(self) -> &'static str {
        match self {
            Panel::Omega1 => "L2 space-time error on Omega_1 (viscous side)",
            Panel::Omega2 => "L2 space-time error on Omega_2 (inviscid side)",
        }
    }

    fn err_of(self, r: &ErrorRow) -> f64 {
        match self {
            Panel::Omega1 => r.err_omega1,
            Panel::Omega2 => r.err_omega2,
        }
    }
}

struct LogMap {
    lx_min: f64,
    lx_max: f64,
    ly_min: f64,
    ly_max: f64,
}

impl LogMap {
    fn x(&self, nu: f64) -> f64 {
        let w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + (nu.log10() - self.lx_min) / (self.lx_max - self.lx_min) * w
    }

    fn y(&self, err: f64) -> f64 {
        let h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        MARGIN_TOP + (self.ly_max - err.log10()) / (self.ly_max - self.ly_min) * h
    }
}

/// Render one panel of the error table as a complete SVG document. Rows with
/// non-finite or non-positive errors (failed solver cells) are skipped; with
/// no plottable data the axes are still drawn over a default range.
pub fn plot_errors(rows: &[ErrorRow], panel: Panel) -> String {
    // Group plottable points by method, sorted by viscosity.
    let mut series: BTreeMap<&str, Vec<(f64, f64, bool)>> = BTreeMap::new();
    for r in rows {
        let e = panel.err_of(r);
        if r.method == "monodomain" {
            continue; // the reference has zero error by definition
        }
        if r.nu > 0.0 && e.is_finite() && e > 0.0 {
            series.entry(&r.method).or_default().push((r.nu, e, r.resolved));
        }
    }
    for pts in series.values_mut() {
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    }

    let (mut lx_min, mut lx_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ly_min, mut ly_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for pts in series.values() {
        for (nu, e, _) in pts {
            lx_min = lx_min.min(nu.log10());
            lx_max = lx_max.max(nu.log10());
            ly_min = ly_min.min(e.log10());
            ly_max = ly_max.max(e.log10());
        }
    }
    if !lx_min.is_finite() {
        (lx_min, lx_max) = (-4.0, -1.0);
        (ly_min, ly_max) = (-8.0, 0.0);
    }
    // Pad the ranges so markers do not sit on the frame; keep degenerate
    // single-point ranges usable.
    let pad = |lo: &mut f64, hi: &mut f64| {
        let span = (*hi - *lo).max(0.5);
        *lo -= 0.1 * span;
        *hi += 0.1 * span;
    };
    pad(&mut lx_min, &mut lx_max);
    pad(&mut ly_min, &mut ly_max);
    let map = LogMap { lx_min, lx_max, ly_min, ly_max };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        panel.title()
    );

    draw_axes(&mut svg, &map);
    draw_guides(&mut svg, &map);

    for (i, (method, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|(nu, e, _)| format!("{:.2},{:.2}", map.x(*nu), map.y(*e)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-method="{method}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
        for (nu, e, resolved) in pts {
            let fill = if *resolved { color } else { "none" };
            let _ = writeln!(
                svg,
                r#"<circle class="marker" data-method="{method}" data-resolved="{resolved}" cx="{:.2}" cy="{:.2}" r="4" fill="{fill}" stroke="{color}" stroke-width="1.5"/>"#,
                map.x(*nu),
                map.y(*e)
            );
        }
    }

    draw_legend(&mut svg, series.keys().copied().collect::<Vec<_>>());

    svg.push_str("</svg>\n");
    svg
}

fn draw_axes(svg: &mut String, map: &LogMap) {
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let _ = writeln!(
        svg,
        r#"<rect class="frame" x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for i in 0..N_TICKS {
        let s = i as f64 / (N_TICKS - 1) as f64;
        // x ticks
        let lx = map.lx_min + s * (map.lx_max - map.lx_min);
        let px = map.x(10f64.powf(lx));
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 6.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            y0 + 22.0,
            tick_label(lx)
        );
        // y ticks
        let ly = map.ly_min + s * (map.ly_max - map.ly_min);
        let py = map.y(10f64.powf(ly));
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{:.2}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/>"#,
            x0 - 6.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            x0 - 10.0,
            py + 4.0,
            tick_label(ly)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">viscosity nu</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 20 {})">error</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn tick_label(log_value: f64) -> String {
    format!("{:.1e}", 10f64.powf(log_value))
}

/// Reference slope guides, drawn as dashed lines through the top-right corner
/// of the data window so `err ~ C nu^s` series run parallel to them.
fn draw_guides(svg: &mut String, map: &LogMap) {
    for (slope, name) in GUIDE_SLOPES {
        // log10(err) = ly_anchor + slope * (log10(nu) - lx_max); clip to the
        // y-range so steep guides stay inside the frame.
        let ly_anchor = map.ly_max;
        let lx_start = (map.lx_min).max(map.lx_max - (ly_anchor - map.ly_min) / slope);
        let (x1, y1) = (
            map.x(10f64.powf(lx_start)),
            map.y(10f64.powf(ly_anchor + slope * (lx_start - map.lx_max))),
        );
        let (x2, y2) = (map.x(10f64.powf(map.lx_max)), map.y(10f64.powf(ly_anchor)));
        let _ = writeln!(
            svg,
            r##"<line class="guide" data-slope="{slope}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#bbbbbb" stroke-dasharray="5 4"/>"##
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="#888888">{name}</text>"##,
            x1 + 4.0,
            y1 - 4.0
        );
    }
}

fn draw_legend(svg: &mut String, methods: Vec<&str>) {
    if methods.is_empty() {
        return;
    }
    let x = WIDTH - MARGIN_RIGHT - 180.0;
    let y = MARGIN_TOP + 10.0;
    let h = 18.0 * methods.len() as f64 + 12.0;
    let _ = writeln!(
        svg,
        r#"<rect class="legend" x="{x}" y="{y}" width="170" height="{h}" fill="white" stroke="black" opacity="0.9"/>"#
    );
    for (i, m) in methods.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let row_y = y + 18.0 * (i as f64 + 1.0);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{row_y:.2}" x2="{:.2}" y2="{row_y:.2}" stroke="{color}" stroke-width="2"/>"#,
            x + 8.0,
            x + 36.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{m}</text>"#,
            x + 42.0,
            row_y + 4.0
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(nu: f64, method: &str, e1: f64, e2: f64, resolved: bool) -> ErrorRow {
        ErrorRow {
            nu,
            method: method.into(),
            err_omega1: e1,
            err_omega2: e2,
            peclet: 1.0,
            resolved,
        }
    }

    #[test]
    fn empty_table_yields_valid_svg_without_polylines() {
        let svg = plot_errors(&[], Panel::Omega1);
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"version="1.1""#));
        assert!(svg.contains(r#"class="frame""#));
        assert!(!svg.contains("<polyline"));
        // Balanced document: every element is self-closing except svg itself.
        assert_eq!(svg.matches("<svg").count(), 1);
        assert_eq!(svg.matches("</svg>").count(), 1);
    }

    #[test]
    fn six_ticks_per_axis() {
        let svg = plot_errors(&[], Panel::Omega2);
        assert_eq!(svg.matches(r#"class="tick""#).count(), 2 * N_TICKS);
    }

    #[test]
    fn unresolved_points_are_hollow() {
        let rows = [
            row(1e-2, "variational", 1e-3, 1e-2, true),
            row(1e-3, "variational", 1e-4, 1e-3, false),
        ];
        let svg = plot_errors(&rows, Panel::Omega1);
        assert!(svg.contains(r#"data-resolved="false" cx"#));
        assert!(svg.contains(r#"fill="none" stroke="#));
    }

    /// A synthetic err = nu^2 series must be parallel to the nu^2 guide line
    /// in screen coordinates (equal endpoint slopes).
    #[test]
    fn nu_squared_series_parallel_to_guide() {
        let nus = [1e-3, 3e-3, 1e-2, 3e-2];
        let rows: Vec<ErrorRow> =
            nus.iter().map(|&nu| row(nu, "factorization1", nu * nu, nu, true)).collect();
        let svg = plot_errors(&rows, Panel::Omega1);

        let pts = extract_polyline_points(&svg, "factorization1");
        let (sx, sy) = pts[0];
        let (ex, ey) = *pts.last().unwrap();
        let series_slope = (ey - sy) / (ex - sx);

        let (gx1, gy1, gx2, gy2) = extract_guide(&svg, "2");
        let guide_slope = (gy2 - gy1) / (gx2 - gx1);
        assert!(
            (series_slope - guide_slope).abs() < 0.02,
            "series {series_slope} vs guide {guide_slope}"
        );
    }

    fn extract_polyline_points(svg: &str, method: &str) -> Vec<(f64, f64)> {
        let tag = format!(r#"data-method="{method}" points=""#);
        let start = svg.find(&tag).expect("series present") + tag.len();
        let end = svg[start..].find('"').unwrap() + start;
        svg[start..end]
            .split_whitespace()
            .map(|p| {
                let (x, y) = p.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect()
    }

    fn extract_guide(svg: &str, slope: &str) -> (f64, f64, f64, f64) {
        let tag = format!(r#"data-slope="{slope}" "#);
        let start = svg.find(&tag).expect("guide present");
        let line = &svg[start..start + svg[start..].find("/>").unwrap()];
        let attr = |name: &str| -> f64 {
            let t = format!(r#"{name}=""#);
            let s = line.find(&t).unwrap() + t.len();
            let e = line[s..].find('"').unwrap() + s;
            line[s..e].parse().unwrap()
        };
        (attr("x1"), attr("y1"), attr("x2"), attr("y2"))
    }
}

use std::fmt::Write as _;

use quick_xml::escape::escape;

use super::LINE_PALETTE;
use crate::corpus::TrendSeries;
use crate::error::{Error, Result};

const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 48.0;
const FONT: &str = "sans-serif";

/// Plot area of a chart of the given size: (left, top, width, height).
pub(crate) fn plot_area(width: u32, height: u32) -> (f64, f64, f64, f64) {
    let w = (width as f64 - MARGIN_LEFT - MARGIN_RIGHT).max(1.0);
    let h = (height as f64 - MARGIN_TOP - MARGIN_BOTTOM).max(1.0);
    (MARGIN_LEFT, MARGIN_TOP, w, h)
}

/// Line chart of per-segment counts, one polyline per term.
pub fn render_trend_svg(series: &TrendSeries, width: u32, height: u32) -> Result<Vec<u8>> {
    let s = series.segment_count;
    if s < 2 {
        return Err(Error::DegenerateSeries(s));
    }
    if series.terms.is_empty() {
        return Err(Error::NoTerms);
    }
    let (left, top, w, h) = plot_area(width, height);
    let max = series.max_count();
    let x = |seg: usize| left + seg as f64 * w / (s - 1) as f64;
    let y = |c: usize| {
        if max == 0 {
            top + h
        } else {
            top + h - c as f64 / max as f64 * h
        }
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="{FONT}" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#);

    // axes
    let (bottom, right) = (top + h, left + w);
    let _ = writeln!(
        out,
        r#"<path d="M{left:.2} {top:.2}V{bottom:.2}H{right:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for seg in 0..s {
        let xs = x(seg);
        let _ = writeln!(
            out,
            r#"<line x1="{xs:.2}" y1="{bottom:.2}" x2="{xs:.2}" y2="{:.2}" stroke="black"/><text x="{xs:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 18.0,
            seg + 1
        );
    }
    let ticks: Vec<usize> = if max <= 5 {
        (0..=max).collect()
    } else {
        (0..=4).map(|i| (max * i + 2) / 4).collect()
    };
    let mut last = None;
    for c in ticks {
        if last == Some(c) {
            continue;
        }
        last = Some(c);
        let yc = y(c);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{yc:.2}" x2="{left:.2}" y2="{yc:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{c}</text>"#,
            left - 5.0,
            left - 8.0,
            yc + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">segment</text>"#,
        left + w / 2.0,
        bottom + 38.0
    );

    for (t, term) in series.terms.iter().enumerate() {
        let colour = LINE_PALETTE[t % LINE_PALETTE.len()];
        let points: Vec<String> = series.counts[t]
            .iter()
            .enumerate()
            .map(|(seg, &c)| format!("{:.2},{:.2}", x(seg), y(c)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            points.join(" ")
        );
        let ly = top + 8.0 + 18.0 * t as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            right + 12.0,
            right + 32.0,
            right + 38.0,
            ly + 4.0,
            escape(term.as_str())
        );
    }
    out.push_str("</svg>\n");
    Ok(out.into_bytes())
}

use std::f64::consts::TAU;
use std::fmt::Write as _;

use quick_xml::escape::escape;

use super::LINE_PALETTE;
use crate::corpus::FrequencyTable;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

pub const WORDCLOUD_WIDTH: f64 = 800.0;
pub const WORDCLOUD_HEIGHT: f64 = 600.0;

const MIN_FONT: f64 = 12.0;
const FONT_RANGE: f64 = 52.0;
// Rough advance of one glyph, as a fraction of the font size.
const GLYPH_WIDTH: f64 = 0.6;
const PADDING: f64 = 2.0;
// Radius gained per radian of the spiral.
const SPIRAL_PITCH: f64 = 2.0;
// Distance travelled along the spiral between tries, in px.
const SPIRAL_STEP: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedWord {
    pub term: String,
    pub count: usize,
    pub font_size: f64,
    /// Centre of the word's box.
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl PlacedWord {
    /// `(x0, y0, x1, y1)` of the bounding box.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        (
            self.x - self.width / 2.0,
            self.y - self.height / 2.0,
            self.x + self.width / 2.0,
            self.y + self.height / 2.0,
        )
    }

    pub fn overlaps(&self, other: &PlacedWord) -> bool {
        let (a0, b0, a1, b1) = self.bounds();
        let (c0, d0, c1, d1) = other.bounds();
        a0 < c1 && c0 < a1 && b0 < d1 && d0 < b1
    }
}

/// Places the `top_n` most frequent terms, largest first, each at the first
/// free spot along an Archimedean spiral out of the canvas centre. The
/// spiral's starting angle is drawn per word from `seed`.
pub fn wordcloud_layout(table: &FrequencyTable, top_n: usize, seed: u64) -> Result<Vec<PlacedWord>> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    if top_n == 0 {
        return Err(Error::Config("word cloud needs at least one term".into()));
    }
    let words = table.top(top_n);
    let c_max = words[0].1 as f64;
    let (cx, cy) = (WORDCLOUD_WIDTH / 2.0, WORDCLOUD_HEIGHT / 2.0);
    let mut rng = SplitMix64::new(seed);
    let mut placed: Vec<PlacedWord> = Vec::with_capacity(words.len());

    for (term, count) in words {
        let font_size = MIN_FONT + FONT_RANGE * (count as f64 / c_max).sqrt();
        let mut word = PlacedWord {
            term: term.to_owned(),
            count,
            font_size,
            x: cx,
            y: cy,
            width: GLYPH_WIDTH * font_size * term.chars().count() as f64 + 2.0 * PADDING,
            height: font_size + 2.0 * PADDING,
        };
        let start = rng.next_f64() * TAU;
        let mut t = 0.0_f64;
        loop {
            let r = SPIRAL_PITCH * t;
            word.x = cx + r * (start + t).cos();
            word.y = cy + r * (start + t).sin();
            if placed.iter().all(|p| !p.overlaps(&word)) {
                break;
            }
            t += (SPIRAL_STEP / r.max(SPIRAL_STEP)).min(0.5);
        }
        placed.push(word);
    }
    Ok(placed)
}

/// SVG word cloud. The view box grows past the nominal canvas when the
/// spiral had to go further out, so every term stays visible.
pub fn render_wordcloud_svg(table: &FrequencyTable, top_n: usize, seed: u64) -> Result<Vec<u8>> {
    let words = wordcloud_layout(table, top_n, seed)?;
    let (mut x0, mut y0, mut x1, mut y1) = (0.0_f64, 0.0_f64, WORDCLOUD_WIDTH, WORDCLOUD_HEIGHT);
    for w in &words {
        let (a, b, c, d) = w.bounds();
        x0 = x0.min(a);
        y0 = y0.min(b);
        x1 = x1.max(c);
        y1 = y1.max(d);
    }
    let (x0, y0) = (x0.floor(), y0.floor());
    let (vw, vh) = ((x1.ceil() - x0), (y1.ceil() - y0));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{vw}" height="{vh}" viewBox="{x0} {y0} {vw} {vh}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect x="{x0}" y="{y0}" width="{vw}" height="{vh}" fill="white"/>"#);
    for (rank, w) in words.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="{:.2}" fill="{}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
            w.x,
            w.y,
            w.font_size,
            LINE_PALETTE[rank % LINE_PALETTE.len()],
            escape(w.term.as_str())
        );
    }
    out.push_str("</svg>\n");
    Ok(out.into_bytes())
}

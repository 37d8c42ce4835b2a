//! Text and SVG pictures of a barcode.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::persist::{Bar, Barcode};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Svg,
}

pub fn render_barcode(barcode: &Barcode, format: RenderFormat, color: bool) -> String {
    match format {
        RenderFormat::Text => render_text(barcode, color),
        RenderFormat::Svg => render_svg(barcode),
    }
}

fn interval(bar: &Bar) -> String {
    let death = bar.death.as_ref().map_or("inf".to_string(), format_rational);
    format!("[{}, {death})", format_rational(&bar.birth))
}

/// One line per bar, e.g. `H1  [1, inf)  q`, after a header line.
pub fn render_text(barcode: &Barcode, color: bool) -> String {
    let n = barcode.len();
    let mut out = format!("# barcode ({n} bar{})\n", if n == 1 { "" } else { "s" });
    for bar in barcode.bars() {
        let degree = format!("H{}", bar.degree);
        let span = interval(bar);
        if color {
            let tint = if bar.is_infinite() { "1;32" } else { "33" };
            write!(out, "\x1b[36m{degree}\x1b[0m  \x1b[{tint}m{span}\x1b[0m").unwrap();
        } else {
            write!(out, "{degree}  {span}").unwrap();
        }
        if let Some(label) = &bar.birth_label {
            write!(out, "  {}", label.join("+")).unwrap();
        }
        if let Some(label) = &bar.death_label {
            write!(out, "  (dies: {})", label.join("+")).unwrap();
        }
        out.push('\n');
    }
    out
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const WIDTH: f64 = 640.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 560.0;
const ARROW_END: f64 = 610.0;
const ROW: f64 = 22.0;
const LANE_GAP: f64 = 14.0;

/// Horizontal bars in one lane per degree; infinite bars run off to the
/// right edge and end in an arrowhead.
pub fn render_svg(barcode: &Barcode) -> String {
    let top = barcode
        .bars()
        .iter()
        .flat_map(|b| std::iter::once(&b.birth).chain(b.death.as_ref()))
        .max()
        .cloned()
        .unwrap_or_else(|| int(1));
    let scale = |r: &Rational| LEFT + (RIGHT - LEFT) * (r / &top).to_f64().unwrap_or(0.0);

    let mut body = String::new();
    let mut y = 20.0;
    for degree in barcode.degrees() {
        y += LANE_GAP;
        writeln!(body, r#"  <text x="10" y="{:.1}" font-weight="bold">H{degree}</text>"#, y + 4.0).unwrap();
        for bar in barcode.in_degree(degree) {
            let x1 = scale(&bar.birth);
            let (x2, marker) = match &bar.death {
                Some(d) => (scale(d), ""),
                None => (ARROW_END, r#" marker-end="url(#arrow)""#),
            };
            writeln!(
                body,
                r#"  <line x1="{x1:.1}" y1="{y:.1}" x2="{x2:.1}" y2="{y:.1}" stroke="black" stroke-width="3"{marker}/>"#
            )
            .unwrap();
            writeln!(body, r#"  <circle cx="{x1:.1}" cy="{y:.1}" r="3"/>"#).unwrap();
            let mut caption = interval(bar);
            if let Some(label) = &bar.birth_label {
                caption = format!("{} {caption}", label.join("+"));
            }
            writeln!(body, r#"  <text x="{x1:.1}" y="{:.1}">{}</text>"#, y - 6.0, escape(&caption)).unwrap();
            y += ROW;
        }
    }
    let axis = y + 6.0;
    let height = axis + 24.0;
    writeln!(body, r#"  <line x1="{LEFT:.1}" y1="{axis:.1}" x2="{ARROW_END:.1}" y2="{axis:.1}" stroke="gray"/>"#).unwrap();
    writeln!(body, r#"  <text x="{LEFT:.1}" y="{:.1}">0</text>"#, axis + 16.0).unwrap();
    writeln!(body, r#"  <text x="{RIGHT:.1}" y="{:.1}">{}</text>"#, axis + 16.0, format_rational(&top)).unwrap();

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}" font-family="monospace" font-size="12">"#
    )
    .unwrap();
    out.push_str(
        "  <defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"4\" orient=\"auto\">\
         <path d=\"M0,0 L8,4 L0,8 z\"/></marker></defs>\n",
    );
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}

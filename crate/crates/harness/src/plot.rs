//! Standalone SVG plots: counts histograms and optimization traces.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::experiment::{CountsFile, TraceTable};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 72.0;

const BAR_FILL: &str = "#7a8ca3";
const OPTIMUM_FILL: &str = "#d1495b";
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Energy,
    Params,
}

impl FromStr for Series {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "energy" => Ok(Series::Energy),
            "params" => Ok(Series::Params),
            other => Err(format!("unknown series {other:?}; expected energy or params")),
        }
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<text class="title" x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Left and bottom axes with `ticks` labelled y gridlines spanning `[lo, hi]`.
fn axes(out: &mut String, lo: f64, hi: f64, ticks: usize, x_label: &str, y_label: &str) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r##"<g class="axes" stroke="#333"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"##
    );
    for k in 0..=ticks {
        let v = lo + (hi - lo) * k as f64 / ticks as f64;
        let y = y0 - (y0 - y1) * k as f64 / ticks as f64;
        let _ = writeln!(
            out,
            r##"<line class="grid" x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#ddd"/><text class="tick" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            x0 - 6.0,
            y + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text class="xlabel" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>
<text class="ylabel" x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(x_label),
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Vertical probability bars in lexicographic bitstring order; bars for
/// bitstrings in `highlight` get class `optimum`.
pub fn plot_histogram(counts: &CountsFile, highlight: &BTreeSet<String>) -> String {
    let mut out = String::new();
    header(&mut out, &format!("Measured distribution ({} shots)", counts.shots));
    let shots = counts.shots.max(1) as f64;
    let max_p = counts.counts.values().copied().max().unwrap_or(0) as f64 / shots;
    let top = if max_p > 0.0 { max_p } else { 1.0 };
    axes(&mut out, 0.0, top, 5, "bitstring", "probability");
    let n = counts.counts.len().max(1) as f64;
    let plot_w = WIDTH - LEFT - RIGHT;
    let slot = plot_w / n;
    let bar_w = slot * 0.8;
    let base = HEIGHT - BOTTOM;
    for (i, (bits, &c)) in counts.counts.iter().enumerate() {
        let p = c as f64 / shots;
        let h = (HEIGHT - TOP - BOTTOM) * p / top;
        let x = LEFT + slot * i as f64 + (slot - bar_w) / 2.0;
        let optimum = highlight.contains(bits);
        let (class, fill) = if optimum { ("bar optimum", OPTIMUM_FILL) } else { ("bar", BAR_FILL) };
        let _ = writeln!(
            out,
            r#"<rect class="{class}" data-bitstring="{bits}" data-probability="{p}" x="{x:.2}" y="{:.2}" width="{bar_w:.2}" height="{h:.2}" fill="{fill}"/>"#,
            base - h
        );
        let cx = x + bar_w / 2.0;
        let _ = writeln!(
            out,
            r#"<text class="label" x="{cx:.2}" y="{:.2}" text-anchor="end" transform="rotate(-60 {cx:.2} {:.2})">{bits}</text>"#,
            base + 12.0,
            base + 12.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Energy (one polyline) or all `2p` parameters (one labelled polyline each)
/// against evaluation index.
pub fn plot_trace(table: &TraceTable, series: Series) -> String {
    let mut out = String::new();
    let lines: Vec<(String, Vec<(f64, f64)>)> = match series {
        Series::Energy => vec![(
            "energy".into(),
            table.rows.iter().map(|(e, f, _)| (*e as f64, *f)).collect(),
        )],
        Series::Params => (0..2 * table.p)
            .map(|k| {
                let name = if k < table.p {
                    format!("beta_{}", k + 1)
                } else {
                    format!("gamma_{}", k - table.p + 1)
                };
                (name, table.rows.iter().map(|(e, _, th)| (*e as f64, th[k])).collect())
            })
            .collect(),
    };
    let title = match series {
        Series::Energy => "Energy progression",
        Series::Params => "Parameter progression",
    };
    header(&mut out, title);

    let values = lines.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.1));
    let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        if v.is_finite() { (a.min(v), b.max(v)) } else { (a, b) }
    });
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let last = table.rows.last().map_or(1.0, |r| r.0 as f64).max(1.0);
    let y_label = if series == Series::Energy { "energy" } else { "radians" };
    axes(&mut out, lo, hi, 5, "evaluation", y_label);

    let sx = |e: f64| LEFT + (WIDTH - LEFT - RIGHT) * e / last;
    let sy = |v: f64| HEIGHT - BOTTOM - (HEIGHT - TOP - BOTTOM) * (v - lo) / (hi - lo);
    for (k, (name, pts)) in lines.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = pts
            .iter()
            .map(|&(e, v)| format!("{:.2},{:.2}", sx(e), sy(if v.is_finite() { v } else { hi })))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="series" data-series="{name}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        if series == Series::Params {
            let y = TOP + 4.0 + 14.0 * k as f64;
            let x = WIDTH - RIGHT - 70.0;
            let _ = writeln!(
                out,
                r#"<g class="legend"><line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/><text class="label" x="{}" y="{}">{name}</text></g>"#,
                x + 16.0,
                x + 20.0,
                y + 4.0
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn counts(pairs: &[(&str, u64)]) -> CountsFile {
        let counts: BTreeMap<String, u64> = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        CountsFile {
            shots: counts.values().sum(),
            counts,
            config_hash: String::new(),
            seed: 0,
        }
    }

    #[test]
    fn histogram_bars() {
        let optima: BTreeSet<String> = ["00011".to_string(), "11100".to_string()].into();
        let svg = plot_histogram(&counts(&[("11100", 488), ("00011", 512)]), &optima);
        assert_eq!(svg.matches("class=\"bar optimum\"").count(), 2);
        let first = svg.find("data-bitstring=\"00011\"").unwrap();
        let second = svg.find("data-bitstring=\"11100\"").unwrap();
        assert!(first < second);
        let svg = plot_histogram(&counts(&[("00000", 3), ("00011", 5), ("01010", 2)]), &optima);
        assert_eq!(svg.matches("<rect class=\"bar").count(), 3);
        assert_eq!(svg.matches("class=\"bar optimum\"").count(), 1);
    }

    #[test]
    fn trace_polylines() {
        let table = TraceTable {
            p: 5,
            rows: (0..10).map(|i| (i, -3.0 - 0.1 * i as f64, vec![0.1 * i as f64; 10])).collect(),
        };
        let svg = plot_trace(&table, Series::Energy);
        assert_eq!(svg.matches("<polyline").count(), 1);
        let svg = plot_trace(&table, Series::Params);
        assert_eq!(svg.matches("<polyline").count(), 10);
        assert!(svg.contains(">gamma_5<"));
    }

    #[test]
    fn series_names() {
        assert_eq!("energy".parse::<Series>().unwrap(), Series::Energy);
        assert!("loss".parse::<Series>().is_err());
    }
}

//! Adams charts: per-bidegree class counts with h0/h1/h2 product lines,
//! written as TSV, JSON or SVG.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resolution::{ClassLift, FreeResolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartWindow {
    pub stem_min: i32,
    pub stem_max: i32,
    pub s_max: u32,
}

impl ChartWindow {
    pub fn is_empty(&self) -> bool {
        self.stem_min > self.stem_max
    }

    pub fn contains(&self, stem: i32, s: u32) -> bool {
        stem >= self.stem_min && stem <= self.stem_max && s <= self.s_max
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartEntry {
    pub stem: i32,
    pub filtration: u32,
    pub count: usize,
    pub labels: Vec<String>,
}

/// Multiplication by `h_i` from one generator to another.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChartLine {
    pub h: u32,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub window: ChartWindow,
    pub entries: Vec<ChartEntry>,
    pub lines: Vec<ChartLine>,
}

/// Generator counts and labels of `r` inside `window`, without product lines.
pub fn to_table(r: &FreeResolution, window: ChartWindow) -> Chart {
    let mut entries = Vec::new();
    if !window.is_empty() {
        for stem in window.stem_min..=window.stem_max {
            for s in 0..=window.s_max.min(r.s_max()) {
                let t = stem + s as i32;
                let count = r.num_gens(s, t);
                if count > 0 {
                    entries.push(ChartEntry {
                        stem,
                        filtration: s,
                        count,
                        labels: r.labels(s, t),
                    });
                }
            }
        }
    }
    Chart {
        window,
        entries,
        lines: Vec::new(),
    }
}

/// Adds h0, h1 and h2 lines computed by Yoneda products with classes of `sphere`.
/// Products that leave the resolution's window are skipped.
pub fn add_product_lines(chart: &mut Chart, r: &FreeResolution, sphere: &FreeResolution) -> Result<()> {
    let mut lines = Vec::new();
    let hs: Vec<_> = (0..3)
        .filter(|&i| sphere.contains(1, 1 << i) && sphere.num_gens(1, 1 << i) == 1)
        .map(|i| (i, sphere.basis_class(1, 1 << i, 0)))
        .collect();
    for e in &chart.entries {
        let s = e.filtration;
        if s + 1 > r.s_max() {
            continue;
        }
        let t = e.stem + s as i32;
        for i in 0..e.count {
            let x = r.basis_class(s, t, i)?;
            let lift = ClassLift::new(r, &x, sphere, 1)?;
            for (h, class) in &hs {
                let class = class.clone()?;
                if t + class.t > r.t_max() {
                    continue;
                }
                let p = lift.multiply(&class)?;
                for j in p.coords.iter_ones() {
                    lines.push(ChartLine {
                        h: *h,
                        from: e.labels[i].clone(),
                        to: format!("g{}_{}_{}", p.s, p.t, j),
                    });
                }
            }
        }
    }
    lines.sort();
    chart.lines = lines;
    Ok(())
}

impl Chart {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chart serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Chart> {
        Ok(serde_json::from_str(s)?)
    }

    /// Tab-separated table: `stem, filtration, count, labels`. The window and
    /// product lines are kept in `#` comment rows so the table parses back.
    pub fn to_tsv(&self) -> String {
        let w = self.window;
        let mut out = String::new();
        let _ = writeln!(out, "# window\t{}\t{}\t{}", w.stem_min, w.stem_max, w.s_max);
        out.push_str("stem\tfiltration\tcount\tlabels\n");
        for e in &self.entries {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", e.stem, e.filtration, e.count, e.labels.join(";"));
        }
        for l in &self.lines {
            let _ = writeln!(out, "# h{}\t{}\t{}", l.h, l.from, l.to);
        }
        out
    }

    pub fn from_tsv(s: &str) -> Result<Chart> {
        let bad = |line: &str| Error::Parse(format!("bad chart row {line:?}"));
        let mut window = None;
        let mut entries = Vec::new();
        let mut lines = Vec::new();
        let mut saw_header = false;
        for line in s.lines() {
            if let Some(rest) = line.strip_prefix("# ") {
                let cols: Vec<&str> = rest.split('\t').collect();
                match cols.as_slice() {
                    ["window", a, b, c] => {
                        window = Some(ChartWindow {
                            stem_min: a.parse().map_err(|_| bad(line))?,
                            stem_max: b.parse().map_err(|_| bad(line))?,
                            s_max: c.parse().map_err(|_| bad(line))?,
                        });
                    }
                    [h, from, to] if h.starts_with('h') => lines.push(ChartLine {
                        h: h[1..].parse().map_err(|_| bad(line))?,
                        from: from.to_string(),
                        to: to.to_string(),
                    }),
                    _ => return Err(bad(line)),
                }
                continue;
            }
            if line == "stem\tfiltration\tcount\tlabels" {
                saw_header = true;
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [stem, filt, count, labels] = cols.as_slice() else {
                return Err(bad(line));
            };
            let labels: Vec<String> = if labels.is_empty() {
                Vec::new()
            } else {
                labels.split(';').map(str::to_string).collect()
            };
            let count: usize = count.parse().map_err(|_| bad(line))?;
            if labels.len() != count {
                return Err(bad(line));
            }
            entries.push(ChartEntry {
                stem: stem.parse().map_err(|_| bad(line))?,
                filtration: filt.parse().map_err(|_| bad(line))?,
                count,
                labels,
            });
        }
        if !saw_header {
            return Err(Error::Parse("chart table has no header row".into()));
        }
        let window = window.ok_or_else(|| Error::Parse("chart table has no window row".into()))?;
        Ok(Chart { window, entries, lines })
    }

    fn position_of(&self, label: &str) -> Option<(i32, u32, usize, usize)> {
        self.entries.iter().find_map(|e| {
            e.labels
                .iter()
                .position(|l| l == label)
                .map(|i| (e.stem, e.filtration, i, e.count))
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SvgOptions {
    /// Pixels per unit on both axes.
    pub cell: u32,
    pub margin: u32,
    pub dot_radius: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            cell: 24,
            margin: 32,
            dot_radius: 3.0,
        }
    }
}

/// An SVG 1.1 rendering: stems across, filtration up. Several classes in one
/// bidegree are spread horizontally.
pub fn render_svg(c: &Chart, opts: &SvgOptions) -> String {
    let w = c.window;
    let (stem_min, stem_max) = if w.is_empty() { (0, 0) } else { (w.stem_min, w.stem_max) };
    let cols = (stem_max - stem_min) as u32 + 1;
    let rows = w.s_max + 1;
    let cell = opts.cell as f64;
    let margin = opts.margin as f64;
    let width = margin * 2.0 + cell * cols as f64;
    let height = margin * 2.0 + cell * rows as f64;
    let x_of = |stem: i32| margin + cell * ((stem - stem_min) as f64 + 0.5);
    let y_of = |s: u32| height - margin - cell * (s as f64 + 0.5);
    let spread = |i: usize, n: usize| (i as f64 - (n as f64 - 1.0) / 2.0) * opts.dot_radius * 2.2;
    let point = |stem: i32, s: u32, i: usize, n: usize| (x_of(stem) + spread(i, n), y_of(s));

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str("<g stroke=\"#999\" stroke-width=\"1\">\n");
    let _ = writeln!(
        out,
        "<line x1=\"{margin}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
        height - margin,
        width - margin,
        height - margin
    );
    let _ = writeln!(out, "<line x1=\"{margin}\" y1=\"{margin}\" x2=\"{margin}\" y2=\"{}\"/>", height - margin);
    out.push_str("</g>\n");
    out.push_str("<g font-family=\"monospace\" font-size=\"10\" fill=\"#333\" text-anchor=\"middle\">\n");
    for stem in stem_min..=stem_max {
        let _ = writeln!(out, "<text x=\"{}\" y=\"{}\">{stem}</text>", x_of(stem), height - margin + 14.0);
    }
    for s in 0..rows {
        let _ = writeln!(out, "<text x=\"{}\" y=\"{}\">{s}</text>", margin - 12.0, y_of(s) + 3.0);
    }
    out.push_str("</g>\n");

    out.push_str("<g stroke=\"black\" stroke-width=\"1.2\">\n");
    for l in &c.lines {
        let (Some(a), Some(b)) = (c.position_of(&l.from), c.position_of(&l.to)) else {
            continue;
        };
        let (x1, y1) = point(a.0, a.1, a.2, a.3);
        let (x2, y2) = point(b.0, b.1, b.2, b.3);
        let dash = if l.h == 2 { " stroke-dasharray=\"3,2\"" } else { "" };
        let _ = writeln!(
            out,
            "<line class=\"h{}\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"{dash}/>",
            l.h
        );
    }
    out.push_str("</g>\n");

    out.push_str("<g fill=\"black\">\n");
    for e in &c.entries {
        for i in 0..e.count {
            let (x, y) = point(e.stem, e.filtration, i, e.count);
            let _ = writeln!(
                out,
                "<circle cx=\"{x}\" cy=\"{y}\" r=\"{}\"><title>{}</title></circle>",
                opts.dot_radius, e.labels[i]
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

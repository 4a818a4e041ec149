use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::CliError;

/// Values below this are drawn at `log10(CHI_FLOOR)`.
pub const CHI_FLOOR: f64 = 1e-12;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

const OPTIONAL: [&str; 3] = ["chi_vis_low", "chi_vis_high", "chi_exp"];

fn colour(column: &str) -> &'static str {
    match column {
        "chi_switch" => "#1f77b4",
        "chi_classical" => "#2ca02c",
        "chi_vis_low" | "chi_vis_high" => "#ff7f0e",
        _ => "#d62728",
    }
}

/// A parsed sweep table: column names and rows in file order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Parses a sweep CSV. Errors carry `(row, message)`, header = row 1.
pub fn parse_sweep(text: &str) -> Result<SweepTable, (usize, String)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| (1, e.to_string()))?.clone();
    let columns: Vec<String> = header.iter().map(str::to_owned).collect();
    if columns.len() < 3 || columns[..3] != ["q", "chi_switch", "chi_classical"] {
        return Err((
            1,
            "header must start with q,chi_switch,chi_classical".into(),
        ));
    }
    for extra in &columns[3..] {
        if !OPTIONAL.contains(&extra.as_str()) {
            return Err((1, format!("unknown column '{extra}'")));
        }
    }
    let has_low = columns.iter().any(|c| c == "chi_vis_low");
    let has_high = columns.iter().any(|c| c == "chi_vis_high");
    if has_low != has_high {
        return Err((
            1,
            "chi_vis_low and chi_vis_high must appear together".into(),
        ));
    }

    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| (line, e.to_string()))?;
        if record.len() != columns.len() {
            return Err((
                line,
                format!("expected {} fields, found {}", columns.len(), record.len()),
            ));
        }
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| (line, format!("'{f}' is not a finite number")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() < 2 {
        return Err((
            0,
            format!("need at least 2 data rows, found {}", rows.len()),
        ));
    }
    Ok(SweepTable { columns, rows })
}

fn log_chi(v: f64) -> f64 {
    v.max(CHI_FLOOR).log10()
}

/// Maps data coordinates to the SVG canvas.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub q_min: f64,
    pub q_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Frame {
    pub fn x(&self, q: f64) -> f64 {
        LEFT + (q - self.q_min) / (self.q_max - self.q_min) * (WIDTH - LEFT - RIGHT)
    }

    pub fn y(&self, log_chi: f64) -> f64 {
        TOP + (self.y_max - log_chi) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }

    /// Inverse of [`Frame::x`].
    pub fn q_at(&self, x: f64) -> f64 {
        self.q_min + (x - LEFT) / (WIDTH - LEFT - RIGHT) * (self.q_max - self.q_min)
    }
}

fn frame_for(table: &SweepTable) -> Frame {
    let q = table.column("q").expect("validated header");
    let (q_min, q_max) = q
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let logs = table
        .rows
        .iter()
        .flat_map(|r| r[1..].iter().map(|&v| log_chi(v)));
    let (lo, hi) = logs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let (y_min, mut y_max) = (lo.floor(), hi.ceil());
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }
    Frame {
        q_min,
        q_max: if q_max > q_min { q_max } else { q_min + 1.0 },
        y_min,
        y_max,
    }
}

fn points(frame: &Frame, q: &[f64], v: &[f64]) -> Vec<String> {
    q.iter()
        .zip(v)
        .map(|(&q, &v)| format!("{:.3},{:.3}", frame.x(q), frame.y(log_chi(v))))
        .collect()
}

/// Renders the table as a self-contained SVG document.
pub fn render_svg(table: &SweepTable) -> String {
    let frame = frame_for(table);
    let q = table.column("q").expect("validated header");
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        svg,
        r#"<rect class="frame" x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    for k in 0..=5 {
        let qv = frame.q_min + (frame.q_max - frame.q_min) * k as f64 / 5.0;
        let x = frame.x(qv);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.3}" y1="{y1}" x2="{x:.3}" y2="{:.3}" stroke="black"/><text x="{x:.3}" y="{:.3}" text-anchor="middle">{qv:.2}</text>"#,
            y1 + 5.0,
            y1 + 20.0
        );
    }
    let mut decade = frame.y_min;
    while decade <= frame.y_max {
        let y = frame.y(decade);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.3}" y1="{y:.3}" x2="{x0}" y2="{y:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" text-anchor="end">1e{decade}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
        decade += 1.0;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">q</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{:.3}" text-anchor="middle" transform="rotate(-90 15 {:.3})">chi (bits, log scale)</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    if let (Some(lo), Some(hi)) = (table.column("chi_vis_low"), table.column("chi_vis_high")) {
        let mut outline = points(&frame, &q, &hi);
        let rq: Vec<f64> = q.iter().rev().copied().collect();
        let rlo: Vec<f64> = lo.iter().rev().copied().collect();
        outline.extend(points(&frame, &rq, &rlo));
        let _ = writeln!(
            svg,
            r#"<polygon class="band" fill="{}" fill-opacity="0.3" stroke="none" points="{}"/>"#,
            colour("chi_vis_low"),
            outline.join(" ")
        );
    }

    for (k, name) in table.columns.iter().enumerate().skip(1) {
        let v = table.column(name).expect("column exists");
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-column="{name}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            colour(name),
            points(&frame, &q, &v).join(" ")
        );
        if name == "chi_exp" {
            for p in points(&frame, &q, &v) {
                let (x, y) = p.split_once(',').expect("formatted pair");
                let _ = writeln!(
                    svg,
                    r#"<circle class="point" cx="{x}" cy="{y}" r="2.5" fill="{}"/>"#,
                    colour(name)
                );
            }
        }
        let ly = TOP + 15.0 + 18.0 * (k - 1) as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.3}" y1="{ly:.3}" x2="{:.3}" y2="{ly:.3}" stroke="{}" stroke-width="2"/><text x="{:.3}" y="{:.3}">{name}</text>"#,
            x1 + 15.0,
            x1 + 40.0,
            colour(name),
            x1 + 46.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn cmd_plot(input: &Path, output: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
    let table = parse_sweep(&text).map_err(|(row, message)| CliError::Parse {
        path: input.to_path_buf(),
        row,
        message,
    })?;
    fs::write(output, render_svg(&table)).map_err(|e| CliError::io(output, e))
}

//! CSV and standalone SVG renderings of summary data.

use std::fmt::Write;

use super::summary::SummaryData;

/// 16-step ramp from dark blue (low f) through teal and yellow-green to
/// yellow (high f).
pub const COLOR_RAMP: [&str; 16] = [
    "#30123b", "#3e378f", "#4559cb", "#4779ed", "#3e9bfe", "#27bbe6", "#18d6c8", "#2ceba2",
    "#61fb6c", "#93fe41", "#b9f234", "#dbdd37", "#f7c13a", "#fc9b2d", "#f06a1b", "#d63c0b",
];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// `y1[,y2],f,<parameter columns>` with shortest round-trip floats.
pub fn summary_csv(data: &SummaryData) -> String {
    let mut out = String::new();
    let ys: Vec<String> = (1..=data.n).map(|j| format!("y{j}")).collect();
    let _ = writeln!(out, "{},f,{}", ys.join(","), data.parameters.join(","));
    for r in &data.rows {
        let cells: Vec<String> =
            r.y.iter()
                .chain(std::iter::once(&r.f))
                .chain(&r.x_physical)
                .map(|v| format!("{v:?}"))
                .collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
        (a.min(x), b.max(x))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn scale(v: f64, (lo, hi): (f64, f64), a: f64, b: f64) -> f64 {
    a + (v - lo) / (hi - lo) * (b - a)
}

/// Color bin of `v` in `[lo, hi]`.
pub fn ramp_index(v: f64, (lo, hi): (f64, f64)) -> usize {
    (((v - lo) / (hi - lo) * 16.0).floor() as isize).clamp(0, 15) as usize
}

/// Scatter of `y1` against `f` (n = 1) or of `(y1, y2)` colored by `f` (n = 2).
pub fn summary_svg(data: &SummaryData, title: &str) -> String {
    let fr = range(data.rows.iter().map(|r| r.f));
    let xr = range(data.rows.iter().map(|r| r.y[0]));
    let (yr, ylabel) = if data.n >= 2 {
        (range(data.rows.iter().map(|r| r.y[1])), "y2")
    } else {
        (fr, "f")
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        s,
        "<!-- color ramp (16 equal bins of f from {:?} to {:?}, low to high): {} -->",
        fr.0,
        fr.1,
        COLOR_RAMP.join(" ")
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        "<rect x=\"{x0}\" y=\"{y1}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        x1 - x0,
        y0 - y1
    );
    for (x, y, anchor, text) in [
        (x0, y0 + 20.0, "start", format!("{:.4}", xr.0)),
        (x1, y0 + 20.0, "end", format!("{:.4}", xr.1)),
        ((x0 + x1) / 2.0, y0 + 40.0, "middle", "y1".to_string()),
        (x0 - 8.0, y0, "end", format!("{:.4}", yr.0)),
        (x0 - 8.0, y1 + 10.0, "end", format!("{:.4}", yr.1)),
        (x0 - 8.0, (y0 + y1) / 2.0, "end", ylabel.to_string()),
    ] {
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"12\">{text}</text>"
        );
    }
    for r in &data.rows {
        let px = scale(r.y[0], xr, x0, x1);
        let (py, color) = if data.n >= 2 {
            (scale(r.y[1], yr, y0, y1), COLOR_RAMP[ramp_index(r.f, fr)])
        } else {
            (scale(r.f, fr, y0, y1), "#3e378f")
        };
        let _ = writeln!(
            s,
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"2.5\" fill=\"{color}\"/>"
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::summary::SummaryRow;

    fn data(n: usize) -> SummaryData {
        SummaryData {
            n,
            parameters: vec!["a".into(), "b".into()],
            provenance: "test".into(),
            rows: (0..3)
                .map(|i| SummaryRow {
                    y: vec![i as f64; n],
                    f: 0.5 * i as f64,
                    x_normalized: vec![0.0, 0.0],
                    x_physical: vec![1.0, 2.0],
                })
                .collect(),
        }
    }

    #[test]
    fn csv_layout() {
        let csv = summary_csv(&data(2));
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("y1,y2,f,a,b"));
        assert_eq!(lines.next(), Some("0.0,0.0,0.0,1.0,2.0"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn svg_has_points_and_ramp() {
        let svg = summary_svg(&data(2), "t<1>");
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains(COLOR_RAMP[0]) && svg.contains(COLOR_RAMP[15]));
        assert!(svg.contains("t&lt;1&gt;"));
        assert_eq!(ramp_index(1.0, (0.0, 1.0)), 15);
        assert_eq!(ramp_index(0.0, (0.0, 1.0)), 0);
    }
}

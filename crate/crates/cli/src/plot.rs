//! Static SVG line charts of `||T^n||` against the ceilings, log-log axes.

use std::fmt::Write as _;

use anyhow::{bail, Result};

use crate::UsageError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

/// Columns drawn: `norm_upper` and every `ceiling_*`; any other numeric
/// column except `n`, `margin_*` and `log_*` when neither is present.
fn select(headers: &[String]) -> Vec<usize> {
    let preferred: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| *h == "norm_upper" || h.starts_with("ceiling_"))
        .map(|(i, _)| i)
        .collect();
    if !preferred.is_empty() {
        return preferred;
    }
    headers
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, h)| !h.starts_with("margin_") && !h.starts_with("log_"))
        .map(|(i, _)| i)
        .collect()
}

fn read(text: &str) -> Result<Vec<Series>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if headers.first().map(String::as_str) != Some("n") {
        return Err(UsageError("plot input must start with an `n` column".into()).into());
    }
    let cols = select(&headers);
    let mut series: Vec<Series> = cols
        .iter()
        .map(|&i| Series {
            name: headers[i].clone(),
            points: Vec::new(),
        })
        .collect();
    for rec in rdr.records() {
        let rec = rec?;
        let Ok(n) = rec[0].parse::<f64>() else {
            bail!("non-numeric n `{}`", &rec[0]);
        };
        for (s, &i) in series.iter_mut().zip(&cols) {
            // Log axes: zero and non-finite values are skipped.
            if let Ok(v) = rec[i].parse::<f64>() {
                if n > 0.0 && v > 0.0 && v.is_finite() {
                    s.points.push((n, v));
                }
            }
        }
    }
    Ok(series.into_iter().filter(|s| !s.points.is_empty()).collect())
}

fn bounds(series: &[Series], pick: impl Fn(&(f64, f64)) -> f64) -> (f64, f64) {
    let (lo, hi) = series
        .iter()
        .flat_map(|s| s.points.iter().map(&pick))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (lo, hi) = (lo.log10().floor(), hi.log10().ceil());
    (lo, if hi > lo { hi } else { lo + 1.0 })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_csv(text: &str, title: &str) -> Result<String> {
    let series = read(text)?;
    if series.is_empty() {
        return Err(UsageError("plot input has no positive data".into()).into());
    }
    let (x0, x1) = bounds(&series, |p| p.0);
    let (y0, y1) = bounds(&series, |p| p.1);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x.log10() - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y.log10() - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );
    for e in x0 as i32..=x1 as i32 {
        let x = sx(10f64.powi(e));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{e}</text>"##,
            TOP + ph,
            TOP + ph + 18.0
        );
    }
    for e in y0 as i32..=y1 as i32 {
        let y = sy(10f64.powi(e));
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    for (k, ser) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = LEFT + pw + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_csv_draws_norm_and_ceilings() {
        let csv = "n,norm_lower,norm_upper,ceiling_kreiss,margin_kreiss\n1,1,1,5.4,5.4\n10,1,1,29.9,29.9\n";
        let svg = render_csv(csv, "t").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("ceiling_kreiss") && !svg.contains(">margin_kreiss<"));
    }

    #[test]
    fn zero_rows_are_skipped_and_empty_input_rejected() {
        let csv = "n,norm_lower,norm_upper,log_lower,log_upper\n1,2,2,0.69,0.69\n2,0,0,-inf,-inf\n";
        let svg = render_csv(csv, "t").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(render_csv("n,norm_upper\n1,0\n", "t").is_err());
        assert!(render_csv("x,y\n1,1\n", "t").is_err());
    }
}

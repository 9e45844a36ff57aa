//! Grayscale success-fraction heatmaps with the theoretical curve overlaid.
//! Pure presentation: the SVG never feeds back into any data output.

use phasetrans::montecarlo::SuccessGrid;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 56.0;

struct Scale {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

/// Half-open cell edges around non-uniformly spaced axis values.
fn edges(values: &[usize]) -> Vec<f64> {
    let v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
    if v.len() == 1 {
        return vec![v[0] - 0.5, v[0] + 0.5];
    }
    let mut e = Vec::with_capacity(v.len() + 1);
    e.push(v[0] - (v[1] - v[0]) / 2.0);
    for w in v.windows(2) {
        e.push((w[0] + w[1]) / 2.0);
    }
    e.push(v[v.len() - 1] + (v[v.len() - 1] - v[v.len() - 2]) / 2.0);
    e
}

/// Renders the grid as a grayscale heatmap (white = always recovered) with
/// the theoretical transition curve drawn on top.
pub fn render_heatmap(grid: &SuccessGrid, curve: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    let xe = edges(&grid.sparsities);
    let ye = edges(&grid.measurement_counts);
    let xs = Scale { lo: xe[0], hi: xe[xe.len() - 1], px_lo: MARGIN_L, px_hi: WIDTH - MARGIN_R };
    // y grows upward
    let ys = Scale { lo: ye[0], hi: ye[ye.len() - 1], px_lo: HEIGHT - MARGIN_B, px_hi: MARGIN_T };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        title
    ));

    for (si, _) in grid.sparsities.iter().enumerate() {
        for (ni, _) in grid.measurement_counts.iter().enumerate() {
            let shade = (grid.fraction(si, ni) * 255.0).round() as u8;
            let x0 = xs.map(xe[si]);
            let x1 = xs.map(xe[si + 1]);
            let y0 = ys.map(ye[ni + 1]);
            let y1 = ys.map(ye[ni]);
            svg.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({shade},{shade},{shade})\"/>\n",
                x0,
                y0,
                x1 - x0,
                y1 - y0
            ));
        }
    }

    // theoretical curve, clipped to the plot box
    let points: Vec<String> = curve
        .iter()
        .filter(|(s, n)| *s >= xs.lo && *s <= xs.hi && *n >= ys.lo && *n <= ys.hi)
        .map(|(s, n)| format!("{:.2},{:.2}", xs.map(*s), ys.map(*n)))
        .collect();
    if points.len() >= 2 {
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.8\"/>\n",
            points.join(" ")
        ));
    }

    // frame and tick labels
    svg.push_str(&format!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>\n",
        MARGIN_L,
        MARGIN_T,
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    ));
    let x_tick_stride = (grid.sparsities.len() / 12).max(1);
    for (i, &s) in grid.sparsities.iter().enumerate() {
        if i % x_tick_stride != 0 {
            continue;
        }
        let x = xs.map(s as f64);
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{s}</text>\n",
            HEIGHT - MARGIN_B + 16.0
        ));
    }
    let y_tick_stride = (grid.measurement_counts.len() / 12).max(1);
    for (i, &n) in grid.measurement_counts.iter().enumerate() {
        if i % y_tick_stride != 0 {
            continue;
        }
        let y = ys.map(n as f64);
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{n}</text>\n",
            MARGIN_L - 8.0,
            y + 4.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 14.0,
        x_label
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        y_label
    ));
    svg.push_str("</svg>\n");
    svg
}

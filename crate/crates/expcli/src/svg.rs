//! Hand-rolled SVG histograms: 640x480, 61 bins over [-4, 4], with a
//! Gaussian density overlay. Fixed float formatting keeps output
//! byte-identical across runs.

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 480.0;
pub const BINS: usize = 61;
pub const RANGE: (f64, f64) = (-4.0, 4.0);

const MARGIN_L: f64 = 50.0;
const MARGIN_R: f64 = 15.0;
const MARGIN_T: f64 = 25.0;
const MARGIN_B: f64 = 40.0;

/// Render a histogram of `values` with a centered-Gaussian overlay of the
/// given variance.
pub fn histogram(values: &[f64], variance: f64, title: &str) -> String {
    let (lo, hi) = RANGE;
    let bw = (hi - lo) / BINS as f64;
    let mut counts = [0u64; BINS];
    for &v in values {
        if v >= lo && v < hi {
            counts[((v - lo) / bw) as usize] += 1;
        }
    }
    let n = values.len().max(1) as f64;
    let density: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * bw)).collect();

    let pdf = |x: f64| (-(x * x) / (2.0 * variance)).exp()
        / (std::f64::consts::TAU * variance).sqrt();
    let peak = pdf(0.0);
    let ymax = density.iter().cloned().fold(peak, f64::max) * 1.08;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - lo) / (hi - lo) * plot_w;
    let sy = |y: f64| MARGIN_T + (1.0 - y / ymax) * plot_h;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"16\" font-family=\"monospace\" font-size=\"13\">{}</text>\n",
        MARGIN_L, title
    ));

    // bars
    for (k, &d) in density.iter().enumerate() {
        if d <= 0.0 {
            continue;
        }
        let x0 = sx(lo + k as f64 * bw);
        let y0 = sy(d);
        let h = sy(0.0) - y0;
        s.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#7aa6c2\" stroke=\"#39607a\" stroke-width=\"0.5\"/>\n",
            x0,
            y0,
            plot_w / BINS as f64,
            h
        ));
    }

    // Gaussian overlay polyline
    let mut pts = String::new();
    for k in 0..=200 {
        let x = lo + (hi - lo) * k as f64 / 200.0;
        if k > 0 {
            pts.push(' ');
        }
        pts.push_str(&format!("{:.2},{:.2}", sx(x), sy(pdf(x))));
    }
    s.push_str(&format!(
        "<polyline points=\"{pts}\" fill=\"none\" stroke=\"#b03030\" stroke-width=\"1.5\"/>\n"
    ));

    // axes
    s.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_L,
        sy(0.0),
        WIDTH - MARGIN_R,
        sy(0.0)
    ));
    s.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_L,
        MARGIN_T,
        MARGIN_L,
        sy(0.0)
    ));
    for t in -4..=4 {
        let x = sx(t as f64);
        s.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            sy(0.0),
            sy(0.0) + 4.0
        ));
        s.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{t}</text>\n",
            sy(0.0) + 16.0
        ));
    }
    // y ticks at 0 and ymax-rounded
    for frac in [0.0f64, 0.5, 1.0] {
        let yval = ymax * frac;
        let y = sy(yval);
        s.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"black\"/>\n",
            MARGIN_L - 4.0,
            MARGIN_L
        ));
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{:.3}</text>\n",
            MARGIN_L - 7.0,
            y + 4.0,
            yval
        ));
    }
    s.push_str("</svg>\n");
    s
}

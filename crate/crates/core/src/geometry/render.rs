//! SVG and CSV output for point clouds.

use std::fmt::Write as _;
use std::io::Write;

use super::cloud::PointCloud;

/// One plot: planar points with letter tags.
#[derive(Clone, Debug, Default)]
pub struct Panel {
    pub title: String,
    pub points: Vec<[f64; 2]>,
    pub tags: Vec<usize>,
    /// Same scale on both axes.
    pub equal_aspect: bool,
}

impl Panel {
    /// First two coordinates; one-dimensional clouds are spread vertically
    /// by letter so that the pieces stay visible.
    pub fn from_cloud(title: &str, cloud: &PointCloud) -> Self {
        Self::from_coords(title, cloud, |p| p.to_vec())
    }

    /// Points reduced modulo `Z^d`, a fundamental domain of the torus.
    pub fn torus_reduced(title: &str, cloud: &PointCloud) -> Self {
        Self::from_coords(title, cloud, |p| {
            p.iter().map(|x| x.rem_euclid(1.0)).collect()
        })
    }

    fn from_coords(title: &str, cloud: &PointCloud, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let planar = cloud.dim >= 2;
        let points = cloud
            .points()
            .zip(&cloud.tags)
            .map(|(p, &t)| {
                let q = f(p);
                if planar {
                    [q[0], q[1]]
                } else {
                    [q.first().copied().unwrap_or(0.0), -(t as f64)]
                }
            })
            .collect();
        Panel {
            title: title.to_string(),
            points,
            tags: cloud.tags.clone(),
            equal_aspect: planar,
        }
    }

    /// Graph `(x_0, y_0)` of a map between two clouds over the same worm.
    pub fn graph(title: &str, x: &PointCloud, y: &PointCloud) -> Self {
        let points = x
            .points()
            .zip(y.points())
            .map(|(p, q)| {
                [
                    p.first().copied().unwrap_or(0.0),
                    q.first().copied().unwrap_or(0.0),
                ]
            })
            .collect();
        Panel {
            title: title.to_string(),
            points,
            tags: x.tags.clone(),
            equal_aspect: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RenderConfig {
    /// Side of one panel in SVG user units.
    pub panel_size: f64,
    pub point_radius: f64,
    /// One color per letter; generated when empty or too short.
    pub colors: Vec<String>,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            panel_size: 600.0,
            point_radius: 0.8,
            colors: Vec::new(),
        }
    }
}

fn palette(n: usize, custom: &[String]) -> Vec<String> {
    if custom.len() >= n {
        return custom[..n].to_vec();
    }
    (0..n)
        .map(|i| format!("hsl({:.1},70%,45%)", 360.0 * i as f64 / n.max(1) as f64))
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Panels side by side, each autoscaled, one group per letter and a legend.
pub fn render_svg(panels: &[Panel], letters: &[String], cfg: &RenderConfig) -> String {
    let size = cfg.panel_size;
    let margin = 20.0;
    let title_h = 24.0;
    let legend_h = 20.0 * (letters.len().div_ceil(8)) as f64 + 10.0;
    let width = panels.len().max(1) as f64 * (size + margin) + margin;
    let height = title_h + size + 2.0 * margin + legend_h;
    let colors = palette(letters.len(), &cfg.colors);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, panel) in panels.iter().enumerate() {
        let x0 = margin + k as f64 * (size + margin);
        let y0 = margin + title_h;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14">{}</text>"#,
            x0,
            margin + 14.0,
            escape(&panel.title)
        );
        let (sx, sy, ox, oy) = scale(panel, size);
        for (a, color) in colors.iter().enumerate() {
            let _ = writeln!(out, r#"<g fill="{color}" class="letter-{a}">"#);
            for (p, _) in panel
                .points
                .iter()
                .zip(&panel.tags)
                .filter(|(_, &t)| t == a)
            {
                let cx = x0 + (p[0] - ox) * sx;
                let cy = y0 + size - (p[1] - oy) * sy;
                let _ = writeln!(
                    out,
                    r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}"/>"#,
                    cfg.point_radius
                );
            }
            let _ = writeln!(out, "</g>");
        }
    }
    let ly = margin + title_h + size + margin;
    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="12">"#);
    for (a, name) in letters.iter().enumerate() {
        let lx = margin + (a % 8) as f64 * 70.0;
        let y = ly + (a / 8) as f64 * 20.0;
        let _ = writeln!(
            out,
            r#"<rect x="{lx:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            y,
            colors[a],
            lx + 14.0,
            y + 10.0,
            escape(name)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

/// `(scale_x, scale_y, min_x, min_y)` mapping the panel's bounding box into
/// a `size × size` square.
fn scale(panel: &Panel, size: f64) -> (f64, f64, f64, f64) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in &panel.points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if panel.points.is_empty() {
        return (1.0, 1.0, 0.0, 0.0);
    }
    let span = |k: usize| if hi[k] > lo[k] { hi[k] - lo[k] } else { 1.0 };
    let (mut sx, mut sy) = (size / span(0), size / span(1));
    if panel.equal_aspect {
        let s = sx.min(sy);
        sx = s;
        sy = s;
    }
    (sx, sy, lo[0], lo[1])
}

/// `x0,…,x{d-1},letter` with shortest round-trip float formatting.
pub fn write_csv<W: Write>(cloud: &PointCloud, mut w: W) -> std::io::Result<()> {
    let header: Vec<String> = (0..cloud.dim)
        .map(|k| format!("x{k}"))
        .chain(["letter".to_string()])
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for (p, &t) in cloud.points().zip(&cloud.tags) {
        for x in p {
            write!(w, "{x},")?;
        }
        let name = &cloud.letters[t];
        if name.contains('"') {
            writeln!(w, "\"{}\"", name.replace('"', "\"\""))?;
        } else {
            writeln!(w, "{name}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_cloud() -> PointCloud {
        PointCloud {
            dim: 2,
            coords: vec![],
            tags: vec![],
            letters: vec!["a".into(), "b".into()],
            seed: None,
        }
    }

    #[test]
    fn empty_cloud_gives_valid_svg() {
        let c = empty_cloud();
        let svg = render_svg(
            &[Panel::from_cloud("empty", &c)],
            &c.letters,
            &RenderConfig::default(),
        );
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<g fill=").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 0);
    }

    #[test]
    fn csv_rows() {
        let c = PointCloud {
            dim: 1,
            coords: vec![0.0, 0.5],
            tags: vec![0, 1],
            letters: vec!["a".into(), "b".into()],
            seed: None,
        };
        let mut buf = Vec::new();
        write_csv(&c, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x0,letter\n0,a\n0.5,b\n");
    }
}

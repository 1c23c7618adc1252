//! SVG figures of polytope skeletons. Projections are computed exactly and
//! converted to f64 only for drawing.

use std::fmt::Write;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use polyforge::arith::{int, Scalar, Vector};
use polyforge::decomp::{skeleton, DecompError};
use polyforge::hull::VPolytope;
use thiserror::Error;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Projection {
    /// 1-based coordinate indices, two or three of them.
    Coords(Vec<usize>),
    /// Index into the hull's facet list.
    Schlegel(usize),
}

impl FromStr for Projection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let inner = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
        let nums = |body: &str| -> Result<Vec<usize>, String> {
            body.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad index {t:?} in {s:?}")))
                .collect()
        };
        if let Some(body) = inner("coords(") {
            Ok(Projection::Coords(nums(body)?))
        } else if let Some(body) = inner("schlegel(") {
            match nums(body)?.as_slice() {
                [f] => Ok(Projection::Schlegel(*f)),
                _ => Err(format!("schlegel takes one facet index: {s:?}")),
            }
        } else {
            Err(format!("unknown projection {s:?}; expected coords(i,j,k) or schlegel(f)"))
        }
    }
}

#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub projection: Projection,
    pub stroke: String,
    pub labels: bool,
}

impl RenderSpec {
    pub fn new(projection: Projection) -> Self {
        RenderSpec {
            projection,
            stroke: "#333".into(),
            labels: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("invalid projection: {0}")]
    Projection(String),
    #[error(transparent)]
    Decomp(#[from] DecompError),
}

pub fn render_svg(p: &VPolytope, spec: &RenderSpec) -> Result<String, RenderError> {
    let d = p.dim;
    let sk = skeleton(p)?;
    let g = &sk.graph;
    let flat: Vec<Vec<f64>> = match &spec.projection {
        Projection::Coords(idx) => {
            if !(2..=3).contains(&idx.len()) {
                return Err(RenderError::Projection("coords needs two or three indices".into()));
            }
            if idx.iter().any(|&i| i == 0 || i > d) {
                return Err(RenderError::Projection(format!("indices must lie in 1..={d}")));
            }
            if (1..idx.len()).any(|k| idx[..k].contains(&idx[k])) {
                return Err(RenderError::Projection("indices must be distinct".into()));
            }
            g.points.iter().map(|x| idx.iter().map(|&i| to_f64(&x[i - 1])).collect()).collect()
        }
        Projection::Schlegel(f) => {
            let facets = &sk.hull.hpoly.facets;
            let Some(facet) = facets.get(*f) else {
                return Err(RenderError::Projection(format!("facet {f} out of range ({} facets)", facets.len())));
            };
            let on_facet: Vec<&Vector> = sk.hull.incidence.facets[*f].ones().map(|i| &g.points[i]).collect();
            let z = viewpoint(facets, *f, &on_facet)?;
            // Drop a coordinate along which the facet hyperplane is a graph.
            let drop = facet.normal.0.iter().position(|c| !c.is_zero()).expect("nonzero normal");
            g.points
                .iter()
                .map(|v| {
                    let dir = v - &z;
                    let lambda = (&facet.offset - facet.normal.dot(&z)) / facet.normal.dot(&dir);
                    let x = z.add_scaled(&lambda, &dir);
                    (0..d).filter(|&j| j != drop).take(3).map(|j| to_f64(&x[j])).collect()
                })
                .collect()
        }
    };
    let planar: Vec<(f64, f64)> = flat.iter().map(|c| oblique(c)).collect();
    Ok(svg(&planar, &g.labels, g.edges.iter().copied(), spec))
}

/// Facet centroid pushed outward until it lies beyond that facet only.
fn viewpoint(
    facets: &[polyforge::arith::Hyperplane],
    f: usize,
    on_facet: &[&Vector],
) -> Result<Vector, RenderError> {
    let d = facets[f].dim();
    let mut c = Vector::zeros(d);
    for x in on_facet {
        c = &c + *x;
    }
    let c = c.scale(&(Scalar::one() / int(on_facet.len() as i64)));
    let normal = &facets[f].normal;
    let max_abs = normal.0.iter().map(|a| a.abs()).max().expect("nonzero normal");
    let outward = normal.scale(&(-Scalar::one() / max_abs));
    let mut t = Scalar::one();
    for _ in 0..64 {
        let z = c.add_scaled(&t, &outward);
        let beyond = facets[f].slack(&z).is_negative();
        if beyond && facets.iter().enumerate().all(|(i, h)| i == f || h.slack(&z).is_positive()) {
            return Ok(z);
        }
        t /= int(2);
    }
    Err(RenderError::Projection("no viewpoint beyond the facet found".into()))
}

fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

/// Cabinet projection of up to three coordinates onto the page.
fn oblique(c: &[f64]) -> (f64, f64) {
    let (x, y) = (c.first().copied().unwrap_or(0.0), c.get(1).copied().unwrap_or(0.0));
    let z = c.get(2).copied().unwrap_or(0.0);
    let (s, k) = (std::f64::consts::FRAC_PI_6.sin(), std::f64::consts::FRAC_PI_6.cos());
    (x + 0.5 * z * k, y + 0.5 * z * s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn svg(pts: &[(f64, f64)], labels: &[String], edges: impl Iterator<Item = (usize, usize)>, spec: &RenderSpec) -> String {
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        lo_x = lo_x.min(x);
        lo_y = lo_y.min(y);
        hi_x = hi_x.max(x);
        hi_y = hi_y.max(y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y);
    let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
    let page = |(x, y): (f64, f64)| (MARGIN + (x - lo_x) * scale, SIZE - MARGIN - (y - lo_y) * scale);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let stroke = escape(&spec.stroke);
    let _ = writeln!(out, r#"<g stroke="{stroke}" stroke-width="1.5">"#);
    for (a, b) in edges {
        let ((x1, y1), (x2, y2)) = (page(pts[a]), page(pts[b]));
        let _ = writeln!(out, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g fill="#fff" stroke="{stroke}">"##);
    for &p in pts {
        let (x, y) = page(p);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4"/>"#);
    }
    let _ = writeln!(out, "</g>");
    if spec.labels {
        let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="11">"#);
        for (&p, label) in pts.iter().zip(labels) {
            let (x, y) = page(p);
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 6.0, y - 6.0, escape(label));
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

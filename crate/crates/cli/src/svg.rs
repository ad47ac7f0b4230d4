//! Hand-rolled static SVG plots of the three invariant circles.

use trihalf_core::error::Result;
use trihalf_core::klein::annulus_bounds;
use trihalf_core::rep::{diameter_circle, fixed_points, FixedPoints, HalfTurnTriple};

const SIZE: f64 = 600.0;
const COLORS: [&str; 3] = ["#c0392b", "#2471a3", "#1e8449"];

struct Mapper {
    scale: f64,
}

impl Mapper {
    fn x(&self, re: f64) -> f64 {
        SIZE / 2.0 + re * self.scale
    }
    fn y(&self, im: f64) -> f64 {
        SIZE / 2.0 - im * self.scale
    }
    fn r(&self, r: f64) -> f64 {
        r * self.scale
    }
}

/// SVG document with the three diameter circles and their boundary fixed
/// points; for regular triples the annulus bounding the third circle is
/// shaded. Viewport auto-scales to 1.2x the outer circle.
pub fn plot_circles(t: &HalfTurnTriple) -> Result<String> {
    let bits = t.bits;
    let gens = [&t.a, &t.b, &t.c];
    let mut circles = Vec::new();
    let mut points: Vec<(f64, f64)> = Vec::new();
    for g in gens {
        let c = diameter_circle(g, bits)?;
        let (re, im) = c.center.to_f64_pair();
        circles.push((re, im, c.radius.to_f64()));
        match fixed_points(g, bits)? {
            FixedPoints::Finite(p, q) => {
                points.push(p.to_f64_pair());
                points.push(q.to_f64_pair());
            }
            FixedPoints::WithInfinity(p) => points.push(p.to_f64_pair()),
        }
    }

    let annulus = if t.params.is_regular() {
        let b = annulus_bounds(&t.beta.abs(), bits)?;
        let (r1, r2) = (b.r1.to_f64(), b.r2.to_f64());
        if r1.is_finite() && r2.is_finite() && r2 > 0.0 {
            Some((r1.max(0.0), r2))
        } else {
            None
        }
    } else {
        None
    };

    let mut extent: f64 = 1.0;
    for &(re, im, r) in &circles {
        extent = extent.max((re * re + im * im).sqrt() + r);
    }
    if let Some((_, r2)) = annulus {
        extent = extent.max(r2);
    }
    let m = Mapper {
        scale: SIZE / 2.0 / (extent * 1.2),
    };

    let mut body = String::new();
    body.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    ));
    if let Some((r1, r2)) = annulus {
        let (cx, cy) = (m.x(0.0), m.y(0.0));
        let (ro, ri) = (m.r(r2), m.r(r1));
        // even-odd ring: outer circle minus inner circle
        body.push_str(&format!(
            "<path fill=\"#f4d8b0\" fill-rule=\"evenodd\" d=\"M {x0} {cy} \
             A {ro} {ro} 0 1 0 {x1} {cy} A {ro} {ro} 0 1 0 {x0} {cy} Z \
             M {x2} {cy} A {ri} {ri} 0 1 0 {x3} {cy} A {ri} {ri} 0 1 0 {x2} {cy} Z\"/>\n",
            x0 = cx + ro,
            x1 = cx - ro,
            x2 = cx + ri,
            x3 = cx - ri,
        ));
    }
    for (i, &(re, im, r)) in circles.iter().enumerate() {
        body.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            m.x(re),
            m.y(im),
            m.r(r),
            COLORS[i],
        ));
    }
    for &(re, im) in &points {
        body.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#111\"/>\n",
            m.x(re),
            m.y(im),
        ));
    }

    Ok(format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">\n{body}</svg>\n"
    ))
}

//! Figures: the boundary, both vertical support lines, the tangent cones
//! at their contacts and level curves of a hull function.

use std::fmt::Write;

use flatnewt::concave::HullFunction;
use flatnewt::geom2d::{classify_vertical_support, Domain, Point2, Side};

const LEVELS: [f64; 4] = [0.2, 0.4, 0.6, 0.8];

fn path(points: &[Point2], closed: bool) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        write!(d, "{}{:.6},{:.6} ", if i == 0 { 'M' } else { 'L' }, p.x, p.y).unwrap();
    }
    if closed {
        d.push('Z');
    }
    d
}

fn line(out: &mut String, a: Point2, b: Point2, style: &str) {
    writeln!(
        out,
        r#"    <path d="{}" {style} fill="none" vector-effect="non-scaling-stroke"/>"#,
        path(&[a, b], false)
    )
    .unwrap();
}

pub fn figure(domain: &Domain, function: Option<&HullFunction>) -> String {
    let (lo, hi) = domain.bbox();
    let pad = 0.1 * domain.diameter();
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        600.0 * w / w.max(h),
        600.0 * h / w.max(h),
        lo.x - pad,
        -(hi.y + pad),
        w,
        h
    )
    .unwrap();
    out.push_str("  <g transform=\"scale(1,-1)\">\n");
    writeln!(
        out,
        r##"    <path d="{}" fill="#eef3fb" stroke="#1f3b73" stroke-width="2" vector-effect="non-scaling-stroke"/>"##,
        path(domain.polygonization(), true)
    )
    .unwrap();

    if let Some(u) = function {
        let top = u.max_value();
        for level in LEVELS {
            for (a, b) in u.level_set(level * top) {
                line(&mut out, a, b, r##"stroke="#c0392b" stroke-width="1""##);
            }
        }
        for a in u.apexes() {
            writeln!(
                out,
                r##"    <circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="#c0392b"/>"##,
                a.point.x,
                a.point.y,
                0.008 * domain.diameter()
            )
            .unwrap();
        }
    }

    let reach = 0.3 * domain.diameter();
    for side in [Side::Left, Side::Right] {
        let v = classify_vertical_support(domain, side);
        let x = v.contact.x;
        line(
            &mut out,
            Point2::new(x, lo.y - pad),
            Point2::new(x, hi.y + pad),
            r##"stroke="#555" stroke-width="1" stroke-dasharray="4 3""##,
        );
        if let Some(cone) = v.cone {
            for e in cone {
                line(&mut out, v.contact, v.contact + e * reach, r##"stroke="#27ae60" stroke-width="1.5""##);
            }
        }
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use flatnewt::concave::tent;
    use flatnewt::geom2d::generators;

    #[test]
    fn diamond_figure_has_cones_and_levels() {
        let d = generators::diamond();
        let u = tent(&d, Point2::ORIGIN, 1.0).unwrap();
        let svg = figure(&d, Some(&u));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        // Four cone edges, two support lines, four level curves of four
        // segments each.
        assert_eq!(svg.matches("#27ae60").count(), 4);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert_eq!(svg.matches("#c0392b\" stroke-width").count(), 16);
    }
}

//! Derived views of orbit data: CSV tables and a static SVG of the orbit
//! points on the circle. Display-only; floating point appears here and
//! nowhere else.

use nullseq_core::monothetic::OrbitGaps;
use nullseq_core::rat::Rat;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::fmt::Write;

fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0)
}

/// CSV with one row per sorted multiple: index, multiple, gap to the next.
pub fn orbit_csv(orbit: &OrbitGaps) -> String {
    let mut out = String::from("index,multiple,gap_to_next\n");
    for (i, (multiple, gap)) in orbit.multiples.iter().zip(&orbit.gaps).enumerate() {
        let _ = writeln!(out, "{i},{multiple},{gap}");
    }
    out
}

/// Static SVG: the circle, the orbit points, and the largest gap shaded.
pub fn orbit_svg(z_label: &str, n: &BigInt, orbit: &OrbitGaps) -> String {
    let size = 500.0;
    let center = size / 2.0;
    let radius = 200.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r##"  <circle cx="{center}" cy="{center}" r="{radius}" fill="none" stroke="#888" stroke-width="1"/>"##
    );

    // shade the widest gap as an arc
    if orbit.multiples.len() > 1 {
        if let Some(gap_index) = orbit.gaps.iter().position(|g| *g == orbit.max_gap) {
            let start = rat_to_f64(&orbit.multiples[gap_index]);
            let sweep = rat_to_f64(&orbit.max_gap);
            let a0 = std::f64::consts::TAU * start;
            let a1 = std::f64::consts::TAU * (start + sweep);
            let (x0, y0) = (center + radius * a0.cos(), center - radius * a0.sin());
            let (x1, y1) = (center + radius * a1.cos(), center - radius * a1.sin());
            let large_arc = if sweep > 0.5 { 1 } else { 0 };
            let _ = writeln!(
                out,
                r##"  <path d="M {x0:.2} {y0:.2} A {radius} {radius} 0 {large_arc} 0 {x1:.2} {y1:.2}" fill="none" stroke="#d33" stroke-width="4" opacity="0.6"/>"##
            );
        }
    }

    for multiple in &orbit.multiples {
        let angle = std::f64::consts::TAU * rat_to_f64(multiple);
        let x = center + radius * angle.cos();
        let y = center - radius * angle.sin();
        let _ = writeln!(out, r##"  <circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#226"/>"##);
    }
    let _ = writeln!(
        out,
        r#"  <text x="12" y="24" font-family="monospace" font-size="14">z = {}, n = {}, points = {}, max gap = {}</text>"#,
        z_label,
        n,
        orbit.multiples.len(),
        orbit.max_gap
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nullseq_core::ambient::GroupElement;
    use nullseq_core::monothetic::orbit_gaps;
    use nullseq_core::rat::rat;

    #[test]
    fn csv_lists_every_multiple() {
        let z = GroupElement::circle(rat(2, 7));
        let orbit = orbit_gaps(&z, &BigInt::from(3)).unwrap();
        let csv = orbit_csv(&orbit);
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 8); // header + 7 grid points
        assert_eq!(lines[0], "index,multiple,gap_to_next");
        assert!(lines[1].starts_with("0,0,1/7"));
    }

    #[test]
    fn svg_contains_a_marker_per_point() {
        let z = GroupElement::circle(rat(1, 5));
        let orbit = orbit_gaps(&z, &BigInt::from(2)).unwrap();
        let svg = orbit_svg("T:1/5", &BigInt::from(2), &orbit);
        assert_eq!(svg.matches(r#"r="4""#).count(), 5);
        assert!(svg.contains("max gap = 1/5"));
    }
}

//! Geometry serialization: WKT, compact GeoJSON, and a standalone SVG
//! rendering. Coordinates are written with a configurable number of
//! significant digits (9 by default, enough to round-trip typical sensor
//! data).

use polyshell::geom::LinearRing;
use polyshell::{MultiPolygon, PointSet};

/// `x` with at most `sig` significant digits, in plain decimal notation,
/// trailing zeros trimmed.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (sig.max(1) as i32 - 1 - exp).clamp(0, 330) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        return "0".to_string();
    }
    s
}

/// `x` rounded to `sig` significant digits, for numeric (JSON) output.
pub fn round_sig(x: f64, sig: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let exp = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(sig.max(1) as i32 - 1 - exp);
    (x * scale).round() / scale
}

fn wkt_ring(ring: &LinearRing, ps: &PointSet, sig: usize) -> String {
    let coord = |pi: usize| format!("{} {}", fmt_sig(ps[pi].x, sig), fmt_sig(ps[pi].y, sig));
    let mut parts: Vec<String> = ring.indices().iter().map(|&pi| coord(pi)).collect();
    parts.push(coord(ring.indices()[0]));
    format!("({})", parts.join(", "))
}

fn wkt_polygon_body(poly: &polyshell::Polygon, ps: &PointSet, sig: usize) -> String {
    let mut rings = vec![wkt_ring(&poly.shell, ps, sig)];
    rings.extend(poly.holes.iter().map(|h| wkt_ring(h, ps, sig)));
    format!("({})", rings.join(", "))
}

pub fn to_wkt(mp: &MultiPolygon, ps: &PointSet, sig: usize) -> String {
    match mp.len() {
        0 => "MULTIPOLYGON EMPTY".to_string(),
        1 => format!("POLYGON {}", wkt_polygon_body(&mp.polygons[0], ps, sig)),
        _ => {
            let bodies: Vec<String> =
                mp.iter().map(|p| wkt_polygon_body(p, ps, sig)).collect();
            format!("MULTIPOLYGON ({})", bodies.join(", "))
        }
    }
}

fn json_ring(ring: &LinearRing, ps: &PointSet, sig: usize) -> serde_json::Value {
    let mut coords: Vec<serde_json::Value> = ring
        .indices()
        .iter()
        .map(|&pi| {
            serde_json::json!([round_sig(ps[pi].x, sig), round_sig(ps[pi].y, sig)])
        })
        .collect();
    coords.push(coords[0].clone());
    serde_json::Value::Array(coords)
}

fn json_polygon_rings(poly: &polyshell::Polygon, ps: &PointSet, sig: usize) -> serde_json::Value {
    let mut rings = vec![json_ring(&poly.shell, ps, sig)];
    rings.extend(poly.holes.iter().map(|h| json_ring(h, ps, sig)));
    serde_json::Value::Array(rings)
}

/// A FeatureCollection holding one feature: a Polygon when the result has
/// exactly one polygon, a MultiPolygon otherwise. Shells stay CCW and
/// holes CW, matching the extractor's output, so no re-winding happens.
pub fn to_geojson(mp: &MultiPolygon, ps: &PointSet, sig: usize) -> String {
    let geometry = if mp.len() == 1 {
        serde_json::json!({
            "type": "Polygon",
            "coordinates": json_polygon_rings(&mp.polygons[0], ps, sig),
        })
    } else {
        let polys: Vec<serde_json::Value> =
            mp.iter().map(|p| json_polygon_rings(p, ps, sig)).collect();
        serde_json::json!({ "type": "MultiPolygon", "coordinates": polys })
    };
    serde_json::json!({
        "type": "FeatureCollection",
        "features": [{ "type": "Feature", "properties": {}, "geometry": geometry }],
    })
    .to_string()
}

fn svg_subpath(ring: &LinearRing, ps: &PointSet, out: &mut String) {
    for (i, &pi) in ring.indices().iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        // SVG's y axis points down; mirror so the drawing reads like the
        // input plane.
        out.push_str(&format!(
            "{cmd}{} {} ",
            fmt_sig(ps[pi].x, 9),
            fmt_sig(-ps[pi].y, 9)
        ));
    }
    out.push_str("Z ");
}

/// A standalone SVG document: shells filled green with even-odd rule (so
/// hole subpaths cut out), hole rings outlined orange.
pub fn to_svg(mp: &MultiPolygon, ps: &PointSet) -> String {
    let mut pts = mp.iter().flat_map(|p| {
        std::iter::once(&p.shell)
            .chain(p.holes.iter())
            .flat_map(|r| r.indices().iter().map(|&pi| ps[pi]))
    });
    let Some(first) = pts.next() else {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\"/>\n".to_string();
    };
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (first.x, first.y, first.x, first.y);
    for p in pts {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let extent = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
    let pad = 0.02 * extent;
    let (w, h) = (max_x - min_x + 2.0 * pad, max_y - min_y + 2.0 * pad);
    let stroke = fmt_sig(extent / 400.0, 3);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"800\" height=\"{}\">\n",
        fmt_sig(min_x - pad, 9),
        fmt_sig(-(max_y + pad), 9),
        fmt_sig(w, 9),
        fmt_sig(h, 9),
        fmt_sig(800.0 * h / w, 6),
    );
    for poly in mp.iter() {
        let mut d = String::new();
        svg_subpath(&poly.shell, ps, &mut d);
        for hole in &poly.holes {
            svg_subpath(hole, ps, &mut d);
        }
        svg.push_str(&format!(
            "  <path fill=\"#2e7d32\" fill-opacity=\"0.6\" fill-rule=\"evenodd\" \
             stroke=\"#1b5e20\" stroke-width=\"{stroke}\" d=\"{}\"/>\n",
            d.trim_end()
        ));
        for hole in &poly.holes {
            let mut d = String::new();
            svg_subpath(hole, ps, &mut d);
            svg.push_str(&format!(
                "  <path fill=\"none\" stroke=\"#e65100\" stroke-width=\"{stroke}\" d=\"{}\"/>\n",
                d.trim_end()
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

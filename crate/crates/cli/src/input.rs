//! Point ingestion: CSV (one `x,y` pair per line, optional header) and
//! GeoJSON (MultiPoint geometry or a FeatureCollection of Points). Parse
//! errors cite the offending line or feature.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use polyshell::geom::{LinearRing, PointSetError};
use polyshell::{MultiPolygon, PointSet, Polygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    Csv,
    Geojson,
}

/// Explicit flag wins; otherwise the file extension decides, with CSV as
/// the fallback.
pub fn detect_format(path: &Path, flag: Option<InputFormat>) -> InputFormat {
    flag.unwrap_or_else(|| {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
            Some(ext) if ext == "json" || ext == "geojson" => InputFormat::Geojson,
            _ => InputFormat::Csv,
        }
    })
}

pub fn parse_points(path: &Path, format: InputFormat) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    match format {
        InputFormat::Csv => parse_csv(&text),
        InputFormat::Geojson => parse_geojson(&text),
    }
}

fn parse_csv(text: &str) -> Result<PointSet> {
    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut line_of_point: Vec<usize> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if coords.is_empty() && line_of_point.is_empty() && is_header(line) {
            continue;
        }
        let mut fields = line.split(',');
        let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
            bail!("line {line_no}: expected two comma-separated values, got {line:?}");
        };
        let x: f64 = xs
            .trim()
            .parse()
            .map_err(|_| anyhow!("line {line_no}: cannot parse x value {:?}", xs.trim()))?;
        let y: f64 = ys
            .trim()
            .parse()
            .map_err(|_| anyhow!("line {line_no}: cannot parse y value {:?}", ys.trim()))?;
        coords.push((x, y));
        line_of_point.push(line_no);
    }
    PointSet::from_coords(coords).map_err(|e| match e {
        PointSetError::NonFinite { index } => {
            anyhow!("line {}: non-finite coordinate", line_of_point[index])
        }
        PointSetError::Duplicate { index, first } => anyhow!(
            "line {}: duplicate of line {}",
            line_of_point[index],
            line_of_point[first]
        ),
    })
}

fn is_header(line: &str) -> bool {
    let mut fields = line.split(',').map(|f| f.trim().to_ascii_lowercase());
    fields.next().as_deref() == Some("x")
        && fields.next().as_deref() == Some("y")
        && fields.next().is_none()
}

fn parse_geojson(text: &str) -> Result<PointSet> {
    let root: serde_json::Value = serde_json::from_str(text).context("invalid JSON")?;
    let kind = root
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or_else(|| anyhow!("GeoJSON object has no \"type\""))?;

    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut label_of_point: Vec<String> = Vec::new();
    match kind {
        "MultiPoint" => {
            let positions = root
                .get("coordinates")
                .and_then(|c| c.as_array())
                .ok_or_else(|| anyhow!("MultiPoint has no coordinates array"))?;
            for (i, pos) in positions.iter().enumerate() {
                coords.push(position(pos).with_context(|| format!("coordinate {i}"))?);
                label_of_point.push(format!("coordinate {i}"));
            }
        }
        "FeatureCollection" => {
            let features = root
                .get("features")
                .and_then(|f| f.as_array())
                .ok_or_else(|| anyhow!("FeatureCollection has no features array"))?;
            for (i, feature) in features.iter().enumerate() {
                let geom = feature
                    .get("geometry")
                    .filter(|g| !g.is_null())
                    .ok_or_else(|| anyhow!("feature {i}: missing geometry"))?;
                let gtype = geom.get("type").and_then(|t| t.as_str()).unwrap_or("?");
                if gtype != "Point" {
                    bail!("feature {i}: expected Point geometry, got {gtype}");
                }
                let pos = geom
                    .get("coordinates")
                    .ok_or_else(|| anyhow!("feature {i}: Point has no coordinates"))?;
                coords.push(position(pos).with_context(|| format!("feature {i}"))?);
                label_of_point.push(format!("feature {i}"));
            }
        }
        other => bail!("expected MultiPoint or FeatureCollection, got {other}"),
    }

    PointSet::from_coords(coords).map_err(|e| match e {
        PointSetError::NonFinite { index } => {
            anyhow!("{}: non-finite coordinate", label_of_point[index])
        }
        PointSetError::Duplicate { index, first } => anyhow!(
            "{}: duplicate of {}",
            label_of_point[index],
            label_of_point[first]
        ),
    })
}

/// Reads Polygon or MultiPolygon geometry from GeoJSON, also accepting a
/// Feature or FeatureCollection wrapper. Coordinates are deduplicated into
/// one shared [`PointSet`]; rings keep whatever defects the file has (short
/// rings, repeated points, wrong winding) so the validity audit can report
/// them instead of this parser rejecting the file.
pub fn parse_polygons(text: &str) -> Result<(MultiPolygon, PointSet)> {
    let root: serde_json::Value = serde_json::from_str(text).context("invalid JSON")?;
    let mut builder = PolygonBuilder::default();
    collect_polygons(&root, &mut builder)?;
    let ps = PointSet::from_coords(builder.coords).map_err(|e| match e {
        PointSetError::NonFinite { .. } => anyhow!("non-finite coordinate in geometry"),
        PointSetError::Duplicate { .. } => anyhow!("internal: coordinates were deduplicated"),
    })?;
    Ok((MultiPolygon::new(builder.polygons), ps))
}

#[derive(Default)]
struct PolygonBuilder {
    coords: Vec<(f64, f64)>,
    index_of: std::collections::HashMap<(u64, u64), usize>,
    polygons: Vec<Polygon>,
}

impl PolygonBuilder {
    fn point(&mut self, x: f64, y: f64) -> usize {
        *self.index_of.entry((x.to_bits(), y.to_bits())).or_insert_with(|| {
            self.coords.push((x, y));
            self.coords.len() - 1
        })
    }

    fn ring(&mut self, value: &serde_json::Value, what: &str) -> Result<LinearRing> {
        let positions = value
            .as_array()
            .ok_or_else(|| anyhow!("{what}: ring is not an array"))?;
        if positions.is_empty() {
            bail!("{what}: ring is empty");
        }
        let mut pts = Vec::with_capacity(positions.len());
        for (i, pos) in positions.iter().enumerate() {
            pts.push(position(pos).with_context(|| format!("{what}, position {i}"))?);
        }
        // GeoJSON closes rings by repeating the first coordinate.
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        let indices = pts.into_iter().map(|(x, y)| self.point(x, y)).collect();
        Ok(LinearRing::new_unchecked(indices))
    }

    fn polygon(&mut self, rings: &serde_json::Value, what: &str) -> Result<()> {
        let rings = rings
            .as_array()
            .ok_or_else(|| anyhow!("{what}: coordinates are not an array"))?;
        if rings.is_empty() {
            bail!("{what}: polygon has no rings");
        }
        let shell = self.ring(&rings[0], what)?;
        let holes = rings[1..]
            .iter()
            .map(|r| self.ring(r, what))
            .collect::<Result<Vec<_>>>()?;
        self.polygons.push(Polygon::new(shell, holes));
        Ok(())
    }
}

fn collect_polygons(value: &serde_json::Value, builder: &mut PolygonBuilder) -> Result<()> {
    let kind = value
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or_else(|| anyhow!("GeoJSON object has no \"type\""))?;
    match kind {
        "Polygon" => {
            let coords = value
                .get("coordinates")
                .ok_or_else(|| anyhow!("Polygon has no coordinates"))?;
            builder.polygon(coords, "polygon")?;
        }
        "MultiPolygon" => {
            let polys = value
                .get("coordinates")
                .and_then(|c| c.as_array())
                .ok_or_else(|| anyhow!("MultiPolygon has no coordinates array"))?;
            for (i, rings) in polys.iter().enumerate() {
                builder.polygon(rings, &format!("polygon {i}"))?;
            }
        }
        "Feature" => {
            let geom = value
                .get("geometry")
                .filter(|g| !g.is_null())
                .ok_or_else(|| anyhow!("feature has no geometry"))?;
            collect_polygons(geom, builder)?;
        }
        "FeatureCollection" => {
            let features = value
                .get("features")
                .and_then(|f| f.as_array())
                .ok_or_else(|| anyhow!("FeatureCollection has no features array"))?;
            for feature in features {
                collect_polygons(feature, builder)?;
            }
        }
        other => bail!("expected polygon geometry, got {other}"),
    }
    Ok(())
}

/// A GeoJSON position: `[x, y]` with an optional elevation, which is
/// ignored.
fn position(value: &serde_json::Value) -> Result<(f64, f64)> {
    let arr = value.as_array().ok_or_else(|| anyhow!("position is not an array"))?;
    if arr.len() < 2 {
        bail!("position has fewer than two components");
    }
    let x = arr[0].as_f64().ok_or_else(|| anyhow!("x is not a number"))?;
    let y = arr[1].as_f64().ok_or_else(|| anyhow!("y is not a number"))?;
    Ok((x, y))
}

//! TSPLIB95 `.tsp` reader for the symmetric edge-weight types EXPLICIT,
//! EUC_2D, CEIL_2D, GEO and ATT.
//!
//! Distance functions follow the TSPLIB95 definitions bit for bit, including
//! the `(int)` truncation and the `3.141592` constant of the GEO formula.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{DistanceKind, Instance, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeWeightType {
    Explicit,
    Euc2d,
    Ceil2d,
    Geo,
    Att,
}

impl EdgeWeightType {
    fn parse(value: &str) -> Option<Self> {
        Some(match value {
            "EXPLICIT" => EdgeWeightType::Explicit,
            "EUC_2D" => EdgeWeightType::Euc2d,
            "CEIL_2D" => EdgeWeightType::Ceil2d,
            "GEO" => EdgeWeightType::Geo,
            "ATT" => EdgeWeightType::Att,
            _ => return None,
        })
    }

    pub fn distance_kind(self) -> Option<DistanceKind> {
        match self {
            EdgeWeightType::Explicit => None,
            EdgeWeightType::Euc2d => Some(DistanceKind::Euc2d),
            EdgeWeightType::Ceil2d => Some(DistanceKind::Ceil2d),
            EdgeWeightType::Geo => Some(DistanceKind::Geo),
            EdgeWeightType::Att => Some(DistanceKind::Att),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeWeightFormat {
    FullMatrix,
    UpperRow,
    LowerRow,
    UpperDiagRow,
    LowerDiagRow,
    UpperCol,
    LowerCol,
}

impl EdgeWeightFormat {
    fn parse(value: &str) -> Option<Self> {
        Some(match value {
            "FULL_MATRIX" => EdgeWeightFormat::FullMatrix,
            "UPPER_ROW" => EdgeWeightFormat::UpperRow,
            "LOWER_ROW" => EdgeWeightFormat::LowerRow,
            "UPPER_DIAG_ROW" => EdgeWeightFormat::UpperDiagRow,
            "LOWER_DIAG_ROW" => EdgeWeightFormat::LowerDiagRow,
            "UPPER_COL" => EdgeWeightFormat::UpperCol,
            "LOWER_COL" => EdgeWeightFormat::LowerCol,
            _ => return None,
        })
    }

    /// Matrix cells `(row, col)` in the order the section lists them.
    fn cells(self, n: usize) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        match self {
            EdgeWeightFormat::FullMatrix => {
                for i in 0..n {
                    cells.extend((0..n).map(|j| (i, j)));
                }
            }
            EdgeWeightFormat::UpperRow => {
                for i in 0..n {
                    cells.extend(((i + 1)..n).map(|j| (i, j)));
                }
            }
            EdgeWeightFormat::LowerRow => {
                for i in 0..n {
                    cells.extend((0..i).map(|j| (i, j)));
                }
            }
            EdgeWeightFormat::UpperDiagRow => {
                for i in 0..n {
                    cells.extend((i..n).map(|j| (i, j)));
                }
            }
            EdgeWeightFormat::LowerDiagRow => {
                for i in 0..n {
                    cells.extend((0..=i).map(|j| (i, j)));
                }
            }
            EdgeWeightFormat::UpperCol => {
                for j in 0..n {
                    cells.extend((0..j).map(|i| (i, j)));
                }
            }
            EdgeWeightFormat::LowerCol => {
                for j in 0..n {
                    cells.extend(((j + 1)..n).map(|i| (i, j)));
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsplibHeader {
    pub name: String,
    #[serde(rename = "type")]
    pub problem_type: String,
    pub dimension: usize,
    pub edge_weight_type: EdgeWeightType,
    pub edge_weight_format: Option<EdgeWeightFormat>,
}

fn nint(x: f64) -> i64 {
    (x + 0.5) as i64
}

fn geo_radians(x: f64) -> f64 {
    #[allow(clippy::approx_constant)] // TSPLIB rounds pi this way
    const PI: f64 = 3.141592;
    let deg = x.trunc();
    let min = x - deg;
    PI * (deg + 5.0 * min / 3.0) / 180.0
}

/// Integer TSPLIB distance between two nodes.
///
/// `DistanceKind::Euclidean` is not a TSPLIB type; it is truncated here and
/// should be evaluated through [`DistanceKind::distance`] instead.
pub fn distance(kind: DistanceKind, a: &Point, b: &Point) -> i64 {
    let xd = a.x - b.x;
    let yd = a.y - b.y;
    match kind {
        DistanceKind::Euc2d => nint((xd * xd + yd * yd).sqrt()),
        DistanceKind::Ceil2d => (xd * xd + yd * yd).sqrt().ceil() as i64,
        DistanceKind::Att => {
            let r = ((xd * xd + yd * yd) / 10.0).sqrt();
            let t = nint(r);
            if (t as f64) < r {
                t + 1
            } else {
                t
            }
        }
        DistanceKind::Geo => {
            if a == b {
                return 0;
            }
            const RRR: f64 = 6378.388;
            let (lat_a, lon_a) = (geo_radians(a.x), geo_radians(a.y));
            let (lat_b, lon_b) = (geo_radians(b.x), geo_radians(b.y));
            let q1 = (lon_a - lon_b).cos();
            let q2 = (lat_a - lat_b).cos();
            let q3 = (lat_a + lat_b).cos();
            let c = (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).clamp(-1.0, 1.0);
            (RRR * c.acos() + 1.0) as i64
        }
        DistanceKind::Euclidean => (xd * xd + yd * yd).sqrt() as i64,
    }
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
    pending: Vec<&'a str>,
    pending_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().collect(),
            pos: 0,
            pending: Vec::new(),
            pending_line: 0,
        }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let line = *self.lines.get(self.pos)?;
        self.pos += 1;
        Some((self.pos, line))
    }

    /// Reads exactly `count` whitespace-separated tokens, spanning lines freely.
    fn tokens(&mut self, count: usize, section: &str) -> Result<Vec<(usize, &'a str)>> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            if self.pending.is_empty() {
                let Some((no, line)) = self.next_line() else {
                    return Err(Error::Parse {
                        line: self.pos,
                        message: format!("{section} ended after {} of {count} values", out.len()),
                    });
                };
                if line.trim() == "EOF" {
                    return Err(Error::Parse {
                        line: no,
                        message: format!("{section} ended after {} of {count} values", out.len()),
                    });
                }
                self.pending = line.split_whitespace().rev().collect();
                self.pending_line = no;
                continue;
            }
            let tok = self.pending.pop().unwrap();
            out.push((self.pending_line, tok));
        }
        if !self.pending.is_empty() {
            return Err(Error::Parse {
                line: self.pending_line,
                message: format!("unexpected trailing values after {section}"),
            });
        }
        Ok(out)
    }
}

fn number(line: usize, token: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("expected a number, found {token:?}"),
        })
}

fn read_coords(lines: &mut Lines<'_>, n: usize, section: &str) -> Result<Vec<Point>> {
    let toks = lines.tokens(3 * n, section)?;
    let mut points: Vec<Option<Point>> = vec![None; n];
    for chunk in toks.chunks(3) {
        let (line, id_tok) = chunk[0];
        let id = id_tok
            .parse::<usize>()
            .ok()
            .filter(|&id| (1..=n).contains(&id))
            .ok_or_else(|| Error::Parse {
                line,
                message: format!("node id {id_tok:?} is not in 1..={n}"),
            })?;
        let p = Point::new(
            number(chunk[1].0, chunk[1].1)?,
            number(chunk[2].0, chunk[2].1)?,
        );
        if points[id - 1].replace(p).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("node {id} listed twice"),
            });
        }
    }
    Ok(points
        .into_iter()
        .map(|p| p.expect("every id seen once"))
        .collect())
}

fn read_weights(lines: &mut Lines<'_>, n: usize, format: EdgeWeightFormat) -> Result<Vec<f64>> {
    let cells = format.cells(n);
    let toks = lines.tokens(cells.len(), "EDGE_WEIGHT_SECTION")?;
    let mut m = vec![f64::NAN; n * n];
    for (&(i, j), &(line, tok)) in cells.iter().zip(&toks) {
        let w = number(line, tok)?;
        // Diagonal entries carry no tour information; the matrix keeps zeros there.
        if i != j {
            m[i * n + j] = w;
        }
    }
    if format != EdgeWeightFormat::FullMatrix {
        for i in 0..n {
            for j in 0..n {
                if m[i * n + j].is_nan() {
                    m[i * n + j] = m[j * n + i];
                }
            }
        }
    }
    for i in 0..n {
        m[i * n + i] = 0.0;
    }
    Ok(m)
}

/// Parses a `.tsp` document into its header and instance.
pub fn parse_document(text: &str) -> Result<(TsplibHeader, Instance)> {
    let mut lines = Lines::new(text);
    let mut name = String::new();
    let mut problem_type = String::new();
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<EdgeWeightType> = None;
    let mut weight_format: Option<EdgeWeightFormat> = None;
    let mut coords: Option<Vec<Point>> = None;
    let mut matrix: Option<Vec<f64>> = None;

    let require_dimension = |dimension: Option<usize>, line: usize| {
        dimension.ok_or(Error::Parse {
            line,
            message: "data section before DIMENSION".into(),
        })
    };

    while let Some((no, raw)) = lines.next_line() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (line, ""),
        };
        match key {
            "NAME" => name = value.to_string(),
            "TYPE" => {
                if value != "TSP" && !value.starts_with("TSP ") {
                    return Err(Error::UnsupportedFormat(format!("TYPE {value}")));
                }
                problem_type = value.to_string();
            }
            "DIMENSION" => {
                let d = value.parse::<usize>().map_err(|_| Error::Parse {
                    line: no,
                    message: format!("bad DIMENSION {value:?}"),
                })?;
                dimension = Some(d);
            }
            "EDGE_WEIGHT_TYPE" => {
                weight_type = Some(EdgeWeightType::parse(value).ok_or_else(|| {
                    Error::UnsupportedFormat(format!("EDGE_WEIGHT_TYPE {value}"))
                })?);
            }
            "EDGE_WEIGHT_FORMAT" => {
                if value != "FUNCTION" {
                    weight_format = Some(EdgeWeightFormat::parse(value).ok_or_else(|| {
                        Error::UnsupportedFormat(format!("EDGE_WEIGHT_FORMAT {value}"))
                    })?);
                }
            }
            "NODE_COORD_TYPE" => {
                if value != "TWOD_COORDS" && value != "NO_COORDS" {
                    return Err(Error::UnsupportedFormat(format!("NODE_COORD_TYPE {value}")));
                }
            }
            "COMMENT" | "DISPLAY_DATA_TYPE" | "CAPACITY" => {}
            "NODE_COORD_SECTION" => {
                let n = require_dimension(dimension, no)?;
                coords = Some(read_coords(&mut lines, n, "NODE_COORD_SECTION")?);
            }
            "DISPLAY_DATA_SECTION" => {
                let n = require_dimension(dimension, no)?;
                read_coords(&mut lines, n, "DISPLAY_DATA_SECTION")?;
            }
            "EDGE_WEIGHT_SECTION" => {
                let n = require_dimension(dimension, no)?;
                let format = weight_format.ok_or(Error::Parse {
                    line: no,
                    message: "EDGE_WEIGHT_SECTION without EDGE_WEIGHT_FORMAT".into(),
                })?;
                matrix = Some(read_weights(&mut lines, n, format)?);
            }
            other if other.ends_with("_SECTION") => {
                return Err(Error::UnsupportedFormat(format!("section {other}")));
            }
            _ if value.is_empty() && !line.contains(':') => {
                return Err(Error::Parse {
                    line: no,
                    message: format!("unrecognized line {line:?}"),
                });
            }
            _ => {}
        }
    }

    let dimension = dimension.ok_or(Error::Parse {
        line: lines.pos,
        message: "missing DIMENSION".into(),
    })?;
    if dimension < 2 {
        return Err(Error::InvalidSize(format!("DIMENSION {dimension} < 2")));
    }
    let weight_type = weight_type.ok_or(Error::Parse {
        line: lines.pos,
        message: "missing EDGE_WEIGHT_TYPE".into(),
    })?;
    if name.is_empty() {
        name = "unnamed".into();
    }

    let instance = match weight_type.distance_kind() {
        Some(kind) => {
            let points = coords.ok_or(Error::Parse {
                line: lines.pos,
                message: "missing NODE_COORD_SECTION".into(),
            })?;
            weight_format = None;
            Instance::from_points(name.clone(), points, kind)?
        }
        None => {
            let m = matrix.ok_or(Error::Parse {
                line: lines.pos,
                message: "missing EDGE_WEIGHT_SECTION".into(),
            })?;
            Instance::from_matrix(name.clone(), dimension, m)?
        }
    };

    Ok((
        TsplibHeader {
            name,
            problem_type,
            dimension,
            edge_weight_type: weight_type,
            edge_weight_format: weight_format,
        },
        instance,
    ))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_document(text).map(|(_, inst)| inst)
}

pub fn read_document(path: &Path) -> Result<(TsplibHeader, Instance)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_document(&text)
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    read_document(path).map(|(_, inst)| inst)
}

/// Loads `<dir>/<name>.tsp` for every name, in sorted name order.
///
/// All missing names are reported together.
pub fn load_bundle(dir: &Path, names: &[&str]) -> Result<Vec<Instance>> {
    let mut names: Vec<&str> = names.to_vec();
    names.sort_unstable();
    names.dedup();
    let missing: Vec<String> = names
        .iter()
        .filter(|name| !dir.join(format!("{name}.tsp")).is_file())
        .map(|s| s.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::NotFound {
            dir: dir.to_path_buf(),
            names: missing,
        });
    }
    names
        .iter()
        .map(|name| read_instance(&dir.join(format!("{name}.tsp"))).map(|i| i.with_name(*name)))
        .collect()
}

/// Serializes any instance as an EXPLICIT FULL_MATRIX document.
pub fn to_full_matrix(instance: &Instance) -> String {
    let n = instance.n();
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {}", instance.name());
    let _ = writeln!(out, "TYPE: TSP");
    let _ = writeln!(out, "DIMENSION: {n}");
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE: EXPLICIT");
    let _ = writeln!(out, "EDGE_WEIGHT_FORMAT: FULL_MATRIX");
    let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| format!("{}", instance.weight(i, j)))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out.push_str("EOF\n");
    out
}

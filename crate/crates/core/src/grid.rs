//! Phase-space lattices, field sampling and the on-disk formats.
//!
//! Text format (`csv`):
//!
//! ```text
//! # kind,t,n_z,n_p,z_min,z_max,p_min,p_max
//! # trace,2.0000000000000000e-4,201,201,...
//! z,p,value            <- one row per node, z-major
//! ```
//!
//! Binary format (`grid-bin`), all little-endian, 64-byte header:
//!
//! | offset | size | content                         |
//! |--------|------|---------------------------------|
//! | 0      | 4    | magic `WSG1`                    |
//! | 4      | 32   | z_min, z_max, p_min, p_max (f64)|
//! | 36     | 8    | n_z, n_p (u32)                  |
//! | 44     | 8    | t (f64)                         |
//! | 52     | 4    | kind code (u32)                 |
//! | 56     | 8    | reserved, zero                  |
//!
//! followed by `n_z * n_p` f64 values, z-major.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::closedform::WignerAt;
use crate::coherence::{CoherenceCurve, DecoherencePoint, PowerLawFit};
use crate::error::{Error, Result};
use crate::marginals::moments;
use crate::params::Scenario;

pub const MIN_NODES: usize = 8;
pub const DEFAULT_NODES: usize = 201;

/// Uniform node-centred lattice; node (i, j) sits at (z_i, p_j) and is stored
/// at index `i * n_p + j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    z_min: f64,
    z_max: f64,
    p_min: f64,
    p_max: f64,
    n_z: usize,
    n_p: usize,
}

impl PhaseSpaceGrid {
    pub fn new(z_min: f64, z_max: f64, p_min: f64, p_max: f64, n_z: usize, n_p: usize) -> Result<Self> {
        if !(z_min.is_finite() && z_max.is_finite() && p_min.is_finite() && p_max.is_finite()) {
            return Err(Error::InvalidParams("grid bounds must be finite".into()));
        }
        if !(z_min < z_max && p_min < p_max) {
            return Err(Error::InvalidParams(format!(
                "grid bounds must be strictly ordered, got z [{z_min}, {z_max}], p [{p_min}, {p_max}]"
            )));
        }
        if n_z < MIN_NODES || n_p < MIN_NODES {
            return Err(Error::InvalidParams(format!(
                "grid needs at least {MIN_NODES} nodes per axis, got {n_z} x {n_p}"
            )));
        }
        if n_z > u32::MAX as usize || n_p > u32::MAX as usize {
            return Err(Error::InvalidParams("grid too large".into()));
        }
        Ok(PhaseSpaceGrid {
            z_min,
            z_max,
            p_min,
            p_max,
            n_z,
            n_p,
        })
    }

    /// Square-ish grid symmetric about the origin.
    pub fn symmetric(z_half: f64, p_half: f64, n_z: usize, n_p: usize) -> Result<Self> {
        Self::new(-z_half, z_half, -p_half, p_half, n_z, n_p)
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }
    pub fn z_max(&self) -> f64 {
        self.z_max
    }
    pub fn p_min(&self) -> f64 {
        self.p_min
    }
    pub fn p_max(&self) -> f64 {
        self.p_max
    }
    pub fn n_z(&self) -> usize {
        self.n_z
    }
    pub fn n_p(&self) -> usize {
        self.n_p
    }
    pub fn len(&self) -> usize {
        self.n_z * self.n_p
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn dz(&self) -> f64 {
        (self.z_max - self.z_min) / (self.n_z - 1) as f64
    }
    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.n_p - 1) as f64
    }
    pub fn z(&self, i: usize) -> f64 {
        if i + 1 == self.n_z {
            self.z_max
        } else {
            self.z_min + i as f64 * self.dz()
        }
    }
    pub fn p(&self, j: usize) -> f64 {
        if j + 1 == self.n_p {
            self.p_max
        } else {
            self.p_min + j as f64 * self.dp()
        }
    }
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_p + j
    }
    pub fn cell_area(&self) -> f64 {
        self.dz() * self.dp()
    }
    pub fn zs(&self) -> Vec<f64> {
        (0..self.n_z).map(|i| self.z(i)).collect()
    }
    pub fn ps(&self) -> Vec<f64> {
        (0..self.n_p).map(|j| self.p(j)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FieldKind {
    /// |a|^2 W++ + |b|^2 W--
    Trace,
    /// |a|^2 W++
    DiagPlus,
    /// |b|^2 W--
    DiagMinus,
    /// Re(a b* W+-)
    OffdiagRe,
    /// Im(a b* W+-)
    OffdiagIm,
    /// |a b* W+-|
    OffdiagAbs,
}

impl FieldKind {
    pub const ALL: [FieldKind; 6] = [
        FieldKind::Trace,
        FieldKind::DiagPlus,
        FieldKind::DiagMinus,
        FieldKind::OffdiagRe,
        FieldKind::OffdiagIm,
        FieldKind::OffdiagAbs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Trace => "trace",
            FieldKind::DiagPlus => "diag+",
            FieldKind::DiagMinus => "diag-",
            FieldKind::OffdiagRe => "offdiag-re",
            FieldKind::OffdiagIm => "offdiag-im",
            FieldKind::OffdiagAbs => "offdiag-abs",
        }
    }

    pub fn code(self) -> u32 {
        self as u32
    }

    pub fn from_code(code: u32) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    fn value(self, w: &WignerAt, z: f64, p: f64) -> f64 {
        match self {
            FieldKind::Trace => w.trace(z, p),
            FieldKind::DiagPlus => w.matrix(z, p).w_pp,
            FieldKind::DiagMinus => w.matrix(z, p).w_mm,
            FieldKind::OffdiagRe => w.matrix(z, p).w_pm.re,
            FieldKind::OffdiagIm => w.matrix(z, p).w_pm.im,
            FieldKind::OffdiagAbs => w.matrix(z, p).w_pm.norm(),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown field kind '{s}'")))
    }
}

/// A sampled real field on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    grid: PhaseSpaceGrid,
    kind: FieldKind,
    t: f64,
    values: Vec<f64>,
}

impl WignerField {
    pub fn new(grid: PhaseSpaceGrid, kind: FieldKind, t: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParams(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite value at index {k}")));
        }
        Ok(WignerField {
            grid,
            kind,
            t,
            values,
        })
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }
    pub fn kind(&self) -> FieldKind {
        self.kind
    }
    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Riemann sum over the lattice.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }
}

/// Local maximum of a sampled field with a sub-cell position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub i: usize,
    pub j: usize,
    pub z: f64,
    pub p: f64,
    pub value: f64,
}

/// Stationary point of the quadratic through the 3x3 neighbourhood, in cell
/// units. Fits ln f when all nine values are positive, so a Gaussian peak is
/// located exactly even when tilted.
fn refine(n: &[[f64; 3]; 3]) -> (f64, f64) {
    let positive = n.iter().flatten().all(|v| *v > 0.0);
    let f = |a: usize, b: usize| if positive { n[a][b].ln() } else { n[a][b] };
    let gz = 0.5 * (f(2, 1) - f(0, 1));
    let gp = 0.5 * (f(1, 2) - f(1, 0));
    let hzz = f(2, 1) - 2.0 * f(1, 1) + f(0, 1);
    let hpp = f(1, 2) - 2.0 * f(1, 1) + f(1, 0);
    let hzp = 0.25 * (f(2, 2) - f(2, 0) - f(0, 2) + f(0, 0));
    let det = hzz * hpp - hzp * hzp;
    if !(det > 0.0 && hzz < 0.0) {
        return (0.0, 0.0);
    }
    let dz = -(hpp * gz - hzp * gp) / det;
    let dp = -(hzz * gp - hzp * gz) / det;
    (dz.clamp(-1.0, 1.0), dp.clamp(-1.0, 1.0))
}

/// Interior nodes at least as large as their eight neighbours (strictly
/// larger than the ones already visited) and above `rel_floor` times the
/// global maximum, largest first.
pub fn local_maxima(field: &WignerField, rel_floor: f64) -> Vec<Peak> {
    let g = field.grid;
    let top = field.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    for i in 1..g.n_z() - 1 {
        for j in 1..g.n_p() - 1 {
            let c = field.at(i, j);
            if c <= rel_floor * top {
                continue;
            }
            let mut is_max = true;
            for (di, dj) in [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
                let v = field.at((i as isize + di) as usize, (j as isize + dj) as usize);
                // ties count for the earlier node only
                let earlier = di < 0 || (di == 0 && dj < 0);
                if v > c || (earlier && v == c) {
                    is_max = false;
                    break;
                }
            }
            if is_max {
                let mut nb = [[0.0; 3]; 3];
                for (a, row) in nb.iter_mut().enumerate() {
                    for (b, v) in row.iter_mut().enumerate() {
                        *v = field.at(i + a - 1, j + b - 1);
                    }
                }
                let (oz, op) = refine(&nb);
                out.push(Peak {
                    i,
                    j,
                    z: g.z(i) + oz * g.dz(),
                    p: g.p(j) + op * g.dp(),
                    value: c,
                });
            }
        }
    }
    out.sort_by(|a, b| b.value.total_cmp(&a.value));
    out
}

/// Evaluates the closed form at every node, rows in parallel.
pub fn sample(kind: FieldKind, t: f64, grid: &PhaseSpaceGrid, scn: &Scenario) -> Result<WignerField> {
    let w = WignerAt::new(scn, t)?;
    let mut values = vec![0.0; grid.len()];
    values
        .par_chunks_mut(grid.n_p())
        .enumerate()
        .for_each(|(i, row)| {
            let z = grid.z(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = kind.value(&w, z, grid.p(j));
            }
        });
    WignerField::new(*grid, kind, t, values)
}

/// Window of `+-(center + n_sigmas * width)` on both axes with the default
/// 201 x 201 resolution.
pub fn auto_window(t: f64, scn: &Scenario, n_sigmas: f64) -> Result<PhaseSpaceGrid> {
    auto_window_with(t, scn, n_sigmas, DEFAULT_NODES, DEFAULT_NODES)
}

pub fn auto_window_with(
    t: f64,
    scn: &Scenario,
    n_sigmas: f64,
    n_z: usize,
    n_p: usize,
) -> Result<PhaseSpaceGrid> {
    if !(n_sigmas >= 3.0) {
        return Err(Error::InvalidParams(format!("n_sigmas must be >= 3, got {n_sigmas}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("time must be finite and >= 0, got {t}")));
    }
    let mo = moments(t, scn);
    PhaseSpaceGrid::symmetric(
        mo.z_c + n_sigmas * mo.sigma_z,
        mo.p_c + n_sigmas * mo.sigma_p,
        n_z,
        n_p,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    GridBin,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "grid-bin" | "bin" => Ok(ExportFormat::GridBin),
            _ => Err(Error::Parse(format!("unknown format '{s}' (csv | grid-bin)"))),
        }
    }
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::GridBin => "wsg",
        }
    }
}

pub const MAGIC: &[u8; 4] = b"WSG1";
pub const HEADER_LEN: usize = 64;
const CSV_HEADER: &str = "# kind,t,n_z,n_p,z_min,z_max,p_min,p_max";

/// Writes `bytes` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParams(format!("not a file path: {}", path.display())))?;
    let tmp: PathBuf = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    let res = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if let Err(e) = res {
        let _ = std::fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn encode_csv(field: &WignerField) -> String {
    let g = &field.grid;
    let mut out = String::with_capacity(64 * (g.len() + 2));
    out.push_str(CSV_HEADER);
    out.push('\n');
    out.push_str(&format!(
        "# {},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
        field.kind,
        field.t,
        g.n_z,
        g.n_p,
        g.z_min,
        g.z_max,
        g.p_min,
        g.p_max
    ));
    for i in 0..g.n_z {
        let z = g.z(i);
        for j in 0..g.n_p {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", z, g.p(j), field.at(i, j)));
        }
    }
    out
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}: '{s}'")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}: '{s}'")))
}

pub fn decode_csv(text: &str) -> Result<WignerField> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Parse("missing field csv header".into()));
    }
    let meta = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .ok_or_else(|| Error::Parse("missing field metadata line".into()))?;
    let cells: Vec<&str> = meta.split(',').map(str::trim).collect();
    if cells.len() != 8 {
        return Err(Error::Parse(format!("metadata has {} cells, expected 8", cells.len())));
    }
    let kind: FieldKind = cells[0].parse()?;
    let t = parse_f64(cells[1], "t")?;
    let grid = PhaseSpaceGrid::new(
        parse_f64(cells[4], "z_min")?,
        parse_f64(cells[5], "z_max")?,
        parse_f64(cells[6], "p_min")?,
        parse_f64(cells[7], "p_max")?,
        parse_usize(cells[2], "n_z")?,
        parse_usize(cells[3], "n_p")?,
    )?;
    let mut values = Vec::with_capacity(grid.len());
    for (k, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        let v = line
            .rsplit(',')
            .next()
            .ok_or_else(|| Error::Parse(format!("row {k} is empty")))?;
        values.push(parse_f64(v, "value")?);
    }
    WignerField::new(grid, kind, t, values).map_err(|e| Error::Parse(e.to_string()))
}

pub fn encode_bin(field: &WignerField) -> Vec<u8> {
    let g = &field.grid;
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * g.len());
    out.extend_from_slice(MAGIC);
    for b in [g.z_min, g.z_max, g.p_min, g.p_max] {
        out.extend_from_slice(&b.to_le_bytes());
    }
    out.extend_from_slice(&(g.n_z as u32).to_le_bytes());
    out.extend_from_slice(&(g.n_p as u32).to_le_bytes());
    out.extend_from_slice(&field.t.to_le_bytes());
    out.extend_from_slice(&field.kind.code().to_le_bytes());
    out.extend_from_slice(&[0u8; 8]);
    debug_assert_eq!(out.len(), HEADER_LEN);
    for v in &field.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_bin(bytes: &[u8]) -> Result<WignerField> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::Parse("not a grid-bin file".into()));
    }
    let f = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let u = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let grid = PhaseSpaceGrid::new(f(4), f(12), f(20), f(28), u(36) as usize, u(40) as usize)
        .map_err(|e| Error::Parse(e.to_string()))?;
    let t = f(44);
    let kind = FieldKind::from_code(u(52))
        .ok_or_else(|| Error::Parse(format!("unknown kind code {}", u(52))))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 8 * grid.len() {
        return Err(Error::Parse(format!(
            "payload is {} bytes, expected {}",
            body.len(),
            8 * grid.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    WignerField::new(grid, kind, t, values).map_err(|e| Error::Parse(e.to_string()))
}

pub fn export_field(field: &WignerField, path: &Path, format: ExportFormat) -> Result<()> {
    match format {
        ExportFormat::Csv => write_atomic(path, encode_csv(field).as_bytes()),
        ExportFormat::GridBin => write_atomic(path, &encode_bin(field)),
    }
}

pub fn import_field(path: &Path, format: ExportFormat) -> Result<WignerField> {
    match format {
        ExportFormat::Csv => decode_csv(&read_text(path)?),
        ExportFormat::GridBin => decode_bin(&read_bytes(path)?),
    }
}

/// `gamma,t,delta` rows for any number of curves.
pub fn export_curves_csv(curves: &[CoherenceCurve], path: &Path) -> Result<()> {
    let mut out = String::from("gamma,t,delta\n");
    for c in curves {
        for &(t, d) in &c.samples {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", c.gamma, t, d));
        }
    }
    write_atomic(path, out.as_bytes())
}

/// `gamma,t_d,t_estimate` table.
pub fn export_td_table(points: &[DecoherencePoint], path: &Path) -> Result<()> {
    let mut out = String::from("gamma,t_d,t_estimate\n");
    for p in points {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", p.gamma, p.t_d, p.t_estimate));
    }
    write_atomic(path, out.as_bytes())
}

/// Reads the first two columns (gamma, t_d) of a decoherence table.
pub fn import_td_table(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = read_text(path)?;
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (k == 0 && line.starts_with("gamma")) {
            continue;
        }
        let mut cells = line.split(',');
        let g = parse_f64(cells.next().unwrap_or(""), "gamma")?;
        let t = parse_f64(
            cells
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing t_d", k + 1)))?,
            "t_d",
        )?;
        rows.push((g, t));
    }
    Ok(rows)
}

pub fn export_fit_csv(fit: &PowerLawFit, path: &Path) -> Result<()> {
    let out = format!(
        "a,b,stderr_a,stderr_b,residual,n\n{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
        fit.a, fit.b, fit.stderr_a, fit.stderr_b, fit.residual, fit.n
    );
    write_atomic(path, out.as_bytes())
}

pub fn export_json(value: &impl Serialize, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("json encoding: {e}")))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

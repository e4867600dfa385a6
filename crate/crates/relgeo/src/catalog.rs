//! Built-in surface catalog and the plain-text catalog grammar.
//!
//! A catalog file is a sequence of sections:
//!
//! ```text
//! [sphere]
//! x1 = r*sin(u1)*cos(u2)
//! x2 = r*sin(u1)*sin(u2)
//! x3 = r*cos(u1)
//! u1 = 0.35 .. 2.79
//! u2 = 0.10 .. 6.18
//! param.r = 1.0
//! grid = 10x10
//! note = free text
//! ```
//!
//! Lines starting with `#` are comments. The three component expressions and
//! both domain lines are required; params, grid, and note are optional. The
//! built-in catalog is written in this same grammar and parsed at first use,
//! so extension files behave exactly like the built-ins.

pub use crate::surface::SurfaceSpec;

use std::sync::OnceLock;

use crate::expr::{Bindings, Expr};
use crate::grid::GridSpec;
use crate::{Error, Result};

const BUILTIN: &str = r#"
# Round sphere; every point is a relative umbilic under the euclidean
# normalization, and the equiaffine support function is constant.
[sphere]
x1 = r*sin(u1)*cos(u2)
x2 = r*sin(u1)*sin(u2)
x3 = r*cos(u1)
u1 = 0.35 .. 2.79
u2 = 0.10 .. 6.18
param.r = 1.0
grid = 10x10
note = umbilic everywhere (euclidean normalization); polar caps excluded

[ellipsoid]
x1 = a*sin(u1)*cos(u2)
x2 = b*sin(u1)*sin(u2)
x3 = c*cos(u1)
u1 = 0.35 .. 2.79
u2 = 0.10 .. 6.18
param.a = 1.25
param.b = 1.0
param.c = 0.8
grid = 10x10
note = positive Gaussian curvature, non-constant curvatures

[elliptic-paraboloid]
x1 = u1
x2 = u2
x3 = (u1^2 + u2^2)/2
u1 = -1.0 .. 1.0
u2 = -1.0 .. 1.0
grid = 10x10
note = graph surface with positive Gaussian curvature

[saddle]
x1 = u1
x2 = u2
x3 = u1*u2
u1 = -1.0 .. 1.0
u2 = -1.0 .. 1.0
grid = 10x10
note = negative Gaussian curvature; the relative metric is indefinite

# Outer band of a torus, pinned away from the parabolic circles so the
# Gaussian curvature stays positive on the whole domain.
[torus-outer-band]
x1 = (R + r*cos(u1))*cos(u2)
x2 = (R + r*cos(u1))*sin(u2)
x3 = r*sin(u1)
u1 = -1.10 .. 1.10
u2 = 0.10 .. 6.18
param.R = 2.0
param.r = 0.75
grid = 10x10
note = non-constant positive Gaussian curvature on the outer band
"#;

/// A named collection of surface specifications.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<SurfaceSpec>,
}

impl Catalog {
    /// The built-in catalog (parsed once).
    pub fn builtin() -> &'static Catalog {
        static CACHE: OnceLock<Catalog> = OnceLock::new();
        CACHE.get_or_init(|| Catalog::parse(BUILTIN).expect("built-in catalog parses"))
    }

    pub fn parse(src: &str) -> Result<Catalog> {
        let mut entries: Vec<SurfaceSpec> = Vec::new();
        let mut current: Option<PartialEntry> = None;
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Parse(format!("line {}: unclosed section", lineno + 1)))?
                    .trim()
                    .to_string();
                if let Some(prev) = current.take() {
                    entries.push(prev.finish()?);
                }
                current = Some(PartialEntry::new(name));
                continue;
            }
            let entry = current.as_mut().ok_or_else(|| {
                Error::Parse(format!("line {}: key outside a section", lineno + 1))
            })?;
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            entry.set(key.trim(), value.trim(), lineno + 1)?;
        }
        if let Some(prev) = current.take() {
            entries.push(prev.finish()?);
        }
        Ok(Catalog { entries })
    }

    /// Parse an extension file and append its entries (later names shadow
    /// earlier ones in `get`).
    pub fn extend_from(&mut self, src: &str) -> Result<()> {
        let extra = Catalog::parse(src)?;
        self.entries.extend(extra.entries);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&SurfaceSpec> {
        self.entries
            .iter()
            .rev()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownSurface(name.to_string()))
    }

    pub fn entries(&self) -> &[SurfaceSpec] {
        &self.entries
    }
}

struct PartialEntry {
    name: String,
    components: [Option<Expr>; 3],
    domain: [Option<(f64, f64)>; 2],
    params: Bindings,
    grid: (usize, usize),
    note: String,
}

impl PartialEntry {
    fn new(name: String) -> PartialEntry {
        PartialEntry {
            name,
            components: [None, None, None],
            domain: [None, None],
            params: Bindings::new(),
            grid: (10, 10),
            note: String::new(),
        }
    }

    fn set(&mut self, key: &str, value: &str, lineno: usize) -> Result<()> {
        match key {
            "x1" => self.components[0] = Some(Expr::parse(value)?),
            "x2" => self.components[1] = Some(Expr::parse(value)?),
            "x3" => self.components[2] = Some(Expr::parse(value)?),
            "u1" | "u2" => {
                let (lo, hi) = value
                    .split_once("..")
                    .ok_or_else(|| Error::Parse(format!("line {lineno}: expected `lo .. hi`")))?;
                let lo: f64 = lo
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {lineno}: bad domain bound `{lo}`")))?;
                let hi: f64 = hi
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {lineno}: bad domain bound `{hi}`")))?;
                if hi <= lo {
                    return Err(Error::Parse(format!(
                        "line {lineno}: empty domain {lo} .. {hi}"
                    )));
                }
                self.domain[if key == "u1" { 0 } else { 1 }] = Some((lo, hi));
            }
            "grid" => {
                let g: GridSpec = value.parse()?;
                self.grid = (g.rows, g.cols);
            }
            "note" => self.note = value.to_string(),
            _ if key.starts_with("param.") => {
                let name = key.trim_start_matches("param.").to_string();
                let v: f64 = value.parse().map_err(|_| {
                    Error::Parse(format!("line {lineno}: bad param value `{value}`"))
                })?;
                self.params.insert(name, v);
            }
            _ => return Err(Error::Parse(format!("line {lineno}: unknown key `{key}`"))),
        }
        Ok(())
    }

    fn finish(self) -> Result<SurfaceSpec> {
        let [x1, x2, x3] = self.components;
        let missing = |what: &str| Error::Parse(format!("surface `{}`: missing {what}", self.name));
        Ok(SurfaceSpec {
            components: [
                x1.ok_or_else(|| missing("x1"))?,
                x2.ok_or_else(|| missing("x2"))?,
                x3.ok_or_else(|| missing("x3"))?,
            ],
            domain: [
                self.domain[0].ok_or_else(|| missing("u1 domain"))?,
                self.domain[1].ok_or_else(|| missing("u2 domain"))?,
            ],
            name: self.name,
            params: self.params,
            default_grid: self.grid,
            note: self.note,
        })
    }
}

//! Protocols: sequences of region-restricted layer SWAPs and in-plane moves.

use super::geom::{Affine, FoldGeometry, Point, Site};
use super::perm::Permutation;
use crate::mcg::MCGWord;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which part of each layer a SWAP touches.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum Region {
    All,
    Named(String),
}

impl From<String> for Region {
    fn from(s: String) -> Self {
        if s.eq_ignore_ascii_case("all") {
            Region::All
        } else {
            Region::Named(s)
        }
    }
}

impl From<Region> for String {
    fn from(r: Region) -> Self {
        r.to_string()
    }
}

impl From<&str> for Region {
    fn from(s: &str) -> Self {
        Region::from(s.to_string())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::All => f.write_str("ALL"),
            Region::Named(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProtocolStep {
    /// Exchanges layers at every stack of the region.
    Swap { region: Region, perm: Permutation },
    /// Moves every qubit within its own layer by an in-plane isometry.
    /// Transversal only when it fixes every stack.
    Move { label: String, map: Affine },
}

impl ProtocolStep {
    pub fn swap(region: impl Into<Region>, cycles: &str, layers: usize) -> Result<Self> {
        Ok(ProtocolStep::Swap { region: region.into(), perm: Permutation::parse(cycles, layers)? })
    }
}

impl fmt::Display for ProtocolStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolStep::Swap { region: Region::All, perm } => write!(f, "SWAP{perm}"),
            ProtocolStep::Swap { region, perm } => write!(f, "SWAP_{region}{perm}"),
            ProtocolStep::Move { label, .. } => write!(f, "MOVE[{label}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub name: String,
    pub geometry: FoldGeometry,
    /// Applied first to last.
    pub steps: Vec<ProtocolStep>,
    pub expected: MCGWord,
    #[serde(default)]
    pub notes: String,
    /// Listed for completeness but has no published steps.
    #[serde(default)]
    pub stub: bool,
}

impl Protocol {
    pub fn describe_steps(&self) -> String {
        // Operator order: the last step is written leftmost.
        let parts: Vec<String> = self.steps.iter().rev().map(|s| format!("[{s}]")).collect();
        parts.join(" ")
    }
}

fn check_steps(steps: &[ProtocolStep], g: &FoldGeometry) -> Result<()> {
    let regions = g.regions();
    for s in steps {
        if let ProtocolStep::Swap { region, perm } = s {
            if perm.len() != g.layers() {
                return Err(Error::InvalidPermutation(format!(
                    "{s} acts on {} layers but `{}` has {}",
                    perm.len(),
                    g.name,
                    g.layers()
                )));
            }
            if let Region::Named(r) = region {
                if !regions.contains(r) {
                    return Err(Error::InvalidPermutation(format!("region `{r}` does not exist in `{}`", g.name)));
                }
            }
        }
    }
    Ok(())
}

fn step_site(g: &FoldGeometry, step: &ProtocolStep, s: Site) -> Result<Site> {
    match step {
        ProtocolStep::Swap { region, perm } => {
            let hit = match region {
                Region::All => true,
                Region::Named(r) => g.pieces[s.piece].region == *r,
            };
            Ok(if hit { Site { layer: perm.apply(s.layer), ..s } } else { s })
        }
        ProtocolStep::Move { map, .. } => {
            let moved = g.locate1(map.apply(s.y))?;
            Ok(Site { layer: s.layer, ..moved })
        }
    }
}

/// Runs the protocol on the site holding torus point `p`; returns the final
/// site and its torus point.
pub fn apply(steps: &[ProtocolStep], g: &FoldGeometry, p: Point) -> Result<(Site, Point)> {
    let mut s = g.locate1(p)?;
    for st in steps {
        s = step_site(g, st, s)?;
    }
    Ok((s, g.torus_point(s.piece, s.layer, s.y)))
}

/// Footprint points whose image under the in-plane moves preceding some step
/// lands on a piece edge. Discontinuities can only occur there.
fn critical_points(steps: &[ProtocolStep], g: &FoldGeometry) -> Result<Vec<Point>> {
    let mut edges = Vec::new();
    for piece in &g.pieces {
        let m = piece.polygon.len();
        for k in 0..m {
            let (a, b) = (piece.polygon[k], piece.polygon[(k + 1) % m]);
            for f in [0.293, 0.5, 0.707] {
                edges.push([a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]);
            }
        }
    }
    let moves: Vec<&Affine> = steps
        .iter()
        .filter_map(|s| match s {
            ProtocolStep::Move { map, .. } => Some(map),
            _ => None,
        })
        .collect();
    let mut out = edges.clone();
    for r in 1..=moves.len() {
        let mut set = edges.clone();
        for mu in moves[..r].iter().rev() {
            let inv = mu.inverse();
            let mut next = Vec::new();
            for &q in &set {
                let piece = g.piece_at(q).ok_or_else(|| Error::Geometry("critical point off the footprint".into()))?;
                for psi in &g.pieces[piece].labels {
                    let y = g.locate1(inv.apply(psi.apply(q)))?.y;
                    if !next.iter().any(|z: &Point| (z[0] - y[0]).abs() + (z[1] - y[1]).abs() < 1e-9) {
                        next.push(y);
                    }
                }
            }
            set = next;
            if set.len() > 20_000 {
                return Err(Error::ResourceLimit("too many critical points in closure check".into()));
            }
        }
        out.extend(set);
    }
    Ok(out)
}

/// `None` if the protocol maps the code space to itself, otherwise a
/// description of where the induced surface map tears.
pub fn closure_witness(steps: &[ProtocolStep], g: &FoldGeometry) -> Result<Option<String>> {
    check_steps(steps, g)?;
    let eps = 1e-6;
    let dirs: [Point; 2] = [[0.8191520, 0.5735764], [-0.2588190, 0.9659258]];
    let probe = |p: Point, u: Point| -> Result<Option<String>> {
        let a = [p[0] + eps * u[0], p[1] + eps * u[1]];
        let b = [p[0] - eps * u[0], p[1] - eps * u[1]];
        let (_, fa) = apply(steps, g, a)?;
        let (_, fb) = apply(steps, g, b)?;
        let d_out = g.norm(g.reduce([fa[0] - fb[0], fa[1] - fb[1]]));
        let d_in = g.norm([a[0] - b[0], a[1] - b[1]]);
        Ok((d_out > d_in * (1.0 + 1e-3) + 1e-12)
            .then(|| format!("surface map tears near torus point ({:.4}, {:.4})", p[0], p[1])))
    };
    for q in critical_points(steps, g)? {
        let piece = g.piece_at(q).ok_or_else(|| Error::Geometry("critical point off the footprint".into()))?;
        for psi in &g.pieces[piece].labels {
            let p = psi.apply(q);
            for u in dirs {
                if let Some(w) = probe(p, u)? {
                    return Ok(Some(w));
                }
            }
        }
    }
    for p in g.sample_points(256) {
        if let Some(w) = probe(p, dirs[0])? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn check_closure(steps: &[ProtocolStep], g: &FoldGeometry) -> bool {
    matches!(closure_witness(steps, g), Ok(None))
}

/// True iff every step only exchanges layers within single stacks.
pub fn check_transversal(steps: &[ProtocolStep], g: &FoldGeometry) -> bool {
    if check_steps(steps, g).is_err() {
        return false;
    }
    let samples = g.sample_points(128);
    steps.iter().all(|s| match s {
        ProtocolStep::Swap { .. } => true,
        ProtocolStep::Move { map, .. } => samples.iter().all(|&p| {
            let Ok(site) = g.locate1(p) else { return false };
            match g.locate1(map.apply(site.y)) {
                Ok(m) => (m.y[0] - site.y[0]).abs() + (m.y[1] - site.y[1]).abs() < 1e-7,
                Err(_) => false,
            }
        }),
    })
}

/// Disjoint cycles of a protocol made only of global SWAPs. Each layer maps to
/// the layer whose original content it holds at the end, which is the reading
/// used when a product of SWAPs is written left to right.
pub fn cycle_decomposition(steps: &[ProtocolStep], layers: usize) -> Result<Vec<Vec<usize>>> {
    let mut content = Permutation::identity(layers);
    for s in steps {
        match s {
            ProtocolStep::Swap { region: Region::All, perm } => {
                if perm.len() != layers {
                    return Err(Error::InvalidPermutation(format!("{s} does not act on {layers} layers")));
                }
                content = content.then(perm);
            }
            _ => return Err(Error::NotGloballyDecomposable),
        }
    }
    Ok(content.inverse().cycles())
}

/// `p1 ∘ p2`: the steps of `p2` run first. The expected word is `w1·w2`.
pub fn compose_protocols(p1: &Protocol, p2: &Protocol) -> Result<Protocol> {
    if p1.geometry != p2.geometry {
        return Err(Error::GeometryMismatch(p1.geometry.name.clone(), p2.geometry.name.clone()));
    }
    let mut steps = p2.steps.clone();
    steps.extend(p1.steps.iter().cloned());
    Ok(Protocol {
        name: format!("{}∘{}", p1.name, p2.name),
        geometry: p1.geometry.clone(),
        steps,
        expected: p1.expected.concat(&p2.expected),
        notes: String::new(),
        stub: p1.stub || p2.stub,
    })
}

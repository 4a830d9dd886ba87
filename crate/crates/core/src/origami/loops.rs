//! Wilson-loop tracing and the two loop rewrite rules.
//!
//! A loop on the folded surface is a cyclic list of segments. A `Run` is a
//! stretch inside one piece and layer, carrying its displacement on the torus.
//! A `Circle` winds around a genon in one layer. Two rules act on paths:
//!
//! * R1 deletes a double loop around a single genon (`turns` drops by two).
//! * R2 moves a path to the partner layer of every segment and reverses it.
//!
//! Neither rule changes the homology class, which is the sum of the run
//! displacements expressed in the reference basis `(α, β)`.

use super::geom::{FoldGeometry, Point};
use super::protocol::{apply, closure_witness, ProtocolStep};
use crate::mcg::MCGMatrix;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const DEFAULT_BUDGET: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Run { piece: usize, region: String, layer: usize, disp: Point },
    Circle { genon: usize, turns: i32, layer: usize },
}

impl Segment {
    fn key(&self) -> (u8, usize, usize, i64, i64) {
        match self {
            Segment::Run { piece, layer, disp, .. } => {
                (0, *piece, *layer, (disp[0] * 1e6).round() as i64, (disp[1] * 1e6).round() as i64)
            }
            Segment::Circle { genon, turns, layer } => (1, *genon, *layer, *turns as i64, 0),
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Run { region, layer, disp, .. } => {
                write!(f, "{}@{region}({:+.3},{:+.3})", layer + 1, disp[0], disp[1])
            }
            Segment::Circle { genon, turns, layer } => write!(f, "{}@genon{genon}^{turns}", layer + 1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LoopPath {
    pub segments: Vec<Segment>,
}

impl fmt::Display for LoopPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.segments.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", parts.join(" → "))
    }
}

/// Partner layers for R2, per piece. `None` when the surface has no sheet
/// exchange, in which case R2 never applies.
#[derive(Clone, Debug)]
pub struct RewriteContext {
    partners: Option<Vec<Vec<usize>>>,
}

impl RewriteContext {
    pub fn for_geometry(g: &FoldGeometry) -> Self {
        let partners = (0..g.pieces.len()).map(|i| g.deck_partner(i)).collect::<Option<Vec<_>>>();
        RewriteContext { partners }
    }

    pub fn has_r2(&self) -> bool {
        self.partners.is_some()
    }
}

impl LoopPath {
    /// Homology class as a torus displacement.
    pub fn class(&self) -> Point {
        self.segments.iter().fold([0.0, 0.0], |acc, s| match s {
            Segment::Run { disp, .. } => [acc[0] + disp[0], acc[1] + disp[1]],
            Segment::Circle { .. } => acc,
        })
    }

    fn r1_candidates(&self) -> Vec<usize> {
        self.segments
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Segment::Circle { turns, .. } if turns.abs() >= 2))
            .map(|(i, _)| i)
            .collect()
    }

    fn apply_r1(&mut self, i: usize) {
        if let Segment::Circle { turns, .. } = &mut self.segments[i] {
            *turns -= 2 * turns.signum();
            if *turns == 0 {
                self.segments.remove(i);
            }
        }
    }

    fn r2(&self, ctx: &RewriteContext) -> Option<LoopPath> {
        let partners = ctx.partners.as_ref()?;
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| match s {
                Segment::Run { piece, region, layer, disp } => {
                    Segment::Run { piece: *piece, region: region.clone(), layer: partners[*piece][*layer], disp: *disp }
                }
                // A circle's layer is read in the first piece; genon circles
                // only come from test insertions, which use piece 0.
                Segment::Circle { genon, turns, layer } => {
                    Segment::Circle { genon: *genon, turns: -turns, layer: partners[0][*layer] }
                }
            })
            .collect();
        Some(LoopPath { segments })
    }

    fn merge_runs(&mut self) {
        let mut out: Vec<Segment> = Vec::with_capacity(self.segments.len());
        for s in self.segments.drain(..) {
            if let (
                Some(Segment::Run { piece: p0, layer: l0, disp: d0, .. }),
                Segment::Run { piece, layer, disp, .. },
            ) = (out.last_mut(), &s)
            {
                if *p0 == *piece && *l0 == *layer {
                    d0[0] += disp[0];
                    d0[1] += disp[1];
                    continue;
                }
            }
            out.push(s);
        }
        // The path is cyclic: fold the tail into the head when they match.
        while out.len() > 1 {
            let (first, last) = (&out[0], &out[out.len() - 1]);
            match (first, last) {
                (Segment::Run { piece: p0, layer: l0, .. }, Segment::Run { piece, layer, disp, .. })
                    if p0 == piece && l0 == layer =>
                {
                    let d = *disp;
                    out.pop();
                    if let Segment::Run { disp: d0, .. } = &mut out[0] {
                        d0[0] += d[0];
                        d0[1] += d[1];
                    }
                }
                _ => break,
            }
        }
        self.segments = out;
    }

    fn rotate_min(&mut self) {
        let n = self.segments.len();
        if n < 2 {
            return;
        }
        let keys: Vec<_> = self.segments.iter().map(Segment::key).collect();
        let best = (0..n)
            .min_by(|&a, &b| {
                let ka = (0..n).map(|i| keys[(a + i) % n]);
                let kb = (0..n).map(|i| keys[(b + i) % n]);
                ka.cmp(kb)
            })
            .unwrap_or(0);
        self.segments.rotate_left(best);
    }

    fn keys(&self) -> Vec<(u8, usize, usize, i64, i64)> {
        self.segments.iter().map(Segment::key).collect()
    }

    fn canonical(mut self, ctx: &RewriteContext) -> (LoopPath, bool) {
        self.merge_runs();
        self.rotate_min();
        if let Some(mut other) = self.r2(ctx) {
            other.merge_runs();
            other.rotate_min();
            if other.keys() < self.keys() {
                return (other, true);
            }
        }
        (self, false)
    }

    fn budget_error(&self, budget: usize) -> Error {
        Error::RewriteBudget { budget, path: self.to_string() }
    }

    /// Applies R1 until no double loop is left, then picks the canonical
    /// rotation and R2 representative. Returns the normal form and the number
    /// of rule applications.
    pub fn normalize(&self, ctx: &RewriteContext, budget: usize) -> Result<(LoopPath, usize)> {
        let mut path = self.clone();
        let mut used = 0;
        while let Some(&i) = path.r1_candidates().first() {
            used += 1;
            if used > budget {
                return Err(path.budget_error(budget));
            }
            path.apply_r1(i);
        }
        let (nf, flipped) = path.canonical(ctx);
        used += flipped as usize;
        if used > budget {
            return Err(nf.budget_error(budget));
        }
        Ok((nf, used))
    }

    /// Same normal form as [`LoopPath::normalize`], reached by applying R1 and
    /// R2 in a random order.
    pub fn normalize_random<R: Rng>(
        &self,
        ctx: &RewriteContext,
        budget: usize,
        rng: &mut R,
    ) -> Result<(LoopPath, usize)> {
        let mut path = self.clone();
        let mut used = 0;
        loop {
            let cands = path.r1_candidates();
            let try_r2 = ctx.has_r2() && rng.gen_bool(0.3);
            if cands.is_empty() && !try_r2 {
                break;
            }
            used += 1;
            if used > budget {
                return Err(path.budget_error(budget));
            }
            if try_r2 {
                path = path.r2(ctx).expect("context has partners");
            } else {
                path.apply_r1(cands[rng.gen_range(0..cands.len())]);
            }
            if rng.gen_bool(0.5) {
                path.merge_runs();
            }
        }
        let (nf, flipped) = path.canonical(ctx);
        Ok((nf, used + flipped as usize))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Samples per reference loop.
    pub samples: usize,
    pub budget: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { samples: 600, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopTrace {
    pub matrix: MCGMatrix,
    /// Normal forms of the images of α and β.
    pub alpha_image: LoopPath,
    pub beta_image: LoopPath,
    pub rewrites: usize,
}

/// Generic base point for the reference loops.
const BASE: Point = [0.123_456_7, 0.076_543_2];

/// Pushes α and β through the protocol and records the image paths.
pub fn image_paths(steps: &[ProtocolStep], g: &FoldGeometry, samples: usize) -> Result<[(LoopPath, Point); 2]> {
    let b = BASE;
    let mut out = Vec::with_capacity(2);
    for (name, v) in [("α", g.alpha), ("β", g.beta)] {
        let step_len = g.norm([v[0] / samples as f64, v[1] / samples as f64]);
        let (_, mut prev) = apply(steps, g, b)?;
        let mut path = LoopPath::default();
        let mut lift = [0.0, 0.0];
        for i in 1..=samples {
            let t = i as f64 / samples as f64;
            let (site, cur) = apply(steps, g, [b[0] + v[0] * t, b[1] + v[1] * t])?;
            let d = g.reduce([cur[0] - prev[0], cur[1] - prev[1]]);
            if g.norm(d) > step_len * (1.0 + 1e-3) + 1e-12 {
                return Err(Error::NotClosed(format!("image of {name} jumps at sample {i} of {samples}")));
            }
            lift = [lift[0] + d[0], lift[1] + d[1]];
            path.segments.push(Segment::Run {
                piece: site.piece,
                region: g.pieces[site.piece].region.clone(),
                layer: site.layer,
                disp: d,
            });
            prev = cur;
        }
        path.merge_runs();
        out.push((path, lift));
    }
    let beta = out.pop().expect("two loops");
    let alpha = out.pop().expect("two loops");
    Ok([alpha, beta])
}

fn solve_basis(g: &FoldGeometry, v: Point) -> Result<(i64, i64)> {
    let (a, b) = (g.alpha, g.beta);
    let det = a[0] * b[1] - a[1] * b[0];
    let p = (v[0] * b[1] - v[1] * b[0]) / det;
    let q = (a[0] * v[1] - a[1] * v[0]) / det;
    let (pr, qr) = (p.round(), q.round());
    if (p - pr).abs() > 1e-6 || (q - qr).abs() > 1e-6 {
        return Err(Error::Geometry(format!("loop class ({p:.6}, {q:.6}) is not an integer combination of α, β")));
    }
    Ok((pr as i64, qr as i64))
}

pub fn trace_loops_with(steps: &[ProtocolStep], g: &FoldGeometry, opts: &TraceOptions) -> Result<LoopTrace> {
    if let Some(w) = closure_witness(steps, g)? {
        return Err(Error::NotClosed(w));
    }
    let ctx = RewriteContext::for_geometry(g);
    let [(pa, la), (pb, lb)] = image_paths(steps, g, opts.samples)?;
    let mut cols = Vec::with_capacity(2);
    let mut rewrites = 0;
    let mut normal = Vec::with_capacity(2);
    for (path, lift) in [(pa, la), (pb, lb)] {
        let (nf, used) = path.normalize(&ctx, opts.budget)?;
        rewrites += used;
        let c = nf.class();
        if (c[0] - lift[0]).abs() + (c[1] - lift[1]).abs() > 1e-6 {
            return Err(Error::Geometry(format!("rewritten path {nf} lost its class")));
        }
        cols.push(solve_basis(g, c)?);
        normal.push(nf);
    }
    let matrix = MCGMatrix::new(cols[0].0, cols[1].0, cols[0].1, cols[1].1)?;
    let beta_image = normal.pop().expect("two loops");
    let alpha_image = normal.pop().expect("two loops");
    Ok(LoopTrace { matrix, alpha_image, beta_image, rewrites })
}

/// The mapping-class matrix a closed protocol induces; columns are the images
/// of α and β.
pub fn trace_loops(steps: &[ProtocolStep], g: &FoldGeometry) -> Result<MCGMatrix> {
    trace_loops_with(steps, g, &TraceOptions::default()).map(|t| t.matrix)
}

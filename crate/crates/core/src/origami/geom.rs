//! Folded surfaces as labelled footprints over a torus.
//!
//! The unfolded surface is the torus `R²/Λ`, written in integer coordinates of
//! a fine lattice. A folded geometry is a footprint made of convex pieces; at
//! each footprint point `y` and layer `ℓ` sits the torus point `ψ_ℓ(y)`, where
//! `ψ_ℓ` is an affine map with integer linear part. Creases, local gluings and
//! genon branch cuts are all read off from how these labels meet along edges.

use super::perm::Permutation;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2};
use std::fmt;

pub type Point = [f64; 2];

/// Offset used to step across an edge when classifying it.
const EDGE_STEP: f64 = 1e-6;
/// Points closer than this to a piece edge count as on the edge.
const INSIDE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub m: [[i64; 2]; 2],
    pub t: Point,
}

impl Affine {
    pub const IDENTITY: Affine = Affine { m: [[1, 0], [0, 1]], t: [0.0, 0.0] };

    pub fn new(m: [[i64; 2]; 2], t: Point) -> Self {
        Affine { m, t }
    }

    pub fn linear(m: [[i64; 2]; 2]) -> Self {
        Affine { m, t: [0.0, 0.0] }
    }

    pub fn translation(t: Point) -> Self {
        Affine { m: [[1, 0], [0, 1]], t }
    }

    pub fn apply_linear(&self, v: Point) -> Point {
        let m = &self.m;
        [m[0][0] as f64 * v[0] + m[0][1] as f64 * v[1], m[1][0] as f64 * v[0] + m[1][1] as f64 * v[1]]
    }

    pub fn apply(&self, p: Point) -> Point {
        let v = self.apply_linear(p);
        [v[0] + self.t[0], v[1] + self.t[1]]
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Affine) -> Affine {
        let (a, b) = (&self.m, &other.m);
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        Affine { m, t: self.apply(other.t) }
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Inverse of a unimodular map.
    pub fn inverse(&self) -> Affine {
        let d = self.det();
        debug_assert!(d.abs() == 1, "affine label must be unimodular");
        let m = &self.m;
        let inv = Affine::linear([[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]]);
        let t = inv.apply_linear(self.t);
        Affine { m: inv.m, t: [-t[0], -t[1]] }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}+({}, {})", self.m, self.t[0], self.t[1])
    }
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        / 2.0
}

fn ccw(mut poly: Vec<Point>) -> Vec<Point> {
    if signed_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

/// Smallest signed distance from `p` to the edges of a counter-clockwise convex polygon;
/// positive inside.
pub fn inside_margin(poly: &[Point], p: Point) -> f64 {
    let n = poly.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        best = best.min(cross(a, b, p) / len);
    }
    best
}

fn clip(poly: &[Point], a: Point, b: Point) -> Vec<Point> {
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let (sp, sq) = (cross(a, b, p), cross(a, b, q));
        if sp >= -1e-12 {
            out.push(p);
        }
        if (sp > 1e-12 && sq < -1e-12) || (sp < -1e-12 && sq > 1e-12) {
            let t = sp / (sp - sq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Intersection of two convex polygons, or `None` if it has no area.
pub fn intersect(p: &[Point], q: &[Point]) -> Option<Vec<Point>> {
    let q = ccw(q.to_vec());
    let mut r = ccw(p.to_vec());
    for i in 0..q.len() {
        if r.len() < 3 {
            return None;
        }
        r = clip(&r, q[i], q[(i + 1) % q.len()]);
    }
    // Drop near-duplicate vertices left over from clipping.
    let mut dedup: Vec<Point> = Vec::with_capacity(r.len());
    for v in r {
        if dedup.last().is_none_or(|w| (v[0] - w[0]).abs() + (v[1] - w[1]).abs() > 1e-12) {
            dedup.push(v);
        }
    }
    if dedup.len() > 1 {
        let (f, l) = (dedup[0], dedup[dedup.len() - 1]);
        if (f[0] - l[0]).abs() + (f[1] - l[1]).abs() <= 1e-12 {
            dedup.pop();
        }
    }
    (dedup.len() >= 3 && signed_area(&dedup).abs() > 1e-9).then_some(dedup)
}

fn image(a: &Affine, poly: &[Point]) -> Vec<Point> {
    ccw(poly.iter().map(|&p| a.apply(p)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    SquareTorus,
    HexagonTorus,
    PlanarBilayerGenons,
    TriangularGenons,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Base::SquareTorus => "square_torus",
            Base::HexagonTorus => "hexagon_torus",
            Base::PlanarBilayerGenons => "planar_bilayer_genons",
            Base::TriangularGenons => "triangular_genons",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chirality {
    #[serde(rename = "C")]
    Original,
    #[serde(rename = "C̄")]
    Reversed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub region: String,
    pub polygon: Vec<Point>,
    /// One torus label per layer.
    pub labels: Vec<Affine>,
}

/// Where a site of the folded surface sits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Site {
    pub piece: usize,
    pub layer: usize,
    pub y: Point,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Layers continue into the neighbouring piece unchanged.
    Interior,
    /// Layers turn back at the edge: a fold crease or a local gluing.
    GappedBoundary,
    /// Layers continue into the neighbouring piece but are exchanged.
    BranchCut,
    /// Layers continue at a distant edge.
    Glued,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub piece: usize,
    pub region: String,
    pub from: Point,
    pub to: Point,
    pub kind: EdgeKind,
    pub pairing: Permutation,
}

/// A mirror (or other torus symmetry) to fold along, together with the part
/// of the footprint that is kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldAxis {
    pub name: String,
    pub mirror: Affine,
    pub keep: Vec<Vec<Point>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldGeometry {
    pub name: String,
    pub base: Base,
    /// Columns generate `Λ`.
    pub lattice: [[i64; 2]; 2],
    pub gram: [[f64; 2]; 2],
    pub alpha: Point,
    pub beta: Point,
    /// Sheet exchange of the genon double cover, if any.
    pub deck: Option<Affine>,
    pub folds: Vec<String>,
    pub pieces: Vec<Piece>,
}

impl FoldGeometry {
    pub fn layers(&self) -> usize {
        self.pieces.first().map_or(0, |p| p.labels.len())
    }

    pub fn regions(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.pieces {
            if !out.contains(&p.region) {
                out.push(p.region.clone());
            }
        }
        out
    }

    fn lat(&self) -> [[f64; 2]; 2] {
        let l = &self.lattice;
        [[l[0][0] as f64, l[0][1] as f64], [l[1][0] as f64, l[1][1] as f64]]
    }

    fn lat_inv(&self) -> [[f64; 2]; 2] {
        let l = self.lat();
        let d = l[0][0] * l[1][1] - l[0][1] * l[1][0];
        [[l[1][1] / d, -l[0][1] / d], [-l[1][0] / d, l[0][0] / d]]
    }

    fn lattice_vec(&self, i: f64, j: f64) -> Point {
        let l = self.lat();
        [l[0][0] * i + l[0][1] * j, l[1][0] * i + l[1][1] * j]
    }

    fn lattice_coords(&self, v: Point) -> Point {
        let li = self.lat_inv();
        [li[0][0] * v[0] + li[0][1] * v[1], li[1][0] * v[0] + li[1][1] * v[1]]
    }

    pub fn in_lattice(&self, v: Point, tol: f64) -> bool {
        let c = self.lattice_coords(v);
        (c[0] - c[0].round()).abs() < tol && (c[1] - c[1].round()).abs() < tol
    }

    pub fn norm(&self, v: Point) -> f64 {
        let g = &self.gram;
        (v[0] * (g[0][0] * v[0] + g[0][1] * v[1]) + v[1] * (g[1][0] * v[0] + g[1][1] * v[1])).max(0.0).sqrt()
    }

    /// Shortest representative of `d` modulo `Λ`.
    pub fn reduce(&self, d: Point) -> Point {
        let c = self.lattice_coords(d);
        let (ci, cj) = (c[0].round(), c[1].round());
        let mut best = (f64::INFINITY, d);
        for i in -2..=2 {
            for j in -2..=2 {
                let w = self.lattice_vec(ci + i as f64, cj + j as f64);
                let v = sub(d, w);
                let n = self.norm(v);
                if n < best.0 {
                    best = (n, v);
                }
            }
        }
        best.1
    }

    fn same_mod_lattice(&self, a: &Affine, b: &Affine) -> bool {
        a.m == b.m && self.in_lattice(sub(a.t, b.t), 1e-9)
    }

    pub fn torus_point(&self, piece: usize, layer: usize, y: Point) -> Point {
        self.pieces[piece].labels[layer].apply(y)
    }

    /// All sites whose torus point is `p`.
    pub fn locate(&self, p: Point) -> Vec<Site> {
        let mut hits = Vec::new();
        for (pi, piece) in self.pieces.iter().enumerate() {
            let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for &v in &piece.polygon {
                let c = self.lattice_coords(v);
                for k in 0..2 {
                    lo[k] = lo[k].min(c[k]);
                    hi[k] = hi[k].max(c[k]);
                }
            }
            for (layer, psi) in piece.labels.iter().enumerate() {
                let y0 = psi.inverse().apply(p);
                let c = self.lattice_coords(y0);
                // y = y0 + Λk lies in the piece only if c + k falls in [lo, hi].
                let (i0, i1) = ((lo[0] - c[0]).floor() as i64 - 1, (hi[0] - c[0]).ceil() as i64 + 1);
                let (j0, j1) = ((lo[1] - c[1]).floor() as i64 - 1, (hi[1] - c[1]).ceil() as i64 + 1);
                for i in i0..=i1 {
                    for j in j0..=j1 {
                        let w = self.lattice_vec(i as f64, j as f64);
                        let y = [y0[0] + w[0], y0[1] + w[1]];
                        let margin = inside_margin(&piece.polygon, y);
                        if margin >= -INSIDE_TOL {
                            hits.push(Site { piece: pi, layer, y, margin });
                        }
                    }
                }
            }
        }
        hits
    }

    /// Index of the piece containing footprint point `y`.
    pub fn piece_at(&self, y: Point) -> Option<usize> {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, p)| (i, inside_margin(&p.polygon, y)))
            .filter(|&(_, m)| m >= -INSIDE_TOL)
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    /// The site of `p`, preferring the piece it lies deepest inside.
    pub fn locate1(&self, p: Point) -> Result<Site> {
        self.locate(p)
            .into_iter()
            .max_by(|a, b| a.margin.total_cmp(&b.margin))
            .ok_or_else(|| Error::Geometry(format!("torus point ({:.6}, {:.6}) is not covered", p[0], p[1])))
    }

    pub fn orientation(&self) -> Vec<Chirality> {
        match self.pieces.first() {
            None => Vec::new(),
            Some(p) => {
                p.labels.iter().map(|a| if a.det() > 0 { Chirality::Original } else { Chirality::Reversed }).collect()
            }
        }
    }

    /// For each piece, the layer whose label differs from layer `ℓ` by the deck map.
    pub fn deck_partner(&self, piece: usize) -> Option<Vec<usize>> {
        let deck = self.deck.as_ref()?;
        let labels = &self.pieces[piece].labels;
        labels
            .iter()
            .map(|psi| {
                let target = deck.after(psi);
                labels.iter().position(|q| self.same_mod_lattice(q, &target))
            })
            .collect()
    }

    /// Low-discrepancy sample points in the unit cell of `Λ`.
    pub(crate) fn sample_points(&self, n: usize) -> Vec<Point> {
        // Plastic-number sequence, shifted away from rational points.
        let (a1, a2) = (0.754_877_666_246_692_7, 0.569_840_290_998_053_3);
        (0..n)
            .map(|k| {
                let u = (0.2113 + a1 * k as f64).fract();
                let v = (0.4271 + a2 * k as f64).fract();
                self.lattice_vec(u, v)
            })
            .collect()
    }

    /// Checks the footprint tiles the torus once per layer and that the
    /// edge data obeys the chirality rules.
    pub fn validate(&self) -> Result<()> {
        let n = self.layers();
        if n == 0 || self.pieces.is_empty() {
            return Err(Error::Geometry("geometry has no layers".into()));
        }
        let l = &self.lattice;
        if l[0][0] * l[1][1] - l[0][1] * l[1][0] == 0 {
            return Err(Error::Geometry("degenerate lattice".into()));
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if p.labels.len() != n {
                return Err(Error::Geometry(format!("piece {i} has {} layers, expected {n}", p.labels.len())));
            }
            if p.polygon.len() < 3 || signed_area(&p.polygon) <= 0.0 {
                return Err(Error::Geometry(format!("piece {i} is not a counter-clockwise polygon")));
            }
            let m = p.polygon.len();
            for k in 0..m {
                if cross(p.polygon[k], p.polygon[(k + 1) % m], p.polygon[(k + 2) % m]) < -1e-12 {
                    return Err(Error::Geometry(format!("piece {i} is not convex")));
                }
            }
            if p.labels.iter().any(|a| a.det().abs() != 1) {
                return Err(Error::Geometry(format!("piece {i} has a non-unimodular label")));
            }
        }
        let orient = self.orientation();
        for (i, p) in self.pieces.iter().enumerate() {
            for (k, a) in p.labels.iter().enumerate() {
                if (a.det() > 0) != (orient[k] == Chirality::Original) {
                    return Err(Error::Geometry(format!("layer {} changes chirality in piece {i}", k + 1)));
                }
            }
        }
        for p in self.sample_points(64) {
            let hits = self.locate(p).len();
            if hits != 1 {
                return Err(Error::Geometry(format!(
                    "footprint is not a fundamental domain: ({:.4}, {:.4}) is covered {hits} times",
                    p[0], p[1]
                )));
            }
        }
        for e in self.boundaries()? {
            match e.kind {
                EdgeKind::GappedBoundary | EdgeKind::BranchCut => {
                    if !e.pairing.is_involution() {
                        return Err(Error::Geometry(format!(
                            "pairing {} on edge {:?}-{:?} is not an involution",
                            e.pairing, e.from, e.to
                        )));
                    }
                    let want_same = e.kind == EdgeKind::BranchCut;
                    for (a, &b) in e.pairing.images().iter().enumerate() {
                        if a != b && (orient[a] == orient[b]) != want_same {
                            return Err(Error::Geometry(format!(
                                "edge {:?}-{:?} joins layers {} and {} of incompatible chirality",
                                e.from,
                                e.to,
                                a + 1,
                                b + 1
                            )));
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Classifies every footprint edge by stepping across it in each layer.
    pub fn boundaries(&self) -> Result<Vec<EdgeRecord>> {
        let n = self.layers();
        let mut out: Vec<EdgeRecord> = Vec::new();
        for (pi, piece) in self.pieces.iter().enumerate() {
            let m = piece.polygon.len();
            for k in 0..m {
                let (a, b) = (piece.polygon[k], piece.polygon[(k + 1) % m]);
                let d = sub(b, a);
                let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
                let out_n = [d[1] / len, -d[0] / len];
                for frac in [FRAC_1_PI, FRAC_1_SQRT_2] {
                    let q = [a[0] + frac * d[0], a[1] + frac * d[1]];
                    let o = [q[0] + EDGE_STEP * out_n[0], q[1] + EDGE_STEP * out_n[1]];
                    let mut images = Vec::with_capacity(n);
                    let mut kinds = Vec::with_capacity(n);
                    for layer in 0..n {
                        let site = self.locate1(self.torus_point(pi, layer, o))?;
                        let dy = sub(site.y, q);
                        let local = (dy[0] * dy[0] + dy[1] * dy[1]).sqrt() < 4.0 * EDGE_STEP;
                        let back = cross(a, b, site.y) > 0.0;
                        kinds.push(match (local, back) {
                            (false, _) => EdgeKind::Glued,
                            (true, true) => EdgeKind::GappedBoundary,
                            (true, false) if site.layer == layer => EdgeKind::Interior,
                            (true, false) => EdgeKind::BranchCut,
                        });
                        images.push(site.layer);
                    }
                    let across = kinds.iter().all(|k| matches!(k, EdgeKind::Interior | EdgeKind::BranchCut));
                    let kind = if across {
                        if kinds.contains(&EdgeKind::BranchCut) {
                            EdgeKind::BranchCut
                        } else {
                            EdgeKind::Interior
                        }
                    } else if kinds.iter().all(|k| *k == kinds[0]) {
                        kinds[0].clone()
                    } else {
                        EdgeKind::Mixed
                    };
                    let pairing = Permutation::from_images(images).map_err(|_| {
                        Error::Geometry(format!("edge {a:?}-{b:?} of piece {pi} does not pair layers bijectively"))
                    })?;
                    let rec = EdgeRecord { piece: pi, region: piece.region.clone(), from: a, to: b, kind, pairing };
                    if !out.contains(&rec) {
                        out.push(rec);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn boundary_pairings(&self) -> Result<Vec<EdgeRecord>> {
        Ok(self.boundaries()?.into_iter().filter(|e| e.kind == EdgeKind::GappedBoundary).collect())
    }

    pub fn branch_cuts(&self) -> Result<Vec<EdgeRecord>> {
        Ok(self.boundaries()?.into_iter().filter(|e| e.kind == EdgeKind::BranchCut).collect())
    }

    /// Splits the convex cell `q` by where `h` sends it: each returned part maps
    /// by a single affine map `A` into one piece, with `h(y) = ψ(A y)` for the
    /// label `ψ` of some layer there.
    fn split_by(&self, q: &[Point], h: &Affine) -> Vec<(Vec<Point>, usize, Affine)> {
        let mut out = Vec::new();
        for (p2, piece) in self.pieces.iter().enumerate() {
            for psi in &piece.labels {
                let base = psi.inverse().after(h);
                let cen = centroid(q);
                let c = self.lattice_coords(base.apply(cen));
                for i in -4..=4 {
                    for j in -4..=4 {
                        let w = self.lattice_vec(i as f64 - c[0].floor(), j as f64 - c[1].floor());
                        let a = Affine::translation(w).after(&base);
                        if let Some(r) = intersect(q, &image(&a.inverse(), &piece.polygon)) {
                            out.push((r, p2, a));
                        }
                    }
                }
            }
        }
        out
    }

    /// Folds along `axis`: keeps `axis.keep` and stacks the mirrored half on
    /// top, so layer `2n+1-ℓ` is the mirror copy of layer `ℓ`. Each folded
    /// piece keeps the region name of its unmirrored layers.
    pub fn fold(&self, axis: &FoldAxis) -> Result<FoldGeometry> {
        self.check_symmetry(&axis.mirror, &axis.name)?;
        let twice = axis.mirror.after(&axis.mirror);
        if axis.mirror.det() != -1 || !self.same_mod_lattice(&twice, &Affine::IDENTITY) {
            return Err(Error::Geometry(format!("fold axis `{}` is not a reflection", axis.name)));
        }
        let n = self.layers();
        let mut pieces = Vec::new();
        for piece in &self.pieces {
            for keep in &axis.keep {
                let Some(q) = intersect(&piece.polygon, keep) else { continue };
                for (r, p2, a) in self.split_by(&q, &axis.mirror) {
                    let other = &self.pieces[p2];
                    let mut labels = piece.labels.clone();
                    labels.extend((0..n).rev().map(|l| other.labels[l].after(&a)));
                    pieces.push(Piece { region: piece.region.clone(), polygon: r, labels });
                }
            }
        }
        let mut folds = self.folds.clone();
        folds.push(axis.name.clone());
        let g = FoldGeometry { pieces, folds, ..self.clone() };
        g.validate().map_err(|e| Error::Geometry(format!("fold along `{}` failed: {e}", axis.name)))?;
        Ok(g)
    }

    /// Quotients by a finite group of torus symmetries in one go. `reps[0]`
    /// must be the identity, `wedge` a fundamental domain of the group acting
    /// on the footprint. Layer `i·n + ℓ` carries the copy of layer `ℓ` moved by
    /// `reps[i]`.
    pub fn fold_group(&self, name: &str, reps: &[Affine], wedge: &[Vec<Point>]) -> Result<FoldGeometry> {
        if reps.first() != Some(&Affine::IDENTITY) {
            return Err(Error::Geometry("first group element must be the identity".into()));
        }
        for (i, h) in reps.iter().enumerate().skip(1) {
            self.check_symmetry(h, &format!("{name}[{i}]"))?;
        }
        let n = self.layers();
        let mut pieces = Vec::new();
        for piece in &self.pieces {
            for w in wedge {
                let Some(q0) = intersect(&piece.polygon, w) else { continue };
                let mut cells: Vec<(Vec<Point>, Vec<(usize, Affine)>)> = vec![(q0, Vec::new())];
                for h in reps {
                    let mut next = Vec::new();
                    for (q, info) in &cells {
                        for (r, p2, a) in self.split_by(q, h) {
                            let mut info = info.clone();
                            info.push((p2, a));
                            next.push((r, info));
                        }
                    }
                    cells = next;
                }
                for (r, info) in cells {
                    let mut labels = Vec::with_capacity(n * reps.len());
                    for &(p2, a) in &info {
                        labels.extend((0..n).map(|l| self.pieces[p2].labels[l].after(&a)));
                    }
                    pieces.push(Piece { region: piece.region.clone(), polygon: r, labels });
                }
            }
        }
        let mut folds = self.folds.clone();
        folds.push(name.to_string());
        let g = FoldGeometry { pieces, folds, ..self.clone() };
        g.validate().map_err(|e| Error::Geometry(format!("`{name}` failed: {e}")))?;
        Ok(g)
    }

    /// Renumbers layers; `order[new] = old`, both 0-based.
    pub fn relabel(&self, order: &[usize]) -> Result<FoldGeometry> {
        let p = Permutation::from_images(order.to_vec())?;
        if p.len() != self.layers() {
            return Err(Error::InvalidPermutation(format!(
                "relabelling has {} entries for {} layers",
                p.len(),
                self.layers()
            )));
        }
        let mut g = self.clone();
        for piece in &mut g.pieces {
            piece.labels = order.iter().map(|&o| piece.labels[o]).collect();
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// `h` must be an isometry of the torus that maps the genon set to itself.
    fn check_symmetry(&self, h: &Affine, name: &str) -> Result<()> {
        let g = &self.gram;
        let m = h.m.map(|r| r.map(|x| x as f64));
        for i in 0..2 {
            for j in 0..2 {
                let v = (0..2).map(|a| (0..2).map(|b| m[a][i] * g[a][b] * m[b][j]).sum::<f64>()).sum::<f64>();
                if (v - g[i][j]).abs() > 1e-9 {
                    return Err(Error::Geometry(format!("`{name}` is not an isometry of the {} torus", self.base)));
                }
            }
        }
        for col in [[1.0, 0.0], [0.0, 1.0]] {
            let gen = self.lattice_vec(col[0], col[1]);
            if !self.in_lattice(h.apply_linear(gen), 1e-9) {
                return Err(Error::Geometry(format!("`{name}` does not preserve the period lattice")));
            }
        }
        if let Some(d) = &self.deck {
            let (a, b) = (h.after(d), d.after(h));
            if !self.same_mod_lattice(&a, &b) {
                return Err(Error::Geometry(format!("`{name}` does not map the genons to genons")));
            }
        }
        Ok(())
    }
}

fn centroid(poly: &[Point]) -> Point {
    let n = poly.len() as f64;
    let s = poly.iter().fold([0.0, 0.0], |acc, p| [acc[0] + p[0], acc[1] + p[1]]);
    [s[0] / n, s[1] / n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_inverse_and_composition() {
        let a = Affine::new([[0, -1], [-1, 0]], [1.0, 1.0]);
        let b = Affine::new([[1, 1], [0, -1]], [2.0, 0.5]);
        let p = [0.3, -0.7];
        let ab = a.after(&b);
        let q = ab.apply(p);
        let r = a.apply(b.apply(p));
        assert!((q[0] - r[0]).abs() < 1e-12 && (q[1] - r[1]).abs() < 1e-12);
        let back = ab.inverse().apply(q);
        assert!((back[0] - p[0]).abs() < 1e-12 && (back[1] - p[1]).abs() < 1e-12);
    }

    #[test]
    fn clipping_squares() {
        let sq = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let tri = vec![[0.0, 0.0], [0.0, 2.0], [2.0, 0.0]];
        let r = intersect(&sq, &tri).unwrap();
        assert!((signed_area(&r) - 1.0).abs() < 1e-12);
        let far = vec![[3.0, 3.0], [4.0, 3.0], [4.0, 4.0]];
        assert!(intersect(&sq, &far).is_none());
    }
}

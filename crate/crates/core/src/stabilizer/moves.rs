use super::code::{genon_coord, genon_lift, CodeKind, StabilizerCode};
use super::pauli::QubitPermutation;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenonRegion {
    Patch,
    Outside,
}

/// Lattice isometries and layer exchanges. On the bilayer code the mirrors
/// act on the footprint, identically in both layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    /// Mirror in the antidiagonal through a vertex.
    ReflectDiagonal,
    /// Mirror in a vertical line of vertices.
    ReflectVertical,
    RotateQuarterVertex,
    RotateQuarterPlaquette,
    /// About an edge midpoint; sends stars onto plaquettes.
    RotateQuarterEdge,
    /// The edge-centred rotation followed by H on every qubit.
    RotateQuarterEdgeHadamard,
    LayerSwap,
    PatchLayerSwap(GenonRegion),
}

pub const MOVE_NAMES: &[&str] = &[
    "reflect_diagonal",
    "reflect_vertical",
    "rotate_quarter_vertex",
    "rotate_quarter_plaquette",
    "rotate_quarter_edge",
    "rotate_quarter_edge_hadamard",
    "layer_swap",
    "patch_layer_swap:patch",
    "patch_layer_swap:outside",
];

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Move::ReflectDiagonal => "reflect_diagonal",
            Move::ReflectVertical => "reflect_vertical",
            Move::RotateQuarterVertex => "rotate_quarter_vertex",
            Move::RotateQuarterPlaquette => "rotate_quarter_plaquette",
            Move::RotateQuarterEdge => "rotate_quarter_edge",
            Move::RotateQuarterEdgeHadamard => "rotate_quarter_edge_hadamard",
            Move::LayerSwap => "layer_swap",
            Move::PatchLayerSwap(GenonRegion::Patch) => "patch_layer_swap:patch",
            Move::PatchLayerSwap(GenonRegion::Outside) => "patch_layer_swap:outside",
        };
        f.write_str(s)
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "reflect_diagonal" => Move::ReflectDiagonal,
            "reflect_vertical" => Move::ReflectVertical,
            "rotate_quarter" | "rotate_quarter_vertex" => Move::RotateQuarterVertex,
            "rotate_quarter_plaquette" => Move::RotateQuarterPlaquette,
            "rotate_quarter_edge" => Move::RotateQuarterEdge,
            "rotate_quarter_edge_hadamard" => Move::RotateQuarterEdgeHadamard,
            "layer_swap" => Move::LayerSwap,
            "patch_layer_swap" | "patch_layer_swap:patch" => Move::PatchLayerSwap(GenonRegion::Patch),
            "patch_layer_swap:outside" => Move::PatchLayerSwap(GenonRegion::Outside),
            _ => return Err(Error::Parse(format!("unknown move `{s}`; expected one of {}", MOVE_NAMES.join(", ")))),
        })
    }
}

fn unsupported(mv: Move, code: &StabilizerCode) -> Error {
    Error::InvalidCode(format!("move `{mv}` is not defined on {}", code.name))
}

fn from_positions(code: &StabilizerCode, f: impl Fn([i64; 2], u8) -> [i64; 2]) -> Result<QubitPermutation> {
    let images = code
        .coords
        .iter()
        .map(|c| {
            let p = f(c.pos, c.layer);
            code.index_of(p).ok_or_else(|| Error::InvalidCode(format!("({}, {}) is not a qubit", p[0], p[1])))
        })
        .collect::<Result<Vec<_>>>()?;
    QubitPermutation::new(images)
}

/// The qubit map of `mv`, without checking that it preserves the code.
pub fn raw_permutation(code: &StabilizerCode, mv: Move) -> Result<QubitPermutation> {
    match code.kind {
        CodeKind::Torus { .. } => {
            let map: fn([i64; 2]) -> [i64; 2] = match mv {
                Move::ReflectDiagonal => |[x, y]| [-y, -x],
                Move::ReflectVertical => |[x, y]| [-x, y],
                Move::RotateQuarterVertex => |[x, y]| [-y, x],
                Move::RotateQuarterPlaquette => |[x, y]| [2 - y, x],
                Move::RotateQuarterEdge | Move::RotateQuarterEdgeHadamard => |[x, y]| [1 - y, x - 1],
                Move::LayerSwap | Move::PatchLayerSwap(_) => return Err(unsupported(mv, code)),
            };
            let perm = from_positions(code, |p, _| map(p))?;
            Ok(if mv == Move::RotateQuarterEdgeHadamard { perm.with_hadamard_on_all() } else { perm })
        }
        CodeKind::BilayerGenon { length, separation } => {
            let (a, b) = (2 * separation as i64, 2 * length as i64);
            let period = code.period;
            let footprint = |m: fn([i64; 2], i64, i64) -> [i64; 2]| {
                from_positions(code, move |pos, layer| {
                    let site = genon_coord(period, pos).site;
                    let moved = genon_coord(period, m(site, a, b)).site;
                    genon_lift(period, moved, layer)
                })
            };
            match mv {
                Move::ReflectDiagonal if a == b => footprint(|[x, y], a, _| [a - y, a - x]),
                Move::ReflectVertical => footprint(|[x, y], a, _| [a - x, y]),
                Move::LayerSwap => from_positions(code, |[x, y], _| [-x, -y]),
                Move::PatchLayerSwap(region) => from_positions(code, |pos, _| {
                    let site = genon_coord(period, pos).site;
                    if in_region(site, b) == region {
                        [-pos[0], -pos[1]]
                    } else {
                        pos
                    }
                }),
                _ => Err(unsupported(mv, code)),
            }
        }
    }
}

/// Face of the sheet pair holding a footprint site. The patch is closed: it
/// owns its seam lines `Y = 0`, `Y = b` and the fold edges.
fn in_region(site: [i64; 2], b: i64) -> GenonRegion {
    if site[1] <= b {
        GenonRegion::Patch
    } else {
        GenonRegion::Outside
    }
}

/// The qubit permutation of `mv`, checked to map every stabilizer generator
/// to a product of generators with sign +1.
pub fn geometric_permutation(code: &StabilizerCode, mv: Move) -> Result<QubitPermutation> {
    let perm = raw_permutation(code, mv)?;
    if !normalizes(code, &perm) {
        return Err(Error::NonAutomorphism(mv.to_string()));
    }
    Ok(perm)
}

pub fn normalizes(code: &StabilizerCode, perm: &QubitPermutation) -> bool {
    let space = code.stabilizer_space();
    code.generators.iter().all(|g| code.stabilizer_phase(&space, &g.conjugated(perm)) == Some(0))
}

/// Composes the raw maps of `moves` in order and checks only the result.
/// Partial sequences such as a lone patch SWAP need not preserve the code.
pub fn sequence_permutation(code: &StabilizerCode, moves: &[Move]) -> Result<QubitPermutation> {
    let mut acc = QubitPermutation::identity(code.n);
    for &mv in moves {
        acc = acc.then(&raw_permutation(code, mv)?);
    }
    if !normalizes(code, &acc) {
        let names: Vec<String> = moves.iter().map(Move::to_string).collect();
        return Err(Error::NonAutomorphism(names.join(" then ")));
    }
    Ok(acc)
}

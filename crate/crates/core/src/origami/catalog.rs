//! Named geometries and the published protocols.

use super::geom::{Affine, Base, FoldAxis, FoldGeometry, Piece, Point};
use super::perm::Permutation;
use super::protocol::{Protocol, ProtocolStep, Region};
use crate::mcg::MCGWord;
use crate::{Error, Result};
use std::sync::OnceLock;

const I2: [[i64; 2]; 2] = [[1, 0], [0, 1]];
const NEG: [[i64; 2]; 2] = [[-1, 0], [0, -1]];
const HEX_GRAM: [[f64; 2]; 2] = [[1.0, 0.5], [0.5, 1.0]];

/// Mirrors of the triangular lattice in lattice coordinates, named by the
/// angle of their fixed line (`e1` at 0°, `e2` at 60°).
pub mod hex_mirror {
    pub const M0: [[i64; 2]; 2] = [[1, 1], [0, -1]];
    pub const M30: [[i64; 2]; 2] = [[0, 1], [1, 0]];
    pub const M60: [[i64; 2]; 2] = [[-1, 0], [1, 1]];
    pub const M90: [[i64; 2]; 2] = [[-1, -1], [0, 1]];
    pub const M120: [[i64; 2]; 2] = [[0, -1], [-1, 0]];
    pub const M150: [[i64; 2]; 2] = [[1, 0], [-1, -1]];
    /// Rotation by 60°.
    pub const R60: [[i64; 2]; 2] = [[0, -1], [1, 1]];
}

use hex_mirror::*;

fn lin(m: [[i64; 2]; 2]) -> Affine {
    Affine::linear(m)
}

fn piece(region: &str, polygon: &[Point], labels: &[Affine]) -> Piece {
    Piece { region: region.into(), polygon: polygon.to_vec(), labels: labels.to_vec() }
}

fn checked(g: FoldGeometry) -> Result<FoldGeometry> {
    g.validate()?;
    Ok(g)
}

pub fn square_torus() -> Result<FoldGeometry> {
    checked(FoldGeometry {
        name: "square_torus".into(),
        base: Base::SquareTorus,
        lattice: I2,
        gram: [[1.0, 0.0], [0.0, 1.0]],
        alpha: [1.0, 0.0],
        beta: [0.0, 1.0],
        deck: None,
        folds: Vec::new(),
        pieces: vec![piece("bulk", &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], &[Affine::IDENTITY])],
    })
}

/// Torus glued from a regular hexagon; the footprint is the hexagon itself.
pub fn hexagon_torus() -> Result<FoldGeometry> {
    let t = 1.0 / 3.0;
    let hex = [[t, t], [-t, 2.0 * t], [-2.0 * t, t], [-t, -t], [t, -2.0 * t], [2.0 * t, -t]];
    checked(FoldGeometry {
        name: "hexagon_torus".into(),
        base: Base::HexagonTorus,
        lattice: I2,
        gram: HEX_GRAM,
        alpha: [1.0, 0.0],
        beta: [-1.0, 1.0],
        deck: None,
        folds: Vec::new(),
        pieces: vec![piece("bulk", &hex, &[Affine::IDENTITY])],
    })
}

/// Two layers joined by four genons at the corners of the unit square. The
/// torus is the double cover; the second layer is the other sheet.
pub fn bilayer_genons() -> Result<FoldGeometry> {
    let d = lin(NEG);
    checked(FoldGeometry {
        name: "bilayer_genons".into(),
        base: Base::PlanarBilayerGenons,
        lattice: [[2, 0], [0, 2]],
        gram: [[1.0, 0.0], [0.0, 1.0]],
        alpha: [2.0, 0.0],
        beta: [0.0, -2.0],
        deck: Some(d),
        folds: Vec::new(),
        pieces: vec![
            piece("patch", &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], &[Affine::IDENTITY, d]),
            piece("outside", &[[0.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]], &[Affine::IDENTITY, d]),
        ],
    })
}

/// Bilayer with four genons in the triangular arrangement: one at the centre
/// of an equilateral triangle spanned by the other three.
pub fn triangular_genons() -> Result<FoldGeometry> {
    let d = lin(NEG);
    let l = [Affine::IDENTITY, d];
    checked(FoldGeometry {
        name: "triangular_genons".into(),
        base: Base::TriangularGenons,
        lattice: [[2, 0], [0, 2]],
        gram: HEX_GRAM,
        alpha: [0.0, -2.0],
        beta: [2.0, 0.0],
        deck: Some(d),
        folds: Vec::new(),
        pieces: vec![
            piece("outside", &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], &l),
            piece("patch", &[[0.0, 0.0], [0.0, 1.0], [-1.0, 1.0]], &l),
            piece("patch", &[[0.0, 0.0], [-1.0, 1.0], [-1.0, 0.0]], &l),
            piece("outside", &[[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], &l),
        ],
    })
}

pub fn square_fold2() -> Result<FoldGeometry> {
    Ok(square_torus()?
        .fold(&FoldAxis {
            name: "diagonal x+y=1".into(),
            mirror: Affine::new([[0, -1], [-1, 0]], [1.0, 1.0]),
            keep: vec![vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]],
        })?
        .with_name("square_fold2"))
}

pub fn square_fold4() -> Result<FoldGeometry> {
    Ok(square_fold2()?
        .fold(&FoldAxis {
            name: "diagonal x=y".into(),
            mirror: lin([[0, 1], [1, 0]]),
            keep: vec![vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.5]]],
        })?
        .with_name("square_fold4"))
}

pub fn square_fold8() -> Result<FoldGeometry> {
    Ok(square_fold4()?
        .fold(&FoldAxis {
            name: "vertical x=1/2".into(),
            mirror: Affine::new([[-1, 0], [0, 1]], [1.0, 0.0]),
            keep: vec![vec![[0.0, 0.0], [0.5, 0.0], [0.5, 0.5]]],
        })?
        .with_name("square_fold8"))
}

/// Bilayer folded along the diagonal through two genons; the patch becomes
/// a triangle.
pub fn genon_fold4() -> Result<FoldGeometry> {
    bilayer_genons()?
        .fold(&FoldAxis {
            name: "diagonal x+y=1".into(),
            mirror: Affine::new([[0, -1], [-1, 0]], [1.0, 1.0]),
            keep: vec![vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0.0, 1.0], [1.0, 2.0], [0.0, 2.0]]],
        })?
        .relabel(&[0, 3, 1, 2])
        .map(|g| g.with_name("genon_fold4"))
}

/// Triangular genons folded along the mirror through genons 1 and 4.
pub fn triangular_fold4_diagonal() -> Result<FoldGeometry> {
    triangular_genons()?
        .fold(&FoldAxis {
            name: "mirror 1-4".into(),
            mirror: lin(M30),
            keep: vec![
                vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.5]],
                vec![[1.0, 0.0], [1.0, 1.0], [0.5, 0.5]],
                vec![[0.0, 0.0], [-1.0, 1.0], [-1.0, 0.0]],
            ],
        })?
        .relabel(&[0, 3, 1, 2])
        .map(|g| g.with_name("triangular_fold4_diagonal"))
}

/// Triangular genons folded along the horizontal mirror through genons 1 and 2.
pub fn triangular_fold4_horizontal() -> Result<FoldGeometry> {
    triangular_genons()?
        .fold(&FoldAxis {
            name: "mirror 1-2".into(),
            mirror: lin(M90),
            keep: vec![
                vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
                vec![[0.0, 0.0], [0.0, 1.0], [-0.5, 1.0]],
                vec![[1.0, 0.0], [1.0, 1.0], [0.5, 1.0]],
            ],
        })?
        .relabel(&[0, 3, 1, 2])
        .map(|g| g.with_name("triangular_fold4_horizontal"))
}

fn lin_after(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> Affine {
    lin(a).after(&lin(b))
}

/// Triangular genons folded along all three mirrors through genon 1.
pub fn triangular_fold12() -> Result<FoldGeometry> {
    let r120 = lin_after(M90, M30);
    let reps = [Affine::IDENTITY, lin(M90), lin(M30), lin(M150), r120, r120.after(&r120)];
    let wedge = vec![vec![[0.0, 0.0], [-1.0, 0.0], [-1.0, 0.5]], vec![[1.0, 0.0], [1.0, 0.5], [2.0 / 3.0, 2.0 / 3.0]]];
    let g = triangular_genons()?.fold_group("mirrors through genon 1", &reps, &wedge)?;
    // Numbering in which the horizontal mirror pairs (1,2)(3,4)… and the sheet
    // exchange pairs (1,7)(2,8)….
    let new_of_old = [0, 6, 1, 7, 5, 11, 3, 9, 4, 10, 2, 8];
    let mut order = [0; 12];
    for (old, &new) in new_of_old.iter().enumerate() {
        order[new] = old;
    }
    Ok(g.relabel(&order)?.with_name("triangular_fold12"))
}

fn hex_d3(mirrors: [[[i64; 2]; 2]; 3]) -> Vec<Affine> {
    let r120 = lin(R60).after(&lin(R60));
    vec![Affine::IDENTITY, lin(mirrors[0]), lin(mirrors[1]), lin(mirrors[2]), r120, r120.after(&r120)]
}

/// Hexagon folded onto a 60° sector: mirrors at 30°, 90° and 150° become layer SWAPs.
pub fn hexagon_fold6_a() -> Result<FoldGeometry> {
    let t = 1.0 / 3.0;
    let wedge = vec![vec![[0.0, 0.0], [t, t], [-t, 2.0 * t]]];
    Ok(hexagon_torus()?
        .fold_group("mirrors 30/90/150", &hex_d3([M30, M90, M150]), &wedge)?
        .with_name("hexagon_fold6_a"))
}

/// Hexagon folded with mirrors at 0°, 60° and 120°.
pub fn hexagon_fold6_b() -> Result<FoldGeometry> {
    let t = 1.0 / 3.0;
    let wedge = vec![vec![[0.0, 0.0], [0.5, 0.0], [t, t], [0.0, 0.5]]];
    Ok(hexagon_torus()?.fold_group("mirrors 0/60/120", &hex_d3([M0, M60, M120]), &wedge)?.with_name("hexagon_fold6_b"))
}

/// Hexagon folded onto a 30° sector: all six mirrors and all rotations.
pub fn hexagon_fold12() -> Result<FoldGeometry> {
    let t = 1.0 / 3.0;
    let mut reps = vec![Affine::IDENTITY];
    let r = lin(R60);
    let mut acc = r;
    for _ in 0..5 {
        reps.push(acc);
        acc = r.after(&acc);
    }
    for m in [M0, M30, M60, M90, M120, M150] {
        reps.push(lin(m));
    }
    let wedge = vec![vec![[0.0, 0.0], [0.5, 0.0], [t, t]]];
    Ok(hexagon_torus()?.fold_group("all hexagon symmetries", &reps, &wedge)?.with_name("hexagon_fold12"))
}

type Builder = fn() -> Result<FoldGeometry>;

const GEOMETRIES: &[(&str, Builder)] = &[
    ("square_torus", square_torus),
    ("hexagon_torus", hexagon_torus),
    ("bilayer_genons", bilayer_genons),
    ("triangular_genons", triangular_genons),
    ("square_fold2", square_fold2),
    ("square_fold4", square_fold4),
    ("square_fold8", square_fold8),
    ("genon_fold4", genon_fold4),
    ("triangular_fold4_diagonal", triangular_fold4_diagonal),
    ("triangular_fold4_horizontal", triangular_fold4_horizontal),
    ("triangular_fold12", triangular_fold12),
    ("hexagon_fold6_a", hexagon_fold6_a),
    ("hexagon_fold6_b", hexagon_fold6_b),
    ("hexagon_fold12", hexagon_fold12),
];

pub fn geometry_names() -> Vec<&'static str> {
    GEOMETRIES.iter().map(|(n, _)| *n).collect()
}

/// Builds (once) and returns a named geometry.
pub fn builtin_geometry(name: &str) -> Result<FoldGeometry> {
    static CACHE: OnceLock<Vec<OnceLock<Result<FoldGeometry>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| GEOMETRIES.iter().map(|_| OnceLock::new()).collect());
    let idx = GEOMETRIES
        .iter()
        .position(|(n, _)| *n == name)
        .ok_or_else(|| Error::Geometry(format!("unknown geometry `{name}`")))?;
    cache[idx].get_or_init(GEOMETRIES[idx].1).clone()
}

/// Layer permutation realising the torus symmetry `h` on each piece: layer
/// `ℓ` goes to the layer whose label is `h ∘ ψ_ℓ`.
pub fn induced_permutation(g: &FoldGeometry, h: &Affine) -> Result<Vec<Permutation>> {
    g.pieces
        .iter()
        .map(|p| {
            let images = p
                .labels
                .iter()
                .map(|psi| {
                    let target = h.after(psi);
                    p.labels
                        .iter()
                        .position(|q| {
                            q.m == target.m && g.in_lattice([q.t[0] - target.t[0], q.t[1] - target.t[1]], 1e-9)
                        })
                        .ok_or_else(|| Error::Geometry("symmetry does not permute the layers of a piece".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_images(images)
        })
        .collect()
}

/// The single global permutation induced by `h`, if it is the same on every piece.
pub fn global_permutation(g: &FoldGeometry, h: &Affine) -> Result<Permutation> {
    let perms = induced_permutation(g, h)?;
    let first = perms[0].clone();
    if perms.iter().all(|p| *p == first) {
        Ok(first)
    } else {
        Err(Error::NotGloballyDecomposable)
    }
}

struct Entry {
    name: &'static str,
    geometry: &'static str,
    /// `(region, cycles)`; a `None` region is ALL. Listed in the order applied.
    steps: &'static [(Option<&'static str>, &'static str)],
    expected: &'static str,
    notes: &'static str,
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "fig2_fold2_RaS",
        geometry: "square_fold2",
        steps: &[(None, "(1,2)")],
        expected: "Ra S",
        notes: "square torus folded once along the anti-diagonal; the crease is the boundary (12)",
    },
    Entry {
        name: "appB_8layer_RaS",
        geometry: "square_fold8",
        steps: &[(None, "(1,2)(3,4)(5,6)(7,8)")],
        expected: "Ra S",
        notes: "",
    },
    Entry {
        name: "appB_8layer_Ra",
        geometry: "square_fold8",
        steps: &[(None, "(1,8)(2,5)(3,6)(4,7)")],
        expected: "Ra",
        notes: "",
    },
    Entry {
        name: "appB_8layer_S",
        geometry: "square_fold8",
        steps: &[(None, "(1,2)(3,4)(5,6)(7,8)"), (None, "(1,8)(2,5)(3,6)(4,7)")],
        expected: "S",
        notes: "as twist operators: V(1735)V(2648)",
    },
    Entry {
        name: "fig3_genon4_RaS",
        geometry: "genon_fold4",
        steps: &[(Some("outside"), "(3,4)(1,2)"), (Some("patch"), "(1,4)(3,2)")],
        expected: "Ra S",
        notes: "patch = the triangle bounded by the branch cuts and the crease",
    },
    Entry { name: "appD_bilayer_C", geometry: "bilayer_genons", steps: &[(None, "(1,2)")], expected: "C", notes: "" },
    Entry { name: "appD_4layer_C", geometry: "genon_fold4", steps: &[(None, "(1,3)(2,4)")], expected: "C", notes: "" },
    Entry {
        name: "fig3c_genon4_TRb",
        geometry: "triangular_fold4_horizontal",
        steps: &[(None, "(1,2)(3,4)")],
        expected: "T Rb",
        notes: "the horizontal mirror through genons 1 and 2 as a layer SWAP",
    },
    Entry {
        name: "appE_4layer_RaS",
        geometry: "triangular_fold4_diagonal",
        steps: &[(Some("outside"), "(1,2)(3,4)"), (Some("patch"), "(1,4)(2,3)")],
        expected: "Ra S",
        notes: "",
    },
    Entry {
        name: "appE_4layer_RbS",
        geometry: "triangular_fold4_diagonal",
        steps: &[(Some("outside"), "(1,4)(2,3)"), (Some("patch"), "(1,2)(3,4)")],
        expected: "Rb S",
        notes: "",
    },
    Entry {
        name: "appE_12layer_TRb",
        geometry: "triangular_fold12",
        steps: &[(None, "(1,2)(3,4)(5,6)(7,8)(9,10)(11,12)")],
        expected: "T Rb",
        notes: "",
    },
    Entry {
        name: "appE_12layer_RbS",
        geometry: "triangular_fold12",
        steps: &[
            (Some("outside"), "(1,12)(2,9)(3,8)(4,11)(5,10)(6,7)"),
            (Some("patch"), "(1,6)(2,9)(3,8)(4,5)(7,12)(10,11)"),
        ],
        expected: "Rb S",
        notes: "patch-region pairs (2,9)(3,8) replace the printed (2,3)(8,9); the printed version does not close",
    },
    Entry {
        name: "appE_12layer_C",
        geometry: "triangular_fold12",
        steps: &[(None, "(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)")],
        expected: "C",
        notes: "applied to every region; restricted to the outside region it does not close",
    },
    Entry {
        name: "appE_12layer_RaS",
        geometry: "triangular_fold12",
        steps: &[
            (Some("outside"), "(1,12)(2,9)(3,8)(4,11)(5,10)(6,7)"),
            (Some("patch"), "(1,6)(2,9)(3,8)(4,5)(7,12)(10,11)"),
            (None, "(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)"),
        ],
        expected: "Ra S",
        notes: "C·RβS",
    },
    Entry {
        name: "appE_12layer_RbS_printed",
        geometry: "triangular_fold12",
        steps: &[
            (Some("outside"), "(1,12)(2,9)(3,8)(4,11)(5,10)(6,7)"),
            (Some("patch"), "(1,6)(2,3)(4,5)(7,12)(8,9)(10,11)"),
        ],
        expected: "Rb S",
        notes: "verbatim transcription; not closed",
    },
    Entry {
        name: "appE_12layer_C_printed",
        geometry: "triangular_fold12",
        steps: &[(Some("outside"), "(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)")],
        expected: "C",
        notes: "verbatim transcription; not closed",
    },
];

/// Hexagon entries: the permutation is whatever the symmetry induces on the
/// folded layers.
struct HexEntry {
    name: &'static str,
    geometry: &'static str,
    map: [[i64; 2]; 2],
    expected: &'static str,
}

const HEX_ENTRIES: &[HexEntry] = &[
    HexEntry { name: "appC_hexagon6_TRb", geometry: "hexagon_fold6_a", map: M30, expected: "T Rb" },
    HexEntry { name: "appC_hexagon6_RaS", geometry: "hexagon_fold6_a", map: M150, expected: "Ra S" },
    HexEntry { name: "appC_hexagon6_RbS", geometry: "hexagon_fold6_b", map: M60, expected: "Rb S" },
    HexEntry { name: "appC_hexagon12_TRb", geometry: "hexagon_fold12", map: M30, expected: "T Rb" },
    HexEntry { name: "appC_hexagon12_RbS", geometry: "hexagon_fold12", map: M60, expected: "Rb S" },
    HexEntry { name: "appC_hexagon12_RaS", geometry: "hexagon_fold12", map: M150, expected: "Ra S" },
    HexEntry { name: "appC_hexagon12_TSinv", geometry: "hexagon_fold12", map: [[-1, -1], [1, 0]], expected: "T S^-1" },
    HexEntry { name: "appC_hexagon12_STinv", geometry: "hexagon_fold12", map: [[0, 1], [-1, -1]], expected: "S T^-1" },
];

const STUBS: &[(&str, &str, &str, &str)] =
    &[("fig3b_16layer_S", "bilayer_genons", "S", "S by SWAPs alone needs a 16-layer fold whose steps are not given")];

/// Verbatim transcriptions kept for comparison; they are known not to close.
pub const PRINTED_VARIANTS: &[&str] = &["appE_12layer_RbS_printed", "appE_12layer_C_printed"];

pub fn catalog_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).chain(HEX_ENTRIES.iter().map(|e| e.name)).chain(STUBS.iter().map(|s| s.0)).collect()
}

fn word(s: &str) -> Result<MCGWord> {
    s.parse()
}

pub fn builtin_protocol(name: &str) -> Result<Protocol> {
    if let Some(e) = ENTRIES.iter().find(|e| e.name == name) {
        let geometry = builtin_geometry(e.geometry)?;
        let n = geometry.layers();
        let steps = e
            .steps
            .iter()
            .map(|(r, c)| ProtocolStep::swap(r.map_or(Region::All, Region::from), c, n))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Protocol {
            name: e.name.into(),
            geometry,
            steps,
            expected: word(e.expected)?,
            notes: e.notes.into(),
            stub: false,
        });
    }
    if let Some(e) = HEX_ENTRIES.iter().find(|e| e.name == name) {
        let geometry = builtin_geometry(e.geometry)?;
        let perm = global_permutation(&geometry, &lin(e.map))?;
        return Ok(Protocol {
            name: e.name.into(),
            geometry,
            steps: vec![ProtocolStep::Swap { region: Region::All, perm }],
            expected: word(e.expected)?,
            notes: "layer permutation induced by the hexagon symmetry".into(),
            stub: false,
        });
    }
    if let Some(&(n, g, w, notes)) = STUBS.iter().find(|s| s.0 == name) {
        return Ok(Protocol {
            name: n.into(),
            geometry: builtin_geometry(g)?,
            steps: Vec::new(),
            expected: word(w)?,
            notes: notes.into(),
            stub: true,
        });
    }
    Err(Error::UnknownProtocol(name.into()))
}

/// Protocols on unfolded surfaces, where mirrors are long-range moves.
pub fn unfolded_protocol(name: &str) -> Result<Protocol> {
    let mxy = ProtocolStep::Move { label: "M_{x-y}".into(), map: Affine::new([[0, -1], [-1, 0]], [1.0, 1.0]) };
    let my = ProtocolStep::Move { label: "M_y".into(), map: Affine::new([[-1, 0], [0, 1]], [1.0, 0.0]) };
    let tri = |m: [[i64; 2]; 2], label: &str| ProtocolStep::Move { label: label.into(), map: lin(m) };
    let (geometry, steps, expected) = match name {
        "square_mirror_antidiagonal" => ("square_torus", vec![mxy], "Ra S"),
        "square_mirror_vertical" => ("square_torus", vec![my], "Ra"),
        "square_mirror_diagonal" => ("square_torus", vec![tri([[0, 1], [1, 0]], "M_{x+y}")], "Rb S"),
        "fig3a_i" => ("bilayer_genons", vec![mxy], "Ra S"),
        "fig3a_i_ii" => ("bilayer_genons", vec![mxy, ProtocolStep::swap("patch", "(1,2)", 2)?], "Ra S"),
        "fig3a_i_ii_iii" => ("bilayer_genons", vec![mxy, ProtocolStep::swap("patch", "(1,2)", 2)?, my], "S"),
        "fig3c_mirror_1_2" => ("triangular_genons", vec![tri(M90, "mirror 1-2")], "T Rb"),
        "fig3c_mirror_1_4_patch" => {
            ("triangular_genons", vec![tri(M30, "mirror 1-4"), ProtocolStep::swap("patch", "(1,2)", 2)?], "Ra S")
        }
        "fig3c_mirror_1_4_outside" => {
            ("triangular_genons", vec![tri(M30, "mirror 1-4"), ProtocolStep::swap("outside", "(1,2)", 2)?], "Rb S")
        }
        _ => return Err(Error::UnknownProtocol(name.into())),
    };
    Ok(Protocol {
        name: name.into(),
        geometry: builtin_geometry(geometry)?,
        steps,
        expected: word(expected)?,
        notes: String::new(),
        stub: false,
    })
}

pub const UNFOLDED_NAMES: &[&str] = &[
    "square_mirror_antidiagonal",
    "square_mirror_vertical",
    "square_mirror_diagonal",
    "fig3a_i",
    "fig3a_i_ii",
    "fig3a_i_ii_iii",
    "fig3c_mirror_1_2",
    "fig3c_mirror_1_4_patch",
    "fig3c_mirror_1_4_outside",
];

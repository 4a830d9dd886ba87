use super::gf2::RowSpace;
use super::pauli::{PauliOp, QubitPermutation};
use crate::{Error, Result};
use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Where a qubit sits. `pos` is its point on the covering torus in doubled
/// lattice units (vertices have both coordinates even, edge midpoints one odd
/// coordinate). For the bilayer code `site` is the footprint point and `layer`
/// is 1 or 2; on a plain torus `layer` is 1 and `site == pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitCoord {
    pub layer: u8,
    pub site: [i64; 2],
    pub pos: [i64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeKind {
    Torus {
        l: usize,
    },
    /// Two cuts of `length` plaquettes, `separation` plaquettes apart.
    BilayerGenon {
        length: usize,
        separation: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub generators: Vec<PauliOp>,
    /// (X̄, Z̄) per logical qubit.
    pub logical_pairs: Vec<(PauliOp, PauliOp)>,
    pub coords: Vec<QubitCoord>,
    pub kind: CodeKind,
    /// Torus period in doubled units.
    pub period: [i64; 2],
    pub metadata: BTreeMap<String, String>,
}

fn wrap(v: i64, p: i64) -> i64 {
    v.rem_euclid(p)
}

/// Edge index on a torus of `px × py` doubled units.
fn edge_index(period: [i64; 2], x: i64, y: i64) -> usize {
    let (x, y) = (wrap(x, period[0]), wrap(y, period[1]));
    let w = period[0] / 2;
    debug_assert!((x + y) % 2 == 1);
    (2 * ((y / 2) * w + x / 2) + (x % 2 == 0) as i64) as usize
}

/// Stars, plaquettes and the four loop operators of a toric code.
fn torus_layout(period: [i64; 2]) -> (Vec<PauliOp>, Vec<(PauliOp, PauliOp)>, Vec<[i64; 2]>) {
    let (w, h) = (period[0] / 2, period[1] / 2);
    let n = (2 * w * h) as usize;
    let idx = |x: i64, y: i64| edge_index(period, x, y);
    let mut pos = vec![[0, 0]; n];
    for y in 0..period[1] {
        for x in 0..period[0] {
            if (x + y) % 2 == 1 {
                pos[idx(x, y)] = [x, y];
            }
        }
    }
    let mut gens = Vec::new();
    for j in 0..h {
        for i in 0..w {
            let (x, y) = (2 * i, 2 * j);
            gens.push(PauliOp::x_on(n, &[idx(x - 1, y), idx(x + 1, y), idx(x, y - 1), idx(x, y + 1)]));
        }
    }
    for j in 0..h {
        for i in 0..w {
            let (x, y) = (2 * i + 1, 2 * j + 1);
            gens.push(PauliOp::z_on(n, &[idx(x - 1, y), idx(x + 1, y), idx(x, y - 1), idx(x, y + 1)]));
        }
    }
    let row_h: Vec<usize> = (0..w).map(|i| idx(2 * i + 1, 0)).collect();
    let col_h: Vec<usize> = (0..h).map(|j| idx(1, 2 * j)).collect();
    let row_v: Vec<usize> = (0..w).map(|i| idx(2 * i, 1)).collect();
    let col_v: Vec<usize> = (0..h).map(|j| idx(0, 2 * j + 1)).collect();
    let logicals = vec![
        (PauliOp::z_on(n, &row_h), PauliOp::x_on(n, &col_h)),
        (PauliOp::x_on(n, &row_v), PauliOp::z_on(n, &col_v)),
    ];
    (gens, logicals, pos)
}

/// Square-lattice toric code on an `l × l` torus.
pub fn build_toric_torus(l: usize) -> Result<StabilizerCode> {
    if l < 2 {
        return Err(Error::LatticeTooSmall(l));
    }
    let period = [2 * l as i64; 2];
    let (generators, logical_pairs, pos) = torus_layout(period);
    let mut metadata = BTreeMap::new();
    metadata.insert(
        "logicals".into(),
        "X1 = W^alpha_e (Z on row), Z1 = W^beta_m (X on dual column), X2 = W^alpha_m, Z2 = W^beta_e".into(),
    );
    Ok(StabilizerCode {
        name: format!("toric_L{l}"),
        n: pos.len(),
        generators,
        logical_pairs,
        coords: pos.into_iter().map(|p| QubitCoord { layer: 1, site: p, pos: p }).collect(),
        kind: CodeKind::Torus { l },
        period,
        metadata,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenonCuts {
    pub length: usize,
    pub separation: usize,
}

/// Bilayer code with four genons on an `l × l` patch; cuts of length `l`, `l` apart.
pub fn build_bilayer_genon_code(l: usize) -> Result<StabilizerCode> {
    build_bilayer_genon_code_with(GenonCuts { length: l, separation: l })
}

/// Two layers of toric code on a planar patch, joined along two parallel
/// branch cuts. The double cover of this sheet pair is a torus that is twice
/// the patch in each direction, with the π rotation about a genon exchanging
/// the layers, so the code is built on that torus and each qubit is labelled
/// by its footprint site and layer.
pub fn build_bilayer_genon_code_with(cuts: GenonCuts) -> Result<StabilizerCode> {
    let GenonCuts { length, separation } = cuts;
    if length == 0 || separation == 0 {
        return Err(Error::InvalidCode("branch cuts must have positive length and separation".into()));
    }
    let period = [4 * separation as i64, 4 * length as i64];
    let (generators, logical_pairs, pos) = torus_layout(period);
    let coords = pos.iter().map(|&p| genon_coord(period, p)).collect();
    let mut metadata = BTreeMap::new();
    metadata.insert(
        "model".into(),
        "double cover: toric code on the covering torus, deck map = pi rotation about a genon".into(),
    );
    metadata.insert(
        "genons".into(),
        format!("vertices (0,0) ({a},0) (0,{b}) ({a},{b}) in lattice units", a = separation, b = length),
    );
    metadata.insert(
        "boundary".into(),
        "patch and outside are the two faces of one sheet pair; genons sit on vertices, so every stabilizer has weight 4".into(),
    );
    metadata.insert("logicals".into(), "W^alpha crosses both cuts horizontally; W^beta circles one cut".into());
    Ok(StabilizerCode {
        name: format!("bilayer_genon_{length}x{separation}"),
        n: pos.len(),
        generators,
        logical_pairs,
        coords,
        kind: CodeKind::BilayerGenon { length, separation },
        period,
        metadata,
    })
}

/// Footprint site and layer of a covering-torus point. The footprint is the
/// strip `0 ≤ X ≤ half width`; its two vertical edges fold onto themselves.
pub(crate) fn genon_coord(period: [i64; 2], p: [i64; 2]) -> QubitCoord {
    let [px, py] = period;
    let (x, y) = (wrap(p[0], px), wrap(p[1], py));
    let flip = [wrap(-x, px), wrap(-y, py)];
    let layer1 = if x == 0 || x == px / 2 { y < py / 2 } else { x < px / 2 };
    if layer1 {
        QubitCoord { layer: 1, site: [x, y], pos: [x, y] }
    } else {
        QubitCoord { layer: 2, site: flip, pos: [x, y] }
    }
}

/// Covering-torus point of `site` in `layer`.
pub(crate) fn genon_lift(period: [i64; 2], site: [i64; 2], layer: u8) -> [i64; 2] {
    match layer {
        1 => [wrap(site[0], period[0]), wrap(site[1], period[1])],
        _ => [wrap(-site[0], period[0]), wrap(-site[1], period[1])],
    }
}

impl StabilizerCode {
    pub fn index_of(&self, pos: [i64; 2]) -> Option<usize> {
        let (x, y) = (wrap(pos[0], self.period[0]), wrap(pos[1], self.period[1]));
        ((x + y) % 2 == 1).then(|| edge_index(self.period, x, y))
    }

    pub fn stabilizer_space(&self) -> RowSpace {
        let rows: Vec<FixedBitSet> = self.generators.iter().map(PauliOp::symplectic).collect();
        RowSpace::from_rows(2 * self.n, rows.iter())
    }

    pub fn rank(&self) -> usize {
        self.stabilizer_space().rank()
    }

    pub fn k(&self) -> usize {
        self.n - self.rank()
    }

    pub fn is_css(&self) -> bool {
        self.generators.iter().all(|g| g.x_bits().is_clear() || g.z_bits().is_clear())
    }

    /// `Some(phase)` when `p` equals `i^phase` times an element of the
    /// stabilizer group; a valid stabilizer has phase 0.
    pub fn stabilizer_phase(&self, space: &RowSpace, p: &PauliOp) -> Option<u8> {
        let combo = space.solve(&p.symplectic())?;
        let prod = combo.ones().fold(PauliOp::identity(self.n), |acc, i| acc.mul(&self.generators[i]));
        Some((p.phase() + 4 - prod.phase()) % 4)
    }

    /// Checks the commutation relations of generators and logicals.
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.generators.iter().enumerate() {
            if let Some(j) = self.generators[i + 1..].iter().position(|b| a.anticommutes(b)) {
                return Err(Error::InvalidCode(format!("generators {i} and {} anticommute", i + 1 + j)));
            }
        }
        let logicals: Vec<&PauliOp> = self.logical_pairs.iter().flat_map(|(x, z)| [x, z]).collect();
        for (li, l) in logicals.iter().enumerate() {
            if self.generators.iter().any(|g| g.anticommutes(l)) {
                return Err(Error::InvalidCode(format!("logical {li} does not commute with the stabilizers")));
            }
            for (mi, m) in logicals.iter().enumerate() {
                let partner = li / 2 == mi / 2 && li != mi;
                if l.anticommutes(m) != partner {
                    return Err(Error::InvalidCode(format!("logicals {li} and {mi} have the wrong commutation")));
                }
            }
        }
        if self.k() != self.logical_pairs.len() {
            return Err(Error::InvalidCode(format!("k = {} but {} logical pairs", self.k(), self.logical_pairs.len())));
        }
        Ok(())
    }

    /// The code `U S U†` with logicals carried along.
    pub fn conjugated(&self, perm: &QubitPermutation) -> StabilizerCode {
        let mut out = self.clone();
        out.generators = self.generators.iter().map(|g| g.conjugated(perm)).collect();
        out.logical_pairs = self.logical_pairs.iter().map(|(x, z)| (x.conjugated(perm), z.conjugated(perm))).collect();
        out.name = format!("{} (permuted)", self.name);
        out
    }

    /// Minimum weight of a nontrivial logical operator, searched up to
    /// `max_weight`.
    pub fn distance(&self, max_weight: usize) -> Result<usize> {
        let space = self.stabilizer_space();
        let n = self.n;
        let is_logical =
            |p: &PauliOp| self.generators.iter().all(|g| g.commutes_with(p)) && !space.contains(&p.symplectic());
        let css = self.is_css();
        for w in 1..=max_weight.min(n) {
            for support in (0..n).combinations(w) {
                if css {
                    if is_logical(&PauliOp::x_on(n, &support)) || is_logical(&PauliOp::z_on(n, &support)) {
                        return Ok(w);
                    }
                    continue;
                }
                for letters in std::iter::repeat_n(0..3u8, w).multi_cartesian_product() {
                    let mut p = PauliOp::identity(n);
                    for (&q, &c) in support.iter().zip(&letters) {
                        let single = match c {
                            0 => PauliOp::x_on(n, &[q]),
                            1 => PauliOp::z_on(n, &[q]),
                            _ => PauliOp::x_on(n, &[q]).mul(&PauliOp::z_on(n, &[q])),
                        };
                        p = p.mul(&single);
                    }
                    if is_logical(&p) {
                        return Ok(w);
                    }
                }
            }
        }
        Err(Error::ResourceLimit(format!("no logical of weight <= {max_weight}")))
    }

    /// One signed Pauli string per line.
    pub fn to_text(&self) -> String {
        self.generators.iter().map(|g| format!("{g}\n")).collect()
    }
}

/// Z string on the boundary of the 2×2 plaquette block centred on a genon.
/// In the bilayer picture this loop winds twice around the genon.
pub fn double_genon_loop(code: &StabilizerCode, genon: [i64; 2]) -> Result<PauliOp> {
    let [gx, gy] = [2 * genon[0], 2 * genon[1]];
    let mut qubits = Vec::new();
    for t in [-1, 1] {
        qubits.extend([[gx + t, gy - 2], [gx + t, gy + 2], [gx - 2, gy + t], [gx + 2, gy + t]]);
    }
    let idx: Option<Vec<usize>> = qubits.into_iter().map(|p| code.index_of(p)).collect();
    let idx = idx.ok_or_else(|| Error::InvalidCode("genon is not on a vertex".into()))?;
    Ok(PauliOp::z_on(code.n, &idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toric_parameters() {
        for l in 2..=4 {
            let c = build_toric_torus(l).unwrap();
            assert_eq!(c.n, 2 * l * l);
            assert_eq!(c.k(), 2);
            c.validate().unwrap();
        }
        assert!(matches!(build_toric_torus(1), Err(Error::LatticeTooSmall(1))));
    }

    #[test]
    fn genon_coords_are_consistent() {
        let c = build_bilayer_genon_code(3).unwrap();
        c.validate().unwrap();
        let mut seen = std::collections::HashSet::new();
        for q in &c.coords {
            assert_eq!(genon_lift(c.period, q.site, q.layer), q.pos);
            assert!(q.site[0] >= 0 && q.site[0] <= c.period[0] / 2);
            assert!(seen.insert((q.site, q.layer)));
        }
    }
}

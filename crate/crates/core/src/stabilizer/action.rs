use super::code::{CodeKind, StabilizerCode};
use super::moves::normalizes;
use super::pauli::{PauliOp, QubitPermutation};
use crate::anyons::{self, ModularData};
use crate::linalg::{self, c, CMat};
use crate::mcg::MCGWord;
use crate::origami::{self, Protocol};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Binary symplectic matrix on logical Paulis, basis order
/// `(X̄₁, Z̄₁, X̄₂, Z̄₂, …)`. Column `j` is the image of basis element `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Symplectic(pub Vec<Vec<u8>>);

impl Symplectic {
    pub fn identity(dim: usize) -> Self {
        Symplectic((0..dim).map(|i| (0..dim).map(|j| (i == j) as u8).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `self` after `first`.
    pub fn after(&self, first: &Symplectic) -> Symplectic {
        let d = self.dim();
        Symplectic(
            (0..d)
                .map(|i| (0..d).map(|j| (0..d).map(|k| self.0[i][k] & first.0[k][j]).sum::<u8>() % 2).collect())
                .collect(),
        )
    }

    fn form(d: usize) -> Vec<Vec<u8>> {
        (0..d).map(|i| (0..d).map(|j| (i / 2 == j / 2 && i != j) as u8).collect()).collect()
    }

    /// `Mᵀ Ω M = Ω` over GF(2).
    pub fn preserves_form(&self) -> bool {
        let d = self.dim();
        let w = Self::form(d);
        (0..d).all(|i| {
            (0..d).all(|j| {
                let mut s = 0u8;
                for a in 0..d {
                    for b in 0..d {
                        s ^= self.0[a][i] & w[a][b] & self.0[b][j];
                    }
                }
                s == w[i][j]
            })
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LogicalAction {
    pub symplectic: Symplectic,
    /// Phase `i^k` left over when each image is written as a product of
    /// logical representatives and stabilizers. Nonzero entries are logical
    /// Pauli corrections.
    pub phases: Vec<u8>,
    pub gate: Option<String>,
}

/// Conjugates every logical generator by `perm` and reduces it modulo the
/// stabilizer group.
pub fn logical_action(code: &StabilizerCode, perm: &QubitPermutation) -> Result<LogicalAction> {
    if !normalizes(code, perm) {
        return Err(Error::NonAutomorphism("permutation".into()));
    }
    let basis: Vec<&PauliOp> = code.logical_pairs.iter().flat_map(|(x, z)| [x, z]).collect();
    let d = basis.len();
    let space = code.stabilizer_space();
    let mut cols = Vec::with_capacity(d);
    let mut phases = Vec::with_capacity(d);
    for (j, l) in basis.iter().enumerate() {
        let image = l.conjugated(perm);
        // X̄ᵢ's coefficient is read off by Z̄ᵢ, and vice versa.
        let col: Vec<u8> = (0..d).map(|i| image.anticommutes(basis[i ^ 1]) as u8).collect();
        let rep = (0..d).filter(|&i| col[i] == 1).fold(PauliOp::identity(code.n), |acc, i| acc.mul(basis[i]));
        let rest = rep.mul(&image);
        let phase = code.stabilizer_phase(&space, &rest).ok_or_else(|| {
            Error::LogicalReduction(format!("image of logical {j} is not a logical times a stabilizer"))
        })?;
        cols.push(col);
        phases.push(phase);
    }
    let symplectic = Symplectic((0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect());
    let gate = if d == 4 { toric_gate_name(&symplectic) } else { None };
    Ok(LogicalAction { symplectic, phases, gate })
}

fn pauli_1q(k: usize) -> CMat {
    match k {
        0 => linalg::identity(2),
        1 => linalg::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
        2 => CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        _ => linalg::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
    }
}

/// Pauli on `nq` qubits from `(x, z)` bits; qubit 0 is the most significant
/// tensor factor.
fn pauli_matrix(bits: &[u8]) -> CMat {
    let nq = bits.len() / 2;
    (0..nq).fold(CMat::identity(1, 1), |acc, q| {
        let k = match (bits[2 * q], bits[2 * q + 1]) {
            (0, 0) => 0,
            (1, 0) => 1,
            (1, 1) => 2,
            _ => 3,
        };
        linalg::kron(&acc, &pauli_1q(k))
    })
}

/// Symplectic action of a Clifford unitary on `log2(dim)` qubits, in the same
/// basis order as [`LogicalAction`].
pub fn symplectic_of_unitary(u: &CMat) -> Result<Symplectic> {
    let dim = u.nrows();
    let nq = dim.trailing_zeros() as usize;
    if 1 << nq != dim {
        return Err(Error::InvalidParameter(format!("dimension {dim} is not a power of two")));
    }
    let d = 2 * nq;
    let all: Vec<Vec<u8>> = (0..1usize << d).map(|m| (0..d).map(|b| ((m >> b) & 1) as u8).collect()).collect();
    let mut cols = Vec::with_capacity(d);
    for j in 0..d {
        let mut e = vec![0u8; d];
        e[j] = 1;
        let image = u * pauli_matrix(&e) * u.adjoint();
        let hit = all.iter().find(|bits| {
            let overlap = linalg::trace(&(pauli_matrix(bits).adjoint() * &image)).norm() / dim as f64;
            (overlap - 1.0).abs() < 1e-8
        });
        cols.push(hit.cloned().ok_or_else(|| Error::InvalidParameter("unitary is not Clifford".into()))?);
    }
    Ok(Symplectic((0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect()))
}

/// Logical action predicted by the anyon model for `word` on the toric code.
pub fn expected_action(word: &MCGWord) -> Result<Symplectic> {
    symplectic_of_unitary(&anyons::rep_on_torus(word, &anyons::toric_code())?)
}

fn toric_gate_name(s: &Symplectic) -> Option<String> {
    if *s == Symplectic::identity(4) {
        return Some("I".into());
    }
    let tc: ModularData = anyons::toric_code();
    anyons::logical_gate_dictionary(&tc)
        .entries
        .iter()
        .find(|e| symplectic_of_unitary(&e.matrix).ok().as_ref() == Some(s))
        .map(|e| e.gate.clone())
}

/// Qubit map induced by an origami protocol on a code whose covering torus
/// matches the protocol's geometry. Each qubit is pushed through the steps
/// from two nearby generic points; both must land on the same qubit.
pub fn origami_permutation(code: &StabilizerCode, protocol: &Protocol) -> Result<QubitPermutation> {
    let scale = match code.kind {
        CodeKind::Torus { l } => [2.0 * l as f64; 2],
        CodeKind::BilayerGenon { length, separation } => [2.0 * separation as f64, 2.0 * length as f64],
    };
    const EPS: f64 = 1e-7;
    let dirs = [[0.3137, 0.9495], [-0.8776, 0.4794]];
    let mut images = Vec::with_capacity(code.n);
    for (q, coord) in code.coords.iter().enumerate() {
        let mut hit = None;
        for u in dirs {
            let p = [coord.pos[0] as f64 / scale[0] + EPS * u[0], coord.pos[1] as f64 / scale[1] + EPS * u[1]];
            let (_, img) = origami::apply(&protocol.steps, &protocol.geometry, p)?;
            let r = [img[0] * scale[0], img[1] * scale[1]];
            let snapped = [r[0].round(), r[1].round()];
            if (r[0] - snapped[0]).abs() + (r[1] - snapped[1]).abs() > 1e-3 {
                return Err(Error::Geometry(format!("qubit {q} does not land on a qubit")));
            }
            let idx = code
                .index_of([snapped[0] as i64, snapped[1] as i64])
                .ok_or_else(|| Error::Geometry(format!("qubit {q} lands on a vertex or plaquette")))?;
            match hit {
                None => hit = Some(idx),
                Some(prev) if prev != idx => {
                    return Err(Error::NotClosed(format!("qubit {q} sits on a discontinuity of the protocol")))
                }
                _ => {}
            }
        }
        images.push(hit.unwrap_or(q));
    }
    QubitPermutation::new(images)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolCheck {
    pub protocol: String,
    pub action: LogicalAction,
    pub expected: Symplectic,
    pub agrees: bool,
}

/// Runs `protocol` on `code` and compares with `anyons::rep` of the expected
/// word, up to logical Pauli.
pub fn protocol_action(code: &StabilizerCode, protocol: &Protocol) -> Result<ProtocolCheck> {
    let perm = origami_permutation(code, protocol)?;
    if !normalizes(code, &perm) {
        return Err(Error::NonAutomorphism(protocol.name.clone()));
    }
    let action = logical_action(code, &perm)?;
    let expected = expected_action(&protocol.expected)?;
    Ok(ProtocolCheck { protocol: protocol.name.clone(), agrees: action.symplectic == expected, action, expected })
}

/// Assigns each qubit a stack site and a layer within the stack.
#[derive(Clone, Debug, Serialize)]
pub struct FoldMap {
    pub name: String,
    pub site: Vec<usize>,
    pub layer: Vec<usize>,
    pub layers: usize,
}

impl FoldMap {
    /// Torus folded along the antidiagonal `X + Y ≡ 0`: a qubit and its
    /// mirror image share a stack.
    pub fn antidiagonal(code: &StabilizerCode) -> Result<FoldMap> {
        let CodeKind::Torus { l } = code.kind else {
            return Err(Error::InvalidCode("antidiagonal fold needs a torus code".into()));
        };
        let p = 2 * l as i64;
        let mut stacks: BTreeMap<[i64; 2], usize> = BTreeMap::new();
        let mut site = Vec::with_capacity(code.n);
        let mut layer = Vec::with_capacity(code.n);
        for c in &code.coords {
            let [x, y] = c.pos;
            let mirror = [(-y).rem_euclid(p), (-x).rem_euclid(p)];
            let s = (x + y).rem_euclid(p);
            let lower = s < l as i64 || (s == l as i64 && x < mirror[0]);
            let rep = if lower { [x, y] } else { mirror };
            let next = stacks.len();
            site.push(*stacks.entry(rep).or_insert(next));
            layer.push(if lower { 0 } else { 1 });
        }
        Ok(FoldMap { name: "antidiagonal".into(), site, layer, layers: 2 })
    }

    /// The two sheets of a bilayer code stacked over the footprint.
    pub fn bilayer(code: &StabilizerCode) -> Result<FoldMap> {
        if !matches!(code.kind, CodeKind::BilayerGenon { .. }) {
            return Err(Error::InvalidCode("bilayer fold needs a genon code".into()));
        }
        let mut stacks: BTreeMap<[i64; 2], usize> = BTreeMap::new();
        let mut site = Vec::with_capacity(code.n);
        for c in &code.coords {
            let next = stacks.len();
            site.push(*stacks.entry(c.site).or_insert(next));
        }
        let layer = code.coords.iter().map(|c| c.layer as usize - 1).collect();
        Ok(FoldMap { name: "bilayer".into(), site, layer, layers: 2 })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransversalCertificate {
    /// Layer permutation at each stack site, as images of layers `0..layers`.
    pub per_site: Vec<Vec<usize>>,
}

impl TransversalCertificate {
    pub fn all_equal_to(&self, perm: &[usize]) -> bool {
        self.per_site.iter().all(|p| p == perm)
    }
}

/// Checks that `perm` moves qubits only within their stack.
pub fn folded_view(fold: &FoldMap, perm: &QubitPermutation) -> Result<TransversalCertificate> {
    let stacks = fold.site.iter().max().map_or(0, |m| m + 1);
    let mut per_site: Vec<Vec<Option<usize>>> = vec![vec![None; fold.layers]; stacks];
    for (q, &img) in perm.images.iter().enumerate() {
        if fold.site[q] != fold.site[img] {
            return Err(Error::NotTransversal(q, img));
        }
        per_site[fold.site[q]][fold.layer[q]] = Some(fold.layer[img]);
    }
    let per_site =
        per_site.into_iter().map(|row| row.into_iter().enumerate().map(|(i, v)| v.unwrap_or(i)).collect()).collect();
    Ok(TransversalCertificate { per_site })
}

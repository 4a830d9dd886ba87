use crate::{Error, Result};
use fixedbitset::FixedBitSet;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// `i^phase · ∏_j X_j^{x_j} Z_j^{z_j}`, with X written before Z on each qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x: FixedBitSet,
    z: FixedBitSet,
    phase: u8,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp { x: FixedBitSet::with_capacity(n), z: FixedBitSet::with_capacity(n), phase: 0 }
    }

    pub fn x_on(n: usize, qubits: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &q in qubits {
            p.x.insert(q);
        }
        p
    }

    pub fn z_on(n: usize, qubits: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &q in qubits {
            p.z.insert(q);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &FixedBitSet {
        &self.x
    }

    pub fn z_bits(&self) -> &FixedBitSet {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn weight(&self) -> usize {
        self.x.union_count(&self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Symplectic form: true when the two operators anticommute.
    pub fn anticommutes(&self, o: &PauliOp) -> bool {
        (self.x.intersection_count(&o.z) + self.z.intersection_count(&o.x)) % 2 == 1
    }

    pub fn commutes_with(&self, o: &PauliOp) -> bool {
        !self.anticommutes(o)
    }

    /// `self · o`.
    pub fn mul(&self, o: &PauliOp) -> PauliOp {
        // Moving X^{x2} left past Z^{z1} costs (−1)^{z1·x2}.
        let swaps = self.z.intersection_count(&o.x) as u8;
        let mut x = self.x.clone();
        x.symmetric_difference_with(&o.x);
        let mut z = self.z.clone();
        z.symmetric_difference_with(&o.z);
        PauliOp { x, z, phase: (self.phase + o.phase + 2 * (swaps % 2)) % 4 }
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    /// `x` then `z` bits as a single vector of length `2n`.
    pub fn symplectic(&self) -> FixedBitSet {
        let n = self.n();
        let mut v = FixedBitSet::with_capacity(2 * n);
        for q in self.x.ones() {
            v.insert(q);
        }
        for q in self.z.ones() {
            v.insert(n + q);
        }
        v
    }

    pub fn from_symplectic(v: &FixedBitSet, n: usize) -> PauliOp {
        let mut p = Self::identity(n);
        for i in v.ones() {
            if i < n {
                p.x.insert(i);
            } else {
                p.z.insert(i - n);
            }
        }
        p
    }

    /// `U P U†` where `U` moves qubit `q` to `perm.images[q]` and then applies
    /// H on the tagged qubits.
    pub fn conjugated(&self, perm: &QubitPermutation) -> PauliOp {
        let n = self.n();
        let mut out = Self::identity(n);
        out.phase = self.phase;
        for q in self.x.ones() {
            out.x.insert(perm.images[q]);
        }
        for q in self.z.ones() {
            out.z.insert(perm.images[q]);
        }
        for q in perm.hadamard.ones() {
            let (a, b) = (out.x.contains(q), out.z.contains(q));
            out.x.set(q, b);
            out.z.set(q, a);
            // X^a Z^b → Z^a X^b = (−1)^{ab} X^b Z^a
            if a && b {
                out.phase = (out.phase + 2) % 4;
            }
        }
        out
    }

    /// Hermitian sign `i^k` in front of the X/Y/Z string.
    fn string_phase(&self) -> u8 {
        let ys = self.x.intersection_count(&self.z) as u8;
        (self.phase + 4 - ys % 4) % 4
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.string_phase() as usize])?;
        for q in 0..self.n() {
            let c = match (self.x.contains(q), self.z.contains(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for PauliOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for PauliOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, body) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        let mut p = PauliOp::identity(n);
        let mut ys = 0;
        for (q, ch) in body.chars().enumerate() {
            match ch {
                'I' | '_' => {}
                'X' => p.x.insert(q),
                'Z' => p.z.insert(q),
                'Y' => {
                    p.x.insert(q);
                    p.z.insert(q);
                    ys += 1;
                }
                _ => return Err(Error::Parse(format!("bad Pauli letter `{ch}` in `{s}`"))),
            }
        }
        p.phase = ((k + ys) % 4) as u8;
        Ok(p)
    }
}

/// A qubit relabelling, optionally followed by Hadamards on some qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitPermutation {
    pub images: Vec<usize>,
    pub hadamard: FixedBitSet,
}

impl QubitPermutation {
    pub fn identity(n: usize) -> Self {
        QubitPermutation { images: (0..n).collect(), hadamard: FixedBitSet::with_capacity(n) }
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = FixedBitSet::with_capacity(n);
        for &i in &images {
            if i >= n || seen.put(i) {
                return Err(Error::InvalidPermutation("qubit map is not a bijection".into()));
            }
        }
        Ok(QubitPermutation { images, hadamard: FixedBitSet::with_capacity(n) })
    }

    pub fn with_hadamard_on_all(mut self) -> Self {
        self.hadamard.insert_range(..);
        self
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.hadamard.is_clear() && self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &QubitPermutation) -> QubitPermutation {
        let images = self.images.iter().map(|&i| next.images[i]).collect();
        let mut hadamard = FixedBitSet::with_capacity(self.len());
        for q in self.hadamard.ones() {
            hadamard.insert(next.images[q]);
        }
        hadamard.symmetric_difference_with(&next.hadamard);
        QubitPermutation { images, hadamard }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_is_i_x_z() {
        let y: PauliOp = "Y".parse().unwrap();
        let x: PauliOp = "X".parse().unwrap();
        let z: PauliOp = "Z".parse().unwrap();
        assert_eq!(x.mul(&z).with_phase(x.mul(&z).phase() + 1), y);
        assert_eq!(z.mul(&x).to_string(), "+iY");
        assert_eq!(x.mul(&z).to_string(), "-iY");
        assert_eq!(y.mul(&y).to_string(), "+I");
    }

    #[test]
    fn round_trip_and_commutation() {
        for s in ["+XIZY", "-YYII", "+iZZXX", "-iIIIY"] {
            let p: PauliOp = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let a: PauliOp = "XXI".parse().unwrap();
        let b: PauliOp = "ZIZ".parse().unwrap();
        let c: PauliOp = "ZZI".parse().unwrap();
        assert!(a.anticommutes(&b));
        assert!(a.commutes_with(&c));
    }

    #[test]
    fn hadamard_conjugation() {
        let perm = QubitPermutation::identity(1).with_hadamard_on_all();
        let conj = |s: &str| s.parse::<PauliOp>().unwrap().conjugated(&perm).to_string();
        assert_eq!(conj("X"), "+Z");
        assert_eq!(conj("Z"), "+X");
        assert_eq!(conj("Y"), "-Y");
    }

    #[test]
    fn composition_moves_tags() {
        let swap = QubitPermutation::new(vec![1, 0]).unwrap();
        let mut h0 = QubitPermutation::identity(2);
        h0.hadamard.insert(0);
        let both = h0.then(&swap);
        let p: PauliOp = "XI".parse().unwrap();
        assert_eq!(p.conjugated(&both), p.conjugated(&h0).conjugated(&swap));
        assert_eq!(p.conjugated(&both).to_string(), "+IZ");
    }
}

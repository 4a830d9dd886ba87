//! The extended mapping class group of the torus, SL±(2,Z).
//!
//! Elements are 2×2 integer matrices of determinant ±1 acting on homology
//! classes `p·α + q·β`, written as column vectors `(p, q)`. The generator
//! matrices are taken as the active maps on loops:
//!
//! | token | matrix | α ↦ | β ↦ |
//! |-------|--------|-----|-----|
//! | `S`  | `[[0,1],[-1,0]]` | −β | α |
//! | `T`  | `[[1,0],[1,1]]`  | α+β | β |
//! | `Ra` | `[[-1,0],[0,1]]` | −α | β |
//! | `Rb` | `[[1,0],[0,-1]]` | α | −β |
//! | `C`  | `[[-1,0],[0,-1]]` | −α | −β |
//!
//! The Dehn twist here fixes β, matching the appendix matrix. The main text
//! of the source material also writes `T: (α,β) → (α+β, α)`; that map has
//! determinant −1, so it cannot be a twist, and it is treated as a typo.
//!
//! Words compose left to right as matrix products, so `[T, Rb]` is `T·Rb`
//! and the rightmost token acts first on a loop.

use crate::error::{Error, Result};
use crate::report::{Check, Report, Status};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[i64; 4]", try_from = "[i64; 4]")]
pub struct MCGMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MCGMatrix {
    pub const IDENTITY: MCGMatrix = MCGMatrix { a: 1, b: 0, c: 0, d: 1 };

    /// Builds a matrix, rejecting determinants other than ±1.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a.checked_mul(d).zip(b.checked_mul(c)).and_then(|(x, y)| x.checked_sub(y)).ok_or(Error::Overflow)?;
        if det != 1 && det != -1 {
            return Err(Error::NotUnimodular(a, b, c, d, det));
        }
        Ok(MCGMatrix { a, b, c, d })
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.det() == 1
    }

    pub fn checked_mul(&self, o: &MCGMatrix) -> Result<MCGMatrix> {
        let dot = |x1: i64, y1: i64, x2: i64, y2: i64| -> Result<i64> {
            x1.checked_mul(x2).zip(y1.checked_mul(y2)).and_then(|(p, q)| p.checked_add(q)).ok_or(Error::Overflow)
        };
        Ok(MCGMatrix {
            a: dot(self.a, self.b, o.a, o.c)?,
            b: dot(self.a, self.b, o.b, o.d)?,
            c: dot(self.c, self.d, o.a, o.c)?,
            d: dot(self.c, self.d, o.b, o.d)?,
        })
    }

    /// Exact inverse; determinant ±1 keeps it integral.
    pub fn inverse(&self) -> MCGMatrix {
        let det = self.det();
        MCGMatrix { a: det * self.d, b: -det * self.b, c: -det * self.c, d: det * self.a }
    }

    pub fn pow(&self, n: u32) -> Result<MCGMatrix> {
        let mut acc = MCGMatrix::IDENTITY;
        for _ in 0..n {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn neg(&self) -> MCGMatrix {
        MCGMatrix { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl From<MCGMatrix> for [i64; 4] {
    fn from(m: MCGMatrix) -> Self {
        [m.a, m.b, m.c, m.d]
    }
}

impl TryFrom<[i64; 4]> for MCGMatrix {
    type Error = Error;
    fn try_from(v: [i64; 4]) -> Result<Self> {
        MCGMatrix::new(v[0], v[1], v[2], v[3])
    }
}

impl fmt::Display for MCGMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    S,
    SInv,
    T,
    TInv,
    Ra,
    Rb,
    C,
}

impl Generator {
    pub const ALL: [Generator; 7] =
        [Generator::S, Generator::SInv, Generator::T, Generator::TInv, Generator::Ra, Generator::Rb, Generator::C];

    pub fn matrix(self) -> MCGMatrix {
        let (a, b, c, d) = match self {
            Generator::S => (0, 1, -1, 0),
            Generator::SInv => (0, -1, 1, 0),
            Generator::T => (1, 0, 1, 1),
            Generator::TInv => (1, 0, -1, 1),
            Generator::Ra => (-1, 0, 0, 1),
            Generator::Rb => (1, 0, 0, -1),
            Generator::C => (-1, 0, 0, -1),
        };
        MCGMatrix { a, b, c, d }
    }

    pub fn is_reflection(self) -> bool {
        matches!(self, Generator::Ra | Generator::Rb)
    }

    pub fn token(self) -> &'static str {
        match self {
            Generator::S => "S",
            Generator::SInv => "S^-1",
            Generator::T => "T",
            Generator::TInv => "T^-1",
            Generator::Ra => "Ra",
            Generator::Rb => "Rb",
            Generator::C => "C",
        }
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let g = match s {
            "S" => Generator::S,
            "S^-1" | "S⁻¹" | "Si" | "S'" => Generator::SInv,
            "T" => Generator::T,
            "T^-1" | "T⁻¹" | "Ti" | "T'" => Generator::TInv,
            "Ra" | "Rα" | "R_a" | "R_alpha" => Generator::Ra,
            "Rb" | "Rβ" | "R_b" | "R_beta" => Generator::Rb,
            "C" => Generator::C,
            other => return Err(Error::InvalidGenerator(other.to_string())),
        };
        Ok(g)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

pub fn generator(token: &str) -> Result<MCGMatrix> {
    Ok(token.parse::<Generator>()?.matrix())
}

pub fn compose(m1: &MCGMatrix, m2: &MCGMatrix) -> Result<MCGMatrix> {
    m1.checked_mul(m2)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MCGWord(pub Vec<Generator>);

impl MCGWord {
    pub fn new(gens: Vec<Generator>) -> Self {
        MCGWord(gens)
    }

    pub fn empty() -> Self {
        MCGWord(Vec::new())
    }

    pub fn concat(&self, other: &MCGWord) -> MCGWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MCGWord(v)
    }

    pub fn reflection_count(&self) -> usize {
        self.0.iter().filter(|g| g.is_reflection()).count()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for MCGWord {
    type Err = Error;
    /// Whitespace-separated tokens, e.g. `"T Rb S T^-1"`. The empty string is
    /// the empty word.
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>().map(MCGWord)
    }
}

impl fmt::Display for MCGWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<&str> = self.0.iter().map(|g| g.token()).collect();
        f.write_str(&toks.join(" "))
    }
}

pub fn word_to_matrix(word: &MCGWord) -> Result<MCGMatrix> {
    word.0.iter().try_fold(MCGMatrix::IDENTITY, |acc, g| acc.checked_mul(&g.matrix()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LoopVector {
    pub p: i64,
    pub q: i64,
}

impl LoopVector {
    pub const ALPHA: LoopVector = LoopVector { p: 1, q: 0 };
    pub const BETA: LoopVector = LoopVector { p: 0, q: 1 };

    pub fn new(p: i64, q: i64) -> Self {
        LoopVector { p, q }
    }
}

impl fmt::Display for LoopVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |k: i64, name: &str| match k {
            1 => name.to_string(),
            -1 => format!("-{name}"),
            _ => format!("{k}{name}"),
        };
        match (self.p, self.q) {
            (0, 0) => f.write_str("0"),
            (p, 0) => f.write_str(&term(p, "α")),
            (0, q) => f.write_str(&term(q, "β")),
            (p, q) => {
                let qs = term(q, "β");
                let sep = if qs.starts_with('-') { "" } else { "+" };
                write!(f, "{}{}{}", term(p, "α"), sep, qs)
            }
        }
    }
}

/// `m·v` with `v` a column vector.
pub fn act_on_loop(m: &MCGMatrix, v: LoopVector) -> Result<LoopVector> {
    let row = |x: i64, y: i64| {
        x.checked_mul(v.p).zip(y.checked_mul(v.q)).and_then(|(s, t)| s.checked_add(t)).ok_or(Error::Overflow)
    };
    Ok(LoopVector { p: row(m.a, m.b)?, q: row(m.c, m.d)? })
}

pub fn is_orientation_preserving(m: &MCGMatrix) -> bool {
    m.is_orientation_preserving()
}

/// Self-test of the defining relations of SL±(2,Z) on the generators.
pub fn verify_group_relations() -> Report {
    use Generator::*;
    let m = |w: &[Generator]| word_to_matrix(&MCGWord(w.to_vec())).expect("short words cannot overflow");
    let id = MCGMatrix::IDENTITY;
    let s2 = m(&[S, S]);
    let st = m(&[S, T]);
    let cases: Vec<(&str, MCGMatrix, MCGMatrix)> = vec![
        ("S^4 = I", m(&[S, S, S, S]), id),
        ("(ST)^3 = S^2", st.pow(3).expect("small"), s2),
        ("S^2 = C", s2, C.matrix()),
        ("Ra^2 = I", m(&[Ra, Ra]), id),
        ("Rb^2 = I", m(&[Rb, Rb]), id),
        ("C = Ra Rb", C.matrix(), m(&[Ra, Rb])),
        ("C = Rb Ra", C.matrix(), m(&[Rb, Ra])),
        ("C S = S C", m(&[C, S]), m(&[S, C])),
        ("C T = T C", m(&[C, T]), m(&[T, C])),
        ("S S^-1 = I", m(&[S, SInv]), id),
        ("T T^-1 = I", m(&[T, TInv]), id),
    ];
    let mut report = Report::new();
    for (name, lhs, rhs) in cases {
        report.push(Check::new(name, Status::from_bool(lhs == rhs), rhs.to_string(), lhs.to_string()));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> MCGMatrix {
        word_to_matrix(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn generator_matrices() {
        assert_eq!(generator("S").unwrap(), MCGMatrix { a: 0, b: 1, c: -1, d: 0 });
        assert_eq!(generator("Ra").unwrap(), MCGMatrix { a: -1, b: 0, c: 0, d: 1 });
        assert_eq!(generator("C").unwrap(), MCGMatrix { a: -1, b: 0, c: 0, d: -1 });
        assert!(matches!(generator("X"), Err(Error::InvalidGenerator(_))));
    }

    #[test]
    fn unicode_and_ascii_tokens_agree() {
        assert_eq!(w("Rα S T⁻¹"), w("Ra S T^-1"));
    }

    #[test]
    fn composite_words() {
        assert_eq!(w("S S"), generator("C").unwrap());
        assert_eq!(w(""), MCGMatrix::IDENTITY);
        assert_eq!(w("T Rb"), MCGMatrix { a: 1, b: 0, c: 1, d: -1 });
        assert_eq!(w("T Ra"), MCGMatrix { a: -1, b: 0, c: -1, d: 1 });
        assert_eq!(w("Rb S"), MCGMatrix { a: 0, b: 1, c: 1, d: 0 });
        assert_eq!(w("Ra S"), MCGMatrix { a: 0, b: -1, c: -1, d: 0 });
        assert_eq!(w("Rb S"), w("C Ra S"));
        assert_eq!(w("S T").pow(3).unwrap(), w("S S"));
    }

    #[test]
    fn loop_action_anchors() {
        let s = generator("S").unwrap();
        assert_eq!(act_on_loop(&s, LoopVector::ALPHA).unwrap(), LoopVector::new(0, -1));
        assert_eq!(act_on_loop(&s, LoopVector::BETA).unwrap(), LoopVector::new(1, 0));
        let t = generator("T").unwrap();
        assert_eq!(act_on_loop(&t, LoopVector::ALPHA).unwrap(), LoopVector::new(1, 1));
        assert_eq!(act_on_loop(&t, LoopVector::BETA).unwrap(), LoopVector::BETA);
        assert_eq!(act_on_loop(&w("Rb S"), LoopVector::ALPHA).unwrap(), LoopVector::BETA);
    }

    #[test]
    fn orientation() {
        assert!(is_orientation_preserving(&generator("S").unwrap()));
        assert!(!is_orientation_preserving(&generator("Ra").unwrap()));
        assert!(!is_orientation_preserving(&w("T Rb")));
    }

    #[test]
    fn relations_all_pass() {
        let r = verify_group_relations();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn overflow_is_reported() {
        let t = generator("T").unwrap();
        let big = MCGMatrix { a: 1, b: 0, c: i64::MAX / 2 + 1, d: 1 };
        assert_eq!(big.checked_mul(&big), Err(Error::Overflow));
        assert!(t.pow(1000).is_ok());
    }

    #[test]
    fn json_is_row_major_array() {
        let m = w("T Rb");
        assert_eq!(serde_json::to_string(&m).unwrap(), "[1,0,1,-1]");
        let back: MCGMatrix = serde_json::from_str("[0,1,-1,0]").unwrap();
        assert_eq!(back, generator("S").unwrap());
        assert!(serde_json::from_str::<MCGMatrix>("[1,1,1,1]").is_err());
    }

    #[test]
    fn loop_vector_display() {
        assert_eq!(LoopVector::new(0, -1).to_string(), "-β");
        assert_eq!(LoopVector::new(1, -1).to_string(), "α-β");
    }
}

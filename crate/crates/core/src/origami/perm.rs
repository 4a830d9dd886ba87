//! Layer permutations in cycle notation.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A permutation of `n` layers, stored as 0-based images: layer `i` goes to `images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PermRepr", into = "PermRepr")]
pub struct Permutation {
    images: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    layers: usize,
    cycles: String,
}

impl TryFrom<PermRepr> for Permutation {
    type Error = Error;
    fn try_from(r: PermRepr) -> Result<Self> {
        Permutation::parse(&r.cycles, r.layers)
    }
}

impl From<Permutation> for PermRepr {
    fn from(p: Permutation) -> Self {
        PermRepr { layers: p.len(), cycles: p.to_string() }
    }
}

fn parse_cycles(s: &str, n: usize) -> Result<Vec<Vec<usize>>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() || s == "()" || s.eq_ignore_ascii_case("id") {
        return Ok(Vec::new());
    }
    let bad = |m: &str| Error::InvalidPermutation(format!("`{s}`: {m}"));
    let mut out = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
        let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
        let inner = &body[..close];
        rest = &body[close + 1..];
        let items: Vec<usize> = if inner.contains(',') {
            inner.split(',').map(|t| t.parse::<usize>().map_err(|_| bad("non-numeric entry"))).collect::<Result<_>>()?
        } else {
            // Compact form such as (1735) is only unambiguous below ten layers.
            if n > 9 && inner.len() > 1 {
                return Err(bad("use commas for more than nine layers"));
            }
            inner
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("non-numeric entry")))
                .collect::<Result<_>>()?
        };
        if items.iter().any(|&x| x == 0 || x > n) {
            return Err(bad(&format!("entries must lie in 1..={n}")));
        }
        let mut seen = items.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != items.len() {
            return Err(bad("repeated entry inside a cycle"));
        }
        out.push(items.into_iter().map(|x| x - 1).collect());
    }
    Ok(out)
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses disjoint cycles such as `(1,4)(3,2)` or `(1735)(2648)`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let cycles = parse_cycles(s, n)?;
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in &cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if touched[x] {
                    return Err(Error::InvalidPermutation(format!("`{s}`: cycles are not disjoint (layer {})", x + 1)));
                }
                touched[x] = true;
                images[x] = cyc[(k + 1) % cyc.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses a product of possibly overlapping cycles, read left to right:
    /// the leftmost cycle is applied first.
    pub fn parse_product(s: &str, n: usize) -> Result<Self> {
        let mut acc = Permutation::identity(n);
        for cyc in parse_cycles(s, n)? {
            let mut images: Vec<usize> = (0..n).collect();
            for (k, &x) in cyc.iter().enumerate() {
                images[x] = cyc[(k + 1) % cyc.len()];
            }
            acc = acc.then(&Permutation { images });
        }
        Ok(acc)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_involution(&self) -> bool {
        self.then(self).is_identity()
    }

    /// Nontrivial cycles, 1-based, each starting at its smallest entry and
    /// sorted by that entry.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cyc.push(j + 1);
                j = self.images[j];
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_spellings_agree() {
        let a = Permutation::parse("(1,4)(3,2)", 4).unwrap();
        let b = Permutation::parse("(1,4)(2,3)", 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(1,4)(2,3)");
    }

    #[test]
    fn compact_and_product() {
        let p = Permutation::parse_product("(18)(25)(36)(47)(12)(34)(56)(78)", 8).unwrap();
        assert_eq!(p, Permutation::parse("(1735)(2648)", 8).unwrap());
        assert_eq!(p.to_string(), "(1,7,3,5)(2,6,4,8)");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::parse("(1,5)", 4).is_err());
        assert!(Permutation::parse("(1,2)(2,3)", 4).is_err());
        assert!(Permutation::parse("(1,1)", 4).is_err());
        assert!(Permutation::parse("1,2", 4).is_err());
        assert!(Permutation::parse("(1011)", 12).is_err());
    }

    #[test]
    fn identity_prints_empty() {
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::parse("", 3).unwrap().is_identity());
    }

    #[test]
    fn serde_round_trip() {
        let p = Permutation::parse("(1,12)(2,9)", 12).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"layers":12,"cycles":"(1,12)(2,9)"}"#);
        let q: Permutation = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}

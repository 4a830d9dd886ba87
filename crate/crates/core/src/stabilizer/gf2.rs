//! Incremental Gaussian elimination over GF(2) that remembers which input rows
//! built each basis vector.

use fixedbitset::FixedBitSet;

#[derive(Clone, Debug)]
pub struct RowSpace {
    width: usize,
    inputs: usize,
    /// (reduced row, combination of inputs, pivot)
    rows: Vec<(FixedBitSet, FixedBitSet, usize)>,
}

impl RowSpace {
    pub fn new(width: usize) -> Self {
        RowSpace { width, inputs: 0, rows: Vec::new() }
    }

    pub fn from_rows<'a>(width: usize, rows: impl IntoIterator<Item = &'a FixedBitSet>) -> Self {
        let mut s = Self::new(width);
        for r in rows {
            s.push(r);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds input row number `self.inputs`; returns whether it raised the rank.
    pub fn push(&mut self, v: &FixedBitSet) -> bool {
        let idx = self.inputs;
        self.inputs += 1;
        for r in &mut self.rows {
            r.1.grow(self.inputs);
        }
        let mut combo = FixedBitSet::with_capacity(self.inputs);
        combo.insert(idx);
        let (rest, combo) = self.reduce_with(v.clone(), combo);
        match rest.minimum() {
            Some(p) => {
                self.rows.push((rest, combo, p));
                true
            }
            None => false,
        }
    }

    fn reduce_with(&self, mut v: FixedBitSet, mut combo: FixedBitSet) -> (FixedBitSet, FixedBitSet) {
        v.grow(self.width);
        combo.grow(self.inputs);
        for (row, c, p) in &self.rows {
            if v.contains(*p) {
                v.symmetric_difference_with(row);
                combo.symmetric_difference_with(c);
            }
        }
        (v, combo)
    }

    /// Inputs whose sum is `v`, if `v` lies in the span.
    pub fn solve(&self, v: &FixedBitSet) -> Option<FixedBitSet> {
        let (rest, combo) = self.reduce_with(v.clone(), FixedBitSet::with_capacity(self.inputs));
        rest.is_clear().then_some(combo)
    }

    pub fn contains(&self, v: &FixedBitSet) -> bool {
        self.solve(v).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            b.set(i, c == '1');
        }
        b
    }

    #[test]
    fn rank_and_solve() {
        let rows = [bits("1100"), bits("0110"), bits("1010"), bits("0001")];
        let s = RowSpace::from_rows(4, rows.iter());
        assert_eq!(s.rank(), 3);
        let combo = s.solve(&bits("1011")).unwrap();
        let mut acc = FixedBitSet::with_capacity(4);
        for i in combo.ones() {
            acc.symmetric_difference_with(&rows[i]);
        }
        assert_eq!(acc, bits("1011"));
        assert!(!s.contains(&bits("1000")));
    }
}

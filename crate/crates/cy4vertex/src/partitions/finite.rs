use crate::algebra::LaurentPoly;
use std::fmt;

/// Finite partition as a weakly decreasing staircase of column heights:
/// the box `(i, j)` is present iff `j < cols[i]`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePartition {
    cols: Vec<u32>,
}

impl FinitePartition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Single box.
    pub fn one() -> Self {
        Self::from_cols(vec![1])
    }

    pub fn from_cols(mut cols: Vec<u32>) -> Self {
        while cols.last() == Some(&0) {
            cols.pop();
        }
        assert!(
            cols.windows(2).all(|w| w[0] >= w[1]),
            "columns must be weakly decreasing"
        );
        Self { cols }
    }

    pub fn from_boxes(boxes: impl IntoIterator<Item = (i32, i32)>) -> Self {
        let mut cols: Vec<u32> = Vec::new();
        for (i, j) in boxes {
            assert!(i >= 0 && j >= 0);
            if cols.len() <= i as usize {
                cols.resize(i as usize + 1, 0);
            }
            cols[i as usize] = cols[i as usize].max(j as u32 + 1);
        }
        Self::from_cols(cols)
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.cols.iter().map(|&c| c as u64).sum()
    }

    pub fn contains(&self, i: i32, j: i32) -> bool {
        i >= 0
            && j >= 0
            && (i as usize) < self.cols.len()
            && (j as u32) < self.cols[i as usize]
    }

    /// Extent: the smallest `n` with all boxes inside `[0, n)^2`.
    pub fn extent(&self) -> i32 {
        let h = self.cols.first().copied().unwrap_or(0) as i32;
        (self.cols.len() as i32).max(h)
    }

    pub fn boxes(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(i, &h)| (0..h as i32).map(move |j| (i as i32, j)))
    }

    /// Character as a Laurent polynomial with box `(i, j)` contributing
    /// `t_{slot_i}^i t_{slot_j}^j`.
    pub fn character(&self, slot_i: usize, slot_j: usize) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (i, j) in self.boxes() {
            let mut w = [0i32; 5];
            w[slot_i] = i;
            w[slot_j] = j;
            p.add_assign(&LaurentPoly::monomial_whole(w));
        }
        p
    }

    /// All partitions of size `n`.
    pub fn all_of_size(n: u32) -> Vec<Self> {
        fn rec(remaining: u32, max_col: u32, acc: &mut Vec<u32>, out: &mut Vec<FinitePartition>) {
            if remaining == 0 {
                out.push(FinitePartition::from_cols(acc.clone()));
                return;
            }
            let hi = remaining.min(max_col);
            for c in (1..=hi).rev() {
                acc.push(c);
                rec(remaining - c, c, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n.max(1), &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for FinitePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cols.is_empty() {
            return write!(f, "-");
        }
        let strs: Vec<String> = self.cols.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl fmt::Debug for FinitePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_membership() {
        let p = FinitePartition::from_cols(vec![3, 1]);
        assert!(p.contains(0, 2));
        assert!(p.contains(1, 0));
        assert!(!p.contains(1, 1));
        assert!(!p.contains(2, 0));
        assert_eq!(p.size(), 4);
    }

    #[test]
    fn enumeration_counts() {
        // partition numbers 1, 1, 2, 3, 5, 7
        for (n, expect) in [(0u32, 1usize), (1, 1), (2, 2), (3, 3), (4, 5), (5, 7)] {
            assert_eq!(FinitePartition::all_of_size(n).len(), expect, "n = {}", n);
        }
    }
}

//! Label sequences indexing the cells of the cactus configuration space.
//!
//! A sequence over `{1..n}` is admissible when every label occurs, adjacent
//! labels differ, and there is no subsequence `i, j, i, j` with `i ≠ j`.
//! The cell of a sequence is a product of simplices of total dimension
//! `Σ_j (count_j − 1)`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSequence(pub Vec<usize>);

impl CellSequence {
    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ_j (count_j − 1)`, which is the length minus the number of labels.
    pub fn dimension(&self) -> usize {
        let mut labels = self.0.clone();
        labels.sort_unstable();
        labels.dedup();
        self.0.len() - labels.len()
    }

    pub fn is_admissible(&self, n: usize) -> bool {
        let s = &self.0;
        s.iter().all(|&l| (1..=n).contains(&l))
            && (1..=n).all(|l| s.contains(&l))
            && s.windows(2).all(|w| w[0] != w[1])
            && !has_alternation(s)
    }
}

impl fmt::Display for CellSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Whether `a, b, a, b` occurs as a subsequence of `s` restricted to the
/// pair `{a, b}`.
fn alternates(s: &[usize], a: usize, b: usize) -> bool {
    let mut runs = 0;
    let mut last = None;
    for &l in s.iter().filter(|&&l| l == a || l == b) {
        if last != Some(l) {
            runs += 1;
            last = Some(l);
        }
    }
    runs >= 4
}

/// Whether `s` contains a subsequence `i, j, i, j` with `i ≠ j`.
pub fn has_alternation(s: &[usize]) -> bool {
    let mut labels = s.to_vec();
    labels.sort_unstable();
    labels.dedup();
    labels
        .iter()
        .enumerate()
        .any(|(k, &a)| labels[k + 1..].iter().any(|&b| alternates(s, a, b)))
}

/// All admissible sequences of length at most `max_length`, ordered by
/// length and then lexicographically.
pub fn enumerate_cells(n: usize, max_length: usize) -> Vec<CellSequence> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = Vec::new();
    extend(n, max_length, &mut cur, &mut out);
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

fn extend(n: usize, max_length: usize, cur: &mut Vec<usize>, out: &mut Vec<CellSequence>) {
    let missing = (1..=n).filter(|l| !cur.contains(l)).count();
    if cur.len() + missing > max_length {
        return;
    }
    if missing == 0 {
        out.push(CellSequence(cur.clone()));
    }
    if cur.len() == max_length {
        return;
    }
    for l in 1..=n {
        if cur.last() == Some(&l) {
            continue;
        }
        cur.push(l);
        let ok = cur[..cur.len() - 1]
            .iter()
            .filter(|&&a| a != l)
            .all(|&a| !alternates(cur, a, l));
        if ok {
            extend(n, max_length, cur, out);
        }
        cur.pop();
    }
}

//! Permutations of `{0, .., n-1}` acting on the right of operad elements.
//!
//! `(x σ)_i = x_{σ(i)}`, so `x (σ τ) = (x σ) τ` with `σ τ = σ ∘ τ`.

use rand::seq::SliceRandom;
use rand::Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from its image list, rejecting anything that is
    /// not a bijection of `0..n`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// Parses a one-based image list such as `2 1 3`.
    pub fn parse_one_based(s: &str) -> Option<Self> {
        let images = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().ok().and_then(|k| k.checked_sub(1)))
            .collect::<Option<Vec<_>>>()?;
        Self::from_images(images)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Perm(v)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Perm(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// Block sum `σ_1 ⊕ … ⊕ σ_n`.
    pub fn block_sum(parts: &[Perm]) -> Perm {
        let mut images = Vec::new();
        let mut offset = 0;
        for p in parts {
            images.extend(p.0.iter().map(|&i| i + offset));
            offset += p.len();
        }
        Perm(images)
    }

    /// The block permutation `σ⟨m_1, …, m_n⟩` satisfying
    /// `γ(x σ; y_1, …, y_n) = γ(x; y_{σ⁻¹1}, …, y_{σ⁻¹n}) · σ⟨m⟩`
    /// where `m_i` is the arity of `y_i`.
    pub fn block_permutation(sigma: &Perm, sizes: &[usize]) -> Perm {
        assert_eq!(sigma.len(), sizes.len());
        let inv = sigma.inverse();
        // offsets of blocks in γ(x; y_{σ⁻¹1}, …): block k has size m_{σ⁻¹(k)}
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for k in 0..sizes.len() {
            offsets.push(acc);
            acc += sizes[inv.apply(k)];
        }
        let mut images = Vec::with_capacity(acc);
        for (i, &m) in sizes.iter().enumerate() {
            let base = offsets[sigma.apply(i)];
            images.extend((0..m).map(|j| base + j));
        }
        Perm(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

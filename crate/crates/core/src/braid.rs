//! Braids as automorphisms of `F_n`, the tuple model `W_n` of the pure
//! ribbon braid group, and the bijection `Λ: W_n → PB_n × ℤⁿ`.
//!
//! Indices in the public constructors ([`sigma`], [`alpha_gen`],
//! [`WElement::zeta`]) are one-based to match the usual generator names.
//! Automorphism inverses are never searched for: every [`BraidAut`] carries
//! its inverse, built alongside it from the generators.

use crate::freegroup::{product_word, Endomorphism, FreeGroupError, Letter, Word};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("generator index out of range: {0}")]
    BadIndex(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("element has no inverse certificate (raw input)")]
    NoCertificate,
    #[error("not pure: image of x{0} is not conjugate to x{0}")]
    NotPure(usize),
    #[error("product word x1…xn is not fixed")]
    ProductNotFixed,
    #[error("cannot parse braid token {0:?}")]
    Parse(String),
    #[error(transparent)]
    FreeGroup(#[from] FreeGroupError),
}

/// An automorphism of `F_n` together with its inverse.
#[derive(Debug, Clone)]
pub struct BraidAut {
    forward: Endomorphism,
    backward: Endomorphism,
}

impl PartialEq for BraidAut {
    fn eq(&self, other: &Self) -> bool {
        self.forward == other.forward
    }
}

impl Eq for BraidAut {}

impl BraidAut {
    pub fn identity(n: usize) -> Self {
        BraidAut {
            forward: Endomorphism::identity(n),
            backward: Endomorphism::identity(n),
        }
    }

    pub fn rank(&self) -> usize {
        self.forward.rank()
    }

    pub fn forward(&self) -> &Endomorphism {
        &self.forward
    }

    pub fn backward(&self) -> &Endomorphism {
        &self.backward
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BraidAut) -> Result<BraidAut, BraidError> {
        if self.rank() != other.rank() {
            return Err(BraidError::RankMismatch(self.rank(), other.rank()));
        }
        Ok(BraidAut {
            forward: self.forward.compose(&other.forward)?,
            backward: other.backward.compose(&self.backward)?,
        })
    }

    pub fn inverse(&self) -> BraidAut {
        BraidAut {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    pub fn pow(&self, k: i64) -> BraidAut {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = BraidAut::identity(self.rank());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base).expect("same rank");
        }
        acc
    }

    pub fn fixes_product(&self) -> bool {
        let p = product_word(self.rank());
        self.forward.apply(&p).map(|w| w == p).unwrap_or(false)
    }

    /// Each `x_i` maps to a conjugate of `x_i`.
    pub fn is_pure(&self) -> bool {
        self.forward
            .images()
            .iter()
            .enumerate()
            .all(|(i, w)| w.is_conjugate_to_generator(i))
    }

    /// Whether the carried inverse really is a two-sided inverse.
    pub fn certificate_holds(&self) -> bool {
        let fb = self.forward.compose(&self.backward);
        let bf = self.backward.compose(&self.forward);
        matches!((fb, bf), (Ok(a), Ok(b)) if a.is_identity() && b.is_identity())
    }
}

/// The Artin generator `σ_i` (one-based), acting by
/// `x_i ↦ x_i x_{i+1} x_i⁻¹`, `x_{i+1} ↦ x_i`.
pub fn sigma(i: usize, n: usize) -> Result<BraidAut, BraidError> {
    if i < 1 || i >= n {
        return Err(BraidError::BadIndex(format!("sigma {i} on {n} strands")));
    }
    let a = i - 1;
    let b = i;
    let gen = |k: usize| Word::generator(n, k).expect("in range");
    let mut fwd: Vec<Word> = (0..n).map(gen).collect();
    let mut bwd = fwd.clone();
    fwd[a] = Word::reduce(
        vec![Letter::new(a, false), Letter::new(b, false), Letter::new(a, true)],
        n,
    )?;
    fwd[b] = gen(a);
    bwd[a] = gen(b);
    bwd[b] = Word::reduce(
        vec![Letter::new(b, true), Letter::new(a, false), Letter::new(b, false)],
        n,
    )?;
    Ok(BraidAut {
        forward: Endomorphism::new(fwd)?,
        backward: Endomorphism::new(bwd)?,
    })
}

/// The pure braid generator
/// `α_ij = σ_{j-1} ⋯ σ_{i+1} σ_i² σ_{i+1}⁻¹ ⋯ σ_{j-1}⁻¹`, one-based `i < j`.
pub fn alpha_gen(i: usize, j: usize, n: usize) -> Result<BraidAut, BraidError> {
    if !(1 <= i && i < j && j <= n) {
        return Err(BraidError::BadIndex(format!("alpha {i},{j} on {n} strands")));
    }
    let mut prefix = BraidAut::identity(n);
    for k in ((i + 1)..j).rev() {
        prefix = prefix.compose(&sigma(k, n)?)?;
    }
    let s = sigma(i, n)?;
    prefix
        .compose(&s)?
        .compose(&s)?
        .compose(&prefix.inverse())
}

/// A tuple `(w_1, …, w_n)` with `α(w)(x_i) = w_i x_i w_i⁻¹`.
#[derive(Debug, Clone)]
pub struct WElement {
    words: Vec<Word>,
    /// Inverse of `α(w)`; `None` for raw (deserialized) elements.
    alpha_inverse: Option<Endomorphism>,
}

impl PartialEq for WElement {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

impl Eq for WElement {}

fn conj_image(w: &Word, i: usize, n: usize) -> Word {
    let x = Word::generator(n, i).expect("in range");
    w.multiply(&x)
        .and_then(|t| t.multiply(&w.invert()))
        .expect("same rank")
}

impl WElement {
    pub fn identity(n: usize) -> Self {
        WElement {
            words: vec![Word::identity(n); n],
            alpha_inverse: Some(Endomorphism::identity(n)),
        }
    }

    /// The twist `ζ_i` (one-based): `x_i` in slot `i`, empty elsewhere.
    pub fn zeta(i: usize, n: usize) -> Result<Self, BraidError> {
        if i < 1 || i > n {
            return Err(BraidError::BadIndex(format!("zeta {i} on {n} strands")));
        }
        let mut w = Self::identity(n);
        w.words[i - 1] = Word::generator(n, i - 1)?;
        Ok(w)
    }

    /// `α_ij` as an element of `W_n` (zero twists).
    pub fn alpha(i: usize, j: usize, n: usize) -> Result<Self, BraidError> {
        let b = alpha_gen(i, j, n)?;
        lambda_inverse(&PRBElement {
            braid: b,
            twists: vec![0; n],
        })
    }

    /// The standard generators `ζ_1..ζ_n` followed by all `α_ij`.
    pub fn generators(n: usize) -> Vec<WElement> {
        let mut gens: Vec<WElement> = (1..=n).map(|i| Self::zeta(i, n).expect("valid")).collect();
        for i in 1..=n {
            for j in (i + 1)..=n {
                gens.push(Self::alpha(i, j, n).expect("valid"));
            }
        }
        gens
    }

    /// Accepts an arbitrary tuple after checking the two necessary
    /// conditions for membership. The result is marked raw and cannot be
    /// inverted.
    pub fn from_raw(words: Vec<Word>) -> Result<Self, BraidError> {
        let n = words.len();
        if let Some(w) = words.iter().find(|w| w.rank() != n) {
            return Err(BraidError::RankMismatch(w.rank(), n));
        }
        let el = WElement {
            words,
            alpha_inverse: None,
        };
        let alpha = el.alpha_endo();
        for (i, img) in alpha.images().iter().enumerate() {
            if !img.is_conjugate_to_generator(i) {
                return Err(BraidError::NotPure(i + 1));
            }
        }
        let p = product_word(n);
        if alpha.apply(&p)? != p {
            return Err(BraidError::ProductNotFixed);
        }
        Ok(el)
    }

    pub fn rank(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn is_raw(&self) -> bool {
        self.alpha_inverse.is_none()
    }

    pub fn alpha_endo(&self) -> Endomorphism {
        let n = self.rank();
        Endomorphism::new(
            self.words
                .iter()
                .enumerate()
                .map(|(i, w)| conj_image(w, i, n))
                .collect(),
        )
        .expect("ranks agree")
    }

    /// `α(w)` with its inverse, if this element carries one.
    pub fn alpha_aut(&self) -> Result<BraidAut, BraidError> {
        let backward = self.alpha_inverse.clone().ok_or(BraidError::NoCertificate)?;
        Ok(BraidAut {
            forward: self.alpha_endo(),
            backward,
        })
    }

    pub fn fixes_product(&self) -> bool {
        let p = product_word(self.rank());
        self.alpha_endo().apply(&p).map(|w| w == p).unwrap_or(false)
    }

    pub fn twists(&self) -> Vec<i64> {
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| w.exponent_sum(i))
            .collect()
    }
}

impl fmt::Display for WElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.words.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `(v·w)_i = α(v)(w_i) v_i`.
pub fn w_multiply(v: &WElement, w: &WElement) -> Result<WElement, BraidError> {
    if v.rank() != w.rank() {
        return Err(BraidError::RankMismatch(v.rank(), w.rank()));
    }
    let av = v.alpha_endo();
    let words = w
        .words
        .iter()
        .zip(&v.words)
        .map(|(wi, vi)| Ok(av.apply(wi)?.multiply(vi)?))
        .collect::<Result<Vec<_>, BraidError>>()?;
    // α(v·w) = α(v) ∘ α(w), so its inverse is α(w)⁻¹ ∘ α(v)⁻¹
    let alpha_inverse = match (&w.alpha_inverse, &v.alpha_inverse) {
        (Some(wi), Some(vi)) => Some(wi.compose(vi)?),
        _ => None,
    };
    Ok(WElement {
        words,
        alpha_inverse,
    })
}

/// Slot `i` of the inverse is `α(w)⁻¹(w_i⁻¹)`.
pub fn w_invert(w: &WElement) -> Result<WElement, BraidError> {
    let back = w.alpha_inverse.as_ref().ok_or(BraidError::NoCertificate)?;
    let words = w
        .words
        .iter()
        .map(|wi| back.apply(&wi.invert()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WElement {
        words,
        alpha_inverse: Some(w.alpha_endo()),
    })
}

/// An element of `PRB_n = PB_n × ℤⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PRBElement {
    pub braid: BraidAut,
    pub twists: Vec<i64>,
}

impl PRBElement {
    pub fn identity(n: usize) -> Self {
        PRBElement {
            braid: BraidAut::identity(n),
            twists: vec![0; n],
        }
    }

    /// Componentwise product: braids compose, twists add.
    pub fn multiply(&self, other: &PRBElement) -> Result<PRBElement, BraidError> {
        Ok(PRBElement {
            braid: self.braid.compose(&other.braid)?,
            twists: self
                .twists
                .iter()
                .zip(&other.twists)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

pub fn lambda(w: &WElement) -> Result<PRBElement, BraidError> {
    Ok(PRBElement {
        braid: w.alpha_aut()?,
        twists: w.twists(),
    })
}

/// Recovers `w_i = c_i x_i^k` from the pure braid part, where `c_i` is the
/// conjugator left by cyclic reduction of `f(x_i)` and `k` fixes the
/// exponent sum to `m_i`.
pub fn lambda_inverse(p: &PRBElement) -> Result<WElement, BraidError> {
    let n = p.braid.rank();
    if p.twists.len() != n {
        return Err(BraidError::RankMismatch(n, p.twists.len()));
    }
    let mut words = Vec::with_capacity(n);
    for (i, img) in p.braid.forward().images().iter().enumerate() {
        let (core, conj) = img.cyclic_reduce();
        if core != Word::generator(n, i)? {
            return Err(BraidError::NotPure(i + 1));
        }
        let k = p.twists[i] - conj.exponent_sum(i);
        words.push(conj.multiply(&Word::power(n, i, k))?);
    }
    Ok(WElement {
        words,
        alpha_inverse: Some(p.braid.backward().clone()),
    })
}

/// The action `(γ, δ)·φ = δ · φ · γ⁻¹`.
pub fn prb_act(gamma: &WElement, delta: &WElement, phi: &WElement) -> Result<WElement, BraidError> {
    w_multiply(delta, &w_multiply(phi, &w_invert(gamma)?)?)
}

/// A token of the braid word syntax `s1 s2^-1 a13 z2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidToken {
    Sigma { i: usize, inverse: bool },
    Alpha { i: usize, j: usize, inverse: bool },
    Zeta { i: usize, inverse: bool },
}

pub fn parse_braid_word(s: &str) -> Result<Vec<BraidToken>, BraidError> {
    s.split_whitespace()
        .map(|tok| {
            let bad = || BraidError::Parse(tok.to_string());
            let (body, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let mut chars = body.chars();
            let kind = chars.next().ok_or_else(bad)?;
            let digits = chars.as_str();
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            match kind {
                's' => Ok(BraidToken::Sigma {
                    i: digits.parse().map_err(|_| bad())?,
                    inverse,
                }),
                'z' => Ok(BraidToken::Zeta {
                    i: digits.parse().map_err(|_| bad())?,
                    inverse,
                }),
                'a' => {
                    // aIJ: single digits, or comma form a1,12 for wide braids
                    let (i, j) = if let Some((a, b)) = digits.split_once(',') {
                        (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)
                    } else if digits.len() == 2 {
                        (
                            digits[..1].parse().map_err(|_| bad())?,
                            digits[1..].parse().map_err(|_| bad())?,
                        )
                    } else {
                        return Err(bad());
                    };
                    Ok(BraidToken::Alpha { i, j, inverse })
                }
                _ => Err(bad()),
            }
        })
        .collect()
}

/// Evaluates a braid word. Words made only of `s`/`a` tokens produce a
/// [`BraidAut`]; words containing twists must be pure (only `a` and `z`
/// tokens) and are evaluated in `W_n`.
pub enum BraidWordValue {
    Braid(BraidAut),
    Ribbon(WElement),
}

pub fn eval_braid_word(tokens: &[BraidToken], n: usize) -> Result<BraidWordValue, BraidError> {
    let has_twist = tokens.iter().any(|t| matches!(t, BraidToken::Zeta { .. }));
    if !has_twist {
        let mut acc = BraidAut::identity(n);
        for t in tokens {
            let (g, inv) = match *t {
                BraidToken::Sigma { i, inverse } => (sigma(i, n)?, inverse),
                BraidToken::Alpha { i, j, inverse } => (alpha_gen(i, j, n)?, inverse),
                BraidToken::Zeta { .. } => unreachable!(),
            };
            acc = acc.compose(&if inv { g.inverse() } else { g })?;
        }
        return Ok(BraidWordValue::Braid(acc));
    }
    let mut acc = WElement::identity(n);
    for t in tokens {
        let (g, inv) = match *t {
            BraidToken::Sigma { .. } => {
                return Err(BraidError::Parse(
                    "sigma generators cannot be mixed with twists".into(),
                ))
            }
            BraidToken::Alpha { i, j, inverse } => (WElement::alpha(i, j, n)?, inverse),
            BraidToken::Zeta { i, inverse } => (WElement::zeta(i, n)?, inverse),
        };
        let g = if inv { w_invert(&g)? } else { g };
        acc = w_multiply(&acc, &g)?;
    }
    Ok(BraidWordValue::Ribbon(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, n: usize) -> Word {
        Word::parse(s, n).unwrap()
    }

    #[test]
    fn sigma_images() {
        let s = sigma(1, 2).unwrap();
        assert_eq!(s.forward().image(0), &w("x1 x2 x1^-1", 2));
        assert_eq!(s.forward().image(1), &w("x1", 2));
        assert!(s.certificate_holds());
        assert_eq!(sigma(1, 3).unwrap().forward().image(2), &w("x3", 3));
        assert_eq!(s.forward().apply(&w("x1 x2", 2)).unwrap(), w("x1 x2", 2));
    }

    #[test]
    fn sigma_bad_index() {
        assert!(sigma(0, 3).is_err());
        assert!(sigma(3, 3).is_err());
        assert!(alpha_gen(2, 2, 3).is_err());
        assert!(alpha_gen(1, 4, 3).is_err());
    }

    #[test]
    fn alpha_12_is_sigma_squared() {
        let a = alpha_gen(1, 2, 2).unwrap();
        assert_eq!(a.forward().image(0), &w("x1 x2 x1 x2^-1 x1^-1", 2));
        assert_eq!(a.forward().image(1), &w("x1 x2 x1^-1", 2));
        assert_eq!(a, sigma(1, 2).unwrap().pow(2));
    }

    #[test]
    fn alpha_generators_are_pure() {
        assert!(alpha_gen(1, 3, 3).unwrap().fixes_product());
        let a = alpha_gen(2, 4, 5).unwrap();
        assert!(a.is_pure());
        assert!(a.fixes_product());
        assert!(a.certificate_holds());
    }

    #[test]
    fn w_multiply_examples() {
        let v = WElement::zeta(1, 2).unwrap();
        let vv = w_multiply(&v, &v).unwrap();
        assert_eq!(vv.words(), &[w("x1 x1", 2), Word::identity(2)]);
        assert_eq!(w_multiply(&v, &WElement::identity(2)).unwrap(), v);
    }

    #[test]
    fn inverse_examples() {
        let id = WElement::identity(3);
        assert_eq!(w_invert(&id).unwrap(), id);
        let z = WElement::zeta(1, 2).unwrap();
        assert_eq!(w_invert(&z).unwrap().words(), &[w("x1^-1", 2), Word::identity(2)]);
    }

    #[test]
    fn lambda_examples() {
        let z = WElement::zeta(1, 2).unwrap();
        let l = lambda(&z).unwrap();
        assert!(l.braid.forward().is_identity());
        assert_eq!(l.twists, vec![1, 0]);
        assert_eq!(lambda(&WElement::identity(3)).unwrap(), PRBElement::identity(3));
    }

    #[test]
    fn lambda_inverse_rejects_non_pure() {
        let p = PRBElement {
            braid: sigma(1, 2).unwrap(),
            twists: vec![0, 0],
        };
        assert_eq!(lambda_inverse(&p), Err(BraidError::NotPure(1)));
    }

    #[test]
    fn raw_elements_are_quarantined() {
        let raw = WElement::from_raw(vec![w("x1", 2), Word::identity(2)]).unwrap();
        assert!(raw.is_raw());
        assert_eq!(w_invert(&raw), Err(BraidError::NoCertificate));
        assert!(matches!(
            WElement::from_raw(vec![w("x2", 2), Word::identity(2)]),
            Err(BraidError::ProductNotFixed)
        ));
    }

    #[test]
    fn action_formulas_on_generators() {
        for n in 1..=3 {
            let one = WElement::identity(n);
            for g in WElement::generators(n) {
                assert_eq!(prb_act(&g, &g, &one).unwrap(), one);
                assert_eq!(prb_act(&one, &g, &one).unwrap(), g);
            }
        }
    }

    #[test]
    fn braid_word_tokens() {
        let toks = parse_braid_word("s1 s2^-1 a13 z2").unwrap();
        assert_eq!(
            toks,
            vec![
                BraidToken::Sigma { i: 1, inverse: false },
                BraidToken::Sigma { i: 2, inverse: true },
                BraidToken::Alpha { i: 1, j: 3, inverse: false },
                BraidToken::Zeta { i: 2, inverse: false },
            ]
        );
        assert!(parse_braid_word("q1").is_err());
        assert!(parse_braid_word("a1").is_err());
    }

    #[test]
    fn twists_evaluate_in_w() {
        let toks = parse_braid_word("z1 a12 z1^-1").unwrap();
        match eval_braid_word(&toks, 2).unwrap() {
            BraidWordValue::Ribbon(el) => {
                assert_eq!(el.twists(), vec![0, 0]);
                assert!(el.fixes_product());
            }
            BraidWordValue::Braid(_) => panic!("expected ribbon element"),
        }
        assert!(eval_braid_word(&parse_braid_word("s1 z1").unwrap(), 2).is_err());
    }
}

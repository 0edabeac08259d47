//! Operads, realization systems, and a harness that checks their axioms by
//! exact equality on sampled instances.
//!
//! Element equality is supplied by each instance ([`Operad::equal`]); the
//! harness never compares raw representations. Realization points are
//! compared with `==`, so instances must keep points in a canonical form.

use crate::perm::Perm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("input index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("expected {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid element: {0}")]
    Invalid(String),
}

pub trait Operad {
    type Elem: Clone + fmt::Debug;

    fn arity(&self, x: &Self::Elem) -> usize;
    fn unit(&self) -> Self::Elem;
    /// Partial composition `x ∘_i y` with zero-based `i`.
    fn compose_at(&self, x: &Self::Elem, i: usize, y: &Self::Elem) -> Result<Self::Elem, OperadError>;
    /// Right action `x σ`.
    fn act(&self, x: &Self::Elem, sigma: &Perm) -> Result<Self::Elem, OperadError>;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn validate(&self, x: &Self::Elem) -> Result<(), String>;
    fn describe(&self, x: &Self::Elem) -> Value;

    /// Full composition `γ(x; y_1, …, y_n)`, built from the last input down
    /// so that earlier input positions stay put.
    fn gamma(&self, x: &Self::Elem, ys: &[Self::Elem]) -> Result<Self::Elem, OperadError> {
        let n = self.arity(x);
        if ys.len() != n {
            return Err(OperadError::ArityMismatch {
                expected: n,
                got: ys.len(),
            });
        }
        let mut acc = x.clone();
        for (i, y) in ys.iter().enumerate().rev() {
            acc = self.compose_at(&acc, i, y)?;
        }
        Ok(acc)
    }
}

/// A realization system with boundary circle `X = S¹`.
///
/// `Param` is a point of the boundary circle; `Point` a point of some
/// realization `|x|`.
pub trait Realization: Operad {
    type Param: Clone + fmt::Debug + PartialEq;
    type Point: Clone + fmt::Debug + PartialEq;

    fn circle_samples(&self, density: usize) -> Vec<Self::Param>;
    /// Finitely many exactly representable points of `|x|`.
    fn realization_samples(&self, x: &Self::Elem, density: usize) -> Vec<Self::Point>;
    fn contains(&self, x: &Self::Elem, p: &Self::Point) -> bool;
    fn boundary_in(&self, x: &Self::Elem, i: usize, q: &Self::Param) -> Self::Point;
    fn boundary_out(&self, x: &Self::Elem, q: &Self::Param) -> Self::Point;
    /// `σ*: |x| → |x σ|`.
    fn symmetry(&self, x: &Self::Elem, sigma: &Perm, p: &Self::Point) -> Self::Point;
    /// Lower map `|x| → |γ(x; ys)|` of the pasting square.
    fn paste_lower(&self, x: &Self::Elem, ys: &[Self::Elem], p: &Self::Point) -> Self::Point;
    /// Right-hand map `|y_i| → |γ(x; ys)|` of the pasting square.
    fn paste_right(&self, x: &Self::Elem, ys: &[Self::Elem], i: usize, p: &Self::Point) -> Self::Point;
    /// [`Realization::paste_right`] with `x`, `ys` and `i` fixed, for
    /// instances that can precompute part of it.
    fn right_map<'a>(
        &'a self,
        x: &'a Self::Elem,
        ys: &'a [Self::Elem],
        i: usize,
    ) -> Box<dyn Fn(&Self::Point) -> Self::Point + 'a> {
        Box::new(move |p| self.paste_right(x, ys, i, p))
    }
    /// Some point of `|x|` sent to `p` by the lower map, if any.
    fn lower_preimage(&self, x: &Self::Elem, ys: &[Self::Elem], p: &Self::Point) -> Option<Self::Point>;
    /// Some point of `|y_i|` sent to `p` by the `i`-th right-hand map, if any.
    fn right_preimage(
        &self,
        x: &Self::Elem,
        ys: &[Self::Elem],
        i: usize,
        p: &Self::Point,
    ) -> Option<Self::Point>;
    /// Some `q` with `∂_out(q) = p`, if any.
    fn boundary_out_param(&self, y: &Self::Elem, p: &Self::Point) -> Option<Self::Param>;
    fn point_json(&self, p: &Self::Point) -> Value;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomEntry {
    pub axiom: String,
    pub pass: bool,
    pub witness: Option<Value>,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
    /// Set when the sampler produced an element its own instance rejects.
    pub input_error: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.input_error.is_none() && self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, axiom: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "entries": self.entries,
            "input_error": self.input_error,
        })
    }
}

pub const OPERAD_AXIOMS: [&str; 3] = ["unit", "associativity", "equivariance"];
pub const REALIZATION_AXIOMS: [&str; 6] = [
    "realization-unit",
    "realization-symmetries",
    "realization-pasting-boundaries",
    "realization-pasting-symmetries-i",
    "realization-pasting-symmetries-ii",
    "realization-pasting-associativity",
];

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub trials: usize,
    /// Largest arity drawn for a sampled element.
    pub max_arity: usize,
    /// Cap on the summed arity of a list of sampled inputs.
    pub max_total_arity: usize,
    /// Circle sample density.
    pub samples: usize,
    pub seed: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            trials: 100,
            max_arity: 3,
            max_total_arity: 8,
            samples: 64,
            seed: 0,
        }
    }
}

/// A source of random valid elements of a requested arity.
pub trait ElementSource<E> {
    fn draw(&mut self, rng: &mut ChaCha8Rng, arity: usize) -> E;
}

impl<E, F: FnMut(&mut ChaCha8Rng, usize) -> E> ElementSource<E> for F {
    fn draw(&mut self, rng: &mut ChaCha8Rng, arity: usize) -> E {
        self(rng, arity)
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("sampled element failed validation: {0}")]
    Input(String),
    #[error("sample density must be positive")]
    ZeroDensity,
    #[error(transparent)]
    Operad(#[from] OperadError),
}

struct Tally {
    name: &'static str,
    trials: usize,
    witness: Option<Value>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            trials: 0,
            witness: None,
        }
    }

    fn fail(&mut self, w: Value) {
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    fn entry(self) -> AxiomEntry {
        AxiomEntry {
            axiom: self.name.to_string(),
            pass: self.witness.is_none(),
            witness: self.witness,
            trials: self.trials,
        }
    }
}

/// One draw of `x`, `y_1..y_n` and `z` (a flat list indexed by the inputs
/// of `γ(x; y)`), plus permutations.
struct TrialData<E> {
    x: E,
    ys: Vec<E>,
    zs: Vec<E>,
}

fn draw_arities(rng: &mut ChaCha8Rng, count: usize, cfg: &HarnessConfig) -> Vec<usize> {
    let budget = cfg.max_total_arity.max(count);
    let mut used = 0;
    (0..count)
        .map(|k| {
            let left_after = count - k - 1;
            let room = (budget - used - left_after).min(cfg.max_arity).max(1);
            let a = rng.gen_range(1..=room);
            used += a;
            a
        })
        .collect()
}

fn draw_valid<O: Operad, S: ElementSource<O::Elem>>(
    op: &O,
    src: &mut S,
    rng: &mut ChaCha8Rng,
    arity: usize,
) -> Result<O::Elem, HarnessError> {
    let e = src.draw(rng, arity);
    op.validate(&e)
        .map_err(|msg| HarnessError::Input(format!("{msg}: {}", op.describe(&e))))?;
    Ok(e)
}

fn draw_trial<O: Operad, S: ElementSource<O::Elem>>(
    op: &O,
    src: &mut S,
    rng: &mut ChaCha8Rng,
    cfg: &HarnessConfig,
) -> Result<TrialData<O::Elem>, HarnessError> {
    let n = rng.gen_range(1..=cfg.max_arity.max(1));
    let x = draw_valid(op, src, rng, n)?;
    let n = op.arity(&x);
    let ys = draw_arities(rng, n, cfg)
        .into_iter()
        .map(|a| draw_valid(op, src, rng, a))
        .collect::<Result<Vec<_>, _>>()?;
    let total: usize = ys.iter().map(|y| op.arity(y)).sum();
    let zs = draw_arities(rng, total, cfg)
        .into_iter()
        .map(|a| draw_valid(op, src, rng, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TrialData { x, ys, zs })
}

/// Splits the flat list `zs` into the runs belonging to each `y_i`.
fn split_by<O: Operad>(op: &O, ys: &[O::Elem], zs: &[O::Elem]) -> Vec<Vec<O::Elem>> {
    let mut out = Vec::with_capacity(ys.len());
    let mut k = 0;
    for y in ys {
        let m = op.arity(y);
        out.push(zs[k..k + m].to_vec());
        k += m;
    }
    out
}

fn offsets<O: Operad>(op: &O, ys: &[O::Elem]) -> Vec<usize> {
    let mut acc = 0;
    ys.iter()
        .map(|y| {
            let o = acc;
            acc += op.arity(y);
            o
        })
        .collect()
}

fn elements_json<O: Operad>(op: &O, es: &[&O::Elem]) -> Value {
    Value::Array(es.iter().map(|e| op.describe(e)).collect())
}

fn wrap_run<F: FnOnce() -> Result<(), HarnessError>>(report: &mut AxiomReport, f: F) {
    match f() {
        Ok(()) => {}
        Err(HarnessError::Input(msg)) => report.input_error = Some(msg),
        Err(e) => report.input_error = Some(e.to_string()),
    }
}

/// Unit laws, `γ`-associativity and both equivariance laws (plus the right
/// action law), each by exact instance equality.
pub fn check_operad_axioms<O: Operad, S: ElementSource<O::Elem>>(
    op: &O,
    src: &mut S,
    cfg: &HarnessConfig,
) -> AxiomReport {
    let mut report = AxiomReport::default();
    let mut unit = Tally::new(OPERAD_AXIOMS[0]);
    let mut assoc = Tally::new(OPERAD_AXIOMS[1]);
    let mut equiv = Tally::new(OPERAD_AXIOMS[2]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    wrap_run(&mut report, || {
        for _ in 0..cfg.trials {
            let t = draw_trial(op, src, &mut rng, cfg)?;
            operad_trial(op, &t, &mut rng, &mut unit, &mut assoc, &mut equiv)?;
        }
        Ok(())
    });
    report.entries = vec![unit.entry(), assoc.entry(), equiv.entry()];
    report
}

fn operad_trial<O: Operad>(
    op: &O,
    t: &TrialData<O::Elem>,
    rng: &mut ChaCha8Rng,
    unit: &mut Tally,
    assoc: &mut Tally,
    equiv: &mut Tally,
) -> Result<(), HarnessError> {
    let one = op.unit();
    let n = op.arity(&t.x);

    unit.trials += 1;
    let left = op.compose_at(&one, 0, &t.x)?;
    if !op.equal(&left, &t.x) {
        unit.fail(json!({"law": "1 ∘ x = x", "elements": elements_json(op, &[&t.x])}));
    }
    for i in 0..n {
        let right = op.compose_at(&t.x, i, &one)?;
        if !op.equal(&right, &t.x) {
            unit.fail(json!({"law": "x ∘_i 1 = x", "i": i + 1, "elements": elements_json(op, &[&t.x])}));
        }
    }

    assoc.trials += 1;
    let xy = op.gamma(&t.x, &t.ys)?;
    let lhs = op.gamma(&xy, &t.zs)?;
    let inner = t
        .ys
        .iter()
        .zip(split_by(op, &t.ys, &t.zs))
        .map(|(y, z)| op.gamma(y, &z))
        .collect::<Result<Vec<_>, _>>()?;
    let rhs = op.gamma(&t.x, &inner)?;
    if !op.equal(&lhs, &rhs) {
        let mut es = vec![&t.x];
        es.extend(t.ys.iter());
        es.extend(t.zs.iter());
        assoc.fail(json!({
            "law": "γ(γ(x;y);z) = γ(x;γ(y_i;z_i))",
            "elements": elements_json(op, &es),
            "lhs": op.describe(&lhs),
            "rhs": op.describe(&rhs),
        }));
    }

    equiv.trials += 1;
    let sigma = Perm::random(n, rng);
    let inv = sigma.inverse();
    let sizes: Vec<usize> = t.ys.iter().map(|y| op.arity(y)).collect();
    // γ(xσ; y) = γ(x; y_{σ⁻¹}) σ⟨m⟩
    let lhs = op.gamma(&op.act(&t.x, &sigma)?, &t.ys)?;
    let permuted: Vec<O::Elem> = (0..n).map(|k| t.ys[inv.apply(k)].clone()).collect();
    let rhs = op.act(&op.gamma(&t.x, &permuted)?, &Perm::block_permutation(&sigma, &sizes))?;
    if !op.equal(&lhs, &rhs) {
        let mut es = vec![&t.x];
        es.extend(t.ys.iter());
        equiv.fail(json!({"law": "γ(xσ;y) = γ(x;yσ⁻¹)σ⟨m⟩", "sigma": sigma.to_string(), "elements": elements_json(op, &es)}));
    }
    // γ(x; y_1σ_1, …) = γ(x; y)(σ_1 ⊕ … ⊕ σ_n)
    let sigmas: Vec<Perm> = sizes.iter().map(|&m| Perm::random(m, rng)).collect();
    let ysig = t
        .ys
        .iter()
        .zip(&sigmas)
        .map(|(y, s)| op.act(y, s))
        .collect::<Result<Vec<_>, _>>()?;
    let lhs = op.gamma(&t.x, &ysig)?;
    let rhs = op.act(&xy, &Perm::block_sum(&sigmas))?;
    if !op.equal(&lhs, &rhs) {
        let mut es = vec![&t.x];
        es.extend(t.ys.iter());
        equiv.fail(json!({"law": "γ(x;yσ) = γ(x;y)(⊕σ_i)", "elements": elements_json(op, &es)}));
    }
    // right action (xσ)τ = x(στ)
    let tau = Perm::random(n, rng);
    let a = op.act(&op.act(&t.x, &sigma)?, &tau)?;
    let b = op.act(&t.x, &sigma.compose(&tau))?;
    if !op.equal(&a, &b) {
        equiv.fail(json!({"law": "(xσ)τ = x(στ)", "sigma": sigma.to_string(), "tau": tau.to_string(), "elements": elements_json(op, &[&t.x])}));
    }
    Ok(())
}

fn point_witness<R: Realization>(re: &R, law: &str, es: &[&R::Elem], p: &R::Point, extra: Value) -> Value {
    json!({
        "law": law,
        "elements": elements_json(re, es),
        "point": re.point_json(p),
        "detail": extra,
    })
}

/// The six realization axioms, together with the three operad laws, on
/// `cfg.trials` random composites and `cfg.samples` circle samples.
pub fn check_realization_axioms<R: Realization, S: ElementSource<R::Elem>>(
    re: &R,
    src: &mut S,
    cfg: &HarnessConfig,
) -> AxiomReport {
    let mut report = AxiomReport::default();
    let mut unit = Tally::new(OPERAD_AXIOMS[0]);
    let mut assoc = Tally::new(OPERAD_AXIOMS[1]);
    let mut equiv = Tally::new(OPERAD_AXIOMS[2]);
    let mut ax: Vec<Tally> = REALIZATION_AXIOMS.iter().map(|n| Tally::new(n)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if cfg.samples == 0 {
        report.input_error = Some(HarnessError::ZeroDensity.to_string());
    } else {
        wrap_run(&mut report, || {
            let qs = re.circle_samples(cfg.samples);
            for _ in 0..cfg.trials {
                let t = draw_trial(re, src, &mut rng, cfg)?;
                operad_trial(re, &t, &mut rng, &mut unit, &mut assoc, &mut equiv)?;
                realization_trial(re, &t, &qs, cfg.samples, &mut rng, &mut ax)?;
            }
            Ok(())
        });
    }
    report.entries = vec![unit.entry(), assoc.entry(), equiv.entry()];
    report.entries.extend(ax.into_iter().map(Tally::entry));
    report
}

fn realization_trial<R: Realization>(
    re: &R,
    t: &TrialData<R::Elem>,
    qs: &[R::Param],
    density: usize,
    rng: &mut ChaCha8Rng,
    ax: &mut [Tally],
) -> Result<(), HarnessError> {
    let one = re.unit();
    let x = &t.x;
    let n = re.arity(x);
    let xs = re.realization_samples(x, density);
    let y_samples: Vec<Vec<R::Point>> = t.ys.iter().map(|y| re.realization_samples(y, density)).collect();
    let sizes: Vec<usize> = t.ys.iter().map(|y| re.arity(y)).collect();
    let offs = offsets(re, &t.ys);

    // 1. unit
    {
        let a = &mut ax[0];
        a.trials += 1;
        let mut seen: Vec<R::Point> = Vec::with_capacity(qs.len());
        for q in qs {
            let p_in = re.boundary_in(&one, 0, q);
            let p_out = re.boundary_out(&one, q);
            if p_in != p_out || !re.contains(&one, &p_in) {
                a.fail(point_witness(re, "∂_1 = ∂_out on |1|", &[&one], &p_in, json!(format!("{q:?}"))));
            }
            if seen.contains(&p_in) {
                a.fail(point_witness(re, "∂_1 injective on |1|", &[&one], &p_in, Value::Null));
            }
            seen.push(p_in);
        }
        let y = &t.ys[0];
        let ys1 = std::slice::from_ref(y);
        for p in y_samples[0].iter().cloned() {
            if re.paste_right(&one, ys1, 0, &p) != p {
                a.fail(point_witness(re, "right map |y| → |γ(1;y)| is identity", &[y], &p, Value::Null));
            }
        }
        for q in qs {
            let lhs = re.paste_lower(&one, ys1, &re.boundary_in(&one, 0, q));
            if lhs != re.boundary_out(y, q) {
                a.fail(point_witness(re, "lower map |1| → |y| is ∂_out", &[y], &lhs, Value::Null));
            }
        }
        let units = vec![one.clone(); n];
        for p in &xs {
            if re.paste_lower(x, &units, p) != *p {
                a.fail(point_witness(re, "lower map |x| → |γ(x;1…1)| is identity", &[x], p, Value::Null));
            }
        }
        for i in 0..n {
            for q in qs {
                let lhs = re.paste_right(x, &units, i, &re.boundary_out(&one, q));
                if lhs != re.boundary_in(x, i, q) {
                    a.fail(point_witness(re, "right map |1| → |x| is ∂_i", &[x], &lhs, json!({"i": i + 1})));
                }
            }
        }
    }

    // 2. symmetries
    {
        let a = &mut ax[1];
        a.trials += 1;
        let sigma = Perm::random(n, rng);
        let tau = Perm::random(n, rng);
        let xs_sigma = re.act(x, &sigma)?;
        let inv = sigma.inverse();
        for p in &xs {
            let once = re.symmetry(x, &sigma, p);
            if !re.contains(&xs_sigma, &once) {
                a.fail(point_witness(re, "σ* lands in |xσ|", &[x], p, json!({"sigma": sigma.to_string()})));
            }
            let twice = re.symmetry(&xs_sigma, &tau, &once);
            if twice != re.symmetry(x, &sigma.compose(&tau), p) {
                a.fail(point_witness(re, "τ*σ* = (στ)*", &[x], p, json!({"sigma": sigma.to_string(), "tau": tau.to_string()})));
            }
        }
        for q in qs {
            for i in 0..n {
                let lhs = re.symmetry(x, &sigma, &re.boundary_in(x, i, q));
                if lhs != re.boundary_in(&xs_sigma, inv.apply(i), q) {
                    a.fail(point_witness(re, "σ*∂_i = ∂_{σ⁻¹i}", &[x], &lhs, json!({"i": i + 1, "sigma": sigma.to_string()})));
                }
            }
            let lhs = re.symmetry(x, &sigma, &re.boundary_out(x, q));
            if lhs != re.boundary_out(&xs_sigma, q) {
                a.fail(point_witness(re, "σ*∂_out = ∂_out", &[x], &lhs, json!({"sigma": sigma.to_string()})));
            }
        }
    }

    let g = re.gamma(x, &t.ys)?;

    // 3. pasting and boundaries
    {
        let a = &mut ax[2];
        a.trials += 1;
        for q in qs {
            let lhs = re.paste_lower(x, &t.ys, &re.boundary_out(x, q));
            if lhs != re.boundary_out(&g, q) {
                a.fail(point_witness(re, "lower ∘ ∂_out = ∂_out", &[x, &g], &lhs, Value::Null));
            }
            for (i, y) in t.ys.iter().enumerate() {
                for j in 0..re.arity(y) {
                    let lhs = re.paste_right(x, &t.ys, i, &re.boundary_in(y, j, q));
                    if lhs != re.boundary_in(&g, offs[i] + j, q) {
                        a.fail(point_witness(re, "right_i ∘ ∂_j = ∂_{i,j}", &[x, y, &g], &lhs, json!({"i": i + 1, "j": j + 1})));
                    }
                }
            }
        }
    }

    // 4. pasting and symmetries I
    {
        let a = &mut ax[3];
        a.trials += 1;
        let sigmas: Vec<Perm> = sizes.iter().map(|&m| Perm::random(m, rng)).collect();
        let block = Perm::block_sum(&sigmas);
        let ysig = t
            .ys
            .iter()
            .zip(&sigmas)
            .map(|(y, s)| re.act(y, s))
            .collect::<Result<Vec<_>, _>>()?;
        for p in &xs {
            let lhs = re.symmetry(&g, &block, &re.paste_lower(x, &t.ys, p));
            if lhs != re.paste_lower(x, &ysig, p) {
                a.fail(point_witness(re, "(⊕σ_i)* ∘ lower = lower'", &[x], p, Value::Null));
            }
        }
        for (i, y) in t.ys.iter().enumerate() {
            let (right, right_sig) = (re.right_map(x, &t.ys, i), re.right_map(x, &ysig, i));
            for p in y_samples[i].iter().cloned() {
                let lhs = re.symmetry(&g, &block, &right(&p));
                let rhs = right_sig(&re.symmetry(y, &sigmas[i], &p));
                if lhs != rhs {
                    a.fail(point_witness(re, "(⊕σ_i)* ∘ right_i = right'_i ∘ σ_i*", &[x, y], &p, json!({"i": i + 1})));
                }
            }
        }
    }

    // 5. pasting and symmetries II
    {
        let a = &mut ax[4];
        a.trials += 1;
        let sigma = Perm::random(n, rng);
        let inv = sigma.inverse();
        let x_sigma = re.act(x, &sigma)?;
        let yinv: Vec<R::Elem> = (0..n).map(|k| t.ys[inv.apply(k)].clone()).collect();
        let big = re.gamma(x, &yinv)?;
        let block = Perm::block_permutation(&sigma, &sizes);
        for p in &xs {
            let lhs = re.symmetry(&big, &block, &re.paste_lower(x, &yinv, p));
            let rhs = re.paste_lower(&x_sigma, &t.ys, &re.symmetry(x, &sigma, p));
            if lhs != rhs {
                a.fail(point_witness(re, "σ⟨m⟩* ∘ lower = lower' ∘ σ*", &[x], p, json!({"sigma": sigma.to_string()})));
            }
        }
        for (i, y) in t.ys.iter().enumerate() {
            let (right, right_sig) = (re.right_map(x, &yinv, sigma.apply(i)), re.right_map(&x_sigma, &t.ys, i));
            for p in y_samples[i].iter().cloned() {
                let lhs = re.symmetry(&big, &block, &right(&p));
                let rhs = right_sig(&p);
                if lhs != rhs {
                    a.fail(point_witness(re, "σ⟨m⟩* ∘ right_{σi} = right'_i", &[x, y], &p, json!({"i": i + 1, "sigma": sigma.to_string()})));
                }
            }
        }
    }

    // 6. associativity of pasting
    {
        let a = &mut ax[5];
        a.trials += 1;
        let z_runs = split_by(re, &t.ys, &t.zs);
        let ws = t
            .ys
            .iter()
            .zip(&z_runs)
            .map(|(y, z)| re.gamma(y, z))
            .collect::<Result<Vec<_>, _>>()?;
        for p in &xs {
            let one_way = re.paste_lower(&g, &t.zs, &re.paste_lower(x, &t.ys, p));
            let other = re.paste_lower(x, &ws, p);
            if one_way != other {
                a.fail(point_witness(re, "two maps |x| → |Γ| agree", &[x], p, Value::Null));
            }
        }
        for (i, y) in t.ys.iter().enumerate() {
            let (right_y, right_w) = (re.right_map(x, &t.ys, i), re.right_map(x, &ws, i));
            for p in y_samples[i].iter().cloned() {
                let one_way = re.paste_lower(&g, &t.zs, &right_y(&p));
                let other = right_w(&re.paste_lower(y, &z_runs[i], &p));
                if one_way != other {
                    a.fail(point_witness(re, "two maps |y_i| → |Γ| agree", &[x, y], &p, json!({"i": i + 1})));
                }
            }
            for (j, z) in z_runs[i].iter().enumerate() {
                let right_g = re.right_map(&g, &t.zs, offs[i] + j);
                let right_z = re.right_map(y, &z_runs[i], j);
                for p in re.realization_samples(z, density) {
                    let one_way = right_g(&p);
                    let other = right_w(&right_z(&p));
                    if one_way != other {
                        a.fail(point_witness(re, "two maps |z_i^j| → |Γ| agree", &[x, y, z], &p, json!({"i": i + 1, "j": j + 1})));
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushoutReport {
    pub commutes: bool,
    /// Sampled points of `|γ(x; y)|` hit by the lower or a right-hand map.
    pub covered: usize,
    pub total: usize,
    /// Every point hit by two different maps is glued along a boundary circle.
    pub overlaps_on_boundary: bool,
    pub witness: Option<Value>,
}

impl PushoutReport {
    pub fn pass(&self) -> bool {
        self.commutes && self.covered == self.total && self.overlaps_on_boundary
    }
}

/// Checks the pasting square for `γ(x; ys)` on sampled points:
/// commutativity, joint surjectivity, and that overlaps only happen along
/// the glued boundary circles.
pub fn check_pasting_pushout<R: Realization>(
    re: &R,
    x: &R::Elem,
    ys: &[R::Elem],
    density: usize,
) -> Result<PushoutReport, HarnessError> {
    if density == 0 {
        return Err(HarnessError::ZeroDensity);
    }
    let n = re.arity(x);
    if ys.len() != n {
        return Err(OperadError::ArityMismatch {
            expected: n,
            got: ys.len(),
        }
        .into());
    }
    let qs = re.circle_samples(density);
    let mut witness = None;
    let mut commutes = true;
    for (i, y) in ys.iter().enumerate() {
        for q in qs.iter() {
            let down = re.paste_lower(x, ys, &re.boundary_in(x, i, q));
            let across = re.paste_right(x, ys, i, &re.boundary_out(y, q));
            if down != across {
                commutes = false;
                witness.get_or_insert_with(|| {
                    json!({"check": "commutativity", "i": i + 1, "lower": re.point_json(&down), "right": re.point_json(&across)})
                });
            }
        }
    }
    let g = re.gamma(x, ys)?;
    let pts = re.realization_samples(&g, density);
    let mut covered = 0;
    let mut overlaps_on_boundary = true;
    for p in &pts {
        let lower_hit = re
            .lower_preimage(x, ys, p)
            .filter(|px| re.contains(x, px) && re.paste_lower(x, ys, px) == *p);
        let right_hits: Vec<(usize, R::Point)> = (0..n)
            .filter_map(|i| {
                re.right_preimage(x, ys, i, p)
                    .filter(|py| re.contains(&ys[i], py) && re.paste_right(x, ys, i, py) == *p)
                    .map(|py| (i, py))
            })
            .collect();
        let hits = usize::from(lower_hit.is_some()) + right_hits.len();
        if hits > 0 {
            covered += 1;
        } else {
            witness.get_or_insert_with(|| json!({"check": "surjectivity", "point": re.point_json(p)}));
        }
        if hits >= 2 {
            for (i, py) in &right_hits {
                let glued = re
                    .boundary_out_param(&ys[*i], py)
                    .map(|q| re.paste_lower(x, ys, &re.boundary_in(x, *i, &q)) == *p)
                    .unwrap_or(false);
                if !glued {
                    overlaps_on_boundary = false;
                    witness.get_or_insert_with(|| {
                        json!({"check": "overlap off boundary", "i": i + 1, "point": re.point_json(p)})
                    });
                }
            }
        }
    }
    Ok(PushoutReport {
        commutes,
        covered,
        total: pts.len(),
        overlaps_on_boundary,
        witness,
    })
}#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushoutSuiteReport {
    pub instances: usize,
    pub passed: usize,
    /// Smallest covered fraction seen, as `covered / total`.
    pub min_covered: (usize, usize),
    /// The first failing instance, with its inputs.
    pub witness: Option<Value>,
}

impl PushoutSuiteReport {
    pub fn pass(&self) -> bool {
        self.passed == self.instances
    }
}

/// Runs [`check_pasting_pushout`] on `instances` random composites drawn
/// as in the axiom harness.
pub fn check_pushout_suite<R: Realization, S: ElementSource<R::Elem>>(
    re: &R,
    src: &mut S,
    cfg: &HarnessConfig,
    instances: usize,
) -> Result<PushoutSuiteReport, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    let mut out = PushoutSuiteReport {
        instances,
        passed: 0,
        min_covered: (1, 1),
        witness: None,
    };
    for _ in 0..instances {
        let n = rng.gen_range(1..=cfg.max_arity.max(1));
        let x = draw_valid(re, src, &mut rng, n)?;
        let ys = draw_arities(&mut rng, re.arity(&x), cfg)
            .into_iter()
            .map(|a| draw_valid(re, src, &mut rng, a))
            .collect::<Result<Vec<_>, _>>()?;
        let r = check_pasting_pushout(re, &x, &ys, cfg.samples)?;
        let (c, t) = out.min_covered;
        if r.covered * t < c * r.total {
            out.min_covered = (r.covered, r.total);
        }
        if r.pass() {
            out.passed += 1;
        } else if out.witness.is_none() {
            let ys_ref: Vec<&R::Elem> = ys.iter().collect();
            out.witness = Some(json!({
                "x": re.describe(&x),
                "ys": elements_json(re, &ys_ref),
                "report": r,
            }));
        }
    }
    Ok(out)
}



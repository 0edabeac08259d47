//! The action of cacti on based loops in a group, computed exactly.
//!
//! A loop is a PL path `[0, 1] → ℚ^d` in a chart of the group whose
//! endpoints both represent the identity. For the circle the chart is the
//! universal cover, so a loop may wind: its endpoint charts differ by an
//! integer.

use crate::cacti::Cactus;
use crate::rational::{ceil, floor, format_list, frac, is_integer, parse_list, ParseError, ParseMode, Q};
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{Map, Value};
use std::collections::VecDeque;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("loop breakpoints must run strictly increasing from 0 to 1")]
    Breakpoints,
    #[error("loop values have the wrong shape")]
    Shape,
    #[error("loop does not start and end at the identity")]
    NotBased,
    #[error("expected {expected} loops, got {got}")]
    Count { expected: usize, got: usize },
    #[error("invalid cactus: {0}")]
    Cactus(String),
    #[error("no lobe contains the global marked point")]
    NoRoot,
    #[error("lobe {0} is not connected to the marked lobe")]
    Disconnected(usize),
    #[error("patching constraint between lobes {0} and {1} fails")]
    Inconsistent(usize, usize),
}

/// A group with a global affine chart `ℚ^d → G` in which left translation
/// is affine.
pub trait GroupModel {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn name(&self) -> &'static str;
    fn dim(&self) -> usize;
    /// JSON keys of the chart coordinates.
    fn coord_names(&self) -> &'static [&'static str];
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_chart(&self, v: &[Q]) -> Self::Elem;
    fn to_chart(&self, g: &Self::Elem) -> Vec<Q>;
    /// Chart of `g · from_chart(v)`, affine in `v`.
    fn translate_chart(&self, g: &Self::Elem, v: &[Q]) -> Vec<Q>;
    /// `to − from` when both charts name the same element and that
    /// difference is an allowed deck shift.
    fn chart_shift(&self, from: &[Q], to: &[Q]) -> Option<Vec<Q>>;
}

/// `ℝ/ℤ` with the universal cover as chart.
#[derive(Debug, Clone, Copy, Default)]
pub struct CircleGroup;

impl GroupModel for CircleGroup {
    type Elem = Q;

    fn name(&self) -> &'static str {
        "s1"
    }

    fn dim(&self) -> usize {
        1
    }

    fn coord_names(&self) -> &'static [&'static str] {
        &["v"]
    }

    fn identity(&self) -> Q {
        Q::zero()
    }

    fn mul(&self, a: &Q, b: &Q) -> Q {
        frac(&(a + b))
    }

    fn inv(&self, a: &Q) -> Q {
        frac(&-a)
    }

    fn from_chart(&self, v: &[Q]) -> Q {
        frac(&v[0])
    }

    fn to_chart(&self, g: &Q) -> Vec<Q> {
        vec![g.clone()]
    }

    fn translate_chart(&self, g: &Q, v: &[Q]) -> Vec<Q> {
        vec![g + &v[0]]
    }

    fn chart_shift(&self, from: &[Q], to: &[Q]) -> Option<Vec<Q>> {
        let d = &to[0] - &from[0];
        is_integer(&d).then(|| vec![d])
    }
}

/// Upper unitriangular 3×3 rational matrices, `(a, b, c)` standing for
/// `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniTriangular3;

impl GroupModel for UniTriangular3 {
    type Elem = [Q; 3];

    fn name(&self) -> &'static str {
        "ut3"
    }

    fn dim(&self) -> usize {
        3
    }

    fn coord_names(&self) -> &'static [&'static str] {
        &["a", "b", "c"]
    }

    fn identity(&self) -> [Q; 3] {
        [Q::zero(), Q::zero(), Q::zero()]
    }

    fn mul(&self, x: &[Q; 3], y: &[Q; 3]) -> [Q; 3] {
        [&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2] + &x[0] * &y[1]]
    }

    fn inv(&self, x: &[Q; 3]) -> [Q; 3] {
        [-&x[0], -&x[1], &x[0] * &x[1] - &x[2]]
    }

    fn from_chart(&self, v: &[Q]) -> [Q; 3] {
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    fn to_chart(&self, g: &[Q; 3]) -> Vec<Q> {
        g.to_vec()
    }

    fn translate_chart(&self, g: &[Q; 3], v: &[Q]) -> Vec<Q> {
        self.mul(g, &self.from_chart(v)).to_vec()
    }

    fn chart_shift(&self, from: &[Q], to: &[Q]) -> Option<Vec<Q>> {
        (from == to).then(|| vec![Q::zero(); 3])
    }
}

/// A PL path in chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loop {
    t: Vec<Q>,
    v: Vec<Vec<Q>>,
}

fn lerp_vec(ta: &Q, tb: &Q, va: &[Q], vb: &[Q], t: &Q) -> Vec<Q> {
    va.iter()
        .zip(vb)
        .map(|(a, b)| crate::pl::lerp(ta, tb, a, b, t))
        .collect()
}

fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale_vec(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

impl Loop {
    pub fn new<G: GroupModel>(group: &G, t: Vec<Q>, v: Vec<Vec<Q>>) -> Result<Loop, LoopError> {
        if t.len() < 2 || t.len() != v.len() || v.iter().any(|x| x.len() != group.dim()) {
            return Err(LoopError::Shape);
        }
        if !t[0].is_zero() || !t[t.len() - 1].is_one() || t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LoopError::Breakpoints);
        }
        let e = group.identity();
        if group.from_chart(&v[0]) != e || group.from_chart(&v[v.len() - 1]) != e {
            return Err(LoopError::NotBased);
        }
        Ok(Loop { t, v })
    }

    pub fn constant<G: GroupModel>(group: &G) -> Loop {
        let e = group.to_chart(&group.identity());
        Loop {
            t: vec![Q::zero(), Q::one()],
            v: vec![e.clone(), e],
        }
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.t
    }

    pub fn values(&self) -> &[Vec<Q>] {
        &self.v
    }

    pub fn eval(&self, t: &Q) -> Vec<Q> {
        let k = match self.t.binary_search(t) {
            Ok(k) => return self.v[k].clone(),
            Err(k) => k.clamp(1, self.t.len() - 1),
        };
        lerp_vec(&self.t[k - 1], &self.t[k], &self.v[k - 1], &self.v[k], t)
    }

    /// Deck shift between the endpoint charts.
    fn period<G: GroupModel>(&self, group: &G) -> Vec<Q> {
        group
            .chart_shift(&self.v[0], &self.v[self.v.len() - 1])
            .expect("based loop")
    }

    /// Periodic extension `γ(frac y) + ⌊y⌋ · period`.
    pub fn eval_ext<G: GroupModel>(&self, group: &G, y: &Q) -> Vec<Q> {
        let n = Q::from_integer(floor(y));
        add_vec(&self.eval(&frac(y)), &scale_vec(&self.period(group), &n))
    }

    pub fn eval_group<G: GroupModel>(&self, group: &G, t: &Q) -> G::Elem {
        group.from_chart(&self.eval_ext(group, t))
    }

    /// Equal as loops in `G`: chart values differ by one constant deck shift.
    pub fn equals<G: GroupModel>(&self, group: &G, other: &Loop) -> bool {
        let mut ts: Vec<Q> = self.t.iter().chain(&other.t).cloned().collect();
        ts.sort();
        ts.dedup();
        let Some(shift) = group.chart_shift(&self.v[0], &other.v[0]) else {
            return false;
        };
        ts.iter()
            .all(|t| add_vec(&self.eval(t), &shift) == other.eval(t))
    }

    pub fn to_json_value<G: GroupModel>(&self, group: &G) -> Value {
        let mut m = Map::new();
        m.insert("t".into(), Value::from(format_list(&self.t)));
        for (k, name) in group.coord_names().iter().enumerate() {
            let col: Vec<Q> = self.v.iter().map(|x| x[k].clone()).collect();
            m.insert((*name).into(), Value::from(format_list(&col)));
        }
        Value::Object(m)
    }

    pub fn to_json<G: GroupModel>(&self, group: &G) -> String {
        serde_json::to_string_pretty(&self.to_json_value(group)).expect("serializable")
    }

    pub fn from_json<G: GroupModel>(group: &G, s: &str, mode: ParseMode) -> Result<Loop, ParseError> {
        let v: Value = serde_json::from_str(s).map_err(|e| ParseError::Schema(e.to_string()))?;
        Self::from_json_value(group, &v, mode)
    }

    pub fn from_json_value<G: GroupModel>(group: &G, v: &Value, mode: ParseMode) -> Result<Loop, ParseError> {
        let column = |key: &str| -> Result<Vec<Q>, ParseError> {
            let items: Vec<String> = serde_json::from_value(
                v.get(key)
                    .cloned()
                    .ok_or_else(|| ParseError::Schema(format!("missing field {key:?}")))?,
            )
            .map_err(|e| ParseError::Schema(e.to_string()))?;
            parse_list(&items, mode)
        };
        let t = column("t")?;
        let cols = group
            .coord_names()
            .iter()
            .map(|k| column(k))
            .collect::<Result<Vec<_>, _>>()?;
        if cols.iter().any(|c| c.len() != t.len()) {
            return Err(ParseError::Schema("column lengths differ".into()));
        }
        let vals = (0..t.len())
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Loop::new(group, t, vals).map_err(|e| ParseError::Invalid(e.to_string()))
    }
}

/// Appends `(t, v)` to a path under construction, skipping repeats of the
/// last breakpoint.
fn push_point(ts: &mut Vec<Q>, vs: &mut Vec<Vec<Q>>, t: Q, v: Vec<Q>) {
    if ts.last() == Some(&t) {
        *vs.last_mut().expect("parallel") = v;
    } else {
        ts.push(t);
        vs.push(v);
    }
}

/// The unique patching map, recorded by its per-lobe translations
/// `α ∘ ∂_i = g_i · γ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchedMap<E> {
    pub g: Vec<E>,
    /// Lobe containing the global marked point that the search started from.
    pub root: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraversalOrder {
    #[default]
    Ascending,
    Descending,
}

/// Whether lobes `i` and `j` of `c` meet: every third coordinate agrees.
pub fn lobes_meet(c: &Cactus, i: usize, j: usize) -> bool {
    let (pi, pj) = (c.boundary_in(i, &Q::zero()), c.boundary_in(j, &Q::zero()));
    (0..c.arity()).filter(|&k| k != i && k != j).all(|k| pi[k] == pj[k])
}

fn check_inputs<G: GroupModel>(group: &G, c: &Cactus, loops: &[Loop]) -> Result<(), LoopError> {
    c.validate().map_err(|e| LoopError::Cactus(e.to_string()))?;
    if loops.len() != c.arity() {
        return Err(LoopError::Count {
            expected: c.arity(),
            got: loops.len(),
        });
    }
    let e = group.identity();
    for l in loops {
        if l.v.iter().any(|x| x.len() != group.dim()) {
            return Err(LoopError::Shape);
        }
        if group.from_chart(&l.v[0]) != e || group.from_chart(&l.v[l.v.len() - 1]) != e {
            return Err(LoopError::NotBased);
        }
    }
    Ok(())
}

/// Solves for the translations `g_i` lobe by lobe outward from the marked
/// lobe, then checks every intersection constraint.
pub fn patch<G: GroupModel>(
    group: &G,
    c: &Cactus,
    loops: &[Loop],
    order: TraversalOrder,
) -> Result<PatchedMap<G::Elem>, LoopError> {
    check_inputs(group, c, loops)?;
    let n = c.arity();
    let mut idx: Vec<usize> = (0..n).collect();
    if order == TraversalOrder::Descending {
        idx.reverse();
    }
    let bullet = c.boundary_out(&Q::zero());
    let root = idx
        .iter()
        .copied()
        .find(|&i| c.boundary_in(i, &bullet[i]) == bullet)
        .ok_or(LoopError::NoRoot)?;
    let mut g: Vec<Option<G::Elem>> = vec![None; n];
    g[root] = Some(group.inv(&loops[root].eval_group(group, &bullet[root])));
    let mut queue = VecDeque::from([root]);
    while let Some(i) = queue.pop_front() {
        for &j in &idx {
            if g[j].is_some() || !lobes_meet(c, i, j) {
                continue;
            }
            let gi = g[i].clone().expect("visited");
            g[j] = Some(translation_across(group, c, loops, i, j, &gi));
            queue.push_back(j);
        }
    }
    let g = g
        .into_iter()
        .enumerate()
        .map(|(k, x)| x.ok_or(LoopError::Disconnected(k + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let map = PatchedMap { g, root };
    if let Some((i, j)) = violated_constraint(group, c, loops, &map.g) {
        return Err(LoopError::Inconsistent(i + 1, j + 1));
    }
    Ok(map)
}

/// `g_j = g_i · γ_i(x^j_i) · γ_j(x^i_j)⁻¹`.
fn translation_across<G: GroupModel>(group: &G, c: &Cactus, loops: &[Loop], i: usize, j: usize, gi: &G::Elem) -> G::Elem {
    let (pi, pj) = (c.boundary_in(i, &Q::zero()), c.boundary_in(j, &Q::zero()));
    let at_i = loops[i].eval_group(group, &pj[i]);
    let at_j = loops[j].eval_group(group, &pi[j]);
    group.mul(&group.mul(gi, &at_i), &group.inv(&at_j))
}

/// The first pair of meeting lobes (or the marked-point condition, reported
/// as `(root, root)`) that a candidate tuple `g` violates.
pub fn violated_constraint<G: GroupModel>(
    group: &G,
    c: &Cactus,
    loops: &[Loop],
    g: &[G::Elem],
) -> Option<(usize, usize)> {
    let n = c.arity();
    let bullet = c.boundary_out(&Q::zero());
    for i in 0..n {
        if c.boundary_in(i, &bullet[i]) == bullet {
            let at = group.mul(&g[i], &loops[i].eval_group(group, &bullet[i]));
            if at != group.identity() {
                return Some((i, i));
            }
        }
        for j in i + 1..n {
            if lobes_meet(c, i, j) && translation_across(group, c, loops, i, j, &g[i]) != g[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// `ω_n(c; γ_1, …, γ_n) = α ∘ ∂_out`.
pub fn omega<G: GroupModel>(group: &G, c: &Cactus, loops: &[Loop]) -> Result<Loop, LoopError> {
    let map = patch(group, c, loops, TraversalOrder::Ascending)?;
    let mut ts: Vec<Q> = vec![Q::zero()];
    let mut vs: Vec<Vec<Q>> = vec![group.to_chart(&group.identity())];
    for piece in c.pieces() {
        let Some(&m) = piece.movers().first() else {
            // plateau: α ∘ ∂_out is constant here
            let last = vs.last().expect("nonempty").clone();
            push_point(&mut ts, &mut vs, piece.b.clone(), last);
            continue;
        };
        let (ua, ub) = (&piece.start[m], &piece.end[m]);
        let lp = &loops[m];
        let mut us: Vec<Q> = vec![ua.clone(), ub.clone()];
        let mut k = floor(ua);
        while k <= ceil(ub) {
            let kq = Q::from_integer(k.clone());
            us.extend(lp.t.iter().map(|s| s + &kq).filter(|u| u > ua && u < ub));
            k += 1;
        }
        us.sort();
        us.dedup();
        let values: Vec<Vec<Q>> = us
            .iter()
            .map(|u| group.translate_chart(&map.g[m], &lp.eval_ext(group, u)))
            .collect();
        let prev = vs.last().expect("nonempty");
        let shift = group
            .chart_shift(&values[0], prev)
            .ok_or(LoopError::Inconsistent(m + 1, m + 1))?;
        for (u, val) in us.iter().zip(values) {
            let t = &piece.a + (u - ua) * (&piece.b - &piece.a) / (ub - ua);
            push_point(&mut ts, &mut vs, t, add_vec(&val, &shift));
        }
    }
    Loop::new(group, ts, vs).map(|l| simplify(group, l))
}

/// Drops breakpoints where the path has no kink.
fn simplify<G: GroupModel>(_group: &G, l: Loop) -> Loop {
    let mut t = vec![l.t[0].clone()];
    let mut v = vec![l.v[0].clone()];
    for k in 1..l.t.len() - 1 {
        let (t0, v0) = (&t[t.len() - 1], &v[v.len() - 1]);
        let straight = lerp_vec(t0, &l.t[k + 1], v0, &l.v[k + 1], &l.t[k]) == l.v[k];
        if !straight {
            t.push(l.t[k].clone());
            v.push(l.v[k].clone());
        }
    }
    t.push(l.t[l.t.len() - 1].clone());
    v.push(l.v[l.v.len() - 1].clone());
    Loop { t, v }
}

/// Compares `ω(γ(c; d); γ)` with `ω(c; ω(d_1; γ^1), …, ω(d_n; γ^n))`.
pub fn check_algebra_associativity<G: GroupModel>(
    group: &G,
    c: &Cactus,
    ds: &[Cactus],
    loops: &[Loop],
) -> Result<bool, LoopError> {
    use crate::operad::Operad;
    let composite = crate::cacti::Cacti
        .gamma(c, ds)
        .map_err(|e| LoopError::Cactus(e.to_string()))?;
    let lhs = omega(group, &composite, loops)?;
    let mut inner = Vec::with_capacity(ds.len());
    let mut k = 0;
    for d in ds {
        let m = d.arity();
        if k + m > loops.len() {
            return Err(LoopError::Count {
                expected: k + m,
                got: loops.len(),
            });
        }
        inner.push(omega(group, d, &loops[k..k + m])?);
        k += m;
    }
    let rhs = omega(group, c, &inner)?;
    Ok(lhs.equals(group, &rhs))
}

/// Random circle loop with small breakpoint count and winding in `-1..=1`.
pub fn random_circle_loop<R: Rng + ?Sized>(rng: &mut R) -> Loop {
    let k = rng.gen_range(1..=3);
    let t = random_breakpoints(rng, k);
    let mut v: Vec<Vec<Q>> = vec![vec![Q::zero()]];
    for _ in 1..k {
        v.push(vec![crate::rational::q(rng.gen_range(-6..=6), 4)]);
    }
    v.push(vec![Q::from_integer(rng.gen_range(-1..=1).into())]);
    Loop::new(&CircleGroup, t, v).expect("based")
}

/// Random unitriangular loop with small breakpoint count.
pub fn random_ut3_loop<R: Rng + ?Sized>(rng: &mut R) -> Loop {
    let k = rng.gen_range(1..=3);
    let t = random_breakpoints(rng, k);
    let zero = vec![Q::zero(); 3];
    let mut v: Vec<Vec<Q>> = vec![zero.clone()];
    for _ in 1..k {
        v.push((0..3).map(|_| crate::rational::q(rng.gen_range(-4..=4), 2)).collect());
    }
    v.push(zero);
    Loop::new(&UniTriangular3, t, v).expect("based")
}

/// `0 = t_0 < ⋯ < t_k = 1` with random rational gaps.
fn random_breakpoints<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Q> {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
    let total: i64 = w.iter().sum();
    let mut acc = 0;
    let mut t = vec![Q::zero()];
    for x in w {
        acc += x;
        t.push(crate::rational::q(acc, total));
    }
    t
}

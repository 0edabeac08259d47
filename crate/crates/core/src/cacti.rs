//! The cacti operad as exact PL points of `CoEnd(S¹)`, and its realization
//! system: `|c| = c(S¹) ⊂ (S¹)^n`.
//!
//! Circle points are rationals in `[0, 1)` (turns). A cactus is an
//! `n`-tuple of monotone PL degree-one lifts whose non-constancy sets have
//! disjoint interiors and whose label sequence is non-crossing.

use crate::cells::{enumerate_cells, has_alternation, CellSequence};
use crate::operad::{Operad, OperadError, Realization};
use crate::perm::Perm;
use crate::pl::{union_breakpoints, PlMap, PlMapDto};
use crate::rational::{ceil, format_list, format_q, frac, q, qi, ParseError, ParseMode, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CactusError {
    #[error("a cactus needs at least one coordinate")]
    Empty,
    #[error("coordinate {coord} has degree {degree}, expected 1")]
    Degree { coord: usize, degree: String },
    #[error("coordinates {0} and {1} both move on [{2}, {3}]")]
    Overlap(usize, usize, String, String),
    #[error("lobes {0} and {1} cross in label sequence {2}")]
    Crossing(usize, usize, String),
}

/// A piece of the common refinement of all coordinates, with the lift
/// values of every coordinate at both ends.
#[derive(Debug, Clone)]
pub struct Piece {
    pub a: Q,
    pub b: Q,
    pub start: Vec<Q>,
    pub end: Vec<Q>,
}

impl Piece {
    pub fn movers(&self) -> Vec<usize> {
        (0..self.start.len()).filter(|&k| self.start[k] != self.end[k]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Cactus {
    coords: Vec<PlMap>,
    lobes: OnceLock<Vec<Vec<Q>>>,
    pieces: OnceLock<Vec<Piece>>,
}

impl PartialEq for Cactus {
    fn eq(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(f, g)| f.circle_equal(g))
    }
}

impl Cactus {
    pub fn new(coords: Vec<PlMap>) -> Result<Self, CactusError> {
        let c = Cactus::unchecked(coords);
        c.validate()?;
        Ok(c)
    }

    fn unchecked(coords: Vec<PlMap>) -> Self {
        Cactus {
            coords,
            lobes: OnceLock::new(),
            pieces: OnceLock::new(),
        }
    }

    pub fn unit() -> Self {
        Cactus::unchecked(vec![PlMap::identity()])
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[PlMap] {
        &self.coords
    }

    pub fn pieces(&self) -> &[Piece] {
        self.pieces.get_or_init(|| self.compute_pieces())
    }

    fn compute_pieces(&self) -> Vec<Piece> {
        let refs: Vec<&PlMap> = self.coords.iter().collect();
        let ts = union_breakpoints(&refs);
        let vals: Vec<Vec<Q>> = ts
            .iter()
            .map(|t| self.coords.iter().map(|f| f.eval(t)).collect())
            .collect();
        (0..ts.len() - 1)
            .map(|k| Piece {
                a: ts[k].clone(),
                b: ts[k + 1].clone(),
                start: vals[k].clone(),
                end: vals[k + 1].clone(),
            })
            .collect()
    }

    /// Labels of the maximal moving intervals in traversal order from 0,
    /// zero-based.
    fn label_runs(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for p in self.pieces() {
            if let Some(&m) = p.movers().first() {
                if out.last() != Some(&m) {
                    out.push(m);
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), CactusError> {
        if self.coords.is_empty() {
            return Err(CactusError::Empty);
        }
        for (k, f) in self.coords.iter().enumerate() {
            if f.degree() != BigInt::one() {
                return Err(CactusError::Degree {
                    coord: k + 1,
                    degree: f.degree().to_string(),
                });
            }
        }
        for p in self.pieces() {
            if let [i, j, ..] = p.movers()[..] {
                return Err(CactusError::Overlap(i + 1, j + 1, format_q(&p.a), format_q(&p.b)));
            }
        }
        let runs = self.label_runs();
        if has_alternation(&runs) {
            let n = self.arity();
            for a in 0..n {
                for b in a + 1..n {
                    if has_alternation(&runs.iter().copied().filter(|&l| l == a || l == b).collect::<Vec<_>>()) {
                        return Err(CactusError::Crossing(a + 1, b + 1, self.cell_of().to_string()));
                    }
                }
            }
        }
        Ok(())
    }

    /// The label sequence of the partition intervals, cut at 0.
    pub fn cell_of(&self) -> CellSequence {
        CellSequence(self.label_runs().into_iter().map(|l| l + 1).collect())
    }

    /// The closed intervals on which coordinate `i` moves.
    pub fn support(&self, i: usize) -> Vec<(Q, Q)> {
        self.coords[i].moving_intervals()
    }

    fn lobe_points(&self) -> &Vec<Vec<Q>> {
        self.lobes.get_or_init(|| {
            let n = self.arity();
            let mut out: Vec<Option<Vec<Q>>> = vec![None; n];
            for p in self.pieces() {
                if let Some(&m) = p.movers().first() {
                    if out[m].is_none() {
                        let mut v: Vec<Q> = p.start.iter().map(frac).collect();
                        v[m] = Q::zero();
                        out[m] = Some(v);
                    }
                }
            }
            out.into_iter()
                .map(|v| v.unwrap_or_else(|| vec![Q::zero(); n]))
                .collect()
        })
    }

    /// Values of the other coordinates while lobe `i` is traversed.
    pub fn lobe_coordinate(&self, i: usize) -> Vec<Q> {
        let mut v = self.lobe_points()[i].clone();
        v.remove(i);
        v
    }

    /// `y ↦ (x^i_1, …, y, …, x^i_n)`.
    pub fn boundary_in(&self, i: usize, y: &Q) -> Vec<Q> {
        let mut v = self.lobe_points()[i].clone();
        v[i] = frac(y);
        v
    }

    /// `c(t)` read on the circle.
    pub fn boundary_out(&self, t: &Q) -> Vec<Q> {
        self.coords.iter().map(|f| f.eval_circle(t)).collect()
    }

    /// Some `t ∈ [0, 1)` with `c(t) = p`.
    pub fn preimage_out(&self, p: &[Q]) -> Option<Q> {
        if p.len() != self.arity() {
            return None;
        }
        for piece in self.pieces() {
            let movers = piece.movers();
            let fixed_ok = (0..self.arity())
                .filter(|k| !movers.contains(k))
                .all(|k| frac(&piece.start[k]) == p[k]);
            if !fixed_ok {
                continue;
            }
            match movers.first() {
                None => return Some(frac(&piece.a)),
                Some(&m) => {
                    let (ua, ub) = (&piece.start[m], &piece.end[m]);
                    let y = &p[m] + Q::from_integer(ceil(&(ua - &p[m])));
                    if &y <= ub {
                        let t = &piece.a + (&y - ua) * (&piece.b - &piece.a) / (ub - ua);
                        return Some(frac(&t));
                    }
                }
            }
        }
        None
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        p.iter().all(|x| *x >= Q::zero() && *x < Q::one()) && self.preimage_out(p).is_some()
    }

    /// `c ∘_i d` with zero-based `i`: coordinate `i` is replaced by the
    /// block `d_1 ∘ c_i, …, d_m ∘ c_i`.
    pub fn compose(&self, i: usize, d: &Cactus) -> Result<Cactus, OperadError> {
        let ci = self.coords.get(i).ok_or(OperadError::IndexOutOfRange {
            index: i + 1,
            arity: self.arity(),
        })?;
        let mut coords = Vec::with_capacity(self.arity() + d.arity() - 1);
        coords.extend_from_slice(&self.coords[..i]);
        coords.extend(d.coords.iter().map(|dj| dj.compose(ci)));
        coords.extend_from_slice(&self.coords[i + 1..]);
        Ok(Cactus::unchecked(coords))
    }

    /// Coordinate `k` of `cσ` is coordinate `σ(k)` of `c`.
    pub fn act(&self, sigma: &Perm) -> Result<Cactus, OperadError> {
        if sigma.len() != self.arity() {
            return Err(OperadError::ArityMismatch {
                expected: self.arity(),
                got: sigma.len(),
            });
        }
        Ok(Cactus::unchecked(
            (0..self.arity()).map(|k| self.coords[sigma.apply(k)].clone()).collect(),
        ))
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self.dto()).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.dto()).expect("serializable")
    }

    fn dto(&self) -> CactusDto {
        CactusDto {
            n: self.arity(),
            coords: self.coords.iter().map(PlMap::to_dto).collect(),
        }
    }

    pub fn from_json(s: &str, mode: ParseMode) -> Result<Self, ParseError> {
        let v: Value = serde_json::from_str(s).map_err(|e| ParseError::Schema(e.to_string()))?;
        Self::from_json_value(v, mode)
    }

    pub fn from_json_value(v: Value, mode: ParseMode) -> Result<Self, ParseError> {
        let dto: CactusDto = serde_json::from_value(v).map_err(|e| ParseError::Schema(e.to_string()))?;
        if dto.n != dto.coords.len() {
            return Err(ParseError::Schema(format!(
                "n = {} but {} coordinates given",
                dto.n,
                dto.coords.len()
            )));
        }
        let coords = dto
            .coords
            .iter()
            .map(|c| PlMap::from_dto(c, mode))
            .collect::<Result<Vec<_>, _>>()?;
        Cactus::new(coords).map_err(|e| ParseError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CactusDto {
    n: usize,
    coords: Vec<PlMapDto>,
}

fn wrap_on(a: Q, b: Q) -> PlMap {
    let mut t = vec![Q::zero()];
    let mut v = vec![Q::zero()];
    if !a.is_zero() {
        t.push(a);
        v.push(Q::zero());
    }
    if !b.is_one() {
        t.push(b);
        v.push(Q::one());
    }
    t.push(Q::one());
    v.push(Q::one());
    PlMap::new(t, v).expect("monotone")
}

/// Lobe `j` (one-based) wraps once on `[(n − j)/n, (n − j + 1)/n]`, so the
/// outgoing boundary traverses lobes `n, n − 1, …, 1` at constant speed.
pub fn base_cactus(n: usize) -> Cactus {
    let nn = n as i64;
    Cactus::unchecked(
        (1..=nn)
            .map(|j| wrap_on(q(nn - j, nn), q(nn - j + 1, nn)))
            .collect(),
    )
}

/// Two lobes of equal length joined at the basepoint, traversed `1` then `2`.
pub fn pontrjagin_cactus() -> Cactus {
    Cactus::unchecked(vec![wrap_on(qi(0), q(1, 2)), wrap_on(q(1, 2), qi(1))])
}

/// The one-lobe cactus `t ↦ s + t`.
pub fn rotation_cactus(s: &Q) -> Cactus {
    Cactus::unchecked(vec![PlMap::new(vec![qi(0), qi(1)], vec![s.clone(), s + qi(1)]).expect("monotone")])
}

fn random_weights<R: Rng + ?Sized>(rng: &mut R, k: usize, max: i64) -> Vec<Q> {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=max)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| q(x, total)).collect()
}

/// A random valid cactus: an admissible label sequence, random advances
/// of each lobe on its intervals, random interval lengths, occasional
/// plateaus and kinks, and random start values.
pub fn random_cactus<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Cactus {
    let cells = enumerate_cells(n, 2 * n - 1);
    let seq = cells.choose(rng).expect("nonempty").labels().to_vec();
    let mut advances: Vec<Vec<Q>> = (1..=n)
        .map(|j| {
            let count = seq.iter().filter(|&&l| l == j).count();
            random_weights(rng, count, 3)
        })
        .collect();
    for a in advances.iter_mut() {
        a.reverse();
    }
    // (label or None for a plateau, advance)
    let mut steps: Vec<(Option<usize>, Q)> = Vec::new();
    for &l in &seq {
        if rng.gen_ratio(1, 5) {
            steps.push((None, Q::zero()));
        }
        let adv = advances[l - 1].pop().expect("count matches");
        if rng.gen_ratio(1, 3) {
            let cut = q(rng.gen_range(1..=3), 4);
            steps.push((Some(l - 1), &adv * &cut));
            steps.push((Some(l - 1), &adv * (Q::one() - cut)));
        } else {
            steps.push((Some(l - 1), adv));
        }
    }
    let lengths = random_weights(rng, steps.len(), 4);
    let mut ts = vec![Q::zero()];
    for len in &lengths {
        let next = &ts[ts.len() - 1] + len;
        ts.push(next);
    }
    let offsets: Vec<Q> = (0..n).map(|_| q(rng.gen_range(0..12), 12)).collect();
    let coords = (0..n)
        .map(|j| {
            let mut v = vec![offsets[j].clone()];
            for (label, adv) in &steps {
                let last = v[v.len() - 1].clone();
                v.push(if *label == Some(j) { last + adv } else { last });
            }
            PlMap::new(ts.clone(), v).expect("monotone").simplified()
        })
        .collect();
    Cactus::unchecked(coords)
}

/// The cacti operad together with its realization system.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cacti;

fn split_blocks<'a>(ds: &[Cactus], p: &'a [Q]) -> Vec<&'a [Q]> {
    let mut out = Vec::with_capacity(ds.len());
    let mut k = 0;
    for d in ds {
        out.push(&p[k..k + d.arity()]);
        k += d.arity();
    }
    out
}

impl Operad for Cacti {
    type Elem = Cactus;

    fn arity(&self, x: &Cactus) -> usize {
        x.arity()
    }

    fn unit(&self) -> Cactus {
        Cactus::unit()
    }

    fn compose_at(&self, x: &Cactus, i: usize, y: &Cactus) -> Result<Cactus, OperadError> {
        x.compose(i, y)
    }

    fn act(&self, x: &Cactus, sigma: &Perm) -> Result<Cactus, OperadError> {
        x.act(sigma)
    }

    fn equal(&self, a: &Cactus, b: &Cactus) -> bool {
        a == b
    }

    fn validate(&self, x: &Cactus) -> Result<(), String> {
        x.validate().map_err(|e| e.to_string())
    }

    fn describe(&self, x: &Cactus) -> Value {
        x.to_json_value()
    }
}

impl Realization for Cacti {
    type Param = Q;
    type Point = Vec<Q>;

    fn circle_samples(&self, density: usize) -> Vec<Q> {
        let n = density as i64;
        (0..n).map(|k| q(k, n)).collect()
    }

    fn realization_samples(&self, x: &Cactus, density: usize) -> Vec<Vec<Q>> {
        let qs = self.circle_samples(density);
        let mut out: Vec<Vec<Q>> = qs.iter().map(|t| x.boundary_out(t)).collect();
        for i in 0..x.arity() {
            out.extend(qs.iter().map(|t| x.boundary_in(i, t)));
        }
        let refs: Vec<&PlMap> = x.coords.iter().collect();
        out.extend(union_breakpoints(&refs).iter().map(|t| x.boundary_out(t)));
        out
    }

    fn contains(&self, x: &Cactus, p: &Vec<Q>) -> bool {
        x.contains(p)
    }

    fn boundary_in(&self, x: &Cactus, i: usize, q: &Q) -> Vec<Q> {
        x.boundary_in(i, q)
    }

    fn boundary_out(&self, x: &Cactus, q: &Q) -> Vec<Q> {
        x.boundary_out(q)
    }

    /// `σ*(t_1, …, t_n) = (t_{σ1}, …, t_{σn})`.
    fn symmetry(&self, _x: &Cactus, sigma: &Perm, p: &Vec<Q>) -> Vec<Q> {
        (0..p.len()).map(|k| p[sigma.apply(k)].clone()).collect()
    }

    /// `d_1 × ⋯ × d_n`.
    fn paste_lower(&self, _x: &Cactus, ys: &[Cactus], p: &Vec<Q>) -> Vec<Q> {
        ys.iter().zip(p).flat_map(|(d, t)| d.boundary_out(t)).collect()
    }

    fn paste_right(&self, x: &Cactus, ys: &[Cactus], i: usize, p: &Vec<Q>) -> Vec<Q> {
        let lobe = x.boundary_in(i, &Q::zero());
        let mut out = Vec::new();
        for (k, d) in ys.iter().enumerate() {
            if k == i {
                out.extend(p.iter().cloned());
            } else {
                out.extend(d.boundary_out(&lobe[k]));
            }
        }
        out
    }

    fn right_map<'a>(&'a self, x: &'a Cactus, ys: &'a [Cactus], i: usize) -> Box<dyn Fn(&Vec<Q>) -> Vec<Q> + 'a> {
        let lobe = x.boundary_in(i, &Q::zero());
        let fixed: Vec<Vec<Q>> = ys
            .iter()
            .enumerate()
            .map(|(k, d)| if k == i { Vec::new() } else { d.boundary_out(&lobe[k]) })
            .collect();
        Box::new(move |p| {
            let mut out = Vec::new();
            for (k, block) in fixed.iter().enumerate() {
                if k == i {
                    out.extend(p.iter().cloned());
                } else {
                    out.extend(block.iter().cloned());
                }
            }
            out
        })
    }

    fn lower_preimage(&self, x: &Cactus, ys: &[Cactus], p: &Vec<Q>) -> Option<Vec<Q>> {
        let blocks = split_blocks(ys, p);
        (0..x.arity()).find_map(|i| {
            let lobe = x.boundary_in(i, &Q::zero());
            let others_ok = (0..x.arity())
                .filter(|&k| k != i)
                .all(|k| ys[k].boundary_out(&lobe[k]) == blocks[k]);
            if !others_ok {
                return None;
            }
            ys[i].preimage_out(blocks[i]).map(|y| x.boundary_in(i, &y))
        })
    }

    fn right_preimage(&self, x: &Cactus, ys: &[Cactus], i: usize, p: &Vec<Q>) -> Option<Vec<Q>> {
        let blocks = split_blocks(ys, p);
        let lobe = x.boundary_in(i, &Q::zero());
        let others_ok = (0..x.arity())
            .filter(|&k| k != i)
            .all(|k| ys[k].boundary_out(&lobe[k]) == blocks[k]);
        (others_ok && ys[i].contains(blocks[i])).then(|| blocks[i].to_vec())
    }

    fn boundary_out_param(&self, y: &Cactus, p: &Vec<Q>) -> Option<Q> {
        y.preimage_out(p)
    }

    fn point_json(&self, p: &Vec<Q>) -> Value {
        json!(format_list(p))
    }
}

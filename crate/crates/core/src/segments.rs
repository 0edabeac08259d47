//! Configurations of orthogonal line segments and their adapted paths.
//!
//! Segment `i` is `ψ^i(t) = (x^i_1, …, t, …, x^i_n)` for `t ∈ [0, 1]`, with
//! `t` in slot `i`. An adapted path moves along segments at one common
//! speed, with a direction that depends only on the segment.

use crate::rational::{format_list, format_q, in_unit_interval, parse_list, ParseError, ParseMode, Q};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("anchor {0} has the wrong length")]
    Shape(usize),
    #[error("configuration is empty")]
    Empty,
    #[error("segments do not form a connected set")]
    Disconnected,
    #[error("{0} point is not on the configuration")]
    NotOnConfig(&'static str),
    #[error("no leaf among the remaining segments")]
    NoLeaf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentConfig {
    /// `anchors[i]` is the full point `ψ^i(0)`; slot `i` is unused and kept 0.
    anchors: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConfigDto {
    n: usize,
    anchors: Vec<Vec<String>>,
}

impl SegmentConfig {
    /// Builds a configuration from the reduced anchors `x^i ∈ ℚ^{n−1}`.
    pub fn new(reduced: Vec<Vec<Q>>) -> Result<Self, SegmentError> {
        let n = reduced.len();
        if n == 0 {
            return Err(SegmentError::Empty);
        }
        let anchors = reduced
            .into_iter()
            .enumerate()
            .map(|(i, mut x)| {
                if x.len() != n - 1 {
                    return Err(SegmentError::Shape(i + 1));
                }
                x.insert(i, Q::zero());
                Ok(x)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SegmentConfig { anchors })
    }

    pub fn n(&self) -> usize {
        self.anchors.len()
    }

    /// `x^i` with slot `i` omitted.
    pub fn anchor(&self, i: usize) -> Vec<Q> {
        let mut x = self.anchors[i].clone();
        x.remove(i);
        x
    }

    pub fn psi(&self, i: usize, t: &Q) -> Vec<Q> {
        let mut p = self.anchors[i].clone();
        p[i] = t.clone();
        p
    }

    pub fn on_segment(&self, i: usize, p: &[Q]) -> bool {
        p.len() == self.n()
            && in_unit_interval(&p[i])
            && (0..self.n()).all(|k| k == i || p[k] == self.anchors[i][k])
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        (0..self.n()).any(|i| self.on_segment(i, p))
    }

    /// The point where segments `i ≠ j` meet, if they do.
    pub fn meeting_point(&self, i: usize, j: usize) -> Option<Vec<Q>> {
        if i == j {
            return None;
        }
        let (a, b) = (&self.anchors[i], &self.anchors[j]);
        let agree = (0..self.n()).all(|k| k == i || k == j || a[k] == b[k]);
        (agree && in_unit_interval(&b[i]) && in_unit_interval(&a[j])).then(|| {
            let mut p = a.clone();
            p[i] = b[i].clone();
            p
        })
    }

    pub fn intersection_graph(&self) -> Vec<Vec<usize>> {
        (0..self.n())
            .map(|i| (0..self.n()).filter(|&j| self.meeting_point(i, j).is_some()).collect())
            .collect()
    }

    fn connected_within(&self, active: &[usize]) -> bool {
        let Some(&first) = active.first() else {
            return true;
        };
        let mut seen = vec![first];
        let mut queue = VecDeque::from([first]);
        while let Some(i) = queue.pop_front() {
            for &j in active {
                if !seen.contains(&j) && self.meeting_point(i, j).is_some() {
                    seen.push(j);
                    queue.push_back(j);
                }
            }
        }
        seen.len() == active.len()
    }

    pub fn validate_connected(&self) -> bool {
        self.connected_within(&(0..self.n()).collect::<Vec<_>>())
    }

    /// Distinct points where segment `i` meets the other active segments.
    fn attachment_points(&self, i: usize, active: &[usize]) -> Vec<Vec<Q>> {
        let mut pts: Vec<Vec<Q>> = Vec::new();
        for &j in active {
            if let Some(p) = self.meeting_point(i, j) {
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
        }
        pts
    }

    /// Lowest-index active segment meeting the others in exactly one point.
    fn leaf_within(&self, active: &[usize]) -> Option<usize> {
        active
            .iter()
            .copied()
            .find(|&i| self.attachment_points(i, active).len() == 1)
    }

    /// Lowest-index segment whose intersection with the union of the others
    /// is a single point.
    pub fn find_leaf(&self) -> Result<usize, SegmentError> {
        self.leaf_within(&(0..self.n()).collect::<Vec<_>>())
            .ok_or(SegmentError::NoLeaf)
    }

    /// Lowest-index segment meeting exactly one other segment.
    pub fn find_degree_one_leaf(&self) -> Option<usize> {
        self.intersection_graph().iter().position(|adj| adj.len() == 1)
    }

    pub fn to_json(&self) -> String {
        let dto = ConfigDto {
            n: self.n(),
            anchors: (0..self.n()).map(|i| format_list(&self.anchor(i))).collect(),
        };
        serde_json::to_string_pretty(&dto).expect("serializable")
    }

    pub fn from_json(s: &str, mode: ParseMode) -> Result<Self, ParseError> {
        let dto: ConfigDto = serde_json::from_str(s).map_err(|e| ParseError::Schema(e.to_string()))?;
        if dto.n != dto.anchors.len() {
            return Err(ParseError::Schema(format!(
                "n = {} but {} anchors given",
                dto.n,
                dto.anchors.len()
            )));
        }
        let reduced = dto
            .anchors
            .iter()
            .map(|a| parse_list(a, mode))
            .collect::<Result<Vec<_>, _>>()?;
        SegmentConfig::new(reduced).map_err(|e| ParseError::Schema(e.to_string()))
    }
}

/// Motion along segment `segment` from parameter `from` to `to` during
/// `[t0, t1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPiece {
    pub segment: usize,
    pub from: Q,
    pub to: Q,
    pub t0: Q,
    pub t1: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedPath {
    pub start: Vec<Q>,
    pub end: Vec<Q>,
    pub speed: Q,
    pub pieces: Vec<PathPiece>,
}

/// `(segment, from, to)` legs before time is assigned.
type Leg = (usize, Q, Q);

impl AdaptedPath {
    /// Assigns times to legs at the common speed, after dropping
    /// zero-length legs and merging consecutive legs on one segment.
    pub fn from_legs(start: Vec<Q>, end: Vec<Q>, legs: Vec<Leg>) -> AdaptedPath {
        let mut merged: Vec<Leg> = Vec::new();
        for (s, a, b) in legs.into_iter().filter(|(_, a, b)| a != b) {
            match merged.last_mut() {
                Some(last) if last.0 == s && last.2 == a => last.2 = b,
                _ => merged.push((s, a, b)),
            }
        }
        merged.retain(|(_, a, b)| a != b);
        let speed: Q = merged.iter().map(|(_, a, b)| (b - a).abs()).sum();
        let mut t = Q::zero();
        let count = merged.len();
        let pieces = merged
            .into_iter()
            .enumerate()
            .map(|(k, (segment, from, to))| {
                let t0 = t.clone();
                let t1 = if k + 1 == count { Q::one() } else { &t0 + (&to - &from).abs() / &speed };
                t = t1.clone();
                PathPiece { segment, from, to, t0, t1 }
            })
            .collect();
        AdaptedPath { start, end, speed, pieces }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "start": format_list(&self.start),
            "end": format_list(&self.end),
            "speed": format_q(&self.speed),
            "pieces": self.pieces.iter().map(|p| serde_json::json!({
                "segment": p.segment + 1,
                "from": format_q(&p.from),
                "to": format_q(&p.to),
                "t0": format_q(&p.t0),
                "t1": format_q(&p.t1),
                "direction": if p.to > p.from { 1 } else { -1 },
            })).collect::<Vec<_>>(),
        })
    }

    /// Position at time `s ∈ [0, 1]`.
    pub fn eval(&self, cfg: &SegmentConfig, s: &Q) -> Vec<Q> {
        for p in &self.pieces {
            if *s >= p.t0 && *s <= p.t1 {
                let dir = if p.to > p.from { Q::one() } else { -Q::one() };
                let param = &p.from + dir * &self.speed * (s - &p.t0);
                return cfg.psi(p.segment, &param);
            }
        }
        self.start.clone()
    }
}

/// The unique adapted path from `p` to `q`, built by peeling leaves.
pub fn adapted_path(cfg: &SegmentConfig, p: &[Q], q: &[Q]) -> Result<AdaptedPath, SegmentError> {
    if !cfg.validate_connected() {
        return Err(SegmentError::Disconnected);
    }
    if !cfg.contains(p) {
        return Err(SegmentError::NotOnConfig("start"));
    }
    if !cfg.contains(q) {
        return Err(SegmentError::NotOnConfig("end"));
    }
    let active: Vec<usize> = (0..cfg.n()).collect();
    let legs = legs_within(cfg, &active, p, q)?;
    let path = AdaptedPath::from_legs(p.to_vec(), q.to_vec(), legs);
    debug_assert!(is_adapted(cfg, &path));
    Ok(path)
}

fn legs_within(cfg: &SegmentConfig, active: &[usize], p: &[Q], q: &[Q]) -> Result<Vec<Leg>, SegmentError> {
    if p == q {
        return Ok(Vec::new());
    }
    if let Some(&i) = active.iter().find(|&&i| cfg.on_segment(i, p) && cfg.on_segment(i, q)) {
        return Ok(vec![(i, p[i].clone(), q[i].clone())]);
    }
    let leaf = cfg.leaf_within(active).ok_or(SegmentError::NoLeaf)?;
    let rest: Vec<usize> = active.iter().copied().filter(|&i| i != leaf).collect();
    let on_rest = |x: &[Q]| rest.iter().any(|&i| cfg.on_segment(i, x));
    let (p_rest, q_rest) = (on_rest(p), on_rest(q));
    if p_rest && q_rest {
        return legs_within(cfg, &rest, p, q);
    }
    let attach = cfg
        .attachment_points(leaf, &rest)
        .pop()
        .ok_or(SegmentError::Disconnected)?;
    if !p_rest {
        let mut legs = vec![(leaf, p[leaf].clone(), attach[leaf].clone())];
        legs.extend(legs_within(cfg, &rest, &attach, q)?);
        Ok(legs)
    } else {
        let mut legs = legs_within(cfg, &rest, p, &attach)?;
        legs.push((leaf, attach[leaf].clone(), q[leaf].clone()));
        Ok(legs)
    }
}

/// Contiguous pieces at one common speed, one direction per segment, and
/// consecutive pieces joined at a common point.
pub fn is_adapted(cfg: &SegmentConfig, path: &AdaptedPath) -> bool {
    if !cfg.contains(&path.start) || !cfg.contains(&path.end) {
        return false;
    }
    if path.pieces.is_empty() {
        return path.start == path.end && path.speed.is_zero();
    }
    if !path.speed.is_positive() {
        return false;
    }
    let first = &path.pieces[0];
    let last = &path.pieces[path.pieces.len() - 1];
    if !first.t0.is_zero() || !last.t1.is_one() {
        return false;
    }
    let mut dirs: Vec<Option<bool>> = vec![None; cfg.n()];
    for (k, pc) in path.pieces.iter().enumerate() {
        if pc.segment >= cfg.n()
            || pc.t1 <= pc.t0
            || !in_unit_interval(&pc.from)
            || !in_unit_interval(&pc.to)
            || (&pc.to - &pc.from).abs() != &path.speed * (&pc.t1 - &pc.t0)
        {
            return false;
        }
        let up = pc.to > pc.from;
        match dirs[pc.segment] {
            Some(d) if d != up => return false,
            _ => dirs[pc.segment] = Some(up),
        }
        if let Some(next) = path.pieces.get(k + 1) {
            if next.t0 != pc.t1 || cfg.psi(pc.segment, &pc.to) != cfg.psi(next.segment, &next.from) {
                return false;
            }
        }
    }
    cfg.psi(first.segment, &first.from) == path.start && cfg.psi(last.segment, &last.to) == path.end
}

/// A random connected configuration: segments attached one at a time to a
/// random earlier segment, with coordinates drawn from a coarse grid in
/// `[0, 1]` so that coincidences occur.
pub fn random_config<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SegmentConfig {
    let grid = |rng: &mut R| crate::rational::q(rng.gen_range(0..=4), 4);
    let mut anchors: Vec<Vec<Q>> = Vec::with_capacity(n);
    anchors.push((0..n).map(|_| grid(rng)).collect());
    anchors[0][0] = Q::zero();
    for j in 1..n {
        let i = rng.gen_range(0..j);
        let mut x = anchors[i].clone();
        x[i] = grid(rng);
        x[j] = Q::zero();
        anchors.push(x);
    }
    let reduced = anchors
        .into_iter()
        .enumerate()
        .map(|(i, mut x)| {
            x.remove(i);
            x
        })
        .collect();
    SegmentConfig::new(reduced).expect("shape")
}

/// A random point on a random segment, on the same coarse grid.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, cfg: &SegmentConfig) -> Vec<Q> {
    let i = rng.gen_range(0..cfg.n());
    cfg.psi(i, &crate::rational::q(rng.gen_range(0..=8), 8))
}

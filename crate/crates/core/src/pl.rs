//! Monotone piecewise-linear maps `[0, 1] → ℝ` with rational breakpoints,
//! read as lifts of circle maps `S¹ → S¹`.

use crate::rational::{ceil, floor, format_list, frac, is_integer, parse_list, ParseError, ParseMode, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("need at least two breakpoints and matching value count")]
    Shape,
    #[error("breakpoints must run strictly increasing from 0 to 1")]
    Breakpoints,
    #[error("lift is not monotone nondecreasing at breakpoint {0}")]
    NotMonotone(usize),
    #[error("degree {0} is not an integer")]
    Degree(String),
}

/// A monotone PL lift: value `v[m]` at `t[m]`, linear in between. Stored
/// with `v[0]` in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlMap {
    t: Vec<Q>,
    v: Vec<Q>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlMapDto {
    pub t: Vec<String>,
    pub v: Vec<String>,
}

/// Linear interpolation on `[ta, tb]`.
pub fn lerp(ta: &Q, tb: &Q, va: &Q, vb: &Q, t: &Q) -> Q {
    if ta == tb {
        return va.clone();
    }
    va + (vb - va) * (t - ta) / (tb - ta)
}

impl PlMap {
    pub fn new(t: Vec<Q>, v: Vec<Q>) -> Result<Self, PlError> {
        if t.len() < 2 || t.len() != v.len() {
            return Err(PlError::Shape);
        }
        if !t[0].is_zero() || !t[t.len() - 1].is_one() || t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PlError::Breakpoints);
        }
        if let Some(k) = v.windows(2).position(|w| w[0] > w[1]) {
            return Err(PlError::NotMonotone(k + 1));
        }
        let deg = &v[v.len() - 1] - &v[0];
        if !is_integer(&deg) {
            return Err(PlError::Degree(crate::rational::format_q(&deg)));
        }
        let shift = Q::from_integer(floor(&v[0]));
        let v = v.into_iter().map(|x| x - &shift).collect();
        Ok(PlMap { t, v })
    }

    pub fn identity() -> Self {
        PlMap {
            t: vec![Q::zero(), Q::one()],
            v: vec![Q::zero(), Q::one()],
        }
    }

    pub fn constant(c: &Q) -> Self {
        let c = frac(c);
        PlMap {
            t: vec![Q::zero(), Q::one()],
            v: vec![c.clone(), c],
        }
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.t
    }

    pub fn values(&self) -> &[Q] {
        &self.v
    }

    pub fn degree(&self) -> BigInt {
        (&self.v[self.v.len() - 1] - &self.v[0]).to_integer()
    }

    fn degree_q(&self) -> Q {
        &self.v[self.v.len() - 1] - &self.v[0]
    }

    /// Lift value at `t ∈ [0, 1]`.
    pub fn eval(&self, t: &Q) -> Q {
        let k = match self.t.binary_search(t) {
            Ok(k) => return self.v[k].clone(),
            Err(k) => k.clamp(1, self.t.len() - 1),
        };
        lerp(&self.t[k - 1], &self.t[k], &self.v[k - 1], &self.v[k], t)
    }

    /// The periodic extension `f̃(y) = f(frac y) + ⌊y⌋ · deg`.
    pub fn eval_lift(&self, y: &Q) -> Q {
        let n = floor(y);
        self.eval(&frac(y)) + Q::from_integer(n) * self.degree_q()
    }

    /// Circle value in `[0, 1)`.
    pub fn eval_circle(&self, t: &Q) -> Q {
        frac(&self.eval(&frac(t)))
    }

    /// `f̃ ∘ g`, breakpoints refined at every preimage of `f`'s breakpoints
    /// under the lift of `g`.
    pub fn compose(&self, g: &PlMap) -> PlMap {
        let mut ts: Vec<Q> = g.t.clone();
        for (w, tw) in g.v.windows(2).zip(g.t.windows(2)) {
            let (ua, ub) = (&w[0], &w[1]);
            if ua == ub {
                continue;
            }
            let lo = floor(ua);
            let hi = ceil(ub);
            let mut k = lo;
            while k <= hi {
                let kq = Q::from_integer(k.clone());
                for s in &self.t {
                    let y = s + &kq;
                    if &y > ua && &y < ub {
                        ts.push(&tw[0] + (&y - ua) * (&tw[1] - &tw[0]) / (ub - ua));
                    }
                }
                k += 1;
            }
        }
        ts.sort();
        ts.dedup();
        let v = ts.iter().map(|t| self.eval_lift(&g.eval(t))).collect();
        PlMap::new(ts, v).expect("composite of monotone maps").simplified()
    }

    /// Removes interior breakpoints where the slope does not change.
    pub fn simplified(mut self) -> PlMap {
        let mut t = vec![self.t[0].clone()];
        let mut v = vec![self.v[0].clone()];
        for k in 1..self.t.len() - 1 {
            let (t0, v0) = (&t[t.len() - 1], &v[v.len() - 1]);
            let left = (&self.v[k] - v0) / (&self.t[k] - t0);
            let right = (&self.v[k + 1] - &self.v[k]) / (&self.t[k + 1] - &self.t[k]);
            if left != right {
                t.push(self.t[k].clone());
                v.push(self.v[k].clone());
            }
        }
        t.push(self.t.pop().expect("nonempty"));
        v.push(self.v.pop().expect("nonempty"));
        PlMap { t, v }
    }

    /// Same circle map: the lifts differ by a constant integer.
    pub fn circle_equal(&self, other: &PlMap) -> bool {
        let ts = union_breakpoints(&[self, other]);
        let d0 = self.eval(&ts[0]) - other.eval(&ts[0]);
        is_integer(&d0) && ts.iter().all(|t| self.eval(t) - other.eval(t) == d0)
    }

    /// The maximal closed intervals on which the map is not constant.
    pub fn moving_intervals(&self) -> Vec<(Q, Q)> {
        let mut out: Vec<(Q, Q)> = Vec::new();
        for k in 0..self.t.len() - 1 {
            if self.v[k] == self.v[k + 1] {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.1 == self.t[k] => last.1 = self.t[k + 1].clone(),
                _ => out.push((self.t[k].clone(), self.t[k + 1].clone())),
            }
        }
        out
    }

    pub fn to_dto(&self) -> PlMapDto {
        PlMapDto {
            t: format_list(&self.t),
            v: format_list(&self.v),
        }
    }

    pub fn from_dto(d: &PlMapDto, mode: ParseMode) -> Result<Self, ParseError> {
        let t = parse_list(&d.t, mode)?;
        let v = parse_list(&d.v, mode)?;
        PlMap::new(t, v).map_err(|e| ParseError::Invalid(e.to_string()))
    }
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .t
            .iter()
            .zip(&self.v)
            .map(|(t, v)| format!("{}:{}", crate::rational::format_q(t), crate::rational::format_q(v)))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Sorted union of all breakpoints.
pub fn union_breakpoints(maps: &[&PlMap]) -> Vec<Q> {
    let mut ts: Vec<Q> = maps.iter().flat_map(|m| m.t.iter().cloned()).collect();
    ts.sort();
    ts.dedup();
    ts
}

/// Free-function forms.
pub fn pl_eval(f: &PlMap, t: &Q) -> Q {
    f.eval(t)
}

pub fn pl_compose(f: &PlMap, g: &PlMap) -> PlMap {
    f.compose(g)
}

pub fn pl_equal(f: &PlMap, g: &PlMap) -> bool {
    f.circle_equal(g)
}

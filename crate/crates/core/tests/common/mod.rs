//! Independent oracles shared by the integration tests. Nothing here calls
//! the library routine it is used to check.
#![allow(dead_code)]

use cactilab::braid::{w_invert, w_multiply, WElement};
use cactilab::discs::FramedDiscConfig;
use cactilab::loops::{GroupModel, Loop};
use cactilab::pl::PlMap;
use cactilab::rational::{frac, Q};
use cactilab::segments::SegmentConfig;
use num_traits::{One, Signed, Zero};
use rand::Rng;

// ---------- cells ----------

/// Whether `pattern` occurs as a subsequence of `s` (greedy matching).
fn has_subsequence(s: &[usize], pattern: &[usize]) -> bool {
    let mut k = 0;
    for &x in s {
        if k < pattern.len() && x == pattern[k] {
            k += 1;
        }
    }
    k == pattern.len()
}

fn admissible_naive(s: &[usize], n: usize) -> bool {
    (1..=n).all(|l| s.contains(&l))
        && s.windows(2).all(|w| w[0] != w[1])
        && !(1..=n).any(|a| (1..=n).any(|b| a != b && has_subsequence(s, &[a, b, a, b])))
}

/// Every word over `{1..n}` of length at most `max_len`, filtered by the
/// admissibility rules, ordered by length then lexicographically.
pub fn naive_cells(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 1..=max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 1..=n {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        next.sort();
        out.extend(next.iter().filter(|s| admissible_naive(s, n)).cloned());
        layer = next;
    }
    out
}

/// Dimension by counting repeats per label.
pub fn naive_dimension(s: &[usize]) -> usize {
    let max = s.iter().copied().max().unwrap_or(0);
    (1..=max)
        .map(|l| s.iter().filter(|&&x| x == l).count())
        .filter(|&c| c > 0)
        .map(|c| c - 1)
        .sum()
}

// ---------- PL maps ----------

fn lerp(t0: &Q, t1: &Q, v0: &Q, v1: &Q, t: &Q) -> Q {
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Evaluates a PL lift from its raw breakpoint lists.
pub fn pl_value(ts: &[Q], vs: &[Q], t: &Q) -> Q {
    for k in 0..ts.len() - 1 {
        if *t >= ts[k] && *t <= ts[k + 1] {
            return lerp(&ts[k], &ts[k + 1], &vs[k], &vs[k + 1], t);
        }
    }
    panic!("t outside [0, 1]")
}

/// `f̃(y)` for any real `y`, extended by the degree.
pub fn pl_lift_value(f: &PlMap, y: &Q) -> Q {
    let ts = f.breakpoints();
    let vs = f.values();
    let deg = &vs[vs.len() - 1] - &vs[0];
    let fl = y.floor();
    pl_value(ts, vs, &(y - &fl)) + fl * deg
}

/// Points at which two PL functions on `[0, 1]` with these breakpoints
/// must agree to be equal: every breakpoint and every midpoint.
pub fn check_points(mut ts: Vec<Q>) -> Vec<Q> {
    ts.sort();
    ts.dedup();
    let mids: Vec<Q> = ts.windows(2).map(|w| (&w[0] + &w[1]) / Q::from_integer(2.into())).collect();
    ts.extend(mids);
    ts.sort();
    ts
}

/// `h = f ∘ g` checked pointwise: `h(t) − f̃(g(t))` is one integer for all t.
pub fn composition_matches(h: &PlMap, f: &PlMap, g: &PlMap) -> bool {
    let mut ts: Vec<Q> = h.breakpoints().to_vec();
    ts.extend(g.breakpoints().iter().cloned());
    let pts = check_points(ts);
    let d0 = h.eval(&pts[0]) - pl_lift_value(f, &g.eval(&pts[0]));
    d0.is_integer() && pts.iter().all(|t| h.eval(t) - pl_lift_value(f, &g.eval(t)) == d0)
}

// ---------- discs ----------

type C = (Q, Q);

fn cmul(a: &C, b: &C) -> C {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

/// `x ∘_i y` on raw affine data: disc `i` of `x` is replaced by the discs
/// of `y` pushed through `z ↦ c_i + r_i u_i z`, in slots `i..i+m`.
pub fn compose_discs_oracle(x: &FramedDiscConfig, i: usize, y: &FramedDiscConfig) -> Vec<(C, Q, C)> {
    let raw = |d: &cactilab::discs::LittleDisc| -> (C, Q, C) {
        let u = d.frame.as_complex();
        (
            (d.center.re.clone(), d.center.im.clone()),
            d.radius.clone(),
            (u.re.clone(), u.im.clone()),
        )
    };
    let outer: Vec<(C, Q, C)> = x.discs.iter().map(raw).collect();
    let (ci, ri, ui) = outer[i].clone();
    let mut out = outer[..i].to_vec();
    for d in &y.discs {
        let (c, r, u) = raw(d);
        let ruc = cmul(&ui, &c);
        let center = (&ci.0 + &ri * &ruc.0, &ci.1 + &ri * &ruc.1);
        out.push((center, &ri * &r, cmul(&ui, &u)));
    }
    out.extend(outer[i + 1..].iter().cloned());
    out
}

pub fn disc_data(x: &FramedDiscConfig) -> Vec<(C, Q, C)> {
    x.discs
        .iter()
        .map(|d| {
            let u = d.frame.as_complex();
            (
                (d.center.re.clone(), d.center.im.clone()),
                d.radius.clone(),
                (u.re.clone(), u.im.clone()),
            )
        })
        .collect()
}

// ---------- loops ----------

/// Pointwise loop equality as group-valued maps, on the union of both
/// breakpoint sets and the extra points given.
pub fn loops_agree<G: GroupModel>(
    group: &G,
    l: &Loop,
    expected: impl Fn(&Q) -> G::Elem,
    extra: Vec<Q>,
) -> bool {
    let mut ts = l.breakpoints().to_vec();
    ts.extend(extra);
    check_points(ts)
        .iter()
        .all(|t| l.eval_group(group, t) == expected(t))
}

/// Concatenation `γ_1 * γ_2` at double speed.
pub fn concatenation<'a, G: GroupModel>(
    group: &'a G,
    a: &'a Loop,
    b: &'a Loop,
) -> (impl Fn(&Q) -> G::Elem + 'a, Vec<Q>) {
    let half = Q::new(1.into(), 2.into());
    let two = Q::from_integer(2.into());
    let mut pts: Vec<Q> = a.breakpoints().iter().map(|t| t / &two).collect();
    pts.extend(b.breakpoints().iter().map(|t| &half + t / &two));
    let f = move |t: &Q| {
        if *t <= half {
            a.eval_group(group, &(t * &two))
        } else {
            b.eval_group(group, &(t * &two - Q::one()))
        }
    };
    (f, pts)
}

/// `t ↦ γ(s)⁻¹ · γ(s + t)`.
pub fn rotated<'a, G: GroupModel>(group: &'a G, l: &'a Loop, s: &'a Q) -> (impl Fn(&Q) -> G::Elem + 'a, Vec<Q>) {
    let pts: Vec<Q> = l
        .breakpoints()
        .iter()
        .map(|b| frac(&(b - s)))
        .chain([Q::zero(), Q::one()])
        .collect();
    let base = group.inv(&l.eval_group(group, &frac(s)));
    let f = move |t: &Q| group.mul(&base, &l.eval_group(group, &frac(&(s + t))));
    (f, pts)
}

// ---------- segments ----------

type Point = Vec<Q>;

fn point_on(cfg: &SegmentConfig, i: usize, t: &Q) -> Point {
    let mut x = cfg.anchor(i);
    x.insert(i, t.clone());
    x
}

fn lies_on(cfg: &SegmentConfig, i: usize, p: &[Q]) -> bool {
    let x = cfg.anchor(i);
    let mut k = 0;
    for (slot, v) in p.iter().enumerate() {
        if slot == i {
            if v.is_negative() || *v > Q::one() {
                return false;
            }
        } else {
            if *v != x[k] {
                return false;
            }
            k += 1;
        }
    }
    true
}

fn meet(cfg: &SegmentConfig, i: usize, j: usize) -> Option<Point> {
    let n = cfg.n();
    let xi = cfg.anchor(i);
    let xj = cfg.anchor(j);
    // slot k of the full point for anchor a with omitted slot `skip`
    let full = |x: &[Q], skip: usize, k: usize| -> Q { x[if k < skip { k } else { k - 1 }].clone() };
    let mut p = Vec::with_capacity(n);
    for k in 0..n {
        if k == i {
            p.push(full(&xj, j, i));
        } else if k == j {
            p.push(full(&xi, i, j));
        } else {
            let (a, b) = (full(&xi, i, k), full(&xj, j, k));
            if a != b {
                return None;
            }
            p.push(a);
        }
    }
    (lies_on(cfg, i, &p) && lies_on(cfg, j, &p)).then_some(p)
}

/// A canonical adapted path: legs `(segment, from, to)` with no zero legs
/// and no two consecutive legs on one segment.
pub type Legs = Vec<(usize, Q, Q)>;

/// All adapted paths from `p` to `q` found by walking every sequence of
/// segments of length at most `max_len` in which consecutive segments
/// meet, keeping those whose directions are consistent per segment.
pub fn brute_force_paths(cfg: &SegmentConfig, p: &[Q], q: &[Q], max_len: usize) -> Vec<Legs> {
    let n = cfg.n();
    let mut found: Vec<Legs> = Vec::new();
    let mut seq: Vec<usize> = Vec::new();
    fn walk(
        cfg: &SegmentConfig,
        p: &[Q],
        q: &[Q],
        max_len: usize,
        seq: &mut Vec<usize>,
        found: &mut Vec<Legs>,
    ) {
        let last = *seq.last().expect("nonempty");
        if lies_on(cfg, last, q) {
            if let Some(legs) = legs_of(cfg, p, q, seq) {
                if !found.contains(&legs) {
                    found.push(legs);
                }
            }
        }
        if seq.len() == max_len {
            return;
        }
        for j in 0..cfg.n() {
            if j != last && meet(cfg, last, j).is_some() {
                seq.push(j);
                walk(cfg, p, q, max_len, seq, found);
                seq.pop();
            }
        }
    }
    for i in 0..n {
        if lies_on(cfg, i, p) {
            seq.push(i);
            walk(cfg, p, q, max_len, &mut seq, &mut found);
            seq.pop();
        }
    }
    found
}

fn legs_of(cfg: &SegmentConfig, p: &[Q], q: &[Q], seq: &[usize]) -> Option<Legs> {
    let mut points: Vec<Point> = vec![p.to_vec()];
    for w in seq.windows(2) {
        points.push(meet(cfg, w[0], w[1])?);
    }
    points.push(q.to_vec());
    let raw: Legs = seq
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, points[k][s].clone(), points[k + 1][s].clone()))
        .filter(|(_, a, b)| a != b)
        .collect();
    let mut dir: Vec<Option<bool>> = vec![None; cfg.n()];
    for (s, a, b) in &raw {
        let up = b > a;
        if dir[*s].is_some_and(|d| d != up) {
            return None;
        }
        dir[*s] = Some(up);
    }
    let mut legs: Legs = Vec::new();
    for (s, a, b) in raw {
        match legs.last_mut() {
            Some(last) if last.0 == s => last.2 = b,
            _ => legs.push((s, a, b)),
        }
    }
    Some(legs)
}

/// Every point where at least two segments meet, plus grid points on each
/// segment.
pub fn sample_points(cfg: &SegmentConfig) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::new();
    for i in 0..cfg.n() {
        for k in 0..=4 {
            pts.push(point_on(cfg, i, &Q::new(k.into(), 4.into())));
        }
        for j in 0..cfg.n() {
            if j != i {
                if let Some(m) = meet(cfg, i, j) {
                    pts.push(m);
                }
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Whether some segment meets the union of the others in exactly one point.
pub fn has_generalized_leaf(cfg: &SegmentConfig) -> bool {
    let n = cfg.n();
    n == 1
        || (0..n).any(|i| {
            let mut pts: Vec<Point> = (0..n).filter(|&j| j != i).filter_map(|j| meet(cfg, i, j)).collect();
            pts.sort();
            pts.dedup();
            pts.len() == 1
        })
}

/// Segment `i` meets exactly one other segment.
pub fn has_degree_one_leaf(cfg: &SegmentConfig) -> bool {
    let n = cfg.n();
    n == 1 || (0..n).any(|i| (0..n).filter(|&j| j != i && meet(cfg, i, j).is_some()).count() == 1)
}

// ---------- ribbon braids ----------

/// A product of `len` random generators `ζ_i^{±1}`, `α_ij^{±1}`.
pub fn random_w<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> WElement {
    let gens = WElement::generators(n);
    let mut acc = WElement::identity(n);
    for _ in 0..len {
        let g = &gens[rng.gen_range(0..gens.len())];
        let g = if rng.gen_bool(0.5) { w_invert(g).expect("generated") } else { g.clone() };
        acc = w_multiply(&acc, &g).expect("same rank");
    }
    acc
}

//! The framed little discs operad over exact rationals and its realization
//! system: `|a|` is the big disc with the interiors of the little discs
//! removed.

use crate::operad::{Operad, OperadError, Realization};
use crate::perm::Perm;
use crate::rational::{format_q, parse_q, q, qi, ParseError, ParseMode, Q};
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalComplex {
    pub re: Q,
    pub im: Q,
}

impl RationalComplex {
    pub fn new(re: Q, im: Q) -> Self {
        RationalComplex { re, im }
    }

    pub fn zero() -> Self {
        RationalComplex::new(Q::zero(), Q::zero())
    }

    pub fn one() -> Self {
        RationalComplex::new(Q::one(), Q::zero())
    }

    pub fn real(re: Q) -> Self {
        RationalComplex::new(re, Q::zero())
    }

    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        RationalComplex::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, s: &Q) -> Self {
        RationalComplex::new(&self.re * s, &self.im * s)
    }
}

impl fmt::Display for RationalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_q(&self.re), format_q(&self.im))
    }
}

impl Add for &RationalComplex {
    type Output = RationalComplex;
    fn add(self, o: &RationalComplex) -> RationalComplex {
        RationalComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &RationalComplex {
    type Output = RationalComplex;
    fn sub(self, o: &RationalComplex) -> RationalComplex {
        RationalComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &RationalComplex {
    type Output = RationalComplex;
    fn mul(self, o: &RationalComplex) -> RationalComplex {
        RationalComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &RationalComplex {
    type Output = RationalComplex;
    fn neg(self) -> RationalComplex {
        RationalComplex::new(-&self.re, -&self.im)
    }
}

/// A rational point of the unit circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitCirclePoint(RationalComplex);

impl UnitCirclePoint {
    pub fn new(z: RationalComplex) -> Option<Self> {
        (z.norm_sq() == Q::one()).then_some(UnitCirclePoint(z))
    }

    pub fn one() -> Self {
        UnitCirclePoint(RationalComplex::one())
    }

    /// `t ↦ ((1 − t²)/(1 + t²), 2t/(1 + t²))`.
    pub fn from_tan_half(t: &Q) -> Self {
        let d = Q::one() + t * t;
        UnitCirclePoint(RationalComplex::new(
            (Q::one() - t * t) / &d,
            (qi(2) * t) / d,
        ))
    }

    pub fn as_complex(&self) -> &RationalComplex {
        &self.0
    }

    pub fn mul(&self, o: &UnitCirclePoint) -> UnitCirclePoint {
        UnitCirclePoint(&self.0 * &o.0)
    }

    pub fn inverse(&self) -> UnitCirclePoint {
        UnitCirclePoint(self.0.conj())
    }

    /// Quarter-turn multiples and tan-half-angle points filling out `n`
    /// distinct samples around the circle.
    pub fn samples(n: usize) -> Vec<UnitCirclePoint> {
        let m = n.div_ceil(4).max(1) as i64;
        let right: Vec<UnitCirclePoint> = (-m..=m)
            .map(|k| UnitCirclePoint::from_tan_half(&q(k, m)))
            .collect();
        let mut out = right.clone();
        out.extend(
            right
                .iter()
                .filter(|p| p.0.re.is_positive())
                .map(|p| UnitCirclePoint(RationalComplex::new(-&p.0.re, p.0.im.clone()))),
        );
        out.truncate(n);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LittleDisc {
    pub center: RationalComplex,
    pub radius: Q,
    pub frame: UnitCirclePoint,
}

impl LittleDisc {
    /// The embedding `z ↦ c + r u z`.
    pub fn embed(&self, z: &RationalComplex) -> RationalComplex {
        &self.center + &(&self.frame.0 * z).scale(&self.radius)
    }

    /// Inverse of [`LittleDisc::embed`].
    pub fn unembed(&self, p: &RationalComplex) -> RationalComplex {
        (&self.frame.0.conj() * &(p - &self.center)).scale(&(Q::one() / &self.radius))
    }

    pub fn compose(&self, inner: &LittleDisc) -> LittleDisc {
        LittleDisc {
            center: self.embed(&inner.center),
            radius: &self.radius * &inner.radius,
            frame: self.frame.mul(&inner.frame),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscError {
    #[error("disc {0} has non-positive radius")]
    Radius(usize),
    #[error("disc {0} is not contained in the big disc")]
    Containment(usize),
    #[error("disc {0} touches the big disc boundary in an open configuration")]
    NotOpen(usize),
    #[error("discs {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("configuration has no discs")]
    Empty,
    #[error("radius {0} is too large for {1} discs")]
    RadiusTooLarge(String, usize),
}

/// An element of the framed little discs operad. `open` marks the variant
/// whose little discs avoid the big disc boundary.
#[derive(Debug, Clone)]
pub struct FramedDiscConfig {
    pub discs: Vec<LittleDisc>,
    pub open: bool,
}

impl PartialEq for FramedDiscConfig {
    fn eq(&self, other: &Self) -> bool {
        self.discs == other.discs
    }
}

impl Eq for FramedDiscConfig {}

fn strictly_inside(d: &LittleDisc) -> bool {
    let room = Q::one() - &d.radius;
    room.is_positive() && d.center.norm_sq() < &room * &room
}

impl FramedDiscConfig {
    /// Builds and validates a configuration, setting `open` only if asked.
    pub fn new(discs: Vec<LittleDisc>, open: bool) -> Result<Self, DiscError> {
        let c = FramedDiscConfig { discs, open };
        c.validate()?;
        Ok(c)
    }

    pub fn unit() -> Self {
        FramedDiscConfig {
            discs: vec![LittleDisc {
                center: RationalComplex::zero(),
                radius: Q::one(),
                frame: UnitCirclePoint::one(),
            }],
            open: false,
        }
    }

    pub fn arity(&self) -> usize {
        self.discs.len()
    }

    pub fn validate(&self) -> Result<(), DiscError> {
        if self.discs.is_empty() {
            return Err(DiscError::Empty);
        }
        for (i, d) in self.discs.iter().enumerate() {
            if !d.radius.is_positive() {
                return Err(DiscError::Radius(i + 1));
            }
            let room = Q::one() - &d.radius;
            if room.is_negative() || d.center.norm_sq() > &room * &room {
                return Err(DiscError::Containment(i + 1));
            }
            if self.open && !strictly_inside(d) {
                return Err(DiscError::NotOpen(i + 1));
            }
        }
        for i in 0..self.discs.len() {
            for j in i + 1..self.discs.len() {
                let (a, b) = (&self.discs[i], &self.discs[j]);
                let sum = &a.radius + &b.radius;
                if (&a.center - &b.center).norm_sq() < &sum * &sum {
                    return Err(DiscError::Overlap(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    /// Whether every little disc avoids the big disc boundary.
    pub fn is_strictly_inside(&self) -> bool {
        self.discs.iter().all(strictly_inside)
    }

    /// `a ∘_i b` with zero-based `i`.
    pub fn compose(&self, i: usize, b: &FramedDiscConfig) -> Result<FramedDiscConfig, OperadError> {
        let outer = self.discs.get(i).ok_or(OperadError::IndexOutOfRange {
            index: i + 1,
            arity: self.arity(),
        })?;
        let mut discs = Vec::with_capacity(self.arity() + b.arity() - 1);
        discs.extend_from_slice(&self.discs[..i]);
        discs.extend(b.discs.iter().map(|d| outer.compose(d)));
        discs.extend_from_slice(&self.discs[i + 1..]);
        let mut out = FramedDiscConfig { discs, open: false };
        out.open = out.is_strictly_inside();
        Ok(out)
    }

    /// `a σ`: disc `k` of the result is disc `σ(k)` of `a`.
    pub fn sigma_act(&self, sigma: &Perm) -> Result<FramedDiscConfig, OperadError> {
        if sigma.len() != self.arity() {
            return Err(OperadError::ArityMismatch {
                expected: self.arity(),
                got: sigma.len(),
            });
        }
        Ok(FramedDiscConfig {
            discs: (0..self.arity()).map(|k| self.discs[sigma.apply(k)].clone()).collect(),
            open: self.open,
        })
    }

    /// `‖p‖² ≤ 1` and `‖p − c_i‖² ≥ r_i²` for every little disc.
    pub fn contains(&self, p: &RationalComplex) -> bool {
        p.norm_sq() <= Q::one()
            && self
                .discs
                .iter()
                .all(|d| (p - &d.center).norm_sq() >= &d.radius * &d.radius)
    }

    pub fn boundary_in(&self, i: usize, q: &UnitCirclePoint) -> RationalComplex {
        self.discs[i].embed(&q.0)
    }

    pub fn boundary_out(&self, q: &UnitCirclePoint) -> RationalComplex {
        q.0.clone()
    }

    /// The same configuration with every little radius halved.
    pub fn halved(&self) -> FramedDiscConfig {
        let discs: Vec<LittleDisc> = self
            .discs
            .iter()
            .map(|d| LittleDisc {
                radius: &d.radius / qi(2),
                ..d.clone()
            })
            .collect();
        let mut out = FramedDiscConfig { discs, open: false };
        out.open = out.is_strictly_inside();
        out
    }
}

/// `n` unrotated discs of radius `r` in order along the real axis, with
/// centers `−1 + (2k − 1)/n`. Requires `0 < r < 1/n`.
pub fn base_config(n: usize, r: &Q) -> Result<FramedDiscConfig, DiscError> {
    if n == 0 {
        return Err(DiscError::Empty);
    }
    let nn = n as i64;
    if !r.is_positive() || *r >= q(1, nn) {
        return Err(DiscError::RadiusTooLarge(format_q(r), n));
    }
    let discs = (1..=nn)
        .map(|k| LittleDisc {
            center: RationalComplex::real(q(2 * k - 1 - nn, nn)),
            radius: r.clone(),
            frame: UnitCirclePoint::one(),
        })
        .collect();
    FramedDiscConfig::new(discs, true)
}

/// A random valid configuration of arity `n`: discs in disjoint vertical
/// strips with random radii and frames, then a random global rotation and
/// reordering.
pub fn random_config<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FramedDiscConfig {
    let nn = n as i64;
    let rot = random_frame(rng);
    let mut discs: Vec<LittleDisc> = (1..=nn)
        .map(|k| {
            let radius = q(rng.gen_range(1..=8), 8 * nn);
            let center = RationalComplex::real(q(2 * k - 1 - nn, nn));
            LittleDisc {
                center: &rot.0 * &center,
                radius,
                frame: random_frame(rng),
            }
        })
        .collect();
    discs.shuffle(rng);
    let mut out = FramedDiscConfig { discs, open: false };
    out.open = out.is_strictly_inside();
    out
}

fn random_frame<R: Rng + ?Sized>(rng: &mut R) -> UnitCirclePoint {
    // small Pythagorean points keep composite denominators modest
    let (a, b, c) = *[(1, 0, 1), (3, 4, 5), (5, 12, 13), (8, 15, 17)]
        .choose(rng)
        .expect("nonempty");
    let (re, im) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
    let sign = |s: bool| if s { -1 } else { 1 };
    UnitCirclePoint(RationalComplex::new(
        q(sign(rng.gen_bool(0.5)) * re, c),
        q(sign(rng.gen_bool(0.5)) * im, c),
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DiscDto {
    center: [String; 2],
    radius: String,
    frame: [String; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConfigDto {
    n: usize,
    discs: Vec<DiscDto>,
    open: bool,
}

fn complex_strings(z: &RationalComplex) -> [String; 2] {
    [format_q(&z.re), format_q(&z.im)]
}

fn parse_complex(s: &[String; 2], mode: ParseMode) -> Result<RationalComplex, ParseError> {
    Ok(RationalComplex::new(parse_q(&s[0], mode)?, parse_q(&s[1], mode)?))
}

impl FramedDiscConfig {
    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self.dto()).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.dto()).expect("serializable")
    }

    fn dto(&self) -> ConfigDto {
        ConfigDto {
            n: self.arity(),
            discs: self
                .discs
                .iter()
                .map(|d| DiscDto {
                    center: complex_strings(&d.center),
                    radius: format_q(&d.radius),
                    frame: complex_strings(&d.frame.0),
                })
                .collect(),
            open: self.open,
        }
    }

    /// Parses and validates a configuration.
    pub fn from_json(s: &str, mode: ParseMode) -> Result<Self, ParseError> {
        let v: Value = serde_json::from_str(s).map_err(|e| ParseError::Schema(e.to_string()))?;
        Self::from_json_value(v, mode)
    }

    pub fn from_json_value(v: Value, mode: ParseMode) -> Result<Self, ParseError> {
        let dto: ConfigDto = serde_json::from_value(v).map_err(|e| ParseError::Schema(e.to_string()))?;
        if dto.n != dto.discs.len() {
            return Err(ParseError::Schema(format!(
                "n = {} but {} discs given",
                dto.n,
                dto.discs.len()
            )));
        }
        let discs = dto
            .discs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let frame = parse_complex(&d.frame, mode)?;
                Ok(LittleDisc {
                    center: parse_complex(&d.center, mode)?,
                    radius: parse_q(&d.radius, mode)?,
                    frame: UnitCirclePoint::new(frame).ok_or_else(|| {
                        ParseError::Invalid(format!("frame of disc {} is not on the unit circle", i + 1))
                    })?,
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        FramedDiscConfig::new(discs, dto.open).map_err(|e| ParseError::Invalid(e.to_string()))
    }
}

/// The framed little discs operad together with its realization system.
#[derive(Debug, Clone, Copy, Default)]
pub struct FramedDiscs;

impl Operad for FramedDiscs {
    type Elem = FramedDiscConfig;

    fn arity(&self, x: &FramedDiscConfig) -> usize {
        x.arity()
    }

    fn unit(&self) -> FramedDiscConfig {
        FramedDiscConfig::unit()
    }

    fn compose_at(&self, x: &FramedDiscConfig, i: usize, y: &FramedDiscConfig) -> Result<FramedDiscConfig, OperadError> {
        x.compose(i, y)
    }

    fn act(&self, x: &FramedDiscConfig, sigma: &Perm) -> Result<FramedDiscConfig, OperadError> {
        x.sigma_act(sigma)
    }

    fn equal(&self, a: &FramedDiscConfig, b: &FramedDiscConfig) -> bool {
        a == b
    }

    fn validate(&self, x: &FramedDiscConfig) -> Result<(), String> {
        x.validate().map_err(|e| e.to_string())
    }

    fn describe(&self, x: &FramedDiscConfig) -> Value {
        x.to_json_value()
    }
}

impl Realization for FramedDiscs {
    type Param = UnitCirclePoint;
    type Point = RationalComplex;

    fn circle_samples(&self, density: usize) -> Vec<UnitCirclePoint> {
        UnitCirclePoint::samples(density)
    }

    /// Boundary images, points of a 1/4 grid, and a coarse grid mapped into
    /// each little disc (which are the points a composite adds there).
    fn realization_samples(&self, x: &FramedDiscConfig, density: usize) -> Vec<RationalComplex> {
        let qs = UnitCirclePoint::samples(density);
        let mut out: Vec<RationalComplex> = qs.iter().map(|u| u.0.clone()).collect();
        for i in 0..x.arity() {
            out.extend(qs.iter().map(|u| x.boundary_in(i, u)));
        }
        let grid = |k: i64| -> Vec<RationalComplex> {
            (-k..=k)
                .flat_map(|a| (-k..=k).map(move |b| RationalComplex::new(q(a, k), q(b, k))))
                .filter(|p| p.norm_sq() <= Q::one())
                .collect()
        };
        out.extend(grid(4).into_iter().filter(|p| x.contains(p)));
        for d in &x.discs {
            out.extend(grid(2).iter().map(|w| d.embed(w)).filter(|p| x.contains(p)));
        }
        out
    }

    fn contains(&self, x: &FramedDiscConfig, p: &RationalComplex) -> bool {
        x.contains(p)
    }

    fn boundary_in(&self, x: &FramedDiscConfig, i: usize, q: &UnitCirclePoint) -> RationalComplex {
        x.boundary_in(i, q)
    }

    fn boundary_out(&self, x: &FramedDiscConfig, q: &UnitCirclePoint) -> RationalComplex {
        x.boundary_out(q)
    }

    /// `|a|` and `|aσ|` are the same subset of the plane.
    fn symmetry(&self, _x: &FramedDiscConfig, _sigma: &Perm, p: &RationalComplex) -> RationalComplex {
        p.clone()
    }

    fn paste_lower(&self, _x: &FramedDiscConfig, _ys: &[FramedDiscConfig], p: &RationalComplex) -> RationalComplex {
        p.clone()
    }

    fn paste_right(&self, x: &FramedDiscConfig, _ys: &[FramedDiscConfig], i: usize, p: &RationalComplex) -> RationalComplex {
        x.discs[i].embed(p)
    }

    fn lower_preimage(&self, x: &FramedDiscConfig, _ys: &[FramedDiscConfig], p: &RationalComplex) -> Option<RationalComplex> {
        x.contains(p).then(|| p.clone())
    }

    fn right_preimage(
        &self,
        x: &FramedDiscConfig,
        ys: &[FramedDiscConfig],
        i: usize,
        p: &RationalComplex,
    ) -> Option<RationalComplex> {
        let z = x.discs[i].unembed(p);
        ys[i].contains(&z).then_some(z)
    }

    fn boundary_out_param(&self, _y: &FramedDiscConfig, p: &RationalComplex) -> Option<UnitCirclePoint> {
        UnitCirclePoint::new(p.clone())
    }

    fn point_json(&self, p: &RationalComplex) -> Value {
        json!(complex_strings(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn disc(cx: Q, r: Q) -> LittleDisc {
        LittleDisc {
            center: RationalComplex::real(cx),
            radius: r,
            frame: UnitCirclePoint::one(),
        }
    }

    #[test]
    fn single_disc_composite() {
        let a = FramedDiscConfig::new(vec![disc(qi(0), q(1, 2))], true).unwrap();
        let b = FramedDiscConfig::new(vec![disc(q(1, 2), q(1, 4))], true).unwrap();
        let c = a.compose(0, &b).unwrap();
        assert_eq!(c.discs[0].center, RationalComplex::real(q(1, 4)));
        assert_eq!(c.discs[0].radius, q(1, 8));
        assert_eq!(c.discs[0].frame, UnitCirclePoint::one());
    }

    #[test]
    fn quarter_turns_multiply() {
        let i = UnitCirclePoint::new(RationalComplex::new(qi(0), qi(1))).unwrap();
        assert_eq!(i.mul(&i).as_complex(), &RationalComplex::new(qi(-1), qi(0)));
    }

    #[test]
    fn unit_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = FramedDiscConfig::unit();
        for n in 1..5 {
            let b = random_config(&mut rng, n);
            assert_eq!(u.compose(0, &b).unwrap(), b);
            for i in 0..n {
                assert_eq!(b.compose(i, &u).unwrap(), b);
            }
        }
    }

    #[test]
    fn transposition_swaps() {
        let a = base_config(2, &q(1, 8)).unwrap();
        let s = a.sigma_act(&Perm::transposition(2, 0, 1)).unwrap();
        assert_eq!(s.discs[0], a.discs[1]);
        assert_eq!(s.discs[1], a.discs[0]);
    }

    #[test]
    fn base_configs() {
        let one = base_config(1, &q(1, 2)).unwrap();
        assert_eq!(one.discs[0].center, RationalComplex::zero());
        assert_eq!(one.discs[0].radius, q(1, 2));
        let two = base_config(2, &q(1, 8)).unwrap();
        assert_eq!(two.discs[0].center, RationalComplex::real(q(-1, 2)));
        assert_eq!(two.discs[1].center, RationalComplex::real(q(1, 2)));
        assert!(two.open);
        assert!(base_config(3, &q(1, 2)).is_err());
    }

    #[test]
    fn containment_predicate() {
        let a = base_config(2, &q(1, 8)).unwrap();
        assert!(!a.contains(&a.discs[0].center));
        for u in UnitCirclePoint::samples(64) {
            assert!(a.contains(u.as_complex()));
            let p = a.boundary_in(1, &u);
            assert!(a.contains(&p));
            assert!(p.norm_sq() < Q::one());
        }
        assert_eq!(a.boundary_in(0, &UnitCirclePoint::one()), RationalComplex::real(q(-3, 8)));
    }

    #[test]
    fn samples_are_distinct_unit_points() {
        let s = UnitCirclePoint::samples(64);
        assert_eq!(s.len(), 64);
        for (i, a) in s.iter().enumerate() {
            assert_eq!(a.as_complex().norm_sq(), Q::one());
            assert!(s[i + 1..].iter().all(|b| b != a));
        }
    }

    #[test]
    fn halving_makes_open() {
        let a = FramedDiscConfig::unit();
        let h = a.halved();
        assert!(h.open);
        assert_eq!(h.discs[0].radius, q(1, 2));
    }

    #[test]
    fn json_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_config(&mut rng, 3);
        let s = a.to_json();
        let b = FramedDiscConfig::from_json(&s, ParseMode::Strict).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_json(), s);
    }

    #[test]
    fn json_rejects_overlap() {
        let s = r#"{"n":2,"discs":[{"center":["0","0"],"radius":"1/2","frame":["1","0"]},{"center":["1/4","0"],"radius":"1/4","frame":["1","0"]}],"open":false}"#;
        assert!(FramedDiscConfig::from_json(s, ParseMode::Strict).is_err());
    }
}

//! Static SVG pictures of disc configurations and cacti.
//!
//! Layout is computed from exact data; floats appear only for drawing and
//! every number is printed with six decimals.

use crate::cacti::Cactus;
use crate::discs::FramedDiscConfig;
use crate::rational::{frac, to_f64, Q};
use std::f64::consts::TAU;
use std::fmt::Write;

const STROKE: &str = "#222222";
const ACCENT: &str = "#c0392b";

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

struct Canvas {
    body: String,
    min: (f64, f64),
    max: (f64, f64),
}

impl Canvas {
    fn new() -> Self {
        Canvas {
            body: String::new(),
            min: (f64::INFINITY, f64::INFINITY),
            max: (f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn extend(&mut self, x: f64, y: f64, r: f64) {
        self.min = (self.min.0.min(x - r), self.min.1.min(-y - r));
        self.max = (self.max.0.max(x + r), self.max.1.max(-y + r));
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, width: f64) {
        self.extend(x, y, r);
        let _ = writeln!(
            self.body,
            r#"  <circle cx="{}" cy="{}" r="{}" fill="none" stroke="{STROKE}" stroke-width="{}"/>"#,
            num(x),
            num(-y),
            num(r),
            num(width)
        );
    }

    fn dot(&mut self, x: f64, y: f64, r: f64, color: &str) {
        self.extend(x, y, r);
        let _ = writeln!(
            self.body,
            r#"  <circle cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
            num(x),
            num(-y),
            num(r)
        );
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), width: f64) {
        let _ = writeln!(
            self.body,
            r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{ACCENT}" stroke-width="{}"/>"#,
            num(a.0),
            num(-a.1),
            num(b.0),
            num(-b.1),
            num(width)
        );
    }

    fn label(&mut self, x: f64, y: f64, size: f64, text: &str) {
        let _ = writeln!(
            self.body,
            r#"  <text x="{}" y="{}" font-size="{}" font-family="sans-serif" text-anchor="middle" dominant-baseline="central">{text}</text>"#,
            num(x),
            num(-y),
            num(size)
        );
    }

    fn finish(self) -> String {
        let pad = 0.05 * (self.max.0 - self.min.0).max(self.max.1 - self.min.1);
        let (x0, y0) = (self.min.0 - pad, self.min.1 - pad);
        let (w, h) = (self.max.0 - self.min.0 + 2.0 * pad, self.max.1 - self.min.1 + 2.0 * pad);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" height=\"{}\" viewBox=\"{} {} {} {}\">\n\
             {}</svg>\n",
            num(480.0 * h / w),
            num(x0),
            num(y0),
            num(w),
            num(h),
            self.body
        )
    }
}

/// The unit disc with each little disc, its frame tick, its index, and the
/// global marked point `1`.
pub fn render_discs(cfg: &FramedDiscConfig) -> String {
    let mut cv = Canvas::new();
    cv.circle(0.0, 0.0, 1.0, 0.01);
    cv.dot(1.0, 0.0, 0.025, ACCENT);
    for (k, d) in cfg.discs.iter().enumerate() {
        let (cx, cy) = (to_f64(&d.center.re), to_f64(&d.center.im));
        let r = to_f64(&d.radius);
        let u = d.frame.as_complex();
        let tip = (cx + r * to_f64(&u.re), cy + r * to_f64(&u.im));
        cv.circle(cx, cy, r, 0.006);
        cv.line((cx, cy), tip, 0.006);
        cv.dot(tip.0, tip.1, 0.012, ACCENT);
        cv.label(cx, cy, 0.6 * r, &(k + 1).to_string());
    }
    cv.finish()
}

struct Lobe {
    center: (f64, f64),
    radius: f64,
    /// Angle of local parameter 0.
    base: f64,
}

impl Lobe {
    fn at(&self, y: &Q) -> (f64, f64) {
        let a = self.base + TAU * to_f64(&frac(y));
        (self.center.0 + self.radius * a.cos(), self.center.1 + self.radius * a.sin())
    }
}

/// Lobes as circles whose circumference is the length of their support,
/// attached as a planar tree; lobes sharing an attachment point fan out
/// around it. Each lobe shows its local marked point; the global marked
/// point is drawn in red.
pub fn render_cactus(c: &Cactus) -> String {
    let n = c.arity();
    let radius: Vec<f64> = (0..n)
        .map(|i| {
            let len: Q = c.support(i).iter().map(|(a, b)| b - a).sum();
            to_f64(&len) / TAU
        })
        .collect();

    // First run of each lobe: the point where it starts and the lobe before it.
    let mut order: Vec<usize> = Vec::new();
    let mut host: Vec<Option<usize>> = vec![None; n];
    let mut vertex: Vec<Vec<Q>> = vec![Vec::new(); n];
    let mut prev: Option<usize> = None;
    for p in c.pieces() {
        if let Some(&m) = p.movers().first() {
            if !order.contains(&m) {
                order.push(m);
                host[m] = prev;
                vertex[m] = p.start.iter().map(frac).collect();
            }
            prev = Some(m);
        }
    }

    // Lobes attached at one point share the host that reached it first.
    let mut groups: Vec<(Vec<Q>, usize, Vec<usize>)> = Vec::new();
    for &m in order.iter().skip(1) {
        let h = host[m].expect("non-root lobe has a predecessor");
        match groups.iter_mut().find(|g| g.0 == vertex[m]) {
            Some(g) => g.2.push(m),
            None => groups.push((vertex[m].clone(), h, vec![m])),
        }
    }

    let mut lobes: Vec<Option<Lobe>> = (0..n).map(|_| None).collect();
    let root = order[0];
    lobes[root] = Some(Lobe { center: (0.0, 0.0), radius: radius[root], base: 0.0 });
    for &m in order.iter().skip(1) {
        let g = groups.iter().find(|g| g.2.contains(&m)).expect("grouped");
        let h = lobes[g.1].as_ref().expect("host placed first");
        let v = h.at(&g.0[g.1]);
        let out = (v.1 - h.center.1).atan2(v.0 - h.center.0);
        let k = g.2.iter().position(|&x| x == m).expect("member") + 1;
        let dir = out + TAU / 4.0 - TAU / 2.0 * k as f64 / (g.2.len() + 1) as f64;
        let r = radius[m];
        let center = (v.0 + r * dir.cos(), v.1 + r * dir.sin());
        let base = dir + TAU / 2.0 - TAU * to_f64(&g.0[m]);
        lobes[m] = Some(Lobe { center, radius: r, base });
    }

    let mut cv = Canvas::new();
    let scale = radius.iter().cloned().fold(0.0, f64::max);
    for (k, lobe) in lobes.iter().enumerate() {
        let l = lobe.as_ref().expect("every lobe moves");
        cv.circle(l.center.0, l.center.1, l.radius, 0.02 * scale);
        let mp = l.at(&Q::from_integer(0.into()));
        cv.dot(mp.0, mp.1, 0.04 * scale, STROKE);
        cv.label(l.center.0, l.center.1, 0.6 * l.radius, &(k + 1).to_string());
    }
    let start = c.boundary_out(&Q::from_integer(0.into()));
    let root_lobe = lobes[root].as_ref().expect("root");
    let g = root_lobe.at(&start[root]);
    cv.dot(g.0, g.1, 0.06 * scale, ACCENT);
    cv.finish()
}

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Zero;
#[allow(unused_imports)]
use num_traits::Float;

use super::Jet;
use crate::error::Error;
use crate::scalar::{fmt_c64, pow_principal, C64};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// `∫ f` along the straight segment `from → to`, composite Gauss–Legendre.
pub fn integrate_segment(f: impl Fn(C64) -> C64, from: C64, to: C64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> C64 {
    let panels = panels.max(1);
    let step = (to - from) / panels as f64;
    let mut total = C64::zero();
    for k in 0..panels {
        let mid = from + step * (k as f64 + 0.5);
        let half = step * 0.5;
        let mut acc = C64::zero();
        for (x, w) in rule.0.iter().zip(rule.1.iter()) {
            acc += f(mid + half * *x) * *w;
        }
        total += acc * half;
    }
    total
}

/// First and second derivative of an analytic `f` at `z` from Cauchy's
/// integral formula on a circle of radius `r`, trapezoid rule with `m` nodes.
pub fn cauchy_jet(f: impl Fn(C64) -> C64, z: C64, r: f64, m: usize) -> (C64, C64) {
    let mut s1 = C64::zero();
    let mut s2 = C64::zero();
    for j in 0..m {
        let theta = 2.0 * PI * j as f64 / m as f64;
        let w = C64::from_polar(1.0, theta);
        let v = f(z + w * r);
        s1 += v * w.conj();
        s2 += v * (w * w).conj();
    }
    let m = m as f64;
    (s1 / (m * r), s2 * 2.0 / (m * r * r))
}

/// `H(z) = c1 + c2 ∫_{base}^{z} Π ((t - s_k)/(base - s_k))^{e_k} dt`.
///
/// Each factor is normalized to 1 at `base`, so its principal-branch cut is
/// the ray from `s_k` pointing away from `base` and never meets a convex
/// neighbourhood of `base` that excludes the singular points.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSolution {
    pub singular: [C64; 3],
    pub exponents: [C64; 3],
    pub base: C64,
    pub c1: C64,
    pub c2: C64,
    rule: (Vec<f64>, Vec<f64>),
}

const RULE_POINTS: usize = 20;
const CAUCHY_NODES: usize = 64;

impl QuadratureSolution {
    pub fn new(singular: [C64; 3], exponents: [C64; 3], base: C64, c1: C64, c2: C64) -> Result<Self, Error> {
        if singular.iter().any(|s| (*s - base).norm() < 1e-8) {
            return Err(Error::SingularPoint(fmt_c64(base)));
        }
        Ok(QuadratureSolution { singular, exponents, base, c1, c2, rule: gauss_legendre(RULE_POINTS) })
    }

    pub fn integrand(&self, t: C64) -> C64 {
        self.singular
            .iter()
            .zip(self.exponents.iter())
            .fold(C64::new(1.0, 0.0), |acc, (s, e)| acc * pow_principal((t - s) / (self.base - s), *e))
    }

    fn distance_to_singularities(&self, z: C64) -> f64 {
        self.singular.iter().map(|s| (z - s).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn value(&self, z: C64) -> C64 {
        let len = (z - self.base).norm();
        if len == 0.0 {
            return self.c1;
        }
        // distance from the segment to the nearest singular point
        let seg_dist = self
            .singular
            .iter()
            .map(|s| {
                let d = z - self.base;
                let t = (((*s - self.base) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                (self.base + d * t - s).norm()
            })
            .fold(f64::INFINITY, f64::min);
        let panels = (len / (0.25 * seg_dist)).ceil() as usize;
        self.c1 + self.c2 * integrate_segment(|t| self.integrand(t), self.base, z, panels, &self.rule)
    }

    /// Value from the quadrature; derivatives from the Cauchy formula applied
    /// to the quadrature on a circle of radius `dist/4` around `z`.
    pub fn jet(&self, z: C64) -> Result<Jet, Error> {
        let dist = self.distance_to_singularities(z);
        if dist < 1e-8 {
            return Err(Error::SingularPoint(fmt_c64(z)));
        }
        let r = 0.25 * dist.min((z - self.base).norm().max(dist));
        let (d1, d2) = cauchy_jet(|w| self.value(w), z, r, CAUCHY_NODES);
        Ok(Jet { value: self.value(z), d1, d2 })
    }
}

use serde::{Deserialize, Serialize};

use crate::point::{dist_sq, ConfigPoint};

/// A closed obstacle region. Boundary points are occupied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Obstacle {
    Box { min: ConfigPoint, max: ConfigPoint },
    Sphere { center: ConfigPoint, radius: f64 },
}

impl Obstacle {
    pub fn new_box(min: impl Into<ConfigPoint>, max: impl Into<ConfigPoint>) -> Self {
        Obstacle::Box {
            min: min.into(),
            max: max.into(),
        }
    }

    pub fn new_sphere(center: impl Into<ConfigPoint>, radius: f64) -> Self {
        Obstacle::Sphere {
            center: center.into(),
            radius,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Obstacle::Box { min, .. } => min.dim(),
            Obstacle::Sphere { center, .. } => center.dim(),
        }
    }

    /// Euclidean distance from `p` to the closed point set; zero inside.
    pub fn distance(&self, p: &[f64]) -> f64 {
        match self {
            Obstacle::Box { min, max } => {
                let mut acc = 0.0;
                for ((&x, &lo), &hi) in p.iter().zip(min.coords()).zip(max.coords()) {
                    let e = if x < lo {
                        lo - x
                    } else if x > hi {
                        x - hi
                    } else {
                        0.0
                    };
                    acc += e * e;
                }
                acc.sqrt()
            }
            Obstacle::Sphere { center, radius } => {
                (dist_sq(p, center.coords()).sqrt() - radius).max(0.0)
            }
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Obstacle::Box { min, max } => p
                .iter()
                .zip(min.coords())
                .zip(max.coords())
                .all(|((&x, &lo), &hi)| lo <= x && x <= hi),
            Obstacle::Sphere { center, radius } => dist_sq(p, center.coords()).sqrt() <= *radius,
        }
    }

    /// Axis-aligned bounding box of the obstacle.
    pub fn aabb(&self) -> (ConfigPoint, ConfigPoint) {
        match self {
            Obstacle::Box { min, max } => (min.clone(), max.clone()),
            Obstacle::Sphere { center, radius } => (
                ConfigPoint::new(center.coords().iter().map(|c| c - radius)),
                ConfigPoint::new(center.coords().iter().map(|c| c + radius)),
            ),
        }
    }

    /// Exact test of the closed segment `ab` against the closed obstacle.
    pub fn intersects_segment(&self, a: &[f64], b: &[f64]) -> bool {
        match self {
            Obstacle::Box { min, max } => segment_hits_box(a, b, min.coords(), max.coords()),
            Obstacle::Sphere { center, radius } => {
                segment_sphere_distance(a, b, center.coords()) <= *radius
            }
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Obstacle::Box { min, max } => min
                .coords()
                .iter()
                .zip(max.coords())
                .map(|(lo, hi)| hi - lo)
                .product(),
            Obstacle::Sphere { center, radius } => ball_volume(center.dim(), *radius),
        }
    }
}

/// Slab test against a closed box; touching counts as a hit.
pub(crate) fn segment_hits_box(a: &[f64], b: &[f64], lo: &[f64], hi: &[f64]) -> bool {
    let mut t_enter = 0.0_f64;
    let mut t_exit = 1.0_f64;
    for i in 0..a.len() {
        let d = b[i] - a[i];
        if d == 0.0 {
            if a[i] < lo[i] || a[i] > hi[i] {
                return false;
            }
            continue;
        }
        let inv = 1.0 / d;
        let (mut t0, mut t1) = ((lo[i] - a[i]) * inv, (hi[i] - a[i]) * inv);
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        t_enter = t_enter.max(t0);
        t_exit = t_exit.min(t1);
        if t_enter > t_exit {
            return false;
        }
    }
    true
}

/// Distance from `c` to the closed segment `ab`.
pub(crate) fn segment_sphere_distance(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let mut dd = 0.0;
    let mut dc = 0.0;
    for i in 0..a.len() {
        let d = b[i] - a[i];
        dd += d * d;
        dc += d * (c[i] - a[i]);
    }
    let t = if dd > 0.0 {
        (dc / dd).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut acc = 0.0;
    for i in 0..a.len() {
        let q = a[i] + t * (b[i] - a[i]) - c[i];
        acc += q * q;
    }
    acc.sqrt()
}

/// Volume of the `d`-ball of radius `r`.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    match d {
        2 => std::f64::consts::PI * r * r,
        3 => 4.0 / 3.0 * std::f64::consts::PI * r * r * r,
        _ => {
            // pi^(d/2) / Gamma(d/2 + 1), via the two-step recurrence
            let mut v = if d.is_multiple_of(2) { 1.0 } else { 2.0 };
            let mut k = if d.is_multiple_of(2) { 2 } else { 3 };
            while k <= d {
                v *= 2.0 * std::f64::consts::PI / k as f64;
                k += 2;
            }
            v * r.powi(d as i32)
        }
    }
}

//! Piecewise-linear curves in `(alpha, beta, gamma, theta)` space.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four coset coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    Alpha,
    Beta,
    Gamma,
    Theta,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::Alpha, Coord::Beta, Coord::Gamma, Coord::Theta];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::Alpha => "alpha",
            Coord::Beta => "beta",
            Coord::Gamma => "gamma",
            Coord::Theta => "theta",
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alpha" | "a" | "α" => Ok(Coord::Alpha),
            "beta" | "b" | "β" => Ok(Coord::Beta),
            "gamma" | "g" | "γ" => Ok(Coord::Gamma),
            "theta" | "t" | "θ" => Ok(Coord::Theta),
            other => Err(Error::InvalidPath(format!("unknown coordinate `{other}`"))),
        }
    }
}

/// A point `(alpha, beta, gamma, theta)`.
pub type Point = [f64; 4];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub t: f64,
    pub point: Point,
}

/// Keyframes at increasing `t` from 0 to 1, joined linearly in each angle.
///
/// A closed path returns to its start modulo `2 pi` in every angle; all
/// states and frames are `2 pi`-periodic, so a coordinate circle is closed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterPath {
    keyframes: Vec<Keyframe>,
    closed: bool,
}

const CLOSURE_TOL: f64 = 1e-12;

fn winds_back(start: f64, end: f64) -> bool {
    let turns = (end - start) / TAU;
    (turns - turns.round()).abs() * TAU <= CLOSURE_TOL * (1.0 + start.abs().max(end.abs()))
}

impl ParameterPath {
    /// Validates `t` (starts at 0, ends at 1, strictly increasing) and, when
    /// `closed`, that the last point equals the first modulo `2 pi`.
    pub fn new(keyframes: Vec<Keyframe>, closed: bool) -> Result<Self> {
        if keyframes.len() < 2 {
            return Err(Error::InvalidPath("at least 2 keyframes required".into()));
        }
        let first = keyframes[0];
        let last = keyframes[keyframes.len() - 1];
        if first.t != 0.0 || last.t != 1.0 {
            return Err(Error::InvalidPath("keyframe parameters must run from 0 to 1".into()));
        }
        if keyframes.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidPath("keyframe parameters must increase strictly".into()));
        }
        if keyframes.iter().any(|k| k.point.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidPath("non-finite keyframe coordinate".into()));
        }
        if closed && !(0..4).all(|i| winds_back(first.point[i], last.point[i])) {
            return Err(Error::PathNotClosed);
        }
        Ok(ParameterPath { keyframes, closed })
    }

    /// Keyframes at evenly spaced `t`.
    pub fn from_points(points: &[Point], closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPath("at least 2 keyframes required".into()));
        }
        let n = points.len() - 1;
        let keyframes = points
            .iter()
            .enumerate()
            .map(|(i, &point)| Keyframe { t: if i == n { 1.0 } else { i as f64 / n as f64 }, point })
            .collect();
        Self::new(keyframes, closed)
    }

    /// `coord` runs from its center value through `winding` full turns.
    pub fn coordinate_circle(coord: Coord, center: Point, winding: i32) -> Result<Self> {
        let mut end = center;
        end[coord.index()] += TAU * winding as f64;
        Self::new(
            vec![Keyframe { t: 0.0, point: center }, Keyframe { t: 1.0, point: end }],
            true,
        )
    }

    /// A path that stays at one point.
    pub fn constant(point: Point) -> Self {
        ParameterPath {
            keyframes: vec![Keyframe { t: 0.0, point }, Keyframe { t: 1.0, point }],
            closed: true,
        }
    }

    /// Counterclockwise boundary of the rectangle `[u0, u0+side] x [v0, v0+side]`
    /// in the `(u, v)` plane, starting at `corner`, each edge taking a quarter of `t`.
    pub fn rectangle(corner: Point, u: Coord, v: Coord, side: f64) -> Result<Self> {
        if u == v {
            return Err(Error::UnsupportedPlane(u.to_string(), v.to_string()));
        }
        let mut p = [corner; 5];
        p[1][u.index()] += side;
        p[2][u.index()] += side;
        p[2][v.index()] += side;
        p[3][v.index()] += side;
        Self::from_points(&p, true)
    }

    /// `self` followed by `other`, each taking half of the new parameter range.
    /// `other` must start where `self` ends.
    pub fn concat(&self, other: &ParameterPath) -> Result<Self> {
        let joint_a = self.end();
        let joint_b = other.start();
        if (0..4).any(|i| (joint_a[i] - joint_b[i]).abs() > CLOSURE_TOL) {
            return Err(Error::InvalidPath("concatenated paths do not meet".into()));
        }
        let mut keyframes: Vec<Keyframe> =
            self.keyframes.iter().map(|k| Keyframe { t: 0.5 * k.t, point: k.point }).collect();
        keyframes.extend(
            other.keyframes.iter().skip(1).map(|k| Keyframe { t: 0.5 + 0.5 * k.t, point: k.point }),
        );
        if let Some(last) = keyframes.last_mut() {
            last.t = 1.0;
        }
        let start = self.start();
        let end = other.end();
        let closed = (0..4).all(|i| winds_back(start[i], end[i]));
        Self::new(keyframes, closed)
    }

    pub fn keyframes(&self) -> &[Keyframe] {
        &self.keyframes
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn start(&self) -> Point {
        self.keyframes[0].point
    }

    pub fn end(&self) -> Point {
        self.keyframes[self.keyframes.len() - 1].point
    }

    fn segment_index(&self, t: f64) -> usize {
        let n = self.keyframes.len() - 1;
        self.keyframes[1..n].iter().take_while(|k| k.t <= t).count()
    }

    /// Point at parameter `t`, clamped to `[0, 1]`.
    pub fn point(&self, t: f64) -> Point {
        let t = t.clamp(0.0, 1.0);
        let i = self.segment_index(t);
        let (k0, k1) = (&self.keyframes[i], &self.keyframes[i + 1]);
        let s = (t - k0.t) / (k1.t - k0.t);
        std::array::from_fn(|c| k0.point[c] + s * (k1.point[c] - k0.point[c]))
    }

    /// `dx/dt` on the segment containing `t` (the later segment at a keyframe).
    pub fn velocity(&self, t: f64) -> Point {
        let i = self.segment_index(t.clamp(0.0, 1.0));
        let (k0, k1) = (&self.keyframes[i], &self.keyframes[i + 1]);
        let dt = k1.t - k0.t;
        std::array::from_fn(|c| (k1.point[c] - k0.point[c]) / dt)
    }

    /// Segment boundaries `(t0, t1)` between consecutive keyframes.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.keyframes.windows(2).map(|w| (w[0].t, w[1].t))
    }

    /// Even number of Simpson intervals for each segment, proportional to its
    /// parameter length, from a total budget of `samples`.
    pub(crate) fn simpson_intervals(&self, samples: usize) -> Vec<usize> {
        self.segments()
            .map(|(t0, t1)| {
                let n = ((samples as f64) * (t1 - t0)).round() as usize;
                let n = n.max(2);
                n + n % 2
            })
            .collect()
    }

    /// Steps per segment for midpoint-rule composition, at least one each.
    pub(crate) fn step_counts(&self, steps: usize) -> Vec<usize> {
        self.segments()
            .map(|(t0, t1)| (((steps as f64) * (t1 - t0)).round() as usize).max(1))
            .collect()
    }

    /// Composite Simpson quadrature of `f(point, velocity)` over `t`, applied
    /// separately on each segment so the velocity jumps at keyframes do not
    /// spoil the accuracy. Returns the integral and the number of intervals used.
    pub fn integrate(&self, samples: usize, f: impl Fn(Point, Point) -> f64) -> (f64, usize) {
        let mut total = 0.0;
        let mut used = 0;
        for ((t0, t1), n) in self.segments().zip(self.simpson_intervals(samples)) {
            let k0 = self.keyframes.iter().find(|k| k.t == t0).unwrap().point;
            let k1 = self.keyframes.iter().find(|k| k.t == t1).unwrap().point;
            let vel: Point = std::array::from_fn(|c| (k1[c] - k0[c]) / (t1 - t0));
            let h = (t1 - t0) / n as f64;
            let mut acc = 0.0;
            for j in 0..=n {
                let s = j as f64 / n as f64;
                let x: Point = std::array::from_fn(|c| k0[c] + s * (k1[c] - k0[c]));
                let w = if j == 0 || j == n {
                    1.0
                } else if j % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * f(x, vel);
            }
            total += acc * h / 3.0;
            used += n;
        }
        (total, used)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ParameterPath::from_points(&[[0.0; 4]], false).is_err());
        let bad_t = vec![
            Keyframe { t: 0.0, point: [0.0; 4] },
            Keyframe { t: 0.5, point: [1.0; 4] },
            Keyframe { t: 0.5, point: [2.0; 4] },
            Keyframe { t: 1.0, point: [0.0; 4] },
        ];
        assert!(ParameterPath::new(bad_t, false).is_err());
        let open = [[0.0; 4], [1.0, 0.0, 0.0, 0.0]];
        assert_eq!(ParameterPath::from_points(&open, true), Err(Error::PathNotClosed));
        assert!(!ParameterPath::from_points(&open, false).unwrap().is_closed());
    }

    #[test]
    fn circle_is_closed_mod_two_pi() {
        let c = ParameterPath::coordinate_circle(Coord::Gamma, [0.1, 0.2, 0.3, 0.4], 2).unwrap();
        assert!(c.is_closed());
        assert_eq!(c.velocity(0.3), [0.0, 0.0, 2.0 * TAU, 0.0]);
        let mid = c.point(0.5);
        assert!((mid[2] - (0.3 + TAU)).abs() < 1e-15);
    }

    #[test]
    fn interpolation_and_velocity() {
        let p = ParameterPath::from_points(&[[0.0; 4], [1.0, 2.0, 0.0, 0.0], [1.0, 2.0, 3.0, 0.0]], false)
            .unwrap();
        assert_eq!(p.point(0.25), [0.5, 1.0, 0.0, 0.0]);
        assert_eq!(p.velocity(0.25), [2.0, 4.0, 0.0, 0.0]);
        assert_eq!(p.velocity(0.5), [0.0, 0.0, 6.0, 0.0]);
        assert_eq!(p.point(1.0), [1.0, 2.0, 3.0, 0.0]);
    }

    #[test]
    fn rectangle_corners() {
        let r = ParameterPath::rectangle([0.0, 0.0, 0.0, 0.5], Coord::Theta, Coord::Alpha, 0.1).unwrap();
        assert_eq!(r.keyframes().len(), 5);
        assert_eq!(r.point(0.25)[3], 0.6);
        assert!(r.is_closed());
        assert!(ParameterPath::rectangle([0.0; 4], Coord::Beta, Coord::Beta, 0.1).is_err());
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let p = ParameterPath::from_points(&[[0.0; 4], [2.0, 0.0, 0.0, 0.0]], false).unwrap();
        let (v, n) = p.integrate(16, |x, vel| x[0].powi(3) * vel[0]);
        assert_eq!(n, 16);
        assert!((v - 4.0).abs() < 1e-14);
    }

    #[test]
    fn concat_halves_parameter() {
        let a = ParameterPath::from_points(&[[0.0; 4], [1.0, 0.0, 0.0, 0.0]], false).unwrap();
        let b = ParameterPath::from_points(&[[1.0, 0.0, 0.0, 0.0], [0.0; 4]], false).unwrap();
        let ab = a.concat(&b).unwrap();
        assert!(ab.is_closed());
        assert_eq!(ab.keyframes()[1].t, 0.5);
        assert!(b.concat(&b).is_err());
    }
}

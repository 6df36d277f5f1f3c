//! Space-agnostic hyperbolic geometry: Gromov products, four-point δ,
//! shadows, Busemann values and cocycles, translation-length estimates.
//!
//! Every function here is pure and generic over [`MetricSpace`] /
//! [`IsometricAction`], so the same code runs on the toy models in
//! [`models`], the tree of flats and the building.

pub mod models;

use crate::exact::ExactReal;
use crate::{Error, Result};

/// A metric space with exact distances.
pub trait MetricSpace {
    type Point: Clone;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> ExactReal;
}

/// A group acting on a [`MetricSpace`] by isometries, with a distinguished
/// basepoint.
pub trait IsometricAction: MetricSpace {
    type Element: Clone;

    fn basepoint(&self) -> Self::Point;
    fn identity(&self) -> Self::Element;
    /// The product `g·h` (apply `h` first).
    fn compose(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;
    fn inverse(&self, g: &Self::Element) -> Self::Element;
    fn act(&self, g: &Self::Element, x: &Self::Point) -> Self::Point;

    fn power(&self, g: &Self::Element, n: usize) -> Self::Element {
        let mut acc = self.identity();
        for _ in 0..n {
            acc = self.compose(&acc, g);
        }
        acc
    }
}

/// `(x|y)_o = ½(d(o,x) + d(o,y) − d(x,y))`.
pub fn gromov_product<S: MetricSpace>(
    space: &S,
    o: &S::Point,
    x: &S::Point,
    y: &S::Point,
) -> ExactReal {
    let sum = space.distance(o, x) + space.distance(o, y) - space.distance(x, y);
    sum.half()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaEstimate {
    pub delta: f64,
    pub sample_size: usize,
    pub exhaustive: bool,
}

/// Smallest δ for which `(x|y)_o ≥ min((x|z)_o, (z|y)_o) − δ` holds over
/// every quadruple drawn from `points` (basepoint included).
///
/// The basepoint only ranges over the sample, so on a proper subset of a
/// space the estimate can undershoot the true δ by up to twice the gap
/// between sampled and unsampled basepoints.
pub fn estimate_delta<S: MetricSpace>(
    space: &S,
    points: &[S::Point],
    exhaustive: bool,
) -> Result<DeltaEstimate> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "four-point estimate needs at least 4 points, got {n}"
        )));
    }
    let dist: Vec<Vec<f64>> = points
        .iter()
        .map(|x| points.iter().map(|y| space.distance(x, y).to_f64()).collect())
        .collect();
    let mut delta = 0.0f64;
    let mut gp = vec![0.0f64; n * n];
    for o in 0..n {
        for x in 0..n {
            for y in 0..n {
                gp[x * n + y] = 0.5 * (dist[o][x] + dist[o][y] - dist[x][y]);
            }
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = gp[x * n + y];
                for z in 0..n {
                    let excess = gp[x * n + z].min(gp[z * n + y]) - lhs;
                    if excess > delta {
                        delta = excess;
                    }
                }
            }
        }
    }
    Ok(DeltaEstimate {
        delta,
        sample_size: n,
        exhaustive,
    })
}

/// `b_x^o(y) = d(x,y) − d(x,o)`.
pub fn busemann_value<S: MetricSpace>(
    space: &S,
    x: &S::Point,
    y: &S::Point,
    o: &S::Point,
) -> ExactReal {
    space.distance(x, y) - space.distance(x, o)
}

/// `β(g, x) = b_x(g⁻¹·o)` with `o` the basepoint of the action.
pub fn busemann_cocycle<S: IsometricAction>(space: &S, g: &S::Element, x: &S::Point) -> ExactReal {
    let o = space.basepoint();
    let g_inv_o = space.act(&space.inverse(g), &o);
    busemann_value(space, x, &g_inv_o, &o)
}

/// Residual `β(g₁g₂, x) − β(g₁, g₂·x) − β(g₂, x)`; zero for an exact backend.
pub fn cocycle_residual<S: IsometricAction>(
    space: &S,
    g1: &S::Element,
    g2: &S::Element,
    x: &S::Point,
) -> ExactReal {
    let lhs = busemann_cocycle(space, &space.compose(g1, g2), x);
    let rhs = busemann_cocycle(space, g1, &space.act(g2, x)) + busemann_cocycle(space, g2, x);
    lhs - rhs
}

#[derive(Clone, Debug)]
pub struct Shadow<P> {
    pub viewpoint: P,
    pub center: P,
    pub radius: f64,
}

/// `y ∈ S_o(x, R)` iff `(y|o)_x ≤ R`.
pub fn in_shadow<S: MetricSpace>(space: &S, shadow: &Shadow<S::Point>, y: &S::Point) -> bool {
    gromov_product(space, &shadow.center, y, &shadow.viewpoint).to_f64() <= shadow.radius
}

/// Certified lower bound `d(o,go) − 2(go|g⁻¹o)_o`, returned only when
/// `d(o,go) ≥ 2(go|g⁻¹o)_o + margin`. The margin is the caller's stand-in
/// for the unquantified hyperbolicity constant.
pub fn loxodromic_lower_bound<S: IsometricAction>(
    space: &S,
    g: &S::Element,
    o: &S::Point,
    margin: f64,
) -> Option<f64> {
    let go = space.act(g, o);
    let g_inv_o = space.act(&space.inverse(g), o);
    let displacement = space.distance(o, &go);
    let overlap = &gromov_product(space, o, &go, &g_inv_o) * 2;
    let bound = &displacement - &overlap;
    (bound.to_f64() >= margin && bound.signum() > 0).then(|| bound.to_f64())
}

#[derive(Clone, Debug)]
pub struct TranslationLengthReport<E> {
    pub element: E,
    pub lower_bound: Option<f64>,
    pub stable_estimate: f64,
    pub iterations: usize,
    /// `max_{n ≤ N} |d(gⁿo,o)/n − stable_estimate|`.
    pub max_deviation: f64,
    pub profile: Vec<f64>,
}

/// `d(gᴺ·o, o)/N` with the full profile `d(gⁿo, o)` for `n = 1..=N`.
pub fn stable_translation_length<S: IsometricAction>(
    space: &S,
    g: &S::Element,
    o: &S::Point,
    iterations: usize,
    margin: f64,
) -> Result<TranslationLengthReport<S::Element>> {
    if iterations == 0 {
        return Err(Error::InvalidInput("iteration count must be ≥ 1".into()));
    }
    let mut profile = Vec::with_capacity(iterations);
    let mut point = o.clone();
    for _ in 0..iterations {
        point = space.act(g, &point);
        profile.push(space.distance(&point, o).to_f64());
    }
    let stable_estimate = profile[iterations - 1] / iterations as f64;
    let max_deviation = profile
        .iter()
        .enumerate()
        .map(|(i, d)| (d / (i + 1) as f64 - stable_estimate).abs())
        .fold(0.0, f64::max);
    Ok(TranslationLengthReport {
        element: g.clone(),
        lower_bound: loxodromic_lower_bound(space, g, o, margin),
        stable_estimate,
        iterations,
        max_deviation,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::models::{IntegerLine, LatticeGrid, RegularTree};
    use super::*;

    #[test]
    fn gromov_product_from_distances() {
        let line = IntegerLine;
        assert_eq!(gromov_product(&line, &0, &3, &3), ExactReal::from_integer(3));
        // o=0, x=3, y=-4 on the line: d(x,y)=7.
        assert_eq!(gromov_product(&line, &0, &3, &-4), ExactReal::zero());
        let grid = LatticeGrid;
        // d(o,x)=3, d(o,y)=4, d(x,y)=5 → 1
        let (o, x, y) = ((0, 0), (3, 0), (1, 3));
        assert_eq!(grid.distance(&x, &y), ExactReal::from_integer(5));
        let tri = gromov_product(&grid, &o, &x, &y);
        assert_eq!(tri, ExactReal::from_integer(1));
    }

    #[test]
    fn delta_needs_four_points() {
        assert!(estimate_delta(&IntegerLine, &[0, 1, 2], true).is_err());
        let same = estimate_delta(&IntegerLine, &[5, 5, 5, 5], true).unwrap();
        assert_eq!(same.delta, 0.0);
    }

    #[test]
    fn line_ball_is_zero_hyperbolic() {
        let ball: Vec<i64> = (-5..=5).collect();
        assert_eq!(estimate_delta(&IntegerLine, &ball, true).unwrap().delta, 0.0);
    }

    #[test]
    fn grid_delta_grows() {
        let mut last = -1.0;
        for r in 2..=6 {
            let ball = LatticeGrid::ball(r);
            let d = estimate_delta(&LatticeGrid, &ball, true).unwrap().delta;
            assert!(d >= last, "radius {r}: {d} < {last}");
            last = d;
        }
        assert!(last >= 4.0);
    }

    #[test]
    fn busemann_examples() {
        let line = IntegerLine;
        assert_eq!(busemann_value(&line, &10, &0, &0), ExactReal::zero());
        assert_eq!(busemann_value(&line, &10, &10, &0), ExactReal::from_integer(-10));
        assert_eq!(busemann_value(&line, &10, &3, &0), ExactReal::from_integer(-3));
        assert_eq!(busemann_cocycle(&line, &0, &7), ExactReal::zero());
        assert_eq!(busemann_cocycle(&line, &2, &100), ExactReal::from_integer(2));
    }

    #[test]
    fn shadow_edge_cases() {
        let line = IntegerLine;
        let s = Shadow { viewpoint: 0i64, center: 4i64, radius: 0.0 };
        assert!(in_shadow(&line, &s, &4));
        assert!(!in_shadow(&line, &s, &0));
        let s4 = Shadow { radius: 4.0, ..s };
        assert!(in_shadow(&line, &s4, &0));
    }

    #[test]
    fn lower_bound_examples() {
        let line = IntegerLine;
        assert_eq!(loxodromic_lower_bound(&line, &5, &0, 0.0), Some(5.0));
        assert_eq!(loxodromic_lower_bound(&line, &0, &0, 0.0), None);
        // Order-2 generator of the 3-regular tree swaps o with a neighbour.
        let tree = RegularTree::new(3);
        let a = vec![0u8];
        assert_eq!(loxodromic_lower_bound(&tree, &a, &Vec::new(), 0.0), None);
    }

    #[test]
    fn stable_length_examples() {
        let r = stable_translation_length(&IntegerLine, &3, &0, 10, 0.0).unwrap();
        assert_eq!(r.stable_estimate, 3.0);
        assert_eq!(r.max_deviation, 0.0);
        let tree = RegularTree::new(3);
        let r = stable_translation_length(&tree, &vec![1u8], &Vec::new(), 40, 0.0).unwrap();
        assert!(r.stable_estimate <= 1.0 / 40.0 + 1e-12);
        assert!(stable_translation_length(&IntegerLine, &3, &0, 0, 0.0).is_err());
    }
}

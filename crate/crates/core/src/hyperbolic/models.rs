//! Small reference spaces: the integer line, the ℓ¹ grid ℤ² and regular
//! trees realised as Cayley graphs of free products of ℤ/2.

use std::collections::VecDeque;

use super::{IsometricAction, MetricSpace};
use crate::exact::ExactReal;

/// ℤ acted on by translations.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerLine;

impl MetricSpace for IntegerLine {
    type Point = i64;
    fn distance(&self, x: &i64, y: &i64) -> ExactReal {
        ExactReal::from_integer((x - y).abs())
    }
}

impl IsometricAction for IntegerLine {
    type Element = i64;
    fn basepoint(&self) -> i64 {
        0
    }
    fn identity(&self) -> i64 {
        0
    }
    fn compose(&self, g: &i64, h: &i64) -> i64 {
        g + h
    }
    fn inverse(&self, g: &i64) -> i64 {
        -g
    }
    fn act(&self, g: &i64, x: &i64) -> i64 {
        g + x
    }
}

/// ℤ² with the ℓ¹ metric, acted on by translations.
#[derive(Clone, Copy, Debug, Default)]
pub struct LatticeGrid;

impl LatticeGrid {
    /// All points at ℓ¹ distance ≤ `radius` from the origin.
    pub fn ball(radius: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for x in -radius..=radius {
            let rest = radius - x.abs();
            for y in -rest..=rest {
                out.push((x, y));
            }
        }
        out
    }
}

impl MetricSpace for LatticeGrid {
    type Point = (i64, i64);
    fn distance(&self, x: &(i64, i64), y: &(i64, i64)) -> ExactReal {
        ExactReal::from_integer((x.0 - y.0).abs() + (x.1 - y.1).abs())
    }
}

impl IsometricAction for LatticeGrid {
    type Element = (i64, i64);
    fn basepoint(&self) -> (i64, i64) {
        (0, 0)
    }
    fn identity(&self) -> (i64, i64) {
        (0, 0)
    }
    fn compose(&self, g: &(i64, i64), h: &(i64, i64)) -> (i64, i64) {
        (g.0 + h.0, g.1 + h.1)
    }
    fn inverse(&self, g: &(i64, i64)) -> (i64, i64) {
        (-g.0, -g.1)
    }
    fn act(&self, g: &(i64, i64), x: &(i64, i64)) -> (i64, i64) {
        (g.0 + x.0, g.1 + x.1)
    }
}

/// The `degree`-regular tree as the Cayley graph of `ℤ/2 ∗ ⋯ ∗ ℤ/2`.
/// Vertices are reduced words (no letter repeated twice in a row).
#[derive(Clone, Copy, Debug)]
pub struct RegularTree {
    degree: u8,
}

impl RegularTree {
    pub fn new(degree: u8) -> Self {
        assert!(degree >= 2, "a regular tree needs degree ≥ 2");
        Self { degree }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn multiply(a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut out = a.to_vec();
        for &letter in b {
            if out.last() == Some(&letter) {
                out.pop();
            } else {
                out.push(letter);
            }
        }
        out
    }

    pub fn ball(&self, radius: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        let mut queue = VecDeque::from([Vec::<u8>::new()]);
        while let Some(w) = queue.pop_front() {
            if w.len() == radius {
                continue;
            }
            for letter in 0..self.degree {
                if w.last() != Some(&letter) {
                    let mut next = w.clone();
                    next.push(letter);
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        out
    }

    pub fn neighbours(&self, w: &[u8]) -> Vec<Vec<u8>> {
        (0..self.degree).map(|l| Self::multiply(w, &[l])).collect()
    }
}

impl MetricSpace for RegularTree {
    type Point = Vec<u8>;
    fn distance(&self, x: &Vec<u8>, y: &Vec<u8>) -> ExactReal {
        let common = x.iter().zip(y).take_while(|(a, b)| a == b).count();
        ExactReal::from_integer((x.len() + y.len() - 2 * common) as i64)
    }
}

impl IsometricAction for RegularTree {
    type Element = Vec<u8>;
    fn basepoint(&self) -> Vec<u8> {
        Vec::new()
    }
    fn identity(&self) -> Vec<u8> {
        Vec::new()
    }
    fn compose(&self, g: &Vec<u8>, h: &Vec<u8>) -> Vec<u8> {
        Self::multiply(g, h)
    }
    fn inverse(&self, g: &Vec<u8>) -> Vec<u8> {
        g.iter().rev().copied().collect()
    }
    fn act(&self, g: &Vec<u8>, x: &Vec<u8>) -> Vec<u8> {
        Self::multiply(g, x)
    }
}

use super::lattice::{vector_distance_fast, LatticeClass};
use super::matrix::LaurentMatrix;
use crate::exact::ExactReal;
use crate::hyperbolic::{IsometricAction, MetricSpace};

/// The vertex set of the building of `SL₃(𝔽_q((t)))` with its CAT(0)
/// metric, acted on by left multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Building {
    pub q: u32,
}

impl Building {
    pub fn new(q: u32) -> Self {
        Self { q }
    }
}

impl MetricSpace for Building {
    type Point = LatticeClass;

    fn distance(&self, x: &LatticeClass, y: &LatticeClass) -> ExactReal {
        ExactReal::sqrt(vector_distance_fast(x, y).squared_length())
    }
}

impl IsometricAction for Building {
    type Element = LaurentMatrix;

    fn basepoint(&self) -> LatticeClass {
        LatticeClass::standard(self.q)
    }
    fn identity(&self) -> LaurentMatrix {
        LaurentMatrix::identity(self.q)
    }
    fn compose(&self, g: &LaurentMatrix, h: &LaurentMatrix) -> LaurentMatrix {
        g.mul(h)
    }
    fn inverse(&self, g: &LaurentMatrix) -> LaurentMatrix {
        g.inverse().expect("group elements have determinant 1")
    }
    fn act(&self, g: &LaurentMatrix, x: &LatticeClass) -> LatticeClass {
        x.act(g)
    }
}

//! Walk backends for each model space.

use super::engine::{Backend, Observation};
use crate::building::{certify_at, germ_from_transition, Germ, LatticeClass, LaurentMatrix, VertexFrame};
use crate::tree_flats::{chain_metric_dl, contraction_certificate, GroupWord, TreeFlatsMetric};

/// `ℤ` acting on itself by translation.
pub struct LineBackend;

impl Backend for LineBackend {
    type Element = i64;
    type State = i64;

    fn initial(&self) -> i64 {
        0
    }
    fn step(&self, s: &mut i64, g: &i64) {
        *s += g;
    }
    fn observe(&self, s: &i64, n: u64) -> Observation {
        Observation::scalar(n, s.unsigned_abs() as f64)
    }
}

/// `ℤ²` with the `ℓ¹` metric.
pub struct GridBackend;

impl Backend for GridBackend {
    type Element = (i64, i64);
    type State = (i64, i64);

    fn initial(&self) -> (i64, i64) {
        (0, 0)
    }
    fn step(&self, s: &mut (i64, i64), g: &(i64, i64)) {
        s.0 += g.0;
        s.1 += g.1;
    }
    fn observe(&self, s: &(i64, i64), n: u64) -> Observation {
        Observation::scalar(n, (s.0.unsigned_abs() + s.1.unsigned_abs()) as f64)
    }
}

/// `ℤ² ∗ ℤ` on the tree of flats.
pub struct TreeFlatsBackend {
    pub metric: TreeFlatsMetric,
    /// `(L, K)` for the contraction certificate, if certification is wanted.
    pub certify: Option<(u32, u32)>,
}

impl TreeFlatsBackend {
    pub fn word() -> Self {
        Self { metric: TreeFlatsMetric::Word, certify: None }
    }

    pub fn certifying(level: u32, max_power: u32) -> Self {
        Self { metric: TreeFlatsMetric::Word, certify: Some((level, max_power)) }
    }
}

impl Backend for TreeFlatsBackend {
    type Element = GroupWord;
    type State = GroupWord;

    fn initial(&self) -> GroupWord {
        GroupWord::identity()
    }
    fn step(&self, s: &mut GroupWord, g: &GroupWord) {
        *s = s.multiply(g);
    }
    fn observe(&self, s: &GroupWord, n: u64) -> Observation {
        let d = match self.metric {
            TreeFlatsMetric::Word => s.length(),
            TreeFlatsMetric::Chain { level } => chain_metric_dl(&GroupWord::identity(), s, level),
        };
        let mut obs = Observation::scalar(n, d as f64);
        if let Some((level, k)) = self.certify {
            obs.certified = Some(!s.is_identity() && contraction_certificate(s, level, k).unwrap_or(false));
        }
        obs
    }
}

/// `Zₙ` together with its exact inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingState {
    pub z: LaurentMatrix,
    pub z_inv: LaurentMatrix,
}

/// `SL₃(𝔽_q[t, t⁻¹])` on the building. The walk moves the start vertex
/// `o′`; displacement and vector distance are measured from `o′`, germs
/// and certificates at the observer vertex `o`.
pub struct BuildingBackend {
    pub q: u32,
    pub start: VertexFrame,
    pub observer: VertexFrame,
    pub certify: bool,
}

impl BuildingBackend {
    pub fn standard(q: u32) -> Self {
        let o = VertexFrame::new(LatticeClass::standard(q));
        Self { q, start: o.clone(), observer: o, certify: false }
    }

    pub fn with_start(mut self, start: LatticeClass) -> Self {
        self.start = VertexFrame::new(start);
        self
    }

    pub fn with_observer(mut self, observer: LatticeClass) -> Self {
        self.observer = VertexFrame::new(observer);
        self
    }

    pub fn certifying(mut self, on: bool) -> Self {
        self.certify = on;
        self
    }

    /// Germ at the observer of the segment towards `z·o′`.
    pub fn germ(&self, z: &LaurentMatrix, z_inv: &LaurentMatrix) -> Option<Germ> {
        let (m, m_inv, dv) = self.observer.relative(&self.start, z, z_inv);
        let d = crate::building::VectorDistance::from_divisors(crate::building::lattice::divisors_from_inverse_pair(&m, &m_inv, dv));
        germ_from_transition(&m, &m_inv, d)
    }
}

impl Backend for BuildingBackend {
    type Element = LaurentMatrix;
    type State = BuildingState;

    fn initial(&self) -> BuildingState {
        BuildingState { z: LaurentMatrix::identity(self.q), z_inv: LaurentMatrix::identity(self.q) }
    }

    fn step(&self, s: &mut BuildingState, g: &LaurentMatrix) {
        let g_inv = g.inverse().expect("steps lie in SL₃");
        s.z = s.z.mul(g);
        s.z_inv = g_inv.mul(&s.z_inv);
    }

    fn observe(&self, s: &BuildingState, n: u64) -> Observation {
        let v = self.start.distance_to(&self.start, &s.z, &s.z_inv);
        let flag_id = match self.germ(&s.z, &s.z_inv) {
            Some(Germ::Chamber(f)) => Some(f.id()),
            _ => None,
        };
        Observation {
            n,
            displacement: v.length(),
            a: Some(v.a),
            b: Some(v.b),
            flag_id,
            certified: self.certify.then(|| certify_at(&s.z, &s.z_inv, &self.observer)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::engine::{run_walks, WalkConfig};
    use crate::walk::measure::{building_diagonal, building_elementary, line_translation};

    #[test]
    fn deterministic_line() {
        let t = run_walks(&LineBackend, &line_translation(), &WalkConfig::new(50, 3, 0)).unwrap();
        for tr in &t {
            for c in &tr.checkpoints {
                assert_eq!(c.displacement, c.n as f64);
            }
        }
    }

    #[test]
    fn diagonal_walk_goes_straight() {
        let b = BuildingBackend::standard(2).certifying(true);
        let t = run_walks(&b, &building_diagonal(2), &WalkConfig::new(16, 1, 0)).unwrap();
        for c in &t[0].checkpoints {
            assert_eq!((c.a, c.b), (Some(c.n), Some(c.n)));
            assert_eq!(c.flag_id, Some(crate::building::Flag::standard(2).id()));
            assert_eq!(c.certified, Some(true));
        }
    }

    #[test]
    fn building_state_inverse_stays_exact() {
        let b = BuildingBackend::standard(3);
        let m = building_elementary(3).unwrap();
        let end = crate::walk::engine::replay(&b, &m, 1, 0, 40, |_, _| {});
        assert_eq!(end.z.mul(&end.z_inv), LaurentMatrix::identity(3));
    }
}

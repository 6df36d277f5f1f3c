//! Opposite-germ certificate for hyperbolic elements of `SL₃`.

use serde::{Deserialize, Serialize};

use super::flag::{flags_opposite, Germ};
use super::lattice::{divisors_from_inverse_pair, vector_distance_fast, LatticeClass, VectorDistance, VertexFrame};
use super::matrix::LaurentMatrix;
use super::sector::{germ_flag, germ_from_transition};
use crate::{Error, Result};

/// Everything the certificate looked at, for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub forward: VectorDistance,
    pub backward: VectorDistance,
    pub forward_flag: Option<usize>,
    pub backward_flag: Option<usize>,
    pub certified: bool,
}

pub fn is_regular_segment(x: &LatticeClass, y: &LatticeClass) -> Result<bool> {
    if x == y {
        return Err(Error::InvalidInput("degenerate segment".into()));
    }
    Ok(vector_distance_fast(x, y).is_regular())
}

fn require_sl3(g: &LaurentMatrix) -> Result<()> {
    if !g.is_sl3() {
        return Err(Error::InvalidInput(format!("determinant {} is not 1", g.det())));
    }
    Ok(())
}

/// Full report of the opposite-germ test for `g` at `o`.
pub fn certificate_report(g: &LaurentMatrix, o: &LatticeClass) -> Result<CertificateReport> {
    require_sl3(g)?;
    let g_inv = g.inverse()?;
    let fwd = o.act(g);
    let bwd = o.act(&g_inv);
    let forward = vector_distance_fast(o, &fwd);
    let backward = vector_distance_fast(o, &bwd);
    let mut report = CertificateReport { forward, backward, forward_flag: None, backward_flag: None, certified: false };
    if forward.is_zero() {
        return Ok(report);
    }
    let f1 = germ_flag(o, &fwd)?;
    let f2 = germ_flag(o, &bwd)?;
    if let (Germ::Chamber(a), Germ::Chamber(b)) = (f1, f2) {
        report.forward_flag = Some(a.id());
        report.backward_flag = Some(b.id());
        report.certified = flags_opposite(&a, &b)?;
    }
    Ok(report)
}

/// True certifies `g` hyperbolic: `o` then lies on an axis of `g`.
pub fn hyperbolic_certificate(g: &LaurentMatrix, o: &LatticeClass) -> Result<bool> {
    Ok(certificate_report(g, o)?.certified)
}

/// The same test from the transition `M = H_o⁻¹·g·H_o` and its exact
/// inverse, using leading terms only.
pub fn certificate_from_transition(m: &LaurentMatrix, m_inv: &LaurentMatrix) -> bool {
    let forward = VectorDistance::from_divisors(divisors_from_inverse_pair(m, m_inv, 0));
    if !forward.is_regular() {
        return false;
    }
    let backward = forward.swap();
    match (germ_from_transition(m, m_inv, forward), germ_from_transition(m_inv, m, backward)) {
        (Some(Germ::Chamber(a)), Some(Germ::Chamber(b))) => flags_opposite(&a, &b).unwrap_or(false),
        _ => false,
    }
}

/// Fast certificate for `z` (with exact inverse) at the vertex `o`.
pub fn certify_at(z: &LaurentMatrix, z_inv: &LaurentMatrix, o: &VertexFrame) -> bool {
    let (m, m_inv, _) = o.relative(o, z, z_inv);
    certificate_from_transition(&m, &m_inv)
}

/// `d(gⁿo, o)` for `n = 1..=n_max`.
pub fn displacement_profile(g: &LaurentMatrix, o: &LatticeClass, n_max: usize) -> Result<Vec<f64>> {
    if n_max == 0 {
        return Err(Error::InvalidInput("profile length must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(n_max);
    let mut x = o.clone();
    for _ in 0..n_max {
        x = x.act(g);
        out.push(vector_distance_fast(o, &x).length());
    }
    Ok(out)
}

/// `d(gⁿo, o)` for `n = 1..=n_max` from the transition `M = H_o⁻¹gH_o`
/// and its inverse, by repeated multiplication without canonical forms.
pub fn displacement_profile_transition(m: &LaurentMatrix, m_inv: &LaurentMatrix, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max);
    let mut p = m.clone();
    let mut p_inv = m_inv.clone();
    for k in 1..=n_max {
        if k > 1 {
            p = p.mul(m);
            p_inv = p_inv.mul(m_inv);
        }
        out.push(VectorDistance::from_divisors(divisors_from_inverse_pair(&p, &p_inv, 0)).length());
    }
    out
}

/// Relative deviation `|profile(2N)/2 − profile(N)| / profile(N)`.
pub fn linearity_deviation(profile: &[f64]) -> Option<f64> {
    let n2 = profile.len();
    if n2 < 2 || n2 % 2 != 0 {
        return None;
    }
    let (a, b) = (profile[n2 / 2 - 1], profile[n2 - 1]);
    (a > 0.0).then(|| (b / 2.0 - a).abs() / a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::poly::LaurentPoly;

    #[test]
    fn certificate_examples() {
        let q = 2;
        let o = LatticeClass::standard(q);
        let g = LaurentMatrix::monomial_diagonal(q, [1, 0, -1]);
        let r = certificate_report(&g, &o).unwrap();
        assert_eq!(r.forward, VectorDistance::new(1, 1));
        assert_eq!(r.backward, VectorDistance::new(1, 1));
        assert!(r.certified);
        let e = LaurentMatrix::elementary(q, 0, 1, LaurentPoly::one(q));
        assert!(!hyperbolic_certificate(&e, &o).unwrap());
        let e = LaurentMatrix::elementary(q, 0, 1, LaurentPoly::monomial(q, 1, -1));
        assert!(e.mul(&e) == LaurentMatrix::identity(q));
        assert!(!hyperbolic_certificate(&e, &o).unwrap());
        let prof = displacement_profile(&e, &o, 6).unwrap();
        for (i, d) in prof.iter().enumerate() {
            let want = if i % 2 == 0 { 3f64.sqrt() } else { 0.0 };
            assert!((d - want).abs() < 1e-12);
        }
        assert!(hyperbolic_certificate(&LaurentMatrix::monomial_diagonal(q, [1, 0, 0]), &o).is_err());
    }

    #[test]
    fn diagonal_profile_is_linear() {
        let q = 3;
        let g = LaurentMatrix::monomial_diagonal(q, [1, 0, -1]);
        let prof = displacement_profile(&g, &LatticeClass::standard(q), 5).unwrap();
        let o = VertexFrame::new(LatticeClass::standard(q));
        assert!(certify_at(&g, &g.inverse().unwrap(), &o));
        let fast = displacement_profile_transition(&g, &g.inverse().unwrap(), 5);
        assert_eq!(fast, prof);
        let long = displacement_profile_transition(&g, &g.inverse().unwrap(), 20);
        assert_eq!(linearity_deviation(&long), Some(0.0));
        for (i, d) in prof.iter().enumerate() {
            assert!((d - (i + 1) as f64 * 3f64.sqrt()).abs() < 1e-12);
        }
    }
}

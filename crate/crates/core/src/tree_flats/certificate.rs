use super::chain::chain_compatible;
use super::wall::{walls_separating, Wall};
use super::word::GroupWord;
use crate::{Error, Result};

/// A skewering witness: `gⁿ·h⁺ ⊊ h⁺` for the halfspace `h⁺` of `wall`
/// facing away from the basepoint, with `wall` and `image = gⁿ·wall`
/// disjoint and `L`-separated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeweringWitness {
    pub wall: Wall,
    pub power: u32,
    pub image: Wall,
}

/// Searches the walls crossed by `[e, gᴷ]` for a skewering witness with
/// power `n ≤ K`. A witness certifies that `g` is contracting.
///
/// Enlarging `K` only adds walls and powers to the search, so a certified
/// element stays certified.
pub fn find_skewering(g: &GroupWord, level: u32, max_power: u32) -> Result<Option<SkeweringWitness>> {
    if g.is_identity() {
        return Err(Error::InvalidInput("the identity is not contracting".into()));
    }
    if max_power < 2 {
        return Err(Error::InvalidInput(format!("power bound must be ≥ 2, got {max_power}")));
    }
    let e = GroupWord::identity();
    let powers: Vec<GroupWord> = (0..=max_power).map(|n| g.power(n)).collect();
    let end = &powers[max_power as usize];
    for wall in walls_separating(&e, end) {
        let (lower, upper) = wall.dual_edge();
        // Orient so `upper` lies in the halfspace away from e.
        let (near, far) = if wall.side(&e) == wall.side(&lower) {
            (lower, upper)
        } else {
            (upper, lower)
        };
        let far_side = wall.side(&far);
        for (n, gn) in powers.iter().enumerate().skip(1) {
            let image = wall.translate(gn);
            if !chain_compatible(&wall, &image, level) {
                continue;
            }
            // gⁿh⁺ ⊊ h⁺: the image wall lies in h⁺, and h's edge is on the
            // side of the image that faces back towards gⁿ·near.
            let moved_near = gn.multiply(&near);
            let moved_far = gn.multiply(&far);
            let image_in_h = wall.side(&moved_near) == far_side && wall.side(&moved_far) == far_side;
            let h_behind_image = image.side(&far) == image.side(&moved_near);
            if image_in_h && h_behind_image {
                return Ok(Some(SkeweringWitness { wall, power: n as u32, image }));
            }
        }
    }
    Ok(None)
}

pub fn contraction_certificate(g: &GroupWord, level: u32, max_power: u32) -> Result<bool> {
    Ok(find_skewering(g, level, max_power)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_examples() {
        assert!(contraction_certificate(&GroupWord::b(1), 0, 3).unwrap());
        assert!(!contraction_certificate(&GroupWord::a(1, 0), 0, 10).unwrap());
        assert!(!contraction_certificate(&GroupWord::a(1, 0), 4, 10).unwrap());
        let g: GroupWord = "A(1,0).B(1)".parse().unwrap();
        assert!(contraction_certificate(&g, 0, 4).unwrap());
        assert!(contraction_certificate(&GroupWord::identity(), 0, 4).is_err());
        assert!(contraction_certificate(&g, 0, 1).is_err());
    }

    #[test]
    fn b_witness_is_two_steps_out() {
        let w = find_skewering(&GroupWord::b(1), 0, 3).unwrap().unwrap();
        assert_eq!(w.power, 2);
        assert_eq!(w.image.offset - w.wall.offset, 2);
    }

    #[test]
    fn conjugates_of_flat_elements_are_not_certified() {
        let h: GroupWord = "B(2).A(1,1)".parse().unwrap();
        let g = h.multiply(&GroupWord::a(3, -1)).multiply(&h.inverse());
        assert!(!contraction_certificate(&g, 0, 6).unwrap());
        let k = h.multiply(&GroupWord::b(1)).multiply(&h.inverse());
        assert!(contraction_certificate(&k, 0, 4).unwrap());
    }

    #[test]
    fn monotone_in_power_bound() {
        for s in ["B(1)", "A(1,0).B(1)", "B(1).A(0,2).B(-1)", "A(2,1)", "B(3).A(1,0).B(-3)"] {
            let g: GroupWord = s.parse().unwrap();
            let mut seen = false;
            for k in 2..8 {
                let now = contraction_certificate(&g, 0, k).unwrap();
                assert!(!seen || now, "{s} lost its certificate at K={k}");
                seen |= now;
            }
        }
    }
}

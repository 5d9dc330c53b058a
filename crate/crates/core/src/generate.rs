//! Seeded random instances for the verification suites.
//!
//! Coverings are generated from branch permutations whose product is the
//! identity; such data always describes an honest covering, so the derived
//! genus of the source curve and of the Galois closure both come out
//! integral. Bundles stay small on purpose: ranks up to six, a handful of
//! marked points, weight denominators up to twelve, so that thousands of
//! trials run quickly while still hitting carry and merge edge cases.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bundle::{ParabolicBundle, SemistableAtom};
use crate::covering::{covering_from_monodromy, CoveringMap};
use crate::curve::{MarkedCurve, PointId};
use crate::perm::Permutation;
use crate::rational::Rat;
use crate::weights::WeightMultiset;
use std::collections::BTreeMap;

pub const MAX_RANK: u64 = 6;
pub const MAX_MARKED_POINTS: usize = 3;
pub const MAX_WEIGHT_DENOMINATOR: u64 = 12;
pub const DEGREE_SPAN: i64 = 4;

/// A curve named `name` with genus `genus` and up to `max_points` marked
/// points named `p1`, `p2`, ...
pub fn random_curve(
    rng: &mut impl Rng,
    name: &str,
    genus: u32,
    max_points: usize,
) -> MarkedCurve {
    let count = rng.random_range(0..=max_points);
    let points = (1..=count).map(|i| PointId::from(format!("p{i}")));
    MarkedCurve::new(name, genus, points).expect("generated point names are distinct")
}

fn random_nonzero_weight(rng: &mut impl Rng) -> Rat {
    let q = rng.random_range(2..=MAX_WEIGHT_DENOMINATOR);
    let p = rng.random_range(1..q);
    Rat::new(p as i64, q as i64).expect("denominator is nonzero")
}

fn random_multiset(rng: &mut impl Rng, rank: u64) -> WeightMultiset {
    let pairs: Vec<(Rat, u64)> = (0..rank)
        .map(|_| {
            if rng.random_bool(0.45) {
                (random_nonzero_weight(rng), 1)
            } else {
                (Rat::zero(), 1)
            }
        })
        .collect();
    WeightMultiset::new(pairs).expect("generated weights lie in range")
}

/// A bundle with full atom data on `curve`: up to four semistable atoms,
/// total rank at most [`MAX_RANK`], underlying degrees in
/// `[-DEGREE_SPAN, DEGREE_SPAN]`, random weights at every marked point.
pub fn random_bundle(rng: &mut impl Rng, curve: &MarkedCurve) -> ParabolicBundle {
    let atom_count = rng.random_range(1..=4u64);
    let rank_cap = (MAX_RANK / atom_count).max(1);
    let atoms = (0..atom_count)
        .map(|_| {
            let rank = rng.random_range(1..=rank_cap);
            let degree = rng.random_range(-DEGREE_SPAN..=DEGREE_SPAN);
            let local: BTreeMap<PointId, WeightMultiset> = curve
                .points()
                .map(|p| (p.clone(), random_multiset(rng, rank)))
                .collect();
            SemistableAtom::new(rank, degree, local).expect("generated atoms are valid")
        })
        .collect();
    ParabolicBundle::from_atoms(curve.clone(), atoms).expect("generated bundles are valid")
}

fn random_permutation(rng: &mut impl Rng, n: u64) -> Permutation {
    let mut images: Vec<u32> = (0..n as u32).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("a shuffle is a permutation")
}

/// Branch permutations whose composition product is the identity; the count
/// includes the balancing final entry.
fn product_one_monodromy(rng: &mut impl Rng, n: u64, branches: usize) -> Vec<Permutation> {
    let mut perms: Vec<Permutation> = (1..branches)
        .map(|_| random_permutation(rng, n))
        .collect();
    let product = perms
        .iter()
        .rev()
        .fold(Permutation::identity(n as u32), |acc, p| acc.compose(p));
    perms.push(product.inverse());
    perms
}

/// A covering of degree `2..=max_degree` with product-one monodromy over
/// two to six branch points. The target has genus zero when the
/// ramification allows it and genus one otherwise; the source genus comes
/// out of the Euler count.
pub fn random_covering(
    rng: &mut impl Rng,
    source_name: &str,
    target_name: &str,
    max_degree: u64,
) -> CoveringMap {
    let n = rng.random_range(2..=max_degree.max(2));
    for attempt in 0..400 {
        let branches = rng.random_range(2..=6usize);
        let perms = product_one_monodromy(rng, n, branches);
        // prefer a rational base; fall back to genus one, where any
        // product-one transitive datum satisfies the Euler count
        let genus = if attempt < 200 { 0 } else { 1 };
        if let Ok(c) = covering_from_monodromy(source_name, target_name, genus, perms) {
            return c;
        }
    }
    unreachable!("genus-one base accepts any transitive product-one monodromy")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::galois_closure_data;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generation_is_deterministic_per_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let ca = random_curve(&mut a, "X", 1, MAX_MARKED_POINTS);
        let cb = random_curve(&mut b, "X", 1, MAX_MARKED_POINTS);
        assert_eq!(ca, cb);
        assert_eq!(random_bundle(&mut a, &ca), random_bundle(&mut b, &cb));
        assert_eq!(
            random_covering(&mut a, "Y", "X", 5),
            random_covering(&mut b, "Y", "X", 5)
        );
    }

    #[test]
    fn generated_bundles_respect_the_profile() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0u32..200 {
            let curve = random_curve(&mut rng, "X", i % 3, MAX_MARKED_POINTS);
            let bundle = random_bundle(&mut rng, &curve);
            assert!(bundle.rank() >= 1 && bundle.rank() <= MAX_RANK);
            assert!(bundle.atoms().unwrap().len() <= 4);
        }
    }

    #[test]
    fn generated_coverings_validate_and_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..60 {
            let c = random_covering(&mut rng, "Y", "X", 4);
            assert!(c.degree() >= 2 && c.degree() <= 4);
            assert!(c.monodromy().is_some());
            // product-one monodromy keeps the closure genus integral
            let closure = galois_closure_data(&c).unwrap();
            assert_eq!(
                closure.group_order(),
                closure.stabilizer_order() * c.degree() as usize
            );
        }
    }

    #[test]
    fn product_one_invariant_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let n = rng.random_range(2..=6u64);
            let branches = rng.random_range(2..=6usize);
            let perms = product_one_monodromy(&mut rng, n, branches);
            assert_eq!(perms.len(), branches);
            let product = perms
                .iter()
                .rev()
                .fold(Permutation::identity(n as u32), |acc, p| acc.compose(p));
            assert!(product.is_identity());
        }
    }
}

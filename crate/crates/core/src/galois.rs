//! Galois closure of a branched covering and the induced decomposition of a
//! direct image.
//!
//! The closure is computed from branch permutations. Sheets of the closure
//! covering `h: Z -> X` are the elements of the monodromy group `Gamma`,
//! listed in canonical order with the identity first; the monodromy of `h`
//! over a branch point is left multiplication by the branch permutation,
//! which acts freely, so every point of `Z` over that branch point has
//! ramification index equal to the permutation's order. The intermediate
//! covering `g: Z -> Y` sends the orbit of `gamma` to the sheet `gamma(0)`;
//! its fibers are read off the cycles of the branch permutation.
//!
//! Deck transformations of `h` act by right multiplication, so they fix
//! every left coset of the stabilizer `G` of sheet `0` and permute the
//! points of `Z`. Summing deck pullbacks over a transversal of the left
//! cosets reconstructs the pullback of the direct image; the verifier checks
//! that identity rank for rank, degree for degree, and spectrum for
//! spectrum, next to the regular variant that sums over the whole group.

use std::collections::{BTreeMap, BTreeSet};

use crate::bundle::ParabolicBundle;
use crate::covering::{CoveringMap, FiberProfile, RamifiedPoint};
use crate::curve::{MarkedCurve, PointId};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::Rat;
use crate::transport::{direct_image, pullback};

/// Bound on monodromy group enumeration; callers can lower or raise it.
pub const DEFAULT_GROUP_CAP: usize = 100_000;

/// A finite permutation group, stored as the sorted list of its elements
/// with the identity first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermutationGroup {
    n: u32,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    /// Closes `gens` under composition. No generators yields the trivial
    /// group. Fails once more than `cap` elements have been found.
    pub fn closure(n: u32, gens: &[Permutation], cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadPermutation {
                detail: "permutation group on zero sheets".into(),
            });
        }
        for g in gens {
            if g.n() != n {
                return Err(Error::BadPermutation {
                    detail: format!("generator acts on {} sheets, expected {}", g.n(), n),
                });
            }
        }
        let mut seen = BTreeSet::new();
        seen.insert(Permutation::identity(n));
        let mut queue = vec![Permutation::identity(n)];
        while let Some(p) = queue.pop() {
            for g in gens {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    if seen.len() > cap {
                        return Err(Error::GroupCapExceeded { cap });
                    }
                    queue.push(q);
                }
            }
        }
        Ok(Self {
            n,
            elements: seen.into_iter().collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &Permutation {
        &self.elements[index]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index_of(p).is_some()
    }
}

/// Per branch point of the base: the covering data of `Z` over it. Points
/// of `Z` are orbits of left multiplication by the branch permutation and
/// are named after the smallest element index they contain.
#[derive(Clone, Debug)]
struct BranchOrbits {
    order: u64,
    /// element index -> smallest element index in its orbit
    orbit_min: Vec<usize>,
    /// smallest element index -> point of `Z`
    point_of: BTreeMap<usize, PointId>,
}

/// The Galois closure tower of a covering `f: Y -> X` with monodromy: the
/// closure curve `Z` with `h: Z -> X` and `g: Z -> Y` such that `h` is the
/// composite `f` after `g`, plus the group data that drives deck
/// transformations and coset counts.
#[derive(Clone, Debug)]
pub struct GaloisClosure {
    f: CoveringMap,
    group: PermutationGroup,
    stabilizer: Vec<usize>,
    transversal: Vec<usize>,
    z_curve: MarkedCurve,
    h: CoveringMap,
    g: CoveringMap,
    branches: Vec<BranchOrbits>,
    f_is_galois: bool,
}

pub fn galois_closure_data(f: &CoveringMap) -> Result<GaloisClosure> {
    galois_closure_data_with_cap(f, DEFAULT_GROUP_CAP)
}

pub fn galois_closure_data_with_cap(f: &CoveringMap, cap: usize) -> Result<GaloisClosure> {
    let perms = f.monodromy().ok_or(Error::MonodromyRequired)?;
    if perms.is_empty() {
        return Err(Error::EmptyMonodromy);
    }
    let n_sheets = perms[0].n();
    let group = PermutationGroup::closure(n_sheets, perms, cap)?;
    let order = group.order();

    let stabilizer: Vec<usize> = (0..order)
        .filter(|&i| group.element(i).apply(0) == 0)
        .collect();
    // transitivity gives one left coset per sheet
    assert_eq!(
        order,
        n_sheets as usize * stabilizer.len(),
        "orbit-stabilizer must balance on a validated covering"
    );

    // lex-least representative of each left coset; elements of one coset
    // share the sheet gamma(0), and the scan is in sorted order
    let mut rep_of_sheet: Vec<Option<usize>> = vec![None; n_sheets as usize];
    for i in 0..order {
        let sheet = group.element(i).apply(0) as usize;
        if rep_of_sheet[sheet].is_none() {
            rep_of_sheet[sheet] = Some(i);
        }
    }
    let mut transversal: Vec<usize> = rep_of_sheet
        .into_iter()
        .map(|r| r.expect("transitive action reaches every sheet"))
        .collect();
    transversal.sort_unstable();

    // f is Galois exactly when the stabilizer is normal; checking the
    // generators suffices because conjugation by each is injective on a
    // finite subgroup
    let stab_set: BTreeSet<usize> = stabilizer.iter().copied().collect();
    let f_is_galois = perms.iter().all(|s| {
        let s_inv = s.inverse();
        stabilizer.iter().all(|&t| {
            let conj = s.compose(group.element(t)).compose(&s_inv);
            group
                .index_of(&conj)
                .is_some_and(|i| stab_set.contains(&i))
        })
    });

    // genus of Z by ramification bookkeeping over the closure covering
    let g_x = f.target().genus();
    let mut two_g_minus_two: i128 = order as i128 * (2 * g_x as i128 - 2);
    let mut branch_orders = Vec::with_capacity(perms.len());
    for s in perms {
        let ord = s.order();
        branch_orders.push(ord);
        two_g_minus_two += (order as i128 / ord as i128) * (ord as i128 - 1);
    }
    if two_g_minus_two % 2 != 0 || two_g_minus_two < -2 {
        return Err(Error::BadSourceGenus { two_g_minus_two });
    }
    let g_z = u32::try_from((two_g_minus_two + 2) / 2).map_err(|_| Error::BadSourceGenus {
        two_g_minus_two,
    })?;

    // orbits of left multiplication over each branch point
    let mut branches = Vec::with_capacity(perms.len());
    let mut z_points = Vec::new();
    let mut h_fibers = Vec::with_capacity(perms.len());
    let mut h_monodromy = Vec::with_capacity(perms.len());
    for (fiber, s) in f.fibers().iter().zip(perms) {
        let ord = s.order();
        let left: Vec<usize> = (0..order)
            .map(|i| {
                group
                    .index_of(&s.compose(group.element(i)))
                    .expect("group is closed under composition")
            })
            .collect();
        let mut orbit_min = vec![usize::MAX; order];
        let mut point_of = BTreeMap::new();
        let mut above = Vec::new();
        for start in 0..order {
            if orbit_min[start] != usize::MAX {
                continue;
            }
            let mut i = start;
            loop {
                orbit_min[i] = start;
                i = left[i];
                if i == start {
                    break;
                }
            }
            let point = PointId::from(format!("{}z{}", fiber.base().as_str(), start + 1));
            z_points.push(point.clone());
            point_of.insert(start, point.clone());
            above.push(RamifiedPoint { point, e: ord });
        }
        h_fibers.push(FiberProfile::new(fiber.base().clone(), above));
        h_monodromy.push(
            Permutation::from_images(left.iter().map(|&i| i as u32).collect())
                .expect("left multiplication permutes the group"),
        );
        branches.push(BranchOrbits {
            order: ord,
            orbit_min,
            point_of,
        });
    }

    let z_curve = MarkedCurve::new(
        format!("{}_closure", f.source().name()),
        g_z,
        z_points,
    )?;
    let h = CoveringMap::new(
        z_curve.clone(),
        f.target().clone(),
        order as u64,
        h_fibers,
        Some(h_monodromy),
    )?;

    // fibers of g: over the above point carried by cycle c of the branch
    // permutation sit the orbits whose sheet image lies in c, each with
    // index ord / len(c)
    let mut g_fibers = Vec::new();
    for ((fiber, s), branch) in f.fibers().iter().zip(perms).zip(&branches) {
        let cycles = s.cycles();
        debug_assert_eq!(cycles.len(), fiber.above().len());
        let mut cycle_of_sheet = vec![usize::MAX; n_sheets as usize];
        for (ci, c) in cycles.iter().enumerate() {
            for &sheet in c {
                cycle_of_sheet[sheet as usize] = ci;
            }
        }
        let mut grouped: Vec<Vec<RamifiedPoint>> = vec![Vec::new(); cycles.len()];
        for (&min, point) in &branch.point_of {
            let sheet = group.element(min).apply(0) as usize;
            let ci = cycle_of_sheet[sheet];
            grouped[ci].push(RamifiedPoint {
                point: point.clone(),
                e: branch.order / cycles[ci].len() as u64,
            });
        }
        for (ci, above) in grouped.into_iter().enumerate() {
            g_fibers.push(FiberProfile::new(fiber.above()[ci].point.clone(), above));
        }
    }
    let g = CoveringMap::new(
        z_curve.clone(),
        f.source().clone(),
        stabilizer.len() as u64,
        g_fibers,
        None,
    )?;

    Ok(GaloisClosure {
        f: f.clone(),
        group,
        stabilizer,
        transversal,
        z_curve,
        h,
        g,
        branches,
        f_is_galois,
    })
}

impl GaloisClosure {
    pub fn f(&self) -> &CoveringMap {
        &self.f
    }

    /// The closure covering `Z -> X`.
    pub fn h(&self) -> &CoveringMap {
        &self.h
    }

    /// The intermediate covering `Z -> Y`.
    pub fn g(&self) -> &CoveringMap {
        &self.g
    }

    pub fn z_curve(&self) -> &MarkedCurve {
        &self.z_curve
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub fn group_order(&self) -> usize {
        self.group.order()
    }

    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer.len()
    }

    pub fn stabilizer(&self) -> impl Iterator<Item = &Permutation> {
        self.stabilizer.iter().map(|&i| self.group.element(i))
    }

    /// Lex-least representatives of the left cosets of the stabilizer,
    /// identity first.
    pub fn transversal(&self) -> impl Iterator<Item = &Permutation> {
        self.transversal.iter().map(|&i| self.group.element(i))
    }

    pub fn transversal_size(&self) -> usize {
        self.transversal.len()
    }

    pub fn left_coset_count(&self) -> usize {
        self.transversal.len()
    }

    pub fn right_coset_count(&self) -> usize {
        let order = self.group.order();
        let mut seen = vec![false; order];
        let mut count = 0;
        for i in 0..order {
            if seen[i] {
                continue;
            }
            count += 1;
            for &t in &self.stabilizer {
                let j = self
                    .group
                    .index_of(&self.group.element(t).compose(self.group.element(i)))
                    .expect("group is closed under composition");
                seen[j] = true;
            }
        }
        count
    }

    pub fn f_is_galois(&self) -> bool {
        self.f_is_galois
    }

    /// The deck transformation of `h` given by right multiplication with
    /// `delta`, packaged as a degree-one self-covering of `Z`. The fiber
    /// over a point `Q` is the orbit `Q delta^{-1}`.
    pub fn deck_covering(&self, delta: &Permutation) -> Result<CoveringMap> {
        if !self.group.contains(delta) {
            return Err(Error::BadPermutation {
                detail: "deck transformation must come from the monodromy group".into(),
            });
        }
        let delta_inv = delta.inverse();
        let mut fibers = Vec::new();
        for branch in &self.branches {
            for (&min, point) in &branch.point_of {
                let moved = self
                    .group
                    .index_of(&self.group.element(min).compose(&delta_inv))
                    .expect("group is closed under composition");
                let preimage = branch.point_of[&branch.orbit_min[moved]].clone();
                fibers.push(FiberProfile::new(
                    point.clone(),
                    vec![RamifiedPoint {
                        point: preimage,
                        e: 1,
                    }],
                ));
            }
        }
        let monodromy = vec![Permutation::identity(1); fibers.len()];
        CoveringMap::new(
            self.z_curve.clone(),
            self.z_curve.clone(),
            1,
            fibers,
            Some(monodromy),
        )
    }
}

/// Rank and parabolic degree of two bundles that are asserted to agree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SideComparison {
    pub lhs_rank: u64,
    pub rhs_rank: u64,
    pub lhs_par_deg: Rat,
    pub rhs_par_deg: Rat,
    pub matches: bool,
}

impl SideComparison {
    fn of(lhs: &ParabolicBundle, rhs: &ParabolicBundle) -> Self {
        let lhs_rank = lhs.rank();
        let rhs_rank = rhs.rank();
        let lhs_par_deg = lhs.par_deg();
        let rhs_par_deg = rhs.par_deg();
        let matches = lhs_rank == rhs_rank && lhs_par_deg == rhs_par_deg;
        Self {
            lhs_rank,
            rhs_rank,
            lhs_par_deg,
            rhs_par_deg,
            matches,
        }
    }
}

/// Outcome of checking the closure decomposition identities on one bundle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionReport {
    pub gamma_order: usize,
    pub stabilizer_order: usize,
    pub transversal_size: usize,
    pub left_cosets: usize,
    pub right_cosets: usize,
    pub transversal_meets_stabilizer_trivially: bool,
    pub invariant_rank_matches: bool,
    /// Deck sum over the whole group against the closure-covering round
    /// trip of the pulled-back bundle.
    pub regular_side: SideComparison,
    /// Deck sum over the transversal against the closure pullback of the
    /// direct image.
    pub induced_side: SideComparison,
    pub spectra_match: bool,
    pub f_is_galois: bool,
    pub ok: bool,
}

/// Checks the decomposition identities for `bundle` on the source curve of
/// the closed covering: summing deck pullbacks over the whole group matches
/// the round trip through the closure covering, and summing over a left
/// coset transversal matches the closure pullback of the direct image,
/// including Harder-Narasimhan spectra.
pub fn verify_decomposition(
    closure: &GaloisClosure,
    bundle: &ParabolicBundle,
) -> Result<DecompositionReport> {
    let n = closure.f().degree();
    let z_full = closure.z_curve().clone();
    let gv = pullback(closure.g(), bundle)?.extended_to(&z_full)?;

    let deck_sum = |indices: &[usize]| -> Result<ParabolicBundle> {
        let mut acc: Option<ParabolicBundle> = None;
        for &i in indices {
            let deck = closure.deck_covering(closure.group.element(i))?;
            let term = pullback(&deck, &gv)?;
            acc = Some(match acc {
                None => term,
                Some(prev) => prev.direct_sum(&term)?,
            });
        }
        Ok(acc.expect("a group always has elements"))
    };

    let all: Vec<usize> = (0..closure.group_order()).collect();
    let regular_lhs = deck_sum(&all)?;
    let regular_rhs =
        pullback(closure.h(), &direct_image(closure.h(), &gv)?)?.extended_to(&z_full)?;
    let regular_side = SideComparison::of(&regular_lhs, &regular_rhs);

    let f_image = direct_image(closure.f(), bundle)?;
    let induced_lhs = deck_sum(&closure.transversal)?;
    let induced_rhs = pullback(closure.h(), &f_image)?.extended_to(&z_full)?;
    let induced_side = SideComparison::of(&induced_lhs, &induced_rhs);
    let spectra_match = induced_lhs.hn_spectrum() == induced_rhs.hn_spectrum();

    let left_cosets = closure.left_coset_count();
    let right_cosets = closure.right_coset_count();
    let stab_set: BTreeSet<usize> = closure.stabilizer.iter().copied().collect();
    let transversal_meets_stabilizer_trivially = closure
        .transversal
        .iter()
        .filter(|i| stab_set.contains(i))
        .eq([&0usize]);
    let invariant_rank_matches = bundle
        .rank()
        .checked_mul(n)
        .is_some_and(|r| r == f_image.rank());

    let ok = regular_side.matches
        && induced_side.matches
        && spectra_match
        && left_cosets == n as usize
        && right_cosets == n as usize
        && closure.transversal_size() == n as usize
        && transversal_meets_stabilizer_trivially
        && invariant_rank_matches;

    Ok(DecompositionReport {
        gamma_order: closure.group_order(),
        stabilizer_order: closure.stabilizer_order(),
        transversal_size: closure.transversal_size(),
        left_cosets,
        right_cosets,
        transversal_meets_stabilizer_trivially,
        invariant_rank_matches,
        regular_side,
        induced_side,
        spectra_match,
        f_is_galois: closure.f_is_galois(),
        ok,
    })
}

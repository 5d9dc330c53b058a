//! Finite branched coverings between marked curves, recorded combinatorially
//! as a degree plus the fiber profile over every listed base point.
//!
//! A covering validates on construction: fiber sums equal the degree, the
//! Riemann-Hurwitz count balances against the two genera, every marked point
//! of the target has a listed fiber, every marked point of the source lies
//! above one, and monodromy data (when present) acts transitively with cycle
//! types matching the listed profiles.

use std::collections::BTreeSet;

use crate::curve::{MarkedCurve, PointId};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One source point over a base point, with its ramification index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RamifiedPoint {
    pub point: PointId,
    pub e: u64,
}

/// All listed source points over one base point. The order of entries is
/// meaningful when monodromy is attached: entry `i` corresponds to the
/// permutation's `i`-th cycle, cycles sorted by least moved sheet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberProfile {
    base: PointId,
    above: Vec<RamifiedPoint>,
}

impl FiberProfile {
    pub fn new(base: PointId, above: Vec<RamifiedPoint>) -> Self {
        FiberProfile { base, above }
    }

    pub fn base(&self) -> &PointId {
        &self.base
    }

    pub fn above(&self) -> &[RamifiedPoint] {
        &self.above
    }

    fn ramification(&self) -> u64 {
        self.above.iter().map(|r| r.e - 1).sum()
    }
}

/// A finite branched covering between marked curves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoveringMap {
    source: MarkedCurve,
    target: MarkedCurve,
    degree: u64,
    fibers: Vec<FiberProfile>,
    monodromy: Option<Vec<Permutation>>,
}

impl CoveringMap {
    pub fn new(
        source: MarkedCurve,
        target: MarkedCurve,
        degree: u64,
        fibers: Vec<FiberProfile>,
        monodromy: Option<Vec<Permutation>>,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroCoveringDegree);
        }

        let mut bases = BTreeSet::new();
        let mut aboves = BTreeSet::new();
        for fiber in &fibers {
            if !bases.insert(fiber.base.clone()) {
                return Err(Error::DuplicateBase {
                    base: fiber.base.to_string(),
                });
            }
            if fiber.above.is_empty() {
                return Err(Error::EmptyFiber {
                    base: fiber.base.to_string(),
                });
            }
            let mut sum = 0u64;
            for r in &fiber.above {
                if r.e == 0 {
                    return Err(Error::ZeroRamification {
                        base: fiber.base.to_string(),
                        point: r.point.to_string(),
                    });
                }
                if !aboves.insert(r.point.clone()) {
                    return Err(Error::DuplicateAbove {
                        point: r.point.to_string(),
                    });
                }
                sum += r.e;
            }
            if sum != degree {
                return Err(Error::FiberDegree {
                    base: fiber.base.to_string(),
                    sum,
                    degree,
                });
            }
        }

        let ramification: u64 = fibers.iter().map(FiberProfile::ramification).sum();
        let lhs = 2 * source.genus() as i128 - 2;
        let rhs = degree as i128 * (2 * target.genus() as i128 - 2) + ramification as i128;
        if lhs != rhs {
            return Err(Error::RiemannHurwitz {
                g_source: source.genus(),
                g_target: target.genus(),
                degree,
                ramification,
                lhs,
                rhs,
            });
        }

        for p in target.points() {
            if !bases.contains(p) {
                return Err(Error::TargetPointWithoutFiber {
                    point: p.to_string(),
                });
            }
        }
        for p in source.points() {
            if !aboves.contains(p) {
                return Err(Error::SourcePointNotAbove {
                    point: p.to_string(),
                });
            }
        }

        if let Some(perms) = &monodromy {
            if perms.len() != fibers.len() {
                return Err(Error::MonodromyCount {
                    fibers: fibers.len(),
                    perms: perms.len(),
                });
            }
            for (perm, fiber) in perms.iter().zip(&fibers) {
                if perm.n() as u64 != degree {
                    return Err(Error::MonodromyDegree {
                        perm: perm.n() as usize,
                        degree,
                    });
                }
                let cycles = perm.cycle_lengths();
                let profile: Vec<u64> = fiber.above.iter().map(|r| r.e).collect();
                if cycles != profile {
                    return Err(Error::MonodromyCycleMismatch {
                        base: fiber.base.to_string(),
                        cycles,
                        profile,
                    });
                }
            }
            if !is_transitive(degree, perms) {
                return Err(Error::DisconnectedCover);
            }
        }

        Ok(CoveringMap {
            source,
            target,
            degree,
            fibers,
            monodromy,
        })
    }

    /// Degree-1 covering of a curve by itself, fibers listed over its marked
    /// points plus any extra points given.
    pub fn identity(curve: &MarkedCurve, extra: impl IntoIterator<Item = PointId>) -> Self {
        let mut points: BTreeSet<PointId> = curve.points().cloned().collect();
        points.extend(extra);
        let fibers = points
            .iter()
            .map(|p| {
                FiberProfile::new(
                    p.clone(),
                    vec![RamifiedPoint {
                        point: p.clone(),
                        e: 1,
                    }],
                )
            })
            .collect();
        let monodromy = Some(points.iter().map(|_| Permutation::identity(1)).collect());
        CoveringMap::new(curve.clone(), curve.clone(), 1, fibers, monodromy)
            .expect("identity covering data is valid")
    }

    pub fn source(&self) -> &MarkedCurve {
        &self.source
    }

    pub fn target(&self) -> &MarkedCurve {
        &self.target
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn fibers(&self) -> &[FiberProfile] {
        &self.fibers
    }

    pub fn monodromy(&self) -> Option<&[Permutation]> {
        self.monodromy.as_deref()
    }

    pub fn fiber_over(&self, base: &PointId) -> Option<&FiberProfile> {
        self.fibers.iter().find(|f| &f.base == base)
    }

    /// All listed source points with their ramification indices.
    pub fn above_points(&self) -> impl Iterator<Item = &RamifiedPoint> {
        self.fibers.iter().flat_map(|f| f.above.iter())
    }
}

fn is_transitive(degree: u64, perms: &[Permutation]) -> bool {
    // forward edges suffice: a permutation's inverse is one of its powers
    let n = degree as usize;
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for p in perms {
            let next = p.apply(i);
            if !seen[next as usize] {
                seen[next as usize] = true;
                count += 1;
                stack.push(next);
            }
        }
    }
    count == n
}

/// Builds the covering defined by branch permutations: one branch point per
/// permutation on the target, one source point per cycle, ramification the
/// cycle length, source genus solved from the Riemann-Hurwitz count.
///
/// Branch points are named `b1, b2, ..` on the target; the source point for
/// the cycle of `bj` whose least sheet is `s` (1-indexed) is named `bjys`.
/// Both curves mark all of their named points.
pub fn covering_from_monodromy(
    source_name: &str,
    target_name: &str,
    g_target: u32,
    perms: Vec<Permutation>,
) -> Result<CoveringMap> {
    if perms.is_empty() {
        return Err(Error::EmptyMonodromy);
    }
    let n = perms[0].n();
    for p in &perms {
        if p.n() != n {
            return Err(Error::MonodromyDegree {
                perm: p.n() as usize,
                degree: n as u64,
            });
        }
    }
    if !is_transitive(n as u64, &perms) {
        return Err(Error::DisconnectedCover);
    }

    let ramification: u64 = perms
        .iter()
        .map(|p| p.cycle_lengths().iter().map(|l| l - 1).sum::<u64>())
        .sum();
    let two_g_minus_two = n as i128 * (2 * g_target as i128 - 2) + ramification as i128;
    if two_g_minus_two % 2 != 0 || two_g_minus_two < -2 {
        return Err(Error::BadSourceGenus { two_g_minus_two });
    }
    let g_source = ((two_g_minus_two + 2) / 2) as u32;

    let mut fibers = Vec::with_capacity(perms.len());
    let mut source_points = Vec::new();
    let mut target_points = Vec::new();
    for (j, perm) in perms.iter().enumerate() {
        let base = PointId::new(format!("b{}", j + 1));
        target_points.push(base.clone());
        let above: Vec<RamifiedPoint> = perm
            .cycles()
            .iter()
            .map(|cycle| RamifiedPoint {
                point: PointId::new(format!("b{}y{}", j + 1, cycle[0] + 1)),
                e: cycle.len() as u64,
            })
            .collect();
        source_points.extend(above.iter().map(|r| r.point.clone()));
        fibers.push(FiberProfile::new(base, above));
    }

    let source = MarkedCurve::new(source_name, g_source, source_points)?;
    let target = MarkedCurve::new(target_name, g_target, target_points)?;
    CoveringMap::new(source, target, n as u64, fibers, Some(perms))
}

/// Composite covering: first `g`, then `f`. The inner covering's target must
/// be the outer covering's source curve, and the points each one lists must
/// match up exactly, so ramification indices can multiply along fibers.
pub fn compose(g: &CoveringMap, f: &CoveringMap) -> Result<CoveringMap> {
    if g.target() != f.source() {
        return Err(Error::ComposeCurveMismatch {
            g_target: g.target().name().to_string(),
            f_source: f.source().name().to_string(),
        });
    }
    let g_bases: BTreeSet<&PointId> = g.fibers().iter().map(FiberProfile::base).collect();
    let f_aboves: BTreeSet<&PointId> = f.above_points().map(|r| &r.point).collect();
    if let Some(p) = f_aboves.symmetric_difference(&g_bases).next() {
        return Err(Error::ComposePointMismatch {
            point: p.to_string(),
        });
    }

    let degree = g
        .degree()
        .checked_mul(f.degree())
        .ok_or(Error::CoveringDegreeOverflow)?;
    let mut fibers = Vec::with_capacity(f.fibers().len());
    for f_fiber in f.fibers() {
        let mut above = Vec::new();
        for mid in f_fiber.above() {
            let g_fiber = g.fiber_over(&mid.point).expect("point sets match");
            for deep in g_fiber.above() {
                above.push(RamifiedPoint {
                    point: deep.point.clone(),
                    e: deep.e * mid.e,
                });
            }
        }
        fibers.push(FiberProfile::new(f_fiber.base().clone(), above));
    }
    CoveringMap::new(g.source().clone(), f.target().clone(), degree, fibers, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> PointId {
        PointId::from(s)
    }

    fn p(xs: &[u64]) -> Permutation {
        Permutation::from_one_indexed(xs).unwrap()
    }

    /// Degree-2 cover of the line by the line, branched at two points.
    fn double_cover() -> CoveringMap {
        covering_from_monodromy("Y", "X", 0, vec![p(&[2, 1]), p(&[2, 1])]).unwrap()
    }

    #[test]
    fn double_cover_has_expected_shape() {
        let f = double_cover();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.source().genus(), 0);
        assert_eq!(f.target().genus(), 0);
        let bases: Vec<_> = f.fibers().iter().map(|fb| fb.base().as_str()).collect();
        assert_eq!(bases, ["b1", "b2"]);
        let above: Vec<_> = f.above_points().map(|r| (r.point.as_str(), r.e)).collect();
        assert_eq!(above, [("b1y1", 2), ("b2y1", 2)]);
    }

    #[test]
    fn fiber_sums_must_match_degree() {
        let src = MarkedCurve::new("Y", 0, [pt("a")]).unwrap();
        let tgt = MarkedCurve::new("X", 0, [pt("b")]).unwrap();
        let fibers = vec![FiberProfile::new(
            pt("b"),
            vec![RamifiedPoint { point: pt("a"), e: 1 }],
        )];
        let err = CoveringMap::new(src, tgt, 2, fibers, None);
        assert!(matches!(
            err,
            Err(Error::FiberDegree { sum: 1, degree: 2, .. })
        ));
    }

    #[test]
    fn riemann_hurwitz_is_checked_with_instantiated_values() {
        // degree 2, single branch point of profile (2), genera (0, 0):
        // 2*0-2 = -2 but 2*(2*0-2) + 1 = -3
        let src = MarkedCurve::new("Y", 0, [pt("a")]).unwrap();
        let tgt = MarkedCurve::new("X", 0, [pt("b")]).unwrap();
        let fibers = vec![FiberProfile::new(
            pt("b"),
            vec![RamifiedPoint { point: pt("a"), e: 2 }],
        )];
        let err = CoveringMap::new(src, tgt, 2, fibers, None).unwrap_err();
        match err {
            Error::RiemannHurwitz { lhs, rhs, .. } => {
                assert_eq!(lhs, -2);
                assert_eq!(rhs, -3);
            }
            other => panic!("wrong error: {other}"),
        }
        let msg = CoveringMap::new(
            MarkedCurve::new("Y", 0, [pt("a")]).unwrap(),
            MarkedCurve::new("X", 0, [pt("b")]).unwrap(),
            2,
            vec![FiberProfile::new(
                pt("b"),
                vec![RamifiedPoint { point: pt("a"), e: 2 }],
            )],
            None,
        )
        .unwrap_err()
        .to_string();
        assert!(msg.contains("-2"), "message shows the equation: {msg}");
        assert!(msg.contains("-3"), "message shows the equation: {msg}");
    }

    #[test]
    fn monodromy_forcing_half_integral_genus_is_rejected() {
        // degree 3, branch profiles (3) and (2,1) over genus 0: 2g-2 = -3
        let err = covering_from_monodromy("Y", "X", 0, vec![p(&[2, 3, 1]), p(&[2, 1, 3])]);
        assert!(matches!(
            err,
            Err(Error::BadSourceGenus { two_g_minus_two: -3 })
        ));
    }

    #[test]
    fn disconnected_monodromy_is_rejected() {
        // <(1 2), (3 4)> has two orbits on four sheets
        let err = covering_from_monodromy("Y", "X", 1, vec![p(&[2, 1, 3, 4]), p(&[1, 2, 4, 3])]);
        assert!(matches!(err, Err(Error::DisconnectedCover)));
    }

    #[test]
    fn structural_defects_are_rejected() {
        let src = MarkedCurve::new("Y", 0, []).unwrap();
        let tgt = MarkedCurve::new("X", 0, []).unwrap();
        // duplicate base
        let err = CoveringMap::new(
            src.clone(),
            tgt.clone(),
            1,
            vec![
                FiberProfile::new(pt("b"), vec![RamifiedPoint { point: pt("a1"), e: 1 }]),
                FiberProfile::new(pt("b"), vec![RamifiedPoint { point: pt("a2"), e: 1 }]),
            ],
            None,
        );
        assert!(matches!(err, Err(Error::DuplicateBase { .. })));
        // the same source point over two bases
        let err = CoveringMap::new(
            src.clone(),
            tgt.clone(),
            1,
            vec![
                FiberProfile::new(pt("b"), vec![RamifiedPoint { point: pt("a"), e: 1 }]),
                FiberProfile::new(pt("c"), vec![RamifiedPoint { point: pt("a"), e: 1 }]),
            ],
            None,
        );
        assert!(matches!(err, Err(Error::DuplicateAbove { .. })));
        // empty fiber
        let err = CoveringMap::new(src.clone(), tgt.clone(), 1, vec![FiberProfile::new(pt("b"), vec![])], None);
        assert!(matches!(err, Err(Error::EmptyFiber { .. })));
        // zero ramification index
        let err = CoveringMap::new(
            src.clone(),
            tgt.clone(),
            1,
            vec![FiberProfile::new(pt("b"), vec![RamifiedPoint { point: pt("a"), e: 0 }])],
            None,
        );
        assert!(matches!(err, Err(Error::ZeroRamification { .. })));
        // degree zero
        let err = CoveringMap::new(src, tgt, 0, vec![], None);
        assert!(matches!(err, Err(Error::ZeroCoveringDegree)));
    }

    #[test]
    fn marked_points_must_be_listed() {
        let src = MarkedCurve::new("Y", 1, []).unwrap();
        let tgt = MarkedCurve::new("X", 1, [pt("m")]).unwrap();
        // unramified degree-1 cover listing no fibers: target point m missing
        let err = CoveringMap::new(src, tgt, 1, vec![], None);
        assert!(matches!(err, Err(Error::TargetPointWithoutFiber { .. })));

        let src = MarkedCurve::new("Y", 1, [pt("s")]).unwrap();
        let tgt = MarkedCurve::new("X", 1, []).unwrap();
        let err = CoveringMap::new(src, tgt, 1, vec![], None);
        assert!(matches!(err, Err(Error::SourcePointNotAbove { .. })));
    }

    #[test]
    fn monodromy_cycle_type_must_match_the_profile() {
        let src = MarkedCurve::new("Y", 0, []).unwrap();
        let tgt = MarkedCurve::new("X", 0, []).unwrap();
        // profile says (1,1) but the permutation is a transposition
        let fibers = vec![
            FiberProfile::new(
                pt("b1"),
                vec![
                    RamifiedPoint { point: pt("u"), e: 1 },
                    RamifiedPoint { point: pt("v"), e: 1 },
                ],
            ),
            FiberProfile::new(pt("b2"), vec![RamifiedPoint { point: pt("w"), e: 2 }]),
            FiberProfile::new(pt("b3"), vec![RamifiedPoint { point: pt("x"), e: 2 }]),
        ];
        let err = CoveringMap::new(
            src,
            tgt,
            2,
            fibers,
            Some(vec![p(&[2, 1]), p(&[2, 1]), p(&[2, 1])]),
        );
        assert!(matches!(err, Err(Error::MonodromyCycleMismatch { .. })));
    }

    #[test]
    fn identity_covering_round_trips_points() {
        let c = MarkedCurve::new("X", 2, [pt("p"), pt("q")]).unwrap();
        let id = CoveringMap::identity(&c, [pt("r")]);
        assert_eq!(id.degree(), 1);
        assert_eq!(id.source(), id.target());
        assert_eq!(id.fibers().len(), 3);
    }

    #[test]
    fn compose_multiplies_degrees_and_ramification() {
        // g: identity over Y's listed points, f: the double cover
        let f = double_cover();
        let ids = f.above_points().map(|r| r.point.clone()).collect::<Vec<_>>();
        let g = CoveringMap::identity(f.source(), ids);
        let h = compose(&g, &f).unwrap();
        assert_eq!(h.degree(), 2);
        assert_eq!(h.source(), f.source());
        assert_eq!(h.target(), f.target());
        assert_eq!(h.fibers().len(), f.fibers().len());
        for (hf, ff) in h.fibers().iter().zip(f.fibers()) {
            assert_eq!(hf.base(), ff.base());
            assert_eq!(hf.above(), ff.above());
        }
    }

    #[test]
    fn compose_requires_matching_interface() {
        let f = double_cover();
        let other = MarkedCurve::new("Z", 0, []).unwrap();
        let g = CoveringMap::identity(&other, []);
        assert!(matches!(
            compose(&g, &f),
            Err(Error::ComposeCurveMismatch { .. })
        ));
        // same curve but fibers listed over a different point set
        let g = CoveringMap::identity(f.source(), [pt("stranger")]);
        assert!(matches!(
            compose(&g, &f),
            Err(Error::ComposePointMismatch { .. })
        ));
    }
}

//! Parabolic bundles as finite formal sums of semistable atoms, plus the
//! graded (spectrum-level) view produced by transport and symmetric powers.
//!
//! Every bundle carries one of three data layers:
//! * full: a list of atoms, each with its own degree and point weights;
//! * graded with local data: spectrum pieces plus bundle-level degree and
//!   weights (direct images land here, per-atom attribution is lost);
//! * graded only: spectrum pieces alone (multi-atom symmetric powers).
//!
//! Slope-driven operations work on all three layers; operations that consume
//! point weights require one of the first two.

use std::collections::BTreeMap;

use crate::curve::{MarkedCurve, PointId};
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::weights::WeightMultiset;

/// Formal parabolic-semistable building block: rank, underlying degree and a
/// full-size weight multiset at every marked point of its curve.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct SemistableAtom {
    rank: u64,
    degree: i64,
    local: BTreeMap<PointId, WeightMultiset>,
}

impl SemistableAtom {
    /// Point entries may be partial; the bundle constructor fills missing
    /// points with all-zero multisets. Present entries must match the rank.
    pub fn new(
        rank: u64,
        degree: i64,
        local: BTreeMap<PointId, WeightMultiset>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        for (p, ws) in &local {
            let total = ws.total_multiplicity();
            if total != rank {
                return Err(Error::MultiplicityMismatch {
                    point: p.to_string(),
                    total,
                    rank,
                });
            }
        }
        Ok(SemistableAtom {
            rank,
            degree,
            local,
        })
    }

    /// Atom with all-zero weights everywhere.
    pub fn plain(rank: u64, degree: i64) -> Self {
        SemistableAtom::new(rank, degree, BTreeMap::new()).expect("positive rank")
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn local(&self) -> &BTreeMap<PointId, WeightMultiset> {
        &self.local
    }

    pub fn multiset_at(&self, p: &PointId) -> Option<&WeightMultiset> {
        self.local.get(p)
    }

    pub fn weight_sum(&self) -> Rat {
        self.local.values().map(WeightMultiset::weight_sum).sum()
    }

    /// Nonzero weights counted with multiplicity over all points.
    pub fn nonzero_weight_count(&self) -> u64 {
        self.local.values().map(WeightMultiset::nonzero_count).sum()
    }

    pub fn par_degree(&self) -> Rat {
        Rat::from(self.degree) + self.weight_sum()
    }

    pub fn par_slope(&self) -> Rat {
        self.par_degree() / Rat::from(self.rank)
    }

    /// Checks points against the curve and fills missing ones with zeros.
    fn completed_for(mut self, curve: &MarkedCurve) -> Result<Self> {
        for p in self.local.keys() {
            if !curve.has_point(p) {
                return Err(Error::UnknownPoint {
                    curve: curve.name().to_string(),
                    point: p.to_string(),
                });
            }
        }
        for p in curve.points() {
            self.local
                .entry(p.clone())
                .or_insert_with(|| WeightMultiset::trivial(self.rank));
        }
        Ok(self)
    }
}

/// One entry of a graded view: rank and exact parabolic degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GradedPiece {
    rank: u64,
    par_degree: Rat,
}

impl GradedPiece {
    pub fn new(rank: u64, par_degree: Rat) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(GradedPiece { rank, par_degree })
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn par_degree(&self) -> &Rat {
        &self.par_degree
    }

    pub fn slope(&self) -> Rat {
        self.par_degree.clone() / Rat::from(self.rank)
    }
}

/// Bundle-level weight data: one underlying degree for the whole bundle and a
/// full-size multiset per marked point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BundleLocal {
    degree: i64,
    weights: BTreeMap<PointId, WeightMultiset>,
}

impl BundleLocal {
    pub fn new(degree: i64, weights: BTreeMap<PointId, WeightMultiset>) -> Self {
        BundleLocal { degree, weights }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn weights(&self) -> &BTreeMap<PointId, WeightMultiset> {
        &self.weights
    }

    pub fn multiset_at(&self, p: &PointId) -> Option<&WeightMultiset> {
        self.weights.get(p)
    }

    pub fn weight_sum(&self) -> Rat {
        self.weights.values().map(WeightMultiset::weight_sum).sum()
    }

    pub fn par_degree(&self) -> Rat {
        Rat::from(self.degree) + self.weight_sum()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum BundleData {
    Full(Vec<SemistableAtom>),
    Graded {
        pieces: Vec<GradedPiece>,
        local: Option<BundleLocal>,
    },
}

/// A parabolic vector bundle on a marked curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParabolicBundle {
    curve: MarkedCurve,
    data: BundleData,
}

/// Formal Harder-Narasimhan data: graded pieces with strictly decreasing
/// slopes. Atoms of equal slope merge into a single piece.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HnSpectrum {
    graded: Vec<GradedPiece>,
}

impl HnSpectrum {
    /// Sorts by slope, descending, and merges equal-slope pieces. The input
    /// is nonempty because bundles are.
    fn from_pieces(mut pieces: Vec<GradedPiece>) -> Self {
        assert!(!pieces.is_empty(), "spectrum of an empty bundle");
        pieces.sort_by_key(|piece| std::cmp::Reverse(piece.slope()));
        let mut graded: Vec<GradedPiece> = Vec::with_capacity(pieces.len());
        for piece in pieces {
            match graded.last_mut() {
                Some(last) if last.slope() == piece.slope() => {
                    last.rank = last
                        .rank
                        .checked_add(piece.rank)
                        .expect("rank overflow while merging spectrum");
                    last.par_degree = &last.par_degree + &piece.par_degree;
                }
                _ => graded.push(piece),
            }
        }
        HnSpectrum { graded }
    }

    pub fn graded(&self) -> &[GradedPiece] {
        &self.graded
    }

    /// Largest slope, attained by the first piece.
    pub fn mu_max(&self) -> Rat {
        self.graded.first().expect("nonempty").slope()
    }

    /// Smallest slope, attained by the last piece.
    pub fn mu_min(&self) -> Rat {
        self.graded.last().expect("nonempty").slope()
    }

    /// Parabolic degree of the minimal-slope piece.
    pub fn d_min(&self) -> Rat {
        self.graded.last().expect("nonempty").par_degree().clone()
    }
}

impl ParabolicBundle {
    /// Bundle with full per-atom data. Atom weight entries must name marked
    /// points of the curve; missing points are filled with zero weights.
    pub fn from_atoms(curve: MarkedCurve, atoms: Vec<SemistableAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyBundle);
        }
        atoms
            .iter()
            .try_fold(0i64, |acc, a| acc.checked_add(a.degree))
            .ok_or(Error::DegreeOverflow)?;
        let mut completed = Vec::with_capacity(atoms.len());
        for atom in atoms {
            completed.push(atom.completed_for(&curve)?);
        }
        completed.sort();
        Ok(ParabolicBundle {
            curve,
            data: BundleData::Full(completed),
        })
    }

    /// Spectrum-only bundle: graded pieces without point data.
    pub fn from_graded(curve: MarkedCurve, pieces: Vec<GradedPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::EmptyBundle);
        }
        let pieces = HnSpectrum::from_pieces(pieces).graded;
        Ok(ParabolicBundle {
            curve,
            data: BundleData::Graded {
                pieces,
                local: None,
            },
        })
    }

    /// Graded bundle carrying bundle-level weight data. The local data must
    /// be consistent: its parabolic degree has to equal the sum over pieces.
    pub fn from_graded_with_local(
        curve: MarkedCurve,
        pieces: Vec<GradedPiece>,
        local: BundleLocal,
    ) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::EmptyBundle);
        }
        let pieces = HnSpectrum::from_pieces(pieces).graded;
        let rank: u64 = pieces.iter().map(GradedPiece::rank).sum();
        let mut weights = local.weights;
        for (p, ws) in &weights {
            if !curve.has_point(p) {
                return Err(Error::UnknownPoint {
                    curve: curve.name().to_string(),
                    point: p.to_string(),
                });
            }
            let total = ws.total_multiplicity();
            if total != rank {
                return Err(Error::MultiplicityMismatch {
                    point: p.to_string(),
                    total,
                    rank,
                });
            }
        }
        for p in curve.points() {
            weights
                .entry(p.clone())
                .or_insert_with(|| WeightMultiset::trivial(rank));
        }
        let local = BundleLocal {
            degree: local.degree,
            weights,
        };
        let from_pieces: Rat = pieces.iter().map(|g| g.par_degree().clone()).sum();
        let from_local = local.par_degree();
        if from_pieces != from_local {
            return Err(Error::GradedDegreeMismatch {
                pieces: from_pieces,
                local: from_local,
            });
        }
        Ok(ParabolicBundle {
            curve,
            data: BundleData::Graded {
                pieces,
                local: Some(local),
            },
        })
    }

    /// Trivially-weighted line bundle of the given degree.
    pub fn line(curve: MarkedCurve, degree: i64) -> Self {
        ParabolicBundle::from_atoms(curve, vec![SemistableAtom::plain(1, degree)])
            .expect("line bundle data is valid")
    }

    pub fn curve(&self) -> &MarkedCurve {
        &self.curve
    }

    /// Total rank: sum over atoms or graded pieces.
    pub fn rank(&self) -> u64 {
        match &self.data {
            BundleData::Full(atoms) => atoms.iter().map(SemistableAtom::rank).sum(),
            BundleData::Graded { pieces, .. } => pieces.iter().map(GradedPiece::rank).sum(),
        }
    }

    /// Atom list, when the bundle carries full data.
    pub fn atoms(&self) -> Option<&[SemistableAtom]> {
        match &self.data {
            BundleData::Full(atoms) => Some(atoms),
            BundleData::Graded { .. } => None,
        }
    }

    /// Stored graded pieces, when the bundle is spectrum-level.
    pub fn stored_pieces(&self) -> Option<&[GradedPiece]> {
        match &self.data {
            BundleData::Full(_) => None,
            BundleData::Graded { pieces, .. } => Some(pieces),
        }
    }

    /// Bundle-level weight data: computed for full bundles, stored for
    /// transport results, absent for spectrum-only bundles.
    pub fn bundle_local(&self) -> Option<BundleLocal> {
        match &self.data {
            BundleData::Full(atoms) => {
                let degree = atoms
                    .iter()
                    .try_fold(0i64, |acc, a| acc.checked_add(a.degree))
                    .expect("degree sum checked at construction");
                let mut weights: BTreeMap<PointId, WeightMultiset> = BTreeMap::new();
                for p in self.curve.points() {
                    let pairs: Vec<(Rat, u64)> = atoms
                        .iter()
                        .flat_map(|a| {
                            a.local[p].iter().map(|(w, m)| (w.clone(), m)).collect::<Vec<_>>()
                        })
                        .collect();
                    let ws = WeightMultiset::new(pairs).expect("atom weights are valid");
                    weights.insert(p.clone(), ws);
                }
                Some(BundleLocal { degree, weights })
            }
            BundleData::Graded { local, .. } => local.clone(),
        }
    }

    /// Bundle-level weight data or the error telling the caller it is gone.
    pub fn require_local(&self) -> Result<BundleLocal> {
        self.bundle_local().ok_or(Error::LocalDataRequired)
    }

    pub fn has_local_data(&self) -> bool {
        match &self.data {
            BundleData::Full(_) => true,
            BundleData::Graded { local, .. } => local.is_some(),
        }
    }

    /// Parabolic degree: underlying degree plus all weights, with
    /// multiplicity, over all marked points.
    pub fn par_deg(&self) -> Rat {
        match &self.data {
            BundleData::Full(atoms) => atoms.iter().map(SemistableAtom::par_degree).sum(),
            BundleData::Graded { pieces, .. } => {
                pieces.iter().map(|g| g.par_degree().clone()).sum()
            }
        }
    }

    /// Parabolic slope: parabolic degree divided by rank.
    pub fn par_slope(&self) -> Rat {
        self.par_deg() / Rat::from(self.rank())
    }

    /// Graded pieces of the bundle, one per atom before merging.
    pub(crate) fn piece_list(&self) -> Vec<GradedPiece> {
        match &self.data {
            BundleData::Full(atoms) => atoms
                .iter()
                .map(|a| GradedPiece {
                    rank: a.rank,
                    par_degree: a.par_degree(),
                })
                .collect(),
            BundleData::Graded { pieces, .. } => pieces.clone(),
        }
    }

    pub fn hn_spectrum(&self) -> HnSpectrum {
        HnSpectrum::from_pieces(self.piece_list())
    }

    pub fn mu_min(&self) -> Rat {
        self.hn_spectrum().mu_min()
    }

    pub fn mu_max(&self) -> Rat {
        self.hn_spectrum().mu_max()
    }

    pub fn d_min(&self) -> Rat {
        self.hn_spectrum().d_min()
    }

    /// The bundle demoted to its graded view: same curve, spectrum pieces
    /// only. Slope-driven computations on the result match the original.
    pub fn spectrum_view(&self) -> ParabolicBundle {
        ParabolicBundle {
            curve: self.curve.clone(),
            data: BundleData::Graded {
                pieces: self.hn_spectrum().graded,
                local: None,
            },
        }
    }

    /// Re-bases the bundle onto a curve with more marked points, padding the
    /// new points with zero weights. Name and genus must agree.
    pub fn extended_to(&self, curve: &MarkedCurve) -> Result<ParabolicBundle> {
        let bad = |detail: &str| Error::BadExtension {
            from: self.curve.name().to_string(),
            onto: curve.name().to_string(),
            detail: detail.to_string(),
        };
        if curve.name() != self.curve.name() {
            return Err(bad("names differ"));
        }
        if curve.genus() != self.curve.genus() {
            return Err(bad("genera differ"));
        }
        if !self.curve.point_set().is_subset(curve.point_set()) {
            return Err(bad("marked points are not a superset"));
        }
        let data = match &self.data {
            BundleData::Full(atoms) => BundleData::Full(
                atoms
                    .iter()
                    .map(|a| a.clone().completed_for(curve).expect("superset of points"))
                    .collect(),
            ),
            BundleData::Graded { pieces, local } => {
                let rank: u64 = pieces.iter().map(GradedPiece::rank).sum();
                let local = local.as_ref().map(|l| {
                    let mut weights = l.weights.clone();
                    for p in curve.points() {
                        weights
                            .entry(p.clone())
                            .or_insert_with(|| WeightMultiset::trivial(rank));
                    }
                    BundleLocal {
                        degree: l.degree,
                        weights,
                    }
                });
                BundleData::Graded {
                    pieces: pieces.clone(),
                    local,
                }
            }
        };
        Ok(ParabolicBundle {
            curve: curve.clone(),
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> PointId {
        PointId::from(s)
    }

    fn curve_two_points() -> MarkedCurve {
        MarkedCurve::new("X", 0, [pt("p"), pt("q")]).unwrap()
    }

    fn ws(pairs: &[(&str, u64)]) -> WeightMultiset {
        WeightMultiset::new(pairs.iter().map(|(w, m)| (r(w), *m))).unwrap()
    }

    #[test]
    fn trivially_weighted_line_bundle_pardeg_is_its_degree() {
        let c = curve_two_points();
        let l = ParabolicBundle::line(c, 3);
        assert_eq!(l.par_deg(), r("3"));
        assert_eq!(l.par_slope(), r("3"));
        assert_eq!(l.rank(), 1);
    }

    #[test]
    fn par_deg_adds_weights_with_multiplicity() {
        // rank 2, degree -1, weights {0, 1/2} at each of two points
        let c = curve_two_points();
        let atom = SemistableAtom::new(
            2,
            -1,
            BTreeMap::from([
                (pt("p"), ws(&[("0", 1), ("1/2", 1)])),
                (pt("q"), ws(&[("0", 1), ("1/2", 1)])),
            ]),
        )
        .unwrap();
        let e = ParabolicBundle::from_atoms(c, vec![atom]).unwrap();
        assert_eq!(e.par_deg(), r("0"));
        assert_eq!(e.par_slope(), r("0"));
    }

    #[test]
    fn missing_points_get_zero_weights() {
        let c = curve_two_points();
        let atom = SemistableAtom::new(
            3,
            1,
            BTreeMap::from([(pt("p"), ws(&[("1/3", 3)]))]),
        )
        .unwrap();
        let e = ParabolicBundle::from_atoms(c, vec![atom]).unwrap();
        let local = e.bundle_local().unwrap();
        assert_eq!(local.multiset_at(&pt("q")).unwrap(), &WeightMultiset::trivial(3));
        assert_eq!(e.par_deg(), r("2"));
    }

    #[test]
    fn stray_points_are_rejected() {
        let c = curve_two_points();
        let atom = SemistableAtom::new(
            1,
            0,
            BTreeMap::from([(pt("z"), ws(&[("1/2", 1)]))]),
        )
        .unwrap();
        let err = ParabolicBundle::from_atoms(c, vec![atom]);
        assert!(matches!(err, Err(Error::UnknownPoint { .. })));
    }

    #[test]
    fn multiplicity_must_match_rank() {
        let err = SemistableAtom::new(2, 0, BTreeMap::from([(pt("p"), ws(&[("1/2", 1)]))]));
        assert!(matches!(
            err,
            Err(Error::MultiplicityMismatch { total: 1, rank: 2, .. })
        ));
    }

    #[test]
    fn empty_bundles_are_rejected() {
        let c = curve_two_points();
        assert!(matches!(
            ParabolicBundle::from_atoms(c.clone(), vec![]),
            Err(Error::EmptyBundle)
        ));
        assert!(matches!(
            ParabolicBundle::from_graded(c, vec![]),
            Err(Error::EmptyBundle)
        ));
    }

    #[test]
    fn spectrum_sorts_descending_and_merges_equal_slopes() {
        let c = MarkedCurve::new("X", 1, []).unwrap();
        // slopes: 2 (rank 1), 1/2 (rank 1 and rank 2 pieces), -1 (rank 1)
        let e = ParabolicBundle::from_graded(
            c,
            vec![
                GradedPiece::new(1, r("1/2")).unwrap(),
                GradedPiece::new(1, r("-1")).unwrap(),
                GradedPiece::new(2, r("1")).unwrap(),
                GradedPiece::new(1, r("2")).unwrap(),
            ],
        )
        .unwrap();
        let s = e.hn_spectrum();
        let view: Vec<(u64, Rat)> = s
            .graded()
            .iter()
            .map(|g| (g.rank(), g.par_degree().clone()))
            .collect();
        assert_eq!(
            view,
            vec![(1, r("2")), (3, r("3/2")), (1, r("-1"))]
        );
        assert_eq!(s.mu_max(), r("2"));
        assert_eq!(s.mu_min(), r("-1"));
        assert_eq!(s.d_min(), r("-1"));
    }

    #[test]
    fn mu_min_of_full_bundle_reads_last_piece() {
        let c = curve_two_points();
        let a = SemistableAtom::new(
            1,
            0,
            BTreeMap::from([(pt("p"), ws(&[("1/2", 1)]))]),
        )
        .unwrap();
        let b = SemistableAtom::plain(2, -1);
        let e = ParabolicBundle::from_atoms(c, vec![a, b]).unwrap();
        assert_eq!(e.mu_max(), r("1/2"));
        assert_eq!(e.mu_min(), r("-1/2"));
        assert_eq!(e.d_min(), r("-1"));
        assert_eq!(e.par_deg(), r("-1/2"));
    }

    #[test]
    fn graded_local_consistency_is_enforced() {
        let c = curve_two_points();
        let pieces = vec![GradedPiece::new(2, r("1")).unwrap()];
        let good = BundleLocal::new(0, BTreeMap::from([(pt("p"), ws(&[("1/2", 2)]))]));
        assert!(ParabolicBundle::from_graded_with_local(c.clone(), pieces.clone(), good).is_ok());
        let bad = BundleLocal::new(1, BTreeMap::from([(pt("p"), ws(&[("1/2", 2)]))]));
        assert!(matches!(
            ParabolicBundle::from_graded_with_local(c, pieces, bad),
            Err(Error::GradedDegreeMismatch { .. })
        ));
    }

    #[test]
    fn extension_pads_zero_weights() {
        let small = MarkedCurve::new("X", 0, [pt("p")]).unwrap();
        let big = MarkedCurve::new("X", 0, [pt("p"), pt("q")]).unwrap();
        let atom = SemistableAtom::new(
            2,
            1,
            BTreeMap::from([(pt("p"), ws(&[("1/4", 2)]))]),
        )
        .unwrap();
        let e = ParabolicBundle::from_atoms(small, vec![atom]).unwrap();
        let ext = e.extended_to(&big).unwrap();
        assert_eq!(ext.curve(), &big);
        assert_eq!(ext.par_deg(), e.par_deg());
        let local = ext.bundle_local().unwrap();
        assert!(local.multiset_at(&pt("q")).unwrap().is_trivial());

        let other = MarkedCurve::new("Y", 0, [pt("p"), pt("q")]).unwrap();
        assert!(e.extended_to(&other).is_err());
    }

    #[test]
    fn spectrum_view_preserves_slope_data_only() {
        let c = curve_two_points();
        let a = SemistableAtom::new(
            2,
            1,
            BTreeMap::from([(pt("p"), ws(&[("1/2", 2)]))]),
        )
        .unwrap();
        let e = ParabolicBundle::from_atoms(c, vec![a]).unwrap();
        let v = e.spectrum_view();
        assert_eq!(v.par_deg(), e.par_deg());
        assert_eq!(v.hn_spectrum(), e.hn_spectrum());
        assert!(v.atoms().is_none());
        assert!(!v.has_local_data());
    }
}

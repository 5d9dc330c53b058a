//! Transport of parabolic bundles along coverings: pullback to the source
//! curve and direct image down to the target curve.
//!
//! Pullback multiplies each weight by the local ramification index and
//! reduces modulo 1, pushing shed units into the underlying degree; the
//! parabolic degree scales by the covering degree. Direct image spreads each
//! weight `a` at a point with index `e` into `(a+j)/e` for `j = 0..e-1`; the
//! parabolic degree is preserved and slopes divide by the covering degree.
//! Direct images carry bundle-level local data only: which atom a weight
//! came from is not recoverable downstairs.

use std::collections::BTreeMap;

use crate::bundle::{BundleLocal, GradedPiece, ParabolicBundle, SemistableAtom};
use crate::covering::CoveringMap;
use crate::curve::{MarkedCurve, PointId};
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::weights::WeightMultiset;

/// Audit record of one transport operation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransportReport {
    pub degree_used: u64,
    pub input_par_deg: Rat,
    pub output_par_deg: Rat,
    /// Marked points of the result: the reduced inverse image for pullback,
    /// the branch-or-divisor image for direct image.
    pub output_divisor: Vec<PointId>,
}

fn describe(curve: &MarkedCurve) -> String {
    format!("{} (genus {})", curve.name(), curve.genus())
}

/// The bundle must live on the same underlying curve: equal name and genus.
/// Marked sets may differ, they belong to the bundle.
fn check_base(bundle_curve: &MarkedCurve, expected: &MarkedCurve) -> Result<()> {
    if bundle_curve.name() != expected.name() || bundle_curve.genus() != expected.genus() {
        return Err(Error::TransportCurveMismatch {
            bundle: describe(bundle_curve),
            covering: describe(expected),
        });
    }
    Ok(())
}

/// Multiplies every weight by `e` and reduces modulo 1. Returns the new
/// multiset and the total of shed integer parts, counted with multiplicity.
fn pull_multiset(ws: &WeightMultiset, e: u64) -> (WeightMultiset, i128) {
    let mut shed: i128 = 0;
    let mut pairs = Vec::new();
    for (w, m) in ws.iter() {
        let scaled = w * &Rat::from(e);
        let frac = scaled.frac();
        let floor = &scaled - &frac;
        shed += floor.to_i64().expect("floor bounded by e") as i128 * m as i128;
        pairs.push((frac, m));
    }
    (
        WeightMultiset::new(pairs).expect("scaled weights stay in range"),
        shed,
    )
}

fn pull_atom(f: &CoveringMap, atom: &SemistableAtom) -> Result<SemistableAtom> {
    let n = f.degree();
    let mut degree: i128 = atom.degree() as i128 * n as i128;
    let mut local = BTreeMap::new();
    for (p, ws) in atom.local() {
        let fiber = f.fiber_over(p).expect("checked before transport");
        for r in fiber.above() {
            let (pulled, shed) = pull_multiset(ws, r.e);
            degree += shed;
            local.insert(r.point.clone(), pulled);
        }
    }
    let degree = i64::try_from(degree).map_err(|_| Error::DegreeOverflow)?;
    SemistableAtom::new(atom.rank(), degree, local)
}

/// Pullback along `f` of a bundle on the target curve. Needs point-level
/// weight data; the result lives on the source curve, marked at the reduced
/// inverse image of the input's marked points.
pub fn pullback(f: &CoveringMap, bundle: &ParabolicBundle) -> Result<ParabolicBundle> {
    pullback_reported(f, bundle).map(|(b, _)| b)
}

pub fn pullback_reported(
    f: &CoveringMap,
    bundle: &ParabolicBundle,
) -> Result<(ParabolicBundle, TransportReport)> {
    check_base(bundle.curve(), f.target())?;
    for p in bundle.curve().points() {
        if f.fiber_over(p).is_none() {
            return Err(Error::MarkedPointWithoutFiber {
                point: p.to_string(),
            });
        }
    }
    if !bundle.has_local_data() {
        return Err(Error::LocalDataRequired);
    }

    let n = f.degree();
    let mut derived_points = Vec::new();
    for p in bundle.curve().points() {
        let fiber = f.fiber_over(p).expect("checked above");
        derived_points.extend(fiber.above().iter().map(|r| r.point.clone()));
    }
    let derived = MarkedCurve::new(f.source().name(), f.source().genus(), derived_points)?;

    let result = if let Some(atoms) = bundle.atoms() {
        let pulled: Result<Vec<_>> = atoms.iter().map(|a| pull_atom(f, a)).collect();
        ParabolicBundle::from_atoms(derived.clone(), pulled?)?
    } else {
        let local = bundle.require_local()?;
        let mut degree: i128 = local.degree() as i128 * n as i128;
        let mut weights = BTreeMap::new();
        for (p, ws) in local.weights() {
            let fiber = f.fiber_over(p).expect("checked above");
            for r in fiber.above() {
                let (pulled, shed) = pull_multiset(ws, r.e);
                degree += shed;
                weights.insert(r.point.clone(), pulled);
            }
        }
        let degree = i64::try_from(degree).map_err(|_| Error::DegreeOverflow)?;
        let pieces: Result<Vec<_>> = bundle
            .piece_list()
            .iter()
            .map(|g| GradedPiece::new(g.rank(), &Rat::from(n) * g.par_degree()))
            .collect();
        ParabolicBundle::from_graded_with_local(
            derived.clone(),
            pieces?,
            BundleLocal::new(degree, weights),
        )?
    };

    let report = TransportReport {
        degree_used: n,
        input_par_deg: bundle.par_deg(),
        output_par_deg: result.par_deg(),
        output_divisor: derived.points().cloned().collect(),
    };
    Ok((result, report))
}

/// Direct image along `f` of a bundle on the source curve. Needs point-level
/// weight data; the result lives on the target curve, marked at the image of
/// ramification and of the input's marked points, and carries bundle-level
/// local data plus the scaled spectrum.
pub fn direct_image(f: &CoveringMap, bundle: &ParabolicBundle) -> Result<ParabolicBundle> {
    direct_image_reported(f, bundle).map(|(b, _)| b)
}

pub fn direct_image_reported(
    f: &CoveringMap,
    bundle: &ParabolicBundle,
) -> Result<(ParabolicBundle, TransportReport)> {
    check_base(bundle.curve(), f.source())?;
    let above: BTreeMap<&PointId, u64> = f
        .above_points()
        .map(|r| (&r.point, r.e))
        .collect();
    for p in bundle.curve().points() {
        if !above.contains_key(p) {
            return Err(Error::BundlePointNotAbove {
                point: p.to_string(),
            });
        }
    }
    let local = bundle.require_local()?;

    let n = f.degree();
    let rank = bundle.rank();
    let mut weights = BTreeMap::new();
    let mut weight_total = Rat::zero();
    for fiber in f.fibers() {
        let branched = fiber.above().iter().any(|r| r.e > 1);
        let marked = fiber
            .above()
            .iter()
            .any(|r| bundle.curve().has_point(&r.point));
        if !(branched || marked) {
            continue;
        }
        let mut pairs = Vec::new();
        for r in fiber.above() {
            let trivial = WeightMultiset::trivial(rank);
            let ws = if bundle.curve().has_point(&r.point) {
                local.multiset_at(&r.point).expect("local data is complete")
            } else {
                &trivial
            };
            let e = Rat::from(r.e);
            for (alpha, m) in ws.iter() {
                for j in 0..r.e {
                    let w = (alpha + &Rat::from(j)) / e.clone();
                    pairs.push((w, m));
                }
            }
        }
        let ws = WeightMultiset::new(pairs)?;
        weight_total += &ws.weight_sum();
        weights.insert(fiber.base().clone(), ws);
    }

    let degree_rat = bundle.par_deg() - weight_total;
    let degree = degree_rat
        .to_i64()
        .ok_or_else(|| Error::NonIntegralDegree(degree_rat.clone()))?;

    let pieces: Result<Vec<_>> = bundle
        .hn_spectrum()
        .graded()
        .iter()
        .map(|g| {
            let r = g.rank().checked_mul(n).ok_or(Error::RankOverflow)?;
            GradedPiece::new(r, g.par_degree().clone())
        })
        .collect();

    let delta: Vec<PointId> = weights.keys().cloned().collect();
    let derived = MarkedCurve::new(f.target().name(), f.target().genus(), delta.clone())?;
    let result = ParabolicBundle::from_graded_with_local(
        derived,
        pieces?,
        BundleLocal::new(degree, weights),
    )?;

    let report = TransportReport {
        degree_used: n,
        input_par_deg: bundle.par_deg(),
        output_par_deg: result.par_deg(),
        output_divisor: delta,
    };
    Ok((result, report))
}

//! The operational calculus on parabolic bundles: dual, direct sum, tensor
//! product, symmetric power and summand quotients.
//!
//! Weight bookkeeping follows one rule throughout: combined weights reduce
//! modulo 1 into `[0, 1)` and every unit shed this way moves into the
//! underlying degree. This keeps the parabolic degree additive in the way
//! each operation demands, and it is what the tests pin down.

use std::collections::BTreeMap;

use crate::bundle::{BundleLocal, GradedPiece, ParabolicBundle, SemistableAtom};
use crate::curve::MarkedCurve;
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::weights::WeightMultiset;

/// Largest atom count for which quotient enumeration is allowed.
pub const QUOTIENT_ATOM_BOUND: usize = 16;

/// Binomial coefficient with overflow detection.
fn binom(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Visits every way of writing `total` as an ordered sum of `parts`
/// nonnegative integers.
fn for_each_composition(total: u64, parts: usize, visit: &mut impl FnMut(&[u64])) {
    fn go(buf: &mut Vec<u64>, remaining: u64, left: usize, visit: &mut impl FnMut(&[u64])) {
        if left == 1 {
            buf.push(remaining);
            visit(buf);
            buf.pop();
            return;
        }
        for take in 0..=remaining {
            buf.push(take);
            go(buf, remaining - take, left - 1, visit);
            buf.pop();
        }
    }
    assert!(parts > 0);
    go(&mut Vec::with_capacity(parts), total, parts, visit);
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::DegreeOverflow)
}

fn dual_atom(a: &SemistableAtom) -> SemistableAtom {
    let degree = -(a.degree() as i128) - a.nonzero_weight_count() as i128;
    let degree = i64::try_from(degree).expect("dual degree overflows i64");
    let local: BTreeMap<_, _> = a
        .local()
        .iter()
        .map(|(p, ws)| (p.clone(), ws.dual()))
        .collect();
    SemistableAtom::new(a.rank(), degree, local).expect("dual atom data is valid")
}

fn dual_local(l: &BundleLocal) -> BundleLocal {
    let nonzero: u64 = l.weights().values().map(WeightMultiset::nonzero_count).sum();
    let degree = -(l.degree() as i128) - nonzero as i128;
    let degree = i64::try_from(degree).expect("dual degree overflows i64");
    let weights = l
        .weights()
        .iter()
        .map(|(p, ws)| (p.clone(), ws.dual()))
        .collect();
    BundleLocal::new(degree, weights)
}

/// Tensor product of two atoms over a common curve: ranks multiply, weights
/// add and reduce modulo 1, shed units land in the underlying degree.
fn tensor_atoms(
    curve: &MarkedCurve,
    a: &SemistableAtom,
    b: &SemistableAtom,
) -> Result<SemistableAtom> {
    let rank = a.rank().checked_mul(b.rank()).ok_or(Error::RankOverflow)?;
    let mut carried: i128 = 0;
    let mut local = BTreeMap::new();
    for p in curve.points() {
        let wa = a.multiset_at(p).expect("atom is complete");
        let wb = b.multiset_at(p).expect("atom is complete");
        let mut pairs = Vec::new();
        for (alpha, ma) in wa.iter() {
            for (beta, mb) in wb.iter() {
                let m = ma.checked_mul(mb).ok_or(Error::RankOverflow)?;
                let sum = alpha + beta;
                let frac = sum.frac();
                if sum != frac {
                    // alpha, beta < 1, so the only possible carry is 1
                    carried += m as i128;
                }
                pairs.push((frac, m));
            }
        }
        local.insert(p.clone(), WeightMultiset::new(pairs)?);
    }
    let degree = (a.degree() as i128) * (b.rank() as i128)
        + (b.degree() as i128) * (a.rank() as i128)
        + carried;
    SemistableAtom::new(rank, to_i64(degree)?, local)
}

/// Symmetric power of a single atom with full weight data. Enumerates draw
/// counts per distinct weight value (stars and bars), so the work grows with
/// the number of distinct weights, not the rank.
fn sym_atom(curve: &MarkedCurve, a: &SemistableAtom, k: u64) -> Result<SemistableAtom> {
    let r = a.rank();
    let rank = binom(r + k - 1, k).ok_or(Error::RankOverflow)?;
    let degree_coeff = binom(r + k - 1, k - 1).ok_or(Error::RankOverflow)?;
    let mut carried: i128 = 0;
    let mut local = BTreeMap::new();
    for p in curve.points() {
        let ws = a.multiset_at(p).expect("atom is complete");
        let entries = ws.entries();
        let mut pairs: Vec<(Rat, u64)> = Vec::new();
        let mut failed = false;
        for_each_composition(k, entries.len(), &mut |draw| {
            // draw[i] copies of weight value i; count the ways to pick them
            let mut mult: u64 = 1;
            let mut sum = Rat::zero();
            for (i, &j) in draw.iter().enumerate() {
                let (w, m) = &entries[i];
                match binom(m + j - 1, j).and_then(|c| mult.checked_mul(c)) {
                    Some(v) => mult = v,
                    None => {
                        failed = true;
                        return;
                    }
                }
                if j > 0 {
                    sum += &(w * &Rat::from(j));
                }
            }
            let frac = sum.frac();
            let floor = &sum - &frac;
            if !floor.is_zero() {
                carried += floor.to_i64().expect("floor of a bounded sum") as i128 * mult as i128;
            }
            pairs.push((frac, mult));
        });
        if failed {
            return Err(Error::RankOverflow);
        }
        local.insert(p.clone(), WeightMultiset::new(pairs)?);
    }
    // carried units were counted once per point; the degree term is global
    let degree = (degree_coeff as i128) * (a.degree() as i128) + carried;
    SemistableAtom::new(rank, to_i64(degree)?, local)
}

/// Symmetric power at the spectrum level: one piece per multidegree across
/// the graded pieces, rank the product of stars-and-bars counts, slope the
/// weighted sum of slopes.
fn sym_pieces(pieces: &[GradedPiece], k: u64) -> Result<Vec<GradedPiece>> {
    let slopes: Vec<Rat> = pieces.iter().map(GradedPiece::slope).collect();
    let ranks: Vec<u64> = pieces.iter().map(GradedPiece::rank).collect();
    let mut out = Vec::new();
    let mut failed = false;
    for_each_composition(k, pieces.len(), &mut |split| {
        let mut rank: u64 = 1;
        let mut slope = Rat::zero();
        for (i, &j) in split.iter().enumerate() {
            match binom(ranks[i] + j - 1, j).and_then(|c| rank.checked_mul(c)) {
                Some(v) if v > 0 => rank = v,
                _ => {
                    failed = true;
                    return;
                }
            }
            if j > 0 {
                slope += &(&slopes[i] * &Rat::from(j));
            }
        }
        let par_degree = Rat::from(rank) * slope;
        out.push(GradedPiece::new(rank, par_degree).expect("positive rank"));
    });
    if failed {
        return Err(Error::RankOverflow);
    }
    Ok(out)
}

/// A nonempty choice of atoms defining a summand projection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientSelection {
    kept: Vec<usize>,
}

impl QuotientSelection {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut kept: Vec<usize> = indices.into_iter().collect();
        kept.sort_unstable();
        kept.dedup();
        if kept.is_empty() {
            return Err(Error::EmptyQuotient);
        }
        Ok(QuotientSelection { kept })
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }
}

impl ParabolicBundle {
    /// Dual bundle: nonzero weights reflect to `1 - w`, the underlying
    /// degree compensates by the count of nonzero weights, spectra negate.
    pub fn dual(&self) -> ParabolicBundle {
        if let Some(atoms) = self.atoms() {
            let duals = atoms.iter().map(dual_atom).collect();
            return ParabolicBundle::from_atoms(self.curve().clone(), duals)
                .expect("dual of valid atoms is valid");
        }
        let pieces = self
            .piece_list()
            .iter()
            .map(|g| GradedPiece::new(g.rank(), -g.par_degree()).expect("positive rank"))
            .collect();
        match self.bundle_local() {
            Some(local) => ParabolicBundle::from_graded_with_local(
                self.curve().clone(),
                pieces,
                dual_local(&local),
            )
            .expect("dual local data stays consistent"),
            None => ParabolicBundle::from_graded(self.curve().clone(), pieces)
                .expect("dual pieces are valid"),
        }
    }

    /// Direct sum. Both bundles must live on the same curve (same name,
    /// genus and marked points).
    pub fn direct_sum(&self, other: &ParabolicBundle) -> Result<ParabolicBundle> {
        if self.curve() != other.curve() {
            return Err(Error::CurveMismatch {
                left: self.curve().name().to_string(),
                right: other.curve().name().to_string(),
            });
        }
        if let (Some(a), Some(b)) = (self.atoms(), other.atoms()) {
            let atoms = a.iter().chain(b.iter()).cloned().collect();
            return ParabolicBundle::from_atoms(self.curve().clone(), atoms);
        }
        let mut pieces = self.piece_list();
        pieces.extend(other.piece_list());
        let local = match (self.bundle_local(), other.bundle_local()) {
            (Some(la), Some(lb)) => {
                let degree = la
                    .degree()
                    .checked_add(lb.degree())
                    .ok_or(Error::DegreeOverflow)?;
                let mut weights = BTreeMap::new();
                for p in self.curve().points() {
                    let mut pairs: Vec<(Rat, u64)> = Vec::new();
                    for l in [&la, &lb] {
                        let ws = l.multiset_at(p).expect("local data is complete");
                        pairs.extend(ws.iter().map(|(w, m)| (w.clone(), m)));
                    }
                    weights.insert(p.clone(), WeightMultiset::new(pairs)?);
                }
                Some(BundleLocal::new(degree, weights))
            }
            _ => None,
        };
        match local {
            Some(local) => {
                ParabolicBundle::from_graded_with_local(self.curve().clone(), pieces, local)
            }
            None => ParabolicBundle::from_graded(self.curve().clone(), pieces),
        }
    }

    /// Tensor product. Full data tensors atom by atom; otherwise the result
    /// is spectrum-level, with slopes adding across piece pairs.
    pub fn tensor(&self, other: &ParabolicBundle) -> Result<ParabolicBundle> {
        if self.curve() != other.curve() {
            return Err(Error::CurveMismatch {
                left: self.curve().name().to_string(),
                right: other.curve().name().to_string(),
            });
        }
        if let (Some(xs), Some(ys)) = (self.atoms(), other.atoms()) {
            let mut atoms = Vec::with_capacity(xs.len() * ys.len());
            for a in xs {
                for b in ys {
                    atoms.push(tensor_atoms(self.curve(), a, b)?);
                }
            }
            return ParabolicBundle::from_atoms(self.curve().clone(), atoms);
        }
        let mut pieces = Vec::new();
        for a in &self.piece_list() {
            for b in &other.piece_list() {
                let rank = a.rank().checked_mul(b.rank()).ok_or(Error::RankOverflow)?;
                let par_degree = &(&Rat::from(b.rank()) * a.par_degree())
                    + &(&Rat::from(a.rank()) * b.par_degree());
                pieces.push(GradedPiece::new(rank, par_degree).expect("positive rank"));
            }
        }
        ParabolicBundle::from_graded(self.curve().clone(), pieces)
    }

    /// k-th symmetric power. A single atom with full data yields full data;
    /// everything else yields the spectrum-level answer, one piece per
    /// multidegree. `sym_power(E, 1)` returns `E` unchanged.
    pub fn sym_power(&self, k: u64) -> Result<ParabolicBundle> {
        if k == 0 {
            return Ok(ParabolicBundle::line(self.curve().clone(), 0));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        if let Some([single]) = self.atoms() {
            let atom = sym_atom(self.curve(), single, k)?;
            return ParabolicBundle::from_atoms(self.curve().clone(), vec![atom]);
        }
        let pieces = sym_pieces(&self.piece_list(), k)?;
        ParabolicBundle::from_graded(self.curve().clone(), pieces)
    }

    fn component_count(&self) -> usize {
        match self.atoms() {
            Some(atoms) => atoms.len(),
            None => self.stored_pieces().expect("graded").len(),
        }
    }

    /// Projection onto a chosen sub-sum of atoms (or graded pieces).
    pub fn summand_quotient(&self, sel: &QuotientSelection) -> Result<ParabolicBundle> {
        let n = self.component_count();
        for &i in sel.kept() {
            if i >= n {
                return Err(Error::QuotientIndex { index: i, atoms: n });
            }
        }
        if let Some(atoms) = self.atoms() {
            let subset = sel.kept().iter().map(|&i| atoms[i].clone()).collect();
            return ParabolicBundle::from_atoms(self.curve().clone(), subset);
        }
        let pieces = self.stored_pieces().expect("graded");
        let subset = sel.kept().iter().map(|&i| pieces[i].clone()).collect();
        ParabolicBundle::from_graded(self.curve().clone(), subset)
    }

    /// Every quotient obtained by projecting onto a nonempty subset of
    /// atoms, the bundle itself included. Refuses to enumerate past
    /// [`QUOTIENT_ATOM_BOUND`] atoms.
    pub fn summand_quotients(&self) -> Result<Vec<ParabolicBundle>> {
        let n = self.component_count();
        if n > QUOTIENT_ATOM_BOUND {
            return Err(Error::QuotientBound {
                atoms: n,
                bound: QUOTIENT_ATOM_BOUND,
            });
        }
        let mut out = Vec::with_capacity((1usize << n) - 1);
        for mask in 1u32..(1u32 << n) {
            let kept = (0..n).filter(|i| mask & (1 << i) != 0);
            let sel = QuotientSelection::new(kept).expect("mask is nonzero");
            out.push(self.summand_quotient(&sel)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::PointId;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> PointId {
        PointId::from(s)
    }

    fn ws(pairs: &[(&str, u64)]) -> WeightMultiset {
        WeightMultiset::new(pairs.iter().map(|(w, m)| (r(w), *m))).unwrap()
    }

    fn one_point_curve() -> MarkedCurve {
        MarkedCurve::new("X", 0, [pt("p")]).unwrap()
    }

    fn atom_at_p(rank: u64, degree: i64, pairs: &[(&str, u64)]) -> SemistableAtom {
        SemistableAtom::new(rank, degree, BTreeMap::from([(pt("p"), ws(pairs))])).unwrap()
    }

    fn bundle(curve: &MarkedCurve, atoms: Vec<SemistableAtom>) -> ParabolicBundle {
        ParabolicBundle::from_atoms(curve.clone(), atoms).unwrap()
    }

    #[test]
    fn binom_matches_pascal() {
        assert_eq!(binom(0, 0), Some(1));
        assert_eq!(binom(5, 2), Some(10));
        assert_eq!(binom(25, 20), Some(53130));
        assert_eq!(binom(3, 5), Some(0));
        assert_eq!(binom(u64::MAX, 3), None);
    }

    #[test]
    fn dual_reflects_weights_and_compensates_degree() {
        // rank 3, degree 2, weights {0, 1/3, 3/4}: two nonzero weights
        let c = one_point_curve();
        let e = bundle(&c, vec![atom_at_p(3, 2, &[("0", 1), ("1/3", 1), ("3/4", 1)])]);
        let d = e.dual();
        let atom = &d.atoms().unwrap()[0];
        assert_eq!(atom.degree(), -4);
        assert_eq!(
            atom.multiset_at(&pt("p")).unwrap().entries(),
            &[(r("0"), 1), (r("1/4"), 1), (r("2/3"), 1)]
        );
        assert_eq!(d.par_deg(), -e.par_deg());
        assert_eq!(d.dual(), e);
    }

    #[test]
    fn dual_negates_and_reverses_the_spectrum() {
        let c = one_point_curve();
        let e = bundle(
            &c,
            vec![atom_at_p(1, 1, &[("1/2", 1)]), SemistableAtom::plain(2, -1)],
        );
        let d = e.dual();
        assert_eq!(d.mu_max(), -e.mu_min());
        assert_eq!(d.mu_min(), -e.mu_max());
        let orig: Vec<Rat> = e.hn_spectrum().graded().iter().map(|g| g.slope()).collect();
        let dual: Vec<Rat> = d.hn_spectrum().graded().iter().map(|g| g.slope()).collect();
        let back: Vec<Rat> = dual.iter().rev().map(|s| -s.clone()).collect();
        assert_eq!(orig, back);
    }

    #[test]
    fn tensor_of_atoms_reduces_weights_mod_one() {
        // E: rank 2 deg 1 weights {1/2, 3/4}; F: rank 1 deg -1 weight {2/3}.
        // Both pair sums carry: 1/2+2/3 = 1+1/6, 3/4+2/3 = 1+5/12, so the
        // tensor atom is rank 2, degree 1*1 + (-1)*2 + 2 = 1, weights
        // {1/6, 5/12}.
        let c = one_point_curve();
        let e = bundle(&c, vec![atom_at_p(2, 1, &[("1/2", 1), ("3/4", 1)])]);
        let f = bundle(&c, vec![atom_at_p(1, -1, &[("2/3", 1)])]);
        let t = e.tensor(&f).unwrap();
        let atom = &t.atoms().unwrap()[0];
        assert_eq!(atom.rank(), 2);
        assert_eq!(atom.degree(), 1);
        assert_eq!(
            atom.multiset_at(&pt("p")).unwrap().entries(),
            &[(r("1/6"), 1), (r("5/12"), 1)]
        );
        assert_eq!(t.par_deg(), r("19/12"));
    }

    #[test]
    fn tensor_degree_identity_on_a_fixed_pair() {
        let c = one_point_curve();
        let e = bundle(&c, vec![atom_at_p(2, 1, &[("1/2", 1), ("3/4", 1)])]);
        let f = bundle(&c, vec![atom_at_p(1, -1, &[("2/3", 1)])]);
        let t = e.tensor(&f).unwrap();
        let expected = &(&Rat::from(e.rank()) * &f.par_deg()) + &(&Rat::from(f.rank()) * &e.par_deg());
        assert_eq!(t.par_deg(), expected);
        // semistable times semistable: slopes add
        assert_eq!(t.par_slope(), e.par_slope() + f.par_slope());
        assert_eq!(t.par_slope(), r("19/24"));
    }

    #[test]
    fn tensor_distributes_over_atoms() {
        let c = one_point_curve();
        let e = bundle(
            &c,
            vec![atom_at_p(1, 0, &[("1/2", 1)]), SemistableAtom::plain(1, 2)],
        );
        let f = bundle(
            &c,
            vec![atom_at_p(1, -1, &[("1/3", 1)]), SemistableAtom::plain(2, 0)],
        );
        let t = e.tensor(&f).unwrap();
        assert_eq!(t.atoms().unwrap().len(), 4);
        assert_eq!(t.rank(), e.rank() * f.rank());
        let expected = &(&Rat::from(e.rank()) * &f.par_deg()) + &(&Rat::from(f.rank()) * &e.par_deg());
        assert_eq!(t.par_deg(), expected);
        // commutativity at the level of canonical forms
        assert_eq!(t, f.tensor(&e).unwrap());
    }

    #[test]
    fn tensor_with_the_trivial_line_bundle_is_identity() {
        let c = one_point_curve();
        let e = bundle(
            &c,
            vec![atom_at_p(2, -1, &[("1/2", 1), ("3/4", 1)]), SemistableAtom::plain(1, 3)],
        );
        let unit = ParabolicBundle::line(c.clone(), 0);
        assert_eq!(e.tensor(&unit).unwrap(), e);
        assert_eq!(unit.tensor(&e).unwrap(), e);
    }

    #[test]
    fn sym_power_of_a_single_atom_keeps_full_data() {
        // rank 2, degree -1, weights {1/2, 3/4}; k = 2 gives rank 3,
        // degree C(3,1)*(-1) + 3 = 0, weights {0, 1/4, 1/2}.
        let c = one_point_curve();
        let e = bundle(&c, vec![atom_at_p(2, -1, &[("1/2", 1), ("3/4", 1)])]);
        let s = e.sym_power(2).unwrap();
        let atom = &s.atoms().unwrap()[0];
        assert_eq!(atom.rank(), 3);
        assert_eq!(atom.degree(), 0);
        assert_eq!(
            atom.multiset_at(&pt("p")).unwrap().entries(),
            &[(r("0"), 1), (r("1/4"), 1), (r("1/2"), 1)]
        );
        assert_eq!(s.par_deg(), r("3/4"));
        // single atom: slope scales exactly with k
        assert_eq!(s.par_slope(), Rat::from(2i64) * e.par_slope());
    }

    #[test]
    fn sym_power_one_is_the_identity() {
        let c = one_point_curve();
        let e = bundle(
            &c,
            vec![atom_at_p(2, -1, &[("1/2", 2)]), SemistableAtom::plain(1, 1)],
        );
        assert_eq!(e.sym_power(1).unwrap(), e);
    }

    #[test]
    fn sym_power_zero_is_the_trivial_line() {
        let c = one_point_curve();
        let e = bundle(&c, vec![atom_at_p(2, -1, &[("1/2", 2)])]);
        let s = e.sym_power(0).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.par_deg(), Rat::zero());
    }

    #[test]
    fn sym_power_of_two_pieces_enumerates_multidegrees() {
        // pieces (rank 1, slope 1) and (rank 2, slope -1/2), k = 3:
        // multidegrees (3,0),(2,1),(1,2),(0,3) give ranks 1,2,3,4 and
        // slopes 3, 3/2, 0, -3/2.
        let c = MarkedCurve::new("X", 1, []).unwrap();
        let e = ParabolicBundle::from_graded(
            c,
            vec![
                GradedPiece::new(1, r("1")).unwrap(),
                GradedPiece::new(2, r("-1")).unwrap(),
            ],
        )
        .unwrap();
        let s = e.sym_power(3).unwrap();
        let got: Vec<(u64, Rat)> = s
            .hn_spectrum()
            .graded()
            .iter()
            .map(|g| (g.rank(), g.slope()))
            .collect();
        assert_eq!(
            got,
            vec![
                (1, r("3")),
                (2, r("3/2")),
                (3, r("0")),
                (4, r("-3/2")),
            ]
        );
        assert_eq!(s.rank(), 10); // C(3+3-1, 3)
        assert_eq!(s.mu_min(), Rat::from(3i64) * e.mu_min());
        assert_eq!(s.mu_max(), Rat::from(3i64) * e.mu_max());
    }

    #[test]
    fn sym_power_full_and_spectrum_paths_agree_on_slopes() {
        let c = one_point_curve();
        let e = bundle(&c, vec![atom_at_p(3, 2, &[("1/6", 1), ("1/3", 2)])]);
        for k in [2u64, 3, 4] {
            let full = e.sym_power(k).unwrap();
            let spec = e.spectrum_view().sym_power(k).unwrap();
            assert_eq!(full.hn_spectrum(), spec.hn_spectrum(), "k = {k}");
            assert_eq!(full.rank(), spec.rank());
        }
    }

    #[test]
    fn direct_sum_concatenates_and_doubles() {
        let c = one_point_curve();
        let e = bundle(&c, vec![atom_at_p(2, 1, &[("1/2", 2)])]);
        let s = e.direct_sum(&e).unwrap();
        assert_eq!(s.rank(), 4);
        assert_eq!(s.par_deg(), Rat::from(2i64) * e.par_deg());
        assert_eq!(s.atoms().unwrap().len(), 2);

        let other = MarkedCurve::new("Y", 0, []).unwrap();
        let f = ParabolicBundle::line(other, 0);
        assert!(matches!(
            e.direct_sum(&f),
            Err(Error::CurveMismatch { .. })
        ));
    }

    #[test]
    fn direct_sum_of_graded_views_keeps_local_data_when_both_sides_have_it() {
        let c = one_point_curve();
        let e = bundle(&c, vec![atom_at_p(2, 1, &[("1/2", 2)])]);
        let full_sum = e.direct_sum(&e).unwrap();
        // graded-with-local plus full: both sides supply local data
        let g = ParabolicBundle::from_graded_with_local(
            c.clone(),
            vec![GradedPiece::new(2, r("2")).unwrap()],
            BundleLocal::new(1, BTreeMap::from([(pt("p"), ws(&[("1/2", 2)]))])),
        )
        .unwrap();
        let s = g.direct_sum(&e).unwrap();
        let local = s.bundle_local().unwrap();
        assert_eq!(local.degree(), 2);
        assert_eq!(local.multiset_at(&pt("p")).unwrap().entries(), &[(r("1/2"), 4)]);
        assert_eq!(s.par_deg(), full_sum.par_deg());
        // spectrum-only input degrades the result to spectrum-only
        let spec = e.spectrum_view().direct_sum(&e).unwrap();
        assert!(spec.bundle_local().is_none());
        assert_eq!(spec.par_deg(), full_sum.par_deg());
    }

    #[test]
    fn quotients_enumerate_nonempty_subsets() {
        let c = one_point_curve();
        let e = bundle(
            &c,
            vec![atom_at_p(1, 1, &[("1/2", 1)]), SemistableAtom::plain(2, -3)],
        );
        let qs = e.summand_quotients().unwrap();
        assert_eq!(qs.len(), 3);
        let mu_min = e.mu_min();
        for q in &qs {
            assert!(q.par_slope() >= mu_min);
        }
        assert!(qs.contains(&e));
    }

    #[test]
    fn quotient_selection_validates_indices() {
        let c = one_point_curve();
        let e = bundle(&c, vec![SemistableAtom::plain(1, 0)]);
        assert!(matches!(
            QuotientSelection::new([]),
            Err(Error::EmptyQuotient)
        ));
        let sel = QuotientSelection::new([3]).unwrap();
        assert!(matches!(
            e.summand_quotient(&sel),
            Err(Error::QuotientIndex { index: 3, atoms: 1 })
        ));
    }

    #[test]
    fn quotient_enumeration_bound_is_enforced() {
        let c = MarkedCurve::new("X", 0, []).unwrap();
        let atoms: Vec<_> = (0..17).map(|i| SemistableAtom::plain(1, i)).collect();
        let e = ParabolicBundle::from_atoms(c, atoms).unwrap();
        assert!(matches!(
            e.summand_quotients(),
            Err(Error::QuotientBound { atoms: 17, bound: 16 })
        ));
    }
}

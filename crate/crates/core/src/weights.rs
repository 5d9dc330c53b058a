//! Weight multisets: the parabolic structure carried at one marked point.

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Multiset of parabolic weights at a single marked point. Weights lie in
/// `[0, 1)`; entries are stored sorted strictly increasing with merged
/// multiplicities. A multiset always has full size: its total multiplicity
/// equals the rank of the atom or bundle carrying it, zeros included.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WeightMultiset {
    entries: Vec<(Rat, u64)>,
}

impl WeightMultiset {
    /// Builds a multiset from weight/multiplicity pairs, sorting and merging
    /// duplicates. Rejects weights outside `[0, 1)` and zero multiplicities.
    pub fn new(pairs: impl IntoIterator<Item = (Rat, u64)>) -> Result<Self> {
        let mut entries: Vec<(Rat, u64)> = Vec::new();
        for (w, m) in pairs {
            if w.is_negative() || w >= Rat::from(1i64) {
                return Err(Error::WeightOutOfRange(w));
            }
            if m == 0 {
                return Err(Error::ZeroMultiplicity);
            }
            entries.push((w, m));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rat, u64)> = Vec::with_capacity(entries.len());
        for (w, m) in entries {
            match merged.last_mut() {
                Some((prev, pm)) if *prev == w => *pm += m,
                _ => merged.push((w, m)),
            }
        }
        Ok(WeightMultiset { entries: merged })
    }

    /// The all-zero multiset of the given size.
    pub fn trivial(rank: u64) -> Self {
        assert!(rank > 0, "trivial multiset needs positive rank");
        WeightMultiset {
            entries: vec![(Rat::zero(), rank)],
        }
    }

    /// Pads with zero weights up to `rank`. The caller has already checked
    /// that the current total multiplicity does not exceed `rank`.
    pub fn padded(self, rank: u64) -> Self {
        let total = self.total_multiplicity();
        assert!(total <= rank, "multiset larger than rank");
        if total == rank {
            return self;
        }
        let mut pairs: Vec<(Rat, u64)> = self.entries;
        pairs.push((Rat::zero(), rank - total));
        WeightMultiset::new(pairs).expect("padding preserves validity")
    }

    pub fn entries(&self) -> &[(Rat, u64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rat, u64)> {
        self.entries.iter().map(|(w, m)| (w, *m))
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, m)| *m).sum()
    }

    /// Sum of all weights counted with multiplicity.
    pub fn weight_sum(&self) -> Rat {
        self.entries
            .iter()
            .map(|(w, m)| w * &Rat::from(*m))
            .sum()
    }

    /// Number of nonzero weights counted with multiplicity.
    pub fn nonzero_count(&self) -> u64 {
        self.entries
            .iter()
            .filter(|(w, _)| !w.is_zero())
            .map(|(_, m)| *m)
            .sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.nonzero_count() == 0
    }

    /// Dual multiset: each nonzero weight `w` becomes `1 - w`, zeros stay.
    pub fn dual(&self) -> Self {
        let one = Rat::from(1i64);
        let pairs = self.entries.iter().map(|(w, m)| {
            if w.is_zero() {
                (w.clone(), *m)
            } else {
                (&one - w, *m)
            }
        });
        WeightMultiset::new(pairs.collect::<Vec<_>>()).expect("dual weights stay in range")
    }
}

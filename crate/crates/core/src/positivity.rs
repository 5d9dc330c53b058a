//! Ampleness and nefness decisions.
//!
//! Both properties are read off the Harder-Narasimhan spectrum: a bundle is
//! ample exactly when the smallest slope is positive and nef exactly when it
//! is nonnegative; the anti properties mirror this at the largest slope. The
//! definitional harness re-derives nefness of a bundle `E` from the ampleness
//! of `sym(E, k) (x) L` for a positive twist line bundle `L` across a range
//! of powers and cross-checks the observed pattern against the closed form
//! `k * mu_min(E) + deg(L) > 0`.

use crate::bundle::ParabolicBundle;
use crate::error::{Error, Result};
use crate::rational::Rat;

/// The four slope-sign verdicts together with the extreme slopes they were
/// read from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PositivityVerdict {
    pub ample: bool,
    pub nef: bool,
    pub anti_ample: bool,
    pub anti_nef: bool,
    pub mu_min: Rat,
    pub mu_max: Rat,
}

pub fn classify(bundle: &ParabolicBundle) -> PositivityVerdict {
    let spectrum = bundle.hn_spectrum();
    let mu_min = spectrum.mu_min();
    let mu_max = spectrum.mu_max();
    PositivityVerdict {
        ample: mu_min.is_positive(),
        nef: !mu_min.is_negative(),
        anti_ample: mu_max.is_negative(),
        anti_nef: !mu_max.is_positive(),
        mu_min,
        mu_max,
    }
}

/// One scanned power of the harness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NefHarnessStep {
    pub power: u64,
    pub twisted_mu_min: Rat,
    pub ample: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NefHarnessReport {
    pub bundle_mu_min: Rat,
    pub twist_degree: i64,
    pub max_power: u64,
    /// Smallest power at which the twist stops being ample, by the closed
    /// form; may exceed `max_power`. `None` when no power ever fails.
    pub predicted_first_failure: Option<u64>,
    /// Smallest scanned power that was not ample.
    pub observed_first_failure: Option<u64>,
    pub steps: Vec<NefHarnessStep>,
    /// Every scanned verdict matched the closed form and the first failure
    /// landed where predicted (or stayed out of range as predicted).
    pub consistent: bool,
}

fn twist_degree(bundle: &ParabolicBundle, twist: &ParabolicBundle) -> Result<i64> {
    let atoms = match twist.atoms() {
        Some(atoms) => atoms,
        None => return Err(Error::BadHarnessTwist),
    };
    if twist.curve() != bundle.curve()
        || twist.rank() != 1
        || atoms.len() != 1
        || atoms[0].nonzero_weight_count() != 0
        || atoms[0].degree() <= 0
    {
        return Err(Error::BadHarnessTwist);
    }
    Ok(atoms[0].degree())
}

/// Scans `sym(bundle, k) (x) twist` for `k = 1..=max_power` and reports the
/// ampleness pattern next to the closed-form prediction. The scan works on
/// the spectrum view, so it exercises the graded symmetric-power path.
pub fn nef_definitional_harness(
    bundle: &ParabolicBundle,
    twist: &ParabolicBundle,
    max_power: u64,
) -> Result<NefHarnessReport> {
    let deg_l = twist_degree(bundle, twist)?;
    let mu_min = bundle.mu_min();
    let spectrum = bundle.spectrum_view();

    let mut steps = Vec::new();
    let mut observed_first_failure = None;
    let mut pointwise_consistent = true;
    for power in 1..=max_power {
        let twisted = spectrum.sym_power(power)?.tensor(twist)?;
        let verdict = classify(&twisted);
        let closed_form = &(&Rat::from(power) * &mu_min) + &Rat::from(deg_l);
        if verdict.ample != closed_form.is_positive() || verdict.mu_min != closed_form {
            pointwise_consistent = false;
        }
        if !verdict.ample && observed_first_failure.is_none() {
            observed_first_failure = Some(power);
        }
        steps.push(NefHarnessStep {
            power,
            twisted_mu_min: verdict.mu_min.clone(),
            ample: verdict.ample,
        });
    }

    let predicted_first_failure = if mu_min.is_negative() {
        // smallest k with k * mu_min + deg_l <= 0
        let bound = Rat::from(deg_l) / -mu_min.clone();
        Some(
            u64::try_from(bound.ceil_int())
                .expect("positive over bounded slopes stays small"),
        )
    } else {
        None
    };

    let failure_as_predicted = match predicted_first_failure {
        Some(k) if k <= max_power => observed_first_failure == Some(k),
        _ => observed_first_failure.is_none(),
    };

    Ok(NefHarnessReport {
        bundle_mu_min: mu_min,
        twist_degree: deg_l,
        max_power,
        predicted_first_failure,
        observed_first_failure,
        steps,
        consistent: pointwise_consistent && failure_as_predicted,
    })
}

//! Randomized verification suites.
//!
//! Each suite re-checks one family of structural identities on seeded
//! random instances. Trials are independently seeded from the master seed,
//! so a failure is reproducible from the suite name, master seed and trial
//! index alone; failing bundles are additionally shrunk by a greedy
//! minimizer and reported as a self-contained workspace document.

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{ParabolicBundle, SemistableAtom};
use crate::covering::{compose, CoveringMap, FiberProfile};
use crate::curve::{MarkedCurve, PointId};
use crate::error::{Error, Result};
use crate::galois::{galois_closure_data, verify_decomposition};
use crate::generate::{random_bundle, random_covering, random_curve, MAX_MARKED_POINTS};
use crate::perm::Permutation;
use crate::positivity::{classify, nef_definitional_harness};
use crate::rational::Rat;
use crate::transport::{direct_image, pullback};
use crate::weights::WeightMultiset;
use crate::workspace::Workspace;

pub const SUITES: [&str; 8] = [
    "tensor-degree",
    "dual-involution",
    "pullback-ample",
    "pushforward-ample",
    "dual-commutation",
    "quotient-bound",
    "nef-harness",
    "galois-decomposition",
];

/// Operations every suite run must have exercised, asserted by tests.
pub const COVERED_OPERATIONS: [&str; 15] = [
    "classify",
    "compose",
    "direct_image",
    "direct_sum",
    "dual",
    "galois_closure_data",
    "hn_spectrum",
    "nef_definitional_harness",
    "par_deg",
    "par_slope",
    "pullback",
    "summand_quotients",
    "sym_power",
    "tensor",
    "verify_decomposition",
];

static COVERAGE: OnceLock<Mutex<BTreeSet<&'static str>>> = OnceLock::new();

fn touch(op: &'static str) {
    COVERAGE
        .get_or_init(|| Mutex::new(BTreeSet::new()))
        .lock()
        .expect("coverage registry is never poisoned")
        .insert(op);
}

/// Operation names recorded by every suite trial run so far in this
/// process.
pub fn covered_operations() -> BTreeSet<&'static str> {
    COVERAGE
        .get_or_init(|| Mutex::new(BTreeSet::new()))
        .lock()
        .expect("coverage registry is never poisoned")
        .clone()
}

/// Derives the seed for one trial from the master seed (splitmix64 mix).
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuiteFailure {
    pub trial: u64,
    pub seed: u64,
    pub detail: String,
    /// Workspace document with the shrunk counterexample, when one exists.
    pub minimized: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: u64,
    pub passed: u64,
    pub failures: Vec<SuiteFailure>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "suite {}: {}/{} trials passed ({} ms)",
            self.suite, self.passed, self.trials, self.elapsed_ms
        )
    }
}

struct TrialFailure {
    detail: String,
    minimized: Option<String>,
}

impl From<Error> for TrialFailure {
    fn from(e: Error) -> Self {
        TrialFailure {
            detail: format!("operation failed: {e}"),
            minimized: None,
        }
    }
}

fn fail<T>(detail: String, minimized: Option<String>) -> std::result::Result<T, TrialFailure> {
    Err(TrialFailure { detail, minimized })
}

fn bundle_doc(bundle: &ParabolicBundle) -> String {
    let mut ws = Workspace::new();
    ws.insert_bundle("counterexample", bundle.clone())
        .expect("fresh workspace takes one bundle");
    ws.to_json()
}

fn pair_doc(covering: &CoveringMap, bundle: &ParabolicBundle) -> String {
    let mut ws = Workspace::new();
    ws.insert_covering("f", covering.clone())
        .expect("fresh workspace takes one covering");
    ws.insert_bundle("counterexample", bundle.clone())
        .expect("the bundle lives on a covering curve");
    ws.to_json()
}

/// Greedy shrink of a full-data bundle under a failing predicate: drop
/// whole atoms, then zero out single weight entries, keeping every change
/// that still fails, until nothing shrinks. Bundles without atom data are
/// returned unchanged.
pub fn minimize_bundle(
    bundle: &ParabolicBundle,
    fails: impl Fn(&ParabolicBundle) -> bool,
) -> ParabolicBundle {
    let mut current = bundle.clone();
    'outer: loop {
        let atoms = match current.atoms() {
            Some(atoms) => atoms.to_vec(),
            None => return current,
        };
        if atoms.len() > 1 {
            for drop in 0..atoms.len() {
                let kept: Vec<SemistableAtom> = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, a)| a.clone())
                    .collect();
                if let Ok(candidate) = ParabolicBundle::from_atoms(current.curve().clone(), kept) {
                    if fails(&candidate) {
                        current = candidate;
                        continue 'outer;
                    }
                }
            }
        }
        for (ai, atom) in atoms.iter().enumerate() {
            for (p, ws) in atom.local() {
                for (w, _) in ws.entries() {
                    if w.is_zero() {
                        continue;
                    }
                    let zeroed = WeightMultiset::new(ws.entries().iter().map(|(ew, em)| {
                        if ew == w {
                            (Rat::zero(), *em)
                        } else {
                            (ew.clone(), *em)
                        }
                    }))
                    .expect("zeroing keeps weights in range");
                    let mut local = atom.local().clone();
                    local.insert(p.clone(), zeroed);
                    let rebuilt = SemistableAtom::new(atom.rank(), atom.degree(), local)
                        .expect("zeroing keeps the multiset total");
                    let mut next_atoms = atoms.clone();
                    next_atoms[ai] = rebuilt;
                    if let Ok(candidate) =
                        ParabolicBundle::from_atoms(current.curve().clone(), next_atoms)
                    {
                        if fails(&candidate) {
                            current = candidate;
                            continue 'outer;
                        }
                    }
                }
            }
        }
        return current;
    }
}

/// Greedy shrink of a covering under a failing predicate: drop whole
/// fibers (with their monodromy entry) whenever the remaining data still
/// validates and still fails. Marked points of both curves are cut down to
/// the surviving bases and above points.
pub fn minimize_covering(
    covering: &CoveringMap,
    fails: impl Fn(&CoveringMap) -> bool,
) -> CoveringMap {
    let mut current = covering.clone();
    'outer: loop {
        let fibers = current.fibers().to_vec();
        if fibers.len() <= 1 {
            return current;
        }
        for drop in 0..fibers.len() {
            let kept: Vec<FiberProfile> = fibers
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, f)| f.clone())
                .collect();
            let monodromy = current.monodromy().map(|perms| {
                perms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, p)| p.clone())
                    .collect::<Vec<_>>()
            });
            let bases: Vec<PointId> = kept.iter().map(|f| f.base().clone()).collect();
            let aboves: Vec<PointId> = kept
                .iter()
                .flat_map(|f| f.above().iter().map(|a| a.point.clone()))
                .collect();
            let candidate =
                MarkedCurve::new(current.source().name(), current.source().genus(), aboves)
                    .and_then(|source| {
                        let target = MarkedCurve::new(
                            current.target().name(),
                            current.target().genus(),
                            bases,
                        )?;
                        CoveringMap::new(source, target, current.degree(), kept, monodromy)
                    });
            if let Ok(candidate) = candidate {
                if fails(&candidate) {
                    current = candidate;
                    continue 'outer;
                }
            }
        }
        return current;
    }
}

fn run_trials(
    suite: &str,
    master: u64,
    trials: u64,
    mut body: impl FnMut(u64) -> std::result::Result<(), TrialFailure>,
) -> SuiteReport {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut passed = 0;
    for trial in 0..trials {
        let seed = trial_seed(master, trial);
        match body(seed) {
            Ok(()) => passed += 1,
            Err(f) => failures.push(SuiteFailure {
                trial,
                seed,
                detail: f.detail,
                minimized: f.minimized,
            }),
        }
    }
    SuiteReport {
        suite: suite.to_string(),
        trials,
        passed,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn random_base_curve(rng: &mut impl Rng) -> MarkedCurve {
    let genus = rng.random_range(0..=2);
    random_curve(rng, "X", genus, MAX_MARKED_POINTS)
}

fn tensor_degree_trial(seed: u64) -> std::result::Result<(), TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curve = random_base_curve(&mut rng);
    let v = random_bundle(&mut rng, &curve);
    let w = random_bundle(&mut rng, &curve);
    touch("tensor");
    touch("par_deg");
    touch("hn_spectrum");
    let holds = |a: &ParabolicBundle, b: &ParabolicBundle| -> Result<bool> {
        let t = a.tensor(b)?;
        let expected_deg =
            &(&Rat::from(a.rank()) * &b.par_deg()) + &(&Rat::from(b.rank()) * &a.par_deg());
        Ok(t.par_deg() == expected_deg
            && t.mu_max() == &a.mu_max() + &b.mu_max()
            && t.mu_min() == &a.mu_min() + &b.mu_min())
    };
    if !holds(&v, &w)? {
        let min = minimize_bundle(&v, |b| !holds(b, &w).unwrap_or(true));
        return fail(
            "tensor product broke the degree or extreme-slope laws".into(),
            Some(bundle_doc(&min)),
        );
    }
    // the laws also hold across data layers
    if !holds(&v.spectrum_view(), &w)? {
        return fail(
            "tensor degree law failed for graded data".into(),
            Some(bundle_doc(&v)),
        );
    }
    Ok(())
}

fn dual_involution_trial(seed: u64) -> std::result::Result<(), TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curve = random_base_curve(&mut rng);
    let v = random_bundle(&mut rng, &curve);
    let w = random_bundle(&mut rng, &curve);
    touch("dual");
    touch("direct_sum");
    touch("par_deg");
    touch("hn_spectrum");
    let d = v.dual();
    if d.dual() != v {
        let min = minimize_bundle(&v, |b| b.dual().dual() != *b);
        return fail("dual is not an involution".into(), Some(bundle_doc(&min)));
    }
    if d.par_deg() != -v.par_deg() || d.mu_max() != -v.mu_min() || d.mu_min() != -v.mu_max() {
        let min = minimize_bundle(&v, |b| {
            let db = b.dual();
            db.par_deg() != -b.par_deg() || db.mu_max() != -b.mu_min()
        });
        return fail(
            "dual did not negate the degree and reverse the spectrum".into(),
            Some(bundle_doc(&min)),
        );
    }
    if v.spectrum_view().dual().hn_spectrum() != d.hn_spectrum() {
        return fail(
            "dual disagrees between full and graded data".into(),
            Some(bundle_doc(&v)),
        );
    }
    let sum_dual = v.direct_sum(&w)?.dual();
    let dual_sum = v.dual().direct_sum(&w.dual())?;
    if sum_dual != dual_sum {
        return fail(
            "dual does not distribute over direct sums".into(),
            Some(bundle_doc(&v)),
        );
    }
    Ok(())
}

fn pullback_ample_trial(seed: u64) -> std::result::Result<(), TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_covering(&mut rng, "Y", "X", 5);
    let e = random_bundle(&mut rng, f.target());
    touch("pullback");
    touch("classify");
    touch("par_deg");
    touch("par_slope");
    let n = Rat::from(f.degree());
    let holds = |b: &ParabolicBundle| -> Result<bool> {
        let p = pullback(&f, b)?;
        let before = classify(b);
        let after = classify(&p);
        Ok(p.rank() == b.rank()
            && p.par_deg() == &n * &b.par_deg()
            && p.par_slope() == &n * &b.par_slope()
            && p.mu_min() == &n * &b.mu_min()
            && before.ample == after.ample
            && before.nef == after.nef
            && before.anti_ample == after.anti_ample)
    };
    if !holds(&e)? {
        let min = minimize_bundle(&e, |b| !holds(b).unwrap_or(true));
        return fail(
            "pullback broke degree scaling or positivity preservation".into(),
            Some(pair_doc(&f, &min)),
        );
    }
    Ok(())
}

fn pushforward_ample_trial(seed: u64) -> std::result::Result<(), TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_covering(&mut rng, "Y", "X", 5);
    let v = random_bundle(&mut rng, f.source());
    touch("direct_image");
    touch("classify");
    touch("par_deg");
    let n = f.degree();
    let ramification: i128 = f.above_points().map(|a| (a.e - 1) as i128).sum();
    let holds = |b: &ParabolicBundle| -> Result<bool> {
        let w = direct_image(&f, b)?;
        let before = classify(b);
        let after = classify(&w);
        let underlying = b
            .bundle_local()
            .expect("generated bundles have full data")
            .degree() as i128;
        let expected_underlying = underlying - b.rank() as i128 * ramification / 2;
        Ok(w.rank() == n * b.rank()
            && w.par_deg() == b.par_deg()
            && &w.mu_min() * &Rat::from(n) == b.mu_min()
            && w.bundle_local().expect("direct images carry local data").degree() as i128
                == expected_underlying
            && before.ample == after.ample
            && before.nef == after.nef
            && before.anti_nef == after.anti_nef)
    };
    if !holds(&v)? {
        let min = minimize_bundle(&v, |b| !holds(b).unwrap_or(true));
        return fail(
            "direct image broke rank, degree bookkeeping or positivity".into(),
            Some(pair_doc(&f, &min)),
        );
    }
    Ok(())
}

fn dual_commutation_trial(seed: u64) -> std::result::Result<(), TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_covering(&mut rng, "Y", "X", 5);
    touch("dual");
    touch("direct_image");
    touch("pullback");
    let v = random_bundle(&mut rng, f.source());
    let lhs = direct_image(&f, &v.dual())?;
    let rhs = direct_image(&f, &v)?.dual();
    if lhs != rhs {
        let min = minimize_bundle(&v, |b| {
            match (direct_image(&f, &b.dual()), direct_image(&f, b)) {
                (Ok(l), Ok(r)) => l != r.dual(),
                _ => true,
            }
        });
        return fail(
            "dual does not commute with the direct image".into(),
            Some(pair_doc(&f, &min)),
        );
    }
    let e = random_bundle(&mut rng, f.target());
    let lhs = pullback(&f, &e.dual())?;
    let rhs = pullback(&f, &e)?.dual();
    if lhs != rhs {
        let min = minimize_bundle(&e, |b| match (pullback(&f, &b.dual()), pullback(&f, b)) {
            (Ok(l), Ok(r)) => l != r.dual(),
            _ => true,
        });
        return fail(
            "dual does not commute with the pullback".into(),
            Some(pair_doc(&f, &min)),
        );
    }
    Ok(())
}

fn quotient_bound_trial(seed: u64) -> std::result::Result<(), TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curve = random_base_curve(&mut rng);
    let v = random_bundle(&mut rng, &curve);
    touch("summand_quotients");
    touch("par_slope");
    touch("hn_spectrum");
    let quotients = v.summand_quotients()?;
    let atom_count = v.atoms().expect("generated bundles have atoms").len();
    if quotients.len() != (1usize << atom_count) - 1 {
        return fail(
            format!(
                "expected {} summand quotients, found {}",
                (1usize << atom_count) - 1,
                quotients.len()
            ),
            Some(bundle_doc(&v)),
        );
    }
    if !quotients.iter().any(|q| q.rank() == v.rank()) {
        return fail(
            "the bundle itself is missing from its quotient list".into(),
            Some(bundle_doc(&v)),
        );
    }
    let mu = v.mu_min();
    if quotients.iter().any(|q| q.par_slope() < mu) {
        let min = minimize_bundle(&v, |b| {
            b.summand_quotients()
                .map(|qs| {
                    let m = b.mu_min();
                    qs.iter().any(|q| q.par_slope() < m)
                })
                .unwrap_or(false)
        });
        return fail(
            "a summand quotient has slope below the minimal slope".into(),
            Some(bundle_doc(&min)),
        );
    }
    Ok(())
}

fn nef_harness_trial(seed: u64) -> std::result::Result<(), TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curve = random_base_curve(&mut rng);
    let v = random_bundle(&mut rng, &curve);
    let twist = ParabolicBundle::line(curve.clone(), 1);
    touch("nef_definitional_harness");
    touch("sym_power");
    touch("tensor");
    touch("classify");
    let report = nef_definitional_harness(&v, &twist, 20)?;
    if !report.consistent {
        let min = minimize_bundle(&v, |b| {
            nef_definitional_harness(b, &twist, 20)
                .map(|r| !r.consistent)
                .unwrap_or(false)
        });
        return fail(
            format!(
                "harness pattern disagrees with the closed form: predicted {:?}, observed {:?}",
                report.predicted_first_failure, report.observed_first_failure
            ),
            Some(bundle_doc(&min)),
        );
    }
    Ok(())
}

fn fiber_sets(c: &CoveringMap) -> BTreeSet<(PointId, BTreeSet<(PointId, u64)>)> {
    c.fibers()
        .iter()
        .map(|f| {
            (
                f.base().clone(),
                f.above().iter().map(|a| (a.point.clone(), a.e)).collect(),
            )
        })
        .collect()
}

fn all_permutations(n: u32) -> Vec<Permutation> {
    fn build(prefix: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(Permutation::from_images(prefix.clone()).expect("built a permutation"));
            return;
        }
        for i in 0..n as u32 {
            if !used[i as usize] {
                used[i as usize] = true;
                prefix.push(i);
                build(prefix, used, out);
                prefix.pop();
                used[i as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    build(&mut Vec::new(), &mut vec![false; n as usize], &mut out);
    out
}

fn galois_decomposition_trial(seed: u64) -> std::result::Result<(), TrialFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_covering(&mut rng, "Y", "X", 4);
    touch("galois_closure_data");
    touch("compose");
    touch("verify_decomposition");
    touch("direct_image");
    touch("pullback");
    let closure = galois_closure_data(&f)?;

    // the closure covering must factor: f after g equals h, fiber by fiber
    let composed = compose(closure.g(), &f)?;
    if fiber_sets(&composed) != fiber_sets(closure.h()) {
        return fail(
            "composite of the closure tower disagrees with the closure covering".into(),
            None,
        );
    }

    // independent Galois test: f is Galois exactly when the centralizer of
    // the monodromy inside the full symmetric group has order equal to the
    // covering degree
    let monodromy = f.monodromy().expect("generated coverings carry monodromy");
    let centralizer = all_permutations(monodromy[0].n())
        .into_iter()
        .filter(|c| monodromy.iter().all(|s| c.compose(s) == s.compose(c)))
        .count();
    let galois_by_centralizer = centralizer == f.degree() as usize;
    if galois_by_centralizer != closure.f_is_galois() {
        return fail(
            format!(
                "normality test says galois={}, centralizer of order {} says {}",
                closure.f_is_galois(),
                centralizer,
                galois_by_centralizer
            ),
            None,
        );
    }

    let v = random_bundle(&mut rng, f.source());
    let report = verify_decomposition(&closure, &v)?;
    if !report.ok {
        let min = minimize_bundle(&v, |b| {
            verify_decomposition(&closure, b)
                .map(|r| !r.ok)
                .unwrap_or(false)
        });
        return fail(
            format!("decomposition report failed: {report:?}"),
            Some(pair_doc(&f, &min)),
        );
    }
    Ok(())
}

/// Runs the named suite for `trials` trials seeded from `master_seed`.
pub fn run_suite(name: &str, master_seed: u64, trials: u64) -> Result<SuiteReport> {
    let body: fn(u64) -> std::result::Result<(), TrialFailure> = match name {
        "tensor-degree" => tensor_degree_trial,
        "dual-involution" => dual_involution_trial,
        "pullback-ample" => pullback_ample_trial,
        "pushforward-ample" => pushforward_ample_trial,
        "dual-commutation" => dual_commutation_trial,
        "quotient-bound" => quotient_bound_trial,
        "nef-harness" => nef_harness_trial,
        "galois-decomposition" => galois_decomposition_trial,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    Ok(run_trials(name, master_seed, trials, body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn every_suite_passes_a_short_run() {
        for suite in SUITES {
            let trials = if suite == "galois-decomposition" { 6 } else { 12 };
            let report = run_suite(suite, 0xA5A5, trials).unwrap();
            assert!(report.ok(), "{suite}: {:?}", report.failures);
            assert_eq!(report.passed, trials);
        }
    }

    #[test]
    fn suite_runs_cover_the_core_operations() {
        for suite in SUITES {
            let trials = if suite == "galois-decomposition" { 4 } else { 8 };
            run_suite(suite, 77, trials).unwrap();
        }
        let covered = covered_operations();
        for op in COVERED_OPERATIONS {
            assert!(covered.contains(op), "operation {op} was never exercised");
        }
    }

    #[test]
    fn suite_reports_are_reproducible() {
        let a = run_suite("tensor-degree", 123, 40).unwrap();
        let b = run_suite("tensor-degree", 123, 40).unwrap();
        assert_eq!(a.passed, b.passed);
        assert_eq!(a.failures, b.failures);
        let c = run_suite("tensor-degree", 124, 40).unwrap();
        assert_eq!(c.trials, 40);
    }

    #[test]
    fn unknown_suites_are_rejected() {
        assert!(matches!(
            run_suite("no-such-suite", 1, 1),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn trial_seeds_spread_out() {
        let seeds: BTreeSet<u64> = (0..1000).map(|i| trial_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }

    #[test]
    fn minimizer_shrinks_to_the_guilty_atom() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let curve = random_curve(&mut rng, "X", 0, 2);
        let mut atoms = vec![
            SemistableAtom::plain(2, 3),
            SemistableAtom::plain(1, -2),
            SemistableAtom::plain(2, 1),
        ];
        // give the harmless atoms some weights so zeroing has work to do
        let weighted = SemistableAtom::new(
            2,
            3,
            curve
                .points()
                .map(|p| {
                    (
                        p.clone(),
                        WeightMultiset::new([("1/3".parse().unwrap(), 1)])
                            .unwrap()
                            .padded(2),
                    )
                })
                .collect::<BTreeMap<_, _>>(),
        )
        .unwrap();
        atoms[0] = weighted;
        let v = ParabolicBundle::from_atoms(curve, atoms).unwrap();
        // injected failure: any atom of underlying degree -2 present
        let fails = |b: &ParabolicBundle| {
            b.atoms()
                .map(|atoms| atoms.iter().any(|a| a.degree() == -2))
                .unwrap_or(false)
        };
        assert!(fails(&v));
        let min = minimize_bundle(&v, fails);
        let atoms = min.atoms().unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].degree(), -2);
        assert_eq!(atoms[0].rank(), 1);
        assert!(atoms[0].local().values().all(WeightMultiset::is_trivial));
    }

    #[test]
    fn covering_minimizer_drops_removable_fibers() {
        let f = crate::covering::covering_from_monodromy(
            "Y",
            "X",
            0,
            vec![
                Permutation::from_one_indexed(&[2, 1]).unwrap(),
                Permutation::from_one_indexed(&[2, 1]).unwrap(),
                Permutation::from_one_indexed(&[1, 2]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(f.fibers().len(), 3);
        // injected failure independent of the fibers
        let min = minimize_covering(&f, |c| c.degree() == 2);
        // the unramified fiber goes; the two branch fibers must stay or the
        // Euler count breaks
        assert_eq!(min.fibers().len(), 2);
        assert!(min.fibers().iter().all(|fb| fb.above()[0].e == 2));
    }
}

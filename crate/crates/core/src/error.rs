//! One error type for the whole crate. Every variant carries enough data to
//! print the violated constraint with the offending values filled in.

use crate::rational::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero denominator in rational")]
    ZeroDenominator,

    #[error("cannot parse rational from {0:?}: expected \"p\" or \"p/q\"")]
    ParseRational(String),

    #[error("weight {0} outside [0,1)")]
    WeightOutOfRange(Rat),

    #[error("weight multiplicity must be at least 1")]
    ZeroMultiplicity,

    #[error("curve {curve:?} lists marked point {point:?} more than once")]
    DuplicatePoint { curve: String, point: String },

    #[error("atom must have rank at least 1")]
    ZeroRank,

    #[error("bundle must contain at least one atom")]
    EmptyBundle,

    #[error("weight data names point {point:?}, which is not marked on curve {curve:?}")]
    UnknownPoint { curve: String, point: String },

    #[error("weights at {point:?} have total multiplicity {total}, expected rank {rank}")]
    MultiplicityMismatch { point: String, total: u64, rank: u64 },

    #[error("graded pieces sum to par-deg {pieces} but local data gives {local}")]
    GradedDegreeMismatch { pieces: Rat, local: Rat },

    #[error("incompatible base curves: {left:?} vs {right:?}")]
    CurveMismatch { left: String, right: String },

    #[error("curve {onto:?} does not extend {from:?}: {detail}")]
    BadExtension {
        from: String,
        onto: String,
        detail: String,
    },

    #[error("underlying degree overflows the 64-bit integer range")]
    DegreeOverflow,

    #[error("rank overflows the 64-bit integer range")]
    RankOverflow,

    #[error("operation requires point-level weight data, but the bundle carries only its graded spectrum")]
    LocalDataRequired,

    #[error("quotient enumeration bound exceeded: {atoms} atoms > {bound}")]
    QuotientBound { atoms: usize, bound: usize },

    #[error("quotient selection must keep at least one atom")]
    EmptyQuotient,

    #[error("quotient selection index {index} out of range for {atoms} atoms")]
    QuotientIndex { index: usize, atoms: usize },

    #[error("covering degree must be at least 1")]
    ZeroCoveringDegree,

    #[error("covering degree overflows the 64-bit integer range")]
    CoveringDegreeOverflow,

    #[error("fiber over {base:?} is empty")]
    EmptyFiber { base: String },

    #[error("fiber over {base:?} lists {point:?} with ramification index 0")]
    ZeroRamification { base: String, point: String },

    #[error("two fibers listed over the same base point {base:?}")]
    DuplicateBase { base: String },

    #[error("source point {point:?} appears in more than one fiber entry")]
    DuplicateAbove { point: String },

    #[error("fiber over {base:?} sums to {sum}, expected the covering degree {degree}")]
    FiberDegree { base: String, sum: u64, degree: u64 },

    #[error(
        "Riemann-Hurwitz violated: 2*{g_source}-2 = {lhs} but \
         {degree}*(2*{g_target}-2) + {ramification} = {rhs}"
    )]
    RiemannHurwitz {
        g_source: u32,
        g_target: u32,
        degree: u64,
        ramification: u64,
        lhs: i128,
        rhs: i128,
    },

    #[error("marked point {point:?} of the target curve has no listed fiber")]
    TargetPointWithoutFiber { point: String },

    #[error("marked point {point:?} of the source curve does not lie above any listed fiber")]
    SourcePointNotAbove { point: String },

    #[error("covering lists {fibers} fibers but {perms} monodromy permutations")]
    MonodromyCount { fibers: usize, perms: usize },

    #[error("monodromy permutation acts on {perm} sheets, covering degree is {degree}")]
    MonodromyDegree { perm: usize, degree: u64 },

    #[error(
        "monodromy over {base:?} has cycle lengths {cycles:?} but the fiber lists \
         ramification indices {profile:?} (entries correspond in order, cycles sorted \
         by least moved sheet)"
    )]
    MonodromyCycleMismatch {
        base: String,
        cycles: Vec<u64>,
        profile: Vec<u64>,
    },

    #[error("not a permutation: {detail}")]
    BadPermutation { detail: String },

    #[error("no branch permutations: covering degree undetermined")]
    EmptyMonodromy,

    #[error("disconnected cover: monodromy does not act transitively on the sheets")]
    DisconnectedCover,

    #[error("non-integral or negative source genus: covering data forces 2g-2 = {two_g_minus_two}")]
    BadSourceGenus { two_g_minus_two: i128 },

    #[error("cannot compose: inner covering targets curve {g_target:?} but outer covering starts at {f_source:?}")]
    ComposeCurveMismatch { g_target: String, f_source: String },

    #[error("cannot compose: point {point:?} is listed by one covering but not matched by the other")]
    ComposePointMismatch { point: String },

    #[error("group order cap exceeded (cap {cap})")]
    GroupCapExceeded { cap: usize },

    #[error("covering carries no monodromy data")]
    MonodromyRequired,

    #[error("inconsistent covering/bundle data: computed underlying degree {0} is not an integer")]
    NonIntegralDegree(Rat),

    #[error("harness twist must be a trivially-weighted line bundle of positive degree")]
    BadHarnessTwist,

    #[error("bundle lives on curve {bundle:?} but the covering expects {covering:?}")]
    TransportCurveMismatch { bundle: String, covering: String },

    #[error("marked point {point:?} of the bundle has no listed fiber in the covering")]
    MarkedPointWithoutFiber { point: String },

    #[error("marked point {point:?} of the bundle does not lie above any listed fiber of the covering")]
    BundlePointNotAbove { point: String },

    #[error("workspace already contains a {kind} named {name:?}")]
    DuplicateName { kind: &'static str, name: String },

    #[error("workspace has no {kind} named {name:?}")]
    MissingName { kind: &'static str, name: String },

    #[error("bundle {name:?} must carry either full atoms or graded pieces, not {detail}")]
    BadBundleData { name: String, detail: &'static str },

    #[error("unknown verification suite {0:?}")]
    UnknownSuite(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

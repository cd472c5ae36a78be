//! Exact engine: enumeration oracles, x-matching counts, generating
//! functions, and exact joint PMFs.

mod enumerate;
mod numbers;
mod pgf;
mod xcount;

pub use enumerate::{
    brute_force_pmf, enumerate_balanced_pms, enumerate_perfect_matchings, for_each_balanced_pm,
    for_each_balanced_pm_capped, for_each_perfect_matching, for_each_perfect_matching_capped,
    BALANCED_ENUM_CAP, PERFECT_MATCHING_ENUM_CAP,
};
pub use numbers::{binomial, bpm_count, factorial, falling, pma_count};
pub use pgf::{
    build_pgf, build_pgf_with_mode, conditional_pmf_avoiding, exact_pmf, extension_weight,
    pmf_from_pgf, sm1_series_from_pmf, CoeffSeries, PgfSeries,
};
pub use xcount::{count_x_matchings, MAX_PROFILE_SUPPORT};

//! Instance transformations and generators: the mixing reduction, lollipop
//! and expander-versus-clique gap families, and random pairs.

mod generators;
mod mix;

pub use generators::{
    gen_expander_clique, gen_lollipop, gen_random, generate, normalized_gap, random_regular,
    GeneratorSpec, Lollipop, RandomSpec, COMPLETE_HEAD_MAX, GAP_MIN, RESAMPLE_BUDGET,
};
pub use mix::{
    mix_instance, sdp_gap_mix, unmix_cut_check, unmix_cut_check_with_tol, GapMixReport,
    MixParams, UnmixReport,
};

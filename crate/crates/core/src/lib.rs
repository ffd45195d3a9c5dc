//! Sparsest-cut toolkit: the sparsity objective and a brute-force oracle,
//! spectral / Leighton-Rao / Goemans-Linial relaxations, Cheeger-type
//! rounding for rank-1 demand graphs, spectral s-t cut certificates, and
//! gap-instance generators.

// Links the system OpenBLAS/LAPACK used by the conic solver.
extern crate openblas_src;

pub mod cli;
pub mod error;
pub mod graph;
pub mod instances;
pub mod io;
pub mod oracle;
pub mod relaxations;
pub mod rounding;
pub mod stcut;

pub use error::{Error, Result};
pub use graph::{
    cut_weight, laplacian, rank1_decompose, sparsity, Cut, InstancePair, Rank1Measure,
    Rank1Result, SparsityReport, WeightedGraph,
};
pub use oracle::{brute_force_opt, cheeger_constant, conductance};
pub use relaxations::{
    solve_goemans_linial, solve_leighton_rao, solve_spectral, verify_solution, RelaxationKind,
    RelaxationValue, SemiMetric, SolverConfig, VectorEmbedding, Witness,
};
pub use rounding::{
    l1_round, round_rank1, round_rank1_via_approx, sweep_cut, RoundConfig, RoundingCertificate,
};
pub use stcut::{electrical_potentials, extract_flow, st_certificate, st_sweep, Flow, Potentials, StCertificate};
pub use instances::{gen_expander_clique, gen_lollipop, gen_random, mix_instance, MixParams, RandomSpec};

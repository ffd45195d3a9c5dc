use crate::error::{Error, Result};
use crate::graph::{sparsity, Cut, InstancePair, WeightedGraph};
use crate::oracle::brute_force_opt;
use crate::relaxations::{solve_goemans_linial, SolverConfig};

/// Target sparsity guess `eps` and mixing parameter `delta`,
/// `0 < eps <= delta <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixParams {
    pub eps: f64,
    pub delta: f64,
}

impl MixParams {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= delta && delta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < eps <= delta <= 1, got eps = {eps}, delta = {delta}"
            )));
        }
        Ok(Self { eps, delta })
    }

    /// `eps / delta`.
    pub fn ratio(&self) -> f64 {
        self.eps / self.delta
    }
}

/// `G' = Gbar`, `H' = (1 - eps/delta) Gbar + (eps/delta) Hbar`. A cut of
/// sparsity at most `eps` on `(G, H)` has sparsity at most `delta` on the
/// mixed pair.
pub fn mix_instance(pair: &InstancePair, p: &MixParams) -> Result<InstancePair> {
    MixParams::new(p.eps, p.delta)?;
    let r = p.ratio();
    let g = pair.g.normalize();
    let hb = pair.h.normalize();
    let w = g
        .dense()
        .iter()
        .zip(hb.dense())
        .map(|(gw, hw)| (1.0 - r) * gw + r * hw)
        .collect();
    InstancePair::new(g, WeightedGraph::from_dense(pair.n(), w)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnmixReport {
    pub mixed_sigma: f64,
    pub original_sigma: f64,
    /// `sigma(G', H'; T) <= 1/2`.
    pub antecedent: bool,
    /// `sigma(G, H; T) <= eps/delta`.
    pub consequent: bool,
}

impl UnmixReport {
    /// The implication antecedent => consequent.
    pub fn holds(&self) -> bool {
        !self.antecedent || self.consequent
    }
}

/// Checks that a cut of sparsity at most 1/2 on the mixed pair has sparsity
/// at most `eps/delta` on the original, with both sides computed directly.
pub fn unmix_cut_check(pair: &InstancePair, p: &MixParams, cut: &Cut) -> Result<UnmixReport> {
    unmix_cut_check_with_tol(pair, p, cut, 0.0)
}

pub fn unmix_cut_check_with_tol(
    pair: &InstancePair,
    p: &MixParams,
    cut: &Cut,
    tol: f64,
) -> Result<UnmixReport> {
    let mixed = mix_instance(pair, p)?;
    let mixed_sigma = sparsity(&mixed, cut).sigma;
    let original_sigma = sparsity(pair, cut).sigma;
    Ok(UnmixReport {
        mixed_sigma,
        original_sigma,
        antecedent: mixed_sigma <= 0.5,
        consequent: original_sigma <= p.ratio() + tol,
    })
}

/// Measured numbers before and after mixing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapMixReport {
    pub params: MixParams,
    pub original_opt: f64,
    pub original_sdp: f64,
    pub mixed_opt: f64,
    pub mixed_sdp: f64,
    /// Value of the original SDP solution carried over to the mixed pair:
    /// `sdp / ((1 - eps/delta) sdp + eps/delta)`.
    pub carried_sdp: f64,
}

pub fn sdp_gap_mix(
    pair: &InstancePair,
    p: &MixParams,
    config: &SolverConfig,
) -> Result<(InstancePair, GapMixReport)> {
    let mixed = mix_instance(pair, p)?;
    let (_, opt) = brute_force_opt(pair)?;
    let (_, mixed_opt) = brute_force_opt(&mixed)?;
    let sdp = solve_goemans_linial(pair, config)?.value;
    let mixed_sdp = solve_goemans_linial(&mixed, config)?.value;
    let r = p.ratio();
    let report = GapMixReport {
        params: *p,
        original_opt: opt.sigma,
        original_sdp: sdp,
        mixed_opt: mixed_opt.sigma,
        mixed_sdp,
        carried_sdp: sdp / ((1.0 - r) * sdp + r),
    };
    Ok((mixed, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::for_each_cut;

    fn path_edge() -> InstancePair {
        InstancePair::new(
            WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap(),
            WeightedGraph::from_edges(3, &[(0, 2, 1.0)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn params_are_validated() {
        assert!(MixParams::new(0.0, 0.5).is_err());
        assert!(MixParams::new(0.6, 0.5).is_err());
        assert!(MixParams::new(0.5, 1.5).is_err());
        assert!(MixParams::new(0.5, 0.5).is_ok());
    }

    #[test]
    fn equal_parameters_preserve_every_cut() {
        let pair = path_edge();
        let p = MixParams::new(0.5, 0.5).unwrap();
        let mixed = mix_instance(&pair, &p).unwrap();
        assert!((mixed.g.total() - 1.0).abs() < 1e-15);
        assert!((mixed.h.total() - 1.0).abs() < 1e-15);
        for_each_cut(3, |bits| {
            let c = Cut::from_bits(3, bits);
            let (a, b) = (sparsity(&pair, &c).sigma, sparsity(&mixed, &c).sigma);
            assert!(a == b || (a - b).abs() < 1e-15, "{a} {b}");
        })
        .unwrap();
        let (_, opt) = brute_force_opt(&mixed).unwrap();
        assert!((opt.sigma - 0.5).abs() < 1e-15);
    }

    #[test]
    fn optimal_cut_satisfies_the_implication() {
        let pair = path_edge();
        let p = MixParams::new(0.5, 1.0).unwrap();
        let rep = unmix_cut_check(&pair, &p, &Cut::from_members(3, &[0])).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn false_antecedent_is_vacuous() {
        let pair = path_edge();
        let p = MixParams::new(0.25, 0.5).unwrap();
        // {0,2} is not crossed by the demand
        let rep = unmix_cut_check(&pair, &p, &Cut::from_members(3, &[0, 2])).unwrap();
        assert!(!rep.antecedent && rep.holds());
    }

    #[test]
    fn gap_report_with_equal_parameters() {
        let pair = path_edge();
        let p = MixParams::new(0.5, 0.5).unwrap();
        let (_, rep) = sdp_gap_mix(&pair, &p, &SolverConfig::default()).unwrap();
        assert!((rep.mixed_opt - rep.original_opt).abs() < 1e-12);
        assert!((rep.mixed_sdp - rep.original_sdp).abs() < 1e-6);
        assert!((rep.carried_sdp - rep.original_sdp).abs() < 1e-12);
    }
}

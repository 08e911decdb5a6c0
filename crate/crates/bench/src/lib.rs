//! Fixed inputs shared by the benchmarks.

use antimagic_core::{gen_instance, min_vertices, Graph, RegimeTarget};

/// One instance per constructive regime at `n` (raised to the regime's
/// minimum), generated from `seed`.
pub fn regime_fixtures(n: usize, seed: u64) -> Vec<(RegimeTarget, Graph)> {
    RegimeTarget::CONSTRUCTIVE
        .iter()
        .map(|&t| {
            let g = gen_instance(n.max(min_vertices(t)), t, seed).expect("fixture generates");
            (t, g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_fixture_per_regime() {
        let f = regime_fixtures(24, 1);
        assert_eq!(f.len(), RegimeTarget::CONSTRUCTIVE.len());
        assert!(f.iter().all(|(_, g)| g.vertex_count() >= 24));
    }
}

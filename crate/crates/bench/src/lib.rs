//! Shared inputs for the criterion benches.

use chain_disks_core::exact_algebra::rat;
use chain_disks_core::spectral_curve::ChainModel;

pub use chain_disks_core::planar_oracle::DEFAULT_BUDGET;

/// The symbolic three-matrix cubic chain.
pub fn symbolic_chain() -> ChainModel {
    ChainModel::cubic_chain()
}

/// The same chain at a generic rational coupling point.
pub fn numeric_chain() -> ChainModel {
    ChainModel::cubic_chain().instantiate(&[rat(1, 3), rat(1, 5), rat(1, 7)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(symbolic_chain().n_chain(), 3);
        assert_eq!(numeric_chain().n_chain(), 3);
    }
}

//! Shared fixtures for the benchmarks: deterministic inputs per depth.

use wrcomm_core::groups::{sample_derived, GroupId, GroupKind};
use wrcomm_core::{AritySignature, TreeAut};

pub const DEPTHS: [usize; 4] = [8, 12, 16, 20];

/// Two uniformly random elements of the full binary group at `depth`.
pub fn random_pair(depth: usize, seed: u64) -> (TreeAut, TreeAut) {
    let sig = AritySignature::binary(depth).expect("binary signature");
    (
        TreeAut::random(&sig, seed),
        TreeAut::random(&sig, seed ^ 0x9e37_79b9),
    )
}

/// A random element of the derived subgroup of the binary Sylow group.
pub fn derived_target(depth: usize, seed: u64) -> TreeAut {
    let sig = AritySignature::binary(depth).expect("binary signature");
    let id = GroupId::new(GroupKind::DerivedFullWreath, sig).expect("group id");
    sample_derived(&id, seed).expect("sampler")
}

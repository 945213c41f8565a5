//! Brute-force ground truth.
//!
//! Nothing here reuses the portrait multiplication's position bookkeeping:
//! leaf permutations are computed by walking each leaf word down the tree,
//! and subgroups are found by plain closure. The code is deliberately naive
//! and bounded by explicit guards.

mod perm;

use std::collections::HashSet;

use rayon::prelude::*;

pub use perm::{CycleParseError, LeafPermutation, Parity};

use crate::error::{Result, WreathError};
use crate::groups::{standard_generators, GroupId, GroupKind};
use crate::signature::AritySignature;
use crate::tree::TreeAut;

/// Default bound on enumerated group and closure sizes.
pub const DEFAULT_GUARD: u64 = 1 << 20;

/// Default bound on the number of pairs in [`commutator_set`].
pub const DEFAULT_PAIR_CAP: u128 = 1 << 24;

/// The derived subgroup of `Syl₂(A_8)` in cycle notation on leaves `1..=8`.
pub const SYL2_A8_DERIVED: [&str; 8] = [
    "()",
    "(13)(24)(57)(68)",
    "(12)(34)",
    "(14)(23)(57)(68)",
    "(56)(78)",
    "(13)(24)(58)(67)",
    "(12)(34)(56)(78)",
    "(14)(23)(58)(67)",
];

/// Leaf permutation induced by `g`, leaves numbered lexicographically by
/// their child-index words.
pub fn to_leaf_perm(g: &TreeAut) -> LeafPermutation {
    let sig = g.signature();
    let k = sig.depth();
    let n = sig.leaf_count();
    let images = (0..n)
        .map(|leaf| {
            // digits of the leaf word, most significant first
            let mut word = vec![0u32; k];
            let mut rest = leaf;
            for l in (0..k).rev() {
                let p = sig.arity(l) as usize;
                word[l] = (rest % p) as u32;
                rest /= p;
            }
            let mut vertex = 0usize;
            let mut image = 0usize;
            for (l, &x) in word.iter().enumerate() {
                let p = sig.arity(l);
                let y = (x + g.label(l, vertex)) % p;
                image = image * p as usize + y as usize;
                vertex = vertex * p as usize + x as usize;
            }
            image as u32
        })
        .collect();
    LeafPermutation::from_images(images).expect("tree automorphisms permute leaves")
}

pub fn permutation_parity(p: &LeafPermutation) -> Parity {
    p.parity()
}

fn check_guard(order: Option<u64>, sig: &AritySignature, guard: u64) -> Result<u64> {
    match order {
        Some(o) if o <= guard => Ok(o),
        Some(o) => Err(WreathError::GuardExceeded {
            order: o.to_string(),
            guard,
        }),
        None => Err(WreathError::GuardExceeded {
            order: format!("2^{:.1}", sig.log2_order()),
            guard,
        }),
    }
}

/// Element with mixed-radix index `index` over all labels, level-major.
fn element_at(sig: &AritySignature, mut index: u64) -> TreeAut {
    let levels: Vec<Vec<u32>> = (0..sig.depth())
        .map(|l| {
            let p = sig.arity(l) as u64;
            (0..sig.vertex_count(l))
                .map(|_| {
                    let e = (index % p) as u32;
                    index /= p;
                    e
                })
                .collect()
        })
        .collect();
    TreeAut::from_levels(sig, &levels).expect("labels reduced by construction")
}

/// Every element of the group. `SylowAlt` is the full binary tower filtered
/// by leaf-permutation parity; derived kinds are computed by closure.
pub fn enumerate_group(id: &GroupId, guard: u64) -> Result<Vec<TreeAut>> {
    let sig = id.signature();
    match id.kind() {
        GroupKind::FullWreath => {
            let order = check_guard(sig.order(), sig, guard)?;
            Ok((0..order)
                .into_par_iter()
                .map(|i| element_at(sig, i))
                .collect())
        }
        GroupKind::SylowAlt => {
            let order = check_guard(sig.order(), sig, guard.saturating_mul(2))?;
            Ok((0..order)
                .into_par_iter()
                .map(|i| element_at(sig, i))
                .filter(|g| to_leaf_perm(g).parity() == Parity::Even)
                .collect())
        }
        GroupKind::DerivedFullWreath | GroupKind::DerivedSylowAlt => {
            let gens = standard_generators(&id.parent())?;
            let mut out: Vec<TreeAut> = derived_subgroup_closure(&gens, guard)?
                .into_iter()
                .collect();
            out.sort();
            Ok(out)
        }
    }
}

/// Subgroup generated by `seeds` and all their conjugates under
/// `conjugators`: the normal closure inside `⟨conjugators⟩`.
pub fn normal_closure(
    seeds: &[TreeAut],
    conjugators: &[TreeAut],
    guard: u64,
) -> Result<HashSet<TreeAut>> {
    let sig = match seeds.first().or(conjugators.first()) {
        Some(g) => g.signature().clone(),
        None => return Ok(HashSet::new()),
    };
    let e = TreeAut::identity(&sig);
    let mut set: HashSet<TreeAut> = HashSet::from([e.clone()]);
    let mut elems = vec![e];
    let mut gens: Vec<TreeAut> = Vec::new();
    let mut pending: Vec<TreeAut> = seeds.iter().filter(|s| !s.is_identity()).cloned().collect();
    let conj_inv: Vec<TreeAut> = conjugators.iter().map(TreeAut::inverse).collect();

    while !pending.is_empty() {
        let start_new = gens.len();
        for t in pending.drain(..) {
            if !gens.contains(&t) {
                gens.push(t);
            }
        }
        // old elements times new generators, then BFS with every generator
        let mut i = 0;
        let old_len = elems.len();
        while i < elems.len() {
            let from = if i < old_len { start_new } else { 0 };
            for gen in &gens[from..] {
                let y = &elems[i] * gen;
                if set.insert(y.clone()) {
                    if set.len() as u64 > guard {
                        return Err(WreathError::GuardExceeded {
                            order: format!(">{guard}"),
                            guard,
                        });
                    }
                    elems.push(y);
                }
            }
            i += 1;
        }
        for t in &gens {
            for (c, ci) in conjugators.iter().zip(&conj_inv) {
                let y = &(c * t) * ci;
                if !set.contains(&y) && !pending.contains(&y) {
                    pending.push(y);
                }
            }
        }
    }
    Ok(set)
}

/// Derived subgroup of `⟨generators⟩`: the normal closure of all pairwise
/// generator commutators.
pub fn derived_subgroup_closure(generators: &[TreeAut], guard: u64) -> Result<HashSet<TreeAut>> {
    let mut seeds = Vec::new();
    for (i, a) in generators.iter().enumerate() {
        for b in &generators[i + 1..] {
            seeds.push(a.commutator(b)?);
        }
    }
    if seeds.iter().all(TreeAut::is_identity) {
        return Ok(generators
            .first()
            .map(|g| HashSet::from([TreeAut::identity(g.signature())]))
            .unwrap_or_default());
    }
    normal_closure(&seeds, generators, guard)
}

/// Subgroup generated by `generators`.
pub fn subgroup_closure(generators: &[TreeAut], guard: u64) -> Result<HashSet<TreeAut>> {
    normal_closure(generators, &[], guard)
}

/// `{[a, b] : a, b ∈ elements}` by exhaustive pairs.
pub fn commutator_set(elements: &[TreeAut], pair_cap: u128) -> Result<HashSet<TreeAut>> {
    let pairs = (elements.len() as u128).pow(2);
    if pairs > pair_cap {
        return Err(WreathError::CapExceeded {
            pairs,
            cap: pair_cap,
        });
    }
    let inverses: Vec<TreeAut> = elements.par_iter().map(TreeAut::inverse).collect();
    Ok(elements
        .par_iter()
        .zip(&inverses)
        .map(|(a, ai)| {
            elements
                .iter()
                .zip(&inverses)
                .map(|(b, bi)| &(&(a * b) * ai) * bi)
                .collect::<HashSet<_>>()
        })
        .reduce(HashSet::new, |mut x, y| {
            x.extend(y);
            x
        }))
}

/// Derived subgroup of the group generated by `elements`.
pub fn second_derived(elements: &[TreeAut], guard: u64) -> Result<HashSet<TreeAut>> {
    derived_subgroup_closure(elements, guard)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{is_in_bk_derived, is_in_gk};

    fn bin(k: usize) -> AritySignature {
        AritySignature::binary(k).unwrap()
    }

    fn full(sig: AritySignature) -> GroupId {
        GroupId::new(GroupKind::FullWreath, sig).unwrap()
    }

    fn alt(k: usize) -> GroupId {
        GroupId::new(GroupKind::SylowAlt, bin(k)).unwrap()
    }

    #[test]
    fn leaf_perm_examples() {
        let e = TreeAut::identity(&bin(3));
        assert!(to_leaf_perm(&e).is_identity());
        let swap = TreeAut::identity(&bin(1)).with_label(0, 0, 1).unwrap();
        assert_eq!(to_leaf_perm(&swap).to_string(), "(1 2)");
        let root = TreeAut::identity(&bin(2)).with_label(0, 0, 1).unwrap();
        assert_eq!(to_leaf_perm(&root).to_string(), "(1 3)(2 4)");
        let c3 = TreeAut::identity(&AritySignature::new(vec![3]).unwrap())
            .with_label(0, 0, 1)
            .unwrap();
        assert_eq!(to_leaf_perm(&c3).to_string(), "(1 2 3)");
    }

    #[test]
    fn homomorphism_exhaustive_b2_b3_c3c3() {
        for sig in [bin(2), bin(3), AritySignature::new(vec![3, 3]).unwrap()] {
            let elems = enumerate_group(&full(sig), DEFAULT_GUARD).unwrap();
            let perms: Vec<_> = elems.iter().map(to_leaf_perm).collect();
            for (g, pg) in elems.iter().zip(&perms) {
                for (h, ph) in elems.iter().zip(&perms) {
                    assert_eq!(to_leaf_perm(&(g * h)), pg.compose(ph));
                }
            }
            // faithful
            let distinct: HashSet<_> = perms.iter().collect();
            assert_eq!(distinct.len(), elems.len());
        }
    }

    #[test]
    fn parity_matches_gk() {
        for g in enumerate_group(&full(bin(3)), DEFAULT_GUARD).unwrap() {
            let even = permutation_parity(&to_leaf_perm(&g)) == Parity::Even;
            assert_eq!(even, is_in_gk(&g).unwrap());
        }
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(
            enumerate_group(&full(bin(2)), DEFAULT_GUARD).unwrap().len(),
            8
        );
        assert_eq!(enumerate_group(&alt(3), DEFAULT_GUARD).unwrap().len(), 64);
        let c3c3 = full(AritySignature::new(vec![3, 3]).unwrap());
        assert_eq!(enumerate_group(&c3c3, DEFAULT_GUARD).unwrap().len(), 81);
    }

    #[test]
    fn guard_is_enforced() {
        assert!(matches!(
            enumerate_group(&full(bin(5)), DEFAULT_GUARD),
            Err(WreathError::GuardExceeded { .. })
        ));
        assert!(matches!(
            enumerate_group(&full(bin(3)), 100),
            Err(WreathError::GuardExceeded { .. })
        ));
        let gens = standard_generators(&full(bin(4))).unwrap();
        assert!(matches!(
            subgroup_closure(&gens, 1000),
            Err(WreathError::GuardExceeded { .. })
        ));
    }

    #[test]
    fn closure_orders_of_generators() {
        let b2 = standard_generators(&full(bin(2))).unwrap();
        assert_eq!(subgroup_closure(&b2, DEFAULT_GUARD).unwrap().len(), 8);
        let g3 = standard_generators(&alt(3)).unwrap();
        assert_eq!(subgroup_closure(&g3, DEFAULT_GUARD).unwrap().len(), 64);
        let c5 = standard_generators(&full(AritySignature::new(vec![5]).unwrap())).unwrap();
        assert_eq!(subgroup_closure(&c5, DEFAULT_GUARD).unwrap().len(), 5);
    }

    #[test]
    fn abelian_generators_have_trivial_derived() {
        let c = TreeAut::identity(&bin(3)).with_label(0, 0, 1).unwrap();
        let d = TreeAut::identity(&bin(3))
            .with_label(1, 0, 1)
            .unwrap()
            .with_label(1, 1, 1)
            .unwrap();
        let derived = derived_subgroup_closure(&[c, d], DEFAULT_GUARD).unwrap();
        assert_eq!(derived.len(), 1);
        assert!(derived.iter().next().unwrap().is_identity());
    }

    #[test]
    fn b2_derived_matches_commutator_set() {
        let gens = standard_generators(&full(bin(2))).unwrap();
        let derived = derived_subgroup_closure(&gens, DEFAULT_GUARD).unwrap();
        assert_eq!(derived.len(), 2);
        let all = enumerate_group(&full(bin(2)), DEFAULT_GUARD).unwrap();
        assert_eq!(commutator_set(&all, DEFAULT_PAIR_CAP).unwrap(), derived);
        for g in &derived {
            assert!(is_in_bk_derived(g).unwrap());
        }
    }

    #[test]
    fn commutator_set_basics() {
        let e = TreeAut::identity(&bin(2));
        let set = commutator_set(std::slice::from_ref(&e), DEFAULT_PAIR_CAP).unwrap();
        assert_eq!(set, HashSet::from([e]));
        let all = enumerate_group(&full(bin(3)), DEFAULT_GUARD).unwrap();
        assert!(matches!(
            commutator_set(&all, 1000),
            Err(WreathError::CapExceeded { .. })
        ));
    }

    #[test]
    fn g3_derived_is_the_listed_set() {
        let gens = standard_generators(&alt(3)).unwrap();
        let derived = derived_subgroup_closure(&gens, DEFAULT_GUARD).unwrap();
        let perms: HashSet<LeafPermutation> = derived.iter().map(to_leaf_perm).collect();
        let listed: HashSet<LeafPermutation> = SYL2_A8_DERIVED
            .iter()
            .map(|s| LeafPermutation::parse_cycles(s, 8).unwrap())
            .collect();
        assert_eq!(perms, listed);
    }

    #[test]
    fn second_derived_of_g2_and_g3() {
        let g2 = enumerate_group(&alt(2), DEFAULT_GUARD).unwrap();
        let d = second_derived(&g2, DEFAULT_GUARD).unwrap();
        assert_eq!(d.len(), 1);
        let g3d: Vec<_> = enumerate_group(
            &GroupId::new(GroupKind::DerivedSylowAlt, bin(3)).unwrap(),
            DEFAULT_GUARD,
        )
        .unwrap();
        let dd = second_derived(&g3d, DEFAULT_GUARD).unwrap();
        assert_eq!(dd.len(), 1);
    }

    #[test]
    fn b3_second_derived_states() {
        let b3d = enumerate_group(
            &GroupId::new(GroupKind::DerivedFullWreath, bin(3)).unwrap(),
            DEFAULT_GUARD,
        )
        .unwrap();
        assert_eq!(b3d.len(), 16);
        let dd = second_derived(&b3d, DEFAULT_GUARD).unwrap();
        for g in &dd {
            assert_eq!(g.label(2, 0), g.label(2, 1));
            assert_eq!(g.label(2, 2), g.label(2, 3));
        }
    }
}

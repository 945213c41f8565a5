//! Membership predicates, samplers and generating sets for the wreath tower
//! `≀ C_{p_i}`, its binary case `B_k ≅ Syl₂(S_{2^k})`, the even subgroup
//! `G_k ≅ Syl₂(A_{2^k})`, and their derived subgroups.
//!
//! Several predicates are computed along two independent routes; a
//! disagreement is an internal invariant violation and panics.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, WreathError};
use crate::signature::AritySignature;
use crate::tree::TreeAut;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// The full tower `≀ C_{p_i}` (`B_k` when binary).
    FullWreath,
    /// `G_k`, the even-leaf-permutation subgroup of `B_k`.
    SylowAlt,
    DerivedFullWreath,
    DerivedSylowAlt,
}

impl GroupKind {
    pub fn is_derived(self) -> bool {
        matches!(
            self,
            GroupKind::DerivedFullWreath | GroupKind::DerivedSylowAlt
        )
    }

    pub fn requires_binary(self) -> bool {
        matches!(self, GroupKind::SylowAlt | GroupKind::DerivedSylowAlt)
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::FullWreath => "wreath",
            GroupKind::SylowAlt => "sylow-a",
            GroupKind::DerivedFullWreath => "derived-wreath",
            GroupKind::DerivedSylowAlt => "derived-sylow-a",
        })
    }
}

impl FromStr for GroupKind {
    type Err = WreathError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wreath" | "sylow-s" => Ok(GroupKind::FullWreath),
            "sylow-a" => Ok(GroupKind::SylowAlt),
            "derived-wreath" => Ok(GroupKind::DerivedFullWreath),
            "derived-sylow-a" => Ok(GroupKind::DerivedSylowAlt),
            other => Err(WreathError::UnsupportedKind(other.to_string())),
        }
    }
}

/// A group kind over a concrete signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupId {
    kind: GroupKind,
    sig: AritySignature,
}

impl GroupId {
    pub fn new(kind: GroupKind, sig: AritySignature) -> Result<Self> {
        if kind.requires_binary() && !sig.is_binary() {
            return Err(WreathError::NonBinarySignature(sig));
        }
        Ok(Self { kind, sig })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn signature(&self) -> &AritySignature {
        &self.sig
    }

    /// The group this one is the derived subgroup of (or itself).
    pub fn parent(&self) -> GroupId {
        let kind = match self.kind {
            GroupKind::DerivedFullWreath => GroupKind::FullWreath,
            GroupKind::DerivedSylowAlt => GroupKind::SylowAlt,
            k => k,
        };
        GroupId {
            kind,
            sig: self.sig.clone(),
        }
    }

    pub fn contains(&self, g: &TreeAut) -> Result<bool> {
        if g.signature() != &self.sig {
            return Err(WreathError::SignatureMismatch {
                left: self.sig.clone(),
                right: g.signature().clone(),
            });
        }
        match self.kind {
            GroupKind::FullWreath => Ok(true),
            GroupKind::SylowAlt => is_in_gk(g),
            GroupKind::DerivedFullWreath if self.sig.is_binary() => {
                let by_parity = is_in_bk_derived(g)?;
                assert_eq!(
                    by_parity,
                    is_in_wreath_derived(g),
                    "B_k' parity criterion disagrees with the section-product criterion on {g:?}"
                );
                Ok(by_parity)
            }
            GroupKind::DerivedFullWreath => Ok(is_in_wreath_derived(g)),
            GroupKind::DerivedSylowAlt => is_in_gk_derived(g),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind, self.sig)
    }
}

fn require_binary(g: &TreeAut) -> Result<()> {
    if g.signature().is_binary() {
        Ok(())
    } else {
        Err(WreathError::NonBinarySignature(g.signature().clone()))
    }
}

/// `r_{p-1} · … · r_1 · r_p` for the level-1 sections `r_1, …, r_p`.
pub fn ordered_section_product(sections: &[TreeAut]) -> TreeAut {
    let (last, rest) = sections
        .split_last()
        .expect("ordered_section_product: no sections");
    let mut acc = TreeAut::identity(last.signature());
    for r in rest.iter().rev() {
        acc = &acc * r;
    }
    &acc * last
}

/// `G_k` membership through `(g_1, g_2)σ^i ∈ G_k ⇔ g_1 g_2 ∈ G_{k-1}`, with
/// `G_1 = ⟨e⟩`.
pub fn gk_by_recursion(g: &TreeAut) -> Result<bool> {
    require_binary(g)?;
    Ok(gk_recursive(g))
}

fn gk_recursive(g: &TreeAut) -> bool {
    match g.depth() {
        0 => true,
        1 => g.root_label() == 0,
        _ => {
            let (_, s) = g.decompose().expect("depth >= 2");
            gk_recursive(&(&s[0] * &s[1]))
        }
    }
}

/// `G_k` membership through the parity of the bottom-level index.
pub fn gk_by_parity(g: &TreeAut) -> Result<bool> {
    require_binary(g)?;
    Ok(match g.depth() {
        0 => true,
        k => g.level_index(k - 1)? % 2 == 0,
    })
}

pub fn is_in_gk(g: &TreeAut) -> Result<bool> {
    let by_recursion = gk_by_recursion(g)?;
    let by_parity = gk_by_parity(g)?;
    assert_eq!(
        by_recursion, by_parity,
        "G_k recursion and bottom-level parity disagree on {g:?}"
    );
    Ok(by_recursion)
}

/// `B_k'`: every level carries an even number of active vertices.
pub fn is_in_bk_derived(g: &TreeAut) -> Result<bool> {
    require_binary(g)?;
    Ok(g.level_profile().all_even())
}

/// `G_k'` by level parities: `g ∈ G_k`, `In_l(g)` even for `l < k-1`, and
/// each level-1 section has even index on its own bottom level.
pub fn gk_derived_by_level_parity(g: &TreeAut) -> Result<bool> {
    require_binary(g)?;
    let k = g.depth();
    if k == 0 {
        return Ok(true);
    }
    if !is_in_gk(g)? {
        return Ok(false);
    }
    let prof = g.level_profile();
    if prof.counts[..k - 1].iter().any(|c| c % 2 != 0) {
        return Ok(false);
    }
    Ok(k < 2 || prof.per_subtree[k - 1].iter().all(|c| c % 2 == 0))
}

/// `G_k'` by sections: trivial root, `g_1, g_2 ∈ G_{k-1}` and
/// `g_1 g_2 ∈ B_{k-1}'`.
pub fn gk_derived_by_sections(g: &TreeAut) -> Result<bool> {
    require_binary(g)?;
    match g.depth() {
        0 => Ok(true),
        1 => Ok(g.is_identity()),
        _ => {
            let (root, s) = g.decompose()?;
            Ok(root == 0
                && is_in_gk(&s[0])?
                && is_in_gk(&s[1])?
                && is_in_bk_derived(&(&s[0] * &s[1]))?)
        }
    }
}

/// The section criterion read without the trivial-root requirement. Kept to
/// exhibit the elements on which the two readings differ.
pub fn gk_derived_by_sections_any_root(g: &TreeAut) -> Result<bool> {
    require_binary(g)?;
    match g.depth() {
        0 => Ok(true),
        1 => Ok(g.is_identity()),
        _ => {
            let (_, s) = g.decompose()?;
            Ok(is_in_gk(&s[0])? && is_in_gk(&s[1])? && is_in_bk_derived(&(&s[0] * &s[1]))?)
        }
    }
}

pub fn is_in_gk_derived(g: &TreeAut) -> Result<bool> {
    let by_levels = gk_derived_by_level_parity(g)?;
    let by_sections = gk_derived_by_sections(g)?;
    assert_eq!(
        by_levels, by_sections,
        "G_k' level-parity and section criteria disagree on {g:?}"
    );
    Ok(by_levels)
}

/// Derived subgroup of the general tower: trivial root and
/// `r_{p-1} ⋯ r_1 r_p` in the derived subgroup of the tower one level down.
pub fn is_in_wreath_derived(w: &TreeAut) -> bool {
    if w.depth() <= 1 {
        return w.is_identity();
    }
    let (root, sections) = w.decompose().expect("depth >= 2");
    root == 0 && is_in_wreath_derived(&ordered_section_product(&sections))
}

/// Uniform even-weight vector of length `n` over `Z_2`.
fn even_weight_bits<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    if n > 0 {
        v[n - 1] = v[..n - 1].iter().sum::<u32>() % 2;
    }
    v
}

/// Uniform sample from the derived subgroup of the general tower: uniform
/// `r_1, …, r_{p-1}`, a recursive sample `x`, and `r_p = (r_{p-1} ⋯ r_1)⁻¹ x`.
fn sample_wreath_derived<R: Rng + ?Sized>(sig: &AritySignature, rng: &mut R) -> TreeAut {
    if sig.depth() <= 1 {
        return TreeAut::identity(sig);
    }
    let p = sig.arity(0);
    let inner = sig.truncated(1);
    let mut sections: Vec<TreeAut> = (0..p - 1)
        .map(|_| TreeAut::random_with(&inner, rng))
        .collect();
    let x = sample_wreath_derived(&inner, rng);
    let mut prefix = TreeAut::identity(&inner);
    for r in sections.iter().rev() {
        prefix = &prefix * r;
    }
    sections.push(&prefix.inverse() * &x);
    TreeAut::compose_from(0, &sections, p).expect("sections share a signature")
}

pub fn sample_derived_with<R: Rng + ?Sized>(id: &GroupId, rng: &mut R) -> Result<TreeAut> {
    let sig = id.signature();
    let k = sig.depth();
    match id.kind() {
        GroupKind::DerivedFullWreath if sig.is_binary() => {
            let levels: Vec<Vec<u32>> = (0..k)
                .map(|l| even_weight_bits(rng, sig.vertex_count(l)))
                .collect();
            TreeAut::from_levels(sig, &levels)
        }
        GroupKind::DerivedFullWreath => Ok(sample_wreath_derived(sig, rng)),
        GroupKind::DerivedSylowAlt => {
            if k <= 2 {
                return Ok(TreeAut::identity(sig));
            }
            let mut levels: Vec<Vec<u32>> = (0..k - 1)
                .map(|l| even_weight_bits(rng, sig.vertex_count(l)))
                .collect();
            let half = sig.vertex_count(k - 1) / 2;
            let mut bottom = even_weight_bits(rng, half);
            bottom.extend(even_weight_bits(rng, half));
            levels.push(bottom);
            TreeAut::from_levels(sig, &levels)
        }
        other => Err(WreathError::UnsupportedKind(format!(
            "sample_derived needs a derived kind, got {other}"
        ))),
    }
}

/// Deterministic derived-subgroup sample.
pub fn sample_derived(id: &GroupId, seed: u64) -> Result<TreeAut> {
    sample_derived_with(id, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Generating set: for the full tower, one generator per level with label 1
/// on the leftmost vertex. For `G_k` the bottom-level generator is replaced by
/// activations at the first vertex of each half of the bottom level.
pub fn standard_generators(id: &GroupId) -> Result<Vec<TreeAut>> {
    let sig = id.signature();
    let k = sig.depth();
    let e = TreeAut::identity(sig);
    match id.kind() {
        GroupKind::FullWreath => (0..k).map(|l| e.with_label(l, 0, 1)).collect(),
        GroupKind::SylowAlt => {
            if k <= 1 {
                return Ok(vec![e]);
            }
            let mut gens = (0..k - 1)
                .map(|l| e.with_label(l, 0, 1))
                .collect::<Result<Vec<_>>>()?;
            let half = sig.vertex_count(k - 1) / 2;
            gens.push(e.with_label(k - 1, 0, 1)?.with_label(k - 1, half, 1)?);
            Ok(gens)
        }
        other => Err(WreathError::UnsupportedKind(format!(
            "standard_generators needs a non-derived kind, got {other}"
        ))),
    }
}

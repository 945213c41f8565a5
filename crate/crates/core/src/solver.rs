//! Single-commutator witnesses for derived-subgroup elements.
//!
//! Every derived element `w = (r_1, …, r_{p-1}, r_p)` of `B ≀ C_p` satisfies
//! `r_p = r_1⁻¹ ⋯ r_{p-1}⁻¹ x` with `x = r_{p-1} ⋯ r_1 r_p ∈ B'`. Given
//! `x = [f, g]` in `B`, [`lift_commutator`] writes `w = [a, b]` with
//!
//! ```text
//! a = (e, …, e, a_{1,p}) σ        b = (a_{2,1}, …, a_{2,p})
//! a_{2,1} = (f⁻¹)^{r_1⁻¹ ⋯ r_{p-1}⁻¹}
//! a_{2,i} = r_{i-1} a_{2,i-1}
//! a_{1,p} = g^{a_{2,p}⁻¹}
//! ```
//!
//! Recursing down the tower gives a witness for every derived element.
//! Witnesses are always multiplied back out before they are returned.

use crate::error::{Result, WreathError};
use crate::groups::{
    is_in_bk_derived, is_in_gk, is_in_gk_derived, is_in_wreath_derived, ordered_section_product,
};
use crate::tree::TreeAut;

/// A verified pair `(a, b)` with `[a, b] = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorWitness {
    a: TreeAut,
    b: TreeAut,
    target: TreeAut,
    a_in_sylow_alt: bool,
    b_in_sylow_alt: bool,
    recursion_depth: usize,
}

impl CommutatorWitness {
    /// Checks `[a, b] = target` and recomputes the membership flags.
    pub fn verify(a: TreeAut, b: TreeAut, target: TreeAut, recursion_depth: usize) -> Result<Self> {
        let product = a.commutator(&b)?;
        if product != target {
            return Err(WreathError::VerificationFailed(format!(
                "[a, b] = {product:?} but target is {target:?}"
            )));
        }
        let (a_in_sylow_alt, b_in_sylow_alt) = if a.signature().is_binary() {
            (is_in_gk(&a)?, is_in_gk(&b)?)
        } else {
            (false, false)
        };
        Ok(Self {
            a,
            b,
            target,
            a_in_sylow_alt,
            b_in_sylow_alt,
            recursion_depth,
        })
    }

    fn trivial(target: &TreeAut) -> Result<Self> {
        let e = TreeAut::identity(target.signature());
        Self::verify(e.clone(), e, target.clone(), 0)
    }

    pub fn a(&self) -> &TreeAut {
        &self.a
    }

    pub fn b(&self) -> &TreeAut {
        &self.b
    }

    pub fn target(&self) -> &TreeAut {
        &self.target
    }

    /// `a ∈ G_k`; always false for non-binary signatures.
    pub fn a_in_sylow_alt(&self) -> bool {
        self.a_in_sylow_alt
    }

    pub fn b_in_sylow_alt(&self) -> bool {
        self.b_in_sylow_alt
    }

    /// Number of lifting steps used to build the witness.
    pub fn recursion_depth(&self) -> usize {
        self.recursion_depth
    }

    pub fn into_pair(self) -> (TreeAut, TreeAut) {
        (self.a, self.b)
    }
}

/// Splits a derived element into its first `p - 1` sections and
/// `x = r_{p-1} ⋯ r_1 r_p`, which lies in the derived subgroup one level down.
pub fn derived_decompose(w: &TreeAut) -> Result<(Vec<TreeAut>, TreeAut)> {
    if w.depth() == 0 {
        return Err(WreathError::DepthZero);
    }
    let (root, mut sections) = w.decompose()?;
    if root != 0 {
        return Err(WreathError::NotInDerived(format!(
            "root label {root} is nontrivial"
        )));
    }
    let x = ordered_section_product(&sections);
    if !is_in_wreath_derived(&x) {
        return Err(WreathError::NotInDerived(format!(
            "section product {x:?} is not in the derived subgroup at depth {}",
            x.depth()
        )));
    }
    sections.pop();
    Ok((sections, x))
}

/// Builds and verifies the witness for
/// `w = (r_1, …, r_{p-1}, r_1⁻¹ ⋯ r_{p-1}⁻¹ [f, g])`.
pub fn lift_commutator(r: &[TreeAut], f: &TreeAut, g: &TreeAut) -> Result<CommutatorWitness> {
    lift_with_depth(r, f, g, 1)
}

fn lift_with_depth(
    r: &[TreeAut],
    f: &TreeAut,
    g: &TreeAut,
    recursion_depth: usize,
) -> Result<CommutatorWitness> {
    let inner = f.signature();
    if g.signature() != inner {
        return Err(WreathError::SignatureMismatch {
            left: inner.clone(),
            right: g.signature().clone(),
        });
    }
    if let Some(bad) = r.iter().find(|s| s.signature() != inner) {
        return Err(WreathError::SignatureMismatch {
            left: inner.clone(),
            right: bad.signature().clone(),
        });
    }
    let p = r.len() as u32 + 1;

    // r_1⁻¹ ⋯ r_{p-1}⁻¹
    let mut r_inv_prod = TreeAut::identity(inner);
    for ri in r {
        r_inv_prod = &r_inv_prod * &ri.inverse();
    }

    let mut b_sections = Vec::with_capacity(p as usize);
    b_sections.push(f.inverse().conjugate(&r_inv_prod)?);
    for ri in r {
        let prev = b_sections.last().expect("nonempty");
        b_sections.push(ri * prev);
    }
    let last_b = b_sections.last().expect("nonempty");
    let a_last = g.conjugate(&last_b.inverse())?;

    let mut a_sections = vec![TreeAut::identity(inner); p as usize - 1];
    a_sections.push(a_last);

    let mut target_sections: Vec<TreeAut> = r.to_vec();
    target_sections.push(&r_inv_prod * &f.commutator(g)?);

    let a = TreeAut::compose_from(1 % p, &a_sections, p)?;
    let b = TreeAut::compose_from(0, &b_sections, p)?;
    let target = TreeAut::compose_from(0, &target_sections, p)?;
    CommutatorWitness::verify(a, b, target, recursion_depth)
}

/// Witness for any element of the derived subgroup of `≀ C_{p_i}`.
pub fn solve_cyclic_tower(w: &TreeAut) -> Result<CommutatorWitness> {
    if w.depth() == 0 {
        return Err(WreathError::DepthZero);
    }
    if !is_in_wreath_derived(w) {
        return Err(WreathError::NotInDerived(
            "element fails the section-product criterion".into(),
        ));
    }
    solve_tower_rec(w)
}

fn solve_tower_rec(w: &TreeAut) -> Result<CommutatorWitness> {
    if w.is_identity() {
        return CommutatorWitness::trivial(w);
    }
    if w.depth() <= 1 {
        return Err(WreathError::NotInDerived(format!(
            "nontrivial element {w:?} in an abelian base group"
        )));
    }
    let (r, x) = derived_decompose(w)?;
    let inner = solve_tower_rec(&x)?;
    let witness = lift_with_depth(&r, inner.a(), inner.b(), inner.recursion_depth() + 1)?;
    ensure_target(&witness, w)?;
    Ok(witness)
}

fn ensure_target(witness: &CommutatorWitness, w: &TreeAut) -> Result<()> {
    if witness.target() != w {
        return Err(WreathError::VerificationFailed(format!(
            "lifted target {:?} differs from input {w:?}",
            witness.target()
        )));
    }
    Ok(())
}

/// Witness `w = [a, b]` for `w ∈ B_k'` with `a ∈ G_k`.
pub fn solve_bk_derived(w: &TreeAut) -> Result<CommutatorWitness> {
    if !is_in_bk_derived(w)? {
        return Err(WreathError::NotInDerived(format!(
            "level indexes {:?} are not all even",
            w.level_profile().counts
        )));
    }
    solve_bk_rec(w)
}

fn solve_bk_rec(w: &TreeAut) -> Result<CommutatorWitness> {
    if w.is_identity() {
        return CommutatorWitness::trivial(w);
    }
    let (r, x) = derived_decompose(w)?;
    // x = [f, g] with g ∈ G_{k-1}: solve x⁻¹ = [a', b'] with a' ∈ G_{k-1}
    // and swap, since [a', b']⁻¹ = [b', a'].
    let inner = solve_bk_rec(&x.inverse())?;
    let (g, f) = (inner.a(), inner.b());
    let witness = lift_with_depth(&r, f, g, inner.recursion_depth() + 1)?;
    ensure_target(&witness, w)?;
    if !witness.a_in_sylow_alt() {
        return Err(WreathError::VerificationFailed(format!(
            "first witness element {:?} is not in G_k",
            witness.a()
        )));
    }
    Ok(witness)
}

/// Witness `w = [a, b]` for `w ∈ G_k'` with both `a, b ∈ G_k`.
pub fn solve_gk_derived(w: &TreeAut) -> Result<CommutatorWitness> {
    if !is_in_gk_derived(w)? {
        return Err(WreathError::NotInDerived(format!(
            "element with level profile {:?} is not in G_k'",
            w.level_profile()
        )));
    }
    if w.is_identity() {
        return CommutatorWitness::trivial(w);
    }
    let (r, x) = derived_decompose(w)?;
    let inner = solve_bk_rec(&x.inverse())?;
    let (g, f) = (inner.a(), inner.b());
    let witness = lift_with_depth(&r, f, g, inner.recursion_depth() + 1)?;
    ensure_target(&witness, w)?;
    if !(witness.a_in_sylow_alt() && witness.b_in_sylow_alt()) {
        return Err(WreathError::VerificationFailed(format!(
            "witness pair not inside G_k (a: {}, b: {})",
            witness.a_in_sylow_alt(),
            witness.b_in_sylow_alt()
        )));
    }
    Ok(witness)
}

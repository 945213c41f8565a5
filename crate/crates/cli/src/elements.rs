use std::io::Write;
use std::path::{Path, PathBuf};

use wrcomm_core::groups::{
    gk_by_parity, gk_by_recursion, gk_derived_by_level_parity, gk_derived_by_sections,
    is_in_bk_derived, is_in_gk, is_in_wreath_derived, sample_derived, GroupId, GroupKind,
};
use wrcomm_core::oracle::{to_leaf_perm, Parity};
use wrcomm_core::wrformat::{export_witness, serialize_element, write_element_document};
use wrcomm_core::{
    solve_bk_derived, solve_cyclic_tower, solve_gk_derived, AritySignature, TreeAut,
};

use crate::{read_element, write_or_print, CliError, CliResult};

/// Largest leaf count for which verbose mode cross-checks against leaf
/// permutations.
const LEAF_CHECK_LIMIT: usize = 1 << 16;

pub(crate) fn mul(
    inputs: &[PathBuf],
    sig: Option<&AritySignature>,
    dest: Option<&Path>,
    verbose: bool,
    out: &mut dyn Write,
) -> CliResult {
    let [left, right] = inputs else {
        return Err(CliError::Input(format!(
            "mul needs exactly two --in files, got {}",
            inputs.len()
        )));
    };
    let g = read_element(left, sig)?;
    let h = read_element(right, sig)?;
    let gh = g.multiply(&h)?;
    if verbose && gh.signature().leaf_count() <= LEAF_CHECK_LIMIT {
        let (pg, ph, pgh) = (to_leaf_perm(&g), to_leaf_perm(&h), to_leaf_perm(&gh));
        writeln!(out, "left  leaves: {pg}")?;
        writeln!(out, "right leaves: {ph}")?;
        writeln!(out, "product leaves: {pgh}")?;
        if pg.compose(&ph) != pgh {
            return Err(CliError::Internal(format!(
                "portrait product disagrees with leaf composition {}",
                pg.compose(&ph)
            )));
        }
        writeln!(out, "oracle: leaf composition agrees")?;
    }
    write_or_print(out, dest, &write_element_document(&gh))
}

fn criteria(g: &TreeAut, kind: GroupKind) -> CliResult<Vec<(&'static str, bool)>> {
    let binary = g.signature().is_binary();
    Ok(match kind {
        GroupKind::FullWreath => vec![("portrait", true)],
        GroupKind::SylowAlt => {
            let mut v = vec![
                ("section-recursion", gk_by_recursion(g)?),
                ("bottom-parity", gk_by_parity(g)?),
            ];
            if g.signature().leaf_count() <= LEAF_CHECK_LIMIT {
                v.push(("leaf-permutation", to_leaf_perm(g).parity() == Parity::Even));
            }
            v
        }
        GroupKind::DerivedFullWreath if binary => vec![
            ("level-parity", is_in_bk_derived(g)?),
            ("section-product", is_in_wreath_derived(g)),
        ],
        GroupKind::DerivedFullWreath => vec![("section-product", is_in_wreath_derived(g))],
        GroupKind::DerivedSylowAlt => vec![
            ("level-parity", gk_derived_by_level_parity(g)?),
            ("sections", gk_derived_by_sections(g)?),
        ],
    })
}

fn parity_word(n: usize) -> &'static str {
    if n.is_multiple_of(2) {
        "even"
    } else {
        "odd"
    }
}

fn write_profile(g: &TreeAut, verbose: bool, out: &mut dyn Write) -> CliResult {
    let prof = g.level_profile();
    let width = prof
        .per_subtree
        .iter()
        .flatten()
        .max()
        .map_or(1, |m| m.to_string().len())
        .max(1);
    writeln!(
        out,
        "level  In_l  parity{}",
        if verbose { "  per level-1 subtree" } else { "" }
    )?;
    for l in 0..prof.depth() {
        write!(
            out,
            "{l:<5}  {:<4}  {:<6}",
            prof.counts[l],
            parity_word(prof.counts[l])
        )?;
        if verbose {
            let cells: Vec<String> = prof.per_subtree[l]
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect();
            write!(
                out,
                "  {}",
                if cells.is_empty() {
                    "-".to_string()
                } else {
                    cells.join(" ")
                }
            )?;
            if g.signature().vertex_count(l) <= 64 {
                let labels: String = g.level_labels(l).iter().map(|x| x.to_string()).collect();
                write!(out, "  [{labels}]")?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

pub(crate) fn check(
    input: &Path,
    sig: Option<&AritySignature>,
    kind: GroupKind,
    verbose: bool,
    out: &mut dyn Write,
) -> CliResult {
    let g = read_element(input, sig)?;
    let id = GroupId::new(kind, g.signature().clone())?;
    writeln!(out, "signature: {}", g.signature())?;
    writeln!(out, "element: {}", serialize_element(&g))?;
    write_profile(&g, verbose, out)?;
    writeln!(out, "group: {kind}")?;
    let verdicts = criteria(&g, kind)?;
    for (name, v) in &verdicts {
        writeln!(
            out,
            "  {name:<18} {}",
            if *v { "member" } else { "not a member" }
        )?;
    }
    let member = verdicts[0].1;
    if verdicts.iter().any(|(_, v)| *v != member) {
        return Err(CliError::Internal(format!(
            "membership criteria disagree on {}",
            serialize_element(&g)
        )));
    }
    writeln!(
        out,
        "verdict: {}",
        if member { "member" } else { "not a member" }
    )?;
    if member {
        Ok(())
    } else {
        Err(CliError::Negative(format!("element is not in {id}")))
    }
}

pub(crate) fn solve(
    input: &Path,
    sig: Option<&AritySignature>,
    kind: GroupKind,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let g = read_element(input, sig)?;
    let kind = match kind {
        GroupKind::FullWreath => GroupKind::DerivedFullWreath,
        GroupKind::SylowAlt => GroupKind::DerivedSylowAlt,
        k => k,
    };
    GroupId::new(kind, g.signature().clone())?;
    let witness = match kind {
        GroupKind::DerivedSylowAlt => solve_gk_derived(&g)?,
        _ if g.signature().is_binary() => solve_bk_derived(&g)?,
        _ => solve_cyclic_tower(&g)?,
    };
    let doc = export_witness(&witness).map_err(|e| CliError::Internal(e.to_string()))?;
    write_or_print(out, dest, &doc)?;
    if dest.is_some() {
        writeln!(out, "recursion_depth: {}", witness.recursion_depth())?;
        writeln!(out, "a_in_sylow_alt: {}", witness.a_in_sylow_alt())?;
        writeln!(out, "b_in_sylow_alt: {}", witness.b_in_sylow_alt())?;
        writeln!(out, "verified: true")?;
    }
    Ok(())
}

pub(crate) fn random(
    sig: &AritySignature,
    kind: GroupKind,
    seed: u64,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let id = GroupId::new(kind, sig.clone())?;
    let g = match kind {
        GroupKind::FullWreath => TreeAut::random(sig, seed),
        GroupKind::SylowAlt => {
            let g = TreeAut::random(sig, seed);
            if sig.depth() == 0 || is_in_gk(&g)? {
                g
            } else {
                // flipping one bottom label changes the leaf parity
                let bottom = sig.depth() - 1;
                g.with_label(bottom, 0, 1 - g.label(bottom, 0))?
            }
        }
        _ => sample_derived(&id, seed)?,
    };
    write_or_print(out, dest, &write_element_document(&g))
}

use std::collections::{BTreeSet, HashSet};
use std::io::Write;

use rayon::prelude::*;
use wrcomm_core::groups::{
    gk_derived_by_level_parity, gk_derived_by_sections, is_in_bk_derived, is_in_gk,
    is_in_wreath_derived, standard_generators, GroupId, GroupKind,
};
use wrcomm_core::oracle::{
    commutator_set, derived_subgroup_closure, enumerate_group, second_derived, to_leaf_perm,
    LeafPermutation, DEFAULT_GUARD, DEFAULT_PAIR_CAP, SYL2_A8_DERIVED,
};
use wrcomm_core::wrformat::serialize_element;
use wrcomm_core::{
    solve_bk_derived, solve_cyclic_tower, solve_gk_derived, AritySignature, TreeAut, WreathError,
};

use crate::{CliError, CliResult, Suite};

/// Number of sampled pairs for the leaf-permutation homomorphism check.
const HOMOMORPHISM_PAIRS: usize = 1 << 14;

struct Report {
    lines: Vec<String>,
    failures: usize,
}

impl Report {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            failures: 0,
        }
    }

    fn info(&mut self, text: String) {
        self.lines.push(text);
    }

    fn check(&mut self, ok: bool, text: String) {
        self.failures += usize::from(!ok);
        self.lines
            .push(format!("  [{}] {text}", if ok { "pass" } else { "FAIL" }));
    }
}

fn count_failures<T: Sync>(
    items: &[T],
    ok: impl Fn(&T) -> Result<bool, WreathError> + Sync,
) -> CliResult<usize> {
    let bad: Result<Vec<bool>, WreathError> = items.par_iter().map(|x| ok(x).map(|b| !b)).collect();
    Ok(bad?.into_iter().filter(|b| *b).count())
}

fn homomorphism_failures(elems: &[TreeAut]) -> (usize, usize) {
    let n = elems.len();
    let pairs: Vec<(usize, usize)> = if n * n <= HOMOMORPHISM_PAIRS {
        (0..n * n).map(|i| (i / n, i % n)).collect()
    } else {
        (0..HOMOMORPHISM_PAIRS)
            .map(|i| {
                (
                    i.wrapping_mul(7919) % n,
                    i.wrapping_mul(104_729).wrapping_add(i / n) % n,
                )
            })
            .collect()
    };
    let bad = pairs
        .par_iter()
        .filter(|&&(i, j)| {
            let (g, h) = (&elems[i], &elems[j]);
            to_leaf_perm(&(g * h)) != to_leaf_perm(g).compose(&to_leaf_perm(h))
        })
        .count();
    (pairs.len(), bad)
}

fn commutator_line(
    report: &mut Report,
    elems: &[TreeAut],
    derived: &HashSet<TreeAut>,
) -> CliResult {
    match commutator_set(elems, DEFAULT_PAIR_CAP) {
        Ok(c) => report.check(
            &c == derived,
            format!("commutator set size {} equals derived subgroup", c.len()),
        ),
        Err(WreathError::CapExceeded { pairs, cap }) => report.info(format!(
            "  [skip] commutator set: {pairs} pairs exceed cap {cap}"
        )),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn wreath_suite(sig: &AritySignature, guard: u64, report: &mut Report) -> CliResult {
    let id = GroupId::new(GroupKind::FullWreath, sig.clone())?;
    let elems = enumerate_group(&id, guard)?;
    let derived: HashSet<TreeAut> = enumerate_group(
        &GroupId::new(GroupKind::DerivedFullWreath, sig.clone())?,
        guard,
    )?
    .into_iter()
    .collect();
    report.info(format!("wreath suite, signature {sig}"));
    report.info(format!("  group order: {}", elems.len()));
    report.info(format!("  derived order: {}", derived.len()));
    report.check(
        sig.order() == Some(elems.len() as u64),
        "enumeration matches the product of arity powers".into(),
    );
    let binary = sig.is_binary();
    let bad = count_failures(&elems, |g| {
        let member = derived.contains(g);
        Ok(is_in_wreath_derived(g) == member && (!binary || is_in_bk_derived(g)? == member))
    })?;
    report.check(
        bad == 0,
        format!("membership criteria agree with closure ({bad} disagreements)"),
    );
    commutator_line(report, &elems, &derived)?;
    let (pairs, bad) = homomorphism_failures(&elems);
    report.check(
        bad == 0,
        format!("leaf permutation is a homomorphism on {pairs} pairs"),
    );
    let derived_vec: Vec<TreeAut> = derived.iter().cloned().collect();
    let bad = count_failures(&derived_vec, |w| {
        let wit = if binary {
            solve_bk_derived(w)?
        } else {
            solve_cyclic_tower(w)?
        };
        Ok(&wit.a().commutator(wit.b())? == w && (!binary || wit.a_in_sylow_alt()))
    })?;
    report.check(
        bad == 0,
        format!(
            "solver witnesses verified for all {} derived elements",
            derived.len()
        ),
    );
    Ok(())
}

/// Root trivial, even bottom index under each level-1 vertex, and equal
/// half parities on every level.
fn fine_structure(g: &TreeAut) -> bool {
    let prof = g.level_profile();
    let k = prof.depth();
    g.root_label() == 0
        && (k < 2 || prof.per_subtree[k - 1].iter().all(|c| c % 2 == 0))
        && (1..k).all(|l| prof.per_subtree[l][0] % 2 == prof.per_subtree[l][1] % 2)
}

fn sylow_suite(sig: &AritySignature, guard: u64, report: &mut Report) -> CliResult {
    let full = enumerate_group(&GroupId::new(GroupKind::FullWreath, sig.clone())?, guard)?;
    let alt = enumerate_group(&GroupId::new(GroupKind::SylowAlt, sig.clone())?, guard)?;
    let derived_id = GroupId::new(GroupKind::DerivedSylowAlt, sig.clone())?;
    let derived: HashSet<TreeAut> = enumerate_group(&derived_id, guard)?.into_iter().collect();
    let alt_set: HashSet<&TreeAut> = alt.iter().collect();
    report.info(format!("sylow suite, signature {sig}"));
    report.info(format!("  B_k order: {}", full.len()));
    report.info(format!("  G_k order: {}", alt.len()));
    report.info(format!("  G_k' order: {}", derived.len()));
    report.check(
        full.len() == 2 * alt.len() || sig.depth() == 0,
        "index of G_k in B_k is 2".into(),
    );

    let bad = count_failures(&full, |g| {
        Ok(is_in_gk(g)? == alt_set.contains(g)
            && gk_derived_by_level_parity(g)? == derived.contains(g)
            && gk_derived_by_sections(g)? == derived.contains(g))
    })?;
    report.check(
        bad == 0,
        format!("G_k and G_k' criteria agree with closure ({bad} disagreements)"),
    );
    commutator_line(report, &alt, &derived)?;

    let bad = count_failures(&full, |g| {
        Ok(is_in_bk_derived(&g.square())? && is_in_gk(&g.square())?)
    })?;
    report.check(bad == 0, "squares of B_k lie in B_k' and in G_k".into());
    let bad = count_failures(&alt, |g| Ok(derived.contains(&g.square())))?;
    report.check(bad == 0, "squares of G_k lie in G_k'".into());
    let bad = count_failures(&full, |g| Ok(!is_in_bk_derived(g)? || alt_set.contains(g)))?;
    report.check(bad == 0, "B_k' is contained in G_k".into());
    let b_gens = standard_generators(&GroupId::new(GroupKind::FullWreath, sig.clone())?)?;
    let bad = count_failures(&alt, |g| {
        Ok(b_gens.iter().all(|c| {
            g.conjugate(c)
                .map(|x| alt_set.contains(&x))
                .unwrap_or(false)
        }))
    })?;
    report.check(bad == 0, "G_k is normal in B_k".into());

    let derived_vec: Vec<TreeAut> = derived.iter().cloned().collect();
    let bad = count_failures(&derived_vec, |g| Ok(fine_structure(g)))?;
    report.check(
        bad == 0,
        "G_k' elements have trivial root and even half parities".into(),
    );
    let second = second_derived(&derived_vec, guard)?;
    report.info(format!("  G_k'' order: {}", second.len()));

    let bad = count_failures(&derived_vec, |w| {
        let wit = solve_gk_derived(w)?;
        Ok(&wit.a().commutator(wit.b())? == w && wit.a_in_sylow_alt() && wit.b_in_sylow_alt())
    })?;
    report.check(
        bad == 0,
        format!(
            "solver witnesses in G_k x G_k for all {} elements",
            derived.len()
        ),
    );

    if sig.leaf_count() <= 8 {
        let cycles: BTreeSet<String> = derived
            .iter()
            .map(|g| to_leaf_perm(g).to_compact_string())
            .collect();
        for c in &cycles {
            report.info(format!("    {c}"));
        }
        if sig.depth() == 3 {
            let expected: BTreeSet<String> =
                SYL2_A8_DERIVED.iter().map(|s| s.to_string()).collect();
            report.check(
                cycles == expected,
                "G_3' matches the listed eight permutations".into(),
            );
        }
    }
    Ok(())
}

pub(crate) fn oracle_verify(
    sig: &AritySignature,
    suite: Suite,
    guard: u64,
    _verbose: bool,
    out: &mut dyn Write,
) -> CliResult {
    if sig.depth() == 0 {
        return Err(CliError::Input(
            "oracle-verify needs depth at least 1".into(),
        ));
    }
    if suite == Suite::Sylow && !sig.is_binary() {
        return Err(WreathError::NonBinarySignature(sig.clone()).into());
    }
    let mut report = Report::new();
    if suite != Suite::Sylow {
        wreath_suite(sig, guard, &mut report)?;
    }
    if suite != Suite::Wreath {
        if sig.is_binary() {
            sylow_suite(sig, guard, &mut report)?;
        } else {
            report.info("sylow suite: skipped, signature is not binary".into());
        }
    }
    for line in &report.lines {
        writeln!(out, "{line}")?;
    }
    if report.failures == 0 {
        writeln!(out, "all checks passed")?;
        Ok(())
    } else {
        Err(CliError::Negative(format!(
            "{} check(s) failed",
            report.failures
        )))
    }
}

pub(crate) fn example_a8(verbose: bool, out: &mut dyn Write) -> CliResult {
    let sig = AritySignature::binary(3)?;
    let g3 = enumerate_group(
        &GroupId::new(GroupKind::SylowAlt, sig.clone())?,
        DEFAULT_GUARD,
    )?;
    writeln!(out, "G_3 = Syl_2(A_8): order {}", g3.len())?;
    let mut derived: Vec<TreeAut> = derived_subgroup_closure(&g3, DEFAULT_GUARD)?
        .into_iter()
        .collect();
    derived.sort_by_key(|g| {
        SYL2_A8_DERIVED
            .iter()
            .position(|s| *s == to_leaf_perm(g).to_compact_string())
    });
    writeln!(out, "G_3' by closure: order {}", derived.len())?;

    let got: BTreeSet<String> = derived
        .iter()
        .map(|g| to_leaf_perm(g).to_compact_string())
        .collect();
    let expected: BTreeSet<String> = SYL2_A8_DERIVED
        .iter()
        .map(|s| LeafPermutation::parse_cycles(s, 8).map(|p| p.to_compact_string()))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Internal(e.to_string()))?;

    for g in &derived {
        let wit = solve_gk_derived(g)?;
        let order = if g.is_identity() { 1 } else { 2 };
        write!(
            out,
            "{:<18} {:<24}",
            to_leaf_perm(g).to_compact_string(),
            serialize_element(g)
        )?;
        writeln!(
            out,
            " order {order}  a = {}  b = {}",
            serialize_element(wit.a()),
            serialize_element(wit.b())
        )?;
        if verbose {
            writeln!(
                out,
                "{:<18} [a,b] leaves {}",
                "",
                to_leaf_perm(&wit.a().commutator(wit.b())?)
            )?;
        }
        if !(wit.a_in_sylow_alt() && wit.b_in_sylow_alt()) {
            return Err(CliError::Internal(format!("witness for {g:?} leaves G_3")));
        }
    }

    let elementary = derived.iter().all(|g| g.square().is_identity())
        && derived
            .iter()
            .all(|g| derived.iter().all(|h| g * h == h * g));
    writeln!(out, "order: {}", derived.len())?;
    writeln!(
        out,
        "elementary abelian: {}",
        if elementary { "yes" } else { "no" }
    )?;

    if got != expected || !elementary {
        for missing in expected.difference(&got) {
            writeln!(out, "- {missing}")?;
        }
        for extra in got.difference(&expected) {
            writeln!(out, "+ {extra}")?;
        }
        return Err(CliError::Negative(
            "G_3' does not match the expected list".into(),
        ));
    }
    writeln!(out, "match: all 8 permutations reproduced")?;
    Ok(())
}

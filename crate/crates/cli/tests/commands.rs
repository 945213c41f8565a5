use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use wrcomm_core::oracle::{enumerate_group, to_leaf_perm, DEFAULT_GUARD};
use wrcomm_core::wrformat::{import_witness, parse_element_document, write_element_document};
use wrcomm_core::{AritySignature, GroupId, GroupKind, TreeAut};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wrcomm").chain(args.iter().copied());
    let code = wrcomm_cli::run_from(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn element_file(dir: &TempDir, name: &str, g: &TreeAut) -> PathBuf {
    write(dir, name, &write_element_document(g))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mul_identity_and_associativity() {
    let dir = TempDir::new().unwrap();
    let sig = AritySignature::new(vec![2, 3, 2]).unwrap();
    let (a, b, c) = (
        TreeAut::random(&sig, 1),
        TreeAut::random(&sig, 2),
        TreeAut::random(&sig, 3),
    );
    let e = element_file(&dir, "e", &TreeAut::identity(&sig));
    let fa = element_file(&dir, "a", &a);
    let fb = element_file(&dir, "b", &b);
    let fc = element_file(&dir, "c", &c);

    let r = run(&["mul", "--in", s(&e), "--in", s(&fa)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(parse_element_document(&r.out, None).unwrap(), a);

    let ab = dir.path().join("ab");
    let bc = dir.path().join("bc");
    assert_eq!(
        run(&["mul", "--in", s(&fa), "--in", s(&fb), "--out", s(&ab)]).code,
        0
    );
    assert_eq!(
        run(&["mul", "--in", s(&fb), s(&fc), "--out", s(&bc)]).code,
        0
    );
    let left = run(&["mul", "--in", s(&ab), "--in", s(&fc)]).out;
    let right = run(&["mul", "--in", s(&fa), "--in", s(&bc)]).out;
    assert_eq!(left, right);
    assert_eq!(
        parse_element_document(&left, None).unwrap(),
        &(&a * &b) * &c
    );
}

#[test]
fn mul_verbose_cross_checks_leaves() {
    let dir = TempDir::new().unwrap();
    let sig = AritySignature::binary(4).unwrap();
    let fa = element_file(&dir, "a", &TreeAut::random(&sig, 5));
    let fb = element_file(&dir, "b", &TreeAut::random(&sig, 6));
    let r = run(&["-v", "mul", "--in", s(&fa), "--in", s(&fb)]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("oracle: leaf composition agrees"));
    assert!(r.out.contains("product leaves: ("));
}

#[test]
fn mul_input_errors() {
    let dir = TempDir::new().unwrap();
    let two = write(&dir, "two", "sig: 2,2\ns1\n");
    let three = write(&dir, "three", "sig: 2,2,2\ns1\n");
    let bad = write(&dir, "bad", "sig: 2,2\ns1(s0,s2)\n");
    assert_eq!(run(&["mul", "--in", s(&two), "--in", s(&three)]).code, 2);
    let r = run(&["mul", "--in", s(&two), "--in", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("byte"), "{}", r.err);
    assert_eq!(run(&["mul", "--in", s(&two)]).code, 2);
    assert_eq!(
        run(&["mul", "--in", s(&two), "--in", "/nonexistent/file"]).code,
        2
    );
    // header and flag disagree
    assert_eq!(
        run(&["mul", "--sig", "2,2,2", "--in", s(&two), "--in", s(&two)]).code,
        2
    );
}

#[test]
fn check_identity_is_member_of_everything() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e", "s0\n");
    for group in [
        "wreath",
        "sylow-s",
        "sylow-a",
        "derived-wreath",
        "derived-sylow-a",
    ] {
        let r = run(&["check", "--sig", "2,2,2", "--in", s(&e), "--group", group]);
        assert_eq!(r.code, 0, "{group}: {}", r.out);
        assert!(r.out.contains("verdict: member"));
    }
}

#[test]
fn check_root_swap_reports_odd_root() {
    let dir = TempDir::new().unwrap();
    let swap = write(&dir, "swap", "sig: 2,2\ns1\n");
    let r = run(&["check", "--in", s(&swap), "--group", "derived-wreath"]);
    assert_eq!(r.code, 1);
    let row = r.out.lines().find(|l| l.starts_with('0')).unwrap();
    assert_eq!(
        row.split_whitespace().collect::<Vec<_>>(),
        ["0", "1", "odd"]
    );
    assert!(r.out.contains("verdict: not a member"));
    let v = run(&["-v", "check", "--in", s(&swap)]);
    assert!(v.out.contains("per level-1 subtree"));
}

#[test]
fn check_rejects_sylow_on_non_binary() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e", "sig: 3,2\ns0\n");
    assert_eq!(run(&["check", "--in", s(&e), "--group", "sylow-a"]).code, 2);
    assert_eq!(
        run(&["check", "--in", s(&e), "--group", "derived-wreath"]).code,
        0
    );
    assert_eq!(run(&["check", "--in", s(&e), "--group", "bogus"]).code, 2);
}

#[test]
fn check_criteria_agree_on_random_depth8() {
    let dir = TempDir::new().unwrap();
    let sig = AritySignature::binary(8).unwrap();
    let mut members = [0usize; 2];
    for seed in 0..1_000u64 {
        let g = if seed % 2 == 0 {
            TreeAut::random(&sig, seed)
        } else {
            let id = GroupId::new(GroupKind::DerivedSylowAlt, sig.clone()).unwrap();
            wrcomm_core::groups::sample_derived(&id, seed).unwrap()
        };
        let f = element_file(&dir, "g", &g);
        for (i, group) in ["derived-wreath", "derived-sylow-a"].iter().enumerate() {
            let code = run(&["check", "--in", s(&f), "--group", group]).code;
            assert!(code == 0 || code == 1, "criteria disagree on seed {seed}");
            members[i] += usize::from(code == 0);
        }
    }
    assert!(members[1] >= 500 && members[0] >= members[1]);
}

#[test]
fn solve_identity_and_witness_file() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "e", "sig: 2,2,2\ns0\n");
    let r = run(&["solve", "--in", s(&e)]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("verified: true"));
    let w = import_witness(&r.out).unwrap();
    assert!(w.a().is_identity() && w.b().is_identity());

    let out = dir.path().join("wit");
    let r2 = run(&["solve", "--in", s(&e), "--out", s(&out)]);
    assert_eq!(r2.code, 0);
    assert!(r2.out.contains("recursion_depth:"));
    assert_eq!(fs::read_to_string(&out).unwrap(), r.out);
}

#[test]
fn solve_every_g3_derived_element() {
    let dir = TempDir::new().unwrap();
    let id = GroupId::new(
        GroupKind::DerivedSylowAlt,
        AritySignature::binary(3).unwrap(),
    )
    .unwrap();
    for g in enumerate_group(&id, DEFAULT_GUARD).unwrap() {
        let f = element_file(&dir, "g", &g);
        let r = run(&["solve", "--in", s(&f), "--group", "derived-sylow-a"]);
        assert_eq!(r.code, 0, "{}", r.err);
        let w = import_witness(&r.out).unwrap();
        assert_eq!(w.target(), &g);
        assert!(w.a_in_sylow_alt() && w.b_in_sylow_alt());
        // same input, same bytes
        assert_eq!(
            run(&["solve", "--in", s(&f), "--group", "derived-sylow-a"]).out,
            r.out
        );
    }
}

#[test]
fn solve_deep_and_non_binary() {
    let dir = TempDir::new().unwrap();
    let r = run(&[
        "random",
        "--sig",
        "2,2,2,2,2,2,2,2,2,2",
        "--group",
        "derived-wreath",
        "--seed",
        "4",
    ]);
    assert_eq!(r.code, 0);
    let f = write(&dir, "w", &r.out);
    let solved = run(&["solve", "--in", s(&f)]);
    assert_eq!(solved.code, 0);
    assert!(import_witness(&solved.out).unwrap().a_in_sylow_alt());

    let r = run(&[
        "random",
        "--sig",
        "3,3,2",
        "--group",
        "derived-wreath",
        "--seed",
        "9",
    ]);
    let f = write(&dir, "c", &r.out);
    let solved = run(&["solve", "--in", s(&f)]);
    assert_eq!(solved.code, 0, "{}", solved.err);
    assert!(solved.out.contains("a_in_sylow_alt: false"));
}

#[test]
fn solve_rejects_non_members() {
    let dir = TempDir::new().unwrap();
    let swap = write(&dir, "swap", "sig: 2,2,2\ns1\n");
    assert_eq!(run(&["solve", "--in", s(&swap)]).code, 1);
    // in B_3' but not in G_3'
    let w = write(&dir, "w", "sig: 2,2,2\ns0(s1,s1)\n");
    assert_eq!(run(&["solve", "--in", s(&w)]).code, 0);
    assert_eq!(
        run(&["solve", "--in", s(&w), "--group", "derived-sylow-a"]).code,
        0
    );
    let w2 = write(&dir, "w2", "sig: 2,2,2\ns0(s0(s1,s0),s0(s1,s0))\n");
    assert_eq!(run(&["solve", "--in", s(&w2)]).code, 0);
    assert_eq!(
        run(&["solve", "--in", s(&w2), "--group", "derived-sylow-a"]).code,
        1
    );
}

#[test]
fn random_respects_group() {
    for (group, sig) in [
        ("sylow-a", "2,2,2,2"),
        ("derived-sylow-a", "2,2,2,2"),
        ("wreath", "3,2"),
    ] {
        for seed in 0..20 {
            let r = run(&[
                "random",
                "--sig",
                sig,
                "--group",
                group,
                "--seed",
                &seed.to_string(),
            ]);
            assert_eq!(r.code, 0);
            let g = parse_element_document(&r.out, None).unwrap();
            let kind: GroupKind = group.parse().unwrap();
            assert!(GroupId::new(kind, g.signature().clone())
                .unwrap()
                .contains(&g)
                .unwrap());
        }
    }
    assert_eq!(
        run(&["random", "--sig", "3,2", "--group", "sylow-a"]).code,
        2
    );
}

#[test]
fn oracle_verify_suites() {
    let r = run(&["oracle-verify", "--sig", "2,2"]);
    assert_eq!(r.code, 0, "{}", r.out);
    assert!(r.out.contains("derived order: 2"));

    let r = run(&["oracle-verify", "--sig", "2,2,2", "--suite", "sylow"]);
    assert_eq!(r.code, 0);
    for p in [
        "(13)(24)(57)(68)",
        "(12)(34)(56)(78)",
        "(14)(23)(58)(67)",
        "(56)(78)",
    ] {
        assert!(r.out.contains(p), "missing {p}");
    }

    let r = run(&["oracle-verify", "--sig", "3,3"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("derived order: 9"));
    assert!(r
        .out
        .contains("solver witnesses verified for all 9 derived elements"));
    assert!(r.out.contains("sylow suite: skipped"));

    assert_eq!(
        run(&["oracle-verify", "--sig", "3,3", "--suite", "sylow"]).code,
        2
    );
}

#[test]
fn oracle_guard_from_flag_and_env() {
    let r = run(&["oracle-verify", "--sig", "2,2,2", "--guard", "100"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("solver-only"), "{}", r.err);

    let bin = env!("CARGO_BIN_EXE_wrcomm");
    let status = Command::new(bin)
        .args(["oracle-verify", "--sig", "2,2,2"])
        .env("WRCOMM_GUARD", "100")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    let ok = Command::new(bin)
        .args(["oracle-verify", "--sig", "2,2"])
        .env("WRCOMM_GUARD", "100")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn bench_csv_schema() {
    let r = run(&["bench", "--depth", "6", "--reps", "0"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out, format!("{}\n", wrcomm_cli::CSV_HEADER));

    let r = run(&["bench", "--depth", "6", "--reps", "4", "--op", "multiply"]);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), wrcomm_cli::CSV_HEADER.split(',').count());
    assert_eq!(&fields[..3], ["multiply", "6", "4"]);
    assert!(fields[3..].iter().all(|f| f.parse::<u128>().is_ok()));
    assert_eq!(run(&["bench", "--depth", "0"]).code, 2);
}

#[test]
fn example_a8_report() {
    let r = run(&["example-a8"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("(12)(34)(56)(78)"));
    assert!(r.out.contains("order: 8"));
    assert!(r.out.contains("elementary abelian: yes"));
    let perms = r.out.lines().filter(|l| l.starts_with('(')).count();
    assert_eq!(perms, 8);
    assert!(r
        .out
        .lines()
        .filter(|l| l.starts_with('('))
        .all(|l| l.contains("order 1") || l.contains("order 2")));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_wrcomm");
    let dir = TempDir::new().unwrap();
    let swap = write(&dir, "swap", "sig: 2,2\ns1\n");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["check", "--in", s(&swap)]), Some(1));
    assert_eq!(
        code(&["check", "--in", s(&swap), "--group", "wreath"]),
        Some(0)
    );
    assert_eq!(code(&["no-such-command"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn leaf_output_uses_lexicographic_numbering() {
    let sig = AritySignature::binary(2).unwrap();
    let g = TreeAut::identity(&sig).with_label(0, 0, 1).unwrap();
    assert_eq!(to_leaf_perm(&g).to_string(), "(1 3)(2 4)");
}

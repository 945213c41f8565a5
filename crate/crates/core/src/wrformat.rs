//! Text format for portraits and witnesses.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! elem     := 's' INT children?
//! children := '(' elem (',' elem)* ')'
//! ```
//!
//! `INT` is the label of the vertex and must already lie in `0..p` for the
//! arity `p` of its level. A children list, when present, has exactly `p`
//! entries; omitting it means the whole subtree below is trivial. The
//! serializer elides every trivial subtree, so `s0` is the identity at any
//! signature. The signature itself travels out of band, usually as a
//! `sig: 2,2,2` header line.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::error::WreathError;
use crate::signature::AritySignature;
use crate::solver::CommutatorWitness;
use crate::tree::TreeAut;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Expected(&'static str),
    UnexpectedEnd,
    LabelOutOfRange { label: u64, arity: u32 },
    ArityMismatch { expected: u32, got: u32 },
    DepthOverflow,
    TrailingInput,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::LabelOutOfRange { label, arity } => {
                write!(f, "label {label} out of range for arity {arity}")
            }
            ParseErrorKind::ArityMismatch { expected, got } => {
                write!(f, "expected {expected} children, got {got}")
            }
            ParseErrorKind::DepthOverflow => f.write_str("children below the deepest level"),
            ParseErrorKind::TrailingInput => f.write_str("trailing input"),
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    sig: &'a AritySignature,
    levels: Vec<Vec<u32>>,
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(u8::is_ascii_whitespace)
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.err(ParseErrorKind::Expected(what))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.bytes.get(self.pos).filter(|b| b.is_ascii_digit()) {
            value = value.saturating_mul(10).saturating_add((d - b'0') as u64);
            self.pos += 1;
        }
        if self.pos == start {
            return Err(if self.pos >= self.bytes.len() {
                self.err(ParseErrorKind::UnexpectedEnd)
            } else {
                self.err(ParseErrorKind::Expected("label integer"))
            });
        }
        Ok(value)
    }

    fn element(&mut self, level: usize, vertex: usize) -> Result<(), ParseError> {
        self.expect(b's', "'s'")?;
        let label_at = self.pos;
        let label = self.integer()?;
        let depth = self.sig.depth();
        let arity = if level < depth {
            self.sig.arity(level)
        } else {
            1
        };
        if label >= arity as u64 {
            return Err(ParseError {
                offset: label_at,
                kind: ParseErrorKind::LabelOutOfRange { label, arity },
            });
        }
        if level < depth {
            self.levels[level][vertex] = label as u32;
        }
        if self.peek() != Some(b'(') {
            return Ok(());
        }
        if level + 1 >= depth {
            return Err(self.err(ParseErrorKind::DepthOverflow));
        }
        self.pos += 1;
        let mut count: u32 = 0;
        loop {
            if count == arity {
                return Err(self.err(ParseErrorKind::ArityMismatch {
                    expected: arity,
                    got: count + 1,
                }));
            }
            self.element(level + 1, vertex * arity as usize + count as usize)?;
            count += 1;
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    if count != arity {
                        return Err(self.err(ParseErrorKind::ArityMismatch {
                            expected: arity,
                            got: count,
                        }));
                    }
                    self.pos += 1;
                    return Ok(());
                }
                Some(_) => return Err(self.err(ParseErrorKind::Expected("',' or ')'"))),
                None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            }
        }
    }
}

pub fn parse_element(text: &str, sig: &AritySignature) -> Result<TreeAut, ParseError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        sig,
        levels: (0..sig.depth())
            .map(|l| vec![0; sig.vertex_count(l)])
            .collect(),
    };
    parser.element(0, 0)?;
    if parser.peek().is_some() {
        return Err(parser.err(ParseErrorKind::TrailingInput));
    }
    Ok(TreeAut::from_levels(sig, &parser.levels).expect("labels checked while parsing"))
}

pub fn serialize_element(g: &TreeAut) -> String {
    let mut out = String::new();
    if g.depth() == 0 {
        out.push_str("s0");
    } else {
        write_vertex(g, 0, 0, &mut out);
    }
    out
}

fn write_vertex(g: &TreeAut, level: usize, vertex: usize, out: &mut String) {
    out.push('s');
    out.push_str(&g.label(level, vertex).to_string());
    if level + 1 < g.depth() && !g.subtree_is_trivial_below(level, vertex) {
        let p = g.signature().arity(level) as usize;
        out.push('(');
        for c in 0..p {
            if c > 0 {
                out.push(',');
            }
            write_vertex(g, level + 1, vertex * p + c, out);
        }
        out.push(')');
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("no signature: pass one explicitly or add a 'sig:' header")]
    MissingSignature,
    #[error("signature conflict: header says {header}, caller says {given}")]
    SignatureConflict {
        header: AritySignature,
        given: AritySignature,
    },
    #[error("line {line}: {source}")]
    BadSignature { line: usize, source: WreathError },
    #[error("missing field '{0}'")]
    MissingField(&'static str),
    #[error("field '{field}' has invalid value {value:?}")]
    BadField { field: &'static str, value: String },
    #[error("line {line}: unrecognised line {text:?}")]
    UnknownLine { line: usize, text: String },
    #[error("witness does not verify: {0}")]
    Witness(WreathError),
}

fn header_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.trim_start().strip_prefix(key)?;
    rest.trim_start().strip_prefix(':').map(str::trim)
}

/// Reads an element document: an optional `sig:` header followed by one
/// element. A signature given by the caller must agree with the header.
pub fn parse_element_document(
    text: &str,
    given: Option<&AritySignature>,
) -> Result<TreeAut, DocumentError> {
    let mut header: Option<AritySignature> = None;
    let mut body_start = 0;
    let mut body_line = 1;
    for (idx, line) in text.split_inclusive('\n').enumerate() {
        if line.trim().is_empty() {
            body_start += line.len();
            continue;
        }
        if let Some(v) = header_value(line, "sig") {
            header = Some(v.parse().map_err(|source| DocumentError::BadSignature {
                line: idx + 1,
                source,
            })?);
            body_start += line.len();
            body_line = idx + 2;
        } else {
            body_line = idx + 1;
        }
        break;
    }
    let sig = match (header, given) {
        (Some(h), Some(g)) if &h != g => {
            return Err(DocumentError::SignatureConflict {
                header: h,
                given: g.clone(),
            })
        }
        (Some(h), _) => h,
        (None, Some(g)) => g.clone(),
        (None, None) => return Err(DocumentError::MissingSignature),
    };
    parse_element(&text[body_start..], &sig).map_err(|mut e| {
        let line = body_line
            + text[body_start..body_start + e.offset]
                .matches('\n')
                .count();
        e.offset += body_start;
        DocumentError::Parse { line, source: e }
    })
}

pub fn write_element_document(g: &TreeAut) -> String {
    format!("sig: {}\n{}\n", g.signature(), serialize_element(g))
}

/// Key-value witness record. The `verified` stamp is recomputed here by
/// multiplying the pair out again.
pub fn export_witness(w: &CommutatorWitness) -> Result<String, WreathError> {
    let product = w.a().commutator(w.b())?;
    if &product != w.target() {
        return Err(WreathError::VerificationFailed(
            "witness no longer multiplies to its target".into(),
        ));
    }
    Ok(format!(
        "sig: {}\ntarget: {}\na: {}\nb: {}\na_in_sylow_alt: {}\nb_in_sylow_alt: {}\nrecursion_depth: {}\nverified: true\n",
        w.target().signature(),
        serialize_element(w.target()),
        serialize_element(w.a()),
        serialize_element(w.b()),
        w.a_in_sylow_alt(),
        w.b_in_sylow_alt(),
        w.recursion_depth(),
    ))
}

const WITNESS_FIELDS: [&str; 8] = [
    "sig",
    "target",
    "a",
    "b",
    "a_in_sylow_alt",
    "b_in_sylow_alt",
    "recursion_depth",
    "verified",
];

/// Reads a witness record and re-verifies it from scratch.
pub fn import_witness(text: &str) -> Result<CommutatorWitness, DocumentError> {
    let mut fields: HashMap<&'static str, (usize, &str)> = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let key = WITNESS_FIELDS
            .iter()
            .find(|k| header_value(line, k).is_some())
            .ok_or_else(|| DocumentError::UnknownLine {
                line: idx + 1,
                text: line.to_string(),
            })?;
        fields.insert(key, (idx + 1, header_value(line, key).unwrap_or_default()));
    }
    let get = |k: &'static str| fields.get(k).copied().ok_or(DocumentError::MissingField(k));
    let flag = |k: &'static str| -> Result<bool, DocumentError> {
        let (_, v) = get(k)?;
        v.parse().map_err(|_| DocumentError::BadField {
            field: k,
            value: v.to_string(),
        })
    };

    let (sig_line, sig_text) = get("sig")?;
    let sig: AritySignature = sig_text
        .parse()
        .map_err(|source| DocumentError::BadSignature {
            line: sig_line,
            source,
        })?;
    let element = |k: &'static str| -> Result<TreeAut, DocumentError> {
        let (line, v) = get(k)?;
        parse_element(v, &sig).map_err(|source| DocumentError::Parse { line, source })
    };
    let target = element("target")?;
    let a = element("a")?;
    let b = element("b")?;
    let (_, depth_text) = get("recursion_depth")?;
    let depth: usize = depth_text.parse().map_err(|_| DocumentError::BadField {
        field: "recursion_depth",
        value: depth_text.to_string(),
    })?;
    if !flag("verified")? {
        return Err(DocumentError::BadField {
            field: "verified",
            value: "false".into(),
        });
    }
    let witness = CommutatorWitness::verify(a, b, target, depth).map_err(DocumentError::Witness)?;
    for (k, recomputed) in [
        ("a_in_sylow_alt", witness.a_in_sylow_alt()),
        ("b_in_sylow_alt", witness.b_in_sylow_alt()),
    ] {
        if flag(k)? != recomputed {
            return Err(DocumentError::BadField {
                field: if k == "a_in_sylow_alt" {
                    "a_in_sylow_alt"
                } else {
                    "b_in_sylow_alt"
                },
                value: (!recomputed).to_string(),
            });
        }
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_gk_derived;

    fn sig(a: &[u32]) -> AritySignature {
        AritySignature::new(a.to_vec()).unwrap()
    }

    #[test]
    fn identity_text() {
        let s = sig(&[2]);
        assert!(parse_element("s0", &s).unwrap().is_identity());
        assert_eq!(serialize_element(&TreeAut::identity(&sig(&[2, 2]))), "s0");
        assert_eq!(
            serialize_element(&TreeAut::identity(&AritySignature::trivial())),
            "s0"
        );
        assert!(parse_element("s0", &AritySignature::trivial())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn direct_reading() {
        let s = sig(&[2, 2]);
        let g = parse_element("s1(s0,s1)", &s).unwrap();
        assert_eq!(g.level_labels(0), vec![1]);
        assert_eq!(g.level_labels(1), vec![0, 1]);
        assert_eq!(serialize_element(&g), "s1(s0,s1)");
        let swap = TreeAut::identity(&s).with_label(0, 0, 1).unwrap();
        assert_eq!(serialize_element(&swap), "s1");
    }

    #[test]
    fn whitespace_and_full_form_normalize() {
        let s = sig(&[2, 2, 2]);
        let g = parse_element("  s0 ( s1 ( s0 , s0 ) ,\n s0(s1, s0) ) ", &s).unwrap();
        assert_eq!(serialize_element(&g), "s0(s1,s0(s1,s0))");
    }

    #[test]
    fn ternary_labels() {
        let s = sig(&[3, 2]);
        let g = parse_element("s2(s1,s0,s1)", &s).unwrap();
        assert_eq!(g.level_labels(1), vec![1, 0, 1]);
        assert_eq!(
            parse_element("s3", &s).unwrap_err().kind,
            ParseErrorKind::LabelOutOfRange { label: 3, arity: 3 }
        );
    }

    #[test]
    fn positioned_errors() {
        let s = sig(&[2, 2]);
        let err = |t: &str| parse_element(t, &s).unwrap_err();
        assert_eq!(err("s2").offset, 1);
        assert_eq!(err("x").kind, ParseErrorKind::Expected("'s'"));
        assert_eq!(err("").kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(err("s").kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(
            err("s1(s0)").kind,
            ParseErrorKind::ArityMismatch {
                expected: 2,
                got: 1
            }
        );
        assert_eq!(err("s1(s0)").offset, 5);
        assert!(matches!(
            err("s1(s0,s0,s0)").kind,
            ParseErrorKind::ArityMismatch { .. }
        ));
        assert_eq!(err("s1(s0(s0,s0),s0)").kind, ParseErrorKind::DepthOverflow);
        assert_eq!(err("s1 s0").kind, ParseErrorKind::TrailingInput);
        assert_eq!(err("s1 s0").offset, 3);
        assert_eq!(
            err("s1(s0;s0)").kind,
            ParseErrorKind::Expected("',' or ')'")
        );
        assert_eq!(err("s99999999999999999999999").offset, 1);
        assert_eq!(
            parse_element("s1", &AritySignature::trivial())
                .unwrap_err()
                .kind,
            ParseErrorKind::LabelOutOfRange { label: 1, arity: 1 }
        );
    }

    #[test]
    fn document_headers() {
        let s = sig(&[2, 2]);
        let g = parse_element_document("sig: 2,2\ns1(s0,s1)\n", None).unwrap();
        assert_eq!(g, parse_element("s1(s0,s1)", &s).unwrap());
        assert_eq!(
            parse_element_document("s1", Some(&s)).unwrap().root_label(),
            1
        );
        assert_eq!(
            parse_element_document("s1", None),
            Err(DocumentError::MissingSignature)
        );
        assert!(matches!(
            parse_element_document("sig: 2,2,2\ns1", Some(&s)),
            Err(DocumentError::SignatureConflict { .. })
        ));
        assert!(matches!(
            parse_element_document("sig: 2,1\ns1", None),
            Err(DocumentError::BadSignature { line: 1, .. })
        ));
        match parse_element_document("sig: 2,2\n\ns1(s0,s2)", None) {
            Err(DocumentError::Parse { line, source }) => {
                assert_eq!(line, 3);
                assert_eq!(source.offset, 17);
            }
            other => panic!("unexpected {other:?}"),
        }
        let doc = write_element_document(&g);
        assert_eq!(parse_element_document(&doc, None).unwrap(), g);
    }

    #[test]
    fn witness_roundtrip() {
        let s = AritySignature::binary(3).unwrap();
        let w = parse_element("s0(s0(s1,s1),s0)", &s).unwrap();
        let wit = solve_gk_derived(&w).unwrap();
        let doc = export_witness(&wit).unwrap();
        assert!(doc.contains("verified: true"));
        assert!(doc.starts_with("sig: 2,2,2\n"));
        let back = import_witness(&doc).unwrap();
        assert_eq!(back, wit);
        assert_eq!(export_witness(&back).unwrap(), doc);
    }

    #[test]
    fn witness_import_rejects_tampering() {
        let s = AritySignature::binary(3).unwrap();
        let w = parse_element("s0(s0(s1,s1),s0)", &s).unwrap();
        let doc = export_witness(&solve_gk_derived(&w).unwrap()).unwrap();
        let bad_target = doc.replace("target: s0(s0(s1,s1),s0)", "target: s0(s0,s0(s1,s1))");
        assert!(matches!(
            import_witness(&bad_target),
            Err(DocumentError::Witness(_))
        ));
        let bad_flag = doc.replace("b_in_sylow_alt: true", "b_in_sylow_alt: false");
        assert!(matches!(
            import_witness(&bad_flag),
            Err(DocumentError::BadField { .. })
        ));
        let missing = doc.replace("verified: true\n", "");
        assert_eq!(
            import_witness(&missing).unwrap_err(),
            DocumentError::MissingField("verified")
        );
        assert!(matches!(
            import_witness(&format!("{doc}junk\n")),
            Err(DocumentError::UnknownLine { .. })
        ));
    }
}

//! The line-oriented `bps 1` state file.
//!
//! ```text
//! # Bell state
//! bps 1
//! kind dense
//! rows 2
//! cols 2
//! e 0 0 0.70710678118654752 0
//! e 1 1 0.70710678118654752 0
//! ```
//!
//! Tokens are whitespace separated, `#` starts a comment, indices are
//! 0-based and amplitudes are written as `re im`. The first directive is the
//! header `bps 1`, the second is `kind`. Per kind:
//!
//! * `dense`: `rows N`, `cols N`, optional `tail T` (declared squared mass
//!   outside the listed entries), any number of `e i j re im`.
//! * `tmsv`: `param LAMBDA`.
//! * `outer`: sequences `x` and `y`; `schmidt`: sequence `c`. A sequence is
//!   either `seq NAME geometric FIRST_RE FIRST_IM RATIO_RE RATIO_IM` or
//!   `seq NAME list` followed by `v NAME re im` lines in index order.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_complex::Complex64;
use thiserror::Error;

use crate::state::{CoefficientSource, SequenceSpec};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; one past the last line for errors detected at end of input.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `bps {FORMAT_VERSION}`")]
    MissingHeader,
    #[error("unsupported format version `{0}`")]
    UnsupportedVersion(String),
    #[error("expected `kind` directive after the header")]
    MissingKind,
    #[error("unknown kind `{0}`")]
    UnknownKind(String),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("directive `{directive}` is not valid for kind `{kind}`")]
    NotAllowed { directive: String, kind: String },
    #[error("`{directive}` expects {expected} arguments, found {found}")]
    WrongArity {
        directive: String,
        expected: usize,
        found: usize,
    },
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error("negative index `{0}`")]
    NegativeIndex(String),
    #[error("duplicate entry ({0}, {1})")]
    DuplicateEntry(usize, usize),
    #[error("duplicate directive `{0}`")]
    DuplicateDirective(String),
    #[error("entry ({i}, {j}) outside the declared {rows}x{cols} shape")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        rows: usize,
        cols: usize,
    },
    #[error("geometric ratio modulus {0} is not below 1")]
    RatioOutOfRange(f64),
    #[error("squeezing parameter {0} outside [0, 1)")]
    LambdaOutOfRange(f64),
    #[error("sequence `{0}` is not valid here")]
    UnknownSequence(String),
    #[error("values for sequence `{0}` which is not declared as a list")]
    NotAList(String),
    #[error("missing `{0}`")]
    MissingField(String),
    #[error("{0}")]
    InvalidSource(String),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn real(tok: &str, line: usize) -> Result<f64, ParseError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(line, ParseErrorKind::MalformedNumber(tok.to_string()))),
    }
}

fn index(tok: &str, line: usize) -> Result<usize, ParseError> {
    if tok.starts_with('-') && tok[1..].parse::<u64>().is_ok() {
        return Err(err(line, ParseErrorKind::NegativeIndex(tok.to_string())));
    }
    tok.parse::<usize>()
        .map_err(|_| err(line, ParseErrorKind::MalformedNumber(tok.to_string())))
}

fn complex(re: &str, im: &str, line: usize) -> Result<Complex64, ParseError> {
    Ok(Complex64::new(real(re, line)?, real(im, line)?))
}

fn arity(directive: &str, args: &[&str], expected: usize, line: usize) -> Result<(), ParseError> {
    if args.len() == expected {
        Ok(())
    } else {
        Err(err(
            line,
            ParseErrorKind::WrongArity {
                directive: directive.to_string(),
                expected,
                found: args.len(),
            },
        ))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Dense,
    Outer,
    Schmidt,
    Tmsv,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Dense => "dense",
            Kind::Outer => "outer",
            Kind::Schmidt => "schmidt",
            Kind::Tmsv => "tmsv",
        }
    }

    fn sequences(self) -> &'static [&'static str] {
        match self {
            Kind::Outer => &["x", "y"],
            Kind::Schmidt => &["c"],
            _ => &[],
        }
    }

    fn allows(self, directive: &str) -> bool {
        matches!(
            (self, directive),
            (Kind::Dense, "rows" | "cols" | "tail" | "e")
                | (Kind::Tmsv, "param")
                | (Kind::Outer | Kind::Schmidt, "seq" | "v")
        )
    }
}

enum SeqDraft {
    Geometric(Complex64, Complex64),
    List(Vec<Complex64>),
}

#[derive(Default)]
struct Draft {
    rows: Option<(usize, usize)>,
    cols: Option<(usize, usize)>,
    tail: Option<f64>,
    entries: BTreeMap<(usize, usize), (Complex64, usize)>,
    param: Option<f64>,
    seqs: BTreeMap<String, SeqDraft>,
}

/// Parses a `bps 1` document into a structurally valid source. Whether the
/// source is normalized is left to [`CoefficientSource::validate`].
pub fn parse_state_file(text: &str) -> Result<CoefficientSource, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .map(|(n, l)| (n, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty());
    let eof = text.lines().count() + 1;

    match lines.next() {
        Some((line, toks)) if toks[0] == "bps" && toks.len() == 2 => {
            if toks[1] != FORMAT_VERSION {
                return Err(err(
                    line,
                    ParseErrorKind::UnsupportedVersion(toks[1].to_string()),
                ));
            }
        }
        Some((line, _)) => return Err(err(line, ParseErrorKind::MissingHeader)),
        None => return Err(err(eof, ParseErrorKind::MissingHeader)),
    }

    let kind = match lines.next() {
        Some((line, toks)) if toks[0] == "kind" => {
            arity("kind", &toks[1..], 1, line)?;
            match toks[1] {
                "dense" => Kind::Dense,
                "outer" => Kind::Outer,
                "schmidt" => Kind::Schmidt,
                "tmsv" => Kind::Tmsv,
                other => return Err(err(line, ParseErrorKind::UnknownKind(other.to_string()))),
            }
        }
        Some((line, _)) => return Err(err(line, ParseErrorKind::MissingKind)),
        None => return Err(err(eof, ParseErrorKind::MissingKind)),
    };

    let mut d = Draft::default();
    for (line, toks) in lines {
        let (directive, args) = (toks[0], &toks[1..]);
        let known = matches!(
            directive,
            "rows" | "cols" | "tail" | "e" | "param" | "seq" | "v" | "bps" | "kind"
        );
        if !known {
            return Err(err(
                line,
                ParseErrorKind::UnknownDirective(directive.to_string()),
            ));
        }
        if matches!(directive, "bps" | "kind") {
            return Err(err(
                line,
                ParseErrorKind::DuplicateDirective(directive.to_string()),
            ));
        }
        if !kind.allows(directive) {
            return Err(err(
                line,
                ParseErrorKind::NotAllowed {
                    directive: directive.to_string(),
                    kind: kind.name().to_string(),
                },
            ));
        }
        let once = |slot_full: bool| -> Result<(), ParseError> {
            if slot_full {
                Err(err(
                    line,
                    ParseErrorKind::DuplicateDirective(directive.to_string()),
                ))
            } else {
                Ok(())
            }
        };
        match directive {
            "rows" | "cols" => {
                arity(directive, args, 1, line)?;
                let v = index(args[0], line)?;
                let slot = if directive == "rows" {
                    &mut d.rows
                } else {
                    &mut d.cols
                };
                once(slot.is_some())?;
                *slot = Some((v, line));
            }
            "tail" => {
                arity(directive, args, 1, line)?;
                once(d.tail.is_some())?;
                let t = real(args[0], line)?;
                if t < 0.0 {
                    return Err(err(
                        line,
                        ParseErrorKind::InvalidSource(format!("declared tail {t} is negative")),
                    ));
                }
                d.tail = Some(t);
            }
            "e" => {
                arity(directive, args, 4, line)?;
                let (i, j) = (index(args[0], line)?, index(args[1], line)?);
                let z = complex(args[2], args[3], line)?;
                if d.entries.insert((i, j), (z, line)).is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateEntry(i, j)));
                }
            }
            "param" => {
                arity(directive, args, 1, line)?;
                once(d.param.is_some())?;
                let lambda = real(args[0], line)?;
                if !(0.0..1.0).contains(&lambda) {
                    return Err(err(line, ParseErrorKind::LambdaOutOfRange(lambda)));
                }
                d.param = Some(lambda);
            }
            "seq" => {
                if args.len() < 2 {
                    return Err(err(
                        line,
                        ParseErrorKind::WrongArity {
                            directive: "seq".into(),
                            expected: 2,
                            found: args.len(),
                        },
                    ));
                }
                let name = args[0];
                if !kind.sequences().contains(&name) {
                    return Err(err(line, ParseErrorKind::UnknownSequence(name.to_string())));
                }
                once(d.seqs.contains_key(name))?;
                let spec = match args[1] {
                    "geometric" => {
                        arity("seq geometric", &args[2..], 4, line)?;
                        let first = complex(args[2], args[3], line)?;
                        let ratio = complex(args[4], args[5], line)?;
                        if ratio.norm() >= 1.0 {
                            return Err(err(line, ParseErrorKind::RatioOutOfRange(ratio.norm())));
                        }
                        SeqDraft::Geometric(first, ratio)
                    }
                    "list" => {
                        arity("seq list", &args[2..], 0, line)?;
                        SeqDraft::List(Vec::new())
                    }
                    other => {
                        return Err(err(
                            line,
                            ParseErrorKind::UnknownDirective(format!("seq {other}")),
                        ))
                    }
                };
                d.seqs.insert(name.to_string(), spec);
            }
            "v" => {
                arity(directive, args, 3, line)?;
                let z = complex(args[1], args[2], line)?;
                match d.seqs.get_mut(args[0]) {
                    Some(SeqDraft::List(v)) => v.push(z),
                    Some(SeqDraft::Geometric(..)) => {
                        return Err(err(line, ParseErrorKind::NotAList(args[0].to_string())))
                    }
                    None if kind.sequences().contains(&args[0]) => {
                        return Err(err(line, ParseErrorKind::NotAList(args[0].to_string())))
                    }
                    None => {
                        return Err(err(
                            line,
                            ParseErrorKind::UnknownSequence(args[0].to_string()),
                        ))
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    let source = match kind {
        Kind::Dense => {
            let (rows, _) = d
                .rows
                .ok_or_else(|| err(eof, ParseErrorKind::MissingField("rows".into())))?;
            let (cols, _) = d
                .cols
                .ok_or_else(|| err(eof, ParseErrorKind::MissingField("cols".into())))?;
            for (&(i, j), &(_, line)) in &d.entries {
                if i >= rows || j >= cols {
                    return Err(err(
                        line,
                        ParseErrorKind::IndexOutOfRange { i, j, rows, cols },
                    ));
                }
            }
            CoefficientSource::DenseFinite {
                rows,
                cols,
                entries: d.entries.into_iter().map(|(k, (z, _))| (k, z)).collect(),
                declared_tail: d.tail.unwrap_or(0.0),
            }
        }
        Kind::Tmsv => CoefficientSource::TwoModeSqueezed {
            lambda: d
                .param
                .ok_or_else(|| err(eof, ParseErrorKind::MissingField("param".into())))?,
        },
        Kind::Outer | Kind::Schmidt => {
            let mut take = |name: &str| -> Result<SequenceSpec, ParseError> {
                match d.seqs.remove(name) {
                    Some(SeqDraft::Geometric(first, ratio)) => {
                        Ok(SequenceSpec::Geometric { first, ratio })
                    }
                    Some(SeqDraft::List(v)) => Ok(SequenceSpec::Explicit(v)),
                    None => Err(err(
                        eof,
                        ParseErrorKind::MissingField(format!("seq {name}")),
                    )),
                }
            };
            if kind == Kind::Outer {
                CoefficientSource::OuterProduct {
                    x: take("x")?,
                    y: take("y")?,
                }
            } else {
                CoefficientSource::SchmidtDiagonal { coeffs: take("c")? }
            }
        }
    };
    source
        .check_structure()
        .map_err(|e| err(eof, ParseErrorKind::InvalidSource(e.to_string())))?;
    Ok(source)
}

struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Debug gives the shortest representation that round-trips.
        write!(f, "{:?}", self.0)
    }
}

fn emit_sequence(out: &mut String, name: &str, seq: &SequenceSpec) {
    match seq {
        SequenceSpec::Geometric { first, ratio } => {
            let _ = writeln!(
                out,
                "seq {name} geometric {} {} {} {}",
                Num(first.re),
                Num(first.im),
                Num(ratio.re),
                Num(ratio.im)
            );
        }
        SequenceSpec::Explicit(v) => {
            let _ = writeln!(out, "seq {name} list");
            for z in v {
                let _ = writeln!(out, "v {name} {} {}", Num(z.re), Num(z.im));
            }
        }
    }
}

/// Canonical `bps 1` text for a source; `parse_state_file` inverts it.
pub fn emit_state_file(src: &CoefficientSource) -> String {
    let mut out = format!("bps {FORMAT_VERSION}\n");
    match src {
        CoefficientSource::DenseFinite {
            rows,
            cols,
            entries,
            declared_tail,
        } => {
            let _ = writeln!(out, "kind dense\nrows {rows}\ncols {cols}");
            if *declared_tail != 0.0 {
                let _ = writeln!(out, "tail {}", Num(*declared_tail));
            }
            for ((i, j), z) in entries {
                let _ = writeln!(out, "e {i} {j} {} {}", Num(z.re), Num(z.im));
            }
        }
        CoefficientSource::OuterProduct { x, y } => {
            out.push_str("kind outer\n");
            emit_sequence(&mut out, "x", x);
            emit_sequence(&mut out, "y", y);
        }
        CoefficientSource::SchmidtDiagonal { coeffs } => {
            out.push_str("kind schmidt\n");
            emit_sequence(&mut out, "c", coeffs);
        }
        CoefficientSource::TwoModeSqueezed { lambda } => {
            let _ = writeln!(out, "kind tmsv\nparam {}", Num(*lambda));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind_of(text: &str) -> (usize, ParseErrorKind) {
        let e = parse_state_file(text).unwrap_err();
        (e.line, e.kind)
    }

    #[test]
    fn bell_transcription() {
        let src = parse_state_file(
            "bps 1\nkind dense\nrows 2\ncols 2\ne 0 0 0.70710678118654752 0\ne 1 1 0.70710678118654752 0\n",
        )
        .unwrap();
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let expect = CoefficientSource::dense(2, 2, [((0, 0), h), ((1, 1), h)], 0.0).unwrap();
        assert_eq!(src, expect);
    }

    #[test]
    fn tmsv_and_comments() {
        let src =
            parse_state_file("# squeezed\n\nbps 1  # header\nkind tmsv\nparam 0.5\n").unwrap();
        assert_eq!(src, CoefficientSource::TwoModeSqueezed { lambda: 0.5 });
    }

    #[test]
    fn unnormalized_parses_but_fails_validation() {
        let src = parse_state_file("bps 1\nkind dense\nrows 1\ncols 1\ne 0 0 2 0\n").unwrap();
        let r = src.validate(1e-9).unwrap();
        assert!(!r.passed);
        assert_eq!(r.mass, 4.0);
    }

    #[test]
    fn sequences() {
        let src = parse_state_file(
            "bps 1\nkind outer\nseq x geometric 0.8660254037844386 0 0.5 0\nseq y list\nv y 0.6 0\nv y 0 0.8\n",
        )
        .unwrap();
        match &src {
            CoefficientSource::OuterProduct { x, y } => {
                assert!(matches!(x, SequenceSpec::Geometric { .. }));
                assert_eq!(
                    y,
                    &SequenceSpec::Explicit(vec![
                        Complex64::new(0.6, 0.0),
                        Complex64::new(0.0, 0.8)
                    ])
                );
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_state_file(&emit_state_file(&src)).unwrap(), src);
    }

    #[test]
    fn distinct_located_errors() {
        assert_eq!(
            kind_of("bps 1\nkind hologram\n"),
            (2, ParseErrorKind::UnknownKind("hologram".into()))
        );
        assert_eq!(
            kind_of("bps 1\nkind dense\nrows 2\ncols x\n"),
            (4, ParseErrorKind::MalformedNumber("x".into()))
        );
        assert_eq!(
            kind_of("bps 1\nkind dense\nrows 2\ncols 2\ne 0 0 1 0\ne 0 0 0 1\n"),
            (6, ParseErrorKind::DuplicateEntry(0, 0))
        );
        assert_eq!(
            kind_of("bps 1\nkind schmidt\nseq c geometric 1 0 1.5 0\n"),
            (3, ParseErrorKind::RatioOutOfRange(1.5))
        );
        assert_eq!(
            kind_of("bps 1\nkind tmsv\nparam 1\n"),
            (3, ParseErrorKind::LambdaOutOfRange(1.0))
        );
        assert_eq!(kind_of("kind tmsv\n"), (1, ParseErrorKind::MissingHeader));
        assert_eq!(
            kind_of("bps 1\nkind tmsv\n"),
            (3, ParseErrorKind::MissingField("param".into()))
        );
        assert_eq!(
            kind_of("bps 1\nkind dense\nrows 2\ncols 2\ne -1 0 1 0\n"),
            (5, ParseErrorKind::NegativeIndex("-1".into()))
        );
        assert_eq!(
            kind_of("bps 1\nkind dense\nrows 1\ncols 1\ne 0 3 1 0\n"),
            (
                5,
                ParseErrorKind::IndexOutOfRange {
                    i: 0,
                    j: 3,
                    rows: 1,
                    cols: 1
                }
            )
        );
        assert!(matches!(
            kind_of("bps 1\nkind tmsv\nparam 0.5\nrows 3\n"),
            (4, ParseErrorKind::NotAllowed { .. })
        ));
        assert!(matches!(
            kind_of("bps 2\nkind tmsv\n"),
            (_, ParseErrorKind::UnsupportedVersion(_))
        ));
        assert!(matches!(
            kind_of("bps 1\nkind dense\nrows 1\ncols 1\n"),
            (_, ParseErrorKind::InvalidSource(_))
        ));
        assert!(matches!(
            kind_of("bps 1\nkind schmidt\nseq c list\nv c -0.5 0\n"),
            (_, ParseErrorKind::InvalidSource(_))
        ));
    }

    #[test]
    fn emit_is_canonical() {
        let src = CoefficientSource::dense(
            2,
            3,
            [
                ((1, 2), Complex64::new(0.6, 0.0)),
                ((0, 0), Complex64::new(0.0, -0.8)),
            ],
            0.0,
        )
        .unwrap();
        assert_eq!(
            emit_state_file(&src),
            "bps 1\nkind dense\nrows 2\ncols 3\ne 0 0 0.0 -0.8\ne 1 2 0.6 0.0\n"
        );
    }
}

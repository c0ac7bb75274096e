//! DIMACS CNF input, SAT competition output and independent model checking.

use std::fmt::Write as _;
use std::io::{self, Read};

use thiserror::Error;

use crate::lit::{Lit, Var};

/// Maximum length of one `v ...` output line, newline excluded.
pub const MAX_VALUE_LINE: usize = 4096;

/// A CNF formula exactly as read from the input.
///
/// Duplicate literals and tautological clauses are kept; clause ingestion in the solver is the
/// single place where they get simplified.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl RawFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> RawFormula {
        RawFormula { num_vars, clauses }
    }

    /// Builds a formula from signed DIMACS integers, sizing `num_vars` to fit.
    pub fn from_dimacs_clauses(clauses: &[&[i32]]) -> RawFormula {
        let num_vars = clauses
            .iter()
            .flat_map(|c| c.iter())
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        RawFormula {
            num_vars,
            clauses: clauses
                .iter()
                .map(|c| c.iter().map(|&l| Lit::from_dimacs(l)).collect())
                .collect(),
        }
    }

    /// Serializes to DIMACS CNF text.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{} ", lit.to_dimacs());
            }
            out.push_str("0\n");
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {detail}")]
    Header { line: usize, detail: String },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: literal {literal} exceeds the declared {num_vars} variables")]
    VarOutOfRange {
        line: usize,
        literal: i64,
        num_vars: usize,
    },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: last clause is not terminated by 0")]
    Unterminated { line: usize },
    #[error("no `p cnf` header found")]
    NoHeader,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Non-fatal irregularities found while parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseWarning {
    ClauseCountMismatch { declared: usize, found: usize },
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseWarning::ClauseCountMismatch { declared, found } => write!(
                f,
                "header declares {} clauses but {} were found",
                declared, found
            ),
        }
    }
}

/// Parses a DIMACS CNF stream.
pub fn parse_cnf(input: impl Read) -> Result<RawFormula, ParseError> {
    parse_cnf_with_warnings(input).map(|(formula, _)| formula)
}

/// Parses a DIMACS CNF stream and also reports tolerated irregularities.
pub fn parse_cnf_with_warnings(
    mut input: impl Read,
) -> Result<(RawFormula, Vec<ParseWarning>), ParseError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    parse_bytes(&bytes)
}

fn parse_int(token: &[u8]) -> Option<i64> {
    let (neg, digits) = match token.first() {
        Some(b'-') => (true, &token[1..]),
        Some(b'+') => (false, &token[1..]),
        _ => (false, token),
    };
    if digits.is_empty() || digits.len() > 18 || !digits.iter().all(u8::is_ascii_digit) {
        return None;
    }
    let value = digits
        .iter()
        .fold(0i64, |acc, &d| acc * 10 + (d - b'0') as i64);
    Some(if neg { -value } else { value })
}

fn token_text(token: &[u8]) -> String {
    String::from_utf8_lossy(token).into_owned()
}

fn parse_bytes(bytes: &[u8]) -> Result<(RawFormula, Vec<ParseWarning>), ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut open_clause_line = 0;
    let mut last_line = 1;

    for (index, line) in bytes.split(|&b| b == b'\n').enumerate() {
        let line_no = index + 1;
        let mut tokens = line
            .split(|b| b.is_ascii_whitespace())
            .filter(|t| !t.is_empty())
            .peekable();
        let Some(first) = tokens.peek().copied() else {
            continue;
        };
        last_line = line_no;
        if first[0] == b'c' {
            continue;
        }
        if first == b"%" {
            // SATLIB end-of-data marker
            break;
        }
        if first == b"p" {
            if header.is_some() {
                return Err(ParseError::Header {
                    line: line_no,
                    detail: "duplicate header".into(),
                });
            }
            let fields: Vec<&[u8]> = tokens.collect();
            let bad = |detail: &str| ParseError::Header {
                line: line_no,
                detail: detail.to_string(),
            };
            if fields.len() != 4 || fields[1] != b"cnf" {
                return Err(bad("expected `p cnf <vars> <clauses>`"));
            }
            let vars = parse_int(fields[2])
                .filter(|&v| v >= 0 && v < i32::MAX as i64)
                .ok_or_else(|| bad("invalid variable count"))?;
            let count = parse_int(fields[3])
                .filter(|&v| v >= 0)
                .ok_or_else(|| bad("invalid clause count"))?;
            header = Some((vars as usize, count as usize));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(ParseError::MissingHeader { line: line_no });
        };
        for token in tokens {
            let value = parse_int(token).ok_or_else(|| ParseError::InvalidToken {
                line: line_no,
                token: token_text(token),
            })?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if value.unsigned_abs() as usize > num_vars {
                return Err(ParseError::VarOutOfRange {
                    line: line_no,
                    literal: value,
                    num_vars,
                });
            }
            if current.is_empty() {
                open_clause_line = line_no;
            }
            current.push(Lit::from_dimacs(value as i32));
        }
    }

    let Some((num_vars, declared)) = header else {
        return Err(ParseError::NoHeader);
    };
    if !current.is_empty() {
        return Err(ParseError::Unterminated {
            line: open_clause_line.max(last_line),
        });
    }
    let mut warnings = Vec::new();
    if declared != clauses.len() {
        warnings.push(ParseWarning::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Ok((RawFormula { num_vars, clauses }, warnings))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    BudgetExhausted,
    Interrupted,
}

/// Outcome of a solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A total assignment, indexed by variable.
    Sat(Vec<bool>),
    Unsat,
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }

    /// Short label: `SAT`, `UNSAT` or `UNKNOWN`.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Sat(_) => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Unknown(_) => "UNKNOWN",
        }
    }

    /// SAT competition process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Sat(_) => 10,
            Verdict::Unsat => 20,
            Verdict::Unknown(_) => 0,
        }
    }
}

/// Renders a verdict as SAT competition result lines.
pub fn write_result(verdict: &Verdict) -> String {
    match verdict {
        Verdict::Sat(model) => {
            let mut out = String::from("s SATISFIABLE\n");
            let mut line = String::from("v");
            let tokens = model
                .iter()
                .enumerate()
                .map(|(i, &value)| Var::from_index(i).lit(value).to_dimacs().to_string())
                .chain(std::iter::once("0".to_string()));
            for token in tokens {
                if line.len() + 1 + token.len() > MAX_VALUE_LINE {
                    out.push_str(&line);
                    out.push('\n');
                    line = String::from("v");
                }
                line.push(' ');
                line.push_str(&token);
            }
            out.push_str(&line);
            out.push('\n');
            out
        }
        Verdict::Unsat => "s UNSATISFIABLE\n".to_string(),
        Verdict::Unknown(_) => "s UNKNOWN\n".to_string(),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("model assigns {assigned} variables but the formula has {num_vars}")]
pub struct ModelError {
    pub assigned: usize,
    pub num_vars: usize,
}

/// Checks a total assignment against every clause by direct scan.
pub fn verify_model(formula: &RawFormula, model: &[bool]) -> Result<bool, ModelError> {
    if model.len() < formula.num_vars {
        return Err(ModelError {
            assigned: model.len(),
            num_vars: formula.num_vars,
        });
    }
    Ok(formula.clauses.iter().all(|clause| {
        clause
            .iter()
            .any(|lit| model[lit.var().index()] == lit.is_positive())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<RawFormula, ParseError> {
        parse_cnf(text.as_bytes())
    }

    #[test]
    fn parses_simple_formula() {
        let f = parse("c hello\np cnf 2 2\n1 -2 0\n2 0\n").unwrap();
        assert_eq!(f, RawFormula::from_dimacs_clauses(&[&[1, -2], &[2]]));
    }

    #[test]
    fn empty_clause_is_kept() {
        let f = parse("p cnf 1 1\n0\n").unwrap();
        assert_eq!(f.num_vars, 1);
        assert_eq!(f.clauses, vec![Vec::<Lit>::new()]);
    }

    #[test]
    fn literal_out_of_range() {
        match parse("p cnf 2 1\n3 0\n") {
            Err(ParseError::VarOutOfRange {
                line: 2,
                literal: 3,
                num_vars: 2,
            }) => {}
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn clauses_may_span_lines_and_share_lines() {
        let f = parse("p cnf 3 3\n1 2\n 3 0 -1 0\n-2 -3 0\n").unwrap();
        assert_eq!(
            f,
            RawFormula::from_dimacs_clauses(&[&[1, 2, 3], &[-1], &[-2, -3]])
        );
    }

    #[test]
    fn count_mismatch_is_only_a_warning() {
        let (f, warnings) = parse_cnf_with_warnings("p cnf 2 5\n1 0\n".as_bytes()).unwrap();
        assert_eq!(f.clauses.len(), 1);
        assert_eq!(
            warnings,
            vec![ParseWarning::ClauseCountMismatch {
                declared: 5,
                found: 1
            }]
        );
    }

    #[test]
    fn errors_name_the_line() {
        assert!(matches!(
            parse("p cnf 2 1\n1 x 0\n"),
            Err(ParseError::InvalidToken { line: 2, .. })
        ));
        assert!(matches!(
            parse("p cnf 2\n"),
            Err(ParseError::Header { line: 1, .. })
        ));
        assert!(matches!(
            parse("c c\n1 2 0\n"),
            Err(ParseError::MissingHeader { line: 2 })
        ));
        assert!(matches!(
            parse("p cnf 2 1\n1 2 0\n\n-1\n"),
            Err(ParseError::Unterminated { line: 4 })
        ));
        assert!(matches!(parse(""), Err(ParseError::NoHeader)));
    }

    #[test]
    fn result_lines() {
        assert_eq!(
            write_result(&Verdict::Sat(vec![true, false])),
            "s SATISFIABLE\nv 1 -2 0\n"
        );
        assert_eq!(write_result(&Verdict::Unsat), "s UNSATISFIABLE\n");
        assert_eq!(
            write_result(&Verdict::Unknown(UnknownReason::BudgetExhausted)),
            "s UNKNOWN\n"
        );
        assert_eq!(Verdict::Sat(vec![]).exit_code(), 10);
        assert_eq!(Verdict::Unsat.exit_code(), 20);
        assert_eq!(Verdict::Unknown(UnknownReason::Interrupted).exit_code(), 0);
    }

    #[test]
    fn long_models_are_split() {
        let model: Vec<bool> = (0..5000).map(|i| i % 3 == 0).collect();
        let text = write_result(&Verdict::Sat(model.clone()));
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines.len() > 2);
        let mut values = Vec::new();
        for line in &lines[1..] {
            assert!(line.len() <= MAX_VALUE_LINE);
            assert!(line.starts_with("v "));
            values.extend(line[2..].split(' ').map(|t| t.parse::<i32>().unwrap()));
        }
        assert_eq!(values.pop(), Some(0));
        let decoded: Vec<bool> = values.iter().map(|&v| v > 0).collect();
        assert_eq!(decoded, model);
    }

    #[test]
    fn model_checks() {
        let f = RawFormula::from_dimacs_clauses(&[&[1]]);
        assert_eq!(verify_model(&f, &[true]), Ok(true));
        let g = RawFormula::from_dimacs_clauses(&[&[1], &[-1]]);
        assert_eq!(verify_model(&g, &[true]), Ok(false));
        assert_eq!(verify_model(&g, &[false]), Ok(false));
        assert!(verify_model(&g, &[]).is_err());
    }

    fn truth_table_eval(f: &RawFormula, bits: u32) -> bool {
        f.clauses.iter().all(|c| {
            c.iter().any(|l| {
                let value = bits >> l.var().index() & 1 == 1;
                value == l.is_positive()
            })
        })
    }

    fn small_formula() -> impl Strategy<Value = RawFormula> {
        (1usize..=4).prop_flat_map(|n| {
            let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, p)| if p { v } else { -v });
            prop::collection::vec(prop::collection::vec(lit, 0..4), 0..6).prop_map(move |cs| {
                RawFormula {
                    num_vars: n,
                    clauses: cs
                        .into_iter()
                        .map(|c| c.into_iter().map(Lit::from_dimacs).collect())
                        .collect(),
                }
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(f in small_formula()) {
            let back = parse(&f.to_dimacs()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn verify_agrees_with_truth_table(f in small_formula()) {
            for bits in 0..(1u32 << f.num_vars) {
                let model: Vec<bool> = (0..f.num_vars).map(|i| bits >> i & 1 == 1).collect();
                prop_assert_eq!(verify_model(&f, &model).unwrap(), truth_table_eval(&f, bits));
            }
        }

        #[test]
        fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
            let _ = parse_cnf(&bytes[..]);
        }

        #[test]
        fn parser_never_panics_on_dimacs_like_text(
            body in "(p cnf [0-9]{1,2} [0-9]{1,2}\n)?([-0-9 c%p\n]{0,60})"
        ) {
            let _ = parse(&body);
        }
    }
}

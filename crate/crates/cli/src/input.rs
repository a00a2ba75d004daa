//! Parser for the line-oriented matrix-set input format.
//!
//! ```text
//! dim 2
//! matrices 2
//! 1 1
//! 0 1
//! 0 0
//! -1/3 1
//! cone orthant            # or: cone generators <g> followed by g rows
//! inner_cone generators 1
//! 1 1
//! ```
//!
//! Blank lines and `#` comments are ignored. Number tokens may be decimal
//! literals or exact rationals `p/q`, parsed as two decimals and divided
//! once (a single correctly rounded operation).

use std::fmt;
use std::path::Path;

use jsc_core::{Matrix, MatrixSet, PolyhedralCone};

/// Parse failure with its input location.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
pub struct ParsedInput {
    pub sigma: MatrixSet,
    pub cone: Option<PolyhedralCone>,
    pub inner_cone: Option<PolyhedralCone>,
}

pub fn parse_input(path: &Path) -> Result<ParsedInput, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_input_str(&text)
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, raw)| {
                let stripped = raw.split('#').next().unwrap_or("").trim();
                (i + 1, stripped)
            })
            .filter(|(_, s)| !s.is_empty())
            .collect();
        Lines { lines, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.lines.get(self.pos).copied();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.next().ok_or_else(|| ParseError {
            line: self.lines.last().map_or(0, |(n, _)| *n),
            message: format!("unexpected end of file, expected {what}"),
        })
    }
}

/// Parses a decimal or exact-rational number token.
pub fn parse_number(token: &str, line: usize) -> Result<f64, ParseError> {
    let value = if let Some((num, den)) = token.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| ParseError {
            line,
            message: format!("invalid rational numerator '{num}'"),
        })?;
        let d: f64 = den.trim().parse().map_err(|_| ParseError {
            line,
            message: format!("invalid rational denominator '{den}'"),
        })?;
        if d == 0.0 {
            return Err(ParseError {
                line,
                message: format!("zero denominator in '{token}'"),
            });
        }
        n / d
    } else {
        token.parse().map_err(|_| ParseError {
            line,
            message: format!("invalid number '{token}'"),
        })?
    };
    if !value.is_finite() {
        return Err(ParseError {
            line,
            message: format!("number '{token}' is not finite"),
        });
    }
    Ok(value)
}

fn parse_row(line: usize, text: &str, dim: usize, what: &str) -> Result<Vec<f64>, ParseError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != dim {
        return Err(ParseError {
            line,
            message: format!("{what} row has {} entries, expected {dim}", tokens.len()),
        });
    }
    tokens.iter().map(|t| parse_number(t, line)).collect()
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token.parse().map_err(|_| ParseError {
        line,
        message: format!("invalid {what} '{token}'"),
    })
}

fn parse_cone_block(
    lines: &mut Lines<'_>,
    header_line: usize,
    rest: &[&str],
    dim: usize,
    keyword: &str,
) -> Result<PolyhedralCone, ParseError> {
    match rest {
        ["orthant"] => Ok(PolyhedralCone::orthant(dim)),
        ["generators", count] => {
            let g = parse_usize(header_line, count, "generator count")?;
            if g == 0 {
                return Err(ParseError {
                    line: header_line,
                    message: "generator count must be at least 1".into(),
                });
            }
            let mut gens = Vec::with_capacity(g);
            for _ in 0..g {
                let (line, text) = lines.expect("a generator row")?;
                gens.push(parse_row(line, text, dim, "generator")?);
            }
            PolyhedralCone::from_generators(dim, gens).map_err(|e| ParseError {
                line: header_line,
                message: e.to_string(),
            })
        }
        _ => Err(ParseError {
            line: header_line,
            message: format!("expected '{keyword} orthant' or '{keyword} generators <count>'"),
        }),
    }
}

pub fn parse_input_str(text: &str) -> Result<ParsedInput, ParseError> {
    let mut lines = Lines::new(text);

    let (line, header) = lines.expect("'dim <n>'")?;
    let dim = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["dim", n] => parse_usize(line, n, "dimension")?,
        _ => {
            return Err(ParseError {
                line,
                message: "expected 'dim <n>'".into(),
            })
        }
    };
    if dim == 0 {
        return Err(ParseError {
            line,
            message: "dimension must be at least 1".into(),
        });
    }

    let (line, header) = lines.expect("'matrices <m>'")?;
    let count = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["matrices", m] => parse_usize(line, m, "matrix count")?,
        _ => {
            return Err(ParseError {
                line,
                message: "expected 'matrices <m>'".into(),
            })
        }
    };
    if count == 0 {
        return Err(ParseError {
            line,
            message: "matrix count must be at least 1".into(),
        });
    }

    let mut members = Vec::with_capacity(count);
    for k in 0..count {
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (line, text) = lines.expect("a matrix row")?;
            rows.push(parse_row(line, text, dim, "matrix")?);
        }
        members.push(Matrix::from_rows(&rows).map_err(|e| ParseError {
            line,
            message: format!("matrix {k}: {e}"),
        })?);
    }
    let sigma = MatrixSet::new(members).map_err(|e| ParseError {
        line: 0,
        message: e.to_string(),
    })?;

    let mut cone = None;
    let mut inner_cone = None;
    while let Some((line, text)) = lines.next() {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match tokens.first().copied() {
            Some("cone") => {
                if cone.is_some() {
                    return Err(ParseError {
                        line,
                        message: "duplicate cone block".into(),
                    });
                }
                cone = Some(parse_cone_block(
                    &mut lines,
                    line,
                    &tokens[1..],
                    dim,
                    "cone",
                )?);
            }
            Some("inner_cone") => {
                if inner_cone.is_some() {
                    return Err(ParseError {
                        line,
                        message: "duplicate inner_cone block".into(),
                    });
                }
                inner_cone = Some(parse_cone_block(
                    &mut lines,
                    line,
                    &tokens[1..],
                    dim,
                    "inner_cone",
                )?);
            }
            _ => {
                return Err(ParseError {
                    line,
                    message: format!("unexpected content '{text}'"),
                })
            }
        }
    }

    Ok(ParsedInput {
        sigma,
        cone,
        inner_cone,
    })
}

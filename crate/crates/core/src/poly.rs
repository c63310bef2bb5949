//! Polynomials given as explicit monomial term lists.

use crate::error::{Error, Result};

/// `sum coeff * x^a y^b z^c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(f64, [usize; 3])>,
}

impl Polynomial {
    /// Parses one `coeff a b c` term per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != 4 {
                return Err(err(format!(
                    "expected \"coeff a b c\", found {} fields",
                    tokens.len()
                )));
            }
            let coeff: f64 = tokens[0]
                .parse()
                .map_err(|_| err(format!("invalid coefficient {:?}", tokens[0])))?;
            let mut exps = [0usize; 3];
            for d in 0..3 {
                exps[d] = tokens[d + 1]
                    .parse()
                    .map_err(|_| err(format!("invalid exponent {:?}", tokens[d + 1])))?;
            }
            terms.push((coeff, exps));
        }
        Ok(Polynomial { terms })
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, p: &[f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                c * p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32)
            })
            .sum()
    }
}

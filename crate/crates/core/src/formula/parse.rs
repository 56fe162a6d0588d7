//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! ```text
//! phi ::= ident | "~" phi | phi "&" phi | phi "|" phi | phi "->" phi
//!       | phi "<->" phi | "K_" ident phi | "Khat_" ident phi
//!       | "int" "(" phi ")" | "[" phi "]" phi | "<" phi ">" phi
//!       | "box" phi | "dia" phi | "false" | "(" phi ")"
//! ```
//!
//! Precedence, tightest first: unary prefixes, `&`, `|`, `->` (right
//! associative), `<->`. `&`, `|`, and `<->` associate to the left.
//! Abbreviations desugar during parsing, so the returned AST only contains
//! primitive connectives.

use super::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    KAgent(String),
    KhatAgent(String),
    Tilde,
    Amp,
    Pipe,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    DoubleArrow,
    KwInt,
    KwBox,
    KwDia,
    KwFalse,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '~' => {
                toks.push((Tok::Tilde, i));
                i += 1;
            }
            '&' => {
                toks.push((Tok::Amp, i));
                i += 1;
            }
            '|' => {
                toks.push((Tok::Pipe, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '[' => {
                toks.push((Tok::LBracket, i));
                i += 1;
            }
            ']' => {
                toks.push((Tok::RBracket, i));
                i += 1;
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((Tok::DoubleArrow, i));
                    i += 3;
                } else {
                    toks.push((Tok::Lt, i));
                    i += 1;
                }
            }
            '>' => {
                toks.push((Tok::Gt, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(ParseError {
                        pos: i,
                        msg: "expected '>' after '-'".into(),
                    });
                }
            }
            _ if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "int" => Tok::KwInt,
                    "box" => Tok::KwBox,
                    "dia" => Tok::KwDia,
                    "false" => Tok::KwFalse,
                    _ => {
                        if let Some(agent) = word.strip_prefix("Khat_") {
                            if agent.is_empty() {
                                return Err(ParseError {
                                    pos: start,
                                    msg: "missing agent after 'Khat_'".into(),
                                });
                            }
                            Tok::KhatAgent(agent.to_string())
                        } else if let Some(agent) = word.strip_prefix("K_") {
                            if agent.is_empty() {
                                return Err(ParseError {
                                    pos: start,
                                    msg: "missing agent after 'K_'".into(),
                                });
                            }
                            Tok::KAgent(agent.to_string())
                        } else {
                            Tok::Ident(word.to_string())
                        }
                    }
                };
                toks.push((tok, start));
            }
            _ => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError {
                pos: self.here(),
                msg: format!("expected {what}"),
            })
        }
    }

    // <-> is loosest and left-associative
    fn parse_iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_implies()?;
        while self.peek() == Some(&Tok::DoubleArrow) {
            self.pos += 1;
            let rhs = self.parse_implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    // -> is right-associative and binds looser than |
    fn parse_implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.parse_implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = self.parse_and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.parse_unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Tilde) => Ok(Formula::not(self.parse_unary()?)),
            Some(Tok::KAgent(i)) => Ok(Formula::know(i, self.parse_unary()?)),
            Some(Tok::KhatAgent(i)) => Ok(Formula::khat(i, self.parse_unary()?)),
            Some(Tok::KwBox) => Ok(Formula::quant_box(self.parse_unary()?)),
            Some(Tok::KwDia) => Ok(Formula::dia(self.parse_unary()?)),
            Some(Tok::KwInt) => {
                self.expect(Tok::LParen, "'(' after 'int'")?;
                let inner = self.parse_iff()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Formula::int(inner))
            }
            Some(Tok::LBracket) => {
                let ann = self.parse_iff()?;
                self.expect(Tok::RBracket, "']'")?;
                let body = self.parse_unary()?;
                Ok(Formula::announce(ann, body))
            }
            Some(Tok::Lt) => {
                let ann = self.parse_iff()?;
                self.expect(Tok::Gt, "'>'")?;
                let body = self.parse_unary()?;
                Ok(Formula::dia_announce(ann, body))
            }
            Some(Tok::LParen) => {
                let inner = self.parse_iff()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::KwFalse) => Ok(Formula::bot()),
            Some(Tok::Ident(name)) => Ok(Formula::Atom(name)),
            _ => Err(ParseError {
                pos,
                msg: "expected a formula".into(),
            }),
        }
    }
}

/// Parse a formula; agents and propositions are only names here, they are
/// checked against a model when one is supplied.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = parser.parse_iff()?;
    if parser.pos != parser.toks.len() {
        return Err(ParseError {
            pos: parser.here(),
            msg: "trailing input after formula".into(),
        });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::super::Formula;
    use super::parse;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn grammar_productions() {
        assert_eq!(parse("K_a p").unwrap(), Formula::know("a", p()));
        assert_eq!(
            parse("<p> q").unwrap(),
            Formula::not(Formula::announce(p(), Formula::not(q())))
        );
        assert_eq!(
            parse("box (p -> q)").unwrap(),
            Formula::quant_box(Formula::not(Formula::and(p(), Formula::not(q()))))
        );
    }

    #[test]
    fn precedence() {
        // unary binds tighter than &, & tighter than |, -> loosest
        assert_eq!(
            parse("~p & q").unwrap(),
            Formula::and(Formula::not(p()), q())
        );
        assert_eq!(
            parse("p & q | p").unwrap(),
            Formula::or(Formula::and(p(), q()), p())
        );
        assert_eq!(
            parse("p -> q -> p").unwrap(),
            Formula::implies(p(), Formula::implies(q(), p()))
        );
        assert_eq!(
            parse("K_a p & q").unwrap(),
            Formula::and(Formula::know("a", p()), q())
        );
        assert_eq!(
            parse("[p] q & q").unwrap(),
            Formula::and(Formula::announce(p(), q()), q())
        );
    }

    #[test]
    fn abbreviations_desugar() {
        assert_eq!(parse("false").unwrap(), Formula::bot());
        assert_eq!(parse("Khat_a p").unwrap(), Formula::khat("a", p()));
        assert_eq!(parse("dia p").unwrap(), Formula::dia(p()));
        assert_eq!(parse("p <-> q").unwrap(), Formula::iff(p(), q()));
        // <-> is looser than ->, and '<' alone still opens a diamond
        assert_eq!(
            parse("p -> q <-> q").unwrap(),
            Formula::iff(Formula::implies(p(), q()), q())
        );
        assert_eq!(
            parse("<p> q").unwrap(),
            Formula::dia_announce(p(), q())
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("p &").unwrap_err();
        assert_eq!(err.pos, 3);
        let err = parse("p ! q").unwrap_err();
        assert_eq!(err.pos, 2);
        assert!(parse("int p").is_err());
        assert!(parse("").is_err());
        let err = parse("p q").unwrap_err();
        assert_eq!(err.pos, 2);
    }
}

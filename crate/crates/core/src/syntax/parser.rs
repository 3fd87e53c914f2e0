use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::lexer::{tokenize, Spanned, Token};
use super::{Formula, StandpointExpr, VocabError, Vocabulary, TILDE_SUFFIX};

/// How identifiers are resolved while parsing.
#[derive(Debug, Clone, Copy)]
pub enum VocabMode<'a> {
    /// Every identifier must occur in the given vocabulary, in the right role.
    Declared(&'a Vocabulary),
    /// Identifiers inside standpoint delimiters are standpoints, all others
    /// are propositional atoms.
    Inferred,
}

/// Malformed input: where it went wrong and what would have been accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub found: String,
    pub expected: BTreeSet<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at position {}: unexpected {}",
            self.position, self.found
        )?;
        if !self.expected.is_empty() {
            let expected: Vec<&str> = self.expected.iter().map(String::as_str).collect();
            write!(f, ", expected one of: {}", expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Vocab(#[from] VocabError),
}

const FORMULA_START: &[&str] = &[
    "identifier",
    "true",
    "false",
    "!",
    "(",
    "[",
    "[[",
    "<",
    "<<",
    "{",
];
const EXPR_START: &[&str] = &["identifier", "*", "-", "("];

/// Parses a single formula. Returns the formula together with its vocabulary:
/// the declared one in declared mode, the inferred one otherwise.
pub fn parse_formula(
    text: &str,
    mode: VocabMode<'_>,
) -> Result<(Formula, Vocabulary), SyntaxError> {
    let mut parser = Parser::new(text)?;
    let formula = parser.formula()?;
    parser.expect(&Token::Eof, &["end of input", "&", "|", "->", "<->", "~>"])?;
    let vocab = parser.resolve(mode)?;
    Ok((formula, vocab))
}

/// Parses a bare standpoint expression such as `s & -t`.
pub fn parse_standpoint_expr(text: &str) -> Result<StandpointExpr, SyntaxError> {
    let mut parser = Parser::new(text)?;
    let expr = parser.expr()?;
    parser.expect(&Token::Eof, &["end of input", "&", "\\", "u"])?;
    Ok(expr)
}

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
    atoms: BTreeSet<String>,
    standpoints: BTreeSet<String>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(text).map_err(|e| ParseError {
            position: e.pos,
            found: format!("character `{}`", e.found),
            expected: BTreeSet::new(),
        })?;
        Ok(Parser {
            tokens,
            at: 0,
            atoms: BTreeSet::new(),
            standpoints: BTreeSet::new(),
        })
    }

    fn resolve(self, mode: VocabMode<'_>) -> Result<Vocabulary, VocabError> {
        match mode {
            VocabMode::Inferred => {
                let v = Vocabulary {
                    prop_atoms: self.atoms,
                    standpoints: self.standpoints,
                };
                v.check()?;
                Ok(v)
            }
            VocabMode::Declared(declared) => {
                if let Some(p) = self.atoms.difference(&declared.prop_atoms).next() {
                    return Err(VocabError::UndeclaredAtom(p.clone()));
                }
                if let Some(s) = self.standpoints.difference(&declared.standpoints).next() {
                    return Err(VocabError::UndeclaredStandpoint(s.clone()));
                }
                Ok(declared.clone())
            }
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.at].token
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].token.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.tokens[self.at];
        ParseError {
            position: here.pos,
            found: here.token.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, token: &Token, expected: &[&str]) -> Result<(), ParseError> {
        if self.peek() == token {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    // formula := iff ( "~>" iff )?
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.iff()?;
        if self.peek() == &Token::LeadsTo {
            self.bump();
            let rhs = self.iff()?;
            if self.peek() == &Token::LeadsTo {
                // `~>` does not associate; nesting needs parentheses.
                return Err(self.error(&["end of input", ")", "<->"]));
            }
            return Ok(Formula::def_implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.peek() == &Token::DoubleArrow {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == &Token::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == &Token::Pipe {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == &Token::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Token::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Token::LBracket => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Token::RBracket, &["]", "&", "\\", "u"])?;
                Ok(Formula::boxed(e, self.unary()?))
            }
            Token::LDoubleBracket => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Token::RDoubleBracket, &["]]", "&", "\\", "u"])?;
                Ok(Formula::def_box(e, self.unary()?))
            }
            Token::Lt => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Token::Gt, &[">", "&", "\\", "u"])?;
                Ok(Formula::diamond(e, self.unary()?))
            }
            Token::LDoubleAngle => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Token::RDoubleAngle, &[">>", "&", "\\", "u"])?;
                Ok(Formula::def_diamond(e, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::Ident(name) if name == "true" => {
                self.bump();
                Ok(Formula::Top)
            }
            Token::Ident(name) if name == "false" => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Token::Ident(name) if !name.ends_with(TILDE_SUFFIX) => {
                self.bump();
                self.atoms.insert(name.clone());
                Ok(Formula::Atom(name))
            }
            Token::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Token::RParen, &[")", "&", "|", "->", "<->", "~>"])?;
                Ok(f)
            }
            Token::LBrace => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Token::RBrace, &["}", "&", "\\", "u"])?;
                let defeasible = match self.peek() {
                    Token::Leq => false,
                    Token::DefLeq => true,
                    _ => return Err(self.error(&["<=", "<~"])),
                };
                self.bump();
                self.expect(&Token::LBrace, &["{"])?;
                let d = self.expr()?;
                self.expect(&Token::RBrace, &["}", "&", "\\", "u"])?;
                Ok(if defeasible {
                    Formula::DefSharpening(e, d)
                } else {
                    Formula::Sharpening(e, d)
                })
            }
            _ => Err(self.error(FORMULA_START)),
        }
    }

    // expr := diff ( "u" diff )*
    fn expr(&mut self) -> Result<StandpointExpr, ParseError> {
        let mut lhs = self.difference()?;
        while matches!(self.peek(), Token::Ident(name) if name == "u") {
            self.bump();
            let rhs = self.difference()?;
            lhs = StandpointExpr::union(lhs, rhs);
        }
        Ok(lhs)
    }

    fn difference(&mut self) -> Result<StandpointExpr, ParseError> {
        let mut lhs = self.intersection()?;
        while self.peek() == &Token::Backslash {
            self.bump();
            let rhs = self.intersection()?;
            lhs = StandpointExpr::difference(lhs, rhs);
        }
        Ok(lhs)
    }

    fn intersection(&mut self) -> Result<StandpointExpr, ParseError> {
        let mut lhs = self.expr_unary()?;
        while self.peek() == &Token::Amp {
            self.bump();
            let rhs = self.expr_unary()?;
            lhs = StandpointExpr::intersection(lhs, rhs);
        }
        Ok(lhs)
    }

    fn expr_unary(&mut self) -> Result<StandpointExpr, ParseError> {
        match self.peek().clone() {
            Token::Minus => {
                self.bump();
                Ok(StandpointExpr::complement(self.expr_unary()?))
            }
            Token::Star => {
                self.bump();
                Ok(StandpointExpr::Universal)
            }
            Token::Ident(name) if name != "u" => {
                self.bump();
                self.standpoints.insert(name.clone());
                Ok(StandpointExpr::Atom(name))
            }
            Token::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Token::RParen, &[")", "&", "\\", "u"])?;
                Ok(e)
            }
            _ => Err(self.error(EXPR_START)),
        }
    }
}

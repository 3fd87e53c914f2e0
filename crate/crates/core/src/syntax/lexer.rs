use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LDoubleBracket,
    RDoubleBracket,
    Lt,
    Gt,
    LDoubleAngle,
    RDoubleAngle,
    LBrace,
    RBrace,
    Bang,
    Amp,
    Pipe,
    Minus,
    Backslash,
    Arrow,
    DoubleArrow,
    Leq,
    DefLeq,
    LeadsTo,
    Eof,
}

impl Token {
    pub(crate) fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("`{name}`"),
            Token::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub(crate) fn symbol(&self) -> &'static str {
        match self {
            Token::Ident(_) => "identifier",
            Token::Star => "*",
            Token::LParen => "(",
            Token::RParen => ")",
            Token::LBracket => "[",
            Token::RBracket => "]",
            Token::LDoubleBracket => "[[",
            Token::RDoubleBracket => "]]",
            Token::Lt => "<",
            Token::Gt => ">",
            Token::LDoubleAngle => "<<",
            Token::RDoubleAngle => ">>",
            Token::LBrace => "{",
            Token::RBrace => "}",
            Token::Bang => "!",
            Token::Amp => "&",
            Token::Pipe => "|",
            Token::Minus => "-",
            Token::Backslash => "\\",
            Token::Arrow => "->",
            Token::DoubleArrow => "<->",
            Token::Leq => "<=",
            Token::DefLeq => "<~",
            Token::LeadsTo => "~>",
            Token::Eof => "end of input",
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub token: Token,
    /// Character offset of the token's first character.
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LexError {
    pub pos: usize,
    pub found: char,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// True for names accepted as plain identifiers (no translation suffix).
pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue)
}

/// Splits `text` into tokens. An identifier (or `*`) absorbs a directly
/// following `~` unless that `~` starts a `~>` arrow.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let peek = |i: usize| chars.get(i).copied();
    let tilde_follows = |i: usize| peek(i) == Some('~') && peek(i + 1) != Some('>');

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let token = if is_ident_start(c) {
            let mut name = String::new();
            while let Some(c) = peek(i).filter(|c| is_ident_continue(*c)) {
                name.push(c);
                i += 1;
            }
            if tilde_follows(i) {
                name.push('~');
                i += 1;
            }
            Token::Ident(name)
        } else {
            let (token, width) = match (c, peek(i + 1), peek(i + 2)) {
                ('*', Some('~'), next) if next != Some('>') => (Token::Ident("*~".into()), 2),
                ('*', ..) => (Token::Star, 1),
                ('(', ..) => (Token::LParen, 1),
                (')', ..) => (Token::RParen, 1),
                ('[', Some('['), _) => (Token::LDoubleBracket, 2),
                ('[', ..) => (Token::LBracket, 1),
                (']', Some(']'), _) => (Token::RDoubleBracket, 2),
                (']', ..) => (Token::RBracket, 1),
                ('<', Some('-'), Some('>')) => (Token::DoubleArrow, 3),
                ('<', Some('<'), _) => (Token::LDoubleAngle, 2),
                ('<', Some('='), _) => (Token::Leq, 2),
                ('<', Some('~'), _) => (Token::DefLeq, 2),
                ('<', ..) => (Token::Lt, 1),
                ('>', Some('>'), _) => (Token::RDoubleAngle, 2),
                ('>', ..) => (Token::Gt, 1),
                ('{', ..) => (Token::LBrace, 1),
                ('}', ..) => (Token::RBrace, 1),
                ('!', ..) => (Token::Bang, 1),
                ('&', ..) => (Token::Amp, 1),
                ('|', ..) => (Token::Pipe, 1),
                ('-', Some('>'), _) => (Token::Arrow, 2),
                ('-', ..) => (Token::Minus, 1),
                ('\\', ..) => (Token::Backslash, 1),
                ('~', Some('>'), _) => (Token::LeadsTo, 2),
                _ => return Err(LexError { pos: i, found: c }),
            };
            i += width;
            token
        };
        out.push(Spanned { token, pos: start });
    }
    out.push(Spanned {
        token: Token::Eof,
        pos: chars.len(),
    });
    Ok(out)
}

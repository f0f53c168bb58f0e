use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    SortVar(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Semi,
    Lt,
    Gt,
    Eq,
    Plus,
    Star,
    Tilde,
    At,
    Bar,
    Or,
    And,
    Implies,
    Iff,
    Arrow,
    Assign,
    Turnstile,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::SortVar(s) => format!("`'{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Tilde => "~",
            Tok::At => "@",
            Tok::Bar => "|",
            Tok::Or => "\\/",
            Tok::And => "/\\",
            Tok::Implies => "=>",
            Tok::Iff => "<=>",
            Tok::Arrow => "->",
            Tok::Assign => ":=",
            Tok::Turnstile => "|-",
            _ => "?",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Whitespace (or start of input) directly precedes this token.
    pub spaced: bool,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut spaced = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            spaced = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            spaced = true;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let multi = [
            ("<=>", Tok::Iff),
            ("=>", Tok::Implies),
            ("->", Tok::Arrow),
            (":=", Tok::Assign),
            ("|-", Tok::Turnstile),
            ("\\/", Tok::Or),
            ("/\\", Tok::And),
        ];
        if let Some((text, tok)) = multi.iter().find(|(t, _)| rest.starts_with(t)) {
            out.push(Token {
                tok: tok.clone(),
                line,
                col: start_col,
                spaced,
            });
            i += text.len();
            col += text.len();
            spaced = false;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            ';' => Some(Tok::Semi),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '~' => Some(Tok::Tilde),
            '@' => Some(Tok::At),
            '|' => Some(Tok::Bar),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                line,
                col: start_col,
                spaced,
            });
            i += 1;
            col += 1;
            spaced = false;
            continue;
        }
        if c == '\'' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            if j == i + 1 {
                return Err(ParseError::new(
                    line,
                    col,
                    "expected sort variable name after `'`",
                ));
            }
            out.push(Token {
                tok: Tok::SortVar(chars[i + 1..j].iter().collect()),
                line,
                col: start_col,
                spaced,
            });
            col += j - i;
            i = j;
            spaced = false;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let n = text
                .parse()
                .map_err(|_| ParseError::new(line, col, "numeral too large"))?;
            out.push(Token {
                tok: Tok::Num(n),
                line,
                col: start_col,
                spaced,
            });
            col += j - i;
            i = j;
            spaced = false;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && ident_char(chars[j]) {
                j += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[i..j].iter().collect()),
                line,
                col: start_col,
                spaced,
            });
            col += j - i;
            i = j;
            spaced = false;
            continue;
        }
        return Err(ParseError::new(
            line,
            col,
            format!("unexpected character `{c}`"),
        ));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
        spaced: true,
    });
    Ok(out)
}

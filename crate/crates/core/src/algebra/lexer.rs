use super::AlgebraError as ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const ALIASES: &[(&str, &str)] = &[
    ("gamma", "γ"),
    ("lambda", "λ"),
    ("alpha", "α"),
    ("kappa", "κ"),
    ("omega", "ω"),
    ("xi", "ξ"),
    ("Xi", "Ξ"),
];

/// Maps ASCII spellings to the canonical identifiers: `kappa1` → `κ1`,
/// `gamma_hat` → `γ̂`, `c'1` → `c′1`.
pub fn canonical_ident(raw: &str) -> String {
    let split = raw.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(raw.len());
    let (word, rest) = raw.split_at(split);
    let mut out = match ALIASES.iter().find(|(a, _)| *a == word) {
        Some((_, g)) => format!("{g}{rest}"),
        None => raw.to_string(),
    };
    out = out.replace("_hat", "\u{0302}").replace('\'', "′");
    out
}

fn is_combining(c: char) -> bool {
    ('\u{0300}'..='\u{036F}').contains(&c)
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '′' || c == '″' || is_combining(c)
}

const SYMS: &[&str] = &["->", "{", "}", "[", "]", "(", ")", ",", ";", ":", "=", "+", "-", "*", "/", "^"];

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (l0, c0) = (line, col);
        if ident_start(c) {
            let s = i;
            while i < chars.len() && ident_continue(chars[i]) {
                i += 1;
            }
            let raw: String = chars[s..i].iter().collect();
            col += i - s;
            out.push(Token { tok: Tok::Ident(canonical_ident(&raw)), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - s;
            out.push(Token { tok: Tok::Int(chars[s..i].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if c == '"' {
            let s = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\n' {
                    return Err(ParseError::syntax(l0, c0, "unterminated string"));
                }
                i += 1;
            }
            if i >= chars.len() {
                return Err(ParseError::syntax(l0, c0, "unterminated string"));
            }
            let text: String = chars[s..i].iter().collect();
            i += 1;
            col += text.chars().count() + 2;
            out.push(Token { tok: Tok::Str(text), line: l0, col: c0 });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        if let Some(sym) = SYMS.iter().find(|s| rest.starts_with(**s)) {
            let n = sym.chars().count();
            i += n;
            col += n;
            out.push(Token { tok: Tok::Sym(sym), line: l0, col: c0 });
            continue;
        }
        return Err(ParseError::syntax(l0, c0, &format!("unexpected character `{c}`")));
    }
    Ok(out)
}

use super::lexer::{tokenize, Tok, Token};
use super::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub enum Expr {
    Int(i64, Pos),
    Ident(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i32, Pos),
    Bracket(Box<Expr>, Box<Expr>, Pos),
    Call(String, Vec<Expr>, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int(_, p) | Expr::Ident(_, p) | Expr::Mul(_, _, p) | Expr::Div(_, _, p) => *p,
            Expr::Pow(_, _, p) | Expr::Bracket(_, _, p) | Expr::Call(_, _, p) => *p,
            Expr::Neg(e) | Expr::Add(e, _) | Expr::Sub(e, _) => e.pos(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Name {
    pub name: String,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct MapItem {
    pub from: Name,
    pub negate: bool,
    pub to: Name,
}

#[derive(Clone, Debug)]
pub enum Stmt {
    Params(Vec<Name>),
    Define(Name, Expr),
    Generators(Vec<Name>, Pos),
    Vector(Name, Expr),
    Bracket(Name, Name, Expr),
    Casimir(Name, Expr, Name),
    Cartan { label: Name, p: Vec<Name>, h: Vec<Name>, pattern: Name },
    Involution(Name, Vec<MapItem>),
    Space { label: Name, dim: Option<i64>, rank: Option<i64>, curvature: Option<Expr>, quotient: Option<String> },
}

#[derive(Clone, Debug)]
pub struct Ast {
    pub name: String,
    pub stmts: Vec<Stmt>,
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|t| Pos { line: t.line, col: t.col }).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: &str) -> Result<T, AlgebraError> {
        let p = self.pos();
        Err(AlgebraError::syntax(p.line, p.col, msg))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> Result<(), AlgebraError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(&format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> Result<Name, AlgebraError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let name = s.clone();
                self.at += 1;
                Ok(Name { name, pos })
            }
            _ => self.err("expected identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), AlgebraError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.at += 1;
                Ok(())
            }
            _ => self.err(&format!("expected `{kw}`")),
        }
    }

    fn int(&mut self) -> Result<i64, AlgebraError> {
        match self.peek() {
            Some(Tok::Int(s)) => {
                let v = s.parse::<i64>();
                match v {
                    Ok(v) => {
                        self.at += 1;
                        Ok(v)
                    }
                    Err(_) => self.err("integer out of range"),
                }
            }
            _ => self.err("expected integer"),
        }
    }

    fn list(&mut self) -> Result<Vec<Name>, AlgebraError> {
        self.sym("[")?;
        let mut out = Vec::new();
        if self.eat_sym("]") {
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            if self.eat_sym("]") {
                return Ok(out);
            }
            self.sym(",")?;
        }
    }

    fn expr(&mut self) -> Result<Expr, AlgebraError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_sym("+") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym("-") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, AlgebraError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat_sym("*") {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?), pos);
            } else if self.eat_sym("/") {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, AlgebraError> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        let pos = self.pos();
        if self.eat_sym("^") {
            let neg = self.eat_sym("-");
            let e = self.int()?;
            let e = i32::try_from(e).or_else(|_| self.err("exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, pos));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, AlgebraError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(_)) => Ok(Expr::Int(self.int()?, pos)),
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if self.eat_sym("(") {
                    let mut args = Vec::new();
                    if !self.eat_sym(")") {
                        loop {
                            args.push(self.expr()?);
                            if self.eat_sym(")") {
                                break;
                            }
                            self.sym(",")?;
                        }
                    }
                    return Ok(Expr::Call(name, args, pos));
                }
                Ok(Expr::Ident(name, pos))
            }
            Some(Tok::Sym("(")) => {
                self.at += 1;
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            Some(Tok::Sym("[")) => {
                self.at += 1;
                let a = self.expr()?;
                self.sym(",")?;
                let b = self.expr()?;
                self.sym("]")?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b), pos))
            }
            _ => self.err("expected expression"),
        }
    }

    fn stmt(&mut self) -> Result<Stmt, AlgebraError> {
        let kw = self.ident()?;
        let s = match kw.name.as_str() {
            "params" => Stmt::Params(self.list()?),
            "define" => {
                let n = self.ident()?;
                self.sym("=")?;
                Stmt::Define(n, self.expr()?)
            }
            "generators" => Stmt::Generators(self.list()?, kw.pos),
            "vector" => {
                let n = self.ident()?;
                self.sym("=")?;
                Stmt::Vector(n, self.expr()?)
            }
            "bracket" => {
                self.sym("[")?;
                let x = self.ident()?;
                self.sym(",")?;
                let y = self.ident()?;
                self.sym("]")?;
                self.sym("=")?;
                Stmt::Bracket(x, y, self.expr()?)
            }
            "casimir" => {
                let n = self.ident()?;
                self.sym("=")?;
                let e = self.expr()?;
                self.keyword("eigenvalue")?;
                Stmt::Casimir(n, e, self.ident()?)
            }
            "cartan" => {
                let label = self.ident()?;
                self.sym(":")?;
                self.keyword("p")?;
                self.sym("=")?;
                let p = self.list()?;
                self.eat_sym(",");
                self.keyword("h")?;
                self.sym("=")?;
                let h = self.list()?;
                self.keyword("pattern")?;
                self.sym("=")?;
                Stmt::Cartan { label, p, h, pattern: self.ident()? }
            }
            "involution" => {
                let n = self.ident()?;
                let mut maps = Vec::new();
                if self.eat_sym(":") && !self.is_sym(";") {
                    loop {
                        let from = self.ident()?;
                        self.sym("->")?;
                        let negate = self.eat_sym("-");
                        maps.push(MapItem { from, negate, to: self.ident()? });
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                Stmt::Involution(n, maps)
            }
            "space" => {
                let label = self.ident()?;
                self.sym(":")?;
                let (mut dim, mut rank, mut curvature, mut quotient) = (None, None, None, None);
                while !self.is_sym(";") {
                    let key = self.ident()?;
                    self.sym("=")?;
                    match key.name.as_str() {
                        "dim" => dim = Some(self.int()?),
                        "rank" => rank = Some(self.int()?),
                        "curvature" => curvature = Some(self.expr()?),
                        "quotient" => match self.peek().cloned() {
                            Some(Tok::Str(s)) => {
                                self.at += 1;
                                quotient = Some(s);
                            }
                            _ => return self.err("expected string"),
                        },
                        _ => return Err(AlgebraError::syntax(key.pos.line, key.pos.col, "unknown space field")),
                    }
                }
                Stmt::Space { label, dim, rank, curvature, quotient }
            }
            _ => return Err(AlgebraError::syntax(kw.pos.line, kw.pos.col, &format!("unknown statement `{}`", kw.name))),
        };
        self.sym(";")?;
        Ok(s)
    }
}

/// Parses a lone expression.
pub fn parse_expr(text: &str) -> Result<Expr, AlgebraError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: Pos { line: 1, col: text.chars().count() + 1 } };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

const ADD: u8 = 1;
const MUL: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 4;

impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => ADD,
            Expr::Mul(..) | Expr::Div(..) => MUL,
            Expr::Neg(..) => UNARY,
            Expr::Int(v, _) if *v < 0 => UNARY,
            _ => ATOM,
        }
    }

    fn wrap(&self, min: u8) -> String {
        if self.level() < min {
            format!("({self})")
        } else {
            self.to_string()
        }
    }

    /// Replaces identifiers by expressions.
    pub fn replace(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        let b = |e: &Expr| Box::new(e.replace(f));
        match self {
            Expr::Ident(n, _) => f(n).unwrap_or_else(|| self.clone()),
            Expr::Int(..) => self.clone(),
            Expr::Neg(a) => Expr::Neg(b(a)),
            Expr::Add(x, y) => Expr::Add(b(x), b(y)),
            Expr::Sub(x, y) => Expr::Sub(b(x), b(y)),
            Expr::Mul(x, y, p) => Expr::Mul(b(x), b(y), *p),
            Expr::Div(x, y, p) => Expr::Div(b(x), b(y), *p),
            Expr::Pow(x, k, p) => Expr::Pow(b(x), *k, *p),
            Expr::Bracket(x, y, p) => Expr::Bracket(b(x), b(y), *p),
            Expr::Call(n, args, p) => Expr::Call(n.clone(), args.iter().map(|a| a.replace(f)).collect(), *p),
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Int(v, _) => write!(f, "{v}"),
            Expr::Ident(n, _) => f.write_str(n),
            Expr::Neg(a) => write!(f, "-{}", a.wrap(UNARY)),
            Expr::Add(a, b) => write!(f, "{} + {}", a.wrap(ADD), b.wrap(MUL)),
            Expr::Sub(a, b) => write!(f, "{} - {}", a.wrap(ADD), b.wrap(MUL)),
            Expr::Mul(a, b, _) => write!(f, "{}*{}", a.wrap(MUL), b.wrap(UNARY)),
            Expr::Div(a, b, _) => write!(f, "{}/{}", a.wrap(MUL), b.wrap(UNARY)),
            Expr::Pow(a, k, _) => write!(f, "{}^{}", a.wrap(ATOM), k),
            Expr::Bracket(a, b, _) => write!(f, "[{a}, {b}]"),
            Expr::Call(n, args, _) => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{n}({})", parts.join(", "))
            }
        }
    }
}

pub fn parse(text: &str) -> Result<Ast, AlgebraError> {
    let toks = tokenize(text)?;
    let lines = text.lines().count().max(1);
    let end = Pos { line: lines, col: text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1) };
    let mut p = Parser { toks, at: 0, end };
    p.keyword("algebra")?;
    let name = match p.peek().cloned() {
        Some(Tok::Ident(_)) => {
            // hyphenated names such as `nh-minus`
            let mut name = p.ident()?.name;
            while p.eat_sym("-") {
                name.push('-');
                match p.peek().cloned() {
                    Some(Tok::Ident(s)) | Some(Tok::Int(s)) => {
                        p.at += 1;
                        name.push_str(&s);
                    }
                    _ => return p.err("expected algebra name"),
                }
            }
            name
        }
        Some(Tok::Str(s)) => {
            p.at += 1;
            s
        }
        _ => return p.err("expected algebra name"),
    };
    p.sym("{")?;
    let mut stmts = Vec::new();
    while !p.eat_sym("}") {
        if p.peek().is_none() {
            return p.err("missing `}`");
        }
        stmts.push(p.stmt()?);
    }
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(Ast { name, stmts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_error_reports_position() {
        let e = parse("algebra a {\n  generators [H, P];\n  bracket [H P] = 0;\n}").unwrap_err();
        assert_eq!(e, AlgebraError::syntax(3, 14, "expected `,`"));
    }

    #[test]
    fn printing_reparses_to_the_same_text() {
        for src in ["-y^2*3 + z", "a - (b - c)", "(a + b)*c/(2*d)", "-(a + b)^2", "sq(κ2*H*J + cross(K, P)) - [x, y]"] {
            let e = parse_expr(src).unwrap();
            let t = e.to_string();
            assert_eq!(parse_expr(&t).unwrap().to_string(), t, "{src}");
        }
        assert_eq!(parse_expr("a - (b - c)").unwrap().to_string(), "a - (b - c)");
        assert_eq!(parse_expr("(a*b)^2").unwrap().to_string(), "(a*b)^2");
    }

    #[test]
    fn precedence() {
        let ast = parse("algebra a { define x = -y^2*3 + z; }").unwrap();
        let Stmt::Define(_, e) = &ast.stmts[0] else { panic!() };
        assert!(matches!(e, Expr::Add(l, _) if matches!(**l, Expr::Mul(..))));
    }
}

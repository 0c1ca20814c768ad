//! Recursive-descent parser for the formula grammar.
//!
//! Precedence, loosest first: `=>` (right associative), `|`, `&`, `~`.
//! Quantifier bodies extend as far to the right as possible.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{is_skolem_name, meta_index, Formula, Meta, Symbol, Term};

/// User input rejects reserved identifiers; proof files may mention metas
/// (`X<n>`) and Skolem symbols (`sko<n>`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseMode {
    User,
    Proof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Unexpected { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    Reserved(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found:?}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::Reserved(name) => write!(f, "identifier {name:?} is reserved"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Forall => "forall".into(),
            Tok::Exists => "exists".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Dot => ".".into(),
            Tok::Not => "~".into(),
            Tok::And => "&".into(),
            Tok::Or => "|".into(),
            Tok::Implies => "=>".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<(Vec<Spanned>, (usize, usize)), ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&(start, c)) = chars.peek() {
        let (l, cl) = (line, col);
        let err = |kind| ParseError { line: l, column: cl, kind };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        let tok = if c.is_ascii_alphabetic() {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            match &text[start..end] {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                s => Tok::Ident(s.to_string()),
            }
        } else {
            chars.next();
            col += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '~' => Tok::Not,
                '&' => Tok::And,
                '|' => Tok::Or,
                '=' => match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        col += 1;
                        Tok::Implies
                    }
                    _ => return Err(err(ParseErrorKind::UnexpectedChar('='))),
                },
                other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
            }
        };
        out.push(Spanned { tok, line: l, column: cl });
    }
    Ok((out, (line, col)))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    mode: ParseMode,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error_here(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.pos) {
            Some(s) => ParseError {
                line: s.line,
                column: s.column,
                kind: ParseErrorKind::Unexpected { found: s.tok.describe(), expected },
            },
            None => ParseError {
                line: self.end.0,
                column: self.end.1,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                if self.mode == ParseMode::User && (is_skolem_name(&name) || meta_index(&name).is_some()) {
                    let s = &self.toks[self.pos];
                    return Err(ParseError {
                        line: s.line,
                        column: s.column,
                        kind: ParseErrorKind::Reserved(name),
                    });
                }
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.error_here("identifier")),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let var = self.ident()?;
                self.expect(Tok::Dot, "'.' after quantified variable")?;
                self.scope.push(var.clone());
                let body = self.implication();
                self.scope.pop();
                let (var, body) = (Symbol::new(&var), Box::new(body?));
                Ok(if universal { Formula::Forall(var, body) } else { Formula::Exists(var, body) })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(_)) => {
                let pred = self.ident()?;
                let args = self.arguments()?;
                Ok(Formula::Atom(Symbol::new(&pred), args))
            }
            _ => Err(self.error_here("formula")),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.peek() != Some(&Tok::LParen) {
            return Ok(args);
        }
        self.pos += 1;
        loop {
            args.push(self.term()?);
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RParen) => {
                    self.pos += 1;
                    return Ok(args);
                }
                _ => return Err(self.error_here("',' or ')'")),
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = self.ident()?;
        let has_args = self.peek() == Some(&Tok::LParen);
        if !has_args {
            if self.scope.contains(&name) {
                return Ok(Term::Var(Symbol::new(&name)));
            }
            if self.mode == ParseMode::Proof {
                if let Some(i) = meta_index(&name) {
                    return Ok(Term::Meta(Meta(i)));
                }
            }
        }
        let args = self.arguments()?;
        Ok(Term::App(Symbol::new(&name), args))
    }

    fn finish<T>(&self, value: T) -> Result<T, ParseError> {
        if self.pos < self.toks.len() {
            Err(self.error_here("end of input"))
        } else {
            Ok(value)
        }
    }
}

fn parser(text: &str, mode: ParseMode) -> Result<Parser, ParseError> {
    let (toks, end) = lex(text)?;
    Ok(Parser { toks, pos: 0, end, mode, scope: Vec::new() })
}

/// Parses user input: reserved identifiers are rejected and bound
/// variables are renamed apart.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, ParseMode::User)
}

pub fn parse_with(text: &str, mode: ParseMode) -> Result<Formula, ParseError> {
    let mut p = parser(text, mode)?;
    let f = p.implication()?;
    let f = p.finish(f)?;
    Ok(rename_apart(&f))
}

/// Parses a closed term; free identifiers are constants (or metas in
/// [`ParseMode::Proof`]).
pub fn parse_term(text: &str, mode: ParseMode) -> Result<Term, ParseError> {
    let mut p = parser(text, mode)?;
    let t = p.term()?;
    p.finish(t)
}

/// Gives every binder a distinct name that also differs from every function
/// or constant symbol of the formula.
fn rename_apart(f: &Formula) -> Formula {
    let symbols: BTreeSet<String> =
        f.function_symbols().iter().map(|s| s.as_str().to_string()).collect();
    let mut taken = symbols.clone();
    collect_binders(f, &mut taken);
    let mut bound = BTreeSet::new();
    rename_walk(f, &symbols, &mut taken, &mut bound)
}

fn collect_binders(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(..) => {}
        Formula::Not(a) => collect_binders(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_binders(a, out);
            collect_binders(b, out);
        }
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            out.insert(x.as_str().to_string());
            collect_binders(b, out);
        }
    }
}

fn rename_walk(
    f: &Formula,
    symbols: &BTreeSet<String>,
    taken: &mut BTreeSet<String>,
    bound: &mut BTreeSet<String>,
) -> Formula {
    let go = |g: &Formula, taken: &mut BTreeSet<String>, bound: &mut BTreeSet<String>| {
        rename_walk(g, symbols, taken, bound)
    };
    match f {
        Formula::Atom(..) => f.clone(),
        Formula::Not(a) => Formula::not(go(a, taken, bound)),
        Formula::And(a, b) => {
            let a = go(a, taken, bound);
            Formula::and(a, go(b, taken, bound))
        }
        Formula::Or(a, b) => {
            let a = go(a, taken, bound);
            Formula::or(a, go(b, taken, bound))
        }
        Formula::Implies(a, b) => {
            let a = go(a, taken, bound);
            Formula::implies(a, go(b, taken, bound))
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let clashes = bound.contains(x.as_str()) || symbols.contains(x.as_str());
            let (name, body) = if clashes {
                let fresh = (1..)
                    .map(|n| format!("{}_{}", x.as_str(), n))
                    .find(|cand| !taken.contains(cand))
                    .expect("unbounded supply");
                taken.insert(fresh.clone());
                let sym = Symbol::new(&fresh);
                (sym.clone(), body.instantiate(x, &Term::Var(sym)))
            } else {
                (x.clone(), (**body).clone())
            };
            bound.insert(name.as_str().to_string());
            let body = Box::new(go(&body, taken, bound));
            match f {
                Formula::Forall(..) => Formula::Forall(name, body),
                _ => Formula::Exists(name, body),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn d(t: Term) -> Formula {
        Formula::atom("D", vec![t])
    }

    #[test]
    fn drinker() {
        let f = parse("~(exists x. (D(x) => forall y. D(y)))").unwrap();
        let x = Term::Var("x".into());
        let y = Term::Var("y".into());
        let expected = Formula::not(Formula::exists(
            "x",
            Formula::implies(d(x), Formula::forall("y", d(y))),
        ));
        assert_eq!(f, expected);
        assert_eq!(f.print(), "(~(exists x. (D(x) => (forall y. D(y)))))");
    }

    #[test]
    fn precedence() {
        let p = Formula::atom("P", vec![]);
        let q = Formula::atom("Q", vec![]);
        assert_eq!(parse("P").unwrap(), p);
        assert_eq!(
            parse("~~P & Q").unwrap(),
            Formula::and(Formula::not(Formula::not(p.clone())), q.clone())
        );
        let r = Formula::atom("R", vec![]);
        assert_eq!(
            parse("P => Q => R").unwrap(),
            Formula::implies(p.clone(), Formula::implies(q.clone(), r.clone()))
        );
        assert_eq!(
            parse("P | Q & R").unwrap(),
            Formula::or(p.clone(), Formula::and(q.clone(), r.clone()))
        );
        assert_eq!(
            parse("P & Q | R => P").unwrap(),
            Formula::implies(Formula::or(Formula::and(p.clone(), q), r), p)
        );
    }

    #[test]
    fn free_identifiers_are_constants() {
        let f = parse("forall x. P(x, a, f(x))").unwrap();
        let x = Term::Var("x".into());
        assert_eq!(
            f,
            Formula::forall(
                "x",
                Formula::atom("P", vec![x.clone(), Term::constant("a"), Term::app("f", vec![x])])
            )
        );
    }

    #[test]
    fn reserved_identifiers() {
        let e = parse("P(sko1)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Reserved("sko1".into()));
        assert_eq!((e.line, e.column), (1, 3));
        assert!(matches!(parse("Q(X3)").unwrap_err().kind, ParseErrorKind::Reserved(_)));
        // fine outside of user mode
        let f = parse_with("P(sko1(X3))", ParseMode::Proof).unwrap();
        assert_eq!(f, Formula::atom("P", vec![Term::app("sko1", vec![Term::Meta(Meta(3))])]));
        // "skolem" and "X" alone are ordinary identifiers
        assert!(parse("P(skolem, X, sko)").is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("P &\n  & Q").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse("(P").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));
        let e = parse("P $ Q").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
        assert!(parse("P Q").is_err());
        assert!(parse("forall . P").is_err());
    }

    #[test]
    fn binders_renamed_apart() {
        let f = parse("(forall x. P(x)) & (forall x. Q(x))").unwrap();
        assert_eq!(f.print(), "((forall x. P(x)) & (forall x_1. Q(x_1)))");
        // a binder that clashes with a constant is renamed as well
        let g = parse("P(x) & exists x. Q(x)").unwrap();
        assert_eq!(g.print(), "(P(x) & (exists x_1. Q(x_1)))");
        let h = parse("forall y. D(y)").unwrap();
        assert_eq!(h.print(), "(forall y. D(y))");
    }

    #[test]
    fn terms() {
        assert_eq!(
            parse_term("f(X1, sko2)", ParseMode::Proof).unwrap(),
            Term::app("f", vec![Term::Meta(Meta(1)), Term::constant("sko2")])
        );
        assert!(parse_term("f(a", ParseMode::Proof).is_err());
    }
}

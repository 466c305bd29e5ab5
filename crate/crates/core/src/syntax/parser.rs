use thiserror::Error;

use super::{Formula, Quantifier, Var, Vocabulary, VocabularyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {source}")]
    Vocabulary {
        line: usize,
        column: usize,
        source: VocabularyError,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::Vocabulary { line, column, .. } => (*line, *column),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Count(Quantifier),
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, chars: &[char]| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, &chars);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, &chars);
            }
            continue;
        }
        let mut push = |tok: Tok| {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            })
        };
        match c {
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            ',' => push(Tok::Comma),
            '.' => push(Tok::Dot),
            '=' => push(Tok::Equals),
            '~' => push(Tok::Tilde),
            '&' => push(Tok::Amp),
            '|' => push(Tok::Bar),
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Arrow);
                advance(&mut i, &mut line, &mut col, &chars);
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::DArrow);
                advance(&mut i, &mut line, &mut col, &chars);
                advance(&mut i, &mut line, &mut col, &chars);
            }
            c if is_ident_start(c) => {
                let mut name = String::new();
                while i < chars.len() && is_ident_char(chars[i]) {
                    name.push(chars[i]);
                    advance(&mut i, &mut line, &mut col, &chars);
                }
                if name == "E" && chars.get(i) == Some(&'[') {
                    // counting quantifier E[>=k], E[<=k], E[=k]
                    advance(&mut i, &mut line, &mut col, &chars);
                    let mut op = String::new();
                    while i < chars.len() && matches!(chars[i], '<' | '>' | '=') {
                        op.push(chars[i]);
                        advance(&mut i, &mut line, &mut col, &chars);
                    }
                    let mut digits = String::new();
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        digits.push(chars[i]);
                        advance(&mut i, &mut line, &mut col, &chars);
                    }
                    if chars.get(i) != Some(&']') {
                        return Err(syntax(tl, tc, "unterminated counting quantifier"));
                    }
                    advance(&mut i, &mut line, &mut col, &chars);
                    let k: u32 = digits
                        .parse()
                        .map_err(|_| syntax(tl, tc, "counting quantifier needs a bound"))?;
                    let q = match op.as_str() {
                        ">=" => Quantifier::AtLeast(k),
                        "<=" => Quantifier::AtMost(k),
                        "=" => Quantifier::Exactly(k),
                        _ => return Err(syntax(tl, tc, format!("unknown counting operator `{op}`"))),
                    };
                    out.push(Token {
                        tok: Tok::Count(q),
                        line: tl,
                        column: tc,
                    });
                } else {
                    out.push(Token {
                        tok: Tok::Ident(name),
                        line: tl,
                        column: tc,
                    });
                }
                continue;
            }
            other => return Err(syntax(tl, tc, format!("unexpected character `{other}`"))),
        }
        advance(&mut i, &mut line, &mut col, &chars);
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

const RESERVED: [&str; 4] = ["A", "E", "true", "false"];

struct Parser<'v> {
    toks: Vec<Token>,
    pos: usize,
    vocab: VocabMode<'v>,
}

enum VocabMode<'v> {
    Fixed(&'v Vocabulary),
    Infer(Vocabulary),
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        let t = self.peek();
        syntax(t.line, t.column, msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.err_here(format!("expected {what}")))
        }
    }

    fn variable(&mut self) -> Result<Var, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(name) if !RESERVED.contains(&name.as_str()) => Ok(Var::new(name)),
            Tok::Ident(name) => Err(syntax(
                t.line,
                t.column,
                format!("`{name}` is reserved and cannot be a variable"),
            )),
            _ => Err(syntax(t.line, t.column, "expected a variable")),
        }
    }

    // iff := imp ("<->" imp)*
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek().tok == Tok::DArrow {
            self.next();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    // imp := or ("->" imp)?   (right associative)
    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek().tok == Tok::Arrow {
            self.next();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek().tok == Tok::Bar {
            self.next();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Amp {
            self.next();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn quantifier(&mut self, kind: Quantifier) -> Result<Formula, ParseError> {
        let start = self.peek().clone();
        let mut vars = Vec::new();
        while let Tok::Ident(_) = self.peek().tok {
            let v = self.variable()?;
            if vars.contains(&v) {
                return Err(self.err_here(format!("variable `{v}` bound twice in one block")));
            }
            vars.push(v);
        }
        if vars.is_empty() {
            return Err(syntax(start.line, start.column, "quantifier binds no variable"));
        }
        if kind.is_counting() && vars.len() != 1 {
            return Err(syntax(
                start.line,
                start.column,
                "a counting quantifier binds exactly one variable",
            ));
        }
        self.expect(Tok::Dot, "`.` after quantified variables")?;
        let body = self.formula()?;
        Ok(Formula::quant(kind, vars, body))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Count(q) => {
                let q = *q;
                self.next();
                self.quantifier(q)
            }
            Tok::Ident(name) if name == "true" => {
                self.next();
                Ok(Formula::True)
            }
            Tok::Ident(name) if name == "false" => {
                self.next();
                Ok(Formula::False)
            }
            Tok::Ident(name) if (name == "A" || name == "E") && *self.peek_at(1) != Tok::LParen => {
                let kind = if name == "A" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                self.next();
                self.quantifier(kind)
            }
            Tok::Ident(name) => {
                let name = name.clone();
                if *self.peek_at(1) == Tok::LParen {
                    self.next();
                    self.next();
                    let mut args = vec![self.variable()?];
                    while self.peek().tok == Tok::Comma {
                        self.next();
                        args.push(self.variable()?);
                    }
                    self.expect(Tok::RParen, "`)` or `,`")?;
                    self.check_symbol(&name, args.len(), &t)?;
                    Ok(Formula::Atom { rel: name, args })
                } else {
                    let lhs = self.variable()?;
                    self.expect(Tok::Equals, "`(`, `=` or an operator")?;
                    let rhs = self.variable()?;
                    Ok(Formula::Eq(lhs, rhs))
                }
            }
            _ => Err(self.err_here("expected a formula")),
        }
    }

    fn check_symbol(&mut self, name: &str, arity: usize, at: &Token) -> Result<(), ParseError> {
        let res = match &mut self.vocab {
            VocabMode::Fixed(v) => match v.arity(name) {
                None => Err(VocabularyError::Unknown(name.to_string())),
                Some(a) if a != arity => Err(VocabularyError::ArityMismatch {
                    name: name.to_string(),
                    declared: a,
                    found: arity,
                }),
                Some(_) => Ok(()),
            },
            VocabMode::Infer(v) => v.insert(name, arity),
        };
        res.map_err(|source| ParseError::Vocabulary {
            line: at.line,
            column: at.column,
            source,
        })
    }
}

fn run<'v>(text: &str, vocab: VocabMode<'v>) -> Result<(Formula, VocabMode<'v>), ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, vocab };
    let f = p.formula()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok((f, p.vocab))
}

/// Parses formula text against a fixed vocabulary.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    run(text, VocabMode::Fixed(vocab)).map(|(f, _)| f)
}

/// Parses formula text and infers the vocabulary from its atoms.
pub fn parse_formula_infer(text: &str) -> Result<(Formula, Vocabulary), ParseError> {
    let (f, mode) = run(text, VocabMode::Infer(Vocabulary::new()))?;
    match mode {
        VocabMode::Infer(v) => Ok((f, v)),
        VocabMode::Fixed(_) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::var;

    fn vocab(pairs: &[(&str, usize)]) -> Vocabulary {
        Vocabulary::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn block_of_three() {
        let f = parse_formula("E x y z . R(x,y,z)", &vocab(&[("R", 3)])).unwrap();
        assert_eq!(
            f,
            Formula::exists(&["x", "y", "z"], Formula::atom("R", &["x", "y", "z"]))
        );
    }

    #[test]
    fn constants() {
        assert_eq!(parse_formula("true", &Vocabulary::new()).unwrap(), Formula::True);
        assert_eq!(parse_formula("false", &Vocabulary::new()).unwrap(), Formula::False);
    }

    #[test]
    fn counting_nested_under_forall() {
        let f = parse_formula("A x . E[=1] y . R(x,y)", &vocab(&[("R", 2)])).unwrap();
        assert_eq!(
            f,
            Formula::forall(
                &["x"],
                Formula::counting(Quantifier::Exactly(1), "y", Formula::atom("R", &["x", "y"]))
            )
        );
    }

    #[test]
    fn precedence_and_sugar() {
        let v = vocab(&[("P", 1), ("Q", 1)]);
        let f = parse_formula("P(x) | Q(x) & ~P(x)", &v).unwrap();
        let p = Formula::atom("P", &["x"]);
        let q = Formula::atom("Q", &["x"]);
        assert_eq!(
            f,
            Formula::or(p.clone(), Formula::and(q.clone(), Formula::not(p.clone())))
        );
        let g = parse_formula("P(x) -> Q(x) -> P(x)", &v).unwrap();
        assert_eq!(g, Formula::implies(p.clone(), Formula::implies(q.clone(), p.clone())));
        // the quantifier body extends as far right as possible
        let h = parse_formula("P(x) & E y. P(y) | Q(y)", &v).unwrap();
        assert_eq!(
            h,
            Formula::and(
                p,
                Formula::exists(
                    &["y"],
                    Formula::or(Formula::atom("P", &["y"]), Formula::atom("Q", &["y"]))
                )
            )
        );
    }

    #[test]
    fn relation_named_e_and_quantifier_e() {
        let f = parse_formula("E x. E(x)", &vocab(&[("E", 1)])).unwrap();
        assert_eq!(f, Formula::exists(&["x"], Formula::atom("E", &["x"])));
    }

    #[test]
    fn errors_carry_positions() {
        let v = vocab(&[("R", 2)]);
        let e = parse_formula("A x.\n  R(x)", &v).unwrap_err();
        assert_eq!(e.position(), (2, 3));
        assert!(matches!(
            e,
            ParseError::Vocabulary {
                source: VocabularyError::ArityMismatch { .. },
                ..
            }
        ));
        let e = parse_formula("S(x,y)", &v).unwrap_err();
        assert!(matches!(
            e,
            ParseError::Vocabulary {
                source: VocabularyError::Unknown(_),
                ..
            }
        ));
        let e = parse_formula("A x. (R(x,x)", &v).unwrap_err();
        assert_eq!(e.position(), (1, 13));
        assert!(parse_formula("E[=1] x y. R(x,y)", &v).is_err());
        assert!(parse_formula("E x x. R(x,x)", &v).is_err());
        assert!(parse_formula("A A. true", &v).is_err());
    }

    #[test]
    fn inference_collects_symbols() {
        let (_, v) = parse_formula_infer("A x y. (R(x,y) -> P(x)) # comment\n").unwrap();
        assert_eq!(v.arity("R"), Some(2));
        assert_eq!(v.arity("P"), Some(1));
        assert!(parse_formula_infer("R(x) & R(x,y)").is_err());
    }

    #[test]
    fn equality_atom() {
        let f = parse_formula("~x = y", &Vocabulary::new()).unwrap();
        assert_eq!(f, Formula::not(Formula::Eq(var("x"), var("y"))));
    }
}

use std::collections::BTreeSet;

use super::{Structure, StructureError};
use crate::syntax::Vocabulary;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(usize),
    Punct(char),
    Sep,
}

fn err(line: usize, message: impl Into<String>) -> StructureError {
    StructureError::Syntax {
        line,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, StructureError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = body.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == ',' {
                i += 1;
            } else if c == ';' {
                out.push((Tok::Sep, line));
                i += 1;
            } else if "/={}()".contains(c) {
                out.push((Tok::Punct(c), line));
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| err(line, format!("number {s} too large")))?;
                out.push((Tok::Num(n), line));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || "_'".contains(chars[i])) {
                    i += 1;
                }
                out.push((Tok::Word(chars[start..i].iter().collect()), line));
            } else {
                return Err(err(line, format!("unexpected character `{c}`")));
            }
        }
        out.push((Tok::Sep, line));
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(1, |(_, l)| *l)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn skip_seps(&mut self) {
        while self.peek() == Some(&Tok::Sep) {
            self.pos += 1;
        }
    }

    // Separators may appear freely inside braces.
    fn next_in_braces(&mut self) -> Option<Tok> {
        self.skip_seps();
        self.next()
    }

    fn punct(&mut self, c: char) -> Result<(), StructureError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Punct(p)) if p == c => Ok(()),
            _ => Err(err(line, format!("expected `{c}`"))),
        }
    }

    fn num(&mut self) -> Result<usize, StructureError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Num(n)) => Ok(n),
            _ => Err(err(line, "expected a number")),
        }
    }
}

/// Parses the structure text format:
///
/// ```text
/// domain = 3
/// rel R/2 = { (0 1) (1 2) }
/// P/1 = { (0) }      # the `rel` keyword is optional
/// ```
///
/// Statements are separated by newlines or `;`.
pub fn parse_structure(text: &str) -> Result<Structure, StructureError> {
    let mut c = Cursor {
        toks: tokenize(text)?,
        pos: 0,
    };
    c.skip_seps();
    let line = c.line();
    match c.next() {
        Some(Tok::Word(w)) if w == "domain" => {}
        _ => return Err(err(line, "expected `domain = N`")),
    }
    c.punct('=')?;
    let size = c.num()?;
    if size == 0 {
        return Err(StructureError::EmptyDomain);
    }
    let mut decls: Vec<(String, usize, Vec<(Vec<usize>, usize)>)> = Vec::new();
    let mut seen = BTreeSet::new();
    loop {
        c.skip_seps();
        let line = c.line();
        let mut name = match c.next() {
            None => break,
            Some(Tok::Word(w)) => w,
            Some(_) => return Err(err(line, "expected a relation declaration")),
        };
        if name == "rel" {
            if let Some(Tok::Word(_)) = c.peek() {
                let Some(Tok::Word(w)) = c.next() else { unreachable!() };
                name = w;
            }
        }
        if !seen.insert(name.clone()) {
            return Err(StructureError::Duplicate { line, name });
        }
        c.punct('/')?;
        let arity = c.num()?;
        if arity == 0 {
            return Err(err(line, format!("relation {name} needs positive arity")));
        }
        c.punct('=')?;
        c.punct('{')?;
        let mut tuples = Vec::new();
        loop {
            let tl = c.line();
            match c.next_in_braces() {
                Some(Tok::Punct('}')) => break,
                Some(Tok::Punct('(')) => {
                    let mut t = Vec::new();
                    loop {
                        let el = c.line();
                        match c.next_in_braces() {
                            Some(Tok::Punct(')')) => break,
                            Some(Tok::Num(n)) => t.push(n),
                            _ => return Err(err(el, "expected an element or `)`")),
                        }
                    }
                    tuples.push((t, tl));
                }
                _ => return Err(err(tl, "expected `(` or `}`")),
            }
        }
        decls.push((name, arity, tuples));
    }
    let mut vocab = Vocabulary::new();
    for (name, arity, _) in &decls {
        vocab.insert(name, *arity).map_err(|e| err(0, e.to_string()))?;
    }
    let mut s = Structure::new(vocab, size)?;
    for (name, arity, tuples) in decls {
        for (t, line) in tuples {
            if t.len() != arity {
                return Err(StructureError::Arity {
                    line,
                    name,
                    arity,
                    found: t.len(),
                });
            }
            if let Some(&e) = t.iter().find(|&&e| e >= size) {
                return Err(StructureError::Bounds { line, element: e, size });
            }
            s.set(&name, &t, true);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_form() {
        let s = parse_structure("domain=1; R/3={(0 0 0)}").unwrap();
        assert_eq!(s.size(), 1);
        assert!(s.holds("R", &[0, 0, 0]));
        let s = parse_structure("domain=2; P/1={(0)}").unwrap();
        assert_eq!(s.unary_set("P"), [0].into());
    }

    #[test]
    fn round_trip_through_display() {
        let text = "domain = 3\nrel R/2 = {\n  (0 1)\n  (1 2)\n}\nrel P/1 = { (2) } # tail\n";
        let s = parse_structure(text).unwrap();
        let again = parse_structure(&s.to_string()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_structure("domain=2; R/2={(0 2)}"),
            Err(StructureError::Bounds { element: 2, .. })
        ));
        assert!(matches!(
            parse_structure("domain=2; R/2={(0)}"),
            Err(StructureError::Arity { found: 1, .. })
        ));
        assert!(matches!(
            parse_structure("domain=2\nR/1={}\nR/1={}"),
            Err(StructureError::Duplicate { line: 3, .. })
        ));
        assert_eq!(parse_structure("domain = 0"), Err(StructureError::EmptyDomain));
        assert!(parse_structure("R/1={}").is_err());
    }
}

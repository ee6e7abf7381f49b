use crate::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    X,
    O,
    Star,
    Open,
    Close,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    for (pos, c) in input.char_indices() {
        let tok = match c {
            'x' => Tok::X,
            'o' | '∘' => Tok::O,
            '*' => Tok::Star,
            '(' => Tok::Open,
            ')' => Tok::Close,
            c if c.is_whitespace() => continue,
            c => return Err(ParseError { pos, msg: format!("unexpected character {c:?}") }),
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.i).map(|t| t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn comp(&mut self) -> Result<Term, ParseError> {
        let mut t = self.app()?;
        while self.peek() == Some(Tok::O) {
            self.i += 1;
            t = Term::comp(t, self.app()?);
        }
        Ok(t)
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while matches!(self.peek(), Some(Tok::X | Tok::Open)) {
            t = Term::app(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::X) => {
                self.i += 1;
                Ok(Term::gen())
            }
            Some(Tok::Open) => {
                self.i += 1;
                // infix never opens a group with an operator, so this is s-expression input
                let t = if matches!(self.peek(), Some(Tok::Star | Tok::O)) {
                    self.sexpr_body()?
                } else {
                    self.comp()?
                };
                self.expect(Tok::Close)?;
                Ok(t)
            }
            Some(_) => self.err("expected x or ("),
            None => self.err("unexpected end of input"),
        }
    }

    fn sexpr_body(&mut self) -> Result<Term, ParseError> {
        let op = self.peek();
        self.i += 1;
        let a = self.sexpr()?;
        let b = self.sexpr()?;
        Ok(if op == Some(Tok::Star) { Term::app(a, b) } else { Term::comp(a, b) })
    }

    fn sexpr(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::X) => {
                self.i += 1;
                Ok(Term::gen())
            }
            Some(Tok::Open) => {
                self.i += 1;
                if !matches!(self.peek(), Some(Tok::Star | Tok::O)) {
                    return self.err("expected * or o in s-expression");
                }
                let t = self.sexpr_body()?;
                self.expect(Tok::Close)?;
                Ok(t)
            }
            _ => self.err("expected s-expression"),
        }
    }
}

/// Parses infix (`x (x x) o x`) or s-expression (`(o (* x x) x)`) text.
pub fn parse(input: &str) -> Result<Term, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, i: 0, end: input.len() };
    let t = p.comp()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

/// One term per non-empty line; lines starting with `#` are comments.
pub fn parse_corpus(text: &str) -> Result<Vec<Term>, (usize, ParseError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim();
            !l.is_empty() && !l.starts_with('#')
        })
        .map(|(n, l)| parse(l).map_err(|e| (n + 1, e)))
        .collect()
}

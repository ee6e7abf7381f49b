use crate::{Kind, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Minimal parentheses, atoms separated by spaces: `x (x x) o x`.
    Infix,
    /// Fully parenthesized: `(o (* x (* x x)) x)`.
    Sexpr,
    /// Infix without spaces, wrapped in parentheses unless atomic: `(x(xx)ox)`.
    Compact,
}

impl Term {
    pub fn render(&self, format: Format) -> String {
        let mut s = String::new();
        match format {
            Format::Infix => infix(self, Level::Comp, " ", &mut s),
            Format::Sexpr => sexpr(self, &mut s),
            Format::Compact => {
                if self.is_gen() {
                    s.push('x');
                } else {
                    s.push('(');
                    infix(self, Level::Comp, "", &mut s);
                    s.push(')');
                }
            }
        }
        s
    }

    pub fn sexpr(&self) -> String {
        self.render(Format::Sexpr)
    }

    pub fn compact(&self) -> String {
        self.render(Format::Compact)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Comp,
    App,
    Atom,
}

fn infix(t: &Term, level: Level, sep: &str, out: &mut String) {
    let own = match t.kind() {
        Kind::Gen => Level::Atom,
        Kind::App(..) => Level::App,
        Kind::Comp(..) => Level::Comp,
    };
    let paren = own < level;
    if paren {
        out.push('(');
    }
    match t.kind() {
        Kind::Gen => out.push('x'),
        Kind::App(a, b) => {
            infix(a, Level::App, sep, out);
            out.push_str(sep);
            infix(b, Level::Atom, sep, out);
        }
        Kind::Comp(a, b) => {
            infix(a, Level::Comp, sep, out);
            out.push_str(" o ");
            infix(b, Level::App, sep, out);
        }
    }
    if paren {
        out.push(')');
    }
}

fn sexpr(t: &Term, out: &mut String) {
    match t.kind() {
        Kind::Gen => out.push('x'),
        Kind::App(a, b) | Kind::Comp(a, b) => {
            out.push_str(if matches!(t.kind(), Kind::App(..)) { "(* " } else { "(o " });
            sexpr(a, out);
            out.push(' ');
            sexpr(b, out);
            out.push(')');
        }
    }
}

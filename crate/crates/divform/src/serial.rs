use serde_json::{json, Value};

use crate::dfterm::DfTerm;
use crate::divide::DivForm;

fn items(c: &[DfTerm]) -> String {
    let parts: Vec<String> = c
        .iter()
        .map(|a| match a {
            DfTerm::Leaf(e) => e.to_string(),
            DfTerm::Node(c, s) => format!("({} {s})", items(c)),
        })
        .collect();
    format!("[{}]", parts.join(" "))
}

fn json_of(u: &DfTerm) -> Value {
    match u {
        DfTerm::Leaf(e) => Value::String(e.to_string()),
        DfTerm::Node(c, s) => json!({
            "components": c.iter().map(json_of).collect::<Vec<_>>(),
            "star": s.name(),
        }),
    }
}

impl DivForm {
    /// `(df HEAD [a_0 ... a_n] app|comp)`, or `(df HEAD w)` for a leaf.
    pub fn sexpr(&self) -> String {
        let head = self.divisor.compact();
        match &self.root {
            DfTerm::Leaf(e) => format!("(df {head} {e})"),
            DfTerm::Node(c, s) => format!("(df {head} {} {s})", items(c)),
        }
    }

    pub fn to_json(&self) -> Value {
        let p = Value::String(self.divisor.compact());
        match &self.root {
            DfTerm::Leaf(e) => json!({ "p": p, "leaf": e.to_string() }),
            DfTerm::Node(c, s) => json!({
                "p": p,
                "components": c.iter().map(json_of).collect::<Vec<_>>(),
                "star": s.name(),
            }),
        }
    }
}

use std::cmp::Ordering;

use ldf_divform::{divide, Engine};
use ldf_normalform::Normalizer;
use ldf_oracle::{oracle_equal, verdict_between, Budget, Explored, Value};
use ldf_term::{enumerate_upto, Term};
use serde_json::json;

use crate::{Failure, Report, Suite};

#[derive(Default)]
struct Tally {
    checked: usize,
    confirmed: usize,
    unknown: usize,
    disagree: Vec<String>,
}

fn agrees(o: Ordering, v: Value) -> bool {
    matches!(
        (o, v),
        (Ordering::Less, Value::Less) | (Ordering::Equal, Value::Equal) | (Ordering::Greater, Value::Greater)
    )
}

pub fn run(suite: Suite, leaves: usize, budget: &Budget) -> Result<Report, Failure> {
    let eng = Engine::default();
    let mut t = Tally::default();
    let name = match suite {
        Suite::Thm1 => {
            thm1(&eng, leaves, &mut t)?;
            "thm1"
        }
        Suite::Canonical => {
            canonical(&eng, leaves, budget, &mut t)?;
            "canonical"
        }
        Suite::Division => {
            division(&eng, leaves, budget, &mut t)?;
            "division"
        }
        Suite::Nf => {
            nf(&eng, leaves, budget, &mut t)?;
            "nf"
        }
    };
    let st = eng.stats();
    let mut lines = vec![format!(
        "suite {name}: {} checks, {} oracle-confirmed, {} undecided by the oracle, {} disagreements",
        t.checked,
        t.confirmed,
        t.unknown,
        t.disagree.len()
    )];
    lines.extend(t.disagree.iter().take(20).map(|d| format!("  disagreement: {d}")));
    lines.push(format!(
        "tier usage: tier 1 {}, tier 2 {}, tier 3 0; divisions {}, comparisons {}",
        st.tier1, st.tier2, st.divisions, st.comparisons
    ));
    let result = json!({
        "suite": name,
        "checks": t.checked,
        "confirmed": t.confirmed,
        "unknown": t.unknown,
        "disagreements": t.disagree,
    });
    let cost = json!({ "tier1": st.tier1, "tier2": st.tier2, "divisions": st.divisions });
    let failure = if !t.disagree.is_empty() {
        Some(Failure::Invariant(format!("{} disagreements with the oracle", t.disagree.len())))
    } else if t.unknown > 0 && name != "canonical" {
        Some(Failure::Budget(format!("{} checks undecided by the oracle", t.unknown)))
    } else {
        None
    };
    Ok(Report { text: lines.join("\n"), result, tier: Some("tier2"), cost, failure })
}

/// Order axioms, sandwich and left cancellation over all terms up to `leaves`.
fn thm1(eng: &Engine, leaves: usize, t: &mut Tally) -> Result<(), Failure> {
    let terms = enumerate_upto(leaves, false);
    let elems = terms.iter().map(|x| eng.df_of_term(x)).collect::<Result<Vec<_>, _>>()?;
    for (i, p) in elems.iter().enumerate() {
        for (j, q) in elems.iter().enumerate() {
            t.checked += 1;
            if eng.lex(p, q)? != eng.lex(q, p)?.reverse() {
                t.disagree.push(format!("antisymmetry {} {}", terms[i], terms[j]));
            }
            for r in &elems {
                let o = eng.lex(q, r)?;
                t.checked += 1;
                if eng.lex(&eng.mul(p, q)?, &eng.mul(p, r)?)? != o {
                    t.disagree.push(format!("cancellation {} {} {r}", terms[i], terms[j]));
                }
                if o == Ordering::Less {
                    let pcq = eng.comp(p, q)?;
                    if eng.lex(&eng.mul(p, q)?, &pcq)? != Ordering::Less || eng.lex(&pcq, &eng.mul(p, r)?)? != Ordering::Less {
                        t.disagree.push(format!("sandwich {} {} {r}", terms[i], terms[j]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Every pair of LD terms: canonical comparison against definite oracle verdicts.
fn canonical(eng: &Engine, leaves: usize, budget: &Budget, t: &mut Tally) -> Result<(), Failure> {
    let terms = enumerate_upto(leaves, true);
    let explored: Vec<Explored> = terms.iter().map(|x| Explored::new(x, budget)).collect();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            t.checked += 1;
            let v = verdict_between(&explored[i], &explored[j]);
            if v.value == Value::Unknown {
                t.unknown += 1;
            } else if agrees(eng.compare_terms(&terms[i], &terms[j])?, v.value) {
                t.confirmed += 1;
            } else {
                t.disagree.push(format!("{} vs {}", terms[i], terms[j]));
            }
        }
    }
    Ok(())
}

fn confirm(a: &Term, b: &Term, budget: &Budget, t: &mut Tally) {
    t.checked += 1;
    if oracle_equal(a, b, budget).value == Value::Equal {
        t.confirmed += 1;
    } else {
        t.unknown += 1;
    }
}

fn division(eng: &Engine, leaves: usize, budget: &Budget, t: &mut Tally) -> Result<(), Failure> {
    let terms = enumerate_upto(leaves, false);
    for p in &terms {
        for w in &terms {
            let d = divide(eng, p, w)?;
            if !eng.is_valid_df(&d.p, &d.root)? {
                t.disagree.push(format!("|{w}|^{p} = {} is not prenormal", d.sexpr()));
            }
            confirm(&d.to_term(), w, budget, t);
        }
    }
    Ok(())
}

fn nf(eng: &Engine, leaves: usize, budget: &Budget, t: &mut Tally) -> Result<(), Failure> {
    let ws = enumerate_upto(leaves, false);
    for p in enumerate_upto(leaves.min(3), false) {
        let nz = Normalizer::new(eng, &eng.df_of_term(&p)?);
        for w in &ws {
            let u = nz.nf(&eng.df_of_term(w)?)?;
            if !nz.is_valid(&u)? {
                t.disagree.push(format!("|{w}|_{p} = {u} is not a normal form"));
            }
            confirm(&u.to_term(&p), w, budget, t);
        }
    }
    Ok(())
}

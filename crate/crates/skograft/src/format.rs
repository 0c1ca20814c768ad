//! JSON encodings of tableau proofs (`.tab`) and GS3 proofs (`.gs3`).
//!
//! Both are trees of records with sorted keys, formulas in canonical print
//! form and no insignificant whitespace, so equal proofs give equal bytes.

use serde_json::{Map, Value};
use skograft_core::formula::{parse_term, parse_with, Formula, Meta, ParseError, ParseMode, Term};
use skograft_core::gs3::{GsProof, GsRule, Inference, NodeId};
use skograft_core::multiset;
use skograft_core::tableau::{AuditError, ClosedTableau, RuleInstance, RuleKind, Tableau, TableauError};
use skograft_core::unify::Substitution;
use skograft_core::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("at {at}: expected {what}")]
    Shape { at: String, what: &'static str },
    #[error("at {at}: cannot parse {text:?}: {err}")]
    Syntax { at: String, text: String, err: ParseError },
    #[error("at {at}: unknown rule {name:?}")]
    UnknownRule { at: String, name: String },
    #[error("rule does not replay: {0}")]
    Replay(TableauError),
    #[error("at {0}: formulas differ from the replayed rule")]
    Mismatch(String),
    #[error("recorded store differs from the replayed closures")]
    Store,
    #[error("tableau is not closed by its unifier: {0}")]
    Audit(AuditError),
}

type Result<T> = std::result::Result<T, FormatError>;

fn strings(fs: &[Formula]) -> Value {
    Value::Array(fs.iter().map(|f| Value::String(f.print())).collect())
}

fn sorted_strings(fs: &[Formula]) -> Value {
    let mut v: Vec<String> = fs.iter().map(Formula::print).collect();
    v.sort();
    Value::Array(v.into_iter().map(Value::String).collect())
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

fn rule_json(r: &RuleInstance) -> Value {
    let mut e = vec![
        ("class", Value::String(r.kind.name().to_string())),
        ("principal", Value::String(r.principal.print())),
        ("introduced", Value::Array(r.introduced.iter().map(|fs| strings(fs)).collect())),
    ];
    if let Some(s) = &r.skolem {
        e.push(("skolem", Value::String(s.to_string())));
    }
    if let Some(m) = r.meta {
        e.push(("meta", Value::String(m.to_string())));
    }
    if let Some((a, b)) = &r.closure_pair {
        e.push(("closure_pair", strings(&[a.clone(), b.clone()])));
    }
    object(e)
}

fn tableau_node(t: &Tableau, p: &Path) -> Value {
    let n = t.node(p).expect("node of the tree");
    let children = (0..n.child_count()).map(|i| tableau_node(t, &p.child(i as u8))).collect();
    object(vec![
        ("formulas", strings(n.formulas())),
        ("rule", n.rule().map_or(Value::Null, rule_json)),
        ("children", Value::Array(children)),
    ])
}

/// Encodes a closed tableau: the root record carries `store` and
/// `unifier` besides its own fields.
pub fn write_tableau(closed: &ClosedTableau) -> String {
    let mut root = tableau_node(closed.tableau(), &Path::root());
    let store = closed.store().iter().map(|c| Value::String(c.to_string())).collect();
    let unifier = closed.unifier().bindings().map(|(m, t)| (m.to_string(), Value::String(t.to_string()))).collect();
    let m = root.as_object_mut().expect("record");
    m.insert("store".into(), Value::Array(store));
    m.insert("unifier".into(), Value::Object(unifier));
    let mut out = root.to_string();
    out.push('\n');
    out
}

fn gs3_node(proof: &GsProof, id: NodeId) -> Value {
    let n = proof.node(id);
    let rule = match n.inference() {
        None => Value::Null,
        Some(inf) => {
            let mut e = vec![("name", Value::String(inf.rule.name().to_string()))];
            if let Some(p) = &inf.principal {
                e.push(("principal", Value::String(p.print())));
            }
            if let Some(w) = inf.rule.witness() {
                e.push(("witness", Value::String(w.to_string())));
            }
            if let GsRule::Weaken { dropped } = &inf.rule {
                e.push(("dropped", sorted_strings(dropped)));
            }
            object(e)
        }
    };
    let children = n.children().iter().map(|&c| gs3_node(proof, c)).collect();
    object(vec![("sequent", sorted_strings(n.sequent())), ("rule", rule), ("children", Value::Array(children))])
}

/// Encodes a GS3 proof; sequents are written as sorted multisets.
pub fn write_gs3(proof: &GsProof) -> String {
    let mut out = gs3_node(proof, proof.root()).to_string();
    out.push('\n');
    out
}

fn parse_json(text: &str) -> Result<Value> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let v = serde::de::Deserialize::deserialize(&mut de)?;
    de.end()?;
    Ok(v)
}

struct Reader<'a> {
    at: &'a Path,
}

impl Reader<'_> {
    fn shape<T>(&self, what: &'static str) -> Result<T> {
        Err(FormatError::Shape { at: self.at.to_string(), what })
    }

    fn field<'v>(&self, v: &'v Value, key: &str, what: &'static str) -> Result<&'v Value> {
        match v.get(key) {
            Some(x) => Ok(x),
            None => self.shape(what),
        }
    }

    fn str<'v>(&self, v: &'v Value, what: &'static str) -> Result<&'v str> {
        match v.as_str() {
            Some(s) => Ok(s),
            None => self.shape(what),
        }
    }

    fn array<'v>(&self, v: &'v Value, what: &'static str) -> Result<&'v [Value]> {
        match v.as_array() {
            Some(a) => Ok(a),
            None => self.shape(what),
        }
    }

    fn formula(&self, v: &Value) -> Result<Formula> {
        let text = self.str(v, "a formula string")?;
        parse_with(text, ParseMode::Proof).map_err(|err| FormatError::Syntax {
            at: self.at.to_string(),
            text: text.to_string(),
            err,
        })
    }

    fn formulas(&self, v: &Value) -> Result<Vec<Formula>> {
        self.array(v, "a list of formulas")?.iter().map(|f| self.formula(f)).collect()
    }

    fn term(&self, v: &Value) -> Result<Term> {
        let text = self.str(v, "a term string")?;
        parse_term(text, ParseMode::Proof).map_err(|err| FormatError::Syntax {
            at: self.at.to_string(),
            text: text.to_string(),
            err,
        })
    }

    fn meta(&self, v: &Value) -> Result<Meta> {
        match self.term(v)? {
            Term::Meta(m) => Ok(m),
            _ => self.shape("a meta variable"),
        }
    }
}

fn read_rule(r: &Reader, v: &Value) -> Result<RuleInstance> {
    let class = r.str(r.field(v, "class", "a rule class")?, "a rule class")?;
    let kind = RuleKind::from_name(class)
        .ok_or_else(|| FormatError::UnknownRule { at: r.at.to_string(), name: class.to_string() })?;
    let introduced = r
        .array(r.field(v, "introduced", "introduced formulas")?, "a list of lists")?
        .iter()
        .map(|fs| r.formulas(fs))
        .collect::<Result<Vec<_>>>()?;
    let closure_pair = match v.get("closure_pair") {
        None => None,
        Some(p) => match r.formulas(p)?.as_slice() {
            [a, b] => Some((a.clone(), b.clone())),
            _ => return r.shape("a pair of formulas"),
        },
    };
    Ok(RuleInstance {
        kind,
        principal: r.formula(r.field(v, "principal", "a principal formula")?)?,
        introduced,
        skolem: v.get("skolem").map(|s| r.term(s)).transpose()?,
        meta: v.get("meta").map(|m| r.meta(m)).transpose()?,
        closure_pair,
    })
}

fn replay(t: &mut Tableau, v: &Value, at: &Path) -> Result<()> {
    let r = Reader { at };
    let recorded = r.formulas(r.field(v, "formulas", "a formulas field")?)?;
    let here = t.node(at).expect("replayed node").formulas();
    if !multiset::equal(here, &recorded) {
        return Err(FormatError::Mismatch(at.to_string()));
    }
    let children = r.array(r.field(v, "children", "a children field")?, "a list of children")?;
    match r.field(v, "rule", "a rule field")? {
        Value::Null if children.is_empty() => Ok(()),
        Value::Null => r.shape("a rule for a node with children"),
        rule => {
            t.apply(at, read_rule(&r, rule)?).map_err(FormatError::Replay)?;
            let n = t.node(at).expect("replayed node").child_count();
            if n != children.len() {
                return r.shape("one record per child");
            }
            for (i, c) in children.iter().enumerate() {
                replay(t, c, &at.child(i as u8))?;
            }
            Ok(())
        }
    }
}

/// Decodes and re-validates a tableau file: every rule is replayed on a
/// fresh tree, the recorded formulas and store must match, and the
/// recorded unifier must close the result.
pub fn read_tableau(text: &str) -> Result<ClosedTableau> {
    let v = parse_json(text)?;
    let root = Path::root();
    let r = Reader { at: &root };
    let mut t = Tableau::new(r.formulas(r.field(&v, "formulas", "a formulas field")?)?);
    replay(&mut t, &v, &root)?;
    let store: Vec<String> = t.store().iter().map(|c| c.to_string()).collect();
    let recorded = r.array(r.field(&v, "store", "a store field")?, "a list of constraints")?;
    if recorded.len() != store.len() || recorded.iter().zip(&store).any(|(a, b)| a.as_str() != Some(b)) {
        return Err(FormatError::Store);
    }
    let Some(unifier) = r.field(&v, "unifier", "a unifier field")?.as_object() else {
        return r.shape("a unifier object");
    };
    let mut bindings = Vec::new();
    for (k, val) in unifier {
        bindings.push((r.meta(&Value::String(k.clone()))?, r.term(val)?));
    }
    ClosedTableau::with_unifier(t, Substitution::from_bindings(bindings)).map_err(FormatError::Audit)
}

fn read_inference(r: &Reader, v: &Value) -> Result<Inference> {
    let name = r.str(r.field(v, "name", "a rule name")?, "a rule name")?;
    let witness = v.get("witness").map(|w| r.term(w)).transpose()?;
    let dropped = v.get("dropped").map(|d| r.formulas(d)).transpose()?.unwrap_or_default();
    let rule = GsRule::from_name(name, witness, dropped)
        .ok_or_else(|| FormatError::UnknownRule { at: r.at.to_string(), name: name.to_string() })?;
    let principal = v.get("principal").map(|p| r.formula(p)).transpose()?;
    Ok(Inference { rule, principal })
}

fn read_gs3_node(proof: &mut GsProof, id: NodeId, v: &Value) -> Result<()> {
    let at = proof.node(id).path().clone();
    let r = Reader { at: &at };
    let children = r.array(r.field(v, "children", "a children field")?, "a list of children")?;
    let inf = match r.field(v, "rule", "a rule field")? {
        Value::Null if children.is_empty() => return Ok(()),
        Value::Null => return r.shape("a rule for a node with children"),
        rule => read_inference(&r, rule)?,
    };
    let premises = children
        .iter()
        .map(|c| r.formulas(r.field(c, "sequent", "a sequent field")?))
        .collect::<Result<Vec<_>>>()?;
    let kids = proof.extend_unchecked(id, inf, premises);
    for (k, c) in kids.into_iter().zip(children) {
        read_gs3_node(proof, k, c)?;
    }
    Ok(())
}

/// Decodes a GS3 proof without judging it; run the checker on the result.
pub fn read_gs3(text: &str) -> Result<GsProof> {
    let v = parse_json(text)?;
    let root = Path::root();
    let r = Reader { at: &root };
    let mut proof = GsProof::new(r.formulas(r.field(&v, "sequent", "a sequent field")?)?);
    let id = proof.root();
    read_gs3_node(&mut proof, id, &v)?;
    Ok(proof)
}

//! Horn rules and forward-chaining inference.
//!
//! Rules are conjunctive: a body of class, role, and relation atoms and a
//! head of class/role atoms. [`infer`] computes the least fixpoint of rule
//! application over an instance store — facts are only ever added, relation
//! assertions are never invented, and the result does not depend on rule
//! order.

mod engine;
mod parse;

pub use engine::{infer, infer_with_trace, resolve_predicate, validate_rules, Fact, InferenceResult};
pub use parse::parse_rules;

use std::fmt;

use thiserror::Error;

use crate::ontology::{InstanceId, OntologyError};

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("rule {rule}: head variable {variable} is not bound in the body")]
    UnsafeRule { rule: String, variable: String },
    #[error("rule {rule}: unknown predicate {predicate}")]
    UnknownPredicate { rule: String, predicate: String },
    #[error("predicate {predicate} is declared in several namespaces: {kinds}")]
    AmbiguousPredicate { predicate: String, kinds: String },
    #[error("rule {rule}: {predicate} is a {kind} predicate and takes {expected} argument(s), found {found}")]
    ArityMismatch {
        rule: String,
        predicate: String,
        kind: PredicateKind,
        expected: usize,
        found: usize,
    },
    #[error("rule {rule}: head atom {predicate} must name a class or a role")]
    InvalidHead { rule: String, predicate: String },
    #[error("{role} was not derived for {id}")]
    NotDerived { id: InstanceId, role: String },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Namespace a predicate resolves into. Resolution order is role, then
/// class, then relation lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredicateKind {
    Class,
    Role,
    Relation,
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PredicateKind::Class => "class",
            PredicateKind::Role => "role",
            PredicateKind::Relation => "relation",
        };
        f.write_str(name)
    }
}

/// A variable (`?x`) or a double-quoted surface constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Variable(String),
    Constant(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(name) => write!(f, "?{name}"),
            Term::Constant(text) => write!(f, "{text:?}"),
        }
    }
}

/// One atom: a predicate applied to one (class/role) or two (relation)
/// terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn unary(predicate: impl Into<String>, term: Term) -> Self {
        Atom {
            predicate: predicate.into(),
            args: vec![term],
        }
    }

    pub fn binary(predicate: impl Into<String>, subject: Term, object: Term) -> Self {
        Atom {
            predicate: predicate.into(),
            args: vec![subject, object],
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Variable(name) => Some(name.as_str()),
            Term::Constant(_) => None,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(Term::to_string).collect();
        write!(f, "{}({})", self.predicate, args.join(", "))
    }
}

/// A Horn rule: if every body atom holds, every head atom holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub body: Vec<Atom>,
    pub head: Vec<Atom>,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |atoms: &[Atom]| {
            atoms
                .iter()
                .map(Atom::to_string)
                .collect::<Vec<_>>()
                .join(" ^ ")
        };
        write!(f, "rule {}: {} -> {}", self.id, side(&self.body), side(&self.head))
    }
}

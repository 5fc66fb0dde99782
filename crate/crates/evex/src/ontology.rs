//! Event schema and per-document instance store.
//!
//! The schema is the learning-phase product: entity classes, event-role
//! subclasses (each under exactly one class), and the relation vocabulary.
//! The instance store is what one document's recognition pass populates:
//! typed individuals, relation assertions between them, and the roles that
//! inference assigns.
//!
//! Instance ids are `input1, input2, ...` in insertion order and each
//! document gets a fresh store, so ids never collide across files.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("role {role} references unknown parent class {parent}")]
    UnknownParentClass { role: String, parent: String },
    #[error("duplicate name {0}")]
    DuplicateName(String),
    #[error("invalid relation lemma {0:?}: expected a non-empty lowercase token")]
    InvalidRelation(String),
    #[error("unknown class {0}")]
    UnknownClass(String),
    #[error("unknown instance {0}")]
    UnknownInstance(InstanceId),
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("unknown role {0}")]
    UnknownRole(String),
    #[error("role {role} belongs to class {expected}, but {id} is a {actual}")]
    RoleClassMismatch {
        id: InstanceId,
        role: String,
        expected: String,
        actual: String,
    },
    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("invalid store snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Identifier of an instance inside one document store: `input1`, `input2`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstanceId(usize);

impl InstanceId {
    /// The 1-based counter behind `inputN`.
    pub fn number(self) -> usize {
        self.0
    }

    pub(crate) fn from_index(index: usize) -> Self {
        InstanceId(index + 1)
    }

    fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "input{}", self.0)
    }
}

impl FromStr for InstanceId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .strip_prefix("input")
            .ok_or_else(|| format!("instance id {s:?} does not start with \"input\""))?;
        let n: usize = digits
            .parse()
            .map_err(|_| format!("instance id {s:?} has a malformed counter"))?;
        if n == 0 {
            return Err(format!("instance id {s:?} must start at input1"));
        }
        Ok(InstanceId(n))
    }
}

/// The event schema: classes, role subclasses, and the relation vocabulary.
///
/// Immutable after construction and safe to share across documents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OntologySchema {
    classes: IndexSet<String>,
    roles: IndexMap<String, String>,
    relations: IndexSet<String>,
}

impl OntologySchema {
    /// Builds a schema from class names, (role, parent class) pairs, and
    /// relation lemmas. Input order is preserved for serialization.
    pub fn build<C, R, L>(entities: C, roles: R, relations: L) -> Result<Self, OntologyError>
    where
        C: IntoIterator<Item = String>,
        R: IntoIterator<Item = (String, String)>,
        L: IntoIterator<Item = String>,
    {
        let mut schema = OntologySchema {
            classes: IndexSet::new(),
            roles: IndexMap::new(),
            relations: IndexSet::new(),
        };
        for class in entities {
            if !schema.classes.insert(class.clone()) {
                return Err(OntologyError::DuplicateName(class));
            }
        }
        for (role, parent) in roles {
            if schema.classes.contains(&role) || schema.roles.contains_key(&role) {
                return Err(OntologyError::DuplicateName(role));
            }
            if !schema.classes.contains(&parent) {
                return Err(OntologyError::UnknownParentClass { role, parent });
            }
            schema.roles.insert(role, parent);
        }
        for lemma in relations {
            let lemma = lemma.to_lowercase();
            let ok = !lemma.is_empty()
                && !lemma
                    .chars()
                    .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | ';' | '^' | '#' | '"'));
            if !ok {
                return Err(OntologyError::InvalidRelation(lemma));
            }
            schema.relations.insert(lemma);
        }
        Ok(schema)
    }

    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(String::as_str)
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.classes.contains(name)
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Iterates (role, parent class) pairs in declaration order.
    pub fn roles(&self) -> impl Iterator<Item = (&str, &str)> {
        self.roles.iter().map(|(r, c)| (r.as_str(), c.as_str()))
    }

    pub fn role_parent(&self, role: &str) -> Option<&str> {
        self.roles.get(role).map(String::as_str)
    }

    pub fn role_count(&self) -> usize {
        self.roles.len()
    }

    pub fn relations(&self) -> impl Iterator<Item = &str> {
        self.relations.iter().map(String::as_str)
    }

    /// Relation lookup lowercases the probe first.
    pub fn has_relation(&self, lemma: &str) -> bool {
        if self.relations.contains(lemma) {
            return true;
        }
        self.relations.contains(lemma.to_lowercase().as_str())
    }

    /// Parses the line-oriented schema format:
    /// `class <Name>`, `role <Name> of <Class>`, `relation <lemma>`,
    /// with `#` comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, OntologyError> {
        enum Directive {
            Class(String),
            Role(String, String),
            Relation(String),
        }
        let mut directives = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let col_of = |word: &str| raw.find(word).map(|p| p + 1).unwrap_or(1);
            let parts: Vec<&str> = line.split_whitespace().collect();
            let directive = match parts.as_slice() {
                ["class", name] => Directive::Class((*name).to_string()),
                ["role", name, "of", class] => {
                    Directive::Role((*name).to_string(), (*class).to_string())
                }
                ["relation", lemma] => Directive::Relation((*lemma).to_string()),
                [kw, ..] if matches!(*kw, "class" | "role" | "relation") => {
                    return Err(OntologyError::Parse {
                        line: line_no,
                        col: col_of(kw),
                        message: format!("malformed {kw} declaration"),
                    })
                }
                [kw, ..] => {
                    return Err(OntologyError::Parse {
                        line: line_no,
                        col: col_of(kw),
                        message: format!("unknown directive {kw:?}"),
                    })
                }
                [] => unreachable!("blank lines are skipped"),
            };
            directives.push((line_no, raw.to_string(), directive));
        }

        let mut classes = Vec::new();
        let mut roles = Vec::new();
        let mut relations = Vec::new();
        let mut lines_by_name: HashMap<String, (usize, String)> = HashMap::new();
        for (line_no, raw, directive) in directives {
            match directive {
                Directive::Class(name) => {
                    lines_by_name.entry(name.clone()).or_insert((line_no, raw));
                    classes.push(name);
                }
                Directive::Role(name, parent) => {
                    lines_by_name.entry(name.clone()).or_insert((line_no, raw));
                    roles.push((name, parent));
                }
                Directive::Relation(lemma) => {
                    lines_by_name.entry(lemma.clone()).or_insert((line_no, raw));
                    relations.push(lemma);
                }
            }
        }
        OntologySchema::build(classes, roles, relations).map_err(|err| {
            let name = match &err {
                OntologyError::DuplicateName(n) => Some(n.clone()),
                OntologyError::UnknownParentClass { role, .. } => Some(role.clone()),
                OntologyError::InvalidRelation(n) => Some(n.clone()),
                _ => None,
            };
            match name.and_then(|n| lines_by_name.get(&n)) {
                Some((line, raw)) => OntologyError::Parse {
                    line: *line,
                    col: 1,
                    message: format!("{err} (in {raw:?})"),
                },
                None => err,
            }
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, OntologyError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical text form; `parse` of the result reproduces the schema.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for class in &self.classes {
            out.push_str(&format!("class {class}\n"));
        }
        if !self.roles.is_empty() {
            out.push('\n');
        }
        for (role, parent) in &self.roles {
            out.push_str(&format!("role {role} of {parent}\n"));
        }
        if !self.relations.is_empty() {
            out.push('\n');
        }
        for lemma in &self.relations {
            out.push_str(&format!("relation {lemma}\n"));
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), OntologyError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// One typed individual in a document store.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub surface: String,
    pub class: String,
    pub roles: BTreeSet<String>,
}

/// A relation assertion between two instances.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assertion {
    pub subject: InstanceId,
    pub relation: String,
    pub object: InstanceId,
}

/// The populated ontology for one document: instances, assertions, roles.
#[derive(Clone, Debug, Default)]
pub struct InstanceStore {
    instances: Vec<Instance>,
    by_key: HashMap<(String, String), InstanceId>,
    assertions: Vec<Assertion>,
    assertion_set: HashSet<Assertion>,
}

impl PartialEq for InstanceStore {
    fn eq(&self, other: &Self) -> bool {
        self.instances == other.instances && self.assertions == other.assertions
    }
}

impl Eq for InstanceStore {}

impl InstanceStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a surface under a class and returns its id. Re-adding an
    /// identical (surface, class) pair returns the existing id.
    pub fn add_instance(
        &mut self,
        schema: &OntologySchema,
        surface: &str,
        class: &str,
    ) -> Result<InstanceId, OntologyError> {
        if !schema.has_class(class) {
            return Err(OntologyError::UnknownClass(class.to_string()));
        }
        let key = (surface.to_string(), class.to_string());
        if let Some(&id) = self.by_key.get(&key) {
            return Ok(id);
        }
        let id = InstanceId::from_index(self.instances.len());
        self.instances.push(Instance {
            surface: surface.to_string(),
            class: class.to_string(),
            roles: BTreeSet::new(),
        });
        self.by_key.insert(key, id);
        Ok(id)
    }

    /// Asserts `subject --relation--> object`. Duplicate assertions collapse.
    pub fn link_instances(
        &mut self,
        schema: &OntologySchema,
        subject: InstanceId,
        relation: &str,
        object: InstanceId,
    ) -> Result<Assertion, OntologyError> {
        let lemma = relation.to_lowercase();
        if !schema.has_relation(&lemma) {
            return Err(OntologyError::UnknownRelation(relation.to_string()));
        }
        for id in [subject, object] {
            if self.get(id).is_none() {
                return Err(OntologyError::UnknownInstance(id));
            }
        }
        let assertion = Assertion {
            subject,
            relation: lemma,
            object,
        };
        if self.assertion_set.insert(assertion.clone()) {
            self.assertions.push(assertion.clone());
        }
        Ok(assertion)
    }

    /// Adds a role to an instance's role set.
    pub fn assign_role(
        &mut self,
        schema: &OntologySchema,
        id: InstanceId,
        role: &str,
    ) -> Result<(), OntologyError> {
        let parent = schema
            .role_parent(role)
            .ok_or_else(|| OntologyError::UnknownRole(role.to_string()))?
            .to_string();
        let instance = self
            .instances
            .get_mut(id.index())
            .ok_or(OntologyError::UnknownInstance(id))?;
        if instance.class != parent {
            return Err(OntologyError::RoleClassMismatch {
                id,
                role: role.to_string(),
                expected: parent,
                actual: instance.class.clone(),
            });
        }
        instance.roles.insert(role.to_string());
        Ok(())
    }

    pub fn get(&self, id: InstanceId) -> Option<&Instance> {
        self.instances.get(id.index())
    }

    pub fn find(&self, surface: &str, class: &str) -> Option<InstanceId> {
        self.by_key
            .get(&(surface.to_string(), class.to_string()))
            .copied()
    }

    pub fn instances(&self) -> impl Iterator<Item = (InstanceId, &Instance)> {
        self.instances
            .iter()
            .enumerate()
            .map(|(i, inst)| (InstanceId::from_index(i), inst))
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Checks every store invariant against a schema.
    pub fn validate(&self, schema: &OntologySchema) -> Result<(), OntologyError> {
        for (id, instance) in self.instances() {
            if !schema.has_class(&instance.class) {
                return Err(OntologyError::UnknownClass(instance.class.clone()));
            }
            for role in &instance.roles {
                let parent = schema
                    .role_parent(role)
                    .ok_or_else(|| OntologyError::UnknownRole(role.clone()))?;
                if parent != instance.class {
                    return Err(OntologyError::RoleClassMismatch {
                        id,
                        role: role.clone(),
                        expected: parent.to_string(),
                        actual: instance.class.clone(),
                    });
                }
            }
        }
        for assertion in &self.assertions {
            if !schema.has_relation(&assertion.relation) {
                return Err(OntologyError::UnknownRelation(assertion.relation.clone()));
            }
            for id in [assertion.subject, assertion.object] {
                if self.get(id).is_none() {
                    return Err(OntologyError::UnknownInstance(id));
                }
            }
        }
        Ok(())
    }

    /// Serializes to the snapshot JSON form: object keys sorted,
    /// 2-space indent.
    pub fn to_snapshot_json(&self) -> String {
        #[derive(Serialize)]
        struct Snapshot<'a> {
            assertions: Vec<[String; 3]>,
            instances: BTreeMap<String, InstanceJson<'a>>,
        }
        #[derive(Serialize)]
        struct InstanceJson<'a> {
            class: &'a str,
            roles: Vec<&'a str>,
            surface: &'a str,
        }
        let snapshot = Snapshot {
            assertions: self
                .assertions
                .iter()
                .map(|a| {
                    [
                        a.subject.to_string(),
                        a.relation.clone(),
                        a.object.to_string(),
                    ]
                })
                .collect(),
            instances: self
                .instances()
                .map(|(id, inst)| {
                    (
                        id.to_string(),
                        InstanceJson {
                            class: &inst.class,
                            roles: inst.roles.iter().map(String::as_str).collect(),
                            surface: &inst.surface,
                        },
                    )
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&snapshot).expect("snapshot serializes");
        out.push('\n');
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), OntologyError> {
        std::fs::write(path, self.to_snapshot_json())?;
        Ok(())
    }

    /// Reads a snapshot back and validates it against a schema.
    pub fn from_snapshot_json(text: &str, schema: &OntologySchema) -> Result<Self, OntologyError> {
        #[derive(Deserialize)]
        struct Snapshot {
            assertions: Vec<[String; 3]>,
            instances: BTreeMap<String, InstanceJson>,
        }
        #[derive(Deserialize)]
        struct InstanceJson {
            class: String,
            roles: Vec<String>,
            surface: String,
        }
        let snapshot: Snapshot =
            serde_json::from_str(text).map_err(|e| OntologyError::Snapshot(e.to_string()))?;

        let mut ordered: Vec<(InstanceId, InstanceJson)> = Vec::new();
        for (key, inst) in snapshot.instances {
            let id = InstanceId::from_str(&key).map_err(OntologyError::Snapshot)?;
            ordered.push((id, inst));
        }
        ordered.sort_by_key(|(id, _)| *id);
        for (pos, (id, _)) in ordered.iter().enumerate() {
            if id.index() != pos {
                return Err(OntologyError::Snapshot(format!(
                    "instance ids are not dense: expected input{}, found {id}",
                    pos + 1
                )));
            }
        }

        let mut store = InstanceStore::new();
        for (_, inst) in &ordered {
            let before = store.len();
            let id = store.add_instance(schema, &inst.surface, &inst.class)?;
            if store.len() == before {
                return Err(OntologyError::Snapshot(format!(
                    "duplicate (surface, class) pair for {id}"
                )));
            }
            for role in &inst.roles {
                store.assign_role(schema, id, role)?;
            }
        }
        for [s, r, o] in &snapshot.assertions {
            let subject = InstanceId::from_str(s).map_err(OntologyError::Snapshot)?;
            let object = InstanceId::from_str(o).map_err(OntologyError::Snapshot)?;
            store.link_instances(schema, subject, r, object)?;
        }
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>, schema: &OntologySchema) -> Result<Self, OntologyError> {
        Self::from_snapshot_json(&std::fs::read_to_string(path)?, schema)
    }
}

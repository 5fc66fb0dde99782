//! Forward-chaining fixpoint evaluation.
//!
//! Facts are class memberships, role memberships, and relation assertions.
//! The store's declared classes, assigned roles, and assertions seed the
//! fact set; sweeps apply every rule until nothing new is derivable. Only
//! class/role facts can be derived, the ground-atom universe is finite, and
//! a role fact is well-formed only when its parent class matches the
//! instance's declared class, so termination is structural.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{Atom, PredicateKind, Rule, RuleError, Term};
use crate::ontology::{InstanceId, InstanceStore, OntologySchema};

/// One ground fact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fact {
    Class(InstanceId, String),
    Role(InstanceId, String),
    Relation(InstanceId, String, InstanceId),
}

/// Resolves a predicate name against the schema: role first, then class,
/// then relation lemma. A name living in several namespaces is an error.
pub fn resolve_predicate(
    schema: &OntologySchema,
    name: &str,
) -> Result<PredicateKind, Option<RuleError>> {
    let mut kinds = Vec::new();
    if schema.role_parent(name).is_some() {
        kinds.push(PredicateKind::Role);
    }
    if schema.has_class(name) {
        kinds.push(PredicateKind::Class);
    }
    if schema.has_relation(name) {
        kinds.push(PredicateKind::Relation);
    }
    match kinds.as_slice() {
        [] => Err(None),
        [kind] => Ok(*kind),
        many => Err(Some(RuleError::AmbiguousPredicate {
            predicate: name.to_string(),
            kinds: many
                .iter()
                .map(PredicateKind::to_string)
                .collect::<Vec<_>>()
                .join(", "),
        })),
    }
}

struct ResolvedRule<'a> {
    rule: &'a Rule,
    body: Vec<(PredicateKind, &'a Atom)>,
    head: Vec<(PredicateKind, &'a Atom)>,
}

fn resolve_all<'a>(
    schema: &OntologySchema,
    rules: &'a [Rule],
) -> Result<Vec<ResolvedRule<'a>>, RuleError> {
    // Namespace collisions are a load-time error even for unused names.
    for (name, _) in schema.roles() {
        if schema.has_relation(name) {
            return Err(RuleError::AmbiguousPredicate {
                predicate: name.to_string(),
                kinds: "role, relation".to_string(),
            });
        }
    }
    for name in schema.classes() {
        if schema.has_relation(name) {
            return Err(RuleError::AmbiguousPredicate {
                predicate: name.to_string(),
                kinds: "class, relation".to_string(),
            });
        }
    }

    let mut resolved = Vec::new();
    for rule in rules {
        let resolve_side = |atoms: &'a [Atom], head: bool| {
            atoms
                .iter()
                .map(|atom| {
                    let kind = resolve_predicate(schema, &atom.predicate).map_err(|e| {
                        e.unwrap_or_else(|| RuleError::UnknownPredicate {
                            rule: rule.id.clone(),
                            predicate: atom.predicate.clone(),
                        })
                    })?;
                    let expected = match kind {
                        PredicateKind::Relation => 2,
                        _ => 1,
                    };
                    if atom.args.len() != expected {
                        return Err(RuleError::ArityMismatch {
                            rule: rule.id.clone(),
                            predicate: atom.predicate.clone(),
                            kind,
                            expected,
                            found: atom.args.len(),
                        });
                    }
                    if head && kind == PredicateKind::Relation {
                        return Err(RuleError::InvalidHead {
                            rule: rule.id.clone(),
                            predicate: atom.predicate.clone(),
                        });
                    }
                    Ok((kind, atom))
                })
                .collect::<Result<Vec<_>, RuleError>>()
        };
        resolved.push(ResolvedRule {
            rule,
            body: resolve_side(&rule.body, false)?,
            head: resolve_side(&rule.head, true)?,
        });
    }
    Ok(resolved)
}

/// Checks that every rule predicate resolves against the schema with the
/// right arity and that heads are class/role atoms.
pub fn validate_rules(schema: &OntologySchema, rules: &[Rule]) -> Result<(), RuleError> {
    resolve_all(schema, rules).map(|_| ())
}

#[derive(Clone, Debug)]
struct Justification {
    rule: String,
    body: Vec<Fact>,
}

/// The outcome of [`infer_with_trace`]: the enriched store plus the
/// derivation record backing [`InferenceResult::explain`].
#[derive(Debug)]
pub struct InferenceResult {
    pub store: InstanceStore,
    /// Fixpoint sweeps executed, including the final empty one.
    pub passes: usize,
    base: Vec<Fact>,
    derived: Vec<Fact>,
    order: HashMap<Fact, usize>,
    justifications: HashMap<Fact, Vec<Justification>>,
}

impl InferenceResult {
    /// Every fact that holds after inference, base and derived.
    pub fn facts(&self) -> BTreeSet<Fact> {
        self.base.iter().chain(self.derived.iter()).cloned().collect()
    }

    pub fn derived_facts(&self) -> &[Fact] {
        &self.derived
    }

    /// Rule-id chains deriving `role` for `id`, one per recorded
    /// justification. Roles that were already present before inference are
    /// not derived and report `NotDerived`.
    pub fn explain(&self, id: InstanceId, role: &str) -> Result<Vec<Vec<String>>, RuleError> {
        let fact = Fact::Role(id, role.to_string());
        let justifications =
            self.justifications
                .get(&fact)
                .ok_or_else(|| RuleError::NotDerived {
                    id,
                    role: role.to_string(),
                })?;
        let mut memo = HashMap::new();
        let mut chains: Vec<Vec<String>> = Vec::new();
        for justification in justifications {
            let chain = self.chain_for(justification, &mut memo);
            if !chains.contains(&chain) {
                chains.push(chain);
            }
        }
        Ok(chains)
    }

    fn chain_for(
        &self,
        justification: &Justification,
        memo: &mut HashMap<Fact, Vec<String>>,
    ) -> Vec<String> {
        let mut chain = Vec::new();
        for fact in &justification.body {
            if self.order.get(fact).copied().unwrap_or(0) > 0 {
                for rule in self.representative_chain(fact, memo) {
                    if !chain.contains(&rule) {
                        chain.push(rule);
                    }
                }
            }
        }
        if !chain.contains(&justification.rule) {
            chain.push(justification.rule.clone());
        }
        chain
    }

    fn representative_chain(&self, fact: &Fact, memo: &mut HashMap<Fact, Vec<String>>) -> Vec<String> {
        if let Some(chain) = memo.get(fact) {
            return chain.clone();
        }
        let chain = match self.justifications.get(fact).and_then(|j| j.first()) {
            Some(justification) => self.chain_for(justification, memo),
            None => Vec::new(),
        };
        memo.insert(fact.clone(), chain.clone());
        chain
    }
}

type Binding = HashMap<String, InstanceId>;

struct Engine {
    surfaces: Vec<String>,
    classes: Vec<String>,
    facts: HashSet<Fact>,
    class_members: HashMap<String, Vec<InstanceId>>,
    role_members: HashMap<String, Vec<InstanceId>>,
    relation_pairs: HashMap<String, Vec<(InstanceId, InstanceId)>>,
}

impl Engine {
    fn seed(store: &InstanceStore) -> (Self, Vec<Fact>) {
        let mut engine = Engine {
            surfaces: Vec::new(),
            classes: Vec::new(),
            facts: HashSet::new(),
            class_members: HashMap::new(),
            role_members: HashMap::new(),
            relation_pairs: HashMap::new(),
        };
        let mut base = Vec::new();
        for (id, instance) in store.instances() {
            engine.surfaces.push(instance.surface.clone());
            engine.classes.push(instance.class.clone());
            let fact = Fact::Class(id, instance.class.clone());
            engine.insert(fact.clone());
            base.push(fact);
            for role in &instance.roles {
                let fact = Fact::Role(id, role.clone());
                engine.insert(fact.clone());
                base.push(fact);
            }
        }
        for assertion in store.assertions() {
            let fact = Fact::Relation(
                assertion.subject,
                assertion.relation.clone(),
                assertion.object,
            );
            engine.insert(fact.clone());
            base.push(fact);
        }
        (engine, base)
    }

    fn insert(&mut self, fact: Fact) -> bool {
        if !self.facts.insert(fact.clone()) {
            return false;
        }
        match fact {
            Fact::Class(id, class) => self.class_members.entry(class).or_default().push(id),
            Fact::Role(id, role) => self.role_members.entry(role).or_default().push(id),
            Fact::Relation(s, relation, o) => self
                .relation_pairs
                .entry(relation)
                .or_default()
                .push((s, o)),
        }
        true
    }

    fn surface_matches(&self, id: InstanceId, constant: &str) -> bool {
        self.surfaces.get(id.number() - 1).map(String::as_str) == Some(constant)
    }

    /// Enumerates every binding satisfying the body atoms, left to right.
    fn match_body(&self, body: &[(PredicateKind, &Atom)]) -> Vec<Binding> {
        let mut results = Vec::new();
        let mut binding = Binding::new();
        self.solve(body, &mut binding, &mut results);
        results
    }

    fn solve(
        &self,
        atoms: &[(PredicateKind, &Atom)],
        binding: &mut Binding,
        results: &mut Vec<Binding>,
    ) {
        let Some(((kind, atom), rest)) = atoms.split_first() else {
            results.push(binding.clone());
            return;
        };
        match kind {
            PredicateKind::Class | PredicateKind::Role => {
                let members = match kind {
                    PredicateKind::Class => self.class_members.get(&atom.predicate),
                    _ => self.role_members.get(&atom.predicate),
                };
                let empty = Vec::new();
                for &id in members.unwrap_or(&empty) {
                    self.try_bind(&atom.args[0], id, binding, |b| {
                        self.solve(rest, b, results);
                    });
                }
            }
            PredicateKind::Relation => {
                let key = atom.predicate.to_lowercase();
                let empty = Vec::new();
                let pairs = self.relation_pairs.get(&key).unwrap_or(&empty);
                for &(subject, object) in pairs {
                    self.try_bind(&atom.args[0], subject, binding, |b| {
                        self.try_bind(&atom.args[1], object, b, |b| {
                            self.solve(rest, b, results);
                        });
                    });
                }
            }
        }
    }

    fn try_bind(
        &self,
        term: &Term,
        id: InstanceId,
        binding: &mut Binding,
        continuation: impl FnOnce(&mut Binding),
    ) {
        match term {
            Term::Constant(surface) => {
                if self.surface_matches(id, surface) {
                    continuation(binding);
                }
            }
            Term::Variable(name) => match binding.get(name) {
                Some(&bound) => {
                    if bound == id {
                        continuation(binding);
                    }
                }
                None => {
                    binding.insert(name.clone(), id);
                    continuation(binding);
                    binding.remove(name);
                }
            },
        }
    }

    /// Ground instances a head term denotes under a binding.
    fn head_targets(&self, term: &Term, binding: &Binding) -> Vec<InstanceId> {
        match term {
            Term::Variable(name) => binding.get(name).copied().into_iter().collect(),
            Term::Constant(surface) => self
                .surfaces
                .iter()
                .enumerate()
                .filter(|(_, s)| s.as_str() == surface)
                .map(|(i, _)| InstanceId::from_index(i))
                .collect(),
        }
    }
}

/// Runs forward chaining to the least fixpoint and returns the enriched
/// store together with the derivation trace.
pub fn infer_with_trace(
    schema: &OntologySchema,
    store: &InstanceStore,
    rules: &[Rule],
) -> Result<InferenceResult, RuleError> {
    store.validate(schema)?;
    let resolved = resolve_all(schema, rules)?;

    let (mut engine, base) = Engine::seed(store);
    let mut order: HashMap<Fact, usize> = HashMap::new();
    let mut justifications: HashMap<Fact, Vec<Justification>> = HashMap::new();
    let mut derived: Vec<Fact> = Vec::new();
    let mut next_order = 1usize;
    let mut passes = 0usize;

    // Safety net mirroring the finite ground-atom universe.
    let universe_bound =
        store.len() * (schema.role_count() + schema.class_count()) + 1;

    loop {
        passes += 1;
        assert!(
            passes <= universe_bound + 1,
            "fixpoint exceeded the ground-atom bound"
        );
        let mut added = false;

        for resolved_rule in &resolved {
            for binding in engine.match_body(&resolved_rule.body) {
                let ground_body: Vec<Fact> = resolved_rule
                    .body
                    .iter()
                    .map(|(kind, atom)| ground_atom(&engine, kind, atom, &binding))
                    .collect();
                for (kind, atom) in &resolved_rule.head {
                    for id in engine.head_targets(&atom.args[0], &binding) {
                        let fact = match kind {
                            PredicateKind::Class => Fact::Class(id, atom.predicate.clone()),
                            PredicateKind::Role => {
                                // A role fact is well-formed only when the
                                // parent class matches the declared class.
                                let parent = schema.role_parent(&atom.predicate);
                                let declared = &engine.classes[id.number() - 1];
                                if parent != Some(declared.as_str()) {
                                    continue;
                                }
                                Fact::Role(id, atom.predicate.clone())
                            }
                            PredicateKind::Relation => unreachable!("heads are class/role"),
                        };
                        if engine.insert(fact.clone()) {
                            added = true;
                            order.insert(fact.clone(), next_order);
                            next_order += 1;
                            derived.push(fact.clone());
                            justifications.entry(fact).or_default().push(Justification {
                                rule: resolved_rule.rule.id.clone(),
                                body: ground_body.clone(),
                            });
                        } else if order.get(&fact).copied().unwrap_or(0) > 0 {
                            // Alternative derivation of a known fact. Keep it
                            // only when acyclic: every derived body fact must
                            // precede the fact itself.
                            let fact_order = order[&fact];
                            let acyclic = ground_body
                                .iter()
                                .all(|f| order.get(f).copied().unwrap_or(0) < fact_order);
                            if acyclic {
                                let entry = justifications.entry(fact).or_default();
                                let candidate = Justification {
                                    rule: resolved_rule.rule.id.clone(),
                                    body: ground_body.clone(),
                                };
                                if !entry
                                    .iter()
                                    .any(|j| j.rule == candidate.rule && j.body == candidate.body)
                                {
                                    entry.push(candidate);
                                }
                            }
                        }
                    }
                }
            }
        }
        if !added {
            break;
        }
    }

    let mut result_store = store.clone();
    for fact in &derived {
        if let Fact::Role(id, role) = fact {
            result_store.assign_role(schema, *id, role)?;
        }
    }

    Ok(InferenceResult {
        store: result_store,
        passes,
        base,
        derived,
        order,
        justifications,
    })
}

fn ground_atom(
    engine: &Engine,
    kind: &PredicateKind,
    atom: &Atom,
    binding: &Binding,
) -> Fact {
    let resolve = |term: &Term| -> InstanceId {
        match term {
            Term::Variable(name) => binding[name],
            Term::Constant(surface) => engine
                .surfaces
                .iter()
                .enumerate()
                .find(|(_, s)| s.as_str() == surface)
                .map(|(i, _)| InstanceId::from_index(i))
                .expect("constant matched during solving"),
        }
    };
    match kind {
        PredicateKind::Class => Fact::Class(resolve(&atom.args[0]), atom.predicate.clone()),
        PredicateKind::Role => Fact::Role(resolve(&atom.args[0]), atom.predicate.clone()),
        PredicateKind::Relation => Fact::Relation(
            resolve(&atom.args[0]),
            atom.predicate.to_lowercase(),
            resolve(&atom.args[1]),
        ),
    }
}

/// Forward chaining without the trace: returns the enriched store.
pub fn infer(
    schema: &OntologySchema,
    store: &InstanceStore,
    rules: &[Rule],
) -> Result<InstanceStore, RuleError> {
    infer_with_trace(schema, store, rules).map(|result| result.store)
}

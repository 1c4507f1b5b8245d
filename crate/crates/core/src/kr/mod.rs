//! The terminological core: concept language, normalization, structural
//! subsumption, taxonomy classification, individuals with procedural test
//! hooks, and forward rules.
//!
//! Construction is single-writer; after [`Kb::freeze`] the base is
//! immutable and every query is safe to run from multiple threads, each
//! with its own [`Scratch`] population for per-call individuals.

mod abox;
mod expr;
mod normal;
mod rules;
mod taxonomy;

pub use abox::{Individual, Scratch, TestContext};
pub use expr::{Atom, ConceptDefinition, ConceptExpression, ConceptKind};
pub use normal::{AttrRestriction, NormalForm};
pub use rules::{Assertion, ForwardRule, RuleProc};
pub use taxonomy::{Placement, TaxonomyNode};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::sentence::SyntaxTables;

pub const TOP: &str = "top";
pub const BOTTOM: &str = "bottom";
pub const ENTITY: &str = "entity";
pub const EVENT: &str = "event";
pub const SENTENCE: &str = "sentence";

/// Registered test procedure evaluated during individual classification.
/// Must be a pure function of the context and individual.
pub type TestProc = Arc<dyn Fn(&TestContext, &Individual) -> bool + Send + Sync>;

/// Attribute declaration. Attributes are functional (at most one filler)
/// unless declared multi-valued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttrDecl {
    pub multi: bool,
}

/// The declared vocabulary: attributes and disjointness groups.
#[derive(Debug, Clone, Default)]
pub struct Schema {
    attrs: BTreeMap<String, AttrDecl>,
    disjoint: BTreeMap<String, String>,
}

impl Schema {
    /// Upper filler bound implied by the declaration: `Some(1)` for
    /// functional attributes, `None` (unbounded) for multi-valued ones.
    pub(crate) fn cap(&self, attr: &str) -> Result<Option<u32>> {
        match self.attrs.get(attr) {
            Some(decl) => Ok(if decl.multi { None } else { Some(1) }),
            None => Err(Error::UnknownName(attr.to_string())),
        }
    }

    /// As [`Schema::cap`] for contexts where the attribute is already
    /// known to be declared (normal forms only mention declared names).
    pub(crate) fn cap_unchecked(&self, attr: &str) -> Option<u32> {
        self.attrs
            .get(attr)
            .map(|decl| if decl.multi { None } else { Some(1) })
            .unwrap_or(Some(1))
    }

    pub(crate) fn disjoint_group(&self, primitive: &str) -> Option<&str> {
        self.disjoint.get(primitive).map(String::as_str)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct StoredConcept {
    pub def: ConceptDefinition,
    /// `None` while the concept's normal form is being computed; hitting
    /// such an entry during expansion means the definitions are cyclic.
    pub nf: Option<NormalForm>,
}

pub(crate) type ConceptTable = BTreeMap<String, StoredConcept>;

/// The knowledge base: terminology, taxonomy, assertions, lexicon, and
/// sentence-classification tables.
pub struct Kb {
    pub(crate) schema: Schema,
    pub(crate) concepts: ConceptTable,
    pub(crate) taxonomy: taxonomy::Taxonomy,
    pub(crate) individuals: BTreeMap<String, Individual>,
    pub(crate) tests: BTreeMap<String, TestProc>,
    pub(crate) rules: Vec<ForwardRule>,
    pub(crate) lexicon: Lexicon,
    pub(crate) syntax: SyntaxTables,
    frozen: bool,
    rule_limit: usize,
}

impl Default for Kb {
    fn default() -> Self {
        Self::new()
    }
}

impl Kb {
    /// An empty base with the built-in vocabulary: `top` and `bottom`,
    /// the `entity`, `event`, and `sentence` primitives, the grammatical
    /// function attributes, and the event argument attributes
    /// `arg1`..`arg8`.
    pub fn new() -> Self {
        let mut kb = Kb {
            schema: Schema::default(),
            concepts: ConceptTable::new(),
            taxonomy: taxonomy::Taxonomy::new(),
            individuals: BTreeMap::new(),
            tests: BTreeMap::new(),
            rules: Vec::new(),
            lexicon: Lexicon::default(),
            syntax: SyntaxTables::default(),
            frozen: false,
            rule_limit: 100,
        };
        kb.concepts.insert(
            TOP.to_string(),
            StoredConcept {
                def: ConceptDefinition::defined(TOP, ConceptExpression::top()),
                nf: Some(NormalForm::top()),
            },
        );
        kb.concepts.insert(
            BOTTOM.to_string(),
            StoredConcept {
                def: ConceptDefinition::defined(BOTTOM, ConceptExpression::named(BOTTOM)),
                nf: Some(NormalForm::bottom()),
            },
        );
        for attr in crate::sentence::BUILTIN_ATTRIBUTES {
            kb.schema
                .attrs
                .insert(attr.to_string(), AttrDecl { multi: false });
        }
        kb.schema.attrs.insert(
            crate::sentence::DENOTES.to_string(),
            AttrDecl { multi: true },
        );
        for i in 1..=crate::lexicon::MAX_EVENT_ARGS {
            kb.schema
                .attrs
                .insert(crate::lexicon::arg_attr(i), AttrDecl { multi: false });
        }
        for builtin in [ENTITY, EVENT, SENTENCE] {
            kb.classify_concept(ConceptDefinition::primitive(
                builtin,
                ConceptExpression::top(),
            ))
            .expect("built-in primitives classify");
        }
        kb
    }

    fn check_mutable(&self) -> Result<()> {
        if self.frozen {
            Err(Error::FrozenKb)
        } else {
            Ok(())
        }
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn rule_limit(&self) -> usize {
        self.rule_limit
    }

    pub fn set_rule_limit(&mut self, limit: usize) {
        self.rule_limit = limit.max(1);
    }

    /// Declare an attribute; functional unless `multi`.
    pub fn declare_attribute(&mut self, name: &str, multi: bool) -> Result<()> {
        self.check_mutable()?;
        if self.schema.attrs.contains_key(name) {
            return Err(Error::DuplicateAttribute(name.to_string()));
        }
        self.schema
            .attrs
            .insert(name.to_string(), AttrDecl { multi });
        Ok(())
    }

    pub fn attribute_declared(&self, name: &str) -> bool {
        self.schema.attrs.contains_key(name)
    }

    /// Canonical normal form of an expression against this base.
    pub fn normalize(&self, expr: &ConceptExpression) -> Result<NormalForm> {
        normal::normalize(expr, &self.schema, &self.concepts)
    }

    /// Does `a` subsume `b`? Both forms must have been built against this
    /// base.
    pub fn subsumes(&self, a: &NormalForm, b: &NormalForm) -> bool {
        normal::subsumes(&self.schema, a, b)
    }

    /// Subsumption between two declared concepts.
    pub fn concept_subsumes(&self, a: &str, b: &str) -> Result<bool> {
        let a = self.concept_nf(a)?;
        let b = self.concept_nf(b)?;
        Ok(normal::subsumes(&self.schema, a, b))
    }

    pub(crate) fn concept_nf(&self, name: &str) -> Result<&NormalForm> {
        match self.concepts.get(name) {
            Some(stored) => stored
                .nf
                .as_ref()
                .ok_or_else(|| Error::CyclicDefinition(name.to_string())),
            None => Err(Error::UnknownName(name.to_string())),
        }
    }

    /// The stored normal form of a declared concept.
    pub fn stored_nf(&self, name: &str) -> Result<NormalForm> {
        self.concept_nf(name).cloned()
    }

    pub fn concept_names(&self) -> impl Iterator<Item = &str> {
        self.concepts.keys().map(String::as_str)
    }

    pub fn concept_kind(&self, name: &str) -> Option<ConceptKind> {
        self.concepts.get(name).map(|c| c.def.kind)
    }

    /// Insert a new concept into the taxonomy between its most-specific
    /// subsumers and most-general subsumees. Incoherent concepts attach
    /// to `bottom`; a concept equivalent to an existing one joins its
    /// node as a synonym.
    pub fn classify_concept(&mut self, def: ConceptDefinition) -> Result<Placement> {
        self.check_mutable()?;
        if self.concepts.contains_key(&def.name) {
            return Err(Error::DuplicateName(def.name));
        }
        let name = def.name.clone();
        let mut group_added = false;
        if let Some(group) = &def.disjoint_group {
            if def.kind == ConceptKind::Primitive {
                self.schema
                    .disjoint
                    .insert(name.clone(), group.clone());
                group_added = true;
            }
        }
        self.concepts.insert(
            name.clone(),
            StoredConcept {
                def: def.clone(),
                nf: None,
            },
        );
        let expr_nf = match normal::normalize(&def.expression, &self.schema, &self.concepts) {
            Ok(nf) => nf,
            Err(e) => {
                self.concepts.remove(&name);
                if group_added {
                    self.schema.disjoint.remove(&name);
                }
                return Err(e);
            }
        };
        let nf = match def.kind {
            ConceptKind::Defined => expr_nf,
            ConceptKind::Primitive => {
                // A primitive contributes itself on top of its necessary
                // conditions.
                let mut own = NormalForm::top();
                own.primitives.insert(name.clone());
                expr_nf.meet(&own, &self.schema)
            }
        };
        let placement = self.taxonomy.insert(&self.schema, &name, nf.clone());
        self.concepts
            .get_mut(&name)
            .expect("definition just inserted")
            .nf = Some(nf);
        Ok(placement)
    }

    /// Direct subsumers of a declared concept.
    pub fn parents_of(&self, name: &str) -> Result<BTreeSet<String>> {
        let id = self
            .taxonomy
            .node_id(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let parents = self.taxonomy.node(id).parents.clone();
        Ok(parents
            .iter()
            .flat_map(|&p| self.taxonomy.node(p).names.iter().cloned())
            .collect())
    }

    /// Direct subsumees of a declared concept.
    pub fn children_of(&self, name: &str) -> Result<BTreeSet<String>> {
        let id = self
            .taxonomy
            .node_id(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let children = self.taxonomy.node(id).children.clone();
        Ok(children
            .iter()
            .flat_map(|&c| self.taxonomy.node(c).names.iter().cloned())
            .collect())
    }

    /// Synonyms of a declared concept (names with an identical normal
    /// form), including the name itself.
    pub fn synonyms_of(&self, name: &str) -> Result<BTreeSet<String>> {
        let id = self
            .taxonomy
            .node_id(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        Ok(self.taxonomy.node(id).names.clone())
    }

    /// The full taxonomy, one entry per node, sorted by name.
    pub fn taxonomy_view(&self) -> Vec<TaxonomyNode> {
        self.taxonomy.view()
    }

    /// Synonym grouping plus direct-subsumption edges; equal snapshots
    /// mean identical DAGs.
    pub fn taxonomy_snapshot(&self) -> (BTreeSet<BTreeSet<String>>, BTreeSet<(String, String)>) {
        self.taxonomy.snapshot()
    }

    /// Declared concepts that classified at `bottom`.
    pub fn incoherent_concepts(&self) -> BTreeSet<String> {
        self.taxonomy.incoherent_names()
    }

    /// Register a named test procedure, making `test(name)` atoms
    /// evaluable during individual classification.
    pub fn register_test(&mut self, name: &str, proc: TestProc) -> Result<()> {
        self.check_mutable()?;
        if self.tests.contains_key(name) {
            return Err(Error::DuplicateTestName(name.to_string()));
        }
        self.tests.insert(name.to_string(), proc);
        Ok(())
    }

    pub fn test_registered(&self, name: &str) -> bool {
        self.tests.contains_key(name)
    }

    /// Register a forward rule; the trigger concept must be declared.
    pub fn register_rule(&mut self, rule: ForwardRule) -> Result<()> {
        self.check_mutable()?;
        if !self.concepts.contains_key(&rule.trigger) {
            return Err(Error::UnknownName(rule.trigger));
        }
        self.rules.push(rule);
        Ok(())
    }

    /// Store an individual and classify it. Returns its most-specific
    /// concept set.
    pub fn add_individual(&mut self, ind: Individual) -> Result<BTreeSet<String>> {
        self.check_mutable()?;
        if self.individuals.contains_key(&ind.name) {
            return Err(Error::DuplicateIndividual(ind.name));
        }
        for expr in &ind.assertions {
            normal::normalize(expr, &self.schema, &self.concepts)?;
        }
        for (attr, fillers) in &ind.fillers {
            self.schema.cap(attr)?;
            for f in fillers {
                if f != &ind.name && !self.individuals.contains_key(f) {
                    return Err(Error::UnknownIndividual(f.clone()));
                }
            }
        }
        let name = ind.name.clone();
        self.individuals.insert(name.clone(), ind);
        let stored = self.individuals.get(&name).expect("just inserted").clone();
        let derived = abox::classify(self, &self.individuals, &stored)?;
        self.individuals
            .get_mut(&name)
            .expect("just inserted")
            .derived = derived.clone();
        Ok(derived)
    }

    pub fn individual(&self, name: &str) -> Option<&Individual> {
        self.individuals.get(name)
    }

    pub fn individual_names(&self) -> impl Iterator<Item = &str> {
        self.individuals.keys().map(String::as_str)
    }

    /// Most-specific stored concepts of an individual (not necessarily a
    /// stored one) against the stored ABox.
    pub fn classify_individual(&self, ind: &Individual) -> Result<BTreeSet<String>> {
        abox::classify(self, &self.individuals, ind)
    }

    /// Does the individual provably belong to the concept expression?
    pub fn individual_satisfies(&self, name: &str, expr: &ConceptExpression) -> Result<bool> {
        let ind = self
            .individuals
            .get(name)
            .ok_or_else(|| Error::UnknownIndividual(name.to_string()))?;
        let nf = self.normalize(expr)?;
        abox::satisfies(self, &self.individuals, ind, &nf)
    }

    /// A private individual population over this base.
    pub fn scratch(&self) -> Scratch<'_> {
        Scratch::new(self)
    }

    /// Materialize the sentence-classification machinery
    /// (subcategorization and alternation concepts, legal-linking tests,
    /// linking rules), reclassify stored individuals, and make the base
    /// immutable.
    pub fn freeze(&mut self) -> Result<()> {
        if self.frozen {
            return Ok(());
        }
        crate::sentence::materialize(self)?;
        let names: Vec<String> = self.individuals.keys().cloned().collect();
        for name in names {
            let ind = self.individuals.get(&name).expect("listed").clone();
            let derived = abox::classify(self, &self.individuals, &ind)?;
            self.individuals.get_mut(&name).expect("listed").derived = derived;
        }
        self.frozen = true;
        Ok(())
    }

    pub(crate) fn require_frozen(&self) -> Result<()> {
        if self.frozen {
            Ok(())
        } else {
            Err(Error::NotFrozen)
        }
    }
}

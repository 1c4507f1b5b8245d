//! World and lexical knowledge: noun entries with concept denotations,
//! event types (typed argument structures), and verb entries mapping a
//! lemma to its senses.
//!
//! Every noun gets an ABox individual named by its lemma; every event
//! gets a defined concept under `event` whose argument slots live on the
//! `arg1`..`argN` attributes; every verb gets a marker individual
//! `verb:<lemma>` so sentence individuals can point at their predicate.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kr::{Atom, ConceptExpression, ConceptDefinition, Individual, Kb};

/// Argument slots available to event definitions.
pub const MAX_EVENT_ARGS: usize = 8;

/// The attribute holding an event's `i`-th argument (1-based).
pub fn arg_attr(i: usize) -> String {
    format!("arg{}", i)
}

/// The ABox individual standing for a verb lemma.
pub fn verb_individual(lemma: &str) -> String {
    format!("verb:{}", lemma)
}

/// A noun lexicon entry. Multi-word fillers are atomic lemmas keyed by
/// their full surface string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NounEntry {
    pub lemma: String,
    pub denotation: ConceptExpression,
}

/// One argument slot of an event: display label, filler restriction, and
/// whether a legal linking must fill it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSlot {
    pub label: String,
    pub restriction: ConceptExpression,
    pub required: bool,
}

impl EventSlot {
    pub fn required(label: impl Into<String>, restriction: ConceptExpression) -> Self {
        EventSlot {
            label: label.into(),
            restriction,
            required: true,
        }
    }
}

/// A verb sense: a named, ordered argument structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventType {
    pub name: String,
    pub slots: Vec<EventSlot>,
}

impl EventType {
    pub fn arity(&self) -> usize {
        self.slots.len()
    }
}

/// A verb lemma with its senses in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbEntry {
    pub lemma: String,
    pub senses: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Lexicon {
    pub nouns: BTreeMap<String, NounEntry>,
    pub events: BTreeMap<String, EventType>,
    pub verbs: BTreeMap<String, VerbEntry>,
}

impl Kb {
    /// Store a noun entry and create its classified ABox individual.
    pub fn add_noun(&mut self, entry: NounEntry) -> Result<()> {
        if self.lexicon.nouns.contains_key(&entry.lemma) {
            return Err(Error::DuplicateLemma(entry.lemma));
        }
        let nf = self.normalize(&entry.denotation)?;
        if nf.is_bottom() {
            return Err(Error::IncoherentDenotation(entry.lemma));
        }
        let ind = Individual::new(entry.lemma.clone()).assert_concept(entry.denotation.clone());
        self.add_individual(ind)?;
        self.lexicon.nouns.insert(entry.lemma.clone(), entry);
        Ok(())
    }

    pub fn noun(&self, lemma: &str) -> Option<&NounEntry> {
        self.lexicon.nouns.get(lemma)
    }

    pub fn noun_lemmas(&self) -> impl Iterator<Item = &str> {
        self.lexicon.nouns.keys().map(String::as_str)
    }

    /// Store an event type and classify its concept under `event`.
    ///
    /// The concept requires each filled argument to satisfy its slot
    /// restriction, each required argument to be present, and arguments
    /// past the event's arity to be absent, so an event instance with all
    /// attributes known classifies under exactly the senses it fits.
    pub fn add_event(&mut self, ev: EventType) -> Result<()> {
        if self.lexicon.events.contains_key(&ev.name) || self.concepts.contains_key(&ev.name) {
            return Err(Error::DuplicateEvent(ev.name));
        }
        if ev.slots.len() > MAX_EVENT_ARGS {
            return Err(Error::TooManyArguments(ev.name, MAX_EVENT_ARGS));
        }
        let mut seen = std::collections::BTreeSet::new();
        for slot in &ev.slots {
            if !seen.insert(slot.label.as_str()) {
                return Err(Error::DuplicateSlotLabel {
                    event: ev.name.clone(),
                    slot: slot.label.clone(),
                });
            }
            let nf = self.normalize(&slot.restriction).map_err(|e| match e {
                Error::UnknownName(n) => Error::UnknownFeature(n),
                other => other,
            })?;
            if nf.is_bottom() {
                return Err(Error::IncoherentRestriction {
                    event: ev.name.clone(),
                    slot: slot.label.clone(),
                });
            }
        }
        let mut atoms = vec![Atom::ConceptRef(crate::kr::EVENT.to_string())];
        for (i, slot) in ev.slots.iter().enumerate() {
            let attr = arg_attr(i + 1);
            if slot.required {
                atoms.push(Atom::AtLeast(1, attr.clone()));
            }
            if !slot.restriction.is_top() {
                atoms.push(Atom::All(attr, Box::new(slot.restriction.clone())));
            }
        }
        for i in ev.arity() + 1..=MAX_EVENT_ARGS {
            atoms.push(Atom::AtMost(0, arg_attr(i)));
        }
        self.classify_concept(ConceptDefinition::defined(
            ev.name.clone(),
            ConceptExpression::and(atoms),
        ))?;
        self.lexicon.events.insert(ev.name.clone(), ev);
        Ok(())
    }

    pub fn event(&self, name: &str) -> Option<&EventType> {
        self.lexicon.events.get(name)
    }

    pub fn event_names(&self) -> impl Iterator<Item = &str> {
        self.lexicon.events.keys().map(String::as_str)
    }

    /// Store a verb entry; all senses must be stored events.
    pub fn add_verb(&mut self, v: VerbEntry) -> Result<()> {
        if self.lexicon.verbs.contains_key(&v.lemma) {
            return Err(Error::DuplicateLemma(v.lemma));
        }
        if v.senses.is_empty() {
            return Err(Error::NoSenses(v.lemma));
        }
        for sense in &v.senses {
            if !self.lexicon.events.contains_key(sense) {
                return Err(Error::UnknownEvent(sense.clone()));
            }
        }
        self.add_individual(Individual::new(verb_individual(&v.lemma)))?;
        self.lexicon.verbs.insert(v.lemma.clone(), v);
        Ok(())
    }

    pub fn verb(&self, lemma: &str) -> Option<&VerbEntry> {
        self.lexicon.verbs.get(lemma)
    }

    pub fn verb_lemmas(&self) -> impl Iterator<Item = &str> {
        self.lexicon.verbs.keys().map(String::as_str)
    }

    /// Does the noun's individual provably fall under the restriction?
    pub fn satisfies(&self, lemma: &str, restriction: &ConceptExpression) -> Result<bool> {
        if !self.lexicon.nouns.contains_key(lemma) {
            return Err(Error::UnknownLemma(lemma.to_string()));
        }
        self.individual_satisfies(lemma, restriction)
    }
}

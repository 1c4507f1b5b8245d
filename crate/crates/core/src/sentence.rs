//! Sentence classification: subcategorization detection from grammatical
//! functions, the legal-linking test against verb senses, alternation
//! classification, and event-instance filling.
//!
//! A subcategorization becomes a defined concept over sentence
//! individuals (`at-least 1` on each of its grammatical functions,
//! `at-most 0` on the rest of the inventory). An alternation refines its
//! base subcategorization with a registered legal-linking test atom; a
//! forward rule per alternation creates the event instance and copies the
//! grammatical-function fillers into argument positions, so classifying
//! the instance reveals the verb sense in use.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kr::{
    Assertion, Atom, ConceptDefinition, ConceptExpression, ForwardRule, Individual, Kb, TestProc,
};
use crate::lexicon::{arg_attr, verb_individual};
use crate::report::{EventInstanceReport, SenseBinding, SentenceReport};

pub const SUBJ: &str = "subj";
pub const OBJ: &str = "obj";
pub const IO: &str = "io";
pub const PPO: &str = "ppo";
pub const PRED: &str = "pred";
pub const PREP: &str = "prep";
pub const DENOTES: &str = "denotes";

pub(crate) const BUILTIN_ATTRIBUTES: [&str; 6] = [SUBJ, OBJ, IO, PPO, PRED, PREP];

/// The ABox individual standing for a preposition.
pub fn prep_individual(prep: &str) -> String {
    format!("prep:{}", prep)
}

/// The event instance created when a sentence matches an alternation.
pub fn event_individual(sentence_id: &str, alternation: &str) -> String {
    format!("{}@{}", sentence_id, alternation)
}

/// A syntactically analyzed sentence: its verb and its grammatical
/// functions, each bound to a noun lemma. The surface text is carried for
/// display only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzedSentence {
    pub id: String,
    pub verb: String,
    pub gfs: BTreeMap<String, String>,
    /// Preposition tag on the `ppo` function, e.g. `for` in `ppo:for`.
    pub prep: Option<String>,
    pub text: Option<String>,
}

impl AnalyzedSentence {
    pub fn new(id: impl Into<String>, verb: impl Into<String>) -> Self {
        AnalyzedSentence {
            id: id.into(),
            verb: verb.into(),
            gfs: BTreeMap::new(),
            prep: None,
            text: None,
        }
    }

    pub fn with_gf(mut self, gf: impl Into<String>, lemma: impl Into<String>) -> Self {
        self.gfs.insert(gf.into(), lemma.into());
        self
    }

    /// Bind the `ppo` function with its preposition tag.
    pub fn with_ppo(mut self, prep: impl Into<String>, lemma: impl Into<String>) -> Self {
        self.gfs.insert(PPO.to_string(), lemma.into());
        self.prep = Some(prep.into());
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn bound_gfs(&self) -> BTreeSet<String> {
        self.gfs.keys().cloned().collect()
    }
}

/// A verb frame identified by the set of grammatical functions present,
/// optionally refined by a preposition constraint on `ppo`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcategorizationType {
    pub name: String,
    pub gfs: BTreeSet<String>,
    pub prep: Option<String>,
}

impl SubcategorizationType {
    pub fn new<I, S>(name: impl Into<String>, gfs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SubcategorizationType {
            name: name.into(),
            gfs: gfs.into_iter().map(Into::into).collect(),
            prep: None,
        }
    }

    pub fn with_prep(mut self, prep: impl Into<String>) -> Self {
        self.prep = Some(prep.into());
        self
    }

    fn accepts(&self, s: &AnalyzedSentence) -> bool {
        self.gfs == s.bound_gfs()
            && match &self.prep {
                Some(p) => s.prep.as_deref() == Some(p.as_str()),
                None => true,
            }
    }
}

/// Injective map from grammatical functions to event-argument positions,
/// stored as the GF sequence in argument order (position = index + 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingPattern {
    gfs: Vec<String>,
}

impl LinkingPattern {
    pub fn new<I, S>(gfs_in_argument_order: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let gfs: Vec<String> = gfs_in_argument_order.into_iter().map(Into::into).collect();
        let distinct: BTreeSet<&String> = gfs.iter().collect();
        if distinct.len() != gfs.len() {
            return Err(Error::InvalidLinkingPattern {
                alternation: String::new(),
                reason: "a grammatical function appears twice".to_string(),
            });
        }
        Ok(LinkingPattern { gfs })
    }

    /// Grammatical functions in event-argument order.
    pub fn gfs(&self) -> &[String] {
        &self.gfs
    }

    pub fn len(&self) -> usize {
        self.gfs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gfs.is_empty()
    }
}

/// An alternation type: a base subcategorization plus the linking pattern
/// that must link legally against some sense of the sentence's verb.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternationType {
    pub name: String,
    pub base: String,
    pub pattern: LinkingPattern,
}

#[derive(Debug, Clone)]
pub(crate) struct SyntaxTables {
    pub subcats: Vec<SubcategorizationType>,
    pub alternations: Vec<AlternationType>,
    pub gf_inventory: BTreeSet<String>,
}

impl Default for SyntaxTables {
    fn default() -> Self {
        SyntaxTables {
            subcats: Vec::new(),
            alternations: Vec::new(),
            gf_inventory: [SUBJ, OBJ, IO, PPO].iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl Kb {
    /// Declare a subcategorization. Unknown grammatical functions extend
    /// the inventory (and the attribute schema).
    pub fn add_subcategorization(&mut self, sc: SubcategorizationType) -> Result<()> {
        if self.is_frozen() {
            return Err(Error::FrozenKb);
        }
        if self.syntax.subcats.iter().any(|s| s.name == sc.name) {
            return Err(Error::DuplicateSubcategorization(sc.name));
        }
        if self.concepts.contains_key(&sc.name) {
            return Err(Error::DuplicateName(sc.name));
        }
        if let Some(other) = self
            .syntax
            .subcats
            .iter()
            .find(|s| s.gfs == sc.gfs && s.prep == sc.prep)
        {
            return Err(Error::SubcategorizationClash {
                name: sc.name,
                other: other.name.clone(),
            });
        }
        for gf in sc.gfs.clone() {
            if !self.attribute_declared(&gf) {
                self.declare_attribute(&gf, false)?;
            }
            self.syntax.gf_inventory.insert(gf);
        }
        self.syntax.subcats.push(sc);
        Ok(())
    }

    pub fn subcategorization(&self, name: &str) -> Option<&SubcategorizationType> {
        self.syntax.subcats.iter().find(|s| s.name == name)
    }

    pub fn subcategorizations(&self) -> &[SubcategorizationType] {
        &self.syntax.subcats
    }

    /// Declare an alternation over a declared base subcategorization.
    pub fn add_alternation(&mut self, alt: AlternationType) -> Result<()> {
        if self.is_frozen() {
            return Err(Error::FrozenKb);
        }
        if self.syntax.alternations.iter().any(|a| a.name == alt.name) {
            return Err(Error::DuplicateAlternation(alt.name));
        }
        if self.concepts.contains_key(&alt.name) {
            return Err(Error::DuplicateName(alt.name));
        }
        let base = self
            .subcategorization(&alt.base)
            .ok_or_else(|| Error::UnknownSubcategorization(alt.base.clone()))?;
        for gf in alt.pattern.gfs() {
            if !base.gfs.contains(gf) {
                return Err(Error::InvalidLinkingPattern {
                    alternation: alt.name.clone(),
                    reason: format!("`{}` is not part of subcategorization `{}`", gf, alt.base),
                });
            }
        }
        self.syntax.alternations.push(alt);
        Ok(())
    }

    pub fn alternation(&self, name: &str) -> Option<&AlternationType> {
        self.syntax.alternations.iter().find(|a| a.name == name)
    }

    pub fn alternations(&self) -> &[AlternationType] {
        &self.syntax.alternations
    }

    fn validate_sentence(&self, s: &AnalyzedSentence) -> Result<()> {
        if !s.gfs.contains_key(SUBJ) {
            return Err(Error::MalformedSentence(
                s.id.clone(),
                "no subject function bound".to_string(),
            ));
        }
        for gf in s.gfs.keys() {
            if !self.syntax.gf_inventory.contains(gf) {
                return Err(Error::UnknownGrammaticalFunction(gf.clone()));
            }
        }
        if s.prep.is_some() && !s.gfs.contains_key(PPO) {
            return Err(Error::MalformedSentence(
                s.id.clone(),
                "preposition tag without a ppo function".to_string(),
            ));
        }
        Ok(())
    }

    /// The unique subcategorization whose grammatical-function set equals
    /// the sentence's bound functions; a matching preposition constraint
    /// beats an unconstrained frame.
    pub fn detect_subcategorization(
        &self,
        s: &AnalyzedSentence,
    ) -> Result<&SubcategorizationType> {
        self.validate_sentence(s)?;
        let matching: Vec<&SubcategorizationType> = self
            .syntax
            .subcats
            .iter()
            .filter(|sc| sc.accepts(s))
            .collect();
        matching
            .iter()
            .find(|sc| sc.prep.is_some())
            .or_else(|| matching.first())
            .copied()
            .ok_or_else(|| Error::NoSubcategorization(s.id.clone()))
    }

    /// Every sense of the verb that links legally against the fillers,
    /// given in event-argument order: all required arguments filled, every
    /// filler satisfying its slot restriction. Sense declaration order is
    /// preserved; an empty result means no legal linking.
    pub fn legal_linking(&self, verb: &str, fillers: &[String]) -> Result<Vec<String>> {
        let entry = self
            .verb(verb)
            .ok_or_else(|| Error::UnknownVerb(verb.to_string()))?;
        for f in fillers {
            if self.noun(f).is_none() {
                return Err(Error::UnknownLemma(f.clone()));
            }
        }
        let mut senses = Vec::new();
        'senses: for sense in &entry.senses {
            let event = self.event(sense).expect("verb senses resolve");
            if fillers.len() > event.arity() {
                continue;
            }
            for (i, slot) in event.slots.iter().enumerate() {
                match fillers.get(i) {
                    Some(filler) => {
                        if !self.satisfies(filler, &slot.restriction)? {
                            continue 'senses;
                        }
                    }
                    None => {
                        if slot.required {
                            continue 'senses;
                        }
                    }
                }
            }
            senses.push(sense.clone());
        }
        Ok(senses)
    }

    /// Classify a sentence: detect the subcategorization, build its ABox
    /// individual in a private scratch population, fire the linking rules,
    /// and read back the matched alternations with their filled event
    /// instances and revealed senses.
    pub fn classify_sentence(&self, s: &AnalyzedSentence) -> Result<SentenceReport> {
        self.require_frozen()?;
        self.validate_sentence(s)?;
        let verb = self
            .verb(&s.verb)
            .ok_or_else(|| Error::UnknownVerb(s.verb.clone()))?
            .clone();
        for lemma in s.gfs.values() {
            if self.noun(lemma).is_none() {
                return Err(Error::UnknownLemma(lemma.clone()));
            }
        }
        let subcat = self.detect_subcategorization(s)?.name.clone();

        let mut scratch = self.scratch();
        if let Some(p) = &s.prep {
            scratch.ensure_individual(&prep_individual(p));
        }
        let mut ind = Individual::new(s.id.clone())
            .assert_concept(ConceptExpression::named(crate::kr::SENTENCE))
            .with_filler(PRED, verb_individual(&s.verb));
        for (gf, lemma) in &s.gfs {
            ind = ind.with_filler(gf.clone(), lemma.clone());
        }
        match &s.prep {
            Some(p) => ind = ind.with_filler(PREP, prep_individual(p)),
            None => {
                ind = ind.assert_concept(ConceptExpression::and(vec![Atom::AtMost(
                    0,
                    PREP.to_string(),
                )]))
            }
        }
        let mut closed = Vec::new();
        for gf in &self.syntax.gf_inventory {
            if !s.gfs.contains_key(gf) {
                closed.push(Atom::AtMost(0, gf.clone()));
            }
        }
        if !closed.is_empty() {
            ind = ind.assert_concept(ConceptExpression::and(closed));
        }
        scratch.add_individual(ind)?;
        let fired = scratch.fire_rules(&s.id)?;

        let alternations: Vec<String> = fired
            .derived
            .iter()
            .filter(|name| {
                self.alternation(name)
                    .map(|a| a.base == subcat)
                    .unwrap_or(false)
            })
            .cloned()
            .collect();

        let mut events = Vec::new();
        let mut senses_seen: BTreeSet<String> = BTreeSet::new();
        for alt in &alternations {
            let instance = event_individual(&s.id, alt);
            let derived = scratch.classify(&instance)?;
            let instance_ind = scratch
                .individual(&instance)
                .expect("linking rule created the instance")
                .clone();
            let mut arguments = Vec::new();
            for i in 1..=crate::lexicon::MAX_EVENT_ARGS {
                match instance_ind
                    .fillers
                    .get(&arg_attr(i))
                    .and_then(|fs| fs.iter().next())
                {
                    Some(f) => arguments.push(f.clone()),
                    None => break,
                }
            }
            let mut bindings = Vec::new();
            for sense in &verb.senses {
                if !derived.contains(sense) {
                    continue;
                }
                senses_seen.insert(sense.clone());
                let event = self.event(sense).expect("verb senses resolve");
                let fillers = event
                    .slots
                    .iter()
                    .enumerate()
                    .filter_map(|(i, slot)| {
                        arguments
                            .get(i)
                            .map(|f| (slot.label.clone(), f.clone()))
                    })
                    .collect();
                bindings.push(SenseBinding {
                    sense: sense.clone(),
                    fillers,
                });
            }
            events.push(EventInstanceReport {
                alternation: alt.clone(),
                individual: instance,
                arguments,
                senses: bindings,
            });
        }
        let senses = verb
            .senses
            .iter()
            .filter(|s| senses_seen.contains(*s))
            .cloned()
            .collect();
        Ok(SentenceReport {
            id: s.id.clone(),
            verb: s.verb.clone(),
            label: None,
            text: s.text.clone(),
            subcategorization: subcat,
            alternations,
            senses,
            events,
        })
    }
}

/// Build the sentence-classification machinery into the base. Called once
/// by [`Kb::freeze`], after which the grammatical-function inventory and
/// the declared frames are final.
pub(crate) fn materialize(kb: &mut Kb) -> Result<()> {
    let inventory = kb.syntax.gf_inventory.clone();
    for sc in kb.syntax.subcats.clone() {
        let mut atoms = vec![Atom::ConceptRef(crate::kr::SENTENCE.to_string())];
        for gf in &inventory {
            if sc.gfs.contains(gf) {
                atoms.push(Atom::AtLeast(1, gf.clone()));
            } else {
                atoms.push(Atom::AtMost(0, gf.clone()));
            }
        }
        if let Some(p) = &sc.prep {
            atoms.push(Atom::Fills(PREP.to_string(), prep_individual(p)));
        }
        kb.classify_concept(ConceptDefinition::defined(
            sc.name.clone(),
            ConceptExpression::and(atoms),
        ))?;
    }
    for alt in kb.syntax.alternations.clone() {
        let test_name = format!("legal-linking:{}", alt.name);
        let pattern = alt.pattern.clone();
        let test: TestProc = Arc::new(move |ctx, ind| {
            let verb = match ind
                .fillers
                .get(PRED)
                .and_then(|fs| fs.iter().next())
                .and_then(|v| v.strip_prefix("verb:"))
            {
                Some(v) => v.to_string(),
                None => return false,
            };
            let mut fillers = Vec::with_capacity(pattern.len());
            for gf in pattern.gfs() {
                match ind.fillers.get(gf).and_then(|fs| fs.iter().next()) {
                    Some(f) => fillers.push(f.clone()),
                    None => return false,
                }
            }
            ctx.kb()
                .legal_linking(&verb, &fillers)
                .map(|senses| !senses.is_empty())
                .unwrap_or(false)
        });
        kb.register_test(&test_name, test)?;

        kb.classify_concept(ConceptDefinition::defined(
            alt.name.clone(),
            ConceptExpression::and(vec![
                Atom::ConceptRef(alt.base.clone()),
                Atom::Test(test_name),
            ]),
        ))?;

        let pattern = alt.pattern.clone();
        let alt_name = alt.name.clone();
        let consequent = Arc::new(move |_: &crate::kr::Scratch, ind: &Individual| {
            let instance = event_individual(&ind.name, &alt_name);
            let mut out = vec![
                Assertion::NewIndividual(instance.clone()),
                Assertion::AddFiller {
                    individual: ind.name.clone(),
                    attribute: DENOTES.to_string(),
                    filler: instance.clone(),
                },
                Assertion::AssertConcept {
                    individual: instance.clone(),
                    expression: ConceptExpression::named(crate::kr::EVENT),
                },
            ];
            let mut unfilled = Vec::new();
            for i in 1..=crate::lexicon::MAX_EVENT_ARGS {
                match pattern.gfs().get(i - 1) {
                    Some(gf) => {
                        if let Some(f) = ind.fillers.get(gf).and_then(|fs| fs.iter().next()) {
                            out.push(Assertion::AddFiller {
                                individual: instance.clone(),
                                attribute: arg_attr(i),
                                filler: f.clone(),
                            });
                        }
                    }
                    None => unfilled.push(Atom::AtMost(0, arg_attr(i))),
                }
            }
            if !unfilled.is_empty() {
                out.push(Assertion::AssertConcept {
                    individual: instance,
                    expression: ConceptExpression::and(unfilled),
                });
            }
            out
        });
        kb.register_rule(ForwardRule {
            name: format!("link:{}", alt.name),
            trigger: alt.name.clone(),
            consequent,
        })?;
    }
    Ok(())
}

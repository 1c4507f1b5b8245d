//! Forward rules: monotone procedures attached to trigger concepts,
//! applied to scratch individuals until a fixpoint.

use std::fmt;
use std::sync::Arc;

use super::abox::{Individual, Scratch};
use super::expr::ConceptExpression;
use crate::error::{Error, Result};

/// One additive consequence of a rule firing. Rules only ever add
/// assertions; nothing is retracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    /// Bring a fresh individual into existence (no-op if present).
    NewIndividual(String),
    /// Assert a concept expression of an individual.
    AssertConcept {
        individual: String,
        expression: ConceptExpression,
    },
    /// Add an attribute filler to an individual.
    AddFiller {
        individual: String,
        attribute: String,
        filler: String,
    },
}

/// Consequent procedure: given the current population and the matched
/// individual, produce the assertions to add. Must be pure — the engine
/// applies the returned assertions itself.
pub type RuleProc = Arc<dyn Fn(&Scratch, &Individual) -> Vec<Assertion> + Send + Sync>;

/// A forward rule fires on every individual provably belonging to its
/// trigger concept.
#[derive(Clone)]
pub struct ForwardRule {
    pub name: String,
    pub trigger: String,
    pub consequent: RuleProc,
}

impl fmt::Debug for ForwardRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ForwardRule")
            .field("name", &self.name)
            .field("trigger", &self.trigger)
            .finish()
    }
}

impl<'a> Scratch<'a> {
    /// Apply every registered rule to `root` (and to individuals touched
    /// along the way) until no rule adds anything new, then reclassify
    /// `root`.
    ///
    /// Rules are additive, so the fixpoint is unique regardless of
    /// registration order. Aborts with [`Error::RuleLimitExceeded`] after
    /// the configured round cap.
    pub fn fire_rules(&mut self, root: &str) -> Result<Individual> {
        if self.individual(root).is_none() {
            return Err(Error::UnknownIndividual(root.to_string()));
        }
        let mut targets: Vec<String> = vec![root.to_string()];
        let limit = self.kb().rule_limit();
        let mut reached_fixpoint = false;
        for _round in 0..limit {
            let mut changed = false;
            let rules = self.kb().rules.clone();
            for rule in &rules {
                let trigger = self.kb().concept_nf(&rule.trigger)?.clone();
                for name in targets.clone() {
                    let ind = match self.individual(&name) {
                        Some(i) => i.clone(),
                        None => continue,
                    };
                    if !super::abox::satisfies(self.kb(), self, &ind, &trigger)? {
                        continue;
                    }
                    for assertion in (rule.consequent)(self, &ind) {
                        if self.apply(&assertion, &mut targets)? {
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                reached_fixpoint = true;
                break;
            }
        }
        if !reached_fixpoint {
            return Err(Error::RuleLimitExceeded(limit));
        }
        self.classify(root)?;
        Ok(self
            .individual(root)
            .expect("root present")
            .clone())
    }

    fn apply(&mut self, assertion: &Assertion, targets: &mut Vec<String>) -> Result<bool> {
        let (changed, touched) = match assertion {
            Assertion::NewIndividual(name) => {
                if self.contains(name) {
                    (false, name.clone())
                } else {
                    self.ensure_individual(name);
                    (true, name.clone())
                }
            }
            Assertion::AssertConcept {
                individual,
                expression,
            } => (
                self.assert_concept(individual, expression.clone())?,
                individual.clone(),
            ),
            Assertion::AddFiller {
                individual,
                attribute,
                filler,
            } => (
                self.add_filler(individual, attribute, filler)?,
                individual.clone(),
            ),
        };
        if !targets.contains(&touched) {
            targets.push(touched);
        }
        Ok(changed)
    }
}

//! Structured, machine-readable results of the analysis operations.
//! Everything here serializes deterministically: collections are sorted
//! and sequence fields carry a documented order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Corpus label of a sentence. The classifier itself is label-blind;
/// labels drive only the corpus-level membership tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Good,
    Bad,
}

/// One sense an event instance classified under, with its argument
/// bindings in slot order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseBinding {
    /// Event (sense) name.
    pub sense: String,
    /// `(slot label, filler)` pairs in argument order; unfilled optional
    /// slots are omitted.
    pub fillers: Vec<(String, String)>,
}

/// The event instance created for one matched alternation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventInstanceReport {
    pub alternation: String,
    /// ABox name of the instance.
    pub individual: String,
    /// Fillers by argument position (`arg1`, `arg2`, ...).
    pub arguments: Vec<String>,
    /// Senses revealed by classifying the instance, in the verb's sense
    /// declaration order.
    pub senses: Vec<SenseBinding>,
}

/// Classification result for one analyzed sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceReport {
    pub id: String,
    pub verb: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<Label>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub text: Option<String>,
    /// The detected subcategorization.
    pub subcategorization: String,
    /// Matched alternation types, sorted by name; empty when the sentence
    /// classifies only as its subcategorization.
    pub alternations: Vec<String>,
    /// Senses linking legally under some matched alternation, in the
    /// verb's sense declaration order.
    pub senses: Vec<String>,
    /// One entry per matched alternation, aligned with `alternations`.
    pub events: Vec<EventInstanceReport>,
}

/// Outcome of classifying a verb's corpus against a set of verb classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbClassification {
    pub lemma: String,
    /// Classes whose membership tests all passed, sorted by name.
    pub matches: Vec<String>,
    /// Present exactly when no class matched.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proposal: Option<NewClassProposal>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

/// The new-class flag: the verb's observed alternation signature, emitted
/// so the linguist can paste a candidate class definition back into the
/// knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewClassProposal {
    /// Alternations instantiated in the good corpus.
    pub good_alternations: BTreeSet<String>,
    /// Subcategorizations appearing as most-specific classification in
    /// the bad corpus (missing-argument ungrammaticalities).
    pub bad_subcategorizations: BTreeSet<String>,
}

impl NewClassProposal {
    /// Candidate class definition in the knowledge-base file syntax.
    pub fn render(&self, class_name: &str) -> String {
        let good = if self.good_alternations.is_empty() {
            "-".to_string()
        } else {
            self.good_alternations
                .iter()
                .cloned()
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("class {} good {} bad -", class_name, good)
    }
}

/// Severity of a verb-class consistency finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// A definition-level contradiction.
    Error,
    /// Suspicious but usable.
    Warning,
    /// Informational observation.
    Note,
}

/// One verb-class consistency finding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassFinding {
    /// A class lists the same alternation as both good and bad.
    Overlap {
        class: String,
        alternations: BTreeSet<String>,
    },
    /// Two classes have identical good and bad sets.
    Duplicate { first: String, second: String },
    /// `specific`'s good set strictly contains `general`'s and the two
    /// contradict nowhere, so `general` describes a superclass.
    SubsumptionNote { general: String, specific: String },
}

impl ClassFinding {
    pub fn severity(&self) -> Severity {
        match self {
            ClassFinding::Overlap { .. } => Severity::Error,
            ClassFinding::Duplicate { .. } => Severity::Warning,
            ClassFinding::SubsumptionNote { .. } => Severity::Note,
        }
    }
}

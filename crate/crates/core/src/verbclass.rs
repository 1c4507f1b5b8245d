//! Semantic verb classes: good/bad alternation signatures, the two
//! set-membership tests over corpora, verb classification against the
//! declared classes, and class-definition consistency checking.
//!
//! Both membership tests quantify only over the supplied corpus, never
//! the knowledge base at large.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kr::Kb;
use crate::report::{ClassFinding, NewClassProposal, SentenceReport, VerbClassification};
use crate::sentence::AnalyzedSentence;

/// A verb class defined by the alternations its members permit (good) and
/// prohibit (bad). Overlapping sets are representable; the consistency
/// checker reports them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbClass {
    pub name: String,
    pub good: BTreeSet<String>,
    pub bad: BTreeSet<String>,
}

impl VerbClass {
    pub fn new<I, J, S, T>(name: impl Into<String>, good: I, bad: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        VerbClass {
            name: name.into(),
            good: good.into_iter().map(Into::into).collect(),
            bad: bad.into_iter().map(Into::into).collect(),
        }
    }
}

/// Grammaticality-labelled example sentences for one verb.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub lemma: String,
    pub good: Vec<AnalyzedSentence>,
    pub bad: Vec<AnalyzedSentence>,
}

impl Corpus {
    pub fn new(lemma: impl Into<String>) -> Self {
        Corpus {
            lemma: lemma.into(),
            good: Vec::new(),
            bad: Vec::new(),
        }
    }

    fn check(&self, s: &AnalyzedSentence) -> Result<()> {
        if s.verb != self.lemma {
            return Err(Error::CorpusLemmaMismatch {
                id: s.id.clone(),
                found: s.verb.clone(),
                expected: self.lemma.clone(),
            });
        }
        Ok(())
    }

    pub fn add_good(&mut self, s: AnalyzedSentence) -> Result<()> {
        self.check(&s)?;
        self.good.push(s);
        Ok(())
    }

    pub fn add_bad(&mut self, s: AnalyzedSentence) -> Result<()> {
        self.check(&s)?;
        self.bad.push(s);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.good.is_empty() && self.bad.is_empty()
    }
}

impl Kb {
    /// Classify a sentence, treating "no subcategorization matches" as an
    /// empty outcome rather than an error; corpus scans skip such
    /// sentences.
    fn try_classify(&self, s: &AnalyzedSentence) -> Result<Option<SentenceReport>> {
        match self.classify_sentence(s) {
            Ok(report) => Ok(Some(report)),
            Err(Error::NoSubcategorization(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn scan(&self, sentences: &[AnalyzedSentence]) -> Result<Vec<SentenceReport>> {
        let mut reports = Vec::new();
        for s in sentences {
            if let Some(r) = self.try_classify(s)? {
                reports.push(r);
            }
        }
        Ok(reports)
    }

    /// Does at least one sentence classify under the alternation?
    pub fn have_instances_of(
        &self,
        sentences: &[AnalyzedSentence],
        alternation: &str,
    ) -> Result<bool> {
        self.require_frozen()?;
        if self.alternation(alternation).is_none() {
            return Err(Error::UnknownAlternation(alternation.to_string()));
        }
        for s in sentences {
            if let Some(report) = self.try_classify(s)? {
                if report.alternations.iter().any(|a| a == alternation) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Does at least one (bad) sentence have the subcategorization as its
    /// most specific classification, i.e. match the frame but no
    /// alternation? This is the signature of a missing-argument
    /// ungrammaticality.
    pub fn have_no_instances_of(
        &self,
        bad_sentences: &[AnalyzedSentence],
        subcategorization: &str,
    ) -> Result<bool> {
        self.require_frozen()?;
        if self.subcategorization(subcategorization).is_none() {
            return Err(Error::UnknownSubcategorization(subcategorization.to_string()));
        }
        for s in bad_sentences {
            if let Some(report) = self.try_classify(s)? {
                if report.subcategorization == subcategorization && report.alternations.is_empty()
                {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Match the verb's corpus against the class definitions.
    ///
    /// A class matches when every good alternation is instantiated in the
    /// good corpus, no bad alternation is, and — whenever the bad corpus
    /// contains sentences in a bad alternation's base frame — the bad
    /// corpus actually exhibits that alternation. Absence from the good
    /// corpus is the necessary condition; bad-corpus evidence strengthens
    /// it but is not required, since corpora rarely include negative
    /// examples.
    ///
    /// With no matching class the result carries the new-class proposal:
    /// the alternations observed in the good corpus plus the
    /// subcategorizations left as most-specific classifications in the
    /// bad corpus.
    pub fn classify_verb(
        &self,
        corpus: &Corpus,
        classes: &[VerbClass],
    ) -> Result<VerbClassification> {
        self.require_frozen()?;
        for class in classes {
            for alt in class.good.iter().chain(&class.bad) {
                if self.alternation(alt).is_none() {
                    return Err(Error::UnknownAlternation(alt.clone()));
                }
            }
        }
        let mut warnings = Vec::new();
        if corpus.is_empty() {
            warnings.push(format!("corpus for `{}` contains no sentences", corpus.lemma));
        }
        for s in corpus.good.iter().chain(&corpus.bad) {
            if self.try_classify(s)?.is_none() {
                warnings.push(format!(
                    "sentence `{}` matches no declared subcategorization",
                    s.id
                ));
            }
        }
        let good_reports = self.scan(&corpus.good)?;
        let bad_reports = self.scan(&corpus.bad)?;
        let observed_good: BTreeSet<String> = good_reports
            .iter()
            .flat_map(|r| r.alternations.iter().cloned())
            .collect();

        let mut matches = Vec::new();
        for class in classes {
            let all_good = class.good.iter().all(|g| observed_good.contains(g));
            let none_bad_in_good = class.bad.iter().all(|b| !observed_good.contains(b));
            let bad_evidence = class.bad.iter().all(|b| {
                let base = &self
                    .alternation(b)
                    .expect("validated above")
                    .base;
                let frame_present = bad_reports.iter().any(|r| &r.subcategorization == base);
                !frame_present || bad_reports.iter().any(|r| r.alternations.iter().any(|a| a == b))
            });
            if all_good && none_bad_in_good && bad_evidence {
                matches.push(class.name.clone());
            }
        }
        matches.sort();
        let proposal = if matches.is_empty() {
            Some(NewClassProposal {
                good_alternations: observed_good,
                bad_subcategorizations: bad_reports
                    .iter()
                    .filter(|r| r.alternations.is_empty())
                    .map(|r| r.subcategorization.clone())
                    .collect(),
            })
        } else {
            None
        };
        Ok(VerbClassification {
            lemma: corpus.lemma.clone(),
            matches,
            proposal,
            warnings,
        })
    }

    /// Report contradictory, duplicated, and subsumed class definitions.
    pub fn check_class_consistency(&self, classes: &[VerbClass]) -> Result<Vec<ClassFinding>> {
        for class in classes {
            for alt in class.good.iter().chain(&class.bad) {
                if self.alternation(alt).is_none() {
                    return Err(Error::UnknownAlternation(alt.clone()));
                }
            }
        }
        let mut findings = Vec::new();
        for class in classes {
            let overlap: BTreeSet<String> = class.good.intersection(&class.bad).cloned().collect();
            if !overlap.is_empty() {
                findings.push(ClassFinding::Overlap {
                    class: class.name.clone(),
                    alternations: overlap,
                });
            }
        }
        for (i, a) in classes.iter().enumerate() {
            for b in &classes[i + 1..] {
                if a.good == b.good && a.bad == b.bad {
                    let (first, second) = if a.name <= b.name {
                        (a.name.clone(), b.name.clone())
                    } else {
                        (b.name.clone(), a.name.clone())
                    };
                    findings.push(ClassFinding::Duplicate { first, second });
                }
            }
        }
        for specific in classes {
            for general in classes {
                if specific.name == general.name {
                    continue;
                }
                let strictly_contains = general.good.is_subset(&specific.good)
                    && general.good != specific.good;
                let no_contradiction = specific.good.is_disjoint(&general.bad)
                    && general.good.is_disjoint(&specific.bad);
                if strictly_contains && no_contradiction {
                    findings.push(ClassFinding::SubsumptionNote {
                        general: general.name.clone(),
                        specific: specific.name.clone(),
                    });
                }
            }
        }
        findings.sort();
        findings.dedup();
        Ok(findings)
    }
}

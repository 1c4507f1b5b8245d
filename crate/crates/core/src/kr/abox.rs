//! Individuals, the assertional store, and individual classification.
//!
//! Stored individuals live inside the knowledge base and are classified
//! when added. A [`Scratch`] overlays private individuals on a frozen
//! base so sentence classification can build per-call instances without
//! mutating shared state.

use std::collections::{BTreeMap, BTreeSet};

use super::expr::ConceptExpression;
use super::normal::{subsumes, NormalForm};
use super::taxonomy::TOP_ID;
use super::Kb;
use crate::error::{Error, Result};

/// A named individual: asserted concept expressions plus attribute
/// fillers, with the derived most-specific concept set of its latest
/// classification.
#[derive(Debug, Clone, Default)]
pub struct Individual {
    pub name: String,
    pub assertions: Vec<ConceptExpression>,
    pub fillers: BTreeMap<String, BTreeSet<String>>,
    /// Most-specific stored concepts from the latest classification; an
    /// antichain under subsumption.
    pub derived: BTreeSet<String>,
}

impl Individual {
    pub fn new(name: impl Into<String>) -> Self {
        Individual {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn assert_concept(mut self, expr: ConceptExpression) -> Self {
        self.assertions.push(expr);
        self
    }

    pub fn with_filler(mut self, attr: impl Into<String>, filler: impl Into<String>) -> Self {
        self.fillers
            .entry(attr.into())
            .or_default()
            .insert(filler.into());
        self
    }

    /// The individual's full description: asserted expressions conjoined
    /// with its known fillers.
    pub(crate) fn description(&self, kb: &Kb) -> Result<NormalForm> {
        let mut nf = NormalForm::top();
        for expr in &self.assertions {
            nf = nf.meet(
                &super::normal::normalize(expr, &kb.schema, &kb.concepts)?,
                &kb.schema,
            );
        }
        if !self.fillers.is_empty() {
            let mut extra = NormalForm::top();
            for (attr, fillers) in &self.fillers {
                kb.schema.cap(attr)?;
                let mut expr_atoms = Vec::new();
                for f in fillers {
                    expr_atoms.push(super::expr::Atom::Fills(attr.clone(), f.clone()));
                }
                let e = ConceptExpression::and(expr_atoms);
                extra = extra.meet(
                    &super::normal::normalize(&e, &kb.schema, &kb.concepts)?,
                    &kb.schema,
                );
            }
            nf = nf.meet(&extra, &kb.schema);
        }
        Ok(nf)
    }
}

/// Read access to a population of individuals.
pub(crate) trait IndividualLookup {
    fn get(&self, name: &str) -> Option<&Individual>;
}

impl IndividualLookup for BTreeMap<String, Individual> {
    fn get(&self, name: &str) -> Option<&Individual> {
        BTreeMap::get(self, name)
    }
}

/// Context handed to registered test procedures: the knowledge base plus
/// whichever individual population the classification runs against.
pub struct TestContext<'a> {
    pub(crate) kb: &'a Kb,
    pub(crate) lookup: &'a dyn IndividualLookup,
}

impl<'a> TestContext<'a> {
    pub fn kb(&self) -> &Kb {
        self.kb
    }

    pub fn individual(&self, name: &str) -> Option<&Individual> {
        self.lookup.get(name)
    }
}

/// Does the individual provably belong to the concept?
///
/// Structural conditions are checked first; a value restriction holds
/// either because an asserted restriction implies it or because the
/// attribute is closed (every filler is known) and each filler satisfies
/// it recursively. `Test` atoms are evaluated last, through the
/// registered procedures.
pub(crate) fn satisfies(
    kb: &Kb,
    lookup: &dyn IndividualLookup,
    ind: &Individual,
    concept: &NormalForm,
) -> Result<bool> {
    let desc = ind.description(kb)?;
    satisfies_desc(kb, lookup, ind, &desc, concept)
}

fn satisfies_desc(
    kb: &Kb,
    lookup: &dyn IndividualLookup,
    ind: &Individual,
    desc: &NormalForm,
    concept: &NormalForm,
) -> Result<bool> {
    if desc.is_bottom() {
        // An inconsistent individual provably belongs to everything.
        return Ok(true);
    }
    if concept.is_bottom() {
        return Ok(false);
    }
    if !concept.primitives.is_subset(&desc.primitives) {
        return Ok(false);
    }
    for (attr, rc) in &concept.attrs {
        let cap = kb.schema.cap_unchecked(attr);
        let rd = desc.attrs.get(attr).cloned().unwrap_or_else(|| {
            super::normal::AttrRestriction {
                min: 0,
                max: cap,
                value: NormalForm::top(),
                fillers: BTreeSet::new(),
            }
        });
        if rd.min < rc.min {
            return Ok(false);
        }
        match rc.max {
            Some(cm) => match rd.max {
                Some(dm) if dm <= cm => {}
                _ => return Ok(false),
            },
            None => {}
        }
        if !rc.fillers.is_subset(&rd.fillers) {
            return Ok(false);
        }
        if !rc.value.is_top() {
            let by_assertion = subsumes(&kb.schema, &rc.value, &rd.value);
            let provable = by_assertion || {
                // Closed attribute: every filler is known, so the value
                // restriction holds iff each filler satisfies it.
                let closed = rd.max == Some(rd.fillers.len() as u32);
                if closed {
                    let mut all = true;
                    for f in &rd.fillers {
                        let filler = lookup
                            .get(f)
                            .ok_or_else(|| Error::UnknownIndividual(f.clone()))?;
                        if !satisfies(kb, lookup, filler, &rc.value)? {
                            all = false;
                            break;
                        }
                    }
                    all
                } else {
                    false
                }
            };
            if !provable {
                return Ok(false);
            }
        }
    }
    for t in &concept.tests {
        if desc.tests.contains(t) {
            continue;
        }
        let proc = kb
            .tests
            .get(t)
            .ok_or_else(|| Error::UnregisteredTest(t.clone()))?;
        let ctx = TestContext { kb, lookup };
        if !proc(&ctx, ind) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Most-specific stored concepts the individual provably belongs to.
///
/// Walks the taxonomy top-down; satisfaction is upward-closed under
/// subsumption, so a node that fails prunes its whole subtree. Returns
/// every name of each most-specific node.
pub(crate) fn classify(
    kb: &Kb,
    lookup: &dyn IndividualLookup,
    ind: &Individual,
) -> Result<BTreeSet<String>> {
    let desc = ind.description(kb)?;
    let mut memo: BTreeMap<usize, bool> = BTreeMap::new();
    let mut check = |id: usize, memo: &mut BTreeMap<usize, bool>| -> Result<bool> {
        if let Some(&v) = memo.get(&id) {
            return Ok(v);
        }
        let v = satisfies_desc(kb, lookup, ind, &desc, &kb.taxonomy.node(id).nf)?;
        memo.insert(id, v);
        Ok(v)
    };
    let mut result: BTreeSet<usize> = BTreeSet::new();
    let mut stack = vec![TOP_ID];
    let mut expanded = BTreeSet::new();
    while let Some(id) = stack.pop() {
        if !expanded.insert(id) {
            continue;
        }
        let mut lower = Vec::new();
        for &c in &kb.taxonomy.node(id).children {
            if check(c, &mut memo)? {
                lower.push(c);
            }
        }
        if lower.is_empty() {
            result.insert(id);
        } else {
            stack.extend(lower);
        }
    }
    let mut names = BTreeSet::new();
    for id in result {
        names.extend(kb.taxonomy.node(id).names.iter().cloned());
    }
    Ok(names)
}

/// A private individual population layered over a frozen knowledge base.
///
/// Individuals added here shadow nothing in the base (names must be
/// fresh); lookups fall through to the stored ABox. Each sentence
/// classification builds its own scratch, so concurrent queries never
/// contend.
pub struct Scratch<'a> {
    kb: &'a Kb,
    local: BTreeMap<String, Individual>,
}

impl<'a> IndividualLookup for Scratch<'a> {
    fn get(&self, name: &str) -> Option<&Individual> {
        self.local
            .get(name)
            .or_else(|| self.kb.individuals.get(name))
    }
}

impl<'a> Scratch<'a> {
    pub(crate) fn new(kb: &'a Kb) -> Self {
        Scratch {
            kb,
            local: BTreeMap::new(),
        }
    }

    pub fn kb(&self) -> &Kb {
        self.kb
    }

    pub fn individual(&self, name: &str) -> Option<&Individual> {
        IndividualLookup::get(self, name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.individual(name).is_some()
    }

    pub fn add_individual(&mut self, ind: Individual) -> Result<()> {
        if self.contains(&ind.name) {
            return Err(Error::DuplicateIndividual(ind.name));
        }
        for expr in &ind.assertions {
            super::normal::normalize(expr, &self.kb.schema, &self.kb.concepts)?;
        }
        for (attr, fillers) in &ind.fillers {
            self.kb.schema.cap(attr)?;
            for f in fillers {
                if !self.contains(f) && f != &ind.name {
                    return Err(Error::UnknownIndividual(f.clone()));
                }
            }
        }
        self.local.insert(ind.name.clone(), ind);
        Ok(())
    }

    pub(crate) fn ensure_individual(&mut self, name: &str) {
        if !self.contains(name) {
            self.local
                .insert(name.to_string(), Individual::new(name.to_string()));
        }
    }

    pub(crate) fn assert_concept(&mut self, name: &str, expr: ConceptExpression) -> Result<bool> {
        super::normal::normalize(&expr, &self.kb.schema, &self.kb.concepts)?;
        let ind = self.local_mut(name)?;
        if ind.assertions.contains(&expr) {
            return Ok(false);
        }
        ind.assertions.push(expr);
        Ok(true)
    }

    pub(crate) fn add_filler(&mut self, name: &str, attr: &str, filler: &str) -> Result<bool> {
        self.kb.schema.cap(attr)?;
        if !self.contains(filler) {
            return Err(Error::UnknownIndividual(filler.to_string()));
        }
        let ind = self.local_mut(name)?;
        Ok(ind
            .fillers
            .entry(attr.to_string())
            .or_default()
            .insert(filler.to_string()))
    }

    /// Fetch a mutable local copy, materializing stored individuals on
    /// first write so the base is never touched.
    fn local_mut(&mut self, name: &str) -> Result<&mut Individual> {
        if !self.local.contains_key(name) {
            match self.kb.individuals.get(name) {
                Some(stored) => {
                    self.local.insert(name.to_string(), stored.clone());
                }
                None => return Err(Error::UnknownIndividual(name.to_string())),
            }
        }
        Ok(self.local.get_mut(name).expect("just inserted"))
    }

    /// Classify one individual of this population; updates its recorded
    /// derived set when it is scratch-local.
    pub fn classify(&mut self, name: &str) -> Result<BTreeSet<String>> {
        let ind = self
            .individual(name)
            .ok_or_else(|| Error::UnknownIndividual(name.to_string()))?
            .clone();
        let derived = classify(self.kb, self, &ind)?;
        if let Some(local) = self.local.get_mut(name) {
            local.derived = derived.clone();
        }
        Ok(derived)
    }

    pub(crate) fn satisfies_concept(&self, name: &str, concept: &NormalForm) -> Result<bool> {
        let ind = self
            .individual(name)
            .ok_or_else(|| Error::UnknownIndividual(name.to_string()))?;
        satisfies(self.kb, self, ind, concept)
    }

    pub(crate) fn local_names(&self) -> Vec<String> {
        self.local.keys().cloned().collect()
    }
}

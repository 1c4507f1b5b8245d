//! Canonical normal forms for concept expressions and the structural
//! subsumption test over them.
//!
//! A normal form records, per expression: the transitively closed set of
//! primitives it implies, one merged restriction per attribute (value
//! restriction, `[min, max]` filler bounds, known fillers), the set of
//! procedural test atoms, and a coherence flag. Defined concepts are
//! expanded away; primitives contribute themselves plus everything their
//! necessary conditions imply.
//!
//! Canonicalization guarantees that two expressions denote the same
//! concept exactly when their normal forms are structurally equal: all
//! incoherent forms collapse to a single bottom form, no-op attribute
//! entries are dropped, and a `max = 0` entry clears its (vacuous) value
//! restriction.

use std::collections::{BTreeMap, BTreeSet};

use super::expr::{Atom, ConceptExpression};
use super::{ConceptTable, Schema};
use crate::error::{Error, Result};

/// Merged restriction on a single attribute inside a [`NormalForm`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrRestriction {
    /// Least number of fillers, including those implied by `fillers`.
    pub min: u32,
    /// Greatest number of fillers; `None` is unbounded. Never exceeds the
    /// attribute's declared cap (1 for functional attributes).
    pub max: Option<u32>,
    /// Concept every filler must belong to; `top` when unconstrained.
    pub value: NormalForm,
    /// Individuals known to fill the attribute.
    pub fillers: BTreeSet<String>,
}

impl AttrRestriction {
    fn unconstrained(cap: Option<u32>) -> Self {
        AttrRestriction {
            min: 0,
            max: cap,
            value: NormalForm::top(),
            fillers: BTreeSet::new(),
        }
    }

    fn is_default(&self, cap: Option<u32>) -> bool {
        self.min == 0 && self.max == cap && self.value.is_top() && self.fillers.is_empty()
    }
}

/// Canonical form of a concept expression, built against a knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm {
    pub primitives: BTreeSet<String>,
    pub attrs: BTreeMap<String, AttrRestriction>,
    pub tests: BTreeSet<String>,
    pub coherent: bool,
}

impl NormalForm {
    /// The form of the universal concept: the empty conjunction.
    pub fn top() -> Self {
        NormalForm {
            primitives: BTreeSet::new(),
            attrs: BTreeMap::new(),
            tests: BTreeSet::new(),
            coherent: true,
        }
    }

    /// The single canonical incoherent form.
    pub fn bottom() -> Self {
        NormalForm {
            primitives: BTreeSet::new(),
            attrs: BTreeMap::new(),
            tests: BTreeSet::new(),
            coherent: false,
        }
    }

    pub fn is_top(&self) -> bool {
        self.coherent && self.primitives.is_empty() && self.attrs.is_empty() && self.tests.is_empty()
    }

    pub fn is_bottom(&self) -> bool {
        !self.coherent
    }

    /// Conjunction of two normal forms, re-canonicalized.
    pub(crate) fn meet(&self, other: &NormalForm, schema: &Schema) -> NormalForm {
        if self.is_bottom() || other.is_bottom() {
            return NormalForm::bottom();
        }
        let mut out = self.clone();
        out.primitives.extend(other.primitives.iter().cloned());
        out.tests.extend(other.tests.iter().cloned());
        for (attr, r) in &other.attrs {
            let cap = schema.cap_unchecked(attr);
            let entry = out
                .attrs
                .entry(attr.clone())
                .or_insert_with(|| AttrRestriction::unconstrained(cap));
            entry.min = entry.min.max(r.min);
            entry.max = match (entry.max, r.max) {
                (None, m) | (m, None) => m,
                (Some(a), Some(b)) => Some(a.min(b)),
            };
            entry.value = entry.value.meet(&r.value, schema);
            entry.fillers.extend(r.fillers.iter().cloned());
        }
        out.finish(schema)
    }

    /// Recompute derived bounds, the coherence flag, and canonical shape.
    fn finish(mut self, schema: &Schema) -> NormalForm {
        let mut coherent = !has_disjoint_clash(&self.primitives, schema);
        for (attr, r) in self.attrs.iter_mut() {
            let cap = schema.cap_unchecked(attr);
            r.max = match (r.max, cap) {
                (None, c) => c,
                (Some(m), None) => Some(m),
                (Some(m), Some(c)) => Some(m.min(c)),
            };
            r.min = r.min.max(r.fillers.len() as u32);
            if let Some(max) = r.max {
                if r.min > max {
                    coherent = false;
                }
            }
            if r.value.is_bottom() {
                coherent = false;
            }
            if r.max == Some(0) {
                // No filler can exist, so the value restriction is vacuous.
                r.value = NormalForm::top();
            }
        }
        if !coherent {
            return NormalForm::bottom();
        }
        self.attrs
            .retain(|attr, r| !r.is_default(schema.cap_unchecked(attr)));
        self.coherent = true;
        self
    }

    /// Rebuild a concept expression denoting exactly this form.
    pub fn denormalize(&self) -> ConceptExpression {
        if self.is_bottom() {
            return ConceptExpression::named(super::BOTTOM);
        }
        let mut atoms = Vec::new();
        for p in &self.primitives {
            atoms.push(Atom::ConceptRef(p.clone()));
        }
        for (attr, r) in &self.attrs {
            if !r.value.is_top() {
                atoms.push(Atom::All(attr.clone(), Box::new(r.value.denormalize())));
            }
            if r.min > 0 {
                atoms.push(Atom::AtLeast(r.min, attr.clone()));
            }
            if let Some(max) = r.max {
                atoms.push(Atom::AtMost(max, attr.clone()));
            }
            for f in &r.fillers {
                atoms.push(Atom::Fills(attr.clone(), f.clone()));
            }
        }
        for t in &self.tests {
            atoms.push(Atom::Test(t.clone()));
        }
        ConceptExpression::and(atoms)
    }
}

/// Two primitives of the same disjointness group cannot co-occur.
fn has_disjoint_clash(primitives: &BTreeSet<String>, schema: &Schema) -> bool {
    let mut seen: BTreeMap<&str, &str> = BTreeMap::new();
    for p in primitives {
        if let Some(group) = schema.disjoint_group(p) {
            if let Some(prev) = seen.insert(group, p) {
                if prev != p {
                    return true;
                }
            }
        }
    }
    false
}

/// Expand and canonicalize an expression against declared concepts.
///
/// Defined-concept references are replaced by their expansions; primitive
/// references contribute the primitive itself plus its necessary
/// conditions. Fails with [`Error::UnknownName`] for undeclared names and
/// [`Error::CyclicDefinition`] when expansion reaches a concept whose
/// normal form is still being computed.
pub(crate) fn normalize(
    expr: &ConceptExpression,
    schema: &Schema,
    concepts: &ConceptTable,
) -> Result<NormalForm> {
    let mut nf = NormalForm::top();
    for atom in &expr.atoms {
        let contribution = match atom {
            Atom::ConceptRef(name) => match concepts.get(name) {
                Some(stored) => match &stored.nf {
                    Some(referenced) => referenced.clone(),
                    None => return Err(Error::CyclicDefinition(name.clone())),
                },
                None => return Err(Error::UnknownName(name.clone())),
            },
            Atom::All(attr, inner) => {
                let cap = schema.cap(attr)?;
                let mut r = AttrRestriction::unconstrained(cap);
                r.value = normalize(inner, schema, concepts)?;
                single_attr(attr, r)
            }
            Atom::AtLeast(n, attr) => {
                let cap = schema.cap(attr)?;
                let mut r = AttrRestriction::unconstrained(cap);
                r.min = *n;
                single_attr(attr, r)
            }
            Atom::AtMost(n, attr) => {
                let cap = schema.cap(attr)?;
                let mut r = AttrRestriction::unconstrained(cap);
                r.max = Some(match cap {
                    Some(c) => (*n).min(c),
                    None => *n,
                });
                single_attr(attr, r)
            }
            Atom::Fills(attr, ind) => {
                let cap = schema.cap(attr)?;
                let mut r = AttrRestriction::unconstrained(cap);
                r.fillers.insert(ind.clone());
                single_attr(attr, r)
            }
            Atom::Test(name) => {
                nf.tests.insert(name.clone());
                continue;
            }
        };
        nf = nf.meet(&contribution, schema);
    }
    Ok(nf.finish(schema))
}

fn single_attr(attr: &str, r: AttrRestriction) -> NormalForm {
    let mut nf = NormalForm::top();
    nf.attrs.insert(attr.to_string(), r);
    nf
}

/// Structural subsumption: does `a` subsume `b` (is `a` at least as
/// general)?
///
/// True exactly when every atom of `a` is accounted for by `b`: `a`'s
/// primitives and tests are subsets of `b`'s, and for each attribute `a`
/// restricts, `a`'s bounds contain `b`'s, `a`'s value restriction
/// subsumes `b`'s, and `a`'s known fillers all appear in `b`. Everything
/// subsumes an incoherent `b`.
pub(crate) fn subsumes(schema: &Schema, a: &NormalForm, b: &NormalForm) -> bool {
    if b.is_bottom() {
        return true;
    }
    if a.is_bottom() {
        return false;
    }
    if !a.primitives.is_subset(&b.primitives) || !a.tests.is_subset(&b.tests) {
        return false;
    }
    for (attr, ra) in &a.attrs {
        let cap = schema.cap_unchecked(attr);
        let default;
        let rb = match b.attrs.get(attr) {
            Some(r) => r,
            None => {
                default = AttrRestriction::unconstrained(cap);
                &default
            }
        };
        if ra.min > rb.min {
            return false;
        }
        match (ra.max, rb.max) {
            (Some(am), Some(bm)) if bm > am => return false,
            (Some(_), None) => return false,
            _ => {}
        }
        if !subsumes(schema, &ra.value, &rb.value) {
            return false;
        }
        if !ra.fillers.is_subset(&rb.fillers) {
            return false;
        }
    }
    true
}

//! The terminological language: conjunctive concept expressions over
//! primitives, defined concepts, attribute restrictions, fillers, and
//! procedural test atoms.

use std::fmt;

/// One conjunct of a [`ConceptExpression`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    /// Reference to a declared concept, primitive or defined.
    ConceptRef(String),
    /// Value restriction: every filler of the attribute belongs to the
    /// given concept.
    All(String, Box<ConceptExpression>),
    /// The attribute has at least `n` fillers.
    AtLeast(u32, String),
    /// The attribute has at most `n` fillers.
    AtMost(u32, String),
    /// The attribute is filled by the named individual.
    Fills(String, String),
    /// Membership additionally requires the named registered test
    /// procedure to accept the individual.
    Test(String),
}

/// A conjunction of atoms. The empty conjunction is `top`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConceptExpression {
    pub atoms: Vec<Atom>,
}

impl ConceptExpression {
    pub fn top() -> Self {
        ConceptExpression { atoms: Vec::new() }
    }

    pub fn and(atoms: Vec<Atom>) -> Self {
        ConceptExpression { atoms }
    }

    /// Single reference to a named concept.
    pub fn named(name: impl Into<String>) -> Self {
        ConceptExpression {
            atoms: vec![Atom::ConceptRef(name.into())],
        }
    }

    pub fn is_top(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Conjoin another expression onto this one.
    pub fn conjoin(mut self, other: ConceptExpression) -> Self {
        self.atoms.extend(other.atoms);
        self
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::ConceptRef(n) => write!(f, "{}", maybe_quote(n)),
            Atom::All(a, e) => write!(f, "all({}, {})", a, e),
            Atom::AtLeast(n, a) => write!(f, "at-least({}, {})", n, a),
            Atom::AtMost(n, a) => write!(f, "at-most({}, {})", n, a),
            Atom::Fills(a, i) => write!(f, "fills({}, {})", a, maybe_quote(i)),
            Atom::Test(t) => write!(f, "test({})", t),
        }
    }
}

impl fmt::Display for ConceptExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.atoms.len() {
            0 => write!(f, "top"),
            1 => write!(f, "{}", self.atoms[0]),
            _ => {
                write!(f, "and(")?;
                for (i, a) in self.atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", a)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Quote a name for display when it contains characters the file format
/// would not accept bare.
pub(crate) fn maybe_quote(name: &str) -> String {
    let bare = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.' | ':' | '@'));
    if bare {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Whether a concept name denotes a primitive (necessary conditions only)
/// or a defined concept (fully characterized by its expression).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConceptKind {
    Primitive,
    Defined,
}

/// A named concept definition ready for classification into the taxonomy.
#[derive(Debug, Clone)]
pub struct ConceptDefinition {
    pub name: String,
    pub kind: ConceptKind,
    pub expression: ConceptExpression,
    /// Disjointness group label; primitives in the same group have no
    /// common instances. Only meaningful for primitives.
    pub disjoint_group: Option<String>,
}

impl ConceptDefinition {
    pub fn primitive(name: impl Into<String>, expression: ConceptExpression) -> Self {
        ConceptDefinition {
            name: name.into(),
            kind: ConceptKind::Primitive,
            expression,
            disjoint_group: None,
        }
    }

    pub fn defined(name: impl Into<String>, expression: ConceptExpression) -> Self {
        ConceptDefinition {
            name: name.into(),
            kind: ConceptKind::Defined,
            expression,
            disjoint_group: None,
        }
    }

    pub fn in_group(mut self, group: impl Into<String>) -> Self {
        self.disjoint_group = Some(group.into());
        self
    }
}

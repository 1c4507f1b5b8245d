//! The classified concept taxonomy: an acyclic DAG whose edges are direct
//! subsumption links and whose nodes group names with identical normal
//! forms (synonyms). `top` and `bottom` are always present; incoherent
//! concepts join the `bottom` node.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::normal::{subsumes, NormalForm};
use super::Schema;

pub(crate) const TOP_ID: usize = 0;
pub(crate) const BOTTOM_ID: usize = 1;

/// Where a concept landed: its direct subsumers and direct subsumees.
/// For a concept equivalent to an existing one, both sets name the
/// existing synonyms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub parents: BTreeSet<String>,
    pub children: BTreeSet<String>,
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub names: BTreeSet<String>,
    pub nf: NormalForm,
    pub parents: BTreeSet<usize>,
    pub children: BTreeSet<usize>,
}

/// One taxonomy node as exposed to reports: its synonym names and the
/// names of its direct neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyNode {
    pub names: BTreeSet<String>,
    pub parents: BTreeSet<String>,
    pub children: BTreeSet<String>,
}

#[derive(Debug, Clone)]
pub(crate) struct Taxonomy {
    nodes: Vec<Node>,
    by_name: BTreeMap<String, usize>,
    by_nf: BTreeMap<NormalForm, usize>,
}

impl Taxonomy {
    pub fn new() -> Self {
        let top = Node {
            names: [super::TOP.to_string()].into(),
            nf: NormalForm::top(),
            parents: BTreeSet::new(),
            children: [BOTTOM_ID].into(),
        };
        let bottom = Node {
            names: [super::BOTTOM.to_string()].into(),
            nf: NormalForm::bottom(),
            parents: [TOP_ID].into(),
            children: BTreeSet::new(),
        };
        let by_name = [
            (super::TOP.to_string(), TOP_ID),
            (super::BOTTOM.to_string(), BOTTOM_ID),
        ]
        .into();
        let by_nf = [
            (NormalForm::top(), TOP_ID),
            (NormalForm::bottom(), BOTTOM_ID),
        ]
        .into();
        Taxonomy {
            nodes: vec![top, bottom],
            by_name,
            by_nf,
        }
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    /// Insert a classified concept. The caller guarantees the name is
    /// unused and the normal form canonical.
    pub fn insert(&mut self, schema: &Schema, name: &str, nf: NormalForm) -> Placement {
        if let Some(&id) = self.by_nf.get(&nf) {
            // Equivalent to an existing node: join it as a synonym.
            let existing = self.nodes[id].names.clone();
            self.nodes[id].names.insert(name.to_string());
            self.by_name.insert(name.to_string(), id);
            return Placement {
                parents: existing.clone(),
                children: existing,
            };
        }

        let parents = self.most_specific_subsumers(schema, &nf);
        let children = self.most_general_subsumees(schema, &nf, &parents);

        let id = self.nodes.len();
        for &p in &parents {
            for &c in &children {
                // A parent-to-child edge is now transitively redundant.
                self.nodes[p].children.remove(&c);
                self.nodes[c].parents.remove(&p);
            }
        }
        for &p in &parents {
            self.nodes[p].children.insert(id);
        }
        for &c in &children {
            self.nodes[c].parents.insert(id);
        }
        let placement = Placement {
            parents: self.names_of(&parents),
            children: self.names_of(&children),
        };
        self.nodes.push(Node {
            names: [name.to_string()].into(),
            nf: nf.clone(),
            parents,
            children,
        });
        self.by_name.insert(name.to_string(), id);
        self.by_nf.insert(nf, id);
        placement
    }

    /// Top-down search for the nodes that subsume `nf` while none of
    /// their children do.
    fn most_specific_subsumers(&self, schema: &Schema, nf: &NormalForm) -> BTreeSet<usize> {
        let mut memo: BTreeMap<usize, bool> = BTreeMap::new();
        let mut subsumer = |id: usize, memo: &mut BTreeMap<usize, bool>| -> bool {
            if let Some(&v) = memo.get(&id) {
                return v;
            }
            let v = subsumes(schema, &self.nodes[id].nf, nf);
            memo.insert(id, v);
            v
        };
        let mut result = BTreeSet::new();
        let mut stack = vec![TOP_ID];
        let mut expanded = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if !expanded.insert(id) {
                continue;
            }
            let below: Vec<usize> = self.nodes[id]
                .children
                .iter()
                .copied()
                .filter(|&c| subsumer(c, &mut memo))
                .collect();
            if below.is_empty() {
                result.insert(id);
            } else {
                stack.extend(below);
            }
        }
        result
    }

    /// Bottom-up search for the nodes `nf` subsumes while none of their
    /// parents are subsumed. Nodes at or above a direct parent cannot
    /// qualify, so the walk prunes against `parents`.
    fn most_general_subsumees(
        &self,
        schema: &Schema,
        nf: &NormalForm,
        parents: &BTreeSet<usize>,
    ) -> BTreeSet<usize> {
        let mut memo: BTreeMap<usize, bool> = BTreeMap::new();
        let mut subsumee = |id: usize, memo: &mut BTreeMap<usize, bool>| -> bool {
            if let Some(&v) = memo.get(&id) {
                return v;
            }
            let v = !parents.contains(&id) && subsumes(schema, nf, &self.nodes[id].nf);
            memo.insert(id, v);
            v
        };
        let mut result = BTreeSet::new();
        let mut stack = vec![BOTTOM_ID];
        let mut expanded = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if !expanded.insert(id) {
                continue;
            }
            let above: Vec<usize> = self.nodes[id]
                .parents
                .iter()
                .copied()
                .filter(|&p| subsumee(p, &mut memo))
                .collect();
            if above.is_empty() {
                result.insert(id);
            } else {
                stack.extend(above);
            }
        }
        result
    }

    fn names_of(&self, ids: &BTreeSet<usize>) -> BTreeSet<String> {
        ids.iter()
            .flat_map(|&id| self.nodes[id].names.iter().cloned())
            .collect()
    }

    /// All concept names grouped by node, with direct neighbour names.
    pub fn view(&self) -> Vec<TaxonomyNode> {
        let mut out: Vec<TaxonomyNode> = self
            .nodes
            .iter()
            .map(|n| TaxonomyNode {
                names: n.names.clone(),
                parents: self.names_of(&n.parents),
                children: self.names_of(&n.children),
            })
            .collect();
        out.sort_by(|a, b| a.names.cmp(&b.names));
        out
    }

    /// Direct-subsumption edges keyed by each node's least name, plus the
    /// synonym grouping. Two taxonomies with equal snapshots are the same
    /// DAG regardless of construction order.
    pub fn snapshot(&self) -> (BTreeSet<BTreeSet<String>>, BTreeSet<(String, String)>) {
        let groups: BTreeSet<BTreeSet<String>> =
            self.nodes.iter().map(|n| n.names.clone()).collect();
        let mut edges = BTreeSet::new();
        for node in &self.nodes {
            let from = node.names.iter().next().expect("node has a name").clone();
            for &c in &node.children {
                let to = self.nodes[c]
                    .names
                    .iter()
                    .next()
                    .expect("node has a name")
                    .clone();
                edges.insert((from.clone(), to));
            }
        }
        (groups, edges)
    }

    /// Names that ended up equivalent to `bottom`, i.e. incoherent.
    pub fn incoherent_names(&self) -> BTreeSet<String> {
        self.nodes[BOTTOM_ID]
            .names
            .iter()
            .filter(|n| n.as_str() != super::BOTTOM)
            .cloned()
            .collect()
    }

    pub(crate) fn iter_ids(&self) -> impl Iterator<Item = usize> {
        0..self.nodes.len()
    }
}

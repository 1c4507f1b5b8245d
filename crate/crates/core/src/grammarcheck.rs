//! Unification-grammar consistency checking: flag rules whose feature
//! equations, combined with the expansions of their right-hand-side
//! symbols, force some feature to both `+` and `-`.
//!
//! Values live on the two-point lattice `{+, -}` plus unbound. A
//! projection `<X> = <Y>` shares every feature of the declared inventory
//! between the two constituents. Expansion is bounded: each right-hand
//!-side nonterminal is substituted by each of its rules up to the given
//! depth, and a rule is definitely inconsistent only when every
//! combination of expansion choices clashes; combinations that clash only
//! sometimes are reported as warnings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Severity;

/// A feature value from the two-point lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureValue {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Plus => write!(f, "+"),
            FeatureValue::Minus => write!(f, "-"),
        }
    }
}

/// Reference to a symbol of a rule. `occurrence` disambiguates repeated
/// right-hand-side symbols (1-based); a bare name refers to the left-hand
/// side or to a unique right-hand-side occurrence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SymbolRef {
    pub symbol: String,
    pub occurrence: Option<usize>,
}

impl SymbolRef {
    pub fn new(symbol: impl Into<String>) -> Self {
        SymbolRef {
            symbol: symbol.into(),
            occurrence: None,
        }
    }

    pub fn occurrence(symbol: impl Into<String>, k: usize) -> Self {
        SymbolRef {
            symbol: symbol.into(),
            occurrence: Some(k),
        }
    }
}

impl fmt::Display for SymbolRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.occurrence {
            Some(k) => write!(f, "{}.{}", self.symbol, k),
            None => write!(f, "{}", self.symbol),
        }
    }
}

/// One feature constraint of a grammar rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureEquation {
    /// `<X f> = <Y g>`
    PathEquality {
        left: SymbolRef,
        left_feature: String,
        right: SymbolRef,
        right_feature: String,
    },
    /// `<X f> = +` or `<X f> = -`
    Assignment {
        symbol: SymbolRef,
        feature: String,
        value: FeatureValue,
    },
    /// `<X> = <Y>`: feature-wise sharing over the declared inventory.
    Projection { left: SymbolRef, right: SymbolRef },
}

impl fmt::Display for FeatureEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureEquation::PathEquality {
                left,
                left_feature,
                right,
                right_feature,
            } => write!(f, "<{} {}> = <{} {}>", left, left_feature, right, right_feature),
            FeatureEquation::Assignment {
                symbol,
                feature,
                value,
            } => write!(f, "<{} {}> = {}", symbol, feature, value),
            FeatureEquation::Projection { left, right } => write!(f, "<{}> = <{}>", left, right),
        }
    }
}

/// A context-free production with feature equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarRule {
    pub id: String,
    pub lhs: String,
    pub rhs: Vec<String>,
    pub equations: Vec<FeatureEquation>,
}

/// A grammar: the declared feature inventory plus the rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grammar {
    pub features: Vec<String>,
    pub rules: Vec<GrammarRule>,
}

/// Where a clashing value came from: the equation that assigned it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValueSource {
    pub rule: String,
    pub equation: String,
    pub value: FeatureValue,
}

/// A feature forced to both `+` and `-` within an expansion of a rule.
/// Re-derivable from the two cited equations plus the projections and
/// path equalities along the way.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InconsistencyReport {
    /// The rule whose expansion clashes.
    pub rule: String,
    pub feature: String,
    pub positive: ValueSource,
    pub negative: ValueSource,
    /// `Error` when every expansion choice clashes, `Warning` when only
    /// some do.
    pub severity: Severity,
}

/// Check every rule against the expansions of its right-hand-side symbols
/// up to `depth` levels, reporting each feature forced to both values.
/// Reports come back sorted by rule id and feature.
pub fn check_grammar(grammar: &Grammar, depth: usize) -> Result<Vec<InconsistencyReport>> {
    let depth = depth.max(1);
    let features: BTreeSet<&str> = grammar.features.iter().map(String::as_str).collect();
    for rule in &grammar.rules {
        validate_rule(rule, &features)?;
    }
    let by_lhs: BTreeMap<&str, Vec<&GrammarRule>> = {
        let mut m: BTreeMap<&str, Vec<&GrammarRule>> = BTreeMap::new();
        for rule in &grammar.rules {
            m.entry(rule.lhs.as_str()).or_default().push(rule);
        }
        m
    };

    let mut reports = Vec::new();
    for rule in &grammar.rules {
        let combos = expand(rule, &by_lhs, depth);
        let mut per_combo: Vec<BTreeSet<Clash>> = Vec::with_capacity(combos.len());
        for combo in &combos {
            per_combo.push(evaluate(combo, grammar));
        }
        let definite = !per_combo.is_empty() && per_combo.iter().all(|c| !c.is_empty());
        if definite {
            let mut common = per_combo[0].clone();
            for c in &per_combo[1..] {
                common = common.intersection(c).cloned().collect();
            }
            let chosen = if common.is_empty() {
                per_combo[0].clone()
            } else {
                common
            };
            for clash in chosen {
                reports.push(clash.into_report(&rule.id, Severity::Error));
            }
        } else {
            let mut seen = BTreeSet::new();
            for c in per_combo {
                for clash in c {
                    if seen.insert(clash.clone()) {
                        reports.push(clash.into_report(&rule.id, Severity::Warning));
                    }
                }
            }
        }
    }
    reports.sort();
    reports.dedup();
    Ok(reports)
}

fn validate_rule(rule: &GrammarRule, features: &BTreeSet<&str>) -> Result<()> {
    for eq in &rule.equations {
        let mut check_sym = |r: &SymbolRef| -> Result<()> {
            resolve(rule, r).map(|_| ())
        };
        match eq {
            FeatureEquation::PathEquality {
                left,
                left_feature,
                right,
                right_feature,
            } => {
                check_sym(left)?;
                check_sym(right)?;
                for f in [left_feature, right_feature] {
                    if !features.contains(f.as_str()) {
                        return Err(Error::MalformedEquation {
                            rule: rule.id.clone(),
                            reason: format!("feature `{}` is not declared", f),
                        });
                    }
                }
            }
            FeatureEquation::Assignment {
                symbol, feature, ..
            } => {
                check_sym(symbol)?;
                if !features.contains(feature.as_str()) {
                    return Err(Error::MalformedEquation {
                        rule: rule.id.clone(),
                        reason: format!("feature `{}` is not declared", feature),
                    });
                }
            }
            FeatureEquation::Projection { left, right } => {
                check_sym(left)?;
                check_sym(right)?;
            }
        }
    }
    Ok(())
}

/// Local node index within one rule instance: 0 is the left-hand side,
/// `i` the i-th right-hand-side occurrence (1-based).
fn resolve(rule: &GrammarRule, r: &SymbolRef) -> Result<usize> {
    let occurrences: Vec<usize> = rule
        .rhs
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == r.symbol)
        .map(|(i, _)| i + 1)
        .collect();
    match r.occurrence {
        Some(k) => occurrences.get(k - 1).copied().ok_or_else(|| Error::UnknownSymbol {
            rule: rule.id.clone(),
            symbol: format!("{}", r),
        }),
        None => {
            if rule.lhs == r.symbol {
                Ok(0)
            } else {
                match occurrences.as_slice() {
                    [] => Err(Error::UnknownSymbol {
                        rule: rule.id.clone(),
                        symbol: r.symbol.clone(),
                    }),
                    [single] => Ok(*single),
                    _ => Err(Error::MalformedEquation {
                        rule: rule.id.clone(),
                        reason: format!(
                            "`{}` occurs more than once; use {}.1 .. {}.{}",
                            r.symbol,
                            r.symbol,
                            r.symbol,
                            occurrences.len()
                        ),
                    }),
                }
            }
        }
    }
}

/// One equation resolved to global node ids of a combination.
#[derive(Debug, Clone)]
enum Resolved {
    Assign {
        node: usize,
        feature: String,
        value: FeatureValue,
        source: ValueSource,
    },
    Equal {
        left: (usize, String),
        right: (usize, String),
    },
    Share {
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, Default)]
struct Combo {
    nodes: usize,
    equations: Vec<Resolved>,
}

/// All combinations of expansion choices for a rule, up to `depth` levels
/// of substitution.
fn expand<'g>(
    rule: &'g GrammarRule,
    by_lhs: &BTreeMap<&str, Vec<&'g GrammarRule>>,
    depth: usize,
) -> Vec<Combo> {
    let mut base = Combo::default();
    let node_base = base.nodes;
    base.nodes += 1 + rule.rhs.len();
    instantiate(rule, node_base, &mut base);
    let occupied: Vec<(usize, &str)> = rule
        .rhs
        .iter()
        .enumerate()
        .map(|(i, s)| (node_base + 1 + i, s.as_str()))
        .collect();
    grow(vec![base], &occupied, by_lhs, depth)
}

/// For each nonterminal occurrence, branch over its expansion rules.
fn grow<'g>(
    combos: Vec<Combo>,
    occurrences: &[(usize, &str)],
    by_lhs: &BTreeMap<&str, Vec<&'g GrammarRule>>,
    depth: usize,
) -> Vec<Combo> {
    if depth == 0 {
        return combos;
    }
    let mut current = combos;
    for &(node, symbol) in occurrences {
        let expansions = match by_lhs.get(symbol) {
            Some(rules) if !rules.is_empty() => rules,
            _ => continue,
        };
        let mut next = Vec::new();
        for combo in &current {
            for q in expansions {
                let mut c = combo.clone();
                let child_base = c.nodes;
                c.nodes += q.rhs.len();
                instantiate_at(q, node, child_base, &mut c);
                let children: Vec<(usize, &str)> = q
                    .rhs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (child_base + i, s.as_str()))
                    .collect();
                next.extend(grow(vec![c], &children, by_lhs, depth - 1));
            }
        }
        current = next;
    }
    current
}

/// Add a root rule instance: node `base` is its LHS, `base + i` its i-th
/// RHS occurrence.
fn instantiate(rule: &GrammarRule, base: usize, combo: &mut Combo) {
    let map = |local: usize| base + local;
    push_equations(rule, &map, combo);
}

/// Add an expansion instance: the expanded occurrence `lhs_node` plays
/// the LHS; RHS occurrences are fresh nodes from `child_base`.
fn instantiate_at(rule: &GrammarRule, lhs_node: usize, child_base: usize, combo: &mut Combo) {
    let map = move |local: usize| {
        if local == 0 {
            lhs_node
        } else {
            child_base + local - 1
        }
    };
    push_equations(rule, &map, combo);
}

fn push_equations(rule: &GrammarRule, map: &dyn Fn(usize) -> usize, combo: &mut Combo) {
    for eq in &rule.equations {
        let resolved = match eq {
            FeatureEquation::Assignment {
                symbol,
                feature,
                value,
            } => Resolved::Assign {
                node: map(resolve(rule, symbol).expect("validated")),
                feature: feature.clone(),
                value: *value,
                source: ValueSource {
                    rule: rule.id.clone(),
                    equation: eq.to_string(),
                    value: *value,
                },
            },
            FeatureEquation::PathEquality {
                left,
                left_feature,
                right,
                right_feature,
            } => Resolved::Equal {
                left: (map(resolve(rule, left).expect("validated")), left_feature.clone()),
                right: (
                    map(resolve(rule, right).expect("validated")),
                    right_feature.clone(),
                ),
            },
            FeatureEquation::Projection { left, right } => Resolved::Share {
                left: map(resolve(rule, left).expect("validated")),
                right: map(resolve(rule, right).expect("validated")),
            },
        };
        combo.equations.push(resolved);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Clash {
    feature: String,
    positive: ValueSource,
    negative: ValueSource,
}

impl Clash {
    fn into_report(self, rule: &str, severity: Severity) -> InconsistencyReport {
        InconsistencyReport {
            rule: rule.to_string(),
            feature: self.feature,
            positive: self.positive,
            negative: self.negative,
            severity,
        }
    }
}

/// Union-find unification over `(node, feature)` variables; every class
/// holding both values yields one clash.
fn evaluate(combo: &Combo, grammar: &Grammar) -> BTreeSet<Clash> {
    let mut vars: BTreeMap<(usize, String), usize> = BTreeMap::new();
    let mut parent: Vec<usize> = Vec::new();
    let mut var = |key: (usize, String), parent: &mut Vec<usize>| -> usize {
        if let Some(&i) = vars.get(&key) {
            return i;
        }
        let i = parent.len();
        parent.push(i);
        vars.insert(key, i);
        i
    };
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut unions: Vec<(usize, usize)> = Vec::new();
    let mut assignments: Vec<(usize, ValueSource)> = Vec::new();
    for eq in &combo.equations {
        match eq {
            Resolved::Assign { node, feature, source, .. } => {
                let v = var((*node, feature.clone()), &mut parent);
                assignments.push((v, source.clone()));
            }
            Resolved::Equal { left, right } => {
                let l = var(left.clone(), &mut parent);
                let r = var(right.clone(), &mut parent);
                unions.push((l, r));
            }
            Resolved::Share { left, right } => {
                for f in &grammar.features {
                    let l = var((*left, f.clone()), &mut parent);
                    let r = var((*right, f.clone()), &mut parent);
                    unions.push((l, r));
                }
            }
        }
    }
    for (l, r) in unions {
        let (rl, rr) = (find(&mut parent, l), find(&mut parent, r));
        if rl != rr {
            parent[rl] = rr;
        }
    }
    // First assignment of each value per class, in equation order.
    let mut class_values: BTreeMap<usize, BTreeMap<FeatureValue, ValueSource>> = BTreeMap::new();
    for (v, source) in assignments {
        let root = find(&mut parent, v);
        class_values
            .entry(root)
            .or_default()
            .entry(source.value)
            .or_insert(source);
    }
    // Name each class by its least feature, preferring the originating
    // rule's own constituents (the lowest node ids).
    let mut class_feature: BTreeMap<usize, (usize, String)> = BTreeMap::new();
    for ((node, feature), v) in &vars {
        let root = find(&mut parent, *v);
        let candidate = (*node, feature.clone());
        class_feature
            .entry(root)
            .and_modify(|best| {
                if candidate < *best {
                    *best = candidate.clone();
                }
            })
            .or_insert(candidate);
    }
    let mut clashes = BTreeSet::new();
    for (root, values) in class_values {
        if let (Some(pos), Some(neg)) = (
            values.get(&FeatureValue::Plus),
            values.get(&FeatureValue::Minus),
        ) {
            let feature = class_feature
                .get(&root)
                .map(|(_, f)| f.clone())
                .expect("class has at least one variable");
            clashes.insert(Clash {
                feature,
                positive: pos.clone(),
                negative: neg.clone(),
            });
        }
    }
    clashes
}

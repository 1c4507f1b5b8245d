//! The declarative file formats: knowledge-base files (features,
//! disjointness groups, concepts, events, nouns, verbs,
//! subcategorizations, alternations, verb classes), sentence corpus files
//! with `good`/`bad` sections, and unification-grammar files.
//!
//! All three formats are line-oriented with one declaration per line and
//! `#` comments. Forward references are rejected: every name must be
//! declared on an earlier line. Parsed documents pretty-print back to
//! canonical text that re-parses to an equivalent document.

mod lex;

use std::fmt;

use crate::error::{Error, Result};
use crate::grammarcheck::{FeatureEquation, FeatureValue, Grammar, GrammarRule, SymbolRef};
use crate::kr::{maybe_quote, Atom, ConceptExpression, Kb};
use crate::lexicon::{EventSlot, EventType, NounEntry, VerbEntry};
use crate::report::Label;
use crate::sentence::{AlternationType, AnalyzedSentence, LinkingPattern, SubcategorizationType};
use crate::verbclass::{Corpus, VerbClass};

use lex::{tokenize, Line, Tok};

/// A parsed declaration with its source line.
#[derive(Debug, Clone, PartialEq)]
pub struct Spanned<T> {
    pub value: T,
    pub line: usize,
}

/// One knowledge-base declaration, in file order.
#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Feature { name: String, parents: Vec<String> },
    Disjoint { members: Vec<String> },
    Concept { name: String, expr: ConceptExpression },
    Event(EventType),
    Noun(NounEntry),
    Verb(VerbEntry),
    Subcat(SubcategorizationType),
    Alternation(AlternationType),
    Class(VerbClass),
}

/// A parsed knowledge-base file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KbDocument {
    pub decls: Vec<Spanned<Decl>>,
}

/// A parsed sentence corpus file: labelled sentences in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentenceDocument {
    pub entries: Vec<Spanned<(Label, AnalyzedSentence)>>,
}

impl SentenceDocument {
    pub fn labelled(&self, label: Label) -> Vec<AnalyzedSentence> {
        self.entries
            .iter()
            .filter(|e| e.value.0 == label)
            .map(|e| e.value.1.clone())
            .collect()
    }

    pub fn sentences(&self) -> Vec<(Label, AnalyzedSentence)> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

struct Cur<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    file: &'a str,
    line: usize,
}

impl<'a> Cur<'a> {
    fn new(line: &'a Line, file: &'a str) -> Self {
        Cur {
            toks: &line.toks,
            pos: 0,
            file,
            line: line.number,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let col = self
            .toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .or_else(|| self.toks.last().map(|(_, c)| *c + 1))
            .unwrap_or(1);
        Error::Syntax {
            file: self.file.to_string(),
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {}, found {}", tok.describe(), t.describe()))),
            None => Err(self.err(format!("expected {}", tok.describe()))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    fn expect_word(&mut self, what: &str) -> Result<String> {
        match self.bump() {
            Some(Tok::Word(w)) => Ok(w.clone()),
            Some(t) => Err({
                self.pos -= 1;
                self.err(format!("expected {}, found {}", what, t.describe()))
            }),
            None => Err(self.err(format!("expected {}", what))),
        }
    }

    /// A name: a bare word (with `:`-joined segments) or a quoted string.
    fn expect_name(&mut self, what: &str) -> Result<String> {
        match self.bump() {
            Some(Tok::Word(w)) => {
                let mut name = w.clone();
                while self.peek() == Some(&Tok::Colon) {
                    self.pos += 1;
                    let seg = self.expect_word("name segment after `:`")?;
                    name.push(':');
                    name.push_str(&seg);
                }
                Ok(name)
            }
            Some(Tok::Quoted(q)) => Ok(q.clone()),
            Some(t) => Err({
                self.pos -= 1;
                self.err(format!("expected {}, found {}", what, t.describe()))
            }),
            None => Err(self.err(format!("expected {}", what))),
        }
    }

    fn expect_number(&mut self, what: &str) -> Result<u32> {
        let w = self.expect_word(what)?;
        w.parse().map_err(|_| {
            self.err(format!("expected {}, found `{}`", what, w))
        })
    }
}

fn parse_expr(cur: &mut Cur) -> Result<ConceptExpression> {
    match cur.peek() {
        Some(Tok::Word(w)) => match w.as_str() {
            "and" => {
                cur.bump();
                cur.expect(Tok::LParen)?;
                let mut expr = ConceptExpression::top();
                loop {
                    let part = parse_expr(cur)?;
                    expr = expr.conjoin(part);
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
                cur.expect(Tok::RParen)?;
                Ok(expr)
            }
            "all" => {
                cur.bump();
                cur.expect(Tok::LParen)?;
                let attr = cur.expect_word("attribute name")?;
                cur.expect(Tok::Comma)?;
                let inner = parse_expr(cur)?;
                cur.expect(Tok::RParen)?;
                Ok(ConceptExpression::and(vec![Atom::All(attr, Box::new(inner))]))
            }
            "at-least" | "at-most" => {
                let kind = w.clone();
                cur.bump();
                cur.expect(Tok::LParen)?;
                let n = cur.expect_number("a count")?;
                cur.expect(Tok::Comma)?;
                let attr = cur.expect_word("attribute name")?;
                cur.expect(Tok::RParen)?;
                let atom = if kind == "at-least" {
                    Atom::AtLeast(n, attr)
                } else {
                    Atom::AtMost(n, attr)
                };
                Ok(ConceptExpression::and(vec![atom]))
            }
            "fills" => {
                cur.bump();
                cur.expect(Tok::LParen)?;
                let attr = cur.expect_word("attribute name")?;
                cur.expect(Tok::Comma)?;
                let ind = cur.expect_name("an individual name")?;
                cur.expect(Tok::RParen)?;
                Ok(ConceptExpression::and(vec![Atom::Fills(attr, ind)]))
            }
            "test" => {
                cur.bump();
                cur.expect(Tok::LParen)?;
                let name = cur.expect_name("a test name")?;
                cur.expect(Tok::RParen)?;
                Ok(ConceptExpression::and(vec![Atom::Test(name)]))
            }
            "top" => {
                cur.bump();
                Ok(ConceptExpression::top())
            }
            _ => {
                let name = cur.expect_name("a concept name")?;
                Ok(ConceptExpression::named(name))
            }
        },
        Some(Tok::Quoted(_)) => {
            let name = cur.expect_name("a concept name")?;
            Ok(ConceptExpression::named(name))
        }
        Some(t) => Err(cur.err(format!("expected a concept expression, found {}", t.describe()))),
        None => Err(cur.err("expected a concept expression")),
    }
}

/// Parse a knowledge-base file.
pub fn parse_kb(text: &str, file: &str) -> Result<KbDocument> {
    let mut doc = KbDocument::default();
    for line in tokenize(text, file)? {
        let mut cur = Cur::new(&line, file);
        let keyword = cur.expect_word("a declaration keyword")?;
        let decl = match keyword.as_str() {
            "feature" => {
                let name = cur.expect_name("a feature name")?;
                let mut parents = Vec::new();
                if cur.eat(&Tok::Lt) {
                    while !cur.at_end() {
                        parents.push(cur.expect_name("a parent feature")?);
                    }
                    if parents.is_empty() {
                        return Err(cur.err("expected at least one parent after `<`"));
                    }
                }
                Decl::Feature { name, parents }
            }
            "disjoint" => {
                let mut members = Vec::new();
                while !cur.at_end() {
                    members.push(cur.expect_name("a primitive name")?);
                }
                if members.len() < 2 {
                    return Err(cur.err("disjointness needs at least two primitives"));
                }
                Decl::Disjoint { members }
            }
            "concept" => {
                let name = cur.expect_name("a concept name")?;
                cur.expect(Tok::Equals)?;
                let expr = parse_expr(&mut cur)?;
                Decl::Concept { name, expr }
            }
            "event" => {
                let name = cur.expect_name("an event name")?;
                let mut slots = Vec::new();
                while !cur.at_end() {
                    let mut label = cur.expect_word("a slot label")?;
                    let mut required = true;
                    cur.expect(Tok::Colon)?;
                    if label == "opt" {
                        required = false;
                        label = cur.expect_word("a slot label")?;
                        cur.expect(Tok::Colon)?;
                    }
                    let restriction = parse_expr(&mut cur)?;
                    slots.push(EventSlot {
                        label,
                        restriction,
                        required,
                    });
                }
                Decl::Event(EventType { name, slots })
            }
            "noun" => {
                let lemma = cur.expect_name("a lemma")?;
                cur.expect(Tok::Equals)?;
                let denotation = parse_expr(&mut cur)?;
                Decl::Noun(NounEntry { lemma, denotation })
            }
            "verb" => {
                let lemma = cur.expect_name("a lemma")?;
                cur.expect(Tok::Equals)?;
                let mut senses = Vec::new();
                loop {
                    senses.push(cur.expect_name("an event name")?);
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
                Decl::Verb(VerbEntry { lemma, senses })
            }
            "subcat" => {
                let name = cur.expect_name("a subcategorization name")?;
                let mut gfs = Vec::new();
                let mut prep = None;
                while !cur.at_end() {
                    let w = cur.expect_word("a grammatical function")?;
                    if w == "prep" && cur.eat(&Tok::Equals) {
                        prep = Some(cur.expect_word("a preposition")?);
                        break;
                    }
                    gfs.push(w);
                }
                cur.expect_end()?;
                let mut sc = SubcategorizationType::new(name, gfs);
                sc.prep = prep;
                Decl::Subcat(sc)
            }
            "alternation" => {
                let name = cur.expect_name("an alternation name")?;
                let kw = cur.expect_word("`base`")?;
                if kw != "base" {
                    return Err(cur.err("expected `base`"));
                }
                let base = cur.expect_name("a subcategorization name")?;
                let kw = cur.expect_word("`link`")?;
                if kw != "link" {
                    return Err(cur.err("expected `link`"));
                }
                let mut gfs = Vec::new();
                while !cur.at_end() {
                    gfs.push(cur.expect_word("a grammatical function")?);
                }
                let pattern = LinkingPattern::new(gfs).map_err(|e| match e {
                    Error::InvalidLinkingPattern { reason, .. } => Error::InvalidLinkingPattern {
                        alternation: name.clone(),
                        reason,
                    },
                    other => other,
                })?;
                Decl::Alternation(AlternationType {
                    name,
                    base,
                    pattern,
                })
            }
            "class" => {
                let name = cur.expect_name("a class name")?;
                let kw = cur.expect_word("`good`")?;
                if kw != "good" {
                    return Err(cur.err("expected `good`"));
                }
                let mut good = Vec::new();
                let mut bad = Vec::new();
                let mut in_bad = false;
                while !cur.at_end() {
                    if cur.eat(&Tok::Comma) {
                        continue;
                    }
                    let w = cur.expect_name("an alternation name")?;
                    match w.as_str() {
                        "bad" if !in_bad => in_bad = true,
                        "-" => {}
                        _ => {
                            if in_bad {
                                bad.push(w);
                            } else {
                                good.push(w);
                            }
                        }
                    }
                }
                Decl::Class(VerbClass::new(name, good, bad))
            }
            other => {
                return Err(cur.err(format!("unknown declaration keyword `{}`", other)));
            }
        };
        match &decl {
            Decl::Subcat(_) => {}
            _ => cur.expect_end()?,
        }
        doc.decls.push(Spanned {
            value: decl,
            line: line.number,
        });
    }
    Ok(doc)
}

/// Parse a sentence corpus file with `good` / `bad` section headers.
pub fn parse_sentences(text: &str, file: &str) -> Result<SentenceDocument> {
    let mut doc = SentenceDocument::default();
    let mut section = Label::Good;
    for line in tokenize(text, file)? {
        let mut cur = Cur::new(&line, file);
        let keyword = cur.expect_word("`good`, `bad`, or `sentence`")?;
        match keyword.as_str() {
            "good" => {
                cur.expect_end()?;
                section = Label::Good;
            }
            "bad" => {
                cur.expect_end()?;
                section = Label::Bad;
            }
            "sentence" => {
                let id = cur.expect_name("a sentence id")?;
                let verb = cur.expect_name("a verb lemma")?;
                let mut sentence = AnalyzedSentence::new(id, verb);
                while !cur.at_end() {
                    let key = cur.expect_word("a grammatical function or `text`")?;
                    if key == "text" {
                        cur.expect(Tok::Equals)?;
                        let t = cur.expect_name("quoted text")?;
                        sentence = sentence.with_text(t);
                        continue;
                    }
                    let prep = if cur.eat(&Tok::Colon) {
                        Some(cur.expect_word("a preposition")?)
                    } else {
                        None
                    };
                    cur.expect(Tok::Equals)?;
                    let filler = cur.expect_name("a noun lemma")?;
                    match prep {
                        Some(p) => {
                            if key != crate::sentence::PPO {
                                return Err(cur.err(format!(
                                    "preposition tags are only valid on `ppo`, found `{}`",
                                    key
                                )));
                            }
                            sentence = sentence.with_ppo(p, filler);
                        }
                        None => {
                            sentence = sentence.with_gf(key, filler);
                        }
                    }
                }
                doc.entries.push(Spanned {
                    value: (section, sentence),
                    line: line.number,
                });
            }
            other => {
                return Err(cur.err(format!(
                    "expected `good`, `bad`, or `sentence`, found `{}`",
                    other
                )));
            }
        }
    }
    Ok(doc)
}

fn parse_symbol_ref(word: &str) -> SymbolRef {
    if let Some((sym, occ)) = word.rsplit_once('.') {
        if let Ok(k) = occ.parse::<usize>() {
            if !sym.is_empty() && k >= 1 {
                return SymbolRef::occurrence(sym, k);
            }
        }
    }
    SymbolRef::new(word)
}

/// Parse a unification-grammar file: `feature` lines, `rule` lines, and
/// `eq` lines attaching to the preceding rule.
pub fn parse_grammar(text: &str, file: &str) -> Result<Grammar> {
    let mut grammar = Grammar::default();
    for line in tokenize(text, file)? {
        let mut cur = Cur::new(&line, file);
        let keyword = cur.expect_word("`feature`, `rule`, or `eq`")?;
        match keyword.as_str() {
            "feature" => {
                let mut any = false;
                while !cur.at_end() {
                    let f = cur.expect_word("a feature name")?;
                    if !grammar.features.contains(&f) {
                        grammar.features.push(f);
                    }
                    any = true;
                }
                if !any {
                    return Err(cur.err("expected at least one feature name"));
                }
            }
            "rule" => {
                let id = cur.expect_word("a rule id")?;
                let lhs = cur.expect_word("the left-hand symbol")?;
                cur.expect(Tok::Arrow)?;
                let mut rhs = Vec::new();
                while !cur.at_end() {
                    rhs.push(cur.expect_word("a right-hand symbol")?);
                }
                if rhs.is_empty() {
                    return Err(cur.err("a rule needs at least one right-hand symbol"));
                }
                grammar.rules.push(GrammarRule {
                    id,
                    lhs,
                    rhs,
                    equations: Vec::new(),
                });
            }
            "eq" => {
                cur.expect(Tok::Lt)?;
                let left_sym = parse_symbol_ref(&cur.expect_word("a symbol")?);
                let left_feature = if cur.peek() == Some(&Tok::Gt) {
                    None
                } else {
                    Some(cur.expect_word("a feature name")?)
                };
                cur.expect(Tok::Gt)?;
                cur.expect(Tok::Equals)?;
                let eq = match cur.bump() {
                    Some(Tok::Lt) => {
                        let right_sym = parse_symbol_ref(&cur.expect_word("a symbol")?);
                        let right_feature = if cur.peek() == Some(&Tok::Gt) {
                            None
                        } else {
                            Some(cur.expect_word("a feature name")?)
                        };
                        cur.expect(Tok::Gt)?;
                        match (left_feature, right_feature) {
                            (Some(lf), Some(rf)) => FeatureEquation::PathEquality {
                                left: left_sym,
                                left_feature: lf,
                                right: right_sym,
                                right_feature: rf,
                            },
                            (None, None) => FeatureEquation::Projection {
                                left: left_sym,
                                right: right_sym,
                            },
                            _ => {
                                return Err(cur.err(
                                    "both sides must carry a feature, or neither (projection)",
                                ))
                            }
                        }
                    }
                    Some(Tok::Plus) => match left_feature {
                        Some(feature) => FeatureEquation::Assignment {
                            symbol: left_sym,
                            feature,
                            value: FeatureValue::Plus,
                        },
                        None => return Err(cur.err("value assignment needs a feature path")),
                    },
                    Some(Tok::Word(w)) if w == "-" => match left_feature {
                        Some(feature) => FeatureEquation::Assignment {
                            symbol: left_sym,
                            feature,
                            value: FeatureValue::Minus,
                        },
                        None => return Err(cur.err("value assignment needs a feature path")),
                    },
                    other => {
                        return Err(cur.err(format!(
                            "expected `<`, `+`, or `-`, found {}",
                            other.map(|t| t.describe()).unwrap_or_else(|| "end of line".into())
                        )))
                    }
                };
                cur.expect_end()?;
                match grammar.rules.last_mut() {
                    Some(rule) => rule.equations.push(eq),
                    None => return Err(cur.err("`eq` before any `rule`")),
                }
            }
            other => {
                return Err(cur.err(format!(
                    "expected `feature`, `rule`, or `eq`, found `{}`",
                    other
                )));
            }
        }
    }
    Ok(grammar)
}

/// Load a parsed document into a fresh knowledge base. The result is not
/// frozen; call [`Kb::freeze`] before running queries.
pub fn load_kb(doc: &KbDocument, file: &str) -> Result<Kb> {
    let mut kb = Kb::new();
    for decl in &doc.decls {
        load_decl(&mut kb, &decl.value).map_err(|e| e.at(file, decl.line))?;
    }
    Ok(kb)
}

/// Load and freeze: the returned base is query-ready.
pub fn build_kb(doc: &KbDocument, file: &str) -> Result<Kb> {
    let mut kb = load_kb(doc, file)?;
    kb.freeze()?;
    Ok(kb)
}

fn load_decl(kb: &mut Kb, decl: &Decl) -> Result<()> {
    match decl {
        Decl::Feature { name, parents } => {
            let parents = if parents.is_empty() {
                vec![crate::kr::ENTITY.to_string()]
            } else {
                parents.clone()
            };
            let expr = ConceptExpression::and(
                parents.into_iter().map(Atom::ConceptRef).collect(),
            );
            kb.classify_concept(crate::kr::ConceptDefinition::primitive(name.clone(), expr))?;
            Ok(())
        }
        Decl::Disjoint { members } => kb.declare_disjointness(members),
        Decl::Concept { name, expr } => {
            kb.classify_concept(crate::kr::ConceptDefinition::defined(
                name.clone(),
                expr.clone(),
            ))?;
            Ok(())
        }
        Decl::Event(ev) => kb.add_event(ev.clone()),
        Decl::Noun(entry) => kb.add_noun(entry.clone()),
        Decl::Verb(entry) => kb.add_verb(entry.clone()),
        Decl::Subcat(sc) => kb.add_subcategorization(sc.clone()),
        Decl::Alternation(alt) => kb.add_alternation(alt.clone()),
        Decl::Class(class) => kb.add_verb_class(class.clone()),
    }
}

/// Assemble a corpus for one verb from labelled sentence documents.
pub fn corpus_from_documents(
    lemma: &str,
    good: &SentenceDocument,
    bad: &SentenceDocument,
) -> Result<Corpus> {
    let mut corpus = Corpus::new(lemma);
    for s in good.labelled(Label::Good) {
        corpus.add_good(s)?;
    }
    for s in bad.labelled(Label::Bad) {
        corpus.add_bad(s)?;
    }
    Ok(corpus)
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Feature { name, parents } => {
                write!(f, "feature {}", maybe_quote(name))?;
                if !parents.is_empty() {
                    write!(f, " <")?;
                    for p in parents {
                        write!(f, " {}", maybe_quote(p))?;
                    }
                }
                Ok(())
            }
            Decl::Disjoint { members } => {
                write!(f, "disjoint")?;
                for m in members {
                    write!(f, " {}", maybe_quote(m))?;
                }
                Ok(())
            }
            Decl::Concept { name, expr } => {
                write!(f, "concept {} = {}", maybe_quote(name), expr)
            }
            Decl::Event(ev) => {
                write!(f, "event {}", maybe_quote(&ev.name))?;
                for slot in &ev.slots {
                    write!(f, " ")?;
                    if !slot.required {
                        write!(f, "opt:")?;
                    }
                    write!(f, "{}:{}", slot.label, slot.restriction)?;
                }
                Ok(())
            }
            Decl::Noun(entry) => write!(
                f,
                "noun {} = {}",
                maybe_quote(&entry.lemma),
                entry.denotation
            ),
            Decl::Verb(entry) => {
                write!(f, "verb {} = ", maybe_quote(&entry.lemma))?;
                for (i, s) in entry.senses.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", maybe_quote(s))?;
                }
                Ok(())
            }
            Decl::Subcat(sc) => {
                write!(f, "subcat {}", maybe_quote(&sc.name))?;
                for gf in &sc.gfs {
                    write!(f, " {}", gf)?;
                }
                if let Some(p) = &sc.prep {
                    write!(f, " prep={}", p)?;
                }
                Ok(())
            }
            Decl::Alternation(alt) => {
                write!(
                    f,
                    "alternation {} base {} link",
                    maybe_quote(&alt.name),
                    maybe_quote(&alt.base)
                )?;
                for gf in alt.pattern.gfs() {
                    write!(f, " {}", gf)?;
                }
                Ok(())
            }
            Decl::Class(class) => {
                write!(f, "class {} good", maybe_quote(&class.name))?;
                if class.good.is_empty() {
                    write!(f, " -")?;
                } else {
                    for a in &class.good {
                        write!(f, " {}", maybe_quote(a))?;
                    }
                }
                write!(f, " bad")?;
                if class.bad.is_empty() {
                    write!(f, " -")?;
                } else {
                    for a in &class.bad {
                        write!(f, " {}", maybe_quote(a))?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for KbDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for decl in &self.decls {
            writeln!(f, "{}", decl.value)?;
        }
        Ok(())
    }
}

impl fmt::Display for SentenceDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut section: Option<Label> = None;
        for entry in &self.entries {
            let (label, s) = &entry.value;
            if section != Some(*label) {
                writeln!(
                    f,
                    "{}",
                    match label {
                        Label::Good => "good",
                        Label::Bad => "bad",
                    }
                )?;
                section = Some(*label);
            }
            write!(f, "sentence {} {}", maybe_quote(&s.id), maybe_quote(&s.verb))?;
            for (gf, filler) in &s.gfs {
                if gf == crate::sentence::PPO {
                    if let Some(p) = &s.prep {
                        write!(f, " {}:{}={}", gf, p, maybe_quote(filler))?;
                        continue;
                    }
                }
                write!(f, " {}={}", gf, maybe_quote(filler))?;
            }
            if let Some(t) = &s.text {
                write!(f, " text=\"{}\"", t.replace('\\', "\\\\").replace('"', "\\\""))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Canonical rendering of a grammar; re-parses to an equal grammar.
pub fn render_grammar(grammar: &Grammar) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    if !grammar.features.is_empty() {
        write!(out, "feature").expect("string write");
        for f in &grammar.features {
            write!(out, " {}", f).expect("string write");
        }
        out.push('\n');
    }
    for rule in &grammar.rules {
        write!(out, "rule {} {} ->", rule.id, rule.lhs).expect("string write");
        for s in &rule.rhs {
            write!(out, " {}", s).expect("string write");
        }
        out.push('\n');
        for eq in &rule.equations {
            writeln!(out, "eq {}", eq).expect("string write");
        }
    }
    out
}

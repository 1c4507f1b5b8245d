//! Error type shared by every subsystem of the engine.

use thiserror::Error;

/// Errors raised by knowledge-base construction, classification queries,
/// lexicon management, sentence and verb-class analysis, grammar checking,
/// and the declarative file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // Terminological core.
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("cyclic definition through `{0}`")]
    CyclicDefinition(String),
    #[error("duplicate concept name `{0}`")]
    DuplicateName(String),
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("test `{0}` referenced during classification is not registered")]
    UnregisteredTest(String),
    #[error("duplicate test name `{0}`")]
    DuplicateTestName(String),
    #[error("rule firing did not reach a fixpoint within {0} rounds")]
    RuleLimitExceeded(usize),
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("duplicate individual name `{0}`")]
    DuplicateIndividual(String),
    #[error("primitive `{0}` already belongs to disjointness group `{1}`")]
    DisjointnessConflict(String, String),
    #[error("knowledge base is frozen; no further declarations accepted")]
    FrozenKb,
    #[error("operation requires a frozen knowledge base")]
    NotFrozen,

    // Lexicon.
    #[error("duplicate lemma `{0}`")]
    DuplicateLemma(String),
    #[error("denotation of `{0}` is incoherent")]
    IncoherentDenotation(String),
    #[error("duplicate event name `{0}`")]
    DuplicateEvent(String),
    #[error("unknown feature or concept `{0}`")]
    UnknownFeature(String),
    #[error("slot restriction `{slot}` of event `{event}` is incoherent")]
    IncoherentRestriction { event: String, slot: String },
    #[error("event `{0}` has more than {1} argument slots")]
    TooManyArguments(String, usize),
    #[error("event `{event}` declares slot label `{slot}` twice")]
    DuplicateSlotLabel { event: String, slot: String },
    #[error("verb `{0}` declares no senses")]
    NoSenses(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),

    // Sentence classification.
    #[error("no subcategorization matches the grammatical functions of sentence `{0}`")]
    NoSubcategorization(String),
    #[error("unknown verb `{0}`")]
    UnknownVerb(String),
    #[error("duplicate subcategorization `{0}`")]
    DuplicateSubcategorization(String),
    #[error("subcategorization `{name}` repeats the frame of `{other}`")]
    SubcategorizationClash { name: String, other: String },
    #[error("duplicate alternation `{0}`")]
    DuplicateAlternation(String),
    #[error("unknown grammatical function `{0}`")]
    UnknownGrammaticalFunction(String),
    #[error("linking pattern of `{alternation}` is invalid: {reason}")]
    InvalidLinkingPattern { alternation: String, reason: String },
    #[error("sentence `{0}` is malformed: {1}")]
    MalformedSentence(String, String),

    // Verb classes.
    #[error("unknown alternation `{0}`")]
    UnknownAlternation(String),
    #[error("unknown subcategorization `{0}`")]
    UnknownSubcategorization(String),
    #[error("sentence `{id}` has verb `{found}` but the corpus is for `{expected}`")]
    CorpusLemmaMismatch {
        id: String,
        found: String,
        expected: String,
    },
    #[error("duplicate verb class `{0}`")]
    DuplicateClass(String),

    // Grammar checking.
    #[error("unknown symbol `{symbol}` in rule {rule}")]
    UnknownSymbol { rule: String, symbol: String },
    #[error("malformed equation in rule {rule}: {reason}")]
    MalformedEquation { rule: String, reason: String },

    // File formats.
    #[error("{file}:{line}:{col}: syntax error: {msg}")]
    Syntax {
        file: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{file}:{line}: unknown name `{name}`")]
    UnknownNameAt {
        file: String,
        line: usize,
        name: String,
    },
    #[error("{file}:{line}: {source}")]
    LoadError {
        file: String,
        line: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("cannot read `{file}`: {msg}")]
    Io { file: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach a file/line location to an error raised while loading a
    /// parsed declaration into a knowledge base.
    pub fn at(self, file: &str, line: usize) -> Error {
        match self {
            e @ (Error::Syntax { .. } | Error::UnknownNameAt { .. } | Error::LoadError { .. }) => e,
            Error::UnknownName(name) | Error::UnknownFeature(name) => Error::UnknownNameAt {
                file: file.to_string(),
                line,
                name,
            },
            other => Error::LoadError {
                file: file.to_string(),
                line,
                source: Box::new(other),
            },
        }
    }
}

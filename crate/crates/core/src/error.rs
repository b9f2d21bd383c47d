use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown phoneme label `{0}`")]
    UnknownPhoneme(String),
    #[error("invalid inventory: {0}")]
    InvalidInventory(String),
    #[error("matrices are indexed by different phoneme inventories")]
    InventoryMismatch,
    #[error("the epsilon/epsilon cell must stay zero")]
    EpsilonCell,
    #[error("phoneme index {0} is outside the inventory")]
    IndexOutOfRange(usize),
    #[error("epsilon may not appear in a phoneme sequence")]
    EpsilonInSequence,
    #[error("pronunciation variants must be non-empty and epsilon-free")]
    InvalidVariant,
    #[error("out-of-vocabulary words: {}", .0.join(", "))]
    OutOfVocabulary(Vec<String>),
    #[error("invalid cost ({expected}, {observed}) = {value}: {reason}")]
    InvalidCost {
        expected: String,
        observed: String,
        value: f64,
        reason: &'static str,
    },
    #[error("brute-force alignment limited to {limit} symbols in total, got {len}")]
    BruteForceTooLong { len: usize, limit: usize },
    #[error("word {0} has no pronunciation variants")]
    EmptyLattice(usize),
    #[error(
        "{combinations} variant combinations exceed the cap of {cap}; \
         use variant rule `first` for this utterance"
    )]
    TooManyVariantCombinations { combinations: u128, cap: u64 },
    #[error("rate undefined: target `{0}` never occurs")]
    UndefinedRate(String),
    #[error("epsilon is not a valid target phoneme")]
    EpsilonTarget,
    #[error("{kind} record inconsistent with target `{target}` / observed `{observed}`")]
    InconsistentAnnotation {
        kind: &'static str,
        target: String,
        observed: String,
    },
    #[error("annotation positions decrease within utterance `{0}`")]
    PositionOrder(String),
    #[error("k = {k} out of range for {n} vectors")]
    ClusterCount { k: usize, n: usize },
    #[error("vector dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("no group label for speaker `{0}`")]
    MissingLabel(String),
    #[error("perplexity {perplexity} infeasible for {n} points (need n >= 3 and perplexity < n - 1)")]
    Perplexity { perplexity: f64, n: usize },
}

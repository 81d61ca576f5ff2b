use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("word letter {letter} out of range for rank {rank}")]
    LetterOutOfRange { letter: i32, rank: usize },

    #[error("expected {expected} items, got {got}: {what}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("enumeration cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("certification failed after {attempts} attempts: best delta {best_delta} < target {target}")]
    CertificationFailed {
        attempts: u32,
        best_delta: String,
        target: String,
    },

    #[error("input is not a subset-closure over an ordered base tuple: {0}")]
    NotSubsetClosure(String),

    #[error("generators do not generate the declared group (closure has {closure} of {order} elements)")]
    NonGenerating { closure: usize, order: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("group is not solvable (derived series stabilises at order {stabilised_order})")]
    NotSolvable { stabilised_order: usize },

    #[error("group orders are not coprime: gcd(|G|,|G'|) = {gcd}")]
    NonCoprime { gcd: u64 },

    #[error("generator images do not define a homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("mod-{p} distance {distance} below target {required} (unique-neighbor guarantee violated)")]
    DistanceBelowTarget {
        p: u64,
        distance: u64,
        required: u64,
    },

    #[error("graph did not pass unique-neighbor verification; refusing to build code")]
    GraphNotVerified,

    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

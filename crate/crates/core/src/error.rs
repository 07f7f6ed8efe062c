use thiserror::Error;

/// Errors raised by the library.
///
/// Variants up to `Parse` describe invalid input and are reported by the CLI
/// with exit code 2; `Invariant` signals an internal inconsistency.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NotOdd: characteristic 2 is not supported")]
    NotOdd,
    #[error("NotPrimeCharacteristic: {0} is not prime")]
    NotPrimeCharacteristic(u64),
    #[error("NotNonKummer: q = {q} satisfies q mod 3 = {residue}, expected 2")]
    NotNonKummer { q: u64, residue: u64 },
    #[error("TooLarge: {0}")]
    TooLarge(String),
    #[error("LevelMismatch: {0}")]
    LevelMismatch(&'static str),
    #[error("NotCubeRoot: element does not satisfy x^3 = 1")]
    NotCubeRoot,
    #[error("NotMonic: polynomial is not monic")]
    NotMonic,
    #[error("NotPrime: polynomial is reducible")]
    NotPrime,
    #[error("NotSquarefree: defining polynomial has a repeated factor")]
    NotSquarefree,
    #[error("HasBaseDivisor: defining polynomial is divisible by {0}")]
    HasBaseDivisor(String),
    #[error("NotPrimitive: character is not primitive")]
    NotPrimitive,
    #[error("OddGenus: genus {0} is odd")]
    OddGenus(u32),
    #[error("SeriesDiverges: |x| = {0} >= 1")]
    SeriesDiverges(f64),
    #[error("OutOfRegion: {0}")]
    OutOfRegion(String),
    #[error("PoleAt: q^(1-s) = 1")]
    PoleAt,
    #[error("TailTooLarge: heuristic tail {tail:e} exceeds tolerance {tolerance:e}")]
    TailTooLarge { tail: f64, tolerance: f64 },
    #[error("NonzeroRemainder: L-polynomial does not vanish at u = 1")]
    NonzeroRemainder,
    #[error("Parse: {0}")]
    Parse(String),
    #[error("Invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by invalid user input (as opposed to internal failures).
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Invariant(_) | Error::NonzeroRemainder)
    }
}

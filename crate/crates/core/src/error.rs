//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{p}^{r} overflows the supported field size (q <= 2^31)")]
    FieldTooLarge { p: u64, r: u32 },

    #[error("element has {got} coefficients, field has degree {expected}")]
    BadElementShape { got: usize, expected: usize },

    #[error("coefficient {value} out of range for characteristic {p}")]
    CoefficientRange { value: u64, p: u64 },

    #[error("element with index {0} is not primitive")]
    NotPrimitive(u64),

    #[error("order {m} does not divide q - 1 = {q_minus_1}")]
    OrderDoesNotDivide { m: u64, q_minus_1: u64 },

    #[error("closed-form cyclotomic numbers are only available for m in {{2, 3, 4}}, got {0}")]
    NoClosedForm(u64),

    #[error("closed-form numerator {numerator} is not divisible by {denominator} (entry {a},{b}); wrong u/v or sign")]
    NonIntegralEntry {
        numerator: i64,
        denominator: i64,
        a: u64,
        b: u64,
    },

    #[error("no representation {0} admits the required (u, v) decomposition")]
    NoUvRepresentation(u64),

    #[error("neither sign of v matches the brute-force table for q = {0}; calibration bug")]
    VSignMismatch(u64),

    #[error("cyclotomic tables have different orders: {0} vs {1}")]
    OrderMismatch(u64, u64),

    #[error("connection set contains the identity")]
    IdentityInConnectionSet,

    #[error("connection set is not closed under negation: element {element} lacks {negation}")]
    AsymmetricConnectionSet { element: u64, negation: u64 },

    #[error("group-ring vector has length {got}, group has order {expected}")]
    GroupSizeMismatch { got: usize, expected: usize },

    #[error("graph would be directed: q1*n1 = {q1n1} and q2*n2 = {q2n2} differ in parity")]
    DirectedGamma { q1n1: u64, q2n2: u64 },

    #[error("vertex {0} out of range for graph of order {1}")]
    VertexRange(usize, usize),

    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("graph JSON invalid: {0}")]
    GraphJson(String),

    #[error("graph is not connected")]
    NotConnected,

    #[error("graph has diameter {got}, expected {expected}")]
    WrongDiameter { got: usize, expected: usize },

    #[error("graph is not distance-regular: intersection number {name} differs between pairs at distance {distance} ({first} vs {second})")]
    NotDistanceRegular {
        name: &'static str,
        distance: usize,
        first: usize,
        second: usize,
    },

    #[error("distance-3-or-0 relation is not an equivalence with constant class size: {0}")]
    NotAntipodal(String),

    #[error("antipodal class size {a} does not properly divide lambda + 2 = {lambda_plus_2}")]
    BadAntipodalDivisor { a: usize, lambda_plus_2: usize },

    #[error("{p} and {q} must be distinct odd primes with q - 1 dividing p - 1")]
    BadWhitemanPrimes { p: u64, q: u64 },

    #[error("{alpha} is not a primitive root of both {p} and {q}")]
    NotCommonPrimitiveRoot { alpha: u64, p: u64, q: u64 },

    #[error(
        "t = (|K0 ∩ (K0+1)| + 2)/q is not an integer: |K0 ∩ (K0+1)| = {intersection}, q = {q}"
    )]
    NonIntegralT { intersection: usize, q: u64 },

    #[error("no unit x makes the power classes partition (Z/{0}Z)*")]
    NoPartitionWitness(u64),

    #[error("expected {expected} permutations of degree {degree}, got {got}")]
    BadPermutations {
        expected: usize,
        degree: usize,
        got: usize,
    },

    #[error("supplied vertex set is not a clique: {u} and {v} are non-adjacent")]
    NotAClique { u: usize, v: usize },

    #[error("graph of order {n} exceeds the refinement cap {cap}")]
    WlCapExceeded { n: usize, cap: usize },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

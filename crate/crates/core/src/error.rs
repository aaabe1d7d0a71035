use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("base field order {0} is not prime")]
    NotPrime(u32),
    #[error("polynomial has degree {found}, expected {expected}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("coefficient {coeff} is not reduced modulo {q}")]
    CoefficientOutOfRange { coeff: u32, q: u32 },
    #[error("polynomial is not primitive (order of x is {order_of_x})")]
    NotPrimitive { order_of_x: u64 },
    #[error("no default primitive polynomial for q={q}, n={n}; pass one explicitly")]
    NoDefaultAvailable { q: u32, n: u32 },
    #[error("field GF({q}^{n}) is too large to tabulate")]
    TooLarge { q: u32, n: u32 },
    #[error("exponent {exponent} out of range (group order {order})")]
    ExponentOutOfRange { exponent: u64, order: u32 },
    #[error("the zero vector has no discrete logarithm")]
    ZeroVectorHasNoLog,
    #[error("cannot parse polynomial {0:?}")]
    BadPolynomial(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("subspaces belong to different fields")]
    MixedFields,
    #[error("empty generator list")]
    NoGenerators,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error("dimension k={k} outside 1..={n}")]
    BadDimension { k: u32, n: u32 },
    #[error("enumeration needs {needed} spans, above the cap of {cap}")]
    ResourceCap { needed: u128, cap: u64 },
    #[error("orbit has a single member; its minimum distance is undefined")]
    SingletonOrbit,
    #[error("both arguments are the same orbit")]
    SameOrbit,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("distance must be positive (got {d}; largest meaningful value is {max})")]
    BadDistance { d: u32, max: u32 },
    #[error("fixed vertex set is not a clique")]
    FixedNotClique,
    #[error("vertex {0} out of range")]
    NoSuchVertex(usize),
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("t={t} does not divide n={n}")]
    BadStabilizer { t: u32, n: u32 },
    #[error("certificate is malformed: {0}")]
    BadCertificate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

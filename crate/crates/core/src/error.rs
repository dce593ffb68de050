use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // metric spaces
    #[error("distance matrix is not square with one row per point")]
    NotSquare,
    #[error("base point {0} is not a point of the space")]
    BaseOutOfRange(String),
    #[error("d({0},{0}) is not zero")]
    NonzeroDiagonal(String),
    #[error("negative distance d({x},{y})")]
    NegativeDistance { x: String, y: String },
    #[error("distinct points {x} and {y} at distance zero")]
    ZeroDistanceDistinctPoints { x: String, y: String },
    #[error("d({x},{y}) differs from d({y},{x})")]
    AsymmetricMatrix { x: String, y: String },
    #[error("triangle inequality fails: d({x},{z}) > d({x},{y}) + d({y},{z})")]
    TriangleViolation { x: String, y: String, z: String },
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("empty point set")]
    EmptySet,
    #[error("sides of the partition overlap")]
    OverlappingSides,
    #[error("sides do not cover the space")]
    NotCovering,
    #[error("perturbation {delta} is not below the side distance {side_distance}")]
    DeltaTooLarge { delta: f64, side_distance: f64 },
    #[error("need at least two points")]
    TooFewPoints,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    // free spaces
    #[error("molecule with equal endpoints {0}")]
    DegeneratePair(String),
    #[error("objects live on different spaces")]
    SpaceMismatch,
    #[error("term {term}: chain endpoints do not match or chain is not geodesic")]
    NotAGeodesicChain { term: usize },
    #[error("{terms} terms is too many for exact enumeration")]
    TooManyTermsForExact { terms: usize },
    #[error("function is not Lipschitz with the given constant on ({x},{y})")]
    NotLipschitzOnS { x: String, y: String },
    #[error("the base point must belong to the domain with value zero")]
    BaseNotInDomain,
    #[error("supports of functions {i} and {j} meet")]
    SupportsNotDisjoint { i: usize, j: usize },
    #[error("function {index} is not in the unit ball")]
    NotInUnitBall { index: usize },
    #[error("empty family")]
    EmptyFamily,
    #[error("linear program is infeasible")]
    LpInfeasible,
    #[error("linear program is unbounded")]
    LpUnbounded,
    #[error("iteration limit reached")]
    IterationLimit,

    // trees
    #[error("objects belong to different trees")]
    DifferentTrees,
    #[error("point is not on the tree")]
    PointOffTree,
    #[error("not a subtree containing the root")]
    NotASubtree,
    #[error("edge list is not a rooted tree: {0}")]
    NotATree(String),

    // constructions
    #[error("ratio must lie in (0, 1/3]")]
    BadRatio,
    #[error("level {n} exceeds scheme depth {depth}")]
    DepthExceeded { n: usize, depth: usize },
    #[error("family element {0} is not a convex sum of molecules")]
    NotConvexFamily(usize),
    #[error("no subsequence reaches the target within the budget")]
    TargetUnreachableAtBudget,
    #[error("scheme violates the interval conditions at {0}")]
    InvalidScheme(String),

    // harness
    #[error("hypothesis unsatisfied: {0}")]
    HypothesisUnsatisfied(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

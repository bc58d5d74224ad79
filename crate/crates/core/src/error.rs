use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("group classes live over different primes ({left} and {right})")]
    PrimeMismatch { left: u32, right: u32 },

    #[error("malformed partition {input:?}: {reason}")]
    Partition { input: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    /// Chain enumeration refused because the open interval is too large.
    #[error(
        "chain blowup guard: open interval has {members} members, limit is {limit} \
         (use the convolution evaluator or raise ELLPOS_MAX_INTERVAL)"
    )]
    ChainBlowup { members: usize, limit: usize },

    #[error("group of order {order} exceeds the oracle cap of {cap} elements")]
    OrderCap { order: u128, cap: usize },

    #[error("subgroup is not a member of this lattice")]
    NotInLattice,

    /// A formula produced an impossible value; always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for refusals issued by a resource guard rather than bad input.
    pub fn is_resource_guard(&self) -> bool {
        matches!(self, Error::ChainBlowup { .. } | Error::OrderCap { .. })
    }
}

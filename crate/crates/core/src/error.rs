use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `|V_b(m)| > |hbar omega + V_a(m)|` or a non-positive mode energy.
    #[error("model invalid at mode m={m}: V_a={va}, V_b={vb} ({reason})")]
    ModelInvalid {
        m: usize,
        va: f64,
        vb: f64,
        reason: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence in {context}: estimated error {error:e} after {work} steps")]
    NonConvergence {
        context: String,
        error: f64,
        work: usize,
    },

    #[error("level range too small for m_cut={m_cut}: {dropped} boundary bilinears dropped, {kept} kept")]
    BasisTooSmall {
        m_cut: usize,
        dropped: usize,
        kept: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

//! Exact arithmetic over the perfect closure of `F_q(x)` and the operator
//! calculus of the Carlitz ring.

pub mod error;
pub mod field;
pub mod gkdim;
pub mod linfun;
mod ntt;
pub mod perfect;
pub mod place;
pub mod poly;
pub mod rank;
pub mod ring;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldConfig, Fq, FqElem};
pub use perfect::{bracket, PerfectPoly, PerfectRational, QExp, RationalJson};
pub use place::{irreducibles, Place, Valuation};
pub use poly::Poly;
pub use linfun::{series_compare, LinFun, LinFunJson, LinMonomial, SeriesComparison, TruncatedSeries};
pub use special::{compose_diagonal, CarlitzCache, VandermondeTable};
pub use ring::{dim_gamma, CarlitzRing, OpMonomial, RingElem, RingElemJson};
pub use rank::{exact_rank, probabilistic_rank, rank, RankMode, RankResult};
pub use gkdim::{
    filtration_dims, gk_dimension, hilbert_fit, module_f_dims, Classification, FiltrationReport, HilbertFit,
    MatrixModuleA1,
};
pub use verify::{VandermondeForm, VerifyReport};

//! Lie-algebra and frame computations behind the intrinsic Laplacian.

mod algebra;
mod field;
mod frame;
mod rank;

pub use algebra::{
    aff_plus_r, builtin, heisenberg, se2, se2_matrices, sl2, sl2_matrices, so3, so3_matrices, su2,
    su2_matrices, LieAlgebraSpec, STRUCTURE_TOL,
};
pub use field::{
    intrinsic_laplacian_coeffs_at_point, laplacian_coeffs_fd, popp_jet_fd, AffPlusRFrame, FrameField,
    GrushinFrame, HeisenbergFrame, MartinetFrame, PoppJet, Se2Frame, DEFAULT_FD_STEP,
};
pub use frame::{BracketWord, FramePointData};
pub use rank::{pinv, rank, RANK_RTOL};

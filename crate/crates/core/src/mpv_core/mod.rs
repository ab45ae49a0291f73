//! Matrix product vectors: contraction, transfer maps, normality, canonical
//! form and gauges between equivalent tensors.

mod canonical;
mod gauge;
mod pair;
mod tensor;
mod transfer;

pub use canonical::{
    canonical_form, canonical_form_with_limit, cfii_gauge, BlockCopy, BntBlock, CanonicalFormResult, CfiiGauge,
};
pub(crate) use gauge::cf_blocks;
pub use gauge::{
    find_gauge_between, mpv_distance, mpv_overlap, n_check, normalize_similarity, similarity_between, GaugeRelation,
};
pub use pair::{block_pair, pair_decompose, PairComponent, PairDecomposition};
pub use tensor::{
    block, block_with_limit, contract_mpv, contract_mpv_with_limit, contract_pair, contract_pair_with_limit,
    vector_norm, vector_rel_diff, MpsTensor, TensorPair, DEFAULT_SIZE_LIMIT,
};
pub use transfer::{
    apply_dual_transfer, apply_transfer, injectivity_length, is_injective, is_normal, left_fixed_point,
    mixed_transfer_matrix, peripheral_count, right_fixed_point, spectral_radius, transfer_matrix, transfer_spectrum,
    NormalCheck, Normality, PERIPHERAL_TOL,
};

//! Matrices over `Q_p`, Weyl bookkeeping, the Iwahori–Iwasawa
//! decomposition and the special matrices.

pub mod decompose;
pub mod matrix;
pub mod random;
pub mod special;
pub mod weyl;

pub use decompose::{coset_key, decompose, torus_weyl, CosetKey, IwasawaData};
pub use matrix::{membership, GMatrix, Subgroup};
pub use special::{epsilon, lambda_n, special_matrix, verify_matrix_identities, IdentityCheck, Kind};
pub use weyl::WeylElement;

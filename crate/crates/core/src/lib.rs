//! Joint numerical radius of matrix tuples, its subdifferential, and
//! Birkhoff-James orthogonality / best approximation certificates.
//!
//! A tuple `A = (A_1, ..., A_d)` of `n x n` complex matrices has joint
//! numerical radius `ω(A) = max_{|x|=1} (Σ_k |⟨x|A_k x⟩|^2)^{1/2}`.

pub mod error;
pub mod linalg;
pub mod radius;
pub mod subdifferential;
pub mod orthogonality;
pub mod approximation;
pub mod oracle;
pub mod cli;

pub use error::{Error, Result};

pub(crate) mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn serialize_scalar<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

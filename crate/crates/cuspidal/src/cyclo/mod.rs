//! Exact values in Z[zeta_n], `n = p (p^2 - 1)`: the ring itself plus the
//! Gauss sums and Bessel numerators built from it.

mod ring;
mod sums;

pub use ring::{Acc, CycInt, Cyclo, CycloError};
pub use sums::{
    bessel_num, bessel_terms, epsilon_p, gauss_data, gauss_sum, psi, reduce_to_fq2, GaussData, SumError, Terms,
};

use crate::error::Result;
use crate::scalar::{percent, Scalar};
use crate::sdr::Sdr;

/// Accuracy observed at one executed time step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AccuracyRecord<T> {
    pub t: u64,
    pub accuracy_percent: T,
}

/// `100 * (positions where a == b) / len`.
pub fn percent_accuracy<T: Scalar>(a: &Sdr, b: &Sdr) -> Result<T> {
    Ok(percent(a.agreement(b)?, a.len()))
}

/// Fraction of active bits.
pub fn density<T: Scalar>(a: &Sdr) -> T {
    if a.is_empty() {
        return T::zero();
    }
    T::of_usize(a.count_ones()) / T::of_usize(a.len())
}

/// Share of `reference`'s active bits that `candidate` also has, in percent.
/// An empty reference counts as fully recovered.
pub fn active_overlap_percent<T: Scalar>(reference: &Sdr, candidate: &Sdr) -> Result<T> {
    let shared = reference.overlap(candidate)?;
    Ok(percent(shared, reference.count_ones()))
}

//! Agreement probabilities, their design bounds, and Rényi entropies.

use crate::refdevice::{ProbabilityVector, ReferenceDevice};
use crate::scalar::{count, real, Scalar};
use crate::{Error, Result};

/// Probability that `t` copies of the reference device, fed the states
/// behind the given distributions, all produce the same outcome:
/// `Σ_i Π_j p_{j,i}`.
pub fn agreement_probability<T: Scalar>(
    device: &ReferenceDevice<T>,
    probs: &[&ProbabilityVector<T>],
) -> Result<T> {
    if probs.len() < 2 {
        return Err(Error::InvalidInput(
            "agreement needs at least two distributions".into(),
        ));
    }
    let n = device.outcomes();
    if let Some(bad) = probs.iter().find(|p| p.len() != n) {
        return Err(Error::InvalidInput(format!(
            "distribution of length {} on a device with {n} outcomes",
            bad.len()
        )));
    }
    let mut total = T::zero();
    for i in 0..n {
        let mut product = T::one();
        for p in probs {
            product = product * p.values()[i];
        }
        total = total + product;
    }
    Ok(total)
}

/// Design bounds on the order-`t` agreement probability of an unbiased
/// t-design device with `σ ∝ E`:
///
/// * `t = 2`: `[(d/n)/(d+1), (d/n)·2/(d+1)]`;
/// * `t = 3`: `[(d/n)²/((d+1)(d+2)), (d/n)²·6/((d+1)(d+2))]`.
///
/// The upper bounds are saturated by identical pure inputs, the lower by
/// mutually orthogonal ones.
pub fn agreement_bounds<T: Scalar>(d: usize, n: usize, t: usize) -> Result<(T, T)> {
    let one = T::one();
    let two = one + one;
    let ratio = count::<T>(d) / count::<T>(n);
    let dp1 = count::<T>(d) + one;
    let dp2 = dp1 + one;
    match t {
        2 => Ok((ratio / dp1, ratio * two / dp1)),
        3 => {
            let base = ratio * ratio / (dp1 * dp2);
            Ok((base, base * (two + two + two)))
        }
        _ => Err(Error::Unsupported(format!(
            "agreement bounds are available for t in {{2, 3}}, got {t}"
        ))),
    }
}

/// Order-`t` Rényi entropy `(1/(1−t)) ln Σ_i p_i^t` (natural logarithm).
///
/// Defined for real orders `t > 0`, `t ≠ 1`; the distribution must be
/// normalized. Entries within [`crate::refdevice::TOL_NEGATIVE_PROB`] of
/// zero are clamped before exponentiation.
pub fn renyi_entropy<T: Scalar>(probs: &ProbabilityVector<T>, order: T) -> Result<T> {
    if order <= T::zero() || order == T::one() {
        return Err(Error::Unsupported(format!(
            "Rényi entropy is implemented for orders t > 0, t ≠ 1, got {order}"
        )));
    }
    if !probs.is_normalized(real(1e-10)) {
        return Err(Error::InvalidInput(format!(
            "distribution sums to {}, not 1",
            probs.sum()
        )));
    }
    if probs.min_entry() < -real::<T>(crate::refdevice::TOL_NEGATIVE_PROB) {
        return Err(Error::InvalidInput(format!(
            "distribution has negative entry {}",
            probs.min_entry()
        )));
    }
    let mut moment = T::zero();
    for v in probs.values() {
        let clamped = v.max(T::zero());
        moment = moment + clamped.powf(order);
    }
    Ok(moment.ln() / (T::one() - order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::mub_qubit;
    use crate::operators::PureState;
    use crate::refdevice::{PhiSelection, ReferenceDevice};

    fn mub_device() -> ReferenceDevice<f64> {
        ReferenceDevice::from_design(&mub_qubit(), PhiSelection::Auto).unwrap()
    }

    fn basis_probs(device: &ReferenceDevice<f64>, index: usize) -> ProbabilityVector<f64> {
        device
            .probs_of_state(&PureState::<f64>::basis(2, index).projector())
            .unwrap()
    }

    #[test]
    fn orthogonal_pair_saturates_lower_bound() {
        let device = mub_device();
        let p0 = basis_probs(&device, 0);
        let p1 = basis_probs(&device, 1);
        let agree = agreement_probability(&device, &[&p0, &p1]).unwrap();
        assert!((agree - 1.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn identical_pure_pair_saturates_upper_bound() {
        let device = mub_device();
        let p0 = basis_probs(&device, 0);
        let agree = agreement_probability(&device, &[&p0, &p0]).unwrap();
        assert!((agree - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn identical_pure_triple_saturates_upper_bound() {
        let device = mub_device();
        let p0 = basis_probs(&device, 0);
        let agree = agreement_probability(&device, &[&p0, &p0, &p0]).unwrap();
        assert!((agree - 1.0 / 18.0).abs() < 1e-14);
    }

    #[test]
    fn bound_values() {
        let (lo2, hi2) = agreement_bounds::<f64>(2, 6, 2).unwrap();
        assert!((lo2 - 1.0 / 9.0).abs() < 1e-15);
        assert!((hi2 - 2.0 / 9.0).abs() < 1e-15);
        let (lo3, hi3) = agreement_bounds::<f64>(2, 6, 3).unwrap();
        assert!((lo3 - 1.0 / 108.0).abs() < 1e-15);
        assert!((hi3 - 1.0 / 18.0).abs() < 1e-15);
        let (lo, hi) = agreement_bounds::<f64>(4, 60, 3).unwrap();
        let base = (1.0_f64 / 15.0).powi(2);
        assert!((lo - base / 30.0).abs() < 1e-18);
        assert!((hi - base / 5.0).abs() < 1e-18);
        assert!(agreement_bounds::<f64>(2, 6, 4).is_err());
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let device = mub_device();
        let p0 = basis_probs(&device, 0);
        let short = ProbabilityVector::new(vec![0.5, 0.5]);
        assert!(agreement_probability(&device, &[&p0, &short]).is_err());
        assert!(agreement_probability(&device, &[&p0]).is_err());
    }

    #[test]
    fn renyi_uniform_is_log_n() {
        let p = ProbabilityVector::<f64>::uniform(6);
        for order in [0.5, 2.0, 3.0, 7.5] {
            let h = renyi_entropy(&p, order).unwrap();
            assert!((h - 6.0_f64.ln()).abs() < 1e-12, "order {order}");
        }
    }

    #[test]
    fn renyi_of_pure_state_hits_design_minimum() {
        let device = mub_device();
        let p0 = basis_probs(&device, 0);
        let h2 = renyi_entropy(&p0, 2.0).unwrap();
        assert!((h2 - -(2.0_f64 / 9.0).ln()).abs() < 1e-12);
        let h3 = renyi_entropy(&p0, 3.0).unwrap();
        assert!((h3 - -0.5 * (1.0_f64 / 18.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn renyi_rejects_order_one_and_unnormalized() {
        let p = ProbabilityVector::<f64>::uniform(4);
        assert!(matches!(renyi_entropy(&p, 1.0), Err(Error::Unsupported(_))));
        assert!(matches!(renyi_entropy(&p, 0.0), Err(Error::Unsupported(_))));
        let bad = ProbabilityVector::new(vec![0.5, 0.2]);
        assert!(matches!(
            renyi_entropy(&bad, 2.0),
            Err(Error::InvalidInput(_))
        ));
    }
}

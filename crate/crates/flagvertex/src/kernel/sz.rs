//! Randomized exact identity testing (Schwartz–Zippel style).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::scalar::{random_distinct, Q};
use crate::error::Result;

/// Outcome of a randomized comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SzOutcome {
    /// Both sides agreed at every sampled point.
    Equal { trials: usize },
    /// A point where the two sides differ.
    Witness { point: Vec<Q>, lhs: Q, rhs: Q },
}

impl SzOutcome {
    pub fn is_equal(&self) -> bool {
        matches!(self, SzOutcome::Equal { .. })
    }
}

/// Compare two evaluators at `trials` random generic points in `nvars` variables.
///
/// Points whose evaluation hits a pole are resampled (up to 20 attempts per
/// trial); if every attempt fails the last pole error is returned.
pub fn sz_compare<F, G>(nvars: usize, f: F, g: G, trials: usize, seed: u64) -> Result<SzOutcome>
where
    F: Fn(&[Q]) -> Result<Q>,
    G: Fn(&[Q]) -> Result<Q>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < trials {
        attempts += 1;
        let x = random_distinct(&mut rng, nvars);
        let r = f(&x).and_then(|l| g(&x).map(|r| (l, r)));
        match r {
            Ok((l, r)) => {
                if l != r {
                    return Ok(SzOutcome::Witness { point: x, lhs: l, rhs: r });
                }
                done += 1;
            }
            Err(e) if e.is_pole() && attempts < 20 * trials.max(1) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(SzOutcome::Equal { trials })
}

/// Boolean form of [`sz_compare`].
pub fn sz_equal<F, G>(nvars: usize, f: F, g: G, trials: usize, seed: u64) -> Result<bool>
where
    F: Fn(&[Q]) -> Result<Q>,
    G: Fn(&[Q]) -> Result<Q>,
{
    Ok(sz_compare(nvars, f, g, trials, seed)?.is_equal())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntactic_equality() {
        let f = |x: &[Q]| Ok(&x[0] * &x[1] + &x[0]);
        assert!(sz_equal(2, f, f, 10, 7).unwrap());
    }

    #[test]
    fn square_differs() {
        let out = sz_compare(1, |x| Ok(x[0].clone()), |x| Ok(&x[0] * &x[0]), 5, 1).unwrap();
        assert!(!out.is_equal());
    }

    #[test]
    fn deterministic_under_seed() {
        let f = |x: &[Q]| Ok(x[0].clone());
        let g = |x: &[Q]| Ok(&x[0] + &x[1] - &x[1]);
        let a = sz_compare(2, f, g, 5, 42).unwrap();
        let b = sz_compare(2, f, g, 5, 42).unwrap();
        assert_eq!(a, b);
    }
}

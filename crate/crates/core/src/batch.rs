//! Data-parallel evaluation of independent cases.
//!
//! Every operation in this crate is a pure function over immutable values,
//! so batches of cases (randomized roundtrips, sweeps, matrix batteries) can
//! be mapped in parallel with no shared state. The `parallel` feature (on by
//! default) backs [`map_cases`] with rayon; without it the sequential path
//! is used. Both paths are exported so they can be benchmarked against each
//! other.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map a function over independent cases, in parallel when the `parallel`
/// feature is enabled.
pub fn map_cases<T, U, F>(cases: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    #[cfg(feature = "parallel")]
    {
        map_cases_par(cases, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_cases_seq(cases, f)
    }
}

/// Sequential reference path.
pub fn map_cases_seq<T, U, F>(cases: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    cases.iter().map(f).collect()
}

/// Rayon-backed path.
#[cfg(feature = "parallel")]
pub fn map_cases_par<T, U, F>(cases: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    cases.into_par_iter().map(|case| f(&case)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let cases: Vec<u64> = (0..500).collect();
        let seq = map_cases_seq(cases.clone(), |x| x * x);
        let via_default = map_cases(cases.clone(), |x| x * x);
        assert_eq!(seq, via_default);
        #[cfg(feature = "parallel")]
        {
            let par = map_cases_par(cases, |x| x * x);
            assert_eq!(seq, par);
        }
    }
}

//! Sequential or data-parallel evaluation of independent terms.
//!
//! Exact rational addition is associative and commutative, so a parallel
//! reduction yields the same value as a sequential fold.

/// How independent terms (comb strata, sweep points) are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled and falls
    /// back to [`Execution::Sequential`] otherwise.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `Σ_{i in 0..count} term(i)`, summed with `add` starting from `zero`.
    pub fn sum<T, F, A>(self, count: u64, zero: T, term: F, add: A) -> T
    where
        T: Clone + Send + Sync,
        F: Fn(u64) -> T + Send + Sync,
        A: Fn(T, T) -> T + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..count)
                .into_par_iter()
                .map(&term)
                .reduce(|| zero.clone(), &add);
        }
        (0..count).map(term).fold(zero, add)
    }

    /// `Σ term(i)` where each term may fail; the first error (in index
    /// order for sequential runs) is returned.
    pub fn try_sum<T, E, F, A>(self, count: u64, zero: T, term: F, add: A) -> Result<T, E>
    where
        T: Clone + Send + Sync,
        E: Send + Sync,
        F: Fn(u64) -> Result<T, E> + Send + Sync,
        A: Fn(T, T) -> T + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..count)
                .into_par_iter()
                .map(&term)
                .try_reduce(|| zero.clone(), |a, b| Ok(add(a, b)));
        }
        let mut acc = zero;
        for i in 0..count {
            acc = add(acc, term(i)?);
        }
        Ok(acc)
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}

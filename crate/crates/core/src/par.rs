//! Index-space map with a rayon backend and a sequential fallback.
//!
//! Results are always collected in index order, so any reduction done
//! afterwards is independent of the schedule.

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is off.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub fn map<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Like [`map`], but the first error in index order wins.
pub fn try_map<T, F>(exec: Execution, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    map(exec, n, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let a = map(Execution::Sequential, 1000, f);
        let b = map(Execution::Parallel, 1000, f);
        assert_eq!(a, b);
    }

    #[test]
    fn first_error_in_index_order() {
        let r: Result<Vec<usize>> = try_map(Execution::Parallel, 100, |i| {
            if i % 7 == 3 {
                Err(crate::Error::Numerical(format!("{i}")))
            } else {
                Ok(i)
            }
        });
        assert_eq!(r, Err(crate::Error::Numerical("3".into())));
    }
}

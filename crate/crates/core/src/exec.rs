//! Execution strategy: the same kernels run data-parallel (rayon) or
//! sequentially. Results never depend on the strategy; reductions are done
//! in a fixed order after the parallel map.

/// How a kernel distributes independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// The default strategy of the build: parallel when the `parallel`
    /// feature is enabled, sequential otherwise.
    pub fn auto() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// Ordered map over a slice. Output order always matches input order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Ordered map over an index range.
pub fn map_range<R, F>(strategy: Strategy, range: std::ops::Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(f).collect()
        }
        _ => range.map(f).collect(),
    }
}

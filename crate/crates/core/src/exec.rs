//! Evaluation strategy for embarrassingly parallel sweeps (tables, scans,
//! residual grids). With the default `parallel` feature the work is spread
//! across a rayon pool; without it the same call runs sequentially. Either
//! way results come back in input order, so output is identical. The `_seq`
//! variant is always sequential and stays public for benchmark comparison.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

pub fn map_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

//! Execution mode for the data-parallel kernels.
//!
//! With the `parallel` feature disabled every mode runs sequentially.
//! Results never depend on the mode: parallel maps collect in input order.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, G>(self, items: &[T], f: G) -> Vec<R>
    where
        T: Sync,
        R: Send,
        G: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Applies `f` to every element of `items` in place.
    pub fn for_each_mut<T, G>(self, items: &mut [T], f: G)
    where
        T: Send,
        G: Fn(&mut T) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel && items.len() > 1 {
            use rayon::prelude::*;
            items.par_iter_mut().for_each(f);
            return;
        }
        items.iter_mut().for_each(f)
    }
}

//! Data-parallel helpers over independent runs and chains.
//!
//! With the `parallel` feature (default) work is spread over the rayon pool;
//! without it the same functions run sequentially. Every unit of work owns
//! its own [`RngStream`](crate::RngStream), so results are identical either
//! way and always come back in input order.

use crate::error::Result;

/// Apply `f` to every seed, in input order.
pub fn map_seeds<R, F>(seeds: &[u64], f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_seeds_parallel(seeds, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seeds_sequential(seeds, f)
    }
}

pub fn map_seeds_sequential<R, F>(seeds: &[u64], f: F) -> Vec<R>
where
    F: Fn(u64) -> R,
{
    seeds.iter().map(|&s| f(s)).collect()
}

#[cfg(feature = "parallel")]
pub fn map_seeds_parallel<R, F>(seeds: &[u64], f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    use rayon::prelude::*;
    seeds.par_iter().map(|&s| f(s)).collect()
}

/// Run `f` on every item; the first error in item order wins.
pub fn for_each_mut<T, F>(items: &mut [T], f: F) -> Result<()>
where
    T: Send,
    F: Fn(&mut T) -> Result<()> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let results: Vec<Result<()>> = {
        use rayon::prelude::*;
        items.par_iter_mut().map(f).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<()>> = items.iter_mut().map(f).collect();
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::rng::RngStream;

    #[test]
    fn order_is_preserved() {
        let seeds: Vec<u64> = (0..64).collect();
        let draw = |s| RngStream::new(s).uniform();
        assert_eq!(map_seeds(&seeds, draw), map_seeds_sequential(&seeds, draw));
    }

    #[test]
    fn first_error_wins() {
        let mut items = vec![0, 1, 2, 3];
        let r = for_each_mut(&mut items, |x| {
            *x += 10;
            if *x >= 12 {
                Err(Error::Domain(x.to_string()))
            } else {
                Ok(())
            }
        });
        assert_eq!(r, Err(Error::Domain("12".into())));
        assert_eq!(items, vec![10, 11, 12, 13]);
    }
}

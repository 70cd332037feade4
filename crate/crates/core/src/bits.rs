//! Word-level helpers for subsets stored as `u64` masks.

/// Indices of the set bits, lowest first.
pub(crate) fn ones(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

pub(crate) fn count(mask: u64) -> usize {
    mask.count_ones() as usize
}

/// Mask with the low `n` bits set. `n` may be 64.
pub(crate) fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn least(mask: u64) -> usize {
    mask.trailing_zeros() as usize
}

//! Inversions of an integer labelling with respect to a strict partial order.

/// Counts unordered pairs `{a, b}` of `0..len` with `a < b` in the order but
/// `pi[b] < pi[a]`. Equal labels are never an inversion.
pub fn count_inversions<F>(len: usize, less: F, pi: &[i64]) -> u64
where
    F: Fn(usize, usize) -> bool,
{
    assert_eq!(pi.len(), len, "labelling must be total on the ground set");
    let mut count = 0u64;
    for a in 0..len {
        for b in 0..len {
            if a != b && less(a, b) && pi[b] < pi[a] {
                count += 1;
            }
        }
    }
    count
}

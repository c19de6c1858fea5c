//! Small index combinatorics shared by the bracket tables.

/// Sorts four indices, returning the permutation sign, or `None` when an
/// index repeats (totally antisymmetric quantities vanish there).
pub(crate) fn quadruple_sign(mut idx: [usize; 4]) -> Option<([usize; 4], i64)> {
    let mut swaps = 0u32;
    for i in 0..4 {
        for j in 0..3 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                swaps += 1;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx, if swaps % 2 == 0 { 1 } else { -1 }))
}

//! Continuous labelling of eigenvalue branches along a sampled path.

use crate::eigen::{eig2, EigenSystem2};
use crate::error::Result;
use crate::matrix::ComplexMatrix2;

/// Relative gap below which a sample is reported as ambiguous.
pub const AMBIGUOUS_GAP_REL: f64 = 1e-12;

/// Result of branch tracking.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BranchTracking {
    /// `order[i][k]` is the raw index (0 = plus, 1 = minus) holding tracked
    /// branch `k` at sample `i`. The first sample has the identity order.
    pub order: Vec<[usize; 2]>,
    /// The final labelling differs from the initial one.
    pub swapped: bool,
    /// Interior samples whose relative gap fell below [`AMBIGUOUS_GAP_REL`].
    pub ambiguous: Vec<usize>,
}

/// Projection weight of `next`'s right eigenvectors on `prev`'s modes.
///
/// Entry `[k][k']` is `|l_prev,k · r_next,k'| / |l_prev,k · r_prev,k|`, which
/// is close to one for the continuation of mode `k` and close to zero for
/// the other mode.
fn scores(prev: &EigenSystem2, next: &EigenSystem2) -> [[f64; 2]; 2] {
    let mut s = [[0.0; 2]; 2];
    for (k, row) in s.iter_mut().enumerate() {
        let norm = prev.norm_c(k).norm().max(f64::MIN_POSITIVE);
        for (kk, v) in row.iter_mut().enumerate() {
            *v = prev.left(k).dot(&next.right(kk)).norm() / norm;
        }
    }
    s
}

/// Whether the step `prev → next` exchanges the raw labels, and the margin
/// between the two assignments.
fn step_swap(prev: &EigenSystem2, next: &EigenSystem2) -> (bool, f64) {
    let s = scores(prev, next);
    let keep = s[0][0] + s[1][1];
    let cross = s[0][1] + s[1][0];
    (cross > keep, (keep - cross).abs() / (keep + cross).max(f64::MIN_POSITIVE))
}

fn is_ambiguous(e: &EigenSystem2) -> bool {
    e.defective || e.gap() < AMBIGUOUS_GAP_REL * e.scale
}

/// Labels branches along `systems` by maximal biorthogonal overlap between
/// consecutive samples.
///
/// The caller is responsible for sampling densely enough that eigenvalues
/// move less than half the local gap between samples. For a closed path the
/// last sample must repeat the first parameter point; `swapped` then signals
/// the square-root exchange around an exceptional point.
pub fn track_branches(systems: &[EigenSystem2]) -> BranchTracking {
    let mut out = BranchTracking::default();
    if systems.is_empty() {
        return out;
    }
    let mut current = [0usize, 1usize];
    out.order.push(current);
    for i in 1..systems.len() {
        let (swap, _) = step_swap(&systems[i - 1], &systems[i]);
        if swap {
            current.swap(0, 1);
        }
        out.order.push(current);
        if i + 1 < systems.len() && is_ambiguous(&systems[i]) {
            out.ambiguous.push(i);
        }
    }
    out.swapped = out.order.last() != out.order.first();
    out
}

/// Tracks branches of `h(s)` for `s` on `[s0, s1]` with `n` uniform
/// intervals, bisecting any interval whose assignment margin is below
/// `min_margin` up to `max_depth` times.
///
/// Returns the eigensystems at the uniform samples together with the
/// tracking over them; refinement only affects how each interval's label
/// exchange is decided.
pub fn track_path<F>(
    h: F,
    s0: f64,
    s1: f64,
    n: usize,
    min_margin: f64,
    max_depth: u32,
) -> Result<(Vec<f64>, Vec<EigenSystem2>, BranchTracking)>
where
    F: Fn(f64) -> ComplexMatrix2,
{
    let n = n.max(1);
    let params: Vec<f64> = (0..=n)
        .map(|i| if i == n { s1 } else { s0 + (s1 - s0) * i as f64 / n as f64 })
        .collect();
    let systems = params.iter().map(|&s| eig2(&h(s))).collect::<Result<Vec<_>>>()?;

    let mut out = BranchTracking::default();
    let mut current = [0usize, 1usize];
    out.order.push(current);
    for i in 1..systems.len() {
        if interval_swap(&h, params[i - 1], &systems[i - 1], params[i], &systems[i], min_margin, max_depth, &mut out.ambiguous, i)? {
            current.swap(0, 1);
        }
        out.order.push(current);
        if i + 1 < systems.len() && is_ambiguous(&systems[i]) && out.ambiguous.last() != Some(&i) {
            out.ambiguous.push(i);
        }
    }
    out.ambiguous.dedup();
    out.swapped = out.order.last() != out.order.first();
    Ok((params, systems, out))
}

#[allow(clippy::too_many_arguments)]
fn interval_swap<F>(
    h: &F,
    sa: f64,
    ea: &EigenSystem2,
    sb: f64,
    eb: &EigenSystem2,
    min_margin: f64,
    depth: u32,
    ambiguous: &mut Vec<usize>,
    index: usize,
) -> Result<bool>
where
    F: Fn(f64) -> ComplexMatrix2,
{
    let (swap, margin) = step_swap(ea, eb);
    if margin >= min_margin || depth == 0 {
        return Ok(swap);
    }
    let sm = 0.5 * (sa + sb);
    let em = eig2(&h(sm))?;
    if is_ambiguous(&em) {
        ambiguous.push(index);
    }
    let first = interval_swap(h, sa, ea, sm, &em, min_margin, depth - 1, ambiguous, index)?;
    let second = interval_swap(h, sm, &em, sb, eb, min_margin, depth - 1, ambiguous, index)?;
    Ok(first ^ second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    fn jordan_family(eps: f64, offset: f64) -> impl Fn(f64) -> ComplexMatrix2 {
        move |theta: f64| {
            ComplexMatrix2::new(
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(offset, 0.0) + Complex64::from_polar(eps, theta),
                Complex64::new(0.0, 0.0),
            )
        }
    }

    #[test]
    fn constant_sequence_has_identity_labels() {
        let e = eig2(&ComplexMatrix2::from_real(1.0, 2.0, 0.5, -1.0)).unwrap();
        let tr = track_branches(&vec![e; 20]);
        assert!(tr.order.iter().all(|o| *o == [0, 1]));
        assert!(!tr.swapped);
        assert!(tr.ambiguous.is_empty());
    }

    #[test]
    fn loop_around_jordan_point_swaps() {
        let f = jordan_family(0.1, 0.0);
        let systems: Vec<_> = (0..=400).map(|i| eig2(&f(TAU * i as f64 / 400.0)).unwrap()).collect();
        assert!(track_branches(&systems).swapped);
        let (_, _, tr) = track_path(&f, 0.0, TAU, 64, 0.5, 12).unwrap();
        assert!(tr.swapped);
    }

    #[test]
    fn loop_not_enclosing_does_not_swap() {
        let f = jordan_family(0.1, 0.5);
        let systems: Vec<_> = (0..=400).map(|i| eig2(&f(TAU * i as f64 / 400.0)).unwrap()).collect();
        assert!(!track_branches(&systems).swapped);
        let (_, _, tr) = track_path(&f, 0.0, TAU, 64, 0.5, 12).unwrap();
        assert!(!tr.swapped);
    }

    #[test]
    fn exact_coalescence_is_flagged() {
        let before = eig2(&ComplexMatrix2::from_real(0.0, 1.0, 0.01, 0.0)).unwrap();
        let at = eig2(&ComplexMatrix2::from_real(0.0, 1.0, 0.0, 0.0)).unwrap();
        let after = eig2(&ComplexMatrix2::from_real(0.0, 1.0, -0.01, 0.0)).unwrap();
        let tr = track_branches(&[before, at, after]);
        assert_eq!(tr.ambiguous, vec![1]);
    }
}

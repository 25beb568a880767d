//! Euclidean projection onto the cone of nonnegative nonincreasing vectors.

use crate::scalar::Scalar;

/// Pool-adjacent-violators: replaces `x` by its least-squares projection onto
/// `{y : y₁ ≥ y₂ ≥ … }`, then clamps at zero.
///
/// Clamping after the isotonic fit gives the projection onto the
/// intersection with the nonnegative orthant, because the fitted blocks are
/// nonincreasing and the clamp only touches a suffix.
pub fn project_nonincreasing_nonnegative<S: Scalar>(x: &mut [S]) {
    // blocks as (sum, count), merged while the block mean increases
    let mut blocks: Vec<(S, usize)> = Vec::with_capacity(x.len());
    for &v in x.iter() {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (s2, c2) = blocks[blocks.len() - 1];
            let (s1, c1) = blocks[blocks.len() - 2];
            // mean1 < mean2  ⇔  s1·c2 < s2·c1
            if s1 * S::of_usize(c2) < s2 * S::of_usize(c1) {
                blocks.pop();
                let last = blocks.last_mut().expect("two blocks present");
                *last = (s1 + s2, c1 + c2);
            } else {
                break;
            }
        }
    }
    let mut i = 0;
    for (sum, count) in blocks {
        let mean = (sum / S::of_usize(count)).max(S::zero());
        x[i..i + count].fill(mean);
        i += count;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project(v: &[f64]) -> Vec<f64> {
        let mut x = v.to_vec();
        project_nonincreasing_nonnegative(&mut x);
        x
    }

    #[test]
    fn sorted_input_is_fixed() {
        assert_eq!(project(&[3.0, 2.0, 2.0, 0.5]), vec![3.0, 2.0, 2.0, 0.5]);
    }

    #[test]
    fn pools_violators() {
        assert_eq!(project(&[1.0, 3.0]), vec![2.0, 2.0]);
        assert_eq!(project(&[4.0, 1.0, 2.0, 3.0]), vec![4.0, 2.0, 2.0, 2.0]);
        assert_eq!(project(&[1.0, 2.0, 3.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn negative_tail_is_clamped() {
        assert_eq!(project(&[2.0, -1.0, -3.0]), vec![2.0, 0.0, 0.0]);
        assert_eq!(project(&[-1.0, 1.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn projection_is_nearest_among_candidates() {
        // brute-force comparison on a small grid of monotone candidates
        let x = [0.3, 0.9, 0.1, 0.4];
        let y = project(&x);
        let dist = |z: &[f64]| z.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let d = dist(&y);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        for &a in &grid {
            for &b in grid.iter().filter(|&&b| b <= a) {
                for &c in grid.iter().filter(|&&c| c <= b) {
                    for &e in grid.iter().filter(|&&e| e <= c) {
                        assert!(dist(&[a, b, c, e]) >= d - 1e-12);
                    }
                }
            }
        }
    }
}

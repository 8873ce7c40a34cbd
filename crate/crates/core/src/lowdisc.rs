//! Kronecker (R-sequence) offsets for intra-cell sampling.

/// Positive root of `x^(dim+1) = x + 1`.
fn generalized_golden(dim: usize) -> f64 {
    let e = (dim + 1) as i32;
    let mut g = 1.5f64;
    for _ in 0..64 {
        let f = g.powi(e) - g - 1.0;
        let df = f64::from(e) * g.powi(e - 1) - 1.0;
        g -= f / df;
    }
    g
}

fn steps(dim: usize) -> Vec<f64> {
    let g = generalized_golden(dim);
    (1..=dim).map(|j| g.powi(-(j as i32))).collect()
}

/// Seed-dependent shift `{seed·α}` in `[0, 1)^dim`; zero for seed 0.
pub(crate) fn shift(dim: usize, seed: u64) -> Vec<f64> {
    let s = (seed % (1u64 << 32)) as f64;
    steps(dim).iter().map(|a| (s * a).fract()).collect()
}

/// `count` points of `[0, 1)^dim`. The first is always the cell center; the
/// rest follow the additive recurrence `0.5 + {seed·α} + k·α (mod 1)`.
pub(crate) fn offsets(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let alpha = steps(dim);
    let shift = shift(dim, seed);
    (0..count)
        .map(|k| {
            if k == 0 {
                return vec![0.5; dim];
            }
            alpha
                .iter()
                .zip(&shift)
                .map(|(a, sh)| (0.5 + sh + k as f64 * a).fract())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_offset_is_the_center_and_all_lie_in_the_cube() {
        for seed in [0, 7, 123_456_789] {
            let pts = offsets(3, 50, seed);
            assert_eq!(pts[0], vec![0.5; 3]);
            assert!(pts.iter().flatten().all(|&u| (0.0..1.0).contains(&u)));
        }
        assert_eq!(offsets(2, 10, 5), offsets(2, 10, 5));
    }

    #[test]
    fn golden_ratio_in_one_dimension() {
        assert!((generalized_golden(1) - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
    }
}

use crate::error::{Error, Result};

/// Uniform partition of (0, 1) with `n` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    h: f64,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("grid needs at least one interior node"));
        }
        Ok(Self {
            n,
            h: 1.0 / (n + 1) as f64,
        })
    }

    /// Number of interior nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of cells, `n + 1`.
    pub fn cells(&self) -> usize {
        self.n + 1
    }

    /// `x_j = j h` for `j = 0..=n+1`, computed as `j / (n+1)` so that the
    /// endpoints and dyadic nodes are exact.
    pub fn node(&self, j: usize) -> f64 {
        debug_assert!(j <= self.n + 1);
        j as f64 / (self.n + 1) as f64
    }

    /// All nodes including both boundary points.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n + 1).map(|j| self.node(j)).collect()
    }

    /// Interior nodes `x_1..x_n`.
    pub fn interior(&self) -> Vec<f64> {
        (1..=self.n).map(|j| self.node(j)).collect()
    }

    pub fn cell_midpoints(&self) -> Vec<f64> {
        (0..=self.n)
            .map(|j| 0.5 * (self.node(j) + self.node(j + 1)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_nodes() {
        let g = Grid::new(3).unwrap();
        assert_eq!(g.h(), 0.25);
        assert_eq!(g.nodes(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn nine_and_nine_hundred_ninety_nine() {
        assert!((Grid::new(9).unwrap().h() - 0.1).abs() < 1e-17);
        assert!((Grid::new(999).unwrap().h() - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(matches!(Grid::new(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn mesh_invariants() {
        for n in [1usize, 2, 7, 99, 319, 4095] {
            let g = Grid::new(n).unwrap();
            assert!((g.h() * (n + 1) as f64 - 1.0).abs() <= f64::EPSILON);
            let x = g.nodes();
            assert_eq!(x[0], 0.0);
            assert_eq!(x[n + 1], 1.0);
            assert!(x.windows(2).all(|w| w[1] > w[0]));
        }
    }
}

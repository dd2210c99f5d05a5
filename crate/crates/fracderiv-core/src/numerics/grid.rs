use crate::Error;
use alloc::format;
use alloc::vec::Vec;

/// Strictly increasing sequence of evaluation points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    /// Wraps explicit points; they must be finite, strictly increasing, and
    /// at least two.
    pub fn from_points(points: Vec<f64>) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 points, got {}",
                points.len()
            )));
        }
        for w in points.windows(2) {
            if !w[0].is_finite() || !w[1].is_finite() || w[0] >= w[1] {
                return Err(Error::Domain(format!(
                    "grid points must be finite and strictly increasing; offending pair ({}, {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(Grid { points })
    }

    /// Uniform grid of `count >= 2` points from `a` to `b` inclusive.
    pub fn uniform(a: f64, b: f64, count: usize) -> Result<Self, Error> {
        if count < 2 {
            return Err(Error::Domain(format!(
                "uniform grid needs at least 2 points, got {count}"
            )));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Domain(format!(
                "uniform grid needs finite a < b, got [{a}, {b}]"
            )));
        }
        let h = (b - a) / (count - 1) as f64;
        let mut points = Vec::with_capacity(count);
        for i in 0..count {
            points.push(a + h * i as f64);
        }
        // Make the right endpoint exact regardless of rounding in h.
        points[count - 1] = b;
        Grid::from_points(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_short_and_unsorted_input() {
        assert!(Grid::from_points(vec![1.0]).is_err());
        assert!(Grid::from_points(vec![0.0, 0.0]).is_err());
        assert!(Grid::from_points(vec![0.0, f64::NAN]).is_err());
        assert!(Grid::from_points(vec![0.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn uniform_hits_both_endpoints() {
        let g = Grid::uniform(0.1, 1.0, 10).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g.first(), 0.1);
        assert_eq!(g.last(), 1.0);
    }
}

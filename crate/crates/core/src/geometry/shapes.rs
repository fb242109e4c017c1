use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Shape parameters with the branch of their logarithms.
///
/// `log z = Log z + 2πi·branches[t].0` and
/// `log(1 - z) = Log(1 - z) + 2πi·branches[t].1`, with `Log` principal; the
/// third parameter takes `log z'' = iπ - log z + log(1 - z)` so the three
/// always sum to iπ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeAssignment {
    pub z: Vec<Complex64>,
    pub branches: Vec<(i64, i64)>,
}

impl ShapeAssignment {
    pub fn principal(z: Vec<Complex64>) -> ShapeAssignment {
        let branches = vec![(0, 0); z.len()];
        ShapeAssignment { z, branches }
    }

    /// Every tetrahedron regular: z = exp(iπ/3).
    pub fn regular(n: usize) -> ShapeAssignment {
        ShapeAssignment::principal(vec![Complex64::from_polar(1.0, PI / 3.0); n])
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn log_z(&self) -> Vec<Complex64> {
        self.z.iter().zip(&self.branches).map(|(z, b)| z.ln() + Complex64::new(0.0, 2.0 * PI * b.0 as f64)).collect()
    }

    pub fn log_1mz(&self) -> Vec<Complex64> {
        self.z
            .iter()
            .zip(&self.branches)
            .map(|(z, b)| (1.0 - z).ln() + Complex64::new(0.0, 2.0 * PI * b.1 as f64))
            .collect()
    }

    /// Rebuilds the assignment from log-coordinates.
    pub fn from_logs(log_z: &[Complex64], log_1mz: &[Complex64]) -> ShapeAssignment {
        let z: Vec<Complex64> = log_z.iter().map(|w| w.exp()).collect();
        let branches = z
            .iter()
            .zip(log_z.iter().zip(log_1mz))
            .map(|(z, (w, l))| (winding(w.im - z.arg()), winding(l.im - (1.0 - z).arg())))
            .collect();
        ShapeAssignment { z, branches }
    }

    pub fn conj(&self) -> ShapeAssignment {
        ShapeAssignment::principal(self.z.iter().map(|z| z.conj()).collect())
    }
}

fn winding(x: f64) -> i64 {
    (x / (2.0 * PI)).round() as i64
}

/// `Log(1 - z)` shifted by a multiple of 2πi to lie nearest `prev`.
pub(crate) fn continue_log_1mz(z: Complex64, prev: Complex64) -> Complex64 {
    let l = (1.0 - z).ln();
    l + Complex64::new(0.0, 2.0 * PI * winding(prev.im - l.im) as f64)
}

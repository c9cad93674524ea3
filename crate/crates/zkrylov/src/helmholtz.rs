//! Finite-difference Helmholtz systems on structured 1D/2D/3D grids.
//!
//! Discretizes -laplacian(u) - k^2 (1 + i eta) u = g with homogeneous
//! Dirichlet boundaries using the standard 3/5/7-point stencil on interior
//! nodes, lexicographic x-fastest ordering, and a discrete point source at
//! the center node as right-hand side.

use num_complex::Complex64;

use crate::csr::CsrMatrix;
use crate::error::{Error, Result};
use crate::vector::DenseVector;

#[derive(Debug, Clone)]
pub struct HelmholtzSpec {
    pub dim: usize,
    pub n_per_axis: usize,
    pub domain_length: f64,
    pub frequency: f64,
    pub velocity: f64,
    pub absorption: f64,
}

impl Default for HelmholtzSpec {
    fn default() -> Self {
        Self {
            dim: 2,
            n_per_axis: 50,
            domain_length: 1.0,
            frequency: 0.0,
            velocity: 340.0,
            absorption: 0.0,
        }
    }
}

impl HelmholtzSpec {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidConfig(format!("dim must be 1..3, got {}", self.dim)));
        }
        if self.n_per_axis < 1 {
            return Err(Error::InvalidConfig("n_per_axis must be >= 1".into()));
        }
        if self.domain_length <= 0.0 || self.velocity <= 0.0 {
            return Err(Error::InvalidConfig(
                "domain_length and velocity must be positive".into(),
            ));
        }
        if self.frequency < 0.0 || self.absorption < 0.0 {
            return Err(Error::InvalidConfig(
                "frequency and absorption must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// k = 2 pi F / c.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency / self.velocity
    }

    pub fn mesh_size(&self) -> f64 {
        self.domain_length / (self.n_per_axis + 1) as f64
    }

    /// Grid resolution (2 pi / k) / h; infinite when k = 0.
    pub fn points_per_wavelength(&self) -> f64 {
        let k = self.wavenumber();
        if k == 0.0 {
            f64::INFINITY
        } else {
            (2.0 * std::f64::consts::PI / k) / self.mesh_size()
        }
    }

    pub fn n_unknowns(&self) -> usize {
        self.n_per_axis.pow(self.dim as u32)
    }
}

/// Generates the Helmholtz system (A, b).
///
/// Warns on stderr when the grid resolves fewer than 10 points per
/// wavelength. Resonant wavenumbers are not detected; a (near-)singular
/// system is emitted as-is.
pub fn generate(spec: &HelmholtzSpec) -> Result<(CsrMatrix, DenseVector)> {
    spec.validate()?;
    let n = spec.n_per_axis;
    let dim = spec.dim;
    let h = spec.mesh_size();
    let k = spec.wavenumber();
    if spec.points_per_wavelength() < 10.0 {
        eprintln!(
            "warning: {:.2} points per wavelength (< 10); expect pollution error",
            spec.points_per_wavelength()
        );
    }
    let inv_h2 = 1.0 / (h * h);
    let diag =
        Complex64::new(2.0 * dim as f64 * inv_h2, 0.0) - k * k * Complex64::new(1.0, spec.absorption);
    let off = Complex64::new(-inv_h2, 0.0);

    let total = spec.n_unknowns();
    // Strides for lexicographic x-fastest ordering.
    let strides = [1usize, n, n * n];
    let mut triplets = Vec::with_capacity(total * (2 * dim + 1));
    for idx in 0..total {
        let mut coords = [0usize; 3];
        let mut rem = idx;
        for c in coords.iter_mut().take(dim) {
            *c = rem % n;
            rem /= n;
        }
        triplets.push((idx, idx, diag));
        for d in 0..dim {
            if coords[d] > 0 {
                triplets.push((idx, idx - strides[d], off));
            }
            if coords[d] + 1 < n {
                triplets.push((idx, idx + strides[d], off));
            }
        }
    }
    let a = CsrMatrix::from_triplets(total, total, &triplets)?;

    let mut b = DenseVector::zeros(total);
    let center: usize = strides.iter().take(dim).map(|s| (n / 2) * s).sum();
    b[center] = Complex64::new(1.0 / h.powi(dim as i32), 0.0);
    Ok((a, b))
}

/// Exact eigenvalues of the generated operator when absorption is zero:
/// sums over axes of (2 - 2 cos(m pi / (n+1))) / h^2, minus k^2.
pub fn analytic_eigenvalues(spec: &HelmholtzSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    if spec.absorption != 0.0 {
        return Err(Error::InvalidConfig(
            "analytic eigenvalues require zero absorption".into(),
        ));
    }
    let n = spec.n_per_axis;
    let h = spec.mesh_size();
    let k2 = spec.wavenumber().powi(2);
    let axis: Vec<f64> = (1..=n)
        .map(|m| (2.0 - 2.0 * (m as f64 * std::f64::consts::PI / (n + 1) as f64).cos()) / (h * h))
        .collect();
    let mut eigs = Vec::with_capacity(spec.n_unknowns());
    match spec.dim {
        1 => {
            for &a in &axis {
                eigs.push(a - k2);
            }
        }
        2 => {
            for &a in &axis {
                for &b in &axis {
                    eigs.push(a + b - k2);
                }
            }
        }
        _ => {
            for &a in &axis {
                for &b in &axis {
                    for &c in &axis {
                        eigs.push(a + b + c - k2);
                    }
                }
            }
        }
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_1d_stencil_values() {
        // n=3, F=0: h=0.25, diag 2/h^2 = 32, off-diag -16.
        let spec = HelmholtzSpec {
            dim: 1,
            n_per_axis: 3,
            frequency: 0.0,
            ..Default::default()
        };
        let (a, b) = generate(&spec).unwrap();
        assert_eq!(a.n_rows(), 3);
        let (cols, vals) = a.row(1);
        assert_eq!(cols, &[0, 1, 2]);
        assert_eq!(vals[1], Complex64::new(32.0, 0.0));
        assert_eq!(vals[0], Complex64::new(-16.0, 0.0));
        // point source at center node 1, magnitude 1/h
        assert_eq!(b[1], Complex64::new(4.0, 0.0));
        assert_eq!(b[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn laplacian_2d_structure() {
        // n=2, F=0: h = 1/3, diag 4/h^2 = 36, four off-diagonal pairs -9.
        let spec = HelmholtzSpec {
            dim: 2,
            n_per_axis: 2,
            frequency: 0.0,
            ..Default::default()
        };
        let (a, _) = generate(&spec).unwrap();
        let s = a.stats();
        assert_eq!(s.n, 4);
        assert_eq!(s.nnz, 12);
        assert_eq!(s.bandwidth, 2);
        let (cols, vals) = a.row(0);
        assert_eq!(cols, &[0, 1, 2]);
        assert_eq!(vals[0], Complex64::new(36.0, 0.0));
        assert_eq!(vals[1], Complex64::new(-9.0, 0.0));
    }

    #[test]
    fn generated_matrix_is_symmetric() {
        let spec = HelmholtzSpec {
            dim: 3,
            n_per_axis: 4,
            frequency: 500.0,
            absorption: 0.1,
            ..Default::default()
        };
        let (a, _) = generate(&spec).unwrap();
        let mut t = a.to_triplets();
        let mut tt: Vec<_> = t.iter().map(|&(r, c, v)| (c, r, v)).collect();
        t.sort_by_key(|&(r, c, _)| (r, c));
        tt.sort_by_key(|&(r, c, _)| (r, c));
        assert_eq!(t, tt);
    }

    #[test]
    fn stencil_nnz_closed_form() {
        // 3D interior Dirichlet grid: nnz = 7 n^3 - 6 n^2.
        for n in [1usize, 2, 3, 5] {
            let spec = HelmholtzSpec {
                dim: 3,
                n_per_axis: n,
                frequency: 0.0,
                ..Default::default()
            };
            let (a, _) = generate(&spec).unwrap();
            assert_eq!(a.nnz(), 7 * n.pow(3) - 6 * n.pow(2));
            assert!(a.stats().nnz_max_per_row <= 7);
        }
        let spec = HelmholtzSpec {
            dim: 3,
            n_per_axis: 3,
            frequency: 0.0,
            ..Default::default()
        };
        let (a, _) = generate(&spec).unwrap();
        assert_eq!(a.stats().nnz_max_per_row, 7);
    }

    #[test]
    fn analytic_eigenvalue_single_node() {
        // 1D n=1, k=0, L=1: h=0.5, (2 - 2 cos(pi/2)) / 0.25 = 8.
        let spec = HelmholtzSpec {
            dim: 1,
            n_per_axis: 1,
            frequency: 0.0,
            ..Default::default()
        };
        let eigs = analytic_eigenvalues(&spec).unwrap();
        assert_eq!(eigs.len(), 1);
        assert!((eigs[0] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn resonance_by_construction() {
        // Choose k^2 equal to the smallest Laplacian eigenvalue: the smallest
        // Helmholtz eigenvalue becomes zero.
        let base = HelmholtzSpec {
            dim: 1,
            n_per_axis: 3,
            frequency: 0.0,
            ..Default::default()
        };
        let lam_min = analytic_eigenvalues(&base)
            .unwrap()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let c = 340.0;
        let f = lam_min.sqrt() * c / (2.0 * std::f64::consts::PI);
        let spec = HelmholtzSpec {
            frequency: f,
            velocity: c,
            ..base
        };
        let eigs = analytic_eigenvalues(&spec).unwrap();
        let min_abs = eigs.into_iter().map(f64::abs).fold(f64::INFINITY, f64::min);
        assert!(min_abs < 1e-9);
    }

    #[test]
    fn rejects_absorption_in_eigenvalues() {
        let spec = HelmholtzSpec {
            absorption: 0.5,
            ..Default::default()
        };
        assert!(analytic_eigenvalues(&spec).is_err());
    }

    #[test]
    fn rejects_invalid_dim() {
        let spec = HelmholtzSpec {
            dim: 4,
            ..Default::default()
        };
        assert!(generate(&spec).is_err());
    }
}

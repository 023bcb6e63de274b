//! Continuous-time heat flow on an RC network, C dV/dt = −L V, sampled at a
//! fixed time step.
//!
//! Units are whatever the caller keeps consistent. The demo triangle uses
//! kΩ⁻¹ for conductance, µF for capacitance and ms for time, so that
//! γ = Δt/C is dimensionless against a unit-conductance Laplacian.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RcNetwork {
    laplacian: DMatrix<f64>,
    capacitance: f64,
}

impl RcNetwork {
    /// Build from a symmetric, nonnegative conductance matrix (diagonal ignored).
    pub fn from_conductances(g: &DMatrix<f64>, capacitance: f64) -> Result<Self> {
        let n = g.nrows();
        if g.ncols() != n {
            return Err(Error::InvalidInput("conductance matrix must be square".into()));
        }
        if capacitance.is_nan() || capacitance <= 0.0 {
            return Err(Error::InvalidInput(format!("capacitance must be positive, got {capacitance}")));
        }
        let mut laplacian = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let gij = g[(i, j)];
                if gij < 0.0 || (gij - g[(j, i)]).abs() > 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "conductances must be symmetric and nonnegative at ({i}, {j})"
                    )));
                }
                laplacian[(i, j)] = -gij;
                laplacian[(i, i)] += gij;
            }
        }
        Ok(Self {
            laplacian,
            capacitance,
        })
    }

    /// Three nodes joined pairwise by equal resistors, one capacitor to
    /// ground per node.
    pub fn triangle(conductance: f64, capacitance: f64) -> Result<Self> {
        let mut g = DMatrix::from_element(3, 3, conductance);
        g.fill_diagonal(0.0);
        Self::from_conductances(&g, capacitance)
    }

    pub fn laplacian(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    pub fn capacitance(&self) -> f64 {
        self.capacitance
    }

    pub fn len(&self) -> usize {
        self.laplacian.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    /// exp(−(Δt/C) L)
    pub exact: DMatrix<f64>,
    /// I − (Δt/C) L
    pub first_order: DMatrix<f64>,
}

/// Sampled step of the network: the exact exponential through a symmetric
/// eigendecomposition, and its first-order truncation.
pub fn rc_discretize(net: &RcNetwork, dt: f64) -> Result<Discretization> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    let gamma = dt / net.capacitance;
    let n = net.len();
    let eig = SymmetricEigen::new(net.laplacian.clone());
    let decay = DVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| (-gamma * l).exp()));
    let v = &eig.eigenvectors;
    let exact = v * DMatrix::from_diagonal(&decay) * v.transpose();
    let first_order = DMatrix::identity(n, n) - &net.laplacian * gamma;
    Ok(Discretization { exact, first_order })
}

/// Operator 2-norm of a symmetric matrix: the largest |eigenvalue|.
pub fn symmetric_norm(a: &DMatrix<f64>) -> f64 {
    let sym = (a + a.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .fold(0.0, |acc, l| acc.max(l.abs()))
}

/// ‖exp(−γL) − (I − γL)‖₂ for each γ, with C = 1 so that Δt = γ·C.
pub fn truncation_errors(net: &RcNetwork, gammas: &[f64]) -> Result<Vec<f64>> {
    gammas
        .iter()
        .map(|&gamma| {
            let d = rc_discretize(net, gamma * net.capacitance)?;
            Ok(symmetric_norm(&(d.exact - d.first_order)))
        })
        .collect()
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node() {
        let net = RcNetwork::from_conductances(&DMatrix::zeros(1, 1), 1.0).unwrap();
        let d = rc_discretize(&net, 0.3).unwrap();
        assert_eq!(d.exact, DMatrix::from_element(1, 1, 1.0));
        assert_eq!(d.first_order, DMatrix::from_element(1, 1, 1.0));
    }

    #[test]
    fn two_nodes_closed_form() {
        let g = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let net = RcNetwork::from_conductances(&g, 2.0).unwrap();
        let dt = 0.5;
        let gamma = dt / 2.0;
        let d = rc_discretize(&net, dt).unwrap();
        let mut exact_eigs: Vec<f64> = SymmetricEigen::new(d.exact.clone()).eigenvalues.iter().copied().collect();
        exact_eigs.sort_by(f64::total_cmp);
        assert!((exact_eigs[0] - (-2.0 * gamma).exp()).abs() < 1e-14);
        assert!((exact_eigs[1] - 1.0).abs() < 1e-14);
        let mut first_eigs: Vec<f64> = SymmetricEigen::new(d.first_order.clone()).eigenvalues.iter().copied().collect();
        first_eigs.sort_by(f64::total_cmp);
        assert!((first_eigs[0] - (1.0 - 2.0 * gamma)).abs() < 1e-14);
        assert!((first_eigs[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constants_are_preserved() {
        let net = RcNetwork::triangle(1.0, 1.0).unwrap();
        let ones = DVector::from_element(3, 1.0);
        let d = rc_discretize(&net, 0.05).unwrap();
        assert!((&d.exact * &ones - &ones).amax() < 1e-14);
        assert!((&d.first_order * &ones - &ones).amax() < 1e-14);
        let l = net.laplacian();
        assert_eq!(l, &l.transpose());
        for i in 0..3 {
            assert!(l.row(i).sum().abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_networks() {
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(RcNetwork::from_conductances(&asym, 1.0).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert!(RcNetwork::from_conductances(&neg, 1.0).is_err());
        assert!(RcNetwork::triangle(1.0, 0.0).is_err());
        let net = RcNetwork::triangle(1.0, 1.0).unwrap();
        assert!(rc_discretize(&net, 0.0).is_err());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let xs = [1.0, 10.0, 100.0];
        let ys = [3.0, 300.0, 30000.0];
        assert!((loglog_slope(&xs, &ys) - 2.0).abs() < 1e-12);
    }
}

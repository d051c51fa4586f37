//! Prescribed singular curvature within a discrete conformal class, for
//! hyperbolic and Euclidean targets.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::correspondence::{cone_to_decorated, decorated_to_cone, vertex_scale_decorated};
use crate::error::{Error, Result};
use crate::minkowski::Curvature;
use crate::surface::{make_delaunay, ConeMetric, DecoratedMetric};

/// Convergence threshold on the largest curvature error.
pub const CURVATURE_TOL: f64 = 1e-8;
/// Central finite-difference step of the Jacobian.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iter: 200,
            max_halvings: 30,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Uniformized {
    pub u: Vec<f64>,
    pub metric: ConeMetric,
    pub iterations: usize,
    /// Largest curvature error before each step and after the last.
    pub history: Vec<f64>,
    /// Flips needed to restore the Delaunay property at each accepted iterate.
    pub flips: Vec<usize>,
}

/// Vertex scaling of a fixed decorated base metric, read out as a cone
/// metric of curvature `k`.
struct Problem {
    base: DecoratedMetric,
    k: Curvature,
    target: Vec<f64>,
}

impl Problem {
    fn metric(&self, u: &[f64]) -> Result<(ConeMetric, usize)> {
        let (dd, log) = make_delaunay(&vertex_scale_decorated(&self.base, u)?)?;
        Ok((decorated_to_cone(&dd, self.k)?, log.len()))
    }

    fn residual(&self, u: &[f64]) -> Result<DVector<f64>> {
        let (m, _) = self.metric(u)?;
        let kappa = m.singular_curvature()?;
        Ok(DVector::from_iterator(
            kappa.len(),
            kappa.iter().zip(&self.target).map(|(a, b)| a - b),
        ))
    }

    fn jacobian(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        let n = u.len();
        let cols = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut up = u.to_vec();
                let mut dn = u.to_vec();
                up[i] += FD_STEP;
                dn[i] -= FD_STEP;
                Ok((self.residual(&up)? - self.residual(&dn)?) / (2.0 * FD_STEP))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_columns(&cols))
    }
}

/// Checks Gauss-Bonnet compatibility of the prescribed curvatures.
pub fn check_target(genus: usize, kappa: &[f64], k: Curvature) -> Result<()> {
    let two_pi_chi = 2.0 * PI * (2.0 - 2.0 * genus as f64);
    let total: f64 = kappa.iter().sum();
    if let Some(x) = kappa.iter().find(|&&x| !(x < 2.0 * PI)) {
        return Err(Error::IncompatibleCurvature(format!("curvature {x} is not below 2 pi")));
    }
    match k {
        Curvature::Hyperbolic if total <= two_pi_chi => Err(Error::IncompatibleCurvature(format!(
            "total curvature {total} must exceed 2 pi chi = {two_pi_chi}"
        ))),
        Curvature::Euclidean if (total - two_pi_chi).abs() > 1e-9 * two_pi_chi.abs().max(1.0) => Err(
            Error::IncompatibleCurvature(format!("total curvature {total} must equal 2 pi chi = {two_pi_chi}")),
        ),
        Curvature::Spherical => Err(Error::Domain("spherical targets are not supported".into())),
        _ => Ok(()),
    }
}

/// Finds `u` such that the vertex scaling of `m` by `u`, realized in
/// curvature `k`, has singular curvature `kappa`.
pub fn uniformize(m: &ConeMetric, kappa: &[f64], k: Curvature) -> Result<Uniformized> {
    uniformize_with(m, kappa, k, &SolverOptions::default())
}

pub fn uniformize_with(m: &ConeMetric, kappa: &[f64], k: Curvature, opts: &SolverOptions) -> Result<Uniformized> {
    let n = m.tri.num_vertices();
    if kappa.len() != n {
        return Err(Error::Domain(format!(
            "expected {n} target curvatures, got {}",
            kappa.len()
        )));
    }
    check_target(m.tri.genus(), kappa, k)?;
    let p = Problem {
        base: cone_to_decorated(m, false)?,
        k,
        target: kappa.to_vec(),
    };
    let mut u = vec![0.0; n];
    let mut r = p.residual(&u)?;
    let mut history = vec![r.amax()];
    let mut flips = vec![p.metric(&u)?.1];
    let mut iterations = 0;
    while r.amax() >= CURVATURE_TOL {
        if iterations == opts.max_iter {
            return Err(Error::NoConvergence {
                iterations,
                residual: r.amax(),
                history,
            });
        }
        iterations += 1;
        let j = p.jacobian(&u)?;
        let step = j
            .svd(true, true)
            .solve(&(-&r), 1e-12)
            .map_err(|e| Error::Domain(e.to_string()))?;
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let mut trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, s)| a + alpha * s).collect();
            if k == Curvature::Euclidean {
                let mean = trial.iter().sum::<f64>() / n as f64;
                trial.iter_mut().for_each(|x| *x -= mean);
            }
            if let Ok(rt) = p.residual(&trial) {
                if rt.norm() < r.norm() {
                    accepted = Some((trial, rt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((nu, nr)) = accepted else {
            return Err(Error::NoConvergence {
                iterations,
                residual: r.amax(),
                history,
            });
        };
        u = nu;
        r = nr;
        history.push(r.amax());
        flips.push(p.metric(&u)?.1);
    }
    let (metric, _) = p.metric(&u)?;
    Ok(Uniformized {
        u,
        metric,
        iterations,
        history,
        flips,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::{discretely_conformal_test, doubled_polygon};
    use crate::surface::builders::one_vertex_torus;

    #[test]
    fn square_torus_is_already_flat() {
        let m = ConeMetric::new(one_vertex_torus(), Curvature::Euclidean, vec![1.0, 1.0, 2f64.sqrt()]).unwrap();
        let r = uniformize(&m, &[0.0], Curvature::Euclidean).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.u, vec![0.0]);
    }

    #[test]
    fn doubled_345_euclidean_equilateral() {
        let m = doubled_polygon(Curvature::Euclidean, &[3.0, 4.0, 5.0]).unwrap();
        let r = uniformize(&m, &[4.0 * PI / 3.0; 3], Curvature::Euclidean).unwrap();
        let l = &r.metric.lengths;
        for x in l {
            assert!((x - l[0]).abs() < 1e-8 * l[0]);
        }
        assert!(r.u.iter().sum::<f64>().abs() < 1e-12);
        assert!(r.metric.gauss_bonnet_residual().unwrap().abs() < 1e-9);
        assert!(discretely_conformal_test(&m, &r.metric).unwrap());
    }

    #[test]
    fn doubled_345_hyperbolic_equilateral() {
        let m = doubled_polygon(Curvature::Euclidean, &[3.0, 4.0, 5.0]).unwrap();
        let r = uniformize(&m, &[1.5 * PI; 3], Curvature::Hyperbolic).unwrap();
        assert!(r.iterations <= 50);
        let c = (PI / 4.0).cos();
        let side = (c / (1.0 - c)).acosh();
        assert!((side - 1.528571).abs() < 1e-6);
        for x in &r.metric.lengths {
            assert!((x - side).abs() < 1e-6);
        }
        assert!(r.history.last().unwrap() < &1e-8);
    }

    #[test]
    fn incompatible_targets() {
        let m = doubled_polygon(Curvature::Euclidean, &[3.0, 4.0, 5.0]).unwrap();
        assert!(matches!(
            uniformize(&m, &[PI; 3], Curvature::Hyperbolic),
            Err(Error::IncompatibleCurvature(_))
        ));
        assert!(matches!(
            uniformize(&m, &[PI; 3], Curvature::Euclidean),
            Err(Error::IncompatibleCurvature(_))
        ));
        assert!(matches!(
            uniformize(&m, &[2.0 * PI, 1.5 * PI, 0.5 * PI], Curvature::Euclidean),
            Err(Error::IncompatibleCurvature(_))
        ));
        assert!(uniformize(&m, &[1.5 * PI; 3], Curvature::Spherical).is_err());
    }

    #[test]
    fn iteration_cap_reports_history() {
        let m = doubled_polygon(Curvature::Euclidean, &[3.0, 4.0, 5.0]).unwrap();
        let opts = SolverOptions {
            max_iter: 1,
            ..Default::default()
        };
        match uniformize_with(&m, &[1.5 * PI; 3], Curvature::Hyperbolic, &opts) {
            Err(Error::NoConvergence { history, .. }) => assert_eq!(history.len(), 2),
            other => panic!("{other:?}"),
        }
    }
}

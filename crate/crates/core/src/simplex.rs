//! Exact phase-one simplex over the rationals for `A^T x = b, x >= 0`.
//!
//! Bland's rule is used for both the entering and the leaving variable, so
//! the method terminates on degenerate systems. When the phase-one optimum
//! is positive, the optimal dual `w` satisfies `A w <= 0` and `b^T w > 0`,
//! and `y = -w` is returned as the infeasibility certificate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::system::{verify_certificate, FarkasCertificate, LinearSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// A non-negative rational solution, indexed like `sys.types()`.
    Feasible(Vec<BigRational>),
    Infeasible(FarkasCertificate),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    /// Reduced costs of the phase-one objective.
    z: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.z[e].is_zero() {
            let f = self.z[e].clone();
            for (v, pv) in self.z.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = e;
    }
}

/// Decides rational feasibility of `sys` exactly.
pub fn lp_feasible(sys: &LinearSystem) -> LpOutcome {
    let m = sys.width();
    let nvars = sys.types().len();
    let cols = nvars + m;
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());

    let mut rows = vec![vec![zero.clone(); cols]; m];
    for (j, t) in sys.types().iter().enumerate() {
        for (i, row) in rows.iter_mut().enumerate() {
            let l = t.get(i + 1);
            if l > 0 {
                row[j] = BigRational::from_integer(l.into());
            }
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[nvars + i] = one.clone();
    }
    let rhs: Vec<BigRational> = sys
        .b()
        .iter()
        .map(|b| BigRational::from_integer(BigInt::from(b.clone())))
        .collect();
    let mut z = vec![zero.clone(); cols];
    for (j, zj) in z.iter_mut().enumerate().take(nvars) {
        *zj = -rows.iter().map(|r| r[j].clone()).sum::<BigRational>();
    }
    let mut tab = Tableau {
        rows,
        rhs,
        z,
        basis: (nvars..cols).collect(),
    };

    loop {
        let Some(enter) = tab.z.iter().position(|v| v.is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            let a = &tab.rows[i][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &tab.rhs[i] / a;
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && tab.basis[i] < tab.basis[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (r, _) = leave.expect("phase-one objective is bounded below by zero");
        tab.pivot(r, enter);
    }

    let objective: BigRational = (0..m)
        .filter(|&i| tab.basis[i] >= nvars)
        .map(|i| tab.rhs[i].clone())
        .sum();

    if objective.is_positive() {
        let y: Vec<BigRational> = (0..m)
            .map(|col| {
                -(0..m)
                    .filter(|&r| tab.basis[r] >= nvars)
                    .map(|r| tab.rows[r][nvars + col].clone())
                    .sum::<BigRational>()
            })
            .collect();
        let cert = FarkasCertificate::new(y).normalized();
        assert!(
            verify_certificate(sys, &cert).map(|c| c.is_valid()).unwrap_or(false),
            "simplex produced an invalid certificate"
        );
        LpOutcome::Infeasible(cert)
    } else {
        let mut x = vec![zero; nvars];
        for (i, &bv) in tab.basis.iter().enumerate() {
            if bv < nvars {
                x[bv] = tab.rhs[i].clone();
            }
        }
        LpOutcome::Feasible(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::LevelSet;
    use crate::system::build_system;

    fn residual_zero(sys: &LinearSystem, x: &[BigRational]) -> bool {
        (0..sys.width()).all(|i| {
            let lhs: BigRational = sys
                .types()
                .iter()
                .zip(x)
                .map(|(t, v)| v * BigRational::from_integer(t.get(i + 1).into()))
                .sum();
            lhs == BigRational::from_integer(BigInt::from(sys.b()[i].clone()))
        })
    }

    #[test]
    fn feasible_and_infeasible_instances() {
        let sys = build_system(18, &LevelSet::up_to(6)).unwrap();
        match lp_feasible(&sys) {
            LpOutcome::Infeasible(c) => assert!(verify_certificate(&sys, &c).unwrap().is_valid()),
            other => panic!("expected infeasible, got {other:?}"),
        }

        let sys = build_system(12, &LevelSet::up_to(3)).unwrap();
        match lp_feasible(&sys) {
            LpOutcome::Feasible(x) => {
                assert!(x.iter().all(|v| !v.is_negative()));
                assert!(residual_zero(&sys, &x));
            }
            other => panic!("expected feasible, got {other:?}"),
        }

        let sys = build_system(7, &LevelSet::up_to(3)).unwrap();
        assert!(!lp_feasible(&sys).is_feasible());
    }

    #[test]
    fn system_without_types() {
        let sys = build_system(7, &LevelSet::new([3]).unwrap()).unwrap();
        match lp_feasible(&sys) {
            LpOutcome::Infeasible(c) => assert!(verify_certificate(&sys, &c).unwrap().is_valid()),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn gapped_levels() {
        let sys = build_system(12, &LevelSet::new([2, 4]).unwrap()).unwrap();
        match lp_feasible(&sys) {
            LpOutcome::Feasible(x) => assert!(residual_zero(&sys, &x)),
            other => panic!("expected feasible, got {other:?}"),
        }
    }
}

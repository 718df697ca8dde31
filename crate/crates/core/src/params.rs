//! Exponent-dependent matrices and scalar constants of the model.
//!
//! For an exponent set `0 = p0 < p1 < ... < pN` the model carries
//!
//! * `A1 = (p_i p_j / (p_i + p_j - 1))` for `1 <= i, j <= N`,
//! * `a0`, `A0` read off the Hilbert-like matrix `(1 / (p_i + p_j + 1))` for `0 <= i, j <= N`,
//! * `gamma_vec = A1^{-1} (1 - a0)` and `gamma = (1 - a0) . gamma_vec`.
//!
//! The single-exponent case `p = [2]` gives `gamma = 1/3`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Strictly increasing positive exponents `p1 < ... < pN` (with implicit `p0 = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentSet(Vec<u32>);

impl ExponentSet {
    pub fn new(p: Vec<u32>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidExponents(
                "at least one exponent required".into(),
            ));
        }
        if p[0] == 0 {
            return Err(Error::InvalidExponents(format!(
                "exponents must be >= 1, got {p:?}"
            )));
        }
        if p.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidExponents(format!(
                "exponents must be strictly increasing, got {p:?}"
            )));
        }
        Ok(Self(p))
    }

    /// The `(N, p1) = (1, 2)` model used for the large-amplitude computations.
    pub fn quadratic() -> Self {
        Self(vec![2])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub p: ExponentSet,
    pub a1: DMatrix<f64>,
    pub a0_mat: DMatrix<f64>,
    pub a0: DVector<f64>,
    pub gamma: f64,
    pub gamma_vec: DVector<f64>,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

/// `p_i p_j / (p_i + p_j - 1)` with the convention `0/0 = 0`.
fn a1_entry(pi: u32, pj: u32) -> f64 {
    let num = f64::from(pi) * f64::from(pj);
    let den = f64::from(pi) + f64::from(pj) - 1.0;
    if num == 0.0 && den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn hilbert_entry(pi: u32, pj: u32) -> f64 {
    1.0 / (f64::from(pi) + f64::from(pj) + 1.0)
}

pub fn build_params(p: &ExponentSet) -> Result<ModelParams> {
    let ps = p.as_slice();
    let n = ps.len();
    let a1 = DMatrix::from_fn(n, n, |i, j| a1_entry(ps[i], ps[j]));
    let a0_mat = DMatrix::from_fn(n, n, |i, j| hilbert_entry(ps[i], ps[j]));
    let a0 = DVector::from_fn(n, |i, _| hilbert_entry(0, ps[i]));
    let rhs = DVector::from_element(n, 1.0) - &a0;

    let gamma_vec = a1
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularMatrix(ps.to_vec()))?;
    let gamma = rhs.dot(&gamma_vec);
    let kappa1 = a0.dot(&gamma_vec);
    let kappa2 = gamma_vec.sum();
    let kappa3 = ps
        .iter()
        .zip(gamma_vec.iter())
        .map(|(&pj, &gj)| f64::from(pj) * gj)
        .sum();

    Ok(ModelParams {
        p: p.clone(),
        a1,
        a0_mat,
        a0,
        gamma,
        gamma_vec,
        kappa1,
        kappa2,
        kappa3,
    })
}

impl ModelParams {
    /// `A0 - a0 ⊗ a0`.
    pub fn a0_shifted(&self) -> DMatrix<f64> {
        &self.a0_mat - &self.a0 * self.a0.transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub min_eig_a1: f64,
    pub min_eig_a0_shifted: f64,
}

impl PositivityReport {
    pub fn is_positive(&self) -> bool {
        self.min_eig_a1 > 0.0 && self.min_eig_a0_shifted > 0.0
    }
}

fn min_eigenvalue(m: DMatrix<f64>) -> f64 {
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn check_positivity(params: &ModelParams) -> PositivityReport {
    PositivityReport {
        min_eig_a1: min_eigenvalue(params.a1.clone()),
        min_eig_a0_shifted: min_eigenvalue(params.a0_shifted()),
    }
}

/// The derived constants as exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactConstants {
    pub gamma: BigRational,
    pub gamma_vec: Vec<BigRational>,
    pub kappa1: BigRational,
    pub kappa2: BigRational,
    pub kappa3: BigRational,
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Gauss-Jordan elimination with exact arithmetic; `None` if singular.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[r][k] = &a[r][k] - delta;
            }
            let delta = &factor * &b[col];
            b[r] = &b[r] - delta;
        }
    }
    Some(b)
}

pub fn exact_constants(p: &ExponentSet) -> Result<ExactConstants> {
    let ps: Vec<i64> = p.as_slice().iter().map(|&x| i64::from(x)).collect();
    let n = ps.len();
    let a1: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| ratio(ps[i] * ps[j], ps[i] + ps[j] - 1))
                .collect()
        })
        .collect();
    let a0: Vec<BigRational> = ps.iter().map(|&pj| ratio(1, pj + 1)).collect();
    let rhs: Vec<BigRational> = a0.iter().map(|a| BigRational::one() - a).collect();

    let gamma_vec =
        solve_exact(a1, rhs.clone()).ok_or_else(|| Error::SingularMatrix(p.as_slice().to_vec()))?;
    let dot = |x: &[BigRational], y: &[BigRational]| {
        x.iter()
            .zip(y)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    };
    let gamma = dot(&rhs, &gamma_vec);
    let kappa1 = dot(&a0, &gamma_vec);
    let kappa2 = gamma_vec.iter().fold(BigRational::zero(), |acc, g| acc + g);
    let weights: Vec<BigRational> = ps.iter().map(|&pj| ratio(pj, 1)).collect();
    let kappa3 = dot(&weights, &gamma_vec);

    debug_assert!(gamma.is_positive());
    Ok(ExactConstants {
        gamma,
        gamma_vec,
        kappa1,
        kappa2,
        kappa3,
    })
}

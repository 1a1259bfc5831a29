//! Grunsky operators by two independent routes, the operator `π` and its
//! index, Shale cocycles and the Weil–Petersson Kähler potential.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cauchy::{self, BoundaryFunction};
use crate::circle::BlockDecomposition;
use crate::error::{Error, Result};
use crate::faber;
use crate::fourier::FourierFunction;
use crate::linalg::{self, CMat};
use crate::operator::{BasisFamily, ModeBasis, OperatorMatrix};
use crate::sewing::RiggedSphere;
use crate::spectral;
use crate::welding::{MapKind, PowerSeriesMap};

fn require_interior(f: &PowerSeriesMap) -> Result<()> {
    if f.kind() != MapKind::DiskPlus {
        return Err(Error::input("Grunsky operators need an interior map F"));
    }
    if f.coeff(1).norm() == 0.0 {
        return Err(Error::input("a_1 = 0"));
    }
    Ok(())
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("truncation order must be at least 1"));
    }
    Ok(())
}

/// `[Gr]_{mn} = -√(mn) c_{mn}` from the log kernel
/// `log((F(z) - F(w))/(z - w)) = Σ c_{mn} z^m w^n`.
pub fn grunsky_matrix_coeff(f: &PowerSeriesMap, n: usize) -> Result<OperatorMatrix> {
    require_interior(f)?;
    check_order(n)?;
    let c = faber::bivariate_log(f, n)?;
    let m = CMat::from_fn(n, n, |i, j| -c[i][j] * (((i + 1) * (j + 1)) as f64).sqrt());
    OperatorMatrix::new(m, ModeBasis::plus(n), ModeBasis::minus(n), n)
}

/// `P(𝔻^±) C_F I_F` on `q_n = z^{-n}/√n`, with `I_F` obtained from the
/// Cauchy jump of `q_n ∘ F⁻¹` on `Γ = F(𝕊¹)`.
struct ProjectionPipeline {
    /// `P(𝔻⁺) C_F I_F` in `q_n → p_m`.
    plus: CMat,
    /// `P(𝔻⁻) C_F I_F` in `q_n → q_m`.
    minus: CMat,
    /// `P(𝔻⁻) C_F 1` in `q_m`.
    constant_column: Vec<Complex64>,
}

fn projection_pipeline(f: &PowerSeriesMap, n: usize) -> Result<ProjectionPipeline> {
    require_interior(f)?;
    check_order(n)?;
    let m = spectral::next_pow2((16 * n).max(8 * f.order()).max(256));
    let boundary: Vec<Complex64> = spectral::grid(m).into_iter().map(|t| f.eval(Complex64::from_polar(1.0, t))).collect();
    let columns: Vec<Result<Vec<Complex64>>> = (1..=n)
        .into_par_iter()
        .map(|k| {
            // q_k ∘ F⁻¹ pulled back to the parameter circle is e^{-ikθ}/√k
            let q = FourierFunction::from_modes(n, &[(-(k as i64), Complex64::new(1.0 / (k as f64).sqrt(), 0.0))])?;
            let jump = cauchy::jump_decompose(f, &BoundaryFunction::from_fourier(q)?, n)?;
            // P(Ω⁻) h = -h₋ in the convention h = h₊ - h₋
            let vals: Vec<Complex64> = boundary.iter().map(|&z| -jump.minus_at(z)).collect();
            let spec = spectral::analyze(&vals);
            Ok((1..=n as i64).flat_map(|r| [spectral::mode(&spec, r), spectral::mode(&spec, -r)]).collect())
        })
        .collect();
    let mut plus = CMat::zeros(n, n);
    let mut minus = CMat::zeros(n, n);
    for (j, col) in columns.into_iter().enumerate() {
        let col = col?;
        for i in 0..n {
            let w = ((i + 1) as f64).sqrt();
            plus[(i, j)] = col[2 * i] * w;
            minus[(i, j)] = col[2 * i + 1] * w;
        }
    }
    let ones = vec![Complex64::new(1.0, 0.0); m];
    let spec = spectral::analyze(&ones);
    let constant_column = (1..=n as i64).map(|r| spectral::mode(&spec, -r) * (r as f64).sqrt()).collect();
    Ok(ProjectionPipeline { plus, minus, constant_column })
}

/// `Gr_F = P(𝔻⁺) C_F I_F` assembled column by column through the jump.
pub fn grunsky_matrix_proj(f: &PowerSeriesMap, n: usize) -> Result<OperatorMatrix> {
    let p = projection_pipeline(f, n)?;
    OperatorMatrix::new(p.plus, ModeBasis::plus(n), ModeBasis::minus(n), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphCheck {
    /// `‖P(𝔻⁻) C_F I_F − Id‖`.
    pub id_residual: f64,
    /// `‖P(𝔻⁺) C_F I_F − Gr_F‖` against the coefficient route.
    pub graph_residual: f64,
}

pub fn graph_subspace_check(f: &PowerSeriesMap, n: usize) -> Result<GraphCheck> {
    let p = projection_pipeline(f, n)?;
    let gr = grunsky_matrix_coeff(f, n)?;
    Ok(GraphCheck {
        id_residual: linalg::op_norm(&(&p.minus - linalg::identity(n))),
        graph_residual: linalg::op_norm(&(&p.plus - &gr.entries)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetLineReport {
    pub dim_kernel: usize,
    pub dim_cokernel: usize,
    pub index: i64,
    pub singular_values: Vec<f64>,
    /// `‖C_F π I_F − Id‖`.
    pub identity_residual: f64,
    pub order: usize,
    pub rank_tol: f64,
}

/// Matrix of `C_F ∘ π` from `{1} ∪ {I_F q_n}` to `{q_m}`, and the rank
/// count of its singular values.
pub fn pi_report(f: &PowerSeriesMap, n: usize, rank_tol: f64) -> Result<DetLineReport> {
    if !(rank_tol > 0.0) {
        return Err(Error::input("rank tolerance must be positive"));
    }
    let (pi, identity_residual) = pi_matrix(f, n)?;
    let sv = linalg::singular_values(&pi.entries);
    if let Some(&s) = sv.iter().find(|&&s| s > rank_tol / 10.0 && s < 10.0 * rank_tol) {
        return Err(Error::AmbiguousRank { value: s, tol: rank_tol });
    }
    let rank = sv.iter().filter(|&&s| s > rank_tol).count();
    let (rows, cols) = (pi.nrows(), pi.ncols());
    let dim_kernel = cols - rank;
    let dim_cokernel = rows - rank;
    Ok(DetLineReport {
        dim_kernel,
        dim_cokernel,
        index: dim_kernel as i64 - dim_cokernel as i64,
        singular_values: sv,
        identity_residual,
        order: n,
        rank_tol,
    })
}

/// The `N × (N+1)` matrix of `C_F ∘ π`; column 0 is the constant function.
pub fn pi_matrix(f: &PowerSeriesMap, n: usize) -> Result<(OperatorMatrix, f64)> {
    let p = projection_pipeline(f, n)?;
    let mut m = CMat::zeros(n, n + 1);
    for i in 0..n {
        m[(i, 0)] = p.constant_column[i];
    }
    m.view_mut((0, 1), (n, n)).copy_from(&p.minus);
    let residual = linalg::op_norm(&(&p.minus - linalg::identity(n)));
    let cols = ModeBasis::new(BasisFamily::Exterior, (0..=n as i64).collect());
    Ok((OperatorMatrix::new(m, ModeBasis::minus(n), cols, n)?, residual))
}

/// Shale cocycle `det(a₁ a₂ a₃⁻¹) = det(I − b₁ c₂ a₃⁻¹)` where `a₃` is the
/// top-left block of the product `A₁ A₂`.
pub fn shale_cocycle_det(a1: &BlockDecomposition, a2: &BlockDecomposition) -> Result<Complex64> {
    if a1.order != a2.order {
        return Err(Error::input("blocks have different truncation orders"));
    }
    let a3 = &a1.a * &a2.a + &a1.b * a2.c();
    let cond = linalg::condition_number(&a3);
    if !(cond < 1e12) {
        return Err(Error::input(format!("a₃ is ill-conditioned (condition number {cond:e})")));
    }
    let n = a1.order;
    // X = b₁ c₂ a₃⁻¹ via a₃ᵀ Xᵀ = (b₁ c₂)ᵀ
    let bc = &a1.b * a2.c();
    let x = linalg::solve(&a3.transpose(), &bc.transpose())?.transpose();
    Ok((linalg::identity(n) - x).determinant())
}

/// Block decomposition of the product `A₁ A₂` of the assembled truncations.
pub fn block_product(a1: &BlockDecomposition, a2: &BlockDecomposition) -> BlockDecomposition {
    BlockDecomposition { a: &a1.a * &a2.a + &a1.b * a2.c(), b: &a1.a * &a2.b + &a1.b * a2.d(), order: a1.order }
}

/// `|c(A,B) c(AB,C) − c(A,BC) c(B,C)|`: the 2-cocycle identity evaluated
/// along its two bracketings.
pub fn cocycle_defect(a: &BlockDecomposition, b: &BlockDecomposition, c: &BlockDecomposition) -> Result<f64> {
    let ab = block_product(a, b);
    let bc = block_product(b, c);
    let left = shale_cocycle_det(a, b)? * shale_cocycle_det(&ab, c)?;
    let right = shale_cocycle_det(a, &bc)? * shale_cocycle_det(b, c)?;
    Ok((left - right).norm())
}

/// `log det(I − Gr* Gr)` at truncation `n`.
pub fn wp_kahler_potential(f: &PowerSeriesMap, n: usize) -> Result<f64> {
    let gr = grunsky_matrix_coeff(f, n)?;
    kahler_potential_of(&gr.entries)
}

pub fn kahler_potential_of(gr: &CMat) -> Result<f64> {
    let sv = linalg::singular_values(gr);
    let top = sv.first().copied().unwrap_or(0.0);
    if top >= 1.0 {
        return Err(Error::input(format!("Grunsky operator has norm {top} ≥ 1 at this truncation")));
    }
    Ok(sv.iter().map(|s| (1.0 - s * s).ln()).sum())
}

/// Block Grunsky matrix of the riggings of a sphere with finite punctures:
/// block `(i, j)`, entry `(m, n)` is `-√(mn)` times the `z^m w^n`
/// coefficient of `log((f_i(z) − f_i(w))/(z − w))` for `i = j` and of
/// `log(f_i(z) − f_j(w))` otherwise.
pub fn multi_grunsky(s: &RiggedSphere, n: usize) -> Result<OperatorMatrix> {
    check_order(n)?;
    let maps = s.finite_riggings()?;
    let k = maps.len();
    let blocks: Vec<Result<Vec<Vec<Complex64>>>> = (0..k * k)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / k, idx % k);
            if i == j {
                faber::bivariate_log(&maps[i], n)
            } else {
                faber::bivariate_log_pair(&maps[i], &maps[j], n)
            }
        })
        .collect();
    let mut m = CMat::zeros(k * n, k * n);
    for (idx, b) in blocks.into_iter().enumerate() {
        let b = b?;
        let (i, j) = (idx / k, idx % k);
        for r in 0..n {
            for c in 0..n {
                m[(i * n + r, j * n + c)] = -b[r][c] * (((r + 1) * (c + 1)) as f64).sqrt();
            }
        }
    }
    let rows = ModeBasis::new(BasisFamily::Plus, (0..k).flat_map(|_| 1..=n as i64).collect());
    let cols = ModeBasis::new(BasisFamily::Minus, (0..k).flat_map(|_| 1..=n as i64).collect());
    OperatorMatrix::new(m, rows, cols, n)
}

/// Operator norm of `Gr`, the square root of the spectral radius of `Gr* Gr`.
pub fn grunsky_norm(gr: &OperatorMatrix) -> f64 {
    linalg::op_norm(&gr.entries)
}

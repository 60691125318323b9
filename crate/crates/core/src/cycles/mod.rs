//! Floating-point check of the explicit cycle basis for `W = x^r`.
//!
//! The rays `Ψ_j = {t e^{iθ_j}}`, `θ_j = (π + arg ħ + 2πj)/r`, make
//! `x^r/ħ` real and negative. Differences `Ψ_{j+1} - Ψ_j` pair with the
//! monomials `x^k` through a matrix `A`, and the cycles `Ξ_j` are the rows
//! of `A^{-1}`, written in closed form. Everything here uses the principal
//! branch `arg ħ ∈ (-π, π]` unless an argument is supplied explicitly.

pub mod gamma;
pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::oscillatory::FermatSignature;
use gamma::gamma;
pub use quadrature::NonConvergence;

/// Tolerance for checks that go through quadrature.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Tolerance for pure linear-algebra identities.
pub const ALGEBRA_TOL: f64 = 1e-10;

/// Tail cutoff for `∫_0^∞ e^{-w^p} dw`: integrate until `w^p = 40`.
const TAIL_EXPONENT: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CyclesError {
    #[error("r must be at least 2, got {0}")]
    BadRank(u32),
    #[error("ħ must be nonzero and finite")]
    BadHbar,
    #[error("monomial degree {k} out of range for r = {r}")]
    BadDegree { r: u32, k: u32 },
    #[error("product check needs exactly two exponents, each at most 5")]
    BadSignature,
    #[error(transparent)]
    Quadrature(#[from] NonConvergence),
}

/// ħ with an explicit argument, so that `ħ^{s} = |ħ|^s e^{i s arg ħ}` is
/// unambiguous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hbar {
    modulus: f64,
    arg: f64,
}

impl Hbar {
    /// Principal branch, `arg ∈ (-π, π]`.
    pub fn principal(z: Complex64) -> Result<Self, CyclesError> {
        let modulus = z.norm();
        if !(modulus > 0.0 && modulus.is_finite()) {
            return Err(CyclesError::BadHbar);
        }
        let mut arg = z.arg();
        if arg <= -PI {
            arg += 2.0 * PI;
        }
        Ok(Hbar { modulus, arg })
    }

    /// Any branch; used to move between sheets.
    pub fn with_arg(modulus: f64, arg: f64) -> Result<Self, CyclesError> {
        if !(modulus > 0.0 && modulus.is_finite() && arg.is_finite()) {
            return Err(CyclesError::BadHbar);
        }
        Ok(Hbar { modulus, arg })
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.arg)
    }

    /// `ħ^s` on this branch.
    pub fn pow(&self, s: f64) -> Complex64 {
        Complex64::from_polar(self.modulus.powf(s), s * self.arg)
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| {
            (0..self.n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_rank(r: u32) -> Result<(), CyclesError> {
    if r < 2 {
        Err(CyclesError::BadRank(r))
    } else {
        Ok(())
    }
}

fn zeta_pow(r: u32, e: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * e as f64 / r as f64)
}

fn ray_angle(r: u32, j: i64, hbar: &Hbar) -> f64 {
    (PI + hbar.arg + 2.0 * PI * j as f64) / r as f64
}

/// `∫_{Ψ_j} x^k e^{x^r/ħ} dx` by quadrature.
///
/// With `x = t e^{iθ_j}` and `w = (t / |ħ|^{1/r})^{k+1}` the integral becomes
/// `e^{iθ_j(k+1)} |ħ|^{(k+1)/r} / (k+1) · ∫_0^∞ e^{-w^{r/(k+1)}} dw`, whose
/// integrand is bounded and decays monotonically.
pub fn psi_ray_integral(r: u32, j: i64, k: u32, hbar: &Hbar) -> Result<Complex64, CyclesError> {
    check_rank(r)?;
    if k + 2 > r {
        return Err(CyclesError::BadDegree { r, k });
    }
    let s = (k + 1) as f64 / r as f64;
    let p = 1.0 / s;
    let upper = TAIL_EXPONENT.powf(s);
    let radial = quadrature::integrate(|w: f64| (-w.powf(p)).exp(), 0.0, upper, 1e-14)?;
    let scale = hbar.modulus.powf(s) / (k + 1) as f64;
    Ok(Complex64::from_polar(1.0, ray_angle(r, j, hbar) * (k + 1) as f64) * scale * radial)
}

/// `∫_{Ψ_j} x^k e^{x^r/ħ} dx = (1/r) e^{iθ_j(k+1)} |ħ|^{(k+1)/r} Γ((k+1)/r)`.
pub fn psi_ray_closed(r: u32, j: i64, k: u32, hbar: &Hbar) -> Complex64 {
    let s = (k + 1) as f64 / r as f64;
    Complex64::from_polar(1.0, ray_angle(r, j, hbar) * (k + 1) as f64)
        * (hbar.modulus.powf(s) * gamma(s) / r as f64)
}

/// `C_k = e^{πi(k+1)/r} ħ^{(k+1)/r} Γ((k+1)/r) (e^{2πi(k+1)/r} - 1)`.
pub fn c_coefficient(r: u32, k: u32, hbar: &Hbar) -> Complex64 {
    let s = (k + 1) as f64 / r as f64;
    Complex64::from_polar(1.0, PI * s)
        * hbar.pow(s)
        * gamma(s)
        * (zeta_pow(r, (k + 1) as i64) - 1.0)
}

/// `A_{jk} = (1/r) C_k ζ^{j(k+1)}`, `0 <= j, k <= r - 2`.
pub fn a_matrix_closed(r: u32, hbar: &Hbar) -> Result<CMatrix, CyclesError> {
    check_rank(r)?;
    let c: Vec<Complex64> = (0..r - 1).map(|k| c_coefficient(r, k, hbar)).collect();
    Ok(CMatrix::from_fn((r - 1) as usize, |j, k| {
        c[k] * zeta_pow(r, (j * (k + 1)) as i64) / r as f64
    }))
}

/// `A_{jk} = ∫_{Ψ_{j+1} - Ψ_j} x^k e^{x^r/ħ} dx` by quadrature.
pub fn a_matrix_quadrature(r: u32, hbar: &Hbar) -> Result<CMatrix, CyclesError> {
    check_rank(r)?;
    let n = (r - 1) as usize;
    // rays[j][k] for j in 0..=r-1.
    let mut rays = vec![vec![Complex64::new(0.0, 0.0); n]; n + 1];
    for (j, row) in rays.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = psi_ray_integral(r, j as i64, k as u32, hbar)?;
        }
    }
    Ok(CMatrix::from_fn(n, |j, k| rays[j + 1][k] - rays[j][k]))
}

/// `B = A C^{-1}`, entries `(1/r) ζ^{j(k+1)}`.
pub fn b_matrix(r: u32) -> Result<CMatrix, CyclesError> {
    check_rank(r)?;
    Ok(CMatrix::from_fn((r - 1) as usize, |j, k| {
        zeta_pow(r, (j * (k + 1)) as i64) / r as f64
    }))
}

/// `(B^{-1})_{jk} = ζ^{-k(j+1)} - ζ^{j+1}`.
pub fn b_inverse_explicit(r: u32) -> Result<CMatrix, CyclesError> {
    check_rank(r)?;
    Ok(CMatrix::from_fn((r - 1) as usize, |j, k| {
        zeta_pow(r, -((k * (j + 1)) as i64)) - zeta_pow(r, (j + 1) as i64)
    }))
}

/// The explicit basis `Ξ_j = Σ_k (A^{-1})_{jk} (Ψ_{k+1} - Ψ_k)` with
/// `(A^{-1})_{jk} = (ζ^{-k(j+1)} - ζ^{j+1}) / C_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleBasis {
    pub r: u32,
    pub hbar: Hbar,
    pub coefficients: CMatrix,
}

impl CycleBasis {
    pub fn new(r: u32, hbar: Hbar) -> Result<Self, CyclesError> {
        let b_inv = b_inverse_explicit(r)?;
        let c: Vec<Complex64> = (0..r - 1).map(|j| c_coefficient(r, j, &hbar)).collect();
        let coefficients = CMatrix::from_fn((r - 1) as usize, |j, k| b_inv.get(j, k) / c[j]);
        Ok(CycleBasis {
            r,
            hbar,
            coefficients,
        })
    }

    /// `P_{jk} = ∫_{Ξ_j} x^k e^{x^r/ħ} dx`, given the ray-difference matrix.
    pub fn pairing(&self, a: &CMatrix) -> CMatrix {
        self.coefficients.mul(a)
    }
}

/// Max `|∫_{Ξ_j} x^k e^{x^r/ħ} dx - δ_{jk}|` with the pairing built from
/// quadrature over the rays.
pub fn dual_basis_check(r: u32, hbar: &Hbar) -> Result<f64, CyclesError> {
    Ok(pairing_by_quadrature(r, hbar)?.max_abs_diff(&CMatrix::identity((r - 1) as usize)))
}

/// As [`dual_basis_check`] with the closed-form `A`.
pub fn dual_basis_check_closed(r: u32, hbar: &Hbar) -> Result<f64, CyclesError> {
    let basis = CycleBasis::new(r, *hbar)?;
    let pairing = basis.pairing(&a_matrix_closed(r, hbar)?);
    Ok(pairing.max_abs_diff(&CMatrix::identity((r - 1) as usize)))
}

fn pairing_by_quadrature(r: u32, hbar: &Hbar) -> Result<CMatrix, CyclesError> {
    let basis = CycleBasis::new(r, *hbar)?;
    Ok(basis.pairing(&a_matrix_quadrature(r, hbar)?))
}

/// Max relative error between quadrature and closed form over every ray
/// `Ψ_0..Ψ_{r-1}` and degree `k <= r - 2`.
pub fn ray_quadrature_error(r: u32, hbar: &Hbar) -> Result<f64, CyclesError> {
    check_rank(r)?;
    let mut worst: f64 = 0.0;
    for j in 0..r as i64 {
        for k in 0..r - 1 {
            let q = psi_ray_integral(r, j, k, hbar)?;
            let c = psi_ray_closed(r, j, k, hbar);
            worst = worst.max((q - c).norm() / c.norm());
        }
    }
    Ok(worst)
}

/// Max deviation of `∫_{Ξ_δ} x^{δ'} e^{(x_1^{r_1} + x_2^{r_2})/ħ} Ω` from
/// `δ_{δδ'}` for the product cycles `Ξ_δ = Ξ_{δ_1} × Ξ_{δ_2}`.
pub fn product_dual_check(sig: &FermatSignature, hbar: &Hbar) -> Result<f64, CyclesError> {
    let &[r1, r2] = sig.exponents() else {
        return Err(CyclesError::BadSignature);
    };
    if r1 > 5 || r2 > 5 {
        return Err(CyclesError::BadSignature);
    }
    let p1 = pairing_by_quadrature(r1, hbar)?;
    let p2 = pairing_by_quadrature(r2, hbar)?;
    let indices = sig.basis_indices();
    let mut worst: f64 = 0.0;
    for d in &indices {
        for e in &indices {
            let value = p1.get(d[0] as usize, e[0] as usize) * p2.get(d[1] as usize, e[1] as usize);
            let target = if d == e { 1.0 } else { 0.0 };
            worst = worst.max((value - target).norm());
        }
    }
    Ok(worst)
}

/// Every numeric check for one `(r, ħ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclesReport {
    pub r: u32,
    pub hbar: Hbar,
    pub ray_relative_error: f64,
    pub a_difference_error: f64,
    pub b_inverse_error: f64,
    pub dual_closed_error: f64,
    pub dual_quadrature_error: f64,
}

impl CyclesReport {
    pub fn passed(&self) -> bool {
        self.ray_relative_error < QUADRATURE_TOL
            && self.a_difference_error < QUADRATURE_TOL
            && self.b_inverse_error < ALGEBRA_TOL
            && self.dual_closed_error < ALGEBRA_TOL
            && self.dual_quadrature_error < QUADRATURE_TOL
    }
}

pub fn cycles_report(r: u32, hbar: &Hbar) -> Result<CyclesReport, CyclesError> {
    let closed = a_matrix_closed(r, hbar)?;
    let quad = a_matrix_quadrature(r, hbar)?;
    let scale = (0..closed.n())
        .flat_map(|i| (0..closed.n()).map(move |j| (i, j)))
        .map(|(i, j)| closed.get(i, j).norm())
        .fold(0.0, f64::max);
    let b = b_matrix(r)?;
    let b_inv = b_inverse_explicit(r)?;
    let n = (r - 1) as usize;
    Ok(CyclesReport {
        r,
        hbar: *hbar,
        ray_relative_error: ray_quadrature_error(r, hbar)?,
        a_difference_error: quad.max_abs_diff(&closed) / scale,
        b_inverse_error: b.mul(&b_inv).max_abs_diff(&CMatrix::identity(n)),
        dual_closed_error: dual_basis_check_closed(r, hbar)?,
        dual_quadrature_error: CycleBasis::new(r, *hbar)?
            .pairing(&quad)
            .max_abs_diff(&CMatrix::identity(n)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> Hbar {
        Hbar::principal(Complex64::new(1.0, 0.0)).unwrap()
    }

    fn h_polar(arg: f64) -> Hbar {
        Hbar::principal(Complex64::from_polar(1.0, arg)).unwrap()
    }

    #[test]
    fn quartic_first_ray() {
        let v = psi_ray_integral(4, 0, 0, &h1()).unwrap();
        let expected = Complex64::from_polar(3.625_609_908_221_908 / 4.0, PI / 4.0);
        assert!((v - expected).norm() < 1e-8);
        assert!((v.re - 0.640_923_3).abs() < 1e-6);
    }

    #[test]
    fn ray_difference_matches_closed_a() {
        for r in 2..=6 {
            for hbar in [
                h1(),
                Hbar::principal(Complex64::new(2.0, 0.0)).unwrap(),
                h_polar(PI / 3.0),
            ] {
                let quad = a_matrix_quadrature(r, &hbar).unwrap();
                let closed = a_matrix_closed(r, &hbar).unwrap();
                for j in 0..r as usize - 1 {
                    for k in 0..r as usize - 1 {
                        let rel =
                            (quad.get(j, k) - closed.get(j, k)).norm() / closed.get(j, k).norm();
                        assert!(rel < 1e-8, "r={r} j={j} k={k} rel={rel}");
                    }
                }
                assert!(ray_quadrature_error(r, &hbar).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn negative_hbar_uses_rotated_ray() {
        // ħ = -1 has arg π, so Ψ_0 is the negative real axis and x^2/ħ = -t^2.
        let hbar = Hbar::principal(Complex64::new(-1.0, 0.0)).unwrap();
        assert_eq!(hbar.arg(), PI);
        let v = psi_ray_integral(2, 0, 0, &hbar).unwrap();
        let half_gaussian = PI.sqrt() / 2.0;
        assert!((v - Complex64::new(-half_gaussian, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn b_times_explicit_inverse_is_identity() {
        for r in 2..=9 {
            let b = b_matrix(r).unwrap();
            let inv = b_inverse_explicit(r).unwrap();
            let id = CMatrix::identity(r as usize - 1);
            assert!(b.mul(&inv).max_abs_diff(&id) < ALGEBRA_TOL);
            assert!(inv.mul(&b).max_abs_diff(&id) < ALGEBRA_TOL);
        }
    }

    #[test]
    fn b_is_a_times_c_inverse() {
        let hbar = h_polar(0.7);
        for r in 2..=6 {
            let a = a_matrix_closed(r, &hbar).unwrap();
            let b = b_matrix(r).unwrap();
            let n = r as usize - 1;
            let c_inv = CMatrix::from_fn(n, |i, j| {
                if i == j {
                    1.0 / c_coefficient(r, i as u32, &hbar)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            assert!(a.mul(&c_inv).max_abs_diff(&b) < ALGEBRA_TOL);
        }
    }

    #[test]
    fn scalar_case() {
        let a = a_matrix_closed(2, &h1()).unwrap();
        let basis = CycleBasis::new(2, h1()).unwrap();
        assert_eq!(a.n(), 1);
        assert!((basis.coefficients.get(0, 0) * a.get(0, 0) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn dual_basis_examples() {
        assert!(dual_basis_check(4, &h1()).unwrap() < 1e-8);
        assert!(dual_basis_check(5, &h_polar(PI / 3.0)).unwrap() < 1e-8);
        assert!(dual_basis_check_closed(3, &h1()).unwrap() < 1e-12);
    }

    #[test]
    fn branch_shift_moves_rays() {
        for r in 2..=6 {
            let hbar = h_polar(0.4);
            let shifted = Hbar::with_arg(hbar.modulus(), hbar.arg() + 2.0 * PI).unwrap();
            for j in 0..r as i64 {
                for k in 0..r - 1 {
                    let moved = psi_ray_closed(r, j, k, &shifted);
                    let next = psi_ray_closed(r, j + 1, k, &hbar);
                    assert!((moved - next).norm() < 1e-10);
                }
            }
            let a = a_matrix_closed(r, &hbar).unwrap();
            let a_shift = a_matrix_closed(r, &shifted).unwrap();
            for j in 0..r as usize - 2 {
                for k in 0..r as usize - 1 {
                    assert!((a_shift.get(j, k) - a.get(j + 1, k)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn product_cycles() {
        let sig = |a, b| FermatSignature::new(vec![a, b]).unwrap();
        assert!(product_dual_check(&sig(3, 3), &h1()).unwrap() < 1e-8);
        assert!(product_dual_check(&sig(2, 2), &h1()).unwrap() < 1e-12);
        assert!(product_dual_check(&sig(3, 4), &h_polar(PI / 5.0)).unwrap() < 1e-8);
        assert!(matches!(
            product_dual_check(&FermatSignature::single(3).unwrap(), &h1()),
            Err(CyclesError::BadSignature)
        ));
    }

    #[test]
    fn rejects_zero_hbar() {
        assert!(Hbar::principal(Complex64::new(0.0, 0.0)).is_err());
    }
}

//! Formal oscillatory integrals over the dual cycles `Ξ_d`.
//!
//! In the twisted de Rham quotient for `W_0 = Σ x_i^{r_i}` a monomial form
//! reduces to the basis `{x^δ Ω : 0 <= δ_i <= r_i - 2}` by two relations:
//! `x_i^{r_i - 1}(...)Ω = 0` and `x_i^{r_i + a}(...)Ω = -ħ (a+1)/r_i x_i^a(...)Ω`.
//! Pairing with `Ξ_δ` then picks out one basis coefficient.

use num_traits::One;

use crate::poly::{Monomial, Poly};
use crate::rational::{self, Rational};
use crate::series::HbarSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OscillatoryError {
    #[error("exponent {0} must be at least 2")]
    BadExponent(u32),
    #[error("exponent vector has {got} entries for {expected} variables")]
    Arity { expected: usize, got: usize },
    #[error("basis index {d} out of range 0..={max}")]
    BasisIndex { d: u32, max: u32 },
    #[error("registry has no x variable")]
    NoX,
    #[error("W - x^r has an unsupported term {0}")]
    Precondition(String),
}

/// Exponents `r_1, ..., r_n` of a Fermat potential `Σ x_i^{r_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatSignature {
    exponents: Vec<u32>,
}

impl FermatSignature {
    pub fn new(exponents: Vec<u32>) -> Result<Self, OscillatoryError> {
        if exponents.is_empty() {
            return Err(OscillatoryError::Arity {
                expected: 1,
                got: 0,
            });
        }
        if let Some(&r) = exponents.iter().find(|&&r| r < 2) {
            return Err(OscillatoryError::BadExponent(r));
        }
        Ok(FermatSignature { exponents })
    }

    pub fn single(r: u32) -> Result<Self, OscillatoryError> {
        Self::new(vec![r])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// `Π (r_i - 1)`.
    pub fn dimension(&self) -> usize {
        self.exponents.iter().map(|&r| (r - 1) as usize).product()
    }

    /// The index set `D`, lexicographically.
    pub fn basis_indices(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &r in &self.exponents {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..r - 1).map(move |d| {
                        let mut v = prefix.clone();
                        v.push(d);
                        v
                    })
                })
                .collect();
        }
        out
    }

    fn check(&self, e: &[u32]) -> Result<(), OscillatoryError> {
        if e.len() != self.n() {
            return Err(OscillatoryError::Arity {
                expected: self.n(),
                got: e.len(),
            });
        }
        Ok(())
    }
}

/// A monomial form after reduction: zero, or `scalar · ħ^power · x^δ Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducedForm {
    Zero,
    Basis {
        index: Vec<u32>,
        hbar_power: u32,
        scalar: Rational,
    },
}

/// Closed-form reduction: `x^{mr+k}` becomes
/// `(-1)^m ħ^m (Π_{i=1}^m (i - 1 + (k+1)/r)) x^k`, or zero when `k = r - 1`.
pub fn reduce_monomial(sig: &FermatSignature, e: &[u32]) -> Result<ReducedForm, OscillatoryError> {
    sig.check(e)?;
    let mut index = Vec::with_capacity(e.len());
    let mut hbar_power = 0;
    let mut scalar = Rational::one();
    for (&exp, &r) in e.iter().zip(sig.exponents()) {
        let (m, k) = (exp / r, exp % r);
        if k == r - 1 {
            return Ok(ReducedForm::Zero);
        }
        let step = rational::rising_factorial(&rational::frac(k as i64 + 1, r as i64), m);
        scalar *= if m % 2 == 0 { step } else { -step };
        hbar_power += m;
        index.push(k);
    }
    Ok(ReducedForm::Basis {
        index,
        hbar_power,
        scalar,
    })
}

/// The same reduction done one relation at a time, variable by variable.
pub fn reduce_monomial_stepwise(
    sig: &FermatSignature,
    e: &[u32],
) -> Result<ReducedForm, OscillatoryError> {
    sig.check(e)?;
    let mut exps = e.to_vec();
    let mut hbar_power = 0;
    let mut scalar = Rational::one();
    for (i, &r) in sig.exponents().iter().enumerate() {
        loop {
            if exps[i] == r - 1 {
                return Ok(ReducedForm::Zero);
            }
            if exps[i] < r {
                break;
            }
            exps[i] -= r;
            hbar_power += 1;
            scalar *= -rational::frac(exps[i] as i64 + 1, r as i64);
        }
    }
    Ok(ReducedForm::Basis {
        index: exps,
        hbar_power,
        scalar,
    })
}

/// Expansions `∫_{Ξ_d} e^{W/ħ} dx` for every `d in 0..=r-2`, exact through
/// total deformation degree `cap`.
///
/// `W - x^r` must consist of terms with deformation degree at least 1 and
/// x-degree at most `r - 1`; every non-x variable of the registry counts as
/// a deformation variable.
pub fn expand_all(r: u32, w: &Poly, cap: u32) -> Result<Vec<HbarSeries>, OscillatoryError> {
    if r < 2 {
        return Err(OscillatoryError::BadExponent(r));
    }
    let registry = w.registry().clone();
    let x = registry.x_index().ok_or(OscillatoryError::NoX)?;
    let deformation: Vec<usize> = (0..registry.len()).filter(|&i| i != x).collect();

    let mut leading = vec![0; registry.len()];
    leading[x] = r;
    let mut perturbation = w.clone();
    perturbation.add_term(Monomial::new(leading), -Rational::one());
    for (m, c) in perturbation.terms() {
        if m.degree_in(&deformation) == 0 || m.exponents()[x] >= r {
            let single = Poly::from_terms(&registry, [(m.exponents().to_vec(), c.clone())])
                .expect("arity matches");
            return Err(OscillatoryError::Precondition(single.to_text()));
        }
    }

    let mut series: Vec<HbarSeries> = (0..r - 1).map(|_| HbarSeries::zero(&registry)).collect();
    // h = 0: ∫_{Ξ_d} e^{x^r/ħ} dx = δ_{0d}.
    series[0].add_term(0, Monomial::one(registry.len()), Rational::one());

    // power = (W - x^r)^h / h!, truncated before each multiplication.
    let mut power = Poly::one(&registry);
    for h in 1..=cap {
        power = power
            .mul_truncated(&perturbation, &deformation, cap)
            .expect("same registry")
            .scale(&rational::frac(1, h as i64));
        if power.is_zero() {
            break;
        }
        for (m, c) in power.terms() {
            let e = m.exponents()[x];
            let (n, k) = (e / r, e % r);
            if k == r - 1 {
                continue;
            }
            let mut factor = rational::rising_factorial(&rational::frac(k as i64 + 1, r as i64), n);
            if n % 2 == 1 {
                factor = -factor;
            }
            let mut stripped = m.exponents().to_vec();
            stripped[x] = 0;
            // ħ^{-h} from the exponential, ħ^{n} from the reduction.
            let j = h as i64 - n as i64;
            series[k as usize].add_term(j, Monomial::new(stripped), c * factor);
        }
    }
    Ok(series)
}

/// `∫_{Ξ_d} e^{W/ħ} dx` as a series in `ħ^{-1}`; see [`expand_all`].
pub fn expand_integral(r: u32, w: &Poly, d: u32, cap: u32) -> Result<HbarSeries, OscillatoryError> {
    if r < 2 {
        return Err(OscillatoryError::BadExponent(r));
    }
    if d + 2 > r {
        return Err(OscillatoryError::BasisIndex { d, max: r - 2 });
    }
    let mut all = expand_all(r, w, cap)?;
    Ok(all.swap_remove(d as usize))
}

//! Primitivity and flat coordinates of the deformed potential.
//!
//! [`verify_theorem_a`] expands `∫_{Ξ_d} e^{W_t/ħ} dx` and checks that no
//! positive power of ħ survives, that the `ħ^0` part is `δ_{0d}`, and that
//! the `ħ^{-1}` part is exactly `t_d`.
//!
//! Two independent cross-checks live here as well. [`oracle_flat_potential`]
//! rebuilds `W_t` without any invariants, by inverting the flat coordinates
//! of the versal unfolding. [`lambda_value`] and [`cont_recursion_check`]
//! evaluate the partition sums `Λ_I` whose vanishing is equivalent to
//! flatness.
//!
//! Nonzero contributions to `φ_{d,1}` come from admissible multisets, which
//! have at most `⌊r/2⌋` elements (each `b_i >= 2` and `b_I <= r`), so a
//! degree cap of `⌊r/2⌋` already decides the `j <= 1` coefficients exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{all_set_partitions, multiset_partitions, SetPartition, TwistMultiset};
use crate::invariants::{admissible_multisets, is_admissible};
use crate::oscillatory::{expand_all, OscillatoryError};
use crate::poly::{Poly, PolyError};
use crate::potential::{build_deformed_potential, build_versal};
use crate::rational::{self, Rational};
use crate::registry::{VarRegistry, VarRole};
use crate::series::{series_invert, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlatnessError {
    #[error("r must be at least 2, got {0}")]
    BadRank(u32),
    #[error("degree cap {cap} is below the required {min}")]
    CapTooSmall { cap: u32, min: u32 },
    #[error("multiset {0} is not admissible")]
    Inadmissible(String),
    #[error("need at least two twists, got {0}")]
    TooFewTwists(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Oscillatory(#[from] OscillatoryError),
}

/// A single offending coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub d: u32,
    /// Exponent of `ħ^{-j}`.
    pub j: i64,
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub d: u32,
    pub phi0: Poly,
    /// Nonzero coefficients of positive ħ powers (`j < 0`).
    pub positive_powers: Vec<(i64, Poly)>,
    pub phi1: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitivityReport {
    pub r: u32,
    pub cap: u32,
    pub indices: Vec<IndexReport>,
    pub primitive: bool,
    pub flat: bool,
    /// Largest t-degree found in any `φ_{d,1}`.
    pub phi1_degree: u32,
    pub violations: Vec<Violation>,
}

impl PrimitivityReport {
    pub fn passed(&self) -> bool {
        self.primitive && self.flat
    }
}

fn violations_of(d: u32, j: i64, diff: &Poly) -> Vec<Violation> {
    diff.terms()
        .map(|(m, c)| {
            let single =
                Poly::from_terms(diff.registry(), [(m.exponents().to_vec(), Rational::one())])
                    .expect("arity matches");
            Violation {
                d,
                j,
                monomial: single.to_text(),
                coefficient: rational::render(c),
            }
        })
        .collect()
}

/// Expands every `∫_{Ξ_d} e^{W_t/ħ} dx` through t-degree `cap` and checks
/// primitivity and flatness of `t_0, ..., t_{r-2}`.
pub fn verify_theorem_a(r: u32, cap: u32) -> Result<PrimitivityReport, FlatnessError> {
    if r < 2 {
        return Err(FlatnessError::BadRank(r));
    }
    let min = (r / 2).max(1);
    if cap < min {
        return Err(FlatnessError::CapTooSmall { cap, min });
    }
    let w = build_deformed_potential(r).poly;
    let registry = w.registry().clone();
    let tvars = registry.deformation_indices();
    let expansions = expand_all(r, &w, cap)?;

    let mut indices = Vec::new();
    let mut violations = Vec::new();
    let (mut primitive, mut flat) = (true, true);
    let mut phi1_degree = 0;
    for (d, series) in expansions.iter().enumerate() {
        let d = d as u32;
        let positive_powers: Vec<(i64, Poly)> = series
            .entries()
            .filter(|&(j, _)| j < 0)
            .map(|(j, p)| (j, p.clone()))
            .collect();
        for (j, p) in &positive_powers {
            primitive = false;
            violations.extend(violations_of(d, *j, p));
        }

        let phi0 = series.coefficient(0);
        let expected0 = if d == 0 {
            Poly::one(&registry)
        } else {
            Poly::zero(&registry)
        };
        let diff0 = phi0.sub(&expected0)?;
        if !diff0.is_zero() {
            primitive = false;
            violations.extend(violations_of(d, 0, &diff0));
        }

        let phi1 = series.coefficient(1);
        phi1_degree = phi1_degree.max(phi1.degree_in(&tvars).unwrap_or(0));
        let diff1 = phi1.sub(&Poly::role(&registry, VarRole::Flat(d)))?;
        if !diff1.is_zero() {
            flat = false;
            violations.extend(violations_of(d, 1, &diff1));
        }
        indices.push(IndexReport {
            d,
            phi0,
            positive_powers,
            phi1,
        });
    }
    Ok(PrimitivityReport {
        r,
        cap,
        indices,
        primitive,
        flat: primitive && flat,
        phi1_degree,
        violations,
    })
}

/// Flat coordinates of the versal unfolding: `t_d = φ_{d,1}(y)`, through
/// y-degree `cap`.
pub fn versal_flat_map(r: u32, cap: u32) -> Result<Vec<Poly>, FlatnessError> {
    if r < 2 {
        return Err(FlatnessError::BadRank(r));
    }
    if cap < 1 {
        return Err(FlatnessError::CapTooSmall { cap, min: 1 });
    }
    let w = build_versal(r).poly;
    Ok(expand_all(r, &w, cap)?
        .iter()
        .map(|s| s.coefficient(1))
        .collect())
}

/// `W_y` rewritten in the flat coordinates of the versal unfolding, modulo
/// `I_{cap+1}`. Uses no invariants.
pub fn oracle_flat_potential(r: u32, cap: u32) -> Result<Poly, FlatnessError> {
    let forward = versal_flat_map(r, cap)?;
    let yreg = VarRegistry::versal(r);
    let treg = VarRegistry::flat(r);
    let yvars = yreg.deformation_indices();
    let tvars = treg.deformation_indices();
    let inverse = series_invert(&forward, &yvars, &treg, &tvars, cap)?;
    let assignment: BTreeMap<usize, Poly> = yvars.iter().copied().zip(inverse).collect();
    let w = build_versal(r).poly;
    Ok(w.substitute_truncated(&assignment, &treg, &tvars, cap)?)
}

/// `Cont(Q)` for a partition of `[l]`, with `b[i-1]` standing for `b_i`.
///
/// `(-1)^{h-1} Π_{j=1}^{h-1}(jr + 1 - b_I) · Π_blocks Π_{i=1}^{|Q_j|-1}(r - b_{Q_j} + i)`.
pub fn cont_with(r: u32, q: &SetPartition, b: &[Poly]) -> Poly {
    assert_eq!(b.len(), q.l(), "one b value per element of [l]");
    let registry = b
        .first()
        .map(|p| p.registry().clone())
        .unwrap_or_else(|| VarRegistry::formal_b(0));
    let constant = |n: i64| Poly::constant(&registry, rational::int(n));
    let b_sum = |block: &[usize]| {
        block.iter().fold(Poly::zero(&registry), |acc, &i| {
            acc.add(&b[i - 1]).expect("same registry")
        })
    };
    let all: Vec<usize> = (1..=q.l()).collect();
    let b_all = b_sum(&all);
    let h = q.h();

    let mut out = constant(if h % 2 == 1 { 1 } else { -1 });
    for j in 1..h {
        let factor = constant(j as i64 * r as i64 + 1)
            .sub(&b_all)
            .expect("same registry");
        out = out.mul(&factor).expect("same registry");
    }
    for block in q.blocks() {
        let b_block = b_sum(block);
        for i in 1..block.len() {
            let factor = constant(r as i64 + i as i64)
                .sub(&b_block)
                .expect("same registry");
            out = out.mul(&factor).expect("same registry");
        }
    }
    out
}

/// `Cont(Q)` either in formal `b_1..b_l` or evaluated at `b_i = r - a_i`.
pub fn cont(r: u32, q: &SetPartition, twists: &[u32], symbolic_b: bool) -> Poly {
    cont_with(r, q, &b_images(r, q.l(), twists, symbolic_b))
}

fn b_images(r: u32, l: usize, twists: &[u32], symbolic: bool) -> Vec<Poly> {
    if symbolic {
        let reg = VarRegistry::formal_b(l as u32);
        (0..l).map(|i| Poly::var(&reg, i)).collect()
    } else {
        assert_eq!(twists.len(), l, "one twist per element of [l]");
        let reg = VarRegistry::formal_b(0);
        twists
            .iter()
            .map(|&a| Poly::constant(&reg, rational::int(r as i64 - a as i64)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaValue {
    Numeric(Rational),
    Symbolic(Poly),
}

impl LambdaValue {
    pub fn is_zero(&self) -> bool {
        match self {
            LambdaValue::Numeric(q) => q.is_zero(),
            LambdaValue::Symbolic(p) => p.is_zero(),
        }
    }
}

/// `|Aut(I)| Λ_I = r^{1-l} Σ_{Q ∈ Part([l])} Cont(Q)`.
pub fn lambda_value(twists: &TwistMultiset, symbolic: bool) -> Result<LambdaValue, FlatnessError> {
    if twists.len() < 2 {
        return Err(FlatnessError::TooFewTwists(twists.len()));
    }
    if !is_admissible(twists) {
        return Err(FlatnessError::Inadmissible(twists.to_string()));
    }
    let by_h = lambda_by_partition_count(twists.r(), twists.entries(), symbolic);
    let registry = by_h[0].registry().clone();
    let total = by_h.iter().fold(Poly::zero(&registry), |acc, p| {
        acc.add(p).expect("same registry")
    });
    Ok(if symbolic {
        LambdaValue::Symbolic(total)
    } else {
        LambdaValue::Numeric(total.coeff(&[]))
    })
}

/// The `h`-block part of `|Aut(I)| Λ_I` for `h = 1..=l`, summed over
/// `Part_h([l])` and scaled by `r^{1-l}`.
pub fn lambda_by_partition_count(r: u32, twists: &[u32], symbolic: bool) -> Vec<Poly> {
    let l = twists.len();
    let b = b_images(r, l, twists, symbolic);
    let registry = b[0].registry().clone();
    let scale = rational::pow_signed(&rational::int(r as i64), 1 - l as i64);
    let mut by_h = vec![Poly::zero(&registry); l];
    for q in all_set_partitions(l) {
        let c = cont_with(r, &q, &b);
        by_h[q.h() - 1] = by_h[q.h() - 1].add(&c).expect("same registry");
    }
    by_h.into_iter().map(|p| p.scale(&scale)).collect()
}

/// The `h`-block part of `|Aut(I)| Λ_I` computed over multiset partitions
/// with automorphism weights and invariants, `h = 1..=l`.
pub fn lambda_by_multiset_partitions(
    twists: &TwistMultiset,
) -> Result<Vec<Rational>, FlatnessError> {
    if !is_admissible(twists) {
        return Err(FlatnessError::Inadmissible(twists.to_string()));
    }
    let r = twists.r() as i64;
    let k_total = twists.residue() as i64;
    let aut_total = Rational::from_integer(BigInt::from(twists.aut_order()));
    let mut out = Vec::with_capacity(twists.len());
    for h in 1..=twists.len() {
        let mut level = Rational::zero();
        for p in multiset_partitions(twists, h) {
            let gamma_ratio =
                rational::rising_factorial(&rational::frac(1 + k_total, r), h as u32 - 1);
            let sign = if h % 2 == 1 {
                rational::int(1)
            } else {
                rational::int(-1)
            };
            let mut term = sign * gamma_ratio / Rational::from_integer(BigInt::from(p.aut_order()));
            for part in p.parts() {
                let k = part.residue();
                let size = part.len() as u32;
                let num = rational::factorial(k + size - 1);
                let den = rational::factorial(k)
                    * BigInt::from(part.aut_order())
                    * num_traits::pow(BigInt::from(r), size as usize - 1);
                term *= Rational::new(num, den);
            }
            level += term;
        }
        out.push(level * &aut_total);
    }
    Ok(out)
}

/// The map `Part([l]) → Part([l-1])` removing the element `l`.
pub fn forget_last(q: &SetPartition) -> SetPartition {
    let l = q.l();
    let blocks = q
        .blocks()
        .iter()
        .map(|b| b.iter().copied().filter(|&i| i != l).collect::<Vec<_>>())
        .collect();
    SetPartition::new(l - 1, blocks)
}

/// Checks `Σ_{Q' ∈ f^{-1}(Q)} Cont(Q')|_{b_l = 0} = (l - 2) Cont(Q)` in
/// formal `b_1, ..., b_{l-1}` for every `Q ∈ Part([l-1])`, along with the
/// fibre structure of `f` (surjective, `h + 1` preimages).
pub fn cont_recursion_check(r: u32, l: usize) -> bool {
    if l < 2 {
        return false;
    }
    let big = VarRegistry::formal_b(l as u32);
    let small = VarRegistry::formal_b(l as u32 - 1);
    let b_big: Vec<Poly> = (0..l).map(|i| Poly::var(&big, i)).collect();
    let b_small: Vec<Poly> = (0..l - 1).map(|i| Poly::var(&small, i)).collect();
    let restrict: BTreeMap<usize, Poly> = [(l - 1, Poly::zero(&small))].into_iter().collect();

    let mut fibres: BTreeMap<SetPartition, Vec<SetPartition>> = BTreeMap::new();
    for q in all_set_partitions(l) {
        fibres.entry(forget_last(&q)).or_default().push(q);
    }
    let targets: BTreeSet<SetPartition> = all_set_partitions(l - 1).into_iter().collect();
    if fibres.keys().cloned().collect::<BTreeSet<_>>() != targets {
        return false;
    }
    fibres.iter().all(|(q, pre)| {
        if pre.len() != q.h() + 1 {
            return false;
        }
        let lhs = pre.iter().fold(Poly::zero(&small), |acc, qp| {
            let restricted = cont_with(r, qp, &b_big)
                .substitute(&restrict, &small)
                .expect("b_1..b_{l-1} carried over");
            acc.add(&restricted).expect("same registry")
        });
        let rhs = cont_with(r, q, &b_small).scale(&rational::int(l as i64 - 2));
        lhs == rhs
    })
}

/// Numeric `|Aut(I)| Λ_I` for every admissible `I` with `2 <= |I| <= max_l`.
pub fn lambda_scan(r: u32, max_l: usize) -> Vec<(TwistMultiset, Rational)> {
    admissible_multisets(r)
        .into_iter()
        .filter(|i| i.len() >= 2 && i.len() <= max_l)
        .map(|i| {
            let v = match lambda_value(&i, false).expect("admissible with two or more twists") {
                LambdaValue::Numeric(q) => q,
                LambdaValue::Symbolic(_) => unreachable!(),
            };
            (i, v)
        })
        .collect()
}

/// Symbolic `|Aut(I)| Λ_I` for `l` formal twists. Depends only on `r` and `l`.
pub fn lambda_symbolic(r: u32, l: usize) -> Poly {
    assert!(l >= 1, "need at least one twist");
    let total = lambda_by_partition_count(r, &vec![0; l], true);
    let registry = total[0].registry().clone();
    total.iter().fold(Poly::zero(&registry), |acc, p| {
        acc.add(p).expect("same registry")
    })
}

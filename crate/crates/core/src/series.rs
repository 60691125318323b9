//! ħ-expansions and truncated inversion of coordinate changes.

use std::collections::BTreeMap;

use crate::poly::{Monomial, Poly, PolyError};
use crate::rational::Rational;
use crate::registry::Registry;

/// `Σ_j φ_j ħ^{-j}` with x-free polynomial coefficients.
///
/// Keys are the exponent `j` of `ħ^{-j}`; a negative key is a positive power
/// of ħ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HbarSeries {
    registry: Registry,
    entries: BTreeMap<i64, Poly>,
}

impl HbarSeries {
    pub fn zero(registry: &Registry) -> Self {
        HbarSeries {
            registry: registry.clone(),
            entries: BTreeMap::new(),
        }
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn add_term(&mut self, j: i64, m: Monomial, c: Rational) {
        if let Some(x) = self.registry.x_index() {
            debug_assert_eq!(m.exponents()[x], 0, "ħ-series coefficients are x-free");
        }
        let entry = self
            .entries
            .entry(j)
            .or_insert_with(|| Poly::zero(&self.registry));
        entry.add_term(m, c);
        if entry.is_zero() {
            self.entries.remove(&j);
        }
    }

    /// Coefficient of `ħ^{-j}`.
    pub fn coefficient(&self, j: i64) -> Poly {
        self.entries
            .get(&j)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.registry))
    }

    /// Nonzero coefficients in increasing `j`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.entries.iter().map(|(&j, p)| (j, p))
    }

    pub fn min_j(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("map {index} does not have identity linear part (found {found})")]
    NonIdentityLinearPart { index: usize, found: String },
    #[error("map {index} depends on variables outside the inverted coordinates")]
    ForeignVariable { index: usize },
    #[error("{maps} maps for {vars} source and {targets} target variables")]
    Shape {
        maps: usize,
        vars: usize,
        targets: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Substitutes `vars[e] ↦ images[e]` into each of `map`, modulo `I_{cap+1}`
/// in `target_vars`.
pub fn compose(
    map: &[Poly],
    vars: &[usize],
    images: &[Poly],
    target: &Registry,
    target_vars: &[usize],
    cap: u32,
) -> Result<Vec<Poly>, PolyError> {
    let assignment: BTreeMap<usize, Poly> =
        vars.iter().copied().zip(images.iter().cloned()).collect();
    map.iter()
        .map(|f| f.substitute_truncated(&assignment, target, target_vars, cap))
        .collect()
}

/// Inverts `t_d = F_d(y)` to `y_d = G_d(t)` modulo `I_{cap+1}`.
///
/// `forward[d]` is a polynomial in the source variables `from_vars` whose
/// linear part is exactly `from_vars[d]`. The result lives in `target`, with
/// `G_d` expressed in `to_vars`. Each fixed-point step
/// `G ← t − (F − id)(G)` fixes one more degree, so `cap` steps suffice.
pub fn series_invert(
    forward: &[Poly],
    from_vars: &[usize],
    target: &Registry,
    to_vars: &[usize],
    cap: u32,
) -> Result<Vec<Poly>, SeriesError> {
    let n = forward.len();
    if from_vars.len() != n || to_vars.len() != n {
        return Err(SeriesError::Shape {
            maps: n,
            vars: from_vars.len(),
            targets: to_vars.len(),
        });
    }
    let mut nonlinear = Vec::with_capacity(n);
    for (d, f) in forward.iter().enumerate() {
        let foreign = f.terms().any(|(m, _)| {
            m.exponents()
                .iter()
                .enumerate()
                .any(|(i, &e)| e > 0 && !from_vars.contains(&i))
        });
        if foreign {
            return Err(SeriesError::ForeignVariable { index: d });
        }
        let linear = f.filter_terms(|m| m.degree_in(from_vars) <= 1);
        let identity = Poly::var(f.registry(), from_vars[d]);
        if linear != identity {
            return Err(SeriesError::NonIdentityLinearPart {
                index: d,
                found: linear.to_text(),
            });
        }
        nonlinear.push(f.sub(&identity)?);
    }

    let coords: Vec<Poly> = to_vars.iter().map(|&i| Poly::var(target, i)).collect();
    let mut inverse = coords.clone();
    for _ in 0..cap {
        let correction = compose(&nonlinear, from_vars, &inverse, target, to_vars, cap)?;
        inverse = coords
            .iter()
            .zip(&correction)
            .map(|(t, c)| t.sub(c))
            .collect::<Result<_, _>>()?;
    }
    Ok(inverse)
}

/// True when each map entry equals its variable up to degree `cap`.
pub fn is_identity_mod(map: &[Poly], vars: &[usize], cap: u32) -> bool {
    map.iter().zip(vars).all(|(p, &v)| {
        let id = Poly::var(p.registry(), v);
        p.truncate_degree(vars, cap) == id
    })
}

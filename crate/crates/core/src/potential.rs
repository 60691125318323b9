//! The deformed potential `W_t` built from invariants, and the versal
//! unfolding `W_y = x^r + Σ y_d x^d`.

use num_bigint::BigInt;
use num_traits::One;

use crate::invariants::{enumerate_nonzero, InvariantEntry};
use crate::poly::{Monomial, Poly};
use crate::rational::{self, Rational};
use crate::registry::{Registry, VarRegistry, VarRole};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformedPotential {
    pub r: u32,
    pub poly: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersalUnfolding {
    pub r: u32,
    pub poly: Poly,
}

/// `(-1)^{l-1} ⟨...⟩ / (k! |Aut(I)|)`; at `l = 0` the sign is `(-1)^{-1} = -1`.
pub fn potential_coefficient(entry: &InvariantEntry) -> Rational {
    let l = entry.key.l();
    let sign = if l % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let aut = crate::combinatorics::aut_order(&entry.key.twists);
    let denom = Rational::from_integer(rational::factorial(entry.key.k) * BigInt::from(aut));
    sign * &entry.value / denom
}

/// The monomial `(Π t_{a_i}) x^k` over `registry`.
fn flat_monomial(registry: &Registry, twists: &[u32], k: u32) -> Monomial {
    let mut e = vec![0u32; registry.len()];
    e[registry.x_index().expect("flat registry has x")] = k;
    for &a in twists {
        let i = registry
            .index_of(VarRole::Flat(a))
            .expect("twist indexes a flat coordinate");
        e[i] += 1;
    }
    Monomial::new(e)
}

pub fn build_deformed_potential(r: u32) -> DeformedPotential {
    let registry = VarRegistry::flat(r);
    let mut poly = Poly::zero(&registry);
    for entry in enumerate_nonzero(r) {
        let m = flat_monomial(&registry, &entry.key.twists, entry.key.k);
        poly.add_term(m, potential_coefficient(&entry));
    }
    DeformedPotential { r, poly }
}

pub fn build_versal(r: u32) -> VersalUnfolding {
    let registry = VarRegistry::versal(r);
    let x = Poly::role(&registry, VarRole::FormalX);
    let mut poly = x.pow(r);
    for d in 0..r - 1 {
        let term = Poly::role(&registry, VarRole::Versal(d))
            .mul(&x.pow(d))
            .expect("same registry");
        poly = poly.add(&term).expect("same registry");
    }
    VersalUnfolding { r, poly }
}

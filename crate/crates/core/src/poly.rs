//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] is a map from exponent vectors to nonzero [`Rational`]s over an
//! explicit [`VarRegistry`]. Canonical order: when the registry has an `x`,
//! terms are graded by their degree in the remaining (deformation) variables,
//! lowest first, then lexicographically descending in registry order; this
//! lists a deformed potential as `x^r`, its linear part, then corrections.
//! Without `x` the order is graded-lex descending.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::registry::{Registry, VarRegistry, VarRole};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("registry mismatch: {left} vs {right}")]
    RegistryMismatch { left: String, right: String },
    #[error("exponent vector has {got} entries, registry has {expected}")]
    Arity { expected: usize, got: usize },
    #[error("variable {0} is neither assigned nor present in the target registry")]
    Unassigned(String),
    #[error("malformed polynomial data: {0}")]
    Malformed(String),
}

/// Exponent vector, one entry per registry variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&i| self.0[i]).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    registry: Registry,
    terms: BTreeMap<Monomial, Rational>,
}

fn same_registry(a: &Registry, b: &Registry) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Poly {
    pub fn zero(registry: &Registry) -> Self {
        Poly {
            registry: registry.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(registry: &Registry) -> Self {
        Self::constant(registry, Rational::one())
    }

    pub fn constant(registry: &Registry, c: Rational) -> Self {
        let mut p = Self::zero(registry);
        p.add_term(Monomial::one(registry.len()), c);
        p
    }

    /// The variable at `index`. Panics when out of range.
    pub fn var(registry: &Registry, index: usize) -> Self {
        assert!(index < registry.len(), "variable index out of range");
        let mut e = vec![0; registry.len()];
        e[index] = 1;
        let mut p = Self::zero(registry);
        p.add_term(Monomial(e), Rational::one());
        p
    }

    /// The variable with the given role. Panics if absent.
    pub fn role(registry: &Registry, role: VarRole) -> Self {
        let idx = registry
            .index_of(role)
            .unwrap_or_else(|| panic!("{} not in registry {registry}", role.name()));
        Self::var(registry, idx)
    }

    pub fn from_terms<I>(registry: &Registry, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(registry);
        for (e, c) in terms {
            if e.len() != registry.len() {
                return Err(PolyError::Arity {
                    expected: registry.len(),
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        let x = self.registry.x_index();
        let mut out: Vec<_> = self.terms.iter().rev().collect();
        // The map iterates in descending lex order already; a stable sort on
        // the grade finishes the job.
        out.sort_by_key(|(m, _)| {
            let total: u32 = m.0.iter().sum();
            match x {
                Some(i) => (total - m.0[i]) as i64,
                None => -(total as i64),
            }
        });
        out.into_iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Largest total degree in `vars`, `None` for the zero polynomial.
    pub fn degree_in(&self, vars: &[usize]) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_in(vars)).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.registry.len());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Poly) -> Result<(), PolyError> {
        if same_registry(&self.registry, &other.registry) {
            Ok(())
        } else {
            Err(PolyError::RegistryMismatch {
                left: self.registry.to_string(),
                right: other.registry.to_string(),
            })
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.registry);
        }
        Poly {
            registry: self.registry.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.mul_filtered(other, |_| true)
    }

    /// Product with every monomial of degree `> cap` in `vars` discarded.
    pub fn mul_truncated(&self, other: &Poly, vars: &[usize], cap: u32) -> Result<Poly, PolyError> {
        self.mul_filtered(other, |m| m.degree_in(vars) <= cap)
    }

    fn mul_filtered(
        &self,
        other: &Poly,
        keep: impl Fn(&Monomial) -> bool,
    ) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if !keep(&m) {
                    continue;
                }
                *acc.entry(m).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Poly {
            registry: self.registry.clone(),
            terms,
        })
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(&self.registry);
        for _ in 0..n {
            out = out.mul(self).expect("same registry");
        }
        out
    }

    /// `p mod I_{cap+1}`: drops monomials of total degree `> cap` in `vars`.
    pub fn truncate_degree(&self, vars: &[usize], cap: u32) -> Poly {
        Poly {
            registry: self.registry.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(vars) <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the terms satisfying `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            registry: self.registry.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Simultaneous substitution into a polynomial over `target`.
    ///
    /// Every variable of `self` that has nonzero exponent somewhere is either
    /// assigned (keyed by its index in `self`'s registry) or is carried over
    /// to the variable with the same role in `target`.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<usize, Poly>,
        target: &Registry,
    ) -> Result<Poly, PolyError> {
        self.substitute_impl(assignment, target, None)
    }

    /// [`Poly::substitute`] computed modulo `I_{cap+1}` in the target `vars`.
    pub fn substitute_truncated(
        &self,
        assignment: &BTreeMap<usize, Poly>,
        target: &Registry,
        vars: &[usize],
        cap: u32,
    ) -> Result<Poly, PolyError> {
        self.substitute_impl(assignment, target, Some((vars, cap)))
    }

    fn substitute_impl(
        &self,
        assignment: &BTreeMap<usize, Poly>,
        target: &Registry,
        trunc: Option<(&[usize], u32)>,
    ) -> Result<Poly, PolyError> {
        for p in assignment.values() {
            if !same_registry(p.registry(), target) {
                return Err(PolyError::RegistryMismatch {
                    left: p.registry().to_string(),
                    right: target.to_string(),
                });
            }
        }
        let n = self.registry.len();
        let mut images: Vec<Option<Poly>> = Vec::with_capacity(n);
        for i in 0..n {
            let used = self.terms.keys().any(|m| m.0[i] > 0);
            let image = match assignment.get(&i) {
                Some(p) => Some(p.clone()),
                None if used => {
                    let role = self.registry.role(i);
                    let j = target
                        .index_of(role)
                        .ok_or_else(|| PolyError::Unassigned(role.name()))?;
                    Some(Poly::var(target, j))
                }
                None => None,
            };
            images.push(image);
        }

        let mul = |a: &Poly, b: &Poly| match trunc {
            Some((vars, cap)) => a.mul_truncated(b, vars, cap),
            None => a.mul(b),
        };
        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(slot) = powers.entry((i, e)) {
                    let base = images[i]
                        .as_ref()
                        .expect("image computed for used variable");
                    let mut acc = Poly::one(target);
                    for _ in 0..e {
                        acc = mul(&acc, base)?;
                    }
                    slot.insert(acc);
                }
                term = mul(&term, &powers[&(i, e)])?;
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Re-expresses `self` over another registry by matching variable roles.
    pub fn to_registry(&self, target: &Registry) -> Result<Poly, PolyError> {
        self.substitute(&BTreeMap::new(), target)
    }

    pub fn to_text(&self) -> String {
        self.render(&TextStyle)
    }

    pub fn to_latex(&self) -> String {
        self.render(&LatexStyle)
    }

    fn render(&self, style: &dyn Style) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // `x` is written last inside a term, after the coefficient-like variables.
        let mut order: Vec<usize> = (0..self.registry.len())
            .filter(|&i| self.registry.role(i) != VarRole::FormalX)
            .collect();
        order.extend(self.registry.x_index());

        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let factors: Vec<String> = order
                .iter()
                .filter(|&&i| m.0[i] > 0)
                .map(|&i| style.factor(self.registry.role(i), m.0[i]))
                .collect();
            let abs = c.abs();
            if factors.is_empty() {
                out.push_str(&style.coefficient(&abs));
            } else {
                if !rational::is_one_abs(c) {
                    out.push_str(&style.coefficient(&abs));
                    out.push_str(style.coefficient_separator());
                }
                out.push_str(&factors.join(style.factor_separator()));
            }
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            variables: self.registry.names(),
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    coeff: rational::render(c),
                    exponents: m.0.clone(),
                })
                .collect(),
            text: self.to_text(),
        }
    }

    /// Rebuilds a polynomial from its JSON form. The `text` field is ignored.
    pub fn from_json(json: &PolyJson) -> Result<Poly, PolyError> {
        let roles = json
            .variables
            .iter()
            .map(|name| {
                parse_role(name).ok_or_else(|| PolyError::Malformed(format!("variable {name}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let registry = VarRegistry::new(roles).map_err(|e| PolyError::Malformed(e.to_string()))?;
        let terms = json
            .terms
            .iter()
            .map(|t| {
                rational::parse(&t.coeff)
                    .map(|c| (t.exponents.clone(), c))
                    .ok_or_else(|| PolyError::Malformed(format!("coefficient {}", t.coeff)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Poly::from_terms(&registry, terms)
    }
}

fn parse_role(name: &str) -> Option<VarRole> {
    if name == "x" {
        return Some(VarRole::FormalX);
    }
    let (head, idx) = name.split_at(1);
    let idx: u32 = idx.parse().ok()?;
    match head {
        "t" => Some(VarRole::Flat(idx)),
        "y" => Some(VarRole::Versal(idx)),
        "b" => Some(VarRole::FormalB(idx)),
        _ => None,
    }
}

trait Style {
    fn factor(&self, role: VarRole, exp: u32) -> String;
    fn coefficient(&self, c: &Rational) -> String;
    fn coefficient_separator(&self) -> &'static str;
    fn factor_separator(&self) -> &'static str;
}

struct TextStyle;

impl Style for TextStyle {
    fn factor(&self, role: VarRole, exp: u32) -> String {
        match exp {
            1 => role.name(),
            e => format!("{}^{e}", role.name()),
        }
    }
    fn coefficient(&self, c: &Rational) -> String {
        rational::render(c)
    }
    fn coefficient_separator(&self) -> &'static str {
        "*"
    }
    fn factor_separator(&self) -> &'static str {
        "*"
    }
}

struct LatexStyle;

impl Style for LatexStyle {
    fn factor(&self, role: VarRole, exp: u32) -> String {
        match exp {
            1 => role.latex(),
            e => format!("{}^{{{e}}}", role.latex()),
        }
    }
    fn coefficient(&self, c: &Rational) -> String {
        if c.is_integer() {
            c.numer().to_string()
        } else {
            format!("\\tfrac{{{}}}{{{}}}", c.numer(), c.denom())
        }
    }
    fn coefficient_separator(&self) -> &'static str {
        ""
    }
    fn factor_separator(&self) -> &'static str {
        ""
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({} over {})", self.to_text(), self.registry)
    }
}

/// Serialized polynomial. Coefficients are exact strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub variables: Vec<String>,
    pub terms: Vec<TermJson>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn flat4() -> Registry {
        VarRegistry::flat(4)
    }

    fn x(reg: &Registry) -> Poly {
        Poly::role(reg, VarRole::FormalX)
    }

    fn t(reg: &Registry, d: u32) -> Poly {
        Poly::role(reg, VarRole::Flat(d))
    }

    fn y(reg: &Registry, d: u32) -> Poly {
        Poly::role(reg, VarRole::Versal(d))
    }

    fn c(reg: &Registry, q: Rational) -> Poly {
        Poly::constant(reg, q)
    }

    #[test]
    fn add_cancels_and_merges() {
        let reg = flat4();
        let one = Poly::one(&reg);
        let p = x(&reg).add(&one).unwrap();
        assert_eq!(p.add(&x(&reg).neg()).unwrap(), one);
        assert_eq!(Poly::zero(&reg).add(&p).unwrap(), p);

        let half_t1 = t(&reg, 1).scale(&frac(1, 2));
        let lhs = t(&reg, 0).add(&half_t1).unwrap().add(&half_t1).unwrap();
        assert_eq!(lhs, t(&reg, 0).add(&t(&reg, 1)).unwrap());
    }

    #[test]
    fn mul_examples() {
        let reg = flat4();
        let one = Poly::one(&reg);
        let xp1 = x(&reg).add(&one).unwrap();
        let xm1 = x(&reg).sub(&one).unwrap();
        let expected = x(&reg).pow(2).sub(&one).unwrap();
        assert_eq!(xp1.mul(&xm1).unwrap(), expected);
        assert_eq!(xp1.mul(&one).unwrap(), xp1);

        // (t2 x^2)^2 = t2^2 x^4, checked term by term.
        let t2x2 = t(&reg, 2).mul(&x(&reg).pow(2)).unwrap();
        let sq = t2x2.mul(&t2x2).unwrap();
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.coeff(&[4, 0, 0, 2]), int(1));
    }

    #[test]
    fn pow_examples() {
        let reg = flat4();
        let xp1 = x(&reg).add(&Poly::one(&reg)).unwrap();
        assert_eq!(xp1.pow(2).to_text(), "x^2 + 2*x + 1");
        assert_eq!(xp1.pow(0), Poly::one(&reg));

        let vreg = VarRegistry::versal(4);
        let q = y(&vreg, 2)
            .mul(&x(&vreg).pow(2))
            .unwrap()
            .add(&y(&vreg, 1).mul(&x(&vreg)).unwrap())
            .unwrap()
            .add(&y(&vreg, 0))
            .unwrap();
        let sq = q.pow(2);
        // coefficient of x^4 is y2^2
        let x4 = sq.filter_terms(|m| m.exponents()[0] == 4);
        assert_eq!(x4.to_text(), "y2^2*x^4");
    }

    #[test]
    fn truncate_examples() {
        let reg = flat4();
        let tv = reg.deformation_indices();
        let p = x(&reg)
            .pow(4)
            .add(&t(&reg, 2).pow(2).scale(&frac(1, 8)))
            .unwrap()
            .add(&t(&reg, 0))
            .unwrap();
        assert_eq!(p.truncate_degree(&tv, 1).to_text(), "x^4 + t0");
        assert_eq!(p.truncate_degree(&tv, 100), p);
        let q = t(&reg, 0)
            .mul(&t(&reg, 1))
            .unwrap()
            .add(&t(&reg, 0))
            .unwrap();
        assert_eq!(q.truncate_degree(&tv, 1), t(&reg, 0));
    }

    #[test]
    fn registry_mismatch_is_an_error() {
        let a = x(&VarRegistry::flat(4));
        let b = x(&VarRegistry::versal(4));
        assert!(matches!(a.add(&b), Err(PolyError::RegistryMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(PolyError::RegistryMismatch { .. })));
    }

    #[test]
    fn substitute_examples() {
        let vreg = VarRegistry::versal(4);
        let treg = flat4();
        let y0 = vreg.index_of(VarRole::Versal(0)).unwrap();

        let p = x(&vreg).pow(2).add(&y(&vreg, 0)).unwrap();
        let mut a = BTreeMap::new();
        a.insert(y0, t(&treg, 0));
        // y1, y2 do not occur, so only y0 needs an image.
        assert_eq!(p.substitute(&a, &treg).unwrap().to_text(), "x^2 + t0");

        let w = x(&vreg)
            .pow(4)
            .add(&y(&vreg, 2).mul(&x(&vreg).pow(2)).unwrap())
            .unwrap()
            .add(&y(&vreg, 1).mul(&x(&vreg)).unwrap())
            .unwrap()
            .add(&y(&vreg, 0))
            .unwrap();
        let mut a = BTreeMap::new();
        a.insert(
            y0,
            t(&treg, 0)
                .add(&t(&treg, 2).pow(2).scale(&frac(1, 8)))
                .unwrap(),
        );
        a.insert(y0 + 1, t(&treg, 1));
        a.insert(y0 + 2, t(&treg, 2));
        assert_eq!(
            w.substitute(&a, &treg).unwrap().to_text(),
            "x^4 + t2*x^2 + t1*x + t0 + 1/8*t2^2"
        );
    }

    #[test]
    fn substitute_reports_unassigned() {
        let vreg = VarRegistry::versal(3);
        let breg = VarRegistry::formal_b(2);
        let p = y(&vreg, 1);
        let err = p.substitute(&BTreeMap::new(), &breg).unwrap_err();
        assert_eq!(err, PolyError::Unassigned("y1".into()));
    }

    #[test]
    fn restriction_to_a_hyperplane() {
        let breg = VarRegistry::formal_b(2);
        let small = VarRegistry::formal_b(1);
        let p = Poly::var(&breg, 0)
            .mul(&Poly::var(&breg, 1))
            .unwrap()
            .add(&Poly::var(&breg, 0))
            .unwrap();
        let mut a = BTreeMap::new();
        a.insert(1, Poly::zero(&small));
        assert_eq!(p.substitute(&a, &small).unwrap().to_text(), "b1");
    }

    #[test]
    fn latex_rendering() {
        let reg = flat4();
        let p = x(&reg)
            .pow(4)
            .add(&t(&reg, 2).mul(&x(&reg).pow(2)).unwrap())
            .unwrap()
            .add(&t(&reg, 1).mul(&x(&reg)).unwrap())
            .unwrap()
            .add(&t(&reg, 0))
            .unwrap()
            .add(&t(&reg, 2).pow(2).scale(&frac(1, 8)))
            .unwrap();
        assert_eq!(
            p.to_latex(),
            "x^{4} + t_{2}x^{2} + t_{1}x + t_{0} + \\tfrac{1}{8}t_{2}^{2}"
        );
        assert_eq!(c(&reg, frac(-3, 2)).to_text(), "-3/2");
        assert_eq!(Poly::zero(&reg).to_text(), "0");
        assert_eq!(
            t(&reg, 0)
                .sub(&t(&reg, 1).scale(&int(2)))
                .unwrap()
                .to_text(),
            "t0 - 2*t1"
        );
    }

    #[test]
    fn json_roundtrip() {
        let reg = flat4();
        let p = x(&reg)
            .pow(3)
            .sub(&t(&reg, 2).pow(2).scale(&frac(1, 8)))
            .unwrap();
        let back = Poly::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_text(), "x^3 - 1/8*t2^2");
    }

    fn small_poly(reg: Registry) -> impl Strategy<Value = Poly> {
        let n = reg.len();
        prop::collection::vec((prop::collection::vec(0u32..3, n), -4i64..5, 1i64..4), 0..5)
            .prop_map(move |terms| {
                Poly::from_terms(&reg, terms.into_iter().map(|(e, a, b)| (e, frac(a, b)))).unwrap()
            })
    }

    proptest! {
        #[test]
        fn ring_laws(
            p in small_poly(VarRegistry::flat(3)),
            q in small_poly(VarRegistry::flat(3)),
            s in small_poly(VarRegistry::flat(3)),
        ) {
            prop_assert_eq!(p.add(&q).unwrap().add(&s).unwrap(), p.add(&q.add(&s).unwrap()).unwrap());
            prop_assert_eq!(
                p.mul(&q.add(&s).unwrap()).unwrap(),
                p.mul(&q).unwrap().add(&p.mul(&s).unwrap()).unwrap()
            );
            prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
            prop_assert!(p.sub(&p).unwrap().is_zero());
        }

        #[test]
        fn substitution_composes(
            p in small_poly(VarRegistry::flat(3)),
            a0 in small_poly(VarRegistry::flat(3)),
            a1 in small_poly(VarRegistry::flat(3)),
            b1 in small_poly(VarRegistry::flat(3)),
        ) {
            // A: t0 -> a0, t1 -> a1 ; B: t1 -> b1 (x, t0 fixed).
            let reg = VarRegistry::flat(3);
            let a: BTreeMap<usize, Poly> = [(1, a0), (2, a1)].into_iter().collect();
            let b: BTreeMap<usize, Poly> = [(2, b1)].into_iter().collect();
            let lhs = p.substitute(&a, &reg).unwrap().substitute(&b, &reg).unwrap();
            let ba: BTreeMap<usize, Poly> = a
                .iter()
                .map(|(&i, img)| (i, img.substitute(&b, &reg).unwrap()))
                .collect();
            prop_assert_eq!(lhs, p.substitute(&ba, &reg).unwrap());
        }

        #[test]
        fn json_text_roundtrip(p in small_poly(VarRegistry::versal(3))) {
            let json = serde_json::to_string(&p.to_json()).unwrap();
            let parsed: PolyJson = serde_json::from_str(&json).unwrap();
            let back = Poly::from_json(&parsed).unwrap();
            prop_assert_eq!(back.to_text(), p.to_text());
        }
    }
}

//! Exact multivariate polynomial and rational-function arithmetic over the
//! rationals, with differentiation, substitution and complex evaluation.
//!
//! All coefficients are arbitrary-precision rationals. Monomials are ordered
//! graded-lexicographically over the chart's declared variable order, which
//! fixes canonical forms and makes equality checks deterministic. Rational
//! functions are kept in a scalar-normalized (monic-denominator) form and
//! compared by cross-multiplication; no multivariate gcd is ever taken.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Default guard on denominator magnitude for complex evaluation.
pub const DEFAULT_POLE_GUARD: f64 = 1e-8;

/// Ordered registry of chart variable names, shared by every expression on a
/// chart. Two registries are compatible iff they hold the same names in the
/// same order.
#[derive(Clone, PartialEq, Eq)]
pub struct VarSet(Arc<Vec<String>>);

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        VarSet(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet({:?})", self.0)
    }
}

/// Exponent vector with graded-lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariant: no stored term has a zero coefficient, and every exponent
/// vector has length equal to the registry size.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Monomial, BigRational>,
}

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero(vars: &VarSet) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; vars.len()]), c);
        }
        p
    }

    pub fn from_int(vars: &VarSet, c: i64) -> Self {
        Self::constant(vars, rat_int(c))
    }

    /// The polynomial consisting of the single variable `idx`.
    pub fn var(vars: &VarSet, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial(e), BigRational::one());
        p
    }

    pub fn monomial(vars: &VarSet, exps: Vec<u32>, coeff: BigRational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
        let mut p = Self::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(Monomial(exps), coeff);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Leading (monomial, coefficient) under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other).expect("polynomial registry mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other).expect("polynomial registry mismatch");
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_int(&self.vars, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial_derivative(&self, v: usize) -> Result<Self> {
        if v >= self.vars.len() {
            return Err(Error::UnknownVariable(format!("#{v}")));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[v] = e - 1;
            terms.insert(Monomial(exps), c * rat_int(e as i64));
        }
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Composes the polynomial with rational-function targets. Unbound
    /// variables stay themselves. All targets must share one registry, which
    /// becomes the registry of the result.
    pub fn substitute(&self, bindings: &BTreeMap<usize, RationalFunction>) -> Result<RationalFunction> {
        let target_vars = bindings
            .values()
            .next()
            .map(|rf| rf.vars().clone())
            .unwrap_or_else(|| self.vars.clone());
        for rf in bindings.values() {
            if rf.vars() != &target_vars {
                return Err(Error::RegistryMismatch);
            }
        }
        if bindings.is_empty() && target_vars != self.vars {
            return Err(Error::RegistryMismatch);
        }
        let mut acc = RationalFunction::zero(&target_vars);
        for (m, c) in &self.terms {
            let mut term = RationalFunction::from_poly(Polynomial::constant(&target_vars, c.clone()));
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = match bindings.get(&v) {
                    Some(rf) => rf.clone(),
                    None => {
                        let idx = target_vars.index_of(self.vars.name(v))?;
                        RationalFunction::from_poly(Polynomial::var(&target_vars, idx))
                    }
                };
                term = term.mul(&base.pow(e));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial over another registry that contains all of
    /// its variables (matched by name).
    pub fn reindex(&self, new_vars: &VarSet) -> Result<Self> {
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| new_vars.index_of(n))
            .collect::<Result<_>>()?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; new_vars.len()];
            for (v, &e) in m.0.iter().enumerate() {
                exps[map[v]] += e;
            }
            terms.insert(Monomial(exps), c.clone());
        }
        Ok(Polynomial {
            vars: new_vars.clone(),
            terms,
        })
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.vars.len() {
            return Err(Error::Config(format!(
                "point has {} coordinates, registry has {}",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= point[v];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Canonical text form: monomials sorted descending, explicit exponents.
    pub fn canonical_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut s = format!("({})", c);
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    s.push_str(&format!("*{}^{}", self.vars.name(v), e));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

/// Quotient of two polynomials, denominator nonzero.
///
/// Canonical form scales numerator and denominator so the denominator's
/// leading coefficient is 1. Equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        num.check_vars(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        let inv = lc.recip();
        Ok(RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::from_int(p.vars(), 1);
        RationalFunction { num: p, den }
    }

    pub fn zero(vars: &VarSet) -> Self {
        Self::from_poly(Polynomial::zero(vars))
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::from_poly(Polynomial::from_int(vars, 1))
    }

    pub fn vars(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        // Structurally equal denominators are common (shared canonical
        // products); adding over them avoids quadratic denominator growth.
        if self.den == other.den {
            return RationalFunction {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
        }
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators multiply to nonzero")
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators multiply to nonzero")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.vars()).div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.vars());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> Self {
        RationalFunction {
            num: self.num.scale(&rat_int(k)),
            den: self.den.clone(),
        }
    }

    /// Exact quotient-rule derivative.
    pub fn partial_derivative(&self, v: usize) -> Result<Self> {
        let dn = self.num.partial_derivative(v)?;
        let dd = self.den.partial_derivative(v)?;
        RationalFunction::new(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    pub fn substitute(&self, bindings: &BTreeMap<usize, RationalFunction>) -> Result<Self> {
        let num = self.num.substitute(bindings)?;
        let den = self.den.substitute(bindings)?;
        if den.is_zero() {
            return Err(Error::SubstitutionPole);
        }
        num.div(&den)
    }

    pub fn eval_complex(&self, point: &[Complex64], pole_guard: f64) -> Result<Complex64> {
        let d = self.den.eval_complex(point)?;
        if d.norm() < pole_guard {
            return Err(Error::NearPole {
                mag: d.norm(),
                guard: pole_guard,
            });
        }
        Ok(self.num.eval_complex(point)? / d)
    }

    pub fn canonical_text(&self) -> String {
        format!("({}) / ({})", self.num.canonical_text(), self.den.canonical_text())
    }
}

impl PartialEq for RationalFunction {
    /// Cross-multiplied equality: a/b == c/d iff a*d - c*b == 0.
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFunction {}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars3() -> VarSet {
        VarSet::new(vec!["z2", "z3", "zh2"])
    }

    fn z(vs: &VarSet, name: &str) -> Polynomial {
        Polynomial::var(vs, vs.index_of(name).unwrap())
    }

    #[test]
    fn additive_inverse() {
        let vs = vars3();
        let p = z(&vs, "z2").add(&Polynomial::from_int(&vs, 1));
        let q = z(&vs, "z2").neg();
        assert_eq!(p.add(&q), Polynomial::from_int(&vs, 1));
    }

    #[test]
    fn monomial_product_and_difference_of_squares() {
        let vs = vars3();
        let prod = z(&vs, "z2").mul(&z(&vs, "zh2"));
        assert_eq!(prod.num_terms(), 1);
        assert_eq!(prod.total_degree(), 2);

        let s = z(&vs, "z2").add(&z(&vs, "z3"));
        let d = z(&vs, "z2").sub(&z(&vs, "z3"));
        let expect = z(&vs, "z2").pow(2).sub(&z(&vs, "z3").pow(2));
        assert_eq!(s.mul(&d), expect);
    }

    #[test]
    fn rf_inverse_and_cancellation() {
        let vs = vars3();
        let a1 = RationalFunction::from_poly(z(&vs, "zh2"));
        let a3 = RationalFunction::from_poly(z(&vs, "z3"));
        let r = a1.div(&a3).unwrap();
        let ri = a3.div(&a1).unwrap();
        assert_eq!(r.mul(&ri), RationalFunction::one(&vs));

        // 1/z2 + 1/z2 = 2/z2
        let inv = RationalFunction::from_poly(z(&vs, "z2")).inverse().unwrap();
        let two_over = inv.add(&inv);
        let expect = RationalFunction::new(Polynomial::from_int(&vs, 2), z(&vs, "z2")).unwrap();
        assert_eq!(two_over, expect);

        // z2 / z2^2 = 1/z2
        let q = RationalFunction::from_poly(z(&vs, "z2"))
            .div(&RationalFunction::from_poly(z(&vs, "z2").pow(2)))
            .unwrap();
        assert_eq!(q, inv);
    }

    #[test]
    fn derivative_examples() {
        let vs = vars3();
        let prod = RationalFunction::from_poly(z(&vs, "z2").mul(&z(&vs, "zh2")));
        let d = prod.partial_derivative(vs.index_of("z2").unwrap()).unwrap();
        assert_eq!(d, RationalFunction::from_poly(z(&vs, "zh2")));

        let inv = RationalFunction::from_poly(z(&vs, "z2")).inverse().unwrap();
        let dinv = inv.partial_derivative(vs.index_of("z2").unwrap()).unwrap();
        let expect = RationalFunction::new(
            Polynomial::from_int(&vs, -1),
            z(&vs, "z2").pow(2),
        )
        .unwrap();
        assert_eq!(dinv, expect);

        let c = RationalFunction::from_poly(Polynomial::from_int(&vs, 7));
        assert!(c.partial_derivative(1).unwrap().is_zero());
    }

    #[test]
    fn substitute_chart_relation_n3() {
        // zh1 = z2*zh2 - z3 at n = 3: substituting into the single variable
        // zh1 of an extended registry reproduces the binding.
        let ext = VarSet::new(vec!["z2", "z3", "zh2", "zh1"]);
        let a1 = Polynomial::var(&ext, 3);
        let binding = Polynomial::var(&ext, 0)
            .mul(&Polynomial::var(&ext, 2))
            .sub(&Polynomial::var(&ext, 1));
        let mut b = BTreeMap::new();
        b.insert(3usize, RationalFunction::from_poly(binding.clone()));
        let out = a1.substitute(&b).unwrap();
        assert_eq!(out, RationalFunction::from_poly(binding));
    }

    #[test]
    fn substitute_identity_and_pole() {
        let vs = vars3();
        let f = RationalFunction::new(Polynomial::from_int(&vs, 1), z(&vs, "z2")).unwrap();
        let out = f.substitute(&BTreeMap::new()).unwrap();
        assert_eq!(out, f);

        let mut b = BTreeMap::new();
        b.insert(
            vs.index_of("z2").unwrap(),
            RationalFunction::zero(&vs),
        );
        assert!(matches!(f.substitute(&b), Err(Error::SubstitutionPole)));
    }

    #[test]
    fn eval_examples() {
        let vs = vars3();
        let prod = z(&vs, "z2").mul(&z(&vs, "zh2"));
        let p = [
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
        ];
        assert_eq!(prod.eval_complex(&p).unwrap(), Complex64::new(6.0, 0.0));

        let inv = RationalFunction::new(Polynomial::from_int(&vs, 1), z(&vs, "z2")).unwrap();
        let near = [
            Complex64::new(1e-30, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(matches!(
            inv.eval_complex(&near, DEFAULT_POLE_GUARD),
            Err(Error::NearPole { .. })
        ));
    }

    #[test]
    fn registry_mismatch_detected() {
        let a = Polynomial::zero(&vars3());
        let b = Polynomial::zero(&VarSet::new(vec!["w"]));
        assert!(a.check_vars(&b).is_err());
    }
}

//! Exterior algebra of differential forms with rational-function
//! coefficients: wedge, exterior derivative, contraction by torus vector
//! fields, and d log.
//!
//! A degree-p form is a sparse map from strictly increasing index tuples of
//! length p to coefficients. Antisymmetry is enforced by sorting tuples and
//! tracking the permutation sign. Contraction acts on the first slot of a
//! form ("on the left"), which fixes every sign below.

use std::collections::BTreeMap;

use num::{BigRational, Zero};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactfield::{Polynomial, RationalFunction, VarSet};

/// Graded sparse exterior form over a chart registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm {
    vars: VarSet,
    degree: usize,
    terms: BTreeMap<Vec<usize>, RationalFunction>,
}

impl DifferentialForm {
    pub fn zero(vars: &VarSet, degree: usize) -> Self {
        DifferentialForm {
            vars: vars.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form is a rational function.
    pub fn from_function(f: RationalFunction) -> Self {
        let vars = f.vars().clone();
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(Vec::new(), f);
        }
        DifferentialForm {
            vars,
            degree: 0,
            terms,
        }
    }

    /// The basis 1-form d(var i).
    pub fn basis_one_form(vars: &VarSet, i: usize) -> Self {
        assert!(i < vars.len());
        let mut terms = BTreeMap::new();
        terms.insert(vec![i], RationalFunction::one(vars));
        DifferentialForm {
            vars: vars.clone(),
            degree: 1,
            terms,
        }
    }

    /// Builds a monomial form `coeff * d(idx[0]) ∧ ... ∧ d(idx[p-1])` from an
    /// arbitrary (not necessarily sorted) index sequence.
    pub fn monomial_form(vars: &VarSet, indices: &[usize], coeff: RationalFunction) -> Self {
        let mut form = DifferentialForm::zero(vars, indices.len());
        if coeff.is_zero() {
            return form;
        }
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            let c = if sign < 0 { coeff.neg() } else { coeff };
            form.terms.insert(sorted, c);
        }
        form
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, RationalFunction> {
        &self.terms
    }

    /// Coefficient of a (sorted) index tuple; zero if absent.
    pub fn coefficient(&self, indices: &[usize]) -> RationalFunction {
        self.terms
            .get(indices)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.vars))
    }

    fn insert(&mut self, key: Vec<usize>, coeff: RationalFunction) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, coeff);
            }
            Some(prev) => {
                let sum = prev.add(&coeff);
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in form addition");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        DifferentialForm {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &RationalFunction) -> Self {
        if f.is_zero() {
            return Self::zero(&self.vars, self.degree);
        }
        DifferentialForm {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.mul(f)))
                .collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "registry mismatch in wedge");
        let mut out = DifferentialForm::zero(&self.vars, self.degree + other.degree);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some((key, sign)) = merge_sorted_with_sign(ka, kb) {
                    let c = ca.mul(cb);
                    out.insert(key, if sign < 0 { c.neg() } else { c });
                }
            }
        }
        out
    }

    /// Exterior derivative; satisfies d∘d = 0 and the Leibniz rule.
    pub fn exterior_derivative(&self) -> Result<Self> {
        let mut out = DifferentialForm::zero(&self.vars, self.degree + 1);
        for (k, c) in &self.terms {
            for v in 0..self.vars.len() {
                if k.contains(&v) {
                    continue;
                }
                let dc = c.partial_derivative(v)?;
                if dc.is_zero() {
                    continue;
                }
                // dv ∧ dk: insert v in sorted position, sign by slot count.
                let pos = k.iter().filter(|&&i| i < v).count();
                let mut key = k.clone();
                key.insert(pos, v);
                out.insert(key, if pos % 2 == 1 { dc.neg() } else { dc });
            }
        }
        Ok(out)
    }

    /// d log f = df / f as a 1-form. The denominator of every coefficient is
    /// the plain product num(f)*den(f), so coefficients of one d log (and of
    /// wedges of d logs) share structurally identical denominators.
    pub fn dlog(f: &RationalFunction) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroDlog);
        }
        let vars = f.vars().clone();
        let p = f.numerator();
        let q = f.denominator();
        let pq = p.mul(q);
        let mut out = DifferentialForm::zero(&vars, 1);
        for v in 0..vars.len() {
            let dp = p.partial_derivative(v)?;
            let dq = q.partial_derivative(v)?;
            let num = dp.mul(q).sub(&p.mul(&dq));
            if num.is_zero() {
                continue;
            }
            out.insert(vec![v], RationalFunction::new(num, pq.clone())?);
        }
        Ok(out)
    }

    /// Exact equality after canonicalization; coefficients are compared by
    /// cross-multiplication. Forms of different degree are unequal.
    pub fn form_equals(&self, other: &Self) -> bool {
        if self.degree != other.degree || self.vars != other.vars {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| self.coefficient(k) == other.coefficient(k))
    }

    /// Evaluates every coefficient at a complex point.
    pub fn eval_coefficients(
        &self,
        point: &[Complex64],
        pole_guard: f64,
    ) -> Result<BTreeMap<Vec<usize>, Complex64>> {
        self.terms
            .iter()
            .map(|(k, c)| Ok((k.clone(), c.eval_complex(point, pole_guard)?)))
            .collect()
    }

    /// Evaluates the form on `degree` complex tangent vectors (components in
    /// chart coordinates) at a point: sum over terms of coeff times the
    /// determinant of the selected components.
    pub fn eval_on_vectors(
        &self,
        point: &[Complex64],
        vectors: &[Vec<Complex64>],
        pole_guard: f64,
    ) -> Result<Complex64> {
        if vectors.len() != self.degree {
            return Err(Error::Config(format!(
                "form of degree {} evaluated on {} vectors",
                self.degree,
                vectors.len()
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            let cval = c.eval_complex(point, pole_guard)?;
            let n = k.len();
            let mut m = nalgebra::DMatrix::<Complex64>::zeros(n, n);
            for (row, &idx) in k.iter().enumerate() {
                for (col, v) in vectors.iter().enumerate() {
                    m[(row, col)] = v[idx];
                }
            }
            acc += cval * m.determinant();
        }
        Ok(acc)
    }

    /// Re-expresses the form over another registry containing the same
    /// variable names, re-sorting index tuples with sign tracking.
    pub fn reindex(&self, new_vars: &VarSet) -> Result<Self> {
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| new_vars.index_of(n))
            .collect::<Result<_>>()?;
        let mut out = DifferentialForm::zero(new_vars, self.degree);
        for (k, c) in &self.terms {
            let mapped: Vec<usize> = k.iter().map(|&i| map[i]).collect();
            if let Some((sorted, sign)) = sort_with_sign(&mapped) {
                let rf = RationalFunction::new(
                    c.numerator().reindex(new_vars)?,
                    c.denominator().reindex(new_vars)?,
                )?;
                out.insert(sorted, if sign < 0 { rf.neg() } else { rf });
            }
        }
        Ok(out)
    }

    /// Canonical text: sorted index tuples with coefficient text.
    pub fn canonical_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let basis: Vec<String> = k.iter().map(|&i| format!("d{}", self.vars.name(i))).collect();
            if basis.is_empty() {
                parts.push(format!("[{}]", c.canonical_text()));
            } else {
                parts.push(format!("[{}] {}", c.canonical_text(), basis.join("^")));
            }
        }
        parts.join("  +  ")
    }
}

/// Sorts an index sequence, returning `None` on a repeated index, otherwise
/// the sorted tuple and the permutation sign.
fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    // insertion sort with transposition counting
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// Merges two strictly increasing tuples; `None` if they overlap.
fn merge_sorted_with_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut joined = Vec::with_capacity(a.len() + b.len());
    joined.extend_from_slice(a);
    joined.extend_from_slice(b);
    sort_with_sign(&joined)
}

/// Contraction operator ι_V = Σ_y c_y · y · ι_{∂_y} for a torus-invariant
/// holomorphic vector field V = Σ_y c_y · y · ∂_y.
#[derive(Clone, Debug)]
pub struct VectorFieldContraction {
    vars: VarSet,
    terms: Vec<(BigRational, usize)>,
}

impl VectorFieldContraction {
    pub fn new(vars: &VarSet, terms: Vec<(BigRational, usize)>) -> Self {
        let mut seen = std::collections::BTreeSet::new();
        for (_, idx) in &terms {
            assert!(*idx < vars.len(), "contraction index out of range");
            assert!(seen.insert(*idx), "duplicate variable in contraction");
        }
        VectorFieldContraction {
            vars: vars.clone(),
            terms: terms.into_iter().filter(|(c, _)| !c.is_zero()).collect(),
        }
    }

    pub fn from_signs(vars: &VarSet, signed: &[(i64, usize)]) -> Self {
        Self::new(
            vars,
            signed
                .iter()
                .map(|&(s, i)| (BigRational::from_integer(s.into()), i))
                .collect(),
        )
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> &[(BigRational, usize)] {
        &self.terms
    }

    /// Coefficient of ψ_i-weight on each chart variable, as small integers.
    pub fn weight_row(&self) -> Vec<i64> {
        use num_traits::ToPrimitive;
        let mut row = vec![0i64; self.vars.len()];
        for (c, idx) in &self.terms {
            row[*idx] = c.to_i64().unwrap_or(0);
        }
        row
    }

    /// Left contraction: ι_V inserts V into the first slot, so contracting
    /// the p-th index of a term carries sign (-1)^p.
    pub fn contract(&self, form: &DifferentialForm) -> Result<DifferentialForm> {
        if form.degree() == 0 {
            return Err(Error::ZeroFormContraction);
        }
        assert_eq!(&self.vars, form.vars(), "registry mismatch in contraction");
        let mut out = DifferentialForm::zero(&self.vars, form.degree() - 1);
        for (key, coeff) in form.terms() {
            for (c, y) in &self.terms {
                if let Some(pos) = key.iter().position(|&i| i == *y) {
                    let mut reduced = key.clone();
                    reduced.remove(pos);
                    // coefficient * c * y, sign from the slot position
                    let signed = if pos % 2 == 1 { -c.clone() } else { c.clone() };
                    let y_poly = Polynomial::var(&self.vars, *y).scale(&signed);
                    out.insert(reduced, coeff.mul(&RationalFunction::from_poly(y_poly)));
                }
            }
        }
        Ok(out)
    }

    /// Re-expresses the contraction over another registry by variable name.
    pub fn reindex(&self, new_vars: &VarSet) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(c, i)| Ok((c.clone(), new_vars.index_of(self.vars.name(*i))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorFieldContraction {
            vars: new_vars.clone(),
            terms,
        })
    }
}

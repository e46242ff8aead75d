//! Chart data for the two-step flag variety and for smooth quadrics of both
//! parities: free/dependent coordinates, torus contraction tables, the
//! invariant functions A_j and B_j, meromorphic volume forms, fibration
//! functions, and the ambient projective embedding used by the numeric
//! engine.
//!
//! All invariant functions are expressed directly in the free coordinates;
//! the single dependent coordinate of each chart is eliminated at
//! construction time (the chart relation is linear in it, so substitution is
//! exact and complete).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{Polynomial, RationalFunction, VarSet};
use crate::forms::{DifferentialForm, VectorFieldContraction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Flag,
    QuadricEven,
    QuadricOdd,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Flag => "flag",
            Family::QuadricEven => "quadric-even",
            Family::QuadricOdd => "quadric-odd",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flag" => Ok(Family::Flag),
            "quadric-even" | "even" => Ok(Family::QuadricEven),
            "quadric-odd" | "odd" => Ok(Family::QuadricOdd),
            other => Err(Error::Config(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DivisorLabel {
    Sch,
    Rie,
    Intermediate,
}

/// A legal anticanonical-divisor index for a family, with its label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorChoice {
    pub j: usize,
    pub label: DivisorLabel,
}

/// One projective factor of the ambient embedding: each homogeneous
/// coordinate as a polynomial in the free chart coordinates, together with
/// the pairing of its torus weight against every chosen Lie-algebra
/// generator.
#[derive(Clone, Debug)]
pub struct AmbientFactor {
    pub coords: Vec<Polynomial>,
    /// `weights[a][i]` = pairing of coordinate a's weight with generator i.
    pub weights: Vec<Vec<f64>>,
}

/// Immutable chart of one variety: every symbolic and numeric computation
/// starts here.
#[derive(Clone, Debug)]
pub struct VarietyChart {
    pub family: Family,
    /// n for the flag family, m for the quadrics.
    pub size: usize,
    vars: VarSet,
    pub torus_rank: usize,
    pub contractions: Vec<VectorFieldContraction>,
    dependent_name: String,
    dependent_binding: Polynomial,
    a_inv: BTreeMap<usize, Polynomial>,
    b_inv: BTreeMap<usize, Polynomial>,
    pub ambient_factors: Vec<AmbientFactor>,
    y_coords: Vec<Polynomial>,
    omega_order: Vec<usize>,
}

/// Versioned JSON descriptor for reproducibility.
#[derive(Serialize)]
pub struct ChartDescriptor {
    pub schema_version: u32,
    pub family: Family,
    pub size: usize,
    pub variables: Vec<String>,
    pub dependent_variable: String,
    pub dependent_binding: String,
    pub torus_rank: usize,
}

impl VarietyChart {
    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// Complex dimension of the variety (= number of free coordinates).
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Complex dimension of the toric base Y (= number of fibration functions).
    pub fn base_dim(&self) -> usize {
        self.dim() - self.torus_rank
    }

    pub fn dependent(&self) -> (&str, &Polynomial) {
        (&self.dependent_name, &self.dependent_binding)
    }

    pub fn a(&self, j: usize) -> &Polynomial {
        &self.a_inv[&j]
    }

    pub fn b(&self, j: usize) -> &Polynomial {
        &self.b_inv[&j]
    }

    pub fn a_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.a_inv.keys().copied()
    }

    pub fn b_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.b_inv.keys().copied()
    }

    /// Numerator polynomials of the meromorphic fibration map to the toric
    /// base, read as one homogeneous tuple.
    pub fn y_coords(&self) -> &[Polynomial] {
        &self.y_coords
    }

    /// The index order in which the top form is written for this family.
    pub fn omega_order(&self) -> &[usize] {
        &self.omega_order
    }

    pub fn descriptor(&self) -> ChartDescriptor {
        ChartDescriptor {
            schema_version: 1,
            family: self.family,
            size: self.size,
            variables: self.vars.names().to_vec(),
            dependent_variable: self.dependent_name.clone(),
            dependent_binding: self.dependent_binding.canonical_text(),
            torus_rank: self.torus_rank,
        }
    }

    pub fn divisor_range(&self) -> std::ops::RangeInclusive<usize> {
        match self.family {
            Family::Flag => 3..=self.size,
            Family::QuadricEven => 1..=self.size - 1,
            Family::QuadricOdd => 2..=self.size,
        }
    }

    pub fn divisor(&self, j: usize) -> Result<DivisorChoice> {
        if !self.divisor_range().contains(&j) {
            return Err(Error::Config(format!(
                "divisor index {j} outside legal range {:?} for {}",
                self.divisor_range(),
                self.family.as_str()
            )));
        }
        let (sch, rie) = match self.family {
            Family::Flag => (self.size, 3),
            Family::QuadricEven => (self.size - 1, 1),
            Family::QuadricOdd => (self.size, 2),
        };
        let label = if j == sch {
            DivisorLabel::Sch
        } else if j == rie {
            DivisorLabel::Rie
        } else {
            DivisorLabel::Intermediate
        };
        Ok(DivisorChoice { j, label })
    }

    pub fn schubert_divisor(&self) -> DivisorChoice {
        let j = match self.family {
            Family::Flag | Family::QuadricOdd => self.size,
            Family::QuadricEven => self.size - 1,
        };
        self.divisor(j).expect("Schubert index is always legal")
    }

    pub fn rietsch_divisor(&self) -> DivisorChoice {
        let j = match self.family {
            Family::Flag => 3,
            Family::QuadricEven => 1,
            Family::QuadricOdd => 2,
        };
        self.divisor(j).expect("Rietsch index is always legal")
    }

    /// The factors of the volume-form denominator for divisor choice `d`,
    /// in the written order.
    pub fn volume_denominator_factors(&self, d: DivisorChoice) -> Vec<Polynomial> {
        let j = d.j;
        let mut out = Vec::new();
        match self.family {
            Family::Flag => {
                out.push(self.a(1).clone());
                for i in 3..j {
                    out.push(self.a(i).clone());
                }
                for i in j..=self.size {
                    out.push(self.b(i).clone());
                }
            }
            Family::QuadricEven => {
                let m = self.size;
                // x_0 x_1 in-chart is the dependent coordinate z_1
                out.push(self.dependent_binding.clone());
                for i in 1..j {
                    out.push(self.a(i).clone());
                }
                for i in j..=m.saturating_sub(2) {
                    out.push(self.b(i).clone());
                }
                out.push(self.a(m).clone());
            }
            Family::QuadricOdd => {
                let m = self.size;
                out.push(Polynomial::var(&self.vars, 0)); // z_0
                for i in 2..j {
                    out.push(self.a(i).clone());
                }
                for i in j..=m - 1 {
                    out.push(self.b(i).clone());
                }
                out.push(self.a(m).clone()); // z_{2m-1} in-chart
            }
        }
        out
    }

    /// The top form Ω in the family's written factor order, with coefficient 1.
    pub fn top_form(&self) -> DifferentialForm {
        DifferentialForm::monomial_form(
            &self.vars,
            &self.omega_order,
            RationalFunction::one(&self.vars),
        )
    }

    /// The meromorphic volume form Ω^(j) on the chart, denominator pieces
    /// substituted into free coordinates.
    pub fn volume_form(&self, d: DivisorChoice) -> DifferentialForm {
        let mut den = Polynomial::from_int(&self.vars, 1);
        for f in self.volume_denominator_factors(d) {
            den = den.mul(&f);
        }
        let coeff = RationalFunction::new(Polynomial::from_int(&self.vars, 1), den)
            .expect("volume denominator is nonzero");
        DifferentialForm::monomial_form(&self.vars, &self.omega_order, coeff)
    }

    /// Numerator/denominator polynomial pairs of the torus-invariant
    /// fibration functions for divisor choice `d`, in the written order.
    pub fn fibration_pairs(&self, d: DivisorChoice) -> Vec<(Polynomial, Polynomial)> {
        let j = d.j;
        let mut out = Vec::new();
        match self.family {
            Family::Flag => {
                let bj = self.b(j).clone();
                out.push((self.a(1).clone(), bj.clone()));
                for i in 3..j {
                    out.push((self.a(i).clone(), bj.clone()));
                }
                for i in j + 1..=self.size {
                    out.push((self.b(i).clone(), bj.clone()));
                }
            }
            Family::QuadricEven => {
                let m = self.size;
                let z1 = self.dependent_binding.clone();
                for i in 1..j {
                    out.push((self.a(i).clone(), z1.clone()));
                }
                for i in j..=m.saturating_sub(2) {
                    out.push((self.b(i).clone(), z1.clone()));
                }
                out.push((self.a(m).clone(), z1));
            }
            Family::QuadricOdd => {
                let m = self.size;
                let bm = self.b(m).clone();
                out.push((Polynomial::var(&self.vars, 0).pow(2), bm.clone()));
                for i in 2..j {
                    out.push((self.a(i).clone(), bm.clone()));
                }
                for i in j..=m - 1 {
                    out.push((self.b(i).clone(), bm.clone()));
                }
            }
        }
        out
    }

    pub fn fibration_functions(&self, d: DivisorChoice) -> Vec<RationalFunction> {
        self.fibration_pairs(d)
            .into_iter()
            .map(|(n, de)| RationalFunction::new(n, de).expect("fibration denominators are nonzero"))
            .collect()
    }

    /// Order (as indices into `contractions`) in which the torus contraction
    /// operators are applied when forming the iterated contraction in the
    /// identity checks. Fixed per family; the overall sign depends on it.
    pub fn contraction_application_order(&self) -> Vec<usize> {
        let k = self.torus_rank;
        match self.family {
            // V_{n-1} first, V_1 last
            Family::Flag => (0..k).rev().collect(),
            // V_{m-1} .. V_1, then V_m, then V_{m+1}
            Family::QuadricEven => {
                let m = self.size;
                let mut order: Vec<usize> = (0..m - 1).rev().collect();
                order.push(m - 1);
                order.push(m);
                order
            }
            // V_1 first, V_m last (the order of the worked m=2 example)
            Family::QuadricOdd => (0..k).collect(),
        }
    }

    /// The global sign stated in the contraction identity for divisor `d`,
    /// when the statement fixes one. The odd quadric leaves it as ±.
    pub fn printed_identity_sign(&self, d: DivisorChoice) -> Option<i64> {
        match self.family {
            Family::Flag => Some(if (self.size - d.j) % 2 == 0 { 1 } else { -1 }),
            Family::QuadricEven => Some(1),
            Family::QuadricOdd => None,
        }
    }

    /// Chart weight table: `row[i][v]` is the weight of free coordinate v
    /// under generator i (read off the contraction tables).
    pub fn chart_weights(&self) -> Vec<Vec<i64>> {
        self.contractions.iter().map(|c| c.weight_row()).collect()
    }

    /// Evaluates the ambient embedding at a chart point, one homogeneous
    /// tuple per factor. The affine coordinate of each factor is 1 and the
    /// dependent coordinate is filled in.
    pub fn ambient_embedding(&self, point: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        self.ambient_factors
            .iter()
            .map(|f| {
                f.coords
                    .iter()
                    .map(|p| p.eval_complex(point))
                    .collect::<Result<Vec<_>>>()
            })
            .collect()
    }

    /// Relative residual of the defining equation at homogeneous tuples.
    pub fn defining_residual(&self, tuples: &[Vec<Complex64>]) -> f64 {
        let mut terms: Vec<Complex64> = Vec::new();
        match self.family {
            Family::Flag => {
                let x = &tuples[0];
                let xh = &tuples[1];
                let n = self.size;
                terms.push(x[1] * xh[1]); // x_2 xh_2
                terms.push(-(x[0] * xh[0]));
                for j in 3..=n {
                    let s = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
                    terms.push(-s * x[j - 1] * xh[j - 1]);
                }
            }
            Family::QuadricEven => {
                let x = &tuples[0];
                for j in 0..=self.size {
                    terms.push(x[2 * j] * x[2 * j + 1]);
                }
            }
            Family::QuadricOdd => {
                let x = &tuples[0];
                terms.push(x[0] * x[0]);
                for j in 1..=self.size {
                    terms.push(x[2 * j - 1] * x[2 * j]);
                }
            }
        }
        let sum: Complex64 = terms.iter().sum();
        let scale = terms
            .iter()
            .map(|t| t.norm())
            .fold(1.0f64, f64::max);
        sum.norm() / scale
    }

    /// Polynomials whose magnitude must stay above the pole guard for a
    /// chart point to be usable with divisor choice `d`: volume-form
    /// denominator factors, fibration numerators and denominators, and the
    /// fibration-map coordinates.
    pub fn guard_polys(&self, d: DivisorChoice) -> Vec<Polynomial> {
        let mut out = self.volume_denominator_factors(d);
        for (n, de) in self.fibration_pairs(d) {
            out.push(n);
            out.push(de);
        }
        out.extend(self.y_coords.iter().cloned());
        out
    }
}

fn var(vs: &VarSet, name: &str) -> Polynomial {
    Polynomial::var(vs, vs.index_of(name).expect("chart variable"))
}

/// Chart of the two-step flag variety on the open subset where the first
/// homogeneous coordinate of each factor's distinguished slot is nonzero.
///
/// Free coordinates (z_2..z_n, zh_2..zh_{n-1}); the dependent coordinate
/// zh_1 is linear in the chart relation and eliminated.
pub fn build_flag_chart(n: usize) -> Result<VarietyChart> {
    if n < 3 {
        return Err(Error::Config(format!("flag family needs n >= 3, got {n}")));
    }
    let mut names: Vec<String> = (2..=n).map(|j| format!("z{j}")).collect();
    names.extend((2..n).map(|j| format!("zh{j}")));
    let vars = VarSet::new(names);

    // zh_1 = z_2 zh_2 - (-1)^{n-1} z_n - sum_{j=3}^{n-1} (-1)^{j-1} z_j zh_j
    let mut binding = var(&vars, "z2").mul(&var(&vars, "zh2"));
    let sn = if (n - 1) % 2 == 0 { 1 } else { -1 };
    binding = binding.sub(&var(&vars, &format!("z{n}")).scale(&num::BigRational::from_integer(sn.into())));
    for j in 3..n {
        let sj: i64 = if (j - 1) % 2 == 0 { 1 } else { -1 };
        binding = binding.sub(
            &var(&vars, &format!("z{j}"))
                .mul(&var(&vars, &format!("zh{j}")))
                .scale(&num::BigRational::from_integer(sj.into())),
        );
    }

    // A_1 = zh_1 (z_1 = 1), A_j = z_j zh_j, A_n = z_n (zh_n = 1)
    let mut a_inv = BTreeMap::new();
    a_inv.insert(1, binding.clone());
    for j in 2..n {
        a_inv.insert(j, var(&vars, &format!("z{j}")).mul(&var(&vars, &format!("zh{j}"))));
    }
    a_inv.insert(n, var(&vars, &format!("z{n}")));

    // B_j = sum_{k=j}^n (-1)^{k-j} A_k, j = 3..n
    let mut b_inv = BTreeMap::new();
    for j in 3..=n {
        let mut b = Polynomial::zero(&vars);
        for k in j..=n {
            let s: i64 = if (k - j) % 2 == 0 { 1 } else { -1 };
            b = b.add(&a_inv[&k].scale(&num::BigRational::from_integer(s.into())));
        }
        b_inv.insert(j, b);
    }

    // iota_{V_{i-1}} = z_i iota_{z_i} - zh_i iota_{zh_i} (i = 2..n-1);
    // iota_{V_{n-1}} = z_n iota_{z_n} + sum_{j=2}^{n-1} zh_j iota_{zh_j}
    let mut contractions = Vec::new();
    for i in 2..n {
        contractions.push(VectorFieldContraction::from_signs(
            &vars,
            &[
                (1, vars.index_of(&format!("z{i}"))?),
                (-1, vars.index_of(&format!("zh{i}"))?),
            ],
        ));
    }
    let mut last = vec![(1i64, vars.index_of(&format!("z{n}"))?)];
    for j in 2..n {
        last.push((1, vars.index_of(&format!("zh{j}"))?));
    }
    contractions.push(VectorFieldContraction::from_signs(&vars, &last));

    // Omega = dz_2 dzh_2 dz_3 dzh_3 ... dz_{n-1} dzh_{n-1} dz_n
    let mut omega_order = Vec::new();
    for j in 2..n {
        omega_order.push(vars.index_of(&format!("z{j}"))?);
        omega_order.push(vars.index_of(&format!("zh{j}"))?);
    }
    omega_order.push(vars.index_of(&format!("z{n}"))?);

    // Ambient product embedding. Generators v_i = e_{i+1} - (1/n) * 1 in the
    // trace-zero subalgebra, dual to the psi-basis.
    let nf = n as f64;
    let factor1 = AmbientFactor {
        coords: {
            let mut c = vec![Polynomial::from_int(&vars, 1)];
            c.extend((2..=n).map(|j| var(&vars, &format!("z{j}"))));
            c
        },
        weights: (1..=n)
            .map(|j| {
                (1..n)
                    .map(|i| if j == i + 1 { 1.0 - 1.0 / nf } else { -1.0 / nf })
                    .collect()
            })
            .collect(),
    };
    let factor2 = AmbientFactor {
        coords: {
            let mut c = vec![binding.clone()];
            c.extend((2..n).map(|j| var(&vars, &format!("zh{j}"))));
            c.push(Polynomial::from_int(&vars, 1));
            c
        },
        weights: (1..=n)
            .map(|j| {
                (1..n)
                    .map(|i| if j == i + 1 { 1.0 / nf - 1.0 } else { 1.0 / nf })
                    .collect()
            })
            .collect(),
    };

    // F = (x_1 xh_1, x_3 xh_3, ..., x_n xh_n) in chart coordinates
    let mut y_coords = vec![a_inv[&1].clone()];
    for j in 3..=n {
        y_coords.push(a_inv[&j].clone());
    }

    Ok(VarietyChart {
        family: Family::Flag,
        size: n,
        torus_rank: n - 1,
        contractions,
        dependent_name: "zh1".to_string(),
        dependent_binding: binding,
        a_inv,
        b_inv,
        ambient_factors: vec![factor1, factor2],
        y_coords,
        omega_order,
        vars,
    })
}

/// Chart of the 2m-dimensional quadric on the open subset x_0 != 0.
pub fn build_even_quadric_chart(m: usize) -> Result<VarietyChart> {
    if m < 2 {
        return Err(Error::Config(format!(
            "even quadric family needs m >= 2, got {m}"
        )));
    }
    let names: Vec<String> = (2..=2 * m + 1).map(|i| format!("z{i}")).collect();
    let vars = VarSet::new(names);

    // z_1 = -(z_2 z_3 + ... + z_{2m} z_{2m+1})
    let mut binding = Polynomial::zero(&vars);
    for j in 1..=m {
        binding = binding.sub(&var(&vars, &format!("z{}", 2 * j)).mul(&var(&vars, &format!("z{}", 2 * j + 1))));
    }

    let mut a_inv = BTreeMap::new();
    for j in 1..=m {
        a_inv.insert(
            j,
            var(&vars, &format!("z{}", 2 * j)).mul(&var(&vars, &format!("z{}", 2 * j + 1))),
        );
    }

    // B_j = x_0 x_1 + A_1 + ... + A_j in-chart, j = 1..m-2
    let mut b_inv = BTreeMap::new();
    for j in 1..=m.saturating_sub(2) {
        let mut b = binding.clone();
        for i in 1..=j {
            b = b.add(&a_inv[&i]);
        }
        b_inv.insert(j, b);
    }

    let mut contractions = Vec::new();
    for j in 1..m {
        contractions.push(VectorFieldContraction::from_signs(
            &vars,
            &[
                (1, vars.index_of(&format!("z{}", 2 * j))?),
                (-1, vars.index_of(&format!("z{}", 2 * j + 1))?),
            ],
        ));
    }
    let mut vm = vec![(1i64, vars.index_of(&format!("z{}", 2 * m))?)];
    for i in 1..m {
        vm.push((1, vars.index_of(&format!("z{}", 2 * i + 1))?));
    }
    contractions.push(VectorFieldContraction::from_signs(&vars, &vm));
    let mut vm1 = vec![(1i64, vars.index_of(&format!("z{}", 2 * m + 1))?)];
    for i in 1..m {
        vm1.push((1, vars.index_of(&format!("z{}", 2 * i + 1))?));
    }
    contractions.push(VectorFieldContraction::from_signs(&vars, &vm1));

    let omega_order: Vec<usize> = (0..vars.len()).collect();

    // Generators dual to (psi_1..psi_{m+1}) expressed in the theta-basis of
    // the rank m+1 torus; coordinate weights are +/- theta_j.
    let mut gens: Vec<Vec<f64>> = Vec::new();
    for i in 1..m {
        let mut g = vec![0.0; m + 1];
        g[i] = 1.0;
        gens.push(g);
    }
    {
        let mut g = vec![-0.5; m + 1];
        g[m] = 0.5;
        gens.push(g);
    }
    gens.push(vec![-0.5; m + 1]);

    let coord_theta: Vec<(usize, f64)> = {
        let mut w = vec![(0usize, 1.0), (0usize, -1.0)];
        for j in 1..=m {
            w.push((j, 1.0));
            w.push((j, -1.0));
        }
        w
    };
    let weights: Vec<Vec<f64>> = coord_theta
        .iter()
        .map(|&(j, s)| gens.iter().map(|g| s * g[j]).collect())
        .collect();

    let factor = AmbientFactor {
        coords: {
            let mut c = vec![Polynomial::from_int(&vars, 1), binding.clone()];
            c.extend((2..=2 * m + 1).map(|i| var(&vars, &format!("z{i}"))));
            c
        },
        weights,
    };

    let mut y_coords = vec![binding.clone()];
    for j in 1..=m {
        y_coords.push(a_inv[&j].clone());
    }

    Ok(VarietyChart {
        family: Family::QuadricEven,
        size: m,
        torus_rank: m + 1,
        contractions,
        dependent_name: "z1".to_string(),
        dependent_binding: binding,
        a_inv,
        b_inv,
        ambient_factors: vec![factor],
        y_coords,
        omega_order,
        vars,
    })
}

/// Chart of the (2m-1)-dimensional quadric on the open subset x_{2m} != 0.
pub fn build_odd_quadric_chart(m: usize) -> Result<VarietyChart> {
    if m < 2 {
        return Err(Error::Config(format!(
            "odd quadric family needs m >= 2, got {m}"
        )));
    }
    let names: Vec<String> = (0..=2 * m - 2).map(|i| format!("z{i}")).collect();
    let vars = VarSet::new(names);

    // z_{2m-1} = -(z_0^2 + z_1 z_2 + ... + z_{2m-3} z_{2m-2})
    let mut binding = var(&vars, "z0").pow(2).neg();
    for j in 1..m {
        binding = binding.sub(&var(&vars, &format!("z{}", 2 * j - 1)).mul(&var(&vars, &format!("z{}", 2 * j))));
    }

    let mut a_inv = BTreeMap::new();
    for j in 1..m {
        a_inv.insert(
            j,
            var(&vars, &format!("z{}", 2 * j - 1)).mul(&var(&vars, &format!("z{}", 2 * j))),
        );
    }
    // A_m = z_{2m-1} z_{2m} with z_{2m} = 1 in-chart
    a_inv.insert(m, binding.clone());

    // B_j = A_j + A_{j+1} + ... + A_m, j = 2..m
    let mut b_inv = BTreeMap::new();
    for j in 2..=m {
        let mut b = Polynomial::zero(&vars);
        for i in j..=m {
            b = b.add(&a_inv[&i]);
        }
        b_inv.insert(j, b);
    }

    let mut contractions = Vec::new();
    for j in 1..m {
        contractions.push(VectorFieldContraction::from_signs(
            &vars,
            &[
                (1, vars.index_of(&format!("z{}", 2 * j - 1))?),
                (-1, vars.index_of(&format!("z{}", 2 * j))?),
            ],
        ));
    }
    // iota_{V_m} = sum over all free coordinates z_i iota_{z_i}
    let all: Vec<(i64, usize)> = (0..vars.len()).map(|i| (1, i)).collect();
    contractions.push(VectorFieldContraction::from_signs(&vars, &all));

    let omega_order: Vec<usize> = (0..vars.len()).collect();

    // Generators e_1..e_m of the rank-m torus; x_0 has weight zero,
    // x_{2j-1} weight +theta_j, x_{2j} weight -theta_j.
    let mut weights: Vec<Vec<f64>> = vec![vec![0.0; m]];
    for j in 1..=m {
        let mut wp = vec![0.0; m];
        wp[j - 1] = 1.0;
        weights.push(wp);
        let mut wm = vec![0.0; m];
        wm[j - 1] = -1.0;
        weights.push(wm);
    }

    let factor = AmbientFactor {
        coords: {
            let mut c: Vec<Polynomial> =
                (0..=2 * m - 2).map(|i| var(&vars, &format!("z{i}"))).collect();
            c.push(binding.clone());
            c.push(Polynomial::from_int(&vars, 1));
            c
        },
        weights,
    };

    let mut y_coords = vec![var(&vars, "z0").pow(2)];
    for j in 1..=m {
        y_coords.push(a_inv[&j].clone());
    }

    Ok(VarietyChart {
        family: Family::QuadricOdd,
        size: m,
        torus_rank: m,
        contractions,
        dependent_name: format!("z{}", 2 * m - 1),
        dependent_binding: binding,
        a_inv,
        b_inv,
        ambient_factors: vec![factor],
        y_coords,
        omega_order,
        vars,
    })
}

pub fn build_chart(family: Family, size: usize) -> Result<VarietyChart> {
    match family {
        Family::Flag => build_flag_chart(size),
        Family::QuadricEven => build_even_quadric_chart(size),
        Family::QuadricOdd => build_odd_quadric_chart(size),
    }
}

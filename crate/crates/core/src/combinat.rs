//! Facet/term-count tables for the three mirror constructions, non-free
//! locus enumeration, wall point clouds in the fibration base, and the
//! explicit Pluecker-coordinate superpotentials for the smallest flag cases.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::Polynomial;
use crate::models::{DivisorChoice, Family, VarietyChart};
use crate::numsym::{rho, NumericPoint, SampleConfig, Tolerances};

/// One row of the facet/term-count tables, with the printed a + b + c
/// decomposition of every cell.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TermCountRow {
    pub schema_version: u32,
    pub family: Family,
    pub size: usize,
    pub givental: usize,
    pub schubert: usize,
    pub rietsch: usize,
    pub givental_parts: [usize; 3],
    pub schubert_parts: [usize; 3],
    pub rietsch_parts: [usize; 3],
}

fn row(family: Family, size: usize) -> Result<TermCountRow> {
    let (gp, sp, rp) = match family {
        Family::Flag => {
            if size < 3 {
                return Err(Error::Config(format!("flag table needs n >= 3, got {size}")));
            }
            let n = size;
            (
                [4, 2 * (n - 3), 2],
                [2, 2 * (n - 3), 2],
                [2, n - 3, 2],
            )
        }
        Family::QuadricEven | Family::QuadricOdd => {
            if size < 2 {
                return Err(Error::Config(format!(
                    "quadric table needs m >= 2, got {size}"
                )));
            }
            let m = size;
            let tail = if family == Family::QuadricEven { 2 } else { 1 };
            (
                [4, 2 * (m - 2), tail],
                [2, 2 * (m - 2), tail],
                [2, m - 2, tail],
            )
        }
    };
    let sum = |p: [usize; 3]| p[0] + p[1] + p[2];
    Ok(TermCountRow {
        schema_version: crate::SCHEMA_VERSION,
        family,
        size,
        givental: sum(gp),
        schubert: sum(sp),
        rietsch: sum(rp),
        givental_parts: gp,
        schubert_parts: sp,
        rietsch_parts: rp,
    })
}

/// Table rows for a range of sizes, computed from the closed forms.
pub fn term_count_table(
    family: Family,
    sizes: impl IntoIterator<Item = usize>,
) -> Result<Vec<TermCountRow>> {
    sizes.into_iter().map(|s| row(family, s)).collect()
}

/// One irreducible component of the non-free locus of the torus action,
/// described by the homogeneous coordinates that vanish on it.
#[derive(Clone, Debug, Serialize)]
pub struct NonfreeComponent {
    pub label: String,
    /// (ambient factor index, coordinate index) pairs set to zero.
    pub zero_coords: Vec<(usize, usize)>,
    /// The odd quadric's squared-coordinate locus {x_0 = 0}, which is a
    /// divisor rather than a codimension-2 pair locus.
    pub special: bool,
}

/// Enumerates the components of the non-free locus. The flag components are
/// the coordinate pairs {x_j = x_jhat = 0}; for the quadrics a component
/// collects both coordinates of a +/- weight pair, plus the distinguished
/// {x_0 = 0} locus on the odd quadric.
pub fn nonfree_components(chart: &VarietyChart) -> Vec<NonfreeComponent> {
    match chart.family {
        Family::Flag => (1..=chart.size)
            .map(|j| NonfreeComponent {
                label: format!("x{j}=xh{j}=0"),
                zero_coords: vec![(0, j - 1), (1, j - 1)],
                special: false,
            })
            .collect(),
        Family::QuadricEven => (0..=chart.size)
            .map(|j| NonfreeComponent {
                label: format!("x{}=x{}=0", 2 * j, 2 * j + 1),
                zero_coords: vec![(0, 2 * j), (0, 2 * j + 1)],
                special: false,
            })
            .collect(),
        Family::QuadricOdd => {
            let mut out: Vec<NonfreeComponent> = (1..=chart.size)
                .map(|j| NonfreeComponent {
                    label: format!("x{}=x{}=0", 2 * j - 1, 2 * j),
                    zero_coords: vec![(0, 2 * j - 1), (0, 2 * j)],
                    special: false,
                })
                .collect();
            out.push(NonfreeComponent {
                label: "x0=0".to_string(),
                zero_coords: vec![(0, 0)],
                special: true,
            });
            out
        }
    }
}

/// Chart polynomials of the component's vanishing coordinates.
pub fn component_polys(chart: &VarietyChart, comp: &NonfreeComponent) -> Vec<Polynomial> {
    comp.zero_coords
        .iter()
        .map(|&(f, a)| chart.ambient_factors[f].coords[a].clone())
        .collect()
}

/// A sampled point cloud on the rho-image of one wall (the image of a
/// non-free component), with the header naming the rho components.
#[derive(Clone, Debug, Serialize)]
pub struct WallCloud {
    pub schema_version: u32,
    pub component: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub warning: Option<String>,
}

impl WallCloud {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

fn rho_header(chart: &VarietyChart) -> Vec<String> {
    let mut h: Vec<String> = (1..=chart.torus_rank).map(|i| format!("mu{i}")).collect();
    h.extend((1..=chart.base_dim()).map(|i| format!("nu{i}")));
    h
}

/// Samples points on component ∩ X \ D and maps them through rho.
///
/// Components whose defining coordinates include the chart's affine
/// coordinate lie outside the chart; components on which a volume-form
/// denominator vanishes identically lie inside D. Both produce an empty
/// cloud with a warning instead of rows.
pub fn wall_point_cloud(
    chart: &VarietyChart,
    d: DivisorChoice,
    comp: &NonfreeComponent,
    samples: usize,
    seed: u64,
) -> Result<WallCloud> {
    use rand::{Rng, SeedableRng};

    let header = rho_header(chart);
    let empty = |warning: &str| WallCloud {
        schema_version: crate::SCHEMA_VERSION,
        component: comp.label.clone(),
        header: header.clone(),
        rows: Vec::new(),
        warning: Some(warning.to_string()),
    };

    // Which chart variables the component forces to zero.
    let polys = component_polys(chart, comp);
    let mut forced = Vec::new();
    for p in &polys {
        if p.total_degree() == 0 {
            // includes the affine coordinate (constant 1)
            return Ok(empty("component does not meet the chart"));
        }
        match single_variable(p) {
            Some(v) => forced.push(v),
            None => return Ok(empty("component is not a coordinate slice of the chart")),
        }
    }

    // Restrict the guards to the slice; a vanishing volume denominator
    // means the component sits inside the chosen divisor.
    let zero_map: BTreeMap<usize, crate::exactfield::RationalFunction> = forced
        .iter()
        .map(|&v| (v, crate::exactfield::RationalFunction::zero(chart.vars())))
        .collect();
    for f in chart.volume_denominator_factors(d) {
        if f.substitute(&zero_map)?.is_zero() {
            return Ok(empty("component is contained in the divisor"));
        }
    }
    let guards: Vec<Polynomial> = chart
        .guard_polys(d)
        .into_iter()
        .filter(|g| !g.substitute(&zero_map).map(|r| r.is_zero()).unwrap_or(true))
        .collect();

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cfg = SampleConfig::suite();
    let tol = Tolerances::default();
    let mut rows = Vec::with_capacity(samples);
    let mut budget = cfg.budget;
    while rows.len() < samples && budget > 0 {
        budget -= 1;
        let z: Vec<Complex64> = (0..chart.dim())
            .map(|v| {
                if forced.contains(&v) {
                    Complex64::new(0.0, 0.0)
                } else {
                    let r = (0.3f64.ln() + rng.gen::<f64>() * (3.0f64.ln() - 0.3f64.ln())).exp();
                    Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
                }
            })
            .collect();
        let clear = guards
            .iter()
            .all(|g| g.eval_complex(&z).map(|v| v.norm() > cfg.eps_den).unwrap_or(false));
        if !clear {
            continue;
        }
        let p = NumericPoint::from_coordinates(chart, z)?;
        rows.push(rho(chart, d, &p, &tol)?);
    }
    if rows.is_empty() {
        return Ok(empty("no point of the component cleared the guards"));
    }
    Ok(WallCloud {
        schema_version: crate::SCHEMA_VERSION,
        component: comp.label.clone(),
        header,
        rows,
        warning: None,
    })
}

/// If the polynomial is c * (single variable), returns its index.
fn single_variable(p: &Polynomial) -> Option<usize> {
    if p.num_terms() != 1 {
        return None;
    }
    let (m, _) = p.leading()?;
    let mut idx = None;
    for (v, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 if idx.is_none() => idx = Some(v),
            _ => return None,
        }
    }
    idx
}

// ---------------------------------------------------------------------------
// Superpotentials

/// A signed product of named Pluecker coordinates.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PluckerMonomial {
    pub sign: i8,
    pub factors: Vec<String>,
}

/// A sum of signed Pluecker monomials.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PluckerPoly(pub Vec<PluckerMonomial>);

impl PluckerPoly {
    fn mono(factors: &[&str]) -> Self {
        PluckerPoly(vec![PluckerMonomial {
            sign: 1,
            factors: factors.iter().map(|s| s.to_string()).collect(),
        }])
    }

    fn eval(&self, values: &BTreeMap<String, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in &self.0 {
            let mut term = Complex64::new(m.sign as f64, 0.0);
            for f in &m.factors {
                term *= values
                    .get(f)
                    .ok_or_else(|| Error::Config(format!("missing Pluecker value `{f}`")))?;
            }
            acc += term;
        }
        Ok(acc)
    }
}

/// One superpotential term: an optional quantum parameter times a ratio of
/// Pluecker polynomials.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuperpotentialTerm {
    pub quantum: Option<String>,
    pub numerator: PluckerPoly,
    pub denominator: PluckerPoly,
}

impl SuperpotentialTerm {
    pub fn eval(
        &self,
        values: &BTreeMap<String, Complex64>,
        q: &BTreeMap<String, Complex64>,
    ) -> Result<Complex64> {
        let num = self.numerator.eval(values)?;
        let den = self.denominator.eval(values)?;
        if den.norm() < 1e-300 {
            return Err(Error::Numerical("superpotential denominator vanishes".into()));
        }
        let qv = match &self.quantum {
            None => Complex64::new(1.0, 0.0),
            Some(name) => *q
                .get(name)
                .ok_or_else(|| Error::Config(format!("missing quantum parameter `{name}`")))?,
        };
        Ok(qv * num / den)
    }

    pub fn display(&self) -> String {
        let poly = |p: &PluckerPoly| -> String {
            let body: String = p
                .0
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let s = match (i, m.sign) {
                        (0, s) if s >= 0 => "",
                        (_, s) if s >= 0 => " + ",
                        (0, _) => "-",
                        _ => " - ",
                    };
                    format!("{s}{}", m.factors.join(" "))
                })
                .collect();
            if p.0.len() > 1 {
                format!("({body})")
            } else {
                body
            }
        };
        let q = self
            .quantum
            .as_ref()
            .map(|s| format!("{s} "))
            .unwrap_or_default();
        format!("{q}{}/{}", poly(&self.numerator), poly(&self.denominator))
    }
}

/// The explicit Pluecker-coordinate superpotential for the smallest flag
/// cases, with the Rietsch divisor description.
#[derive(Clone, Debug, Serialize)]
pub struct SuperpotentialExpr {
    pub schema_version: u32,
    pub n: usize,
    pub divisor: String,
    pub terms: Vec<SuperpotentialTerm>,
}

impl SuperpotentialExpr {
    pub fn eval(
        &self,
        values: &BTreeMap<String, Complex64>,
        q: &BTreeMap<String, Complex64>,
    ) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            acc += t.eval(values, q)?;
        }
        Ok(acc)
    }
}

fn plain(num: &[&str], den: &[&str]) -> SuperpotentialTerm {
    SuperpotentialTerm {
        quantum: None,
        numerator: PluckerPoly::mono(num),
        denominator: PluckerPoly::mono(den),
    }
}

fn quantum(q: &str, num: &[&str], den: &[&str]) -> SuperpotentialTerm {
    SuperpotentialTerm {
        quantum: Some(q.to_string()),
        ..plain(num, den)
    }
}

/// The explicit superpotential term lists for n = 3 and n = 4; other sizes
/// have no published closed form.
pub fn rietsch_superpotential(n: usize) -> Result<SuperpotentialExpr> {
    let terms = match n {
        3 => vec![
            plain(&["x2"], &["x1"]),
            plain(&["x13"], &["x12"]),
            quantum("q1", &["x13"], &["x23"]),
            quantum("q2", &["x2"], &["x3"]),
        ],
        4 => vec![
            plain(&["x3"], &["x1"]),
            plain(&["x134"], &["x123"]),
            quantum("q1", &["x134"], &["x234"]),
            quantum("q2", &["x3"], &["x4"]),
            SuperpotentialTerm {
                quantum: None,
                numerator: PluckerPoly::mono(&["x2", "x124"]),
                denominator: PluckerPoly(vec![
                    PluckerMonomial {
                        sign: 1,
                        factors: vec!["x3".into(), "x124".into()],
                    },
                    PluckerMonomial {
                        sign: -1,
                        factors: vec!["x4".into(), "x123".into()],
                    },
                ]),
            },
        ],
        other => {
            return Err(Error::Unsupported(format!(
                "no explicit superpotential for n = {other}"
            )))
        }
    };
    let divisor = match n {
        3 => "x1 x23 x3 x12 = 0",
        _ => "x1 x234 (x3 x124 - x4 x123) x4 x123 = 0",
    }
    .to_string();
    Ok(SuperpotentialExpr {
        schema_version: crate::SCHEMA_VERSION,
        n,
        divisor,
        terms,
    })
}

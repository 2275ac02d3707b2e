use serde::{Deserialize, Serialize};

use super::{
    d_vol_along, energy_pxi, homogeneity_check, quasi_regular_check, relative_error, s_exact,
    s_exact_for, s_on_body, vol_by_triangulation, vol_xi, PolarizedToricSetup, SliceEnergy,
};
use crate::arith::{factorial, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};
use crate::grading::{exact_top, jumping_spectrum};
use crate::pl::{integrate_moment, PlConcave, SuperlevelProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// How a verdict compares its stored values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// `lhs = rhs` exactly.
    Equal,
    /// `|lhs - rhs| <= tolerance |rhs|` (absolute when `rhs = 0`).
    WithinRelative { tolerance: Rational },
    /// `lhs <= rhs`.
    AtMost,
    /// `sequence` strictly decreasing until it reaches zero.
    Decreasing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub description: String,
    pub status: Status,
    pub relation: Relation,
    pub lhs: Option<Rational>,
    pub rhs: Option<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequence: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Whether a failure makes the report fail.
    pub gating: bool,
}

impl Verdict {
    fn new(name: &str, description: &str, relation: Relation) -> Verdict {
        Verdict {
            name: name.into(),
            description: description.into(),
            status: Status::Skipped,
            relation,
            lhs: None,
            rhs: None,
            sequence: Vec::new(),
            parameter: None,
            note: None,
            gating: true,
        }
    }

    fn compare(mut self, lhs: Rational, rhs: Rational) -> Verdict {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self.status = self.evaluate();
        self
    }

    fn over(mut self, sequence: Vec<Rational>) -> Verdict {
        self.sequence = sequence;
        self.status = self.evaluate();
        self
    }

    fn skip(mut self, why: impl Into<String>) -> Verdict {
        self.status = Status::Skipped;
        self.note = Some(why.into());
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Verdict {
        self.note = Some(note.into());
        self
    }

    fn informational(mut self) -> Verdict {
        self.gating = false;
        self
    }

    /// Status recomputed from the stored values alone.
    pub fn evaluate(&self) -> Status {
        let holds = match &self.relation {
            Relation::Decreasing => {
                if self.sequence.is_empty() {
                    return Status::Skipped;
                }
                self.sequence.windows(2).all(|w| w[1] < w[0] || (w[0].is_zero() && w[1].is_zero()))
            }
            rel => {
                let (Some(l), Some(r)) = (&self.lhs, &self.rhs) else {
                    return Status::Skipped;
                };
                match rel {
                    Relation::Equal => l == r,
                    Relation::WithinRelative { tolerance } => relative_error(l, r) <= *tolerance,
                    Relation::AtMost => l <= r,
                    Relation::Decreasing => unreachable!(),
                }
            }
        };
        if holds {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One level of the truncated-average trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmEntry {
    pub m: u64,
    pub count: u128,
    pub s_m: Rational,
    pub t_m: Rational,
    /// `|S_m - S|`.
    pub error: Rational,
    /// `N_m / m^n`.
    pub mass: Rational,
    /// Sup distance between the distribution functions of `mu_m` and `mu`.
    pub cdf_distance: Option<Rational>,
}

/// One degree of the per-degree average trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct STildeEntry {
    pub t: u64,
    pub count: u128,
    pub s_tilde: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub m_grid: Vec<u64>,
    pub t_max: u64,
    pub tolerance: Rational,
    pub cdf_tolerance: Rational,
    pub homogeneity_factors: Vec<Rational>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            m_grid: vec![25, 50, 100, 200, 400],
            t_max: 200,
            tolerance: Rational::new(1, 100),
            cdf_tolerance: Rational::new(1, 50),
            homogeneity_factors: vec![Rational::new(1, 3), Rational::from(2), Rational::new(7, 2)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub rank: usize,
    pub xi: RationalVector,
    pub eta: Option<RationalVector>,
    pub filtration: Option<PlConcave>,
    pub ceiling: bool,
    pub clamp: bool,
    /// Closed form over simplicial subcones.
    pub vol_xi: Rational,
    /// `n! vol(Q)` from a triangulation of `Q`.
    pub vol_triangulated: Rational,
    /// `n! vol(Delta)` for the Okounkov body in `okounkov_basis`.
    pub vol_okounkov: Option<Rational>,
    pub okounkov_basis: Option<RationalMatrix>,
    pub d_vol: Option<Rational>,
    pub s_exact: Option<Rational>,
    pub s_okounkov: Option<Rational>,
    /// Largest value of the homogenized filtration on `Q`.
    pub top: Option<Rational>,
    pub energy_tc: Option<Rational>,
    pub energy_pxi: Option<SliceEnergy>,
    pub c_n_ratio: Option<Rational>,
    /// Total mass of the limit measure, `vol(Q) = vol(xi) / n!`.
    pub measure_mass: Rational,
    pub s_m_trace: Vec<SmEntry>,
    pub s_tilde_trace: Vec<STildeEntry>,
    pub s_tilde_extrapolated: Option<Rational>,
    pub count_coefficient: Option<Rational>,
    pub notes: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl InvariantReport {
    /// Statuses recomputed from the stored values.
    pub fn reverify(&self) -> Vec<Status> {
        self.verdicts
            .iter()
            .map(|v| if v.status == Status::Skipped { Status::Skipped } else { v.evaluate() })
            .collect()
    }

    /// True when the stored statuses match a fresh evaluation.
    pub fn is_consistent(&self) -> bool {
        self.verdicts.iter().zip(self.reverify()).all(|(v, s)| v.status == s)
    }

    /// No gating verdict failed.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| !(v.gating && v.status == Status::Fail))
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

fn err_note(e: &Error) -> String {
    format!("route failed: {e}")
}

struct ExactPart {
    vol_triangulated: Result<Rational>,
    okounkov: Option<Result<(RationalMatrix, Rational, Option<Rational>)>>,
    d_vol: Option<Result<Rational>>,
    s_exact: Option<Result<Rational>>,
    top: Option<Result<Rational>>,
    energy_pxi: Option<Result<SliceEnergy>>,
    cone_integral: Option<Result<Rational>>,
    linear_identity: Option<Result<(Rational, Rational)>>,
    homogeneity: Vec<(Rational, Result<super::HomogeneityCheck>)>,
}

struct TracePart {
    s_m: Option<Result<(Vec<SmEntry>, bool)>>,
    quasi: Option<Result<super::QuasiRegularCheck>>,
}

pub fn consistency_report(setup: &PolarizedToricSetup, options: &ReportOptions) -> InvariantReport {
    let n = setup.rank();
    let vol = vol_xi(setup);
    let filtration = setup.filtration();
    let eta_tc = setup.eta().cloned().or_else(|| {
        setup.psi().and_then(|p| p.as_linear(setup.dual()))
    });

    let (exact, traces) = rayon::join(
        || exact_routes(setup, options, filtration.as_ref(), eta_tc.as_ref()),
        || trace_routes(setup, options, filtration.as_ref()),
    );

    let mut notes = vec![format!(
        "the limit measure has total mass vol(Q) = vol(xi)/{n}!; normalizing it to mass vol(xi) multiplies every mass by {}",
        factorial(n)
    )];
    if setup.ceiling() {
        notes.push("jumping numbers rounded up to integers".into());
    }
    if filtration.as_ref().is_some_and(PlConcave::clamp) {
        notes.push("clamp mode: the filtration is replaced by max(psi, 0)".into());
    }

    let mut verdicts = Vec::new();

    let vol_triangulated = match &exact.vol_triangulated {
        Ok(v) => v.clone(),
        Err(_) => Rational::zero(),
    };
    verdicts.push(match &exact.vol_triangulated {
        Ok(v) => Verdict::new(
            "vol-routes",
            "closed-form volume equals n! times the triangulated volume of Q",
            Relation::Equal,
        )
        .compare(vol.clone(), v.clone()),
        Err(e) => Verdict::new("vol-routes", "closed-form volume equals n! vol(Q)", Relation::Equal)
            .skip(err_note(e)),
    });

    let mut vol_okounkov = None;
    let mut okounkov_basis = None;
    let mut s_okounkov = None;
    let vol_desc = "n! times the volume of the Okounkov body equals vol(xi)";
    let s_desc = "mean of the concave transform over the Okounkov body equals S";
    match &exact.okounkov {
        Some(Ok((basis, body_vol, s_body))) => {
            let nv = factorial(n) * body_vol;
            verdicts.push(Verdict::new("okounkov-vol", vol_desc, Relation::Equal).compare(nv.clone(), vol.clone()));
            vol_okounkov = Some(nv);
            okounkov_basis = Some(basis.clone());
            s_okounkov = s_body.clone();
        }
        Some(Err(e)) => verdicts.push(Verdict::new("okounkov-vol", vol_desc, Relation::Equal).skip(err_note(e))),
        None => {
            let why = "no unimodular basis inside sigma was found; values are reported in Q coordinates";
            notes.push(why.into());
            verdicts.push(Verdict::new("okounkov-vol", vol_desc, Relation::Equal).skip(why));
        }
    }

    let d_vol = exact.d_vol.as_ref().and_then(|r| r.as_ref().ok().cloned());
    let energy_tc = d_vol.as_ref().map(|d| d / (Rational::from(n + 1) * &vol));
    let s_value = exact.s_exact.as_ref().and_then(|r| r.as_ref().ok().cloned());
    match (&s_okounkov, &s_value) {
        (Some(a), Some(b)) => {
            verdicts.push(Verdict::new("okounkov-s", s_desc, Relation::Equal).compare(a.clone(), b.clone()))
        }
        _ => verdicts.push(Verdict::new("okounkov-s", s_desc, Relation::Equal).skip("needs a filtration and a basis")),
    }

    let linear_desc = "S of the linear filtration <u, eta> equals D_{-eta} vol(xi) / ((n + 1) vol(xi))";
    verdicts.push(match &exact.linear_identity {
        Some(Ok((lhs, rhs))) => Verdict::new("thm4.2", linear_desc, Relation::Equal).compare(lhs.clone(), rhs.clone()),
        Some(Err(e)) => Verdict::new("thm4.2", linear_desc, Relation::Equal).skip(err_note(e)),
        None => Verdict::new("thm4.2", linear_desc, Relation::Equal)
            .skip("no direction eta and the filtration is not a single linear form"),
    });

    // truncated averages and weak convergence
    let mut s_m_trace = Vec::new();
    let cor_desc = "the truncated average S_m at the largest level is within tolerance of S";
    let mono_desc = "|S_m - S| decreases along the level grid";
    let weak_desc = "sup distance between the distribution functions of mu_m and mu at the largest level";
    let weak_mono_desc = "the distribution-function distance decreases along the level grid";
    let rel = Relation::WithinRelative { tolerance: options.tolerance.clone() };
    let mass = vol.clone() / factorial(n);
    match (&traces.s_m, &s_value) {
        (Some(Ok((trace, _))), Some(s)) if !trace.is_empty() => {
            let last = trace.last().expect("nonempty");
            verdicts.push(Verdict::new("cor3.12", cor_desc, rel.clone()).compare(last.s_m.clone(), s.clone()));
            verdicts.push(
                Verdict::new("truncated-average-monotone", mono_desc, Relation::Decreasing)
                    .over(trace.iter().map(|e| e.error.clone()).collect()),
            );
            let distances: Option<Vec<Rational>> = trace.iter().map(|e| e.cdf_distance.clone()).collect();
            match distances {
                Some(d) => {
                    verdicts.push(
                        Verdict::new("weak-convergence", weak_desc, Relation::AtMost)
                            .compare(d.last().cloned().expect("nonempty"), &options.cdf_tolerance * &mass)
                            .with_note(format!("bound is {} of the total mass", options.cdf_tolerance)),
                    );
                    verdicts.push(Verdict::new("weak-convergence-monotone", weak_mono_desc, Relation::Decreasing).over(d));
                }
                None => {
                    verdicts.push(Verdict::new("weak-convergence", weak_desc, Relation::AtMost).skip("no superlevel profile"));
                    verdicts.push(
                        Verdict::new("weak-convergence-monotone", weak_mono_desc, Relation::Decreasing)
                            .skip("no superlevel profile"),
                    );
                }
            }
            s_m_trace = trace.clone();
        }
        (Some(Err(e)), _) => {
            for (name, desc) in [("cor3.12", cor_desc), ("truncated-average-monotone", mono_desc), ("weak-convergence", weak_desc), ("weak-convergence-monotone", weak_mono_desc)] {
                verdicts.push(Verdict::new(name, desc, Relation::Equal).skip(err_note(e)));
            }
        }
        _ => {
            for (name, desc) in [("cor3.12", cor_desc), ("truncated-average-monotone", mono_desc), ("weak-convergence", weak_desc), ("weak-convergence-monotone", weak_mono_desc)] {
                verdicts.push(Verdict::new(name, desc, Relation::Equal).skip("no filtration or empty level grid"));
            }
        }
    }

    // per-degree averages
    let lem_desc = "S equals n/(n + 1) times the extrapolated per-degree average";
    let count_desc = "per-degree counts grow with leading coefficient vol(xi)/(n - 1)!";
    let mut s_tilde_trace = Vec::new();
    let mut s_tilde_extrapolated = None;
    let mut count_coefficient = None;
    match &traces.quasi {
        Some(Ok(q)) => {
            verdicts.push(Verdict::new("lem3.17b", lem_desc, rel.clone()).compare(q.predicted_s.clone(), q.s_exact.clone()));
            verdicts.push(
                Verdict::new("degree-count-growth", count_desc, rel.clone())
                    .compare(q.count_coefficient.clone(), q.count_coefficient_expected.clone())
                    .informational(),
            );
            s_tilde_trace = q
                .stats
                .iter()
                .map(|s| STildeEntry { t: s.t, count: s.count, s_tilde: s.s_tilde() })
                .collect();
            s_tilde_extrapolated = Some(q.s_tilde_limit.clone());
            count_coefficient = Some(q.count_coefficient.clone());
            if let Some(empty) = q.stats.iter().filter(|s| s.count == 0).map(|s| s.t).next() {
                notes.push(format!("some degrees carry no weights (first: {empty}); they are excluded from averages"));
            }
        }
        Some(Err(e)) => {
            verdicts.push(Verdict::new("lem3.17b", lem_desc, rel.clone()).skip(err_note(e)));
            verdicts.push(Verdict::new("degree-count-growth", count_desc, rel.clone()).informational().skip(err_note(e)));
        }
        None => {
            verdicts.push(Verdict::new("lem3.17b", lem_desc, rel.clone()).skip("no filtration"));
            verdicts.push(Verdict::new("degree-count-growth", count_desc, rel.clone()).informational().skip("no filtration"));
        }
    }

    // homogeneity in xi
    let hom_desc = "S(c xi) c equals S(xi)";
    let hom_vol_desc = "vol(c xi) c^n equals vol(xi)";
    for (c, result) in &exact.homogeneity {
        match result {
            Ok(h) => {
                let mut v = Verdict::new("prop3.13-hom", hom_desc, Relation::Equal).compare(&h.s_scaled * &h.c, h.s.clone());
                v.parameter = Some(c.clone());
                verdicts.push(v);
                let mut v = Verdict::new("volume-homogeneity", hom_vol_desc, Relation::Equal)
                    .compare(&h.vol_scaled * h.c.pow(n as u32), h.vol.clone());
                v.parameter = Some(c.clone());
                verdicts.push(v);
            }
            Err(e) => {
                let mut v = Verdict::new("prop3.13-hom", hom_desc, Relation::Equal).skip(err_note(e));
                v.parameter = Some(c.clone());
                verdicts.push(v);
            }
        }
    }

    // slice energy
    let energy = exact.energy_pxi.as_ref().and_then(|r| r.as_ref().ok().cloned());
    let c_n_ratio = match (&s_value, &energy) {
        (Some(s), Some(e)) if !e.volume_normalized.is_zero() => Some(s / &e.volume_normalized),
        _ => None,
    };
    let cn_desc = "the slice integral of the homogenized filtration equals (n + 1) times its integral over Q";
    verdicts.push(match (&energy, &exact.cone_integral) {
        (Some(e), Some(Ok(q_int))) => {
            let v = Verdict::new("thm6.4-Cn", cn_desc, Relation::Equal)
                .compare(e.slice_integral.clone(), Rational::from(n + 1) * q_int);
            match &c_n_ratio {
                Some(r) => v.with_note(format!("measured S / E ratio at rank {n}: {r}")),
                None => v.with_note("S / E ratio undefined (zero energy)"),
            }
        }
        (_, Some(Err(e))) => Verdict::new("thm6.4-Cn", cn_desc, Relation::Equal).skip(err_note(e)),
        _ => match &exact.energy_pxi {
            Some(Err(e)) => Verdict::new("thm6.4-Cn", cn_desc, Relation::Equal).skip(err_note(e)),
            _ => Verdict::new("thm6.4-Cn", cn_desc, Relation::Equal).skip("no filtration"),
        },
    });

    InvariantReport {
        rank: n,
        xi: setup.xi().clone(),
        eta: setup.eta().cloned(),
        filtration,
        ceiling: setup.ceiling(),
        clamp: setup.psi().is_some_and(PlConcave::clamp),
        vol_xi: vol,
        vol_triangulated,
        vol_okounkov,
        okounkov_basis,
        d_vol,
        s_exact: s_value,
        s_okounkov,
        top: exact.top.and_then(|r| r.ok()),
        energy_tc,
        energy_pxi: energy,
        c_n_ratio,
        measure_mass: mass,
        s_m_trace,
        s_tilde_trace,
        s_tilde_extrapolated,
        count_coefficient,
        notes,
        verdicts,
    }
}

fn exact_routes(
    setup: &PolarizedToricSetup,
    options: &ReportOptions,
    filtration: Option<&PlConcave>,
    eta_tc: Option<&RationalVector>,
) -> ExactPart {
    let okounkov = setup.okounkov_basis().map(|basis| {
        let body = crate::polyhedra::okounkov_body(setup.dual(), setup.xi(), &basis)?;
        let s_body = match filtration {
            Some(_) => Some(s_on_body(setup, &basis)?.0),
            None => None,
        };
        Ok((basis, body.volume(), s_body))
    });
    let d_vol = setup.eta().map(|eta| d_vol_along(setup, eta));
    let s_value = filtration.map(|_| s_exact(setup));
    let top = filtration.map(|_| setup.graded().and_then(|g| exact_top(&g)));
    let energy = filtration.map(|_| energy_pxi(setup));
    let cone_integral = filtration.map(|psi| {
        let q = setup.slice()?.q;
        integrate_moment(&psi.homogenize(), &q, 1)
    });
    let linear_identity = eta_tc.map(|eta| {
        let lin = PlConcave::linear(eta.clone());
        let lhs = s_exact_for(setup, &lin)?;
        let d = d_vol_along(setup, eta)?;
        let rhs = d / (Rational::from(setup.rank() + 1) * vol_xi(setup));
        Ok((lhs, rhs))
    });
    let homogeneity = if filtration.is_some() {
        options
            .homogeneity_factors
            .iter()
            .map(|c| (c.clone(), homogeneity_check(setup, c)))
            .collect()
    } else {
        Vec::new()
    };
    ExactPart {
        vol_triangulated: vol_by_triangulation(setup),
        okounkov,
        d_vol,
        s_exact: s_value,
        top,
        energy_pxi: energy,
        cone_integral,
        linear_identity,
        homogeneity,
    }
}

fn trace_routes(setup: &PolarizedToricSetup, options: &ReportOptions, filtration: Option<&PlConcave>) -> TracePart {
    if filtration.is_none() {
        return TracePart { s_m: None, quasi: None };
    }
    let (s_m, quasi) = rayon::join(
        || s_m_trace(setup, &options.m_grid),
        || {
            if setup.xi().is_integral() {
                quasi_regular_check(setup, options.t_max, &options.tolerance)
            } else {
                Err(Error::QuasiRegularRequired(setup.xi().to_string()))
            }
        },
    );
    TracePart { s_m: Some(s_m), quasi: Some(quasi) }
}

/// `S_m`, errors and distribution distances along `grid`; the flag reports
/// whether a superlevel profile was available.
pub fn s_m_trace(setup: &PolarizedToricSetup, grid: &[u64]) -> Result<(Vec<SmEntry>, bool)> {
    let g = setup.graded()?;
    let s = s_exact(setup)?;
    let h = g.psi().homogenize();
    let profile = SuperlevelProfile::compute(&h, g.q()).ok();
    let n = setup.rank() as u32;
    let trace = grid
        .iter()
        .map(|&m| {
            let spec = jumping_spectrum(&g, m);
            let s_m = spec.s_m();
            SmEntry {
                m,
                count: spec.count(),
                error: (&s_m - &s).abs(),
                s_m,
                t_m: spec.t_m(),
                mass: Rational::from(spec.count()) / Rational::from(m.max(1)).pow(n),
                cdf_distance: profile.as_ref().map(|p| spec.cdf_distance(p)),
            }
        })
        .collect();
    Ok((trace, profile.is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::AffineForm;
    use crate::polyhedra::{Cone, Lattice};

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_ints(x)
    }

    fn orthant(xi: &[i64]) -> PolarizedToricSetup {
        let n = xi.len();
        let rays: Vec<RationalVector> = (0..n).map(|i| RationalVector::unit(n, i)).collect();
        PolarizedToricSetup::new(Cone::from_rays(Lattice::N, rays).unwrap(), v(xi)).unwrap()
    }

    fn quick() -> ReportOptions {
        ReportOptions { t_max: 60, ..ReportOptions::default() }
    }

    #[test]
    fn linear_anchor_report() {
        let s = orthant(&[1, 1]).with_eta(v(&[1, 0])).unwrap();
        let r = consistency_report(&s, &quick());
        let t = r.verdict("thm4.2").unwrap();
        assert_eq!(t.status, Status::Pass);
        assert_eq!(t.lhs, Some(Rational::new(1, 3)));
        assert_eq!(t.rhs, Some(Rational::new(1, 3)));
        assert_eq!(r.s_exact, Some(Rational::new(1, 3)));
        assert_eq!(r.c_n_ratio, Some(Rational::from(2)));
        for e in &r.s_m_trace {
            assert_eq!(e.s_m, Rational::new(1, 3));
        }
        assert!(r.passed(), "{:#?}", r.verdicts);
        assert!(r.is_consistent());
    }

    #[test]
    fn zero_filtration_report() {
        let s = orthant(&[1, 2]).with_psi(PlConcave::zero(2)).unwrap();
        let r = consistency_report(&s, &quick());
        assert_eq!(r.s_exact, Some(Rational::zero()));
        assert_eq!(r.energy_pxi.as_ref().unwrap().volume_normalized, Rational::zero());
        for v in &r.verdicts {
            assert_ne!(v.status, Status::Fail, "{v:?}");
        }
    }

    #[test]
    fn json_roundtrip_reverifies() {
        let psi = PlConcave::new(vec![AffineForm::linear(v(&[1, 0])), AffineForm::linear(v(&[0, 1]))]).unwrap();
        let s = orthant(&[1, 1]).with_psi(psi).unwrap();
        let r = consistency_report(&s, &quick());
        let json = serde_json::to_string(&r).unwrap();
        let back: InvariantReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.reverify(), r.verdicts.iter().map(|v| v.status).collect::<Vec<_>>());
    }

    #[test]
    fn tampered_values_fail_reverification() {
        let s = orthant(&[1, 1]).with_eta(v(&[1, 0])).unwrap();
        let mut r = consistency_report(&s, &quick());
        let idx = r.verdicts.iter().position(|v| v.name == "thm4.2").unwrap();
        r.verdicts[idx].lhs = Some(Rational::new(1, 4));
        assert!(!r.is_consistent());
    }

    #[test]
    fn unimodular_transport_same_report() {
        let s = orthant(&[1, 1]).with_eta(v(&[1, 0])).unwrap();
        let a = RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        let t = s.transform(&a).unwrap();
        let (r1, r2) = (consistency_report(&s, &quick()), consistency_report(&t, &quick()));
        assert_eq!(r1.vol_xi, r2.vol_xi);
        assert_eq!(r1.s_exact, r2.s_exact);
        assert_eq!(r1.d_vol, r2.d_vol);
        assert_eq!(r1.energy_pxi, r2.energy_pxi);
        assert_eq!(r1.s_m_trace, r2.s_m_trace);
        assert_eq!(r1.s_tilde_trace, r2.s_tilde_trace);
        let st = |r: &InvariantReport| r.verdicts.iter().map(|v| (v.name.clone(), v.status)).collect::<Vec<_>>();
        assert_eq!(st(&r1), st(&r2));
    }
}

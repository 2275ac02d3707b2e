//! Problem specifications: a JSON document describing the cone, the Reeb
//! field and the filtration.
//!
//! ```json
//! {
//!   "rank": 2,
//!   "sigma_rays": [["1", "0"], ["0", "1"]],
//!   "xi": ["1", "1"],
//!   "eta": ["1", "0"],
//!   "filtration": {"branches": [{"linear": ["1", "0"], "constant": "0"}]},
//!   "options": {"m_grid": [25, 50, 100], "t_max": 200, "tolerance": "1/100"}
//! }
//! ```
//!
//! Rationals are strings such as `"3/4"` or JSON integers.

use serde_json::{Map, Value};

use reebvol_core::arith::{Rational, RationalMatrix, RationalVector};
use reebvol_core::invariants::{PolarizedToricSetup, ReportOptions};
use reebvol_core::pl::{AffineForm, PlConcave};
use reebvol_core::polyhedra::{Cone, Lattice};
use reebvol_core::Error;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecOptions {
    pub m_grid: Option<Vec<u64>>,
    pub t_max: Option<u64>,
    pub tolerance: Option<Rational>,
    pub cdf_tolerance: Option<Rational>,
    pub homogeneity_factors: Option<Vec<Rational>>,
    pub decimal: Option<usize>,
    pub ceiling: bool,
    pub clamp: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub rank: usize,
    pub sigma_rays: Vec<RationalVector>,
    pub xi: RationalVector,
    pub eta: Option<RationalVector>,
    pub filtration: Option<PlConcave>,
    pub basis: Option<RationalMatrix>,
    pub options: SpecOptions,
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> CliResult<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::field(join(path, k), "unknown field")),
        None => Ok(()),
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn rational(v: &Value, path: &str) -> CliResult<Rational> {
    match v {
        Value::String(s) => s.parse().map_err(|_| CliError::field(path, format!("cannot parse {s:?} as a rational"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer literal")),
        _ => Err(CliError::field(path, "expected a rational string such as \"1/2\" or an integer")),
    }
}

fn vector(v: &Value, path: &str, rank: usize) -> CliResult<RationalVector> {
    let items = v.as_array().ok_or_else(|| CliError::field(path, "expected an array"))?;
    if items.len() != rank {
        return Err(CliError::field(path, format!("expected {rank} entries, found {}", items.len())));
    }
    let entries = items
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(RationalVector::new(entries))
}

fn vectors(v: &Value, path: &str, rank: usize) -> CliResult<Vec<RationalVector>> {
    let items = v.as_array().ok_or_else(|| CliError::field(path, "expected an array of vectors"))?;
    items.iter().enumerate().map(|(i, x)| vector(x, &format!("{path}[{i}]"), rank)).collect()
}

fn unsigned(v: &Value, path: &str) -> CliResult<u64> {
    v.as_u64().ok_or_else(|| CliError::field(path, "expected a nonnegative integer"))
}

fn filtration(v: &Value, path: &str, rank: usize) -> CliResult<PlConcave> {
    let obj = v.as_object().ok_or_else(|| CliError::field(path, "expected an object with \"branches\""))?;
    check_keys(obj, path, &["branches"])?;
    let bpath = join(path, "branches");
    let branches = obj
        .get("branches")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::field(&bpath, "expected an array of affine forms"))?;
    let forms = branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let p = format!("{bpath}[{i}]");
            let obj = b.as_object().ok_or_else(|| CliError::field(&p, "expected {\"linear\", \"constant\"}"))?;
            check_keys(obj, &p, &["linear", "constant"])?;
            let linear = vector(
                obj.get("linear").ok_or_else(|| CliError::field(join(&p, "linear"), "missing"))?,
                &join(&p, "linear"),
                rank,
            )?;
            let constant = match obj.get("constant") {
                Some(c) => rational(c, &join(&p, "constant"))?,
                None => Rational::zero(),
            };
            Ok(AffineForm::new(linear, constant))
        })
        .collect::<CliResult<Vec<_>>>()?;
    PlConcave::new(forms).map_err(|e| CliError::field(bpath, e))
}

fn options(v: &Value, path: &str) -> CliResult<SpecOptions> {
    let obj = v.as_object().ok_or_else(|| CliError::field(path, "expected an object"))?;
    check_keys(
        obj,
        path,
        &["m_grid", "t_max", "tolerance", "cdf_tolerance", "homogeneity_factors", "decimal", "ceiling", "clamp"],
    )?;
    let mut out = SpecOptions::default();
    if let Some(g) = obj.get("m_grid") {
        let p = join(path, "m_grid");
        let items = g.as_array().ok_or_else(|| CliError::field(&p, "expected an array"))?;
        out.m_grid = Some(
            items
                .iter()
                .enumerate()
                .map(|(i, x)| unsigned(x, &format!("{p}[{i}]")))
                .collect::<CliResult<_>>()?,
        );
    }
    if let Some(t) = obj.get("t_max") {
        out.t_max = Some(unsigned(t, &join(path, "t_max"))?);
    }
    if let Some(t) = obj.get("tolerance") {
        out.tolerance = Some(rational(t, &join(path, "tolerance"))?);
    }
    if let Some(t) = obj.get("cdf_tolerance") {
        out.cdf_tolerance = Some(rational(t, &join(path, "cdf_tolerance"))?);
    }
    if let Some(h) = obj.get("homogeneity_factors") {
        let p = join(path, "homogeneity_factors");
        let items = h.as_array().ok_or_else(|| CliError::field(&p, "expected an array"))?;
        let factors = items
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let c = rational(x, &format!("{p}[{i}]"))?;
                if c.is_positive() {
                    Ok(c)
                } else {
                    Err(CliError::field(format!("{p}[{i}]"), "scale factors must be positive"))
                }
            })
            .collect::<CliResult<_>>()?;
        out.homogeneity_factors = Some(factors);
    }
    if let Some(d) = obj.get("decimal") {
        out.decimal = Some(unsigned(d, &join(path, "decimal"))? as usize);
    }
    for (key, slot) in [("ceiling", &mut out.ceiling), ("clamp", &mut out.clamp)] {
        if let Some(b) = obj.get(key) {
            *slot = b.as_bool().ok_or_else(|| CliError::field(join(path, key), "expected true or false"))?;
        }
    }
    Ok(out)
}

/// Parses and shape-checks a specification. Geometric validity (Reeb field,
/// nonnegativity) is checked by [`ProblemSpec::setup`].
pub fn parse_spec(text: &str) -> CliResult<ProblemSpec> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let obj = root.as_object().ok_or_else(|| CliError::Input("top level must be a JSON object".into()))?;
    check_keys(obj, "", &["rank", "sigma_rays", "xi", "eta", "filtration", "basis", "options"])?;
    let rank = obj
        .get("rank")
        .ok_or_else(|| CliError::field("rank", "missing"))
        .and_then(|r| unsigned(r, "rank"))? as usize;
    if rank == 0 {
        return Err(CliError::field("rank", "must be positive"));
    }
    let need = |key: &str| obj.get(key).ok_or_else(|| CliError::field(key, "missing"));
    let sigma_rays = vectors(need("sigma_rays")?, "sigma_rays", rank)?;
    let xi = vector(need("xi")?, "xi", rank)?;
    let eta = obj.get("eta").map(|e| vector(e, "eta", rank)).transpose()?;
    let filtration = obj.get("filtration").map(|f| filtration(f, "filtration", rank)).transpose()?;
    let basis = obj
        .get("basis")
        .map(|b| {
            let rows = vectors(b, "basis", rank)?;
            RationalMatrix::new(rows).map_err(|e| CliError::field("basis", e))
        })
        .transpose()?;
    let options = obj.get("options").map(|o| options(o, "options")).transpose()?.unwrap_or_default();
    Ok(ProblemSpec { rank, sigma_rays, xi, eta, filtration, basis, options })
}

/// Overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub ceiling: bool,
    pub clamp: bool,
    pub tolerance: Option<Rational>,
    pub m_grid: Option<Vec<u64>>,
    pub t_max: Option<u64>,
}

impl ProblemSpec {
    /// The validated setup, with errors addressed to the offending field.
    pub fn setup(&self, o: &Overrides) -> CliResult<PolarizedToricSetup> {
        let sigma = Cone::from_rays(Lattice::N, self.sigma_rays.clone()).map_err(|e| CliError::field("sigma_rays", e))?;
        let mut s = PolarizedToricSetup::new(sigma, self.xi.clone()).map_err(|e| match e {
            Error::NotReeb { .. } | Error::Dimension { .. } => CliError::field("xi", e),
            e => CliError::field("sigma_rays", e),
        })?;
        s = s.with_ceiling(self.options.ceiling || o.ceiling);
        if let Some(eta) = &self.eta {
            s = s.with_eta(eta.clone()).map_err(|e| CliError::field("eta", e))?;
        }
        if let Some(psi) = &self.filtration {
            let psi = psi.clone().with_clamp(self.options.clamp || o.clamp);
            s = s.with_psi(psi).map_err(|e| CliError::field("filtration", e))?;
        }
        if let Some(b) = &self.basis {
            s = s.with_basis(b.clone()).map_err(|e| CliError::field("basis", e))?;
        }
        Ok(s)
    }

    pub fn report_options(&self, o: &Overrides) -> ReportOptions {
        let mut r = ReportOptions::default();
        if let Some(g) = o.m_grid.clone().or_else(|| self.options.m_grid.clone()) {
            r.m_grid = g;
        }
        if let Some(t) = o.t_max.or(self.options.t_max) {
            r.t_max = t;
        }
        if let Some(t) = o.tolerance.clone().or_else(|| self.options.tolerance.clone()) {
            r.tolerance = t;
        }
        if let Some(t) = &self.options.cdf_tolerance {
            r.cdf_tolerance = t.clone();
        }
        if let Some(h) = &self.options.homogeneity_factors {
            r.homogeneity_factors = h.clone();
        }
        r
    }
}

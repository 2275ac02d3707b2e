//! Closed-form invariants of a polarized affine toric variety with a
//! filtration: the volume of the Reeb field and its directional derivative,
//! the S-invariant, the two energy formulas, and the checks relating them.

mod report;

pub use report::{
    consistency_report, s_m_trace, InvariantReport, Relation, ReportOptions, SmEntry, STildeEntry, Status,
    Verdict,
};

use rayon::prelude::*;

use crate::arith::{factorial, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};
use crate::grading::{graded_degree_stats, DegreeStat, GradedSetup};
use crate::pl::{integrate_moment, linearity_subdivision, simplex_moment, PlConcave};
use crate::polyhedra::{check_reeb, okounkov_body, reeb_slice, Cone, Lattice, Polytope, ReebSlice};

/// Cone `sigma` in `N`, Reeb field `xi`, and optionally a direction `eta`,
/// a filtration `psi` and a basis for the Okounkov body.
#[derive(Clone, Debug)]
pub struct PolarizedToricSetup {
    sigma: Cone,
    dual: Cone,
    xi: RationalVector,
    eta: Option<RationalVector>,
    psi: Option<PlConcave>,
    basis: Option<RationalMatrix>,
    ceiling: bool,
    subcones: Vec<Vec<usize>>,
}

impl PolarizedToricSetup {
    pub fn new(sigma: Cone, xi: RationalVector) -> Result<PolarizedToricSetup> {
        if sigma.lattice() != Lattice::N {
            return Err(Error::UnsupportedGeometry("sigma must live in N".into()));
        }
        let dual = sigma.dual();
        check_reeb(&dual, &xi)?;
        let subcones = dual.simplicial_subcones();
        Ok(PolarizedToricSetup {
            sigma,
            dual,
            xi,
            eta: None,
            psi: None,
            basis: None,
            ceiling: false,
            subcones,
        })
    }

    pub fn with_eta(mut self, eta: RationalVector) -> Result<PolarizedToricSetup> {
        eta.check_rank(self.rank())?;
        self.eta = Some(eta);
        Ok(self)
    }

    /// Attaches a filtration after checking it is nonnegative on the weight
    /// cone (unless it is in clamp mode).
    pub fn with_psi(mut self, psi: PlConcave) -> Result<PolarizedToricSetup> {
        if psi.rank() != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), found: psi.rank() });
        }
        psi.validate_nonnegative(&self.dual, &self.slice()?.q)?;
        self.psi = Some(psi);
        Ok(self)
    }

    pub fn with_basis(mut self, basis: RationalMatrix) -> Result<PolarizedToricSetup> {
        okounkov_body(&self.dual, &self.xi, &basis)?;
        self.basis = Some(basis);
        Ok(self)
    }

    pub fn with_ceiling(mut self, ceiling: bool) -> PolarizedToricSetup {
        self.ceiling = ceiling;
        self
    }

    /// Same data with a different Reeb field.
    pub fn with_xi(&self, xi: RationalVector) -> Result<PolarizedToricSetup> {
        xi.check_rank(self.rank())?;
        check_reeb(&self.dual, &xi)?;
        let mut out = self.clone();
        out.xi = xi;
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.sigma.rank()
    }

    pub fn sigma(&self) -> &Cone {
        &self.sigma
    }

    pub fn dual(&self) -> &Cone {
        &self.dual
    }

    pub fn xi(&self) -> &RationalVector {
        &self.xi
    }

    pub fn eta(&self) -> Option<&RationalVector> {
        self.eta.as_ref()
    }

    pub fn psi(&self) -> Option<&PlConcave> {
        self.psi.as_ref()
    }

    pub fn basis(&self) -> Option<&RationalMatrix> {
        self.basis.as_ref()
    }

    pub fn ceiling(&self) -> bool {
        self.ceiling
    }

    pub fn slice(&self) -> Result<ReebSlice> {
        reeb_slice(&self.dual, &self.xi)
    }

    /// The linear filtration `u -> <u, eta>`, when it is nonnegative on the
    /// weight cone.
    pub fn eta_filtration(&self) -> Option<PlConcave> {
        let eta = self.eta.as_ref()?;
        self.dual
            .rays()
            .iter()
            .all(|u| !u.dot(eta).is_negative())
            .then(|| PlConcave::linear(eta.clone()))
    }

    /// `psi` if given, else the linear filtration of `eta`.
    pub fn filtration(&self) -> Option<PlConcave> {
        self.psi.clone().or_else(|| self.eta_filtration())
    }

    fn require_filtration(&self) -> Result<PlConcave> {
        self.filtration().ok_or_else(|| {
            Error::InvalidFiltration("no filtration given and eta is not nonnegative on the weight cone".into())
        })
    }

    pub fn graded(&self) -> Result<GradedSetup> {
        let psi = self.require_filtration()?;
        Ok(GradedSetup::new(self.dual.clone(), self.xi.clone(), psi)?.with_ceiling(self.ceiling))
    }

    /// Pushes everything through the lattice automorphism `a` of `N`.
    pub fn transform(&self, a: &RationalMatrix) -> Result<PolarizedToricSetup> {
        let det = a.det()?;
        if !a.is_integral() || det.abs() != Rational::one() {
            return Err(Error::InvalidBasis("transport needs an integer unimodular matrix".into()));
        }
        let sigma = self.sigma.transform(a)?;
        let mut out = PolarizedToricSetup::new(sigma, a.mul_vec(&self.xi)?)?.with_ceiling(self.ceiling);
        if let Some(eta) = &self.eta {
            out = out.with_eta(a.mul_vec(eta)?)?;
        }
        if let Some(psi) = &self.psi {
            out = out.with_psi(psi.map_linear(|l| a.mul_vec(l))?)?;
        }
        if let Some(basis) = &self.basis {
            let rows = basis.rows().iter().map(|e| a.mul_vec(e)).collect::<Result<Vec<_>>>()?;
            let mut m = RationalMatrix::new(rows)?;
            if det.is_negative() {
                let mut rows = m.rows().to_vec();
                let last = rows.len() - 1;
                rows.swap(0, last.min(1));
                m = RationalMatrix::new(rows)?;
            }
            if m.det()? == Rational::one() {
                out = out.with_basis(m)?;
            }
        }
        Ok(out)
    }

    /// The given basis, or a unimodular basis of `N` made of lattice points of
    /// `sigma` when a short search finds one.
    pub fn okounkov_basis(&self) -> Option<RationalMatrix> {
        self.basis.clone().or_else(|| find_unimodular_basis(&self.sigma))
    }
}

/// Searches `n`-subsets of the rays, then of short primitive lattice points
/// of the cone (rank at most 4), for a basis of determinant one.
fn find_unimodular_basis(sigma: &Cone) -> Option<RationalMatrix> {
    let n = sigma.rank();
    let mut candidates: Vec<RationalVector> = sigma.rays().to_vec();
    if n <= 4 {
        let mut extra = Vec::new();
        box_points(n, 3, &mut Vec::new(), &mut |p| {
            let v = RationalVector::from_ints(p);
            if !v.is_zero() && sigma.contains(&v) && v.primitive_vector() == v && !candidates.contains(&v) {
                extra.push(v);
            }
        });
        let l1 = |v: &RationalVector| v.iter().map(Rational::abs).sum::<Rational>();
        extra.sort_by(|a, b| l1(a).cmp(&l1(b)).then_with(|| a.cmp(b)));
        candidates.extend(extra);
        candidates.truncate(24);
    }
    let mut chosen = Vec::with_capacity(n);
    let rows = choose_basis(&candidates, 0, n, &mut chosen)?;
    RationalMatrix::new(rows).ok()
}

fn box_points<F: FnMut(&[i64])>(n: usize, bound: i64, prefix: &mut Vec<i64>, f: &mut F) {
    if prefix.len() == n {
        f(prefix);
        return;
    }
    for x in -bound..=bound {
        prefix.push(x);
        box_points(n, bound, prefix, f);
        prefix.pop();
    }
}

fn choose_basis(
    candidates: &[RationalVector],
    start: usize,
    n: usize,
    chosen: &mut Vec<RationalVector>,
) -> Option<Vec<RationalVector>> {
    if chosen.len() == n {
        let det = RationalMatrix::new(chosen.clone()).and_then(|m| m.det()).ok()?;
        if det == Rational::one() {
            return Some(chosen.clone());
        }
        if det == -Rational::one() && n >= 2 {
            let mut rows = chosen.clone();
            rows.swap(0, 1);
            return Some(rows);
        }
        return None;
    }
    for i in start..candidates.len() {
        chosen.push(candidates[i].clone());
        if let Some(rows) = choose_basis(candidates, i + 1, n, chosen) {
            return Some(rows);
        }
        chosen.pop();
    }
    None
}

/// Rays of the dual cone in one simplicial subcone, with `|det U|`.
fn subcone_data(setup: &PolarizedToricSetup) -> Vec<(Vec<&RationalVector>, Rational)> {
    setup
        .subcones
        .iter()
        .map(|cell| {
            let rays: Vec<&RationalVector> = cell.iter().map(|&i| &setup.dual.rays()[i]).collect();
            let det = RationalMatrix::new(rays.iter().map(|r| (*r).clone()).collect())
                .and_then(|m| m.det())
                .expect("square ray matrix")
                .abs();
            (rays, det)
        })
        .collect()
}

/// `vol(xi) = sum |det U| / prod <u_i, xi>` over simplicial subcones of the
/// weight cone.
pub fn vol_xi(setup: &PolarizedToricSetup) -> Rational {
    vol_at(setup, &setup.xi).expect("xi is a Reeb field")
}

/// The same closed form at another Reeb field.
pub fn vol_at(setup: &PolarizedToricSetup, xi: &RationalVector) -> Result<Rational> {
    check_reeb(&setup.dual, xi)?;
    Ok(subcone_data(setup)
        .into_iter()
        .map(|(rays, det)| {
            let denom: Rational = rays.iter().map(|u| u.dot(xi)).product();
            det / denom
        })
        .sum())
}

/// `n! vol(Q)` by triangulating the sub-level polytope.
pub fn vol_by_triangulation(setup: &PolarizedToricSetup) -> Result<Rational> {
    Ok(factorial(setup.rank()) * setup.slice()?.q.volume())
}

/// `d/de vol(xi - e eta)` at `e = 0`.
pub fn d_vol(setup: &PolarizedToricSetup) -> Result<Rational> {
    let eta = setup
        .eta
        .as_ref()
        .ok_or_else(|| Error::InvalidDirection("no direction eta given".into()))?;
    d_vol_along(setup, eta)
}

pub fn d_vol_along(setup: &PolarizedToricSetup, eta: &RationalVector) -> Result<Rational> {
    eta.check_rank(setup.rank())?;
    let xi = &setup.xi;
    let mut total = Rational::zero();
    for (rays, det) in subcone_data(setup) {
        let pairings: Vec<Rational> = rays.iter().map(|u| u.dot(xi)).collect();
        if let Some(u) = rays.iter().zip(&pairings).find(|(_, p)| !p.is_positive()).map(|(u, _)| u) {
            return Err(Error::InvalidDirection(format!("ray {u} pairs non-positively with xi")));
        }
        let denom: Rational = pairings.iter().cloned().product();
        let rate: Rational = rays.iter().zip(&pairings).map(|(u, p)| u.dot(eta) / p).sum();
        total += det * rate / denom;
    }
    Ok(total)
}

/// `S = int_Q psi~ / vol(Q)`.
pub fn s_exact(setup: &PolarizedToricSetup) -> Result<Rational> {
    let psi = setup.require_filtration()?;
    s_exact_for(setup, &psi)
}

pub fn s_exact_for(setup: &PolarizedToricSetup, psi: &PlConcave) -> Result<Rational> {
    let q = setup.slice()?.q;
    let h = psi.homogenize_checked(&setup.dual, &q)?;
    Ok(integrate_moment(&h, &q, 1)? / q.volume())
}

/// `S` computed on the Okounkov body `E Q` with `G = psi~ o E^-1`.
pub fn s_on_body(setup: &PolarizedToricSetup, basis: &RationalMatrix) -> Result<(Rational, Rational)> {
    let psi = setup.require_filtration()?.homogenize();
    let body = okounkov_body(&setup.dual, &setup.xi, basis)?;
    let inv_t = basis.inverse()?.transpose();
    let g = psi.map_linear(|l| inv_t.mul_vec(l))?;
    let vol = body.volume();
    Ok((integrate_moment(&g, &body, 1)? / &vol, vol))
}

/// `D_{-eta} vol / ((n + 1) vol)`.
pub fn energy_tc(setup: &PolarizedToricSetup) -> Result<Rational> {
    let d = d_vol(setup)?;
    Ok(d / (Rational::from(setup.rank() + 1) * vol_xi(setup)))
}

/// The slice-integral energy in two normalizations.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SliceEnergy {
    /// Measure on the slice rescaled to total mass `vol(xi)`.
    pub volume_normalized: Rational,
    /// Measure with `int_Q f = int_0^1 int_P f(s w) s^(n-1) ds`.
    pub cone_normalized: Rational,
    /// `int_P psi~` against the cone-normalized measure.
    pub slice_integral: Rational,
    /// Total cone-normalized mass of the slice.
    pub slice_mass: Rational,
}

/// `int_P psi~ d lambda / ((n + 1) vol(xi))` with `P` the top facet of `Q`.
pub fn energy_pxi(setup: &PolarizedToricSetup) -> Result<SliceEnergy> {
    let psi = setup.require_filtration()?;
    let slice = setup.slice()?;
    let h = psi.homogenize_checked(&setup.dual, &slice.q)?;
    let n = setup.rank();
    let cells = linearity_subdivision(&h, &slice.p)?;
    let parts: Vec<(Rational, Rational)> = cells
        .par_iter()
        .map(|(cell, form)| {
            let t = cell.triangulate_hull();
            let mut mass = Rational::zero();
            let mut integral = Rational::zero();
            for s in &t.simplices {
                let pts: Vec<RationalVector> = s.iter().map(|&i| cell.vertices()[i].clone()).collect();
                let lam = cone_measure(&pts, n);
                let values: Vec<Rational> = pts.iter().map(|p| form.eval(p)).collect();
                integral += simplex_moment(&lam, &values, 1);
                mass += lam;
            }
            (mass, integral)
        })
        .collect();
    let (slice_mass, slice_integral) = parts
        .into_iter()
        .fold((Rational::zero(), Rational::zero()), |(m, i), (a, b)| (m + a, i + b));
    let vol = vol_xi(setup);
    let cone_normalized = &slice_integral / (Rational::from(n + 1) * &vol);
    // rescale so the slice has mass vol(xi)
    let volume_normalized = if slice_mass.is_zero() {
        Rational::zero()
    } else {
        &cone_normalized * &vol / &slice_mass
    };
    Ok(SliceEnergy { volume_normalized, cone_normalized, slice_integral, slice_mass })
}

/// `|det(w_0, ..., w_{n-1})| / (n-1)!` for a simplex of the slice.
fn cone_measure(points: &[RationalVector], n: usize) -> Rational {
    let det = RationalMatrix::new(points.to_vec()).and_then(|m| m.det()).expect("square").abs();
    det / factorial(n - 1)
}

/// Outcome of comparing `S` at `xi` and at `c xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityCheck {
    pub c: Rational,
    pub s: Rational,
    pub s_scaled: Rational,
    pub vol: Rational,
    pub vol_scaled: Rational,
}

impl HomogeneityCheck {
    pub fn s_holds(&self) -> bool {
        &self.s_scaled * &self.c == self.s
    }

    pub fn vol_holds(&self, n: usize) -> bool {
        &self.vol_scaled * self.c.pow(n as u32) == self.vol
    }
}

pub fn homogeneity_check(setup: &PolarizedToricSetup, c: &Rational) -> Result<HomogeneityCheck> {
    if !c.is_positive() {
        return Err(Error::InvalidDirection(format!("scale factor {c} must be positive")));
    }
    let scaled = setup.with_xi(setup.xi.scale(c))?;
    Ok(HomogeneityCheck {
        c: c.clone(),
        s: s_exact(setup)?,
        s_scaled: s_exact(&scaled)?,
        vol: vol_xi(setup),
        vol_scaled: vol_xi(&scaled),
    })
}

/// `S` along a path of Reeb fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityTrace {
    pub values: Vec<Rational>,
    pub jumps: Vec<Rational>,
}

impl ContinuityTrace {
    pub fn max_jump(&self) -> Rational {
        self.jumps.iter().max().cloned().unwrap_or_else(Rational::zero)
    }
}

pub fn continuity_scan(setup: &PolarizedToricSetup, path: &[RationalVector]) -> Result<ContinuityTrace> {
    let values = path
        .iter()
        .enumerate()
        .map(|(index, xi)| {
            setup
                .with_xi(xi.clone())
                .and_then(|s| s_exact(&s))
                .map_err(|e| Error::PathPoint { index, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;
    let jumps = values.windows(2).map(|w| (&w[1] - &w[0]).abs()).collect();
    Ok(ContinuityTrace { values, jumps })
}

/// Per-degree comparison for integral `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiRegularCheck {
    pub stats: Vec<DegreeStat>,
    pub s_exact: Rational,
    /// Richardson extrapolation of `S~_t` in `1/t`.
    pub s_tilde_limit: Rational,
    /// `n / (n + 1) * s_tilde_limit`.
    pub predicted_s: Rational,
    /// Leading coefficient of `N_t` extrapolated from cumulative counts.
    pub count_coefficient: Rational,
    /// `vol(xi) / (n - 1)!`.
    pub count_coefficient_expected: Rational,
    pub tolerance: Rational,
}

impl QuasiRegularCheck {
    pub fn relative_error(&self) -> Rational {
        relative_error(&self.predicted_s, &self.s_exact)
    }

    pub fn passes(&self) -> bool {
        self.relative_error() <= self.tolerance
    }

    pub fn count_relative_error(&self) -> Rational {
        relative_error(&self.count_coefficient, &self.count_coefficient_expected)
    }
}

/// `|a - b| / |b|`, or `|a|` when `b = 0`.
pub fn relative_error(a: &Rational, b: &Rational) -> Rational {
    let diff = (a - b).abs();
    if b.is_zero() {
        diff
    } else {
        diff / b.abs()
    }
}

pub fn quasi_regular_check(
    setup: &PolarizedToricSetup,
    t_max: u64,
    tolerance: &Rational,
) -> Result<QuasiRegularCheck> {
    let g = setup.graded()?;
    let stats = graded_degree_stats(&g, t_max)?;
    let n = setup.rank();
    let last_nonempty = |limit: u64| {
        stats.iter().rfind(|s| s.t <= limit && s.count > 0).cloned()
    };
    let top = last_nonempty(t_max).ok_or(Error::EmptyDegree(t_max))?;
    let half = last_nonempty(top.t / 2);
    let s_top = top.s_tilde().expect("nonempty");
    let s_tilde_limit = match &half {
        Some(h) if h.t > 0 && h.t < top.t => {
            let (t1, t2) = (Rational::from(top.t), Rational::from(h.t));
            (&t1 * &s_top - &t2 * h.s_tilde().expect("nonempty")) / (t1 - t2)
        }
        _ => s_top,
    };
    let predicted_s = Rational::from(n) / Rational::from(n + 1) * &s_tilde_limit;

    // cumulative counts C(T) = #(T Q) ~ vol(xi) T^n / n!
    let cumulative = |limit: u64| -> Rational {
        let c: u128 = 1 + stats.iter().filter(|s| s.t <= limit).map(|s| s.count).sum::<u128>();
        Rational::from(c) / Rational::from(limit).pow(n as u32)
    };
    let t2 = (t_max / 2).max(1);
    let a = if t2 < t_max {
        (Rational::from(t_max) * cumulative(t_max) - Rational::from(t2) * cumulative(t2))
            / Rational::from(t_max - t2)
    } else {
        cumulative(t_max)
    };
    let count_coefficient = a * Rational::from(n);
    let count_coefficient_expected = vol_xi(setup) / factorial(n - 1);
    Ok(QuasiRegularCheck {
        stats,
        s_exact: s_exact(setup)?,
        s_tilde_limit,
        predicted_s,
        count_coefficient,
        count_coefficient_expected,
        tolerance: tolerance.clone(),
    })
}

/// Helper for callers that only hold a sub-level polytope.
pub fn n_factorial_volume(q: &Polytope) -> Rational {
    factorial(q.rank()) * q.volume()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::AffineForm;

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_ints(x)
    }

    fn sigma(gens: &[&[i64]]) -> Cone {
        Cone::from_rays(Lattice::N, gens.iter().map(|g| v(g)).collect()).unwrap()
    }

    fn orthant(xi: &[i64]) -> PolarizedToricSetup {
        let n = xi.len();
        let rays: Vec<RationalVector> = (0..n).map(|i| RationalVector::unit(n, i)).collect();
        PolarizedToricSetup::new(Cone::from_rays(Lattice::N, rays).unwrap(), v(xi)).unwrap()
    }

    fn min2() -> PlConcave {
        PlConcave::new(vec![AffineForm::linear(v(&[1, 0])), AffineForm::linear(v(&[0, 1]))]).unwrap()
    }

    #[test]
    fn volumes() {
        assert_eq!(vol_xi(&orthant(&[1, 1, 1])), Rational::one());
        assert_eq!(vol_xi(&orthant(&[1, 2])), Rational::new(1, 2));
        let a1 = PolarizedToricSetup::new(sigma(&[&[1, 0], &[1, 2]]), v(&[1, 1])).unwrap();
        assert_eq!(vol_xi(&a1), Rational::from(2));
        assert_eq!(vol_by_triangulation(&a1).unwrap(), Rational::from(2));
        let quad = PolarizedToricSetup::new(sigma(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]), v(&[2, 3, 1]))
            .unwrap();
        assert_eq!(vol_xi(&quad), vol_by_triangulation(&quad).unwrap());
    }

    #[test]
    fn rejects_boundary_xi() {
        let s = sigma(&[&[1, 0], &[0, 1]]);
        assert!(matches!(PolarizedToricSetup::new(s, v(&[1, 0])), Err(Error::NotReeb { .. })));
    }

    #[test]
    fn derivative_examples() {
        let s = orthant(&[1, 1]).with_eta(v(&[0, 0])).unwrap();
        assert_eq!(d_vol(&s).unwrap(), Rational::zero());
        let s = orthant(&[1, 1]).with_eta(v(&[1, 0])).unwrap();
        assert_eq!(d_vol(&s).unwrap(), Rational::one());
        assert_eq!(energy_tc(&s).unwrap(), Rational::new(1, 3));
        let s = orthant(&[2, 3]).with_eta(v(&[2, 3])).unwrap();
        assert_eq!(d_vol(&s).unwrap(), Rational::from(2) * vol_xi(&s));
        assert_eq!(energy_tc(&s).unwrap(), Rational::new(2, 3));
        assert!(matches!(d_vol(&orthant(&[1, 1])), Err(Error::InvalidDirection(_))));
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let s = PolarizedToricSetup::new(sigma(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]), v(&[2, 3, 1]))
            .unwrap()
            .with_eta(RationalVector::new(vec![Rational::new(1, 2), Rational::from(-1), Rational::new(2, 3)]))
            .unwrap();
        let exact = d_vol(&s).unwrap();
        let eta = s.eta().unwrap().clone();
        let fd = |eps: Rational| {
            let minus = vol_at(&s, &s.xi().sub(&eta.scale(&eps))).unwrap();
            let plus = vol_at(&s, &s.xi().add(&eta.scale(&eps))).unwrap();
            (minus - plus) / (Rational::from(2) * eps)
        };
        let e3 = fd(Rational::new(1, 1000));
        let e4 = fd(Rational::new(1, 10000));
        // central differences converge quadratically
        let err3 = (&e3 - &exact).abs();
        let err4 = (&e4 - &exact).abs();
        assert!(err3 < Rational::new(1, 10000));
        assert!(&err4 * Rational::from(50) < err3);
        // one Richardson step removes the eps^2 term
        let rich = (Rational::from(100) * &e4 - &e3) / Rational::from(99);
        assert!((rich - &exact).abs() < err4);
    }

    #[test]
    fn s_examples() {
        let s = orthant(&[1, 1]).with_psi(PlConcave::linear(v(&[1, 0]))).unwrap();
        assert_eq!(s_exact(&s).unwrap(), Rational::new(1, 3));
        let s = orthant(&[1, 1]).with_psi(PlConcave::zero(2)).unwrap();
        assert_eq!(s_exact(&s).unwrap(), Rational::zero());
        let c = Rational::new(7, 3);
        let s = orthant(&[1, 1]).with_psi(min2().scale(&c)).unwrap();
        assert_eq!(s_exact(&s).unwrap(), Rational::new(1, 6) * c);
    }

    #[test]
    fn slice_energy() {
        let s = orthant(&[1, 1]).with_psi(PlConcave::linear(v(&[1, 0]))).unwrap();
        let e = energy_pxi(&s).unwrap();
        assert_eq!(e.volume_normalized, Rational::new(1, 6));
        assert_eq!(e.cone_normalized, Rational::new(1, 6));
        assert_eq!(s_exact(&s).unwrap() / e.volume_normalized, Rational::from(2));
        let z = orthant(&[1, 1]).with_psi(PlConcave::zero(2)).unwrap();
        let e = energy_pxi(&z).unwrap();
        assert_eq!((e.volume_normalized, e.cone_normalized), (Rational::zero(), Rational::zero()));
    }

    #[test]
    fn slice_integral_is_cone_scaled() {
        let s = PolarizedToricSetup::new(sigma(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]), v(&[3, 4, 2]))
            .unwrap()
            .with_psi(PlConcave::new(vec![
                AffineForm::linear(v(&[1, 0, 1])),
                AffineForm::linear(v(&[0, 2, 1])),
            ]).unwrap())
            .unwrap();
        let e = energy_pxi(&s).unwrap();
        let q = s.slice().unwrap().q;
        let h = s.psi().unwrap().homogenize();
        assert_eq!(e.slice_integral, Rational::from(4) * integrate_moment(&h, &q, 1).unwrap());
        assert_eq!(e.slice_mass, Rational::from(3) * q.volume());
    }

    #[test]
    fn homogeneity() {
        let s = orthant(&[1, 1]).with_psi(PlConcave::linear(v(&[1, 0]))).unwrap();
        let h = homogeneity_check(&s, &Rational::from(2)).unwrap();
        assert_eq!(h.s_scaled, Rational::new(1, 6));
        assert!(h.s_holds() && h.vol_holds(2));
        let a1 = PolarizedToricSetup::new(sigma(&[&[1, 0], &[1, 2]]), v(&[1, 1]))
            .unwrap()
            .with_psi(PlConcave::new(vec![AffineForm::linear(v(&[1, 1])), AffineForm::linear(v(&[1, 0]))]).unwrap())
            .unwrap();
        for c in [Rational::new(1, 3), Rational::from(5), Rational::new(7, 2)] {
            let h = homogeneity_check(&a1, &c).unwrap();
            assert!(h.s_holds() && h.vol_holds(2));
        }
    }

    #[test]
    fn continuity() {
        let s = orthant(&[1, 1]).with_psi(min2()).unwrap();
        let path = vec![
            RationalVector::new(vec![Rational::one(), Rational::new(14, 10)]),
            RationalVector::new(vec![Rational::one(), Rational::new(141, 100)]),
            RationalVector::new(vec![Rational::one(), Rational::new(1414, 1000)]),
        ];
        let trace = continuity_scan(&s, &path).unwrap();
        assert!(trace.jumps[1] < trace.jumps[0]);
        let constant = continuity_scan(&s, &[v(&[1, 2]), v(&[1, 2])]).unwrap();
        assert_eq!(constant.max_jump(), Rational::zero());
        let err = continuity_scan(&s, &[v(&[1, 2]), v(&[1, -1])]).unwrap_err();
        assert!(matches!(err, Error::PathPoint { index: 1, .. }));
    }

    #[test]
    fn quasi_regular_anchor() {
        let s = orthant(&[1, 1]).with_psi(PlConcave::linear(v(&[1, 0]))).unwrap();
        let q = quasi_regular_check(&s, 40, &Rational::new(1, 100)).unwrap();
        assert_eq!(q.s_tilde_limit, Rational::new(1, 2));
        assert_eq!(q.predicted_s, q.s_exact);
        assert!(q.passes());
        assert!(q.count_relative_error() < Rational::new(1, 20));
    }

    #[test]
    fn unimodular_transport() {
        let s = orthant(&[1, 2]).with_eta(v(&[1, 1])).unwrap().with_psi(min2()).unwrap();
        let a = RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        let t = s.transform(&a).unwrap();
        assert_eq!(vol_xi(&t), vol_xi(&s));
        assert_eq!(d_vol(&t).unwrap(), d_vol(&s).unwrap());
        assert_eq!(s_exact(&t).unwrap(), s_exact(&s).unwrap());
        assert_eq!(energy_pxi(&t).unwrap(), energy_pxi(&s).unwrap());
    }

    #[test]
    fn okounkov_route() {
        let a1 = PolarizedToricSetup::new(sigma(&[&[1, 0], &[1, 2]]), v(&[1, 1]))
            .unwrap()
            .with_psi(PlConcave::new(vec![AffineForm::linear(v(&[1, 1])), AffineForm::linear(v(&[1, 0]))]).unwrap())
            .unwrap();
        let basis = a1.okounkov_basis().expect("a 2-d cone contains a unimodular basis");
        assert_eq!(basis.det().unwrap(), Rational::one());
        let (s, vol) = s_on_body(&a1, &basis).unwrap();
        assert_eq!(s, s_exact(&a1).unwrap());
        assert_eq!(vol * Rational::from(2), vol_xi(&a1));
    }
}

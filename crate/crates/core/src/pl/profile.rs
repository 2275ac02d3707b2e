use std::fmt::Write as _;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::polyhedra::{Halfspace, Polytope};

use super::{cell_vertices, PlConcave};

/// Polynomial with coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial(pub Vec<Rational>);

impl Polynomial {
    pub fn eval(&self, t: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Polynomial {
        let mut coeffs = vec![Rational::zero(); points.len()];
        for (i, (xi, yi)) in points.iter().enumerate() {
            // basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
            let mut basis = vec![Rational::one()];
            let mut denom = Rational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![Rational::zero(); basis.len() + 1];
                for (d, c) in basis.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * xj;
                }
                basis = next;
                denom *= xi - xj;
            }
            let scale = yi / &denom;
            for (d, c) in basis.iter().enumerate() {
                coeffs[d] += c * &scale;
            }
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial(coeffs)
    }

    /// Multiplies by `t^j` and integrates over `[a, b]`.
    pub fn integrate_times_power(&self, j: usize, a: &Rational, b: &Rational) -> Rational {
        self.0
            .iter()
            .enumerate()
            .map(|(d, c)| {
                let e = (d + j + 1) as u32;
                c * (b.pow(e) - a.pow(e)) / Rational::from(e)
            })
            .sum()
    }
}

/// `t -> vol({u in delta : f(u) >= t})` as exact polynomial pieces.
///
/// Piece `k` is valid on `(breakpoints[k], breakpoints[k + 1]]`; the profile
/// equals `total` for `t <= 0` and vanishes beyond the last breakpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperlevelProfile {
    pub total: Rational,
    pub breakpoints: Vec<Rational>,
    pub pieces: Vec<Polynomial>,
}

impl SuperlevelProfile {
    /// Requires `delta` full-dimensional and `f >= 0` on it. Each piece is
    /// interpolated from exact slice volumes at `n + 1` interior points and
    /// confirmed at one more.
    pub fn compute(f: &PlConcave, delta: &Polytope) -> Result<SuperlevelProfile> {
        if !delta.is_full_dimensional() {
            return Err(Error::DegeneratePolytope { dim: delta.dimension(), rank: delta.rank() });
        }
        let n = delta.rank();
        let mut values: Vec<Rational> =
            cell_vertices(f, delta)?.iter().map(|u| f.value(u)).collect();
        if let Some(bad) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidFiltration(format!("negative value {bad} on the body")));
        }
        values.push(Rational::zero());
        values.sort();
        values.dedup();
        let mut pieces = Vec::with_capacity(values.len() - 1);
        for w in values.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let step = (b - a) / Rational::from(n + 3);
            let samples = (1..=n + 2)
                .map(|j| {
                    let t = a + &step * Rational::from(j);
                    let vol = superlevel_volume(f, delta, &t)?;
                    Ok((t, vol))
                })
                .collect::<Result<Vec<_>>>()?;
            let poly = Polynomial::interpolate(&samples[..n + 1]);
            let (tc, vc) = &samples[n + 1];
            if poly.eval(tc) != *vc {
                return Err(Error::Internal(format!(
                    "superlevel volume is not polynomial on ({a}, {b}]"
                )));
            }
            pieces.push(poly);
        }
        Ok(SuperlevelProfile { total: delta.volume(), breakpoints: values, pieces })
    }

    fn piece_index(&self, t: &Rational, right: bool) -> Option<usize> {
        (0..self.pieces.len()).find(|&k| {
            let (a, b) = (&self.breakpoints[k], &self.breakpoints[k + 1]);
            if right {
                a <= t && t < b
            } else {
                a < t && t <= b
            }
        })
    }

    /// `vol({f >= t})`.
    pub fn value(&self, t: &Rational) -> Rational {
        if !t.is_positive() {
            return self.total.clone();
        }
        match self.piece_index(t, false) {
            Some(k) => self.pieces[k].eval(t),
            None => Rational::zero(),
        }
    }

    /// `vol({f > t})`, the right limit of [`SuperlevelProfile::value`].
    pub fn value_after(&self, t: &Rational) -> Rational {
        if t.is_negative() {
            return self.total.clone();
        }
        match self.piece_index(t, true) {
            Some(k) => self.pieces[k].eval(t),
            None => Rational::zero(),
        }
    }

    /// Distribution function of the pushforward of Lebesgue measure by `f`:
    /// `vol({f <= t})`.
    pub fn cdf(&self, t: &Rational) -> Rational {
        if t.is_negative() {
            Rational::zero()
        } else {
            &self.total - self.value_after(t)
        }
    }

    /// Largest value of `f`.
    pub fn top(&self) -> Rational {
        self.breakpoints.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// `int_0^inf profile(t) dt`, which equals `int f`.
    pub fn integral(&self) -> Rational {
        self.moment(1)
    }

    /// `int f^k = int_0^inf k t^(k-1) profile(t) dt` for `k >= 1`, and the
    /// total volume for `k = 0`.
    pub fn moment(&self, k: u32) -> Rational {
        if k == 0 {
            return self.total.clone();
        }
        let j = k as usize - 1;
        let sum: Rational = self
            .pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, w)| p.integrate_times_power(j, &w[0], &w[1]))
            .sum();
        sum * Rational::from(k)
    }

    /// One row per piece: `t_from,t_to,c0,...,cn`.
    pub fn to_csv(&self) -> String {
        let width = self.pieces.iter().map(|p| p.0.len()).max().unwrap_or(1);
        let mut out = String::from("t_from,t_to");
        for d in 0..width {
            let _ = write!(out, ",c{d}");
        }
        out.push('\n');
        for (p, w) in self.pieces.iter().zip(self.breakpoints.windows(2)) {
            let _ = write!(out, "{},{}", w[0], w[1]);
            for d in 0..width {
                let c = p.0.get(d).cloned().unwrap_or_else(Rational::zero);
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }
}

/// `vol({u in delta : f(u) >= t})` for `t > 0`.
fn superlevel_volume(f: &PlConcave, delta: &Polytope, t: &Rational) -> Result<Rational> {
    let extra: Vec<Halfspace> = f
        .branches()
        .iter()
        .map(|b| Halfspace::at_least(&b.linear, &(t - &b.constant)))
        .collect();
    match delta.intersect(&extra) {
        Ok(p) => Ok(p.volume()),
        Err(Error::Empty) => Ok(Rational::zero()),
        Err(e) => Err(e),
    }
}

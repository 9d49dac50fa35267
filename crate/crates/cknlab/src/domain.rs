//! Parameter and function types: CKN parameter tuples, regime
//! classification, radial weights and vector fields, monomial weights,
//! the built-in test-function families, and the integrability and
//! stability-hypothesis validators.

use crate::error::CknError;
use crate::Result;
use serde::{Deserialize, Serialize};

/// The tuple (N, p, a, b) behind every weighted Hardy/CKN statement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CknParams {
    #[serde(rename = "N")]
    pub n: u32,
    pub p: f64,
    pub a: f64,
    pub b: f64,
}

impl CknParams {
    pub fn new(n: u32, p: f64, a: f64, b: f64) -> Result<Self> {
        let params = CknParams { n, p, a, b };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(CknError::InvalidParameter("N must be >= 1".into()));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(CknError::InvalidParameter(format!("p must be > 1, got {}", self.p)));
        }
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(CknError::InvalidParameter("a, b must be finite".into()));
        }
        Ok(())
    }

    /// Derived exponent σ = (p-1)a + b + 1 (the weight of the linear term).
    pub fn sigma(&self) -> f64 {
        (self.p - 1.0) * self.a + self.b + 1.0
    }

    /// Derived gap g = b + 1 - a; its sign selects the exponential direction.
    pub fn gap(&self) -> f64 {
        self.b + 1.0 - self.a
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeTag {
    R1,
    R2,
    R3,
    R4,
    #[serde(rename = "DEGENERATE")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremizerKind {
    PlainExp,
    PowerExp,
}

/// Classification outcome: regime tag, sharp constant, extremizer family.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    pub sharp_constant: f64,
    pub extremizer_kind: ExtremizerKind,
}

/// Classifies (N, p, a, b) into a regime and returns the sharp constant
/// and extremizer family. Total: every valid parameter tuple maps to
/// exactly one tag; g = 0 or a vanishing constant yields DEGENERATE.
///
/// Boundary ties (b exactly on the dividing line) resolve to the
/// plain-exponential regime; the two constants coincide there.
pub fn classify_regime(params: &CknParams) -> Regime {
    let n = params.nf();
    let (p, a, b) = (params.p, params.a, params.b);
    let g = params.gap();
    let b_star = (n - p) / p;

    let plain = g > 0.0 && b <= b_star || g < 0.0 && b >= b_star;
    let tag = if g == 0.0 {
        RegimeTag::Degenerate
    } else if g > 0.0 {
        if b <= b_star { RegimeTag::R1 } else { RegimeTag::R4 }
    } else if b >= b_star {
        RegimeTag::R2
    } else {
        RegimeTag::R3
    };

    let sharp_constant = if p == 2.0 {
        match tag {
            RegimeTag::R3 | RegimeTag::R4 => (n - 3.0 * b + a - 3.0).abs() / 2.0,
            _ => (n - a - b - 1.0).abs() / 2.0,
        }
    } else {
        (n - 1.0 - (p - 1.0) * a - b).abs() / p
    };

    let tag = if sharp_constant == 0.0 { RegimeTag::Degenerate } else { tag };
    Regime {
        tag,
        sharp_constant,
        extremizer_kind: if plain || g == 0.0 { ExtremizerKind::PlainExp } else { ExtremizerKind::PowerExp },
    }
}

/// Sharp constant for the general-p product inequality, |N-1-(p-1)a-b|/p.
pub fn general_p_constant(params: &CknParams) -> f64 {
    (params.nf() - 1.0 - (params.p - 1.0) * params.a - params.b).abs() / params.p
}

// ---------------------------------------------------------------------------
// Radial weights
// ---------------------------------------------------------------------------

fn one() -> f64 {
    1.0
}

/// A radial weight w(r): power law, exponentially tilted power, a linear
/// combination of those, or a tabulated grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "weight", rename_all = "snake_case")]
pub enum WeightSpec {
    /// coef · r^gamma
    Power {
        #[serde(default = "one")]
        coef: f64,
        gamma: f64,
    },
    /// coef · r^gamma · exp(s · r^m)
    Tilted {
        #[serde(default = "one")]
        coef: f64,
        gamma: f64,
        s: f64,
        m: f64,
    },
    Sum { terms: Vec<WeightSpec> },
    /// Values on an ascending grid; evaluated by monotone cubic interpolation.
    Tabulated { grid: Vec<f64>, values: Vec<f64> },
}

impl WeightSpec {
    pub fn one() -> Self {
        WeightSpec::Power { coef: 1.0, gamma: 0.0 }
    }

    pub fn power(gamma: f64) -> Self {
        WeightSpec::Power { coef: 1.0, gamma }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            WeightSpec::Power { coef, gamma } => coef * r.powf(*gamma),
            WeightSpec::Tilted { coef, gamma, s, m } => coef * r.powf(*gamma) * (s * r.powf(*m)).exp(),
            WeightSpec::Sum { terms } => terms.iter().map(|t| t.eval(r)).sum(),
            WeightSpec::Tabulated { grid, values } => interp_cubic(grid, values, r),
        }
    }

    pub fn deriv(&self, r: f64) -> f64 {
        match self {
            WeightSpec::Power { coef, gamma } => coef * gamma * r.powf(gamma - 1.0),
            WeightSpec::Tilted { coef, gamma, s, m } => {
                coef * r.powf(*gamma) * (s * r.powf(*m)).exp() * (gamma / r + s * m * r.powf(m - 1.0))
            }
            WeightSpec::Sum { terms } => terms.iter().map(|t| t.deriv(r)).sum(),
            WeightSpec::Tabulated { grid, values } => {
                let h = r * 1e-6;
                (interp_cubic(grid, values, r + h) - interp_cubic(grid, values, r - h)) / (2.0 * h)
            }
        }
    }

    /// Multiplies the weight by a scalar, preserving closed forms.
    pub fn scale(&self, c: f64) -> WeightSpec {
        match self {
            WeightSpec::Power { coef, gamma } => WeightSpec::Power { coef: c * coef, gamma: *gamma },
            WeightSpec::Tilted { coef, gamma, s, m } => {
                WeightSpec::Tilted { coef: c * coef, gamma: *gamma, s: *s, m: *m }
            }
            WeightSpec::Sum { terms } => WeightSpec::Sum { terms: terms.iter().map(|t| t.scale(c)).collect() },
            WeightSpec::Tabulated { grid, values } => WeightSpec::Tabulated {
                grid: grid.clone(),
                values: values.iter().map(|v| c * v).collect(),
            },
        }
    }

    /// Power exponent of the weight as r → 0 (dominant term).
    pub fn zero_exponent(&self) -> f64 {
        match self {
            WeightSpec::Power { gamma, .. } => *gamma,
            WeightSpec::Tilted { gamma, m, .. } => {
                debug_assert!(*m > 0.0);
                *gamma
            }
            WeightSpec::Sum { terms } => terms.iter().map(|t| t.zero_exponent()).fold(f64::INFINITY, f64::min),
            WeightSpec::Tabulated { .. } => 0.0,
        }
    }

    /// Dominant behavior of the weight as r → ∞ (slowest-decaying term for
    /// sums). A positive tilt reports exponential growth via a negative q;
    /// callers must end up with net decay after combining with the profile.
    pub fn tail_behavior(&self) -> TailBehavior {
        match self {
            WeightSpec::Power { gamma, .. } => TailBehavior::Power(*gamma),
            WeightSpec::Tilted { gamma, s, m, .. } => TailBehavior::Exp { q: -s, m: *m, power: *gamma },
            WeightSpec::Sum { terms } => terms
                .iter()
                .map(|t| t.tail_behavior())
                .reduce(|a, b| match (a, b) {
                    (TailBehavior::Power(k1), TailBehavior::Power(k2)) => TailBehavior::Power(k1.max(k2)),
                    (TailBehavior::Power(k), _) | (_, TailBehavior::Power(k)) => TailBehavior::Power(k),
                    (TailBehavior::Exp { q, m, power }, TailBehavior::Exp { q: q2, m: m2, power: p2 }) => {
                        if (m - m2).abs() < 1e-12 {
                            TailBehavior::Exp { q: q.min(q2), m, power: power.max(p2) }
                        } else if m < m2 {
                            TailBehavior::Exp { q, m, power }
                        } else {
                            TailBehavior::Exp { q: q2, m: m2, power: p2 }
                        }
                    }
                    (t, _) => t,
                })
                .unwrap_or(TailBehavior::Power(0.0)),
            WeightSpec::Tabulated { .. } => TailBehavior::Power(0.0),
        }
    }
}

/// Catmull-Rom style cubic interpolation on an ascending grid; clamps
/// outside the grid range.
fn interp_cubic(grid: &[f64], values: &[f64], r: f64) -> f64 {
    let n = grid.len();
    if n == 0 {
        return 0.0;
    }
    if n == 1 || r <= grid[0] {
        return values[0];
    }
    if r >= grid[n - 1] {
        return values[n - 1];
    }
    let i = match grid.binary_search_by(|x| x.total_cmp(&r)) {
        Ok(i) => i,
        Err(i) => i - 1,
    };
    let i2 = (i + 1).min(n - 1);
    let (x1, x2) = (grid[i], grid[i2]);
    if x2 == x1 {
        return values[i];
    }
    let h = x2 - x1;
    // centered-difference slopes, one-sided at the grid ends
    let slope_at = |j: usize| -> f64 {
        if j == 0 {
            (values[1] - values[0]) / (grid[1] - grid[0])
        } else if j == n - 1 {
            (values[n - 1] - values[n - 2]) / (grid[n - 1] - grid[n - 2])
        } else {
            (values[j + 1] - values[j - 1]) / (grid[j + 1] - grid[j - 1])
        }
    };
    let (y1, y2) = (values[i], values[i2]);
    let (d1, d2) = (slope_at(i), slope_at(i2));
    let t = (r - x1) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    y1 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + d1 * h * (t3 - 2.0 * t2 + t)
        + y2 * (-2.0 * t3 + 3.0 * t2)
        + d2 * h * (t3 - t2)
}

// ---------------------------------------------------------------------------
// Radial vector fields
// ---------------------------------------------------------------------------

/// A radial vector field X(x) = X_r(|x|)·x/|x| with X_r a signed sum of
/// power terms Σ c_i r^{e_i}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialField {
    pub terms: Vec<(f64, f64)>,
}

impl RadialField {
    pub fn single(coef: f64, exponent: f64) -> Self {
        RadialField { terms: vec![(coef, exponent)] }
    }

    pub fn zero() -> Self {
        RadialField { terms: vec![] }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.terms.iter().map(|(c, e)| c * r.powf(*e)).sum()
    }

    fn eval_deriv(&self, r: f64) -> f64 {
        self.terms.iter().map(|(c, e)| c * e * r.powf(e - 1.0)).sum()
    }

    /// div(A·|X|^{p-2}X) at radius r for effective dimension n_eff:
    /// G'(r) + (n_eff - 1)·G(r)/r with G = A·|X_r|^{p-2}X_r.
    ///
    /// Closed form when p = 2 or X has a single power term; otherwise a
    /// 4th-order central finite difference of G with step r·1e-5.
    pub fn flux_divergence(&self, weight: &WeightSpec, p: f64, n_eff: f64, r: f64) -> f64 {
        let closed = p == 2.0 || self.terms.len() <= 1;
        if closed {
            let (x, xp) = (self.eval(r), self.eval_deriv(r));
            let (gval, gp) = if p == 2.0 {
                (weight.eval(r) * x, weight.deriv(r) * x + weight.eval(r) * xp)
            } else if let Some((c, e)) = self.terms.first() {
                let ct = c.signum() * c.abs().powf(p - 1.0);
                let et = e * (p - 1.0);
                let gv = weight.eval(r) * ct * r.powf(et);
                (gv, weight.deriv(r) * ct * r.powf(et) + weight.eval(r) * ct * et * r.powf(et - 1.0))
            } else {
                (0.0, 0.0)
            };
            gp + (n_eff - 1.0) * gval / r
        } else {
            let flux = |rr: f64| {
                let x = self.eval(rr);
                weight.eval(rr) * x.abs().powf(p - 2.0) * x
            };
            let h = r * 1e-5;
            let gp = (-flux(r + 2.0 * h) + 8.0 * flux(r + h) - 8.0 * flux(r - h) + flux(r - 2.0 * h)) / (12.0 * h);
            gp + (n_eff - 1.0) * flux(r) / r
        }
    }

    /// Same divergence forced through the finite-difference path; kept as an
    /// independent cross-check of the closed form.
    pub fn flux_divergence_fd(&self, weight: &WeightSpec, p: f64, n_eff: f64, r: f64) -> f64 {
        let flux = |rr: f64| {
            let x = self.eval(rr);
            weight.eval(rr) * x.abs().powf(p - 2.0) * x
        };
        let h = r * 1e-5;
        let gp = (-flux(r + 2.0 * h) + 8.0 * flux(r + h) - 8.0 * flux(r - h) + flux(r - 2.0 * h)) / (12.0 * h);
        gp + (n_eff - 1.0) * flux(r) / r
    }
}

// ---------------------------------------------------------------------------
// Monomial weights
// ---------------------------------------------------------------------------

/// x^P = |x_1|^{P_1}···|x_N|^{P_N}; radial reduction gains |P| dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialWeight(pub Vec<f64>);

impl MonomialWeight {
    pub fn new(p_vec: Vec<f64>) -> Result<Self> {
        if p_vec.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(CknError::InvalidParameter("monomial exponents must be >= 0".into()));
        }
        Ok(MonomialWeight(p_vec))
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn n_eff(&self, n: u32) -> f64 {
        n as f64 + self.total()
    }

    /// Effective-dimension admissibility for CKN-type use.
    pub fn check_ckn(&self, params: &CknParams) -> Result<()> {
        let ne = self.n_eff(params.n);
        if ne <= params.p * params.b {
            return Err(CknError::Regime(format!(
                "effective dimension {ne} must exceed p·b = {}",
                params.p * params.b
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Radial profiles
// ---------------------------------------------------------------------------

/// Support interval of a profile.
#[derive(Debug, Clone, Copy)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

/// Behavior of a profile near r = 0.
#[derive(Debug, Clone, Copy)]
pub enum ZeroBehavior {
    /// f ~ C·r^k
    Power(f64),
    /// vanishes faster than any power
    SuperDecay,
}

/// Behavior of a profile as r → ∞.
#[derive(Debug, Clone, Copy)]
pub enum TailBehavior {
    Compact(f64),
    /// f ~ C·r^power·exp(-q·r^m)
    Exp { q: f64, m: f64, power: f64 },
    /// f ~ C·r^power
    Power(f64),
}

/// An evaluable radial test function with analytic first and second
/// derivatives and declared endpoint behavior.
#[derive(Debug, Clone)]
pub enum RadialProfile {
    /// exp(-1/((r-lo)(hi-r))) on (lo, hi), zero outside.
    Bump { lo: f64, hi: f64 },
    /// r^kappa · exp(tau·r^g/g); covers power laws (tau = 0), Gaussian-type
    /// profiles and every regime extremizer.
    PowerExp { kappa: f64, tau: f64, g: f64 },
    Product(Box<RadialProfile>, Box<RadialProfile>),
    /// base·(1 + eps·bump)
    Perturbed { base: Box<RadialProfile>, eps: f64, lo: f64, hi: f64 },
    /// t·f(r)
    Scaled { t: f64, inner: Box<RadialProfile> },
    /// f(s·r)
    Dilated { s: f64, inner: Box<RadialProfile> },
    /// f(r) + c (Poincaré shift tests; stripped algebraically where the
    /// shift provably cancels)
    Shifted { c: f64, inner: Box<RadialProfile> },
    /// Grid solution with stored derivatives (Hermite interpolation).
    Tabulated { grid: Vec<f64>, values: Vec<f64>, derivs: Vec<f64> },
}

fn bump_parts(lo: f64, hi: f64, r: f64) -> Option<(f64, f64, f64)> {
    if r <= lo || r >= hi {
        return None;
    }
    let pp = (r - lo) * (hi - r);
    Some((pp, lo + hi - 2.0 * r, -2.0))
}

impl RadialProfile {
    pub fn bump(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 < lo && lo < hi && hi.is_finite()) {
            return Err(CknError::InvalidParameter(format!("bump needs 0 < lo < hi < inf, got [{lo}, {hi}]")));
        }
        Ok(RadialProfile::Bump { lo, hi })
    }

    /// f(r) = r^s·exp(-q·r^m)
    pub fn gauss_power(s: f64, q: f64, m: f64) -> Result<Self> {
        if !(q > 0.0 && m > 0.0) {
            return Err(CknError::InvalidParameter("gauss_power needs q > 0, m > 0".into()));
        }
        Ok(RadialProfile::PowerExp { kappa: s, tau: -q * m, g: m })
    }

    /// f(r) = r^kappa·exp(tau·r^g/g); tau and g must have opposite signs
    /// (or tau = 0) so the profile stays bounded at the singular end.
    pub fn power_exp(kappa: f64, tau: f64, g: f64) -> Result<Self> {
        if tau != 0.0 && !(tau * g < 0.0) {
            return Err(CknError::InvalidParameter(format!(
                "power_exp needs tau·g < 0 for boundedness, got tau={tau}, g={g}"
            )));
        }
        if tau != 0.0 && g == 0.0 {
            return Err(CknError::InvalidParameter("power_exp needs g != 0".into()));
        }
        Ok(RadialProfile::PowerExp { kappa, tau, g })
    }

    /// The regime extremizer for (N, p, a, b) at rate beta > 0.
    pub fn extremizer(params: &CknParams, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(CknError::InvalidParameter("beta must be > 0".into()));
        }
        let regime = classify_regime(params);
        if regime.tag == RegimeTag::Degenerate {
            return Err(CknError::Regime("degenerate parameters admit no extremizer".into()));
        }
        let g = params.gap();
        let kappa = match regime.extremizer_kind {
            ExtremizerKind::PlainExp => 0.0,
            ExtremizerKind::PowerExp => 2.0 * params.b + 2.0 - params.nf(),
        };
        // decaying direction: exp(-beta·r^g/g) for g > 0, exp(+beta·r^g/g) for g < 0
        let tau = -beta * g.signum();
        Self::power_exp(kappa, tau, g)
    }

    /// extremizer·(1 + eps·bump(lo, hi))
    pub fn perturbed_extremizer(params: &CknParams, beta: f64, eps: f64, lo: f64, hi: f64) -> Result<Self> {
        let base = Self::extremizer(params, beta)?;
        if !(0.0 < lo && lo < hi && hi.is_finite()) {
            return Err(CknError::InvalidParameter("perturbation bump needs 0 < lo < hi < inf".into()));
        }
        Ok(RadialProfile::Perturbed { base: Box::new(base), eps, lo, hi })
    }

    pub fn scaled(self, t: f64) -> Self {
        RadialProfile::Scaled { t, inner: Box::new(self) }
    }

    pub fn dilated(self, s: f64) -> Self {
        RadialProfile::Dilated { s, inner: Box::new(self) }
    }

    pub fn shifted(self, c: f64) -> Self {
        RadialProfile::Shifted { c, inner: Box::new(self) }
    }

    pub fn product(a: RadialProfile, b: RadialProfile) -> Self {
        RadialProfile::Product(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Bump { lo, hi } => match bump_parts(*lo, *hi, r) {
                Some((pp, _, _)) => (-1.0 / pp).exp(),
                None => 0.0,
            },
            RadialProfile::PowerExp { kappa, tau, g } => {
                let e = if *tau == 0.0 { 0.0 } else { tau * r.powf(*g) / g };
                r.powf(*kappa) * e.exp()
            }
            RadialProfile::Product(f1, f2) => f1.eval(r) * f2.eval(r),
            RadialProfile::Perturbed { base, eps, lo, hi } => {
                let b = match bump_parts(*lo, *hi, r) {
                    Some((pp, _, _)) => (-1.0 / pp).exp(),
                    None => 0.0,
                };
                base.eval(r) * (1.0 + eps * b)
            }
            RadialProfile::Scaled { t, inner } => t * inner.eval(r),
            RadialProfile::Dilated { s, inner } => inner.eval(s * r),
            RadialProfile::Shifted { c, inner } => inner.eval(r) + c,
            RadialProfile::Tabulated { grid, values, derivs } => hermite(grid, values, derivs, r).0,
        }
    }

    pub fn deriv(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Bump { lo, hi } => match bump_parts(*lo, *hi, r) {
                Some((pp, dp, _)) => (-1.0 / pp).exp() * dp / (pp * pp),
                None => 0.0,
            },
            RadialProfile::PowerExp { kappa, tau, g } => {
                let l = kappa / r + if *tau == 0.0 { 0.0 } else { tau * r.powf(g - 1.0) };
                self.eval(r) * l
            }
            RadialProfile::Product(f1, f2) => f1.deriv(r) * f2.eval(r) + f1.eval(r) * f2.deriv(r),
            RadialProfile::Perturbed { base, eps, lo, hi } => {
                let (b, db) = match bump_parts(*lo, *hi, r) {
                    Some((pp, dp, _)) => {
                        let v = (-1.0 / pp).exp();
                        (v, v * dp / (pp * pp))
                    }
                    None => (0.0, 0.0),
                };
                base.deriv(r) * (1.0 + eps * b) + base.eval(r) * eps * db
            }
            RadialProfile::Scaled { t, inner } => t * inner.deriv(r),
            RadialProfile::Dilated { s, inner } => s * inner.deriv(s * r),
            RadialProfile::Shifted { inner, .. } => inner.deriv(r),
            RadialProfile::Tabulated { grid, values, derivs } => hermite(grid, values, derivs, r).1,
        }
    }

    pub fn deriv2(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Bump { lo, hi } => match bump_parts(*lo, *hi, r) {
                Some((pp, dp, ddp)) => {
                    let v = (-1.0 / pp).exp();
                    let l = dp / (pp * pp);
                    v * (l * l + ddp / (pp * pp) - 2.0 * dp * dp / (pp * pp * pp))
                }
                None => 0.0,
            },
            RadialProfile::PowerExp { kappa, tau, g } => {
                let tpow = if *tau == 0.0 { 0.0 } else { tau * r.powf(g - 1.0) };
                let l = kappa / r + tpow;
                let lp = -kappa / (r * r) + if *tau == 0.0 { 0.0 } else { tau * (g - 1.0) * r.powf(g - 2.0) };
                self.eval(r) * (l * l + lp)
            }
            RadialProfile::Product(f1, f2) => {
                f1.deriv2(r) * f2.eval(r) + 2.0 * f1.deriv(r) * f2.deriv(r) + f1.eval(r) * f2.deriv2(r)
            }
            RadialProfile::Perturbed { base, eps, lo, hi } => {
                let (b, db, ddb) = match bump_parts(*lo, *hi, r) {
                    Some((pp, dp, ddp)) => {
                        let v = (-1.0 / pp).exp();
                        let l = dp / (pp * pp);
                        (v, v * l, v * (l * l + ddp / (pp * pp) - 2.0 * dp * dp / (pp * pp * pp)))
                    }
                    None => (0.0, 0.0, 0.0),
                };
                base.deriv2(r) * (1.0 + eps * b) + 2.0 * base.deriv(r) * eps * db + base.eval(r) * eps * ddb
            }
            RadialProfile::Scaled { t, inner } => t * inner.deriv2(r),
            RadialProfile::Dilated { s, inner } => s * s * inner.deriv2(s * r),
            RadialProfile::Shifted { inner, .. } => inner.deriv2(r),
            RadialProfile::Tabulated { grid, values, derivs } => {
                let h = r * 1e-5;
                (hermite(grid, values, derivs, r + h).1 - hermite(grid, values, derivs, r - h).1) / (2.0 * h)
            }
        }
    }

    pub fn support(&self) -> Support {
        match self {
            RadialProfile::Bump { lo, hi } => Support { lo: *lo, hi: *hi },
            RadialProfile::PowerExp { .. } => Support { lo: 0.0, hi: f64::INFINITY },
            RadialProfile::Product(f1, f2) => {
                let (s1, s2) = (f1.support(), f2.support());
                Support { lo: s1.lo.max(s2.lo), hi: s1.hi.min(s2.hi) }
            }
            RadialProfile::Perturbed { base, .. } => base.support(),
            RadialProfile::Scaled { inner, .. } => inner.support(),
            RadialProfile::Dilated { s, inner } => {
                let sp = inner.support();
                Support { lo: sp.lo / s, hi: sp.hi / s }
            }
            RadialProfile::Shifted { .. } => Support { lo: 0.0, hi: f64::INFINITY },
            RadialProfile::Tabulated { grid, .. } => Support {
                lo: *grid.first().unwrap_or(&0.0),
                hi: *grid.last().unwrap_or(&f64::INFINITY),
            },
        }
    }

    /// Behavior of f as r → 0 (only meaningful when the support touches 0).
    pub fn zero_behavior(&self) -> ZeroBehavior {
        match self {
            RadialProfile::Bump { .. } => ZeroBehavior::Power(0.0),
            RadialProfile::PowerExp { kappa, tau, g } => {
                if *tau != 0.0 && *g < 0.0 {
                    ZeroBehavior::SuperDecay
                } else {
                    ZeroBehavior::Power(*kappa)
                }
            }
            RadialProfile::Product(f1, f2) => match (f1.zero_behavior(), f2.zero_behavior()) {
                (ZeroBehavior::Power(k1), ZeroBehavior::Power(k2)) => ZeroBehavior::Power(k1 + k2),
                _ => ZeroBehavior::SuperDecay,
            },
            RadialProfile::Perturbed { base, .. } => base.zero_behavior(),
            RadialProfile::Scaled { inner, .. } => inner.zero_behavior(),
            RadialProfile::Dilated { inner, .. } => inner.zero_behavior(),
            RadialProfile::Shifted { .. } => ZeroBehavior::Power(0.0),
            RadialProfile::Tabulated { .. } => ZeroBehavior::Power(0.0),
        }
    }

    /// Behavior of f' as r → 0.
    pub fn zero_behavior_deriv(&self) -> ZeroBehavior {
        match self {
            RadialProfile::Bump { .. } => ZeroBehavior::Power(0.0),
            RadialProfile::PowerExp { kappa, tau, g } => {
                if *tau != 0.0 && *g < 0.0 {
                    ZeroBehavior::SuperDecay
                } else if *kappa != 0.0 {
                    ZeroBehavior::Power(kappa - 1.0)
                } else if *tau != 0.0 {
                    ZeroBehavior::Power(g - 1.0)
                } else {
                    ZeroBehavior::Power(0.0)
                }
            }
            RadialProfile::Product(f1, f2) => {
                let k = |z: ZeroBehavior| match z {
                    ZeroBehavior::Power(k) => Some(k),
                    ZeroBehavior::SuperDecay => None,
                };
                match (
                    k(f1.zero_behavior_deriv()),
                    k(f2.zero_behavior()),
                    k(f1.zero_behavior()),
                    k(f2.zero_behavior_deriv()),
                ) {
                    (Some(a1), Some(b1), Some(a2), Some(b2)) => ZeroBehavior::Power((a1 + b1).min(a2 + b2)),
                    _ => ZeroBehavior::SuperDecay,
                }
            }
            RadialProfile::Perturbed { base, .. } => base.zero_behavior_deriv(),
            RadialProfile::Scaled { inner, .. } => inner.zero_behavior_deriv(),
            RadialProfile::Dilated { inner, .. } => inner.zero_behavior_deriv(),
            RadialProfile::Shifted { inner, .. } => inner.zero_behavior_deriv(),
            RadialProfile::Tabulated { .. } => ZeroBehavior::Power(0.0),
        }
    }

    /// Behavior of f as r → ∞.
    pub fn tail(&self) -> TailBehavior {
        match self {
            RadialProfile::Bump { hi, .. } => TailBehavior::Compact(*hi),
            RadialProfile::PowerExp { kappa, tau, g } => {
                if *tau != 0.0 && *g > 0.0 {
                    TailBehavior::Exp { q: -tau / g, m: *g, power: *kappa }
                } else {
                    TailBehavior::Power(*kappa)
                }
            }
            RadialProfile::Product(f1, f2) => combine_tails(f1.tail(), f2.tail()),
            RadialProfile::Perturbed { base, .. } => base.tail(),
            RadialProfile::Scaled { inner, .. } => inner.tail(),
            RadialProfile::Dilated { s, inner } => match inner.tail() {
                TailBehavior::Compact(hi) => TailBehavior::Compact(hi / s),
                TailBehavior::Exp { q, m, power } => TailBehavior::Exp { q: q * s.powf(m), m, power },
                TailBehavior::Power(k) => TailBehavior::Power(k),
            },
            RadialProfile::Shifted { .. } => TailBehavior::Power(0.0),
            RadialProfile::Tabulated { grid, .. } => TailBehavior::Compact(*grid.last().unwrap_or(&1.0)),
        }
    }

    /// Behavior of f' as r → ∞.
    pub fn tail_deriv(&self) -> TailBehavior {
        match self {
            RadialProfile::PowerExp { kappa, tau, g } => {
                if *tau != 0.0 && *g > 0.0 {
                    TailBehavior::Exp { q: -tau / g, m: *g, power: kappa + g - 1.0 }
                } else if *tau != 0.0 {
                    // f' = f·(kappa/r + tau·r^{g-1}), g < 0
                    let k = if *kappa != 0.0 { kappa - 1.0 } else { g - 1.0 };
                    TailBehavior::Power(k.max(kappa + g - 1.0))
                } else {
                    TailBehavior::Power(kappa - 1.0)
                }
            }
            RadialProfile::Product(f1, f2) => combine_tails(
                combine_tails(f1.tail_deriv(), f2.tail()),
                combine_tails(f1.tail(), f2.tail_deriv()),
            ),
            RadialProfile::Perturbed { base, .. } => base.tail_deriv(),
            RadialProfile::Scaled { inner, .. } => inner.tail_deriv(),
            RadialProfile::Dilated { s, inner } => match inner.tail_deriv() {
                TailBehavior::Compact(hi) => TailBehavior::Compact(hi / s),
                TailBehavior::Exp { q, m, power } => TailBehavior::Exp { q: q * s.powf(m), m, power },
                TailBehavior::Power(k) => TailBehavior::Power(k),
            },
            RadialProfile::Shifted { inner, .. } => inner.tail_deriv(),
            other => other.tail(),
        }
    }

    /// A radius where the profile carries mass; used to anchor truncation.
    pub fn anchor(&self) -> f64 {
        match self {
            RadialProfile::Bump { lo, hi } => 0.5 * (lo + hi),
            RadialProfile::PowerExp { kappa, tau, g } => {
                if *tau == 0.0 {
                    1.0
                } else if *g > 0.0 {
                    let decay = (g / tau.abs()).powf(1.0 / g);
                    let peak = if *kappa > 0.0 { (kappa / tau.abs()).powf(1.0 / g) } else { 0.0 };
                    decay.max(peak).max(1e-2)
                } else {
                    let onset = (tau.abs() / -g).powf(-1.0 / g);
                    (2.0 * onset).max(1.0)
                }
            }
            RadialProfile::Product(f1, f2) => {
                let sp = self.support();
                let a = f1.anchor().max(f2.anchor());
                if sp.hi.is_finite() {
                    a.min(0.5 * (sp.lo + sp.hi))
                } else {
                    a
                }
            }
            RadialProfile::Perturbed { base, .. } => base.anchor(),
            RadialProfile::Scaled { inner, .. } => inner.anchor(),
            RadialProfile::Dilated { s, inner } => inner.anchor() / s,
            RadialProfile::Shifted { inner, .. } => inner.anchor(),
            RadialProfile::Tabulated { grid, .. } => {
                (grid.first().unwrap_or(&1.0) * grid.last().unwrap_or(&1.0)).sqrt()
            }
        }
    }

    /// Drops an outer additive shift; the remaining profile plus the shift
    /// amount. Used where a constant provably cancels.
    pub fn strip_shift(&self) -> (&RadialProfile, f64) {
        match self {
            RadialProfile::Shifted { c, inner } => {
                let (p, c2) = inner.strip_shift();
                (p, c + c2)
            }
            other => (other, 0.0),
        }
    }

    /// Closed-form (kappa, tau, g) when the profile is a pure power-exp
    /// form up to scaling; scaling cancels wherever this is consumed.
    pub fn as_power_exp(&self) -> Option<(f64, f64, f64)> {
        match self {
            RadialProfile::PowerExp { kappa, tau, g } => Some((*kappa, *tau, *g)),
            RadialProfile::Scaled { inner, .. } => inner.as_power_exp(),
            _ => None,
        }
    }

    /// Derivative self-check: compares the analytic derivative against a
    /// central finite difference at 32 interior points.
    pub fn validate(&self) -> Result<()> {
        let sp = self.support();
        let pts: Vec<f64> = if sp.hi.is_finite() {
            let (lo, hi) = (sp.lo + 1e-3, sp.hi - 1e-3);
            if hi <= lo {
                return Ok(());
            }
            (0..32).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 32.0).collect()
        } else {
            let anchor = self.anchor();
            let (lo, hi) = ((anchor / 20.0).max(sp.lo * 1.001 + 1e-12), anchor * 20.0);
            (0..32)
                .map(|i| lo * (hi / lo).powf((i as f64 + 0.5) / 32.0))
                .collect()
        };
        let analytic: Vec<f64> = pts.iter().map(|&r| self.deriv(r)).collect();
        let scale = analytic.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Ok(());
        }
        for (&r, &an) in pts.iter().zip(&analytic) {
            if an.abs() < 1e-12 * scale {
                continue; // derivative negligible here; relative error meaningless
            }
            let h = r * 7e-6;
            let fd = (-self.eval(r + 2.0 * h) + 8.0 * self.eval(r + h) - 8.0 * self.eval(r - h)
                + self.eval(r - 2.0 * h))
                / (12.0 * h);
            let rel = (fd - an).abs() / an.abs();
            if rel > 1e-6 {
                return Err(CknError::InvalidParameter(format!(
                    "derivative self-check failed at r={r}: analytic {an:.6e}, fd {fd:.6e}, rel {rel:.2e}"
                )));
            }
        }
        Ok(())
    }
}

fn combine_tails(a: TailBehavior, b: TailBehavior) -> TailBehavior {
    use TailBehavior::*;
    match (a, b) {
        (Compact(h), Compact(h2)) => Compact(h.min(h2)),
        (Compact(h), _) | (_, Compact(h)) => Compact(h),
        (Exp { q, m, power }, Exp { q: q2, m: m2, power: p2 }) => {
            if (m - m2).abs() < 1e-12 {
                Exp { q: q + q2, m, power: power + p2 }
            } else if m > m2 {
                Exp { q, m, power: power + p2 }
            } else {
                Exp { q: q2, m: m2, power: power + p2 }
            }
        }
        (Exp { q, m, power }, Power(k)) | (Power(k), Exp { q, m, power }) => Exp { q, m, power: power + k },
        (Power(k1), Power(k2)) => Power(k1 + k2),
    }
}

/// Cubic Hermite interpolation with clamped extrapolation; returns (value,
/// derivative).
fn hermite(grid: &[f64], values: &[f64], derivs: &[f64], r: f64) -> (f64, f64) {
    let n = grid.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    if r <= grid[0] {
        return (values[0], derivs[0]);
    }
    if r >= grid[n - 1] {
        return (values[n - 1], derivs[n - 1]);
    }
    let i = match grid.binary_search_by(|x| x.total_cmp(&r)) {
        Ok(i) => return (values[i], derivs[i]),
        Err(i) => i - 1,
    };
    let (x0, x1) = (grid[i], grid[i + 1]);
    let h = x1 - x0;
    let t = (r - x0) / h;
    let (y0, y1, d0, d1) = (values[i], values[i + 1], derivs[i], derivs[i + 1]);
    let t2 = t * t;
    let t3 = t2 * t;
    let value = y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + d0 * h * (t3 - 2.0 * t2 + t)
        + y1 * (-2.0 * t3 + 3.0 * t2)
        + d1 * h * (t3 - t2);
    let deriv = (y0 * (6.0 * t2 - 6.0 * t) + d0 * h * (3.0 * t2 - 4.0 * t + 1.0)
        + y1 * (6.0 * t - 6.0 * t2)
        + d1 * h * (3.0 * t2 - 2.0 * t))
        / h;
    (value, deriv)
}

// ---------------------------------------------------------------------------
// Serializable family descriptors
// ---------------------------------------------------------------------------

/// Tagged JSON descriptor of a profile family, resolved against a
/// parameter set at run time.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Bump { r_lo: f64, r_hi: f64 },
    GaussPower { s: f64, q: f64, m: f64 },
    Extremizer { beta: f64 },
    PerturbedExtremizer { beta: f64, eps: f64, r_lo: f64, r_hi: f64 },
    PowerExp { kappa: f64, tau: f64, g: f64 },
}

impl FamilySpec {
    pub fn build(&self, params: &CknParams) -> Result<RadialProfile> {
        let profile = match self {
            FamilySpec::Bump { r_lo, r_hi } => RadialProfile::bump(*r_lo, *r_hi)?,
            FamilySpec::GaussPower { s, q, m } => RadialProfile::gauss_power(*s, *q, *m)?,
            FamilySpec::Extremizer { beta } => RadialProfile::extremizer(params, *beta)?,
            FamilySpec::PerturbedExtremizer { beta, eps, r_lo, r_hi } => {
                RadialProfile::perturbed_extremizer(params, *beta, *eps, *r_lo, *r_hi)?
            }
            FamilySpec::PowerExp { kappa, tau, g } => RadialProfile::power_exp(*kappa, *tau, *g)?,
        };
        profile.validate()?;
        Ok(profile)
    }
}

// ---------------------------------------------------------------------------
// Integrability validation
// ---------------------------------------------------------------------------

/// One improper integral to validate: ∫ |f^{(order)}|^p · w(r) · r^{n_eff-1} dr,
/// where the weight behaves like r^{gamma_zero} at 0 and r^{gamma_inf} at ∞.
#[derive(Debug, Clone)]
pub struct IntegrandCheck {
    pub gamma_zero: f64,
    pub gamma_inf: f64,
    pub deriv_order: u8,
    pub label: String,
}

impl IntegrandCheck {
    pub fn value(gamma: f64, label: &str) -> Self {
        IntegrandCheck { gamma_zero: gamma, gamma_inf: gamma, deriv_order: 0, label: label.to_string() }
    }
    pub fn gradient(gamma: f64, label: &str) -> Self {
        IntegrandCheck { gamma_zero: gamma, gamma_inf: gamma, deriv_order: 1, label: label.to_string() }
    }
    pub fn split(gamma_zero: f64, gamma_inf: f64, deriv_order: u8, label: &str) -> Self {
        IntegrandCheck { gamma_zero, gamma_inf, deriv_order, label: label.to_string() }
    }
}

/// Validates every requested improper integral against the profile's
/// declared endpoint behavior. At a 0-touching endpoint the combined power
/// must exceed -1; at ∞ the profile must decay exponentially, have compact
/// support, or carry a power tail strong enough for the combined exponent
/// to fall below -1.
pub fn check_integrability(
    p: f64,
    n_eff: f64,
    profile: &RadialProfile,
    checks: &[IntegrandCheck],
) -> Result<()> {
    let sp = profile.support();
    let mut violations = Vec::new();
    for c in checks {
        if sp.lo == 0.0 {
            let zb = if c.deriv_order == 0 { profile.zero_behavior() } else { profile.zero_behavior_deriv() };
            if let ZeroBehavior::Power(s) = zb {
                let combined = c.gamma_zero + (n_eff - 1.0) + p * s;
                if combined <= -1.0 {
                    violations.push(format!(
                        "{}: exponent {combined:.4} at r=0 must exceed -1 (gamma {}, profile power {s})",
                        c.label, c.gamma_zero
                    ));
                }
            }
        }
        if sp.hi.is_infinite() {
            let tb = if c.deriv_order == 0 { profile.tail() } else { profile.tail_deriv() };
            match tb {
                TailBehavior::Compact(_) | TailBehavior::Exp { .. } => {}
                TailBehavior::Power(k) => {
                    let combined = c.gamma_inf + (n_eff - 1.0) + p * k;
                    if combined >= -1.0 {
                        violations.push(format!(
                            "{}: exponent {combined:.4} at r=inf must fall below -1 (gamma {}, tail power {k})",
                            c.label, c.gamma_inf
                        ));
                    }
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CknError::Integrability(violations))
    }
}

// ---------------------------------------------------------------------------
// Stability hypothesis checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityTheorem {
    /// power-exponential model stability (p = 2)
    T6,
    /// plain-exponential model stability (p >= 2)
    T8,
    /// plain-exponential model stability at p = 2
    P2Scan,
}

/// Literal evaluation of the stability hypotheses for the chosen theorem.
pub fn check_stability_params(params: &CknParams, theorem: StabilityTheorem) -> Result<()> {
    let n = params.nf();
    let (p, a, b) = (params.p, params.a, params.b);
    let eq = |lhs: f64, rhs: f64| (lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs() + rhs.abs());
    match theorem {
        StabilityTheorem::T6 => {
            if (p - 2.0).abs() > 1e-12 {
                return Err(CknError::Regime("power-exponential stability requires p = 2".into()));
            }
            if !(b > (n - 2.0) / 2.0) {
                return Err(CknError::Regime(format!("need b > (N-2)/2 = {}", (n - 2.0) / 2.0)));
            }
            if !(b <= n - 2.0) {
                return Err(CknError::Regime(format!("need b <= N-2 = {}", n - 2.0)));
            }
            if !eq(n * (b - a + 3.0), 2.0 * (3.0 * b - a + 3.0)) {
                return Err(CknError::Regime(format!(
                    "balance N(b-a+3) = 2(3b-a+3) violated: {} vs {}",
                    n * (b - a + 3.0),
                    2.0 * (3.0 * b - a + 3.0)
                )));
            }
            Ok(())
        }
        StabilityTheorem::T8 => {
            if !(p >= 2.0) {
                return Err(CknError::Regime("need p >= 2".into()));
            }
            if !(n > p) {
                return Err(CknError::Regime("need N > p".into()));
            }
            if !(0.0 <= b && b < (n - p) / p) {
                return Err(CknError::Regime(format!("need 0 <= b < (N-p)/p = {}", (n - p) / p)));
            }
            if !(a <= n * b / (n - p)) {
                return Err(CknError::Regime(format!("need a <= Nb/(N-p) = {}", n * b / (n - p))));
            }
            if !eq((p - 1.0) * a + b + 1.0, p * b * n / (n - p)) {
                return Err(CknError::Regime(format!(
                    "balance (p-1)a+b+1 = pbN/(N-p) violated: {} vs {}",
                    (p - 1.0) * a + b + 1.0,
                    p * b * n / (n - p)
                )));
            }
            Ok(())
        }
        StabilityTheorem::P2Scan => {
            if (p - 2.0).abs() > 1e-12 {
                return Err(CknError::Regime("plain-exponential p=2 stability requires p = 2".into()));
            }
            if !(n > 2.0) {
                return Err(CknError::Regime("need N > 2".into()));
            }
            if !(0.0 <= b && b < (n - 2.0) / 2.0) {
                return Err(CknError::Regime(format!("need 0 <= b < (N-2)/2 = {}", (n - 2.0) / 2.0)));
            }
            if !(a < n * b / (n - 2.0)) {
                return Err(CknError::Regime(format!("need a < Nb/(N-2) = {}", n * b / (n - 2.0))));
            }
            if !eq(a + b + 1.0, 2.0 * b * n / (n - 2.0)) {
                return Err(CknError::Regime(format!(
                    "balance a+b+1 = 2bN/(N-2) violated: {} vs {}",
                    a + b + 1.0,
                    2.0 * b * n / (n - 2.0)
                )));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, p: f64, a: f64, b: f64) -> CknParams {
        CknParams::new(n, p, a, b).unwrap()
    }

    #[test]
    fn heisenberg_is_r1_with_half_n() {
        let r = classify_regime(&params(3, 2.0, -1.0, 0.0));
        assert_eq!(r.tag, RegimeTag::R1);
        assert_eq!(r.sharp_constant, 1.5);
        assert_eq!(r.extremizer_kind, ExtremizerKind::PlainExp);
    }

    #[test]
    fn hardy_parameters_are_degenerate_but_keep_the_constant() {
        // a=1, b=0 sits exactly on g = b+1-a = 0; the constant (N-2)/2 is
        // still the meaningful sharp value.
        let r = classify_regime(&params(5, 2.0, 1.0, 0.0));
        assert_eq!(r.tag, RegimeTag::Degenerate);
        assert_eq!(r.sharp_constant, 1.5);
        let r3 = classify_regime(&params(3, 2.0, 1.0, 0.0));
        assert_eq!(r3.tag, RegimeTag::Degenerate);
    }

    #[test]
    fn four_quadrants_classify() {
        assert_eq!(classify_regime(&params(3, 2.0, -1.0, 0.0)).tag, RegimeTag::R1);
        assert_eq!(classify_regime(&params(3, 2.0, 4.0, 2.0)).tag, RegimeTag::R2);
        assert_eq!(classify_regime(&params(4, 2.0, 3.0, 0.5)).tag, RegimeTag::R3);
        assert_eq!(classify_regime(&params(4, 2.0, 1.5, 1.5)).tag, RegimeTag::R4);
    }

    #[test]
    fn boundary_constants_coincide() {
        // at b = (N-2)/2 the R1/R2 and R3/R4 constants agree for every a
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in [2u32, 3, 4, 7] {
            let b = (n as f64 - 2.0) / 2.0;
            for _ in 0..20 {
                let a = next() * 10.0 - 5.0;
                let c12 = (n as f64 - a - b - 1.0).abs() / 2.0;
                let c34 = (n as f64 - 3.0 * b + a - 3.0).abs() / 2.0;
                assert!((c12 - c34).abs() <= 1e-12 * (1.0 + c12.abs()), "a={a} b={b} n={n}");
            }
        }
    }

    #[test]
    fn extremizer_matches_gaussian_for_heisenberg() {
        let f = RadialProfile::extremizer(&params(3, 2.0, -1.0, 0.0), 1.0).unwrap();
        for r in [0.3, 1.0, 2.5] {
            let want = (-r * r / 2.0_f64).exp();
            assert!((f.eval(r) - want).abs() <= 1e-15 * want.abs());
        }
    }

    #[test]
    fn power_exp_extremizer_for_regime4() {
        // r^{2b+2-N}·exp(-beta·r^g/g)
        let pr = params(4, 2.0, 1.5, 1.5);
        let f = RadialProfile::extremizer(&pr, 2.0).unwrap();
        let g = pr.gap();
        for r in [0.5_f64, 1.0, 3.0] {
            let want = r * (-2.0 * r.powf(g) / g).exp();
            assert!((f.eval(r) - want).abs() <= 1e-14 * want.abs().max(1e-10));
        }
    }

    #[test]
    fn bump_vanishes_at_endpoints() {
        let f = RadialProfile::bump(1.0, 2.0).unwrap();
        assert_eq!(f.eval(1.0), 0.0);
        assert_eq!(f.eval(2.0), 0.0);
        assert_eq!(f.deriv(1.0), 0.0);
        assert!(f.eval(1.5) > 0.0);
    }

    #[test]
    fn derivative_self_check_all_families() {
        let pr = params(3, 2.0, -1.0, 0.0);
        let cases: Vec<RadialProfile> = vec![
            RadialProfile::bump(1.0, 2.0).unwrap(),
            RadialProfile::bump(0.5, 4.0).unwrap(),
            RadialProfile::gauss_power(0.0, 1.0, 2.0).unwrap(),
            RadialProfile::gauss_power(2.5, 0.7, 1.5).unwrap(),
            RadialProfile::extremizer(&pr, 1.0).unwrap(),
            RadialProfile::extremizer(&params(4, 2.0, 1.5, 1.5), 0.8).unwrap(),
            RadialProfile::extremizer(&params(3, 2.0, 4.0, 2.0), 1.2).unwrap(),
            RadialProfile::extremizer(&params(4, 2.0, 3.0, 0.5), 1.0).unwrap(),
            RadialProfile::perturbed_extremizer(&pr, 1.0, 0.1, 0.8, 1.7).unwrap(),
            RadialProfile::gauss_power(1.0, 1.0, 2.0).unwrap().scaled(3.5),
            RadialProfile::gauss_power(1.0, 1.0, 2.0).unwrap().dilated(1.7),
            RadialProfile::product(
                RadialProfile::power_exp(-0.5, 0.0, 1.0).unwrap(),
                RadialProfile::bump(1.0, 2.0).unwrap(),
            ),
        ];
        for f in cases {
            f.validate().unwrap();
        }
    }

    #[test]
    fn second_derivative_matches_fd() {
        let cases = [
            RadialProfile::gauss_power(2.0, 1.0, 2.0).unwrap(),
            RadialProfile::bump(1.0, 2.0).unwrap(),
            RadialProfile::power_exp(-1.0, 1.5, -1.5).unwrap(),
        ];
        for f in cases {
            for r in [1.2, 1.5, 1.8] {
                let h = r * 1e-5;
                let fd = (f.deriv(r + h) - f.deriv(r - h)) / (2.0 * h);
                let an = f.deriv2(r);
                assert!(
                    (fd - an).abs() <= 1e-5 * an.abs().max(1.0),
                    "r={r}: fd {fd:.8e} analytic {an:.8e}"
                );
            }
        }
    }

    #[test]
    fn integrability_examples() {
        let p = 2.0;
        // compact support: everything passes
        let bump = RadialProfile::bump(1.0, 2.0).unwrap();
        check_integrability(p, 3.0, &bump, &[IntegrandCheck::value(-50.0, "any")]).unwrap();

        // f = exp(-r²), gamma = -N: integrand ~ r^{-1} at 0 diverges
        let f = RadialProfile::gauss_power(0.0, 1.0, 2.0).unwrap();
        let err = check_integrability(p, 3.0, &f, &[IntegrandCheck::value(-3.0, "pot")]);
        assert!(matches!(err, Err(CknError::Integrability(_))));

        // f = r²·exp(-r²), N=3, p=2, gamma=-4: combined -4+2+4 = 2 > -1
        let f = RadialProfile::gauss_power(2.0, 1.0, 2.0).unwrap();
        check_integrability(p, 3.0, &f, &[IntegrandCheck::value(-4.0, "pot")]).unwrap();
    }

    #[test]
    fn stability_hypothesis_examples() {
        check_stability_params(&params(4, 2.0, -1.0, 0.0), StabilityTheorem::T8).unwrap();
        check_stability_params(&params(4, 2.0, 1.5, 1.5), StabilityTheorem::T6).unwrap();
        // boundary b = (N-p)/p excluded
        let err = check_stability_params(&params(4, 2.0, -1.0, 1.0), StabilityTheorem::T8);
        assert!(matches!(err, Err(CknError::Regime(_))));
    }

    #[test]
    fn t6_example_solves_balance() {
        // N=4, b=1.5: 4(4.5-a) = 2(7.5-a) gives a = 1.5
        let a: f64 = 1.5;
        assert!((4.0 * (1.5 - a + 3.0) - 2.0 * (3.0 * 1.5 - a + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn weight_serde_round_trip() {
        let w: WeightSpec = serde_json::from_str(r#"{"weight":"power","gamma":-2}"#).unwrap();
        assert!((w.eval(2.0) - 0.25).abs() < 1e-15);
        let f: FamilySpec = serde_json::from_str(r#"{"family":"gauss_power","s":2,"q":1,"m":2}"#).unwrap();
        let p = f.build(&params(3, 2.0, -1.0, 0.0)).unwrap();
        assert!((p.eval(1.0) - (-1.0_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn monomial_effective_dimension() {
        let p = MonomialWeight::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(p.n_eff(2), 3.0);
        assert!(MonomialWeight::new(vec![-0.5]).is_err());
    }
}

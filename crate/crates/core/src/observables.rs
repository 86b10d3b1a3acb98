//! Boundary effect function, two-point correlations, block entropies and
//! decay fits.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extended::{leading_block_fidelity, PureCorrelation};
use crate::fidelity::{gaussian_fidelity_with, FidelityOptions};
use crate::gaussian::{
    ground_state, mode_occupations, reduce, CorrelationMatrix, GroundState, GroundStateOptions, ZeroModePolicy,
    ZeroModeResolution,
};
use crate::models::{build, ModelSpec};

/// Ordered `(r, value)` points with strictly increasing `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSeries {
    pub label: String,
    points: Vec<(usize, f64)>,
}

impl SweepSeries {
    pub fn new(label: impl Into<String>, points: Vec<(usize, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::NumericalFailure("series abscissae not strictly increasing".into()));
        }
        if points.iter().any(|p| !p.1.is_finite()) {
            return Err(Error::NumericalFailure("series contains non-finite values".into()));
        }
        Ok(SweepSeries { label: label.into(), points })
    }

    pub fn points(&self) -> &[(usize, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn value_at(&self, r: usize) -> Option<f64> {
        self.points.binary_search_by_key(&r, |p| p.0).ok().map(|i| self.points[i].1)
    }

    pub fn last_r(&self) -> Option<usize> {
        self.points.last().map(|p| p.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayKind {
    /// `v ~ exp(-rate · r)`
    Exponential,
    /// `v ~ r^exponent`
    Polynomial,
}

impl fmt::Display for DecayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecayKind::Exponential => "exponential",
            DecayKind::Polynomial => "polynomial",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub kind: DecayKind,
    pub rate_or_exponent: f64,
    pub r_squared: f64,
    pub window: (usize, usize),
}

/// `[max(5, r_max/10), 4 r_max / 5]`.
pub fn default_window(r_max: usize) -> (usize, usize) {
    ((r_max / 10).max(5), r_max * 4 / 5)
}

/// Least squares `y = slope x + intercept`; returns `(slope, intercept, r²)`.
/// Data with no spread in `y` fits perfectly (`r² = 1`).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    (slope, intercept, r2.clamp(0.0, 1.0))
}

fn window_points(series: &SweepSeries, window: (usize, usize)) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(usize, f64)> =
        series.points.iter().copied().filter(|&(r, _)| r >= window.0 && r <= window.1).collect();
    if pts.len() < 5 {
        return Err(Error::InsufficientData(pts.len()));
    }
    if pts.iter().any(|&(r, v)| v <= 0.0 || r == 0) {
        return Err(Error::NonPositiveValues);
    }
    Ok(pts.into_iter().map(|(r, v)| (r as f64, v)).collect())
}

/// Fit of a prescribed decay form.
pub fn fit_decay_as(series: &SweepSeries, window: (usize, usize), kind: DecayKind) -> Result<DecayFit> {
    let pts = window_points(series, window)?;
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let xs: Vec<f64> = match kind {
        DecayKind::Exponential => pts.iter().map(|p| p.0).collect(),
        DecayKind::Polynomial => pts.iter().map(|p| p.0.ln()).collect(),
    };
    let (slope, _, r_squared) = linear_fit(&xs, &ys);
    let rate_or_exponent = match kind {
        DecayKind::Exponential => -slope + 0.0,
        DecayKind::Polynomial => slope + 0.0,
    };
    Ok(DecayFit { kind, rate_or_exponent, r_squared, window })
}

/// The better (by `r²`) of an exponential and a power-law fit; ties go to
/// the exponential.
pub fn fit_decay(series: &SweepSeries, window: (usize, usize)) -> Result<DecayFit> {
    let exp = fit_decay_as(series, window, DecayKind::Exponential)?;
    let pow = fit_decay_as(series, window, DecayKind::Polynomial)?;
    Ok(if pow.r_squared > exp.r_squared { pow } else { exp })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    /// Double-double fidelity on exactly purified global states; needs pure
    /// ground states for both chains.
    Extended,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        })
    }
}

impl FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(format!("unknown precision '{other}'")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BefOptions {
    pub ground: GroundStateOptions,
    pub fidelity: FidelityOptions,
    pub precision: Precision,
}

impl Default for BefOptions {
    fn default() -> Self {
        BefOptions {
            ground: GroundStateOptions { policy: ZeroModePolicy::ZeroTemperature, ..Default::default() },
            fidelity: FidelityOptions::default(),
            precision: Precision::Double,
        }
    }
}

pub fn check_r_max(r_max: usize, n: usize) -> Result<()> {
    if r_max < 1 || 2 * r_max >= n {
        return Err(Error::InvalidRMax { r_max, n });
    }
    Ok(())
}

/// Ground state under `opts`, refusing zero modes that stay mixed.
pub fn pure_ground_state(spec: &ModelSpec, opts: &GroundStateOptions) -> Result<GroundState> {
    let gs = ground_state(&build(spec)?.coupling, opts)?;
    let mixed: Vec<usize> = gs.zero_modes.iter().filter(|z| z.1 == ZeroModeResolution::Mixed).map(|z| z.0).collect();
    if !mixed.is_empty() {
        return Err(Error::DegenerateGroundState {
            energies: mixed.iter().map(|&j| gs.energies[j]).collect(),
            modes: mixed,
        });
    }
    Ok(gs)
}

/// Ground states of the `n`- and `(n+1)`-site chains. The shorter chain must
/// have a determined ground state; the longer one may keep unresolved
/// zero modes mixed under [`ZeroModePolicy::ZeroTemperature`].
pub fn bef_ground_states(spec: &ModelSpec, opts: &GroundStateOptions) -> Result<(GroundState, GroundState)> {
    let small = pure_ground_state(spec, opts)?;
    let big = ground_state(&build(&spec.with_sites(spec.n + 1))?.coupling, opts)?;
    Ok((small, big))
}

/// `μ_n(r) = sqrt(1 - F)` between the site-`1..n-r` reductions of the
/// ground states of the `n`- and `(n+1)`-site chains, for `r = 1..=r_max`.
/// Runs on the current rayon pool; output is ordered by `r`.
pub fn boundary_effect_function_with(spec: &ModelSpec, r_max: usize, opts: &BefOptions) -> Result<SweepSeries> {
    let n = spec.n;
    check_r_max(r_max, n)?;
    let (small, big) = bef_ground_states(spec, &opts.ground)?;
    let values: Vec<f64> = match opts.precision {
        Precision::Double => (1..=r_max)
            .into_par_iter()
            .map(|r| {
                let a = reduce(&small.correlation, 1, n - r)?;
                let b = reduce(&big.correlation, 1, n - r)?;
                let f = gaussian_fidelity_with(&a, &b, &opts.fidelity)?;
                Ok(f.infidelity.max(0.0).sqrt())
            })
            .collect::<Result<_>>()?,
        Precision::Extended => {
            let (p, q) = rayon::join(
                || PureCorrelation::from_f64(&small.correlation),
                || PureCorrelation::from_f64(&big.correlation),
            );
            let (p, q) = (p?, q?);
            (1..=r_max)
                .into_par_iter()
                .map(|r| {
                    let f = leading_block_fidelity(&p, &q, n - r, opts.fidelity.tol_singular)?;
                    Ok(f.infidelity.max(0.0).sqrt())
                })
                .collect::<Result<_>>()?
        }
    };
    SweepSeries::new(format!("bef {} n={} h={}", spec.kind, n, spec.h), (1..=r_max).zip(values).collect())
}

pub fn boundary_effect_function(spec: &ModelSpec, r_max: usize) -> Result<SweepSeries> {
    boundary_effect_function_with(spec, r_max, &BefOptions::default())
}

/// `Corr(r) = |Γ_{n/2, n/2+2r-1}|` (1-based Majorana indices).
pub fn two_point_correlation(g: &CorrelationMatrix, n: usize, r_max: usize) -> Result<SweepSeries> {
    if !n.is_multiple_of(4) {
        return Err(Error::NotDivisibleByFour(n));
    }
    if g.modes() != n {
        return Err(Error::DimensionMismatch(g.modes(), n));
    }
    let anchor = n / 2;
    if r_max < 1 || anchor + 2 * r_max - 1 > 2 * n {
        return Err(Error::IndexOutOfRange(format!("Majorana index {} exceeds {}", anchor + 2 * r_max - 1, 2 * n)));
    }
    let m = g.matrix();
    let points = (1..=r_max).map(|r| (r, m[(anchor - 1, anchor + 2 * r - 2)].abs())).collect();
    SweepSeries::new(format!("corr n={n}"), points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EntropyBase {
    #[default]
    Nats,
    Bits,
}

impl fmt::Display for EntropyBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyBase::Nats => "nats",
            EntropyBase::Bits => "bits",
        })
    }
}

impl FromStr for EntropyBase {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nats" => Ok(EntropyBase::Nats),
            "bits" => Ok(EntropyBase::Bits),
            other => Err(format!("unknown entropy base '{other}'")),
        }
    }
}

fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    h(p) + h(1.0 - p)
}

/// `S = Σ_j H((1 + ν_j)/2)` in nats.
pub fn entropy_of_block(g: &CorrelationMatrix) -> Result<f64> {
    Ok(mode_occupations(g)?.iter().map(|nu| binary_entropy(0.5 * (1.0 + nu))).sum())
}

pub fn entropy_in(g: &CorrelationMatrix, base: EntropyBase) -> Result<f64> {
    let s = entropy_of_block(g)?;
    Ok(match base {
        EntropyBase::Nats => s,
        EntropyBase::Bits => s / std::f64::consts::LN_2,
    })
}

/// `S(r)` of sites `n/2+1 ..= n/2+r`.
pub fn entanglement_entropy_profile(
    g: &CorrelationMatrix,
    n: usize,
    r_max: usize,
    base: EntropyBase,
) -> Result<SweepSeries> {
    if !n.is_multiple_of(2) {
        return Err(Error::NotEven(n));
    }
    if g.modes() != n {
        return Err(Error::DimensionMismatch(g.modes(), n));
    }
    if r_max < 1 || n / 2 + r_max > n {
        return Err(Error::RangeOutOfBounds { first: n / 2 + 1, last: n / 2 + r_max, n });
    }
    let values: Vec<f64> = (1..=r_max)
        .into_par_iter()
        .map(|r| entropy_in(&reduce(g, n / 2 + 1, n / 2 + r)?, base))
        .collect::<Result<_>>()?;
    SweepSeries::new(format!("entropy n={n} ({base})"), (1..=r_max).zip(values).collect())
}

//! Epsilon sweeps that turn each convergence statement into a measured table.
//!
//! Every sweep returns records in a fixed order: metric, then time, then the
//! configured epsilon ladder. Consecutive records of one `(metric, t)` series
//! carry the ratio to the previous rung, and a series is monotone iff every
//! ratio is below one. Reports are written as CSV plus a JSON verdict summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolve::{
    kernel_evolve, limit_group_v, reflected_wave, remainder_norm, spectral_evolve, EvolutionParams,
    ResolutionReport,
};
use crate::grid::{distance, indicator_project, inner, BoundedFunction, Grid, WaveFunction};
use crate::observables::{FiniteRankObservable, MultiplicationObservable};
use crate::presets::Preset;

/// Upper bound on the mass a sweep may push through the far wall.
pub const TAIL_MASS_MAX: f64 = 1e-10;

/// Series whose values all sit at or below this are reported as negligible.
pub const NEGLIGIBLE: f64 = 1e-9;

/// Gram-Schmidt drop tolerance, relative to the norm of the vector being added.
pub const GS_DROP_TOL: f64 = 1e-6;

/// Below this singular weight the divergence probe has nothing to detect.
pub const PROBE_MIN_LOSS: f64 = 0.05;

pub const CSV_HEADER: &str = "preset,b,t,epsilon,metric,value,ratio";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub preset: Preset,
    pub length: f64,
    pub points: usize,
    pub b: f64,
    pub times: Vec<f64>,
    pub epsilons: Vec<f64>,
}

impl SweepConfig {
    pub fn grid(&self) -> Result<Grid<f64>> {
        Grid::new(self.length, self.points)
    }

    pub fn initial(&self) -> Result<WaveFunction<f64>> {
        Ok(self.preset.sample(self.grid()?))
    }

    pub fn t_max(&self) -> f64 {
        self.times.iter().copied().fold(0.0, f64::max)
    }

    pub fn params(&self, epsilon: f64, t: f64) -> Result<EvolutionParams<f64>> {
        EvolutionParams::new(epsilon, self.b, t)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.b.is_finite() && self.b != 0.0) {
            return bad(format!(
                "drift b must be finite and nonzero, got {}",
                self.b
            ));
        }
        if self.times.is_empty() {
            return bad("time list is empty".into());
        }
        if let Some(t) = self.times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return bad(format!("times must be finite and nonnegative, got {t}"));
        }
        if self.epsilons.is_empty() {
            return bad("epsilon list is empty".into());
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return bad(format!("epsilons must be positive, got {e}"));
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return bad("epsilon ladder must be strictly decreasing".into());
        }
        for &eps in &self.epsilons {
            ResolutionReport::gauge(&grid, eps, self.b).require()?;
        }
        let edge = self.length - self.b.abs() * self.t_max();
        let tail = indicator_project(&self.initial()?, edge.max(0.0), self.length)?.norm_sqr();
        if tail > TAIL_MASS_MAX {
            return bad(format!(
                "mass {tail:.3e} on [{edge}, {}] would reach the far wall; enlarge L or shorten the times",
                self.length
            ));
        }
        Ok(())
    }
}

/// One measured value: `metric` at time `t` and regularisation `epsilon`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub preset: String,
    pub b: f64,
    pub t: f64,
    pub epsilon: f64,
    pub metric: String,
    pub value: f64,
    /// `value / previous value` within the series; absent on the first rung
    /// or after a zero.
    pub ratio: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    Thm1,
    Weak,
    Thm3,
    Thm5,
    Prop2,
    Thm2,
}

impl Claim {
    pub const ALL: [Claim; 6] = [
        Claim::Thm1,
        Claim::Weak,
        Claim::Thm3,
        Claim::Thm5,
        Claim::Prop2,
        Claim::Thm2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Claim::Thm1 => "thm1",
            Claim::Weak => "weak",
            Claim::Thm3 => "thm3",
            Claim::Thm5 => "thm5",
            Claim::Prop2 => "prop2",
            Claim::Thm2 => "thm2",
        }
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown claim {s:?}")))
    }
}

/// A named pass/fail threshold on a measured quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdCheck {
    pub name: String,
    pub value: f64,
    pub relation: &'static str,
    pub limit: f64,
    pub passed: bool,
}

impl ThresholdCheck {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: "<=",
            limit,
            passed: value <= limit,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: ">=",
            limit,
            passed: value >= limit,
        }
    }
}

/// Records of one sweep plus which series and thresholds decide its verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub claim: Claim,
    pub records: Vec<ConvergenceRecord>,
    /// Metrics whose series must be monotone (or negligible).
    pub gated: Vec<String>,
    pub checks: Vec<ThresholdCheck>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesVerdict {
    pub metric: String,
    pub t: f64,
    pub rungs: usize,
    pub monotone: bool,
    pub negligible: bool,
    pub gated: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub claim: Claim,
    pub series: Vec<SeriesVerdict>,
    pub checks: Vec<ThresholdCheck>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SweepReport {
    /// Groups records into `(metric, t)` series in first-appearance order.
    pub fn series(&self) -> Vec<(&str, f64, Vec<&ConvergenceRecord>)> {
        series_of(&self.records)
    }

    pub fn summary(&self) -> Summary {
        let series: Vec<SeriesVerdict> = self
            .series()
            .into_iter()
            .map(|(metric, t, rows)| {
                let monotone = rows
                    .iter()
                    .skip(1)
                    .all(|r| r.ratio.is_some_and(|q| q < 1.0));
                let negligible = rows.iter().all(|r| r.value.abs() <= NEGLIGIBLE);
                let gated = self.gated.iter().any(|g| g == metric);
                SeriesVerdict {
                    metric: metric.to_string(),
                    t,
                    rungs: rows.len(),
                    monotone,
                    negligible,
                    gated,
                    passed: !gated || monotone || negligible,
                }
            })
            .collect();
        let pass = series.iter().all(|s| s.passed) && self.checks.iter().all(|c| c.passed);
        Summary {
            claim: self.claim,
            series,
            checks: self.checks.clone(),
            pass,
            note: self.note.clone(),
        }
    }

    pub fn passed(&self) -> bool {
        self.summary().pass
    }

    /// The values of one series in ladder order.
    pub fn column(&self, metric: &str, t: f64) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.metric == metric && r.t == t)
            .map(|r| r.value)
            .collect()
    }
}

fn series_of(records: &[ConvergenceRecord]) -> Vec<(&str, f64, Vec<&ConvergenceRecord>)> {
    let mut out: Vec<(&str, f64, Vec<&ConvergenceRecord>)> = Vec::new();
    for r in records {
        match out
            .iter_mut()
            .find(|(m, t, _)| *m == r.metric && t.to_bits() == r.t.to_bits())
        {
            Some((_, _, rows)) => rows.push(r),
            None => out.push((&r.metric, r.t, vec![r])),
        }
    }
    out
}

/// Builds the series for one `(metric, t)` in ladder order, filling in ratios.
struct SeriesBuilder<'a> {
    cfg: &'a SweepConfig,
    records: Vec<ConvergenceRecord>,
}

impl<'a> SeriesBuilder<'a> {
    fn new(cfg: &'a SweepConfig) -> Self {
        Self {
            cfg,
            records: Vec::new(),
        }
    }

    fn push_series(&mut self, metric: &str, t: f64, values: &[f64]) {
        let mut prev: Option<f64> = None;
        for (&epsilon, &value) in self.cfg.epsilons.iter().zip(values) {
            let ratio = prev.filter(|p| *p != 0.0).map(|p| value / p);
            self.records.push(ConvergenceRecord {
                preset: self.cfg.preset.to_string(),
                b: self.cfg.b,
                t,
                epsilon,
                metric: metric.to_string(),
                value,
                ratio,
            });
            prev = Some(value);
        }
    }

    fn finish(self) -> Vec<ConvergenceRecord> {
        self.records
    }
}

/// `values[i][k]`: metric at ladder rung `i`, time index `k`.
fn by_time(values: &[Vec<f64>], k: usize) -> Vec<f64> {
    values.iter().map(|row| row[k]).collect()
}

fn sup_over_time(values: &[Vec<f64>]) -> Vec<f64> {
    values
        .iter()
        .map(|row| row.iter().copied().fold(0.0, f64::max))
        .collect()
}

fn last(values: &[f64]) -> f64 {
    values.last().copied().unwrap_or(f64::NAN)
}

/// Remainder `||u_eps(t) - v_eps(t)||` per time, and its sup over the time list.
///
/// With `kernel_check`, also records the gap between the two exact engines at
/// every positive time; that is the `O(N^2)` part of the sweep.
pub fn sweep_theorem1(cfg: &SweepConfig, kernel_check: bool) -> Result<SweepReport> {
    cfg.validate()?;
    let phi = cfg.initial()?;
    let mut remainders = Vec::new();
    let mut gaps = Vec::new();
    for &eps in &cfg.epsilons {
        let mut row = Vec::new();
        let mut gap_row = Vec::new();
        for &t in &cfg.times {
            let p = cfg.params(eps, t)?;
            row.push(remainder_norm(&phi, &p)?);
            if kernel_check && t > 0.0 {
                gap_row.push(distance(
                    &kernel_evolve(&phi, &p)?,
                    &spectral_evolve(&phi, &p)?,
                )?);
            }
        }
        remainders.push(row);
        gaps.push(gap_row);
    }

    let mut out = SeriesBuilder::new(cfg);
    for (k, &t) in cfg.times.iter().enumerate() {
        out.push_series("remainder", t, &by_time(&remainders, k));
    }
    let sup = sup_over_time(&remainders);
    out.push_series("remainder_sup", cfg.t_max(), &sup);
    let mut checks = vec![ThresholdCheck::at_most(
        "remainder_sup: last rung / first rung",
        last(&sup) / sup[0],
        0.5,
    )];
    if kernel_check {
        let positive: Vec<f64> = cfg.times.iter().copied().filter(|t| *t > 0.0).collect();
        for (k, &t) in positive.iter().enumerate() {
            out.push_series("kernel_gap", t, &by_time(&gaps, k));
        }
        let worst = gaps.iter().flatten().copied().fold(0.0, f64::max);
        checks.push(ThresholdCheck::at_most("kernel_gap: worst", worst, 1e-3));
    }
    Ok(SweepReport {
        claim: Claim::Thm1,
        records: out.finish(),
        gated: vec!["remainder_sup".into()],
        checks,
        note: None,
    })
}

/// `|<g, psi_eps(t)>|` for the oscillating reflected wave `psi_eps`.
pub fn sweep_weak_decay(cfg: &SweepConfig, g: &WaveFunction<f64>) -> Result<SweepReport> {
    cfg.validate()?;
    let phi = cfg.initial()?;
    if g.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    let mut values = Vec::new();
    for &eps in &cfg.epsilons {
        let mut row = Vec::new();
        for &t in &cfg.times {
            row.push(inner(g, &reflected_wave(&phi, &cfg.params(eps, t)?))?.norm());
        }
        values.push(row);
    }
    let mut out = SeriesBuilder::new(cfg);
    for (k, &t) in cfg.times.iter().enumerate() {
        out.push_series("weak_overlap", t, &by_time(&values, k));
    }
    Ok(SweepReport {
        claim: Claim::Weak,
        records: out.finish(),
        gated: vec!["weak_overlap".into()],
        checks: Vec::new(),
        note: None,
    })
}

/// Which observables [`sweep_expectations`] measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObservableFamily {
    /// `chi_[0,bt]`, a sigmoid, and the constant one.
    Multiplication,
    /// The projector onto `bump12`.
    FiniteRank,
}

/// Final-rung ceiling for expectation gaps.
pub const EXPECTATION_GAP_MAX: f64 = 0.02;

/// `|<u_eps, A u_eps> - limit|` per observable and time.
///
/// Multiplication observables are compared with the two-branch channel limit,
/// the projector with the transported-branch limit.
pub fn sweep_expectations(cfg: &SweepConfig, family: ObservableFamily) -> Result<SweepReport> {
    cfg.validate()?;
    let phi = cfg.initial()?;
    let grid = *phi.grid();
    if cfg.b <= 0.0 {
        return Err(Error::UnsupportedDrift(cfg.b));
    }
    let b = cfg.b;
    let sigmoid = MultiplicationObservable::new(BoundedFunction::from_real_fn(grid, |x| {
        1.0 / (1.0 + (-(x - 1.0) / 0.25).exp())
    })?);
    let one = MultiplicationObservable::new(BoundedFunction::constant(grid, 1.0));
    let bump = FiniteRankObservable::projector(&Preset::Bump12.sample(grid))?;

    let metrics: &[&str] = match family {
        ObservableFamily::Multiplication => &["chi_gap", "sigmoid_gap", "unit_gap"],
        ObservableFamily::FiniteRank => &["projector_gap"],
    };

    // limits do not depend on eps
    let mut limits = Vec::new();
    for &t in &cfg.times {
        let chi = MultiplicationObservable::new(BoundedFunction::from_real_fn(grid, |x| {
            if x <= b * t {
                1.0
            } else {
                0.0
            }
        })?);
        let kraus = crate::limit::kraus_apply(&phi, b, t)?;
        let lim = |a: &MultiplicationObservable<f64>| kraus.expectation(|u| a.expectation(u));
        let row: Vec<Complex64> = match family {
            ObservableFamily::Multiplication => vec![lim(&chi)?, lim(&sigmoid)?, lim(&one)?],
            ObservableFamily::FiniteRank => {
                vec![crate::observables::comp_expectation_limit(
                    &phi, &bump, b, t,
                )?]
            }
        };
        limits.push((chi, row));
    }

    // gaps[m][i][k]: metric m, rung i, time k
    let mut gaps = vec![Vec::new(); metrics.len()];
    for &eps in &cfg.epsilons {
        let mut rows = vec![Vec::new(); metrics.len()];
        for (k, &t) in cfg.times.iter().enumerate() {
            let u = spectral_evolve(&phi, &cfg.params(eps, t)?)?;
            let (chi, lim) = &limits[k];
            let reg: Vec<Complex64> = match family {
                ObservableFamily::Multiplication => {
                    vec![
                        chi.expectation(&u)?,
                        sigmoid.expectation(&u)?,
                        one.expectation(&u)?,
                    ]
                }
                ObservableFamily::FiniteRank => vec![bump.expectation(&u)?],
            };
            for (m, (r, l)) in reg.iter().zip(lim).enumerate() {
                rows[m].push((r - l).norm());
            }
        }
        for (m, row) in rows.into_iter().enumerate() {
            gaps[m].push(row);
        }
    }

    let mut out = SeriesBuilder::new(cfg);
    let mut checks = Vec::new();
    for (m, metric) in metrics.iter().enumerate() {
        for (k, &t) in cfg.times.iter().enumerate() {
            let col = by_time(&gaps[m], k);
            out.push_series(metric, t, &col);
            let limit = if *metric == "unit_gap" {
                NEGLIGIBLE
            } else {
                EXPECTATION_GAP_MAX
            };
            checks.push(ThresholdCheck::at_most(
                format!("{metric} at t={t}: last rung"),
                last(&col),
                limit,
            ));
        }
    }
    Ok(SweepReport {
        claim: match family {
            ObservableFamily::Multiplication => Claim::Thm5,
            ObservableFamily::FiniteRank => Claim::Thm3,
        },
        records: out.finish(),
        gated: metrics.iter().map(|m| m.to_string()).collect(),
        checks,
        note: None,
    })
}

/// Ceiling for the strong gap with `b < 0` and the weak gaps with `b > 0`.
pub const STRONG_GAP_MAX: f64 = 0.05;
pub const WEAK_GAP_MAX: f64 = 0.02;
/// Allowed distance between `||u_eps - V phi||^2` and the lost mass `1 - alpha`.
pub const HYPOTHESIS_DEV_MAX: f64 = 0.05;

/// Operator-topology gaps between `U_eps(t)` and the limit group `V_b(t)` on
/// the preset `psi`.
///
/// Records `sup_t ||(U_eps - V) psi||` and, for `b > 0`, the weak gaps
/// `sup_t |<g, (U_eps - V) psi>|` for each named test vector and the deviation
/// `| ||(U_eps - V) psi||^2 - (1 - alpha(t)) |`.
pub fn sweep_prop2(
    cfg: &SweepConfig,
    tests: &[(String, WaveFunction<f64>)],
) -> Result<SweepReport> {
    cfg.validate()?;
    let phi = cfg.initial()?;
    let b = cfg.b;
    let t_max = cfg.t_max();
    let limits: Vec<WaveFunction<f64>> = cfg
        .times
        .iter()
        .map(|&t| limit_group_v(&phi, b, t))
        .collect();

    let mut strong = Vec::new();
    let mut weak = vec![Vec::new(); tests.len()];
    let mut dev = Vec::new();
    for &eps in &cfg.epsilons {
        let mut s_row = Vec::new();
        let mut w_rows = vec![Vec::new(); tests.len()];
        let mut d_row = Vec::new();
        for (k, &t) in cfg.times.iter().enumerate() {
            let diff = spectral_evolve(&phi, &cfg.params(eps, t)?)?.try_sub(&limits[k])?;
            let gap = diff.norm();
            s_row.push(gap);
            for (j, (_, g)) in tests.iter().enumerate() {
                w_rows[j].push(inner(g, &diff)?.norm());
            }
            let loss = 1.0 - limits[k].norm_sqr();
            d_row.push((gap * gap - loss).abs());
        }
        strong.push(s_row);
        for (j, row) in w_rows.into_iter().enumerate() {
            weak[j].push(row);
        }
        dev.push(d_row);
    }

    let mut out = SeriesBuilder::new(cfg);
    let strong_sup = sup_over_time(&strong);
    out.push_series("strong_gap", t_max, &strong_sup);
    let mut checks = Vec::new();
    let gated = if b < 0.0 {
        checks.push(ThresholdCheck::at_most(
            "strong_gap: last rung",
            last(&strong_sup),
            STRONG_GAP_MAX,
        ));
        vec!["strong_gap".to_string()]
    } else {
        let mut names = Vec::new();
        for (j, (name, _)) in tests.iter().enumerate() {
            let metric = format!("weak_gap:{name}");
            let sup = sup_over_time(&weak[j]);
            out.push_series(&metric, t_max, &sup);
            checks.push(ThresholdCheck::at_most(
                format!("{metric}: last rung"),
                last(&sup),
                WEAK_GAP_MAX,
            ));
            names.push(metric);
        }
        for (k, &t) in cfg.times.iter().enumerate() {
            out.push_series("hypothesis_dev", t, &by_time(&dev, k));
        }
        let worst = dev.iter().flatten().copied().fold(0.0, f64::max);
        checks.push(ThresholdCheck::at_most(
            "hypothesis_dev: worst",
            worst,
            HYPOTHESIS_DEV_MAX,
        ));
        names
    };
    Ok(SweepReport {
        claim: Claim::Prop2,
        records: out.finish(),
        gated,
        checks,
        note: None,
    })
}

/// Diagonal probe against strong convergence.
///
/// For each time, the reflected waves `psi_{eps_j}(t)` of the ladder are
/// orthonormalised in ladder order (dropping near-parallel ones), and
/// `A = sum_j (-1)^j P_{g_j}` is evaluated on `u_{eps_j}(t)`. Each `u_{eps_j}`
/// carries its own `-psi_{eps_j}` and so picks up roughly `(-1)^j (1 - alpha)`:
/// the column alternates instead of settling. Alongside, the deviation of
/// `||u_eps - V phi||^2` from `1 - alpha(t)` checks that the mass loss behind
/// the oscillation is real.
///
/// This exhibits one divergent family; it does not certify divergence along
/// every sequence `eps -> 0`.
pub fn divergence_probe(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    if cfg.b <= 0.0 {
        return Err(Error::UnsupportedDrift(cfg.b));
    }
    let phi = cfg.initial()?;
    let mut out = SeriesBuilder::new(cfg);
    let mut checks = Vec::new();
    for &t in &cfg.times {
        let v = limit_group_v(&phi, cfg.b, t);
        let loss = 1.0 - v.norm_sqr();
        if loss < PROBE_MIN_LOSS {
            return Err(Error::ProbeRefused(format!(
                "lost mass 1 - alpha({t}) = {loss:.3e} is below {PROBE_MIN_LOSS}; choose a later time"
            )));
        }
        let mut basis: Vec<(f64, WaveFunction<f64>)> = Vec::new();
        let mut residual = Vec::new();
        for (j, &eps) in cfg.epsilons.iter().enumerate() {
            let psi = reflected_wave(&phi, &cfg.params(eps, t)?);
            let mut r = psi.clone();
            for (_, e) in &basis {
                let c = inner(e, &r)?;
                r = r.try_sub(&e.scaled(c))?;
            }
            let kept = r.norm() / psi.norm();
            residual.push(kept);
            if kept > GS_DROP_TOL {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                basis.push((sign, r.normalized()?));
            }
        }
        let a = FiniteRankObservable::new(basis)?;
        let mut probe = Vec::new();
        let mut dev = Vec::new();
        for &eps in &cfg.epsilons {
            let u = spectral_evolve(&phi, &cfg.params(eps, t)?)?;
            probe.push(a.expectation(&u)?.re);
            let gap = distance(&u, &v)?;
            dev.push((gap * gap - loss).abs());
        }
        let lo = probe.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = probe.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        out.push_series("probe", t, &probe);
        out.push_series("gs_residual", t, &residual);
        out.push_series("hypothesis_dev", t, &dev);
        checks.push(ThresholdCheck::at_least(
            format!("probe at t={t}: peak-to-peak / (1 - alpha)"),
            (hi - lo) / loss,
            0.5,
        ));
        checks.push(ThresholdCheck::at_most(
            format!("hypothesis_dev at t={t}: worst"),
            dev.iter().copied().fold(0.0, f64::max),
            HYPOTHESIS_DEV_MAX,
        ));
    }
    Ok(SweepReport {
        claim: Claim::Thm2,
        records: out.finish(),
        gated: Vec::new(),
        checks,
        note: Some(
            "one explicit divergent family along the configured ladder; divergence along every \
             sequence is not certified"
                .into(),
        ),
    })
}

/// Default test vectors for [`sweep_prop2`].
pub fn default_prop2_tests(grid: Grid<f64>) -> Vec<(String, WaveFunction<f64>)> {
    [Preset::Bump12, Preset::Xexp, Preset::Bump23]
        .into_iter()
        .map(|p| (p.to_string(), p.sample(grid)))
        .collect()
}

/// Runs the sweep behind `claim` with default observables and test vectors.
pub fn run_claim(claim: Claim, cfg: &SweepConfig, kernel_check: bool) -> Result<SweepReport> {
    match claim {
        Claim::Thm1 => sweep_theorem1(cfg, kernel_check),
        Claim::Weak => sweep_weak_decay(cfg, &Preset::Bump12.sample(cfg.grid()?)),
        Claim::Thm3 => sweep_expectations(cfg, ObservableFamily::FiniteRank),
        Claim::Thm5 => sweep_expectations(cfg, ObservableFamily::Multiplication),
        Claim::Prop2 => sweep_prop2(cfg, &default_prop2_tests(cfg.grid()?)),
        Claim::Thm2 => divergence_probe(cfg),
    }
}

fn fmt_float(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").expect("writing to a String cannot fail");
}

/// The CSV text: header, then one row per record with 17 significant digits.
pub fn render_csv(records: &[ConvergenceRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.preset);
        out.push(',');
        fmt_float(&mut out, r.b);
        out.push(',');
        fmt_float(&mut out, r.t);
        out.push(',');
        fmt_float(&mut out, r.epsilon);
        out.push(',');
        out.push_str(&r.metric);
        out.push(',');
        fmt_float(&mut out, r.value);
        out.push(',');
        if let Some(q) = r.ratio {
            fmt_float(&mut out, q);
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportPaths {
    pub csv: PathBuf,
    pub json: PathBuf,
}

/// Writes `<claim>.csv` and `<claim>.json` into `dir`, creating it if needed.
pub fn emit_report(report: &SweepReport, dir: &Path) -> Result<ReportPaths> {
    fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{}.csv", report.claim.name()));
    let json = dir.join(format!("{}.json", report.claim.name()));
    fs::write(&csv, render_csv(&report.records))?;
    let mut text = serde_json::to_string_pretty(&report.summary())?;
    text.push('\n');
    fs::write(&json, text)?;
    Ok(ReportPaths { csv, json })
}

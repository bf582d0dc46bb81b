//! Parameter sweeps, grids, figure presets and transmissivity optimization.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferometry::{diff_of, phase_sensitivity, Sensitivity};
use crate::params::{MziScenario, NgOpParams};
use crate::state::success_probability;

/// Environment variable capping the worker count of parallel sweeps.
pub const THREADS_ENV: &str = "NGMZI_THREADS";

/// Optimization keeps `tau` inside `[TAU_MARGIN, 1 - TAU_MARGIN]`.
pub const TAU_MARGIN: f64 = 1e-3;
pub const COARSE_POINTS: usize = 101;
pub const TAU_TOLERANCE: f64 = 1e-4;

/// Per-record annotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// Success probability at or below the threshold; nothing else is defined.
    Undefined,
    /// Vanishing parity slope for the heralded state.
    Divergent,
    /// Vanishing parity slope for the squeezed-vacuum reference.
    BaselineDivergent,
    /// More than one local maximum on the coarse optimization grid.
    Multimodal,
    /// Refinement was abandoned in favour of the coarse-grid incumbent.
    Fallback,
    /// The optimum sits on the edge of the allowed `tau` interval.
    Boundary,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::Undefined => "undefined",
            Flag::Divergent => "divergent",
            Flag::BaselineDivergent => "baseline_divergent",
            Flag::Multimodal => "multimodal",
            Flag::Fallback => "fallback",
            Flag::Boundary => "boundary",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub m: usize,
    pub n: usize,
    pub r: f64,
    pub tau: f64,
    pub phi: f64,
    pub dx: f64,
    pub dp: f64,
    pub p_ng: f64,
    pub parity: f64,
    pub dparity: f64,
    pub delta_phi: f64,
    pub delta_phi_svs: f64,
    pub d_ng: f64,
    pub pxd: f64,
    pub flags: Vec<Flag>,
}

impl Record {
    pub fn has(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    /// `D^NG` when both sensitivities are finite.
    pub fn d(&self) -> Option<f64> {
        self.d_ng.is_finite().then_some(self.d_ng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    R,
    Tau,
    Phi,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" => Ok(Axis::R),
            "tau" => Ok(Axis::Tau),
            "phi" => Ok(Axis::Phi),
            _ => Err(Error::InvalidParameter(format!(
                "unknown axis '{s}' (r, tau, phi)"
            ))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::R => "r",
            Axis::Tau => "tau",
            Axis::Phi => "phi",
        })
    }
}

/// Values held fixed during a sweep; the swept one is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fixed {
    pub r: f64,
    pub tau: f64,
    pub phi: f64,
    pub dx: f64,
    pub dp: f64,
}

impl Default for Fixed {
    fn default() -> Self {
        Self {
            r: 0.5,
            tau: 0.9,
            phi: 0.01,
            dx: 2.0,
            dp: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: Axis,
    pub range: (f64, f64),
    pub points: usize,
    pub fixed: Fixed,
    pub states: Vec<(usize, usize)>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check_range(&self.axis.to_string(), self.range, self.points)?;
        if self.axis == Axis::Tau {
            check_unit(self.range)?;
        }
        if self.states.is_empty() {
            return Err(Error::InvalidParameter("no states to sweep".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.range, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_range: (f64, f64),
    pub tau_range: (f64, f64),
    pub r_points: usize,
    pub tau_points: usize,
    pub phi: f64,
    pub dx: f64,
    pub dp: f64,
    pub state: (usize, usize),
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        check_range("r", self.r_range, self.r_points)?;
        check_range("tau", self.tau_range, self.tau_points)?;
        check_unit(self.tau_range)
    }
}

fn check_range(name: &str, (lo, hi): (f64, f64), points: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "empty {name} range [{lo}, {hi}]"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "{name} needs at least 2 points"
        )));
    }
    Ok(())
}

fn check_unit((lo, hi): (f64, f64)) -> Result<()> {
    if lo < 0.0 || hi > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "tau range [{lo}, {hi}] outside [0, 1]"
        )));
    }
    Ok(())
}

/// `points` evenly spaced values, both ends included.
pub fn linspace((lo, hi): (f64, f64), points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Serial,
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Order-preserving map, in parallel unless `exec` says otherwise.
fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Serial => items.iter().map(f).collect(),
        Execution::Parallel => match thread_cap()
            .and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok())
        {
            Some(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            None => items.par_iter().map(&f).collect(),
        },
    }
}

type BaselineKey = [u64; 4];

fn baseline_key(r: f64, phi: f64, dx: f64, dp: f64) -> BaselineKey {
    [r.to_bits(), phi.to_bits(), dx.to_bits(), dp.to_bits()]
}

fn baseline_sensitivity(r: f64, phi: f64, dx: f64, dp: f64) -> Result<Sensitivity> {
    let s = MziScenario::new(NgOpParams::squeezed_vacuum(r)?, dx, dp, phi)?;
    phase_sensitivity(&s)
}

/// Squeezed-vacuum reference sensitivities, filled once before the parallel
/// phase and only read afterwards.
struct BaselineCache(HashMap<BaselineKey, Sensitivity>);

impl BaselineCache {
    fn build(points: &[Point]) -> Result<Self> {
        let mut map = HashMap::new();
        for p in points {
            let key = baseline_key(p.r, p.phi, p.dx, p.dp);
            if let std::collections::hash_map::Entry::Vacant(e) = map.entry(key) {
                e.insert(baseline_sensitivity(p.r, p.phi, p.dx, p.dp)?);
            }
        }
        Ok(Self(map))
    }

    fn get(&self, p: &Point) -> Sensitivity {
        self.0[&baseline_key(p.r, p.phi, p.dx, p.dp)]
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    m: usize,
    n: usize,
    r: f64,
    tau: f64,
    phi: f64,
    dx: f64,
    dp: f64,
}

fn evaluate_point(p: &Point, baseline: &Sensitivity) -> Result<Record> {
    let ng = NgOpParams::new(p.r, p.tau, p.m, p.n)?;
    let scenario = MziScenario::new(ng, p.dx, p.dp, p.phi)?;
    let p_ng = success_probability(&ng)?;
    let mut record = Record {
        m: p.m,
        n: p.n,
        r: p.r,
        tau: p.tau,
        phi: p.phi,
        dx: p.dx,
        dp: p.dp,
        p_ng,
        parity: f64::NAN,
        dparity: f64::NAN,
        delta_phi: f64::NAN,
        delta_phi_svs: baseline.delta_phi,
        d_ng: f64::NAN,
        pxd: f64::NAN,
        flags: Vec::new(),
    };
    if baseline.divergent {
        record.flags.push(Flag::BaselineDivergent);
    }
    let sens = match phase_sensitivity(&scenario) {
        Ok(s) => s,
        Err(Error::UndefinedState(_)) => {
            record.flags.insert(0, Flag::Undefined);
            return Ok(record);
        }
        Err(e) => return Err(e),
    };
    record.parity = sens.parity;
    record.dparity = sens.dparity;
    record.delta_phi = sens.delta_phi;
    if sens.divergent {
        record.flags.insert(0, Flag::Divergent);
    }
    if let Some(d) = diff_of(baseline, &sens) {
        record.d_ng = d;
        record.pxd = p_ng * d;
    }
    Ok(record)
}

fn evaluate_all(points: &[Point], exec: Execution) -> Result<Vec<Record>> {
    let cache = BaselineCache::build(points)?;
    map_ordered(points, exec, |p| evaluate_point(p, &cache.get(p)))
        .into_iter()
        .collect()
}

/// Evaluates a single parameter point. Only hard failures are errors;
/// impossible heralds and divergent sensitivities come back as flags.
pub fn evaluate(
    state: (usize, usize),
    r: f64,
    tau: f64,
    phi: f64,
    dx: f64,
    dp: f64,
) -> Result<Record> {
    let p = Point {
        m: state.0,
        n: state.1,
        r,
        tau,
        phi,
        dx,
        dp,
    };
    evaluate_point(&p, &baseline_sensitivity(r, phi, dx, dp)?)
}

/// One record per (state, axis value), state-major.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<Record>> {
    run_sweep_with(spec, Execution::Parallel)
}

pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<Vec<Record>> {
    spec.validate()?;
    let values = spec.values();
    let f = spec.fixed;
    let mut points = Vec::with_capacity(spec.states.len() * values.len());
    for &(m, n) in &spec.states {
        for &v in &values {
            let mut p = Point {
                m,
                n,
                r: f.r,
                tau: f.tau,
                phi: f.phi,
                dx: f.dx,
                dp: f.dp,
            };
            match spec.axis {
                Axis::R => p.r = v,
                Axis::Tau => p.tau = v,
                Axis::Phi => p.phi = v,
            }
            points.push(p);
        }
    }
    evaluate_all(&points, exec)
}

/// Dense `(r, tau)` grid, `r`-major.
pub fn run_grid(spec: &GridSpec) -> Result<Vec<Record>> {
    run_grid_with(spec, Execution::Parallel)
}

pub fn run_grid_with(spec: &GridSpec, exec: Execution) -> Result<Vec<Record>> {
    spec.validate()?;
    let (m, n) = spec.state;
    let taus = linspace(spec.tau_range, spec.tau_points);
    let mut points = Vec::with_capacity(spec.r_points * spec.tau_points);
    for r in linspace(spec.r_range, spec.r_points) {
        for &tau in &taus {
            points.push(Point {
                m,
                n,
                r,
                tau,
                phi: spec.phi,
                dx: spec.dx,
                dp: spec.dp,
            });
        }
    }
    evaluate_all(&points, exec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    /// `D^NG`
    D,
    /// `P^NG * D^NG`
    PxD,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d" => Ok(Objective::D),
            "pxd" => Ok(Objective::PxD),
            _ => Err(Error::InvalidParameter(format!(
                "unknown objective '{s}' (d, pxd)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub tau: f64,
    pub value: f64,
    pub flags: Vec<Flag>,
}

/// Transmissivity objective at fixed state, squeezing, phase and displacement.
#[derive(Debug, Clone, Copy)]
pub struct TauObjective {
    state: (usize, usize),
    r: f64,
    phi: f64,
    dx: f64,
    dp: f64,
    objective: Objective,
    baseline: Sensitivity,
}

impl TauObjective {
    pub fn new(
        state: (usize, usize),
        r: f64,
        phi: f64,
        dx: f64,
        dp: f64,
        objective: Objective,
    ) -> Result<Self> {
        Ok(Self {
            state,
            r,
            phi,
            dx,
            dp,
            objective,
            baseline: baseline_sensitivity(r, phi, dx, dp)?,
        })
    }

    /// `None` where the objective is flagged (undefined or divergent).
    pub fn eval(&self, tau: f64) -> Result<Option<f64>> {
        let p = Point {
            m: self.state.0,
            n: self.state.1,
            r: self.r,
            tau,
            phi: self.phi,
            dx: self.dx,
            dp: self.dp,
        };
        let rec = evaluate_point(&p, &self.baseline)?;
        Ok(match self.objective {
            Objective::D => rec.d(),
            Objective::PxD => rec.pxd.is_finite().then_some(rec.pxd),
        })
    }
}

/// Maximizes the objective over `tau` in `[TAU_MARGIN, 1 - TAU_MARGIN]`: a
/// 101-point grid, then golden-section refinement around the best grid point
/// down to a bracket narrower than `TAU_TOLERANCE`. Ties go to the smaller
/// `tau`. An edge incumbent is returned as is, flagged [`Flag::Boundary`].
pub fn optimize_tau(
    state: (usize, usize),
    r: f64,
    phi: f64,
    dx: f64,
    dp: f64,
    objective: Objective,
) -> Result<Optimum> {
    let obj = TauObjective::new(state, r, phi, dx, dp, objective)?;
    let taus = linspace((TAU_MARGIN, 1.0 - TAU_MARGIN), COARSE_POINTS);
    let values: Vec<Option<f64>> = map_ordered(&taus, Execution::Parallel, |&t| obj.eval(t))
        .into_iter()
        .collect::<Result<_>>()?;

    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = v {
            if best.is_none_or(|b| *v > values[b].unwrap()) {
                best = Some(i);
            }
        }
    }
    let Some(best) = best else {
        return Err(Error::NoOptimum);
    };
    let incumbent = Optimum {
        tau: taus[best],
        value: values[best].unwrap(),
        flags: Vec::new(),
    };

    if local_maxima(&values) > 1 {
        return Ok(Optimum {
            flags: vec![Flag::Multimodal, Flag::Fallback],
            ..incumbent
        });
    }
    let last = taus.len() - 1;
    if best == 0 || best == last {
        // Refinement cannot leave the interval, so the edge point stands.
        return Ok(Optimum {
            flags: vec![Flag::Boundary],
            ..incumbent
        });
    }
    match golden_section(
        |t| obj.eval(t),
        taus[best - 1],
        taus[best + 1],
        TAU_TOLERANCE,
    )? {
        Some((tau, value)) if value >= incumbent.value => Ok(Optimum {
            tau,
            value,
            flags: Vec::new(),
        }),
        _ => Ok(Optimum {
            flags: vec![Flag::Fallback],
            ..incumbent
        }),
    }
}

/// Strict local maxima among defined grid values; undefined points break runs.
fn local_maxima(values: &[Option<f64>]) -> usize {
    let n = values.len();
    (0..n)
        .filter(|&i| {
            let Some(v) = values[i] else { return false };
            let left = i.checked_sub(1).and_then(|j| values[j]);
            let right = values.get(i + 1).copied().flatten();
            left.is_none_or(|l| v > l) && right.is_none_or(|r| v > r)
        })
        .count()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization on `[a, b]`. Returns the best evaluated point,
/// or `None` if the objective is undefined anywhere it was probed.
fn golden_section<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<Option<(f64, f64)>>
where
    F: Fn(f64) -> Result<Option<f64>>,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (Some(mut fc), Some(mut fd)) = (f(c)?, f(d)?) else {
        return Ok(None);
    };
    let mut best = if fd > fc { (d, fd) } else { (c, fc) };
    while b - a >= tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            let Some(v) = f(c)? else { return Ok(None) };
            fc = v;
            if fc > best.1 || (fc == best.1 && c < best.0) {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            let Some(v) = f(d)? else { return Ok(None) };
            fd = v;
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(Some(best))
}

/// Parameters pinned to reproduce one figure panel.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Sweep(SweepSpec),
    Grid(GridSpec),
}

pub const FIGURES: [&str; 13] = [
    "2a", "2b", "2c", "3a", "3b", "3c", "4a", "4b", "4c", "5a", "5b", "5c", "6",
];

const SUBTRACTED: [(usize, usize); 3] = [(0, 1), (0, 2), (0, 3)];
const ADDED: [(usize, usize); 3] = [(1, 0), (2, 0), (3, 0)];
const CATALYZED: [(usize, usize); 3] = [(1, 1), (2, 2), (3, 3)];

fn panel_states(panel: char) -> Vec<(usize, usize)> {
    match panel {
        'a' => SUBTRACTED.to_vec(),
        'b' => ADDED.to_vec(),
        _ => CATALYZED.to_vec(),
    }
}

/// Figure presets: `2*` sweep `r`, `3*` sweep `tau`, `4*` are `(r, tau)`
/// grids, `5*` sweep `phi` and `6` sweeps `tau` for all nine states.
pub fn figure(id: &str) -> Option<Preset> {
    let mut chars = id.chars();
    let fig = chars.next()?;
    let panel = chars.next();
    if chars.next().is_some() {
        return None;
    }
    let tau_for = |p: char| if p == 'c' { 0.1 } else { 0.9 };
    match (fig, panel) {
        ('2', Some(p @ 'a'..='c')) => Some(Preset::Sweep(SweepSpec {
            axis: Axis::R,
            range: (0.0, 2.0),
            points: 101,
            fixed: Fixed {
                tau: tau_for(p),
                ..Fixed::default()
            },
            states: panel_states(p),
        })),
        ('3', Some(p @ 'a'..='c')) => Some(Preset::Sweep(SweepSpec {
            axis: Axis::Tau,
            range: (0.0, 1.0),
            points: 101,
            fixed: Fixed::default(),
            states: panel_states(p),
        })),
        ('4', Some(p @ 'a'..='c')) => Some(Preset::Grid(GridSpec {
            r_range: (0.0, 2.0),
            tau_range: (0.0, 1.0),
            r_points: 41,
            tau_points: 41,
            phi: 0.01,
            dx: 2.0,
            dp: 2.0,
            state: match p {
                'a' => (0, 1),
                'b' => (1, 0),
                _ => (1, 1),
            },
        })),
        ('5', Some(p @ 'a'..='c')) => Some(Preset::Sweep(SweepSpec {
            axis: Axis::Phi,
            range: (0.005, 0.5),
            points: 100,
            fixed: Fixed {
                tau: tau_for(p),
                ..Fixed::default()
            },
            states: panel_states(p),
        })),
        ('6', None) => Some(Preset::Sweep(SweepSpec {
            axis: Axis::Tau,
            range: (TAU_MARGIN, 1.0 - TAU_MARGIN),
            points: 100,
            fixed: Fixed::default(),
            states: SUBTRACTED
                .iter()
                .chain(&ADDED)
                .chain(&CATALYZED)
                .copied()
                .collect(),
        })),
        _ => None,
    }
}

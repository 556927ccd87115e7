//! Parameter sweeps over `|α|` (or `λ` for the TMSS families) and CSV output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::entanglement::entropy_numeric;
use crate::epr::{epr_numeric, epr_psi1_closed, epr_psi2_closed};
use crate::error::{Error, Result};
use crate::optimize::{optimize_phase, Goal};
use crate::resources::{build_resource_circuit, Family, Parity, ResourceSpec};
use crate::teleport::{fidelity_bk, fidelity_optimized, CharFn, QuadratureRule, DEFAULT_NODES};
use crate::{
    CONVERGENCE_CUTOFF_STEP, CONVERGENCE_TOLERANCE, DEFAULT_CUTOFF, DEFAULT_TAIL_TOLERANCE,
};

pub const CSV_HEADER: &str =
    "family,alpha,phase,n_plus_m,entropy_bits,epr_variance,fidelity,cutoff,truncation_loss,converged";

/// Significant digits written for floating-point CSV fields.
pub const CSV_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Entropy,
    Epr,
    Fidelity,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Entropy, Metric::Epr, Metric::Fidelity];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Entropy => "entropy",
            Metric::Epr => "epr",
            Metric::Fidelity => "fidelity",
        }
    }

    /// CSV column holding this metric.
    pub fn column(self) -> &'static str {
        match self {
            Metric::Entropy => "entropy_bits",
            Metric::Epr => "epr_variance",
            Metric::Fidelity => "fidelity",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == t || m.column() == t)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown metric '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhaseChoice {
    Fixed(Vec<f64>),
    /// Optimize per row: the fidelity if requested, otherwise the total variance.
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_step: f64,
    pub phases: PhaseChoice,
    pub subtraction_totals: Vec<usize>,
    pub cutoff: usize,
    pub metrics: Vec<Metric>,
    pub quadrature_nodes: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            family: Family::PacsSplit,
            alpha_min: 0.0,
            alpha_max: 2.0,
            alpha_step: 0.05,
            phases: PhaseChoice::Fixed(vec![0.0]),
            subtraction_totals: vec![0],
            cutoff: DEFAULT_CUTOFF,
            metrics: Metric::ALL.to_vec(),
            quadrature_nodes: DEFAULT_NODES,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if !(self.alpha_min >= 0.0 && self.alpha_min.is_finite()) {
            return bad(format!("alpha_min must be >= 0, got {}", self.alpha_min));
        }
        if !(self.alpha_step > 0.0 && self.alpha_step.is_finite()) {
            return bad(format!("alpha_step must be > 0, got {}", self.alpha_step));
        }
        if !(self.alpha_max >= self.alpha_min && self.alpha_max.is_finite()) {
            return bad(format!(
                "alpha_max ({}) must be >= alpha_min ({})",
                self.alpha_max, self.alpha_min
            ));
        }
        if self.family.is_tmss() && self.alpha_max >= 1.0 {
            return bad("lambda must stay below 1 for TMSS families".into());
        }
        if self.subtraction_totals.is_empty() {
            return bad("at least one n+m value is required".into());
        }
        if self.metrics.is_empty() {
            return bad("at least one metric is required".into());
        }
        if self.cutoff < 1 {
            return bad("cutoff must be at least 1".into());
        }
        if self.quadrature_nodes < 2 {
            return bad("quadrature needs at least 2 nodes".into());
        }
        if let PhaseChoice::Fixed(p) = &self.phases {
            if p.is_empty() || p.iter().any(|x| !x.is_finite()) {
                return bad("phases must be a non-empty list of finite values".into());
            }
        }
        Ok(())
    }

    /// Grid `alpha_min + i·alpha_step` up to `alpha_max` (with a relative slack
    /// of 1e-9 steps so that decimal endpoints are included).
    pub fn alphas(&self) -> Vec<f64> {
        let span = (self.alpha_max - self.alpha_min) / self.alpha_step;
        let count = (span + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| (self.alpha_min + i as f64 * self.alpha_step).min(self.alpha_max))
            .collect()
    }

    pub fn has(&self, metric: Metric) -> bool {
        self.metrics.contains(&metric)
    }

    /// Builds a spec from `key=value` pairs; unknown keys are rejected.
    /// Keys: family, alpha_min, alpha_max, alpha_step, phase, nm, cutoff,
    /// metrics, quadrature_nodes.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut spec = SweepSpec::default();
        for (key, value) in map {
            let v = value.trim();
            match key.as_str() {
                "family" => spec.family = v.parse()?,
                "alpha_min" => spec.alpha_min = parse_f64(key, v)?,
                "alpha_max" => spec.alpha_max = parse_f64(key, v)?,
                "alpha_step" => spec.alpha_step = parse_f64(key, v)?,
                "phase" | "phases" => {
                    spec.phases = if v.eq_ignore_ascii_case("auto") {
                        PhaseChoice::Auto
                    } else {
                        PhaseChoice::Fixed(
                            split_list(v)
                                .map(|p| parse_f64(key, p))
                                .collect::<Result<_>>()?,
                        )
                    }
                }
                "nm" | "n_plus_m" => {
                    spec.subtraction_totals = split_list(v)
                        .map(|p| {
                            p.parse::<usize>().map_err(|_| {
                                Error::InvalidSpec(format!("{key}: bad integer '{p}'"))
                            })
                        })
                        .collect::<Result<_>>()?
                }
                "cutoff" => {
                    spec.cutoff = v
                        .parse()
                        .map_err(|_| Error::InvalidSpec(format!("cutoff: bad integer '{v}'")))?
                }
                "metrics" => {
                    spec.metrics = split_list(v).map(Metric::parse).collect::<Result<_>>()?
                }
                "quadrature_nodes" => {
                    spec.quadrature_nodes = v.parse().map_err(|_| {
                        Error::InvalidSpec(format!("quadrature_nodes: bad integer '{v}'"))
                    })?
                }
                other => return Err(Error::InvalidSpec(format!("unknown key '{other}'"))),
            }
        }
        spec.metrics.sort();
        spec.metrics.dedup();
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let t = v.trim();
    let parsed = match t.to_ascii_lowercase().as_str() {
        "pi" => Ok(std::f64::consts::PI),
        "pi/2" => Ok(std::f64::consts::FRAC_PI_2),
        "pi/4" => Ok(std::f64::consts::FRAC_PI_4),
        _ => t.parse::<f64>(),
    };
    parsed.map_err(|_| Error::InvalidSpec(format!("{key}: bad number '{v}'")))
}

fn split_list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidSpec(format!("line {}: expected key=value", i + 1)))?;
        map.insert(
            k.trim().to_ascii_lowercase().replace('-', "_"),
            v.trim().to_string(),
        );
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricRecord {
    pub family: Family,
    /// `|α|`, or `λ` for TMSS families.
    pub alpha_mod: f64,
    pub phase: f64,
    pub n_plus_m: usize,
    pub entropy_bits: Option<f64>,
    pub epr_variance: Option<f64>,
    pub fidelity: Option<f64>,
    pub cutoff_used: usize,
    pub truncation_loss: f64,
    pub converged: bool,
    /// Why the row is not converged, if it is not.
    pub reason: Option<String>,
}

impl MetricRecord {
    fn failed(
        family: Family,
        alpha_mod: f64,
        phase: f64,
        n_plus_m: usize,
        cutoff: usize,
        e: &Error,
    ) -> Self {
        Self {
            family,
            alpha_mod,
            phase,
            n_plus_m,
            entropy_bits: None,
            epr_variance: None,
            fidelity: None,
            cutoff_used: cutoff,
            truncation_loss: 0.0,
            converged: false,
            reason: Some(e.to_string()),
        }
    }

    pub fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.family,
            format_sig(self.alpha_mod),
            format_sig(self.phase),
            self.n_plus_m,
            opt(self.entropy_bits),
            opt(self.epr_variance),
            opt(self.fidelity),
            self.cutoff_used,
            format_sig(self.truncation_loss),
            self.converged
        )
    }
}

/// Decimal (never exponential) formatting with [`CSV_DIGITS`] significant digits.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (CSV_DIGITS as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit
    let digits = s
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count();
    if digits > CSV_DIGITS && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

pub fn to_csv(records: &[MetricRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

fn resource_spec(
    family: Family,
    x: f64,
    phase: f64,
    n_plus_m: usize,
    cutoff: usize,
) -> ResourceSpec {
    let spec = if family.is_tmss() {
        ResourceSpec::tmss(family, x)
    } else {
        ResourceSpec::split(family, x, phase, n_plus_m)
    };
    spec.with_cutoff(cutoff)
}

fn choose_phase(
    spec: &SweepSpec,
    alpha: f64,
    n_plus_m: usize,
    rule: &QuadratureRule,
) -> Result<f64> {
    if spec.family.is_tmss() {
        return Ok(0.0);
    }
    if spec.has(Metric::Fidelity) {
        let (opt, _) = fidelity_optimized(spec.family, alpha, n_plus_m, spec.cutoff, rule)?;
        return Ok(opt.phase);
    }
    if spec.has(Metric::Epr) {
        let opt = match spec.family {
            Family::PacsSplit => optimize_phase(
                |p| epr_psi1_closed(alpha, p, n_plus_m).total_variance,
                Goal::Minimize,
            ),
            _ => {
                let parity = Parity::of(n_plus_m);
                epr_psi2_closed(alpha, 0.0, parity)?;
                optimize_phase(
                    |p| {
                        epr_psi2_closed(alpha, p, parity)
                            .map(|r| r.total_variance)
                            .unwrap_or(f64::INFINITY)
                    },
                    Goal::Minimize,
                )
            }
        };
        return Ok(if opt.flat { 0.0 } else { opt.phase });
    }
    Ok(0.0)
}

struct Evaluated {
    entropy: Option<f64>,
    epr: Option<f64>,
    fidelity: Option<f64>,
    loss: f64,
}

fn evaluate(
    spec: &SweepSpec,
    rs: &ResourceSpec,
    rule: &QuadratureRule,
    with_fidelity: bool,
) -> Result<Evaluated> {
    let state = build_resource_circuit(rs)?;
    let entropy = if spec.has(Metric::Entropy) {
        Some(entropy_numeric(&state)?.entropy_bits)
    } else {
        None
    };
    let epr = if spec.has(Metric::Epr) {
        Some(epr_numeric(&state)?.total_variance)
    } else {
        None
    };
    let fidelity = if with_fidelity && spec.has(Metric::Fidelity) {
        let cf = if rs.family.is_split() {
            CharFn::closed(rs)?
        } else {
            CharFn::numeric(&state)?
        };
        Some(fidelity_bk(&cf, rule)?.fidelity)
    } else {
        None
    };
    Ok(Evaluated {
        entropy,
        epr,
        fidelity,
        loss: state.truncation_loss(),
    })
}

fn run_row(
    spec: &SweepSpec,
    x: f64,
    phase: Option<f64>,
    n_plus_m: usize,
    rule: &QuadratureRule,
) -> MetricRecord {
    let phase_for_fail = phase.unwrap_or(0.0);
    let row = || -> Result<MetricRecord> {
        let phase = match phase {
            Some(p) => p,
            None => choose_phase(spec, x, n_plus_m, rule)?,
        };
        let rs = resource_spec(spec.family, x, phase, n_plus_m, spec.cutoff);
        rs.validate()?;
        let base = evaluate(spec, &rs, rule, true)?;
        // fidelities of split families come from closed-form characteristic
        // functions and do not depend on the cutoff
        let refine_fidelity = spec.family.is_tmss();
        let finer = resource_spec(
            spec.family,
            x,
            phase,
            n_plus_m,
            spec.cutoff + CONVERGENCE_CUTOFF_STEP,
        );
        let check = evaluate(spec, &finer, rule, refine_fidelity)?;
        let shift = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ => 0.0,
        };
        let worst = shift(base.entropy, check.entropy)
            .max(shift(base.epr, check.epr))
            .max(shift(base.fidelity, check.fidelity));
        let mut reasons = Vec::new();
        if worst >= CONVERGENCE_TOLERANCE {
            reasons.push(format!(
                "metric moved by {worst:.3e} at cutoff {}",
                finer.cutoff
            ));
        }
        if base.loss >= DEFAULT_TAIL_TOLERANCE {
            reasons.push(format!("truncation loss {:.3e}", base.loss));
        }
        Ok(MetricRecord {
            family: spec.family,
            alpha_mod: x,
            phase,
            n_plus_m: if spec.family.is_tmss() {
                rs.n_plus_m()
            } else {
                n_plus_m
            },
            entropy_bits: base.entropy,
            epr_variance: base.epr,
            fidelity: base.fidelity,
            cutoff_used: spec.cutoff,
            truncation_loss: base.loss,
            converged: reasons.is_empty(),
            reason: if reasons.is_empty() {
                None
            } else {
                Some(reasons.join("; "))
            },
        })
    };
    row().unwrap_or_else(|e| {
        MetricRecord::failed(spec.family, x, phase_for_fail, n_plus_m, spec.cutoff, &e)
    })
}

/// One record per `(alpha, n+m, phase)`, ordered by alpha, then n+m, then
/// phase. Rows are computed in parallel; the result does not depend on the
/// thread count. Per-row failures are reported in the row.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<MetricRecord>> {
    spec.validate()?;
    let rule = QuadratureRule::gauss_hermite(spec.quadrature_nodes)?;
    let totals: Vec<usize> = if spec.family.is_tmss() {
        vec![ResourceSpec::tmss(spec.family, 0.0).n_plus_m()]
    } else {
        spec.subtraction_totals.clone()
    };
    let phases: Vec<Option<f64>> = match &spec.phases {
        PhaseChoice::Fixed(p) if spec.family.is_tmss() => vec![Some(p[0])],
        PhaseChoice::Fixed(p) => p.iter().copied().map(Some).collect(),
        PhaseChoice::Auto => vec![None],
    };
    let mut tasks = Vec::new();
    for x in spec.alphas() {
        for &nm in &totals {
            for &p in &phases {
                tasks.push((x, nm, p));
            }
        }
    }
    Ok(tasks
        .into_par_iter()
        .map(|(x, nm, p)| run_row(spec, x, p, nm, &rule))
        .collect())
}

/// A gnuplot script plotting `metric` against alpha, one curve per n+m.
pub fn gnuplot_script(spec: &SweepSpec, csv_path: &str, metric: Metric) -> String {
    let column = match metric {
        Metric::Entropy => 5,
        Metric::Epr => 6,
        Metric::Fidelity => 7,
    };
    let xlabel = if spec.family.is_tmss() {
        "lambda"
    } else {
        "|alpha|"
    };
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{}'", metric.column());
    let totals: Vec<usize> = if spec.family.is_tmss() {
        vec![]
    } else {
        spec.subtraction_totals.clone()
    };
    if totals.is_empty() {
        let _ = writeln!(
            s,
            "plot '{csv_path}' using 2:{column} with lines title '{}'",
            spec.family
        );
    } else {
        let curves: Vec<String> = totals
            .iter()
            .map(|nm| {
                format!(
                    "'{csv_path}' using 2:($4=={nm} ? ${column} : 1/0) with lines title 'n+m={nm}'"
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    }
    s
}

//! The artifact-producing subcommands: zero tables, series demos, single
//! evaluations, grid sweeps, and extension probes.

use std::str::FromStr;

use annulus_harmonics::cross::{self, AnnulusGeometry};
use annulus_harmonics::expansions;
use annulus_harmonics::green::{CylinderGreen, Pole, ReducedPoint, TruncationSpec};
use annulus_harmonics::special::Order;
use annulus_harmonics::zeros::{self, ZeroTable};

use crate::config::{OutputFormat, RunConfig};
use crate::emit::{self, fmt17, Json};
use crate::fault::CliError;

/// `ry,zy` — pole radius and axial position.
#[derive(Debug, Clone, Copy)]
pub struct PoleArg {
    pub ry: f64,
    pub zy: f64,
}

impl FromStr for PoleArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts = split_floats(s)?;
        match parts.as_slice() {
            [ry, zy] => Ok(PoleArg { ry: *ry, zy: *zy }),
            _ => Err("expected `ry,zy`".into()),
        }
    }
}

/// `r,gamma,z` — reduced coordinates of a field point: radius, cosine of
/// the angular separation from the pole, axial position.
#[derive(Debug, Clone, Copy)]
pub struct PointArg {
    pub r: f64,
    pub gamma: f64,
    pub z: f64,
}

impl FromStr for PointArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts = split_floats(s)?;
        match parts.as_slice() {
            [r, gamma, z] => Ok(PointArg {
                r: *r,
                gamma: *gamma,
                z: *z,
            }),
            _ => Err("expected `r,gamma,z`".into()),
        }
    }
}

/// `lo:hi:count` — inclusive evenly spaced samples.
#[derive(Debug, Clone, Copy)]
pub struct RangeArg {
    pub lo: f64,
    pub hi: f64,
    pub count: u32,
}

impl FromStr for RangeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err("expected `lo:hi:count`".into());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| format!("bad number `{lo}`"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| format!("bad number `{hi}`"))?;
        let count: u32 = count
            .trim()
            .parse()
            .map_err(|_| format!("bad count `{count}`"))?;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err("range ends must be finite".into());
        }
        if count == 0 {
            return Err("count must be at least 1".into());
        }
        if count == 1 && lo != hi {
            return Err("a single sample needs lo = hi".into());
        }
        if lo > hi {
            return Err("range needs lo <= hi".into());
        }
        Ok(RangeArg { lo, hi, count })
    }
}

impl RangeArg {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / f64::from(self.count - 1);
        (0..self.count)
            .map(|i| self.lo + f64::from(i) * step)
            .collect()
    }
}

fn split_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number `{p}`"))
        })
        .collect()
}

fn geometry(cfg: &RunConfig) -> Result<AnnulusGeometry, CliError> {
    Ok(AnnulusGeometry::new(cfg.b, cfg.dim)?)
}

fn truncation(cfg: &RunConfig) -> Result<TruncationSpec, CliError> {
    Ok(TruncationSpec::new(cfg.n_max, cfg.m_max, cfg.tail_tol)?
        .with_min_axial_gap(cfg.min_axial_gap)?)
}

fn order(nu: f64) -> Result<Order, CliError> {
    Ok(Order::new(nu)?)
}

fn write(cfg: &RunConfig, content: &str) -> Result<(), CliError> {
    emit::write_artifact(cfg.path.as_deref(), content)
        .map_err(|e| CliError::Io(format!("writing artifact: {e}")))
}

/// Shared JSON context fields describing the run.
fn run_context(command: &str, cfg: &RunConfig) -> Vec<(&'static str, Json)> {
    vec![
        ("command", Json::Str(command.into())),
        ("version", Json::Str(env!("CARGO_PKG_VERSION").into())),
        ("b", Json::Num(cfg.b)),
        ("dim", Json::Int(i64::from(cfg.dim))),
    ]
}

/// `zeros`: certified table of the first `count` radial eigenvalues.
pub fn zeros(cfg: &RunConfig, nu: f64, count: u32) -> Result<(), CliError> {
    let geom = geometry(cfg)?;
    let table = zeros::rho_zeros(order(nu)?, &geom, count)?;
    let text = match cfg.format_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = table
                .zeros()
                .iter()
                .map(|z| {
                    vec![
                        z.index.to_string(),
                        fmt17(z.value),
                        fmt17(z.bracket_lo),
                        fmt17(z.bracket_hi),
                        fmt17(z.residual),
                        fmt17(z.deriv_at_zero),
                    ]
                })
                .collect();
            emit::csv(
                "zeros",
                &[("nu", fmt17(nu)), ("b", fmt17(cfg.b))],
                &["index", "value", "bracket_lo", "bracket_hi", "residual", "deriv_at_zero"],
                &rows,
            )
        }
        OutputFormat::Json => {
            let mut doc = run_context("zeros", cfg);
            doc.push(("nu", Json::Num(nu)));
            doc.push(("count", Json::Int(i64::from(count))));
            let rows = table
                .zeros()
                .iter()
                .map(|z| {
                    Json::Obj(vec![
                        ("index", Json::Int(i64::from(z.index))),
                        ("value", Json::Num(z.value)),
                        ("bracket_lo", Json::Num(z.bracket_lo)),
                        ("bracket_hi", Json::Num(z.bracket_hi)),
                        ("residual", Json::Num(z.residual)),
                        ("deriv_at_zero", Json::Num(z.deriv_at_zero)),
                    ])
                })
                .collect();
            doc.push(("zeros", Json::Arr(rows)));
            Json::Obj(doc).render()
        }
    };
    write(cfg, &text)
}

/// Magnitude of the final retained term of the kernel expansion at `t` —
/// the heuristic tail proxy reported alongside the partial sums.
fn last_term_magnitude(table: &ZeroTable, s: f64, t: f64) -> Result<f64, CliError> {
    let geom = table.geom();
    let nu = table.nu();
    let z = match table.zeros().last() {
        Some(z) => z,
        None => return Ok(0.0),
    };
    let factor = if nu.get() > 0.0 { 2.0 * nu.get() } else { 1.0 };
    let us = cross::cross_product(nu, z.value, s, &geom)?;
    let ut = cross::cross_product(nu, z.value, t, &geom)?;
    let norm = expansions::norm_integral(nu, z, 1.0, &geom)?;
    Ok((factor * us * ut / (z.value * z.value * norm)).abs())
}

/// `series`: partial sums of the Dini expansion of the tent kernel on a
/// t-grid, against the closed form it converges to.
pub fn series(cfg: &RunConfig, nu: f64, s: f64, m_terms: u32, points: u32) -> Result<(), CliError> {
    if points < 2 {
        return Err(CliError::Usage("series needs at least 2 grid points".into()));
    }
    let geom = geometry(cfg)?;
    let nu = order(nu)?;
    if !(1.0 < s && s < cfg.b) {
        return Err(CliError::Usage("series needs 1 < s < b".into()));
    }
    let table = zeros::rho_zeros(nu, &geom, m_terms)?;
    let step = (cfg.b - 1.0) / f64::from(points - 1);
    let mut rows: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(points as usize);
    let mut tail_proxy_max = 0.0f64;
    for i in 0..points {
        let t = 1.0 + f64::from(i) * step;
        let partial = expansions::series_kernel_with_table(&table, s, t)?;
        let closed = expansions::series_kernel_closed(nu, s, t, &geom)?;
        tail_proxy_max = tail_proxy_max.max(last_term_magnitude(&table, s, t)?);
        rows.push((t, partial, closed, (partial - closed).abs()));
    }
    let text = match cfg.format_or(OutputFormat::Csv) {
        OutputFormat::Csv => emit::csv(
            "series",
            &[
                ("nu", fmt17(nu.get())),
                ("s", fmt17(s)),
                ("b", fmt17(cfg.b)),
                ("m_terms", m_terms.to_string()),
                ("tail_proxy_max", fmt17(tail_proxy_max)),
            ],
            &["t", "partial_sum", "closed_form", "abs_err"],
            &rows
                .iter()
                .map(|(t, p, c, e)| vec![fmt17(*t), fmt17(*p), fmt17(*c), fmt17(*e)])
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Json => {
            let mut doc = run_context("series", cfg);
            doc.push(("nu", Json::Num(nu.get())));
            doc.push(("s", Json::Num(s)));
            doc.push(("m_terms", Json::Int(i64::from(m_terms))));
            doc.push(("tail_proxy_max", Json::Num(tail_proxy_max)));
            doc.push((
                "rows",
                Json::Arr(
                    rows.iter()
                        .map(|(t, p, c, e)| {
                            Json::Obj(vec![
                                ("t", Json::Num(*t)),
                                ("partial_sum", Json::Num(*p)),
                                ("closed_form", Json::Num(*c)),
                                ("abs_err", Json::Num(*e)),
                            ])
                        })
                        .collect(),
                ),
            ));
            Json::Obj(doc).render()
        }
    };
    write(cfg, &text)
}

fn truncation_fields(cfg: &RunConfig) -> Vec<(&'static str, Json)> {
    vec![
        ("n_max", Json::Int(i64::from(cfg.n_max))),
        ("m_max", Json::Int(i64::from(cfg.m_max))),
        ("tail_tol", Json::Num(cfg.tail_tol)),
        ("min_axial_gap", Json::Num(cfg.min_axial_gap)),
    ]
}

fn pole_json(pole: &PoleArg) -> Json {
    Json::Obj(vec![
        ("ry", Json::Num(pole.ry)),
        ("zy", Json::Num(pole.zy)),
    ])
}

fn point_json(pt: &PointArg) -> Json {
    Json::Obj(vec![
        ("r", Json::Num(pt.r)),
        ("gamma", Json::Num(pt.gamma)),
        ("z", Json::Num(pt.z)),
    ])
}

fn terms_used(cfg: &RunConfig) -> i64 {
    (i64::from(cfg.n_max) + 1) * i64::from(cfg.m_max)
}

/// One evaluated point rendered in the five-column field schema.
fn point_row(pt: &PointArg, value: f64, tail: f64) -> Vec<String> {
    vec![
        fmt17(pt.r),
        fmt17(pt.gamma),
        fmt17(pt.z),
        fmt17(value),
        fmt17(tail),
    ]
}

/// `eval`: the cylinder Green function at one point.
pub fn eval(cfg: &RunConfig, pole: &PoleArg, pt: &PointArg) -> Result<(), CliError> {
    let geom = geometry(cfg)?;
    let cg = CylinderGreen::new(geom, truncation(cfg)?)?;
    let y = Pole::new(pole.ry, pole.zy, &geom)?;
    let x = ReducedPoint::new(pt.r, pt.gamma, pt.z)?;
    let (value, tail) = cg.eval(&x, &y)?;
    let text = match cfg.format_or(OutputFormat::Json) {
        OutputFormat::Json => {
            let mut doc = run_context("eval", cfg);
            doc.extend(truncation_fields(cfg));
            doc.push(("pole", pole_json(pole)));
            doc.push(("point", point_json(pt)));
            doc.push(("value", Json::Num(value)));
            doc.push(("tail_estimate", Json::Num(tail)));
            doc.push(("terms_used", Json::Int(terms_used(cfg))));
            Json::Obj(doc).render()
        }
        OutputFormat::Csv => emit::csv(
            "eval",
            &[
                ("pole_ry", fmt17(pole.ry)),
                ("pole_zy", fmt17(pole.zy)),
                ("b", fmt17(cfg.b)),
            ],
            &["r", "gamma", "z", "value", "tail"],
            &[point_row(pt, value, tail)],
        ),
    };
    write(cfg, &text)
}

/// `field`: rectangular sweep in (r, gamma, z), row order fixed by the
/// nested ranges, never by completion order.
pub fn field(
    cfg: &RunConfig,
    pole: &PoleArg,
    r: &RangeArg,
    gamma: &RangeArg,
    z: &RangeArg,
) -> Result<(), CliError> {
    let geom = geometry(cfg)?;
    let cg = CylinderGreen::new(geom, truncation(cfg)?)?;
    let y = Pole::new(pole.ry, pole.zy, &geom)?;
    let mut rows: Vec<(PointArg, f64, f64)> = Vec::new();
    for rv in r.values() {
        for gv in gamma.values() {
            for zv in z.values() {
                let pt = PointArg {
                    r: rv,
                    gamma: gv,
                    z: zv,
                };
                let x = ReducedPoint::new(pt.r, pt.gamma, pt.z)?;
                let (value, tail) = cg.eval(&x, &y)?;
                rows.push((pt, value, tail));
            }
        }
    }
    let text = match cfg.format_or(OutputFormat::Csv) {
        OutputFormat::Csv => emit::csv(
            "field",
            &[
                ("pole_ry", fmt17(pole.ry)),
                ("pole_zy", fmt17(pole.zy)),
                ("b", fmt17(cfg.b)),
                ("dim", cfg.dim.to_string()),
            ],
            &["r", "gamma", "z", "value", "tail"],
            &rows
                .iter()
                .map(|(pt, v, t)| point_row(pt, *v, *t))
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Json => {
            let mut doc = run_context("field", cfg);
            doc.extend(truncation_fields(cfg));
            doc.push(("pole", pole_json(pole)));
            doc.push((
                "rows",
                Json::Arr(
                    rows.iter()
                        .map(|(pt, v, t)| {
                            Json::Obj(vec![
                                ("r", Json::Num(pt.r)),
                                ("gamma", Json::Num(pt.gamma)),
                                ("z", Json::Num(pt.z)),
                                ("value", Json::Num(*v)),
                                ("tail", Json::Num(*t)),
                            ])
                        })
                        .collect(),
                ),
            ));
            Json::Obj(doc).render()
        }
    };
    write(cfg, &text)
}

/// `extend`: the harmonic extension of the Green function beyond the
/// walls, inside its convergence region.
pub fn extend(cfg: &RunConfig, pole: &PoleArg, pt: &PointArg) -> Result<(), CliError> {
    let geom = geometry(cfg)?;
    let b_prime = cfg.resolved_b_prime();
    let cg = CylinderGreen::new(geom, truncation(cfg)?)?;
    let y = Pole::new(pole.ry, pole.zy, &geom)?;
    let x = ReducedPoint::new(pt.r, pt.gamma, pt.z)?;
    let (value, tail) = cg.extend(&x, &y, b_prime)?;
    let text = match cfg.format_or(OutputFormat::Json) {
        OutputFormat::Json => {
            let mut doc = run_context("extend", cfg);
            doc.extend(truncation_fields(cfg));
            doc.push(("b_prime", Json::Num(b_prime)));
            doc.push(("pole", pole_json(pole)));
            doc.push(("point", point_json(pt)));
            doc.push(("value", Json::Num(value)));
            doc.push(("tail_estimate", Json::Num(tail)));
            doc.push(("terms_used", Json::Int(terms_used(cfg))));
            Json::Obj(doc).render()
        }
        OutputFormat::Csv => emit::csv(
            "extend",
            &[
                ("pole_ry", fmt17(pole.ry)),
                ("pole_zy", fmt17(pole.zy)),
                ("b", fmt17(cfg.b)),
                ("b_prime", fmt17(b_prime)),
            ],
            &["r", "gamma", "z", "value", "tail"],
            &[point_row(pt, value, tail)],
        ),
    };
    write(cfg, &text)
}

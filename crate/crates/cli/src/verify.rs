//! The `verify` subcommand: self-contained identity suites with pinned
//! grids and bounds, reported as machine-readable JSON.
//!
//! Each suite re-derives a quantity two independent ways (closed form vs
//! quadrature, series vs limit, certified zero vs analytic bound) and
//! records the worst deviation next to the bound it must stay under.  The
//! suites pin their own geometries and grids so a report is comparable
//! across runs regardless of the ambient configuration.

use std::f64::consts::PI;

use annulus_harmonics::cross::{self, AnnulusGeometry};
use annulus_harmonics::expansions::{self, TentKernel};
use annulus_harmonics::green::{CylinderGreen, Pole, ReducedPoint, TruncationSpec};
use annulus_harmonics::oracles::{self, Bump, SlabSpec};
use annulus_harmonics::special::{bessel_jy, Order};
use annulus_harmonics::zeros;

use crate::config::RunConfig;
use crate::emit::{self, Json};
use crate::fault::CliError;

/// One measured deviation against the bound it must stay strictly under.
struct Check {
    id: String,
    measured: f64,
    bound: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.measured < self.bound
    }
}

type SuiteFn = fn() -> Result<Vec<Check>, CliError>;

/// Suite registry: name, the identity it checks, builder.  The oracle
/// suite runs first so that a broken yardstick is reported before any
/// measurement taken with it.
const SUITES: &[(&str, &str, SuiteFn)] = &[
    (
        "oracle",
        "classical constants: quadrature of 4/(1+t^2) over [0,1] = pi, \
         (sin)'' = -sin, and the distributional constants of -ln r and 1/r",
        suite_oracle,
    ),
    (
        "wronskian",
        "J_nu(t) Y_nu'(t) - J_nu'(t) Y_nu(t) = 2/(pi t)",
        suite_wronskian,
    ),
    (
        "half_integer",
        "at b = 2 the half-order eigenvalues are rho_{1/2,m} = m pi",
        suite_half_integer,
    ),
    (
        "spacing",
        "consecutive eigenvalues satisfy rho_{nu,m+1} - rho_{nu,m} > pi/(2b - 1)",
        suite_spacing,
    ),
    (
        "lower_bound",
        "every eigenvalue satisfies rho_{nu,m} > (nu + m/4)/b",
        suite_lower_bound,
    ),
    (
        "norm",
        "the closed-form eigenfunction norm matches direct quadrature of U^2 t",
        suite_norm,
    ),
    (
        "moment",
        "the tent-weighted cylinder-function moment matches its closed form",
        suite_moment,
    ),
    (
        "kernel_expansion",
        "the eigenfunction expansion of the tent kernel converges to its closed form",
        suite_kernel_expansion,
    ),
    (
        "cross_ode",
        "u_x (x u_x - y u_y) = 4/pi^2 at every zero of the scaled cross product u",
        suite_cross_ode,
    ),
    (
        "green_symmetry",
        "the cylinder Green function satisfies G(x, y) = G(y, x) and G > 0 inside",
        suite_green_symmetry,
    ),
];

/// Long help text enumerating the suites and the identity each one checks.
pub fn long_help() -> String {
    let mut s = String::from(
        "Run identity suites and report the worst deviation per check.\n\n\
         Each suite pins its own geometry and grids; the run configuration\n\
         only selects the output destination. Available suites:\n",
    );
    for (name, identity, _) in SUITES {
        s.push_str(&format!("\n  {name}\n      {identity}\n"));
    }
    s
}

fn geom(b: f64) -> Result<AnnulusGeometry, CliError> {
    Ok(AnnulusGeometry::new(b, 3)?)
}

fn order(nu: f64) -> Result<Order, CliError> {
    Ok(Order::new(nu)?)
}

fn rel_dev(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

/// Classical constants that exercise the quadrature, finite-difference,
/// and distributional-identity machinery on known ground.
fn suite_oracle() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();

    let q = oracles::quad_adaptive(|t| Ok(4.0 / (1.0 + t * t)), 0.0, 1.0, 1e-13)?;
    checks.push(Check {
        id: "quad_pi".into(),
        measured: (q.value - PI).abs(),
        bound: 1e-11,
    });

    // integral of t ln t over [1, 2] = 2 ln 2 - 3/4.
    let q = oracles::quad_adaptive(|t| Ok(t * t.ln()), 1.0, 2.0, 1e-13)?;
    checks.push(Check {
        id: "quad_t_ln_t".into(),
        measured: (q.value - (2.0 * 2.0f64.ln() - 0.75)).abs(),
        bound: 1e-11,
    });

    let d2 = oracles::fd_second_derivative(|t| Ok(t.sin()), 1.0, 1e-4)?;
    checks.push(Check {
        id: "fd_second_derivative_sin".into(),
        measured: (d2 + 1.0f64.sin()).abs(),
        bound: 1e-7,
    });

    let lap = oracles::fd_laplacian(
        |p| Ok(p.iter().map(|x| x * x).sum()),
        &[0.3, -0.2, 0.7],
        1e-4,
    )?;
    checks.push(Check {
        id: "fd_laplacian_quadratic".into(),
        measured: (lap - 6.0).abs(),
        bound: 1e-6,
    });

    // integral of (-ln r) lap(phi) = -2 pi phi(y) for the plane kernel.
    let bump = Bump::new([0.2, 0.2])?;
    let y = [0.4, -0.1];
    let measured = oracles::plane_identity(
        |x1, x2| Ok(-((x1 - y[0]).hypot(x2 - y[1])).ln()),
        &bump,
        y,
        100,
    )?;
    let expected = -2.0 * PI * (-1.0f64).exp();
    checks.push(Check {
        id: "plane_log_kernel".into(),
        measured: rel_dev(measured, expected),
        bound: 1e-2,
    });

    // integral of (1/r) lap(phi) = -4 pi phi(y) in three dimensions, with
    // closed slab moments of 1/sqrt(rho^2 + dz^2).
    let bump = Bump::new([0.15, 0.15, 0.45])?;
    let y = [1.5, 0.0, 0.7];
    let eps = 0.15;
    let rho = |x1: f64, x2: f64| (x1 - y[0]).hypot(x2 - y[1]);
    let measured = oracles::slab_identity(
        |x1, x2| {
            let r2 = rho(x1, x2) * rho(x1, x2);
            Ok(move |dz: f64| 1.0 / (r2 + dz * dz).sqrt())
        },
        |x1, x2| Ok(2.0 * (eps / rho(x1, x2)).asinh()),
        |x1, x2| {
            let r = rho(x1, x2);
            Ok(eps * (eps * eps + r * r).sqrt() - r * r * (eps / r).asinh())
        },
        &bump,
        y,
        &SlabSpec {
            eps,
            cells_xy: 40,
            cells_z: 24,
            axial_fd_step: 1e-3,
        },
    )?;
    let expected = -4.0 * PI * (-1.0f64).exp();
    checks.push(Check {
        id: "slab_newton_kernel".into(),
        measured: rel_dev(measured, expected),
        bound: 1e-2,
    });

    Ok(checks)
}

fn suite_wronskian() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for &nu in &[0.0, 0.5, 1.0, 2.5, 7.0] {
        let mut worst = 0.0f64;
        for i in 0..200 {
            let t = 0.1 * 500.0f64.powf(i as f64 / 199.0);
            let e = bessel_jy(nu, t)?;
            let w = e.j * e.y_prime - e.y * e.j_prime;
            worst = worst.max((0.5 * PI * t * w - 1.0).abs());
        }
        checks.push(Check {
            id: format!("nu={nu}"),
            measured: worst,
            bound: 1e-10,
        });
    }
    Ok(checks)
}

fn suite_half_integer() -> Result<Vec<Check>, CliError> {
    let table = zeros::rho_zeros(order(0.5)?, &geom(2.0)?, 100)?;
    let mut worst = 0.0f64;
    for (m, z) in table.zeros().iter().enumerate() {
        let want = (m + 1) as f64 * PI;
        worst = worst.max(rel_dev(z.value, want));
    }
    Ok(vec![Check {
        id: "b=2,m<=100".into(),
        measured: worst,
        bound: 1e-10,
    }])
}

/// Cases shared by the spacing and lower-bound suites.
const ZERO_GRIDS: &[(f64, f64)] = &[(0.5, 1.2), (0.5, 2.0), (2.0, 1.2), (2.0, 2.0)];

fn suite_spacing() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for &(nu, b) in ZERO_GRIDS {
        let table = zeros::rho_zeros(order(nu)?, &geom(b)?, 100)?;
        let gap_bound = PI / (2.0 * b - 1.0);
        let mut worst = f64::NEG_INFINITY;
        for w in table.zeros().windows(2) {
            worst = worst.max(gap_bound - (w[1].value - w[0].value));
        }
        checks.push(Check {
            id: format!("nu={nu},b={b}"),
            measured: worst,
            bound: 0.0,
        });
    }
    Ok(checks)
}

fn suite_lower_bound() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for &(nu, b) in ZERO_GRIDS {
        let table = zeros::rho_zeros(order(nu)?, &geom(b)?, 100)?;
        let mut worst = f64::NEG_INFINITY;
        for z in table.zeros() {
            worst = worst.max((nu + f64::from(z.index) / 4.0) / b - z.value);
        }
        checks.push(Check {
            id: format!("nu={nu},b={b}"),
            measured: worst,
            bound: 0.0,
        });
    }
    Ok(checks)
}

fn suite_norm() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let g = geom(2.0)?;
    for &nu in &[0.0, 1.0] {
        let o = order(nu)?;
        let table = zeros::rho_zeros(o, &g, 5)?;
        for &m in &[1u32, 5] {
            let z = table.get(m).ok_or(CliError::Usage(format!(
                "norm suite needs eigenvalue m = {m}"
            )))?;
            let closed = expansions::norm_integral(o, z, 1.0, &g)?;
            let quad = oracles::quad_adaptive(
                |t| {
                    let u = cross::cross_product(o, z.value, t, &g)?;
                    Ok(u * u * t)
                },
                1.0,
                2.0,
                1e-12,
            )?;
            checks.push(Check {
                id: format!("nu={nu},b=2,m={m}"),
                measured: rel_dev(quad.value, closed),
                bound: 1e-8,
            });
        }
    }
    // Half order, first eigenvalue: the norm integral is exactly 1/pi^4.
    let o = order(0.5)?;
    let table = zeros::rho_zeros(o, &g, 1)?;
    let first = table
        .get(1)
        .ok_or(CliError::Usage("norm suite needs the first eigenvalue".into()))?;
    let closed = expansions::norm_integral(o, first, 1.0, &g)?;
    checks.push(Check {
        id: "anchor:nu=0.5,b=2,m=1".into(),
        measured: rel_dev(closed, PI.powi(-4)),
        bound: 1e-10,
    });
    Ok(checks)
}

fn suite_moment() -> Result<Vec<Check>, CliError> {
    let (a, s, b) = (1.0, 1.6, 2.5);
    let cases: &[(f64, f64, (f64, f64), &str)] = &[
        (0.5, 1.3, (1.0, 0.0), "J"),
        (0.0, 2.1, (0.7, 0.3), "mix"),
        (2.0, 1.7, (0.0, 1.0), "Y"),
        (3.5, 3.0, (0.5, -0.5), "mix"),
    ];
    let mut checks = Vec::new();
    for &(nu, rho, (alpha, beta), tag) in cases {
        let o = order(nu)?;
        let tent = TentKernel::new(o, s, a, b)?;
        let closed = expansions::i_nu_closed(o, rho, s, a, b, (alpha, beta))?;
        let quad = oracles::quad_adaptive(
            |t| {
                let e = bessel_jy(nu, rho * t)?;
                Ok(tent.eval(t)? * (alpha * e.j + beta * e.y) * t)
            },
            a,
            b,
            1e-13,
        )?;
        checks.push(Check {
            id: format!("nu={nu},rho={rho},{tag}"),
            measured: rel_dev(quad.value, closed),
            bound: 1e-8,
        });
    }
    Ok(checks)
}

fn suite_kernel_expansion() -> Result<Vec<Check>, CliError> {
    let g = geom(2.0)?;
    let mut checks = Vec::new();
    for &nu in &[0.0, 1.0] {
        let o = order(nu)?;
        let table_long = zeros::rho_zeros(o, &g, 500)?;
        let table_short = zeros::rho_zeros(o, &g, 100)?;
        for &s in &[1.3, 1.7] {
            let mut sup_long = 0.0f64;
            let mut sup_short = 0.0f64;
            for i in 0..21 {
                let t = 1.0 + 0.05 * f64::from(i);
                let closed = expansions::series_kernel_closed(o, s, t, &g)?;
                let long = expansions::series_kernel_with_table(&table_long, s, t)?;
                let short = expansions::series_kernel_with_table(&table_short, s, t)?;
                sup_long = sup_long.max((long - closed).abs());
                sup_short = sup_short.max((short - closed).abs());
            }
            checks.push(Check {
                id: format!("nu={nu},s={s}:sup500"),
                measured: sup_long,
                bound: 1e-3,
            });
            // More terms must not make the sup error worse.
            checks.push(Check {
                id: format!("nu={nu},s={s}:decrease"),
                measured: sup_long - sup_short,
                bound: 0.0,
            });
        }
    }
    Ok(checks)
}

fn suite_cross_ode() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for &nu in &[1.0, 3.0] {
        for &y in &[2.0, 3.5] {
            let o = order(nu)?;
            let mut worst = 0.0f64;
            for z in zeros::x_zeros(o, y, 5)? {
                let p = cross::scaled_cross_partials(o, z.value, y)?;
                let product = p.u_x * (z.value * p.u_x - y * p.u_y);
                worst = worst.max((product * PI * PI / 4.0 - 1.0).abs());
            }
            checks.push(Check {
                id: format!("nu={nu},y={y}"),
                measured: worst,
                bound: 1e-8,
            });
        }
    }
    Ok(checks)
}

fn suite_green_symmetry() -> Result<Vec<Check>, CliError> {
    let g = geom(2.0)?;
    let cg = CylinderGreen::new(g, TruncationSpec::new(12, 30, 1e-2)?)?;
    let (forward, _) = cg.eval(
        &ReducedPoint::new(1.3, 0.6, 1.2)?,
        &Pole::new(1.7, 0.2, &g)?,
    )?;
    let (swapped, _) = cg.eval(
        &ReducedPoint::new(1.7, 0.6, 0.2)?,
        &Pole::new(1.3, 1.2, &g)?,
    )?;
    Ok(vec![
        Check {
            id: "swap".into(),
            measured: rel_dev(forward, swapped),
            bound: 1e-9,
        },
        Check {
            id: "positivity".into(),
            measured: -forward,
            bound: 0.0,
        },
    ])
}

/// Run one named suite, or all of them, and emit the JSON report.  A
/// failing check still produces the full report before the verification
/// error (exit code 2) is returned.
pub fn verify(cfg: &RunConfig, suite: Option<&str>) -> Result<(), CliError> {
    let selected: Vec<&(&str, &str, SuiteFn)> = match suite {
        None => SUITES.iter().collect(),
        Some(name) => {
            let found: Vec<_> = SUITES.iter().filter(|(n, _, _)| *n == name).collect();
            if found.is_empty() {
                let names: Vec<&str> = SUITES.iter().map(|(n, _, _)| *n).collect();
                return Err(CliError::Usage(format!(
                    "unknown suite `{name}`; available: {}",
                    names.join(", ")
                )));
            }
            found
        }
    };

    let mut suites_json = Vec::new();
    let mut checks_run = 0usize;
    let mut failures = 0usize;
    for (name, identity, build) in selected {
        let checks = build()?;
        let suite_pass = checks.iter().all(Check::pass);
        checks_run += checks.len();
        failures += checks.iter().filter(|c| !c.pass()).count();
        suites_json.push(Json::Obj(vec![
            ("suite", Json::Str((*name).into())),
            ("identity", Json::Str((*identity).into())),
            ("pass", Json::Bool(suite_pass)),
            (
                "checks",
                Json::Arr(
                    checks
                        .iter()
                        .map(|c| {
                            Json::Obj(vec![
                                ("id", Json::Str(c.id.clone())),
                                ("measured", Json::Num(c.measured)),
                                ("bound", Json::Num(c.bound)),
                                ("pass", Json::Bool(c.pass())),
                            ])
                        })
                        .collect(),
                ),
            ),
        ]));
    }

    let report = Json::Obj(vec![
        ("command", Json::Str("verify".into())),
        ("version", Json::Str(env!("CARGO_PKG_VERSION").into())),
        ("suites", Json::Arr(suites_json)),
        ("checks_run", Json::Int(checks_run as i64)),
        ("failures", Json::Int(failures as i64)),
        ("pass", Json::Bool(failures == 0)),
    ]);
    emit::write_artifact(cfg.path.as_deref(), &report.render())
        .map_err(|e| CliError::Io(format!("writing report: {e}")))?;

    if failures > 0 {
        Err(CliError::Verification {
            failed: failures,
            total: checks_run,
        })
    } else {
        Ok(())
    }
}

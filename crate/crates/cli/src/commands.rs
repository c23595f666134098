//! The six subcommands, generic over the working precision.

use foxh::coeffs::{h_coefficients, l_sequence, q_moments, v_coefficients, CoefficientTable};
use foxh::oracle::{compare_points, ResidueSeries};
use foxh::scalar::{cx, Real};
use foxh::series::{
    abscissa, abscissa_theta, FactorialSeries, GeneralExpansion, OmegaExpansion, PhiExpansion, SeriesValue, WDirect,
};
use foxh::{FoxError, HParams, PrecisionContext};
use num_complex::Complex;

use crate::job::JobSpec;
use crate::table::{Cell, Table};
use crate::{CliError, Command};

struct Env<'a, T> {
    job: &'a JobSpec,
    params: HParams<T>,
    ctx: PrecisionContext,
    sig: usize,
}

pub fn run<T: Real>(command: Command, job: &JobSpec) -> Result<Table, CliError> {
    let env = Env {
        job,
        params: job.params::<T>()?,
        ctx: PrecisionContext::with_digits(job.digits),
        sig: job.digits.min(30) as usize,
    };
    match command {
        Command::Domain => domain(&env),
        Command::Coeffs => coeffs(&env),
        Command::Eval => eval(&env),
        Command::Oracle => oracle(&env),
        Command::Compare => compare(&env),
        Command::Abscissa => abscissa_cmd(&env),
    }
}

fn domain<T: Real>(env: &Env<T>) -> Result<Table, CliError> {
    let d = env.params.derive(&env.ctx)?;
    let sig = env.sig;
    let sigma = env.job.complex_field::<T>(&env.job.sigma, "sigma")?;
    let (lambda, lambda_status) = match &sigma {
        None => (Cell::Empty, "ok".to_string()),
        Some(s) => match abscissa(&env.params, s, &env.ctx) {
            Ok(l) => (Cell::real_or_neg_inf(&l, sig), "ok".to_string()),
            Err(e) => (Cell::Empty, e.kind().to_string()),
        },
    };
    let mut t = Table::new(&[
        "mu",
        "beta",
        "rho",
        "gamma1",
        "eta",
        "eta_residual",
        "c0",
        "R",
        "lambda",
        "delta_neutral",
        "boundary_warning",
        "status",
    ]);
    t.push(vec![
        Cell::real(&d.mu, sig),
        Cell::real(&d.beta_const, sig),
        Cell::real(&d.rho, sig),
        Cell::real(&d.gamma1, sig),
        Cell::Int(d.eta),
        Cell::Num(format!("{:.3e}", d.eta_residual)),
        Cell::real(&d.c0, sig),
        Cell::real(&d.radius, sig),
        lambda,
        Cell::Bool(d.delta_neutral),
        Cell::Bool(d.boundary_warning),
        Cell::Text(lambda_status),
    ]);
    Ok(t)
}

fn require<T>(x: Option<T>, what: &str) -> Result<T, CliError> {
    x.ok_or_else(|| CliError::job(format!("this job needs {what}")))
}

fn coefficient_table<T: Real>(env: &Env<T>) -> Result<CoefficientTable<T>, CliError> {
    let job = env.job;
    let kind = job.kind.as_deref().unwrap_or("V");
    Ok(match kind {
        "q" | "Q" => q_moments(&env.params, job.m_max.unwrap_or(job.n_max), &env.ctx),
        "l" | "L" => {
            let r = job.m_max.unwrap_or(job.n_max);
            l_sequence(&q_moments(&env.params, r, &env.ctx), r)
        }
        "V" | "v" => {
            let sigma = require(job.complex_field::<T>(&job.sigma, "sigma")?, "sigma")?;
            v_coefficients(&env.params, &sigma, job.n_max, &env.ctx)?
        }
        "h" | "H" => {
            let theta = require(job.real_field::<T>(&job.theta, "theta")?, "theta")?;
            h_coefficients(&env.params, &theta, job.n_max, &env.ctx)?
        }
        other => return Err(CliError::job(format!("unknown coefficient kind {other:?}"))),
    })
}

fn coeffs<T: Real>(env: &Env<T>) -> Result<Table, CliError> {
    let table = coefficient_table(env)?;
    let mut t = Table::new(&["index", "re", "im", "digits_lost"]);
    for (i, (n, v)) in table.indexed().enumerate() {
        let [re, im] = Cell::complex(v, env.sig);
        let lost = table.cancellation_report.get(i).copied().unwrap_or(0.0);
        t.push(vec![Cell::Int(n as i64), re, im, Cell::Num(format!("{lost:.1}"))]);
    }
    Ok(t)
}

const EVAL_HEADER: [&str; 9] =
    ["point_re", "point_im", "value_re", "value_im", "trunc_estimate", "terms_used", "converged", "warnings", "status"];

fn series_row<T: Real>(point: &Complex<T>, r: Result<SeriesValue<T>, FoxError>, sig: usize) -> Vec<Cell> {
    let [pr, pi] = Cell::complex(point, sig);
    match r {
        Ok(v) => {
            let [vr, vi] = Cell::complex(&v.value, sig);
            let warnings: Vec<&str> = v.warnings.iter().map(|w| w.name()).collect();
            vec![
                pr,
                pi,
                vr,
                vi,
                Cell::real(&v.trunc_estimate, sig),
                Cell::Int(v.terms_used as i64),
                Cell::Bool(v.converged),
                Cell::Text(warnings.join(";")),
                Cell::Text("ok".into()),
            ]
        }
        Err(e) => {
            let mut row = vec![pr, pi];
            row.extend(std::iter::repeat_with(|| Cell::Empty).take(6));
            row.push(Cell::Text(e.kind().into()));
            row
        }
    }
}

fn eval_grid<T: Real, F>(env: &Env<T>, f: F) -> Result<Table, CliError>
where
    F: Fn(&Complex<T>) -> Result<SeriesValue<T>, FoxError> + Sync,
{
    use rayon::prelude::*;
    let grid = env.job.grid_points::<T>()?;
    let rows: Vec<Vec<Cell>> = grid.par_iter().map(|p| series_row(p, f(p), env.sig)).collect();
    let mut t = Table::new(&EVAL_HEADER);
    for row in rows {
        t.push(row);
    }
    Ok(t)
}

fn eval<T: Real>(env: &Env<T>) -> Result<Table, CliError> {
    let job = env.job;
    let theta = job.real_field::<T>(&job.theta, "theta")?;
    let omega = job.real_field::<T>(&job.omega, "omega")?;
    let sigma = job.complex_field::<T>(&job.sigma, "sigma")?;
    let target = match job.target.as_deref() {
        Some(t) => t,
        None if omega.is_some() => "omega",
        None if theta.is_some() => "h",
        None => "phi",
    };
    let (p, c, n) = (&env.params, &env.ctx, job.n_max);
    match target {
        "phi" => {
            let e = PhiExpansion::new(p, &require(sigma, "sigma")?, n, c)?;
            eval_grid(env, |t| e.eval(t))
        }
        "h" => {
            let e = GeneralExpansion::new(p, &require(theta, "theta")?, n, c)?;
            eval_grid(env, |t| e.eval(t))
        }
        "omega" => {
            let e = OmegaExpansion::new(p, &require(theta, "theta")?, &require(omega, "omega")?, n, c)?;
            eval_grid(env, |t| e.eval(t))
        }
        "w_direct" => {
            let w = WDirect::new(p, c);
            let digits = c.effective_digits::<T>();
            eval_grid(env, |z| w.eval(z).map(|v| SeriesValue::from_sum(v, 1, T::zero(), digits)))
        }
        "w_factorial" => {
            let s = FactorialSeries::new(p, &require(theta, "theta")?, n, c)?;
            eval_grid(env, |z| s.eval(z))
        }
        other => Err(CliError::job(format!("unknown evaluation target {other:?}"))),
    }
}

fn oracle<T: Real>(env: &Env<T>) -> Result<Table, CliError> {
    let rho = env.params.derive(&env.ctx)?.rho;
    let r = ResidueSeries::new(&env.params, env.job.nu_max, &env.ctx)?;
    eval_grid(env, |t| r.eval(&(t.clone() * rho.clone())))
}

fn compare<T: Real>(env: &Env<T>) -> Result<Table, CliError> {
    let job = env.job;
    let theta = require(job.real_field::<T>(&job.theta, "theta")?, "theta")?;
    let grid = job.grid_points::<T>()?;
    let points = compare_points(&env.params, &theta, &grid, job.n_max, job.nu_max, &env.ctx)?;
    let sig = env.sig;
    let mut t = Table::new(&[
        "record",
        "t_re",
        "t_im",
        "expansion_re",
        "expansion_im",
        "oracle_re",
        "oracle_im",
        "abs_err",
        "rel_err",
        "terms_used",
        "status",
    ]);
    let mut max_rel = T::zero();
    let mut failed = 0;
    for (point, r) in grid.iter().zip(points) {
        let [tr, ti] = Cell::complex(point, sig);
        let mut row = vec![Cell::Text("point".into()), tr, ti];
        match r {
            Ok(c) => {
                let rel = c.rel_err();
                if rel > max_rel {
                    max_rel = rel.clone();
                }
                row.extend(Cell::complex(&c.expansion.value, sig));
                row.extend(Cell::complex(&c.oracle, sig));
                row.push(Cell::real(&c.abs_err(), sig));
                row.push(Cell::real(&rel, sig));
                row.push(Cell::Int(c.expansion.terms_used as i64));
                row.push(Cell::Text("ok".into()));
            }
            Err(e) => {
                failed += 1;
                row.extend(std::iter::repeat_with(|| Cell::Empty).take(7));
                row.push(Cell::Text(e.kind().into()));
            }
        }
        t.push(row);
    }
    let mut footer = vec![Cell::Text("max_rel_err".into())];
    footer.extend(std::iter::repeat_with(|| Cell::Empty).take(7));
    footer.push(Cell::real(&max_rel, sig));
    footer.push(Cell::Empty);
    footer.push(Cell::Text(if failed == 0 { "ok".into() } else { format!("{failed} failed") }));
    t.push(footer);
    Ok(t)
}

fn abscissa_cmd<T: Real>(env: &Env<T>) -> Result<Table, CliError> {
    let job = env.job;
    let theta = job.real_field::<T>(&job.theta, "theta")?;
    let (sigma, lambda) = match theta {
        Some(theta) => {
            let eta = env.params.derive(&env.ctx)?.eta;
            let sigma = cx(theta.clone() + T::from_i64(eta).expect("eta fits"));
            (sigma, abscissa_theta(&env.params, &theta, &env.ctx)?)
        }
        None => {
            let sigma = require(job.complex_field::<T>(&job.sigma, "sigma")?, "sigma or theta")?;
            let lambda = abscissa(&env.params, &sigma, &env.ctx)?;
            (sigma, lambda)
        }
    };
    let mut t = Table::new(&["sigma_re", "sigma_im", "lambda", "beta_hat"]);
    let beta_hat = lambda.clone().map(|l| l + sigma.re.clone());
    let [sr, si] = Cell::complex(&sigma, env.sig);
    t.push(vec![sr, si, Cell::real_or_neg_inf(&lambda, env.sig), Cell::real_or_neg_inf(&beta_hat, env.sig)]);
    Ok(t)
}

use std::f64::consts::PI;

use pathint::freefield::{
    covariance, euclidean_invariance_check, exp_interaction, exp_interaction_mean, exp_interaction_second_moment,
    interaction_variance, lattice_covariance, partition_from_actions, reflection_positivity_continuum,
    reflection_positivity_lattice, sample_actions, wick_power_field, Bump, CovarianceKernel, CovarianceTable,
    EuclideanTransform, GffSampler, LatticeSpec, Region, TestFunction,
};
use pathint::gaussian::{enumerate_pairings, moment_wick, GaussianSpec};
use pathint::quantum::{free_kernel, oscillator_spectrum, timeslice_free_kernel, KernelMode, OscillatorParams};
use pathint::stats::{parallel_collect, parallel_mean, parallel_moments, Estimate};
use pathint::wiener::{brownian_values, feynman_kac_energy, holder_statistic, sample_brownian_with, RngStream};
use rand::Rng;

use crate::error::{CliError, Result};
use crate::params::{ParamKind::*, ParamSpec, Params};
use crate::report::{Metric, Table};

pub(crate) type Outcome = (Vec<Metric>, Vec<Table>);
type Runner = fn(&Params, &RngStream) -> Result<Outcome>;

/// A registered experiment.
#[derive(Clone, Copy)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static [ParamSpec],
    pub(crate) runner: Runner,
}

impl std::fmt::Debug for ExperimentInfo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExperimentInfo")
            .field("name", &self.name)
            .field("description", &self.description)
            .field("params", &self.params)
            .finish()
    }
}

/// All experiments, sorted by name.
pub const REGISTRY: &[ExperimentInfo] = &[
    ExperimentInfo {
        name: "feynman-kac",
        description: "ground-state energy of the harmonic oscillator from Feynman-Kac path averages",
        params: &[
            ParamSpec::new("t", Float, "4", "first imaginary time"),
            ParamSpec::new("delta", Float, "1", "time increment between the two estimates"),
            ParamSpec::new("paths", Int, "200000", "Brownian paths, shared by both times"),
            ParamSpec::new("steps", Int, "500", "time steps up to t; the same step continues to t + delta"),
            ParamSpec::new("x0", Float, "0", "starting point"),
            ParamSpec::new("tolerance", Float, "0.02", "allowed deviation from the exact energy 1/2"),
        ],
        runner: feynman_kac_experiment,
    },
    ExperimentInfo {
        name: "gff-cov",
        description: "lattice free-field two-point function: exact lattice, continuum and Monte Carlo",
        params: &[
            ParamSpec::new("L", Int, "64", "lattice side (sites)"),
            ParamSpec::new("a", Float, "0.125", "lattice spacing"),
            ParamSpec::new("m", Float, "1", "mass"),
            ParamSpec::new("samples", Int, "10000", "field samples"),
            ParamSpec::new("max_lag", Int, "8", "largest lag along the first axis"),
            ParamSpec::new("wick_lag", Int, "1", "lag for the cubic Wick-power two-point check"),
        ],
        runner: gff_cov,
    },
    ExperimentInfo {
        name: "holder",
        description: "Hoelder quotients of Brownian paths under grid refinement",
        params: &[
            ParamSpec::new("alphas", FloatList, "0.4,0.6,1.0", "Hoelder exponents"),
            ParamSpec::new("steps", IntList, "1024,4096,16384", "grid sizes on [0, 1], increasing"),
            ParamSpec::new("paths", Int, "100", "paths per grid size"),
        ],
        runner: holder_experiment,
    },
    ExperimentInfo {
        name: "interaction",
        description: "Wick-ordered polynomial and exponential interactions of the lattice free field",
        params: &[
            ParamSpec::new("L", Int, "16", "lattice side for the polynomial interaction"),
            ParamSpec::new("a", Float, "0.25", "lattice spacing for the polynomial interaction"),
            ParamSpec::new("m", Float, "1", "mass"),
            ParamSpec::new("region", Float, "1", "side of the centred interaction square"),
            ParamSpec::new("coupling", Float, "1", "coefficient of the quartic Wick power"),
            ParamSpec::new("samples", Int, "40000", "field samples for the polynomial interaction"),
            ParamSpec::new("exp_L", Int, "32", "lattice side for the exponential interaction"),
            ParamSpec::new("exp_a", Float, "0.125", "lattice spacing for the exponential interaction"),
            ParamSpec::new("exp_samples", Int, "20000", "field samples for the exponential interaction"),
            ParamSpec::new("alpha2", Float, "6.283185307179586", "squared exponential charge"),
            ParamSpec::new("trend", Int, "1", "1 to run the refinement trend below and above 4 pi, 0 to skip"),
        ],
        runner: interaction,
    },
    ExperimentInfo {
        name: "os-check",
        description: "reflection positivity (lattice and continuum) and Euclidean invariance of the covariance",
        params: &[
            ParamSpec::new("L", Int, "16", "lattice side"),
            ParamSpec::new("a", Float, "0.25", "lattice spacing"),
            ParamSpec::new("m", Float, "1", "mass"),
            ParamSpec::new("lattice_functions", Int, "10", "random positive-time lattice test functions"),
            ParamSpec::new("continuum_functions", Int, "6", "random positive-time continuum test functions"),
            ParamSpec::new("translation", FloatList, "0.37,-0.2", "translation for the invariance check"),
            ParamSpec::new("angle", Float, "0.6283185307179586", "rotation angle for the invariance check"),
        ],
        runner: os_check,
    },
    ExperimentInfo {
        name: "spectrum",
        description: "harmonic-oscillator eigenvalues from the truncated ladder-operator Hamiltonian",
        params: &[
            ParamSpec::new("N", Int, "200", "truncation dimension"),
            ParamSpec::new("m", Float, "1", "mass"),
            ParamSpec::new("omega", Float, "1", "angular frequency"),
            ParamSpec::new("hbar", Float, "1", "reduced Planck constant"),
            ParamSpec::new("count", Int, "10", "eigenvalues to compare"),
        ],
        runner: spectrum,
    },
    ExperimentInfo {
        name: "timeslice",
        description: "time-sliced free propagator against the closed-form kernel",
        params: &[
            ParamSpec::new("t", Float, "1", "propagation time"),
            ParamSpec::new("x", Float, "0", "final point"),
            ParamSpec::new("y", Float, "1", "initial point"),
            ParamSpec::new("m", Float, "1", "mass"),
            ParamSpec::new("hbar", Float, "1", "reduced Planck constant"),
            ParamSpec::new("slices", IntList, "1,2,5,10,50", "numbers of time slices"),
        ],
        runner: timeslice,
    },
    ExperimentInfo {
        name: "wick-moments",
        description: "Gaussian moments from pairing sums against Monte Carlo",
        params: &[
            ParamSpec::new("k", Int, "4", "number of linear functionals"),
            ParamSpec::new("dim", Int, "2", "dimension of the standard Gaussian"),
            ParamSpec::new("vectors", Text, "e1", "'e1' (all equal to the first basis vector) or 'rotating'"),
            ParamSpec::new("samples", Int, "100000", "Monte Carlo samples"),
        ],
        runner: wick_moments,
    },
    ExperimentInfo {
        name: "wiener-cov",
        description: "Monte Carlo Wiener covariance against min(s, t)",
        params: &[
            ParamSpec::new("times", FloatList, "0.2,0.3,0.5,0.8,1.0", "grid times in (0, T]"),
            ParamSpec::new("T", Float, "1", "final time"),
            ParamSpec::new("steps", Int, "10", "uniform time steps on [0, T]"),
            ParamSpec::new("paths", Int, "100000", "Brownian paths"),
        ],
        runner: wiener_cov,
    },
];

pub fn find(name: &str) -> Result<&'static ExperimentInfo> {
    REGISTRY
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CliError::UnknownExperiment(name.to_string()))
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn spectrum(p: &Params, _rng: &RngStream) -> Result<Outcome> {
    let params = OscillatorParams::new(p.f64("m"), p.f64("omega"), p.f64("hbar"))?;
    let n = p.usize("N");
    let count = p.usize("count");
    if count + 1 > n {
        return Err(bad(format!("count = {count} needs N > {count}")));
    }
    let ev = oscillator_spectrum(n, params)?;
    let mut table = Table::new("spectrum.csv", &["n", "eigenvalue", "exact", "abs_error"]);
    let mut worst = 0.0f64;
    for (k, &e) in ev.iter().take(count).enumerate() {
        let exact = params.hbar * params.omega * (k as f64 + 0.5);
        let err = (e - exact).abs();
        worst = worst.max(err);
        table.push(vec![k.into(), e.into(), exact.into(), err.into()]);
    }
    Ok((vec![Metric::at_most("max_abs_error", worst, 1e-8)], vec![table]))
}

fn timeslice(p: &Params, _rng: &RngStream) -> Result<Outcome> {
    let (t, x, y, m, hbar) = (p.f64("t"), p.f64("x"), p.f64("y"), p.f64("m"), p.f64("hbar"));
    let exact = free_kernel(t, x, y, m, hbar, KernelMode::RealTime)?;
    let mut table = Table::new(
        "timeslice.csv",
        &["slices", "sliced_re", "sliced_im", "exact_re", "exact_im", "rel_error"],
    );
    let mut worst = 0.0f64;
    for n in p.usize_list("slices") {
        let k = timeslice_free_kernel(t, x, y, m, hbar, n)?;
        let rel = (k - exact).norm() / exact.norm();
        worst = worst.max(rel);
        table.push(vec![n.into(), k.re.into(), k.im.into(), exact.re.into(), exact.im.into(), rel.into()]);
    }
    Ok((vec![Metric::at_most("max_rel_error", worst, 1e-10)], vec![table]))
}

fn wiener_cov(p: &Params, rng: &RngStream) -> Result<Outcome> {
    let t_final = p.f64("T");
    let steps = p.usize("steps");
    let times = p.f64_list("times");
    if !(t_final > 0.0) || steps == 0 {
        return Err(bad("need T > 0 and steps >= 1"));
    }
    let dt = t_final / steps as f64;
    let index: Vec<usize> = times
        .iter()
        .map(|&u| {
            let i = (u / dt).round();
            if (i * dt - u).abs() > 1e-9 * t_final || !(1.0..=steps as f64).contains(&i) {
                Err(bad(format!("time {u} is not a grid point in (0, T]")))
            } else {
                Ok(i as usize)
            }
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..times.len()).flat_map(|i| (i..times.len()).map(move |j| (i, j))).collect();
    let m = parallel_moments(p.usize("paths"), rng, pairs.len(), |r, out| {
        let mut buf = vec![0.0; steps + 1];
        brownian_values(r, dt, &mut buf);
        for (o, &(i, j)) in out.iter_mut().zip(&pairs) {
            *o = buf[index[i]] * buf[index[j]];
        }
    });
    let mut table = Table::new("wiener_cov.csv", &["s", "t", "estimate", "stderr", "exact", "z"]);
    let mut worst = 0.0f64;
    for (e, &(i, j)) in m.estimates().iter().zip(&pairs) {
        let exact = times[i].min(times[j]);
        let z = e.z_score(exact);
        worst = worst.max(z.abs());
        table.push(vec![times[i].into(), times[j].into(), e.mean.into(), e.stderr.into(), exact.into(), z.into()]);
    }
    Ok((vec![Metric::at_most("max_abs_z", worst, 4.0)], vec![table]))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// At fine scales the quotient behaves like `Δt^{1/2−α} √(2 ln N)`, so the
/// predicted growth from `N₁` to `N₂` steps is `(N₂/N₁)^{α−1/2} √(ln N₂ / ln N₁)`.
/// Exponents above ½ must show at least half of the predicted excess growth;
/// exponents at or below ½ must stay below a factor 2.
fn holder_experiment(p: &Params, rng: &RngStream) -> Result<Outcome> {
    let alphas = p.f64_list("alphas");
    let steps = p.usize_list("steps");
    let paths = p.usize("paths");
    if steps.len() < 2 || steps.windows(2).any(|w| w[0] >= w[1]) || steps[0] < 2 || paths < 1 {
        return Err(bad("steps must be at least two increasing grid sizes >= 2, paths >= 1"));
    }
    let mut medians = Table::new("holder.csv", &["alpha", "steps", "median"]);
    let mut growth = Table::new("holder_growth.csv", &["alpha", "growth", "predicted"]);
    let mut metrics = Vec::new();
    let (n1, n2) = (steps[0] as f64, steps[steps.len() - 1] as f64);
    for (ai, &alpha) in alphas.iter().enumerate() {
        let mut meds = Vec::new();
        for (si, &n) in steps.iter().enumerate() {
            let stream = rng.derive((ai * steps.len() + si) as u64);
            let q = parallel_collect(paths, &stream, |r| {
                sample_brownian_with(1.0, n, r)
                    .and_then(|path| holder_statistic(&path, alpha))
                    .unwrap_or(f64::NAN)
            });
            if q.iter().any(|v| !v.is_finite()) {
                return Err(bad(format!("non-finite Hoelder quotient at alpha = {alpha}")));
            }
            let med = median(q);
            medians.push(vec![alpha.into(), n.into(), med.into()]);
            meds.push(med);
        }
        let g = meds[meds.len() - 1] / meds[0];
        let predicted = (n2 / n1).powf(alpha - 0.5) * (n2.ln() / n1.ln()).sqrt();
        growth.push(vec![alpha.into(), g.into(), predicted.into()]);
        let name = format!("growth[alpha={alpha}]");
        metrics.push(if alpha > 0.5 {
            Metric::at_least(&name, g, 1.0 + 0.5 * (predicted - 1.0))
        } else {
            Metric::at_most(&name, g, 2.0)
        });
    }
    Ok((metrics, vec![medians, growth]))
}

fn feynman_kac_experiment(p: &Params, rng: &RngStream) -> Result<Outcome> {
    let (t, delta, x0) = (p.f64("t"), p.f64("delta"), p.f64("x0"));
    let (paths, steps) = (p.usize("paths"), p.usize("steps"));
    let v = |x: f64| 0.5 * x * x;
    let psi = |x: f64| (-0.5 * x * x).exp();
    let e = feynman_kac_energy(v, psi, t, delta, x0, paths, steps, rng)?;
    let mut table = Table::new("feynman_kac.csv", &["t", "delta", "steps", "paths", "energy", "stderr", "exact"]);
    table.push(vec![
        t.into(),
        delta.into(),
        steps.into(),
        paths.into(),
        e.mean.into(),
        e.stderr.into(),
        0.5.into(),
    ]);
    Ok((
        vec![Metric::at_most("energy_abs_error", (e.mean - 0.5).abs(), p.f64("tolerance"))],
        vec![table],
    ))
}

fn double_factorial(n: usize) -> usize {
    (1..=n).rev().step_by(2).product()
}

fn wick_moments(p: &Params, rng: &RngStream) -> Result<Outcome> {
    let (k, dim) = (p.usize("k"), p.usize("dim"));
    if k == 0 || dim == 0 {
        return Err(bad("need k >= 1 and dim >= 1"));
    }
    let spec = GaussianSpec::standard(dim)?;
    let us: Vec<Vec<f64>> = match p.text("vectors") {
        "e1" => (0..k)
            .map(|_| {
                let mut u = vec![0.0; dim];
                u[0] = 1.0;
                u
            })
            .collect(),
        "rotating" if dim >= 2 => (0..k)
            .map(|j| {
                let th = PI * j as f64 / k as f64;
                let mut u = vec![0.0; dim];
                u[0] = th.cos();
                u[1] = th.sin();
                u
            })
            .collect(),
        other => return Err(bad(format!("vectors must be 'e1' or 'rotating' (dim >= 2), got '{other}'"))),
    };
    let value = moment_wick(&spec, &us)?;
    let mc = parallel_mean(p.usize("samples"), rng, |r| {
        let x = spec.sample_with(r);
        us.iter().map(|u| u.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>()).product()
    });
    let pairings = if k % 2 == 0 { enumerate_pairings(k).len() } else { 0 };
    let expected_pairings = if k % 2 == 0 { double_factorial(k - 1) } else { 0 };
    let z = mc.z_score(value);
    let mut table = Table::new(
        "wick_moments.csv",
        &["k", "pairings", "expected_pairings", "wick_value", "mc_mean", "mc_stderr", "z"],
    );
    table.push(vec![
        k.into(),
        pairings.into(),
        expected_pairings.into(),
        value.into(),
        mc.mean.into(),
        mc.stderr.into(),
        z.into(),
    ]);
    Ok((
        vec![
            Metric::at_most("mc_abs_z", z.abs(), 4.0),
            Metric::at_most("pairing_count_error", pairings.abs_diff(expected_pairings) as f64, 0.0),
        ],
        vec![table],
    ))
}

fn gff_cov(p: &Params, rng: &RngStream) -> Result<Outcome> {
    let spec = LatticeSpec::new(p.usize("L"), p.f64("a"), p.f64("m"))?;
    let (max_lag, wick_lag) = (p.usize("max_lag"), p.usize("wick_lag"));
    let l = spec.side;
    if max_lag >= l || wick_lag >= l {
        return Err(bad("lags must be smaller than the lattice side"));
    }
    let sampler = GffSampler::new(&spec);
    let kernel = CovarianceKernel::new(2, spec.mass)?;
    let norm = (l * l) as f64;
    let m = parallel_moments(p.usize("samples"), rng, max_lag + 2, |r, out| {
        let f = sampler.sample_with(r);
        // translation averages of φ(x)φ(x + d e₁)
        for (d, o) in out.iter_mut().take(max_lag + 1).enumerate() {
            let mut acc = 0.0;
            for t in 0..l {
                for x in 0..l {
                    acc += f.get(x, t) * f.get((x + d) % l, t);
                }
            }
            *o = acc / norm;
        }
        let w = wick_power_field(&f, 3).unwrap_or_else(|_| vec![f64::NAN; l * l]);
        let mut acc = 0.0;
        for t in 0..l {
            for x in 0..l {
                acc += w[spec.index(x, t)] * w[spec.index((x + wick_lag) % l, t)];
            }
        }
        out[max_lag + 1] = acc / norm;
    });
    let e = m.estimates();
    let mut table = Table::new("gff_cov.csv", &["lag", "r", "lattice", "continuum", "mc_mean", "mc_stderr", "z"]);
    let mut worst = 0.0f64;
    for (d, est) in e.iter().take(max_lag + 1).enumerate() {
        let lattice = lattice_covariance(&spec, d as i64, 0);
        let r = d as f64 * spec.spacing;
        let continuum = if d == 0 { f64::INFINITY } else { covariance(&kernel, r)? };
        let z = est.z_score(lattice);
        worst = worst.max(z.abs());
        table.push(vec![d.into(), r.into(), lattice.into(), continuum.into(), est.mean.into(), est.stderr.into(), z.into()]);
    }
    let c = lattice_covariance(&spec, wick_lag as i64, 0);
    let wick_target = 6.0 * c.powi(3);
    let wick = e[max_lag + 1];
    let mut wick_table = Table::new("gff_wick3.csv", &["lag", "exact", "mc_mean", "mc_stderr", "z"]);
    wick_table.push(vec![
        wick_lag.into(),
        wick_target.into(),
        wick.mean.into(),
        wick.stderr.into(),
        wick.z_score(wick_target).into(),
    ]);
    Ok((
        vec![
            Metric::at_most("covariance_max_abs_z", worst, 4.0),
            Metric::at_most("wick3_abs_z", wick.z_score(wick_target).abs(), 4.0),
        ],
        vec![table, wick_table],
    ))
}

/// Sample variance with the standard error of the variance estimator.
fn sample_variance(xs: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sq: Vec<f64> = xs.iter().map(|v| (v - mean).powi(2)).collect();
    let var = sq.iter().sum::<f64>() / (n - 1.0);
    let spread = sq.iter().map(|s| (s - var).powi(2)).sum::<f64>() / (n - 1.0);
    Estimate {
        mean: var,
        stderr: (spread / n).sqrt(),
        count: xs.len(),
    }
}

/// `a⁴ Σ_{x,y∈Λ} e^{α²G(x−y)}` on a unit square inside a torus of side 4.
pub fn exp_double_sum(alpha2: f64, inv_a: usize, mass: f64) -> Result<f64> {
    let spec = LatticeSpec::new(4 * inv_a, 1.0 / inv_a as f64, mass)?;
    let table = CovarianceTable::new(&spec);
    let g = Region::centered_square(&spec, 1.0)?.indicator();
    Ok(exp_interaction_second_moment(&table, alpha2.sqrt(), &g)?)
}

fn interaction(p: &Params, rng: &RngStream) -> Result<Outcome> {
    let spec = LatticeSpec::new(p.usize("L"), p.f64("a"), p.f64("m"))?;
    let region = Region::centered_square(&spec, p.f64("region"))?;
    let table = CovarianceTable::new(&spec);
    let poly = [0.0, 0.0, 0.0, 0.0, p.f64("coupling")];
    let actions = sample_actions(&spec, &poly, &region, p.usize("samples"), &rng.derive(0))?;
    let var = sample_variance(&actions);
    let exact_var = interaction_variance(&table, &poly, &region)?;
    let z = partition_from_actions(&actions)?;
    let floor = -6.0 * table.c0().powi(2) * spec.spacing.powi(2) * region.len() as f64 * poly[4];
    let min_action = actions.iter().copied().fold(f64::INFINITY, f64::min);

    let mut poly_table = Table::new("interaction.csv", &["quantity", "estimate", "stderr", "exact"]);
    poly_table.push(vec!["action_variance".into(), var.mean.into(), var.stderr.into(), exact_var.into()]);
    poly_table.push(vec!["partition".into(), z.z.into(), z.stderr.into(), f64::NAN.into()]);
    poly_table.push(vec!["min_action".into(), min_action.into(), f64::NAN.into(), floor.into()]);

    let exp_spec = LatticeSpec::new(p.usize("exp_L"), p.f64("exp_a"), p.f64("m"))?;
    let sampler = GffSampler::new(&exp_spec);
    let g = Region::centered_square(&exp_spec, p.f64("region"))?.indicator();
    let alpha = p.f64("alpha2").sqrt();
    let mom = parallel_moments(p.usize("exp_samples"), &rng.derive(1), 2, |r, out| {
        let v = exp_interaction(&sampler.sample_with(r), alpha, &g).unwrap_or(f64::NAN);
        out[0] = v;
        out[1] = v * v;
    });
    let e = mom.estimates();
    let exact_mean = exp_interaction_mean(&exp_spec, &g)?;
    let exact_second = exp_interaction_second_moment(sampler.covariance(), alpha, &g)?;
    poly_table.push(vec!["exp_mean".into(), e[0].mean.into(), e[0].stderr.into(), exact_mean.into()]);
    poly_table.push(vec!["exp_second_moment".into(), e[1].mean.into(), e[1].stderr.into(), exact_second.into()]);

    let mut metrics = vec![
        Metric::at_most("variance_abs_z", var.z_score(exact_var).abs(), 4.0),
        Metric::at_most("jensen_deficit_sigmas", (1.0 - z.z) / z.stderr.max(f64::MIN_POSITIVE), 3.0),
        Metric::at_least("action_minus_floor", min_action - floor, 0.0),
        Metric::at_most("exp_mean_abs_z", e[0].z_score(exact_mean).abs(), 4.0),
        Metric::at_most("exp_second_moment_abs_z", e[1].z_score(exact_second).abs(), 4.0),
    ];
    let mut tables = vec![poly_table];
    if p.usize("trend") != 0 {
        let refinements = [16usize, 32, 64];
        let mut trend = Table::new("interaction_trend.csv", &["alpha2", "inv_a", "double_sum"]);
        let mut series = |alpha2: f64| -> Result<Vec<f64>> {
            refinements
                .iter()
                .map(|&n| {
                    let s = exp_double_sum(alpha2, n, p.f64("m"))?;
                    trend.push(vec![alpha2.into(), n.into(), s.into()]);
                    Ok(s)
                })
                .collect()
        };
        let below = series(2.0 * PI)?;
        let above = series(6.0 * PI)?;
        let below_ratio = (below[1] / below[0]).max(below[2] / below[1]);
        let shrinking = (below[2] - below[1]).abs() < (below[1] - below[0]).abs();
        metrics.push(Metric::at_most("below_threshold_max_ratio", below_ratio, 1.2));
        metrics.push(Metric::at_most("below_threshold_shrinking", if shrinking { 0.0 } else { 1.0 }, 0.0));
        metrics.push(Metric::at_least(
            "above_threshold_min_ratio",
            (above[1] / above[0]).min(above[2] / above[1]),
            1.5,
        ));
        tables.push(trend);
    }
    Ok((metrics, tables))
}

fn os_check(p: &Params, rng: &RngStream) -> Result<Outcome> {
    let spec = LatticeSpec::new(p.usize("L"), p.f64("a"), p.f64("m"))?;
    let l = spec.side;
    let mut r = rng.derive(0).rng();
    let fs: Vec<Vec<f64>> = (0..p.usize("lattice_functions"))
        .map(|_| {
            let mut f = vec![0.0; spec.num_sites()];
            for t in 1..l / 2 {
                for x in 0..l {
                    if r.random_bool(0.2) {
                        f[spec.index(x, t)] = r.random_range(-1.0..1.0);
                    }
                }
            }
            f
        })
        .collect();
    let lattice_min = reflection_positivity_lattice(&spec, &fs)?;

    let kernel = CovarianceKernel::new(2, spec.mass)?;
    let mut r = rng.derive(1).rng();
    let cs: Vec<TestFunction> = (0..p.usize("continuum_functions"))
        .map(|_| {
            let mut bumps = Vec::new();
            while bumps.len() < 2 {
                let b = Bump {
                    center: [r.random_range(-1.5..1.5), r.random_range(0.5..2.0)],
                    radii: [r.random_range(0.1..0.35), r.random_range(0.1..0.35)],
                    angle: r.random_range(0.0..PI),
                    amplitude: r.random_range(-1.0..1.0),
                };
                if b.center[1] - b.reach() > 0.05 {
                    bumps.push(b);
                }
            }
            TestFunction::new(bumps)
        })
        .collect();
    let continuum_min = reflection_positivity_continuum(&kernel, &cs)?;

    let tr = p.f64_list("translation");
    if tr.len() != 2 {
        return Err(bad("translation needs two components"));
    }
    let f = TestFunction::new(vec![Bump {
        center: [0.0, 0.0],
        radii: [0.4, 0.25],
        angle: 0.3,
        amplitude: 1.0,
    }]);
    let g = TestFunction::new(vec![
        Bump::round([1.2, 0.4], 0.3, 0.8),
        Bump {
            center: [-0.3, 1.1],
            radii: [0.2, 0.35],
            angle: -0.7,
            amplitude: -1.4,
        },
    ]);
    let shift = EuclideanTransform {
        angle: 0.0,
        translation: [tr[0], tr[1]],
    };
    let rot = EuclideanTransform {
        angle: p.f64("angle"),
        translation: [0.0, 0.0],
    };
    let shift_diff = euclidean_invariance_check(&kernel, &f, &g, &shift)?;
    let rot_diff = euclidean_invariance_check(&kernel, &f, &g, &rot)?;

    let metrics = vec![
        Metric::at_least("lattice_min_eigenvalue", lattice_min, -1e-10),
        Metric::at_least("continuum_min_eigenvalue", continuum_min, -1e-10),
        Metric::at_most("translation_difference", shift_diff, 1e-6),
        Metric::at_most("rotation_difference", rot_diff, 1e-6),
    ];
    let mut table = Table::new("os_check.csv", &["check", "value", "tolerance"]);
    for m in &metrics {
        table.push(vec![m.name.as_str().into(), m.value.into(), m.tolerance.into()]);
    }
    Ok((metrics, vec![table]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_sorted_and_unique() {
        assert!(REGISTRY.windows(2).all(|w| w[0].name < w[1].name));
        for e in REGISTRY {
            assert!(e.params.windows(2).all(|w| w[0].name != w[1].name) || e.params.len() < 2);
        }
    }

    #[test]
    fn defaults_parse() {
        let empty = Default::default();
        for e in REGISTRY {
            Params::resolve(e.name, e.params, &empty).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn helpers() {
        assert_eq!(double_factorial(7), 105);
        assert_eq!(double_factorial(1), 1);
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}

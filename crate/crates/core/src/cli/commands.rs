//! One function per table-producing command.

use rayon::prelude::*;
use serde_json::json;

use super::config::Params;
use super::table::{base_metadata, Cell, Table};
use super::CliError;
use crate::bare_tube::{anomalous_limit, bare_string_radial, matching_at_kr0, Channel};
use crate::model::{Coupling, Kinematics, UnitSystem};
use crate::propagate::{
    delta_closed_formula, delta_quadrature, fit_gaussian_transit, greens_diff_asymptotic, greens_diff_closed,
    greens_diff_integral_oracle, GreensPoint, OracleOptions, PacketConfig, ASYMPTOTIC_MIN_ARG,
};
use crate::scattering::{
    differential_cross_section, integrated_cross_section, scattering_amplitude, StateKind, DEFAULT_FORWARD_CONE,
};
use crate::shielded::{kinematics_for_ratios, shielded_eigenfunction, shielded_matching};
use crate::Complex64;

/// Maps sweep points on the current pool, keeping their order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R, CliError> + Sync + Send) -> Result<Vec<R>, CliError> {
    items.par_iter().map(f).collect()
}

fn coupling(params: &Params, default: Option<f64>) -> Result<Coupling, CliError> {
    let alpha = match default {
        Some(d) => params.f64_or("alpha", d)?,
        None => params.f64_req("alpha")?,
    };
    Coupling::new(alpha).map_err(|e| CliError::Config(format!("`alpha`: {e}")))
}

fn positive(params: &Params, key: &str, default: f64) -> Result<f64, CliError> {
    let v = params.f64_or(key, default)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("`{key}`: must be positive, got {v}")))
    }
}

fn kind(params: &Params, default: &str) -> Result<StateKind, CliError> {
    params
        .raw("kind")
        .unwrap_or(default)
        .parse()
        .map_err(|_| CliError::Config(format!("`kind`: expected bare or shielded, got `{}`", params.raw("kind").unwrap_or(""))))
}

fn kinematics(params: &Params) -> Result<Kinematics, CliError> {
    let mass = positive(params, "mass", 1.0)?;
    let energy = params.f64_or("energy", 2f64.sqrt() * mass)?;
    if !(energy > mass) {
        return Err(CliError::Config(format!("`energy`: must exceed the rest energy {mass}, got {energy}")));
    }
    Ok(Kinematics::new(UnitSystem::NATURAL, energy, mass, None)?)
}

fn channels(params: &Params) -> Result<Vec<Channel>, CliError> {
    params
        .ints_or("channel", "1")?
        .into_iter()
        .map(|c| match c {
            1 => Ok(Channel::One),
            2 => Ok(Channel::Two),
            _ => Err(CliError::Config(format!("`channel`: must be 1 or 2, got {c}"))),
        })
        .collect()
}

fn positive_sweep(params: &Params, key: &str, default: &str) -> Result<Vec<f64>, CliError> {
    let s = params.sweep_or(key, default)?;
    if let Some(v) = s.values.iter().find(|v| !(**v > 0.0)) {
        return Err(CliError::Config(format!("`{key}`: values must be positive, got {v}")));
    }
    Ok(s.values)
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 3 || ys.iter().any(|&y| !(y > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Matching coefficients over a kr0 (bare) or kR0 (shielded) sweep.
/// Columns: l, channel, radius, A_re, A_im, A_abs, slope (per (l, channel)
/// group, present when the sweep has at least three points).
pub fn run_coeffs(params: &Params) -> Result<Table, CliError> {
    let kind = kind(params, "bare")?;
    let c = coupling(params, None)?;
    let ls = params.ints_or("l", "0")?;
    let chs = channels(params)?;
    let mass = positive(params, "mass", 1.0)?;
    let mut meta = base_metadata("coeffs");
    meta.insert("alpha".into(), json!(c.alpha));
    meta.insert("mass".into(), json!(mass));
    let (radius_col, xs) = match kind {
        StateKind::Bare => {
            let kin = kinematics(params)?;
            meta.insert("kind".into(), json!("bare"));
            meta.insert("energy".into(), json!(kin.energy));
            meta.insert("k".into(), json!(kin.k));
            if let Some(a) = anomalous_limit(&c) {
                meta.insert("anomalous_limit_re".into(), json!(a.re));
                meta.insert("anomalous_limit_im".into(), json!(a.im));
            }
            ("kr0", positive_sweep(params, "kr0", "1e-2:1e-5:4log")?)
        }
        StateKind::Shielded => {
            meta.insert("kind".into(), json!("shielded"));
            ("kR0", positive_sweep(params, "kR0", "1e-2:1e-4:3log")?)
        }
    };
    let kappa_r0 = positive(params, "kappaR0", 50.0)?;
    let u = positive(params, "barrier_height", mass)?;
    if kind == StateKind::Shielded {
        meta.insert("kappaR0".into(), json!(kappa_r0));
        meta.insert("barrier_height".into(), json!(u));
    }
    let kin = match kind {
        StateKind::Bare => Some(kinematics(params)?),
        StateKind::Shielded => None,
    };
    let mut points = Vec::new();
    for &l in &ls {
        for &ch in &chs {
            for &x in &xs {
                points.push((l, ch, x));
            }
        }
    }
    let values = par_map(&points, |&(l, ch, x)| -> Result<Complex64, CliError> {
        Ok(match &kin {
            Some(kin) => matching_at_kr0(l, ch, c, kin, x)?,
            None => {
                let (kin, bar) = kinematics_for_ratios(UnitSystem::NATURAL, mass, u, x, kappa_r0)?;
                shielded_matching(l, ch, &c, &bar, &kin)?.value
            }
        })
    })?;
    let mut t = Table::new(&["l", "channel", radius_col, "A_re", "A_im", "A_abs", "slope"]);
    t.metadata.extend(meta);
    for (g, chunk) in values.chunks(xs.len()).enumerate() {
        let mags: Vec<f64> = chunk.iter().map(|a| a.norm()).collect();
        let slope = log_log_slope(&xs, &mags);
        let (l, ch, _) = points[g * xs.len()];
        for (a, &x) in chunk.iter().zip(&xs) {
            t.push(vec![
                l.into(),
                (ch.index() as i64).into(),
                x.into(),
                a.re.into(),
                a.im.into(),
                a.norm().into(),
                slope.into(),
            ]);
        }
    }
    Ok(t)
}

/// Radial components chi1..chi4 of the bare-string or shielded partial
/// wave l, over an r sweep.
pub fn run_eigenfn(params: &Params) -> Result<Table, CliError> {
    let kind = kind(params, "shielded")?;
    let c = coupling(params, None)?;
    let ls = params.ints_or("l", "0")?;
    let kin = kinematics(params)?;
    let rs = params.sweep_or("r", "0.1:10:100")?.values;
    if let Some(r) = rs.iter().find(|r| !(**r >= 0.0)) {
        return Err(CliError::Config(format!("`r`: values must be >= 0, got {r}")));
    }
    let points: Vec<(i64, f64)> = ls.iter().flat_map(|&l| rs.iter().map(move |&r| (l, r))).collect();
    let chis = par_map(&points, |&(l, r)| -> Result<[Complex64; 4], CliError> {
        Ok(match kind {
            StateKind::Bare => bare_string_radial(l, &c, &kin, r)?,
            StateKind::Shielded => shielded_eigenfunction(l, &c, &kin, r)?.chi,
        })
    })?;
    let mut t = Table::new(&[
        "l", "r", "chi1_re", "chi1_im", "chi2_re", "chi2_im", "chi3_re", "chi3_im", "chi4_re", "chi4_im",
    ]);
    t.metadata.extend(base_metadata("eigenfn"));
    t.meta("kind", if kind == StateKind::Bare { "bare" } else { "shielded" });
    t.meta("alpha", c.alpha);
    t.meta("energy", kin.energy);
    t.meta("k", kin.k);
    for (&(l, r), chi) in points.iter().zip(&chis) {
        let mut row: Vec<Cell> = vec![l.into(), r.into()];
        for z in chi {
            row.push(z.re.into());
            row.push(z.im.into());
        }
        t.push(row);
    }
    Ok(t)
}

/// Scattering amplitude f(theta) and |f|^2 over an angle sweep; the
/// integrated cross section outside the forward cone goes to the metadata.
pub fn run_xsection(params: &Params) -> Result<Table, CliError> {
    let c = coupling(params, None)?;
    let kin = kinematics(params)?;
    let thetas = params.sweep_or("theta", "-3:3:121")?.values;
    let cut = positive(params, "cut", DEFAULT_FORWARD_CONE)?;
    let rows = par_map(&thetas, |&th| -> Result<(Complex64, f64), CliError> {
        Ok((scattering_amplitude(&c, &kin, th)?, differential_cross_section(&c, &kin, th)?))
    })?;
    let mut t = Table::new(&["theta", "f_re", "f_im", "dsigma"]);
    t.metadata.extend(base_metadata("xsection"));
    t.meta("alpha", c.alpha);
    t.meta("k", kin.k);
    t.meta("cut", cut);
    t.meta("sigma_outside_cut", integrated_cross_section(&c, &kin, cut)?);
    for (&th, (f, ds)) in thetas.iter().zip(rows) {
        t.push(vec![th.into(), f.re.into(), f.im.into(), ds.into()]);
    }
    Ok(t)
}

/// Closed and large-argument Green's-function differences over a time
/// sweep, optionally with the regularized-integral oracle.
pub fn run_greens(params: &Params) -> Result<Table, CliError> {
    let c = coupling(params, None)?;
    let mass = positive(params, "mass", 1.0)?;
    let s3 = 3f64.sqrt();
    let r = positive(params, "r", s3)?;
    let rp = positive(params, "rprime", s3)?;
    let th = params.f64_or("theta", 0.0)?;
    let thp = params.f64_or("thetaprime", 0.0)?;
    let ts = positive_sweep(params, "t", "0.25:4:5log")?;
    let oracle = params.bool_or("oracle", false)?;
    let defaults = OracleOptions::default();
    let opts = OracleOptions {
        epsilon: positive(params, "epsilon", defaults.epsilon)?,
        levels: params.usize_or("levels", defaults.levels)?,
        spread_tol: positive(params, "spread_tol", defaults.spread_tol)?,
        quad: defaults.quad,
    };
    if opts.levels < 2 {
        return Err(CliError::Config(format!("`levels`: need at least 2, got {}", opts.levels)));
    }
    let rows = par_map(&ts, |&t| -> Result<Vec<Cell>, CliError> {
        let p = GreensPoint::new(r, rp, th, thp, t)?;
        let x = p.argument(mass);
        let g = greens_diff_closed(&c, mass, &p)?;
        let mut row: Vec<Cell> = vec![t.into(), x.into(), g.re.into(), g.im.into()];
        if x >= ASYMPTOTIC_MIN_ARG {
            let a = greens_diff_asymptotic(&c, mass, &p)?;
            row.extend([a.re.into(), a.im.into()]);
        } else {
            row.extend([Cell::Missing, Cell::Missing]);
        }
        // an unconverged oracle is reported on its row, not fatal to the table
        if oracle {
            match greens_diff_integral_oracle(&c, mass, &p, opts) {
                Ok(o) => row.extend([o.value.re.into(), o.value.im.into(), o.spread.into(), "".into()]),
                Err(e) => row.extend([Cell::Missing, Cell::Missing, Cell::Missing, format!("oracle: {e}").into()]),
            }
        }
        Ok(row)
    })?;
    let mut cols = vec!["t", "x", "G_re", "G_im", "asym_re", "asym_im"];
    if oracle {
        cols.extend(["oracle_re", "oracle_im", "oracle_spread", "warning"]);
    }
    let mut t = Table::new(&cols);
    t.metadata.extend(base_metadata("greens"));
    t.meta("alpha", c.alpha);
    t.meta("mass", mass);
    t.meta("r", r);
    t.meta("rprime", rp);
    t.meta("theta", th);
    t.meta("thetaprime", thp);
    if oracle {
        t.meta("epsilon", opts.epsilon);
        t.meta("levels", opts.levels);
        t.meta("spread_tol", opts.spread_tol);
    }
    for row in rows {
        t.push(row);
    }
    Ok(t)
}

/// ln(|Delta(d)|/|Delta(0)|) / (-d^2/2 delta^2) per row, when a d = 0 row
/// exists.
fn exponents(ds: &[f64], mags: &[f64], delta: f64) -> Vec<Option<f64>> {
    let base = ds.iter().position(|&d| d == 0.0).map(|i| mags[i]);
    ds.iter()
        .zip(mags)
        .map(|(&d, &m)| match base {
            Some(b) if d != 0.0 && b > 0.0 && m > 0.0 => Some((m / b).ln() / (-d * d / (2.0 * delta * delta))),
            _ => None,
        })
        .collect()
}

/// |Delta| against impact parameter with the Gaussian suppression
/// exp(-d^2/2 delta^2), plus Gaussian-transit fits in the metadata.
/// Regime violations go to the `warning` column.
pub fn run_packet(params: &Params) -> Result<Table, CliError> {
    let c = coupling(params, Some(0.5))?;
    let mass = positive(params, "mass", 1.0)?;
    let k = positive(params, "k", 50.0)?;
    let rho0 = positive(params, "rho0", 20.0)?;
    let delta = positive(params, "delta", 2.0)?;
    let r = positive(params, "r", rho0)?;
    let theta = params.f64_or("theta", 0.0)?;
    let quad = params.bool_or("quadrature", false)?;
    let ds: Vec<f64> = match (params.has("d"), params.has("theta0")) {
        (true, true) => return Err(CliError::Config("`d` and `theta0` are exclusive".into())),
        (_, true) => params.sweep_or("theta0", "0")?.values.iter().map(|t| t * rho0).collect(),
        _ => params.sweep_or("d", "0,1,2,4,6")?.values,
    };
    let fixed_t = match params.raw("t").unwrap_or("matched") {
        "matched" => None,
        s => {
            let t: f64 = s
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("`t`: expected `matched` or a positive time, got `{s}`")))?;
            if !(t > 0.0) {
                return Err(CliError::Config(format!("`t`: must be positive, got {t}")));
            }
            Some(t)
        }
    };
    let cfgs = ds
        .iter()
        .map(|&d| PacketConfig::from_impact_parameter(delta, rho0, d, k).map_err(|e| CliError::Config(format!("`d` = {d}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = par_map(&cfgs, |cfg| -> Result<(f64, Complex64, Option<(Complex64, f64)>), CliError> {
        let t = fixed_t.unwrap_or_else(|| cfg.transit_time(mass, r));
        let v = delta_closed_formula(cfg, &c, mass, r, theta, t)?;
        let q = if quad {
            let e = delta_quadrature(cfg, &c, mass, r, theta, t)?;
            Some((e.value, e.error))
        } else {
            None
        };
        Ok((t, v, q))
    })?;
    let mags: Vec<f64> = rows.iter().map(|r| r.1.norm()).collect();
    let closed_exp = exponents(&ds, &mags, delta);
    let quad_exp = quad.then(|| {
        let m: Vec<f64> = rows.iter().map(|r| r.2.map_or(0.0, |q| q.0.norm())).collect();
        exponents(&ds, &m, delta)
    });
    let mut cols = vec!["d", "theta0", "t", "delta_re", "delta_im", "delta_abs", "suppression", "ratio", "exponent"];
    if quad {
        cols.extend(["quad_re", "quad_im", "quad_abs", "quad_error", "quad_exponent"]);
    }
    cols.push("warning");
    let mut table = Table::new(&cols);
    table.metadata.extend(base_metadata("packet"));
    table.meta("alpha", c.alpha);
    table.meta("mass", mass);
    table.meta("k", k);
    table.meta("rho0", rho0);
    table.meta("delta", delta);
    table.meta("r", r);
    table.meta("theta", theta);
    table.meta("time", fixed_t.map_or(json!("matched"), |t| json!(t)));
    for (i, (cfg, (t, v, q))) in cfgs.iter().zip(&rows).enumerate() {
        let supp = (-ds[i] * ds[i] / (2.0 * delta * delta)).exp();
        let mut row: Vec<Cell> = vec![
            ds[i].into(),
            cfg.theta0.into(),
            (*t).into(),
            v.re.into(),
            v.im.into(),
            v.norm().into(),
            supp.into(),
            (supp / v.norm()).into(),
            closed_exp[i].into(),
        ];
        if let (Some((qv, qe)), Some(qx)) = (q, &quad_exp) {
            row.extend([qv.re.into(), qv.im.into(), qv.norm().into(), (*qe).into(), qx[i].into()]);
        }
        row.push(cfg.regime_violations(r).join("; ").into());
        table.push(row);
    }
    // transit of the first row's packet across r
    if let Some(cfg) = cfgs.first() {
        let tc = cfg.transit_time(mass, r);
        let w = cfg.transit_width(mass);
        let ts: Vec<f64> = (0..13).map(|i| tc + w * (-1.5 + 0.25 * i as f64)).collect();
        table.meta("transit_expected_center", tc);
        table.meta("transit_expected_width", w);
        let closed = par_map(&ts, |&t| Ok(delta_closed_formula(cfg, &c, mass, r, theta, t)?.norm()))?;
        if let Ok(fit) = fit_gaussian_transit(&ts, &closed) {
            table.meta("transit_center", fit.center);
            table.meta("transit_width", fit.width);
        }
        if quad {
            let qm = par_map(&ts, |&t| Ok(delta_quadrature(cfg, &c, mass, r, theta, t)?.value.norm()))?;
            if let Ok(fit) = fit_gaussian_transit(&ts, &qm) {
                table.meta("quad_transit_center", fit.center);
                table.meta("quad_transit_width", fit.width);
            }
        }
    }
    Ok(table)
}

//! The analyses behind each subcommand. Each returns the files it produces;
//! nothing here touches the filesystem.

use serde::Serialize;
use serde_json::{json, Value};
use speclimit::config::{Analysis, RunConfig, SCHEMA_VERSION};
use speclimit::criterion::{self, Regime, DEFAULT_SCAN_LIMIT, HYDROGENOID_QUOTED_THRESHOLD};
use speclimit::io::{ensemble_to_csv, fmt_bool, fmt_num, to_json, Table};
use speclimit::noise::{self, Quadrature};
use speclimit::semiclassical::{self, Maslov};
use speclimit::sim;
use speclimit::{spectrum, Error, ModelKind, ModelSpec, Result};

pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

#[derive(Default)]
pub struct Outcome {
    pub files: Vec<OutputFile>,
    /// Human-readable lines for stdout.
    pub lines: Vec<String>,
}

impl Outcome {
    fn file(&mut self, name: &str, contents: String) {
        self.files.push(OutputFile { name: name.into(), contents });
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.file(name, to_json(value)?);
        Ok(())
    }

    fn extend(&mut self, other: Outcome) {
        self.files.extend(other.files);
        self.lines.extend(other.lines);
    }
}

pub struct Context<'a> {
    pub config: &'a RunConfig,
    pub model: &'a ModelSpec,
    pub seed: u64,
}

#[derive(Serialize)]
struct RangeEcho {
    requested: Option<(i64, i64)>,
    used: (i64, i64),
}

/// Requested range clamped to `[min, max]`. Without a request, finite
/// spectra are covered completely and open ones get `default_len` levels.
fn level_range(ctx: &Context, min: i64, max: Option<i64>, default_len: i64) -> Result<RangeEcho> {
    let requested = ctx.config.n_range;
    let (lo, hi) = requested.unwrap_or((min, max.unwrap_or(min + default_len - 1)));
    let max_v = max.unwrap_or(i64::MAX);
    let used = (lo.max(min), hi.min(max_v));
    if used.0 > used.1 {
        return Err(Error::OutOfRange { n: lo, min, max: max_v });
    }
    Ok(RangeEcho { requested, used })
}

/// Highest level the semiclassical engine can place in a numeric well.
fn numeric_level_cap(model: &ModelSpec, hi: i64) -> Result<Option<i64>> {
    if model.kind() != ModelKind::NumericPotential {
        return Ok(model.n_max());
    }
    let levels = semiclassical::semiclassical_levels(model, hi, Maslov::default_for(model))?;
    Ok(levels.last().map(|l| l.n))
}

fn model_echo(model: &ModelSpec) -> Value {
    json!({
        "kind": model.kind(),
        "units": model.units().name,
        "hbar": model.hbar(),
        "n_min": model.n_min(),
        "n_max": model.n_max(),
    })
}

pub fn run(analysis: Analysis, ctx: &Context) -> Result<Outcome> {
    match analysis {
        Analysis::Spectrum => spectrum_cmd(ctx),
        Analysis::Criterion => criterion_cmd(ctx),
        Analysis::Noise => noise_cmd(ctx),
        Analysis::Simulate => simulate_cmd(ctx),
        Analysis::Report => report_cmd(ctx),
    }
}

fn spectrum_cmd(ctx: &Context) -> Result<Outcome> {
    let m = ctx.model;
    let maslov = Maslov::default_for(m);
    let probe = level_range(ctx, m.n_min(), m.n_max(), 10)?;
    let cap = numeric_level_cap(m, probe.used.1)?;
    let range = level_range(ctx, m.n_min(), cap.or(m.n_max()), 10)?;
    let (lo, hi) = range.used;
    let numeric = m.kind() == ModelKind::NumericPotential;
    let compare = ctx.config.semiclassical && !numeric;
    let mut table = if compare {
        Table::new(&["n", "energy", "tau", "energy_semiclassical", "tau_semiclassical", "energy_rel_diff"])
    } else {
        Table::new(&["n", "energy", "tau"])
    };
    for n in lo..=hi {
        let (energy, tau) = if numeric {
            let e = semiclassical::quantize(m, n, maslov)?.energy;
            (e, semiclassical::period_of_energy(m, e)?.tau)
        } else {
            (spectrum::energy_level(m, n)?.energy, spectrum::classical_period(m, n)?.tau)
        };
        let mut row = vec![n.to_string(), fmt_num(energy), fmt_num(tau)];
        if compare {
            let e_sc = semiclassical::quantize(m, n, maslov)?.energy;
            let tau_sc = semiclassical::period_of_energy(m, e_sc)?.tau;
            row.extend([fmt_num(e_sc), fmt_num(tau_sc), fmt_num((e_sc - energy).abs() / energy.abs())]);
        }
        table.push(row);
    }
    let mut out = Outcome::default();
    out.lines.push(format!("spectrum: {} levels, n = {lo}..={hi}", table.len()));
    out.file("spectrum.csv", table.to_csv());
    out.json(
        "spectrum.json",
        &json!({
            "schema_version": SCHEMA_VERSION,
            "analysis": "spectrum",
            "model": model_echo(m),
            "n_range": range,
            "levels": table.len(),
            "source": if numeric { "semiclassical" } else { "closed-form" },
            "semiclassical_column": compare,
            "maslov": maslov.0,
            "time_unit_seconds": m.units().time_si,
        }),
    )?;
    Ok(out)
}

fn criterion_cmd(ctx: &Context) -> Result<Outcome> {
    let m = ctx.model;
    let (gap_lo, gap_hi) = criterion::gap_range(m);
    let probe = level_range(ctx, gap_lo, gap_hi, 20)?;
    let cap = numeric_level_cap(m, probe.used.1)?;
    let range = level_range(ctx, gap_lo, cap.or(gap_hi), 20)?;
    let (lo, hi) = range.used;
    let report = criterion::classify(m, lo, hi)?;
    let scan = criterion::threshold_scan(m, DEFAULT_SCAN_LIMIT)?;

    let mut table = Table::new(&[
        "n",
        "energy_n",
        "tau_n",
        "delta_e",
        "delta_tau",
        "y_over_hbar",
        "resolvable",
        "delta_e_over_e",
        "annotation",
    ]);
    for (g, (_, ratio)) in report.gaps.iter().zip(&report.ratio_series) {
        table.push(vec![
            g.n.to_string(),
            fmt_num(g.energy_n),
            fmt_num(g.tau_n),
            fmt_num(g.d_e),
            fmt_num(g.d_tau),
            fmt_num(g.y_over_hbar),
            fmt_bool(g.resolvable),
            fmt_num(*ratio),
            g.annotation.map(|a| a.message().to_string()).unwrap_or_default(),
        ]);
    }
    let mut plot = Table::new(&["series", "n", "y_over_hbar"]);
    for g in &report.gaps {
        plot.push(vec!["y".into(), g.n.to_string(), fmt_num(g.y_over_hbar)]);
    }
    for n in [lo, hi] {
        plot.push(vec!["half_hbar".into(), n.to_string(), fmt_num(0.5)]);
    }

    let max_y = report.gaps.iter().max_by(|a, b| a.y_over_hbar.total_cmp(&b.y_over_hbar));
    let resolvable: Vec<i64> = report.gaps.iter().filter(|g| g.resolvable).map(|g| g.n).collect();
    let quoted = (m.kind() == ModelKind::Hydrogenoid).then_some(HYDROGENOID_QUOTED_THRESHOLD);
    let mut out = Outcome::default();
    out.lines.push(match scan.n_star {
        Some(n) => format!("criterion: threshold n* = {n} ({:?})", scan.regime),
        None => "criterion: no unresolvable pair found".to_string(),
    });
    if let Some(g) = max_y {
        out.lines.push(format!("criterion: max y/hbar = {} at n = {}", fmt_num(g.y_over_hbar), g.n));
    }
    out.file("criterion.csv", table.to_csv());
    out.file("criterion_plot.csv", plot.to_csv());
    out.json(
        "criterion.json",
        &json!({
            "schema_version": SCHEMA_VERSION,
            "analysis": "criterion",
            "model": model_echo(m),
            "source": report.source,
            "n_range": range,
            "threshold": scan.n_star,
            "regime": scan.regime,
            "crossings": scan.crossings,
            "monotone_tail": scan.monotone_tail,
            "quoted_threshold": quoted,
            "range_regime": report.threshold.regime,
            "range_threshold": report.threshold.n_star,
            "resolvable_n": resolvable,
            "max_y_over_hbar": max_y.map(|g| json!({"n": g.n, "value": g.y_over_hbar})),
            "all_unresolvable_in_range": report.threshold.regime == Regime::AllUnresolvable,
            "notes": report.notes,
        }),
    )?;
    Ok(out)
}

fn noise_cmd(ctx: &Context) -> Result<Outcome> {
    let m = ctx.model;
    let hbar = m.hbar();
    let cfg = &ctx.config.noise;
    let sql_width = (0.5 * hbar).sqrt();
    let dx = cfg.delta_x.unwrap_or(sql_width);
    let dp = cfg.delta_p.unwrap_or(sql_width);
    let budget = noise::NoiseBudget::new(dx, dp, hbar)?;
    let pos = noise::sample_ensemble(Quadrature::Position, cfg.center_x, dx, cfg.count, ctx.seed)?;
    let mom = noise::sample_ensemble(Quadrature::Momentum, cfg.center_p, dp, cfg.count, ctx.seed)?;
    let state = noise::reconstruct_state(&pos, &mom, hbar)?;
    let normalization = state.position_normalization()?;

    let momenta = match &cfg.momenta {
        Some(ps) => ps.clone(),
        None if dx > 0.0 => (0..=12).map(|k| k as f64 * hbar / (4.0 * dx)).collect(),
        None => vec![0.0],
    };
    let mut chars = Table::new(&["p", "exact", "mc_re", "mc_im", "standard_error", "within_3se"]);
    let mut all_within = true;
    for p in momenta {
        let exact = noise::characteristic_factor(dx, p, hbar);
        let (re, im, se) = noise::empirical_characteristic(&pos, p, hbar);
        let ok = (re - exact).abs() <= 3.0 * se && im.abs() <= 3.0 * se;
        all_within &= ok;
        chars.push(vec![fmt_num(p), fmt_num(exact), fmt_num(re), fmt_num(im), fmt_num(se), fmt_bool(ok)]);
    }

    let mut out = Outcome::default();
    out.file("ensemble_position.csv", ensemble_to_csv(&pos));
    out.file("ensemble_momentum.csv", ensemble_to_csv(&mom));
    out.file("noise_characteristic.csv", chars.to_csv());
    let mut product_summary = Value::Null;
    if m.kind() == ModelKind::Harmonic {
        let mut t = Table::new(&["n", "product_over_hbar", "closed_form", "below_sql"]);
        let mut max_product: f64 = 0.0;
        for n in 0..=cfg.harmonic_levels {
            let v = noise::required_noise_product_for_resolution(m, n)?;
            max_product = max_product.max(v);
            t.push(vec![n.to_string(), fmt_num(v), fmt_num(1.0 / (16.0 * (n as f64 + 0.5))), fmt_bool(v < 0.5)]);
        }
        product_summary = json!({"levels": cfg.harmonic_levels + 1, "max_product_over_hbar": max_product, "all_below_sql": max_product < 0.5});
        out.lines.push(format!(
            "noise: required product/hbar <= {} for n <= {}",
            fmt_num(max_product),
            cfg.harmonic_levels
        ));
        out.file("noise_product.csv", t.to_csv());
    }
    out.lines.push(format!(
        "noise: reconstructed product/hbar = {}{}",
        fmt_num(state.product_over_hbar),
        if state.sub_sql { " (below the standard quantum limit)" } else { "" }
    ));
    out.json(
        "noise.json",
        &json!({
            "schema_version": SCHEMA_VERSION,
            "analysis": "noise",
            "model": model_echo(m),
            "seed": ctx.seed,
            "count": cfg.count,
            "declared": {"budget": budget, "preparable": budget.is_preparable()},
            "reconstructed": state,
            "position_normalization": normalization,
            "characteristic_within_3se": all_within,
            "noise_product": product_summary,
        }),
    )?;
    Ok(out)
}

fn simulate_cmd(ctx: &Context) -> Result<Outcome> {
    let m = ctx.model;
    let (gap_lo, gap_hi) = criterion::gap_range(m);
    let protocol = ctx.config.protocol.protocol(ctx.seed);
    if m.kind() == ModelKind::Harmonic {
        return Err(Error::DegeneratePeriod);
    }
    let probe = level_range(ctx, gap_lo, gap_hi, 11)?;
    let cap = numeric_level_cap(m, probe.used.1)?;
    let range = level_range(ctx, gap_lo, cap.or(gap_hi), 11)?;
    let (lo, hi) = range.used;
    let sweep = sim::consistency_sweep(m, lo, hi, &protocol)?;
    let mut t = Table::new(&[
        "n",
        "tau_n",
        "d_prime",
        "bayes_error",
        "mc_resolvable",
        "y_over_hbar",
        "criterion_resolvable",
        "delta_t",
        "noise_free",
    ]);
    for r in &sweep.results {
        t.push(vec![
            r.n_high.to_string(),
            fmt_num(r.tau_high),
            fmt_num(r.d_prime),
            fmt_num(r.bayes_error),
            fmt_bool(r.mc_resolvable),
            fmt_num(r.y_over_hbar),
            fmt_bool(r.criterion_resolvable),
            fmt_num(r.delta_t),
            fmt_bool(r.noise_free),
        ]);
    }
    let s = &sweep.summary;
    let show = |c: Option<i64>| c.map_or("none".to_string(), |n| n.to_string());
    let headline = format!(
        "mc crossover {} vs criterion crossover {}: {}",
        show(s.mc_crossover),
        show(s.criterion_crossover),
        if s.crossover_within_one { "agree within 1 level" } else { "disagree" }
    );
    let mut out = Outcome::default();
    out.lines.push(format!("simulate: {headline}; {} MC-resolvable pairs", s.mc_resolvable_pairs));
    out.file("sweep.csv", t.to_csv());
    out.json(
        "sweep_summary.json",
        &json!({
            "schema_version": SCHEMA_VERSION,
            "analysis": "simulate",
            "model": model_echo(m),
            "n_range": range,
            "headline": headline,
            "summary": s,
            "max_d_prime": sweep.results.iter().map(|r| r.d_prime).fold(0.0, f64::max),
            "time_unit_seconds": m.units().time_si,
        }),
    )?;
    Ok(out)
}

fn report_cmd(ctx: &Context) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut status = Vec::new();
    let mut first_error = None;
    for analysis in [Analysis::Spectrum, Analysis::Criterion, Analysis::Noise, Analysis::Simulate] {
        match run(analysis, ctx) {
            Ok(part) => {
                out.extend(part);
                status.push(json!({"analysis": analysis.name(), "status": "ok"}));
            }
            Err(e) => {
                out.lines.push(format!("{}: skipped ({})", analysis.name(), e));
                status.push(json!({"analysis": analysis.name(), "status": "skipped", "error": e.code(), "message": e.to_string()}));
                first_error.get_or_insert(e);
            }
        }
    }
    if out.files.is_empty() {
        return Err(first_error.unwrap_or(Error::Unsupported { kind: "report", what: "no analysis produced output" }));
    }
    out.json("report.json", &json!({"schema_version": SCHEMA_VERSION, "analysis": "report", "model": model_echo(ctx.model), "analyses": status}))?;
    Ok(out)
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;

use ising_dos::analytic::{saddle_density, tail_density_critical, TwoFieldGaussian};
use ising_dos::combinatorics::{block_census, degeneracy_census};
use ising_dos::curve::{Abscissa, DensityCurve, Grid, Normalization};
use ising_dos::density::{compare_with, default_bins, histogram, kernel_density, DEFAULT_PROMINENCE};
use ising_dos::fermion::enumerate_spectrum;
use ising_dos::hamiltonian::{classical_spectrum, exact_spectrum};
use ising_dos::io::{self as dio, fmt_f64, Metadata};
use ising_dos::mixture::GaussianMixture;
use ising_dos::moments::{analytic_moments, moment_formula_min_n, moment_relative_error, numeric_moments};
use ising_dos::peaks::{
    generic_alpha_mixture, small_lambda_mixture_integer_alpha, strong_field_mixture, tfim_mixture,
    visibility_nmax, GenericVariance, Regime,
};
use ising_dos::{Error, IsingParams, ManyBodySpectrum, Method, Model, Result};

#[derive(Parser, Debug)]
#[command(name = "ising-dos", version)]
#[command(about = "Exact spectra and spectral-density approximations for the quantum Ising chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact eigenvalues
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "dense")]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Histogram or kernel estimate of a spectrum file
    Density {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to ⌈√(count)⌉, at most 400
        #[arg(long, conflicts_with = "kde")]
        bins: Option<usize>,
        /// Gaussian kernel bandwidth
        #[arg(long)]
        kde: Option<f64>,
        /// Evaluation grid for the kernel estimate
        #[arg(long, requires = "kde", allow_hyphen_values = true)]
        grid: Option<Grid>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Analytic density on a grid
    Approx {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        model: ModelArgs,
        /// LO:HI:POINTS, inclusive, in the chosen abscissa
        #[arg(long, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, conflicts_with = "rescaled")]
        per_spin: bool,
        #[arg(long)]
        rescaled: bool,
        /// Add the third-moment correction to the Gaussian
        #[arg(long)]
        cubic: bool,
        /// Use the N → ∞ single-particle averages for multi-tfim
        #[arg(long)]
        preview: bool,
        /// Drop the second-order shift from multi-int-alpha
        #[arg(long)]
        no_shift: bool,
        /// Exact cell variances for multi-generic
        #[arg(long)]
        exact_variance: bool,
        /// Where the mixture JSON goes; defaults to OUT with a .mixture.json suffix
        #[arg(long)]
        mixture_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// L1, sup and peak offsets between two curve files
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
        prominence: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Block-structure or degeneracy-class counts
    Census {
        #[arg(long)]
        n: usize,
        /// Rational longitudinal field P/Q for the degeneracy census
        #[arg(long)]
        alpha: Option<Ratio<i64>>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Numeric against closed-form trace moments
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value = "dense")]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Largest N at which peaks stay resolved
    Visibility {
        #[arg(long)]
        model: Option<Model>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        /// tfim-large, tfim-small, strong-fields or int-alpha; inferred if omitted
        #[arg(long)]
        regime: Option<Regime>,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// tfim or two-field; two-field whenever alpha is nonzero if omitted
    #[arg(long)]
    model: Option<Model>,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<IsingParams> {
        let model = self.model.unwrap_or(if self.alpha == 0.0 {
            Model::TransverseField
        } else {
            Model::TwoField
        });
        IsingParams::new(self.n, self.lambda, self.alpha, model)
    }
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Output file; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Gaussian,
    Saddle,
    Tail,
    MultiTfim,
    MultiStrong,
    MultiIntAlpha,
    MultiGeneric,
}

#[derive(Serialize)]
struct ErrorPayload<'a> {
    code: &'a str,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = ErrorPayload {
                code: e.code(),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&payload).expect("error payload serializes"));
            ExitCode::from(1)
        }
    }
}

fn sink(out: &OutArgs) -> Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn base_meta(command: &str) -> Metadata {
    vec![
        ("tool".into(), "ising-dos".into()),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), command.into()),
    ]
}

fn push(meta: &mut Metadata, key: &str, value: impl ToString) {
    meta.push((key.to_string(), value.to_string()));
}

fn params_meta(meta: &mut Metadata, p: &IsingParams) {
    push(meta, "model", p.model());
    push(meta, "n", p.n());
    push(meta, "lambda", p.lambda());
    push(meta, "alpha", p.alpha());
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Spectrum {
            model,
            method,
            format,
            out,
        } => {
            let p = model.params()?;
            let spec = compute_spectrum(&p, method)?;
            let mut w = sink(&out)?;
            match format {
                Format::Csv => {
                    let mut meta = base_meta("spectrum");
                    params_meta(&mut meta, &p);
                    push(&mut meta, "method", method);
                    dio::write_spectrum_csv(&mut w, spec.energies(), &meta)?;
                }
                Format::Json => dio::write_json(&mut w, &spec)?,
            }
            w.flush()?;
        }
        Command::Density {
            input,
            bins,
            kde,
            grid,
            out,
        } => {
            let (energies, mut meta) = dio::read_spectrum_csv(File::open(&input)?)?;
            meta.retain(|(k, _)| k != "command" && k != "tool" && k != "version");
            let mut head = base_meta("density");
            let curve = match kde {
                Some(sigma) => {
                    push(&mut head, "kde_sigma", sigma);
                    kernel_density(&energies, sigma, grid)?
                }
                None => {
                    let b = bins.unwrap_or_else(|| default_bins(energies.len()));
                    push(&mut head, "bins", b);
                    histogram(&energies, b, None)?
                }
            };
            head.extend(meta);
            let mut w = sink(&out)?;
            dio::write_curve_csv(&mut w, &curve, &head)?;
            w.flush()?;
        }
        Command::Approx {
            kind,
            model,
            grid,
            per_spin,
            rescaled,
            cubic,
            preview,
            no_shift,
            exact_variance,
            mixture_out,
            out,
        } => {
            let p = model.params()?;
            let abscissa = if per_spin {
                Abscissa::PerSpin
            } else if rescaled {
                Abscissa::Rescaled
            } else {
                Abscissa::Energy
            };
            let (curve, mixture) = approx(kind, &p, &grid, abscissa, cubic, preview, no_shift, exact_variance)?;
            let mut meta = base_meta("approx");
            push(&mut meta, "kind", kind.to_possible_value().expect("named kind").get_name());
            params_meta(&mut meta, &p);
            push(&mut meta, "grid", grid);
            match kind {
                Kind::Gaussian => push(&mut meta, "cubic", cubic),
                Kind::MultiTfim => push(&mut meta, "preview", preview),
                Kind::MultiIntAlpha => push(&mut meta, "shift", !no_shift),
                Kind::MultiGeneric => push(&mut meta, "exact_variance", exact_variance),
                _ => {}
            }
            let mut w = sink(&out)?;
            dio::write_curve_csv(&mut w, &curve, &meta)?;
            w.flush()?;
            if let Some(mix) = mixture {
                if let Some(path) = mixture_out.or_else(|| out.out.as_deref().map(mixture_path)) {
                    let mut f = BufWriter::new(File::create(path)?);
                    dio::write_json(&mut f, &MixtureFile { meta: meta_map(&meta), mixture: mix })?;
                    f.flush()?;
                }
            }
        }
        Command::Compare {
            a,
            b,
            prominence,
            out,
        } => {
            let (ca, _) = dio::read_curve_csv(File::open(&a)?)?;
            let (cb, _) = dio::read_curve_csv(File::open(&b)?)?;
            let report = compare_with(&ca, &cb, prominence)?;
            let mut w = sink(&out)?;
            dio::write_json(&mut w, &report)?;
            w.flush()?;
        }
        Command::Census {
            n,
            alpha,
            format,
            out,
        } => {
            let mut meta = base_meta("census");
            push(&mut meta, "n", n);
            let table = match alpha {
                None => census_rows(n)?,
                Some(a) => {
                    push(&mut meta, "alpha", a);
                    class_rows(n, a)?
                }
            };
            let mut w = sink(&out)?;
            match format {
                Format::Csv => table.write_csv(&mut w, &meta)?,
                Format::Json => dio::write_json(&mut w, &table.to_json(&meta))?,
            }
            w.flush()?;
        }
        Command::Moments {
            model,
            max_order,
            method,
            format,
            out,
        } => {
            let p = model.params()?;
            let table = moment_rows(&p, method, max_order)?;
            let mut meta = base_meta("moments");
            params_meta(&mut meta, &p);
            push(&mut meta, "method", method);
            let mut w = sink(&out)?;
            match format {
                Format::Csv => table.write_csv(&mut w, &meta)?,
                Format::Json => dio::write_json(&mut w, &table.to_json(&meta))?,
            }
            w.flush()?;
        }
        Command::Visibility {
            model,
            lambda,
            alpha,
            regime,
        } => {
            let model = model.unwrap_or(if alpha == 0.0 {
                Model::TransverseField
            } else {
                Model::TwoField
            });
            if model == Model::TransverseField && alpha != 0.0 {
                return Err(Error::InvalidArgs("tfim needs alpha = 0".into()));
            }
            let regime = regime.unwrap_or(match model {
                Model::TransverseField if lambda.abs() > 1.0 => Regime::TfimLargeLambda,
                Model::TransverseField => Regime::TfimSmallLambda,
                Model::TwoField if alpha.fract() == 0.0 && alpha != 0.0 && lambda.abs() < 1.0 => {
                    Regime::SmallLambdaIntegerAlpha
                }
                Model::TwoField => Regime::StrongFields,
            });
            let v = visibility_nmax(lambda, alpha, regime)?;
            let mut w = BufWriter::new(io::stdout().lock());
            dio::write_json(&mut w, &v)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn compute_spectrum(p: &IsingParams, method: Method) -> Result<ManyBodySpectrum> {
    match method {
        Method::Dense => exact_spectrum(p),
        Method::Fermion => {
            if !p.is_transverse() {
                return Err(Error::InvalidArgs("the fermion method needs the tfim model".into()));
            }
            enumerate_spectrum(p.n(), p.lambda())
        }
        Method::Classical => classical_spectrum(p),
    }
}

fn mixture_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".mixture.json");
    PathBuf::from(s)
}

fn meta_map(meta: &Metadata) -> serde_json::Map<String, serde_json::Value> {
    meta.iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect()
}

#[derive(Serialize)]
struct MixtureFile {
    meta: serde_json::Map<String, serde_json::Value>,
    mixture: GaussianMixture,
}

/// Energy per unit of the chosen abscissa: `E = scale · x`.
fn abscissa_scale(p: &IsingParams, abscissa: Abscissa) -> f64 {
    let n = p.n() as f64;
    match abscissa {
        Abscissa::Energy => 1.0,
        Abscissa::PerSpin => n,
        Abscissa::Rescaled => (n * (1.0 + p.lambda().powi(2) + p.alpha().powi(2))).sqrt(),
    }
}

/// Samples a density per unit `E` on a grid in `abscissa`.
fn sample_energy_density<F>(grid: &Grid, abscissa: Abscissa, scale: f64, f: F) -> Result<DensityCurve>
where
    F: Fn(f64) -> Result<f64>,
{
    let xs = grid.points();
    let values = xs
        .iter()
        .map(|&x| f(scale * x).map(|v| v * scale))
        .collect::<Result<Vec<f64>>>()?;
    DensityCurve::new(abscissa, Normalization::UnitIntegral, xs, values)
}

#[allow(clippy::too_many_arguments)]
fn approx(
    kind: Kind,
    p: &IsingParams,
    grid: &Grid,
    abscissa: Abscissa,
    cubic: bool,
    preview: bool,
    no_shift: bool,
    exact_variance: bool,
) -> Result<(DensityCurve, Option<GaussianMixture>)> {
    let scale = abscissa_scale(p, abscissa);
    let n = p.n() as f64;
    let mixture = match kind {
        Kind::Gaussian => {
            let g = TwoFieldGaussian::new(p, cubic);
            let c = sample_energy_density(grid, abscissa, scale, |e| Ok(g.density_energy(e)))?;
            return Ok((c, None));
        }
        Kind::Saddle => {
            let c = sample_energy_density(grid, abscissa, scale, |e| match saddle_density(e / n, p) {
                Ok(v) => Ok(v / n),
                Err(Error::OutOfSupport { .. }) => Ok(0.0),
                Err(err) => Err(err),
            })?;
            return Ok((c, None));
        }
        Kind::Tail => {
            if !p.is_transverse() || p.lambda() != 1.0 {
                return Err(Error::InvalidArgs("the tail density is for the tfim at lambda = 1".into()));
            }
            let c = sample_energy_density(grid, abscissa, scale, |e| match tail_density_critical(e, p.n()) {
                Err(Error::AtOrBelowGroundState { .. }) => Ok(0.0),
                other => other,
            })?;
            return Ok((c, None));
        }
        Kind::MultiTfim => tfim_mixture(p, preview)?,
        Kind::MultiStrong => strong_field_mixture(p)?,
        Kind::MultiIntAlpha => small_lambda_mixture_integer_alpha(p, !no_shift)?,
        Kind::MultiGeneric => {
            let v = if exact_variance {
                GenericVariance::Exact
            } else {
                GenericVariance::LargeCell
            };
            generic_alpha_mixture(p, v)?
        }
    };
    let energy_grid = Grid::new(grid.lo * scale, grid.hi * scale, grid.points)?;
    let curve = mixture
        .render(&energy_grid, Abscissa::Energy)
        .rescale(1.0 / scale, abscissa);
    Ok((curve, Some(mixture)))
}

/// A small numeric table written as CSV with metadata, or as JSON rows.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn write_csv<W: Write>(&self, w: &mut W, meta: &Metadata) -> Result<()> {
        for (k, v) in meta {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(w, "{}", r.join(","))?;
        }
        Ok(())
    }

    fn to_json(&self, meta: &Metadata) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj = self
                    .header
                    .iter()
                    .zip(r)
                    .map(|(h, v)| {
                        let val = v
                            .parse::<i128>()
                            .ok()
                            .and_then(|i| serde_json::to_value(i).ok())
                            .or_else(|| v.parse::<f64>().ok().map(serde_json::Value::from))
                            .unwrap_or_else(|| serde_json::Value::String(v.clone()));
                        (h.to_string(), val)
                    })
                    .collect::<serde_json::Map<_, _>>();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "meta": meta_map(meta), "rows": rows })
    }
}

fn census_rows(n: usize) -> Result<Table> {
    let c = block_census(n)?;
    let rows = c
        .table
        .iter()
        .map(|(&(n, k), &f)| vec![n.to_string(), k.to_string(), f.to_string()])
        .collect();
    Ok(Table {
        header: vec!["n", "k", "count"],
        rows,
    })
}

fn class_rows(n: usize, alpha: Ratio<i64>) -> Result<Table> {
    let c = degeneracy_census(n, alpha)?;
    let mut rows = Vec::with_capacity(c.classes.len());
    for (&r, &mult) in &c.classes {
        let e = c.energy_of(r)?;
        let e = *e.numer() as f64 / *e.denom() as f64;
        rows.push(vec![r.to_string(), fmt_f64(e), mult.to_string()]);
    }
    Ok(Table {
        header: vec!["class", "energy", "multiplicity"],
        rows,
    })
}

fn moment_rows(p: &IsingParams, method: Method, max_order: usize) -> Result<Table> {
    if !(1..=4).contains(&max_order) {
        return Err(Error::InvalidArgs(format!("max order must be 1..=4, got {max_order}")));
    }
    let spec = compute_spectrum(p, method)?;
    let num = numeric_moments(&spec, max_order);
    let ana = analytic_moments(p);
    let mut rows = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        let (x, y) = (num.get(k).expect("order computed"), ana.get(k).expect("order known"));
        let valid = moment_formula_min_n(k).is_some_and(|m| p.n() >= m);
        rows.push(vec![
            k.to_string(),
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(moment_relative_error(x, y, ana.m2(), k)),
            valid.to_string(),
        ]);
    }
    Ok(Table {
        header: vec!["order", "numeric", "analytic", "relative_error", "formula_valid"],
        rows,
    })
}

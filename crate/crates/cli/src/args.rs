use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use flatnewt::decide::Matrix2;
use flatnewt::functional::Integrand;
use flatnewt::geom2d::{generators, Domain, DomainSpec, Point2};
use flatnewt::kbound::Budget;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "flatnewt", version, about = "Local minimality of the flat profile for resistance functionals on convex domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Area, diameter, singular points and vertical support lines.
    DomainInfo(Common),
    /// Interval for the derivative-ratio constant.
    KEstimate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Witness whose ratio reaches a threshold.
    Witness {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Whether the flat profile is a local minimum.
    Decide {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        budget: BudgetArgs,
        /// newtonian | quadratic:l1,l2 | form:h11,h12,h22
        #[arg(long)]
        integrand: Option<String>,
    },
    /// Ratios of an oscillating, non-concave field.
    Oscillation {
        #[command(flatten)]
        common: Common,
        /// Frequencies, comma separated.
        #[arg(long = "N", value_delimiter = ',')]
        n: Option<Vec<u32>>,
        /// Quadrature grid size per axis.
        #[arg(long)]
        grid: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Built-in domain, e.g. disk, half_disk, diamond, square,
    /// rectangle(2,1), regular_ngon(6,0), ellipse(2,1,8).
    #[arg(long = "gen", conflicts_with = "domain")]
    pub generator: Option<String>,
    /// Domain JSON file.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// JSON file with defaults for any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a figure here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Vertices used to polygonize arcs.
    #[arg(long)]
    pub n_poly: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub apex_counts: Option<Vec<usize>>,
}

/// Config file contents: the same options as the flags, all optional.
/// Flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(rename = "gen")]
    pub generator: Option<String>,
    pub domain: Option<DomainSpec>,
    pub seed: Option<u64>,
    pub n_poly: Option<usize>,
    pub restarts: Option<usize>,
    pub iters: Option<usize>,
    pub apex_counts: Option<Vec<usize>>,
    pub threshold: Option<f64>,
    pub integrand: Option<String>,
    #[serde(rename = "N")]
    pub n: Option<Vec<u32>>,
    pub grid: Option<usize>,
}

pub const DEFAULT_THRESHOLD: f64 = 100.0;
pub const DEFAULT_FREQUENCIES: [u32; 4] = [1, 2, 4, 8];
pub const DEFAULT_GRID: usize = 384;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn load_config(common: &Common) -> Result<Config, CliError> {
    match &common.config {
        None => Ok(Config::default()),
        Some(path) => serde_json::from_str(&read(path)?)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display()))),
    }
}

/// The domain and a short description of where it came from.
pub fn load_domain(common: &Common, config: &Config) -> Result<(Domain, String), CliError> {
    let n_poly = common.n_poly.or(config.n_poly);
    let input = |e: flatnewt::geom2d::GeomError| CliError::Input(e.to_string());
    let from_spec = |spec: &DomainSpec| -> Result<Domain, CliError> {
        let domain = spec.build().map_err(input)?;
        match n_poly {
            Some(n) => domain.with_n_poly(n).map_err(input),
            None => Ok(domain),
        }
    };
    if let Some(name) = common.generator.as_ref().or(config.generator.as_ref().filter(|_| common.domain.is_none())) {
        return Ok((generators::from_name(name, n_poly).map_err(input)?, format!("gen:{name}")));
    }
    if let Some(path) = &common.domain {
        let spec = DomainSpec::from_json(&read(path)?).map_err(input)?;
        return Ok((from_spec(&spec)?, format!("file:{}", path.display())));
    }
    match &config.domain {
        Some(spec) => Ok((from_spec(spec)?, "config".into())),
        None => Err(CliError::Input("no domain: pass --gen, --domain or a config with one".into())),
    }
}

pub fn budget(args: &BudgetArgs, config: &Config) -> Result<Budget, CliError> {
    let d = Budget::default();
    let b = Budget {
        restarts: args.restarts.or(config.restarts).unwrap_or(d.restarts),
        iters: args.iters.or(config.iters).unwrap_or(d.iters),
        apex_counts: args
            .apex_counts
            .clone()
            .or_else(|| config.apex_counts.clone())
            .unwrap_or(d.apex_counts),
    };
    if b.restarts == 0 || b.apex_counts.is_empty() || b.apex_counts.contains(&0) {
        return Err(CliError::Input("budget needs restarts ≥ 1 and positive apex counts".into()));
    }
    Ok(b)
}

/// `newtonian`, `quadratic:l1,l2`, or `form:h11,h12,h22` for the
/// quadratic form `½ζᵀHζ`, evaluated as a black box so that its Hessian
/// is found by finite differences.
pub fn parse_integrand(text: &str) -> Result<Integrand, CliError> {
    let text = text.trim();
    let (kind, args) = text.split_once(':').unwrap_or((text, ""));
    let nums = || -> Result<Vec<f64>, CliError> {
        args.split(',')
            .map(|s| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| CliError::Input(format!("bad integrand arguments in {text:?}")))
    };
    match kind {
        "newtonian" if args.is_empty() => Ok(Integrand::Newtonian),
        "quadratic" => match nums()?[..] {
            [l1, l2] => Ok(Integrand::Quadratic { l1, l2 }),
            _ => Err(CliError::Input(format!("quadratic takes two coefficients: {text:?}"))),
        },
        "form" => match nums()?[..] {
            [a, b, d] => {
                let h: Matrix2 = [[a, b], [b, d]];
                Ok(Integrand::custom(text, move |z: Point2| {
                    0.5 * (h[0][0] * z.x * z.x + 2.0 * h[0][1] * z.x * z.y + h[1][1] * z.y * z.y)
                }))
            }
            _ => Err(CliError::Input(format!("form takes three entries: {text:?}"))),
        },
        _ => Err(CliError::Input(format!("unknown integrand {text:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrands_parse() {
        assert!(matches!(parse_integrand("newtonian"), Ok(Integrand::Newtonian)));
        assert!(matches!(
            parse_integrand("quadratic:-1,0.5"),
            Ok(Integrand::Quadratic { l1, l2 }) if l1 == -1.0 && l2 == 0.5
        ));
        let f = parse_integrand("form:2,1,-4").unwrap();
        assert_eq!(f.eval(Point2::new(1.0, 1.0)), 0.5 * (2.0 + 2.0 - 4.0));
        for bad in ["", "quadratic:1", "quadratic:a,b", "form:1,2", "newtonian:1", "cubic:1"] {
            assert!(parse_integrand(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(serde_json::from_str::<Config>(r#"{"gen": "disk", "seeds": 1}"#).is_err());
        let c: Config = serde_json::from_str(r#"{"gen": "disk", "N": [1, 3], "apex_counts": [2]}"#).unwrap();
        assert_eq!(c.n, Some(vec![1, 3]));
    }
}

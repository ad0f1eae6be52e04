use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use n4char::decomp::{decompose, JacobiFormInput};
use n4char::identities::{identity_suite, s_oracle_identity, IdentityCheck};
use n4char::mock::s_series;
use n4char::numeric::{
    check_completion_modulus, check_completions, check_eta_cubed, check_jacobi_automorphy,
    check_vartheta_holomorphic, check_vartheta_transforms, parse_complex, ClosedForm, Gamma, JacobiEval,
    NumericContext, Report, SeriesModel,
};
use n4char::svoa::{build_k3, build_rank6, parity_root_obstruction, positivity_check, trace_decompose};
use n4char::theta::{eta_power, theta_const};
use n4char::{parse_rational, Rational};

#[derive(Parser)]
#[command(name = "n4char", version, about = "Exact q-series, theta decompositions and N=4 character coefficients")]
struct Cli {
    /// Truncation order, an integer or P/Q.
    #[arg(long, global = true, default_value = "20")]
    order: String,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one exact series.
    Series {
        #[arg(value_enum)]
        name: SeriesName,
    },
    /// Decompose a weight-0 index-1 Jacobi form given as JSON.
    Decompose {
        #[arg(long, conflicts_with = "example", required_unless_present = "example")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        example: Option<Example>,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Build a worked example from scratch and run the full pipeline.
    Examples {
        #[arg(value_enum)]
        which: Example,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Run the exact identity suite.
    Verify {
        #[arg(long, value_enum, default_value = "full")]
        suite: Suite,
    },
    /// Floating-point checks of completions and transformation laws.
    Numeric(NumericArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesName {
    #[value(name = "S0")]
    S0,
    #[value(name = "S1")]
    S1,
    Eta3,
    Theta2,
    Theta3,
    Theta4,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    K3,
    Rank6,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Full,
    SOracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    VarthetaHolomorphic,
    VarthetaTransforms,
    Completions,
    EtaCubed,
    CompletionModulus,
    JacobiAutomorphy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Series,
    Closed,
}

#[derive(Args)]
struct NumericArgs {
    #[arg(value_enum)]
    check: Check,
    #[arg(long, default_value = "i")]
    tau: String,
    #[arg(long)]
    z: Option<String>,
    #[arg(long, default_value_t = 12)]
    radius: u32,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value = "k3")]
    example: Example,
    #[arg(long, default_value = "S")]
    gamma: String,
    /// How the example is evaluated for jacobi-automorphy.
    #[arg(long, value_enum, default_value = "closed")]
    model: Model,
}

fn positive_order(s: &str) -> Result<Rational> {
    let o = parse_rational(s)?;
    if !o.is_positive() {
        bail!("order must be positive, got {s}");
    }
    Ok(o)
}

fn example_form(which: Example, order: &Rational) -> Result<JacobiFormInput> {
    Ok(match which {
        Example::K3 => build_k3(order)?,
        Example::Rank6 => JacobiFormInput::new("rank6", build_rank6(order)?.1.series)?,
    })
}

fn series(name: SeriesName, order: &Rational) -> Value {
    let s = match name {
        SeriesName::S0 => s_series(0, order),
        SeriesName::S1 => s_series(1, order),
        SeriesName::Eta3 => eta_power(3, order),
        SeriesName::Theta2 => theta_const(2, 1, order),
        SeriesName::Theta3 => theta_const(3, 1, order),
        SeriesName::Theta4 => theta_const(4, 1, order),
    };
    json!(s)
}

fn examples(which: Example, order: &Rational, nmax: Option<usize>) -> Result<Value> {
    Ok(match which {
        Example::K3 => {
            let input = build_k3(order)?;
            let d = decompose(&input, nmax)?;
            json!({
                "input": input,
                "decomposition": d,
                "parity": parity_root_obstruction(&input)?,
            })
        }
        Example::Rank6 => {
            let (z, e) = build_rank6(order)?;
            let g = trace_decompose(&z)?;
            let positivity = positivity_check(&g, true);
            let input = JacobiFormInput::new("rank6", e.series.clone())?;
            json!({
                "trace": z,
                "elliptic_genus": e,
                "g": g,
                "positivity_violations": positivity,
                "decomposition": decompose(&input, nmax)?,
                "parity": parity_root_obstruction(&input)?,
            })
        }
    })
}

fn verify(suite: Suite, order: &Rational) -> Result<(Value, bool)> {
    let checks: Vec<IdentityCheck> = match suite {
        Suite::Full => identity_suite(order)?,
        Suite::SOracle => s_oracle_identity(order).to_vec(),
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok((json!({ "pass": pass, "checks": checks }), pass))
}

fn numeric(a: &NumericArgs, order: &Rational) -> Result<Report> {
    if !(a.tol > 0.0) {
        bail!("tol must be positive");
    }
    let mut ctx = NumericContext::new(parse_complex(&a.tau)?, a.radius, a.tol)?;
    let gamma: Gamma = a.gamma.parse()?;
    Ok(match a.check {
        Check::VarthetaHolomorphic => check_vartheta_holomorphic(&ctx, order)?,
        Check::VarthetaTransforms => check_vartheta_transforms(&ctx)?,
        Check::Completions => check_completions(&ctx, order)?,
        Check::EtaCubed => check_eta_cubed(&ctx, order),
        Check::CompletionModulus => {
            let d = decompose(&example_form(a.example, order)?, None)?;
            let chi = d.chi.to_f64().context("chi as f64")?;
            check_completion_modulus(&d.fmock, chi, &gamma, &ctx)?
        }
        Check::JacobiAutomorphy => {
            ctx = ctx.with_z(parse_complex(a.z.as_deref().unwrap_or("0.1"))?);
            let form;
            let model: &dyn JacobiEval = match (a.model, a.example) {
                (Model::Closed, Example::K3) => &ClosedForm::K3,
                (Model::Closed, Example::Rank6) => &ClosedForm::Rank6Genus,
                (Model::Series, which) => {
                    form = example_form(which, order)?.form;
                    &SeriesModel(&form)
                }
            };
            check_jacobi_automorphy(model, &gamma, &ctx)?
        }
    })
}

fn run(cli: &Cli) -> Result<bool> {
    let order = positive_order(&cli.order)?;
    let (out, pass) = match &cli.command {
        Command::Series { name } => (series(*name, &order), true),
        Command::Decompose { input, example, nmax } => {
            let form = match (input, example) {
                (Some(path), _) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<JacobiFormInput>(&text)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(which)) => example_form(*which, &order)?,
                (None, None) => bail!("decompose needs --input or --example"),
            };
            (json!(decompose(&form, *nmax)?), true)
        }
        Command::Examples { which, nmax } => (examples(*which, &order, *nmax)?, true),
        Command::Verify { suite } => verify(*suite, &order)?,
        Command::Numeric(a) => {
            let r = numeric(a, &order)?;
            let pass = r.pass;
            (json!(r), pass)
        }
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(positive_order("3/8").unwrap(), n4char::rat(3, 8));
        assert!(positive_order("0").is_err());
        assert!(positive_order("-1").is_err());
        assert_eq!(positive_order("20").unwrap(), n4char::int(20));
    }
}

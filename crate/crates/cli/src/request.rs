use std::str::FromStr;

use clap::{Parser, ValueEnum};
use coapprox_core::coapprox::EpsilonValue;
use coapprox_core::linalg::{QMatrix, QVector, Rational};
use coapprox_core::space::SpaceSpec;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::commands::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Norm of one point.
    Norm,
    /// Extreme support functionals of one point.
    Jset,
    /// Whether one point is smooth.
    Smooth,
    /// Birkhoff-James orthogonality of two points.
    Bj,
    /// ε-Birkhoff-James orthogonality of two points.
    EpsBj,
    /// Best coapproximations to a point out of the subspace.
    BestCoapprox,
    /// Whether y0 is an ε-best coapproximation to a point.
    EpsCheck,
    /// Least ε for which y0 is an ε-best coapproximation.
    Defect,
    /// Anti-coproximinality and strong anti-coproximinality of the subspace.
    Classify,
    /// Star property of the components of a basis of a subspace of ℓ∞ⁿ.
    StarProperty,
    /// Minimal norming set of a subspace of ℓ₁ⁿ.
    NormingSet,
    /// Vertices and facets of the unit ball.
    Facets,
    /// Extreme functionals supporting a smooth point of the subspace.
    Jy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Jset => "jset",
            Command::Smooth => "smooth",
            Command::Bj => "bj",
            Command::EpsBj => "eps-bj",
            Command::BestCoapprox => "best-coapprox",
            Command::EpsCheck => "eps-check",
            Command::Defect => "defect",
            Command::Classify => "classify",
            Command::StarProperty => "star-property",
            Command::NormingSet => "norming-set",
            Command::Facets => "facets",
            Command::Jy => "jy",
        }
    }
}

/// Exact best-coapproximation queries in polyhedral normed spaces.
///
/// Without --space the request is read from stdin as one JSON document with
/// the fields command, space, subspace, points, y0, epsilon, index, verify,
/// budget and seed.
#[derive(Debug, Parser)]
#[command(name = "coapprox", version)]
pub struct Args {
    /// Operation to run. Taken from the request document when omitted.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Space as JSON, e.g. '{"type":"linf","n":3}'.
    #[arg(long)]
    pub space: Option<String>,
    /// Subspace basis as a JSON matrix, one basis vector per row.
    #[arg(long)]
    pub basis: Option<String>,
    /// Point as a JSON vector. Repeat for commands taking two points.
    #[arg(long)]
    pub point: Vec<String>,
    /// Candidate best coapproximation as a JSON vector.
    #[arg(long)]
    pub y0: Option<String>,
    /// Tolerance in [0, 1), as "p/q" or an integer.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Component index (0-based) for star-property.
    #[arg(long)]
    pub index: Option<usize>,
    /// Cross-check fast paths against the generic engine.
    #[arg(long)]
    pub verify: bool,
    /// Cap on linear programs solved by the generic coapproximation search.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Print `key: value` text instead of JSON.
    #[arg(long)]
    pub pretty: bool,
    /// Seed for randomized counterexample searches.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceSpec {
    pub basis: QMatrix,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    #[serde(default)]
    pub command: Option<Command>,
    pub space: SpaceSpec,
    #[serde(default)]
    pub subspace: Option<SubspaceSpec>,
    #[serde(default)]
    pub points: Vec<QVector>,
    #[serde(default)]
    pub y0: Option<QVector>,
    #[serde(default)]
    pub epsilon: Option<EpsilonValue>,
    #[serde(default)]
    pub index: Option<usize>,
    #[serde(default)]
    pub verify: bool,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn parse_json<T: DeserializeOwned>(flag: &str, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Invalid(format!("--{flag}: {e}")))
}

fn parse_epsilon(text: &str) -> Result<EpsilonValue, Failure> {
    let value = Rational::from_str(text.trim().trim_matches('"'))
        .map_err(|e| Failure::Invalid(format!("--epsilon: {e}")))?;
    Ok(EpsilonValue::new(value)?)
}

impl Request {
    /// Builds the request from flags, or from `stdin` when `--space` is absent.
    pub fn from_args(args: &Args, stdin: impl FnOnce() -> std::io::Result<String>) -> Result<Request, Failure> {
        let mut req = match &args.space {
            Some(space) => Request {
                command: None,
                space: parse_json("space", space)?,
                subspace: args
                    .basis
                    .as_deref()
                    .map(|b| parse_json("basis", b).map(|basis| SubspaceSpec { basis }))
                    .transpose()?,
                points: args
                    .point
                    .iter()
                    .map(|p| parse_json("point", p))
                    .collect::<Result<_, _>>()?,
                y0: args.y0.as_deref().map(|y| parse_json("y0", y)).transpose()?,
                epsilon: args.epsilon.as_deref().map(parse_epsilon).transpose()?,
                index: args.index,
                verify: false,
                budget: None,
                seed: None,
            },
            None => {
                if args.basis.is_some() || !args.point.is_empty() || args.y0.is_some() || args.epsilon.is_some() {
                    return Err(Failure::Invalid(
                        "--basis, --point, --y0 and --epsilon need --space; otherwise send the request on stdin"
                            .into(),
                    ));
                }
                let text = stdin().map_err(|e| Failure::Invalid(format!("reading stdin: {e}")))?;
                let mut req: Request = serde_json::from_str(&text)
                    .map_err(|e| Failure::Invalid(format!("request: {e}")))?;
                if args.index.is_some() {
                    req.index = args.index;
                }
                req
            }
        };
        if args.command.is_some() {
            req.command = args.command;
        }
        req.verify |= args.verify;
        req.budget = args.budget.or(req.budget);
        req.seed = args.seed.or(req.seed);
        if req.command.is_none() {
            return Err(Failure::Invalid("no command given".into()));
        }
        Ok(req)
    }
}

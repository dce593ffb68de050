//! The `freelip` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! malformed input or usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constructions::{cantor_family, cantor_scheme, dyadic_family, star_family, SequenceBundle};
use crate::error::{Error, Result};
use crate::free::Space;
use crate::metric::FiniteMetricSpace;
use crate::scalar::{Rational, Scalar};
use crate::tree::TreeSpace;

use super::io::{
    element_from_json, element_list, inline_space, lip_from_json, metric_from_json, pairs_from_json, read_json,
    rep_from_json, rtree_from_json, subset_from_json, tree_family_from_json,
};
use super::report::Report;
use super::scenario::{
    cm_report, default_gamma, dist_report, equi_report, limit_report, norm_report, remark_ball_not_ur_scenario,
    remark_default_space, reproduce_all, reproduce_cantor, reproduce_dyadic, reproduce_star, tree_norm_report,
    DEFAULT_SEED,
};

#[derive(Debug, Parser)]
#[command(name = "freelip", version, about = "Lipschitz-free space computations on finite metric spaces and trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Exact rational arithmetic (also FREELIP_EXACT=1).
    #[arg(long, global = true)]
    pub exact: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Directory for JSON reports and CSV tables.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Cantor,
    Star,
    Dyadic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Cantor,
    Star,
    Dyadic,
    Remark,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual and primal norms of an element.
    Norm {
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        element: PathBuf,
    },
    /// Distance from an element to the free space of a subset.
    Dist {
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        subset: PathBuf,
    },
    /// Cyclical monotonicity of the pairs of a molecule representation or a
    /// pair list.
    CmCheck {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Norm on a tree through the L1 isometry, checked against the LP.
    TreeNorm {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Small-mass and subtree conditions for a family of tree elements.
    EquiReport {
        #[arg(long)]
        tree: PathBuf,
        /// One element or an array of elements.
        #[arg(long)]
        element: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        eps: Vec<String>,
    },
    /// Built-in example scenarios.
    Reproduce {
        which: Scenario,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        eps: Vec<String>,
        /// Space for the remark scenario; defaults to the line {0, 1, 3}.
        #[arg(long)]
        space: Option<PathBuf>,
        /// The set K of the remark scenario.
        #[arg(long)]
        subset: Option<PathBuf>,
        /// The point z of the remark scenario; defaults to the base point.
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        x: Option<String>,
    },
    /// Table of ||gamma + gamma_n|| against ||gamma|| + ||gamma_n||.
    LimitCheck {
        family: Family,
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        /// Element on the family's space; defaults to delta(1) on lines.
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Validate input files.
    Validate {
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        element: Option<PathBuf>,
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long)]
        subset: Option<PathBuf>,
    },
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let exact = cli.exact || std::env::var("FREELIP_EXACT").is_ok_and(|v| v == "1");
    let result = if exact { dispatch::<Rational>(&cli) } else { dispatch::<f64>(&cli) };
    match result.and_then(|reports| emit(&reports, cli.out.as_deref()).map(|_| reports)) {
        Ok(reports) => {
            if reports.iter().all(Report::passed) {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(reports: &[Report], out: Option<&Path>) -> Result<()> {
    let value = match reports {
        [one] => one.to_json(),
        many => Value::Array(many.iter().map(Report::to_json).collect()),
    };
    println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
    if let Some(dir) = out {
        for r in reports {
            r.write_atomic(dir)?;
        }
    }
    Ok(())
}

fn parse_scalar<S: Scalar>(s: &str) -> Result<S> {
    S::parse_str(s.trim()).ok_or_else(|| Error::Parse(format!("bad number {s}")))
}

fn load_space<S: Scalar>(path: &Path) -> Result<Space<S>> {
    Ok(Arc::new(metric_from_json(&read_json(path)?)?))
}

/// Space from `--space`, or inline in the element file.
fn space_and_element<S: Scalar>(space: Option<&Path>, element: &Path) -> Result<(Space<S>, Value)> {
    let v = read_json(element)?;
    let space = match space {
        Some(p) => load_space(p)?,
        None => Arc::new(inline_space(&v)?.ok_or_else(|| Error::Parse("no --space and no inline space".into()))?),
    };
    Ok((space, v))
}

fn load_tree_family<S: Scalar>(tree: &Path, element: &Path) -> Result<(Arc<TreeSpace<S>>, Vec<crate::free::FreeElement<S>>)> {
    let t = Arc::new(rtree_from_json(&read_json(tree)?)?);
    tree_family_from_json(t, &element_list(&read_json(element)?))
}

fn family<S: Scalar>(f: Family, n: usize) -> Result<SequenceBundle<S>> {
    match f {
        Family::Cantor => cantor_family(&cantor_scheme(n, &S::ratio(1, 3))?),
        Family::Star => star_family(n),
        Family::Dyadic => dyadic_family(n),
    }
}

fn dispatch<S: Scalar>(cli: &Cli) -> Result<Vec<Report>> {
    let seed = cli.seed;
    let one = |r: Report, inputs: &[&Path]| {
        let mut r = r;
        r.inputs.extend(inputs.iter().map(|p| p.display().to_string()));
        Ok(vec![r])
    };
    match &cli.command {
        Command::Norm { space, element } => {
            let (space, v) = space_and_element::<S>(space.as_deref(), element)?;
            one(norm_report(&element_from_json(&space, &v)?, seed)?, &[element])
        }
        Command::Dist { space, element, subset } => {
            let (space, v) = space_and_element::<S>(space.as_deref(), element)?;
            let set = subset_from_json(&space, &read_json(subset)?)?;
            one(dist_report(&element_from_json(&space, &v)?, &set, seed)?, &[element, subset])
        }
        Command::CmCheck { space, rep } => {
            let space = load_space::<S>(space)?;
            let pairs = pairs_from_json(&space, &read_json(rep)?)?;
            one(cm_report(&space, &pairs, seed)?, &[rep])
        }
        Command::TreeNorm { tree, element, delta } => {
            let (space, elems) = load_tree_family::<S>(tree, element)?;
            let delta = delta.as_deref().map(parse_scalar::<S>).transpose()?;
            let mu = elems.first().ok_or(Error::EmptyFamily)?;
            one(tree_norm_report(&space, mu, delta.as_ref(), seed)?, &[tree, element])
        }
        Command::EquiReport { tree, element, eps } => {
            let (space, elems) = load_tree_family::<S>(tree, element)?;
            let eps = eps.iter().map(|e| parse_scalar::<S>(e)).collect::<Result<Vec<_>>>()?;
            one(equi_report(&space, &elems, &eps, seed)?, &[tree, element])
        }
        Command::Reproduce { which, n, eps, space, subset, z, x } => {
            let eps = eps.iter().map(|e| parse_scalar::<S>(e)).collect::<Result<Vec<_>>>()?;
            match which {
                Scenario::Cantor => Ok(vec![reproduce_cantor::<S>(n.unwrap_or(8), seed)?]),
                Scenario::Star => Ok(vec![reproduce_star::<S>(n.unwrap_or(8), &eps, seed)?]),
                Scenario::Dyadic => Ok(vec![reproduce_dyadic::<S>(n.unwrap_or(if S::EXACT { 6 } else { 5 }), seed)?]),
                Scenario::All => reproduce_all::<S>(seed),
                Scenario::Remark => {
                    let (space, default_z, default_k) = match space {
                        Some(p) => {
                            let s = load_space::<S>(p)?;
                            let base = s.base();
                            let k = match subset {
                                Some(sp) => subset_from_json(&s, &read_json(sp)?)?,
                                None => return Err(Error::Parse("--subset is required with --space".into())),
                            };
                            (s, base, k)
                        }
                        None => remark_default_space::<S>()?,
                    };
                    let z = z.as_deref().map(|n| space.index_of(n)).transpose()?.unwrap_or(default_z);
                    let x = x.as_deref().map(|n| space.index_of(n)).transpose()?;
                    Ok(vec![remark_ball_not_ur_scenario(&space, z, &default_k, x, seed)?])
                }
            }
        }
        Command::LimitCheck { family: f, n, element } => {
            let bundle = family::<S>(*f, *n)?;
            let gamma = match element {
                Some(p) => element_from_json(bundle.space.metric(), &read_json(p)?)?,
                None => default_gamma(&bundle)?,
            };
            Ok(vec![limit_report(&bundle, &gamma, seed)?])
        }
        Command::Validate { space, tree, element, rep, subset } => validate::<S>(
            space.as_deref(),
            tree.as_deref(),
            element.as_deref(),
            rep.as_deref(),
            subset.as_deref(),
            seed,
        ),
    }
}

/// Unparseable files are malformed input; well-formed files that violate
/// the axioms become failed checks.
fn validate<S: Scalar>(
    space: Option<&Path>,
    tree: Option<&Path>,
    element: Option<&Path>,
    rep: Option<&Path>,
    subset: Option<&Path>,
    seed: u64,
) -> Result<Vec<Report>> {
    let mut r = Report::new("validate", seed, S::EXACT);
    let mut record = |name: &str, path: &Path, outcome: Result<()>| match outcome {
        Err(Error::Parse(m)) => Err(Error::Parse(m)),
        Err(e) => {
            r.check_strict(name, false, json!({ "error": e.to_string() }), json!({ "input": path.display().to_string(), "error": e.to_string() }));
            Ok(())
        }
        Ok(()) => {
            r.check_strict(name, true, Value::Null, json!({ "input": path.display().to_string() }));
            Ok(())
        }
    };
    let mut metric: Option<Space<S>> = None;
    if let Some(p) = space {
        let v = read_json(p)?;
        let parsed: Result<FiniteMetricSpace<S>> = metric_from_json(&v);
        let outcome = parsed.map(|m| metric = Some(Arc::new(m)));
        record("metric_space", p, outcome)?;
    }
    if let Some(p) = tree {
        let v = read_json(p)?;
        record("rtree", p, rtree_from_json::<S>(&v).map(|_| ()))?;
    }
    let need_space = || Error::Parse("--space is required to validate elements, reps and subsets".into());
    if let Some(p) = element {
        let v = read_json(p)?;
        let outcome = inline_space::<S>(&v).and_then(|own| {
            let m = own.map(Arc::new).or_else(|| metric.clone()).ok_or_else(need_space)?;
            if v.get("values").is_some() {
                lip_from_json(&m, &v).map(|_| ())
            } else {
                element_from_json(&m, &v).map(|_| ())
            }
        });
        record("element", p, outcome)?;
    }
    if let Some(p) = rep {
        let m = metric.as_ref().ok_or_else(need_space)?;
        let v = read_json(p)?;
        record("molecule_rep", p, rep_from_json(m, &v).map(|_| ()))?;
    }
    if let Some(p) = subset {
        let m = metric.as_ref().ok_or_else(need_space)?;
        let v = read_json(p)?;
        record("subset", p, subset_from_json(m, &v).map(|_| ()))?;
    }
    if r.checks.is_empty() {
        return Err(Error::Parse("nothing to validate".into()));
    }
    Ok(vec![r.finish()])
}

//! Argument grammar and the `run` entry point.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hwkit_core::exactalg::Polynomial;
use hwkit_core::snc::SncDivisor;
use hwkit_core::vforacle::Bounds;

use crate::cache::{self, Cache};
use crate::commands::{
    AxiomsRequest, BfunRequest, BoundsRequest, ClassifyRequest, CrosscheckRequest, PpdRequest, Request, SncRequest,
    VerifyBfunRequest, WhomRequest,
};
use crate::envelope::ResultEnvelope;
use crate::error::Failure;
use crate::input::{self, Germ, GermSpec};
use crate::suite::{self, Profile};

#[derive(Parser, Debug)]
#[command(name = "hwkit", version, about = "Hodge and weight filtrations of twisted localizations along a divisor")]
pub struct Cli {
    /// Print the result envelope as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Ignore $HWKIT_CACHE for this run.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GermArgs {
    /// Exponents of a monomial divisor, e.g. 2,3 for x1^2*x2^3.
    #[arg(long)]
    pub exponents: Option<String>,
    /// The defining polynomial in x1..xn.
    #[arg(long)]
    pub poly: Option<String>,
    /// Weights making --poly quasi-homogeneous of degree one, e.g. 1/2,1/3.
    #[arg(long)]
    pub weights: Option<String>,
    /// A b-function, as a root product such as "(s+1)^2" or as JSON roots.
    #[arg(long = "b")]
    pub b: Option<String>,
    /// Ambient dimension, when it cannot be read off the other flags.
    #[arg(long)]
    pub dim: Option<usize>,
}

impl GermArgs {
    fn resolve(&self) -> Result<Germ, Failure> {
        GermSpec {
            exponents: self.exponents.clone(),
            poly: self.poly.clone(),
            weights: self.weights.clone(),
            b: self.b.clone(),
            dim: self.dim,
        }
        .resolve()
    }
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct BoundArgs {
    /// Operator order bound (default 4).
    #[arg(long)]
    pub order: Option<u32>,
    /// x-degree bound (default 12).
    #[arg(long)]
    pub xdeg: Option<u32>,
    /// dt-order bound (default 6).
    #[arg(long = "dt-order")]
    pub dt_order: Option<u32>,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        let d = Bounds::default();
        Bounds::new(self.order.unwrap_or(d.order), self.xdeg.unwrap_or(d.xdeg), self.dt_order.unwrap_or(d.dt_order))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceKind {
    Snc,
    Whom,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Hodge and weight table of a monomial divisor.
    Snc {
        #[arg(long)]
        exponents: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Highest weight level, or "auto" for the top level.
        #[arg(long, default_value = "auto")]
        lmax: String,
        #[arg(long, default_value_t = 0)]
        kmax: u32,
        /// Components (one-based) kept at a smaller stratum, e.g. 1,3.
        #[arg(long)]
        stratum: Option<String>,
    },
    /// Hodge and weight pieces of a quasi-homogeneous isolated singularity.
    Whom {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
    },
    /// Weight and Hodge pieces from an annihilator file.
    Ppd {
        #[arg(long)]
        input: PathBuf,
        /// Weight level; required unless --rho21 is given (then omitted means the whole module).
        #[arg(long)]
        l: Option<u32>,
        /// Hodge index; omitted means the weight module itself.
        #[arg(long)]
        k: Option<u32>,
        /// Use the formula for roots in (-2, -1] with alpha = 0.
        #[arg(long)]
        rho21: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Closed-form b-function, optionally certified.
    Bfun {
        #[command(flatten)]
        germ: GermArgs,
        /// Certify the functional equation and minimality.
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = 6)]
        xdeg: u32,
    },
    /// Bounded certificates.
    Verify {
        #[command(subcommand)]
        what: VerifyVerb,
    },
    /// lc, plt and klt for the pair (X, alpha D).
    Classify {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Weight bounds and generating-level bounds.
    Bounds {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Also bound the generating level of gr^W at this level.
        #[arg(long)]
        l: Option<u32>,
    },
    /// Compare the V-filtration route with the closed forms.
    Crosscheck {
        #[arg(long, value_enum)]
        source: SourceKind,
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Run the verification battery.
    Suite {
        #[arg(value_enum, default_value = "default")]
        profile: Profile,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyVerb {
    /// Certify b(s) f^s = P f^(s+1) and refute the maximal proper divisors.
    Bfun {
        #[arg(long)]
        poly: String,
        #[arg(long = "b")]
        b: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, default_value_t = 12)]
        xdeg: u32,
    },
    /// Check the V-filtration axioms for a closed-form candidate.
    Axioms {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, default_value = "1/2,1")]
        grid: String,
        /// dt-layers of generators tested.
        #[arg(long, default_value_t = 1)]
        layers: u32,
        /// Negative control: drop this generator from every strict list.
        #[arg(long)]
        drop: Option<usize>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

fn polynomial(text: &str, dim: Option<usize>) -> Result<Polynomial, Failure> {
    let f = Polynomial::parse_auto(text).map_err(Failure::usage)?;
    Ok(match dim {
        Some(d) if d >= f.dim() => f.embed(d),
        Some(d) => return Err(Failure::Usage(format!("--dim {d} is below the variables used in {text:?}"))),
        None => f,
    })
}

/// Validates the flags of one verb and builds its request.
pub fn request(verb: &Verb) -> Result<Request, Failure> {
    Ok(match verb {
        Verb::Snc { exponents, alpha, lmax, kmax, stratum } => {
            let divisor = SncDivisor::new(input::u32_list(exponents)?).map_err(Failure::usage)?;
            let lmax = match lmax.as_str() {
                "auto" => None,
                v => Some(v.parse::<u32>().map_err(|_| Failure::Usage(format!("--lmax must be auto or a level, not {v:?}")))?),
            };
            let stratum = match stratum {
                Some(s) => {
                    let idx = input::u32_list(s)?;
                    if idx.contains(&0) {
                        return Err(Failure::Usage("--stratum indices start at 1".into()));
                    }
                    Some(idx.into_iter().map(|i| i as usize - 1).collect())
                }
                None => None,
            };
            Request::Snc(SncRequest { divisor, alpha: input::rational(alpha)?, lmax, kmax: *kmax, stratum })
        }
        Verb::Whom { poly, weights, alpha, k, l } => {
            let spec = GermSpec { poly: Some(poly.clone()), weights: Some(weights.clone()), ..Default::default() };
            let Germ::Whom(germ) = spec.resolve()? else { unreachable!("weights select the quasi-homogeneous case") };
            Request::Whom(WhomRequest { germ, alpha: input::rational(alpha)?, k: *k, l: *l })
        }
        Verb::Ppd { input: path, l, k, rho21, bounds } => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Request::Ppd(PpdRequest {
                input: input::annihilator_file(&text)?,
                l: *l,
                k: *k,
                rho21: *rho21,
                bounds: bounds.bounds(),
            })
        }
        Verb::Bfun { germ, certify, order, xdeg } => Request::Bfun(BfunRequest {
            germ: germ.resolve()?,
            certify: certify.then_some((*order, *xdeg)),
        }),
        Verb::Verify { what: VerifyVerb::Bfun { poly, b, dim, order, xdeg } } => Request::VerifyBfun(VerifyBfunRequest {
            f: polynomial(poly, *dim)?,
            b: input::user_bfunction(b)?,
            order: *order,
            xdeg: *xdeg,
        }),
        Verb::Verify { what: VerifyVerb::Axioms { germ, grid, layers, drop, bounds } } => {
            Request::VerifyAxioms(AxiomsRequest {
                germ: germ.resolve()?,
                grid: input::rational_list(grid)?,
                layers: *layers,
                bounds: bounds.bounds(),
                drop: *drop,
            })
        }
        Verb::Classify { germ, alpha } => {
            Request::Classify(ClassifyRequest { germ: germ.resolve()?, alpha: input::rational(alpha)? })
        }
        Verb::Bounds { germ, alpha, l } => {
            Request::Bounds(BoundsRequest { germ: germ.resolve()?, alpha: input::rational(alpha)?, l: *l })
        }
        Verb::Crosscheck { source, germ, alpha, k, l, bounds } => {
            let germ = germ.resolve()?;
            match (source, &germ) {
                (SourceKind::Snc, Germ::Snc(_)) | (SourceKind::Whom, Germ::Whom(_)) => {}
                (SourceKind::Snc, _) => return Err(Failure::Usage("--source snc needs a monomial divisor".into())),
                (SourceKind::Whom, _) => return Err(Failure::Usage("--source whom needs --poly with --weights".into())),
            }
            Request::Crosscheck(CrosscheckRequest {
                germ,
                alpha: input::rational(alpha)?,
                k: *k,
                l: *l,
                bounds: bounds.bounds(),
            })
        }
        Verb::Suite { profile } => Request::Suite(*profile),
    })
}

/// Runs one command line; returns the exit code: 0 success, 1 usage or io error,
/// 2 unmet hypothesis, 3 inconclusive at the bounds, 4 refuted.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let req = match request(&cli.verb) {
        Ok(r) => r,
        Err(f) => {
            let _ = writeln!(err, "hwkit: {f}");
            return f.exit_code();
        }
    };
    let envelope = match execute(&req, !cli.no_cache, err) {
        Ok(e) => e,
        Err(f) => {
            let _ = writeln!(err, "hwkit: {f}");
            return f.exit_code();
        }
    };
    let text = if cli.json { envelope.to_json() } else { envelope.to_text() };
    let _ = out.write_all(text.as_bytes());
    envelope.status.exit_code()
}

fn execute(req: &Request, use_cache: bool, err: &mut dyn Write) -> Result<ResultEnvelope, Failure> {
    if let Request::Suite(profile) = req {
        let mut e = ResultEnvelope::new(req.verb(), req.echo());
        suite::run_with_progress(*profile, &mut e, &mut |r| {
            let _ = writeln!(err, "{}", r.progress_line());
        });
        return Ok(e);
    }
    let cache = if use_cache && req.cacheable() { Cache::from_env() } else { None };
    let key = cache.as_ref().map(|_| cache::key(req.verb(), &req.echo(), req.bounds().map(Into::into)));
    if let (Some(c), Some(k)) = (&cache, &key) {
        if let Some(hit) = c.load(k) {
            return Ok(hit);
        }
    }
    let envelope = req.run()?;
    if let (Some(c), Some(k)) = (&cache, &key) {
        if let Err(e) = c.store(k, &envelope) {
            let _ = writeln!(err, "hwkit: cache write to {} failed: {e}", c.dir().display());
        }
    }
    Ok(envelope)
}

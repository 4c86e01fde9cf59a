//! Command-line front end for the OG10 lattice calculus: JSON-described
//! lattices in, classification verdicts, chamber structures and SVG/CSV
//! cone diagrams out, plus a cookbook of named reproduction presets.
//!
//! Exit codes: 0 success, 2 input validation failure, 1 core errors.
//! Errors stream to stderr as JSON `{"error": code, "detail": text}`.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use og10_core::cones::{
    chambers, kahler_chamber, movable_chamber, unique_compactification, wall_rays, ConeContext,
    ConeError,
};
use og10_core::discriminant::{discriminant_group, eichler_equivalent, residue, EichlerError};
use og10_core::lattice::{Class, Lattice, LatticeError};
use og10_core::moduli::{
    curve_class, dual_wall_divisor, moduli_picard, mz_contraction_type, og10_embedding_certificate,
    ModuliError, MukaiVector,
};
use og10_core::wall::{reflection, stably_prime_exceptional, wall_type, WallError, WallType};

mod input;
mod presets;
pub use presets::PRESET_NAMES;
mod report;

use input::{parse_class_for, parse_gram, parse_int_list, parse_lattice};
use report::{
    chamber_csv, chamber_svg, chamber_value, gram_value, int_value, ints_value,
    rats_value,
};

/// Error with the exit-code class it belongs to.
#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub detail: String,
    pub exit: i32,
}

impl CliError {
    pub fn validation(code: &str, detail: &str) -> Self {
        CliError {
            code: code.into(),
            detail: detail.into(),
            exit: 2,
        }
    }

    pub fn core(code: &str, detail: &str) -> Self {
        CliError {
            code: code.into(),
            detail: detail.into(),
            exit: 1,
        }
    }

    pub(crate) fn lattice(e: LatticeError) -> Self {
        let code = match &e {
            LatticeError::NotSquare => "NotSquare",
            LatticeError::NotSymmetric => "NotSymmetric",
            LatticeError::NotEven => "NotEven",
            LatticeError::Degenerate => "Degenerate",
            LatticeError::DimensionMismatch => "DimensionMismatch",
            LatticeError::ZeroVector => "ZeroVector",
        };
        // Malformed input shapes are validation failures.
        CliError::validation(code, &e.to_string())
    }

    pub(crate) fn eichler(e: EichlerError) -> Self {
        let code = match &e {
            EichlerError::NoU2Witness => "NoU2Witness",
            EichlerError::NotPrimitive => "NotPrimitive",
            EichlerError::RankTooLarge => "RankTooLarge",
            EichlerError::ZeroVector => return CliError::validation("ZeroVector", &e.to_string()),
        };
        CliError::core(code, &e.to_string())
    }

    pub(crate) fn wall(e: WallError) -> Self {
        match &e {
            WallError::ZeroVector => CliError::validation("ZeroVector", &e.to_string()),
            WallError::Lattice(l) => CliError::lattice(l.clone()),
            WallError::NotPrimitive => CliError::core("NotPrimitive", &e.to_string()),
            WallError::NonNegativeSquare => CliError::core("NonNegativeSquare", &e.to_string()),
            WallError::AmbientNotOg10 => CliError::core("AmbientNotOg10", &e.to_string()),
            WallError::NotIntegral(_) => CliError::core("NotIntegral", &e.to_string()),
            WallError::ZeroSquare => CliError::core("ZeroSquare", &e.to_string()),
            WallError::NotOrthogonal => CliError::core("NotOrthogonal", &e.to_string()),
            WallError::NotHalfIntegral => CliError::core("NotHalfIntegral", &e.to_string()),
            WallError::SigmaSquareNotMinusSix => {
                CliError::core("SigmaSquareNotMinusSix", &e.to_string())
            }
        }
    }

    pub(crate) fn moduli(e: ModuliError) -> Self {
        match &e {
            ModuliError::Lattice(l) => CliError::lattice(l.clone()),
            ModuliError::Wall(w) => CliError::wall(w.clone()),
            ModuliError::NotOG10Vector => CliError::core("NotOG10Vector", &e.to_string()),
            ModuliError::EmbeddingNotFound => CliError::core("EmbeddingNotFound", &e.to_string()),
            ModuliError::Inconsistent => CliError::core("Inconsistent", &e.to_string()),
            ModuliError::NotProportionalToWall => {
                CliError::core("NotProportionalToWall", &e.to_string())
            }
            ModuliError::NotInVPerp => CliError::core("NotInVPerp", &e.to_string()),
            ModuliError::PolarizationNotPositive => {
                CliError::core("PolarizationNotPositive", &e.to_string())
            }
        }
    }

    pub(crate) fn cone(e: ConeError) -> Self {
        match &e {
            ConeError::NotCubicGram => CliError::validation("NotCubicGram", &e.to_string()),
            ConeError::Lattice(l) => CliError::lattice(l.clone()),
            ConeError::NotRankTwo => CliError::validation("NotRankTwo", &e.to_string()),
            ConeError::NotHyperbolic => CliError::core("NotHyperbolic", &e.to_string()),
            ConeError::EmbeddingGramMismatch => {
                CliError::core("EmbeddingGramMismatch", &e.to_string())
            }
            ConeError::EmbeddingNotPrimitive => {
                CliError::core("EmbeddingNotPrimitive", &e.to_string())
            }
            ConeError::HintNotPositive => CliError::core("HintNotPositive", &e.to_string()),
            ConeError::NotInPositiveCone => CliError::core("NotInPositiveCone", &e.to_string()),
            ConeError::OnWall => CliError::core("OnWall", &e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "og10",
    version,
    about = "Exact lattice calculus for hyperkähler manifolds of OG10 type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format where supported.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, signature, determinant and discriminant group of a lattice.
    LatticeInfo {
        /// Named lattice (u, a2, e8, og10) or @file.json {label, gram}.
        #[arg(long)]
        lattice: String,
    },
    /// Divisibility of a class: gcd of its pairings with the lattice.
    Div {
        #[arg(long)]
        lattice: String,
        /// Coordinates "a,b,c" or @file.json array.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Eichler orbit test: same square and discriminant residue.
    OrbitEquiv {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long, allow_hyphen_values = true)]
        class2: String,
    },
    /// Wall-divisor classification by (square, divisibility).
    WallCheck {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Stably-prime-exceptional classification.
    PexCheck {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Integral reflection matrix in a negative class.
    Reflection {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Picard lattice of the symplectic resolution of M_v(S, H).
    ModuliPicard {
        /// Gram of Pic(S) as JSON rows or @file.
        #[arg(long)]
        pic_gram: String,
        /// Mukai vector "r,c..,s" over the Picard basis.
        #[arg(long, allow_hyphen_values = true)]
        mukai: String,
    },
    /// Solve a curve class from pairings against (v-perp .., sigma).
    CurveClass {
        #[arg(long)]
        pic_gram: String,
        #[arg(long, allow_hyphen_values = true)]
        mukai: String,
        /// Prescribed pairings "p1,p2,..".
        #[arg(long, allow_hyphen_values = true)]
        pairings: String,
    },
    /// Divisorial/small contraction classifier for M_v(S,H) -> M_v(S,H0).
    MzClassify {
        #[arg(long)]
        pic_gram: String,
        #[arg(long, allow_hyphen_values = true)]
        mukai: String,
        /// Polarization H0 in Pic(S) coordinates.
        #[arg(long, allow_hyphen_values = true)]
        h0: String,
        /// Coordinate search box radius.
        #[arg(long, default_value_t = 10)]
        bound: u32,
    },
    /// Wall-and-chamber structure of a rank-2 cone context.
    Cone {
        /// Named context: ij or ij-twisted.
        #[arg(long)]
        context: String,
        /// Wall set: all (Kähler) or pex (movable).
        #[arg(long, default_value = "all")]
        walls: String,
        /// Ample-side class "x,y"; defaults to the context hint.
        #[arg(long, allow_hyphen_values = true)]
        ample: Option<String>,
    },
    /// Uniqueness of the IHS compactification from a Hassett Gram matrix.
    UniqueCompactification {
        /// Gram of <h^2, K> as JSON rows or @file; (1,1) entry must be 3.
        #[arg(long)]
        gram: String,
    },
    /// Run a named reproduction fixture end to end.
    Preset {
        /// One of: fig1, ij-twisted, zero-section, p3-bundle, nonreduced,
        /// mz-elliptic, pfaffian, prop63-split, prop53-exclusion.
        name: String,
    },
}

fn require_json(format: Format) -> Result<(), CliError> {
    if format == Format::Json {
        Ok(())
    } else {
        Err(CliError::validation(
            "UnsupportedFormat",
            "this command only renders as JSON",
        ))
    }
}

/// Class payload in the interchange shape {lattice, coords}.
fn class_value(lattice: &Lattice, class: &Class) -> serde_json::Value {
    json!({
        "lattice": lattice.label(),
        "coords": ints_value(class.coords()),
    })
}

/// Mukai vector payload in the interchange shape {r, c, s}.
fn mukai_value(v: &MukaiVector) -> serde_json::Value {
    json!({
        "r": int_value(&v.r),
        "c": ints_value(v.c.coords()),
        "s": int_value(&v.s),
    })
}

fn class_in(lattice: &Lattice, spec: &str) -> Result<Class, CliError> {
    let c = parse_class_for(spec, lattice.label())?;
    if c.len() != lattice.rank() {
        return Err(CliError::validation(
            "DimensionMismatch",
            &format!(
                "class has {} coordinates but the lattice has rank {}",
                c.len(),
                lattice.rank()
            ),
        ));
    }
    Ok(c)
}

fn parse_mukai(pic: &Lattice, spec: &str) -> Result<MukaiVector, CliError> {
    let coords = parse_int_list(spec)?;
    if coords.len() != pic.rank() + 2 {
        return Err(CliError::validation(
            "DimensionMismatch",
            &format!(
                "Mukai vector needs {} coordinates (r, c.., s)",
                pic.rank() + 2
            ),
        ));
    }
    let r = coords[0].clone();
    let s = coords[coords.len() - 1].clone();
    let c = Class::new(coords[1..coords.len() - 1].to_vec());
    Ok(MukaiVector::new(r, c, s))
}

fn run_command(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::LatticeInfo { lattice } => {
            require_json(cli.format)?;
            let l = parse_lattice(&lattice)?;
            let (pos, neg) = l.signature();
            let group = discriminant_group(&l);
            let out = json!({
                "label": l.label(),
                "rank": l.rank(),
                "gram": gram_value(l.gram()),
                "determinant": int_value(&l.determinant()),
                "signature": { "positive": pos, "negative": neg },
                "discriminant_group": {
                    "invariant_factors": group.invariant_factors().iter().map(int_value).collect::<Vec<_>>(),
                    "order": int_value(&group.order()),
                },
                "hyperbolic_summands": l.hyperbolic_summands(),
            });
            Ok(format!("{:#}", out))
        }
        Command::Div { lattice, class } => {
            require_json(cli.format)?;
            let l = parse_lattice(&lattice)?;
            let c = class_in(&l, &class)?;
            let d = l.divisibility(&c).map_err(CliError::lattice)?;
            let out = json!({
                "class": class_value(&l, &c),
                "square": int_value(&l.q(&c)),
                "divisibility": int_value(&d),
            });
            Ok(format!("{:#}", out))
        }
        Command::OrbitEquiv {
            lattice,
            class,
            class2,
        } => {
            require_json(cli.format)?;
            let l = parse_lattice(&lattice)?;
            let v = class_in(&l, &class)?;
            let w = class_in(&l, &class2)?;
            let group = discriminant_group(&l);
            let eq = eichler_equivalent(&l, &group, &v, &w).map_err(CliError::eichler)?;
            let rv = residue(&l, &group, &v).map_err(CliError::eichler)?;
            let rw = residue(&l, &group, &w).map_err(CliError::eichler)?;
            let out = json!({
                "equivalent": eq,
                "square": [int_value(&l.q(&v)), int_value(&l.q(&w))],
                "divisibility": [
                    int_value(&l.divisibility(&v).map_err(CliError::lattice)?),
                    int_value(&l.divisibility(&w).map_err(CliError::lattice)?),
                ],
                "residues": [
                    ints_value(rv.components()),
                    ints_value(rw.components()),
                ],
            });
            Ok(format!("{:#}", out))
        }
        Command::WallCheck { lattice, class } => {
            require_json(cli.format)?;
            let l = parse_lattice(&lattice)?;
            let c = class_in(&l, &class)?;
            let verdict = wall_type(&l, &c).map_err(CliError::wall)?;
            let out = json!({
                "class": class_value(&l, &c),
                "square": int_value(&l.q(&c)),
                "divisibility": int_value(&l.divisibility(&c).map_err(CliError::lattice)?),
                "verdict": verdict.map(|t| t.name()).unwrap_or("NotAWall"),
                "covered_codimension": verdict.map(|t| t.codimension()),
            });
            Ok(format!("{:#}", out))
        }
        Command::PexCheck { lattice, class } => {
            require_json(cli.format)?;
            let l = parse_lattice(&lattice)?;
            let c = class_in(&l, &class)?;
            let verdict = stably_prime_exceptional(&l, &c).map_err(CliError::wall)?;
            let out = json!({
                "class": class_value(&l, &c),
                "square": int_value(&l.q(&c)),
                "divisibility": int_value(&l.divisibility(&c).map_err(CliError::lattice)?),
                "verdict": verdict.map(|t| t.name()).unwrap_or("NotPex"),
            });
            Ok(format!("{:#}", out))
        }
        Command::Reflection { lattice, class } => {
            require_json(cli.format)?;
            let l = parse_lattice(&lattice)?;
            let c = class_in(&l, &class)?;
            let m = reflection(&l, &c).map_err(CliError::wall)?;
            let out = json!({
                "class": class_value(&l, &c),
                "square": int_value(&l.q(&c)),
                "matrix": gram_value(&m),
            });
            Ok(format!("{:#}", out))
        }
        Command::ModuliPicard { pic_gram, mukai } => {
            require_json(cli.format)?;
            let pic = Lattice::new(parse_gram(&pic_gram)?).map_err(CliError::lattice)?;
            let v = parse_mukai(&pic, &mukai)?;
            let picm = moduli_picard(&pic, &v).map_err(CliError::moduli)?;
            let embedding = og10_embedding_certificate(&picm)
                .ok()
                .map(|emb| Value::Array(emb.iter().map(|c| ints_value(c.coords())).collect()));
            let out = json!({
                "mukai_vector": ints_value(&v.mukai_coords()),
                "mukai_square": int_value(&v.square(&pic)),
                "rank": picm.rank(),
                "gram": gram_value(picm.lattice().gram()),
                "sigma": ints_value(picm.sigma().coords()),
                "vperp_basis_mukai": picm.vperp_mukai().iter()
                    .map(|r| ints_value(r)).collect::<Vec<_>>(),
                "vperp_basis": picm.vperp_basis().iter()
                    .map(|c| ints_value(c.coords())).collect::<Vec<_>>(),
                "vperp_gram": gram_value(picm.vperp_gram()),
                "half_class": picm.half_class().map(|c| ints_value(c.coords())),
                "og10_embedding": embedding,
            });
            Ok(format!("{:#}", out))
        }
        Command::CurveClass {
            pic_gram,
            mukai,
            pairings,
        } => {
            require_json(cli.format)?;
            let pic = Lattice::new(parse_gram(&pic_gram)?).map_err(CliError::lattice)?;
            let v = parse_mukai(&pic, &mukai)?;
            let picm = moduli_picard(&pic, &v).map_err(CliError::moduli)?;
            let p = parse_int_list(&pairings)?;
            if p.len() != picm.rank() {
                return Err(CliError::validation(
                    "DimensionMismatch",
                    &format!("expected {} pairings (v-perp basis then sigma)", picm.rank()),
                ));
            }
            let sol = curve_class(&picm, &p).map_err(CliError::moduli)?;
            let dual = dual_wall_divisor(&picm, &sol).ok();
            let out = json!({
                "pairings": ints_value(&p),
                "curve_class": rats_value(sol.entries()),
                "dual_wall_divisor": dual.as_ref().map(|d| json!({
                    "class": rats_value(picm.presentation_coords(&d.class).entries()),
                    "square": int_value(&picm.lattice().q(&d.class)),
                    "wall_type": d.wall.name(),
                    "matches_dual": d.matches_dual,
                })),
            });
            Ok(format!("{:#}", out))
        }
        Command::MzClassify {
            pic_gram,
            mukai,
            h0,
            bound,
        } => {
            require_json(cli.format)?;
            let pic = Lattice::new(parse_gram(&pic_gram)?).map_err(CliError::lattice)?;
            let v = parse_mukai(&pic, &mukai)?;
            let h0c = class_in(&pic, &h0)?;
            let verdict = mz_contraction_type(&pic, &v, &h0c, bound).map_err(CliError::moduli)?;
            let out = json!({
                "verdict": verdict.kind.name(),
                "search_complete": verdict.search_complete,
                "witness": verdict.witness().map(mukai_value),
                "witnesses": verdict.witnesses.iter()
                    .map(mukai_value).collect::<Vec<_>>(),
            });
            Ok(format!("{:#}", out))
        }
        Command::Cone {
            context,
            walls,
            ample,
        } => {
            let ctx = match context.as_str() {
                "ij" => ConeContext::ij(),
                "ij-twisted" => ConeContext::ij_twisted(),
                other => {
                    return Err(CliError::validation(
                        "UnknownContext",
                        &format!("unknown cone context {:?}; available: ij, ij-twisted", other),
                    ))
                }
            };
            let ample_side = match &ample {
                Some(spec) => {
                    let coords = parse_int_list(spec)?;
                    if coords.len() != 2 {
                        return Err(CliError::validation(
                            "DimensionMismatch",
                            "ample class needs exactly two coordinates",
                        ));
                    }
                    (coords[0].clone(), coords[1].clone())
                }
                None => ctx.positive_ray_hint().clone(),
            };
            let structure = match walls.as_str() {
                "all" => kahler_chamber(&ctx, &ample_side).map_err(CliError::cone)?,
                "pex" => movable_chamber(&ctx, &ample_side).map_err(CliError::cone)?,
                "none" => {
                    let scan = wall_rays(&ctx, &[]);
                    chambers(&ctx, &scan)
                }
                other => {
                    return Err(CliError::validation(
                        "UnknownWallSet",
                        &format!("unknown wall set {:?}; available: all, pex, none", other),
                    ))
                }
            };
            match cli.format {
                Format::Json => Ok(format!("{:#}", chamber_value(&structure, &ctx))),
                Format::Svg => Ok(chamber_svg(
                    &structure,
                    &ctx,
                    &format!("Chamber structure ({})", context),
                )),
                Format::Csv => Ok(chamber_csv(&structure, &ctx)),
            }
        }
        Command::UniqueCompactification { gram } => {
            require_json(cli.format)?;
            let g = parse_gram(&gram)?;
            let out = unique_compactification(&g).map_err(CliError::cone)?;
            let value = json!({
                "unique": out.unique,
                "kprime": [int_value(&out.kprime.0), int_value(&out.kprime.1)],
                "obstruction_square": int_value(&out.obstruction_square),
                "obstruction_divisibility": int_value(&out.obstruction_divisibility),
                "wall": out.wall.map(WallType::name),
                "residue_consistent": out.residue_consistent,
            });
            Ok(format!("{:#}", value))
        }
        Command::Preset { name } => presets::run_preset(&name, cli.format),
    }
}

/// Entry point shared by the binary and the test suite.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message (also used for --help/--version).
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out_path = cli.out.clone();
    match run_command(cli) {
        Ok(output) => {
            match out_path {
                Some(path) => {
                    if let Err(e) = fs::write(&path, output) {
                        eprintln!(
                            "{}",
                            json!({ "error": "WriteFailed", "detail": e.to_string() })
                        );
                        return 1;
                    }
                }
                None => {
                    use std::io::Write;
                    let mut stdout = std::io::stdout();
                    if let Err(e) = writeln!(stdout, "{}", output) {
                        // A closed pipe is not an error for a batch tool.
                        if e.kind() == std::io::ErrorKind::BrokenPipe {
                            return 0;
                        }
                        eprintln!(
                            "{}",
                            json!({ "error": "WriteFailed", "detail": e.to_string() })
                        );
                        return 1;
                    }
                }
            }
            0
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.code, "detail": e.detail }));
            e.exit
        }
    }
}

/// Captured variant of [`run`] used by tests: returns (exit, stdout-ish).
pub fn run_captured<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => return (2, e.to_string()),
    };
    match run_command(cli) {
        Ok(output) => (0, output),
        Err(e) => (
            e.exit,
            json!({ "error": e.code, "detail": e.detail }).to_string(),
        ),
    }
}


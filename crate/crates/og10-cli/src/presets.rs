//! Named end-to-end fixtures. Each preset runs a pipeline on frozen input
//! data and reports computed values next to the expected ones with a match
//! flag, so the presets double as golden-file integration tests.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use og10_core::cones::{
    kahler_chamber, movable_chamber, unique_compactification, ConeContext, RayKind,
};
use og10_core::lattice::{Class, Lattice};
use og10_core::matrix::{int, IntMatrix, RatVector};
use og10_core::moduli::{
    curve_class, dual_wall_divisor, moduli_picard, mz_contraction_type,
    MukaiVector,
};
use og10_core::wall::{
    half_integral_split, lagrangian_candidate, sigma_projection_class,
};

use crate::report::{chamber_csv, chamber_svg, combo_label, rat_str};
use crate::{CliError, Format};

pub const PRESET_NAMES: [&str; 9] = [
    "fig1",
    "ij-twisted",
    "zero-section",
    "p3-bundle",
    "nonreduced",
    "mz-elliptic",
    "pfaffian",
    "prop63-split",
    "prop53-exclusion",
];

struct Checks {
    items: Vec<Value>,
    all_match: bool,
}

impl Checks {
    fn new() -> Self {
        Checks {
            items: Vec::new(),
            all_match: true,
        }
    }

    fn push(&mut self, name: &str, computed: impl ToString, expected: impl ToString) {
        let computed = computed.to_string();
        let expected = expected.to_string();
        let ok = computed == expected;
        self.all_match &= ok;
        self.items.push(json!({
            "name": name,
            "computed": computed,
            "expected": expected,
            "match": ok,
        }));
    }

    fn finish(self, name: &str, description: &str) -> Value {
        json!({
            "preset": name,
            "description": description,
            "checks": self.items,
            "match": self.all_match,
        })
    }
}

pub fn run_preset(name: &str, format: Format) -> Result<String, CliError> {
    match name {
        "fig1" => cone_preset(
            name,
            "Kähler and movable cone of the intermediate jacobian fibration",
            ConeContext::ij(),
            format,
        ),
        "ij-twisted" => cone_preset(
            name,
            "Kähler and movable cone of the twisted intermediate jacobian fibration",
            ConeContext::ij_twisted(),
            format,
        ),
        "zero-section" => json_only(format, zero_section),
        "p3-bundle" => json_only(format, p3_bundle),
        "nonreduced" => json_only(format, nonreduced),
        "mz-elliptic" => json_only(format, mz_elliptic),
        "pfaffian" => json_only(format, pfaffian),
        "prop63-split" => json_only(format, prop63_split),
        "prop53-exclusion" => json_only(format, prop53_exclusion),
        _ => Err(CliError::validation(
            "UnknownPreset",
            &format!(
                "unknown preset {:?}; available: {}",
                name,
                PRESET_NAMES.join(", ")
            ),
        )),
    }
}

fn json_only(format: Format, f: impl FnOnce() -> Result<Value, CliError>) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(format!("{:#}", f()?)),
        _ => Err(CliError::validation(
            "UnsupportedFormat",
            "this preset only renders as JSON",
        )),
    }
}

fn ray_desc(kind: &RayKind, dir_label: String) -> String {
    match kind {
        RayKind::IsotropicBoundary => format!("isotropic ray {}", dir_label),
        RayKind::WallRay { .. } | RayKind::PexWall { .. } => dir_label,
    }
}

fn bound_label(ctx: &ConeContext, st: &og10_core::cones::ChamberStructure) -> (String, String) {
    let (lo, hi) = st.selected_bounds().expect("chamber selected");
    let names = ctx.labels();
    let describe = |ray: &og10_core::cones::Ray| -> String {
        match &ray.kind {
            RayKind::IsotropicBoundary => match ray.dir.as_rational() {
                Some((x, y)) => ray_desc(&ray.kind, combo_label((x, y), names)),
                None => String::from("isotropic ray (irrational)"),
            },
            RayKind::WallRay { class, .. } | RayKind::PexWall { class, .. } => {
                format!("({})⊥", combo_label((&class.0, &class.1), names))
            }
        }
    };
    (describe(lo), describe(hi))
}

fn cone_preset(
    name: &str,
    description: &str,
    ctx: ConeContext,
    format: Format,
) -> Result<String, CliError> {
    let ample = ctx.positive_ray_hint().clone();
    let kahler = kahler_chamber(&ctx, &ample).map_err(CliError::cone)?;
    let movable = movable_chamber(&ctx, &ample).map_err(CliError::cone)?;
    match format {
        Format::Svg => {
            let title = match name {
                "fig1" => "Kähler cone of IJ(V)",
                _ => "Kähler cone of IJ^t(V)",
            };
            return Ok(chamber_svg(&kahler, &ctx, title));
        }
        Format::Csv => return Ok(chamber_csv(&kahler, &ctx)),
        Format::Json => {}
    }
    let mut checks = Checks::new();
    let names = ctx.labels();
    let twisted = name == "ij-twisted";

    let (klo, khi) = bound_label(&ctx, &kahler);
    let (mlo, mhi) = bound_label(&ctx, &movable);
    if twisted {
        checks.push("pic gram", format!("{:?}", ctx.pic().gram()), "[-18 3; 3 0]");
        checks.push("kahler chamber bounds", format!("{} .. {}", klo, khi), "(T^t-b^t)⊥ .. isotropic ray b^t");
        checks.push("movable chamber bounds", format!("{} .. {}", mlo, mhi), "(T^t+2b^t)⊥ .. isotropic ray b^t");
        let tmb = (int(1), int(-1));
        checks.push(
            "q(T^t-b^t), div(T^t-b^t)",
            format!("{}, {}", ctx.pic().q(&Class::new(vec![tmb.0.clone(), tmb.1.clone()])), ctx.ambient_divisibility(&tmb)),
            "-24, 3",
        );
        let tp2 = (int(1), int(2));
        checks.push(
            "q(T^t+2b^t), div(T^t+2b^t)",
            format!("{}, {}", ctx.pic().q(&Class::new(vec![tp2.0.clone(), tp2.1.clone()])), ctx.ambient_divisibility(&tp2)),
            "-6, 3",
        );
        checks.push(
            "isotropic boundary",
            combo_label(
                kahler.rays[0].dir.as_rational().expect("rational boundary"),
                names,
            ),
            "T^t+3b^t",
        );
        checks.push(
            "lagrangian candidate b^t",
            lagrangian_candidate(&ctx, &(int(0), int(1))).map_err(CliError::cone)?,
            true,
        );
    } else {
        checks.push("pic gram", format!("{:?}", ctx.pic().gram()), "[-2 1; 1 0]");
        checks.push("kahler chamber bounds", format!("{} .. {}", klo, khi), "(T-b)⊥ .. isotropic ray b");
        checks.push("movable chamber bounds", format!("{} .. {}", mlo, mhi), "(T)⊥ .. isotropic ray b");
        let d = (int(1), int(-1));
        checks.push(
            "q(T-b), div(T-b)",
            format!("{}, {}", ctx.pic().q(&Class::new(vec![d.0.clone(), d.1.clone()])), ctx.ambient_divisibility(&d)),
            "-4, 1",
        );
        checks.push(
            "isotropic boundary",
            combo_label(
                kahler.rays[0].dir.as_rational().expect("rational boundary"),
                names,
            ),
            "T+b",
        );
        checks.push(
            "lagrangian candidate b",
            lagrangian_candidate(&ctx, &(int(0), int(1))).map_err(CliError::cone)?,
            true,
        );
        checks.push(
            "lagrangian candidate T+b",
            lagrangian_candidate(&ctx, &(int(1), int(1))).map_err(CliError::cone)?,
            false,
        );
    }
    checks.push("wall enumeration complete", kahler.complete, true);
    Ok(format!("{:#}", checks.finish(name, description)))
}

fn deg2_pic() -> Lattice {
    Lattice::new(IntMatrix::from_rows_i64(&[&[2]])).unwrap()
}

fn zero_section() -> Result<Value, CliError> {
    let picm = moduli_picard(&deg2_pic(), &MukaiVector::from_i64(0, &[2], -4))
        .map_err(CliError::moduli)?;
    let mut checks = Checks::new();
    checks.push(
        "v-perp generators (Mukai coords)",
        format!("{:?}, {:?}", picm.vperp_mukai()[0], picm.vperp_mukai()[1]),
        "[-1, 1, 0], [0, 0, 1]",
    );
    let l = curve_class(&picm, &[int(-1), int(1), int(0)]).map_err(CliError::moduli)?;
    checks.push("curve class l = a-3b", fmt_rats(&l), "(1, -3, 0)");
    let d = dual_wall_divisor(&picm, &l).map_err(CliError::moduli)?;
    checks.push("q(D)", picm.lattice().q(&d.class), "-4");
    checks.push(
        "div(D)",
        picm.ambient_divisibility(&d.class).map_err(CliError::moduli)?,
        "1",
    );
    checks.push("wall type", d.wall.name(), "NegFourDivOne");
    checks.push("D/div(D) equals the curve class", d.matches_dual, true);
    Ok(checks.finish(
        "zero-section",
        "Wall divisor a-3b of the zero section in the genus-2 torsion moduli space",
    ))
}

fn nonreduced() -> Result<Value, CliError> {
    let picm = moduli_picard(&deg2_pic(), &MukaiVector::from_i64(0, &[2], -4))
        .map_err(CliError::moduli)?;
    let mut checks = Checks::new();
    let r = curve_class(&picm, &[int(1), int(0), int(4)]).map_err(CliError::moduli)?;
    checks.push("curve class R = b - (2/3)sigma", fmt_rats(&r), "(0, 1, -2/3)");
    let d = dual_wall_divisor(&picm, &r).map_err(CliError::moduli)?;
    checks.push(
        "D = 3b - 2sigma (presentation coords)",
        fmt_rats(&picm.presentation_coords(&d.class)),
        "(0, 3, -2)",
    );
    checks.push("q(D)", picm.lattice().q(&d.class), "-24");
    checks.push(
        "div(D)",
        picm.ambient_divisibility(&d.class).map_err(CliError::moduli)?,
        "3",
    );
    checks.push("wall type", d.wall.name(), "NegTwentyFourDivThree");
    checks.push("D/div(D) equals the curve class", d.matches_dual, true);
    Ok(checks.finish(
        "nonreduced",
        "Wall divisor 3b-2sigma of the P3-bundles over non-reduced support curves",
    ))
}

fn p3_bundle() -> Result<Value, CliError> {
    let picm = moduli_picard(&deg2_pic(), &MukaiVector::from_i64(0, &[2], 2))
        .map_err(CliError::moduli)?;
    let mut checks = Checks::new();
    checks.push(
        "v-perp generator a (Mukai coords)",
        format!("{:?}", picm.vperp_mukai()[0]),
        "[2, 1, 0]",
    );
    let r = curve_class(&picm, &[int(2), int(1), int(1)]).map_err(CliError::moduli)?;
    checks.push(
        "curve class R = -a/2 - 3b/2 - sigma/6",
        fmt_rats(&r),
        "(-1/2, -3/2, -1/6)",
    );
    // x = -(a + 3b + sigma)/2 is integral of square -4.
    let a = picm.vperp_basis()[0].clone();
    let b = picm.vperp_basis()[1].clone();
    let sum = a.add(&b.scaled(3)).add(picm.sigma());
    let integral = sum.coords().iter().all(|c| (c % BigInt::from(2)).is_zero());
    checks.push("a + 3b + sigma is 2-divisible", integral, true);
    let x = Class::new(sum.coords().iter().map(|c| -(c / BigInt::from(2))).collect());
    checks.push("q(x)", picm.lattice().q(&x), "-4");
    let d = dual_wall_divisor(&picm, &r).map_err(CliError::moduli)?;
    let three_x_sigma = x.scaled(3).add(picm.sigma());
    checks.push(
        "D equals 3x + sigma",
        (d.class == three_x_sigma).to_string(),
        "true",
    );
    checks.push("q(D)", picm.lattice().q(&d.class), "-24");
    checks.push(
        "div(D)",
        picm.ambient_divisibility(&d.class).map_err(CliError::moduli)?,
        "3",
    );
    checks.push("wall type", d.wall.name(), "NegTwentyFourDivThree");
    // Projection into sigma-perp: a multiple of a (-10, 2) class.
    let proj = sigma_projection_class(picm.lattice(), &d.class, picm.sigma())
        .map_err(CliError::wall)?;
    let (q, div) = proj.ray_invariants.expect("nonzero projection");
    checks.push("projection ray invariants", format!("({}, {})", q, div), "(-10, 2)");
    checks.push("projection admissible", proj.admissible, true);
    Ok(checks.finish(
        "p3-bundle",
        "Wall divisor 3x+sigma of the P3-bundle over Hilb^2 in the v=(0,2H,2) moduli space",
    ))
}

fn mz_elliptic() -> Result<Value, CliError> {
    let pic = Lattice::new(IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]])).unwrap();
    let v = MukaiVector::from_i64(2, &[0, 0], -2);
    let h0 = Class::from_i64(&[1, 2]);
    let verdict = mz_contraction_type(&pic, &v, &h0, 10).map_err(CliError::moduli)?;
    let mut checks = Checks::new();
    checks.push("verdict", verdict.kind.name(), "SmallContraction");
    checks.push("search complete", verdict.search_complete, true);
    let expected = MukaiVector::from_i64(1, &[1, -2], -1);
    checks.push(
        "witness set contains (1, e-2f, -1)",
        verdict.witnesses.contains(&expected),
        true,
    );
    let muk = og10_core::lattice::mukai_algebraic(&pic);
    let w = verdict.witness().expect("witness exists");
    let wc = Class::new(w.mukai_coords());
    checks.push("q(s)", muk.q(&wc), "-2");
    checks.push(
        "(s, H0)",
        muk.pair(&wc, &Class::from_i64(&[0, 1, 2, 0])),
        "0",
    );
    checks.push("(s, v)", muk.pair(&wc, &Class::new(v.mukai_coords())), "4");
    Ok(checks.finish(
        "mz-elliptic",
        "Contraction classifier on the elliptic K3 with H0 = e+2f: the P5 flop",
    ))
}

fn pfaffian() -> Result<Value, CliError> {
    let mut checks = Checks::new();
    let out = unique_compactification(&IntMatrix::from_rows_i64(&[&[3, 4], &[4, 10]]))
        .map_err(CliError::cone)?;
    checks.push("unique compactification", out.unique, true);
    checks.push("obstruction square", &out.obstruction_square, "-42");
    checks.push("obstruction divisibility", &out.obstruction_divisibility, "3");
    checks.push(
        "K' in (h^2, K) coordinates",
        format!("({}, {})", out.kprime.0, out.kprime.1),
        "(-4, 3)",
    );
    checks.push("mod-18 residue consistent", out.residue_consistent, true);
    checks.push("wall hit", fmt_wall(&out.wall), "none");
    // Set-level correspondence of wall squares with the Hassett divisors
    // C2, C6, C8, C12 (canonical Grams of discriminants 2, 6, 8, 12).
    for (label, gram, square, unique) in [
        ("C2", [[3i64, 1], [1, 1]], -6i64, false),
        ("C6", [[3, 0], [0, 2]], -2, false),
        ("C8", [[3, 1], [1, 3]], -24, false),
        ("C12", [[3, 3], [3, 7]], -4, false),
    ] {
        let g = IntMatrix::from_rows_i64(&[&gram[0], &gram[1]]);
        let o = unique_compactification(&g).map_err(CliError::cone)?;
        checks.push(
            &format!("{}: obstruction square", label),
            &o.obstruction_square,
            square,
        );
        checks.push(&format!("{}: unique", label), o.unique, unique);
    }
    Ok(checks.finish(
        "pfaffian",
        "Uniqueness of the IHS compactification for Pfaffian cubics; -42 is not a wall",
    ))
}

fn prop63_split() -> Result<Value, CliError> {
    let picm = moduli_picard(&deg2_pic(), &MukaiVector::from_i64(2, &[0], -2))
        .map_err(CliError::moduli)?;
    let mut checks = Checks::new();
    let d = picm
        .class_from_mukai(&[int(3), int(2), int(3)])
        .map_err(CliError::moduli)?;
    checks.push("q(D) for D = (3, 2H, 3)", picm.lattice().q(&d), "-10");
    checks.push(
        "(D, sigma)",
        picm.lattice().pair(&d, picm.sigma()),
        "0",
    );
    let e = half_integral_split(picm.lattice(), &d, picm.sigma()).map_err(CliError::wall)?;
    checks.push("q(E)", picm.lattice().q(&e), "-4");
    checks.push("(E, sigma)", picm.lattice().pair(&e, picm.sigma()), "3");
    checks.push(
        "wall type of E",
        fmt_wall(&picm.wall_type(&e).map_err(CliError::moduli)?),
        "NegFourDivOne",
    );
    let three_e_sigma = e.scaled(3).add(picm.sigma());
    checks.push("q(3E + sigma)", picm.lattice().q(&three_e_sigma), "-24");
    checks.push(
        "wall type of 3E + sigma",
        fmt_wall(&picm.wall_type(&three_e_sigma).map_err(CliError::moduli)?),
        "NegTwentyFourDivThree",
    );
    let proj = sigma_projection_class(picm.lattice(), &three_e_sigma, picm.sigma())
        .map_err(CliError::wall)?;
    let (q, div) = proj.ray_invariants.expect("nonzero projection");
    checks.push(
        "projection of 3E+sigma: ray invariants",
        format!("({}, {})", q, div),
        "(-10, 2)",
    );
    checks.push("projection admissible", proj.admissible, true);
    Ok(checks.finish(
        "prop63-split",
        "Half-integral split of D = (3,2H,3): E and 3E+sigma are both walls",
    ))
}

fn prop53_exclusion() -> Result<Value, CliError> {
    let picm = moduli_picard(&deg2_pic(), &MukaiVector::from_i64(0, &[2], -2))
        .map_err(CliError::moduli)?;
    let mut checks = Checks::new();
    // D1 = (-2, H, 0) and D2 = D1 - b are the orthogonal generators.
    let d1 = picm
        .class_from_mukai(&[int(-2), int(1), int(0)])
        .map_err(CliError::moduli)?;
    let b = picm
        .class_from_mukai(&[int(0), int(0), int(1)])
        .map_err(CliError::moduli)?;
    let d2 = d1.sub(&b);
    checks.push(
        "Gram of (D1, D2)",
        format!(
            "[{} {}; {} {}]",
            picm.lattice().q(&d1),
            picm.lattice().pair(&d1, &d2),
            picm.lattice().pair(&d2, &d1),
            picm.lattice().q(&d2)
        ),
        "[2 0; 0 -2]",
    );
    let w = d1.scaled(4).add(&d2.scaled(5));
    checks.push("q(W) for W = 4D1 + 5D2", picm.lattice().q(&w), "-18");
    // Divisibility of W in the singular moduli lattice sigma-perp.
    let proj_w = sigma_projection_class(picm.lattice(), &w, picm.sigma())
        .map_err(CliError::wall)?;
    let (qw, divw) = proj_w.ray_invariants.expect("nonzero");
    checks.push("(square, div) of W in sigma-perp", format!("({}, {})", qw, divw), "(-18, 2)");
    let eprime = half_integral_split(picm.lattice(), &w, picm.sigma()).map_err(CliError::wall)?;
    let wprime = eprime.scaled(3).add(picm.sigma());
    checks.push("q(W') for W' = 3(W-sigma)/2 + sigma", picm.lattice().q(&wprime), "-42");
    checks.push(
        "ambient div(W')",
        picm.ambient_divisibility(&wprime).map_err(CliError::moduli)?,
        "3",
    );
    let proj = sigma_projection_class(picm.lattice(), &wprime, picm.sigma())
        .map_err(CliError::wall)?;
    // The projection must be proportional to W itself.
    let prim_w = picm.presentation_coords(&w);
    let (q, div) = proj.ray_invariants.expect("nonzero projection");
    let prim_proj = proj
        .projection
        .primitive_ray()
        .map(|(ints, _)| Class::new(ints));
    let proportional = prim_proj
        .map(|p| {
            let pw = picm
                .presentation_coords(&p)
                .entries()
                .iter()
                .map(rat_str)
                .collect::<Vec<_>>();
            let ww = prim_w.entries().iter().map(rat_str).collect::<Vec<_>>();
            pw == ww
        })
        .unwrap_or(false);
    checks.push("projection proportional to W", proportional, true);
    checks.push("projection ray invariants", format!("({}, {})", q, div), "(-18, 2)");
    checks.push("projection admissible", proj.admissible, false);
    let wall = og10_core::moduli::og10_embedding_certificate(&picm)
        .map_err(CliError::moduli)
        .and_then(|_| picm.wall_type(&wprime).map_err(CliError::moduli))?;
    checks.push("wall type of W'", fmt_wall(&wall), "none");
    Ok(checks.finish(
        "prop53-exclusion",
        "Square -42, divisibility 3 is excluded: the projection of W' is a multiple of W",
    ))
}

fn fmt_rats(r: &RatVector) -> String {
    let mut out = String::from("(");
    for (i, e) in r.entries().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&rat_str(e));
    }
    out.push(')');
    out
}

fn fmt_wall(w: &Option<og10_core::wall::WallType>) -> String {
    match w {
        Some(t) => t.name().to_string(),
        None => String::from("none"),
    }
}

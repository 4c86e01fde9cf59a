//! Output rendering: canonical JSON values, rational formatting, the SVG
//! cone diagram and the CSV ray table.
//!
//! Every verdict is computed exactly upstream; the only rounding in this
//! crate happens when ray endpoints are projected to SVG pixel coordinates
//! (rendering tolerance 1e-6).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use og10_core::cones::{ChamberStructure, ConeContext, Ray, RayDir, RayKind};
use og10_core::matrix::{Int, IntMatrix};

/// Canonical rational rendering: integers bare, fractions as "p/q".
pub fn rat_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn int_value(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => json!(v),
        None => json!(i.to_string()),
    }
}

pub fn ints_value(coords: &[Int]) -> Value {
    Value::Array(coords.iter().map(int_value).collect())
}

pub fn gram_value(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| int_value(m.at(r, c))).collect()))
            .collect(),
    )
}

pub fn rats_value(entries: &[BigRational]) -> Value {
    Value::Array(entries.iter().map(|e| json!(rat_str(e))).collect())
}

/// Linear-combination label like "T-2b" over basis names.
pub fn combo_label(coords: (&Int, &Int), names: &[String; 2]) -> String {
    let mut out = String::new();
    for (c, name) in [(coords.0, &names[0]), (coords.1, &names[1])] {
        if c.is_zero() {
            continue;
        }
        if c.is_positive() && !out.is_empty() {
            out.push('+');
        }
        if *c == BigInt::from(-1) {
            out.push('-');
        } else if !c.is_one() {
            out.push_str(&c.to_string());
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn dir_value(dir: &RayDir) -> Value {
    match dir {
        RayDir::Rational(x, y) => json!({ "x": int_value(x), "y": int_value(y) }),
        RayDir::Surd { t, negated } => json!({
            "slope_quadratic": {
                "a": int_value(&t.a),
                "b": int_value(&t.b),
                "c": int_value(&t.c),
                "root": if t.plus_root { "plus" } else { "minus" },
            },
            "negated": negated,
        }),
    }
}

fn kind_value(kind: &RayKind, names: &[String; 2]) -> Value {
    match kind {
        RayKind::IsotropicBoundary => json!({ "kind": "IsotropicBoundary" }),
        RayKind::WallRay { class, wall } => json!({
            "kind": "WallRay",
            "class": json!([int_value(&class.0), int_value(&class.1)]),
            "label": combo_label((&class.0, &class.1), names),
            "square": wall.square(),
            "divisibility": wall.divisibility(),
        }),
        RayKind::PexWall { class, pex } => json!({
            "kind": "PexWall",
            "class": json!([int_value(&class.0), int_value(&class.1)]),
            "label": combo_label((&class.0, &class.1), names),
            "square": pex.square(),
            "divisibility": pex.divisibility(),
        }),
    }
}

pub fn chamber_value(st: &ChamberStructure, ctx: &ConeContext) -> Value {
    let names = ctx.labels();
    let rays: Vec<Value> = st
        .rays
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("dir".into(), dir_value(&r.dir));
            m.insert("ray".into(), kind_value(&r.kind, names));
            Value::Object(m)
        })
        .collect();
    json!({
        "basis": [names[0], names[1]],
        "rays": rays,
        "chambers": st.chambers,
        "selected": st.selected,
        "enumeration_complete": st.complete,
    })
}

/// Approximate slope of a ray direction for rendering only.
fn dir_to_f64(dir: &RayDir) -> (f64, f64) {
    match dir {
        RayDir::Rational(x, y) => (big_to_f64(x), big_to_f64(y)),
        RayDir::Surd { t, negated } => {
            let disc = big_to_f64(&(&t.b * &t.b - &t.a * &t.c));
            let root = disc.max(0.0).sqrt();
            let tval = if t.plus_root {
                (-big_to_f64(&t.b) + root) / big_to_f64(&t.c)
            } else {
                (-big_to_f64(&t.b) - root) / big_to_f64(&t.c)
            };
            if *negated {
                (-1.0, -tval)
            } else {
                (1.0, tval)
            }
        }
    }
}

fn big_to_f64(i: &BigInt) -> f64 {
    i.to_f64().unwrap_or(0.0)
}

fn fmt_coord(v: f64) -> String {
    format!("{:.6}", v)
}

/// Render a chamber structure as a cone diagram. The two boundary rays
/// become the drawn axes (as in the Kähler-cone picture of the
/// intermediate jacobian fibration); walls are labeled interior lines and
/// the selected chamber is shaded.
pub fn chamber_svg(st: &ChamberStructure, ctx: &ConeContext, title: &str) -> String {
    let names = ctx.labels();
    let n = st.rays.len();
    assert!(n >= 2);
    let left = dir_to_f64(&st.rays[0].dir);
    let right = dir_to_f64(&st.rays[n - 1].dir);
    // Coordinates of a ray in the boundary frame, with the second boundary
    // ray (the fibration class b in the intermediate-jacobian contexts) on
    // the horizontal axis.
    let det = left.0 * right.1 - left.1 * right.0;
    let frame = |d: (f64, f64)| -> (f64, f64) {
        let alpha = (d.0 * right.1 - d.1 * right.0) / det;
        let beta = (left.0 * d.1 - left.1 * d.0) / det;
        (beta, alpha)
    };
    let origin = (60.0, 360.0);
    let scale = 280.0;
    let to_screen = |fr: (f64, f64)| -> (f64, f64) {
        let norm = fr.0.abs().max(fr.1.abs()).max(1e-12);
        (
            origin.0 + scale * fr.0 / norm,
            origin.1 - scale * fr.1 / norm,
        )
    };

    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 480 440\" font-family=\"sans-serif\" font-size=\"12\">\n");
    s.push_str(&format!(
        "  <title>{}</title>\n  <text x=\"16\" y=\"24\" font-size=\"14\">{}</text>\n",
        title, title
    ));
    // Selected chamber shading.
    if let Some(sel) = st.selected {
        let (i, j) = st.chambers[sel];
        let p1 = to_screen(frame(dir_to_f64(&st.rays[i].dir)));
        let p2 = to_screen(frame(dir_to_f64(&st.rays[j].dir)));
        s.push_str(&format!(
            "  <polygon points=\"{},{} {},{} {},{}\" fill=\"#cfe8cf\" stroke=\"none\"/>\n",
            fmt_coord(origin.0),
            fmt_coord(origin.1),
            fmt_coord(p1.0),
            fmt_coord(p1.1),
            fmt_coord(p2.0),
            fmt_coord(p2.1)
        ));
    }
    for (idx, ray) in st.rays.iter().enumerate() {
        let p = to_screen(frame(dir_to_f64(&ray.dir)));
        let boundary = matches!(ray.kind, RayKind::IsotropicBoundary);
        let (color, dash) = match &ray.kind {
            RayKind::IsotropicBoundary => ("#000000", ""),
            RayKind::PexWall { .. } => ("#b03030", " stroke-dasharray=\"6,4\""),
            RayKind::WallRay { .. } => ("#3050b0", ""),
        };
        s.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n",
            fmt_coord(origin.0),
            fmt_coord(origin.1),
            fmt_coord(p.0),
            fmt_coord(p.1),
            color,
            if boundary { 2 } else { 1 },
            dash
        ));
        let label = match &ray.kind {
            RayKind::IsotropicBoundary => {
                match ray.dir.as_rational() {
                    Some((x, y)) => combo_label((x, y), names),
                    None => format!("boundary {}", idx),
                }
            }
            RayKind::WallRay { class, wall } => format!(
                "({})⊥ q={} div={}",
                combo_label((&class.0, &class.1), names),
                wall.square(),
                wall.divisibility()
            ),
            RayKind::PexWall { class, pex } => format!(
                "({})⊥ q={} div={}",
                combo_label((&class.0, &class.1), names),
                pex.square(),
                pex.divisibility()
            ),
        };
        let lx = origin.0 + (p.0 - origin.0) * 1.04 + 2.0;
        let ly = origin.1 + (p.1 - origin.1) * 1.04;
        s.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n",
            fmt_coord(lx),
            fmt_coord(ly),
            color,
            label
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// CSV ray table: one row per ray with exact data.
pub fn chamber_csv(st: &ChamberStructure, ctx: &ConeContext) -> String {
    let names = ctx.labels();
    let mut out = String::from("index,kind,label,dir,class,square,divisibility\n");
    for (idx, Ray { dir, kind }) in st.rays.iter().enumerate() {
        let dir_s = match dir {
            RayDir::Rational(x, y) => format!("({};{})", x, y),
            RayDir::Surd { t, negated } => format!(
                "surd(a={};b={};c={};root={};neg={})",
                t.a,
                t.b,
                t.c,
                if t.plus_root { "plus" } else { "minus" },
                negated
            ),
        };
        let (kind_s, label, class_s, square, div) = match kind {
            RayKind::IsotropicBoundary => (
                "IsotropicBoundary",
                match dir.as_rational() {
                    Some((x, y)) => combo_label((x, y), names),
                    None => String::from("irrational"),
                },
                String::new(),
                String::new(),
                String::new(),
            ),
            RayKind::WallRay { class, wall } => (
                "WallRay",
                combo_label((&class.0, &class.1), names),
                format!("({};{})", class.0, class.1),
                wall.square().to_string(),
                wall.divisibility().to_string(),
            ),
            RayKind::PexWall { class, pex } => (
                "PexWall",
                combo_label((&class.0, &class.1), names),
                format!("({};{})", class.0, class.1),
                pex.square().to_string(),
                pex.divisibility().to_string(),
            ),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            idx, kind_s, label, dir_s, class_s, square, div
        ));
    }
    out
}

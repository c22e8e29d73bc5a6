//! Motive description files: a flat TOML subset.
//!
//! ```toml
//! p = 11
//! kind = "kummer"
//! u = [[2, 3]]          # s rows, r columns; column j is u(e_j)
//!
//! [bundle]
//! l = [[1, 0]]          # s x r
//! c = [1, 5]            # one unit per lattice generator
//! ```
//!
//! ```toml
//! p = 101
//! kind = "abelian"
//! curve = [2, 3]                 # y^2 = x^3 + a x + b
//! points = [[x, y], "O"]
//!
//! [bundle]
//! divisor = [{ point = "O", n = 3 }]
//! c = [1, 1]
//! ```

use std::str::FromStr;

use motive_core::elliptic::{Curve, Divisor, Point};
use motive_core::field::{PrimeField, Unit};
use motive_core::groups::IntMatrix;
use motive_core::motive::{AbelianMotive, KummerMotive};
use motive_core::picard::{symmetry_defect, validate, AbelianDatum, KummerDatum};
use motive_core::torus::UnitMatrix;
use num_bigint::BigInt;
use rand::RngCore;
use toml::{Table, Value};

#[derive(Clone, Debug)]
pub enum MotiveSpec {
    Kummer { motive: KummerMotive, bundle: Option<KummerDatum> },
    Abelian { motive: AbelianMotive, bundle: Option<AbelianDatum> },
}

fn get<'a>(t: &'a Table, key: &str) -> Result<&'a Value, String> {
    t.get(key).ok_or_else(|| format!("missing key `{}`", key))
}

fn integer(v: &Value, what: &str) -> Result<BigInt, String> {
    match v {
        Value::Integer(n) => Ok(BigInt::from(*n)),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| format!("{}: `{}` is not a decimal integer", what, s)),
        _ => Err(format!("{}: expected an integer", what)),
    }
}

fn small(v: &Value, what: &str) -> Result<i64, String> {
    i64::try_from(integer(v, what)?).map_err(|_| format!("{}: out of range", what))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, String> {
    v.as_array().ok_or_else(|| format!("{}: expected an array", what))
}

fn unit(field: &PrimeField, v: &Value, what: &str) -> Result<Unit, String> {
    let n = small(v, what)?;
    if n < 1 || n as u64 >= field.p() {
        return Err(format!("{}: unit {} is not in [1, {}]", what, n, field.p() - 1));
    }
    field.unit(n).map_err(|e| e.to_string())
}

fn int_rows(v: &Value, what: &str) -> Result<Vec<Vec<BigInt>>, String> {
    let rows = array(v, what)?;
    let out = rows
        .iter()
        .map(|row| array(row, what)?.iter().map(|x| integer(x, what)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if out.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(format!("{}: ragged matrix", what));
    }
    Ok(out)
}

fn point(curve: &Curve, v: &Value, what: &str) -> Result<Point, String> {
    match v {
        Value::String(s) if s == "O" => Ok(Point::Infinity),
        Value::Array(xy) if xy.len() == 2 => {
            curve.point(small(&xy[0], what)?, small(&xy[1], what)?).map_err(|e| format!("{}: {}", what, e))
        }
        _ => Err(format!("{}: expected [x, y] or \"O\"", what)),
    }
}

/// Parses and validates a description; descent data on abelian motives are checked with `rng`.
pub fn parse(text: &str, rng: &mut dyn RngCore) -> Result<MotiveSpec, String> {
    let t: Table = text.parse().map_err(|e: toml::de::Error| format!("malformed input: {}", e.message()))?;
    let p = u64::try_from(small(get(&t, "p")?, "p")?).map_err(|_| "p: must be positive".to_string())?;
    let field = PrimeField::new(p).map_err(|e| e.to_string())?;
    let kind = get(&t, "kind")?.as_str().ok_or_else(|| "kind: expected a string".to_string())?;
    let bundle = match t.get("bundle") {
        None => None,
        Some(Value::Table(b)) => Some(b),
        Some(_) => return Err("bundle: expected a table".to_string()),
    };
    match kind {
        "kummer" => {
            let rows = array(get(&t, "u")?, "u")?;
            let units = rows
                .iter()
                .map(|row| array(row, "u")?.iter().map(|x| unit(&field, x, "u")).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let s = units.len();
            let r = units.first().map_or(0, Vec::len);
            if s == 0 || r == 0 || units.iter().any(|row| row.len() != r) {
                return Err("u: expected a nonempty rectangular matrix".to_string());
            }
            let u = UnitMatrix::new(s, r, units.concat()).map_err(|e| e.to_string())?;
            let motive = KummerMotive::new(field.clone(), u);
            let bundle = bundle
                .map(|b| {
                    let l = IntMatrix::from_rows(int_rows(get(b, "l")?, "bundle.l")?).map_err(|e| e.to_string())?;
                    let c = array(get(b, "c")?, "bundle.c")?.iter().map(|x| unit(&field, x, "bundle.c")).collect::<Result<Vec<_>, _>>()?;
                    let d = KummerDatum::new(&motive, l, c).map_err(|e| format!("bundle: {}", e))?;
                    if let Some((i, j)) = symmetry_defect(&motive, &d.l) {
                        return Err(format!("bundle: pairing <L e_i, u(e_j)> is not symmetric at ({}, {})", i, j));
                    }
                    Ok(d)
                })
                .transpose()?;
            Ok(MotiveSpec::Kummer { motive, bundle })
        }
        "abelian" => {
            let ab = array(get(&t, "curve")?, "curve")?;
            if ab.len() != 2 {
                return Err("curve: expected [a, b]".to_string());
            }
            let curve = Curve::new(field.clone(), small(&ab[0], "curve")?, small(&ab[1], "curve")?).map_err(|e| e.to_string())?;
            let points = array(get(&t, "points")?, "points")?.iter().map(|v| point(&curve, v, "points")).collect::<Result<Vec<_>, _>>()?;
            if points.is_empty() {
                return Err("points: need at least one point".to_string());
            }
            let motive = AbelianMotive::new(curve.clone(), points).map_err(|e| e.to_string())?;
            let bundle = bundle
                .map(|b| {
                    let mut divisor = Divisor::zero();
                    for term in array(get(b, "divisor")?, "bundle.divisor")? {
                        let term = term.as_table().ok_or_else(|| "bundle.divisor: expected { point, n } tables".to_string())?;
                        divisor.add_term(point(&curve, get(term, "point")?, "bundle.divisor")?, small(get(term, "n")?, "bundle.divisor")?);
                    }
                    let c = array(get(b, "c")?, "bundle.c")?.iter().map(|x| unit(&field, x, "bundle.c")).collect::<Result<Vec<_>, _>>()?;
                    if c.len() != motive.r() {
                        return Err(format!("bundle.c: expected {} units", motive.r()));
                    }
                    let d = AbelianDatum::new(divisor, c);
                    validate(&motive, &d, rng).map_err(|e| format!("bundle: {}", e))?;
                    Ok(d)
                })
                .transpose()?;
            Ok(MotiveSpec::Abelian { motive, bundle })
        }
        other => Err(format!("kind: unknown kind `{}`", other)),
    }
}

//! JSON encodings of systems and geometric resolutions (`"format": 1`).

use std::str::FromStr;

use equidim::lattice::{ComplexSystem, Monomial, RationalSystem, SparsePoly, SparseSystem, SupportSet};
use equidim::resolution::{GeometricResolution, Resolution};
use equidim::unipoly::UniPoly;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{0}")]
    Json(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field { path: path.into(), message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffFile {
    Rational(String),
    Complex([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub exp: Vec<u32>,
    pub coeff: CoeffFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyFile {
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub format: u32,
    pub n: usize,
    pub polys: Vec<PolyFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionFile {
    pub format: u32,
    pub n: usize,
    pub ell: Vec<String>,
    pub q: Vec<String>,
    pub v: Vec<Vec<String>>,
}

/// A parsed system; exact unless some coefficient was given as `[re, im]`.
#[derive(Clone, Debug, PartialEq)]
pub enum InputSystem {
    Rational(RationalSystem),
    Complex(ComplexSystem),
}

impl InputSystem {
    pub fn nvars(&self) -> usize {
        match self {
            InputSystem::Rational(f) => f.nvars(),
            InputSystem::Complex(f) => f.nvars(),
        }
    }

    pub fn supports(&self) -> Vec<SupportSet> {
        match self {
            InputSystem::Rational(f) => f.supports(),
            InputSystem::Complex(f) => f.supports(),
        }
    }

    pub fn to_complex(&self) -> ComplexSystem {
        match self {
            InputSystem::Rational(f) => f.to_complex(),
            InputSystem::Complex(f) => f.clone(),
        }
    }

    pub fn rational(&self) -> Option<&RationalSystem> {
        match self {
            InputSystem::Rational(f) => Some(f),
            InputSystem::Complex(_) => None,
        }
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        FormatError::Json(format!("{path}: {inner}"))
    })
}

fn check_version(format: u32) -> Result<(), FormatError> {
    if format != FORMAT_VERSION {
        return Err(field("format", format!("unsupported version {format}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

pub fn parse_rational(s: &str, path: &str) -> Result<BigRational, FormatError> {
    BigRational::from_str(s.trim()).map_err(|_| field(path, format!("`{s}` is not a rational number p/q")))
}

pub fn parse_system(text: &str) -> Result<InputSystem, FormatError> {
    let file: SystemFile = from_json(text)?;
    check_version(file.format)?;
    let n = file.n;
    if n == 0 {
        return Err(field("n", "need at least one variable"));
    }
    if file.polys.is_empty() {
        return Err(field("polys", "empty list of polynomials"));
    }
    let complex = file.polys.iter().flat_map(|p| &p.terms).any(|t| matches!(t.coeff, CoeffFile::Complex(_)));
    let mut terms: Vec<Vec<(Monomial, CoeffValue)>> = Vec::new();
    for (j, p) in file.polys.iter().enumerate() {
        let mut out = Vec::new();
        for (k, t) in p.terms.iter().enumerate() {
            let path = format!("polys[{j}].terms[{k}]");
            if t.exp.len() != n {
                return Err(field(format!("{path}.exp"), format!("expected {n} exponents, found {}", t.exp.len())));
            }
            let c = match &t.coeff {
                CoeffFile::Rational(s) => CoeffValue::Rational(parse_rational(s, &format!("{path}.coeff"))?),
                CoeffFile::Complex([re, im]) => CoeffValue::Complex(Complex64::new(*re, *im)),
            };
            if c.is_zero() {
                return Err(field(format!("{path}.coeff"), "zero coefficient"));
            }
            out.push((Monomial::new(t.exp.clone()), c));
        }
        terms.push(out);
    }
    let dup = |j: usize, e: equidim::Error| field(format!("polys[{j}]"), e.to_string());
    if complex {
        let polys = terms
            .into_iter()
            .enumerate()
            .map(|(j, ts)| SparsePoly::from_terms(n, ts.into_iter().map(|(m, c)| (m, c.to_complex()))).map_err(|e| dup(j, e)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InputSystem::Complex(SparseSystem::new(n, polys).map_err(|e| field("polys", e.to_string()))?))
    } else {
        let polys = terms
            .into_iter()
            .enumerate()
            .map(|(j, ts)| {
                SparsePoly::from_terms(
                    n,
                    ts.into_iter().map(|(m, c)| match c {
                        CoeffValue::Rational(r) => (m, r),
                        CoeffValue::Complex(_) => unreachable!(),
                    }),
                )
                .map_err(|e| dup(j, e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(InputSystem::Rational(SparseSystem::new(n, polys).map_err(|e| field("polys", e.to_string()))?))
    }
}

enum CoeffValue {
    Rational(BigRational),
    Complex(Complex64),
}

impl CoeffValue {
    fn is_zero(&self) -> bool {
        match self {
            CoeffValue::Rational(r) => r.is_zero(),
            CoeffValue::Complex(c) => c.norm() == 0.0,
        }
    }

    fn to_complex(&self) -> Complex64 {
        match self {
            CoeffValue::Rational(r) => equidim::lattice::Coefficient::to_complex(r),
            CoeffValue::Complex(c) => *c,
        }
    }
}

/// Canonical file: terms in lexicographic exponent order.
pub fn system_to_file(f: &InputSystem) -> SystemFile {
    let polys = match f {
        InputSystem::Rational(f) => f
            .polys()
            .iter()
            .map(|p| PolyFile {
                terms: p
                    .terms()
                    .map(|(m, c)| TermFile { exp: m.exponents().to_vec(), coeff: CoeffFile::Rational(c.to_string()) })
                    .collect(),
            })
            .collect(),
        InputSystem::Complex(f) => f
            .polys()
            .iter()
            .map(|p| PolyFile {
                terms: p
                    .terms()
                    .map(|(m, c)| TermFile { exp: m.exponents().to_vec(), coeff: CoeffFile::Complex([c.re, c.im]) })
                    .collect(),
            })
            .collect(),
    };
    SystemFile { format: FORMAT_VERSION, n: f.nvars(), polys }
}

pub fn system_to_json(f: &InputSystem) -> String {
    serde_json::to_string_pretty(&system_to_file(f)).expect("plain data serializes")
}

fn parse_unipoly(coeffs: &[String], path: &str) -> Result<UniPoly, FormatError> {
    Ok(UniPoly::new(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rational(s, &format!("{path}[{i}]")))
            .collect::<Result<_, _>>()?,
    ))
}

/// `q = ["1"]` encodes the empty set.
pub fn parse_resolution(text: &str) -> Result<(Resolution, Vec<BigRational>), FormatError> {
    let file: ResolutionFile = from_json(text)?;
    check_version(file.format)?;
    if file.ell.len() != file.n {
        return Err(field("ell", format!("expected {} entries, found {}", file.n, file.ell.len())));
    }
    let ell: Vec<BigRational> =
        file.ell.iter().enumerate().map(|(i, s)| parse_rational(s, &format!("ell[{i}]"))).collect::<Result<_, _>>()?;
    let q = parse_unipoly(&file.q, "q")?;
    if q == UniPoly::one() {
        return Ok((Resolution::Empty, ell));
    }
    if file.v.len() != file.n {
        return Err(field("v", format!("expected {} parametrizations, found {}", file.n, file.v.len())));
    }
    let v = file
        .v
        .iter()
        .enumerate()
        .map(|(i, c)| parse_unipoly(c, &format!("v[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let res = GeometricResolution::new(ell.clone(), q, v).map_err(|e| field("q", e.to_string()))?;
    Ok((Resolution::Points(res), ell))
}

pub fn resolution_to_file(res: &Resolution, ell: &[BigRational]) -> ResolutionFile {
    let n = ell.len();
    let (q, v) = match res {
        Resolution::Points(r) => (r.q().to_strings(), r.v().iter().map(UniPoly::to_strings).collect()),
        Resolution::Empty => (vec!["1".to_string()], vec![Vec::new(); n]),
    };
    ResolutionFile { format: FORMAT_VERSION, n, ell: ell.iter().map(ToString::to_string).collect(), q, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = r#"{"format": 1, "n": 2, "polys": [{"terms": [{"exp": [1, 0], "coeff": "1/3"}, {"exp": [0, 0], "coeff": "-1"}]}]}"#;

    #[test]
    fn exact_coefficients_round_trip() {
        let f = parse_system(LINE).unwrap();
        let InputSystem::Rational(r) = &f else { panic!() };
        let third = r.polys()[0].coefficient(&Monomial::new(vec![1, 0])).unwrap();
        assert_eq!(third, &BigRational::new(1.into(), 3.into()));
        let text = system_to_json(&f);
        assert!(text.contains("\"1/3\""));
        assert_eq!(parse_system(&text).unwrap(), f);
    }

    #[test]
    fn terms_are_sorted() {
        let f = parse_system(LINE).unwrap();
        let file = system_to_file(&f);
        assert_eq!(file.polys[0].terms[0].exp, vec![0, 0]);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_system(r#"{"format": 1, "n": 2, "polys": []}"#), Err(FormatError::Field { .. })));
        let bad_len = r#"{"format": 1, "n": 2, "polys": [{"terms": [{"exp": [1], "coeff": "1"}]}]}"#;
        let e = parse_system(bad_len).unwrap_err().to_string();
        assert!(e.contains("polys[0].terms[0].exp"), "{e}");
        let zero = r#"{"format": 1, "n": 1, "polys": [{"terms": [{"exp": [1], "coeff": "0"}]}]}"#;
        assert!(parse_system(zero).unwrap_err().to_string().contains("zero"));
        let dup = r#"{"format": 1, "n": 1, "polys": [{"terms": [{"exp": [1], "coeff": "1"}, {"exp": [1], "coeff": "2"}]}]}"#;
        assert!(parse_system(dup).unwrap_err().to_string().contains("duplicate"));
        let typo = r#"{"format": 1, "n": 1, "polys": [{"terms": [{"exp": [1], "coef": "1"}]}]}"#;
        let e = parse_system(typo).unwrap_err().to_string();
        assert!(e.contains("polys[0].terms[0]"), "{e}");
        let version = r#"{"format": 2, "n": 1, "polys": [{"terms": [{"exp": [1], "coeff": "1"}]}]}"#;
        assert!(parse_system(version).is_err());
    }

    #[test]
    fn complex_coefficients() {
        let text = r#"{"format": 1, "n": 1, "polys": [{"terms": [{"exp": [2], "coeff": [1.0, -2.0]}, {"exp": [0], "coeff": "3"}]}]}"#;
        let InputSystem::Complex(f) = parse_system(text).unwrap() else { panic!() };
        assert_eq!(f.polys()[0].coefficient(&Monomial::zero(1)), Some(&Complex64::new(3.0, 0.0)));
    }

    #[test]
    fn empty_resolution() {
        let text = r#"{"format": 1, "n": 2, "ell": ["1", "2"], "q": ["1"], "v": [[], []]}"#;
        let (res, ell) = parse_resolution(text).unwrap();
        assert!(res.is_empty());
        assert_eq!(serde_json::to_value(resolution_to_file(&res, &ell)).unwrap(), serde_json::from_str::<serde_json::Value>(text).unwrap());
    }
}

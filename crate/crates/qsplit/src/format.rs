//! Text formats for connections, matrices, series, rings and complexes.
//!
//! All files are TOML. Scalars are strings `"a"` or `"a/b"`; integer
//! matrices in complex files use TOML integers.

use std::collections::BTreeMap;
use std::ops::Range;

use num_bigint::BigInt;
use qsplit_core::cyclic::{EquivariantComplex, GradedComplex, IntMatrix, Level};
use qsplit_core::ring::{BasisClass, ProductEntry, QElement, RingData};
use qsplit_core::{ConnectionGerm, Convention, Matrix, Scalar, TruncatedSeries};
use serde::{Deserialize, Serialize};
use toml::Spanned;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    At { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, FormatError>;

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

fn at(text: &str, span: Range<usize>, message: impl Into<String>) -> FormatError {
    FormatError::At { line: line_of(text, span), message: message.into() }
}

fn parse_toml<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    toml::from_str(text).map_err(|e| match e.span() {
        Some(span) => at(text, span, e.message().trim()),
        None => FormatError::Invalid(e.message().trim().to_string()),
    })
}

fn scalar(text: &str, s: &Spanned<String>) -> Result<Scalar> {
    s.get_ref().parse().map_err(|_| at(text, s.span(), format!("not a rational number: {:?}", s.get_ref())))
}

fn matrix(text: &str, rows: &Spanned<Vec<Vec<Spanned<String>>>>) -> Result<Matrix> {
    let parsed = rows
        .get_ref()
        .iter()
        .map(|row| row.iter().map(|x| scalar(text, x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed).map_err(|e| at(text, rows.span(), e.to_string()))
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

fn to_toml<T: Serialize>(doc: &T) -> String {
    toml::to_string(doc).expect("documents serialize")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
struct ConnectionDoc<S> {
    size: usize,
    convention: S,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation: Option<usize>,
    #[serde(rename = "coefficient", default)]
    coefficients: Vec<CoefficientDoc<S>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientDoc<S> {
    index: usize,
    rows: Spanned<Vec<Vec<S>>>,
}

/// A connection `+-tau^2 d/dtau + A^0 + A^1 tau + ...` as displayed,
/// with an optional preferred truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionFile {
    pub connection: ConnectionGerm,
    pub truncation: Option<usize>,
}

pub fn parse_connection(text: &str) -> Result<ConnectionFile> {
    let doc: ConnectionDoc<Spanned<String>> = parse_toml(text)?;
    let convention: Convention =
        doc.convention.get_ref().parse().map_err(|_| at(text, doc.convention.span(), "convention must be \"plus\" or \"minus\""))?;
    let top = doc.coefficients.iter().map(|c| c.index).max().unwrap_or(0);
    let mut coeffs = vec![None; top + 1];
    for c in &doc.coefficients {
        let m = matrix(text, &c.rows)?;
        if m.rows() != doc.size || m.cols() != doc.size {
            return Err(at(text, c.rows.span(), format!("coefficient {} is {}x{}, expected {n}x{n}", c.index, m.rows(), m.cols(), n = doc.size)));
        }
        if coeffs[c.index].replace(m).is_some() {
            return Err(at(text, c.rows.span(), format!("coefficient {} given twice", c.index)));
        }
    }
    let coeffs = coeffs.into_iter().map(|m| m.unwrap_or_else(|| Matrix::zeros(doc.size, doc.size))).collect();
    let connection = ConnectionGerm::new(convention, coeffs).map_err(|e| FormatError::Invalid(e.to_string()))?;
    Ok(ConnectionFile { connection, truncation: doc.truncation })
}

pub fn write_connection(file: &ConnectionFile) -> String {
    let c = &file.connection;
    let coefficients = c
        .displayed_coeffs()
        .iter()
        .enumerate()
        .map(|(index, m)| CoefficientDoc { index, rows: Spanned::new(0..0, matrix_strings(m)) })
        .collect();
    let doc = ConnectionDoc { size: c.size(), convention: c.convention().name().to_string(), truncation: file.truncation, coefficients };
    to_toml(&doc)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc<S> {
    rows: Spanned<Vec<Vec<S>>>,
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let doc: MatrixDoc<Spanned<String>> = parse_toml(text)?;
    matrix(text, &doc.rows)
}

pub fn write_matrix(m: &Matrix) -> String {
    to_toml(&MatrixDoc { rows: Spanned::new(0..0, matrix_strings(m)) })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDoc<S> {
    coeffs: Vec<S>,
}

/// A series `c_0 + c_1 tau + ...`; the order is the last index given.
pub fn parse_series(text: &str) -> Result<TruncatedSeries> {
    let doc: SeriesDoc<Spanned<String>> = parse_toml(text)?;
    if doc.coeffs.is_empty() {
        return Err(FormatError::Invalid("a series needs at least one coefficient".into()));
    }
    let coeffs = doc.coeffs.iter().map(|c| scalar(text, c)).collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

pub fn write_series(s: &TruncatedSeries) -> String {
    to_toml(&SeriesDoc { coeffs: s.coeffs().iter().map(ToString::to_string).collect() })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
struct RingDoc<S> {
    meta: RingMeta<S>,
    basis: RingBasis<S>,
    c1: TermsDoc<S>,
    #[serde(rename = "product", default)]
    products: Vec<ProductDoc<S>>,
    #[serde(rename = "idempotent", default, skip_serializing_if = "Vec::is_empty")]
    idempotents: Vec<TermsDoc<S>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingMeta<S> {
    name: String,
    dim_c: i64,
    unit: S,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingBasis<S> {
    labels: Vec<S>,
    degrees: Spanned<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
struct TermsDoc<S> {
    #[serde(default)]
    terms: Vec<TermDoc<S>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc<S> {
    class: S,
    q: i64,
    coeff: S,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
struct ProductDoc<S> {
    left: S,
    right: S,
    #[serde(default)]
    terms: Vec<TermDoc<S>>,
}

pub fn parse_ring(text: &str) -> Result<RingData> {
    let doc: RingDoc<Spanned<String>> = parse_toml(text)?;
    let labels: Vec<&Spanned<String>> = doc.basis.labels.iter().collect();
    if labels.len() != doc.basis.degrees.get_ref().len() {
        return Err(at(text, doc.basis.degrees.span(), format!("{} labels but {} degrees", labels.len(), doc.basis.degrees.get_ref().len())));
    }
    let mut index = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.get_ref().clone(), i).is_some() {
            return Err(at(text, l.span(), format!("basis label {:?} repeated", l.get_ref())));
        }
    }
    let lookup = |s: &Spanned<String>| -> Result<usize> {
        index.get(s.get_ref()).copied().ok_or_else(|| at(text, s.span(), format!("unknown basis label {:?}", s.get_ref())))
    };
    let element = |terms: &[TermDoc<Spanned<String>>]| -> Result<QElement> {
        let mut x = QElement::zero();
        for t in terms {
            x.add_term(lookup(&t.class)?, t.q, scalar(text, &t.coeff)?);
        }
        Ok(x)
    };
    let basis = labels
        .iter()
        .zip(doc.basis.degrees.get_ref())
        .map(|(l, &degree)| BasisClass { label: l.get_ref().clone(), degree })
        .collect();
    let products = doc
        .products
        .iter()
        .map(|p| Ok(ProductEntry { i: lookup(&p.left)?, j: lookup(&p.right)?, value: element(&p.terms)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(RingData {
        name: doc.meta.name,
        dim_c: doc.meta.dim_c,
        basis,
        unit: lookup(&doc.meta.unit)?,
        c1: element(&doc.c1.terms)?,
        products,
        idempotents: doc.idempotents.iter().map(|t| element(&t.terms)).collect::<Result<Vec<_>>>()?,
    })
}

pub fn write_ring(r: &RingData) -> String {
    let labels: Vec<String> = r.basis.iter().map(|b| b.label.clone()).collect();
    let terms = |x: &QElement| -> Vec<TermDoc<String>> {
        x.terms().map(|(i, q, c)| TermDoc { class: labels[i].clone(), q, coeff: c.to_string() }).collect()
    };
    let doc = RingDoc {
        meta: RingMeta { name: r.name.clone(), dim_c: r.dim_c, unit: labels[r.unit].clone() },
        basis: RingBasis { labels: labels.clone(), degrees: Spanned::new(0..0, r.basis.iter().map(|b| b.degree).collect()) },
        c1: TermsDoc { terms: terms(&r.c1) },
        products: r
            .products
            .iter()
            .map(|p| ProductDoc { left: labels[p.i].clone(), right: labels[p.j].clone(), terms: terms(&p.value) })
            .collect(),
        idempotents: r.idempotents.iter().map(|x| TermsDoc { terms: terms(x) }).collect(),
    };
    to_toml(&doc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDoc {
    min_degree: i64,
    dims: Vec<usize>,
    #[serde(default)]
    differentials: Vec<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cocycle: Option<CocycleDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDoc {
    pub degree: i64,
    pub vector: Vec<i64>,
}

/// A bounded complex of free modules, optionally with a `sigma` action and a
/// distinguished cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexFile {
    pub complex: GradedComplex,
    pub sigma: Option<Vec<IntMatrix>>,
    pub cocycle: Option<(i64, Vec<BigInt>)>,
}

impl ComplexFile {
    /// The complex with its action at `level` (trivial when none is given).
    pub fn equivariant(&self, level: Level) -> std::result::Result<EquivariantComplex, qsplit_core::Error> {
        match &self.sigma {
            Some(s) => EquivariantComplex::new(self.complex.clone(), level, s.clone()),
            None => Ok(EquivariantComplex::trivial(self.complex.clone(), level)),
        }
    }
}

fn int_matrix(rows: &[Vec<i64>], expected_rows: usize, expected_cols: usize, what: &str) -> Result<IntMatrix> {
    let data: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    // an empty row list stands for a matrix with no rows
    let m = IntMatrix::from_rows(data, expected_cols).filter(|m| m.rows() == expected_rows || (rows.is_empty() && expected_rows == 0));
    m.ok_or_else(|| FormatError::Invalid(format!("{what} must be {expected_rows}x{expected_cols}")))
}

pub fn parse_complex(text: &str) -> Result<ComplexFile> {
    let doc: ComplexDoc = parse_toml(text)?;
    let n = doc.dims.len();
    if n == 0 {
        return Err(FormatError::Invalid("dims must list at least one degree".into()));
    }
    let ds = if doc.differentials.is_empty() && n > 1 {
        (0..n - 1).map(|k| IntMatrix::zeros(doc.dims[k + 1], doc.dims[k])).collect()
    } else {
        doc.differentials
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let (r, c) = (doc.dims.get(k + 1).copied().unwrap_or(0), doc.dims[k.min(n - 1)]);
                int_matrix(rows, r, c, &format!("differential {k}"))
            })
            .collect::<Result<Vec<_>>>()?
    };
    let complex = GradedComplex::new(doc.min_degree, doc.dims.clone(), ds).map_err(|e| FormatError::Invalid(e.to_string()))?;
    let sigma = doc
        .sigma
        .as_ref()
        .map(|ms| {
            if ms.len() != n {
                return Err(FormatError::Invalid(format!("sigma needs {n} matrices, found {}", ms.len())));
            }
            ms.iter().enumerate().map(|(k, rows)| int_matrix(rows, doc.dims[k], doc.dims[k], &format!("sigma {k}"))).collect()
        })
        .transpose()?;
    let cocycle = doc.cocycle.map(|c| (c.degree, c.vector.into_iter().map(BigInt::from).collect()));
    Ok(ComplexFile { complex, sigma, cocycle })
}

fn small(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| i64::try_from(x).expect("entries fit in i64")).collect()).collect()
}

pub fn write_complex(c: &ComplexFile) -> String {
    let g = &c.complex;
    let doc = ComplexDoc {
        min_degree: g.min_degree(),
        dims: g.dims().to_vec(),
        differentials: g.degrees().filter(|&q| q < g.max_degree()).map(|q| small(&g.differential(q))).collect(),
        sigma: c.sigma.as_ref().map(|s| s.iter().map(small).collect()),
        cocycle: c.cocycle.as_ref().map(|(degree, v)| CocycleDoc {
            degree: *degree,
            vector: v.iter().map(|x| i64::try_from(x).expect("entries fit in i64")).collect(),
        }),
    };
    to_toml(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsplit_core::reference::{blowup_connection, cp1_connection};
    use qsplit_core::ring::{blowup_slice_ring, cp1_ring, point_ring};

    #[test]
    fn connection_round_trip() {
        for c in [cp1_connection(), blowup_connection()] {
            let file = ConnectionFile { connection: c, truncation: Some(12) };
            let text = write_connection(&file);
            assert_eq!(parse_connection(&text).unwrap(), file);
        }
    }

    #[test]
    fn connection_errors_name_the_line() {
        let text = "size = 2\nconvention = \"minus\"\n\n[[coefficient]]\nindex = 0\nrows = [[\"1\", \"x\"], [\"0\", \"1\"]]\n";
        assert_eq!(parse_connection(text).unwrap_err(), FormatError::At { line: 6, message: "not a rational number: \"x\"".into() });
        let text = "size = 2\nconvention = \"sideways\"\n";
        assert!(matches!(parse_connection(text), Err(FormatError::At { line: 2, .. })));
        let text = "size = 2\nconvention = \"plus\"\n[[coefficient]]\nindex = 0\nrows = [[\"1\"]]\n";
        assert!(matches!(parse_connection(text), Err(FormatError::At { line: 5, .. })));
    }

    #[test]
    fn missing_coefficients_are_zero() {
        let text = "size = 1\nconvention = \"plus\"\n[[coefficient]]\nindex = 2\nrows = [[\"1/2\"]]\n";
        let c = parse_connection(text).unwrap().connection;
        assert!(c.a(0).is_zero() && c.a(1).is_zero());
        assert_eq!(c.a(2), Matrix::from_rows(vec![vec![Scalar::ratio(1, 2)]]).unwrap());
    }

    #[test]
    fn matrix_and_series_round_trip() {
        let m = Matrix::from_i64(&[&[1, 0], &[0, 0]]).scale(&Scalar::ratio(-3, 7));
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        let s = TruncatedSeries::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::ratio(1, 32)]);
        assert_eq!(parse_series(&write_series(&s)).unwrap(), s);
    }

    #[test]
    fn ring_round_trip() {
        for r in [cp1_ring(), point_ring(), blowup_slice_ring()] {
            assert_eq!(parse_ring(&write_ring(&r)).unwrap(), r);
        }
    }

    #[test]
    fn ring_unknown_label() {
        let mut text = write_ring(&cp1_ring());
        text = text.replacen("left = \"h\"", "left = \"k\"", 1);
        assert!(matches!(parse_ring(&text), Err(FormatError::At { .. })));
    }

    #[test]
    fn complex_round_trip() {
        let text = "min_degree = 1\ndims = [1, 1]\ndifferentials = [[[2]]]\n\n[cocycle]\ndegree = 2\nvector = [3]\n";
        let c = parse_complex(text).unwrap();
        assert_eq!(c.cocycle, Some((2, vec![BigInt::from(3)])));
        assert_eq!(parse_complex(&write_complex(&c)).unwrap(), c);
        let with_sigma = "min_degree = 0\ndims = [2]\nsigma = [[[0, 1], [1, 0]]]\n";
        let c = parse_complex(with_sigma).unwrap();
        assert_eq!(parse_complex(&write_complex(&c)).unwrap(), c);
        assert!(c.equivariant(Level::new(2, 1).unwrap()).is_ok());
        assert!(c.equivariant(Level::new(3, 1).unwrap()).is_err());
    }

    #[test]
    fn complex_shape_errors() {
        assert!(parse_complex("min_degree = 0\ndims = [1, 1]\ndifferentials = [[[1, 2]]]\n").is_err());
        assert!(parse_complex("min_degree = 0\ndims = [1, 1, 1]\ndifferentials = [[[1]], [[1]]]\n").is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2linalg::{express_in_row_space, BitMatrix, BitVector};
use crate::gf2m::{FieldElement, FieldSpec};

use super::moment_matrix;

/// A non-adaptive parity-search plan: `f` query sets over items `1..=n`.
///
/// Row `i` of `matrix` is the characteristic vector of query `i`, so the
/// answer to query `i` for a marked set `X` is the scalar product of that
/// row with the characteristic vector of `X`.
#[derive(Clone, Debug)]
pub struct QueryPlan {
    n: usize,
    d: usize,
    field: Option<FieldSpec>,
    column_elements: Vec<FieldElement>,
    matrix: BitMatrix,
    queries: Vec<Vec<usize>>,
    columns: Vec<BitVector>,
    // dm x f: moment rows as combinations of the query rows
    moment_map: Option<BitMatrix>,
}

impl QueryPlan {
    /// A plan with no field structure; only brute-force decoding applies.
    pub fn from_matrix(n: usize, d: usize, matrix: BitMatrix) -> Result<Self> {
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: matrix.ncols() });
        }
        Ok(Self::assemble(n, d, None, Vec::new(), matrix, None))
    }

    /// A plan whose item `j` carries the field element `column_elements[j-1]`.
    ///
    /// If every moment row lies in the row space of `matrix`, the
    /// coefficients expressing them are recorded for syndrome recovery.
    pub fn with_field(
        n: usize,
        d: usize,
        field: FieldSpec,
        column_elements: Vec<FieldElement>,
        matrix: BitMatrix,
    ) -> Result<Self> {
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: matrix.ncols() });
        }
        if column_elements.len() != n {
            return Err(Error::MalformedPlan(format!(
                "{} column elements for {n} items",
                column_elements.len()
            )));
        }
        let mut seen = vec![false; field.order() as usize];
        for &e in &column_elements {
            if e.is_zero() || !field.contains(e) {
                return Err(Error::MalformedPlan(format!("column element {} is not a nonzero element of {field}", e.0)));
            }
            if std::mem::replace(&mut seen[e.0 as usize], true) {
                return Err(Error::MalformedPlan(format!("column element {} repeated", e.0)));
            }
        }
        let moments = moment_matrix(&field, &column_elements, d);
        let independent = matrix.rank() == matrix.nrows();
        let moment_map = if independent {
            express_in_row_space(matrix.rows(), moments.rows())?
        } else {
            None
        };
        Ok(Self::assemble(n, d, Some(field), column_elements, matrix, moment_map))
    }

    fn assemble(
        n: usize,
        d: usize,
        field: Option<FieldSpec>,
        column_elements: Vec<FieldElement>,
        matrix: BitMatrix,
        moment_map: Option<BitMatrix>,
    ) -> Self {
        let queries = matrix.rows().iter().map(|r| r.ones_iter().map(|j| j + 1).collect()).collect();
        let columns = matrix.columns();
        QueryPlan { n, d, field, column_elements, matrix, queries, columns, moment_map }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of queries.
    #[inline]
    pub fn f(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn field(&self) -> Option<&FieldSpec> {
        self.field.as_ref()
    }

    pub fn column_elements(&self) -> &[FieldElement] {
        &self.column_elements
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Query sets as sorted 1-based item indices.
    pub fn queries(&self) -> &[Vec<usize>] {
        &self.queries
    }

    /// Column `j` (0-based) of the query matrix: the answer vector of item `j+1` alone.
    pub fn column(&self, j: usize) -> &BitVector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[BitVector] {
        &self.columns
    }

    pub(crate) fn moment_map(&self) -> Option<&BitMatrix> {
        self.moment_map.as_ref()
    }

    /// Whether `d*m <= n < 2^m` holds. Plans without a field return `None`.
    pub fn within_theorem_hypothesis(&self) -> Option<bool> {
        self.field.map(|f| {
            let m = f.degree() as usize;
            self.d * m <= self.n && self.n < (1usize << m)
        })
    }

    pub fn to_file(&self) -> PlanFile {
        PlanFile {
            n: self.n,
            d: self.d,
            m: self.field.map(|f| f.degree()),
            poly: self.field.map(|f| f.reduction_poly()),
            column_elements: self.column_elements.iter().map(|e| e.0).collect(),
            queries: self.queries.clone(),
            matrix: self.matrix.rows().iter().map(BitVector::to_bit_string).collect(),
        }
    }

    /// Canonical JSON text; identical plans give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("plan serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PlanFile = serde_json::from_str(text)?;
        file.into_plan()
    }
}

/// On-disk plan layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub n: usize,
    pub d: usize,
    pub m: Option<u32>,
    pub poly: Option<u32>,
    #[serde(default)]
    pub column_elements: Vec<u32>,
    pub queries: Vec<Vec<usize>>,
    pub matrix: Vec<String>,
}

impl PlanFile {
    pub fn into_plan(self) -> Result<QueryPlan> {
        let rows = self
            .matrix
            .iter()
            .map(|s| BitVector::parse_bit_string(s))
            .collect::<Result<Vec<_>>>()?;
        let matrix = BitMatrix::from_rows(self.n, rows)
            .map_err(|e| Error::MalformedPlan(format!("matrix rows must have {} columns ({e})", self.n)))?;
        if self.queries.len() != matrix.nrows() {
            return Err(Error::MalformedPlan(format!(
                "{} queries but {} matrix rows",
                self.queries.len(),
                matrix.nrows()
            )));
        }
        for (i, (q, row)) in self.queries.iter().zip(matrix.rows()).enumerate() {
            let support: Vec<usize> = row.ones_iter().map(|j| j + 1).collect();
            if *q != support {
                return Err(Error::MalformedPlan(format!("query {} does not match matrix row {}", i + 1, i + 1)));
            }
        }
        match (self.m, self.poly) {
            (None, None) => {
                if !self.column_elements.is_empty() {
                    return Err(Error::MalformedPlan("column elements given without a field".into()));
                }
                QueryPlan::from_matrix(self.n, self.d, matrix)
            }
            (Some(m), Some(poly)) => {
                let field = FieldSpec::with_poly(m, poly)?;
                let elements = self.column_elements.into_iter().map(FieldElement).collect();
                QueryPlan::with_field(self.n, self.d, field, elements, matrix)
            }
            _ => Err(Error::MalformedPlan("m and poly must be given together".into())),
        }
    }
}

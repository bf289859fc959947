//! The nested norms `(Σ⊕X)_E` and `E(F)`.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sequence::LatticeNorm;

/// A dense `rows × cols` matrix, row-major. Row index runs over `E`, column
/// index over `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Degenerate("empty matrix".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {bad}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Degenerate("ragged matrix rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.cols..(k + 1) * self.cols]
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for k in 0..self.rows {
            w.write_record(self.row(k).iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(reader);
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad matrix entry `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}

/// `‖Σ_i ‖x_i‖ e_i‖_E` given the block norms `‖x_i‖`.
pub fn sum_oplus_norm<N: LatticeNorm + ?Sized>(block_norms: &[f64], e: &N) -> Result<f64> {
    if let Some(&bad) = block_norms.iter().find(|v| !(**v >= 0.0)) {
        return Err(crate::error::invalid("block norm", bad, "block norms must be nonnegative"));
    }
    Ok(e.norm(block_norms))
}

/// `‖A‖_{E(F)}`: `F` on each row, then `E` on the row norms.
pub fn ef_norm<E, F>(a: &Matrix, e: &E, f: &F) -> f64
where
    E: LatticeNorm + ?Sized,
    F: LatticeNorm + ?Sized,
{
    let row_norms: Vec<f64> = (0..a.rows()).map(|k| f.norm(a.row(k))).collect();
    e.norm(&row_norms)
}

/// `E(F)` as a norm on row-major flattened matrices of a fixed shape.
#[derive(Clone, Copy, Debug)]
pub struct EfNorm<'a, E: ?Sized, F: ?Sized> {
    pub rows: usize,
    pub cols: usize,
    pub e: &'a E,
    pub f: &'a F,
}

impl<E: LatticeNorm + ?Sized, F: LatticeNorm + ?Sized> LatticeNorm for EfNorm<'_, E, F> {
    fn norm(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.rows * self.cols, "matrix shape");
        let row_norms: Vec<f64> = x.chunks(self.cols).map(|r| self.f.norm(r)).collect();
        self.e.norm(&row_norms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::SequenceNorm;

    #[test]
    fn sum_oplus_examples() {
        let l1 = SequenceNorm::lp(1.0).unwrap();
        let l2 = SequenceNorm::lp(2.0).unwrap();
        assert_eq!(sum_oplus_norm(&[1.0, 2.5, 0.5], &l1).unwrap(), 4.0);
        assert_eq!(sum_oplus_norm(&[3.0], &l2).unwrap(), 3.0);
        assert_eq!(sum_oplus_norm(&[1.0, 1.0], &l2).unwrap(), 2f64.sqrt());
        assert!(sum_oplus_norm(&[1.0, -1.0], &l1).is_err());
    }

    #[test]
    fn ef_examples() {
        let l1 = SequenceNorm::lp(1.0).unwrap();
        let l2 = SequenceNorm::lp(2.0).unwrap();
        let a = Matrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 3.0]]).unwrap();
        assert_eq!(ef_norm(&a, &l1, &l1), 6.5);
        let mut single = Matrix::zeros(3, 2).unwrap();
        single.data[3] = -4.0;
        let l17 = SequenceNorm::lp(1.7).unwrap();
        assert_eq!(ef_norm(&single, &l17, &l2), 4.0);
        assert_eq!(ef_norm(&Matrix::identity(2).unwrap(), &l2, &l1), 2f64.sqrt());
    }

    #[test]
    fn ef_is_composition_of_row_norms() {
        let e = SequenceNorm::lp(1.3).unwrap();
        let f = SequenceNorm::lp(1.9).unwrap();
        let a = Matrix::from_rows(&[vec![1.0, -2.0, 0.1], vec![0.5, 3.0, -0.7]]).unwrap();
        let rows: Vec<f64> = (0..2).map(|k| f.norm(a.row(k))).collect();
        assert_eq!(ef_norm(&a, &e, &f), sum_oplus_norm(&rows, &e).unwrap());
        let view = EfNorm { rows: 2, cols: 3, e: &e, f: &f };
        assert_eq!(view.norm(a.as_slice()), ef_norm(&a, &e, &f));
    }

    #[test]
    fn matrix_validation_and_csv() {
        assert!(Matrix::new(0, 3, vec![]).is_err());
        assert!(Matrix::new(2, 2, vec![1.0; 3]).is_err());
        assert!(Matrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        let a = Matrix::from_rows(&[vec![1.0, -2.5e-3], vec![0.0, 7.0]]).unwrap();
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "1,-0.0025\n0,7\n");
        assert_eq!(Matrix::read_csv(buf.as_slice()).unwrap(), a);
    }
}

//! Bit and LLR matrices laid out as `L` layers (rows) by `M_bit` positions
//! (columns).

use super::St2dError;

#[derive(Debug, Clone, PartialEq)]
pub struct Trellis<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// The unit of transmission: one coded bit per (layer, position).
pub type CodewordTrellis = Trellis<u8>;
/// The unit of reception: one LLR per (layer, position).
pub type LlrTrellis = Trellis<f64>;

impl<T: Clone> Trellis<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Trellis {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, St2dError> {
        if data.len() != rows * cols {
            return Err(St2dError::Dimension(format!(
                "{} values for a {rows}x{cols} trellis",
                data.len()
            )));
        }
        Ok(Trellis { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.data[r * self.cols + c].clone()).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[T]) {
        debug_assert_eq!(values.len(), self.rows);
        for (r, v) in values.iter().enumerate() {
            self.data[r * self.cols + c] = v.clone();
        }
    }

    pub fn transposed(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            data.extend((0..self.rows).map(|r| self.data[r * self.cols + c].clone()));
        }
        Trellis {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Trellis<U> {
        Trellis {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl LlrTrellis {
    /// Hard decisions; a zero LLR decides 0.
    pub fn hard_decisions(&self) -> CodewordTrellis {
        self.map(|&l| crate::polar::hard_decision(l))
    }
}

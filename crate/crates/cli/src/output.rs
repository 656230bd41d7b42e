//! Deterministic emitters: one float formatting policy (17 significant
//! digits, lowercase e-notation) shared by the CSV and JSON writers so that
//! identical inputs always produce identical bytes.

/// 17 significant digits, lowercase scientific notation.
pub fn fmt_float(x: f64) -> String {
    debug_assert!(x.is_finite(), "non-finite value reached the writer");
    format!("{x:.16e}")
}

/// A time-series table: named columns of equal length; entries are finite
/// floats or empty (undefined) cells.
pub struct Table {
    columns: Vec<(String, Vec<Option<f64>>)>,
}

#[derive(Debug)]
pub enum TableError {
    NonFinite { column: String, row: usize },
    RaggedColumns,
}

impl std::fmt::Display for TableError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TableError::NonFinite { column, row } => {
                write!(f, "non-finite value in column {column}, row {row}")
            }
            TableError::RaggedColumns => write!(f, "columns have different lengths"),
        }
    }
}

impl Table {
    pub fn new(names: &[&str]) -> Self {
        Self {
            columns: names.iter().map(|n| (n.to_string(), Vec::new())).collect(),
        }
    }

    /// Appends one row; `None` marks an undefined cell (empty in CSV, null
    /// in JSON).
    pub fn push_row(&mut self, row: &[Option<f64>]) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch");
        for (column, value) in self.columns.iter_mut().zip(row) {
            column.1.push(*value);
        }
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, v)| v.len())
    }

    fn check(&self) -> Result<(), TableError> {
        let rows = self.rows();
        for (name, values) in &self.columns {
            if values.len() != rows {
                return Err(TableError::RaggedColumns);
            }
            for (row, value) in values.iter().enumerate() {
                if let Some(x) = value {
                    if !x.is_finite() {
                        return Err(TableError::NonFinite {
                            column: name.clone(),
                            row,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// One header row, comma-separated values, no quoting.
    pub fn to_csv(&self) -> Result<String, TableError> {
        self.check()?;
        let mut out = String::new();
        let names: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.rows() {
            let cells: Vec<String> = self
                .columns
                .iter()
                .map(|(_, values)| values[row].map(fmt_float).unwrap_or_default())
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    /// Columns mirrored as arrays under their CSV names, in column order.
    pub fn to_json(&self, scenario: &str) -> Result<String, TableError> {
        self.check()?;
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"scenario\": \"{scenario}\",\n"));
        out.push_str("  \"columns\": {\n");
        for (index, (name, values)) in self.columns.iter().enumerate() {
            let rendered: Vec<String> = values
                .iter()
                .map(|v| v.map(fmt_float).unwrap_or_else(|| "null".to_string()))
                .collect();
            out.push_str(&format!("    \"{name}\": [{}]", rendered.join(", ")));
            out.push_str(if index + 1 < self.columns.len() {
                ",\n"
            } else {
                "\n"
            });
        }
        out.push_str("  }\n}\n");
        Ok(out)
    }
}

//! Blank-row-separated CSV block splitting and label detection.

use std::path::Path;

use super::IoError;
use crate::matrix::Mat;

/// One rectangular grid of raw cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    cells: Vec<Vec<String>>,
}

impl Block {
    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cols(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    pub fn cell(&self, r: usize, c: usize) -> &str {
        &self.cells[r][c]
    }

    pub fn cells(&self) -> &[Vec<String>] {
        &self.cells
    }
}

/// A CSV file split into maximal runs of non-empty rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvBlockFile {
    blocks: Vec<Block>,
    source_path: String,
}

impl CsvBlockFile {
    /// Split CSV text into blocks. Rows whose cells are all empty after
    /// trimming separate blocks; trailing empty columns are dropped per
    /// block and short rows padded, so the grids are rectangular.
    pub fn parse_str(text: &str, source_path: &str) -> Result<Self, IoError> {
        // Spreadsheet exports often lead with a UTF-8 byte order mark.
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        // The csv crate drops fully empty lines, so the block structure has
        // to be recovered before record parsing. Lines are split manually
        // (quote-aware, in case a label embeds a newline) and consecutive
        // non-blank lines form one csv-parsed segment.
        let mut segments: Vec<Vec<&str>> = Vec::new();
        let mut current: Vec<&str> = Vec::new();
        for line in split_lines_quote_aware(text) {
            if is_blank_line(line) {
                if !current.is_empty() {
                    segments.push(std::mem::take(&mut current));
                }
            } else {
                current.push(line);
            }
        }
        if !current.is_empty() {
            segments.push(current);
        }

        let mut blocks = Vec::new();
        for segment in segments {
            let chunk = segment.join("\n");
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .from_reader(chunk.as_bytes());
            let mut rows: Vec<Vec<String>> = Vec::new();
            for record in reader.records() {
                let record = record.map_err(|e| IoError::Read {
                    path: source_path.to_string(),
                    detail: e.to_string(),
                })?;
                rows.push(record.iter().map(|c| c.trim().to_string()).collect());
            }
            if !rows.is_empty() {
                blocks.push(finish_block(rows));
            }
        }

        Ok(CsvBlockFile {
            blocks,
            source_path: source_path.to_string(),
        })
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::Read {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
        CsvBlockFile::parse_str(&text, &path.display().to_string())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }
}

/// Split into lines at newlines that are not inside a quoted field.
fn split_lines_quote_aware(text: &str) -> Vec<&str> {
    let mut lines = Vec::new();
    let mut in_quotes = false;
    let mut start = 0;
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'"' => in_quotes = !in_quotes,
            b'\n' if !in_quotes => {
                lines.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < text.len() {
        lines.push(&text[start..]);
    }
    lines
}

/// A line is blank when it contains only separators and whitespace.
fn is_blank_line(line: &str) -> bool {
    line.chars().all(|c| matches!(c, ',' | ' ' | '\t' | '\r'))
}

fn finish_block(mut rows: Vec<Vec<String>>) -> Block {
    // Drop trailing empty cells, then pad to the widest row.
    for row in rows.iter_mut() {
        while row.last().is_some_and(|c| c.is_empty()) {
            row.pop();
        }
    }
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    for row in rows.iter_mut() {
        row.resize(width, String::new());
    }
    Block { cells: rows }
}

fn parse_number(cell: &str) -> Option<f64> {
    let v: f64 = cell.trim().parse().ok()?;
    v.is_finite().then_some(v)
}

/// A block resolved into an optional label row/column and a numeric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledBlock {
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
    pub values: Mat,
}

/// Interpret a block as a numeric table with optional labels.
///
/// The first row (column) is treated as labels when any of its cells fails
/// to parse as a finite number; an all-numeric block is label-free. Cell
/// positions in errors are 1-based within the block; `block_no` is 1-based
/// within the file.
pub fn parse_labeled_numeric(block: &Block, block_no: usize) -> Result<LabeledBlock, IoError> {
    let (rows, cols) = (block.rows(), block.cols());
    if rows == 0 || cols == 0 {
        return Err(IoError::EmptyBlock { block: block_no });
    }

    let numeric = |r: usize, c: usize| parse_number(block.cell(r, c)).is_some();

    // Vector special cases: a single row or column whose leading cell is a
    // label while the rest are numeric.
    if rows == 1 && cols > 1 && !numeric(0, 0) && (1..cols).all(|c| numeric(0, c)) {
        let values: Vec<f64> = (1..cols)
            .map(|c| parse_number(block.cell(0, c)).unwrap())
            .collect();
        return Ok(LabeledBlock {
            row_labels: Some(vec![block.cell(0, 0).to_string()]),
            col_labels: None,
            values: Mat::from_vec(1, cols - 1, values),
        });
    }
    if cols == 1 && rows > 1 && !numeric(0, 0) && (1..rows).all(|r| numeric(r, 0)) {
        let values: Vec<f64> = (1..rows)
            .map(|r| parse_number(block.cell(r, 0)).unwrap())
            .collect();
        return Ok(LabeledBlock {
            row_labels: None,
            col_labels: Some(vec![block.cell(0, 0).to_string()]),
            values: Mat::from_vec(rows - 1, 1, values),
        });
    }

    let header_row = rows > 1 && (1..cols).any(|c| !numeric(0, c));
    let header_col = cols > 1 && (1..rows).any(|r| !numeric(r, 0));

    let (r0, c0) = (usize::from(header_row), usize::from(header_col));
    if rows == r0 || cols == c0 {
        return Err(IoError::EmptyBlock { block: block_no });
    }
    let mut data = Vec::with_capacity((rows - r0) * (cols - c0));
    for r in r0..rows {
        for c in c0..cols {
            match parse_number(block.cell(r, c)) {
                Some(v) => data.push(v),
                None => {
                    return Err(IoError::NonNumericCell {
                        block: block_no,
                        row: r + 1,
                        col: c + 1,
                        content: block.cell(r, c).to_string(),
                    })
                }
            }
        }
    }
    let values = Mat::from_vec(rows - r0, cols - c0, data);
    let col_labels = header_row.then(|| {
        (c0..cols)
            .map(|c| block.cell(0, c).to_string())
            .collect::<Vec<_>>()
    });
    let row_labels = header_col.then(|| {
        (r0..rows)
            .map(|r| block.cell(r, 0).to_string())
            .collect::<Vec<_>>()
    });
    Ok(LabeledBlock {
        row_labels,
        col_labels,
        values,
    })
}

impl LabeledBlock {
    /// Row labels or generated `prefix1..prefixN` fallbacks.
    pub fn row_labels_or(&self, prefix: &str) -> Vec<String> {
        match &self.row_labels {
            Some(l) => l.clone(),
            None => (0..self.values.rows())
                .map(|i| format!("{prefix}{}", i + 1))
                .collect(),
        }
    }

    /// Column labels or generated `prefix1..prefixN` fallbacks.
    pub fn col_labels_or(&self, prefix: &str) -> Vec<String> {
        match &self.col_labels {
            Some(l) => l.clone(),
            None => (0..self.values.cols())
                .map(|i| format!("{prefix}{}", i + 1))
                .collect(),
        }
    }

    /// Flatten a 1 x k or k x 1 block into a vector.
    pub fn as_vector(&self, block_no: usize) -> Result<Vec<f64>, IoError> {
        let v = &self.values;
        if v.rows() == 1 {
            Ok(v.row(0).to_vec())
        } else if v.cols() == 1 {
            Ok(v.col(0))
        } else {
            Err(IoError::NotAVector {
                block: block_no,
                rows: v.rows(),
                cols: v.cols(),
            })
        }
    }
}

/// Extract a block of raw strings as a flat vector (used for the SBWM
/// worst/best criterion-name blocks).
pub fn block_as_string_vector(block: &Block, block_no: usize) -> Result<Vec<String>, IoError> {
    if block.rows() == 1 {
        Ok((0..block.cols())
            .map(|c| block.cell(0, c).to_string())
            .collect())
    } else if block.cols() == 1 {
        Ok((0..block.rows())
            .map(|r| block.cell(r, 0).to_string())
            .collect())
    } else {
        Err(IoError::NotAVector {
            block: block_no,
            rows: block.rows(),
            cols: block.cols(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_blank_rows_and_ignores_trailing_empties() {
        let text = "a,b,,\n1,2,,\n,,,\n3,4\n\n";
        let file = CsvBlockFile::parse_str(text, "test").unwrap();
        assert_eq!(file.len(), 2);
        assert_eq!(file.blocks()[0].cols(), 2);
        assert_eq!(file.blocks()[1].rows(), 1);
    }

    #[test]
    fn split_is_idempotent_under_reserialization() {
        let text = "1,2\n3,4\n\n5,6\n";
        let file = CsvBlockFile::parse_str(text, "t").unwrap();
        let rebuilt: String = file
            .blocks()
            .iter()
            .map(|b| {
                b.cells()
                    .iter()
                    .map(|r| r.join(","))
                    .collect::<Vec<_>>()
                    .join("\n")
            })
            .collect::<Vec<_>>()
            .join("\n\n");
        let again = CsvBlockFile::parse_str(&rebuilt, "t").unwrap();
        assert_eq!(file.blocks(), again.blocks());
    }

    #[test]
    fn crlf_input_is_accepted() {
        let text = "1,2\r\n3,4\r\n\r\n5,6\r\n";
        let file = CsvBlockFile::parse_str(text, "t").unwrap();
        assert_eq!(file.len(), 2);
    }

    #[test]
    fn utf8_bom_is_stripped() {
        let text = "\u{feff}1,2\n3,4\n";
        let file = CsvBlockFile::parse_str(text, "t").unwrap();
        assert_eq!(file.blocks()[0].cell(0, 0), "1");
    }

    fn block_of(text: &str) -> Block {
        CsvBlockFile::parse_str(text, "t").unwrap().blocks()[0].clone()
    }

    #[test]
    fn all_numeric_block_has_no_labels() {
        let b = block_of("1,2\n3,4\n");
        let parsed = parse_labeled_numeric(&b, 1).unwrap();
        assert!(parsed.row_labels.is_none());
        assert!(parsed.col_labels.is_none());
        assert_eq!(parsed.values.rows(), 2);
        assert_eq!(parsed.row_labels_or("A"), vec!["A1", "A2"]);
    }

    #[test]
    fn corner_plus_labels_detected() {
        let b = block_of(",C1,C2\nA,1,2\nB,3,4\n");
        let parsed = parse_labeled_numeric(&b, 1).unwrap();
        assert_eq!(parsed.col_labels.as_deref().unwrap(), ["C1", "C2"]);
        assert_eq!(parsed.row_labels.as_deref().unwrap(), ["A", "B"]);
        assert_eq!(parsed.values[(1, 0)], 3.0);
    }

    #[test]
    fn scientific_notation_parses() {
        let b = block_of("1e-3,2.5E2\n4,5\n");
        let parsed = parse_labeled_numeric(&b, 1).unwrap();
        assert_eq!(parsed.values[(0, 0)], 1e-3);
        assert_eq!(parsed.values[(0, 1)], 250.0);
    }

    #[test]
    fn non_numeric_interior_cell_is_an_error() {
        let b = block_of("1,2\n3,oops\n");
        let err = parse_labeled_numeric(&b, 2).unwrap_err();
        assert!(matches!(
            err,
            IoError::NonNumericCell {
                block: 2,
                row: 2,
                col: 2,
                ..
            }
        ));
    }

    #[test]
    fn nan_and_infinity_are_not_numbers() {
        // A NaN in the data corner is rejected, not silently treated as a label.
        let b = block_of("NaN,2\n3,4\n");
        assert!(matches!(
            parse_labeled_numeric(&b, 1),
            Err(IoError::NonNumericCell { row: 1, col: 1, .. })
        ));
        let b2 = block_of("1,2\n3,inf\n");
        assert!(matches!(
            parse_labeled_numeric(&b2, 1),
            Err(IoError::NonNumericCell { row: 2, col: 2, .. })
        ));
    }

    #[test]
    fn labeled_row_vector() {
        let b = block_of("p,0.1,0.9\n");
        let parsed = parse_labeled_numeric(&b, 1).unwrap();
        assert_eq!(parsed.values.cols(), 2);
        assert_eq!(parsed.as_vector(1).unwrap(), vec![0.1, 0.9]);
    }
}

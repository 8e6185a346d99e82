//! The first page of the quaternionic singularity spectral sequence.
//!
//! Filtering the infinite quaternionic projective space by its skeleta
//! gives `E^1_{p,q} = pi^s(q - 3p)`: a stem-table lookup per cell. Cells
//! with `q - 3p < 0` are trivial; cells past the table range are stored as
//! explicit unknowns rather than failures.

use std::fmt::Write as _;

use serde::Serialize;

use super::group::FinAbGroup;
use super::stems::StableStemTable;
use super::SpecSeqError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum E1Cell {
    Group(FinAbGroup),
    Unknown,
}

impl E1Cell {
    pub fn group(&self) -> Option<&FinAbGroup> {
        match self {
            E1Cell::Group(g) => Some(g),
            E1Cell::Unknown => None,
        }
    }
}

/// Grid `(p, q) -> E^1_{p,q}` for `0 <= p <= p_max`, `0 <= q <= q_max`.
///
/// Column 0 (the point of the filtration) is kept so the differential
/// enumerator can optionally treat it as a target; the printed layout and
/// the page contract start at column 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Page {
    p_max: u32,
    q_max: u32,
    cells: Vec<Vec<E1Cell>>, // cells[p][q]
}

/// Builds the page from the stem table. `p_max >= 1`.
pub fn build_e1_page(p_max: u32, q_max: u32, table: &StableStemTable) -> E1Page {
    assert!(p_max >= 1, "page needs at least one column");
    let cells = (0..=p_max)
        .map(|p| {
            (0..=q_max)
                .map(|q| {
                    let stem = i64::from(q) - 3 * i64::from(p);
                    if stem < 0 {
                        E1Cell::Group(FinAbGroup::trivial())
                    } else {
                        match table.stem(stem as u32) {
                            Ok(group) => E1Cell::Group(group.clone()),
                            Err(_) => E1Cell::Unknown,
                        }
                    }
                })
                .collect()
        })
        .collect();
    E1Page {
        p_max,
        q_max,
        cells,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct E1CellRecord {
    pub p: u32,
    pub q: u32,
    pub group: Option<String>,
}

impl E1Page {
    pub fn p_max(&self) -> u32 {
        self.p_max
    }

    pub fn q_max(&self) -> u32 {
        self.q_max
    }

    pub fn cell(&self, p: u32, q: u32) -> Option<&E1Cell> {
        self.cells.get(p as usize)?.get(q as usize)
    }

    /// The group at `(p, q)`, failing loudly on out-of-range or unknown
    /// cells.
    pub fn known_group(&self, p: u32, q: u32) -> Result<&FinAbGroup, SpecSeqError> {
        match self.cell(p, q) {
            None => Err(SpecSeqError::CellOutOfRange { p, q }),
            Some(E1Cell::Unknown) => {
                let stem = i64::from(q) - 3 * i64::from(p);
                Err(SpecSeqError::StemUnknown(stem as u32))
            }
            Some(E1Cell::Group(g)) => Ok(g),
        }
    }

    /// Flat cell list for JSON output, ordered by (p, q), columns >= 1.
    pub fn records(&self) -> Vec<E1CellRecord> {
        let mut out = Vec::new();
        for p in 1..=self.p_max {
            for q in 0..=self.q_max {
                let group = match &self.cells[p as usize][q as usize] {
                    E1Cell::Group(g) => Some(g.to_string()),
                    E1Cell::Unknown => None,
                };
                out.push(E1CellRecord { p, q, group });
            }
        }
        out
    }

    /// Text layout mirroring the usual chart: rows `q` descending, columns
    /// `p = 1..p_max`; cells strictly below the `q = 3p` line stay blank,
    /// unknown cells print `?`.
    pub fn render_text(&self) -> String {
        let display = |p: u32, q: u32| -> String {
            if i64::from(q) < 3 * i64::from(p) {
                return String::new();
            }
            match &self.cells[p as usize][q as usize] {
                E1Cell::Group(g) => g.to_string(),
                E1Cell::Unknown => "?".to_string(),
            }
        };
        let mut widths = vec![0usize; self.p_max as usize + 1];
        for p in 1..=self.p_max {
            let mut w = format!("p={p}").len();
            for q in 0..=self.q_max {
                w = w.max(display(p, q).len());
            }
            widths[p as usize] = w;
        }
        let label_width = format!("q={}", self.q_max).len();
        let mut out = String::new();
        for q in (0..=self.q_max).rev() {
            let _ = write!(out, "{:>label_width$} |", format!("q={q}"));
            for p in 1..=self.p_max {
                let _ = write!(
                    out,
                    " {:>width$}",
                    display(p, q),
                    width = widths[p as usize]
                );
            }
            out.push('\n');
        }
        let _ = write!(out, "{:>label_width$} |", "");
        for p in 1..=self.p_max {
            let _ = write!(
                out,
                " {:>width$}",
                format!("p={p}"),
                width = widths[p as usize]
            );
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page() -> E1Page {
        build_e1_page(3, 10, &StableStemTable::builtin())
    }

    #[test]
    fn cells_follow_the_stem_formula() {
        let page = page();
        assert_eq!(page.known_group(2, 6).unwrap(), &FinAbGroup::free(1));
        assert_eq!(page.known_group(1, 6).unwrap(), &FinAbGroup::cyclic(24));
        assert_eq!(page.known_group(1, 2).unwrap(), &FinAbGroup::trivial());
        assert_eq!(page.known_group(3, 9).unwrap(), &FinAbGroup::free(1));
        assert_eq!(page.known_group(1, 10).unwrap(), &FinAbGroup::cyclic(240));
    }

    #[test]
    fn unknown_cells_are_markers_not_failures() {
        let page = build_e1_page(1, 12, &StableStemTable::builtin());
        assert_eq!(page.cell(1, 11), Some(&E1Cell::Unknown));
        assert_eq!(page.known_group(1, 11), Err(SpecSeqError::StemUnknown(8)));
        assert_eq!(
            page.known_group(1, 13),
            Err(SpecSeqError::CellOutOfRange { p: 1, q: 13 })
        );
    }

    #[test]
    fn column_zero_is_the_sphere_column() {
        let page = page();
        assert_eq!(page.known_group(0, 7).unwrap(), &FinAbGroup::cyclic(240));
        assert_eq!(page.known_group(0, 0).unwrap(), &FinAbGroup::free(1));
    }

    #[test]
    fn text_layout_places_groups() {
        let text = page().render_text();
        let lines: Vec<&str> = text.lines().collect();
        // Rows run q=10 down to q=0, then the column label row.
        assert_eq!(lines.len(), 12);
        assert!(lines[0].starts_with("q=10"));
        assert!(lines[0].contains("Z_240"));
        assert!(lines[4].trim_start().starts_with("q=6"));
        assert!(lines[4].contains("Z_24"));
        assert!(lines.last().unwrap().contains("p=3"));
    }
}

//! Divisor bookkeeping for the differentials leaving the infinite-order
//! line of the first page.
//!
//! Every cell `(p, 3p)` is a copy of `Z`, and the product of the image
//! orders of the differentials leaving it equals the Hurewicz index
//! `h(p)` ([`segal_index`]). Each image order also divides the order of
//! its target cell on the first page, a deliberately conservative bound:
//! later-page subquotient orders are not computable from the table.
//! [`consistent_assignments`] enumerates every order tuple satisfying both
//! constraints; the odd-torsion audit then checks which conclusions are
//! forced across all of them.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::page::E1Page;
use super::SpecSeqError;

/// Index of the stable Hurewicz image in degree `4p`: `(2p)!` for even `p`,
/// `(2p)!/2` for odd `p`. Exact big-integer arithmetic.
pub fn segal_index(p: u32) -> BigUint {
    assert!(p >= 1, "column index must be positive");
    let mut value = BigUint::one();
    for i in 2..=(2 * u64::from(p)) {
        value *= BigUint::from(i);
    }
    if p % 2 == 1 {
        value /= BigUint::from(2u32);
    }
    value
}

/// Image orders `o_1..o_{p-1}` (or `o_1..o_p` with column 0 included) for
/// the differentials leaving the `Z` at column `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferentialAssignment {
    pub p: u32,
    pub orders: Vec<u64>,
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Finite orders of the target cells `(p - r, 3p + r - 1)` for
/// `r = 1..=r_last`.
fn target_orders(
    p: u32,
    page: &E1Page,
    include_point_column: bool,
) -> Result<Vec<u64>, SpecSeqError> {
    let r_last = if include_point_column {
        p
    } else {
        p.saturating_sub(1)
    };
    let mut orders = Vec::with_capacity(r_last as usize);
    for r in 1..=r_last {
        let (tp, tq) = (p - r, 3 * p + r - 1);
        let group = page.known_group(tp, tq)?;
        let order = group
            .order_u64()
            .ok_or(SpecSeqError::InfiniteTarget { p: tp, q: tq })?;
        orders.push(order);
    }
    Ok(orders)
}

/// Every order tuple with `o_r` dividing the target-cell order and
/// `prod o_r = h(p)`, in lexicographic order. An empty result is a valid
/// answer: it signals that no tuple satisfies the constraints.
pub fn consistent_assignments(
    p: u32,
    page: &E1Page,
) -> Result<Vec<DifferentialAssignment>, SpecSeqError> {
    consistent_assignments_with(p, page, false)
}

/// Like [`consistent_assignments`], optionally letting differentials run
/// into column 0 (the point of the filtration) for sensitivity analysis.
pub fn consistent_assignments_with(
    p: u32,
    page: &E1Page,
    include_point_column: bool,
) -> Result<Vec<DifferentialAssignment>, SpecSeqError> {
    assert!(p >= 1);
    let orders = target_orders(p, page, include_point_column)?;
    let index = segal_index(p);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(orders.len());
    search(&orders, &index, &BigUint::one(), &mut current, &mut out);
    Ok(out
        .into_iter()
        .map(|orders| DifferentialAssignment { p, orders })
        .collect())
}

fn search(
    targets: &[u64],
    index: &BigUint,
    partial: &BigUint,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    match targets.split_first() {
        None => {
            if partial == index {
                out.push(current.clone());
            }
        }
        Some((&order, rest)) => {
            for d in divisors(order) {
                let next = partial * BigUint::from(d);
                if index.is_multiple_of(&next) {
                    current.push(d);
                    search(rest, index, &next, current, out);
                    current.pop();
                }
            }
        }
    }
}

fn odd_part(mut n: u64) -> u64 {
    while n.is_multiple_of(2) {
        n /= 2;
    }
    n
}

fn ell_valuation(mut n: u64, ell: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(ell) {
        v += 1;
        n /= ell;
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct SegalTarget {
    pub r: u32,
    pub p: u32,
    pub q: u32,
    pub group: String,
    pub order: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialSummary {
    pub r: u32,
    pub target_order: u64,
    pub min_image_order: u64,
    pub max_image_order: u64,
    pub forced_odd_part: Option<u64>,
    pub surjective_in_all: bool,
    pub surjective_mod_two_in_all: bool,
    pub verdict: String,
}

/// Assignment enumeration for one column, with per-differential verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct SegalAuditReport {
    pub p: u32,
    pub index: String,
    pub include_point_column: bool,
    pub targets: Vec<SegalTarget>,
    pub assignments: Vec<Vec<u64>>,
    pub differentials: Vec<DifferentialSummary>,
    pub consistent: bool,
}

pub fn segal_audit(
    p: u32,
    page: &E1Page,
    include_point_column: bool,
) -> Result<SegalAuditReport, SpecSeqError> {
    let assignments = consistent_assignments_with(p, page, include_point_column)?;
    let r_last = if include_point_column {
        p
    } else {
        p.saturating_sub(1)
    };
    let mut targets = Vec::new();
    for r in 1..=r_last {
        let (tp, tq) = (p - r, 3 * p + r - 1);
        let group = page.known_group(tp, tq)?;
        targets.push(SegalTarget {
            r,
            p: tp,
            q: tq,
            group: group.to_string(),
            order: group.order_u64().expect("checked finite by enumeration"),
        });
    }
    let differentials = targets
        .iter()
        .map(|target| {
            let images: Vec<u64> = assignments
                .iter()
                .map(|a| a.orders[(target.r - 1) as usize])
                .collect();
            let min = images.iter().copied().min().unwrap_or(0);
            let max = images.iter().copied().max().unwrap_or(0);
            let odd_parts: Vec<u64> = {
                let mut parts: Vec<u64> = images.iter().map(|&o| odd_part(o)).collect();
                parts.sort_unstable();
                parts.dedup();
                parts
            };
            let forced_odd_part = (odd_parts.len() == 1).then(|| odd_parts[0]);
            let surjective_in_all = !images.is_empty() && images.iter().all(|&o| o == target.order);
            let surjective_mod_two_in_all = !images.is_empty()
                && images
                    .iter()
                    .all(|&o| odd_part(o) == odd_part(target.order));
            let verdict = if surjective_in_all {
                "surjective".to_string()
            } else if surjective_mod_two_in_all {
                "surjective mod 2-primary".to_string()
            } else {
                "unconstrained".to_string()
            };
            DifferentialSummary {
                r: target.r,
                target_order: target.order,
                min_image_order: min,
                max_image_order: max,
                forced_odd_part,
                surjective_in_all,
                surjective_mod_two_in_all,
                verdict,
            }
        })
        .collect();
    Ok(SegalAuditReport {
        p,
        index: segal_index(p).to_string(),
        include_point_column,
        targets,
        consistent: !assignments.is_empty(),
        assignments: assignments.into_iter().map(|a| a.orders).collect(),
        differentials,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorsionVerdict {
    /// Every consistent assignment kills the torsion.
    Forced,
    /// Some assignments kill it, some do not.
    Possible,
    /// No consistent assignment kills it.
    Impossible,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionCellVerdict {
    pub p: u32,
    pub q: u32,
    pub prime: u64,
    pub valuation_needed: u32,
    pub valuation_forced: u32,
    pub valuation_possible: u32,
    pub verdict: TorsionVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct OddTorsionReport {
    pub i_max: u32,
    pub cells: Vec<TorsionCellVerdict>,
    pub pass: bool,
    pub conclusion: String,
}

/// Checks that, in every consistent assignment, the straight-line
/// differential landing on each odd-torsion cell of total degree
/// `p + q <= i_max` carries at least the cell's full odd valuation, so no
/// odd torsion in that range can survive the first page.
pub fn odd_torsion_audit(i_max: u32, page: &E1Page) -> Result<OddTorsionReport, SpecSeqError> {
    let needed_p = ((i_max + 1) / 4).max(1);
    let needed_q = i_max.saturating_sub(1);
    if page.p_max() < needed_p || page.q_max() < needed_q {
        return Err(SpecSeqError::PageTooSmall {
            needed_p,
            needed_q,
            p_max: page.p_max(),
            q_max: page.q_max(),
        });
    }

    let mut assignment_cache: BTreeMap<u32, Vec<DifferentialAssignment>> = BTreeMap::new();
    let mut cells = Vec::new();
    let mut pass = true;

    for p in 1..=page.p_max().min(i_max) {
        for q in 0..=(i_max - p).min(page.q_max()) {
            let group = page.known_group(p, q)?.clone();
            for prime in group.odd_torsion_primes() {
                let needed = group.ell_valuation(prime);
                let stem = (i64::from(q) - 3 * i64::from(p)) as u32;
                // A cell receives a differential from the Z-line exactly
                // when its stem is 3 mod 4; the source column is p + r.
                let (forced, possible) = if stem % 4 == 3 {
                    let r = (stem + 1) / 4;
                    let source = p + r;
                    let assignments = match assignment_cache.entry(source) {
                        std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                        std::collections::btree_map::Entry::Vacant(v) => {
                            v.insert(consistent_assignments(source, page)?)
                        }
                    };
                    let valuations: Vec<u32> = assignments
                        .iter()
                        .map(|a| ell_valuation(a.orders[(r - 1) as usize], prime))
                        .collect();
                    (
                        valuations.iter().copied().min().unwrap_or(0),
                        valuations.iter().copied().max().unwrap_or(0),
                    )
                } else {
                    (0, 0)
                };
                let verdict = if forced >= needed {
                    TorsionVerdict::Forced
                } else if possible >= needed {
                    TorsionVerdict::Possible
                } else {
                    TorsionVerdict::Impossible
                };
                pass &= verdict == TorsionVerdict::Forced;
                cells.push(TorsionCellVerdict {
                    p,
                    q,
                    prime,
                    valuation_needed: needed,
                    valuation_forced: forced,
                    valuation_possible: possible,
                    verdict,
                });
            }
        }
    }

    let conclusion = if pass {
        format!("odd torsion is annihilated on the first page through total degree {i_max}")
    } else {
        format!("odd-torsion annihilation is NOT forced through total degree {i_max}")
    };
    Ok(OddTorsionReport {
        i_max,
        cells,
        pass,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specseq::page::build_e1_page;
    use crate::specseq::stems::StableStemTable;

    fn page() -> E1Page {
        build_e1_page(4, 16, &StableStemTable::builtin())
    }

    #[test]
    fn segal_index_values() {
        assert_eq!(segal_index(1), BigUint::from(1u32));
        assert_eq!(segal_index(2), BigUint::from(24u32));
        assert_eq!(segal_index(3), BigUint::from(360u32));
        assert_eq!(segal_index(4), BigUint::from(40320u32));
    }

    #[test]
    fn divisors_are_sorted_and_complete() {
        assert_eq!(divisors(24), vec![1, 2, 3, 4, 6, 8, 12, 24]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn column_one_has_the_empty_assignment() {
        let a = consistent_assignments(1, &page()).unwrap();
        assert_eq!(
            a,
            vec![DifferentialAssignment {
                p: 1,
                orders: vec![]
            }]
        );
    }

    #[test]
    fn column_two_forces_surjectivity() {
        let a = consistent_assignments(2, &page()).unwrap();
        assert_eq!(
            a,
            vec![DifferentialAssignment {
                p: 2,
                orders: vec![24]
            }]
        );
    }

    #[test]
    fn column_three_assignments() {
        let a = consistent_assignments(3, &page()).unwrap();
        let tuples: Vec<Vec<u64>> = a.iter().map(|x| x.orders.clone()).collect();
        assert_eq!(
            tuples,
            vec![vec![3, 120], vec![6, 60], vec![12, 30], vec![24, 15]]
        );
        for assignment in &a {
            let product: BigUint = assignment
                .orders
                .iter()
                .map(|&o| BigUint::from(o))
                .product();
            assert_eq!(product, segal_index(3));
            assert_eq!(odd_part(assignment.orders[0]), 3);
            assert_eq!(odd_part(assignment.orders[1]), 15);
        }
    }

    #[test]
    fn point_column_flag_widens_the_search() {
        let without = consistent_assignments_with(2, &page(), false).unwrap();
        let with = consistent_assignments_with(2, &page(), true).unwrap();
        assert_eq!(without.len(), 1);
        // Allowing a differential into column 0 (target pi^s(7), order 240)
        // spreads the index 24 over two factors and the forcing collapses.
        assert!(with.len() > 1);
        assert!(with.iter().all(|a| a.orders.len() == 2));
    }

    #[test]
    fn segal_audit_verdicts() {
        let report = segal_audit(2, &page(), false).unwrap();
        assert!(report.consistent);
        assert_eq!(report.assignments, vec![vec![24]]);
        assert_eq!(report.differentials[0].verdict, "surjective");

        let report = segal_audit(3, &page(), false).unwrap();
        assert_eq!(report.differentials[0].verdict, "surjective mod 2-primary");
        assert_eq!(report.differentials[1].verdict, "surjective mod 2-primary");
        assert_eq!(report.differentials[0].forced_odd_part, Some(3));
        assert_eq!(report.differentials[1].forced_odd_part, Some(15));
    }

    #[test]
    fn column_four_needs_the_eleven_stem() {
        assert_eq!(
            consistent_assignments(4, &page()),
            Err(SpecSeqError::StemUnknown(11))
        );
    }

    #[test]
    fn audit_passes_through_degree_eleven() {
        let page = build_e1_page(3, 10, &StableStemTable::builtin());
        let report = odd_torsion_audit(11, &page).unwrap();
        assert!(report.pass);
        let keys: Vec<(u32, u32, u64)> = report.cells.iter().map(|c| (c.p, c.q, c.prime)).collect();
        assert_eq!(keys, vec![(1, 6, 3), (1, 10, 3), (1, 10, 5), (2, 9, 3)]);
        assert!(report
            .cells
            .iter()
            .all(|c| c.verdict == TorsionVerdict::Forced));
    }

    #[test]
    fn audit_is_vacuous_at_low_degree() {
        let page = build_e1_page(1, 4, &StableStemTable::builtin());
        let report = odd_torsion_audit(4, &page).unwrap();
        assert!(report.pass);
        assert!(report.cells.is_empty());
    }

    #[test]
    fn audit_without_extension_stops_at_twelve() {
        let page = build_e1_page(3, 11, &StableStemTable::builtin());
        let err = odd_torsion_audit(12, &page).unwrap_err();
        assert_eq!(err, SpecSeqError::StemUnknown(8));
    }

    #[test]
    fn audit_requires_a_large_enough_page() {
        let page = build_e1_page(2, 10, &StableStemTable::builtin());
        assert!(matches!(
            odd_torsion_audit(11, &page),
            Err(SpecSeqError::PageTooSmall { .. })
        ));
    }

    fn extended_table() -> StableStemTable {
        let mut table = StableStemTable::builtin();
        let path =
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/stems_8_to_13.json");
        table.load_extension_file(&path).unwrap();
        table
    }

    #[test]
    fn extension_table_pushes_the_audit_past_twelve() {
        let table = extended_table();
        assert_eq!(table.max_stem(), 13);
        let page = build_e1_page(3, 12, &table);
        let report = odd_torsion_audit(13, &page).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn divisor_bound_is_too_coarse_past_its_range() {
        // Through total degree 15 the straight-line differentials alone can
        // no longer force the odd torsion to die: the 3-torsion of the
        // 10-stem cell receives no such differential at all, and the
        // valuation budget of h(4) spreads over three targets. The audit
        // must say so instead of overclaiming.
        let table = extended_table();
        let page = build_e1_page(4, 14, &table);
        let report = odd_torsion_audit(15, &page).unwrap();
        assert!(!report.pass);
        let verdict_of = |p: u32, q: u32, prime: u64| {
            report
                .cells
                .iter()
                .find(|c| c.p == p && c.q == q && c.prime == prime)
                .map(|c| c.verdict)
                .unwrap()
        };
        assert_eq!(verdict_of(1, 13, 3), TorsionVerdict::Impossible);
        assert_eq!(verdict_of(1, 14, 7), TorsionVerdict::Forced);
        assert_eq!(verdict_of(1, 14, 3), TorsionVerdict::Possible);
        assert_eq!(verdict_of(3, 12, 3), TorsionVerdict::Possible);
    }
}

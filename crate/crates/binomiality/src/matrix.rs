//! Sparse exact matrices over the scalar field: coefficient matrices of
//! polynomial systems, reduced row echelon form with a recorded
//! transformation, the partitioning-kernel-basis test, generator pruning, and
//! a brute-force row-space search used as a test oracle.

use crate::poly::{Monomial, PolySystem, Polynomial};
use crate::scalar::Scalar;

/// Sorted sparse row: (column, nonzero entry).
pub type SparseRow = Vec<(usize, Scalar)>;

/// A polynomial system written as `A * Psi(x)`: the rows of `A` against an
/// ordered column legend of monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientMatrix {
    pub legend: Vec<Monomial>,
    pub rows: Vec<SparseRow>,
}

impl CoefficientMatrix {
    pub fn ncols(&self) -> usize {
        self.legend.len()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn row_to_poly(&self, row: &SparseRow) -> Polynomial {
        let mut p = Polynomial::zero();
        for (col, c) in row {
            p.add_term(self.legend[*col].clone(), c.clone());
        }
        p
    }

    pub fn polys(&self) -> Vec<Polynomial> {
        self.rows.iter().map(|r| self.row_to_poly(r)).collect()
    }
}

/// Columns are the union of monomials of the system, sorted descending under
/// the system's monomial order, so row reduction pivots on leading monomials.
pub fn linearize(sys: &PolySystem) -> CoefficientMatrix {
    let mut legend: Vec<Monomial> = Vec::new();
    for g in &sys.gens {
        for (m, _) in g.terms() {
            if !legend.contains(m) {
                legend.push(m.clone());
            }
        }
    }
    legend.sort_by(|a, b| sys.ctx.order.cmp(b, a));
    linearize_with_legend(sys, legend)
}

/// Like [`linearize`] but with a caller-chosen column legend (it must cover
/// every monomial of the system).
pub fn linearize_with_legend(sys: &PolySystem, legend: Vec<Monomial>) -> CoefficientMatrix {
    let index: std::collections::HashMap<&Monomial, usize> =
        legend.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = sys
        .gens
        .iter()
        .map(|g| {
            let mut row: SparseRow = g
                .terms()
                .map(|(m, c)| (*index.get(m).expect("legend covers system"), c.clone()))
                .collect();
            row.sort_by_key(|(c, _)| *c);
            row
        })
        .collect();
    CoefficientMatrix { legend, rows }
}

fn row_get(row: &SparseRow, col: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// row_a - c * row_b, sparse merge.
fn row_axpy(a: &SparseRow, c: &Scalar, b: &SparseRow) -> SparseRow {
    let mut out = SparseRow::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|(k, _)| *k).unwrap_or(usize::MAX);
        let kb = b.get(j).map(|(k, _)| *k).unwrap_or(usize::MAX);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, b[j].1.mul(c).neg()));
            j += 1;
        } else {
            let v = a[i].1.sub(&b[j].1.mul(c));
            if !v.is_zero() {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn row_scale(a: &SparseRow, c: &Scalar) -> SparseRow {
    a.iter().map(|(k, v)| (*k, v.mul(c))).collect()
}

/// Dense combination vectors over the original rows.
fn combo_axpy(a: &[Scalar], c: &Scalar, b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.sub(&y.mul(c))).collect()
}

fn combo_scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x.mul(c)).collect()
}

/// Reduced row echelon form together with the row operations that produced
/// it.  `transform[i]` expresses output row i as a combination of the input
/// rows; `kernel_combos` are the input-row combinations that vanished (the
/// left kernel contributions discovered along the way).
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: CoefficientMatrix,
    pub pivots: Vec<usize>,
    pub transform: Vec<Vec<Scalar>>,
    pub kernel_combos: Vec<Vec<Scalar>>,
}

/// Unique RREF.  Pivot selection: leftmost column, then the sparsest row
/// among those with a nonzero entry in it.  Zero rows are dropped.
pub fn rref(m: &CoefficientMatrix) -> Rref {
    let n = m.nrows();
    let mut work: Vec<(SparseRow, Vec<Scalar>)> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut combo = vec![Scalar::zero(); n];
            combo[i] = Scalar::one();
            (r.clone(), combo)
        })
        .collect();
    let mut done: Vec<(usize, SparseRow, Vec<Scalar>)> = Vec::new(); // (pivot col, row, combo)
    let mut kernel_combos: Vec<Vec<Scalar>> = Vec::new();

    for col in 0..m.ncols() {
        // Sparsest eligible row with a nonzero entry in this column.
        let candidate = work
            .iter()
            .enumerate()
            .filter(|(_, (r, _))| {
                r.first().map(|(c, _)| *c == col).unwrap_or(false)
            })
            .min_by_key(|(_, (r, _))| r.len())
            .map(|(i, _)| i);
        let Some(pi) = candidate else { continue };
        let (mut prow, mut pcombo) = work.swap_remove(pi);
        let lead = row_get(&prow, col).expect("pivot entry").clone();
        let inv = lead.inv().expect("pivot entries are nonzero");
        prow = row_scale(&prow, &inv);
        pcombo = combo_scale(&pcombo, &inv);
        // Eliminate from every other row, pending and finished.
        for (r, combo) in work.iter_mut() {
            if let Some(c) = row_get(r, col).cloned() {
                *r = row_axpy(r, &c, &prow);
                *combo = combo_axpy(combo, &c, &pcombo);
            }
        }
        for (_, r, combo) in done.iter_mut() {
            if let Some(c) = row_get(r, col).cloned() {
                *r = row_axpy(r, &c, &prow);
                *combo = combo_axpy(combo, &c, &pcombo);
            }
        }
        done.push((col, prow, pcombo));
        // Rows that became zero express dependencies among the input rows.
        let mut i = 0;
        while i < work.len() {
            if work[i].0.is_empty() {
                kernel_combos.push(work.swap_remove(i).1);
            } else {
                i += 1;
            }
        }
    }

    // Rows empty from the start never entered the pivot loop.
    for (r, combo) in work {
        debug_assert!(r.is_empty());
        kernel_combos.push(combo);
    }
    done.sort_by_key(|(p, _, _)| *p);
    let pivots: Vec<usize> = done.iter().map(|(p, _, _)| *p).collect();
    let rows: Vec<SparseRow> = done.iter().map(|(_, r, _)| r.clone()).collect();
    let transform: Vec<Vec<Scalar>> = done.iter().map(|(_, _, c)| c.clone()).collect();
    Rref {
        matrix: CoefficientMatrix {
            legend: m.legend.clone(),
            rows,
        },
        pivots,
        transform,
        kernel_combos,
    }
}

/// A kernel basis with pairwise disjoint supports, plus the coloop columns
/// (columns that occur in no kernel vector).
#[derive(Debug, Clone)]
pub struct PartitionBasis {
    pub blocks: Vec<SparseRow>,
    pub coloops: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum PkbOutcome {
    /// The reduced row echelon form has at most two nonzero entries per row.
    Success {
        rref: Rref,
        basis: PartitionBasis,
    },
    /// Witness: the first RREF row with three or more entries.
    Failure {
        rref: Rref,
        row_index: usize,
        row: SparseRow,
    },
}

impl PkbOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, PkbOutcome::Success { .. })
    }
}

/// Decide whether the coefficient matrix has a partitioning kernel basis:
/// equivalent to every row of the reduced row echelon form having at most two
/// nonzero entries.  On success the basis is constructed explicitly and
/// re-verified; on failure the offending row is returned as a witness.
pub fn pkb_test(m: &CoefficientMatrix) -> PkbOutcome {
    let r = rref(m);
    pkb_test_on_rref(m, r)
}

pub fn pkb_test_on_rref(original: &CoefficientMatrix, r: Rref) -> PkbOutcome {
    for (i, row) in r.matrix.rows.iter().enumerate() {
        if row.len() >= 3 {
            return PkbOutcome::Failure {
                row_index: i,
                row: row.clone(),
                rref: r,
            };
        }
    }
    // Build the basis: one kernel vector per non-pivot column, supported on
    // that column and the pivot columns of the rows it meets.
    let ncols = r.matrix.ncols();
    let pivot_set: std::collections::HashSet<usize> = r.pivots.iter().copied().collect();
    let mut blocks = Vec::new();
    let mut in_kernel = vec![false; ncols];
    for col in 0..ncols {
        if pivot_set.contains(&col) {
            continue;
        }
        let mut vec: SparseRow = vec![(col, Scalar::one())];
        for (ri, row) in r.matrix.rows.iter().enumerate() {
            if let Some(c) = row_get(row, col) {
                vec.push((r.pivots[ri], c.neg()));
            }
        }
        vec.sort_by_key(|(c, _)| *c);
        for (c, _) in &vec {
            in_kernel[*c] = true;
        }
        blocks.push(vec);
    }
    let coloops: Vec<usize> = (0..ncols).filter(|&c| !in_kernel[c]).collect();
    let basis = PartitionBasis { blocks, coloops };
    debug_assert!(verify_partition_basis(original, &basis, r.pivots.len()));
    PkbOutcome::Success { rref: r, basis }
}

/// Independent check: the blocks lie in ker(A), have pairwise disjoint
/// supports, and there are exactly ncols - rank of them.
pub fn verify_partition_basis(
    m: &CoefficientMatrix,
    basis: &PartitionBasis,
    rank: usize,
) -> bool {
    if basis.blocks.len() != m.ncols() - rank {
        return false;
    }
    let mut seen = vec![false; m.ncols()];
    for b in &basis.blocks {
        for (c, _) in b {
            if seen[*c] {
                return false;
            }
            seen[*c] = true;
        }
        // A * b == 0
        for row in &m.rows {
            let mut acc = Scalar::zero();
            for (c, v) in b {
                if let Some(e) = row_get(row, *c) {
                    acc = acc.add(&e.mul(v));
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    for c in &basis.coloops {
        if seen[*c] {
            return false;
        }
    }
    true
}

/// One binomial per two-entry RREF row and one monomial per one-entry row.
/// Requires a successful PKB test on the matrix.
pub fn binomials_from_pkb(rref_matrix: &CoefficientMatrix) -> Vec<Polynomial> {
    rref_matrix
        .rows
        .iter()
        .map(|row| {
            assert!(row.len() <= 2 && !row.is_empty());
            rref_matrix.row_to_poly(row)
        })
        .collect()
}

/// Result of redundancy pruning: the kept generators (a maximal linearly
/// independent subset over the scalar field) and, for each dropped generator,
/// its expression as a combination of kept ones.
#[derive(Debug, Clone)]
pub struct PruneResult {
    pub system: PolySystem,
    /// Indices (into the input) of the kept generators, ascending.
    pub kept: Vec<usize>,
    /// (dropped input index, combination over kept input indices).
    pub relations: Vec<(usize, Vec<(usize, Scalar)>)>,
}

/// Keep a maximal linearly independent subset of the generators.  Binomial
/// generators are given priority, then shorter generators, so that the
/// simplification heuristics keep their substitution rules; the surviving
/// generators appear in their original order.
pub fn prune_redundant_generators(sys: &PolySystem) -> PruneResult {
    let m = linearize(sys);
    let n = sys.gens.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| {
        let g = &sys.gens[i];
        (!g.is_binomial() as u32, g.num_terms(), i)
    });

    // Echelon basis of processed rows with expressions over kept originals.
    let mut basis: Vec<(SparseRow, Vec<(usize, Scalar)>)> = Vec::new();
    let mut kept = Vec::new();
    let mut relations = Vec::new();
    for &i in &order {
        let mut row = m.rows[i].clone();
        let mut expr: Vec<(usize, Scalar)> = Vec::new(); // subtracted combination
        loop {
            let Some(&(lead, _)) = row.first() else { break };
            let hit = basis
                .iter()
                .find(|(b, _)| b.first().map(|(c, _)| *c) == Some(lead));
            let Some((brow, bexpr)) = hit else { break };
            let c = row_get(&row, lead).unwrap().clone();
            row = row_axpy(&row, &c, brow);
            for (j, s) in bexpr {
                merge_term(&mut expr, *j, s.mul(&c));
            }
        }
        if row.is_empty() {
            // gens[i] = sum expr over kept generators
            relations.push((i, expr));
        } else {
            let lead = row_get(&row, row.first().unwrap().0).unwrap().clone();
            let inv = lead.inv().unwrap();
            let row = row_scale(&row, &inv);
            // row = inv * (gens[i] - expr)  =>  expressed over kept originals.
            let mut bexpr: Vec<(usize, Scalar)> = vec![(i, inv.clone())];
            for (j, s) in &expr {
                merge_term(&mut bexpr, *j, s.mul(&inv).neg());
            }
            basis.push((row, bexpr));
            kept.push(i);
        }
    }
    kept.sort_unstable();
    relations.sort_by_key(|(i, _)| *i);
    let system = PolySystem::new(
        sys.ctx.clone(),
        kept.iter().map(|&i| sys.gens[i].clone()).collect(),
    );
    PruneResult {
        system,
        kept,
        relations,
    }
}

fn merge_term(expr: &mut Vec<(usize, Scalar)>, j: usize, s: Scalar) {
    if s.is_zero() {
        return;
    }
    if let Some(e) = expr.iter_mut().find(|(k, _)| *k == j) {
        e.1 = e.1.add(&s);
    } else {
        expr.push((j, s));
    }
    expr.retain(|(_, s)| !s.is_zero());
}

/// Exhaustive search for a nonzero row-space vector supported on at most two
/// columns.  Test oracle; cost is quadratic in the number of columns.
pub fn sparse_vector_in_rowspace(m: &CoefficientMatrix, support_bound: usize) -> Option<SparseRow> {
    assert_eq!(support_bound, 2, "only the binomial case is implemented");
    let ncols = m.ncols();
    let full_rank = rref(m).matrix.nrows();
    let mut supports: Vec<Vec<usize>> = (0..ncols).map(|c| vec![c]).collect();
    for i in 0..ncols {
        for j in (i + 1)..ncols {
            supports.push(vec![i, j]);
        }
    }
    for s in supports {
        // Delete the columns of S; a row-space vector supported on S exists
        // iff the rank drops.
        let reduced = CoefficientMatrix {
            legend: m.legend.clone(),
            rows: m
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .filter(|(c, _)| !s.contains(c))
                        .cloned()
                        .collect()
                })
                .collect(),
        };
        let red = rref(&reduced);
        if red.matrix.nrows() < full_rank {
            // Some combination vanishes outside S but not on S.
            for combo in &red.kernel_combos {
                let mut vec: SparseRow = Vec::new();
                for (i, c) in combo.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (col, v) in &m.rows[i] {
                        if s.contains(col) {
                            let mut found = false;
                            for e in vec.iter_mut() {
                                if e.0 == *col {
                                    e.1 = e.1.add(&v.mul(c));
                                    found = true;
                                }
                            }
                            if !found {
                                vec.push((*col, v.mul(c)));
                            }
                        }
                    }
                }
                vec.retain(|(_, v)| !v.is_zero());
                if !vec.is_empty() {
                    vec.sort_by_key(|(c, _)| *c);
                    return Some(vec);
                }
            }
        }
    }
    None
}

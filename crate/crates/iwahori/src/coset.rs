//! Double-coset classification modulo the Iwahori subgroup on both sides,
//! and the retraction of a matrix onto a chamber of monomial matrices.
//!
//! Classification reads one monomial position per exterior power from the
//! valuation triples; the subsets realizing consecutive triples must nest.
//! Retraction is Gaussian elimination whose pivot order makes every row
//! operation lie in w⁻¹·U₁·w and every column operation lie in the Iwahori
//! subgroup, so the result stays in the same orbit.

use crate::arith::series::Valuation;
use crate::error::{Error, Result};
use crate::linalg::{subsets_lex, triple, Mat};
use crate::weyl::{mat_to_weyl, AffineWeylElt};

/// The monomial matrix whose Iwahori double coset contains g.
///
/// For each m the valuation triple of the m-th exterior power pins down one
/// more monomial position; the exponent at the new position is the step in
/// the minimum valuation. Realizing subsets that fail to nest mean the input
/// was not a single coset's worth of data.
pub fn classify_double_coset(g: &Mat) -> Result<AffineWeylElt> {
    let n = g.n();
    let mut prev_rows: Vec<usize> = Vec::new();
    let mut prev_cols: Vec<usize> = Vec::new();
    let mut prev_v = 0i64;
    let mut mu = vec![0i64; n];
    let mut perm = vec![0usize; n];
    for m in 1..=n {
        let em = g.exterior_power(m);
        let t = triple(&em)?;
        let nn = em.n();
        // The realizing entry sits at row c − d + nn, column c (1-based).
        let row0 = t.c + nn - t.d - 1;
        let col0 = t.c - 1;
        let subsets = subsets_lex(n, m);
        let rows_m = &subsets[row0];
        let cols_m = &subsets[col0];
        if !prev_rows.iter().all(|x| rows_m.contains(x))
            || !prev_cols.iter().all(|x| cols_m.contains(x))
        {
            return Err(Error::InconsistentTuples);
        }
        let i_new = *rows_m
            .iter()
            .find(|x| !prev_rows.contains(x))
            .expect("nested subsets differ by one element");
        let j_new = *cols_m
            .iter()
            .find(|x| !prev_cols.contains(x))
            .expect("nested subsets differ by one element");
        mu[i_new] = t.v - prev_v;
        perm[i_new] = j_new;
        prev_rows = rows_m.clone();
        prev_cols = cols_m.clone();
        prev_v = t.v;
    }
    Ok(AffineWeylElt::new(mu, perm))
}

/// Retraction of g onto the chamber labeled by the finite element w: the
/// monomial matrix reached from g by left multiplication in w⁻¹·U₁·w and
/// right multiplication in the Iwahori subgroup.
///
/// Rows are processed in the order w(n), …, w(1). In each row the pivot is
/// the leftmost entry of least valuation; that choice keeps the elimination
/// factors integral where the Iwahori subgroup demands it, and clearing the
/// pivot column only in rows that come later in the processing order keeps
/// the row operations inside w⁻¹·U₁·w.
pub fn retract(g: &Mat, w: &AffineWeylElt) -> Result<Mat> {
    let n = g.n();
    debug_assert_eq!(n, w.n());
    let mut m = g.clone();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; n];
    for step in (0..n).rev() {
        let r = w.perm[step];
        // Leftmost least-valuation pivot; an all-zero window that could tie
        // or beat the best finite valuation poisons the choice.
        let mut vstar: Option<i64> = None;
        let mut unknown_min: Option<i64> = None;
        for j in 0..n {
            match m.entry(r, j).valuation() {
                Valuation::Finite(v) => vstar = Some(vstar.map_or(v, |x: i64| x.min(v))),
                Valuation::PlusInfinityToPrecision(p) => {
                    unknown_min = Some(unknown_min.map_or(p, |x: i64| x.min(p)))
                }
            }
        }
        let vstar = vstar.ok_or(Error::IndeterminateValuation)?;
        if unknown_min.is_some_and(|p| p <= vstar) {
            return Err(Error::IndeterminateValuation);
        }
        let c = (0..n)
            .find(|&j| m.entry(r, j).valuation() == Valuation::Finite(vstar))
            .expect("vstar was realized");
        let pivot_inv = m.entry(r, c).inv()?;
        for j in 0..n {
            if j == c || m.entry(r, j).is_zero() {
                continue;
            }
            let f = m.entry(r, j).mul(&pivot_inv).neg();
            m.add_col_multiple(j, c, &f);
        }
        for k in 0..step {
            let t = w.perm[k];
            if m.entry(t, c).is_zero() {
                continue;
            }
            let f = m.entry(t, c).mul(&pivot_inv).neg();
            m.add_row_multiple(t, r, &f);
        }
        pivot_of_row[r] = Some(c);
    }
    // Scale each pivot column by the inverse of the pivot's unit part.
    for r in 0..n {
        let c = pivot_of_row[r].expect("every row was processed");
        let pivot = m.entry(r, c).clone();
        let k = match pivot.valuation() {
            Valuation::Finite(k) => k,
            Valuation::PlusInfinityToPrecision(_) => return Err(Error::IndeterminateValuation),
        };
        let unit_inv = pivot.shift(-k).inv()?;
        m.scale_col(c, &unit_inv);
    }
    Ok(m)
}

/// Retraction read back as an extended affine Weyl element.
pub fn retract_weyl(g: &Mat, w: &AffineWeylElt) -> Result<AffineWeylElt> {
    mat_to_weyl(&retract(g, w)?)
}

//! Square matrices over truncated Laurent series: exact products, inverses,
//! exterior powers, and the valuation data that drives coset classification.
//!
//! Membership tests (Iwahori, congruence subgroups) are decided from the
//! known windows only. When the windows cannot settle a question the answer
//! is an indeterminacy error, never a guess.

use crate::arith::field::FieldParams;
use crate::arith::parse::{parse_series_stream, render_series, TokStream};
use crate::arith::series::{Series, Valuation};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    field: FieldParams,
    rows: Vec<Vec<Series>>,
}

impl Mat {
    pub fn from_rows(field: &FieldParams, rows: Vec<Vec<Series>>) -> Result<Mat> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Syntax {
                line: 1,
                col: 1,
                msg: "matrix must be square and nonempty".into(),
            });
        }
        Ok(Mat {
            n,
            field: field.clone(),
            rows,
        })
    }

    pub fn identity(field: &FieldParams, n: usize, prec: i64) -> Mat {
        Mat::diag_monomials(field, &vec![0; n], prec)
    }

    /// diag(ε^{exps[0]}, …, ε^{exps[n−1]}).
    pub fn diag_monomials(field: &FieldParams, exps: &[i64], prec: i64) -> Mat {
        let n = exps.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Series::monomial(field, &field.one(), exps[i], prec + exps[i])
                        } else {
                            Series::zero(field, prec)
                        }
                    })
                    .collect()
            })
            .collect();
        Mat {
            n,
            field: field.clone(),
            rows,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> &Series {
        &self.rows[i][j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, s: Series) {
        self.rows[i][j] = s;
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.n, other.n);
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let mut acc = self.rows[i][0].mul(&other.rows[0][j]);
                        for k in 1..self.n {
                            acc = acc.add(&self.rows[i][k].mul(&other.rows[k][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Mat {
            n: self.n,
            field: self.field.clone(),
            rows,
        }
    }

    pub fn transpose(&self) -> Mat {
        let rows = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.rows[j][i].clone()).collect())
            .collect();
        Mat {
            n: self.n,
            field: self.field.clone(),
            rows,
        }
    }

    /// Coefficient-wise Frobenius, entry by entry.
    pub fn sigma(&self) -> Mat {
        self.map(|s| s.sigma())
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> Mat {
        Mat {
            n: self.n,
            field: self.field.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn scale_all(&self, s: &Series) -> Mat {
        self.map(|e| e.mul(s))
    }

    fn minor(&self, drop_i: usize, drop_j: usize) -> Mat {
        let rows = (0..self.n)
            .filter(|&i| i != drop_i)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| j != drop_j)
                    .map(|j| self.rows[i][j].clone())
                    .collect()
            })
            .collect();
        Mat {
            n: self.n - 1,
            field: self.field.clone(),
            rows,
        }
    }

    pub fn det(&self) -> Series {
        if self.n == 1 {
            return self.rows[0][0].clone();
        }
        let mut acc: Option<Series> = None;
        for i in 0..self.n {
            let mut term = self.rows[i][0].mul(&self.minor(i, 0).det());
            if i % 2 == 1 {
                term = term.neg();
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.unwrap()
    }

    /// Inverse by the adjugate; fails when the determinant window is all
    /// zeros.
    pub fn inv(&self) -> Result<Mat> {
        let det = self.det();
        let det_inv = det.inv()?;
        if self.n == 1 {
            return Mat::from_rows(&self.field, vec![vec![det_inv]]);
        }
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        // Adjugate: cofactor of (j, i).
                        let mut c = self.minor(j, i).det();
                        if (i + j) % 2 == 1 {
                            c = c.neg();
                        }
                        c.mul(&det_inv)
                    })
                    .collect()
            })
            .collect();
        Ok(Mat {
            n: self.n,
            field: self.field.clone(),
            rows,
        })
    }

    /// Row operation: row_target += f · row_source (left multiplication by an
    /// elementary matrix).
    pub fn add_row_multiple(&mut self, target: usize, source: usize, f: &Series) {
        debug_assert_ne!(target, source);
        for j in 0..self.n {
            self.rows[target][j] = self.rows[target][j].add(&self.rows[source][j].mul(f));
        }
    }

    /// Column operation: col_target += f · col_source (right multiplication
    /// by an elementary matrix).
    pub fn add_col_multiple(&mut self, target: usize, source: usize, f: &Series) {
        debug_assert_ne!(target, source);
        for i in 0..self.n {
            self.rows[i][target] = self.rows[i][target].add(&self.rows[i][source].mul(f));
        }
    }

    pub fn scale_row(&mut self, i: usize, f: &Series) {
        for j in 0..self.n {
            self.rows[i][j] = self.rows[i][j].mul(f);
        }
    }

    pub fn scale_col(&mut self, j: usize, f: &Series) {
        for i in 0..self.n {
            self.rows[i][j] = self.rows[i][j].mul(f);
        }
    }

    /// The k-th exterior power on the lexicographically ordered basis of
    /// k-subsets: entry (I, J) is the minor with rows I and columns J.
    pub fn exterior_power(&self, k: usize) -> Mat {
        let subsets = subsets_lex(self.n, k);
        let rows = subsets
            .iter()
            .map(|rows_i| {
                subsets
                    .iter()
                    .map(|cols_j| {
                        let sub_rows = rows_i
                            .iter()
                            .map(|&i| cols_j.iter().map(|&j| self.rows[i][j].clone()).collect())
                            .collect();
                        Mat {
                            n: k,
                            field: self.field.clone(),
                            rows: sub_rows,
                        }
                        .det()
                    })
                    .collect()
            })
            .collect();
        Mat {
            n: subsets.len(),
            field: self.field.clone(),
            rows,
        }
    }

    pub fn min_prec(&self) -> i64 {
        self.rows
            .iter()
            .flatten()
            .map(|s| s.prec())
            .min()
            .expect("matrix is nonempty")
    }
}

/// k-subsets of {0, …, n−1} in lexicographic order.
pub fn subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Valuation summary of a matrix:
/// - v: the least entry valuation,
/// - d: the least antidiagonal index n + j − i realizing it (1-based i, j),
/// - c: the least column realizing it on that antidiagonal.
///
/// The realizing entry sits at (c − d + n, c).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub v: i64,
    pub d: usize,
    pub c: usize,
}

/// Computes the triple. Any all-zero window whose precision does not exceed
/// the candidate minimum could hide a smaller or tying valuation, so the
/// result is indeterminate in that case.
pub fn triple(m: &Mat) -> Result<Triple> {
    let n = m.n();
    let mut v: Option<i64> = None;
    let mut min_unknown_prec: Option<i64> = None;
    for i in 0..n {
        for j in 0..n {
            match m.entry(i, j).valuation() {
                Valuation::Finite(val) => v = Some(v.map_or(val, |x| x.min(val))),
                Valuation::PlusInfinityToPrecision(p) => {
                    min_unknown_prec = Some(min_unknown_prec.map_or(p, |x| x.min(p)))
                }
            }
        }
    }
    let v = match (v, min_unknown_prec) {
        (Some(v), Some(p)) if p <= v => return Err(Error::IndeterminateValuation),
        (Some(v), _) => v,
        (None, _) => return Err(Error::IndeterminateValuation),
    };
    let mut best: Option<(usize, usize)> = None;
    for i in 1..=n {
        for j in 1..=n {
            if m.entry(i - 1, j - 1).valuation() == Valuation::Finite(v) {
                let cand = (n + j - i, j);
                best = Some(match best {
                    None => cand,
                    Some(b) => b.min(cand),
                });
            }
        }
    }
    let (d, c) = best.expect("v was realized by some entry");
    Ok(Triple { v, d, c })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Decision {
    Yes,
    No,
    Unknown,
}

fn combine(acc: Decision, next: Decision) -> Decision {
    match (acc, next) {
        (Decision::No, _) | (_, Decision::No) => Decision::No,
        (Decision::Unknown, _) | (_, Decision::Unknown) => Decision::Unknown,
        _ => Decision::Yes,
    }
}

fn decide(d: Decision) -> Result<bool> {
    match d {
        Decision::Yes => Ok(true),
        Decision::No => Ok(false),
        Decision::Unknown => Err(Error::IndeterminatePrecision),
    }
}

fn val_exactly_zero(s: &Series) -> Decision {
    match s.valuation() {
        Valuation::Finite(0) => Decision::Yes,
        Valuation::Finite(_) => Decision::No,
        // All-zero window reaching past 0 rules out valuation 0; one that
        // stops at or before 0 rules out nothing.
        Valuation::PlusInfinityToPrecision(p) if p > 0 => Decision::No,
        Valuation::PlusInfinityToPrecision(_) => Decision::Unknown,
    }
}

fn val_at_least(s: &Series, bound: i64) -> Decision {
    match s.val_at_least(bound) {
        Some(true) => Decision::Yes,
        Some(false) => Decision::No,
        None => Decision::Unknown,
    }
}

/// Membership in the Iwahori subgroup: unit diagonal, integral above the
/// diagonal, ε-divisible below it, unit determinant. A definite violation
/// anywhere decides no; otherwise any window too short to certify its entry
/// makes the answer indeterminate.
pub fn is_iwahori(m: &Mat) -> Result<bool> {
    let n = m.n();
    let mut acc = Decision::Yes;
    for i in 0..n {
        for j in 0..n {
            let e = m.entry(i, j);
            let d = match i.cmp(&j) {
                std::cmp::Ordering::Equal => val_exactly_zero(e),
                std::cmp::Ordering::Less => val_at_least(e, 0),
                std::cmp::Ordering::Greater => val_at_least(e, 1),
            };
            acc = combine(acc, d);
        }
    }
    acc = combine(acc, val_exactly_zero(&m.det()));
    decide(acc)
}

/// Membership in the congruence subgroup of the upper unipotent group at
/// shift big_n and depth m: unit diagonal, zero below, and val ≥ (j−i)·big_n
/// + m above (1-based i, j). Zero windows certify their claims only up to
/// their precision.
pub fn in_congruence_subgroup(g: &Mat, m: i64, big_n: i64) -> Result<bool> {
    let n = g.n();
    let one = Series::one(g.field(), g.min_prec());
    let mut acc = Decision::Yes;
    for i in 0..n {
        for j in 0..n {
            let e = g.entry(i, j);
            let d = match i.cmp(&j) {
                std::cmp::Ordering::Equal => {
                    if e.sub(&one).is_zero() {
                        Decision::Yes
                    } else {
                        Decision::No
                    }
                }
                std::cmp::Ordering::Greater => {
                    if e.is_zero() {
                        Decision::Yes
                    } else {
                        Decision::No
                    }
                }
                std::cmp::Ordering::Less => {
                    let bound = (j as i64 - i as i64) * big_n + m;
                    val_at_least(e, bound)
                }
            };
            acc = combine(acc, d);
        }
    }
    decide(acc)
}

/// [[1, a, b], [0, 1, c], [0, 0, 1]] with structural entries at the least
/// precision of the given ones.
pub fn upper_unipotent3(field: &FieldParams, a: &Series, b: &Series, c: &Series) -> Mat {
    let prec = a.prec().min(b.prec()).min(c.prec());
    let one = Series::one(field, prec);
    let zero = Series::zero(field, prec);
    Mat::from_rows(
        field,
        vec![
            vec![one.clone(), a.clone(), b.clone()],
            vec![zero.clone(), one.clone(), c.clone()],
            vec![zero.clone(), zero.clone(), one],
        ],
    )
    .expect("shape is square")
}

pub fn upper_unipotent2(field: &FieldParams, a: &Series) -> Mat {
    let prec = a.prec();
    let one = Series::one(field, prec);
    let zero = Series::zero(field, prec);
    Mat::from_rows(
        field,
        vec![vec![one.clone(), a.clone()], vec![zero, one]],
    )
    .expect("shape is square")
}

/// Text form: rows of series literals, e.g.
/// `[[e^1, 0, 0],[0, e^0, 0],[0, 0, e^-1]]`.
pub fn mat_from_text(input: &str, field: &FieldParams, default_prec: i64) -> Result<Mat> {
    let mut ts = TokStream::new(input)?;
    let m = mat_from_stream(&mut ts, field, default_prec)?;
    ts.expect_end()?;
    Ok(m)
}

use crate::arith::parse::Tok;

fn mat_from_stream(ts: &mut TokStream, field: &FieldParams, default_prec: i64) -> Result<Mat> {
    ts.expect(&Tok::LBracket, "'[' opening matrix")?;
    let mut rows: Vec<Vec<Series>> = Vec::new();
    loop {
        ts.expect(&Tok::LBracket, "'[' opening row")?;
        let mut row = Vec::new();
        loop {
            row.push(parse_series_stream(ts, field, default_prec)?);
            match ts.peek() {
                Some(Tok::Comma) => {
                    ts.next_tok();
                }
                Some(Tok::RBracket) => {
                    ts.next_tok();
                    break;
                }
                _ => return Err(ts.err("expected ',' or ']' in row")),
            }
        }
        rows.push(row);
        match ts.peek() {
            Some(Tok::Comma) => {
                ts.next_tok();
            }
            Some(Tok::RBracket) => {
                ts.next_tok();
                break;
            }
            _ => return Err(ts.err("expected ',' or ']' after row")),
        }
    }
    Mat::from_rows(field, rows)
}

pub fn mat_to_text(m: &Mat) -> String {
    let rows: Vec<String> = (0..m.n())
        .map(|i| {
            let entries: Vec<String> = (0..m.n()).map(|j| render_series(m.entry(i, j))).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

#[derive(Serialize, Deserialize)]
struct MatJson {
    n: usize,
    entries: Vec<Vec<String>>,
}

pub fn mat_from_json(input: &str, field: &FieldParams, default_prec: i64) -> Result<Mat> {
    let mj: MatJson = serde_json::from_str(input).map_err(|e| Error::Syntax {
        line: e.line(),
        col: e.column(),
        msg: format!("json: {e}"),
    })?;
    if mj.entries.len() != mj.n {
        return Err(Error::Syntax {
            line: 1,
            col: 1,
            msg: "json matrix has wrong row count".into(),
        });
    }
    let mut rows = Vec::new();
    for r in &mj.entries {
        let mut row = Vec::new();
        for e in r {
            row.push(crate::arith::parse::parse_series(e, field, default_prec)?);
        }
        rows.push(row);
    }
    Mat::from_rows(field, rows)
}

pub fn mat_to_json(m: &Mat) -> String {
    let mj = MatJson {
        n: m.n(),
        entries: (0..m.n())
            .map(|i| (0..m.n()).map(|j| render_series(m.entry(i, j))).collect())
            .collect(),
    };
    serde_json::to_string(&mj).expect("serialization cannot fail")
}

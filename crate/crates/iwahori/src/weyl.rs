//! The extended affine Weyl group of GL_n restricted to SL_n data: monomial
//! matrices ε^{μ_i} at (i, w(i)), their composition, the apartment action,
//! and the two outer symmetries used to move between case families.
//!
//! An element is stored as the pair (μ, w): the matrix has ε^{μ_i} in row i
//! and column w(i) (0-based). Multiplication matches matrix multiplication,
//! so x·y means "apply y after x" in column-vector convention.

use crate::arith::field::FieldParams;
use crate::arith::parse::{Tok, TokStream};
use crate::arith::series::Series;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use num_rational::Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineWeylElt {
    /// Exponent of ε in row i.
    pub mu: Vec<i64>,
    /// Column of the nonzero entry in row i.
    pub perm: Vec<usize>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&j| {
        j < seen.len() && !std::mem::replace(&mut seen[j], true)
    })
}

/// Finite Weyl labels in rank 2 and 3, paired with their row-to-column maps.
fn label_table(n: usize) -> &'static [(&'static str, &'static [usize])] {
    match n {
        2 => &[("1", &[0, 1]), ("s1", &[1, 0])],
        3 => &[
            ("1", &[0, 1, 2]),
            ("s1", &[1, 0, 2]),
            ("s2", &[0, 2, 1]),
            ("s1s2", &[2, 0, 1]),
            ("s2s1", &[1, 2, 0]),
            ("s1s2s1", &[2, 1, 0]),
        ],
        _ => &[],
    }
}

impl AffineWeylElt {
    pub fn new(mu: Vec<i64>, perm: Vec<usize>) -> AffineWeylElt {
        debug_assert_eq!(mu.len(), perm.len());
        debug_assert!(is_permutation(&perm));
        AffineWeylElt { mu, perm }
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn identity(n: usize) -> AffineWeylElt {
        AffineWeylElt::new(vec![0; n], (0..n).collect())
    }

    pub fn translation(mu: &[i64]) -> AffineWeylElt {
        AffineWeylElt::new(mu.to_vec(), (0..mu.len()).collect())
    }

    pub fn from_label(n: usize, label: &str) -> Result<AffineWeylElt> {
        label_table(n)
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, p)| AffineWeylElt::new(vec![0; n], p.to_vec()))
            .ok_or(Error::Syntax {
                line: 1,
                col: 1,
                msg: format!("unknown Weyl label '{label}' in rank {n}"),
            })
    }

    /// Label of the finite part when it has one (ranks 2 and 3).
    pub fn finite_label(&self) -> Option<&'static str> {
        label_table(self.n())
            .iter()
            .find(|(_, p)| *p == self.perm.as_slice())
            .map(|(l, _)| *l)
    }

    /// The translation-free part with the same permutation.
    pub fn finite_part(&self) -> AffineWeylElt {
        AffineWeylElt::new(vec![0; self.n()], self.perm.clone())
    }

    pub fn is_translation(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Matrix product self·other.
    pub fn compose(&self, other: &AffineWeylElt) -> AffineWeylElt {
        let n = self.n();
        debug_assert_eq!(n, other.n());
        let perm = (0..n).map(|i| other.perm[self.perm[i]]).collect();
        let mu = (0..n).map(|i| self.mu[i] + other.mu[self.perm[i]]).collect();
        AffineWeylElt::new(mu, perm)
    }

    pub fn inverse(&self) -> AffineWeylElt {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut mu = vec![0; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            mu[self.perm[i]] = -self.mu[i];
        }
        AffineWeylElt::new(mu, perm)
    }

    /// Transpose of the monomial matrix.
    pub fn transpose(&self) -> AffineWeylElt {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut mu = vec![0; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            mu[self.perm[i]] = self.mu[i];
        }
        AffineWeylElt::new(mu, perm)
    }

    /// Conjugation action on a coweight: self·ε^λ·self⁻¹ = ε^{Λ(λ)},
    /// Λ(λ)_i = λ_{w(i)}.
    pub fn conjugate_coweight(&self, lambda: &[i64]) -> Vec<i64> {
        self.perm.iter().map(|&j| lambda[j]).collect()
    }

    /// Affine action on an apartment point: (x·z)_i = μ_i + z_{w(i)}.
    pub fn act_on_point(&self, z: &[Rational64]) -> Vec<Rational64> {
        self.perm
            .iter()
            .zip(&self.mu)
            .map(|(&j, &m)| Rational64::from_integer(m) + z[j])
            .collect()
    }

    /// The monomial matrix, with window length prec on every entry.
    pub fn to_mat(&self, field: &FieldParams, prec: i64) -> Mat {
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j == self.perm[i] {
                            Series::monomial(field, &field.one(), self.mu[i], self.mu[i] + prec)
                        } else {
                            Series::zero(field, prec)
                        }
                    })
                    .collect()
            })
            .collect();
        Mat::from_rows(field, rows).expect("shape is square")
    }
}

/// Reads a monomial matrix back: one nonzero entry per row and column, each
/// a unit-coefficient power of ε through its whole window. All-zero windows
/// count as zero.
pub fn mat_to_weyl(m: &Mat) -> Result<AffineWeylElt> {
    let n = m.n();
    let mut perm = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n);
    for i in 0..n {
        let mut found: Option<(usize, i64)> = None;
        for j in 0..n {
            let e = m.entry(i, j);
            if e.is_zero() {
                continue;
            }
            if found.is_some() {
                return Err(Error::NotMonomial);
            }
            let (vmin, coeffs) = e.window();
            if !coeffs[0].is_one() || coeffs[1..].iter().any(|c| !c.is_zero()) {
                return Err(Error::NotMonomial);
            }
            found = Some((j, vmin));
        }
        let (j, k) = found.ok_or(Error::NotMonomial)?;
        perm.push(j);
        mu.push(k);
    }
    if !is_permutation(&perm) {
        return Err(Error::NotMonomial);
    }
    Ok(AffineWeylElt::new(mu, perm))
}

/// τ = ε^{(−1,0,0)}·s1s2, the length-zero rotation of the rank-3 alcove.
pub fn tau() -> AffineWeylElt {
    AffineWeylElt::new(vec![-1, 0, 0], vec![2, 0, 1])
}

pub fn eta() -> AffineWeylElt {
    AffineWeylElt::from_label(3, "s1s2s1").expect("rank 3 label")
}

/// φ(x) = τ·x·τ⁻¹. Order three on the quotient by the center.
pub fn apply_phi(x: &AffineWeylElt) -> AffineWeylElt {
    let t = tau();
    t.compose(x).compose(&t.inverse())
}

/// ψ(x) = η·(xᵗ)⁻¹·η. An involution.
pub fn apply_psi(x: &AffineWeylElt) -> AffineWeylElt {
    let h = eta();
    h.compose(&x.transpose().inverse()).compose(&h)
}

/// φ on matrices: conjugation by the monomial matrix of τ.
pub fn apply_phi_mat(g: &Mat) -> Mat {
    let prec = g.min_prec() + 2;
    let t = tau().to_mat(g.field(), prec);
    let t_inv = tau().inverse().to_mat(g.field(), prec);
    t.mul(g).mul(&t_inv)
}

/// ψ on matrices: η·(gᵗ)⁻¹·η.
pub fn apply_psi_mat(g: &Mat) -> Result<Mat> {
    let prec = g.min_prec() + 2;
    let h = eta().to_mat(g.field(), prec);
    Ok(h.mul(&g.transpose().inv()?).mul(&h))
}

/// Barycenter of the base alcove in the rank-3 apartment.
pub fn base_point() -> Vec<Rational64> {
    vec![
        Rational64::new(1, 3),
        Rational64::from_integer(0),
        Rational64::new(-1, 3),
    ]
}

/// Text form `e^(μ_1,…,μ_n)*w`; either half may be omitted.
pub fn parse_weyl(input: &str, n: usize) -> Result<AffineWeylElt> {
    let mut ts = TokStream::new(input)?;
    let mut mu: Option<Vec<i64>> = None;
    if matches!(ts.peek(), Some(Tok::Word(w)) if w == "e") {
        ts.next_tok();
        ts.expect(&Tok::Caret, "'^' after e")?;
        ts.expect(&Tok::LParen, "'(' opening coweight")?;
        let mut v = Vec::new();
        loop {
            v.push(ts.parse_int()?);
            match ts.peek() {
                Some(Tok::Comma) => {
                    ts.next_tok();
                }
                Some(Tok::RParen) => {
                    ts.next_tok();
                    break;
                }
                _ => return Err(ts.err("expected ',' or ')' in coweight")),
            }
        }
        if v.len() != n {
            return Err(ts.err(format!("coweight has {} entries, expected {n}", v.len())));
        }
        mu = Some(v);
        if matches!(ts.peek(), Some(Tok::Star)) {
            ts.next_tok();
        } else {
            ts.expect_end()?;
            return Ok(AffineWeylElt::translation(&mu.unwrap()));
        }
    }
    let label = match ts.next_tok() {
        Some(t) => match t.tok {
            Tok::Word(w) => w,
            Tok::Int(1) => "1".to_string(),
            _ => {
                return Err(Error::Syntax {
                    line: t.line,
                    col: t.col,
                    msg: "expected Weyl label".into(),
                })
            }
        },
        None => return Err(ts.err("expected Weyl label")),
    };
    ts.expect_end()?;
    let w = AffineWeylElt::from_label(n, &label)?;
    Ok(match mu {
        Some(mu) => AffineWeylElt::translation(&mu).compose(&w),
        None => w,
    })
}

pub fn render_weyl(x: &AffineWeylElt) -> String {
    let label = x
        .finite_label()
        .expect("rendering supports ranks 2 and 3");
    let mu: Vec<String> = x.mu.iter().map(|m| m.to_string()).collect();
    format!("e^({})*{}", mu.join(","), label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_labels() -> Vec<AffineWeylElt> {
        label_table(3)
            .iter()
            .map(|(l, _)| AffineWeylElt::from_label(3, l).unwrap())
            .collect()
    }

    fn small_mus() -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for a in -2..=2 {
            for b in -2..=2 {
                for c in -2..=2 {
                    out.push(vec![a, b, c]);
                }
            }
        }
        out
    }

    #[test]
    fn compose_matches_matrix_product() {
        let f = FieldParams::new(5, 1).unwrap();
        for w1 in all_labels() {
            for w2 in all_labels() {
                let a = AffineWeylElt::new(vec![1, -2, 0], w1.perm.clone());
                let b = AffineWeylElt::new(vec![0, 3, -1], w2.perm.clone());
                let c = a.compose(&b);
                let prod = a.to_mat(&f, 8).mul(&b.to_mat(&f, 8));
                assert_eq!(mat_to_weyl(&prod).unwrap(), c);
            }
        }
    }

    #[test]
    fn inverse_and_transpose_match_matrices() {
        let f = FieldParams::new(5, 1).unwrap();
        for w in all_labels() {
            let x = AffineWeylElt::new(vec![2, 0, -1], w.perm.clone());
            let xm = x.to_mat(&f, 8);
            assert_eq!(mat_to_weyl(&xm.inv().unwrap()).unwrap(), x.inverse());
            assert_eq!(mat_to_weyl(&xm.transpose()).unwrap(), x.transpose());
            let id = x.compose(&x.inverse());
            assert_eq!(id, AffineWeylElt::identity(3));
        }
    }

    #[test]
    fn eta_acts_on_base_point_by_reversal() {
        let p0 = base_point();
        let moved = eta().act_on_point(&p0);
        assert_eq!(
            moved,
            vec![
                Rational64::new(-1, 3),
                Rational64::from_integer(0),
                Rational64::new(1, 3)
            ]
        );
    }

    #[test]
    fn phi_cubed_and_psi_squared_are_trivial() {
        for w in all_labels() {
            for mu in small_mus() {
                let x = AffineWeylElt::translation(&mu).compose(&w);
                let phi3 = apply_phi(&apply_phi(&apply_phi(&x)));
                assert_eq!(phi3, x);
                let psi2 = apply_psi(&apply_psi(&x));
                assert_eq!(psi2, x);
            }
        }
    }

    #[test]
    fn phi_rotates_translations() {
        for mu in small_mus() {
            let x = AffineWeylElt::translation(&mu);
            let y = apply_phi(&x);
            assert_eq!(y, AffineWeylElt::translation(&[mu[2], mu[0], mu[1]]));
        }
    }

    #[test]
    fn psi_on_eta_cosets_reverses_and_negates() {
        for mu in small_mus() {
            let x = AffineWeylElt::translation(&mu).compose(&eta());
            let y = apply_psi(&x);
            let want = AffineWeylElt::translation(&[-mu[2], -mu[1], -mu[0]]).compose(&eta());
            assert_eq!(y, want);
        }
    }

    #[test]
    fn phi_and_psi_on_simple_reflections() {
        let s1 = AffineWeylElt::from_label(3, "s1").unwrap();
        let s2 = AffineWeylElt::from_label(3, "s2").unwrap();
        assert_eq!(apply_phi(&s1), s2);
        assert_eq!(apply_psi(&s1), s2);
        assert_eq!(apply_psi(&s2), s1);
    }

    #[test]
    fn phi_on_s2s1_cosets_shifts_the_corner_coweight() {
        let s2s1 = AffineWeylElt::from_label(3, "s2s1").unwrap();
        for mu in small_mus() {
            let x = AffineWeylElt::translation(&mu).compose(&s2s1);
            let y = apply_phi(&x);
            let want =
                AffineWeylElt::translation(&[mu[2] - 1, mu[0], mu[1] + 1]).compose(&s2s1);
            assert_eq!(y, want);
        }
    }

    #[test]
    fn automorphisms_agree_with_their_matrix_forms() {
        let f = FieldParams::new(3, 1).unwrap();
        for w in all_labels() {
            let x = AffineWeylElt::new(vec![1, 0, -2], w.perm.clone());
            let g = x.to_mat(&f, 10);
            assert_eq!(mat_to_weyl(&apply_phi_mat(&g)).unwrap(), apply_phi(&x));
            assert_eq!(
                mat_to_weyl(&apply_psi_mat(&g).unwrap()).unwrap(),
                apply_psi(&x)
            );
        }
    }

    #[test]
    fn text_round_trip() {
        for w in all_labels() {
            let x = AffineWeylElt::new(vec![1, 0, -1], w.perm.clone());
            let text = render_weyl(&x);
            assert_eq!(parse_weyl(&text, 3).unwrap(), x);
        }
        assert_eq!(
            parse_weyl("e^(1,0,-1)*1", 3).unwrap(),
            AffineWeylElt::translation(&[1, 0, -1])
        );
        assert_eq!(
            parse_weyl("s1s2", 3).unwrap(),
            AffineWeylElt::from_label(3, "s1s2").unwrap()
        );
        assert_eq!(
            parse_weyl("e^(2,-2)*s1", 2).unwrap(),
            AffineWeylElt::new(vec![2, -2], vec![1, 0])
        );
        assert!(parse_weyl("e^(1,0)*s1", 3).is_err());
        assert!(parse_weyl("s3", 3).is_err());
    }

    #[test]
    fn translation_compose_label_keeps_mu_in_rows() {
        // ε^μ·w puts μ_i in row i regardless of w.
        let w = AffineWeylElt::from_label(3, "s1s2").unwrap();
        let x = AffineWeylElt::translation(&[4, 5, 6]).compose(&w);
        assert_eq!(x.mu, vec![4, 5, 6]);
        assert_eq!(x.perm, w.perm);
    }
}

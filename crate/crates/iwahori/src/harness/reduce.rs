//! Reduction of an arbitrary pair (x, ν) to a grid point of the case atlas
//! by the order-three rotation, the duality, and a final re-sort of ν. The
//! moves transcript is replayable on matrices, so membership questions
//! transport from the original pair to the reduced one.

use crate::arith::FieldParams;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::weyl::{apply_phi_mat, apply_psi_mat, AffineWeylElt};

use super::families::{FamilyId, FamilyParams};

/// One transport step. Applied left to right, the transcript carries a
/// point of the original pair's set to a point of the reduced pair's set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// g ↦ τ·g·τ⁻¹; x and ν rotate.
    Phi,
    /// g ↦ η·(gᵗ)⁻¹·η; x and ν dualize.
    Psi,
    /// g ↦ w̃·g; x is unchanged and ν is re-sorted by w.
    Resort(AffineWeylElt),
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub family: FamilyId,
    pub params: FamilyParams,
    pub moves: Vec<Move>,
}

impl Reduction {
    pub fn x(&self) -> AffineWeylElt {
        self.params.x(self.family)
    }
}

/// ν after the rotation: conjugating ε^ν by τ permutes the exponents.
pub fn phi_nu(nu: &[i64; 3]) -> [i64; 3] {
    [nu[2], nu[0], nu[1]]
}

/// ν after the duality: reverse and negate.
pub fn psi_nu(nu: &[i64; 3]) -> [i64; 3] {
    [-nu[2], -nu[1], -nu[0]]
}

fn s1s2() -> AffineWeylElt {
    AffineWeylElt::from_label(3, "s1s2").expect("label")
}

fn s2s1() -> AffineWeylElt {
    AffineWeylElt::from_label(3, "s2s1").expect("label")
}

fn eta3() -> AffineWeylElt {
    AffineWeylElt::from_label(3, "s1s2s1").expect("label")
}

/// The rotation on the affine Weyl group in closed coweight form:
/// ε^μ·w ↦ ε^{(−1,0,0) + c·(w·e₃) + c·μ}·(c∘w∘c⁻¹) where c is the
/// three-cycle sending 1 ↦ 2 and e₃ = (0,0,1). This is a second route to
/// the same map as conjugation by τ, used to cross-check it.
pub fn phi_formula(x: &AffineWeylElt) -> AffineWeylElt {
    let c = s1s2();
    let w = x.finite_part();
    let we3 = w.conjugate_coweight(&[0, 0, 1]);
    let t1 = c.conjugate_coweight(&we3);
    let t2 = c.conjugate_coweight(&x.mu);
    let mu: Vec<i64> = (0..3).map(|r| -i64::from(r == 0) + t1[r] + t2[r]).collect();
    let perm = c.compose(&w).compose(&s2s1());
    AffineWeylElt::new(mu, perm.perm)
}

/// The duality on the affine Weyl group in closed coweight form:
/// ε^μ·w ↦ ε^{−η·μ}·(η∘w∘η). A second route to g ↦ η(gᵗ)⁻¹η.
pub fn psi_formula(x: &AffineWeylElt) -> AffineWeylElt {
    let h = eta3();
    let w = x.finite_part();
    let hm = h.conjugate_coweight(&x.mu);
    let mu: Vec<i64> = hm.iter().map(|v| -v).collect();
    let perm = h.compose(&w).compose(&h);
    AffineWeylElt::new(mu, perm.perm)
}

fn is_descending(mu: &[i64]) -> bool {
    mu.windows(2).all(|w| w[0] >= w[1])
}

/// The finite element w with w·ν descending, for ν with distinct entries.
fn sort_chamber(nu: &[i64; 3]) -> AffineWeylElt {
    let mut sorted = *nu;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let perm: Vec<usize> = sorted
        .iter()
        .map(|s| nu.iter().position(|v| v == s).expect("present"))
        .collect();
    AffineWeylElt::new(vec![0; 3], perm)
}

fn family_of(x: &AffineWeylElt, nu: &[i64; 3]) -> Option<FamilyId> {
    let (d, e, f) = (x.mu[0], x.mu[1], x.mu[2]);
    let j = nu[1];
    match x.perm.as_slice() {
        [0, 1, 2] => {
            if is_descending(&x.mu) {
                Some(FamilyId::Translation)
            } else {
                None
            }
        }
        [1, 2, 0] => {
            if f > d.max(e) {
                if d <= e {
                    Some(FamilyId::S2s1DLeELtF)
                } else {
                    Some(FamilyId::S2s1ELtDLtF)
                }
            } else {
                None
            }
        }
        [2, 1, 0] => {
            if f <= d && d < e {
                Some(FamilyId::EtaFLeDLtE)
            } else if d < f && f <= e {
                Some(FamilyId::EtaDLtFLeE)
            } else if d < e && e < f && e >= j {
                Some(FamilyId::EtaDLtELtFEGeJ)
            } else if f <= e && e <= d && e >= j {
                Some(FamilyId::EtaFLeELeDEGeJ)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Finds the shortest transcript of duality and rotation moves carrying
/// (x, ν) onto a family pattern, finishing with a re-sort of ν when the
/// rotation disturbed dominance. Pairs no transcript reaches are
/// themselves the interesting output.
pub fn reduce_case(x: &AffineWeylElt, nu: &[i64; 3]) -> Result<Reduction> {
    if x.n() != 3 {
        return Err(Error::TooLarge);
    }
    if !crate::adlv::is_strictly_dominant(nu) {
        return Err(Error::InconsistentTuples);
    }
    for s in 0..=1u8 {
        for t in 0..=2u8 {
            let mut y = x.clone();
            let mut v = *nu;
            let mut moves = Vec::new();
            if s == 1 {
                y = psi_formula(&y);
                v = psi_nu(&v);
                moves.push(Move::Psi);
            }
            for _ in 0..t {
                y = phi_formula(&y);
                v = phi_nu(&v);
                moves.push(Move::Phi);
            }
            if !is_descending(&v) {
                let w = sort_chamber(&v);
                let sv = w.conjugate_coweight(&v);
                v = [sv[0], sv[1], sv[2]];
                moves.push(Move::Resort(w));
            }
            if let Some(family) = family_of(&y, &v) {
                return Ok(Reduction {
                    family,
                    params: FamilyParams {
                        def: [y.mu[0], y.mu[1], y.mu[2]],
                        nu: v,
                    },
                    moves,
                });
            }
        }
    }
    Err(Error::NotReducible)
}

/// Replays a transcript on a matrix.
pub fn transport_mat(g: &Mat, moves: &[Move], field: &FieldParams, prec: i64) -> Result<Mat> {
    let mut out = g.clone();
    for m in moves {
        out = match m {
            Move::Phi => apply_phi_mat(&out),
            Move::Psi => apply_psi_mat(&out)?,
            Move::Resort(w) => w.to_mat(field, prec).mul(&out),
        };
    }
    Ok(out)
}

//! Laurent series in ε over 𝔽_{p^m}, truncated at an explicit precision.
//!
//! A value represents a series known exactly on the window [vmin, prec) and
//! unknown from prec on. Every operation computes the largest precision that
//! the inputs justify; nothing is ever reported more precisely than it is
//! known. Indeterminacy (a series that is zero on its whole window) is a
//! first-class outcome, not an error.

use crate::arith::field::{FieldElem, FieldParams};
use crate::error::{Error, Result};
use rand::Rng;

/// Valuation of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    /// Zero everywhere below the stated precision: the true valuation is at
    /// least this bound, possibly +∞.
    PlusInfinityToPrecision(i64),
}

impl Valuation {
    /// The valuation as a lower bound, usable in precision formulas either
    /// way: a zero-to-precision series contributes its precision.
    pub fn lower_bound(self) -> i64 {
        match self {
            Valuation::Finite(v) => v,
            Valuation::PlusInfinityToPrecision(p) => p,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinityToPrecision(_) => None,
        }
    }
}

/// Truncated Laurent series.
///
/// Invariant: either `coeffs.len() == (prec - vmin)` with `coeffs[0] != 0`
/// (a series of exact valuation vmin), or `coeffs` is empty and
/// `vmin == prec` (zero to precision). `coeffs[i]` is the coefficient of
/// ε^(vmin + i); interior and trailing zeros are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    field: FieldParams,
    vmin: i64,
    coeffs: Vec<FieldElem>,
    prec: i64,
}

impl Series {
    pub fn zero(field: &FieldParams, prec: i64) -> Series {
        Series {
            field: field.clone(),
            vmin: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn one(field: &FieldParams, prec: i64) -> Series {
        Series::monomial(field, &field.one(), 0, prec)
    }

    /// c·ε^k, or zero-to-precision when c = 0 or k ≥ prec.
    pub fn monomial(field: &FieldParams, c: &FieldElem, k: i64, prec: i64) -> Series {
        if c.is_zero() || k >= prec {
            return Series::zero(field, prec);
        }
        let mut coeffs = vec![field.zero(); (prec - k) as usize];
        coeffs[0] = c.clone();
        Series {
            field: field.clone(),
            vmin: k,
            coeffs,
            prec,
        }
    }

    /// Builds from a coefficient window starting at vmin; coefficients at and
    /// beyond prec are dropped, the window is zero-padded up to prec, and the
    /// result is normalized.
    pub fn from_coeffs(field: &FieldParams, vmin: i64, coeffs: Vec<FieldElem>, prec: i64) -> Series {
        let mut s = Series {
            field: field.clone(),
            vmin,
            coeffs,
            prec,
        };
        s.coeffs
            .truncate((prec - vmin).max(0) as usize);
        s.coeffs
            .resize((prec - vmin).max(0) as usize, field.zero());
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.vmin += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.vmin = self.prec;
            }
        }
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        if self.coeffs.is_empty() {
            Valuation::PlusInfinityToPrecision(self.prec)
        } else {
            Valuation::Finite(self.vmin)
        }
    }

    /// Leading coefficient of a nonzero series.
    pub fn leading_coeff(&self) -> Result<&FieldElem> {
        self.coeffs.first().ok_or(Error::IndeterminateValuation)
    }

    /// The stored window: starting exponent and coefficients up to prec.
    pub fn window(&self) -> (i64, &[FieldElem]) {
        (self.vmin, &self.coeffs)
    }

    /// Coefficient of ε^k when it is known: zero below the window, stored
    /// inside it, unknown at and beyond prec.
    pub fn known_coeff(&self, k: i64) -> Option<FieldElem> {
        if k >= self.prec {
            None
        } else if k < self.vmin {
            Some(self.field.zero())
        } else {
            Some(self.coeffs[(k - self.vmin) as usize].clone())
        }
    }

    /// Whether val ≥ bound can be decided from the window: `Some` when the
    /// window settles it, `None` when the series is zero to a precision
    /// short of the bound.
    pub fn val_at_least(&self, bound: i64) -> Option<bool> {
        if self.coeffs.is_empty() {
            if self.prec >= bound {
                Some(true)
            } else {
                None
            }
        } else {
            Some(self.vmin >= bound)
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        debug_assert_eq!(self.field, other.field);
        let prec = self.prec.min(other.prec);
        let vmin = self.vmin.min(other.vmin).min(prec);
        let len = (prec - vmin) as usize;
        let mut coeffs = vec![self.field.zero(); len];
        for (s, off) in [(self, self.vmin - vmin), (other, other.vmin - vmin)] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let idx = i as i64 + off;
                if (0..len as i64).contains(&idx) {
                    coeffs[idx as usize] = self.field.add(&coeffs[idx as usize], c);
                }
            }
        }
        let mut out = Series {
            field: self.field.clone(),
            vmin,
            coeffs,
            prec,
        };
        out.normalize();
        out
    }

    pub fn neg(&self) -> Series {
        Series {
            field: self.field.clone(),
            vmin: self.vmin,
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    /// Product. The result window length is the shorter of the two input
    /// windows: unknown coefficients of one factor meet only known leading
    /// zeros of the other below that cutoff, so every kept coefficient is
    /// exact. Zero-to-precision inputs follow the same formula through
    /// vmin == prec.
    pub fn mul(&self, other: &Series) -> Series {
        debug_assert_eq!(self.field, other.field);
        let vmin = self.vmin + other.vmin;
        let len = self.coeffs.len().min(other.coeffs.len());
        let prec = vmin + len as i64;
        let mut coeffs = vec![self.field.zero(); len];
        for k in 0..len {
            let mut acc = self.field.zero();
            for i in 0..=k {
                acc = self
                    .field
                    .add(&acc, &self.field.mul(&self.coeffs[i], &other.coeffs[k - i]));
            }
            coeffs[k] = acc;
        }
        let mut out = Series {
            field: self.field.clone(),
            vmin,
            coeffs,
            prec,
        };
        out.normalize();
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Series {
        if c.is_zero() {
            // Scaling by zero loses nothing: the result is zero wherever the
            // input was known.
            return Series::zero(&self.field, self.prec);
        }
        let mut out = Series {
            field: self.field.clone(),
            vmin: self.vmin,
            coeffs: self.coeffs.iter().map(|x| self.field.mul(x, c)).collect(),
            prec: self.prec,
        };
        out.normalize();
        out
    }

    /// Multiplication by ε^k.
    pub fn shift(&self, k: i64) -> Series {
        Series {
            field: self.field.clone(),
            vmin: self.vmin + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    /// Inverse of a series of exact valuation v, known to precision
    /// prec − 2v. Zero-to-precision input is not invertible in this
    /// representation.
    pub fn inv(&self) -> Result<Series> {
        if self.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let len = self.coeffs.len();
        let u0_inv = f.inv(&self.coeffs[0])?;
        let mut w = vec![f.zero(); len];
        w[0] = u0_inv.clone();
        for n in 1..len {
            let mut acc = f.zero();
            for i in 1..=n {
                acc = f.add(&acc, &f.mul(&self.coeffs[i], &w[n - i]));
            }
            w[n] = f.neg(&f.mul(&u0_inv, &acc));
        }
        Ok(Series {
            field: f.clone(),
            vmin: -self.vmin,
            coeffs: w,
            prec: -self.vmin + len as i64,
        })
    }

    /// Coefficient-wise Frobenius; ε is fixed, so the window is unchanged.
    pub fn sigma(&self) -> Series {
        Series {
            field: self.field.clone(),
            vmin: self.vmin,
            coeffs: self.coeffs.iter().map(|c| self.field.frobenius(c)).collect(),
            prec: self.prec,
        }
    }

    /// Solves ε^r·σ(y) − y = a for y, coefficient by coefficient from the
    /// valuation of a upward: y_v = −a_v, then y_n = (y_{n−r})^p − a_n.
    /// The solution has the same valuation and precision as a.
    pub fn solve_twisted(r: i64, a: &Series) -> Result<Series> {
        if r <= 0 {
            return Err(Error::InvalidTwist);
        }
        if a.coeffs.is_empty() {
            return Ok(Series::zero(&a.field, a.prec));
        }
        let f = &a.field;
        let len = a.coeffs.len();
        let mut y = vec![f.zero(); len];
        for n in 0..len {
            let prev = if (n as i64) >= r {
                f.frobenius(&y[n - r as usize])
            } else {
                f.zero()
            };
            y[n] = f.sub(&prev, &a.coeffs[n]);
        }
        Ok(Series {
            field: f.clone(),
            vmin: a.vmin,
            coeffs: y,
            prec: a.prec,
        })
    }

    /// Random series of exact valuation v: nonzero leading coefficient,
    /// uniform window above it.
    pub fn random(field: &FieldParams, v: i64, prec: i64, rng: &mut impl Rng) -> Series {
        assert!(prec > v, "window must have room for a nonzero leading term");
        let len = (prec - v) as usize;
        let mut coeffs = Vec::with_capacity(len);
        coeffs.push(field.random_nonzero(rng));
        for _ in 1..len {
            coeffs.push(field.random(rng));
        }
        Series {
            field: field.clone(),
            vmin: v,
            coeffs,
            prec,
        }
    }

    /// Coefficient agreement strictly below the cutoff; both series must
    /// know all of it.
    pub fn agrees_to(&self, other: &Series, cutoff: i64) -> bool {
        if self.prec < cutoff || other.prec < cutoff {
            return false;
        }
        let lo = self.vmin.min(other.vmin);
        (lo..cutoff).all(|k| self.known_coeff(k) == other.known_coeff(k))
    }

    /// Same known window and same coefficients on it.
    pub fn same_window(&self, other: &Series) -> bool {
        self.vmin == other.vmin && self.prec == other.prec && self.coeffs == other.coeffs
    }

    /// Truncates to a lower precision (no-op if already at or below it).
    pub fn truncate(&self, prec: i64) -> Series {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = (prec - self.vmin).max(0) as usize;
        let mut out = Series {
            field: self.field.clone(),
            vmin: self.vmin.min(prec),
            coeffs: self.coeffs[..keep.min(self.coeffs.len())].to_vec(),
            prec,
        };
        if out.coeffs.is_empty() {
            out.vmin = prec;
        }
        out.normalize();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FieldParams {
        FieldParams::new(5, 1).unwrap()
    }

    fn s(field: &FieldParams, vmin: i64, ints: &[i64], prec: i64) -> Series {
        let coeffs = ints.iter().map(|&v| field.from_int(v)).collect();
        Series::from_coeffs(field, vmin, coeffs, prec)
    }

    #[test]
    fn normalization_and_valuation() {
        let f = f5();
        let a = s(&f, -2, &[0, 0, 3, 0, 1], 3);
        assert_eq!(a.valuation(), Valuation::Finite(0));
        assert_eq!(a.window().0, 0);
        assert_eq!(a.window().1.len(), 3);
        let z = s(&f, -2, &[0, 0, 0], 1);
        assert_eq!(z.valuation(), Valuation::PlusInfinityToPrecision(1));
        assert!(z.is_zero());
    }

    #[test]
    fn add_takes_min_precision() {
        let f = f5();
        let a = s(&f, 0, &[1, 2, 3, 4], 4);
        let b = s(&f, -1, &[2, 0, 1], 2);
        let c = a.add(&b);
        assert_eq!(c.prec(), 2);
        assert_eq!(c.known_coeff(-1), Some(f.from_int(2)));
        assert_eq!(c.known_coeff(0), Some(f.from_int(1)));
        assert_eq!(c.known_coeff(1), Some(f.from_int(3)));
        assert_eq!(c.known_coeff(2), None);
    }

    #[test]
    fn cancellation_is_honest() {
        let f = f5();
        let a = s(&f, 0, &[1, 2], 2);
        let b = s(&f, 0, &[4, 3], 2);
        let c = a.add(&b);
        assert_eq!(c.valuation(), Valuation::PlusInfinityToPrecision(2));
    }

    #[test]
    fn mul_precision_rule() {
        let f = f5();
        // val 1 known to 5 (window length 4) times val -2 known to 4
        // (window length 6): product window length 4, prec = -1 + 4 = 3.
        let a = s(&f, 1, &[1, 0, 0, 2], 5);
        let b = s(&f, -2, &[3, 0, 0, 0, 0, 1], 4);
        let c = a.mul(&b);
        assert_eq!(c.valuation(), Valuation::Finite(-1));
        assert_eq!(c.prec(), 3);
        assert_eq!(c.known_coeff(-1), Some(f.from_int(3)));
        assert_eq!(c.known_coeff(2), Some(f.from_int(6 % 5)));
    }

    #[test]
    fn mul_with_zero_keeps_sound_precision() {
        let f = f5();
        let z = Series::zero(&f, 5);
        let a = s(&f, 2, &[1, 1], 9);
        let c = z.mul(&a);
        assert!(c.is_zero());
        assert_eq!(c.prec(), 7);
    }

    #[test]
    fn inverse_recurrence() {
        let f = f5();
        let a = s(&f, -3, &[2, 1, 0, 4, 0, 0, 1, 3], 5);
        let ai = a.inv().unwrap();
        assert_eq!(ai.valuation(), Valuation::Finite(3));
        assert_eq!(ai.prec(), 5 - 2 * (-3));
        let prod = a.mul(&ai);
        let one = Series::one(&f, prod.prec());
        assert!(prod.same_window(&one.truncate(prod.prec())));
        assert!(Series::zero(&f, 4).inv().is_err());
    }

    #[test]
    fn shift_and_scale() {
        let f = f5();
        let a = s(&f, 1, &[2, 3], 3);
        let b = a.shift(-4);
        assert_eq!(b.valuation(), Valuation::Finite(-3));
        assert_eq!(b.prec(), -1);
        let c = a.scale(&f.from_int(3));
        assert_eq!(c.known_coeff(1), Some(f.from_int(1)));
        let d = a.scale(&f.zero());
        assert!(d.is_zero());
        assert_eq!(d.prec(), 3);
    }

    #[test]
    fn solve_twisted_contract() {
        let f = f5();
        let a = s(&f, -2, &[1, 2, 0, 3, 4, 1, 0, 2], 6);
        for r in 1..=4 {
            let y = Series::solve_twisted(r, &a).unwrap();
            assert_eq!(y.valuation(), a.valuation());
            assert_eq!(y.prec(), a.prec());
            // Residual ε^r σ(y) − y − a must vanish on the window of a.
            let resid = y.sigma().shift(r).sub(&y).sub(&a);
            assert!(resid.is_zero(), "r = {r}: residual {resid:?}");
            assert_eq!(resid.prec(), a.prec());
        }
        assert!(Series::solve_twisted(0, &a).is_err());
        assert!(Series::solve_twisted(-1, &a).is_err());
        let z = Series::zero(&f, 6);
        let yz = Series::solve_twisted(2, &z).unwrap();
        assert!(yz.is_zero());
        assert_eq!(yz.prec(), 6);
    }

    #[test]
    fn solve_twisted_nonneg_valuation_closure() {
        let f = FieldParams::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let v = rng.gen_range(0..4);
            let a = Series::random(&f, v, 12, &mut rng);
            let y = Series::solve_twisted(2, &a).unwrap();
            assert_eq!(y.valuation(), Valuation::Finite(v));
        }
    }

    #[test]
    fn sigma_is_ring_endomorphism() {
        let f = FieldParams::new(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let a = Series::random(&f, rng.gen_range(-3..3), 8, &mut rng);
            let b = Series::random(&f, rng.gen_range(-3..3), 8, &mut rng);
            assert!(a.sigma().mul(&b.sigma()).same_window(&a.mul(&b).sigma()));
            assert!(a.sigma().add(&b.sigma()).same_window(&a.add(&b).sigma()));
        }
    }

    #[test]
    fn val_at_least_decisions() {
        let f = f5();
        let a = s(&f, 2, &[1], 3);
        assert_eq!(a.val_at_least(2), Some(true));
        assert_eq!(a.val_at_least(3), Some(false));
        let z = Series::zero(&f, 1);
        assert_eq!(z.val_at_least(0), Some(true));
        assert_eq!(z.val_at_least(1), Some(true));
        assert_eq!(z.val_at_least(2), None);
    }
}

//! Twisted conjugation by ε^ν: the map g ↦ g⁻¹·ε^ν·σ(g), membership of the
//! resulting coset, the unipotent orbit map f_ν and its inverse, and the
//! finite quotient tables that certify f_ν is a bijection level by level.

use crate::arith::field::FieldParams;
use crate::arith::series::{Series, Valuation};
use crate::coset::classify_double_coset;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::weyl::AffineWeylElt;

fn nu_span(nu: &[i64]) -> i64 {
    let hi = nu.iter().copied().max().unwrap_or(0);
    let lo = nu.iter().copied().min().unwrap_or(0);
    hi - lo
}

pub fn is_strictly_dominant(nu: &[i64]) -> bool {
    nu.windows(2).all(|w| w[0] > w[1])
}

/// h(g) = g⁻¹·ε^ν·σ(g).
pub fn h_map(g: &Mat, nu: &[i64]) -> Result<Mat> {
    debug_assert_eq!(g.n(), nu.len());
    let d = Mat::diag_monomials(g.field(), nu, g.min_prec() + 2 * nu_span(nu) + 2);
    Ok(g.inv()?.mul(&d).mul(&g.sigma()))
}

/// Whether g lies in the variety attached to x at coweight ν: the twisted
/// conjugate h(g) must classify to x.
pub fn in_adlv(g: &Mat, x: &AffineWeylElt, nu: &[i64]) -> Result<bool> {
    Ok(classify_double_coset(&h_map(g, nu)?)? == *x)
}

/// The three twisted half-sums attached to an upper unipotent
/// [[1,a,b],[0,1,c],[0,0,1]] at ν = (i,j,k), together with the 2×2 minor
/// that couples them:
///   α = ε^i σ(a) − ε^j a
///   γ = ε^j σ(c) − ε^k c
///   β = ε^i σ(b) − ε^k b − a·γ
///   minor = β·ε^j − α·γ.
#[derive(Debug, Clone)]
pub struct AbcInvariants {
    pub alpha: Series,
    pub beta: Series,
    pub gamma: Series,
    pub minor: Series,
}

pub fn abc_invariants(a: &Series, b: &Series, c: &Series, nu: &[i64; 3]) -> AbcInvariants {
    let [i, j, k] = *nu;
    let alpha = a.sigma().shift(i).sub(&a.shift(j));
    let gamma = c.sigma().shift(j).sub(&c.shift(k));
    let beta = b.sigma().shift(i).sub(&b.shift(k)).sub(&a.mul(&gamma));
    let minor = beta.shift(j).sub(&alpha.mul(&gamma));
    AbcInvariants {
        alpha,
        beta,
        gamma,
        minor,
    }
}

fn assert_upper_unipotent(g: &Mat) {
    let n = g.n();
    for i in 0..n {
        for j in 0..n {
            let e = g.entry(i, j);
            match i.cmp(&j) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => assert!(
                    e.valuation() == Valuation::Finite(0)
                        && e.leading_coeff().map(|c| c.is_one()).unwrap_or(false)
                        && e.window().1[1..].iter().all(|c| c.is_zero()),
                    "diagonal of a unipotent matrix must be exactly one"
                ),
                std::cmp::Ordering::Greater => assert!(
                    e.is_zero(),
                    "entries below the diagonal of a unipotent matrix must vanish"
                ),
            }
        }
    }
}

/// f_ν(g) = g⁻¹·ε^ν·σ(g)·ε^{−ν} for upper unipotent g, computed entry by
/// entry from the diagonal outward:
///   f_{ij} = ε^{ν_i−ν_j}·σ(g_{ij}) − g_{ij} − Σ_{i<k<j} g_{ik}·f_{kj}.
///
/// Panics if g is not upper unipotent through its windows. Debug builds
/// cross-check the recursion against the defining product.
pub fn f_nu(g: &Mat, nu: &[i64]) -> Mat {
    assert_upper_unipotent(g);
    let n = g.n();
    let field = g.field();
    let base = g.min_prec() + nu_span(nu) + 2;
    let mut f = Mat::identity(field, n, base);
    for width in 1..n {
        for i in 0..n - width {
            let j = i + width;
            let r = nu[i] - nu[j];
            let mut e = g.entry(i, j).sigma().shift(r).sub(g.entry(i, j));
            for k in i + 1..j {
                e = e.sub(&g.entry(i, k).mul(f.entry(k, j)));
            }
            f.set_entry(i, j, e);
        }
    }
    #[cfg(debug_assertions)]
    {
        let direct = h_map(g, nu)
            .expect("unipotent matrices invert")
            .mul(&Mat::diag_monomials(
                field,
                &nu.iter().map(|v| -v).collect::<Vec<_>>(),
                g.min_prec() + 2 * nu_span(nu) + 2,
            ));
        for i in 0..n {
            for j in 0..n {
                let lhs = f.entry(i, j);
                let rhs = direct.entry(i, j);
                let cutoff = lhs.prec().min(rhs.prec());
                debug_assert!(
                    lhs.agrees_to(rhs, cutoff),
                    "orbit map recursion disagrees with the defining product at ({i},{j})"
                );
            }
        }
    }
    f
}

/// Inverse of f_ν on upper unipotent matrices: each entry solves a twisted
/// equation sourced by already-known inner entries. Requires ν strictly
/// dominant so every twist exponent is positive.
pub fn f_nu_inverse(h: &Mat, nu: &[i64]) -> Result<Mat> {
    assert_upper_unipotent(h);
    if !is_strictly_dominant(nu) {
        return Err(Error::InvalidTwist);
    }
    let n = h.n();
    let field = h.field();
    let base = h.min_prec() + nu_span(nu) + 2;
    let mut g = Mat::identity(field, n, base);
    for width in 1..n {
        for i in 0..n - width {
            let j = i + width;
            let mut rhs = h.entry(i, j).clone();
            for k in i + 1..j {
                rhs = rhs.add(&g.entry(i, k).mul(h.entry(k, j)));
            }
            let r = nu[i] - nu[j];
            g.set_entry(i, j, Series::solve_twisted(r, &rhs)?);
        }
    }
    Ok(g)
}

/// The induced permutation of Ū = U_N / U_{m,N}: every coset is keyed by the
/// m coefficients of each strictly upper entry starting at ε^{(j−i)N},
/// mixed-radix over the field order.
pub struct FBarTable {
    field: FieldParams,
    n: usize,
    depth: i64,
    shift: i64,
    rep_prec: i64,
    pub size: u64,
    /// map[key] = key of f̄_ν(coset with that key).
    pub map: Vec<u64>,
}

pub fn f_bar_nu_table(
    n: usize,
    depth: i64,
    shift: i64,
    nu: &[i64],
    field: &FieldParams,
) -> Result<FBarTable> {
    if !is_strictly_dominant(nu) || nu.len() != n || depth < 1 {
        return Err(Error::InvalidTwist);
    }
    let q = field.q();
    let digits = n * (n - 1) / 2 * depth as usize;
    let mut size: u64 = 1;
    for _ in 0..digits {
        size = size.saturating_mul(q);
        if size > 4096 {
            return Err(Error::TooLarge);
        }
    }
    let rep_prec = (n as i64) * (shift.abs() + 1) + depth + nu_span(nu) + 8;
    let mut table = FBarTable {
        field: field.clone(),
        n,
        depth,
        shift,
        rep_prec,
        size,
        map: Vec::with_capacity(size as usize),
    };
    for key in 0..size {
        let g = table.rep_of_key(key);
        let f = f_nu(&g, nu);
        let image = table.key_of(&f)?;
        table.map.push(image);
    }
    Ok(table)
}

impl FBarTable {
    /// Entry order behind the mixed-radix key: strictly upper positions in
    /// row-major order, least significant first, with the m coefficients of
    /// an entry ordered by exponent.
    fn positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push((i, j));
            }
        }
        out
    }

    /// Canonical representative: each strictly upper entry is exactly the
    /// keyed polynomial, zero elsewhere through a generous window.
    pub fn rep_of_key(&self, key: u64) -> Mat {
        let q = self.field.q();
        let elems = self.field.all_elems();
        let mut digits = key;
        let mut g = Mat::identity(&self.field, self.n, self.rep_prec);
        for (i, j) in self.positions() {
            let vmin = (j as i64 - i as i64) * self.shift;
            let mut coeffs = vec![self.field.zero(); (self.rep_prec - vmin) as usize];
            for t in 0..self.depth as usize {
                coeffs[t] = elems[(digits % q) as usize].clone();
                digits /= q;
            }
            g.set_entry(
                i,
                j,
                Series::from_coeffs(&self.field, vmin, coeffs, self.rep_prec),
            );
        }
        g
    }

    /// Key of a coset from any representative in U_N.
    pub fn key_of(&self, g: &Mat) -> Result<u64> {
        let q = self.field.q();
        let mut key: u64 = 0;
        let mut place: u64 = 1;
        for (i, j) in self.positions() {
            let vmin = (j as i64 - i as i64) * self.shift;
            for t in 0..self.depth {
                let c = g
                    .entry(i, j)
                    .known_coeff(vmin + t)
                    .ok_or(Error::PrecisionExhausted)?;
                key += self.field.elem_index(&c) * place;
                place *= q;
            }
        }
        Ok(key)
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.size as usize];
        self.map
            .iter()
            .all(|&k| !std::mem::replace(&mut seen[k as usize], true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{in_congruence_subgroup, upper_unipotent3};
    use crate::weyl::parse_weyl;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FieldParams {
        FieldParams::new(5, 1).unwrap()
    }

    fn random_unipotent(field: &FieldParams, span: i64, prec: i64, rng: &mut ChaCha8Rng) -> Mat {
        let a = Series::random(field, rng.gen_range(-span..=span), prec, rng);
        let b = Series::random(field, rng.gen_range(-span..=span), prec, rng);
        let c = Series::random(field, rng.gen_range(-span..=span), prec, rng);
        upper_unipotent3(field, &a, &b, &c)
    }

    fn random_dominant(span: i64, rng: &mut ChaCha8Rng) -> [i64; 3] {
        loop {
            let i = rng.gen_range(-span..=span);
            let j = rng.gen_range(-span..=span);
            let k = rng.gen_range(-span..=span);
            if i > j && j > k {
                return [i, j, k];
            }
        }
    }

    #[test]
    fn twisted_half_sums_match_the_product() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let a = Series::random(&f, rng.gen_range(-3..3), 30, &mut rng);
            let b = Series::random(&f, rng.gen_range(-3..3), 30, &mut rng);
            let c = Series::random(&f, rng.gen_range(-3..3), 30, &mut rng);
            let nu = random_dominant(4, &mut rng);
            let g = upper_unipotent3(&f, &a, &b, &c);
            let h = h_map(&g, &nu).unwrap();
            let inv = abc_invariants(&a, &b, &c, &nu);
            for (got, want) in [
                (h.entry(0, 1), &inv.alpha),
                (h.entry(0, 2), &inv.beta),
                (h.entry(1, 2), &inv.gamma),
            ] {
                let cutoff = got.prec().min(want.prec());
                assert!(got.agrees_to(want, cutoff));
            }
            // Diagonal of h is exactly ε^ν.
            for (idx, e) in [(0usize, nu[0]), (1, nu[1]), (2, nu[2])] {
                assert_eq!(h.entry(idx, idx).valuation(), Valuation::Finite(e));
            }
            // The minor couples to the twisted data of b with an α-correction.
            let direct = b
                .sigma()
                .shift(nu[0] + nu[1])
                .sub(&b.shift(nu[2] + nu[1]))
                .sub(&a.sigma().shift(nu[0]).mul(&inv.gamma));
            let cutoff = inv.minor.prec().min(direct.prec());
            assert!(inv.minor.agrees_to(&direct, cutoff));
        }
    }

    #[test]
    fn alpha_gamma_valuations_are_forced() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..40 {
            let nu = random_dominant(4, &mut rng);
            let a = Series::random(&f, rng.gen_range(-4..4), 30, &mut rng);
            let c = Series::random(&f, rng.gen_range(-4..4), 30, &mut rng);
            let b = Series::random(&f, 0, 30, &mut rng);
            let inv = abc_invariants(&a, &b, &c, &nu);
            // ε^j·a dominates ε^i·σ(a) since i > j, so val(α) = j + val(a).
            assert_eq!(
                inv.alpha.valuation(),
                Valuation::Finite(nu[1] + a.valuation().finite().unwrap())
            );
            assert_eq!(
                inv.gamma.valuation(),
                Valuation::Finite(nu[2] + c.valuation().finite().unwrap())
            );
        }
    }

    #[test]
    fn orbit_map_recursion_is_the_product_formula() {
        // The debug cross-check inside f_nu runs the comparison; this test
        // exercises it over many samples and both ranks.
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..50 {
            let g = random_unipotent(&f, 3, 28, &mut rng);
            let nu = random_dominant(4, &mut rng);
            let fm = f_nu(&g, &nu);
            assert_eq!(fm.entry(1, 0).is_zero(), true);
            assert!(fm.entry(0, 0).sub(&Series::one(&f, 20)).is_zero());
        }
        let a = Series::random(&f, -2, 24, &mut rng);
        let g2 = crate::linalg::upper_unipotent2(&f, &a);
        let f2 = f_nu(&g2, &[1, -1]);
        let expect = a.sigma().shift(2).sub(&a);
        let cutoff = f2.entry(0, 1).prec().min(expect.prec());
        assert!(f2.entry(0, 1).agrees_to(&expect, cutoff));
    }

    #[test]
    fn orbit_map_round_trips() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..30 {
            let nu = random_dominant(4, &mut rng);
            let g = random_unipotent(&f, 3, 28, &mut rng);
            let h = f_nu(&g, &nu);
            let back = f_nu_inverse(&h, &nu).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let cutoff = back.entry(i, j).prec().min(g.entry(i, j).prec());
                    assert!(back.entry(i, j).agrees_to(g.entry(i, j), cutoff));
                }
            }
            let h2 = f_nu(&back, &nu);
            for i in 0..3 {
                for j in 0..3 {
                    let cutoff = h2.entry(i, j).prec().min(h.entry(i, j).prec());
                    assert!(h2.entry(i, j).agrees_to(h.entry(i, j), cutoff));
                }
            }
        }
        // Non-dominant twists are rejected.
        let g = random_unipotent(&f, 2, 24, &mut rng);
        assert!(matches!(
            f_nu_inverse(&g, &[1, 1, -2]),
            Err(Error::InvalidTwist)
        ));
    }

    #[test]
    fn orbit_map_preserves_integral_unipotents_both_ways() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..30 {
            let nu = random_dominant(4, &mut rng);
            let a = Series::random(&f, rng.gen_range(0..3), 26, &mut rng);
            let b = Series::random(&f, rng.gen_range(0..3), 26, &mut rng);
            let c = Series::random(&f, rng.gen_range(0..3), 26, &mut rng);
            let g = upper_unipotent3(&f, &a, &b, &c);
            assert_eq!(in_congruence_subgroup(&f_nu(&g, &nu), 0, 0).unwrap(), true);
            let back = f_nu_inverse(&g, &nu).unwrap();
            assert_eq!(in_congruence_subgroup(&back, 0, 0).unwrap(), true);
        }
    }

    #[test]
    fn orbit_map_preserves_adjacent_entry_valuations() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..40 {
            let nu = random_dominant(4, &mut rng);
            let g = random_unipotent(&f, 3, 28, &mut rng);
            let fm = f_nu(&g, &nu);
            for (i, j) in [(0usize, 1usize), (1, 2)] {
                assert_eq!(fm.entry(i, j).valuation(), g.entry(i, j).valuation());
            }
            let back = f_nu_inverse(&fm, &nu).unwrap();
            for (i, j) in [(0usize, 1usize), (1, 2)] {
                assert_eq!(back.entry(i, j).valuation(), fm.entry(i, j).valuation());
            }
        }
    }

    #[test]
    fn membership_in_the_variety_of_the_twist() {
        let f = f5();
        // ε^ν itself is twisted-conjugated to ε^ν by the identity.
        let nu = [1i64, 0, -1];
        let id = Mat::identity(&f, 3, 26);
        let x = parse_weyl("e^(1,0,-1)*1", 3).unwrap();
        assert_eq!(in_adlv(&id, &x, &nu).unwrap(), true);
        let y = parse_weyl("e^(1,0,-1)*s1", 3).unwrap();
        assert_eq!(in_adlv(&id, &y, &nu).unwrap(), false);
    }

    #[test]
    fn quotient_tables_have_the_right_sizes_and_are_bijections() {
        for (n, p, depth, shift, want) in [
            (2usize, 2u64, 1i64, 0i64, 2u64),
            (2, 3, 1, 0, 3),
            (3, 2, 1, 0, 8),
        ] {
            let field = FieldParams::new(p, 1).unwrap();
            let nu: Vec<i64> = match n {
                2 => vec![1, -1],
                _ => vec![2, 0, -2],
            };
            let t = f_bar_nu_table(n, depth, shift, &nu, &field).unwrap();
            assert_eq!(t.size, want);
            assert!(t.is_bijection());
        }
    }

    #[test]
    fn quotient_keys_ignore_the_representative() {
        let f3 = FieldParams::new(3, 1).unwrap();
        let nu = vec![2, 0, -2];
        let t = f_bar_nu_table(3, 1, 0, &nu, &f3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let key = rng.gen_range(0..t.size);
            let rep = t.rep_of_key(key);
            assert_eq!(t.key_of(&rep).unwrap(), key);
            // Deeper-level perturbations leave the key and the image alone.
            let deep = upper_unipotent3(
                &f3,
                &Series::random(&f3, rng.gen_range(1..4), 24, &mut rng),
                &Series::random(&f3, rng.gen_range(1..4), 24, &mut rng),
                &Series::random(&f3, rng.gen_range(1..4), 24, &mut rng),
            );
            for moved in [rep.mul(&deep), deep.mul(&rep)] {
                assert_eq!(t.key_of(&moved).unwrap(), key);
                let image = t.key_of(&f_nu(&moved, &nu)).unwrap();
                assert_eq!(image, t.map[key as usize]);
            }
        }
    }

    #[test]
    fn quotient_table_guards() {
        let f5 = f5();
        assert!(matches!(
            f_bar_nu_table(3, 3, 0, &[2, 0, -2], &f5),
            Err(Error::TooLarge)
        ));
        assert!(matches!(
            f_bar_nu_table(3, 1, 0, &[0, 0, 0], &f5),
            Err(Error::InvalidTwist)
        ));
    }
}

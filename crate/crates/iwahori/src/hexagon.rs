//! The six-vertex figure traced out by retracting one matrix from every
//! chamber at infinity, with exact apartment geometry: containment of one
//! figure in another, shared antipodal vertices, corner cones, and an SVG
//! rendering of the projected picture.

use num_rational::Rational64;
use serde::Serialize;

use crate::coset::retract_weyl;
use crate::error::Result;
use crate::linalg::Mat;
use crate::weyl::{base_point, eta, render_weyl, AffineWeylElt};

/// Chamber labels in the fixed corner order used throughout.
pub const CORNERS: [&str; 6] = ["1", "s1", "s2", "s1s2", "s2s1", "s1s2s1"];

/// Corner order that walks the boundary cyclically; adjacent corners have
/// finite parts whose lengths differ by one.
const CYCLE: [usize; 6] = [0, 1, 4, 5, 3, 2];

/// Inward edge directions at each corner, as coweights: the directions to
/// the two cyclically adjacent vertices of a nondegenerate figure. They
/// span the 120 degree cone of the closure argument.
const CONE_DIRS: [[[i64; 3]; 2]; 6] = [
    [[-1, 1, 0], [0, -1, 1]],
    [[1, -1, 0], [-1, 0, 1]],
    [[0, 1, -1], [-1, 0, 1]],
    [[1, 0, -1], [-1, 1, 0]],
    [[1, 0, -1], [0, -1, 1]],
    [[1, -1, 0], [0, 1, -1]],
];

/// Directions of the drawn sides between consecutive boundary corners,
/// following CYCLE. Walking them in order turns left by 60 degrees each
/// step, so a figure whose sides all run strictly this way is a convex
/// counterclockwise hexagon.
const EDGE_DIRS: [[i64; 3]; 6] = [
    [-1, 1, 0],
    [-1, 0, 1],
    [0, -1, 1],
    [1, -1, 0],
    [1, 0, -1],
    [0, 1, -1],
];

fn corner_index(label: &str) -> usize {
    CORNERS
        .iter()
        .position(|&c| c == label)
        .expect("chamber label")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hexagon {
    verts: [AffineWeylElt; 6],
}

/// Projection of an apartment point onto the rank-two slice, exactly.
fn project(z: &[Rational64]) -> (Rational64, Rational64) {
    (z[0] - z[1], z[1] - z[2])
}

fn cross(
    o: (Rational64, Rational64),
    a: (Rational64, Rational64),
    b: (Rational64, Rational64),
) -> Rational64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone-chain convex hull, counterclockwise, no repeated endpoint.
fn hull(points: &[(Rational64, Rational64)]) -> Vec<(Rational64, Rational64)> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(Rational64, Rational64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.into()
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(Rational64, Rational64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.into()
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn point_in_hull(h: &[(Rational64, Rational64)], p: (Rational64, Rational64)) -> bool {
    match h.len() {
        0 => false,
        1 => h[0] == p,
        2 => {
            let (a, b) = (h[0], h[1]);
            if cross(a, b, p) != 0.into() {
                return false;
            }
            let dot = (p.0 - a.0) * (b.0 - a.0) + (p.1 - a.1) * (b.1 - a.1);
            let len2 = (b.0 - a.0) * (b.0 - a.0) + (b.1 - a.1) * (b.1 - a.1);
            dot >= 0.into() && dot <= len2
        }
        n => (0..n).all(|i| cross(h[i], h[(i + 1) % n], p) >= 0.into()),
    }
}

impl Hexagon {
    pub fn new(verts: [AffineWeylElt; 6]) -> Hexagon {
        Hexagon { verts }
    }

    pub fn vertex(&self, label: &str) -> &AffineWeylElt {
        &self.verts[corner_index(label)]
    }

    pub fn vertices(&self) -> &[AffineWeylElt; 6] {
        &self.verts
    }

    /// Apartment point of the vertex at a corner.
    pub fn vertex_point(&self, label: &str) -> Vec<Rational64> {
        self.vertex(label).act_on_point(&base_point())
    }

    pub fn points(&self) -> Vec<Vec<Rational64>> {
        CORNERS.iter().map(|c| self.vertex_point(c)).collect()
    }

    /// Shift every vertex by the coweight delta.
    pub fn translate(&self, delta: &[i64]) -> Hexagon {
        let t = AffineWeylElt::translation(delta);
        Hexagon {
            verts: self
                .verts
                .clone()
                .map(|v| t.compose(&v)),
        }
    }
}

/// Retract g from all six chambers.
pub fn hexagon_of(g: &Mat) -> Result<Hexagon> {
    let mut verts = Vec::with_capacity(6);
    for label in CORNERS {
        let w = AffineWeylElt::from_label(3, label)?;
        verts.push(retract_weyl(g, &w)?);
    }
    Ok(Hexagon {
        verts: verts.try_into().expect("six chambers"),
    })
}

/// The corner antipodal to the given one.
pub fn opposite_corner(label: &str) -> &'static str {
    let w = AffineWeylElt::from_label(3, label).expect("chamber label");
    eta()
        .compose(&w)
        .finite_label()
        .expect("rank-two labels close under composition")
}

/// Whether two figures share the vertex at a corner together with the
/// vertex at the antipodal corner, as affine Weyl elements.
pub fn shares_opposite_vertices(h1: &Hexagon, h2: &Hexagon, label: &str) -> bool {
    let opp = opposite_corner(label);
    h1.vertex(label) == h2.vertex(label) && h1.vertex(opp) == h2.vertex(opp)
}

/// Whether the convex hull of outer's vertices contains every vertex of
/// inner, computed exactly in the projected apartment.
pub fn hexagon_contains(outer: &Hexagon, inner: &Hexagon) -> bool {
    let outer_pts: Vec<_> = outer.points().iter().map(|z| project(z)).collect();
    let h = hull(&outer_pts);
    inner
        .points()
        .iter()
        .all(|z| point_in_hull(&h, project(z)))
}

/// Whether an apartment point lies in the convex hull of the figure's
/// vertices, computed exactly in the projected apartment.
pub fn hexagon_contains_point(outer: &Hexagon, point: &[Rational64]) -> bool {
    let outer_pts: Vec<_> = outer.points().iter().map(|z| project(z)).collect();
    point_in_hull(&hull(&outer_pts), project(point))
}

/// Whether a point lies in the 120 degree cone based at the given corner of
/// the figure, spanned by that corner's two inward edge directions.
pub fn in_corner_cone(hex: &Hexagon, label: &str, point: &[Rational64]) -> bool {
    let apex = project(&hex.vertex_point(label));
    let p = project(point);
    let dirs = CONE_DIRS[corner_index(label)];
    let to_rat = |d: [i64; 3]| {
        project(&[
            Rational64::from(d[0]),
            Rational64::from(d[1]),
            Rational64::from(d[2]),
        ])
    };
    let d1 = to_rat(dirs[0]);
    let d2 = to_rat(dirs[1]);
    let det = d1.0 * d2.1 - d1.1 * d2.0;
    debug_assert!(det != 0.into());
    let rx = p.0 - apex.0;
    let ry = p.1 - apex.1;
    let alpha = (rx * d2.1 - ry * d2.0) / det;
    let beta = (ry * d1.0 - rx * d1.1) / det;
    alpha >= 0.into() && beta >= 0.into()
}

/// Whether the whole figure lies in the two 120 degree cones based at the
/// vertices of the given corner and its antipode. This is the geometric
/// payload behind sharing an opposite vertex pair: both cones contain the
/// figure, so translating the pair by any nonzero coweight pushes one of
/// the two shared vertices outside.
pub fn lies_in_opposite_cones(hex: &Hexagon, label: &str) -> bool {
    [label, opposite_corner(label)]
        .iter()
        .all(|c| hex.points().iter().all(|z| in_corner_cone(hex, c, z)))
}

/// Whether the six vertex points are pairwise distinct and each one is an
/// extreme point of their convex hull.
pub fn is_proper(hex: &Hexagon) -> bool {
    let pts: Vec<_> = hex.points().iter().map(|z| project(z)).collect();
    hull(&pts).len() == 6
}

/// Scalars expressing each drawn side as a multiple of that side's
/// direction in a nondegenerate figure, or None when some side leaves its
/// wall. A zero collapses the side; a negative value folds the drawing
/// over itself.
pub fn edge_profile(hex: &Hexagon) -> Option<[Rational64; 6]> {
    let pts: Vec<_> = hex.points().iter().map(|z| project(z)).collect();
    let mut out = [Rational64::from(0); 6];
    for i in 0..6 {
        let a = pts[CYCLE[i]];
        let b = pts[CYCLE[(i + 1) % 6]];
        let e = (b.0 - a.0, b.1 - a.1);
        let d3 = EDGE_DIRS[i];
        let d = project(&[d3[0].into(), d3[1].into(), d3[2].into()]);
        if e.0 * d.1 != e.1 * d.0 {
            return None;
        }
        out[i] = if d.0 != 0.into() { e.0 / d.0 } else { e.1 / d.1 };
    }
    Some(out)
}

/// Whether every side between cyclically adjacent corners runs along the
/// wall it follows in a nondegenerate figure, in either direction or
/// collapsed to a point.
pub fn sides_follow_walls(hex: &Hexagon) -> bool {
    edge_profile(hex).is_some()
}

/// Whether the figure is drawn the way a nondegenerate one is: every side
/// runs strictly in its standard direction, making the drawing a convex
/// counterclockwise hexagon. Such figures provably lie in the corner
/// cones at every corner; collapsed or folded figures can escape them.
pub fn is_generic(hex: &Hexagon) -> bool {
    edge_profile(hex).is_some_and(|l| l.iter().all(|s| *s > 0.into()))
}

/// True inner product of projected sum-zero triples. With (x, y) standing
/// for (z1 - z2, z2 - z3), the standard form on the sum-zero plane becomes
/// x^2 + xy + y^2 up to scale.
fn form(u: (Rational64, Rational64), v: (Rational64, Rational64)) -> Rational64 {
    u.0 * v.0 + u.1 * v.1 + (u.0 * v.1 + u.1 * v.0) / 2
}

fn cross2(u: (Rational64, Rational64), v: (Rational64, Rational64)) -> Rational64 {
    u.0 * v.1 - u.1 * v.0
}

/// Whether some closed cone spanning at most 120 degrees with apex at the
/// given corner's vertex contains every point of the figure. A tight cone
/// is bounded by two of the point directions, so those pairs are the only
/// candidates. Exact, and independent of the corner cone table: a figure
/// failing this admits no containing cone of the closure argument at all,
/// whichever pair of boundary rays is chosen.
pub fn admits_cone_at(hex: &Hexagon, label: &str) -> bool {
    let apex = project(&hex.vertex_point(label));
    let dirs: Vec<(Rational64, Rational64)> = hex
        .points()
        .iter()
        .map(|z| project(z))
        .map(|p| (p.0 - apex.0, p.1 - apex.1))
        .filter(|d| *d != (0.into(), 0.into()))
        .collect();
    if dirs.len() <= 1 {
        return true;
    }
    let angle_le_120 = |u, v| {
        let q = form(u, v);
        // cos >= -1/2, squared to stay in the rationals.
        q >= 0.into() || Rational64::from(4) * q * q <= form(u, u) * form(v, v)
    };
    let in_span = |u, v, w| {
        let det = cross2(u, v);
        if det == 0.into() {
            return cross2(u, w) == 0.into() && form(u, w) > 0.into();
        }
        cross2(w, v) / det >= 0.into() && cross2(u, w) / det >= 0.into()
    };
    dirs.iter().any(|&u| {
        dirs.iter().any(|&v| {
            angle_le_120(u, v) && dirs.iter().all(|&w| in_span(u, v, w))
        })
    })
}

/// Whether cones of the closure argument can exist at both shared corners:
/// some pair of 120 degree cones at the two vertices contains the figure.
pub fn admits_opposite_cones(hex: &Hexagon, label: &str) -> bool {
    admits_cone_at(hex, label) && admits_cone_at(hex, opposite_corner(label))
}

#[derive(Serialize)]
struct VertexJson {
    chamber: String,
    element: String,
    point: Vec<String>,
}

#[derive(Serialize)]
struct HexagonJson {
    vertices: Vec<VertexJson>,
}

pub fn hexagon_to_json(hex: &Hexagon) -> String {
    let vertices = CORNERS
        .iter()
        .map(|c| VertexJson {
            chamber: c.to_string(),
            element: render_weyl(hex.vertex(c)),
            point: hex.vertex_point(c).iter().map(|r| r.to_string()).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&HexagonJson { vertices }).expect("serializable")
}

/// Deterministic SVG of the projected figure. The drawing plane uses the
/// hexagonal projection (x1 - x2 + (x2 - x3)/2, sqrt(3)/2 * (x2 - x3)) with
/// the vertical axis flipped for screen coordinates.
pub fn render_svg(hex: &Hexagon) -> String {
    let rat = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
    let planar: Vec<(f64, f64)> = hex
        .points()
        .iter()
        .map(|z| {
            let x = rat(z[0] - z[1]);
            let y = rat(z[1] - z[2]);
            (x + y / 2.0, 3f64.sqrt() / 2.0 * y)
        })
        .collect();
    let xs: Vec<f64> = planar.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = planar.iter().map(|p| p.1).collect();
    let fmin = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let fmax = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1, y0, y1) = (fmin(&xs), fmax(&xs), fmin(&ys), fmax(&ys));
    let span = (x1 - x0).max(y1 - y0).max(1.0);
    let scale = 320.0 / span;
    let margin = 60.0;
    let width = (x1 - x0) * scale + 2.0 * margin;
    let height = (y1 - y0) * scale + 2.0 * margin;
    let to_screen = |p: (f64, f64)| {
        (
            margin + (p.0 - x0) * scale,
            margin + (y1 - p.1) * scale,
        )
    };
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    let ring: Vec<(f64, f64)> = CYCLE.iter().map(|&i| to_screen(planar[i])).collect();
    let poly = ring
        .iter()
        .map(|(x, y)| format!("{x:.3},{y:.3}"))
        .collect::<Vec<_>>()
        .join(" ");
    svg.push_str(&format!(
        "  <polygon points=\"{poly}\" fill=\"#dce9f7\" stroke=\"#1f4e79\" stroke-width=\"2\"/>\n"
    ));
    for (idx, &corner) in CORNERS.iter().enumerate() {
        let (sx, sy) = to_screen(planar[idx]);
        svg.push_str(&format!(
            "  <circle cx=\"{sx:.3}\" cy=\"{sy:.3}\" r=\"4\" fill=\"#1f4e79\"/>\n"
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"13\" font-family=\"monospace\">{}: {}</text>\n",
            sx + 7.0,
            sy - 7.0,
            corner,
            render_weyl(hex.vertex(corner)),
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FieldParams, Series};
    use crate::weyl::parse_weyl;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FieldParams {
        FieldParams::new(5, 1).unwrap()
    }

    /// A seeded instance of the generic profile val(a) = val(c) = -1,
    /// val(b) = val(b - ac) = -3 whose retractions are pinned.
    fn generic_instance(seed: u64) -> Mat {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prec = 24;
        let a = Series::random(&f, -1, prec, &mut rng);
        let c = Series::random(&f, -1, prec, &mut rng);
        let r = Series::random(&f, -3, prec, &mut rng);
        let b = a.mul(&c).add(&r);
        crate::linalg::upper_unipotent3(&f, &a, &b, &c)
    }

    fn rats(v: [(i64, i64); 3]) -> Vec<Rational64> {
        v.iter().map(|&(n, d)| Rational64::new(n, d)).collect()
    }

    #[test]
    fn generic_figure_matches_the_pinned_vertices() {
        let hex = hexagon_of(&generic_instance(91)).unwrap();
        let expected = [
            ("1", "e^(0,0,0)*1", [(1, 3), (0, 1), (-1, 3)]),
            ("s1", "e^(-1,1,0)*s1", [(-1, 1), (4, 3), (-1, 3)]),
            ("s2", "e^(0,-1,1)*s2", [(1, 3), (-4, 3), (1, 1)]),
            ("s1s2", "e^(-2,-1,3)*s2s1", [(-2, 1), (-4, 3), (10, 3)]),
            ("s2s1", "e^(-3,1,2)*s1s2", [(-10, 3), (4, 3), (2, 1)]),
            ("s1s2s1", "e^(-3,0,3)*s1s2s1", [(-10, 3), (0, 1), (10, 3)]),
        ];
        for (corner, elt, pt) in expected {
            assert_eq!(hex.vertex(corner), &parse_weyl(elt, 3).unwrap());
            assert_eq!(hex.vertex_point(corner), rats(pt));
        }
    }

    #[test]
    fn figures_contain_themselves_and_their_degenerate_vertices() {
        let hex = hexagon_of(&generic_instance(92)).unwrap();
        assert!(hexagon_contains(&hex, &hex));
        for corner in CORNERS {
            let point = Hexagon::new(std::array::from_fn(|_| hex.vertex(corner).clone()));
            assert!(hexagon_contains(&hex, &point));
            assert!(!hexagon_contains(&point, &hex));
        }
    }

    #[test]
    fn no_nonzero_translate_contains_the_figure() {
        let hex = hexagon_of(&generic_instance(93)).unwrap();
        for delta in [[1i64, -1, 0], [0, 1, -1], [2, -1, -1], [-1, -1, 2]] {
            let moved = hex.translate(&delta);
            assert!(!hexagon_contains(&moved, &hex));
            assert!(!hexagon_contains(&hex, &moved));
        }
        assert!(hexagon_contains(&hex.translate(&[0, 0, 0]), &hex));
    }

    #[test]
    fn translations_have_a_single_vertex() {
        let f = f5();
        let g = Mat::diag_monomials(&f, &[2, 0, -2], 24);
        let hex = hexagon_of(&g).unwrap();
        let t = parse_weyl("e^(2,0,-2)*1", 3).unwrap();
        for corner in CORNERS {
            assert_eq!(hex.vertex(corner), &t);
        }
        assert!(hexagon_contains(&hex, &hex));
        assert!(!hexagon_contains(&hex.translate(&[1, -1, 0]), &hex));
    }

    #[test]
    fn antipodal_corners_pair_up() {
        assert_eq!(opposite_corner("1"), "s1s2s1");
        assert_eq!(opposite_corner("s1s2s1"), "1");
        assert_eq!(opposite_corner("s1"), "s1s2");
        assert_eq!(opposite_corner("s2"), "s2s1");
        assert_eq!(opposite_corner("s2s1"), "s2");
        let hex = hexagon_of(&generic_instance(94)).unwrap();
        for corner in CORNERS {
            assert!(shares_opposite_vertices(&hex, &hex, corner));
            assert!(!shares_opposite_vertices(
                &hex,
                &hex.translate(&[1, 0, -1]),
                corner
            ));
        }
    }

    #[test]
    fn figures_lie_in_their_corner_cones() {
        // A nondegenerate figure satisfies the cone condition at every
        // antipodal pair simultaneously.
        for seed in [95, 96, 97] {
            let hex = hexagon_of(&generic_instance(seed)).unwrap();
            assert!(is_proper(&hex));
            assert!(sides_follow_walls(&hex));
            for corner in CORNERS {
                assert!(lies_in_opposite_cones(&hex, corner));
                assert!(admits_opposite_cones(&hex, corner));
            }
        }
        // Points outside the cone at the top corner are rejected.
        let hex = hexagon_of(&generic_instance(95)).unwrap();
        let above = rats([(4, 3), (0, 1), (-4, 3)]);
        assert!(!in_corner_cone(&hex, "1", &above));
    }

    #[test]
    fn collapsed_figures_can_escape_every_cone() {
        // A figure with one corner point strictly inside the hull of the
        // others: from the inner corner the remaining vertices sit in three
        // directions that are pairwise 120 degrees apart, so no single 120
        // degree cone based there contains the figure. Such shapes arise
        // from boundary valuation profiles of the antidiagonal families.
        let v = |s: &str| parse_weyl(s, 3).unwrap();
        let hex = Hexagon::new([
            v("e^(0,0,0)*s1s2s1"),
            v("e^(0,0,0)*s2s1"),
            v("e^(0,-3,3)*s1s2"),
            v("e^(0,-3,3)*s1"),
            v("e^(0,0,0)*s2"),
            v("e^(0,-3,3)*1"),
        ]);
        assert!(!is_proper(&hex));
        assert!(sides_follow_walls(&hex));
        assert!(!lies_in_opposite_cones(&hex, "s1"));
        assert!(!admits_cone_at(&hex, "s1"));
        assert!(!admits_opposite_cones(&hex, "s1"));
        // The escape does not break the containment order: no nonzero
        // translate of the figure fits inside itself.
        for delta in [[1i64, -1, 0], [0, 1, -1], [1, 0, -1], [-1, 0, 1]] {
            assert!(!hexagon_contains(&hex, &hex.translate(&delta)));
        }
    }

    #[test]
    fn hull_handles_degenerate_inputs() {
        let p = |a: i64, b: i64| (Rational64::from(a), Rational64::from(b));
        assert_eq!(hull(&[p(1, 1), p(1, 1)]).len(), 1);
        assert!(point_in_hull(&hull(&[p(0, 0), p(2, 2)]), p(1, 1)));
        assert!(!point_in_hull(&hull(&[p(0, 0), p(2, 2)]), p(1, 0)));
        let square = [p(0, 0), p(1, 0), p(1, 1), p(0, 1)];
        let h = hull(&square);
        assert_eq!(h.len(), 4);
        assert!(point_in_hull(&h, p(0, 0)));
        assert!(!point_in_hull(&h, p(2, 0)));
    }

    #[test]
    fn svg_and_json_are_deterministic_and_labeled() {
        let hex = hexagon_of(&generic_instance(98)).unwrap();
        let svg = render_svg(&hex);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 6);
        for corner in CORNERS {
            assert!(svg.contains(&format!("{corner}: e^(")));
        }
        assert_eq!(svg, render_svg(&hex));
        let json = hexagon_to_json(&hex);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["vertices"].as_array().unwrap().len(), 6);
        assert_eq!(parsed["vertices"][0]["chamber"], "1");
        assert_eq!(parsed["vertices"][0]["point"][0], "1/3");
    }
}

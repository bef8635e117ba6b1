use iwahori::arith::FieldParams;
use iwahori::harness::families::{FamilyId, FamilyParams};
use iwahori::harness::sample_witness;
use iwahori::hexagon::{
    admits_cone_at, hexagon_of, is_proper, lies_in_opposite_cones, CORNERS,
};
use iwahori::weyl::render_weyl;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn dump_failing_f2_members() {
    let field = FieldParams::new(3, 1).unwrap();
    let family = FamilyId::S2s1DLeELtF;
    let sub = family
        .subcases()
        .iter()
        .find(|s| s.name == "k_le_e_e_ge_i")
        .unwrap();
    for p in iwahori::harness::families::subcase_params(family, sub.name, 6) {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let Ok((g, profile, _)) = sample_witness(&field, family, sub, &p, 32, &mut rng) else {
            continue;
        };
        let hex = hexagon_of(&g).unwrap();
        let e = p.def[1];
        let i = p.nu[0];
        let canon: Vec<&str> = CORNERS
            .iter()
            .copied()
            .filter(|c| !lies_in_opposite_cones(&hex, c))
            .collect();
        let adm: Vec<&str> = CORNERS
            .iter()
            .copied()
            .filter(|c| !admits_cone_at(&hex, c))
            .collect();
        println!(
            "def={:?} nu={:?} e-i={} profile={:?} proper={} canon_bad={:?} admits_bad={:?}",
            p.def,
            p.nu,
            e - i,
            profile,
            is_proper(&hex),
            canon,
            adm,
        );
        if e - i == 2 {
            for c in CORNERS {
                let pt = hex.vertex_point(c);
                println!(
                    "  {c:8} {:22} point=({}, {}, {})",
                    render_weyl(hex.vertex(c)),
                    pt[0],
                    pt[1],
                    pt[2],
                );
            }
        }
    }
}

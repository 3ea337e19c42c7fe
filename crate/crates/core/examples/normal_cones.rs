use extremal::cones::{eps_normal_member, normal_cone, tangent_cone};
use extremal::geometry::{PolyhedralNorm, Polyhedron, Region};
use extremal::num::frac;
use extremal::vector::{fmt_vector, from_ints, Vector};

fn gens(g: &[Vector]) -> String {
    format!("cone{{{}}}", g.iter().map(|v| fmt_vector(v)).collect::<Vec<_>>().join(", "))
}

fn main() {
    // The corner {x1 <= 0, x2 <= 0} and the L-shaped union with {x1 <= -1}.
    let corner = Polyhedron::from_ints(2, &[(&[1, 0], 0), (&[0, 1], 0)]);
    let origin = from_ints(&[0, 0]);
    println!("N = {}", gens(&normal_cone(&Region::single(corner.clone()), &origin).unwrap().generators));
    println!("T = {}", gens(&tangent_cone(&corner, &origin).unwrap().generators));

    let ell = Region::exact(2, vec![Polyhedron::from_ints(2, &[(&[0, 1], 0)]), Polyhedron::from_ints(2, &[(&[1, 0], -1)])]).unwrap();
    let p = from_ints(&[-1, 0]);
    println!("N at the reentrant corner = {}", gens(&normal_cone(&ell, &p).unwrap().generators));

    let norm = PolyhedralNorm::max(2);
    let y = from_ints(&[1, 1]);
    for eps in [frac(1, 2), frac(1, 1), frac(2, 1)] {
        let member = eps_normal_member(&y, &p, &ell, &eps, &norm).unwrap();
        println!("(1, 1) is a {eps}-normal at (-1, 0): {member}");
    }
}

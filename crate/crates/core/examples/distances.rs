use extremal::geometry::{dist_region_region, intersect_empty, minkowski_difference, PolyhedralNorm, Polyhedron, Region};
use extremal::num::fmt_scalar;
use extremal::vector::{fmt_vector, from_ints};
use extremal::verdict::Certificate;

fn main() {
    // A = {x2 <= 0}, B = {x2 >= 1}
    let a = Region::single(Polyhedron::from_ints(2, &[(&[0, 1], 0)]));
    let b = Region::single(Polyhedron::from_ints(2, &[(&[0, -1], -1)]));

    for (label, norm) in [("max", PolyhedralNorm::max(2)), ("sum", PolyhedralNorm::sum(2))] {
        let (d, x, y) = dist_region_region(&a, &b, &norm).unwrap();
        println!("{label} norm: d(A, B) = {} at {} / {}", fmt_scalar(&d), fmt_vector(&x), fmt_vector(&y));
    }

    let v = intersect_empty(&[a.pieces().unwrap()[0].clone(), b.pieces().unwrap()[0].clone()]).unwrap();
    if let Some(Certificate::Emptiness { certificate }) = &v.certificate {
        let m: Vec<String> = certificate.multipliers.iter().map(fmt_scalar).collect();
        println!("A ∩ B is empty; Farkas multipliers [{}]", m.join(", "));
    }

    let diff = minkowski_difference(&a, &b).unwrap();
    for p in [[0, -1], [0, -2], [5, 0]] {
        println!("{:?} in A - B: {}", p, diff.contains(&from_ints(&p)));
    }
}

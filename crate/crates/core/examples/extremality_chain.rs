use extremal::geometry::{PolyhedralNorm, Polyhedron, Region};
use extremal::num::{fmt_scalar, one};
use extremal::primal::{check_relative_locally_extremal, implication_chain, verify_shift_witness, SetSystem};
use extremal::vector::{fmt_vector, from_ints};
use extremal::verdict::Certificate;

fn main() {
    // A is an L-shaped union, B is a wedge whose tip touches A at the origin.
    let a = Region::exact(2, vec![Polyhedron::from_ints(2, &[(&[0, 1], 0)]), Polyhedron::from_ints(2, &[(&[1, 0], -1)])]).unwrap();
    let b = Region::single(Polyhedron::from_ints(2, &[(&[0, -1], 0), (&[2, -1], 1), (&[-2, -1], 1)]));
    let s = SetSystem::conventional(a, b, from_ints(&[0, 0]), PolyhedralNorm::max(2)).unwrap();

    let chain = implication_chain(&s).unwrap();
    for lv in &chain.levels {
        println!("{:<18} {}", lv.level.label(), lv.verdict.status.label());
    }

    let local = check_relative_locally_extremal(&s, &one()).unwrap();
    if let Some(Certificate::Shifts { witnesses, .. }) = &local.certificate {
        let c = &witnesses[0];
        let rho = c.witness.rho.as_ref().map_or("inf".into(), fmt_scalar);
        println!("witness u = {}, v = {}, rho = {rho}", fmt_vector(&c.witness.u), fmt_vector(&c.witness.v));
        println!("re-verified: {}", verify_shift_witness(&s, &c.witness, &c.eps, c.level).unwrap());
    }
}

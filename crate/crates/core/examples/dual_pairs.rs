use extremal::dual::{check_ep_condition, convert_conditions, nonlocal_ep, separation_infimum, Direction, Form};
use extremal::geometry::{PolyhedralNorm, Polyhedron, Region};
use extremal::num::{fmt_scalar, frac};
use extremal::primal::{dual_locality, SetSystem};
use extremal::vector::{fmt_vector, from_ints};
use extremal::verdict::Certificate;

fn halfplane(n: &[i64], r: i64) -> Region {
    Region::single(Polyhedron::from_ints(2, &[(n, r)]))
}

fn main() {
    let norm = PolyhedralNorm::max(2);
    let origin = from_ints(&[0, 0]);

    let crossing = SetSystem::conventional(halfplane(&[0, 1], 0), halfplane(&[1, 1], 0), origin.clone(), norm.clone()).unwrap();
    let sep = separation_infimum(&crossing, &dual_locality(&crossing).unwrap()).unwrap();
    println!("crossing halfplanes: min ||a* + b*|| = {}", sep.value.as_ref().map_or("none".into(), fmt_scalar));

    let touching = SetSystem::conventional(halfplane(&[0, 1], 0), halfplane(&[0, -1], 0), origin, norm.clone()).unwrap();
    let v = check_ep_condition(&touching, Form::II, &frac(1, 4)).unwrap();
    println!("complementary halfplanes, form II at 1/4: {}", v.status.label());
    if let Some(Certificate::Dual { pair }) = &v.certificate {
        println!("  a* = {}, b* = {}", fmt_vector(&pair.astar), fmt_vector(&pair.bstar));
        let one_form = convert_conditions(pair, Direction::IiToI, &touching).unwrap();
        println!("  as form I at {}: holds = {}", fmt_scalar(&one_form.eps), one_form.holds(&touching).unwrap());
    }

    // Disjoint strips: the nonlocal condition at a nearest pair.
    let apart = SetSystem::new(halfplane(&[0, 1], 0), halfplane(&[0, -1], -1), from_ints(&[0, 0]), from_ints(&[0, 1]), norm).unwrap();
    let v = nonlocal_ep(&apart, &frac(1, 2), None).unwrap();
    println!("disjoint strips, nonlocal condition: {}", v.status.label());
}

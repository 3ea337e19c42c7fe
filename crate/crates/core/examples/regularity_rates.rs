use extremal::geometry::{PolyhedralNorm, Polyhedron, Region};
use extremal::mappings::{crosscheck_primal_dual, estimate_rate, evaluate, MappingInput, MappingView, RateProperty, Which};
use extremal::num::{fmt_scalar, frac};
use extremal::primal::SetSystem;
use extremal::vector::from_ints;

fn main() {
    let a = Region::single(Polyhedron::from_ints(2, &[(&[0, 1], 0)]));
    let b = Region::single(Polyhedron::from_ints(2, &[(&[1, 1], 0)]));
    let s = SetSystem::conventional(a, b, from_ints(&[0, 0]), PolyhedralNorm::max(2)).unwrap();

    let sm = MappingView { system: s.clone(), which: Which::S };
    let image = evaluate(&sm, &MappingInput::Pair(from_ints(&[0, 1]), from_ints(&[0, 0]))).unwrap();
    println!("S((0,1), (0,0)) contains (0,-1): {}", image.contains(&from_ints(&[0, -1])));

    for p in RateProperty::ALL {
        let est = estimate_rate(&sm, p, &frac(1, 2), 2).unwrap();
        let upper = est.alpha_upper.as_ref().map_or("inf".into(), fmt_scalar);
        println!("{:<18} rate in [{}, {}] from {} samples", p.label(), fmt_scalar(&est.alpha_lower), upper, est.samples.len());
    }

    let cc = crosscheck_primal_dual(&s).unwrap();
    println!("0 on the boundary of dom S: {}, consistent: {}", cc.dom_boundary, cc.consistent());
}

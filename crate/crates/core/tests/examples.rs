//! Worked examples exercised through the public API only.

use addcomb::connectivity::{
    check_connected, check_strong_implies_weak, check_strongly_connected, extract_almost_basis,
    extract_connected_subset, konyagin_containment, partition_min_sigma, strong_partition, AlmostBasisOutcome,
    ConnectivityParams, PartitionOptions,
};
use addcomb::dissociation::{
    check_rudin, is_dissociated, maximal_dissociated_subset, span_contains, span_enumerate, Caps, DissociatedSet,
};
use addcomb::energy::{check_tk_vs_t2, doubling_energy_bound};
use addcomb::function::iterated_self_conv;
use addcomb::{energy, zeta, Elem, GroupSet, GroupSpec, IntFn, RationalConstant, Relation};
use num_bigint::BigUint;

fn ints(xs: &[i64]) -> GroupSet {
    GroupSet::from_i64s(GroupSpec::integers(), xs).unwrap()
}

fn cyc(n: u64, xs: &[i64]) -> GroupSet {
    GroupSet::from_i64s(GroupSpec::cyclic(n).unwrap(), xs).unwrap()
}

fn f2_3() -> GroupSet {
    let spec = GroupSpec::vector(2, 3).unwrap();
    GroupSet::new(spec.clone(), spec.all_elements().unwrap()).unwrap()
}

fn values(f: &IntFn) -> Vec<(String, u64)> {
    f.iter().map(|(e, v)| (e.to_string(), u64::try_from(v).unwrap())).collect()
}

fn rc(p: u64, q: u64) -> RationalConstant {
    RationalConstant::new(p, q).unwrap()
}

#[test]
fn group_arithmetic() {
    let c5 = GroupSpec::cyclic(5).unwrap();
    let r = |v| c5.elem_from_i64(v);
    assert_eq!(c5.add(&r(3), &r(4)), r(2));
    assert_eq!(c5.neg(&r(3)), r(2));
    let v = GroupSpec::vector(2, 3).unwrap();
    assert_eq!(v.add(&Elem::vector(&[1, 0, 1]), &Elem::vector(&[1, 1, 1])), Elem::vector(&[0, 1, 0]));
    assert_eq!(v.neg(&Elem::vector(&[1, 0, 1])), Elem::vector(&[1, 0, 1]));
    assert_eq!(ints(&[0, 1]).sumset(&ints(&[0, 1])).unwrap(), ints(&[0, 1, 2]));
}

#[test]
fn convolutions() {
    let a = IntFn::indicator(&ints(&[0, 1]));
    assert_eq!(values(&a.convolve(&a).unwrap()), [("0".into(), 1), ("1".into(), 2), ("2".into(), 1)]);
    assert_eq!(values(&a.correlate(&a).unwrap()), [("-1".into(), 1), ("0".into(), 2), ("1".into(), 1)]);
    let f = IntFn::indicator(&cyc(5, &[0, 3]));
    let g = IntFn::indicator(&cyc(5, &[1]));
    assert_eq!(values(&f.correlate(&g).unwrap()), [("2".into(), 1), ("4".into(), 1)]);
    let a3: IntFn = iterated_self_conv(&ints(&[0, 1]), 2);
    assert_eq!(values(&a3).iter().map(|p| p.1).collect::<Vec<_>>(), [1, 3, 3, 1]);
}

#[test]
fn energies() {
    assert_eq!(energy(&ints(&[0]), 3).unwrap().value, BigUint::from(1u32));
    assert_eq!(energy(&ints(&[0, 1]), 2).unwrap().value, BigUint::from(6u32));
    assert_eq!(energy(&f2_3(), 2).unwrap().value, BigUint::from(512u32));
    let z = zeta(&ints(&[0, 1]), 2).unwrap();
    assert_eq!((z.energy, z.size), (BigUint::from(6u32), 2));
    assert!(check_tk_vs_t2(&ints(&[0, 1, 3]), 3).unwrap().holds);
    let d = doubling_energy_bound(&ints(&(0..8).collect::<Vec<_>>())).unwrap();
    assert_eq!(d.sumset_size, 15);
    assert!(d.inequality.holds);
    let d = doubling_energy_bound(&f2_3()).unwrap();
    assert_eq!(d.inequality.lhs, d.inequality.rhs);
}

#[test]
fn dissociation_examples() {
    assert!(is_dissociated(&ints(&[1, 2])).unwrap().dissociated);
    let v = is_dissociated(&ints(&[1, 2, 3])).unwrap();
    assert!(!v.dissociated && v.witness.is_some());
    assert!(!is_dissociated(&ints(&[0, 5])).unwrap().dissociated);
    assert_eq!(span_enumerate(&ints(&[1, 2])).unwrap().size, Some(7));
    assert!(span_contains(&ints(&[1, 2]), &Elem::int(3)).unwrap());
    assert!(!span_contains(&ints(&[1, 2]), &Elem::int(4)).unwrap());
    let found = maximal_dissociated_subset(&ints(&[1, 2, 3, 4]), None).unwrap();
    assert_eq!(found.lambda.base(), &ints(&[1, 2, 4]));
    let l = DissociatedSet::certify(ints(&[1, 2, 4]), Caps::default()).unwrap();
    let q = check_rudin(&l, 2).unwrap();
    assert!(q.holds && q.relation == Relation::Le);
    assert_eq!(energy(&ints(&[1, 2, 4]), 2).unwrap().value, BigUint::from(15u32));
}

#[test]
fn connectivity_examples() {
    let pair = cyc(100, &[0, 1]);
    assert!(!check_strongly_connected(&pair, &ConnectivityParams::new(2, RationalConstant::one())).unwrap().holds);
    assert!(check_strongly_connected(&pair, &ConnectivityParams::new(2, rc(1, 2))).unwrap().holds);
    let r = check_strong_implies_weak(&pair, &ConnectivityParams::new(2, rc(1, 2))).unwrap();
    assert!(!r.vacuous && r.implication_holds);

    let p = f2_3();
    assert!(check_connected(&p, &ConnectivityParams::new(2, RationalConstant::one())).unwrap().holds);
    let x = extract_connected_subset(&p, &ConnectivityParams::new(2, rc(1, 32))).unwrap();
    assert_eq!(x.result, p);
    assert!(x.trace.steps.is_empty());

    let ab = extract_almost_basis(&p, &ConnectivityParams::new(2, rc(1, 32)).with_window(rc(1, 2), RationalConstant::one()), Caps::default()).unwrap();
    match ab.outcome {
        AlmostBasisOutcome::Basis { lambda, covered, .. } => assert_eq!((lambda.len(), covered), (3, 8)),
        other => panic!("expected a basis, got {other:?}"),
    }

    let k = konyagin_containment(&p, 2, &RationalConstant::one(), 14).unwrap();
    assert!(k.contained && k.required && k.subgroup_size == 8);
}

#[test]
fn partition_examples() {
    let pair = cyc(100, &[0, 1]);
    let st = partition_min_sigma(&pair, 2, &RationalConstant::one(), &PartitionOptions::default()).unwrap();
    assert_eq!(st.parts.len(), 2);
    assert!(st.ok());

    let sp = strong_partition(&f2_3(), &rc(1, 2), &rc(1, 2), &PartitionOptions::default()).unwrap();
    assert!(sp.success && sp.omega.is_empty() && sp.parts.len() == 1);
}

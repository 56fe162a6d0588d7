//! Property tests: printer/parser round trips, measure arithmetic,
//! topology closure laws, and reduction shape invariants.

use proptest::prelude::*;
use topomc::formula::{compare, parse, Formula};
use topomc::model::jewel_model;
use topomc::reduce::reduce_to_el;
use topomc::topology::{Mask, PointSet, Topology};

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        Just(Formula::atom("r")),
    ];
    leaf.prop_recursive(6, 48, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| Formula::and(f, g)),
            (prop_oneof![Just("a"), Just("b")], inner.clone())
                .prop_map(|(i, f)| Formula::know(i, f)),
            inner.clone().prop_map(Formula::int),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| Formula::announce(f, g)),
            inner.prop_map(Formula::quant_box),
        ]
    })
}

fn pal_strategy() -> impl Strategy<Value = Formula> {
    formula_strategy().prop_filter("box-free", |f| f.is_pal())
}

proptest! {
    #[test]
    fn print_parse_roundtrip(f in formula_strategy()) {
        let printed = f.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(back, f, "printed as {}", printed);
    }

    #[test]
    fn size_and_depth_are_structural(f in formula_strategy(), g in formula_strategy()) {
        prop_assert_eq!(Formula::and(f.clone(), g.clone()).size(), f.size() + g.size());
        prop_assert_eq!(Formula::announce(f.clone(), g.clone()).size(), f.size() + 4 * g.size());
        prop_assert_eq!(Formula::not(f.clone()).size(), f.size() + 1);
        prop_assert_eq!(Formula::quant_box(f.clone()).box_depth(), f.box_depth() + 1);
        prop_assert_eq!(
            Formula::announce(f.clone(), g.clone()).box_depth(),
            f.box_depth().max(g.box_depth())
        );
    }

    #[test]
    fn reduction_inequalities(f in formula_strategy(), g in formula_strategy(), h in formula_strategy()) {
        let ann = |a: &Formula, b: &Formula| Formula::announce(a.clone(), b.clone());
        prop_assert!(compare(
            &Formula::not(ann(&f, &g)),
            &ann(&f, &Formula::not(g.clone()))
        ).less_sd);
        prop_assert!(compare(
            &Formula::int(ann(&f, &g)),
            &ann(&f, &Formula::int(g.clone()))
        ).less_sd);
        prop_assert!(compare(
            &Formula::know("a", ann(&f, &g)),
            &ann(&f, &Formula::know("a", g.clone()))
        ).less_sd);
        let lifted = ann(&Formula::not(ann(&f, &Formula::not(Formula::int(g.clone())))), &h);
        prop_assert!(compare(&lifted, &ann(&f, &ann(&g, &h))).less_sd);
    }

    #[test]
    fn reduction_output_is_el_and_idempotent(f in pal_strategy()) {
        let once = reduce_to_el(&f).unwrap();
        prop_assert!(once.is_el());
        prop_assert_eq!(reduce_to_el(&once).unwrap(), once);
    }

    #[test]
    fn topology_closure_laws(subbase in prop::collection::vec(1u32..32, 0..6)) {
        let space = PointSet::new((0..5).map(|i| format!("x{i}")).collect()).unwrap();
        let topo = Topology::from_subbase(space, &subbase).unwrap();
        let opens: Vec<Mask> = topo.opens().to_vec();
        prop_assert!(topo.is_open(0));
        prop_assert!(topo.is_open(0b11111));
        for &a in &opens {
            for &b in &opens {
                prop_assert!(topo.is_open(a & b));
                prop_assert!(topo.is_open(a | b));
            }
            // interior fixes opens and is idempotent, monotone, deflationary
            prop_assert_eq!(topo.interior(a).unwrap(), a);
        }
        prop_assert!(topo.is_base(&opens).unwrap());
        for s in 0u32..32 {
            let int = topo.interior(s).unwrap();
            prop_assert_eq!(int & !s, 0);
            prop_assert_eq!(topo.interior(int).unwrap(), int);
        }
    }

    #[test]
    fn jewel_restriction_composes(u_idx in 0usize..32, v_idx in 0usize..32) {
        let m = jewel_model();
        let topo = m.topology();
        let u = topo.opens()[u_idx];
        let v = topo.opens()[v_idx];
        for gen in &m.frame.generators {
            let lhs = gen.func.restrict(topo, u).unwrap().restrict(topo, v).unwrap();
            let rhs = gen.func.restrict(topo, u & v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

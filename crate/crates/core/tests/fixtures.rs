mod common;

use common::*;
use toric::cyclic::Partition;
use toric::torusgraph::*;

fn report(name: &str) -> InvariantReport {
    embedding(name).report().unwrap()
}

#[test]
fn gamma2_is_reduced_with_three_faces() {
    let r = report("fig1.2-gamma2");
    assert_eq!(r.status, ReducedStatus::Reduced);
    assert_eq!(r.contractible_faces, 3);
    assert_eq!((r.twice_area, r.excess), (2, 1));
    assert!(r.perfect_matching);
}

#[test]
fn gamma3_is_reduced_with_two_faces() {
    let r = report("fig1.2-gamma3");
    assert_eq!(r.status, ReducedStatus::Reduced);
    assert_eq!(r.contractible_faces, 2);
    assert_eq!((r.twice_area, r.excess), (2, 0));
}

#[test]
fn reduced_fixtures_have_no_leaves_or_contractible_components() {
    for name in ["fig1.2-gamma2", "fig1.2-gamma3", "fig-twsq-gamma1", "fig-twsq-gamma2"] {
        let e = embedding(name);
        assert!(!e.has_leaf() && !e.has_contractible_component(), "{name}");
    }
    assert!(embedding("fig-nested-loops").has_contractible_component());
}

#[test]
fn extra_parallel_edge_breaks_reducedness() {
    let r = report("fig1.2-gamma2-extra-edge");
    assert_eq!(r.status, ReducedStatus::NotReduced);
    assert!(r.contractible_faces as u64 > r.twice_area as u64 + r.excess);
    let e = embedding("fig1.2-gamma2-extra-edge");
    let strands = e.strands();
    let cr = e.strand_crossings(&strands);
    assert!(strands.iter().zip(&cr.self_crossings).any(|(s, &x)| x as u64 > s.ilen().saturating_sub(1)));
}

#[test]
fn pendant_path_is_a_leaf() {
    use toric::geom::{q, Pt};
    let mut g = fixture("fig1.2-gamma2");
    let (pw, pb) = (Pt::new(q(1, 12), q(1, 2)), Pt::new(q(1, 12), q(3, 8)));
    let w = g.add_vertex(Color::White, pw);
    let b = g.add_vertex(Color::Black, pb);
    let from = g.vertices[0].pos;
    g.add_edge_path(0, w, &[from, pw]);
    g.add_edge_path(w, b, &[pw, pb]);
    let e = Embedding::new(g).unwrap();
    assert!(e.has_leaf());
    assert!(e.perfect_matching_exists());
    assert_eq!(e.is_move_reduced(), ReducedStatus::NotReduced);
}

#[test]
fn parallel_bigons_are_exceptional() {
    let e = embedding("fig-parallelbigons");
    assert_eq!(e.is_move_reduced(), ReducedStatus::ExceptionalMonogon);
    assert!(!e.perfect_matching_exists());
    assert_ne!(e.graph().count_color(Color::Black), e.graph().count_color(Color::White));
    assert!(e.strong_decoration().is_err());
}

#[test]
fn twisted_squares_share_decoration_but_not_mu() {
    let (a, b) = (embedding("fig-twsq-gamma1"), embedding("fig-twsq-gamma2"));
    let (sa, sb) = (a.strong_decoration().unwrap(), b.strong_decoration().unwrap());
    assert_eq!(sa, sb);
    assert!(sa.edges().iter().all(|(_, c)| c.parts() == [2, 2]));
    assert_eq!(a.modular_invariant().unwrap(), (0, 2));
    assert_eq!(b.modular_invariant().unwrap(), (1, 2));
    assert!(!move_equivalent(&a, &b).unwrap());
    assert!(move_equivalent(&a, &a).unwrap());
}

#[test]
fn two_big_words_differ_by_mu() {
    let (a, b) = (embedding("fig-two-big-w"), embedding("fig-two-big-wprime"));
    assert_eq!(a.strong_decoration().unwrap(), b.strong_decoration().unwrap());
    let (ma, mb) = (a.modular_invariant().unwrap(), b.modular_invariant().unwrap());
    assert_eq!((ma.1, mb.1), (2, 2));
    assert_ne!(ma.0, mb.0);
    assert!(!move_equivalent(&a, &b).unwrap());
}

#[test]
fn twisted_square_strands_cross_themselves_once() {
    let e = embedding("fig-twsq-gamma1");
    let strands = e.strands();
    let cr = e.strand_crossings(&strands);
    for (s, &x) in strands.iter().zip(&cr.self_crossings) {
        assert_eq!(s.homology.1, 0);
        assert_eq!(s.homology.0.abs(), 2);
        assert_eq!(x, 1);
    }
}

#[test]
fn weak_polygon_of_gamma2() {
    let w = embedding("fig1.2-gamma2").newton_polygon_weak();
    let two = w.edges().iter().find(|(v, _)| *v == (2, 0)).unwrap();
    assert_eq!(two.1, Partition::new(vec![2]).unwrap());
    assert_eq!(w.twice_area(), 2);
}

#[test]
fn labelings_of_twisted_squares_are_well_defined() {
    for name in ["fig-twsq-gamma1", "fig-twsq-gamma2"] {
        let e = embedding(name);
        for (v, _) in e.strong_decoration().unwrap().edges() {
            let lab = e.e_region_labeling(*v).unwrap();
            assert_eq!(lab.rot, 2);
            assert_eq!(lab.labels.len(), e.faces().walks.len());
            assert!(lab.labels.iter().all(|&x| x < 2));
        }
    }
}

#[test]
fn json_round_trip() {
    for name in FIXTURES {
        let g = fixture(name);
        assert_eq!(TorusGraph::from_json_str(&g.to_json_string()).unwrap(), g, "{name}");
    }
}

use std::sync::Arc;

use proptest::prelude::*;

use chowglue::cherncalc::{total_class, quotient_class, BundleExpr, TotalChernClass};
use chowglue::{GradedPoly, VarTable};

const TRUNC: u32 = 6;

fn base() -> Arc<VarTable> {
    VarTable::new(&[("x", 1), ("y", 1), ("z", 2)]).unwrap()
}

/// Expression shape; atoms are filled in from a per-case class assignment.
#[derive(Clone, Debug)]
enum Shape {
    Atom(usize),
    Sum(Box<Shape>, Box<Shape>),
    Dual(Box<Shape>),
    Det(Box<Shape>),
    Tensor(Box<Shape>, i64, i64),
    Sym(u32, Box<Shape>),
}

fn shape() -> impl Strategy<Value = Shape> {
    let leaf = (0usize..3).prop_map(Shape::Atom);
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::Sum(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Shape::Dual(Box::new(a))),
            inner.clone().prop_map(|a| Shape::Det(Box::new(a))),
            (inner.clone(), -2i64..=2, -2i64..=2).prop_map(|(a, p, q)| Shape::Tensor(Box::new(a), p, q)),
            (2u32..=3, (0usize..3).prop_map(Shape::Atom)).prop_map(|(n, a)| Shape::Sym(n, Box::new(a))),
        ]
    })
}

/// Integer linear forms giving the classes of a line, a rank-2 and a rank-3 atom.
fn atoms() -> impl Strategy<Value = Vec<Vec<(i64, i64, i64)>>> {
    let form = || (-3i64..=3, -3i64..=3, -3i64..=3);
    (form(), prop::collection::vec(form(), 2), prop::collection::vec(form(), 3)).prop_map(|(a, b, c)| vec![vec![a], b, c])
}

fn class(t: &Arc<VarTable>, degree: usize, (a, b, c): (i64, i64, i64)) -> GradedPoly {
    let s = match degree {
        1 => format!("({a})*x + ({b})*y"),
        2 => format!("({a})*x*y + ({b})*z + ({c})*y^2"),
        _ => format!("({a})*x*z + ({b})*y*z + ({c})*x^3"),
    };
    GradedPoly::parse(t, &s).unwrap()
}

fn build(t: &Arc<VarTable>, s: &Shape, atoms: &[Vec<(i64, i64, i64)>]) -> BundleExpr {
    let names = ["L", "E", "F"];
    match s {
        Shape::Atom(i) => {
            let classes = atoms[*i].iter().enumerate().map(|(k, f)| class(t, k + 1, *f)).collect();
            BundleExpr::atom(names[*i], classes)
        }
        Shape::Sum(a, b) => BundleExpr::sum(build(t, a, atoms), build(t, b, atoms)),
        Shape::Dual(a) => BundleExpr::dual(build(t, a, atoms)),
        Shape::Det(a) => BundleExpr::det(build(t, a, atoms)),
        Shape::Tensor(a, p, q) => {
            BundleExpr::tensor_line(build(t, a, atoms), GradedPoly::parse(t, &format!("({p})*x + ({q})*y")).unwrap())
        }
        Shape::Sym(n, a) => BundleExpr::sym(*n, build(t, a, atoms)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn whitney_product(a in shape(), b in shape(), cls in atoms()) {
        let t = base();
        let (ea, eb) = (build(&t, &a, &cls), build(&t, &b, &cls));
        let sum = total_class(&t, &BundleExpr::sum(ea.clone(), eb.clone()), TRUNC).unwrap();
        let prod = total_class(&t, &ea, TRUNC).unwrap().mul(&total_class(&t, &eb, TRUNC).unwrap());
        prop_assert_eq!(sum, prod);
    }

    #[test]
    fn pieces_vanish_above_rank(a in shape(), cls in atoms()) {
        let t = base();
        let e = build(&t, &a, &cls);
        let c = total_class(&t, &e, TRUNC).unwrap();
        prop_assert!(c.pieces[0] == GradedPoly::one(&t));
        for (i, p) in c.pieces.iter().enumerate() {
            if i as u64 > e.rank() {
                prop_assert!(p.is_zero(), "c{} = {}", i, p);
            } else if !p.is_zero() {
                prop_assert_eq!(p.homogeneous_degree().unwrap(), i as u32);
            }
        }
    }

    #[test]
    fn double_dual_and_trivial_twist(a in shape(), cls in atoms()) {
        let t = base();
        let e = build(&t, &a, &cls);
        let c = total_class(&t, &e, TRUNC).unwrap();
        prop_assert_eq!(&total_class(&t, &BundleExpr::dual(BundleExpr::dual(e.clone())), TRUNC).unwrap(), &c);
        prop_assert_eq!(&total_class(&t, &BundleExpr::tensor_line(e.clone(), GradedPoly::zero(&t)), TRUNC).unwrap(), &c);
        // dual flips the sign of odd pieces
        let d = total_class(&t, &BundleExpr::dual(e), TRUNC).unwrap();
        for (i, (p, q)) in c.pieces.iter().zip(&d.pieces).enumerate() {
            prop_assert_eq!(if i % 2 == 0 { p.clone() } else { p.neg() }, q.clone());
        }
    }

    #[test]
    fn quotient_inverts_whitney(a in shape(), b in shape(), cls in atoms(), d in 0u32..=TRUNC) {
        let t = base();
        let ca = total_class(&t, &build(&t, &a, &cls), TRUNC).unwrap();
        let cb = total_class(&t, &build(&t, &b, &cls), TRUNC).unwrap();
        prop_assert_eq!(quotient_class(&ca.mul(&cb), &ca, d).unwrap(), cb.pieces[d as usize].clone());
    }
}

/// Expands ∏(1 + root) over explicit roots in r1, r2 and compares with the
/// class computed in c1, c2 after substituting c1 = r1 + r2, c2 = r1*r2.
fn check_against_roots(e: impl Fn(&Arc<VarTable>) -> BundleExpr, roots: &[&str]) {
    let cb = VarTable::new(&[("c1", 1), ("c2", 2)]).unwrap();
    let rt = VarTable::new(&[("r1", 1), ("r2", 1)]).unwrap();
    let computed = total_class(&cb, &e(&cb), 8).unwrap();
    let mut expected = vec![GradedPoly::one(&rt)];
    expected.resize(9, GradedPoly::zero(&rt));
    for r in roots {
        let r = GradedPoly::parse(&rt, r).unwrap();
        for i in (1..=8).rev() {
            expected[i] = expected[i].add(&expected[i - 1].mul(&r));
        }
    }
    let sub = [GradedPoly::parse(&rt, "r1 + r2").unwrap(), GradedPoly::parse(&rt, "r1*r2").unwrap()];
    for (i, p) in computed.pieces.iter().enumerate() {
        let p = chowglue::gradedring::substitute_images(p, &cb, &rt, &sub).unwrap();
        assert_eq!(p, expected[i], "piece {i}");
    }
}

fn rank2(t: &Arc<VarTable>) -> BundleExpr {
    BundleExpr::atom("E", vec![GradedPoly::var(t, "c1").unwrap(), GradedPoly::var(t, "c2").unwrap()])
}

#[test]
fn symmetric_square_of_rank_two() {
    check_against_roots(|t| BundleExpr::sym(2, rank2(t)), &["2*r1", "r1 + r2", "2*r2"]);
    let t = VarTable::new(&[("c1", 1), ("c2", 2)]).unwrap();
    let c = total_class(&t, &BundleExpr::sym(2, rank2(&t)), 4).unwrap();
    assert_eq!(c.pieces[1], GradedPoly::parse(&t, "3*c1").unwrap());
    assert_eq!(c.pieces[3], GradedPoly::parse(&t, "4*c1*c2").unwrap());
}

#[test]
fn symmetric_fourth_power_and_twists() {
    check_against_roots(
        |t| BundleExpr::sym(4, rank2(t)),
        &["4*r1", "3*r1 + r2", "2*r1 + 2*r2", "r1 + 3*r2", "4*r2"],
    );
    check_against_roots(|t| BundleExpr::det(BundleExpr::dual(rank2(t))), &["-r1 - r2"]);
}

#[test]
fn line_dual_and_quotients() {
    let t = VarTable::new(&[("s", 1), ("x", 1), ("y", 1)]).unwrap();
    let v = |n: &str| GradedPoly::var(&t, n).unwrap();
    let c = total_class(&t, &BundleExpr::dual(BundleExpr::line("L", v("s"))), 3).unwrap();
    assert_eq!(c.pieces, vec![GradedPoly::one(&t), v("s").neg(), GradedPoly::zero(&t), GradedPoly::zero(&t)]);
    let a = TotalChernClass::new(&t, vec![GradedPoly::one(&t), v("x")]);
    let b = TotalChernClass::new(&t, vec![GradedPoly::one(&t), v("x").add(&v("y")), v("x").mul(&v("y"))]);
    assert_eq!(quotient_class(&b, &a, 1).unwrap(), v("y"));
    assert!(quotient_class(&a, &a, 1).unwrap().is_zero());
    assert!(quotient_class(&b, &a, 2).is_err());
}

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chowglue::genus3::pipeline::restrictions;
use chowglue::genus3::{builtin_resolver, strata, ConstantSet, PipelineSpec, STRATA_TXT};
use chowglue::idealengine::{cofactor_split, ideal_equal, kernel, member, nzd_check};
use chowglue::{Coefficient, GradedPoly, RingMap, RingPresentation, VarTable};
use common::{dense_member, random_instance, random_poly};

fn reconstruct(gens: &[GradedPoly], cofactors: &[GradedPoly]) -> GradedPoly {
    let mut sum = GradedPoly::zero(gens[0].table());
    for (g, a) in gens.iter().zip(cofactors) {
        sum = sum.add(&a.mul(g));
    }
    sum
}

/// Another generating set of the same ideal: unit rescaling, a shuffle and
/// multiples of earlier generators added to later ones.
fn same_ideal<R: Rng>(rng: &mut R, gens: &[GradedPoly]) -> Vec<GradedPoly> {
    let mut out: Vec<GradedPoly> = gens.to_vec();
    for i in 0..out.len() {
        let unit = Coefficient::from_parts(if rng.random_bool(0.5) { 1 } else { -1 }, rng.random_range(0..2), rng.random_range(0..2));
        out[i] = out[i].scale(&unit);
        for j in 0..i {
            let (di, dj) = (out[i].homogeneous_degree().unwrap(), out[j].homogeneous_degree().unwrap());
            if dj <= di {
                let m = random_poly(rng, out[j].table(), di - dj, 0.5);
                out[i] = out[i].add(&m.mul(&out[j]));
            }
        }
    }
    let k = rng.random_range(0..out.len().max(1));
    out.rotate_left(k);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn member_agrees_with_dense_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, gens) = random_instance(&mut rng);
        let m = member(&p, &gens, 16).unwrap();
        prop_assert_eq!(m.member, dense_member(&p, &gens));
        if m.member {
            prop_assert!(m.residual.is_zero());
            if !gens.is_empty() {
                prop_assert_eq!(reconstruct(&gens, &m.cofactors), p);
            }
        } else {
            prop_assert!(!m.residual.is_zero());
        }
    }

    #[test]
    fn ideal_equality_is_an_equivalence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, gens) = random_instance(&mut rng);
        prop_assume!(!gens.is_empty());
        let a = same_ideal(&mut rng, &gens);
        let b = same_ideal(&mut rng, &a);
        prop_assert!(ideal_equal(&gens, &gens).unwrap());
        prop_assert!(ideal_equal(&gens, &a).unwrap());
        prop_assert!(ideal_equal(&a, &gens).unwrap());
        prop_assert!(ideal_equal(&a, &b).unwrap());
        prop_assert!(ideal_equal(&gens, &b).unwrap());
        // dropping a generator that is not redundant breaks equality
        let rest = &gens[1..];
        let redundant = dense_member(&gens[0], rest);
        prop_assert_eq!(ideal_equal(&gens, rest).unwrap(), redundant);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_generators_map_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = VarTable::new(&[("x", 1), ("y", 1), ("z", 2)]).unwrap();
        let tgt = VarTable::new(&[("u", 1), ("v", 1)]).unwrap();
        let rels = if rng.random_bool(0.5) { vec![random_poly(&mut rng, &tgt, 3, 0.7)] } else { Vec::new() };
        let rels: Vec<GradedPoly> = rels.into_iter().filter(|r| !r.is_zero()).collect();
        let target = RingPresentation::new(tgt.clone(), rels.clone()).unwrap();
        let images = vec![
            random_poly(&mut rng, &tgt, 1, 0.8),
            random_poly(&mut rng, &tgt, 1, 0.8),
            random_poly(&mut rng, &tgt, 2, 0.8),
        ];
        let m = RingMap::new(RingPresentation::free(src), target, images).unwrap();
        for g in kernel(&m, 5).unwrap() {
            let img = m.apply(&g).unwrap();
            prop_assert!(dense_member(&img, &rels), "{} -> {}", g, img);
        }
    }
}

fn poly(t: &std::sync::Arc<VarTable>, s: &str) -> GradedPoly {
    GradedPoly::parse(t, s).unwrap()
}

#[test]
fn conic_invariants_generate_the_quotient_ideal() {
    let t = VarTable::new(&[("s", 1), ("t1", 1), ("t2", 1)]).unwrap();
    let gens = [poly(&t, "2*s*(2*s-t1)"), poly(&t, "2*s*(2*s-t2)")];
    let p = poly(&t, "2*s*(2*s-t1)*(2*s-t2)");
    assert!(dense_member(&p, &gens));
    let m = member(&p, &gens, 3).unwrap();
    assert!(m.member);
    assert_eq!(reconstruct(&gens, &m.cofactors), p);
}

#[test]
fn hyperelliptic_kernel_contains_the_top_lambda_relation() {
    let reference = ConstantSet::parse(STRATA_TXT).unwrap();
    let resolver = builtin_resolver(&reference, 12);
    let (_, maps) = restrictions(&PipelineSpec::builtin(), &resolver).unwrap();
    let eta = &maps[0].eta;
    let t = eta.source.table.clone();
    let v = poly(&t, "l3 - (H + l1)*l2/2 - (H + l1)^2*(H - l1)/8");
    let ker = kernel(eta, 3).unwrap();
    assert!(ker.iter().any(|g| g.homogeneous_degree().unwrap() == 3));
    assert!(member(&v, &ker, 3).unwrap().member);
    let image = eta.apply(&v).unwrap();
    assert!(member(&image, &eta.target.relations, 3).unwrap().member);
}

#[test]
fn split_of_the_quartic_jet_class() {
    let reference = ConstantSet::parse(STRATA_TXT).unwrap();
    let resolver = builtin_resolver(&reference, 12);
    let (_, maps) = restrictions(&PipelineSpec::builtin(), &resolver).unwrap();
    let eta = &maps[0].eta;
    let [_, _, p2] = strata::derive_jet_classes().unwrap();
    let p2 = p2.embed(&eta.source.table).unwrap();
    let image = eta.apply(&p2).unwrap();
    let q = &eta.target.relations;
    let c = poly(&eta.target.table, "(2*xi1 - l1)/3");
    let g = cofactor_split(&image, q, &c).unwrap();
    let d = image.homogeneous_degree().unwrap();
    assert!(member(&image.add(&g.mul(&c)), q, d).unwrap().member);
}

#[test]
fn hyperelliptic_normal_class_spot_check() {
    let reference = ConstantSet::parse(STRATA_TXT).unwrap();
    let pres = strata::derive_hyperelliptic(&reference, 12).unwrap().presentation;
    let t = pres.table.clone();
    let c = poly(&t, "(2*xi1 - l1)/3");
    assert!(nzd_check(&c, &pres, 12).unwrap().nonzero_divisor);
    // annihilated classes would show up as q outside the ideal with c*q inside
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let e = rng.random_range(1..=3);
        let q = random_poly(&mut rng, &t, e, 0.6);
        if !dense_member(&q, &pres.relations) {
            assert!(!dense_member(&q.mul(&c), &pres.relations), "{q}");
        }
    }
}

#[test]
fn torsion_annihilator_detected() {
    let t = VarTable::new(&[("x", 1), ("y", 1)]).unwrap();
    let pres = RingPresentation::new(t.clone(), vec![poly(&t, "5*x*y")]).unwrap();
    // x annihilates 5y, and 5x annihilates y itself
    assert!(nzd_check(&poly(&t, "x"), &pres, 3).unwrap().witness.is_some_and(|(_, w)| !w.is_zero()));
    let c = poly(&t, "5*x");
    let r = nzd_check(&c, &pres, 3).unwrap();
    assert!(!r.nonzero_divisor);
    let (e, w) = r.witness.unwrap();
    assert_eq!(e, 1);
    assert!(!dense_member(&w, &pres.relations));
    assert!(dense_member(&w.mul(&c), &pres.relations));
}

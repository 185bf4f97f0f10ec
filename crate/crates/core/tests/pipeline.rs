use std::sync::OnceLock;

use chowglue::genus3::pipeline::PipelineOutcome;
use chowglue::genus3::{builtin_resolver, run_pipeline, ConstantSet, PipelineSpec, RELATIONS_TXT, STRATA_TXT};
use chowglue::gluecore::{Family, GlueOptions};
use chowglue::idealengine::member;
use chowglue::GradedPoly;

fn outcome() -> &'static PipelineOutcome {
    static OUT: OnceLock<PipelineOutcome> = OnceLock::new();
    OUT.get_or_init(|| {
        let reference = ConstantSet::parse(STRATA_TXT).unwrap();
        let resolver = builtin_resolver(&reference, 12);
        let opts = GlueOptions { skip_open_check: true, ..Default::default() };
        run_pipeline(&PipelineSpec::builtin(), 12, opts, &resolver).unwrap()
    })
}

fn in_ideal(p: &GradedPoly, gens: &[GradedPoly]) -> bool {
    member(p, gens, 12).unwrap().member
}

#[test]
fn step_order_and_relation_count() {
    let out = outcome();
    let names: Vec<&str> = out.steps.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["hyperelliptic", "delta1", "delta11", "delta111"]);
    let final_rels = &out.presentation().relations;
    assert_eq!(final_rels.len(), out.labels().len());
    assert!(final_rels.iter().all(|r| r.homogeneous_degree().unwrap() <= 10));
}

#[test]
fn hyperelliptic_witness_for_xi1() {
    let step = &outcome().steps[0];
    let eta = &step.datum.eta;
    let q = &step.datum.closed.relations;
    let (_, w) = step.certificate.witnesses.iter().find(|(n, _)| n == "xi1").unwrap();
    let xi1 = GradedPoly::var(&eta.target.table, "xi1").unwrap();
    assert!(in_ideal(&eta.apply(w).unwrap().sub(&xi1), q));
    let expected = GradedPoly::parse(&eta.source.table, "(3*H + l1)/2").unwrap();
    assert_eq!(eta.apply(&expected).unwrap(), xi1);
}

#[test]
fn delta1_witnesses_restrict_to_generators() {
    let step = &outcome().steps[1];
    let eta = &step.datum.eta;
    let q = &step.datum.closed.relations;
    let mut names: Vec<&str> = Vec::new();
    for (n, w) in &step.certificate.witnesses {
        let v = GradedPoly::var(&eta.target.table, n).unwrap();
        assert!(in_ideal(&eta.apply(w).unwrap().sub(&v), q), "{n}");
        names.push(n);
    }
    names.sort();
    assert_eq!(names, ["t", "t0", "t1"]);
}

#[test]
fn hyperelliptic_kernel_relation() {
    let step = &outcome().steps[0];
    let t = &step.output.table;
    let v = GradedPoly::parse(t, "l3 - (H + l1)*l2/2 - (H + l1)^2*(H - l1)/8").unwrap();
    let h = GradedPoly::var(t, "H").unwrap();
    let expanded = GradedPoly::parse(
        t,
        "l1^3*H/8 + l1^2*H^2/8 - l1*l2*H/2 - l1*H^3/8 - l2*H^2/2 + l3*H - H^4/8",
    )
    .unwrap();
    assert_eq!(h.mul(&v), expanded);
    // the reference k_h with the boundary classes set to zero
    let rel = ConstantSet::parse(RELATIONS_TXT).unwrap();
    let kh = rel.get("k_h").unwrap();
    let kt = kh.table();
    let zero: Vec<usize> = ["d1", "d11", "d111"].iter().filter_map(|n| kt.position(n)).collect();
    assert_eq!(kh.kill(&zero).embed(t).unwrap(), expanded);
    assert!(in_ideal(&expanded, &step.output.relations));
    assert!(step.certificate.relations.iter().any(|r| r.family == Family::Kernel && r.relation.homogeneous_degree().unwrap() == 4));
}

#[test]
fn last_step_has_no_lifted_closed_relations() {
    let step = &outcome().steps[3];
    assert!(step.datum.closed.relations.is_empty());
    assert!(step.certificate.relations.iter().all(|r| r.family != Family::LiftedClosed));
}

#[test]
fn hyperelliptic_class_times_top_boundary_vanishes() {
    let out = outcome();
    let rel = ConstantSet::parse(RELATIONS_TXT).unwrap();
    let k = rel.get("k111_4").unwrap().embed(&out.presentation().table).unwrap();
    assert!(in_ideal(&k, &out.presentation().relations));
}

#[test]
fn every_step_certifies() {
    for s in &outcome().steps {
        assert!(s.certificate.nzd, "{}", s.name);
        assert!(s.certificate.restriction_vanishes, "{}", s.name);
    }
}

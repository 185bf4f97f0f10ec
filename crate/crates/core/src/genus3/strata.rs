//! Presentations of the individual strata, recomputed from first principles.

use std::sync::Arc;

use crate::cherncalc::{quotient_class, total_class, BundleExpr};
use crate::equilocal::{
    character_class, interpolate_class, invariant_ideal_generators_check, invariant_subring_check, localize_pushforward,
    to_elementary, FixedPointMap, GroupAction, ProjectiveRep,
};
use crate::error::{Error, Result};
use crate::gradedring::{substitute_images, GradedPoly, Monomial, RingPresentation, VarTable};
use crate::idealengine::{contains, Ideal};

use super::constants::{expect_equal, ConstantSet};

/// A presentation whose relations carry names.
#[derive(Clone, Debug)]
pub struct NamedPresentation {
    pub presentation: RingPresentation,
    pub names: Vec<String>,
}

impl NamedPresentation {
    pub fn new(table: Arc<VarTable>, rels: Vec<(String, GradedPoly)>) -> Result<NamedPresentation> {
        let (names, relations): (Vec<_>, Vec<_>) = rels.into_iter().unzip();
        Ok(NamedPresentation { presentation: RingPresentation::new(table, relations)?, names })
    }

    pub fn free(table: Arc<VarTable>) -> NamedPresentation {
        NamedPresentation { presentation: RingPresentation::free(table), names: Vec::new() }
    }
}

fn p(t: &Arc<VarTable>, s: &str) -> GradedPoly {
    GradedPoly::parse(t, s).expect("built-in expression")
}

fn hyperelliptic_table() -> Arc<VarTable> {
    VarTable::new(&[("l1", 1), ("l2", 2), ("xi1", 1)]).unwrap()
}

fn lambda_table() -> Arc<VarTable> {
    VarTable::new(&[("l1", 1), ("l2", 2), ("l3", 3)]).unwrap()
}

/// Images of `(c1, c2, s)` on the hyperelliptic table.
fn hyperelliptic_images(out: &Arc<VarTable>) -> Vec<GradedPoly> {
    vec![p(out, "-xi1"), p(out, "l2 - 1/3*l1^2 + 1/3*xi1^2"), p(out, "-1/3*xi1 - 1/3*l1")]
}

/// Degree-9 class cutting out the hyperelliptic stratum, before the change of
/// variables: the quotient of the total classes of `Sym⁴E ⊗ L^{-2}` and
/// `Sym²E ⊗ det E ⊗ L^{-2}` for `E` of rank 3 with vanishing top class.
pub fn c9_raw() -> Result<GradedPoly> {
    let t = VarTable::new(&[("c1", 1), ("c2", 2), ("s", 1)])?;
    let e = BundleExpr::atom("E", vec![p(&t, "c1"), p(&t, "c2"), GradedPoly::zero(&t)]);
    let b = BundleExpr::tensor_line(BundleExpr::sym(4, e.clone()), p(&t, "-2*s"));
    let a = BundleExpr::tensor_line(BundleExpr::sym(2, e), p(&t, "c1 - 2*s"));
    let cb = total_class(&t, &b, 9)?;
    let ca = total_class(&t, &a, 9)?;
    quotient_class(&cb, &ca, 9)
}

pub fn derive_c9() -> Result<GradedPoly> {
    let raw = c9_raw()?;
    let out = hyperelliptic_table();
    substitute_images(&raw, raw.table(), &out, &hyperelliptic_images(&out))
}

fn conic_setup() -> Result<(Arc<VarTable>, [GradedPoly; 2])> {
    let t = VarTable::new(&[("s", 1), ("t1", 1), ("t2", 1)])?;
    let claimed = [p(&t, "2*s*(4*s - t1 - t2)"), p(&t, "2*s*(2*s - t1)*(2*s - t2)")];
    Ok((t, claimed))
}

/// Whether the two symmetric generators generate the invariant part of the
/// ideal `(2s(2s - t1), 2s(2s - t2))` under the swap of `t1, t2`.
pub fn conic_invariant_check(bound: u32) -> Result<bool> {
    let (t, claimed) = conic_setup()?;
    let g = GroupAction::swap(&t, "t1", "t2")?;
    let ideal = [p(&t, "2*s*(2*s - t1)"), p(&t, "2*s*(2*s - t2)")];
    invariant_ideal_generators_check(&ideal, &claimed, &g, bound)
}

/// Invariant generators of the ideal of the conic-degeneration locus, already
/// multiplied by its fundamental class; the second is normalized by `-1`.
pub fn conic_relations() -> Result<(GradedPoly, GradedPoly)> {
    let (_, claimed) = conic_setup()?;
    let mid = VarTable::new(&[("c1", 1), ("c2", 2), ("s", 1)])?;
    let classes = [p(&mid, "c1"), p(&mid, "c2")];
    let g1 = to_elementary(&claimed[0], &["t1", "t2"], &classes, &mid)?;
    let g2 = to_elementary(&claimed[1], &["t1", "t2"], &classes, &mid)?;
    let c1 = p(&mid, "c1");
    let d1 = c1.neg().mul(&g1);
    let d2 = c1.mul(&g2);
    let out = hyperelliptic_table();
    let imgs = hyperelliptic_images(&out);
    Ok((substitute_images(&d1, &mid, &out, &imgs)?, substitute_images(&d2, &mid, &out, &imgs)?))
}

/// [`conic_relations`] after certifying the generators up to `bound`.
pub fn derive_conic_relations(bound: u32) -> Result<(GradedPoly, GradedPoly)> {
    if !conic_invariant_check(bound)? {
        return Err(Error::Invalid("invariant generators do not generate the invariant ideal".into()));
    }
    conic_relations()
}

/// `Z[l1, l2, xi1] / (c9, D1, D2)` without comparison to reference values.
pub fn hyperelliptic_presentation(c9: GradedPoly, d1: GradedPoly, d2: GradedPoly) -> Result<NamedPresentation> {
    NamedPresentation::new(hyperelliptic_table(), vec![("c9".into(), c9), ("D1".into(), d1), ("D2".into(), d2)])
}

/// `Z[l1, l2, xi1] / (c9, D1, D2)`, checked against the reference values.
pub fn derive_hyperelliptic(reference: &ConstantSet, bound: u32) -> Result<NamedPresentation> {
    let c9 = derive_c9()?;
    expect_equal("c9", reference.get("c9")?, &c9)?;
    let (d1, d2) = derive_conic_relations(bound)?;
    expect_equal("D1", reference.get("D1")?, &d1)?;
    expect_equal("D2", reference.get("D2")?, &d2)?;
    hyperelliptic_presentation(c9, d1, d2)
}

fn exponent_vectors(n: usize, d: u16) -> Vec<[u16; 3]> {
    assert_eq!(n, 3);
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

fn weight(t: &Arc<VarTable>, e: &[u16; 3]) -> GradedPoly {
    // x^e has weight -e·u
    let mut w = GradedPoly::zero(t);
    for (k, &x) in e.iter().enumerate() {
        w = w.sub(&GradedPoly::var(t, &format!("u{}", k + 1)).unwrap().scale(&(x as i64).into()));
    }
    w
}

fn coefficient_of_power(poly: &GradedPoly, var: &str, b: u16, out: &Arc<VarTable>) -> Result<GradedPoly> {
    let t = poly.table();
    let i = t.position(var).ok_or_else(|| Error::UnknownVariable(var.into()))?;
    let terms = poly
        .terms()
        .iter()
        .filter(|(m, _)| m.exps()[i] == b)
        .map(|(m, c)| {
            let mut e = m.0.clone();
            e[i] = 0;
            (Monomial(e), c.clone())
        })
        .collect();
    GradedPoly::from_terms(t, terms).embed(out)
}

/// Passes from torus classes `u` on `(u1, u2, u3, h14)` to `(l1, l2, l3)`,
/// with `h14 = λ1` and `λi = e_i(u)`.
fn to_lambda(poly: &GradedPoly) -> Result<GradedPoly> {
    let u = VarTable::new(&[("u1", 1), ("u2", 1), ("u3", 1)])?;
    let src = poly.table().clone();
    let imgs: Vec<GradedPoly> =
        src.names().iter().map(|n| if n == "h14" { p(&u, "u1 + u2 + u3") } else { GradedPoly::var(&u, n).unwrap() }).collect();
    let q = substitute_images(poly, &src, &u, &imgs)?;
    let out = lambda_table();
    to_elementary(&q, &["u1", "u2", "u3"], &[p(&out, "l1"), p(&out, "l2"), p(&out, "l3")], &out)
}

/// Classes `p0, p1, p2` of the locus of quartics with a triple point.
pub fn derive_jet_classes() -> Result<[GradedPoly; 3]> {
    let t = VarTable::new(&[("u1", 1), ("u2", 1), ("u3", 1), ("h14", 1), ("h2", 1)])?;
    let quartics = exponent_vectors(3, 4);
    let p14 = ProjectiveRep::new(quartics.iter().map(|e| weight(&t, e)).collect(), "h14")?;
    let p2 = ProjectiveRep::new((1..=3).map(|k| p(&t, &format!("-u{k}"))).collect(), "h2")?;
    let mut values = Vec::with_capacity(quartics.len() * 3);
    for m in &quartics {
        for k in 0..3 {
            if m[k] >= 2 {
                values.push(GradedPoly::zero(&t));
                continue;
            }
            let wm = weight(&t, m);
            let v = quartics.iter().filter(|x| x[k] >= 2).fold(GradedPoly::one(&t), |acc, x| acc.mul(&weight(&t, x).sub(&wm)));
            values.push(v);
        }
    }
    let class = interpolate_class(&[p14, p2], &values, &t)?;
    let th = VarTable::new(&[("u1", 1), ("u2", 1), ("u3", 1), ("h14", 1)])?;
    let p0 = to_lambda(&coefficient_of_power(&class, "h2", 0, &th)?)?;
    let p1 = to_lambda(&coefficient_of_power(&class, "h2", 1, &th)?)?;
    let p2 = to_lambda(&coefficient_of_power(&class, "h2", 2, &th)?)?;
    Ok([p0, p1, p2])
}

/// Class `z2` of the locus of squared conics, as the pushforward of the
/// squaring map from conics to quartics.
pub fn derive_z2() -> Result<GradedPoly> {
    let th = VarTable::new(&[("u1", 1), ("u2", 1), ("u3", 1), ("h14", 1)])?;
    let quartics = exponent_vectors(3, 4);
    let conics = exponent_vectors(3, 2);
    let p5 = ProjectiveRep::new(conics.iter().map(|e| weight(&th, e)).collect(), "h5")?;
    let p14 = ProjectiveRep::new(quartics.iter().map(|e| weight(&th, e)).collect(), "h14")?;
    let images = conics
        .iter()
        .map(|c| quartics.iter().position(|q| *q == [2 * c[0], 2 * c[1], 2 * c[2]]).unwrap())
        .collect();
    let vals = localize_pushforward(&p5, &p14, &FixedPointMap { images, degree: 2 })?;
    let z = interpolate_class(&[p14], &vals, &th)?;
    to_lambda(&z)
}

/// [`derive_jet_classes`] followed by [`derive_z2`].
pub fn derive_quartic_classes() -> Result<[GradedPoly; 4]> {
    let [p0, p1, p2] = derive_jet_classes()?;
    Ok([p0, p1, p2, derive_z2()?])
}

/// `Z[l1, l2, l3] / (p0, p1, p2, z2)`, checked against the reference values,
/// together with the certificate that `z2 ∉ (p0, p1, p2)`.
pub fn derive_open(reference: &ConstantSet) -> Result<(NamedPresentation, bool)> {
    let [p0, p1, p2, z2] = derive_quartic_classes()?;
    for (n, x) in [("p0", &p0), ("p1", &p1), ("p2", &p2), ("z2", &z2)] {
        expect_equal(n, reference.get(n)?, x)?;
    }
    let independent = z2_independent(&p0, &p1, &p2, &z2)?;
    Ok((open_presentation([p0, p1, p2, z2])?, independent))
}

/// Whether `z2 ∉ (p0, p1, p2)`.
pub fn z2_independent(p0: &GradedPoly, p1: &GradedPoly, p2: &GradedPoly, z2: &GradedPoly) -> Result<bool> {
    let t = lambda_table();
    Ok(!contains(&Ideal::new(&t, &[p0.embed(&t)?, p1.embed(&t)?, p2.embed(&t)?])?, &z2.embed(&t)?)?)
}

/// `Z[l1, l2, l3] / (p0, p1, p2, z2)` without comparison to reference values.
pub fn open_presentation(classes: [GradedPoly; 4]) -> Result<NamedPresentation> {
    let t = lambda_table();
    let [p0, p1, p2, z2] = classes;
    NamedPresentation::new(t, vec![("p0".into(), p0), ("p1".into(), p1), ("p2".into(), p2), ("z2".into(), z2)])
}

/// Weight on `(t0, t1)` of the coefficient of `x0^{6-i} x1^i` of a binary
/// sextic.
fn sextic_weight(t: &Arc<VarTable>, i: i64) -> GradedPoly {
    p(t, &format!("{}*t0 + {}*t1", i - 4, 2 - i))
}

/// The single relation `f` of the first boundary stratum.
pub fn derive_delta1_relation() -> Result<GradedPoly> {
    let t = VarTable::new(&[("t0", 1), ("t1", 1), ("t", 1)])?;
    let s = p(&t, "t0 - 2*t1");
    let weights = [s, sextic_weight(&t, 5), sextic_weight(&t, 4), sextic_weight(&t, 3)];
    character_class(&t, &weights, &GradedPoly::zero(&t))
}

pub fn derive_delta1(reference: &ConstantSet) -> Result<NamedPresentation> {
    let f = derive_delta1_relation()?;
    expect_equal("f", reference.get("f")?, &f)?;
    NamedPresentation::new(f.table().clone(), vec![("f".into(), f)])
}

/// Whether `t, t1 + t2, t1 t2` generate the invariants of the swap of
/// `t1, t2` up to `bound`.
pub fn delta11_subring_check(bound: u32) -> Result<bool> {
    let r = VarTable::new(&[("t", 1), ("t1", 1), ("t2", 1)])?;
    let g = GroupAction::swap(&r, "t1", "t2")?;
    invariant_subring_check(&[p(&r, "t"), p(&r, "t1 + t2"), p(&r, "t1*t2")], &g, bound)
}

/// Class of the hyperelliptic locus restricted to the second boundary
/// stratum, cut out by a coordinate of weight `-3t`.
pub fn delta11_hyperelliptic_class() -> Result<GradedPoly> {
    let t = VarTable::new(&[("t", 1), ("c1", 1), ("c2", 2)])?;
    character_class(&t, &[p(&t, "-3*t")], &GradedPoly::zero(&t))
}

/// Free ring `Z[t, c1, c2]`, after certifying its invariant generators,
/// together with the restricted hyperelliptic class.
pub fn derive_delta11(bound: u32) -> Result<(NamedPresentation, GradedPoly)> {
    if !delta11_subring_check(bound)? {
        return Err(Error::NotInvariant("t, t1 + t2, t1*t2 do not generate the invariants".into()));
    }
    let h = delta11_hyperelliptic_class()?;
    Ok((NamedPresentation::free(h.table().clone()), h))
}

/// Whether the elementary symmetric functions generate the invariants of
/// three variables up to `bound`.
pub fn delta111_subring_check(bound: u32) -> Result<bool> {
    let r = VarTable::new(&[("t1", 1), ("t2", 1), ("t3", 1)])?;
    let g = GroupAction::symmetric(&r, &["t1", "t2", "t3"])?;
    let gens = [p(&r, "t1 + t2 + t3"), p(&r, "t1*t2 + t1*t3 + t2*t3"), p(&r, "t1*t2*t3")];
    invariant_subring_check(&gens, &g, bound)
}

pub fn delta111_presentation() -> Result<NamedPresentation> {
    Ok(NamedPresentation::free(VarTable::new(&[("c1", 1), ("c2", 2), ("c3", 3)])?))
}

/// Free ring `Z[c1, c2, c3]`, after certifying the symmetric invariants.
pub fn derive_delta111(bound: u32) -> Result<NamedPresentation> {
    if !delta111_subring_check(bound)? {
        return Err(Error::NotInvariant("elementary symmetric functions do not generate the invariants".into()));
    }
    delta111_presentation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus3::constants::STRATA_TXT;

    fn reference() -> ConstantSet {
        ConstantSet::parse(STRATA_TXT).unwrap()
    }

    #[test]
    fn hyperelliptic_matches() {
        derive_hyperelliptic(&reference(), 8).unwrap();
    }

    #[test]
    fn open_matches() {
        let (_, independent) = derive_open(&reference()).unwrap();
        assert!(independent);
    }

    #[test]
    fn delta_strata() {
        derive_delta1(&reference()).unwrap();
        let (_, h) = derive_delta11(8).unwrap();
        assert_eq!(h.to_string(), "-3*t");
        derive_delta111(8).unwrap();
    }
}

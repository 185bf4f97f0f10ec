//! Gluing an open-stratum presentation with a closed stratum along the
//! restriction map: the total relation ideal is generated by `Z·q_h`, `Z·v`
//! and `p_h + Z·g_h`, provided `c_top` is a non-zero-divisor on the closed
//! stratum.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::Coefficient;
use crate::gradedring::{substitute_images, GradedPoly, RingMap, RingPresentation, VarTable};
use crate::idealengine::{contains, cofactor_split_in, ideal_equal_report, kernel_with_seeds, nzd_check, preimage_degree, Ideal, ImageCache};

#[derive(Clone, Debug)]
pub struct GluingDatum {
    pub open: RingPresentation,
    pub closed: RingPresentation,
    /// Source: free ring on the open generators plus `zsym`; target: `closed`.
    pub eta: RingMap,
    pub zsym: String,
    pub c_top: GradedPoly,
}

impl GluingDatum {
    /// Builds the datum; `images` lists `(generator, expression)` on the
    /// closed table for every open generator and for `zsym`.
    pub fn new(
        open: RingPresentation,
        closed: RingPresentation,
        zsym: (&str, u32),
        images: &[(&str, &str)],
        c_top: &str,
    ) -> Result<GluingDatum> {
        let src = open.table.extended(&[zsym])?;
        let mut imgs = Vec::with_capacity(src.len());
        for name in src.names() {
            let (_, e) = images
                .iter()
                .find(|(n, _)| n == name)
                .ok_or_else(|| Error::Invalid(format!("no image given for {name}")))?;
            imgs.push(GradedPoly::parse(&closed.table, e)?);
        }
        for (n, _) in images {
            if src.position(n).is_none() {
                return Err(Error::UnknownVariable(n.to_string()));
            }
        }
        let eta = RingMap::new(RingPresentation::free(src), closed.clone(), imgs)?;
        let c_top = GradedPoly::parse(&closed.table, c_top)?;
        GluingDatum::from_parts(open, closed, eta, zsym.0, c_top)
    }

    pub fn from_parts(open: RingPresentation, closed: RingPresentation, eta: RingMap, zsym: &str, c_top: GradedPoly) -> Result<GluingDatum> {
        let src = &eta.source.table;
        if src.len() != open.table.len() + 1 || src.name(src.len() - 1) != zsym {
            return Err(Error::Invalid(format!("restriction source must be the open generators followed by {zsym}")));
        }
        for (i, n) in open.table.names().iter().enumerate() {
            if src.name(i) != n || src.degree(i) != open.table.degree(i) {
                return Err(Error::Invalid(format!("restriction source disagrees with open generator {n}")));
            }
        }
        if eta.target.table != closed.table {
            return Err(Error::TableMismatch);
        }
        let d = GluingDatum { open, closed, eta, zsym: zsym.to_string(), c_top };
        let z = d.eta.image_of(zsym).unwrap().clone();
        let q = Ideal::new(&d.closed.table, &d.closed.relations)?;
        if !contains(&q, &z.sub(&d.c_top))? {
            return Err(Error::Mismatch {
                name: format!("image of {zsym}"),
                expected: d.c_top.to_string(),
                computed: z.to_string(),
            });
        }
        Ok(d)
    }

    pub fn zsym_degree(&self) -> u32 {
        let t = &self.eta.source.table;
        t.degree(t.len() - 1)
    }

    pub fn source_table(&self) -> &Arc<VarTable> {
        &self.eta.source.table
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `Z·q_h` for a lifted closed relation.
    LiftedClosed,
    /// `Z·v` for a kernel generator of the restriction.
    Kernel,
    /// `p_h + Z·g_h` for a modified open relation.
    ModifiedOpen,
}

#[derive(Clone, Debug)]
pub struct GluedRelation {
    pub family: Family,
    /// Index into the closed relations, kernel generators, or open relations.
    pub index: usize,
    pub relation: GradedPoly,
    /// `q_h`, `v` or `g_h` respectively.
    pub factor: GradedPoly,
}

#[derive(Clone, Debug)]
pub struct GluingCertificate {
    pub witnesses: Vec<(String, GradedPoly)>,
    pub degree_bound: u32,
    pub nzd: bool,
    pub relations: Vec<GluedRelation>,
    /// Every output relation restricts to zero on the closed stratum.
    pub restriction_vanishes: bool,
    /// Setting the fundamental class to zero recovers the open ideal.
    pub restricts_to_open: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GlueOptions {
    /// Perturbs the chosen lifts by random elements of the relevant kernels.
    pub perturb: Option<u64>,
    /// Skip the restriction-to-open equality check.
    pub skip_open_check: bool,
}

/// Preimage of each closed generator through `eta`, modulo the closed
/// relations.
pub fn check_surjective(d: &GluingDatum, degree_bound: u32) -> Result<Vec<(String, GradedPoly)>> {
    let q = Ideal::new(&d.closed.table, &d.closed.relations)?;
    let t = &d.closed.table;
    let mut cache = ImageCache::new(&d.eta);
    let mut out = Vec::new();
    for (i, name) in t.names().iter().enumerate() {
        if t.degree(i) > degree_bound {
            return Err(Error::NotSurjective { generator: name.clone(), bound: degree_bound });
        }
        let y = GradedPoly::var(t, name)?;
        match preimage_degree(&d.eta, &q, &mut cache, &y)? {
            Some(w) => out.push((name.clone(), w)),
            None => return Err(Error::NotSurjective { generator: name.clone(), bound: degree_bound }),
        }
    }
    Ok(out)
}

fn lift(p: &GradedPoly, closed: &Arc<VarTable>, src: &Arc<VarTable>, witnesses: &[GradedPoly]) -> Result<GradedPoly> {
    substitute_images(p, closed, src, witnesses)
}

/// Random Z[1/6]-combination of `m·g` with `deg(m·g) = d`.
fn random_element(rng: &mut ChaCha8Rng, gens: &[GradedPoly], d: u32) -> Result<GradedPoly> {
    let Some(t) = gens.first().map(|g| g.table().clone()) else {
        return Ok(GradedPoly::zero(&VarTable::new::<&str>(&[])?));
    };
    let mut out = GradedPoly::zero(&t);
    for g in gens {
        let e = g.homogeneous_degree()?;
        if e > d {
            continue;
        }
        for m in t.monomials_of_degree(d - e) {
            if rng.random_bool(0.3) {
                let c = Coefficient::from_int(rng.random_range(-3i64..=3));
                out = out.add(&g.mul_monomial(&m, &c));
            }
        }
    }
    Ok(out)
}

/// Runs the gluing algorithm up to `degree_bound`.
pub fn glue(d: &GluingDatum, degree_bound: u32, opts: GlueOptions) -> Result<(RingPresentation, GluingCertificate)> {
    let src = d.source_table().clone();
    let closed_t = d.closed.table.clone();
    let zdeg = d.zsym_degree();
    let witnesses = check_surjective(d, degree_bound)?;
    let nzd = nzd_check(&d.c_top, &d.closed, degree_bound)?;
    if let Some((degree, w)) = &nzd.witness {
        return Err(Error::ZeroDivisor { class: d.c_top.to_string(), witness: w.to_string(), degree: *degree });
    }
    let mut rng = opts.perturb.map(ChaCha8Rng::seed_from_u64);
    let z = GradedPoly::var(&src, &d.zsym)?;
    let kill_z = [src.len() - 1];

    // lifted closed relations
    let mut wit: Vec<GradedPoly> = witnesses.iter().map(|(_, w)| w.clone()).collect();
    let q_lifts: Vec<GradedPoly> =
        d.closed.relations.iter().map(|q| lift(q, &closed_t, &src, &wit)).collect::<Result<_>>()?;

    // kernel of the restriction modulo the lifted closed relations
    let kernel_bound = degree_bound.saturating_sub(zdeg);
    let kernel = kernel_with_seeds(&d.eta, kernel_bound, &q_lifts)?;

    if let Some(rng) = rng.as_mut() {
        let mut kgens = q_lifts.clone();
        kgens.extend(kernel.iter().cloned());
        for w in wit.iter_mut() {
            let e = w.homogeneous_degree()?;
            *w = w.add(&random_element(rng, &kgens, e)?.embed(&src)?);
        }
    }
    let q_lifts: Vec<GradedPoly> = if opts.perturb.is_some() {
        d.closed.relations.iter().map(|q| lift(q, &closed_t, &src, &wit)).collect::<Result<_>>()?
    } else {
        q_lifts
    };

    // modified open relations
    let mut aug = d.closed.relations.clone();
    aug.push(d.c_top.clone());
    let aug = Ideal::new(&closed_t, &aug)?;
    let open_imgs: Vec<GradedPoly> = d
        .open
        .relations
        .iter()
        .map(|p| d.eta.apply(&p.embed(&src)?))
        .collect::<Result<_>>()?;
    let splits: Vec<GradedPoly> = open_imgs.par_iter().map(|p| cofactor_split_in(p, &aug)).collect::<Result<_>>()?;

    let mut relations = Vec::new();
    for (i, q) in q_lifts.iter().enumerate() {
        relations.push(GluedRelation { family: Family::LiftedClosed, index: i, relation: z.mul(q), factor: q.clone() });
    }
    for (i, v) in kernel.iter().enumerate() {
        relations.push(GluedRelation { family: Family::Kernel, index: i, relation: z.mul(v), factor: v.clone() });
    }
    for (i, (p, g)) in d.open.relations.iter().zip(&splits).enumerate() {
        let mut g = g.clone();
        if let Some(rng) = rng.as_mut() {
            let e = g.homogeneous_degree()?.max(p.homogeneous_degree()?.saturating_sub(zdeg));
            g = g.add(&random_element(rng, &d.closed.relations, e)?.embed(&closed_t)?);
        }
        let g = lift(&g, &closed_t, &src, &wit)?;
        let relation = p.embed(&src)?.add(&z.mul(&g));
        relations.push(GluedRelation { family: Family::ModifiedOpen, index: i, relation, factor: g });
    }

    // every relation restricts to zero on the closed stratum
    let q = Ideal::new(&closed_t, &d.closed.relations)?;
    let restriction_vanishes = relations
        .par_iter()
        .map(|r| contains(&q, &d.eta.apply(&r.relation)?))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|x| x);
    if !restriction_vanishes {
        return Err(Error::Invalid("a glued relation does not restrict to zero on the closed stratum".into()));
    }

    let restricts_to_open = if opts.skip_open_check {
        true
    } else {
        let killed: Vec<GradedPoly> = relations
            .iter()
            .map(|r| r.relation.kill(&kill_z).embed(&d.open.table))
            .collect::<Result<_>>()?;
        let a = Ideal::new(&d.open.table, &killed)?;
        let b = Ideal::new(&d.open.table, &d.open.relations)?;
        ideal_equal_report(&a, &b, false)?.equal
    };

    let pres = RingPresentation::new(src, relations.iter().map(|r| r.relation.clone()).collect())?;
    let cert = GluingCertificate {
        witnesses: witnesses.iter().map(|(n, _)| n.clone()).zip(wit).collect(),
        degree_bound,
        nzd: nzd.nonzero_divisor,
        relations,
        restriction_vanishes,
        restricts_to_open,
    };
    Ok((pres, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idealengine::ideal_equal;

    #[test]
    fn toy_gluing() {
        let ot = VarTable::new(&[("x", 1)]).unwrap();
        let open = RingPresentation::new(ot.clone(), vec![GradedPoly::parse(&ot, "x^2").unwrap()]).unwrap();
        let ct = VarTable::new(&[("y", 1)]).unwrap();
        let closed = RingPresentation::free(ct);
        let d = GluingDatum::new(open, closed, ("Z", 1), &[("x", "y"), ("Z", "y")], "y").unwrap();
        let (pres, cert) = glue(&d, 6, GlueOptions::default()).unwrap();
        assert!(cert.restricts_to_open);
        let t = pres.table.clone();
        let expect = [GradedPoly::parse(&t, "x*(x - Z)").unwrap(), GradedPoly::parse(&t, "Z*(x - Z)").unwrap()];
        assert!(ideal_equal(&pres.relations, &expect).unwrap());
        let g = &cert.relations.iter().find(|r| r.family == Family::ModifiedOpen).unwrap().factor;
        assert_eq!(*g, GradedPoly::parse(&t, "-x").unwrap());
        let (pres2, _) = glue(&d, 6, GlueOptions { perturb: Some(7), skip_open_check: false }).unwrap();
        assert!(ideal_equal(&pres.relations, &pres2.relations).unwrap());
    }

    #[test]
    fn identity_datum_witnesses() {
        let t = VarTable::new(&[("a", 1), ("b", 2)]).unwrap();
        let p = RingPresentation::free(t);
        let d = GluingDatum::new(p.clone(), p, ("Z", 1), &[("a", "a"), ("b", "b"), ("Z", "a")], "a").unwrap();
        let w = check_surjective(&d, 4).unwrap();
        assert_eq!(w[0].1.to_string(), "a");
        assert_eq!(w[1].1.to_string(), "b");
    }

    #[test]
    fn zero_divisor_refused() {
        let ot = VarTable::new(&[("x", 1)]).unwrap();
        let open = RingPresentation::free(ot);
        let ct = VarTable::new(&[("x", 1), ("y", 1)]).unwrap();
        let closed = RingPresentation::new(ct.clone(), vec![GradedPoly::parse(&ct, "x*y").unwrap()]).unwrap();
        let d = GluingDatum::new(open, closed, ("Z", 1), &[("x", "x"), ("Z", "y")], "y");
        assert!(matches!(glue(&d.unwrap(), 4, GlueOptions::default()), Err(Error::ZeroDivisor { .. })));
        let ct = VarTable::new(&[("x", 1), ("y", 1)]).unwrap();
        let ot = VarTable::new(&[("x", 1)]).unwrap();
        let d = GluingDatum::new(RingPresentation::free(ot), RingPresentation::free(ct), ("Z", 2), &[("x", "x"), ("Z", "x^2")], "x^2");
        assert!(matches!(check_surjective(&d.unwrap(), 4), Err(Error::NotSurjective { .. })));
    }
}

//! Graded ideal arithmetic over Z[1/6] by degreewise Hermite normal form.

pub mod echelon;
mod lattice;
mod slice;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

pub use slice::{Basis, DegreeSlice, Ideal};

use echelon::{Echelon, SparseVec};
use lattice::lattice_echelon;

use crate::error::{Error, Result};
use crate::exactnum::Coefficient;
use crate::gradedring::{GradedPoly, Monomial, RingMap, RingPresentation, VarTable};

#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    /// One cofactor per input generator (empty unless `member`).
    pub cofactors: Vec<GradedPoly>,
    /// Unreduced remainder; zero iff `member`.
    pub residual: GradedPoly,
}

fn check_homogeneous(p: &GradedPoly) -> Result<u32> {
    p.homogeneous_degree()
}

/// Membership with cofactors: `p = Σ aᵢ gᵢ` over Z[1/6].
pub fn member(p: &GradedPoly, gens: &[GradedPoly], up_to: u32) -> Result<Membership> {
    let d = check_homogeneous(p)?;
    if d > up_to {
        return Err(Error::DegreeBound { degree: d, bound: up_to });
    }
    let ideal = Ideal::new(p.table(), gens)?;
    let m = member_in(&ideal, p)?;
    // re-index cofactors to the caller's list, which may contain zeros
    let mut it = m.cofactors.into_iter();
    let cofactors = if m.member {
        gens.iter().map(|g| if g.is_zero() { GradedPoly::zero(p.table()) } else { it.next().unwrap() }).collect()
    } else {
        Vec::new()
    };
    Ok(Membership { member: m.member, cofactors, residual: m.residual })
}

/// Membership in a cached ideal. Cofactors index `ideal.gens()` and are
/// verified by reconstruction before being returned.
pub fn member_in(ideal: &Ideal, p: &GradedPoly) -> Result<Membership> {
    let d = check_homogeneous(p)?;
    let table = ideal.table();
    if p.is_zero() {
        return Ok(Membership {
            member: true,
            cofactors: vec![GradedPoly::zero(table); ideal.gens().len()],
            residual: GradedPoly::zero(table),
        });
    }
    let slice = ideal.slice(d, true);
    let v = slice.basis.vector(p, 0);
    let (res, combo) = slice.echelon.reduce(&v);
    if !res.is_empty() {
        return Ok(Membership {
            member: false,
            cofactors: Vec::new(),
            residual: slice.basis.poly(table, &res, 0),
        });
    }
    let cofactors = ideal.cofactors(&slice, &combo);
    let mut acc = GradedPoly::zero(table);
    for (a, g) in cofactors.iter().zip(ideal.gens()) {
        acc = acc.add(&a.mul(g));
    }
    if acc != *p {
        return Err(Error::Invalid(format!("cofactor reconstruction failed for {p}")));
    }
    Ok(Membership { member: true, cofactors, residual: GradedPoly::zero(table) })
}

/// Membership without cofactors.
pub fn contains(ideal: &Ideal, p: &GradedPoly) -> Result<bool> {
    let d = check_homogeneous(p)?;
    if p.is_zero() {
        return Ok(true);
    }
    Ok(ideal.slice(d, false).contains(p))
}

#[derive(Clone, Debug)]
pub struct EqualityReport {
    pub equal: bool,
    /// Generators of the first list not found in the second ideal.
    pub missing_in_second: Vec<usize>,
    /// Generators of the second list not found in the first ideal.
    pub missing_in_first: Vec<usize>,
}

/// Two-way membership of generators.
pub fn ideal_equal(i: &[GradedPoly], j: &[GradedPoly]) -> Result<bool> {
    let Some(t) = i.iter().chain(j).next().map(|p| p.table().clone()) else {
        return Ok(true);
    };
    Ok(ideal_equal_report(&Ideal::new(&t, i)?, &Ideal::new(&t, j)?, false)?.equal)
}

/// Two-way membership; with `certify` each membership is backed by verified
/// cofactors.
pub fn ideal_equal_report(i: &Ideal, j: &Ideal, certify: bool) -> Result<EqualityReport> {
    let missing_in_second = missing(i.gens(), j, certify)?;
    let missing_in_first = missing(j.gens(), i, certify)?;
    Ok(EqualityReport { equal: missing_in_first.is_empty() && missing_in_second.is_empty(), missing_in_second, missing_in_first })
}

fn missing(gens: &[GradedPoly], ideal: &Ideal, certify: bool) -> Result<Vec<usize>> {
    let degrees: BTreeSet<u32> = gens.iter().map(|g| g.homogeneous_degree()).collect::<Result<_>>()?;
    // build slices one degree per task so no slice is computed twice
    degrees.par_iter().for_each(|&d| {
        ideal.slice(d, certify);
    });
    let flags: Vec<bool> = gens
        .par_iter()
        .map(|g| if certify { member_in(ideal, g).map(|m| m.member) } else { contains(ideal, g) })
        .collect::<Result<_>>()?;
    Ok(flags.iter().enumerate().filter(|(_, &ok)| !ok).map(|(k, _)| k).collect())
}

/// `g` with `p + g·c ∈ (q_gens)`, from the cofactor of `c` in a membership
/// certificate of `p ∈ (q_gens, c)`.
pub fn cofactor_split(p: &GradedPoly, q_gens: &[GradedPoly], c: &GradedPoly) -> Result<GradedPoly> {
    let d = check_homogeneous(p)?;
    check_homogeneous(c)?;
    let mut gens = q_gens.to_vec();
    gens.push(c.clone());
    let m = member(p, &gens, d)?;
    if !m.member {
        return Err(Error::NotMember(m.residual.to_string()));
    }
    Ok(m.cofactors.last().unwrap().neg())
}

/// Same as [`cofactor_split`] with a cached ideal whose last generator is `c`.
pub fn cofactor_split_in(p: &GradedPoly, augmented: &Ideal) -> Result<GradedPoly> {
    let m = member_in(augmented, p)?;
    if !m.member {
        return Err(Error::NotMember(m.residual.to_string()));
    }
    Ok(m.cofactors.last().map(|g| g.neg()).unwrap_or_else(|| GradedPoly::zero(p.table())))
}

/// Memoized images of source monomials under a ring map.
pub struct ImageCache<'a> {
    map: &'a RingMap,
    memo: HashMap<Monomial, GradedPoly>,
}

impl<'a> ImageCache<'a> {
    pub fn new(map: &'a RingMap) -> Self {
        ImageCache { map, memo: HashMap::new() }
    }

    pub fn image(&mut self, m: &Monomial) -> GradedPoly {
        if let Some(p) = self.memo.get(m) {
            return p.clone();
        }
        let img = match m.exps().iter().position(|&e| e > 0) {
            None => GradedPoly::one(&self.map.target.table),
            Some(k) => {
                let mut rest = m.clone();
                rest.0[k] -= 1;
                self.image(&rest).mul(&self.map.images[k])
            }
        };
        self.memo.insert(m.clone(), img.clone());
        img
    }
}

/// Lattice basis of `{a ∈ Z[1/6]^S : Σ aᵢ·imgᵢ ∈ Q}` where the images and Q
/// live in a space with `t_len` columns.
fn kernel_lattice(t_len: usize, q_rows: &[SparseVec], images: Vec<SparseVec>) -> Echelon {
    let s_len = images.len();
    let mut rows: Vec<(u32, SparseVec)> = q_rows.iter().map(|r| (0, r.clone())).collect();
    for (i, mut img) in images.into_iter().enumerate() {
        img.push(((t_len + i) as u32, Coefficient::one()));
        rows.push((0, img));
    }
    lattice_echelon(t_len + s_len, rows, false)
}

fn kernel_rows(ech: &Echelon, t_len: usize) -> Vec<SparseVec> {
    ech.sorted_rows()
        .into_iter()
        .filter(|r| r.entries[0].0 as usize >= t_len)
        .map(|r| r.entries.iter().map(|(c, x)| (c - t_len as u32, x.clone())).collect())
        .collect()
}

/// Degree-d part of the kernel of `map` followed by the target quotient, as
/// a lattice basis of source polynomials.
pub fn kernel_degree(map: &RingMap, target: &Ideal, cache: &mut ImageCache, d: u32) -> Vec<GradedPoly> {
    let src = &map.source.table;
    let s_basis = Basis::new(src, d);
    if s_basis.is_empty() {
        return Vec::new();
    }
    let t_basis = target.basis(d);
    let q = target.slice(d, false);
    let q_rows: Vec<SparseVec> = q.echelon.rows().iter().map(|r| r.entries.clone()).collect();
    let images: Vec<SparseVec> = s_basis.monomials.iter().map(|m| t_basis.vector(&cache.image(m), 0)).collect();
    let ech = kernel_lattice(t_basis.len(), &q_rows, images);
    kernel_rows(&ech, t_basis.len()).iter().map(|v| s_basis.poly(src, v, 0)).collect()
}

/// Kernel generators of `map` followed by the target quotient, up to
/// `degree_bound`, minimal with respect to lower-or-equal-degree generators.
pub fn kernel(map: &RingMap, degree_bound: u32) -> Result<Vec<GradedPoly>> {
    kernel_with_seeds(map, degree_bound, &[])
}

/// Like [`kernel`], but generators already implied by `seeds` (which must
/// lie in the kernel) are not reported.
pub fn kernel_with_seeds(map: &RingMap, degree_bound: u32, seeds: &[GradedPoly]) -> Result<Vec<GradedPoly>> {
    let src = map.source.table.clone();
    let target = Ideal::new(&map.target.table, &map.target.relations)?;
    let mut cache = ImageCache::new(map);
    let mut chosen: Vec<GradedPoly> = seeds.iter().filter(|s| !s.is_zero()).cloned().collect();
    let n_seeds = chosen.len();
    for d in 1..=degree_bound {
        let have = Ideal::new(&src, &chosen)?;
        let slice = have.slice(d, false);
        if slice.basis.is_empty() {
            continue;
        }
        if !slice.echelon.all_pivots_unit() {
            let mut ech = slice.echelon.clone();
            for v in kernel_degree(map, &target, &mut cache, d) {
                let vec = slice.basis.vector(&v, 0);
                if !ech.contains(&vec) {
                    ech.insert(vec, 0);
                    chosen.push(v);
                }
            }
            continue;
        }
        // with unit pivots the quotient by the chosen generators is free on
        // the non-pivot monomials, so only those need to be searched
        let pivots: HashSet<u32> = slice.echelon.rows().iter().filter_map(|r| r.lead()).collect();
        let free: Vec<usize> = (0..slice.basis.len()).filter(|i| !pivots.contains(&(*i as u32))).collect();
        if free.is_empty() {
            continue;
        }
        let t_basis = target.basis(d);
        let q = target.slice(d, false);
        let q_rows: Vec<SparseVec> = q.echelon.rows().iter().map(|r| r.entries.clone()).collect();
        let images: Vec<SparseVec> =
            free.iter().map(|&i| t_basis.vector(&cache.image(&slice.basis.monomials[i]), 0)).collect();
        let ech = kernel_lattice(t_basis.len(), &q_rows, images);
        for v in kernel_rows(&ech, t_basis.len()) {
            let v: SparseVec = v.into_iter().map(|(c, x)| (free[c as usize] as u32, x)).collect();
            chosen.push(slice.basis.poly(&src, &v, 0));
        }
    }
    Ok(chosen.split_off(n_seeds))
}

#[derive(Clone, Debug)]
pub struct NzdReport {
    pub nonzero_divisor: bool,
    pub bound: u32,
    /// Degree and representative of an annihilated class that is nonzero in
    /// the quotient.
    pub witness: Option<(u32, GradedPoly)>,
}

/// Bounded non-zero-divisor certificate: multiplication by `c` from degree
/// `e` to `e + deg c` is injective on the presented ring for all `e ≤ bound`.
pub fn nzd_check(c: &GradedPoly, pres: &RingPresentation, degree_bound: u32) -> Result<NzdReport> {
    let d = check_homogeneous(c)?;
    if **c.table() != *pres.table {
        return Err(Error::TableMismatch);
    }
    let rel = Ideal::new(&pres.table, &pres.relations)?;
    let witnesses: Vec<Option<(u32, GradedPoly)>> = (0..=degree_bound)
        .into_par_iter()
        .map(|e| nzd_in_degree(c, d, &rel, e))
        .collect();
    let witness = witnesses.into_iter().flatten().next();
    Ok(NzdReport { nonzero_divisor: witness.is_none(), bound: degree_bound, witness })
}

fn nzd_in_degree(c: &GradedPoly, d: u32, rel: &Ideal, e: u32) -> Option<(u32, GradedPoly)> {
    let table = rel.table();
    let src = rel.basis(e);
    if src.is_empty() {
        return None;
    }
    let tgt = rel.basis(e + d);
    let q = rel.slice(e + d, false);
    let q_rows: Vec<SparseVec> = q.echelon.rows().iter().map(|r| r.entries.clone()).collect();
    let images: Vec<SparseVec> =
        src.monomials.iter().map(|m| tgt.vector(&c.mul_monomial(m, &Coefficient::one()), 0)).collect();
    let ech = kernel_lattice(tgt.len(), &q_rows, images);
    let ker = kernel_rows(&ech, tgt.len());
    let here = rel.slice(e, false);
    if ker.len() == here.echelon.rank() && here.echelon.all_pivots_unit() {
        return None;
    }
    for v in ker {
        if !here.echelon.contains(&v) {
            return Some((e, src.poly(table, &v, 0)));
        }
    }
    None
}

/// Solves `Σ aᵢ·imgᵢ ≡ y mod Q` in one degree; returns the source polynomial
/// `Σ aᵢ sᵢ` or `None`.
pub fn preimage_degree(map: &RingMap, target: &Ideal, cache: &mut ImageCache, y: &GradedPoly) -> Result<Option<GradedPoly>> {
    let d = check_homogeneous(y)?;
    let src = &map.source.table;
    let s_basis = Basis::new(src, d);
    let t_basis = target.basis(d);
    let t_len = t_basis.len() as u32;
    let q = target.slice(d, false);
    let mut rows: Vec<(u32, SparseVec)> = q.echelon.rows().iter().map(|r| (0, r.entries.clone())).collect();
    // source columns reversed so the reduced witness favours the largest
    // monomials in the canonical order
    let s_len = s_basis.len() as u32;
    for (i, m) in s_basis.monomials.iter().enumerate() {
        let mut v = t_basis.vector(&cache.image(m), 0);
        v.push((t_len + s_len - 1 - i as u32, Coefficient::one()));
        rows.push((0, v));
    }
    let ech = lattice_echelon(t_basis.len() + s_basis.len(), rows, false);
    let (res, _) = ech.reduce(&t_basis.vector(y, 0));
    // the residual lives entirely in the source block iff y is reachable;
    // y - Σ aᵢ[imgᵢ | eᵢ] = [0 | -a]
    if res.iter().any(|(c, _)| *c < t_len) {
        return Ok(None);
    }
    let mut a: SparseVec = res.iter().map(|(c, x)| (s_len - 1 - (c - t_len), -x)).collect();
    a.sort_by_key(|e| e.0);
    Ok(Some(s_basis.poly(src, &a, 0)))
}

/// Reconstructs a polynomial from a slice-coordinate vector (helper for
/// callers that work with raw rows).
pub fn poly_from_vector(table: &Arc<VarTable>, basis: &Basis, v: &SparseVec) -> GradedPoly {
    basis.poly(table, v, 0)
}

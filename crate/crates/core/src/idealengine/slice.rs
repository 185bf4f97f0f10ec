use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::lattice::lattice_echelon;
use super::echelon::{Echelon, SparseVec};
use crate::error::{Error, Result};
use crate::exactnum::Coefficient;
use crate::gradedring::{GradedPoly, Monomial, VarTable};

/// Monomial basis of one degree with column lookup.
#[derive(Clone, Debug)]
pub struct Basis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl Basis {
    pub fn new(table: &VarTable, degree: u32) -> Basis {
        let monomials = table.monomials_of_degree(degree);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        Basis { degree, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn col(&self, m: &Monomial) -> u32 {
        self.index[m]
    }

    /// Coordinates of a homogeneous polynomial of this degree, with columns
    /// shifted by `offset`.
    pub fn vector(&self, p: &GradedPoly, offset: u32) -> SparseVec {
        let mut v: SparseVec = p.terms().iter().map(|(m, c)| (self.col(m) + offset, c.clone())).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    pub fn poly(&self, table: &Arc<VarTable>, v: &[(u32, Coefficient)], offset: u32) -> GradedPoly {
        let terms = v
            .iter()
            .filter(|(c, _)| *c >= offset && ((*c - offset) as usize) < self.len())
            .map(|(c, x)| (self.monomials[(c - offset) as usize].clone(), x.clone()))
            .collect();
        // columns are in descending monomial order
        GradedPoly::from_sorted_terms(table, terms)
    }
}

/// The degree-d piece of a homogeneous ideal as an echelonized lattice.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    pub basis: Basis,
    pub echelon: Echelon,
    /// Row id -> (generator index, multiplier monomial).
    pub origins: Vec<(usize, Monomial)>,
}

impl DegreeSlice {
    pub fn degree(&self) -> u32 {
        self.basis.degree
    }

    pub fn contains(&self, p: &GradedPoly) -> bool {
        self.echelon.contains(&self.basis.vector(p, 0))
    }
}

/// A homogeneous ideal given by generators, with a per-degree slice cache.
#[derive(Debug)]
pub struct Ideal {
    table: Arc<VarTable>,
    gens: Vec<GradedPoly>,
    degrees: Vec<u32>,
    cache: Mutex<HashMap<(u32, bool), Arc<DegreeSlice>>>,
    bases: Mutex<HashMap<u32, Arc<Basis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal::new_unchecked(self.table.clone(), self.gens.clone(), self.degrees.clone())
    }
}

impl Ideal {
    pub fn new(table: &Arc<VarTable>, gens: &[GradedPoly]) -> Result<Ideal> {
        let mut keep = Vec::new();
        let mut degrees = Vec::new();
        for g in gens {
            if **g.table() != **table {
                return Err(Error::TableMismatch);
            }
            if g.is_zero() {
                continue;
            }
            degrees.push(g.homogeneous_degree()?);
            keep.push(g.clone());
        }
        Ok(Ideal::new_unchecked(table.clone(), keep, degrees))
    }

    fn new_unchecked(table: Arc<VarTable>, gens: Vec<GradedPoly>, degrees: Vec<u32>) -> Ideal {
        Ideal { table, gens, degrees, cache: Mutex::new(HashMap::new()), bases: Mutex::new(HashMap::new()) }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn gens(&self) -> &[GradedPoly] {
        &self.gens
    }

    pub fn basis(&self, d: u32) -> Arc<Basis> {
        if let Some(b) = self.bases.lock().unwrap().get(&d) {
            return b.clone();
        }
        let b = Arc::new(Basis::new(&self.table, d));
        self.bases.lock().unwrap().entry(d).or_insert(b).clone()
    }

    /// Degree-d slice; `track` records provenance for cofactor extraction.
    pub fn slice(&self, d: u32, track: bool) -> Arc<DegreeSlice> {
        if let Some(s) = self.cache.lock().unwrap().get(&(d, track)) {
            return s.clone();
        }
        let s = Arc::new(self.build_slice(d, track));
        self.cache.lock().unwrap().entry((d, track)).or_insert(s).clone()
    }

    fn build_slice(&self, d: u32, track: bool) -> DegreeSlice {
        let basis = (*self.basis(d)).clone();
        let mut origins = Vec::new();
        let mut rows: Vec<SparseVec> = Vec::new();
        for (gi, g) in self.gens.iter().enumerate() {
            let e = self.degrees[gi];
            if e > d {
                continue;
            }
            let mults = self.basis(d - e);
            let built: Vec<SparseVec> = mults
                .monomials
                .par_iter()
                .map(|m| basis.vector(&g.mul_monomial(m, &Coefficient::one()), 0))
                .collect();
            for (m, r) in mults.monomials.iter().zip(built) {
                origins.push((gi, m.clone()));
                rows.push(r);
            }
        }
        let mut order: Vec<usize> = (0..rows.len()).collect();
        // sparse rows with early leading columns first keeps fill-in low
        order.sort_by_key(|&i| (rows[i].first().map(|e| e.0).unwrap_or(u32::MAX), rows[i].len()));
        let ordered: Vec<(u32, SparseVec)> = order.into_iter().map(|i| (i as u32, std::mem::take(&mut rows[i]))).collect();
        let echelon = lattice_echelon(basis.len(), ordered, track);
        DegreeSlice { basis, echelon, origins }
    }

    /// Cofactors (one per generator) from a provenance combination.
    pub fn cofactors(&self, slice: &DegreeSlice, combo: &SparseVec) -> Vec<GradedPoly> {
        let mut terms: Vec<Vec<(Monomial, Coefficient)>> = vec![Vec::new(); self.gens.len()];
        for (id, c) in combo {
            let (gi, m) = &slice.origins[*id as usize];
            terms[*gi].push((m.clone(), c.clone()));
        }
        terms.into_iter().map(|t| GradedPoly::from_terms(&self.table, t)).collect()
    }
}

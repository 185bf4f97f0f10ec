//! Weighted-graded polynomials over Z[1/6], presentations and ring maps.
//!
//! Terms are kept sorted by the canonical monomial order: weighted degree
//! first, then reverse lexicographic in table position. The leading term is
//! stored first.

mod json;
mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exactnum::Coefficient;

pub use json::{PolyJson, PresentationJson, TermJson, VarJson};

#[derive(Debug)]
pub struct VarTable {
    names: Vec<String>,
    degrees: Vec<u32>,
    index: HashMap<String, usize>,
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.degrees == other.degrees
    }
}

impl Eq for VarTable {}

impl VarTable {
    pub fn new<S: AsRef<str>>(vars: &[(S, u32)]) -> Result<Arc<VarTable>> {
        let mut index = HashMap::new();
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (i, (name, d)) in vars.iter().enumerate() {
            let name = name.as_ref().to_string();
            if *d == 0 {
                return Err(Error::Invalid(format!("variable {name} must have positive degree")));
            }
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Invalid(format!("bad variable name {name:?}")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate variable {name}")));
            }
            names.push(name);
            degrees.push(*d);
        }
        Ok(Arc::new(VarTable { names, degrees, index }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Table with `extra` appended.
    pub fn extended<S: AsRef<str>>(&self, extra: &[(S, u32)]) -> Result<Arc<VarTable>> {
        let mut vars: Vec<(String, u32)> =
            self.names.iter().cloned().zip(self.degrees.iter().copied()).collect();
        vars.extend(extra.iter().map(|(n, d)| (n.as_ref().to_string(), *d)));
        VarTable::new(&vars)
    }

    /// All monomials of weighted degree `d`, in descending canonical order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let n = self.len();
        let mut out = Vec::new();
        let mut cur: Exps = SmallVec::from_elem(0, n);
        fn rec(t: &VarTable, i: usize, left: u32, cur: &mut Exps, out: &mut Vec<Monomial>) {
            if i == t.len() {
                if left == 0 {
                    out.push(Monomial(cur.clone()));
                }
                return;
            }
            let w = t.degrees[i];
            let mut e = 0u32;
            while e * w <= left {
                cur[i] = e as u16;
                rec(t, i + 1, left - e * w, cur, out);
                e += 1;
            }
            cur[i] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(Monomial(SmallVec::new()));
            }
            return out;
        }
        rec(self, 0, d, &mut cur, &mut out);
        out.sort_by(|a, b| mono_cmp(b, a, self));
        out
    }
}

pub type Exps = SmallVec<[u16; 8]>;

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial(pub Exps);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(n);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self, t: &VarTable) -> u32 {
        self.0.iter().zip(&t.degrees).map(|(&e, &w)| e as u32 * w).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn fmt_with(&self, t: &VarTable) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(t.names[i].clone()),
                _ => parts.push(format!("{}^{}", t.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Canonical monomial order: weighted degree, then reverse lexicographic.
pub fn mono_cmp(a: &Monomial, b: &Monomial, t: &VarTable) -> Ordering {
    let da = a.degree(t);
    let db = b.degree(t);
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.0.len()).rev() {
        if a.0[i] != b.0[i] {
            return b.0[i].cmp(&a.0[i]);
        }
    }
    Ordering::Equal
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedDegree {
    Zero,
    Homogeneous(u32),
    Inhomogeneous { max: u32 },
}

#[derive(Clone, Debug)]
pub struct GradedPoly {
    table: Arc<VarTable>,
    terms: Vec<(Monomial, Coefficient)>,
}

impl PartialEq for GradedPoly {
    fn eq(&self, o: &Self) -> bool {
        *self.table == *o.table && self.terms == o.terms
    }
}

impl Eq for GradedPoly {}

impl GradedPoly {
    pub fn zero(table: &Arc<VarTable>) -> GradedPoly {
        GradedPoly { table: table.clone(), terms: Vec::new() }
    }

    pub fn constant(table: &Arc<VarTable>, c: Coefficient) -> GradedPoly {
        GradedPoly::from_terms(table, vec![(Monomial::one(table.len()), c)])
    }

    pub fn one(table: &Arc<VarTable>) -> GradedPoly {
        GradedPoly::constant(table, Coefficient::one())
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<GradedPoly> {
        let i = table.position(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(GradedPoly::monomial(table, Monomial::var(table.len(), i), Coefficient::one()))
    }

    pub fn monomial(table: &Arc<VarTable>, m: Monomial, c: Coefficient) -> GradedPoly {
        GradedPoly::from_terms(table, vec![(m, c)])
    }

    /// Canonicalizes: merges duplicates, drops zeros, sorts.
    pub fn from_terms(table: &Arc<VarTable>, terms: Vec<(Monomial, Coefficient)>) -> GradedPoly {
        let mut acc: HashMap<Monomial, Coefficient> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            assert_eq!(m.0.len(), table.len(), "monomial length does not match table");
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => *v += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| mono_cmp(&b.0, &a.0, table));
        GradedPoly { table: table.clone(), terms }
    }

    /// Builds from terms already sorted descending with distinct monomials and
    /// nonzero coefficients.
    pub(crate) fn from_sorted_terms(table: &Arc<VarTable>, terms: Vec<(Monomial, Coefficient)>) -> GradedPoly {
        debug_assert!(terms.windows(2).all(|w| mono_cmp(&w[0].0, &w[1].0, table) == Ordering::Greater));
        GradedPoly { table: table.clone(), terms }
    }

    pub fn parse(table: &Arc<VarTable>, s: &str) -> Result<GradedPoly> {
        parse::parse_poly(table, s)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn terms(&self) -> &[(Monomial, Coefficient)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Coefficient)> {
        self.terms.first()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Coefficient {
        self.terms.iter().find(|(x, _)| x == m).map(|(_, c)| c.clone()).unwrap_or_else(Coefficient::zero)
    }

    pub fn weighted_degree(&self) -> WeightedDegree {
        let mut degs = self.terms.iter().map(|(m, _)| m.degree(&self.table));
        let Some(first) = degs.next() else {
            return WeightedDegree::Zero;
        };
        let mut max = first;
        let mut homogeneous = true;
        for d in degs {
            if d != first {
                homogeneous = false;
            }
            max = max.max(d);
        }
        if homogeneous {
            WeightedDegree::Homogeneous(first)
        } else {
            WeightedDegree::Inhomogeneous { max }
        }
    }

    /// Degree of a homogeneous polynomial; zero counts as degree 0.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        match self.weighted_degree() {
            WeightedDegree::Zero => Ok(0),
            WeightedDegree::Homogeneous(d) => Ok(d),
            WeightedDegree::Inhomogeneous { .. } => Err(Error::Inhomogeneous(self.to_string())),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.weighted_degree(), WeightedDegree::Inhomogeneous { .. })
    }

    pub fn component(&self, d: u32) -> GradedPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.degree(&self.table) == d).cloned().collect();
        GradedPoly { table: self.table.clone(), terms }
    }

    fn check_table(&self, o: &GradedPoly) {
        assert!(
            Arc::ptr_eq(&self.table, &o.table) || *self.table == *o.table,
            "polynomials on different variable tables"
        );
    }

    pub fn add(&self, o: &GradedPoly) -> GradedPoly {
        self.check_table(o);
        let t = &self.table;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match mono_cmp(&self.terms[i].0, &o.terms[j].0, t) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &o.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        GradedPoly { table: t.clone(), terms: out }
    }

    pub fn neg(&self) -> GradedPoly {
        GradedPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &GradedPoly) -> GradedPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Coefficient) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero(&self.table);
        }
        GradedPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coefficient) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero(&self.table);
        }
        // multiplying by a monomial preserves the order
        GradedPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(x, y)| (x.mul(m), y * c)).collect(),
        }
    }

    pub fn mul(&self, o: &GradedPoly) -> GradedPoly {
        self.check_table(o);
        if self.is_zero() || o.is_zero() {
            return GradedPoly::zero(&self.table);
        }
        let mut acc: HashMap<Monomial, Coefficient> = HashMap::with_capacity(self.len() * o.len());
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let m = a.mul(b);
                let c = x * y;
                match acc.get_mut(&m) {
                    Some(v) => *v += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| mono_cmp(&b.0, &a.0, &self.table));
        GradedPoly { table: self.table.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        let mut out = GradedPoly::one(&self.table);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Re-expresses on another table by variable name. Every variable that
    /// occurs must exist in `table`.
    pub fn embed(&self, table: &Arc<VarTable>) -> Result<GradedPoly> {
        let mut pos = Vec::with_capacity(self.table.len());
        for (i, name) in self.table.names.iter().enumerate() {
            match table.position(name) {
                Some(j) => {
                    if table.degree(j) != self.table.degree(i) {
                        return Err(Error::Invalid(format!("variable {name} changes degree")));
                    }
                    pos.push(Some(j));
                }
                None => pos.push(None),
            }
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = Monomial::one(table.len());
            for (i, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match pos[i] {
                    Some(j) => e.0[j] = x,
                    None => return Err(Error::UnknownVariable(self.table.names[i].clone())),
                }
            }
            terms.push((e, c.clone()));
        }
        Ok(GradedPoly::from_terms(table, terms))
    }

    /// True if no term involves variable `i`.
    pub fn free_of(&self, i: usize) -> bool {
        self.terms.iter().all(|(m, _)| m.0[i] == 0)
    }

    /// Sets the listed variables to zero.
    pub fn kill(&self, vars: &[usize]) -> GradedPoly {
        let terms = self.terms.iter().filter(|(m, _)| vars.iter().all(|&i| m.0[i] == 0)).cloned().collect();
        GradedPoly { table: self.table.clone(), terms }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`
    /// over Z[1/6].
    pub fn div_exact(&self, d: &GradedPoly) -> Option<GradedPoly> {
        self.check_table(d);
        let (lm, lc) = d.leading()?;
        let mut rest = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rest.leading().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let q = c.checked_div(lc)?;
            let qm = m.div(lm);
            rest = rest.sub(&d.mul_monomial(&qm, &q));
            quot.push((qm, q));
        }
        Some(GradedPoly::from_sorted_terms(&self.table, quot))
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", m.fmt_with(&self.table))?;
            } else {
                write!(f, "{a}*{}", m.fmt_with(&self.table))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    pub table: Arc<VarTable>,
    pub relations: Vec<GradedPoly>,
}

impl RingPresentation {
    pub fn new(table: Arc<VarTable>, relations: Vec<GradedPoly>) -> Result<RingPresentation> {
        for r in &relations {
            if **r.table() != *table {
                return Err(Error::TableMismatch);
            }
            match r.weighted_degree() {
                WeightedDegree::Homogeneous(d) if d > 0 => {}
                WeightedDegree::Zero => {}
                _ => return Err(Error::Inhomogeneous(r.to_string())),
            }
        }
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(RingPresentation { table, relations })
    }

    pub fn free(table: Arc<VarTable>) -> RingPresentation {
        RingPresentation { table, relations: Vec::new() }
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations.iter().filter_map(|r| r.homogeneous_degree().ok()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct RingMap {
    pub source: RingPresentation,
    pub target: RingPresentation,
    pub images: Vec<GradedPoly>,
}

impl RingMap {
    pub fn new(source: RingPresentation, target: RingPresentation, images: Vec<GradedPoly>) -> Result<RingMap> {
        if images.len() != source.table.len() {
            return Err(Error::Invalid(format!(
                "ring map needs {} images, got {}",
                source.table.len(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if **img.table() != *target.table {
                return Err(Error::TableMismatch);
            }
            let d = source.table.degree(i);
            match img.weighted_degree() {
                WeightedDegree::Zero => {}
                WeightedDegree::Homogeneous(e) if e == d => {}
                _ => {
                    return Err(Error::Invalid(format!(
                        "image of {} must be homogeneous of degree {d}: {img}",
                        source.table.name(i)
                    )))
                }
            }
        }
        Ok(RingMap { source, target, images })
    }

    /// Builds a map from `name -> expression` pairs parsed on the target table.
    /// Source variables not listed map to themselves (by name) on the target.
    pub fn from_exprs(source: RingPresentation, target: RingPresentation, exprs: &[(&str, &str)]) -> Result<RingMap> {
        let mut images = Vec::with_capacity(source.table.len());
        for name in source.table.names() {
            let img = match exprs.iter().find(|(n, _)| n == name) {
                Some((_, e)) => GradedPoly::parse(&target.table, e)?,
                None => GradedPoly::var(&target.table, name)?,
            };
            images.push(img);
        }
        for (n, _) in exprs {
            if source.table.position(n).is_none() {
                return Err(Error::UnknownVariable(n.to_string()));
            }
        }
        RingMap::new(source, target, images)
    }

    pub fn identity(p: &RingPresentation) -> RingMap {
        let images = p.table.names().iter().map(|n| GradedPoly::var(&p.table, n).unwrap()).collect();
        RingMap { source: p.clone(), target: p.clone(), images }
    }

    pub fn apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        substitute(p, self)
    }

    pub fn image_of(&self, name: &str) -> Option<&GradedPoly> {
        self.source.table.position(name).map(|i| &self.images[i])
    }
}

/// Image of `p` under the homomorphism given by generator images.
pub fn substitute(p: &GradedPoly, m: &RingMap) -> Result<GradedPoly> {
    substitute_images(p, &m.source.table, &m.target.table, &m.images)
}

pub fn substitute_images(
    p: &GradedPoly,
    source: &Arc<VarTable>,
    target: &Arc<VarTable>,
    images: &[GradedPoly],
) -> Result<GradedPoly> {
    let p = if Arc::ptr_eq(p.table(), source) || **p.table() == **source {
        p.clone()
    } else {
        p.embed(source)?
    };
    let mut powers: Vec<Vec<GradedPoly>> = vec![vec![GradedPoly::one(target)]; images.len()];
    let mut out: Vec<(Monomial, Coefficient)> = Vec::new();
    for (m, c) in p.terms() {
        let mut acc = GradedPoly::constant(target, c.clone());
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().mul(&images[i]);
                powers[i].push(next);
            }
            acc = acc.mul(&powers[i][e as usize]);
        }
        out.extend(acc.terms);
    }
    Ok(GradedPoly::from_terms(target, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(v: &[(&str, u32)]) -> Arc<VarTable> {
        VarTable::new(v).unwrap()
    }

    #[test]
    fn degrees() {
        let t = tab(&[("l1", 1), ("H", 1), ("d111", 3), ("l2", 2)]);
        let p = GradedPoly::parse(&t, "l1^3*H").unwrap();
        assert_eq!(p.weighted_degree(), WeightedDegree::Homogeneous(4));
        let p = GradedPoly::parse(&t, "d111^2").unwrap();
        assert_eq!(p.weighted_degree(), WeightedDegree::Homogeneous(6));
        let p = GradedPoly::parse(&t, "l1 + l2").unwrap();
        assert_eq!(p.weighted_degree(), WeightedDegree::Inhomogeneous { max: 2 });
    }

    #[test]
    fn order_is_degree_then_revlex() {
        let t = tab(&[("x", 1), ("y", 1), ("z", 1)]);
        let p = GradedPoly::parse(&t, "z^2 + x*z + y^2 + x*y + x^2 + y*z + x").unwrap();
        assert_eq!(p.to_string(), "x^2 + x*y + y^2 + x*z + y*z + z^2 + x");
        let ms = t.monomials_of_degree(2);
        let strs: Vec<_> = ms.iter().map(|m| m.fmt_with(&t)).collect();
        assert_eq!(strs, ["x^2", "x*y", "y^2", "x*z", "y*z", "z^2"]);
    }

    #[test]
    fn hyperelliptic_substitutions() {
        let src = tab(&[("s", 1), ("c1", 1), ("c2", 2)]);
        let dst = tab(&[("l1", 1), ("l2", 2), ("xi1", 1)]);
        let m = RingMap::from_exprs(
            RingPresentation::free(src.clone()),
            RingPresentation::free(dst.clone()),
            &[("s", "-(xi1+l1)/3"), ("c1", "-xi1"), ("c2", "l2 - (l1^2 - xi1^2)/3")],
        )
        .unwrap();
        let d1 = GradedPoly::parse(&src, "2*s*c1*(c1-4*s)").unwrap();
        let want = GradedPoly::parse(&dst, "2*xi1*(l1+xi1)*(4*l1+xi1)/9").unwrap();
        assert_eq!(m.apply(&d1).unwrap(), want);
        let d2 = GradedPoly::parse(&src, "2*s*c1*(4*s^2-2*s*c1+c2)").unwrap();
        let want = GradedPoly::parse(&dst, "2*xi1*(xi1+l1)*(9*l2+(xi1+l1)^2)/27").unwrap();
        assert_eq!(m.apply(&d2).unwrap(), want);
        let id = RingMap::identity(&RingPresentation::free(src.clone()));
        assert_eq!(id.apply(&d2).unwrap(), d2);
    }

    #[test]
    fn unknown_variable_rejected() {
        let t = tab(&[("x", 1)]);
        assert!(matches!(GradedPoly::parse(&t, "x*y"), Err(Error::UnknownVariable(_))));
        let src = tab(&[("x", 1), ("y", 1)]);
        let p = GradedPoly::parse(&src, "y").unwrap();
        assert!(p.embed(&t).is_err());
    }

    #[test]
    fn display_round_trips() {
        let t = tab(&[("a", 1), ("b", 2)]);
        let p = GradedPoly::parse(&t, "-1/8*a^4 + 3*a^2*b - b^2/6 + 5").unwrap();
        let q = GradedPoly::parse(&t, &p.to_string()).unwrap();
        assert_eq!(p, q);
    }
}

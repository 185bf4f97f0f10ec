//! Torus-equivariant classes: character classes, fixed-point localization on
//! projective spaces of representations, interpolation of classes from their
//! fixed-point restrictions, and finite-group invariants.
//!
//! Conventions: on `P(V)` with coordinate weights `w_i`, the hyperplane class
//! restricts to `-w_i` at the i-th coordinate point and the tangent Euler class
//! there is `∏_{j≠i}(w_j - w_i)`.

use std::collections::HashSet;
use std::sync::Arc;

use crate::cherncalc::symmetric_reduce;
use crate::error::{Error, Result};
use crate::exactnum::Coefficient;
use crate::gradedring::{substitute_images, GradedPoly, Monomial, VarTable, WeightedDegree};
use crate::idealengine::echelon::Echelon;
use crate::idealengine::{Basis, Ideal};
use crate::idealengine::contains;

/// Linear form in character variables.
pub type TorusWeight = GradedPoly;

fn check_linear(w: &GradedPoly, what: &str) -> Result<()> {
    match w.weighted_degree() {
        WeightedDegree::Zero | WeightedDegree::Homogeneous(1) => Ok(()),
        _ => Err(Error::Invalid(format!("{what} must be linear: {w}"))),
    }
}

/// `∏ (w_i + twist)`: the class of the linear locus cut out by coordinates
/// of the given weights.
pub fn character_class(table: &Arc<VarTable>, weights: &[TorusWeight], twist: &GradedPoly) -> Result<GradedPoly> {
    check_linear(twist, "twist")?;
    let twist = twist.embed(table)?;
    let mut out = GradedPoly::one(table);
    for w in weights {
        check_linear(w, "weight")?;
        out = out.mul(&w.embed(table)?.add(&twist));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    pub weights: Vec<TorusWeight>,
    pub hyperplane: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoint {
    pub index: usize,
    /// Restriction of the hyperplane class.
    pub h: GradedPoly,
    pub euler: GradedPoly,
}

impl ProjectiveRep {
    pub fn new(weights: Vec<TorusWeight>, hyperplane: &str) -> Result<ProjectiveRep> {
        if weights.is_empty() {
            return Err(Error::Invalid("representation of dimension 0".into()));
        }
        for w in &weights {
            check_linear(w, "weight")?;
            if **w.table() != **weights[0].table() {
                return Err(Error::TableMismatch);
            }
        }
        Ok(ProjectiveRep { weights, hyperplane: hyperplane.to_string() })
    }

    pub fn table(&self) -> &Arc<VarTable> {
        self.weights[0].table()
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    fn check_distinct(&self) -> Result<()> {
        let mut seen: Vec<&GradedPoly> = Vec::new();
        for (i, w) in self.weights.iter().enumerate() {
            if let Some(j) = seen.iter().position(|x| *x == w) {
                return Err(Error::Localization(format!("weights {j} and {i} coincide ({w}); fixed points not isolated")));
            }
            seen.push(w);
        }
        Ok(())
    }

    /// Hyperplane restrictions `-w_i`, in coordinate order.
    pub fn nodes(&self) -> Vec<GradedPoly> {
        self.weights.iter().map(|w| w.neg()).collect()
    }

    pub fn tangent_weights(&self, i: usize) -> Vec<GradedPoly> {
        let wi = &self.weights[i];
        self.weights.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, w)| w.sub(wi)).collect()
    }

    pub fn fixed_points(&self) -> Result<Vec<FixedPoint>> {
        self.check_distinct()?;
        let t = self.table();
        Ok((0..self.weights.len())
            .map(|i| {
                let euler = self.tangent_weights(i).iter().fold(GradedPoly::one(t), |acc, x| acc.mul(x));
                FixedPoint { index: i, h: self.weights[i].neg(), euler }
            })
            .collect())
    }
}

/// Newton divided-difference coefficients; every division must be exact.
fn divided_differences(nodes: &[GradedPoly], values: &[GradedPoly]) -> Result<Vec<GradedPoly>> {
    let mut c = values.to_vec();
    for j in 1..nodes.len() {
        for i in (j..nodes.len()).rev() {
            let num = c[i].sub(&c[i - 1]);
            let den = nodes[i].sub(&nodes[i - j]);
            c[i] = num.div_exact(&den).ok_or_else(|| {
                Error::Localization(format!("divided difference not polynomial at nodes {} and {}", i - j, i))
            })?;
        }
    }
    Ok(c)
}

/// `Σ_i v_i / e_i` over the fixed points. Fails unless the denominators
/// cancel.
pub fn localized_integral(rep: &ProjectiveRep, values: &[GradedPoly]) -> Result<GradedPoly> {
    if values.len() != rep.weights.len() {
        return Err(Error::Invalid("one value per fixed point required".into()));
    }
    rep.check_distinct()?;
    let t = rep.table();
    let values: Vec<GradedPoly> = values.iter().map(|v| v.embed(t)).collect::<Result<_>>()?;
    // e_i = ∏_{j≠i}(h_i - h_j), so the sum is the top divided difference
    Ok(divided_differences(&rep.nodes(), &values)?.pop().unwrap())
}

/// Equivariant map on fixed points: source point `i` goes to target point
/// `images[i]`; hyperplane classes pull back to `degree` times the source's.
#[derive(Clone, Debug)]
pub struct FixedPointMap {
    pub images: Vec<usize>,
    pub degree: u32,
}

/// `(f_* 1)|_q = Σ_{f(x) = q} e(T_q) / e(T_x)` at every target fixed point.
pub fn localize_pushforward(source: &ProjectiveRep, target: &ProjectiveRep, f: &FixedPointMap) -> Result<Vec<GradedPoly>> {
    source.check_distinct()?;
    target.check_distinct()?;
    let t = target.table();
    if f.images.len() != source.weights.len() {
        return Err(Error::Invalid("one image per source fixed point required".into()));
    }
    let k = Coefficient::from_int(f.degree);
    let mut shift: Option<GradedPoly> = None;
    for (i, &q) in f.images.iter().enumerate() {
        if q >= target.weights.len() {
            return Err(Error::Localization(format!("source point {i} does not map to a fixed point")));
        }
        let s = target.weights[q].sub(&source.weights[i].embed(t)?.scale(&k));
        match &shift {
            None => shift = Some(s),
            Some(x) if *x == s => {}
            Some(_) => return Err(Error::Localization(format!("map is not equivariant at source point {i}"))),
        }
    }
    let mut out = vec![GradedPoly::zero(t); target.weights.len()];
    for (x, &q) in f.images.iter().enumerate() {
        let mut num = target.tangent_weights(q);
        let mut unit = Coefficient::one();
        let mut rest_den = Vec::new();
        for d in source.tangent_weights(x) {
            let d = d.embed(t)?;
            let hit = num.iter().position(|n| {
                n.div_exact(&d).is_some_and(|c| c.terms().len() == 1 && c.terms()[0].0.is_one() && c.terms()[0].1.is_unit())
            });
            match hit {
                Some(j) => {
                    let n = num.swap_remove(j);
                    unit = &unit * &n.div_exact(&d).unwrap().terms()[0].1;
                }
                None => rest_den.push(d),
            }
        }
        let mut term = num.iter().fold(GradedPoly::constant(t, unit), |acc, n| acc.mul(n));
        for d in rest_den {
            term = term
                .div_exact(&d)
                .ok_or_else(|| Error::Localization(format!("Euler class quotient not polynomial at source point {x}")))?;
        }
        out[q] = out[q].add(&term);
    }
    Ok(out)
}

/// Interpolates a class on `∏ P(V_k)` from its restrictions at the fixed
/// points. `values` is indexed row-major by the fixed-point multi-index.
/// The result lives on `out`, which must contain every weight variable and
/// every hyperplane symbol; its degree in the k-th hyperplane class is below
/// `dim V_k`. Exactness is re-checked at every fixed point.
pub fn interpolate_class(factors: &[ProjectiveRep], values: &[GradedPoly], out: &Arc<VarTable>) -> Result<GradedPoly> {
    let sizes: Vec<usize> = factors.iter().map(|f| f.weights.len()).collect();
    let total: usize = sizes.iter().product();
    if values.len() != total {
        return Err(Error::Invalid(format!("expected {total} fixed-point values, got {}", values.len())));
    }
    let mut hs = Vec::new();
    let mut nodes = Vec::new();
    for f in factors {
        f.check_distinct()?;
        hs.push(GradedPoly::var(out, &f.hyperplane)?);
        nodes.push(f.nodes().iter().map(|n| n.embed(out)).collect::<Result<Vec<_>>>()?);
    }
    let mut cur: Vec<GradedPoly> = values.iter().map(|v| v.embed(out)).collect::<Result<_>>()?;
    // collapse the last axis first; cur stays row-major over the remaining axes
    for k in (0..factors.len()).rev() {
        let n = sizes[k];
        let mut next = Vec::with_capacity(cur.len() / n);
        for chunk in cur.chunks(n) {
            let c = divided_differences(&nodes[k], chunk)?;
            // Horner on the Newton form
            let mut p = c[n - 1].clone();
            for j in (0..n - 1).rev() {
                p = p.mul(&hs[k].sub(&nodes[k][j])).add(&c[j]);
            }
            next.push(p);
        }
        cur = next;
    }
    let p = cur.pop().unwrap();
    for (idx, v) in values.iter().enumerate() {
        let mut images: Vec<GradedPoly> = out.names().iter().map(|n| GradedPoly::var(out, n).unwrap()).collect();
        let mut r = idx;
        for k in (0..factors.len()).rev() {
            let i = r % sizes[k];
            r /= sizes[k];
            images[out.position(&factors[k].hyperplane).unwrap()] = nodes[k][i].clone();
        }
        if substitute_images(&p, out, out, &images)? != v.embed(out)? {
            return Err(Error::Localization(format!("interpolant misses fixed point {idx}")));
        }
    }
    Ok(p)
}

/// Rewrites a polynomial symmetric in `roots` through their elementary
/// symmetric functions, `e_i ↦ classes[i]`, landing on `out`.
pub fn to_elementary(p: &GradedPoly, roots: &[&str], classes: &[GradedPoly], out: &Arc<VarTable>) -> Result<GradedPoly> {
    let extra: Vec<(String, u32)> = out
        .names()
        .iter()
        .zip(out.degrees())
        .filter(|(n, _)| p.table().position(n).is_none())
        .map(|(n, d)| (n.clone(), *d))
        .collect();
    let t = p.table().extended(&extra)?;
    let idx: Vec<usize> = roots
        .iter()
        .map(|r| t.position(r).ok_or_else(|| Error::UnknownVariable(r.to_string())))
        .collect::<Result<_>>()?;
    if classes.len() != idx.len() {
        return Err(Error::Invalid("one class per root required".into()));
    }
    let classes: Vec<GradedPoly> = classes.iter().map(|c| c.embed(&t)).collect::<Result<_>>()?;
    let r = symmetric_reduce(&p.embed(&t)?, &idx, &classes)?;
    r.embed(out).map_err(|_| Error::NotSymmetric(format!("roots survive in {r}")))
}

/// Finite group acting on the variables of a table by signed permutations.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub table: Arc<VarTable>,
    /// Each element sends variable `i` to `sign · var[perm[i]]`.
    pub elements: Vec<Vec<(usize, i8)>>,
}

fn compose(a: &[(usize, i8)], b: &[(usize, i8)]) -> Vec<(usize, i8)> {
    // (a∘b)(x_i) = a(sign_b · x_{b(i)})
    b.iter().map(|&(j, s)| (a[j].0, s * a[j].1)).collect()
}

impl GroupAction {
    /// The group generated by the given signed permutations.
    pub fn generated(table: &Arc<VarTable>, gens: &[Vec<(usize, i8)>]) -> Result<GroupAction> {
        let n = table.len();
        let id: Vec<(usize, i8)> = (0..n).map(|i| (i, 1)).collect();
        for g in gens {
            if g.len() != n || g.iter().map(|x| x.0).collect::<HashSet<_>>().len() != n {
                return Err(Error::Invalid("not a permutation of the variables".into()));
            }
            if g.iter().enumerate().any(|(i, &(j, s))| table.degree(i) != table.degree(j) || s.abs() != 1) {
                return Err(Error::Invalid("action must preserve degrees and use signs ±1".into()));
            }
        }
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let h = compose(g, &elements[i]);
                if !elements.contains(&h) {
                    elements.push(h);
                }
            }
            i += 1;
        }
        let mut order = elements.len();
        while order % 2 == 0 {
            order /= 2;
        }
        while order % 3 == 0 {
            order /= 3;
        }
        if order != 1 {
            return Err(Error::Invalid(format!("group order {} not invertible", elements.len())));
        }
        Ok(GroupAction { table: table.clone(), elements })
    }

    /// Swap of two variables.
    pub fn swap(table: &Arc<VarTable>, a: &str, b: &str) -> Result<GroupAction> {
        let (i, j) = (pos(table, a)?, pos(table, b)?);
        let mut g: Vec<(usize, i8)> = (0..table.len()).map(|k| (k, 1)).collect();
        g[i] = (j, 1);
        g[j] = (i, 1);
        GroupAction::generated(table, &[g])
    }

    /// Full symmetric group on the named variables.
    pub fn symmetric(table: &Arc<VarTable>, names: &[&str]) -> Result<GroupAction> {
        let idx: Vec<usize> = names.iter().map(|n| pos(table, n)).collect::<Result<_>>()?;
        let mut gens = Vec::new();
        for w in idx.windows(2) {
            let mut g: Vec<(usize, i8)> = (0..table.len()).map(|k| (k, 1)).collect();
            g[w[0]] = (w[1], 1);
            g[w[1]] = (w[0], 1);
            gens.push(g);
        }
        GroupAction::generated(table, &gens)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn act(&self, g: usize, p: &GradedPoly) -> Result<GradedPoly> {
        let t = &self.table;
        let images: Vec<GradedPoly> = self.elements[g]
            .iter()
            .map(|&(j, s)| {
                let v = GradedPoly::monomial(t, Monomial::var(t.len(), j), Coefficient::one());
                if s < 0 {
                    v.neg()
                } else {
                    v
                }
            })
            .collect();
        substitute_images(p, t, t, &images)
    }

    pub fn is_invariant(&self, p: &GradedPoly) -> Result<bool> {
        for g in 0..self.order() {
            if self.act(g, p)? != p.embed(&self.table)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn pos(t: &VarTable, n: &str) -> Result<usize> {
    t.position(n).ok_or_else(|| Error::UnknownVariable(n.to_string()))
}

/// `(1/|G|) Σ_g g·p`.
pub fn reynolds(p: &GradedPoly, g: &GroupAction) -> Result<GradedPoly> {
    let mut s = GradedPoly::zero(&g.table);
    for k in 0..g.order() {
        s = s.add(&g.act(k, p)?);
    }
    let inv = Coefficient::from_int(g.order() as i64).inverse().expect("order invertible");
    Ok(s.scale(&inv))
}

/// Certifies that `claimed` generates `I ∩ R^G` as an ideal of `R^G`, in
/// every degree up to `degree_bound`. Since `|G|` is invertible, an invariant
/// element of `R·claimed` already lies in `R^G·claimed`.
pub fn invariant_ideal_generators_check(
    i_gens: &[GradedPoly],
    claimed: &[GradedPoly],
    g: &GroupAction,
    degree_bound: u32,
) -> Result<bool> {
    let t = &g.table;
    let i_gens: Vec<GradedPoly> = i_gens.iter().map(|x| x.embed(t)).collect::<Result<_>>()?;
    let claimed: Vec<GradedPoly> = claimed.iter().map(|x| x.embed(t)).collect::<Result<_>>()?;
    for c in &claimed {
        if !g.is_invariant(c)? {
            return Err(Error::NotInvariant(format!("claimed generator {c}")));
        }
    }
    let ideal = Ideal::new(t, &i_gens)?;
    for x in &i_gens {
        for k in 0..g.order() {
            if !contains(&ideal, &g.act(k, x)?)? {
                return Err(Error::NotInvariant(format!("ideal is not stable: image of {x}")));
            }
        }
    }
    for c in &claimed {
        if !contains(&ideal, c)? {
            return Ok(false);
        }
    }
    let inv_ideal = Ideal::new(t, &claimed)?;
    for d in 1..=degree_bound {
        let slice = ideal.slice(d, false);
        for row in slice.echelon.rows() {
            let p = slice.basis.poly(t, &row.entries, 0);
            if !contains(&inv_ideal, &reynolds(&p, g)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Certifies that `gens` generate the invariant subring `R^G` as a
/// Z[1/6]-algebra in every degree up to `degree_bound`.
pub fn invariant_subring_check(gens: &[GradedPoly], g: &GroupAction, degree_bound: u32) -> Result<bool> {
    let t = &g.table;
    let gens: Vec<GradedPoly> = gens.iter().map(|x| x.embed(t)).collect::<Result<_>>()?;
    let mut names = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        if !g.is_invariant(x)? {
            return Err(Error::NotInvariant(format!("claimed generator {x}")));
        }
        match x.weighted_degree() {
            WeightedDegree::Homogeneous(d) if d > 0 => names.push((format!("g{i}"), d)),
            _ => return Err(Error::Invalid(format!("generator must be homogeneous of positive degree: {x}"))),
        }
    }
    let gt = VarTable::new(&names)?;
    for d in 1..=degree_bound {
        let basis = Basis::new(t, d);
        let mut ech = Echelon::new(basis.len(), false);
        for (k, m) in gt.monomials_of_degree(d).into_iter().enumerate() {
            let p = substitute_images(&GradedPoly::monomial(&gt, m, Coefficient::one()), &gt, t, &gens)?;
            ech.insert(basis.vector(&p, 0), k as u32);
        }
        for m in &basis.monomials {
            let r = reynolds(&GradedPoly::monomial(t, m.clone(), Coefficient::one()), g)?;
            if !ech.contains(&basis.vector(&r, 0)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

//! Chern classes of bundle expressions by the splitting principle.
//!
//! Each atom gets formal Chern roots; operators act on root multisets; the
//! product of `1 + root` is reduced back to elementary symmetric functions of
//! every atom and those are replaced by the atom's classes.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::Coefficient;
use crate::gradedring::{substitute_images, GradedPoly, Monomial, VarTable};

#[derive(Clone, Debug)]
pub enum BundleExpr {
    /// Bundle of rank `classes.len()` with Chern classes `c_1..c_r`.
    Atom { name: String, classes: Vec<GradedPoly> },
    Sum(Box<BundleExpr>, Box<BundleExpr>),
    Dual(Box<BundleExpr>),
    Det(Box<BundleExpr>),
    /// Tensor product with a line bundle of the given first Chern class.
    TensorLine(Box<BundleExpr>, GradedPoly),
    Sym(u32, Box<BundleExpr>),
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl BundleExpr {
    pub fn atom(name: &str, classes: Vec<GradedPoly>) -> BundleExpr {
        BundleExpr::Atom { name: name.to_string(), classes }
    }

    pub fn line(name: &str, class: GradedPoly) -> BundleExpr {
        BundleExpr::atom(name, vec![class])
    }

    pub fn sum(a: BundleExpr, b: BundleExpr) -> BundleExpr {
        BundleExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn dual(a: BundleExpr) -> BundleExpr {
        BundleExpr::Dual(Box::new(a))
    }

    pub fn det(a: BundleExpr) -> BundleExpr {
        BundleExpr::Det(Box::new(a))
    }

    pub fn tensor_line(a: BundleExpr, class: GradedPoly) -> BundleExpr {
        BundleExpr::TensorLine(Box::new(a), class)
    }

    pub fn sym(n: u32, a: BundleExpr) -> BundleExpr {
        BundleExpr::Sym(n, Box::new(a))
    }

    pub fn rank(&self) -> u64 {
        match self {
            BundleExpr::Atom { classes, .. } => classes.len() as u64,
            BundleExpr::Sum(a, b) => a.rank() + b.rank(),
            BundleExpr::Dual(a) | BundleExpr::TensorLine(a, _) => a.rank(),
            BundleExpr::Det(_) => 1,
            BundleExpr::Sym(n, a) => {
                let r = a.rank();
                if r == 0 {
                    0
                } else {
                    binom(*n as u64 + r - 1, r - 1)
                }
            }
        }
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(&'a str, &'a [GradedPoly])>) -> Result<()> {
        match self {
            BundleExpr::Atom { name, classes } => {
                if let Some((_, c)) = out.iter().find(|(n, _)| *n == name.as_str()) {
                    if *c != classes.as_slice() {
                        return Err(Error::Invalid(format!("atom {name} used with different classes")));
                    }
                } else {
                    out.push((name, classes));
                }
                Ok(())
            }
            BundleExpr::Sum(a, b) => {
                a.collect_atoms(out)?;
                b.collect_atoms(out)
            }
            BundleExpr::Dual(a) | BundleExpr::Det(a) | BundleExpr::TensorLine(a, _) | BundleExpr::Sym(_, a) => {
                a.collect_atoms(out)
            }
        }
    }
}

/// Total Chern class truncated at `truncation`: `pieces[i]` is `c_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TotalChernClass {
    pub truncation: u32,
    pub pieces: Vec<GradedPoly>,
}

impl TotalChernClass {
    pub fn new(table: &Arc<VarTable>, pieces: Vec<GradedPoly>) -> TotalChernClass {
        let mut pieces = pieces;
        if pieces.is_empty() {
            pieces.push(GradedPoly::one(table));
        }
        TotalChernClass { truncation: pieces.len() as u32 - 1, pieces }
    }

    pub fn piece(&self, i: u32) -> Option<&GradedPoly> {
        self.pieces.get(i as usize)
    }

    /// Product of total classes, truncated at the smaller truncation.
    pub fn mul(&self, o: &TotalChernClass) -> TotalChernClass {
        let n = self.truncation.min(o.truncation) as usize;
        let table = self.pieces[0].table().clone();
        let mut pieces = vec![GradedPoly::zero(&table); n + 1];
        for (i, a) in self.pieces.iter().enumerate().take(n + 1) {
            for (j, b) in o.pieces.iter().enumerate().take(n + 1 - i) {
                pieces[i + j] = pieces[i + j].add(&a.mul(b));
            }
        }
        TotalChernClass { truncation: n as u32, pieces }
    }
}

/// Layout of the working table: base variables, then each atom's roots.
struct RootTable {
    table: Arc<VarTable>,
    base_len: usize,
    atoms: Vec<(String, Vec<usize>, Vec<GradedPoly>)>,
}

fn root_table(base: &Arc<VarTable>, e: &BundleExpr) -> Result<RootTable> {
    let mut atoms = Vec::new();
    e.collect_atoms(&mut atoms)?;
    let mut extra: Vec<(String, u32)> = Vec::new();
    let mut layout = Vec::new();
    for (k, (name, classes)) in atoms.iter().enumerate() {
        for c in classes.iter() {
            if **c.table() != **base {
                return Err(Error::TableMismatch);
            }
        }
        let mut idx = Vec::new();
        for i in 0..classes.len() {
            idx.push(base.len() + extra.len());
            extra.push((format!("__root{k}_{i}"), 1));
        }
        layout.push((name.to_string(), idx, classes.to_vec()));
    }
    let table = base.extended(&extra)?;
    Ok(RootTable { table, base_len: base.len(), atoms: layout })
}

fn roots_of(e: &BundleExpr, rt: &RootTable) -> Result<Vec<GradedPoly>> {
    let t = &rt.table;
    Ok(match e {
        BundleExpr::Atom { name, .. } => {
            let (_, idx, _) = rt.atoms.iter().find(|(n, _, _)| n == name).unwrap();
            idx.iter().map(|&i| GradedPoly::monomial(t, Monomial::var(t.len(), i), Coefficient::one())).collect()
        }
        BundleExpr::Sum(a, b) => {
            let mut r = roots_of(a, rt)?;
            r.extend(roots_of(b, rt)?);
            r
        }
        BundleExpr::Dual(a) => roots_of(a, rt)?.iter().map(|x| x.neg()).collect(),
        BundleExpr::Det(a) => {
            let mut s = GradedPoly::zero(t);
            for x in roots_of(a, rt)? {
                s = s.add(&x);
            }
            vec![s]
        }
        BundleExpr::TensorLine(a, l) => {
            match l.weighted_degree() {
                crate::gradedring::WeightedDegree::Zero | crate::gradedring::WeightedDegree::Homogeneous(1) => {}
                _ => return Err(Error::Invalid(format!("line class must have degree 1: {l}"))),
            }
            let l = l.embed(t)?;
            roots_of(a, rt)?.iter().map(|x| x.add(&l)).collect()
        }
        BundleExpr::Sym(n, a) => {
            let base = roots_of(a, rt)?;
            let mut out = Vec::new();
            let mut pick = vec![0usize; *n as usize];
            fn rec(base: &[GradedPoly], n: usize, start: usize, pick: &mut Vec<usize>, depth: usize, out: &mut Vec<GradedPoly>, t: &Arc<VarTable>) {
                if depth == n {
                    let mut s = GradedPoly::zero(t);
                    for &i in pick.iter() {
                        s = s.add(&base[i]);
                    }
                    out.push(s);
                    return;
                }
                for i in start..base.len() {
                    pick[depth] = i;
                    rec(base, n, i, pick, depth + 1, out, t);
                }
            }
            rec(&base, *n as usize, 0, &mut pick, 0, &mut out, t);
            if *n == 0 {
                // Sym^0 is the trivial line bundle
                out = vec![GradedPoly::zero(t)];
            }
            out
        }
    })
}

/// Rewrites a polynomial symmetric in `roots` as a polynomial in their
/// elementary symmetric functions, then substitutes `classes` for those.
/// Other variables are carried along as coefficients.
pub(crate) fn symmetric_reduce(p: &GradedPoly, roots: &[usize], classes: &[GradedPoly]) -> Result<GradedPoly> {
    let t = p.table().clone();
    let k = roots.len();
    // elementary symmetric polynomials in the roots, and the classes embedded
    let mut elem = vec![GradedPoly::one(&t)];
    {
        let mut cur = vec![GradedPoly::one(&t)];
        for &r in roots {
            let x = GradedPoly::monomial(&t, Monomial::var(t.len(), r), Coefficient::one());
            let mut next = cur.clone();
            next.push(GradedPoly::zero(&t));
            for j in 1..next.len() {
                next[j] = cur.get(j).cloned().unwrap_or_else(|| GradedPoly::zero(&t)).add(&cur[j - 1].mul(&x));
            }
            cur = next;
        }
        elem.extend(cur.into_iter().skip(1));
    }
    let classes: Vec<GradedPoly> = classes.iter().map(|c| c.embed(&t)).collect::<Result<_>>()?;
    let mut pow_cache: HashMap<(usize, u16), (GradedPoly, GradedPoly)> = HashMap::new();
    let mut pw = |j: usize, e: u16| -> (GradedPoly, GradedPoly) {
        pow_cache.entry((j, e)).or_insert_with(|| (elem[j].pow(e as u32), classes[j - 1].pow(e as u32))).clone()
    };
    let mut rest = p.clone();
    let mut out = GradedPoly::zero(&t);
    while !rest.is_zero() {
        let key = |m: &Monomial| -> Vec<u16> { roots.iter().map(|&r| m.0[r]).collect() };
        let a = rest.terms().iter().map(|(m, _)| key(m)).max().unwrap();
        if a.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSymmetric(format!("leading root exponents {a:?}")));
        }
        let mut coeff_terms = Vec::new();
        for (m, c) in rest.terms() {
            if key(m) == a {
                let mut m = m.clone();
                for &r in roots {
                    m.0[r] = 0;
                }
                coeff_terms.push((m, c.clone()));
            }
        }
        let coeff = GradedPoly::from_terms(&t, coeff_terms);
        let mut in_roots = coeff.clone();
        let mut in_classes = coeff;
        for j in 1..=k {
            let e = a[j - 1] - if j < k { a[j] } else { 0 };
            if e > 0 {
                let (x, y) = pw(j, e);
                in_roots = in_roots.mul(&x);
                in_classes = in_classes.mul(&y);
            }
        }
        rest = rest.sub(&in_roots);
        out = out.add(&in_classes);
    }
    Ok(out)
}

/// Total Chern class of `e` truncated at degree `truncation`, expressed in
/// the atoms' classes on `base`.
pub fn total_class(base: &Arc<VarTable>, e: &BundleExpr, truncation: u32) -> Result<TotalChernClass> {
    let rt = root_table(base, e)?;
    let t = &rt.table;
    let roots = roots_of(e, &rt)?;
    // pieces of ∏(1 + root), truncated
    let n = truncation as usize;
    let mut pieces = vec![GradedPoly::zero(t); n + 1];
    pieces[0] = GradedPoly::one(t);
    for r in &roots {
        if r.is_zero() {
            continue;
        }
        for i in (1..=n).rev() {
            pieces[i] = pieces[i].add(&pieces[i - 1].mul(r));
        }
    }
    let mut out = Vec::with_capacity(n + 1);
    for piece in pieces {
        let mut p = piece;
        for (_, idx, classes) in &rt.atoms {
            p = symmetric_reduce(&p, idx, classes)?;
        }
        if p.terms().iter().any(|(m, _)| m.0[rt.base_len..].iter().any(|&x| x > 0)) {
            return Err(Error::NotSymmetric(format!("root symbol survived in {p}")));
        }
        let images: Vec<GradedPoly> = (0..t.len())
            .map(|i| {
                if i < rt.base_len {
                    GradedPoly::var(base, t.name(i)).unwrap()
                } else {
                    GradedPoly::zero(base)
                }
            })
            .collect();
        out.push(substitute_images(&p, t, base, &images)?);
    }
    Ok(TotalChernClass { truncation, pieces: out })
}

/// Degree-d piece of `B·A⁻¹`.
pub fn quotient_class(b: &TotalChernClass, a: &TotalChernClass, d: u32) -> Result<GradedPoly> {
    if b.truncation < d || a.truncation < d {
        return Err(Error::Invalid(format!(
            "truncation {} too small for degree {d}",
            b.truncation.min(a.truncation)
        )));
    }
    if !a.pieces[0].sub(&GradedPoly::one(a.pieces[0].table())).is_zero() {
        return Err(Error::Invalid("divisor class must start with 1".into()));
    }
    let table = a.pieces[0].table().clone();
    let d = d as usize;
    let mut inv = vec![GradedPoly::one(&table)];
    for n in 1..=d {
        let mut s = GradedPoly::zero(&table);
        for i in 1..=n {
            s = s.sub(&a.pieces[i].mul(&inv[n - i]));
        }
        inv.push(s);
    }
    let mut out = GradedPoly::zero(&table);
    for i in 0..=d {
        out = out.add(&b.pieces[i].mul(&inv[d - i]));
    }
    Ok(out)
}

/// Parses the bundle grammar: atoms `E{c1,c2}`, `L{s}`, sums with `+`,
/// `dual(..)`, `det(..)`, `symN(..)` or `sym<N>(..)`, `tensorL(.., class)`.
pub fn parse_bundle(table: &Arc<VarTable>, s: &str) -> Result<BundleExpr> {
    let mut p = BundleParser { s: s.as_bytes(), pos: 0, table };
    let e = p.sum()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(Error::Parse(format!("trailing input at {} in {s:?}", p.pos)));
    }
    Ok(e)
}

/// Variable table for a bundle expression: a bare identifier in position i
/// of an atom's class list gets degree i; every other identifier degree 1.
pub fn infer_table(s: &str) -> Result<Arc<VarTable>> {
    let bytes = s.as_bytes();
    let mut vars: Vec<(String, u32)> = Vec::new();
    let mut depth_stack: Vec<u32> = Vec::new();
    let mut i = 0;
    let mut slot_start = true;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '{' {
            depth_stack.push(1);
            slot_start = true;
            i += 1;
            continue;
        }
        if c == '}' {
            depth_stack.pop();
            i += 1;
            continue;
        }
        if c == ',' {
            if let Some(k) = depth_stack.last_mut() {
                *k += 1;
            }
            slot_start = true;
            i += 1;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < bytes.len() && ((bytes[i] as char).is_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = &s[st..i];
            let next = s[i..].trim_start().chars().next();
            let is_call = matches!(next, Some('(') | Some('{') | Some('<'));
            if !is_call {
                let bare = slot_start && matches!(next, Some(',') | Some('}'));
                let deg = match (depth_stack.last(), bare) {
                    (Some(&k), true) => k,
                    _ => 1,
                };
                if let Some(v) = vars.iter_mut().find(|(n, _)| n == name) {
                    if bare {
                        v.1 = deg;
                    }
                } else {
                    vars.push((name.to_string(), deg));
                }
            }
            slot_start = false;
            continue;
        }
        if !c.is_whitespace() {
            slot_start = false;
        }
        i += 1;
    }
    VarTable::new(&vars)
}

struct BundleParser<'a> {
    s: &'a [u8],
    pos: usize,
    table: &'a Arc<VarTable>,
}

impl BundleParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.pos < self.s.len() && self.s[self.pos] == c {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{}' at {}", c as char, self.pos)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let st = self.pos;
        while self.pos < self.s.len() && ((self.s[self.pos] as char).is_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if st == self.pos {
            return Err(Error::Parse(format!("expected identifier at {st}")));
        }
        Ok(String::from_utf8_lossy(&self.s[st..self.pos]).into_owned())
    }

    /// Raw text up to the next top-level delimiter in `stops`.
    fn raw_until(&mut self, stops: &[u8]) -> Result<String> {
        let st = self.pos;
        let mut depth = 0i32;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if depth == 0 && stops.contains(&c) {
                break;
            }
            match c {
                b'(' | b'{' => depth += 1,
                b')' | b'}' => depth -= 1,
                _ => {}
            }
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.s[st..self.pos]).trim().to_string())
    }

    fn sum(&mut self) -> Result<BundleExpr> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = BundleExpr::sum(acc, self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BundleExpr> {
        if self.eat(b'(') {
            let e = self.sum()?;
            self.expect(b')')?;
            return Ok(e);
        }
        let name = self.ident()?;
        if self.eat(b'{') {
            let mut classes = Vec::new();
            loop {
                let txt = self.raw_until(b",}")?;
                classes.push(GradedPoly::parse(self.table, &txt)?);
                if self.eat(b'}') {
                    break;
                }
                self.expect(b',')?;
            }
            for (i, c) in classes.iter().enumerate() {
                match c.weighted_degree() {
                    crate::gradedring::WeightedDegree::Zero => {}
                    crate::gradedring::WeightedDegree::Homogeneous(d) if d as usize == i + 1 => {}
                    _ => return Err(Error::Invalid(format!("class c{} of {name} must have degree {}: {c}", i + 1, i + 1))),
                }
            }
            return Ok(BundleExpr::atom(&name, classes));
        }
        match name.as_str() {
            "dual" | "det" => {
                self.expect(b'(')?;
                let a = self.sum()?;
                self.expect(b')')?;
                Ok(if name == "dual" { BundleExpr::dual(a) } else { BundleExpr::det(a) })
            }
            "tensorL" => {
                self.expect(b'(')?;
                let a = self.sum()?;
                self.expect(b',')?;
                self.ws();
                let txt = self.raw_until(b")")?;
                let txt = txt.strip_prefix("L{").and_then(|t| t.strip_suffix('}')).unwrap_or(&txt).to_string();
                let l = GradedPoly::parse(self.table, &txt)?;
                self.expect(b')')?;
                Ok(BundleExpr::tensor_line(a, l))
            }
            _ if name.starts_with("sym") => {
                let digits = &name[3..];
                let n: u32 = if digits.is_empty() {
                    self.expect(b'<')?;
                    let t = self.raw_until(b">")?;
                    self.expect(b'>')?;
                    t.parse().map_err(|_| Error::Parse(format!("bad symmetric power {t}")))?
                } else {
                    digits.parse().map_err(|_| Error::Parse(format!("bad operator {name}")))?
                };
                self.expect(b'(')?;
                let a = self.sum()?;
                self.expect(b')')?;
                Ok(BundleExpr::sym(n, a))
            }
            _ => Err(Error::Parse(format!("unknown operator {name}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab() -> Arc<VarTable> {
        VarTable::new(&[("c1", 1), ("c2", 2), ("s", 1), ("x", 1), ("y", 1)]).unwrap()
    }

    fn p(t: &Arc<VarTable>, s: &str) -> GradedPoly {
        GradedPoly::parse(t, s).unwrap()
    }

    #[test]
    fn sym2_of_rank_two() {
        let t = tab();
        let e = parse_bundle(&t, "sym2(E{c1,c2})").unwrap();
        assert_eq!(e.rank(), 3);
        let c = total_class(&t, &e, 3).unwrap();
        assert_eq!(c.pieces[1], p(&t, "3*c1"));
        assert_eq!(c.pieces[3], p(&t, "4*c1*c2"));
    }

    #[test]
    fn dual_line() {
        let t = tab();
        let e = parse_bundle(&t, "dual(L{s})").unwrap();
        let c = total_class(&t, &e, 3).unwrap();
        assert_eq!(c.pieces[1], p(&t, "-s"));
        assert!(c.pieces[2].is_zero() && c.pieces[3].is_zero());
    }

    #[test]
    fn whitney_quotient() {
        let t = tab();
        let b = total_class(&t, &parse_bundle(&t, "L{x} + M{y}").unwrap(), 2).unwrap();
        let a = total_class(&t, &parse_bundle(&t, "L{x}").unwrap(), 2).unwrap();
        assert_eq!(quotient_class(&b, &a, 1).unwrap(), p(&t, "y"));
        assert!(quotient_class(&b, &a, 2).unwrap().is_zero());
        assert!(quotient_class(&b, &b, 2).unwrap().is_zero());
        assert!(quotient_class(&b, &a, 3).is_err());
    }

    #[test]
    fn grammar_variants() {
        let t = tab();
        let a = parse_bundle(&t, "sym<2>(E{c1,c2})").unwrap();
        assert_eq!(a.rank(), 3);
        let b = parse_bundle(&t, "tensorL(det(E{c1,c2}), L{-2*s})").unwrap();
        let c = total_class(&t, &b, 1).unwrap();
        assert_eq!(c.pieces[1], p(&t, "c1 - 2*s"));
        assert!(parse_bundle(&t, "sym2(E{c2,c1})").is_err());
        assert!(parse_bundle(&t, "wedge(E{c1,c2})").is_err());
    }

    #[test]
    fn infers_degrees() {
        let t = infer_table("tensorL(sym4(E{c1,c2,0}), -2*s)").unwrap();
        assert_eq!(t.degree(t.position("c2").unwrap()), 2);
        assert_eq!(t.degree(t.position("s").unwrap()), 1);
    }
}

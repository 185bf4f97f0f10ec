use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GradedPoly, Monomial, RingPresentation, VarTable};
use crate::error::{Error, Result};
use crate::exactnum::Coefficient;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub coeff: Coefficient,
    pub mono: BTreeMap<String, u32>,
}

pub type PolyJson = Vec<TermJson>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VarJson {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PresentationJson {
    pub vars: Vec<VarJson>,
    #[serde(default)]
    pub relations: Vec<PolyJson>,
}

impl GradedPoly {
    pub fn to_json(&self) -> PolyJson {
        self.terms()
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.clone(),
                mono: m
                    .exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (self.table().name(i).to_string(), e as u32))
                    .collect(),
            })
            .collect()
    }

    pub fn from_json(table: &Arc<VarTable>, j: &PolyJson) -> Result<GradedPoly> {
        let mut terms = Vec::with_capacity(j.len());
        for t in j {
            let mut m = Monomial::one(table.len());
            for (name, &e) in &t.mono {
                let i = table.position(name).ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                m.0[i] = u16::try_from(e).map_err(|_| Error::Invalid(format!("exponent {e} too large")))?;
            }
            terms.push((m, t.coeff.clone()));
        }
        Ok(GradedPoly::from_terms(table, terms))
    }
}

impl RingPresentation {
    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            vars: self
                .table
                .names()
                .iter()
                .zip(self.table.degrees())
                .map(|(n, &d)| VarJson { name: n.clone(), degree: d })
                .collect(),
            relations: self.relations.iter().map(|r| r.to_json()).collect(),
        }
    }

    pub fn from_json(j: &PresentationJson) -> Result<RingPresentation> {
        let vars: Vec<(String, u32)> = j.vars.iter().map(|v| (v.name.clone(), v.degree)).collect();
        let table = VarTable::new(&vars)?;
        let rels = j.relations.iter().map(|r| GradedPoly::from_json(&table, r)).collect::<Result<Vec<_>>>()?;
        RingPresentation::new(table, rels)
    }
}

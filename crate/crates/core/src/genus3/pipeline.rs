//! Iterated gluing described by a JSON pipeline: an open presentation and a
//! list of closed strata, each glued onto the result of the previous step.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluecore::{glue, Family, GlueOptions, GluingCertificate, GluingDatum};
use crate::gradedring::{GradedPoly, PolyJson, RingMap, RingPresentation, VarJson, VarTable};
use crate::idealengine::{contains, Ideal};

use super::strata::NamedPresentation;

/// A polynomial given either as an expression or as a term list.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolySpec {
    Text(String),
    Terms(PolyJson),
}

impl PolySpec {
    pub fn resolve(&self, t: &Arc<VarTable>) -> Result<GradedPoly> {
        match self {
            PolySpec::Text(s) => GradedPoly::parse(t, s),
            PolySpec::Terms(j) => GradedPoly::from_json(t, j),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PresentationSpec {
    /// A presentation computed by the library, looked up by name.
    Derived { derived: String },
    Explicit {
        vars: Vec<VarJson>,
        #[serde(default)]
        relations: Vec<PolySpec>,
        #[serde(default)]
        names: Vec<String>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepSpec {
    pub name: String,
    pub zsym: String,
    pub degree: u32,
    pub closed: PresentationSpec,
    /// Restriction of every current generator, including `zsym`.
    pub images: BTreeMap<String, PolySpec>,
    pub c_top: PolySpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub open: PresentationSpec,
    pub steps: Vec<StepSpec>,
}

impl PipelineSpec {
    pub fn from_json(s: &str) -> Result<PipelineSpec> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn builtin() -> PipelineSpec {
        PipelineSpec::from_json(super::PIPELINE_JSON).expect("shipped pipeline parses")
    }
}

/// Looks up derived presentations by name.
pub type Resolver<'a> = dyn Fn(&str) -> Result<NamedPresentation> + Sync + 'a;

pub fn resolve_presentation(spec: &PresentationSpec, resolver: &Resolver) -> Result<NamedPresentation> {
    match spec {
        PresentationSpec::Derived { derived } => resolver(derived),
        PresentationSpec::Explicit { vars, relations, names } => {
            let vars: Vec<(String, u32)> = vars.iter().map(|v| (v.name.clone(), v.degree)).collect();
            let t = VarTable::new(&vars)?;
            let rels = relations.iter().map(|r| r.resolve(&t)).collect::<Result<Vec<_>>>()?;
            let names = if names.is_empty() {
                (0..rels.len()).map(|i| format!("r{i}")).collect()
            } else if names.len() == rels.len() {
                names.clone()
            } else {
                return Err(Error::Invalid("relation names and relations differ in number".into()));
            };
            NamedPresentation::new(t, names.into_iter().zip(rels).collect())
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub name: String,
    pub datum: GluingDatum,
    pub closed_names: Vec<String>,
    pub output: RingPresentation,
    /// Origin of each output relation, `step:relation` for closed relations
    /// and kernel generators, inherited for modified open relations.
    pub labels: Vec<String>,
    pub certificate: GluingCertificate,
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub open: NamedPresentation,
    pub steps: Vec<StepOutcome>,
}

impl PipelineOutcome {
    pub fn presentation(&self) -> &RingPresentation {
        self.steps.last().map(|s| &s.output).unwrap_or(&self.open.presentation)
    }

    pub fn labels(&self) -> Vec<String> {
        match self.steps.last() {
            Some(s) => s.labels.clone(),
            None => self.open.names.iter().map(|n| format!("open:{n}")).collect(),
        }
    }
}

/// Restriction map of one step from the free ring on `src` to the closed
/// stratum.
fn step_map(src: &Arc<VarTable>, step: &StepSpec, closed: &RingPresentation) -> Result<RingMap> {
    for n in step.images.keys() {
        if src.position(n).is_none() {
            return Err(Error::UnknownVariable(n.clone()));
        }
    }
    let images = src
        .names()
        .iter()
        .map(|n| {
            step.images
                .get(n)
                .ok_or_else(|| Error::Invalid(format!("step {}: no image given for {n}", step.name)))?
                .resolve(&closed.table)
        })
        .collect::<Result<Vec<_>>>()?;
    RingMap::new(RingPresentation::free(src.clone()), closed.clone(), images)
}

pub fn build_datum(open: &RingPresentation, step: &StepSpec, closed: &RingPresentation) -> Result<GluingDatum> {
    let src = open.table.extended(&[(step.zsym.as_str(), step.degree)])?;
    let eta = step_map(&src, step, closed)?;
    let c_top = step.c_top.resolve(&closed.table)?;
    GluingDatum::from_parts(open.clone(), closed.clone(), eta, &step.zsym, c_top)
}

/// Restriction of the step's total ring to its closed stratum.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub name: String,
    pub eta: RingMap,
}

/// The open presentation and every restriction map, built from the
/// variable tables alone without gluing.
pub fn restrictions(spec: &PipelineSpec, resolver: &Resolver) -> Result<(NamedPresentation, Vec<Restriction>)> {
    let open = resolve_presentation(&spec.open, resolver)?;
    let mut table = open.presentation.table.clone();
    let mut out = Vec::new();
    for step in &spec.steps {
        let closed = resolve_presentation(&step.closed, resolver)?;
        table = table.extended(&[(step.zsym.as_str(), step.degree)])?;
        out.push(Restriction { name: step.name.clone(), eta: step_map(&table, step, &closed.presentation)? });
    }
    Ok((open, out))
}

/// Runs every step at the working bound.
pub fn run_pipeline(spec: &PipelineSpec, bound: u32, opts: GlueOptions, resolver: &Resolver) -> Result<PipelineOutcome> {
    let open = resolve_presentation(&spec.open, resolver)?;
    let mut current = open.presentation.clone();
    let mut labels: Vec<String> = open.names.iter().map(|n| format!("open:{n}")).collect();
    let mut steps = Vec::new();
    for step in &spec.steps {
        let closed = resolve_presentation(&step.closed, resolver)?;
        let datum = build_datum(&current, step, &closed.presentation)?;
        let (output, certificate) = glue(&datum, bound, opts)?;
        let next: Vec<String> = certificate
            .relations
            .iter()
            .map(|r| match r.family {
                Family::LiftedClosed => format!("{}:{}", step.name, closed.names[r.index]),
                Family::Kernel => format!("{}:kernel{}", step.name, r.index),
                Family::ModifiedOpen => labels[r.index].clone(),
            })
            .collect();
        current = output.clone();
        labels = next;
        steps.push(StepOutcome { name: step.name.clone(), datum, closed_names: closed.names, output, labels: labels.clone(), certificate });
    }
    Ok(PipelineOutcome { open, steps })
}

/// For each stratum (the open one first), whether each polynomial on the
/// final table restricts to zero there.
pub fn vanishing_on_strata(open: &NamedPresentation, maps: &[Restriction], polys: &[GradedPoly]) -> Result<Vec<(String, Vec<bool>)>> {
    let fin = maps.last().map(|r| r.eta.source.table.clone()).unwrap_or_else(|| open.presentation.table.clone());
    let embed_killing = |p: &GradedPoly, t: &Arc<VarTable>| -> Result<GradedPoly> {
        let p = p.embed(&fin)?;
        let extra: Vec<usize> = (0..fin.len()).filter(|&i| t.position(fin.name(i)).is_none()).collect();
        p.kill(&extra).embed(t)
    };
    let mut out = Vec::new();
    let ot = &open.presentation.table;
    let oi = Ideal::new(ot, &open.presentation.relations)?;
    let v = polys.iter().map(|p| contains(&oi, &embed_killing(p, ot)?)).collect::<Result<Vec<_>>>()?;
    out.push(("open".to_string(), v));
    for r in maps {
        let st = r.eta.source.table.clone();
        let q = Ideal::new(&r.eta.target.table, &r.eta.target.relations)?;
        let v = polys
            .iter()
            .map(|p| contains(&q, &r.eta.apply(&embed_killing(p, &st)?)?))
            .collect::<Result<Vec<_>>>()?;
        out.push((r.name.clone(), v));
    }
    Ok(out)
}

/// [`vanishing_on_strata`] for the maps of a finished run.
pub fn restriction_vanishing(outcome: &PipelineOutcome, polys: &[GradedPoly]) -> Result<Vec<(String, Vec<bool>)>> {
    let maps: Vec<Restriction> =
        outcome.steps.iter().map(|s| Restriction { name: s.name.clone(), eta: s.datum.eta.clone() }).collect();
    vanishing_on_strata(&outcome.open, &maps, polys)
}

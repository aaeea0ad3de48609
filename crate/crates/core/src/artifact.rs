//! Versioned JSON and CSV artifact types shared with the CLI.
//!
//! All exact quantities serialize losslessly: ring elements in `a+b*w`
//! syntax, rationals as `m/n`, dyadic interval endpoints as `m*2^e`
//! strings. Field order is fixed by the struct definitions and maps are
//! avoided, so identical inputs produce byte-identical artifacts.

use crate::cf::{CycleReport, Expansion};
use crate::diophantine::{CircleSpec, CircleVerdict};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::forms::{FormMatrix, OrbitReport};
use crate::interval::{ComplexInterval, RealInterval};
use crate::rings::{KElt, RingElt, RingId};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

pub const EXPANSION_SCHEMA: &str = "expansion-v1";
pub const ORBIT_SCHEMA: &str = "orbit-v1";
pub const CIRCLE_SCHEMA: &str = "circle-v1";
pub const CYCLE_SCHEMA: &str = "cycle-v1";

fn interval_doc(iv: &RealInterval) -> [String; 2] {
    [iv.lo().to_repr(), iv.hi().to_repr()]
}

fn parse_interval(doc: &[String; 2]) -> Result<RealInterval> {
    let lo = Dyadic::parse_repr(&doc[0])
        .ok_or_else(|| Error::InvalidInput(format!("bad dyadic '{}'", doc[0])))?;
    let hi = Dyadic::parse_repr(&doc[1])
        .ok_or_else(|| Error::InvalidInput(format!("bad dyadic '{}'", doc[1])))?;
    Ok(RealInterval::new(lo, hi))
}

fn rational_str(r: &BigRational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s).map_err(|_| Error::InvalidInput(format!("bad rational '{s}'")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDoc {
    pub n: usize,
    pub a: String,
    pub p: String,
    pub q: String,
    pub det_g: i8,
    pub delta_re: [String; 2],
    pub delta_im: [String; 2],
    pub delta_abs: [String; 2],
    pub dist: [String; 2],
    pub q_mono: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionDoc {
    pub schema: String,
    pub ring: String,
    pub poly: [String; 3],
    pub branch: i8,
    pub chooser: String,
    pub depth: usize,
    pub precision_bits: u64,
    pub steps: Vec<StepDoc>,
    pub radius: [String; 2],
}

impl ExpansionDoc {
    pub fn from_expansion(e: &Expansion, chooser: &str) -> ExpansionDoc {
        let [a, b, c] = e.base.coeffs();
        ExpansionDoc {
            schema: EXPANSION_SCHEMA.into(),
            ring: e.ring.label().into(),
            poly: [a.to_string(), b.to_string(), c.to_string()],
            branch: e.base.branch(),
            chooser: chooser.into(),
            depth: e.depth(),
            precision_bits: e.prec,
            steps: e
                .steps
                .iter()
                .map(|s| StepDoc {
                    n: s.index,
                    a: s.partial_quotient.to_string(),
                    p: s.p.to_string(),
                    q: s.q.to_string(),
                    det_g: s.det_sign,
                    delta_re: interval_doc(&s.delta.re),
                    delta_im: interval_doc(&s.delta.im),
                    delta_abs: interval_doc(&s.delta_abs),
                    dist: interval_doc(&s.dist),
                    q_mono: s.q_mono,
                })
                .collect(),
            radius: interval_doc(&e.radius),
        }
    }

    pub fn ring_id(&self) -> Result<RingId> {
        self.ring.parse()
    }

    /// Exact partial quotients recovered from the document.
    pub fn partial_quotients(&self) -> Result<Vec<RingElt>> {
        let ring = self.ring_id()?;
        self.steps.iter().map(|s| RingElt::parse(ring, &s.a)).collect()
    }

    pub fn delta_interval(&self, n: usize) -> Result<ComplexInterval> {
        let s = &self.steps[n];
        Ok(ComplexInterval::new(
            parse_interval(&s.delta_re)?,
            parse_interval(&s.delta_im)?,
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail") + "\n"
    }

    pub fn from_json(s: &str) -> Result<ExpansionDoc> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad expansion doc: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleDoc {
    pub schema: String,
    pub ring: String,
    pub poly: [String; 3],
    pub branch: i8,
    pub chooser: String,
    pub depth_searched: usize,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preperiod: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
}

impl CycleDoc {
    pub fn new(
        ring: RingId,
        poly: &[RingElt; 3],
        branch: i8,
        chooser: &str,
        depth: usize,
        report: &Option<CycleReport>,
    ) -> CycleDoc {
        CycleDoc {
            schema: CYCLE_SCHEMA.into(),
            ring: ring.label().into(),
            poly: [poly[0].to_string(), poly[1].to_string(), poly[2].to_string()],
            branch,
            chooser: chooser.into(),
            depth_searched: depth,
            found: report.is_some(),
            preperiod: report.as_ref().map(|r| r.preperiod),
            period: report.as_ref().map(|r| r.period),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail") + "\n"
    }

    pub fn from_json(s: &str) -> Result<CycleDoc> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad cycle doc: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitDoc {
    pub schema: String,
    pub ring: String,
    pub sigma: String,
    pub form_denom: String,
    pub form: [String; 4],
    pub distinct: Vec<[String; 4]>,
    pub first_seen: Vec<usize>,
    pub per_index: Vec<[usize; 2]>,
    pub stabilization_index: usize,
    pub convergent_zero_hits: Vec<usize>,
}

impl OrbitDoc {
    pub fn from_report(x: &FormMatrix, rep: &OrbitReport, ring: RingId) -> OrbitDoc {
        let ent = |m: &FormMatrix| -> [String; 4] {
            let e = m.entries();
            [e[0].to_string(), e[1].to_string(), e[2].to_string(), e[3].to_string()]
        };
        OrbitDoc {
            schema: ORBIT_SCHEMA.into(),
            ring: ring.label().into(),
            sigma: x.sigma().label().into(),
            form_denom: x.k().to_string(),
            form: ent(x),
            distinct: rep.distinct.iter().map(ent).collect(),
            first_seen: rep.first_seen.clone(),
            per_index: rep.per_index.iter().map(|&(n, id)| [n, id]).collect(),
            stabilization_index: rep.stabilization_index,
            convergent_zero_hits: rep.convergent_zero_hits.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail") + "\n"
    }

    pub fn from_json(s: &str) -> Result<OrbitDoc> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad orbit doc: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleDoc {
    pub schema: String,
    pub ring: String,
    pub center: String,
    pub radius_sq: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction_modulus: Option<u64>,
}

impl CircleDoc {
    pub fn new(ring: RingId, spec: &CircleSpec, verdict: &CircleVerdict) -> CircleDoc {
        let (v, witness, failing, obstruction) = match verdict {
            CircleVerdict::AllBad { failing, obstruction } => {
                ("all_bad", None, Some(*failing), *obstruction)
            }
            CircleVerdict::HasRationalPoint { witness } => {
                ("rational_point", Some(witness.to_string()), None, None)
            }
        };
        CircleDoc {
            schema: CIRCLE_SCHEMA.into(),
            ring: ring.label().into(),
            center: spec.center.to_string(),
            radius_sq: rational_str(&spec.radius_sq),
            verdict: v.into(),
            witness,
            failing,
            obstruction_modulus: obstruction,
        }
    }

    pub fn witness_elt(&self) -> Result<Option<KElt>> {
        match &self.witness {
            None => Ok(None),
            Some(w) => Ok(Some(KElt::parse(self.ring.parse()?, w)?)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail") + "\n"
    }

    pub fn from_json(s: &str) -> Result<CircleDoc> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad circle doc: {e}")))
    }
}

/// CSV of `(n, |q_n|^2, |delta_n| bounds)` for plotting approximation
/// quality; header row, comma separators, dot decimals.
pub fn probe_csv(e: &Expansion) -> String {
    let mut out = String::from("n,q_norm2,delta_abs_lo,delta_abs_hi\n");
    for s in &e.steps {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.index,
            s.q.norm(),
            s.delta_abs.lo().to_f64(),
            s.delta_abs.hi().to_f64()
        ));
    }
    out
}

//! Machine-readable reports. Rationals are serialized as "p/q" strings so
//! certificates survive a round trip exactly; the timing field is the only
//! part excluded from golden comparisons.

use serde::{Deserialize, Serialize};

use moller_core::exactlin::Rat;
use moller_core::hpt::NonexistenceWitness;
use moller_core::moller::ObstructionCertificate;

use crate::model::parse_rat;

pub const REPORT_SCHEMA: &str = "moller-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum Verdict {
    #[serde(rename = "EXISTS-UP-TO")]
    ExistsUpTo { order: usize, weight: usize },
    #[serde(rename = "NON-EXISTENCE")]
    NonExistence,
    #[serde(rename = "OBSTRUCTED-AT-ORDER")]
    ObstructedAtOrder { order: usize },
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::ExistsUpTo { order, weight } => {
                format!("EXISTS-UP-TO({order}, {weight})")
            }
            Verdict::NonExistence => "NON-EXISTENCE".into(),
            Verdict::ObstructedAtOrder { order } => {
                format!("OBSTRUCTED-AT-ORDER({order})")
            }
            Verdict::Inconclusive => "INCONCLUSIVE".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckLine {
    pub name: String,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessOut {
    pub left: String,
    pub right: String,
    pub value: Vec<(String, String)>,
}

impl WitnessOut {
    pub fn from_core(w: &NonexistenceWitness) -> Self {
        WitnessOut {
            left: w.left.clone(),
            right: w.right.clone(),
            value: w
                .value
                .iter()
                .map(|(l, c)| (l.clone(), c.to_string()))
                .collect(),
        }
    }

    pub fn to_core(&self) -> Result<NonexistenceWitness, crate::model::LoadError> {
        Ok(NonexistenceWitness {
            left: self.left.clone(),
            right: self.right.clone(),
            value: self
                .value
                .iter()
                .map(|(l, c)| Ok((l.clone(), parse_rat(c)?)))
                .collect::<Result<_, crate::model::LoadError>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateOut {
    pub order: usize,
    pub source: String,
    pub target: String,
    pub source_degree: i64,
    pub source_weight: usize,
    pub functional: Vec<String>,
    pub vector: Vec<String>,
    pub value: String,
}

fn rats_out(v: &[Rat]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn rats_in(v: &[String]) -> Result<Vec<Rat>, crate::model::LoadError> {
    v.iter().map(|s| parse_rat(s)).collect()
}

impl CertificateOut {
    pub fn from_core(c: &ObstructionCertificate) -> Self {
        CertificateOut {
            order: c.order,
            source: c.source.clone(),
            target: c.target.clone(),
            source_degree: c.source_degree,
            source_weight: c.source_weight,
            functional: rats_out(&c.functional),
            vector: rats_out(&c.vector),
            value: c.value.to_string(),
        }
    }

    pub fn to_core(&self) -> Result<ObstructionCertificate, crate::model::LoadError> {
        Ok(ObstructionCertificate {
            order: self.order,
            source: self.source.clone(),
            target: self.target.clone(),
            source_degree: self.source_degree,
            source_weight: self.source_weight,
            functional: rats_in(&self.functional)?,
            vector: rats_in(&self.vector)?,
            value: parse_rat(&self.value)?,
        })
    }
}

/// One generator image of the intertwiner, order by order, as label-sorted
/// (monomial, coefficient) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorImage {
    pub generator: String,
    /// orders[n] lists the order-n terms.
    pub orders: Vec<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohTable {
    pub degree: i64,
    pub filtered_only: bool,
    /// Rows (weight, free-theory dimension, perturbed dimension).
    pub rows: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub toolchain: String,
    pub model_kind: String,
    pub weight: usize,
    pub order: usize,
    pub verdict: Verdict,
    pub checks: Vec<CheckLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonexistence_witness: Option<WitnessOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<CertificateOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moller_generators: Option<Vec<GeneratorImage>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohTable>,
    /// Wall-clock time; excluded from byte-for-byte comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(model_kind: &str, weight: usize, order: usize) -> Self {
        Report {
            schema: REPORT_SCHEMA.into(),
            toolchain: format!("moller {}", env!("CARGO_PKG_VERSION")),
            model_kind: model_kind.into(),
            weight,
            order,
            verdict: Verdict::Inconclusive,
            checks: Vec::new(),
            nonexistence_witness: None,
            obstruction: None,
            moller_generators: None,
            cohomology: None,
            timing_ms: None,
        }
    }

    pub fn push_check(&mut self, name: &str, ok: bool, detail: Option<String>) {
        self.checks.push(CheckLine {
            name: name.into(),
            ok,
            detail,
        });
    }

    pub fn to_machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_machine(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "model: {}  (weight {}, order {})\n",
            self.model_kind, self.weight, self.order
        ));
        for c in &self.checks {
            let mark = if c.ok { "ok  " } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}", c.name));
            if let Some(d) = &c.detail {
                out.push_str(&format!(": {d}"));
            }
            out.push('\n');
        }
        if let Some(w) = &self.nonexistence_witness {
            let val: Vec<String> = w
                .value
                .iter()
                .map(|(l, c)| format!("{c} {l}"))
                .collect();
            out.push_str(&format!(
                "  witness: bracket([{}], [{}]) = {}\n",
                w.left,
                w.right,
                val.join(" + ")
            ));
        }
        if let Some(c) = &self.obstruction {
            out.push_str(&format!(
                "  obstruction: order {} at {} (degree {}, weight {}), pairing {}\n",
                c.order, c.source, c.source_degree, c.source_weight, c.value
            ));
        }
        if let Some(gens) = &self.moller_generators {
            out.push_str("  intertwiner generator images:\n");
            for g in gens {
                let mut terms = Vec::new();
                for (n, order) in g.orders.iter().enumerate() {
                    for (mono, c) in order {
                        if n == 0 {
                            terms.push(mono.clone());
                        } else {
                            terms.push(format!("{c} L^{n} {mono}"));
                        }
                    }
                }
                out.push_str(&format!(
                    "    K({}) = {}\n",
                    g.generator,
                    terms.join(" + ")
                ));
            }
        }
        if let Some(t) = &self.cohomology {
            out.push_str(&format!(
                "  cohomology at degree {}{}:\n    weight  free  perturbed\n",
                t.degree,
                if t.filtered_only { " (filtered)" } else { "" }
            ));
            for (w, free, pert) in &t.rows {
                out.push_str(&format!("    {w:>6}  {free:>4}  {pert:>9}\n"));
            }
        }
        out.push_str(&format!("verdict: {}\n", self.verdict.label()));
        out
    }
}

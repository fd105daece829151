//! Model files: a small JSON dialect describing the shipped model families
//! plus a custom linear model. Rationals are "p/q" strings throughout, and
//! the file is validated structurally on load (see schema/model.schema.json
//! for the same rules in JSON Schema form).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use moller_core::exactlin::{
    retract_to_cohomology, CochainComplex, DeformationRetract, GradedMap, GradedVectorSpace, Rat,
    SparseMat,
};
use moller_core::linfty::{LInftyStructure, LieAlgebra};
use moller_core::models::{
    cs_model, hodge_retract, kg_toy, ym_initial_data_model, CsVariant, ModelError,
    SimplicialCircle, YmModel,
};

#[derive(Debug)]
pub enum LoadError {
    /// Malformed document or unreadable file: exit code 2.
    Parse(String),
    /// Well-formed but violates the model schema: exit code 2.
    Schema(String),
    /// Structurally valid but fails a mathematical model invariant: exit
    /// code 3.
    Invariant(String),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse(m) => write!(f, "parse error: {m}"),
            LoadError::Schema(m) => write!(f, "schema error: {m}"),
            LoadError::Invariant(m) => write!(f, "model invariant failed: {m}"),
        }
    }
}

impl LoadError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Parse(_) | LoadError::Schema(_) => 2,
            LoadError::Invariant(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum Kind {
    Kg,
    Cs,
    Ym,
    Custom,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Kg => "kg",
            Kind::Cs => "cs",
            Kind::Ym => "ym",
            Kind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub weight: usize,
    pub order: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSpec {
    pub labels: Vec<String>,
    /// Entries (i, j, k, "p/q"): [b_i, b_j] contains (p/q) b_k. Antisymmetry
    /// is imposed by convention; both orientations may appear.
    pub table: Vec<(usize, usize, usize, String)>,
    /// Skip the Jacobi check at load time; downstream checks then report the
    /// violation instead of refusing to construct (negative controls).
    #[serde(default)]
    pub skip_jacobi_check: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum VariantSpec {
    Minimal,
    Inflated(usize),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    /// Format tag, currently "moller-model/1".
    pub schema: String,
    pub kind: Kind,
    #[serde(default)]
    pub truncation: Option<Truncation>,
    /// kg, custom: number of points / generators.
    #[serde(default)]
    pub k: Option<usize>,
    /// kg: the interaction is the (power-1)-st pointwise power.
    #[serde(default)]
    pub power: Option<usize>,
    /// kg, custom: k-by-k kinetic operator, rows of "p/q" strings.
    #[serde(default)]
    pub d_matrix: Option<Vec<Vec<String>>>,
    /// cs, ym: Lie structure constants.
    #[serde(default)]
    pub lie: Option<LieSpec>,
    /// cs: minimal or inflated.
    #[serde(default)]
    pub variant: Option<VariantSpec>,
    /// ym: number of circle vertices.
    #[serde(default)]
    pub n: Option<usize>,
}

pub fn parse_rat(s: &str) -> Result<Rat, LoadError> {
    Rat::from_str(s.trim()).map_err(|e| LoadError::Schema(format!("bad rational {s:?}: {e}")))
}

fn parse_matrix(rows: &[Vec<String>], k: usize) -> Result<SparseMat, LoadError> {
    if rows.len() != k || rows.iter().any(|r| r.len() != k) {
        return Err(LoadError::Schema(format!("d_matrix must be {k}x{k}")));
    }
    let mut entries = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        for (c, s) in row.iter().enumerate() {
            let v = parse_rat(s)?;
            if !num_traits::Zero::is_zero(&v) {
                entries.push((r, c, v));
            }
        }
    }
    Ok(SparseMat::from_entries(k, k, &entries))
}

fn parse_lie(spec: &LieSpec) -> Result<LieAlgebra, LoadError> {
    let dim = spec.labels.len();
    let mut entries = Vec::new();
    for (i, j, k, s) in &spec.table {
        if *i >= dim || *j >= dim || *k >= dim {
            return Err(LoadError::Schema("Lie table index out of range".into()));
        }
        if i == j {
            return Err(LoadError::Schema(
                "diagonal Lie bracket must vanish".into(),
            ));
        }
        entries.push((*i, *j, *k, parse_rat(s)?));
    }
    let g = LieAlgebra::new(spec.labels.clone(), &entries, false);
    if !spec.skip_jacobi_check && !g.check_jacobi() {
        return Err(LoadError::Invariant(
            "Lie structure constants violate Jacobi".into(),
        ));
    }
    Ok(g)
}

/// Everything the commands need, built once from a model file. For the
/// initial-data model the homotopy structure is the transferred minimal
/// model; the raw sector and its Hodge retract are kept alongside for the
/// transfer route.
pub struct BuiltModel {
    pub kind: &'static str,
    pub structure: LInftyStructure,
    /// Contraction of the structure's complex onto its cohomology.
    pub retract: DeformationRetract,
    /// Raw initial-data sector and Hodge retract (ym only).
    pub full: Option<(YmModel, DeformationRetract)>,
    /// A splitting-based closed form is available (two-term, surjective
    /// kinetic operator).
    pub splitting_available: bool,
}

fn require<T>(v: &Option<T>, field: &str, kind: &str) -> Result<T, LoadError>
where
    T: Clone,
{
    v.clone()
        .ok_or_else(|| LoadError::Schema(format!("kind {kind:?} requires field {field:?}")))
}

pub fn build_model(file: &ModelFile) -> Result<BuiltModel, LoadError> {
    if file.schema != "moller-model/1" {
        return Err(LoadError::Schema(format!(
            "unsupported schema tag {:?}",
            file.schema
        )));
    }
    match file.kind {
        Kind::Kg => {
            let k = require(&file.k, "k", "kg")?;
            let power = require(&file.power, "power", "kg")?;
            if k == 0 || power < 3 {
                return Err(LoadError::Schema("kg needs k >= 1 and power >= 3".into()));
            }
            let d = parse_matrix(&require(&file.d_matrix, "d_matrix", "kg")?, k)?;
            let toy = kg_toy(k, &d, power);
            let retract = retract_to_cohomology(&toy.structure.complex);
            Ok(BuiltModel {
                kind: "kg",
                splitting_available: toy.surjective,
                structure: toy.structure,
                retract,
                full: None,
            })
        }
        Kind::Cs => {
            let g = parse_lie(&require(&file.lie, "lie", "cs")?)?;
            let variant = match require(&file.variant, "variant", "cs")? {
                VariantSpec::Minimal => CsVariant::Minimal,
                VariantSpec::Inflated(p) => CsVariant::Inflated(p),
            };
            let m = cs_model(&g, variant).map_err(|e| match e {
                ModelError::JacobiFailed => {
                    LoadError::Invariant("bracket transport re-check failed Jacobi".into())
                }
                ModelError::TooFewVertices => unreachable!(),
            })?;
            Ok(BuiltModel {
                kind: "cs",
                structure: m.structure,
                retract: m.retract,
                full: None,
                splitting_available: false,
            })
        }
        Kind::Ym => {
            let n = require(&file.n, "n", "ym")?;
            let circle = SimplicialCircle::new(n)
                .map_err(|_| LoadError::Schema("ym needs n >= 3 circle vertices".into()))?;
            let g = parse_lie(&require(&file.lie, "lie", "ym")?)?;
            let ym = ym_initial_data_model(&circle, &g);
            let hodge = hodge_retract(&ym.complex);
            let t = moller_core::hpt::transfer_l2(&hodge.retract, &ym.l2)
                .map_err(|e| LoadError::Invariant(format!("transfer failed: {e:?}")))?;
            let small = hodge.retract.small.clone();
            let structure = LInftyStructure::strict_dgla(small.clone(), t.map);
            Ok(BuiltModel {
                kind: "ym",
                retract: DeformationRetract::identity(&small),
                structure,
                full: Some((ym, hodge.retract)),
                splitting_available: false,
            })
        }
        Kind::Custom => {
            let k = require(&file.k, "k", "custom")?;
            if k == 0 {
                return Err(LoadError::Schema("custom needs k >= 1".into()));
            }
            let d = parse_matrix(&require(&file.d_matrix, "d_matrix", "custom")?, k)?;
            let surjective = d.rank() == k;
            let mut comps = BTreeMap::new();
            comps.insert(0, (0..k).map(|j| format!("x{j:02}")).collect::<Vec<_>>());
            comps.insert(1, (0..k).map(|j| format!("y{j:02}")).collect::<Vec<_>>());
            let sp = GradedVectorSpace::new(comps);
            let mut dm = GradedMap::zero(&sp, &sp, 1);
            dm.set_block(0, d);
            let cx = CochainComplex::new(sp, dm);
            let retract = retract_to_cohomology(&cx);
            Ok(BuiltModel {
                kind: "custom",
                structure: LInftyStructure {
                    complex: cx,
                    brackets: BTreeMap::new(),
                    max_arity: 1,
                },
                retract,
                full: None,
                splitting_available: surjective,
            })
        }
    }
}

pub fn load_model(path: &str) -> Result<(ModelFile, BuiltModel), LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Parse(format!("cannot read {path}: {e}")))?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| LoadError::Schema(e.to_string()))?;
    let built = build_model(&file)?;
    Ok((file, built))
}

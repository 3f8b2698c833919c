//! JSON input and output for algebras, observables, context families,
//! states, measures, opens and truth values.
//!
//! Matrices are nested `[[[re, im], ...], ...]` arrays. Projections are named
//! `"<context label>:[atom, ...]"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bohr::{BohrError, BohrOpen};
use crate::cstar::{c, context_poset_in, CMat, Closure, Context, ContextPoset, CstarError, HermObs, MatrixAlg, Projection};
use crate::state::{DensityState, ProjMeasure, StateError, TruthValue};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error(transparent)]
    Cstar(#[from] CstarError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Bohr(#[from] BohrError),
}

impl IoError {
    fn at(path: impl Into<String>, msg: impl ToString) -> Self {
        IoError::Schema { path: path.into(), msg: msg.to_string() }
    }

    /// Numerical ambiguity, as opposed to malformed input.
    pub fn is_numeric_ambiguity(&self) -> bool {
        matches!(
            self,
            IoError::Cstar(CstarError::DegenerateIntersection { .. })
                | IoError::State(StateError::Cstar(CstarError::DegenerateIntersection { .. }))
        )
    }
}

/// Deserializes with the JSON path of the first failure in the error.
pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(s);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        IoError::at(if path.is_empty() { ".".to_string() } else { path }, e.into_inner())
    })
}

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ObservableJson {
    pub algebra: AlgebraJson,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ContextJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraJson>,
    pub contexts: Vec<ContextJson>,
    #[serde(default)]
    pub closure: Closure,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraJson>,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MeasureEntry {
    pub projection: String,
    pub p: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MeasureJson {
    pub values: Vec<MeasureEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OpenJson {
    pub values: BTreeMap<String, Vec<usize>>,
}

pub fn matrix_from_json(path: &str, m: &MatrixJson) -> Result<CMat, IoError> {
    let n = m.len();
    if n == 0 {
        return Err(IoError::at(path, "empty matrix"));
    }
    if let Some(i) = m.iter().position(|row| row.len() != n) {
        return Err(IoError::at(format!("{path}[{i}]"), format!("row has {} entries, expected {n}", m[i].len())));
    }
    for (i, row) in m.iter().enumerate() {
        if let Some(j) = row.iter().position(|z| !z[0].is_finite() || !z[1].is_finite()) {
            return Err(IoError::at(format!("{path}[{i}][{j}]"), "entry is not finite"));
        }
    }
    Ok(CMat::from_fn(n, n, |i, j| c(m[i][j][0], m[i][j][1])))
}

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    // -0.0 and tiny noise print identically across runs after rounding
    let r = |x: f64| {
        let y = (x * 1e12).round() / 1e12;
        if y == 0.0 { 0.0 } else { y }
    };
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [r(m[(i, j)].re), r(m[(i, j)].im)]).collect()).collect()
}

fn algebra_from_json(path: &str, a: &AlgebraJson) -> Result<MatrixAlg, IoError> {
    MatrixAlg::new(a.blocks.clone()).map_err(|e| IoError::at(format!("{path}.blocks"), e))
}

fn check_dim(path: &str, alg: &MatrixAlg, m: &CMat) -> Result<(), IoError> {
    if m.nrows() != alg.total_dim() {
        return Err(IoError::at(path, format!("matrix is {0}x{0} but the algebra has dimension {1}", m.nrows(), alg.total_dim())));
    }
    Ok(())
}

pub fn observable_from_json(j: &ObservableJson) -> Result<HermObs, IoError> {
    let alg = algebra_from_json("algebra", &j.algebra)?;
    let m = matrix_from_json("matrix", &j.matrix)?;
    check_dim("matrix", &alg, &m)?;
    HermObs::new(alg, m).map_err(|e| IoError::at("matrix", e))
}

pub fn observable_to_json(a: &HermObs) -> ObservableJson {
    ObservableJson {
        algebra: AlgebraJson { blocks: a.algebra().block_dims().to_vec() },
        matrix: matrix_to_json(a.matrix()),
    }
}

pub fn read_observable(s: &str) -> Result<HermObs, IoError> {
    observable_from_json(&from_json_str(s)?)
}

fn context_dim(c: &ContextJson) -> Option<usize> {
    if let Some(a) = c.atoms.as_ref().and_then(|a| a.first()) {
        return Some(a.len());
    }
    c.partition.as_ref().map(|p| p.iter().map(Vec::len).sum())
}

pub fn context_from_json(path: &str, alg: &MatrixAlg, j: &ContextJson) -> Result<Context, IoError> {
    let ctx = match (&j.atoms, &j.partition) {
        (Some(atoms), None) => {
            let mut ps = Vec::with_capacity(atoms.len());
            for (k, a) in atoms.iter().enumerate() {
                let p = format!("{path}.atoms[{k}]");
                let m = matrix_from_json(&p, a)?;
                check_dim(&p, alg, &m)?;
                ps.push(Projection::new(alg.clone(), m).map_err(|e| IoError::at(&p, e))?);
            }
            Context::new(alg.clone(), ps).map_err(|e| IoError::at(format!("{path}.atoms"), e))?
        }
        (None, Some(parts)) => {
            Context::from_partition(alg, parts).map_err(|e| IoError::at(format!("{path}.partition"), e))?
        }
        _ => return Err(IoError::at(path, "expected exactly one of \"atoms\" or \"partition\"")),
    };
    Ok(match &j.name {
        Some(n) => ctx.named(n.clone()),
        None => ctx,
    })
}

pub fn context_to_json(ctx: &Context) -> ContextJson {
    ContextJson {
        name: ctx.name().map(str::to_string),
        atoms: Some(ctx.atoms().iter().map(|p| matrix_to_json(p.matrix())).collect()),
        partition: None,
    }
}

/// Builds the context poset. Without an explicit algebra, the full matrix
/// algebra of the first context's dimension is used.
pub fn family_from_json(j: &FamilyJson) -> Result<ContextPoset, IoError> {
    let alg = match &j.algebra {
        Some(a) => algebra_from_json("algebra", a)?,
        None => {
            let n = j
                .contexts
                .first()
                .and_then(context_dim)
                .ok_or_else(|| IoError::at("contexts", "cannot infer the algebra from an empty family"))?;
            MatrixAlg::full(n)
        }
    };
    let cs = j
        .contexts
        .iter()
        .enumerate()
        .map(|(i, c)| context_from_json(&format!("contexts[{i}]"), &alg, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(context_poset_in(&alg, cs, j.closure)?)
}

/// Every stored context, trivial one included; reading it back with
/// closure `"none"` gives the same poset.
pub fn family_to_json(p: &ContextPoset) -> FamilyJson {
    FamilyJson {
        algebra: Some(AlgebraJson { blocks: p.algebra().block_dims().to_vec() }),
        contexts: p
            .contexts()
            .iter()
            .enumerate()
            .map(|(i, c)| ContextJson { name: Some(p.label(i).to_string()), ..context_to_json(c) })
            .collect(),
        closure: Closure::None,
    }
}

pub fn read_family(s: &str) -> Result<ContextPoset, IoError> {
    family_from_json(&from_json_str(s)?)
}

pub fn state_from_json(j: &StateJson, alg: Option<&MatrixAlg>) -> Result<DensityState, IoError> {
    let m = matrix_from_json("matrix", &j.matrix)?;
    let alg = match (&j.algebra, alg) {
        (Some(a), _) => algebra_from_json("algebra", a)?,
        (None, Some(a)) => a.clone(),
        (None, None) => MatrixAlg::full(m.nrows()),
    };
    check_dim("matrix", &alg, &m)?;
    DensityState::new(alg, m).map_err(|e| IoError::at("matrix", e))
}

pub fn read_state(s: &str, alg: Option<&MatrixAlg>) -> Result<DensityState, IoError> {
    state_from_json(&from_json_str(s)?, alg)
}

pub fn projection_id(p: &ContextPoset, i: usize, m: u64) -> String {
    let atoms: Vec<String> = (0..p.context(i).len()).filter(|a| m >> a & 1 == 1).map(|a| a.to_string()).collect();
    format!("{}:[{}]", p.label(i), atoms.join(","))
}

pub fn parse_projection_id(p: &ContextPoset, id: &str) -> Result<(usize, u64), String> {
    let (label, rest) = id.rsplit_once(':').ok_or_else(|| format!("{id:?} is not of the form \"label:[atoms]\""))?;
    let i = p.index_of(label).ok_or_else(|| format!("unknown context {label:?}"))?;
    let inner = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("{rest:?} is not a bracketed atom list"))?;
    let mut m = 0u64;
    for t in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let a: usize = t.parse().map_err(|_| format!("{t:?} is not an atom index"))?;
        if a >= p.context(i).len() {
            return Err(format!("context {label} has no atom {a}"));
        }
        m |= 1 << a;
    }
    Ok((i, m))
}

/// Builds measure tables from the listed projections. Atom values that are
/// not listed are recovered, where possible, from a context sharing that
/// atom; the remaining masks are filled by additivity.
pub fn measure_from_json(j: &MeasureJson, p: &Arc<ContextPoset>) -> Result<ProjMeasure, IoError> {
    let mut given: Vec<BTreeMap<u64, f64>> = vec![BTreeMap::new(); p.len()];
    for (k, e) in j.values.iter().enumerate() {
        let path = format!("values[{k}]");
        let (i, m) = parse_projection_id(p, &e.projection).map_err(|msg| IoError::at(format!("{path}.projection"), msg))?;
        if !e.p.is_finite() {
            return Err(IoError::at(format!("{path}.p"), "value is not finite"));
        }
        if given[i].insert(m, e.p).is_some() {
            return Err(IoError::at(format!("{path}.projection"), "projection listed twice"));
        }
    }
    let mut atom: Vec<Vec<Option<f64>>> =
        (0..p.len()).map(|i| (0..p.context(i).len()).map(|a| given[i].get(&(1 << a)).copied()).collect()).collect();
    for i in 0..p.len() {
        if p.context(i).len() == 1 && atom[i][0].is_none() {
            atom[i][0] = given[i].get(&1).copied().or(Some(1.0));
        }
    }
    let mut comps = BTreeMap::new();
    loop {
        let mut changed = false;
        for i in 0..p.len() {
            for a in 0..p.context(i).len() {
                if atom[i][a].is_some() {
                    continue;
                }
                for jx in (0..p.len()).filter(|&jx| jx != i) {
                    if !comps.contains_key(&(i, jx)) {
                        comps.insert((i, jx), crate::cstar::overlap_components(p.context(i), p.context(jx))?);
                    }
                    let found = comps[&(i, jx)].iter().find(|(mi, _)| *mi == 1 << a).and_then(|&(_, mj)| {
                        (0..p.context(jx).len())
                            .filter(|b| mj >> b & 1 == 1)
                            .map(|b| atom[jx][b])
                            .sum::<Option<f64>>()
                    });
                    if let Some(v) = found {
                        atom[i][a] = Some(v);
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut tables = Vec::with_capacity(p.len());
    for i in 0..p.len() {
        let k = p.context(i).len();
        if k > 16 {
            return Err(StateError::TooManyAtoms(k).into());
        }
        let ws: Vec<f64> = match atom[i].iter().copied().collect::<Option<Vec<f64>>>() {
            Some(ws) => ws,
            None => {
                let a = atom[i].iter().position(Option::is_none).unwrap_or(0);
                return Err(IoError::at("values", format!("no value for {}", projection_id(p, i, 1 << a))));
            }
        };
        tables.push(
            (0..1u64 << k)
                .map(|m| given[i].get(&m).copied().unwrap_or_else(|| (0..k).filter(|&a| m >> a & 1 == 1).map(|a| ws[a]).sum()))
                .collect(),
        );
    }
    Ok(ProjMeasure::new(p.clone(), tables)?)
}

pub fn read_measure(s: &str, p: &Arc<ContextPoset>) -> Result<ProjMeasure, IoError> {
    measure_from_json(&from_json_str(s)?, p)
}

/// Atom values of every context, in context order.
pub fn measure_to_json(mu: &ProjMeasure) -> MeasureJson {
    let p = mu.poset();
    let values = (0..p.len())
        .flat_map(|i| {
            (0..p.context(i).len()).map(move |a| MeasureEntry { projection: projection_id(p, i, 1 << a), p: mu.value(i, 1 << a) })
        })
        .collect();
    MeasureJson { values }
}

/// `{"values": {label: [atom, ...]}}`, keys in context order.
pub fn open_to_json(g: &BohrOpen) -> Value {
    let p = g.poset();
    let mut map = serde_json::Map::new();
    for i in 0..p.len() {
        let atoms: Vec<usize> = (0..p.context(i).len()).filter(|a| g.value(i) >> a & 1 == 1).collect();
        map.insert(p.label(i).to_string(), json!(atoms));
    }
    json!({ "values": map })
}

/// Contexts missing from the map get the zero projection.
pub fn open_from_json(j: &OpenJson, p: &Arc<ContextPoset>) -> Result<BohrOpen, IoError> {
    let mut values = vec![0u64; p.len()];
    for (label, atoms) in &j.values {
        let path = format!("values.{label}");
        let i = p.index_of(label).ok_or_else(|| IoError::at(&path, "unknown context"))?;
        for &a in atoms {
            if a >= p.context(i).len() {
                return Err(IoError::at(&path, format!("no atom {a}")));
            }
            values[i] |= 1 << a;
        }
    }
    BohrOpen::new(p.clone(), values).map_err(|e| IoError::at("values", e))
}

pub fn read_open(s: &str, p: &Arc<ContextPoset>) -> Result<BohrOpen, IoError> {
    open_from_json(&from_json_str(s)?, p)
}

pub fn truth_to_json(t: &TruthValue) -> Value {
    json!({ "contexts": t.labels, "upper_set": true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::{context_poset, pauli_context};
    use crate::dasein::{dasein_open, RatInterval};

    const ZX: &str = r#"{"contexts":[
        {"name":"C_z","atoms":[[[[1,0],[0,0]],[[0,0],[0,0]]],[[[0,0],[0,0]],[[0,0],[1,0]]]]},
        {"name":"C_x","atoms":[[[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]],[[[0.5,0],[-0.5,0]],[[-0.5,0],[0.5,0]]]]}
    ],"closure":"meets"}"#;

    #[test]
    fn family_roundtrip() {
        let p = read_family(ZX).unwrap();
        assert_eq!(p.labels(), ["ℂ", "C_z", "C_x"]);
        let back = family_from_json(&family_to_json(&p)).unwrap();
        assert_eq!(back.labels(), p.labels());
        assert!((0..3).all(|i| back.context(i).same_atoms(p.context(i))));
    }

    #[test]
    fn partition_family() {
        let s = r#"{"algebra":{"blocks":[3]},"contexts":[{"partition":[[0],[1,2]]},{"partition":[[0,1],[2]]}]}"#;
        let p = read_family(s).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.labels(), ["ℂ", "{0}{1,2}", "{0,1}{2}"]);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let err = |s: &str| match read_family(s) {
            Err(IoError::Schema { path, .. }) => path,
            other => panic!("{other:?}"),
        };
        assert_eq!(err(r#"{"contexts":[{"partition":[[0],[1]]}],"closure":"sometimes"}"#), "closure");
        assert_eq!(err(r#"{"contexts":[{"partition":[[0],["x"]]}]}"#), "contexts[0].partition[1][0]");
        assert_eq!(err(r#"{"contexts":[{"partition":[[0],[1]]},{}]}"#), "contexts[1]");
        assert_eq!(
            err(r#"{"contexts":[{"atoms":[[[[1,0],[0,0]],[[0,0]]]]}]}"#),
            "contexts[0].atoms[0][1]"
        );
        assert_eq!(err(r#"{"contexts":[{"partition":[[0],[1]],"extra":1}]}"#), "contexts[0].extra");
    }

    #[test]
    fn observable_and_state() {
        let a = read_observable(r#"{"algebra":{"blocks":[2]},"matrix":[[[1,0],[0,0]],[[0,0],[-1,0]]]}"#).unwrap();
        assert_eq!(observable_to_json(&a).matrix[1][1], [-1.0, 0.0]);
        assert!(matches!(
            read_observable(r#"{"algebra":{"blocks":[2]},"matrix":[[[1,0],[1,0]],[[0,0],[-1,0]]]}"#),
            Err(IoError::Schema { .. })
        ));
        let s = read_state(r#"{"matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#, None).unwrap();
        assert_eq!(s.algebra(), &MatrixAlg::full(2));
        assert!(read_state(r#"{"matrix":[[[2,0],[0,0]],[[0,0],[0,0]]]}"#, None).is_err());
    }

    #[test]
    fn measures_fill_in() {
        let p = Arc::new(read_family(ZX).unwrap());
        let s = r#"{"values":[{"projection":"C_z:[0]","p":1},{"projection":"C_z:[1]","p":0},
            {"projection":"C_x:[0]","p":0.5},{"projection":"C_x:[1]","p":0.5}]}"#;
        let mu = read_measure(s, &p).unwrap();
        assert_eq!(mu.value(0, 1), 1.0);
        assert_eq!(mu.value(1, 0b11), 1.0);
        assert!(mu.validate(1e-12).unwrap().passed());
        let back = read_measure(&serde_json::to_string(&measure_to_json(&mu)).unwrap(), &p).unwrap();
        assert_eq!(back.tables(), mu.tables());
        let missing = r#"{"values":[{"projection":"C_z:[0]","p":1}]}"#;
        assert!(matches!(read_measure(missing, &p), Err(IoError::Schema { .. })));
        let bad = r#"{"values":[{"projection":"C_q:[0]","p":1}]}"#;
        assert!(matches!(read_measure(bad, &p), Err(IoError::Schema { path, .. }) if path == "values[0].projection"));
    }

    #[test]
    fn measure_atoms_from_shared_projections() {
        let s = r#"{"algebra":{"blocks":[3]},"contexts":[{"partition":[[0],[1],[2]]},{"partition":[[0],[1,2]]}],"closure":"none"}"#;
        let p = Arc::new(read_family(s).unwrap());
        let m = r#"{"values":[{"projection":"{0}{1}{2}:[0]","p":0.2},{"projection":"{0}{1}{2}:[1]","p":0.3},
            {"projection":"{0}{1}{2}:[2]","p":0.5}]}"#;
        let mu = read_measure(m, &p).unwrap();
        let i = p.index_of("{0}{1,2}").unwrap();
        assert!((mu.value(i, 0b10) - 0.8).abs() < 1e-12);
        assert!(mu.validate(1e-12).unwrap().passed());
    }

    #[test]
    fn opens() {
        let p = Arc::new(context_poset(vec![pauli_context('z'), pauli_context('x')], Closure::Meets).unwrap());
        let a = HermObs::new(MatrixAlg::full(2), crate::cstar::pauli_z()).unwrap();
        let g = dasein_open(&a, &RatInterval::parse("1/2", "3/2").unwrap(), &p).unwrap();
        let v = open_to_json(&g);
        assert_eq!(v.to_string(), r#"{"values":{"ℂ":[],"C_z":[0],"C_x":[]}}"#);
        assert_eq!(read_open(&v.to_string(), &p).unwrap(), g);
        assert!(read_open(r#"{"values":{"ℂ":[0]}}"#, &p).is_err());
    }
}

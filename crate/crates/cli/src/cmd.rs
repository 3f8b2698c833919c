use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use bohrtop::bohr::{bohr_frame, BohrError};
use bohrtop::cstar::{
    context_poset, diagonal_contexts, pauli_context, random::random_context, young_sequences, Closure, Context,
    ContextPoset, CstarError,
};
use bohrtop::dasein::{dasein_open_tol, DaseinError, RatInterval};
use bohrtop::dot;
use bohrtop::io::{self, IoError};
use bohrtop::oml::{blocks, example_x, example_x_family, mono_heyting, Oml, OmlError, OmlJson};
use bohrtop::order::{FinLattice, FinPoset, OrderError, PosetJson};
use bohrtop::state::{cabello18_contexts, ks_search, truth_value_tol, KsOutcome, StateError};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Fixture, Opts};

const EXPECTED_HEYTING: u128 = 257;
const EXPECTED_DI: usize = 72;
/// Frames up to this size get the exhaustive Boolean and distributivity check.
const BOOLEAN_CHECK_LIMIT: u128 = 256;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("numerically ambiguous: {0}")]
    Numeric(String),
    #[error("{0}")]
    Property(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Property(_) => 1,
            Failure::Schema(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl From<CstarError> for Failure {
    fn from(e: CstarError) -> Self {
        match e {
            CstarError::DegenerateIntersection { .. } => Failure::Numeric(e.to_string()),
            e => Failure::Schema(e.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Cstar(e) => e.into(),
            IoError::State(e) => e.into(),
            IoError::Bohr(e) => e.into(),
            e @ IoError::Schema { .. } => Failure::Schema(e.to_string()),
        }
    }
}

impl From<StateError> for Failure {
    fn from(e: StateError) -> Self {
        match e {
            StateError::Cstar(e) => e.into(),
            StateError::Dasein(e) => e.into(),
            StateError::Bohr(e) => e.into(),
            e @ (StateError::NotUpperSet { .. } | StateError::InconsistentMeasure(_)) => Failure::Property(e.to_string()),
            e => Failure::Schema(e.to_string()),
        }
    }
}

impl From<DaseinError> for Failure {
    fn from(e: DaseinError) -> Self {
        match e {
            DaseinError::Cstar(e) => e.into(),
            DaseinError::Bohr(e) => e.into(),
            e => Failure::Schema(e.to_string()),
        }
    }
}

impl From<BohrError> for Failure {
    fn from(e: BohrError) -> Self {
        match e {
            BohrError::CapExceeded { .. } => Failure::Property(e.to_string()),
            e => Failure::Schema(e.to_string()),
        }
    }
}

impl From<OmlError> for Failure {
    fn from(e: OmlError) -> Self {
        match e {
            OmlError::CapExceeded { .. } | OmlError::Order(OrderError::CapExceeded { .. }) => {
                Failure::Property(e.to_string())
            }
            e => Failure::Schema(e.to_string()),
        }
    }
}

impl From<OrderError> for Failure {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::CapExceeded { .. } => Failure::Property(e.to_string()),
            e => Failure::Schema(e.to_string()),
        }
    }
}

/// What to print, and the property violation to report after printing it.
pub struct Report {
    pub out: String,
    pub violation: Option<String>,
}

impl Report {
    fn ok(out: String) -> Self {
        Self { out, violation: None }
    }

    fn json(v: &Value) -> Self {
        Self::ok(format!("{v}\n"))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))
}

fn family(path: &Path) -> Result<Arc<ContextPoset>, Failure> {
    Ok(Arc::new(io::read_family(&read(path)?)?))
}

fn interval(q: &str, r: &str) -> Result<RatInterval, Failure> {
    Ok(RatInterval::parse(q, r)?)
}

fn cap_usize(o: &Opts) -> usize {
    usize::try_from(o.cap).unwrap_or(usize::MAX)
}

pub fn examplex(o: &Opts, verify_adjunction: bool) -> Result<Report, Failure> {
    let h = mono_heyting(&example_x_family());
    let n_h = h.count(o.cap as u128)?;
    let x = example_x();
    let di = x.lattice().distributive_ideals(cap_usize(o))?;

    let mut mismatches = Vec::new();
    if n_h != EXPECTED_HEYTING {
        mismatches.push(format!("monotone Heyting algebra: expected {EXPECTED_HEYTING}, found {n_h}"));
    }
    if di.len() != EXPECTED_DI {
        mismatches.push(format!("distributive ideals: expected {EXPECTED_DI}, found {}", di.len()));
    }

    let mut adjunction = None;
    if verify_adjunction {
        let all = h.enumerate(o.cap as u128)?;
        let index: HashMap<&[u64], usize> = all.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let n = all.len();
        let table = |op: &dyn Fn(&[u64], &[u64]) -> Vec<u64>| -> Vec<usize> {
            let mut t = Vec::with_capacity(n * n);
            for a in &all {
                for b in &all {
                    t.push(index[op(a, b).as_slice()]);
                }
            }
            t
        };
        let meet = table(&|a, b| h.meet(a, b));
        let imp = table(&|a, b| h.implies(a, b));
        let leq: Vec<bool> = all.iter().flat_map(|a| all.iter().map(|b| h.leq(a, b))).collect();
        let mut failures = 0u64;
        for f in 0..n {
            for g in 0..n {
                for k in 0..n {
                    if leq[f * n + imp[g * n + k]] != leq[meet[f * n + g] * n + k] {
                        failures += 1;
                    }
                }
            }
        }
        if failures > 0 {
            mismatches.push(format!("Heyting adjunction fails on {failures} triples"));
        }
        adjunction = Some(((n as u64).pow(3), failures));
    }

    let out = if o.dot {
        let all = h.enumerate(o.cap as u128)?;
        let labels = all
            .iter()
            .map(|s| h.describe(s).into_iter().map(|(i, e)| format!("{i}:{e}")).collect::<Vec<_>>().join(" "))
            .collect();
        let hp = FinPoset::from_fn(labels, |i, j| h.leq(&all[i], &all[j]))?;
        let mut s = dot::poset_dot("monotone_heyting", &hp);
        s.push_str(&dot::lattice_dot("distributive_ideals", &di.to_lattice()));
        s
    } else if o.json {
        let mut v = json!({
            "monotone_heyting": n_h,
            "distributive_ideals": di.len(),
            "expected": { "monotone_heyting": EXPECTED_HEYTING, "distributive_ideals": EXPECTED_DI },
        });
        if let Some((triples, failures)) = adjunction {
            v["adjunction"] = json!({ "triples": triples, "failures": failures });
        }
        format!("{v}\n")
    } else {
        let mut s = format!("monotone Heyting algebra: {n_h}; distributive ideals: {}\n", di.len());
        if let Some((triples, failures)) = adjunction {
            s.push_str(&format!("Heyting adjunction: {triples} triples, {failures} failures\n"));
        }
        s
    };
    Ok(Report { out, violation: (!mismatches.is_empty()).then(|| mismatches.join("; ")) })
}

pub fn frame(o: &Opts, contexts: &Path) -> Result<Report, Failure> {
    let p = family(contexts)?;
    if o.dot {
        return Ok(Report::ok(dot::poset_dot("contexts", p.order())));
    }
    let f = bohr_frame(p.clone());
    let cap = o.cap as u128;
    let mut v = json!({
        "contexts": p.labels(),
        "covers": p.order().hasse_edges().iter().map(|&(a, b)| [p.label(a), p.label(b)]).collect::<Vec<_>>(),
    });
    match f.count(cap) {
        Ok(n) => {
            v["opens"] = json!(n);
            if n <= BOOLEAN_CHECK_LIMIT {
                let b = f.is_boolean(cap)?;
                v["boolean"] = json!(b.boolean);
                v["distributive"] = json!(b.distributive);
                v["witness"] = b.witness.as_ref().map(io::open_to_json).unwrap_or(Value::Null);
            }
        }
        Err(BohrError::CapExceeded { log2_lower, .. }) => {
            let from_bound = if log2_lower < 127.0 { 2f64.powf(log2_lower.floor()) as u128 } else { u128::MAX };
            v["opens"] = json!({ "at_least": from_bound.max(cap + 1), "cap": cap });
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Report::json(&v))
}

pub fn truth(o: &Opts, state: &Path, obs: &Path, q: &str, r: &str, contexts: &Path) -> Result<Report, Failure> {
    let iv = interval(q, r)?;
    let p = family(contexts)?;
    let a = io::read_observable(&read(obs)?)?;
    let s = io::read_state(&read(state)?, Some(p.algebra()))?;
    let t = truth_value_tol(&s, &a, &iv, &p, o.tol_eig, o.tol_truth)?;
    if o.dot {
        return Ok(Report::ok(dot::truth_dot("truth", &p, &t)));
    }
    Ok(Report::json(&io::truth_to_json(&t)))
}

pub fn dasein(o: &Opts, obs: &Path, q: &str, r: &str, contexts: &Path) -> Result<Report, Failure> {
    let iv = interval(q, r)?;
    let p = family(contexts)?;
    let a = io::read_observable(&read(obs)?)?;
    let g = dasein_open_tol(&a, &iv, &p, o.tol_eig)?;
    if o.dot {
        return Ok(Report::ok(dot::open_dot("dasein", &g)));
    }
    Ok(Report::json(&io::open_to_json(&g)))
}

pub fn ks(_o: &Opts, contexts: Option<&Path>, cabello: bool, diagonal: Option<usize>) -> Result<Report, Failure> {
    let (cs, labels): (Vec<Context>, Vec<String>) = match (contexts, cabello, diagonal) {
        (Some(path), _, _) => {
            let p = family(path)?;
            (p.contexts().to_vec(), p.labels().to_vec())
        }
        (None, true, _) => {
            let cs = cabello18_contexts()?;
            let labels = cs.iter().map(|c| c.name().unwrap_or_default().to_string()).collect();
            (cs, labels)
        }
        (None, false, Some(n)) => {
            let cs = diagonal_contexts(n);
            let labels = cs.iter().enumerate().map(|(i, c)| c.name().map_or_else(|| format!("C{i}"), str::to_string)).collect();
            (cs, labels)
        }
        (None, false, None) => return Err(Failure::Schema("one of --contexts, --cabello or --diagonal is required".into())),
    };
    let v = match ks_search(&cs)? {
        KsOutcome::Valuation { choice, nodes } => {
            let mut assignment = serde_json::Map::new();
            for (l, a) in labels.iter().zip(&choice) {
                assignment.insert(l.clone(), json!(a));
            }
            json!({ "contexts": cs.len(), "result": "valuation", "nodes": nodes, "assignment": assignment })
        }
        KsOutcome::NoValuation { nodes } => json!({ "contexts": cs.len(), "result": "no valuation", "nodes": nodes }),
    };
    Ok(Report::json(&v))
}

pub fn ctxgen(
    o: &Opts,
    diagonal: Option<usize>,
    random: Option<usize>,
    pauli: Option<&str>,
    count: usize,
    atoms: usize,
    closure: Closure,
) -> Result<Report, Failure> {
    let cs: Vec<Context> = match (diagonal, random, pauli) {
        (Some(n), _, _) => {
            if n == 0 || n > 12 {
                return Err(Failure::Schema(format!("--diagonal {n}: expected 1..=12")));
            }
            diagonal_contexts(n)
        }
        (_, Some(n), _) => {
            if n == 0 || atoms == 0 || atoms > n || count == 0 {
                return Err(Failure::Schema(format!("need 1 ≤ atoms ≤ n and count ≥ 1, got n = {n}, atoms = {atoms}, count = {count}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
            (0..count).map(|i| random_context(&mut rng, n, atoms).named(format!("R{i}"))).collect()
        }
        (_, _, Some(axes)) => {
            if let Some(bad) = axes.chars().find(|c| !"xyz".contains(*c)) {
                return Err(Failure::Schema(format!("--pauli: unknown axis {bad:?}")));
            }
            axes.chars().map(pauli_context).collect()
        }
        _ => return Err(Failure::Schema("one of --diagonal, --random or --pauli is required".into())),
    };
    if cs.is_empty() {
        return Err(Failure::Schema("empty family".into()));
    }
    let p = context_poset(cs, closure)?;
    if o.dot {
        return Ok(Report::ok(dot::poset_dot("contexts", p.order())));
    }
    let v = serde_json::to_value(io::family_to_json(&p)).expect("family serializes");
    Ok(Report::json(&v))
}

pub fn young(_o: &Opts, k: usize, n: usize) -> Result<Report, Failure> {
    Ok(Report::json(&json!(young_sequences(k, n))))
}

fn load_oml(input: Option<&Path>, example: Option<Fixture>) -> Result<Oml, Failure> {
    match (input, example) {
        (Some(p), _) => {
            let j: OmlJson = io::from_json_str(&read(p)?)?;
            Ok(Oml::from_json(&j)?)
        }
        (None, Some(Fixture::X)) => Ok(example_x()),
        (None, None) => Err(Failure::Schema("one of --input or --example is required".into())),
    }
}

pub fn oml_validate(_o: &Opts, input: Option<&Path>, example: Option<Fixture>) -> Result<Report, Failure> {
    let x = load_oml(input, example)?;
    let rep = bohrtop::oml::validate_oml(&x);
    let violations: Vec<Value> = rep
        .violations
        .iter()
        .map(|v| json!({ "law": format!("{:?}", v.law), "x": x.label(v.x), "y": v.y.map(|y| x.label(y)) }))
        .collect();
    let mut out = json!({ "elements": x.len(), "orthomodular": rep.passed(), "violations": violations });
    if rep.passed() {
        let b = blocks(&x)?;
        out["blocks"] = json!((0..b.len()).map(|i| b.block_elements(i).len()).collect::<Vec<_>>());
    }
    let violation = (!rep.passed()).then(|| format!("{} orthomodular law violations", rep.violations.len()));
    Ok(Report { out: format!("{out}\n"), violation })
}

pub fn bruns_lakser(o: &Opts, input: Option<&Path>, example: Option<Fixture>) -> Result<Report, Failure> {
    let l = match (input, example) {
        (Some(p), _) => {
            let j: PosetJson = io::from_json_str(&read(p)?)?;
            FinLattice::from_json(&j)?
        }
        (None, Some(Fixture::X)) => example_x().lattice().clone(),
        (None, None) => return Err(Failure::Schema("one of --input or --example is required".into())),
    };
    let di = l.distributive_ideals(cap_usize(o))?;
    if o.dot {
        return Ok(Report::ok(dot::lattice_dot("distributive_ideals", &di.to_lattice())));
    }
    Ok(Report::json(&json!({
        "elements": l.len(),
        "distributive": l.is_distributive(),
        "distributive_ideals": di.len(),
    })))
}

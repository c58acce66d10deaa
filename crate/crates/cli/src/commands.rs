//! Command implementations. Each returns a report value and an exit code;
//! printing is left to the binary.

use std::path::Path;

use nilborn::dense::BlockLu;
use nilborn::quasi::BoundWithheld;
use nilborn::scenarios::{classify_interference, InterferenceReport};
use nilborn::solver::identity_minus;
use nilborn::{
    analyze_acyclicity, bench, extract_graph, remainder_bound, AcyclicityReport, Amplitude,
    BornSonSystem, NormKind, StateVector, TransferOperator,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{complex, complex_vec, real};
use crate::system_file::{LoadedSystem, SpecError, SystemSpec, VectorFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CYCLIC: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    /// A structural condition (a cycle) that prevents the requested computation.
    #[error("{0}")]
    Cyclic(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Cyclic(_) => EXIT_CYCLIC,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<nilborn::Error> for CliError {
    fn from(e: nilborn::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome {
            report,
            warnings: Vec::new(),
            exit_code: EXIT_OK,
        }
    }
}

pub fn load_system(path: &Path) -> Result<LoadedSystem, CliError> {
    let spec = SystemSpec::from_path(path)?;
    Ok(spec.load()?)
}

fn one_based(vs: &[usize]) -> Value {
    json!(vs.iter().map(|v| v + 1).collect::<Vec<_>>())
}

fn cycle_text(cycle: &[usize]) -> String {
    let mut parts: Vec<String> = cycle.iter().map(|v| (v + 1).to_string()).collect();
    if let Some(first) = cycle.first() {
        parts.push((first + 1).to_string());
    }
    parts.join(" -> ")
}

fn edges_json(t: &TransferOperator) -> Value {
    let g = extract_graph(t);
    Value::Array(
        g.edges()
            .map(|(i, j, z)| json!({ "from": i + 1, "to": j + 1, "re": z.re, "im": z.im }))
            .collect(),
    )
}

fn norms_json(t: &TransferOperator) -> Value {
    let mut map = serde_json::Map::new();
    for kind in NormKind::ALL {
        map.insert(kind.name().to_string(), real(t.norm(kind)));
    }
    Value::Object(map)
}

pub fn analyze(system: &LoadedSystem) -> Outcome {
    let t = &system.transfer;
    let report = analyze_acyclicity(&extract_graph(t));
    let det = BlockLu::new(&identity_minus(t)).determinant();
    let mut out = json!({
        "dimension": t.dim(),
        "basis_labels": system.spec.basis_labels,
        "is_acyclic": report.is_acyclic(),
        "edges": edges_json(t),
        "det_I_minus_T": complex(det),
        "norms": norms_json(t),
    });
    let obj = out.as_object_mut().expect("object literal");
    let exit_code = match &report {
        AcyclicityReport::Acyclic {
            topological_order,
            depth,
        } => {
            obj.insert("depth".into(), json!(depth));
            obj.insert("term_count".into(), json!(depth + 1));
            obj.insert("topological_order".into(), one_based(topological_order));
            EXIT_OK
        }
        AcyclicityReport::Cyclic { witness_cycle } => {
            obj.insert("witness_cycle".into(), one_based(witness_cycle));
            EXIT_CYCLIC
        }
    };
    let mut outcome = Outcome::ok(out);
    outcome.exit_code = exit_code;
    if let Some(cycle) = report.witness_cycle() {
        outcome
            .warnings
            .push(format!("transition graph is cyclic: {}", cycle_text(cycle)));
    }
    outcome
}

/// `--phi` is either a 1-based basis index or a path to a vector file.
pub fn parse_phi(arg: &str, dim: usize) -> Result<StateVector, CliError> {
    if let Ok(index) = arg.trim().parse::<usize>() {
        if index == 0 || index > dim {
            return Err(CliError::Input(format!(
                "--phi {index} is outside 1..={dim}"
            )));
        }
        return Ok(StateVector::basis(dim, index - 1)?);
    }
    let file = VectorFile::from_path(Path::new(arg))?;
    if file.amplitudes.len() != dim {
        return Err(CliError::Input(format!(
            "vector file {arg} has {} amplitudes, expected {dim}",
            file.amplitudes.len()
        )));
    }
    StateVector::new(file.amplitudes.into_iter().map(Amplitude::from).collect())
        .map_err(|e| CliError::Input(format!("vector file {arg}: {e}")))
}

fn term_rows(terms: &[StateVector]) -> Value {
    Value::Array(
        terms
            .iter()
            .enumerate()
            .map(|(k, v)| json!({ "k": k, "amplitudes": complex_vec(v.iter()) }))
            .collect(),
    )
}

fn fmt_complex(z: Amplitude) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{z}")
    }
}

pub fn solve(
    system: &LoadedSystem,
    phi: &StateVector,
    order: Option<usize>,
    kind: NormKind,
) -> Result<Outcome, CliError> {
    let t = &system.transfer;
    let structure = analyze_acyclicity(&extract_graph(t));
    let Some(order) = order else {
        let sys = match BornSonSystem::new(t.clone()) {
            Ok(sys) => sys,
            Err(nilborn::Error::NotNilpotent { cycle }) => {
                return Err(CliError::Cyclic(format!(
                    "transition graph has a cycle ({}), so the Born series does not terminate; \
                     pass --order N to get the truncated sum with its remainder report",
                    cycle_text(&cycle)
                )))
            }
            Err(e) => return Err(e.into()),
        };
        let expansion = sys.solve_exact(phi)?;
        return Ok(Outcome::ok(json!({
            "dimension": t.dim(),
            "phi": complex_vec(phi.iter()),
            "depth": sys.depth(),
            "term_count": expansion.term_count(),
            "terms": term_rows(&expansion.terms),
            "total": complex_vec(expansion.total.iter()),
        })));
    };

    let mut terms = vec![phi.clone()];
    for _ in 0..order {
        let next = t.matvec(terms.last().expect("non-empty"))?;
        terms.push(next);
    }
    let mut partial = StateVector::zeros(t.dim());
    for term in &terms {
        partial = partial.add(term)?;
    }
    let truncation = remainder_bound(t, phi, order, kind)?;

    let mut warnings = Vec::new();
    if let AcyclicityReport::Acyclic { depth, .. } = &structure {
        if order < *depth {
            let sys = BornSonSystem::new(t.clone())?;
            let exact = sys.solve_exact(phi)?;
            for state in 0..t.dim() {
                if partial[state] != Amplitude::new(0.0, 0.0) || exact.total[state].norm() == 0.0 {
                    continue;
                }
                let Some(first) = (order + 1..exact.terms.len())
                    .find(|&k| exact.terms[k][state] != Amplitude::new(0.0, 0.0))
                else {
                    continue;
                };
                let omitted = if order + 1 == *depth {
                    format!("the k = {depth} term")
                } else {
                    format!("terms k = {}..={depth}", order + 1)
                };
                warnings.push(format!(
                    "order {order} omits {omitted}: state {} has amplitude 0 in the \
                     partial sum but {} in the exact solution; it is first reached by the k = {first} term",
                    system.spec.label(state),
                    fmt_complex(exact.total[state]),
                ));
            }
        }
    }
    if truncation.exact_remainder_norm.is_none() {
        warnings.push("I - T is singular: the exact remainder is undefined".into());
    }

    let report = json!({
        "dimension": t.dim(),
        "phi": complex_vec(phi.iter()),
        "is_acyclic": structure.is_acyclic(),
        "depth": structure.depth(),
        "order": order,
        "terms": term_rows(&terms),
        "partial_sum": complex_vec(partial.iter()),
        "truncation": {
            "norm": kind.name(),
            "operator_norm": real(truncation.operator_norm),
            "defect_norm": real(truncation.defect_norm),
            "phi_norm": real(truncation.phi_norm),
            "exact_remainder_norm": truncation.exact_remainder_norm.map(real),
            "bound": truncation.bound.map(real),
            "bound_withheld": truncation.bound_withheld.map(|w| match w {
                BoundWithheld::NormNotBelowOne => "operator norm is not below 1",
            }),
            "quasi_nilpotent": truncation.quasi_nilpotent,
        },
        "warnings": warnings,
    });
    Ok(Outcome {
        report,
        warnings,
        exit_code: EXIT_OK,
    })
}

fn edge_list(t: &TransferOperator) -> String {
    let edges: Vec<String> = extract_graph(t)
        .edges()
        .map(|(i, j, _)| format!("{}->{}", i + 1, j + 1))
        .collect();
    if edges.is_empty() {
        "none".into()
    } else {
        edges.join(", ")
    }
}

pub fn interference_json(r: &InterferenceReport) -> Value {
    json!({
        "regime": r.regime.name(),
        "a4": complex(r.a4),
        "a4_born1": complex(r.a4_born1),
        "path_contributions": r.path_contributions.iter().map(|p| json!({
            "path": one_based(&p.path),
            "amplitude": complex(p.amplitude),
        })).collect::<Vec<_>>(),
        "relative_error_born1": match r.relative_error_born1 {
            Some(e) => real(e),
            None => json!("undefined (A4 = 0)"),
        },
    })
}

pub fn classify(system: &LoadedSystem) -> Result<Outcome, CliError> {
    let t = &system.transfer;
    let topology_error = || {
        CliError::Input(format!(
            "classify needs the diamond topology 1->2, 1->3, 2->4, 3->4; found edges: {}",
            edge_list(t)
        ))
    };
    let sys = match BornSonSystem::new(t.clone()) {
        Ok(sys) => sys,
        Err(nilborn::Error::NotNilpotent { .. }) => return Err(topology_error()),
        Err(e) => return Err(e.into()),
    };
    match classify_interference(&sys) {
        Ok(r) => Ok(Outcome::ok(interference_json(&r))),
        Err(nilborn::Error::Topology { .. }) => Err(topology_error()),
        Err(e) => Err(e.into()),
    }
}

pub fn run_bench(dim: usize, density: f64, seed: u64) -> Result<Outcome, CliError> {
    let r = bench::run_benchmark(bench::BenchConfig { dim, density, seed })?;
    Ok(Outcome::ok(json!({
        "dim": r.config.dim,
        "density": r.config.density,
        "seed": r.config.seed,
        "edges": r.edges,
        "depth": r.depth,
        "born_seconds": real(r.born_seconds),
        "lu_seconds": real(r.lu_seconds),
        "speedup": real(r.speedup),
        "relative_difference": real(r.relative_difference),
    })))
}

pub const SCENARIOS: [(&str, &str); 3] = [
    ("cascade", include_str!("../fixtures/cascade3.spec")),
    ("diamond", include_str!("../fixtures/diamond.spec")),
    (
        "double-diamond",
        include_str!("../fixtures/double-diamond.spec"),
    ),
];

pub fn scenario_text(name: &str) -> Result<&'static str, CliError> {
    SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            CliError::Input(format!(
                "unknown scenario `{name}`; expected cascade, diamond or double-diamond"
            ))
        })
}

//! The `units` command: certify a chain for one component-realizing pair,
//! construct its complete set of matrix units, verify every defining
//! relation exactly, and write the result as JSON plus a human summary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use wedderburn_core::shoda::{
    find_strong_chain, is_shoda_pair, verify_strong_chain, ChainSearch, GsspCertificate,
};
use wedderburn_core::{
    component_matrix_units, ComponentUnits, DecisionConfig, OracleVerdict, PrimeIndexError,
    Subgroup, UnitsConfig, UnitsError,
};

use crate::analyze::{describe_subfield, describe_verdict, describe_witness};
use crate::fail::{CliResult, Failure};
use crate::json::{describe_provenance, unit_set_to_json, GroupStampJson};
use crate::source::{component_key, join_indices, sanitize, subgroup_from_indices, LoadedGroup};

pub struct UnitsRequest<'a> {
    pub lg: &'a LoadedGroup,
    pub h_indices: Vec<u32>,
    pub k_indices: Option<Vec<u32>>,
    pub chain_indices: Option<Vec<Vec<u32>>>,
    pub seed: u64,
    pub height: u32,
    pub subgroup_budget: usize,
    pub oracle: Option<BTreeMap<String, OracleVerdict>>,
    pub out_dir: PathBuf,
    pub json_output: bool,
}

#[derive(Serialize)]
pub struct UnitsSummary {
    pub group: GroupStampJson,
    pub h: Vec<u32>,
    pub k: Vec<u32>,
    pub chain_orders: Vec<u32>,
    pub matrix_size: u32,
    pub field_degree: u32,
    pub center: String,
    pub center_degree: usize,
    pub verdict: String,
    pub witness: String,
    pub schur_index: u64,
    pub n: usize,
    pub unit_count: usize,
    pub idempotent_count: usize,
    pub corner_dimension: usize,
    pub construction: String,
    pub seed: u64,
    pub units_file: String,
    pub verified: bool,
}

#[derive(Serialize)]
struct PartialReport {
    group: GroupStampJson,
    h: Vec<u32>,
    k: Vec<u32>,
    chain_orders: Vec<u32>,
    matrix_size: u32,
    field_degree: u32,
    status: String,
    notes: Vec<String>,
}

fn artifact_base(lg: &LoadedGroup, h_indices: &[u32], k_indices: &Option<Vec<u32>>) -> String {
    let h = h_indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("_");
    let k = match k_indices {
        Some(idx) => idx
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join("_"),
        None => String::from("triv"),
    };
    sanitize(&format!("{}-H{}-K{}", lg.name, h, k))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn certify(req: &UnitsRequest, h: &Subgroup, k: &Subgroup, generator: u32) -> CliResult<GsspCertificate> {
    let group = &req.lg.group;
    if let Some(levels) = &req.chain_indices {
        let mut chain = Vec::with_capacity(levels.len());
        for (i, level) in levels.iter().enumerate() {
            chain.push(subgroup_from_indices(group, &format!("--chain level {i}"), level)?);
        }
        return verify_strong_chain(group, h, k, generator, &chain)
            .map_err(|e| Failure::input(format!("supplied chain rejected: {e}")));
    }
    match find_strong_chain(group, h, k, generator, req.subgroup_budget) {
        ChainSearch::Found(cert) => Ok(cert),
        ChainSearch::NoChain { complete: true } => Err(Failure::input(
            "no certifying chain exists for this pair among the subgroups above H",
        )),
        ChainSearch::NoChain { complete: false } => Err(Failure::budget(
            "no certifying chain found within the subgroup budget; raise --subgroup-budget",
        )),
        ChainSearch::NotShoda(f) => Err(Failure::input(format!(
            "(H, K) is not a component-realizing pair: {f}"
        ))),
    }
}

pub fn run_units(req: &UnitsRequest) -> CliResult<()> {
    let group = &req.lg.group;
    let h = subgroup_from_indices(group, "--subgroup-H", &req.h_indices)?;
    let k = match &req.k_indices {
        Some(idx) => subgroup_from_indices(group, "--subgroup-K", idx)?,
        None => group.trivial_subgroup(),
    };
    if let Err(f) = is_shoda_pair(group, &h, &k) {
        return Err(Failure::input(format!(
            "(H, K) is not a component-realizing pair: {f}"
        )));
    }
    let generator = h
        .quotient_cyclic_generator(group, &k)
        .expect("cyclic quotient was just checked");
    let cert = certify(req, &h, &k, generator)?;

    std::fs::create_dir_all(&req.out_dir)
        .map_err(|e| Failure::input(format!("cannot create {}: {e}", req.out_dir.display())))?;
    let base = artifact_base(req.lg, &req.h_indices, &req.k_indices);

    let decision = DecisionConfig {
        height_budget: req.height,
        probe_budget: 16,
        seed: req.seed,
        oracle: req.oracle.clone(),
        component_key: Some(component_key(&req.lg.name, &h, &k)),
    };
    let mut config = UnitsConfig::new(req.seed);
    config.decision = decision;

    let stamp = GroupStampJson {
        name: req.lg.name.clone(),
        order: group.order(),
    };

    match component_matrix_units(group, &cert, &config) {
        Ok(cu) => {
            let units_path = req.out_dir.join(format!("{base}-units.json"));
            let set_json = unit_set_to_json(&req.lg.name, group, &cu.component_units);
            let mut encoded = serde_json::to_string_pretty(&set_json)
                .expect("matrix-unit serialization cannot fail");
            encoded.push('\n');
            write_file(&units_path, &encoded)?;

            let summary = build_summary(req, &stamp, &cert, &cu, &units_path);
            let summary_path = req.out_dir.join(format!("{base}-summary.txt"));
            let text = render_summary_text(&summary);
            write_file(&summary_path, &text)?;

            if req.json_output {
                let mut s = serde_json::to_string_pretty(&summary)
                    .expect("summary serialization cannot fail");
                s.push('\n');
                print!("{s}");
            } else {
                print!("{text}");
            }
            Ok(())
        }
        Err(err) => handle_units_error(req, &stamp, &cert, &base, err),
    }
}

fn build_summary(
    req: &UnitsRequest,
    stamp: &GroupStampJson,
    cert: &GsspCertificate,
    cu: &ComponentUnits,
    units_path: &Path,
) -> UnitsSummary {
    let center = cu.presentation.pres.center();
    let n = cu.component_units.n();
    UnitsSummary {
        group: GroupStampJson {
            name: stamp.name.clone(),
            order: stamp.order,
        },
        h: cert.h.members().to_vec(),
        k: cert.k.members().to_vec(),
        chain_orders: cert.chain.iter().map(|s| s.order()).collect(),
        matrix_size: cert.matrix_size,
        field_degree: cert.field_degree,
        center: describe_subfield(center),
        center_degree: center.degree(),
        verdict: describe_verdict(&cu.decision.verdict),
        witness: describe_witness(&cu.decision.witness),
        schur_index: cu.index,
        n,
        unit_count: n * n,
        idempotent_count: n,
        corner_dimension: (cu.index * cu.index) as usize * center.degree(),
        construction: describe_provenance(cu.component_units.provenance()),
        seed: req.seed,
        units_file: units_path.display().to_string(),
        verified: true,
    }
}

fn render_summary_text(s: &UnitsSummary) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "component of Q[{}] (group order {})\n",
        s.group.name, s.group.order
    ));
    out.push_str(&format!(
        "H = {{{}}} (order {}), K = {{{}}} (order {})\n",
        join_indices(&s.h),
        s.h.len(),
        join_indices(&s.k),
        s.k.len()
    ));
    let orders = s
        .chain_orders
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join(" <= ");
    out.push_str(&format!(
        "chain orders: {orders}; matrix size k = {}, field degree = {}\n",
        s.matrix_size, s.field_degree
    ));
    out.push_str(&format!(
        "center: {} (degree {} over Q)\n",
        s.center, s.center_degree
    ));
    out.push_str(&format!(
        "Schur verdict: {} — {}\n",
        s.verdict, s.witness
    ));
    out.push_str(&format!("Schur index: {}\n", s.schur_index));
    out.push_str(&format!(
        "matrix units: n = {} ({} units, {} primitive orthogonal idempotents)\n",
        s.n, s.unit_count, s.idempotent_count
    ));
    out.push_str(&format!(
        "corner dimension over Q: {}\n",
        s.corner_dimension
    ));
    out.push_str(&format!("construction: {}\n", s.construction));
    out.push_str(&format!(
        "verification: all exact relations hold (seed {})\n",
        s.seed
    ));
    out.push_str(&format!("wrote {}\n", s.units_file));
    out
}

fn handle_units_error(
    req: &UnitsRequest,
    stamp: &GroupStampJson,
    cert: &GsspCertificate,
    base: &str,
    err: UnitsError,
) -> CliResult<()> {
    let (status, notes) = match &err {
        UnitsError::Undecided { notes } => (String::from("undecided"), notes.clone()),
        UnitsError::TrivializationUnavailable => (
            String::from("undecided"),
            vec![String::from(
                "the split verdict came without explicit trivializing multipliers, \
                 which the construction needs",
            )],
        ),
        UnitsError::Prime(PrimeIndexError::Unknown { stage }) => (
            String::from("undecided"),
            vec![format!("prime-index construction stopped: {stage}")],
        ),
        other => {
            return Err(Failure::verification(format!(
                "matrix-unit construction failed: {other}"
            )))
        }
    };
    let partial = PartialReport {
        group: GroupStampJson {
            name: stamp.name.clone(),
            order: stamp.order,
        },
        h: cert.h.members().to_vec(),
        k: cert.k.members().to_vec(),
        chain_orders: cert.chain.iter().map(|s| s.order()).collect(),
        matrix_size: cert.matrix_size,
        field_degree: cert.field_degree,
        status,
        notes: notes.clone(),
    };
    let path = req.out_dir.join(format!("{base}-partial.json"));
    let mut encoded =
        serde_json::to_string_pretty(&partial).expect("partial report serialization cannot fail");
    encoded.push('\n');
    write_file(&path, &encoded)?;
    println!(
        "component certified (chain orders {}, k = {}, field degree = {}), but the Schur \
         index question was not settled within budget:",
        partial
            .chain_orders
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(" <= "),
        partial.matrix_size,
        partial.field_degree
    );
    for note in &notes {
        println!("  - {note}");
    }
    println!("partial report written to {}", path.display());
    Err(Failure::budget(
        "Schur index undecided within budget; partial artifacts were written",
    ))
}

//! The `analyze` command: enumerate component-realizing subgroup pairs,
//! search a certifying chain for each, and decide every component's Schur
//! index, reporting the evidence.

use std::collections::BTreeMap;

use serde::Serialize;
use wedderburn_core::shoda::{enumerate_shoda_pairs, find_strong_chain, ChainSearch};
use wedderburn_core::{
    build_presentation, schur_decision, DecisionConfig, OracleVerdict, SchurVerdict, SchurWitness,
    SubfieldDescriptor,
};

use crate::json::GroupStampJson;
use crate::source::{component_key, LoadedGroup};

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub group: GroupStampJson,
    pub seed: u64,
    pub subgroup_budget: usize,
    pub enumeration_complete: bool,
    pub dimension_sum: u32,
    pub components: Vec<ComponentEntry>,
}

#[derive(Serialize)]
pub struct ComponentEntry {
    pub h: Vec<u32>,
    pub k: Vec<u32>,
    pub quotient_generator: u32,
    pub quotient_order: u32,
    pub dimension: u32,
    pub chain: Option<ChainEntry>,
    pub chain_search_complete: bool,
    pub decision: Option<DecisionEntry>,
}

#[derive(Serialize)]
pub struct ChainEntry {
    pub subgroup_orders: Vec<u32>,
    pub subgroups: Vec<Vec<u32>>,
    pub matrix_size: u32,
    pub field_degree: u32,
}

#[derive(Serialize)]
pub struct DecisionEntry {
    pub center: Option<CenterEntry>,
    pub verdict: String,
    pub witness: String,
}

#[derive(Serialize)]
pub struct CenterEntry {
    pub conductor: u64,
    pub degree: usize,
    pub description: String,
}

pub fn describe_subfield(f: &SubfieldDescriptor) -> String {
    if f.degree() == 1 {
        String::from("Q")
    } else if f.stabilizer() == [1] {
        format!("Q(zeta_{})", f.conductor())
    } else {
        let stab = f
            .stabilizer()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "fixed field of exponents {{{stab}}} in Q(zeta_{})",
            f.conductor()
        )
    }
}

pub fn describe_witness(w: &SchurWitness) -> String {
    match w {
        SchurWitness::TrivializedUnits { .. } => {
            String::from("factor set trivialized by explicit unit rescaling")
        }
        SchurWitness::SplitIdempotent { corner_dim, .. } => {
            format!("nontrivial idempotent with corner dimension {corner_dim}")
        }
        SchurWitness::Ramification { signs, .. } => format!(
            "generator power scalar norm-rescaled to -1 over a totally real center \
             ({} real embeddings checked)",
            signs.len()
        ),
        SchurWitness::OracleOverride { key } => format!("external oracle entry {key:?}"),
        SchurWitness::Inconclusive { notes } => format!("inconclusive: {}", notes.join("; ")),
    }
}

pub fn describe_verdict(v: &SchurVerdict) -> String {
    match v {
        SchurVerdict::Split => String::from("split"),
        SchurVerdict::Prime(p) => format!("prime {p}"),
        SchurVerdict::Unknown => String::from("unknown"),
    }
}

/// Runs the full analysis. The second return value tells whether every
/// question was settled within budget (complete enumeration, every chain
/// search conclusive, every verdict decided).
pub fn run_analyze(
    lg: &LoadedGroup,
    seed: u64,
    height: u32,
    subgroup_budget: usize,
    oracle: Option<&BTreeMap<String, OracleVerdict>>,
) -> (AnalyzeReport, bool) {
    let group = &lg.group;
    let (records, enumeration_complete) = enumerate_shoda_pairs(group, subgroup_budget);
    let mut components = Vec::with_capacity(records.len());
    let mut settled = enumeration_complete;
    let mut dimension_sum = 0u32;
    for rec in &records {
        dimension_sum += rec.dimension;
        let quotient_order = rec.h.order() / rec.k.order();
        let mut entry = ComponentEntry {
            h: rec.h.members().to_vec(),
            k: rec.k.members().to_vec(),
            quotient_generator: rec.generator,
            quotient_order,
            dimension: rec.dimension,
            chain: None,
            chain_search_complete: true,
            decision: None,
        };
        match find_strong_chain(group, &rec.h, &rec.k, rec.generator, subgroup_budget) {
            ChainSearch::Found(cert) => {
                entry.chain = Some(ChainEntry {
                    subgroup_orders: cert.chain.iter().map(|s| s.order()).collect(),
                    subgroups: cert.chain.iter().map(|s| s.members().to_vec()).collect(),
                    matrix_size: cert.matrix_size,
                    field_degree: cert.field_degree,
                });
                let config = DecisionConfig {
                    height_budget: height,
                    probe_budget: 16,
                    seed,
                    oracle: oracle.cloned(),
                    component_key: Some(component_key(&lg.name, &rec.h, &rec.k)),
                };
                let decision = match build_presentation(group, &cert, seed) {
                    Ok(cp) => {
                        let d = schur_decision(group, &cp.pres, &config);
                        if d.verdict == SchurVerdict::Unknown {
                            settled = false;
                        }
                        DecisionEntry {
                            center: Some(CenterEntry {
                                conductor: cp.pres.center().conductor(),
                                degree: cp.pres.center().degree(),
                                description: describe_subfield(cp.pres.center()),
                            }),
                            verdict: describe_verdict(&d.verdict),
                            witness: describe_witness(&d.witness),
                        }
                    }
                    Err(e) => {
                        settled = false;
                        DecisionEntry {
                            center: None,
                            verdict: String::from("unknown"),
                            witness: format!("presentation construction failed: {e}"),
                        }
                    }
                };
                entry.decision = Some(decision);
            }
            ChainSearch::NoChain { complete } => {
                entry.chain_search_complete = complete;
                if !complete {
                    settled = false;
                }
            }
            ChainSearch::NotShoda(_) => {
                unreachable!("enumerated pairs satisfy the component-realizing conditions")
            }
        }
        components.push(entry);
    }
    let report = AnalyzeReport {
        group: GroupStampJson {
            name: lg.name.clone(),
            order: group.order(),
        },
        seed,
        subgroup_budget,
        enumeration_complete,
        dimension_sum,
        components,
    };
    (report, settled)
}

fn fmt_members(members: &[u32]) -> String {
    if members.len() <= 16 {
        let inner = members
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("{{{inner}}}")
    } else {
        format!("<order {}>", members.len())
    }
}

/// Human-readable rendering of the analysis report.
pub fn render_text(report: &AnalyzeReport, generator_names: &[(String, u32)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "group {} (order {}), seed {}\n",
        report.group.name, report.group.order, report.seed
    ));
    if !generator_names.is_empty() {
        let gens = generator_names
            .iter()
            .map(|(n, i)| format!("{n}={i}"))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("generators: {gens}\n"));
    }
    out.push_str(&format!(
        "subgroup enumeration: {} (budget {})\n",
        if report.enumeration_complete {
            "complete"
        } else {
            "TRUNCATED BY BUDGET"
        },
        report.subgroup_budget
    ));
    out.push_str(&format!(
        "components: {} found, total dimension {} of {}\n",
        report.components.len(),
        report.dimension_sum,
        report.group.order
    ));
    for (i, c) in report.components.iter().enumerate() {
        out.push_str(&format!(
            "[{}] dimension {}\n    H = {} (order {}), K = {} (order {}), quotient order {} (generator {})\n",
            i + 1,
            c.dimension,
            fmt_members(&c.h),
            c.h.len(),
            fmt_members(&c.k),
            c.k.len(),
            c.quotient_order,
            c.quotient_generator
        ));
        match &c.chain {
            Some(chain) => {
                let orders = chain
                    .subgroup_orders
                    .iter()
                    .map(|o| o.to_string())
                    .collect::<Vec<_>>()
                    .join(" <= ");
                out.push_str(&format!(
                    "    chain orders: {orders}; matrix size k = {}, field degree = {}\n",
                    chain.matrix_size, chain.field_degree
                ));
            }
            None => {
                out.push_str(&format!(
                    "    no certifying chain ({})\n",
                    if c.chain_search_complete {
                        "none exists among the enumerated subgroups"
                    } else {
                        "search truncated by the subgroup budget"
                    }
                ));
            }
        }
        if let Some(d) = &c.decision {
            if let Some(center) = &d.center {
                out.push_str(&format!(
                    "    center: {} (degree {}, conductor {})\n",
                    center.description, center.degree, center.conductor
                ));
            }
            out.push_str(&format!("    verdict: {} — {}\n", d.verdict, d.witness));
        }
    }
    out
}

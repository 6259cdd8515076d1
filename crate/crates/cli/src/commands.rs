use std::fs;

use kphi_core::geometry::{GeometryError, RationalCoordMap};
use kphi_core::{
    build_f, build_gadget, build_reduction, build_torus, check_extension_parity, deleted_product_capped, lk2_seeded,
    moment_coords, read_dimacs, seeded_coords, simplicial_betti, van_kampen_number, CnfError, ComplexError,
    GadgetError, GadgetParams, PLCycle, SimplicialComplex,
};
use serde_json::{json, Value};

use crate::{
    Command, CoordSource, DeletedProductArgs, Failure, GadgetArgs, GadgetKind, HomologyArgs, Lk2Args, ParityArgs,
    ReduceArgs, SatArgs, VkArgs,
};

pub fn run(command: &Command) -> Result<Value, Failure> {
    match command {
        Command::Reduce(a) => reduce(a),
        Command::Gadget(a) => gadget(a),
        Command::Stats(a) => stats(&load_complex(&a.file)?),
        Command::Homology(a) => homology(a),
        Command::DeletedProduct(a) => deleted(a),
        Command::Vk(a) => vk(a),
        Command::CheckParity(a) => parity(a),
        Command::Lk2(a) => linking(a),
        Command::Sat(a) => sat(a),
        Command::Verify(a) => crate::verify::run(a.suite),
    }
}

fn load_complex(path: &str) -> Result<SimplicialComplex, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    SimplicialComplex::from_json_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn write_complex(path: &str, k: &SimplicialComplex) -> Result<(), Failure> {
    fs::write(path, k.to_json_string() + "\n").map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn params(k: usize, ell: usize, theorem_regime: bool) -> Result<GadgetParams, Failure> {
    let p = GadgetParams::new(k, ell).map_err(|e| Failure::Usage(e.to_string()))?;
    if theorem_regime {
        p.require_theorem_regime().map_err(|e| Failure::Precondition(e.to_string()))?;
    }
    Ok(p)
}

fn gadget_failure(e: GadgetError) -> Failure {
    match e {
        GadgetError::Complex(c) => Failure::Invariant(c.to_string()),
        other => Failure::Precondition(other.to_string()),
    }
}

fn complex_failure(e: ComplexError) -> Failure {
    match e {
        ComplexError::UnknownMark(_) => Failure::Precondition(e.to_string()),
        other => Failure::Invariant(other.to_string()),
    }
}

fn geometry_failure(e: GeometryError) -> Failure {
    match e {
        GeometryError::RetryBudgetExhausted { .. } | GeometryError::ApexBudgetExhausted(_) => {
            Failure::Invariant(e.to_string())
        }
        GeometryError::Complex(c) => complex_failure(c),
        other => Failure::Precondition(other.to_string()),
    }
}

fn cnf_failure(path: &str, e: CnfError) -> Failure {
    match e {
        CnfError::ClauseTooWide { .. } | CnfError::TooManyVariables { .. } => Failure::Precondition(e.to_string()),
        other => Failure::Input(format!("{path}: {other}")),
    }
}

fn read_cnf(path: &str) -> Result<kphi_core::CnfFormula, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    read_dimacs(file).map_err(|e| cnf_failure(path, e))
}

fn summary(k: &SimplicialComplex) -> Value {
    json!({
        "name": k.name(),
        "dimension": k.dim(),
        "f_vector": k.f_vector(),
        "num_faces": k.num_faces(),
    })
}

fn reduce(a: &ReduceArgs) -> Result<Value, Failure> {
    let ell = match a.ell {
        Some(ell) => ell,
        None if a.k.is_multiple_of(2) => a.k / 2,
        None => return Err(Failure::Usage(format!("--ell is required for odd k = {}", a.k))),
    };
    let p = params(a.k, ell, a.theorem_regime)?;
    let phi = read_cnf(&a.cnf)?.normalize().map_err(|e| cnf_failure(&a.cnf, e))?;
    let conflicts = phi.conflict_pairs().len();
    let k = build_reduction(&phi, p).map_err(gadget_failure)?;
    write_complex(&a.out, &k)?;
    let mut out = summary(&k);
    out["k"] = json!(a.k);
    out["ell"] = json!(ell);
    out["ambient_dim"] = json!(p.ambient_dim());
    out["num_clauses"] = json!(phi.num_clauses());
    out["num_tori"] = json!(conflicts);
    out["output"] = json!(a.out);
    Ok(out)
}

fn gadget(a: &GadgetArgs) -> Result<Value, Failure> {
    let k = match a.kind {
        GadgetKind::Torus => build_torus(a.ell).map_err(gadget_failure)?,
        GadgetKind::F | GadgetKind::G => {
            let k = a.k.ok_or_else(|| Failure::Usage("--k is required for F and G".into()))?;
            let p = params(k, a.ell, a.theorem_regime)?;
            if matches!(a.kind, GadgetKind::F) {
                build_f(p)
            } else {
                build_gadget(p, a.width).map_err(|e| match e {
                    GadgetError::InvalidWidth(_) => Failure::Usage(e.to_string()),
                    other => gadget_failure(other),
                })?
            }
        }
    };
    let mut out = summary(&k);
    match &a.out {
        Some(path) => {
            write_complex(path, &k)?;
            out["output"] = json!(path);
        }
        None => out["complex"] = serde_json::to_value(k.to_json()).expect("complex serializes"),
    }
    Ok(out)
}

fn stats(k: &SimplicialComplex) -> Result<Value, Failure> {
    let marks: serde_json::Map<String, Value> = k
        .marks()
        .iter()
        .map(|(name, list)| {
            let dim = list.iter().map(|s| s.dim()).max();
            (name.clone(), json!({ "simplices": list.len(), "dimension": dim }))
        })
        .collect();
    let mut out = summary(k);
    out["num_vertices"] = json!(k.num_vertices());
    out["euler_characteristic"] = json!(k.euler_characteristic());
    out["marks"] = Value::Object(marks);
    Ok(out)
}

fn homology(a: &HomologyArgs) -> Result<Value, Failure> {
    let k = load_complex(&a.file)?;
    let target = match &a.subcomplex {
        Some(name) => k.subcomplex(name).map_err(complex_failure)?,
        None => k,
    };
    Ok(json!({
        "subcomplex": a.subcomplex,
        "f_vector": target.f_vector(),
        "betti": simplicial_betti(&target),
    }))
}

fn deleted(a: &DeletedProductArgs) -> Result<Value, Failure> {
    let k = load_complex(&a.file)?;
    let d = deleted_product_capped(&k, a.max_dim);
    let involution = d.check_free_involution().map_err(|e| Failure::Invariant(e.to_string()))?;
    let mut out = json!({
        "max_dim": a.max_dim,
        "cell_counts": d.cell_counts(),
        "num_cells": d.num_cells(),
        "involution": involution,
    });
    if a.betti {
        out["betti"] = json!(d.betti().map_err(|e| Failure::Invariant(e.to_string()))?);
    }
    Ok(out)
}

fn coords_for(k: &SimplicialComplex, d: usize, src: CoordSource) -> Result<RationalCoordMap, Failure> {
    match src.seed {
        Some(seed) => seeded_coords(k, d, seed),
        None => moment_coords(k, d),
    }
    .map_err(geometry_failure)
}

fn source_name(src: CoordSource) -> &'static str {
    if src.seed.is_some() {
        "seeded"
    } else {
        "moment"
    }
}

fn vk(a: &VkArgs) -> Result<Value, Failure> {
    let k = load_complex(&a.complex)?;
    let coords = coords_for(&k, a.dim, a.coords)?;
    let r = van_kampen_number(&k, a.dim, &coords).map_err(geometry_failure)?;
    let mut out = json!({
        "v": r.v,
        "pairs_checked": r.pairs_checked,
        "crossings": r.crossings,
        "seed": a.coords.seed,
        "coords": source_name(a.coords),
        "certificate": coords.certificate(),
    });
    if a.ledger {
        out["ledger"] = json!(r.ledger);
    }
    Ok(out)
}

fn parity(a: &ParityArgs) -> Result<Value, Failure> {
    let k = load_complex(&a.complex)?;
    Ok(serde_json::to_value(check_extension_parity(&k, a.dim)).expect("report serializes"))
}

fn linking(a: &Lk2Args) -> Result<Value, Failure> {
    let k = load_complex(&a.complex)?;
    let coords = coords_for(&k, a.dim, a.coords)?;
    let ca = PLCycle::from_mark(&k, &a.a, &coords).map_err(geometry_failure)?;
    let cb = PLCycle::from_mark(&k, &a.b, &coords).map_err(geometry_failure)?;
    let apex_seed = a.apex_seed.or(a.coords.seed).unwrap_or(0);
    let r = lk2_seeded(&ca, &cb, apex_seed).map_err(geometry_failure)?;
    Ok(json!({
        "lk": r.lk,
        "dims": [ca.dim(), cb.dim()],
        "seed": a.coords.seed,
        "coords": source_name(a.coords),
        "apex_seed": r.seed,
        "apex": r.apex,
        "attempts": r.attempts,
    }))
}

fn sat(a: &SatArgs) -> Result<Value, Failure> {
    let phi = read_cnf(&a.file)?;
    let r = phi.brute_force_sat(a.max_sat_vars).map_err(|e| cnf_failure(&a.file, e))?;
    Ok(json!({
        "verdict": if r.satisfiable { "SAT" } else { "UNSAT" },
        "satisfiable": r.satisfiable,
        "witness": r.witness,
        "num_vars": phi.num_vars,
        "num_clauses": phi.num_clauses(),
    }))
}

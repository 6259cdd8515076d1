//! Built-in fixtures for `kphi verify`; no external files needed.

use kphi_core::gadgets::torus_prefix;
use kphi_core::geometry::{point, RationalCoordMap};
use kphi_core::{
    build_f, build_gadget, build_reduction, build_torus, check_extension_parity, lk2_seeded, moment_coords,
    moment_crossing_oracle, seeded_coords, simplicial_betti, van_kampen_number, CnfFormula, GadgetParams, PLCycle,
    Simplex, SimplicialComplex,
};
use serde::Serialize;
use serde_json::Value;

use crate::{Failure, Suite};

#[derive(Serialize)]
struct CheckResult {
    suite: &'static str,
    name: String,
    pass: bool,
    detail: String,
}

struct Checks {
    suite: &'static str,
    out: Vec<CheckResult>,
}

impl Checks {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, found: T, expected: T) {
        let pass = found == expected;
        let detail = if pass { format!("{found:?}") } else { format!("found {found:?}, expected {expected:?}") };
        self.out.push(CheckResult { suite: self.suite, name: name.into(), pass, detail });
    }
}

fn params(k: usize, ell: usize) -> GadgetParams {
    GadgetParams::new(k, ell).expect("fixture parameters are valid")
}

fn gadgets(c: &mut Checks) {
    let p = params(2, 1);
    c.eq("F(2,1) f-vector", build_f(p).f_vector(), vec![7, 21, 35]);
    c.eq("F(4,2) f-vector", build_f(params(4, 2)).f_vector(), vec![10, 45, 120, 210, 126]);
    for (w, fv) in [(3, vec![7, 21, 32]), (1, vec![7, 21, 34])] {
        let g = build_gadget(p, w).map(|g| g.f_vector());
        c.eq(format!("G(2,1) width {w} f-vector"), g.ok(), Some(fv));
    }
    for (k, ell) in [(2, 1), (4, 2)] {
        let pk = params(k, ell);
        let f = build_f(pk);
        let mut sphere = vec![0; k + 1];
        sphere[0] = 1;
        sphere[k] = 1;
        for j in 1..=3 {
            let b = f.subcomplex(&format!("S_{j}")).map(|s| simplicial_betti(&s)).ok();
            c.eq(format!("F({k},{ell}) S_{j} Betti"), b, Some(sphere.clone()));
            c.eq(format!("F({k},{ell}) sigma_{j} is a facet"), f.facets().contains(&pk.sigma(j)), true);
        }
    }
    let phi_neg = CnfFormula::from_ints(1, &[&[1], &[-1]]);
    match build_reduction(&phi_neg, p) {
        Ok(k) => {
            c.eq("K(Phi_neg) f-vector", k.f_vector(), vec![17, 63, 86]);
            c.eq("K(Phi_neg) dimension", k.dim(), Some(2));
            let tp = torus_prefix(&phi_neg.conflict_pairs()[0]);
            c.eq(
                "K(Phi_neg) dsigma_q coincides with a",
                k.mark_closure("g2/dsigma_1").ok(),
                k.mark_closure(&format!("{tp}a")).ok(),
            );
        }
        Err(e) => c.eq("K(Phi_neg) builds", Some(e.to_string()), None),
    }
    let two = CnfFormula::from_ints(3, &[&[1, 2, 3], &[-1, 2, -3]]);
    c.eq("two-clause conflicts", two.conflict_pairs().len(), 2);
    c.eq("two-clause face count", build_reduction(&two, p).map(|k| k.num_faces()).ok(), Some(205));
}

fn torus(c: &mut Checks) {
    match build_torus(1) {
        Ok(t) => {
            c.eq("T(1) f-vector", t.f_vector(), vec![9, 27, 18]);
            c.eq("T(1) Betti", simplicial_betti(&t), vec![1, 2, 1]);
            let a = t.mark_vertices("a").unwrap_or_default();
            let b = t.mark_vertices("b").unwrap_or_default();
            let shared: Vec<u32> = a.iter().filter(|v| b.contains(v)).copied().collect();
            c.eq("T(1) a and b meet in one vertex", shared, vec![0]);
        }
        Err(e) => c.eq("T(1) builds", Some(e.to_string()), None),
    }
    match build_torus(2) {
        Ok(t) => {
            c.eq("T(2) vertices", t.num_vertices(), 16);
            c.eq("T(2) top cells", t.faces(4).len(), 96);
            c.eq("T(2) Betti", simplicial_betti(&t), vec![1, 0, 2, 0, 1]);
        }
        Err(e) => c.eq("T(2) builds", Some(e.to_string()), None),
    }
}

fn complete_graph(n: u32) -> SimplicialComplex {
    let edges: Vec<Vec<u32>> = (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect();
    SimplicialComplex::from_facets((0..n).map(|i| format!("v{i}")), edges).expect("graph is valid")
}

fn vk(c: &mut Checks) {
    let fixtures =
        [("K5", complete_graph(5), 2), ("F(2,1)", build_f(params(2, 1)), 4), ("F(3,1)", build_f(params(3, 1)), 5)];
    for (name, k, d) in &fixtures {
        let moment = moment_coords(k, *d).and_then(|m| van_kampen_number(k, *d, &m)).map(|r| r.v).ok();
        c.eq(format!("{name}@{d} v under moment map"), moment, Some(1));
        c.eq(format!("{name}@{d} oracle agrees"), Some(moment_crossing_oracle(k, *d)), moment);
        let seeded: Vec<Option<u8>> = (1..=5)
            .map(|s| seeded_coords(k, *d, s).and_then(|m| van_kampen_number(k, *d, &m)).map(|r| r.v).ok())
            .collect();
        c.eq(format!("{name}@{d} v under seeds 1..5"), seeded, vec![Some(1); 5]);
        c.eq(format!("{name}@{d} extension parity"), check_extension_parity(k, *d).holds, true);
    }
    let path = SimplicialComplex::from_facets(["u", "v", "w"], vec![vec![0, 1], vec![1, 2]]).expect("path");
    let w = check_extension_parity(&path, 1).witness.map(|w| (w.sigma_extensions, w.tau_extensions));
    c.eq("path u-v-w parity witness", w, Some((0, 1)));
    for (shift, expected) in [(0, 1u8), (100, 0)] {
        c.eq(format!("triangle pair shifted by {shift}: lk2"), linked_pair(shift), Some((expected, expected)));
    }
}

fn linked_pair(shift: i64) -> Option<(u8, u8)> {
    let coords = RationalCoordMap::from_points(
        3,
        vec![
            point(&[2, 0, 0]),
            point(&[-1, 2, 0]),
            point(&[-1, -2, 0]),
            point(&[shift, 0, 2]),
            point(&[shift, 0, -2]),
            point(&[5 + shift, 1, 1]),
        ],
    )
    .ok()?;
    let tri = |a: u32, b: u32, c: u32| -> Option<Vec<Simplex>> {
        Some(vec![Simplex::new(vec![a, b]).ok()?, Simplex::new(vec![b, c]).ok()?, Simplex::new(vec![a, c]).ok()?])
    };
    let a = PLCycle::new(tri(0, 1, 2)?, &coords).ok()?;
    let b = PLCycle::new(tri(3, 4, 5)?, &coords).ok()?;
    Some((lk2_seeded(&a, &b, 1).ok()?.lk, lk2_seeded(&b, &a, 1).ok()?.lk))
}

type SuiteFn = fn(&mut Checks);

pub fn run(suite: Suite) -> Result<Value, Failure> {
    let plan: Vec<(&'static str, SuiteFn)> = [("gadgets", gadgets as SuiteFn), ("torus", torus), ("vk", vk)]
        .into_iter()
        .filter(|(name, _)| match suite {
            Suite::All => true,
            Suite::Gadgets => *name == "gadgets",
            Suite::Torus => *name == "torus",
            Suite::Vk => *name == "vk",
        })
        .collect();
    let mut results = Vec::new();
    for (name, f) in plan {
        let mut c = Checks { suite: name, out: Vec::new() };
        f(&mut c);
        results.extend(c.out);
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let summary = serde_json::json!({
        "passed": results.len() - failed.len(),
        "failed": failed.len(),
        "checks": &results,
    });
    if failed.is_empty() {
        Ok(summary)
    } else {
        Err(Failure::FailedChecks(format!("{} check(s) failed: {}", failed.len(), failed.join("; ")), summary))
    }
}

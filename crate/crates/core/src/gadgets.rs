//! Gadget complexes and the CNF-to-complex reduction K(Φ).
//!
//! For integers `0 <= ell < k` the auxiliary complex F has vertices
//! `1..=k+ell+3` plus a cone vertex `p`; its faces are the complete
//! `k`-skeleton on the numbered vertices together with every face of
//! dimension at most `ell + 1` containing `p`. The clause gadget removes the
//! open `(ell+1)`-simplices `sigma_j = {p} ∪ [ell+2] − {j}`. The torus
//! `S^ell × S^ell` is triangulated as the staircase product of two copies of
//! the boundary of an `(ell+1)`-simplex. K(Φ) glues one gadget per clause
//! and one torus per conflict pair along these spheres.
//!
//! Mark names: in F, `sigma_j`, `S_j`, `p`; in a gadget the removed
//! simplices become their boundaries under `dsigma_j`; the torus carries
//! `a` (meridian) and `b` (parallel).

use thiserror::Error;

use crate::cnf::{CnfFormula, ConflictPair};
use crate::complex::{combinations, glue, ComplexError, Identification, Simplex, SimplicialComplex, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("invalid parameters k={k}, ell={ell}: need k >= 2 and 0 <= ell < k")]
    InvalidParams { k: usize, ell: usize },
    #[error("k={k}, ell={ell} is outside the regime k = 2*ell")]
    NotTheoremRegime { k: usize, ell: usize },
    #[error("width {0} is not available for these parameters")]
    InvalidWidth(usize),
    #[error("torus needs ell >= 1, got {0}")]
    InvalidTorus(usize),
    #[error("formula is not normalized")]
    NotNormalized,
    #[error("conflict references sigma_{position} of clause {clause} which has width {width}")]
    PositionBeyondWidth { clause: usize, position: usize, width: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GadgetParams {
    k: usize,
    ell: usize,
}

impl GadgetParams {
    pub fn new(k: usize, ell: usize) -> Result<Self, GadgetError> {
        if k < 2 || ell >= k {
            return Err(GadgetError::InvalidParams { k, ell });
        }
        Ok(GadgetParams { k, ell })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Ambient dimension `k + ell + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.k + self.ell + 1
    }

    pub fn is_theorem_regime(&self) -> bool {
        self.k == 2 * self.ell
    }

    pub fn require_theorem_regime(&self) -> Result<(), GadgetError> {
        if self.is_theorem_regime() {
            Ok(())
        } else {
            Err(GadgetError::NotTheoremRegime { k: self.k, ell: self.ell })
        }
    }

    /// Number of numbered vertices, `k + ell + 3`.
    fn base_size(&self) -> usize {
        self.k + self.ell + 3
    }

    /// Id of the cone vertex; numbered vertex `i` has id `i - 1`.
    pub fn p_id(&self) -> VertexId {
        self.base_size() as VertexId
    }

    /// Number of simplices `sigma_j`: 3, or 2 when `ell = 0`.
    pub fn max_width(&self) -> usize {
        (self.ell + 2).min(3)
    }

    /// Vertex ids of `sigma_j`, `j` in `1..=max_width()`, ascending (so `p` last).
    pub fn sigma(&self, j: usize) -> Simplex {
        assert!((1..=self.max_width()).contains(&j));
        let mut v: Vec<VertexId> = (0..(self.ell + 2) as VertexId).filter(|&i| i as usize != j - 1).collect();
        v.push(self.p_id());
        Simplex::from_sorted(v)
    }

    /// Vertices of `sigma_j` in the canonical gluing order: `p` first, then
    /// the numbered vertices ascending.
    pub fn sigma_gluing_order(&self, j: usize) -> Vec<VertexId> {
        let s = self.sigma(j);
        let mut v = vec![self.p_id()];
        v.extend(s.vertices().iter().copied().filter(|&x| x != self.p_id()));
        v
    }
}

/// The auxiliary complex F with marks `sigma_1..3`, `S_1..3` and `p`.
pub fn build_f(params: GadgetParams) -> SimplicialComplex {
    let (k, ell, n) = (params.k, params.ell, params.base_size());
    let p = params.p_id();
    let base: Vec<VertexId> = (0..n as VertexId).collect();
    let mut generators: Vec<Vec<VertexId>> = combinations(&base, k + 1);
    generators.extend(combinations(&base, ell + 1).into_iter().map(|mut s| {
        s.push(p);
        s
    }));
    let labels = (1..=n).map(|i| i.to_string()).chain(std::iter::once("p".to_string()));
    let mut f = SimplicialComplex::from_facets(labels, generators)
        .expect("F is well formed")
        .with_name(format!("F({k},{ell})"))
        .with_mark("p", [Simplex::vertex(p)])
        .expect("p is a vertex");
    for j in 1..=params.max_width() {
        let sigma = params.sigma(j);
        let outside: Vec<VertexId> = base.iter().copied().filter(|v| !sigma.contains(*v)).collect();
        debug_assert_eq!(outside.len(), k + 2);
        let sphere = combinations(&outside, k + 1).into_iter().map(Simplex::from_sorted);
        f = f
            .with_mark(format!("sigma_{j}"), [sigma])
            .and_then(|f| f.with_mark(format!("S_{j}"), sphere))
            .expect("sigma_j and S_j are faces of F");
    }
    f
}

/// Clause gadget: F with the open simplices `sigma_1..sigma_width` removed.
pub fn build_gadget(params: GadgetParams, width: usize) -> Result<SimplicialComplex, GadgetError> {
    if !(1..=params.max_width()).contains(&width) {
        return Err(GadgetError::InvalidWidth(width));
    }
    let f = build_f(params);
    let removed: Vec<Simplex> = (1..=width).map(|j| params.sigma(j)).collect();
    let mut g = f.remove_facets(&removed)?;
    for j in 1..=width {
        let boundary = g.mark(&format!("sigma_{j}"))?.to_vec();
        g = g.without_mark(&format!("sigma_{j}")).with_mark(format!("dsigma_{j}"), boundary)?;
    }
    Ok(g.with_name(format!("G({},{},{width})", params.k, params.ell)))
}

/// Staircase triangulation of `∂Δ^{ell+1} × ∂Δ^{ell+1}` with marks
/// `a = ∂Δ^{ell+1} × {0}` and `b = {0} × ∂Δ^{ell+1}`, meeting in `(0,0)`.
///
/// Vertex `(u, v)` has id `u * (ell + 2) + v`.
pub fn build_torus(ell: usize) -> Result<SimplicialComplex, GadgetError> {
    if ell < 1 {
        return Err(GadgetError::InvalidTorus(ell));
    }
    let n = ell + 2;
    let id = |u: usize, v: usize| (u * n + v) as VertexId;
    let paths = staircase_paths(ell);
    let mut facets = Vec::with_capacity(n * n * paths.len());
    for skip_u in 0..n {
        let fu: Vec<usize> = (0..n).filter(|&u| u != skip_u).collect();
        for skip_v in 0..n {
            let fv: Vec<usize> = (0..n).filter(|&v| v != skip_v).collect();
            for path in &paths {
                facets.push(path.iter().map(|&(i, j)| id(fu[i], fv[j])).collect::<Vec<_>>());
            }
        }
    }
    let labels = (0..n).flat_map(|u| (0..n).map(move |v| format!("u{u}v{v}")));
    let base: Vec<usize> = (0..n).collect();
    let meridian =
        combinations(&base, ell + 1).into_iter().map(|f| Simplex::from_sorted(f.iter().map(|&u| id(u, 0)).collect()));
    let parallel =
        combinations(&base, ell + 1).into_iter().map(|f| Simplex::from_sorted(f.iter().map(|&v| id(0, v)).collect()));
    Ok(SimplicialComplex::from_facets(labels, facets)?
        .with_name(format!("T({ell})"))
        .with_mark("a", meridian)?
        .with_mark("b", parallel)?)
}

/// Monotone lattice paths from (0,0) to (m,m) as vertex sequences.
fn staircase_paths(m: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut path = vec![(0, 0)];
    fn walk(m: usize, path: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let (i, j) = *path.last().unwrap();
        if i == m && j == m {
            out.push(path.clone());
            return;
        }
        if i < m {
            path.push((i + 1, j));
            walk(m, path, out);
            path.pop();
        }
        if j < m {
            path.push((i, j + 1));
            walk(m, path, out);
            path.pop();
        }
    }
    walk(m, &mut path, &mut out);
    out
}

/// Mark and label prefix of clause gadget `s` (1-based).
pub fn gadget_prefix(s: usize) -> String {
    format!("g{s}/")
}

/// Mark and label prefix of the torus attached to a conflict pair.
pub fn torus_prefix(pair: &ConflictPair) -> String {
    format!("t{}.{}-{}.{}/", pair.q.clause, pair.q.position, pair.r.clause, pair.r.position)
}

/// Builds K(Φ) from a normalized formula.
///
/// Part order is `G_1..G_t` followed by one torus per conflict pair in
/// `conflict_pairs` order. For `(q, r)` the boundary of `sigma_q` is glued
/// to the torus meridian `a` and the boundary of `sigma_r` to the parallel
/// `b`, matching `p, 1, 2, ...` with the sphere's vertices in ascending
/// coordinate order.
pub fn build_reduction(phi: &CnfFormula, params: GadgetParams) -> Result<SimplicialComplex, GadgetError> {
    if !phi.is_normalized() {
        return Err(GadgetError::NotNormalized);
    }
    let pairs = phi.conflict_pairs();
    let t = phi.num_clauses();
    let mut gadgets: [Option<SimplicialComplex>; 3] = [None, None, None];
    let mut parts = Vec::with_capacity(t + pairs.len());
    for (s, clause) in phi.clauses.iter().enumerate() {
        let w = clause.width();
        if gadgets[w - 1].is_none() {
            gadgets[w - 1] = Some(build_gadget(params, w)?);
        }
        parts.push(gadgets[w - 1].as_ref().unwrap().prefixed(&gadget_prefix(s + 1)));
    }
    if pairs.is_empty() {
        return Ok(glue(&parts, &[])?.with_name("K(Phi)"));
    }

    let torus = build_torus(params.ell)?;
    let n = params.ell + 2;
    let meridian_order: Vec<VertexId> = (0..n).map(|u| (u * n) as VertexId).collect();
    let parallel_order: Vec<VertexId> = (0..n as VertexId).collect();
    let mut idents = Vec::with_capacity(2 * pairs.len());
    for pair in &pairs {
        for end in [pair.q, pair.r] {
            let width = phi.clauses[end.clause - 1].width();
            if end.position > width {
                return Err(GadgetError::PositionBeyondWidth { clause: end.clause, position: end.position, width });
            }
        }
        let tp = torus_prefix(pair);
        let ti = parts.len();
        parts.push(torus.prefixed(&tp));
        for (end, mark, order) in [(pair.q, "a", &meridian_order), (pair.r, "b", &parallel_order)] {
            let gluing = params.sigma_gluing_order(end.position);
            idents.push(Identification {
                part_a: end.clause - 1,
                mark_a: format!("{}dsigma_{}", gadget_prefix(end.clause), end.position),
                part_b: ti,
                mark_b: format!("{tp}{mark}"),
                pairs: gluing.into_iter().zip(order.iter().copied()).collect(),
            });
        }
    }
    Ok(glue(&parts, &idents)?.with_name("K(Phi)"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::simplicial_betti;

    fn p(k: usize, ell: usize) -> GadgetParams {
        GadgetParams::new(k, ell).unwrap()
    }

    /// Binomial coefficient, used as an independent count of F's faces.
    fn binom(n: usize, r: usize) -> usize {
        if r > n {
            return 0;
        }
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn f_vector_by_formula(k: usize, ell: usize) -> Vec<usize> {
        let n = k + ell + 3;
        (0..=k).map(|d| binom(n, d + 1) + if d <= ell + 1 { binom(n, d) } else { 0 }).collect()
    }

    #[test]
    fn params_validation() {
        assert!(GadgetParams::new(2, 2).is_err());
        assert!(GadgetParams::new(1, 0).is_err());
        assert!(p(4, 2).require_theorem_regime().is_ok());
        assert!(p(3, 1).require_theorem_regime().is_err());
        assert_eq!(p(4, 2).ambient_dim(), 7);
    }

    #[test]
    fn f_vectors_match_binomial_counts() {
        assert_eq!(build_f(p(2, 1)).f_vector(), vec![7, 21, 35]);
        assert_eq!(build_f(p(4, 2)).f_vector(), vec![10, 45, 120, 210, 126]);
        for (k, ell) in [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (4, 1), (4, 2)] {
            assert_eq!(build_f(p(k, ell)).f_vector(), f_vector_by_formula(k, ell), "({k},{ell})");
        }
    }

    #[test]
    fn sigma_and_complementary_sphere() {
        let f = build_f(p(2, 1));
        let sigma1: Vec<&str> = f.mark("sigma_1").unwrap()[0].vertices().iter().map(|&v| f.label(v)).collect();
        assert_eq!(sigma1, vec!["2", "3", "p"]);
        let s1 = f.subcomplex("S_1").unwrap();
        let labels: Vec<&str> = s1.vertices().iter().map(|v| v.label.as_str()).collect();
        assert_eq!(labels, vec!["1", "4", "5", "6"]);
        assert_eq!(s1.f_vector(), vec![4, 6, 4]);
        assert_eq!(simplicial_betti(&s1), vec![1, 0, 1]);
    }

    #[test]
    fn sigmas_are_facets() {
        for (k, ell) in [(2, 0), (2, 1), (3, 1), (4, 2), (5, 3)] {
            let params = p(k, ell);
            let f = build_f(params);
            for j in 1..=params.max_width() {
                let s = params.sigma(j);
                assert_eq!(s.dim(), ell + 1);
                assert!(f.facets().contains(&s));
            }
        }
    }

    #[test]
    fn gadget_f_vectors() {
        assert_eq!(build_gadget(p(2, 1), 3).unwrap().f_vector(), vec![7, 21, 32]);
        assert_eq!(build_gadget(p(2, 1), 1).unwrap().f_vector(), vec![7, 21, 34]);
        assert!(build_gadget(p(2, 1), 4).is_err());
    }

    #[test]
    fn gadget_keeps_sigma_boundaries() {
        for (k, ell) in [(2, 1), (3, 1), (4, 2)] {
            let params = p(k, ell);
            let g = build_gadget(params, 3).unwrap();
            for j in 1..=params.max_width() {
                let s = params.sigma(j);
                assert!(!g.contains(&s));
                assert!(s.boundary().all(|b| g.contains(&b)));
                assert_eq!(g.mark(&format!("dsigma_{j}")).unwrap().len(), ell + 2);
            }
            assert!(g.check_invariants().is_ok());
        }
    }

    #[test]
    fn torus_one() {
        let t = build_torus(1).unwrap();
        assert_eq!(t.f_vector(), vec![9, 27, 18]);
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(simplicial_betti(&t), vec![1, 2, 1]);
        let a = t.mark_closure("a").unwrap();
        let b = t.mark_closure("b").unwrap();
        let common: Vec<_> = a.intersection(&b).collect();
        assert_eq!(common, vec![&Simplex::vertex(0)]);
        assert_eq!(t.subcomplex("a").unwrap().f_vector(), vec![3, 3]);
        assert_eq!(simplicial_betti(&t.subcomplex("b").unwrap()), vec![1, 1]);
    }

    #[test]
    fn torus_two() {
        let t = build_torus(2).unwrap();
        assert_eq!(t.num_vertices(), 16);
        assert_eq!(t.faces(4).len(), 96);
        assert_eq!(t.dim(), Some(4));
        assert_eq!(simplicial_betti(&t), vec![1, 0, 2, 0, 1]);
    }

    #[test]
    fn torus_rejects_zero() {
        assert_eq!(build_torus(0), Err(GadgetError::InvalidTorus(0)));
    }

    #[test]
    fn reduction_phi_neg() {
        let phi = CnfFormula::from_ints(1, &[&[1], &[-1]]);
        let k = build_reduction(&phi, p(2, 1)).unwrap();
        assert_eq!(k.f_vector(), vec![17, 63, 86]);
        assert_eq!(k.dim(), Some(2));
        assert_eq!(k.mark_closure("g2/dsigma_1").unwrap(), k.mark_closure("t2.1-1.1/a").unwrap());
        assert_eq!(k.mark_closure("g1/dsigma_1").unwrap(), k.mark_closure("t2.1-1.1/b").unwrap());
        assert!(k.check_invariants().is_ok());
    }

    #[test]
    fn reduction_without_conflicts_is_disjoint_union() {
        let phi = CnfFormula::from_ints(4, &[&[1, 2, 3], &[2, 3, 4]]);
        let k = build_reduction(&phi, p(2, 1)).unwrap();
        assert_eq!(k.f_vector(), vec![14, 42, 64]);
    }

    #[test]
    fn reduction_requires_normalized() {
        let phi = CnfFormula::from_ints(1, &[&[1, -1]]);
        assert_eq!(build_reduction(&phi, p(2, 1)), Err(GadgetError::NotNormalized));
    }

    #[test]
    fn staircase_counts() {
        assert_eq!(staircase_paths(1).len(), 2);
        assert_eq!(staircase_paths(2).len(), 6);
        assert_eq!(staircase_paths(3).len(), 20);
    }
}

//! Simplicial complexes for the 3-CNF reduction: gadget construction,
//! mod-2 homology, deleted products, and exact van Kampen and linking
//! computations.

pub mod cnf;
pub mod complex;
pub mod delprod;
pub mod gadgets;
pub mod geometry;
pub mod gf2;

pub use cnf::{
    parse_dimacs, read_dimacs, Clause, CnfError, CnfFormula, ConflictPair, Literal, LiteralPos, SatResult,
    DEFAULT_MAX_SAT_VARS,
};
pub use complex::{glue, ComplexError, Identification, Simplex, SimplicialComplex, Vertex, VertexId};
pub use delprod::{
    deleted_product, deleted_product_capped, DelProdError, DeletedProductComplex, InvolutionReport, ProductCell,
};
pub use gadgets::{build_f, build_gadget, build_reduction, build_torus, GadgetError, GadgetParams};
pub use geometry::{
    check_extension_parity, lk2, lk2_seeded, moment_coords, moment_crossing_oracle, pair_crossing, seeded_coords,
    van_kampen_number, GeometryError, PLCycle, RationalCoordMap, RationalPoint,
};
pub use gf2::{betti_mod2, boundary_complex, rank_gf2, simplicial_betti, ChainComplexZ2, Gf2Error, Gf2Matrix};

//! Rational preperiodic structures: bounded search, reference catalogs and
//! the classifiers for maps with nontrivial automorphisms.

pub mod catalog;
pub mod graph;
pub mod roots_of_unity;
pub mod search;
pub mod twists;

pub use catalog::{by_id, catalog, family, match_structure, Family, StructureClass, CATALOG};
pub use graph::{FunctionalGraph, TypeTag};
pub use roots_of_unity::{
    figure_graph, orders_up_to_degree, power_map_graph, power_map_low_degree_preperiodic, PowerVariant,
    RootOfUnityPoint, INVERSE_SQUARE_FIGURES, SQUARE_FIGURE,
};
pub use search::{rational_preperiodic_graph, PreperParams, PreperResult};
pub use twists::{
    classify_psi1_twist, classify_psi2_map, is_rational_cube, psi1_map, psi1_square_class, Classification,
    Psi1Class, Psi1Classification, Psi2Spec,
};

//! Arithmetic of a single fibre conic: solubility, point search, parametrization
//! and exact counts of points of bounded height.

mod bsj;
mod count;
mod form;
mod param;
mod solve;

pub use bsj::{bsj_diagnostic, BsjDiagnostic};
pub use count::{box_count_all, box_points, count_fibre, fibre_box_i128, FibreCounter, Strategy};
pub use form::TernaryForm;
pub use param::{parametrize, ConicParam};
pub use solve::{
    diagonalize, find_point, find_point_certified, is_soluble, local_profile, local_solubility, Diagonalization,
    PointCertificate,
};

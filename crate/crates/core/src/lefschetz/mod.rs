//! Derivative identities, anisotropy certificates and Lefschetz checks.

mod anisotropy;
mod identity;
mod maps;
mod rank;

pub use anisotropy::{
    certify_anisotropy, face_class, find_witness, middle_degree, random_class, random_nonzero_class,
    AnisotropyCertificate, AnisotropyTrial,
};

pub use identity::{
    check_general_identity, check_main_identity, general_identity_sides, identity_degree, main_identity_sides,
    vanishing_value, GeneralIdentityCheck, GeneralSides, GeneralTrial, IdentityCheck, IdentityKind, IdentityTrial,
    Split,
};
pub use maps::{
    cone_transfer, star_multiplication, suspension_lefschetz_element, ConeDirection, ConeTransfer, StarDegree,
    StarReport, SuspensionElement,
};
pub use rank::{
    g_report, power_ranks, random_element, square_pattern, strong_lefschetz_check, strong_maps, weak_lefschetz_check,
    weak_maps, DegreeRank, ElementChoice, GReport, LefschetzMode, LefschetzReport, LefschetzTrial,
};

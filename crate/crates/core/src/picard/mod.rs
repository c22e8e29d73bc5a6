//! Picard groups of 1-motives as groups of descent data, and the map `Phi : Pic -> Hom(M, M*)`.

mod abelian;
mod kummer;

pub use abelian::{
    canonicalize, check_abelian_sequence, cocycle_check_abelian, commutator, descent_functions, equivalent, phi_abelian, transport, valid_degree_generator,
    validate, AbelianCocycleWitness, AbelianDatum, AbelianExactness, AbelianPic, PhiTilde,
};
pub use kummer::{
    beta_star, check_devissage_kernel, cocycle_check, constant_part, datum_from_pointwise, delta, delta_function, h_from_delta,
    hom_group, lambda_group, pairing_form, phi, pic_group, psi, section_s, symmetry_defect, theta, twist, CocycleReport,
    CocycleWitness, DevissageReport, KummerDatum, KummerPic, LambdaGroup, PsiCertificate,
};

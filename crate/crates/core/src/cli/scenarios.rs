//! Scenario configs shipped with the crate.

macro_rules! scenario {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../../scenarios/", $name, ".json")))
    };
}

pub const BUILTIN: &[(&str, &str)] = &[
    scenario!("heat_gaussian"),
    scenario!("heat_texp"),
    scenario!("heat_images"),
    scenario!("interval_gaussian"),
    scenario!("interval_texp"),
    scenario!("advected_c_plus1"),
    scenario!("advected_c_minus1"),
    scenario!("kdv1_decaying_cos"),
    scenario!("kdv1_texp"),
    scenario!("kdv2_exp_cos"),
    scenario!("kdv2_incompatible"),
    scenario!("heat_prob1"),
    scenario!("heat_prob1_homogeneous"),
    scenario!("heat_prob_N1"),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

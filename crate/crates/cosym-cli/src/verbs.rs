//! The verb table: which public library operation is reachable through
//! which subcommand. Kept as data so a test can assert the mapping is a
//! partition of the public operation list.

pub const VERB_OPERATIONS: &[(&str, &[&str])] = &[
    (
        "check",
        &[
            "new_lie_algebra",
            "bracket",
            "jacobi_defect",
            "wedge",
            "is_top_nonzero",
            "check_almost_cosymplectic",
            "check_symplectic",
            "check_acm",
        ],
    ),
    ("reeb", &["reeb_vector", "interior"]),
    ("alpha", &["detect_alpha", "cartan_d", "alpha_for_derivation"]),
    ("der", &["derivation_space", "is_derivation", "ad"]),
    (
        "ist",
        &[
            "ist_derivation_space",
            "commuting_ist_derivation_space",
            "is_ist",
            "f_form",
            "ist_defect",
        ],
    ),
    ("extend", &["extend", "extend_acm", "extension_algebra"]),
    ("reduce", &["reduce", "reduce_acm", "restrict_to_subspace"]),
    (
        "classify",
        &[
            "classify",
            "fundamental_form",
            "nijenhuis",
            "normality_defect",
            "lie_derivative_phi",
            "lie_derivative_metric",
            "killing_conditions",
        ],
    ),
    ("iso", &["verify_iso_even", "verify_iso_odd", "pullback", "eval"]),
    ("lift", &["lift_iso"]),
    ("catalog", &["catalog_get"]),
    ("verify", &["verify_entry", "verify_table_row"]),
    ("polarize", &["polarize"]),
];

/// The public operations the library exposes, in one flat list.
pub const PUBLIC_OPERATIONS: &[&str] = &[
    "new_lie_algebra",
    "bracket",
    "jacobi_defect",
    "ad",
    "is_derivation",
    "derivation_space",
    "restrict_to_subspace",
    "wedge",
    "cartan_d",
    "interior",
    "eval",
    "pullback",
    "is_top_nonzero",
    "check_almost_cosymplectic",
    "reeb_vector",
    "detect_alpha",
    "check_symplectic",
    "f_form",
    "is_ist",
    "ist_defect",
    "alpha_for_derivation",
    "ist_derivation_space",
    "commuting_ist_derivation_space",
    "check_acm",
    "fundamental_form",
    "nijenhuis",
    "normality_defect",
    "lie_derivative_phi",
    "lie_derivative_metric",
    "killing_conditions",
    "classify",
    "polarize",
    "extend",
    "extend_acm",
    "extension_algebra",
    "reduce",
    "reduce_acm",
    "verify_iso_even",
    "lift_iso",
    "verify_iso_odd",
    "catalog_get",
    "verify_entry",
    "verify_table_row",
];

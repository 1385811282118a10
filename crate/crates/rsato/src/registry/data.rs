//! Embedded group files, in table order.

pub const BUILTIN_SOURCES: &[(&str, &str)] = &[
    ("14+7", include_str!("builtin/14p7.grp")),
    ("14+14", include_str!("builtin/14p14.grp")),
    ("15+15", include_str!("builtin/15p15.grp")),
    ("16+", include_str!("builtin/16p.grp")),
    ("20+20", include_str!("builtin/20p20.grp")),
    ("21+21", include_str!("builtin/21p21.grp")),
    ("22+11", include_str!("builtin/22p11.grp")),
    ("26+26", include_str!("builtin/26p26.grp")),
    ("35+35", include_str!("builtin/35p35.grp")),
    ("39+39", include_str!("builtin/39p39.grp")),
];

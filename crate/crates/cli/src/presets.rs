//! Named configs shipped with the binary, one per reference experiment.

/// `(name, commands it is meant for, TOML text)`.
pub const PRESETS: &[(&str, &[&str], &str)] = &[
    ("harmonic_ball", &["solve"], include_str!("../presets/harmonic_ball.toml")),
    ("source_ball", &["solve"], include_str!("../presets/source_ball.toml")),
    ("sector", &["profile", "certify", "constants"], include_str!("../presets/sector.toml")),
    ("ball_profile", &["profile"], include_str!("../presets/ball_profile.toml")),
    ("fractional_halfball", &["solve"], include_str!("../presets/fractional_halfball.toml")),
    ("geometry_cone", &["check-geometry"], include_str!("../presets/geometry_cone.toml")),
    ("geometry_ball", &["check-geometry"], include_str!("../presets/geometry_ball.toml")),
    ("geometry_halfball", &["check-geometry"], include_str!("../presets/geometry_halfball.toml")),
    ("perron_harmonic", &["perron"], include_str!("../presets/perron_harmonic.toml")),
    ("perron_geometric", &["perron"], include_str!("../presets/perron_geometric.toml")),
];

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.0 == name).map(|p| p.2)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.0).collect()
}

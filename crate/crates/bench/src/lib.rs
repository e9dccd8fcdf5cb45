//! Fixtures shared by the benchmarks: the example networks under `specs/`.

use coauto::netspec::{build_network, parse_spec};
use coauto::sim::Network;

pub const LF_AC: &str = include_str!("../../../specs/lf_ac.json");
pub const DREAMS: &str = include_str!("../../../specs/dreams.json");
pub const ROUTER: &str = include_str!("../../../specs/router.json");
pub const LINDA: &str = include_str!("../../../specs/linda_example.json");

/// Builds the network described by `spec`. Panics on a malformed fixture.
pub fn network(spec: &str) -> Network {
    let spec = parse_spec(spec).expect("fixture parses");
    build_network(&spec).expect("fixture builds").network
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for s in [LF_AC, DREAMS, ROUTER, LINDA] {
            assert!(!network(s).is_empty());
        }
    }
}

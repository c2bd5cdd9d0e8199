//! Bundled demo scenarios. Five ship as JSON files (doubling as schema
//! examples); the Brownian box is generated, since hand-writing 101 objects
//! helps nobody.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scenario::{
    LaunchSpec, MaterialSpec, ObjectSpec, RunLength, Scenario, SizeSpec,
};
use primworld::MaterialKind;

pub const DEMO_NAMES: [&str; 6] =
    ["freefall", "buoyancy", "airtrack", "bumpers", "cannon", "brownian"];

const BROWNIAN_SEED: u64 = 16;

/// Resolves a demo name to its scenario. `seed` feeds the generated demos;
/// for the file-based ones the region seed is overridden at build time.
pub fn scenario(name: &str, seed: Option<u64>) -> Result<Scenario, String> {
    let text = match name {
        "freefall" => include_str!("../assets/freefall.json"),
        "buoyancy" => include_str!("../assets/buoyancy.json"),
        "airtrack" => include_str!("../assets/airtrack.json"),
        "bumpers" => include_str!("../assets/bumpers.json"),
        "cannon" => include_str!("../assets/cannon.json"),
        "brownian" => return Ok(brownian(seed.unwrap_or(BROWNIAN_SEED))),
        _ => {
            return Err(format!(
                "unknown demo {name:?}; expected one of {}",
                DEMO_NAMES.join(", ")
            ))
        }
    };
    Scenario::from_json(text).map_err(|e| format!("bundled demo {name}: {e}"))
}

/// A closed box of 100 small spheres jittering around one large one, all
/// elastic, weightless, and confined to a plane. Slow enough that nothing
/// reaches a region wall within the run, so the contents exchange momentum
/// only among themselves.
fn brownian(seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elastic = MaterialSpec::Custom {
        kind: MaterialKind::Rubber,
        restitution: 1.0,
        friction: 0.0,
    };

    let mut objects = vec![ObjectSpec {
        name: Some("pollen".to_string()),
        shape: primworld::ShapeKind::Sphere,
        size: SizeSpec::Uniform(8.0),
        material: elastic.clone(),
        position: [128.0, 128.0, 5.0],
        physical: true,
        buoyancy: 1.0,
        gravity_multiplier: 1.0,
        law: None,
        impulse: None,
        launch: None,
        script: None,
        script_source: None,
    }];
    for i in 0..10 {
        for j in 0..10 {
            let heading = rng.random_range(0.0..TAU);
            objects.push(ObjectSpec {
                name: Some(format!("mote-{}{}", i, j)),
                shape: primworld::ShapeKind::Sphere,
                size: SizeSpec::Uniform(2.0),
                material: elastic.clone(),
                position: [92.0 + 8.0 * i as f64, 92.0 + 8.0 * j as f64, 5.0],
                physical: true,
                buoyancy: 1.0,
                gravity_multiplier: 1.0,
                law: None,
                impulse: None,
                launch: Some(LaunchSpec {
                    speed: 0.12,
                    direction: [heading.cos(), heading.sin(), 0.0],
                }),
                script: None,
                script_source: None,
            });
        }
    }

    Scenario {
        region: primworld::RegionConfig {
            seed,
            wind_enabled: false,
            ..primworld::RegionConfig::default()
        },
        objects,
        run: RunLength::Steps(10_000),
        sample_every: Some(50),
        touches: Vec::new(),
    }
}

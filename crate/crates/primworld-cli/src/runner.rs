//! Drives a built scenario tick by tick, collecting a trajectory CSV and a
//! run summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use primworld::{ObjectId, Simulation};
use serde::Serialize;

use crate::scenario::{BuiltScenario, Scenario};

pub const CSV_HEADER: &str = "t,object_id,px,py,pz,vx,vy,vz,energy,dilation";

/// Quantity columns tracked per object in the summary, in CSV order.
const QUANTITIES: [&str; 7] = ["px", "py", "pz", "vx", "vy", "vz", "energy"];

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuantityStats {
    pub min: f64,
    pub max: f64,
    #[serde(rename = "final")]
    pub last: f64,
}

impl QuantityStats {
    fn seed(v: f64) -> QuantityStats {
        QuantityStats { min: v, max: v, last: v }
    }

    fn update(&mut self, v: f64) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        self.last = v;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObjectSummary {
    pub name: Option<String>,
    pub quantities: BTreeMap<&'static str, QuantityStats>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub ticks: u64,
    pub sim_time: f64,
    pub mean_dilation: f64,
    pub pair_collisions: u64,
    pub ground_collisions: u64,
    pub script_ops: u64,
    pub faults: Vec<String>,
    pub objects: BTreeMap<u64, ObjectSummary>,
}

pub struct RunOutput {
    pub csv: String,
    pub summary: Summary,
}

/// Runs the scenario to completion. Rows are emitted at t = 0, after every
/// `sample_every`-th tick, and after the final tick; stats cover every tick.
pub fn run(scenario: &Scenario, built: BuiltScenario, sample_every: u64) -> RunOutput {
    let BuiltScenario { mut sim, names } = built;
    let total = scenario.total_ticks();

    let mut csv = String::with_capacity(4096);
    csv.push_str(CSV_HEADER);
    csv.push('\n');

    let mut stats: BTreeMap<ObjectId, BTreeMap<&'static str, QuantityStats>> = BTreeMap::new();
    let mut dilation_sum = 0.0;
    let mut pair_collisions = 0u64;
    let mut ground_collisions = 0u64;
    let mut script_ops = 0u64;
    let mut faults = Vec::new();

    record_all(&mut sim, &mut stats, Some(&mut csv));

    for k in 1..=total {
        let report = sim.tick();
        dilation_sum += report.step.dilation;
        pair_collisions += u64::from(report.step.pair_collisions);
        ground_collisions += u64::from(report.step.ground_collisions);
        script_ops += report.script.ops;
        faults.extend(report.script.faults.iter().map(|f| f.to_string()));
        let sampled = k % sample_every == 0 || k == total;
        record_all(&mut sim, &mut stats, sampled.then_some(&mut csv));
    }

    let objects = stats
        .into_iter()
        .map(|(id, quantities)| {
            let name = names.get(&id).cloned().flatten();
            (id.0, ObjectSummary { name, quantities })
        })
        .collect();

    let summary = Summary {
        ticks: total,
        sim_time: sim.world().clock().sim_time,
        mean_dilation: if total == 0 { 1.0 } else { dilation_sum / total as f64 },
        pair_collisions,
        ground_collisions,
        script_ops,
        faults,
        objects,
    };
    RunOutput { csv, summary }
}

fn record_all(
    sim: &mut Simulation,
    stats: &mut BTreeMap<ObjectId, BTreeMap<&'static str, QuantityStats>>,
    mut csv: Option<&mut String>,
) {
    let world = sim.world();
    let clock = world.clock();
    let ids: Vec<ObjectId> = world.ids().collect();
    for id in ids {
        let d = world.dynamics(id).expect("listed id");
        let row = [
            d.position.x,
            d.position.y,
            d.position.z,
            d.velocity.x,
            d.velocity.y,
            d.velocity.z,
            d.energy,
        ];
        let per_object = stats.entry(id).or_default();
        for (name, value) in QUANTITIES.iter().zip(row) {
            per_object
                .entry(name)
                .and_modify(|s| s.update(value))
                .or_insert_with(|| QuantityStats::seed(value));
        }
        if let Some(csv) = csv.as_mut() {
            write!(csv, "{},{}", sig9(clock.sim_time), id.0).unwrap();
            for value in row {
                write!(csv, ",{}", sig9(value)).unwrap();
            }
            writeln!(csv, ",{}", sig9(clock.dilation)).unwrap();
        }
    }
}

/// Renders a float with 9 significant digits, positional where the exponent
/// allows (the shape of C's `%.9g`), trailing zeros trimmed.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exponent) = sci.split_once('e').expect("{:e} always carries an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    if (-4..9).contains(&exponent) {
        let decimals = (8 - exponent).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        let trimmed = fixed.trim_end_matches('0').trim_end_matches('.');
        if trimmed == "-0" { "0".to_string() } else { trimmed.to_string() }
    } else {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

impl Summary {
    /// Human-readable digest printed after a run.
    pub fn text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "ran {} ticks to t = {} s; mean dilation {}; collisions: {} pair, {} ground; script ops: {}",
            self.ticks,
            sig9(self.sim_time),
            sig9(self.mean_dilation),
            self.pair_collisions,
            self.ground_collisions,
            self.script_ops,
        )
        .unwrap();
        for (id, obj) in &self.objects {
            let name = obj.name.as_deref().unwrap_or("-");
            let q = &obj.quantities;
            writeln!(
                out,
                "object {id} ({name}): final p = ({}, {}, {}), v = ({}, {}, {}), energy {}; vx range [{}, {}]",
                sig9(q["px"].last),
                sig9(q["py"].last),
                sig9(q["pz"].last),
                sig9(q["vx"].last),
                sig9(q["vy"].last),
                sig9(q["vz"].last),
                sig9(q["energy"].last),
                sig9(q["vx"].min),
                sig9(q["vx"].max),
            )
            .unwrap();
        }
        for fault in &self.faults {
            writeln!(out, "script fault: {fault}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_is_nine_significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(-0.0), "0");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(-2.5), "-2.5");
        assert_eq!(sig9(1.0 / 45.0), "0.0222222222");
        assert_eq!(sig9(123456789.4), "123456789");
        assert_eq!(sig9(1234567894.0), "1.23456789e9");
        assert_eq!(sig9(0.00012345678949), "0.000123456789");
        assert_eq!(sig9(1.2345e-7), "1.2345e-7");
        assert_eq!(sig9(-9.8), "-9.8");
        // Rounding that carries into a new leading digit.
        assert_eq!(sig9(9.999999999), "10");
        assert_eq!(sig9(0.99999999999), "1");
    }
}
